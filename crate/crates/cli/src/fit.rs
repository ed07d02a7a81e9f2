//! Exact polynomial fits by forward differences.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Q = Ratio<i128>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degree {
    /// Differences of order `degree + 1` vanish. `verified` is false when
    /// that order has no entries left to check.
    Exact { degree: usize, verified: bool },
    /// No vanishing order within the sweep.
    AtLeast(usize),
}

impl Degree {
    pub fn value(&self) -> Option<usize> {
        match self {
            Degree::Exact { degree, .. } => Some(*degree),
            Degree::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Exact { degree, verified: true } => write!(f, "{degree}"),
            Degree::Exact { degree, verified: false } => write!(f, "{degree} (unverified)"),
            Degree::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fit {
    pub degree: Degree,
    /// Power-basis coefficients, constant term first.
    pub coefficients: Vec<Q>,
}

impl Fit {
    pub fn eval(&self, x: i64) -> Q {
        let x = Q::from_integer(x as i128);
        self.coefficients.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    /// `2n^2 + 1/2n - 3` style rendering in the variable `var`.
    pub fn render(&self, var: &str) -> String {
        let mut terms = Vec::new();
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let coef = if mag.is_one() && k > 0 { String::new() } else { mag.to_string() };
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let sign = if *c < Q::zero() { "-" } else { "+" };
            terms.push((sign, format!("{coef}{mono}")));
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (sign, t)) in terms.iter().enumerate() {
            match (i, *sign) {
                (0, "-") => s.push('-'),
                (0, _) => {}
                (_, sg) => s.push_str(&format!(" {sg} ")),
            }
            s.push_str(t);
        }
        s
    }
}

/// Fits the lowest-degree polynomial through points at consecutive integer
/// abscissae starting at `x0`.
pub fn fit_polynomial(x0: i64, ys: &[u64]) -> Fit {
    let mut rows: Vec<Vec<i128>> = vec![ys.iter().map(|&y| y as i128).collect()];
    while rows.last().unwrap().len() > 1 {
        let r = rows.last().unwrap();
        rows.push(r.windows(2).map(|w| w[1] - w[0]).collect());
    }
    let degree = (0..rows.len())
        .find(|&d| rows.get(d + 1).is_none_or(|r| r.iter().all(|v| *v == 0)))
        .unwrap_or(rows.len());
    let verified = rows.get(degree + 1).is_some_and(|r| !r.is_empty());
    let degree = if ys.is_empty() { Degree::AtLeast(0) } else { Degree::Exact { degree, verified } };

    // Newton form: sum_k D^k f(x0) * C(x - x0, k), expanded to powers of x.
    let mut coefficients = vec![Q::zero()];
    if let Some(d) = degree.value() {
        let mut basis = vec![Q::one()];
        for k in 0..=d {
            let head = Q::from_integer(rows[k][0]);
            for (i, b) in basis.iter().enumerate() {
                if i >= coefficients.len() {
                    coefficients.push(Q::zero());
                }
                coefficients[i] += head * b;
            }
            // basis *= (x - x0 - k) / (k + 1)
            let shift = Q::from_integer((x0 + k as i64) as i128);
            let div = Q::from_integer(k as i128 + 1);
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b / div;
                next[i] -= b * shift / div;
            }
            basis = next;
        }
    }
    while coefficients.len() > 1 && coefficients.last().unwrap().is_zero() {
        coefficients.pop();
    }
    Fit { degree, coefficients }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn linear() {
        let f = fit_polynomial(2, &[9, 11, 13]);
        assert_eq!(f.degree, Degree::Exact { degree: 1, verified: true });
        assert_eq!(f.coefficients, vec![q(5), q(2)]);
        assert_eq!(f.render("n"), "2n + 5");
    }

    #[test]
    fn square() {
        let f = fit_polynomial(2, &[4, 9, 16, 25]);
        assert_eq!(f.degree, Degree::Exact { degree: 2, verified: true });
        assert_eq!(f.coefficients, vec![q(0), q(0), q(1)]);
        assert_eq!(f.render("n"), "n^2");
    }

    #[test]
    fn constant_and_fractional() {
        assert_eq!(fit_polynomial(0, &[7, 7, 7]).coefficients, vec![q(7)]);
        // n(n+1)/2
        let f = fit_polynomial(1, &[1, 3, 6, 10, 15]);
        assert_eq!(f.coefficients, vec![q(0), Q::new(1, 2), Q::new(1, 2)]);
        assert_eq!(f.render("n"), "1/2n^2 + 1/2n");
    }

    #[test]
    fn degree_without_spare_point_is_unverified() {
        let f = fit_polynomial(1, &[1, 8, 27, 64]);
        assert_eq!(f.degree, Degree::Exact { degree: 3, verified: false });
        assert_eq!(f.coefficients, vec![q(0), q(0), q(0), q(1)]);
    }

    #[test]
    fn fit_reproduces_points() {
        let ys = [3, 1, 4, 1, 5, 9, 2, 6];
        let f = fit_polynomial(-2, &ys);
        for (i, y) in ys.iter().enumerate() {
            assert_eq!(f.eval(i as i64 - 2), q(*y as i128));
        }
    }
}
