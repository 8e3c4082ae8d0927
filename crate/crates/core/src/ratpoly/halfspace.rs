use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

/// `coeffs · x ≤ bound` or `coeffs · x = bound`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
    pub relation: Relation,
}

impl Halfspace {
    pub fn le(coeffs: Vec<Rational>, bound: Rational) -> Self {
        Halfspace {
            coeffs,
            bound,
            relation: Relation::Le,
        }
    }

    /// `coeffs · x ≥ bound`, stored as `−coeffs · x ≤ −bound`.
    pub fn ge(coeffs: Vec<Rational>, bound: Rational) -> Self {
        Halfspace::le(coeffs.into_iter().map(|c| -c).collect(), -bound)
    }

    pub fn eq(coeffs: Vec<Rational>, bound: Rational) -> Self {
        Halfspace {
            coeffs,
            bound,
            relation: Relation::Eq,
        }
    }

    /// `x_axis ≥ 0` in dimension `dim`.
    pub fn nonneg(dim: usize, axis: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); dim];
        coeffs[axis] = -Rational::one();
        Halfspace::le(coeffs, Rational::zero())
    }

    /// The always-false `0 ≤ −1`.
    pub fn infeasible(dim: usize) -> Self {
        Halfspace::le(vec![Rational::zero(); dim], -Rational::one())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(point)
            .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
    }

    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Le => lhs <= self.bound,
            Relation::Eq => lhs == self.bound,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Positive rescaling to coprime integer coefficients; equalities also get
    /// a positive leading coefficient. Defines the same set.
    pub fn normalized(&self) -> Halfspace {
        let mut lcm = BigInt::one();
        for c in self.coeffs.iter().chain(std::iter::once(&self.bound)) {
            lcm = lcm.lcm(c.denom());
        }
        let scaled: Vec<BigInt> = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.bound))
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let (lhs, bound) = scaled.split_at(scaled.len() - 1);
        let mut gcd = lhs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if gcd.is_zero() {
            // 0 ≤ b: only the sign of b matters
            gcd = bound[0].abs();
            if gcd.is_zero() {
                gcd = BigInt::one();
            }
        } else {
            gcd = gcd.gcd(&bound[0]);
        }
        if self.relation == Relation::Eq {
            if let Some(first) = lhs.iter().find(|c| !c.is_zero()) {
                if first.is_negative() {
                    gcd = -gcd;
                }
            }
        }
        let mut out: Vec<Rational> = scaled
            .iter()
            .map(|c| Rational::from_integer(c / &gcd))
            .collect();
        let bound = out.pop().unwrap();
        Halfspace {
            coeffs: out,
            bound,
            relation: self.relation,
        }
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let var = format!("l{}", i + 1);
            let term = if c.is_one() {
                var
            } else if *c == -Rational::one() {
                format!("-{var}")
            } else {
                format!("{}*{var}", format_rational(c))
            };
            terms.push(term);
        }
        let lhs = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        };
        let rel = match self.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
        };
        write!(f, "{lhs} {rel} {}", format_rational(&self.bound))
    }
}
