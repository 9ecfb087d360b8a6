use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graded::{fmt_scalar, parse_scalar, Scalar};

/// Exponent `T^λ e^n` of a Novikov monomial; as an element of the gapping monoid
/// it is `β = (λ, μ)` with `μ = 2n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Energy {
    pub lambda: Scalar,
    pub n: i64,
}

impl Energy {
    pub fn new(lambda: Scalar, n: i64) -> Self {
        Self { lambda, n }
    }

    pub fn zero() -> Self {
        Self {
            lambda: Scalar::zero(),
            n: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_zero() && self.n == 0
    }

    /// `μ(β)`.
    pub fn mu(&self) -> i64 {
        2 * self.n
    }

    /// `self - other`, when the energy stays nonnegative.
    pub fn checked_sub(&self, other: &Energy) -> Option<Energy> {
        let lambda = &self.lambda - &other.lambda;
        if lambda.is_negative() {
            None
        } else {
            Some(Energy {
                lambda,
                n: self.n - other.n,
            })
        }
    }
}

impl Add for &Energy {
    type Output = Energy;

    fn add(self, other: &Energy) -> Energy {
        Energy {
            lambda: &self.lambda + &other.lambda,
            n: self.n + other.n,
        }
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T^{} e^{}", fmt_scalar(&self.lambda), self.n)
    }
}

/// Finite sum `Σ a_i T^{λ_i} e^{n_i}` with `0 <= λ_i <= cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovScalar {
    terms: BTreeMap<Energy, Scalar>,
    cap: Scalar,
}

impl NovikovScalar {
    pub fn zero(cap: Scalar) -> Self {
        Self {
            terms: BTreeMap::new(),
            cap,
        }
    }

    pub fn monomial(a: Scalar, e: Energy, cap: Scalar) -> Self {
        let mut s = Self::zero(cap);
        s.add_term(e, &a);
        s
    }

    pub fn cap(&self) -> &Scalar {
        &self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `a T^λ e^n`; energies above the cap are dropped.
    pub fn add_term(&mut self, e: Energy, a: &Scalar) {
        assert!(!e.lambda.is_negative(), "negative energy");
        if a.is_zero() || e.lambda > self.cap {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Scalar::zero);
        *entry += a;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &Energy) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Energy, &Scalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &NovikovScalar) -> NovikovScalar {
        let mut out = NovikovScalar::zero(self.cap.clone().min(other.cap.clone()));
        for (e, a) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(e.clone(), a);
        }
        out
    }

    pub fn neg(&self) -> NovikovScalar {
        let mut out = NovikovScalar::zero(self.cap.clone());
        for (e, a) in &self.terms {
            out.add_term(e.clone(), &-a);
        }
        out
    }

    /// Energies and exponents add; products above the cap are dropped.
    pub fn mul(&self, other: &NovikovScalar) -> NovikovScalar {
        let mut out = NovikovScalar::zero(self.cap.clone().min(other.cap.clone()));
        for (e1, a1) in &self.terms {
            for (e2, a2) in &other.terms {
                out.add_term(e1 + e2, &(a1 * a2));
            }
        }
        out
    }

    /// Parses `"3/2 T^1 e^0 + -1 T^2 e^1"`; a bare rational is an energy-zero term.
    pub fn parse(s: &str, cap: Scalar) -> Result<Self> {
        let mut out = Self::zero(cap);
        let s = s.trim();
        if s == "0" {
            return Ok(out);
        }
        for part in s.split(" + ") {
            let toks: Vec<&str> = part.split_whitespace().collect();
            let bad = || Error::Malformed(format!("Novikov term `{part}`"));
            let (a, rest) = toks.split_first().ok_or_else(bad)?;
            let a = parse_scalar(a)?;
            let mut e = Energy::zero();
            for t in rest {
                if let Some(l) = t.strip_prefix("T^") {
                    e.lambda = parse_scalar(l)?;
                } else if let Some(n) = t.strip_prefix("e^") {
                    e.n = n.parse().map_err(|_| bad())?;
                } else {
                    return Err(bad());
                }
            }
            if e.lambda.is_negative() {
                return Err(Error::Malformed(format!("negative energy in `{part}`")));
            }
            out.add_term(e, &a);
        }
        Ok(out)
    }
}

impl fmt::Display for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, a)| format!("{} {}", fmt_scalar(a), e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
