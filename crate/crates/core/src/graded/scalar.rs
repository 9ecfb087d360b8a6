//! Exact rational scalars and sparse vectors over them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The ground field, instantiated as the rationals.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `+1` or `-1` from a parity.
pub fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// Parses `p/q` or `p`, ASCII, no inner whitespace.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let bad = || Error::Malformed(format!("malformed rational literal `{s}`"));
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(BigRational::from_integer)
            .map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() || q.is_negative() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Renders as `p` or `p/q`.
pub fn fmt_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sparse vector: basis index to nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector(BTreeMap<usize, Scalar>);

impl Vector {
    pub fn new() -> Self {
        Self(BTreeMap::new())
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Self::new();
        v.0.insert(i, Scalar::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.0.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(i).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in &other.0 {
            self.add_term(*i, &(x * c));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        let mut out = Vector::new();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Scalar> {
        (0..dim).map(|i| self.get(i)).collect()
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        let mut out = Vector::new();
        for (i, c) in v.iter().enumerate() {
            out.add_term(i, c);
        }
        out
    }
}

impl FromIterator<(usize, Scalar)> for Vector {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        let mut v = Vector::new();
        for (i, c) in iter {
            v.add_term(i, &c);
        }
        v
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(i, c)| format!("{}*e{}", fmt_scalar(c), i))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_parse_and_render() {
        assert_eq!(parse_scalar("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_scalar("-4").unwrap(), int(-4));
        assert_eq!(fmt_scalar(&ratio(-2, 4)), "-1/2");
        assert_eq!(fmt_scalar(&int(7)), "7");
        assert!(parse_scalar("1 /2").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("").is_err());
    }

    #[test]
    fn vector_drops_cancelled_terms() {
        let mut v = Vector::basis(2);
        v.add_term(2, &int(-1));
        assert!(v.is_zero());
    }
}
