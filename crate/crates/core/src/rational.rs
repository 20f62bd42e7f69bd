//! `"p/q"` text encoding of rationals used by every JSON surface.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Canonical form: reduced, positive denominator, always with a `/`.
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"p/q"` or a bare integer `"p"`.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Q::new(n, d))
}

pub fn parse_q_list(s: &str) -> Result<Vec<Q>, ParseRationalError> {
    s.split(',').map(parse_q).collect()
}

/// Serde adapter: a rational as a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(pub Q);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map(Rat).map_err(serde::de::Error::custom)
    }
}

/// Exact text for report output: `"p/q"` for rationals, `"a+b*sqrt(d)"`
/// for quadratic irrationals.
pub trait ExactText {
    fn text(&self) -> String;
}

impl ExactText for Q {
    fn text(&self) -> String {
        format_q(self)
    }
}

impl ExactText for crate::scalar::Quadratic {
    fn text(&self) -> String {
        self.to_string()
    }
}

pub fn texts<T: ExactText>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.text()).collect()
}

pub fn rats(v: &[Q]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

pub fn unrats(v: &[Rat]) -> Vec<Q> {
    v.iter().map(|r| r.0.clone()).collect()
}

/// Clears denominators: the primitive integer vector on the same ray
/// (first nonzero entry positive).
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut l = BigInt::from(1);
    for x in v {
        l = l.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/-6").unwrap(), q(-1, 2));
        assert_eq!(format_q(&q(2, -4)), "-1/2");
        assert_eq!(format_q(&q(0, 5)), "0/1");
        assert_eq!(parse_q("7").unwrap(), q(7, 1));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("a/2").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer_vector(&[q(-1, 2), q(1, 3), q(0, 1)]);
        assert_eq!(v, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
    }
}
