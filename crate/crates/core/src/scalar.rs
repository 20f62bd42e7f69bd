//! Scalar types the algebra code is generic over.
//!
//! Everything that only needs field arithmetic (structure constants, products,
//! forms, linear solves) is written against [`Scalar`]. The exact code paths
//! (Gröbner bases, rational roots, characteristic polynomials) use [`Q`]
//! directly.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rationals.
pub type Q = BigRational;

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;
    fn from_q(q: &Q) -> Self;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_q(q: &Q) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }
    fn from_q(q: &Q) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }
}

impl Scalar for Q {
    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Largest `k >= 0` with `k*k <= n`.
pub fn isqrt(n: &BigInt) -> BigInt {
    if n.is_negative() {
        panic!("isqrt of negative number");
    }
    n.sqrt()
}

/// Exact square root of a rational, if it is a perfect square.
pub fn q_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let sn = isqrt(n);
    let sd = isqrt(d);
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Q::new(sn, sd))
    } else {
        None
    }
}

/// Writes a rational as the squarefree integer `d` and a rational factor
/// `f` with `x = f^2 * d`. Zero maps to `(0, 0)`.
pub fn squarefree_split(x: &Q) -> (BigInt, Q) {
    if x.is_zero() {
        return (BigInt::zero(), Q::zero());
    }
    // x = n/d = n*d / d^2
    let mut m = x.numer() * x.denom();
    let sign = if m.is_negative() { -1 } else { 1 };
    m = m.abs();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    for (p, e) in crate::upoly::factor_integer(&m) {
        let half = e / 2;
        for _ in 0..half {
            square *= &p;
        }
        if e % 2 == 1 {
            free *= &p;
        }
    }
    let f = Q::new(square, x.denom().clone());
    (free * BigInt::from(sign), f)
}

/// An element `a + b*sqrt(d)` of a quadratic field `Q(sqrt d)`, `d` squarefree.
///
/// Elements with `b == 0` are plain rationals and combine with any field; two
/// irrational elements must share `d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quadratic {
    pub a: Q,
    pub b: Q,
    pub d: BigInt,
}

impl Quadratic {
    pub fn rational(a: Q) -> Self {
        Quadratic { a, b: Q::zero(), d: BigInt::zero() }
    }

    /// `a + b*sqrt(d)`; `d` is reduced to its squarefree part.
    pub fn new(a: Q, b: Q, d: &BigInt) -> Self {
        if b.is_zero() {
            return Self::rational(a);
        }
        let (free, f) = squarefree_split(&Q::from_integer(d.clone()));
        if free.is_one() {
            return Self::rational(a + b * f);
        }
        Quadratic { a, b: b * f, d: free }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.is_rational().then_some(&self.a)
    }

    pub fn conj(&self) -> Self {
        Quadratic { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> Q {
        &self.a * &self.a - Q::from_integer(self.d.clone()) * &self.b * &self.b
    }

    fn field(&self, other: &Self) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => BigInt::zero(),
            (false, true) => self.d.clone(),
            (true, false) => other.d.clone(),
            (false, false) => {
                assert_eq!(self.d, other.d, "mixing different quadratic fields");
                self.d.clone()
            }
        }
    }

    fn make(a: Q, b: Q, d: BigInt) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            Quadratic { a, b, d }
        }
    }

    /// Square root inside `Q(sqrt d)` (or inside `Q(sqrt x)` when `self` is a
    /// non-square rational and `allow_extend` is set).
    pub fn sqrt(&self, allow_extend: bool) -> Option<Self> {
        if self.is_rational() {
            if let Some(r) = q_sqrt(&self.a) {
                return Some(Self::rational(r));
            }
            let (free, f) = squarefree_split(&self.a);
            if !allow_extend {
                // sqrt(a) may still live in an already fixed field; callers
                // pass the field through `sqrt_in`.
                return None;
            }
            return Some(Quadratic { a: Q::zero(), b: f, d: free });
        }
        // (x + y sqrt d)^2 = a + b sqrt d  =>  x^2 + d y^2 = a, 2xy = b
        let n = q_sqrt(&self.norm())?;
        let dq = Q::from_integer(self.d.clone());
        for cand in [(&self.a + &n) / qi(2), (&self.a - &n) / qi(2)] {
            if let Some(x) = q_sqrt(&cand) {
                if x.is_zero() {
                    continue;
                }
                let y = &self.b / (qi(2) * &x);
                if &x * &x + &dq * &y * &y == self.a {
                    return Some(Self::make(x, y, self.d.clone()));
                }
            }
            // x = 0 branch: d y^2 = a, b = 0 (excluded since b != 0)
        }
        None
    }

    /// Square root of `self` inside the field `Q(sqrt d)` for a given `d`.
    pub fn sqrt_in(&self, d: &BigInt) -> Option<Self> {
        if let Some(r) = self.sqrt(false) {
            return Some(r);
        }
        if d.is_zero() || !self.is_rational() {
            return None;
        }
        // sqrt(a) = y sqrt(d)  <=>  a / d is a rational square
        let y = q_sqrt(&(&self.a / Q::from_integer(d.clone())))?;
        Some(Self::make(Q::zero(), y, d.clone()))
    }
}

impl fmt::Debug for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", crate::rational::format_q(&self.a))
        } else {
            write!(f, "{}+{}*sqrt({})", crate::rational::format_q(&self.a), crate::rational::format_q(&self.b), self.d)
        }
    }
}

impl Add for Quadratic {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = self.field(&o);
        Self::make(self.a + o.a, self.b + o.b, d)
    }
}

impl Sub for Quadratic {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let d = self.field(&o);
        Self::make(self.a - o.a, self.b - o.b, d)
    }
}

impl Mul for Quadratic {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.field(&o);
        let dq = Q::from_integer(d.clone());
        let a = &self.a * &o.a + dq * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::make(a, b, d)
    }
}

impl Div for Quadratic {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in quadratic field");
        let inv = Quadratic { a: &o.a / &n, b: -(&o.b / &n), d: o.d.clone() };
        self * Self::make(inv.a, inv.b, inv.d)
    }
}

impl Neg for Quadratic {
    type Output = Self;
    fn neg(self) -> Self {
        Self::make(-self.a, -self.b, self.d)
    }
}

impl Zero for Quadratic {
    fn zero() -> Self {
        Self::rational(Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Quadratic {
    fn one() -> Self {
        Self::rational(Q::one())
    }
}

impl Scalar for Quadratic {
    fn from_i64(v: i64) -> Self {
        Self::rational(qi(v))
    }
    fn from_q(q: &Q) -> Self {
        Self::rational(q.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_arithmetic() {
        let two = BigInt::from(2);
        let s = Quadratic::new(qi(0), qi(1), &two);
        assert_eq!(s.clone() * s.clone(), Quadratic::rational(qi(2)));
        let x = Quadratic::new(qi(3), q(1, 2), &two);
        let y = x.clone() / x.clone();
        assert_eq!(y, Quadratic::one());
        assert!((x.clone() - x).is_zero());
    }

    #[test]
    fn squarefree_reduction() {
        let (d, f) = squarefree_split(&qi(98));
        assert_eq!(d, BigInt::from(2));
        assert_eq!(f, qi(7));
        let (d, f) = squarefree_split(&q(1, 8));
        // 1/8 = (1/4)^2 * 2
        assert_eq!(d, BigInt::from(2));
        assert_eq!(f, q(1, 4));
        let v = Quadratic::new(qi(0), qi(1), &BigInt::from(98));
        assert_eq!(v.d, BigInt::from(2));
        assert_eq!(v.b, qi(7));
    }

    #[test]
    fn square_roots_in_field() {
        let two = BigInt::from(2);
        // (1 + sqrt2)^2 = 3 + 2 sqrt2
        let x = Quadratic::new(qi(3), qi(2), &two);
        let r = x.sqrt(false).unwrap();
        assert_eq!(r.clone() * r, x);
        assert_eq!(Quadratic::rational(qi(98)).sqrt_in(&two).unwrap().b, qi(7));
        assert!(Quadratic::rational(qi(3)).sqrt_in(&two).is_none());
    }
}
