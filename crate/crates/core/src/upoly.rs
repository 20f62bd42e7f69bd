//! Dense univariate polynomials over a [`Scalar`] field, plus exact root
//! extraction over `Q` (rational-root theorem) and inside a quadratic field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Quadratic, Scalar, Q};

/// Coefficients in increasing degree; no trailing zeros (zero polynomial is empty).
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `x - root`
    pub fn linear(root: S) -> Self {
        Self::new(vec![-root, S::one()])
    }

    pub fn x() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(S::zero);
            let b = o.coeffs.get(i).cloned().unwrap_or_else(S::zero);
            out.push(a + b);
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().cloned().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![S::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = rem[k].clone() / lead.clone();
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k - dd + i] = rem[k - dd + i].clone() - c.clone() * dc.clone();
                }
            }
            quot[k - dd] = c;
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let inv = S::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * S::from_i64(i as i64)).collect())
    }

    /// Product of the distinct irreducible factors (characteristic zero).
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }
}

impl UPoly<Q> {
    /// Integer polynomial on the same ray with positive leading coefficient
    /// and content 1.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let ints = crate::rational::primitive_integer_vector(&self.coeffs.iter().rev().cloned().collect::<Vec<_>>());
        // primitive_integer_vector makes the first (leading) entry positive
        ints.into_iter().rev().collect()
    }

    pub fn to_quadratic(&self) -> UPoly<Quadratic> {
        UPoly::new(self.coeffs.iter().cloned().map(Quadratic::rational).collect())
    }
}

/// Rational roots with multiplicities, plus the monic cofactor that has no
/// rational roots. Uses the rational-root theorem on the primitive integer
/// form: a root `p/q` in lowest terms has `p | a_0` and `q | a_n`.
pub fn rational_roots(f: &UPoly<Q>) -> (Vec<(Q, usize)>, UPoly<Q>) {
    let mut rest = f.monic();
    let mut roots = Vec::new();
    if rest.is_zero() {
        return (roots, rest);
    }
    // strip x^k
    let mut zero_mult = 0;
    while rest.coeffs.first().is_some_and(|c| c.is_zero()) {
        rest.coeffs.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Q::zero(), zero_mult));
    }
    if rest.degree().unwrap_or(0) == 0 {
        return (roots, rest);
    }
    let ints = rest.primitive_integer();
    let lead = ints.last().unwrap().abs();
    let trail = ints[0].abs();
    let ps = divisors(&trail);
    let qs = divisors(&lead);
    let mut candidates: Vec<Q> = Vec::new();
    for p in &ps {
        for q in &qs {
            if p.gcd(q).is_one() {
                let c = Q::new(p.clone(), q.clone());
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
    }
    candidates.sort();
    for c in candidates {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        let lin = UPoly::linear(c.clone());
        let mut mult = 0;
        loop {
            let (quo, rem) = rest.div_rem(&lin);
            if rem.is_zero() {
                rest = quo;
                mult += 1;
            } else {
                break;
            }
        }
        if mult > 0 {
            roots.push((c, mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    (roots, rest.monic())
}

/// Roots of `f` lying in the quadratic field containing its coefficients
/// (or in `Q(sqrt disc)` when `f` is a rational quadratic and `extend` is set).
/// Returns `None` when `f` has a factor that cannot be split this way.
pub fn quadratic_field_roots(f: &UPoly<Quadratic>, extend: bool) -> Option<Vec<Quadratic>> {
    let f = f.squarefree();
    let deg = f.degree()?;
    let field = f.coeffs().iter().find(|c| !c.is_rational()).map(|c| c.d.clone()).unwrap_or_else(BigInt::zero);
    match deg {
        0 => Some(Vec::new()),
        1 => Some(vec![-(f.coeffs()[0].clone() / f.coeffs()[1].clone())]),
        2 => {
            let (c, b, a) = (&f.coeffs()[0], &f.coeffs()[1], &f.coeffs()[2]);
            let disc = b.clone() * b.clone() - Quadratic::from_i64(4) * a.clone() * c.clone();
            let root = if field.is_zero() {
                if extend {
                    disc.sqrt(true)?
                } else {
                    disc.sqrt(false)?
                }
            } else {
                disc.sqrt_in(&field)?
            };
            let two_a = Quadratic::from_i64(2) * a.clone();
            let r1 = (-b.clone() + root.clone()) / two_a.clone();
            let r2 = (-b.clone() - root) / two_a;
            Some(vec![r1, r2])
        }
        _ => {
            // Over Q a higher-degree factor might still split into rational
            // pieces; over an extension we give up.
            if field.is_zero() {
                let fq = UPoly::new(f.coeffs().iter().map(|c| c.a.clone()).collect());
                let (roots, rest) = rational_roots(&fq);
                let mut out: Vec<Quadratic> = roots.into_iter().map(|(r, _)| Quadratic::rational(r)).collect();
                if rest.degree().unwrap_or(0) == 0 {
                    return Some(out);
                }
                if rest.degree() == Some(2) {
                    out.extend(quadratic_field_roots(&rest.to_quadratic(), extend)?);
                    return Some(out);
                }
            }
            None
        }
    }
}

/// Positive divisors of `n` (with `divisors(0) == [1]` as a convention for
/// the rational-root search).
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() || n.is_one() {
        return vec![BigInt::one()];
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factor_integer(&n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Prime factorization of `n > 0` as `(prime, exponent)` pairs, ascending.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    if n.is_zero() {
        return out;
    }
    let push = |p: BigInt, out: &mut Vec<(BigInt, u32)>| {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
            e.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pb = BigInt::from(p);
        while (&n % &pb).is_zero() {
            n /= &pb;
            push(pb.clone(), &mut out);
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, &mut out);
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    out
}

fn mod_pow(b: &BigInt, e: &BigInt, m: &BigInt) -> BigInt {
    b.modpow(e, m)
}

/// Miller-Rabin with the first twelve prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    let small = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in small {
        let pb = BigInt::from(p);
        if n == &pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for a in small {
        let mut x = mod_pow(&BigInt::from(a), &d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of the composite odd `n`.
fn pollard_rho(n: &BigInt) -> BigInt {
    let sq = n.sqrt();
    if &(&sq * &sq) == n {
        return sq;
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2);
        let mut y = x.clone();
        let mut d = BigInt::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

/// Coefficients as `"p/q"` strings, increasing degree.
pub fn coeff_strings(f: &UPoly<Q>) -> Vec<String> {
    f.coeffs().iter().map(crate::rational::format_q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn poly(c: &[i64]) -> UPoly<Q> {
        UPoly::new(c.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn roots_of_product_of_linear_factors() {
        // (2x - 1)^2 (3x + 4) x
        let f = poly(&[-1, 2]).mul(&poly(&[-1, 2])).mul(&poly(&[4, 3])).mul(&poly(&[0, 1]));
        let (roots, rest) = rational_roots(&f);
        assert_eq!(roots, vec![(q(-4, 3), 1), (qi(0), 1), (q(1, 2), 2)]);
        assert_eq!(rest.degree(), Some(0));
    }

    #[test]
    fn irrational_cofactor_survives() {
        let f = poly(&[-2, 0, 1]).mul(&poly(&[-3, 1]));
        let (roots, rest) = rational_roots(&f);
        assert_eq!(roots, vec![(qi(3), 1)]);
        assert_eq!(rest, poly(&[-2, 0, 1]));
    }

    #[test]
    fn factorization_with_large_prime_factors() {
        let p = BigInt::from(1_000_003u64);
        let r = BigInt::from(998_244_353u64);
        let n = &p * &p * &r * BigInt::from(12);
        let f = factor_integer(&n);
        assert_eq!(f, vec![(BigInt::from(2), 2), (BigInt::from(3), 1), (p, 2), (r, 1)]);
        assert_eq!(divisors(&BigInt::from(12)).len(), 6);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = poly(&[-1, 1]).mul(&poly(&[-1, 1])).mul(&poly(&[2, 1]));
        let b = poly(&[-1, 1]).mul(&poly(&[5, 1]));
        assert_eq!(a.gcd(&b), poly(&[-1, 1]));
        assert_eq!(a.squarefree(), poly(&[-1, 1]).mul(&poly(&[2, 1])));
    }

    #[test]
    fn quadratic_roots_extend_the_field() {
        let f = poly(&[-98, 0, 1]).to_quadratic();
        let roots = quadratic_field_roots(&f, true).unwrap();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!(f.eval(&r).is_zero());
            assert_eq!(r.d, BigInt::from(2));
        }
        assert!(quadratic_field_roots(&f, false).is_none());
    }
}
