//! Sparse multivariate polynomials over `Q` and monomial orders.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, Q};

/// Hard cap on variables (user-visible systems are limited further).
pub const MAX_VARS: usize = 10;

/// Exponent vector; the derived `Ord` is pure lex with variable 0 largest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub [u8; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.0[i] = 1;
        m
    }

    pub fn from_exps(exps: &[u8]) -> Self {
        let mut m = Self::one();
        m.0[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        m
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self | o`.
    pub fn quotient_of(&self, o: &Self) -> Self {
        let mut m = *o;
        for (a, b) in m.0.iter_mut().zip(self.0.iter()) {
            *a -= *b;
        }
        m
    }

    pub fn lcm(&self, o: &Self) -> Self {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = (*a).max(*b);
        }
        m
    }

    pub fn coprime(&self, o: &Self) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// `Some(i)` if the monomial is `x_i^k` with `k >= 1`.
    pub fn pure_power_of(&self) -> Option<usize> {
        let mut s = self.support();
        let first = s.next()?;
        s.next().is_none().then_some(first)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => a.degree().cmp(&b.degree()).then_with(|| {
                // smaller exponent in the last differing variable is larger
                for i in (0..MAX_VARS).rev() {
                    if a.0[i] != b.0[i] {
                        return b.0[i].cmp(&a.0[i]);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        Self::term(Q::one(), Monomial::var(i))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flat_map(|m| m.support().collect::<Vec<_>>()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &Q)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }

    /// Exact division by a single variable, if every term contains it.
    pub fn divide_by_var(&self, i: usize) -> Option<Poly> {
        if self.terms.keys().any(|m| m.0[i] == 0) {
            return None;
        }
        let d = Monomial::var(i);
        Some(Poly { terms: self.terms.iter().map(|(m, c)| (d.quotient_of(m), c.clone())).collect() })
    }

    /// Evaluate at a full point in any scalar field containing `Q`.
    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = S::from_q(c);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t * point[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Replace variable `i` by the constant `v`.
    pub fn substitute(&self, i: usize, v: &Q) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            let mut m2 = *m;
            let e = m2.0[i];
            m2.0[i] = 0;
            let mut f = c.clone();
            for _ in 0..e {
                f *= v;
            }
            p.add_term(m2, f);
        }
        p
    }

    /// Rename variables: variable `i` becomes `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut n = Monomial::one();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    n.0[perm[i]] = e;
                }
            }
            (n, c.clone())
        }))
    }

    /// Primitive integer multiple with positive leading coefficient
    /// (in the given order).
    pub fn primitive_integer(&self, order: MonomialOrder) -> Vec<(Monomial, BigInt)> {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut ints: Vec<(Monomial, BigInt)> =
            self.terms.iter().map(|(m, c)| (*m, (c * Q::from_integer(l.clone())).to_integer())).collect();
        let mut g = BigInt::zero();
        for (_, c) in &ints {
            g = g.gcd(c);
        }
        let lead_neg = self.leading(order).is_some_and(|(_, c)| c.is_negative());
        if !g.is_zero() {
            for (_, c) in ints.iter_mut() {
                *c = &*c / &g;
                if lead_neg {
                    *c = -&*c;
                }
            }
        }
        ints.sort_by(|a, b| order.cmp(&b.0, &a.0));
        ints
    }

    /// Same ideal generator scaled to primitive integer form.
    pub fn normalized(&self, order: MonomialOrder) -> Poly {
        Poly::from_terms(self.primitive_integer(order).into_iter().map(|(m, c)| (m, Q::from_integer(c))))
    }

    pub fn display(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let mono: Vec<String> = m
                .support()
                .map(|i| {
                    let name = vars.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if m.0[i] == 1 {
                        name
                    } else {
                        format!("{name}^{}", m.0[i])
                    }
                })
                .collect();
            if mono.is_empty() || !a.is_one() {
                out.push_str(&a.to_string());
                if !mono.is_empty() {
                    out.push('*');
                }
            }
            out.push_str(&mono.join("*"));
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(&[]))
    }
}

/// Integer-coefficient sparse form used on disk: each term is a coefficient
/// and an exponent list over the system's variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntTerm {
    pub coeff: String,
    pub exps: Vec<u8>,
}

impl Poly {
    pub fn to_int_terms(&self, nvars: usize) -> Vec<IntTerm> {
        self.primitive_integer(MonomialOrder::Lex)
            .into_iter()
            .map(|(m, c)| IntTerm { coeff: c.to_string(), exps: m.0[..nvars].to_vec() })
            .collect()
    }

    pub fn from_int_terms(terms: &[IntTerm]) -> Result<Poly, String> {
        let mut p = Poly::zero();
        for t in terms {
            if t.exps.len() > MAX_VARS {
                return Err(format!("too many exponents in term {:?}", t));
            }
            let c: BigInt = t.coeff.parse().map_err(|_| format!("bad coefficient {:?}", t.coeff))?;
            p.add_term(Monomial::from_exps(&t.exps), Q::from_integer(c));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn grevlex_vs_lex() {
        let a = Monomial::from_exps(&[1, 0, 2]);
        let b = Monomial::from_exps(&[0, 3, 0]);
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b), Ordering::Greater);
        // same degree: the one with smaller last exponent is larger
        assert_eq!(MonomialOrder::GrevLex.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn arithmetic_and_eval() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let p = x.mul(&x).sub(&y.scale(&qi(2))).add(&Poly::constant(q(1, 2)));
        assert_eq!(p.eval(&[qi(3), qi(1)]), q(15, 2));
        assert_eq!(p.substitute(0, &qi(1)).eval(&[qi(0), qi(2)]), q(-5, 2));
        assert_eq!(p.total_degree(), 2);
        assert_eq!(p.display(&["x".into(), "y".into()]), "x^2 - 2*y + 1/2");
    }

    #[test]
    fn primitive_integer_form() {
        let p = Poly::var(0).scale(&q(-2, 3)).add(&Poly::constant(q(1, 6)));
        let ints = p.primitive_integer(MonomialOrder::Lex);
        assert_eq!(ints[0].1, BigInt::from(4));
        assert_eq!(ints[1].1, BigInt::from(-1));
        let terms = p.to_int_terms(1);
        assert_eq!(Poly::from_int_terms(&terms).unwrap(), p.normalized(MonomialOrder::Lex));
    }
}
