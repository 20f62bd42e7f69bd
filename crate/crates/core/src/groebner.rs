//! Buchberger's algorithm on primitive integer polynomials.
//!
//! Coefficients stay integral throughout (fraction-free reduction with
//! content removal), which keeps rational blow-up in check on the small
//! quadratic systems we care about.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Monomial, MonomialOrder, Poly};
use crate::scalar::Q;

/// Terms sorted by decreasing monomial in the working order.
#[derive(Clone, Debug, PartialEq)]
struct IPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl IPoly {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn make_primitive(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut g = self.content();
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in self.terms.iter_mut() {
                *c = &*c / &g;
            }
        }
    }
}

/// `a*p - b*m*g`, merged in order.
fn combine(
    order: MonomialOrder,
    a: &BigInt,
    p: &[(Monomial, BigInt)],
    b: &BigInt,
    m: &Monomial,
    g: &[(Monomial, BigInt)],
) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < p.len() || j < g.len() {
        let gm = g.get(j).map(|t| t.0.mul(m));
        let ord = match (p.get(i), &gm) {
            (Some(x), Some(y)) => order.cmp(&x.0, y),
            (Some(_), None) => Ordering::Greater,
            (None, _) => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push((p[i].0, a * &p[i].1));
                i += 1;
            }
            Ordering::Less => {
                out.push((gm.unwrap(), -(b * &g[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = a * &p[i].1 - b * &g[j].1;
                if !c.is_zero() {
                    out.push((p[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Full reduction of `f` by `basis`; the result is primitive (or zero).
fn reduce(order: MonomialOrder, f: &IPoly, basis: &[IPoly]) -> IPoly {
    let mut p = f.terms.clone();
    let mut rem: Vec<(Monomial, BigInt)> = Vec::new();
    let mut steps = 0usize;
    while !p.is_empty() {
        let (m, c) = p[0].clone();
        if let Some(g) = basis.iter().find(|g| g.lm().divides(&m)) {
            let gc = c.gcd(g.lc());
            let a = g.lc() / &gc;
            let b = &c / &gc;
            let q = g.lm().quotient_of(&m);
            p = combine(order, &a, &p, &b, &q, &g.terms);
            if !a.is_one() {
                for (_, x) in rem.iter_mut() {
                    *x = &*x * &a;
                }
            }
            steps += 1;
            if steps.is_multiple_of(8) {
                // shared content of p and the remainder can be dropped
                let mut g = BigInt::zero();
                for (_, x) in p.iter().chain(rem.iter()) {
                    g = g.gcd(x);
                    if g.is_one() {
                        break;
                    }
                }
                if !g.is_zero() && !g.is_one() {
                    for (_, x) in p.iter_mut().chain(rem.iter_mut()) {
                        *x = &*x / &g;
                    }
                }
            }
        } else {
            rem.push(p.remove(0));
        }
    }
    let mut r = IPoly { terms: rem };
    r.make_primitive();
    r
}

fn spoly(order: MonomialOrder, f: &IPoly, g: &IPoly) -> IPoly {
    let l = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&l);
    let mg = g.lm().quotient_of(&l);
    let gc = f.lc().gcd(g.lc());
    let a = g.lc() / &gc;
    let b = f.lc() / &gc;
    // a*mf*f - b*mg*g
    let fm: Vec<(Monomial, BigInt)> = f.terms.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    IPoly { terms: combine(order, &a, &fm, &b, &mg, &g.terms) }
}

fn to_ipoly(order: MonomialOrder, p: &Poly) -> IPoly {
    IPoly { terms: p.primitive_integer(order) }
}

fn to_poly(p: &IPoly) -> Poly {
    Poly::from_terms(p.terms.iter().map(|(m, c)| (*m, Q::from_integer(c.clone()))))
}

/// Statistics from one run, for diagnostics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GbStats {
    pub pairs_considered: usize,
    pub pairs_skipped: usize,
    pub zero_reductions: usize,
}

/// Reduced Groebner basis of the ideal generated by `input`. Each element is
/// a primitive integer polynomial with positive leading coefficient; the list
/// is sorted by increasing leading monomial. The unit ideal gives `[1]`.
pub fn groebner_basis(input: &[Poly], order: MonomialOrder) -> Vec<Poly> {
    groebner_basis_with_stats(input, order).0
}

pub fn groebner_basis_with_stats(input: &[Poly], order: MonomialOrder) -> (Vec<Poly>, GbStats) {
    let mut stats = GbStats::default();
    let mut g: Vec<IPoly> = Vec::new();
    for p in input.iter().filter(|p| !p.is_zero()) {
        let ip = to_ipoly(order, p);
        if ip.is_constant() {
            return (vec![Poly::constant(Q::one())], stats);
        }
        g.push(ip);
    }
    // reduce the inputs against each other first
    g = interreduce(order, g);
    if g.iter().any(|p| p.is_constant()) {
        return (vec![Poly::constant(Q::one())], stats);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        // normal selection: smallest lcm, ties by total degree then order
        let best = (0..pairs.len())
            .min_by(|&x, &y| {
                let lx = g[pairs[x].0].lm().lcm(g[pairs[x].1].lm());
                let ly = g[pairs[y].0].lm().lcm(g[pairs[y].1].lm());
                lx.degree().cmp(&ly.degree()).then_with(|| order.cmp(&lx, &ly))
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(best);
        stats.pairs_considered += 1;
        let (mi, mj) = (*g[i].lm(), *g[j].lm());
        if mi.coprime(&mj) {
            stats.pairs_skipped += 1;
            continue;
        }
        let l = mi.lcm(&mj);
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && g[k].lm().divides(&l)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            stats.pairs_skipped += 1;
            continue;
        }
        let s = spoly(order, &g[i], &g[j]);
        let h = reduce(order, &s, &g);
        if h.is_zero() {
            stats.zero_reductions += 1;
            continue;
        }
        if h.is_constant() {
            return (vec![Poly::constant(Q::one())], stats);
        }
        let n = g.len();
        pairs.extend((0..n).map(|k| (k, n)));
        g.push(h);
    }
    let mut out = interreduce(order, g);
    out.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    (out.iter().map(to_poly).collect(), stats)
}

/// Minimal, fully reduced generating set of the same ideal (and with the
/// same leading ideal when the input is a Groebner basis).
fn interreduce(order: MonomialOrder, mut g: Vec<IPoly>) -> Vec<IPoly> {
    loop {
        g.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
        let mut changed = false;
        let mut out: Vec<IPoly> = Vec::with_capacity(g.len());
        for p in g {
            let r = reduce(order, &p, &out);
            if r.is_constant() {
                return vec![r];
            }
            if r != p {
                changed = true;
            }
            if !r.is_zero() {
                out.push(r);
            }
        }
        g = out;
        if !changed {
            break;
        }
    }
    // leading monomials are now pairwise non-dividing; clear the tails
    (0..g.len())
        .map(|k| {
            let others: Vec<IPoly> = g.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p.clone()).collect();
            reduce(order, &g[k], &others)
        })
        .collect()
}

/// Normal form of `f` modulo a Groebner basis (scaled to primitive integer
/// form, so only zero-ness and the monomial support are meaningful).
pub fn normal_form(f: &Poly, basis: &[Poly], order: MonomialOrder) -> Poly {
    let b: Vec<IPoly> = basis.iter().map(|p| to_ipoly(order, p)).collect();
    to_poly(&reduce(order, &to_ipoly(order, f), &b))
}

/// Normal form of `f` with exact rational coefficients.
pub fn reduce_rational(f: &Poly, basis: &[Poly], order: MonomialOrder) -> Poly {
    let leads: Vec<(Monomial, Q)> = basis
        .iter()
        .map(|g| {
            let (m, c) = g.leading(order).expect("nonzero basis element");
            (*m, c.clone())
        })
        .collect();
    let mut p = f.clone();
    let mut r = Poly::zero();
    while let Some((m, c)) = p.leading(order).map(|(m, c)| (*m, c.clone())) {
        if let Some(k) = leads.iter().position(|(lm, _)| lm.divides(&m)) {
            let t = Poly::term(&c / &leads[k].1, leads[k].0.quotient_of(&m));
            p = p.sub(&t.mul(&basis[k]));
        } else {
            r.add_term(m, c.clone());
            p.add_term(m, -c);
        }
    }
    r
}

/// Converts a zero-dimensional reduced Groebner basis in order `from` into
/// the reduced lex basis of the same ideal (FGLM). Works on `n` variables.
pub fn fglm_to_lex(basis: &[Poly], from: MonomialOrder, n: usize) -> Vec<Poly> {
    // coordinates of normal forms are indexed by the standard monomials of
    // `from`, discovered lazily
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let nf = |m: &Monomial, index: &mut BTreeMap<Monomial, usize>| -> BTreeMap<usize, Q> {
        let r = reduce_rational(&Poly::term(Q::one(), *m), basis, from);
        r.terms()
            .map(|(mm, c)| {
                let len = index.len();
                let k = *index.entry(*mm).or_insert(len);
                (k, c.clone())
            })
            .collect()
    };
    let mut out: Vec<Poly> = Vec::new();
    let mut stair: Vec<Monomial> = Vec::new();
    // echelon rows: (pivot, vector with pivot entry 1, combination of stair monomials)
    let mut rows: Vec<(usize, BTreeMap<usize, Q>, BTreeMap<usize, Q>)> = Vec::new();
    let mut queue: BTreeSet<Monomial> = BTreeSet::new();
    queue.insert(Monomial::one());
    while let Some(m) = queue.pop_first() {
        if out.iter().any(|g| g.leading(MonomialOrder::Lex).unwrap().0.divides(&m)) {
            continue;
        }
        let mut v = nf(&m, &mut index);
        let mut combo: BTreeMap<usize, Q> = BTreeMap::new();
        for (pivot, row, rc) in &rows {
            let Some(c) = v.get(pivot).cloned() else { continue };
            for (k, x) in row {
                let e = v.entry(*k).or_insert_with(Q::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(k);
                }
            }
            for (k, x) in rc {
                let e = combo.entry(*k).or_insert_with(Q::zero);
                *e -= &c * x;
                if e.is_zero() {
                    combo.remove(k);
                }
            }
        }
        if v.is_empty() {
            // m + sum combo_k stair_k lies in the ideal
            let mut g = Poly::term(Q::one(), m);
            for (k, c) in combo {
                g.add_term(stair[k], c);
            }
            out.push(g.normalized(MonomialOrder::Lex));
            continue;
        }
        let (&pivot, pc) = v.iter().next().map(|(k, c)| (k, c.clone())).unwrap();
        let inv = Q::one() / pc;
        let row: BTreeMap<usize, Q> = v.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        combo.insert(stair.len(), Q::one());
        let combo: BTreeMap<usize, Q> = combo.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        // keep rows fully reduced against the new pivot
        for (_, r, rc) in rows.iter_mut() {
            if let Some(c) = r.get(&pivot).cloned() {
                for (k, x) in &row {
                    let e = r.entry(*k).or_insert_with(Q::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        r.remove(k);
                    }
                }
                for (k, x) in &combo {
                    let e = rc.entry(*k).or_insert_with(Q::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        rc.remove(k);
                    }
                }
            }
        }
        rows.push((pivot, row, combo));
        stair.push(m);
        for i in 0..n {
            queue.insert(m.mul(&Monomial::var(i)));
        }
    }
    out.sort_by(|a, b| {
        MonomialOrder::Lex.cmp(a.leading(MonomialOrder::Lex).unwrap().0, b.leading(MonomialOrder::Lex).unwrap().0)
    });
    out
}

/// True when `basis` is the unit ideal.
pub fn is_unit(basis: &[Poly]) -> bool {
    basis.len() == 1 && basis[0].total_degree() == 0 && !basis[0].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }
    fn c(n: i64) -> Poly {
        Poly::constant(qi(n))
    }

    #[test]
    fn textbook_example_lex() {
        // x^2 + y^2 - 1, x - y  ->  {2y^2 - 1, x - y} in lex x > y
        let f1 = x(0).mul(&x(0)).add(&x(1).mul(&x(1))).sub(&c(1));
        let f2 = x(0).sub(&x(1));
        let gb = groebner_basis(&[f1, f2], MonomialOrder::Lex);
        assert_eq!(gb.len(), 2);
        assert_eq!(gb[0], x(1).mul(&x(1)).scale(&qi(2)).sub(&c(1)));
        assert_eq!(gb[1], x(0).sub(&x(1)));
    }

    #[test]
    fn inconsistent_system_gives_unit_ideal() {
        let f1 = x(0).mul(&x(1)).sub(&c(1));
        let f2 = x(0);
        let gb = groebner_basis(&[f1, f2], MonomialOrder::GrevLex);
        assert!(is_unit(&gb));
    }

    #[test]
    fn cyclic3_has_known_leading_terms() {
        let (a, b, cc) = (x(0), x(1), x(2));
        let f1 = a.add(&b).add(&cc);
        let f2 = a.mul(&b).add(&b.mul(&cc)).add(&cc.mul(&a));
        let f3 = a.mul(&b).mul(&cc).sub(&c(1));
        let gb = groebner_basis(&[f1.clone(), f2.clone(), f3.clone()], MonomialOrder::Lex);
        // lex basis: a + b + c, b^2 + bc + c^2, c^3 - 1
        assert_eq!(gb.len(), 3);
        assert_eq!(gb[0], cc.mul(&cc).mul(&cc).sub(&c(1)));
        for p in [&gb[1], &gb[2]] {
            assert!(normal_form(p, &gb, MonomialOrder::Lex).is_zero());
        }
        let nf = normal_form(&a.mul(&b).mul(&cc), &gb, MonomialOrder::Lex);
        assert_eq!(nf, c(1));
        let grevlex = groebner_basis(&[f1.clone(), f2.clone(), f3.clone()], MonomialOrder::GrevLex);
        assert_eq!(fglm_to_lex(&grevlex, MonomialOrder::GrevLex, 3), gb);
    }

    #[test]
    fn rational_inputs_are_cleared() {
        let f = x(0).scale(&q(1, 3)).sub(&Poly::constant(q(1, 2)));
        let gb = groebner_basis(&[f], MonomialOrder::Lex);
        assert_eq!(gb, vec![x(0).scale(&qi(2)).sub(&c(3))]);
    }
}
