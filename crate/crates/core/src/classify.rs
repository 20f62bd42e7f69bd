//! Idempotents and Virasoro vectors: enumeration, types, complements,
//! conjugates, and sums of idempotents.
//!
//! An idempotent here is `w × w = w` with `w ∉ {0, I}`. Its type is the
//! number of `v_λ` in the support of its `v`-part, capped at 2. Type-0
//! idempotents are the rank-one projections `h^2 / (4(h,h))` of the Jordan
//! algebra `S^2 H`, a one-parameter family of norm `1/8`; they are described,
//! not listed.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, Degree2Algebra};
use crate::lattice::Vector;
use crate::poly::Poly;
use crate::polysolve::{
    cmp_quadratic_points, idempotent_system, solve, vanishes_on_solutions, virasoro_system, IdempotentConstraints,
    SolveError, SolveStatus, TypeRestriction,
};
use crate::rational::{format_q, texts, ExactText};
use crate::scalar::{q, Quadratic, Scalar, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("type-0 idempotents form a continuum (h^2/(4(h,h)) for non-isotropic h); pass a norm to get the family descriptor")]
    InfiniteFamily,
    #[error("wrong case: {0}")]
    WrongCase(String),
    #[error("unknown idempotent type {0}; expected 0, 1 or 2")]
    BadType(u8),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentRecord<S> {
    pub element: AlgebraElement<S>,
    /// 0, 1 or 2.
    pub kind: u8,
    pub norm: S,
    /// Lattice vectors `λ` with nonzero `v_λ`-coordinate.
    pub support: Vec<Vector>,
    pub p_part: AlgebraElement<S>,
    pub q_part: AlgebraElement<S>,
    /// Index of `I - w` in the same list, if present.
    pub complement: Option<usize>,
    /// Index of the conjugate `P - Q` in the same list, if present.
    pub conjugate: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentRecordJson {
    pub coords: Vec<String>,
    #[serde(rename = "type")]
    pub kind: u8,
    pub norm: String,
    pub support: Vec<Vector>,
    pub complement: Option<usize>,
    pub conjugate: Option<usize>,
}

impl<S: Scalar + ExactText> IdempotentRecord<S> {
    pub fn to_json(&self) -> IdempotentRecordJson {
        IdempotentRecordJson {
            coords: texts(&self.element.coords),
            kind: self.kind,
            norm: self.norm.text(),
            support: self.support.clone(),
            complement: self.complement,
            conjugate: self.conjugate,
        }
    }
}

/// Type from the `v`-support: empty, single, several.
pub fn idempotent_type<S: Scalar>(alg: &Degree2Algebra<S>, w: &[S]) -> u8 {
    alg.q_support(w).len().min(2) as u8
}

/// Records for a list of idempotents, with complement and conjugate links
/// resolved inside the list.
pub fn make_records<S: Scalar>(alg: &Degree2Algebra<S>, elems: Vec<Vec<S>>) -> Vec<IdempotentRecord<S>> {
    let shell = alg.shell();
    let identity = alg.identity_element().coords;
    let mut recs: Vec<IdempotentRecord<S>> = elems
        .into_iter()
        .map(|coords| {
            let element = AlgebraElement { lattice: *alg.lattice(), coords };
            let (p_part, q_part) = alg.pq_split(&element);
            let support = alg.q_support(&element.coords).into_iter().map(|i| shell[i - 3]).collect();
            IdempotentRecord {
                kind: idempotent_type(alg, &element.coords),
                norm: alg.form(&element.coords, &element.coords),
                support,
                p_part,
                q_part,
                element,
                complement: None,
                conjugate: None,
            }
        })
        .collect();
    let coords: Vec<Vec<S>> = recs.iter().map(|r| r.element.coords.clone()).collect();
    for r in recs.iter_mut() {
        let comp: Vec<S> = identity.iter().zip(&r.element.coords).map(|(a, b)| a.clone() - b.clone()).collect();
        let conj = alg.conjugate(&r.element).coords;
        r.complement = coords.iter().position(|c| *c == comp);
        r.conjugate = coords.iter().position(|c| *c == conj);
    }
    recs
}

/// The type-0 family, with its distinguished members `(1/16) u^2` for
/// norm-4 vectors `u` and their complements.
#[derive(Clone, Debug, PartialEq)]
pub struct Type0Family {
    pub norm: Q,
    pub description: String,
    pub distinguished: Vec<IdempotentRecord<Q>>,
}

pub fn type0_family(alg: &Degree2Algebra<Q>) -> Type0Family {
    let identity = alg.identity_element().coords;
    let mut elems: Vec<Vec<Q>> = Vec::new();
    for u in alg.shell() {
        let w = alg.square_of(u).scale(&q(1, 16)).coords;
        let comp: Vec<Q> = identity.iter().zip(&w).map(|(a, b)| a - b).collect();
        for e in [w, comp] {
            if !elems.contains(&e) {
                elems.push(e);
            }
        }
    }
    elems.sort();
    Type0Family {
        norm: q(1, 8),
        description:
            "h^2/(4(h,h)) for h in H with (h,h) != 0; complement is the same expression for h' orthogonal to h".into(),
        distinguished: make_records(alg, elems),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    /// Rational idempotents of the requested types, sorted by coordinates.
    pub records: Vec<IdempotentRecord<Q>>,
    /// Idempotents with coordinates in a quadratic field.
    pub irrational: Vec<IdempotentRecord<Quadratic>>,
    /// Present when type 0 was requested and the norm admits the family.
    pub family: Option<Type0Family>,
    /// Every complex solution of the finite systems was recovered (the
    /// type-0 family, being infinite, is never "complete").
    pub complete: bool,
    pub irrational_root_flags: usize,
}

fn subsets_of_size_at_least(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize >= k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// Idempotents of the given types (subset of `{0, 1, 2}`), optionally of a
/// fixed norm.
pub fn enumerate_idempotents(
    alg: &Degree2Algebra<Q>,
    types: &[u8],
    norm: Option<&Q>,
) -> Result<Enumeration, ClassifyError> {
    if let Some(&t) = types.iter().find(|&&t| t > 2) {
        return Err(ClassifyError::BadType(t));
    }
    let shell = alg.shell();
    let mut restrictions: Vec<TypeRestriction> = Vec::new();
    if types.contains(&1) {
        restrictions.extend(shell.iter().map(|&l| TypeRestriction::Support(vec![l])));
    }
    if types.contains(&2) {
        for sub in subsets_of_size_at_least(shell.len(), 2) {
            restrictions.push(TypeRestriction::Support(sub.iter().map(|&i| shell[i]).collect()));
        }
    }
    let mut family = None;
    let mut complete = true;
    let mut flags = 0;
    let mut rational: Vec<Vec<Q>> = Vec::new();
    let mut quadratic: Vec<Vec<Quadratic>> = Vec::new();
    if types.contains(&0) {
        let Some(nu) = norm else {
            return Err(ClassifyError::InfiniteFamily);
        };
        let sys = idempotent_system(
            alg,
            &IdempotentConstraints { norm: Some(nu.clone()), restriction: TypeRestriction::Type0 },
        )?;
        let v = solve(&sys)?;
        match v.status {
            SolveStatus::Inconsistent => {}
            SolveStatus::PositiveDimensional => {
                let mut fam = type0_family(alg);
                fam.distinguished.retain(|r| &r.norm == nu);
                family = Some(fam);
                complete = false;
            }
            SolveStatus::ZeroDimensional => {
                complete &= v.is_complete();
                flags += v.irrational_root_flags;
                rational.extend(v.rational_solutions);
                quadratic.extend(v.quadratic_solutions);
            }
        }
    }
    let verdicts = restrictions
        .into_par_iter()
        .map(|restriction| {
            let sys = idempotent_system(alg, &IdempotentConstraints { norm: norm.cloned(), restriction })?;
            Ok(solve(&sys)?)
        })
        .collect::<Result<Vec<_>, ClassifyError>>()?;
    for v in verdicts {
        complete &= v.is_complete();
        flags += v.irrational_root_flags;
        rational.extend(v.rational_solutions);
        quadratic.extend(v.quadratic_solutions);
    }
    let zero = vec![Q::zero(); alg.dim()];
    let identity = alg.identity_element().coords;
    rational.retain(|w| *w != zero && *w != identity);
    rational.sort();
    rational.dedup();
    quadratic.sort_by(|a, b| cmp_quadratic_points(a, b));
    quadratic.dedup();
    let qalg = alg.map_scalars(|x| Quadratic::rational(x.clone()));
    Ok(Enumeration {
        records: make_records(alg, rational),
        irrational: make_records(&qalg, quadratic),
        family,
        complete,
        irrational_root_flags: flags,
    })
}

/// A type-1 idempotent written as `a1 λ^2 + a2 λt + a3 t^2 + c v_λ`, where
/// `λ` spans its support and `t ⊥ λ` has `(t,t) = 4`. Since `t` may be
/// irrational, `a2` is reported as the coefficient of `λh` for the primitive
/// lattice vector `h ⊥ λ`; only its vanishing is meaningful.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Type1Parameters {
    pub support: Vector,
    pub a1: Q,
    pub a2_lattice: Q,
    pub a3: Q,
    pub c: Q,
}

pub fn type1_parameters(alg: &Degree2Algebra<Q>, w: &[Q]) -> Option<Type1Parameters> {
    let supp = alg.q_support(w);
    if supp.len() != 1 {
        return None;
    }
    let lambda = alg.shell()[supp[0] - 3];
    let h = alg.lattice().annihilator(lambda);
    let cols: Vec<Vec<Q>> = [(lambda, lambda), (lambda, h), (h, h)]
        .iter()
        .map(|&(x, y)| {
            let f = |v: Vector| [Q::from_integer(v[0].into()), Q::from_integer(v[1].into())];
            alg.sym(f(x), f(y)).coords[..3].to_vec()
        })
        .collect();
    let xyz = crate::linalg::Matrix::from_cols(&cols).solve(&w[..3])?;
    let hh = Q::from_integer(alg.lattice().norm(h).into());
    Some(Type1Parameters {
        support: lambda,
        a1: xyz[0].clone(),
        a2_lattice: xyz[1].clone(),
        a3: xyz[2].clone() * hh / Q::from_integer(4.into()),
        c: w[supp[0]].clone(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VirasoroRecord<S> {
    pub element: AlgebraElement<S>,
    pub central_charge: Q,
    /// The idempotent `u/2`, of norm `c/8`.
    pub half: AlgebraElement<S>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VirasoroRecordJson {
    pub coords: Vec<String>,
    pub central_charge: String,
    pub half: Vec<String>,
}

impl<S: Scalar + ExactText> VirasoroRecord<S> {
    pub fn to_json(&self) -> VirasoroRecordJson {
        VirasoroRecordJson {
            coords: texts(&self.element.coords),
            central_charge: format_q(&self.central_charge),
            half: texts(&self.half.coords),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum VirasoroOutcome {
    Finite {
        records: Vec<VirasoroRecord<Q>>,
        irrational: Vec<VirasoroRecord<Quadratic>>,
        complete: bool,
    },
    PositiveDimensional {
        dimension: usize,
        groebner_basis: Vec<Poly>,
        variables: Vec<String>,
        /// Shell vectors `λ` whose `v_λ`-coordinate vanishes on every
        /// solution (radical membership).
        vanishing_v: Vec<Vector>,
    },
}

fn virasoro_records<S: Scalar>(alg: &Degree2Algebra<S>, c: &Q, sols: Vec<Vec<S>>) -> Vec<VirasoroRecord<S>> {
    let half = S::one() / S::from_i64(2);
    sols.into_iter()
        .map(|coords| {
            let element = AlgebraElement { lattice: *alg.lattice(), coords };
            VirasoroRecord { half: element.scale(&half), element, central_charge: c.clone() }
        })
        .collect()
}

/// Virasoro vectors of central charge `c`: `u × u = 2u`, `(u,u) = c/2`.
pub fn enumerate_virasoro(alg: &Degree2Algebra<Q>, c: &Q) -> Result<VirasoroOutcome, ClassifyError> {
    let sys = virasoro_system(alg, c);
    let v = solve(&sys)?;
    Ok(match v.status {
        SolveStatus::PositiveDimensional => {
            let shell = alg.shell();
            let vanishing_v = (0..shell.len())
                .filter(|&i| vanishes_on_solutions(&sys, &Poly::var(3 + i)))
                .map(|i| shell[i])
                .collect();
            VirasoroOutcome::PositiveDimensional {
                dimension: v.dimension.unwrap_or(0),
                groebner_basis: v.groebner_basis,
                variables: v.variables,
                vanishing_v,
            }
        }
        _ => {
            let complete = v.is_complete();
            let qalg = alg.map_scalars(|x| Quadratic::rational(x.clone()));
            VirasoroOutcome::Finite {
                records: virasoro_records(alg, c, v.rational_solutions),
                irrational: virasoro_records(&qalg, c, v.quadratic_solutions),
                complete,
            }
        }
    })
}

/// Outcome for one unordered pair `{w_i, w_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairAnalysis {
    pub i: usize,
    pub j: usize,
    pub sum_idempotent: bool,
    pub product_zero: bool,
    pub orthogonal: bool,
    /// `w_i - w_j` is an idempotent (so `w_j` is a proper summand of `w_i`).
    pub i_minus_j_idempotent: bool,
    pub j_minus_i_idempotent: bool,
}

/// Checks every unordered pair of a finite list of idempotents.
pub fn sum_analysis<S: Scalar>(alg: &Degree2Algebra<S>, elements: &[Vec<S>]) -> Vec<PairAnalysis> {
    let idem = |x: &[S]| alg.is_idempotent(x) && x.iter().any(|c| !c.is_zero());
    let sub = |a: &[S], b: &[S]| -> Vec<S> { a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect() };
    let mut out = Vec::new();
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            let (a, b) = (&elements[i], &elements[j]);
            let sum: Vec<S> = a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect();
            out.push(PairAnalysis {
                i,
                j,
                sum_idempotent: idem(&sum),
                product_zero: alg.mul(a, b).iter().all(|c| c.is_zero()),
                orthogonal: alg.form(a, b).is_zero(),
                i_minus_j_idempotent: idem(&sub(a, b)),
                j_minus_i_idempotent: idem(&sub(b, a)),
            });
        }
    }
    out
}

/// Proper summands among the finite idempotent sets of a `|b| = 1` algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct ProperSummands {
    /// Type-1/2 proper summands as `(w, conjugate of w)` pairs.
    pub pairs: Vec<(IdempotentRecord<Q>, IdempotentRecord<Q>)>,
    /// Irrational type-1/2 proper summands (none expected).
    pub irrational: Vec<IdempotentRecord<Quadratic>>,
    /// Distinguished type-0 members that are proper summands.
    pub type0: Vec<IdempotentRecord<Q>>,
    /// The candidate set searched: type 1, type 2, distinguished type 0.
    pub candidates: usize,
    /// Every pair partner is orthogonal to its conjugate.
    pub pairs_orthogonal: bool,
}

/// Candidates for `proper_summand_set` and the pair-sum checks, over `Q(sqrt d)`:
/// type 1, type 2 and the distinguished type-0 members, with their types.
pub fn finite_candidates(alg: &Degree2Algebra<Q>) -> Result<(Vec<Vec<Quadratic>>, Vec<u8>), ClassifyError> {
    let en = enumerate_idempotents(alg, &[1, 2], None)?;
    let fam = type0_family(alg);
    let lift = |v: &[Q]| v.iter().map(|x| Quadratic::rational(x.clone())).collect::<Vec<_>>();
    let mut elems = Vec::new();
    let mut kinds = Vec::new();
    for r in en.records.iter().chain(fam.distinguished.iter()) {
        elems.push(lift(&r.element.coords));
        kinds.push(r.kind);
    }
    for r in &en.irrational {
        elems.push(r.element.coords.clone());
        kinds.push(r.kind);
    }
    Ok((elems, kinds))
}

pub fn proper_summand_set(alg: &Degree2Algebra<Q>) -> Result<ProperSummands, ClassifyError> {
    let class = alg.lattice().classify();
    if class.b() != Some(1) {
        return Err(ClassifyError::WrongCase(format!(
            "proper summands are computed for the |b| = 1 case only; this lattice is {}",
            class.label()
        )));
    }
    let (elems, kinds) = finite_candidates(alg)?;
    let qalg = alg.map_scalars(|x| Quadratic::rational(x.clone()));
    let analysis = sum_analysis(&qalg, &elems);
    let mut is_summand = vec![false; elems.len()];
    for p in &analysis {
        if p.i_minus_j_idempotent {
            is_summand[p.j] = true;
        }
        if p.j_minus_i_idempotent {
            is_summand[p.i] = true;
        }
    }
    let mut rational = Vec::new();
    let mut irrational = Vec::new();
    let mut type0 = Vec::new();
    for (k, e) in elems.iter().enumerate() {
        if !is_summand[k] {
            continue;
        }
        match (kinds[k], e.iter().all(|x| x.is_rational())) {
            (0, _) => type0.push(e.iter().map(|x| x.a.clone()).collect::<Vec<_>>()),
            (_, true) => rational.push(e.iter().map(|x| x.a.clone()).collect::<Vec<_>>()),
            (_, false) => irrational.push(e.clone()),
        }
    }
    rational.sort();
    let recs = make_records(alg, rational);
    let mut pairs = Vec::new();
    let mut pairs_orthogonal = true;
    let mut used = vec![false; recs.len()];
    for (i, r) in recs.iter().enumerate() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if let Some(j) = r.conjugate.filter(|&j| !used[j]) {
            used[j] = true;
            pairs_orthogonal &= alg.form(&r.element.coords, &recs[j].element.coords).is_zero();
            pairs.push((r.clone(), recs[j].clone()));
        } else {
            pairs_orthogonal = false;
        }
    }
    type0.sort();
    Ok(ProperSummands {
        pairs,
        irrational: make_records(&qalg, irrational),
        type0: make_records(alg, type0),
        candidates: elems.len(),
        pairs_orthogonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice2;

    fn alg(g: [[i64; 2]; 2]) -> Degree2Algebra<Q> {
        Degree2Algebra::build(&Lattice2::validate(g).unwrap()).unwrap()
    }

    #[test]
    fn type_one_for_b_one() {
        let a = alg([[4, 1], [1, 4]]);
        let en = enumerate_idempotents(&a, &[1], None).unwrap();
        assert_eq!(en.records.len(), 8);
        assert!(en.complete);
        for r in &en.records {
            assert!(a.is_idempotent(&r.element.coords));
            assert_eq!(r.kind, 1);
            assert!(r.complement.is_some() && r.conjugate.is_some());
            let c = r.q_part.coords.iter().find(|x| !x.is_zero()).unwrap();
            assert!(*c == q(1, 8) || *c == q(-1, 8));
        }
        for r in &en.records {
            let p = type1_parameters(&a, &r.element.coords).unwrap();
            assert_eq!((p.a1, p.a2_lattice), (q(1, 32), q(0, 1)));
            assert!(p.a3 == q(0, 1) || p.a3 == q(1, 16));
            assert_eq!(r.norm, if p.a3.is_zero() { q(1, 16) } else { q(3, 16) });
        }
        let small = enumerate_idempotents(&a, &[1], Some(&q(1, 16))).unwrap();
        assert_eq!(small.records.len(), 4);
    }

    #[test]
    fn type_zero_needs_a_norm() {
        let a = alg([[4, 0], [0, 4]]);
        assert_eq!(enumerate_idempotents(&a, &[0], None), Err(ClassifyError::InfiniteFamily));
        let en = enumerate_idempotents(&a, &[0], Some(&q(1, 8))).unwrap();
        let fam = en.family.unwrap();
        assert_eq!(fam.distinguished.len(), 2);
        assert!(!en.complete);
        // no type-0 idempotent has any other norm
        let none = enumerate_idempotents(&a, &[0], Some(&q(1, 16))).unwrap();
        assert!(none.family.is_none() && none.records.is_empty());
        assert_eq!(enumerate_idempotents(&a, &[3], None), Err(ClassifyError::BadType(3)));
    }

    #[test]
    fn virasoro_halves_are_norm_one_sixteenth_idempotents() {
        let a = alg([[4, 0], [0, 4]]);
        let VirasoroOutcome::Finite { records, .. } = enumerate_virasoro(&a, &q(1, 2)).unwrap() else {
            panic!("expected finitely many");
        };
        assert_eq!(records.len(), 4);
        let en = enumerate_idempotents(&a, &[0, 1, 2], Some(&q(1, 16))).unwrap();
        let halves: Vec<Vec<Q>> = records.iter().map(|r| r.half.coords.clone()).collect();
        let idems: Vec<Vec<Q>> = en.records.iter().map(|r| r.element.coords.clone()).collect();
        assert_eq!(halves, idems);
    }

    #[test]
    fn orthogonal_pair_sums_to_an_idempotent() {
        let a = alg([[4, 0], [0, 4]]);
        let r2 = a.square_of([1, 0]).scale(&q(1, 16)).coords;
        let s2 = a.square_of([0, 1]).scale(&q(1, 16)).coords;
        let res = sum_analysis(&a, &[r2, s2]);
        assert!(res[0].sum_idempotent && res[0].product_zero && res[0].orthogonal);
        assert!(!res[0].i_minus_j_idempotent);
    }

    #[test]
    fn wrong_case_is_reported() {
        assert!(matches!(proper_summand_set(&alg([[4, 0], [0, 4]])), Err(ClassifyError::WrongCase(_))));
    }

    #[test]
    fn proper_summands_for_b_one() {
        let a = alg([[4, 1], [1, 4]]);
        let ps = proper_summand_set(&a).unwrap();
        assert_eq!(ps.pairs.len(), 2);
        assert!(ps.pairs_orthogonal && ps.irrational.is_empty());
        for (w, wb) in &ps.pairs {
            assert_eq!((w.kind, wb.kind), (1, 1));
            assert_eq!((w.norm.clone(), wb.norm.clone()), (q(1, 16), q(1, 16)));
        }
        // (1/16)t^2 with t orthogonal to r or to s
        assert_eq!(ps.type0.len(), 2);
        assert_eq!(ps.type0[0].element.coords[..3], [q(1, 240), q(-1, 30), q(1, 15)]);
    }
}
