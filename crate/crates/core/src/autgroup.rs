//! Automorphism groups via permutations of a finite distinguished set.
//!
//! An automorphism permutes any finite set it must preserve (for example
//! all rational idempotents of a given norm). Each permutation of the set
//! fixes the map on its span; the remaining images, on a completion of the
//! span, are unknowns constrained by the product (and form) equations and
//! are solved exactly.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Degree2Algebra;
use crate::classify::{enumerate_idempotents, enumerate_virasoro, ClassifyError, VirasoroOutcome};
use crate::group::{permutations, CayleyTable};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::polysolve::{solve, PolySystem, SolveError, SolveStatus};
use crate::rational::{primitive_integer_vector, rats, Rat};
use crate::scalar::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("distinguished set and completion do not span the algebra")]
    SpanFailure,
    #[error("the distinguished set is empty or not finite for this algebra")]
    NoDistinguishedSet,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistinguishedKind {
    /// Halves of the central charge 1/2 Virasoro vectors.
    VirasoroHalf,
    /// Type-1 idempotents of norm 1/16.
    Type1Norm116,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistinguishedSet {
    pub kind: DistinguishedKind,
    pub elements: Vec<Vec<Q>>,
    /// Extra vectors completing `span(elements)` to the whole algebra: the
    /// orthogonal complement when the form is nondegenerate on the span.
    pub completion: Vec<Vec<Q>>,
    pub orthogonal_completion: bool,
}

/// `Type1Norm116` when `|b| = 1`, `VirasoroHalf` otherwise.
pub fn default_kind(alg: &Degree2Algebra<Q>) -> DistinguishedKind {
    if alg.lattice().classify().b() == Some(1) {
        DistinguishedKind::Type1Norm116
    } else {
        DistinguishedKind::VirasoroHalf
    }
}

/// Indices of a maximal independent subset, scanning in order.
fn independent_indices(vs: &[Vec<Q>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..vs.len() {
        let mut cols: Vec<Vec<Q>> = chosen.iter().map(|&j| vs[j].clone()).collect();
        cols.push(vs[i].clone());
        if Matrix::from_cols(&cols).rank() == cols.len() {
            chosen.push(i);
        }
    }
    chosen
}

pub fn distinguished_set(alg: &Degree2Algebra<Q>, kind: DistinguishedKind) -> Result<DistinguishedSet, AutError> {
    let elements: Vec<Vec<Q>> = match kind {
        DistinguishedKind::VirasoroHalf => match enumerate_virasoro(alg, &q(1, 2))? {
            VirasoroOutcome::Finite { records, .. } => records.into_iter().map(|r| r.half.coords).collect(),
            VirasoroOutcome::PositiveDimensional { .. } => return Err(AutError::NoDistinguishedSet),
        },
        DistinguishedKind::Type1Norm116 => {
            enumerate_idempotents(alg, &[1], Some(&q(1, 16)))?.records.into_iter().map(|r| r.element.coords).collect()
        }
    };
    if elements.is_empty() {
        return Err(AutError::NoDistinguishedSet);
    }
    let span: Vec<Vec<Q>> = independent_indices(&elements).into_iter().map(|i| elements[i].clone()).collect();
    let n = alg.dim();
    let rows: Vec<Vec<Q>> = span.iter().map(|d| alg.form_matrix().mul_vec(d)).collect();
    let perp = Matrix::from_rows(rows).kernel();
    let mut all = span.clone();
    all.extend(perp.iter().cloned());
    let (completion, orthogonal_completion) = if Matrix::from_cols(&all).rank() == n {
        let c = perp.iter().map(|v| primitive_integer_vector(v).into_iter().map(Q::from_integer).collect()).collect();
        (c, true)
    } else {
        let mut c = Vec::new();
        let mut cur = span.clone();
        for i in 0..n {
            let mut e = vec![Q::zero(); n];
            e[i] = q(1, 1);
            cur.push(e.clone());
            if Matrix::from_cols(&cur).rank() == cur.len() {
                c.push(e);
            } else {
                cur.pop();
            }
        }
        (c, false)
    };
    if span.len() + completion.len() != n {
        return Err(AutError::SpanFailure);
    }
    Ok(DistinguishedSet { kind, elements, completion, orthogonal_completion })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureTag {
    Dihedral8,
    Sym4X2,
    /// Acts on the three orthogonal pairs of the distinguished set as the
    /// full symmetric group.
    ContainsSym3,
    Other(usize),
}

impl std::fmt::Display for StructureTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StructureTag::Dihedral8 => write!(f, "dihedral-8"),
            StructureTag::Sym4X2 => write!(f, "sym4-x-2"),
            StructureTag::ContainsSym3 => write!(f, "contains-sym3"),
            StructureTag::Other(n) => write!(f, "other({n})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutGroupResult {
    pub distinguished: DistinguishedSet,
    pub form_preserving: bool,
    pub order: usize,
    /// All elements, sorted by their permutation of the distinguished set.
    pub elements: Vec<Matrix<Q>>,
    pub permutations: Vec<Vec<usize>>,
    /// Indices into `elements`.
    pub generators: Vec<usize>,
    pub table: Option<CayleyTable>,
    pub structure: StructureTag,
    /// Orthogonal pairs of the distinguished set (form value 0), when the
    /// orthogonality graph is a perfect matching.
    pub orthogonal_pairs: Option<Vec<(usize, usize)>>,
    /// Order of the induced permutation group on `orthogonal_pairs`.
    pub pair_action_order: Option<usize>,
    pub permutations_tried: usize,
    pub irrational_completions: usize,
    pub positive_dimensional_candidates: usize,
    /// The search provably found every automorphism of the requested kind.
    pub certified: bool,
    pub certification: String,
}

impl AutGroupResult {
    pub fn closed(&self) -> bool {
        self.table.is_some()
    }

    pub fn report(&self) -> AutGroupReport {
        let mat = |m: &Matrix<Q>| m.to_rows().into_iter().map(|r| rats(&r)).collect::<Vec<_>>();
        AutGroupReport {
            order: self.order,
            structure: self.structure.to_string(),
            distinguished_kind: self.distinguished.kind,
            distinguished: self.distinguished.elements.iter().map(|v| rats(v)).collect(),
            completion: self.distinguished.completion.iter().map(|v| rats(v)).collect(),
            form_preserving: self.form_preserving,
            generators: self.generators.iter().map(|&g| mat(&self.elements[g])).collect(),
            generator_permutations: self.generators.iter().map(|&g| self.permutations[g].clone()).collect(),
            permutations: self.permutations.clone(),
            closed: self.closed(),
            dihedral: dihedral_check(self),
            element_orders: self.table.as_ref().map(|t| t.order_statistics()).unwrap_or_default(),
            pair_action_order: self.pair_action_order,
            certified: self.certified,
            certification: self.certification.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutGroupReport {
    pub order: usize,
    pub structure: String,
    pub distinguished_kind: DistinguishedKind,
    pub distinguished: Vec<Vec<Rat>>,
    pub completion: Vec<Vec<Rat>>,
    pub form_preserving: bool,
    /// Matrices acting on coordinate columns.
    pub generators: Vec<Vec<Vec<Rat>>>,
    pub generator_permutations: Vec<Vec<usize>>,
    /// Image of each distinguished element, for every group element.
    pub permutations: Vec<Vec<usize>>,
    pub closed: bool,
    pub dihedral: bool,
    /// `(element order, count)`, increasing.
    pub element_orders: Vec<(usize, usize)>,
    pub pair_action_order: Option<usize>,
    pub certified: bool,
    pub certification: String,
}

/// True iff the group has order 8 and is dihedral.
pub fn dihedral_check(result: &AutGroupResult) -> bool {
    result.order == 8 && result.table.as_ref().is_some_and(|t| t.is_dihedral_8())
}

fn poly_product(alg: &Degree2Algebra<Q>, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let n = alg.dim();
    let table = alg.structure_constants();
    let mut out = vec![Poly::zero(); n];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if b[j].is_zero() {
                continue;
            }
            let ab = a[i].mul(&b[j]);
            for (k, c) in table[i][j].iter().enumerate() {
                if !c.is_zero() {
                    out[k] = out[k].add(&ab.scale(c));
                }
            }
        }
    }
    out
}

fn poly_form(alg: &Degree2Algebra<Q>, a: &[Poly], b: &[Poly]) -> Poly {
    let g = alg.form_matrix();
    let n = alg.dim();
    let mut out = Poly::zero();
    for i in 0..n {
        for j in 0..n {
            let c = &g[(i, j)];
            if !c.is_zero() && !a[i].is_zero() && !b[j].is_zero() {
                out = out.add(&a[i].mul(&b[j]).scale(c));
            }
        }
    }
    out
}

/// `g` preserves the product (and the form, if asked) on all basis pairs.
pub fn is_automorphism(alg: &Degree2Algebra<Q>, g: &Matrix<Q>, form_preserving: bool) -> bool {
    let n = alg.dim();
    if g.determinant().is_zero() {
        return false;
    }
    let cols: Vec<Vec<Q>> = (0..n).map(|j| g.col(j)).collect();
    for i in 0..n {
        for j in i..n {
            let lhs = g.mul_vec(&alg.structure_constants()[i][j]);
            if lhs != alg.mul(&cols[i], &cols[j]) {
                return false;
            }
        }
    }
    !form_preserving || &g.transpose().mul(alg.form_matrix()).mul(g) == alg.form_matrix()
}

/// `g` maps the finite set onto itself.
pub fn permutes_set(g: &Matrix<Q>, set: &[Vec<Q>]) -> bool {
    set.iter().all(|v| set.contains(&g.mul_vec(v)))
}

struct Candidate {
    perm: Vec<usize>,
    maps: Vec<Matrix<Q>>,
    irrational: usize,
    positive_dimensional: bool,
    complete: bool,
}

fn extend_permutation(
    alg: &Degree2Algebra<Q>,
    dset: &DistinguishedSet,
    basis_idx: &[usize],
    basis_inv: &Matrix<Q>,
    perm: &[usize],
    form_preserving: bool,
) -> Result<Candidate, AutError> {
    let n = alg.dim();
    let m = dset.completion.len();
    let k = basis_idx.len();
    let constrained = form_preserving && dset.orthogonal_completion;
    let targets: &[Vec<Q>] = if constrained { &dset.completion } else { &[] };
    let per = if constrained { m } else { n };
    let nvars = m * per;
    let constant = |v: &[Q]| v.iter().map(|x| Poly::constant(x.clone())).collect::<Vec<Poly>>();
    let mut images: Vec<Vec<Poly>> = basis_idx.iter().map(|&b| constant(&dset.elements[perm[b]])).collect();
    for j in 0..m {
        let mut img = vec![Poly::zero(); n];
        for t in 0..per {
            let y = Poly::var(j * per + t);
            if constrained {
                for (c, x) in img.iter_mut().zip(&targets[t]) {
                    *c = c.add(&y.scale(x));
                }
            } else {
                img[t] = y;
            }
        }
        images.push(img);
    }
    let columns: Vec<Vec<Q>> =
        basis_idx.iter().map(|&b| dset.elements[b].clone()).chain(dset.completion.iter().cloned()).collect();
    let mut eqs: Vec<Poly> = Vec::new();
    for a in 0..n {
        for b in a..n {
            let prod = alg.mul(&columns[a], &columns[b]);
            let alpha = basis_inv.mul_vec(&prod);
            let mut lhs = vec![Poly::zero(); n];
            for (c, img) in alpha.iter().zip(&images) {
                if !c.is_zero() {
                    for (l, p) in lhs.iter_mut().zip(img) {
                        *l = l.add(&p.scale(c));
                    }
                }
            }
            let rhs = poly_product(alg, &images[a], &images[b]);
            eqs.extend(lhs.iter().zip(&rhs).map(|(l, r)| l.sub(r)));
            if form_preserving {
                let f = poly_form(alg, &images[a], &images[b]).sub(&Poly::constant(alg.form(&columns[a], &columns[b])));
                eqs.push(f);
            }
        }
    }
    eqs.retain(|p| !p.is_zero());
    let mut cand =
        Candidate { perm: perm.to_vec(), maps: Vec::new(), irrational: 0, positive_dimensional: false, complete: true };
    let to_matrix = |sol: &[Q]| {
        let cols: Vec<Vec<Q>> = images.iter().map(|img| img.iter().map(|p| p.eval(sol)).collect()).collect();
        Matrix::from_cols(&cols).mul(basis_inv)
    };
    if nvars == 0 || eqs.iter().all(|p| p.total_degree() == 0) {
        if eqs.is_empty() {
            let g = to_matrix(&vec![Q::zero(); nvars]);
            if nvars == 0 && is_automorphism(alg, &g, form_preserving) {
                cand.maps.push(g);
            } else if nvars > 0 {
                cand.positive_dimensional = true;
                cand.complete = false;
            }
        }
        return Ok(cand);
    }
    let names = (0..m).flat_map(|j| (0..per).map(move |t| format!("g{}_{}", k + j, t))).collect();
    let verdict = solve(&PolySystem::new(names, eqs))?;
    match verdict.status {
        SolveStatus::Inconsistent => {}
        SolveStatus::PositiveDimensional => {
            cand.positive_dimensional = true;
            cand.complete = false;
        }
        SolveStatus::ZeroDimensional => {
            cand.complete = verdict.is_complete();
            cand.irrational = verdict.quadratic_solutions.len();
            for sol in &verdict.rational_solutions {
                let g = to_matrix(sol);
                if is_automorphism(alg, &g, form_preserving) {
                    cand.maps.push(g);
                }
            }
        }
    }
    Ok(cand)
}

fn orthogonal_matching(alg: &Degree2Algebra<Q>, d: &[Vec<Q>]) -> Option<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for i in 0..d.len() {
        let partners: Vec<usize> = (0..d.len()).filter(|&j| j != i && alg.form(&d[i], &d[j]).is_zero()).collect();
        if partners.len() != 1 {
            return None;
        }
        if i < partners[0] {
            pairs.push((i, partners[0]));
        }
    }
    Some(pairs)
}

pub fn aut_group(
    alg: &Degree2Algebra<Q>,
    dset: &DistinguishedSet,
    form_preserving: bool,
) -> Result<AutGroupResult, AutError> {
    let d = &dset.elements;
    let basis_idx = independent_indices(d);
    let columns: Vec<Vec<Q>> = basis_idx.iter().map(|&b| d[b].clone()).chain(dset.completion.iter().cloned()).collect();
    let basis_inv = Matrix::from_cols(&columns).inverse().ok_or(AutError::SpanFailure)?;
    // coefficients of each distinguished element on the independent subset
    let sub = Matrix::from_cols(&basis_idx.iter().map(|&b| d[b].clone()).collect::<Vec<_>>());
    let coeffs: Vec<Vec<Q>> = d.iter().map(|v| sub.solve(v).expect("in span")).collect();
    let gram: Vec<Vec<Q>> = d.iter().map(|x| d.iter().map(|y| alg.form(x, y)).collect()).collect();
    let zero_prod: Vec<Vec<bool>> =
        d.iter().map(|x| d.iter().map(|y| alg.mul(x, y).iter().all(|c| c.is_zero())).collect()).collect();
    let admissible = |p: &Vec<usize>| {
        let n = d.len();
        (0..n).all(|i| (0..n).all(|j| zero_prod[i][j] == zero_prod[p[i]][p[j]]))
            && (!form_preserving || (0..n).all(|i| (0..n).all(|j| gram[i][j] == gram[p[i]][p[j]])))
            && (0..n).all(|i| {
                let img: Vec<Q> = (0..d[0].len())
                    .map(|c| basis_idx.iter().zip(&coeffs[i]).fold(Q::zero(), |acc, (&b, a)| acc + a * &d[p[b]][c]))
                    .collect();
                img == d[p[i]]
            })
    };
    let perms: Vec<Vec<usize>> = permutations(d.len()).into_iter().filter(admissible).collect();
    let tried = perms.len();
    let cands = perms
        .par_iter()
        .map(|p| extend_permutation(alg, dset, &basis_idx, &basis_inv, p, form_preserving))
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries: Vec<(Vec<usize>, Matrix<Q>)> = Vec::new();
    let mut irrational = 0;
    let mut positive = 0;
    let mut all_complete = true;
    for c in cands {
        irrational += c.irrational;
        positive += c.positive_dimensional as usize;
        all_complete &= c.complete;
        for g in c.maps {
            entries.push((c.perm.clone(), g));
        }
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.to_rows().cmp(&b.1.to_rows())));
    entries.dedup_by(|a, b| a.1 == b.1);
    let (permutations, elements): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
    let table = CayleyTable::from_elements(&elements, |a: &Matrix<Q>, b| a.mul(b), |a, b| a == b);
    let generators = table.as_ref().map(|t| t.greedy_generators()).unwrap_or_default();
    let orthogonal_pairs = orthogonal_matching(alg, d);
    let pair_action_order = orthogonal_pairs.as_ref().map(|pairs| {
        let block = |i: usize| pairs.iter().position(|&(a, b)| a == i || b == i).unwrap();
        let mut acts: Vec<Vec<usize>> =
            permutations.iter().map(|p| pairs.iter().map(|&(a, _)| block(p[a])).collect()).collect();
        acts.sort();
        acts.dedup();
        acts.len()
    });
    let order = elements.len();
    let structure =
        structure_tag(&elements, &permutations, table.as_ref(), orthogonal_pairs.as_ref(), pair_action_order);
    let (certified, certification) = certify(alg, dset, form_preserving, all_complete, tried, irrational)?;
    Ok(AutGroupResult {
        distinguished: dset.clone(),
        form_preserving,
        order,
        elements,
        permutations,
        generators,
        table,
        structure,
        orthogonal_pairs,
        pair_action_order,
        permutations_tried: tried,
        irrational_completions: irrational,
        positive_dimensional_candidates: positive,
        certified,
        certification,
    })
}

fn structure_tag(
    elements: &[Matrix<Q>],
    perms: &[Vec<usize>],
    table: Option<&CayleyTable>,
    pairs: Option<&Vec<(usize, usize)>>,
    pair_action_order: Option<usize>,
) -> StructureTag {
    let order = elements.len();
    if table.is_some_and(|t| t.is_dihedral_8()) {
        return StructureTag::Dihedral8;
    }
    // g ↦ (permutation, sign of det) embeds the group into Sym4 × Z2
    if order == 48 && perms.first().is_some_and(|p| p.len() == 4) {
        let mut images: Vec<(Vec<usize>, bool)> =
            elements.iter().zip(perms).map(|(g, p)| (p.clone(), g.determinant() > Q::zero())).collect();
        let mut ps = perms.to_vec();
        ps.sort();
        ps.dedup();
        images.sort();
        images.dedup();
        if ps.len() == 24 && images.len() == 48 {
            return StructureTag::Sym4X2;
        }
    }
    if pairs.is_some_and(|p| p.len() == 3) && pair_action_order == Some(6) {
        return StructureTag::ContainsSym3;
    }
    StructureTag::Other(order)
}

fn certify(
    alg: &Degree2Algebra<Q>,
    dset: &DistinguishedSet,
    form_preserving: bool,
    all_complete: bool,
    tried: usize,
    irrational: usize,
) -> Result<(bool, String), AutError> {
    if !form_preserving {
        return Ok((
            false,
            "subgroup found by this method (product-only maps need not preserve the distinguished set)".into(),
        ));
    }
    if !all_complete {
        return Ok((false, "subgroup found by this method (some completion systems were not fully solved)".into()));
    }
    let norm = alg.form(&dset.elements[0], &dset.elements[0]);
    if dset.elements.iter().any(|w| alg.form(w, w) != norm) {
        return Ok((false, "subgroup found by this method (distinguished set has mixed norms)".into()));
    }
    let all = enumerate_idempotents(alg, &[0, 1, 2], Some(&norm))?;
    let mut found: Vec<Vec<Q>> = all.records.iter().map(|r| r.element.coords.clone()).collect();
    let mut mine = dset.elements.clone();
    found.sort();
    mine.sort();
    if !all.complete || found != mine {
        return Ok((
            false,
            "subgroup found by this method (distinguished set is not the full set of rational idempotents of its norm)"
                .into(),
        ));
    }
    Ok((
        true,
        format!(
            "complete over Q: the distinguished set is every rational idempotent of norm {}, so every form-preserving rational automorphism permutes it; all {} admissible permutations were extended exactly ({} irrational completions discarded)",
            crate::rational::format_q(&norm),
            tried,
            irrational
        ),
    ))
}
