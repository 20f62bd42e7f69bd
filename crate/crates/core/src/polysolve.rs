//! Exact solving of small quadratic systems over `Q`, and the polynomial
//! systems describing idempotents and Virasoro vectors of an algebra.
//!
//! `solve` computes a reduced lex Groebner basis, reads the dimension off the
//! leading monomials and, in the zero-dimensional case, back-substitutes one
//! variable at a time (last variable first). At each step the gcd of every
//! basis element specialised at the partial solution is the univariate
//! eliminant for that branch. Rational roots are found with the rational-root
//! theorem. A rational eliminant without rational roots is counted as an
//! irrational branch; if it is quadratic the branch is continued inside
//! `Q(sqrt D)` so the irrational solutions are still available exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Degree2Algebra};
use crate::groebner::{fglm_to_lex, groebner_basis, is_unit};
use crate::lattice::Vector;
use crate::linalg::Matrix;
use crate::poly::{IntTerm, Monomial, MonomialOrder, Poly, MAX_VARS};
use crate::rational::{rats, Rat};
use crate::scalar::{Quadratic, Scalar, Q};
use crate::upoly::{rational_roots, UPoly};

/// Variables a caller may declare (saturation variables come on top).
pub const MAX_SYSTEM_VARS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("polynomial {index} has total degree {degree}; at most 2 is supported")]
    DegreeTooHigh { index: usize, degree: u32 },
    #[error("{count} variables declared; at most {max} are supported")]
    TooManyVariables { count: usize, max: usize },
    #[error("polynomial {index} uses undeclared variable index {var}")]
    UndeclaredVariable { index: usize, var: usize },
    #[error("malformed system: {0}")]
    Malformed(String),
}

/// Polynomial equations `p = 0` in named variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    pub variables: Vec<String>,
    pub polynomials: Vec<Poly>,
    /// Variables required to be nonzero; solutions violating this are dropped.
    pub nonzero: Vec<usize>,
    /// Number of trailing auxiliary variables (from `y*x - 1` saturations);
    /// they are projected away from reported solutions.
    pub auxiliary: usize,
}

impl PolySystem {
    pub fn new(variables: Vec<String>, polynomials: Vec<Poly>) -> Self {
        PolySystem { variables, polynomials, nonzero: Vec::new(), auxiliary: 0 }
    }

    /// Declared (non-auxiliary) variables.
    pub fn primary_variables(&self) -> &[String] {
        &self.variables[..self.variables.len() - self.auxiliary]
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let n = self.variables.len();
        let primary = n.saturating_sub(self.auxiliary);
        if primary > MAX_SYSTEM_VARS || n > MAX_VARS {
            return Err(SolveError::TooManyVariables { count: n, max: MAX_SYSTEM_VARS });
        }
        if self.auxiliary > n {
            return Err(SolveError::Malformed("more auxiliary variables than variables".into()));
        }
        for (index, p) in self.polynomials.iter().enumerate() {
            let degree = p.total_degree();
            if degree > 2 {
                return Err(SolveError::DegreeTooHigh { index, degree });
            }
            if let Some(&var) = p.variables().iter().find(|&&v| v >= n) {
                return Err(SolveError::UndeclaredVariable { index, var });
            }
        }
        if let Some(&v) = self.nonzero.iter().find(|&&v| v >= n) {
            return Err(SolveError::Malformed(format!("nonzero constraint on undeclared variable {v}")));
        }
        Ok(())
    }

    /// True if `point` (over all variables, auxiliary included) satisfies
    /// every equation and inequation.
    pub fn satisfied_by<S: Scalar>(&self, point: &[S]) -> bool {
        self.polynomials.iter().all(|p| p.eval(point).is_zero()) && self.nonzero.iter().all(|&i| !point[i].is_zero())
    }

    pub fn to_json(&self) -> PolySystemJson {
        let n = self.variables.len();
        PolySystemJson {
            variables: self.variables.clone(),
            polynomials: self.polynomials.iter().map(|p| p.to_int_terms(n)).collect(),
            nonzero: self.nonzero.clone(),
            auxiliary: self.auxiliary,
        }
    }

    pub fn from_json(j: &PolySystemJson) -> Result<Self, SolveError> {
        let polynomials = j
            .polynomials
            .iter()
            .map(|t| Poly::from_int_terms(t).map_err(SolveError::Malformed))
            .collect::<Result<Vec<_>, _>>()?;
        let sys = PolySystem {
            variables: j.variables.clone(),
            polynomials,
            nonzero: j.nonzero.clone(),
            auxiliary: j.auxiliary,
        };
        sys.validate()?;
        Ok(sys)
    }
}

/// On-disk form: each polynomial is a list of integer-coefficient terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySystemJson {
    pub variables: Vec<String>,
    pub polynomials: Vec<Vec<IntTerm>>,
    #[serde(default)]
    pub nonzero: Vec<usize>,
    #[serde(default)]
    pub auxiliary: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    ZeroDimensional,
    PositiveDimensional,
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveVerdict {
    pub status: SolveStatus,
    /// Declared variables (auxiliary ones removed).
    pub variables: Vec<String>,
    /// Sorted lexicographically.
    pub rational_solutions: Vec<Vec<Q>>,
    /// Eliminant factors of degree >= 2 without rational roots met during
    /// back-substitution (one per branch and variable).
    pub irrational_root_flags: usize,
    /// Solutions with coordinates in a single quadratic field `Q(sqrt d)`,
    /// recovered from quadratic irrational branches.
    pub quadratic_solutions: Vec<Vec<Quadratic>>,
    /// Branches that could not be followed exactly (higher-degree or nested
    /// irrationalities).
    pub unresolved_branches: usize,
    /// Krull dimension when positive-dimensional.
    pub dimension: Option<usize>,
    /// Number of complex solutions counted with multiplicity (standard
    /// monomials), before inequations are applied.
    pub multiplicity_count: Option<usize>,
    pub groebner_basis: Vec<Poly>,
}

impl SolveVerdict {
    /// Every complex solution is listed (rational or quadratic).
    pub fn is_complete(&self) -> bool {
        self.status != SolveStatus::PositiveDimensional && self.unresolved_branches == 0
    }

    /// Lex basis elements involving only variable `i`.
    pub fn eliminants(&self, i: usize) -> Vec<&Poly> {
        self.groebner_basis
            .iter()
            .filter(|p| {
                let v = p.variables();
                !v.is_empty() && v.iter().all(|&x| x == i)
            })
            .collect()
    }

    pub fn report(&self) -> VerdictReport {
        let n =
            self.variables.len().max(self.groebner_basis.iter().flat_map(|p| p.variables()).max().map_or(0, |m| m + 1));
        VerdictReport {
            status: self.status,
            variables: self.variables.clone(),
            rational_solutions: self.rational_solutions.iter().map(|s| rats(s)).collect(),
            irrational_root_flags: self.irrational_root_flags,
            quadratic_solutions: self
                .quadratic_solutions
                .iter()
                .map(|s| s.iter().map(|x| x.to_string()).collect())
                .collect(),
            unresolved_branches: self.unresolved_branches,
            dimension: self.dimension,
            multiplicity_count: self.multiplicity_count,
            groebner_basis: self.groebner_basis.iter().map(|p| p.to_int_terms(n)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub status: SolveStatus,
    pub variables: Vec<String>,
    pub rational_solutions: Vec<Vec<Rat>>,
    pub irrational_root_flags: usize,
    pub quadratic_solutions: Vec<Vec<String>>,
    pub unresolved_branches: usize,
    pub dimension: Option<usize>,
    pub multiplicity_count: Option<usize>,
    pub groebner_basis: Vec<Vec<IntTerm>>,
}

pub fn solve(sys: &PolySystem) -> Result<SolveVerdict, SolveError> {
    sys.validate()?;
    Ok(solve_unchecked(sys))
}

/// `solve` without the degree and variable-count limits.
pub(crate) fn solve_unchecked(sys: &PolySystem) -> SolveVerdict {
    let n = sys.variables.len();
    let keep = n - sys.auxiliary;
    // a degree-compatible basis first: cheap, and enough to read off the
    // dimension; zero-dimensional ideals are then converted to lex by FGLM
    let grevlex = groebner_basis(&sys.polynomials, MonomialOrder::GrevLex);
    let mut verdict = SolveVerdict {
        status: SolveStatus::Inconsistent,
        variables: sys.variables[..keep].to_vec(),
        rational_solutions: Vec::new(),
        irrational_root_flags: 0,
        quadratic_solutions: Vec::new(),
        unresolved_branches: 0,
        dimension: None,
        multiplicity_count: Some(0),
        groebner_basis: grevlex.clone(),
    };
    if is_unit(&grevlex) {
        return verdict;
    }
    let lms: Vec<Monomial> = grevlex.iter().map(|p| *p.leading(MonomialOrder::GrevLex).unwrap().0).collect();
    let zero_dim = (0..n).all(|i| lms.iter().any(|m| m.pure_power_of() == Some(i)));
    if !zero_dim {
        verdict.status = SolveStatus::PositiveDimensional;
        verdict.dimension = Some(krull_dimension(&lms, n));
        verdict.multiplicity_count = None;
        verdict.groebner_basis = groebner_basis(&sys.polynomials, MonomialOrder::Lex);
        return verdict;
    }
    verdict.status = SolveStatus::ZeroDimensional;
    verdict.multiplicity_count = Some(count_standard_monomials(&lms, n));
    let gb = fglm_to_lex(&grevlex, MonomialOrder::GrevLex, n);
    verdict.groebner_basis = gb.clone();

    let mut bs = Backsolve::new(&gb, n);
    let mut vals = vec![Quadratic::zero(); n];
    bs.extend(n, &mut vals, BigInt::zero());
    verdict.irrational_root_flags = bs.flags;
    verdict.unresolved_branches = bs.unresolved;
    for sol in bs.solutions {
        assert!(sys.polynomials.iter().all(|p| p.eval(&sol).is_zero()), "back-substituted point fails re-substitution");
        if sys.nonzero.iter().any(|&i| sol[i].is_zero()) {
            continue;
        }
        let sol: Vec<Quadratic> = sol.into_iter().take(keep).collect();
        if sol.iter().all(|x| x.is_rational()) {
            verdict.rational_solutions.push(sol.into_iter().map(|x| x.a).collect());
        } else {
            verdict.quadratic_solutions.push(sol);
        }
    }
    verdict.rational_solutions.sort();
    verdict.quadratic_solutions.sort_by(|a, b| cmp_quadratic_points(a, b));
    verdict
}

/// Deterministic order on points with quadratic coordinates.
pub fn cmp_quadratic_points(x: &[Quadratic], y: &[Quadratic]) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        let o = a.d.cmp(&b.d).then_with(|| a.a.cmp(&b.a)).then_with(|| a.b.cmp(&b.b));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Largest set of variables containing the support of no leading monomial.
fn krull_dimension(lms: &[Monomial], n: usize) -> usize {
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let independent = lms.iter().all(|m| m.support().any(|i| mask & (1 << i) == 0));
        if independent {
            best = size;
        }
    }
    best
}

/// Monomials outside the leading ideal (finite in the zero-dimensional case).
fn count_standard_monomials(lms: &[Monomial], n: usize) -> usize {
    fn rec(i: usize, m: &mut Monomial, lms: &[Monomial], n: usize) -> usize {
        if i == n {
            return 1;
        }
        let mut total = 0;
        while !lms.iter().any(|l| l.divides(m)) {
            total += rec(i + 1, m, lms, n);
            m.0[i] += 1;
        }
        m.0[i] = 0;
        total
    }
    rec(0, &mut Monomial::one(), lms, n)
}

struct Backsolve<'a> {
    /// Basis elements grouped by their smallest variable index.
    by_var: Vec<Vec<&'a Poly>>,
    flags: usize,
    unresolved: usize,
    solutions: Vec<Vec<Quadratic>>,
}

impl<'a> Backsolve<'a> {
    fn new(gb: &'a [Poly], n: usize) -> Self {
        let mut by_var = vec![Vec::new(); n];
        for p in gb {
            if let Some(&v) = p.variables().first() {
                by_var[v].push(p);
            }
        }
        Backsolve { by_var, flags: 0, unresolved: 0, solutions: Vec::new() }
    }

    /// Assign variable `k - 1`, given values for all later variables.
    fn extend(&mut self, k: usize, vals: &mut Vec<Quadratic>, field: BigInt) {
        if k == 0 {
            self.solutions.push(vals.clone());
            return;
        }
        let v = k - 1;
        let mut g: Option<UPoly<Quadratic>> = None;
        for p in &self.by_var[v] {
            let u = specialize(p, v, vals);
            if u.is_zero() {
                continue;
            }
            g = Some(match g {
                None => u.monic(),
                Some(h) => h.gcd(&u),
            });
        }
        let Some(g) = g else {
            // the variable is free on this branch
            self.unresolved += 1;
            return;
        };
        for (root, f) in self.roots(&g, &field) {
            vals[v] = root;
            self.extend(v, vals, f);
        }
        vals[v] = Quadratic::zero();
    }

    fn roots(&mut self, g: &UPoly<Quadratic>, field: &BigInt) -> Vec<(Quadratic, BigInt)> {
        let mut out = Vec::new();
        if field.is_zero() {
            let gq = UPoly::new(g.coeffs().iter().map(|c| c.a.clone()).collect());
            let (roots, rest) = rational_roots(&gq);
            out.extend(roots.into_iter().map(|(r, _)| (Quadratic::rational(r), BigInt::zero())));
            let rest = rest.squarefree();
            if rest.degree().unwrap_or(0) >= 1 {
                self.flags += 1;
                if rest.degree() == Some(2) {
                    let c = rest.coeffs();
                    let disc = &c[1] * &c[1] - Q::from_i64(4) * &c[0] * &c[2];
                    let s = Quadratic::rational(disc)
                        .sqrt(true)
                        .expect("a rational always has a square root in some Q(sqrt d)");
                    let two = Quadratic::from_i64(2) * Quadratic::rational(c[2].clone());
                    let b = Quadratic::rational(c[1].clone());
                    for sq in [s.clone(), -s.clone()] {
                        out.push(((-b.clone() + sq) / two.clone(), s.d.clone()));
                    }
                } else {
                    self.unresolved += 1;
                }
            }
        } else {
            match roots_in_field(g, field) {
                Some(rs) => out.extend(rs.into_iter().map(|r| (r, field.clone()))),
                None => self.unresolved += 1,
            }
        }
        out
    }
}

/// Substitute the known later variables into `p`, leaving a polynomial in
/// variable `v`.
fn specialize(p: &Poly, v: usize, vals: &[Quadratic]) -> UPoly<Quadratic> {
    let deg = p.terms().map(|(m, _)| m.0[v] as usize).max().unwrap_or(0);
    let mut coeffs = vec![Quadratic::zero(); deg + 1];
    for (m, c) in p.terms() {
        let mut t = Quadratic::rational(c.clone());
        for (i, &e) in m.0.iter().enumerate().skip(v + 1) {
            for _ in 0..e {
                t = t * vals[i].clone();
            }
        }
        let e = m.0[v] as usize;
        coeffs[e] = coeffs[e].clone() + t;
    }
    UPoly::new(coeffs)
}

/// All roots of `g` inside `Q(sqrt d)`, or `None` if some root lies outside.
fn roots_in_field(g: &UPoly<Quadratic>, d: &BigInt) -> Option<Vec<Quadratic>> {
    let g = g.squarefree();
    match g.degree()? {
        0 => Some(Vec::new()),
        1 => Some(vec![-(g.coeffs()[0].clone() / g.coeffs()[1].clone())]),
        2 => {
            let (c, b, a) = (&g.coeffs()[0], &g.coeffs()[1], &g.coeffs()[2]);
            let disc = b.clone() * b.clone() - Quadratic::from_i64(4) * a.clone() * c.clone();
            let s = disc.sqrt_in(d)?;
            let two_a = Quadratic::from_i64(2) * a.clone();
            Some(vec![(-b.clone() + s.clone()) / two_a.clone(), (-b.clone() - s) / two_a])
        }
        _ if g.coeffs().iter().all(|c| c.is_rational()) => {
            let gq = UPoly::new(g.coeffs().iter().map(|c| c.a.clone()).collect());
            let (roots, rest) = rational_roots(&gq);
            let mut out: Vec<Quadratic> = roots.into_iter().map(|(r, _)| Quadratic::rational(r)).collect();
            if rest.degree().unwrap_or(0) > 0 {
                out.extend(roots_in_field(&rest.to_quadratic(), d)?);
            }
            Some(out)
        }
        _ => None,
    }
}

/// True when `f` vanishes on every complex solution of `sys` (radical
/// membership via `1 - y f`).
pub fn vanishes_on_solutions(sys: &PolySystem, f: &Poly) -> bool {
    let y = sys.variables.len();
    assert!(y < MAX_VARS, "no room for the auxiliary variable");
    let mut polys = sys.polynomials.clone();
    polys.push(Poly::constant(Q::one()).sub(&Poly::var(y).mul(f)));
    is_unit(&groebner_basis(&polys, MonomialOrder::Lex))
}

/// Which `v`-coordinates an idempotent may or must use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeRestriction {
    Any,
    /// Every `v`-coordinate vanishes.
    Type0,
    /// `v`-coordinates outside the listed vectors vanish and the listed ones
    /// are nonzero.
    Support(Vec<Vector>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentConstraints {
    pub norm: Option<Q>,
    pub restriction: TypeRestriction,
}

impl Default for IdempotentConstraints {
    fn default() -> Self {
        IdempotentConstraints { norm: None, restriction: TypeRestriction::Any }
    }
}

/// A basis of the algebra with variable names; a system written in a frame
/// uses the frame coordinates as unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub names: Vec<String>,
    pub vectors: Vec<Vec<Q>>,
    inverse: Matrix<Q>,
}

impl Frame {
    pub fn new(alg: &Degree2Algebra<Q>, names: Vec<String>, vectors: Vec<Vec<Q>>) -> Result<Self, AlgebraError> {
        if vectors.len() != alg.dim() || names.len() != alg.dim() {
            return Err(AlgebraError::DimensionMismatch { got: vectors.len(), dim: alg.dim() });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != alg.dim()) {
            return Err(AlgebraError::DimensionMismatch { got: v.len(), dim: alg.dim() });
        }
        let inverse = Matrix::from_cols(&vectors).inverse().ok_or(AlgebraError::SingularFrame)?;
        Ok(Frame { names, vectors, inverse })
    }

    /// The algebra's own basis.
    pub fn standard(alg: &Degree2Algebra<Q>) -> Self {
        let n = alg.dim();
        let vectors = (0..n).map(|i| alg.basis_element(i).coords).collect();
        Frame { names: alg.label_names(), vectors, inverse: Matrix::identity(n) }
    }

    /// Basis coordinates of the element with frame coordinates `y`.
    pub fn to_basis(&self, y: &[Q]) -> Vec<Q> {
        let n = self.vectors.len();
        let mut out = vec![Q::zero(); n];
        for (c, v) in y.iter().zip(&self.vectors) {
            for k in 0..n {
                out[k] += c * &v[k];
            }
        }
        out
    }

    pub fn to_frame(&self, x: &[Q]) -> Vec<Q> {
        self.inverse.mul_vec(x)
    }
}

/// Equations of `w × w = w`, `(w,w) = norm` and the type restriction, in the
/// algebra basis.
pub fn idempotent_system(
    alg: &Degree2Algebra<Q>,
    constraints: &IdempotentConstraints,
) -> Result<PolySystem, AlgebraError> {
    idempotent_system_in_frame(alg, constraints, &Frame::standard(alg))
}

pub fn idempotent_system_in_frame(
    alg: &Degree2Algebra<Q>,
    constraints: &IdempotentConstraints,
    frame: &Frame,
) -> Result<PolySystem, AlgebraError> {
    quadratic_system(alg, frame, &Q::one(), constraints.norm.as_ref(), &constraints.restriction)
}

/// Equations of `u × u = 2u` and `(u,u) = c/2`, in the algebra basis.
pub fn virasoro_system(alg: &Degree2Algebra<Q>, central_charge: &Q) -> PolySystem {
    virasoro_system_in_frame(alg, central_charge, &Frame::standard(alg))
}

pub fn virasoro_system_in_frame(alg: &Degree2Algebra<Q>, central_charge: &Q, frame: &Frame) -> PolySystem {
    let norm = central_charge / Q::from_i64(2);
    quadratic_system(alg, frame, &Q::from_i64(2), Some(&norm), &TypeRestriction::Any)
        .expect("no restriction to resolve")
}

fn quadratic_system(
    alg: &Degree2Algebra<Q>,
    frame: &Frame,
    scale: &Q,
    norm: Option<&Q>,
    restriction: &TypeRestriction,
) -> Result<PolySystem, AlgebraError> {
    let n = alg.dim();
    let y = |i: usize| Poly::var(i);
    // frame coordinates of f_i × f_j
    let prod: Vec<Vec<Vec<Q>>> = (0..n)
        .map(|i| (0..n).map(|j| frame.to_frame(&alg.mul(&frame.vectors[i], &frame.vectors[j]))).collect())
        .collect();
    let mut eqs: Vec<Poly> = (0..n)
        .map(|k| {
            let mut p = y(k).scale(&-scale.clone());
            for i in 0..n {
                for j in i..n {
                    let c = &prod[i][j][k];
                    if c.is_zero() {
                        continue;
                    }
                    let c = if i == j { c.clone() } else { c * Q::from_i64(2) };
                    p.add_term(Monomial::var(i).mul(&Monomial::var(j)), c);
                }
            }
            p
        })
        .collect();
    let mut extra = Vec::new();
    if let Some(nu) = norm {
        let mut p = Poly::constant(-nu.clone());
        for i in 0..n {
            for j in i..n {
                let c = alg.form(&frame.vectors[i], &frame.vectors[j]);
                if c.is_zero() {
                    continue;
                }
                let c = if i == j { c } else { c * Q::from_i64(2) };
                p.add_term(Monomial::var(i).mul(&Monomial::var(j)), c);
            }
        }
        extra.push(p);
    }

    let mut variables = frame.names.clone();
    let mut nonzero = Vec::new();
    let mut auxiliary = 0;
    let v_indices: Vec<usize> = (3..n).collect();
    let (vanish, required): (Vec<usize>, Vec<usize>) = match restriction {
        TypeRestriction::Any => (Vec::new(), Vec::new()),
        TypeRestriction::Type0 => (v_indices, Vec::new()),
        TypeRestriction::Support(vs) => {
            let req = vs.iter().map(|&l| alg.v_index(l)).collect::<Result<Vec<_>, _>>()?;
            (v_indices.into_iter().filter(|i| !req.contains(i)).collect(), req)
        }
    };
    // basis coordinate k as a linear form in the frame variables
    let coord = |k: usize| Poly::from_terms((0..n).map(|j| (Monomial::var(j), frame.vectors[j][k].clone())));
    for k in vanish {
        extra.push(coord(k));
    }
    for k in required {
        let lin = coord(k);
        let vars = lin.variables();
        if vars.len() == 1 {
            // the coordinate is a multiple of one unknown: divide its own
            // equation by it when possible
            let j = vars[0];
            nonzero.push(j);
            if let Some(q) = eqs[j].divide_by_var(j) {
                eqs[j] = q;
                continue;
            }
        }
        let aux = n + auxiliary;
        auxiliary += 1;
        variables.push(format!("aux_{}", alg.label_names()[k]));
        extra.push(Poly::var(aux).mul(&lin).sub(&Poly::constant(Q::one())));
    }
    eqs.extend(extra);
    nonzero.sort_unstable();
    nonzero.dedup();
    Ok(PolySystem { variables, polynomials: eqs, nonzero, auxiliary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice2;
    use crate::scalar::{q, qi};

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }
    fn c(n: Q) -> Poly {
        Poly::constant(n)
    }
    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn sqrt_two_is_flagged() {
        let sys = PolySystem::new(names(1), vec![x(0).mul(&x(0)).sub(&c(qi(2)))]);
        let v = solve(&sys).unwrap();
        assert_eq!(v.status, SolveStatus::ZeroDimensional);
        assert!(v.rational_solutions.is_empty());
        assert_eq!(v.irrational_root_flags, 1);
        assert_eq!(v.quadratic_solutions.len(), 2);
        assert!(v.is_complete());
    }

    #[test]
    fn intersecting_conics() {
        // x^2 + y^2 = 5, xy = 2: (1,2),(2,1),(-1,-2),(-2,-1)
        let sys = PolySystem::new(
            names(2),
            vec![x(0).mul(&x(0)).add(&x(1).mul(&x(1))).sub(&c(qi(5))), x(0).mul(&x(1)).sub(&c(qi(2)))],
        );
        let v = solve(&sys).unwrap();
        assert_eq!(v.multiplicity_count, Some(4));
        assert_eq!(
            v.rational_solutions,
            vec![vec![qi(-2), qi(-1)], vec![qi(-1), qi(-2)], vec![qi(1), qi(2)], vec![qi(2), qi(1)]]
        );
    }

    #[test]
    fn positive_dimensional_and_inconsistent() {
        let line = PolySystem::new(names(2), vec![x(0).mul(&x(1))]);
        let v = solve(&line).unwrap();
        assert_eq!(v.status, SolveStatus::PositiveDimensional);
        assert_eq!(v.dimension, Some(1));
        let none = PolySystem::new(names(1), vec![x(0), x(0).sub(&c(qi(1)))]);
        assert_eq!(solve(&none).unwrap().status, SolveStatus::Inconsistent);
    }

    #[test]
    fn limits_are_enforced() {
        let cubic = PolySystem::new(names(1), vec![x(0).mul(&x(0)).mul(&x(0))]);
        assert!(matches!(solve(&cubic), Err(SolveError::DegreeTooHigh { index: 0, degree: 3 })));
        let wide = PolySystem::new(names(9), vec![x(0)]);
        assert!(matches!(solve(&wide), Err(SolveError::TooManyVariables { .. })));
        let undeclared = PolySystem::new(names(1), vec![x(3)]);
        assert!(matches!(solve(&undeclared), Err(SolveError::UndeclaredVariable { .. })));
    }

    #[test]
    fn radical_membership() {
        // x^2 = 0, y = 1: x vanishes everywhere, y - 2 does not
        let sys = PolySystem::new(names(2), vec![x(0).mul(&x(0)), x(1).sub(&c(qi(1)))]);
        assert!(vanishes_on_solutions(&sys, &x(0)));
        assert!(!vanishes_on_solutions(&sys, &x(1).sub(&c(qi(2)))));
    }

    #[test]
    fn nested_quadratic_branch() {
        // y^2 = 2, x^2 = 2 y: x lies in Q(2^(1/4)), beyond one quadratic step
        let sys =
            PolySystem::new(names(2), vec![x(1).mul(&x(1)).sub(&c(qi(2))), x(0).mul(&x(0)).sub(&x(1).scale(&qi(2)))]);
        let v = solve(&sys).unwrap();
        assert_eq!(v.irrational_root_flags, 1);
        assert!(v.unresolved_branches > 0);
        assert!(!v.is_complete());
        // x^2 = 8 over y = sqrt 2 ... is not a square in Q(sqrt 2); but
        // x^2 = y^2 has the roots ±y in the same field
        let sys2 =
            PolySystem::new(names(2), vec![x(1).mul(&x(1)).sub(&c(qi(2))), x(0).mul(&x(0)).sub(&x(1).mul(&x(1)))]);
        let v2 = solve(&sys2).unwrap();
        assert!(v2.is_complete());
        assert_eq!(v2.quadratic_solutions.len(), 4);
    }

    #[test]
    fn json_roundtrip() {
        let sys = PolySystem::new(names(2), vec![x(0).scale(&q(1, 2)).sub(&x(1).mul(&x(1)))]);
        let j = serde_json::to_string(&sys.to_json()).unwrap();
        let back = PolySystem::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(solve(&back).unwrap().groebner_basis, solve(&sys).unwrap().groebner_basis);
    }

    #[test]
    fn omega_solves_the_virasoro_system_for_c_equal_dim() {
        let l = Lattice2::validate([[4, 1], [1, 4]]).unwrap();
        let alg = Degree2Algebra::<Q>::build(&l).unwrap();
        let omega = alg.virasoro_element().coords;
        assert!(virasoro_system(&alg, &qi(2)).satisfied_by(&omega));
        assert!(!virasoro_system(&alg, &qi(1)).satisfied_by(&omega));
    }

    #[test]
    fn type_restricted_system_uses_the_quotient_equation() {
        let l = Lattice2::validate([[4, 1], [1, 4]]).unwrap();
        let alg = Degree2Algebra::<Q>::build(&l).unwrap();
        let sys = idempotent_system(
            &alg,
            &IdempotentConstraints { norm: None, restriction: TypeRestriction::Support(vec![[1, 0]]) },
        )
        .unwrap();
        assert_eq!(sys.auxiliary, 0);
        let vr = alg.v_index([1, 0]).unwrap();
        assert_eq!(sys.nonzero, vec![vr]);
        // the v_r equation became (p, r^2) - 1, which is linear
        assert_eq!(sys.polynomials[vr].total_degree(), 1);
    }
}
