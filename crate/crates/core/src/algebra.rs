//! The degree-2 algebra `S^2 H ⊕ span{v_λ : ±λ ∈ L_2}` of `V_L^+` for a
//! rootless rank-2 lattice.
//!
//! Basis order: the symmetric tensors `r^2 = rr`, `rs`, `s^2 = ss` in the
//! lattice basis `r, s`, followed by one `v_λ` per norm-4 pair in shell order.
//! Here `xy` denotes the symmetric tensor `x⊗y + y⊗x`, so the products and
//! the form are
//!
//! ```text
//! pq × rs  = (p,r) qs + (p,s) qr + (q,r) ps + (q,s) pr
//! xy × v_λ = (x,λ)(y,λ) v_λ
//! v_λ × v_μ = 0 if (λ,μ) ∈ {0,±1,±3};  v_{λ+μ} if (λ,μ) = -2;  λλ if λ = ±μ
//! (pq, rs) = (p,r)(q,s) + (p,s)(q,r),  (v_λ, v_μ) = 2 δ,  (S^2H, v_λ) = 0
//! ```
//!
//! with the cocycle sign taken to be `+1` throughout.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{sign_normalize, Lattice2, Vector};
use crate::linalg::Matrix;
use crate::rational::{rats, Rat};
use crate::scalar::{Scalar, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("lattice has roots (norm-2 vectors) {0:?}; the degree-2 algebra is not commutative")]
    HasRoots(Vec<Vector>),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("coordinate vector has length {got}, algebra dimension is {dim}")]
    DimensionMismatch { got: usize, dim: usize },
    #[error("{0} is not a norm-4 lattice vector of this algebra")]
    NotInShell(String),
    #[error("malformed algebra dump: {0}")]
    BadDump(String),
    #[error("frame vectors do not form a basis of the algebra")]
    SingularFrame,
}

/// Label of a basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// Symmetric tensor `e_i e_j` of lattice basis vectors, `i <= j`.
    Sym(usize, usize),
    /// `v_λ = e^λ + e^{-λ}`
    V(Vector),
}

impl BasisLabel {
    pub fn name(&self) -> String {
        const NAMES: [char; 2] = ['r', 's'];
        match *self {
            BasisLabel::Sym(i, j) if i == j => format!("{}^2", NAMES[i]),
            BasisLabel::Sym(i, j) => format!("{}{}", NAMES[i], NAMES[j]),
            BasisLabel::V(l) => format!("v({},{})", l[0], l[1]),
        }
    }
}

const SYM: [(usize, usize); 3] = [(0, 0), (0, 1), (1, 1)];

/// Index of the symmetric tensor `e_i e_j` in the basis.
fn sym_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (0, 1) => 1,
        _ => 2,
    }
}

/// An element of a [`Degree2Algebra`], tagged with its lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<S> {
    pub lattice: Lattice2,
    pub coords: Vec<S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        AlgebraElement { lattice: self.lattice, coords: add(&self.coords, &o.coords) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        AlgebraElement { lattice: self.lattice, coords: sub(&self.coords, &o.coords) }
    }

    pub fn scale(&self, c: &S) -> Self {
        AlgebraElement { lattice: self.lattice, coords: scale(&self.coords, c) }
    }
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<S: Scalar>(a: &[S], c: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

/// Commutative algebra with dense structure constants and an invariant form.
#[derive(Debug, Clone, PartialEq)]
pub struct Degree2Algebra<S> {
    lattice: Lattice2,
    labels: Vec<BasisLabel>,
    /// `table[i][j]` = coordinates of `x_i × x_j`.
    table: Vec<Vec<Vec<S>>>,
    form: Matrix<S>,
    identity: Vec<S>,
}

impl<S: Scalar> Degree2Algebra<S> {
    pub fn build(lattice: &Lattice2) -> Result<Self, AlgebraError> {
        let roots = lattice.shell(1).expect("m = 1 is valid").vectors;
        if !roots.is_empty() {
            return Err(AlgebraError::HasRoots(roots));
        }
        let shell = lattice.shell(2).expect("m = 2 is valid").vectors;
        let mut labels: Vec<BasisLabel> = SYM.iter().map(|&(i, j)| BasisLabel::Sym(i, j)).collect();
        labels.extend(shell.iter().map(|&v| BasisLabel::V(v)));
        let dim = labels.len();
        let g = lattice.gram();
        let e = |i: usize| -> Vector {
            if i == 0 {
                [1, 0]
            } else {
                [0, 1]
            }
        };
        let v_index = |lambda: Vector| -> usize {
            let n = sign_normalize(lambda);
            3 + shell.iter().position(|x| *x == n).expect("norm-4 vector lies in the shell")
        };
        // λλ expanded in r^2, rs, s^2 (as integer coordinates)
        let square = |l: Vector| -> [i64; 3] { [l[0] * l[0], 2 * l[0] * l[1], l[1] * l[1]] };

        let mut table = vec![vec![vec![0i64; dim]; dim]; dim];
        for (a, la) in labels.iter().enumerate() {
            for (b, lb) in labels.iter().enumerate() {
                let out = &mut table[a][b];
                match (*la, *lb) {
                    (BasisLabel::Sym(p, q), BasisLabel::Sym(r, s)) => {
                        out[sym_index(q, s)] += g[p][r];
                        out[sym_index(q, r)] += g[p][s];
                        out[sym_index(p, s)] += g[q][r];
                        out[sym_index(p, r)] += g[q][s];
                    }
                    (BasisLabel::Sym(p, q), BasisLabel::V(l)) | (BasisLabel::V(l), BasisLabel::Sym(p, q)) => {
                        out[v_index(l)] += lattice.inner(e(p), l) * lattice.inner(e(q), l);
                    }
                    (BasisLabel::V(l), BasisLabel::V(m)) => {
                        let ip = lattice.inner(l, m);
                        if l == m {
                            for (k, c) in square(l).into_iter().enumerate() {
                                out[k] += c;
                            }
                        } else if ip == -2 {
                            out[v_index([l[0] + m[0], l[1] + m[1]])] += 1;
                        } else if ip == 2 {
                            out[v_index([l[0] - m[0], l[1] - m[1]])] += 1;
                        }
                    }
                }
            }
        }
        let table: Vec<Vec<Vec<S>>> = table
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.into_iter().map(S::from_i64).collect()).collect())
            .collect();

        let mut form = Matrix::zeros(dim, dim);
        for (a, la) in labels.iter().enumerate() {
            for (b, lb) in labels.iter().enumerate() {
                let val = match (*la, *lb) {
                    (BasisLabel::Sym(p, q), BasisLabel::Sym(r, s)) => g[p][r] * g[q][s] + g[p][s] * g[q][r],
                    (BasisLabel::V(l), BasisLabel::V(m)) if l == m => 2,
                    _ => 0,
                };
                form[(a, b)] = S::from_i64(val);
            }
        }

        // I = (1/4) Σ e_i e_i^*, with e^* = G^{-1} e: (1/4)(g^00 rr + 2 g^01 rs + g^11 ss)
        let det4 = S::from_i64(4 * lattice.det());
        let mut identity = vec![S::zero(); dim];
        identity[0] = S::from_i64(g[1][1]) / det4.clone();
        identity[1] = S::from_i64(-2 * g[0][1]) / det4.clone();
        identity[2] = S::from_i64(g[0][0]) / det4;

        Ok(Degree2Algebra { lattice: *lattice, labels, table, form, identity })
    }

    /// Assemble an algebra from raw tables (used when re-reading a dump).
    pub fn from_parts(
        lattice: Lattice2,
        table: Vec<Vec<Vec<S>>>,
        form: Matrix<S>,
        identity: Vec<S>,
    ) -> Result<Self, AlgebraError> {
        let shell = lattice.shell(2).expect("m = 2 is valid").vectors;
        let mut labels: Vec<BasisLabel> = SYM.iter().map(|&(i, j)| BasisLabel::Sym(i, j)).collect();
        labels.extend(shell.iter().map(|&v| BasisLabel::V(v)));
        let dim = labels.len();
        let ok = table.len() == dim
            && table.iter().all(|r| r.len() == dim && r.iter().all(|v| v.len() == dim))
            && form.rows == dim
            && form.cols == dim
            && identity.len() == dim;
        if !ok {
            return Err(AlgebraError::BadDump(format!("expected dimension {dim}")));
        }
        Ok(Degree2Algebra { lattice, labels, table, form, identity })
    }

    pub fn lattice(&self) -> &Lattice2 {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn label_names(&self) -> Vec<String> {
        self.labels.iter().map(|l| l.name()).collect()
    }

    /// Lattice vectors indexing the `v`-part of the basis.
    pub fn shell(&self) -> Vec<Vector> {
        self.labels
            .iter()
            .filter_map(|l| match l {
                BasisLabel::V(v) => Some(*v),
                _ => None,
            })
            .collect()
    }

    /// Number of symmetric-tensor coordinates (always 3).
    pub fn sym_dim(&self) -> usize {
        3
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<S>>] {
        &self.table
    }

    pub fn form_matrix(&self) -> &Matrix<S> {
        &self.form
    }

    pub fn element(&self, coords: Vec<S>) -> Result<AlgebraElement<S>, AlgebraError> {
        if coords.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch { got: coords.len(), dim: self.dim() });
        }
        Ok(AlgebraElement { lattice: self.lattice, coords })
    }

    pub fn zero(&self) -> AlgebraElement<S> {
        AlgebraElement { lattice: self.lattice, coords: vec![S::zero(); self.dim()] }
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement<S> {
        let mut c = vec![S::zero(); self.dim()];
        c[i] = S::one();
        AlgebraElement { lattice: self.lattice, coords: c }
    }

    /// The symmetric tensor `xy` for `x, y ∈ H` given in lattice coordinates.
    pub fn sym(&self, x: [S; 2], y: [S; 2]) -> AlgebraElement<S> {
        let mut c = vec![S::zero(); self.dim()];
        c[0] = x[0].clone() * y[0].clone();
        c[1] = x[0].clone() * y[1].clone() + x[1].clone() * y[0].clone();
        c[2] = x[1].clone() * y[1].clone();
        AlgebraElement { lattice: self.lattice, coords: c }
    }

    /// `x^2 = xx` for a lattice vector.
    pub fn square_of(&self, x: Vector) -> AlgebraElement<S> {
        let x = [S::from_i64(x[0]), S::from_i64(x[1])];
        self.sym(x.clone(), x)
    }

    /// Basis index of `v_λ` (either sign of `λ`).
    pub fn v_index(&self, lambda: Vector) -> Result<usize, AlgebraError> {
        let n = sign_normalize(lambda);
        self.labels
            .iter()
            .position(|l| *l == BasisLabel::V(n))
            .ok_or_else(|| AlgebraError::NotInShell(format!("({},{})", lambda[0], lambda[1])))
    }

    pub fn v(&self, lambda: Vector) -> Result<AlgebraElement<S>, AlgebraError> {
        Ok(self.basis_element(self.v_index(lambda)?))
    }

    fn check(&self, a: &AlgebraElement<S>) -> Result<(), AlgebraError> {
        if a.lattice != self.lattice {
            return Err(AlgebraError::AlgebraMismatch);
        }
        if a.coords.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch { got: a.coords.len(), dim: self.dim() });
        }
        Ok(())
    }

    /// Product on raw coordinate vectors.
    pub fn mul(&self, a: &[S], b: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let c = a[i].clone() * b[j].clone();
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = out[k].clone() + c.clone() * t.clone();
                    }
                }
            }
        }
        out
    }

    /// Form on raw coordinate vectors.
    pub fn form(&self, a: &[S], b: &[S]) -> S {
        let fb = self.form.mul_vec(b);
        a.iter().zip(fb).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y)
    }

    pub fn product(&self, a: &AlgebraElement<S>, b: &AlgebraElement<S>) -> Result<AlgebraElement<S>, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(AlgebraElement { lattice: self.lattice, coords: self.mul(&a.coords, &b.coords) })
    }

    pub fn form_eval(&self, a: &AlgebraElement<S>, b: &AlgebraElement<S>) -> Result<S, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.form(&a.coords, &b.coords))
    }

    pub fn identity_element(&self) -> AlgebraElement<S> {
        AlgebraElement { lattice: self.lattice, coords: self.identity.clone() }
    }

    /// `ω = 2 I`.
    pub fn virasoro_element(&self) -> AlgebraElement<S> {
        self.identity_element().scale(&S::from_i64(2))
    }

    /// Split `w = P + Q` into its `S^2 H` part and its `v`-part.
    pub fn pq_split(&self, w: &AlgebraElement<S>) -> (AlgebraElement<S>, AlgebraElement<S>) {
        let mut p = w.coords.clone();
        let mut q = w.coords.clone();
        for (i, (pc, qc)) in p.iter_mut().zip(q.iter_mut()).enumerate() {
            if i < 3 {
                *qc = S::zero();
            } else {
                *pc = S::zero();
            }
        }
        (AlgebraElement { lattice: self.lattice, coords: p }, AlgebraElement { lattice: self.lattice, coords: q })
    }

    /// `P - Q`.
    pub fn conjugate(&self, w: &AlgebraElement<S>) -> AlgebraElement<S> {
        let coords = w.coords.iter().enumerate().map(|(i, c)| if i < 3 { c.clone() } else { -c.clone() }).collect();
        AlgebraElement { lattice: self.lattice, coords }
    }

    /// Matrix of `x ↦ w × x`; column `j` holds `w × x_j`.
    pub fn ad_matrix(&self, w: &[S]) -> Matrix<S> {
        let cols: Vec<Vec<S>> = (0..self.dim())
            .map(|j| {
                let mut e = vec![S::zero(); self.dim()];
                e[j] = S::one();
                self.mul(w, &e)
            })
            .collect();
        Matrix::from_cols(&cols)
    }

    pub fn is_idempotent(&self, w: &[S]) -> bool {
        self.mul(w, w) == w
    }

    /// Indices of the `v`-coordinates that are nonzero.
    pub fn q_support(&self, w: &[S]) -> Vec<usize> {
        (3..self.dim()).filter(|&i| !w[i].is_zero()).collect()
    }

    /// Change the scalar field (e.g. rationals into a quadratic field).
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Degree2Algebra<T> {
        Degree2Algebra {
            lattice: self.lattice,
            labels: self.labels.clone(),
            table: self.table.iter().map(|r| r.iter().map(|v| v.iter().map(&f).collect()).collect()).collect(),
            form: self.form.map(&f),
            identity: self.identity.iter().map(&f).collect(),
        }
    }
}

/// JSON dump of an exact algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDump {
    pub gram: [[i64; 2]; 2],
    pub dimension: usize,
    pub basis: Vec<String>,
    /// `mult_table[i][j]` = coordinates of `basis[i] × basis[j]`.
    pub mult_table: Vec<Vec<Vec<Rat>>>,
    pub form: Vec<Vec<Rat>>,
    pub identity: Vec<Rat>,
    pub virasoro: Vec<Rat>,
}

impl Degree2Algebra<Q> {
    pub fn dump(&self) -> AlgebraDump {
        AlgebraDump {
            gram: self.lattice.gram(),
            dimension: self.dim(),
            basis: self.label_names(),
            mult_table: self.table.iter().map(|r| r.iter().map(|v| rats(v)).collect()).collect(),
            form: self.form.to_rows().iter().map(|r| rats(r)).collect(),
            identity: rats(&self.identity),
            virasoro: rats(&self.virasoro_element().coords),
        }
    }

    pub fn from_dump(d: &AlgebraDump) -> Result<Self, AlgebraError> {
        let lattice = Lattice2::validate(d.gram).map_err(|e| AlgebraError::BadDump(e.to_string()))?;
        let table = d.mult_table.iter().map(|r| r.iter().map(|v| crate::rational::unrats(v)).collect()).collect();
        let rows: Vec<Vec<Q>> = d.form.iter().map(|r| crate::rational::unrats(r)).collect();
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(AlgebraError::BadDump("form is not square".into()));
        }
        let alg = Self::from_parts(lattice, table, Matrix::from_rows(rows), crate::rational::unrats(&d.identity))?;
        if alg.label_names() != d.basis {
            return Err(AlgebraError::BadDump("basis labels do not match the lattice".into()));
        }
        Ok(alg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn alg(g: [[i64; 2]; 2]) -> Degree2Algebra<Q> {
        Degree2Algebra::build(&Lattice2::validate(g).unwrap()).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(alg([[4, 1], [1, 4]]).dim(), 5);
        assert_eq!(alg([[4, -2], [-2, 4]]).dim(), 6);
        assert_eq!(alg([[4, 0], [0, 8]]).dim(), 4);
        assert_eq!(alg([[6, 0], [0, 6]]).dim(), 3);
    }

    #[test]
    fn rejects_lattices_with_roots() {
        let l = Lattice2::validate([[2, 0], [0, 4]]).unwrap();
        assert!(matches!(Degree2Algebra::<Q>::build(&l), Err(AlgebraError::HasRoots(_))));
    }

    #[test]
    fn sample_products() {
        let a = alg([[4, 1], [1, 4]]);
        let r2 = a.basis_element(0);
        let s2 = a.basis_element(2);
        let rs = a.basis_element(1);
        assert_eq!(a.product(&r2, &s2).unwrap(), rs.scale(&qi(4)));
        let vr = a.v([1, 0]).unwrap();
        let vs = a.v([0, 1]).unwrap();
        assert!(a.product(&vr, &vs).unwrap().is_zero());
        assert_eq!(a.product(&vr, &vr).unwrap(), r2);
        let b = alg([[4, -2], [-2, 4]]);
        assert_eq!(b.product(&b.v([1, 0]).unwrap(), &b.v([0, 1]).unwrap()).unwrap(), b.v([1, 1]).unwrap());
    }

    #[test]
    fn squares_of_norm_four_vectors() {
        // v_t × v_t = t t with t = r + s, i.e. r^2 + 2rs + s^2
        let a = alg([[4, -2], [-2, 4]]);
        let vt = a.v([1, 1]).unwrap();
        let sq = a.product(&vt, &vt).unwrap();
        assert_eq!(sq, a.square_of([1, 1]));
        assert_eq!(&sq.coords[..3], &[qi(1), qi(2), qi(1)]);
    }

    #[test]
    fn form_is_associative_and_product_commutative() {
        for g in [
            [[4, 0], [0, 4]],
            [[4, 1], [1, 4]],
            [[4, 2], [2, 4]],
            [[4, -2], [-2, 4]],
            [[4, 0], [0, 8]],
            [[6, 3], [3, 6]],
        ] {
            let a = alg(g);
            let n = a.dim();
            let e: Vec<Vec<Q>> = (0..n).map(|i| a.basis_element(i).coords).collect();
            for x in &e {
                for y in &e {
                    assert_eq!(a.mul(x, y), a.mul(y, x));
                    for z in &e {
                        assert_eq!(a.form(&a.mul(x, y), z), a.form(x, &a.mul(y, z)), "{g:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn identity_matches_closed_form() {
        let a = alg([[4, 1], [1, 4]]);
        let i = a.identity_element();
        // (1/60)(4r^2 - 2rs + 4s^2)
        assert_eq!(i.coords, vec![q(4, 60), q(-2, 60), q(4, 60), qi(0), qi(0)]);
        assert_eq!(a.form_eval(&i, &i).unwrap(), q(1, 4));
        let w = a.virasoro_element();
        assert_eq!(a.form_eval(&w, &w).unwrap(), qi(1));
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = alg([[4, 1], [1, 4]]);
        let b = alg([[4, 0], [0, 4]]);
        assert_eq!(a.product(&a.basis_element(0), &b.basis_element(0)), Err(AlgebraError::AlgebraMismatch));
        assert!(matches!(a.element(vec![qi(1)]), Err(AlgebraError::DimensionMismatch { .. })));
    }

    #[test]
    fn pq_split_and_conjugate() {
        let a = alg([[4, 1], [1, 4]]);
        let w = a.basis_element(0).scale(&q(1, 32)).add(&a.v([1, 0]).unwrap().scale(&q(1, 8)));
        let (p, qpart) = a.pq_split(&w);
        assert_eq!(p, a.basis_element(0).scale(&q(1, 32)));
        assert_eq!(qpart, a.v([1, 0]).unwrap().scale(&q(1, 8)));
        assert_eq!(a.conjugate(&a.conjugate(&w)), w);
        assert_eq!(a.conjugate(&p), p);
    }

    #[test]
    fn float_algebra_agrees_with_exact() {
        let l = Lattice2::validate([[4, -2], [-2, 4]]).unwrap();
        let f = Degree2Algebra::<f64>::build(&l).unwrap();
        let e = alg([[4, -2], [-2, 4]]);
        let i = f.identity_element();
        let prod = f.mul(&i.coords, &f.basis_element(4).coords);
        assert!((prod[4] - 1.0).abs() < 1e-12);
        assert_eq!(e.map_scalars(crate::scalar::Scalar::from_q), f);
    }

    #[test]
    fn dump_roundtrip() {
        let a = alg([[4, -2], [-2, 4]]);
        let d = a.dump();
        let json = serde_json::to_string(&d).unwrap();
        let back: AlgebraDump = serde_json::from_str(&json).unwrap();
        assert_eq!(Degree2Algebra::from_dump(&back).unwrap(), a);
    }
}
