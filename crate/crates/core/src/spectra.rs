//! Spectra of multiplication operators `ad(w): x ↦ w × x`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Degree2Algebra};
use crate::linalg::{charpoly, Matrix};
use crate::rational::{format_q, primitive_integer_vector, Rat};
use crate::scalar::Q;
use crate::upoly::{coeff_strings, rational_roots, UPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: Q,
    pub algebraic: usize,
    pub geometric: usize,
    /// Kernel basis of `ad(w) - value`, as primitive integer vectors.
    pub eigenbasis: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdSpectrum {
    pub element: AlgebraElement<Q>,
    pub matrix: Matrix<Q>,
    pub char_poly: UPoly<Q>,
    pub rational_eigenvalues: Vec<Eigenvalue>,
    /// Monic factors of the characteristic polynomial without rational
    /// roots, with multiplicity (square-free decomposition only).
    pub irrational_factors: Vec<(UPoly<Q>, usize)>,
}

impl AdSpectrum {
    pub fn irrational_factor_flags(&self) -> usize {
        self.irrational_factors.len()
    }

    /// Eigenvalues repeated by algebraic multiplicity, increasing.
    pub fn multiset(&self) -> Vec<Q> {
        self.rational_eigenvalues.iter().flat_map(|e| std::iter::repeat_n(e.value.clone(), e.algebraic)).collect()
    }

    pub fn report(&self) -> SpectrumReport {
        SpectrumReport {
            element: self.element.coords.iter().cloned().map(Rat).collect(),
            matrix: self.matrix.to_rows().into_iter().map(|r| r.into_iter().map(Rat).collect()).collect(),
            char_poly: coeff_strings(&self.char_poly),
            eigenvalues: self
                .rational_eigenvalues
                .iter()
                .map(|e| EigenvalueReport {
                    value: format_q(&e.value),
                    algebraic_multiplicity: e.algebraic,
                    geometric_multiplicity: e.geometric,
                    eigenvectors: e.eigenbasis.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect(),
                })
                .collect(),
            irrational_factors: self
                .irrational_factors
                .iter()
                .map(|(f, m)| IrrationalFactorReport { coefficients: coeff_strings(f), multiplicity: *m })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenvalueReport {
    pub value: String,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    /// Integer entries as decimal strings.
    pub eigenvectors: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrationalFactorReport {
    /// Increasing degree.
    pub coefficients: Vec<String>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub element: Vec<Rat>,
    pub matrix: Vec<Vec<Rat>>,
    /// Characteristic polynomial coefficients, increasing degree.
    pub char_poly: Vec<String>,
    pub eigenvalues: Vec<EigenvalueReport>,
    pub irrational_factors: Vec<IrrationalFactorReport>,
}

/// Yun's square-free decomposition of a monic polynomial: `f = Π g_i^i`.
fn squarefree_decomposition(f: &UPoly<Q>) -> Vec<(UPoly<Q>, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut a = f.gcd(&f.derivative());
    let mut b = f.div_rem(&a).0;
    let mut c = f.derivative().div_rem(&a).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.monic(), i));
        }
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

pub fn ad_spectrum(alg: &Degree2Algebra<Q>, w: &[Q]) -> AdSpectrum {
    let matrix = alg.ad_matrix(w);
    let char_poly = charpoly(&matrix);
    let (roots, rest) = rational_roots(&char_poly);
    let n = alg.dim();
    let rational_eigenvalues = roots
        .into_iter()
        .map(|(value, algebraic)| {
            let mut shifted = matrix.clone();
            for i in 0..n {
                shifted[(i, i)] = shifted[(i, i)].clone() - value.clone();
            }
            let eigenbasis: Vec<Vec<BigInt>> = shifted.kernel().iter().map(|v| primitive_integer_vector(v)).collect();
            Eigenvalue { value, algebraic, geometric: eigenbasis.len(), eigenbasis }
        })
        .collect();
    AdSpectrum {
        element: AlgebraElement { lattice: *alg.lattice(), coords: w.to_vec() },
        matrix,
        char_poly,
        rational_eigenvalues,
        irrational_factors: squarefree_decomposition(&rest),
    }
}

/// `(ad(w)x, y) = (x, ad(w)y)` on all basis pairs.
pub fn ad_is_form_symmetric(alg: &Degree2Algebra<Q>, w: &[Q]) -> bool {
    let m = alg.ad_matrix(w);
    let g = alg.form_matrix();
    let lhs = m.transpose().mul(g);
    let rhs = g.mul(&m);
    lhs == rhs
}

/// `ad(w)` has `1` as an eigenvalue with `w` in its eigenspace.
pub fn fixes_itself(alg: &Degree2Algebra<Q>, w: &[Q]) -> bool {
    alg.mul(w, w) == w && w.iter().any(|x| !x.is_zero())
}

pub fn trace(m: &Matrix<Q>) -> Q {
    let n = m.to_rows().len();
    (0..n).fold(Q::zero(), |acc, i| acc + m[(i, i)].clone())
}

pub fn is_scalar_matrix(m: &Matrix<Q>, c: &Q) -> bool {
    let rows = m.to_rows();
    rows.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { x == c } else { x.is_zero() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice2;
    use crate::scalar::{q, qi};
    use num_traits::One;

    fn alg(g: [[i64; 2]; 2]) -> Degree2Algebra<Q> {
        Degree2Algebra::build(&Lattice2::validate(g).unwrap()).unwrap()
    }

    /// Determinant-interpolation oracle: `det(xI - M)` at `n + 1` integer
    /// points, then Lagrange interpolation.
    fn charpoly_oracle(m: &Matrix<Q>) -> UPoly<Q> {
        let n = m.to_rows().len();
        let pts: Vec<Q> = (0..=n as i64).map(qi).collect();
        let vals: Vec<Q> = pts
            .iter()
            .map(|x| {
                let mut a = m.map(|v| -v.clone());
                for i in 0..n {
                    a[(i, i)] = a[(i, i)].clone() + x.clone();
                }
                a.determinant()
            })
            .collect();
        let mut out = UPoly::zero();
        for (i, xi) in pts.iter().enumerate() {
            let mut basis = UPoly::constant(Q::one());
            for (j, xj) in pts.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&UPoly::linear(xj.clone())).scale(&(Q::one() / (xi.clone() - xj.clone())));
                }
            }
            out = out.add(&basis.scale(&vals[i]));
        }
        out
    }

    #[test]
    fn identity_has_single_eigenvalue_one() {
        let a = alg([[4, 1], [1, 4]]);
        let s = ad_spectrum(&a, &a.identity_element().coords);
        assert_eq!(s.rational_eigenvalues.len(), 1);
        assert_eq!(s.rational_eigenvalues[0].value, qi(1));
        assert_eq!(s.rational_eigenvalues[0].algebraic, 5);
        assert_eq!(s.rational_eigenvalues[0].geometric, 5);
        assert_eq!(trace(&s.matrix), qi(5));
        assert!(is_scalar_matrix(&a.ad_matrix(&a.virasoro_element().coords), &qi(2)));
    }

    #[test]
    fn type_one_spectrum_for_b_one() {
        let a = alg([[4, 1], [1, 4]]);
        let mut w = a.square_of([1, 0]).scale(&q(1, 32)).coords;
        w[4] = q(1, 8);
        assert!(fixes_itself(&a, &w));
        let s = ad_spectrum(&a, &w);
        assert_eq!(s.multiset(), vec![qi(0), qi(0), q(1, 32), q(1, 4), qi(1)]);
        assert_eq!(s.irrational_factor_flags(), 0);
        assert_eq!(charpoly_oracle(&s.matrix), s.char_poly);
        for e in &s.rational_eigenvalues {
            assert_eq!(e.algebraic, e.geometric);
        }
    }

    #[test]
    fn charpoly_matches_interpolation_and_flags_irrational_factors() {
        let a = alg([[4, 2], [2, 4]]);
        let w: Vec<Q> = (1..=a.dim() as i64).map(|i| q(i, 7)).collect();
        let s = ad_spectrum(&a, &w);
        assert_eq!(charpoly_oracle(&s.matrix), s.char_poly);
        let deg: usize = s.rational_eigenvalues.iter().map(|e| e.algebraic).sum::<usize>()
            + s.irrational_factors.iter().map(|(f, m)| f.degree().unwrap() * m).sum::<usize>();
        assert_eq!(deg, a.dim());
        assert!(ad_is_form_symmetric(&a, &w));
    }

    #[test]
    fn squarefree_parts() {
        // (x^2 - 2)^2 (x^2 + 1)
        let f = UPoly::new(vec![qi(-2), qi(0), qi(1)]);
        let g = UPoly::new(vec![qi(1), qi(0), qi(1)]);
        let d = squarefree_decomposition(&f.mul(&f).mul(&g));
        assert_eq!(d, vec![(g, 1), (f, 2)]);
    }
}
