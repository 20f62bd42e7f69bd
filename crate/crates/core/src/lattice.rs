//! Rank-2 even positive-definite lattices: validation, norm shells and the
//! case analysis by roots and norm-4 vectors.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric: (r,s) = {0} but (s,r) = {1}")]
    NotSymmetric(i64, i64),
    #[error("lattice is not even: diagonal entry {0} is odd")]
    NotEven(i64),
    #[error("Gram matrix is not positive definite (diagonal {diag:?}, determinant {det})")]
    NotPositiveDefinite { diag: [i64; 2], det: i64 },
    #[error("sublattice basis is linearly dependent")]
    DependentBasis,
    #[error("shell index must be at least 1")]
    BadShell,
}

/// Integer coordinates of a lattice vector with respect to the Gram basis.
pub type Vector = [i64; 2];

/// A validated rank-2 even positive-definite lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GramFile", into = "GramFile")]
pub struct Lattice2 {
    gram: [[i64; 2]; 2],
}

/// On-disk form `{"gram": [[a,b],[b,d]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramFile {
    pub gram: [[i64; 2]; 2],
}

impl TryFrom<GramFile> for Lattice2 {
    type Error = LatticeError;
    fn try_from(f: GramFile) -> Result<Self, LatticeError> {
        Lattice2::validate(f.gram)
    }
}

impl From<Lattice2> for GramFile {
    fn from(l: Lattice2) -> Self {
        GramFile { gram: l.gram }
    }
}

impl Lattice2 {
    pub fn validate(gram: [[i64; 2]; 2]) -> Result<Self, LatticeError> {
        if gram[0][1] != gram[1][0] {
            return Err(LatticeError::NotSymmetric(gram[0][1], gram[1][0]));
        }
        for i in 0..2 {
            if gram[i][i].is_odd() {
                return Err(LatticeError::NotEven(gram[i][i]));
            }
        }
        let det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
        if gram[0][0] <= 0 || det <= 0 {
            return Err(LatticeError::NotPositiveDefinite { diag: [gram[0][0], gram[1][1]], det });
        }
        Ok(Lattice2 { gram })
    }

    pub fn gram(&self) -> [[i64; 2]; 2] {
        self.gram
    }

    pub fn det(&self) -> i64 {
        self.gram[0][0] * self.gram[1][1] - self.gram[0][1] * self.gram[1][0]
    }

    pub fn inner(&self, x: Vector, y: Vector) -> i64 {
        let g = &self.gram;
        x[0] * (g[0][0] * y[0] + g[0][1] * y[1]) + x[1] * (g[1][0] * y[0] + g[1][1] * y[1])
    }

    pub fn norm(&self, x: Vector) -> i64 {
        self.inner(x, x)
    }

    /// Coordinate bounds `|x_i| <= floor(sqrt(n * adj(G)_ii / det G))` for
    /// vectors of norm at most `n`.
    pub fn coordinate_bounds(&self, n: i64) -> [i64; 2] {
        let det = self.det();
        let adj = [self.gram[1][1], self.gram[0][0]];
        adj.map(|a| {
            let cap = n * a;
            let mut k = 0i64;
            while (k + 1) * (k + 1) * det <= cap {
                k += 1;
            }
            k
        })
    }

    /// The norm-`2m` shell, one representative per `±` pair.
    pub fn shell(&self, m: i64) -> Result<Shell, LatticeError> {
        if m < 1 {
            return Err(LatticeError::BadShell);
        }
        let target = 2 * m;
        let [b0, b1] = self.coordinate_bounds(target);
        let mut vectors = Vec::new();
        for x0 in 0..=b0 {
            let lo = if x0 == 0 { 1 } else { -b1 };
            for x1 in lo..=b1 {
                if self.norm([x0, x1]) == target {
                    vectors.push([x0, x1]);
                }
            }
        }
        vectors.sort();
        Ok(Shell { norm_half: m, vectors })
    }

    /// Rank of the span of a set of vectors (0, 1 or 2).
    pub fn rank_of(vectors: &[Vector]) -> usize {
        let nonzero: Vec<_> = vectors.iter().filter(|v| **v != [0, 0]).collect();
        if nonzero.is_empty() {
            return 0;
        }
        let a = nonzero[0];
        if nonzero.iter().any(|b| a[0] * b[1] - a[1] * b[0] != 0) {
            2
        } else {
            1
        }
    }

    /// Primitive generator of the orthogonal complement of `r` in the lattice.
    pub fn annihilator(&self, r: Vector) -> Vector {
        // (r, x) = u x0 + v x1
        let u = r[0] * self.gram[0][0] + r[1] * self.gram[1][0];
        let v = r[0] * self.gram[0][1] + r[1] * self.gram[1][1];
        let g = u.gcd(&v);
        let s = [v / g, -u / g];
        sign_normalize(s)
    }

    /// Gram matrix of the sublattice spanned by two vectors.
    pub fn sub_gram(&self, a: Vector, b: Vector) -> [[i64; 2]; 2] {
        [[self.inner(a, a), self.inner(a, b)], [self.inner(b, a), self.inner(b, b)]]
    }

    /// Index `|L : M|` of the sublattice with the given basis, and whether
    /// `det(M) = det(L) |L:M|^2` holds.
    pub fn index_determinant_check(&self, basis: [Vector; 2]) -> Result<IndexCheck, LatticeError> {
        let [a, b] = basis;
        let cross = a[0] * b[1] - a[1] * b[0];
        if cross == 0 {
            return Err(LatticeError::DependentBasis);
        }
        let index = cross.abs();
        let g = self.sub_gram(a, b);
        let det_m = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        Ok(IndexCheck {
            index,
            det_sublattice: det_m,
            det_lattice: self.det(),
            holds: det_m == self.det() * index * index,
        })
    }

    /// Lagrange-Gauss reduction: a basis `(u, v)` with `|2(u,v)| <= (u,u) <= (v,v)`.
    pub fn reduced_basis(&self) -> [Vector; 2] {
        let mut u: Vector = [1, 0];
        let mut v: Vector = [0, 1];
        if self.norm(u) > self.norm(v) {
            std::mem::swap(&mut u, &mut v);
        }
        loop {
            let nu = self.norm(u);
            let ip = self.inner(u, v);
            // nearest integer to ip / nu
            let k = (2 * ip + nu).div_euclid(2 * nu);
            v = [v[0] - k * u[0], v[1] - k * u[1]];
            if self.norm(v) < nu {
                std::mem::swap(&mut u, &mut v);
            } else {
                return [u, v];
            }
        }
    }

    /// The case analysis by roots and norm-4 vectors.
    pub fn classify(&self) -> LatticeClass {
        let roots = self.shell(1).expect("m = 1 is valid");
        let fours = self.shell(2).expect("m = 2 is valid");
        let rank1 = Self::rank_of(&roots.vectors);
        let rank2 = Self::rank_of(&fours.vectors);
        let case = match (rank1, rank2) {
            (2, _) => {
                let kind = if self.det() == 3 { RootSystem::A2 } else { RootSystem::A1Squared };
                LatticeCase::RootsRank2 { root_system: kind, root_count: 2 * roots.vectors.len() }
            }
            (1, _) => {
                let r = roots.vectors[0];
                LatticeCase::RootsRank1(self.complement_data(r))
            }
            (0, 2) => {
                let [u, v] = self.reduced_basis();
                let b = self.inner(u, v);
                LatticeCase::NoRootsFourRank2 {
                    b: b.abs(),
                    b_signed: b,
                    basis: [u, v],
                    spans: self.index_determinant_check([u, v]).map(|c| c.index == 1).unwrap_or(false),
                }
            }
            (0, 1) => LatticeCase::NoRootsFourRank1(self.complement_data(fours.vectors[0])),
            _ => LatticeCase::NoRootsNoFours,
        };
        LatticeClass { gram: self.gram, det: self.det(), roots: roots.vectors, norm_four: fours.vectors, case }
    }

    fn complement_data(&self, r: Vector) -> ComplementData {
        let s = self.annihilator(r);
        let index = self.index_determinant_check([r, s]).map(|c| c.index).unwrap_or(0);
        let s_norm = self.norm(s);
        ComplementData {
            r,
            s,
            s_norm,
            index,
            rectangular: index == 1,
            s_norm_mod_8: s_norm.rem_euclid(8),
            s_norm_mod_32: s_norm.rem_euclid(32),
        }
    }
}

/// First nonzero coordinate positive.
pub fn sign_normalize(v: Vector) -> Vector {
    if v[0] < 0 || (v[0] == 0 && v[1] < 0) {
        [-v[0], -v[1]]
    } else {
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shell {
    pub norm_half: i64,
    pub vectors: Vec<Vector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexCheck {
    pub index: i64,
    pub det_sublattice: i64,
    pub det_lattice: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootSystem {
    A1Squared,
    A2,
}

/// `r` in a shell, `s` generating its orthogonal complement, and the index of
/// `span{r, s}`. Both the rectangular (index 1) and overlattice subcases are
/// reported as found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementData {
    pub r: Vector,
    pub s: Vector,
    pub s_norm: i64,
    pub index: i64,
    pub rectangular: bool,
    pub s_norm_mod_8: i64,
    pub s_norm_mod_32: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "label", rename_all = "snake_case")]
pub enum LatticeCase {
    /// rank(L_1) = 2
    RootsRank2 { root_system: RootSystem, root_count: usize },
    /// rank(L_1) = 1
    RootsRank1(ComplementData),
    /// L_1 empty, rank(L_2) = 2; `b` is reported nonnegative.
    NoRootsFourRank2 { b: i64, b_signed: i64, basis: [Vector; 2], spans: bool },
    /// L_1 empty, rank(L_2) = 1
    NoRootsFourRank1(ComplementData),
    /// L_1 and L_2 empty
    NoRootsNoFours,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeClass {
    pub gram: [[i64; 2]; 2],
    pub det: i64,
    pub roots: Vec<Vector>,
    pub norm_four: Vec<Vector>,
    pub case: LatticeCase,
}

impl LatticeClass {
    pub fn label(&self) -> &'static str {
        match self.case {
            LatticeCase::RootsRank2 { .. } => "roots_rank2",
            LatticeCase::RootsRank1(_) => "roots_rank1",
            LatticeCase::NoRootsFourRank2 { .. } => "no_roots_four_rank2",
            LatticeCase::NoRootsFourRank1(_) => "no_roots_four_rank1",
            LatticeCase::NoRootsNoFours => "no_roots_no_fours",
        }
    }

    /// `|b|` for the `L_1 = ∅`, rank(L_2) = 2 case.
    pub fn b(&self) -> Option<i64> {
        match self.case {
            LatticeCase::NoRootsFourRank2 { b, .. } => Some(b),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_errors_name_the_axiom() {
        assert!(Lattice2::validate([[4, 1], [1, 4]]).is_ok());
        assert!(matches!(Lattice2::validate([[2, 3], [3, 2]]), Err(LatticeError::NotPositiveDefinite { det: -5, .. })));
        assert_eq!(Lattice2::validate([[3, 0], [0, 4]]), Err(LatticeError::NotEven(3)));
        assert_eq!(Lattice2::validate([[4, 1], [2, 4]]), Err(LatticeError::NotSymmetric(1, 2)));
        assert!(Lattice2::validate([[-2, 0], [0, -2]]).is_err());
    }

    #[test]
    fn shells_of_small_lattices() {
        let l = Lattice2::validate([[4, 1], [1, 4]]).unwrap();
        assert!(l.shell(1).unwrap().vectors.is_empty());
        assert_eq!(l.shell(2).unwrap().vectors, vec![[0, 1], [1, 0]]);
        let a2 = Lattice2::validate([[2, -1], [-1, 2]]).unwrap();
        assert_eq!(a2.shell(1).unwrap().vectors, vec![[0, 1], [1, 0], [1, 1]]);
        let b2 = Lattice2::validate([[4, -2], [-2, 4]]).unwrap();
        assert_eq!(b2.shell(2).unwrap().vectors, vec![[0, 1], [1, 0], [1, 1]]);
        assert_eq!(l.shell(0), Err(LatticeError::BadShell));
    }

    #[test]
    fn classification_examples() {
        let c = Lattice2::validate([[4, 2], [2, 4]]).unwrap().classify();
        assert_eq!(c.b(), Some(2));
        let c = Lattice2::validate([[2, 0], [0, 2]]).unwrap().classify();
        assert!(matches!(c.case, LatticeCase::RootsRank2 { root_system: RootSystem::A1Squared, .. }));
        let c = Lattice2::validate([[2, -1], [-1, 2]]).unwrap().classify();
        assert!(matches!(c.case, LatticeCase::RootsRank2 { root_system: RootSystem::A2, root_count: 6 }));
        let c = Lattice2::validate([[4, 0], [0, 8]]).unwrap().classify();
        match c.case {
            LatticeCase::NoRootsFourRank1(d) => {
                assert_eq!(d.s_norm, 8);
                assert!(d.rectangular);
            }
            other => panic!("unexpected {other:?}"),
        }
        let c = Lattice2::validate([[6, 0], [0, 6]]).unwrap().classify();
        assert_eq!(c.case, LatticeCase::NoRootsNoFours);
    }

    #[test]
    fn rank_one_roots_overlattice() {
        // r = (1,0) of norm 2 and x = (0,1) with (x,r) = 1: span{r, s} has index 2.
        let l = Lattice2::validate([[2, 1], [1, 4]]).unwrap();
        match l.classify().case {
            LatticeCase::RootsRank1(d) => {
                assert_eq!(d.index, 2);
                assert_eq!(d.s_norm, 14);
                assert_eq!(d.s_norm_mod_8, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn index_checks() {
        let l = Lattice2::validate([[2, 0], [0, 2]]).unwrap();
        let c = l.index_determinant_check([[2, 0], [0, 1]]).unwrap();
        assert_eq!((c.index, c.det_sublattice, c.holds), (2, 16, true));
        assert_eq!(l.index_determinant_check([[1, 1], [2, 2]]), Err(LatticeError::DependentBasis));
    }

    #[test]
    fn gram_json_roundtrip() {
        let l: Lattice2 = serde_json::from_str(r#"{"gram": [[4,-2],[-2,4]]}"#).unwrap();
        assert_eq!(serde_json::to_string(&l).unwrap(), r#"{"gram":[[4,-2],[-2,4]]}"#);
        assert!(serde_json::from_str::<Lattice2>(r#"{"gram": [[3,0],[0,4]]}"#).is_err());
    }
}
