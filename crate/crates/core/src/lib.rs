//! Exact computations in the degree-2 algebra of `V_L^+` for rank-2 even
//! lattices without roots: lattice case analysis, structure constants,
//! idempotent and Virasoro-vector enumeration, adjoint spectra and
//! automorphism groups.

pub mod algebra;
pub mod autgroup;
pub mod classify;
pub mod groebner;
pub mod group;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod polysolve;
pub mod rational;
pub mod scalar;
pub mod spectra;
pub mod upoly;
pub mod verify;

pub use algebra::{AlgebraElement, AlgebraError, BasisLabel, Degree2Algebra};
pub use lattice::{Lattice2, LatticeCase, LatticeClass, LatticeError};
pub use scalar::{Quadratic, Scalar, Q};

/// Exact rational algebra.
pub type Algebra = Degree2Algebra<Q>;
/// Element of an exact rational algebra.
pub type Element = AlgebraElement<Q>;
/// Algebra over a quadratic field `Q(sqrt d)`.
pub type QuadraticAlgebra = Degree2Algebra<Quadratic>;
pub type QuadraticElement = AlgebraElement<Quadratic>;
/// Floating-point algebras, for quick numerical exploration.
pub type AlgebraF64 = Degree2Algebra<f64>;
pub type AlgebraF32 = Degree2Algebra<f32>;
