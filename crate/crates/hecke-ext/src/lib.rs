//! Exact-arithmetic graded affine Hecke algebra workbench.
//!
//! The crate constructs finite reflection groups and their root data over the
//! rationals, builds finite-dimensional modules for the associated graded
//! affine Hecke algebras, and computes homological invariants of those
//! modules: Ext-group dimensions via an explicit equivariant complex, a
//! duality pairing realized on homology, Euler-Poincare and elliptic
//! pairings, and an induction-restriction resolution.
//!
//! All arithmetic is exact rational; there are no tolerances anywhere.
//!
//! Layout:
//! - [`scalar`], [`linalg`], [`poly`]: exact scalars, dense matrices,
//!   rational spectra.
//! - [`rootsys`]: root data, Weyl group enumeration, parabolic combinatorics.
//! - [`algebra`]: module data type, relation validation, dualities,
//!   characters, intertwiners.
//! - [`constructions`]: one-dimensional characters, principal series,
//!   parabolic induction/restriction, weights, tempered/discrete-series
//!   classification.
//! - [`homology`]: the equivariant Hom-complex, Ext dimensions, the duality
//!   pairing, Euler-Poincare and elliptic pairings, the Ind-Res resolution.

pub mod algebra;
pub mod constructions;
pub mod homology;
pub mod linalg;
pub mod poly;
pub mod rootsys;
pub mod scalar;

pub use linalg::Mat;
pub use rootsys::HeckeContext;
pub use scalar::Scalar;
