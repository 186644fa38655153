//! Exact deformation theory of finite-dimensional Lie and associative
//! algebras and their morphisms.
//!
//! Structures are Maurer–Cartan elements of small DGLAs built over the
//! rationals. Rigidity and stability verdicts come from exact ranks of
//! twisted quotient complexes; gauge flows and the normalizer run in `f64`.

pub mod assoc;
pub mod catalog;
pub mod complex;
pub mod dgla;
pub mod error;
pub mod gauge;
pub mod lie;
pub mod linalg;
pub mod morphism;
pub mod multilinear;
pub mod normalizer;
pub mod stability;

pub use assoc::AssocAlgebra;
pub use complex::CochainComplex;
pub use dgla::{Dgla, DglaSub, Verdict};
pub use error::{Error, Result};
pub use lie::{LieAlgebra, Representation};
pub use linalg::{Mat, Scalar, Subspace};
pub use morphism::LieMorphism;
pub use multilinear::{Flavor, IndexBasis, MultiMap};
pub use normalizer::{GaugeResult, NormalizeOptions, Normalizer};
