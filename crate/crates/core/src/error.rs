use thiserror::Error;

/// Errors raised by the exact and floating-point layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("not a cochain complex: d_out * d_in is nonzero ({rows}x{cols} product)")]
    NotAComplex { rows: usize, cols: usize },

    #[error(
        "subspace does not live in the ambient space: expected dimension {expected}, got {got}"
    )]
    AmbientMismatch { expected: usize, got: usize },

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("flavor mismatch: {0}")]
    Flavor(String),

    #[error("invalid DGLA: {0}")]
    InvalidDgla(String),

    #[error("not a DGLA subalgebra: {0}")]
    NotSubalgebra(String),

    #[error("element is not Maurer-Cartan (curvature max-norm {0})")]
    NotMaurerCartan(String),

    #[error("element does not lie in the subalgebra in degree {degree}")]
    NotInSubalgebra { degree: i32 },

    #[error("structure constants not antisymmetric at (i={i}, j={j}, k={k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },

    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k})")]
    NotLie { i: usize, j: usize, k: usize },

    #[error("associativity fails on basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },

    #[error("unit axiom fails at basis vector {index}")]
    InvalidUnit { index: usize },

    #[error("algebra has no unit")]
    MissingUnit,

    #[error("representation identity fails on basis pair ({i}, {j})")]
    InvalidRepresentation { i: usize, j: usize },

    #[error("morphism identity fails on basis pair ({i}, {j})")]
    NotMorphism { i: usize, j: usize },

    #[error("subspace is not closed under the bracket: basis pair ({i}, {j})")]
    NotLieSubalgebra { i: usize, j: usize },

    #[error(
        "image of the morphism is not contained in the subalgebra (source basis vector {index})"
    )]
    ImageNotContained { index: usize },

    #[error("bilinear form is degenerate")]
    DegenerateForm,

    #[error("bilinear form has the wrong symmetry type")]
    WrongSymmetry,

    #[error("non-finite value in floating-point computation")]
    NonFinite,

    #[error("stability criterion fails: obstruction dimension {obstruction}")]
    CriterionFails { obstruction: usize },

    #[error("Newton iteration did not converge after {iterations} iterations (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
