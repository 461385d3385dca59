use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("degenerate lattice: Gram determinant is zero")]
    DegenerateLattice,

    #[error("vector is not characteristic: {0}")]
    NotCharacteristic(String),

    #[error("quadratic form is not well defined: {0}")]
    IllDefinedForm(String),

    #[error("quadratic form is degenerate (|Gauss sum| = {modulus})")]
    DegenerateForm { modulus: f64 },

    #[error("Gauss sum is not an eighth root of unity (residual {residual:e})")]
    Unclassifiable { residual: f64 },

    #[error("q does not vanish on the isotropic subgroup: {0}")]
    NotIsotropic(String),

    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),

    #[error("cochains live on different complexes")]
    ComplexMismatch,

    #[error("degree error: {0}")]
    Degree(String),

    #[error("cochain is not a cocycle")]
    NotCocycle,

    #[error("chain is not a cycle")]
    NotCycle,

    #[error("complex is not orientable")]
    NonOrientable,

    #[error("complex is not a closed pseudo-manifold: {0}")]
    NotPseudoManifold(String),

    #[error("Poincare duality pairing is degenerate in degree {0}")]
    PairingDegenerate(usize),

    #[error("class admits no integral lift")]
    Unliftable,

    #[error("differential cochain violates filtration: {0}")]
    Filtration(String),

    #[error("series error: {0}")]
    Series(String),

    #[error("simplicial identity violated: {0}")]
    SimplicialIdentity(String),

    #[error("homomorphism is not well defined: {0}")]
    IllDefinedMap(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
