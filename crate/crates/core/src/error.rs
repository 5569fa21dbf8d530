use alloc::string::String;

/// Group axiom violated by a candidate multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupAxiom {
    NotSquare,
    OutOfRange { row: usize, col: usize },
    Associativity { a: usize, b: usize, c: usize },
    Identity,
    Inverse { element: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not normal")]
    NotNormal,
    #[error("Hermitian form is degenerate")]
    DegenerateForm,
    #[error("matrix is singular")]
    Singular,
    #[error("operands use different scalar backends")]
    BackendMismatch,
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("not a group: {0:?}")]
    NotAGroup(GroupAxiom),
    #[error("invalid algebra structure: {0}")]
    InvalidStructure(String),
    #[error("map is not unital")]
    NotUnital,
    #[error("map is not multiplicative on basis pair ({0}, {1})")]
    NotMultiplicative(usize, usize),
    #[error("map does not preserve the star on basis element {0}")]
    NotStarPreserving(usize),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("functional is not *-linear at basis element {0}")]
    NotStarLinear(usize),
    #[error("map is not admissible for the state")]
    NotAdmissible,
    #[error("state is not positive")]
    NotPositive,
    #[error("state is isotropic (normalization zero)")]
    IsotropicState,
    #[error("states have different normalizations")]
    NormalizationMismatch,
    #[error("states are not normalized")]
    NotNormalized,
    #[error("pullback law fails at basis element {0}")]
    PullbackMismatch(usize),
    #[error("modules represent different states")]
    NotSameState,
    #[error("module is not cyclic")]
    NotCyclic,
    #[error("map is not isometric")]
    NotIsometric,
    #[error("map is not unitary")]
    NotUnitary,
    #[error("representation is not faithful")]
    NotFaithful,
    #[error("algebra has no faithful representation")]
    NoFaithfulRep,
    #[error("map is not completely positive")]
    NotCP,
    #[error("element is not a self-adjoint projection")]
    NotProjection,
    #[error("map is not positive: negative entry at ({0}, {1})")]
    NotPositiveMap(usize, usize),
    #[error("algebra is not a function algebra")]
    NotFunctionAlgebra,
    #[error("matrix is not row-stochastic (row {0})")]
    NotStochastic(usize),
    #[error("invalid probability space: {0}")]
    InvalidProbSpace(String),
    #[error("chain is not composable at index {0}")]
    NotComposable(usize),
    #[error("spectral projection is not in the generated subalgebra")]
    ProjectionNotInSubalgebra,
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("map is not invertible")]
    NotInvertible,
    #[error("missing arrow {0} -> {1}")]
    MissingArrow(String, String),
    #[error("vector is zero")]
    ZeroVector,
}
