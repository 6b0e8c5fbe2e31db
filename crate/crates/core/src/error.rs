use thiserror::Error;

use crate::detect::Route;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("empty point set")]
    Empty,
    #[error("class count must be at least 1")]
    NoClasses,
    #[error("relation array has {found} entries, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("entry ({x},{y}) = {value} exceeds class count {d}")]
    IndexOutOfRange { x: usize, y: usize, value: usize, d: usize },
    #[error("diagonal entry ({x},{x}) is relation {value}, expected 0")]
    DiagonalNotZero { x: usize, value: usize },
    #[error("off-diagonal entry ({x},{y}) is relation 0")]
    OffDiagonalZero { x: usize, y: usize },
    #[error("not symmetric: rel({x},{y}) != rel({y},{x})")]
    NotSymmetric { x: usize, y: usize },
    #[error("relation {0} never occurs")]
    MissingRelation(usize),
    #[error(
        "intersection number not constant: p^{k}_{{{i},{j}}} is {first_count} at ({},{}) but {second_count} at ({},{})",
        first.0, first.1, second.0, second.1
    )]
    NotConstant {
        i: usize,
        j: usize,
        k: usize,
        first: (usize, usize),
        first_count: u64,
        second: (usize, usize),
        second_count: u64,
    },
    #[error("relabeling must fix relation 0")]
    PermMovesZero,
    #[error("relabeling is not a permutation of 0..={d}")]
    NotAPermutation { d: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("common eigenvectors could not be separated (eigenspace of dimension {dimension}, residual {residual:e})")]
    EigenSplitFailure { dimension: usize, residual: f64 },
    #[error("multiplicity m_{index} = {value} is not an integer")]
    NonIntegralMultiplicity { index: usize, value: f64 },
    #[error("multiplicities sum to {sum}, expected {n}")]
    MultiplicitySum { sum: usize, n: usize },
    #[error("first eigenmatrix is singular")]
    SingularEigenmatrix,
    #[error("E_{i} o E_{j} is not in the span of the idempotents (residual {residual:e})")]
    ExpansionResidual { i: usize, j: usize, residual: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("spectrum has repeated eigenvalues θ_{i} and θ_{j}")]
    DegenerateSpectrum { i: usize, j: usize },
    #[error("eigenvalues are not strictly decreasing at index {0}")]
    Unordered(usize),
    #[error("spectrum needs at least one eigenvalue")]
    EmptySpectrum,
    #[error("multiplicity m_{0} must be positive")]
    NonPositiveMultiplicity(usize),
    #[error("multiplicity m_0 must be 1, found {0}")]
    PerronMultiplicity(usize),
    #[error("multiplicities sum to {sum}, expected {n}")]
    MultiplicitySum { sum: usize, n: usize },
    #[error("Gram-Schmidt breakdown at degree {degree} (relative norm {relative_norm:e})")]
    NumericalBreakdown { degree: usize, relative_norm: f64 },
    #[error("index {index} outside 1..={d}")]
    IndexOutOfRange { index: usize, d: usize },
    #[error("repeated nodes β_{i} and β_{j}")]
    RepeatedBeta { i: usize, j: usize },
    #[error("power {h} must be below the node count {d}")]
    PowerOutOfRange { h: usize, d: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("θ_0 coincides with θ_{0}")]
    PerronNotSeparated(usize),
    #[error("eigenvalues θ_{i} and θ_{j} coincide")]
    SpectrumNotSimple { i: usize, j: usize },
    #[error("{route}: more than one index l passes: {candidates:?}")]
    MultipleL { route: Route, candidates: Vec<usize> },
    #[error("walk counts overflowed at power {0}")]
    WalkCountOverflow(usize),
    #[error("routes disagree: {0}")]
    RouteDisagreement(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("{family}: {reason}")]
    ParamOutOfRange { family: &'static str, reason: String },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("graph is not regular (degrees {min}..{max})")]
    NotRegular { min: usize, max: usize },
    #[error("graph is not distance-regular: {0}")]
    NotDistanceRegular(String),
    #[error("spectrum failed a consistency check: {0}")]
    InconsistentSpectrum(String),
    #[error("no simple connected {k}-regular graph on {n} vertices after {attempts} attempts")]
    GenerationFailed { n: usize, k: usize, attempts: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}
