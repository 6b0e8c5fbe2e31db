//! Symmetric association schemes and the P-polynomial property.
//!
//! The crate builds schemes from relation matrices ([`scheme`]), computes
//! their eigenmatrices and Krein parameters ([`spectral`]), the predistance
//! polynomials of a spectrum ([`poly`]), and decides whether the scheme is
//! P-polynomial with respect to `A_1` by several independent routes that must
//! agree ([`mod@detect`]). [`graph`] covers the graph side (distances, excesses,
//! spectra) and [`families`] generates the classical examples.
//!
//! Numerical code is generic over the scalar type; the aliases below fix the
//! common choices.

#![allow(clippy::needless_range_loop)]

pub mod detect;
pub mod error;
pub mod families;
pub mod graph;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod scheme;
pub mod spectral;

pub use detect::{detect, detect_with, DetectConfig, Route, RouteVerdict, Verdict};
pub use error::{DetectError, FamilyError, GraphError, PolyError, SchemeError, SpectralError};
pub use families::{corpus, generate, CorpusEntry, FamilySpec};
pub use graph::Graph;
pub use scalar::{Real, Scalar};
pub use scheme::{build_scheme, build_scheme_with, AssociationScheme, IntersectionTensor, RelationMatrix, Validation};
pub use spectral::SpectralConfig;

/// Exact rationals, for evaluating identities without rounding.
pub type Rational = num_rational::BigRational;

/// Double-double floats, for identities that lose too much in `f64`.
pub type Wide = twofloat::TwoFloat;

pub type SpectralData = spectral::SpectralData<f64>;
pub type SpectralData32 = spectral::SpectralData<f32>;
pub type KreinTensor = spectral::KreinTensor<f64>;
pub type DetectionReport = detect::DetectionReport<f64>;
pub type DetectionReport32 = detect::DetectionReport<f32>;

pub type Spectrum = poly::Spectrum<f64>;
pub type ExactSpectrum = poly::Spectrum<Rational>;
pub type Polynomial = poly::Polynomial<f64>;
pub type ExactPolynomial = poly::Polynomial<Rational>;
pub type PredistanceSystem = poly::PredistanceSystem<f64>;
pub type ExactPredistanceSystem = poly::PredistanceSystem<Rational>;
pub type WideSpectrum = poly::Spectrum<Wide>;
