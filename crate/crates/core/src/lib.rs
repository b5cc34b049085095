//! Truncated Weil algebras, their cohomology, Vey bases, minimal models of
//! the truncated polynomial algebra, and per-manifold class reports.

pub mod complexes;
pub mod error;
pub mod gca;
pub mod linalg;
pub mod manifold;
pub mod minimal_model;
pub mod rational;
pub mod vey;

pub use complexes::{
    build_complex, build_complex_capped, cohomology, CohomologyResult, GradedComplex,
};
pub use error::{Error, Result};
pub use gca::{AlgebraSignature, ComplexKind, Element, Monomial};
pub use manifold::{report, ClassRecord, ManifoldDescriptor, ManifoldReport};
pub use minimal_model::{
    build_model, build_model_with, loop_poincare, ModelBudget, ModelStage, PoincareSeries,
    RankTable,
};
pub use rational::Rational;
pub use vey::{
    classify, extended_basis, kappa, validate_vey, variable_set, vey_basis, ValidationReport,
    VeyClass, WoCondition,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
