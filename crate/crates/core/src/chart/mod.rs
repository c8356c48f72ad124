//! Almost complex structures on a chart ball of `R^n`.

pub mod eigen;
pub mod field;
pub mod generator;
pub mod sampler;
pub mod torsion;

pub use eigen::{
    check_exactness, check_involutivity, check_involutivity_with, eigenprojections,
    exactness_report, project_section, Eigenvalue, ExactnessReport, InvolutivityConfig,
    InvolutivityReport, CLOSURE_TOL,
};
pub use field::{standard_structure, to_complex, OperatorField, VectorField, STRUCTURE_TOL};
pub use generator::{generate_acs, AcsGenerator, AcsKind};
pub use sampler::ChartSampler;
pub use torsion::{
    check_identity_1, check_identity_2, lie_bracket, torsion_bracket, torsion_pointwise,
};
