//! Lie-algebra level description of homogeneous spaces `G/H` and their
//! invariant complex structures.

pub mod algebra;
pub mod fixtures;
pub mod format;
pub mod pair;
pub mod structure;

pub use algebra::{validate_algebra, AlgebraReport, LieAlgebra};
pub use fixtures::{named_fixtures, random_fixtures, Fixture};
pub use format::{fixture_from_text, fixture_to_text};
pub use pair::{
    c_v, c_v_inverse, check_i0, check_iv, check_iv_report, HomogeneousPair, IvReport, PairReport,
    PartialStructure, MEMBER_TOL,
};
pub use structure::{
    beta, beta_with, build_k, check_k0, closure_residual, h_bracket_invariance,
    infinitesimal_equivariance, integrability_criterion, integrability_report, nu_iso_check,
    quotient_multiplication, quotient_structure, roundtrip_structure, roundtrip_structure_with,
    roundtrip_subalgebra, roundtrip_subalgebra_with, subalgebra_equivalence, CriterionReport,
    EquivalenceReport, K0Report, SignConvention, SubalgebraCandidate, ROUNDTRIP_TOL,
};
