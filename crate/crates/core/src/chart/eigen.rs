//! Eigen-distributions of an operator field over complex points: spectral
//! projections, bracket closure of holomorphic sections, and the exactness
//! of `0 -> Z0 -> C^n -> C^n` near the origin.
//!
//! Eigenspaces are always named by eigenvalue: `P_plus` projects onto
//! `Ker(J_z - i)` and `P_minus` onto `Ker(J_z + i)`.

use crate::chart::field::{OperatorField, VectorField};
use crate::chart::sampler::ChartSampler;
use crate::chart::torsion::{lie_bracket, torsion_pointwise};
use crate::error::Result;
use crate::linalg::{identity, kernel, rank, CMatrix, Subspace, C64, DEFAULT_TOL, I};

/// Closure residual bound for torsion-free fields.
pub const CLOSURE_TOL: f64 = 1e-5;

/// Brackets with norm below this are skipped as degenerate.
const DEGENERATE_BRACKET: f64 = 1e-12;

/// `(P_plus, P_minus) = ((id - i J_z)/2, (id + i J_z)/2)`.
pub fn eigenprojections(j: &OperatorField, z: &[C64]) -> Result<(CMatrix, CMatrix)> {
    let jz = j.validated_at(z)?;
    let id = identity(j.dim());
    let half = C64::new(0.5, 0.0);
    let p_plus = (&id - &jz * I) * half;
    let p_minus = (&id + &jz * I) * half;
    Ok((p_plus, p_minus))
}

/// Which eigen-distribution a section lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eigenvalue {
    PlusI,
    MinusI,
}

impl Eigenvalue {
    fn sign(self) -> f64 {
        match self {
            Eigenvalue::PlusI => 1.0,
            Eigenvalue::MinusI => -1.0,
        }
    }
}

/// Projects a field onto an eigen-distribution: `(a -/+ i J a) / 2`, an exact
/// polynomial section with `J a_+ = i a_+` (resp. `J a_- = -i a_-`).
pub fn project_section(
    j: &OperatorField,
    a: &VectorField,
    which: Eigenvalue,
) -> Result<VectorField> {
    let ja = j.apply(a)?;
    let s = C64::new(0.0, -which.sign());
    a.add(&ja.scale(s)).map(|f| f.scale(C64::new(0.5, 0.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvolutivityReport {
    /// Max over samples of `||P_opposite [a, b]_z|| / ||[a, b]_z||`.
    pub max_closure_residual: f64,
    /// Max over samples of `||P_opposite [a, b]_z - Omega(a_z, b_z)/4||`, relative to `1 + ||a_z|| ||b_z||`.
    pub max_torsion_link: f64,
    /// Max over samples of `||Omega(a_z, b_z)||` for the projected sections.
    pub max_section_torsion: f64,
    pub evaluated: usize,
    pub skipped: usize,
    pub inconclusive: bool,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvolutivityConfig {
    pub field_pairs: usize,
    pub field_degree: u32,
}

impl Default for InvolutivityConfig {
    fn default() -> Self {
        InvolutivityConfig {
            field_pairs: 3,
            field_degree: 2,
        }
    }
}

pub fn check_involutivity(j: &OperatorField, sampler: &ChartSampler) -> Result<InvolutivityReport> {
    check_involutivity_with(j, sampler, &InvolutivityConfig::default())
}

/// Draws random real polynomial fields, projects them onto each eigen-distribution
/// and measures how far their brackets leave it at complex sample points with
/// `|z| <= r / 2e`.
pub fn check_involutivity_with(
    j: &OperatorField,
    sampler: &ChartSampler,
    config: &InvolutivityConfig,
) -> Result<InvolutivityReport> {
    let n = j.dim();
    let mut rng = sampler.aux_rng();
    let points = sampler.complex_points(j.radius() / (2.0 * std::f64::consts::E));
    let mut report = InvolutivityReport {
        max_closure_residual: 0.0,
        max_torsion_link: 0.0,
        max_section_torsion: 0.0,
        evaluated: 0,
        skipped: 0,
        inconclusive: false,
        closed: false,
    };
    for _ in 0..config.field_pairs {
        let a = VectorField::random(n, config.field_degree, &mut rng);
        let b = VectorField::random(n, config.field_degree, &mut rng);
        for which in [Eigenvalue::PlusI, Eigenvalue::MinusI] {
            let sa = project_section(j, &a, which)?;
            let sb = project_section(j, &b, which)?;
            for z in &points {
                let (p_plus, p_minus) = eigenprojections(j, z)?;
                let opposite = match which {
                    Eigenvalue::PlusI => p_minus,
                    Eigenvalue::MinusI => p_plus,
                };
                let bracket = lie_bracket(&sa, &sb, z)?;
                let leak = &opposite * &bracket;
                let az = sa.eval(z)?;
                let bz = sb.eval(z)?;
                let omega = torsion_pointwise(j, &az, &bz, z)?;
                let link =
                    (&leak - &omega * C64::new(0.25, 0.0)).norm() / (1.0 + az.norm() * bz.norm());
                report.max_torsion_link = report.max_torsion_link.max(link);
                report.max_section_torsion = report.max_section_torsion.max(omega.norm());
                let size = bracket.norm();
                if size <= DEGENERATE_BRACKET {
                    report.skipped += 1;
                    continue;
                }
                report.evaluated += 1;
                report.max_closure_residual = report.max_closure_residual.max(leak.norm() / size);
            }
        }
    }
    report.inconclusive = report.evaluated == 0;
    report.closed = !report.inconclusive && report.max_closure_residual <= CLOSURE_TOL;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactnessReport {
    /// `dim Ker(J_0 + i)`.
    pub source_dim: usize,
    /// `dim Ker(J_z + i)`.
    pub target_dim: usize,
    /// Rank of `(J_z - i)` restricted to `Ker(J_0 + i)`.
    pub map_rank: usize,
    pub injective: bool,
    pub onto_kernel: bool,
}

impl ExactnessReport {
    pub fn exact(&self) -> bool {
        self.injective && self.onto_kernel
    }
}

pub fn exactness_report(j: &OperatorField, z: &[C64]) -> Result<ExactnessReport> {
    let n = j.dim();
    let origin = vec![C64::new(0.0, 0.0); n];
    let j0 = j.validated_at(&origin)?;
    let jz = j.validated_at(z)?;
    let id = identity(n);
    let source = kernel(&(&j0 + &id * I), DEFAULT_TOL);
    let target = kernel(&(&jz + &id * I), DEFAULT_TOL);
    let image = (&jz - &id * I) * source.basis();
    let map_rank = rank(&image, DEFAULT_TOL);
    let range = Subspace::from_columns(&image, DEFAULT_TOL);
    Ok(ExactnessReport {
        source_dim: source.dim(),
        target_dim: target.dim(),
        map_rank,
        injective: map_rank == source.dim(),
        onto_kernel: range.same_span(&target),
    })
}

/// True iff `(J_z - i)` maps `Ker(J_0 + i)` isomorphically onto `Ker(J_z + i)`.
pub fn check_exactness(j: &OperatorField, z: &[C64]) -> Result<bool> {
    Ok(exactness_report(j, z)?.exact())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::field::to_complex;
    use crate::chart::generator::generate_acs;
    use crate::linalg::{c64, CVector};

    #[test]
    fn plus_projection_of_rotation() {
        let j = OperatorField::standard(2, 1.0).unwrap();
        let (p_plus, p_minus) = eigenprojections(&j, &to_complex(&[0.0, 0.0])).unwrap();
        let range = Subspace::from_columns(&p_plus, DEFAULT_TOL);
        assert_eq!(range.dim(), 1);
        assert!(range.contains(&CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, -1.0)])));
        assert!((&p_plus * &p_minus).norm() < 1e-15);
    }

    #[test]
    fn exactness_at_origin() {
        let j = generate_acs(4, 7, 1, 0.1).unwrap();
        let origin = to_complex(&[0.0; 4]);
        let report = exactness_report(&j, &origin).unwrap();
        assert_eq!(report.source_dim, 2);
        assert_eq!(report.target_dim, 2);
        assert!(report.exact());
        // The restriction is -2i on Ker(J_0 + i).
        let jz = j.eval(&origin).unwrap();
        let id = identity(4);
        let src = kernel(&(&jz + &id * I), DEFAULT_TOL);
        let mapped = (&jz - &id * I) * src.basis();
        assert!((mapped - src.basis() * c64(0.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn constant_structure_sections_close() {
        let j = OperatorField::standard(4, 1.0).unwrap();
        let sampler = ChartSampler::new(4, 1.0, 8, 3);
        let report = check_involutivity(&j, &sampler).unwrap();
        assert!(report.closed, "{report:?}");
        assert!(report.max_section_torsion == 0.0);
    }

    #[test]
    fn constant_sections_are_inconclusive() {
        // Constant sections of a constant structure have vanishing brackets.
        let j = OperatorField::standard(2, 1.0).unwrap();
        let sampler = ChartSampler::new(2, 1.0, 4, 1);
        let config = InvolutivityConfig {
            field_pairs: 2,
            field_degree: 0,
        };
        let report = check_involutivity_with(&j, &sampler, &config).unwrap();
        assert!(report.inconclusive);
        assert!(!report.closed);
    }
}
