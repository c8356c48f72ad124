//! Integrability criterion for invariant structures and the correspondence
//! between `I_V` and admissible complex subalgebras `k` of `g_C`.
//!
//! Sign convention: `build_k` takes the `+i` eigenspace of `I` on `V_C`, and
//! [`beta`] puts eigenvalue `+i` on `V_C ∩ k`. With this pairing both round
//! trips are the identity. Putting `-i` on `V_C ∩ k` instead (available as
//! [`SignConvention::MinusIOnK`]) reproduces multiplication by `i` on
//! `g_C / k` transported to `g/h`, and sends `k` to its conjugate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lie::algebra::LieAlgebra;
use crate::lie::pair::{c_v, check_iv, HomogeneousPair, PartialStructure, MEMBER_TOL};
use crate::linalg::{
    complexify, identity, kernel, rank_real, split_real, CMatrix, Subspace, C64, DEFAULT_TOL, I,
};

/// Bound for both round trips through `build_k` and `beta`.
pub const ROUNDTRIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SubalgebraCandidate {
    k: Subspace,
}

impl SubalgebraCandidate {
    pub fn new(k: Subspace) -> Self {
        SubalgebraCandidate { k }
    }

    pub fn space(&self) -> &Subspace {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn conjugate(&self) -> SubalgebraCandidate {
        SubalgebraCandidate {
            k: self.k.conjugate(),
        }
    }
}

fn check_ambient(pair: &HomogeneousPair, k: &SubalgebraCandidate) -> Result<()> {
    if k.space().ambient_dim() != pair.dim() {
        return Err(Error::Shape(format!(
            "subspace of C^{} for g of dimension {}",
            k.space().ambient_dim(),
            pair.dim()
        )));
    }
    Ok(())
}

fn cplx(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

fn real_projector(s: &Subspace) -> DMatrix<f64> {
    split_real(&s.projector()).0
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    /// Largest distance of `I[Ix,y] + I[x,Iy] + [x,y] - [Ix,Iy]` from `h`
    /// over basis pairs, relative to `(1 + ||I||)^2` times the algebra scale.
    pub max_residual: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub pass: bool,
}

/// The operator `y -> I[Ix,y] + I[x,Iy] + [x,y] - [Ix,Iy]`.
fn criterion_map(g: &LieAlgebra, i: &DMatrix<f64>, x: &DVector<f64>) -> DMatrix<f64> {
    let ad_x = g.ad(x);
    let ad_ix = g.ad(&(i * x));
    i * &ad_ix + i * &ad_x * i + &ad_x - &ad_ix * i
}

pub fn integrability_report(
    pair: &HomogeneousPair,
    i: &PartialStructure,
) -> Result<CriterionReport> {
    if i.dim() != pair.dim() {
        return Err(Error::Shape(format!(
            "operator of dimension {} on g of dimension {}",
            i.dim(),
            pair.dim()
        )));
    }
    let g = pair.algebra();
    let m = g.dim();
    let im = i.matrix();
    let scale = (1.0 + im.norm()).powi(2) * g.scale();
    let off_h = DMatrix::<f64>::identity(m, m) - real_projector(&pair.h_complex());
    let mut report = CriterionReport {
        max_residual: 0.0,
        worst_pair: None,
        pass: true,
    };
    for a in 0..m {
        let mut x = DVector::zeros(m);
        x[a] = 1.0;
        let leak = &off_h * criterion_map(g, im, &x);
        for b in (a + 1)..m {
            let r = leak.column(b).norm() / scale;
            if r > report.max_residual {
                report.max_residual = r;
                report.worst_pair = Some((a, b));
            }
        }
    }
    report.pass = report.max_residual <= MEMBER_TOL;
    Ok(report)
}

/// Integrability criterion: the expression lies in `h` for all basis pairs.
pub fn integrability_criterion(pair: &HomogeneousPair, i: &PartialStructure) -> bool {
    integrability_report(pair, i).is_ok_and(|r| r.pass)
}

/// `h_C + Ker(I_C - i) ∩ V_C`.
pub fn build_k(pair: &HomogeneousPair, i: &PartialStructure) -> Result<SubalgebraCandidate> {
    let dv = pair.v_dim();
    if !dv.is_multiple_of(2) {
        return Err(Error::OddDimension(dv));
    }
    if i.dim() != pair.dim() {
        return Err(Error::Shape(format!(
            "operator of dimension {} on g of dimension {}",
            i.dim(),
            pair.dim()
        )));
    }
    let ibar = complexify(&(pair.v_coordinates() * i.matrix() * pair.v_basis()))?;
    let eig = kernel(&(ibar - identity(dv) * I), DEFAULT_TOL);
    if eig.dim() != dv / 2 {
        return Err(Error::InvalidInput(format!(
            "+i eigenspace of I on V has dimension {}, expected {}",
            eig.dim(),
            dv / 2
        )));
    }
    let vk = cplx(pair.v_basis()) * eig.basis();
    let vk = Subspace::from_columns(&vk, DEFAULT_TOL);
    Ok(SubalgebraCandidate::new(pair.h_complex().sum(&vk)?))
}

/// Largest component of `[a, b]` outside `k` over orthonormal basis vectors
/// `a, b` of `k`, relative to the algebra scale.
pub fn closure_residual(g: &LieAlgebra, k: &Subspace) -> f64 {
    let kb = k.basis();
    let perp = identity(k.ambient_dim()) - k.projector();
    let mut worst: f64 = 0.0;
    for a in kb.column_iter() {
        let leak = &perp * g.ad_c(&a.into_owned()) * kb;
        for c in leak.column_iter() {
            worst = worst.max(c.norm());
        }
    }
    worst / g.scale()
}

#[derive(Debug, Clone, PartialEq)]
pub struct K0Report {
    /// (a) `k` is a complex subalgebra.
    pub closed: bool,
    pub closure_residual: f64,
    /// (b) `k + conj(k) = g_C`.
    pub spans: bool,
    /// (c) `k ∩ conj(k) = h_C`.
    pub meets_in_h: bool,
    /// (d) every sample maps `k` into `k`.
    pub invariant: bool,
    pub invariance_residual: f64,
}

impl K0Report {
    pub fn pass(&self) -> bool {
        self.closed && self.spans && self.meets_in_h && self.invariant
    }
}

pub fn check_k0(pair: &HomogeneousPair, k: &SubalgebraCandidate) -> Result<K0Report> {
    check_ambient(pair, k)?;
    let ks = k.space();
    let kbar = ks.conjugate();
    let closure = closure_residual(pair.algebra(), ks);
    let spans = ks.sum(&kbar)?.dim() == pair.dim();
    let meets_in_h = ks.intersect(&kbar)?.same_span(&pair.h_complex());
    let mut invariance: f64 = 0.0;
    for a in pair.samples() {
        let ac = complexify(a)?;
        let size = a.norm().max(1.0);
        for c in ks.basis().column_iter() {
            invariance = invariance.max(ks.residual(&(&ac * c)) / size);
        }
    }
    Ok(K0Report {
        closed: closure <= MEMBER_TOL,
        closure_residual: closure,
        spans,
        meets_in_h,
        invariant: invariance <= MEMBER_TOL,
        invariance_residual: invariance,
    })
}

/// Which eigenvalue the reconstructed operator takes on `V_C ∩ k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    PlusIOnK,
    MinusIOnK,
}

pub fn beta(pair: &HomogeneousPair, k: &SubalgebraCandidate) -> Result<PartialStructure> {
    beta_with(pair, k, SignConvention::PlusIOnK)
}

/// The real operator vanishing on `h` with eigenspaces `V_C ∩ k` and
/// `V_C ∩ conj(k)` for `±i`.
pub fn beta_with(
    pair: &HomogeneousPair,
    k: &SubalgebraCandidate,
    convention: SignConvention,
) -> Result<PartialStructure> {
    check_ambient(pair, k)?;
    let m = pair.dim();
    let dh = pair.h_dim();
    let vk = pair.v_complex().intersect(k.space())?;
    let half = vk.dim();
    if dh + 2 * half != m {
        return Err(Error::InvalidK0(format!(
            "dim h + 2 dim(V_C ∩ k) = {} differs from dim g = {m}",
            dh + 2 * half
        )));
    }
    let mut basis = CMatrix::zeros(m, m);
    basis
        .view_mut((0, 0), (m, dh))
        .copy_from(&cplx(pair.h_basis()));
    basis.view_mut((0, dh), (m, half)).copy_from(vk.basis());
    basis
        .view_mut((0, dh + half), (m, half))
        .copy_from(&vk.conjugate().basis().clone());
    if crate::linalg::rank(&basis, DEFAULT_TOL) != m {
        return Err(Error::InvalidK0(
            "h_C, V_C ∩ k and V_C ∩ conj(k) are not independent".into(),
        ));
    }
    let eig = match convention {
        SignConvention::PlusIOnK => I,
        SignConvention::MinusIOnK => -I,
    };
    let diag = CMatrix::from_fn(m, m, |r, c| match (r == c, r) {
        (true, r) if r >= dh && r < dh + half => eig,
        (true, r) if r >= dh + half => -eig,
        _ => C64::new(0.0, 0.0),
    });
    let inv = basis
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidK0("singular eigenbasis".into()))?;
    let (re, imag) = split_real(&(&basis * diag * inv));
    if imag > MEMBER_TOL * re.norm().max(1.0) {
        return Err(Error::InvalidK0(format!(
            "reconstructed operator is not real ({imag:.3e})"
        )));
    }
    PartialStructure::new(re)
}

/// Real matrix `[Re M; Im M]` of the map `v -> P_perp v` from `V` into
/// `g_C / k`, with the quotient realized as `k^perp`.
fn nu_matrix(
    pair: &HomogeneousPair,
    k: &SubalgebraCandidate,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_ambient(pair, k)?;
    let m = pair.dim();
    let perp = identity(m) - k.space().projector();
    let image = perp * cplx(pair.v_basis());
    let stack = |a: &CMatrix| {
        let mut out = DMatrix::zeros(2 * m, a.ncols());
        out.view_mut((0, 0), (m, a.ncols()))
            .copy_from(&a.map(|z| z.re));
        out.view_mut((m, 0), (m, a.ncols()))
            .copy_from(&a.map(|z| z.im));
        out
    };
    let times_i = &image * I;
    Ok((stack(&image), stack(&times_i)))
}

/// True iff `x + h -> x + k` is a real-linear isomorphism `g/h -> g_C/k`.
pub fn nu_iso_check(pair: &HomogeneousPair, k: &SubalgebraCandidate) -> bool {
    let Ok((nu, _)) = nu_matrix(pair, k) else {
        return false;
    };
    let dv = pair.v_dim();
    let target = 2 * (pair.dim() - k.dim());
    dv == target && rank_real(&nu, DEFAULT_TOL) == dv
}

/// Multiplication by `i` on `g_C / k`, pulled back to `g/h` through `nu`, in
/// the `V` basis.
pub fn quotient_multiplication(
    pair: &HomogeneousPair,
    k: &SubalgebraCandidate,
) -> Result<DMatrix<f64>> {
    if !nu_iso_check(pair, k) {
        return Err(Error::InvalidK0(
            "g/h -> g_C/k is not an isomorphism".into(),
        ));
    }
    let (nu, target) = nu_matrix(pair, k)?;
    if pair.v_dim() == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let x = nu
        .clone()
        .svd(true, true)
        .solve(&target, f64::EPSILON)
        .map_err(|e| Error::InvalidK0(e.to_string()))?;
    let residual = (&nu * &x - &target).norm();
    if residual > MEMBER_TOL * target.norm().max(1.0) {
        return Err(Error::InvalidK0(format!(
            "i * nu(V) is not in nu(V) ({residual:.3e})"
        )));
    }
    Ok(x)
}

/// `||beta(build_k(I)) - I|| / max(1, ||I||)`.
pub fn roundtrip_structure(pair: &HomogeneousPair, i: &PartialStructure) -> Result<f64> {
    roundtrip_structure_with(pair, i, SignConvention::PlusIOnK)
}

pub fn roundtrip_structure_with(
    pair: &HomogeneousPair,
    i: &PartialStructure,
    convention: SignConvention,
) -> Result<f64> {
    let back = beta_with(pair, &build_k(pair, i)?, convention)?;
    Ok((back.matrix() - i.matrix()).norm() / i.matrix().norm().max(1.0))
}

/// Projector distance between `build_k(beta(k))` and `k`.
pub fn roundtrip_subalgebra(pair: &HomogeneousPair, k: &SubalgebraCandidate) -> Result<f64> {
    roundtrip_subalgebra_with(pair, k, SignConvention::PlusIOnK)
}

pub fn roundtrip_subalgebra_with(
    pair: &HomogeneousPair,
    k: &SubalgebraCandidate,
    convention: SignConvention,
) -> Result<f64> {
    let back = build_k(pair, &beta_with(pair, k, convention)?)?;
    Ok(back.space().distance(k.space()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub criterion: bool,
    pub criterion_residual: f64,
    /// `build_k(I)` is bracket closed.
    pub closed: bool,
    pub closure_residual: f64,
    /// Conditions (b) and (c) for `build_k(I)`; these hold for every `I` in `I_V`.
    pub spans: bool,
    pub meets_in_h: bool,
    pub agree: bool,
}

/// Compares the integrability criterion with closure of `build_k(I)`.
pub fn subalgebra_equivalence(
    pair: &HomogeneousPair,
    i: &PartialStructure,
) -> Result<EquivalenceReport> {
    if !check_iv(pair, i) {
        return Err(Error::InvalidInput("operator is not in I_V".into()));
    }
    let criterion = integrability_report(pair, i)?;
    let k = build_k(pair, i)?;
    let k0 = check_k0(pair, &k)?;
    let subalgebra = k0.closed && k0.spans && k0.meets_in_h;
    Ok(EquivalenceReport {
        criterion: criterion.pass,
        criterion_residual: criterion.max_residual,
        closed: k0.closed,
        closure_residual: k0.closure_residual,
        spans: k0.spans,
        meets_in_h: k0.meets_in_h,
        agree: criterion.pass == subalgebra,
    })
}

/// Largest distance of `I[z, v] - [z, I v]` from `h` for `z` in `h` and `v`
/// in `V` (basis vectors), relative. This is the differentiated form of
/// equivariance; it is only implied by the samples when they come from the
/// identity component.
pub fn infinitesimal_equivariance(pair: &HomogeneousPair, i: &PartialStructure) -> f64 {
    let g = pair.algebra();
    let im = i.matrix();
    let scale = im.norm().max(1.0) * g.scale();
    let mut worst: f64 = 0.0;
    for z in pair.h_basis().column_iter() {
        let ad_z = g.ad(&z.into_owned());
        for v in pair.v_basis().column_iter() {
            let d = im * (&ad_z * v) - &ad_z * (im * v);
            worst = worst.max(pair.h_residual(&d, scale * z.norm() * v.norm()));
        }
    }
    worst
}

/// Largest component of `[z, a]` outside `k` for `z` in `h` and `a` in `k`.
pub fn h_bracket_invariance(pair: &HomogeneousPair, k: &SubalgebraCandidate) -> f64 {
    let g = pair.algebra();
    let ks = k.space();
    let perp = identity(pair.dim()) - ks.projector();
    let mut worst: f64 = 0.0;
    for z in pair.h_basis().column_iter() {
        let ad_z = complexify(&g.ad(&z.into_owned())).expect("square");
        let leak = &perp * ad_z * ks.basis();
        for c in leak.column_iter() {
            worst = worst.max(c.norm() / (g.scale() * z.norm()));
        }
    }
    worst
}

/// `c_V(beta(k))`, the structure on the quotient attached to `k`.
pub fn quotient_structure(
    pair: &HomogeneousPair,
    k: &SubalgebraCandidate,
    convention: SignConvention,
) -> Result<DMatrix<f64>> {
    c_v(pair, &beta_with(pair, k, convention)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, CVector};

    fn su2_pair() -> HomogeneousPair {
        let g = LieAlgebra::su2();
        let samples = vec![g.exp_ad(&DVector::from_vec(vec![0.0, 0.0, 0.9]))];
        let h = DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]);
        let v = DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        HomogeneousPair::new(g, h, v, samples).unwrap()
    }

    fn rotation() -> PartialStructure {
        let mut i = DMatrix::zeros(3, 3);
        i[(1, 0)] = 1.0;
        i[(0, 1)] = -1.0;
        PartialStructure::new(i).unwrap()
    }

    #[test]
    fn su2_criterion_and_k() {
        let pair = su2_pair();
        let i = rotation();
        assert!(integrability_criterion(&pair, &i));
        let k = build_k(&pair, &i).unwrap();
        assert_eq!(k.dim(), 2);
        let e3 = CVector::from_vec(vec![c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
        let w = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, -1.0), c64(0.0, 0.0)]);
        assert!(k.space().contains(&e3));
        assert!(k.space().contains(&w));
        let report = check_k0(&pair, &k).unwrap();
        assert!(report.pass(), "{report:?}");
        assert!(nu_iso_check(&pair, &k));
    }

    #[test]
    fn su2_roundtrips() {
        let pair = su2_pair();
        let i = rotation();
        assert!(roundtrip_structure(&pair, &i).unwrap() <= 1e-12);
        let k = build_k(&pair, &i).unwrap();
        assert!(roundtrip_subalgebra(&pair, &k).unwrap() <= 1e-12);
        assert_eq!(
            beta(&pair, &k)
                .unwrap()
                .matrix()
                .clone()
                .map(|x| (x * 1e12).round() / 1e12),
            i.matrix().clone()
        );
    }

    #[test]
    fn minus_convention_inverts_and_matches_quotient_multiplication() {
        let pair = su2_pair();
        let i = rotation();
        let k = build_k(&pair, &i).unwrap();
        let flipped = beta_with(&pair, &k, SignConvention::MinusIOnK).unwrap();
        assert!((flipped.matrix() + i.matrix()).norm() < 1e-12);
        let mult = quotient_multiplication(&pair, &k).unwrap();
        let expected = quotient_structure(&pair, &k, SignConvention::MinusIOnK).unwrap();
        assert!((mult - expected).norm() < 1e-12);
    }

    #[test]
    fn k_equal_to_h_fails_spanning() {
        let pair = su2_pair();
        let k = SubalgebraCandidate::new(pair.h_complex());
        let report = check_k0(&pair, &k).unwrap();
        assert!(!report.spans);
        assert!(!report.pass());
    }

    #[test]
    fn full_h_is_degenerate() {
        let pair = HomogeneousPair::coordinate_split(LieAlgebra::su2(), 3, vec![]).unwrap();
        let zero = PartialStructure::new(DMatrix::zeros(3, 3)).unwrap();
        let k = build_k(&pair, &zero).unwrap();
        assert_eq!(k.dim(), 3);
        assert!(check_k0(&pair, &k).unwrap().pass());
        assert_eq!(beta(&pair, &k).unwrap(), zero);
        assert_eq!(roundtrip_structure(&pair, &zero).unwrap(), 0.0);
        assert_eq!(roundtrip_subalgebra(&pair, &k).unwrap(), 0.0);
    }

    #[test]
    fn odd_complement_rejected() {
        let pair = HomogeneousPair::coordinate_split(LieAlgebra::abelian(3), 0, vec![]).unwrap();
        let zero = PartialStructure::new(DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(build_k(&pair, &zero), Err(Error::OddDimension(3)));
    }

    #[test]
    fn k_meeting_g_beyond_h_is_not_iso() {
        // h = 0 in abelian R^2 and k spanned by the real vector e1.
        let pair = HomogeneousPair::coordinate_split(LieAlgebra::abelian(2), 0, vec![]).unwrap();
        let e1 = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0)]);
        let k = SubalgebraCandidate::new(Subspace::from_vectors(2, &[e1], DEFAULT_TOL).unwrap());
        assert!(!check_k0(&pair, &k).unwrap().meets_in_h);
        assert!(!nu_iso_check(&pair, &k));
        assert!(matches!(beta(&pair, &k), Err(Error::InvalidK0(_))));
    }
}
