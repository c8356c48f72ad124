//! Dense real and complex linear algebra with explicit rank tolerances.
//!
//! All set-level statements downstream (sums, intersections, equality of
//! complex subalgebras) are reduced to singular-value rank tests here. A
//! [`Subspace`] always stores an orthonormal basis of its complex span; real
//! subspaces are represented by their complexification, which has the same
//! dimension and contains a real vector exactly when the real span does.

use nalgebra::{DMatrix, DVector, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative singular-value threshold used when no tolerance is given.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Extends a real square matrix complex-linearly to `X_C = X + iX`.
pub fn complexify(m: &DMatrix<f64>) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "complexify expects a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.map(|x| C64::new(x, 0.0)))
}

pub fn complexify_vector(v: &DVector<f64>) -> CVector {
    v.map(|x| C64::new(x, 0.0))
}

/// Real part of a complex matrix, together with the largest absolute imaginary entry.
pub fn split_real(m: &CMatrix) -> (DMatrix<f64>, f64) {
    let imag = m.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    (m.map(|z| z.re), imag)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Componentwise complex conjugation.
pub fn conj_matrix(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

fn singular_values_and_u(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    (svd.singular_values, u)
}

/// Numerical rank: singular values above `tol * sigma_max`.
pub fn rank(m: &CMatrix, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = SVD::new(m.clone(), false, false);
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > tol * smax)
        .count()
}

pub fn rank_real(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = SVD::new(m.clone(), false, false);
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > tol * smax)
        .count()
}

/// Kernel of `m` at relative tolerance `tol`: the span of right singular
/// vectors whose singular value is at most `tol * sigma_max`.
pub fn kernel(m: &CMatrix, tol: f64) -> Subspace {
    let cols = m.ncols();
    if cols == 0 {
        return Subspace::zero(0, tol);
    }
    // Pad with zero rows so the SVD returns a full set of right singular vectors.
    let padded = if m.nrows() < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.max();
    let vectors: Vec<CVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| smax == 0.0 || s <= tol * smax)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    Subspace::from_vectors(cols, &vectors, tol).expect("kernel vectors share the ambient dimension")
}

pub fn kernel_real(m: &DMatrix<f64>, tol: f64) -> Subspace {
    kernel(&m.map(|x| C64::new(x, 0.0)), tol)
}

/// Column span of `m`.
pub fn range(m: &CMatrix, tol: f64) -> Subspace {
    Subspace::from_columns(m, tol)
}

/// A complex subspace of `C^ambient` stored as an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: CMatrix,
    tol: f64,
}

impl Subspace {
    pub fn zero(ambient: usize, tol: f64) -> Self {
        Subspace {
            ambient,
            basis: CMatrix::zeros(ambient, 0),
            tol,
        }
    }

    pub fn full(ambient: usize, tol: f64) -> Self {
        Subspace {
            ambient,
            basis: identity(ambient),
            tol,
        }
    }

    /// Span of the columns of `m`, orthonormalized through an SVD.
    pub fn from_columns(m: &CMatrix, tol: f64) -> Self {
        let ambient = m.nrows();
        if m.ncols() == 0 || ambient == 0 {
            return Subspace::zero(ambient, tol);
        }
        let (sv, u) = singular_values_and_u(m);
        let smax = sv.max();
        if smax == 0.0 {
            return Subspace::zero(ambient, tol);
        }
        let keep: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > tol * smax).collect();
        let basis = u.select_columns(&keep);
        Subspace {
            ambient,
            basis,
            tol,
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[CVector], tol: f64) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::Shape(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient, tol));
        }
        Ok(Self::from_columns(&CMatrix::from_columns(vectors), tol))
    }

    /// Span of real columns; the stored basis is real as well.
    pub fn from_real_columns(m: &DMatrix<f64>, tol: f64) -> Self {
        let ambient = m.nrows();
        if m.ncols() == 0 || ambient == 0 {
            return Subspace::zero(ambient, tol);
        }
        let svd = SVD::new(m.clone(), true, false);
        let u = svd.u.expect("left singular vectors requested");
        let smax = svd.singular_values.max();
        if smax == 0.0 {
            return Subspace::zero(ambient, tol);
        }
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > tol * smax)
            .collect();
        Subspace {
            ambient,
            basis: u.select_columns(&keep).map(|x| C64::new(x, 0.0)),
            tol,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Orthonormal basis, one vector per column.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<CVector> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// The basis as a real matrix, if every basis entry is real to within `tol`.
    pub fn real_basis(&self) -> Option<DMatrix<f64>> {
        let (re, imag) = split_real(&self.basis);
        (imag <= self.tol).then_some(re)
    }

    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn project(&self, v: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// Euclidean distance from `v` to the subspace.
    pub fn residual(&self, v: &CVector) -> f64 {
        (v - self.project(v)).norm()
    }

    /// Membership relative to the norm of `v` itself.
    pub fn contains(&self, v: &CVector) -> bool {
        self.contains_scaled(v, v.norm())
    }

    /// Membership with an explicit reference scale, for vectors that may be
    /// rounding noise around zero.
    pub fn contains_scaled(&self, v: &CVector, scale: f64) -> bool {
        self.residual(v) <= self.tol * scale
    }

    pub fn is_subset_of(&self, other: &Subspace) -> bool {
        self.basis
            .column_iter()
            .all(|c| other.residual(&c.into_owned()) <= other.tol.max(self.tol))
    }

    /// Span equality by mutual membership of bases.
    pub fn same_span(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && self.is_subset_of(other)
            && other.is_subset_of(self)
    }

    /// Frobenius distance between the orthogonal projectors.
    pub fn distance(&self, other: &Subspace) -> f64 {
        (self.projector() - other.projector()).norm()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Shape(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let tol = self.tol.max(other.tol);
        let mut cols = self.basis_vectors();
        cols.extend(other.basis_vectors());
        Subspace::from_vectors(self.ambient, &cols, tol)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let tol = self.tol.max(other.tol);
        let (ka, kb) = (self.dim(), other.dim());
        if ka == 0 || kb == 0 {
            return Ok(Subspace::zero(self.ambient, tol));
        }
        let mut stacked = CMatrix::zeros(self.ambient, ka + kb);
        stacked
            .view_mut((0, 0), (self.ambient, ka))
            .copy_from(&self.basis);
        stacked
            .view_mut((0, ka), (self.ambient, kb))
            .copy_from(&(-&other.basis));
        let ker = kernel(&stacked, tol);
        if ker.dim() == 0 {
            return Ok(Subspace::zero(self.ambient, tol));
        }
        let coeffs = ker.basis().rows(0, ka);
        Ok(Subspace::from_columns(&(&self.basis * coeffs), tol))
    }

    /// True iff `self ∩ other = {0}` and `self + other` is the whole ambient space.
    pub fn is_direct_complement(&self, other: &Subspace) -> Result<bool> {
        Ok(self.intersect(other)?.dim() == 0 && self.sum(other)?.dim() == self.ambient)
    }

    /// Span of the componentwise conjugates of the basis vectors.
    pub fn conjugate(&self) -> Subspace {
        Subspace {
            ambient: self.ambient,
            basis: conj_matrix(&self.basis),
            tol: self.tol,
        }
    }

    /// Image under a linear map of the ambient space.
    pub fn image(&self, m: &CMatrix) -> Result<Subspace> {
        if m.ncols() != self.ambient {
            return Err(Error::Shape(format!(
                "map with {} columns applied in ambient dimension {}",
                m.ncols(),
                self.ambient
            )));
        }
        Ok(Subspace::from_columns(&(m * &self.basis), self.tol))
    }

    pub fn orthogonal_complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient, self.tol);
        }
        kernel(&self.basis.adjoint(), self.tol)
    }
}

pub fn subspace_sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.sum(b)
}

pub fn subspace_intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersect(b)
}

pub fn is_direct_complement(a: &Subspace, b: &Subspace) -> Result<bool> {
    a.is_direct_complement(b)
}

pub fn conjugate_subspace(k: &Subspace) -> Subspace {
    k.conjugate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j0() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
    }

    fn cvec(entries: &[C64]) -> CVector {
        CVector::from_column_slice(entries)
    }

    #[test]
    fn complexify_identity_and_zero() {
        assert_eq!(complexify(&DMatrix::identity(3, 3)).unwrap(), identity(3));
        assert_eq!(
            complexify(&DMatrix::zeros(2, 2)).unwrap(),
            CMatrix::zeros(2, 2)
        );
    }

    #[test]
    fn complexify_rejects_non_square() {
        assert!(matches!(
            complexify(&DMatrix::zeros(2, 3)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn rotation_has_eigenvalues_plus_minus_i() {
        // lambda^2 + 1 = 0: both shifted maps are singular with one-dimensional kernels.
        let m = complexify(&j0()).unwrap();
        for lambda in [I, -I] {
            let shifted = &m - identity(2) * lambda;
            assert_eq!(kernel(&shifted, DEFAULT_TOL).dim(), 1);
        }
        assert_eq!(m[(0, 1)], c64(-1.0, 0.0));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&CMatrix::zeros(3, 3), DEFAULT_TOL).dim(), 3);
        assert_eq!(kernel(&identity(3), DEFAULT_TOL).dim(), 0);

        let m = complexify(&j0()).unwrap() - identity(2) * I;
        let ker = kernel(&m, DEFAULT_TOL);
        assert_eq!(ker.dim(), 1);
        assert!(ker.contains(&cvec(&[c64(1.0, 0.0), c64(0.0, -1.0)])));
        assert!(!ker.contains(&cvec(&[c64(1.0, 0.0), c64(0.0, 1.0)])));
    }

    #[test]
    fn kernel_of_wide_matrix() {
        let m = CMatrix::from_row_slice(1, 3, &[c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        let ker = kernel(&m, DEFAULT_TOL);
        assert_eq!(ker.dim(), 2);
        assert_eq!(rank(&m, DEFAULT_TOL) + ker.dim(), 3);
    }

    #[test]
    fn coordinate_axes_are_complements() {
        let e1 = Subspace::from_real_columns(
            &DMatrix::from_column_slice(2, 1, &[1.0, 0.0]),
            DEFAULT_TOL,
        );
        let e2 = Subspace::from_real_columns(
            &DMatrix::from_column_slice(2, 1, &[0.0, 1.0]),
            DEFAULT_TOL,
        );
        assert_eq!(e1.sum(&e2).unwrap().dim(), 2);
        assert_eq!(e1.intersect(&e2).unwrap().dim(), 0);
        assert!(e1.is_direct_complement(&e2).unwrap());

        assert!(e1.sum(&e1).unwrap().same_span(&e1));
        assert!(e1.intersect(&e1).unwrap().same_span(&e1));
        assert!(!e1.is_direct_complement(&e1).unwrap());
    }

    #[test]
    fn zero_ambient_is_its_own_complement() {
        let z = Subspace::zero(0, DEFAULT_TOL);
        assert!(z.is_direct_complement(&z).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_shape_error() {
        let a = Subspace::full(2, DEFAULT_TOL);
        let b = Subspace::full(3, DEFAULT_TOL);
        assert!(matches!(a.sum(&b), Err(Error::Shape(_))));
        assert!(matches!(a.intersect(&b), Err(Error::Shape(_))));
        assert!(matches!(a.is_direct_complement(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn eigenspaces_of_rotation_are_complementary() {
        let m = complexify(&j0()).unwrap();
        let plus = kernel(&(&m - identity(2) * I), DEFAULT_TOL);
        let minus = kernel(&(&m + identity(2) * I), DEFAULT_TOL);
        assert!(plus.is_direct_complement(&minus).unwrap());
    }

    #[test]
    fn conjugation_examples() {
        let k = Subspace::from_vectors(2, &[cvec(&[c64(1.0, 0.0), c64(0.0, 1.0)])], DEFAULT_TOL)
            .unwrap();
        let kbar = k.conjugate();
        assert!(kbar.contains(&cvec(&[c64(1.0, 0.0), c64(0.0, -1.0)])));
        assert!(kbar.conjugate().same_span(&k));
        assert_eq!(k.sum(&kbar).unwrap().dim(), 2);

        let real = Subspace::from_real_columns(
            &DMatrix::from_column_slice(3, 1, &[1.0, 2.0, 0.0]),
            DEFAULT_TOL,
        );
        assert!(real.conjugate().same_span(&real));
        assert!(real.real_basis().is_some());
    }

    #[test]
    fn orthogonal_complement_dimensions() {
        let k = Subspace::from_vectors(
            3,
            &[cvec(&[c64(1.0, 0.0), c64(0.0, 1.0), c64(0.0, 0.0)])],
            DEFAULT_TOL,
        )
        .unwrap();
        let perp = k.orthogonal_complement();
        assert_eq!(perp.dim(), 2);
        assert!(k.is_direct_complement(&perp).unwrap());
        assert_eq!(
            Subspace::zero(3, DEFAULT_TOL).orthogonal_complement().dim(),
            3
        );
    }

    #[test]
    fn contains_scaled_tolerates_noise_near_zero() {
        let line =
            Subspace::from_real_columns(&DMatrix::from_column_slice(2, 1, &[1.0, 0.0]), 1e-8);
        let noise = cvec(&[c64(0.0, 0.0), c64(1e-17, 0.0)]);
        assert!(!line.contains(&noise));
        assert!(line.contains_scaled(&noise, 1.0));
    }
}
