//! Homogeneous pairs `(g, h)` with a chosen complement `V`, sampled
//! automorphisms standing in for `Ad(H)`, and operators on `g` and `g/h`.
//!
//! The quotient `g/h` is always written in the `V` basis: a class `x + h`
//! has coordinates `S_V x`, where `S_V` is the `V` block of `[B_h B_V]^{-1}`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lie::algebra::LieAlgebra;
use crate::linalg::{complexify, rank_real, CVector, Subspace, C64, DEFAULT_TOL};

/// Relative tolerance for subspace membership and operator identities.
pub const MEMBER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPair {
    g: LieAlgebra,
    h: DMatrix<f64>,
    v: DMatrix<f64>,
    samples: Vec<DMatrix<f64>>,
    /// `[B_h B_V]^{-1}`.
    split: DMatrix<f64>,
}

impl HomogeneousPair {
    /// `h` and `v` hold basis vectors as columns. They must together form a
    /// basis of `g`; other invariants are reported by [`HomogeneousPair::validate`].
    pub fn new(
        g: LieAlgebra,
        h: DMatrix<f64>,
        v: DMatrix<f64>,
        samples: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        let m = g.dim();
        if h.nrows() != m || v.nrows() != m {
            return Err(Error::Shape(format!(
                "subspace bases with {} and {} rows in dimension {m}",
                h.nrows(),
                v.nrows()
            )));
        }
        if let Some(a) = samples.iter().find(|a| a.shape() != (m, m)) {
            return Err(Error::Shape(format!(
                "sample of shape {:?} in dimension {m}",
                a.shape()
            )));
        }
        let (dh, dv) = (h.ncols(), v.ncols());
        let mut stacked = DMatrix::zeros(m, dh + dv);
        stacked.view_mut((0, 0), (m, dh)).copy_from(&h);
        stacked.view_mut((0, dh), (m, dv)).copy_from(&v);
        if dh + dv != m || rank_real(&stacked, DEFAULT_TOL) != m {
            return Err(Error::InvalidPair(format!(
                "h (dim {dh}) and V (dim {dv}) do not form a direct sum decomposition of g (dim {m})"
            )));
        }
        let split = stacked.try_inverse().expect("full rank");
        Ok(HomogeneousPair {
            g,
            h,
            v,
            samples,
            split,
        })
    }

    /// `h` spanned by the first `dh` coordinate vectors, `V` by the rest.
    pub fn coordinate_split(g: LieAlgebra, dh: usize, samples: Vec<DMatrix<f64>>) -> Result<Self> {
        let m = g.dim();
        if dh > m {
            return Err(Error::InvalidPair(format!(
                "h of dimension {dh} in g of dimension {m}"
            )));
        }
        let id = DMatrix::<f64>::identity(m, m);
        let h = id.columns(0, dh).into_owned();
        let v = id.columns(dh, m - dh).into_owned();
        Self::new(g, h, v, samples)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn h_dim(&self) -> usize {
        self.h.ncols()
    }

    pub fn v_dim(&self) -> usize {
        self.v.ncols()
    }

    pub fn h_basis(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn v_basis(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn samples(&self) -> &[DMatrix<f64>] {
        &self.samples
    }

    /// `S_V`: coordinates of `x + h` in the `V` basis.
    pub fn v_coordinates(&self) -> DMatrix<f64> {
        self.split.rows(self.h_dim(), self.v_dim()).into_owned()
    }

    /// `h_C` as a complex subspace of `C^m`.
    pub fn h_complex(&self) -> Subspace {
        Subspace::from_real_columns(&self.h, DEFAULT_TOL)
    }

    pub fn v_complex(&self) -> Subspace {
        Subspace::from_real_columns(&self.v, DEFAULT_TOL)
    }

    /// Induced action of an automorphism on `g/h`, in the `V` basis.
    pub fn quotient_action(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        self.v_coordinates() * a * &self.v
    }

    /// The same homogeneous pair with `V` replaced by the graph
    /// `{v + B_h t(v)}` of a linear map `t: V -> h` (given as a `dh x dv` matrix).
    pub fn tilt(&self, t: &DMatrix<f64>) -> Result<Self> {
        if t.shape() != (self.h_dim(), self.v_dim()) {
            return Err(Error::Shape(format!("tilt of shape {:?}", t.shape())));
        }
        let v = &self.v + &self.h * t;
        Self::new(self.g.clone(), self.h.clone(), v, self.samples.clone())
    }

    /// The pair expressed in the basis of `g` given by the columns of `p`.
    pub fn transport(&self, p: &DMatrix<f64>) -> Result<Self> {
        let g = self.g.transport(p)?;
        let pinv = p.clone().try_inverse().expect("checked by transport");
        let samples = self.samples.iter().map(|a| &pinv * a * p).collect();
        Self::new(g, &pinv * &self.h, &pinv * &self.v, samples)
    }

    pub fn replace_samples(&self, samples: Vec<DMatrix<f64>>) -> Result<Self> {
        Self::new(self.g.clone(), self.h.clone(), self.v.clone(), samples)
    }

    /// Residual of `x` outside `h`, relative to `scale`.
    pub(crate) fn h_residual(&self, x: &nalgebra::DVector<f64>, scale: f64) -> f64 {
        let hs = self.h_complex();
        let xc = CVector::from_iterator(x.len(), x.iter().map(|&r| C64::new(r, 0.0)));
        hs.residual(&xc) / scale.max(f64::MIN_POSITIVE)
    }

    pub fn validate(&self) -> PairReport {
        let g = &self.g;
        let s = g.scale();
        let mut h_closure: f64 = 0.0;
        for a in 0..self.h_dim() {
            for b in (a + 1)..self.h_dim() {
                let (x, y) = (self.h.column(a).into_owned(), self.h.column(b).into_owned());
                let br = g.bracket(&x, &y);
                h_closure = h_closure.max(self.h_residual(&br, s * x.norm() * y.norm()));
            }
        }
        let mut automorphism: f64 = 0.0;
        let mut h_preserved: f64 = 0.0;
        for a in &self.samples {
            let size = a.norm().max(1.0);
            automorphism = automorphism.max(g.automorphism_residual(a) / (size * size * s));
            for c in self.h.column_iter() {
                let x = c.into_owned();
                h_preserved = h_preserved.max(self.h_residual(&(a * &x), size * x.norm()));
            }
        }
        PairReport {
            h_closure_residual: h_closure,
            automorphism_residual: automorphism,
            h_preserved_residual: h_preserved,
            pass: h_closure <= MEMBER_TOL
                && automorphism <= MEMBER_TOL
                && h_preserved <= MEMBER_TOL,
        }
    }

    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.pass {
            Ok(self)
        } else {
            Err(Error::InvalidPair(format!(
                "h closure {:.3e}, automorphism {:.3e}, h preserved {:.3e}",
                report.h_closure_residual,
                report.automorphism_residual,
                report.h_preserved_residual
            )))
        }
    }
}

/// Relative residuals of the pair invariants; the direct-sum condition is
/// enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub h_closure_residual: f64,
    pub automorphism_residual: f64,
    pub h_preserved_residual: f64,
    pub pass: bool,
}

/// A real operator `I` on `g`, candidate member of `I_V`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialStructure {
    i: DMatrix<f64>,
}

impl PartialStructure {
    pub fn new(i: DMatrix<f64>) -> Result<Self> {
        if !i.is_square() {
            return Err(Error::Shape(format!("operator of shape {:?}", i.shape())));
        }
        Ok(PartialStructure { i })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.i
    }

    pub fn dim(&self) -> usize {
        self.i.nrows()
    }

    pub fn complexified(&self) -> crate::linalg::CMatrix {
        complexify(&self.i).expect("square")
    }
}

fn check_structure_dim(pair: &HomogeneousPair, i: &PartialStructure) -> Result<()> {
    if i.dim() != pair.dim() {
        return Err(Error::Shape(format!(
            "operator of dimension {} on g of dimension {}",
            i.dim(),
            pair.dim()
        )));
    }
    Ok(())
}

/// True iff `ibar^2 = -id` and `ibar` commutes with the quotient action of
/// every sample, both within [`MEMBER_TOL`] relative.
pub fn check_i0(pair: &HomogeneousPair, ibar: &DMatrix<f64>) -> bool {
    let dv = pair.v_dim();
    if ibar.shape() != (dv, dv) {
        return false;
    }
    let size = ibar.norm().max(1.0);
    let id = DMatrix::<f64>::identity(dv, dv);
    if (ibar * ibar + &id).norm() > MEMBER_TOL * size * size {
        return false;
    }
    pair.samples().iter().all(|a| {
        let q = pair.quotient_action(a);
        (&q * ibar - ibar * &q).norm() <= MEMBER_TOL * size * q.norm().max(1.0)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IvReport {
    /// `||I B_h||`, relative.
    pub kills_h: f64,
    /// Distance of `I(V)` from `V`, relative.
    pub preserves_v: f64,
    /// `||I^2 v + v||` over the `V` basis, relative.
    pub square: f64,
    /// Distance of `I A v - A I v` from `h`, relative.
    pub equivariance: f64,
}

impl IvReport {
    pub fn pass(&self) -> bool {
        self.kills_h <= MEMBER_TOL
            && self.preserves_v <= MEMBER_TOL
            && self.square <= MEMBER_TOL
            && self.equivariance <= MEMBER_TOL
    }
}

pub fn check_iv_report(pair: &HomogeneousPair, i: &PartialStructure) -> Result<IvReport> {
    check_structure_dim(pair, i)?;
    let im = i.matrix();
    let size = im.norm().max(1.0);
    let vs = pair.v_complex();
    let mut report = IvReport {
        kills_h: 0.0,
        preserves_v: 0.0,
        square: 0.0,
        equivariance: 0.0,
    };
    for c in pair.h_basis().column_iter() {
        report.kills_h = report.kills_h.max((im * c).norm() / (size * c.norm()));
    }
    for c in pair.v_basis().column_iter() {
        let v = c.into_owned();
        let iv = im * &v;
        let ivc = CVector::from_iterator(iv.len(), iv.iter().map(|&r| C64::new(r, 0.0)));
        report.preserves_v = report
            .preserves_v
            .max(vs.residual(&ivc) / (size * v.norm()));
        report.square = report
            .square
            .max((im * &iv + &v).norm() / (size * size * v.norm()));
        for a in pair.samples() {
            let d = im * (a * &v) - a * &iv;
            let scale = size * a.norm().max(1.0) * v.norm();
            report.equivariance = report.equivariance.max(pair.h_residual(&d, scale));
        }
    }
    Ok(report)
}

/// Membership of `I` in `I_V`.
pub fn check_iv(pair: &HomogeneousPair, i: &PartialStructure) -> bool {
    check_iv_report(pair, i).is_ok_and(|r| r.pass())
}

/// `c_V(I)`: the induced operator `x + h -> I x + h` in the `V` basis.
pub fn c_v(pair: &HomogeneousPair, i: &PartialStructure) -> Result<DMatrix<f64>> {
    if !check_iv(pair, i) {
        return Err(Error::InvalidInput("operator is not in I_V".into()));
    }
    Ok(pair.v_coordinates() * i.matrix() * pair.v_basis())
}

/// Inverse of [`c_v`]: the operator `B_V ibar S_V`, zero on `h` and valued in `V`.
pub fn c_v_inverse(pair: &HomogeneousPair, ibar: &DMatrix<f64>) -> Result<PartialStructure> {
    if !check_i0(pair, ibar) {
        return Err(Error::InvalidInput(
            "quotient operator is not in I_0".into(),
        ));
    }
    PartialStructure::new(pair.v_basis() * ibar * pair.v_coordinates())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::field::standard_structure;
    use nalgebra::DVector;

    fn su2_pair(samples: Vec<DMatrix<f64>>) -> HomogeneousPair {
        let g = LieAlgebra::su2();
        let h = DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]);
        let v = DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        HomogeneousPair::new(g, h, v, samples).unwrap()
    }

    fn rotation_structure() -> PartialStructure {
        let mut i = DMatrix::zeros(3, 3);
        i[(1, 0)] = 1.0;
        i[(0, 1)] = -1.0;
        PartialStructure::new(i).unwrap()
    }

    #[test]
    fn su2_pair_is_valid() {
        let g = LieAlgebra::su2();
        let samples = (1..4)
            .map(|t| g.exp_ad(&DVector::from_vec(vec![0.0, 0.0, t as f64 * 0.7])))
            .collect();
        let pair = su2_pair(samples);
        assert!(pair.validate().pass);
        assert!(check_iv(&pair, &rotation_structure()));
    }

    #[test]
    fn wrong_square_is_rejected() {
        let pair = su2_pair(vec![]);
        let mut i = rotation_structure().matrix().clone();
        i[(0, 1)] = 1.0;
        assert!(!check_iv(&pair, &PartialStructure::new(i).unwrap()));
    }

    #[test]
    fn reflection_breaks_i0() {
        // Rotation by pi about e1 induces diag(1, -1) on V.
        let reflect = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, -1.0]));
        let pair = su2_pair(vec![reflect]);
        assert!(pair.validate().pass);
        assert!(!check_i0(&pair, &standard_structure(2)));
        assert!(check_i0(&su2_pair(vec![]), &standard_structure(2)));
        assert!(!check_i0(&su2_pair(vec![]), &DMatrix::identity(2, 2)));
    }

    #[test]
    fn c_v_roundtrip() {
        let pair = su2_pair(vec![]);
        let i = rotation_structure();
        let ibar = c_v(&pair, &i).unwrap();
        assert_eq!(ibar, standard_structure(2));
        assert_eq!(c_v_inverse(&pair, &ibar).unwrap(), i);
    }

    #[test]
    fn degenerate_quotient() {
        let g = LieAlgebra::su2();
        let pair = HomogeneousPair::coordinate_split(g, 3, vec![]).unwrap();
        let ibar = DMatrix::zeros(0, 0);
        assert!(check_i0(&pair, &ibar));
        let i = c_v_inverse(&pair, &ibar).unwrap();
        assert_eq!(i.matrix(), &DMatrix::zeros(3, 3));
        assert_eq!(c_v(&pair, &i).unwrap().shape(), (0, 0));
    }

    #[test]
    fn non_complement_rejected() {
        let g = LieAlgebra::abelian(2);
        let h = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let v = DMatrix::from_column_slice(2, 1, &[2.0, 0.0]);
        assert!(matches!(
            HomogeneousPair::new(g, h, v, vec![]),
            Err(Error::InvalidPair(_))
        ));
    }

    #[test]
    fn non_subalgebra_h_fails_validation() {
        let pair = HomogeneousPair::coordinate_split(LieAlgebra::su2(), 2, vec![]).unwrap();
        assert!(!pair.validate().pass);
    }
}
