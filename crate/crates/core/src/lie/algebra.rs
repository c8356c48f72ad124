//! Finite-dimensional real Lie algebras given by structure constants
//! `[e_i, e_j] = sum_k c^k_{ij} e_k`, optionally realized by matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};

/// Jacobi residual bound before scaling by `max(1, c_max^2)`.
pub const JACOBI_TOL: f64 = 1e-10;

/// Commutator reproduction bound for matrix realizations.
pub const REALIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    /// `ad[i][(k, j)] = c^k_{ij}`, so `ad[i] * y = [e_i, y]`.
    ad: Vec<DMatrix<f64>>,
    realization: Option<Vec<CMatrix>>,
}

impl LieAlgebra {
    /// Raw constants indexed `c[(i * m + j) * m + k] = c^k_{ij}`; no checks
    /// beyond the length. Use [`validate_algebra`] before trusting the result.
    pub fn from_constants(dim: usize, c: &[f64]) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::Shape(format!(
                "{} structure constants for dimension {dim}",
                c.len()
            )));
        }
        let ad = (0..dim)
            .map(|i| DMatrix::from_fn(dim, dim, |k, j| c[(i * dim + j) * dim + k]))
            .collect();
        Ok(LieAlgebra {
            dim,
            ad,
            realization: None,
        })
    }

    /// Builds the algebra from `(i, j, k, value)` entries. Each entry sets
    /// `c^k_{ij} = value` and `c^k_{ji} = -value`; contradictory entries are an
    /// error.
    pub fn from_triples(dim: usize, triples: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut c = vec![0.0; dim * dim * dim];
        let mut set = vec![false; dim * dim * dim];
        let idx = |i: usize, j: usize, k: usize| (i * dim + j) * dim + k;
        for &(i, j, k, v) in triples {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidAlgebra(format!(
                    "index ({i}, {j}, {k}) out of range"
                )));
            }
            if i == j && v != 0.0 {
                return Err(Error::InvalidAlgebra(format!(
                    "c^{k}_{{{i}{i}}} = {v} is not zero"
                )));
            }
            for (a, b, val) in [(i, j, v), (j, i, -v)] {
                let p = idx(a, b, k);
                if set[p] && c[p] != val {
                    return Err(Error::InvalidAlgebra(format!(
                        "conflicting entries for c^{k}_{{{a}{b}}}"
                    )));
                }
                c[p] = val;
                set[p] = true;
            }
        }
        Self::from_constants(dim, &c)
    }

    /// Constants from a bracket on basis vectors. Only `i < j` is evaluated;
    /// the rest is filled in by antisymmetry.
    pub fn from_bracket_fn(dim: usize, mut f: impl FnMut(usize, usize) -> DVector<f64>) -> Self {
        let mut ad = vec![DMatrix::zeros(dim, dim); dim];
        for i in 0..dim {
            for j in (i + 1)..dim {
                let b = f(i, j);
                for k in 0..dim {
                    ad[i][(k, j)] = b[k];
                    ad[j][(k, i)] = -b[k];
                }
            }
        }
        LieAlgebra {
            dim,
            ad,
            realization: None,
        }
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_bracket_fn(dim, |_, _| DVector::zeros(dim))
    }

    /// `[e1, e2] = e3` and cyclic.
    pub fn su2() -> Self {
        Self::from_triples(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)])
            .expect("valid constants")
    }

    /// Three-dimensional Heisenberg algebra, `[e1, e2] = e3`.
    pub fn heisenberg() -> Self {
        Self::from_triples(3, &[(0, 1, 2, 1.0)]).expect("valid constants")
    }

    /// Direct sum; the basis of `other` follows the basis of `self`.
    pub fn direct_sum(&self, other: &LieAlgebra) -> Self {
        let (m1, m2) = (self.dim, other.dim);
        let m = m1 + m2;
        let ad = (0..m)
            .map(|i| {
                let mut a = DMatrix::zeros(m, m);
                if i < m1 {
                    a.view_mut((0, 0), (m1, m1)).copy_from(&self.ad[i]);
                } else {
                    a.view_mut((m1, m1), (m2, m2)).copy_from(&other.ad[i - m1]);
                }
                a
            })
            .collect();
        let realization = match (&self.realization, &other.realization) {
            (Some(a), Some(b)) => {
                let (n1, n2) = (
                    a.first().map_or(0, |x| x.nrows()),
                    b.first().map_or(0, |x| x.nrows()),
                );
                let embed = |x: &CMatrix, off: usize| {
                    let mut z = CMatrix::zeros(n1 + n2, n1 + n2);
                    z.view_mut((off, off), (x.nrows(), x.ncols())).copy_from(x);
                    z
                };
                Some(
                    a.iter()
                        .map(|x| embed(x, 0))
                        .chain(b.iter().map(|x| embed(x, n1)))
                        .collect(),
                )
            }
            _ => None,
        };
        LieAlgebra {
            dim: m,
            ad,
            realization,
        }
    }

    /// Real Lie algebra spanned by complex matrices under the commutator.
    /// The matrices must be linearly independent over the reals and their
    /// commutators must stay in the real span.
    pub fn from_matrix_basis(basis: Vec<CMatrix>) -> Result<Self> {
        let m = basis.len();
        let coords = RealCoordinates::new(&basis)?;
        let mut worst: f64 = 0.0;
        let mut worst_pair = (0, 0);
        let g = Self::from_bracket_fn(m, |i, j| {
            let comm = &basis[i] * &basis[j] - &basis[j] * &basis[i];
            let (x, res) = coords.solve(&comm);
            if res > worst {
                worst = res;
                worst_pair = (i, j);
            }
            x
        });
        let scale = basis.iter().map(|x| x.norm_squared()).fold(1.0, f64::max);
        if worst > REALIZATION_TOL * scale {
            return Err(Error::InvalidAlgebra(format!(
                "commutator of basis matrices {} and {} leaves the span (residual {worst:.3e})",
                worst_pair.0, worst_pair.1
            )));
        }
        Ok(LieAlgebra {
            realization: Some(basis),
            ..g
        })
    }

    pub fn with_realization(mut self, basis: Vec<CMatrix>) -> Result<Self> {
        if basis.len() != self.dim {
            return Err(Error::Shape(format!(
                "{} realization matrices for dimension {}",
                basis.len(),
                self.dim
            )));
        }
        self.realization = Some(basis);
        Ok(self)
    }

    /// The algebra in the basis given by the columns of `p`:
    /// `[x, y]' = P^{-1} [P x, P y]`. A realization is carried along.
    pub fn transport(&self, p: &DMatrix<f64>) -> Result<Self> {
        let m = self.dim;
        if p.shape() != (m, m) {
            return Err(Error::Shape(format!(
                "basis change of shape {:?} for dimension {m}",
                p.shape()
            )));
        }
        let pinv = p
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("basis change is singular".into()))?;
        let cols: Vec<DVector<f64>> = (0..m).map(|i| p.column(i).into_owned()).collect();
        let mut g = Self::from_bracket_fn(m, |i, j| &pinv * self.bracket(&cols[i], &cols[j]));
        g.realization = self.realization.as_ref().map(|xs| {
            (0..m)
                .map(|i| {
                    xs.iter().enumerate().fold(
                        CMatrix::zeros(xs[0].nrows(), xs[0].ncols()),
                        |acc, (k, x)| acc + x * C64::new(p[(k, i)], 0.0),
                    )
                })
                .collect()
        });
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.ad[i][(k, j)]
    }

    pub fn realization(&self) -> Option<&[CMatrix]> {
        self.realization.as_deref()
    }

    pub fn ad_basis(&self, i: usize) -> &DMatrix<f64> {
        &self.ad[i]
    }

    /// `ad_x` as an `m x m` matrix.
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.ad
            .iter()
            .zip(x.iter())
            .fold(DMatrix::zeros(self.dim, self.dim), |acc, (a, &xi)| {
                acc + a * xi
            })
    }

    /// `ad_x` of the complexified algebra.
    pub fn ad_c(&self, x: &CVector) -> CMatrix {
        self.ad
            .iter()
            .zip(x.iter())
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, (a, &xi)| {
                acc + a.map(|v| C64::new(v, 0.0)) * xi
            })
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.ad(x) * y
    }

    /// Complex-bilinear extension of the bracket to `g_C`.
    pub fn bracket_c(&self, x: &CVector, y: &CVector) -> CVector {
        self.ad_c(x) * y
    }

    /// `exp(ad_x)`, an inner automorphism.
    pub fn exp_ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.ad(x).exp()
    }

    pub fn max_constant(&self) -> f64 {
        self.ad.iter().map(|a| a.amax()).fold(0.0, f64::max)
    }

    /// Reference size of brackets of unit vectors: `max(1, max_i ||ad_{e_i}||)`.
    pub fn scale(&self) -> f64 {
        self.ad.iter().map(|a| a.norm()).fold(1.0, f64::max)
    }

    /// `max_{i,j} ||A [e_i, e_j] - [A e_i, A e_j]||`.
    pub fn automorphism_residual(&self, a: &DMatrix<f64>) -> f64 {
        (0..self.dim)
            .map(|i| {
                let lhs = a * &self.ad[i];
                let rhs = self.ad(&a.column(i).into_owned()) * a;
                (lhs - rhs).amax()
            })
            .fold(0.0, f64::max)
    }

    /// Real coordinates of a matrix in the realization basis.
    pub fn coordinates(&self, x: &CMatrix) -> Result<DVector<f64>> {
        let basis = self
            .realization
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("algebra has no matrix realization".into()))?;
        let coords = RealCoordinates::new(basis)?;
        let (c, res) = coords.solve(x);
        if res > REALIZATION_TOL * x.norm().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "matrix is not in the algebra (residual {res:.3e})"
            )));
        }
        Ok(c)
    }

    /// Matrix of `X -> U X U^{-1}` in the realization basis.
    pub fn conjugation_action(&self, u: &CMatrix) -> Result<DMatrix<f64>> {
        let basis = self
            .realization
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("algebra has no matrix realization".into()))?;
        let uinv = u
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("conjugating matrix is singular".into()))?;
        let coords = RealCoordinates::new(basis)?;
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (j, x) in basis.iter().enumerate() {
            let y = u * x * &uinv;
            let (c, res) = coords.solve(&y);
            if res > REALIZATION_TOL * y.norm().max(1.0) {
                return Err(Error::InvalidInput(format!(
                    "conjugation leaves the algebra (residual {res:.3e})"
                )));
            }
            out.set_column(j, &c);
        }
        Ok(out)
    }
}

/// Least-squares coordinates of complex matrices in a real-linear span.
struct RealCoordinates {
    cols: DMatrix<f64>,
    gram_inv: DMatrix<f64>,
}

impl RealCoordinates {
    fn new(basis: &[CMatrix]) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Ok(RealCoordinates {
                cols: DMatrix::zeros(0, 0),
                gram_inv: DMatrix::zeros(0, 0),
            });
        };
        let shape = first.shape();
        if let Some(x) = basis.iter().find(|x| x.shape() != shape) {
            return Err(Error::Shape(format!(
                "matrix of shape {:?} among {shape:?}",
                x.shape()
            )));
        }
        let cols = DMatrix::from_columns(&basis.iter().map(realify).collect::<Vec<_>>());
        let gram = cols.transpose() * &cols;
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| Error::InvalidAlgebra("basis matrices are linearly dependent".into()))?;
        Ok(RealCoordinates { cols, gram_inv })
    }

    fn solve(&self, x: &CMatrix) -> (DVector<f64>, f64) {
        if self.cols.ncols() == 0 {
            return (DVector::zeros(0), x.norm());
        }
        let v = realify(x);
        let c = &self.gram_inv * (self.cols.transpose() * &v);
        let res = (&self.cols * &c - v).norm();
        (c, res)
    }
}

fn realify(x: &CMatrix) -> DVector<f64> {
    DVector::from_iterator(2 * x.len(), x.iter().flat_map(|z| [z.re, z.im]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraReport {
    /// `max |c^k_{ij} + c^k_{ji}|`, required to be exactly zero.
    pub antisymmetry_residual: f64,
    pub jacobi_residual: f64,
    pub jacobi_tolerance: f64,
    /// Index triple with the largest violation, if any check failed.
    pub failing_triple: Option<(usize, usize, usize)>,
    /// Worst commutator mismatch of the matrix realization.
    pub realization_residual: Option<f64>,
    pub pass: bool,
}

impl AlgebraReport {
    pub fn describe(&self) -> String {
        match (self.pass, self.failing_triple) {
            (true, _) => "algebra is valid".into(),
            (false, Some((i, j, k))) => format!(
                "triple ({i}, {j}, {k}) fails: antisymmetry {:.3e}, Jacobi {:.3e}",
                self.antisymmetry_residual, self.jacobi_residual
            ),
            (false, None) => format!(
                "matrix realization mismatch {:.3e}",
                self.realization_residual.unwrap_or(f64::NAN)
            ),
        }
    }
}

pub fn validate_algebra(g: &LieAlgebra) -> AlgebraReport {
    let m = g.dim;
    let mut anti = 0.0;
    let mut anti_triple = None;
    for i in 0..m {
        for j in i..m {
            for k in 0..m {
                let r = (g.constant(i, j, k) + g.constant(j, i, k)).abs();
                if r > anti {
                    anti = r;
                    anti_triple = Some((i, j, k));
                }
            }
        }
    }

    let cmax = g.max_constant();
    let jacobi_tolerance = JACOBI_TOL * cmax.powi(2).max(1.0);
    let mut jacobi: f64 = 0.0;
    let mut jacobi_triple = None;
    let basis: Vec<DVector<f64>> = (0..m)
        .map(|i| {
            let mut e = DVector::zeros(m);
            e[i] = 1.0;
            e
        })
        .collect();
    for i in 0..m {
        for j in (i + 1)..m {
            // [e_i, [e_j, e_k]] + [e_j, [e_k, e_i]] + [e_k, [e_i, e_j]] for all k at once.
            let eij = g.bracket(&basis[i], &basis[j]);
            let cyc = &g.ad[i] * &g.ad[j] - &g.ad[j] * &g.ad[i] - g.ad(&eij);
            for k in 0..m {
                let r = cyc.column(k).amax();
                if r > jacobi {
                    jacobi = r;
                    jacobi_triple = Some((i, j, k));
                }
            }
        }
    }

    let realization_residual = g.realization.as_ref().map(|xs| {
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                let comm = &xs[i] * &xs[j] - &xs[j] * &xs[i];
                let combo = (0..m).fold(CMatrix::zeros(comm.nrows(), comm.ncols()), |acc, k| {
                    acc + &xs[k] * C64::new(g.constant(i, j, k), 0.0)
                });
                worst = worst.max((comm - combo).norm());
            }
        }
        worst
    });
    let realization_scale = g.realization.as_ref().map_or(1.0, |xs| {
        xs.iter().map(|x| x.norm_squared()).fold(1.0, f64::max)
    });

    let anti_ok = anti == 0.0;
    let jacobi_ok = jacobi <= jacobi_tolerance;
    let realization_ok =
        realization_residual.is_none_or(|r| r <= REALIZATION_TOL * realization_scale);
    let failing_triple = if !anti_ok {
        anti_triple
    } else if !jacobi_ok {
        jacobi_triple
    } else {
        None
    };
    AlgebraReport {
        antisymmetry_residual: anti,
        jacobi_residual: jacobi,
        jacobi_tolerance,
        failing_triple,
        realization_residual,
        pass: anti_ok && jacobi_ok && realization_ok,
    }
}

impl LieAlgebra {
    /// `self` if [`validate_algebra`] passes, otherwise an `InvalidAlgebra` error.
    pub fn validated(self) -> Result<Self> {
        let report = validate_algebra(&self);
        if report.pass {
            Ok(self)
        } else {
            Err(Error::InvalidAlgebra(report.describe()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn e(m: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(m);
        v[i] = 1.0;
        v
    }

    #[test]
    fn standard_algebras_are_valid() {
        for g in [
            LieAlgebra::abelian(4),
            LieAlgebra::su2(),
            LieAlgebra::heisenberg(),
        ] {
            let report = validate_algebra(&g);
            assert!(report.pass, "{report:?}");
            assert_eq!(report.antisymmetry_residual, 0.0);
        }
        let su2 = LieAlgebra::su2();
        assert_eq!(su2.bracket(&e(3, 0), &e(3, 1)), e(3, 2));
        assert_eq!(su2.bracket(&e(3, 1), &e(3, 0)), -e(3, 2));
    }

    #[test]
    fn jacobi_failure_names_a_triple() {
        // [e1,e2] = e2, [e2,e3] = e1, [e1,e3] = 0 violates Jacobi.
        let g = LieAlgebra::from_triples(3, &[(0, 1, 1, 1.0), (1, 2, 0, 1.0)]).unwrap();
        let report = validate_algebra(&g);
        assert!(!report.pass);
        assert!(report.failing_triple.is_some());
        assert!(matches!(g.validated(), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn raw_constants_can_break_antisymmetry() {
        let mut c = vec![0.0; 8];
        c[2 + 1] = 1.0; // c^1_{01}
        let g = LieAlgebra::from_constants(2, &c).unwrap();
        let report = validate_algebra(&g);
        assert!(!report.pass);
        assert_eq!(report.antisymmetry_residual, 1.0);
    }

    #[test]
    fn conflicting_triples_rejected() {
        let r = LieAlgebra::from_triples(3, &[(0, 1, 2, 1.0), (1, 0, 2, 1.0)]);
        assert!(matches!(r, Err(Error::InvalidAlgebra(_))));
        assert!(LieAlgebra::from_triples(3, &[(0, 1, 2, 1.0), (1, 0, 2, -1.0)]).is_ok());
    }

    #[test]
    fn matrix_basis_of_su2() {
        // e_k = -i sigma_k / 2 satisfies [e1, e2] = e3 cyclically.
        let h = c64(0.5, 0.0);
        let s1 = CMatrix::from_row_slice(
            2,
            2,
            &[c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, -1.0), c64(0.0, 0.0)],
        ) * h;
        let s2 = CMatrix::from_row_slice(
            2,
            2,
            &[c64(0.0, 0.0), c64(-1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)],
        ) * h;
        let s3 = CMatrix::from_row_slice(
            2,
            2,
            &[c64(0.0, -1.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 1.0)],
        ) * h;
        let g = LieAlgebra::from_matrix_basis(vec![s1, s2, s3]).unwrap();
        let reference = LieAlgebra::su2();
        for i in 0..3 {
            assert!((g.ad_basis(i) - reference.ad_basis(i)).norm() < 1e-15);
        }
        assert!(validate_algebra(&g).pass);
    }

    #[test]
    fn non_closed_matrix_basis_rejected() {
        let x = CMatrix::from_row_slice(
            2,
            2,
            &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
        );
        let y = x.transpose();
        assert!(matches!(
            LieAlgebra::from_matrix_basis(vec![x, y]),
            Err(Error::InvalidAlgebra(_))
        ));
    }

    #[test]
    fn exp_ad_is_an_automorphism() {
        let g = LieAlgebra::su2();
        let a = g.exp_ad(&DVector::from_vec(vec![0.3, -0.2, 0.7]));
        assert!(g.automorphism_residual(&a) < 1e-14);
        assert!(g.automorphism_residual(&DMatrix::from_diagonal_element(3, 3, 2.0)) > 1.0);
    }

    #[test]
    fn transport_preserves_validity() {
        let g = LieAlgebra::su2().direct_sum(&LieAlgebra::heisenberg());
        let p = DMatrix::from_fn(6, 6, |i, j| {
            if i == j {
                2.0
            } else {
                0.1 * (i + 2 * j) as f64
            }
        });
        let t = g.transport(&p).unwrap();
        assert!(validate_algebra(&t).pass);
        let x = DVector::from_fn(6, |i, _| i as f64 - 2.5);
        let y = DVector::from_fn(6, |i, _| (i * i) as f64 * 0.1);
        let lhs = &p * t.bracket(&x, &y);
        let rhs = g.bracket(&(&p * &x), &(&p * &y));
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
