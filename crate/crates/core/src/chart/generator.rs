//! Test-instance generator for almost complex structures on a chart ball.
//!
//! Fields are built as `J_x = T(x) J0 T(x)^{-1}` with `T(x) = id - N(x)` and
//! `N(x) = Q_top M(x) Q_bot^T` for a random orthogonal `Q`. Because the column
//! blocks of `Q` are orthogonal, `N(x) N(y) = 0` for all `x, y`, so
//! `T^{-1} = id + N` exactly and `J` is a polynomial of degree `2d` with
//! `J^2 = -id` as a polynomial identity.
//!
//! With [`AcsKind::Integrable`], `M(x) = Dg(Q_bot^T x)` for a random polynomial
//! `g`, which makes `id + N` the Jacobian of the diffeomorphism
//! `x -> x + Q_top g(Q_bot^T x)`; the generated `J` is the pullback of `J0`
//! and therefore torsion free. [`AcsKind::Generic`] draws `M` freely and
//! produces torsion for `n >= 4` and `d >= 1`.

use nalgebra::DMatrix;
use rand::Rng;

use crate::chart::field::{standard_structure, OperatorField};
use crate::chart::sampler::ChartSampler;
use crate::error::{Error, Result};
use crate::linalg::{complexify, CMatrix, C64};
use crate::poly::{MultiIndex, PolyMatrix};
use crate::rng::{normal, orthogonal, stream};

/// Residual bound certified on samples for every generated field.
pub const CERTIFIED_RESIDUAL: f64 = 1e-8;

/// Upper bound on `sup ||N(x)||` over the chart.
pub const MAX_MAGNITUDE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcsKind {
    Generic,
    Integrable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcsGenerator {
    pub n: usize,
    pub degree: u32,
    pub eps: f64,
    pub seed: u64,
    pub radius: f64,
    pub kind: AcsKind,
    pub certify_samples: usize,
}

impl AcsGenerator {
    pub fn new(n: usize, degree: u32, eps: f64, seed: u64) -> Self {
        AcsGenerator {
            n,
            degree,
            eps,
            seed,
            radius: 1.0,
            kind: AcsKind::Generic,
            certify_samples: 32,
        }
    }

    pub fn kind(mut self, kind: AcsKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn generate(&self) -> Result<OperatorField> {
        let n = self.n;
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "dimension must be even and positive, got {n}"
            )));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "magnitude must be non-negative, got {}",
                self.eps
            )));
        }
        if self.eps > MAX_MAGNITUDE {
            return Err(Error::Invertibility(format!(
                "eps = {} exceeds {MAX_MAGNITUDE}; id - N(x) is not certified invertible",
                self.eps
            )));
        }
        let mut rng = stream(self.seed, 0);
        let q = orthogonal(&mut rng, n);
        let half = n / 2;
        let q_top = complexify_rect(&q.columns(0, half).into_owned());
        let q_bot_t = complexify_rect(&q.columns(half, half).transpose());

        let m = match self.kind {
            AcsKind::Generic => random_matrix_poly(n, half, self.degree, &mut rng),
            AcsKind::Integrable => gradient_poly(n, half, self.degree, &q_bot_t, &mut rng)?,
        };
        let mut nfield = m.left_mul_const(&q_top)?.right_mul_const(&q_bot_t)?.prune();
        let bound = nfield.coefficient_bound(self.radius);
        if bound > 0.0 {
            nfield = nfield.scale(C64::new(self.eps / bound, 0.0));
        }

        let j0 = complexify(&standard_structure(n))?;
        // (id - N) J0 (id + N) = J0 + J0 N - N J0 - N J0 N
        let j0_n = nfield.left_mul_const(&j0)?;
        let n_j0 = nfield.right_mul_const(&j0)?;
        let n_j0_n = n_j0.mul(&nfield)?;
        let jpoly = PolyMatrix::constant(n, j0)
            .add(&j0_n)?
            .sub(&n_j0)?
            .sub(&n_j0_n)?
            .prune();
        let field = OperatorField::new(jpoly.real_part(), self.radius)?;
        self.certify(&field)?;
        Ok(field)
    }

    fn certify(&self, field: &OperatorField) -> Result<()> {
        let sampler = ChartSampler::new(
            self.n,
            self.radius,
            self.certify_samples,
            self.seed ^ 0x5eed,
        );
        let complex_radius = self.radius / (2.0 * std::f64::consts::E);
        let points = sampler
            .real_points()
            .into_iter()
            .chain(sampler.complex_points(complex_radius));
        for z in points {
            let residual = field.structure_residual(&z)?;
            if residual.is_nan() || residual > CERTIFIED_RESIDUAL {
                return Err(Error::InvalidStructure(format!(
                    "generated field has ||J^2 + id|| = {residual:.3e} at a sample"
                )));
            }
        }
        Ok(())
    }
}

/// Generic field with the default chart radius 1.
pub fn generate_acs(n: usize, seed: u64, degree: u32, eps: f64) -> Result<OperatorField> {
    AcsGenerator::new(n, degree, eps, seed).generate()
}

fn complexify_rect(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

fn random_matrix_poly(nvars: usize, size: usize, degree: u32, rng: &mut impl Rng) -> PolyMatrix {
    let mut m = PolyMatrix::zero(nvars, size, size);
    for alpha in MultiIndex::all_up_to(nvars, degree) {
        if alpha.degree() == 0 {
            continue;
        }
        let c = CMatrix::from_fn(size, size, |_, _| C64::new(normal(rng), 0.0));
        m.add_term(alpha, c).expect("shape");
    }
    m
}

/// Jacobian `Dg(y(x))` of a random polynomial `g: R^size -> R^size` with
/// monomials of degree `2..=degree+1`, composed with the linear map `y = L x`.
fn gradient_poly(
    nvars: usize,
    size: usize,
    degree: u32,
    l: &CMatrix,
    rng: &mut impl Rng,
) -> Result<PolyMatrix> {
    let ys: Vec<PolyMatrix> = (0..size)
        .map(|r| {
            let mut p = PolyMatrix::zero(nvars, 1, 1);
            for i in 0..nvars {
                p.add_term(
                    MultiIndex::unit(nvars, i),
                    CMatrix::from_element(1, 1, l[(r, i)]),
                )
                .expect("shape");
            }
            p
        })
        .collect();
    let one = PolyMatrix::constant(nvars, CMatrix::from_element(1, 1, C64::new(1.0, 0.0)));
    let monomial = |gamma: &MultiIndex| -> Result<PolyMatrix> {
        let mut acc = one.clone();
        for (k, &e) in gamma.0.iter().enumerate() {
            for _ in 0..e {
                acc = acc.mul(&ys[k])?;
            }
        }
        Ok(acc)
    };

    let mut jac = PolyMatrix::zero(nvars, size, size);
    for beta in MultiIndex::all_up_to(size, degree + 1) {
        if beta.degree() < 2 {
            continue;
        }
        for i in 0..size {
            let coeff = normal(rng);
            for k in 0..size {
                let e = beta.0[k];
                if e == 0 {
                    continue;
                }
                let mut gamma = beta.clone();
                gamma.0[k] -= 1;
                let mono = monomial(&gamma)?;
                let mut unit = CMatrix::zeros(size, size);
                unit[(i, k)] = C64::new(coeff * e as f64, 0.0);
                for (alpha, c) in mono.terms() {
                    jac.add_term(alpha.clone(), &unit * c[(0, 0)])?;
                }
            }
        }
    }
    Ok(jac)
}
