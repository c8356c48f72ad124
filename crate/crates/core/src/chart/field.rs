//! Operator fields `x -> J_x` and vector fields on a chart ball, both stored
//! as exact polynomials.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{identity, CMatrix, CVector, C64};
use crate::poly::{eval_vector, MultiIndex, PolyMatrix};
use crate::rng::normal;

/// Default absolute tolerance on `||J_x^2 + id||_F`.
pub const STRUCTURE_TOL: f64 = 1e-8;

pub fn to_complex(x: &[f64]) -> Vec<C64> {
    x.iter().map(|&v| C64::new(v, 0.0)).collect()
}

pub fn vector_to_slice(v: &CVector) -> Vec<C64> {
    v.iter().copied().collect()
}

/// The block rotation `J0` with `J0 e_{2k} = e_{2k+1}` on `R^n`.
pub fn standard_structure(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(n, n);
    for k in 0..n / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

/// Polynomial map from the chart ball `B(0, r)` of `R^n` into `n x n` real matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorField {
    poly: PolyMatrix,
    radius: f64,
    tol: f64,
}

impl OperatorField {
    pub fn new(poly: PolyMatrix, radius: f64) -> Result<Self> {
        let (rows, cols) = poly.shape();
        if rows != cols || rows != poly.nvars() {
            return Err(Error::Shape(format!(
                "operator field must be n x n in n variables, got {rows}x{cols} in {}",
                poly.nvars()
            )));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "chart radius must be positive, got {radius}"
            )));
        }
        if poly.max_imag() != 0.0 {
            return Err(Error::InvalidInput(
                "operator field coefficients must be real".into(),
            ));
        }
        Ok(OperatorField {
            poly,
            radius,
            tol: STRUCTURE_TOL,
        })
    }

    pub fn constant(m: &DMatrix<f64>, radius: f64) -> Result<Self> {
        let n = m.nrows();
        Self::new(PolyMatrix::constant(n, m.map(|x| C64::new(x, 0.0))), radius)
    }

    pub fn standard(n: usize, radius: f64) -> Result<Self> {
        Self::constant(&standard_structure(n), radius)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.poly.nvars()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    pub fn poly(&self) -> &PolyMatrix {
        &self.poly
    }

    pub fn eval(&self, z: &[C64]) -> Result<CMatrix> {
        self.poly.eval(z)
    }

    /// `||J_z^2 + id||_F`.
    pub fn structure_residual(&self, z: &[C64]) -> Result<f64> {
        let j = self.eval(z)?;
        Ok((&j * &j + identity(self.dim())).norm())
    }

    /// Returns `J_z` after checking `J_z^2 = -id` at the field tolerance.
    pub fn validated_at(&self, z: &[C64]) -> Result<CMatrix> {
        let j = self.eval(z)?;
        let residual = (&j * &j + identity(self.dim())).norm();
        if residual.is_nan() || residual > self.tol * j.norm_squared().max(1.0) {
            return Err(Error::InvalidStructure(format!(
                "||J^2 + id|| = {residual:.3e} exceeds {:.1e}",
                self.tol
            )));
        }
        Ok(j)
    }

    /// The bilinear derivative `J'_z(u, w) = (d/dt J_{z + t w})|_0 u`: the first
    /// slot is the vector acted on, the second the direction of differentiation.
    pub fn differential(&self, z: &[C64], u: &CVector, w: &CVector) -> Result<CVector> {
        let dj = self.poly.directional_derivative(z, &vector_to_slice(w))?;
        Ok(dj * u)
    }

    /// The product field `x -> J_x a_x`.
    pub fn apply(&self, a: &VectorField) -> Result<VectorField> {
        VectorField::new(self.poly.mul(a.poly())?)
    }

    pub fn to_text(&self) -> String {
        let n = self.dim();
        let mut out = String::new();
        let _ = writeln!(out, "# operator field");
        let _ = writeln!(out, "n {n}");
        let _ = writeln!(out, "r {:.16e}", self.radius);
        let _ = writeln!(out, "d {}", self.degree());
        for (alpha, m) in self.poly.terms() {
            let _ = write!(out, "coef {alpha} :");
            for i in 0..n {
                for j in 0..n {
                    let _ = write!(out, " {:.16e}", m[(i, j)].re);
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut radius: Option<f64> = None;
        let mut degree: Option<u32> = None;
        let mut terms: Vec<(usize, MultiIndex, CMatrix)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match key {
                "n" => n = Some(parse_num(rest.trim(), line_no)?),
                "r" => radius = Some(parse_num(rest.trim(), line_no)?),
                "d" => degree = Some(parse_num(rest.trim(), line_no)?),
                "coef" => {
                    let n = n.ok_or_else(|| Error::parse(line_no, "coef before n"))?;
                    let (idx_part, vals) = rest
                        .split_once(':')
                        .ok_or_else(|| Error::parse(line_no, "missing ':' in coef line"))?;
                    let alpha = idx_part
                        .split_whitespace()
                        .map(|t| parse_num::<u32>(t, line_no))
                        .collect::<Result<Vec<_>>>()?;
                    if alpha.len() != n {
                        return Err(Error::parse(
                            line_no,
                            format!("multi-index needs {n} entries"),
                        ));
                    }
                    let vals = vals
                        .split_whitespace()
                        .map(|t| parse_num::<f64>(t, line_no))
                        .collect::<Result<Vec<_>>>()?;
                    if vals.len() != n * n {
                        return Err(Error::parse(
                            line_no,
                            format!("expected {} coefficients", n * n),
                        ));
                    }
                    let m = CMatrix::from_row_iterator(
                        n,
                        n,
                        vals.into_iter().map(|v| C64::new(v, 0.0)),
                    );
                    terms.push((line_no, MultiIndex(alpha), m));
                }
                other => return Err(Error::parse(line_no, format!("unknown key '{other}'"))),
            }
        }
        let n = n.ok_or_else(|| Error::parse(0, "missing n"))?;
        let radius = radius.ok_or_else(|| Error::parse(0, "missing r"))?;
        let degree = degree.ok_or_else(|| Error::parse(0, "missing d"))?;
        let mut poly = PolyMatrix::zero(n, n, n);
        for (line_no, alpha, m) in terms {
            if alpha.degree() > degree {
                return Err(Error::parse(
                    line_no,
                    format!("term of degree {} exceeds d = {degree}", alpha.degree()),
                ));
            }
            poly.add_term(alpha, m)
                .map_err(|e| Error::parse(line_no, e.to_string()))?;
        }
        OperatorField::new(poly, radius)
    }
}

pub(crate) fn parse_num<T: std::str::FromStr>(token: &str, line: usize) -> Result<T> {
    token
        .parse::<T>()
        .map_err(|_| Error::parse(line, format!("cannot parse '{token}'")))
}

/// Polynomial vector field `x -> a_x`; coefficients may be complex (holomorphic sections).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    poly: PolyMatrix,
}

impl VectorField {
    pub fn new(poly: PolyMatrix) -> Result<Self> {
        if poly.shape().1 != 1 {
            return Err(Error::Shape(
                "vector field must have a single column".into(),
            ));
        }
        Ok(VectorField { poly })
    }

    pub fn constant(v: &CVector) -> Self {
        VectorField {
            poly: PolyMatrix::constant(
                v.len(),
                CMatrix::from_column_slice(v.len(), 1, v.as_slice()),
            ),
        }
    }

    /// The position field `a_x = x`.
    pub fn position(n: usize) -> Self {
        let mut poly = PolyMatrix::zero(n, n, 1);
        for i in 0..n {
            let mut e = CMatrix::zeros(n, 1);
            e[(i, 0)] = C64::new(1.0, 0.0);
            poly.add_term(MultiIndex::unit(n, i), e).expect("shape");
        }
        VectorField { poly }
    }

    /// Real field with standard normal coefficients on every monomial of degree `<= degree`.
    pub fn random(n: usize, degree: u32, rng: &mut impl Rng) -> Self {
        let mut poly = PolyMatrix::zero(n, n, 1);
        for alpha in MultiIndex::all_up_to(n, degree) {
            let v = CMatrix::from_fn(n, 1, |_, _| C64::new(normal(rng), 0.0));
            poly.add_term(alpha, v).expect("shape");
        }
        VectorField { poly }
    }

    pub fn dim(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &PolyMatrix {
        &self.poly
    }

    pub fn eval(&self, z: &[C64]) -> Result<CVector> {
        eval_vector(&self.poly, z)
    }

    /// `a'_z w`.
    pub fn derivative(&self, z: &[C64], w: &CVector) -> Result<CVector> {
        let m = self.poly.directional_derivative(z, &vector_to_slice(w))?;
        Ok(m.column(0).into_owned())
    }

    pub fn scale(&self, s: C64) -> Self {
        VectorField {
            poly: self.poly.scale(s),
        }
    }

    pub fn add(&self, other: &VectorField) -> Result<Self> {
        VectorField::new(self.poly.add(&other.poly)?)
    }

    pub fn sub(&self, other: &VectorField) -> Result<Self> {
        VectorField::new(self.poly.sub(&other.poly)?)
    }
}
