//! Matrix-valued polynomials in several variables.
//!
//! A [`PolyMatrix`] is a finite sum `sum_alpha A_alpha x^alpha` with complex
//! matrix coefficients. Evaluation, directional derivatives and products are
//! exact (no truncation); evaluation at complex arguments is the holomorphic
//! extension of a real polynomial.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};

/// Exponent vector `alpha`; ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut m = Self::zero(nvars);
        m.0[i] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All multi-indices in `nvars` variables with total degree at most `max_degree`,
    /// in lexicographic order.
    pub fn all_up_to(nvars: usize, max_degree: u32) -> Vec<MultiIndex> {
        fn rec(prefix: &mut Vec<u32>, nvars: usize, budget: u32, out: &mut Vec<MultiIndex>) {
            if prefix.len() == nvars {
                out.push(MultiIndex(prefix.clone()));
                return;
            }
            for e in 0..=budget {
                prefix.push(e);
                rec(prefix, nvars, budget - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::with_capacity(nvars), nvars, max_degree, &mut out);
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Table of powers `z_i^k` for `k <= max_degree`.
struct Powers(Vec<Vec<C64>>);

impl Powers {
    fn new(z: &[C64], max_degree: u32) -> Self {
        Powers(
            z.iter()
                .map(|&zi| {
                    let mut p = Vec::with_capacity(max_degree as usize + 1);
                    let mut acc = C64::new(1.0, 0.0);
                    for _ in 0..=max_degree {
                        p.push(acc);
                        acc *= zi;
                    }
                    p
                })
                .collect(),
        )
    }

    fn monomial(&self, alpha: &MultiIndex) -> C64 {
        alpha
            .0
            .iter()
            .enumerate()
            .fold(C64::new(1.0, 0.0), |acc, (i, &e)| {
                acc * self.0[i][e as usize]
            })
    }

    /// Directional derivative of `z^alpha` along `w`.
    fn monomial_derivative(&self, alpha: &MultiIndex, w: &[C64]) -> C64 {
        let mut total = C64::new(0.0, 0.0);
        for (i, &ei) in alpha.0.iter().enumerate() {
            if ei == 0 || w[i] == C64::new(0.0, 0.0) {
                continue;
            }
            let mut term = w[i] * ei as f64;
            for (j, &ej) in alpha.0.iter().enumerate() {
                let e = if j == i { ej - 1 } else { ej };
                term *= self.0[j][e as usize];
            }
            total += term;
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    nvars: usize,
    rows: usize,
    cols: usize,
    terms: BTreeMap<MultiIndex, CMatrix>,
}

impl PolyMatrix {
    pub fn zero(nvars: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            nvars,
            rows,
            cols,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, m: CMatrix) -> Self {
        let mut p = Self::zero(nvars, m.nrows(), m.ncols());
        p.add_term(MultiIndex::zero(nvars), m)
            .expect("shape matches by construction");
        p
    }

    /// The scalar polynomial `x_i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars, 1, 1);
        p.terms.insert(
            MultiIndex::unit(nvars, i),
            CMatrix::from_element(1, 1, C64::new(1.0, 0.0)),
        );
        p
    }

    pub fn from_terms(
        nvars: usize,
        rows: usize,
        cols: usize,
        terms: impl IntoIterator<Item = (MultiIndex, CMatrix)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars, rows, cols);
        for (alpha, m) in terms {
            p.add_term(alpha, m)?;
        }
        Ok(p)
    }

    /// Adds `m x^alpha` to the polynomial.
    pub fn add_term(&mut self, alpha: MultiIndex, m: CMatrix) -> Result<()> {
        if alpha.nvars() != self.nvars {
            return Err(Error::Shape(format!(
                "multi-index in {} variables for a polynomial in {}",
                alpha.nvars(),
                self.nvars
            )));
        }
        if m.shape() != (self.rows, self.cols) {
            return Err(Error::Shape(format!(
                "coefficient of shape {:?}, expected {:?}",
                m.shape(),
                (self.rows, self.cols)
            )));
        }
        match self.terms.get_mut(&alpha) {
            Some(existing) => *existing += m,
            None => {
                self.terms.insert(alpha, m);
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &CMatrix)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Largest absolute imaginary part over all coefficients.
    pub fn max_imag(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|m| m.iter())
            .fold(0.0_f64, |acc, z| acc.max(z.im.abs()))
    }

    fn check_point(&self, z: &[C64]) -> Result<()> {
        if z.len() != self.nvars {
            return Err(Error::Shape(format!(
                "point of dimension {} for a polynomial in {} variables",
                z.len(),
                self.nvars
            )));
        }
        Ok(())
    }

    pub fn eval(&self, z: &[C64]) -> Result<CMatrix> {
        self.check_point(z)?;
        let powers = Powers::new(z, self.degree());
        let mut out = CMatrix::zeros(self.rows, self.cols);
        for (alpha, m) in &self.terms {
            out += m * powers.monomial(alpha);
        }
        Ok(out)
    }

    /// `d/dt P(z + t w)` at `t = 0`.
    pub fn directional_derivative(&self, z: &[C64], w: &[C64]) -> Result<CMatrix> {
        self.check_point(z)?;
        self.check_point(w)?;
        let powers = Powers::new(z, self.degree());
        let mut out = CMatrix::zeros(self.rows, self.cols);
        for (alpha, m) in &self.terms {
            let d = powers.monomial_derivative(alpha, w);
            if d != C64::new(0.0, 0.0) {
                out += m * d;
            }
        }
        Ok(out)
    }

    /// Exact partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> PolyMatrix {
        let mut out = Self::zero(self.nvars, self.rows, self.cols);
        for (alpha, m) in &self.terms {
            let e = alpha.0[i];
            if e == 0 {
                continue;
            }
            let mut beta = alpha.clone();
            beta.0[i] -= 1;
            out.add_term(beta, m * C64::new(e as f64, 0.0))
                .expect("shape preserved");
        }
        out
    }

    pub fn scale(&self, s: C64) -> PolyMatrix {
        PolyMatrix {
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            terms: self.terms.iter().map(|(a, m)| (a.clone(), m * s)).collect(),
        }
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if other.nvars != self.nvars || other.shape() != self.shape() {
            return Err(Error::Shape(
                "adding polynomials of different shapes".into(),
            ));
        }
        let mut out = self.clone();
        for (alpha, m) in &other.terms {
            out.add_term(alpha.clone(), m.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Pointwise matrix product `(self * other)(x) = self(x) other(x)`.
    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if other.nvars != self.nvars || self.cols != other.rows {
            return Err(Error::Shape(format!(
                "product of {:?} and {:?} polynomial matrices",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = Self::zero(self.nvars, self.rows, other.cols);
        for (a, ma) in &self.terms {
            for (b, mb) in &other.terms {
                out.add_term(a.add(b), ma * mb)?;
            }
        }
        Ok(out)
    }

    /// `m * P(x)` for a constant matrix `m`.
    pub fn left_mul_const(&self, m: &CMatrix) -> Result<PolyMatrix> {
        if m.ncols() != self.rows {
            return Err(Error::Shape("constant factor does not match rows".into()));
        }
        let mut out = Self::zero(self.nvars, m.nrows(), self.cols);
        for (alpha, c) in &self.terms {
            out.add_term(alpha.clone(), m * c)?;
        }
        Ok(out)
    }

    pub fn right_mul_const(&self, m: &CMatrix) -> Result<PolyMatrix> {
        if m.nrows() != self.cols {
            return Err(Error::Shape(
                "constant factor does not match columns".into(),
            ));
        }
        let mut out = Self::zero(self.nvars, self.rows, m.ncols());
        for (alpha, c) in &self.terms {
            out.add_term(alpha.clone(), c * m)?;
        }
        Ok(out)
    }

    /// Entry `(i, j)` as a scalar polynomial.
    pub fn entry(&self, i: usize, j: usize) -> PolyMatrix {
        let mut out = Self::zero(self.nvars, 1, 1);
        for (alpha, m) in &self.terms {
            out.terms
                .insert(alpha.clone(), CMatrix::from_element(1, 1, m[(i, j)]));
        }
        out
    }

    /// Sum over coefficients of `||A_alpha||_F * r^|alpha|`, an upper bound for
    /// `sup_{|x| <= r} ||P(x)||_F`.
    pub fn coefficient_bound(&self, radius: f64) -> f64 {
        self.terms
            .iter()
            .map(|(a, m)| m.norm() * radius.powi(a.degree() as i32))
            .sum()
    }

    /// Discards imaginary parts of all coefficients.
    pub fn real_part(&self) -> PolyMatrix {
        PolyMatrix {
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            terms: self
                .terms
                .iter()
                .map(|(a, m)| (a.clone(), m.map(|z| C64::new(z.re, 0.0))))
                .collect(),
        }
    }

    /// Drops coefficients whose entries are all exactly zero.
    pub fn prune(mut self) -> Self {
        self.terms
            .retain(|_, m| m.iter().any(|z| *z != C64::new(0.0, 0.0)));
        self
    }
}

/// Evaluates a column polynomial as a vector.
pub fn eval_vector(p: &PolyMatrix, z: &[C64]) -> Result<CVector> {
    let m = p.eval(z)?;
    Ok(m.column(0).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn scalar(v: f64) -> CMatrix {
        CMatrix::from_element(1, 1, c64(v, 0.0))
    }

    #[test]
    fn multi_indices_are_lexicographic_and_complete() {
        let all = MultiIndex::all_up_to(2, 2);
        assert_eq!(all.len(), 6);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(MultiIndex::all_up_to(3, 2).len(), 10);
    }

    #[test]
    fn eval_and_derivative_of_scalar_polynomial() {
        // p(x, y) = 3 x^2 y + 2
        let p = PolyMatrix::from_terms(
            2,
            1,
            1,
            [
                (MultiIndex(vec![2, 1]), scalar(3.0)),
                (MultiIndex(vec![0, 0]), scalar(2.0)),
            ],
        )
        .unwrap();
        let z = [c64(2.0, 0.0), c64(-1.0, 0.0)];
        assert_eq!(p.eval(&z).unwrap()[(0, 0)], c64(-10.0, 0.0));
        // grad = (6 x y, 3 x^2) = (-12, 12); along (1, 1) -> 0
        let w = [c64(1.0, 0.0), c64(1.0, 0.0)];
        assert_eq!(
            p.directional_derivative(&z, &w).unwrap()[(0, 0)],
            c64(0.0, 0.0)
        );
        assert_eq!(p.partial(0).eval(&z).unwrap()[(0, 0)], c64(-12.0, 0.0));
    }

    #[test]
    fn derivative_at_origin_handles_zero_powers() {
        let p = PolyMatrix::coordinate(2, 1);
        let z = [c64(0.0, 0.0), c64(0.0, 0.0)];
        let w = [c64(0.0, 0.0), c64(5.0, 0.0)];
        assert_eq!(
            p.directional_derivative(&z, &w).unwrap()[(0, 0)],
            c64(5.0, 0.0)
        );
    }

    #[test]
    fn product_matches_pointwise_product() {
        let x = PolyMatrix::coordinate(2, 0);
        let y = PolyMatrix::coordinate(2, 1);
        let xy = x.mul(&y).unwrap();
        let z = [c64(0.5, 1.0), c64(-2.0, 0.25)];
        let expected = z[0] * z[1];
        assert!((xy.eval(&z).unwrap()[(0, 0)] - expected).norm() < 1e-15);
        assert_eq!(xy.degree(), 2);
    }

    #[test]
    fn shape_errors() {
        let p = PolyMatrix::zero(2, 2, 2);
        assert!(p.eval(&[c64(0.0, 0.0)]).is_err());
        assert!(p.mul(&PolyMatrix::zero(2, 3, 1)).is_err());
        let mut q = PolyMatrix::zero(2, 1, 1);
        assert!(q.add_term(MultiIndex(vec![1]), scalar(1.0)).is_err());
    }
}
