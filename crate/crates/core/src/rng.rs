//! Seeded randomness. Every random draw in the crate comes from a ChaCha
//! stream keyed by a 64-bit seed and a stream index, so results do not depend
//! on evaluation order across fixtures.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, C64};

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn normal_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| normal(rng))
}

pub fn complex_normal_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(normal(rng), normal(rng)))
}

/// Haar-like random orthogonal matrix from the QR factor of a Gaussian matrix.
pub fn orthogonal(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    normal_matrix(rng, n, n).qr().q()
}

/// Random unitary matrix from the QR factor of a complex Gaussian matrix.
pub fn unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    complex_normal_matrix(rng, n, n).qr().q()
}

/// Uniform point in the closed unit ball of `R^dim`, scaled to `radius`.
pub fn ball_point(rng: &mut impl Rng, dim: usize, radius: f64) -> Vec<f64> {
    let dir: Vec<f64> = (0..dim).map(|_| normal(rng)).collect();
    let norm = dir
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let u: f64 = rng.random();
    let r = radius * u.powf(1.0 / dim as f64);
    dir.into_iter().map(|x| x / norm * r).collect()
}
