use crate::linalg::C64;
use crate::rng::{ball_point, stream};

/// Shrink applied to sampled radii so that every sample lies strictly inside the ball.
const INTERIOR: f64 = 1.0 - 1e-9;

/// Deterministic sampler of points in the chart ball `B(0, r)` of `R^n`
/// and of small complex points in `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSampler {
    pub n: usize,
    pub radius: f64,
    pub count: usize,
    pub seed: u64,
}

impl ChartSampler {
    pub fn new(n: usize, radius: f64, count: usize, seed: u64) -> Self {
        ChartSampler {
            n,
            radius,
            count,
            seed,
        }
    }

    /// `count` real points with `|x| < r`, as complex coordinates with zero imaginary part.
    pub fn real_points(&self) -> Vec<Vec<C64>> {
        let mut rng = stream(self.seed, 1);
        (0..self.count)
            .map(|_| {
                ball_point(&mut rng, self.n, self.radius * INTERIOR)
                    .into_iter()
                    .map(|x| C64::new(x, 0.0))
                    .collect()
            })
            .collect()
    }

    /// `count` complex points with `|z| < max_norm` (Hermitian norm on `C^n`).
    pub fn complex_points(&self, max_norm: f64) -> Vec<Vec<C64>> {
        let mut rng = stream(self.seed, 2);
        (0..self.count)
            .map(|_| {
                let p = ball_point(&mut rng, 2 * self.n, max_norm * INTERIOR);
                p.chunks(2).map(|c| C64::new(c[0], c[1])).collect()
            })
            .collect()
    }

    /// Independent stream for auxiliary draws (random fields, vectors).
    pub fn aux_rng(&self) -> crate::rng::StreamRng {
        stream(self.seed, 3)
    }
}
