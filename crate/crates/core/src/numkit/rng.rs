use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numkit::matrix::Matrix;

/// Seeded ChaCha8 stream. The same seed yields the same samples on every
/// platform; one stream per thread of work.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream, e.g. for one scenario or restart.
    pub fn fork(&mut self) -> Self {
        Self::new(self.inner.gen())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.gen()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.inner.gen_range(lo..hi)
    }

    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    pub fn normal_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }

    /// Uniform point on the unit sphere in `R^n`.
    pub fn unit_vec(&mut self, n: usize) -> Vec<f64> {
        loop {
            let v = self.normal_vec(n);
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r > 1e-8 {
                return v.into_iter().map(|x| x / r).collect();
            }
        }
    }

    /// Skew-symmetric matrix with entries uniform in `[-scale, scale]`.
    pub fn skew(&mut self, n: usize, scale: f64) -> Matrix<f64> {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let x = self.uniform(-scale, scale);
                m[(i, j)] = x;
                m[(j, i)] = -x;
            }
        }
        m
    }
}
