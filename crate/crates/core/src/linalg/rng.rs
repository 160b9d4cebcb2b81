//! Seeded Gaussian stream.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) keyed with
//! `seed_from_u64(seed)`; normals come from the ziggurat sampler of
//! `rand_distr::StandardNormal`. Matrices are filled in row-major order, one
//! draw per entry, so a seed fixes every sketch bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::DenseMatrix;

#[derive(Clone, Debug)]
pub struct RngState {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform draw in the open interval (0, 1).
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u: f64 = self.inner.random();
            if u > 0.0 {
                return u;
            }
        }
    }
}

/// `rows x cols` matrix of i.i.d. standard normal entries.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut RngState) -> DenseMatrix {
    let data = (0..rows * cols).map(|_| rng.normal()).collect();
    DenseMatrix::from_vec(rows, cols, data).expect("length matches shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_matrix() {
        let a = gaussian_matrix(3, 2, &mut RngState::new(42));
        let b = gaussian_matrix(3, 2, &mut RngState::new(42));
        assert_eq!(a.as_slice(), b.as_slice());
        let c = gaussian_matrix(3, 2, &mut RngState::new(43));
        assert_ne!(a.as_slice(), c.as_slice());
    }

    #[test]
    fn stream_advances() {
        let mut rng = RngState::new(7);
        let a = gaussian_matrix(4, 4, &mut rng);
        let b = gaussian_matrix(4, 4, &mut rng);
        assert_ne!(a.as_slice(), b.as_slice());
    }

    #[test]
    fn moments_of_large_sample() {
        for seed in [0u64, 1, 99] {
            let g = gaussian_matrix(1000, 1000, &mut RngState::new(seed));
            let n = g.as_slice().len() as f64;
            let mean = g.as_slice().iter().sum::<f64>() / n;
            let var = g.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            assert!(mean.abs() < 0.01, "mean {mean}");
            assert!((var - 1.0).abs() < 0.02, "var {var}");
        }
    }

    #[test]
    fn uniform_in_open_unit_interval() {
        let mut rng = RngState::new(5);
        for _ in 0..10_000 {
            let u = rng.uniform_open();
            assert!(u > 0.0 && u < 1.0);
        }
    }
}
