//! Blocked randomized range finder that stops on the first small `R`
//! diagonal, which doubles as the numerical-rank estimate.
//!
//! Each block draws a fresh `n x k` Gaussian sketch `Ω_j`, forms
//! `Y_j = (I − QQᵀ) A Ω_j`, and factors `Y_j = P_j T_j`. Columns of `P_j` are
//! accepted until the first `|T_j(ℓ,ℓ)| ≤ ε`; at that point the loop ends.
//! Because the projected blocks reproduce the blocks of a single QR of
//! `A [Ω_1 … Ω_j]`, the diagonals behave like those of an unpivoted QR of the
//! full sketch and vanish past the rank.

use crate::error::{shape_err, Error, Result};
use crate::linalg::{gaussian_matrix, project_out, qr_thin, DenseMatrix, RngState};

pub const DEFAULT_BLOCK_SIZE: usize = 32;

/// How diagonal magnitudes are compared with `ε`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EpsilonMode {
    /// `|T(ℓ,ℓ)| ≤ ε`.
    #[default]
    Absolute,
    /// `|T(ℓ,ℓ)| / |T_1(1,1)| ≤ ε`, scale free.
    Relative,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisParams {
    pub epsilon: f64,
    pub block_size: usize,
    pub epsilon_mode: EpsilonMode,
}

impl Default for BasisParams {
    fn default() -> Self {
        Self {
            epsilon: 1e-10,
            block_size: DEFAULT_BLOCK_SIZE,
            epsilon_mode: EpsilonMode::Absolute,
        }
    }
}

impl BasisParams {
    pub fn new(epsilon: f64, block_size: usize) -> Self {
        Self {
            epsilon,
            block_size,
            ..Self::default()
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidParam(format!(
                "epsilon must be finite and nonnegative, got {}",
                self.epsilon
            )));
        }
        // k < n cannot hold for a single column; k = 1 is the only choice there.
        let max_block = if n == 1 { 1 } else { n - 1 };
        if self.block_size < 1 || self.block_size > max_block {
            return Err(Error::InvalidParam(format!(
                "block size must satisfy 1 <= k < n, got k = {} with n = {n}",
                self.block_size
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct BasisResult {
    /// `m x r̂` column-orthonormal basis.
    pub q: DenseMatrix,
    pub detected_rank: usize,
    /// `|T_j(ℓ,ℓ)|` for every computed block in generation order, including the
    /// rejected tail of the block that triggered the stop.
    pub diag_history: Vec<f64>,
    pub blocks_used: usize,
    /// Reference diagonal used in relative mode (`|T_1(1,1)|`).
    pub reference_diag: f64,
}

impl BasisResult {
    /// Total number of Gaussian sample columns drawn.
    pub fn samples_drawn(&self) -> usize {
        self.diag_history.len()
    }
}

/// Block widths `k, k, …, k, n − sk` with the trailing zero-width block skipped.
pub fn block_schedule(n: usize, k: usize) -> Vec<usize> {
    let s = n / k;
    let mut blocks = vec![k; s];
    if n - s * k > 0 {
        blocks.push(n - s * k);
    }
    blocks
}

pub fn basis_ext(a: &DenseMatrix, params: &BasisParams, rng: &mut RngState) -> Result<BasisResult> {
    let (m, n) = a.shape();
    if n == 0 || m < n {
        return shape_err(format!(
            "basis extraction needs rows >= cols >= 1, got {m}x{n}"
        ));
    }
    params.validate(n)?;

    let mut q = DenseMatrix::zeros(m, 0);
    let mut history = Vec::with_capacity(n);
    let mut blocks_used = 0;
    let mut reference = f64::NAN;

    for width in block_schedule(n, params.block_size) {
        blocks_used += 1;
        let omega = gaussian_matrix(n, width, rng);
        let y = project_out(&q, &a.matmul(&omega)?)?;
        let qr = qr_thin(&y)?;
        let diags: Vec<f64> = qr.r.diagonal().iter().map(|d| d.abs()).collect();
        if reference.is_nan() {
            reference = diags[0];
        }
        history.extend_from_slice(&diags);

        let stop = diags
            .iter()
            .position(|&d| below_threshold(d, params, reference));
        let accepted = stop.unwrap_or(width);
        if accepted > 0 {
            q = q.hcat(&orthonormal_against(&q, &qr.q.leading_columns(accepted))?)?;
        }
        if stop.is_some() {
            break;
        }
    }

    Ok(BasisResult {
        detected_rank: q.cols(),
        q,
        diag_history: history,
        blocks_used,
        reference_diag: reference,
    })
}

/// `P` re-orthogonalized against `Q`. A block factored from a nearly
/// deflated `Y_j` inherits rounding components along `Q` amplified by the
/// conditioning of `T_j`; one more projection and QR removes them.
fn orthonormal_against(q: &DenseMatrix, p: &DenseMatrix) -> Result<DenseMatrix> {
    if q.cols() == 0 {
        return Ok(p.clone());
    }
    Ok(qr_thin(&project_out(q, p)?)?.q)
}

fn below_threshold(d: f64, params: &BasisParams, reference: f64) -> bool {
    match params.epsilon_mode {
        EpsilonMode::Absolute => d <= params.epsilon,
        EpsilonMode::Relative => reference == 0.0 || d / reference <= params.epsilon,
    }
}

/// Count of leading entries above `epsilon`, stopping at the first that is not.
pub fn numerical_rank(diag_history: &[f64], epsilon: f64) -> usize {
    diag_history
        .iter()
        .position(|&d| d <= epsilon)
        .unwrap_or(diag_history.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::svd_reference;

    fn low_rank(m: usize, n: usize, r: usize, seed: u64) -> DenseMatrix {
        let mut rng = RngState::new(seed);
        let x = gaussian_matrix(m, r, &mut rng);
        let y = gaussian_matrix(n, r, &mut rng);
        x.matmul_tr(&y).unwrap()
    }

    #[test]
    fn schedule_skips_empty_tail() {
        assert_eq!(block_schedule(64, 32), vec![32, 32]);
        assert_eq!(block_schedule(70, 32), vec![32, 32, 6]);
        assert_eq!(block_schedule(5, 4), vec![4, 1]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let a = DenseMatrix::zeros(30, 20);
        let res = basis_ext(&a, &BasisParams::new(1e-12, 8), &mut RngState::new(0)).unwrap();
        assert_eq!(res.detected_rank, 0);
        assert_eq!(res.q.shape(), (30, 0));
        assert_eq!(res.blocks_used, 1);
        assert_eq!(res.diag_history, vec![0.0; 8]);
    }

    #[test]
    fn identity_is_full_rank_for_all_seeds() {
        let a = DenseMatrix::identity(50);
        for seed in 0..20 {
            let res = basis_ext(&a, &BasisParams::new(1e-8, 16), &mut RngState::new(seed)).unwrap();
            assert_eq!(res.detected_rank, 50, "seed {seed}");
            assert!(res.q.orthonormality_defect() <= 1e-10);
        }
    }

    #[test]
    fn exact_low_rank_detected() {
        let a = low_rank(80, 60, 17, 3);
        for seed in 0..10 {
            let res = basis_ext(&a, &BasisParams::new(1e-10, 8), &mut RngState::new(seed)).unwrap();
            assert_eq!(res.detected_rank, 17);
            assert_eq!(res.q.cols(), 17);
            // the stopping block holds the first rejected diagonal
            assert!(res.diag_history[17] <= 1e-10);
            assert!(res.diag_history[..17].iter().all(|&d| d > 1e-10));
            assert_eq!(numerical_rank(&res.diag_history, 1e-10), 17);
        }
    }

    #[test]
    fn bad_params_rejected() {
        let a = DenseMatrix::identity(10);
        let mut rng = RngState::new(0);
        assert!(matches!(
            basis_ext(&a, &BasisParams::new(1e-8, 10), &mut rng),
            Err(Error::InvalidParam(_))
        ));
        assert!(matches!(
            basis_ext(&a, &BasisParams::new(1e-8, 0), &mut rng),
            Err(Error::InvalidParam(_))
        ));
        assert!(matches!(
            basis_ext(&a, &BasisParams::new(-1.0, 4), &mut rng),
            Err(Error::InvalidParam(_))
        ));
        assert!(matches!(
            basis_ext(
                &DenseMatrix::zeros(3, 5),
                &BasisParams::new(1e-8, 2),
                &mut rng
            ),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn single_column_uses_unit_block() {
        let a = DenseMatrix::from_rows(&[[3.0], [4.0]]);
        let res = basis_ext(&a, &BasisParams::new(1e-12, 1), &mut RngState::new(1)).unwrap();
        assert_eq!(res.detected_rank, 1);
    }

    #[test]
    fn numerical_rank_examples() {
        assert_eq!(numerical_rank(&[5.0, 3.0, 1e-13], 1e-12), 2);
        assert_eq!(numerical_rank(&[], 1.0), 0);
        assert_eq!(numerical_rank(&[1.0, 1e-3, 2.0], 1e-2), 1);
        assert_eq!(numerical_rank(&[1.0, 2.0], 1e-2), 2);
    }

    #[test]
    fn relative_mode_is_scale_free() {
        let a = low_rank(60, 40, 9, 5);
        let big = a.scaled(1e6);
        let params = BasisParams {
            epsilon: 1e-10,
            block_size: 8,
            epsilon_mode: EpsilonMode::Relative,
        };
        let r1 = basis_ext(&a, &params, &mut RngState::new(2)).unwrap();
        let r2 = basis_ext(&big, &params, &mut RngState::new(2)).unwrap();
        assert_eq!(r1.detected_rank, 9);
        assert_eq!(r2.detected_rank, 9);
    }

    #[test]
    fn blockwise_basis_spans_full_sketch() {
        // Replaying the Gaussian stream gives the concatenated sketch Ω; at
        // every block boundary the basis must absorb A·[Ω_1 … Ω_j].
        let a = low_rank(70, 50, 30, 8);
        let params = BasisParams::new(1e-10, 7);
        let res = basis_ext(&a, &params, &mut RngState::new(4)).unwrap();
        let mut replay = RngState::new(4);
        let mut omega = DenseMatrix::zeros(50, 0);
        let mut kept = 0;
        for (j, width) in block_schedule(50, 7).into_iter().enumerate() {
            if j >= res.blocks_used {
                break;
            }
            omega = omega
                .hcat(&gaussian_matrix(50, width, &mut replay))
                .unwrap();
            kept = (kept + width).min(res.detected_rank);
            let q = res.q.leading_columns(kept);
            let sketch = a.matmul(&omega).unwrap();
            let resid = project_out(&q, &sketch).unwrap().frob_norm();
            assert!(resid <= 1e-9 * sketch.frob_norm(), "block {j}: {resid}");
        }
    }

    #[test]
    fn smaller_epsilon_never_lowers_rank_for_same_stream() {
        let a = DenseMatrix::from_fn(60, 60, |i, j| {
            if i == j {
                10f64.powf(-(i as f64) / 6.0)
            } else {
                0.0
            }
        });
        let eps = [1e-9, 1e-7, 1e-5, 1e-3, 1e-1];
        let ranks: Vec<usize> = eps
            .iter()
            .map(|&e| {
                basis_ext(&a, &BasisParams::new(e, 8), &mut RngState::new(77))
                    .unwrap()
                    .detected_rank
            })
            .collect();
        assert!(ranks.windows(2).all(|w| w[0] >= w[1]), "{ranks:?}");
    }

    #[test]
    fn captures_range_when_tail_is_small() {
        // trailing singular values at most ε/10
        let eps = 1e-6;
        let mut rng = RngState::new(12);
        let u = qr_thin(&gaussian_matrix(60, 40, &mut rng)).unwrap().q;
        let v = qr_thin(&gaussian_matrix(40, 40, &mut rng)).unwrap().q;
        let sig: Vec<f64> = (0..40)
            .map(|i| if i < 15 { 1.0 / (i + 1) as f64 } else { 1e-8 })
            .collect();
        let a = u
            .matmul(&DenseMatrix::from_diag(&sig))
            .unwrap()
            .matmul_tr(&v)
            .unwrap();
        let res = basis_ext(&a, &BasisParams::new(eps, 8), &mut RngState::new(3)).unwrap();
        let resid = project_out(&res.q, &a).unwrap().frob_norm();
        let bound = eps * ((40 - res.detected_rank) as f64).sqrt() * 10.0;
        assert!(resid <= bound, "{resid} > {bound}");
        let s = svd_reference(&a).unwrap().s;
        assert!(res.detected_rank >= s.iter().filter(|&&x| x > 10.0 * eps).count());
    }
}
