//! Adaptive UTV decomposition: basis extraction, optional subspace iteration,
//! and a two-QR finish that yields `A ≈ U D Vᵀ` with `D` upper triangular.

use crate::basis::{basis_ext, BasisParams, BasisResult, EpsilonMode, DEFAULT_BLOCK_SIZE};
use crate::error::{shape_err, Error, Result};
use crate::linalg::{qr_thin, DenseMatrix, RngState, SvdTriple};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompParams {
    pub epsilon: f64,
    pub block_size: usize,
    /// Number of subspace-iteration rounds τ.
    pub power_iters: usize,
    pub epsilon_mode: EpsilonMode,
}

impl Default for DecompParams {
    fn default() -> Self {
        Self {
            epsilon: 1e-10,
            block_size: DEFAULT_BLOCK_SIZE,
            power_iters: 1,
            epsilon_mode: EpsilonMode::Absolute,
        }
    }
}

impl DecompParams {
    pub fn new(epsilon: f64, power_iters: usize) -> Self {
        Self {
            epsilon,
            power_iters,
            ..Self::default()
        }
    }

    pub fn with_block_size(mut self, k: usize) -> Self {
        self.block_size = k;
        self
    }

    pub fn with_mode(mut self, mode: EpsilonMode) -> Self {
        self.epsilon_mode = mode;
        self
    }

    /// Basis parameters for a matrix with `n` columns; the block size is
    /// clamped into `[1, n)`.
    pub fn basis_params(&self, n: usize) -> BasisParams {
        let max_block = n.saturating_sub(1).max(1);
        BasisParams {
            epsilon: self.epsilon,
            block_size: self.block_size.clamp(1, max_block),
            epsilon_mode: self.epsilon_mode,
        }
    }
}

/// `A ≈ U D Vᵀ`. When `transposed` is set the factors describe `Aᵀ`, i.e.
/// `u` has as many rows as `A` has columns.
#[derive(Clone, Debug, PartialEq)]
pub struct UtvFactors {
    pub u: DenseMatrix,
    pub d: DenseMatrix,
    pub v: DenseMatrix,
    pub rank: usize,
    pub transposed: bool,
}

impl UtvFactors {
    /// Rank-zero factors for an `rows x cols` matrix.
    pub fn empty(rows: usize, cols: usize) -> Self {
        let transposed = rows < cols;
        let (m, n) = if transposed {
            (cols, rows)
        } else {
            (rows, cols)
        };
        Self {
            u: DenseMatrix::zeros(m, 0),
            d: DenseMatrix::zeros(0, 0),
            v: DenseMatrix::zeros(n, 0),
            rank: 0,
            transposed,
        }
    }

    /// Shape of the approximated matrix.
    pub fn dims(&self) -> (usize, usize) {
        if self.transposed {
            (self.v.rows(), self.u.rows())
        } else {
            (self.u.rows(), self.v.rows())
        }
    }

    pub fn is_rank_zero(&self) -> bool {
        self.rank == 0
    }

    /// `|D(i,i)|`, the R-values.
    pub fn r_values(&self) -> Vec<f64> {
        self.d.diagonal().iter().map(|d| d.abs()).collect()
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        let (m, n) = self.dims();
        if self.rank == 0 {
            return DenseMatrix::zeros(m, n);
        }
        let ud = self.u.matmul(&self.d).expect("conforming factors");
        let a = ud.matmul_tr(&self.v).expect("conforming factors");
        if self.transposed {
            a.transpose()
        } else {
            a
        }
    }

    /// Checks the structural invariants: matching dimensions, `D` square and
    /// upper triangular, `rank ≤ min(m, n)`.
    pub fn validate(&self) -> Result<()> {
        let r = self.rank;
        if self.u.cols() != r || self.v.cols() != r || self.d.shape() != (r, r) {
            return shape_err(format!(
                "factor shapes U {:?}, D {:?}, V {:?} disagree with rank {r}",
                self.u.shape(),
                self.d.shape(),
                self.v.shape()
            ));
        }
        let (m, n) = self.dims();
        if r > m.min(n) {
            return Err(Error::Range {
                rank: r,
                rows: m,
                cols: n,
            });
        }
        for i in 0..r {
            for j in 0..i {
                if self.d[(i, j)] != 0.0 {
                    return shape_err("D is not upper triangular");
                }
            }
        }
        Ok(())
    }
}

pub fn reconstruct(f: &UtvFactors) -> DenseMatrix {
    f.reconstruct()
}

/// Everything a run produces, for diagnostics and tests.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub factors: UtvFactors,
    pub basis: BasisResult,
    /// `Q_τ`, the basis after subspace iteration (of `Aᵀ` when transposed).
    pub range_basis: DenseMatrix,
}

pub fn eod_abe(a: &DenseMatrix, params: &DecompParams, rng: &mut RngState) -> Result<UtvFactors> {
    eod_abe_detailed(a, params, rng).map(|d| d.factors)
}

pub fn eod_abe_detailed(
    a: &DenseMatrix,
    params: &DecompParams,
    rng: &mut RngState,
) -> Result<Decomposition> {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return shape_err(format!("cannot decompose an empty {rows}x{cols} matrix"));
    }
    let transposed = rows < cols;
    let owned;
    let a = if transposed {
        owned = a.transpose();
        &owned
    } else {
        a
    };
    let (m, n) = a.shape();

    let basis = basis_ext(a, &params.basis_params(n), rng)?;
    let r = basis.detected_rank;
    if r == 0 {
        return Ok(Decomposition {
            factors: UtvFactors::empty(rows, cols),
            range_basis: DenseMatrix::zeros(m, 0),
            basis,
        });
    }

    let mut q = basis.q.clone();
    for _ in 0..params.power_iters {
        let q_tilde = qr_thin(&a.tr_matmul(&q)?)?.q;
        q = qr_thin(&a.matmul(&q_tilde)?)?.q;
    }

    // C = Qᵀ A, so Cᵀ = Aᵀ Q = V R and Rᵀ = Q̂ R̂.
    let c_t = a.tr_matmul(&q)?;
    let outer = qr_thin(&c_t)?;
    let inner = qr_thin(&outer.r.transpose())?;

    let factors = UtvFactors {
        u: q.matmul(&inner.q)?,
        d: inner.r,
        v: outer.q,
        rank: r,
        transposed,
    };
    Ok(Decomposition {
        factors,
        basis,
        range_basis: q,
    })
}

/// `max_i ||D(i,i)| − σ_i|` over the detected rank.
pub fn diag_deviation_report(f: &UtvFactors, oracle: &SvdTriple) -> f64 {
    f.r_values()
        .iter()
        .zip(&oracle.s)
        .map(|(d, s)| (d - s).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gaussian_matrix, project_out, svd_reference};

    fn unit(v: DenseMatrix) -> DenseMatrix {
        let n = v.frob_norm();
        v.scaled(1.0 / n)
    }

    #[test]
    fn rank_one_is_exact() {
        let mut rng = RngState::new(21);
        let u = unit(gaussian_matrix(40, 1, &mut rng));
        let v = unit(gaussian_matrix(30, 1, &mut rng));
        let a = u.matmul_tr(&v).unwrap().scaled(7.0);
        let f = eod_abe(&a, &DecompParams::new(1e-10, 0), &mut RngState::new(0)).unwrap();
        assert_eq!(f.rank, 1);
        assert!((f.d[(0, 0)].abs() - 7.0).abs() <= 1e-8);
        let rec = f.reconstruct();
        assert!(rec.sub(&a).unwrap().max_abs() <= 1e-9);
        assert!(rec.sub(&a).unwrap().frob_norm() / a.frob_norm() <= 1e-10);
        let oracle = svd_reference(&a).unwrap();
        assert!(diag_deviation_report(&f, &oracle) <= 1e-8);
    }

    #[test]
    fn identity_reconstructs() {
        let f = eod_abe(
            &DenseMatrix::identity(5),
            &DecompParams::new(1e-10, 1),
            &mut RngState::new(1),
        )
        .unwrap();
        assert_eq!(f.rank, 5);
        assert!(
            f.reconstruct()
                .sub(&DenseMatrix::identity(5))
                .unwrap()
                .max_abs()
                <= 1e-10
        );
    }

    #[test]
    fn zero_matrix_gives_empty_factors() {
        let f = eod_abe(
            &DenseMatrix::zeros(12, 9),
            &DecompParams::default(),
            &mut RngState::new(0),
        )
        .unwrap();
        assert!(f.is_rank_zero());
        assert_eq!(f.dims(), (12, 9));
        assert_eq!(f.reconstruct(), DenseMatrix::zeros(12, 9));
        f.validate().unwrap();
    }

    #[test]
    fn wide_matrix_is_transposed_internally() {
        let mut rng = RngState::new(5);
        let a = gaussian_matrix(10, 4, &mut rng)
            .matmul_tr(&gaussian_matrix(25, 4, &mut rng))
            .unwrap();
        let f = eod_abe(
            &a,
            &DecompParams::new(1e-10, 1).with_block_size(3),
            &mut rng,
        )
        .unwrap();
        assert!(f.transposed);
        assert_eq!(f.rank, 4);
        assert_eq!(f.dims(), (10, 25));
        assert!(f.reconstruct().sub(&a).unwrap().frob_norm() <= 1e-12 * a.frob_norm());
    }

    #[test]
    fn structure_and_identities() {
        let mut rng = RngState::new(8);
        let a = gaussian_matrix(60, 12, &mut rng)
            .matmul_tr(&gaussian_matrix(45, 12, &mut rng))
            .unwrap();
        for tau in 0..3 {
            let dec = eod_abe_detailed(
                &a,
                &DecompParams::new(1e-9, tau).with_block_size(5),
                &mut rng,
            )
            .unwrap();
            let f = &dec.factors;
            f.validate().unwrap();
            assert_eq!(f.rank, 12);
            assert!(f.u.orthonormality_defect() <= 1e-10);
            assert!(f.v.orthonormality_defect() <= 1e-10);
            assert!(f.r_values().iter().all(|&d| d > 0.0));
            let q = &dec.range_basis;
            let proj = q.matmul(&q.tr_matmul(&a).unwrap()).unwrap();
            let rec = f.reconstruct();
            assert!(rec.sub(&proj).unwrap().frob_norm() <= 1e-10 * a.frob_norm());
            let err = a.sub(&rec).unwrap().frob_norm();
            let perp = project_out(q, &a).unwrap().frob_norm();
            assert!((err - perp).abs() <= 1e-10 * a.frob_norm());
        }
    }

    #[test]
    fn diagonal_input_r_values_track_sigma() {
        // Close singular values (ratios 3/4, 2/3, 1/2) only converge
        // geometrically in τ; well-separated ones are matched tightly.
        let close = DenseMatrix::from_diag(&[4.0, 3.0, 2.0, 1.0]);
        let oracle = svd_reference(&close).unwrap();
        let mean_dev = (0..10)
            .map(|seed| {
                let f = eod_abe(
                    &close,
                    &DecompParams::new(1e-12, 2).with_block_size(2),
                    &mut RngState::new(seed),
                )
                .unwrap();
                diag_deviation_report(&f, &oracle)
            })
            .sum::<f64>()
            / 10.0;
        assert!(mean_dev <= 0.25, "mean deviation {mean_dev}");
        let spread = DenseMatrix::from_diag(&[1000.0, 100.0, 10.0, 1.0]);
        let oracle = svd_reference(&spread).unwrap();
        for seed in 0..10 {
            let f = eod_abe(
                &spread,
                &DecompParams::new(1e-12, 2).with_block_size(2),
                &mut RngState::new(seed),
            )
            .unwrap();
            assert!(diag_deviation_report(&f, &oracle) <= 1e-6, "seed {seed}");
        }
    }

    #[test]
    fn block_size_is_clamped() {
        let p = DecompParams::default().basis_params(5);
        assert_eq!(p.block_size, 4);
        assert_eq!(DecompParams::default().basis_params(1).block_size, 1);
    }
}
