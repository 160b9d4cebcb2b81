//! Test-matrix generators with known spectra.
//!
//! All kinds build `A = U Σ Vᵀ` from Haar-like orthogonal factors drawn from
//! one seeded stream. Rank-limited kinds only draw the leading `r` columns of
//! `U` and `V`, which is the same as taking them from a full `n x n` draw.

use crate::error::{Error, Result};
use crate::imaging::{assemble_image, ImageBuffer};
use crate::linalg::{gaussian_matrix, qr_thin, DenseMatrix, RngState};

/// Smallest retained singular value of the low-rank-plus-noise class.
pub const LOW_RANK_FLOOR: f64 = 1e-25;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectrumKind {
    /// `σ_1..σ_r` linear from 1 down to 1e-25, zero after, plus `α·σ_r·E`.
    LowRankPlusNoise { alpha: f64, rank: usize },
    /// Plateaus of 15 equal values dropping by `10^{-4/5}` per step.
    DevilsStairs,
    /// `σ_i = e^{−i/6}`.
    FastDecay,
    /// `σ_i = i^{−2}`.
    SlowDecay,
    /// `r` sorted uniform(0,1) values, zero after.
    RankDeficient { rank: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumSpec {
    pub kind: SpectrumKind,
    pub n: usize,
    pub seed: u64,
}

impl SpectrumSpec {
    pub fn new(kind: SpectrumKind, n: usize, seed: u64) -> Self {
        Self { kind, n, seed }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParam(msg));
        if self.n == 0 {
            return bad("matrix order must be at least 1".into());
        }
        match self.kind {
            SpectrumKind::LowRankPlusNoise { alpha, rank } => {
                if !(alpha > 0.0) || !alpha.is_finite() {
                    return bad(format!("noise level must be positive, got {alpha}"));
                }
                if rank == 0 || rank > self.n {
                    return bad(format!("rank {rank} outside 1..={}", self.n));
                }
            }
            SpectrumKind::RankDeficient { rank } if rank > self.n => {
                return bad(format!("rank {rank} exceeds order {}", self.n));
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GeneratedMatrix {
    pub a: DenseMatrix,
    /// Exact singular values, descending, length `n`; `None` once noise is added.
    pub true_spectrum: Option<Vec<f64>>,
    pub true_rank: Option<usize>,
}

/// Closed-form spectrum of the deterministic kinds, length `n`.
pub fn closed_form_spectrum(kind: SpectrumKind, n: usize) -> Option<Vec<f64>> {
    let s = match kind {
        SpectrumKind::DevilsStairs => (1..=n)
            .map(|i| 10f64.powf(-0.8 * ((i - 1) / 15) as f64))
            .collect(),
        SpectrumKind::FastDecay => (1..=n).map(|i| (-(i as f64) / 6.0).exp()).collect(),
        SpectrumKind::SlowDecay => (1..=n).map(|i| (i as f64).powi(-2)).collect(),
        SpectrumKind::LowRankPlusNoise { rank, .. } => (1..=n)
            .map(|i| {
                if i > rank {
                    0.0
                } else if rank == 1 {
                    1.0
                } else {
                    1.0 - (i - 1) as f64 * (1.0 - LOW_RANK_FLOOR) / (rank - 1) as f64
                }
            })
            .collect(),
        SpectrumKind::RankDeficient { .. } => return None,
    };
    Some(s)
}

/// First `k` columns of a random orthogonal matrix, signed so that the
/// diagonal entries are nonnegative.
pub fn random_orthonormal_columns(n: usize, k: usize, rng: &mut RngState) -> DenseMatrix {
    let mut q = qr_thin(&gaussian_matrix(n, k, rng)).expect("n >= k").q;
    for j in 0..k {
        if q[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

pub fn random_orthogonal(n: usize, rng: &mut RngState) -> DenseMatrix {
    random_orthonormal_columns(n, n, rng)
}

/// `U diag(σ) Vᵀ` for `U`, `V` with `σ.len()` columns.
fn compose(u: &DenseMatrix, sigma: &[f64], v: &DenseMatrix) -> DenseMatrix {
    let mut us = u.clone();
    for i in 0..us.rows() {
        for (j, s) in sigma.iter().enumerate() {
            us[(i, j)] *= s;
        }
    }
    us.matmul_tr(v).expect("conforming factors")
}

pub fn gen_matrix(spec: &SpectrumSpec) -> Result<GeneratedMatrix> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = RngState::new(spec.seed);

    let out = match spec.kind {
        SpectrumKind::RankDeficient { rank } => {
            let mut sigma: Vec<f64> = (0..rank).map(|_| rng.uniform_open()).collect();
            sigma.sort_by(|a, b| b.total_cmp(a));
            let u = random_orthonormal_columns(n, rank, &mut rng);
            let v = random_orthonormal_columns(n, rank, &mut rng);
            let a = compose(&u, &sigma, &v);
            sigma.resize(n, 0.0);
            GeneratedMatrix {
                a,
                true_spectrum: Some(sigma),
                true_rank: Some(rank),
            }
        }
        SpectrumKind::LowRankPlusNoise { alpha, rank } => {
            let sigma = closed_form_spectrum(spec.kind, n).expect("closed form");
            let u = random_orthonormal_columns(n, rank, &mut rng);
            let v = random_orthonormal_columns(n, rank, &mut rng);
            let clean = compose(&u, &sigma[..rank], &v);
            let noise = gaussian_matrix(n, n, &mut rng).scaled(alpha * sigma[rank - 1]);
            GeneratedMatrix {
                a: clean.add(&noise)?,
                true_spectrum: None,
                true_rank: Some(rank),
            }
        }
        kind => {
            let sigma = closed_form_spectrum(kind, n).expect("closed form");
            let u = random_orthogonal(n, &mut rng);
            let v = random_orthogonal(n, &mut rng);
            GeneratedMatrix {
                a: compose(&u, &sigma, &v),
                true_spectrum: Some(sigma),
                true_rank: Some(n),
            }
        }
    };
    Ok(out)
}

/// Integer-valued `m x n` matrix of rank `r` (with overwhelming probability)
/// and entries in `[0, 255]`: a product of random 0/1 factors, scaled by the
/// largest integer that keeps the maximum at or below 255.
pub fn integer_low_rank(m: usize, n: usize, r: usize, rng: &mut RngState) -> DenseMatrix {
    let mut bits =
        |rows, cols| DenseMatrix::from_fn(rows, cols, |_, _| f64::from(rng.uniform_open() < 0.5));
    let b = bits(m, r);
    let c = bits(r, n);
    let a = b.matmul(&c).expect("conforming factors");
    let peak = a.max_abs();
    if peak == 0.0 {
        return a;
    }
    a.scaled((255.0 / peak).floor())
}

/// RGB or gray test image whose channel matrices have the given exact ranks.
pub fn low_rank_image(
    width: usize,
    height: usize,
    ranks: &[usize],
    seed: u64,
) -> Result<ImageBuffer> {
    let mut rng = RngState::new(seed);
    let mats: Vec<_> = ranks
        .iter()
        .map(|&r| integer_low_rank(height, width, r, &mut rng))
        .collect();
    assemble_image(&mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::svd_reference;

    /// Cofactor-expansion determinant, independent of any factorization.
    fn det(m: &DenseMatrix) -> f64 {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)];
        }
        (0..n)
            .map(|j| {
                let minor = DenseMatrix::from_fn(n - 1, n - 1, |r, c| {
                    m[(r + 1, if c < j { c } else { c + 1 })]
                });
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[(0, j)] * det(&minor)
            })
            .sum()
    }

    #[test]
    fn order_one_orthogonal_is_one() {
        for seed in 0..8 {
            let q = random_orthogonal(1, &mut RngState::new(seed));
            assert_eq!(q.as_slice(), &[1.0]);
        }
    }

    #[test]
    fn orthogonality_residual() {
        let q = random_orthogonal(50, &mut RngState::new(3));
        assert!(q.orthonormality_defect() <= 1e-12);
    }

    #[test]
    fn determinant_has_unit_magnitude() {
        for n in 2..=8 {
            let q = random_orthogonal(n, &mut RngState::new(n as u64));
            assert!((det(&q).abs() - 1.0).abs() <= 1e-8, "n = {n}");
        }
    }

    #[test]
    fn devils_stairs_values() {
        let s = closed_form_spectrum(SpectrumKind::DevilsStairs, 90).unwrap();
        assert!(s[..15].iter().all(|&x| x == 1.0));
        assert!((s[15] - 0.158_489_319_246_111_35).abs() < 1e-15);
        assert!(s[75..].iter().all(|&x| (x - 1e-4).abs() < 1e-18));
    }

    #[test]
    fn fast_decay_values() {
        let s = closed_form_spectrum(SpectrumKind::FastDecay, 3).unwrap();
        let want = [
            (-1.0f64 / 6.0).exp(),
            (-2.0f64 / 6.0).exp(),
            (-0.5f64).exp(),
        ];
        assert_eq!(s, want);
    }

    #[test]
    fn low_rank_linear_profile() {
        let s = closed_form_spectrum(
            SpectrumKind::LowRankPlusNoise {
                alpha: 0.005,
                rank: 20,
            },
            30,
        )
        .unwrap();
        assert_eq!(s[0], 1.0);
        assert!((s[19] - LOW_RANK_FLOOR).abs() < 1e-16);
        assert!(s[20..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rank_deficient_has_exact_rank() {
        let g = gen_matrix(&SpectrumSpec::new(
            SpectrumKind::RankDeficient { rank: 40 },
            100,
            5,
        ))
        .unwrap();
        let s = svd_reference(&g.a).unwrap().s;
        assert_eq!(s.iter().filter(|&&x| x > 1e-10).count(), 40);
        let t = g.true_spectrum.unwrap();
        assert!(t.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(g.true_rank, Some(40));
    }

    #[test]
    fn spectrum_fidelity() {
        for kind in [
            SpectrumKind::DevilsStairs,
            SpectrumKind::FastDecay,
            SpectrumKind::SlowDecay,
        ] {
            for n in [30, 120] {
                let g = gen_matrix(&SpectrumSpec::new(kind, n, 11)).unwrap();
                let s = svd_reference(&g.a).unwrap().s;
                for (got, want) in s.iter().zip(g.true_spectrum.as_ref().unwrap()) {
                    // relative 1e-9 down to the rounding floor of an O(1) matrix
                    assert!(
                        (got - want).abs() <= 1e-9 * want + 1e-13,
                        "{kind:?} n={n}: {got} vs {want}"
                    );
                }
            }
        }
        let g = gen_matrix(&SpectrumSpec::new(
            SpectrumKind::RankDeficient { rank: 25 },
            60,
            2,
        ))
        .unwrap();
        let s = svd_reference(&g.a).unwrap().s;
        for (got, want) in s.iter().zip(g.true_spectrum.as_ref().unwrap()) {
            assert!((got - want).abs() <= 1e-9 * want + 1e-13);
        }
    }

    #[test]
    fn integer_fixture_has_exact_rank() {
        let a = integer_low_rank(60, 70, 12, &mut RngState::new(3));
        assert!(a
            .as_slice()
            .iter()
            .all(|&x| x == x.round() && (0.0..=255.0).contains(&x)));
        let s = svd_reference(&a).unwrap().s;
        assert_eq!(s.iter().filter(|&&x| x > 1e-8 * s[0]).count(), 12);
    }

    #[test]
    fn reproducible() {
        let spec = SpectrumSpec::new(
            SpectrumKind::LowRankPlusNoise {
                alpha: 0.02,
                rank: 5,
            },
            40,
            9,
        );
        assert_eq!(gen_matrix(&spec).unwrap().a, gen_matrix(&spec).unwrap().a);
    }

    #[test]
    fn invalid_specs() {
        let bad = [
            SpectrumSpec::new(SpectrumKind::FastDecay, 0, 0),
            SpectrumSpec::new(SpectrumKind::RankDeficient { rank: 11 }, 10, 0),
            SpectrumSpec::new(
                SpectrumKind::LowRankPlusNoise {
                    alpha: 0.0,
                    rank: 3,
                },
                10,
                0,
            ),
            SpectrumSpec::new(
                SpectrumKind::LowRankPlusNoise {
                    alpha: 0.1,
                    rank: 0,
                },
                10,
                0,
            ),
        ];
        for spec in bad {
            assert!(matches!(gen_matrix(&spec), Err(Error::InvalidParam(_))));
        }
    }
}
