//! Closed-form error bound, storage accounting and operation counts.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BoundInputs {
    /// σ₁ ≥ σ₂ ≥ … of the input matrix.
    pub singular_values: Vec<f64>,
    /// Target rank `r` of the bound.
    pub rank: usize,
    /// Number of sketch columns `d`.
    pub samples: usize,
    pub power_iters: usize,
}

fn check_bound_inputs(b: &BoundInputs) -> Result<(f64, f64)> {
    if b.samples < b.rank + 2 {
        return Err(Error::InvalidParam(format!(
            "expectation bound needs d − r ≥ 2, got d = {}, r = {}",
            b.samples, b.rank
        )));
    }
    if b.rank == 0 || b.rank > b.singular_values.len() {
        return Err(Error::InvalidParam(format!(
            "rank {} outside 1..={}",
            b.rank,
            b.singular_values.len()
        )));
    }
    let sigma_r = b.singular_values[b.rank - 1];
    if !(sigma_r > 0.0) {
        return Err(Error::InvalidParam("σ_r must be positive".into()));
    }
    let sigma_next = b.singular_values.get(b.rank).copied().unwrap_or(0.0);
    let tail = b.singular_values[b.rank..]
        .iter()
        .map(|s| s * s)
        .sum::<f64>()
        .sqrt();
    Ok((sigma_next / sigma_r, tail))
}

/// `(1 + r·α^{4τ}/(d − r − 1))^{1/2} · (Σ_{j>r} σ_j²)^{1/2}` with
/// `α = σ_{r+1}/σ_r`; bounds `E‖A − Â‖_F`.
pub fn expected_error_bound(b: &BoundInputs) -> Result<f64> {
    let (alpha, tail) = check_bound_inputs(b)?;
    let r = b.rank as f64;
    let d = b.samples as f64;
    let exponent = 4 * b.power_iters as i32;
    Ok((1.0 + r * alpha.powi(exponent) / (d - r - 1.0)).sqrt() * tail)
}

/// The same bound without power iteration: `(1 + r/(d − r − 1))^{1/2} · tail`.
pub fn gaussian_sketch_bound(b: &BoundInputs) -> Result<f64> {
    let (_, tail) = check_bound_inputs(b)?;
    let r = b.rank as f64;
    let d = b.samples as f64;
    Ok((1.0 + r / (d - r - 1.0)).sqrt() * tail)
}

/// Stored scalars for rank-`r` factors of an `m x n` matrix: dense `U` and
/// `V` plus the packed upper triangle of `D`.
pub fn storage_cost(m: usize, n: usize, r: usize) -> usize {
    r * (m + n) + r * (r + 1) / 2
}

/// Whether the factors take fewer scalars than the `m·n` raw entries.
pub fn is_compressible(m: usize, n: usize, r: usize) -> bool {
    storage_cost(m, n, r) < m * n
}

/// Real-valued rank threshold: factors beat raw storage exactly when
/// `r < √(m² + n² + 4mn + m + n + 1/4) − (m + n + 1/2)`.
pub fn compressibility_threshold(m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    (m * m + n * n + 4.0 * m * n + m + n + 0.25).sqrt() - (m + n + 0.5)
}

/// Closed-form compressibility test; agrees with [`is_compressible`].
pub fn is_compressible_closed_form(m: usize, n: usize, r: usize) -> bool {
    (r as f64) < compressibility_threshold(m, n)
}

/// Arithmetic cost of one decomposition:
/// `(τ+1)(2mnr + mr² + 2nr²) + τmr² + 2r³ + 4mrk`.
pub fn flop_estimate(m: usize, n: usize, r: usize, k: usize, tau: usize) -> u128 {
    let (m, n, r, k, tau) = (m as u128, n as u128, r as u128, k as u128, tau as u128);
    (tau + 1) * (2 * m * n * r + m * r * r + 2 * n * r * r)
        + tau * m * r * r
        + 2 * r * r * r
        + 4 * m * r * k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(s: &[f64], r: usize, d: usize, tau: usize) -> BoundInputs {
        BoundInputs {
            singular_values: s.to_vec(),
            rank: r,
            samples: d,
            power_iters: tau,
        }
    }

    #[test]
    fn zero_tail_gives_zero_bound() {
        let b = inputs(&[3.0, 2.0, 0.0, 0.0], 2, 5, 1);
        assert_eq!(expected_error_bound(&b).unwrap(), 0.0);
    }

    #[test]
    fn hand_evaluated_bound() {
        let b = inputs(&[1.0, 0.5, 0.1, 0.01, 0.001], 2, 5, 1);
        // α = 0.1/0.5, tail² = 0.01 + 1e-4 + 1e-6, d − r − 1 = 2
        let alpha: f64 = 0.2;
        let tail = (0.01f64 + 1e-4 + 1e-6).sqrt();
        let want = (1.0 + 2.0 * alpha.powi(4) / 2.0).sqrt() * tail;
        let got = expected_error_bound(&b).unwrap();
        assert!((got - want).abs() <= 1e-15 * want);
        assert!((got - 0.100_584_102_123_546).abs() < 1e-12);
    }

    #[test]
    fn no_power_iteration_matches_plain_sketch_bound() {
        let s: Vec<f64> = (1..=30).map(|i| (-(i as f64) / 4.0).exp()).collect();
        for r in 1..20 {
            let b = inputs(&s, r, r + 4, 0);
            let x = expected_error_bound(&b).unwrap();
            let y = gaussian_sketch_bound(&b).unwrap();
            assert!((x - y).abs() <= 1e-12 * y);
            let sharper = expected_error_bound(&inputs(&s, r, r + 4, 2)).unwrap();
            assert!(sharper <= y);
        }
    }

    #[test]
    fn bound_rejects_small_oversampling() {
        assert!(expected_error_bound(&inputs(&[1.0, 0.5, 0.1], 2, 3, 0)).is_err());
        assert!(expected_error_bound(&inputs(&[1.0, 0.0, 0.0], 2, 6, 0)).is_err());
    }

    #[test]
    fn storage_examples() {
        assert_eq!(storage_cost(220, 220, 50), 23275);
        assert_eq!(storage_cost(220, 220, 52), 24258);
        assert_eq!(storage_cost(220, 220, 53), 24751);
        assert_eq!(storage_cost(7, 9, 0), 0);
        assert_eq!(storage_cost(5, 4, 2), 21);
    }

    #[test]
    fn compressibility_boundary() {
        assert!(is_compressible(220, 220, 98));
        assert!(!is_compressible(220, 220, 99));
        assert!(is_compressible(220, 220, 50));
        for n in 1..40 {
            assert!(!is_compressible(n, n, n));
        }
    }

    #[test]
    fn closed_form_matches_brute_force() {
        for m in 1..40 {
            for n in 1..40 {
                for r in 0..=m.min(n) {
                    assert_eq!(
                        is_compressible(m, n, r),
                        is_compressible_closed_form(m, n, r),
                        "m={m} n={n} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn flop_examples() {
        assert_eq!(flop_estimate(8, 6, 2, 2, 1), 720);
        assert_eq!(flop_estimate(100, 80, 0, 16, 2), 0);
        let (m, n, r, k) = (50u128, 40u128, 7u128, 4u128);
        let tau0 = 2 * m * n * r + m * r * r + 2 * n * r * r + 2 * r * r * r + 4 * m * r * k;
        assert_eq!(flop_estimate(50, 40, 7, 4, 0), tau0);
    }
}
