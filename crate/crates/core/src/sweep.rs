//! Small experiment drivers shared by the command-line tool and the demo:
//! tolerance sweeps and R-value versus singular-value tables.

use crate::decomp::{eod_abe, DecompParams};
use crate::error::{Error, Result};
use crate::linalg::{svd_reference, DenseMatrix, RngState};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub rank: usize,
    pub rel_err: f64,
}

/// Runs the decomposition once per tolerance, restarting the random stream
/// from `seed` each time so every run sees the same sketches.
pub fn epsilon_sweep(
    a: &DenseMatrix,
    epsilons: &[f64],
    base: &DecompParams,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let norm = a.frob_norm();
    if norm == 0.0 {
        return Err(Error::DivideByZero("relative error of a zero matrix"));
    }
    epsilons
        .iter()
        .map(|&epsilon| {
            let params = DecompParams { epsilon, ..*base };
            let f = eod_abe(a, &params, &mut RngState::new(seed))?;
            let rel_err = a.sub(&f.reconstruct())?.frob_norm() / norm;
            Ok(SweepRow {
                epsilon,
                rank: f.rank,
                rel_err,
            })
        })
        .collect()
}

/// `10^lo, 10^(lo+1), …, 10^hi`.
pub fn decades(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi)
        .map(|e| format!("1e{e}").parse().unwrap())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRow {
    /// 1-based position.
    pub index: usize,
    /// `|D(i,i)|`, absent past the detected rank.
    pub r_value: Option<f64>,
    pub sigma: f64,
}

/// R-values of one decomposition next to the reference singular values.
pub fn spectrum_table(
    a: &DenseMatrix,
    params: &DecompParams,
    seed: u64,
) -> Result<Vec<SpectrumRow>> {
    let f = eod_abe(a, params, &mut RngState::new(seed))?;
    let r_values = f.r_values();
    let sigma = svd_reference(a)?.s;
    Ok(sigma
        .into_iter()
        .enumerate()
        .map(|(i, s)| SpectrumRow {
            index: i + 1,
            r_value: r_values.get(i).copied(),
            sigma: s,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{gen_matrix, SpectrumKind, SpectrumSpec};

    #[test]
    fn decade_list() {
        assert_eq!(decades(-3, -1), vec![1e-3, 1e-2, 1e-1]);
    }

    #[test]
    fn sweep_rank_is_prefix_monotone() {
        let a = gen_matrix(&SpectrumSpec::new(SpectrumKind::FastDecay, 60, 1))
            .unwrap()
            .a;
        let rows = epsilon_sweep(
            &a,
            &decades(-9, -1),
            &DecompParams::new(0.0, 1).with_block_size(8),
            4,
        )
        .unwrap();
        for w in rows.windows(2) {
            assert!(w[1].rank <= w[0].rank);
        }
        assert!(rows[0].rank > rows[8].rank);
    }

    #[test]
    fn spectrum_table_lengths() {
        let a = DenseMatrix::from_diag(&[5.0, 3.0, 0.0]);
        let t = spectrum_table(&a, &DecompParams::new(1e-10, 0).with_block_size(1), 0).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t[2].r_value.is_none());
        assert_eq!(t[0].sigma, 5.0);
    }
}
