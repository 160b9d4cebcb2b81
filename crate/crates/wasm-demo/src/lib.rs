//! Browser bindings: tolerance sweep, R-value spectrum and RGBA image
//! compression. Tables cross the boundary as flat `Float64Array`s.

use eodabe::imaging::{compress_image, ImageBuffer};
use eodabe::sweep::{decades, epsilon_sweep, spectrum_table};
use eodabe::synthetic::{gen_matrix, SpectrumKind, SpectrumSpec};
use eodabe::{DecompParams, DenseMatrix};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn kind_from(name: &str, rank: usize) -> Result<SpectrumKind, JsError> {
    Ok(match name {
        "low-rank-noise" => SpectrumKind::LowRankPlusNoise { alpha: 0.005, rank },
        "devils-stairs" => SpectrumKind::DevilsStairs,
        "fast-decay" => SpectrumKind::FastDecay,
        "slow-decay" => SpectrumKind::SlowDecay,
        "rank-deficient" => SpectrumKind::RankDeficient { rank },
        other => return Err(JsError::new(&format!("unknown matrix kind {other:?}"))),
    })
}

fn matrix(kind: &str, n: usize, rank: usize, seed: u64) -> Result<DenseMatrix, JsError> {
    let spec = SpectrumSpec::new(kind_from(kind, rank)?, n, seed);
    Ok(gen_matrix(&spec).map_err(js_err)?.a)
}

/// `[ε, rank, rel_err]` triples for ε = 10^lo … 10^hi on a synthetic matrix.
#[wasm_bindgen]
pub fn sweep(
    kind: &str,
    n: usize,
    rank: usize,
    seed: u64,
    lo: i32,
    hi: i32,
    tau: usize,
) -> Result<Vec<f64>, JsError> {
    let a = matrix(kind, n, rank, seed)?;
    let rows = epsilon_sweep(&a, &decades(lo, hi), &DecompParams::new(0.0, tau), seed + 1)
        .map_err(js_err)?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.epsilon, r.rank as f64, r.rel_err])
        .collect())
}

/// `[r_value, σ]` pairs; `r_value` is NaN past the detected rank.
#[wasm_bindgen]
pub fn spectrum(
    kind: &str,
    n: usize,
    rank: usize,
    seed: u64,
    eps: f64,
    tau: usize,
) -> Result<Vec<f64>, JsError> {
    let a = matrix(kind, n, rank, seed)?;
    let rows = spectrum_table(&a, &DecompParams::new(eps, tau), seed + 1).map_err(js_err)?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.r_value.unwrap_or(f64::NAN), r.sigma])
        .collect())
}

#[wasm_bindgen]
pub struct Compressed {
    rgba: Vec<u8>,
    ranks: Vec<u32>,
    psnr_db: f64,
    ssim: f64,
    reduction_pct: f64,
}

#[wasm_bindgen]
impl Compressed {
    #[wasm_bindgen(getter)]
    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn ranks(&self) -> Vec<u32> {
        self.ranks.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn psnr_db(&self) -> f64 {
        self.psnr_db
    }

    #[wasm_bindgen(getter)]
    pub fn ssim(&self) -> f64 {
        self.ssim
    }

    #[wasm_bindgen(getter)]
    pub fn reduction_pct(&self) -> f64 {
        self.reduction_pct
    }
}

/// Compresses the RGB part of canvas pixel data; alpha comes back opaque.
#[wasm_bindgen]
pub fn compress_rgba(
    width: usize,
    height: usize,
    rgba: &[u8],
    eps: f64,
    tau: usize,
    seed: u64,
) -> Result<Compressed, JsError> {
    if rgba.len() != width * height * 4 {
        return Err(JsError::new("pixel data does not match width x height x 4"));
    }
    let rgb: Vec<u8> = rgba
        .chunks_exact(4)
        .flat_map(|p| [p[0], p[1], p[2]])
        .collect();
    let img = ImageBuffer::new(width, height, 3, rgb).map_err(js_err)?;
    let (packed, report) =
        compress_image(&img, &DecompParams::new(eps, tau), seed).map_err(js_err)?;
    let out = packed.decompress().map_err(js_err)?;
    Ok(Compressed {
        rgba: out
            .data()
            .chunks_exact(3)
            .flat_map(|p| [p[0], p[1], p[2], 255])
            .collect(),
        ranks: report.per_channel_rank.iter().map(|&r| r as u32).collect(),
        psnr_db: report.psnr_db,
        ssim: report.ssim,
        reduction_pct: report.reduction_pct,
    })
}
