//! Per-channel compression: each channel matrix goes through the adaptive
//! decomposition and is kept as factors when that beats raw storage.

use serde_json::{json, Value};

use super::metrics::MetricSet;
use super::{channel_matrix, quantize, ImageBuffer};
use crate::bounds::{is_compressible, storage_cost};
use crate::codec;
use crate::decomp::{eod_abe, DecompParams, UtvFactors};
use crate::error::{shape_err, Result};
use crate::linalg::{DenseMatrix, RngState};

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelData {
    Factors(UtvFactors),
    /// Stored verbatim because factors would not be smaller.
    Raw {
        detected_rank: usize,
        samples: Vec<u8>,
    },
}

impl ChannelData {
    pub fn rank(&self) -> usize {
        match self {
            ChannelData::Factors(f) => f.rank,
            ChannelData::Raw { detected_rank, .. } => *detected_rank,
        }
    }

    pub fn is_raw(&self) -> bool {
        matches!(self, ChannelData::Raw { .. })
    }

    /// Stored scalars for an `m x n` channel.
    pub fn entry_count(&self, m: usize, n: usize) -> usize {
        match self {
            ChannelData::Factors(f) => storage_cost(m, n, f.rank),
            ChannelData::Raw { .. } => m * n,
        }
    }

    fn samples(&self) -> Vec<u8> {
        match self {
            ChannelData::Factors(f) => f
                .reconstruct()
                .as_slice()
                .iter()
                .map(|&x| quantize(x))
                .collect(),
            ChannelData::Raw { samples, .. } => samples.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompressedImage {
    pub width: usize,
    pub height: usize,
    pub channels: Vec<ChannelData>,
}

impl CompressedImage {
    pub fn ranks(&self) -> Vec<usize> {
        self.channels.iter().map(ChannelData::rank).collect()
    }

    pub fn entry_count(&self) -> usize {
        self.channels
            .iter()
            .map(|c| c.entry_count(self.height, self.width))
            .sum()
    }

    pub fn decompress(&self) -> Result<ImageBuffer> {
        let nc = self.channels.len();
        let mut data = vec![0u8; self.width * self.height * nc];
        for (k, ch) in self.channels.iter().enumerate() {
            let samples = ch.samples();
            if samples.len() != self.width * self.height {
                return shape_err(format!("channel {k} holds {} samples", samples.len()));
            }
            for (p, s) in samples.into_iter().enumerate() {
                data[p * nc + k] = s;
            }
        }
        ImageBuffer::new(self.width, self.height, nc, data)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QualityReport {
    pub psnr_db: f64,
    pub ssim: f64,
    pub rel_err: f64,
    pub per_channel_rank: Vec<usize>,
    pub raw_channels: Vec<bool>,
    /// One entry per pixel sample.
    pub bytes_original: usize,
    /// One entry per stored scalar.
    pub bytes_compressed: usize,
    pub reduction_pct: f64,
    /// Size of the serialized container.
    pub file_bytes: usize,
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("nan")
    }
}

impl QualityReport {
    /// Single-line JSON; non-finite numbers are written as strings.
    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "psnr_db": num(self.psnr_db),
            "ssim": num(self.ssim),
            "rel_err": num(self.rel_err),
            "per_channel_rank": self.per_channel_rank,
            "raw_channels": self.raw_channels,
            "bytes_original": self.bytes_original,
            "bytes_compressed": self.bytes_compressed,
            "reduction_pct": num(self.reduction_pct),
            "file_bytes": self.file_bytes,
        })
    }
}

/// Largest sample value; channels are decomposed as intensities in `[0, 1]`.
const FULL_SCALE: f64 = 255.0;

fn compress_channel(a: &DenseMatrix, params: &DecompParams, seed: u64) -> Result<ChannelData> {
    let mut f = eod_abe(
        &a.scaled(1.0 / FULL_SCALE),
        params,
        &mut RngState::new(seed),
    )?;
    f.d = f.d.scaled(FULL_SCALE);
    let (m, n) = a.shape();
    if is_compressible(m, n, f.rank) {
        Ok(ChannelData::Factors(f))
    } else {
        Ok(ChannelData::Raw {
            detected_rank: f.rank,
            samples: a.as_slice().iter().map(|&x| x as u8).collect(),
        })
    }
}

/// Worker cap from `EODABE_THREADS`; unset means one thread per channel.
fn threads_allowed() -> usize {
    std::env::var("EODABE_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(usize::MAX)
}

fn compress_channels(
    mats: &[DenseMatrix],
    params: &DecompParams,
    seed: u64,
) -> Result<Vec<ChannelData>> {
    let seed_of = |c: usize| seed.wrapping_add(c as u64);
    if cfg!(feature = "parallel") && mats.len() > 1 && threads_allowed() > 1 {
        std::thread::scope(|s| {
            let handles: Vec<_> = mats
                .iter()
                .enumerate()
                .map(|(c, m)| s.spawn(move || compress_channel(m, params, seed_of(c))))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("channel worker panicked"))
                .collect()
        })
    } else {
        mats.iter()
            .enumerate()
            .map(|(c, m)| compress_channel(m, params, seed_of(c)))
            .collect()
    }
}

/// Compresses every channel with seeds `seed, seed + 1, …` and measures the
/// 8-bit reconstruction against the original. The tolerance in `params`
/// applies to intensities scaled into `[0, 1]`; stored factors reproduce the
/// 0..255 samples directly.
pub fn compress_image(
    buf: &ImageBuffer,
    params: &DecompParams,
    seed: u64,
) -> Result<(CompressedImage, QualityReport)> {
    let mats = (0..buf.channels())
        .map(|c| channel_matrix(buf, c))
        .collect::<Result<Vec<_>>>()?;
    let compressed = CompressedImage {
        width: buf.width(),
        height: buf.height(),
        channels: compress_channels(&mats, params, seed)?,
    };
    let restored = compressed.decompress()?;
    let to_f64 = |b: &ImageBuffer| b.data().iter().map(|&x| f64::from(x)).collect::<Vec<_>>();
    let metrics = MetricSet::from_slices(&to_f64(buf), &to_f64(&restored));

    let bytes_original = buf.data().len();
    let bytes_compressed = compressed.entry_count();
    let report = QualityReport {
        psnr_db: metrics.psnr_db,
        ssim: metrics.ssim,
        rel_err: metrics.rel_err,
        per_channel_rank: compressed.ranks(),
        raw_channels: compressed
            .channels
            .iter()
            .map(ChannelData::is_raw)
            .collect(),
        bytes_original,
        bytes_compressed,
        reduction_pct: 100.0 * (1.0 - bytes_compressed as f64 / bytes_original as f64),
        file_bytes: codec::encoded_len(&compressed),
    };
    Ok((compressed, report))
}
