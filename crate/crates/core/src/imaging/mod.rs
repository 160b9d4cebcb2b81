//! 8-bit images as stacks of channel matrices, PNM I/O, quality metrics and
//! the per-channel compression pipeline.

mod metrics;
mod pipeline;
mod pnm;

pub use metrics::{psnr, rel_err, ssim, MetricSet};
pub use pipeline::{compress_image, ChannelData, CompressedImage, QualityReport};
pub use pnm::{decode_pnm, encode_pnm, load_image, save_image};

use crate::error::{shape_err, Error, Result};
use crate::linalg::DenseMatrix;

/// Interleaved 8-bit samples, 1 (gray) or 3 (RGB) channels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidParam(format!(
                "images have 1 or 3 channels, got {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return shape_err(format!(
                "{} samples for a {width}x{height}x{channels} image",
                data.len()
            ));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    /// Samples of channel `c` in row-major pixel order.
    pub fn channel_samples(&self, c: usize) -> Result<Vec<u8>> {
        if c >= self.channels {
            return Err(Error::Index(format!(
                "channel {c} of a {}-channel image",
                self.channels
            )));
        }
        Ok(self
            .data
            .iter()
            .skip(c)
            .step_by(self.channels)
            .copied()
            .collect())
    }
}

/// Channel `c` as a `height x width` matrix.
pub fn channel_matrix(buf: &ImageBuffer, c: usize) -> Result<DenseMatrix> {
    let samples = buf.channel_samples(c)?;
    DenseMatrix::from_vec(
        buf.height,
        buf.width,
        samples.into_iter().map(f64::from).collect(),
    )
}

/// Clamp to `[0, 255]` and round half away from zero.
pub fn quantize(x: f64) -> u8 {
    if x.is_nan() {
        return 0;
    }
    x.clamp(0.0, 255.0).round() as u8
}

/// Interleave 1 or 3 equally sized channel matrices into an image.
pub fn assemble_image(mats: &[DenseMatrix]) -> Result<ImageBuffer> {
    let Some(first) = mats.first() else {
        return Err(Error::InvalidParam("no channels to assemble".into()));
    };
    let (h, w) = first.shape();
    if mats.iter().any(|m| m.shape() != (h, w)) {
        return shape_err("channel matrices differ in shape");
    }
    let c = mats.len();
    let mut data = vec![0u8; h * w * c];
    for (k, m) in mats.iter().enumerate() {
        for (p, &x) in m.as_slice().iter().enumerate() {
            data[p * c + k] = quantize(x);
        }
    }
    ImageBuffer::new(w, h, c, data)
}
