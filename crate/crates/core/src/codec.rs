//! EODF container: a checksummed header followed by one record per channel.
//!
//! ```text
//! header   "EODF" | version u16 | flags u16 | m u32 | n u32 | r u32 | channels u8 | crc32 u32
//! channel  flags u16 | r u32 | payload
//! payload  U (rows x r f64) | D packed upper triangle by rows | V (rows x r f64)
//!          or m·n raw u8 samples when the raw bit is set
//! ```
//!
//! Everything is little-endian. `m x n` is the shape of the approximated
//! matrix; a transposed channel stores factors of its transpose, so `U` then
//! has `n` rows. Header flags and `r` are the OR and maximum over channels.
//! The CRC covers the 21 bytes before it.

use crate::bounds::storage_cost;
use crate::decomp::UtvFactors;
use crate::error::{Error, Result};
use crate::imaging::{ChannelData, CompressedImage};
use crate::linalg::DenseMatrix;

pub const MAGIC: &[u8; 4] = b"EODF";
pub const VERSION: u16 = 1;
pub const FLAG_TRANSPOSED: u16 = 1;
pub const FLAG_RAW: u16 = 1 << 1;
const KNOWN_FLAGS: u16 = FLAG_TRANSPOSED | FLAG_RAW;
pub const HEADER_LEN: usize = 25;
const CHECKED_LEN: usize = 21;
const CHANNEL_HEADER_LEN: usize = 6;

fn format_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Format(msg.into()))
}

fn to_u32(x: usize, what: &str) -> u32 {
    u32::try_from(x).unwrap_or_else(|_| panic!("{what} {x} does not fit the container"))
}

/// f64 entries in a factor payload; equals `storage_cost(m, n, r)`.
pub fn payload_entries(f: &UtvFactors) -> usize {
    f.u.rows() * f.rank + f.rank * (f.rank + 1) / 2 + f.v.rows() * f.rank
}

enum Record<'a> {
    Factors(&'a UtvFactors),
    Raw { rank: usize, samples: &'a [u8] },
}

impl Record<'_> {
    fn flags(&self) -> u16 {
        match self {
            Record::Factors(f) if f.transposed => FLAG_TRANSPOSED,
            Record::Factors(_) => 0,
            Record::Raw { .. } => FLAG_RAW,
        }
    }

    fn rank(&self) -> usize {
        match self {
            Record::Factors(f) => f.rank,
            Record::Raw { rank, .. } => *rank,
        }
    }

    fn len(&self) -> usize {
        CHANNEL_HEADER_LEN
            + match self {
                Record::Factors(f) => 8 * payload_entries(f),
                Record::Raw { samples, .. } => samples.len(),
            }
    }
}

fn record_of(c: &ChannelData) -> Record<'_> {
    match c {
        ChannelData::Factors(f) => Record::Factors(f),
        ChannelData::Raw {
            detected_rank,
            samples,
        } => Record::Raw {
            rank: *detected_rank,
            samples,
        },
    }
}

fn put_f64s(out: &mut Vec<u8>, xs: impl IntoIterator<Item = f64>) {
    for x in xs {
        out.extend_from_slice(&x.to_le_bytes());
    }
}

fn encode_records(m: usize, n: usize, records: &[Record]) -> Vec<u8> {
    let len = HEADER_LEN + records.iter().map(Record::len).sum::<usize>();
    let mut out = Vec::with_capacity(len);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    let flags = records.iter().fold(0, |acc, r| acc | r.flags());
    out.extend_from_slice(&flags.to_le_bytes());
    out.extend_from_slice(&to_u32(m, "row count").to_le_bytes());
    out.extend_from_slice(&to_u32(n, "column count").to_le_bytes());
    let r_max = records.iter().map(Record::rank).max().unwrap_or(0);
    out.extend_from_slice(&to_u32(r_max, "rank").to_le_bytes());
    out.push(u8::try_from(records.len()).expect("at most 255 channels"));
    let crc = crc32fast::hash(&out[..CHECKED_LEN]);
    out.extend_from_slice(&crc.to_le_bytes());

    for rec in records {
        out.extend_from_slice(&rec.flags().to_le_bytes());
        out.extend_from_slice(&to_u32(rec.rank(), "rank").to_le_bytes());
        match rec {
            Record::Factors(f) => {
                put_f64s(&mut out, f.u.as_slice().iter().copied());
                for i in 0..f.rank {
                    put_f64s(&mut out, f.d.row(i)[i..].iter().copied());
                }
                put_f64s(&mut out, f.v.as_slice().iter().copied());
            }
            Record::Raw { samples, .. } => out.extend_from_slice(samples),
        }
    }
    debug_assert_eq!(out.len(), len);
    out
}

pub fn encode_factors(f: &UtvFactors) -> Vec<u8> {
    let (m, n) = f.dims();
    encode_records(m, n, &[Record::Factors(f)])
}

pub fn encode_image(img: &CompressedImage) -> Vec<u8> {
    let records: Vec<_> = img.channels.iter().map(record_of).collect();
    encode_records(img.height, img.width, &records)
}

/// Byte length of [`encode_image`] without building it.
pub fn encoded_len(img: &CompressedImage) -> usize {
    HEADER_LEN
        + img
            .channels
            .iter()
            .map(|c| record_of(c).len())
            .sum::<usize>()
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, needed: usize) -> Result<&'a [u8]> {
        let available = self.bytes.len() - self.pos;
        if needed > available {
            return Err(Error::Truncation {
                offset: self.pos,
                needed,
                available,
            });
        }
        let s = &self.bytes[self.pos..self.pos + needed];
        self.pos += needed;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64s(&mut self, count: usize) -> Result<Vec<f64>> {
        let bytes = self.take(count.checked_mul(8).unwrap_or(usize::MAX))?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
}

struct Decoded {
    m: usize,
    n: usize,
    channels: Vec<ChannelData>,
}

fn decode_records(bytes: &[u8]) -> Result<Decoded> {
    let mut rd = Reader { bytes, pos: 0 };
    let header = rd.take(HEADER_LEN)?;
    if &header[..4] != MAGIC {
        return format_err("bad magic");
    }
    let mut hr = Reader {
        bytes: header,
        pos: 4,
    };
    let version = hr.u16()?;
    if version != VERSION {
        return format_err(format!("unsupported version {version}"));
    }
    let flags = hr.u16()?;
    let m = hr.u32()? as usize;
    let n = hr.u32()? as usize;
    let r_max = hr.u32()? as usize;
    let count = hr.take(1)?[0] as usize;
    let crc = hr.u32()?;
    if crc != crc32fast::hash(&header[..CHECKED_LEN]) {
        return format_err("header checksum mismatch");
    }
    if flags & !KNOWN_FLAGS != 0 {
        return format_err(format!("unknown flag bits {flags:#06x}"));
    }
    if r_max > m.min(n) {
        return Err(Error::Range {
            rank: r_max,
            rows: m,
            cols: n,
        });
    }

    let mut channels = Vec::with_capacity(count);
    let (mut seen_flags, mut seen_rank) = (0u16, 0usize);
    for _ in 0..count {
        let cf = rd.u16()?;
        let r = rd.u32()? as usize;
        if cf & !KNOWN_FLAGS != 0 || cf == KNOWN_FLAGS {
            return format_err(format!("bad channel flags {cf:#06x}"));
        }
        if r > m.min(n) {
            return Err(Error::Range {
                rank: r,
                rows: m,
                cols: n,
            });
        }
        seen_flags |= cf;
        seen_rank = seen_rank.max(r);
        if cf & FLAG_RAW != 0 {
            channels.push(ChannelData::Raw {
                detected_rank: r,
                samples: rd.take(m * n)?.to_vec(),
            });
            continue;
        }
        let transposed = cf & FLAG_TRANSPOSED != 0;
        let (ur, vr) = if transposed { (n, m) } else { (m, n) };
        let u = DenseMatrix::from_vec(ur, r, rd.f64s(ur * r)?)?;
        let packed = rd.f64s(r * (r + 1) / 2)?;
        let mut d = DenseMatrix::zeros(r, r);
        let mut it = packed.into_iter();
        for i in 0..r {
            for j in i..r {
                d[(i, j)] = it.next().expect("packed length");
            }
        }
        let v = DenseMatrix::from_vec(vr, r, rd.f64s(vr * r)?)?;
        channels.push(ChannelData::Factors(UtvFactors {
            u,
            d,
            v,
            rank: r,
            transposed,
        }));
    }
    if seen_flags != flags || seen_rank != r_max {
        return format_err("header summary disagrees with channel records");
    }
    if rd.pos != bytes.len() {
        return format_err(format!("{} trailing bytes", bytes.len() - rd.pos));
    }
    Ok(Decoded { m, n, channels })
}

pub fn decode_factors(bytes: &[u8]) -> Result<UtvFactors> {
    let mut dec = decode_records(bytes)?;
    match (dec.channels.len(), dec.channels.pop()) {
        (1, Some(ChannelData::Factors(f))) => Ok(f),
        (1, Some(ChannelData::Raw { .. })) => format_err("raw channel where factors were expected"),
        (k, _) => format_err(format!("expected one channel, found {k}")),
    }
}

pub fn decode_image(bytes: &[u8]) -> Result<CompressedImage> {
    let dec = decode_records(bytes)?;
    if dec.channels.len() != 1 && dec.channels.len() != 3 {
        return format_err(format!(
            "images have 1 or 3 channels, found {}",
            dec.channels.len()
        ));
    }
    Ok(CompressedImage {
        width: dec.n,
        height: dec.m,
        channels: dec.channels,
    })
}

/// Checks that the payload of `f` holds exactly `storage_cost` entries.
pub fn payload_matches_storage(f: &UtvFactors) -> bool {
    let (m, n) = f.dims();
    payload_entries(f) == storage_cost(m, n, f.rank)
}
