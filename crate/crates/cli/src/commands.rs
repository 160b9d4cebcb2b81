use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use eodabe::basis::EpsilonMode;
use eodabe::bounds::flop_estimate;
use eodabe::codec::{decode_image, encode_image};
use eodabe::imaging::{compress_image, load_image, save_image};
use eodabe::linalg::svd_reference;
use eodabe::sweep::{decades, epsilon_sweep, spectrum_table};
use eodabe::synthetic::{gen_matrix, SpectrumKind, SpectrumSpec};
use eodabe::{eod_abe, rsvd_fixed_rank, DecompParams, DenseMatrix, FixedRankParams, RngState};
use serde_json::json;

use crate::dense::{format_dense, parse_dense};
use crate::{Algo, CliError, Command, DecompFlags, EpsMode, Kind, SpecFlags};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: crate::Cli) -> Result<()> {
    match cli.command {
        Command::Compress {
            input,
            output,
            eps,
            decomp,
            repeat,
        } => compress(&input, &output, &params(eps, &decomp)?, decomp.seed, repeat),
        Command::Decompress { input, output } => decompress(&input, &output),
        Command::Gen { spec, seed, out } => {
            let g = gen_matrix(&spectrum_spec(&spec, seed)?)?;
            write_out(&out, format_dense(&g.a).as_bytes())
        }
        Command::Svals {
            input,
            eps,
            decomp,
            out,
        } => svals(
            &read_matrix(&input)?,
            &params(eps, &decomp)?,
            decomp.seed,
            &out,
        ),
        Command::SweepEps {
            input,
            eps,
            decomp,
            out,
        } => {
            let list = if eps.is_empty() { decades(-9, -1) } else { eps };
            sweep(
                &read_matrix(&input)?,
                &list,
                &params(1e-10, &decomp)?,
                decomp.seed,
                &out,
            )
        }
        Command::Bench {
            spec,
            algo,
            eps,
            decomp,
            repeat,
            out,
        } => bench(
            &spec,
            &algo,
            &params(eps, &decomp)?,
            decomp.seed,
            repeat,
            &out,
        ),
    }
}

fn params(eps: f64, flags: &DecompFlags) -> Result<DecompParams> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(CliError::Usage(format!(
            "--eps must be a finite nonnegative number, got {eps}"
        )));
    }
    if flags.block == 0 {
        return Err(CliError::Usage("--block must be at least 1".into()));
    }
    let mode = match flags.eps_mode {
        EpsMode::Abs => EpsilonMode::Absolute,
        EpsMode::Rel => EpsilonMode::Relative,
    };
    Ok(DecompParams::new(eps, flags.tau)
        .with_block_size(flags.block)
        .with_mode(mode))
}

fn spectrum_spec(flags: &SpecFlags, seed: u64) -> Result<SpectrumSpec> {
    let rank = || {
        flags.rank.ok_or_else(|| {
            CliError::Usage("--rank is required for low-rank-noise and rank-deficient".into())
        })
    };
    let kind = match flags.kind {
        Kind::LowRankNoise => SpectrumKind::LowRankPlusNoise {
            alpha: flags.alpha,
            rank: rank()?,
        },
        Kind::DevilsStairs => SpectrumKind::DevilsStairs,
        Kind::FastDecay => SpectrumKind::FastDecay,
        Kind::SlowDecay => SpectrumKind::SlowDecay,
        Kind::RankDeficient => SpectrumKind::RankDeficient { rank: rank()? },
    };
    Ok(SpectrumSpec::new(kind, flags.n, seed))
}

fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    Ok(parse_dense(&fs::read_to_string(path)?)?)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_out(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    let mut w = sink(out)?;
    w.write_all(bytes)?;
    w.flush()?;
    Ok(())
}

/// Floats in CSV output: 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Copy, Debug)]
struct Timing {
    median: f64,
    mean: f64,
    min: f64,
    max: f64,
}

/// Runs `f` `repeat` times (at least once) and keeps the last result.
fn timed<T>(repeat: usize, mut f: impl FnMut() -> Result<T>) -> Result<(T, Timing)> {
    let mut secs = Vec::with_capacity(repeat.max(1));
    let mut last = None;
    for _ in 0..repeat.max(1) {
        let t = Instant::now();
        last = Some(f()?);
        secs.push(t.elapsed().as_secs_f64());
    }
    secs.sort_by(f64::total_cmp);
    let k = secs.len();
    let median = if k % 2 == 1 {
        secs[k / 2]
    } else {
        0.5 * (secs[k / 2 - 1] + secs[k / 2])
    };
    let timing = Timing {
        median,
        mean: secs.iter().sum::<f64>() / k as f64,
        min: secs[0],
        max: secs[k - 1],
    };
    Ok((last.expect("at least one run"), timing))
}

fn compress(
    input: &Path,
    output: &Path,
    params: &DecompParams,
    seed: u64,
    repeat: usize,
) -> Result<()> {
    let img = load_image(input)?;
    let ((compressed, report), t) = timed(repeat, || Ok(compress_image(&img, params, seed)?))?;
    fs::write(output, encode_image(&compressed))?;
    let mut v = report.to_json_value();
    v["time_s"] = json!({
        "repeat": repeat.max(1),
        "median": t.median,
        "mean": t.mean,
        "min": t.min,
        "max": t.max,
    });
    println!("{v}");
    Ok(())
}

fn decompress(input: &Path, output: &Path) -> Result<()> {
    let img = decode_image(&fs::read(input)?)?.decompress()?;
    save_image(&img, output)?;
    Ok(())
}

fn svals(a: &DenseMatrix, params: &DecompParams, seed: u64, out: &Option<PathBuf>) -> Result<()> {
    let rows = spectrum_table(a, params, seed)?;
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record(["i", "r_value", "sigma"])?;
    for r in rows {
        let rv = r.r_value.map(num).unwrap_or_default();
        w.write_record([r.index.to_string(), rv, num(r.sigma)])?;
    }
    w.flush()?;
    Ok(())
}

fn sweep(
    a: &DenseMatrix,
    eps: &[f64],
    base: &DecompParams,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<()> {
    let rows = epsilon_sweep(a, eps, base, seed)?;
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record(["epsilon", "rank", "rel_err"])?;
    for r in rows {
        w.write_record([num(r.epsilon), r.rank.to_string(), num(r.rel_err)])?;
    }
    w.flush()?;
    Ok(())
}

struct BenchRow {
    algo: &'static str,
    rank: usize,
    rel_err: f64,
    timing: Timing,
    gflops: Option<f64>,
}

fn bench(
    spec: &SpecFlags,
    algos: &[Algo],
    params: &DecompParams,
    seed: u64,
    repeat: usize,
    out: &Option<PathBuf>,
) -> Result<()> {
    let a = gen_matrix(&spectrum_spec(spec, seed)?)?.a;
    let (m, n) = a.shape();
    let norm = a.frob_norm();
    let err_of = |approx: &DenseMatrix| -> Result<f64> { Ok(a.sub(approx)?.frob_norm() / norm) };
    let algo_seed = seed.wrapping_add(1);

    let (f, t) = timed(repeat, || {
        Ok(eod_abe(&a, params, &mut RngState::new(algo_seed))?)
    })?;
    let d = f.rank;
    let mut rows = Vec::new();
    if algos.contains(&Algo::Eodabe) {
        let flops = flop_estimate(m, n, d, params.block_size.min(n), params.power_iters) as f64;
        rows.push(BenchRow {
            algo: "eodabe",
            rank: d,
            rel_err: err_of(&f.reconstruct())?,
            timing: t,
            gflops: (t.median > 0.0).then(|| flops / t.median / 1e9),
        });
    }
    if algos.contains(&Algo::Rsvd) && d > 0 {
        let p = FixedRankParams {
            target: d,
            power_iters: params.power_iters,
        };
        let (s, t) = timed(repeat, || {
            Ok(rsvd_fixed_rank(&a, &p, &mut RngState::new(algo_seed))?)
        })?;
        rows.push(BenchRow {
            algo: "rsvd",
            rank: d,
            rel_err: err_of(&s.reconstruct())?,
            timing: t,
            gflops: None,
        });
    }
    if algos.contains(&Algo::Svd) {
        let (s, t) = timed(repeat, || Ok(svd_reference(&a)?))?;
        rows.push(BenchRow {
            algo: "svd",
            rank: d,
            rel_err: err_of(&s.truncated(d).reconstruct())?,
            timing: t,
            gflops: None,
        });
    }

    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record([
        "algo",
        "n",
        "rank",
        "rel_err",
        "time_median_s",
        "time_min_s",
        "time_max_s",
        "gflops",
    ])?;
    for r in rows {
        w.write_record([
            r.algo.to_string(),
            n.to_string(),
            r.rank.to_string(),
            num(r.rel_err),
            num(r.timing.median),
            num(r.timing.min),
            num(r.timing.max),
            r.gflops.map(num).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
