//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or data error, 2 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dct::dct2d;
use crate::error::Error;
use crate::features::Scorer;
use crate::frame_io::{load_sequence, slice_grid, FrameSequence, InputFormat};
use crate::heatmap::{write_heatmap, Metric};
use crate::manifest::{read_manifest, summarize, write_manifest, InputDescriptor};
use crate::oracle::{run_oracle_checks, DctFn, DEFAULT_TRIALS};
use crate::sampler::{sample, Method, SamplerConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "eps",
    version,
    about = "Select informative training patches from a video"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every patch and write a selection manifest.
    Sample(SampleArgs),
    /// Write per-frame SF/TF heatmaps as PGM images.
    Heatmap(HeatmapArgs),
    /// Summarize an existing manifest.
    Stats(StatsArgs),
    /// Cross-check the DCT and feature kernels against direct evaluation.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// y4m, yuv420p8 or pgm-seq; inferred from the path when omitted.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub patch_size: usize,
    #[arg(long)]
    pub patch_w: Option<usize>,
    #[arg(long)]
    pub patch_h: Option<usize>,
    /// Inclusive 1-based range `A-B` (or a single frame `A`).
    #[arg(long)]
    pub frames: Option<String>,
    /// Worker threads: a positive count or `max`.
    #[arg(long)]
    pub threads: Option<String>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 2)]
    pub clusters: usize,
    /// eps, random or top-fraction.
    #[arg(long, default_value = "eps")]
    pub method: String,
    #[arg(long)]
    pub fraction: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Include every patch's SF/TF in the manifest.
    #[arg(long)]
    pub emit_scores: bool,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output path prefix; files are `<prefix>_f<t>_sf.pgm` / `_tf.pgm`.
    #[arg(long)]
    pub heatmap_prefix: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub upscale: usize,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Comma-separated `WxH` list.
    #[arg(long, default_value = "4x4,8x8,16x16,64x64,16x8")]
    pub sizes: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MissingDimensions => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_dct(args, out, err, dct2d)
}

/// [`run`] with the transform checked by `oracle-check` swapped out.
#[doc(hidden)]
pub fn run_with_dct<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, dct: DctFn) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Sample(a) => with_threads(a.input.threads.as_deref(), out, err, |o, e| {
            run_sample(&a, o, e)
        }),
        Command::Heatmap(a) => with_threads(a.input.threads.as_deref(), out, err, |o, e| {
            run_heatmap(&a, o, e)
        }),
        Command::Stats(a) => run_stats(&a, out),
        Command::OracleCheck(a) => run_oracle_check(&a, out, dct),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

/// Runs `f` on a dedicated pool. Output is buffered inside the pool and
/// forwarded afterwards.
fn with_threads(
    threads: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
    f: impl FnOnce(&mut Vec<u8>, &mut Vec<u8>) -> CmdResult + Send,
) -> CmdResult {
    let count = match threads {
        None | Some("max") => 0,
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => {
                return Err(Failure::Usage(format!(
                    "--threads expects a positive count or max, got {s:?}"
                )))
            }
        },
    };
    // 0 lets rayon use the available parallelism
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(count)
        .build()
        .map_err(|e| Failure::Runtime(format!("thread pool: {e}")))?;
    let mut out_buf = Vec::new();
    let mut err_buf = Vec::new();
    let result = pool.install(|| f(&mut out_buf, &mut err_buf));
    let _ = out.write_all(&out_buf);
    let _ = err.write_all(&err_buf);
    result
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--frames expects A-B with 1 <= A <= B, got {s:?}"));
    let (a, b) = match s.split_once('-') {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            (a, a)
        }
    };
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

struct LoadedInput {
    seq: FrameSequence,
    format: InputFormat,
    range: (usize, usize),
    patch: (usize, usize),
}

fn load_input(args: &InputArgs) -> Result<LoadedInput, Failure> {
    let format = match &args.format {
        Some(f) => f
            .parse::<InputFormat>()
            .map_err(|e| Failure::Usage(e.to_string()))?,
        None => InputFormat::infer(&args.input).ok_or_else(|| {
            Failure::Usage(format!(
                "cannot infer the format of {}; pass --format",
                args.input.display()
            ))
        })?,
    };
    let dims = match (args.width, args.height) {
        (Some(w), Some(h)) => Some((w, h)),
        (None, None) => None,
        _ => return Err(Failure::Usage("--width and --height go together".into())),
    };
    if format == InputFormat::RawYuv420p8 && dims.is_none() {
        return Err(Failure::Usage(
            "raw input requires dimensions (--width/--height)".into(),
        ));
    }
    let patch = (
        args.patch_w.unwrap_or(args.patch_size),
        args.patch_h.unwrap_or(args.patch_size),
    );
    if patch.0 == 0 || patch.1 == 0 {
        return Err(Failure::Usage("patch size must be positive".into()));
    }
    let requested = args.frames.as_deref().map(parse_range).transpose()?;
    let seq = load_sequence(&args.input, format, dims)?;
    let range = requested.unwrap_or((1, seq.frame_count()));
    if range.1 > seq.frame_count() {
        return Err(Failure::Usage(format!(
            "--frames {}-{} outside 1-{}",
            range.0,
            range.1,
            seq.frame_count()
        )));
    }
    Ok(LoadedInput {
        seq,
        format,
        range,
        patch,
    })
}

fn sampler_config(args: &SampleArgs, patch: (usize, usize)) -> Result<SamplerConfig, Failure> {
    let method: Method = args
        .method
        .parse()
        .map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let config = SamplerConfig {
        patch_w: patch.0,
        patch_h: patch.1,
        n_clusters: args.clusters,
        method,
        fraction: args.fraction,
        seed: args.seed,
    };
    config
        .validate()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(config)
}

fn run_sample(args: &SampleArgs, out: &mut Vec<u8>, _err: &mut Vec<u8>) -> CmdResult {
    let patch = (
        args.input.patch_w.unwrap_or(args.input.patch_size),
        args.input.patch_h.unwrap_or(args.input.patch_size),
    );
    let config = sampler_config(args, patch)?;
    let loaded = load_input(&args.input)?;
    let (first, last) = loaded.range;
    let seq = loaded.seq.subsequence(first, last)?;

    let input = InputDescriptor {
        path: args.input.input.display().to_string(),
        format: loaded.format.to_string(),
        width: seq.width(),
        height: seq.height(),
        frames: seq.frame_count(),
        first_frame: first,
    };
    let manifest = sample(&seq, &config, args.emit_scores)?.with_input(input);
    write_manifest(&manifest, &args.out)?;
    if !args.quiet {
        let _ = write!(out, "{}", summarize(&manifest));
    }
    Ok(EXIT_OK)
}

fn heatmap_path(prefix: &Path, frame: usize, metric: Metric) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!("_f{frame}_{metric}.pgm"));
    PathBuf::from(name)
}

fn run_heatmap(args: &HeatmapArgs, out: &mut Vec<u8>, err: &mut Vec<u8>) -> CmdResult {
    if args.upscale == 0 {
        return Err(Failure::Usage("--upscale must be at least 1".into()));
    }
    let loaded = load_input(&args.input)?;
    let seq = &loaded.seq;
    let (first, last) = loaded.range;
    let grid = slice_grid(seq.width(), seq.height(), loaded.patch.0, loaded.patch.1)?;
    let scorer = Scorer::new(grid)?;

    // TF of frame t always uses source frame t - 1, even if it precedes the range
    let mut previous = match first {
        1 => None,
        t => Some(scorer.frame_coefficients(&seq.frames()[t - 2])?),
    };
    let mut written = 0;
    for t in first..=last {
        let current = scorer.frame_coefficients(&seq.frames()[t - 1])?;
        let field = scorer.score_coefficients(t, &current, previous.as_deref())?;
        write_heatmap(
            &field,
            Metric::Sf,
            &heatmap_path(&args.heatmap_prefix, t, Metric::Sf),
            args.upscale,
        )?;
        written += 1;
        if t == 1 {
            let _ = writeln!(
                err,
                "warning: frame 1 has no previous frame; skipping its TF heatmap"
            );
        } else {
            write_heatmap(
                &field,
                Metric::Tf,
                &heatmap_path(&args.heatmap_prefix, t, Metric::Tf),
                args.upscale,
            )?;
            written += 1;
        }
        previous = Some(current);
    }
    let _ = writeln!(out, "wrote {written} heatmaps");
    Ok(EXIT_OK)
}

fn run_stats(args: &StatsArgs, out: &mut dyn Write) -> CmdResult {
    let manifest = read_manifest(&args.manifest)?;
    let _ = write!(out, "{}", summarize(&manifest));
    Ok(EXIT_OK)
}

fn parse_sizes(s: &str) -> Result<Vec<(usize, usize)>, Failure> {
    s.split(',')
        .map(|item| {
            let item = item.trim();
            let parsed = item
                .split_once(['x', 'X'])
                .and_then(|(w, h)| Some((w.parse::<usize>().ok()?, h.parse::<usize>().ok()?)));
            match parsed {
                Some((w, h)) if w > 0 && h > 0 => Ok((w, h)),
                _ => Err(Failure::Usage(format!(
                    "--sizes expects WxH entries, got {item:?}"
                ))),
            }
        })
        .collect()
}

fn run_oracle_check(args: &OracleArgs, out: &mut dyn Write, dct: DctFn) -> CmdResult {
    if args.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let sizes = parse_sizes(&args.sizes)?;
    let reports = run_oracle_checks(&sizes, args.trials, args.seed, dct)?;
    for r in &reports {
        let _ = writeln!(out, "{r}");
    }
    let worst = reports
        .iter()
        .map(|r| {
            r.dct_max_abs
                .max(r.parseval_max_rel)
                .max(r.identity_max_abs)
        })
        .fold(0.0, f64::max);
    let passed = reports.iter().all(|r| r.passed());
    let _ = writeln!(
        out,
        "max deviation {worst:.3e} (tolerance 1e-9): {}",
        if passed { "PASS" } else { "FAIL" }
    );
    Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_ranges() {
        assert!(matches!(parse_range("1-3"), Ok((1, 3))));
        assert!(matches!(parse_range("4"), Ok((4, 4))));
        assert!(parse_range("0-3").is_err());
        assert!(parse_range("3-1").is_err());
        assert!(parse_range("a-b").is_err());
    }

    #[test]
    fn size_lists() {
        assert_eq!(parse_sizes("16x8, 4X4").ok(), Some(vec![(16, 8), (4, 4)]));
        assert!(parse_sizes("16").is_err());
        assert!(parse_sizes("0x4").is_err());
    }

    #[test]
    fn heatmap_names() {
        assert_eq!(
            heatmap_path(Path::new("out/clip"), 3, Metric::Tf),
            PathBuf::from("out/clip_f3_tf.pgm")
        );
    }
}
