//! Selection manifests: the line-oriented `eps-manifest v1` text format,
//! its reader, and the human-readable summary.
//!
//! ```text
//! eps-manifest v1
//! config
//!   method eps
//!   patch 64 64
//!   clusters 2
//!   fraction -
//!   seed -
//!   path clips/v.y4m
//!   format y4m
//!   dims 960 540
//!   frames 30
//!   first_frame 1
//! grid
//!   cols 15
//!   rows 8
//! frame 1
//!   sf_threshold 1843.25012
//!   tf_threshold -
//!   select 0 4
//!   select 2 11
//! ...
//! stats
//!   total_candidates 3600
//!   total_selected 630
//!   fraction 0.175000000
//!   selected_min 0
//!   selected_max 30
//!   selected_mean 21.0000000
//! ```
//!
//! With score emission on, each frame block also lists
//! `score <row> <col> <sf> <tf|->` for every grid cell in row-major order,
//! after its `select` lines. Reals are printed in plain decimal with nine
//! significant digits; `-` marks an absent value.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::frame_io::{FrameSequence, PatchGrid};
use crate::sampler::{FrameSelection, Method, SamplerConfig};

pub const MANIFEST_HEADER: &str = "eps-manifest v1";

/// Where the frames came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDescriptor {
    pub path: String,
    pub format: String,
    pub width: usize,
    pub height: usize,
    /// Frames sampled (T).
    pub frames: usize,
    /// 1-based index in the source of the first sampled frame.
    pub first_frame: usize,
}

impl InputDescriptor {
    pub fn in_memory(seq: &FrameSequence) -> Self {
        Self {
            path: "-".into(),
            format: "memory".into(),
            width: seq.width(),
            height: seq.height(),
            frames: seq.frame_count(),
            first_frame: 1,
        }
    }

    pub(crate) fn for_grid(grid: &PatchGrid) -> Self {
        Self {
            path: "-".into(),
            format: "memory".into(),
            width: grid.frame_width,
            height: grid.frame_height,
            frames: 0,
            first_frame: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestStats {
    /// T * C * L.
    pub total_candidates: usize,
    pub total_selected: usize,
    pub fraction: f64,
    pub selected_min: usize,
    pub selected_max: usize,
    pub selected_mean: f64,
}

impl ManifestStats {
    pub fn compute(grid: &PatchGrid, frames: &[FrameSelection]) -> Self {
        let counts = frames.iter().map(FrameSelection::count);
        let total_candidates = frames.len() * grid.len();
        let total_selected: usize = counts.clone().sum();
        Self {
            total_candidates,
            total_selected,
            fraction: if total_candidates == 0 {
                0.0
            } else {
                total_selected as f64 / total_candidates as f64
            },
            selected_min: counts.clone().min().unwrap_or(0),
            selected_max: counts.max().unwrap_or(0),
            selected_mean: if frames.is_empty() {
                0.0
            } else {
                total_selected as f64 / frames.len() as f64
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionManifest {
    pub config: SamplerConfig,
    pub input: InputDescriptor,
    pub grid: PatchGrid,
    /// Ascending by frame index, covering `1..=T`.
    pub frames: Vec<FrameSelection>,
    pub stats: ManifestStats,
}

impl SelectionManifest {
    pub fn new(
        config: SamplerConfig,
        input: InputDescriptor,
        grid: PatchGrid,
        frames: Vec<FrameSelection>,
    ) -> Self {
        let stats = ManifestStats::compute(&grid, &frames);
        Self {
            config,
            input,
            grid,
            frames,
            stats,
        }
    }

    pub fn with_input(mut self, input: InputDescriptor) -> Self {
        self.input = input;
        self
    }

    /// Canonical text form; identical manifests give identical bytes.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let i = &self.input;
        // writing to a String cannot fail
        let _ = writeln!(out, "{MANIFEST_HEADER}");
        let _ = writeln!(out, "config");
        let _ = writeln!(out, "  method {}", c.method);
        let _ = writeln!(out, "  patch {} {}", c.patch_w, c.patch_h);
        let _ = writeln!(out, "  clusters {}", c.n_clusters);
        let _ = writeln!(out, "  fraction {}", opt_real(c.fraction));
        let _ = writeln!(
            out,
            "  seed {}",
            c.seed.map_or_else(|| "-".to_string(), |s| s.to_string())
        );
        let _ = writeln!(out, "  path {}", i.path);
        let _ = writeln!(out, "  format {}", i.format);
        let _ = writeln!(out, "  dims {} {}", i.width, i.height);
        let _ = writeln!(out, "  frames {}", i.frames);
        let _ = writeln!(out, "  first_frame {}", i.first_frame);
        let _ = writeln!(out, "grid");
        let _ = writeln!(out, "  cols {}", self.grid.cols);
        let _ = writeln!(out, "  rows {}", self.grid.rows);
        for f in &self.frames {
            let _ = writeln!(out, "frame {}", f.frame);
            let _ = writeln!(out, "  sf_threshold {}", opt_real(f.sf_threshold));
            let _ = writeln!(out, "  tf_threshold {}", opt_real(f.tf_threshold));
            for (r, col) in &f.selected {
                let _ = writeln!(out, "  select {r} {col}");
            }
            if let Some(scores) = &f.scores {
                for (idx, (sf, tf)) in scores.iter().enumerate() {
                    let (r, col) = self.grid.coords(idx);
                    let _ = writeln!(
                        out,
                        "  score {r} {col} {} {}",
                        format_real(*sf),
                        opt_real(*tf)
                    );
                }
            }
        }
        let s = &self.stats;
        let _ = writeln!(out, "stats");
        let _ = writeln!(out, "  total_candidates {}", s.total_candidates);
        let _ = writeln!(out, "  total_selected {}", s.total_selected);
        let _ = writeln!(out, "  fraction {}", format_real(s.fraction));
        let _ = writeln!(out, "  selected_min {}", s.selected_min);
        let _ = writeln!(out, "  selected_max {}", s.selected_max);
        let _ = writeln!(out, "  selected_mean {}", format_real(s.selected_mean));
        out
    }

    /// Copy with every real rounded the way [`Self::to_text`] prints it, so
    /// `parse(m.to_text()) == m.canonicalized()`.
    pub fn canonicalized(&self) -> Self {
        let mut m = self.clone();
        m.config.fraction = m.config.fraction.map(round_sig9);
        for f in &mut m.frames {
            f.sf_threshold = f.sf_threshold.map(round_sig9);
            f.tf_threshold = f.tf_threshold.map(round_sig9);
            if let Some(scores) = &mut f.scores {
                for (sf, tf) in scores.iter_mut() {
                    *sf = round_sig9(*sf);
                    *tf = tf.map(round_sig9);
                }
            }
        }
        m.stats.fraction = round_sig9(m.stats.fraction);
        m.stats.selected_mean = round_sig9(m.stats.selected_mean);
        m
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).manifest()
    }
}

/// Writes the canonical text form of `manifest` to `path`.
pub fn write_manifest(manifest: &SelectionManifest, path: &Path) -> Result<()> {
    fs::write(path, manifest.to_text()).map_err(|e| Error::io(path, e))
}

pub fn read_manifest(path: &Path) -> Result<SelectionManifest> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    SelectionManifest::parse(&text)
}

/// Plain decimal with nine significant digits; zero prints as `0`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    // scientific formatting fixes the rounding and the decimal exponent
    let sci = format!("{x:.8e}");
    let (_, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let rounded: f64 = sci.parse().expect("round trip");
    let decimals = (8 - exp).max(0) as usize;
    format!("{rounded:.decimals$}")
}

/// The value [`format_real`] denotes.
pub fn round_sig9(x: f64) -> f64 {
    format_real(x).parse().expect("formatted real parses")
}

fn opt_real(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), format_real)
}

struct Parser<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    line_no: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().enumerate().peekable(),
            line_no: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::ManifestParse {
            line: self.line_no,
            msg: msg.into(),
        }
    }

    fn next_line(&mut self) -> Result<&'a str> {
        match self.lines.next() {
            Some((idx, line)) => {
                self.line_no = idx + 1;
                Ok(line)
            }
            None => {
                self.line_no += 1;
                Err(self.err("unexpected end of manifest"))
            }
        }
    }

    /// Next indented `key value...` line with the expected key.
    fn field(&mut self, key: &str) -> Result<&'a str> {
        let line = self.next_line()?;
        let body = line
            .strip_prefix("  ")
            .ok_or_else(|| self.err(format!("expected indented field {key:?}")))?;
        match body.split_once(' ') {
            Some((k, v)) if k == key => Ok(v),
            _ => Err(self.err(format!("expected field {key:?}, found {body:?}"))),
        }
    }

    fn section(&mut self, name: &str) -> Result<()> {
        let line = self.next_line()?;
        if line == name {
            Ok(())
        } else {
            Err(self.err(format!("expected section {name:?}, found {line:?}")))
        }
    }

    fn peek_indented(&mut self, key: &str) -> bool {
        self.lines
            .peek()
            .and_then(|(_, l)| l.strip_prefix("  "))
            .is_some_and(|b| b.split(' ').next() == Some(key))
    }

    fn usize_of(&self, s: &str) -> Result<usize> {
        s.parse()
            .map_err(|_| self.err(format!("bad integer {s:?}")))
    }

    fn real_of(&self, s: &str) -> Result<f64> {
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err(format!("bad number {s:?}"))),
        }
    }

    fn opt_real_of(&self, s: &str) -> Result<Option<f64>> {
        if s == "-" {
            Ok(None)
        } else {
            self.real_of(s).map(Some)
        }
    }

    fn pair(&self, s: &str) -> Result<(usize, usize)> {
        let (a, b) = s
            .split_once(' ')
            .ok_or_else(|| self.err(format!("expected two integers, found {s:?}")))?;
        Ok((self.usize_of(a)?, self.usize_of(b)?))
    }

    fn usize_field(&mut self, key: &str) -> Result<usize> {
        let v = self.field(key)?;
        self.usize_of(v)
    }

    fn manifest(mut self) -> Result<SelectionManifest> {
        let first = self.lines.next().map(|(_, l)| l).unwrap_or("");
        self.line_no = 1;
        if first != MANIFEST_HEADER {
            return Err(Error::ManifestVersion(first.to_string()));
        }

        self.section("config")?;
        let method: Method = {
            let v = self.field("method")?;
            v.parse()
                .map_err(|_| self.err(format!("unknown method {v:?}")))?
        };
        let patch = self.field("patch")?;
        let (patch_w, patch_h) = self.pair(patch)?;
        let n_clusters = self.usize_field("clusters")?;
        let fraction = {
            let v = self.field("fraction")?;
            self.opt_real_of(v)?
        };
        let seed = match self.field("seed")? {
            "-" => None,
            s => Some(
                s.parse::<u64>()
                    .map_err(|_| self.err(format!("bad seed {s:?}")))?,
            ),
        };
        let config = SamplerConfig {
            patch_w,
            patch_h,
            n_clusters,
            method,
            fraction,
            seed,
        };
        config.validate().map_err(|e| self.err(e.to_string()))?;

        let path = self.field("path")?.to_string();
        let format = self.field("format")?.to_string();
        let dims = self.field("dims")?;
        let (width, height) = self.pair(dims)?;
        let frames_declared = self.usize_field("frames")?;
        let first_frame = self.usize_field("first_frame")?;
        let input = InputDescriptor {
            path,
            format,
            width,
            height,
            frames: frames_declared,
            first_frame,
        };

        self.section("grid")?;
        let cols = self.usize_field("cols")?;
        let rows = self.usize_field("rows")?;
        if cols == 0 || rows == 0 || cols * patch_w > width || rows * patch_h > height {
            return Err(self.err("grid does not fit the declared dimensions"));
        }
        let grid = PatchGrid {
            patch_w,
            patch_h,
            cols,
            rows,
            frame_width: width,
            frame_height: height,
        };

        let mut frames = Vec::new();
        loop {
            let line = self.next_line()?;
            if line == "stats" {
                break;
            }
            let t = line.strip_prefix("frame ").ok_or_else(|| {
                self.err(format!("expected frame block or stats, found {line:?}"))
            })?;
            let t = self.usize_of(t)?;
            if t != frames.len() + 1 {
                return Err(self.err(format!(
                    "frame {t} out of order, expected {}",
                    frames.len() + 1
                )));
            }
            frames.push(self.frame_block(t, &grid)?);
        }
        if frames.len() != frames_declared {
            return Err(self.err(format!(
                "{} frame blocks, config declares {frames_declared}",
                frames.len()
            )));
        }

        let stats = ManifestStats {
            total_candidates: self.usize_field("total_candidates")?,
            total_selected: self.usize_field("total_selected")?,
            fraction: {
                let v = self.field("fraction")?;
                self.real_of(v)?
            },
            selected_min: self.usize_field("selected_min")?,
            selected_max: self.usize_field("selected_max")?,
            selected_mean: {
                let v = self.field("selected_mean")?;
                self.real_of(v)?
            },
        };
        if let Some((idx, line)) = self.lines.next() {
            self.line_no = idx + 1;
            return Err(self.err(format!("trailing content {line:?}")));
        }

        let manifest = SelectionManifest::new(config, input, grid, frames);
        let expected = manifest.canonicalized().stats;
        if stats != expected {
            return Err(self.err("stats block disagrees with the frame blocks"));
        }
        Ok(manifest.canonicalized())
    }

    fn frame_block(&mut self, frame: usize, grid: &PatchGrid) -> Result<FrameSelection> {
        let sf_threshold = {
            let v = self.field("sf_threshold")?;
            self.opt_real_of(v)?
        };
        let tf_threshold = {
            let v = self.field("tf_threshold")?;
            self.opt_real_of(v)?
        };
        let mut selected: Vec<(usize, usize)> = Vec::new();
        while self.peek_indented("select") {
            let v = self.field("select")?;
            let cell = self.pair(v)?;
            if cell.0 >= grid.rows || cell.1 >= grid.cols {
                return Err(self.err(format!("patch {cell:?} outside the grid")));
            }
            if selected.last().is_some_and(|&last| last >= cell) {
                return Err(self.err("select lines must be strictly ascending by (row, col)"));
            }
            selected.push(cell);
        }
        let mut scores = Vec::new();
        while self.peek_indented("score") {
            let v = self.field("score")?;
            let parts: Vec<&str> = v.split(' ').collect();
            let [r, c, sf, tf] = parts[..] else {
                return Err(self.err("score lines need row, col, sf and tf"));
            };
            let cell = (self.usize_of(r)?, self.usize_of(c)?);
            if cell != grid.coords(scores.len()) || scores.len() >= grid.len() {
                return Err(self.err("score lines must cover the grid in row-major order"));
            }
            scores.push((self.real_of(sf)?, self.opt_real_of(tf)?));
        }
        if !scores.is_empty() && scores.len() != grid.len() {
            return Err(self.err(format!(
                "{} score lines for {} patches",
                scores.len(),
                grid.len()
            )));
        }
        Ok(FrameSelection {
            frame,
            selected,
            sf_threshold,
            tf_threshold,
            scores: (!scores.is_empty()).then_some(scores),
        })
    }
}

/// Percentage with two decimals and a spaced sign, e.g. `17.50 %`.
pub fn format_percent(fraction: f64) -> String {
    format!("{:.2} %", fraction * 100.0)
}

/// Human-readable report: per-frame counts and thresholds, then totals.
pub fn summarize(manifest: &SelectionManifest) -> String {
    let mut out = String::new();
    let c = &manifest.config;
    let i = &manifest.input;
    let g = &manifest.grid;
    let s = &manifest.stats;
    let method = match c.method {
        Method::Eps => format!("eps, {} clusters", c.n_clusters),
        Method::Random => format!(
            "random, fraction {}, seed {}",
            opt_real(c.fraction),
            c.seed.unwrap_or_default()
        ),
        Method::TopFraction => format!("top-fraction, fraction {}", opt_real(c.fraction)),
    };
    let _ = writeln!(out, "method:  {method}");
    let _ = writeln!(
        out,
        "input:   {} ({}, {}x{}, {} frames from frame {})",
        i.path, i.format, i.width, i.height, i.frames, i.first_frame
    );
    let _ = writeln!(
        out,
        "grid:    {} x {} patches of {}x{} ({} per frame)",
        g.cols,
        g.rows,
        g.patch_w,
        g.patch_h,
        g.len()
    );
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>7} {:>9} {:>16} {:>16}",
        "frame", "selected", "sf_threshold", "tf_threshold"
    );
    for f in &manifest.frames {
        let _ = writeln!(
            out,
            "{:>7} {:>9} {:>16} {:>16}",
            f.frame,
            f.count(),
            opt_real(f.sf_threshold),
            opt_real(f.tf_threshold)
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "per frame: min {}, max {}, mean {:.2}",
        s.selected_min, s.selected_max, s.selected_mean
    );
    let _ = writeln!(
        out,
        "selected {} of {} patches: {}",
        s.total_selected,
        s.total_candidates,
        format_percent(s.fraction)
    );
    out
}
