//! Video decoding into luma planes and the non-overlapping patch grid.
//!
//! Three inputs are understood: YUV4MPEG2 (8-bit 4:2:0 or mono), raw planar
//! 8-bit YUV 4:2:0, and a directory of binary PGM (P5) files. Only luma is
//! kept; chroma samples are skipped while reading.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// One frame's 8-bit luminance samples, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LumaPlane {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl LumaPlane {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions(format!("{width}x{height}")));
        }
        if samples.len() != width * height {
            return Err(Error::InvalidDimensions(format!(
                "{} samples for a {width}x{height} plane",
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Builds a plane by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }
}

/// Decoded frames in display order, all of one size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSequence {
    frames: Vec<LumaPlane>,
}

impl FrameSequence {
    pub fn new(frames: Vec<LumaPlane>) -> Result<Self> {
        let Some(first) = frames.first() else {
            return Err(Error::TruncatedFrame { frame: 1 });
        };
        let (w, h) = (first.width, first.height);
        if let Some((idx, f)) = frames
            .iter()
            .enumerate()
            .find(|(_, f)| f.width != w || f.height != h)
        {
            return Err(Error::DimensionMismatch(format!(
                "frame {} is {}x{}, frame 1 is {w}x{h}",
                idx + 1,
                f.width,
                f.height
            )));
        }
        Ok(Self { frames })
    }

    pub fn frames(&self) -> &[LumaPlane] {
        &self.frames
    }

    /// T.
    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn width(&self) -> usize {
        self.frames[0].width
    }

    pub fn height(&self) -> usize {
        self.frames[0].height
    }

    /// 1-based frame access, `None` outside 1..=T.
    pub fn frame(&self, t: usize) -> Option<&LumaPlane> {
        t.checked_sub(1).and_then(|i| self.frames.get(i))
    }

    /// Frames `first..=last` (1-based, inclusive) as a new sequence.
    pub fn subsequence(&self, first: usize, last: usize) -> Result<Self> {
        if first == 0 || first > last || last > self.frames.len() {
            return Err(Error::InvalidConfig(format!(
                "frame range {first}-{last} outside 1-{}",
                self.frames.len()
            )));
        }
        Self::new(self.frames[first - 1..last].to_vec())
    }

    pub fn into_frames(self) -> Vec<LumaPlane> {
        self.frames
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputFormat {
    Y4m,
    RawYuv420p8,
    PgmSequence,
}

impl InputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            InputFormat::Y4m => "y4m",
            InputFormat::RawYuv420p8 => "yuv420p8",
            InputFormat::PgmSequence => "pgm-seq",
        }
    }

    /// Guesses the format from the path: directories are PGM sequences,
    /// otherwise the extension decides.
    pub fn infer(path: &Path) -> Option<Self> {
        if path.is_dir() {
            return Some(InputFormat::PgmSequence);
        }
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "y4m" => Some(InputFormat::Y4m),
            "yuv" => Some(InputFormat::RawYuv420p8),
            _ => None,
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "y4m" => Ok(InputFormat::Y4m),
            "yuv420p8" | "raw-yuv420p-8bit" => Ok(InputFormat::RawYuv420p8),
            "pgm-seq" | "grayscale-image-sequence" => Ok(InputFormat::PgmSequence),
            other => Err(Error::Unsupported(format!("input format {other:?}"))),
        }
    }
}

/// Decodes `source` into its luma planes.
///
/// `dims` is required for raw YUV and ignored otherwise.
pub fn load_sequence(
    source: &Path,
    format: InputFormat,
    dims: Option<(usize, usize)>,
) -> Result<FrameSequence> {
    match format {
        InputFormat::Y4m => {
            let bytes = fs::read(source).map_err(|e| Error::io(source, e))?;
            parse_y4m(&bytes)
        }
        InputFormat::RawYuv420p8 => {
            let (w, h) = dims.ok_or(Error::MissingDimensions)?;
            let bytes = fs::read(source).map_err(|e| Error::io(source, e))?;
            parse_raw_yuv420p(&bytes, w, h)
        }
        InputFormat::PgmSequence => load_pgm_sequence(source),
    }
}

/// Bytes of one 8-bit 4:2:0 frame; chroma planes round up for odd sizes.
pub fn yuv420_frame_len(width: usize, height: usize) -> usize {
    width * height + 2 * width.div_ceil(2) * height.div_ceil(2)
}

pub fn parse_raw_yuv420p(bytes: &[u8], width: usize, height: usize) -> Result<FrameSequence> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidDimensions(format!("{width}x{height}")));
    }
    let frame_len = yuv420_frame_len(width, height);
    let luma_len = width * height;
    let whole = bytes.len() / frame_len;
    if whole == 0 || !bytes.len().is_multiple_of(frame_len) {
        return Err(Error::TruncatedFrame { frame: whole + 1 });
    }
    let frames = bytes
        .chunks_exact(frame_len)
        .map(|chunk| LumaPlane::new(width, height, chunk[..luma_len].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    FrameSequence::new(frames)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Chroma {
    Yuv420,
    Mono,
}

struct Y4mHeader {
    width: usize,
    height: usize,
    chroma: Chroma,
}

fn parse_y4m_header(line: &str) -> Result<Y4mHeader> {
    let mut tokens = line.split(' ').filter(|t| !t.is_empty());
    if tokens.next() != Some("YUV4MPEG2") {
        return Err(Error::MalformedHeader("missing YUV4MPEG2 signature".into()));
    }
    let mut width = None;
    let mut height = None;
    let mut chroma = Chroma::Yuv420;
    for token in tokens {
        let (tag, value) = token.split_at(1);
        match tag {
            "W" => width = value.parse::<usize>().ok(),
            "H" => height = value.parse::<usize>().ok(),
            "C" => {
                chroma = match value {
                    "420" | "420jpeg" | "420paldv" | "420mpeg2" => Chroma::Yuv420,
                    "mono" => Chroma::Mono,
                    other => {
                        return Err(Error::Unsupported(format!(
                            "Y4M colorspace C{other} (8-bit 4:2:0 or mono only)"
                        )))
                    }
                }
            }
            // frame rate, interlacing, aspect, extensions: not needed
            _ => {}
        }
    }
    match (width, height) {
        (Some(w), Some(h)) if w > 0 && h > 0 => Ok(Y4mHeader {
            width: w,
            height: h,
            chroma,
        }),
        _ => Err(Error::MalformedHeader("missing or invalid W/H".into())),
    }
}

pub fn parse_y4m(bytes: &[u8]) -> Result<FrameSequence> {
    let header_end = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::MalformedHeader("no header line".into()))?;
    let header = std::str::from_utf8(&bytes[..header_end])
        .map_err(|_| Error::MalformedHeader("header is not ASCII".into()))?;
    let header = parse_y4m_header(header.trim_end_matches('\r'))?;
    let luma_len = header.width * header.height;
    let frame_len = match header.chroma {
        Chroma::Yuv420 => yuv420_frame_len(header.width, header.height),
        Chroma::Mono => luma_len,
    };

    let mut frames = Vec::new();
    let mut pos = header_end + 1;
    while pos < bytes.len() {
        let index = frames.len() + 1;
        let rest = &bytes[pos..];
        let marker_end = rest
            .iter()
            .position(|&b| b == b'\n')
            .ok_or(Error::TruncatedFrame { frame: index })?;
        if !rest[..marker_end].starts_with(b"FRAME") {
            return Err(Error::MalformedHeader(format!(
                "expected FRAME marker before frame {index}"
            )));
        }
        let data = &rest[marker_end + 1..];
        if data.len() < frame_len {
            return Err(Error::TruncatedFrame { frame: index });
        }
        frames.push(LumaPlane::new(
            header.width,
            header.height,
            data[..luma_len].to_vec(),
        )?);
        pos += marker_end + 1 + frame_len;
    }
    FrameSequence::new(frames)
}

/// Writes `seq` as an 8-bit 4:2:0 Y4M file with neutral chroma.
pub fn write_y4m(path: &Path, seq: &FrameSequence, fps: u32) -> Result<()> {
    let (w, h) = (seq.width(), seq.height());
    let chroma = vec![128u8; 2 * w.div_ceil(2) * h.div_ceil(2)];
    let mut out = Vec::with_capacity(64 + seq.frame_count() * (6 + yuv420_frame_len(w, h)));
    writeln!(out, "YUV4MPEG2 W{w} H{h} F{fps}:1 Ip A1:1 C420jpeg").expect("vec write");
    for frame in seq.frames() {
        out.extend_from_slice(b"FRAME\n");
        out.extend_from_slice(frame.samples());
        out.extend_from_slice(&chroma);
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Writes `seq` as raw planar YUV 4:2:0 with neutral chroma.
pub fn write_raw_yuv420p(path: &Path, seq: &FrameSequence) -> Result<()> {
    let (w, h) = (seq.width(), seq.height());
    let chroma = vec![128u8; 2 * w.div_ceil(2) * h.div_ceil(2)];
    let mut out = Vec::with_capacity(seq.frame_count() * yuv420_frame_len(w, h));
    for frame in seq.frames() {
        out.extend_from_slice(frame.samples());
        out.extend_from_slice(&chroma);
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Binary PGM (P5, maxval 255).
pub fn encode_pgm(width: usize, height: usize, samples: &[u8]) -> Vec<u8> {
    debug_assert_eq!(samples.len(), width * height);
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(samples);
    out
}

pub fn decode_pgm(bytes: &[u8]) -> Result<LumaPlane> {
    let mut pos = 0;
    let mut fields = [0usize; 3];
    if bytes.get(..2) != Some(b"P5") {
        return Err(Error::MalformedHeader("not a binary PGM (P5)".into()));
    }
    pos += 2;
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader("bad PGM header field".into()))?;
    }
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Unsupported(format!(
            "PGM maxval {maxval} (8-bit only)"
        )));
    }
    // exactly one whitespace byte separates header and raster
    pos += 1;
    let len = width * height;
    let raster = bytes
        .get(pos..pos + len)
        .ok_or(Error::TruncatedFrame { frame: 1 })?;
    LumaPlane::new(width, height, raster.to_vec())
}

/// Reads every `*.pgm` in `dir`, ordered lexicographically by file name.
pub fn load_pgm_sequence(dir: &Path) -> Result<FrameSequence> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_pgm = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
        if is_pgm && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if paths.is_empty() {
        return Err(Error::TruncatedFrame { frame: 1 });
    }
    let frames = paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let bytes = fs::read(p).map_err(|e| Error::io(p, e))?;
            decode_pgm(&bytes).map_err(|e| match e {
                Error::TruncatedFrame { .. } => Error::TruncatedFrame { frame: i + 1 },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FrameSequence::new(frames)
}

/// Partition of a frame into `cols x rows` non-overlapping `patch_w x patch_h`
/// patches anchored at the top-left corner. Border pixels that do not fill a
/// whole patch belong to no patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatchGrid {
    pub patch_w: usize,
    pub patch_h: usize,
    pub cols: usize,
    pub rows: usize,
    pub frame_width: usize,
    pub frame_height: usize,
}

impl PatchGrid {
    pub fn len(&self) -> usize {
        self.cols * self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Top-left pixel `(y, x)` of patch `(row, col)`.
    pub fn origin(&self, row: usize, col: usize) -> (usize, usize) {
        (row * self.patch_h, col * self.patch_w)
    }

    /// Row-major cell index.
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index / self.cols, index % self.cols)
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).map(move |c| (r, c)))
    }

    pub fn check_plane(&self, plane: &LumaPlane) -> Result<()> {
        if plane.width != self.frame_width || plane.height != self.frame_height {
            return Err(Error::DimensionMismatch(format!(
                "plane is {}x{}, grid was sliced for {}x{}",
                plane.width, plane.height, self.frame_width, self.frame_height
            )));
        }
        Ok(())
    }
}

pub fn slice_grid(
    width: usize,
    height: usize,
    patch_w: usize,
    patch_h: usize,
) -> Result<PatchGrid> {
    if width == 0 || height == 0 || patch_w == 0 || patch_h == 0 {
        return Err(Error::InvalidDimensions(format!(
            "frame {width}x{height}, patch {patch_w}x{patch_h}"
        )));
    }
    if patch_w > width || patch_h > height {
        return Err(Error::PatchTooLarge {
            patch_w,
            patch_h,
            width,
            height,
        });
    }
    Ok(PatchGrid {
        patch_w,
        patch_h,
        cols: width / patch_w,
        rows: height / patch_h,
        frame_width: width,
        frame_height: height,
    })
}

/// Copies patch `(row, col)` out of `plane`, row-major.
pub fn extract_patch(
    plane: &LumaPlane,
    grid: &PatchGrid,
    row: usize,
    col: usize,
) -> Result<Vec<u8>> {
    check_cell(grid, row, col)?;
    let (y0, x0) = grid.origin(row, col);
    let mut out = Vec::with_capacity(grid.patch_w * grid.patch_h);
    for y in y0..y0 + grid.patch_h {
        out.extend_from_slice(&plane.row(y)[x0..x0 + grid.patch_w]);
    }
    Ok(out)
}

/// Like [`extract_patch`] but widens into a caller-provided buffer.
pub(crate) fn extract_patch_f64(
    plane: &LumaPlane,
    grid: &PatchGrid,
    row: usize,
    col: usize,
    out: &mut [f64],
) {
    let (y0, x0) = grid.origin(row, col);
    let w = grid.patch_w;
    for (dy, dst) in out.chunks_exact_mut(w).enumerate() {
        let src = &plane.row(y0 + dy)[x0..x0 + w];
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = f64::from(s);
        }
    }
}

pub(crate) fn check_cell(grid: &PatchGrid, row: usize, col: usize) -> Result<()> {
    if row >= grid.rows || col >= grid.cols {
        return Err(Error::PatchOutOfRange {
            row,
            col,
            rows: grid.rows,
            cols: grid.cols,
        });
    }
    Ok(())
}
