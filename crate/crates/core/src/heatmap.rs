//! Per-frame SF/TF heatmaps as 8-bit PGM images, one pixel per patch.

use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::ScoreField;
use crate::frame_io::encode_pgm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Sf,
    Tf,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Sf => "sf",
            Metric::Tf => "tf",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rendered grayscale heatmap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heatmap {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Heatmap {
    pub fn to_pgm(&self) -> Vec<u8> {
        encode_pgm(self.width, self.height, &self.pixels)
    }
}

/// Min-max normalizes `metric` over the frame to `0..=255` and lays the
/// values out on the patch grid; each cell becomes an `upscale x upscale`
/// square. A frame whose scores are all equal renders black.
pub fn render_heatmap(field: &ScoreField, metric: Metric, upscale: usize) -> Result<Heatmap> {
    if upscale == 0 {
        return Err(Error::InvalidConfig("upscale must be at least 1".into()));
    }
    let values = match metric {
        Metric::Sf => field.sf_values(),
        Metric::Tf => field.tf_values().ok_or(Error::NoTemporalScores)?,
    };
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    let levels: Vec<u8> = values
        .iter()
        .map(|&v| {
            if range > 0.0 {
                (255.0 * (v - min) / range).round().clamp(0.0, 255.0) as u8
            } else {
                0
            }
        })
        .collect();

    let grid = &field.grid;
    let width = grid.cols * upscale;
    let height = grid.rows * upscale;
    let mut pixels = Vec::with_capacity(width * height);
    for row in 0..grid.rows {
        let line: Vec<u8> = (0..grid.cols)
            .flat_map(|col| std::iter::repeat_n(levels[grid.index(row, col)], upscale))
            .collect();
        for _ in 0..upscale {
            pixels.extend_from_slice(&line);
        }
    }
    Ok(Heatmap {
        width,
        height,
        pixels,
    })
}

pub fn write_heatmap(
    field: &ScoreField,
    metric: Metric,
    path: &Path,
    upscale: usize,
) -> Result<()> {
    let map = render_heatmap(field, metric, upscale)?;
    fs::write(path, map.to_pgm()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::PatchScore;
    use crate::frame_io::PatchGrid;

    fn field(frame: usize, cols: usize, rows: usize, sf: impl Fn(usize) -> f64) -> ScoreField {
        let grid = PatchGrid {
            patch_w: 64,
            patch_h: 64,
            cols,
            rows,
            frame_width: cols * 64,
            frame_height: rows * 64,
        };
        ScoreField {
            frame,
            grid,
            scores: (0..cols * rows)
                .map(|i| PatchScore {
                    frame,
                    row: i / cols,
                    col: i % cols,
                    sf: sf(i),
                    tf: (frame > 1).then_some(1.0),
                })
                .collect(),
        }
    }

    #[test]
    fn uniform_frame_is_black() {
        let f = field(1, 15, 8, |_| 42.0);
        let map = render_heatmap(&f, Metric::Sf, 1).unwrap();
        assert_eq!((map.width, map.height), (15, 8));
        assert!(map.pixels.iter().all(|&p| p == 0));
    }

    #[test]
    fn extremes_map_to_endpoints() {
        let f = field(1, 4, 2, |i| if i == 5 { 10.0 } else { i as f64 % 3.0 });
        let map = render_heatmap(&f, Metric::Sf, 1).unwrap();
        assert_eq!(map.pixels[5], 255);
        assert_eq!(map.pixels[0], 0);
        assert_eq!(map.pixels[1], 26); // round(255 * 1/10)
    }

    #[test]
    fn upscale_repeats_cells() {
        let f = field(2, 15, 8, |i| i as f64);
        let map = render_heatmap(&f, Metric::Sf, 8).unwrap();
        assert_eq!((map.width, map.height), (120, 64));
        assert_eq!(map.pixels.len(), 120 * 64);
        // cell (1, 2) covers x 16..24, y 8..16
        let v = map.pixels[8 * 120 + 16];
        assert_eq!(map.pixels[15 * 120 + 23], v);
        assert_eq!(v, (255.0 * 17.0 / 119.0f64).round() as u8);

        let pgm = map.to_pgm();
        assert!(pgm.starts_with(b"P5\n120 64\n255\n"));
        assert!(render_heatmap(&f, Metric::Sf, 0).is_err());
    }

    #[test]
    fn tf_needs_a_previous_frame() {
        let f = field(1, 2, 2, |i| i as f64);
        assert!(matches!(
            render_heatmap(&f, Metric::Tf, 1),
            Err(Error::NoTemporalScores)
        ));
        let f = field(2, 2, 2, |i| i as f64);
        assert!(render_heatmap(&f, Metric::Tf, 1).is_ok());
    }
}
