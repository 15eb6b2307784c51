//! Spatial (SF) and temporal (TF) complexity scores of patches.
//!
//! Both scores are weighted L1 norms over DC-masked DCT coefficients, with
//! weight `exp(((i*j)/(w*h))^2 - 1)` for horizontal frequency `i` and
//! vertical frequency `j`. SF uses the coefficients of one patch; TF uses the
//! coefficient difference to the co-located patch of the previous frame.

use rayon::prelude::*;

use crate::dct::{CoefficientBlock, DctPlan};
use crate::error::{Error, Result};
use crate::frame_io::{extract_patch_f64, FrameSequence, LumaPlane, PatchGrid};

/// Frequency weight for coefficient `(i, j)` of a `w x h` block.
#[inline]
pub fn weight(i: usize, j: usize, w: usize, h: usize) -> f64 {
    let r = (i * j) as f64 / (w * h) as f64;
    (r * r - 1.0).exp()
}

/// Frequency weights for one block size, laid out like
/// [`CoefficientBlock::coeffs`].
#[derive(Debug, Clone)]
pub struct WeightTable {
    width: usize,
    height: usize,
    weights: Vec<f64>,
}

impl WeightTable {
    pub fn new(width: usize, height: usize) -> Self {
        let mut weights = vec![0.0; width * height];
        for j in 0..height {
            for i in 0..width {
                weights[j * width + i] = weight(i, j, width, height);
            }
        }
        Self {
            width,
            height,
            weights,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights[j * self.width + i]
    }

    fn check_dims(&self, block: &CoefficientBlock) -> Result<()> {
        if block.width() != self.width || block.height() != self.height {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} block, {}x{} weights",
                block.width(),
                block.height(),
                self.width,
                self.height
            )));
        }
        Ok(())
    }

    pub fn spatial(&self, block: &CoefficientBlock) -> Result<f64> {
        self.check_dims(block)?;
        if !block.is_masked() {
            return Err(Error::UnmaskedBlock(block.dc()));
        }
        Ok(self.spatial_unchecked(block.coeffs()))
    }

    pub fn temporal(&self, current: &CoefficientBlock, previous: &CoefficientBlock) -> Result<f64> {
        self.check_dims(current)?;
        self.check_dims(previous)?;
        for b in [current, previous] {
            if !b.is_masked() {
                return Err(Error::UnmaskedBlock(b.dc()));
            }
        }
        Ok(self.temporal_unchecked(current.coeffs(), previous.coeffs()))
    }

    // Both sums run i outer, j inner.
    fn spatial_unchecked(&self, coeffs: &[f64]) -> f64 {
        let w = self.width;
        let mut acc = 0.0;
        for i in 0..w {
            for j in 0..self.height {
                let k = j * w + i;
                acc += self.weights[k] * coeffs[k].abs();
            }
        }
        acc
    }

    fn temporal_unchecked(&self, current: &[f64], previous: &[f64]) -> f64 {
        let w = self.width;
        let mut acc = 0.0;
        for i in 0..w {
            for j in 0..self.height {
                let k = j * w + i;
                acc += self.weights[k] * (current[k] - previous[k]).abs();
            }
        }
        acc
    }
}

/// SF of a DC-masked coefficient block.
pub fn spatial_feature(block: &CoefficientBlock) -> Result<f64> {
    WeightTable::new(block.width(), block.height()).spatial(block)
}

/// TF between a DC-masked block and its co-located predecessor.
pub fn temporal_feature(current: &CoefficientBlock, previous: &CoefficientBlock) -> Result<f64> {
    WeightTable::new(current.width(), current.height()).temporal(current, previous)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchScore {
    /// 1-based.
    pub frame: usize,
    pub row: usize,
    pub col: usize,
    pub sf: f64,
    /// `None` exactly on frame 1.
    pub tf: Option<f64>,
}

/// Scores of every grid cell of one frame, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreField {
    pub frame: usize,
    pub grid: PatchGrid,
    pub scores: Vec<PatchScore>,
}

impl ScoreField {
    pub fn get(&self, row: usize, col: usize) -> &PatchScore {
        &self.scores[self.grid.index(row, col)]
    }

    pub fn sf_values(&self) -> Vec<f64> {
        self.scores.iter().map(|s| s.sf).collect()
    }

    /// TF values, `None` if any cell lacks one.
    pub fn tf_values(&self) -> Option<Vec<f64>> {
        self.scores.iter().map(|s| s.tf).collect()
    }

    pub fn has_temporal(&self) -> bool {
        self.scores.first().is_some_and(|s| s.tf.is_some())
    }
}

/// Masked DCT coefficients of every grid cell of one frame, row-major.
pub type FrameCoefficients = Vec<CoefficientBlock>;

/// Scoring context for one grid: the DCT plan and weight table are built
/// once and shared by all cells.
#[derive(Debug, Clone)]
pub struct Scorer {
    grid: PatchGrid,
    plan: DctPlan,
    weights: WeightTable,
}

impl Scorer {
    pub fn new(grid: PatchGrid) -> Result<Self> {
        Ok(Self {
            grid,
            plan: DctPlan::new(grid.patch_w, grid.patch_h)?,
            weights: WeightTable::new(grid.patch_w, grid.patch_h),
        })
    }

    pub fn grid(&self) -> &PatchGrid {
        &self.grid
    }

    /// DC-masked coefficients of every cell, computed in parallel on the
    /// current rayon pool.
    pub fn frame_coefficients(&self, plane: &LumaPlane) -> Result<FrameCoefficients> {
        self.grid.check_plane(plane)?;
        let (pw, ph) = (self.grid.patch_w, self.grid.patch_h);
        let blocks = (0..self.grid.len())
            .into_par_iter()
            .map_init(
                || (vec![0.0; pw * ph], vec![0.0; pw * ph]),
                |(samples, scratch), idx| {
                    let (row, col) = self.grid.coords(idx);
                    extract_patch_f64(plane, &self.grid, row, col, samples);
                    let mut block = CoefficientBlock::zeros(pw, ph);
                    self.plan.forward_unchecked(samples, scratch, &mut block);
                    block.mask_dc();
                    block
                },
            )
            .collect();
        Ok(blocks)
    }

    /// Scores frame `frame` from precomputed coefficients. `previous` must be
    /// present exactly when `frame > 1`.
    pub fn score_coefficients(
        &self,
        frame: usize,
        current: &[CoefficientBlock],
        previous: Option<&[CoefficientBlock]>,
    ) -> Result<ScoreField> {
        check_frame_pairing(frame, previous.is_some())?;
        let n = self.grid.len();
        if current.len() != n || previous.is_some_and(|p| p.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} coefficient blocks per frame"
            )));
        }
        let scores = (0..n)
            .into_par_iter()
            .map(|idx| {
                let (row, col) = self.grid.coords(idx);
                let cur = current[idx].coeffs();
                PatchScore {
                    frame,
                    row,
                    col,
                    sf: self.weights.spatial_unchecked(cur),
                    tf: previous.map(|p| self.weights.temporal_unchecked(cur, p[idx].coeffs())),
                }
            })
            .collect();
        Ok(ScoreField {
            frame,
            grid: self.grid,
            scores,
        })
    }

    pub fn score_frame(
        &self,
        frame: usize,
        plane: &LumaPlane,
        previous: Option<&LumaPlane>,
    ) -> Result<ScoreField> {
        check_frame_pairing(frame, previous.is_some())?;
        if let Some(prev) = previous {
            if prev.width() != plane.width() || prev.height() != plane.height() {
                return Err(Error::DimensionMismatch(format!(
                    "frame {frame} is {}x{}, previous frame is {}x{}",
                    plane.width(),
                    plane.height(),
                    prev.width(),
                    prev.height()
                )));
            }
        }
        let current = self.frame_coefficients(plane)?;
        let previous = previous.map(|p| self.frame_coefficients(p)).transpose()?;
        self.score_coefficients(frame, &current, previous.as_deref())
    }

    /// Scores every frame of `seq`; frame `t > 1` is paired with `t - 1`.
    /// Each frame is transformed once and only two frames of coefficients
    /// are held at a time.
    pub fn score_sequence(&self, seq: &FrameSequence) -> Result<Vec<ScoreField>> {
        let mut fields = Vec::with_capacity(seq.frame_count());
        let mut previous: Option<FrameCoefficients> = None;
        for (idx, plane) in seq.frames().iter().enumerate() {
            let current = self.frame_coefficients(plane)?;
            fields.push(self.score_coefficients(idx + 1, &current, previous.as_deref())?);
            previous = Some(current);
        }
        Ok(fields)
    }
}

fn check_frame_pairing(frame: usize, has_previous: bool) -> Result<()> {
    if frame == 0 {
        return Err(Error::InvalidConfig("frame indices are 1-based".into()));
    }
    if (frame == 1) == has_previous {
        return Err(Error::InconsistentScores(format!(
            "frame {frame} {} a previous frame",
            if has_previous {
                "must not have"
            } else {
                "needs"
            }
        )));
    }
    Ok(())
}

/// Scores one frame against its predecessor (`None` for frame 1).
pub fn score_frame(
    frame: usize,
    plane: &LumaPlane,
    previous: Option<&LumaPlane>,
    grid: &PatchGrid,
) -> Result<ScoreField> {
    Scorer::new(*grid)?.score_frame(frame, plane, previous)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dct::{dct2d, masked};
    use crate::frame_io::slice_grid;

    fn masked_dct(samples: &[f64], w: usize, h: usize) -> CoefficientBlock {
        masked(&dct2d(samples, w, h).unwrap())
    }

    #[test]
    fn weight_anchors() {
        let e_inv = (-1.0f64).exp();
        for j in 0..64 {
            assert_eq!(weight(0, j, 64, 64), e_inv);
            assert_eq!(weight(j, 0, 64, 64), e_inv);
        }
        let top = weight(63, 63, 64, 64);
        // exp((3969/4096)^2 - 1)
        assert!((top - 0.940_775_865_405_849).abs() < 1e-12, "{top}");
        assert!(top < 1.0);
        let w11 = weight(1, 1, 64, 64);
        assert!(w11 > e_inv && (w11 / e_inv - 1.0 - 5.96e-8).abs() < 1e-9);
    }

    #[test]
    fn constant_patch_has_zero_sf() {
        for v in [0.0, 17.0, 255.0] {
            let b = masked_dct(&[v; 64], 8, 8);
            assert!(spatial_feature(&b).unwrap() < 1e-9);
        }
    }

    #[test]
    fn single_basis_sf() {
        // (1, 0) basis: horizontal cosine, constant vertically
        let (w, h) = (8, 8);
        let s: Vec<f64> = (0..w * h)
            .map(|k| {
                let x = k % w;
                50.0 * (std::f64::consts::PI * (2 * x + 1) as f64 / (2 * w) as f64).cos()
            })
            .collect();
        let b = masked_dct(&s, w, h);
        let c = b.get(1, 0).abs();
        let sf = spatial_feature(&b).unwrap();
        assert!((sf - (-1.0f64).exp() * c).abs() < 1e-9);
    }

    #[test]
    fn unmasked_block_rejected() {
        let b = dct2d(&[3.0; 16], 4, 4).unwrap();
        assert!(matches!(spatial_feature(&b), Err(Error::UnmaskedBlock(_))));
        let m = masked(&b);
        assert!(matches!(
            temporal_feature(&m, &b),
            Err(Error::UnmaskedBlock(_))
        ));
    }

    #[test]
    fn temporal_dims_must_match() {
        let a = masked_dct(&[1.0; 16], 4, 4);
        let b = masked_dct(&[1.0; 32], 8, 4);
        assert!(matches!(
            temporal_feature(&a, &b),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn identical_frames_have_zero_tf() {
        let plane = LumaPlane::from_fn(128, 64, |x, y| ((x * x + 3 * y) % 251) as u8).unwrap();
        let grid = slice_grid(128, 64, 32, 32).unwrap();
        let first = score_frame(1, &plane, None, &grid).unwrap();
        let second = score_frame(2, &plane, Some(&plane), &grid).unwrap();
        assert!(first.scores.iter().all(|s| s.tf.is_none()));
        assert_eq!(second.scores.len(), 8);
        for (a, b) in first.scores.iter().zip(&second.scores) {
            assert_eq!(a.sf, b.sf);
            assert_eq!(b.tf, Some(0.0));
        }
    }

    #[test]
    fn frame_pairing_is_enforced() {
        let plane = LumaPlane::from_fn(64, 64, |x, _| x as u8).unwrap();
        let grid = slice_grid(64, 64, 32, 32).unwrap();
        assert!(score_frame(2, &plane, None, &grid).is_err());
        assert!(score_frame(1, &plane, Some(&plane), &grid).is_err());
        let other = LumaPlane::from_fn(32, 64, |x, _| x as u8).unwrap();
        assert!(matches!(
            score_frame(2, &plane, Some(&other), &grid),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            score_frame(1, &other, None, &grid),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
