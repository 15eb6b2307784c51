//! Orthonormal type-II 2D DCT over a patch.
//!
//! `coeffs(i, j) = a(i) a(j) sum_x sum_y p(x, y) cos[pi (2x+1) i / 2w] cos[pi (2y+1) j / 2h]`
//! with `a(0) = sqrt(1/n)` and `a(k) = sqrt(2/n)` along an axis of length `n`.
//! Pixels are used as-is (no level shift).
//!
//! [`DctPlan`] evaluates the transform separably (row pass, then column pass)
//! with precomputed basis tables. Every output is a sequential sum in a fixed
//! order, so a given input always produces the same bits. [`dct2d_naive`] is
//! the direct quadruple loop kept as a reference.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// DCT coefficients of a `width x height` patch, row-major by vertical
/// frequency: `coeffs[j * width + i]` holds horizontal frequency `i` and
/// vertical frequency `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientBlock {
    width: usize,
    height: usize,
    coeffs: Vec<f64>,
}

impl CoefficientBlock {
    pub fn from_vec(width: usize, height: usize, coeffs: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || coeffs.len() != width * height {
            return Err(Error::InvalidDimensions(format!(
                "{} coefficients for a {width}x{height} block",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            width,
            height,
            coeffs,
        })
    }

    pub(crate) fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            coeffs: vec![0.0; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Coefficient at horizontal frequency `i`, vertical frequency `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.coeffs[j * self.width + i]
    }

    pub fn dc(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Largest absolute coefficient difference against `other`.
    pub fn max_abs_diff(&self, other: &CoefficientBlock) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_masked(&self) -> bool {
        self.coeffs[0] == 0.0
    }

    /// Zeroes the DC term in place.
    pub fn mask_dc(&mut self) {
        self.coeffs[0] = 0.0;
    }
}

/// Returns `block` with its DC coefficient forced to exactly zero.
pub fn masked(block: &CoefficientBlock) -> CoefficientBlock {
    let mut out = block.clone();
    out.mask_dc();
    out
}

/// `a(k) cos(pi (2x+1) k / 2n)`, laid out `[x * n + k]`.
fn basis_by_sample(n: usize) -> Vec<f64> {
    let scale0 = (1.0 / n as f64).sqrt();
    let scale = (2.0 / n as f64).sqrt();
    let period = 4 * n;
    let mut table = vec![0.0; n * n];
    for x in 0..n {
        for k in 0..n {
            // reduce the phase mod 2*pi before converting to radians
            let phase = ((2 * x + 1) * k) % period;
            let c = (PI * phase as f64 / (2 * n) as f64).cos();
            table[x * n + k] = if k == 0 { scale0 } else { scale * c };
        }
    }
    table
}

/// Precomputed tables for repeated transforms of one patch size.
#[derive(Debug, Clone)]
pub struct DctPlan {
    width: usize,
    height: usize,
    // [x * width + i]
    basis_w: Vec<f64>,
    // [y * height + j]
    basis_h: Vec<f64>,
}

impl DctPlan {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions(format!("{width}x{height} block")));
        }
        Ok(Self {
            width,
            height,
            basis_w: basis_by_sample(width),
            basis_h: basis_by_sample(height),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn forward(&self, samples: &[f64]) -> Result<CoefficientBlock> {
        self.check_input(samples)?;
        let mut scratch = vec![0.0; samples.len()];
        let mut out = CoefficientBlock::zeros(self.width, self.height);
        self.forward_unchecked(samples, &mut scratch, &mut out);
        Ok(out)
    }

    pub(crate) fn check_input(&self, samples: &[f64]) -> Result<()> {
        if samples.len() != self.width * self.height {
            return Err(Error::DimensionMismatch(format!(
                "{} samples for a {}x{} plan",
                samples.len(),
                self.width,
                self.height
            )));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// Transform with caller-owned buffers. `scratch` and `out` must be sized
    /// `width * height` and `samples` must already be validated.
    pub(crate) fn forward_unchecked(
        &self,
        samples: &[f64],
        scratch: &mut [f64],
        out: &mut CoefficientBlock,
    ) {
        let (w, h) = (self.width, self.height);

        // Row pass: scratch[y][i] = sum_x p[y][x] * basis_w[x][i], x ascending.
        scratch.fill(0.0);
        for (src, dst) in samples.chunks_exact(w).zip(scratch.chunks_exact_mut(w)) {
            for (x, &p) in src.iter().enumerate() {
                let basis = &self.basis_w[x * w..(x + 1) * w];
                for (d, &b) in dst.iter_mut().zip(basis) {
                    *d += p * b;
                }
            }
        }

        // Column pass: out[j][i] = sum_y scratch[y][i] * basis_h[y][j], y ascending.
        let coeffs = &mut out.coeffs;
        coeffs.fill(0.0);
        for (y, src) in scratch.chunks_exact(w).enumerate() {
            let basis = &self.basis_h[y * h..(y + 1) * h];
            for (dst, &b) in coeffs.chunks_exact_mut(w).zip(basis) {
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d += s * b;
                }
            }
        }
    }
}

/// Separable 2D DCT of a `width x height` row-major block.
pub fn dct2d(samples: &[f64], width: usize, height: usize) -> Result<CoefficientBlock> {
    DctPlan::new(width, height)?.forward(samples)
}

/// Direct O((wh)^2) evaluation of the same transform. Slow; used as an
/// independent reference for [`dct2d`].
pub fn dct2d_naive(samples: &[f64], width: usize, height: usize) -> Result<CoefficientBlock> {
    if width == 0 || height == 0 || samples.len() != width * height {
        return Err(Error::DimensionMismatch(format!(
            "{} samples for a {width}x{height} block",
            samples.len()
        )));
    }
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite);
    }
    let alpha = |k: usize, n: usize| {
        if k == 0 {
            (1.0 / n as f64).sqrt()
        } else {
            (2.0 / n as f64).sqrt()
        }
    };
    // cos tables indexed [freq][pos], straight from the definition
    let cos_w: Vec<Vec<f64>> = (0..width)
        .map(|i| {
            (0..width)
                .map(|x| (PI * (2 * x + 1) as f64 * i as f64 / (2 * width) as f64).cos())
                .collect()
        })
        .collect();
    let cos_h: Vec<Vec<f64>> = (0..height)
        .map(|j| {
            (0..height)
                .map(|y| (PI * (2 * y + 1) as f64 * j as f64 / (2 * height) as f64).cos())
                .collect()
        })
        .collect();

    let mut coeffs = vec![0.0; width * height];
    for j in 0..height {
        for i in 0..width {
            let mut acc = 0.0;
            for y in 0..height {
                for x in 0..width {
                    acc += samples[y * width + x] * cos_w[i][x] * cos_h[j][y];
                }
            }
            coeffs[j * width + i] = alpha(i, width) * alpha(j, height) * acc;
        }
    }
    CoefficientBlock::from_vec(width, height, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_block(n: usize, seed: u64) -> Vec<f64> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((s >> 33) % 256) as f64
            })
            .collect()
    }

    #[test]
    fn constant_block_is_pure_dc() {
        let b = dct2d(&[10.0; 64], 8, 8).unwrap();
        assert!((b.dc() - 80.0).abs() < 1e-9);
        assert!(b.coeffs()[1..].iter().all(|c| c.abs() < 1e-9));

        let b = dct2d_naive(&[1.0; 16], 4, 4).unwrap();
        assert!((b.dc() - 4.0).abs() < 1e-12);
        assert!(b.coeffs()[1..].iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn single_sample_is_identity() {
        for v in [0.0, 1.5, 255.0, -3.25] {
            assert_eq!(dct2d(&[v], 1, 1).unwrap().coeffs(), &[v]);
            assert_eq!(dct2d_naive(&[v], 1, 1).unwrap().coeffs(), &[v]);
        }
    }

    #[test]
    fn cosine_basis_has_single_coefficient() {
        let (w, h) = (8, 4);
        for (i0, j0) in [(1, 0), (0, 3), (5, 2), (7, 3)] {
            let samples: Vec<f64> = (0..h)
                .flat_map(|y| {
                    (0..w).map(move |x| {
                        (PI * (2 * x + 1) as f64 * i0 as f64 / (2 * w) as f64).cos()
                            * (PI * (2 * y + 1) as f64 * j0 as f64 / (2 * h) as f64).cos()
                    })
                })
                .collect();
            for b in [
                dct2d(&samples, w, h).unwrap(),
                dct2d_naive(&samples, w, h).unwrap(),
            ] {
                for j in 0..h {
                    for i in 0..w {
                        if (i, j) != (i0, j0) {
                            assert!(b.get(i, j).abs() < 1e-12, "({i},{j}) = {}", b.get(i, j));
                        }
                    }
                }
                assert!(b.get(i0, j0).abs() > 0.5);
            }
        }
    }

    #[test]
    fn separable_matches_naive() {
        for (w, h) in [(4, 4), (8, 8), (16, 8), (3, 5), (16, 16)] {
            for seed in 0..5 {
                let s = lcg_block(w * h, seed);
                let fast = dct2d(&s, w, h).unwrap();
                let slow = dct2d_naive(&s, w, h).unwrap();
                assert!(fast.max_abs_diff(&slow) < 1e-9, "{w}x{h}");
            }
        }
    }

    #[test]
    fn mask_zeroes_dc_only() {
        let b = dct2d(&[10.0; 64], 8, 8).unwrap();
        let m = masked(&b);
        assert_eq!(m.dc(), 0.0);
        assert!(m.coeffs().iter().all(|c| c.abs() < 1e-9));
        assert_eq!(masked(&m), m);

        let s = lcg_block(64, 9);
        let b = dct2d(&s, 8, 8).unwrap();
        let m = masked(&b);
        let changed = b
            .coeffs()
            .iter()
            .zip(m.coeffs())
            .filter(|(a, b)| a != b)
            .count();
        assert!(changed <= 1);
        assert_eq!(&b.coeffs()[1..], &m.coeffs()[1..]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            dct2d(&[1.0, f64::NAN], 2, 1),
            Err(Error::NonFinite)
        ));
        assert!(matches!(
            dct2d_naive(&[f64::INFINITY], 1, 1),
            Err(Error::NonFinite)
        ));
        assert!(dct2d(&[1.0; 5], 2, 2).is_err());
        assert!(dct2d(&[], 0, 0).is_err());
    }
}
