//! Deterministic synthetic videos for examples, tests and benchmarks.

use crate::error::Result;
use crate::frame_io::{FrameSequence, LumaPlane};

/// Hash-based white noise in `0..=255`, a pure function of its arguments.
pub fn noise(x: i64, y: i64, seed: u64) -> u8 {
    // splitmix64 finalizer over the packed coordinates
    let mut z = (x as u64)
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((y as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F))
        .wrapping_add(seed.wrapping_mul(0x1656_67B1_9E37_79F9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 56) as u8
}

/// Noise squeezed into `[mid - amplitude, mid + amplitude]`.
pub fn scaled_noise(x: i64, y: i64, seed: u64, mid: u8, amplitude: u8) -> u8 {
    let n = f64::from(noise(x, y, seed)) / 255.0 * 2.0 - 1.0;
    (f64::from(mid) + n * f64::from(amplitude))
        .round()
        .clamp(0.0, 255.0) as u8
}

pub fn constant_video(
    width: usize,
    height: usize,
    frames: usize,
    value: u8,
) -> Result<FrameSequence> {
    let plane = LumaPlane::new(width, height, vec![value; width * height])?;
    FrameSequence::new(vec![plane; frames])
}

/// The same textured frame repeated `frames` times.
pub fn static_video(
    width: usize,
    height: usize,
    frames: usize,
    seed: u64,
) -> Result<FrameSequence> {
    let plane = LumaPlane::from_fn(width, height, |x, y| {
        noise(x as i64 / 2, y as i64 / 2, seed)
    })?;
    FrameSequence::new(vec![plane; frames])
}

/// Full-frame noise texture translating `speed` pixels right per frame.
pub fn panning_video(
    width: usize,
    height: usize,
    frames: usize,
    speed: i64,
    seed: u64,
) -> Result<FrameSequence> {
    let planes = (0..frames)
        .map(|t| {
            let shift = t as i64 * speed;
            LumaPlane::from_fn(width, height, |x, y| {
                noise((x as i64 - shift) / 2, y as i64 / 2, seed)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FrameSequence::new(planes)
}

/// Which kind of content a patch column holds in [`mixed_scene`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Flat,
    StaticTexture,
    MovingTexture,
}

/// A scene split into vertical bands aligned to `patch`-wide columns:
/// the left third is flat gray, the middle third a low-contrast static
/// texture, the right third a full-contrast texture drifting `speed` pixels
/// per frame. Returns the video and the region of each patch column.
pub fn mixed_scene(
    width: usize,
    height: usize,
    frames: usize,
    patch: usize,
    speed: i64,
    seed: u64,
) -> Result<(FrameSequence, Vec<Region>)> {
    let cols = width / patch;
    let regions: Vec<Region> = (0..cols)
        .map(|c| match 3 * c / cols.max(1) {
            0 => Region::Flat,
            1 => Region::StaticTexture,
            _ => Region::MovingTexture,
        })
        .collect();
    let region_at = |x: usize| regions.get(x / patch).copied().unwrap_or(Region::Flat);
    let planes = (0..frames)
        .map(|t| {
            let shift = t as i64 * speed;
            LumaPlane::from_fn(width, height, |x, y| match region_at(x) {
                Region::Flat => 96,
                Region::StaticTexture => scaled_noise(x as i64 / 2, y as i64 / 2, seed, 128, 24),
                Region::MovingTexture => noise((x as i64 - shift) / 2, y as i64 / 2, seed ^ 0xA5A5),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((FrameSequence::new(planes)?, regions))
}
