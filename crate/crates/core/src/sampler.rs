//! Per-frame histogram clustering and patch selection.
//!
//! The content-adaptive selector clusters each frame's SF scores (and, from
//! the second frame on, its TF scores) into `N` equal-width bins over the
//! frame's own `[min, max]` range. Frame 1 keeps the patches in the top SF
//! bin; every later frame keeps the patches that sit in both the top SF bin
//! and the top TF bin, which may be none at all.
//!
//! Two baselines are kept for comparison: uniform random selection of a
//! fixed fraction per frame, and the fixed top-`r` fraction by SF.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::{ScoreField, Scorer};
use crate::frame_io::{slice_grid, FrameSequence, PatchGrid};
use crate::manifest::{InputDescriptor, SelectionManifest};

/// Equal-width histogram partition of one score vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    n_clusters: usize,
    edges: Vec<f64>,
    assignment: Vec<usize>,
}

impl Clustering {
    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    /// `N + 1` bin edges; `edges[0]` is the minimum score and `edges[N]`
    /// the maximum.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Cluster of each input score, `1..=N`, with `N` the highest.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Lower edge of the top bin. A score is in cluster `N` iff it is at
    /// least this value.
    pub fn top_threshold(&self) -> f64 {
        self.edges[self.n_clusters - 1]
    }

    /// Input positions assigned to `cluster`, ascending.
    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == cluster)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn top_members(&self) -> Vec<usize> {
        self.members(self.n_clusters)
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_clusters];
        for &c in &self.assignment {
            sizes[c - 1] += 1;
        }
        sizes
    }
}

/// Clusters `scores` into `n_clusters` equal-width bins over `[min, max]`.
///
/// Edge `k` is `min + (max - min) * k / N`. A score belongs to bin `k + 1`
/// where `k` counts the interior edges it reaches, so the maximum always lands
/// in bin `N` and bin membership agrees exactly with [`Clustering::top_threshold`].
/// When every score is equal, all of them go to bin `N`.
pub fn cluster_histogram(scores: &[f64], n_clusters: usize) -> Result<Clustering> {
    if n_clusters == 0 {
        return Err(Error::InvalidConfig(
            "number of clusters must be at least 1".into(),
        ));
    }
    if scores.is_empty() {
        return Err(Error::EmptyScores);
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidConfig("scores must be finite".into()));
    }
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    let n = n_clusters;

    if range == 0.0 {
        return Ok(Clustering {
            n_clusters: n,
            edges: vec![min; n + 1],
            assignment: vec![n; scores.len()],
        });
    }

    let mut edges: Vec<f64> = (0..=n)
        .map(|k| min + range * (k as f64 / n as f64))
        .collect();
    edges[n] = max;

    let interior = &edges[1..n];
    let assignment = scores
        .iter()
        // edges are sorted, so the reached edges form a prefix
        .map(|&s| 1 + interior.partition_point(|&e| e <= s))
        .collect();
    Ok(Clustering {
        n_clusters: n,
        edges,
        assignment,
    })
}

/// Patches kept from one frame, with the thresholds that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSelection {
    /// 1-based.
    pub frame: usize,
    /// `(row, col)` pairs, sorted ascending.
    pub selected: Vec<(usize, usize)>,
    /// Minimum SF to be kept; `None` for the random baseline.
    pub sf_threshold: Option<f64>,
    /// Minimum TF to be kept; `None` on frame 1 and for the baselines.
    pub tf_threshold: Option<f64>,
    /// Per-patch `(sf, tf)` in row-major grid order, when requested.
    pub scores: Option<Vec<(f64, Option<f64>)>>,
}

impl FrameSelection {
    pub fn count(&self) -> usize {
        self.selected.len()
    }

    pub fn with_scores(mut self, field: &ScoreField) -> Self {
        self.scores = Some(field.scores.iter().map(|s| (s.sf, s.tf)).collect());
        self
    }
}

/// Applies the content-adaptive rule to one scored frame.
pub fn select_frame(field: &ScoreField, n_clusters: usize) -> Result<FrameSelection> {
    let with_tf = field.scores.iter().filter(|s| s.tf.is_some()).count();
    if with_tf != 0 && with_tf != field.scores.len() {
        return Err(Error::InconsistentScores(format!(
            "frame {}: {with_tf} of {} patches carry TF",
            field.frame,
            field.scores.len()
        )));
    }
    let temporal = with_tf > 0;
    if temporal != (field.frame > 1) {
        return Err(Error::InconsistentScores(format!(
            "frame {} {} TF scores",
            field.frame,
            if temporal { "must not have" } else { "needs" }
        )));
    }

    let sf = cluster_histogram(&field.sf_values(), n_clusters)?;
    let top = n_clusters;
    let (keep, tf_threshold): (Vec<bool>, _) = match field.tf_values() {
        Some(tf_values) if temporal => {
            let tf = cluster_histogram(&tf_values, n_clusters)?;
            let keep = sf
                .assignment()
                .iter()
                .zip(tf.assignment())
                .map(|(&a, &b)| a == top && b == top)
                .collect();
            (keep, Some(tf.top_threshold()))
        }
        _ => (sf.assignment().iter().map(|&a| a == top).collect(), None),
    };

    let selected = keep
        .iter()
        .enumerate()
        .filter(|&(_, &k)| k)
        .map(|(idx, _)| field.grid.coords(idx))
        .collect();
    Ok(FrameSelection {
        frame: field.frame,
        selected,
        sf_threshold: Some(sf.top_threshold()),
        tf_threshold,
        scores: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Content-adaptive SF/TF histogram selection.
    Eps,
    Random,
    TopFraction,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Eps => "eps",
            Method::Random => "random",
            Method::TopFraction => "top-fraction",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eps" => Ok(Method::Eps),
            "random" => Ok(Method::Random),
            "top-fraction" => Ok(Method::TopFraction),
            other => Err(Error::InvalidConfig(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub patch_w: usize,
    pub patch_h: usize,
    pub n_clusters: usize,
    pub method: Method,
    /// Per-frame fraction for the baselines.
    pub fraction: Option<f64>,
    /// Generator seed for the random baseline.
    pub seed: Option<u64>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            patch_w: 64,
            patch_h: 64,
            n_clusters: 2,
            method: Method::Eps,
            fraction: None,
            seed: None,
        }
    }
}

impl SamplerConfig {
    pub fn eps(patch: usize, n_clusters: usize) -> Self {
        Self {
            patch_w: patch,
            patch_h: patch,
            n_clusters,
            ..Self::default()
        }
    }

    pub fn random(patch: usize, fraction: f64, seed: u64) -> Self {
        Self {
            patch_w: patch,
            patch_h: patch,
            method: Method::Random,
            fraction: Some(fraction),
            seed: Some(seed),
            ..Self::default()
        }
    }

    pub fn top_fraction(patch: usize, fraction: f64) -> Self {
        Self {
            patch_w: patch,
            patch_h: patch,
            method: Method::TopFraction,
            fraction: Some(fraction),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.patch_w == 0 || self.patch_h == 0 {
            return Err(Error::InvalidConfig("patch size must be positive".into()));
        }
        if self.n_clusters == 0 {
            return Err(Error::InvalidConfig(
                "number of clusters must be at least 1".into(),
            ));
        }
        let baseline = self.method != Method::Eps;
        match (baseline, self.fraction) {
            (true, None) => {
                return Err(Error::InvalidConfig(format!(
                    "method {} requires a fraction",
                    self.method
                )))
            }
            (false, Some(_)) => {
                return Err(Error::InvalidConfig(
                    "fraction only applies to the baselines".into(),
                ))
            }
            (true, Some(r)) => check_fraction(r)?,
            (false, None) => {}
        }
        match (self.method == Method::Random, self.seed) {
            (true, None) => Err(Error::InvalidConfig("method random requires a seed".into())),
            (false, Some(_)) => Err(Error::InvalidConfig(
                "seed only applies to method random".into(),
            )),
            _ => Ok(()),
        }
    }
}

fn check_fraction(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidFraction(r))
    }
}

/// Runs the configured method over `seq`. Per-patch scores are attached to
/// every frame record when `emit_scores` is set.
pub fn sample(
    seq: &FrameSequence,
    config: &SamplerConfig,
    emit_scores: bool,
) -> Result<SelectionManifest> {
    config.validate()?;
    let grid = slice_grid(seq.width(), seq.height(), config.patch_w, config.patch_h)?;
    let needs_scores = emit_scores || config.method != Method::Random;
    let fields = if needs_scores {
        Scorer::new(grid)?.score_sequence(seq)?
    } else {
        Vec::new()
    };

    let mut frames = match config.method {
        Method::Eps => fields
            .iter()
            .map(|f| select_frame(f, config.n_clusters))
            .collect::<Result<Vec<_>>>()?,
        Method::Random => random_selections(
            &grid,
            seq.frame_count(),
            config.fraction.unwrap_or(1.0),
            config.seed.unwrap_or_default(),
        )?,
        Method::TopFraction => top_fraction_selections(&fields, config.fraction.unwrap_or(1.0))?,
    };
    if emit_scores {
        frames = frames
            .into_iter()
            .zip(&fields)
            .map(|(sel, field)| sel.with_scores(field))
            .collect();
    }
    Ok(SelectionManifest::new(
        config.clone(),
        InputDescriptor::in_memory(seq),
        grid,
        frames,
    ))
}

/// Content-adaptive selection over a whole sequence.
pub fn sample_video(seq: &FrameSequence, config: &SamplerConfig) -> Result<SelectionManifest> {
    if config.method != Method::Eps {
        return Err(Error::InvalidConfig(format!(
            "sample_video runs method eps, got {}",
            config.method
        )));
    }
    sample(seq, config, false)
}

fn random_selections(
    grid: &PatchGrid,
    frame_count: usize,
    fraction: f64,
    seed: u64,
) -> Result<Vec<FrameSelection>> {
    check_fraction(fraction)?;
    let n = grid.len();
    let k = (fraction * n as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = Vec::with_capacity(n);
    (1..=frame_count)
        .map(|frame| {
            order.clear();
            order.extend(0..n);
            // partial Fisher-Yates; u64 draws keep the stream platform independent
            for i in 0..k {
                let j = rng.gen_range(i as u64..n as u64) as usize;
                order.swap(i, j);
            }
            let mut picked = order[..k].to_vec();
            picked.sort_unstable();
            Ok(FrameSelection {
                frame,
                selected: picked.into_iter().map(|idx| grid.coords(idx)).collect(),
                sf_threshold: None,
                tf_threshold: None,
                scores: None,
            })
        })
        .collect()
}

/// Uniform random baseline: `round(r * C * L)` distinct patches per frame.
///
/// The generator is ChaCha8 seeded with `seed_from_u64(seed)`, shared across
/// frames in order; each frame draws a partial Fisher-Yates shuffle of the
/// row-major cell indices using `u64` range draws. Same inputs, same manifest.
pub fn sample_random(
    grid: &PatchGrid,
    frame_count: usize,
    fraction: f64,
    seed: u64,
) -> Result<SelectionManifest> {
    let frames = random_selections(grid, frame_count, fraction, seed)?;
    let config = SamplerConfig {
        patch_w: grid.patch_w,
        patch_h: grid.patch_h,
        ..SamplerConfig::random(0, fraction, seed)
    };
    let input = InputDescriptor {
        frames: frame_count,
        ..InputDescriptor::for_grid(grid)
    };
    Ok(SelectionManifest::new(config, input, *grid, frames))
}

/// `ceil(r * n)`, ignoring float noise like `0.175 * 120 = 21.000000000000004`.
fn top_count(fraction: f64, n: usize) -> usize {
    let exact = fraction * n as f64;
    let nearest = exact.round();
    let k = if (exact - nearest).abs() < 1e-9 {
        nearest
    } else {
        exact.ceil()
    };
    (k as usize).min(n)
}

fn top_fraction_selections(fields: &[ScoreField], fraction: f64) -> Result<Vec<FrameSelection>> {
    check_fraction(fraction)?;
    Ok(fields
        .iter()
        .map(|field| {
            let k = top_count(fraction, field.scores.len());
            let mut order: Vec<usize> = (0..field.scores.len()).collect();
            // highest SF first; ties resolved by row-major index
            order.sort_by(|&a, &b| {
                field.scores[b]
                    .sf
                    .total_cmp(&field.scores[a].sf)
                    .then(a.cmp(&b))
            });
            let threshold = order[..k].last().map(|&i| field.scores[i].sf);
            let mut picked = order[..k].to_vec();
            picked.sort_unstable();
            FrameSelection {
                frame: field.frame,
                selected: picked
                    .into_iter()
                    .map(|idx| field.grid.coords(idx))
                    .collect(),
                sf_threshold: threshold,
                tf_threshold: None,
                scores: None,
            }
        })
        .collect())
}

/// Fixed-fraction baseline: the `ceil(r * C * L)` highest-SF patches per
/// frame, ties broken by ascending `(row, col)`.
pub fn sample_top_fraction(fields: &[ScoreField], fraction: f64) -> Result<SelectionManifest> {
    let Some(first) = fields.first() else {
        return Err(Error::EmptyScores);
    };
    let grid = first.grid;
    let frames = top_fraction_selections(fields, fraction)?;
    let config = SamplerConfig {
        patch_w: grid.patch_w,
        patch_h: grid.patch_h,
        ..SamplerConfig::top_fraction(0, fraction)
    };
    let input = InputDescriptor {
        frames: fields.len(),
        ..InputDescriptor::for_grid(&grid)
    };
    Ok(SelectionManifest::new(config, input, grid, frames))
}
