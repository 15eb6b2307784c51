//! Content-adaptive training-patch selection for per-video super-resolution.
//!
//! Each frame's luma plane is cut into a grid of non-overlapping patches.
//! Every patch gets a spatial complexity score (SF, a frequency-weighted L1
//! norm of its AC DCT coefficients) and, from the second frame on, a temporal
//! score (TF, the same norm over the coefficient change against the
//! co-located patch of the previous frame). Scores are binned per frame into
//! `N` equal-width histogram clusters and the patches in the top SF cluster
//! (frame 1) or in both top clusters (later frames) are kept.
//!
//! ```no_run
//! use eps::{load_sequence, sample_video, InputFormat, SamplerConfig};
//!
//! let video = load_sequence("clip.y4m".as_ref(), InputFormat::Y4m, None)?;
//! let manifest = sample_video(&video, &SamplerConfig::eps(64, 2))?;
//! println!("{}", eps::summarize(&manifest));
//! # Ok::<(), eps::Error>(())
//! ```
//!
//! See the crate's `examples/` directory for one runnable program per
//! capability, and the `eps` binary for the command-line front end.

pub mod cli;
pub mod dct;
pub mod error;
pub mod features;
pub mod frame_io;
pub mod heatmap;
pub mod manifest;
pub mod oracle;
pub mod sampler;
pub mod synthetic;

pub use dct::{dct2d, dct2d_naive, masked, CoefficientBlock, DctPlan};
pub use error::{Error, Result};
pub use features::{
    score_frame, spatial_feature, temporal_feature, weight, PatchScore, ScoreField, Scorer,
    WeightTable,
};
pub use frame_io::{
    extract_patch, load_sequence, slice_grid, FrameSequence, InputFormat, LumaPlane, PatchGrid,
};
pub use heatmap::{render_heatmap, write_heatmap, Heatmap, Metric};
pub use manifest::{
    read_manifest, summarize, write_manifest, InputDescriptor, ManifestStats, SelectionManifest,
};
pub use sampler::{
    cluster_histogram, sample, sample_random, sample_top_fraction, sample_video, select_frame,
    Clustering, FrameSelection, Method, SamplerConfig,
};
