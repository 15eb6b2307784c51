//! Time the selector on 30 frames of 960x540.
//!
//!     cargo run --release --example throughput -- [threads]

use std::time::Instant;

use eps::synthetic::mixed_scene;
use eps::{sample_video, SamplerConfig};

fn main() -> eps::Result<()> {
    let threads: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let (video, _) = mixed_scene(960, 540, 30, 64, 4, 8)?;
    let config = SamplerConfig::eps(64, 2);

    let mut best = f64::INFINITY;
    for _ in 0..5 {
        let start = Instant::now();
        pool.install(|| sample_video(&video, &config))?;
        best = best.min(start.elapsed().as_secs_f64());
    }
    println!(
        "30 frames 960x540 on {} threads: best of 5 = {:.3} s ({:.1} frames/s)",
        pool.current_num_threads(),
        best,
        30.0 / best
    );
    Ok(())
}
