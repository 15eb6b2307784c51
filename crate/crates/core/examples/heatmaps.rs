//! Write per-frame SF and TF heatmaps as 8-bit PGM images.
//!
//!     cargo run --example heatmaps -- out_dir

use std::path::PathBuf;

use eps::synthetic::mixed_scene;
use eps::{slice_grid, write_heatmap, Metric, Scorer};

fn main() -> eps::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "heatmaps".into()));
    std::fs::create_dir_all(&dir).map_err(|e| eps::Error::io(&dir, e))?;

    let (video, _) = mixed_scene(960, 540, 3, 64, 4, 6)?;
    let scorer = Scorer::new(slice_grid(960, 540, 64, 64)?)?;
    for field in scorer.score_sequence(&video)? {
        let mut metrics = vec![Metric::Sf];
        if field.has_temporal() {
            metrics.push(Metric::Tf);
        }
        for metric in metrics {
            let path = dir.join(format!("hm_f{}_{}.pgm", field.frame, metric.as_str()));
            // one pixel per patch is hard to look at
            write_heatmap(&field, metric, &path, 16)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
