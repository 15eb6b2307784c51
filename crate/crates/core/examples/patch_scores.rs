//! Score every patch of a small synthetic clip and print the SF/TF table
//! for one frame.

use eps::synthetic::mixed_scene;
use eps::{slice_grid, Scorer};

fn main() -> eps::Result<()> {
    let (video, regions) = mixed_scene(384, 128, 3, 64, 4, 1)?;
    let scorer = Scorer::new(slice_grid(video.width(), video.height(), 64, 64)?)?;
    let fields = scorer.score_sequence(&video)?;

    let field = &fields[1];
    println!("frame {} ({} patches)", field.frame, field.scores.len());
    println!(
        "{:>4} {:>4} {:>15} {:>14} {:>14}",
        "row", "col", "region", "SF", "TF"
    );
    for s in &field.scores {
        println!(
            "{:>4} {:>4} {:>15} {:>14.3} {:>14.3}",
            s.row,
            s.col,
            format!("{:?}", regions[s.col]),
            s.sf,
            s.tf.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
