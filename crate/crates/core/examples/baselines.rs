//! Content-adaptive selection next to the random and top-fraction baselines
//! at the same budget.

use eps::synthetic::{mixed_scene, Region};
use eps::{sample, SamplerConfig, SelectionManifest};

fn flat_share(m: &SelectionManifest, regions: &[Region]) -> f64 {
    let picked: Vec<_> = m.frames.iter().flat_map(|f| f.selected.iter()).collect();
    let flat = picked
        .iter()
        .filter(|(_, c)| regions[*c] == Region::Flat)
        .count();
    flat as f64 / picked.len().max(1) as f64
}

fn main() -> eps::Result<()> {
    let (video, regions) = mixed_scene(960, 540, 10, 64, 4, 2)?;
    let eps = sample(&video, &SamplerConfig::eps(64, 2), false)?;
    let budget = eps.stats.fraction;

    let random = sample(&video, &SamplerConfig::random(64, budget, 42), false)?;
    let top = sample(&video, &SamplerConfig::top_fraction(64, budget), false)?;

    println!(
        "{:<14} {:>9} {:>10} {:>11}",
        "method", "selected", "fraction", "flat share"
    );
    for (name, m) in [("eps", &eps), ("random", &random), ("top-fraction", &top)] {
        println!(
            "{:<14} {:>9} {:>9.2}% {:>10.1}%",
            name,
            m.stats.total_selected,
            100.0 * m.stats.fraction,
            100.0 * flat_share(m, &regions)
        );
    }
    Ok(())
}
