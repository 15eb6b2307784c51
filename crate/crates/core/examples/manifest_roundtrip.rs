//! Manifest text: write one with per-patch scores, read it back, summarize it.

use eps::synthetic::panning_video;
use eps::{read_manifest, sample, summarize, write_manifest, SamplerConfig};

fn main() -> eps::Result<()> {
    let video = panning_video(256, 128, 3, 2, 9)?;
    let manifest = sample(&video, &SamplerConfig::eps(64, 2), true)?;

    let dir = std::env::temp_dir().join("eps-manifest-example");
    std::fs::create_dir_all(&dir).map_err(|e| eps::Error::io(&dir, e))?;
    let path = dir.join("manifest.txt");
    write_manifest(&manifest, &path)?;

    let back = read_manifest(&path)?;
    assert_eq!(back, manifest.canonicalized());
    print!("{}", back.to_text());
    println!("---");
    print!("{}", summarize(&back));
    Ok(())
}
