//! Run the selector on a video file (or a synthetic scene) and write the
//! manifest.
//!
//!     cargo run --release --example select_patches -- clip.y4m manifest.txt

use std::path::PathBuf;

use eps::synthetic::mixed_scene;
use eps::{load_sequence, sample_video, summarize, write_manifest, InputFormat, SamplerConfig};

fn main() -> eps::Result<()> {
    let mut args = std::env::args().skip(1);
    let input = args.next();
    let out = PathBuf::from(args.next().unwrap_or_else(|| "manifest.txt".into()));

    let video = match &input {
        Some(path) => {
            let path = PathBuf::from(path);
            let format = InputFormat::infer(&path).ok_or_else(|| {
                eps::Error::Unsupported(format!("unknown input type: {}", path.display()))
            })?;
            load_sequence(&path, format, None)?
        }
        None => mixed_scene(960, 540, 10, 64, 4, 3)?.0,
    };
    let manifest = sample_video(&video, &SamplerConfig::eps(64, 2))?;
    write_manifest(&manifest, &out)?;
    print!("{}", summarize(&manifest));
    println!("manifest written to {}", out.display());
    Ok(())
}
