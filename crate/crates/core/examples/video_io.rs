//! Y4M and raw 4:2:0 round trips, plus a directory of PGM frames.

use eps::frame_io::{encode_pgm, write_raw_yuv420p, write_y4m, yuv420_frame_len};
use eps::synthetic::panning_video;
use eps::{load_sequence, InputFormat};

fn main() -> eps::Result<()> {
    let dir = std::env::temp_dir().join("eps-io-example");
    let frames_dir = dir.join("frames");
    std::fs::create_dir_all(&frames_dir).map_err(|e| eps::Error::io(&frames_dir, e))?;
    let video = panning_video(480, 270, 2, 3, 1)?;

    let y4m = dir.join("clip.y4m");
    write_y4m(&y4m, &video, 30)?;
    assert_eq!(load_sequence(&y4m, InputFormat::Y4m, None)?, video);
    println!(
        "y4m      {} frames, {}x{}",
        video.frame_count(),
        video.width(),
        video.height()
    );

    let raw = dir.join("clip.yuv");
    write_raw_yuv420p(&raw, &video)?;
    let back = load_sequence(&raw, InputFormat::RawYuv420p8, Some((480, 270)))?;
    assert_eq!(back, video);
    println!("yuv420p  {} bytes per frame", yuv420_frame_len(480, 270));

    for (t, f) in video.frames().iter().enumerate() {
        let path = frames_dir.join(format!("frame_{t:04}.pgm"));
        std::fs::write(&path, encode_pgm(f.width(), f.height(), f.samples()))
            .map_err(|e| eps::Error::io(&path, e))?;
    }
    assert_eq!(
        load_sequence(&frames_dir, InputFormat::PgmSequence, None)?,
        video
    );
    println!(
        "pgm-seq  {} files in {}",
        video.frame_count(),
        frames_dir.display()
    );
    Ok(())
}
