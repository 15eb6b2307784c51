//! Decoding from disk, manifest files and heatmap files.

use std::fs;

use eps::frame_io::{encode_pgm, load_sequence, write_raw_yuv420p, write_y4m, InputFormat};
use eps::manifest::{read_manifest, write_manifest, SelectionManifest};
use eps::sampler::{sample, sample_video, SamplerConfig};
use eps::synthetic::{mixed_scene, panning_video, static_video};
use eps::{summarize, Error};
use proptest::prelude::*;

#[test]
fn raw_yuv_byte_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clip.yuv");
    let video = panning_video(480, 270, 2, 3, 1).unwrap();
    write_raw_yuv420p(&path, &video).unwrap();
    assert_eq!(fs::metadata(&path).unwrap().len(), 388_800);

    let seq = load_sequence(&path, InputFormat::RawYuv420p8, Some((480, 270))).unwrap();
    assert_eq!(
        (seq.width(), seq.height(), seq.frame_count()),
        (480, 270, 2)
    );
    assert_eq!(seq, video);
    assert!(matches!(
        load_sequence(&path, InputFormat::RawYuv420p8, None),
        Err(Error::MissingDimensions)
    ));
}

#[test]
fn y4m_roundtrip_and_redecode() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("clip.y4m");
    let video = panning_video(960, 540, 30, 4, 2).unwrap();
    write_y4m(&path, &video, 30).unwrap();
    let header = fs::read(&path).unwrap();
    assert!(header.starts_with(b"YUV4MPEG2 W960 H540 "));

    let a = load_sequence(&path, InputFormat::Y4m, None).unwrap();
    let b = load_sequence(&path, InputFormat::Y4m, None).unwrap();
    assert_eq!((a.width(), a.height(), a.frame_count()), (960, 540, 30));
    assert_eq!(a, b);
    assert_eq!(a, video);

    // chop the last frame in half
    let bytes = fs::read(&path).unwrap();
    let cut = dir.path().join("cut.y4m");
    fs::write(&cut, &bytes[..bytes.len() - 1000]).unwrap();
    assert!(matches!(
        load_sequence(&cut, InputFormat::Y4m, None),
        Err(Error::TruncatedFrame { frame: 30 })
    ));

    let empty = dir.path().join("empty.y4m");
    fs::write(&empty, b"YUV4MPEG2 W960 H540 F30:1\n").unwrap();
    let err = load_sequence(&empty, InputFormat::Y4m, None).unwrap_err();
    assert!(err.to_string().contains("truncated frame data"));

    assert!(matches!(
        load_sequence(&dir.path().join("missing.y4m"), InputFormat::Y4m, None),
        Err(Error::Io { .. })
    ));
}

#[test]
fn pgm_directory_is_sorted_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let video = panning_video(32, 16, 3, 5, 4).unwrap();
    // written out of order on purpose
    for (name, idx) in [
        ("frame_002.pgm", 1),
        ("frame_000.pgm", 0),
        ("frame_001.pgm", 2),
    ] {
        let f = &video.frames()[idx];
        fs::write(dir.path().join(name), encode_pgm(32, 16, f.samples())).unwrap();
    }
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let seq = load_sequence(dir.path(), InputFormat::PgmSequence, None).unwrap();
    assert_eq!(seq.frame_count(), 3);
    assert_eq!(seq.frames()[0], video.frames()[0]);
    assert_eq!(seq.frames()[1], video.frames()[2]);
    assert_eq!(seq.frames()[2], video.frames()[1]);
}

#[test]
fn manifest_files_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (video, _) = mixed_scene(256, 128, 5, 32, 3, 9).unwrap();
    let config = SamplerConfig::eps(32, 2);
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    write_manifest(&sample_video(&video, &config).unwrap(), &a).unwrap();
    write_manifest(&sample_video(&video, &config).unwrap(), &b).unwrap();
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let back = read_manifest(&a).unwrap();
    assert_eq!(back.to_text(), fs::read_to_string(&a).unwrap());
}

#[test]
fn static_video_reselects_first_frame_everywhere() {
    let video = static_video(256, 128, 6, 5).unwrap();
    let m = sample_video(&video, &SamplerConfig::eps(32, 2)).unwrap();
    let first = &m.frames[0].selected;
    assert!(!first.is_empty());
    for f in &m.frames[1..] {
        assert_eq!(&f.selected, first);
        // every TF is 0: degenerate range puts them all in the top bin
        assert_eq!(f.tf_threshold, Some(0.0));
    }
    let expected = 6 * first.len();
    assert_eq!(m.stats.total_selected, expected);
    assert_eq!(m.stats.fraction, expected as f64 / (6 * 32) as f64);
}

#[test]
fn emitted_scores_survive_the_roundtrip() {
    let (video, _) = mixed_scene(128, 64, 3, 32, 2, 1).unwrap();
    let m = sample(&video, &SamplerConfig::eps(32, 3), true).unwrap();
    let scores = m.frames[1].scores.as_ref().unwrap();
    assert_eq!(scores.len(), 8);
    assert!(scores.iter().all(|(_, tf)| tf.is_some()));
    assert!(m.frames[0]
        .scores
        .as_ref()
        .unwrap()
        .iter()
        .all(|(_, tf)| tf.is_none()));
    let text = m.to_text();
    assert!(text.contains("  score 1 3 "));
    assert_eq!(SelectionManifest::parse(&text).unwrap(), m.canonicalized());
}

#[test]
fn summary_reports_percentages() {
    let video = panning_video(960, 540, 3, 4, 3).unwrap();
    let all = sample_video(&video, &SamplerConfig::eps(64, 1)).unwrap();
    assert!(summarize(&all).contains("100.00 %"));
    assert_eq!(all.stats.total_selected, 360);
}

fn arb_manifest() -> impl Strategy<Value = SelectionManifest> {
    (1usize..5, 1usize..4, 1usize..6, any::<bool>()).prop_flat_map(|(cols, rows, frames, emit)| {
        let cells = cols * rows;
        let frame = (
            prop::collection::btree_set(0..cells, 0..=cells),
            0.0f64..1e6,
            0.0f64..1e6,
            prop::collection::vec((0.0f64..1e5, 0.0f64..1e5), cells),
        );
        prop::collection::vec(frame, frames).prop_map(move |fs| {
            let grid = eps::frame_io::slice_grid(cols * 8, rows * 8 + 3, 8, 8).unwrap();
            let frames = fs
                .into_iter()
                .enumerate()
                .map(|(i, (sel, st, tt, sc))| eps::FrameSelection {
                    frame: i + 1,
                    selected: sel.into_iter().map(|k| grid.coords(k)).collect(),
                    sf_threshold: Some(st),
                    tf_threshold: (i > 0).then_some(tt),
                    scores: emit.then(|| {
                        sc.into_iter()
                            .map(|(s, t)| (s, (i > 0).then_some(t)))
                            .collect()
                    }),
                })
                .collect::<Vec<_>>();
            let input = eps::InputDescriptor {
                path: "some dir/clip.y4m".into(),
                format: "y4m".into(),
                width: grid.frame_width,
                height: grid.frame_height,
                frames: frames.len(),
                first_frame: 1,
            };
            SelectionManifest::new(SamplerConfig::eps(8, 3), input, grid, frames)
        })
    })
}

proptest! {
    #[test]
    fn manifest_text_roundtrip(m in arb_manifest()) {
        let text = m.to_text();
        let back = SelectionManifest::parse(&text).unwrap();
        prop_assert_eq!(&back, &m.canonicalized());
        prop_assert_eq!(back.to_text(), text);
    }
}
