//! Patch-grid arithmetic: how many whole patches fit a frame, and where they sit.
//!
//!     cargo run --example grid_tiling -- 960 540 64

use eps::slice_grid;

fn main() -> eps::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (width, height, patch) = match args[..] {
        [w, h, p] => (w, h, p),
        _ => (960, 540, 64),
    };
    let grid = slice_grid(width, height, patch, patch)?;
    println!("{width}x{height} with {patch}x{patch} patches");
    println!(
        "  grid     {} cols x {} rows = {} patches",
        grid.cols,
        grid.rows,
        grid.len()
    );
    println!("  per 30 frames: {}", grid.len() * 30);
    println!(
        "  dropped  {} px on the right, {} px at the bottom",
        width - grid.cols * patch,
        height - grid.rows * patch
    );
    let (y, x) = grid.origin(grid.rows - 1, grid.cols - 1);
    println!("  last patch origin (y, x) = ({y}, {x})");
    Ok(())
}
