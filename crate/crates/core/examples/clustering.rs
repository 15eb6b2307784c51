//! Equal-width histogram clustering of a score vector.
//!
//!     cargo run --example clustering -- 3 0.5 1 2 8 9 10

use eps::cluster_histogram;

fn main() -> eps::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let mut scores: Vec<f64> = args.filter_map(|a| a.parse().ok()).collect();
    if scores.is_empty() {
        scores = vec![0.5, 1.0, 2.0, 8.0, 9.0, 10.0];
    }
    let c = cluster_histogram(&scores, n)?;
    println!("edges     {:?}", c.edges());
    println!("sizes     {:?}", c.cluster_sizes());
    println!("threshold {}", c.top_threshold());
    for (s, bin) in scores.iter().zip(c.assignment()) {
        println!("  {s:>10} -> bin {bin}");
    }
    println!("top bin   {:?}", c.top_members());
    Ok(())
}
