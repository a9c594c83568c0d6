//! Strata of the configuration space of weighted points in ℝ⁴.
//!
//! `cargo run --example fm_strata -- 1 1 1`

use bubbletree::fm::{enumerate_fm_strata, stratum_format};

fn main() {
    let mut weights: Vec<u64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if weights.is_empty() {
        weights = vec![1, 1, 1];
    }
    let strata = enumerate_fm_strata(&weights).expect("positive weights");
    println!("weights {weights:?}: {} strata", strata.len());
    for t in &strata {
        println!("  {:<24} {}", stratum_format(t).unwrap(), t);
    }
}
