//! Bubble-tree census for a given charge, with dimensions and the contraction order.
//!
//! `cargo run --example census -- 3`

use bubbletree::tree::{enumerate_trees, hasse_dot};

fn main() {
    let k: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let trees = enumerate_trees(k);
    let ghosts = trees.iter().filter(|t| t.is_ghost_tree()).count();
    println!("K = {k}: {} trees, {ghosts} ghost", trees.len());
    for t in &trees {
        let tag = if t.is_ghost_tree() { "ghost" } else { "" };
        println!("  {:<24} {:<6} dim {}", t.to_string(), tag, t.dimension());
    }
    if k <= 2 {
        print!("{}", hasse_dot(&trees));
    }
}
