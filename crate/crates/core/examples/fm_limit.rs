//! Limit stratum of a family of colliding weighted points.
//!
//! `cargo run --example fm_limit -- crates/core/examples/data/nested.json`

use bubbletree::algebra::format_rational;
use bubbletree::fm::{limit_stratum, screen_center, stratum_format, FamilyJson};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/nested.json").into());
    let text = std::fs::read_to_string(&path).expect("readable family file");
    let fam: FamilyJson = serde_json::from_str(&text).expect("family json");
    let lim = limit_stratum(&fam.to_family().expect("valid family")).expect("limit");
    println!("{}  {}", stratum_format(&lim.tree).expect("configuration tree"), lim.tree);
    for s in &lim.screens {
        let centre: Vec<String> = screen_center(s).iter().map(format_rational).collect();
        println!(
            "screen at vertex {} (order t^{}): members {:?}, centre ({})",
            s.vertex,
            s.order,
            s.members,
            centre.join(",")
        );
    }
}
