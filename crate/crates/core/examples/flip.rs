//! Flip resolution of the ghost strata for charge K on a manifold with given χ, σ.
//!
//! `cargo run --example flip -- 3 4 0`

use bubbletree::algebra::format_rational;
use bubbletree::flip::resolve;

fn main() {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (k, chi, sigma) = match args[..] {
        [k, c, s] => (k as u64, c, s),
        [k] => (k as u64, 4, 0),
        _ => (3, 4, 0),
    };
    let res = resolve(k, chi, sigma).expect("resolution");
    for (m, n) in &res.rounds {
        println!("round m = {m}: {n} event(s)");
    }
    for e in &res.events {
        let sources: Vec<String> = e.sources.iter().map(ToString::to_string).collect();
        println!("  m = {} handles {{{}}}", e.round, sources.join(", "));
        for x in &e.ends {
            println!(
                "    end at vertex {}: S^{}/{} with fiber dimension {}, weight {}",
                x.vertex,
                x.sphere_dim,
                e.group,
                x.fiber_dim,
                format_rational(&x.multiplicity)
            );
        }
    }
    let left = res.poset.active().filter(|r| r.info.isotropy_dim != 0).count();
    println!("{} active strata, {left} with isotropy", res.poset.active().count());
}
