//! Walls crossed by a path of period points, with their signs and invariants.

use bubbletree::algebra::{format_rational, int};
use bubbletree::wallcross::{enumerate_walls, IntersectionForm, WallOptions};

fn main() {
    let q = IntersectionForm::diagonal(&[1, -1, -1]);
    let c = [1, 1, 0];
    let p1 = -8;
    let from = [int(3), int(2), int(1)];
    let to = [int(3), int(-1), int(-2)];
    println!("b+ = {}, signature = {}", q.b_plus(), q.signature());
    let s = enumerate_walls(&q, &c, p1, &from, &to, WallOptions::default()).unwrap();
    for w in &s.walls {
        let inv = w.invariants.map(|i| format!("r={} d={} N={}", i.r, i.d, i.n)).unwrap_or_default();
        println!(
            "α = {:?}  α² = {}  t* = {}  ε = {:?}  {inv}",
            w.alpha,
            w.alpha_sq,
            format_rational(&w.t_star),
            w.epsilon
        );
    }
    for d in &s.degenerate {
        println!("endpoint lies on the wall of {d:?}");
    }
}
