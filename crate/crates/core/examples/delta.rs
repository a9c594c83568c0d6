//! Wall-crossing terms for levels 0 to 3 with symbolic χ and σ.

use bubbletree::wallcross::{delta_assemble, wall_invariants, DeltaParams};

fn main() {
    for r in 0..=3 {
        let alpha_sq = -4;
        let inv = wall_invariants(alpha_sq, alpha_sq - 4 * r).unwrap();
        let delta = delta_assemble(&inv, &DeltaParams::default()).unwrap();
        println!("r = {}, d = {}, N = {}", inv.r, inv.d, inv.n);
        for (i, a) in delta.coefficients.iter().enumerate() {
            println!(
                "  Qsym^{} Aalpha^{}: {}",
                delta.r as usize - i,
                delta.alpha_exponent(i as u32),
                a
            );
        }
    }
}
