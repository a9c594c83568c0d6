//! Fixed-point sums on projective space, and a link pairing on ℂ^N.

use bubbletree::algebra::{parse_laurent, SymbolTable};
use bubbletree::localization::{boundary_pairing, localize_sum, FixedLocusDatum, LocusDataset};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/cp2.json");
    let ds: LocusDataset = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let loci = ds.to_loci().unwrap();
    println!("∫ H² over CP² = {}", localize_sum(&loci).unwrap());

    // weight-1 action on ℂ³: one fixed point with Euler class u³
    let table = SymbolTable::with(&[("a", 0)]).unwrap();
    let origin = FixedLocusDatum::point("0", parse_laurent("1", &table).unwrap(), parse_laurent("u^3", &table).unwrap());
    let gamma = parse_laurent("-1/2*a*u", &table).unwrap();
    println!("link pairing on ℂ³ = {}", boundary_pairing(&[origin], &gamma, 3).unwrap());
}
