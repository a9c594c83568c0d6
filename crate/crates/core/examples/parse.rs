//! Tree and configuration notation: parse, canonicalise, print.

use bubbletree::notation::{parse_config, parse_tree_with_charge, print_config, print_tree, print_tree_bar};

fn main() {
    for s in ["[0[1,1]]", "[1[0[1,1]]]", "[0~[1 ★1]]", "[0̄ · [0 [1, 1]]]"] {
        match parse_tree_with_charge(s, Some(4)) {
            Ok(t) => println!("{s:<16} -> {:<20} {}", print_tree(&t), print_tree_bar(&t)),
            Err(e) => println!("{s:<16} -> error: {e}"),
        }
    }
    for s in ["[x1[y1,y2,y3]]", "[x1 x2 [y1, y2]]"] {
        let c = parse_config(s).unwrap();
        println!("{s:<16} -> {:<20} {}", print_config(&c), c.to_tree(&|_| 1));
    }
}
