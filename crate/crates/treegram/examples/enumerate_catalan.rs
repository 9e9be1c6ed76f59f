//! Walk the tree universes: Catalan counts, codeword lengths, Kraft sums.

use treegram::{catalan, codeword_length, enumerate_trees};

fn main() {
    println!(
        "{:>3} {:>8} {:>9} {:>9} {:>10}",
        "n", "catalan", "min bits", "max bits", "kraft sum"
    );
    for n in 2..=10u64 {
        let trees = enumerate_trees(n).expect("within cap");
        assert_eq!(catalan(n).to_string(), trees.len().to_string());

        let mut min_bits = u64::MAX;
        let mut max_bits = 0u64;
        let mut kraft = 0.0f64;
        for t in &trees {
            let bits = codeword_length(t).expect("every tree encodes");
            min_bits = min_bits.min(bits);
            max_bits = max_bits.max(bits);
            kraft += (-(bits as f64)).exp2();
        }
        // Prefix-free codes keep every per-universe Kraft sum at most one.
        assert!(kraft <= 1.0 + 1e-12);
        println!(
            "{n:>3} {:>8} {min_bits:>9} {max_bits:>9} {kraft:>10.6}",
            trees.len()
        );
    }

    // Counts keep following the closed form well past what fits in memory.
    for n in [12u64, 16, 20, 32] {
        println!("catalan({n}) = {}", catalan(n));
    }
}
