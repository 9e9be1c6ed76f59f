//! Draw trees from the built-in sources and check what they promise.

use treegram::{
    enumerate_trees, BinaryTree, DepthCentricModel, LeafCentricModel, Sigma1StarReport,
};

fn main() {
    // Leaf-centric sources fix the leaf count and pick how each internal
    // vertex splits it. Bisection splits as evenly as possible, so eight
    // leaves give exactly one shape.
    let bisection = LeafCentricModel::Bisection;
    for seed in 0..3 {
        let t = bisection.sample(8, seed).unwrap();
        println!("bisection n=8 seed={seed}: {}", t.to_text());
        assert_eq!(t.num_leaves(), 8);
    }
    println!();

    // Uniform-split spreads over all balanced-enough splits and its
    // probabilities stay normalized across each universe.
    let quarter = LeafCentricModel::uniform_split(1, 4).unwrap();
    for n in [2u64, 5, 8] {
        let mass: f64 = enumerate_trees(n)
            .unwrap()
            .iter()
            .map(|t| {
                let log2_p = quarter.log2_prob(t).unwrap();
                if log2_p == f64::NEG_INFINITY {
                    0.0
                } else {
                    log2_p.exp2()
                }
            })
            .sum();
        println!("uniform-split(1/4) total mass over {n}-leaf trees: {mass:.9}");
        assert!((mass - 1.0).abs() < 1e-9);
    }
    match quarter.check_sigma1_star(24) {
        Sigma1StarReport::Bounded { max_ratio } => {
            println!("split balance ratio stays at most {max_ratio}");
        }
        Sigma1StarReport::NotSatisfied { max_ratio } => {
            unreachable!("uniform-split is balanced, saw ratio {max_ratio}")
        }
    }
    println!();

    // Depth-centric sources fix the depth instead. A gap model forces one
    // child to full depth and caps how far the other may fall behind, so
    // the leaf count is a function of depth alone.
    let gap = DepthCentricModel::gap(1).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for seed in 0..6 {
        let t = gap.sample(5, seed).unwrap();
        assert_eq!(t.depth(), 5);
        assert_eq!(t.num_leaves(), 13);
        seen.insert(t.to_text());
    }
    println!(
        "gap(1) at depth 5: every sample has 13 leaves; {} distinct shapes in 6 draws",
        seen.len()
    );
    for d in 0..=10u64 {
        print!("{} ", gap.leaf_count_by_depth(d).unwrap());
    }
    println!(" <- leaf counts by depth");

    // Sampling is a pure function of (size, seed).
    let a = gap.sample(7, 42).unwrap();
    let b = gap.sample(7, 42).unwrap();
    assert_eq!(a, b);
    let c = gap.sample(7, 43).unwrap();
    println!(
        "seed 42 twice gives the same tree; seed 43 {}",
        if a == c { "matches too" } else { "differs" }
    );

    // Models over a free split table are parsed from text.
    let table = treegram::SplitTable::parse("2 1 1 1.0\n3 1 2 0.5\n3 2 1 0.5\n").unwrap();
    let model = LeafCentricModel::from_table(table).unwrap();
    let t = model.sample(3, 9).unwrap();
    println!("table model sampled: {}", t.to_text());
    assert_eq!(t.num_leaves(), 3);
    let dead = model.sample(5, 0);
    println!(
        "sampling 5 leaves from a table without level 5: {}",
        dead.unwrap_err()
    );
    let _: BinaryTree = model.sample(2, 0).unwrap();
}
