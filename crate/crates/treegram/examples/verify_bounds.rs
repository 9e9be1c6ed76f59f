//! Check the length bounds the codec promises, tree by tree.

use treegram::{
    check_per_leaf_bound, codeword_length, entropy_length_bound, enumerate_trees, gamma_fn,
    verify_domination, BinaryTree, DominationReport, DominationWitness, LeafCentricModel,
};

fn main() {
    // Every codeword stays within 5(N-1) + N H(p) bits.
    for text in ["(LL)", "((LL)(LL))", "(((L(LL))(LL))(L(LL)))"] {
        let t = BinaryTree::parse(text).unwrap();
        let bits = codeword_length(&t).unwrap();
        let bound = entropy_length_bound(&t).unwrap();
        println!("{text}: {bits} bits <= bound {bound:.4}");
        assert!(bits as f64 <= bound + 1e-9);
    }
    let mut worst_slack = f64::INFINITY;
    for n in 2..=10u64 {
        for t in enumerate_trees(n).unwrap() {
            let slack = entropy_length_bound(&t).unwrap() - codeword_length(&t).unwrap() as f64;
            assert!(slack >= -1e-9);
            worst_slack = worst_slack.min(slack);
        }
    }
    println!("tightest slack over all trees up to 10 leaves: {worst_slack:.4} bits");
    println!();

    // A witness function turns per-tree bounds into per-leaf ones. The
    // model floor max(1/K_n, P(t)) under bisection is valid already at
    // K = 1: split products dominate and level sums stay below n.
    let witness = DominationWitness::model_floor(LeafCentricModel::Bisection, 1).unwrap();
    match verify_domination(&witness, 10).unwrap() {
        DominationReport::Satisfied => println!("bisection floor witness valid up to n=10"),
        violation => panic!("unexpected {violation:?}"),
    }

    // Constant weight 1 fails: level sums grow like the Catalan numbers.
    let ones = DominationWitness::constant_one(2).unwrap();
    match verify_domination(&ones, 10).unwrap() {
        DominationReport::SumViolation { n, sum, bound } => {
            println!("constant witness breaks at n={n}: sum {sum:.0} > {bound:.0}");
        }
        other => panic!("expected a sum violation, got {other:?}"),
    }
    println!();

    // With a valid witness the per-leaf codeword length is controlled by
    // the representation ratio alone: (L + log2 lambda)/|t| <= 12 gamma(r).
    println!(
        "gamma(1) = {}, gamma(1/2) = {}",
        gamma_fn(1.0).unwrap(),
        gamma_fn(0.5).unwrap()
    );
    let mut checked = 0u64;
    for n in 2..=10u64 {
        for t in enumerate_trees(n).unwrap() {
            assert!(check_per_leaf_bound(&t, &witness).unwrap());
            checked += 1;
        }
    }
    println!("per-leaf bound holds on all {checked} trees with 2..=10 leaves");
}
