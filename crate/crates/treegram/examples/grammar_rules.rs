//! Collapse trees into minimal-DAG grammars and read off rule sequences.

use treegram::{
    build_grammar, distinct_subtree_count, expand_grammar, representation_ratio, s_sequences,
    BinaryTree,
};

fn show(text: &str) {
    let tree = BinaryTree::parse(text).expect("fixture parses");
    let grammar = build_grammar(&tree).expect("fixture has a grammar");
    println!("tree {text}");
    println!(
        "N = {} distinct subtrees, ratio r = {:.4}",
        distinct_subtree_count(&tree).unwrap(),
        representation_ratio(&tree).unwrap()
    );
    print!("{grammar}");

    let seqs = s_sequences(&grammar).expect("canonical grammars split");
    let render = |syms: &[treegram::Symbol]| {
        syms.iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    println!("S  = ({})", render(&seqs.s));
    println!("S1 = ({})", render(&seqs.s1));
    println!("S2 = ({})", render(&seqs.s2));

    // The grammar is lossless: expanding its start variable restores the tree.
    assert_eq!(expand_grammar(&grammar).unwrap(), tree);
    println!();
}

fn main() {
    // Heavy subtree sharing: the complete tree needs one rule per level.
    show("(((LL)(LL))((LL)(LL)))");
    // No sharing beyond the leaf: a caterpillar keeps every rule distinct.
    show("(L(L(L(LL))))");
    show("(((L(LL))(LL))(L(LL)))");
}
