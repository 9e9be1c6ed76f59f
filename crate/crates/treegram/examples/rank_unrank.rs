//! Enumerative coding: a multiset permutation is stored as its index in
//! the lexicographic list of all orderings, and recovered from it.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use treegram::{
    build_grammar, rank_multiset_perm, s_sequences, type_class_size, unrank_multiset_perm,
    BinaryTree, CodecError, Symbol, SymbolFreqs,
};

fn render(symbols: &[Symbol]) -> String {
    symbols
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn main() {
    // The 16-leaf worked tree: its reduced rule sequence S1 has one 3, one
    // 4, one 6, and five terminals, giving 8!/(5!) = 336 orderings.
    let tree = BinaryTree::parse("(((((LL)L)(L(LL)))(L(LL)))((((LL)L)(L(LL)))L))").unwrap();
    let grammar = build_grammar(&tree).unwrap();
    let seqs = s_sequences(&grammar).unwrap();
    let freqs = SymbolFreqs::from_sequence(&seqs.s, grammar.n_vars());

    let card = type_class_size(&freqs).unwrap();
    let index = rank_multiset_perm(&seqs.s1);
    println!("S1 = ({})", render(&seqs.s1));
    println!("class size {card}, rank {index}");
    assert_eq!(card, BigUint::from(336u32));
    assert_eq!(index, BigUint::from(13u32));

    let back = unrank_multiset_perm(&index, &freqs.s1_multiset(), seqs.s1.len()).unwrap();
    assert_eq!(back, seqs.s1);
    println!("unrank({index}) restores the sequence");
    println!();

    // Rank and unrank are inverse across a whole class; walking the indexes
    // in order lists the orderings lexicographically until the class ends.
    let multiset: BTreeMap<Symbol, u64> =
        [(Symbol::Nonterminal(2), 2), (Symbol::Terminal, 3)].into();
    println!("all orderings of two 2s and three Ts:");
    let mut previous: Option<Vec<Symbol>> = None;
    let mut idx = BigUint::from(0u32);
    loop {
        let perm = match unrank_multiset_perm(&idx, &multiset, 5) {
            Ok(perm) => perm,
            Err(CodecError::IndexOutOfRange) => break,
            Err(e) => panic!("unexpected failure: {e}"),
        };
        assert_eq!(rank_multiset_perm(&perm), idx);
        if let Some(prev) = &previous {
            assert!(prev < &perm);
        }
        println!("  {idx}: ({})", render(&perm));
        previous = Some(perm);
        idx += 1u32;
    }
    assert_eq!(idx, BigUint::from(10u32));
}
