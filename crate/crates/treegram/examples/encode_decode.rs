//! Encode two trees, inspect the four codeword parts, and decode back.

use treegram::{build_grammar, compute_parts, decode, encode, BinaryTree};

fn show(text: &str) {
    let tree = BinaryTree::parse(text).expect("fixture parses");
    let bits = encode(&tree).expect("fixture encodes");
    println!("tree     {text}");
    println!("leaves   {}", tree.num_leaves());
    println!("codeword {} ({} bits)", bits.to_text(), bits.len());

    if let Ok(grammar) = build_grammar(&tree) {
        if grammar.n_vars() >= 3 {
            let parts = compute_parts(&grammar).expect("parts assemble");
            println!(
                "parts    B1={} B2={} B3={} B4={}",
                parts.b1.to_text(),
                parts.b2.to_text(),
                parts.b3.to_text(),
                parts.b4.to_text()
            );
            println!(
                "index    {} of {} orderings, {} bits",
                parts.index, parts.type_class_size, parts.m_bits
            );
        }
    }

    let (back, consumed) = decode(&bits).expect("own codeword decodes");
    assert_eq!(back, tree);
    assert_eq!(consumed, bits.len());
    println!("decoded  {} using all {consumed} bits", back.to_text());
    println!();
}

fn main() {
    show("(LL)");
    show("(((L(LL))(LL))(L(LL)))");
    show("(((((LL)L)(L(LL)))(L(LL)))((((LL)L)(L(LL)))L))");

    // A strict prefix of a codeword never decodes: the parts carry their
    // own end markers, so truncation is always detected.
    let bits = encode(&BinaryTree::parse("(((L(LL))(LL))(L(LL)))").unwrap()).unwrap();
    let mut prefix = treegram::BitString::new();
    for i in 0..bits.len() - 1 {
        prefix.push(bits.get(i).unwrap());
    }
    match decode(&prefix) {
        Err(e) => println!("decoding a {}-bit prefix fails: {e}", prefix.len()),
        Ok(_) => unreachable!("prefixes never decode"),
    }
}
