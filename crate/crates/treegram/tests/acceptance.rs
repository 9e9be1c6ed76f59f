//! Acceptance suite: eleven criteria covering worked-example fidelity,
//! exhaustive small-universe behavior, bound verification, and sampled
//! trends. Each test prints one pass/fail line (visible with --nocapture).

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use treegram::{
    build_grammar, catalan, check_per_leaf_bound, codeword_length, decode, distinct_subtree_count,
    encode, entropy_length_bound, enumerate_trees, enumerate_trees_up_to_depth, rank_multiset_perm,
    redundancy_monte_carlo, s_sequences, unrank_multiset_perm, verify_domination, BenchModel,
    BinaryTree, DepthCentricModel, DominationReport, DominationWitness, LeafCentricModel, Symbol,
};

const EIGHT_LEAF: &str = "(((L(LL))(LL))(L(LL)))";
const EIGHT_LEAF_CODEWORD: &str = "00011101000010011000001";
const SIXTEEN_LEAF: &str = "(((((LL)L)(L(LL)))(L(LL)))((((LL)L)(L(LL)))L))";

fn report(num: u32, name: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("criterion {num:>2}: PASS  {name}  [{detail}]"),
        Err(detail) => {
            println!("criterion {num:>2}: FAIL  {name}  [{detail}]");
            panic!("criterion {num} failed: {detail}");
        }
    }
}

/// splitmix64; the tests derive all pseudo-randomness from it.
fn mix(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[test]
fn criterion_01_sixteen_leaf_tree_encodes_bit_exactly() {
    let outcome = (|| {
        let tree = BinaryTree::parse(SIXTEEN_LEAF).map_err(|e| e.to_string())?;
        let expected = format!(
            "{}{}{}{}",
            "0000001", "11110010010000", "1011001001", "000001101"
        );

        let grammar = build_grammar(&tree).map_err(|e| e.to_string())?;
        let parts = treegram::compute_parts(&grammar).map_err(|e| e.to_string())?;
        for (got, want, label) in [
            (parts.b1.to_text(), "0000001", "B1"),
            (parts.b2.to_text(), "11110010010000", "B2"),
            (parts.b3.to_text(), "1011001001", "B3"),
            (parts.b4.to_text(), "000001101", "B4"),
        ] {
            if got != want {
                return Err(format!("{label} is {got}, expected {want}"));
            }
        }

        let mut best = Duration::MAX;
        let mut bits = encode(&tree).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let start = Instant::now();
            bits = encode(&tree).map_err(|e| e.to_string())?;
            best = best.min(start.elapsed());
        }
        if bits.to_text() != expected {
            return Err(format!("codeword is {}", bits.to_text()));
        }
        if bits.len() != 40 {
            return Err(format!("codeword length is {}", bits.len()));
        }
        if best >= Duration::from_millis(1) {
            return Err(format!("encoding took {best:?}"));
        }
        Ok(format!("7+14+10+9 = 40 bits, {best:?}"))
    })();
    report(
        1,
        "16-leaf worked tree encodes bit-exactly in under 1 ms",
        outcome,
    );
}

#[test]
fn criterion_02_worked_codeword_decodes_to_eight_leaf_tree() {
    let outcome = (|| {
        let bits =
            treegram::BitString::from_text(EIGHT_LEAF_CODEWORD).map_err(|e| e.to_string())?;
        let (tree, consumed) = decode(&bits).map_err(|e| e.to_string())?;
        if tree.to_text() != EIGHT_LEAF {
            return Err(format!("decoded {}", tree.to_text()));
        }
        if consumed != 23 {
            return Err(format!("consumed {consumed} bits"));
        }
        let seqs = s_sequences(&build_grammar(&tree).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let s: Vec<String> = seqs.s.iter().map(|x| x.to_string()).collect();
        if s.join(",") != "1,2,2,3,T,3,T,T" {
            return Err(format!("rule sequence is {}", s.join(",")));
        }
        Ok("23 bits consumed, S = (1,2,2,3,T,3,T,T)".to_string())
    })();
    report(
        2,
        "worked 23-bit codeword decodes to the 8-leaf tree",
        outcome,
    );
}

#[test]
fn criterion_03_exhaustive_roundtrip_prefix_free_kraft() {
    let outcome = (|| {
        let start = Instant::now();
        let mut codewords: Vec<String> = Vec::new();
        let mut total = 0u64;
        for n in 2..=10u64 {
            let mut kraft = 0.0f64;
            for t in enumerate_trees(n).map_err(|e| e.to_string())? {
                let bits = encode(&t).map_err(|e| e.to_string())?;
                let (back, consumed) = decode(&bits).map_err(|e| e.to_string())?;
                if back != t {
                    return Err(format!("roundtrip changed {}", t.to_text()));
                }
                if consumed != bits.len() {
                    return Err(format!(
                        "{} consumed {consumed} of {}",
                        t.to_text(),
                        bits.len()
                    ));
                }
                kraft += (-(bits.len() as f64)).exp2();
                codewords.push(bits.to_text());
                total += 1;
            }
            if kraft > 1.0 + 1e-12 {
                return Err(format!("Kraft sum {kraft} at n={n}"));
            }
        }
        // In a sorted list any prefix pair must sit adjacent.
        codewords.sort();
        for pair in codewords.windows(2) {
            if pair[1].starts_with(&pair[0]) {
                return Err(format!("{} is a prefix of {}", pair[0], pair[1]));
            }
        }
        let elapsed = start.elapsed();
        if elapsed >= Duration::from_secs(10) {
            return Err(format!("took {elapsed:?}"));
        }
        Ok(format!("{total} trees, {elapsed:?}"))
    })();
    report(
        3,
        "exhaustive 2..=10-leaf roundtrip, prefix-free, Kraft <= 1",
        outcome,
    );
}

#[test]
fn criterion_04_entropy_length_bound_never_violated() {
    let outcome = (|| {
        let check = |t: &BinaryTree| -> Result<(), String> {
            let bits = codeword_length(t).map_err(|e| e.to_string())? as f64;
            let bound = entropy_length_bound(t).map_err(|e| e.to_string())?;
            if bits > bound + 1e-9 {
                return Err(format!("{} bits {bits} > bound {bound}", t.to_text()));
            }
            Ok(())
        };

        let mut exhaustive = 0u64;
        for n in 2..=10u64 {
            for t in enumerate_trees(n).map_err(|e| e.to_string())? {
                check(&t)?;
                exhaustive += 1;
            }
        }

        let quarter = LeafCentricModel::uniform_split(1, 4).map_err(|e| e.to_string())?;
        let mut max_leaves = 0u64;
        for trial in 0..1000u64 {
            let seed = mix(0xacce5 ^ trial);
            let t = match trial % 3 {
                0 => {
                    let n = [100, 1_000, 10_000, 100_000][(trial as usize / 3) % 4];
                    LeafCentricModel::Bisection
                        .sample(n, seed)
                        .map_err(|e| e.to_string())?
                }
                1 => {
                    let n = 50 + (trial * 97) % 1951;
                    quarter.sample(n, seed).map_err(|e| e.to_string())?
                }
                _ => {
                    let m = 1 + trial % 3;
                    let d = 5 + trial % 16;
                    DepthCentricModel::gap(m)
                        .map_err(|e| e.to_string())?
                        .sample(d, seed)
                        .map_err(|e| e.to_string())?
                }
            };
            max_leaves = max_leaves.max(t.num_leaves());
            check(&t)?;
        }
        Ok(format!(
            "{exhaustive} enumerated + 1000 sampled trees, largest {max_leaves} leaves"
        ))
    })();
    report(4, "codeword length <= 5(N-1) + N H(p) everywhere", outcome);
}

#[test]
fn criterion_05_enumeration_counts_match_catalan() {
    let outcome = (|| {
        for n in 0..=12u64 {
            let count = enumerate_trees(n).map_err(|e| e.to_string())?.len();
            if BigUint::from(count) != catalan(n) {
                return Err(format!(
                    "{count} trees at n={n}, catalan says {}",
                    catalan(n)
                ));
            }
        }
        if catalan(16) != BigUint::from(9_694_845u64) {
            return Err(format!("catalan(16) = {}", catalan(16)));
        }
        Ok("n <= 12 enumerated, catalan(16) = 9694845".to_string())
    })();
    report(5, "tree universes count by the Catalan numbers", outcome);
}

#[test]
fn criterion_06_source_probabilities_normalize() {
    let outcome = (|| {
        let quarter = LeafCentricModel::uniform_split(1, 4).map_err(|e| e.to_string())?;
        for (label, model) in [
            ("bisection", LeafCentricModel::Bisection),
            ("uniform-split(1/4)", quarter),
        ] {
            for n in 2..=8u64 {
                let mut mass = 0.0f64;
                for t in enumerate_trees(n).map_err(|e| e.to_string())? {
                    let log2_p = model.log2_prob(&t).map_err(|e| e.to_string())?;
                    if log2_p > f64::NEG_INFINITY {
                        mass += log2_p.exp2();
                    }
                }
                if (mass - 1.0).abs() > 1e-9 {
                    return Err(format!("{label} sums to {mass} at n={n}"));
                }
            }
        }
        for m in [1u64, 2] {
            let model = DepthCentricModel::gap(m).map_err(|e| e.to_string())?;
            for d in 1..=4u64 {
                let mut mass = 0.0f64;
                for t in enumerate_trees_up_to_depth(d).map_err(|e| e.to_string())? {
                    if t.depth() != d {
                        continue;
                    }
                    let log2_p = model.log2_prob(&t).map_err(|e| e.to_string())?;
                    if log2_p > f64::NEG_INFINITY {
                        mass += log2_p.exp2();
                    }
                }
                if (mass - 1.0).abs() > 1e-9 {
                    return Err(format!("gap({m}) sums to {mass} at depth {d}"));
                }
            }
        }
        Ok("two leaf-centric models at n <= 8, two gap models at d <= 4".to_string())
    })();
    report(
        6,
        "source probabilities sum to one on every universe",
        outcome,
    );
}

#[test]
fn criterion_07_grammar_size_equals_distinct_subtree_oracle() {
    let outcome = (|| {
        let mut checked = 0u64;
        for n in 2..=10u64 {
            for t in enumerate_trees(n).map_err(|e| e.to_string())? {
                let mut seen = HashSet::new();
                for v in t.breadth_first_vertices() {
                    let sub = t.subtree_at(&v).map_err(|e| e.to_string())?;
                    seen.insert(sub.to_text());
                }
                let fast = distinct_subtree_count(&t).map_err(|e| e.to_string())?;
                if fast as usize != seen.len() {
                    return Err(format!(
                        "{}: N = {fast}, oracle sees {}",
                        t.to_text(),
                        seen.len()
                    ));
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} trees against the subtree-set oracle"))
    })();
    report(
        7,
        "minimal grammar size matches brute-force subtree counting",
        outcome,
    );
}

#[test]
fn criterion_08_rank_and_unrank_are_inverse() {
    let outcome = (|| {
        // Random multiset permutations over small alphabets, lengths <= 64.
        for trial in 0..10_000u64 {
            let mut state = mix(0x4a4b ^ trial);
            let mut step = || {
                state = mix(state);
                state
            };
            let length = 2 + (step() % 63) as usize;
            let alphabet = 1 + step() % 5;
            let seq: Vec<Symbol> = (0..length)
                .map(|_| match step() % (alphabet + 1) {
                    0 => Symbol::Terminal,
                    id => Symbol::Nonterminal(id as u32),
                })
                .collect();
            let mut counts: BTreeMap<Symbol, u64> = BTreeMap::new();
            for &s in &seq {
                *counts.entry(s).or_insert(0) += 1;
            }
            let rank = rank_multiset_perm(&seq);
            let back = unrank_multiset_perm(&rank, &counts, length).map_err(|e| e.to_string())?;
            if back != seq {
                return Err(format!("unrank(rank) changed a length-{length} sequence"));
            }
        }

        // Lengths <= 8: rank must equal the position in the materialized
        // lexicographic list, including both worked reduced sequences.
        let mut cases: Vec<(Vec<Symbol>, Option<(usize, Vec<Symbol>)>)> = vec![
            (symbols(&[0, 0, -1, -1, -1]), None),
            (symbols(&[0, 1, 2, -1, -1]), None),
            (symbols(&[-1, -1, -1, -1]), None),
            (symbols(&[0, 0, 1, 1, -1, -1, -1, -1]), None),
        ];
        for (text, want_rank) in [(SIXTEEN_LEAF, 13usize), (EIGHT_LEAF, 1usize)] {
            let tree = BinaryTree::parse(text).map_err(|e| e.to_string())?;
            let seqs = s_sequences(&build_grammar(&tree).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            cases.push((seqs.s1.clone(), Some((want_rank, seqs.s1))));
        }
        for (sample, expectation) in cases {
            let mut counts: BTreeMap<Symbol, u64> = BTreeMap::new();
            for &s in &sample {
                *counts.entry(s).or_insert(0) += 1;
            }
            let list = materialize(&counts, sample.len());
            for (position, perm) in list.iter().enumerate() {
                if rank_multiset_perm(perm) != BigUint::from(position) {
                    return Err(format!("rank mismatch at list position {position}"));
                }
                let back = unrank_multiset_perm(&BigUint::from(position), &counts, sample.len())
                    .map_err(|e| e.to_string())?;
                if &back != perm {
                    return Err(format!("unrank mismatch at list position {position}"));
                }
            }
            if let Some((want_rank, s1)) = expectation {
                if list[want_rank] != s1 {
                    return Err(format!("worked sequence is not at index {want_rank}"));
                }
            }
        }
        Ok("10000 random inversions, full lists for 6 multisets".to_string())
    })();
    report(
        8,
        "enumerative rank/unrank invert and match materialized lists",
        outcome,
    );
}

fn symbols(ids: &[i64]) -> Vec<Symbol> {
    ids.iter()
        .map(|&id| {
            if id < 0 {
                Symbol::Terminal
            } else {
                Symbol::Nonterminal(id as u32 + 1)
            }
        })
        .collect()
}

/// Every permutation of the multiset, in lexicographic symbol order.
fn materialize(counts: &BTreeMap<Symbol, u64>, length: usize) -> Vec<Vec<Symbol>> {
    fn go(
        counts: &mut BTreeMap<Symbol, u64>,
        length: usize,
        prefix: &mut Vec<Symbol>,
        out: &mut Vec<Vec<Symbol>>,
    ) {
        if prefix.len() == length {
            out.push(prefix.clone());
            return;
        }
        let symbols: Vec<Symbol> = counts.keys().copied().collect();
        for s in symbols {
            let left = counts[&s];
            if left == 0 {
                continue;
            }
            *counts.get_mut(&s).unwrap() = left - 1;
            prefix.push(s);
            go(counts, length, prefix, out);
            prefix.pop();
            *counts.get_mut(&s).unwrap() = left;
        }
    }
    let mut counts = counts.clone();
    let mut out = Vec::new();
    go(&mut counts, length, &mut Vec::new(), &mut out);
    out
}

#[test]
fn criterion_09_redundancy_and_ratio_trends() {
    let outcome = (|| {
        let start = Instant::now();
        let bisection = BenchModel::Leaf(LeafCentricModel::Bisection);
        let records = redundancy_monte_carlo(&bisection, &[100, 1_000, 10_000], 200, 7)
            .map_err(|e| e.to_string())?;
        if records[2].redundancy >= records[0].redundancy {
            return Err(format!(
                "redundancy {} at n=10^4 vs {} at n=10^2",
                records[2].redundancy, records[0].redundancy
            ));
        }
        // Endpoint comparison only: bisection per-leaf statistics oscillate
        // with log2(n), so the ratio at n=10^4 exceeds the one at n=10^3.
        if records[2].mean_repr_ratio >= records[0].mean_repr_ratio {
            return Err(format!(
                "mean ratio {} at n=10^4 vs {} at n=10^2",
                records[2].mean_repr_ratio, records[0].mean_repr_ratio
            ));
        }
        let gap = BenchModel::Depth(DepthCentricModel::gap(1).map_err(|e| e.to_string())?);
        let depth_records =
            redundancy_monte_carlo(&gap, &[5, 10, 20], 200, 7).map_err(|e| e.to_string())?;
        for pair in depth_records.windows(2) {
            if pair[1].mean_repr_ratio >= pair[0].mean_repr_ratio {
                return Err(format!(
                    "gap(1) mean ratio went {} -> {} between d={} and d={}",
                    pair[0].mean_repr_ratio, pair[1].mean_repr_ratio, pair[0].n, pair[1].n
                ));
            }
        }
        let elapsed = start.elapsed();
        if elapsed >= Duration::from_secs(60) {
            return Err(format!("took {elapsed:?}"));
        }
        Ok(format!(
            "redundancy {:.4} -> {:.4} bits/leaf, ratios fall, {elapsed:?}",
            records[0].redundancy, records[2].redundancy
        ))
    })();
    report(
        9,
        "seed-7 trends: redundancy and representation ratio shrink",
        outcome,
    );
}

#[test]
fn criterion_10_gap_model_leaf_counts_follow_the_recurrence() {
    let outcome = (|| {
        let mut checked = 0u64;
        for m in 1..=3u64 {
            let model = DepthCentricModel::gap(m).map_err(|e| e.to_string())?;
            for d in 1..=20u64 {
                let expected = model.leaf_count_by_depth(d).map_err(|e| e.to_string())?;
                for seed in 0..100u64 {
                    let t = model.sample(d, mix(seed)).map_err(|e| e.to_string())?;
                    if BigUint::from(t.num_leaves()) != expected {
                        return Err(format!(
                            "gap({m}) depth {d} seed {seed}: {} leaves, expected {expected}",
                            t.num_leaves()
                        ));
                    }
                    if t.depth() != d {
                        return Err(format!("gap({m}) sample has depth {}", t.depth()));
                    }
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} samples across m in 1..=3, d in 1..=20"))
    })();
    report(
        10,
        "gap-model samples have the recurrence-determined leaf count",
        outcome,
    );
}

#[test]
fn criterion_11_per_leaf_bound_with_measured_minimal_k() {
    let outcome = (|| {
        let mut minimal_k = None;
        for k in 1..=8u32 {
            let w = DominationWitness::model_floor(LeafCentricModel::Bisection, k)
                .map_err(|e| e.to_string())?;
            if verify_domination(&w, 8).map_err(|e| e.to_string())? == DominationReport::Satisfied {
                minimal_k = Some(k);
                break;
            }
        }
        let k = minimal_k.ok_or("no valid witness constant up to 8")?;
        let witness = DominationWitness::model_floor(LeafCentricModel::Bisection, k)
            .map_err(|e| e.to_string())?;
        let mut checked = 0u64;
        for n in 2..=8u64 {
            for t in enumerate_trees(n).map_err(|e| e.to_string())? {
                if !check_per_leaf_bound(&t, &witness).map_err(|e| e.to_string())? {
                    return Err(format!("bound fails at {}", t.to_text()));
                }
                checked += 1;
            }
        }
        Ok(format!("minimal K = {k}, {checked} trees checked"))
    })();
    report(
        11,
        "per-leaf bound holds exhaustively under the floor witness",
        outcome,
    );
}
