//! Prefix-free codeword for a grammar, as four concatenated parts.
//!
//! For a grammar with `N` variables let `S` be its rule sequence, `f_i` the
//! occurrence count of nonterminal `i` in `S` and `f_T` the count of the
//! terminal. `S1` is `S` with first occurrences removed, a permutation of a
//! known multiset once the counts are known. The codeword is:
//!
//! * `B1`: `N-2` zeros then a one, announcing `N`.
//! * `B2`: `2N-2` bits flagging the first-occurrence positions in `S`.
//! * `B3`: the counts `f_1 .. f_{N-2}` as alternating maximal runs starting
//!   with ones, closed by a single opposite bit. `f_T` follows by subtraction.
//! * `B4`: the index of `S1` in the lexicographic list of its type class,
//!   written MSB-first in exactly `⌈log₂ card⌉` bits.
//!
//! The two-variable grammar (the two-leaf tree) gets the one-bit codeword
//! `1`. Every part's length is computable from what precedes it, which is
//! what makes the code prefix-free, and a decoder can stop after exactly one
//! codeword even when trailing bits follow.
//!
//! Ranks and type-class sizes grow super-exponentially, so all index
//! arithmetic is unbounded-precision. Factors are folded in one symbol at a
//! time with exact stepwise division; nothing materializes factorials.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bits::{BitReader, BitString};
use crate::grammar::{
    build_grammar, expand_grammar, merge_s, s_sequences, Grammar, GrammarError, Symbol,
};
use crate::tree::BinaryTree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodecError {
    /// The single-leaf tree has no codeword.
    TrivialTree,
    /// Input ended in the middle of a codeword part.
    Truncated,
    /// The first-occurrence mask does not carry exactly N-2 ones.
    MalformedB2,
    /// Run structure impossible: wrong leading bit, or the derived terminal
    /// count would be below two.
    MalformedB3,
    /// Index at or beyond the type-class size.
    IndexOutOfRange,
    /// Symbol counts that no rule sequence can have.
    InconsistentFrequencies,
    /// Decoded rules fail grammar invariants (cycle, duplicate rule, or
    /// non-canonical labeling), so no tree encodes to this input.
    Grammar(GrammarError),
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::TrivialTree => write!(f, "a single leaf has no codeword"),
            CodecError::Truncated => write!(f, "input ended inside a codeword part"),
            CodecError::MalformedB2 => {
                write!(f, "first-occurrence mask has the wrong number of ones")
            }
            CodecError::MalformedB3 => write!(f, "frequency runs are malformed"),
            CodecError::IndexOutOfRange => write!(f, "permutation index out of range"),
            CodecError::InconsistentFrequencies => write!(f, "impossible symbol frequencies"),
            CodecError::Grammar(e) => write!(f, "decoded grammar is invalid: {e}"),
        }
    }
}

impl std::error::Error for CodecError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CodecError::Grammar(e) => Some(e),
            _ => None,
        }
    }
}

impl From<GrammarError> for CodecError {
    fn from(e: GrammarError) -> CodecError {
        match e {
            GrammarError::TrivialTree => CodecError::TrivialTree,
            other => CodecError::Grammar(other),
        }
    }
}

/// Occurrence counts of every variable in a rule sequence `S`.
///
/// `nonterminal[i]` is the count of nonterminal `i + 1`; the start variable
/// never occurs in `S` and is not represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolFreqs {
    pub nonterminal: Vec<u64>,
    pub terminal: u64,
}

impl SymbolFreqs {
    /// Count occurrences over an explicit rule sequence.
    pub fn from_sequence(s: &[Symbol], n_vars: u32) -> SymbolFreqs {
        let mut freqs = SymbolFreqs {
            nonterminal: vec![0; n_vars as usize - 2],
            terminal: 0,
        };
        for &sym in s {
            match sym {
                Symbol::Terminal => freqs.terminal += 1,
                Symbol::Nonterminal(id) => freqs.nonterminal[id as usize - 1] += 1,
            }
        }
        freqs
    }

    pub fn n_vars(&self) -> u32 {
        self.nonterminal.len() as u32 + 2
    }

    /// Check that these counts can come from a rule sequence: each
    /// nonterminal occurs, the terminal occurs at least twice, and the total
    /// is the sequence length `2N-2`.
    pub fn validate(&self) -> Result<(), CodecError> {
        let expected_total = 2 * (self.n_vars() as u64) - 2;
        if self.nonterminal.iter().any(|&f| f == 0) || self.terminal < 2 {
            return Err(CodecError::InconsistentFrequencies);
        }
        let total = self.nonterminal.iter().sum::<u64>() + self.terminal;
        if total != expected_total {
            return Err(CodecError::InconsistentFrequencies);
        }
        Ok(())
    }

    /// The multiset of `S1`: one occurrence of each nonterminal is removed
    /// from `S` (it went to `S2`), the terminal keeps its full count.
    pub fn s1_multiset(&self) -> BTreeMap<Symbol, u64> {
        let mut multiset = BTreeMap::new();
        for (i, &f) in self.nonterminal.iter().enumerate() {
            if f > 1 {
                multiset.insert(Symbol::Nonterminal(i as u32 + 1), f - 1);
            }
        }
        multiset.insert(Symbol::Terminal, self.terminal);
        multiset
    }
}

/// Number of distinct permutations of the `S1` multiset:
/// `N! / (f_T! · Π (f_i - 1)!)`.
pub fn type_class_size(freqs: &SymbolFreqs) -> Result<BigUint, CodecError> {
    freqs.validate()?;
    Ok(count_multiset_perms(freqs.s1_multiset().values().copied()))
}

/// Distinct permutations of a multiset given its counts, built up one symbol
/// at a time so intermediate values stay exact binomials.
fn count_multiset_perms<I: IntoIterator<Item = u64>>(counts: I) -> BigUint {
    let mut result = BigUint::one();
    let mut n = 0u64;
    for c in counts {
        for j in 1..=c {
            n += 1;
            result = result * n / j;
        }
    }
    result
}

/// Prefix-sum tree over symbol counts; lets rank and unrank touch only
/// `log(alphabet)` entries per position instead of rescanning all counts.
struct Fenwick {
    tree: Vec<u64>,
}

impl Fenwick {
    fn new(counts: &[u64]) -> Fenwick {
        let mut tree = vec![0u64; counts.len() + 1];
        for (i, &c) in counts.iter().enumerate() {
            tree[i + 1] += c;
            let parent = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if parent < tree.len() {
                tree[parent] += tree[i + 1];
            }
        }
        Fenwick { tree }
    }

    /// Sum of counts at indices `< i`.
    fn prefix(&self, i: usize) -> u64 {
        let mut sum = 0;
        let mut idx = i;
        while idx > 0 {
            sum += self.tree[idx];
            idx &= idx - 1;
        }
        sum
    }

    fn decrement(&mut self, i: usize) {
        let mut idx = i + 1;
        while idx < self.tree.len() {
            self.tree[idx] -= 1;
            idx += idx & idx.wrapping_neg();
        }
    }

    /// Index of the element holding the `k`-th remaining item (0-based):
    /// the smallest `i` with `prefix(i + 1) > k`.
    fn select(&self, mut k: u64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0usize;
        let mut step = if n == 0 {
            0
        } else {
            1usize << (usize::BITS - 1 - n.leading_zeros())
        };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= k {
                k -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }
}

/// 0-based index of `seq` in the lexicographic list of all distinct
/// permutations of its own multiset, under the symbol order
/// `1 < 2 < … < T`. The list is never materialized: at each position the
/// number of completions starting with a strictly smaller symbol is added.
pub fn rank_multiset_perm(seq: &[Symbol]) -> BigUint {
    let mut counts: BTreeMap<Symbol, u64> = BTreeMap::new();
    for &sym in seq {
        *counts.entry(sym).or_insert(0) += 1;
    }
    let alphabet: Vec<Symbol> = counts.keys().copied().collect();
    let count_list: Vec<u64> = counts.values().copied().collect();
    let index_of: BTreeMap<Symbol, usize> =
        alphabet.iter().enumerate().map(|(i, &s)| (s, i)).collect();

    let mut fenwick = Fenwick::new(&count_list);
    let mut remaining_counts = count_list;
    // Permutation count of the still-unplaced suffix.
    let mut perms = count_multiset_perms(remaining_counts.iter().copied());
    let mut rank = BigUint::zero();
    let mut len = seq.len() as u64;
    for &sym in seq {
        let idx = index_of[&sym];
        let smaller = fenwick.prefix(idx);
        if smaller > 0 {
            rank += &perms * smaller / len;
        }
        perms = perms * remaining_counts[idx] / len;
        remaining_counts[idx] -= 1;
        fenwick.decrement(idx);
        len -= 1;
    }
    rank
}

/// Inverse of [`rank_multiset_perm`]: the permutation of `multiset` at
/// lexicographic position `index`. `length` must equal the multiset's total
/// count (`InconsistentFrequencies` otherwise), and `index` must be below
/// the type-class size (`IndexOutOfRange`).
pub fn unrank_multiset_perm(
    index: &BigUint,
    multiset: &BTreeMap<Symbol, u64>,
    length: usize,
) -> Result<Vec<Symbol>, CodecError> {
    let total: u64 = multiset.values().sum();
    if total != length as u64 {
        return Err(CodecError::InconsistentFrequencies);
    }
    let alphabet: Vec<Symbol> = multiset.keys().copied().collect();
    let mut remaining_counts: Vec<u64> = multiset.values().copied().collect();
    let mut perms = count_multiset_perms(remaining_counts.iter().copied());
    if index >= &perms {
        return Err(CodecError::IndexOutOfRange);
    }

    let mut fenwick = Fenwick::new(&remaining_counts);
    let mut idx = index.clone();
    let mut out = Vec::with_capacity(length);
    let mut len = total;
    for _ in 0..length {
        // Completions starting with symbol `a` number perms·count(a)/len, so
        // the block holding `idx` starts at cumulative count floor(idx·len/perms).
        let q = (&idx * len / &perms)
            .to_u64()
            .expect("block offset is below the remaining length");
        let chosen = fenwick.select(q);
        let before = fenwick.prefix(chosen);
        if before > 0 {
            idx -= &perms * before / len;
        }
        perms = perms * remaining_counts[chosen] / len;
        remaining_counts[chosen] -= 1;
        fenwick.decrement(chosen);
        len -= 1;
        out.push(alphabet[chosen]);
    }
    Ok(out)
}

/// The four codeword parts of a grammar plus the quantities that shaped
/// them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodewordParts {
    pub b1: BitString,
    pub b2: BitString,
    pub b3: BitString,
    pub b4: BitString,
    pub n_vars: u32,
    pub freqs: SymbolFreqs,
    pub type_class_size: BigUint,
    pub index: BigUint,
    pub m_bits: u64,
}

impl CodewordParts {
    /// `B1‖B2‖B3‖B4`.
    pub fn concat(&self) -> BitString {
        let mut bits = BitString::with_capacity(self.total_len());
        for part in [&self.b1, &self.b2, &self.b3, &self.b4] {
            bits.append(part);
        }
        bits
    }

    pub fn total_len(&self) -> usize {
        self.b1.len() + self.b2.len() + self.b3.len() + self.b4.len()
    }
}

/// `⌈log₂ x⌉`, with the convention that values of 0 and 1 need no bits.
fn ceil_log2(x: &BigUint) -> u64 {
    if x <= &BigUint::one() {
        0
    } else {
        (x - 1u32).bits()
    }
}

/// Assemble all four codeword parts of a grammar with at least three
/// variables; the two-variable grammar is [`encode`]d as the single bit `1`
/// and has no part decomposition.
pub fn compute_parts(g: &Grammar) -> Result<CodewordParts, CodecError> {
    if g.n_vars() < 3 {
        return Err(CodecError::Grammar(GrammarError::MalformedGrammar(
            "part decomposition needs at least three variables",
        )));
    }
    let n = g.n_vars();
    let seq = s_sequences(g)?;
    let freqs = SymbolFreqs::from_sequence(&seq.s, n);
    let card = type_class_size(&freqs)?;
    let index = rank_multiset_perm(&seq.s1);
    let m_bits = ceil_log2(&card);

    let mut b1 = BitString::with_capacity(n as usize - 1);
    b1.push_run(false, n as usize - 2);
    b1.push(true);

    let b2: BitString = seq.first_mask.iter().copied().collect();

    let mut b3 = BitString::new();
    for (i, &f) in freqs.nonterminal.iter().enumerate() {
        b3.push_run(i % 2 == 0, f as usize);
    }
    b3.push(freqs.nonterminal.len() % 2 == 0);

    let mut b4 = BitString::with_capacity(m_bits as usize);
    for k in (0..m_bits).rev() {
        b4.push(index.bit(k));
    }

    Ok(CodewordParts {
        b1,
        b2,
        b3,
        b4,
        n_vars: n,
        freqs,
        type_class_size: card,
        index,
        m_bits,
    })
}

/// Codeword of a tree with at least two leaves.
pub fn encode(t: &BinaryTree) -> Result<BitString, CodecError> {
    let g = build_grammar(t)?;
    if g.n_vars() == 2 {
        let mut bits = BitString::new();
        bits.push(true);
        return Ok(bits);
    }
    Ok(compute_parts(&g)?.concat())
}

/// Codeword length in bits, without ranking the permutation. Only the
/// type-class size is needed (for the width of `B4`), so this is much
/// cheaper than [`encode`] on large trees.
pub fn codeword_length(t: &BinaryTree) -> Result<u64, CodecError> {
    let g = build_grammar(t)?;
    let n = g.n_vars() as u64;
    if n == 2 {
        return Ok(1);
    }
    let seq = s_sequences(&g)?;
    let freqs = SymbolFreqs::from_sequence(&seq.s, g.n_vars());
    let card = type_class_size(&freqs)?;
    let b3_len = (2 * n - 2 - freqs.terminal) + 1;
    Ok((n - 1) + (2 * n - 2) + b3_len + ceil_log2(&card))
}

/// Decode the unique tree whose codeword is a prefix of `bits`; returns the
/// tree and the number of bits consumed. Trailing bits are left untouched.
pub fn decode(bits: &BitString) -> Result<(BinaryTree, usize), CodecError> {
    let mut reader = BitReader::new(bits);

    // B1: zeros announce N, the closing one is part of the count.
    let mut zeros = 0usize;
    loop {
        match reader.read_bit() {
            Some(true) => break,
            Some(false) => zeros += 1,
            None => return Err(CodecError::Truncated),
        }
    }
    if zeros == 0 {
        return Ok((
            BinaryTree::internal(BinaryTree::Leaf, BinaryTree::Leaf),
            reader.pos(),
        ));
    }
    let n = zeros + 2;

    // B2: the first-occurrence mask, exactly N-2 ones among 2N-2 bits.
    if reader.remaining() < 2 * n - 2 {
        return Err(CodecError::Truncated);
    }
    let mut mask = Vec::with_capacity(2 * n - 2);
    for _ in 0..2 * n - 2 {
        mask.push(reader.read_bit().expect("length checked above"));
    }
    if mask.iter().filter(|&&b| b).count() != n - 2 {
        return Err(CodecError::MalformedB2);
    }

    // B3: N-2 maximal runs then one closing bit. Each run ends at the first
    // bit flip; the flip closing the final run is the closing bit itself.
    let first = reader.read_bit().ok_or(CodecError::Truncated)?;
    if !first {
        return Err(CodecError::MalformedB3);
    }
    let mut nonterminal = Vec::with_capacity((n - 2).min(reader.remaining() + 1));
    let mut current = true;
    let mut run = 1u64;
    while nonterminal.len() < n - 2 {
        let bit = reader.read_bit().ok_or(CodecError::Truncated)?;
        if bit == current {
            run += 1;
        } else {
            nonterminal.push(run);
            current = bit;
            run = 1;
        }
    }
    let used: u64 = nonterminal.iter().sum();
    let seq_len = 2 * n as u64 - 2;
    // Addition form: `used` may already exceed `seq_len`.
    if used + 2 > seq_len {
        return Err(CodecError::MalformedB3);
    }
    let freqs = SymbolFreqs {
        nonterminal,
        terminal: seq_len - used,
    };

    // B4: the permutation index, exactly ⌈log₂ card⌉ bits.
    let card = type_class_size(&freqs).expect("counts are consistent by construction");
    let m_bits = ceil_log2(&card);
    if (reader.remaining() as u64) < m_bits {
        return Err(CodecError::Truncated);
    }
    let mut index = BigUint::zero();
    for _ in 0..m_bits {
        index <<= 1;
        if reader.read_bit().expect("length checked above") {
            index += 1u32;
        }
    }
    if index >= card {
        return Err(CodecError::IndexOutOfRange);
    }

    // Rebuild the grammar and insist on canonical form, so that only true
    // codewords decode; anything else would break the prefix argument.
    let s1 = unrank_multiset_perm(&index, &freqs.s1_multiset(), n)?;
    let s2: Vec<Symbol> = (1..=n as u32 - 2).map(Symbol::Nonterminal).collect();
    let s = merge_s(&s1, &s2, &mask)?;
    let rules = s.chunks_exact(2).map(|pair| (pair[0], pair[1])).collect();
    let g = Grammar::from_rules(rules)?;
    g.validate()?;
    let seq = s_sequences(&g)?;
    if seq.first_mask != mask {
        return Err(CodecError::Grammar(GrammarError::MalformedGrammar(
            "first-occurrence mask does not match the decoded rules",
        )));
    }
    let tree = expand_grammar(&g)?;
    Ok((tree, reader.pos()))
}
