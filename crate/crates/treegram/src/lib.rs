//! Lossless compression of full binary trees.
//!
//! A tree is collapsed into its minimal DAG by sharing repeated subtrees,
//! read off as a canonical arity-2 grammar, and serialized into a
//! prefix-free bitstring in four parts: a unary variable count, a
//! first-occurrence mask over the rule sequence, run-length coded symbol
//! frequencies, and an enumerative index locating the reduced rule sequence
//! inside its permutation class. Decoding inverts every step exactly, so
//! `decode(encode(t)) = t` and no codeword is a prefix of another.
//!
//! Around the codec sit probabilistic tree sources whose splits depend on
//! children leaf counts ([`LeafCentricModel`]) or depths
//! ([`DepthCentricModel`]), deterministic samplers for them, and
//! measurement tools: entropy, the closed-form length bound, witness-based
//! per-leaf bounds, and exact or Monte-Carlo redundancy benchmarks.
//!
//! Runnable tours live in `examples/`:
//!
//! - `encode_decode`: the codeword anatomy of two worked trees, roundtrip.
//! - `grammar_rules`: minimal DAG grammars and their rule sequences.
//! - `enumerate_catalan`: tree universes, Catalan counts, codeword tables.
//! - `rank_unrank`: enumerative coding of multiset permutations.
//! - `sample_sources`: drawing trees from the built-in sources.
//! - `bench_redundancy`: per-leaf redundancy trends as sizes grow.
//! - `verify_bounds`: length bounds and witness conditions, exhaustively.
//!
//! The `treegram` binary exposes the same workflows as subcommands
//! (`encode`, `decode`, `gen`, `enumerate`, `bench`, `stats`).

pub mod analysis;
pub mod bits;
pub mod cli;
pub mod codec;
pub mod grammar;
pub mod sources;
pub mod tree;

pub use analysis::{
    check_per_leaf_bound, entropy_length_bound, gamma_fn, redundancy_exact, redundancy_monte_carlo,
    verify_domination, write_bench_csv, AnalysisError, BenchModel, BenchRecord, DominationReport,
    DominationWitness, EmpiricalDistribution,
};
pub use bits::{BitReader, BitString, BitStringError};
pub use codec::{
    codeword_length, compute_parts, decode, encode, rank_multiset_perm, type_class_size,
    unrank_multiset_perm, CodecError, CodewordParts, SymbolFreqs,
};
pub use grammar::{
    build_grammar, distinct_subtree_count, expand_grammar, representation_ratio, s_sequences,
    Grammar, GrammarError, SSequences, Symbol,
};
pub use sources::{
    DepthCentricModel, LeafCentricModel, Sigma1StarReport, Sigma2StarReport, SourceError,
    SplitTable,
};
pub use tree::{
    catalan, enumerate_trees, enumerate_trees_up_to_depth, BinaryTree, TreeError,
    DEFAULT_ENUMERATION_CAP,
};
