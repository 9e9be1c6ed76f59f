//! Measurements around the code: empirical entropy, the closed-form bound
//! on encoded length, witness functions for per-leaf length bounds, and
//! exact plus Monte-Carlo per-leaf redundancy benchmarks with CSV output.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::codec::{codeword_length, CodecError};
use crate::grammar::{build_grammar, representation_ratio, s_sequences, GrammarError};
use crate::sources::{mix, DepthCentricModel, LeafCentricModel, SourceError};
use crate::tree::{catalan, enumerate_trees, BinaryTree, TreeError};

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    /// Argument outside [0, 1].
    DomainError {
        value: f64,
    },
    /// A distribution needs at least one occurrence.
    EmptyDistribution,
    /// A benchmark needs at least one size and one sample per size.
    EmptyBench,
    /// Witness constants must be positive.
    ZeroK,
    /// The single-leaf tree has no codeword and no grammar.
    TrivialTree,
    Tree(TreeError),
    Grammar(GrammarError),
    Codec(CodecError),
    Source(SourceError),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::DomainError { value } => {
                write!(f, "argument {value} is outside [0, 1]")
            }
            AnalysisError::EmptyDistribution => write!(f, "empty symbol distribution"),
            AnalysisError::EmptyBench => {
                write!(f, "benchmark needs at least one size and one sample")
            }
            AnalysisError::ZeroK => write!(f, "witness constant must be positive"),
            AnalysisError::TrivialTree => write!(f, "a single leaf has no codeword"),
            AnalysisError::Tree(e) => write!(f, "{e}"),
            AnalysisError::Grammar(e) => write!(f, "{e}"),
            AnalysisError::Codec(e) => write!(f, "{e}"),
            AnalysisError::Source(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AnalysisError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            AnalysisError::Tree(e) => Some(e),
            AnalysisError::Grammar(e) => Some(e),
            AnalysisError::Codec(e) => Some(e),
            AnalysisError::Source(e) => Some(e),
            _ => None,
        }
    }
}

impl From<TreeError> for AnalysisError {
    fn from(e: TreeError) -> AnalysisError {
        AnalysisError::Tree(e)
    }
}

impl From<GrammarError> for AnalysisError {
    fn from(e: GrammarError) -> AnalysisError {
        match e {
            GrammarError::TrivialTree => AnalysisError::TrivialTree,
            other => AnalysisError::Grammar(other),
        }
    }
}

impl From<CodecError> for AnalysisError {
    fn from(e: CodecError) -> AnalysisError {
        match e {
            CodecError::TrivialTree => AnalysisError::TrivialTree,
            other => AnalysisError::Codec(other),
        }
    }
}

impl From<SourceError> for AnalysisError {
    fn from(e: SourceError) -> AnalysisError {
        match e {
            SourceError::TrivialTree => AnalysisError::TrivialTree,
            other => AnalysisError::Source(other),
        }
    }
}

/// First-order empirical distribution of a symbol sequence: every present
/// symbol gets probability count / length.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    probs: Vec<f64>,
}

impl EmpiricalDistribution {
    /// Distribution from occurrence counts; zero counts are absent symbols.
    pub fn from_counts(counts: &[u64]) -> Result<EmpiricalDistribution, AnalysisError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(AnalysisError::EmptyDistribution);
        }
        let probs = counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| c as f64 / total as f64)
            .collect();
        Ok(EmpiricalDistribution { probs })
    }

    /// Distribution of the symbols occurring in `symbols`.
    pub fn from_symbols<T: Ord>(symbols: &[T]) -> Result<EmpiricalDistribution, AnalysisError> {
        if symbols.is_empty() {
            return Err(AnalysisError::EmptyDistribution);
        }
        let mut counts: BTreeMap<&T, u64> = BTreeMap::new();
        for sym in symbols {
            *counts.entry(sym).or_insert(0) += 1;
        }
        let total = symbols.len() as f64;
        let probs = counts.values().map(|&c| c as f64 / total).collect();
        Ok(EmpiricalDistribution { probs })
    }

    /// Probabilities of the present symbols; each is positive and they sum
    /// to one up to rounding.
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.probs.iter().map(|&p| -p * p.log2()).sum()
    }
}

/// `-(x/2) log2 (x/2)` on [0, 1], extended continuously by 0 at x = 0.
pub fn gamma_fn(x: f64) -> Result<f64, AnalysisError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(AnalysisError::DomainError { value: x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let half = x / 2.0;
    Ok(-half * half.log2())
}

/// Closed-form bound on the encoded length: `5(N - 1) + N H(p)` bits, with
/// N the grammar variable count and p the empirical distribution of the
/// reduced rule sequence S1. `encode` never exceeds it: the four codeword
/// parts spend under five bits per variable plus an index of at most
/// `N log2 N - sum log2 (f_a!)` bits, which entropy bounds from above.
pub fn entropy_length_bound(t: &BinaryTree) -> Result<f64, AnalysisError> {
    let g = build_grammar(t)?;
    let seqs = s_sequences(&g)?;
    let dist = EmpiricalDistribution::from_symbols(&seqs.s1)?;
    let n = f64::from(g.n_vars());
    Ok(5.0 * (n - 1.0) + n * dist.entropy())
}

/// Weight function over trees used in per-leaf length bounds.
///
/// A witness pairs a positive constant K with an evaluator lambda taking
/// values in (0, 1] with lambda(leaf) = 1. A witness is valid when
/// lambda(t) <= lambda(left) lambda(right) for every tree and the sum of
/// lambda over all trees with n leaves lies in [1, n^K] for every n;
/// `verify_domination` checks both conditions exhaustively.
#[derive(Debug, Clone)]
pub struct DominationWitness {
    k: u32,
    kind: WitnessKind,
}

#[derive(Debug, Clone)]
enum WitnessKind {
    ModelFloor(LeafCentricModel),
    ConstantOne,
}

impl DominationWitness {
    /// lambda(t) = max(1 / K_n, P(t)) for t with n leaves, where K_n counts
    /// the trees with n leaves and P is the model probability. Dominates the
    /// model pointwise; both validity conditions hold because probabilities
    /// multiply across subtrees and K_i K_j <= K_{i+j}.
    pub fn model_floor(
        model: LeafCentricModel,
        k: u32,
    ) -> Result<DominationWitness, AnalysisError> {
        if k == 0 {
            return Err(AnalysisError::ZeroK);
        }
        Ok(DominationWitness {
            k,
            kind: WitnessKind::ModelFloor(model),
        })
    }

    /// lambda(t) = 1 for every tree. Splits multiply trivially but the
    /// per-size sums grow like K_n, so validity fails at moderate sizes.
    pub fn constant_one(k: u32) -> Result<DominationWitness, AnalysisError> {
        if k == 0 {
            return Err(AnalysisError::ZeroK);
        }
        Ok(DominationWitness {
            k,
            kind: WitnessKind::ConstantOne,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// log2 lambda(t); always finite since lambda(t) >= 1 / K_n > 0.
    pub fn log2_lambda(&self, t: &BinaryTree) -> Result<f64, AnalysisError> {
        if t.is_leaf() {
            return Ok(0.0);
        }
        match &self.kind {
            WitnessKind::ConstantOne => Ok(0.0),
            WitnessKind::ModelFloor(model) => {
                let floor = -log2_biguint(&catalan(t.num_leaves()));
                let log2_p = model.log2_prob(t)?;
                Ok(floor.max(log2_p))
            }
        }
    }
}

/// log2 of a positive big integer, exact to f64 precision at any size.
fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).log2();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_u64().expect("shifted to 53 bits") as f64;
    top.log2() + shift as f64
}

/// Outcome of the exhaustive witness validity check.
#[derive(Debug, Clone, PartialEq)]
pub enum DominationReport {
    Satisfied,
    /// lambda(tree) exceeds lambda(left) lambda(right); log2 values shown.
    SplitViolation {
        tree: String,
        log2_whole: f64,
        log2_parts: f64,
    },
    /// The sum of lambda over trees with n leaves left [1, n^K].
    SumViolation {
        n: u64,
        sum: f64,
        bound: f64,
    },
}

/// Check both witness validity conditions over every tree with at most
/// `n_max` leaves and report the first violation in size order: the split
/// product condition per tree, then the per-size sum window [1, n^K].
pub fn verify_domination(
    witness: &DominationWitness,
    n_max: u64,
) -> Result<DominationReport, AnalysisError> {
    for n in 1..=n_max {
        let mut sum = 0.0f64;
        for t in enumerate_trees(n)? {
            let log2_whole = witness.log2_lambda(&t)?;
            if let Some((left, right)) = t.children() {
                let log2_parts = witness.log2_lambda(left)? + witness.log2_lambda(right)?;
                if log2_whole > log2_parts + 1e-9 {
                    return Ok(DominationReport::SplitViolation {
                        tree: t.to_text(),
                        log2_whole,
                        log2_parts,
                    });
                }
            }
            sum += log2_whole.exp2();
        }
        let bound = (n as f64).powi(i32::try_from(witness.k).unwrap_or(i32::MAX));
        if sum < 1.0 - 1e-9 || sum > bound + 1e-9 {
            return Ok(DominationReport::SumViolation { n, sum, bound });
        }
    }
    Ok(DominationReport::Satisfied)
}

/// Per-leaf length bound under a witness: true iff
/// `(L + log2 lambda(t)) / |t| <= (2K + 10) gamma(N / |t|)` up to 1e-9,
/// with L the codeword length in bits.
pub fn check_per_leaf_bound(
    t: &BinaryTree,
    witness: &DominationWitness,
) -> Result<bool, AnalysisError> {
    let leaves = t.num_leaves();
    if leaves < 2 {
        return Err(AnalysisError::TrivialTree);
    }
    let bits = codeword_length(t)? as f64;
    let log2_lambda = witness.log2_lambda(t)?;
    let ratio = representation_ratio(t)?;
    let lhs = (bits + log2_lambda) / leaves as f64;
    let rhs = (2.0 * f64::from(witness.k) + 10.0) * gamma_fn(ratio)?;
    Ok(lhs <= rhs + 1e-9)
}

/// Exact per-leaf redundancy of the code at size n under a leaf-centric
/// model: the sum over all n-leaf trees of `(L + log2 P(t)) P(t) / n`,
/// skipping zero-probability trees.
pub fn redundancy_exact(model: &LeafCentricModel, n: u64) -> Result<f64, AnalysisError> {
    if n < 2 {
        return Err(AnalysisError::TrivialTree);
    }
    let mut acc = 0.0f64;
    for t in enumerate_trees(n)? {
        let log2_p = model.log2_prob(&t)?;
        if log2_p == f64::NEG_INFINITY {
            continue;
        }
        let bits = codeword_length(&t)? as f64;
        acc += (bits + log2_p) * log2_p.exp2() / n as f64;
    }
    Ok(acc)
}

/// Sampler driving a Monte-Carlo benchmark. The size parameter of a run is
/// a leaf count for leaf-centric models and a depth for depth-centric ones.
#[derive(Debug, Clone)]
pub enum BenchModel {
    Leaf(LeafCentricModel),
    Depth(DepthCentricModel),
}

impl BenchModel {
    /// Sample one tree; `size` is a leaf count or a depth per the variant.
    pub fn sample(&self, size: u64, seed: u64) -> Result<BinaryTree, SourceError> {
        match self {
            BenchModel::Leaf(m) => m.sample(size, seed),
            BenchModel::Depth(m) => m.sample(size, seed),
        }
    }

    /// log2 of the tree probability under the wrapped model.
    pub fn log2_prob(&self, t: &BinaryTree) -> Result<f64, SourceError> {
        match self {
            BenchModel::Leaf(m) => m.log2_prob(t),
            BenchModel::Depth(m) => m.log2_prob(t),
        }
    }
}

/// One benchmark row: per-leaf averages over `samples` trees at size `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: u64,
    pub samples: u64,
    pub mean_bits_per_leaf: f64,
    pub mean_info_per_leaf: f64,
    /// Per-leaf gap between codeword length and self-information; equals
    /// `mean_bits_per_leaf - mean_info_per_leaf` by construction.
    pub redundancy: f64,
    pub mean_repr_ratio: f64,
    pub seed: u64,
}

/// Sample `samples` trees per size, encode each, and average the per-leaf
/// codeword length, self-information, and representation ratio. Every trial
/// reseeds from (seed, size, trial index), so records are independent of
/// evaluation order and reruns are byte-identical.
pub fn redundancy_monte_carlo(
    model: &BenchModel,
    sizes: &[u64],
    samples: u64,
    seed: u64,
) -> Result<Vec<BenchRecord>, AnalysisError> {
    if sizes.is_empty() || samples == 0 {
        return Err(AnalysisError::EmptyBench);
    }
    let mut records = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let mut sum_bits = 0.0f64;
        let mut sum_info = 0.0f64;
        let mut sum_ratio = 0.0f64;
        for trial in 0..samples {
            let trial_seed = mix(mix(mix(seed) ^ size) ^ trial);
            let t = model.sample(size, trial_seed)?;
            let leaves = t.num_leaves() as f64;
            sum_bits += codeword_length(&t)? as f64 / leaves;
            sum_info += -model.log2_prob(&t)? / leaves;
            sum_ratio += representation_ratio(&t)?;
        }
        let scale = 1.0 / samples as f64;
        let mean_bits_per_leaf = sum_bits * scale;
        let mean_info_per_leaf = sum_info * scale;
        records.push(BenchRecord {
            n: size,
            samples,
            mean_bits_per_leaf,
            mean_info_per_leaf,
            redundancy: mean_bits_per_leaf - mean_info_per_leaf,
            mean_repr_ratio: sum_ratio * scale,
            seed,
        });
    }
    Ok(records)
}

pub const BENCH_CSV_HEADER: &str =
    "n,samples,mean_bits_per_leaf,mean_info_per_leaf,redundancy,mean_repr_ratio,seed";

/// Write records as CSV under `BENCH_CSV_HEADER`, one row per record, with
/// reals rendered to 12 significant digits.
pub fn write_bench_csv<W: Write>(out: &mut W, records: &[BenchRecord]) -> io::Result<()> {
    writeln!(out, "{BENCH_CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            r.samples,
            format_sig(r.mean_bits_per_leaf),
            format_sig(r.mean_info_per_leaf),
            format_sig(r.redundancy),
            format_sig(r.mean_repr_ratio),
            r.seed
        )?;
    }
    Ok(())
}

/// Fixed 12-significant-digit decimal rendering without exponent notation.
fn format_sig(value: f64) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return "0.00000000000".to_string();
    }
    let sci = format!("{value:e}");
    let exp: i32 = sci[sci.find('e').expect("exponent marker") + 1..]
        .parse()
        .expect("exponent digits");
    let decimals = (11 - exp).max(0) as usize;
    format!("{value:.decimals$}")
}
