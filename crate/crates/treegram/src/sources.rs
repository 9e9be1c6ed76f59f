//! Probabilistic sources over full binary trees.
//!
//! A leaf-centric model assigns each internal vertex a split probability
//! `sigma(i, j)` over the leaf counts of its two subtrees, normalized for
//! every total `i + j = n >= 2`. A depth-centric model does the same over
//! subtree depths, normalized over pairs with `max(i, j) = n - 1` for every
//! `n >= 1`. The probability of a tree is the product over its internal
//! vertices; everything here works in log2 domain because those products
//! underflow quickly, with negative infinity as the explicit zero.
//!
//! Sampling uses a counter-based splittable generator: every vertex derives
//! its own state from the seed and its path, so a sample is a pure function
//! of (model, size, seed) and subtrees could even be drawn in parallel.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::tree::{BinaryTree, FlatNode, FlatTree};

#[derive(Debug, Clone, PartialEq)]
pub enum SourceError {
    /// The operation needs a tree with at least two leaves, or a target
    /// size/depth that admits one.
    TrivialTree,
    InvalidSpec(String),
    /// A table file line that does not parse.
    TableFormat {
        line: usize,
        reason: String,
    },
    /// A parsed table row whose shape is wrong for the model kind.
    BadTableRow {
        level: u64,
        i: u64,
        j: u64,
        reason: &'static str,
    },
    /// Split probabilities at one level do not sum to one.
    NotNormalized {
        level: u64,
        total: f64,
    },
    /// Sampling needed a split at this size or depth but the support there
    /// is empty.
    DeadEnd {
        at: u64,
    },
    /// The model does not put a single depth gap on every level, so the
    /// size-by-depth law does not apply.
    NotSigma2Star,
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceError::TrivialTree => write!(f, "needs a tree with at least two leaves"),
            SourceError::InvalidSpec(reason) => write!(f, "invalid model spec: {reason}"),
            SourceError::TableFormat { line, reason } => {
                write!(f, "table line {line}: {reason}")
            }
            SourceError::BadTableRow {
                level,
                i,
                j,
                reason,
            } => {
                write!(f, "table row ({level}, {i}, {j}): {reason}")
            }
            SourceError::NotNormalized { level, total } => {
                write!(f, "probabilities at level {level} sum to {total}, not 1")
            }
            SourceError::DeadEnd { at } => write!(f, "empty split support at level {at}"),
            SourceError::NotSigma2Star => {
                write!(f, "model does not have exactly one depth gap per level")
            }
        }
    }
}

impl std::error::Error for SourceError {}

/// Split probabilities read from `n i j p` rows.
///
/// Rows are grouped by level `n`; `#` starts a comment. Each touched level
/// must sum to 1 within 1e-9. Zero-probability rows are legal and checked
/// for shape but dropped from the support.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SplitTable {
    levels: BTreeMap<u64, Vec<(u64, u64, f64)>>,
}

impl SplitTable {
    pub fn parse(text: &str) -> Result<SplitTable, SourceError> {
        let mut levels: BTreeMap<u64, Vec<(u64, u64, f64)>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(SourceError::TableFormat {
                    line,
                    reason: format!("expected 4 fields `n i j p`, found {}", fields.len()),
                });
            }
            let parse_int = |s: &str| -> Result<u64, SourceError> {
                s.parse().map_err(|_| SourceError::TableFormat {
                    line,
                    reason: format!("not an unsigned integer: {s:?}"),
                })
            };
            let n = parse_int(fields[0])?;
            let i = parse_int(fields[1])?;
            let j = parse_int(fields[2])?;
            let p: f64 = fields[3].parse().map_err(|_| SourceError::TableFormat {
                line,
                reason: format!("not a number: {:?}", fields[3]),
            })?;
            if !(0.0..=1.0).contains(&p) {
                return Err(SourceError::TableFormat {
                    line,
                    reason: format!("probability {p} outside [0, 1]"),
                });
            }
            let rows = levels.entry(n).or_default();
            if rows.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
                return Err(SourceError::TableFormat {
                    line,
                    reason: format!("duplicate split ({i}, {j}) for level {n}"),
                });
            }
            rows.push((i, j, p));
        }
        for (&n, rows) in &mut levels {
            let total: f64 = rows.iter().map(|&(_, _, p)| p).sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(SourceError::NotNormalized { level: n, total });
            }
            rows.retain(|&(_, _, p)| p > 0.0);
            rows.sort_by_key(|&(i, j, _)| (i, j));
        }
        Ok(SplitTable { levels })
    }

    /// Supported splits at one level, sorted by `(i, j)`.
    pub fn rows(&self, n: u64) -> &[(u64, u64, f64)] {
        self.levels.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn levels(&self) -> impl Iterator<Item = (u64, &[(u64, u64, f64)])> {
        self.levels.iter().map(|(&n, rows)| (n, rows.as_slice()))
    }

    fn prob(&self, n: u64, i: u64, j: u64) -> f64 {
        self.rows(n)
            .iter()
            .find(|&&(a, b, _)| (a, b) == (i, j))
            .map_or(0.0, |&(_, _, p)| p)
    }
}

/// Splits by leaf count. `sigma(i, j)` is the probability that a subtree
/// with `i + j` leaves puts `i` of them on the left.
#[derive(Clone, Debug, PartialEq)]
pub enum LeafCentricModel {
    /// Halve as evenly as possible: the even split is certain, the two
    /// near-halves of an odd total get 1/2 each.
    Bisection,
    /// Uniform over all splits that give each side at least a `numer/denom`
    /// fraction of the leaves. The fraction is kept as an exact rational so
    /// support boundaries never suffer float rounding.
    UniformSplit {
        numer: u64,
        denom: u64,
    },
    Table(SplitTable),
}

/// Verdict of the bounded-split-ratio check for leaf-centric models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sigma1StarReport {
    /// Largest observed (or proven) value of (i+j)/min(i,j).
    Bounded { max_ratio: f64 },
    /// The ratio was still growing in the top half of the scanned range.
    NotSatisfied { max_ratio: f64 },
}

impl LeafCentricModel {
    /// Uniform-split with an exact fraction in (0, 1/2].
    pub fn uniform_split(numer: u64, denom: u64) -> Result<LeafCentricModel, SourceError> {
        if numer == 0 || denom == 0 || 2 * numer > denom {
            return Err(SourceError::InvalidSpec(
                "uniform-split fraction must be in (0, 1/2]".into(),
            ));
        }
        let g = num_integer::gcd(numer, denom);
        Ok(LeafCentricModel::UniformSplit {
            numer: numer / g,
            denom: denom / g,
        })
    }

    /// Wrap a parsed table, checking every row has `i, j >= 1` and `i + j = n`.
    pub fn from_table(table: SplitTable) -> Result<LeafCentricModel, SourceError> {
        for (n, rows) in table.levels() {
            for &(i, j, _) in rows {
                if i == 0 || j == 0 {
                    return Err(SourceError::BadTableRow {
                        level: n,
                        i,
                        j,
                        reason: "both sides of a leaf split need at least one leaf",
                    });
                }
                if i + j != n {
                    return Err(SourceError::BadTableRow {
                        level: n,
                        i,
                        j,
                        reason: "split sides must sum to the level",
                    });
                }
            }
        }
        Ok(LeafCentricModel::Table(table))
    }

    /// Parse a spec string: `bisection`, `uniform-split,a=<decimal>`, or
    /// `table,file=<path>` (optionally with `mode=leaf`).
    pub fn from_spec(spec: &str) -> Result<LeafCentricModel, SourceError> {
        let (kind, pairs) = split_spec(spec)?;
        match kind {
            "bisection" => {
                expect_keys(&pairs, &[])?;
                Ok(LeafCentricModel::Bisection)
            }
            "uniform-split" => {
                expect_keys(&pairs, &["a"])?;
                let a = require_key(&pairs, "a")?;
                let (numer, denom) = parse_decimal_fraction(a).ok_or_else(|| {
                    SourceError::InvalidSpec(format!("cannot parse fraction {a:?}"))
                })?;
                LeafCentricModel::uniform_split(numer, denom)
            }
            "table" => LeafCentricModel::from_table(load_table_spec(&pairs, "leaf")?),
            other => Err(SourceError::InvalidSpec(format!(
                "unknown leaf model {other:?}"
            ))),
        }
    }

    /// Split probability; zero off the support.
    pub fn sigma(&self, i: u64, j: u64) -> f64 {
        let n = i + j;
        if n < 2 || i == 0 || j == 0 {
            return 0.0;
        }
        match self {
            LeafCentricModel::Bisection => {
                if n % 2 == 0 {
                    if i == j {
                        1.0
                    } else {
                        0.0
                    }
                } else if i.abs_diff(j) == 1 {
                    0.5
                } else {
                    0.0
                }
            }
            LeafCentricModel::UniformSplit { numer, denom } => {
                match uniform_support(*numer, *denom, n) {
                    Some((lo, hi)) if (lo..=hi).contains(&i) => 1.0 / (hi - lo + 1) as f64,
                    _ => 0.0,
                }
            }
            LeafCentricModel::Table(table) => table.prob(n, i, j),
        }
    }

    fn log2_sigma(&self, i: u64, j: u64) -> f64 {
        match self {
            LeafCentricModel::Bisection => match self.sigma(i, j) {
                p if p == 1.0 => 0.0,
                p if p == 0.5 => -1.0,
                _ => f64::NEG_INFINITY,
            },
            LeafCentricModel::UniformSplit { numer, denom } => {
                let n = i + j;
                if i == 0 || j == 0 {
                    return f64::NEG_INFINITY;
                }
                match uniform_support(*numer, *denom, n) {
                    Some((lo, hi)) if (lo..=hi).contains(&i) => -((hi - lo + 1) as f64).log2(),
                    _ => f64::NEG_INFINITY,
                }
            }
            LeafCentricModel::Table(_) => {
                let p = self.sigma(i, j);
                if p > 0.0 {
                    p.log2()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// log2 of the tree's probability: the sum over internal vertices of
    /// log2 sigma(left leaves, right leaves). Negative infinity when any
    /// factor is zero.
    pub fn log2_prob(&self, t: &BinaryTree) -> Result<f64, SourceError> {
        if t.is_leaf() {
            return Err(SourceError::TrivialTree);
        }
        let flat = FlatTree::new(t);
        let leaves = flat.leaf_counts();
        let mut total = 0.0;
        for node in &flat.nodes {
            if let FlatNode::Internal { left, right } = *node {
                total += self.log2_sigma(leaves[left], leaves[right]);
                if total == f64::NEG_INFINITY {
                    break;
                }
            }
        }
        Ok(total)
    }

    /// Draw a tree with exactly `n` leaves, splitting leaf budgets top-down.
    /// Deterministic in `(model, n, seed)`.
    pub fn sample(&self, n: u64, seed: u64) -> Result<BinaryTree, SourceError> {
        if n < 2 {
            return Err(SourceError::TrivialTree);
        }
        sample_tree(n, 1, seed, |k, u| match self {
            LeafCentricModel::Bisection => {
                if k % 2 == 0 {
                    Ok((k / 2, k / 2))
                } else if u < 0.5 {
                    Ok((k / 2, k / 2 + 1))
                } else {
                    Ok((k / 2 + 1, k / 2))
                }
            }
            LeafCentricModel::UniformSplit { numer, denom } => {
                let (lo, hi) =
                    uniform_support(*numer, *denom, k).ok_or(SourceError::DeadEnd { at: k })?;
                let count = hi - lo + 1;
                let i = lo + ((u * count as f64) as u64).min(count - 1);
                Ok((i, k - i))
            }
            LeafCentricModel::Table(table) => draw_from_rows(table.rows(k), k, u),
        })
    }

    /// Largest value of `(i+j)/min(i,j)` over the support with `i+j` up to
    /// `n_max`. For uniform-split the exact bound `denom/numer` is reported
    /// analytically; table models are flagged `NotSatisfied` when the ratio
    /// is still growing in the top half of the scanned range.
    pub fn check_sigma1_star(&self, n_max: u64) -> Sigma1StarReport {
        match self {
            LeafCentricModel::Bisection => {
                let mut max_ratio: f64 = 0.0;
                for n in 2..=n_max {
                    max_ratio = max_ratio.max(n as f64 / (n / 2) as f64);
                }
                Sigma1StarReport::Bounded { max_ratio }
            }
            LeafCentricModel::UniformSplit { numer, denom } => Sigma1StarReport::Bounded {
                max_ratio: *denom as f64 / *numer as f64,
            },
            LeafCentricModel::Table(table) => {
                let half = n_max / 2;
                let mut head: f64 = 0.0;
                let mut tail: f64 = 0.0;
                for (n, rows) in table.levels() {
                    if n > n_max {
                        break;
                    }
                    for &(i, j, _) in rows {
                        let ratio = n as f64 / i.min(j) as f64;
                        if n <= half {
                            head = head.max(ratio);
                        } else {
                            tail = tail.max(ratio);
                        }
                    }
                }
                let max_ratio = head.max(tail);
                if tail > head {
                    Sigma1StarReport::NotSatisfied { max_ratio }
                } else {
                    Sigma1StarReport::Bounded { max_ratio }
                }
            }
        }
    }
}

/// Leftmost and rightmost admissible left-side leaf counts for
/// uniform-split at total `n`, or `None` when the support is empty (which
/// happens for odd `n` once the fraction exceeds `1/2 - 1/(2n)`).
fn uniform_support(numer: u64, denom: u64, n: u64) -> Option<(u64, u64)> {
    let ceil = ((numer as u128 * n as u128).div_ceil(denom as u128)) as u64;
    let lo = ceil.max(1);
    let hi = n - lo;
    if lo <= hi {
        Some((lo, hi))
    } else {
        None
    }
}

/// Splits by subtree depth. `sigma(i, j)` is the probability that a subtree
/// of depth `max(i, j) + 1` has child depths `(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub enum DepthCentricModel {
    /// At depth `n` the shallow child sits `min(max_gap, n-1)` levels below
    /// the deep one, on the left or right with probability 1/2 each.
    Gap {
        max_gap: u64,
    },
    Table(SplitTable),
}

/// Verdict of the depth-gap check for depth-centric models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sigma2StarReport {
    /// Largest `|i - j|` over the supported splits in range.
    pub max_gap: u64,
    /// Whether every scanned level put all its probability on one gap value.
    pub single_gap: bool,
}

impl DepthCentricModel {
    pub fn gap(max_gap: u64) -> Result<DepthCentricModel, SourceError> {
        if max_gap == 0 {
            return Err(SourceError::InvalidSpec("gap must be at least 1".into()));
        }
        Ok(DepthCentricModel::Gap { max_gap })
    }

    /// Wrap a parsed table, checking every row has `max(i, j) = n - 1`.
    pub fn from_table(table: SplitTable) -> Result<DepthCentricModel, SourceError> {
        for (n, rows) in table.levels() {
            for &(i, j, _) in rows {
                if n == 0 || i.max(j) != n - 1 {
                    return Err(SourceError::BadTableRow {
                        level: n,
                        i,
                        j,
                        reason: "the deeper side must sit one level below",
                    });
                }
            }
        }
        Ok(DepthCentricModel::Table(table))
    }

    /// Parse a spec string: `depth-gap,m=<integer>` or `table,file=<path>`
    /// (optionally with `mode=depth`).
    pub fn from_spec(spec: &str) -> Result<DepthCentricModel, SourceError> {
        let (kind, pairs) = split_spec(spec)?;
        match kind {
            "depth-gap" => {
                expect_keys(&pairs, &["m"])?;
                let m = require_key(&pairs, "m")?;
                let max_gap: u64 = m
                    .parse()
                    .map_err(|_| SourceError::InvalidSpec(format!("cannot parse gap {m:?}")))?;
                DepthCentricModel::gap(max_gap)
            }
            "table" => DepthCentricModel::from_table(load_table_spec(&pairs, "depth")?),
            other => Err(SourceError::InvalidSpec(format!(
                "unknown depth model {other:?}"
            ))),
        }
    }

    pub fn sigma(&self, i: u64, j: u64) -> f64 {
        let n = i.max(j) + 1;
        match self {
            DepthCentricModel::Gap { max_gap } => {
                let gap = (*max_gap).min(n - 1);
                let shallow = (n - 1) - gap;
                if i.min(j) != shallow {
                    0.0
                } else if gap == 0 {
                    1.0
                } else {
                    0.5
                }
            }
            DepthCentricModel::Table(table) => table.prob(n, i, j),
        }
    }

    fn log2_sigma(&self, i: u64, j: u64) -> f64 {
        match self.sigma(i, j) {
            p if p == 1.0 => 0.0,
            p if p == 0.5 => -1.0,
            p if p > 0.0 => p.log2(),
            _ => f64::NEG_INFINITY,
        }
    }

    /// log2 of the tree's probability: the sum over internal vertices of
    /// log2 sigma(left depth, right depth).
    pub fn log2_prob(&self, t: &BinaryTree) -> Result<f64, SourceError> {
        if t.is_leaf() {
            return Err(SourceError::TrivialTree);
        }
        let flat = FlatTree::new(t);
        let depths = flat.subtree_depths();
        let mut total = 0.0;
        for node in &flat.nodes {
            if let FlatNode::Internal { left, right } = *node {
                total += self.log2_sigma(depths[left], depths[right]);
                if total == f64::NEG_INFINITY {
                    break;
                }
            }
        }
        Ok(total)
    }

    /// Draw a tree of depth exactly `d`, assigning child depths top-down.
    /// Deterministic in `(model, d, seed)`.
    pub fn sample(&self, d: u64, seed: u64) -> Result<BinaryTree, SourceError> {
        if d < 1 {
            return Err(SourceError::TrivialTree);
        }
        sample_tree(d, 0, seed, |k, u| match self {
            DepthCentricModel::Gap { max_gap } => {
                let gap = (*max_gap).min(k - 1);
                let shallow = (k - 1) - gap;
                if gap == 0 {
                    Ok((k - 1, k - 1))
                } else if u < 0.5 {
                    Ok((k - 1, shallow))
                } else {
                    Ok((shallow, k - 1))
                }
            }
            DepthCentricModel::Table(table) => draw_from_rows(table.rows(k), k, u),
        })
    }

    /// Leaf count `x(d)` shared by every positive-probability tree of depth
    /// `d`, via `x(n) = x(n-1) + x(shallow side of level n)` from `x(0)=1`.
    /// Requires a single gap value per level up to `d`.
    pub fn leaf_count_by_depth(&self, d: u64) -> Result<BigUint, SourceError> {
        let mut x: Vec<BigUint> = vec![BigUint::one()];
        for n in 1..=d {
            let shallow = match self {
                DepthCentricModel::Gap { max_gap } => (n - 1) - (*max_gap).min(n - 1),
                DepthCentricModel::Table(table) => {
                    let rows = table.rows(n);
                    let mut gaps: Vec<u64> = rows.iter().map(|&(i, j, _)| i.abs_diff(j)).collect();
                    gaps.sort_unstable();
                    gaps.dedup();
                    match gaps.as_slice() {
                        &[gap] => (n - 1) - gap,
                        _ => return Err(SourceError::NotSigma2Star),
                    }
                }
            };
            let next = &x[n as usize - 1] + &x[shallow as usize];
            x.push(next);
        }
        Ok(x.pop().expect("x(0) seeds the table"))
    }

    /// Largest `|i - j|` over the supported splits with `max(i, j)` up to
    /// `n_max - 1`, and whether every scanned level has exactly one gap
    /// value.
    pub fn check_sigma2_star(&self, n_max: u64) -> Sigma2StarReport {
        match self {
            DepthCentricModel::Gap { max_gap } => Sigma2StarReport {
                max_gap: (*max_gap).min(n_max.saturating_sub(1)),
                single_gap: true,
            },
            DepthCentricModel::Table(table) => {
                let mut max_gap = 0;
                let mut single_gap = true;
                for (n, rows) in table.levels() {
                    if n > n_max {
                        break;
                    }
                    let mut gaps: Vec<u64> = rows.iter().map(|&(i, j, _)| i.abs_diff(j)).collect();
                    gaps.sort_unstable();
                    gaps.dedup();
                    if gaps.len() != 1 {
                        single_gap = false;
                    }
                    if let Some(&g) = gaps.last() {
                        max_gap = max_gap.max(g);
                    }
                }
                Sigma2StarReport {
                    max_gap,
                    single_gap,
                }
            }
        }
    }
}

fn split_spec(spec: &str) -> Result<(&str, Vec<(&str, &str)>), SourceError> {
    let mut tokens = spec.split(',');
    let kind = tokens.next().unwrap_or("").trim();
    if kind.is_empty() {
        return Err(SourceError::InvalidSpec("empty model spec".into()));
    }
    let mut pairs = Vec::new();
    for token in tokens {
        let (key, value) = token.split_once('=').ok_or_else(|| {
            SourceError::InvalidSpec(format!("expected key=value, found {token:?}"))
        })?;
        pairs.push((key.trim(), value.trim()));
    }
    Ok((kind, pairs))
}

fn expect_keys(pairs: &[(&str, &str)], allowed: &[&str]) -> Result<(), SourceError> {
    for &(key, _) in pairs {
        if !allowed.contains(&key) {
            return Err(SourceError::InvalidSpec(format!("unexpected key {key:?}")));
        }
    }
    Ok(())
}

fn require_key<'a>(pairs: &[(&'a str, &'a str)], key: &str) -> Result<&'a str, SourceError> {
    pairs
        .iter()
        .find(|&&(k, _)| k == key)
        .map(|&(_, v)| v)
        .ok_or_else(|| SourceError::InvalidSpec(format!("missing key {key:?}")))
}

/// Read `table,file=<path>` keys and parse the file. `mode`, when present,
/// must match the model kind the caller is building.
fn load_table_spec(pairs: &[(&str, &str)], mode: &str) -> Result<SplitTable, SourceError> {
    expect_keys(pairs, &["file", "mode"])?;
    if let Ok(found) = require_key(pairs, "mode") {
        if found != mode {
            return Err(SourceError::InvalidSpec(format!(
                "table mode {found:?} does not fit a {mode} model"
            )));
        }
    }
    let path = require_key(pairs, "file")?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| SourceError::InvalidSpec(format!("cannot read table {path:?}: {e}")))?;
    SplitTable::parse(&text)
}

/// Fraction `numer/denom` in (0, 1/2] written as a decimal, parsed exactly.
fn parse_decimal_fraction(text: &str) -> Option<(u64, u64)> {
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.len() + frac_part.len() == 0 || int_part.len() + frac_part.len() > 18 {
        return None;
    }
    let all_digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return None;
    }
    let int_val: u64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().ok()?
    };
    let denom = 10u64.pow(frac_part.len() as u32);
    let frac_val: u64 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().ok()?
    };
    Some((int_val * denom + frac_val, denom))
}

/// SplitMix64 finalizer; the basis of the splittable per-vertex generator.
pub(crate) fn mix(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform draw in [0, 1) from the top 53 bits.
pub(crate) fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

const ROOT_TAG: u64 = 0x7472_6565_726f_6f74;
const LEFT_TAG: u64 = 0x6c65_6674_6368_6c64;
const RIGHT_TAG: u64 = 0x7267_6874_6368_6c64;
const DRAW_TAG: u64 = 0x6472_6177_6269_7473;

/// Grow a tree iteratively: each pending vertex carries a target (leaf
/// budget or depth) and its own generator state; `split` maps a target and
/// a uniform draw to the two child targets.
fn sample_tree<F>(
    root_target: u64,
    terminal: u64,
    seed: u64,
    mut split: F,
) -> Result<BinaryTree, SourceError>
where
    F: FnMut(u64, f64) -> Result<(u64, u64), SourceError>,
{
    enum Job {
        Gen { target: u64, state: u64 },
        Combine,
    }
    let mut stack = vec![Job::Gen {
        target: root_target,
        state: mix(seed ^ ROOT_TAG),
    }];
    let mut out: Vec<BinaryTree> = Vec::new();
    while let Some(job) = stack.pop() {
        match job {
            Job::Gen { target, state } => {
                if target == terminal {
                    out.push(BinaryTree::Leaf);
                } else {
                    let u = unit_f64(mix(state ^ DRAW_TAG));
                    let (left, right) = split(target, u)?;
                    stack.push(Job::Combine);
                    stack.push(Job::Gen {
                        target: right,
                        state: mix(state ^ RIGHT_TAG),
                    });
                    stack.push(Job::Gen {
                        target: left,
                        state: mix(state ^ LEFT_TAG),
                    });
                }
            }
            Job::Combine => {
                let right = out.pop().expect("two sampled subtrees");
                let left = out.pop().expect("two sampled subtrees");
                out.push(BinaryTree::internal(left, right));
            }
        }
    }
    Ok(out.pop().expect("one sampled tree"))
}

/// Pick a split from table rows by inverse transform; the last row absorbs
/// any float dust.
fn draw_from_rows(rows: &[(u64, u64, f64)], at: u64, u: f64) -> Result<(u64, u64), SourceError> {
    if rows.is_empty() {
        return Err(SourceError::DeadEnd { at });
    }
    let mut acc = 0.0;
    for &(i, j, p) in rows {
        acc += p;
        if u < acc {
            return Ok((i, j));
        }
    }
    let &(i, j, _) = rows.last().expect("nonempty");
    Ok((i, j))
}
