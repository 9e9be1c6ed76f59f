//! Minimal DAG grammars over binary trees.
//!
//! A tree `t` with `N` distinct final subtrees (counting the leaf and `t`
//! itself) is represented by an arity-2 grammar with nonterminals
//! `0..=N-2` and the single terminal `T`. The root takes id 0, and the
//! remaining ids follow breadth-first discovery order of distinct internal
//! subtrees, so two structurally equal trees always produce identical
//! grammars. The grammar doubles as the minimal DAG of the tree: one rule
//! per shared subtree.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::tree::{BinaryTree, FlatNode, FlatTree};

/// A grammar variable: a numbered nonterminal or the unique terminal `T`.
///
/// The derived order is the alphabet order used by the enumerative coder:
/// `0 < 1 < ... < N-2 < T`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Nonterminal(u32),
    Terminal,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Nonterminal(id) => write!(f, "{id}"),
            Symbol::Terminal => f.write_str("T"),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Deterministic arity-2 grammar; `rules[i]` is the right member of the rule
/// for nonterminal `i`, and 0 is the start variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Grammar {
    rules: Vec<(Symbol, Symbol)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrammarError {
    /// The single-leaf tree has no grammar form.
    TrivialTree,
    /// The rule graph contains a cycle, so expansion would not terminate.
    CyclicGrammar,
    MalformedGrammar(&'static str),
    /// Sequence merge called with inconsistent lengths.
    LengthMismatch {
        expected: usize,
        got: usize,
    },
}

impl fmt::Display for GrammarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarError::TrivialTree => write!(f, "a single leaf has no grammar"),
            GrammarError::CyclicGrammar => write!(f, "rule graph has a cycle"),
            GrammarError::MalformedGrammar(reason) => write!(f, "malformed grammar: {reason}"),
            GrammarError::LengthMismatch { expected, got } => {
                write!(
                    f,
                    "sequence length mismatch: expected {expected}, got {got}"
                )
            }
        }
    }
}

impl std::error::Error for GrammarError {}

impl Grammar {
    /// Build a grammar from explicit rules. Only referential integrity is
    /// checked here; see [`Grammar::validate`] for the full invariants.
    pub fn from_rules(rules: Vec<(Symbol, Symbol)>) -> Result<Grammar, GrammarError> {
        if rules.is_empty() {
            return Err(GrammarError::MalformedGrammar(
                "a grammar needs at least one rule",
            ));
        }
        let n_rules = rules.len();
        for &(left, right) in &rules {
            for sym in [left, right] {
                if let Symbol::Nonterminal(id) = sym {
                    if id as usize >= n_rules {
                        return Err(GrammarError::MalformedGrammar(
                            "rule references an undefined nonterminal",
                        ));
                    }
                }
            }
        }
        Ok(Grammar { rules })
    }

    /// Total variable count `N`: the nonterminals plus the terminal.
    pub fn n_vars(&self) -> u32 {
        self.rules.len() as u32 + 1
    }

    pub fn rules(&self) -> &[(Symbol, Symbol)] {
        &self.rules
    }

    /// Check the canonical-form invariants beyond referential integrity:
    /// acyclic, pairwise-distinct rules, every nonterminal other than the
    /// start appearing in some right member, and the start in none.
    pub fn validate(&self) -> Result<(), GrammarError> {
        let mut distinct = HashSet::new();
        let mut referenced = vec![false; self.rules.len()];
        for &rule in &self.rules {
            if !distinct.insert(rule) {
                return Err(GrammarError::MalformedGrammar(
                    "duplicate rule right member",
                ));
            }
            for sym in [rule.0, rule.1] {
                if let Symbol::Nonterminal(id) = sym {
                    if id == 0 {
                        return Err(GrammarError::MalformedGrammar(
                            "start variable appears in a right member",
                        ));
                    }
                    referenced[id as usize] = true;
                }
            }
        }
        if (1..self.rules.len()).any(|id| !referenced[id]) {
            return Err(GrammarError::MalformedGrammar(
                "nonterminal never appears in a right member",
            ));
        }
        self.topological_order().map(|_| ())
    }

    /// Rule indices in an order where every rule precedes the rules it
    /// references, or `CyclicGrammar`.
    fn topological_order(&self) -> Result<Vec<u32>, GrammarError> {
        let n = self.rules.len();
        let mut out_degree = vec![0usize; n];
        let mut parents: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, &(left, right)) in self.rules.iter().enumerate() {
            for sym in [left, right] {
                if let Symbol::Nonterminal(id) = sym {
                    out_degree[i] += 1;
                    parents[id as usize].push(i as u32);
                }
            }
        }
        let mut queue: VecDeque<u32> = (0..n as u32)
            .filter(|&i| out_degree[i as usize] == 0)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &p in &parents[i as usize] {
                out_degree[p as usize] -= 1;
                if out_degree[p as usize] == 0 {
                    queue.push_back(p);
                }
            }
        }
        if order.len() < n {
            return Err(GrammarError::CyclicGrammar);
        }
        order.reverse();
        Ok(order)
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (left, right)) in self.rules.iter().enumerate() {
            writeln!(f, "{i} -> ({left},{right})")?;
        }
        Ok(())
    }
}

/// Build the canonical grammar of `t`.
///
/// Vertices are scanned in breadth-first order; a vertex whose final subtree
/// was seen before reuses that subtree's label, otherwise it takes the
/// smallest unused nonterminal id. The root gets 0 and leaves the terminal.
pub fn build_grammar(t: &BinaryTree) -> Result<Grammar, GrammarError> {
    let flat = FlatTree::new(t);
    if flat.nodes.len() < 3 {
        return Err(GrammarError::TrivialTree);
    }
    let classes = subtree_classes(&flat);

    let mut label_of_class: HashMap<u32, u32> = HashMap::new();
    let mut representative: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    queue.push_back(0usize);
    while let Some(idx) = queue.pop_front() {
        if let FlatNode::Internal { left, right } = flat.nodes[idx] {
            if let Entry::Vacant(slot) = label_of_class.entry(classes[idx]) {
                slot.insert(representative.len() as u32);
                representative.push(idx);
            }
            queue.push_back(left);
            queue.push_back(right);
        }
    }

    let symbol_of = |class: u32| -> Symbol {
        if class == LEAF_CLASS {
            Symbol::Terminal
        } else {
            Symbol::Nonterminal(label_of_class[&class])
        }
    };
    let rules = representative
        .iter()
        .map(|&idx| match flat.nodes[idx] {
            FlatNode::Internal { left, right } => {
                (symbol_of(classes[left]), symbol_of(classes[right]))
            }
            FlatNode::Leaf => unreachable!("representatives are internal"),
        })
        .collect();
    Ok(Grammar { rules })
}

const LEAF_CLASS: u32 = 0;

/// Hash-consed structural class per node: equal final subtrees share a class
/// id, the leaf is class 0. Children precede parents in the scan because
/// `FlatTree` stores preorder.
fn subtree_classes(flat: &FlatTree) -> Vec<u32> {
    let mut classes = vec![LEAF_CLASS; flat.nodes.len()];
    let mut interned: HashMap<(u32, u32), u32> = HashMap::new();
    for idx in (0..flat.nodes.len()).rev() {
        if let FlatNode::Internal { left, right } = flat.nodes[idx] {
            let next = interned.len() as u32 + 1;
            classes[idx] = *interned
                .entry((classes[left], classes[right]))
                .or_insert(next);
        }
    }
    classes
}

/// Expand a grammar back to its tree by walking the derivation of the start
/// variable. Work and memory are linear in the output tree.
pub fn expand_grammar(g: &Grammar) -> Result<BinaryTree, GrammarError> {
    // Reject cycles up front, wherever they sit in the rule graph; the
    // derivation walk below would otherwise never terminate.
    g.topological_order()?;

    enum Task {
        Expand(Symbol),
        Combine,
    }
    let mut stack = vec![Task::Expand(Symbol::Nonterminal(0))];
    let mut out: Vec<BinaryTree> = Vec::new();
    while let Some(task) = stack.pop() {
        match task {
            Task::Expand(Symbol::Terminal) => out.push(BinaryTree::Leaf),
            Task::Expand(Symbol::Nonterminal(id)) => {
                let (left, right) = g.rules[id as usize];
                stack.push(Task::Combine);
                stack.push(Task::Expand(right));
                stack.push(Task::Expand(left));
            }
            Task::Combine => {
                let right = out.pop().expect("two expanded subtrees");
                let left = out.pop().expect("two expanded subtrees");
                out.push(BinaryTree::internal(left, right));
            }
        }
    }
    Ok(out.pop().expect("one expanded tree"))
}

/// Number of distinct final subtrees of `t`, including the leaf and `t`
/// itself. Equals `build_grammar(t).n_vars()`.
pub fn distinct_subtree_count(t: &BinaryTree) -> Result<u32, GrammarError> {
    let flat = FlatTree::new(t);
    if flat.nodes.len() < 3 {
        return Err(GrammarError::TrivialTree);
    }
    let classes = subtree_classes(&flat);
    // Root class id is the largest issued, and ids are dense from 0.
    Ok(classes[0] + 1)
}

/// `N(t) / |t|`, in (0, 1]. Small values mean heavy subtree sharing.
pub fn representation_ratio(t: &BinaryTree) -> Result<f64, GrammarError> {
    let n = distinct_subtree_count(t)?;
    Ok(n as f64 / t.num_leaves() as f64)
}

/// The rule-sequence views of a grammar used by the codec.
///
/// `s` concatenates rule right members in rule order (length `2N-2`);
/// `s1` is `s` with the first occurrence of each nonterminal `1..=N-2`
/// removed (length `N`); `s2` is the removed subsequence, which is exactly
/// `(1, 2, ..., N-2)`; `first_mask` flags the removed positions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SSequences {
    pub s: Vec<Symbol>,
    pub s1: Vec<Symbol>,
    pub s2: Vec<Symbol>,
    pub first_mask: Vec<bool>,
}

/// Split a grammar into its S-sequences.
///
/// Errors if the first occurrences of nonterminals in `s` are not in
/// increasing id order, which canonical grammars always satisfy and the
/// mask-based merge in the decoder relies on.
pub fn s_sequences(g: &Grammar) -> Result<SSequences, GrammarError> {
    let mut s = Vec::with_capacity(2 * g.rules.len());
    for &(left, right) in &g.rules {
        s.push(left);
        s.push(right);
    }
    let mut next_first = 1u32;
    let mut first_mask = vec![false; s.len()];
    let mut s1 = Vec::with_capacity(g.rules.len() + 1);
    let mut s2 = Vec::with_capacity(g.rules.len().saturating_sub(1));
    for (pos, &sym) in s.iter().enumerate() {
        match sym {
            Symbol::Nonterminal(id) if id == next_first => {
                first_mask[pos] = true;
                s2.push(sym);
                next_first += 1;
            }
            Symbol::Nonterminal(id) if id >= next_first => {
                return Err(GrammarError::MalformedGrammar(
                    "first occurrences in rule sequence are out of order",
                ));
            }
            _ => s1.push(sym),
        }
    }
    if next_first != g.n_vars() - 1 {
        return Err(GrammarError::MalformedGrammar(
            "rule sequence does not mention every nonterminal",
        ));
    }
    Ok(SSequences {
        s,
        s1,
        s2,
        first_mask,
    })
}

/// Rebuild `s` from its split: `s2` symbols go to the flagged positions in
/// order, `s1` symbols fill the rest.
pub fn merge_s(
    s1: &[Symbol],
    s2: &[Symbol],
    first_mask: &[bool],
) -> Result<Vec<Symbol>, GrammarError> {
    if first_mask.len() != s1.len() + s2.len() {
        return Err(GrammarError::LengthMismatch {
            expected: s1.len() + s2.len(),
            got: first_mask.len(),
        });
    }
    let flagged = first_mask.iter().filter(|&&b| b).count();
    if flagged != s2.len() {
        return Err(GrammarError::LengthMismatch {
            expected: s2.len(),
            got: flagged,
        });
    }
    let mut from_s1 = s1.iter();
    let mut from_s2 = s2.iter();
    Ok(first_mask
        .iter()
        .map(|&flag| {
            *if flag {
                from_s2.next().expect("mask popcount matches s2")
            } else {
                from_s1.next().expect("mask gaps match s1")
            }
        })
        .collect())
}
