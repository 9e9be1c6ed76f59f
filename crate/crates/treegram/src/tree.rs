//! Full binary trees: every vertex has either zero or exactly two ordered
//! children.
//!
//! Trees are immutable values with structural equality. Every traversal in
//! this module (and the rest of the crate) is iterative, because
//! one-dimensional trees make recursion depth proportional to the leaf count
//! and the toolkit must handle trees with millions of leaves.
//!
//! The text form is `tree := "L" | "(" tree tree ")"`. Whitespace is
//! tolerated on input and never emitted.

use std::collections::VecDeque;
use std::fmt;
use std::mem;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Largest `n` accepted by [`enumerate_trees`] unless a caller raises the cap
/// explicitly.
pub const DEFAULT_ENUMERATION_CAP: u64 = 12;

/// A full binary tree. `Leaf` is the trivial single-vertex tree.
pub enum BinaryTree {
    Leaf,
    Internal(Box<BinaryTree>, Box<BinaryTree>),
}

/// One step from a vertex to a child.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ChildSide {
    Left,
    Right,
}

/// Path from the root identifying a vertex; the empty path is the root.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct VertexRef {
    steps: Vec<ChildSide>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    /// Input text does not conform to the tree grammar. `position` is a byte
    /// offset into the input.
    Syntax {
        position: usize,
        reason: &'static str,
    },
    /// A vertex path stepped past a leaf.
    BadPath,
    /// Enumeration request beyond the configured cap.
    CapExceeded { requested: u64, cap: u64 },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::Syntax { position, reason } => {
                write!(f, "syntax error at byte {position}: {reason}")
            }
            TreeError::BadPath => write!(f, "vertex path does not address a vertex"),
            TreeError::CapExceeded { requested, cap } => {
                write!(f, "enumeration of {requested}-leaf trees exceeds cap {cap}")
            }
        }
    }
}

impl std::error::Error for TreeError {}

impl BinaryTree {
    pub fn leaf() -> Self {
        BinaryTree::Leaf
    }

    pub fn internal(left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree::Internal(Box::new(left), Box::new(right))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, BinaryTree::Leaf)
    }

    /// Both children, or `None` for a leaf.
    pub fn children(&self) -> Option<(&BinaryTree, &BinaryTree)> {
        match self {
            BinaryTree::Leaf => None,
            BinaryTree::Internal(l, r) => Some((l, r)),
        }
    }

    /// Leaf count `|t|`. A tree with n leaves has n-1 internal vertices.
    pub fn num_leaves(&self) -> u64 {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                BinaryTree::Leaf => count += 1,
                BinaryTree::Internal(l, r) => {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        count
    }

    /// Number of edges on the longest root-to-leaf path; 0 for a leaf.
    pub fn depth(&self) -> u64 {
        let mut max = 0;
        let mut stack = vec![(self, 0u64)];
        while let Some((node, d)) = stack.pop() {
            match node {
                BinaryTree::Leaf => max = max.max(d),
                BinaryTree::Internal(l, r) => {
                    stack.push((l, d + 1));
                    stack.push((r, d + 1));
                }
            }
        }
        max
    }

    /// Parse the canonical text form. Whitespace between tokens is ignored.
    pub fn parse(text: &str) -> Result<BinaryTree, TreeError> {
        enum Item {
            Open,
            Done(BinaryTree),
        }

        fn place(
            stack: &mut Vec<Item>,
            root: &mut Option<BinaryTree>,
            tree: BinaryTree,
            position: usize,
        ) -> Result<(), TreeError> {
            match stack.last() {
                None => {
                    if root.is_some() {
                        return Err(TreeError::Syntax {
                            position,
                            reason: "trailing content after a complete tree",
                        });
                    }
                    *root = Some(tree);
                }
                Some(Item::Open) => stack.push(Item::Done(tree)),
                Some(Item::Done(_)) => {
                    // Exactly two subtrees may sit above an opener.
                    if stack.len() >= 2 && matches!(stack[stack.len() - 2], Item::Open) {
                        stack.push(Item::Done(tree));
                    } else {
                        return Err(TreeError::Syntax {
                            position,
                            reason: "an internal vertex takes exactly two subtrees",
                        });
                    }
                }
            }
            Ok(())
        }

        let mut stack: Vec<Item> = Vec::new();
        let mut root: Option<BinaryTree> = None;
        for (position, byte) in text.bytes().enumerate() {
            match byte {
                b'L' => place(&mut stack, &mut root, BinaryTree::Leaf, position)?,
                b'(' => stack.push(Item::Open),
                b')' => {
                    let right = match stack.pop() {
                        Some(Item::Done(t)) => t,
                        Some(Item::Open) => {
                            return Err(TreeError::Syntax {
                                position,
                                reason: "an internal vertex takes exactly two subtrees",
                            })
                        }
                        None => {
                            return Err(TreeError::Syntax {
                                position,
                                reason: "unmatched closing parenthesis",
                            })
                        }
                    };
                    let left = match stack.pop() {
                        Some(Item::Done(t)) => t,
                        Some(Item::Open) => {
                            return Err(TreeError::Syntax {
                                position,
                                reason: "an internal vertex takes exactly two subtrees",
                            })
                        }
                        None => {
                            return Err(TreeError::Syntax {
                                position,
                                reason: "unmatched closing parenthesis",
                            })
                        }
                    };
                    match stack.pop() {
                        Some(Item::Open) => {}
                        _ => {
                            return Err(TreeError::Syntax {
                                position,
                                reason: "unmatched closing parenthesis",
                            })
                        }
                    }
                    place(
                        &mut stack,
                        &mut root,
                        BinaryTree::internal(left, right),
                        position,
                    )?;
                }
                b if b.is_ascii_whitespace() => {}
                _ => {
                    return Err(TreeError::Syntax {
                        position,
                        reason: "unexpected character",
                    })
                }
            }
        }
        if !stack.is_empty() {
            return Err(TreeError::Syntax {
                position: text.len(),
                reason: "unclosed parenthesis",
            });
        }
        root.ok_or(TreeError::Syntax {
            position: text.len(),
            reason: "empty input",
        })
    }

    /// Canonical text form with no whitespace; inverse of [`BinaryTree::parse`].
    pub fn to_text(&self) -> String {
        enum Tok<'a> {
            Node(&'a BinaryTree),
            Close,
        }
        let mut out = String::new();
        let mut stack = vec![Tok::Node(self)];
        while let Some(tok) = stack.pop() {
            match tok {
                Tok::Node(BinaryTree::Leaf) => out.push('L'),
                Tok::Node(BinaryTree::Internal(l, r)) => {
                    out.push('(');
                    stack.push(Tok::Close);
                    stack.push(Tok::Node(r));
                    stack.push(Tok::Node(l));
                }
                Tok::Close => out.push(')'),
            }
        }
        out
    }

    /// The final subtree rooted at the vertex `v` addresses.
    pub fn subtree_at(&self, v: &VertexRef) -> Result<&BinaryTree, TreeError> {
        let mut node = self;
        for step in v.steps() {
            node = match node {
                BinaryTree::Leaf => return Err(TreeError::BadPath),
                BinaryTree::Internal(l, r) => match step {
                    ChildSide::Left => l,
                    ChildSide::Right => r,
                },
            };
        }
        Ok(node)
    }

    /// All vertices in breadth-first order: the root, then each depth level
    /// left to right, children of earlier parents before children of later
    /// parents, left child before right child.
    pub fn breadth_first_vertices(&self) -> Vec<VertexRef> {
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        queue.push_back((self, VertexRef::root()));
        while let Some((node, v)) = queue.pop_front() {
            if let BinaryTree::Internal(l, r) = node {
                queue.push_back((l.as_ref(), v.child(ChildSide::Left)));
                queue.push_back((r.as_ref(), v.child(ChildSide::Right)));
            }
            order.push(v);
        }
        order
    }
}

impl Drop for BinaryTree {
    // Default drop glue recurses to the full tree depth; lift subtrees onto an
    // explicit worklist instead.
    fn drop(&mut self) {
        if self.is_leaf() {
            return;
        }
        let mut stack: Vec<BinaryTree> = Vec::new();
        if let BinaryTree::Internal(l, r) = self {
            stack.push(mem::replace(&mut **l, BinaryTree::Leaf));
            stack.push(mem::replace(&mut **r, BinaryTree::Leaf));
        }
        while let Some(mut t) = stack.pop() {
            if let BinaryTree::Internal(l, r) = &mut t {
                stack.push(mem::replace(&mut **l, BinaryTree::Leaf));
                stack.push(mem::replace(&mut **r, BinaryTree::Leaf));
            }
        }
    }
}

impl Clone for BinaryTree {
    fn clone(&self) -> Self {
        enum Task<'a> {
            Visit(&'a BinaryTree),
            Combine,
        }
        let mut stack = vec![Task::Visit(self)];
        let mut out: Vec<BinaryTree> = Vec::new();
        while let Some(task) = stack.pop() {
            match task {
                Task::Visit(BinaryTree::Leaf) => out.push(BinaryTree::Leaf),
                Task::Visit(BinaryTree::Internal(l, r)) => {
                    stack.push(Task::Combine);
                    stack.push(Task::Visit(r));
                    stack.push(Task::Visit(l));
                }
                Task::Combine => {
                    let right = out.pop().expect("combine with two subtrees");
                    let left = out.pop().expect("combine with two subtrees");
                    out.push(BinaryTree::internal(left, right));
                }
            }
        }
        out.pop().expect("one completed tree")
    }
}

impl PartialEq for BinaryTree {
    fn eq(&self, other: &Self) -> bool {
        let mut stack = vec![(self, other)];
        while let Some(pair) = stack.pop() {
            match pair {
                (BinaryTree::Leaf, BinaryTree::Leaf) => {}
                (BinaryTree::Internal(al, ar), BinaryTree::Internal(bl, br)) => {
                    stack.push((al, bl));
                    stack.push((ar, br));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for BinaryTree {}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BinaryTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BinaryTree::parse(s)
    }
}

impl VertexRef {
    pub fn root() -> Self {
        VertexRef { steps: Vec::new() }
    }

    pub fn from_steps(steps: Vec<ChildSide>) -> Self {
        VertexRef { steps }
    }

    pub fn child(&self, side: ChildSide) -> Self {
        let mut steps = self.steps.clone();
        steps.push(side);
        VertexRef { steps }
    }

    pub fn steps(&self) -> &[ChildSide] {
        &self.steps
    }

    pub fn is_root(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Number of full binary trees with exactly `n` leaves:
/// `(1/n) * C(2(n-1), n-1)` for n >= 1, and 0 for n = 0.
pub fn catalan(n: u64) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    binomial(2 * (n - 1), n - 1) / n
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    // Division is exact at every step: the running product is C(n-k+i, i).
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All trees with exactly `n` leaves under the default enumeration cap.
///
/// The order is fixed so golden tests stay stable: left-subtree leaf count
/// ascending, then left subtree in this same order, then right subtree.
pub fn enumerate_trees(n: u64) -> Result<Vec<BinaryTree>, TreeError> {
    enumerate_trees_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

/// [`enumerate_trees`] with a caller-chosen cap.
pub fn enumerate_trees_with_cap(n: u64, cap: u64) -> Result<Vec<BinaryTree>, TreeError> {
    if n > cap {
        return Err(TreeError::CapExceeded { requested: n, cap });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut by_size: Vec<Vec<BinaryTree>> = vec![Vec::new(), vec![BinaryTree::Leaf]];
    for k in 2..=n {
        let mut level = Vec::new();
        for i in 1..k {
            for left in &by_size[i as usize] {
                for right in &by_size[(k - i) as usize] {
                    level.push(BinaryTree::internal(left.clone(), right.clone()));
                }
            }
        }
        by_size.push(level);
    }
    Ok(by_size.pop().expect("size table covers n"))
}

/// Cap for [`enumerate_trees_up_to_depth`]: the count satisfies
/// c(d) = c(d-1)^2 + 1, so depth 5 already means 458,330 trees.
pub const DEFAULT_DEPTH_ENUMERATION_CAP: u64 = 4;

/// All trees of depth at most `d`, deepest-last is not guaranteed; the order
/// is fixed (the depth-`d-1` list crossed with itself, leaf first).
pub fn enumerate_trees_up_to_depth(d: u64) -> Result<Vec<BinaryTree>, TreeError> {
    enumerate_trees_up_to_depth_with_cap(d, DEFAULT_DEPTH_ENUMERATION_CAP)
}

/// [`enumerate_trees_up_to_depth`] with a caller-chosen cap.
pub fn enumerate_trees_up_to_depth_with_cap(
    d: u64,
    cap: u64,
) -> Result<Vec<BinaryTree>, TreeError> {
    if d > cap {
        return Err(TreeError::CapExceeded { requested: d, cap });
    }
    let mut level = vec![BinaryTree::Leaf];
    for _ in 0..d {
        let mut next = vec![BinaryTree::Leaf];
        for left in &level {
            for right in &level {
                next.push(BinaryTree::internal(left.clone(), right.clone()));
            }
        }
        level = next;
    }
    Ok(level)
}

/// Flattened tree view used by the linear-time algorithms elsewhere in the
/// crate. Nodes are in preorder, so every child index is larger than its
/// parent's index.
pub(crate) struct FlatTree {
    pub nodes: Vec<FlatNode>,
}

#[derive(Clone, Copy)]
pub(crate) enum FlatNode {
    Leaf,
    Internal { left: usize, right: usize },
}

impl FlatTree {
    pub fn new(t: &BinaryTree) -> Self {
        let mut nodes: Vec<FlatNode> = Vec::new();
        let mut stack: Vec<(&BinaryTree, usize, ChildSide)> =
            vec![(t, usize::MAX, ChildSide::Left)];
        while let Some((node, parent, side)) = stack.pop() {
            let idx = nodes.len();
            match node {
                BinaryTree::Leaf => nodes.push(FlatNode::Leaf),
                BinaryTree::Internal(l, r) => {
                    nodes.push(FlatNode::Internal { left: 0, right: 0 });
                    stack.push((r, idx, ChildSide::Right));
                    stack.push((l, idx, ChildSide::Left));
                }
            }
            if parent != usize::MAX {
                if let FlatNode::Internal { left, right } = &mut nodes[parent] {
                    match side {
                        ChildSide::Left => *left = idx,
                        ChildSide::Right => *right = idx,
                    }
                }
            }
        }
        FlatTree { nodes }
    }

    /// Leaf count of the subtree rooted at each node.
    pub fn leaf_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.nodes.len()];
        for idx in (0..self.nodes.len()).rev() {
            counts[idx] = match self.nodes[idx] {
                FlatNode::Leaf => 1,
                FlatNode::Internal { left, right } => counts[left] + counts[right],
            };
        }
        counts
    }

    /// Depth (longest path to a leaf) of the subtree rooted at each node.
    pub fn subtree_depths(&self) -> Vec<u64> {
        let mut depths = vec![0u64; self.nodes.len()];
        for idx in (0..self.nodes.len()).rev() {
            depths[idx] = match self.nodes[idx] {
                FlatNode::Leaf => 0,
                FlatNode::Internal { left, right } => 1 + depths[left].max(depths[right]),
            };
        }
        depths
    }
}
