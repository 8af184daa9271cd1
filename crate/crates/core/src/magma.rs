//! The free unital magma on one generator `x`, i.e. planar binary rooted
//! trees.
//!
//! A tree is the unit `1`, the leaf `x`, or a product `(a * b)` of two
//! non-unit trees. Products are built with [`MagmaTree::graft`], which applies
//! the unit law, so a unit never appears inside a product.
//!
//! Trees are totally ordered by degree first; trees of the same degree compare
//! by left-factor degree, then left factor, then right factor. This is the
//! order in which [`enumerate_trees`] lists them.
//!
//! Text form: `t ::= "1" | "x" | "(" t "*" t ")"`, whitespace ignored.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::Natural;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum MagmaTree {
    Unit,
    Leaf,
    Node(Arc<Node>),
}

/// A product of two non-unit trees.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Node {
    left: MagmaTree,
    right: MagmaTree,
    degree: u32,
}

impl Node {
    pub fn left(&self) -> &MagmaTree {
        &self.left
    }

    pub fn right(&self) -> &MagmaTree {
        &self.right
    }
}

impl MagmaTree {
    pub fn unit() -> Self {
        MagmaTree::Unit
    }

    pub fn leaf() -> Self {
        MagmaTree::Leaf
    }

    /// The magma product, with `1 * t = t * 1 = t`.
    pub fn graft(left: &MagmaTree, right: &MagmaTree) -> MagmaTree {
        match (left, right) {
            (MagmaTree::Unit, t) | (t, MagmaTree::Unit) => t.clone(),
            _ => MagmaTree::Node(Arc::new(Node {
                degree: left.degree() + right.degree(),
                left: left.clone(),
                right: right.clone(),
            })),
        }
    }

    /// Number of leaves.
    pub fn degree(&self) -> u32 {
        match self {
            MagmaTree::Unit => 0,
            MagmaTree::Leaf => 1,
            MagmaTree::Node(node) => node.degree,
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, MagmaTree::Unit)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, MagmaTree::Leaf)
    }

    /// The unique `(t1, t2)` with `t = t1 * t2` and neither factor the unit.
    pub fn decompose(&self) -> Result<(MagmaTree, MagmaTree)> {
        match self {
            MagmaTree::Node(node) => Ok((node.left.clone(), node.right.clone())),
            other => Err(Error::invalid(format!(
                "only trees of degree >= 2 decompose (got {other})"
            ))),
        }
    }

    pub fn as_node(&self) -> Option<&Node> {
        match self {
            MagmaTree::Node(node) => Some(node),
            _ => None,
        }
    }

    pub fn key(&self) -> TreeKey {
        TreeKey(self.to_string())
    }

    /// Every tree obtained by deleting one leaf (left to right), with the unit
    /// law applied. Summed, this is the derivative of the monomial.
    pub fn leaf_deletions(&self) -> Vec<MagmaTree> {
        match self {
            MagmaTree::Unit => Vec::new(),
            MagmaTree::Leaf => vec![MagmaTree::Unit],
            MagmaTree::Node(node) => {
                let mut out: Vec<MagmaTree> = node
                    .left
                    .leaf_deletions()
                    .iter()
                    .map(|l| MagmaTree::graft(l, &node.right))
                    .collect();
                out.extend(
                    node.right.leaf_deletions().iter().map(|r| MagmaTree::graft(&node.left, r)),
                );
                out
            }
        }
    }
}

impl Ord for MagmaTree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MagmaTree::Node(a), MagmaTree::Node(b)) => {
                if Arc::ptr_eq(a, b) {
                    return Ordering::Equal;
                }
                a.degree
                    .cmp(&b.degree)
                    .then_with(|| a.left.degree().cmp(&b.left.degree()))
                    .then_with(|| a.left.cmp(&b.left))
                    .then_with(|| a.right.cmp(&b.right))
            }
            _ => self.degree().cmp(&other.degree()),
        }
    }
}

impl PartialOrd for MagmaTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MagmaTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MagmaTree::Unit => f.write_str("1"),
            MagmaTree::Leaf => f.write_str("x"),
            MagmaTree::Node(node) => write!(f, "({}*{})", node.left, node.right),
        }
    }
}

impl fmt::Debug for MagmaTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MagmaTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Canonical text encoding of a tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeKey(String);

impl TreeKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn tree(&self) -> Result<MagmaTree> {
        parse(&self.0)
    }
}

impl fmt::Display for TreeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&MagmaTree> for TreeKey {
    fn from(t: &MagmaTree) -> Self {
        t.key()
    }
}

/// Parses the fully parenthesized tree grammar. Errors carry the byte offset
/// of the offending character (or the input length at end of input).
pub fn parse(text: &str) -> Result<MagmaTree> {
    let mut parser = Parser { bytes: text.as_bytes(), pos: 0 };
    let tree = parser.tree()?;
    parser.skip_ws();
    if parser.pos < parser.bytes.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(tree)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        let message = match self.bytes.get(self.pos) {
            Some(&b) => format!("{message}, found {:?}", b as char),
            None => format!("{message}, found end of input"),
        };
        Error::Syntax { offset: self.pos, message }
    }

    fn expect(&mut self, want: u8) -> Result<()> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {:?}", want as char)))
        }
    }

    fn tree(&mut self) -> Result<MagmaTree> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b'1') => {
                self.pos += 1;
                Ok(MagmaTree::Unit)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(MagmaTree::Leaf)
            }
            Some(b'(') => {
                self.pos += 1;
                let left = self.tree()?;
                self.expect(b'*')?;
                let right = self.tree()?;
                self.expect(b')')?;
                Ok(MagmaTree::graft(&left, &right))
            }
            _ => Err(self.error("expected '1', 'x' or '('")),
        }
    }
}

/// Cap on the number of trees an enumeration may materialize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeBudget(pub u64);

impl TreeBudget {
    pub const DEFAULT: TreeBudget = TreeBudget(1_000_000);

    /// Fails unless the `Catalan(n - 1)` trees of degree `n` fit.
    pub fn check(self, degree: u32) -> Result<()> {
        if degree == 0 {
            return Ok(());
        }
        let needed = catalan(degree as u64 - 1);
        if needed.to_u64().map_or(true, |c| c > self.0) {
            return Err(Error::TreeBudgetExceeded {
                degree,
                needed: needed.to_string(),
                budget: self.0,
            });
        }
        Ok(())
    }
}

impl Default for TreeBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// `binom(2n, n) / (n + 1)`.
fn catalan(n: u64) -> Natural {
    let mut c = Natural::from(1u32);
    for i in 0..n {
        c = c * (2 * (2 * i + 1)) / (i + 2);
    }
    c
}

/// All trees of each degree `0..=n`, in canonical order.
pub fn enumerate_up_to(n: u32, budget: TreeBudget) -> Result<Vec<Vec<MagmaTree>>> {
    budget.check(n)?;
    let mut by_degree: Vec<Vec<MagmaTree>> = vec![vec![MagmaTree::Unit]];
    if n >= 1 {
        by_degree.push(vec![MagmaTree::Leaf]);
    }
    for d in 2..=n as usize {
        let mut level = Vec::new();
        for k in 1..d {
            for left in &by_degree[k] {
                for right in &by_degree[d - k] {
                    level.push(MagmaTree::graft(left, right));
                }
            }
        }
        by_degree.push(level);
    }
    Ok(by_degree)
}

/// The `Catalan(n - 1)` trees of degree `n >= 1`, in canonical order.
pub fn enumerate_trees(n: u32, budget: TreeBudget) -> Result<Vec<MagmaTree>> {
    if n == 0 {
        return Err(Error::invalid("enumeration starts at degree 1"));
    }
    Ok(enumerate_up_to(n, budget)?.swap_remove(n as usize))
}

/// Comb trees: `T_1 = {x}`, `T_n = x * T_{n-1} ∪ T_{n-1} * x`, in canonical
/// order.
pub fn comb_trees(n: u32) -> Result<Vec<MagmaTree>> {
    if n == 0 {
        return Err(Error::invalid("comb trees start at degree 1"));
    }
    let x = MagmaTree::Leaf;
    let mut level = vec![x.clone()];
    for _ in 2..=n {
        let mut next: Vec<MagmaTree> = level
            .iter()
            .flat_map(|t| [MagmaTree::graft(&x, t), MagmaTree::graft(t, &x)])
            .collect();
        next.sort();
        next.dedup();
        level = next;
    }
    Ok(level)
}

/// An inner node `a` of a tree: the subtree `t_{<=a}` hanging from it and the
/// degree of that subtree's left factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerNode {
    pub subtree: MagmaTree,
    pub left_degree: u32,
}

/// Inner nodes in preorder (root first, then left, then right).
pub fn inner_nodes(t: &MagmaTree) -> Vec<InnerNode> {
    let mut out = Vec::with_capacity(t.degree().saturating_sub(1) as usize);
    let mut stack = vec![t];
    while let Some(cur) = stack.pop() {
        if let MagmaTree::Node(node) = cur {
            out.push(InnerNode { subtree: cur.clone(), left_degree: node.left.degree() });
            stack.push(&node.right);
            stack.push(&node.left);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> MagmaTree {
        parse(s).unwrap()
    }

    #[test]
    fn grafting() {
        let x = MagmaTree::leaf();
        let xx = MagmaTree::graft(&x, &x);
        assert_eq!(xx.to_string(), "(x*x)");
        assert_eq!(xx.degree(), 2);
        assert_eq!(MagmaTree::graft(&MagmaTree::unit(), &xx), xx);
        assert_eq!(MagmaTree::graft(&xx, &MagmaTree::unit()), xx);
        let left = MagmaTree::graft(&xx, &x);
        assert_eq!(left.to_string(), "((x*x)*x)");
        assert_eq!(left.degree(), 3);
        assert_ne!(left, MagmaTree::graft(&x, &xx));
    }

    #[test]
    fn decomposition() {
        assert_eq!(t("(x*x)").decompose().unwrap(), (t("x"), t("x")));
        assert_eq!(t("((x*x)*x)").decompose().unwrap(), (t("(x*x)"), t("x")));
        assert_eq!(t("(x*(x*x))").decompose().unwrap(), (t("x"), t("(x*x)")));
        assert!(t("x").decompose().is_err());
        assert!(t("1").decompose().is_err());
    }

    #[test]
    fn parsing() {
        let right_comb = t("(x*(x*x))");
        assert_eq!(right_comb.degree(), 3);
        assert_eq!(right_comb.decompose().unwrap().1, t("(x*x)"));
        let balanced = t(" ( (x * x)*(x*x) ) ");
        assert_eq!(balanced.degree(), 4);
        assert_eq!(balanced.to_string(), "((x*x)*(x*x))");
        assert_eq!(t("(1*x)"), t("x"));
        assert_eq!(t("((x*1)*(1*1))"), t("x"));
        assert_eq!(t("1"), MagmaTree::Unit);
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse("(x*"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("(x*x"), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse("x x"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("(x+x)"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("y"), Err(Error::Syntax { offset: 0, .. })));
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_trees(1, TreeBudget::DEFAULT).unwrap(), vec![t("x")]);
        assert_eq!(
            enumerate_trees(3, TreeBudget::DEFAULT).unwrap(),
            vec![t("(x*(x*x))"), t("((x*x)*x)")]
        );
        assert_eq!(enumerate_trees(5, TreeBudget::DEFAULT).unwrap().len(), 14);
        assert!(enumerate_trees(0, TreeBudget::DEFAULT).is_err());
        assert!(matches!(
            enumerate_trees(12, TreeBudget(1000)),
            Err(Error::TreeBudgetExceeded { degree: 12, .. })
        ));
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let levels = enumerate_up_to(9, TreeBudget::DEFAULT).unwrap();
        for (d, level) in levels.iter().enumerate() {
            assert!(level.windows(2).all(|w| w[0] < w[1]), "degree {d}");
            assert!(level.iter().all(|t| t.degree() as usize == d));
        }
    }

    #[test]
    fn catalan_closed_form() {
        let first: Vec<u64> = (0..10).map(|n| catalan(n).to_u64().unwrap()).collect();
        assert_eq!(first, vec![1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]);
    }

    #[test]
    fn combs() {
        assert_eq!(comb_trees(1).unwrap(), vec![t("x")]);
        assert_eq!(comb_trees(2).unwrap(), vec![t("(x*x)")]);
        assert_eq!(comb_trees(4).unwrap().len(), 4);
        assert!(comb_trees(0).is_err());
        // The balanced tree is the only non-comb of degree 4.
        let all = enumerate_trees(4, TreeBudget::DEFAULT).unwrap();
        let combs = comb_trees(4).unwrap();
        let missing: Vec<_> = all.iter().filter(|t| !combs.contains(t)).collect();
        assert_eq!(missing, vec![&t("((x*x)*(x*x))")]);
    }

    #[test]
    fn inner_node_listing() {
        assert!(inner_nodes(&t("x")).is_empty());
        assert_eq!(
            inner_nodes(&t("(x*x)")),
            vec![InnerNode { subtree: t("(x*x)"), left_degree: 1 }]
        );
        let nodes = inner_nodes(&t("((x*x)*(x*x))"));
        let summary: Vec<(String, u32)> =
            nodes.iter().map(|a| (a.subtree.to_string(), a.left_degree)).collect();
        assert_eq!(
            summary,
            vec![
                ("((x*x)*(x*x))".to_string(), 2),
                ("(x*x)".to_string(), 1),
                ("(x*x)".to_string(), 1)
            ]
        );
    }

    #[test]
    fn leaf_deletion() {
        let dels: Vec<String> =
            t("((x*x)*x)").leaf_deletions().iter().map(|t| t.to_string()).collect();
        assert_eq!(dels, vec!["(x*x)", "(x*x)", "(x*x)"]);
        assert_eq!(t("x").leaf_deletions(), vec![MagmaTree::Unit]);
        assert!(t("1").leaf_deletions().is_empty());
    }

    #[test]
    fn keys() {
        let tree = t("((x*x)*x)");
        assert_eq!(tree.key().as_str(), "((x*x)*x)");
        assert_eq!(tree.key().tree().unwrap(), tree);
    }
}
