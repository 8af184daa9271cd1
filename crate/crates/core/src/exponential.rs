//! The non-associative exponential `exp(x) = sum a(t) t`.
//!
//! `a(1) = a(x) = 1` and `a(t1 * t2) = a(t1) a(t2) / (2^n - 2)` with
//! `n = deg(t1 * t2)`. This is the unique tree series with `f'(0) = 1` and
//! `f(x) f(x) = f(2x)`.
//!
//! The normalized coefficient of a degree-`n` tree is
//! `a_hat(t) = n! * omega(n) * a(t) = 2^(n-1) * (n-1)!_M * a(t)`, always a
//! positive integer. It is computed from `a` and that constant; the product
//! over inner nodes ([`a_hat_product`]) and the one-step recursion
//! ([`a_hat_recursion_check`]) are independent checks of the same integer.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::magma::{enumerate_trees, enumerate_up_to, inner_nodes, MagmaTree, TreeBudget};
use crate::mersenne_core::{mersenne_binomial, mersenne_factorial};
use crate::omega::omega;
use crate::series::TreeSeries;
use crate::{Integer, Natural, Rational};

/// Memo of `a(t)` and of the per-degree normalization constants.
///
/// Each table is owned by one caller; concurrent callers use their own.
#[derive(Debug, Default)]
pub struct ExpTable {
    a: HashMap<MagmaTree, Rational>,
    normalization: HashMap<u32, Natural>,
}

impl ExpTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn a(&mut self, t: &MagmaTree) -> Rational {
        let node = match t {
            MagmaTree::Unit | MagmaTree::Leaf => return Rational::one(),
            MagmaTree::Node(node) => node,
        };
        if let Some(hit) = self.a.get(t) {
            return hit.clone();
        }
        let n = t.degree();
        let divisor = Rational::from_integer((Integer::one() << n as usize) - 2);
        let value = self.a(node.left()) * self.a(node.right()) / divisor;
        self.a.insert(t.clone(), value.clone());
        value
    }

    /// `2^(n-1) * (n-1)!_M` for `n >= 1`.
    pub fn normalization(&mut self, n: u32) -> Natural {
        debug_assert!(n >= 1);
        self.normalization
            .entry(n)
            .or_insert_with(|| (Natural::one() << (n - 1) as usize) * mersenne_factorial(n - 1))
            .clone()
    }

    pub fn a_hat(&mut self, t: &MagmaTree) -> Result<Natural> {
        let n = t.degree();
        if n == 0 {
            return Err(Error::invalid("a_hat is defined for trees of degree >= 1"));
        }
        let scaled = self.a(t) * Rational::from_integer(self.normalization(n).into());
        if !scaled.is_integer() || scaled.numer() <= &Integer::zero() {
            return Err(Error::invariant(format!(
                "a_hat({t}) = {scaled} is not a positive integer"
            )));
        }
        Ok(scaled.to_integer().magnitude().clone())
    }
}

/// `a(t)`, the coefficient of `t` in `exp(x)`.
pub fn a_coefficient(t: &MagmaTree) -> Rational {
    ExpTable::new().a(t)
}

/// `2^(n-1) * (n-1)!_M * a(t)`; fails loudly if it is not a positive integer.
pub fn a_hat(t: &MagmaTree) -> Result<Natural> {
    ExpTable::new().a_hat(t)
}

/// `prod over inner nodes of (n(a) - 2 choose n_1(a) - 1)_M`.
pub fn a_hat_product(t: &MagmaTree) -> Result<Natural> {
    if t.is_unit() {
        return Err(Error::invalid("a_hat is defined for trees of degree >= 1"));
    }
    let mut product = Natural::one();
    for node in inner_nodes(t) {
        product *= mersenne_binomial(node.subtree.degree() - 2, node.left_degree - 1)?;
    }
    Ok(product)
}

/// Whether `a_hat(t1 * t2) = (n-2 choose n_1-1)_M a_hat(t1) a_hat(t2)`.
pub fn a_hat_recursion_check(t: &MagmaTree) -> Result<bool> {
    ExpTable::new().recursion_check(t)
}

impl ExpTable {
    pub(crate) fn recursion_check(&mut self, t: &MagmaTree) -> Result<bool> {
        if t.degree() < 2 {
            return Err(Error::invalid("the recursion applies to trees of degree >= 2"));
        }
        let (left, right) = t.decompose()?;
        let expected = mersenne_binomial(t.degree() - 2, left.degree() - 1)?
            * self.a_hat(&left)?
            * self.a_hat(&right)?;
        Ok(self.a_hat(t)? == expected)
    }
}

/// `exp(x)` truncated at degree `truncation`, constant term included.
pub fn exp_series(truncation: u32, budget: TreeBudget) -> Result<TreeSeries<Rational>> {
    let levels = enumerate_up_to(truncation, budget)?;
    let mut table = ExpTable::new();
    let terms: Vec<(MagmaTree, Rational)> = levels
        .into_iter()
        .flatten()
        .map(|t| {
            let a = table.a(&t);
            (t, a)
        })
        .collect();
    Ok(TreeSeries::from_terms(truncation, terms))
}

/// Whether `exp * exp = exp(2x)` up to degree `truncation`.
pub fn verify_functional_equation(truncation: u32, budget: TreeBudget) -> Result<bool> {
    let e = exp_series(truncation, budget)?;
    let square = e.multiply(&e)?;
    square.try_eq(&e.dilate(&Rational::from_integer(2.into())))
}

/// Whether `exp' = exp` up to degree `truncation` (the derivative is taken of
/// the series truncated one degree higher).
pub fn verify_derivative(truncation: u32, budget: TreeBudget) -> Result<bool> {
    let longer = exp_series(truncation + 1, budget)?;
    let derived = longer.derivative().truncate(truncation)?;
    derived.try_eq(&exp_series(truncation, budget)?)
}

/// Whether `sum a(t) = 1/n!` and `sum a_hat(t) = omega(n)` over all trees of
/// degree `n`.
pub fn verify_sums(n: u32, budget: TreeBudget) -> Result<bool> {
    let trees = enumerate_trees(n, budget)?;
    let mut table = ExpTable::new();
    let mut a_sum = Rational::zero();
    let mut a_hat_sum = Natural::zero();
    for t in &trees {
        a_sum += table.a(t);
        a_hat_sum += table.a_hat(t)?;
    }
    let factorial = (1..=n).fold(Integer::one(), |acc, i| acc * i);
    Ok(a_sum == Rational::new(Integer::one(), factorial) && a_hat_sum == omega(n)?)
}

/// Sum of `a_hat(t1 * t2)` over `deg t1 = k`, `deg t2 = n - k`.
pub fn split_sum(n: u32, k: u32, budget: TreeBudget) -> Result<Natural> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::invalid(format!("split sums need 1 <= k <= n-1 (got n={n}, k={k})")));
    }
    let levels = enumerate_up_to(n - 1, budget)?;
    let mut table = ExpTable::new();
    let mut sum = Natural::zero();
    for left in &levels[k as usize] {
        for right in &levels[(n - k) as usize] {
            sum += table.a_hat(&MagmaTree::graft(left, right))?;
        }
    }
    Ok(sum)
}

/// Trees of degree `n` with `a_hat(t) = 1`, in canonical order.
pub fn trees_with_a_hat_one(n: u32, budget: TreeBudget) -> Result<Vec<MagmaTree>> {
    let mut table = ExpTable::new();
    let mut out = Vec::new();
    for t in enumerate_trees(n, budget)? {
        if table.a_hat(&t)?.is_one() {
            out.push(t);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpCoefficient {
    pub tree: MagmaTree,
    pub a: Rational,
    pub a_hat: Natural,
}

/// `a` and `a_hat` for every tree of degree `n`, in canonical order. Each row
/// is checked against the inner-node product.
pub fn coefficient_table(n: u32, budget: TreeBudget) -> Result<Vec<ExpCoefficient>> {
    let mut table = ExpTable::new();
    enumerate_trees(n, budget)?
        .into_iter()
        .map(|tree| {
            let a = table.a(&tree);
            let a_hat = table.a_hat(&tree)?;
            if a_hat != a_hat_product(&tree)? {
                return Err(Error::invariant(format!(
                    "a_hat({tree}) disagrees with the inner-node product"
                )));
            }
            Ok(ExpCoefficient { tree, a, a_hat })
        })
        .collect()
}

/// TSV with header `tree_key degree a_numerator a_denominator a_hat`.
pub fn coefficient_table_tsv(rows: &[ExpCoefficient]) -> String {
    let mut out = String::from("tree_key\tdegree\ta_numerator\ta_denominator\ta_hat\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            row.tree,
            row.tree.degree(),
            row.a.numer(),
            row.a.denom(),
            row.a_hat
        );
    }
    out
}
