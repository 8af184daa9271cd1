//! Every identity check in one report, up to a chosen degree.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exponential::{
    a_hat_product, exp_series, split_sum, trees_with_a_hat_one, verify_sums, ExpTable,
};
use crate::magma::{comb_trees, enumerate_up_to, MagmaTree, TreeBudget};
use crate::omega::{omega, omega_factorization, s_k, verify_omega_recursion};
use crate::prime_orders::{FactorBound, MersenneSieve};
use crate::mersenne_core::mersenne;
use crate::series::{Coefficient, TreeSeries};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// The first failing instance, if any.
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Names of the checks, in the order [`run_suite`] reports them.
pub const CHECKS: [&str; 10] = [
    "functional_equation",
    "derivative",
    "coefficient_sums",
    "product_formula",
    "binomial_recursion",
    "comb_trees",
    "split_sums",
    "omega_recursion",
    "mersenne_factorizations",
    "omega_factorizations",
];

/// First tree whose coefficients differ, with both values.
pub fn first_difference<C: Coefficient>(
    lhs: &TreeSeries<C>,
    rhs: &TreeSeries<C>,
) -> Option<(MagmaTree, C, C)> {
    let keys: BTreeSet<&MagmaTree> = lhs.terms().chain(rhs.terms()).map(|(t, _)| t).collect();
    keys.into_iter().find_map(|t| {
        let (a, b) = (lhs.coefficient(t), rhs.coefficient(t));
        (a != b).then(|| (t.clone(), a, b))
    })
}

fn describe(t: &MagmaTree, lhs: &Rational, rhs: &Rational) -> String {
    format!("tree {t}: {lhs} != {rhs}")
}

/// Turns invariant violations into a failed check; other errors propagate.
fn run_check(
    name: &'static str,
    check: impl FnOnce() -> Result<Option<String>>,
) -> Result<CheckOutcome> {
    let counterexample = match check() {
        Ok(c) => c,
        Err(Error::Invariant(msg)) => Some(msg),
        Err(other) => return Err(other),
    };
    Ok(CheckOutcome { name, counterexample })
}

/// Runs every check up to `degree`. Mersenne factorizations are checked for
/// `n <= min(degree, bound)` and those of `omega(n)` for
/// `n <= min(degree, bound + 1)`.
pub fn run_suite(degree: u32, bound: FactorBound, budget: TreeBudget) -> Result<Vec<CheckOutcome>> {
    budget.check(degree + 1)?;
    let levels = enumerate_up_to(degree, budget)?;
    let mut out = Vec::with_capacity(CHECKS.len());

    out.push(run_check("functional_equation", || {
        let e = exp_series(degree, budget)?;
        let square = e.multiply(&e)?;
        let dilated = e.dilate(&Rational::from_integer(2.into()));
        Ok(first_difference(&square, &dilated).map(|(t, a, b)| describe(&t, &a, &b)))
    })?);

    out.push(run_check("derivative", || {
        let derived = exp_series(degree + 1, budget)?.derivative().truncate(degree)?;
        let e = exp_series(degree, budget)?;
        Ok(first_difference(&derived, &e).map(|(t, a, b)| describe(&t, &a, &b)))
    })?);

    out.push(run_check("coefficient_sums", || {
        for n in 1..=degree {
            if !verify_sums(n, budget)? {
                return Ok(Some(format!("degree {n}")));
            }
        }
        Ok(None)
    })?);

    out.push(run_check("product_formula", || {
        let mut table = ExpTable::new();
        for t in levels.iter().skip(1).flatten() {
            let (closed, product) = (table.a_hat(t)?, a_hat_product(t)?);
            if closed != product {
                return Ok(Some(format!("tree {t}: {closed} != {product}")));
            }
        }
        Ok(None)
    })?);

    out.push(run_check("binomial_recursion", || {
        let mut table = ExpTable::new();
        for t in levels.iter().skip(2).flatten() {
            if !table.recursion_check(t)? {
                return Ok(Some(format!("tree {t}")));
            }
        }
        Ok(None)
    })?);

    out.push(run_check("comb_trees", || {
        for n in 2..=degree {
            let ones = trees_with_a_hat_one(n, budget)?;
            let combs = comb_trees(n)?;
            if ones != combs || combs.len() != 1usize << (n - 2) {
                return Ok(Some(format!(
                    "degree {n}: {} trees with a_hat = 1, {} comb trees",
                    ones.len(),
                    combs.len()
                )));
            }
        }
        Ok(None)
    })?);

    out.push(run_check("split_sums", || {
        for n in 2..=degree {
            for k in 1..n {
                let (grouped, closed) = (split_sum(n, k, budget)?, s_k(n, k)?);
                if grouped != closed {
                    return Ok(Some(format!("n={n} k={k}: {grouped} != {closed}")));
                }
            }
        }
        Ok(None)
    })?);

    out.push(run_check("omega_recursion", || {
        for n in 2..=degree {
            if !verify_omega_recursion(n)? {
                return Ok(Some(format!("n={n}")));
            }
        }
        Ok(None)
    })?);

    out.push(run_check("mersenne_factorizations", || {
        let top = degree.min(bound.0);
        let sieve = MersenneSieve::up_to(top, bound)?;
        for n in 1..=top {
            let f = sieve.factor(n)?;
            if f.product() != mersenne(n)? {
                return Ok(Some(format!("M_{n}")));
            }
        }
        Ok(None)
    })?);

    out.push(run_check("omega_factorizations", || {
        for n in 1..=degree.min(bound.0 + 1) {
            let (assembled, direct) = (omega_factorization(n, bound)?.product(), omega(n)?);
            if assembled != direct {
                return Ok(Some(format!("omega({n})")));
            }
        }
        Ok(None)
    })?);

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_at_small_degree() {
        let report = run_suite(6, FactorBound::DEFAULT, TreeBudget::DEFAULT).unwrap();
        let names: Vec<&str> = report.iter().map(|c| c.name).collect();
        assert_eq!(names, CHECKS);
        assert!(report.iter().all(CheckOutcome::passed), "{report:?}");
    }

    #[test]
    fn degree_zero_is_vacuous() {
        let report = run_suite(0, FactorBound::DEFAULT, TreeBudget::DEFAULT).unwrap();
        assert!(report.iter().all(CheckOutcome::passed));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            run_suite(12, FactorBound::DEFAULT, TreeBudget(100)),
            Err(Error::TreeBudgetExceeded { .. })
        ));
    }

    #[test]
    fn differences_are_located() {
        let x = MagmaTree::leaf();
        let a = TreeSeries::<i64>::from_terms(2, [(x.clone(), 1)]);
        let b = TreeSeries::<i64>::from_terms(2, [(x.clone(), 2)]);
        assert_eq!(first_difference(&a, &b), Some((x, 1, 2)));
        assert_eq!(first_difference(&a, &a), None);
    }
}
