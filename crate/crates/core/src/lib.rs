//! Exact arithmetic for Mersenne-number combinatorics and the non-associative
//! exponential series over the free magma of planar binary rooted trees.
//!
//! Number-theoretic quantities (Mersenne numbers, Mersenne factorials and
//! binomials, orders, Wieferich exponents, factorial Mersenne quotients) live
//! in [`mersenne_core`], [`prime_orders`] and [`omega`]. The tree side lives in
//! [`magma`] (the trees themselves), [`series`] (tree-indexed power series,
//! generic over the coefficient scalar) and [`exponential`] (the coefficients
//! of `exp(x)` and the identities they satisfy). [`verify`] bundles every
//! identity check into a single report.
//!
//! Everything is exact. Arbitrary-precision naturals, integers and rationals
//! come from `num-bigint` / `num-rational`, aliased below.

pub mod error;
pub mod exponential;
pub mod magma;
pub mod mersenne_core;
pub mod omega;
pub mod prime_orders;
pub mod primes;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use exponential::{
    a_coefficient, a_hat, a_hat_product, a_hat_recursion_check, coefficient_table, exp_series,
    trees_with_a_hat_one, verify_derivative, verify_functional_equation, verify_sums,
    ExpCoefficient, ExpTable,
};
pub use magma::{
    comb_trees, enumerate_trees, inner_nodes, parse, InnerNode, MagmaTree, TreeBudget, TreeKey,
};
pub use mersenne_core::{
    digit_sum, gaussian_binomial_at_2, mersenne, mersenne_binomial, mersenne_factorial,
    ord_factorial,
};
pub use omega::{
    omega, omega_factorization, ord_p_omega, s_k, verify_omega_recursion, OmegaValue,
};
pub use prime_orders::{
    factor_mersenne, mersenne_order, ord_p_mersenne, pi_m, wieferich_exponent, wieferich_search,
    FactorBound, MersenneSieve, OrderRecord, PiConvention, PiM,
};
pub use primes::{is_prime, is_prime_natural, Factorization};
pub use series::{ClassicalSeries, Coefficient, SeriesOrder, TreeSeries};

/// Arbitrary-precision non-negative integer.
pub type Natural = num_bigint::BigUint;
/// Arbitrary-precision signed integer.
pub type Integer = num_bigint::BigInt;
/// Reduced fraction of arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

/// Tree power series with exact rational coefficients.
pub type RationalSeries = TreeSeries<Rational>;
/// Tree power series with arbitrary-precision integer coefficients.
pub type IntegerSeries = TreeSeries<Integer>;
/// Tree power series with machine-integer coefficients (handy for small tests).
pub type SmallSeries = TreeSeries<i64>;
/// Classical projection of a [`RationalSeries`].
pub type RationalClassicalSeries = ClassicalSeries<Rational>;
