//! Shared strategies and independent oracles for the integration suites.
#![allow(dead_code)]

use mersenne_magma::{enumerate_trees, MagmaTree, Rational, RationalSeries, TreeBudget};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

/// Seed for every randomized suite, so failures reproduce.
pub const SEED: u64 = 0x4d45_5253_454e_4e45;

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

/// All trees of degree `0..=n`, unit first.
pub fn trees_up_to(n: u32) -> Vec<MagmaTree> {
    let mut out = vec![MagmaTree::unit()];
    for d in 1..=n {
        out.extend(enumerate_trees(d, TreeBudget::DEFAULT).unwrap());
    }
    out
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Sparse rational series with up to `max_terms` terms of degree `<= n`.
pub fn series(n: u32, max_terms: usize) -> impl Strategy<Value = RationalSeries> {
    let pool = trees_up_to(n);
    let len = pool.len();
    prop::collection::vec((0..len, rational()), 0..=max_terms).prop_map(move |terms| {
        RationalSeries::from_terms(n, terms.into_iter().map(|(i, c)| (pool[i].clone(), c)))
    })
}

/// Like [`series`] but without a constant term.
pub fn series_without_constant(n: u32, max_terms: usize) -> impl Strategy<Value = RationalSeries> {
    let pool: Vec<MagmaTree> = trees_up_to(n).into_iter().skip(1).collect();
    let len = pool.len();
    prop::collection::vec((0..len, rational()), 0..=max_terms).prop_map(move |terms| {
        RationalSeries::from_terms(n, terms.into_iter().map(|(i, c)| (pool[i].clone(), c)))
    })
}

/// Catalan numbers from `C(n+1) = sum C(i) C(n-i)`.
pub fn catalan_by_recurrence(count: usize) -> Vec<u64> {
    let mut c = vec![1u64];
    for n in 1..count {
        c.push((0..n).map(|i| c[i] * c[n - 1 - i]).sum());
    }
    c
}

/// Dense product of classical series truncated to the shorter length.
pub fn dense_multiply(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().min(b.len());
    let mut out = vec![Rational::from_integer(0.into()); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Prime factorization by trial division.
pub fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Multiplicative order of 2 modulo odd `p` by iteration.
pub fn naive_order(p: u64) -> u64 {
    let mut r = 1;
    let mut acc = 2 % p;
    while acc != 1 {
        acc = acc * 2 % p;
        r += 1;
    }
    r
}
