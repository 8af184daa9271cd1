//! Primality testing and prime factorizations.
//!
//! Primality is deterministic below 2^64 (Miller-Rabin with a proven base
//! set). Above 2^64 the test is BPSW: strong probable-prime tests to the
//! first twelve bases followed by a strong Lucas test, with no random bases,
//! so results are reproducible.

use std::collections::BTreeMap;
use std::fmt;

use num_prime::nt_funcs;
use num_prime::{FactorizationConfig, PrimalityTestConfig};
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::Natural;

fn big_primality_config() -> PrimalityTestConfig {
    let mut config = PrimalityTestConfig::bpsw();
    config.sprp_trials = 12;
    config
}

pub fn is_prime(n: u64) -> bool {
    nt_funcs::is_prime64(n)
}

pub fn is_prime_natural(n: &Natural) -> bool {
    match n.to_u64() {
        Some(small) => is_prime(small),
        None => nt_funcs::is_prime(n, Some(big_primality_config())).probably(),
    }
}

/// All primes `p <= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut ps = nt_funcs::primes(limit.saturating_add(1));
    ps.retain(|&p| p <= limit);
    ps
}

/// Multiplicity of `p` in `n`, together with the cofactor `n / p^e`.
pub fn strip_factor(n: &Natural, p: &Natural) -> (u32, Natural) {
    let mut e = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&rest, p);
        if r != Natural::default() {
            return (e, rest);
        }
        rest = q;
        e += 1;
    }
}

/// p-adic valuation of a non-zero natural.
pub fn valuation(n: &Natural, p: &Natural) -> u32 {
    debug_assert!(*n != Natural::default());
    strip_factor(n, p).0
}

/// Complete prime factorization of `n >= 1`.
pub fn factor_natural(n: &Natural) -> Result<Factorization> {
    if *n == Natural::default() {
        return Err(Error::invalid("cannot factor 0"));
    }
    let mut out = Factorization::new();
    if let Some(small) = n.to_u128() {
        for (p, e) in nt_funcs::factorize128(small) {
            out.multiply_prime(Natural::from(p), e as u32);
        }
        return Ok(out);
    }
    let mut config = FactorizationConfig::default();
    config.primality_config = big_primality_config();
    config.td_limit = Some(1 << 16);
    config.rho_trials = 64;
    let (found, unfactored) = nt_funcs::factors(n.clone(), Some(config));
    if let Some(rest) = unfactored {
        let rest: Vec<String> = rest.iter().map(|r| r.to_string()).collect();
        return Err(Error::invariant(format!(
            "could not completely factor {n}; unfactored parts {}",
            rest.join(", ")
        )));
    }
    for (p, e) in found {
        out.multiply_prime(p, e as u32);
    }
    Ok(out)
}

/// A finite map prime -> positive exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: BTreeMap<Natural, u32>,
}

impl Factorization {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a factorization from `(prime, exponent)` pairs, rejecting
    /// non-prime keys. Zero exponents are dropped; repeated primes accumulate.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Natural, u32)>,
    {
        let mut out = Self::new();
        for (p, e) in pairs {
            if !is_prime_natural(&p) {
                return Err(Error::NotPrime(p.to_string()));
            }
            out.multiply_prime(p, e);
        }
        Ok(out)
    }

    pub(crate) fn multiply_prime(&mut self, p: Natural, e: u32) {
        if e > 0 {
            *self.factors.entry(p).or_insert(0) += e;
        }
    }

    pub fn exponent(&self, p: &Natural) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    /// `(prime, exponent)` pairs in ascending prime order.
    pub fn iter(&self) -> impl Iterator<Item = (&Natural, u32)> + '_ {
        self.factors.iter().map(|(p, &e)| (p, e))
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> + '_ {
        self.factors.keys()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Reassembles the factored integer.
    pub fn product(&self) -> Natural {
        self.factors
            .iter()
            .fold(Natural::one(), |acc, (p, &e)| acc * num_traits::pow(p.clone(), e as usize))
    }
}

impl fmt::Display for Factorization {
    /// `2 * 3^2 * 7`; the empty factorization renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}
