//! Mersenne orders, Wieferich exponents, valuations of Mersenne numbers and
//! their structured factorizations.
//!
//! The Mersenne order `v(p)` of an odd prime is the multiplicative order of 2
//! modulo `p`; the Wieferich exponent `eps(p)` is the p-adic valuation of
//! `M_{v(p)}`. For `n >= 1`, `ord_p(M_n)` is zero unless `v(p) | n`, in which
//! case it equals `eps(p) + ord_p(n)`. Every factorization produced here is
//! checked against that rule before it is returned.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mersenne_core::mersenne_unchecked;
use crate::primes::{factor_natural, is_prime, is_prime_natural, primes_up_to, strip_factor};
use crate::{Factorization, Natural};

/// Largest `n` for which `M_n` will be factored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBound(pub u32);

impl FactorBound {
    pub const DEFAULT: FactorBound = FactorBound(64);

    fn check(self, n: u64) -> Result<()> {
        if n > self.0 as u64 {
            return Err(Error::FactorBoundExceeded { requested: n, bound: self.0 });
        }
        Ok(())
    }
}

impl Default for FactorBound {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Default upper limit accepted by [`wieferich_search`].
pub const WIEFERICH_SEARCH_CAP: u64 = 10_000_000;

/// Mersenne order and Wieferich exponent of an odd prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderRecord {
    pub p: Natural,
    pub order: u64,
    pub wieferich_exponent: u32,
}

impl OrderRecord {
    pub fn compute(p: &Natural) -> Result<Self> {
        if p.is_even() || !is_prime_natural(p) {
            return Err(Error::NotOddPrime(p.to_string()));
        }
        let order = order_of_two(p)?;
        let wieferich_exponent = lift_exponent(p, order);
        Ok(Self { p: p.clone(), order, wieferich_exponent })
    }

    pub fn is_wieferich(&self) -> bool {
        self.wieferich_exponent >= 2
    }

    /// `ord_p(M_n)` for `n >= 1`.
    pub fn valuation_of_mersenne(&self, n: u64) -> u32 {
        if n % self.order != 0 {
            return 0;
        }
        let mut r = 0;
        let mut m = Natural::from(n);
        loop {
            let (q, rem) = m.div_rem(&self.p);
            if !rem.is_zero() {
                break;
            }
            m = q;
            r += 1;
        }
        self.wieferich_exponent + r
    }
}

/// Multiplicative order of 2 modulo the odd prime `p`: start from `p - 1` and
/// strip prime factors while `2^(order / q) = 1 (mod p)`.
fn order_of_two(p: &Natural) -> Result<u64> {
    let two = Natural::from(2u32);
    let group_order = p - 1u32;
    let mut order = group_order.clone();
    for (q, e) in factor_natural(&group_order)?.iter() {
        for _ in 0..e {
            let candidate = &order / q;
            if two.modpow(&candidate, p).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    if !two.modpow(&order, p).is_one() {
        return Err(Error::invariant(format!("2^{order} != 1 mod {p}")));
    }
    order
        .to_u64()
        .ok_or_else(|| Error::invalid(format!("Mersenne order of {p} does not fit in 64 bits")))
}

/// Largest `e` with `p^e | 2^order - 1`, by modular exponentiation modulo
/// increasing powers of `p`.
fn lift_exponent(p: &Natural, order: u64) -> u32 {
    let two = Natural::from(2u32);
    let exponent = Natural::from(order);
    let mut e = 1;
    let mut modulus = p * p;
    while two.modpow(&exponent, &modulus).is_one() {
        e += 1;
        modulus *= p;
    }
    e
}

fn odd_prime_record(p: u64) -> Result<OrderRecord> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    OrderRecord::compute(&Natural::from(p))
}

/// The Mersenne order `v(p)`: least `r >= 1` with `p | 2^r - 1`.
pub fn mersenne_order(p: u64) -> Result<u64> {
    Ok(odd_prime_record(p)?.order)
}

/// The Wieferich exponent `eps(p) = ord_p(M_{v(p)})`.
pub fn wieferich_exponent(p: u64) -> Result<u32> {
    Ok(odd_prime_record(p)?.wieferich_exponent)
}

/// `ord_p(M_n)` via the order/Wieferich-exponent rule.
///
/// For `p = 2` this returns 0, since every Mersenne number is odd.
pub fn ord_p_mersenne(p: u64, n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::invalid("Mersenne numbers are indexed from 1"));
    }
    if p == 2 {
        return Ok(0);
    }
    Ok(odd_prime_record(p)?.valuation_of_mersenne(n))
}

/// Primes grouped by their Mersenne order, for a divisor-closed set of
/// indices.
///
/// Every odd prime `q` with `v(q) = d` satisfies `q = 1 (mod d)`, and being odd
/// also `q = 1 (mod 2d)` when `d` is odd. Once the primes of all proper
/// divisors are divided out of `M_d`, what remains is found by trial division
/// over that progression, with a general factoring routine as fallback.
#[derive(Clone, Debug, Default)]
pub struct MersenneSieve {
    primitive: BTreeMap<u32, Vec<Natural>>,
}

/// Trial division over `1 + k * step` stops at this candidate.
const PRIMITIVE_TRIAL_LIMIT: u64 = 1 << 22;

impl MersenneSieve {
    /// Primitive primes of `M_d` for every `1 <= d <= n`.
    pub fn up_to(n: u32, bound: FactorBound) -> Result<Self> {
        bound.check(n as u64)?;
        Self::build((1..=n).collect())
    }

    /// Primitive primes of `M_d` for every divisor `d` of `n`.
    pub fn for_divisors_of(n: u32, bound: FactorBound) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("Mersenne numbers are indexed from 1"));
        }
        bound.check(n as u64)?;
        Self::build(divisors(n))
    }

    fn build(indices: Vec<u32>) -> Result<Self> {
        let mut sieve = Self::default();
        for d in indices {
            let mut rest = mersenne_unchecked(d);
            for (&e, primes) in &sieve.primitive {
                if d % e == 0 {
                    for p in primes {
                        rest = strip_factor(&rest, p).1;
                    }
                }
            }
            let found = primitive_part(rest, d)?;
            sieve.primitive.insert(d, found);
        }
        Ok(sieve)
    }

    /// Primes `p` with `v(p) = d`, ascending; empty when `d` was not sieved.
    pub fn primitive_primes(&self, d: u32) -> &[Natural] {
        self.primitive.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Odd primes with `v(p) <= threshold` among the sieved indices, ascending.
    pub fn primes_with_order_at_most(&self, threshold: u32) -> Vec<Natural> {
        let mut out: Vec<Natural> = self
            .primitive
            .range(..=threshold)
            .flat_map(|(_, ps)| ps.iter().cloned())
            .collect();
        out.sort();
        out
    }

    /// Factorization of `M_n`, cross-checked prime by prime against the
    /// order/Wieferich-exponent rule. All divisors of `n` must be sieved.
    pub fn factor(&self, n: u32) -> Result<Factorization> {
        let value = mersenne_unchecked(n);
        let mut out = Factorization::new();
        for d in divisors(n) {
            let primes = self
                .primitive
                .get(&d)
                .ok_or_else(|| Error::invalid(format!("index {d} was not sieved")))?;
            for p in primes {
                let (e, _) = strip_factor(&value, p);
                let record = OrderRecord::compute(p)?;
                if record.order != d as u64 {
                    return Err(Error::invariant(format!(
                        "prime {p} found at index {d} but has Mersenne order {}",
                        record.order
                    )));
                }
                let predicted = record.valuation_of_mersenne(n as u64);
                if predicted != e {
                    return Err(Error::invariant(format!(
                        "ord_{p}(M_{n}) = {e} but order rule predicts {predicted}"
                    )));
                }
                out.multiply_prime(p.clone(), e);
            }
        }
        if out.product() != value {
            return Err(Error::invariant(format!("factorization of M_{n} does not reassemble")));
        }
        Ok(out)
    }
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Factors `rest`, all of whose prime factors have Mersenne order exactly `d`.
fn primitive_part(mut rest: Natural, d: u32) -> Result<Vec<Natural>> {
    let mut found = Vec::new();
    let step = if d % 2 == 0 { d as u64 } else { 2 * d as u64 };
    let mut q = 1 + step;
    let mut exhausted_sqrt = false;
    while !rest.is_one() && q <= PRIMITIVE_TRIAL_LIMIT {
        let qq = Natural::from(q);
        if &qq * &qq > rest {
            exhausted_sqrt = true;
            break;
        }
        // Any candidate dividing `rest` is prime: its prime factors lie on the
        // same progression and were already removed.
        if (&rest % q).is_zero() {
            rest = strip_factor(&rest, &qq).1;
            found.push(qq);
        }
        q += step;
    }
    if !rest.is_one() {
        if exhausted_sqrt || is_prime_natural(&rest) {
            found.push(rest);
        } else {
            found.extend(factor_natural(&rest)?.primes().cloned());
        }
    }
    found.sort();
    for p in &found {
        let on_progression = ((p - 1u32) % d).is_zero() && p.is_odd();
        if !on_progression || !is_prime_natural(p) {
            return Err(Error::invariant(format!(
                "{p} is not a prime of Mersenne order {d}"
            )));
        }
    }
    Ok(found)
}

/// Complete factorization of `M_n` for `1 <= n <= bound`.
pub fn factor_mersenne(n: u32, bound: FactorBound) -> Result<Factorization> {
    MersenneSieve::for_divisors_of(n, bound)?.factor(n)
}

/// Which threshold `pi_m(x)` applies to the Mersenne order.
///
/// The defining text counts primes with `v(p) <= x - 1`, while the worked
/// example for `x = 16` counts the primes dividing `16!_M`, i.e. `v(p) <= x`
/// (it includes 257, whose order is 16). Both readings are offered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PiConvention {
    /// `v(p) <= x - 1`.
    #[default]
    Definition,
    /// `v(p) <= x`: the odd primes dividing `x!_M`.
    Example,
}

impl PiConvention {
    pub fn threshold(self, x: u32) -> u32 {
        match self {
            PiConvention::Definition => x - 1,
            PiConvention::Example => x,
        }
    }
}

impl FromStr for PiConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "definition" => Ok(PiConvention::Definition),
            "example" => Ok(PiConvention::Example),
            other => Err(Error::invalid(format!("unknown convention {other:?}"))),
        }
    }
}

impl fmt::Display for PiConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PiConvention::Definition => "definition",
            PiConvention::Example => "example",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiM {
    pub count: usize,
    pub primes: Vec<Natural>,
}

/// Counts odd primes by Mersenne-order threshold; see [`PiConvention`].
pub fn pi_m(x: u32, convention: PiConvention, bound: FactorBound) -> Result<PiM> {
    if x < 2 {
        return Err(Error::invalid(format!("pi_M needs x >= 2 (got {x})")));
    }
    let threshold = convention.threshold(x);
    let sieve = MersenneSieve::up_to(threshold, bound)?;
    let primes = sieve.primes_with_order_at_most(threshold);
    Ok(PiM { count: primes.len(), primes })
}

fn pow_mod_u128(mut base: u128, mut exp: u64, modulus: u128) -> u128 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// `2^(p-1) = 1 (mod p^2)`, which holds exactly when `eps(p) >= 2`.
fn fermat_quotient_vanishes(p: u64) -> bool {
    match p.checked_mul(p) {
        Some(sq) => pow_mod_u128(2, p - 1, sq as u128) == 1,
        None => {
            let p = Natural::from(p);
            Natural::from(2u32).modpow(&(&p - 1u32), &(&p * &p)).is_one()
        }
    }
}

/// Odd primes `p <= limit` with `eps(p) >= 2`.
pub fn wieferich_search(limit: u64, cap: u64) -> Result<Vec<u64>> {
    if limit > cap {
        return Err(Error::SearchCapExceeded { limit, cap });
    }
    let mut hits = Vec::new();
    for p in primes_up_to(limit).into_iter().filter(|&p| p > 2) {
        if fermat_quotient_vanishes(p) {
            let eps = wieferich_exponent(p)?;
            if eps < 2 {
                return Err(Error::invariant(format!(
                    "2^({p}-1) = 1 mod {p}^2 but eps({p}) = {eps}"
                )));
            }
            hits.push(p);
        }
    }
    Ok(hits)
}
