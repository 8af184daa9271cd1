//! Factorial Mersenne quotients `omega(n) = 2^(n-1) * (n-1)!_M / n!`.

use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mersenne_core::{digit_sum_unchecked, mersenne_binomial, mersenne_factorial};
use crate::prime_orders::{FactorBound, MersenneSieve, OrderRecord};
use crate::primes::is_prime;
use crate::{Factorization, Natural};

/// `omega(n)` as an exact quotient; fails loudly if `n!` does not divide.
pub fn omega(n: u32) -> Result<Natural> {
    if n == 0 {
        return Err(Error::invalid("omega is defined for n >= 1"));
    }
    let numerator = (Natural::one() << (n - 1) as usize) * mersenne_factorial(n - 1);
    let denominator = (1..=n).fold(Natural::one(), |acc, i| acc * i);
    let (q, r) = numerator.div_rem(&denominator);
    if !r.is_zero() {
        return Err(Error::invariant(format!("omega({n}) is not an integer")));
    }
    Ok(q)
}

/// `ord_p(omega(n))` from the digit-sum formula, without computing `omega(n)`.
///
/// For `p = 2` this is `d_2(n) - 1`. For odd `p`, with `m = floor((n-1)/v(p))`,
/// it is `eps(p) * m - ((n - d_p(n)) - (m - d_p(m))) / (p - 1)`.
pub fn ord_p_omega(n: u64, p: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::invalid("omega is defined for n >= 1"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if p == 2 {
        return Ok(digit_sum_unchecked(n, 2) as i64 - 1);
    }
    let record = OrderRecord::compute(&Natural::from(p))?;
    Ok(ord_odd(n, &record))
}

fn ord_odd(n: u64, record: &OrderRecord) -> i64 {
    let m = (n - 1) / record.order;
    // Digit sums of numbers below p are the numbers themselves.
    let (dn, dm, p_minus_1) = match record.p.to_u64() {
        Some(p) => (digit_sum_unchecked(n, p), digit_sum_unchecked(m, p), (p - 1) as i64),
        None => (n, m, i64::MAX),
    };
    let from_factorial = ((n - dn) as i64 - (m - dm) as i64) / p_minus_1;
    record.wieferich_exponent as i64 * m as i64 - from_factorial
}

/// Prime factorization of `omega(n)` assembled from the valuation formula.
///
/// The odd support is `{p : v(p) <= n - 1}`, read off complete factorizations
/// of `M_1 .. M_{n-1}`, so `n - 1` must be within `bound`. The result is
/// checked against the direct quotient [`omega`].
pub fn omega_factorization(n: u32, bound: FactorBound) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::invalid("omega is defined for n >= 1"));
    }
    let sieve = MersenneSieve::up_to(n - 1, bound)?;
    let mut out = Factorization::new();
    out.multiply_prime(Natural::from(2u32), digit_sum_unchecked(n as u64, 2) as u32 - 1);
    for p in sieve.primes_with_order_at_most(n - 1) {
        let record = OrderRecord::compute(&p)?;
        let e = ord_odd(n as u64, &record);
        if e < 0 {
            return Err(Error::invariant(format!("ord_{p}(omega({n})) = {e} < 0")));
        }
        out.multiply_prime(p, e as u32);
    }
    let direct = omega(n)?;
    if out.product() != direct {
        return Err(Error::invariant(format!(
            "valuation formula gives {} but omega({n}) = {direct}",
            out.product()
        )));
    }
    Ok(out)
}

/// `omega(n)` together with its checked factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaValue {
    pub n: u32,
    pub value: Natural,
    pub factorization: Factorization,
}

impl OmegaValue {
    pub fn compute(n: u32, bound: FactorBound) -> Result<Self> {
        let factorization = omega_factorization(n, bound)?;
        Ok(Self { n, value: factorization.product(), factorization })
    }
}

/// `S_k(n) = (n-2 choose k-1)_M * omega(k) * omega(n-k)` for `1 <= k <= n-1`.
pub fn s_k(n: u32, k: u32) -> Result<Natural> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::invalid(format!("S_k(n) needs 1 <= k <= n-1 (got n={n}, k={k})")));
    }
    Ok(mersenne_binomial(n - 2, k - 1)? * omega(k)? * omega(n - k)?)
}

/// Whether `sum_{k=1}^{n-1} S_k(n) = omega(n)`.
pub fn verify_omega_recursion(n: u32) -> Result<bool> {
    if n < 2 {
        return Err(Error::invalid(format!("the recursion needs n >= 2 (got {n})")));
    }
    let mut sum = Natural::zero();
    for k in 1..n {
        sum += s_k(n, k)?;
    }
    Ok(sum == omega(n)?)
}
