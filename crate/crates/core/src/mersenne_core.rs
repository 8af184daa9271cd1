//! Mersenne numbers, Mersenne factorials and binomials, base-p digit sums and
//! Legendre's valuation of `n!`.

use num_integer::Integer as _;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::Natural;

/// `2^n - 1`, for `n >= 1`.
pub fn mersenne(n: u32) -> Result<Natural> {
    if n == 0 {
        return Err(Error::invalid("Mersenne numbers are indexed from 1"));
    }
    Ok(mersenne_unchecked(n))
}

pub(crate) fn mersenne_unchecked(n: u32) -> Natural {
    (Natural::one() << n as usize) - Natural::one()
}

/// `n!_M = M_1 * M_2 * ... * M_n`; `0!_M = 1`.
pub fn mersenne_factorial(n: u32) -> Natural {
    (1..=n).fold(Natural::one(), |acc, i| acc * mersenne_unchecked(i))
}

/// `n!_M / (r!_M (n-r)!_M)`, computed as an exact quotient.
///
/// Fails with [`Error::Invariant`] if the division leaves a remainder, which
/// would mean an arithmetic bug rather than bad input.
pub fn mersenne_binomial(n: u32, r: u32) -> Result<Natural> {
    if r > n {
        return Err(Error::invalid(format!("binomial needs r <= n (got n={n}, r={r})")));
    }
    let numerator = mersenne_factorial(n);
    let denominator = mersenne_factorial(r) * mersenne_factorial(n - r);
    let (q, rem) = numerator.div_rem(&denominator);
    if !rem.is_zero() {
        return Err(Error::invariant(format!(
            "Mersenne binomial ({n} choose {r}) is not an exact quotient"
        )));
    }
    Ok(q)
}

/// The Gaussian binomial `[n r]_q` evaluated at `q = 2`, built row by row from
/// `[n r] = [n-1 r-1] + q^r [n-1 r]`.
///
/// Shares no code with [`mersenne_binomial`], so the two check each other.
pub fn gaussian_binomial_at_2(n: u32, r: u32) -> Result<Natural> {
    if r > n {
        return Err(Error::invalid(format!("binomial needs r <= n (got n={n}, r={r})")));
    }
    let width = r as usize;
    // row[j] holds [i j] for the current i; entries with j > i stay zero.
    let mut row = vec![Natural::zero(); width + 1];
    row[0] = Natural::one();
    for i in 1..=n as usize {
        for j in (1..=width.min(i)).rev() {
            let shifted = &row[j] << j;
            row[j] = &row[j - 1] + shifted;
        }
    }
    Ok(row.swap_remove(width))
}

/// Sum of the base-`p` digits of `m`.
pub fn digit_sum(m: u64, p: u64) -> Result<u64> {
    if p < 2 {
        return Err(Error::invalid(format!("digit base must be >= 2 (got {p})")));
    }
    Ok(digit_sum_unchecked(m, p))
}

pub(crate) fn digit_sum_unchecked(mut m: u64, p: u64) -> u64 {
    let mut s = 0;
    while m > 0 {
        s += m % p;
        m /= p;
    }
    s
}

/// p-adic valuation of `n!`.
///
/// Computed both as `(n - d_p(n)) / (p - 1)` and as `sum floor(n / p^i)`; the
/// two must agree.
pub fn ord_factorial(n: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let closed = (n - digit_sum_unchecked(n, p)) / (p - 1);
    let mut floor_sum = 0;
    let mut q = n / p;
    while q > 0 {
        floor_sum += q;
        q /= p;
    }
    if closed != floor_sum {
        return Err(Error::invariant(format!(
            "ord_{p}({n}!) closed form {closed} != floor sum {floor_sum}"
        )));
    }
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(n: u64) -> Natural {
        Natural::from(n)
    }

    #[test]
    fn mersenne_values() {
        assert_eq!(mersenne(1).unwrap(), nat(1));
        assert_eq!(mersenne(5).unwrap(), nat(31));
        assert_eq!(mersenne(15).unwrap(), nat(2u64.pow(15) - 1));
        assert_eq!(mersenne(64).unwrap(), nat(u64::MAX));
        assert!(matches!(mersenne(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn factorial_values() {
        assert_eq!(mersenne_factorial(0), nat(1));
        assert_eq!(mersenne_factorial(3), nat(1 * 3 * 7));
        assert_eq!(mersenne_factorial(5), nat(1 * 3 * 7 * 15 * 31));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(mersenne_binomial(4, 2).unwrap(), nat(35));
        assert_eq!(mersenne_binomial(7, 0).unwrap(), nat(1));
        // 63 * 31 * 15 / (7 * 3 * 1)
        assert_eq!(mersenne_binomial(6, 3).unwrap(), nat(1395));
        assert!(mersenne_binomial(2, 3).is_err());
    }

    #[test]
    fn gaussian_values() {
        assert_eq!(gaussian_binomial_at_2(2, 1).unwrap(), nat(3));
        assert_eq!(gaussian_binomial_at_2(4, 2).unwrap(), nat(35));
        assert_eq!(gaussian_binomial_at_2(5, 5).unwrap(), nat(1));
        assert_eq!(gaussian_binomial_at_2(0, 0).unwrap(), nat(1));
        assert!(gaussian_binomial_at_2(1, 2).is_err());
    }

    #[test]
    fn binomial_routes_agree_up_to_40() {
        for n in 0..=40 {
            for r in 0..=n {
                let direct = mersenne_binomial(n, r).unwrap();
                assert_eq!(direct, gaussian_binomial_at_2(n, r).unwrap(), "n={n} r={r}");
                assert_eq!(direct, mersenne_binomial(n, n - r).unwrap());
            }
        }
    }

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum(100, 7).unwrap(), 4);
        assert_eq!(digit_sum(33, 7).unwrap(), 9);
        assert_eq!(digit_sum(0, 5).unwrap(), 0);
        assert!(digit_sum(10, 1).is_err());
    }

    #[test]
    fn factorial_valuations() {
        assert_eq!(ord_factorial(13, 7).unwrap(), 1);
        assert_eq!(ord_factorial(100, 7).unwrap(), 16);
        assert_eq!(ord_factorial(6, 7).unwrap(), 0);
        assert!(ord_factorial(6, 4).is_err());
    }

    #[test]
    fn legendre_and_digit_congruence() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for n in 0..=10_000u64 {
                ord_factorial(n, p).unwrap();
                assert_eq!(n % (p - 1), digit_sum(n, p).unwrap() % (p - 1));
            }
        }
    }

    proptest! {
        // Fixed seed so runs reproduce.
        #![proptest_config(ProptestConfig {
            rng_seed: proptest::test_runner::RngSeed::Fixed(0x4d45_5253_454e_4e45),
            failure_persistence: None,
            ..ProptestConfig::default()
        })]

        #[test]
        fn exponent_arithmetic(a in 1u32..=64, b in 1u32..=64) {
            let lhs = mersenne(a + b).unwrap() + 1u32;
            let rhs = (mersenne(a).unwrap() + 1u32) * (mersenne(b).unwrap() + 1u32);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
