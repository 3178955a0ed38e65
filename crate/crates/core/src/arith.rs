//! Elementary number theory: factorization, primality, and the handful of
//! derived quantities the homology case analysis is driven by.

use crate::{Error, Result};

/// Prime factorization as `(prime, exponent)` pairs, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Distinct primes, increasing.
    pub fn primes(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, _)| p).collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product()
    }
}

/// Deterministic Miller-Rabin, valid for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // This base set is deterministic below 3.3 * 10^24, which covers u64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` mod `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Trial division with a Miller-Rabin early exit once the cofactor is prime.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::NTooSmall(n));
    }
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0u32;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    push(3, &mut rest);
    let mut d = 5u64;
    while rest > 1 && d.saturating_mul(d) <= rest {
        if is_prime(rest) {
            break;
        }
        push(d, &mut rest);
        push(d + 2, &mut rest);
        d += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factorize(n)?.is_squarefree())
}

/// Distinct prime divisors of `n > 1`, increasing.
pub fn prime_divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.primes())
}

/// All positive divisors of `n`, increasing.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let f = factorize(n)?;
    let mut divs = vec![1u64];
    for &(p, e) in f.factors() {
        let base = divs.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            divs.extend(base.iter().map(|d| d * pe));
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Whether `b` generates the multiplicative group mod the prime `p`.
pub fn is_primitive_root(b: u64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(b % 2 == 1);
    }
    if b.is_multiple_of(p) {
        return Ok(false);
    }
    let ord = p - 1;
    for q in prime_divisors(ord)? {
        if pow_mod(b, ord / q, p) == 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest prime dividing both `n` and 2730 = 2*3*5*7*13, if any.
///
/// These are exactly the primes `p` with `r_p = 1`, and the case analysis for
/// exact `H2` answers branches on the smallest one present in `n`.
pub fn scpd(n: u64) -> Option<u64> {
    [2u64, 3, 5, 7, 13].into_iter().find(|&p| n.is_multiple_of(p))
}

/// `gcd { m^2 - 1 : m divides n }`. The divisor `m = 1` contributes 0, which
/// is neutral, so the gcd runs over the divisors bigger than 1.
pub fn d_of(n: u64) -> Result<u64> {
    let mut d = 0u64;
    for m in divisors(n)? {
        let m2 = m
            .checked_mul(m)
            .and_then(|s| s.checked_sub(1))
            .ok_or(Error::Overflow)?;
        d = gcd(d, m2);
    }
    Ok(d)
}

/// The free rank `r_p` of `H2(SL2(Z[1/p]))` for a prime `p`.
///
/// `r_2 = r_3 = 1`; for `p >= 5` it is `(p-7)/6`, `(p+1)/6`, `(p-1)/6`,
/// `(p+7)/6` as `p = 1, 5, 7, 11 mod 12`. Always odd, and equal to 1 exactly
/// for `p` in `{2, 3, 5, 7, 13}`.
pub fn r_p(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(match p {
        2 | 3 => 1,
        _ => match p % 12 {
            1 => (p - 7) / 6,
            5 => (p + 1) / 6,
            7 => (p - 1) / 6,
            11 => (p + 7) / 6,
            _ => unreachable!("p >= 5 is coprime to 12"),
        },
    })
}

/// Primes of `n` sorted by `(r_p, p)` ascending; the head of this order is the
/// prime whose `H2` the others are compared against.
pub fn primes_by_rank(n: u64) -> Result<Vec<u64>> {
    let mut ps = prime_divisors(n)?;
    let mut keyed: Vec<(u64, u64)> = Vec::with_capacity(ps.len());
    for p in ps.drain(..) {
        keyed.push((r_p(p)?, p));
    }
    keyed.sort_unstable();
    Ok(keyed.into_iter().map(|(_, p)| p).collect())
}

/// Sieve of Eratosthenes: all primes `< limit`.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit <= 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit];
    let mut primes = Vec::new();
    for p in 2..limit {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q < limit {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Square-free integers in `[2, max]`, increasing.
pub fn squarefree_up_to(max: u64) -> Vec<u64> {
    (2..=max)
        .filter(|&n| factorize(n).map(|f| f.is_squarefree()).unwrap_or(false))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_square() {
        let below_100: Vec<u64> = (2..100).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            below_100,
            vec![
                2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
                79, 83, 89, 97
            ]
        );
        assert!(is_prime(2_147_483_647));
        // Composite, but a strong pseudoprime to bases 2, 3, 5, 7.
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn factorize_matches_product() {
        for n in 2..=2000u64 {
            let f = factorize(n).unwrap();
            let back: u64 = f
                .factors()
                .iter()
                .map(|&(p, e)| p.pow(e))
                .product();
            assert_eq!(back, n);
            for &(p, _) in f.factors() {
                assert!(is_prime(p), "claimed factor {p} of {n} is composite");
            }
        }
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(30).unwrap());
        assert!(!is_squarefree(12).unwrap());
        assert_eq!(factorize(46).unwrap().primes(), vec![2, 23]);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(10).unwrap(), vec![1, 2, 5, 10]);
        assert_eq!(divisors(36).unwrap(), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn scpd_examples() {
        assert_eq!(scpd(10), Some(2));
        assert_eq!(scpd(65), Some(5));
        assert_eq!(scpd(77), Some(7));
        assert_eq!(scpd(187), None);
        assert_eq!(scpd(11 * 17 * 19), None);
    }

    #[test]
    fn d_of_examples() {
        assert_eq!(d_of(5).unwrap(), 24);
        assert_eq!(d_of(6).unwrap(), 1);
        assert_eq!(d_of(10).unwrap(), 3);
        assert_eq!(d_of(7).unwrap(), 48);
        assert_eq!(d_of(3).unwrap(), 8);
        assert_eq!(d_of(17).unwrap(), 288);
    }

    #[test]
    fn r_p_examples() {
        assert_eq!(r_p(2).unwrap(), 1);
        assert_eq!(r_p(3).unwrap(), 1);
        assert_eq!(r_p(5).unwrap(), 1);
        assert_eq!(r_p(7).unwrap(), 1);
        assert_eq!(r_p(13).unwrap(), 1);
        assert_eq!(r_p(11).unwrap(), 3);
        assert_eq!(r_p(17).unwrap(), 3);
        assert_eq!(r_p(19).unwrap(), 3);
        assert_eq!(r_p(23).unwrap(), 5);
        assert_eq!(r_p(4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn r_p_is_odd_and_exceptional_set_below_1000() {
        for p in primes_below(1000) {
            let r = r_p(p).unwrap();
            assert_eq!(r % 2, 1, "r_{p} = {r} is even");
            assert_eq!(r == 1, matches!(p, 2 | 3 | 5 | 7 | 13));
        }
    }

    #[test]
    fn rank_order_examples() {
        // r_5 = r_13 = 1; the tie breaks by prime size.
        assert_eq!(primes_by_rank(65).unwrap(), vec![5, 13]);
        // r_11 = r_17 = 3.
        assert_eq!(primes_by_rank(187).unwrap(), vec![11, 17]);
        // r_7 = 1 beats r_11 = 3 regardless of size.
        assert_eq!(primes_by_rank(77).unwrap(), vec![7, 11]);
    }

    #[test]
    fn d_of_congruences_on_squarefree_n() {
        // Structural facts feeding the Gamma0 case split, checked on every
        // square-free n up to 1000: a divisor of 2 or 5 pins the 3-part of d
        // to exactly 3 (when 3 does not divide n), and a divisor of 3 or 5
        // pins the 2-part to exactly 8 (when n is odd).
        for n in squarefree_up_to(1000) {
            let d = d_of(n).unwrap();
            if n % 3 != 0 && (n % 2 == 0 || n % 5 == 0) {
                assert_eq!(d % 3, 0, "n = {n}, d = {d}");
                assert_ne!(d % 9, 0, "n = {n}, d = {d}");
            }
            if n % 2 != 0 && (n % 3 == 0 || n % 5 == 0) {
                assert_eq!(d % 8, 0, "n = {n}, d = {d}");
                assert_ne!(d % 16, 0, "n = {n}, d = {d}");
            }
            if n % 2 == 0 {
                assert_eq!(d % 2, 1, "d must be odd when 2 | n; n = {n}, d = {d}");
            }
        }
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(inv_mod(6, 7), Some(6));
        assert_eq!(inv_mod(6, 5), Some(1));
        assert_eq!(inv_mod(4, 8), None);
        for m in 2..50u64 {
            for a in 1..m {
                if gcd(a, m) == 1 {
                    let inv = inv_mod(a, m).unwrap();
                    assert_eq!(mul_mod(a, inv, m), 1);
                }
            }
        }
    }

    #[test]
    fn sieve_matches_miller_rabin() {
        let sieved = primes_below(10_000);
        let direct: Vec<u64> = (2..10_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieved, direct);
    }
}
