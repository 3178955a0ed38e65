//! Tame symbols on products of Steinberg symbols over Q. For an odd prime p,
//! the symbol {a, b} maps to (-1)^(v(a)v(b)) * b^v(a) / a^v(b) reduced mod p,
//! a unit of F_p; a tuple of such maps evaluates one symbol at several primes
//! at once.

use crate::arith;
use crate::rat::Rat;
use crate::{Error, Result};

/// A formal product of symbols {a_i, b_i} with all entries nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolProduct {
    pairs: Vec<(Rat, Rat)>,
}

impl SymbolProduct {
    pub fn new(pairs: Vec<(Rat, Rat)>) -> Result<SymbolProduct> {
        for (a, b) in &pairs {
            if a.is_zero() || b.is_zero() {
                return Err(Error::ZeroInSymbol);
            }
        }
        Ok(SymbolProduct { pairs })
    }

    pub fn single(a: Rat, b: Rat) -> Result<SymbolProduct> {
        SymbolProduct::new(vec![(a, b)])
    }

    pub fn pairs(&self) -> &[(Rat, Rat)] {
        &self.pairs
    }
}

/// v_p of a nonzero rational.
pub fn valuation(p: u64, q: &Rat) -> Result<i64> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    q.valuation(p)
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenTamePrime(p));
    }
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// The image of one symbol pair at p, via the class data of both slots.
fn tame_pair(p: u64, a: &Rat, b: &Rat) -> Result<u64> {
    let (ca, cb) = (SymbolClass::of(p, a)?, SymbolClass::of(p, b)?);
    Ok(tame_class(p, &ca, &cb))
}

/// Tame symbol of a product: the product of the per-pair values mod p.
pub fn tame_symbol(p: u64, s: &SymbolProduct) -> Result<u64> {
    check_odd_prime(p)?;
    let mut acc = 1u64;
    for (a, b) in s.pairs() {
        acc = arith::mul_mod(acc, tame_pair(p, a, b)?, p);
    }
    debug_assert!(acc != 0, "tame symbol values are units");
    Ok(acc)
}

/// Componentwise tame symbol over a tuple of distinct odd primes.
pub fn delta_tuple(primes: &[u64], s: &SymbolProduct) -> Result<Vec<u64>> {
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        let mut product = 1u64;
        for &p in primes {
            product = product.checked_mul(p).ok_or(Error::Overflow)?;
        }
        return Err(Error::NotSquareFree(product));
    }
    primes.iter().map(|&p| tame_symbol(p, s)).collect()
}

/// What the tame symbol actually consumes from a slot: the valuation mod
/// p - 1 and the unit part mod p. Since p - 1 is even, this also pins the
/// valuation's parity, and the data is multiplicative in the slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct SymbolClass {
    pub v: u64,
    pub u: u64,
}

impl SymbolClass {
    pub(crate) fn of(p: u64, x: &Rat) -> Result<SymbolClass> {
        let ord = p - 1;
        let v = x.valuation(p)?.rem_euclid(ord as i64) as u64;
        Ok(SymbolClass { v, u: x.unit_mod(p)? })
    }

    pub(crate) fn compose(&self, other: &SymbolClass, p: u64) -> SymbolClass {
        SymbolClass {
            v: (self.v + other.v) % (p - 1),
            u: arith::mul_mod(self.u, other.u, p),
        }
    }
}

/// The symbol value from class data alone: sign from the valuation parities,
/// then cross powers of the unit parts with exponents reduced mod p - 1.
pub(crate) fn tame_class(p: u64, a: &SymbolClass, b: &SymbolClass) -> u64 {
    let ord = p - 1;
    let sign = if (a.v % 2) * (b.v % 2) == 1 { p - 1 } else { 1 };
    let up = arith::pow_mod(b.u, a.v % ord, p);
    let down = arith::pow_mod(a.u, (ord - b.v % ord) % ord, p);
    arith::mul_mod(arith::mul_mod(sign, up, p), down, p)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn r(num: i128, den: i128) -> Rat {
        Rat::new(num, den).unwrap()
    }

    fn tau(p: u64, a: Rat, b: Rat) -> u64 {
        tame_symbol(p, &SymbolProduct::single(a, b).unwrap()).unwrap()
    }

    #[test]
    fn frozen_values() {
        // (-1)^(1*1) * 5/5 = -1 = 4 mod 5.
        assert_eq!(tau(5, r(5, 1), r(5, 1)), 4);
        // v_7(7) = 1, v_7(3) = 0: the symbol is 3 mod 7.
        assert_eq!(tau(7, r(7, 1), r(3, 1)), 3);
        // Two units map to 1.
        assert_eq!(tau(3, r(2, 1), r(5, 1)), 1);
        assert_eq!(tau(5, r(5, 3), r(-2, 3)), 1);
    }

    #[test]
    fn tuple_values() {
        let s = SymbolProduct::single(r(35, 1), r(2, 1)).unwrap();
        assert_eq!(delta_tuple(&[5, 7], &s).unwrap(), vec![2, 2]);
        let one = SymbolProduct::single(r(1, 1), r(7, 2)).unwrap();
        assert_eq!(delta_tuple(&[3], &one).unwrap(), vec![1]);
        let units = SymbolProduct::single(r(2, 1), r(3, 1)).unwrap();
        assert_eq!(delta_tuple(&[5, 7, 11], &units).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn input_gates() {
        assert!(matches!(
            SymbolProduct::single(Rat::ZERO, r(3, 1)),
            Err(Error::ZeroInSymbol)
        ));
        let s = SymbolProduct::single(r(2, 1), r(3, 1)).unwrap();
        assert!(matches!(tame_symbol(2, &s), Err(Error::EvenTamePrime(2))));
        assert!(matches!(tame_symbol(9, &s), Err(Error::NotPrime(9))));
        assert!(matches!(
            delta_tuple(&[5, 5], &s),
            Err(Error::NotSquareFree(25))
        ));
        assert!(matches!(delta_tuple(&[2, 3], &s), Err(Error::EvenTamePrime(2))));
        assert_eq!(valuation(5, &r(50, 1)).unwrap(), 2);
        assert_eq!(valuation(3, &r(2, 9)).unwrap(), -2);
        assert_eq!(valuation(7, &r(10, 1)).unwrap(), 0);
    }

    #[test]
    fn empty_product_is_one() {
        let s = SymbolProduct::new(vec![]).unwrap();
        assert_eq!(tame_symbol(5, &s).unwrap(), 1);
    }

    #[test]
    fn generator_witnesses_exist() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let found = (2..p).any(|b| {
                let t = tau(p, r(p as i128, 1), r(b as i128, 1));
                arith::is_primitive_root(t, p).unwrap()
            });
            assert!(found, "no generator witness at p = {p}");
        }
    }

    fn nonzero_rat() -> impl Strategy<Value = Rat> {
        ((-50i128..=50).prop_filter("nonzero", |n| *n != 0), 1i128..=50)
            .prop_map(|(n, d)| Rat::new(n, d).unwrap())
    }

    proptest! {
        #[test]
        fn product_splits(a in nonzero_rat(), b in nonzero_rat(), c in nonzero_rat(), d in nonzero_rat()) {
            for p in [3u64, 5, 7, 13] {
                let joint = SymbolProduct::new(vec![(a, b), (c, d)]).unwrap();
                let lhs = tame_symbol(p, &joint).unwrap();
                let rhs = arith::mul_mod(tau(p, a, b), tau(p, c, d), p);
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn steinberg_relation(a in nonzero_rat()) {
            if !a.is_one() {
                let one_minus = a.one_minus().unwrap();
                for p in [3u64, 5, 7, 11] {
                    prop_assert_eq!(tau(p, a, one_minus), 1, "a = {}", a);
                }
            }
        }

        #[test]
        fn bilinear_in_first_slot(a in nonzero_rat(), a2 in nonzero_rat(), b in nonzero_rat()) {
            for p in [3u64, 5, 7] {
                let prod = a.checked_mul(&a2).unwrap();
                let lhs = tau(p, prod, b);
                let rhs = arith::mul_mod(tau(p, a, b), tau(p, a2, b), p);
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn negation_pairs_vanish(a in nonzero_rat()) {
            for p in [3u64, 5, 7, 11] {
                prop_assert_eq!(tau(p, a, a.neg()), 1);
            }
        }

        #[test]
        fn class_data_determines_symbol(a in nonzero_rat(), b in nonzero_rat()) {
            for p in [3u64, 5, 7, 23] {
                // Recompute from raw valuations, without the mod p - 1
                // pre-reduction the class representation applies.
                let (va, vb) = (a.valuation(p).unwrap(), b.valuation(p).unwrap());
                let (ua, ub) = (a.unit_mod(p).unwrap(), b.unit_mod(p).unwrap());
                let ord = (p - 1) as i64;
                let sign = if va.rem_euclid(2) * vb.rem_euclid(2) == 1 { p - 1 } else { 1 };
                let up = arith::pow_mod(ub, va.rem_euclid(ord) as u64, p);
                let down = arith::pow_mod(ua, (-vb).rem_euclid(ord) as u64, p);
                let direct = arith::mul_mod(arith::mul_mod(sign, up, p), down, p);
                prop_assert_eq!(tau(p, a, b), direct);
                // Class composition tracks multiplication of representatives.
                let (ca, cb) = (SymbolClass::of(p, &a).unwrap(), SymbolClass::of(p, &b).unwrap());
                let ab = a.checked_mul(&b).unwrap();
                prop_assert_eq!(SymbolClass::of(p, &ab).unwrap(), ca.compose(&cb, p));
            }
        }
    }
}
