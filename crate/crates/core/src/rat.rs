//! Exact rational numbers over `i128`, always stored reduced with a positive
//! denominator. Arithmetic is checked: an overflow surfaces as
//! [`Error::Overflow`] instead of a wrapped value.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rat {
    num: i128,
    den: i128,
}

impl Rat {
    pub const ZERO: Rat = Rat { num: 0, den: 1 };
    pub const ONE: Rat = Rat { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Rat> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let g = num_integer::gcd(num, den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = num.checked_neg().ok_or(Error::Overflow)?;
            den = den.checked_neg().ok_or(Error::Overflow)?;
        }
        Ok(Rat { num, den })
    }

    pub fn integer(n: i128) -> Rat {
        Rat { num: n, den: 1 }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        self.num == 1 && self.den == 1
    }

    pub fn checked_add(&self, other: &Rat) -> Result<Rat> {
        let a = self.num.checked_mul(other.den).ok_or(Error::Overflow)?;
        let b = other.num.checked_mul(self.den).ok_or(Error::Overflow)?;
        Rat::new(a.checked_add(b).ok_or(Error::Overflow)?, self.den.checked_mul(other.den).ok_or(Error::Overflow)?)
    }

    pub fn checked_sub(&self, other: &Rat) -> Result<Rat> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Rat) -> Result<Rat> {
        // Cross-reduce first to keep intermediates small.
        let g1 = num_integer::gcd(self.num, other.den);
        let g2 = num_integer::gcd(other.num, self.den);
        let num = (self.num / g1).checked_mul(other.num / g2).ok_or(Error::Overflow)?;
        let den = (self.den / g2).checked_mul(other.den / g1).ok_or(Error::Overflow)?;
        Rat::new(num, den)
    }

    pub fn neg(&self) -> Rat {
        Rat { num: -self.num, den: self.den }
    }

    pub fn invert(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Rat::new(self.den, self.num)
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Result<Rat> {
        Rat::ONE.checked_sub(self)
    }

    /// The `p`-adic valuation `v_p(num) - v_p(den)`; `self` must be nonzero.
    pub fn valuation(&self, p: u64) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroInSymbol);
        }
        let p = p as i128;
        let count = |mut x: i128| -> i64 {
            let mut v = 0;
            while x % p == 0 {
                x /= p;
                v += 1;
            }
            v
        };
        Ok(count(self.num) - count(self.den))
    }

    /// The unit part at `p` reduced mod `p`: write `self = p^v * (a/b)` with
    /// `p` dividing neither `a` nor `b`; returns `a * b^-1 mod p` in `[1, p-1]`.
    pub fn unit_mod(&self, p: u64) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroInSymbol);
        }
        let strip = |mut x: i128| -> i128 {
            while x % p as i128 == 0 {
                x /= p as i128;
            }
            x
        };
        let a = strip(self.num).rem_euclid(p as i128) as u64;
        let b = strip(self.den).rem_euclid(p as i128) as u64;
        let b_inv = crate::arith::inv_mod(b, p).expect("stripped denominator is a unit mod p");
        Ok(crate::arith::mul_mod(a, b_inv, p))
    }

    /// Residue `self mod m` for `m` coprime to the denominator.
    pub fn residue_mod(&self, m: u64) -> Result<u64> {
        let den = self.den.rem_euclid(m as i128) as u64;
        let inv = crate::arith::inv_mod(den, m).ok_or(Error::DenominatorNotLocal { value: self.to_string(), n: m })?;
        let num = self.num.rem_euclid(m as i128) as u64;
        Ok(crate::arith::mul_mod(num, inv, m))
    }

    /// Absolute values of numerator and denominator, for range filters.
    pub fn height(&self) -> (u64, u64) {
        (self.num.unsigned_abs() as u64, self.den.unsigned_abs() as u64)
    }

    /// Parse `"num"` or `"num/den"`.
    pub fn parse(s: &str) -> Result<Rat> {
        let bad = || Error::BadRational(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            None => Ok(Rat::integer(t.parse::<i128>().map_err(|_| bad())?)),
            Some((a, b)) => {
                let num = a.trim().parse::<i128>().map_err(|_| bad())?;
                let den = b.trim().parse::<i128>().map_err(|_| bad())?;
                if den == 0 {
                    return Err(bad());
                }
                Rat::new(num, den)
            }
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        Rat::parse(s)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
