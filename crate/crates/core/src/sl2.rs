//! Exact 2x2 matrices over Z[1/n]: determinant-1 arithmetic, congruence
//! subgroup membership, the diagonal conjugation that moves a factor of p
//! between the off-diagonal entries, and entrywise reduction mod m.

use std::fmt;

use crate::arith;
use crate::rat::Rat;
use crate::{Error, Result};

/// Determinant-1 matrix with entries in Z[1/n], stored row-major.
///
/// The context n is square-free and at least 2; every constructor verifies
/// that denominators only involve primes dividing n and that the determinant
/// is exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    n: u64,
    e: [Rat; 4],
}

fn strip_primes(mut v: i128, primes: &[u64]) -> i128 {
    for &p in primes {
        let p = p as i128;
        while v % p == 0 {
            v /= p;
        }
    }
    v
}

/// Whether x lies in the ideal of Z[1/n] generated by g, for g coprime to n.
/// The zero ideal (g = 0) contains only zero; g = 1 is the full ring.
fn in_ideal(g: u64, x: &Rat) -> Result<bool> {
    if g == 0 {
        return Ok(x.is_zero());
    }
    if g == 1 || x.is_zero() {
        return Ok(true);
    }
    for &(q, e) in arith::factorize(g)?.factors() {
        if x.valuation(q)? < e as i64 {
            return Ok(false);
        }
    }
    Ok(true)
}

impl Mat2 {
    pub fn new(n: u64, entries: [Rat; 4]) -> Result<Mat2> {
        if n < 2 {
            return Err(Error::NTooSmall(n));
        }
        if !arith::is_squarefree(n)? {
            return Err(Error::NotSquareFree(n));
        }
        let primes = arith::prime_divisors(n)?;
        for x in &entries {
            if strip_primes(x.denominator(), &primes) != 1 {
                return Err(Error::DenominatorNotLocal { value: x.to_string(), n });
            }
        }
        let det = det_of(&entries)?;
        if !det.is_one() {
            return Err(Error::DetNotOne { det: det.to_string() });
        }
        Ok(Mat2 { n, e: entries })
    }

    pub fn identity(n: u64) -> Result<Mat2> {
        Mat2::new(n, [Rat::ONE, Rat::ZERO, Rat::ZERO, Rat::ONE])
    }

    /// Parse the literal `"a b c d"`, four whitespace-separated rationals.
    pub fn parse(n: u64, s: &str) -> Result<Mat2> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(Error::BadMatrixLiteral(s.to_string()));
        }
        let mut e = [Rat::ZERO; 4];
        for (i, t) in toks.iter().enumerate() {
            e[i] = Rat::parse(t).map_err(|_| Error::BadMatrixLiteral(s.to_string()))?;
        }
        Mat2::new(n, e)
    }

    pub fn context(&self) -> u64 {
        self.n
    }

    pub fn entries(&self) -> &[Rat; 4] {
        &self.e
    }

    pub fn det(&self) -> Result<Rat> {
        det_of(&self.e)
    }

    pub fn mul(&self, other: &Mat2) -> Result<Mat2> {
        if self.n != other.n {
            return Err(Error::ContextMismatch(self.n, other.n));
        }
        let (x, y) = (&self.e, &other.e);
        let mut out = [Rat::ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                let t1 = x[2 * i].checked_mul(&y[j])?;
                let t2 = x[2 * i + 1].checked_mul(&y[2 + j])?;
                out[2 * i + j] = t1.checked_add(&t2)?;
            }
        }
        Mat2::new(self.n, out)
    }

    pub fn inverse(&self) -> Mat2 {
        let [a, b, c, d] = self.e;
        // (d, -b; -c, a) inverts any determinant-1 matrix; entries stay local.
        Mat2 { n: self.n, e: [d, b.neg(), c.neg(), a] }
    }

    fn check_prime(&self, p: u64) -> Result<()> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if self.n.is_multiple_of(p) {
            return Err(Error::PDividesN { p, n: self.n });
        }
        Ok(())
    }

    fn normalize_ideal(&self, mut g: u64) -> Result<u64> {
        if g == 0 {
            return Ok(0);
        }
        for p in arith::prime_divisors(self.n)? {
            while g.is_multiple_of(p) {
                g /= p;
            }
        }
        Ok(g)
    }

    pub fn is_in(&self, sub: &Subgroup) -> Result<bool> {
        let [a, b, c, d] = &self.e;
        let am1 = a.checked_sub(&Rat::ONE)?;
        let dm1 = d.checked_sub(&Rat::ONE)?;
        match *sub {
            Subgroup::Gamma0(p) => {
                self.check_prime(p)?;
                in_ideal(p, c)
            }
            Subgroup::Gamma1(p) => {
                self.check_prime(p)?;
                Ok(in_ideal(p, &am1)? && in_ideal(p, &dm1)? && in_ideal(p, c)?)
            }
            Subgroup::Gamma(p) => {
                self.check_prime(p)?;
                Ok(in_ideal(p, b)?
                    && in_ideal(p, c)?
                    && in_ideal(p, &am1)?
                    && in_ideal(p, &dm1)?)
            }
            Subgroup::GammaTilde { i1, i2 } => {
                let g1 = self.normalize_ideal(i1)?;
                let g2 = self.normalize_ideal(i2)?;
                let g12 = g1.checked_mul(g2).ok_or(Error::Overflow)?;
                Ok(in_ideal(g1, b)?
                    && in_ideal(g2, c)?
                    && in_ideal(g12, &am1)?
                    && in_ideal(g12, &dm1)?)
            }
        }
    }

    /// Conjugation by diag(p, 1): (a, b; c, d) -> (a, pb; c/p, d).
    /// Requires p | c, so the image keeps integral p-part in the lower left.
    pub fn partner_embed(&self, p: u64) -> Result<Mat2> {
        self.check_prime(p)?;
        let [a, b, c, d] = &self.e;
        if !in_ideal(p, c)? {
            return Err(Error::NotInGamma0 { c: c.to_string(), p });
        }
        let pr = Rat::integer(p as i128);
        let nb = b.checked_mul(&pr)?;
        let nc = c.checked_mul(&pr.invert()?)?;
        Mat2::new(self.n, [*a, nb, nc, *d])
    }

    /// Entrywise reduction mod m, inverting denominators; needs gcd(m, n) = 1.
    pub fn reduce_mod(&self, m: u64) -> Result<[u64; 4]> {
        if arith::gcd(m, self.n) != 1 {
            return Err(Error::NotCoprime { m, n: self.n });
        }
        let mut out = [0u64; 4];
        for (i, x) in self.e.iter().enumerate() {
            out[i] = x.residue_mod(m)?;
        }
        Ok(out)
    }
}

fn det_of(e: &[Rat; 4]) -> Result<Rat> {
    e[0].checked_mul(&e[3])?.checked_sub(&e[1].checked_mul(&e[2])?)
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.e[0], self.e[1], self.e[2], self.e[3])
    }
}

/// The standard generators: transvections, diagonal units, and the Weyl
/// rotation w = (0, 1; -1, 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elementary {
    E12(Rat),
    E21(Rat),
    D(Rat),
    W,
}

impl Elementary {
    pub fn mat(&self, n: u64) -> Result<Mat2> {
        match self {
            Elementary::E12(t) => Mat2::new(n, [Rat::ONE, *t, Rat::ZERO, Rat::ONE]),
            Elementary::E21(t) => Mat2::new(n, [Rat::ONE, Rat::ZERO, *t, Rat::ONE]),
            Elementary::D(u) => {
                if n < 2 {
                    return Err(Error::NTooSmall(n));
                }
                let primes = arith::prime_divisors(n)?;
                let unit = !u.is_zero()
                    && strip_primes(u.numerator(), &primes).unsigned_abs() == 1
                    && strip_primes(u.denominator(), &primes) == 1;
                if !unit {
                    return Err(Error::NotAUnit { value: u.to_string(), n });
                }
                Mat2::new(n, [*u, Rat::ZERO, Rat::ZERO, u.invert()?])
            }
            Elementary::W => {
                Mat2::new(n, [Rat::ZERO, Rat::ONE, Rat::integer(-1), Rat::ZERO])
            }
        }
    }
}

/// Congruence subgroups of SL2(Z[1/n]) at a prime p not dividing n, plus the
/// two-ideal family with independently chosen off-diagonal ideals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subgroup {
    /// p divides c.
    Gamma0(u64),
    /// p divides a - 1, d - 1, and c.
    Gamma1(u64),
    /// p divides all of b, c, a - 1, d - 1.
    Gamma(u64),
    /// b in (i1), c in (i2), a - 1 and d - 1 in (i1 * i2); generators are
    /// normalized by removing any factor dividing n.
    GammaTilde { i1: u64, i2: u64 },
}
