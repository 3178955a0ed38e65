//! Finitely generated abelian groups in canonical form.
//!
//! A group is stored as a free rank plus a multiset of primary cyclic factors
//! `Z/p^e`, sorted by `(p, e)`. Two groups are isomorphic exactly when their
//! canonical forms are equal, so `==` is the isomorphism test.
//!
//! Integer overflow anywhere in this module panics instead of wrapping:
//! overflow checks are enabled in every build profile, and the quantities that
//! can genuinely grow (torsion orders, census counts) use checked arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

/// A finitely generated abelian group `Z^r + Z/p1^e1 + Z/p2^e2 + ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinGenAb {
    free_rank: u64,
    /// Primary cyclic factors `(p, e)` with `p` prime, `e >= 1`, sorted.
    primary: Vec<(u64, u32)>,
}

impl FinGenAb {
    pub fn trivial() -> Self {
        FinGenAb { free_rank: 0, primary: Vec::new() }
    }

    pub fn free(rank: u64) -> Self {
        FinGenAb { free_rank: rank, primary: Vec::new() }
    }

    /// The cyclic group `Z/d`, `d >= 1`. `d = 1` is the trivial group.
    pub fn cyclic(d: u64) -> Self {
        Self::from_cyclic_orders(&[d], 0)
    }

    /// Direct sum of cyclic groups `Z/d` plus a free part. Orders must be
    /// positive; an order of 1 contributes nothing.
    pub fn from_cyclic_orders(orders: &[u64], free_rank: u64) -> Self {
        let mut primary = Vec::new();
        for &d in orders {
            assert!(d >= 1, "cyclic order must be positive");
            if d == 1 {
                continue;
            }
            let f = crate::arith::factorize(d).expect("d >= 2 factorizes");
            primary.extend_from_slice(f.factors());
        }
        primary.sort_unstable();
        FinGenAb { free_rank, primary }
    }

    /// The torsion subgroup, as a group of its own.
    pub fn torsion(&self) -> FinGenAb {
        FinGenAb { free_rank: 0, primary: self.primary.clone() }
    }

    pub fn direct_sum(&self, other: &FinGenAb) -> FinGenAb {
        let mut primary = self.primary.clone();
        primary.extend_from_slice(&other.primary);
        primary.sort_unstable();
        FinGenAb { free_rank: self.free_rank + other.free_rank, primary }
    }

    pub fn free_rank(&self) -> u64 {
        self.free_rank
    }

    /// Primary cyclic factors `(p, e)`, sorted by `(p, e)`.
    pub fn primary_factors(&self) -> &[(u64, u32)] {
        &self.primary
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.primary.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Result<u64> {
        let mut acc: u64 = 1;
        for &(p, e) in &self.primary {
            let pe = p.checked_pow(e).ok_or(Error::Overflow)?;
            acc = acc.checked_mul(pe).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }

    /// Invariant factors `d1 | d2 | ... | dk`, each `> 1`.
    pub fn invariant_factors(&self) -> Vec<u64> {
        // Exponents per prime, largest first; the i-th largest exponents
        // across all primes multiply into the i-th largest invariant factor.
        let mut per_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &(p, e) in &self.primary {
            per_prime.entry(p).or_default().push(e);
        }
        for exps in per_prime.values_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
        }
        let k = per_prime.values().map(|v| v.len()).max().unwrap_or(0);
        let mut factors = Vec::with_capacity(k);
        for i in 0..k {
            let mut d: u64 = 1;
            for (&p, exps) in &per_prime {
                if let Some(&e) = exps.get(i) {
                    d *= p.pow(e);
                }
            }
            factors.push(d);
        }
        factors.reverse();
        factors
    }

    /// Rebuild the canonical form from invariant factors; inverse of
    /// [`FinGenAb::invariant_factors`] together with the free rank.
    pub fn from_invariant_factors(factors: &[u64], free_rank: u64) -> Self {
        Self::from_cyclic_orders(factors, free_rank)
    }

    /// Count of primary factors at `p` with exponent `>= j` (`j >= 1`).
    fn factors_at_least(&self, p: u64, j: u32) -> u64 {
        self.primary.iter().filter(|&&(q, e)| q == p && e >= j).count() as u64
    }

    /// True iff a surjective homomorphism `self -> target` exists.
    ///
    /// A surjection exists exactly when `free_rank(target) <= free_rank(self)`
    /// and, for every prime `p` and every `j >= 1`, the count of target
    /// factors at `p` with exponent `>= j` is at most the matching count for
    /// `self` plus the spare free rank `free_rank(self) - free_rank(target)`.
    /// Free generators left over after covering the target's free part can
    /// each cover one cyclic factor of arbitrary order; everything else must
    /// be covered factor-by-factor.
    pub fn surjects_onto(&self, target: &FinGenAb) -> bool {
        if target.free_rank > self.free_rank {
            return false;
        }
        let spare = self.free_rank - target.free_rank;
        let mut primes: Vec<u64> = target.primary.iter().map(|&(p, _)| p).collect();
        primes.dedup();
        for p in primes {
            let max_e = target
                .primary
                .iter()
                .filter(|&&(q, _)| q == p)
                .map(|&(_, e)| e)
                .max()
                .unwrap_or(0);
            for j in 1..=max_e {
                if target.factors_at_least(p, j) > self.factors_at_least(p, j) + spare {
                    return false;
                }
            }
        }
        true
    }

    /// Multiplicities of element orders: `order -> count`, finite groups only.
    pub fn order_census(&self) -> Result<BTreeMap<u64, u64>> {
        if self.free_rank != 0 {
            return Err(Error::InfiniteCensus(self.free_rank as usize));
        }
        let mut census: BTreeMap<u64, u64> = BTreeMap::new();
        census.insert(1, 1);
        for &(p, e) in &self.primary {
            // Convolve with the census of Z/p^e: phi(p^j) elements of order p^j.
            let mut next: BTreeMap<u64, u64> = BTreeMap::new();
            for j in 0..=e {
                let pj = p.checked_pow(j).ok_or(Error::Overflow)?;
                let phi = if j == 0 { 1 } else { pj - pj / p };
                for (&o, &c) in &census {
                    let lcm = num_integer::lcm(o, pj);
                    let add = c.checked_mul(phi).ok_or(Error::Overflow)?;
                    let slot = next.entry(lcm).or_insert(0);
                    *slot = slot.checked_add(add).ok_or(Error::Overflow)?;
                }
            }
            census = next;
        }
        Ok(census)
    }

    /// Reconstruct a finite abelian group from its order census.
    ///
    /// For each prime `p`, the counts `N_j` of solutions of `x^(p^j) = 1`
    /// determine the exponent partition at `p`: `log_p N_j - log_p N_(j-1)`
    /// is the number of factors with exponent `>= j`. The result is validated
    /// by recomputing its census; a census no abelian group realizes is
    /// rejected.
    pub fn from_torsion_census(census: &BTreeMap<u64, u64>) -> Result<FinGenAb> {
        if census.get(&1) != Some(&1) {
            return Err(Error::BadCensus("identity count must be exactly 1".into()));
        }
        let mut total: u64 = 0;
        for (&o, &c) in census {
            if o == 0 || c == 0 {
                return Err(Error::BadCensus("orders and counts must be positive".into()));
            }
            total = total.checked_add(c).ok_or(Error::Overflow)?;
        }
        let mut primary = Vec::new();
        if total > 1 {
            for &(p, _) in crate::arith::factorize(total)?.factors() {
                // N_j = number of elements of order dividing p^j.
                let mut prev_log = 0u32;
                let mut counts_ge: Vec<u32> = Vec::new();
                let mut j = 1u32;
                loop {
                    let pj = p.checked_pow(j).ok_or(Error::Overflow)?;
                    let nj: u64 = census
                        .iter()
                        .filter(|(&o, _)| pj % o == 0)
                        .map(|(_, &c)| c)
                        .sum();
                    let log = exact_log(nj, p)
                        .ok_or_else(|| Error::BadCensus(format!("{nj} is not a power of {p}")))?;
                    if log < prev_log {
                        return Err(Error::BadCensus("solution counts must be monotone".into()));
                    }
                    if log == prev_log {
                        break;
                    }
                    counts_ge.push(log - prev_log);
                    prev_log = log;
                    j += 1;
                }
                // counts_ge[j-1] factors have exponent >= j.
                for j in 1..=counts_ge.len() {
                    let here = counts_ge[j - 1];
                    let next = counts_ge.get(j).copied().unwrap_or(0);
                    if next > here {
                        return Err(Error::BadCensus("exponent counts must be decreasing".into()));
                    }
                    for _ in 0..(here - next) {
                        primary.push((p, j as u32));
                    }
                }
            }
        }
        primary.sort_unstable();
        let group = FinGenAb { free_rank: 0, primary };
        if group.order_census()? != *census {
            return Err(Error::BadCensus("no abelian group realizes this census".into()));
        }
        Ok(group)
    }

    /// Cokernel `Z^c / (row span)` of an integer relation matrix with `c`
    /// columns, via Smith normal form.
    pub fn cokernel_of_relations(rows: &[Vec<i64>], columns: usize) -> Result<FinGenAb> {
        for row in rows {
            if row.len() != columns {
                return Err(Error::BadCensus(format!(
                    "relation row has {} entries, expected {columns}",
                    row.len()
                )));
            }
        }
        let mat: Vec<Vec<i128>> =
            rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let diag = smith_diagonal(mat, columns);
        let rank = diag.iter().filter(|&&d| d != 0).count();
        let orders: Vec<u64> = diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
        Ok(FinGenAb::from_cyclic_orders(&orders, (columns - rank) as u64))
    }
}

/// `log_p n` when `n` is an exact power of `p`.
fn exact_log(mut n: u64, p: u64) -> Option<u32> {
    let mut log = 0u32;
    while n > 1 {
        if !n.is_multiple_of(p) {
            return None;
        }
        n /= p;
        log += 1;
    }
    if n == 1 {
        Some(log)
    } else {
        None
    }
}

/// Diagonal of the Smith normal form of `mat` (r rows, `columns` columns).
///
/// Pivot selection is deterministic: the entry of smallest absolute value in
/// the active submatrix, ties broken in row-major order. Entries on the
/// returned diagonal are nonnegative and satisfy `d1 | d2 | ...`.
fn smith_diagonal(mut mat: Vec<Vec<i128>>, columns: usize) -> Vec<i128> {
    let rows = mat.len();
    let n = rows.min(columns);
    let mut k = 0usize;
    while k < n {
        let Some((pr, pc)) = smallest_pivot(&mat, k, columns) else {
            break;
        };
        mat.swap(k, pr);
        for row in mat.iter_mut() {
            row.swap(k, pc);
        }
        // Euclidean elimination: kill column k below the pivot and row k to
        // its right. Remainders shrink strictly, so this terminates.
        loop {
            let mut dirty = false;
            for i in (k + 1)..rows {
                if mat[i][k] != 0 {
                    let q = mat[i][k] / mat[k][k];
                    for j in k..columns {
                        let sub = q * mat[k][j];
                        mat[i][j] -= sub;
                    }
                    if mat[i][k] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in (k + 1)..columns {
                if mat[k][j] != 0 {
                    let q = mat[k][j] / mat[k][k];
                    for i in k..rows {
                        let sub = q * mat[i][k];
                        mat[i][j] -= sub;
                    }
                    if mat[k][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // A nonzero remainder is now strictly smaller than the pivot;
                // re-select and continue.
                let (pr, pc) = smallest_pivot(&mat, k, columns).expect("dirty implies nonzero");
                mat.swap(k, pr);
                for row in mat.iter_mut() {
                    row.swap(k, pc);
                }
                continue;
            }
            // Column and row are clear. Enforce divisibility of the rest of
            // the submatrix by the pivot before moving on.
            let pivot = mat[k][k];
            let mut fixed = true;
            'scan: for i in (k + 1)..rows {
                for j in (k + 1)..columns {
                    if mat[i][j] % pivot != 0 {
                        for j2 in k..columns {
                            let add = mat[i][j2];
                            mat[k][j2] += add;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if mat[k][k] < 0 {
            for j in k..columns {
                mat[k][j] = -mat[k][j];
            }
        }
        k += 1;
    }
    (0..n).map(|i| mat[i][i].abs()).collect()
}

fn smallest_pivot(mat: &[Vec<i128>], k: usize, columns: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for (i, row) in mat.iter().enumerate().skip(k) {
        for j in k..columns {
            let v = row[j].abs();
            if v != 0 && best.is_none_or(|(bv, _, _)| v < bv) {
                best = Some((v, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

impl fmt::Display for FinGenAb {
    /// `Z^r + Z/d1 + Z/d2 + ...` over invariant factors; `0` when trivial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in self.invariant_factors() {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
