//! Brute-force oracles, compiled for tests only. Everything here recomputes
//! answers by direct enumeration, deliberately sharing no code path with the
//! implementations it checks.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::arith;

/// Order census of `Z/d1 x Z/d2 x ...` by enumerating every tuple.
pub fn census_of_cyclic_product(orders: &[u64]) -> BTreeMap<u64, u64> {
    let total: u64 = orders.iter().product();
    let mut census: BTreeMap<u64, u64> = BTreeMap::new();
    for mut idx in 0..total {
        let mut order = 1u64;
        for &d in orders {
            let x = idx % d;
            idx /= d;
            order = num_integer::lcm(order, d / arith::gcd(x, d));
        }
        *census.entry(order).or_insert(0) += 1;
    }
    census
}

/// All finite abelian groups of order `<= max`, each as a sorted list of
/// prime-power cyclic orders. Includes the trivial group as the empty list.
pub fn abelian_groups_up_to(max: u64) -> Vec<Vec<u64>> {
    let mut groups: Vec<Vec<u64>> = vec![Vec::new()];
    for p in arith::primes_below(max + 1) {
        let mut extended = Vec::new();
        for g in &groups {
            let prod: u64 = g.iter().product();
            let mut budget = 0u32;
            while prod * p.pow(budget + 1) <= max {
                budget += 1;
            }
            for part in partitions_with_sum_at_most(budget) {
                let mut h = g.clone();
                h.extend(part.iter().map(|&e| p.pow(e)));
                h.sort_unstable();
                extended.push(h);
            }
        }
        groups = extended;
    }
    groups.sort();
    groups
}

/// Nonincreasing partitions with sum `<= max_sum`, including the empty one.
fn partitions_with_sum_at_most(max_sum: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        for part in (1..=max_part.min(remaining)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_sum, max_sum, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive surjection search onto a fixed finite abelian target of order
/// at most 64. Explores every assignment of generator images, memoizing on
/// the subgroup generated so far.
pub struct SurjectionOracle {
    size: usize,
    full: u64,
    add: Vec<u8>,
    elem_order: Vec<u64>,
    join_cache: HashMap<(u64, u8), u64>,
}

impl SurjectionOracle {
    pub fn new(target_orders: &[u64]) -> Self {
        let size_u64: u64 = target_orders.iter().product();
        assert!((1..=64).contains(&size_u64), "target order must be in 1..=64");
        let size = size_u64 as usize;
        let decode = |mut idx: usize| -> Vec<u64> {
            target_orders
                .iter()
                .map(|&d| {
                    let x = idx as u64 % d;
                    idx /= d as usize;
                    x
                })
                .collect()
        };
        let encode = |v: &[u64]| -> usize {
            let mut idx = 0usize;
            for (i, &d) in target_orders.iter().enumerate().rev() {
                idx = idx * d as usize + v[i] as usize;
            }
            idx
        };
        let mut add = vec![0u8; size * size];
        let mut elem_order = vec![1u64; size];
        for a in 0..size {
            let va = decode(a);
            elem_order[a] = va
                .iter()
                .zip(target_orders)
                .map(|(&x, &d)| d / arith::gcd(x, d))
                .fold(1, num_integer::lcm);
            for b in 0..size {
                let vb = decode(b);
                let sum: Vec<u64> = va
                    .iter()
                    .zip(&vb)
                    .zip(target_orders)
                    .map(|((&x, &y), &d)| (x + y) % d)
                    .collect();
                add[a * size + b] = encode(&sum) as u8;
            }
        }
        let full = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
        SurjectionOracle { size, full, add, elem_order, join_cache: HashMap::new() }
    }

    /// Subgroup generated by the subgroup `mask` and the element `x`.
    fn join(&mut self, mask: u64, x: u8) -> u64 {
        if mask & (1u64 << x) != 0 {
            return mask;
        }
        if let Some(&m) = self.join_cache.get(&(mask, x)) {
            return m;
        }
        let mut new_mask = mask;
        let mut stack = vec![x];
        while let Some(e) = stack.pop() {
            if new_mask & (1u64 << e) != 0 {
                continue;
            }
            new_mask |= 1u64 << e;
            for f in 0..self.size as u8 {
                if new_mask & (1u64 << f) != 0 {
                    stack.push(self.add[e as usize * self.size + f as usize]);
                }
            }
        }
        self.join_cache.insert((mask, x), new_mask);
        new_mask
    }

    /// Does `Z^free + (+ Z/d over source_orders)` surject onto the target?
    pub fn from(&mut self, source_orders: &[u64], free: u64) -> bool {
        // Free generators may land anywhere; a torsion generator of order d
        // must land on an element whose order divides d. Large orders first
        // reaches the full group sooner.
        let mut caps: Vec<Option<u64>> = vec![None; free as usize];
        let mut torsion: Vec<u64> = source_orders.to_vec();
        torsion.sort_unstable_by(|a, b| b.cmp(a));
        caps.extend(torsion.into_iter().map(Some));
        let identity_mask = 1u64 << 0;
        let mut failed: HashSet<(u64, usize)> = HashSet::new();
        self.dfs(identity_mask, &caps, 0, &mut failed)
    }

    fn dfs(
        &mut self,
        mask: u64,
        caps: &[Option<u64>],
        idx: usize,
        failed: &mut HashSet<(u64, usize)>,
    ) -> bool {
        if mask == self.full {
            return true;
        }
        if idx == caps.len() {
            return false;
        }
        if failed.contains(&(mask, idx)) {
            return false;
        }
        // Even if every remaining generator contributed its full capacity,
        // could the subgroup reach the whole target?
        let mut reach = mask.count_ones() as u64;
        for cap in &caps[idx..] {
            let factor = cap.unwrap_or(self.size as u64);
            reach = reach.saturating_mul(factor);
        }
        if reach < self.size as u64 {
            failed.insert((mask, idx));
            return false;
        }
        let mut seen_children: HashSet<u64> = HashSet::new();
        for x in 0..self.size as u8 {
            if let Some(d) = caps[idx] {
                if d % self.elem_order[x as usize] != 0 {
                    continue;
                }
            }
            let child = self.join(mask, x);
            if seen_children.insert(child) && self.dfs(child, caps, idx + 1, failed) {
                return true;
            }
        }
        failed.insert((mask, idx));
        false
    }
}

/// One-shot convenience wrapper around [`SurjectionOracle`].
pub fn surjection_exists(source_orders: &[u64], free: u64, target_orders: &[u64]) -> bool {
    SurjectionOracle::new(target_orders).from(source_orders, free)
}

/// Rank of an integer matrix over the rationals, by fraction-free elimination.
fn rank_over_q(mat: &[Vec<i64>], cols: usize) -> usize {
    let mut m: Vec<Vec<i128>> = mat.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = m.len();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let lead = m[rank][col];
        for i in (rank + 1)..rows {
            let factor = m[i][col];
            if factor != 0 {
                for j in col..cols {
                    m[i][j] = m[i][j] * lead - m[rank][j] * factor;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Free rank of `Z^cols / rowspan(mat)`.
pub fn free_rank_of_quotient(mat: &[Vec<i64>], cols: usize) -> u64 {
    (cols - rank_over_q(mat, cols)) as u64
}

/// A modulus `L` annihilating the torsion of `Z^cols / rowspan(mat)`:
/// the gcd of all rank-sized minors. Returns `None` if enumerating
/// `(Z/L)^cols` would exceed `budget` elements.
pub fn enumeration_modulus(mat: &[Vec<i64>], cols: usize, budget: u64) -> Option<u64> {
    let rank = rank_over_q(mat, cols);
    if rank == 0 {
        return Some(1);
    }
    let mut g: u64 = 0;
    for row_set in subsets_of_size(mat.len(), rank) {
        for col_set in subsets_of_size(cols, rank) {
            let det = minor_det(mat, &row_set, &col_set);
            g = arith::gcd(g, det.unsigned_abs() as u64);
        }
    }
    assert!(g > 0, "a matrix of rank r has a nonzero r-minor");
    let mut total: u64 = 1;
    for _ in 0..cols {
        total = total.checked_mul(g)?;
        if total > budget {
            return None;
        }
    }
    Some(g)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in start..n {
            prefix.push(i);
            rec(i + 1, n, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn minor_det(mat: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> i128 {
    let k = rows.len();
    if k == 1 {
        return mat[rows[0]][cols[0]] as i128;
    }
    let mut det = 0i128;
    let mut sign = 1i128;
    for (i, &r) in rows.iter().enumerate() {
        let rest: Vec<usize> = rows.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        det += sign * mat[r][cols[0]] as i128 * minor_det(mat, &rest, &cols[1..]);
        sign = -sign;
    }
    det
}

/// Order census of `(Z/modulus)^cols / span(rows mod modulus)` by full
/// enumeration: close the row images under addition, label cosets, and
/// measure each coset's order directly.
pub fn cokernel_census_mod(mat: &[Vec<i64>], cols: usize, modulus: u64) -> BTreeMap<u64, u64> {
    let m = modulus as usize;
    let total = m.pow(cols as u32);
    let encode = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &x| acc * m + x) };
    let decode = |mut idx: usize| -> Vec<usize> {
        (0..cols)
            .map(|_| {
                let x = idx % m;
                idx /= m;
                x
            })
            .collect()
    };
    let vec_add = |a: &[usize], b: &[usize]| -> Vec<usize> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % m).collect()
    };

    // Subgroup generated by the row images.
    let gens: Vec<Vec<usize>> = mat
        .iter()
        .map(|row| row.iter().map(|&x| x.rem_euclid(modulus as i64) as usize).collect())
        .collect();
    let mut in_span = vec![false; total];
    in_span[0] = true;
    let mut span: Vec<Vec<usize>> = vec![vec![0; cols]];
    let mut stack = vec![vec![0usize; cols]];
    while let Some(v) = stack.pop() {
        for g in &gens {
            let w = vec_add(&v, g);
            let wi = encode(&w);
            if !in_span[wi] {
                in_span[wi] = true;
                span.push(w.clone());
                stack.push(w);
            }
        }
    }

    // Label cosets and take each representative's order in the quotient.
    let mut label = vec![usize::MAX; total];
    let mut census: BTreeMap<u64, u64> = BTreeMap::new();
    let mut next_label = 0usize;
    for v in 0..total {
        if label[v] != usize::MAX {
            continue;
        }
        let rep = decode(v);
        for s in &span {
            label[encode(&vec_add(&rep, s))] = next_label;
        }
        next_label += 1;
        let mut acc = rep.clone();
        let mut order = 1u64;
        while !in_span[encode(&acc)] {
            acc = vec_add(&acc, &rep);
            order += 1;
        }
        *census.entry(order).or_insert(0) += 1;
    }
    census
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_census_direct() {
        let c12 = census_of_cyclic_product(&[12]);
        assert_eq!(c12, [(1, 1), (2, 1), (3, 2), (4, 2), (6, 2), (12, 4)].into());
    }

    #[test]
    fn abelian_group_counts() {
        // One partition-product count per order: 1,1,1,2,1,1,1,3,2,...
        assert_eq!(abelian_groups_up_to(1).len(), 1);
        assert_eq!(abelian_groups_up_to(4).len(), 5);
        assert_eq!(abelian_groups_up_to(8).len(), 11);
        assert_eq!(abelian_groups_up_to(16).len(), 25);
    }

    #[test]
    fn surjection_oracle_basics() {
        // Z/4 -> Z/2 yes; Z/2 + Z/2 -> Z/4 no; Z/6 -> Z/6 yes.
        assert!(surjection_exists(&[4], 0, &[2]));
        assert!(!surjection_exists(&[2, 2], 0, &[4]));
        assert!(surjection_exists(&[6], 0, &[6]));
        assert!(surjection_exists(&[2, 3], 0, &[6]));
        assert!(!surjection_exists(&[8], 0, &[2, 2]));
        assert!(surjection_exists(&[], 2, &[4, 5]));
        assert!(!surjection_exists(&[], 1, &[2, 2]));
        assert!(surjection_exists(&[3], 0, &[]));
    }

    #[test]
    fn rank_and_modulus() {
        assert_eq!(free_rank_of_quotient(&[vec![2, 4], vec![0, 4]], 2), 0);
        assert_eq!(free_rank_of_quotient(&[vec![2, 4]], 2), 1);
        assert_eq!(free_rank_of_quotient(&[], 3), 3);
        assert_eq!(enumeration_modulus(&[vec![2, 4], vec![0, 4]], 2, 200_000), Some(8));
        assert_eq!(enumeration_modulus(&[], 2, 200_000), Some(1));
    }
}
