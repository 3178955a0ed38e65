//! Brute-force finite matrix groups: SL2(Z/m) and Borel subgroups over F_p,
//! enumerated in full, with abelianization computed by commutator-subgroup
//! closure and an order census of the quotient. The closed-form homology
//! answers elsewhere in the crate are checked against these enumerations.

use std::collections::BTreeMap;

use crate::abelian::FinGenAb;
use crate::arith;
use crate::parallel;
use crate::{Error, Result};

pub const DEFAULT_MODULUS_BOUND: u64 = 32;

/// All-pairs commutator enumeration is exact but quadratic; above this order
/// the abelianization switches to generator commutators plus normal closure.
const ALL_PAIRS_LIMIT: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorelSide {
    Upper,
    Lower,
}

/// A fully enumerated group of 2x2 matrices over Z/m.
///
/// Elements are stored in lexicographic order of their entry arrays; a packed
/// m^4 table maps an entry array back to its index, so multiplication lookups
/// are O(1).
#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup {
    modulus: u64,
    bound: u64,
    elems: Vec<[u64; 4]>,
    lookup: Vec<u32>,
}

/// Entrywise 2x2 product mod m.
pub fn mat_mul(x: &[u64; 4], y: &[u64; 4], m: u64) -> [u64; 4] {
    let mm = |a: u64, b: u64| arith::mul_mod(a, b, m);
    [
        (mm(x[0], y[0]) + mm(x[1], y[2])) % m,
        (mm(x[0], y[1]) + mm(x[1], y[3])) % m,
        (mm(x[2], y[0]) + mm(x[3], y[2])) % m,
        (mm(x[2], y[1]) + mm(x[3], y[3])) % m,
    ]
}

/// Inverse of a determinant-1 matrix mod m: (d, -b; -c, a).
pub fn mat_inv(x: &[u64; 4], m: u64) -> [u64; 4] {
    [x[3], (m - x[1] % m) % m, (m - x[2] % m) % m, x[0]]
}

fn norm_mat(e: &[u64; 4], m: u64) -> [u64; 4] {
    [e[0] % m, e[1] % m, e[2] % m, e[3] % m]
}

fn pack(e: &[u64; 4], m: u64) -> usize {
    ((((e[0] * m) + e[1]) * m + e[2]) * m + e[3]) as usize
}

fn show_mat(e: &[u64; 4]) -> String {
    format!("({}, {}; {}, {})", e[0], e[1], e[2], e[3])
}

struct Closure {
    members: Vec<u32>,
    mask: Vec<bool>,
}

impl FiniteMatrixGroup {
    pub fn sl2(m: u64) -> Result<FiniteMatrixGroup> {
        Self::sl2_bounded(m, DEFAULT_MODULUS_BOUND)
    }

    /// Enumerate all of SL2(Z/m) by solving ad = 1 + bc for d, one residue
    /// class at a time.
    pub fn sl2_bounded(m: u64, bound: u64) -> Result<FiniteMatrixGroup> {
        if m < 2 {
            return Err(Error::NTooSmall(m));
        }
        if m > bound {
            return Err(Error::BoundExceeded { m, bound });
        }
        let elems = parallel::flat_map_range(0, m - 1, |a| {
            // a*d = r (mod m) is solvable iff gcd(a, m) | r, with the
            // solutions forming one class mod m/gcd.
            let g = arith::gcd(a, m);
            let step = m / g;
            let ainv = arith::inv_mod((a / g) % step.max(1), step)
                .expect("a/g is a unit mod m/g");
            let mut out = Vec::new();
            for b in 0..m {
                for c in 0..m {
                    let r = (1 + b * c) % m;
                    if r.is_multiple_of(g) {
                        let mut d = arith::mul_mod(ainv, r / g, step);
                        for _ in 0..g {
                            out.push([a, b, c, d]);
                            d += step;
                        }
                    }
                }
            }
            out
        });
        Ok(Self::build(m, bound, elems))
    }

    pub fn borel(p: u64, side: BorelSide) -> Result<FiniteMatrixGroup> {
        Self::borel_bounded(p, side, DEFAULT_MODULUS_BOUND)
    }

    /// The triangular subgroup of SL2(F_p): (a, b; 0, 1/a) or its transpose.
    pub fn borel_bounded(p: u64, side: BorelSide, bound: u64) -> Result<FiniteMatrixGroup> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > bound {
            return Err(Error::BoundExceeded { m: p, bound });
        }
        let mut elems = Vec::with_capacity((p * (p - 1)) as usize);
        for a in 1..p {
            let ainv = arith::inv_mod(a, p).expect("a is a unit mod p");
            match side {
                BorelSide::Upper => {
                    for b in 0..p {
                        elems.push([a, b, 0, ainv]);
                    }
                }
                BorelSide::Lower => {
                    for c in 0..p {
                        elems.push([a, 0, c, ainv]);
                    }
                }
            }
        }
        Ok(Self::build(p, bound, elems))
    }

    fn build(modulus: u64, bound: u64, elems: Vec<[u64; 4]>) -> FiniteMatrixGroup {
        let mut lookup = vec![u32::MAX; (modulus * modulus * modulus * modulus) as usize];
        for (i, e) in elems.iter().enumerate() {
            lookup[pack(e, modulus)] = i as u32;
        }
        FiniteMatrixGroup { modulus, bound, elems, lookup }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.elems.len() as u64
    }

    pub fn elements(&self) -> &[[u64; 4]] {
        &self.elems
    }

    pub fn contains(&self, e: &[u64; 4]) -> bool {
        self.index_of(e).is_some()
    }

    pub fn index_of(&self, e: &[u64; 4]) -> Option<u32> {
        let idx = self.lookup[pack(&norm_mat(e, self.modulus), self.modulus)];
        (idx != u32::MAX).then_some(idx)
    }

    fn id_index(&self) -> u32 {
        self.index_of(&[1, 0, 0, 1]).expect("group contains the identity")
    }

    /// Whether the subgroup generated by `gens` is the whole group.
    pub fn generates(&self, gens: &[[u64; 4]]) -> Result<bool> {
        let mut idxs = Vec::new();
        for g in gens {
            match self.index_of(g) {
                Some(i) => idxs.push(i),
                None => {
                    return Err(Error::NotInGroup {
                        matrix: show_mat(g),
                        modulus: self.modulus,
                    })
                }
            }
        }
        Ok(self.subgroup_closure(&idxs).members.len() == self.elems.len())
    }

    /// Quotient by the commutator subgroup, decomposed via its order census.
    pub fn abelianization(&self) -> Result<FinGenAb> {
        let order = self.order();
        let cap = self.bound.saturating_pow(3);
        if order > cap {
            return Err(Error::GroupTooLarge { order, bound: cap });
        }
        let (mut seeds, gens) = if order <= ALL_PAIRS_LIMIT {
            (self.all_commutators(), Vec::new())
        } else {
            let gens = self.greedy_generators();
            (self.pairwise_commutators(&gens), gens)
        };
        let mut k = self.subgroup_closure(&seeds);
        // With generator commutators only, grow to the normal closure: the
        // subgroup is normal once the conjugates of its seeds stay inside.
        loop {
            let mut added = false;
            for &g in &gens {
                let gm = self.elems[g as usize];
                let gm_inv = mat_inv(&gm, self.modulus);
                for si in 0..seeds.len() {
                    let s = self.elems[seeds[si] as usize];
                    let conj = mat_mul(&mat_mul(&gm_inv, &s, self.modulus), &gm, self.modulus);
                    let idx = self.index_of(&conj).expect("group is closed");
                    if !k.mask[idx as usize] {
                        seeds.push(idx);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
            seeds.sort_unstable();
            seeds.dedup();
            k = self.subgroup_closure(&seeds);
        }
        let census = self.coset_census(&k);
        FinGenAb::from_torsion_census(&census)
    }

    fn all_commutators(&self) -> Vec<u32> {
        let n = self.elems.len();
        let m = self.modulus;
        let mut seeds: Vec<u32> = parallel::flat_map_range(0, n as u64 - 1, |i| {
            let gi = self.elems[i as usize];
            let gi_inv = mat_inv(&gi, m);
            self.elems
                .iter()
                .map(|gj| {
                    let gj_inv = mat_inv(gj, m);
                    let left = mat_mul(&gi_inv, &gj_inv, m);
                    let right = mat_mul(&gi, gj, m);
                    self.index_of(&mat_mul(&left, &right, m)).expect("group is closed")
                })
                .collect()
        });
        seeds.sort_unstable();
        seeds.dedup();
        seeds
    }

    fn pairwise_commutators(&self, gens: &[u32]) -> Vec<u32> {
        let m = self.modulus;
        let mut seeds = Vec::new();
        for &i in gens {
            let gi = self.elems[i as usize];
            let gi_inv = mat_inv(&gi, m);
            for &j in gens {
                let gj = self.elems[j as usize];
                let gj_inv = mat_inv(&gj, m);
                let left = mat_mul(&gi_inv, &gj_inv, m);
                let right = mat_mul(&gi, &gj, m);
                seeds.push(self.index_of(&mat_mul(&left, &right, m)).expect("group is closed"));
            }
        }
        seeds.sort_unstable();
        seeds.dedup();
        seeds
    }

    /// A small generating set, grown by scanning elements in storage order and
    /// keeping each one that enlarges the generated subgroup.
    fn greedy_generators(&self) -> Vec<u32> {
        let n = self.elems.len();
        let mut gens: Vec<u32> = Vec::new();
        let mut closed = self.subgroup_closure(&gens);
        for i in 0..n as u32 {
            if closed.members.len() == n {
                break;
            }
            if !closed.mask[i as usize] {
                gens.push(i);
                closed = self.subgroup_closure(&gens);
            }
        }
        gens
    }

    /// Subgroup generated by the given elements: monoid closure suffices in a
    /// finite group, since each generator's inverse is one of its powers.
    fn subgroup_closure(&self, seeds: &[u32]) -> Closure {
        let m = self.modulus;
        let mut mask = vec![false; self.elems.len()];
        let id = self.id_index();
        mask[id as usize] = true;
        let mut members = vec![id];
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            let xm = self.elems[x as usize];
            for &s in seeds {
                let prod = mat_mul(&xm, &self.elems[s as usize], m);
                let idx = self.index_of(&prod).expect("group is closed");
                if !mask[idx as usize] {
                    mask[idx as usize] = true;
                    members.push(idx);
                    queue.push(idx);
                }
            }
        }
        members.sort_unstable();
        Closure { members, mask }
    }

    /// Order census of G/K: label the cosets, then find each coset's order in
    /// the quotient by powering a representative until it lands in K.
    fn coset_census(&self, k: &Closure) -> BTreeMap<u64, u64> {
        let m = self.modulus;
        let n = self.elems.len();
        let mut label = vec![u32::MAX; n];
        let mut reps: Vec<u32> = Vec::new();
        for i in 0..n as u32 {
            if label[i as usize] == u32::MAX {
                let coset_id = reps.len() as u32;
                reps.push(i);
                let xm = self.elems[i as usize];
                for &kk in &k.members {
                    let prod = mat_mul(&xm, &self.elems[kk as usize], m);
                    let idx = self.index_of(&prod).expect("group is closed");
                    label[idx as usize] = coset_id;
                }
            }
        }
        let id_label = label[self.id_index() as usize];
        let mut census: BTreeMap<u64, u64> = BTreeMap::new();
        for &rep in &reps {
            let rm = self.elems[rep as usize];
            let mut pow = rm;
            let mut t = 1u64;
            while label[self.index_of(&pow).expect("group is closed") as usize] != id_label {
                pow = mat_mul(&pow, &rm, m);
                t += 1;
            }
            *census.entry(t).or_insert(0) += 1;
        }
        census
    }

    #[cfg(test)]
    fn is_closed(&self) -> bool {
        self.elems.iter().all(|x| {
            self.elems
                .iter()
                .all(|y| self.contains(&mat_mul(x, y, self.modulus)))
        })
    }
}

/// |SL2(Z/m)| as the exact integer prod (p^2 - 1) p^(3e - 2) over the prime
/// powers p^e of m; this is m^3 prod (1 - 1/p^2).
pub fn sl2_order_formula(m: u64) -> Result<u128> {
    let f = arith::factorize(m)?;
    let mut acc: u128 = 1;
    for &(p, e) in f.factors() {
        let p = p as u128;
        let pw = p.checked_pow(3 * e - 2).ok_or(Error::Overflow)?;
        let term = (p * p - 1).checked_mul(pw).ok_or(Error::Overflow)?;
        acc = acc.checked_mul(term).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

/// |B(F_p)| = p(p-1).
pub fn borel_order_formula(p: u64) -> u64 {
    p * (p - 1)
}

/// Coinvariants of F_p under the square action a.x = a^2 x of the units:
/// Z/p modulo the subgroup generated by all (a^2 - 1)x.
pub fn fp_coinvariants(p: u64) -> Result<FinGenAb> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut g = p;
    'outer: for a in 1..p {
        let am1 = (arith::mul_mod(a, a, p) + p - 1) % p;
        for x in 0..p {
            g = arith::gcd(g, arith::mul_mod(am1, x, p));
            if g == 1 {
                break 'outer;
            }
        }
    }
    Ok(FinGenAb::cyclic(g))
}

/// Order of the kernel of SL2(Z/p^k) -> SL2(Z/p), by enumeration.
pub fn reduction_kernel_order(p: u64, k: u32) -> Result<u64> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = p.checked_pow(k).ok_or(Error::Overflow)?;
    let g = FiniteMatrixGroup::sl2(m)?;
    let count = g
        .elements()
        .iter()
        .filter(|e| e[0] % p == 1 && e[1] % p == 0 && e[2] % p == 0 && e[3] % p == 1)
        .count();
    Ok(count as u64)
}

/// Whether the reduction kernel has the expected order p^(3(k-1)).
pub fn kernel_index_check(p: u64, k: u32) -> Result<bool> {
    if k < 2 {
        return Err(Error::NTooSmall(k as u64));
    }
    let expected = (p as u128).checked_pow(3 * (k - 1)).ok_or(Error::Overflow)?;
    Ok(reduction_kernel_order(p, k)? as u128 == expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_formula() {
        assert_eq!(FiniteMatrixGroup::sl2(2).unwrap().order(), 6);
        assert_eq!(FiniteMatrixGroup::sl2(4).unwrap().order(), 48);
        assert_eq!(FiniteMatrixGroup::sl2(6).unwrap().order(), 144);
        for m in 2..=16 {
            let g = FiniteMatrixGroup::sl2(m).unwrap();
            assert_eq!(g.order() as u128, sl2_order_formula(m).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn enumeration_is_closed_and_sorted() {
        for m in [2, 3, 4, 5, 6] {
            let g = FiniteMatrixGroup::sl2(m).unwrap();
            assert!(g.is_closed(), "m = {m}");
            let mut sorted = g.elements().to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, g.elements());
        }
        let b = FiniteMatrixGroup::borel(7, BorelSide::Upper).unwrap();
        assert!(b.is_closed());
    }

    #[test]
    fn borel_orders() {
        assert_eq!(FiniteMatrixGroup::borel(2, BorelSide::Upper).unwrap().order(), 2);
        assert_eq!(FiniteMatrixGroup::borel(3, BorelSide::Upper).unwrap().order(), 6);
        assert_eq!(FiniteMatrixGroup::borel(5, BorelSide::Lower).unwrap().order(), 20);
        for p in [2u64, 3, 5, 7, 11, 13] {
            let b = FiniteMatrixGroup::borel(p, BorelSide::Upper).unwrap();
            assert_eq!(b.order(), borel_order_formula(p));
            let g = FiniteMatrixGroup::sl2(p).unwrap();
            assert_eq!(g.order() / b.order(), p + 1, "index at p = {p}");
        }
    }

    #[test]
    fn sl2_abelianizations() {
        let ab = |m: u64| FiniteMatrixGroup::sl2(m).unwrap().abelianization().unwrap();
        assert_eq!(ab(2), FinGenAb::cyclic(2));
        assert_eq!(ab(3), FinGenAb::cyclic(3));
        assert_eq!(ab(4), FinGenAb::cyclic(4));
        assert_eq!(ab(5), FinGenAb::trivial());
        assert_eq!(ab(6), FinGenAb::cyclic(6));
        assert_eq!(ab(8), FinGenAb::cyclic(4));
        assert_eq!(ab(9), FinGenAb::cyclic(3));
    }

    #[test]
    fn borel_abelianizations() {
        let ab = |p: u64, s: BorelSide| {
            FiniteMatrixGroup::borel(p, s).unwrap().abelianization().unwrap()
        };
        assert_eq!(ab(2, BorelSide::Upper), FinGenAb::cyclic(2));
        assert_eq!(ab(3, BorelSide::Upper), FinGenAb::cyclic(6));
        assert_eq!(ab(5, BorelSide::Upper), FinGenAb::cyclic(4));
        for p in [2u64, 3, 5, 7] {
            assert_eq!(ab(p, BorelSide::Upper), ab(p, BorelSide::Lower), "p = {p}");
        }
    }

    #[test]
    fn square_action_coinvariants() {
        assert_eq!(fp_coinvariants(2).unwrap(), FinGenAb::cyclic(2));
        assert_eq!(fp_coinvariants(3).unwrap(), FinGenAb::cyclic(3));
        for p in [5u64, 7, 11, 13, 23] {
            assert!(fp_coinvariants(p).unwrap().is_trivial(), "p = {p}");
        }
        assert!(matches!(fp_coinvariants(6), Err(Error::NotPrime(6))));
    }

    #[test]
    fn generation_checks() {
        let g5 = FiniteMatrixGroup::sl2(5).unwrap();
        assert!(g5.generates(&[[1, 1, 0, 1], [1, 0, 1, 1]]).unwrap());
        assert!(!g5.generates(&[[1, 0, 0, 1]]).unwrap());
        assert!(matches!(
            g5.generates(&[[1, 1, 1, 1]]),
            Err(Error::NotInGroup { .. })
        ));

        // Images of the standard transvection pair for n = 6 generate mod 7.
        let e21 = crate::sl2::Elementary::E21(crate::rat::Rat::ONE)
            .mat(6)
            .unwrap()
            .reduce_mod(7)
            .unwrap();
        let e12 = crate::sl2::Elementary::E12(crate::rat::Rat::new(-1, 6).unwrap())
            .mat(6)
            .unwrap()
            .reduce_mod(7)
            .unwrap();
        let g7 = FiniteMatrixGroup::sl2(7).unwrap();
        assert!(g7.generates(&[e21, e12]).unwrap());
    }

    #[test]
    fn reduction_kernels() {
        assert_eq!(reduction_kernel_order(2, 2).unwrap(), 8);
        assert_eq!(reduction_kernel_order(3, 2).unwrap(), 27);
        assert_eq!(reduction_kernel_order(2, 3).unwrap(), 64);
        assert!(kernel_index_check(2, 2).unwrap());
        assert!(kernel_index_check(3, 2).unwrap());
        assert!(kernel_index_check(2, 3).unwrap());
        assert!(kernel_index_check(2, 1).is_err());
    }

    #[test]
    fn bounds_and_gates() {
        assert!(matches!(
            FiniteMatrixGroup::sl2(33),
            Err(Error::BoundExceeded { m: 33, bound: 32 })
        ));
        assert!(matches!(
            FiniteMatrixGroup::sl2_bounded(8, 4),
            Err(Error::BoundExceeded { m: 8, bound: 4 })
        ));
        assert!(matches!(FiniteMatrixGroup::sl2(1), Err(Error::NTooSmall(1))));
        assert!(matches!(
            FiniteMatrixGroup::borel(9, BorelSide::Upper),
            Err(Error::NotPrime(9))
        ));
    }

    #[test]
    fn inverse_and_lookup() {
        let g = FiniteMatrixGroup::sl2(7).unwrap();
        for e in g.elements().iter().step_by(17) {
            let inv = mat_inv(e, 7);
            assert_eq!(mat_mul(e, &inv, 7), [1, 0, 0, 1]);
            assert!(g.contains(&inv));
        }
        assert_eq!(g.index_of(&[8, 7, 0, 8]), g.index_of(&[1, 0, 0, 1]));
    }
}
