//! Finite abelian groups given by multiplication tables.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::residue::Residue;

/// A finite abelian group on `0..n` with identity `0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub table: Vec<Vec<usize>>,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<usize>>) -> Self {
        Self { table }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn pow(&self, a: usize, n: u64) -> usize {
        (0..n).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mul(a, b) == 0).expect("group element without inverse")
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order()).map(|a| self.element_order(a)).fold(1, |acc, o| acc.lcm(&o))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    /// Closure of a set of elements.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// All subgroups, ordered by size then lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![vec![0usize]];
        found.insert(vec![0]);
        while let Some(h) = stack.pop() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.generated(&gens);
                if found.insert(k.clone()) {
                    stack.push(k);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Invariant factors `n_1 | n_2 | ...` of the subgroup `elements`,
    /// from the number of elements killed by each prime power.
    pub fn invariant_factors(&self, elements: &[usize]) -> Vec<u64> {
        let order = elements.len() as u64;
        let mut per_prime: Vec<Vec<u64>> = Vec::new();
        for p in prime_factors(order) {
            // c_j = log_p #{x : p^j x = 0}
            let mut counts = vec![0u32];
            let mut j = 1;
            loop {
                let q = p.pow(j);
                let killed = elements.iter().filter(|&&x| self.pow(x, q) == 0).count() as u64;
                let c = ilog(killed, p);
                if c == *counts.last().unwrap() {
                    break;
                }
                counts.push(c);
                j += 1;
            }
            // number of cyclic factors of order >= p^j is c_j - c_{j-1}
            let mut exps = Vec::new();
            for j in 1..counts.len() {
                let at_least = counts[j] - counts[j - 1];
                let next = if j + 1 < counts.len() { counts[j + 1] - counts[j] } else { 0 };
                for _ in 0..(at_least - next) {
                    exps.push(p.pow(j as u32));
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push(exps);
        }
        let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..len)
            .map(|i| per_prime.iter().map(|e| e.get(i).copied().unwrap_or(1)).product())
            .collect();
        factors.reverse();
        factors
    }

    /// A minimal generating tuple of `elements` that is a basis, i.e. the
    /// subgroup is the direct sum of the cyclic groups generated by it.
    /// Each entry is `(element, order)`.
    pub fn basis(&self, elements: &[usize]) -> Vec<(usize, u64)> {
        if elements.len() == 1 {
            return Vec::new();
        }
        let r = self.invariant_factors(elements).len();
        let cand: Vec<usize> = elements.iter().copied().filter(|&x| x != 0).collect();
        let mut idx = vec![0usize; r];
        loop {
            let tuple: Vec<usize> = idx.iter().map(|&i| cand[i]).collect();
            let orders: Vec<u64> = tuple.iter().map(|&g| self.element_order(g)).collect();
            if orders.iter().product::<u64>() == elements.len() as u64
                && self.generated(&tuple).len() == elements.len()
            {
                return tuple.into_iter().zip(orders).collect();
            }
            // next increasing tuple
            let mut pos = r;
            loop {
                if pos == 0 {
                    panic!("no basis found for abelian group");
                }
                pos -= 1;
                if idx[pos] + 1 < cand.len() {
                    idx[pos] += 1;
                    for q in pos + 1..r {
                        idx[q] = idx[pos];
                    }
                    break;
                }
            }
        }
    }

    /// Coordinates of every element of the subgroup with respect to `basis`,
    /// keyed by position in `elements`.
    pub fn coordinates(&self, elements: &[usize], basis: &[(usize, u64)]) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new(); elements.len()];
        let mut coords = vec![0u64; basis.len()];
        loop {
            let x = basis
                .iter()
                .zip(&coords)
                .fold(0, |acc, (&(g, _), &c)| self.mul(acc, self.pow(g, c)));
            let pos = elements.binary_search(&x).expect("coordinates outside subgroup");
            out[pos] = coords.clone();
            let mut i = 0;
            loop {
                if i == basis.len() {
                    return out;
                }
                coords[i] += 1;
                if coords[i] < basis[i].1 {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }

    /// Every character of the subgroup, as residue-valued tables indexed by
    /// position in `elements`. The trivial character comes first.
    pub fn characters(&self, elements: &[usize]) -> Vec<Vec<Residue>> {
        let basis = self.basis(elements);
        let coords = self.coordinates(elements, &basis);
        let mut out = Vec::new();
        let mut values = vec![0u64; basis.len()];
        loop {
            let table = coords
                .iter()
                .map(|c| {
                    c.iter()
                        .zip(&values)
                        .zip(&basis)
                        .map(|((&ci, &vi), &(_, n))| Residue::from_ratio((ci * vi) as i64, n as i64))
                        .sum()
                })
                .collect();
            out.push(table);
            let mut i = 0;
            loop {
                if i == basis.len() {
                    return out;
                }
                values[i] += 1;
                if values[i] < basis[i].1 {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
        }
    }

    /// Name of the isomorphism class, e.g. `"Z2xZ2"`, `"trivial"`, or a
    /// `nonabelian(n)` tag.
    pub fn iso_class_name(&self) -> String {
        if !self.is_abelian() {
            return format!("nonabelian({})", self.order());
        }
        let all: Vec<usize> = (0..self.order()).collect();
        cyclic_name(&self.invariant_factors(&all))
    }
}

pub fn cyclic_name(factors: &[u64]) -> String {
    if factors.is_empty() {
        "trivial".into()
    } else {
        factors.iter().map(|n| format!("Z{n}")).collect::<Vec<_>>().join("x")
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn ilog(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 1 {
        debug_assert!(n % p == 0);
        n /= p;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_subgroup_count;
    use proptest::prelude::*;

    fn product(orders: &[usize]) -> GroupTable {
        let n: usize = orders.iter().product();
        let decode = |mut x: usize| -> Vec<usize> {
            orders
                .iter()
                .map(|&o| {
                    let c = x % o;
                    x /= o;
                    c
                })
                .collect()
        };
        let encode = |c: &[usize]| -> usize { c.iter().zip(orders).rev().fold(0, |acc, (&ci, &o)| acc * o + ci) };
        GroupTable::new(
            (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            let (ca, cb) = (decode(a), decode(b));
                            let c: Vec<usize> =
                                ca.iter().zip(&cb).zip(orders).map(|((x, y), &o)| (x + y) % o).collect();
                            encode(&c)
                        })
                        .collect()
                })
                .collect(),
        )
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(product(&[2]).subgroups().len(), 2);
        assert_eq!(product(&[4]).subgroups().len(), 3);
        assert_eq!(product(&[2, 2]).subgroups().len(), 5);
        assert_eq!(product(&[1]).subgroups().len(), 1);
    }

    #[test]
    fn invariant_factor_examples() {
        let all = |g: &GroupTable| (0..g.order()).collect::<Vec<_>>();
        for (orders, expect) in [
            (vec![2, 2], vec![2, 2]),
            (vec![4], vec![4]),
            (vec![2, 3], vec![6]),
            (vec![2, 4], vec![2, 4]),
            (vec![6, 2], vec![2, 6]),
            (vec![1], vec![]),
        ] {
            let g = product(&orders);
            assert_eq!(g.invariant_factors(&all(&g)), expect, "{orders:?}");
        }
        assert_eq!(product(&[2, 2]).iso_class_name(), "Z2xZ2");
        assert_eq!(product(&[1]).iso_class_name(), "trivial");
    }

    #[test]
    fn characters_are_homomorphisms() {
        let g = product(&[2, 4]);
        let all: Vec<usize> = (0..8).collect();
        let chars = g.characters(&all);
        assert_eq!(chars.len(), 8);
        assert!(chars[0].iter().all(Residue::is_zero));
        for chi in &chars {
            for a in 0..8 {
                for b in 0..8 {
                    assert_eq!(chi[g.mul(a, b)], chi[a] + chi[b]);
                }
            }
        }
        let distinct: BTreeSet<_> = chars.iter().collect();
        assert_eq!(distinct.len(), 8);
    }

    proptest! {
        #[test]
        fn subgroups_match_brute_force(a in 1usize..5, b in 1usize..5) {
            let g = product(&[a, b]);
            prop_assert_eq!(g.subgroups().len(), brute_force_subgroup_count(&g.table));
            let all: Vec<usize> = (0..g.order()).collect();
            let f = g.invariant_factors(&all);
            prop_assert_eq!(f.iter().product::<u64>(), g.order() as u64);
            for w in f.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            let basis = g.basis(&all);
            prop_assert_eq!(basis.len(), f.len());
            let gens: Vec<usize> = basis.iter().map(|x| x.0).collect();
            prop_assert_eq!(g.generated(&gens).len(), g.order());
        }
    }
}
