//! Schellekens algebras: subgroups of the Picard group, Kreuzer-Schellekens
//! bihomomorphisms on them, and the bulk partition functions they define.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::ModularData;
use crate::error::{Error, Result};
use crate::picard::{monodromy_charge, PicardGroup};
use crate::residue::Residue;

/// A subgroup of the Picard group, as sorted element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subgroup {
    pub elements: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Self { elements: vec![0] }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Basis of the subgroup as `(element, order)` pairs.
    pub fn generators(&self, pg: &PicardGroup) -> Vec<(usize, u64)> {
        pg.table.basis(&self.elements)
    }

    pub fn is_cyclic(&self, pg: &PicardGroup) -> bool {
        pg.table.invariant_factors(&self.elements).len() <= 1
    }
}

pub fn enumerate_subgroups(pg: &PicardGroup) -> Vec<Subgroup> {
    pg.table.subgroups().into_iter().map(|elements| Subgroup { elements }).collect()
}

/// A bicharacter on a subgroup with `values[g][g] = h_g mod 1`.
///
/// `values` is indexed by positions in `support.elements`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ksb {
    pub support: Subgroup,
    pub values: Vec<Vec<Residue>>,
}

impl Ksb {
    pub fn trivial() -> Self {
        Self { support: Subgroup::trivial(), values: vec![vec![Residue::ZERO]] }
    }

    /// `Xi(g, h)` for Picard elements `g, h` in the support.
    pub fn value(&self, g: usize, h: usize) -> Residue {
        let a = self.support.position(g).expect("element outside KSB support");
        let b = self.support.position(h).expect("element outside KSB support");
        self.values[a][b]
    }

    pub fn transpose(&self) -> Self {
        let n = self.values.len();
        Self {
            support: self.support.clone(),
            values: (0..n).map(|a| (0..n).map(|b| self.values[b][a]).collect()).collect(),
        }
    }

    pub fn is_bihomomorphism(&self, pg: &PicardGroup) -> bool {
        let els = &self.support.elements;
        els.iter().all(|&g| {
            els.iter().all(|&g2| {
                let gg = pg.mul(g, g2);
                els.iter().all(|&h| {
                    self.value(gg, h) == self.value(g, h) + self.value(g2, h)
                        && self.value(h, gg) == self.value(h, g) + self.value(h, g2)
                })
            })
        })
    }

    pub fn has_twist_diagonal(&self, pg: &PicardGroup) -> bool {
        self.support.elements.iter().all(|&g| self.value(g, g) == pg.twists[g])
    }
}

/// All KSBs on `support`: every bicharacter determined by values on pairs of
/// basis elements, filtered by the diagonal condition on all of `support`.
pub fn enumerate_ksbs(pg: &PicardGroup, support: &Subgroup) -> Vec<Ksb> {
    let basis = support.generators(pg);
    let coords = pg.table.coordinates(&support.elements, &basis);
    let r = basis.len();
    // x_ab ranges over (1/gcd(n_a, n_b)) Z / Z
    let ranges: Vec<u64> = (0..r * r)
        .map(|c| num_integer::gcd(basis[c / r].1, basis[c % r].1))
        .collect();
    let mut out = Vec::new();
    let mut x = vec![0u64; r * r];
    loop {
        let m = support.order();
        let values: Vec<Vec<Residue>> = (0..m)
            .map(|p| {
                (0..m)
                    .map(|q| {
                        (0..r * r)
                            .map(|c| {
                                let (a, b) = (c / r, c % r);
                                Residue::from_ratio((coords[p][a] * coords[q][b] * x[c]) as i64, ranges[c] as i64)
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let ksb = Ksb { support: support.clone(), values };
        if ksb.has_twist_diagonal(pg) {
            out.push(ksb);
        }
        let mut i = 0;
        loop {
            if i == r * r {
                return out;
            }
            x[i] += 1;
            if x[i] < ranges[i] {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// `A(H, Xi)`: the support and its KSB.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchellekensAlgebra {
    pub ksb: Ksb,
}

impl SchellekensAlgebra {
    pub fn new(ksb: Ksb) -> Self {
        Self { ksb }
    }

    pub fn cardy() -> Self {
        Self { ksb: Ksb::trivial() }
    }

    pub fn support(&self) -> &Subgroup {
        &self.ksb.support
    }

    /// Simple objects underlying the algebra, one per support element.
    pub fn objects(&self, pg: &PicardGroup) -> Vec<usize> {
        self.support().elements.iter().map(|&g| pg.object(g)).collect()
    }
}

/// Bulk partition function `Z_ij`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartitionMatrix {
    pub entries: Vec<Vec<u32>>,
}

impl PartitionMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn transpose(&self) -> Self {
        let n = self.size();
        Self { entries: (0..n).map(|i| (0..n).map(|j| self.entries[j][i]).collect()).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i][j]
    }

    /// `sum_i Z_{i, i^vee}`.
    pub fn charge_trace(&self, conjugation: &[usize]) -> u32 {
        (0..self.size()).map(|i| self.entries[i][conjugation[i]]).sum()
    }

    /// Writes `Z` as a sum of `m |chi_a + chi_b + ..|^2` blocks where it has
    /// that shape, falling back to `chi_i \bar chi_j` monomials.
    pub fn to_latex(&self, labels: &[String]) -> String {
        let n = self.size();
        let mut covered = vec![vec![false; n]; n];
        let mut terms: Vec<String> = Vec::new();
        for i in 0..n {
            if covered[i].iter().any(|&c| c) || self.entries[i].iter().all(|&z| z == 0) {
                continue;
            }
            let block: Vec<usize> = (0..n).filter(|&j| self.entries[i][j] != 0).collect();
            let c = self.entries[i][block[0]];
            let is_block = block.contains(&i)
                && block.iter().all(|&a| {
                    (0..n).all(|b| {
                        let inside = block.contains(&b);
                        (inside && self.entries[a][b] == c) || (!inside && self.entries[a][b] == 0)
                    })
                })
                && (0..n).all(|a| block.contains(&a) || block.iter().all(|&b| self.entries[a][b] == 0));
            if is_block {
                let sum = block.iter().map(|&b| format!("\\chi_{{{}}}", labels[b])).collect::<Vec<_>>().join("+");
                let coef = if c == 1 { String::new() } else { c.to_string() };
                terms.push(format!("{coef}|{sum}|^2"));
                for &a in &block {
                    for &b in &block {
                        covered[a][b] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let z = self.entries[i][j];
                if z != 0 && !covered[i][j] {
                    let coef = if z == 1 { String::new() } else { z.to_string() };
                    terms.push(format!("{coef}\\chi_{{{}}}\\bar\\chi_{{{}}}", labels[i], labels[j]));
                }
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Partition function of `A(H, Xi)`:
/// `Z_ij = 1/|H| sum_{g,h in H} exp(2 pi i Q_i(h)) Xi(h,g) [j^vee = g i]`,
/// where the sum over `h` collapses to `|H|` exactly when
/// `Q_i(h) + Xi(h, g) = 0` for every `h`.
pub fn partition_function(md: &ModularData, pg: &PicardGroup, a: &SchellekensAlgebra) -> Result<PartitionMatrix> {
    let n = md.len();
    let ksb = &a.ksb;
    let h_elems = &ksb.support.elements;
    if !ksb.is_bihomomorphism(pg) || !ksb.has_twist_diagonal(pg) {
        return Err(Error::NonIntegerEntry { i: 0, j: 0 });
    }
    let mut z = vec![vec![0u32; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        let charges: Vec<Residue> = h_elems.iter().map(|&h| monodromy_charge(md, pg, i, h)).collect();
        for &g in h_elems {
            let trivial = h_elems.iter().zip(&charges).all(|(&h, &q)| (q + ksb.value(h, g)).is_zero());
            if trivial {
                let j = md.conjugation[pg.act(g, i)];
                row[j] += 1;
            }
        }
    }
    Ok(PartitionMatrix { entries: z })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvarianceReport {
    /// `max |SZ - ZS|`.
    pub s_commutator: f64,
    /// First `(i, j)` with `Z_ij != 0` and `h_i - h_j` not an integer.
    pub t_violation: Option<(usize, usize)>,
    pub vacuum_entry: u32,
    pub pass: bool,
}

pub fn check_modular_invariance(md: &ModularData, z: &PartitionMatrix, tolerance: f64) -> InvarianceReport {
    let n = md.len();
    let s = &md.s_matrix;
    let zc = |i: usize, j: usize| Complex64::new(z.entries[i][j] as f64, 0.0);
    let mut comm: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let sz: Complex64 = (0..n).map(|k| s[i][k] * zc(k, j)).sum();
            let zs: Complex64 = (0..n).map(|k| zc(i, k) * s[k][j]).sum();
            comm = comm.max((sz - zs).norm());
        }
    }
    let mut t_violation = None;
    'outer: for i in 0..n {
        for j in 0..n {
            if z.entries[i][j] != 0 && !(md.conformal_weights[i] - md.conformal_weights[j]).is_integer() {
                t_violation = Some((i, j));
                break 'outer;
            }
        }
    }
    let v = md.vacuum();
    let vacuum_entry = z.entries[v][v];
    InvarianceReport {
        s_commutator: comm,
        t_violation,
        vacuum_entry,
        pass: comm < tolerance && t_violation.is_none() && vacuum_entry == 1,
    }
}

/// As [`check_modular_invariance`], but failing with
/// [`Error::InvarianceViolation`].
pub fn verify_modular_invariance(md: &ModularData, z: &PartitionMatrix, tolerance: f64) -> Result<InvarianceReport> {
    let rep = check_modular_invariance(md, z, tolerance);
    if rep.pass {
        return Ok(rep);
    }
    let why = if let Some((i, j)) = rep.t_violation {
        format!("T-condition fails at Z[{i}][{j}]")
    } else if rep.vacuum_entry != 1 {
        format!("Z_00 = {}", rep.vacuum_entry)
    } else {
        format!("|SZ - ZS| = {:e}", rep.s_commutator)
    };
    Err(Error::InvarianceViolation(why))
}

/// A Schellekens algebra together with its partition function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedAlgebra {
    pub algebra: SchellekensAlgebra,
    pub partition: PartitionMatrix,
}

/// Every `A(H, Xi)`: all subgroups, all KSBs on each.
pub fn classify_algebras(md: &ModularData, pg: &PicardGroup) -> Result<Vec<ClassifiedAlgebra>> {
    let per_subgroup: Vec<Result<Vec<ClassifiedAlgebra>>> = enumerate_subgroups(pg)
        .par_iter()
        .map(|h| {
            enumerate_ksbs(pg, h)
                .into_iter()
                .map(|ksb| {
                    let algebra = SchellekensAlgebra::new(ksb);
                    let partition = partition_function(md, pg, &algebra)?;
                    Ok(ClassifiedAlgebra { algebra, partition })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for r in per_subgroup {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::oracle::brute_force_ksb_count;
    use crate::picard::find_simple_currents;

    fn setup(t: &str, k: u32) -> (ModularData, PicardGroup) {
        let md = ModularData::build(t.parse().unwrap(), k, &Config::default()).unwrap();
        let pg = find_simple_currents(&md, 1e-8).unwrap();
        (md, pg)
    }

    fn twist_numerators(pg: &PicardGroup, e: u64) -> Vec<u64> {
        pg.twists.iter().map(|t| (t.value() * num_rational::Rational64::from_integer(e as i64)).to_integer() as u64).collect()
    }

    #[test]
    fn ksb_counts() {
        let (_, pg) = setup("A1", 4);
        let h = Subgroup { elements: vec![0, 1] };
        let ks = enumerate_ksbs(&pg, &h);
        assert_eq!(ks.len(), 1);
        assert!(ks[0].value(1, 1).is_zero());
        let (_, pg) = setup("A1", 5);
        assert!(enumerate_ksbs(&pg, &h).is_empty());
        assert_eq!(enumerate_ksbs(&pg, &Subgroup::trivial()).len(), 1);
    }

    #[test]
    fn d4_level_two_against_exhaustive_search() {
        let (_, pg) = setup("D4", 2);
        let subgroups = enumerate_subgroups(&pg);
        assert_eq!(subgroups.len(), 5);
        let full = subgroups.last().unwrap();
        let e = pg.exponent();
        let oracle = brute_force_ksb_count(&pg.table.table, e, &twist_numerators(&pg, e));
        assert_eq!(enumerate_ksbs(&pg, full).len(), oracle);
        assert_eq!(oracle, 2);
        let total: usize = subgroups.iter().map(|h| enumerate_ksbs(&pg, h).len()).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn cardy_case_is_charge_conjugation() {
        let (md, pg) = setup("A2", 2);
        let z = partition_function(&md, &pg, &SchellekensAlgebra::cardy()).unwrap();
        for i in 0..md.len() {
            for j in 0..md.len() {
                assert_eq!(z.get(i, j), u32::from(i == md.conjugation[j]));
            }
        }
        verify_modular_invariance(&md, &z, 1e-8).unwrap();
    }

    #[test]
    fn d_series_invariants() {
        let (md, pg) = setup("A1", 4);
        let all = classify_algebras(&md, &pg).unwrap();
        assert_eq!(all.len(), 2);
        let z = &all[1].partition;
        let mut expect = vec![vec![0; 5]; 5];
        for (i, j) in [(0, 0), (0, 4), (4, 0), (4, 4)] {
            expect[i][j] = 1;
        }
        expect[2][2] = 2;
        assert_eq!(z.entries, expect);
        verify_modular_invariance(&md, z, 1e-8).unwrap();
        let labels: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        assert_eq!(z.to_latex(&labels), "|\\chi_{0}+\\chi_{4}|^2 + 2|\\chi_{2}|^2");

        let (md, pg) = setup("A1", 6);
        let all = classify_algebras(&md, &pg).unwrap();
        assert_eq!(all.len(), 2);
        let z = &all[1].partition;
        for i in 0..7 {
            for j in 0..7 {
                let expect = if i % 2 == 0 { i == j } else { j == 6 - i };
                assert_eq!(z.get(i, j), u32::from(expect), "({i},{j})");
            }
        }
        verify_modular_invariance(&md, z, 1e-8).unwrap();
    }

    #[test]
    fn a1_level_five_has_only_cardy() {
        let (md, pg) = setup("A1", 5);
        let all = classify_algebras(&md, &pg).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].algebra.support().is_trivial());
    }

    #[test]
    fn non_invariant_matrix_fails_t_condition() {
        let (md, _) = setup("A1", 2);
        let ones = PartitionMatrix { entries: vec![vec![1; 3]; 3] };
        let rep = check_modular_invariance(&md, &ones, 1e-8);
        assert!(rep.t_violation.is_some());
        assert!(matches!(verify_modular_invariance(&md, &ones, 1e-8), Err(Error::InvarianceViolation(_))));
    }

    #[test]
    fn structural_properties_on_small_catalog() {
        for (t, k) in [("A1", 2), ("A2", 1), ("A2", 3), ("A3", 2), ("A3", 3), ("D4", 1), ("D4", 2), ("B2", 2)] {
            let (md, pg) = setup(t, k);
            for c in classify_algebras(&md, &pg).unwrap() {
                verify_modular_invariance(&md, &c.partition, 1e-8).unwrap();
                let ksb = &c.algebra.ksb;
                // symmetric part of Xi is the monodromy pairing
                for &g in &ksb.support.elements {
                    for &h in &ksb.support.elements {
                        let q = monodromy_charge(&md, &pg, pg.object(g), h);
                        assert_eq!(ksb.value(g, h) + ksb.value(h, g), q, "{t} {k}");
                    }
                }
                let transposed = SchellekensAlgebra::new(ksb.transpose());
                let zt = partition_function(&md, &pg, &transposed).unwrap();
                assert_eq!(zt, c.partition.transpose(), "{t} {k}");
                let mut objs = c.algebra.objects(&pg);
                objs.dedup();
                assert_eq!(objs.len(), c.algebra.support().order());
            }
        }
    }
}
