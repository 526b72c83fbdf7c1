//! Boundary conditions of a Schellekens algebra: orbits of its support on
//! simple objects, the stabilizer form `epsilon_U`, and the resulting count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::ModularData;
use crate::error::{Error, Result};
use crate::picard::PicardGroup;
use crate::residue::Residue;
use crate::schellekens::{Ksb, SchellekensAlgebra, Subgroup};
use crate::twining::PhiTable;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Orbit {
    pub representative: usize,
    pub members: Vec<usize>,
    pub stabilizer: Subgroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitDecomposition {
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit_of(&self, object: usize) -> Option<usize> {
        self.orbits.iter().position(|o| o.members.contains(&object))
    }

    pub fn is_free(&self) -> bool {
        self.orbits.iter().all(|o| o.stabilizer.is_trivial())
    }

    /// Objects with a nontrivial stabilizer.
    pub fn fixed_objects(&self) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.orbits.iter().filter(|o| !o.stabilizer.is_trivial()).flat_map(|o| o.members.iter().copied()).collect();
        out.sort_unstable();
        out
    }
}

/// Orbits of `h` acting by fusion, ordered by their minimal member, which
/// serves as representative.
pub fn orbit_decomposition(md: &ModularData, pg: &PicardGroup, h: &Subgroup) -> OrbitDecomposition {
    let mut seen = vec![false; md.len()];
    let mut orbits = Vec::new();
    for i in 0..md.len() {
        if seen[i] {
            continue;
        }
        let mut members: Vec<usize> = h.elements.iter().map(|&g| pg.act(g, i)).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            seen[m] = true;
        }
        let stabilizer = Subgroup { elements: h.elements.iter().copied().filter(|&g| pg.act(g, i) == i).collect() };
        orbits.push(Orbit { representative: i, members, stabilizer });
    }
    OrbitDecomposition { orbits }
}

/// `epsilon_U` on the stabilizer, indexed by stabilizer positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EpsilonForm {
    pub stabilizer: Subgroup,
    pub values: Vec<Vec<Residue>>,
}

impl EpsilonForm {
    pub fn is_alternating(&self) -> bool {
        (0..self.values.len()).all(|a| self.values[a][a].is_zero())
    }

    /// `{g : epsilon(g, .) = 0}`.
    pub fn radical(&self) -> Vec<usize> {
        self.stabilizer
            .elements
            .iter()
            .enumerate()
            .filter(|&(a, _)| self.values[a].iter().all(|v| v.is_zero()))
            .map(|(_, &g)| g)
            .collect()
    }
}

/// `epsilon_U(g, h) = phi_U(g, h) + Xi(h, g)`. On a cyclic stabilizer every
/// alternating bicharacter vanishes, so `phi` is not consulted there.
pub fn epsilon_form(pg: &PicardGroup, u: usize, ksb: &Ksb, stabilizer: &Subgroup, phi: Option<&PhiTable>) -> Result<EpsilonForm> {
    let n = stabilizer.order();
    if stabilizer.is_cyclic(pg) {
        return Ok(EpsilonForm { stabilizer: stabilizer.clone(), values: vec![vec![Residue::ZERO; n]; n] });
    }
    let phi = phi.ok_or(Error::PhiUnavailable(u))?;
    let els = &stabilizer.elements;
    let mut values = vec![vec![Residue::ZERO; n]; n];
    for (a, &g) in els.iter().enumerate() {
        for (b, &h) in els.iter().enumerate() {
            values[a][b] = phi.get(u, g, h).ok_or(Error::PhiUnavailable(u))? + ksb.value(h, g);
        }
    }
    let eps = EpsilonForm { stabilizer: stabilizer.clone(), values };
    if !eps.is_alternating() {
        return Err(Error::InvalidEpsilon(u));
    }
    Ok(eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundaryLabel {
    pub orbit_representative: usize,
    pub irrep_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitBoundaries {
    pub orbit: Orbit,
    pub epsilon: EpsilonForm,
    pub radical: Vec<usize>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundaryCount {
    pub total: usize,
    pub orbits: Vec<OrbitBoundaries>,
    pub labels: Vec<BoundaryLabel>,
}

/// Simple modules of the algebra: per orbit, one for each irreducible of the
/// `epsilon_U`-twisted group algebra of the stabilizer, of which there are
/// `|rad epsilon_U|` for abelian stabilizers.
pub fn count_boundary_conditions(
    md: &ModularData,
    pg: &PicardGroup,
    algebra: &SchellekensAlgebra,
    phi: Option<&PhiTable>,
) -> Result<BoundaryCount> {
    let decomposition = orbit_decomposition(md, pg, algebra.support());
    let orbits: Vec<OrbitBoundaries> = decomposition
        .orbits
        .into_par_iter()
        .map(|orbit| {
            let epsilon = epsilon_form(pg, orbit.representative, &algebra.ksb, &orbit.stabilizer, phi)?;
            let radical = epsilon.radical();
            let count = radical.len();
            Ok(OrbitBoundaries { orbit, epsilon, radical, count })
        })
        .collect::<Result<_>>()?;
    let labels = orbits
        .iter()
        .flat_map(|o| (0..o.count).map(move |irrep_index| BoundaryLabel { orbit_representative: o.orbit.representative, irrep_index }))
        .collect::<Vec<_>>();
    Ok(BoundaryCount { total: labels.len(), orbits, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::oracle::ade_node_count;
    use crate::picard::find_simple_currents;
    use crate::schellekens::classify_algebras;

    fn setup(t: &str, k: u32) -> (ModularData, PicardGroup) {
        let md = ModularData::build(t.parse().unwrap(), k, &Config::default()).unwrap();
        let pg = find_simple_currents(&md, 1e-8).unwrap();
        (md, pg)
    }

    #[test]
    fn orbit_examples() {
        let (md, pg) = setup("A1", 4);
        let z2 = Subgroup { elements: vec![0, 1] };
        let od = orbit_decomposition(&md, &pg, &z2);
        let members: Vec<Vec<usize>> = od.orbits.iter().map(|o| o.members.clone()).collect();
        assert_eq!(members, vec![vec![0, 4], vec![1, 3], vec![2]]);
        assert_eq!(od.orbits[2].stabilizer, z2);
        assert_eq!(od.fixed_objects(), vec![2]);
        let od = orbit_decomposition(&md, &pg, &Subgroup::trivial());
        assert_eq!(od.len(), 5);

        let (md, pg) = setup("A2", 2);
        let z3 = Subgroup { elements: vec![0, 1, 2] };
        let od = orbit_decomposition(&md, &pg, &z3);
        assert_eq!(od.len(), 2);
        assert!(od.is_free());
    }

    #[test]
    fn d_series_counts_match_ade_nodes() {
        // D-even for k = 0 mod 4, D-odd for k = 2 mod 4; both have D_{k/2+2} graphs
        for k in [4, 6, 8, 10] {
            let (md, pg) = setup("A1", k);
            let all = classify_algebras(&md, &pg).unwrap();
            assert_eq!(all.len(), 2);
            let c = count_boundary_conditions(&md, &pg, &all[1].algebra, None).unwrap();
            assert_eq!(c.total, ade_node_count(k, true), "k = {k}");
            let cardy = count_boundary_conditions(&md, &pg, &all[0].algebra, None).unwrap();
            assert_eq!(cardy.total, ade_node_count(k, false));
        }
    }

    #[test]
    fn cyclic_fixed_point_has_trivial_form() {
        let (md, pg) = setup("A1", 6);
        let all = classify_algebras(&md, &pg).unwrap();
        let ksb = &all[1].algebra.ksb;
        assert_eq!(ksb.value(1, 1), Residue::from_ratio(1, 2));
        let z2 = Subgroup { elements: vec![0, 1] };
        let eps = epsilon_form(&pg, 3, ksb, &z2, None).unwrap();
        assert!(eps.values.iter().flatten().all(|v| v.is_zero()));
    }

    #[test]
    fn non_cyclic_stabilizer_needs_phi() {
        let (md, pg) = setup("D4", 2);
        let all = classify_algebras(&md, &pg).unwrap();
        let full: Vec<_> = all.iter().filter(|c| c.algebra.support().order() == 4).collect();
        assert_eq!(full.len(), 2);
        for c in full {
            assert!(matches!(count_boundary_conditions(&md, &pg, &c.algebra, None), Err(Error::PhiUnavailable(_))));
        }
    }

    #[test]
    fn completeness_where_phi_is_not_needed() {
        for (t, k) in [("A1", 2), ("A1", 4), ("A1", 6), ("A2", 3), ("A3", 2), ("A3", 4), ("B2", 2), ("D4", 1), ("G2", 2)] {
            let (md, pg) = setup(t, k);
            for c in classify_algebras(&md, &pg).unwrap() {
                let count = count_boundary_conditions(&md, &pg, &c.algebra, None).unwrap();
                assert_eq!(count.total as u32, c.partition.charge_trace(&md.conjugation), "{t} {k}");
                let od = orbit_decomposition(&md, &pg, c.algebra.support());
                assert_eq!(od.orbits.iter().map(|o| o.members.len()).sum::<usize>(), md.len());
                for o in &od.orbits {
                    assert_eq!(o.members.len() * o.stabilizer.order(), c.algebra.support().order());
                }
                if od.is_free() {
                    assert_eq!(count.total, od.len());
                }
            }
        }
    }
}
