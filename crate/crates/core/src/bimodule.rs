//! Fusion rings of bimodules over Schellekens algebras with free support
//! action, the group of invertible bimodules, and duality defects.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::{FusionTensor, ModularData};
use crate::boundary::{orbit_decomposition, BoundaryCount};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::picard::PicardGroup;
use crate::residue::Residue;
use crate::schellekens::{Ksb, SchellekensAlgebra};

/// Bimodule `(object, character)`; the object is the chosen representative
/// of its orbit under the support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BimoduleClass {
    pub object_index: usize,
    /// Values on the support elements, in support order.
    pub character: Vec<Residue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleRing {
    pub basis: Vec<BimoduleClass>,
    pub structure_constants: FusionTensor,
    pub unit: usize,
    /// Classes whose object is a simple current.
    pub invertible: Vec<bool>,
    ksb: Ksb,
    /// For every object in the ring, `(representative, h)` with `h . rep = object`.
    placement: HashMap<usize, (usize, usize)>,
    /// Action of each simple current on objects, by Picard element.
    current_action: Vec<Vec<usize>>,
    current_objects: Vec<usize>,
    conjugation: Vec<usize>,
    index: HashMap<BimoduleClass, usize>,
}

impl BimoduleRing {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, class: &BimoduleClass) -> Option<usize> {
        self.index.get(class).copied()
    }

    /// Canonical class of `(object, psi)` using
    /// `(h . r, psi) ~ (r, psi + Xi(., h))`.
    pub fn canonical(&self, object: usize, character: &[Residue]) -> Option<usize> {
        let &(rep, h) = self.placement.get(&object)?;
        let support = &self.ksb.support.elements;
        let shifted: Vec<Residue> = support.iter().zip(character).map(|(&g, &c)| c + self.ksb.value(g, h)).collect();
        self.index_of(&BimoduleClass { object_index: rep, character: shifted })
    }

    pub fn product(&self, a: usize, b: usize) -> Vec<(usize, u32)> {
        (0..self.rank())
            .filter_map(|c| {
                let n = self.structure_constants.get(a, b, c);
                (n != 0).then_some((c, n))
            })
            .collect()
    }

    pub fn is_associative(&self) -> bool {
        self.structure_constants.associativity_violation().is_none()
    }

    /// `(i^vee, -psi)`.
    pub fn dual_candidate(&self, a: usize) -> usize {
        let b = &self.basis[a];
        let neg: Vec<Residue> = b.character.iter().map(|&c| -c).collect();
        self.canonical(self.conjugation[b.object_index], &neg).expect("ring objects closed under conjugation")
    }

    pub fn sparse_structure_constants(&self) -> Vec<(usize, usize, usize, u32)> {
        self.structure_constants.sparse()
    }
}

fn build_ring(
    md: &ModularData,
    pg: &PicardGroup,
    algebra: &SchellekensAlgebra,
    objects: &[usize],
    choose_rep: &dyn Fn(&[usize]) -> usize,
) -> Result<BimoduleRing> {
    let ksb = algebra.ksb.clone();
    let support = ksb.support.clone();
    let od = orbit_decomposition(md, pg, &support);
    let in_ring: Vec<bool> = (0..md.len()).map(|i| objects.contains(&i)).collect();
    let mut fixed = Vec::new();
    let mut placement = HashMap::new();
    let mut reps = Vec::new();
    for orbit in od.orbits.iter().filter(|o| in_ring[o.representative]) {
        if !orbit.stabilizer.is_trivial() {
            fixed.extend(orbit.members.iter().copied());
            continue;
        }
        let rep = choose_rep(&orbit.members);
        for &h in &support.elements {
            placement.insert(pg.act(h, rep), (rep, h));
        }
        reps.push(rep);
    }
    if !fixed.is_empty() {
        fixed.sort_unstable();
        return Err(Error::FixedPointsPresent(fixed));
    }
    reps.sort_unstable();
    let characters = pg.table.characters(&support.elements);
    let mut basis = Vec::with_capacity(reps.len() * characters.len());
    for &r in &reps {
        for chi in &characters {
            basis.push(BimoduleClass { object_index: r, character: chi.clone() });
        }
    }
    let index: HashMap<BimoduleClass, usize> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let current_action: Vec<Vec<usize>> = (0..pg.order()).map(|g| (0..md.len()).map(|i| pg.act(g, i)).collect()).collect();
    let current_objects: Vec<usize> = (0..pg.order()).map(|g| pg.object(g)).collect();
    let invertible = basis.iter().map(|b| current_objects.contains(&b.object_index)).collect();
    let mut ring = BimoduleRing {
        basis,
        structure_constants: FusionTensor::zeros(0),
        unit: 0,
        invertible,
        ksb,
        placement,
        current_action,
        current_objects,
        conjugation: md.conjugation.clone(),
        index,
    };
    let trivial = vec![Residue::ZERO; support.order()];
    ring.unit = ring.canonical(md.vacuum(), &trivial).expect("vacuum lies in every ring");

    let n = ring.rank();
    let rows: Vec<Vec<(usize, usize, u32)>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut row = Vec::new();
            let (i, psi) = (ring.basis[a].object_index, &ring.basis[a].character);
            for b in 0..n {
                let (j, chi) = (ring.basis[b].object_index, &ring.basis[b].character);
                let sum: Vec<Residue> = psi.iter().zip(chi).map(|(&x, &y)| x + y).collect();
                for k in 0..md.len() {
                    let mult = md.fusion.get(i, j, k);
                    if mult != 0 {
                        let c = ring.canonical(k, &sum).expect("ring objects closed under fusion");
                        row.push((b, c, mult));
                    }
                }
            }
            row
        })
        .collect();
    let mut tensor = FusionTensor::zeros(n);
    for (a, row) in rows.into_iter().enumerate() {
        for (b, c, mult) in row {
            tensor.set(a, b, c, tensor.get(a, b, c) + mult);
        }
    }
    ring.structure_constants = tensor;
    Ok(ring)
}

fn min_rep(members: &[usize]) -> usize {
    *members.iter().min().expect("orbits are non-empty")
}

/// Ring on all simple objects. Requires the support to act freely.
pub fn build_bimodule_ring(md: &ModularData, pg: &PicardGroup, algebra: &SchellekensAlgebra) -> Result<BimoduleRing> {
    let all: Vec<usize> = (0..md.len()).collect();
    build_ring(md, pg, algebra, &all, &min_rep)
}

/// Ring restricted to the simple currents, on which the action is always free.
pub fn build_pointed_bimodule_ring(md: &ModularData, pg: &PicardGroup, algebra: &SchellekensAlgebra) -> Result<BimoduleRing> {
    let objects: Vec<usize> = (0..pg.order()).map(|g| pg.object(g)).collect();
    build_ring(md, pg, algebra, &objects, &min_rep)
}

/// As [`build_bimodule_ring`] with `choose_rep` picking each orbit's representative.
pub fn build_bimodule_ring_with(
    md: &ModularData,
    pg: &PicardGroup,
    algebra: &SchellekensAlgebra,
    choose_rep: &dyn Fn(&[usize]) -> usize,
) -> Result<BimoduleRing> {
    let all: Vec<usize> = (0..md.len()).collect();
    build_ring(md, pg, algebra, &all, choose_rep)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BimodulePicard {
    /// Ring indices of the invertible classes; the unit comes first.
    pub elements: Vec<usize>,
    pub table: GroupTable,
    pub iso_class_name: String,
}

impl BimodulePicard {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

pub fn bimodule_picard(ring: &BimoduleRing) -> BimodulePicard {
    let mut elements = vec![ring.unit];
    elements.extend((0..ring.rank()).filter(|&a| ring.invertible[a] && a != ring.unit));
    let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(p, &a)| (a, p)).collect();
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|&a| {
            elements
                .iter()
                .map(|&b| match ring.product(a, b).as_slice() {
                    [(c, 1)] => pos[c],
                    other => panic!("product of invertible classes {a}, {b} is {other:?}"),
                })
                .collect()
        })
        .collect();
    let table = GroupTable::new(table);
    let iso_class_name = table.iso_class_name();
    BimodulePicard { elements, table, iso_class_name }
}

/// Permutation of boundary labels induced by an invertible class: the
/// orbit of `i` goes to the orbit of `g . i`. `None` for non-invertible classes.
pub fn act_on_boundaries(ring: &BimoduleRing, class: usize, boundaries: &BoundaryCount) -> Option<Vec<usize>> {
    let object = ring.basis[class].object_index;
    let g = ring.current_objects.iter().position(|&o| o == object)?;
    let orbit_of = |i: usize| boundaries.orbits.iter().position(|o| o.orbit.members.contains(&i));
    let first_label: Vec<usize> = boundaries
        .orbits
        .iter()
        .scan(0, |acc, o| {
            let start = *acc;
            *acc += o.count;
            Some(start)
        })
        .collect();
    let mut perm = Vec::with_capacity(boundaries.total);
    for (o, ob) in boundaries.orbits.iter().enumerate() {
        let target = orbit_of(ring.current_action[g][ob.orbit.representative])?;
        for irrep in 0..ob.count {
            debug_assert_eq!(first_label[o] + irrep, perm.len());
            perm.push(first_label[target] + irrep);
        }
    }
    Some(perm)
}

/// Non-invertible classes `b` with `b b^vee` a sum of invertible classes.
pub fn kramers_wannier_candidates(ring: &BimoduleRing) -> Result<Vec<BimoduleClass>> {
    let mut out = Vec::new();
    for a in 0..ring.rank() {
        let dual = ring.dual_candidate(a);
        let prod = ring.product(a, dual);
        let unit_mult = prod.iter().find(|&&(c, _)| c == ring.unit).map_or(0, |&(_, n)| n);
        if unit_mult != 1 {
            let object = ring.basis[a].object_index;
            let character = (0..a).filter(|&c| ring.basis[c].object_index == object).count();
            return Err(Error::DualityValidationFailure { object, character });
        }
        if !ring.invertible[a] && prod.iter().all(|&(c, _)| ring.invertible[c]) {
            out.push(ring.basis[a].clone());
        }
    }
    Ok(out)
}
