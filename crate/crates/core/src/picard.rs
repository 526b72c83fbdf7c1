//! Simple currents of `C(g, k)` and the structures they carry: the Picard
//! group, monodromy charges, the quadratic form from the twist and the
//! affine diagram symmetry attached to each current.

use serde::{Deserialize, Serialize};

use crate::affine::ModularData;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::lie::Series;
use crate::residue::Residue;

/// An invertible simple object together with its fusion action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SimpleCurrent {
    pub object_index: usize,
    /// `action[j]` is the unique `k` with `N_{g j}^k = 1`.
    pub action: Vec<usize>,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PicardGroup {
    /// Identity first, then increasing object index.
    pub elements: Vec<SimpleCurrent>,
    pub table: GroupTable,
    pub invariant_factors: Vec<u64>,
    /// `h_g mod 1`.
    pub twists: Vec<Residue>,
}

impl PicardGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_of_object(&self, object: usize) -> Option<usize> {
        self.elements.iter().position(|c| c.object_index == object)
    }

    pub fn object(&self, g: usize) -> usize {
        self.elements[g].object_index
    }

    /// `g . i` under fusion.
    pub fn act(&self, g: usize, i: usize) -> usize {
        self.elements[g].action[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table.mul(a, b)
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.table.inverse(a)
    }

    pub fn exponent(&self) -> u64 {
        self.table.exponent()
    }

    pub fn iso_class_name(&self) -> String {
        crate::group::cyclic_name(&self.invariant_factors)
    }
}

fn permutation_row(md: &ModularData, i: usize) -> Option<Vec<usize>> {
    let n = md.len();
    let mut action = Vec::with_capacity(n);
    let mut hit = vec![false; n];
    for j in 0..n {
        let mut target = None;
        for k in 0..n {
            match md.fusion.get(i, j, k) {
                0 => {}
                1 if target.is_none() => target = Some(k),
                _ => return None,
            }
        }
        let k = target?;
        if std::mem::replace(&mut hit[k], true) {
            return None;
        }
        action.push(k);
    }
    Some(action)
}

/// Detects all simple currents: quantum dimension 1 as a pre-filter, then a
/// permutation fusion row.
pub fn find_simple_currents(md: &ModularData, tolerance: f64) -> Result<PicardGroup> {
    let mut found: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..md.len() {
        if (md.quantum_dims[i] - 1.0).abs() >= tolerance {
            continue;
        }
        if let Some(action) = permutation_row(md, i) {
            found.push((i, action));
        }
    }
    let v = md.vacuum();
    found.sort_by_key(|(i, _)| (*i != v, *i));
    if found.first().map(|f| f.0) != Some(v) {
        return Err(Error::ClosureFailure("vacuum is not detected as a simple current".into()));
    }
    let n = found.len();
    let pos = |obj: usize| found.iter().position(|(o, _)| *o == obj);
    let mut table = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let obj = found[a].1[found[b].0];
            table[a][b] = pos(obj).ok_or_else(|| {
                Error::ClosureFailure(format!("{} x {} = {} is not a current", found[a].0, found[b].0, obj))
            })?;
        }
    }
    let table = GroupTable::new(table);
    if !table.is_abelian() || !table.is_associative() {
        return Err(Error::ClosureFailure("fusion of currents is not an abelian group law".into()));
    }
    let all: Vec<usize> = (0..n).collect();
    let invariant_factors = table.invariant_factors(&all);
    let elements = found
        .into_iter()
        .enumerate()
        .map(|(a, (object_index, action))| SimpleCurrent { object_index, action, order: table.element_order(a) })
        .collect::<Vec<_>>();
    let twists = elements.iter().map(|c| md.twist(c.object_index)).collect();
    Ok(PicardGroup { elements, table, invariant_factors, twists })
}

/// `Q_i(g) = h_{g i} - h_g - h_i mod 1`.
pub fn monodromy_charge(md: &ModularData, pg: &PicardGroup, i: usize, g: usize) -> Residue {
    let gi = pg.act(g, i);
    Residue::new(md.conformal_weights[gi] - md.conformal_weights[pg.object(g)] - md.conformal_weights[i])
}

/// Monodromy charges of every simple object with respect to every current.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeTable {
    /// `values[i][g]`.
    pub values: Vec<Vec<Residue>>,
}

impl ChargeTable {
    pub fn new(md: &ModularData, pg: &PicardGroup) -> Self {
        let values = (0..md.len())
            .map(|i| (0..pg.order()).map(|g| monodromy_charge(md, pg, i, g)).collect())
            .collect();
        Self { values }
    }

    pub fn get(&self, i: usize, g: usize) -> Residue {
        self.values[i][g]
    }
}

/// `q(g) = -h_g mod 1`.
pub fn quadratic_form(pg: &PicardGroup) -> Vec<Residue> {
    pg.twists.iter().map(|&t| -t).collect()
}

/// Outcome of [`verify_quadratic`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuadraticReport {
    pub homogeneity_checks: usize,
    pub biadditivity_checks: usize,
    pub charge_checks: usize,
    /// `b(g, h) = q(gh) - q(g) - q(h)`.
    pub bilinear_form: Vec<Vec<Residue>>,
    pub nondegenerate: bool,
}

/// Checks that `q(g^n) = n^2 q(g)`, that the associated `b` is bi-additive,
/// and that `b(g, h) = -Q_g(h)`.
pub fn verify_quadratic(md: &ModularData, pg: &PicardGroup) -> Result<QuadraticReport> {
    let q = quadratic_form(pg);
    let n = pg.order();
    let exp = pg.exponent();
    let mut homogeneity_checks = 0;
    for g in 0..n {
        for m in 0..=exp {
            let gm = pg.table.pow(g, m);
            if q[gm] != q[g] * (m * m) as i64 {
                return Err(Error::QuadraticFormViolation { g, h: gm, detail: format!("q(g^{m}) != {m}^2 q(g)") });
            }
            homogeneity_checks += 1;
        }
    }
    let b: Vec<Vec<Residue>> = (0..n).map(|g| (0..n).map(|h| q[pg.mul(g, h)] - q[g] - q[h]).collect()).collect();
    let mut biadditivity_checks = 0;
    for g in 0..n {
        for g2 in 0..n {
            for h in 0..n {
                if b[pg.mul(g, g2)][h] != b[g][h] + b[g2][h] {
                    return Err(Error::QuadraticFormViolation { g, h, detail: "b is not bi-additive".into() });
                }
                biadditivity_checks += 1;
            }
        }
    }
    let mut charge_checks = 0;
    for g in 0..n {
        for h in 0..n {
            if b[g][h] != -monodromy_charge(md, pg, pg.object(g), h) {
                return Err(Error::QuadraticFormViolation { g, h, detail: "b(g,h) != -Q_g(h)".into() });
            }
            charge_checks += 1;
        }
    }
    let nondegenerate = (1..n).all(|g| (0..n).any(|h| !b[g][h].is_zero()));
    Ok(QuadraticReport { homogeneity_checks, biadditivity_checks, charge_checks, bilinear_form: b, nondegenerate })
}

/// A symmetry of the affine Dynkin diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagramAutomorphism {
    /// Node `i` is sent to `node_permutation[i]`.
    pub node_permutation: Vec<usize>,
    pub order: u64,
    pub source_current: usize,
}

impl DiagramAutomorphism {
    pub fn is_identity(&self) -> bool {
        self.node_permutation.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Transports affine labels along the node permutation.
    pub fn act_on_labels(&self, labels: &[u32]) -> Vec<u32> {
        let mut out = vec![0; labels.len()];
        for (i, &l) in labels.iter().enumerate() {
            out[self.node_permutation[i]] = l;
        }
        out
    }

    pub fn preserves(&self, affine_cartan: &[Vec<i64>]) -> bool {
        let p = &self.node_permutation;
        (0..p.len()).all(|i| (0..p.len()).all(|j| affine_cartan[p[i]][p[j]] == affine_cartan[i][j]))
    }
}

fn permutation_order(p: &[usize]) -> u64 {
    let mut cur: Vec<usize> = p.to_vec();
    let mut n = 1;
    while cur.iter().enumerate().any(|(i, &x)| i != x) {
        cur = cur.iter().map(|&x| p[x]).collect();
        n += 1;
    }
    n
}

/// Catalogued diagram symmetry sending the affine node 0 to `target`.
fn catalog_symmetry(series: Series, rank: usize, target: usize) -> Option<Vec<usize>> {
    let n = rank;
    let mut p: Vec<usize> = (0..=n).collect();
    if target == 0 {
        return Some(p);
    }
    match series {
        Series::A => {
            for (i, x) in p.iter_mut().enumerate() {
                *x = (i + target) % (n + 1);
            }
        }
        Series::B if target == 1 => p.swap(0, 1),
        Series::C if target == n => {
            for (i, x) in p.iter_mut().enumerate() {
                *x = n - i;
            }
        }
        Series::D if target == 1 => {
            p.swap(0, 1);
            p.swap(n - 1, n);
        }
        Series::D if target == n || target == n - 1 => {
            for (i, x) in p.iter_mut().enumerate().take(n - 1).skip(2) {
                *x = n - i;
            }
            let other = if target == n { n - 1 } else { n };
            if n % 2 == 0 {
                p[0] = target;
                p[target] = 0;
                p[1] = other;
                p[other] = 1;
            } else {
                // order 4: 0 -> target -> 1 -> other -> 0
                p[0] = target;
                p[target] = 1;
                p[1] = other;
                p[other] = 0;
            }
        }
        Series::E if n == 6 && (target == 1 || target == 6) => {
            // rotation 0 -> 1 -> 6, 2 -> 3 -> 5, 4 fixed
            let rot = [1, 6, 3, 5, 4, 2, 0];
            let inv = [6, 0, 5, 2, 4, 3, 1];
            p = if target == 1 { rot.to_vec() } else { inv.to_vec() };
        }
        Series::E if n == 7 && target == 7 => {
            p = vec![7, 6, 2, 5, 4, 3, 1, 0];
        }
        _ => return None,
    }
    Some(p)
}

/// The affine diagram symmetry attached to the current `g`, determined by
/// the node its object occupies (`g = k L_j`).
pub fn diagram_automorphism(md: &ModularData, pg: &PicardGroup, g: usize) -> Result<DiagramAutomorphism> {
    let ld = &md.level_data;
    let t = ld.lie_type;
    let labels = ld.affine_labels(&ld.weights[pg.object(g)]);
    let k = ld.level;
    let nodes: Vec<usize> = labels.iter().enumerate().filter(|(_, &l)| l != 0).map(|(i, _)| i).collect();
    let target = match nodes.as_slice() {
        [j] if labels[*j] == k => *j,
        _ => return Err(Error::UnsupportedSeries(format!("{t}: current {labels:?} is not of the form k L_j"))),
    };
    let perm = catalog_symmetry(t.series(), t.rank(), target)
        .ok_or_else(|| Error::UnsupportedSeries(format!("{t}: no symmetry sending node 0 to node {target}")))?;
    Ok(DiagramAutomorphism { order: permutation_order(&perm), node_permutation: perm, source_current: g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    fn setup(t: &str, k: u32) -> (ModularData, PicardGroup) {
        let md = ModularData::build(t.parse().unwrap(), k, &Config::default()).unwrap();
        let pg = find_simple_currents(&md, 1e-8).unwrap();
        (md, pg)
    }

    #[test]
    fn picard_examples() {
        for k in 1..=6 {
            let (_, pg) = setup("A1", k);
            assert_eq!(pg.invariant_factors, vec![2]);
            assert_eq!(pg.object(1), k as usize);
        }
        let (_, pg) = setup("A2", 2);
        assert_eq!(pg.invariant_factors, vec![3]);
        let (_, pg) = setup("D4", 1);
        assert_eq!(pg.invariant_factors, vec![2, 2]);
        let (_, pg) = setup("D5", 1);
        assert_eq!(pg.invariant_factors, vec![4]);
        let (_, pg) = setup("G2", 3);
        assert_eq!(pg.order(), 1);
        let (_, pg) = setup("E6", 1);
        assert_eq!(pg.invariant_factors, vec![3]);
    }

    #[test]
    fn a1_charges() {
        let (md, pg) = setup("A1", 5);
        for lam in 0..=5 {
            assert_eq!(monodromy_charge(&md, &pg, lam, 1), Residue::from_ratio(lam as i64, 2));
            assert!(monodromy_charge(&md, &pg, lam, 0).is_zero());
        }
        assert!(monodromy_charge(&md, &pg, 0, 1).is_zero());
    }

    #[test]
    fn quadratic_examples() {
        let (md, pg) = setup("A1", 4);
        let q = quadratic_form(&pg);
        assert!(q[0].is_zero());
        assert!(q[1].is_zero());
        verify_quadratic(&md, &pg).unwrap();
        let (md, pg) = setup("A2", 1);
        assert_eq!(quadratic_form(&pg)[1], Residue::from_ratio(2, 3));
        verify_quadratic(&md, &pg).unwrap();
        let (md, pg) = setup("D4", 1);
        let rep = verify_quadratic(&md, &pg).unwrap();
        assert!(rep.nondegenerate);
        let (md, pg) = setup("G2", 1);
        assert_eq!(verify_quadratic(&md, &pg).unwrap().charge_checks, 1);
    }

    #[test]
    fn tampered_twist_is_caught() {
        let (md, mut pg) = setup("A1", 3);
        pg.twists[1] = Residue::from_ratio(1, 3);
        assert!(matches!(verify_quadratic(&md, &pg), Err(Error::QuadraticFormViolation { .. })));
    }

    #[test]
    fn automorphisms_match_fusion_action() {
        let cases = [
            ("A1", 3),
            ("A2", 2),
            ("A3", 2),
            ("A4", 1),
            ("B2", 2),
            ("B3", 1),
            ("C2", 2),
            ("C3", 2),
            ("D3", 2),
            ("D4", 2),
            ("D5", 1),
            ("D6", 1),
            ("E6", 1),
        ];
        for (t, k) in cases {
            let (md, pg) = setup(t, k);
            let ac = md.level_data.root_system.affine_cartan();
            for g in 0..pg.order() {
                let aut = diagram_automorphism(&md, &pg, g).unwrap();
                assert!(aut.preserves(&ac), "{t} {k} g={g}");
                assert_eq!(aut.order, pg.elements[g].order, "{t} {k} g={g}");
                for (i, w) in md.level_data.weights.iter().enumerate() {
                    let moved = aut.act_on_labels(&md.level_data.affine_labels(w));
                    let j = md.level_data.from_affine_labels(&moved).unwrap();
                    assert_eq!(j, pg.act(g, i), "{t} {k} g={g} weight {w:?}");
                }
            }
        }
    }

    #[test]
    fn e7_symmetry_preserves_affine_diagram() {
        let rs = crate::lie::build_root_system("E7".parse().unwrap(), 8).unwrap();
        let perm = catalog_symmetry(Series::E, 7, 7).unwrap();
        let aut = DiagramAutomorphism { order: permutation_order(&perm), node_permutation: perm, source_current: 1 };
        assert!(aut.preserves(&rs.affine_cartan()));
        assert_eq!(aut.order, 2);
    }

    #[test]
    fn a_series_rotations() {
        let (md, pg) = setup("A1", 2);
        assert_eq!(diagram_automorphism(&md, &pg, 1).unwrap().node_permutation, vec![1, 0]);
        assert!(diagram_automorphism(&md, &pg, 0).unwrap().is_identity());
        let (md, pg) = setup("A3", 2);
        let j2 = pg.element_of_object(md.level_data.index_of(&crate::lie::Weight(vec![0, 2, 0])).unwrap()).unwrap();
        assert_eq!(diagram_automorphism(&md, &pg, j2).unwrap().node_permutation, vec![2, 3, 0, 1]);
    }
}
