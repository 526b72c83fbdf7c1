//! Twining S-matrices for simple-current diagram automorphisms and the
//! gauge-invariant 6j-symbols `phi` they determine.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::{Matrix, ModularData};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::lie::{Series, SimpleLieType, Weight};
use crate::picard::{diagram_automorphism, monodromy_charge, PicardGroup};
use crate::residue::Residue;
use crate::schellekens::SchellekensAlgebra;

pub use crate::picard::DiagramAutomorphism;

/// Weights fixed by the current `g` under the fusion action.
pub fn fixed_points(md: &ModularData, pg: &PicardGroup, g: usize) -> Vec<usize> {
    (0..md.len()).filter(|&i| pg.act(g, i) == i).collect()
}

/// The algebra whose ordinary S-matrix supplies the twining matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum FoldedAlgebra {
    /// Trivial automorphism: the original algebra.
    Identity,
    /// A single orbit of nodes: one fixed point, `S = [1]`.
    Point,
    Affine {
        #[serde(rename = "type")]
        lie_type: SimpleLieType,
        level: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitAlgebraData {
    pub automorphism: DiagramAutomorphism,
    pub folded: FoldedAlgebra,
    pub fixed_points: Vec<usize>,
    /// Folded Dynkin labels of each fixed point, in `fixed_points` order.
    pub weight_map: Vec<Weight>,
}

impl OrbitAlgebraData {
    pub fn folded_rank(&self) -> usize {
        match &self.folded {
            FoldedAlgebra::Identity => self.automorphism.node_permutation.len() - 1,
            FoldedAlgebra::Point => 0,
            FoldedAlgebra::Affine { lie_type, .. } => lie_type.rank(),
        }
    }
}

/// Rotation amount `m` if `perm` is `i -> i + m mod len`.
fn rotation_amount(perm: &[usize]) -> Option<usize> {
    let n = perm.len();
    let m = perm[0];
    perm.iter().enumerate().all(|(i, &p)| p == (i + m) % n).then_some(m)
}

pub fn fold_diagram(md: &ModularData, aut: &DiagramAutomorphism) -> Result<OrbitAlgebraData> {
    let ld = &md.level_data;
    let t = ld.lie_type;
    let k = ld.level;
    let fixed: Vec<usize> = (0..md.len())
        .filter(|&i| {
            let l = ld.affine_labels(&ld.weights[i]);
            aut.act_on_labels(&l) == l
        })
        .collect();
    if aut.is_identity() {
        let weight_map = fixed.iter().map(|&i| ld.weights[i].clone()).collect();
        return Ok(OrbitAlgebraData { automorphism: aut.clone(), folded: FoldedAlgebra::Identity, fixed_points: fixed, weight_map });
    }
    let m = match (t.series(), rotation_amount(&aut.node_permutation)) {
        (Series::A, Some(m)) => m,
        _ => return Err(Error::UnsupportedFolding(format!("{t}: node permutation {:?}", aut.node_permutation))),
    };
    let nodes = t.rank() + 1;
    let r = num_integer::gcd(m, nodes);
    let d = (nodes / r) as u32;
    if k % d != 0 || fixed.is_empty() {
        return Err(Error::UnsupportedFolding(format!("{t} level {k}: automorphism of order {d} has no fixed points")));
    }
    let weight_map: Vec<Weight> = fixed
        .iter()
        .map(|&i| Weight(ld.affine_labels(&ld.weights[i])[1..r].to_vec()))
        .collect();
    let folded = if r == 1 {
        FoldedAlgebra::Point
    } else {
        FoldedAlgebra::Affine { lie_type: SimpleLieType::new(Series::A, r - 1)?, level: k / d }
    };
    Ok(OrbitAlgebraData { automorphism: aut.clone(), folded, fixed_points: fixed, weight_map })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TwiningSMatrix {
    pub current: usize,
    pub fixed_points: Vec<usize>,
    pub folding: OrbitAlgebraData,
    #[serde(with = "crate::affine::complex_matrix")]
    pub matrix: Matrix,
}

impl TwiningSMatrix {
    pub fn size(&self) -> usize {
        self.fixed_points.len()
    }

    pub fn position(&self, weight: usize) -> Option<usize> {
        self.fixed_points.iter().position(|&w| w == weight)
    }

    /// `max(|S S^dagger - 1|, |S - S^T|)`.
    pub fn unitarity_symmetry_defect(&self) -> f64 {
        let s = &self.matrix;
        let n = s.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = (0..n).map(|k| s[i][k] * s[j][k].conj()).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - id).norm()).max((s[i][j] - s[j][i]).norm());
            }
        }
        worst
    }
}

pub fn twining_s(md: &ModularData, pg: &PicardGroup, g: usize, config: &Config) -> Result<TwiningSMatrix> {
    let aut = diagram_automorphism(md, pg, g)?;
    let folding = fold_diagram(md, &aut)?;
    let fixed = folding.fixed_points.clone();
    let mut matrix: Matrix = match &folding.folded {
        FoldedAlgebra::Identity => md.s_matrix.clone(),
        FoldedAlgebra::Point => vec![vec![Complex64::new(1.0, 0.0)]],
        FoldedAlgebra::Affine { lie_type, level } => {
            let folded = ModularData::build(*lie_type, *level, config)?;
            let idx: Vec<usize> = folding
                .weight_map
                .iter()
                .map(|w| folded.level_data.index_of(w).ok_or_else(|| Error::WeightNotIntegrable(w.0.clone())))
                .collect::<Result<_>>()?;
            if idx.len() != folded.len() {
                return Err(Error::NormalizationFailure(format!(
                    "{} fixed points but the folded algebra has {} weights",
                    idx.len(),
                    folded.len()
                )));
            }
            idx.iter().map(|&a| idx.iter().map(|&b| folded.s_matrix[a][b]).collect()).collect()
        }
    };
    // fix the overall scalar by the minimal-h fixed point
    let mut order: Vec<usize> = (0..fixed.len()).collect();
    order.sort_by(|&a, &b| md.conformal_weights[fixed[a]].cmp(&md.conformal_weights[fixed[b]]).then(a.cmp(&b)));
    let m = order[0];
    let pivot = if matrix[m][m].norm() > config.tolerance {
        matrix[m][m]
    } else {
        *matrix[m].iter().find(|z| z.norm() > config.tolerance).ok_or_else(|| {
            Error::NormalizationFailure("row of the minimal fixed point vanishes".into())
        })?
    };
    let phase = pivot.conj() / pivot.norm();
    for row in matrix.iter_mut() {
        for z in row.iter_mut() {
            *z *= phase;
        }
    }
    let sw = TwiningSMatrix { current: g, fixed_points: fixed, folding, matrix };
    let defect = sw.unitarity_symmetry_defect();
    if defect > config.tolerance {
        return Err(Error::NormalizationFailure(format!("twining matrix unitarity/symmetry defect {defect:e}")));
    }
    Ok(sw)
}

/// Value of `phi_{L'}(g, h)` for the current `g` of a twining matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhiEntry {
    pub fixed_point: usize,
    pub g: usize,
    pub h: usize,
    pub value: Residue,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhiTable {
    pub entries: Vec<PhiEntry>,
}

impl PhiTable {
    pub fn get(&self, fixed_point: usize, g: usize, h: usize) -> Option<Residue> {
        self.entries
            .iter()
            .find(|e| e.fixed_point == fixed_point && e.g == g && e.h == h)
            .map(|e| e.value)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn extend(&mut self, other: PhiTable) {
        for e in other.entries {
            if self.get(e.fixed_point, e.g, e.h).is_none() {
                self.entries.push(e);
            }
        }
    }
}

/// Unsnapped `phi_{L'}(g, h)`: the reference-averaged phase and the spread
/// of the complex ratio over all usable reference weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiCandidate {
    pub fixed_point: usize,
    pub value: Complex64,
    pub spread: f64,
}

/// For each fixed `L'`, the ratio
/// `exp(2 pi i Q_L(h)) conj(S^w_{L,L'}) / conj(S^w_{L,hL'})` over references
/// `L` with `S^w_{L,hL'} != 0`. Residues carry `theta = exp(2 pi i h)`
/// while the S-matrix carries the opposite sign, hence the conjugates.
pub fn phi_candidates(md: &ModularData, pg: &PicardGroup, sw: &TwiningSMatrix, h: usize, tolerance: f64) -> Result<Vec<PhiCandidate>> {
    let s = &sw.matrix;
    sw.fixed_points
        .iter()
        .enumerate()
        .map(|(b, &lp)| {
            let hb = sw.position(pg.act(h, lp)).ok_or_else(|| {
                Error::UnsupportedFolding(format!("current {h} does not preserve the fixed points of {}", sw.current))
            })?;
            let values: Vec<Complex64> = sw
                .fixed_points
                .iter()
                .enumerate()
                .filter(|&(a, _)| s[a][hb].norm() > tolerance.sqrt())
                .map(|(a, &l)| {
                    let q = monodromy_charge(md, pg, l, h).phase();
                    q * s[a][b].conj() / s[a][hb].conj()
                })
                .collect();
            if values.is_empty() {
                return Err(Error::NormalizationFailure(format!("column {lp} of the twining matrix vanishes")));
            }
            let mean = values.iter().sum::<Complex64>() / values.len() as f64;
            let spread = values.iter().map(|v| (v - values[0]).norm()).fold(0.0, f64::max);
            Ok(PhiCandidate { fixed_point: lp, value: mean, spread })
        })
        .collect()
}

/// Snap a unit complex number to `exp(2 pi i r)` with `r` in `(1/n) Z / Z`.
fn snap_phase(z: Complex64, n: u64) -> (Residue, f64) {
    let (r, dist) = Residue::snap(z.arg() / (2.0 * std::f64::consts::PI), n);
    (r, dist.max((z.norm() - 1.0).abs()))
}

const SNAP_TOLERANCE: f64 = 1e-6;

pub fn extract_phi(md: &ModularData, pg: &PicardGroup, sw: &TwiningSMatrix, h: usize, tolerance: f64) -> Result<PhiTable> {
    let exponent = pg.exponent();
    let mut entries = Vec::new();
    for c in phi_candidates(md, pg, sw, h, tolerance)? {
        if c.spread >= tolerance {
            return Err(Error::LambdaDependence { fixed_point: c.fixed_point, spread: c.spread });
        }
        let (value, dist) = snap_phase(c.value, exponent);
        if dist > SNAP_TOLERANCE {
            return Err(Error::SnapFailure { phase: c.value.arg() / (2.0 * std::f64::consts::PI), exponent });
        }
        entries.push(PhiEntry { fixed_point: c.fixed_point, g: sw.current, h, value });
    }
    Ok(PhiTable { entries })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureCheck {
    pub name: String,
    pub g: usize,
    pub h: Option<usize>,
    pub pass: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureReport {
    pub currents: Vec<usize>,
    pub checks: Vec<ConjectureCheck>,
    pub phi: PhiTable,
    pub pass: bool,
}

impl ConjectureReport {
    pub fn max_margin(&self, name: &str) -> f64 {
        self.checks.iter().filter(|c| c.name == name).map(|c| c.margin).fold(0.0, f64::max)
    }

    pub fn check_passes(&self, name: &str) -> bool {
        self.checks.iter().filter(|c| c.name == name).all(|c| c.pass)
    }
}

/// Checks on one twining matrix: unitarity and symmetry, reference
/// independence of `phi` for every current `h`, snapping, additivity in `h`
/// and the twist diagonal.
pub fn conjecture_checks(md: &ModularData, pg: &PicardGroup, sw: &TwiningSMatrix, tolerance: f64) -> (Vec<ConjectureCheck>, PhiTable) {
    let g = sw.current;
    let check = |name: &str, h: Option<usize>, pass: bool, margin: f64| ConjectureCheck { name: name.into(), g, h, pass, margin };
    let mut checks = Vec::new();
    let defect = sw.unitarity_symmetry_defect();
    checks.push(check("unitary-symmetric", None, defect < tolerance, defect));

    let exponent = pg.exponent();
    let per_h: Vec<(usize, Result<Vec<PhiCandidate>>)> =
        (0..pg.order()).into_par_iter().map(|h| (h, phi_candidates(md, pg, sw, h, tolerance))).collect();
    let mut phi = PhiTable::default();
    let mut complete = true;
    for (h, cands) in per_h {
        match cands {
            Err(_) => {
                complete = false;
                checks.push(check("lambda-independence", Some(h), false, f64::INFINITY));
            }
            Ok(cands) => {
                let spread = cands.iter().map(|c| c.spread).fold(0.0, f64::max);
                checks.push(check("lambda-independence", Some(h), spread < tolerance, spread));
                let mut worst: f64 = 0.0;
                for c in &cands {
                    let (value, dist) = snap_phase(c.value, exponent);
                    worst = worst.max(dist);
                    phi.entries.push(PhiEntry { fixed_point: c.fixed_point, g, h, value });
                }
                complete &= worst <= SNAP_TOLERANCE;
                checks.push(check("snap", Some(h), worst <= SNAP_TOLERANCE, worst));
            }
        }
    }
    if complete {
        let mut violations = 0usize;
        for &lp in &sw.fixed_points {
            for h1 in 0..pg.order() {
                for h2 in 0..pg.order() {
                    let lhs = phi.get(lp, g, pg.mul(h1, h2));
                    let rhs = phi.get(pg.act(h2, lp), g, h1).zip(phi.get(lp, g, h2)).map(|(a, b)| a + b);
                    if lhs.is_none() || lhs != rhs {
                        violations += 1;
                    }
                }
            }
        }
        checks.push(check("additivity", None, violations == 0, violations as f64));
        let diag_violations = sw.fixed_points.iter().filter(|&&lp| phi.get(lp, g, g) != Some(pg.twists[g])).count();
        checks.push(check("ksb-diagonal", None, diag_violations == 0, diag_violations as f64));
    } else {
        checks.push(check("additivity", None, false, f64::INFINITY));
        checks.push(check("ksb-diagonal", None, false, f64::INFINITY));
    }
    let ok = checks.iter().all(|c| c.pass);
    (checks, if ok { phi } else { PhiTable::default() })
}

/// Runs [`conjecture_checks`] for every current of the support that has
/// fixed points. Check failures are findings in the report; only an
/// unsupported folding is an error.
pub fn verify_conjecture(md: &ModularData, pg: &PicardGroup, algebra: &SchellekensAlgebra, config: &Config) -> Result<ConjectureReport> {
    let mut currents = Vec::new();
    let mut checks = Vec::new();
    let mut phi = PhiTable::default();
    for &g in &algebra.support().elements {
        if fixed_points(md, pg, g).is_empty() {
            continue;
        }
        let sw = twining_s(md, pg, g, config)?;
        let (c, p) = conjecture_checks(md, pg, &sw, config.tolerance);
        currents.push(g);
        checks.extend(c);
        phi.extend(p);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(ConjectureReport { currents, checks, phi, pass })
}
