//! Modular data of the category of integrable highest-weight modules of an
//! untwisted affine Lie algebra at positive integer level.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lie::{build_root_system, weyl_group, RootSystem, SimpleLieType, Weight, WeylElement};
use crate::residue::{rational_str, rational_vec, Rational, Residue};

pub type Matrix = Vec<Vec<Complex64>>;

/// Serde adapter writing a complex matrix as nested `[re, im]` pairs.
pub mod complex_matrix {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Complex64>], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<Vec<[f64; 2]>> = m.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Complex64>>, D::Error> {
        let pairs = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(pairs.into_iter().map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).collect())
    }
}

/// The set of level-`k` integrable weights, in canonical order.
#[derive(Debug, Clone)]
pub struct LevelData {
    pub lie_type: SimpleLieType,
    pub level: u32,
    pub weights: Vec<Weight>,
    pub vacuum_index: usize,
    pub root_system: RootSystem,
    index: HashMap<Weight, usize>,
}

impl LevelData {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Affine Dynkin labels `(l_0, l_1, .., l_r)` with `l_0 = k - sum a_i^vee l_i`.
    pub fn affine_labels(&self, w: &Weight) -> Vec<u32> {
        let used: i64 = w
            .labels()
            .iter()
            .zip(&self.root_system.comarks)
            .map(|(&l, &a)| l as i64 * a)
            .sum();
        let mut out = Vec::with_capacity(w.0.len() + 1);
        out.push((self.level as i64 - used) as u32);
        out.extend_from_slice(w.labels());
        out
    }

    /// Inverse of [`LevelData::affine_labels`]; `None` unless the labels sum
    /// correctly to the level.
    pub fn from_affine_labels(&self, labels: &[u32]) -> Option<usize> {
        let w = Weight(labels[1..].to_vec());
        let i = self.index_of(&w)?;
        (self.affine_labels(&w)[0] == labels[0]).then_some(i)
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.root_system.dual_coxeter
    }
}

/// Enumerates the integrable weights of `t` at level `k`.
pub fn integrable_weights(rs: &RootSystem, k: u32) -> Result<LevelData> {
    if k == 0 {
        return Err(Error::InvalidLevel);
    }
    let r = rs.rank();
    let mut out = Vec::new();
    let mut current = vec![0u32; r];
    fn rec(pos: usize, budget: i64, comarks: &[i64], cur: &mut Vec<u32>, out: &mut Vec<Weight>) {
        if pos == cur.len() {
            out.push(Weight(cur.clone()));
            return;
        }
        let a = comarks[pos];
        let mut l = 0;
        while l as i64 * a <= budget {
            cur[pos] = l;
            rec(pos + 1, budget - l as i64 * a, comarks, cur, out);
            l += 1;
        }
        cur[pos] = 0;
    }
    rec(0, k as i64, &rs.comarks, &mut current, &mut out);
    out.sort();
    let index = out.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    Ok(LevelData {
        lie_type: rs.lie_type,
        level: k,
        vacuum_index: 0,
        weights: out,
        root_system: rs.clone(),
        index,
    })
}

/// `h = (L, L + 2 rho) / (2 (k + h^vee))`.
pub fn conformal_weight(ld: &LevelData, w: &Weight) -> Result<Rational> {
    if ld.index_of(w).is_none() {
        return Err(Error::WeightNotIntegrable(w.0.clone()));
    }
    let x = w.as_i64();
    let x2rho: Vec<i64> = x.iter().map(|&l| l + 2).collect();
    let num = ld.root_system.inner(&x, &x2rho);
    Ok(num / Rational::from_integer(2 * (ld.level as i64 + ld.dual_coxeter())))
}

/// `c = k dim g / (k + h^vee)`.
pub fn central_charge(ld: &LevelData) -> Rational {
    let k = ld.level as i64;
    Rational::new(k * ld.root_system.dimension as i64, k + ld.dual_coxeter())
}

/// Kac-Peterson S-matrix from the alternating Weyl sum, normalized by
/// unitarity and by positivity of the vacuum entry.
pub fn kac_peterson_s(ld: &LevelData, weyl: &[WeylElement], tolerance: f64) -> Result<Matrix> {
    let rs = &ld.root_system;
    let r = rs.rank();
    let n = ld.len();
    let denom = rs.form_denominator();
    let big_n = denom * (ld.level as i64 + rs.dual_coxeter);
    let scaled_form: Vec<Vec<i64>> = rs
        .quadratic_form
        .iter()
        .map(|row| row.iter().map(|q| (q * Rational::from_integer(denom)).to_integer()).collect())
        .collect();
    let shifted: Vec<Vec<i64>> = ld.weights.iter().map(|w| w.0.iter().map(|&l| l as i64 + 1).collect()).collect();
    // u_M = (L F) (M + rho)
    let dual: Vec<Vec<i64>> = shifted
        .iter()
        .map(|m| (0..r).map(|i| (0..r).map(|j| scaled_form[i][j] * m[j]).sum()).collect())
        .collect();
    let roots: Vec<Complex64> = (0..big_n)
        .map(|m| {
            let a = -2.0 * std::f64::consts::PI * m as f64 / big_n as f64;
            Complex64::new(a.cos(), a.sin())
        })
        .collect();
    let raw: Matrix = shifted
        .par_iter()
        .map(|lam| {
            let orbit: Vec<(Vec<i64>, i8)> = weyl.iter().map(|w| (w.apply(lam), w.sign)).collect();
            dual.iter()
                .map(|u| {
                    let mut acc = Complex64::zero();
                    for (v, s) in &orbit {
                        let num: i64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                        let term = roots[num.rem_euclid(big_n) as usize];
                        if *s > 0 {
                            acc += term;
                        } else {
                            acc -= term;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let gram = mul_adjoint(&raw);
    let scale = gram[0][0].re;
    if !(scale > 0.0) {
        return Err(Error::NormalizationFailure("vanishing vacuum row".into()));
    }
    let dev = max_deviation_from_scaled_identity(&gram, scale) / scale;
    if dev > tolerance {
        return Err(Error::NormalizationFailure(format!(
            "raw S S^dagger deviates from a multiple of the identity by {dev:e}"
        )));
    }
    let v = raw[0][0];
    if v.norm() == 0.0 {
        return Err(Error::NormalizationFailure("vanishing vacuum entry".into()));
    }
    let gamma = v / v.norm() * scale.sqrt();
    let s: Matrix = raw.iter().map(|row| row.iter().map(|x| x / gamma).collect()).collect();
    let rel = modular_relations_s(&s);
    if rel.unitarity > tolerance || rel.symmetry > tolerance {
        return Err(Error::NormalizationFailure(format!(
            "unitarity {:e}, symmetry {:e}",
            rel.unitarity, rel.symmetry
        )));
    }
    debug_assert_eq!(s.len(), n);
    Ok(s)
}

pub(crate) fn mul_adjoint(a: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * a[j][k].conj()).sum()).collect())
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn max_deviation_from_scaled_identity(m: &Matrix, scale: f64) -> f64 {
    let mut dev: f64 = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let target = if i == j { scale } else { 0.0 };
            dev = dev.max((x - target).norm());
        }
    }
    dev
}

/// Max-abs deviation margins for the modular relations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModularRelations {
    pub symmetry: f64,
    pub unitarity: f64,
    pub st_cubed: f64,
    pub s_fourth: f64,
}

fn modular_relations_s(s: &Matrix) -> ModularRelations {
    let n = s.len();
    let mut symmetry: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            symmetry = symmetry.max((s[i][j] - s[j][i]).norm());
        }
    }
    let unitarity = max_deviation_from_scaled_identity(&mul_adjoint(s), 1.0);
    ModularRelations { symmetry, unitarity, ..Default::default() }
}

/// Symmetry, unitarity, `(ST)^3 = S^2` and `S^4 = 1` with
/// `T = diag exp(2 pi i (h - c/24))`.
pub fn modular_relations(s: &Matrix, t_exponents: &[Residue]) -> ModularRelations {
    let mut rel = modular_relations_s(s);
    let t: Vec<Complex64> = t_exponents.iter().map(Residue::phase).collect();
    let st: Matrix = s.iter().map(|row| row.iter().zip(&t).map(|(x, y)| x * y).collect()).collect();
    let st3 = matmul(&matmul(&st, &st), &st);
    let s2 = matmul(s, s);
    let s4 = matmul(&s2, &s2);
    let n = s.len();
    let mut st_cubed: f64 = 0.0;
    let mut s_fourth: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            st_cubed = st_cubed.max((st3[i][j] - s2[i][j]).norm());
            let id = if i == j { 1.0 } else { 0.0 };
            s_fourth = s_fourth.max((s4[i][j] - id).norm());
        }
    }
    rel.st_cubed = st_cubed;
    rel.s_fourth = s_fourth;
    rel
}

/// Dense fusion tensor `N_ij^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionTensor {
    n: usize,
    data: Vec<u32>,
}

impl FusionTensor {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0; n * n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        self.data[(i * self.n + j) * self.n + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: u32) {
        self.data[(i * self.n + j) * self.n + k] = v;
    }

    /// Non-zero entries as `(i, j, k, N)`, in lexicographic order.
    pub fn sparse(&self) -> Vec<(usize, usize, usize, u32)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if v != 0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    pub fn from_sparse(n: usize, entries: &[(usize, usize, usize, u32)]) -> Result<Self> {
        let mut t = Self::zeros(n);
        for &(i, j, k, v) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::Malformed(format!("fusion index ({i},{j},{k}) out of range")));
            }
            t.set(i, j, k, v);
        }
        Ok(t)
    }

    /// Returns the first `(i, j, k, l)` where `(ij)k != i(jk)`.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs: u64 = (0..n).map(|m| self.get(i, j, m) as u64 * self.get(m, k, l) as u64).sum();
                        let rhs: u64 = (0..n).map(|m| self.get(j, k, m) as u64 * self.get(i, m, l) as u64).sum();
                        if lhs != rhs {
                            return Some((i, j, k, l));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.get(i, j, k) == self.get(j, i, k))))
    }
}

/// Verlinde formula. Returns the tensor and the largest distance of a raw
/// entry from its rounded value.
pub fn verlinde_fusion(s: &Matrix, vacuum: usize, integrality_tolerance: f64) -> Result<(FusionTensor, f64)> {
    let n = s.len();
    let rows: Vec<Result<(Vec<u32>, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut block = vec![0u32; n * n];
            let mut dev: f64 = 0.0;
            for j in 0..n {
                for k in 0..n {
                    let mut acc = Complex64::zero();
                    for m in 0..n {
                        acc += s[i][m] * s[j][m] * s[k][m].conj() / s[vacuum][m];
                    }
                    let rounded = acc.re.round();
                    let d = (acc - Complex64::new(rounded, 0.0)).norm();
                    if d > integrality_tolerance {
                        return Err(Error::NonIntegerFusion { i, j, k, value: acc.re });
                    }
                    if rounded < 0.0 {
                        return Err(Error::NegativeFusion { i, j, k, value: rounded as i64 });
                    }
                    dev = dev.max(d);
                    block[j * n + k] = rounded as u32;
                }
            }
            Ok((block, dev))
        })
        .collect();
    let mut t = FusionTensor::zeros(n);
    let mut dev: f64 = 0.0;
    for (i, row) in rows.into_iter().enumerate() {
        let (block, d) = row?;
        dev = dev.max(d);
        t.data[i * n * n..(i + 1) * n * n].copy_from_slice(&block);
    }
    Ok((t, dev))
}

/// The permutation `C = S^2`, returned as `i -> i^vee`.
pub fn conjugation(s: &Matrix, tolerance: f64) -> Result<Vec<usize>> {
    let s2 = matmul(s, s);
    let n = s.len();
    let mut perm = Vec::with_capacity(n);
    for (i, row) in s2.iter().enumerate() {
        let mut hit = None;
        for (j, x) in row.iter().enumerate() {
            if (x - Complex64::new(1.0, 0.0)).norm() < tolerance {
                if hit.is_some() {
                    return Err(Error::NotAPermutation(i));
                }
                hit = Some(j);
            } else if x.norm() > tolerance {
                return Err(Error::NotAPermutation(i));
            }
        }
        perm.push(hit.ok_or(Error::NotAPermutation(i))?);
    }
    let mut seen = vec![false; n];
    for &p in &perm {
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotAPermutation(p));
        }
    }
    Ok(perm)
}

/// Modular data of `C(g, k)`.
#[derive(Debug, Clone)]
pub struct ModularData {
    pub level_data: LevelData,
    pub conformal_weights: Vec<Rational>,
    pub central_charge: Rational,
    pub t_exponents: Vec<Residue>,
    pub s_matrix: Matrix,
    pub fusion: FusionTensor,
    pub fusion_deviation: f64,
    pub quantum_dims: Vec<f64>,
    pub conjugation: Vec<usize>,
}

impl ModularData {
    pub fn build(t: SimpleLieType, level: u32, config: &Config) -> Result<Self> {
        let rs = build_root_system(t, config.rank_cap)?;
        let ld = integrable_weights(&rs, level)?;
        let weyl = weyl_group(&rs, config.weyl_cap)?;
        let s = kac_peterson_s(&ld, &weyl, config.tolerance)?;
        Self::assemble(ld, s, config)
    }

    fn assemble(ld: LevelData, s: Matrix, config: &Config) -> Result<Self> {
        let conformal_weights = ld
            .weights
            .iter()
            .map(|w| conformal_weight(&ld, w))
            .collect::<Result<Vec<_>>>()?;
        let c = central_charge(&ld);
        let t_exponents = conformal_weights
            .iter()
            .map(|h| Residue::new(h - c / Rational::from_integer(24)))
            .collect();
        let (fusion, fusion_deviation) = verlinde_fusion(&s, ld.vacuum_index, config.integrality_tolerance)?;
        let conj = conjugation(&s, config.tolerance)?;
        let v = ld.vacuum_index;
        let quantum_dims = (0..ld.len()).map(|i| (s[v][i] / s[v][v]).re).collect();
        Ok(Self {
            level_data: ld,
            conformal_weights,
            central_charge: c,
            t_exponents,
            s_matrix: s,
            fusion,
            fusion_deviation,
            quantum_dims,
            conjugation: conj,
        })
    }

    pub fn len(&self) -> usize {
        self.level_data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.level_data.is_empty()
    }

    pub fn lie_type(&self) -> SimpleLieType {
        self.level_data.lie_type
    }

    pub fn level(&self) -> u32 {
        self.level_data.level
    }

    pub fn vacuum(&self) -> usize {
        self.level_data.vacuum_index
    }

    /// `h_i mod 1`.
    pub fn twist(&self, i: usize) -> Residue {
        Residue::new(self.conformal_weights[i])
    }

    pub fn relations(&self) -> ModularRelations {
        modular_relations(&self.s_matrix, &self.t_exponents)
    }

    pub fn to_document(&self) -> ModularDataDocument {
        ModularDataDocument {
            lie_type: self.lie_type(),
            level: self.level(),
            weights: self.level_data.weights.clone(),
            vacuum_index: self.vacuum(),
            conformal_weights: self.conformal_weights.clone(),
            central_charge: self.central_charge,
            t_exponents: self.t_exponents.clone(),
            s_matrix: self.s_matrix.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect(),
            fusion: self.fusion.sparse(),
            fusion_deviation: self.fusion_deviation,
            quantum_dims: self.quantum_dims.clone(),
            conjugation: self.conjugation.clone(),
        }
    }

    /// Rebuilds modular data from a stored document, validating it against
    /// the recomputed weight set and exact phases.
    pub fn from_document(doc: &ModularDataDocument, config: &Config) -> Result<Self> {
        let rs = build_root_system(doc.lie_type, config.rank_cap)?;
        let ld = integrable_weights(&rs, doc.level)?;
        if ld.weights != doc.weights || doc.vacuum_index != ld.vacuum_index {
            return Err(Error::Malformed("weight list does not match the level".into()));
        }
        let n = ld.len();
        if doc.s_matrix.len() != n || doc.s_matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("S-matrix has the wrong shape".into()));
        }
        let s: Matrix = doc
            .s_matrix
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        let md = Self {
            conformal_weights: ld
                .weights
                .iter()
                .map(|w| conformal_weight(&ld, w))
                .collect::<Result<Vec<_>>>()?,
            central_charge: central_charge(&ld),
            t_exponents: doc.t_exponents.clone(),
            fusion: FusionTensor::from_sparse(n, &doc.fusion)?,
            fusion_deviation: doc.fusion_deviation,
            quantum_dims: doc.quantum_dims.clone(),
            conjugation: doc.conjugation.clone(),
            s_matrix: s,
            level_data: ld,
        };
        if md.conformal_weights != doc.conformal_weights
            || md.central_charge != doc.central_charge
            || md.quantum_dims.len() != n
            || md.conjugation.len() != n
            || md.t_exponents.len() != n
        {
            return Err(Error::Malformed("document disagrees with recomputed phases".into()));
        }
        Ok(md)
    }
}

/// JSON form of [`ModularData`]; the CLI output and cache format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModularDataDocument {
    pub lie_type: SimpleLieType,
    pub level: u32,
    pub weights: Vec<Weight>,
    pub vacuum_index: usize,
    #[serde(with = "rational_vec")]
    pub conformal_weights: Vec<Rational>,
    #[serde(with = "rational_str")]
    pub central_charge: Rational,
    pub t_exponents: Vec<Residue>,
    pub s_matrix: Vec<Vec<[f64; 2]>>,
    pub fusion: Vec<(usize, usize, usize, u32)>,
    pub fusion_deviation: f64,
    pub quantum_dims: Vec<f64>,
    pub conjugation: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn md(t: &str, k: u32) -> ModularData {
        ModularData::build(t.parse().unwrap(), k, &Config::default()).unwrap()
    }

    fn level(t: &str, k: u32) -> LevelData {
        let rs = build_root_system(t.parse().unwrap(), 8).unwrap();
        integrable_weights(&rs, k).unwrap()
    }

    #[test]
    fn weight_enumeration() {
        let ld = level("A1", 2);
        assert_eq!(ld.weights, vec![Weight(vec![0]), Weight(vec![1]), Weight(vec![2])]);
        let ld = level("A2", 1);
        assert_eq!(ld.weights, vec![Weight(vec![0, 0]), Weight(vec![0, 1]), Weight(vec![1, 0])]);
        assert_eq!(level("A3", 2).len(), 10);
        assert_eq!(level("G2", 4).len(), 9);
        assert_eq!(level("D4", 2).len(), 11);
        assert_eq!(ld.vacuum_index, 0);
        let rs = build_root_system("A1".parse().unwrap(), 8).unwrap();
        assert_eq!(integrable_weights(&rs, 0).unwrap_err(), Error::InvalidLevel);
    }

    #[test]
    fn conformal_weights_and_central_charge() {
        let ld = level("A1", 2);
        assert_eq!(conformal_weight(&ld, &Weight(vec![0])).unwrap(), Rational::from_integer(0));
        assert_eq!(conformal_weight(&ld, &Weight(vec![1])).unwrap(), Rational::new(3, 16));
        assert_eq!(central_charge(&ld), Rational::new(3, 2));
        assert!(matches!(
            conformal_weight(&ld, &Weight(vec![3])),
            Err(Error::WeightNotIntegrable(_))
        ));
        assert_eq!(central_charge(&level("A2", 1)), Rational::from_integer(2));
        for k in 1..6 {
            let ld = level("A2", k);
            let h = conformal_weight(&ld, &Weight(vec![k, 0])).unwrap();
            assert_eq!(h, Rational::new(k as i64, 3));
        }
    }

    #[test]
    fn a1_matches_closed_form() {
        for k in 1..=10 {
            let m = md("A1", k);
            let err = oracle::max_abs_diff(&m.s_matrix, &oracle::a1_s_matrix(k));
            assert!(err < 1e-9, "k={k}: {err}");
        }
    }

    #[test]
    fn a2_level_one() {
        let m = md("A2", 1);
        for row in &m.s_matrix {
            for z in row {
                assert!((z.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
            }
        }
        // Z_3 group ring
        for a in 0..3 {
            for b in 0..3 {
                let c = (0..3).filter(|&c| m.fusion.get(a, b, c) == 1).collect::<Vec<_>>();
                assert_eq!(c.len(), 1);
            }
        }
        assert_eq!(m.conjugation, vec![0, 2, 1]);
    }

    #[test]
    fn a1_fusion_is_truncated_clebsch_gordan() {
        for k in 1..=8 {
            let m = md("A1", k);
            assert_eq!(m.fusion, oracle::a1_fusion(k));
            assert_eq!(m.conjugation, (0..=k as usize).collect::<Vec<_>>());
        }
    }

    #[test]
    fn vacuum_row_is_identity() {
        let m = md("B2", 3);
        let n = m.len();
        for j in 0..n {
            for k in 0..n {
                assert_eq!(m.fusion.get(0, j, k), u32::from(j == k));
            }
        }
        assert!((m.quantum_dims[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relations_hold() {
        for (t, k) in [("A1", 3), ("A2", 2), ("G2", 2), ("D4", 1), ("C3", 1)] {
            let rel = md(t, k).relations();
            assert!(rel.symmetry < 1e-8 && rel.unitarity < 1e-8, "{t} {k}");
            assert!(rel.st_cubed < 1e-8, "{t} {k} st^3 {}", rel.st_cubed);
            assert!(rel.s_fourth < 1e-8, "{t} {k}");
        }
    }

    #[test]
    fn tight_tolerance_surfaces_normalization_failure() {
        let cfg = Config { tolerance: 1e-18, ..Config::default() };
        let err = ModularData::build("A2".parse().unwrap(), 4, &cfg).unwrap_err();
        assert!(matches!(err, Error::NormalizationFailure(_)), "{err:?}");
    }

    #[test]
    fn document_round_trip() {
        let m = md("A2", 2);
        let doc = m.to_document();
        let json = serde_json::to_string(&doc).unwrap();
        let back: ModularDataDocument = serde_json::from_str(&json).unwrap();
        for (a, b) in back.s_matrix.iter().flatten().zip(doc.s_matrix.iter().flatten()) {
            assert_eq!(a, b);
        }
        assert_eq!(back.quantum_dims, doc.quantum_dims);
        assert_eq!(back, doc);
        let rebuilt = ModularData::from_document(&back, &Config::default()).unwrap();
        assert_eq!(rebuilt.to_document(), doc);
        assert!(json.contains("\"centralCharge\":\"16/5\""));
    }

    #[test]
    fn noninteger_fusion_detected() {
        let mut s = oracle::a1_s_matrix(3);
        s[1][2] += Complex64::new(1e-2, 0.0);
        assert!(matches!(verlinde_fusion(&s, 0, 1e-6), Err(Error::NonIntegerFusion { .. })));
    }
}
