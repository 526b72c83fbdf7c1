//! Root systems and Weyl groups of the simple Lie algebras.
//!
//! Simple roots are numbered as in Bourbaki. The invariant form is normalized
//! so that long roots have squared length 2.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::{denominator_lcm, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

/// A simple Lie algebra, identified by its Cartan type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleLieType {
    series: Series,
    rank: usize,
}

impl SimpleLieType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(Self { series, rank })
        } else {
            Err(Error::InvalidLieType(format!("{}{}", series.letter(), rank)))
        }
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for SimpleLieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for SimpleLieType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('E') => Series::E,
            Some('F') => Series::F,
            Some('G') => Series::G,
            _ => return Err(Error::InvalidLieType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidLieType(s.to_string()))?;
        SimpleLieType::new(series, rank)
    }
}

impl Serialize for SimpleLieType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SimpleLieType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A weight in the basis of fundamental weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<u32>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }
}

/// Lie-theoretic data of a simple Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    pub lie_type: SimpleLieType,
    /// `cartan[i][j] = 2 (a_i, a_j) / (a_j, a_j)`; row `i` holds the Dynkin
    /// labels of the simple root `a_i`.
    pub cartan: Vec<Vec<i64>>,
    /// Gram matrix of the simple roots.
    pub root_products: Vec<Vec<Rational>>,
    /// Gram matrix of the fundamental weights.
    pub quadratic_form: Vec<Vec<Rational>>,
    pub weyl_vector: Weight,
    pub dual_coxeter: i64,
    /// Coefficients of the highest root in the simple-root basis.
    pub marks: Vec<i64>,
    pub comarks: Vec<i64>,
    pub dimension: usize,
    pub positive_roots: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.lie_type.rank
    }

    pub fn positive_root_count(&self) -> usize {
        self.positive_roots.len()
    }

    /// `(x, y)` for weights given by (possibly negative) Dynkin labels.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> Rational {
        let mut acc = Rational::zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj != 0 {
                    acc += self.quadratic_form[i][j] * Rational::from_integer(xi * yj);
                }
            }
        }
        acc
    }

    /// Common denominator of the quadratic form entries.
    pub fn form_denominator(&self) -> i64 {
        denominator_lcm(self.quadratic_form.iter().flatten())
    }

    /// Gram matrix of the affine simple roots `a_0 = -theta, a_1, .., a_r`.
    pub fn affine_root_products(&self) -> Vec<Vec<Rational>> {
        let r = self.rank();
        let theta_dot = |j: usize| -> Rational {
            (0..r)
                .map(|i| Rational::from_integer(self.marks[i]) * self.root_products[i][j])
                .sum()
        };
        let mut g = vec![vec![Rational::zero(); r + 1]; r + 1];
        g[0][0] = Rational::from_integer(2);
        for j in 0..r {
            let v = -theta_dot(j);
            g[0][j + 1] = v;
            g[j + 1][0] = v;
            for i in 0..r {
                g[i + 1][j + 1] = self.root_products[i][j];
            }
        }
        g
    }

    /// Affine Cartan matrix, rows and columns indexed by nodes `0..=rank`.
    pub fn affine_cartan(&self) -> Vec<Vec<i64>> {
        let g = self.affine_root_products();
        let n = g.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = Rational::from_integer(2) * g[i][j] / g[j][j];
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect()
    }
}

fn gram_matrix(t: SimpleLieType) -> Vec<Vec<Rational>> {
    let r = t.rank;
    let mut g = vec![vec![Rational::zero(); r]; r];
    let half = Rational::new(1, 2);
    let one = Rational::one();
    let two = Rational::from_integer(2);
    let link = |g: &mut Vec<Vec<Rational>>, i: usize, j: usize, v: Rational| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match t.series {
        Series::A | Series::D | Series::E => {
            for i in 0..r {
                g[i][i] = two;
            }
            match t.series {
                Series::A => {
                    for i in 0..r - 1 {
                        link(&mut g, i, i + 1, -one);
                    }
                }
                Series::D => {
                    for i in 0..r - 2 {
                        link(&mut g, i, i + 1, -one);
                    }
                    link(&mut g, r - 3, r - 1, -one);
                }
                _ => {
                    // 1-3-4-5-6-7-8 with 2 attached to 4
                    link(&mut g, 0, 2, -one);
                    link(&mut g, 1, 3, -one);
                    for i in 2..r - 1 {
                        link(&mut g, i, i + 1, -one);
                    }
                }
            }
        }
        Series::B => {
            for i in 0..r - 1 {
                g[i][i] = two;
                link(&mut g, i, i + 1, -one);
            }
            g[r - 1][r - 1] = one;
        }
        Series::C => {
            for i in 0..r - 1 {
                g[i][i] = one;
            }
            for i in 0..r - 2 {
                link(&mut g, i, i + 1, -half);
            }
            g[r - 1][r - 1] = two;
            link(&mut g, r - 2, r - 1, -one);
        }
        Series::F => {
            g[0][0] = two;
            g[1][1] = two;
            g[2][2] = one;
            g[3][3] = one;
            link(&mut g, 0, 1, -one);
            link(&mut g, 1, 2, -one);
            link(&mut g, 2, 3, -half);
        }
        Series::G => {
            g[0][0] = Rational::new(2, 3);
            g[1][1] = two;
            link(&mut g, 0, 1, -one);
        }
    }
    g
}

fn invert(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular Gram matrix");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (x, y) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * x;
                    inv[r][j] -= f * y;
                }
            }
        }
    }
    inv
}

fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = cartan.len();
    let simple: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut known: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut all = simple.clone();
    let mut layer = simple;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..r {
                // <beta, a_i^vee>
                let pairing: i64 = (0..r).map(|j| beta[j] * cartan[j][i]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Tabulated root-system data for `t`. Fails if the rank exceeds `rank_cap`.
pub fn build_root_system(t: SimpleLieType, rank_cap: usize) -> Result<RootSystem> {
    if t.rank > rank_cap {
        return Err(Error::UnsupportedRank { rank: t.rank, cap: rank_cap });
    }
    let r = t.rank;
    let gram = gram_matrix(t);
    let cartan: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| (Rational::from_integer(2) * gram[i][j] / gram[j][j]).to_integer())
                .collect()
        })
        .collect();
    let gram_inv = invert(&gram);
    // (L_i, L_j) = (a_i,a_i)/2 * (G^-1)_ij * (a_j,a_j)/2
    let quadratic_form: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| gram[i][i] * gram_inv[i][j] * gram[j][j] / Rational::from_integer(4))
                .collect()
        })
        .collect();
    let roots = positive_roots(&cartan);
    let marks = roots
        .iter()
        .max_by_key(|c| c.iter().sum::<i64>())
        .cloned()
        .expect("nonempty root system");
    let comarks: Vec<i64> = (0..r)
        .map(|i| (Rational::from_integer(marks[i]) * gram[i][i] / Rational::from_integer(2)).to_integer())
        .collect();
    let dual_coxeter = 1 + comarks.iter().sum::<i64>();
    Ok(RootSystem {
        lie_type: t,
        cartan,
        root_products: gram,
        quadratic_form,
        weyl_vector: Weight(vec![1; r]),
        dual_coxeter,
        marks,
        comarks,
        dimension: r + 2 * roots.len(),
        positive_roots: roots,
    })
}

/// A Weyl group element as an integer matrix on Dynkin labels
/// (`w(x)_i = sum_j matrix[i][j] x_j`) with its determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: Vec<Vec<i64>>,
    pub sign: i8,
}

impl WeylElement {
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// All Weyl group elements, by breadth-first closure over the simple
/// reflections. Fails once more than `cap` elements have been produced.
pub fn weyl_group(rs: &RootSystem, cap: usize) -> Result<Vec<WeylElement>> {
    let r = rs.rank();
    // s_i(x)_j = x_j - x_i * cartan[i][j]
    let reflections: Vec<Vec<Vec<i64>>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    (0..r)
                        .map(|l| i64::from(j == l) - if l == i { rs.cartan[i][j] } else { 0 })
                        .collect()
                })
                .collect()
        })
        .collect();
    let identity: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen: HashMap<Vec<Vec<i64>>, i8> = HashMap::new();
    seen.insert(identity.clone(), 1);
    let mut order = vec![identity.clone()];
    let mut frontier = vec![identity];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            let sign = -seen[w];
            for s in &reflections {
                let ws = matmul(s, w);
                if !seen.contains_key(&ws) {
                    if seen.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    seen.insert(ws.clone(), sign);
                    order.push(ws.clone());
                    next.push(ws);
                }
            }
        }
        frontier = next;
    }
    Ok(order
        .into_iter()
        .map(|m| {
            let sign = seen[&m];
            WeylElement { matrix: m, sign }
        })
        .collect())
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        build_root_system(s.parse().unwrap(), 8).unwrap()
    }

    #[test]
    fn a1_data() {
        let a1 = rs("A1");
        assert_eq!(a1.cartan, vec![vec![2]]);
        assert_eq!(a1.dual_coxeter, 2);
        assert_eq!(a1.dimension, 3);
        assert_eq!(a1.quadratic_form, vec![vec![Rational::new(1, 2)]]);
    }

    #[test]
    fn tabulated_invariants() {
        // (type, h^vee, dim g, |W|)
        let table = [
            ("A2", 3, 8, 6),
            ("A3", 4, 15, 24),
            ("B2", 3, 10, 8),
            ("B3", 5, 21, 48),
            ("C3", 4, 21, 48),
            ("D4", 6, 28, 192),
            ("D5", 8, 45, 1920),
            ("G2", 4, 14, 12),
            ("F4", 9, 52, 1152),
            ("E6", 12, 78, 51840),
        ];
        for (name, hv, dim, w) in table {
            let r = rs(name);
            assert_eq!(r.dual_coxeter, hv, "{name}");
            assert_eq!(r.dimension, dim, "{name}");
            assert_eq!(r.dimension, r.rank() + 2 * r.positive_root_count());
            assert_eq!(weyl_group(&r, 1_000_000).unwrap().len(), w, "{name}");
        }
    }

    #[test]
    fn e7_e8_dimensions() {
        for (name, hv, dim) in [("E7", 18, 133), ("E8", 30, 248)] {
            let r = rs(name);
            assert_eq!(r.dual_coxeter, hv);
            assert_eq!(r.dimension, dim);
        }
    }

    #[test]
    fn cartan_shape_and_positive_form() {
        for name in ["A4", "B4", "C4", "D6", "E6", "F4", "G2"] {
            let r = rs(name);
            for i in 0..r.rank() {
                assert_eq!(r.cartan[i][i], 2);
                for j in 0..r.rank() {
                    if i != j {
                        assert!(r.cartan[i][j] <= 0);
                    }
                    assert_eq!(r.quadratic_form[i][j], r.quadratic_form[j][i]);
                }
            }
            // Sylvester: all leading minors positive
            let n = r.rank();
            for m in 1..=n {
                let sub: Vec<Vec<Rational>> =
                    (0..m).map(|i| r.quadratic_form[i][..m].to_vec()).collect();
                assert!(determinant(&sub) > Rational::zero(), "{name}");
            }
        }
    }

    fn determinant(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        let mut a = m.to_vec();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c];
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                for j in c..n {
                    let v = a[c][j];
                    a[r][j] -= f * v;
                }
            }
        }
        det
    }

    #[test]
    fn weyl_signs_and_cap() {
        let a2 = rs("A2");
        let w = weyl_group(&a2, 100).unwrap();
        assert_eq!(w.iter().filter(|e| e.sign == 1).count(), 3);
        assert_eq!(weyl_group(&rs("D4"), 10), Err(Error::GroupTooLarge { cap: 10 }));
        assert_eq!(weyl_group(&rs("A1"), 10).unwrap().len(), 2);
    }

    #[test]
    fn rank_cap_and_validation() {
        assert!(matches!(
            build_root_system("A9".parse().unwrap(), 8),
            Err(Error::UnsupportedRank { rank: 9, cap: 8 })
        ));
        assert!("B1".parse::<SimpleLieType>().is_err());
        assert!("E9".parse::<SimpleLieType>().is_err());
        assert!("X2".parse::<SimpleLieType>().is_err());
    }

    #[test]
    fn affine_cartan_rows() {
        let a2 = rs("A2");
        assert_eq!(a2.affine_cartan(), vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]);
        let g2 = rs("G2");
        // affine node attaches to the long simple root
        let ac = g2.affine_cartan();
        assert_eq!(ac[0][1], 0);
        assert_eq!(ac[0][2], -1);
    }
}
