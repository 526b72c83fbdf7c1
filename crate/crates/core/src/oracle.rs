//! Closed-form references used to check the general algorithms. Nothing here
//! shares code with the paths it checks.

use num_complex::Complex64;

use crate::affine::{FusionTensor, Matrix};

/// `S_ab = sqrt(2/(k+2)) sin(pi (a+1)(b+1)/(k+2))`.
pub fn a1_s_matrix(k: u32) -> Matrix {
    let n = k as usize + 1;
    let kk = k as f64 + 2.0;
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let x = (2.0 / kk).sqrt() * (std::f64::consts::PI * ((a + 1) * (b + 1)) as f64 / kk).sin();
                    Complex64::new(x, 0.0)
                })
                .collect()
        })
        .collect()
}

/// Truncated Clebsch-Gordan rule for `su(2)` at level `k`.
pub fn a1_fusion(k: u32) -> FusionTensor {
    let n = k as usize + 1;
    let k = k as i64;
    let mut t = FusionTensor::zeros(n);
    for a in 0..n as i64 {
        for b in 0..n as i64 {
            for c in 0..n as i64 {
                let ok = (a - b).abs() <= c && c <= (a + b).min(2 * k - a - b) && (a + b + c) % 2 == 0;
                if ok {
                    t.set(a as usize, b as usize, c as usize, 1);
                }
            }
        }
    }
    t
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).norm()))
        .fold(0.0, f64::max)
}

/// Number of nodes of the simply-laced Dynkin diagram attached to the
/// `su(2)` level-`k` invariants: `A_{k+1}` for the diagonal invariant and
/// `D_{k/2+2}` for the simple-current invariant at even `k`.
pub fn ade_node_count(k: u32, d_type: bool) -> usize {
    if d_type {
        assert!(k % 2 == 0, "D-type invariants need even level");
        k as usize / 2 + 2
    } else {
        k as usize + 1
    }
}

/// Number of functions `f: G x G -> (1/e)Z/Z` that are bihomomorphisms and
/// satisfy `f(g,g) = twist(g)`, by exhaustive search over all value
/// assignments. `table` is the group law on `0..n` with identity `0`;
/// twists are given as numerators over `e`. Only practical for tiny groups.
pub fn brute_force_ksb_count(table: &[Vec<usize>], exponent: u64, twist_numerators: &[u64]) -> usize {
    let n = table.len();
    let e = exponent;
    let cells = n * n;
    let total = (e as u128).pow(cells as u32);
    assert!(total <= 1 << 24, "group too large for exhaustive search");
    let mut count = 0;
    let mut values = vec![0u64; cells];
    for code in 0..total {
        let mut c = code;
        for v in values.iter_mut() {
            *v = (c % e as u128) as u64;
            c /= e as u128;
        }
        let f = |a: usize, b: usize| values[a * n + b];
        let diag = (0..n).all(|g| f(g, g) == twist_numerators[g] % e);
        if !diag {
            continue;
        }
        let bihom = (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|h| {
                    f(table[a][b], h) == (f(a, h) + f(b, h)) % e && f(h, table[a][b]) == (f(h, a) + f(h, b)) % e
                })
            })
        });
        if bihom {
            count += 1;
        }
    }
    count
}

/// Subgroups of a finite group given by its table, by checking every subset
/// for closure. Only for groups of order at most 16.
pub fn brute_force_subgroup_count(table: &[Vec<usize>]) -> usize {
    let n = table.len();
    assert!(n <= 16);
    (0u32..(1 << n))
        .filter(|&mask| {
            mask & 1 == 1
                && (0..n).all(|a| {
                    mask >> a & 1 == 0 || (0..n).all(|b| mask >> b & 1 == 0 || mask >> table[a][b] & 1 == 1)
                })
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_fusion_small_cases() {
        let t = a1_fusion(2);
        // sigma x sigma = 1 + psi
        assert_eq!(t.get(1, 1, 0), 1);
        assert_eq!(t.get(1, 1, 2), 1);
        assert_eq!(t.get(1, 1, 1), 0);
        assert_eq!(t.get(2, 2, 0), 1);
    }

    #[test]
    fn cyclic_brute_force() {
        let z2 = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(brute_force_ksb_count(&z2, 2, &[0, 0]), 1);
        assert_eq!(brute_force_ksb_count(&z2, 2, &[0, 1]), 1);
        let z4: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
        assert_eq!(brute_force_subgroup_count(&z4), 3);
        let v4: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        assert_eq!(brute_force_subgroup_count(&v4), 5);
    }
}
