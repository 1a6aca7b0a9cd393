//! Test oracles that share no code with the library's linear algebra.
#![allow(dead_code)]

use immorder::intalg::{FgAbelianGroup, IntMatrix};
use num_bigint::BigInt;

pub type Mat = Vec<Vec<i128>>;

pub fn to_mat(m: &IntMatrix) -> Mat {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| i128::try_from(m.get(i, j)).expect("small entries")).collect())
        .collect()
}

pub fn from_mat(m: &Mat, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(m.len(), cols, |i, j| BigInt::from(m[i][j]))
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Nonzero invariant factors by repeated Euclid steps on `i128`.
pub fn invariant_factors(m: &Mat) -> Vec<i128> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let p = a[t][t];
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / p;
            for j in t..cols {
                a[i][j] -= q * a[t][j];
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / p;
            for i in t..rows {
                a[i][j] -= q * a[i][t];
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0)) {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1).into_iter().map(|mut s| {
        s.push(n - 1);
        s
    }).collect();
    with.extend(subsets(n - 1, k));
    with
}

/// Invariant factors from gcds of all `k × k` minors.
pub fn determinantal_factors(m: &Mat) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut prev = 1;
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

pub fn rank(m: &Mat) -> usize {
    invariant_factors(m).len()
}

/// `ker d_out / im d_in` as `(free rank, torsion)`; `n` is the middle rank.
pub fn homology_oracle(d_in: &Mat, d_out: &Mat, n: usize, factors: fn(&Mat) -> Vec<i128>) -> (usize, Vec<i128>) {
    let r_out = if d_out.is_empty() { 0 } else { rank(d_out) };
    let f_in = if d_in.is_empty() || d_in[0].is_empty() { Vec::new() } else { factors(d_in) };
    let free = n - r_out - f_in.len();
    let torsion = f_in.into_iter().filter(|&d| d > 1).collect();
    (free, torsion)
}

pub fn group(free: usize, torsion: &[i128]) -> FgAbelianGroup {
    FgAbelianGroup::new(free, torsion.iter().map(|&t| BigInt::from(t)).collect()).expect("valid invariants")
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter().map(|r| (0..cols).map(|j| (0..inner).map(|k| r[k] * b[k][j]).sum()).collect()).collect()
}

/// Strict covering relations among the classes with group `1`, `Z/2` or
/// `Z/4`, as DOT ids.
pub fn combined_figure_edges() -> std::collections::BTreeSet<(String, String)> {
    [
        ("S4", "M_1"),
        ("S4", "N_2_0_0"),
        ("M_1", "M_2"),
        ("M_1", "N_2_1_0"),
        ("M_2", "CP2"),
        ("CP2", "N_2_inf_0"),
        ("N_2_0_0", "N_1_0_0"),
        ("N_2_0_0", "N_2_inf_0"),
        ("N_2_0_0", "N_1_1_0"),
        ("N_1_0_0", "N_1_inf_0"),
        ("N_2_inf_0", "N_2_inf_1"),
        ("N_2_inf_0", "N_1_inf_0"),
        ("N_1_inf_0", "N_1_inf_1"),
        ("N_2_1_0", "N_2_inf_0"),
        ("N_2_1_0", "N_2_1_1"),
        ("N_1_1_0", "N_1_inf_0"),
        ("N_1_1_0", "N_1_1_1"),
        ("N_2_1_1", "N_2_inf_1"),
        ("N_1_1_1", "N_1_inf_1"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect()
}
