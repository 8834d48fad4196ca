//! Independent oracle: exact Gaussian-rational linear algebra on plain row
//! vectors, and the Drazin inverse through the pseudoinverse formula
//! `A^D = A^k (A^{2k+1})^+ A^k`.

#![allow(dead_code)]

use ginv::matrix::ExactMatrix;
use ginv::scalar::{Gaussian, Scalar};

pub type Rows = Vec<Vec<Gaussian>>;

pub fn to_rows(m: &ExactMatrix) -> Rows {
    m.row_vecs()
}

pub fn from_rows(r: Rows) -> ExactMatrix {
    ExactMatrix::from_rows(r).expect("oracle output is square")
}

fn zero() -> Gaussian {
    Gaussian::int(0)
}

fn identity(n: usize) -> Rows {
    (0..n)
        .map(|i| (0..n).map(|j| Gaussian::int((i == j) as i64)).collect())
        .collect()
}

fn cols(a: &Rows) -> usize {
    a.first().map_or(0, Vec::len)
}

pub fn mul(a: &Rows, b: &Rows) -> Rows {
    let (n, m, p) = (a.len(), b.len(), cols(b));
    assert_eq!(cols(a), m, "oracle shape mismatch");
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| {
                    let mut acc = zero();
                    for k in 0..m {
                        acc = acc + a[i][k].clone() * b[k][j].clone();
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn adjoint(a: &Rows) -> Rows {
    (0..cols(a))
        .map(|j| (0..a.len()).map(|i| a[i][j].conj()).collect())
        .collect()
}

fn power(a: &Rows, k: usize) -> Rows {
    (0..k).fold(identity(a.len()), |acc, _| mul(&acc, a))
}

/// Reduced row echelon form and pivot columns.
fn rref(a: &Rows) -> (Rows, Vec<usize>) {
    let mut m = a.clone();
    let (rows, ncols) = (m.len(), cols(a));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Gaussian::int(1) / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(pivot_row) {
                    *x = x.clone() - p * f.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (m, pivots)
}

pub fn rank(a: &Rows) -> usize {
    rref(a).1.len()
}

fn inverse(a: &Rows) -> Rows {
    let n = a.len();
    let aug: Rows = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (r, pivots) = rref(&aug);
    assert!(
        pivots.len() == n && pivots[n - 1] == n - 1,
        "oracle: singular"
    );
    r.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Moore-Penrose inverse from `A = F G`: `A^+ = G^* (G G^*)^{-1} (F^* F)^{-1} F^*`.
pub fn pinv(a: &Rows) -> Rows {
    let (r, pivots) = rref(a);
    if pivots.is_empty() {
        return vec![vec![zero(); a.len()]; cols(a)];
    }
    let g: Rows = r[..pivots.len()].to_vec();
    let f: Rows = a
        .iter()
        .map(|row| pivots.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let gs = adjoint(&g);
    let fs = adjoint(&f);
    let left = mul(&gs, &inverse(&mul(&g, &gs)));
    let right = mul(&inverse(&mul(&fs, &f)), &fs);
    mul(&left, &right)
}

pub fn index(a: &Rows) -> usize {
    let mut k = 0;
    while rank(&power(a, k)) != rank(&power(a, k + 1)) {
        k += 1;
    }
    k
}

/// `(A^D, index)` by the pseudoinverse formula.
pub fn drazin(a: &Rows) -> (Rows, usize) {
    let k = index(a);
    let ak = power(a, k);
    let d = mul(&mul(&ak, &pinv(&power(a, 2 * k + 1))), &ak);
    (d, k)
}

/// Rank by enumerating minors with cofactor determinants.
pub fn rank_by_minors(a: &Rows) -> usize {
    let n = a.len();
    for size in (1..=n).rev() {
        for rs in subsets(n, size) {
            for cs in subsets(n, size) {
                let sub: Rows = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect())
                    .collect();
                if !det(&sub).is_zero() {
                    return size;
                }
            }
        }
    }
    0
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn det(a: &Rows) -> Gaussian {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = zero();
    for j in 0..n {
        let minor: Rows = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = a[0][j].clone() * det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}
