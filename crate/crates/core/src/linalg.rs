//! Dense exact linear algebra over the Gaussian rationals.
//!
//! Elimination always takes the first nonzero pivot in the column; with
//! exact arithmetic there is nothing to gain from scaling.

use num_traits::{One, Zero};

use crate::scalar::GR;

pub type Matrix = Vec<Vec<GR>>;

/// Determinant of a square matrix; the empty matrix has determinant 1.
pub fn determinant(a: &[Vec<GR>]) -> GR {
    let n = a.len();
    let mut m: Matrix = a.to_vec();
    let mut det = GR::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return GR::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = &det * &p;
        let p_inv = p.inv().unwrap();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &p_inv;
            for c in col + 1..n {
                let t = &factor * &m[col][c];
                m[r][c] -= &t;
            }
            m[r][col] = GR::zero();
        }
    }
    det
}

/// Solve `a x = b` for square nonsingular `a`; `None` if singular.
pub fn solve(a: &[Vec<GR>], b: &[GR]) -> Option<Vec<GR>> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(piv, col);
        let p_inv = m[col][col].inv().unwrap();
        for c in col..=n {
            m[col][c] = &m[col][c] * &p_inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..=n {
                let t = &factor * &m[col][c];
                m[r][c] -= &t;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// A nonzero vector in the kernel of the `rows x cols` matrix `a`, or
/// `None` if the kernel is trivial.
pub fn kernel_vector(a: &[Vec<GR>], cols: usize) -> Option<Vec<GR>> {
    let mut m: Matrix = a.to_vec();
    let rows = m.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(piv, r);
        let p_inv = m[r][col].inv().unwrap();
        for c in col..cols {
            m[r][c] = &m[r][c] * &p_inv;
        }
        for i in 0..rows {
            if i == r || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            for c in col..cols {
                let t = &factor * &m[r][c];
                m[i][c] -= &t;
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![GR::zero(); cols];
    x[free] = GR::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = -&m[row][free];
    }
    Some(x)
}
