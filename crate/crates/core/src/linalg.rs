//! Dense linear algebra over `K`, used fiberwise (one atom at a time).
//!
//! Vectors are passed as a list; internally they become the columns of an
//! `n × m` matrix that is brought to reduced row echelon form, pivoting on
//! the first nonzero entry of each column.

use crate::field::Field;

/// Reduced row echelon form of a row-major matrix with `cols` columns.
/// Returns the pivot column of each nonzero row.
pub fn rref<F: Field>(field: &F, m: &mut [Vec<F::Elem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !field.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(row, p);
        let inv = field.inv(&m[row][col]).expect("pivot is nonzero");
        for v in m[row].iter_mut() {
            *v = field.mul(&inv, v);
        }
        let pivot_row = m[row].clone();
        for (r, target) in m.iter_mut().enumerate() {
            if r == row || field.is_zero(&target[col]) {
                continue;
            }
            let factor = target[col].clone();
            for (x, p) in target.iter_mut().zip(&pivot_row) {
                *x = field.sub(x, &field.mul(&factor, p));
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// `n × m` matrix whose columns are `vectors`, optionally augmented by
/// `extra` as a last column.
fn columns<F: Field>(
    field: &F,
    vectors: &[Vec<F::Elem>],
    n: usize,
    extra: Option<&[F::Elem]>,
) -> Vec<Vec<F::Elem>> {
    (0..n)
        .map(|i| {
            let mut row: Vec<F::Elem> = vectors.iter().map(|v| v[i].clone()).collect();
            if let Some(t) = extra {
                row.push(t[i].clone());
            }
            if row.is_empty() {
                row.push(field.zero());
            }
            row
        })
        .collect()
}

fn dim_of<E>(vectors: &[Vec<E>]) -> usize {
    vectors.first().map_or(0, Vec::len)
}

/// Dimension of the span of `vectors`.
pub fn rank<F: Field>(field: &F, vectors: &[Vec<F::Elem>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m = columns(field, vectors, dim_of(vectors), None);
    rref(field, &mut m, vectors.len()).len()
}

/// Coefficients `c` with `Σ c_i · vectors[i] = target`, if any. Free
/// coefficients are set to zero.
pub fn solve<F: Field>(
    field: &F,
    vectors: &[Vec<F::Elem>],
    target: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let m_vecs = vectors.len();
    let mut m = columns(field, vectors, target.len(), Some(target));
    let pivots = rref(field, &mut m, m_vecs + 1);
    if pivots.last() == Some(&m_vecs) {
        return None;
    }
    let mut coeffs = vec![field.zero(); m_vecs];
    for (row, &col) in pivots.iter().enumerate() {
        coeffs[col] = m[row][m_vecs].clone();
    }
    Some(coeffs)
}

/// A nontrivial relation `Σ c_i · vectors[i] = 0`, if the vectors are
/// dependent.
pub fn kernel_vector<F: Field>(field: &F, vectors: &[Vec<F::Elem>]) -> Option<Vec<F::Elem>> {
    if vectors.is_empty() {
        return None;
    }
    let mut m = columns(field, vectors, dim_of(vectors), None);
    let pivots = rref(field, &mut m, vectors.len());
    let free = (0..vectors.len()).find(|c| !pivots.contains(c))?;
    let mut coeffs = vec![field.zero(); vectors.len()];
    coeffs[free] = field.one();
    for (row, &col) in pivots.iter().enumerate() {
        coeffs[col] = field.neg(&m[row][free]);
    }
    Some(coeffs)
}

/// Indices of the lexicographically first maximal independent subset, i.e.
/// the pivot columns.
pub fn first_basis<F: Field>(field: &F, vectors: &[Vec<F::Elem>]) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = columns(field, vectors, dim_of(vectors), None);
    rref(field, &mut m, vectors.len())
}

/// Indices (ascending) of the lexicographically last maximal independent
/// subset. Greedy selection from the back gives the Gale-maximal basis,
/// which is in particular lexicographically last.
pub fn last_basis<F: Field>(field: &F, vectors: &[Vec<F::Elem>]) -> Vec<usize> {
    let reversed: Vec<Vec<F::Elem>> = vectors.iter().rev().cloned().collect();
    let mut idx: Vec<usize> = first_basis(field, &reversed)
        .into_iter()
        .map(|i| vectors.len() - 1 - i)
        .collect();
    idx.sort_unstable();
    idx
}

/// Square matrix inverse, `None` if singular.
pub fn inverse<F: Field>(field: &F, matrix: &[Vec<F::Elem>]) -> Option<Vec<Vec<F::Elem>>> {
    let n = matrix.len();
    let mut m: Vec<Vec<F::Elem>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let pivots = rref(field, &mut m, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul<F: Field>(field: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(field.zero(), |acc, k| {
                        field.add(&acc, &field.mul(&row[k], &b[k][j]))
                    })
                })
                .collect()
        })
        .collect()
}
