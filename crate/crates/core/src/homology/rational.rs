//! Linear algebra over ℚ on small dense matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type Q = BigRational;

pub(crate) fn from_i128(m: &[Vec<i128>]) -> Vec<Vec<Q>> {
    m.iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in &mut m[r] {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub(crate) fn rank(m: &[Vec<i128>]) -> usize {
    rref(&mut from_i128(m)).len()
}

pub(crate) fn rank_q(m: &[Vec<Q>]) -> usize {
    rref(&mut m.to_vec()).len()
}

/// Basis of {v : m·v = 0} for an m with `cols` columns.
pub(crate) fn kernel(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// Rank of a set of column vectors of equal length.
pub(crate) fn span_rank(vectors: &[Vec<Q>]) -> usize {
    let Some(len) = vectors.first().map(Vec::len) else { return 0 };
    let m: Vec<Vec<Q>> = (0..len)
        .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
        .collect();
    rank_q(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_and_kernels() {
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(&[vec![2, 0], vec![0, 3]]), 2);
        assert_eq!(rank(&[]), 0);
        let m = from_i128(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| x.to_integer().try_into().unwrap()).collect();
        assert_eq!(v, vec![1, -1, 1]);
        assert_eq!(span_rank(&[k[0].clone(), k[0].clone()]), 1);
    }
}
