use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type DenseMatrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SNFResult {
    /// Nonzero invariant factors d₁ | d₂ | …, all positive.
    pub factors: Vec<BigInt>,
    /// U and V with U·A·V = D, when requested.
    pub transforms: Option<(DenseMatrix, DenseMatrix)>,
}

impl SNFResult {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

pub fn identity(n: usize) -> DenseMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

pub fn mat_mul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

struct Work {
    a: DenseMatrix,
    u: Option<DenseMatrix>,
    v: Option<DenseMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    // row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        fn go(m: &mut DenseMatrix, dst: usize, src: usize, k: &BigInt) {
            let s = m[src].clone();
            for (x, y) in m[dst].iter_mut().zip(&s) {
                *x += k * y;
            }
        }
        go(&mut self.a, dst, src, k);
        if let Some(u) = &mut self.u {
            go(u, dst, src, k);
        }
    }

    // col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        fn go(m: &mut DenseMatrix, dst: usize, src: usize, k: &BigInt) {
            for row in m {
                let y = row[src].clone();
                row[dst] += k * y;
            }
        }
        go(&mut self.a, dst, src, k);
        if let Some(v) = &mut self.v {
            go(v, dst, src, k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }

    // Smallest nonzero |entry| in the block starting at (t, t).
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Smith normal form by smallest-pivot row and column reduction.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SNFResult {
    snf(m, false)
}

pub fn smith_normal_form_with_transforms(m: &[Vec<BigInt>]) -> SNFResult {
    snf(m, true)
}

fn snf(m: &[Vec<BigInt>], transforms: bool) -> SNFResult {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut w = Work {
        a: m.to_vec(),
        u: transforms.then(|| identity(rows)),
        v: transforms.then(|| identity(cols)),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = w.min_entry(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.a[t][t].clone();
            let mut again = false;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&p);
                    w.add_row(i, t, &-q);
                    again |= !w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&p);
                    w.add_col(j, t, &-q);
                    again |= !w.a[t][j].is_zero();
                }
            }
            if again {
                // a remainder smaller than the pivot is left in row or column t
                let (mut bi, mut bj) = (t, t);
                for i in t + 1..rows {
                    if !w.a[i][t].is_zero() && w.a[i][t].abs() < w.a[bi][bj].abs() {
                        (bi, bj) = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !w.a[t][j].is_zero() && w.a[t][j].abs() < w.a[bi][bj].abs() {
                        (bi, bj) = (t, j);
                    }
                }
                w.swap_rows(t, bi);
                w.swap_cols(t, bj);
                continue;
            }
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p))
            });
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let factors = (0..rows.min(cols))
        .map(|i| w.a[i][i].clone())
        .take_while(|x| !x.is_zero())
        .collect();
    SNFResult {
        factors,
        transforms: w.u.zip(w.v),
    }
}

/// Prime-power decomposition of an invariant factor greater than 1.
pub fn prime_power_parts(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(m: &[Vec<i64>]) -> DenseMatrix {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(ints(&smith_normal_form(&big(&[vec![2, 0], vec![0, 0]])).factors), vec![2]);
        assert_eq!(ints(&smith_normal_form(&big(&[vec![1, 2], vec![3, 4]])).factors), vec![1, 2]);
        assert!(smith_normal_form(&big(&[vec![0, 0, 0]])).factors.is_empty());
        assert!(smith_normal_form(&[]).factors.is_empty());
        assert_eq!(
            ints(&smith_normal_form(&big(&[vec![2, 0], vec![0, 3]])).factors),
            vec![1, 6]
        );
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_parts(12), vec![4, 3]);
        assert_eq!(prime_power_parts(2), vec![2]);
        assert_eq!(prime_power_parts(49), vec![49]);
    }

    fn det(m: &[Vec<i64>]) -> i128 {
        match m.len() {
            1 => m[0][0] as i128,
            2 => m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128,
            _ => (0..m.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] as i128 * det(&minor)
                })
                .sum(),
        }
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|s| s.count_ones() as usize == k)
            .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
            .collect()
    }

    fn gcd_of_minors(m: &[Vec<i64>], k: usize) -> i128 {
        let mut g = 0i128;
        for rs in subsets(m.len(), k) {
            for cs in subsets(m[0].len(), k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        g
    }

    proptest! {
        #[test]
        fn factors_match_minor_gcds(rows in 1usize..4, cols in 1usize..4, seed in prop::collection::vec(-6i64..7, 9)) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 3 + j]).collect()).collect();
            let r = smith_normal_form_with_transforms(&big(&m));
            let f = ints(&r.factors);
            for w in f.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            let mut prod = 1i128;
            for k in 1..=rows.min(cols) {
                let g = gcd_of_minors(&m, k);
                if k <= f.len() {
                    prod *= f[k - 1] as i128;
                    prop_assert_eq!(prod, g);
                } else {
                    prop_assert_eq!(g, 0);
                }
            }
            let (u, v) = r.transforms.unwrap();
            let d = mat_mul(&mat_mul(&u, &big(&m)), &v);
            for (i, row) in d.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    let want = if i == j && i < f.len() { BigInt::from(f[i]) } else { BigInt::zero() };
                    prop_assert_eq!(x, &want);
                }
            }
            prop_assert_eq!(det(&ints_matrix(&u)).abs(), 1);
            prop_assert_eq!(det(&ints_matrix(&v)).abs(), 1);
        }
    }

    fn ints_matrix(m: &DenseMatrix) -> Vec<Vec<i64>> {
        m.iter().map(|r| ints(r)).collect()
    }
}
