use std::collections::BTreeMap;

use num_bigint::BigInt;

/// Column-major sparse integer matrix. Column `j` lists `(row, value)`
/// pairs sorted by row with no zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Columns may be unsorted and contain duplicates; both are normalized.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Self {
        let columns = columns
            .into_iter()
            .map(|mut col| {
                col.sort_unstable_by_key(|e| e.0);
                let mut out: Vec<(u32, i64)> = Vec::with_capacity(col.len());
                for (r, v) in col {
                    assert!((r as usize) < rows, "row {r} out of range");
                    match out.last_mut() {
                        Some(last) if last.0 == r => last.1 += v,
                        _ => out.push((r, v)),
                    }
                }
                out.retain(|e| e.1 != 0);
                out
            })
            .collect::<Vec<_>>();
        SparseMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let columns = (0..cols)
            .map(|j| (0..rows).map(|i| (i as u32, m[i][j])).collect())
            .collect();
        Self::from_columns(rows, columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// `(row, col, value)` for every nonzero entry, column by column.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i as usize, j, v)))
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                for &(k, a) in col {
                    for &(i, b) in &self.columns[k as usize] {
                        let e = acc.entry(i).or_insert(0);
                        *e = a
                            .checked_mul(b)
                            .and_then(|p| e.checked_add(p))
                            .expect("matrix product overflows i64");
                    }
                }
                acc.into_iter().filter(|e| e.1 != 0).collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut new_row = vec![u32::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            new_row[r] = k as u32;
        }
        let columns = cols
            .iter()
            .map(|&j| {
                self.columns[j]
                    .iter()
                    .filter(|e| new_row[e.0 as usize] != u32::MAX)
                    .map(|&(r, v)| (new_row[r as usize], v))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: rows.len(),
            cols: cols.len(),
            columns,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::default(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            m[i][j] = BigInt::from(v);
        }
        m
    }

    /// Matrix-vector product with a dense vector.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![0i64; self.rows];
        for (j, &x) in v.iter().enumerate() {
            if x != 0 {
                for &(i, a) in &self.columns[j] {
                    out[i as usize] += a * x;
                }
            }
        }
        out
    }
}
