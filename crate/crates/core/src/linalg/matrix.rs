use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::rational::Rat;
use super::sparse::{self, SparseVec};

/// Exact sparse matrix over the rationals, stored row-major.
///
/// Every stored entry is nonzero and inside the declared bounds.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "MatrixDump", try_from = "MatrixDump")]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl std::fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            let row: Vec<String> = (0..self.cols.min(16)).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Rat::int(1)));
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<SparseVec>) -> Self {
        assert_eq!(data.len(), rows);
        debug_assert!(data.iter().all(|r| r.iter().all(|(c, x)| *c < cols && !x.is_zero()) && r.windows(2).all(|w| w[0].0 < w[1].0)));
        ExactMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows
            .iter()
            .map(|row| {
                assert_eq!(row.len(), c, "ragged matrix");
                row.iter().enumerate().filter(|(_, x)| **x != 0).map(|(j, x)| (j, Rat::int(*x))).collect()
            })
            .collect();
        ExactMatrix { rows: r, cols: c, data }
    }

    pub fn from_dense(rows: usize, cols: usize, values: &[Vec<Rat>]) -> Self {
        let data = values.iter().map(|r| sparse::from_dense(r)).collect();
        Self::from_rows(rows, cols, data)
    }

    pub fn from_triples(rows: usize, cols: usize, triples: impl IntoIterator<Item = (usize, usize, Rat)>) -> Self {
        let mut buckets: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); rows];
        for (r, c, x) in triples {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            buckets[r].push((c, x));
        }
        let data = buckets.into_iter().map(sparse::from_entries).collect();
        ExactMatrix { rows, cols, data }
    }

    /// Matrix whose columns are the given sparse vectors.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let triples = columns.iter().enumerate().flat_map(|(j, col)| col.iter().map(move |(i, x)| (*i, j, x.clone())));
        Self::from_triples(rows, columns.len(), triples)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Rat)] {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn into_row_vecs(self) -> Vec<SparseVec> {
        self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        sparse::get(&self.data[r], c)
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rat) {
        assert!(r < self.rows && c < self.cols);
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(k) => {
                if x.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = x;
                }
            }
            Err(k) => {
                if !x.is_zero() {
                    row.insert(k, (c, x));
                }
            }
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, x)| (r, *c, x)))
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut buckets: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, x) in row {
                buckets[*c].push((r, x.clone()));
            }
        }
        ExactMatrix { rows: self.cols, cols: self.rows, data: buckets }
    }

    /// Columns as sparse vectors.
    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        let e = acc.entry(*j).or_insert_with(|| Rat::int(0));
                        *e = &*e + &(a * b);
                    }
                }
                acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
            })
            .collect();
        ExactMatrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| sparse::sub_scaled(a, &Rat::int(-1), b)).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, a: &Rat) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|r| sparse::scale(r, a)).collect() }
    }

    /// `self * v` for a sparse column vector.
    pub fn apply(&self, v: &[(usize, Rat)]) -> SparseVec {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                let x = sparse::dot(row, v);
                (!x.is_zero()).then_some((r, x))
            })
            .collect()
    }

    /// Kronecker product `self ⊗ other`; row index `i * other.rows + k`.
    pub fn kron(&self, other: &ExactMatrix) -> ExactMatrix {
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for row_a in &self.data {
            for row_b in &other.data {
                let mut r = Vec::with_capacity(row_a.len() * row_b.len());
                for (j, a) in row_a {
                    for (l, b) in row_b {
                        r.push((j * other.cols + l, a * b));
                    }
                }
                data.push(r);
            }
        }
        ExactMatrix { rows: self.rows * other.rows, cols: self.cols * other.cols, data }
    }

    /// Places `block` with its top-left corner at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &ExactMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for (r, row) in block.data.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let shifted: SparseVec = row.iter().map(|(c, x)| (c + c0, x.clone())).collect();
            let target = &mut self.data[r0 + r];
            *target = sparse::sub_scaled(target, &Rat::int(-1), &shifted);
        }
    }

    pub fn submatrix_rows(&self, rows: &[usize]) -> ExactMatrix {
        ExactMatrix { rows: rows.len(), cols: self.cols, data: rows.iter().map(|r| self.data[*r].clone()).collect() }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        self.data.iter().map(|r| sparse::to_dense(r, self.cols)).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.entries().all(|(_, _, x)| x.is_integer())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols && self.add(&self.transpose()).is_zero()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    /// `(row, col, "num/den")` triples for debug dumps.
    pub fn to_triples(&self) -> MatrixDump {
        MatrixDump { rows: self.rows, cols: self.cols, entries: self.entries().map(|(r, c, x)| (r, c, x.to_string())).collect() }
    }

    pub fn from_dump(d: &MatrixDump) -> Result<Self, super::rational::ParseRatError> {
        let mut triples = Vec::with_capacity(d.entries.len());
        for (r, c, s) in &d.entries {
            triples.push((*r, *c, s.parse::<Rat>()?));
        }
        Ok(Self::from_triples(d.rows, d.cols, triples))
    }
}

impl From<ExactMatrix> for MatrixDump {
    fn from(m: ExactMatrix) -> Self {
        m.to_triples()
    }
}

impl TryFrom<MatrixDump> for ExactMatrix {
    type Error = super::rational::ParseRatError;

    fn try_from(d: MatrixDump) -> Result<Self, Self::Error> {
        ExactMatrix::from_dump(&d)
    }
}

/// JSON triple-list form of an [`ExactMatrix`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = ExactMatrix::from_i64(&[vec![1, 2], vec![3, 4]]);
        let b = ExactMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), ExactMatrix::from_i64(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().get(0, 1), Rat::int(3));
    }

    #[test]
    fn kron_shape() {
        let a = ExactMatrix::from_i64(&[vec![1, 2]]);
        let b = ExactMatrix::identity(2);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 4));
        assert_eq!(k.get(1, 3), Rat::int(2));
    }

    #[test]
    fn dump_roundtrip() {
        let a = ExactMatrix::from_dense(2, 2, &[vec![Rat::new(1, 2), Rat::int(0)], vec![Rat::int(0), Rat::int(-3)]]);
        let d = a.to_triples();
        assert_eq!(d.entries[0], (0, 0, "1/2".to_string()));
        assert_eq!(ExactMatrix::from_dump(&d).unwrap(), a);
    }

    #[test]
    fn set_keeps_canonical_form() {
        let mut a = ExactMatrix::zeros(2, 2);
        a.set(0, 1, Rat::int(5));
        a.set(0, 1, Rat::int(0));
        assert_eq!(a.nnz(), 0);
    }
}
