//! Exact Gaussian elimination: rank, kernels, spans and coordinates.

use std::collections::BTreeMap;

use super::matrix::ExactMatrix;
use super::rational::Rat;
use super::sparse::{self, SparseVec};

/// Incrementally built row echelon form.
///
/// Each stored row is keyed by its leading column and scaled so that entry
/// is one. Rows are reduced against earlier pivots only at their leading
/// position, so the form is echelon but not fully reduced.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the stored pivots until its leading column is
    /// not a pivot column (or it vanishes).
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((c, x)) = v.first().cloned() {
            match self.pivots.get(&c) {
                Some(p) => v = sparse::sub_scaled(&v, &x, p),
                None => break,
            }
        }
        v
    }

    /// Inserts `v`; returns the new pivot column if `v` was independent.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let v = self.reduce(v);
        let (c, lead) = v.first().cloned()?;
        let inv = lead.recip();
        let v = if inv.is_one() { v } else { sparse::scale(&v, &inv) };
        self.pivots.insert(c, v);
        Some(c)
    }

    /// Fully reduces `v`: eliminates every pivot column, not only the leading one.
    pub fn reduce_fully(&self, v: SparseVec) -> SparseVec {
        let mut out: SparseVec = Vec::new();
        let mut rest = v;
        loop {
            rest = self.reduce(rest);
            match rest.first().cloned() {
                None => break,
                Some(e) => {
                    out.push(e);
                    rest.remove(0);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_fully(v.clone()).is_empty()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Reduced row echelon rows, ordered by pivot column.
    pub fn into_rref(self) -> Vec<(usize, SparseVec)> {
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        let mut rows = self.pivots;
        for &p in cols.iter().rev() {
            let mut r = rows.remove(&p).unwrap();
            let targets: Vec<usize> = r.iter().skip(1).map(|e| e.0).filter(|c| rows.contains_key(c)).collect();
            for q in targets {
                let coeff = sparse::get(&r, q);
                r = sparse::sub_scaled(&r, &coeff, &rows[&q]);
            }
            rows.insert(p, r);
        }
        // Processed in descending order: each later pivot row is already clear
        // of every other pivot column.
        rows.into_iter().collect()
    }
}

pub fn rank(m: &ExactMatrix) -> usize {
    // Eliminating along the shorter side keeps the echelon small.
    let rows: Vec<SparseVec> = if m.rows() <= m.cols() { m.row_vecs().to_vec() } else { m.columns() };
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| rows[i].len());
    let mut e = Echelon::new();
    let mut rows = rows;
    for i in order {
        e.insert(std::mem::take(&mut rows[i]));
    }
    e.rank()
}

pub fn rref(m: &ExactMatrix) -> Vec<(usize, SparseVec)> {
    let mut e = Echelon::new();
    for r in m.row_vecs() {
        e.insert(r.clone());
    }
    e.into_rref()
}

/// A subspace with a basis in reduced form: `basis[i][keys[j]] = δ_ij`.
///
/// Coordinates of a member vector are read off at the key positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Vec<SparseVec>,
    pub keys: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), keys: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: (0..ambient).map(|i| vec![(i, Rat::int(1))]).collect(), keys: (0..ambient).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Span of arbitrary vectors, reduced to RREF.
    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new();
        for v in vectors {
            e.insert(v);
        }
        let rows = e.into_rref();
        Subspace { ambient, keys: rows.iter().map(|r| r.0).collect(), basis: rows.into_iter().map(|r| r.1).collect() }
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is not a member.
    pub fn coords(&self, v: &SparseVec) -> Option<Vec<Rat>> {
        let c: Vec<Rat> = self.keys.iter().map(|k| sparse::get(v, *k)).collect();
        let mut rebuilt: SparseVec = Vec::new();
        for (b, x) in self.basis.iter().zip(&c) {
            if !x.is_zero() {
                sparse::add_scaled_into(&mut rebuilt, x, b);
            }
        }
        (rebuilt == *v).then_some(c)
    }

    pub fn coords_sparse(&self, v: &SparseVec) -> Option<SparseVec> {
        self.coords(v).map(|c| sparse::from_dense(&c))
    }

    /// Matrix with the basis vectors as columns (ambient × dim).
    pub fn as_columns(&self) -> ExactMatrix {
        ExactMatrix::from_columns(self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.coords(v).is_some()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        // Solve a·A = b·B through the kernel of [A | -B] stacked as columns.
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|b| sparse::scale(b, &Rat::int(-1))));
        let m = ExactMatrix::from_columns(self.ambient, &cols);
        let k = kernel_basis(&m);
        let vecs = k.into_iter().map(|coef| {
            let mut acc: SparseVec = Vec::new();
            for (i, x) in coef.iter() {
                if *i < self.dim() {
                    sparse::add_scaled_into(&mut acc, x, &self.basis[*i]);
                }
            }
            acc
        });
        Subspace::span(self.ambient, vecs)
    }
}

/// Basis of the null space of `m`, one vector per free column, in column
/// order. Each vector has a one at its free column and zeros at the others.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<SparseVec> {
    kernel_subspace(m).basis
}

pub fn kernel_subspace(m: &ExactMatrix) -> Subspace {
    let rows = rref(m);
    let pivot_set: std::collections::BTreeSet<usize> = rows.iter().map(|r| r.0).collect();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivot_set.contains(c)).collect();
    // column-indexed view of the rref entries at free columns
    let mut by_free: BTreeMap<usize, Vec<(usize, Rat)>> = BTreeMap::new();
    for (p, r) in &rows {
        for (c, x) in r.iter().skip(1) {
            by_free.entry(*c).or_default().push((*p, x.clone()));
        }
    }
    let basis = free
        .iter()
        .map(|&f| {
            let mut v: Vec<(usize, Rat)> = vec![(f, Rat::int(1))];
            if let Some(entries) = by_free.get(&f) {
                for (p, x) in entries {
                    v.push((*p, -x));
                }
            }
            sparse::from_entries(v)
        })
        .collect();
    Subspace { ambient: m.cols(), basis, keys: free }
}

/// Solves `m x = b` exactly, returning one solution if consistent.
pub fn solve(m: &ExactMatrix, b: &SparseVec) -> Option<SparseVec> {
    // Augmented elimination on [m | b].
    let n = m.cols();
    let mut e = Echelon::new();
    for (r, row) in m.row_vecs().iter().enumerate() {
        let mut aug = row.clone();
        let rhs = sparse::get(b, r);
        if !rhs.is_zero() {
            aug.push((n, rhs));
        }
        e.insert(aug);
    }
    if e.pivot_columns().contains(&n) {
        return None;
    }
    let rows = e.into_rref();
    let sol = rows
        .iter()
        .filter_map(|(p, r)| {
            let x = sparse::get(r, n);
            (!x.is_zero()).then_some((*p, x))
        })
        .collect();
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_boundary() -> ExactMatrix {
        // edges 01, 02, 12 against vertices 0, 1, 2
        ExactMatrix::from_i64(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ExactMatrix::identity(2)), 2);
        assert_eq!(rank(&ExactMatrix::zeros(3, 4)), 0);
        // hand row reduction: row3 = row2 - row1, two pivots remain
        assert_eq!(rank(&circle_boundary()), 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&ExactMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&ExactMatrix::zeros(1, 2)).len(), 2);
        let k = kernel_basis(&circle_boundary().transpose());
        assert_eq!(k.len(), 1);
        assert!(k[0].iter().all(|(_, x)| x.abs() == Rat::int(1)));
        assert_eq!(k[0].len(), 3);
        assert!(circle_boundary().transpose().apply(&k[0]).is_empty());
    }

    #[test]
    fn subspace_coords_and_intersection() {
        let s = Subspace::span(3, vec![vec![(0, Rat::int(2)), (1, Rat::int(2))], vec![(2, Rat::int(1))]]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.coords(&vec![(0, Rat::int(3)), (1, Rat::int(3)), (2, Rat::int(1))]), Some(vec![Rat::int(3), Rat::int(1)]));
        assert!(s.coords(&vec![(0, Rat::int(1))]).is_none());
        let t = Subspace::span(3, vec![vec![(1, Rat::int(1))], vec![(0, Rat::int(1)), (2, Rat::int(1))]]);
        let i = s.intersect(&t);
        assert_eq!(i.dim(), 1);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = ExactMatrix::from_i64(&[vec![1, 1], vec![0, 2]]);
        let x = solve(&m, &vec![(0, Rat::int(3)), (1, Rat::int(4))]).unwrap();
        assert_eq!(m.apply(&x), vec![(0, Rat::int(3)), (1, Rat::int(4))]);
        let z = ExactMatrix::from_i64(&[vec![1, 1], vec![1, 1]]);
        assert!(solve(&z, &vec![(0, Rat::int(1))]).is_none());
    }
}
