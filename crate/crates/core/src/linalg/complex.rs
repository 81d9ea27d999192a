use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::echelon::{self, Echelon};
use super::group::FGAbelianGroup;
use super::matrix::ExactMatrix;
use super::rational::Rat;
use super::smith::smith_normal_form;
use super::sparse::SparseVec;
use crate::error::{Error, Result};

/// Bounded cochain complex of finite-dimensional rational vector spaces.
///
/// Degree `start + i` has dimension `dims[i]`; `diffs[i]` maps degree
/// `start + i` to `start + i + 1` (shape `dims[i+1] × dims[i]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex {
    start: i32,
    dims: Vec<usize>,
    diffs: Vec<ExactMatrix>,
}

/// Cohomology in one degree with chosen cocycle representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyDegree {
    pub degree: i32,
    pub dim: usize,
    pub representatives: Vec<SparseVec>,
}

impl CochainComplex {
    /// Validates shapes and `d ∘ d = 0`.
    pub fn new(start: i32, dims: Vec<usize>, diffs: Vec<ExactMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(start, dims, diffs)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Validates shapes only.
    pub fn new_unchecked(start: i32, dims: Vec<usize>, diffs: Vec<ExactMatrix>) -> Result<Self> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::ShapeMismatch(format!("{} degrees but {} differentials", dims.len(), diffs.len())));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.cols() != dims[i] || d.rows() != dims[i + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "d^{} is {}x{}, expected {}x{}",
                    start + i as i32,
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        Ok(CochainComplex { start, dims, diffs })
    }

    pub fn zero() -> Self {
        CochainComplex { start: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    /// A single space concentrated in one degree.
    pub fn concentrated(degree: i32, dim: usize) -> Self {
        CochainComplex { start: degree, dims: vec![dim], diffs: Vec::new() }
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for i in 0..self.diffs.len().saturating_sub(1) {
            if !self.diffs[i + 1].mul(&self.diffs[i]).is_zero() {
                return Err(Error::NotAComplex { degree: self.start + i as i32 });
            }
        }
        Ok(())
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    /// One past the top degree.
    pub fn end(&self) -> i32 {
        self.start + self.dims.len() as i32
    }

    pub fn degrees(&self) -> std::ops::Range<i32> {
        self.start..self.end()
    }

    pub fn dim(&self, k: i32) -> usize {
        if k < self.start || k >= self.end() {
            0
        } else {
            self.dims[(k - self.start) as usize]
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d^k : C^k → C^{k+1}`, zero outside the stored range.
    pub fn diff(&self, k: i32) -> ExactMatrix {
        if k >= self.start && k + 1 < self.end() {
            self.diffs[(k - self.start) as usize].clone()
        } else {
            ExactMatrix::zeros(self.dim(k + 1), self.dim(k))
        }
    }

    pub fn diff_ref(&self, k: i32) -> Option<&ExactMatrix> {
        if k >= self.start && k + 1 < self.end() {
            Some(&self.diffs[(k - self.start) as usize])
        } else {
            None
        }
    }

    fn rank_of(&self, k: i32) -> usize {
        self.diff_ref(k).map_or(0, echelon::rank)
    }

    /// Cohomology dimensions indexed from `start()`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (self.start - 1..self.end()).into_par_iter().map(|k| self.rank_of(k)).collect();
        (0..self.dims.len()).map(|i| self.dims[i] - ranks[i + 1] - ranks[i]).collect()
    }

    pub fn betti(&self, k: i32) -> usize {
        if k < self.start || k >= self.end() {
            return 0;
        }
        self.dim(k) - self.rank_of(k) - self.rank_of(k - 1)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|k| if k % 2 == 0 { 1 } else { -1 } * self.dim(k) as i64).sum()
    }

    /// Cohomology in degree `k` with cocycle representatives.
    ///
    /// Representatives are kernel basis vectors (in free-column order) that
    /// are independent modulo the image of `d^{k-1}`.
    pub fn cohomology_at(&self, k: i32) -> CohomologyDegree {
        let n = self.dim(k);
        let kernel = echelon::kernel_basis(&self.diff(k));
        let mut e = Echelon::new();
        if let Some(prev) = self.diff_ref(k - 1) {
            for col in prev.columns() {
                e.insert(col);
            }
        }
        let mut reps = Vec::new();
        for v in kernel {
            if e.insert(v.clone()).is_some() {
                reps.push(v);
            }
        }
        debug_assert!(reps.len() <= n);
        CohomologyDegree { degree: k, dim: reps.len(), representatives: reps }
    }

    pub fn cohomology(&self) -> Vec<CohomologyDegree> {
        self.degrees().collect::<Vec<_>>().into_par_iter().map(|k| self.cohomology_at(k)).collect()
    }

    /// Whether a cocycle is a coboundary.
    pub fn is_exact(&self, k: i32, v: &SparseVec) -> bool {
        match self.diff_ref(k - 1) {
            None => v.is_empty(),
            Some(prev) => echelon::solve(prev, v).is_some(),
        }
    }

    /// Shift so that old degree `k` becomes `k - s` (no sign change).
    pub fn shift(&self, s: i32) -> Self {
        CochainComplex { start: self.start - s, dims: self.dims.clone(), diffs: self.diffs.clone() }
    }

    /// Integer cohomology; requires integral differentials.
    pub fn integral_cohomology(&self) -> Result<Vec<FGAbelianGroup>> {
        let ranks_and_factors: Vec<(usize, Vec<u64>)> = (self.start - 1..self.end())
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|k| match self.diff_ref(k) {
                None => Ok((0, Vec::new())),
                Some(d) => {
                    let s = smith_normal_form(d)?;
                    let torsion = s
                        .factors
                        .iter()
                        .filter(|f| !num_traits::One::is_one(*f))
                        .map(|f| f.to_u64().ok_or_else(|| Error::Unsupported("torsion order exceeds u64".into())))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((s.factors.len(), torsion))
                }
            })
            .collect::<Result<_>>()?;
        Ok((0..self.dims.len())
            .map(|i| {
                let free = self.dims[i] - ranks_and_factors[i + 1].0 - ranks_and_factors[i].0;
                FGAbelianGroup::new(free, &ranks_and_factors[i].1)
            })
            .collect())
    }

    /// Serializable summary with differentials as triples.
    pub fn to_dump(&self) -> ComplexDump {
        ComplexDump { start: self.start, dims: self.dims.clone(), diffs: self.diffs.iter().map(|d| d.to_triples()).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDump {
    pub start: i32,
    pub dims: Vec<usize>,
    pub diffs: Vec<super::matrix::MatrixDump>,
}

/// Offsets of the `(p, q)` blocks in degree `k = p + q` of `a ⊗ b`.
/// Blocks are ordered by increasing `p`; inside a block the index of
/// `e_i ⊗ f_j` is `i * dim b^q + j`.
pub fn tensor_offsets(a: &CochainComplex, b: &CochainComplex, k: i32) -> Vec<(i32, i32, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for p in a.degrees() {
        let q = k - p;
        let (da, db) = (a.dim(p), b.dim(q));
        if da * db > 0 {
            out.push((p, q, off));
            off += da * db;
        }
    }
    out
}

/// Tensor product with `d(x ⊗ y) = dx ⊗ y + (-1)^p x ⊗ dy`.
pub fn tensor_complex(a: &CochainComplex, b: &CochainComplex) -> CochainComplex {
    if a.total_dim() == 0 || b.total_dim() == 0 {
        return CochainComplex::zero();
    }
    let start = a.start + b.start;
    let end = a.end() + b.end() - 1;
    let dim_of = |k: i32| tensor_offsets(a, b, k).iter().map(|(p, q, _)| a.dim(*p) * b.dim(*q)).sum::<usize>();
    let dims: Vec<usize> = (start..end).map(dim_of).collect();
    let diffs: Vec<ExactMatrix> = (start..end - 1)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| {
            let src = tensor_offsets(a, b, k);
            let dst = tensor_offsets(a, b, k + 1);
            let find = |p: i32| dst.iter().find(|(pp, _, _)| *pp == p).map(|t| t.2);
            let mut m = ExactMatrix::zeros(dim_of(k + 1), dim_of(k));
            for &(p, q, off) in &src {
                if let Some(t) = find(p + 1) {
                    let blk = a.diff(p).kron(&ExactMatrix::identity(b.dim(q)));
                    m.add_block(t, off, &blk);
                }
                if let Some(t) = find(p) {
                    let sign = if p.rem_euclid(2) == 0 { Rat::int(1) } else { Rat::int(-1) };
                    let blk = ExactMatrix::identity(a.dim(p)).kron(&b.diff(q)).scale(&sign);
                    m.add_block(t, off, &blk);
                }
            }
            m
        })
        .collect();
    CochainComplex { start, dims, diffs }
}

/// Direct sum of complexes, blocks in argument order.
pub fn direct_sum(parts: &[CochainComplex]) -> CochainComplex {
    let nonzero: Vec<&CochainComplex> = parts.iter().filter(|c| !c.dims.is_empty()).collect();
    if nonzero.is_empty() {
        return CochainComplex::zero();
    }
    let start = nonzero.iter().map(|c| c.start).min().unwrap();
    let end = nonzero.iter().map(|c| c.end()).max().unwrap();
    let dims: Vec<usize> = (start..end).map(|k| nonzero.iter().map(|c| c.dim(k)).sum()).collect();
    let diffs = (start..end - 1)
        .map(|k| {
            let mut m = ExactMatrix::zeros(dims[(k + 1 - start) as usize], dims[(k - start) as usize]);
            let (mut r, mut c) = (0, 0);
            for part in &nonzero {
                if let Some(d) = part.diff_ref(k) {
                    m.add_block(r, c, d);
                }
                r += part.dim(k + 1);
                c += part.dim(k);
            }
            m
        })
        .collect();
    CochainComplex { start, dims, diffs }
}

/// Convolution `(a * b)_k = Σ_{i+j=k} a_i b_j` of dimension sequences.
pub fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
