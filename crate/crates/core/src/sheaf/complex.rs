use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{CochainComplex, ExactMatrix, Rat};
use crate::space::FacePoset;

/// Bounded complex of cellular sheaves on a face poset.
///
/// Every stalk is a cochain complex on the common degree range `lo..hi`.
/// Restrictions are stored for covering pairs only: `restr[σ][j][k - lo]`
/// maps `F^k(σ) → F^k(τ)` where `τ = poset.up[σ][j].0`. The sheaf is
/// defined on the up-closed `domain`; stalks outside it are zero.
#[derive(Clone, Debug)]
pub struct SheafComplex {
    poset: Arc<FacePoset>,
    domain: Vec<bool>,
    lo: i32,
    hi: i32,
    stalks: Vec<CochainComplex>,
    restr: Vec<Vec<Vec<ExactMatrix>>>,
}

/// Pads a complex with zero spaces to the range `lo..hi`.
pub(crate) fn pad(c: &CochainComplex, lo: i32, hi: i32) -> CochainComplex {
    assert!(c.total_dim() == 0 || (c.start() >= lo && c.end() <= hi), "stalk outside degree range");
    let dims: Vec<usize> = (lo..hi).map(|k| c.dim(k)).collect();
    let diffs = (lo..hi - 1).map(|k| c.diff(k)).collect();
    CochainComplex::new_unchecked(lo, dims, diffs).expect("padded shapes")
}

impl SheafComplex {
    /// Assembles and validates a sheaf complex.
    pub fn new(
        poset: Arc<FacePoset>,
        domain: Vec<bool>,
        lo: i32,
        hi: i32,
        stalks: Vec<CochainComplex>,
        restr: Vec<Vec<Vec<ExactMatrix>>>,
    ) -> Result<Self> {
        let f = Self::new_unchecked(poset, domain, lo, hi, stalks, restr)?;
        f.check()?;
        Ok(f)
    }

    /// Validates shapes and openness of the domain only.
    pub fn new_unchecked(
        poset: Arc<FacePoset>,
        domain: Vec<bool>,
        lo: i32,
        hi: i32,
        stalks: Vec<CochainComplex>,
        restr: Vec<Vec<Vec<ExactMatrix>>>,
    ) -> Result<Self> {
        let n = poset.len();
        if domain.len() != n || stalks.len() != n || restr.len() != n {
            return Err(Error::ShapeMismatch("per-cell data does not match the poset".into()));
        }
        let dom: BTreeSet<usize> = (0..n).filter(|i| domain[*i]).collect();
        poset.check_open(&dom)?;
        let stalks: Vec<CochainComplex> = stalks.iter().map(|c| pad(c, lo, hi)).collect();
        for s in 0..n {
            if !domain[s] && stalks[s].total_dim() > 0 {
                return Err(Error::ShapeMismatch(format!("cell {s} outside the domain has a nonzero stalk")));
            }
            if restr[s].len() != poset.up[s].len() {
                return Err(Error::ShapeMismatch(format!("cell {s}: restriction count")));
            }
            for (j, (t, _)) in poset.up[s].iter().enumerate() {
                if restr[s][j].len() != (hi - lo) as usize {
                    return Err(Error::ShapeMismatch(format!("cell {s}: restriction degrees")));
                }
                for k in lo..hi {
                    let m = &restr[s][j][(k - lo) as usize];
                    if m.rows() != stalks[*t].dim(k) || m.cols() != stalks[s].dim(k) {
                        return Err(Error::ShapeMismatch(format!("restriction {s} -> {t} in degree {k}")));
                    }
                }
            }
        }
        Ok(SheafComplex { poset, domain, lo, hi, stalks, restr })
    }

    /// Zero sheaf on the whole poset.
    pub fn zero(poset: Arc<FacePoset>) -> Self {
        let n = poset.len();
        let restr = (0..n).map(|s| vec![Vec::new(); poset.up[s].len()]).collect();
        SheafComplex { domain: vec![true; n], lo: 0, hi: 0, stalks: vec![pad(&CochainComplex::zero(), 0, 0); n], restr, poset }
    }

    /// Exact check that restrictions are chain maps and that the two paths
    /// through every length-two interval agree.
    pub fn check(&self) -> Result<()> {
        let n = self.poset.len();
        (0..n).into_par_iter().try_for_each(|s| -> Result<()> {
            for (j, (t, _)) in self.poset.up[s].iter().enumerate() {
                for k in self.lo..self.hi - 1 {
                    let lhs = self.restr[s][j][(k + 1 - self.lo) as usize].mul(&self.stalks[s].diff(k));
                    let rhs = self.stalks[*t].diff(k).mul(&self.restr[s][j][(k - self.lo) as usize]);
                    if lhs != rhs {
                        return Err(Error::InvalidComplex(format!("restriction {s} -> {t} is not a chain map in degree {k}")));
                    }
                }
            }
            // every υ covering two distinct covers τ, τ' of σ
            let mut via: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
            for (j, (t, _)) in self.poset.up[s].iter().enumerate() {
                for (l, (u, _)) in self.poset.up[*t].iter().enumerate() {
                    via.entry(*u).or_default().push((j, l));
                }
            }
            for (u, paths) in via {
                for k in self.lo..self.hi {
                    let ki = (k - self.lo) as usize;
                    let comp = |(j, l): (usize, usize)| {
                        let t = self.poset.up[s][j].0;
                        self.restr[t][l][ki].mul(&self.restr[s][j][ki])
                    };
                    let first = comp(paths[0]);
                    if paths[1..].iter().any(|p| comp(*p) != first) {
                        return Err(Error::InvalidComplex(format!("restrictions {s} -> {u} disagree in degree {k}")));
                    }
                }
            }
            Ok(())
        })
    }

    pub fn poset(&self) -> &Arc<FacePoset> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn domain(&self) -> &[bool] {
        &self.domain
    }

    pub fn is_global(&self) -> bool {
        self.domain.iter().all(|b| *b)
    }

    pub fn degree_range(&self) -> std::ops::Range<i32> {
        self.lo..self.hi
    }

    pub fn stalk(&self, s: usize) -> &CochainComplex {
        &self.stalks[s]
    }

    pub fn stalks(&self) -> &[CochainComplex] {
        &self.stalks
    }

    /// Stalk cohomology dimensions of one cell over `lo..hi`.
    pub fn stalk_cohomology(&self, s: usize) -> Vec<usize> {
        self.stalks[s].cohomology_dims()
    }

    /// Restriction along the covering pair `s < t` in degree `k`.
    pub fn cover_map(&self, s: usize, t: usize, k: i32) -> &ExactMatrix {
        let j = self.poset.up[s].iter().position(|(u, _)| *u == t).expect("covering pair");
        &self.restr[s][j][(k - self.lo) as usize]
    }

    pub fn cover_maps(&self, s: usize, j: usize) -> &[ExactMatrix] {
        &self.restr[s][j]
    }

    /// Restriction along an arbitrary relation `s ≤ t`, composed through
    /// covering pairs.
    pub fn restriction(&self, s: usize, t: usize, k: i32) -> ExactMatrix {
        if k < self.lo || k >= self.hi {
            return ExactMatrix::zeros(0, 0);
        }
        if s == t {
            return ExactMatrix::identity(self.stalks[s].dim(k));
        }
        let below: BTreeSet<usize> = self.poset.down_set(t).into_iter().collect();
        let mut cur = s;
        let mut m = ExactMatrix::identity(self.stalks[s].dim(k));
        while cur != t {
            let (j, (next, _)) =
                self.poset.up[cur].iter().enumerate().find(|(_, (u, _))| below.contains(u)).expect("s ≤ t in the face poset");
            m = self.restr[cur][j][(k - self.lo) as usize].mul(&m);
            cur = *next;
        }
        m
    }

    /// Extends the degree range to `lo..hi` (must contain the current one).
    pub fn widen(&self, lo: i32, hi: i32) -> SheafComplex {
        let (lo, hi) = (lo.min(self.lo), hi.max(self.hi));
        let stalks: Vec<CochainComplex> = self.stalks.iter().map(|c| pad(c, lo, hi)).collect();
        let restr = (0..self.len())
            .map(|s| {
                (0..self.poset.up[s].len())
                    .map(|j| {
                        let t = self.poset.up[s][j].0;
                        (lo..hi)
                            .map(|k| {
                                if k >= self.lo && k < self.hi {
                                    self.restr[s][j][(k - self.lo) as usize].clone()
                                } else {
                                    ExactMatrix::zeros(stalks[t].dim(k), stalks[s].dim(k))
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        SheafComplex { poset: self.poset.clone(), domain: self.domain.clone(), lo, hi, stalks, restr }
    }

    /// Cellular total complex `C^t = ⊕_σ F^{t - dim σ}(σ)` with
    /// `d = Σ [σ:τ] ρ_στ + (-1)^{dim σ} d_F`, over the whole poset.
    /// Block order in each degree is by cell index.
    pub fn cellular_total_complex(&self) -> (CochainComplex, Vec<Vec<(usize, usize)>>) {
        let n = self.len();
        let maxdim = self.poset.dims.iter().copied().max().unwrap_or(0) as i32;
        let (tlo, thi) = (self.lo, self.hi + maxdim);
        if tlo >= thi {
            return (CochainComplex::zero(), Vec::new());
        }
        // offsets[t][cell] within degree t
        let offsets: Vec<Vec<(usize, usize)>> = (tlo..thi)
            .map(|t| {
                let mut off = 0;
                let mut v = Vec::new();
                for s in 0..n {
                    let d = self.stalks[s].dim(t - self.poset.dims[s] as i32);
                    if d > 0 {
                        v.push((s, off));
                        off += d;
                    }
                }
                v
            })
            .collect();
        let dims: Vec<usize> = (tlo..thi).map(|t| (0..n).map(|s| self.stalks[s].dim(t - self.poset.dims[s] as i32)).sum()).collect();
        let diffs: Vec<ExactMatrix> = (tlo..thi - 1)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|t| {
                let ti = (t - tlo) as usize;
                let src = &offsets[ti];
                let dst: HashMap<usize, usize> = offsets[ti + 1].iter().copied().collect();
                let mut triples = Vec::new();
                for &(s, off) in src {
                    let q = t - self.poset.dims[s] as i32;
                    if let Some(&o) = dst.get(&s) {
                        let sign = Rat::pow_sign(self.poset.dims[s] as i64);
                        for (r, c, x) in self.stalks[s].diff(q).entries() {
                            triples.push((o + r, off + c, &sign * x));
                        }
                    }
                    for (j, (u, inc)) in self.poset.up[s].iter().enumerate() {
                        if let Some(&o) = dst.get(u) {
                            let sign = Rat::int(*inc as i64);
                            for (r, c, x) in self.restr[s][j][(q - self.lo) as usize].entries() {
                                triples.push((o + r, off + c, &sign * x));
                            }
                        }
                    }
                }
                ExactMatrix::from_triples(dims[ti + 1], dims[ti], triples)
            })
            .collect();
        let c = CochainComplex::new_unchecked(tlo, dims, diffs).expect("total complex shapes");
        (c, offsets)
    }

    /// Returns a copy with every cell outside `cells` given a zero stalk; the
    /// kept cells must form an up-set.
    pub fn restrict_to_open(&self, cells: &BTreeSet<usize>) -> Result<SheafComplex> {
        self.poset.check_open(cells)?;
        let n = self.len();
        let stalks: Vec<CochainComplex> = (0..n)
            .map(|s| if cells.contains(&s) { self.stalks[s].clone() } else { pad(&CochainComplex::zero(), self.lo, self.hi) })
            .collect();
        let restr = (0..n)
            .map(|s| {
                (0..self.poset.up[s].len())
                    .map(|j| {
                        let t = self.poset.up[s][j].0;
                        (self.lo..self.hi)
                            .map(|k| {
                                if cells.contains(&s) {
                                    self.restr[s][j][(k - self.lo) as usize].clone()
                                } else {
                                    ExactMatrix::zeros(stalks[t].dim(k), 0)
                                }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let domain = (0..n).map(|s| cells.contains(&s)).collect();
        SheafComplex::new_unchecked(self.poset.clone(), domain, self.lo, self.hi, stalks, restr)
    }
}
