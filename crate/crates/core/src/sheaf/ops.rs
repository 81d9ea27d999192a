use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complex::{pad, SheafComplex};
use super::pushforward::derived_pushforward;
use crate::error::{Error, Result};
use crate::linalg::{echelon, CochainComplex, CohomologyDegree, ExactMatrix, FGAbelianGroup, Rat, SparseVec, Subspace};
use crate::space::StratifiedComplex;

/// Constant sheaf `G ⊗ Q` in degree 0 on the closed skeleton `X^p`,
/// extended by zero.
pub fn constant_sheaf(s: &StratifiedComplex, p: usize, g: &FGAbelianGroup) -> Result<SheafComplex> {
    if !s.levels().contains(&p) {
        return Err(Error::StratumNotFound(p));
    }
    let cells: BTreeSet<usize> = s.skeleton(p).into_iter().collect();
    constant_on(s, &cells, g.rational_rank(), vec![true; s.len()])
}

/// Constant sheaf of rank `r` on the open set `cells` (domain = `cells`).
pub fn constant_on_open(s: &StratifiedComplex, cells: &BTreeSet<usize>, r: usize) -> Result<SheafComplex> {
    s.poset().check_open(cells)?;
    constant_on(s, cells, r, (0..s.len()).map(|i| cells.contains(&i)).collect())
}

fn constant_on(s: &StratifiedComplex, cells: &BTreeSet<usize>, r: usize, domain: Vec<bool>) -> Result<SheafComplex> {
    let poset = s.poset().clone();
    let n = s.len();
    let stalks: Vec<CochainComplex> = (0..n).map(|i| CochainComplex::concentrated(0, if cells.contains(&i) { r } else { 0 })).collect();
    let restr = (0..n)
        .map(|i| {
            poset.up[i]
                .iter()
                .map(|(t, _)| {
                    let (a, b) = (cells.contains(&i), cells.contains(t));
                    vec![match (a, b) {
                        (true, true) => ExactMatrix::identity(r),
                        _ => ExactMatrix::zeros(if b { r } else { 0 }, if a { r } else { 0 }),
                    }]
                })
                .collect()
        })
        .collect();
    SheafComplex::new(poset, domain, 0, 1, stalks, restr)
}

/// `Q^r` in degree 0 on a single cell with zero restrictions out of it; at a
/// vertex this is the skyscraper sheaf of that point.
pub fn skyscraper(s: &StratifiedComplex, cell: usize, r: usize) -> Result<SheafComplex> {
    let cells = BTreeSet::from([cell]);
    constant_on(s, &cells, r, vec![true; s.len()])
}

/// Compatible degree-0 families over an open set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSpace {
    pub over: Vec<usize>,
    pub dim: usize,
    /// Basis in `⊕_{σ ∈ over} F^0(σ)`, blocks in the order of `over`.
    pub basis: Vec<SparseVec>,
}

pub fn global_sections(f: &SheafComplex, open: &BTreeSet<usize>) -> Result<SectionSpace> {
    f.poset().check_open(open)?;
    let over: Vec<usize> = open.iter().copied().collect();
    let mut offs = std::collections::HashMap::new();
    let mut total = 0;
    for &s in &over {
        offs.insert(s, total);
        total += f.stalk(s).dim(0);
    }
    let mut triples = Vec::new();
    let mut row = 0;
    for &s in &over {
        for (t, _) in &f.poset().up[s] {
            let dt = f.stalk(*t).dim(0);
            if dt == 0 {
                continue;
            }
            if f.degree_range().contains(&0) {
                for (r, c, x) in f.cover_map(s, *t, 0).entries() {
                    triples.push((row + r, offs[&s] + c, x.clone()));
                }
            }
            for i in 0..dt {
                triples.push((row + i, offs[t] + i, Rat::int(-1)));
            }
            row += dt;
        }
    }
    let m = ExactMatrix::from_triples(row, total, triples);
    let basis = echelon::kernel_basis(&m);
    Ok(SectionSpace { over, dim: basis.len(), basis })
}

/// Hypercohomology with representatives in the cellular total complex.
#[derive(Debug, Clone)]
pub struct Hypercohomology {
    pub total: CochainComplex,
    pub degrees: Vec<CohomologyDegree>,
}

impl Hypercohomology {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.dim).collect()
    }

    pub fn dim(&self, k: i32) -> usize {
        self.degrees.iter().find(|d| d.degree == k).map_or(0, |d| d.dim)
    }

    /// Dimensions on `0..=top`, zero-padded.
    pub fn dims_from_zero(&self, top: i32) -> Vec<usize> {
        (0..=top).map(|k| self.dim(k)).collect()
    }
}

/// `ℍ^*(X; F)`. A sheaf on a proper open domain is first pushed forward to
/// the whole poset, so the result is `ℍ^*(U; F)`.
pub fn sheaf_cohomology(f: &SheafComplex) -> Result<Hypercohomology> {
    let g;
    let f = if f.is_global() {
        f
    } else {
        g = derived_pushforward(f, &(0..f.len()).collect())?;
        &g
    };
    let (total, _) = f.cellular_total_complex();
    let degrees = total.cohomology();
    Ok(Hypercohomology { total, degrees })
}

/// Dimensions only.
pub fn sheaf_cohomology_dims(f: &SheafComplex) -> Result<Vec<(i32, usize)>> {
    let g;
    let f = if f.is_global() {
        f
    } else {
        g = derived_pushforward(f, &(0..f.len()).collect())?;
        &g
    };
    let (total, _) = f.cellular_total_complex();
    Ok(total.degrees().zip(total.cohomology_dims()).collect())
}

/// Objectwise truncation `τ_{≤k}` on every cell.
pub fn truncate(f: &SheafComplex, k: i32) -> Result<SheafComplex> {
    let cells: BTreeSet<usize> = (0..f.len()).collect();
    truncate_on(f, k, &cells, |s| default_kept(f, s, k))
}

/// `ker d^k` of the stalk at `s`.
pub fn default_kept(f: &SheafComplex, s: usize, k: i32) -> Subspace {
    echelon::kernel_subspace(&f.stalk(s).diff(k))
}

/// Truncation on a down-closed set of cells: degrees below `k` unchanged,
/// degree `k` replaced by `kept(σ)` (which must contain `im d^{k-1}` and lie
/// in `ker d^k`), degrees above `k` zero. Other cells are untouched.
pub fn truncate_on(f: &SheafComplex, k: i32, cells: &BTreeSet<usize>, kept: impl Fn(usize) -> Subspace + Sync) -> Result<SheafComplex> {
    let range = f.degree_range();
    let (lo, hi) = (range.start, range.end);
    let n = f.len();
    let kept_spaces: Vec<Option<Subspace>> =
        (0..n).into_par_iter().map(|s| if !cells.contains(&s) || k < lo || k >= hi { None } else { Some(kept(s)) }).collect();
    let truncated = |s: usize| cells.contains(&s);
    let stalks: Vec<CochainComplex> = (0..n)
        .into_par_iter()
        .map(|s| -> Result<CochainComplex> {
            if !truncated(s) {
                return Ok(f.stalk(s).clone());
            }
            let c = f.stalk(s);
            let dims: Vec<usize> = (lo..hi)
                .map(|d| match d.cmp(&k) {
                    std::cmp::Ordering::Less => c.dim(d),
                    std::cmp::Ordering::Equal => kept_spaces[s].as_ref().map_or(0, |w| w.dim()),
                    std::cmp::Ordering::Greater => 0,
                })
                .collect();
            let diffs = (lo..hi - 1)
                .map(|d| {
                    let (r, cdim) = (dims[(d + 1 - lo) as usize], dims[(d - lo) as usize]);
                    if d + 1 < k {
                        Ok(c.diff(d))
                    } else if d + 1 == k {
                        let w = kept_spaces[s].as_ref().expect("kept space in range");
                        let cols = c
                            .diff(d)
                            .columns()
                            .iter()
                            .map(|col| {
                                w.coords_sparse(col)
                                    .ok_or_else(|| Error::InvalidComplex(format!("image of d^{d} at cell {s} escapes the kept subspace")))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(ExactMatrix::from_columns(r, &cols))
                    } else {
                        Ok(ExactMatrix::zeros(r, cdim))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            CochainComplex::new_unchecked(lo, dims, diffs)
        })
        .collect::<Result<_>>()?;
    let restr = (0..n)
        .into_par_iter()
        .map(|s| -> Result<Vec<Vec<ExactMatrix>>> {
            f.poset().up[s]
                .iter()
                .map(|(t, _)| {
                    let t = *t;
                    (lo..hi)
                        .map(|d| {
                            let (rows, cols) = (stalks[t].dim(d), stalks[s].dim(d));
                            let rho = f.cover_map(s, t, d);
                            if (d < k) || (!truncated(s) && !truncated(t)) {
                                return Ok(rho.clone());
                            }
                            if d > k {
                                return Ok(ExactMatrix::zeros(rows, cols));
                            }
                            // d == k
                            let src: Vec<SparseVec> = match &kept_spaces[s] {
                                Some(w) if truncated(s) => w.basis.iter().map(|b| rho.apply(b)).collect(),
                                _ => rho.columns(),
                            };
                            let cols_v = match &kept_spaces[t] {
                                Some(w) if truncated(t) => src
                                    .iter()
                                    .map(|v| {
                                        w.coords_sparse(v).ok_or_else(|| {
                                            Error::InvalidComplex(format!("restriction {s} -> {t} leaves the kept subspace"))
                                        })
                                    })
                                    .collect::<Result<Vec<_>>>()?,
                                _ => src,
                            };
                            Ok(ExactMatrix::from_columns(rows, &cols_v))
                        })
                        .collect()
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    SheafComplex::new_unchecked(f.poset().clone(), f.domain().to_vec(), lo, hi, stalks, restr)
}

/// Zero-padded stalk of an arbitrary complex over `lo..hi`.
pub fn padded(c: &CochainComplex, lo: i32, hi: i32) -> CochainComplex {
    pad(c, lo, hi)
}

/// JSON debug dump: stalk dimensions per degree and restriction triples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SheafDump {
    pub degrees: (i32, i32),
    pub domain: Vec<usize>,
    pub stalks: Vec<Vec<usize>>,
    pub restrictions: Vec<RestrictionDump>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictionDump {
    pub from: usize,
    pub to: usize,
    pub degree: i32,
    pub matrix: crate::linalg::MatrixDump,
}

pub fn dump(f: &SheafComplex) -> SheafDump {
    let r = f.degree_range();
    let mut restrictions = Vec::new();
    for s in 0..f.len() {
        for (t, _) in &f.poset().up[s] {
            for d in r.clone() {
                let m = f.cover_map(s, *t, d);
                if !m.is_zero() {
                    restrictions.push(RestrictionDump { from: s, to: *t, degree: d, matrix: m.to_triples() });
                }
            }
        }
    }
    SheafDump {
        degrees: (r.start, r.end),
        domain: (0..f.len()).filter(|s| f.domain()[*s]).collect(),
        stalks: (0..f.len()).map(|s| f.stalk(s).dims().to_vec()).collect(),
        restrictions,
    }
}
