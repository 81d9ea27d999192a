use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mezzo::Mezzoperversity;
use super::perversity::Perversity;
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::sheaf::{constant_on_open, default_kept, derived_pushforward, sheaf_cohomology_dims, truncate_on, SheafComplex};
use crate::space::StratifiedComplex;

/// Vanishing table of stalk cohomology above the cutoff of each stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportCertificate {
    pub holds: bool,
    pub rows: Vec<SupportRow>,
    pub first_violation: Option<SupportViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportRow {
    pub level: usize,
    pub cutoff: i32,
    /// `(degree, every stalk on the stratum vanishes there or degree ≤ cutoff)`.
    pub degrees: Vec<(i32, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportViolation {
    pub level: usize,
    pub cell: usize,
    pub degree: i32,
    pub dim: usize,
}

/// Output of a truncation ladder.
#[derive(Debug, Clone)]
pub struct ICResult {
    pub complex: SheafComplex,
    /// Perversity name, or `stratum-dimension` for the de Rham ladder.
    pub label: String,
    pub perversity: Option<Perversity>,
    /// Truncation degree per singular level.
    pub cutoffs: BTreeMap<usize, i32>,
    /// Levels where a mezzoperversity replaced the middle truncation.
    pub modified_levels: Vec<usize>,
    pub mezzo: Option<Mezzoperversity>,
    /// `dim ℍ^k` for `k = 0..=dim X`.
    pub ih: Vec<usize>,
    pub support: SupportCertificate,
}

impl ICResult {
    /// Stalk cohomology dimensions at a cell on degrees `0..=dim X`.
    pub fn stalk_dims(&self, cell: usize) -> Vec<usize> {
        let c = self.complex.stalk(cell).cohomology_dims();
        let start = self.complex.degree_range().start;
        (0..self.ih.len() as i32).map(|k| c.get((k - start) as usize).copied().unwrap_or(0)).collect()
    }
}

/// Truncation degrees `p̄(codim)` of every singular stratum.
pub fn perversity_cutoffs(s: &StratifiedComplex, p: &Perversity) -> Result<BTreeMap<usize, i32>> {
    let top = s.top_level();
    let n = s.dim();
    let mut out = BTreeMap::new();
    for level in s.stratum_levels() {
        if level == top {
            continue;
        }
        let codim = n - s.stratum_dim(level).unwrap_or(0);
        if codim < 2 {
            return Err(Error::CodimensionOne { level });
        }
        let v = p.value(codim).ok_or_else(|| Error::Unsupported(format!("perversity {p} has no value at codimension {codim}")))?;
        out.insert(level, v);
    }
    Ok(out)
}

/// Truncation degrees `dim S^p` of every singular stratum.
pub fn stratum_dimension_cutoffs(s: &StratifiedComplex) -> BTreeMap<usize, i32> {
    let top = s.top_level();
    s.stratum_levels().into_iter().filter(|p| *p != top).map(|p| (p, s.stratum_dim(p).unwrap_or(0) as i32)).collect()
}

/// Replacement kept subspaces for one ladder step, keyed by cell.
pub(crate) type KeptOverride = HashMap<usize, Subspace>;

/// Runs `τ_{≤c(p)} Rj_*` from the top stratum down through every lower level.
/// `modify(level, before, pushed, stratum)` may supply kept subspaces for the
/// truncation at that level.
pub(crate) fn ladder<F>(s: &StratifiedComplex, cutoffs: &BTreeMap<usize, i32>, mut modify: F) -> Result<SheafComplex>
where
    F: FnMut(usize, &SheafComplex, &SheafComplex, &BTreeSet<usize>) -> Result<Option<KeptOverride>>,
{
    let top = s.top_level();
    let open: BTreeSet<usize> = s.stratum(top).into_iter().collect();
    if open.is_empty() {
        return Err(Error::EmptyRegularPart);
    }
    let rank = s.coefficient(top).rational_rank();
    let mut f = constant_on_open(s, &open, rank)?;
    let mut domain = open;
    for level in s.stratum_levels().into_iter().rev().filter(|p| *p != top) {
        let z: BTreeSet<usize> = s.stratum(level).into_iter().collect();
        domain.extend(z.iter().copied());
        let pushed = derived_pushforward(&f, &domain)?;
        let k = cutoffs[&level];
        let over = modify(level, &f, &pushed, &z)?.unwrap_or_default();
        f = truncate_on(&pushed, k, &z, |c| over.get(&c).cloned().unwrap_or_else(|| default_kept(&pushed, c, k)))?;
    }
    Ok(f)
}

/// `ℍ^k` on `0..=n`.
pub(crate) fn hyper_dims(f: &SheafComplex, n: usize) -> Result<Vec<usize>> {
    let dims = sheaf_cohomology_dims(f)?;
    Ok((0..=n as i32).map(|k| dims.iter().find(|(d, _)| *d == k).map_or(0, |x| x.1)).collect())
}

pub fn support_certificate(f: &SheafComplex, cutoffs: &BTreeMap<usize, i32>) -> SupportCertificate {
    let range = f.degree_range();
    let levels = &f.poset().levels;
    let mut rows = Vec::new();
    let mut first_violation = None;
    for (&level, &cutoff) in cutoffs {
        let cells: Vec<usize> = (0..f.len()).filter(|c| levels[*c] == level).collect();
        let coh: Vec<(usize, Vec<usize>)> = cells.par_iter().map(|c| (*c, f.stalk_cohomology(*c))).collect();
        let mut degrees = Vec::new();
        for d in range.clone() {
            let mut ok = true;
            if d > cutoff {
                for (c, h) in &coh {
                    let dim = h[(d - range.start) as usize];
                    if dim > 0 {
                        ok = false;
                        if first_violation.is_none() {
                            first_violation = Some(SupportViolation { level, cell: *c, degree: d, dim });
                        }
                        break;
                    }
                }
            }
            degrees.push((d, ok));
        }
        rows.push(SupportRow { level, cutoff, degrees });
    }
    SupportCertificate { holds: first_violation.is_none(), rows, first_violation }
}

/// Support certificate of a constructed complex against its own cutoffs.
pub fn verify_support_conditions(r: &ICResult) -> SupportCertificate {
    support_certificate(&r.complex, &r.cutoffs)
}

/// Support certificate of an arbitrary candidate complex against `p`.
pub fn verify_candidate(s: &StratifiedComplex, f: &SheafComplex, p: &Perversity) -> Result<SupportCertificate> {
    Ok(support_certificate(f, &perversity_cutoffs(s, p)?))
}

pub fn deligne_construction(s: &StratifiedComplex, p: &Perversity) -> Result<ICResult> {
    let cutoffs = perversity_cutoffs(s, p)?;
    let complex = ladder(s, &cutoffs, |_, _, _, _| Ok(None))?;
    finish(s, complex, p.to_string(), Some(p.clone()), cutoffs, None)
}

pub(crate) fn finish(
    s: &StratifiedComplex,
    complex: SheafComplex,
    label: String,
    perversity: Option<Perversity>,
    cutoffs: BTreeMap<usize, i32>,
    mezzo: Option<Mezzoperversity>,
) -> Result<ICResult> {
    let ih = hyper_dims(&complex, s.dim())?;
    let support = support_certificate(&complex, &cutoffs);
    let modified_levels = mezzo.as_ref().map(|m| m.levels().into_iter().collect()).unwrap_or_default();
    Ok(ICResult { complex, label, perversity, cutoffs, modified_levels, mezzo, ih, support })
}
