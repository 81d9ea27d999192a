use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::deligne::{finish, ladder, stratum_dimension_cutoffs, ICResult};
use crate::error::Result;
use crate::linalg::convolve;
use crate::sheaf::{constant_on_open, sheaf_cohomology_dims};
use crate::space::{from_levels, SimplicialComplex, StratifiedComplex};

/// One stratum of the stratumwise table: cohomology of the open stratum and
/// its row completed by the mirror `k ↦ d_p - k` above the middle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRow {
    pub level: usize,
    /// Real dimension `d_p` of the stratum.
    pub dimension: usize,
    /// `dim H^k(S^p)` for `k = 0..=d_p`.
    pub cohomology: Vec<usize>,
    /// `H^k` for `2k ≤ d_p`, `H^{d_p-k}` above.
    pub row: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumwiseTable {
    pub strata: Vec<StratumRow>,
    /// Degreewise sum of the stratum rows.
    pub total: Vec<usize>,
}

impl StratumwiseTable {
    /// Entries at the middle degrees `⌊n/2⌋` and `⌈n/2⌉` of the total row.
    pub fn middle(&self) -> Vec<usize> {
        let n = self.total.len().saturating_sub(1);
        let mut m = vec![self.total[n / 2]];
        if n % 2 == 1 {
            m.push(self.total[n.div_ceil(2)]);
        }
        m
    }

    /// Convolution of two tables.
    pub fn convolve(&self, other: &StratumwiseTable) -> Vec<usize> {
        convolve(&self.total, &other.total)
    }
}

/// Stratified de Rham complex with its hypercohomology and stratumwise table.
#[derive(Debug, Clone)]
pub struct DeRhamResult {
    pub ic: ICResult,
    pub table: StratumwiseTable,
}

/// Same ladder as the Deligne construction with cutoff `dim S^p` on each
/// singular stratum.
pub fn stratified_de_rham(s: &StratifiedComplex) -> Result<DeRhamResult> {
    let cutoffs = stratum_dimension_cutoffs(s);
    let complex = ladder(s, &cutoffs, |_, _, _, _| Ok(None))?;
    let ic = finish(s, complex, "stratum-dimension".into(), None, cutoffs, None)?;
    Ok(DeRhamResult { ic, table: stratumwise_table(s)? })
}

/// `X^p` as a stratified complex, with the map from its cells to cells of `s`.
pub fn skeleton_space(s: &StratifiedComplex, p: usize) -> Result<(StratifiedComplex, Vec<usize>)> {
    let cx = s.complex();
    let skel = s.skeleton(p);
    let (sub, vmap) = cx.induced(skel.iter().map(|i| cx.simplex(*i).to_vec()).collect());
    let cell_map: Vec<usize> = sub
        .simplices()
        .iter()
        .map(|t| {
            let g: Vec<usize> = t.iter().map(|v| vmap[*v]).collect();
            cx.index_of(&g).expect("skeleton simplex")
        })
        .collect();
    let levels: Vec<usize> = cell_map.iter().map(|c| s.level_of(*c)).collect();
    Ok((from_levels(sub, &levels, s.coefficients())?, cell_map))
}

/// `dim H^k(S^p; ℚ)` of the open stratum at level `p` on `0..=dim X`.
pub fn stratum_cohomology(s: &StratifiedComplex, p: usize) -> Result<Vec<usize>> {
    let (sub, _) = skeleton_space(s, p)?;
    let open: BTreeSet<usize> = sub.stratum(p).into_iter().collect();
    let f = constant_on_open(&sub, &open, 1)?;
    let dims = sheaf_cohomology_dims(&f)?;
    Ok((0..=s.dim() as i32).map(|k| dims.iter().find(|(d, _)| *d == k).map_or(0, |x| x.1)).collect())
}

/// Row of a stratum of dimension `d` completed by the mirror above the middle.
pub fn mirrored_row(h: &[usize], d: usize) -> Vec<usize> {
    let at = |k: usize| h.get(k).copied().unwrap_or(0);
    (0..=d).map(|k| if 2 * k <= d { at(k) } else { at(d - k) }).collect()
}

pub fn stratumwise_table(s: &StratifiedComplex) -> Result<StratumwiseTable> {
    let mut strata = Vec::new();
    let mut total = vec![0; s.dim() + 1];
    for p in s.stratum_levels() {
        let d = s.stratum_dim(p).unwrap_or(0);
        let h = stratum_cohomology(s, p)?;
        let row = mirrored_row(&h, d);
        for (k, x) in row.iter().enumerate() {
            total[k] += x;
        }
        strata.push(StratumRow { level: p, dimension: d, cohomology: h[..=d].to_vec(), row });
    }
    Ok(StratumwiseTable { strata, total })
}

/// Closure of the stratum at level `p` as a simplicial complex.
pub fn stratum_closure(s: &StratifiedComplex, p: usize) -> SimplicialComplex {
    let cx = s.complex();
    let cells: BTreeSet<usize> = s.stratum(p).into_iter().flat_map(|i| cx.closure_of(i)).collect();
    cx.induced(cells.into_iter().map(|i| cx.simplex(i).to_vec()).collect()).0
}

/// Stratumwise rows keyed by level.
pub fn rows_by_level(t: &StratumwiseTable) -> BTreeMap<usize, &StratumRow> {
    t.strata.iter().map(|r| (r.level, r)).collect()
}
