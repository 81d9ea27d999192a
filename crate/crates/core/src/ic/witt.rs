use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::space::{SimplicialComplex, StratifiedComplex};

/// Link of `cell` transverse to the stratum at level `p`: the simplices
/// `ρ \ σ` for cofaces `ρ ⊋ σ` lying above level `p`, with its vertex map.
pub fn transverse_link(s: &StratifiedComplex, cell: usize, p: usize) -> (SimplicialComplex, Vec<usize>) {
    let cx = s.complex();
    let sigma = cx.simplex(cell).to_vec();
    let taus: BTreeSet<Vec<usize>> = cx
        .star(cell)
        .into_iter()
        .filter(|t| *t != cell && s.level_of(*t) > p)
        .map(|t| cx.simplex(t).iter().copied().filter(|v| !sigma.contains(v)).collect())
        .collect();
    let closed: BTreeSet<Vec<usize>> = taus
        .iter()
        .flat_map(|t| {
            (1..1u32 << t.len()).map(move |mask| t.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|x| *x.1).collect())
        })
        .collect();
    cx.induced(closed.into_iter().collect())
}

/// Components of the stratum at level `p` under the face relation, each a
/// sorted list of cells.
pub fn stratum_components(s: &StratifiedComplex, p: usize) -> Vec<Vec<usize>> {
    let cells: BTreeSet<usize> = s.stratum(p).into_iter().collect();
    let poset = s.poset();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &c in &cells {
        if !seen.insert(c) {
            continue;
        }
        let mut comp = vec![c];
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            for (y, _) in poset.up[x].iter().chain(poset.down[x].iter()) {
                if cells.contains(y) && seen.insert(*y) {
                    comp.push(*y);
                    stack.push(*y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// A singular stratum component with its reference cell (first cell of
/// maximal dimension) and transverse link there.
#[derive(Debug, Clone)]
pub struct StratumLink {
    pub level: usize,
    pub component: usize,
    pub codim: usize,
    pub cell: usize,
    pub link: SimplicialComplex,
    pub vmap: Vec<usize>,
}

/// Links of every component of every non-top stratum, in level order.
pub fn stratum_links(s: &StratifiedComplex) -> Vec<StratumLink> {
    let top = s.top_level();
    let n = s.dim();
    let mut out = Vec::new();
    for p in s.stratum_levels() {
        if p == top {
            continue;
        }
        let sd = s.stratum_dim(p).unwrap_or(0);
        for (ci, comp) in stratum_components(s, p).into_iter().enumerate() {
            let cx = s.complex();
            let cell = *comp.iter().max_by(|a, b| cx.simplex_dim(**a).cmp(&cx.simplex_dim(**b)).then(b.cmp(a))).unwrap();
            let (link, vmap) = transverse_link(s, cell, p);
            out.push(StratumLink { level: p, component: ci, codim: n.saturating_sub(sd), cell, link, vmap });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittRow {
    pub level: usize,
    pub component: usize,
    pub codim: usize,
    pub link_betti: Vec<usize>,
    /// `Some(m)` for odd codimension, where `m = (codim - 1) / 2`.
    pub middle_degree: Option<usize>,
    pub middle_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittReport {
    pub witt: bool,
    pub strata: Vec<WittRow>,
}

impl WittReport {
    /// Levels with a component whose middle link cohomology is nonzero.
    pub fn non_witt_levels(&self) -> BTreeSet<usize> {
        self.strata.iter().filter(|r| r.middle_dim > 0).map(|r| r.level).collect()
    }
}

pub fn witt_check(s: &StratifiedComplex) -> WittReport {
    let strata: Vec<WittRow> = stratum_links(s)
        .into_iter()
        .map(|l| {
            let betti = l.link.cochain_complex().cohomology_dims();
            let middle_degree = (l.codim % 2 == 1).then_some((l.codim - 1) / 2);
            let middle_dim = middle_degree.map_or(0, |m| betti.get(m).copied().unwrap_or(0));
            WittRow { level: l.level, component: l.component, codim: l.codim, link_betti: betti, middle_degree, middle_dim }
        })
        .collect();
    WittReport { witt: strata.iter().all(|r| r.middle_dim == 0), strata }
}
