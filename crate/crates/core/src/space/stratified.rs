use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::simplicial::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::FGAbelianGroup;

/// One checked pair of strata for the frontier condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierPair {
    pub lower: usize,
    pub upper: usize,
    /// Whether the lower stratum lies in the closure of the upper one.
    pub in_closure: bool,
}

/// Face poset of a stratified complex: one element per simplex, ordered by
/// the face relation. Covering pairs carry the incidence sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePoset {
    pub dims: Vec<usize>,
    pub levels: Vec<usize>,
    pub down: Vec<Vec<(usize, i8)>>,
    pub up: Vec<Vec<(usize, i8)>>,
}

impl FacePoset {
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// All elements `≥ i`, ascending.
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        walk(i, &self.up)
    }

    /// All elements `≤ i`, ascending.
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        walk(i, &self.down)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || (self.dims[a] < self.dims[b] && self.down_set(b).binary_search(&a).is_ok())
    }

    /// Checks that `set` is an up-set (open in the Alexandrov topology).
    pub fn check_open(&self, set: &BTreeSet<usize>) -> Result<()> {
        for &s in set {
            if let Some((t, _)) = self.up[s].iter().find(|(t, _)| !set.contains(t)) {
                return Err(Error::NotOpen(vec![*t]));
            }
        }
        Ok(())
    }

    pub fn check_closed(&self, set: &BTreeSet<usize>) -> Result<()> {
        for &s in set {
            if let Some((t, _)) = self.down[s].iter().find(|(t, _)| !set.contains(t)) {
                return Err(Error::SubcomplexNotClosed(vec![*t]));
            }
        }
        Ok(())
    }
}

fn walk(i: usize, adj: &[Vec<(usize, i8)>]) -> Vec<usize> {
    let mut seen = BTreeSet::from([i]);
    let mut stack = vec![i];
    while let Some(s) = stack.pop() {
        for (t, _) in &adj[s] {
            if seen.insert(*t) {
                stack.push(*t);
            }
        }
    }
    seen.into_iter().collect()
}

/// Simplicial complex with a closed filtration `X^p` and coefficient groups.
///
/// `levels` lists the declared filtration indices in increasing order; the
/// last one is the whole complex. A simplex has level `p` when it lies in
/// `X^p` but not in the previous declared level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedComplex {
    complex: SimplicialComplex,
    levels: Vec<usize>,
    level_of: Vec<usize>,
    coefficients: BTreeMap<usize, FGAbelianGroup>,
    frontier: Vec<FrontierPair>,
    poset: Arc<FacePoset>,
    pub metadata: BTreeMap<String, String>,
}

/// Validates a filtration given as simplex-index sets per level.
pub fn build_stratified(
    complex: SimplicialComplex,
    filtration: &BTreeMap<usize, BTreeSet<usize>>,
    coefficients: &BTreeMap<usize, FGAbelianGroup>,
) -> Result<StratifiedComplex> {
    let n = complex.len();
    if n == 0 {
        return Err(Error::InvalidComplex("empty complex".into()));
    }
    let filtration: BTreeMap<usize, BTreeSet<usize>> =
        if filtration.is_empty() { BTreeMap::from([(complex.dim() as usize, (0..n).collect())]) } else { filtration.clone() };
    let mut prev: Option<&BTreeSet<usize>> = None;
    for (p, set) in &filtration {
        if let Some(bad) = set.iter().find(|s| **s >= n) {
            return Err(Error::FiltrationNotNested(format!("level {p} names unknown simplex {bad}")));
        }
        if let Err(f) = complex.is_down_closed(set) {
            return Err(Error::FiltrationNotClosed { level: *p, face: complex.simplex(f).to_vec() });
        }
        if let Some(q) = prev {
            if !q.is_subset(set) {
                return Err(Error::FiltrationNotNested(format!("level {p} does not contain the previous level")));
            }
        }
        prev = Some(set);
    }
    if prev.map(|s| s.len()) != Some(n) {
        return Err(Error::FiltrationNotNested("the top level is not the whole complex".into()));
    }
    let levels: Vec<usize> = filtration.keys().copied().collect();
    let mut level_of = vec![usize::MAX; n];
    for (p, set) in &filtration {
        for &s in set {
            if level_of[s] == usize::MAX {
                level_of[s] = *p;
            }
        }
    }
    let coefficients = levels.iter().map(|p| (*p, coefficients.get(p).cloned().unwrap_or_else(|| FGAbelianGroup::free(1)))).collect();
    let poset = Arc::new(FacePoset {
        dims: (0..n).map(|i| complex.simplex_dim(i)).collect(),
        levels: level_of.clone(),
        down: (0..n).map(|i| complex.faces(i).to_vec()).collect(),
        up: (0..n).map(|i| complex.cofaces(i).to_vec()).collect(),
    });
    let mut s = StratifiedComplex { complex, levels, level_of, coefficients, frontier: Vec::new(), poset, metadata: BTreeMap::new() };
    s.frontier = s.check_frontier()?;
    Ok(s)
}

/// Builds the filtration `X^p = {σ : level(σ) ≤ p}` from per-simplex levels.
pub fn from_levels(
    complex: SimplicialComplex,
    level_of: &[usize],
    coefficients: &BTreeMap<usize, FGAbelianGroup>,
) -> Result<StratifiedComplex> {
    let levels: BTreeSet<usize> = level_of.iter().copied().collect();
    let filtration =
        levels.iter().map(|p| (*p, level_of.iter().enumerate().filter(|(_, l)| **l <= *p).map(|(i, _)| i).collect())).collect();
    build_stratified(complex, &filtration, coefficients)
}

impl StratifiedComplex {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn poset(&self) -> &Arc<FacePoset> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.complex.dim().max(0) as usize
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn top_level(&self) -> usize {
        *self.levels.last().expect("nonempty filtration")
    }

    /// Levels whose stratum is nonempty.
    pub fn stratum_levels(&self) -> Vec<usize> {
        let present: BTreeSet<usize> = self.level_of.iter().copied().collect();
        present.into_iter().collect()
    }

    pub fn level_of(&self, i: usize) -> usize {
        self.level_of[i]
    }

    pub fn level_map(&self) -> &[usize] {
        &self.level_of
    }

    pub fn coefficients(&self) -> &BTreeMap<usize, FGAbelianGroup> {
        &self.coefficients
    }

    pub fn coefficient(&self, p: usize) -> FGAbelianGroup {
        self.coefficients.get(&p).cloned().unwrap_or_else(|| FGAbelianGroup::free(1))
    }

    pub fn set_coefficients(&mut self, coefficients: BTreeMap<usize, FGAbelianGroup>) {
        self.coefficients = coefficients;
    }

    pub fn frontier_certificate(&self) -> &[FrontierPair] {
        &self.frontier
    }

    /// Simplices of the stratum `S^p = X^p \ X^{p-1}`.
    pub fn stratum(&self, p: usize) -> Vec<usize> {
        (0..self.len()).filter(|i| self.level_of[*i] == p).collect()
    }

    /// Simplices of `X^p`.
    pub fn skeleton(&self, p: usize) -> Vec<usize> {
        (0..self.len()).filter(|i| self.level_of[*i] <= p).collect()
    }

    /// Maximal dimension of a simplex in the stratum at level `p`.
    pub fn stratum_dim(&self, p: usize) -> Option<usize> {
        (0..self.len()).filter(|i| self.level_of[*i] == p).map(|i| self.complex.simplex_dim(i)).max()
    }

    pub fn cell(&self, vertices: &[usize]) -> Result<usize> {
        self.complex.require(vertices)
    }

    fn check_frontier(&self) -> Result<Vec<FrontierPair>> {
        let strata = self.stratum_levels();
        let mut out = Vec::new();
        for (a, &p) in strata.iter().enumerate() {
            for &q in &strata[a + 1..] {
                let mut closure = BTreeSet::new();
                for s in self.stratum(q) {
                    closure.extend(self.complex.closure_of(s));
                }
                let lower = self.stratum(p);
                let meets = lower.iter().any(|s| closure.contains(s));
                let inside = lower.iter().all(|s| closure.contains(s));
                if meets && !inside {
                    return Err(Error::FrontierViolation { lower: p, upper: q });
                }
                out.push(FrontierPair { lower: p, upper: q, in_closure: inside });
            }
        }
        Ok(out)
    }

    /// Edge-path components of `X^p`, each a sorted list of simplex indices.
    pub fn connected_components(&self, p: usize) -> Vec<Vec<usize>> {
        let skel = self.skeleton(p);
        let verts: Vec<usize> = skel.iter().copied().filter(|i| self.complex.simplex_dim(*i) == 0).collect();
        let mut parent: BTreeMap<usize, usize> = verts.iter().map(|v| (self.complex.simplex(*v)[0], self.complex.simplex(*v)[0])).collect();
        fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
            let mut r = x;
            while p[&r] != r {
                r = p[&r];
            }
            r
        }
        for &s in &skel {
            if self.complex.simplex_dim(s) == 1 {
                let e = self.complex.simplex(s);
                let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
                if a != b {
                    parent.insert(a.max(b), a.min(b));
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &s in &skel {
            let root = find(&mut parent, self.complex.simplex(s)[0]);
            comps.entry(root).or_default().push(s);
        }
        comps.into_values().collect()
    }

    /// Link of a simplex with the inherited filtration.
    pub fn link(&self, cell: usize) -> Result<(StratifiedComplex, Vec<usize>)> {
        if cell >= self.len() {
            return Err(Error::CellNotFound(vec![cell]));
        }
        let (lk, vmap) = self.complex.link(cell);
        let levels: Vec<usize> = lk
            .simplices()
            .iter()
            .map(|s| {
                let g: Vec<usize> = s.iter().map(|v| vmap[*v]).collect();
                self.level_of[self.complex.index_of(&g).expect("link simplex in ambient")]
            })
            .collect();
        if lk.is_empty() {
            return Err(Error::Unsupported("link of a top-dimensional simplex is empty".into()));
        }
        let coeffs = self.coefficients.clone();
        Ok((from_levels_unchecked(lk, &levels, &coeffs), vmap))
    }

    /// Link simplices avoiding `X^p`: the normal slice of `cell` relative to
    /// the closed skeleton at level `p`, with its vertex map.
    pub fn normal_link(&self, cell: usize, p: usize) -> (SimplicialComplex, Vec<usize>) {
        let sigma = self.complex.simplex(cell).to_vec();
        let mut taus = Vec::new();
        for t in self.complex.star(cell) {
            let tau: Vec<usize> = self.complex.simplex(t).iter().copied().filter(|v| !sigma.contains(v)).collect();
            if tau.is_empty() {
                continue;
            }
            let idx = self.complex.index_of(&tau).expect("face of a simplex");
            let avoids = tau.iter().all(|v| self.level_of[self.complex.index_of(&[*v]).unwrap()] > p);
            if avoids {
                debug_assert!(self.level_of[idx] > p);
                taus.push(tau);
            }
        }
        self.complex.induced(taus)
    }

    /// Same complex with new per-simplex levels.
    pub fn relevel(&self, level_of: &[usize], coefficients: &BTreeMap<usize, FGAbelianGroup>) -> Result<StratifiedComplex> {
        from_levels(self.complex.clone(), level_of, coefficients)
    }
}

/// Inherited filtrations need not satisfy the frontier condition; the
/// certificate is recorded without rejecting.
fn from_levels_unchecked(
    complex: SimplicialComplex,
    level_of: &[usize],
    coefficients: &BTreeMap<usize, FGAbelianGroup>,
) -> StratifiedComplex {
    let n = complex.len();
    let levels: Vec<usize> = level_of.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let poset = Arc::new(FacePoset {
        dims: (0..n).map(|i| complex.simplex_dim(i)).collect(),
        levels: level_of.to_vec(),
        down: (0..n).map(|i| complex.faces(i).to_vec()).collect(),
        up: (0..n).map(|i| complex.cofaces(i).to_vec()).collect(),
    });
    let coefficients = levels.iter().map(|p| (*p, coefficients.get(p).cloned().unwrap_or_else(|| FGAbelianGroup::free(1)))).collect();
    let mut s = StratifiedComplex {
        complex,
        levels,
        level_of: level_of.to_vec(),
        coefficients,
        frontier: Vec::new(),
        poset,
        metadata: BTreeMap::new(),
    };
    s.frontier = s.check_frontier().unwrap_or_default();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::from_facets(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn single_level_circle() {
        let s = build_stratified(triangle(), &BTreeMap::new(), &BTreeMap::new()).unwrap();
        assert_eq!(s.stratum_levels(), vec![1]);
        assert_eq!(s.connected_components(1).len(), 1);
    }

    #[test]
    fn filtration_not_closed() {
        let c = triangle();
        let edge = c.index_of(&[0, 1]).unwrap();
        let f = BTreeMap::from([(0, BTreeSet::from([edge])), (1, (0..c.len()).collect())]);
        assert!(matches!(build_stratified(c, &f, &BTreeMap::new()), Err(Error::FiltrationNotClosed { level: 0, .. })));
    }

    #[test]
    fn frontier_violation() {
        // path 0-1-2 with vertex stratum {0, 2}
        let c = SimplicialComplex::from_facets(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        let levels: Vec<usize> = c
            .simplices()
            .iter()
            .map(|s| match s.as_slice() {
                [0] | [2] => 0,
                [1, 2] => 2,
                _ => 1,
            })
            .collect();
        // stratum 1 = {1, 01}; closure contains 0 but not 2.
        let r = from_levels(c, &levels, &BTreeMap::new());
        assert!(matches!(r, Err(Error::FrontierViolation { lower: 0, upper: 1 })));
    }
}
