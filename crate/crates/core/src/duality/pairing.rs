use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ic::{derham, transverse_link, ICResult};
use crate::linalg::{echelon, sparse, CochainComplex, ExactMatrix, SparseVec, Subspace};
use crate::space::cup::{boundary_faces, cup_pairing, orientation};
use crate::space::{SimplicialComplex, StratifiedComplex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingMatrix {
    pub left_degree: usize,
    pub right_degree: usize,
    pub matrix: ExactMatrix,
    pub nondegenerate: bool,
}

impl PairingMatrix {
    pub fn new(left_degree: usize, right_degree: usize, matrix: ExactMatrix) -> Self {
        let nondegenerate = matrix.rows() == matrix.cols() && echelon::rank(&matrix) == matrix.rows();
        PairingMatrix { left_degree, right_degree, matrix, nondegenerate }
    }
}

/// Condition on the restriction of a degree-`degree` cochain to a link.
#[derive(Debug, Clone)]
enum LinkCondition {
    Cocycles,
    Subspace(Vec<SparseVec>),
}

/// Cochains on the complement of the open stars of the singular vertices
/// whose restriction to each link is unrestricted below a cutoff degree,
/// lies in a space between coboundaries and cocycles at it, and vanishes
/// above it.
#[derive(Debug, Clone)]
pub struct CochainModel {
    pub complex: SimplicialComplex,
    pub orientation: Vec<i8>,
    /// Admissible cochains per degree, in local simplex coordinates.
    pub spaces: Vec<Subspace>,
    /// The admissible subcomplex in the coordinates of `spaces`.
    pub cochains: CochainComplex,
}

struct Boundary {
    cells: Vec<usize>,
    link: SimplicialComplex,
    /// Link simplex index to model simplex index.
    to_model: Vec<usize>,
    cutoff: usize,
    condition: LinkCondition,
}

impl CochainModel {
    pub fn build(s: &StratifiedComplex, ic: &ICResult) -> Result<Self> {
        let cx = s.complex();
        if !boundary_faces(cx).is_empty() {
            return Err(Error::Unsupported("pairing needs a space without boundary".into()));
        }
        let top = s.top_level();
        let n = s.dim();
        let mut singular = Vec::new();
        for p in s.stratum_levels().into_iter().filter(|p| *p != top) {
            for c in s.stratum(p) {
                if cx.simplex_dim(c) != 0 {
                    return Err(Error::Unsupported(format!("stratum at level {p} is not a set of isolated points")));
                }
                singular.push((p, c));
            }
        }
        let sing_vertices: Vec<usize> = singular.iter().map(|(_, c)| cx.simplex(*c)[0]).collect();
        let kept: Vec<Vec<usize>> = cx.simplices().iter().filter(|t| !t.iter().any(|v| sing_vertices.contains(v))).cloned().collect();
        let (model, vmap) = cx.induced(kept);
        let inverse: HashMap<usize, usize> = vmap.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut boundaries = Vec::new();
        for (p, c) in &singular {
            let cutoff = *ic.cutoffs.get(p).ok_or(Error::StratumNotFound(*p))?;
            let site = ic.mezzo.as_ref().and_then(|m| m.sites.iter().find(|x| x.location.as_ref().is_some_and(|l| l.reference_cell == *c)));
            let (link, lmap, condition, cutoff) = match site {
                Some(site) => {
                    let loc = site.location.as_ref().unwrap();
                    (loc.link.clone(), loc.link_vmap.clone(), LinkCondition::Subspace(site.cocycles()), loc.middle_degree)
                }
                None => {
                    let (l, m) = transverse_link(s, *c, *p);
                    (l, m, LinkCondition::Cocycles, cutoff.max(0) as usize)
                }
            };
            let to_model: Vec<usize> = link
                .simplices()
                .iter()
                .map(|t| {
                    let mut v: Vec<usize> = t.iter().map(|x| inverse[&lmap[*x]]).collect();
                    v.sort_unstable();
                    model.index_of(&v).expect("link lies in the model")
                })
                .collect();
            boundaries.push(Boundary { cells: to_model.clone(), link, to_model, cutoff, condition });
        }
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (i, b) in boundaries.iter().enumerate() {
            for c in &b.cells {
                if owner.insert(*c, i).is_some() {
                    return Err(Error::Unsupported("links of singular points overlap".into()));
                }
            }
        }
        let spaces: Vec<Subspace> = (0..=n).map(|k| admissible(&model, &boundaries, k)).collect();
        let dc = model.cochain_complex();
        let diffs: Vec<ExactMatrix> = (0..n)
            .map(|k| {
                let cols: Vec<SparseVec> = spaces[k]
                    .basis
                    .iter()
                    .map(|b| {
                        let image = dc.diff(k as i32).apply(b);
                        spaces[k + 1].coords_sparse(&image).expect("admissible cochains form a subcomplex")
                    })
                    .collect();
                ExactMatrix::from_columns(spaces[k + 1].dim(), &cols)
            })
            .collect();
        let cochains = CochainComplex::new(0, spaces.iter().map(|x| x.dim()).collect(), diffs)?;
        let orientation = orientation(&model)?;
        Ok(CochainModel { complex: model, orientation, spaces, cochains })
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        self.cochains.cohomology_dims()
    }

    /// Cocycle representatives of degree `k` as simplicial cochains.
    pub fn representatives(&self, k: usize) -> Vec<SparseVec> {
        self.cochains
            .cohomology_at(k as i32)
            .representatives
            .iter()
            .map(|c| {
                let mut acc = Vec::new();
                for (i, x) in c {
                    sparse::add_scaled_into(&mut acc, x, &self.spaces[k].basis[*i]);
                }
                acc
            })
            .collect()
    }

    pub fn pairing(&self, k: usize) -> PairingMatrix {
        let n = self.spaces.len() - 1;
        let m = cup_pairing(&self.complex, &self.orientation, &self.representatives(k), k, &self.representatives(n - k), n - k);
        PairingMatrix::new(k, n - k, m)
    }
}

fn admissible(model: &SimplicialComplex, boundaries: &[Boundary], k: usize) -> Subspace {
    let range = model.dim_range(k);
    let mut fixed: BTreeMap<usize, ()> = BTreeMap::new();
    let mut extra = Vec::new();
    for b in boundaries {
        if k < b.cutoff {
            continue;
        }
        let link_range = b.link.dim_range(k);
        let local: Vec<usize> = link_range.clone().map(|i| b.to_model[i] - range.start).collect();
        for l in &local {
            fixed.insert(*l, ());
        }
        if k == b.cutoff {
            let lc = b.link.cochain_complex();
            let allowed: Vec<SparseVec> = match &b.condition {
                LinkCondition::Cocycles => echelon::kernel_basis(&lc.diff(k as i32)),
                LinkCondition::Subspace(w) => w.iter().cloned().chain(lc.diff(k as i32 - 1).columns()).collect(),
            };
            for v in allowed {
                let mut e: SparseVec = v.iter().map(|(i, x)| (local[*i], x.clone())).collect();
                e.sort_by_key(|t| t.0);
                extra.push(e);
            }
        }
    }
    let free = (0..range.len()).filter(|i| !fixed.contains_key(i)).map(|i| vec![(i, crate::linalg::Rat::int(1))]);
    Subspace::span(range.len(), free.chain(extra))
}

/// Pairing of degree `k` with degree `n - k` representatives of the
/// hypercohomology of `ic`.
pub fn duality_pairing(s: &StratifiedComplex, ic: &ICResult, k: usize) -> Result<PairingMatrix> {
    if k > s.dim() {
        return Err(Error::DegreeOutOfRange(k as i64));
    }
    Ok(CochainModel::build(s, ic)?.pairing(k))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub label: String,
    pub ih: Vec<usize>,
    /// Cohomology of the cochain model; equals `ih` when the model is valid.
    pub model_dims: Vec<usize>,
    pub pairings: Vec<PairingMatrix>,
    /// `dim IH^k = dim IH^{n-k}` for all `k`.
    pub mirror_dims: bool,
    pub nondegenerate: bool,
}

pub fn duality_report(s: &StratifiedComplex, ic: &ICResult) -> Result<DualityReport> {
    let model = CochainModel::build(s, ic)?;
    let n = s.dim();
    let pairings: Vec<PairingMatrix> = (0..=n).map(|k| model.pairing(k)).collect();
    let ih = ic.ih.clone();
    Ok(DualityReport {
        label: ic.label.clone(),
        mirror_dims: (0..=n).all(|k| ih[k] == ih[n - k]),
        nondegenerate: pairings.iter().all(|p| p.nondegenerate),
        model_dims: model.cohomology_dims(),
        ih,
        pairings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumDuality {
    pub level: usize,
    pub dimension: usize,
    /// `(k, row_k, row_{d-k}, equal)`.
    pub degrees: Vec<(usize, usize, usize, bool)>,
    /// Ordinary cohomology of the stratum closure with mirror check.
    pub closure_cohomology: Vec<usize>,
    pub closure_mirror: bool,
}

/// Mirror equalities of each stratum row; every stratum closure must be
/// orientable.
pub fn stratumwise_duality(s: &StratifiedComplex) -> Result<Vec<StratumDuality>> {
    let table = derham::stratumwise_table(s)?;
    let mut out = Vec::new();
    for row in &table.strata {
        let closure = derham::stratum_closure(s, row.level);
        orientation(&closure).map_err(|e| Error::NotOrientable(format!("stratum at level {}: {e}", row.level)))?;
        let d = row.dimension;
        let degrees = (0..=d).map(|k| (k, row.row[k], row.row[d - k], row.row[k] == row.row[d - k])).collect();
        let h = closure.cochain_complex().cohomology_dims();
        let closure_mirror = boundary_faces(&closure).is_empty() && (0..h.len()).all(|k| h[k] == h[h.len() - 1 - k]);
        out.push(StratumDuality { level: row.level, dimension: d, degrees, closure_cohomology: h, closure_mirror });
    }
    Ok(out)
}
