use std::collections::BTreeSet;

use rayon::prelude::*;

use super::complex::SheafComplex;
use crate::error::{Error, Result};
use crate::linalg::complex::tensor_offsets;
use crate::linalg::{tensor_complex, CochainComplex, ExactMatrix, FGAbelianGroup};
use crate::space::StratifiedComplex;

/// Factor cells `(π₁, π₂)` of every cell of `product(a, b)`.
pub fn product_projections(a: &StratifiedComplex, b: &StratifiedComplex, prod: &StratifiedComplex) -> Vec<(usize, usize)> {
    let nb = b.complex().vertex_count();
    prod.complex()
        .simplices()
        .iter()
        .map(|s| {
            let p1: Vec<usize> = s.iter().map(|v| v / nb).collect::<BTreeSet<_>>().into_iter().collect();
            let p2: Vec<usize> = s.iter().map(|v| v % nb).collect::<BTreeSet<_>>().into_iter().collect();
            (a.complex().index_of(&p1).expect("projection"), b.complex().index_of(&p2).expect("projection"))
        })
        .collect()
}

/// `f ⊠ g` on the product: stalk `f(π₁) ⊗ g(π₂)`, restrictions are tensor
/// products of factor restrictions (no sign, the maps have degree zero).
pub fn external_tensor(f: &SheafComplex, g: &SheafComplex, prod: &StratifiedComplex, proj: &[(usize, usize)]) -> Result<SheafComplex> {
    let poset = prod.poset().clone();
    let n = prod.len();
    if proj.len() != n {
        return Err(Error::ShapeMismatch("projection list does not match the product".into()));
    }
    let (fr, gr) = (f.degree_range(), g.degree_range());
    let (lo, hi) = (fr.start + gr.start, (fr.end + gr.end - 1).max(fr.start + gr.start));
    let domain: Vec<bool> = proj.iter().map(|(a, b)| f.domain()[*a] && g.domain()[*b]).collect();
    let stalks: Vec<CochainComplex> = proj
        .par_iter()
        .map(|(a, b)| {
            let t = tensor_complex(f.stalk(*a), g.stalk(*b));
            super::complex::pad(&t, lo, hi)
        })
        .collect();
    let restr = (0..n)
        .into_par_iter()
        .map(|s| {
            poset.up[s]
                .iter()
                .map(|(t, _)| {
                    let (a, b) = proj[s];
                    let (a2, b2) = proj[*t];
                    (lo..hi)
                        .map(|k| {
                            let mut m = ExactMatrix::zeros(stalks[*t].dim(k), stalks[s].dim(k));
                            let src = tensor_offsets(f.stalk(a), g.stalk(b), k);
                            let dst = tensor_offsets(f.stalk(a2), g.stalk(b2), k);
                            for (p, q, off) in src {
                                if let Some((_, _, o)) = dst.iter().find(|(pp, _, _)| *pp == p) {
                                    let blk = f.restriction(a, a2, p).kron(&g.restriction(b, b2, q));
                                    m.add_block(*o, off, &blk);
                                }
                            }
                            m
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    SheafComplex::new(poset, domain, lo, hi, stalks, restr)
}

/// Constant sheaf with an integral coefficient group on a closed skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralConstantSheaf {
    pub support: BTreeSet<usize>,
    pub group: FGAbelianGroup,
}

impl IntegralConstantSheaf {
    pub fn on_level(s: &StratifiedComplex, p: usize) -> Result<Self> {
        if !s.levels().contains(&p) {
            return Err(Error::StratumNotFound(p));
        }
        Ok(IntegralConstantSheaf { support: s.skeleton(p).into_iter().collect(), group: s.coefficient(p) })
    }

    /// Sections over an open set: one copy of the group per component of
    /// the support inside it (components under the face relation).
    pub fn sections(&self, s: &StratifiedComplex, open: &BTreeSet<usize>) -> Result<FGAbelianGroup> {
        s.poset().check_open(open)?;
        let cells: Vec<usize> = self.support.intersection(open).copied().collect();
        Ok(self.group.power(count_components(s, &cells)))
    }

    pub fn external_tensor(&self, other: &Self, proj: &[(usize, usize)]) -> Self {
        let support = (0..proj.len()).filter(|i| self.support.contains(&proj[*i].0) && other.support.contains(&proj[*i].1)).collect();
        IntegralConstantSheaf { support, group: self.group.tensor(&other.group) }
    }
}

fn count_components(s: &StratifiedComplex, cells: &[usize]) -> usize {
    let set: BTreeSet<usize> = cells.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &c in cells {
        if !seen.insert(c) {
            continue;
        }
        count += 1;
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            let p = s.poset();
            for (y, _) in p.up[x].iter().chain(p.down[x].iter()) {
                if set.contains(y) && seen.insert(*y) {
                    stack.push(*y);
                }
            }
        }
    }
    count
}

/// `⊕_p Γ(X^p, G^p)`, listed per level.
pub fn graded_sections_functor(s: &StratifiedComplex) -> Vec<(usize, FGAbelianGroup)> {
    s.levels().iter().map(|p| (*p, s.coefficient(*p).power(s.connected_components(*p).len()))).collect()
}

/// Direct sum over levels of [`graded_sections_functor`].
pub fn total_sections(s: &StratifiedComplex) -> FGAbelianGroup {
    graded_sections_functor(s).iter().fold(FGAbelianGroup::trivial(), |acc, (_, g)| acc.direct_sum(g))
}
