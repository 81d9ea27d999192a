use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::complex::{pad, SheafComplex};
use crate::error::{Error, Result};
use crate::linalg::{CochainComplex, ExactMatrix, Rat};

/// Bar-model stalk over the poset `Q` of cells of `U` above a cell.
///
/// Degree `t` is `⊕ F^{t-n}(q_n)` over strict chains `q_0 < … < q_n` in `Q`,
/// with `d = d_bar + (-1)^n d_F` where `d_bar` is the alternating sum over
/// deleted positions and deleting the top element pushes forward along
/// `F(q_n ≤ q_{n+1})`.
#[derive(Debug, Clone)]
pub struct BarStalk {
    pub chains: Vec<Vec<usize>>,
    pub index: HashMap<Vec<usize>, usize>,
    /// Per degree `t - lo`: chain id → offset in that degree.
    pub offsets: Vec<HashMap<usize, usize>>,
    pub complex: CochainComplex,
}

struct Pusher<'a> {
    f: &'a SheafComplex,
    memo: HashMap<(usize, usize, i32), ExactMatrix>,
}

impl Pusher<'_> {
    fn get(&mut self, a: usize, b: usize, q: i32) -> &ExactMatrix {
        let f = self.f;
        self.memo.entry((a, b, q)).or_insert_with(|| {
            if f.degree_range().contains(&q) {
                f.restriction(a, b, q)
            } else {
                ExactMatrix::zeros(0, 0)
            }
        })
    }
}

fn enumerate_chains(f: &SheafComplex, q: &[usize]) -> Vec<Vec<usize>> {
    let poset = f.poset();
    let greater: HashMap<usize, Vec<usize>> = q.iter().map(|x| (*x, poset.up_set(*x).into_iter().filter(|y| y != x).collect())).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = q.iter().map(|x| vec![*x]).collect();
    while let Some(c) = stack.pop() {
        for y in &greater[c.last().unwrap()] {
            let mut d = c.clone();
            d.push(*y);
            stack.push(d);
        }
        out.push(c);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Builds the bar stalk over `q` (sorted cells) on degrees `lo..hi`.
pub fn bar_stalk(f: &SheafComplex, q: &[usize], lo: i32, hi: i32) -> BarStalk {
    let chains = enumerate_chains(f, q);
    let index: HashMap<Vec<usize>, usize> = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let fdim = |cell: usize, d: i32| f.stalk(cell).dim(d);
    let mut offsets = Vec::new();
    let mut dims = Vec::new();
    for t in lo..hi {
        let mut m = HashMap::new();
        let mut off = 0;
        for (id, c) in chains.iter().enumerate() {
            let n = c.len() as i32 - 1;
            let dd = fdim(*c.last().unwrap(), t - n);
            if dd > 0 {
                m.insert(id, off);
                off += dd;
            }
        }
        offsets.push(m);
        dims.push(off);
    }
    let mut pusher = Pusher { f, memo: HashMap::new() };
    let mut diffs = Vec::new();
    for t in lo..hi - 1 {
        let ti = (t - lo) as usize;
        let mut triples = Vec::new();
        // d_bar: from (c, q) in degree t to (c', q) in degree t + 1
        for (id2, c2) in chains.iter().enumerate() {
            let Some(&row0) = offsets[ti + 1].get(&id2) else { continue };
            let n2 = c2.len() as i32 - 1;
            if n2 == 0 {
                continue;
            }
            let q = t + 1 - n2;
            for i in 0..c2.len() {
                let mut c = c2.clone();
                c.remove(i);
                let id = index[&c];
                let Some(&col0) = offsets[ti].get(&id) else { continue };
                let sign = Rat::pow_sign(i as i64);
                if i + 1 == c2.len() {
                    let m = pusher.get(*c.last().unwrap(), *c2.last().unwrap(), q);
                    for (r, cc, x) in m.entries() {
                        triples.push((row0 + r, col0 + cc, &sign * x));
                    }
                } else {
                    for j in 0..fdim(*c.last().unwrap(), q) {
                        triples.push((row0 + j, col0 + j, sign.clone()));
                    }
                }
            }
        }
        // (-1)^n d_F within each chain
        for (id, c) in chains.iter().enumerate() {
            let (Some(&col0), Some(&row0)) = (offsets[ti].get(&id), offsets[ti + 1].get(&id)) else { continue };
            let n = c.len() as i64 - 1;
            let q = t - n as i32;
            let sign = Rat::pow_sign(n);
            for (r, cc, x) in f.stalk(*c.last().unwrap()).diff(q).entries() {
                triples.push((row0 + r, col0 + cc, &sign * x));
            }
        }
        diffs.push(ExactMatrix::from_triples(dims[ti + 1], dims[ti], triples));
    }
    let complex = CochainComplex::new_unchecked(lo, dims, diffs).expect("bar complex shapes");
    BarStalk { chains, index, offsets, complex }
}

/// `Rj_*` along the inclusion of the domain `U` of `f` into the open set
/// `target ⊇ U`. Cells of `Z = target \ U` and cells of `U` with a face in
/// `Z` receive bar stalks; the rest keep the stalks of `f`. A non-bar cell
/// restricts to a bar cell through the coaugmentation onto 0-chains.
pub fn derived_pushforward(f: &SheafComplex, target: &BTreeSet<usize>) -> Result<SheafComplex> {
    let poset = f.poset().clone();
    let n = f.len();
    if poset.check_open(target).is_err() {
        return Err(Error::NotOpenComplement);
    }
    let u: BTreeSet<usize> = (0..n).filter(|s| f.domain()[*s]).collect();
    if !u.is_subset(target) {
        return Err(Error::NotOpenComplement);
    }
    let z: BTreeSet<usize> = target.difference(&u).copied().collect();
    if z.is_empty() {
        return Ok(f.clone());
    }
    let bar: BTreeSet<usize> =
        target.iter().copied().filter(|s| z.contains(s) || poset.down_set(*s).iter().any(|d| z.contains(d))).collect();
    let range = f.degree_range();
    let maxlen = bar
        .iter()
        .map(|s| {
            let dims: Vec<usize> = poset.up_set(*s).iter().filter(|x| u.contains(x)).map(|x| poset.dims[*x]).collect();
            match (dims.iter().min(), dims.iter().max()) {
                (Some(a), Some(b)) => (b - a) as i32,
                _ => 0,
            }
        })
        .max()
        .unwrap_or(0);
    let (lo, hi) = (range.start, range.end + maxlen);
    let bar_list: Vec<usize> = bar.iter().copied().collect();
    let stalks_bar: HashMap<usize, BarStalk> = bar_list
        .par_iter()
        .map(|s| {
            let q: Vec<usize> = poset.up_set(*s).into_iter().filter(|x| u.contains(x)).collect();
            (*s, bar_stalk(f, &q, lo, hi))
        })
        .collect();
    let stalks: Vec<CochainComplex> = (0..n)
        .map(|s| match stalks_bar.get(&s) {
            Some(b) => b.complex.clone(),
            None if u.contains(&s) => pad(f.stalk(s), lo, hi),
            None => pad(&CochainComplex::zero(), lo, hi),
        })
        .collect();
    let restr: Vec<Vec<Vec<ExactMatrix>>> = (0..n)
        .into_par_iter()
        .map(|s| {
            poset.up[s]
                .iter()
                .map(|(t, _)| {
                    let t = *t;
                    (lo..hi)
                        .map(|d| {
                            let (rows, cols) = (stalks[t].dim(d), stalks[s].dim(d));
                            let di = (d - lo) as usize;
                            match (stalks_bar.get(&s), stalks_bar.get(&t)) {
                                (Some(bs), Some(bt)) => {
                                    let mut triples = Vec::new();
                                    for (id_t, row0) in &bt.offsets[di] {
                                        let c = &bt.chains[*id_t];
                                        let id_s = bs.index[c];
                                        let col0 = bs.offsets[di][&id_s];
                                        let k = d - (c.len() as i32 - 1);
                                        for j in 0..f.stalk(*c.last().unwrap()).dim(k) {
                                            triples.push((row0 + j, col0 + j, Rat::int(1)));
                                        }
                                    }
                                    ExactMatrix::from_triples(rows, cols, triples)
                                }
                                (None, Some(bt)) if u.contains(&s) => {
                                    let mut m = ExactMatrix::zeros(rows, cols);
                                    for (id_t, row0) in &bt.offsets[di] {
                                        let c = &bt.chains[*id_t];
                                        if c.len() == 1 {
                                            m.add_block(*row0, 0, &f.restriction(s, c[0], d));
                                        }
                                    }
                                    m
                                }
                                (None, None) if u.contains(&s) && range.contains(&d) => f.cover_map(s, t, d).clone(),
                                (Some(_), None) => unreachable!("bar cells form an up-set"),
                                _ => ExactMatrix::zeros(rows, cols),
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let domain = (0..n).map(|s| target.contains(&s)).collect();
    SheafComplex::new_unchecked(poset, domain, lo, hi, stalks, restr)
}
