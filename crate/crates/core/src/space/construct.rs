use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::simplicial::SimplicialComplex;
use super::stratified::{from_levels, StratifiedComplex};
use crate::error::{Error, Result};
use crate::linalg::FGAbelianGroup;

fn shifted_coefficients(base: &StratifiedComplex, shift: usize) -> BTreeMap<usize, FGAbelianGroup> {
    let mut c: BTreeMap<usize, FGAbelianGroup> = base.coefficients().iter().map(|(p, g)| (p + shift, g.clone())).collect();
    c.entry(0).or_insert_with(|| FGAbelianGroup::free(1));
    c
}

/// Closed cone: a new apex (the last vertex) joined to every base simplex.
/// The apex forms level 0 and base levels move up by one.
pub fn cone(base: &StratifiedComplex) -> Result<StratifiedComplex> {
    let cx = base.complex();
    let apex = cx.vertex_count();
    let mut simplices: Vec<Vec<usize>> = cx.simplices().to_vec();
    simplices.push(vec![apex]);
    for s in cx.simplices() {
        let mut t = s.clone();
        t.push(apex);
        simplices.push(t);
    }
    let complex = SimplicialComplex::new(apex + 1, &simplices)?;
    let levels: Vec<usize> = complex
        .simplices()
        .iter()
        .map(|s| {
            let b: Vec<usize> = s.iter().copied().filter(|v| *v != apex).collect();
            if b.is_empty() {
                0
            } else {
                base.level_of(cx.index_of(&b).expect("base face")) + 1
            }
        })
        .collect();
    from_levels(complex, &levels, &shifted_coefficients(base, 1))
}

/// Staircase triangulation of the product; vertex `(i, j)` is `i * nb + j`.
/// A simplex lies at level `level(π₁) + level(π₂)` and the coefficient group
/// at level `k` is `⊕_{i+j=k} G^i ⊗ H^j`.
pub fn product(a: &StratifiedComplex, b: &StratifiedComplex) -> Result<StratifiedComplex> {
    let (ca, cb) = (a.complex(), b.complex());
    let nb = cb.vertex_count();
    let maximal = |c: &SimplicialComplex| -> Vec<Vec<usize>> {
        (0..c.len()).filter(|i| c.cofaces(*i).is_empty()).map(|i| c.simplex(i).to_vec()).collect()
    };
    let mut facets = Vec::new();
    for s in maximal(ca) {
        for t in maximal(cb) {
            staircase(&s, &t, nb, &mut facets);
        }
    }
    let complex = SimplicialComplex::from_facets(ca.vertex_count() * nb, &facets)?;
    let levels: Vec<usize> = complex
        .simplices()
        .iter()
        .map(|s| {
            let p1: BTreeSet<usize> = s.iter().map(|v| v / nb).collect();
            let p2: BTreeSet<usize> = s.iter().map(|v| v % nb).collect();
            let i1 = ca.index_of(&p1.into_iter().collect::<Vec<_>>()).expect("projection is a simplex");
            let i2 = cb.index_of(&p2.into_iter().collect::<Vec<_>>()).expect("projection is a simplex");
            a.level_of(i1) + b.level_of(i2)
        })
        .collect();
    let mut coeffs: BTreeMap<usize, FGAbelianGroup> = BTreeMap::new();
    for (i, g) in a.coefficients() {
        for (j, h) in b.coefficients() {
            let e = coeffs.entry(i + j).or_default();
            *e = e.direct_sum(&g.tensor(h));
        }
    }
    from_levels(complex, &levels, &coeffs)
}

/// Product vertex indices of every monotone lattice path through `s × t`.
pub fn staircase(s: &[usize], t: &[usize], nb: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(s: &[usize], t: &[usize], nb: usize, i: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        cur.push(s[i] * nb + t[j]);
        if i + 1 == s.len() && j + 1 == t.len() {
            out.push(cur.clone());
        }
        if i + 1 < s.len() {
            rec(s, t, nb, i + 1, j, cur, out);
        }
        if j + 1 < t.len() {
            rec(s, t, nb, i, j + 1, cur, out);
        }
        cur.pop();
    }
    rec(s, t, nb, 0, 0, &mut Vec::new(), out);
}

/// Unit interval as a single-stratum complex at level 1.
pub fn interval() -> StratifiedComplex {
    let c = SimplicialComplex::from_facets(2, &[vec![0, 1]]).expect("interval");
    from_levels(c, &[1, 1, 1], &BTreeMap::new()).expect("interval")
}

/// Compact two-apex suspension: the cylinder `base × [0,1]` with each end
/// coned off. Apexes are vertices `2n` (over the `0` end) and `2n + 1`.
pub fn suspension(base: &StratifiedComplex) -> Result<StratifiedComplex> {
    let cyl = product(base, &interval())?;
    let cx = cyl.complex();
    let n = cx.vertex_count();
    let mut simplices: Vec<Vec<usize>> = cx.simplices().to_vec();
    let mut extra_levels = Vec::new();
    for (end, apex) in [(0, n), (1, n + 1)] {
        simplices.push(vec![apex]);
        extra_levels.push((vec![apex], 0));
        for (i, s) in cx.simplices().iter().enumerate() {
            if s.iter().all(|v| v % 2 == end) {
                let mut t = s.clone();
                t.push(apex);
                extra_levels.push((t.clone(), cyl.level_of(i)));
                simplices.push(t);
            }
        }
    }
    let complex = SimplicialComplex::new(n + 2, &simplices)?;
    let extra: HashMap<Vec<usize>, usize> = extra_levels.into_iter().collect();
    let levels: Vec<usize> = complex
        .simplices()
        .iter()
        .map(|s| match cx.index_of(s) {
            Some(i) => cyl.level_of(i),
            None => extra[s],
        })
        .collect();
    let mut coeffs = cyl.coefficients().clone();
    coeffs.entry(0).or_insert_with(|| FGAbelianGroup::free(1));
    from_levels(complex, &levels, &coeffs)
}

/// Result of identifying a closed subcomplex to a point.
#[derive(Debug, Clone)]
pub struct Collapse {
    pub space: StratifiedComplex,
    /// Image vertex of each source vertex.
    pub vertex_map: Vec<usize>,
    /// Image simplex of each source simplex.
    pub cell_map: Vec<usize>,
    /// Index of the new vertex.
    pub point: usize,
}

/// Image complex with `sub` identified to a single new (last) vertex at
/// level 0. Other images take the least level of their preimages.
pub fn collapse(s: &StratifiedComplex, sub: &BTreeSet<usize>) -> Result<Collapse> {
    let cx = s.complex();
    if sub.is_empty() {
        return Err(Error::SubcomplexNotClosed(Vec::new()));
    }
    if let Err(f) = cx.is_down_closed(sub) {
        return Err(Error::SubcomplexNotClosed(cx.simplex(f).to_vec()));
    }
    let in_sub: BTreeSet<usize> = sub.iter().filter(|i| cx.simplex_dim(**i) == 0).map(|i| cx.simplex(*i)[0]).collect();
    let mut vertex_map = vec![0; cx.vertex_count()];
    let mut next = 0;
    for (v, slot) in vertex_map.iter_mut().enumerate() {
        if !in_sub.contains(&v) {
            *slot = next;
            next += 1;
        }
    }
    let point = next;
    for v in &in_sub {
        vertex_map[*v] = point;
    }
    let images: Vec<Vec<usize>> =
        cx.simplices().iter().map(|t| t.iter().map(|v| vertex_map[*v]).collect::<BTreeSet<_>>().into_iter().collect()).collect();
    let complex = SimplicialComplex::new(point + 1, &images.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect::<Vec<_>>())?;
    let mut levels = vec![usize::MAX; complex.len()];
    let mut cell_map = Vec::with_capacity(images.len());
    for (i, img) in images.iter().enumerate() {
        let j = complex.index_of(img).ok_or_else(|| Error::InconsistentCollapse(format!("{img:?}")))?;
        cell_map.push(j);
        levels[j] = levels[j].min(s.level_of(i));
    }
    levels[complex.index_of(&[point]).expect("collapsed point")] = 0;
    let mut coeffs = s.coefficients().clone();
    coeffs.entry(0).or_insert_with(|| FGAbelianGroup::free(1));
    let space = from_levels(complex, &levels, &coeffs)?;
    Ok(Collapse { space, vertex_map, cell_map, point })
}

/// Disjoint union; vertices of `b` are shifted past those of `a`.
pub fn disjoint_union(a: &StratifiedComplex, b: &StratifiedComplex) -> Result<StratifiedComplex> {
    let off = a.complex().vertex_count();
    let mut simplices: Vec<Vec<usize>> = a.complex().simplices().to_vec();
    simplices.extend(b.complex().simplices().iter().map(|s| s.iter().map(|v| v + off).collect::<Vec<_>>()));
    let complex = SimplicialComplex::new(off + b.complex().vertex_count(), &simplices)?;
    let levels: Vec<usize> = complex
        .simplices()
        .iter()
        .map(|s| {
            if s[0] < off {
                a.level_of(a.complex().index_of(s).unwrap())
            } else {
                let t: Vec<usize> = s.iter().map(|v| v - off).collect();
                b.level_of(b.complex().index_of(&t).unwrap())
            }
        })
        .collect();
    let mut coeffs = a.coefficients().clone();
    for (p, g) in b.coefficients() {
        coeffs.entry(*p).or_insert_with(|| g.clone());
    }
    from_levels(complex, &levels, &coeffs)
}
