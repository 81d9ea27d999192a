use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{CochainComplex, ExactMatrix, Rat};

/// Finite abstract simplicial complex on vertices `0..vertex_count`.
///
/// Simplices are strictly increasing vertex lists, stored sorted by
/// dimension and then lexicographically. Index `i` of a `k`-simplex in
/// [`simplices_of_dim`](Self::simplices_of_dim) order is its cochain basis index.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    dim_start: Vec<usize>,
    faces: Vec<Vec<(usize, i8)>>,
    cofaces: Vec<Vec<(usize, i8)>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

fn all_faces(s: &[usize], out: &mut BTreeSet<Vec<usize>>) {
    if s.is_empty() || !out.insert(s.to_vec()) {
        return;
    }
    if s.len() == 1 {
        return;
    }
    for i in 0..s.len() {
        let mut f = s.to_vec();
        f.remove(i);
        all_faces(&f, out);
    }
}

impl SimplicialComplex {
    /// Closure of the given simplices under faces.
    pub fn from_facets(vertex_count: usize, facets: &[Vec<usize>]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for v in 0..vertex_count {
            set.insert(vec![v]);
        }
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("repeated vertex in {f:?}")));
            }
            if let Some(v) = s.iter().find(|v| **v >= vertex_count) {
                return Err(Error::InvalidComplex(format!("vertex {v} out of range")));
            }
            all_faces(&s, &mut set);
        }
        Ok(Self::from_closed_set(vertex_count, set))
    }

    /// Validates that the given list is already face-closed.
    pub fn new(vertex_count: usize, simplices: &[Vec<usize>]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for s in simplices {
            if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidComplex(format!("{s:?} is not a strictly sorted vertex list")));
            }
            if let Some(v) = s.iter().find(|v| **v >= vertex_count) {
                return Err(Error::InvalidComplex(format!("vertex {v} out of range")));
            }
            set.insert(s.clone());
        }
        for v in 0..vertex_count {
            if !set.contains(&vec![v]) {
                return Err(Error::SubcomplexNotClosed(vec![v]));
            }
        }
        for s in &set {
            for i in 0..s.len() {
                if s.len() > 1 {
                    let mut f = s.clone();
                    f.remove(i);
                    if !set.contains(&f) {
                        return Err(Error::SubcomplexNotClosed(f));
                    }
                }
            }
        }
        Ok(Self::from_closed_set(vertex_count, set))
    }

    fn from_closed_set(vertex_count: usize, set: BTreeSet<Vec<usize>>) -> Self {
        let mut simplices: Vec<Vec<usize>> = set.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: HashMap<Vec<usize>, usize> = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let top = simplices.last().map_or(0, |s| s.len());
        let dim_start: Vec<usize> = (0..=top).map(|d| simplices.partition_point(|s| s.len() < d + 1)).collect();
        let mut faces = vec![Vec::new(); simplices.len()];
        let mut cofaces = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            if s.len() < 2 {
                continue;
            }
            for k in 0..s.len() {
                let mut f = s.clone();
                f.remove(k);
                let j = index[&f];
                let sign = if k % 2 == 0 { 1 } else { -1 };
                faces[i].push((j, sign));
                cofaces[j].push((i, sign));
            }
        }
        for c in &mut cofaces {
            c.sort_unstable();
        }
        SimplicialComplex { vertex_count, simplices, index, dim_start, faces, cofaces }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Dimension, or -1 for the empty complex.
    pub fn dim(&self) -> i32 {
        self.dim_start.len() as i32 - 2
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &[usize] {
        &self.simplices[i]
    }

    pub fn simplex_dim(&self, i: usize) -> usize {
        self.simplices[i].len() - 1
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn require(&self, s: &[usize]) -> Result<usize> {
        self.index_of(s).ok_or_else(|| Error::CellNotFound(s.to_vec()))
    }

    /// Global index range of the `k`-simplices.
    pub fn dim_range(&self, k: usize) -> std::ops::Range<usize> {
        if k + 1 >= self.dim_start.len() {
            let n = self.simplices.len();
            return n..n;
        }
        self.dim_start[k]..self.dim_start[k + 1]
    }

    pub fn simplices_of_dim(&self, k: usize) -> &[Vec<usize>] {
        &self.simplices[self.dim_range(k)]
    }

    /// Position of a simplex among those of its dimension.
    pub fn local_index(&self, i: usize) -> usize {
        i - self.dim_start[self.simplex_dim(i)]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim().max(-1)).map(|k| self.dim_range(k as usize).len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(k, n)| if k % 2 == 0 { *n as i64 } else { -(*n as i64) }).sum()
    }

    /// Codimension-one faces with incidence sign `(-1)^position`.
    pub fn faces(&self, i: usize) -> &[(usize, i8)] {
        &self.faces[i]
    }

    /// Codimension-one cofaces with incidence sign.
    pub fn cofaces(&self, i: usize) -> &[(usize, i8)] {
        &self.cofaces[i]
    }

    /// All simplices containing `i` (including itself), ascending.
    pub fn star(&self, i: usize) -> Vec<usize> {
        let mut seen = BTreeSet::from([i]);
        let mut stack = vec![i];
        while let Some(s) = stack.pop() {
            for (t, _) in &self.cofaces[s] {
                if seen.insert(*t) {
                    stack.push(*t);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// All faces of `i` (including itself), ascending.
    pub fn closure_of(&self, i: usize) -> Vec<usize> {
        let mut seen = BTreeSet::from([i]);
        let mut stack = vec![i];
        while let Some(s) = stack.pop() {
            for (t, _) in &self.faces[s] {
                if seen.insert(*t) {
                    stack.push(*t);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_down_closed(&self, set: &BTreeSet<usize>) -> std::result::Result<(), usize> {
        for &s in set {
            for (f, _) in &self.faces[s] {
                if !set.contains(f) {
                    return Err(*f);
                }
            }
        }
        Ok(())
    }

    pub fn is_up_closed(&self, set: &BTreeSet<usize>) -> std::result::Result<(), usize> {
        for &s in set {
            for (f, _) in &self.cofaces[s] {
                if !set.contains(f) {
                    return Err(*f);
                }
            }
        }
        Ok(())
    }

    /// Link of simplex `i`: simplices `τ` with `τ ∩ σ = ∅` and `τ ∪ σ` a
    /// simplex. Returns the link relabeled
    /// order-preservingly and the local-to-global vertex map.
    pub fn link(&self, i: usize) -> (SimplicialComplex, Vec<usize>) {
        let sigma = &self.simplices[i];
        let mut taus = Vec::new();
        for t in self.star(i) {
            let tau: Vec<usize> = self.simplices[t].iter().copied().filter(|v| !sigma.contains(v)).collect();
            if !tau.is_empty() {
                taus.push(tau);
            }
        }
        self.induced(taus)
    }

    /// Complex spanned by the given simplices (assumed face-closed),
    /// with vertices relabeled in increasing global order.
    pub fn induced(&self, simplices: Vec<Vec<usize>>) -> (SimplicialComplex, Vec<usize>) {
        let verts: BTreeSet<usize> = simplices.iter().flatten().copied().collect();
        let vmap: Vec<usize> = verts.into_iter().collect();
        let local: HashMap<usize, usize> = vmap.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let set: BTreeSet<Vec<usize>> = simplices.iter().map(|s| s.iter().map(|v| local[v]).collect()).collect();
        (Self::from_closed_set(vmap.len(), set), vmap)
    }

    /// Simplicial cochain complex over the rationals:
    /// `(dφ)(v0..v_{k+1}) = Σ_i (-1)^i φ(v0..v̂_i..v_{k+1})`.
    pub fn cochain_complex(&self) -> CochainComplex {
        if self.is_empty() {
            return CochainComplex::zero();
        }
        let n = self.dim() as usize;
        let dims: Vec<usize> = (0..=n).map(|k| self.dim_range(k).len()).collect();
        let diffs = (0..n)
            .map(|k| {
                let rows = self.dim_range(k + 1);
                let base = self.dim_start[k];
                let triples = rows.clone().flat_map(|t| {
                    let r = t - rows.start;
                    self.faces[t].iter().map(move |(f, s)| (r, f - base, Rat::int(*s as i64)))
                });
                ExactMatrix::from_triples(dims[k + 1], dims[k], triples)
            })
            .collect();
        CochainComplex::new_unchecked(0, dims, diffs).expect("simplicial coboundary shapes")
    }

    /// Cochain complex relative to a face-closed subcomplex `sub`
    /// (cochains vanishing on `sub`). Basis: simplices outside `sub` in order.
    pub fn relative_cochain_complex(&self, sub: &BTreeSet<usize>) -> (CochainComplex, Vec<Vec<usize>>) {
        if self.is_empty() {
            return (CochainComplex::zero(), Vec::new());
        }
        let n = self.dim() as usize;
        let bases: Vec<Vec<usize>> = (0..=n).map(|k| self.dim_range(k).filter(|s| !sub.contains(s)).collect()).collect();
        let pos: Vec<HashMap<usize, usize>> = bases.iter().map(|b| b.iter().enumerate().map(|(i, s)| (*s, i)).collect()).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let diffs = (0..n)
            .map(|k| {
                let mut triples = Vec::new();
                for (r, t) in bases[k + 1].iter().enumerate() {
                    for (f, s) in &self.faces[*t] {
                        if let Some(c) = pos[k].get(f) {
                            triples.push((r, *c, Rat::int(*s as i64)));
                        }
                    }
                }
                ExactMatrix::from_triples(dims[k + 1], dims[k], triples)
            })
            .collect();
        (CochainComplex::new_unchecked(0, dims, diffs).expect("relative coboundary shapes"), bases)
    }

    /// Edge-path components of the vertex set, as a vertex → component id map
    /// (ids in order of smallest vertex).
    pub fn vertex_components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in self.simplices_of_dim(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut ids = HashMap::new();
        (0..self.vertex_count)
            .map(|v| {
                let r = find(&mut parent, v);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect()
    }

    /// Whether `vmap` is a simplicial isomorphism onto `other`.
    pub fn is_isomorphic_via(&self, other: &SimplicialComplex, vmap: &[usize]) -> bool {
        if self.f_vector() != other.f_vector() || vmap.len() != self.vertex_count {
            return false;
        }
        self.simplices.iter().all(|s| {
            let mut t: Vec<usize> = s.iter().map(|v| vmap[*v]).collect();
            t.sort_unstable();
            other.index_of(&t).is_some()
        })
    }
}
