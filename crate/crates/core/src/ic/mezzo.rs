use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::deligne::{finish, ladder, perversity_cutoffs, ICResult, KeptOverride};
use super::perversity::Perversity;
use super::witt::{stratum_links, witt_check, StratumLink};
use crate::error::{Error, Result};
use crate::linalg::{echelon, sparse, Echelon, ExactMatrix, Rat, SparseVec, Subspace};
use crate::sheaf::{bar_stalk, SheafComplex};
use crate::space::cup::{cup_pairing, orientation};
use crate::space::{SimplicialComplex, StratifiedComplex};

const MAX_HEIGHT: i64 = 4;

/// Half-dimensional isotropic test of `W` (rows of `basis`) under `form`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagrangianCertificate {
    pub ambient: usize,
    pub dim: usize,
    pub isotropic: bool,
    pub half_dimensional: bool,
    pub orthogonal_dim: usize,
}

impl LagrangianCertificate {
    pub fn holds(&self) -> bool {
        self.isotropic && self.half_dimensional
    }
}

pub fn certify(form: &ExactMatrix, basis: &ExactMatrix) -> LagrangianCertificate {
    let restricted = basis.mul(form).mul(&basis.transpose());
    let dim = echelon::rank(basis);
    LagrangianCertificate {
        ambient: form.rows(),
        dim,
        isotropic: restricted.is_zero(),
        half_dimensional: 2 * dim == form.rows(),
        orthogonal_dim: orthogonal_complement(form, basis).rows(),
    }
}

/// `W^⊥ = {v : ⟨w, v⟩ = 0 for all w ∈ W}`, rows as basis.
pub fn orthogonal_complement(form: &ExactMatrix, basis: &ExactMatrix) -> ExactMatrix {
    let k = echelon::kernel_basis(&basis.mul(form));
    ExactMatrix::from_rows(k.len(), form.rows(), k)
}

/// Rows spanning `W ∩ W^⊥`.
pub fn radical(form: &ExactMatrix, basis: &ExactMatrix) -> Subspace {
    let n = form.rows();
    let w = Subspace::span(n, basis.row_vecs().iter().cloned());
    let perp = Subspace::span(n, orthogonal_complement(form, basis).row_vecs().iter().cloned());
    w.intersect(&perp)
}

fn height_values(h: i64) -> Vec<i64> {
    let mut v = vec![0];
    for x in 1..=h {
        v.push(x);
        v.push(-x);
    }
    v
}

/// Deterministic enumeration of rational Lagrangian subspaces as RREF basis
/// matrices: by parameter height, then pivot set in lexicographic order, then
/// parameter vector in the order `0, 1, -1, 2, -2, …`.
pub fn lagrangian_subspaces(form: &ExactMatrix, count_limit: usize) -> Result<Vec<ExactMatrix>> {
    let n = form.rows();
    if form.cols() != n {
        return Err(Error::ShapeMismatch("form must be square".into()));
    }
    if n == 0 {
        return Ok(vec![ExactMatrix::zeros(0, 0)]);
    }
    if echelon::rank(form) < n {
        return Err(Error::FormDegenerate);
    }
    let mut out = Vec::new();
    if n % 2 == 1 || count_limit == 0 {
        return Ok(out);
    }
    let h = n / 2;
    let pivot_sets = combinations(n, h);
    for height in 0..=MAX_HEIGHT {
        for pivots in &pivot_sets {
            let free: Vec<(usize, usize)> =
                pivots.iter().enumerate().flat_map(|(r, &c)| ((c + 1)..n).filter(|j| !pivots.contains(j)).map(move |j| (r, j))).collect();
            let vals = height_values(height);
            let mut idx = vec![0usize; free.len()];
            loop {
                let params: Vec<i64> = idx.iter().map(|i| vals[*i]).collect();
                let max = params.iter().map(|x| x.abs()).max().unwrap_or(0);
                if max == height {
                    let mut triples: Vec<(usize, usize, Rat)> = pivots.iter().enumerate().map(|(r, c)| (r, *c, Rat::int(1))).collect();
                    for ((r, j), x) in free.iter().zip(&params) {
                        if *x != 0 {
                            triples.push((*r, *j, Rat::int(*x)));
                        }
                    }
                    let b = ExactMatrix::from_triples(h, n, triples);
                    if certify(form, &b).holds() {
                        out.push(b);
                        if out.len() == count_limit {
                            return Ok(out);
                        }
                    }
                }
                if !advance(&mut idx, vals.len()) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < base {
            return true;
        }
        idx[i] = 0;
    }
    false
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Where a mezzoperversity site sits in a stratified complex.
#[derive(Debug, Clone)]
pub struct SiteLocation {
    pub level: usize,
    pub component: usize,
    pub reference_cell: usize,
    pub middle_degree: usize,
    pub link: SimplicialComplex,
    pub link_vmap: Vec<usize>,
    /// Cocycles representing a basis of `H^mid(link)`.
    pub representatives: Vec<SparseVec>,
}

/// A choice of subspace `W` of middle link cohomology.
#[derive(Debug, Clone)]
pub struct MezzoSite {
    pub location: Option<SiteLocation>,
    /// Intersection form on `H^mid(link)` in the representative basis.
    pub form: ExactMatrix,
    /// Rows spanning `W`.
    pub basis: ExactMatrix,
    pub certificate: LagrangianCertificate,
}

impl MezzoSite {
    /// A site given only by a form and a subspace.
    pub fn from_form(form: ExactMatrix, basis: ExactMatrix) -> Result<Self> {
        if basis.cols() != form.rows() {
            return Err(Error::ShapeMismatch(format!("basis has {} columns, form has size {}", basis.cols(), form.rows())));
        }
        let certificate = certify(&form, &basis);
        Ok(MezzoSite { location: None, form, basis, certificate })
    }

    pub fn level(&self) -> Option<usize> {
        self.location.as_ref().map(|l| l.level)
    }

    /// `W` as cocycles on the link.
    pub fn cocycles(&self) -> Vec<SparseVec> {
        let reps = &self.location.as_ref().expect("located site").representatives;
        self.basis
            .row_vecs()
            .iter()
            .map(|w| {
                let mut acc = Vec::new();
                for (i, x) in w {
                    sparse::add_scaled_into(&mut acc, x, &reps[*i]);
                }
                acc
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Mezzoperversity {
    pub sites: Vec<MezzoSite>,
}

/// Link data and intersection form of one singular component.
pub fn site_location(l: &StratumLink) -> Result<(SiteLocation, ExactMatrix)> {
    if l.codim.is_multiple_of(2) {
        return Err(Error::MezzoStrataMismatch(format!("level {} has even codimension {}", l.level, l.codim)));
    }
    let m = (l.codim - 1) / 2;
    let h = l.link.cochain_complex().cohomology_at(m as i32);
    let orient = orientation(&l.link).map_err(|e| Error::NotOrientable(format!("link at level {}: {e}", l.level)))?;
    let form = cup_pairing(&l.link, &orient, &h.representatives, m, &h.representatives, m);
    Ok((
        SiteLocation {
            level: l.level,
            component: l.component,
            reference_cell: l.cell,
            middle_degree: m,
            link: l.link.clone(),
            link_vmap: l.vmap.clone(),
            representatives: h.representatives,
        },
        form,
    ))
}

/// Intersection form on the middle link cohomology of the first component
/// at `level`.
pub fn link_form(s: &StratifiedComplex, level: usize) -> Result<ExactMatrix> {
    let l = stratum_links(s).into_iter().find(|l| l.level == level).ok_or(Error::StratumNotFound(level))?;
    Ok(site_location(&l)?.1)
}

impl Mezzoperversity {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The same `W` (rows of `basis`, in representative coordinates) on every
    /// component at `level`; all components must have identical links.
    pub fn on_level(s: &StratifiedComplex, level: usize, basis: &ExactMatrix) -> Result<Self> {
        let links: Vec<StratumLink> = stratum_links(s).into_iter().filter(|l| l.level == level).collect();
        if links.is_empty() {
            return Err(Error::StratumNotFound(level));
        }
        let mut sites = Vec::new();
        for l in &links {
            if l.link != links[0].link {
                return Err(Error::MezzoStrataMismatch(format!(
                    "components of level {level} have different links; give one basis per component"
                )));
            }
            let (loc, form) = site_location(l)?;
            if basis.cols() != form.rows() {
                return Err(Error::ShapeMismatch(format!(
                    "basis has {} columns, middle link cohomology at level {level} has dimension {}",
                    basis.cols(),
                    form.rows()
                )));
            }
            let certificate = certify(&form, basis);
            sites.push(MezzoSite { location: Some(loc), form, basis: basis.clone(), certificate });
        }
        Ok(Mezzoperversity { sites })
    }

    pub fn levels(&self) -> BTreeSet<usize> {
        self.sites.iter().filter_map(|s| s.level()).collect()
    }

    pub fn merge(mut self, other: Mezzoperversity) -> Self {
        self.sites.extend(other.sites);
        self
    }
}

/// JSON form: `{ "stratum": level, "basis": [[rational, …], …] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MezzoInput {
    pub stratum: usize,
    pub basis: Vec<Vec<Rat>>,
}

/// Accepts a single object or a list of them.
pub fn parse_mezzo(s: &StratifiedComplex, json: &str) -> Result<Mezzoperversity> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(MezzoInput),
        Many(Vec<MezzoInput>),
    }
    let parsed: OneOrMany = serde_json::from_str(json).map_err(|e| Error::BadInput { pointer: "".into(), message: e.to_string() })?;
    let inputs = match parsed {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    };
    let mut m = Mezzoperversity::empty();
    for (i, inp) in inputs.iter().enumerate() {
        let cols = inp.basis.first().map_or(0, |r| r.len());
        if inp.basis.iter().any(|r| r.len() != cols) {
            return Err(Error::BadInput { pointer: format!("/{i}/basis"), message: "ragged basis rows".into() });
        }
        let form_dim = link_form(s, inp.stratum)?.rows();
        let b =
            if inp.basis.is_empty() { ExactMatrix::zeros(0, form_dim) } else { ExactMatrix::from_dense(inp.basis.len(), cols, &inp.basis) };
        m = m.merge(Mezzoperversity::on_level(s, inp.stratum, &b)?);
    }
    Ok(m)
}

/// Replaces each `W` by `W^⊥`.
pub fn dual_mezzoperversity(m: &Mezzoperversity) -> Mezzoperversity {
    let sites = m
        .sites
        .iter()
        .map(|site| {
            let basis = orthogonal_complement(&site.form, &site.basis);
            let certificate = certify(&site.form, &basis);
            MezzoSite { location: site.location.clone(), form: site.form.clone(), basis, certificate }
        })
        .collect();
    Mezzoperversity { sites }
}

/// `dim (W ∩ W^⊥)` summed over the sites at `level`.
pub fn local_contribution(m: &Mezzoperversity, level: usize) -> Result<usize> {
    let sites: Vec<&MezzoSite> = m.sites.iter().filter(|s| s.level() == Some(level)).collect();
    if sites.is_empty() {
        return Err(Error::StratumNotFound(level));
    }
    Ok(sites.iter().map(|s| radical(&s.form, &s.basis).dim()).sum())
}

/// Deligne construction with the middle truncation at every non-Witt
/// stratum replaced by the preimage of `W`.
pub fn refined_ic(s: &StratifiedComplex, p: &Perversity, m: &Mezzoperversity) -> Result<ICResult> {
    let witt = witt_check(s);
    let non_witt = witt.non_witt_levels();
    if m.sites.iter().any(|x| x.location.is_none()) {
        return Err(Error::MezzoStrataMismatch("site without a location".into()));
    }
    if m.levels() != non_witt {
        return Err(Error::MezzoStrataMismatch(format!("sites at {:?}, non-Witt levels {:?}", m.levels(), non_witt)));
    }
    for row in witt.strata.iter().filter(|r| r.middle_dim > 0) {
        let found = m.sites.iter().any(|x| {
            let l = x.location.as_ref().unwrap();
            l.level == row.level && l.component == row.component
        });
        if !found {
            return Err(Error::MezzoStrataMismatch(format!("no site for level {} component {}", row.level, row.component)));
        }
    }
    for site in &m.sites {
        if !site.certificate.holds() {
            return Err(Error::NotLagrangian(format!(
                "level {}: dim W = {}, ambient {}, isotropic = {}",
                site.level().unwrap(),
                site.certificate.dim,
                site.certificate.ambient,
                site.certificate.isotropic
            )));
        }
    }
    let mut cutoffs = perversity_cutoffs(s, p)?;
    for site in &m.sites {
        let loc = site.location.as_ref().unwrap();
        cutoffs.insert(loc.level, loc.middle_degree as i32);
    }
    let by_level: BTreeMap<usize, Vec<&MezzoSite>> = m.sites.iter().fold(BTreeMap::new(), |mut acc, x| {
        acc.entry(x.level().unwrap()).or_insert_with(Vec::new).push(x);
        acc
    });
    let complex = ladder(s, &cutoffs, |level, before, pushed, z| {
        let Some(sites) = by_level.get(&level) else { return Ok(None) };
        let mut over = KeptOverride::new();
        for site in sites {
            over.extend(site_kept(s, site, before, pushed, z)?);
        }
        Ok(Some(over))
    })?;
    finish(s, complex, p.to_string(), Some(p.clone()), cutoffs, (!m.sites.is_empty()).then(|| m.clone()))
}

/// Flags `τ_0 ⊂ … ⊂ τ_k = τ` with their coefficients in the barycentric
/// subdivision chain of `τ`.
fn subdivision_flags(tau: &[usize]) -> Vec<(Vec<Vec<usize>>, i64)> {
    if tau.len() == 1 {
        return vec![(vec![tau.to_vec()], 1)];
    }
    let k = tau.len() - 1;
    let mut out = Vec::new();
    for j in 0..tau.len() {
        let mut face = tau.to_vec();
        face.remove(j);
        let sign = if (j + k).is_multiple_of(2) { 1 } else { -1 };
        for (mut flag, s) in subdivision_flags(&face) {
            flag.push(tau.to_vec());
            out.push((flag, s * sign));
        }
    }
    out
}

/// Vectors `x` in the span of `basis` whose image under `map` lies in `target`.
fn preimage(basis: &[SparseVec], map: impl Fn(&SparseVec) -> SparseVec, target: &Echelon, ambient: usize) -> Subspace {
    let residues: Vec<SparseVec> = basis.iter().map(|b| target.reduce_fully(map(b))).collect();
    let rows = residues.iter().flat_map(|r| r.iter().map(|e| e.0)).max().map_or(0, |x| x + 1);
    let m = ExactMatrix::from_columns(rows, &residues);
    let coeffs = echelon::kernel_basis(&m);
    Subspace::span(
        ambient,
        coeffs.iter().map(|c| {
            let mut acc = Vec::new();
            for (i, x) in c {
                sparse::add_scaled_into(&mut acc, x, &basis[*i]);
            }
            acc
        }),
    )
}

fn echelon_of(vectors: impl IntoIterator<Item = SparseVec>) -> Echelon {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e
}

/// Kept subspaces on one component: the preimage of `W` at the reference
/// cell, transported along cover relations inside the stratum.
fn site_kept(
    s: &StratifiedComplex,
    site: &MezzoSite,
    before: &SheafComplex,
    pushed: &SheafComplex,
    z: &BTreeSet<usize>,
) -> Result<KeptOverride> {
    let loc = site.location.as_ref().unwrap();
    let m = loc.middle_degree as i32;
    let sigma0 = loc.reference_cell;
    let range = pushed.degree_range();
    let poset = before.poset();
    let u: BTreeSet<usize> = (0..before.len()).filter(|c| before.domain()[*c]).collect();
    let q: Vec<usize> = poset.up_set(sigma0).into_iter().filter(|x| u.contains(x)).collect();
    let unsupported = |why: &str| Error::Unsupported(format!("mezzoperversity at level {}: {why}", loc.level));
    for &x in &q {
        let c = before.stalk(x);
        if c.dim(0) != 1 || c.degrees().any(|d| d != 0 && c.dim(d) != 0) {
            return Err(unsupported("the sheaf above the stratum is not the constant sheaf"));
        }
    }
    let bs = bar_stalk(before, &q, range.start, range.end);
    let cx = s.complex();
    let sigma = cx.simplex(sigma0).to_vec();
    let cell_of = |tau: &[usize]| -> Option<usize> {
        let mut v: Vec<usize> = sigma.iter().copied().chain(tau.iter().map(|x| loc.link_vmap[*x])).collect();
        v.sort_unstable();
        cx.index_of(&v)
    };
    if loc.link.len() != q.len() {
        return Err(unsupported("link does not match the cells above the reference cell"));
    }
    // g*: bar cochains in degree m -> simplicial cochains of the link.
    let stalk = pushed.stalk(sigma0);
    let ti = (m - range.start) as usize;
    let mut triples = Vec::new();
    for (j, tau) in loc.link.simplices_of_dim(m as usize).iter().enumerate() {
        for (flag, sign) in subdivision_flags(tau) {
            let chain: Vec<usize> =
                flag.iter().map(|t| cell_of(t)).collect::<Option<_>>().ok_or_else(|| unsupported("flag outside the star"))?;
            let id = *bs.index.get(&chain).ok_or_else(|| unsupported("flag is not a bar chain"))?;
            let off = bs.offsets[ti][&id];
            triples.push((j, off, Rat::int(sign)));
        }
    }
    let g = ExactMatrix::from_triples(loc.link.simplices_of_dim(m as usize).len(), stalk.dim(m), triples);
    let link_c = loc.link.cochain_complex();
    let target = echelon_of(site.cocycles().into_iter().chain(link_c.diff(m - 1).columns()));
    let z_m = echelon::kernel_basis(&stalk.diff(m));
    let kept0 = preimage(&z_m, |x| g.apply(x), &target, stalk.dim(m));

    // transport inside the component
    let comp: BTreeSet<usize> = super::witt::stratum_components(s, loc.level)
        .into_iter()
        .find(|c| c.contains(&sigma0))
        .unwrap_or_default()
        .into_iter()
        .filter(|c| z.contains(c))
        .collect();
    let boundaries = |c: usize| pushed.stalk(c).diff(m - 1).columns();
    let coh_dim = |c: usize, k: &Subspace| k.dim() - echelon::rank(&pushed.stalk(c).diff(m - 1));
    let mut kept: HashMap<usize, Subspace> = HashMap::from([(sigma0, kept0)]);
    let mut queue = VecDeque::from([sigma0]);
    while let Some(a) = queue.pop_front() {
        let ka = kept[&a].clone();
        for (b, _) in poset.up[a].iter().filter(|(b, _)| comp.contains(b)) {
            let rho = pushed.cover_map(a, *b, m);
            let image: Vec<SparseVec> = ka.basis.iter().map(|v| rho.apply(v)).collect();
            match kept.get(b) {
                Some(kb) => {
                    if image.iter().any(|v| !kb.contains(v)) || coh_dim(a, &ka) != coh_dim(*b, kb) {
                        return Err(Error::MonodromyMismatch(format!("level {} between cells {a} and {b}", loc.level)));
                    }
                }
                None => {
                    let kb = Subspace::span(pushed.stalk(*b).dim(m), image.into_iter().chain(boundaries(*b)));
                    kept.insert(*b, kb);
                    queue.push_back(*b);
                }
            }
        }
        for (b, _) in poset.down[a].iter().filter(|(b, _)| comp.contains(b)) {
            let rho = pushed.cover_map(*b, a, m);
            match kept.get(b) {
                Some(kb) => {
                    if kb.basis.iter().any(|v| !ka.contains(&rho.apply(v))) || coh_dim(a, &ka) != coh_dim(*b, kb) {
                        return Err(Error::MonodromyMismatch(format!("level {} between cells {b} and {a}", loc.level)));
                    }
                }
                None => {
                    let zb = echelon::kernel_basis(&pushed.stalk(*b).diff(m));
                    let kb = preimage(&zb, |x| rho.apply(x), &echelon_of(ka.basis.iter().cloned()), pushed.stalk(*b).dim(m));
                    kept.insert(*b, kb);
                    queue.push_back(*b);
                }
            }
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symplectic(n: usize) -> ExactMatrix {
        let mut t = Vec::new();
        for i in 0..n / 2 {
            t.push((2 * i, 2 * i + 1, Rat::int(1)));
            t.push((2 * i + 1, 2 * i, Rat::int(-1)));
        }
        ExactMatrix::from_triples(n, n, t)
    }

    #[test]
    fn lines_in_the_symplectic_plane() {
        let l = lagrangian_subspaces(&symplectic(2), 3).unwrap();
        let rows: Vec<Vec<Rat>> = l.iter().map(|b| b.to_dense()[0].clone()).collect();
        assert_eq!(rows, vec![vec![Rat::int(1), Rat::int(0)], vec![Rat::int(0), Rat::int(1)], vec![Rat::int(1), Rat::int(1)]]);
    }

    #[test]
    fn four_dimensional_enumeration_is_verified() {
        let form = symplectic(4);
        let l = lagrangian_subspaces(&form, 10).unwrap();
        assert_eq!(l.len(), 10);
        for b in &l {
            assert!(certify(&form, b).holds());
        }
    }

    #[test]
    fn degenerate_and_empty_forms() {
        assert!(matches!(lagrangian_subspaces(&ExactMatrix::zeros(2, 2), 1), Err(Error::FormDegenerate)));
        assert_eq!(lagrangian_subspaces(&ExactMatrix::zeros(0, 0), 5).unwrap().len(), 1);
    }

    #[test]
    fn isotropic_line_in_four_space() {
        let form = symplectic(4);
        let w = ExactMatrix::from_i64(&[vec![1, 0, 0, 0]]);
        let site = MezzoSite::from_form(form.clone(), w).unwrap();
        assert!(site.certificate.isotropic && !site.certificate.half_dimensional);
        let d = dual_mezzoperversity(&Mezzoperversity { sites: vec![site] });
        assert_eq!((d.sites[0].certificate.dim, d.sites[0].basis.rows()), (3, 3));
        assert_eq!(radical(&form, &ExactMatrix::from_i64(&[vec![1, 0, 0, 0]])).dim(), 1);
    }

    #[test]
    fn subdivision_of_an_edge() {
        let f = subdivision_flags(&[0, 1]);
        assert_eq!(f, vec![(vec![vec![1], vec![0, 1]], -1), (vec![vec![0], vec![0, 1]], 1)]);
    }
}
