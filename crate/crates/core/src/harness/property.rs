use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json as j;

use super::report::{Provenance, ReportBundle, ReportRow};
use crate::duality::{cylinder, kunneth, KunnethMode};
use crate::error::{Error, Result};
use crate::ic::deligne::support_certificate;
use crate::ic::{deligne_construction, Perversity};
use crate::linalg::{echelon, sparse, Rat, SparseVec};
use crate::sheaf::{constant_on_open, derived_pushforward, global_sections, sheaf_cohomology, truncate, SheafComplex};
use crate::space::cup::cup;
use crate::space::{collapse, cone, example, product, suspension, to_output, SimplicialComplex, StratifiedComplex};

/// Size limits for generated complexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_cells: usize,
    pub max_depth: usize,
    pub cases: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_cells: 300, max_depth: 3, cases: 8 }
    }
}

/// Hard ceiling on generated complexes.
pub const CELL_LIMIT: usize = 500;

const BASES: &[&str] = &["point", "interval", "s1", "two-circles", "s2", "torus"];
const PARTNERS: &[&str] = &["s1", "s2", "two-circles"];

/// Constructor expression over shipped examples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Base(&'static str),
    Cone(Box<Expr>),
    Suspension(Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    /// `C × I` with `C × {0}` identified to a point.
    Collapse(Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Base(n) => write!(f, "{n}"),
            Expr::Cone(x) => write!(f, "cone({x})"),
            Expr::Suspension(x) => write!(f, "suspension({x})"),
            Expr::Product(x, y) => write!(f, "product({x},{y})"),
            Expr::Collapse(x) => write!(f, "collapse({x})"),
        }
    }
}

impl Expr {
    pub fn build(&self) -> Result<StratifiedComplex> {
        match self {
            Expr::Base(n) => example(n),
            Expr::Cone(x) => cone(&x.build()?),
            Expr::Suspension(x) => suspension(&x.build()?),
            Expr::Product(x, y) => product(&x.build()?, &y.build()?),
            Expr::Collapse(x) => {
                let (total, sub) = cylinder(&x.build()?)?;
                Ok(collapse(&total, &sub)?.space)
            }
        }
    }

    /// Builds bottom-up, giving up as soon as an intermediate complex exceeds `limit` cells.
    pub fn build_bounded(&self, limit: usize) -> Option<StratifiedComplex> {
        let s = match self {
            Expr::Base(n) => example(n).ok()?,
            Expr::Cone(x) => cone(&x.build_bounded(limit)?).ok()?,
            Expr::Suspension(x) => suspension(&x.build_bounded(limit)?).ok()?,
            Expr::Product(x, y) => {
                let (a, b) = (x.build_bounded(limit)?, y.build_bounded(limit)?);
                if a.len() * b.len() > limit {
                    return None;
                }
                product(&a, &b).ok()?
            }
            Expr::Collapse(x) => {
                let c = x.build_bounded(limit)?;
                if 3 * c.len() > 2 * limit {
                    return None;
                }
                let (total, sub) = cylinder(&c).ok()?;
                collapse(&total, &sub).ok()?.space
            }
        };
        (s.len() <= limit).then_some(s)
    }

    /// Immediate subexpressions, used to shrink counterexamples.
    pub fn children(&self) -> Vec<Expr> {
        match self {
            Expr::Base(_) => Vec::new(),
            Expr::Cone(x) | Expr::Suspension(x) | Expr::Collapse(x) => vec![(**x).clone()],
            Expr::Product(x, y) => vec![(**x).clone(), (**y).clone()],
        }
    }

    pub fn random(rng: &mut ChaCha8Rng, depth: usize) -> Expr {
        if depth == 0 || rng.gen_bool(0.3) {
            return Expr::Base(BASES[rng.gen_range(0..BASES.len())]);
        }
        let inner = Box::new(Expr::random(rng, depth - 1));
        match rng.gen_range(0..4) {
            0 => Expr::Cone(inner),
            1 => Expr::Suspension(inner),
            2 => Expr::Product(inner, Box::new(Expr::random(rng, depth - 1))),
            _ => Expr::Collapse(inner),
        }
    }
}

/// One generated test case: a space and a factor for product checks.
#[derive(Debug, Clone)]
pub struct Case {
    pub expr: Expr,
    pub partner: &'static str,
}

/// Draws `bounds.cases` expressions whose complexes fit the cell bound.
pub fn generate(seed: u64, bounds: &Bounds) -> Vec<Case> {
    let limit = bounds.max_cells.min(CELL_LIMIT);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < bounds.cases {
        let expr = Expr::random(&mut rng, bounds.max_depth);
        let partner = PARTNERS[rng.gen_range(0..PARTNERS.len())];
        let p = example(partner).expect("partner");
        let Some(s) = expr.build_bounded(limit) else { continue };
        if s.len() * p.len() <= limit * 4 {
            out.push(Case { expr, partner });
        }
    }
    out
}

/// Outcome of one invariant on one case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// The invariant does not apply (for example a codimension-one stratum).
    Skip(String),
}

/// Names of the checks in report order.
pub const CHECKS: &[&str] = &[
    "d-squared",
    "rank-nullity",
    "euler",
    "euler-multiplicative",
    "kunneth",
    "gluing",
    "truncation-stalks",
    "pushforward-restriction",
    "graded-commutativity",
    "support",
];

fn fail(msg: impl Into<String>) -> Outcome {
    Outcome::Fail(msg.into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(msg())
    }
}

fn from_result(r: Result<Outcome>) -> Outcome {
    match r {
        Ok(o) => o,
        Err(e @ (Error::CodimensionOne { .. } | Error::EmptyRegularPart)) => Outcome::Skip(e.to_string()),
        Err(e) => fail(e.to_string()),
    }
}

/// Regular-part constant sheaf pushed forward to the whole space.
fn pushed(s: &StratifiedComplex) -> Result<(SheafComplex, SheafComplex)> {
    let open: BTreeSet<usize> = s.stratum(s.top_level()).into_iter().collect();
    let f = constant_on_open(s, &open, 1)?;
    let all: BTreeSet<usize> = (0..s.len()).collect();
    let g = derived_pushforward(&f, &all)?;
    Ok((f, g))
}

/// Cup product, negated when `p > q` in mutation mode.
pub fn cup_variant(cx: &SimplicialComplex, a: &SparseVec, p: usize, b: &SparseVec, q: usize, mutate: bool) -> SparseVec {
    let c = cup(cx, a, p, b, q);
    if mutate && p > q {
        sparse::scale(&c, &Rat::int(-1))
    } else {
        c
    }
}

fn graded_commutativity(cx: &SimplicialComplex, mutate: bool) -> Outcome {
    let complex = cx.cochain_complex();
    let n = cx.dim().max(0) as usize;
    let reps: Vec<Vec<SparseVec>> = (0..=n).map(|k| complex.cohomology_at(k as i32).representatives).collect();
    for p in 0..=n {
        for q in 0..=n - p {
            for a in &reps[p] {
                for b in &reps[q] {
                    let ab = cup_variant(cx, a, p, b, q, mutate);
                    let ba = cup_variant(cx, b, q, a, p, mutate);
                    let sign = Rat::int(if (p * q) % 2 == 0 { 1 } else { -1 });
                    let diff = sparse::sub_scaled(&ab, &sign, &ba);
                    if !complex.is_exact((p + q) as i32, &diff) {
                        return fail(format!("a∪b - (-1)^(pq) b∪a is not exact for p={p}, q={q}"));
                    }
                }
            }
        }
    }
    Outcome::Pass
}

pub fn check(name: &str, case: &Case, s: &StratifiedComplex, partner: &StratifiedComplex, mutate: bool) -> Outcome {
    let cx = s.complex();
    match name {
        "d-squared" => from_result((|| {
            cx.cochain_complex().check_square_zero()?;
            let (_, g) = pushed(s)?;
            g.cellular_total_complex().0.check_square_zero()?;
            Ok(Outcome::Pass)
        })()),
        "rank-nullity" => {
            let c = cx.cochain_complex();
            for k in c.degrees() {
                let d = c.diff(k);
                let (r, z) = (echelon::rank(&d), echelon::kernel_basis(&d).len());
                if r + z != d.cols() {
                    return fail(format!("degree {k}: rank {r} + nullity {z} != {}", d.cols()));
                }
            }
            Outcome::Pass
        }
        "euler" => {
            let chi_b = c_euler(&cx.cochain_complex().cohomology_dims());
            ensure(chi_b == cx.euler_characteristic(), || {
                format!("χ from Betti numbers {chi_b}, from f-vector {}", cx.euler_characteristic())
            })
        }
        "euler-multiplicative" => from_result((|| {
            let prod = product(s, partner)?;
            let (a, b, c) = (cx.euler_characteristic(), partner.complex().euler_characteristic(), prod.complex().euler_characteristic());
            Ok(ensure(a * b == c, || format!("χ(X)χ(Y) = {} but χ(X×Y) = {c}", a * b)))
        })()),
        "kunneth" => from_result((|| {
            let r = kunneth(s, partner, &KunnethMode::Rational)?;
            Ok(ensure(r.matches && r.euler_multiplicative, || {
                format!("convolution and direct side differ: {:?}", r.rows.iter().map(|x| (x.convolution, x.direct)).collect::<Vec<_>>())
            }))
        })()),
        "gluing" => from_result(gluing(s, case)),
        "truncation-stalks" => from_result((|| {
            let (_, g) = pushed(s)?;
            let range = g.degree_range();
            for k in range.clone() {
                let t = truncate(&g, k)?;
                for c in 0..s.len() {
                    let (h, ht) = (g.stalk_cohomology(c), t.stalk_cohomology(c));
                    for d in range.clone() {
                        let i = (d - range.start) as usize;
                        let want = if d <= k { h[i] } else { 0 };
                        if ht.get(i).copied().unwrap_or(0) != want {
                            return Ok(fail(format!("τ≤{k} at cell {c} degree {d}")));
                        }
                    }
                }
            }
            Ok(Outcome::Pass)
        })()),
        "pushforward-restriction" => from_result((|| {
            let (f, g) = pushed(s)?;
            for c in s.stratum(s.top_level()) {
                if profile(&f, c) != profile(&g, c) {
                    return Ok(fail(format!("stalk at regular cell {c} changed")));
                }
            }
            let (hf, hg) = (sheaf_cohomology(&f)?.dims(), sheaf_cohomology(&g)?.dims());
            Ok(ensure(trim(&hf) == trim(&hg), || format!("hypercohomology {hf:?} vs {hg:?}")))
        })()),
        "graded-commutativity" => match graded_commutativity(cx, mutate) {
            Outcome::Pass => graded_commutativity(partner.complex(), mutate),
            other => other,
        },
        "support" => from_result((|| {
            let r = deligne_construction(s, &Perversity::lower_middle())?;
            let independent = support_certificate(&r.complex, &r.cutoffs);
            Ok(ensure(r.support.holds && independent == r.support, || format!("first violation {:?}", r.support.first_violation)))
        })()),
        _ => Outcome::Skip(format!("unknown check {name}")),
    }
}

/// Nonzero stalk cohomology dimensions by degree.
fn profile(f: &SheafComplex, c: usize) -> Vec<(i32, usize)> {
    let start = f.degree_range().start;
    f.stalk_cohomology(c).into_iter().enumerate().filter(|x| x.1 > 0).map(|(i, d)| (start + i as i32, d)).collect()
}

fn trim(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn c_euler(b: &[usize]) -> i64 {
    b.iter().enumerate().map(|(k, x)| if k % 2 == 0 { *x as i64 } else { -(*x as i64) }).sum()
}

/// Sections over `U1 ∪ U2` against the equalizer of sections over the pieces.
fn gluing(s: &StratifiedComplex, case: &Case) -> Result<Outcome> {
    let (_, g) = pushed(s)?;
    let poset = s.poset();
    let n = s.len();
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64 ^ case.expr.to_string().len() as u64);
    let mut cover = || -> BTreeSet<usize> {
        let k = rng.gen_range(1..=3usize);
        (0..k).flat_map(|_| poset.up_set(rng.gen_range(0..n))).collect()
    };
    let (u1, u2) = (cover(), cover());
    let u: BTreeSet<usize> = u1.union(&u2).copied().collect();
    let u12: BTreeSet<usize> = u1.intersection(&u2).copied().collect();
    let whole = global_sections(&g, &u)?;
    let (s1, s2) = (global_sections(&g, &u1)?, global_sections(&g, &u2)?);
    let restrict = |sec: &crate::sheaf::SectionSpace, v: &SparseVec| -> SparseVec {
        let mut off = 0;
        let mut out_off = 0;
        let mut out = Vec::new();
        for c in &sec.over {
            let d = g.stalk(*c).dim(0);
            if u12.contains(c) {
                for (i, x) in v.iter().filter(|(i, _)| *i >= off && *i < off + d) {
                    out.push((out_off + i - off, x.clone()));
                }
                out_off += d;
            }
            off += d;
        }
        out
    };
    let width: usize = u12.iter().map(|c| g.stalk(*c).dim(0)).sum();
    let mut cols: Vec<SparseVec> = s1.basis.iter().map(|v| restrict(&s1, v)).collect();
    cols.extend(s2.basis.iter().map(|v| sparse::scale(&restrict(&s2, v), &Rat::int(-1))));
    let m = crate::linalg::ExactMatrix::from_columns(width, &cols);
    let equalizer = cols.len() - echelon::rank(&m);
    Ok(ensure(equalizer == whole.dim, || format!("Γ(U) = {} but equalizer = {equalizer}", whole.dim)))
}

fn shrink(expr: &Expr, fails: &dyn Fn(&Expr) -> bool) -> Expr {
    for child in expr.children() {
        if fails(&child) {
            return shrink(&child, fails);
        }
    }
    expr.clone()
}

fn run_case(case: &Case, mutate: bool) -> Vec<(String, Outcome, Option<serde_json::Value>)> {
    let partner = example(case.partner).expect("partner");
    let s = match case.expr.build() {
        Ok(s) => s,
        Err(e) => return CHECKS.iter().map(|c| (c.to_string(), fail(e.to_string()), None)).collect(),
    };
    CHECKS
        .iter()
        .map(|name| {
            let outcome = check(name, case, &s, &partner, mutate);
            let witness = matches!(outcome, Outcome::Fail(_)).then(|| {
                let fails = |e: &Expr| {
                    e.build().is_ok_and(|x| {
                        matches!(check(name, &Case { expr: e.clone(), partner: case.partner }, &x, &partner, mutate), Outcome::Fail(_))
                    })
                };
                let minimal = shrink(&case.expr, &fails);
                let space = minimal.build().ok().map(|x| to_output(&x));
                j!({ "expr": minimal.to_string(), "partner": case.partner, "space": space })
            });
            (name.to_string(), outcome, witness)
        })
        .collect()
}

/// Randomized invariant checks for one seed. Identical seeds give identical reports.
pub fn property_suite(seed: u64, bounds: &Bounds, mutate: bool) -> ReportBundle {
    let cases = generate(seed, bounds);
    let outcomes: Vec<_> = cases.par_iter().map(|c| run_case(c, mutate)).collect();
    let mut b = ReportBundle::new("proptest", &j!({ "seed": seed, "bounds": bounds, "mutate": mutate }));
    let mut summary = Vec::new();
    let mut counterexamples = Vec::new();
    for (i, (case, results)) in cases.iter().zip(outcomes).enumerate() {
        summary.push(
            j!({ "case": i, "expr": case.expr.to_string(), "partner": case.partner, "cells": case.expr.build().map_or(0, |s| s.len()) }),
        );
        for (name, outcome, witness) in results {
            let id = format!("case{i}/{name}");
            let row = match &outcome {
                Outcome::Pass => ReportRow::check(id, Provenance::Oracle, true, "pass"),
                Outcome::Fail(msg) => ReportRow::check(id, Provenance::Oracle, false, "fail").note(msg.clone()),
                Outcome::Skip(msg) => ReportRow::check(id, Provenance::Oracle, true, "skip").note(msg.clone()),
            };
            b.push(row);
            if let Some(w) = witness {
                counterexamples.push(j!({ "case": i, "check": name, "counterexample": w }));
            }
        }
    }
    b.result("seed", seed);
    b.result("cases", summary);
    b.result("counterexamples", counterexamples);
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_and_bounded() {
        let b = Bounds::default();
        let (x, y) = (generate(7, &b), generate(7, &b));
        assert_eq!(x.iter().map(|c| c.expr.to_string()).collect::<Vec<_>>(), y.iter().map(|c| c.expr.to_string()).collect::<Vec<_>>());
        assert!(x.iter().all(|c| c.expr.build().unwrap().len() <= b.max_cells));
    }

    #[test]
    fn shrinking_finds_a_base() {
        let e = Expr::Cone(Box::new(Expr::Product(Box::new(Expr::Base("s1")), Box::new(Expr::Base("s2")))));
        let is_two_dim_or_more = |x: &Expr| x.build().is_ok_and(|s| s.dim() >= 2);
        assert_eq!(shrink(&e, &is_two_dim_or_more).to_string(), "s2");
    }

    #[test]
    fn mutated_cup_breaks_commutativity_on_the_circle() {
        let s = example("s1").unwrap();
        assert_eq!(graded_commutativity(s.complex(), false), Outcome::Pass);
        assert!(matches!(graded_commutativity(s.complex(), true), Outcome::Fail(_)));
    }
}
