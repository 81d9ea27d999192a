use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ic::{deligne_construction, stratumwise_table, Perversity};
use crate::linalg::{convolve, tensor_complex, tor1, CochainComplex, ExactMatrix, FGAbelianGroup, Rat};
use crate::space::{product, StratifiedComplex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "perversity")]
pub enum KunnethMode {
    /// Rational cohomology of the simplicial complexes.
    Rational,
    /// Stratumwise tables.
    Stratumwise,
    /// Deligne intersection cohomology for a perversity.
    Intersection(Perversity),
    /// Cohomology with coefficients in the single coefficient group of each factor.
    Integral,
}

impl KunnethMode {
    pub fn parse(mode: &str, perversity: Option<&Perversity>) -> Result<Self> {
        match mode {
            "rational" => Ok(Self::Rational),
            "stratumwise" => Ok(Self::Stratumwise),
            "integral" => Ok(Self::Integral),
            "intersection" => Ok(Self::Intersection(perversity.cloned().unwrap_or_else(Perversity::lower_middle))),
            _ => Err(Error::BadInput { pointer: "/mode".into(), message: format!("unknown mode `{mode}`") }),
        }
    }
}

impl fmt::Display for KunnethMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational => write!(f, "rational"),
            Self::Stratumwise => write!(f, "stratumwise"),
            Self::Intersection(p) => write!(f, "intersection:{p}"),
            Self::Integral => write!(f, "integral"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contribution {
    pub p: i32,
    pub q: i32,
    pub dim: usize,
    /// Integral mode only.
    pub group: Option<FGAbelianGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethRow {
    pub degree: i32,
    pub contributions: Vec<Contribution>,
    /// `Tor(H^p, H^q)` with `p + q = degree + 1`; integral mode only.
    pub tor: Vec<Contribution>,
    pub convolution: usize,
    pub direct: usize,
    pub convolution_group: Option<FGAbelianGroup>,
    pub direct_group: Option<FGAbelianGroup>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethReport {
    pub mode: String,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub rows: Vec<KunnethRow>,
    pub matches: bool,
    /// `(χ(X), χ(Y), χ(X × Y) from the direct side)`.
    pub euler: (i64, i64, i64),
    pub euler_multiplicative: bool,
}

fn euler(v: &[usize], start: i32) -> i64 {
    v.iter().enumerate().map(|(i, x)| if (i as i32 + start) % 2 == 0 { *x as i64 } else { -(*x as i64) }).sum()
}

fn dims_for(s: &StratifiedComplex, mode: &KunnethMode) -> Result<Vec<usize>> {
    match mode {
        KunnethMode::Rational => Ok(s.complex().cochain_complex().cohomology_dims()),
        KunnethMode::Stratumwise => Ok(stratumwise_table(s)?.total),
        KunnethMode::Intersection(p) => Ok(deligne_construction(s, p)?.ih),
        KunnethMode::Integral => unreachable!(),
    }
}

/// Compares the convolution of the factor cohomologies with the cohomology
/// of the product computed directly.
pub fn kunneth(x: &StratifiedComplex, y: &StratifiedComplex, mode: &KunnethMode) -> Result<KunnethReport> {
    let xy = product(x, y)?;
    if *mode == KunnethMode::Integral {
        return integral(x, y, &xy);
    }
    let (a, b, direct) = (dims_for(x, mode)?, dims_for(y, mode)?, dims_for(&xy, mode)?);
    let conv = convolve(&a, &b);
    let len = conv.len().max(direct.len());
    let rows: Vec<KunnethRow> = (0..len)
        .map(|k| {
            let contributions: Vec<Contribution> = (0..=k)
                .filter(|p| *p < a.len() && k - p < b.len() && a[*p] * b[k - p] > 0)
                .map(|p| Contribution { p: p as i32, q: (k - p) as i32, dim: a[p] * b[k - p], group: None })
                .collect();
            let c = conv.get(k).copied().unwrap_or(0);
            let d = direct.get(k).copied().unwrap_or(0);
            KunnethRow {
                degree: k as i32,
                contributions,
                tor: Vec::new(),
                convolution: c,
                direct: d,
                convolution_group: None,
                direct_group: None,
                matches: c == d,
            }
        })
        .collect();
    let e = (euler(&a, 0), euler(&b, 0), euler(&direct, 0));
    Ok(KunnethReport {
        mode: mode.to_string(),
        matches: rows.iter().all(|r| r.matches),
        left: a,
        right: b,
        rows,
        euler: e,
        euler_multiplicative: e.0 * e.1 == e.2,
    })
}

/// Free resolution `Z^t → Z^{r+t}` of `G = Z^r ⊕ ⊕ Z/t_i` in degrees `-1, 0`.
pub fn resolution(g: &FGAbelianGroup) -> CochainComplex {
    let (r, t) = (g.free_rank, g.torsion.len());
    if t == 0 {
        return CochainComplex::concentrated(0, r);
    }
    let d = ExactMatrix::from_triples(r + t, t, g.torsion.iter().enumerate().map(|(i, o)| (r + i, i, Rat::int(*o as i64))));
    CochainComplex::new(-1, vec![t, r + t], vec![d]).expect("resolution")
}

fn single_group(s: &StratifiedComplex) -> Result<FGAbelianGroup> {
    let levels = s.stratum_levels();
    if levels.len() != 1 {
        return Err(Error::ModeMismatch(format!("integral mode needs a single stratum, found {}", levels.len())));
    }
    Ok(s.coefficient(levels[0]))
}

fn groups_from(v: Vec<FGAbelianGroup>, start: i32, lo: i32, hi: i32) -> Vec<FGAbelianGroup> {
    (lo..=hi)
        .map(|k| if k >= start && ((k - start) as usize) < v.len() { v[(k - start) as usize].clone() } else { FGAbelianGroup::trivial() })
        .collect()
}

fn integral(x: &StratifiedComplex, y: &StratifiedComplex, xy: &StratifiedComplex) -> Result<KunnethReport> {
    let (g, h) = (single_group(x)?, single_group(y)?);
    let (rg, rh) = (resolution(&g), resolution(&h));
    let a = tensor_complex(&x.complex().cochain_complex(), &rg);
    let b = tensor_complex(&y.complex().cochain_complex(), &rh);
    let direct_cx = tensor_complex(&xy.complex().cochain_complex(), &tensor_complex(&rg, &rh));
    let lo = direct_cx.start().min(a.start() + b.start());
    let hi = (x.dim() + y.dim()) as i32;
    let ha = groups_from(a.integral_cohomology()?, a.start(), a.start(), x.dim() as i32);
    let hb = groups_from(b.integral_cohomology()?, b.start(), b.start(), y.dim() as i32);
    let hd = groups_from(direct_cx.integral_cohomology()?, direct_cx.start(), lo, hi);
    let (sa, sb) = (a.start(), b.start());
    let mut rows = Vec::new();
    for k in lo..=hi {
        let mut contributions = Vec::new();
        let mut tor = Vec::new();
        let mut total = FGAbelianGroup::trivial();
        for (i, ga) in ha.iter().enumerate() {
            let p = sa + i as i32;
            for (j, gb) in hb.iter().enumerate() {
                let q = sb + j as i32;
                if p + q == k {
                    let t = ga.tensor(gb);
                    if !t.is_trivial() {
                        total = total.direct_sum(&t);
                        contributions.push(Contribution { p, q, dim: t.rational_rank(), group: Some(t) });
                    }
                }
                if p + q == k + 1 {
                    let t = tor1(ga, gb);
                    if !t.is_trivial() {
                        total = total.direct_sum(&t);
                        tor.push(Contribution { p, q, dim: 0, group: Some(t) });
                    }
                }
            }
        }
        let d = hd[(k - lo) as usize].clone();
        rows.push(KunnethRow {
            degree: k,
            contributions,
            tor,
            convolution: total.rational_rank(),
            direct: d.rational_rank(),
            matches: total == d,
            convolution_group: Some(total),
            direct_group: Some(d),
        });
    }
    let rank = |v: &[FGAbelianGroup]| v.iter().map(|g| g.rational_rank()).collect::<Vec<_>>();
    let (left, right) = (rank(&ha), rank(&hb));
    let e = (euler(&left, sa), euler(&right, sb), euler(&rank(&hd), lo));
    Ok(KunnethReport {
        mode: KunnethMode::Integral.to_string(),
        matches: rows.iter().all(|r| r.matches),
        left,
        right,
        rows,
        euler: e,
        euler_multiplicative: e.0 * e.1 == e.2,
    })
}
