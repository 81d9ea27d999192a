use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ic::{deligne_construction, Perversity};
use crate::space::{collapse, interval, product, StratifiedComplex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationRow {
    pub degree: usize,
    pub total: usize,
    pub ih: usize,
    /// `dim H^{k-2}(C)`.
    pub shifted_fiber: usize,
    /// `dim H^k(X̃) = dim IH^k(X) + dim H^{k-2}(C)`.
    pub shifted_additivity: bool,
    /// `dim H^k(C)` when `k` exceeds the cutoff at the collapsed point, else 0.
    pub skyscraper: usize,
    /// `dim H^k(X̃) = dim IH^k(X) + skyscraper`.
    pub skyscraper_additivity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationReport {
    pub fiber: Vec<usize>,
    pub cutoff: Option<i32>,
    pub rows: Vec<FibrationRow>,
    pub shifted_additivity: bool,
    pub skyscraper_additivity: bool,
}

/// `C × I` with the closed subcomplex `C × {0}`.
pub fn cylinder(c: &StratifiedComplex) -> Result<(StratifiedComplex, BTreeSet<usize>)> {
    let total = product(c, &interval())?;
    let cx = total.complex();
    let sub = (0..cx.len()).filter(|i| cx.simplex(*i).iter().all(|v| v % 2 == 0)).collect();
    Ok((total, sub))
}

/// Compares `H^•(X̃)` with `IH^•(X)` for the collapse `X̃ → X` of `sub`
/// (isomorphic to `fiber`) to a point.
pub fn fibration_decomposition(
    total: &StratifiedComplex,
    sub: &BTreeSet<usize>,
    fiber: &StratifiedComplex,
    p: &Perversity,
) -> Result<FibrationReport> {
    let n = total.dim();
    let h_total = pad(total.complex().cochain_complex().cohomology_dims(), n);
    let (h_fiber, ih, cutoff) = if sub.is_empty() {
        (vec![0; n + 1], deligne_construction(total, p)?.ih, None)
    } else {
        let cx = total.complex();
        let (sub_cx, _) = cx.induced(sub.iter().map(|i| cx.simplex(*i).to_vec()).collect());
        let hf = pad(fiber.complex().cochain_complex().cohomology_dims(), n);
        if pad(sub_cx.cochain_complex().cohomology_dims(), n) != hf {
            return Err(Error::InconsistentCollapse("collapsed subcomplex and fiber have different cohomology".into()));
        }
        let c = collapse(total, sub)?;
        let r = deligne_construction(&c.space, p)?;
        let cutoff = r.cutoffs.get(&c.space.level_of(c.space.cell(&[c.point])?)).copied();
        (hf, r.ih, cutoff)
    };
    let rows: Vec<FibrationRow> = (0..=n)
        .map(|k| {
            let shifted_fiber = if k >= 2 { h_fiber[k - 2] } else { 0 };
            let skyscraper = match cutoff {
                Some(c) if k as i32 > c => h_fiber[k],
                _ => 0,
            };
            FibrationRow {
                degree: k,
                total: h_total[k],
                ih: ih[k],
                shifted_fiber,
                shifted_additivity: h_total[k] == ih[k] + shifted_fiber,
                skyscraper,
                skyscraper_additivity: h_total[k] == ih[k] + skyscraper,
            }
        })
        .collect();
    Ok(FibrationReport {
        fiber: h_fiber,
        cutoff,
        shifted_additivity: rows.iter().all(|r| r.shifted_additivity),
        skyscraper_additivity: rows.iter().all(|r| r.skyscraper_additivity),
        rows,
    })
}

fn pad(mut v: Vec<usize>, n: usize) -> Vec<usize> {
    v.resize(n + 1, 0);
    v
}
