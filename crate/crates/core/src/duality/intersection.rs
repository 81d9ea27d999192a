use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Rat, SparseVec};
use crate::space::cup::{boundary_faces, cup, evaluate, orientation};
use crate::space::SimplicialComplex;

/// Pullback of a `p`-cochain along a vertex map `dst → src`, with the sign of
/// the induced vertex order.
pub fn pullback(src: &SimplicialComplex, dst: &SimplicialComplex, vertex_map: &[usize], alpha: &[(usize, Rat)], p: usize) -> SparseVec {
    let base = src.dim_range(p).start;
    let mut out = Vec::new();
    for (local, sigma) in dst.simplices_of_dim(p).iter().enumerate() {
        let image: Vec<usize> = sigma.iter().map(|v| vertex_map[*v]).collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != image.len() {
            continue;
        }
        let Some(i) = src.index_of(&sorted) else { continue };
        let x = crate::linalg::sparse::get(alpha, i - base);
        if x.is_zero() {
            continue;
        }
        let inversions =
            (0..image.len()).flat_map(|a| (a + 1..image.len()).map(move |b| (a, b))).filter(|(a, b)| image[*a] > image[*b]).count();
        out.push((local, if inversions % 2 == 0 { x } else { -&x }));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionTerm {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
    pub pairing: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    /// `Σ_{i+j=2m} (-1)^{i(m-i)} ⟨A_i, B_j⟩`.
    pub value: Rat,
    pub terms: Vec<IntersectionTerm>,
    /// The same sum over `i + j = 4m`.
    pub value_4m: Rat,
    pub totals_agree: bool,
}

/// Signed sum of pairings of graded cocycles `a = Σ A_i`, `b = Σ B_j` on a
/// closed oriented complex of even dimension `2m`.
pub fn intersection_number(cx: &SimplicialComplex, a: &[(usize, SparseVec)], b: &[(usize, SparseVec)]) -> Result<IntersectionReport> {
    let n = cx.dim().max(0) as usize;
    if n % 2 == 1 {
        return Err(Error::DegreeMismatch(format!("ambient dimension {n} is odd")));
    }
    if !boundary_faces(cx).is_empty() {
        return Err(Error::Unsupported("intersection numbers need a closed complex".into()));
    }
    let orient = orientation(cx)?;
    let m = n / 2;
    let sum_over = |total: usize| -> (Rat, Vec<IntersectionTerm>) {
        let mut value = Rat::int(0);
        let mut terms = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                if i + j != total {
                    continue;
                }
                let pairing = if total == n { evaluate(&cup(cx, x, *i, y, *j), &orient) } else { Rat::int(0) };
                let e = (*i as i64) * (m as i64 - *i as i64);
                let sign: i8 = if e.rem_euclid(2) == 0 { 1 } else { -1 };
                value = &value + &(&pairing * &Rat::int(sign as i64));
                terms.push(IntersectionTerm { i: *i, j: *j, sign, pairing });
            }
        }
        (value, terms)
    };
    let (value, terms) = sum_over(n);
    let (value_4m, _) = sum_over(2 * n);
    Ok(IntersectionReport { totals_agree: value == value_4m, value, terms, value_4m })
}
