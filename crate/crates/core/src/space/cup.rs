use std::collections::BTreeMap;

use super::simplicial::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{sparse, ExactMatrix, Rat, SparseVec};

/// Alexander–Whitney cup product of a `p`-cochain and a `q`-cochain, both
/// indexed by local simplex index within their dimension:
/// `(α ∪ β)(v0..v_{p+q}) = α(v0..vp) · β(vp..v_{p+q})`.
pub fn cup(cx: &SimplicialComplex, alpha: &[(usize, Rat)], p: usize, beta: &[(usize, Rat)], q: usize) -> SparseVec {
    let n = p + q;
    let base_p = cx.dim_range(p).start;
    let base_q = cx.dim_range(q).start;
    let mut out = Vec::new();
    if alpha.is_empty() || beta.is_empty() {
        return out;
    }
    for (local, sigma) in cx.simplices_of_dim(n).iter().enumerate() {
        let front = cx.index_of(&sigma[..=p]).expect("front face") - base_p;
        let a = sparse::get(alpha, front);
        if a.is_zero() {
            continue;
        }
        let back = cx.index_of(&sigma[p..]).expect("back face") - base_q;
        let b = sparse::get(beta, back);
        if !b.is_zero() {
            out.push((local, &a * &b));
        }
    }
    out
}

/// Coherent orientation of the top-dimensional simplices: coefficient `±1`
/// per top simplex (local index) such that the resulting chain has no
/// interior boundary. Each connected piece starts with `+1`.
pub fn orientation(cx: &SimplicialComplex) -> Result<Vec<i8>> {
    if cx.is_empty() {
        return Ok(Vec::new());
    }
    let n = cx.dim() as usize;
    let top = cx.dim_range(n);
    if n == 0 {
        return Ok(vec![1; top.len()]);
    }
    let mut sign: Vec<i8> = vec![0; top.len()];
    for start in 0..top.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            let sa = top.start + a;
            for (f, inc_a) in cx.faces(sa) {
                let cof: Vec<&(usize, i8)> = cx.cofaces(*f).iter().filter(|(t, _)| cx.simplex_dim(*t) == n).collect();
                match cof.len() {
                    1 => {}
                    2 => {
                        let (b, inc_b) = if cof[0].0 == sa { *cof[1] } else { *cof[0] };
                        let want = -sign[a] * inc_a * inc_b;
                        let lb = b - top.start;
                        if sign[lb] == 0 {
                            sign[lb] = want;
                            stack.push(lb);
                        } else if sign[lb] != want {
                            return Err(Error::NotOrientable(format!("orientation conflict across face {:?}", cx.simplex(*f))));
                        }
                    }
                    k => return Err(Error::NotOrientable(format!("face {:?} lies in {k} top simplices", cx.simplex(*f)))),
                }
            }
        }
    }
    Ok(sign)
}

/// Codimension-one simplices (global indices) lying in exactly one top
/// simplex.
pub fn boundary_faces(cx: &SimplicialComplex) -> Vec<usize> {
    if cx.dim() < 1 {
        return Vec::new();
    }
    let n = cx.dim() as usize;
    cx.dim_range(n - 1).filter(|f| cx.cofaces(*f).iter().filter(|(t, _)| cx.simplex_dim(*t) == n).count() == 1).collect()
}

/// `⟨γ, [X]⟩` for a top-degree cochain `γ` and orientation coefficients.
pub fn evaluate(gamma: &[(usize, Rat)], orientation: &[i8]) -> Rat {
    gamma.iter().fold(Rat::int(0), |acc, (i, x)| &acc + &(x * &Rat::int(orientation[*i] as i64)))
}

/// Matrix `⟨a_i ∪ b_j, [X]⟩` for degree-`p` cochains `a` and degree-`q`
/// cochains `b` with `p + q = dim X`.
pub fn cup_pairing(cx: &SimplicialComplex, orient: &[i8], a: &[SparseVec], p: usize, b: &[SparseVec], q: usize) -> ExactMatrix {
    let mut m = BTreeMap::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let v = evaluate(&cup(cx, x, p, y, q), orient);
            if !v.is_zero() {
                m.insert((i, j), v);
            }
        }
    }
    ExactMatrix::from_triples(a.len(), b.len(), m.into_iter().map(|((i, j), v)| (i, j, v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> SimplicialComplex {
        SimplicialComplex::from_facets(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn circle_orientation_is_a_cycle() {
        let c = circle();
        let o = orientation(&c).unwrap();
        let z: SparseVec = o.iter().enumerate().map(|(i, s)| (i, Rat::int(*s as i64))).collect();
        let d = c.cochain_complex().diff(0);
        // boundary of the chain z is d^T z
        assert!(d.transpose().apply(&z).is_empty());
    }

    #[test]
    fn unit_is_neutral() {
        let c = circle();
        let one: SparseVec = (0..3).map(|i| (i, Rat::int(1))).collect();
        let e: SparseVec = vec![(1, Rat::int(3))];
        assert_eq!(cup(&c, &one, 0, &e, 1), e);
        assert_eq!(cup(&c, &e, 1, &one, 0), e);
    }

    #[test]
    fn branching_is_rejected() {
        let c = SimplicialComplex::from_facets(4, &[vec![0, 1], vec![0, 2], vec![0, 3]]).unwrap();
        assert!(matches!(orientation(&c), Err(Error::NotOrientable(_))));
    }
}
