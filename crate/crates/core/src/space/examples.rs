use std::collections::BTreeMap;

use super::construct::{cone, disjoint_union, interval, product, suspension};
use super::simplicial::SimplicialComplex;
use super::stratified::{from_levels, StratifiedComplex};
use crate::error::{Error, Result};
use crate::linalg::FGAbelianGroup;

/// Names accepted by [`example`].
pub const EXAMPLE_NAMES: &[&str] = &[
    "point",
    "interval",
    "s1",
    "two-circles",
    "s2",
    "torus",
    "genus2",
    "rp2",
    "mobius",
    "cone-point",
    "cone-s1",
    "cone-s2",
    "cone-torus",
    "genus2-cone",
    "suspension-s1",
    "suspension-s2",
    "suspension-torus",
    "s1xs1",
    "s1xs2",
    "product",
    "torus-interval",
    "s1-z2",
];

/// Single-stratum space at level `dim` from facets.
pub fn manifold(vertex_count: usize, facets: &[Vec<usize>]) -> Result<StratifiedComplex> {
    let c = SimplicialComplex::from_facets(vertex_count, facets)?;
    let d = c.dim().max(0) as usize;
    let levels = vec![d; c.len()];
    from_levels(c, &levels, &BTreeMap::new())
}

pub fn point() -> StratifiedComplex {
    manifold(1, &[]).expect("point")
}

pub fn circle() -> StratifiedComplex {
    manifold(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).expect("circle")
}

/// Boundary of the tetrahedron.
pub fn sphere2() -> StratifiedComplex {
    manifold(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).expect("sphere")
}

/// Seven-vertex torus triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus_facets() -> Vec<Vec<usize>> {
    let mut f = Vec::new();
    for i in 0..7 {
        f.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        f.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    f
}

pub fn torus() -> StratifiedComplex {
    manifold(7, &torus_facets()).expect("torus")
}

/// Connected sum of two seven-vertex tori along the triangle `{0, 1, 3}`.
/// The second copy maps `0, 1, 3` to themselves and `2, 4, 5, 6` to `7..=10`.
pub fn genus2() -> StratifiedComplex {
    let relabel = |v: usize| match v {
        0 | 1 | 3 => v,
        2 => 7,
        4 => 8,
        5 => 9,
        6 => 10,
        _ => unreachable!(),
    };
    let cut = |t: &Vec<usize>| {
        let mut s = t.clone();
        s.sort_unstable();
        s != vec![0, 1, 3]
    };
    let mut facets: Vec<Vec<usize>> = torus_facets().into_iter().filter(cut).collect();
    facets.extend(torus_facets().into_iter().filter(cut).map(|t| t.into_iter().map(relabel).collect()));
    manifold(11, &facets).expect("genus two surface")
}

/// Six-vertex real projective plane.
pub fn rp2() -> StratifiedComplex {
    let f = [[0, 1, 3], [0, 1, 5], [0, 2, 3], [0, 2, 4], [0, 4, 5], [1, 2, 4], [1, 2, 5], [1, 3, 4], [2, 3, 5], [3, 4, 5]];
    manifold(6, &f.iter().map(|t| t.to_vec()).collect::<Vec<_>>()).expect("projective plane")
}

/// Five-vertex Möbius strip `{i, i+1, i+2}` mod 5.
pub fn mobius() -> StratifiedComplex {
    let f: Vec<Vec<usize>> = (0..5).map(|i| vec![i, (i + 1) % 5, (i + 2) % 5]).collect();
    manifold(5, &f).expect("mobius strip")
}

fn with_meta(mut s: StratifiedComplex, entries: &[(&str, &str)]) -> StratifiedComplex {
    s.metadata.insert("dimension_convention".into(), "real".into());
    for (k, v) in entries {
        s.metadata.insert((*k).into(), (*v).into());
    }
    s
}

/// Splits a constructor expression `product:a,b`, `cone:a` or
/// `suspension:a` into its constructor and arguments.
pub fn factors(name: &str) -> Option<(&str, Vec<&str>)> {
    let (head, args) = name.split_once(':')?;
    Some((head, args.split(',').map(str::trim).collect()))
}

/// Looks up a named example or a constructor expression over named examples.
pub fn example(name: &str) -> Result<StratifiedComplex> {
    if let Some((head, args)) = factors(name) {
        let unknown = || Error::UnknownExample(name.to_string());
        let s = match (head, args.as_slice()) {
            ("product", [a, b]) => product(&example(a)?, &example(b)?)?,
            ("cone", [a]) => cone(&example(a)?)?,
            ("suspension", [a]) => suspension(&example(a)?)?,
            _ => return Err(unknown()),
        };
        return Ok(with_meta(s, &[("name", name)]));
    }
    let s = match name {
        "point" => point(),
        "interval" => interval(),
        "s1" | "circle" => circle(),
        "s1-z2" => {
            let mut c = circle();
            c.set_coefficients(BTreeMap::from([(c.top_level(), FGAbelianGroup::cyclic(2))]));
            c
        }
        "two-circles" => disjoint_union(&circle(), &circle())?,
        "s2" | "sphere" => sphere2(),
        "torus" => torus(),
        "genus2" => genus2(),
        "rp2" => rp2(),
        "mobius" => mobius(),
        "cone-point" => cone(&point())?,
        "cone-s1" => with_meta(cone(&circle())?, &[("stated_degree_range", "0..=2")]),
        "cone-s2" => cone(&sphere2())?,
        "cone-torus" => cone(&torus())?,
        "genus2-cone" | "cone-genus2" => cone(&genus2())?,
        "suspension-s1" => suspension(&circle())?,
        "suspension-s2" => suspension(&sphere2())?,
        "suspension-torus" => suspension(&torus())?,
        "s1xs1" => product(&circle(), &circle())?,
        "s1xs2" => product(&circle(), &sphere2())?,
        "product" | "cone-s1xs1" => product(&cone(&circle())?, &circle())?,
        "torus-interval" => product(&torus(), &interval())?,
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    Ok(with_meta(s, &[("name", name)]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn betti(s: &StratifiedComplex) -> Vec<usize> {
        s.complex().cochain_complex().cohomology_dims()
    }

    #[test]
    fn shipped_surfaces() {
        assert_eq!(betti(&torus()), vec![1, 2, 1]);
        assert_eq!(torus().complex().f_vector(), vec![7, 21, 14]);
        assert_eq!(genus2().complex().f_vector(), vec![11, 39, 26]);
        assert_eq!(betti(&genus2()), vec![1, 4, 1]);
        assert_eq!(betti(&sphere2()), vec![1, 0, 1]);
        assert_eq!(betti(&rp2()), vec![1, 0, 0]);
        assert_eq!(betti(&mobius()), vec![1, 1, 0]);
    }

    #[test]
    fn every_name_builds() {
        for n in EXAMPLE_NAMES {
            example(n).unwrap();
        }
        assert!(matches!(example("nope"), Err(Error::UnknownExample(_))));
        assert!(matches!(example("product:s1"), Err(Error::UnknownExample(_))));
    }

    #[test]
    fn constructor_expressions() {
        assert_eq!(betti(&example("product:circle,circle").unwrap()), vec![1, 2, 1]);
        assert_eq!(example("cone:torus").unwrap().complex().f_vector(), example("cone-torus").unwrap().complex().f_vector());
        assert_eq!(betti(&example("suspension:s1").unwrap()), vec![1, 0, 1]);
    }
}
