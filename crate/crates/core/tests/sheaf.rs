use std::collections::BTreeSet;

use strat_ic::linalg::FGAbelianGroup;
use strat_ic::sheaf::*;
use strat_ic::space::{self, construct, examples, StratifiedComplex};

fn betti(s: &StratifiedComplex) -> Vec<usize> {
    s.complex().cochain_complex().cohomology_dims()
}

fn apex(s: &StratifiedComplex) -> usize {
    s.cell(&[s.complex().vertex_count() - 1]).unwrap()
}

fn open_complement_of_apex(s: &StratifiedComplex) -> BTreeSet<usize> {
    let a = apex(s);
    (0..s.len()).filter(|i| *i != a).collect()
}

#[test]
fn constant_sheaf_matches_betti_numbers() {
    for name in ["s1", "torus", "genus2", "s2", "cone-s1", "s1xs1"] {
        let s = space::example(name).unwrap();
        let f = constant_sheaf(&s, s.top_level(), &FGAbelianGroup::free(1)).unwrap();
        let h = sheaf_cohomology(&f).unwrap();
        assert_eq!(h.dims_from_zero(s.dim() as i32), betti(&s), "{name}");
    }
}

#[test]
fn skyscraper_at_a_vertex() {
    let s = examples::circle();
    let v = s.cell(&[0]).unwrap();
    let f = skyscraper(&s, v, 1).unwrap();
    assert_eq!(sheaf_cohomology(&f).unwrap().dims_from_zero(1), vec![1, 0]);
}

#[test]
fn sections_count_components() {
    let s = space::example("two-circles").unwrap();
    let f = constant_sheaf(&s, 1, &FGAbelianGroup::free(1)).unwrap();
    let all: BTreeSet<usize> = (0..s.len()).collect();
    assert_eq!(global_sections(&f, &all).unwrap().dim, 2);
    let z2 = FGAbelianGroup::free(2);
    let f2 = constant_sheaf(&s, 1, &z2).unwrap();
    assert_eq!(global_sections(&f2, &all).unwrap().dim, 4);
    let mut s2 = s.clone();
    s2.set_coefficients([(1, z2)].into_iter().collect());
    let g = IntegralConstantSheaf::on_level(&s2, 1).unwrap();
    assert_eq!(g.sections(&s2, &all).unwrap(), FGAbelianGroup::free(4));
}

#[test]
fn sections_reject_non_open_sets() {
    let s = examples::circle();
    let f = constant_sheaf(&s, 1, &FGAbelianGroup::free(1)).unwrap();
    let v = BTreeSet::from([s.cell(&[0]).unwrap()]);
    assert!(global_sections(&f, &v).is_err());
}

#[test]
fn pushforward_stalk_at_cone_point_is_link_cohomology() {
    for (base, expected) in [("s1", vec![1, 1]), ("torus", vec![1, 2, 1])] {
        let s = construct::cone(&space::example(base).unwrap()).unwrap();
        let u = open_complement_of_apex(&s);
        let f = constant_on_open(&s, &u, 1).unwrap();
        let all: BTreeSet<usize> = (0..s.len()).collect();
        let r = derived_pushforward(&f, &all).unwrap();
        r.check().unwrap();
        let h = r.stalk_cohomology(apex(&s));
        assert_eq!(&h[..expected.len()], &expected[..], "{base}");
        assert!(h[expected.len()..].iter().all(|x| *x == 0));
        // restriction to U is stalkwise quasi-isomorphic to the input
        for c in &u {
            let a = r.stalk_cohomology(*c);
            assert_eq!(a[0], 1);
            assert!(a[1..].iter().all(|x| *x == 0));
        }
        let t = truncate(&r, 0).unwrap();
        t.check().unwrap();
        let ht = t.stalk_cohomology(apex(&s));
        assert_eq!(ht[0], 1);
        assert!(ht[1..].iter().all(|x| *x == 0));
    }
}

#[test]
fn open_domain_cohomology_is_that_of_the_open_set() {
    // cone minus apex retracts onto the base circle
    let s = space::example("cone-s1").unwrap();
    let f = constant_on_open(&s, &open_complement_of_apex(&s), 1).unwrap();
    assert_eq!(sheaf_cohomology(&f).unwrap().dims_from_zero(2), vec![1, 1, 0]);
}

#[test]
fn truncation_preserves_low_degrees() {
    let s = space::example("cone-torus").unwrap();
    let f = constant_on_open(&s, &open_complement_of_apex(&s), 1).unwrap();
    let r = derived_pushforward(&f, &(0..s.len()).collect()).unwrap();
    for k in 0..3 {
        let t = truncate(&r, k).unwrap();
        t.check().unwrap();
        for c in 0..s.len() {
            let a = r.stalk_cohomology(c);
            let b = t.stalk_cohomology(c);
            for d in 0..a.len() {
                let expected = if (d as i32) <= k { a[d] } else { 0 };
                assert_eq!(b[d], expected);
            }
        }
    }
    let t = truncate(&constant_sheaf(&s, 3, &FGAbelianGroup::free(1)).unwrap(), -1).unwrap();
    assert!(t.stalks().iter().all(|c| c.total_dim() == 0));
}

#[test]
fn external_tensor_is_kunneth() {
    let a = examples::circle();
    let b = examples::sphere2();
    let p = construct::product(&a, &b).unwrap();
    let proj = product_projections(&a, &b, &p);
    let fa = constant_sheaf(&a, 1, &FGAbelianGroup::free(1)).unwrap();
    let fb = constant_sheaf(&b, 2, &FGAbelianGroup::free(1)).unwrap();
    let t = external_tensor(&fa, &fb, &p, &proj).unwrap();
    assert_eq!(sheaf_cohomology(&t).unwrap().dims_from_zero(3), vec![1, 1, 1, 1]);
}

#[test]
fn integral_tensor_of_mod_two_constants() {
    let a = examples::point();
    let mut a2 = a.clone();
    a2.set_coefficients([(0, FGAbelianGroup::cyclic(2))].into_iter().collect());
    let p = construct::product(&a2, &a2).unwrap();
    let proj = product_projections(&a2, &a2, &p);
    let g = IntegralConstantSheaf::on_level(&a2, 0).unwrap();
    let t = g.external_tensor(&g, &proj);
    let all: BTreeSet<usize> = (0..p.len()).collect();
    assert_eq!(t.sections(&p, &all).unwrap(), FGAbelianGroup::cyclic(2));
}

#[test]
fn graded_sections_of_cone_and_product() {
    let s = space::example("cone-s1").unwrap();
    assert_eq!(total_sections(&s), FGAbelianGroup::free(2));
    let mut a = examples::circle();
    a.set_coefficients([(1, FGAbelianGroup::free(1))].into_iter().collect());
    let mut b = examples::circle();
    b.set_coefficients([(1, FGAbelianGroup::free(2))].into_iter().collect());
    let p = construct::product(&a, &b).unwrap();
    assert_eq!(total_sections(&p), FGAbelianGroup::free(2));
}
