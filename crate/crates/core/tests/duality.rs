use std::collections::BTreeSet;

use strat_ic::duality::*;
use strat_ic::ic::*;
use strat_ic::linalg::{FGAbelianGroup, Rat, SparseVec};
use strat_ic::space::cup::{cup_pairing, orientation};
use strat_ic::space::{self, StratifiedComplex};
use strat_ic::Error;

fn lm() -> Perversity {
    Perversity::lower_middle()
}

fn ex(name: &str) -> StratifiedComplex {
    space::example(name).unwrap()
}

fn betti(s: &StratifiedComplex) -> Vec<usize> {
    s.complex().cochain_complex().cohomology_dims()
}

#[test]
fn circle_unit_pairs_with_fundamental_class() {
    let s = ex("s1");
    let p = duality_pairing(&s, &deligne_construction(&s, &lm()).unwrap(), 0).unwrap();
    assert_eq!((p.left_degree, p.right_degree, p.matrix.rows(), p.matrix.cols()), (0, 1, 1, 1));
    assert_eq!(p.matrix.get(0, 0).abs(), Rat::int(1));
    assert!(p.nondegenerate);
}

#[test]
fn torus_middle_pairing_is_antisymmetric_and_unimodular() {
    let s = ex("torus");
    let p = duality_pairing(&s, &deligne_construction(&s, &lm()).unwrap(), 1).unwrap();
    assert_eq!(p.matrix.transpose(), p.matrix.scale(&Rat::int(-1)));
    assert_eq!(strat_ic::linalg::determinant(&p.matrix).unwrap(), num_bigint::BigInt::from(1));
    assert!(p.nondegenerate);
}

#[test]
fn smooth_surfaces_are_self_dual() {
    for name in ["s2", "torus", "genus2", "s1xs1"] {
        let s = ex(name);
        let r = duality_report(&s, &deligne_construction(&s, &lm()).unwrap()).unwrap();
        assert!(r.nondegenerate && r.mirror_dims, "{name}");
        assert_eq!(r.model_dims, betti(&s), "{name}");
        for p in &r.pairings {
            assert_eq!((p.matrix.rows(), p.matrix.cols()), (r.ih[p.left_degree], r.ih[p.right_degree]));
        }
    }
}

#[test]
fn graded_commutativity_of_cup_pairing() {
    for name in ["s1", "s2", "torus", "genus2", "s1xs2"] {
        let s = ex(name);
        let cx = s.complex();
        let n = cx.dim() as usize;
        let o = orientation(cx).unwrap();
        let c = cx.cochain_complex();
        for p in 0..=n {
            let a = c.cohomology_at(p as i32).representatives;
            let b = c.cohomology_at((n - p) as i32).representatives;
            let ab = cup_pairing(cx, &o, &a, p, &b, n - p);
            let ba = cup_pairing(cx, &o, &b, n - p, &a, p);
            let sign = if (p * (n - p)).is_multiple_of(2) { Rat::int(1) } else { Rat::int(-1) };
            assert_eq!(ab, ba.transpose().scale(&sign), "{name} degree {p}");
        }
    }
}

#[test]
fn isolated_singularities_model_matches_ladder() {
    for name in ["suspension-s1", "suspension-s2", "suspension-torus"] {
        let s = ex(name);
        for p in [Perversity::lower_middle(), Perversity::upper_middle()] {
            let ic = deligne_construction(&s, &p).unwrap();
            assert_eq!(CochainModel::build(&s, &ic).unwrap().cohomology_dims(), ic.ih, "{name} {p}");
        }
    }
}

#[test]
fn lagrangian_refinement_restores_duality() {
    let s = ex("suspension-torus");
    let form = link_form(&s, 0).unwrap();
    for w in lagrangian_subspaces(&form, 3).unwrap() {
        let ic = refined_ic(&s, &lm(), &Mezzoperversity::on_level(&s, 0, &w).unwrap()).unwrap();
        let r = duality_report(&s, &ic).unwrap();
        assert_eq!(r.model_dims, vec![1, 1, 1, 1]);
        assert!(r.nondegenerate && r.mirror_dims);
    }
}

#[test]
fn non_witt_without_refinement_is_not_self_dual() {
    let s = ex("suspension-torus");
    let r = duality_report(&s, &deligne_construction(&s, &lm()).unwrap()).unwrap();
    assert!(!r.mirror_dims && !r.nondegenerate);
    assert!(!r.pairings[1].nondegenerate);
}

#[test]
fn pairing_errors() {
    let s = ex("cone-torus");
    let ic = deligne_construction(&s, &lm()).unwrap();
    assert!(matches!(duality_pairing(&s, &ic, 1), Err(Error::Unsupported(_))));
    let t = ex("torus");
    let ic = deligne_construction(&t, &lm()).unwrap();
    assert!(matches!(duality_pairing(&t, &ic, 3), Err(Error::DegreeOutOfRange(3))));
    let rp2 = ex("rp2");
    let ic = deligne_construction(&rp2, &lm()).unwrap();
    assert!(matches!(duality_pairing(&rp2, &ic, 0), Err(Error::NotOrientable(_))));
}

#[test]
fn stratumwise_mirror_tables() {
    let s2 = stratumwise_duality(&ex("s2")).unwrap();
    assert_eq!(s2.len(), 1);
    assert_eq!(s2[0].degrees.iter().map(|d| d.1).collect::<Vec<_>>(), vec![1, 0, 1]);
    assert!(s2[0].degrees.iter().all(|d| d.3) && s2[0].closure_mirror);
    let c = stratumwise_duality(&ex("cone-s1")).unwrap();
    let top = c.iter().find(|r| r.level == 2).unwrap();
    assert_eq!((top.degrees[1].1, top.degrees[2].1), (1, 1));
    assert!(matches!(stratumwise_duality(&ex("mobius")), Err(Error::NotOrientable(_))));
}

#[test]
fn kunneth_rational_products() {
    let r = kunneth(&ex("s1"), &ex("s1"), &KunnethMode::Rational).unwrap();
    assert!(r.matches && r.euler_multiplicative);
    assert_eq!(r.rows.iter().map(|x| x.direct).collect::<Vec<_>>(), vec![1, 2, 1]);
    let r = kunneth(&ex("s1"), &ex("s2"), &KunnethMode::Rational).unwrap();
    assert_eq!(r.rows.iter().map(|x| x.direct).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
    assert_eq!(r.euler, (0, 2, 0));
}

#[test]
fn kunneth_singular_factor() {
    let (c, s1) = (ex("cone-s1"), ex("s1"));
    let st = kunneth(&c, &s1, &KunnethMode::Stratumwise).unwrap();
    assert!(st.matches);
    assert_eq!(st.rows.iter().map(|x| x.convolution).collect::<Vec<_>>(), vec![2, 3, 2, 1]);
    for p in [Perversity::lower_middle(), Perversity::upper_middle()] {
        let r = kunneth(&c, &s1, &KunnethMode::Intersection(p)).unwrap();
        assert!(r.matches);
        assert_eq!(r.rows.iter().map(|x| x.direct).collect::<Vec<_>>(), vec![1, 1, 0, 0]);
    }
    assert!(matches!(kunneth(&c, &s1, &KunnethMode::Integral), Err(Error::ModeMismatch(_))));
}

fn mod_two_circle() -> StratifiedComplex {
    let mut c = ex("s1");
    let top = c.top_level();
    c.set_coefficients([(top, FGAbelianGroup::cyclic(2))].into());
    c
}

#[test]
fn integral_tor_row() {
    let c = mod_two_circle();
    let r = kunneth(&c, &c, &KunnethMode::Integral).unwrap();
    assert!(r.matches);
    let z2 = FGAbelianGroup::cyclic(2);
    let row = |k: i32| r.rows.iter().find(|x| x.degree == k).unwrap();
    assert_eq!(row(-1).tor.len(), 1);
    assert_eq!(row(-1).direct_group, Some(z2.clone()));
    assert_eq!(row(0).tor.iter().map(|t| (t.p, t.q)).collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
    assert!(r.rows.iter().flat_map(|x| &x.tor).all(|t| t.group == Some(z2.clone())));
    assert_eq!(row(1).direct_group, Some(z2.power(3)));
}

#[test]
fn integral_free_coefficients_have_no_tor() {
    let r = kunneth(&ex("s1"), &ex("torus"), &KunnethMode::Integral).unwrap();
    assert!(r.matches);
    assert!(r.rows.iter().all(|x| x.tor.is_empty()));
    assert_eq!(r.rows.iter().filter(|x| x.degree >= 0).map(|x| x.direct).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
}

#[test]
fn resolution_computes_the_group() {
    let g = FGAbelianGroup::new(1, &[2, 3]);
    let h = resolution(&g).integral_cohomology().unwrap();
    assert_eq!(h, vec![FGAbelianGroup::trivial(), g]);
}

#[test]
fn fibration_over_circle() {
    let c = ex("s1");
    let (t, sub) = cylinder(&c).unwrap();
    let r = fibration_decomposition(&t, &sub, &c, &lm()).unwrap();
    assert_eq!(r.rows.iter().map(|x| (x.total, x.ih)).collect::<Vec<_>>(), vec![(1, 1), (1, 0), (0, 0)]);
    assert_eq!(r.rows[2].shifted_fiber, 1);
    assert!(!r.shifted_additivity);
    assert!(r.skyscraper_additivity);
}

#[test]
fn fibration_over_genus_two() {
    let c = ex("genus2");
    let (t, sub) = cylinder(&c).unwrap();
    let r = fibration_decomposition(&t, &sub, &c, &lm()).unwrap();
    assert_eq!(r.rows[3].shifted_fiber, 4);
    assert_eq!(r.rows.iter().map(|x| x.skyscraper).collect::<Vec<_>>(), vec![0, 4, 1, 0]);
    assert!(r.skyscraper_additivity);
}

#[test]
fn trivial_collapse() {
    let c = ex("s1");
    let (t, _) = cylinder(&c).unwrap();
    let r = fibration_decomposition(&t, &BTreeSet::new(), &c, &lm()).unwrap();
    assert!(r.rows.iter().all(|x| x.ih == x.total && x.shifted_fiber == 0));
    assert!(r.shifted_additivity);
}

#[test]
fn collapse_with_wrong_fiber() {
    let (t, sub) = cylinder(&ex("s1")).unwrap();
    assert!(matches!(fibration_decomposition(&t, &sub, &ex("s2"), &lm()), Err(Error::InconsistentCollapse(_))));
}

/// Projections of the staircase torus and the pulled-back circle generator.
fn torus_classes() -> (StratifiedComplex, SparseVec, SparseVec) {
    let circle = ex("s1");
    let torus = ex("s1xs1");
    let g = circle.complex().cochain_complex().cohomology_at(1).representatives[0].clone();
    let nb = circle.complex().vertex_count();
    let pi1: Vec<usize> = (0..torus.complex().vertex_count()).map(|v| v / nb).collect();
    let pi2: Vec<usize> = (0..torus.complex().vertex_count()).map(|v| v % nb).collect();
    let a = pullback(circle.complex(), torus.complex(), &pi1, &g, 1);
    let b = pullback(circle.complex(), torus.complex(), &pi2, &g, 1);
    (torus, a, b)
}

/// Vertices shared by two vertex cycles.
fn transverse_count(x: &[usize], y: &[usize]) -> usize {
    x.iter().filter(|v| y.contains(v)).count()
}

#[test]
fn section_classes_meet_transversally_once() {
    let (torus, vertical, horizontal) = torus_classes();
    let nb = 3;
    let h_cycle: Vec<usize> = (0..3).map(|i| i * nb).collect();
    let v_cycle: Vec<usize> = (0..3).collect();
    let diag: Vec<usize> = (0..3).map(|i| i * nb + i).collect();
    let cx = torus.complex();
    let i = intersection_number(cx, &[(1, vertical.clone())], &[(1, horizontal.clone())]).unwrap();
    assert_eq!(i.value.abs(), Rat::int(transverse_count(&h_cycle, &v_cycle) as i64));
    let d: SparseVec = strat_ic::linalg::sparse::sub_scaled(&vertical, &Rat::int(-1), &horizontal);
    let j = intersection_number(cx, &[(1, d.clone())], &[(1, horizontal.clone())]).unwrap();
    assert_eq!(j.value.abs(), Rat::int(transverse_count(&diag, &h_cycle) as i64));
    assert_eq!(intersection_number(cx, &[(1, d.clone())], &[(1, d)]).unwrap().value, Rat::int(0));
    assert_eq!(intersection_number(cx, &[(1, horizontal.clone())], &[(1, horizontal)]).unwrap().value, Rat::int(0));
}

#[test]
fn swapping_arguments_gives_graded_sign() {
    let (torus, a, b) = torus_classes();
    let cx = torus.complex();
    let ab = intersection_number(cx, &[(1, a.clone())], &[(1, b.clone())]).unwrap();
    let ba = intersection_number(cx, &[(1, b)], &[(1, a)]).unwrap();
    assert_eq!(ab.value, -&ba.value);
    assert_ne!(ab.value, Rat::int(0));
}

#[test]
fn point_class_self_intersection() {
    let s = ex("s2");
    let top = s.complex().cochain_complex().cohomology_at(2).representatives[0].clone();
    let r = intersection_number(s.complex(), &[(2, top.clone())], &[(2, top)]).unwrap();
    assert!(r.terms.is_empty());
    assert_eq!(r.value, Rat::int(0));
    assert!(r.totals_agree);
}

#[test]
fn odd_dimension_is_rejected() {
    let r = intersection_number(ex("s1").complex(), &[], &[]);
    assert!(matches!(r, Err(Error::DegreeMismatch(_))));
}
