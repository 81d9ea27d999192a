use std::collections::BTreeSet;

use proptest::prelude::*;
use strat_ic::linalg::convolve;
use strat_ic::space::{collapse, cone, example, interval, parse_space, product, suspension, to_output, StratifiedComplex, EXAMPLE_NAMES};
use strat_ic::Error;

const BASES: &[&str] = &["point", "s1", "two-circles", "s2", "torus", "rp2", "cone-s1"];

fn betti(s: &StratifiedComplex) -> Vec<usize> {
    let mut h = s.complex().cochain_complex().cohomology_dims();
    while h.len() > 1 && h.last() == Some(&0) {
        h.pop();
    }
    h
}

fn base() -> impl Strategy<Value = &'static str> {
    proptest::sample::select(BASES)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cone_is_contractible_with_base_as_apex_link(name in base()) {
        let b = example(name).unwrap();
        let c = cone(&b).unwrap();
        prop_assert_eq!(betti(&c), vec![1]);
        prop_assert_eq!(c.dim(), b.dim() + 1);
        let apex = c.cell(&[c.complex().vertex_count() - 1]).unwrap();
        let (link, _) = c.complex().link(apex);
        prop_assert_eq!(link.f_vector(), b.complex().f_vector());
        prop_assert_eq!(link.cochain_complex().cohomology_dims(), b.complex().cochain_complex().cohomology_dims());
    }

    #[test]
    fn suspension_shifts_reduced_cohomology(name in base()) {
        let b = example(name).unwrap();
        let s = suspension(&b).unwrap();
        let hb = b.complex().cochain_complex().cohomology_dims();
        let hs = s.complex().cochain_complex().cohomology_dims();
        let components = hb[0];
        prop_assert_eq!(hs[0], 1);
        prop_assert_eq!(hs[1], components - 1);
        for k in 1..hb.len() {
            prop_assert_eq!(hs[k + 1], hb[k]);
        }
    }

    #[test]
    fn product_cohomology_and_euler(a in base(), b in base()) {
        let (x, y) = (example(a).unwrap(), example(b).unwrap());
        let xy = product(&x, &y).unwrap();
        prop_assert_eq!(xy.dim(), x.dim() + y.dim());
        prop_assert_eq!(betti(&xy), convolve(&betti(&x), &betti(&y)));
        prop_assert_eq!(xy.complex().euler_characteristic(), x.complex().euler_characteristic() * y.complex().euler_characteristic());
        let sums: BTreeSet<usize> = x.stratum_levels().iter().flat_map(|p| y.stratum_levels().into_iter().map(move |q| p + q)).collect();
        prop_assert_eq!(xy.stratum_levels(), sums.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn collapsing_a_cylinder_end_gives_a_cone(name in base()) {
        let b = example(name).unwrap();
        let cyl = product(&b, &interval()).unwrap();
        let cx = cyl.complex();
        let end: BTreeSet<usize> = (0..cx.len()).filter(|i| cx.simplex(*i).iter().all(|v| v % 2 == 0)).collect();
        let c = collapse(&cyl, &end).unwrap();
        prop_assert_eq!(betti(&c.space), vec![1]);
        prop_assert_eq!(c.space.complex().euler_characteristic(), 1);
        let (link, _) = c.space.complex().link(c.space.cell(&[c.point]).unwrap());
        prop_assert_eq!(link.cochain_complex().cohomology_dims(), b.complex().cochain_complex().cohomology_dims());
    }
}

#[test]
fn every_example_roundtrips_through_json() {
    for name in EXAMPLE_NAMES {
        let s = example(name).unwrap();
        let json = serde_json::to_string(&to_output(&s)).unwrap();
        let mut out = to_output(&parse_space(&json).unwrap());
        out.metadata = to_output(&s).metadata;
        assert_eq!(out, to_output(&s), "{name}");
    }
}

#[test]
fn unknown_example() {
    assert!(matches!(example("klein-bottle-3"), Err(Error::UnknownExample(_))));
}

#[test]
fn bad_input_reports_a_pointer() {
    let err = parse_space(r#"{"vertices":2,"simplices":[[0,1],[0,"x"]]}"#).unwrap_err();
    match err {
        Error::BadInput { pointer, .. } => assert_eq!(pointer, "/simplices/1/1"),
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn vertex_out_of_range_is_rejected() {
    assert!(parse_space(r#"{"vertices":2,"simplices":[[0,5]]}"#).is_err());
}
