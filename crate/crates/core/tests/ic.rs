use std::collections::BTreeSet;

use strat_ic::ic::*;
use strat_ic::linalg::{ExactMatrix, FGAbelianGroup};
use strat_ic::sheaf::{constant_on_open, constant_sheaf, derived_pushforward};
use strat_ic::space::{self, cone, StratifiedComplex};
use strat_ic::Error;

fn betti(s: &StratifiedComplex) -> Vec<usize> {
    s.complex().cochain_complex().cohomology_dims()
}

fn apex(s: &StratifiedComplex) -> usize {
    s.cell(&[s.complex().vertex_count() - 1]).unwrap()
}

/// Link cohomology in degrees up to the cutoff, zero above.
fn cone_oracle(base: &StratifiedComplex, cutoff: i32) -> Vec<usize> {
    let h = betti(base);
    (0..=base.dim() + 1).map(|k| if k as i32 <= cutoff { h.get(k).copied().unwrap_or(0) } else { 0 }).collect()
}

fn lm() -> Perversity {
    Perversity::lower_middle()
}

#[test]
fn cone_formula_for_shipped_bases() {
    for name in ["s1", "torus", "genus2", "s2"] {
        let base = space::example(name).unwrap();
        let c = cone(&base).unwrap();
        let codim = base.dim() + 1;
        for p in [Perversity::lower_middle(), Perversity::upper_middle()] {
            let expected = cone_oracle(&base, p.value(codim).unwrap());
            let r = deligne_construction(&c, &p).unwrap();
            assert_eq!(r.ih, expected, "{name} {p}");
            assert_eq!(r.stalk_dims(apex(&c)), expected, "{name} {p} apex");
            assert!(r.support.holds);
        }
    }
}

#[test]
fn cone_torus_upper_middle_apex() {
    let s = space::example("cone-torus").unwrap();
    let r = deligne_construction(&s, &Perversity::upper_middle()).unwrap();
    assert_eq!(&r.stalk_dims(apex(&s))[..3], &[1, 2, 0]);
    assert_eq!(r.ih[1], 2);
}

#[test]
fn single_stratum_is_ordinary_cohomology() {
    for name in ["s1", "torus", "s1xs2"] {
        let s = space::example(name).unwrap();
        let r = deligne_construction(&s, &lm()).unwrap();
        assert_eq!(r.ih, betti(&s), "{name}");
        assert!(r.cutoffs.is_empty());
    }
}

#[test]
fn suspension_by_mayer_vietoris() {
    let base = space::example("torus").unwrap();
    let s = space::example("suspension-torus").unwrap();
    let h = betti(&base);
    for p in [Perversity::lower_middle(), Perversity::upper_middle()] {
        let c = p.value(3).unwrap() as usize;
        let expected: Vec<usize> = (0..=3)
            .map(|k| match k {
                0 => 1,
                k if k <= c => h[k],
                k if k - 1 > c => h[k - 1],
                _ => 0,
            })
            .collect();
        assert_eq!(deligne_construction(&s, &p).unwrap().ih, expected, "{p}");
    }
}

#[test]
fn untruncated_pushforward_violates_support_on_cone_torus() {
    let s = space::example("cone-torus").unwrap();
    let open: BTreeSet<usize> = s.stratum(s.top_level()).into_iter().collect();
    let f = derived_pushforward(&constant_on_open(&s, &open, 1).unwrap(), &(0..s.len()).collect()).unwrap();
    let cert = verify_candidate(&s, &f, &lm()).unwrap();
    assert!(!cert.holds);
    let v = cert.first_violation.unwrap();
    assert_eq!((v.cell, v.degree, v.dim), (apex(&s), 1, 2));
    let degrees = &cert.rows[0].degrees;
    assert!(!degrees.iter().find(|d| d.0 == 2).unwrap().1);
    assert_eq!(f.stalk_cohomology(apex(&s))[2 - f.degree_range().start as usize], 1);
}

#[test]
fn constant_sheaf_meets_support_on_cone_torus() {
    let s = space::example("cone-torus").unwrap();
    let f = constant_sheaf(&s, s.top_level(), &FGAbelianGroup::free(1)).unwrap();
    assert!(verify_candidate(&s, &f, &lm()).unwrap().holds);
}

#[test]
fn zero_complex_support_is_vacuous() {
    let s = space::example("cone-s1").unwrap();
    let r = deligne_construction(&s, &lm()).unwrap();
    let cert = support_certificate(&r.complex, &Default::default());
    assert!(cert.holds && cert.rows.is_empty());
}

#[test]
fn codimension_one_is_rejected() {
    let s = space::example("interval").unwrap();
    let levels: Vec<usize> = (0..s.len()).map(|i| if s.complex().simplex_dim(i) == 0 && i == 0 { 0 } else { 1 }).collect();
    let t = s.relevel(&levels, s.coefficients()).unwrap();
    assert!(matches!(deligne_construction(&t, &lm()), Err(Error::CodimensionOne { .. })));
}

#[test]
fn witt_verdicts() {
    let c = witt_check(&space::example("cone-s1").unwrap());
    assert!(c.witt);
    assert_eq!(c.strata[0].middle_degree, None);
    let t = witt_check(&space::example("cone-torus").unwrap());
    assert!(!t.witt);
    assert_eq!((t.strata[0].middle_degree, t.strata[0].middle_dim), (Some(1), 2));
    assert!(witt_check(&space::example("torus").unwrap()).witt);
    assert!(witt_check(&space::example("cone-s2").unwrap()).witt);
}

#[test]
fn stratumwise_tables() {
    let t = stratified_de_rham(&space::example("cone-s1").unwrap()).unwrap().table;
    assert_eq!(t.total, vec![2, 1, 1]);
    let g = stratumwise_table(&space::example("genus2-cone").unwrap()).unwrap();
    assert_eq!(g.middle(), vec![4, 4]);
    let p = stratumwise_table(&space::example("product").unwrap()).unwrap();
    assert_eq!(p.total, vec![2, 3, 2, 1]);
    assert_eq!(mirrored_row(&[1, 2, 1, 0], 3), vec![1, 2, 2, 1]);
}

#[test]
fn de_rham_single_stratum() {
    let s = space::example("torus").unwrap();
    assert_eq!(stratified_de_rham(&s).unwrap().ic.ih, betti(&s));
}

fn torus_form() -> ExactMatrix {
    link_form(&space::example("cone-torus").unwrap(), 0).unwrap()
}

#[test]
fn torus_cup_form_is_unimodular_symplectic() {
    let f = torus_form();
    assert_eq!(f.transpose(), f.scale(&strat_ic::Rat::int(-1)));
    assert_eq!(strat_ic::linalg::determinant(&f).unwrap(), num_bigint::BigInt::from(1));
    let l = lagrangian_subspaces(&f, 3).unwrap();
    assert_eq!(l[0], ExactMatrix::from_i64(&[vec![1, 0]]));
}

#[test]
fn refined_cone_torus_apex() {
    let s = space::example("cone-torus").unwrap();
    for w in lagrangian_subspaces(&torus_form(), 3).unwrap() {
        let m = Mezzoperversity::on_level(&s, 0, &w).unwrap();
        let r = refined_ic(&s, &lm(), &m).unwrap();
        assert_eq!(&r.stalk_dims(apex(&s))[..3], &[1, 1, 0]);
        assert_eq!(r.ih, vec![1, 1, 0, 0]);
        assert!(r.support.holds);
        assert_eq!(local_contribution(&m, 0).unwrap(), 1);
        let d = dual_mezzoperversity(&m);
        assert_eq!(d.sites[0].basis, w);
    }
}

#[test]
fn refined_suspension_depends_on_w() {
    let s = space::example("suspension-torus").unwrap();
    let cases = [([1, 0], [1, 0], [1, 1, 1, 1]), ([1, 0], [0, 1], [1, 0, 0, 1]), ([1, 1], [1, -1], [1, 0, 0, 1])];
    for (a, b, expected) in cases {
        let mut m = Mezzoperversity::on_level(&s, 0, &ExactMatrix::from_i64(&[a.to_vec()])).unwrap();
        m.sites[1].basis = ExactMatrix::from_i64(&[b.to_vec()]);
        assert_eq!(refined_ic(&s, &lm(), &m).unwrap().ih, expected.to_vec(), "{a:?} {b:?}");
    }
}

#[test]
fn refined_errors() {
    let s = space::example("cone-torus").unwrap();
    let plane = ExactMatrix::from_i64(&[vec![1, 0], vec![0, 1]]);
    let m = Mezzoperversity::on_level(&s, 0, &plane).unwrap();
    assert!(matches!(refined_ic(&s, &lm(), &m), Err(Error::NotLagrangian(_))));
    assert!(matches!(refined_ic(&s, &lm(), &Mezzoperversity::empty()), Err(Error::MezzoStrataMismatch(_))));
    assert!(matches!(local_contribution(&m, 3), Err(Error::StratumNotFound(3))));
}

#[test]
fn witt_space_with_empty_mezzoperversity() {
    for name in ["cone-s1", "product", "suspension-s2"] {
        let s = space::example(name).unwrap();
        let a = deligne_construction(&s, &lm()).unwrap();
        let b = refined_ic(&s, &lm(), &Mezzoperversity::empty()).unwrap();
        assert_eq!((a.ih, a.cutoffs), (b.ih, b.cutoffs), "{name}");
    }
}

#[test]
fn mezzo_json() {
    let s = space::example("cone-torus").unwrap();
    let m = parse_mezzo(&s, r#"{"stratum": 0, "basis": [[1, "1/2"]]}"#).unwrap();
    assert_eq!(m.levels(), BTreeSet::from([0]));
    assert!(m.sites[0].certificate.holds());
    assert!(matches!(parse_mezzo(&s, r#"{"stratum": 0, "basis": [[1, 0, 0]]}"#), Err(Error::ShapeMismatch(_))));
    assert!(matches!(parse_mezzo(&s, r#"{"stratum": 0}"#), Err(Error::BadInput { .. })));
}
