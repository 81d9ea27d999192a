use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use strat_ic::linalg::{
    convolve, determinant, kernel_basis, rank, smith_normal_form, tensor_complex, tor1, CochainComplex, ExactMatrix, FGAbelianGroup, Rat,
};

fn matrix(max: usize) -> impl Strategy<Value = ExactMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r).prop_map(|rows| ExactMatrix::from_i64(&rows))
    })
}

/// Two-term complex `Q^c → Q^r` given by the matrix.
fn two_term(m: &ExactMatrix) -> CochainComplex {
    CochainComplex::new(0, vec![m.cols(), m.rows()], vec![m.clone()]).unwrap()
}

/// Rank over `f64` with partial pivoting; exact for the small integer entries used here.
fn float_rank(m: &ExactMatrix) -> usize {
    let mut a: Vec<Vec<f64>> = m.to_dense().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap() as f64).collect()).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).max_by(|i, j| a[*i][c].abs().total_cmp(&a[*j][c].abs())) else { break };
        if a[p][c].abs() < 1e-9 {
            continue;
        }
        a.swap(r, p);
        let pivot = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            let f = row[c] / pivot[c];
            for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
                *x -= f * y;
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix(6)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.len(), m.cols());
        for v in &k {
            prop_assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn rank_agrees_with_float_elimination_and_smith(m in matrix(5)) {
        let r = rank(&m);
        prop_assert_eq!(r, float_rank(&m));
        prop_assert_eq!(r, smith_normal_form(&m).unwrap().factors.len());
        prop_assert_eq!(r, rank(&m.transpose()));
    }

    #[test]
    fn smith_factors_divide_and_transforms_reproduce(m in matrix(4)) {
        let s = smith_normal_form(&m).unwrap();
        for w in s.factors.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
        let d = s.u.mul(&m).mul(&s.v);
        for (r, c, x) in d.entries() {
            prop_assert_eq!(r, c);
            prop_assert_eq!(x.to_bigint().unwrap(), s.factors[r].clone());
        }
    }

    #[test]
    fn determinant_is_product_of_factors_up_to_sign(n in 1usize..4, seed in proptest::collection::vec(-3i64..=3, 16)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| seed[i * n..i * n + n].to_vec()).collect();
        let m = ExactMatrix::from_i64(&rows);
        let d = determinant(&m).unwrap();
        let s = smith_normal_form(&m).unwrap();
        let prod: BigInt = if s.factors.len() == n { s.factors.iter().product() } else { BigInt::from(0) };
        prop_assert_eq!(d.abs(), prod.abs());
    }

    #[test]
    fn tensor_complex_obeys_kunneth(a in matrix(3), b in matrix(3)) {
        let (x, y) = (two_term(&a), two_term(&b));
        let t = tensor_complex(&x, &y);
        t.check_square_zero().unwrap();
        let mut want = convolve(&x.cohomology_dims(), &y.cohomology_dims());
        let mut got = t.cohomology_dims();
        want.resize(3, 0);
        got.resize(3, 0);
        prop_assert_eq!(got, want);
        prop_assert_eq!(t.euler_characteristic(), x.euler_characteristic() * y.euler_characteristic());
    }

    #[test]
    fn tor_of_cyclic_groups(a in 1u64..30, b in 1u64..30, r in 0usize..3) {
        let (g, h) = (FGAbelianGroup::new(r, &[a]), FGAbelianGroup::cyclic(b));
        prop_assert_eq!(tor1(&g, &h), tor1(&h, &g));
        prop_assert_eq!(tor1(&g, &h), FGAbelianGroup::cyclic(gcd(a, b)));
        prop_assert!(tor1(&FGAbelianGroup::free(r), &h).is_trivial());
        prop_assert_eq!(g.tensor(&h), FGAbelianGroup::new(0, &[b; 1]).power(r).direct_sum(&FGAbelianGroup::cyclic(gcd(a, b))));
    }

    #[test]
    fn rational_field_laws(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let (x, y) = (Rat::new(a, b), Rat::new(c, d));
        prop_assert_eq!(&x + &y, Rat::new(a * d + c * b, b * d));
        prop_assert_eq!(&x * &y, Rat::new(a * c, b * d));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if !x.is_zero() {
            prop_assert!((&x * &x.recip()).is_one());
        }
        prop_assert_eq!(x.to_string().parse::<Rat>().unwrap(), x);
    }
}

#[test]
fn integral_cohomology_of_a_degree_two_map() {
    let c = CochainComplex::new(0, vec![1, 1], vec![ExactMatrix::from_i64(&[vec![2]])]).unwrap();
    assert_eq!(c.integral_cohomology().unwrap(), vec![FGAbelianGroup::trivial(), FGAbelianGroup::cyclic(2)]);
    assert_eq!(c.cohomology_dims(), vec![0, 0]);
}

#[test]
fn convolution_of_circle_with_itself() {
    assert_eq!(convolve(&[1, 1], &[1, 1]), vec![1, 2, 1]);
}
