use proptest::prelude::*;
use vinv::domain::{Coeff, RatFn};
use vinv::poly::Poly;
use vinv::rational::{q, qr, Q};
use vinv::series::{residue_t, Series, SeriesError};

fn s(cs: &[i64], order: Option<i64>) -> Series<Q> {
    Series::from_coeffs("q", cs.iter().map(|&c| q(c)).collect(), order)
}

fn coeffs(x: &Series<Q>, n: i64) -> Vec<Q> {
    (0..n).map(|k| x.coeff_i(k).unwrap()).collect()
}

/// Schoolbook product of coefficient vectors.
fn convolve(a: &[Q], b: &[Q], n: usize) -> Vec<Q> {
    let mut out = vec![q(0); n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < n {
                out[i + j] += x * y;
            }
        }
    }
    out
}

#[test]
fn difference_of_squares() {
    assert_eq!(s(&[1, 1], None).mul(&s(&[1, -1], None)).unwrap(), s(&[1, 0, -1], None));
}

#[test]
fn triple_product_expansion() {
    let mut p = s(&[1], None);
    for k in 1..=3 {
        let mut f = vec![0; k + 1];
        f[0] = 1;
        f[k] = -1;
        p = p.mul(&s(&f, None)).unwrap();
    }
    let want = convolve(&convolve(&[q(1), q(-1)], &[q(1), q(0), q(-1)], 7), &[q(1), q(0), q(0), q(-1)], 7);
    assert_eq!(coeffs(&p, 7), want);
    assert_eq!(want, [1, -1, -1, 0, 1, 1, -1].map(q).to_vec());
}

#[test]
fn quarter_exponents_normalize() {
    let a = Series::monomial("q", q(1), qr(1, 4));
    let b = a.mul(&a).unwrap();
    assert_eq!(b.exp_den(), 2);
    assert_eq!(b.coeff(&qr(1, 2)).unwrap(), q(1));
}

#[test]
fn geometric_and_partitions() {
    let g = s(&[1, -1], Some(8)).invert().unwrap();
    assert!(coeffs(&g, 8).iter().all(|c| *c == q(1)));
    let mut e = s(&[1], Some(6));
    for k in 1..6 {
        let mut f = vec![0; k + 1];
        f[0] = 1;
        f[k] = -1;
        e = e.mul(&s(&f, Some(6))).unwrap();
    }
    // partitions counted by brute force over multiplicity vectors
    let count = |n: usize| {
        fn go(n: usize, max: usize) -> u64 {
            if n == 0 {
                return 1;
            }
            (1..=max.min(n)).map(|k| go(n - k, k)).sum()
        }
        go(n, n)
    };
    let p = e.invert().unwrap();
    for n in 0..6 {
        assert_eq!(p.coeff_i(n as i64).unwrap(), q(count(n) as i64));
    }
}

#[test]
fn inverse_over_rational_functions() {
    let t = RatFn::t();
    let f = Series::from_terms("q", [(q(0), t.scale(&q(2))), (q(1), t.scale(&q(2)).mul(&t))], Some(q(3)));
    let g = f.invert().unwrap();
    assert_eq!(g.coeff_i(0).unwrap(), RatFn::new(Poly::constant(q(1)), Poly::from_coeffs(vec![q(0), q(2)])));
    assert!(f.mul(&g).unwrap().agrees_with(&Series::one("q")));
}

#[test]
fn binomial_square_root() {
    let r = s(&[1, 1], Some(4)).pow_rational(&qr(1, 2)).unwrap();
    assert_eq!(coeffs(&r, 4), vec![q(1), qr(1, 2), qr(-1, 8), qr(1, 16)]);
}

#[test]
fn delta_square_root() {
    let n = 10;
    let mut p = s(&[1], Some(n));
    for k in 1..n as usize {
        let mut f = vec![0; k + 1];
        f[0] = 1;
        f[k] = -1;
        p = p.mul(&s(&f, Some(n)).pow_i(12).unwrap()).unwrap();
    }
    let delta = p.mul(&p).unwrap().shift(&q(1));
    let r = delta.pow_rational(&qr(1, 2)).unwrap();
    assert!(r.agrees_with(&p.shift(&qr(1, 2))));
    assert_eq!(r.valuation().unwrap(), qr(1, 2));
}

#[test]
fn zeroth_power() {
    let f = s(&[3, 1, 4], Some(5));
    assert!(f.pow_rational(&q(0)).unwrap().agrees_with(&Series::one("q")));
}

#[test]
fn dilation_and_sign_flip() {
    assert_eq!(s(&[1, 1, 1], None).dilate(&q(2)).unwrap(), s(&[1, 0, 1, 0, 1], None));
    assert_eq!(s(&[1, 2, 0, 0, 2], None).flip_sign().unwrap(), s(&[1, -2, 0, 0, 2], None));
    let frac = Series::monomial("q", q(1), qr(1, 2));
    assert!(matches!(frac.flip_sign(), Err(SeriesError::Lattice(_))));
}

#[test]
fn reversion_examples() {
    let z = s(&[0, 1, -1], Some(6));
    let t = z.revert().unwrap();
    assert_eq!(coeffs(&t, 6), [0, 1, 1, 2, 5, 14].map(q).to_vec());
    assert!(z.substitute(&t).unwrap().agrees_with(&Series::gen("q")));
    let w = s(&[0, 1], Some(5)).mul(&s(&[1, 1], Some(5)).pow_i(3).unwrap()).unwrap();
    let v = w.revert().unwrap();
    assert_eq!(coeffs(&v, 4), [0, 1, -3, 15].map(q).to_vec());
    assert!(w.substitute(&v).unwrap().agrees_with(&Series::gen("q")));
    assert_eq!(Series::<Q>::gen("q").revert().unwrap(), Series::gen("q"));
}

#[test]
fn exp_and_log() {
    let e = s(&[0, 1], Some(4)).exp().unwrap();
    assert_eq!(coeffs(&e, 4), vec![q(1), q(1), qr(1, 2), qr(1, 6)]);
    let l = s(&[1, -1], Some(4)).invert().unwrap().log().unwrap();
    assert_eq!(coeffs(&l, 4), vec![q(0), q(1), qr(1, 2), qr(1, 3)]);
    // log of a product of powers is the same combination of logs
    let n = 8;
    let fs: Vec<Series<Q>> = (1..=7).map(|k| s(&[1, k, -k], Some(n))).collect();
    let es = [3, -1, 2, 0, 5, -2, 1];
    let mut prod = s(&[1], Some(n));
    let mut lsum = Series::zero("q", Some(q(n)));
    for (f, e) in fs.iter().zip(es) {
        prod = prod.mul(&f.pow_i(e).unwrap()).unwrap();
        lsum = lsum.add(&f.log().unwrap().scale(&q(e))).unwrap();
    }
    assert!(prod.log().unwrap().agrees_with(&lsum));
}

#[test]
fn coefficient_and_residue() {
    assert_eq!(s(&[1, -1], Some(8)).invert().unwrap().coeff_i(5).unwrap(), q(1));
    let f = Series::from_terms("t", [(q(-1), q(7)), (q(0), q(2)), (q(1), q(3))], None);
    assert_eq!(residue_t(&f).unwrap(), q(7));
    // 1/(t(1-2t)) = sum 2^k t^(k-1)
    let g = Series::from_coeffs("t", vec![q(1), q(-2)], Some(4)).invert().unwrap().shift(&q(-1));
    assert_eq!(residue_t(&g).unwrap(), q(1));
    assert!(matches!(s(&[1], Some(3)).coeff_i(3), Err(SeriesError::BeyondOrder { .. })));
}

fn arb_series(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, len)
}

fn unit_series(v: &[i64], n: i64) -> Series<Q> {
    let mut c = v.to_vec();
    c[0] = if c[0] == 0 { 1 } else { c[0] };
    s(&c, Some(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in arb_series(7), b in arb_series(7), c in arb_series(7)) {
        let (x, y, z) = (s(&a, Some(7)), s(&b, Some(7)), s(&c, Some(7)));
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        let pa: Vec<Q> = a.iter().map(|&v| q(v)).collect();
        let pb: Vec<Q> = b.iter().map(|&v| q(v)).collect();
        prop_assert_eq!(coeffs(&x.mul(&y).unwrap(), 7), convolve(&pa, &pb, 7));
    }

    #[test]
    fn inverse_two_sided(a in arb_series(8)) {
        let x = unit_series(&a, 8);
        let i = x.invert().unwrap();
        prop_assert!(x.mul(&i).unwrap().agrees_with(&Series::one("q")));
        prop_assert!(i.mul(&x).unwrap().agrees_with(&Series::one("q")));
    }

    #[test]
    fn rational_powers(a in arb_series(7), p in -4i64..=4, d in 1i64..=4) {
        let mut c = a.clone();
        c[0] = 1;
        let x = s(&c, Some(7));
        let r = x.pow_rational(&qr(p, d)).unwrap().pow_i(d).unwrap();
        prop_assert!(r.agrees_with(&x.pow_rational(&q(p)).unwrap()));
    }

    #[test]
    fn reversion_round_trip(a in arb_series(7), c1 in prop::sample::select(vec![-3i64, -1, 1, 2])) {
        let mut c = a.clone();
        c[0] = 0;
        c[1] = c1;
        let x = s(&c, Some(7));
        let r = x.revert().unwrap();
        prop_assert!(x.substitute(&r).unwrap().agrees_with(&Series::gen("q")));
        prop_assert!(r.substitute(&x).unwrap().agrees_with(&Series::gen("q")));
    }

    #[test]
    fn exp_log_round_trip(a in arb_series(7)) {
        let mut c = a.clone();
        c[0] = 0;
        let b = s(&c, Some(7));
        prop_assert!(b.exp().unwrap().log().unwrap().agrees_with(&b));
        c[0] = 1;
        let u = s(&c, Some(7));
        prop_assert!(u.log().unwrap().exp().unwrap().agrees_with(&u));
    }

    #[test]
    fn truncation_is_stable(a in arb_series(10), lo in 3i64..6) {
        // the same pipeline at a higher order, re-truncated, reproduces the low-order result
        let mut c = a.clone();
        c[0] = 1;
        let run = |n: i64| {
            let f = s(&c, Some(n));
            f.pow_rational(&qr(-3, 2)).unwrap().mul(&f.log().unwrap().exp().unwrap()).unwrap()
        };
        prop_assert_eq!(run(10).truncate_i(lo), run(lo));
    }

    #[test]
    fn json_round_trip(a in arb_series(6), den in 1i64..=4, shift in -3i64..=3) {
        let x = s(&a, Some(6)).dilate(&qr(1, den)).unwrap().shift(&qr(shift, den));
        prop_assert_eq!(Series::<Q>::from_json(&x.to_json()).unwrap(), x);
    }
}
