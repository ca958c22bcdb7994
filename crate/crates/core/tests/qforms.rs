use std::collections::BTreeMap;
use vinv::conjectures::hurwitz_by_reduction;
use vinv::domain::{Coeff, LaurentU};
use vinv::qforms::*;
use vinv::rational::{q, qr, Q};
use vinv::series::Series;

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&c| q(c)).collect()
}

fn dense(s: &Series<Q>, n: i64) -> Vec<Q> {
    (0..n).map(|k| s.coeff_i(k).unwrap()).collect()
}

fn u(terms: &[(i64, i64)]) -> LaurentU {
    LaurentU::from_terms(terms.iter().map(|&(k, c)| (k, q(c))))
}

fn compare_u(a: &Series<LaurentU>, b: &Series<LaurentU>, upto: &Q) {
    let mut exps: Vec<Q> = a.terms().map(|(e, _)| e).chain(b.terms().map(|(e, _)| e)).filter(|e| e < upto).collect();
    exps.sort();
    exps.dedup();
    for e in exps {
        assert_eq!(a.coeff(&e).unwrap(), b.coeff(&e).unwrap(), "at exponent {e}");
    }
}

#[test]
fn eta_family() {
    let e = eta_bar(16);
    let mut want = vec![q(0); 16];
    for (k, c) in [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)] {
        want[k] = q(c);
    }
    assert_eq!(dense(&e, 16), want);
    // the product expanded factor by factor as polynomials
    let mut p = vec![q(0); 6];
    p[0] = q(1);
    for n in 1..6 {
        for _ in 0..24 {
            for k in (n..6).rev() {
                let t = p[k - n].clone();
                p[k] -= t;
            }
        }
    }
    let d = delta(6);
    for k in 1..6 {
        assert_eq!(d.coeff_i(k as i64).unwrap(), p[k - 1]);
    }
    assert_eq!(dense(&d, 5), qs(&[0, 1, -24, 252, -1472]));
    let e24 = eta(8).pow_i(24).unwrap();
    assert!(e24.div(&delta(8)).unwrap().agrees_with(&Series::one("q")));
}

#[test]
fn one_variable_thetas() {
    assert_eq!(dense(&theta(ThetaKind::Theta3, 10), 10), qs(&[1, 2, 0, 0, 2, 0, 0, 0, 0, 2]));
    let t2 = theta(ThetaKind::Theta2, 7);
    assert_eq!(t2.exp_den(), 4);
    let want = Series::from_terms("x", [(qr(1, 4), q(2)), (qr(9, 4), q(2)), (qr(25, 4), q(2))], Some(q(7)));
    assert_eq!(t2, want);
}

#[test]
fn refined_thetas() {
    let t = theta3_sqrt_y(5);
    assert_eq!(t.coeff_i(0).unwrap(), LaurentU::one());
    assert_eq!(t.coeff_i(1).unwrap(), u(&[(1, 1), (-1, 1)]));
    assert_eq!(t.coeff_i(4).unwrap(), u(&[(2, 1), (-2, 1)]));
    let r = theta_refined(ThetaKind::Theta3, 5);
    assert_eq!(r.coeff_i(1).unwrap(), u(&[(2, 1), (-2, 1)]));
    for kind in [ThetaKind::Theta2, ThetaKind::Theta3] {
        let spec = theta_refined(kind, 30).map_coeffs(|c| c.at_one().unwrap());
        assert_eq!(spec, theta(kind, 30));
    }
}

#[test]
fn jacobi_triple_product() {
    let n = 40;
    let a = euler_product("x", n, &q(1), 2, 1);
    let b = euler_product("x", n, &q(-1), 1, 2).div(&euler_product("x", n, &q(-1), 2, 2)).unwrap();
    assert!(a.mul(&b).unwrap().agrees_with(&theta(ThetaKind::Theta3, n)));
}

/// Independent enumeration: exponent (in units of 1/3) and weight per lattice point.
fn lattice_oracle(f: impl Fn(i64, i64) -> (i64, i64, i64), order: i64) -> BTreeMap<(i64, i64), i64> {
    let mut out = BTreeMap::new();
    let b = 3 * order + 6;
    for m in -b..=b {
        for n in -b..=b {
            let (e3, w, y) = f(m, n);
            if e3 < 3 * order {
                *out.entry((e3, y)).or_insert(0) += w;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Real part of `eps^k` doubled.
fn two_re_eps(k: i64) -> i64 {
    if k.rem_euclid(3) == 0 {
        2
    } else {
        -1
    }
}

fn check_against_oracle(lat: Lattice, coset: (i64, i64), oracle: impl Fn(i64, i64) -> (i64, i64, i64), halve: bool) {
    let order = 12;
    let want = lattice_oracle(&oracle, order);
    let got = lattice_theta(LatticeThetaSpec::new(lat, coset, true).unwrap(), order);
    let mut seen = BTreeMap::new();
    for (e, c) in got.terms() {
        for (k, v) in c.terms().expect("Laurent") {
            assert_eq!(k % 2, 0, "refined A2 thetas carry integer y powers");
            let e3 = e.clone() * q(3);
            assert!(e3.is_integer());
            let ez: i64 = e3.to_integer().try_into().unwrap();
            let w = if halve { v * q(2) } else { v };
            seen.insert((ez, k / 2), w.to_integer().try_into().unwrap());
        }
    }
    let want: BTreeMap<(i64, i64), i64> = want.into_iter().collect();
    assert_eq!(seen, want);
}

#[test]
fn lattice_thetas_match_enumeration() {
    check_against_oracle(Lattice::A2, (0, 0), |m, n| (6 * (m * m - m * n + n * n), 1, m + n), false);
    check_against_oracle(Lattice::A2, (1, 0), |m, n| (6 * (m * m - m * n + n * n + m - n) + 2, 1, m + n), false);
    check_against_oracle(Lattice::A2Dual, (0, 0), |m, n| (6 * (m * m + m * n + n * n), 1, m + n), false);
    // doubled weights keep the oracle in integers
    check_against_oracle(Lattice::A2Dual, (0, 1), |m, n| (6 * (m * m + m * n + n * n), two_re_eps(m - n), m + n), true);
}

#[test]
fn lattice_theta_examples() {
    let at1 = |lat, coset, n| lattice_theta(LatticeThetaSpec::new(lat, coset, false).unwrap(), n).map_coeffs(|c| c.at_one().unwrap());
    assert_eq!(dense(&at1(Lattice::A2Dual, (0, 0), 9), 9), qs(&[1, 0, 6, 0, 0, 0, 6, 0, 6]));
    assert_eq!(dense(&at1(Lattice::A2Dual, (0, 1), 9), 9), qs(&[1, 0, -3, 0, 0, 0, 6, 0, -3]));
    // norm-one vectors of A2 sit at x^2
    assert_eq!(dense(&at1(Lattice::A2, (0, 0), 9), 9), qs(&[1, 0, 6, 0, 0, 0, 6, 0, 6]));
    let t10 = at1(Lattice::A2, (1, 0), 4);
    assert_eq!(t10.valuation().unwrap(), qr(2, 3));
    assert_eq!(t10.coeff(&qr(2, 3)).unwrap(), q(3));
    assert!(LatticeThetaSpec::new(Lattice::A2, (0, 1), false).is_none());
    assert!(LatticeThetaSpec::new(Lattice::A2Dual, (1, 0), true).is_none());
    for (lat, coset) in [(Lattice::A2, (0, 0)), (Lattice::A2, (1, 0)), (Lattice::A2Dual, (0, 0)), (Lattice::A2Dual, (0, 1))] {
        let r = lattice_theta(LatticeThetaSpec::new(lat, coset, true).unwrap(), 20).map_coeffs(|c| c.at_one().unwrap());
        assert_eq!(r, at1(lat, coset, 20));
    }
}

#[test]
fn hurwitz_values() {
    assert_eq!(hurwitz(3).unwrap(), qr(1, 3));
    assert_eq!(hurwitz(4).unwrap(), qr(1, 2));
    assert_eq!(hurwitz(7).unwrap(), q(1));
    assert_eq!(hurwitz(11).unwrap(), q(1));
    assert_eq!(hurwitz(12).unwrap(), qr(4, 3));
    assert_eq!(hurwitz(23).unwrap(), q(3));
    assert!(hurwitz(5).is_err());
    assert!(hurwitz(0).is_err());
    for d in (1..=200).filter(|d| d % 4 == 0 || d % 4 == 3) {
        assert_eq!(hurwitz(d).unwrap(), hurwitz_by_reduction(d), "H({d})");
    }
}

#[test]
fn kronecker_hurwitz_relation() {
    // sum_r H(4n - r^2) = 2 sigma(n) - sum_{d | n} min(d, n/d), n not a square
    for n in (1..60i64).filter(|n| ((*n as f64).sqrt() as i64).pow(2) != *n) {
        let mut lhs = q(0);
        let mut r = 0i64;
        while r * r < 4 * n {
            let h = hurwitz(4 * n - r * r).unwrap();
            lhs += if r == 0 { h } else { h * q(2) };
            r += 1;
        }
        let divs: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
        let rhs = 2 * divs.iter().sum::<i64>() - divs.iter().map(|d| (*d).min(n / d)).sum::<i64>();
        assert_eq!(lhs, q(rhs), "n = {n}");
    }
}

#[test]
fn jacobi_anchors() {
    let phi01 = jacobi(JacobiName::Phi01, 6).unwrap();
    assert_eq!(phi01.series.coeff_i(0).unwrap(), u(&[(-2, 1), (0, 10), (2, 1)]));
    let half = jacobi(JacobiName::Phi0Half(1), 6).unwrap();
    assert_eq!(half.series.coeff_i(0).unwrap(), LaurentU::from_terms([(1, qr(-1, 2)), (-1, qr(-1, 2))]));
    assert!(jacobi(JacobiName::Phi0Half(2), 4).is_err());
    for name in [JacobiName::PhiM21, JacobiName::Phi01, JacobiName::Phi0Half(1), JacobiName::Phi0Half(3)] {
        let s = jacobi(name, 8).unwrap().series;
        for k in 0..8 {
            assert!(s.coeff_i(k).unwrap().is_laurent(), "{name:?} at q^{k}");
        }
    }
    // phi01(q, 1) is the constant 12
    let at1 = phi01.series.map_coeffs(|c| c.at_one().unwrap());
    assert_eq!(dense(&at1, 6), qs(&[12, 0, 0, 0, 0, 0]));
}

#[test]
fn phi_m21_doubling_identity() {
    let n = 12;
    let phi = jacobi(JacobiName::PhiM21, n).unwrap().series;
    let lhs_full = subst_qy(&phi, &q(2), 2).unwrap().mul(&delta(n).dilate(&q(2)).unwrap().map_coeffs(LaurentU::from_q)).unwrap();
    let den = u(&[(1, 1), (-1, -1)]);
    let inv = LaurentU::ratio(&LaurentU::one(), &den.mul(&den)).unwrap();
    let lhs = lhs_full.mul_c(&inv);
    let pre = u(&[(1, 1), (-1, 1)]);
    let rhs = euler_product("q", 2 * n, &LaurentU::y_pow(q(1), 2), 2, 2)
        .mul(&euler_product("q", 2 * n, &LaurentU::y_pow(q(1), -2), 2, 2))
        .unwrap()
        .mul(&euler_product("q", 2 * n, &q(1), 2, 20).map_coeffs(LaurentU::from_q))
        .unwrap()
        .mul_c(&pre.mul(&pre))
        .shift(&q(2));
    compare_u(&lhs, &rhs, &q(2 * n));
}

#[test]
fn lift_examples() {
    let c = 5;
    let f = Series::constant("q", LaurentU::from_q(&q(c)), None);
    let l = borcherds_lift(&f, 1, 8, 4).unwrap();
    let e = euler_product("p", 8, &q(1), 1, c);
    for k in 0..8 {
        let inner = l.coeff_i(k).unwrap();
        assert_eq!(inner.coeff_i(0).unwrap(), LaurentU::from_q(&e.coeff_i(k).unwrap()));
        for m in 1..4 {
            assert_eq!(inner.coeff_i(m).unwrap(), LaurentU::zero());
        }
    }
    let phi = jacobi(JacobiName::Phi01, 12).unwrap().series;
    let inv = borcherds_lift(&phi, 1, 3, 5).unwrap().invert().unwrap();
    compare_u(&inv.coeff_i(1).unwrap(), &phi, &q(5));
}

#[test]
fn chi10_structure() {
    let chi = igusa_chi10(5, 4).unwrap();
    assert_eq!(chi.valuation().unwrap(), q(1));
    let dphi = delta(4).map_coeffs(LaurentU::from_q).mul(&jacobi(JacobiName::PhiM21, 4).unwrap().series).unwrap();
    compare_u(&chi.coeff_i(1).unwrap(), &dphi, &q(4));
    // chi10 is symmetric under p <-> q
    for (a, b) in [(1, 2), (1, 3), (2, 3)] {
        assert_eq!(chi.coeff_i(a).unwrap().coeff_i(b).unwrap(), chi.coeff_i(b).unwrap().coeff_i(a).unwrap(), "p^{a} q^{b}");
    }
    // defining identity: chi10 / (p Delta phi) is the lift of 2 phi01
    let lift = borcherds_lift(&jacobi(JacobiName::Phi01, 13).unwrap().series.scale(&q(2)), 1, 4, 4).unwrap();
    let ratio = chi.shift(&q(-1)).map_coeffs(|s| s.div(&dphi).unwrap());
    for k in 0..4 {
        compare_u(&ratio.coeff_i(k).unwrap(), &lift.coeff_i(k).unwrap(), &q(3));
    }
}
