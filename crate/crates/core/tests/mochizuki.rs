use std::collections::BTreeMap;
use vinv::domain::{Coeff, PoleFn, RatFn};
use vinv::hilb::{
    integrate, tangent_at, taut_at, DivisorCombo, EquivKClass, EquivWeight, FixedPoint, Specialization, ToricSurface, MU,
};
use vinv::mochizuki::*;
use vinv::rational::{q, qr, Q};
use vinv::series::Series;
use vinv::surfaces::catalog_get;

fn laurent(f: &PoleFn) -> BTreeMap<i64, Q> {
    let (n, d) = f.cleared();
    assert_eq!((d[1], d[2]), (0, 0), "not a Laurent polynomial: {f:?}");
    n.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as i64 - d[0], c.clone())).collect()
}

fn tq_coeff(s: &Series<PoleFn>, k: i64) -> BTreeMap<i64, Q> {
    laurent(&s.coeff_i(k).unwrap().mul(&PoleFn::unit(q(1), k, 0, 0)))
}

fn expect(terms: &[(i64, Q)]) -> BTreeMap<i64, Q> {
    terms.iter().cloned().collect()
}

fn eval_at(f: &PoleFn, t: &Q) -> Q {
    f.eval(t).unwrap()
}

#[test]
fn leading_term_p2() {
    let v = Triple::reference()[0].chern_vector();
    let c = leading_term(&v);
    // -2t^2 / (1 - 4t^2)
    let want = PoleFn::unit(q(-2), 2, -1, -1);
    assert_eq!(c, want);
}

#[test]
fn leading_term_t_exponent() {
    for t in Triple::reference() {
        let v = t.chern_vector();
        let [a11, _, a22, a1k, a2k, _, chi] = v.0;
        let chi_c = |sq: i64, k: i64| chi + (sq - k) / 2;
        let chi2 = chi_c(a22, a2k);
        let n = leading_term(&v);
        let (_, d) = n.cleared();
        let num_low = n.cleared().0.low_degree().unwrap() as i64;
        // t^E (2t)^-chi(a2) (2t)^chi(a2-a1) (2t)^chi(a1-a2)
        let (sq, k) = (a11 - 2 * v.0[1] + a22, a2k - a1k);
        let total = -1 + 2 * chi + (a11 - a1k) / 2 + (a22 - a2k) / 2 - chi2 + chi_c(sq, k) + chi_c(sq, -k);
        assert_eq!(num_low - d[0], total);
    }
}

#[test]
fn leading_term_swap() {
    // C(a2, a1, -t) = (-1)^(E - chi(a1)) (2t)^(chi(a2) - chi(a1)) C(a1, a2, t)
    let vs = [[1, 0, 0, -3, 0, 9, 1], [1, 1, 1, -3, -3, 9, 1], [0, 0, 0, -2, 0, 8, 1], [4, -2, 1, -6, 3, 9, 1], [0, 0, 0, 0, 2, 0, 2]];
    for w in vs {
        let [a11, a12, a22, a1k, a2k, k2, chi] = w;
        let sw = ChernVector([a22, a12, a11, a2k, a1k, k2, chi]);
        let e = -1 + 2 * chi + (a11 - a1k) / 2 + (a22 - a2k) / 2;
        let chi1 = chi + (a11 - a1k) / 2;
        let chi2 = chi + (a22 - a2k) / 2;
        for t in [qr(1, 3), qr(-2, 7), q(5)] {
            let lhs = eval_at(&leading_term(&sw), &-t.clone());
            let sign = if (e - chi1).rem_euclid(2) == 0 { q(1) } else { q(-1) };
            let rhs = sign * vinv::rational::pow_qi(&(q(2) * &t), chi2 - chi1) * eval_at(&leading_term(&ChernVector(w)), &t);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn q0_is_one() {
    for t in Triple::reference() {
        let z = z_series(&t, &Insertion::Euler, 2).unwrap();
        assert_eq!(z.coeff_i(0).unwrap(), PoleFn::one());
    }
}

/// `sum_(i,j) c_ij mu^m` truncation helpers for the hand assembly below.
fn mu_lin(c0: Q, c1: Q) -> Series<Q> {
    Series::from_coeffs("mu", vec![c0, c1], None)
}

#[test]
fn q1_hand_assembly_p2() {
    // single point in one chart: only (n1, n2) = (0, 1) survives since e(O_Z) = 0 for a1 = 0
    let charts = [((1, 0), (0, 1)), ((-1, 1), (-1, 0)), ((0, -1), (1, -1))];
    let (s1, s2) = (qr(97, 61), qr(-55, 129));
    let z = z_series(&Triple::reference()[0], &Insertion::Euler, 1).unwrap();
    let z1 = z.coeff_i(1).unwrap();
    for t in [qr(1, 5), qr(-3, 7), q(2)] {
        let mut acc = Series::zero("mu", Some(q(1)));
        for ((a, b), (c, d)) in charts {
            let w1 = &s1 * q(a) + &s2 * q(b);
            let w2 = &s1 * q(c) + &s2 * q(d);
            let g = &w1 + &w2;
            let o = Some(4);
            let tt = q(2) * &t;
            // t^-1 (1-w1)(1-w2)/(w1 w2) (1+2t)/(2t) (1-w1-w2-2t)/(-w1-w2-2t) 2t
            let f = mu_lin(q(1), -w1.clone()).mul(&mu_lin(q(1), -w2.clone())).unwrap();
            let f = f.shift(&q(-2)).scale(&(w1.clone() * &w2).recip());
            let r = mu_lin(q(1) - &tt, -g.clone()).truncate_i(o.unwrap());
            let den = mu_lin(-tt.clone(), -g.clone()).truncate_i(o.unwrap());
            let term = f.mul(&r.div(&den).unwrap()).unwrap().scale(&((q(1) + &tt) / &tt * &tt / &t));
            acc = acc.add(&term.truncate_i(1)).unwrap();
        }
        for k in [-2, -1] {
            assert!(acc.coeff_i(k).unwrap().is_zero());
        }
        assert_eq!(acc.coeff_i(0).unwrap(), eval_at(&z1, &t));
    }
}

/// `D(W, Z; chi)` from characters: `chi (-Z - W*/(s1 s2) + W* Z (1-s1)(1-s2)/(s1 s2))`.
fn delta_chars(w: &[(i64, i64)], z: &[(i64, i64)], chi: EquivWeight, ch: &vinv::hilb::Chart) -> EquivKClass {
    let mut k = EquivKClass::new();
    for &(i, j) in z {
        k.push(chi + ch.monomial(i, j), -1);
    }
    for &(i, j) in w {
        k.push(chi + ch.monomial(-i - 1, -j - 1), -1);
    }
    for &(a, b) in w {
        for &(c, d) in z {
            for (di, dj, m) in [(-1, -1, 1), (0, -1, -1), (-1, 0, -1), (0, 0, 1)] {
                k.push(chi + ch.monomial(c - a + di, d - b + dj), m);
            }
        }
    }
    k
}

/// The integrand assembled directly in equivariant cohomology and passed to `integrate`.
fn oracle_z(s: &ToricSurface, a1: &DivisorCombo, a2: &DivisorCombo, n: usize, sp: &Specialization, slack: i64) -> RatFn {
    let mut total = RatFn::zero();
    for n1 in 0..=n {
        let n2 = n - n1;
        let f = |fp: &FixedPoint, sp: &Specialization, order: i64| {
            let order = order + slack;
            let taut1 = taut_at(s, a1, &fp.parts[0]);
            if taut1.zero_weights() > 0 {
                return Ok(Series::zero(MU, Some(q(order))));
            }
            let taut2 = taut_at(s, a2, &fp.parts[1]).twist(EquivWeight::new(0, 0, 2));
            let mut nk = EquivKClass::new();
            for c in 0..s.charts.len() {
                let ch = &s.charts[c];
                let (c1, c2) = (s.character(a1, c), s.character(a2, c));
                let (l1, l2) = (fp.parts[0][c].character(), fp.parts[1][c].character());
                nk.add_class(&delta_chars(&l1, &l2, c2 - c1, ch).twist(EquivWeight::new(0, 0, 2)));
                nk.add_class(&delta_chars(&l2, &l1, c1 - c2, ch).twist(EquivWeight::new(0, 0, -2)));
            }
            let tan = tangent_at(s, fp).dual();
            let r = tan.chern_mu(sp, order)?;
            let r = r.mul(&nk.euler_mu(sp, order, fp)?)?.div(&nk.chern_mu(sp, order)?)?;
            let r = r.mul(&taut1.euler_mu(sp, order, fp)?)?.mul(&taut2.euler_mu(sp, order, fp)?)?;
            let tn = RatFn::monomial(q(1), -(n as i64));
            Ok(r.mul_c(&tn).truncate_i(order))
        };
        total = total.add(&integrate(s, (n1, n2), f, sp).unwrap());
    }
    total
}

fn pole_to_rat(f: &PoleFn) -> RatFn {
    f.to_ratfn()
}

#[test]
fn oracle_matches_fast_path() {
    for (idx, n_max) in [(1usize, 2usize), (3, 2), (5, 2), (6, 1)] {
        let t = &Triple::reference()[idx];
        let z = z_series(t, &Insertion::Euler, n_max).unwrap();
        for n in 1..=n_max {
            let o = oracle_z(&t.surface, &t.a1, &t.a2, n, &Specialization::primary(), 0);
            assert_eq!(o, pole_to_rat(&z.coeff_i(n as i64).unwrap()), "triple {idx}, q^{n}");
        }
    }
}

#[test]
fn oracle_order_escalation() {
    let t = &Triple::reference()[3];
    let a = oracle_z(&t.surface, &t.a1, &t.a2, 2, &Specialization::secondary(), 0);
    let b = oracle_z(&t.surface, &t.a1, &t.a2, 2, &Specialization::secondary(), 3);
    assert_eq!(a, b);
}

#[test]
fn second_draw_agrees() {
    for t in Triple::reference().iter().step_by(3) {
        let a = z_series_with(t, &Insertion::Euler, 4, SIGMA_PRIMARY).unwrap();
        let b = z_series_with(t, &Insertion::Euler, 4, SIGMA_SECONDARY).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn multiplicative_on_disjoint_union() {
    let p2 = ToricSurface::p2();
    let u = ToricSurface::disjoint_union(&p2, &p2, &[("H", Some("H"), Some("H"))]).unwrap();
    let tu = Triple::new(u, &[("H", 1)], &[]).unwrap();
    let t = &Triple::reference()[1];
    let order = 3;
    let zu = z_series(&tu, &Insertion::Euler, order).unwrap();
    let z = z_series(t, &Insertion::Euler, order).unwrap();
    assert_eq!(zu, z.mul(&z).unwrap());
}

#[test]
fn reconstruction_of_fresh_triple() {
    let order = 5;
    let set = extract_universal(&Insertion::Euler, order).unwrap();
    let pp = ToricSurface::p1xp1();
    let fresh = [
        Triple::new(pp.clone(), &[("H1", 1), ("H2", 1)], &[]).unwrap(),
        Triple::new(pp.clone(), &[("H1", 1)], &[("H2", -1)]).unwrap(),
        Triple::new(ToricSurface::p2(), &[("H", 2)], &[("H", -1)]).unwrap(),
    ];
    for t in fresh {
        let direct = z_series(&t, &Insertion::Euler, order).unwrap();
        let univ = set.product(&t.chern_vector()).unwrap();
        assert_eq!(direct, univ);
    }
}

#[test]
fn universal_constant_terms() {
    let set = extract_universal(&Insertion::Euler, 3).unwrap();
    assert_eq!(set.a.len(), 7);
    for a in &set.a {
        assert_eq!(a.coeff_i(0).unwrap(), PoleFn::one());
    }
}

#[test]
fn a7_printed_coefficients() {
    let set = extract_universal(&Insertion::Euler, 4).unwrap();
    let a7 = &set.a[6];
    assert_eq!(tq_coeff(a7, 1), expect(&[(1, q(24)), (-1, q(-6))]));
    assert_eq!(
        tq_coeff(a7, 2),
        expect(&[(2, q(360)), (0, q(-180)), (-2, q(30)), (-4, qr(-9, 4)), (-6, qr(3, 32))])
    );
    assert_eq!(
        tq_coeff(a7, 3),
        expect(&[
            (3, q(4160)),
            (1, q(-3200)),
            (-1, q(1020)),
            (-3, q(-210)),
            (-5, qr(135, 4)),
            (-7, qr(-55, 16)),
            (-9, qr(5, 32)),
        ])
    );
    assert_eq!(
        tq_coeff(a7, 4),
        expect(&[
            (4, q(40560)),
            (2, q(-43380)),
            (0, q(20280)),
            (-2, q(-6480)),
            (-4, qr(7065, 4)),
            (-6, qr(-6255, 16)),
            (-8, qr(975, 16)),
            (-10, qr(-735, 128)),
            (-12, qr(495, 2048)),
        ])
    );
}

#[test]
fn unsupported_insertion() {
    let t = &Triple::reference()[0];
    assert!(matches!(z_series(t, &Insertion::ChiY, 1), Err(MochizukiError::Unsupported(_))));
    assert_eq!(Insertion::parse("segre-2"), Some(Insertion::Segre(-2)));
    for i in [Insertion::Euler, Insertion::Cobordism(3), Insertion::Verlinde(2), Insertion::VerlindeChiY] {
        assert_eq!(Insertion::parse(&i.key()), Some(i));
    }
}

#[test]
fn cache_round_trip() {
    let set = extract_universal(&Insertion::Euler, 2).unwrap();
    let dir = std::env::temp_dir().join(format!("vinv-cache-test-{}", std::process::id()));
    let p = write_cache(&dir, &set).unwrap();
    let bytes1 = std::fs::read(&p).unwrap();
    assert_eq!(load_or_extract(&dir, &Insertion::Euler, 2).unwrap(), set);
    write_cache(&dir, &set).unwrap();
    assert_eq!(std::fs::read(&p).unwrap(), bytes1);
    // a larger cached order serves smaller requests
    let small = load_or_extract(&dir, &Insertion::Euler, 1).unwrap();
    assert_eq!(small.order, 1);
    assert_eq!(small.a[6].coeff_i(1).unwrap(), set.a[6].coeff_i(1).unwrap());
    let mut v = set.to_json();
    v["checksum"] = serde_json::json!("00");
    assert!(UniversalSeriesSet::from_json(&v).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn evaluate_k3_and_vanishing() {
    let set = extract_universal(&Insertion::Euler, 2).unwrap();
    let k3 = catalog_get("K3").unwrap();
    let v = evaluate_rank2(&k3, "0", &set, 2, SumRule::Half).unwrap();
    assert_eq!(v.value, q(24));
    assert_eq!(evaluate_rank2(&k3, "0", &set, -4, SumRule::Half).unwrap().value, q(0));
    assert!(matches!(
        evaluate_rank2(&k3, "0", &set, 42, SumRule::Half),
        Err(MochizukiError::InsufficientOrder { .. })
    ));
}

#[test]
fn sum_rules_on_quintic() {
    let set = extract_universal(&Insertion::Euler, 7).unwrap();
    let s = catalog_get("quintic").unwrap();
    // coefficients of x^0, x^4, x^8 of the closed-form rank-2 series for c1 = K
    let closed = [(0, q(8)), (4, q(52720)), (8, q(48754480))];
    for (vd, want) in closed {
        let full = evaluate_rank2(&s, "K", &set, vd, SumRule::Full).unwrap();
        assert_eq!(full.value, want, "vd {vd}");
        assert!(!full.notes.is_empty());
    }
    // the theorem's half-sum keeps only a1 = 0 and is not half of the full sum
    let half: Vec<Q> = [0, 4].iter().map(|&vd| evaluate_rank2(&s, "K", &set, vd, SumRule::Half).unwrap().value).collect();
    assert_eq!(half, vec![q(4), q(26810)]);
    // inadmissible parity
    assert_eq!(evaluate_rank2(&s, "K", &set, 2, SumRule::Full).unwrap().value, q(0));
}

#[test]
fn universal_formula_range() {
    let k3 = catalog_get("K3").unwrap();
    // chi(v) = 4 - c2 with c2 = (vd + 6) / 4
    assert_eq!(sheaf_chi(&k3, "0", 6).unwrap(), q(1));
    assert_eq!(sheaf_chi(&k3, "0", 10).unwrap(), q(0));
    let set = extract_universal(&Insertion::Euler, 4).unwrap();
    let v = evaluate_rank2(&k3, "0", &set, 10, SumRule::Half).unwrap();
    assert!(v.notes.iter().any(|n| n.contains("chi(v) <= 0")));
    assert!(evaluate_rank2(&k3, "0", &set, 6, SumRule::Half).unwrap().notes.is_empty());
    let qn = catalog_get("quintic").unwrap();
    assert_eq!(required_order(&qn, "K", 8, SumRule::Full).unwrap(), 7);
    assert_eq!(required_order(&qn, "0", 8, SumRule::Full).unwrap(), 10);
    assert_eq!(required_order(&k3, "0", 12, SumRule::Half).unwrap(), 4);
}
