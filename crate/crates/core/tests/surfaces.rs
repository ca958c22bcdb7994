use vinv::surfaces::*;

/// `(K^2, e, chi)` of a smooth degree `d` surface in P^3 from adjunction and the Chern
/// class of `T P^3 |_S - N`.
fn hypersurface_p3(d: i64) -> (i64, i64, i64) {
    let k = d - 4;
    // c(T_S) = (1+h)^4 / (1+dh), h^2 = d on S
    let c2 = 6 - 4 * d + d * d;
    let (k2, e) = (k * k * d, c2 * d);
    (k2, e, (k2 + e) / 12)
}

/// Double cover of P^2 branched along a smooth curve of degree `2m`.
fn double_cover_p2(m: i64) -> (i64, i64, i64) {
    // K = pi^*(m - 3) H
    let k2 = 2 * (m - 3) * (m - 3);
    let g = (2 * m - 1) * (2 * m - 2) / 2;
    let e = 2 * 3 - (2 - 2 * g);
    (k2, e, (k2 + e) / 12)
}

#[test]
fn whole_catalog_validates() {
    for name in CATALOG {
        let s = catalog_get(name).unwrap();
        s.validate().unwrap();
        assert_eq!(s.name, name);
        // Noether
        assert_eq!(12 * s.chi_o, s.k2 + s.e, "{name}");
        for a in &s.classes {
            s.chi_of_class(a.a_dot_a, a.a_dot_k).unwrap();
            let d = &s.classes[a.dual];
            assert_eq!(s.classes[d.dual], *a, "{name}: dual is an involution");
        }
        for c in &s.c1_choices {
            s.chi_of_class(c.c1_sq, c.c1_dot_k).unwrap();
        }
    }
    assert!(matches!(catalog_get("sextic"), Err(SurfaceError::Unknown(_))));
}

#[test]
fn general_type_entries_from_adjunction() {
    let q = catalog_get("quintic").unwrap();
    assert_eq!(hypersurface_p3(5), (q.k2, q.e, q.chi_o));
    assert_eq!((q.chi_o, q.k2), (5, 5));
    let o = catalog_get("doubleCoverP2octic").unwrap();
    assert_eq!(double_cover_p2(4), (o.k2, o.e, o.chi_o));
    for s in [q, o] {
        assert!(s.minimal_general_type);
        let sw: Vec<i64> = s.classes.iter().map(|a| a.sw).collect();
        let sign = if s.chi_o % 2 == 0 { 1 } else { -1 };
        assert_eq!(sw, vec![1, sign]);
        assert_eq!((s.classes[1].a_dot_k, s.classes[1].a_dot_a), (s.k2, s.k2));
    }
    // a quartic is K3
    assert_eq!(hypersurface_p3(4), (0, 24, 2));
}

#[test]
fn elliptic_entries() {
    let e3 = catalog_get("E3").unwrap();
    assert_eq!(e3.classes.iter().map(|a| a.sw).collect::<Vec<_>>(), vec![1, -1]);
    let e4 = catalog_get("E4").unwrap();
    assert_eq!(e4.classes.iter().map(|a| a.sw).collect::<Vec<_>>(), vec![1, -2, 1]);
    assert_eq!(e4.classes[1].dual, 1);
    let e5 = catalog_get("E5").unwrap();
    assert_eq!(e5.classes.iter().map(|a| a.sw).collect::<Vec<_>>(), vec![1, -3, 3, -1]);
    for s in [e3, e4, e5] {
        assert_eq!((s.k2, s.e), (0, 12 * s.chi_o));
        assert!(s.classes.iter().all(|a| a.a_dot_a == 0 && a.a_dot_k == 0));
    }
    let k3 = catalog_get("K3").unwrap();
    assert_eq!(k3.classes.len(), 1);
    assert_eq!(k3.classes[0].sw, 1);
    assert!(catalog_get("K3blowup1").unwrap().derived_data);
}

#[test]
fn rank2_terms() {
    let k3 = catalog_get("K3").unwrap();
    let t = k3.sw_pairs_rank2("0").unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!((t[0].a_dot_k, t[0].a_dot_a, t[0].a_dot_c1, t[0].sign), (0, 0, 0, 1));
    let q = catalog_get("quintic").unwrap();
    let t = q.sw_pairs_rank2("K").unwrap();
    assert_eq!(t.iter().map(|x| x.sign).collect::<Vec<_>>(), vec![1, -1]);
    assert_eq!(t.iter().map(|x| x.sw).collect::<Vec<_>>(), vec![1, -1]);
    let t0 = q.sw_pairs_rank2("0").unwrap();
    assert!(t0.iter().all(|x| x.sign == 1));
    assert!(matches!(q.sw_pairs_rank2("H"), Err(SurfaceError::UnknownC1(_, _))));
}

#[test]
fn rank3_pairing() {
    let q = catalog_get("quintic").unwrap();
    let t = q.sw_pairs_rank3("K").unwrap();
    assert_eq!(t.len(), 4);
    let find = |a, b| t.iter().position(|x| x.classes == (a, b)).unwrap();
    assert_eq!(t[find(0, 0)].partner, find(1, 1));
    assert_eq!(t[find(0, 1)].partner, find(1, 0));
    for (i, x) in t.iter().enumerate() {
        assert_eq!(t[x.partner].partner, i);
        assert_eq!((t[x.partner].p, t[x.partner].q), (x.q, x.p));
    }
    assert_eq!((t[find(0, 0)].p, t[find(0, 0)].q), (0, 5));
    assert_eq!((t[find(0, 1)].p, t[find(0, 1)].q), (0, 0));
    // only (0, K) has K + a - b divisible by 3
    assert_eq!(t.iter().filter(|x| x.delta_mod3).map(|x| x.classes).collect::<Vec<_>>(), vec![(0, 1)]);
    for name in CATALOG {
        let s = catalog_get(name).unwrap();
        for c in &s.c1_choices {
            let t = s.sw_pairs_rank3(&c.name).unwrap();
            assert_eq!(t.len(), s.classes.len().pow(2));
            assert!(t.iter().enumerate().all(|(i, x)| t[x.partner].partner == i));
        }
    }
}

#[test]
fn json_round_trip_and_validation() {
    for name in CATALOG {
        let s = catalog_get(name).unwrap();
        assert_eq!(SurfaceDescriptor::from_json(&s.to_json()).unwrap(), s);
    }
    let mut bad = catalog_get("quintic").unwrap();
    bad.classes[1].sw = 1;
    assert!(matches!(SurfaceDescriptor::from_json(&bad.to_json()), Err(SurfaceError::Invalid(_))));
    let mut bad = catalog_get("E4").unwrap();
    bad.pairs[0][1] = 3;
    assert!(bad.validate().is_err());
    let mut bad = catalog_get("quintic").unwrap();
    bad.classes[1].a_dot_a = 4;
    bad.pairs[1][1] = 4;
    assert!(bad.validate().is_err());
    assert!(matches!(SurfaceDescriptor::from_json(&serde_json::json!({"name": 3})), Err(SurfaceError::Parse(_))));
}
