use crate::report::Status;
use crate::verify::{self, render, Request, VerifyError};
use serde_json::{json, Value};
use std::path::Path;
use std::time::Instant;
use vinv::domain::{Coeff, PoleFn};
use vinv::hilb::{euler_number, Specialization, ToricSurface};
use vinv::mochizuki::{load_or_extract, Insertion};
use vinv::qforms::euler_product;
use vinv::rational::{q, qr, Q};
use vinv::surfaces::{catalog_get, CATALOG};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    Fast,
    All,
}

pub struct Entry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    secs: f64,
}

pub struct Summary {
    pub entries: Vec<Entry>,
}

type Outcome = Result<(), String>;

fn req(conjecture: &str, surface: Option<&str>, c1: Option<&str>, bound: i64) -> Request {
    Request {
        conjecture: conjecture.into(),
        surface: surface.map(Into::into),
        c1: c1.map(Into::into),
        max_vd: None,
        max_order: Some(bound),
        rank: None,
        r: None,
    }
}

fn via_verify(r: &Request) -> Outcome {
    let rep = verify::run(r).map_err(|e| match e {
        VerifyError::Usage(m) | VerifyError::Compute(m) => m,
    })?;
    match rep.status {
        Status::Pass => Ok(()),
        Status::Fail(row) => Err(format!("{} at {}: expected {} computed {}", rep.target, row.order, row.expected, row.computed)),
        Status::Skipped(why) => Err(format!("{}: {why}", rep.target)),
    }
}

fn all_of(rs: impl IntoIterator<Item = Request>) -> Outcome {
    rs.into_iter().try_for_each(|r| via_verify(&r))
}

fn hilb_euler(n: usize) -> Outcome {
    let sp = Specialization::primary();
    for s in [ToricSurface::p2(), ToricSurface::p1xp1()] {
        let want = euler_product("q", n as i64 + 1, &q(1), 1, -s.e);
        for k in 0..=n {
            let got = euler_number(&s, k, &sp).map_err(|e| e.to_string())?;
            let w = want.coeff_i(k as i64).map_err(|e| e.to_string())?;
            if got != w {
                return Err(format!("{} n={k}: expected {} computed {}", s.name, render(&w), render(&got)));
            }
        }
    }
    Ok(())
}

/// Coefficients of `A_7` printed in the literature, as `(q power, [(t power, value)])`.
fn a7_printed() -> Vec<(i64, Vec<(i64, Q)>)> {
    vec![
        (1, vec![(1, q(24)), (-1, q(-6))]),
        (2, vec![(2, q(360)), (0, q(-180)), (-2, q(30)), (-4, qr(-9, 4)), (-6, qr(3, 32))]),
        (
            3,
            vec![(3, q(4160)), (1, q(-3200)), (-1, q(1020)), (-3, q(-210)), (-5, qr(135, 4)), (-7, qr(-55, 16)), (-9, qr(5, 32))],
        ),
        (
            4,
            vec![
                (4, q(40560)),
                (2, q(-43380)),
                (0, q(20280)),
                (-2, q(-6480)),
                (-4, qr(7065, 4)),
                (-6, qr(-6255, 16)),
                (-8, qr(975, 16)),
                (-10, qr(-735, 128)),
                (-12, qr(495, 2048)),
            ],
        ),
    ]
}

fn a7(cache: &Path) -> Outcome {
    let set = load_or_extract(cache, &Insertion::Euler, 4).map_err(|e| e.to_string())?;
    for (k, terms) in a7_printed() {
        // the printed form is in t and t q
        let f = set.a[6].coeff_i(k).map_err(|e| e.to_string())?.mul(&PoleFn::unit(q(1), k, 0, 0));
        let (num, e) = f.cleared();
        if e[1] != 0 || e[2] != 0 {
            return Err(format!("A7 q^{k} is not a Laurent polynomial in t"));
        }
        let got: Vec<(i64, Q)> =
            num.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as i64 - e[0], c.clone())).collect();
        let mut want = terms;
        want.sort();
        if got != want {
            return Err(format!("A7 q^{k}: printed {want:?} computed {got:?}"));
        }
    }
    Ok(())
}

fn checks(filter: Filter, max_order: Option<i64>, cache: &Path) -> Vec<(&'static str, Box<dyn Fn() -> Outcome + '_>)> {
    let cap = move |n: i64| max_order.map_or(n, |m| m.min(n));
    let mut v: Vec<(&'static str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("hilb-euler", Box::new(move || hilb_euler(cap(3) as usize))),
        ("k3-euler-rk2", Box::new(move || via_verify(&req("euler-rk2", Some("K3"), Some("0"), cap(10))))),
        ("k3-euler-rk3", Box::new(move || via_verify(&req("euler-rk3", Some("K3"), Some("0"), cap(8))))),
        (
            "chiy-specialization",
            Box::new(move || {
                let mut rs = Vec::new();
                for name in CATALOG {
                    let s = catalog_get(name).map_err(|e| e.to_string())?;
                    for c in &s.c1_choices {
                        rs.push(req("chiy-rk2", Some(name), Some(&c.name), cap(4)));
                    }
                }
                all_of(rs)
            }),
        ),
        ("ellgen-q0", Box::new(move || via_verify(&req("ellgen-rk2", Some("quintic"), Some("K"), cap(2))))),
        ("jacobi-anchor", Box::new(move || via_verify(&req("jacobi-anchor", None, None, cap(6))))),
        (
            "segre-verlinde-rk1",
            Box::new(move || {
                all_of((-1..=2).map(|r| Request { r: Some(r), ..req("segre-verlinde", None, None, cap(6)) }))
            }),
        ),
        (
            "examples-and-serre",
            Box::new(move || all_of(["example-1", "example-2", "example-3", "serre-duality"].map(|k| req(k, None, None, cap(6))))),
        ),
        ("klyachko", Box::new(move || via_verify(&req("klyachko", None, None, cap(8))))),
        ("dmvv", Box::new(move || via_verify(&req("dmvv", None, None, cap(3))))),
        ("gn", Box::new(move || via_verify(&req("gn", None, None, cap(3))))),
        ("zinst-consistency", Box::new(move || via_verify(&req("zinst-rk2", Some("quintic"), Some("K"), cap(8))))),
    ];
    if filter == Filter::All {
        v.push(("lehn", Box::new(move || via_verify(&req("lehn", None, None, cap(3))))));
        v.push(("egl", Box::new(move || via_verify(&req("egl", None, None, cap(2))))));
        v.push(("a7-printed", Box::new(move || a7(cache))));
        v.push(("quintic-euler-rk2", Box::new(move || via_verify(&req("euler-rk2", Some("quintic"), Some("K"), cap(4))))));
    }
    v
}

pub fn run(filter: Filter, max_order: Option<i64>, cache: &Path) -> Summary {
    let entries = checks(filter, max_order, cache)
        .into_iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let out = f();
            Entry {
                name: name.into(),
                passed: out.is_ok(),
                detail: out.err().unwrap_or_default(),
                secs: t.elapsed().as_secs_f64(),
            }
        })
        .collect();
    Summary { entries }
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    /// Timings go here only, so the JSON stays reproducible.
    pub fn table(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let mark = if e.passed { "PASS" } else { "FAIL" };
            s += &format!("{mark}  {:<22} {:>8.2}s  {}\n", e.name, e.secs, e.detail);
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "checks": self.entries.iter().map(|e| json!({
                "name": e.name,
                "status": if e.passed { "pass" } else { "fail" },
                "detail": e.detail,
            })).collect::<Vec<_>>(),
        })
    }
}
