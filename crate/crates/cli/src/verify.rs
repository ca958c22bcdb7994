use crate::report::{Row, Status, VerificationReport};
use serde_json::Value;
use vinv::conjectures::*;
use vinv::domain::Coeff;
use vinv::mochizuki::{evaluate_rank2, load_or_extract, required_order, sheaf_chi, Insertion, SumRule};
use vinv::rational::{q, qr};
use vinv::series::Series;
use vinv::surfaces::{catalog_get, SurfaceDescriptor, CATALOG};

pub struct Request {
    pub conjecture: String,
    pub surface: Option<String>,
    pub c1: Option<String>,
    pub max_vd: Option<i64>,
    pub max_order: Option<i64>,
    pub rank: Option<i64>,
    pub r: Option<i64>,
}

pub enum VerifyError {
    Usage(String),
    Compute(String),
}

type Result<T> = std::result::Result<T, VerifyError>;

fn compute<E: std::fmt::Display>(e: E) -> VerifyError {
    VerifyError::Compute(e.to_string())
}

pub const IDENTITIES: [&str; 11] = [
    "segre-verlinde", "serre-duality", "example-1", "example-2", "example-3", "lehn", "klyachko", "dmvv", "gn", "egl", "jacobi-anchor",
];
pub const PIPELINES: [&str; 6] = ["euler-rk2", "chiy-rk2", "chiy-rk3", "ellgen-rk2", "euler-rk3", "zinst-rk2"];

pub fn render<C: Coeff>(c: &C) -> String {
    match c.to_json() {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

fn coeff_row<C: Coeff>(k: i64, expected: &Series<C>, computed: &Series<C>) -> Result<Row> {
    Ok(Row {
        order: k.to_string(),
        expected: render(&expected.coeff_i(k).map_err(compute)?),
        computed: render(&computed.coeff_i(k).map_err(compute)?),
    })
}

fn surface(req: &Request) -> Result<(SurfaceDescriptor, String)> {
    let name = req.surface.as_deref().ok_or_else(|| VerifyError::Usage(format!("{} needs --surface", req.conjecture)))?;
    let s = catalog_get(name).map_err(|_| VerifyError::Usage(format!("unknown surface {name}; known: {}", CATALOG.join(", "))))?;
    let c1 = req.c1.clone().unwrap_or_else(|| "0".into());
    s.c1(&c1).map_err(|e| VerifyError::Usage(e.to_string()))?;
    Ok((s, c1))
}

fn bound(req: &Request) -> Result<i64> {
    let b = req.max_vd.or(req.max_order).unwrap_or(6);
    if b < 0 {
        return Err(VerifyError::Usage("bound must be non-negative".into()));
    }
    Ok(b)
}

/// `vd` for which the moduli space has the right parity.
fn admissible(s: &SurfaceDescriptor, c1: &str, vd: i64) -> bool {
    let c = s.c1(c1).expect("checked");
    (vd + c.c1_sq + 3 * s.chi_o).rem_euclid(4) == 0
}

fn identity(req: &Request, order: i64) -> Result<VerificationReport> {
    let r = req.r.unwrap_or(1);
    let rho = req.rank.unwrap_or(1);
    let kind = match req.conjecture.as_str() {
        "segre-verlinde" if rho == 1 => IdentityKind::SegreVerlindeRk1(r),
        "segre-verlinde" => IdentityKind::SegreVerlindeGeneral { rho, r },
        "serre-duality" => IdentityKind::SerreDuality { rho: req.rank.unwrap_or(2), r },
        "example-1" => IdentityKind::Example1,
        "example-2" => IdentityKind::Example2,
        "example-3" => IdentityKind::Example3,
        "lehn" => IdentityKind::LehnVsLocalization,
        "klyachko" => IdentityKind::KlyachkoSeries,
        "dmvv" => IdentityKind::DMVVK3,
        "gn" => IdentityKind::GNIdentity,
        "egl" => IdentityKind::EGLConsistency,
        "jacobi-anchor" => IdentityKind::JacobiAnchor,
        _ => unreachable!("dispatched on IDENTITIES"),
    };
    let rep = check_identity(kind, order).map_err(|e| match e {
        ConjError::Unsupported(m) => VerifyError::Usage(m),
        e => compute(e),
    })?;
    let mut out = VerificationReport::new(&kind.name(), ("lhs", "rhs"));
    out.notes.push(format!("{} coefficients compared through order {order}", rep.checked));
    match &rep.first_mismatch {
        Some(m) => {
            let row = Row { order: m.at.clone(), expected: m.lhs.clone(), computed: m.rhs.clone() };
            out.rows.push(row.clone());
            out.status = Status::Fail(row);
        }
        None => {
            let agreed = format!("{} agree", rep.checked);
            out.rows.push(Row { order: order.to_string(), expected: agreed.clone(), computed: agreed });
            out.status = if rep.passed { Status::Pass } else { Status::Skipped("nothing compared".into()) };
        }
    }
    Ok(out)
}

fn euler_rk2_cross(s: &SurfaceDescriptor, c1: &str, max_vd: i64) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("euler-rk2", ("closed formula", "localization and universal series"));
    let order = required_order(s, c1, max_vd, SumRule::Full).map_err(compute)?;
    let set = load_or_extract(&crate::cache_dir(), &Insertion::Euler, order).map_err(compute)?;
    let closed = euler_rk2(s, c1, max_vd).map_err(compute)?;
    rep.strong_mochizuki = true;
    rep.notes.push(format!("universal series order {order}"));
    for vd in (0..=max_vd).filter(|&vd| admissible(s, c1, vd)) {
        if sheaf_chi(s, c1, vd).map_err(compute)? <= q(0) {
            rep.notes.push(format!("vd {vd} skipped: chi(v) <= 0, the universal formula does not apply"));
            continue;
        }
        let v = evaluate_rank2(s, c1, &set, vd, SumRule::Full).map_err(compute)?;
        for n in v.notes {
            if !rep.notes.contains(&n) {
                rep.notes.push(n);
            }
        }
        rep.rows.push(Row { order: vd.to_string(), expected: render(&closed.coeff_i(vd).map_err(compute)?), computed: render(&v.value) });
    }
    Ok(rep)
}

fn pipeline(req: &Request, n: i64) -> Result<VerificationReport> {
    let (s, c1) = surface(req)?;
    let key = req.conjecture.as_str();
    let mut rep = match key {
        "euler-rk2" => euler_rk2_cross(&s, &c1, n)?,
        "chiy-rk2" | "chiy-rk3" => {
            let (e, c) = if key == "chiy-rk2" {
                (euler_rk2(&s, &c1, n), chiy_rk2(&s, &c1, n))
            } else {
                (euler_rk3(&s, &c1, n), chiy_rk3(&s, &c1, n))
            };
            let e = e.map_err(compute)?;
            let c = at_y_one(&c.map_err(compute)?).map_err(compute)?;
            let mut rep = VerificationReport::new(key, ("virtual Euler characteristic", "chi_y genus at y = 1"));
            rep.rows = (0..=n).map(|k| coeff_row(k, &e, &c)).collect::<Result<_>>()?;
            rep
        }
        "ellgen-rk2" => {
            let c = chiy_rk2(&s, &c1, n).map_err(compute)?;
            let e = ellgen_rk2(&s, &c1, EllReading::EvenThenHalf, n, 1).map_err(compute)?;
            let mut rep = VerificationReport::new(key, ("chi_y genus", "elliptic genus at q^0"));
            rep.notes.push("elliptic genus read as even q powers, then q -> q^(1/2)".into());
            for k in 0..=n {
                let q0 = e.coeff_i(k).and_then(|x| x.coeff_i(0)).map_err(compute)?;
                rep.rows.push(Row { order: k.to_string(), expected: render(&c.coeff_i(k).map_err(compute)?), computed: render(&q0) });
            }
            rep
        }
        "euler-rk3" => {
            let e = euler_rk3_explicit(&s, &c1, n).map_err(compute)?;
            let c = euler_rk3(&s, &c1, n).map_err(compute)?;
            let mut rep = VerificationReport::new(key, ("explicit roots", "power-sum expansion"));
            rep.notes.push("rank 3 sum over Seiberg-Witten basic classes only".into());
            rep.rows = (0..=n).map(|k| coeff_row(k, &e, &c)).collect::<Result<_>>()?;
            rep
        }
        "zinst-rk2" => {
            let z = zinst_rank2(&s, &c1, n).map_err(compute)?;
            let e = euler_rk2(&s, &c1, n).map_err(compute)?;
            let mut rep = VerificationReport::new(key, ("virtual Euler characteristic", "instanton branch coefficient"));
            let base = qr(-s.chi_o, 4) + qr(s.k2, 12);
            for vd in (0..=n).filter(|&vd| admissible(&s, &c1, vd)) {
                let at = base.clone() + qr(vd, 4);
                rep.rows.push(Row {
                    order: vd.to_string(),
                    expected: render(&e.coeff_i(vd).map_err(compute)?),
                    computed: render(&z.coeff(&at).map_err(compute)?),
                });
            }
            rep
        }
        _ => unreachable!("dispatched on PIPELINES"),
    };
    rep.surface = Some(s.name.clone());
    rep.c1 = Some(c1);
    Ok(rep)
}

pub fn run(req: &Request) -> Result<VerificationReport> {
    let n = bound(req)?;
    let key = req.conjecture.as_str();
    let mut rep = if PIPELINES.contains(&key) {
        pipeline(req, n)?
    } else if IDENTITIES.contains(&key) {
        return identity(req, n);
    } else {
        let known: Vec<&str> = PIPELINES.iter().chain(IDENTITIES.iter()).copied().collect();
        return Err(VerifyError::Usage(format!("unknown conjecture {key}; known: {}", known.join(", "))));
    };
    rep.settle();
    Ok(rep)
}
