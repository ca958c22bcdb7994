use crate::Usage;
use serde_json::{json, Value};
use vinv::qforms::*;
use vinv::rational::fmt_q;

pub const NAMES: [&str; 13] = [
    "eta_bar", "eta", "delta", "theta2", "theta3", "theta3_sqrt_y", "a2_00", "a2_10", "a2dual_00", "a2dual_01", "phi_m21", "phi_01", "hurwitz",
];

fn lattice(l: Lattice, coset: (i64, i64), refined: bool, order: i64) -> Value {
    let s = lattice_theta(LatticeThetaSpec::new(l, coset, refined).expect("registered coset"), order);
    if refined {
        s.to_json()
    } else {
        s.map_coeffs(|c| c.at_one().expect("Laurent")).to_json()
    }
}

fn jac(name: JacobiName, order: i64) -> Result<Value, Usage> {
    jacobi(name, order).map(|j| j.series.to_json()).map_err(|e| Usage(e.to_string()))
}

pub fn series(name: &str, order: i64, refined: bool) -> Result<Value, Usage> {
    let theta = |k| if refined { theta_refined(k, order).to_json() } else { theta(k, order).to_json() };
    Ok(match name {
        "eta_bar" => eta_bar(order).to_json(),
        "eta" => eta(order).to_json(),
        "delta" => delta(order).to_json(),
        "theta2" => theta(ThetaKind::Theta2),
        "theta3" => theta(ThetaKind::Theta3),
        "theta3_sqrt_y" => theta3_sqrt_y(order).to_json(),
        "a2_00" => lattice(Lattice::A2, (0, 0), refined, order),
        "a2_10" => lattice(Lattice::A2, (1, 0), refined, order),
        "a2dual_00" => lattice(Lattice::A2Dual, (0, 0), refined, order),
        "a2dual_01" => lattice(Lattice::A2Dual, (0, 1), refined, order),
        "phi_m21" => jac(JacobiName::PhiM21, order)?,
        "phi_01" => jac(JacobiName::Phi01, order)?,
        "hurwitz" => {
            // the first order/2 admissible discriminants, i.e. about those below order
            let table: serde_json::Map<String, Value> = (1..)
                .filter(|d| d % 4 == 0 || d % 4 == 3)
                .take((order / 2) as usize)
                .map(|d| (d.to_string(), json!(fmt_q(&hurwitz(d).expect("admissible discriminant")))))
                .collect();
            json!({"name": "hurwitz", "order": order, "values": table})
        }
        _ => return Err(Usage(format!("unknown series {name}; known: {}", NAMES.join(", ")))),
    })
}
