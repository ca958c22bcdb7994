//! Surface descriptors: Seiberg-Witten basic classes and the intersection numbers the
//! closed formulas consume.
//!
//! SW values use the convention `SW(a) = SW~(2a - K)`, so basic classes satisfy
//! `SW(K - a) = (-1)^chi SW(a)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("unknown surface {0}")]
    Unknown(String),
    #[error("unknown c1 choice {0} on {1}")]
    UnknownC1(String, String),
    #[error("c(c-K) = {0} is odd")]
    Parity(i64),
    #[error("inconsistent surface data: {0}")]
    Invalid(String),
    #[error("malformed surface record: {0}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwClass {
    pub label: String,
    pub sw: i64,
    pub a_dot_k: i64,
    pub a_dot_a: i64,
    /// Index of the class `K - a`.
    pub dual: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C1Choice {
    pub name: String,
    pub c1_sq: i64,
    pub c1_dot_k: i64,
    /// `c1 . a` for every SW class.
    pub c1_dot: Vec<i64>,
    /// `a - c1` divisible by 2, per class.
    pub mod2: Vec<bool>,
    /// `c1 + a - b` divisible by 3, per pair of classes.
    pub mod3: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDescriptor {
    pub name: String,
    pub chi_o: i64,
    pub k2: i64,
    pub e: i64,
    pub classes: Vec<SwClass>,
    /// `a . b` for classes `a, b`.
    pub pairs: Vec<Vec<i64>>,
    pub c1_choices: Vec<C1Choice>,
    pub minimal_general_type: bool,
    /// SW data not backed by the literature this crate follows; excluded from acceptance.
    pub derived_data: bool,
}

/// `chi(O) + c(c-K)/2`.
pub fn chi_of_class(chi_o: i64, c_sq: i64, c_dot_k: i64) -> Result<i64, SurfaceError> {
    let d = c_sq - c_dot_k;
    if d % 2 != 0 {
        return Err(SurfaceError::Parity(d));
    }
    Ok(chi_o + d / 2)
}

fn class(label: &str, sw: i64, a_dot_k: i64, a_dot_a: i64, dual: usize) -> SwClass {
    SwClass { label: label.into(), sw, a_dot_k, a_dot_a, dual }
}

/// Minimal general type with basic classes `{0, K}` and `K` primitive.
fn general_type(name: &str, chi_o: i64, k2: i64) -> SurfaceDescriptor {
    let s = if chi_o % 2 == 0 { 1 } else { -1 };
    let zero = C1Choice {
        name: "0".into(),
        c1_sq: 0,
        c1_dot_k: 0,
        c1_dot: vec![0, 0],
        mod2: vec![true, false],
        mod3: vec![vec![true, false], vec![false, true]],
    };
    let kk = C1Choice {
        name: "K".into(),
        c1_sq: k2,
        c1_dot_k: k2,
        c1_dot: vec![0, k2],
        mod2: vec![false, true],
        // K + a - b in 3H^2 only for (a, b) = (0, K)
        mod3: vec![vec![false, true], vec![false, false]],
    };
    SurfaceDescriptor {
        name: name.into(),
        chi_o,
        k2,
        e: 12 * chi_o - k2,
        classes: vec![class("0", 1, 0, 0, 1), class("K", s, k2, k2, 0)],
        pairs: vec![vec![0, 0], vec![0, k2]],
        c1_choices: vec![zero, kk],
        minimal_general_type: true,
        derived_data: false,
    }
}

/// Elliptic surface E(n), n >= 3: `K = (n-2)F`, basic classes `jF` with
/// `SW(jF) = (-1)^j binom(n-2, j)`.
fn elliptic(n: i64) -> SurfaceDescriptor {
    let m = (n - 2) as usize;
    let classes: Vec<SwClass> = (0..=m)
        .map(|j| {
            let sw = crate::rational::binomial(m as i64, j as i64);
            let sw: i64 = i64::try_from(sw).unwrap() * if j % 2 == 0 { 1 } else { -1 };
            let label = match j {
                0 => "0".to_string(),
                1 => "F".to_string(),
                _ => format!("{j}F"),
            };
            class(&label, sw, 0, 0, m - j)
        })
        .collect();
    let k = classes.len();
    let pairs = vec![vec![0; k]; k];
    let zero = C1Choice {
        name: "0".into(),
        c1_sq: 0,
        c1_dot_k: 0,
        c1_dot: vec![0; k],
        mod2: (0..k).map(|j| j % 2 == 0).collect(),
        mod3: (0..k).map(|a| (0..k).map(|b| (a as i64 - b as i64) % 3 == 0).collect()).collect(),
    };
    // section B: B^2 = -n, B.F = 1, so B.K = n - 2; B is never congruent to a multiple of F
    let sec = C1Choice {
        name: "B".into(),
        c1_sq: -n,
        c1_dot_k: n - 2,
        c1_dot: (0..k).map(|j| j as i64).collect(),
        mod2: vec![false; k],
        mod3: vec![vec![false; k]; k],
    };
    SurfaceDescriptor {
        name: format!("E{n}"),
        chi_o: n,
        k2: 0,
        e: 12 * n,
        classes,
        pairs,
        c1_choices: vec![zero, sec],
        minimal_general_type: false,
        derived_data: false,
    }
}

fn k3() -> SurfaceDescriptor {
    let zero = C1Choice {
        name: "0".into(),
        c1_sq: 0,
        c1_dot_k: 0,
        c1_dot: vec![0],
        mod2: vec![true],
        mod3: vec![vec![true]],
    };
    // a primitive class h with h^2 = 2
    let h = C1Choice {
        name: "h".into(),
        c1_sq: 2,
        c1_dot_k: 0,
        c1_dot: vec![0],
        mod2: vec![false],
        mod3: vec![vec![false]],
    };
    SurfaceDescriptor {
        name: "K3".into(),
        chi_o: 2,
        k2: 0,
        e: 24,
        classes: vec![class("0", 1, 0, 0, 0)],
        pairs: vec![vec![0]],
        c1_choices: vec![zero, h],
        minimal_general_type: false,
        derived_data: false,
    }
}

fn k3_blowup() -> SurfaceDescriptor {
    // K = E, basic classes 0 and E
    let zero = C1Choice {
        name: "0".into(),
        c1_sq: 0,
        c1_dot_k: 0,
        c1_dot: vec![0, 0],
        mod2: vec![true, false],
        mod3: vec![vec![true, false], vec![false, true]],
    };
    let e = C1Choice {
        name: "E".into(),
        c1_sq: -1,
        c1_dot_k: -1,
        c1_dot: vec![0, -1],
        mod2: vec![false, true],
        mod3: vec![vec![false, true], vec![false, false]],
    };
    SurfaceDescriptor {
        name: "K3blowup1".into(),
        chi_o: 2,
        k2: -1,
        e: 25,
        classes: vec![class("0", 1, 0, 0, 1), class("E", 1, -1, -1, 0)],
        pairs: vec![vec![0, 0], vec![0, -1]],
        c1_choices: vec![zero, e],
        minimal_general_type: false,
        derived_data: true,
    }
}

pub const CATALOG: [&str; 7] = ["K3", "K3blowup1", "quintic", "E3", "E4", "E5", "doubleCoverP2octic"];

pub fn catalog_get(name: &str) -> Result<SurfaceDescriptor, SurfaceError> {
    let s = match name {
        "K3" => k3(),
        "K3blowup1" => k3_blowup(),
        "quintic" => general_type("quintic", 5, 5),
        "E3" => elliptic(3),
        "E4" => elliptic(4),
        "E5" => elliptic(5),
        "doubleCoverP2octic" => general_type("doubleCoverP2octic", 4, 2),
        _ => return Err(SurfaceError::Unknown(name.into())),
    };
    s.validate()?;
    Ok(s)
}

/// One term of the rank-2 sum over basic classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2Term {
    pub class: usize,
    pub sw: i64,
    pub a_dot_k: i64,
    pub a_dot_a: i64,
    pub a_dot_c1: i64,
    /// `(-1)^{a c1}`.
    pub sign: i64,
    pub congruent_mod2: bool,
}

/// One term of the rank-3 sum over pairs of basic classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank3Term {
    pub classes: (usize, usize),
    pub sw: i64,
    /// `a b`.
    pub p: i64,
    /// `(K-a)(K-b)`.
    pub q: i64,
    /// `(a-b) c1 mod 3`, the exponent of eps.
    pub eps_exp: i64,
    pub delta_mod3: bool,
    /// Index of the term for `(K-a, K-b)`.
    pub partner: usize,
}

impl SurfaceDescriptor {
    pub fn c1(&self, name: &str) -> Result<&C1Choice, SurfaceError> {
        self.c1_choices.iter().find(|c| c.name == name).ok_or_else(|| SurfaceError::UnknownC1(name.into(), self.name.clone()))
    }

    pub fn chi_of_class(&self, c_sq: i64, c_dot_k: i64) -> Result<i64, SurfaceError> {
        chi_of_class(self.chi_o, c_sq, c_dot_k)
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        let bad = |m: String| Err(SurfaceError::Invalid(format!("{}: {m}", self.name)));
        let n = self.classes.len();
        if self.pairs.len() != n || self.pairs.iter().any(|r| r.len() != n) {
            return bad("pair table shape".into());
        }
        let sgn = if self.chi_o % 2 == 0 { 1 } else { -1 };
        for (i, a) in self.classes.iter().enumerate() {
            if self.pairs[i][i] != a.a_dot_a {
                return bad(format!("a.a mismatch for {}", a.label));
            }
            let Some(d) = self.classes.get(a.dual) else {
                return bad(format!("dual of {} missing", a.label));
            };
            if d.sw != sgn * a.sw {
                return bad(format!("SW duality fails for {}", a.label));
            }
            if d.a_dot_k != self.k2 - a.a_dot_k || d.a_dot_a != self.k2 - 2 * a.a_dot_k + a.a_dot_a {
                return bad(format!("intersections of K - {} inconsistent", a.label));
            }
            if self.pairs[i][a.dual] != a.a_dot_k - a.a_dot_a {
                return bad(format!("a.(K-a) inconsistent for {}", a.label));
            }
            chi_of_class(self.chi_o, a.a_dot_a, a.a_dot_k)?;
        }
        for i in 0..n {
            for j in 0..n {
                if self.pairs[i][j] != self.pairs[j][i] {
                    return bad("pair table not symmetric".into());
                }
            }
        }
        if self.minimal_general_type && (n != 2 || self.classes[0].sw != 1 || self.classes[1].sw != sgn) {
            return bad("minimal general type needs classes {0, K} with SW (1, (-1)^chi)".into());
        }
        for c in &self.c1_choices {
            if c.c1_dot.len() != n || c.mod2.len() != n || c.mod3.len() != n || c.mod3.iter().any(|r| r.len() != n) {
                return bad(format!("c1 choice {} has wrong table sizes", c.name));
            }
            for (i, a) in self.classes.iter().enumerate() {
                // c1.(K - a) = c1 K - c1 a
                if c.c1_dot[a.dual] != c.c1_dot_k - c.c1_dot[i] {
                    return bad(format!("c1 choice {}: c1.(K-a) inconsistent", c.name));
                }
            }
        }
        Ok(())
    }

    pub fn sw_pairs_rank2(&self, c1: &str) -> Result<Vec<Rank2Term>, SurfaceError> {
        let c = self.c1(c1)?;
        Ok(self
            .classes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.sw != 0)
            .map(|(i, a)| Rank2Term {
                class: i,
                sw: a.sw,
                a_dot_k: a.a_dot_k,
                a_dot_a: a.a_dot_a,
                a_dot_c1: c.c1_dot[i],
                sign: if c.c1_dot[i].rem_euclid(2) == 0 { 1 } else { -1 },
                congruent_mod2: c.mod2[i],
            })
            .collect())
    }

    pub fn sw_pairs_rank3(&self, c1: &str) -> Result<Vec<Rank3Term>, SurfaceError> {
        let c = self.c1(c1)?;
        let idx: Vec<usize> = (0..self.classes.len()).filter(|&i| self.classes[i].sw != 0).collect();
        let mut out = Vec::new();
        for &a in &idx {
            for &b in &idx {
                let (ca, cb) = (&self.classes[a], &self.classes[b]);
                let ab = self.pairs[a][b];
                out.push(Rank3Term {
                    classes: (a, b),
                    sw: ca.sw * cb.sw,
                    p: ab,
                    q: self.k2 - ca.a_dot_k - cb.a_dot_k + ab,
                    eps_exp: (c.c1_dot[a] - c.c1_dot[b]).rem_euclid(3),
                    delta_mod3: c.mod3[a][b],
                    partner: 0,
                })
            }
        }
        let keys: Vec<(usize, usize)> = out.iter().map(|t| t.classes).collect();
        for t in out.iter_mut() {
            let (a, b) = t.classes;
            let want = (self.classes[a].dual, self.classes[b].dual);
            t.partner = keys.iter().position(|k| *k == want).ok_or_else(|| SurfaceError::Invalid("pairing partner missing".into()))?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("descriptor serializes")
    }

    /// Parse a user-supplied descriptor; the duality validator runs on load.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, SurfaceError> {
        let s: SurfaceDescriptor = serde_json::from_value(v.clone()).map_err(|e| SurfaceError::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_roch_helper() {
        assert_eq!(chi_of_class(5, 0, 0).unwrap(), 5);
        assert_eq!(chi_of_class(5, 5, 5).unwrap(), 5);
        // H on P^2: K.H = -3
        assert_eq!(chi_of_class(1, 1, -3).unwrap(), 3);
        assert!(chi_of_class(1, 1, 0).is_err());
    }
}
