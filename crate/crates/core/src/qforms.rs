//! Named q-series: eta, theta functions, lattice thetas, Hurwitz class numbers, Jacobi
//! forms and Borcherds-type product lifts.
//!
//! Orders are truncation bounds: a series built with `order = n` is exact below `var^n`.

use crate::domain::{Coeff, LaurentU};
use crate::rational::{q, qr, Q};
use crate::series::{Result, Series, SeriesError};
use std::collections::BTreeMap;

/// `prod_{n >= 1} (1 - c var^{n step})^e` modulo `var^order`.
pub fn euler_product<C: Coeff>(var: &str, order: i64, c: &C, step: i64, e: i64) -> Series<C> {
    let mut acc = Series::constant(var, C::one(), Some(Q::from_integer(order.into())));
    if e == 0 {
        return acc;
    }
    let mut n = step;
    while n < order {
        let f = Series::from_terms(var, [(q(0), C::one()), (q(n), c.neg())], Some(q(order)));
        acc = acc.mul(&f.pow_i(e).expect("unit factor")).expect("same variable");
        n += step;
    }
    acc
}

/// `prod (1 - q^n)`.
pub fn eta_bar(order: i64) -> Series<Q> {
    euler_product("q", order, &q(1), 1, 1)
}

/// `q^{1/24} prod (1 - q^n)`, exact below `q^order`.
pub fn eta(order: i64) -> Series<Q> {
    eta_bar(order).shift(&qr(1, 24))
}

/// `q prod (1 - q^n)^24`.
pub fn delta(order: i64) -> Series<Q> {
    euler_product("q", order - 1, &q(1), 1, 24).shift(&q(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaKind {
    Theta2,
    Theta3,
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `theta2(x) = sum x^{(n+1/2)^2}`, `theta3(x) = sum x^{n^2}`.
pub fn theta(kind: ThetaKind, order: i64) -> Series<Q> {
    theta_refined(kind, order).map_coeffs(|c| c.at_one().unwrap())
}

/// Two-variable thetas: `theta3(x,y) = sum x^{n^2} y^n`, `theta2(x,y) = sum x^{(n+1/2)^2} y^{n+1/2}`.
pub fn theta_refined(kind: ThetaKind, order: i64) -> Series<LaurentU> {
    let b = isqrt(order) + 2;
    let mut terms = Vec::new();
    for n in -b..=b {
        match kind {
            ThetaKind::Theta3 => terms.push((q(n * n), LaurentU::y_pow(q(1), n))),
            ThetaKind::Theta2 => terms.push((qr((2 * n + 1) * (2 * n + 1), 4), LaurentU::monomial(q(1), 2 * n + 1))),
        }
    }
    Series::from_terms("x", terms, Some(q(order)))
}

/// `theta3(x, y^{1/2}) = sum x^{n^2} u^n` with `u = y^{1/2}`.
pub fn theta3_sqrt_y(order: i64) -> Series<LaurentU> {
    let b = isqrt(order) + 2;
    Series::from_terms("x", (-b..=b).map(|n| (q(n * n), LaurentU::monomial(q(1), n))), Some(q(order)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lattice {
    A2,
    A2Dual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeThetaSpec {
    pub lattice: Lattice,
    pub coset: (i64, i64),
    pub refined: bool,
}

impl LatticeThetaSpec {
    pub fn new(lattice: Lattice, coset: (i64, i64), refined: bool) -> Option<Self> {
        let ok = matches!(
            (lattice, coset),
            (Lattice::A2, (0, 0)) | (Lattice::A2, (1, 0)) | (Lattice::A2Dual, (0, 0)) | (Lattice::A2Dual, (0, 1))
        );
        ok.then_some(LatticeThetaSpec { lattice, coset, refined })
    }
}

/// Element `a + b eps` of Z[eps], `eps^2 + eps + 1 = 0`.
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
struct ZEps(i64, i64);

impl ZEps {
    fn eps_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => ZEps(1, 0),
            1 => ZEps(0, 1),
            _ => ZEps(-1, -1),
        }
    }
}

/// Direct lattice-point summation. Exponents are in units of `1/3`: `3 * 2 Q(m,n)`.
pub fn lattice_theta(spec: LatticeThetaSpec, order: i64) -> Series<LaurentU> {
    // Q(m,n) >= (m^2 + n^2)/2 - |m| - |n| for the shifted form, so this box is ample.
    let b = 2 * isqrt(order) + 4;
    let mut acc: BTreeMap<(i64, i64), ZEps> = BTreeMap::new();
    for m in -b..=b {
        for n in -b..=b {
            let (e3, w) = match (spec.lattice, spec.coset) {
                (Lattice::A2, (0, 0)) => (6 * (m * m - m * n + n * n), ZEps(1, 0)),
                (Lattice::A2, (1, 0)) => (6 * (m * m - m * n + n * n + m - n) + 2, ZEps(1, 0)),
                (Lattice::A2Dual, (0, 0)) => (6 * (m * m + m * n + n * n), ZEps(1, 0)),
                (Lattice::A2Dual, (0, 1)) => (6 * (m * m + m * n + n * n), ZEps::eps_pow(m - n)),
                _ => unreachable!("checked in LatticeThetaSpec::new"),
            };
            if e3 >= 3 * order {
                continue;
            }
            let ypow = if spec.refined { m + n } else { 0 };
            let slot = acc.entry((e3, ypow)).or_default();
            slot.0 += w.0;
            slot.1 += w.1;
        }
    }
    let mut by_exp: BTreeMap<i64, Vec<(i64, Q)>> = BTreeMap::new();
    for ((e3, k), z) in acc {
        assert_eq!(z.1, 0, "lattice theta coefficient is not rational");
        by_exp.entry(e3).or_default().push((2 * k, q(z.0)));
    }
    Series::from_terms(
        "x",
        by_exp.into_iter().map(|(e3, v)| (qr(e3, 3), LaurentU::from_terms(v))),
        Some(q(order)),
    )
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum QformError {
    #[error("Hurwitz class number needs a positive discriminant = 0 or 3 mod 4, got {0}")]
    Discriminant(i64),
    #[error("phi_(0,k/2) is not defined for k = 2")]
    JacobiIndex,
    #[error("lift exponent {0} is not an integer")]
    LiftExponent(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Weighted count of reduced positive definite forms `(a,b,c)` with `b^2 - 4ac = -d`.
pub fn hurwitz(d: i64) -> std::result::Result<Q, QformError> {
    if d <= 0 || !matches!(d % 4, 0 | 3) {
        return Err(QformError::Discriminant(d));
    }
    let mut h = q(0);
    let mut a = 1;
    while 3 * a * a <= d {
        for b in -a..=a {
            let n = b * b + d;
            if n % (4 * a) != 0 {
                continue;
            }
            let c = n / (4 * a);
            if c < a || ((b.abs() == a || a == c) && b < 0) {
                continue;
            }
            h += if a == b && b == c {
                qr(1, 3)
            } else if b == 0 && a == c {
                qr(1, 2)
            } else {
                q(1)
            };
        }
        a += 1;
    }
    Ok(h)
}

/// `q`-series with `LaurentU` coefficients of a Jacobi-type form.
#[derive(Clone, Debug)]
pub struct JacobiSeries {
    pub series: Series<LaurentU>,
    pub weight: i64,
    /// Index times two.
    pub index2: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobiName {
    PhiM21,
    Phi01,
    G(u32),
    Phi0Half(u32),
}

fn u_series(s: Series<Q>) -> Series<LaurentU> {
    s.map_coeffs(|c| LaurentU::from_q(c))
}

/// `prod (1 - q^n y)^e (1 - q^n/y)^e` modulo `q^order`.
fn elliptic_product(order: i64, e: i64) -> Series<LaurentU> {
    let a = euler_product("q", order, &LaurentU::y_pow(q(1), 1), 1, e);
    let b = euler_product("q", order, &LaurentU::y_pow(q(1), -1), 1, e);
    a.mul(&b).unwrap()
}

/// `(y^{1/2} - y^{-1/2}) prod (1-q^n y)(1-q^n/y)/(1-q^n)^2`, the square root of `phi_{-2,1}`
/// with that leading sign.
pub fn phi_m21_sqrt(order: i64) -> Series<LaurentU> {
    let lead = LaurentU::from_terms([(1, q(1)), (-1, q(-1))]);
    elliptic_product(order, 1).mul(&u_series(euler_product("q", order, &q(1), 1, -2))).unwrap().mul_c(&lead)
}

fn g10(order: i64) -> Series<LaurentU> {
    // -1/2 (y+1)/(y-1) + sum_n sum_{d|n} (y^d - y^-d) q^n
    let num = LaurentU::from_terms([(2, qr(-1, 2)), (0, qr(-1, 2))]);
    let den = LaurentU::from_terms([(2, q(1)), (0, q(-1))]);
    let mut terms = vec![(q(0), LaurentU::ratio(&num, &den).unwrap())];
    for n in 1..order {
        let mut c = BTreeMap::new();
        for d in (1..=n).filter(|d| n % d == 0) {
            *c.entry(2 * d).or_insert_with(|| q(0)) += q(1);
            *c.entry(-2 * d).or_insert_with(|| q(0)) -= q(1);
        }
        terms.push((q(n), LaurentU::from_terms(c)));
    }
    Series::from_terms("q", terms, Some(q(order)))
}

pub fn jacobi(name: JacobiName, order: i64) -> std::result::Result<JacobiSeries, QformError> {
    Ok(match name {
        JacobiName::PhiM21 => {
            let s = phi_m21_sqrt(order);
            JacobiSeries { series: s.mul(&s)?, weight: -2, index2: 2 }
        }
        JacobiName::Phi01 => {
            // 12 phi_{-2,1} wp/(2 pi i)^2 with
            // wp/(2 pi i)^2 = 1/12 + y/(1-y)^2 + sum_n sum_{d|n} d (y^d - 2 + y^-d) q^n
            let num = LaurentU::y_pow(q(1), 1);
            let den = LaurentU::from_terms([(0, q(1)), (2, q(-2)), (4, q(1))]);
            let mut terms = vec![(q(0), LaurentU::ratio(&num, &den).unwrap().add(&LaurentU::from_q(&qr(1, 12))))];
            for n in 1..order {
                let mut c = BTreeMap::new();
                for d in (1..=n).filter(|d| n % d == 0) {
                    *c.entry(2 * d).or_insert_with(|| q(0)) += q(d);
                    *c.entry(-2 * d).or_insert_with(|| q(0)) += q(d);
                    *c.entry(0).or_insert_with(|| q(0)) -= q(2 * d);
                }
                terms.push((q(n), LaurentU::from_terms(c)));
            }
            let wp = Series::from_terms("q", terms, Some(q(order)));
            let phi = jacobi(JacobiName::PhiM21, order)?.series;
            JacobiSeries { series: phi.mul(&wp)?.scale(&q(12)), weight: 0, index2: 2 }
        }
        JacobiName::G(k) => {
            assert!(k >= 1, "G_(k,0) needs k >= 1");
            let mut g = g10(order);
            for _ in 1..k {
                g = g.map_coeffs(|c| c.y_deriv());
            }
            JacobiSeries { series: g, weight: k as i64, index2: 0 }
        }
        JacobiName::Phi0Half(k) => {
            if k == 2 {
                return Err(QformError::JacobiIndex);
            }
            let g = jacobi(JacobiName::G(k), order)?.series;
            let r = phi_m21_sqrt(order).pow_i(k as i64)?;
            JacobiSeries { series: g.mul(&r)?, weight: 0, index2: k as i64 }
        }
    })
}

/// Terms of `f(q^a, y^b)` for a q-series with `LaurentU` coefficients.
pub fn subst_qy(f: &Series<LaurentU>, a: &Q, b: u32) -> Result<Series<LaurentU>> {
    f.dilate(a).map(|s| s.map_coeffs(|c| c.dilate_u(b)))
}

/// Even part in q: `sum c_{2m,n} q^{2m} y^n`.
pub fn even_part(f: &Series<LaurentU>) -> Series<LaurentU> {
    let terms: Vec<(Q, LaurentU)> =
        f.terms().filter(|(e, _)| e.is_integer() && e.numer() % 2 == 0.into()).map(|(e, c)| (e, c.clone())).collect();
    Series::from_terms(f.var(), terms, f.order())
}

/// p-series with q-series coefficients.
pub type PQSeries = Series<Series<LaurentU>>;

fn integer_exp(e: &Q) -> std::result::Result<i64, QformError> {
    if !e.is_integer() {
        return Err(QformError::LiftExponent(crate::rational::fmt_q(e)));
    }
    crate::rational::to_i64(e).ok_or_else(|| QformError::LiftExponent(crate::rational::fmt_q(e)))
}

/// `L_a(f) = prod_{l > 0, m >= 0, n} (1 - p^{al} q^m y^n)^{c_{lm,n}}`, modulo `p^p_order`
/// and `q^q_order`, via `log L_a(f) = -sum c_{lm,n} sum_k p^{alk} q^{mk} y^{nk} / k`.
pub fn borcherds_lift(f: &Series<LaurentU>, a: i64, p_order: i64, q_order: i64) -> std::result::Result<PQSeries, QformError> {
    let lmax = (p_order - 1) / a;
    if lmax >= 1 && q_order > 1 {
        let need = q((lmax * (q_order - 1)) + 1);
        if f.order().is_some_and(|o| o < need) {
            return Err(SeriesError::BeyondOrder { exp: crate::rational::fmt_q(&need), order: crate::rational::fmt_q(&f.order().unwrap()) }.into());
        }
    }
    // log coefficients: p-exponent -> q-exponent -> u-exponent -> value
    let mut log: BTreeMap<i64, BTreeMap<i64, BTreeMap<i64, Q>>> = BTreeMap::new();
    for l in 1..=lmax {
        for m in 0..q_order {
            let c = f.coeff(&q(l * m))?;
            let Some(terms) = c.terms() else {
                return Err(QformError::LiftExponent("non-Laurent coefficient".into()));
            };
            for (k2, cv) in terms {
                let cnt = integer_exp(&cv)?;
                let mut k = 1;
                while a * l * k < p_order && m * k < q_order {
                    let slot = log.entry(a * l * k).or_default().entry(m * k).or_default().entry(k2 * k).or_insert_with(|| q(0));
                    *slot -= q(cnt) / q(k);
                    k += 1;
                }
            }
        }
    }
    let qo = Some(q(q_order));
    let terms: Vec<(Q, Series<LaurentU>)> = log
        .into_iter()
        .map(|(pe, inner)| {
            let s = Series::from_terms("q", inner.into_iter().map(|(qe, u)| (q(qe), LaurentU::from_terms(u))), qo.clone());
            (q(pe), s)
        })
        .collect();
    let lg: PQSeries = Series::from_terms("p", terms, Some(q(p_order)));
    Ok(lg.exp()?)
}

/// `L(2 phi_{0,1}) p Delta(q) phi_{-2,1}(q,y)`.
pub fn igusa_chi10(p_order: i64, q_order: i64) -> std::result::Result<PQSeries, QformError> {
    let lmax = (p_order - 2).max(1);
    let phi01 = jacobi(JacobiName::Phi01, lmax * q_order + 1)?.series.scale(&q(2));
    let lift = borcherds_lift(&phi01, 1, p_order - 1, q_order)?;
    let dphi = u_series(delta(q_order)).mul(&jacobi(JacobiName::PhiM21, q_order)?.series)?;
    Ok(lift.mul_c(&dphi).shift(&q(1)))
}

/// A q-series constant in the p-variable.
pub fn pq_const(s: Series<LaurentU>) -> PQSeries {
    Series::constant("p", s, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_pentagonal() {
        let e = eta_bar(16);
        let want = [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)];
        for k in 0..16 {
            let w = want.iter().find(|(e, _)| *e == k).map_or(0, |(_, c)| *c);
            assert_eq!(e.coeff_i(k).unwrap(), q(w), "q^{k}");
        }
    }

    #[test]
    fn hurwitz_small() {
        assert_eq!(hurwitz(3).unwrap(), qr(1, 3));
        assert_eq!(hurwitz(4).unwrap(), qr(1, 2));
        assert_eq!(hurwitz(7).unwrap(), q(1));
        assert_eq!(hurwitz(12).unwrap(), qr(4, 3));
        assert!(hurwitz(5).is_err());
    }
}
