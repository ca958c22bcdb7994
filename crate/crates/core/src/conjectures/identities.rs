//! Checkers for identities between generating functions. Each check compares two exact
//! series coefficient by coefficient and reports the first disagreement.

use super::universal::{ex1_verlinde, ex2_verlinde, example1, example2, example3, lehn_t_of_z, lin, segre_in_t, segre_t_of_z, verlinde_in_v, verlinde_v_of_w};
use super::{at_y_one, chiy_rk2, lift, ConjError, Result};
use crate::domain::{Coeff, Cyclo12, LaurentU};
use crate::hilb::{segre_number, verlinde_number, DivisorCombo, Specialization, ToricSurface};
use crate::qforms::{borcherds_lift, delta, euler_product, eta, hurwitz, igusa_chi10, jacobi, subst_qy, JacobiName, PQSeries};
use crate::rational::{fmt_q, q, qr, Q};
use crate::series::Series;
use crate::surfaces::catalog_get;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityKind {
    /// Rank 1 Segre-Verlinde correspondence `f_r = W^{-4s} X^2`, `g_r = V W^2`, `s = 1 + r`.
    SegreVerlindeRk1(i64),
    /// The rank `rho` version, `s = rho + r`.
    SegreVerlindeGeneral { rho: i64, r: i64 },
    /// Serre duality between the rank 2 closed forms for twists `r` and `-r`.
    SerreDuality { rho: i64, r: i64 },
    Example1,
    Example2,
    Example3,
    /// Top Segre numbers on `P^2` from localization against Lehn's closed form.
    LehnVsLocalization,
    /// Euler characteristics of rank 2 sheaves on `P^2` through Hurwitz class numbers.
    KlyachkoSeries,
    /// Euler characteristics of Hilbert schemes of K3 from the elliptic genus lift.
    DMVVK3,
    /// The squared rank 2 elliptic prefactor against the Igusa cusp form.
    GNIdentity,
    /// Hilbert scheme Verlinde numbers on `P^2` against the universal series.
    EGLConsistency,
    /// `phi_{-2,1}` against its product form.
    JacobiAnchor,
}

impl IdentityKind {
    pub fn name(&self) -> String {
        match self {
            IdentityKind::SegreVerlindeRk1(r) => format!("segre-verlinde-rk1(r={r})"),
            IdentityKind::SegreVerlindeGeneral { rho, r } => format!("segre-verlinde(rho={rho},r={r})"),
            IdentityKind::SerreDuality { rho, r } => format!("serre-duality(rho={rho},r={r})"),
            IdentityKind::Example1 => "example-1".into(),
            IdentityKind::Example2 => "example-2".into(),
            IdentityKind::Example3 => "example-3".into(),
            IdentityKind::LehnVsLocalization => "lehn-vs-localization".into(),
            IdentityKind::KlyachkoSeries => "klyachko".into(),
            IdentityKind::DMVVK3 => "dmvv-k3".into(),
            IdentityKind::GNIdentity => "gn-identity".into(),
            IdentityKind::EGLConsistency => "egl-consistency".into(),
            IdentityKind::JacobiAnchor => "jacobi-anchor".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// Relation and exponent.
    pub at: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub kind: IdentityKind,
    pub passed: bool,
    /// Coefficients compared.
    pub checked: usize,
    pub first_mismatch: Option<Mismatch>,
}

struct Tally {
    kind: IdentityKind,
    checked: usize,
    first: Option<Mismatch>,
}

impl Tally {
    fn new(kind: IdentityKind) -> Self {
        Tally { kind, checked: 0, first: None }
    }

    fn value(&mut self, what: &str, lhs: &str, rhs: &str) {
        self.checked += 1;
        if lhs != rhs && self.first.is_none() {
            self.first = Some(Mismatch { at: what.into(), lhs: lhs.into(), rhs: rhs.into() });
        }
    }

    fn q(&mut self, what: &str, lhs: &Q, rhs: &Q) {
        self.value(what, &fmt_q(lhs), &fmt_q(rhs))
    }

    /// Every exponent below `upto` on the common lattice.
    fn series<C: Coeff>(&mut self, what: &str, lhs: &Series<C>, rhs: &Series<C>, upto: &Q) -> Result<()> {
        for (s, side) in [(lhs, "lhs"), (rhs, "rhs")] {
            if s.order().is_some_and(|o| &o < upto) {
                return Err(ConjError::Order(format!("{what}: {side} exact below {}", fmt_q(&s.order().unwrap()))));
            }
        }
        let den = lhs.exp_den().max(1) * rhs.exp_den().max(1);
        let lo = [lhs.valuation(), rhs.valuation(), Some(q(0))].into_iter().flatten().min().unwrap();
        let step = qr(1, den);
        let mut e = (lo * q(den)).floor() / q(den);
        while &e < upto {
            let (a, b) = (lhs.coeff(&e)?, rhs.coeff(&e)?);
            self.checked += 1;
            if a != b && self.first.is_none() {
                self.first = Some(Mismatch { at: format!("{what} @ {}^{}", lhs.var(), fmt_q(&e)), lhs: format!("{a:?}"), rhs: format!("{b:?}") });
            }
            e += &step;
        }
        Ok(())
    }

    fn report(self) -> IdentityReport {
        IdentityReport { kind: self.kind, passed: self.first.is_none() && self.checked > 0, checked: self.checked, first_mismatch: self.first }
    }
}

/// Runs one identity through `order`.
pub fn check_identity(kind: IdentityKind, order: i64) -> Result<IdentityReport> {
    let mut t = Tally::new(kind);
    let n = order + 1;
    let upto = q(n);
    match kind {
        IdentityKind::SegreVerlindeRk1(r) => segre_verlinde(&mut t, 1, r, n)?,
        IdentityKind::SegreVerlindeGeneral { rho, r } => segre_verlinde(&mut t, rho, r, n)?,
        IdentityKind::SerreDuality { rho: 2, r } if r.abs() == 1 => serre_rank2(&mut t, r, n)?,
        IdentityKind::SerreDuality { rho, r } => {
            return Err(ConjError::Unsupported(format!("closed forms for Serre duality known for rho = 2, r = +-1 only, got rho = {rho}, r = {r}")))
        }
        IdentityKind::Example1 | IdentityKind::Example2 => {
            let ex = if kind == IdentityKind::Example1 { example1(order)? } else { example2(order)? };
            let (a, b, y, z, w) = (&ex["A"], &ex["B"], &ex["Y"], &ex["Z"], &ex["W"]);
            t.series("A = W Y", a, &w.mul(y)?, &upto)?;
            t.series("B = Z", b, z, &upto)?;
            // the rank-2 companions A_1 = A(-.)/A, B_11 = B(-.)/B against Y_1, Z_11
            t.series("A_1 = Y_1", &a.flip_sign()?.div(a)?, &y.flip_sign()?.div(y)?, &upto)?;
            t.series("B_11 = Z_11", &b.flip_sign()?.div(b)?, &z.flip_sign()?.div(z)?, &upto)?;
        }
        IdentityKind::Example3 => {
            let ex = example3(order)?;
            let w = &ex["W"];
            for (a, y) in [("A", "Y"), ("A.A1.A2", "Y.Y11.Y21"), ("A.A1", "Y.Y11"), ("A.A2", "Y.Y21")] {
                t.series(&format!("{a} = W {y}"), &ex[a], &w.mul(&ex[y])?, &upto)?;
            }
            for (b, z) in [("B", "Z"), ("B.B11.B12.B22", "Z.Z11.Z12.Z22"), ("B.B11", "Z.Z11"), ("B.B22", "Z.Z22")] {
                t.series(&format!("{b} = {z}"), &ex[b], &ex[z], &upto)?;
            }
        }
        IdentityKind::LehnVsLocalization => lehn(&mut t, order)?,
        IdentityKind::KlyachkoSeries => klyachko(&mut t, order)?,
        IdentityKind::DMVVK3 => dmvv(&mut t, order)?,
        IdentityKind::GNIdentity => gn(&mut t, order)?,
        IdentityKind::EGLConsistency => egl(&mut t, order)?,
        IdentityKind::JacobiAnchor => jacobi_anchor(&mut t, n)?,
    }
    Ok(t.report())
}

/// Both sides in `t` under `v = t/(1 - (r/rho) t)`, `w = v(1+v)^{k-1}`, `z = t(1+(1-s/rho)t)^{1-s/rho}`.
fn segre_verlinde(t: &mut Tally, rho: i64, r: i64, n: i64) -> Result<()> {
    if rho < 1 {
        return Err(ConjError::Unsupported(format!("rank {rho}")));
    }
    let s = rho + r;
    let k = qr(r * r, rho * rho);
    let sigma = qr(s, rho);
    let x = Series::<Q>::gen("t").truncate_i(n);
    let v_t = x.div(&lin("t", &-qr(r, rho), n))?;
    let w_t = v_t.mul(&lin::<Q>("t", &q(1), n).substitute(&v_t)?.pow_rational(&(&k - q(1)))?)?;
    let z_t = x.mul(&lin::<Q>("t", &(q(1) - &sigma), n).pow_rational(&(q(1) - &sigma))?)?;
    // universal series in w and z, pulled back to t
    let v_w = verlinde_v_of_w(&k, n)?;
    let (g, f) = verlinde_in_v(rho, r, n)?;
    let (g_w, f_w) = (g.substitute(&v_w)?, f.substitute(&v_w)?);
    let t_z = segre_t_of_z(&sigma, n)?;
    let (vv, ww, xx) = segre_in_t(rho, s, n)?;
    let pull = |a: &Series<Q>, img: &Series<Q>| -> Result<Series<Q>> { Ok(a.substitute(img)?) };
    let (g_t, f_t) = (pull(&g_w, &w_t)?, pull(&f_w, &w_t)?);
    let (v_t2, w_t2, x_t2) = (pull(&vv.substitute(&t_z)?, &z_t)?, pull(&ww.substitute(&t_z)?, &z_t)?, pull(&xx.substitute(&t_z)?, &z_t)?);
    let ve = &sigma * (q(rho) - q(2) + qr(1, rho));
    let rhs_f = v_t2.pow_rational(&ve)?.mul(&w_t2.pow_rational(&(q(-4) * &sigma))?)?.mul(&x_t2.pow_i(2)?)?;
    let rhs_g = v_t2.mul(&w_t2.pow_i(2)?)?;
    let upto = q(n);
    t.series("f = V^e W^(-4s/rho) X^2", &f_t, &rhs_f, &upto)?;
    t.series("g = V W^2", &g_t, &rhs_g, &upto)?;
    Ok(())
}

/// In `h = v^{1/2}`: `B_{-r}(h) = (1+v) A_r(-h)^2 B_r(-h)`, `B_{11,-r}(h) = A_{1,r}(-h)^2 B_{11,r}(-h)`
/// and `A_r(h) = (1+v)^{-1/2} (B_{-r}(-h)/B_r(h))^{1/2}`.
fn serre_rank2(t: &mut Tally, r: i64, n: i64) -> Result<()> {
    let h = Series::<Cyclo12>::gen("h").truncate_i(n + 2);
    let g = lin::<Cyclo12>("v", &q(1), n + 2).substitute(&h.mul(&h)?)?;
    let (am, bm) = ex1_verlinde(&h)?;
    let (ap, bp) = ex2_verlinde(&h)?;
    let ((a, b), (_, bd)) = if r == 1 { ((ap, bp), (am, bm)) } else { ((am, bm), (ap, bp)) };
    let upto = q(n);
    let a_f = a.flip_sign()?;
    let b_f = b.flip_sign()?;
    t.series("B_(-r) = g A_r(-h)^2 B_r(-h)", &bd, &g.mul(&a_f.pow_i(2)?)?.mul(&b_f)?, &upto)?;
    let a1 = a_f.div(&a)?;
    let b11 = b_f.div(&b)?;
    let b11d = bd.flip_sign()?.div(&bd)?;
    t.series("B_(11,-r) = A_(1,r)(-h)^2 B_(11,r)(-h)", &b11d, &a1.flip_sign()?.pow_i(2)?.mul(&b11.flip_sign()?)?, &upto)?;
    let rhs = g.pow_rational(&qr(-1, 2))?.mul(&bd.flip_sign()?.div(&b)?.pow_rational(&qr(1, 2))?)?;
    t.series("A_r = g^(-1/2) (B_(-r)(-h)/B_r)^(1/2)", &a, &rhs, &upto)?;
    Ok(())
}

fn lehn(t: &mut Tally, order: i64) -> Result<()> {
    let s = ToricSurface::p2();
    let sp = Specialization::primary();
    let n = order + 1;
    let tz = lehn_t_of_z(n)?;
    let one = |c: i64| lin::<Q>("t", &q(c), n);
    let c = Series::from_coeffs("t", vec![q(1), q(-6), q(6)], Some(n));
    for d in 1..=3 {
        let (l2, lk, k2, chi) = (d * d, -3 * d, 9, 1);
        let f = one(-1)
            .pow_i(lk - 2 * k2)?
            .mul(&one(-2).pow_i(l2 - 2 * lk + k2 + 3 * chi)?)?
            .mul(&c.pow_rational(&(-qr(l2 - lk, 2) - q(chi)))?)?;
        let g = f.substitute(&tz)?;
        let l = DivisorCombo::parse(&s, &[("H", d)])?;
        for k in 0..=order {
            let loc = segre_number(&s, &l, k as usize, &sp)?;
            t.q(&format!("O({d}) z^{k}"), &loc, &g.coeff_i(k)?);
        }
    }
    Ok(())
}

/// Generalized class number by reduction of every form in a box: distinct reduced forms,
/// each weighted by `2 / |Aut|`.
pub fn hurwitz_by_reduction(d: i64) -> Q {
    let mut seen = BTreeSet::new();
    for a in 1..=d {
        for b in -d..=d {
            let nn = b * b + d;
            if nn % (4 * a) != 0 {
                continue;
            }
            seen.insert(reduce((a, b, nn / (4 * a))));
        }
    }
    seen.into_iter().map(|f| qr(2, automorphisms(f))).sum()
}

fn reduce((mut a, mut b, mut c): (i64, i64, i64)) -> (i64, i64, i64) {
    loop {
        if b.abs() > a {
            // b -> b - 2ka into (-a, a]
            let k = (b + a - 1).div_euclid(2 * a);
            let b2 = b - 2 * k * a;
            c = (b2 * b2 - (b * b - 4 * a * c)) / (4 * a);
            b = b2;
        } else if c < a {
            (a, b, c) = (c, -b, a);
        } else {
            break;
        }
    }
    if (b.abs() == a || a == c) && b < 0 {
        b = -b;
    }
    (a, b, c)
}

/// Matrices in `SL_2(Z)` with entries in `{-1, 0, 1}` fixing the form; enough for reduced forms.
fn automorphisms((a, b, c): (i64, i64, i64)) -> i64 {
    let mut n = 0;
    for p in -1..=1i64 {
        for qq in -1..=1i64 {
            for r in -1..=1i64 {
                for s in -1..=1i64 {
                    if p * s - qq * r != 1 {
                        continue;
                    }
                    // f(px + qy, rx + sy)
                    let a2 = a * p * p + b * p * r + c * r * r;
                    let b2 = 2 * a * p * qq + b * (p * s + qq * r) + 2 * c * r * s;
                    let c2 = a * qq * qq + b * qq * s + c * s * s;
                    if (a2, b2, c2) == (a, b, c) {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// `3 eta^{-6} sum H(4n-1) q^{n - 1/4}`: integral, leading `q^{1/2}` coefficient 1, and the same
/// with either class number routine.
fn klyachko(t: &mut Tally, order: i64) -> Result<()> {
    let n = order + 1;
    let e6 = eta(n + 1).pow_i(-6)?;
    let build = |h: &dyn Fn(i64) -> Result<Q>| -> Result<Series<Q>> {
        let terms = (1..=n + 1).map(|k| Ok((q(k) - qr(1, 4), h(4 * k - 1)?))).collect::<Result<Vec<_>>>()?;
        Ok(e6.mul(&Series::from_terms("q", terms, Some(q(n + 1))))?.scale(&q(3)))
    };
    let a = build(&|d| Ok(hurwitz(d)?))?;
    let b = build(&|d| Ok(hurwitz_by_reduction(d)))?;
    let upto = q(n) - qr(1, 2);
    t.series("class number routines", &a, &b, &upto)?;
    t.q("q^(1/2)", &a.coeff(&qr(1, 2))?, &q(1));
    for (e, c) in a.terms().filter(|(e, _)| e < &upto) {
        t.value(&format!("integrality q^{}", fmt_q(&e)), &c.is_integer().to_string(), "true");
    }
    Ok(())
}

/// `1/L(2 phi_{0,1})`: at `y = 1` the `p^n` coefficient is the constant `e(K3^[n])`; at `q^0`
/// it is the rank 2 chi_y series of K3; and it equals `p Delta phi_{-2,1} / chi_10`.
fn dmvv(t: &mut Tally, order: i64) -> Result<()> {
    let (pn, qn) = (order + 1, 3);
    let phi = jacobi(JacobiName::Phi01, pn * qn + 1)?.series.scale(&q(2));
    let z = borcherds_lift(&phi, 1, pn, qn)?.invert()?;
    let e24 = euler_product("p", pn, &q(1), 1, -24);
    let k3 = catalog_get("K3")?;
    let chiy = chiy_rk2(&k3, "0", 2 * order)?;
    for k in 0..pn {
        let c = z.coeff_i(k)?;
        let want = Series::constant("q", e24.coeff_i(k)?, Some(q(qn)));
        t.series(&format!("p^{k} at y=1"), &at_y_one(&c)?, &want, &q(qn))?;
        t.value(&format!("p^{k} q^0 vs chi_y(K3)"), &format!("{:?}", c.coeff_i(0)?), &format!("{:?}", chiy.coeff_i(2 * k)?));
    }
    let chi10 = igusa_chi10(pn + 1, qn)?;
    let dphi = lift::<LaurentU>(&delta(qn)).mul(&jacobi(JacobiName::PhiM21, qn)?.series)?;
    let rhs = Series::constant("p", dphi, None).shift(&q(1)).div(&chi10)?;
    t.series("p Delta phi / chi_10", &pq_trim(&z, qn - 1, pn), &pq_trim(&rhs, qn - 1, pn), &q(pn))?;
    Ok(())
}

/// Truncation in both variables, with the inner variable named `q` throughout. Dividing by
/// `chi_10` costs one order in `q`, since its leading coefficient has `q`-valuation 1.
fn pq_trim(s: &PQSeries, qn: i64, pn: i64) -> PQSeries {
    s.map_coeffs(|c| c.with_var("q").truncate_i(qn)).truncate_i(pn)
}

/// `(1/L_2(phi_{0,1}))^2 = p^2 Delta(q) phi_{-2,1} / chi_10(p^2, q, y)` and the `p <-> q`
/// symmetry of the coefficients of `chi_10`.
fn gn(t: &mut Tally, order: i64) -> Result<()> {
    let (pn, qn) = (order + 1, order + 1);
    let phi = jacobi(JacobiName::Phi01, pn * qn + 1)?.series;
    let a = borcherds_lift(&phi, 2, pn, qn)?.invert()?;
    let lhs = a.mul(&a)?;
    let chi10 = igusa_chi10(pn / 2 + 2, qn)?.dilate(&q(2))?;
    let dphi = lift::<LaurentU>(&delta(qn)).mul(&jacobi(JacobiName::PhiM21, qn)?.series)?;
    let rhs = Series::constant("p", dphi, None).shift(&q(2)).div(&chi10)?;
    t.series("A^2 = p^2 Delta phi / chi_10(p^2)", &pq_trim(&lhs, qn - 1, pn), &pq_trim(&rhs, qn - 1, pn), &q(pn))?;
    let m = order.max(2);
    let chi = igusa_chi10(m + 1, m + 1)?;
    for i in 1..=m {
        for j in (i + 1)..=m {
            let a = chi.coeff_i(i)?.coeff_i(j)?;
            let b = chi.coeff_i(j)?.coeff_i(i)?;
            t.value(&format!("chi_10 p^{i} q^{j} vs p^{j} q^{i}"), &format!("{a:?}"), &format!("{b:?}"));
        }
    }
    Ok(())
}

/// `g_r^{chi(L)} f_r^{1/2}` in `w` against localization on `P^2` for `L = O(d)`.
fn egl(t: &mut Tally, order: i64) -> Result<()> {
    let s = ToricSurface::p2();
    let sp = Specialization::primary();
    let n = order + 1;
    for r in [-1, 0, 1] {
        let v = verlinde_v_of_w(&q(r * r), n)?;
        let (g, f) = verlinde_in_v(1, r, n)?;
        for d in 0..=2 {
            let chi_l = 1 + (d * d + 3 * d) / 2;
            let gen = g.pow_i(chi_l)?.mul(&f.pow_rational(&qr(1, 2))?)?.substitute(&v)?;
            let l = DivisorCombo::parse(&s, &[("H", d)])?;
            for k in 0..=order {
                let loc = verlinde_number(&s, &l, r, k as usize, &sp)?;
                t.q(&format!("r={r} O({d}) w^{k}"), &loc, &gen.coeff_i(k)?);
            }
        }
    }
    Ok(())
}

/// `phi_{-2,1}(q^2, y^2) Delta(q^2) / (u - 1/u)^2 = (u + 1/u)^2 q^2 prod (1 - q^{2n} y^2)^2 (1 - q^{2n}/y^2)^2 (1 - q^{2n})^20`.
fn jacobi_anchor(t: &mut Tally, n: i64) -> Result<()> {
    let phi = subst_qy(&jacobi(JacobiName::PhiM21, n)?.series, &q(2), 2)?;
    let d2 = lift::<LaurentU>(&delta(n)).dilate(&q(2))?;
    let den = LaurentU::from_terms([(1, q(1)), (-1, q(-1))]).pow_i(2).expect("nonzero");
    let lhs = phi.mul(&d2)?.mul_c(&den.inv().expect("unit")).truncate_i(n);
    let y2 = LaurentU::y_pow(q(1), 2);
    let y2i = LaurentU::y_pow(q(1), -2);
    let prod = euler_product("q", n, &y2, 2, 2).mul(&euler_product("q", n, &y2i, 2, 2))?.mul(&lift(&euler_product("q", n, &q(1), 2, 20)))?;
    let lead = LaurentU::from_terms([(1, q(1)), (-1, q(1))]).pow_i(2).expect("nonzero");
    let rhs = prod.mul_c(&lead).shift(&q(2)).truncate_i(n);
    t.series("phi_(-2,1) Delta product form", &lhs, &rhs, &q(n))?;
    Ok(())
}
