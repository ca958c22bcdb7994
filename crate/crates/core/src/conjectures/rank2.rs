//! Rank 2 generating functions. All of them share the shape
//! `4 A^chi B^{K^2} sum_a SW(a) (-1)^{a c1} R^{aK}`.

use super::{assert_symmetric_laurent, lift, need_order, pow2, rationalize, ConjError, Result};
use crate::domain::{Coeff, Cyclo12, LaurentU};
use crate::hilb::{cobordism_number, Specialization, ToricSurface};
use crate::qforms::{borcherds_lift, euler_product, even_part, jacobi, subst_qy, theta, theta3_sqrt_y, JacobiName, PQSeries, ThetaKind};
use crate::rational::{q, qr, Q};
use crate::series::Series;
use crate::surfaces::{Rank2Term, SurfaceDescriptor};

/// Largest `x`-order the cobordism evaluator knows `B^cob` to.
pub const COB_MAX_ORDER: i64 = 5;

fn sum_series<C: Coeff>(parts: impl IntoIterator<Item = Series<C>>, var: &str, order: Option<Q>) -> Result<Series<C>> {
    let mut acc = Series::zero(var, order);
    for p in parts {
        acc = acc.add(&p)?;
    }
    Ok(acc)
}

pub(crate) fn assemble<C: Coeff>(s: &SurfaceDescriptor, terms: &[Rank2Term], a: &Series<C>, b: &Series<C>, r: &Series<C>) -> Result<Series<C>> {
    let parts = terms.iter().map(|t| Ok(r.pow_i(t.a_dot_k)?.scale(&q(t.sw * t.sign)))).collect::<Result<Vec<_>>>()?;
    let sum = sum_series(parts, r.var(), r.order())?;
    Ok(a.pow_i(s.chi_o)?.mul(&b.pow_i(s.k2)?)?.mul(&sum)?.scale(&q(4)))
}

/// `prod (1 - x^{4n})^2`, i.e. `bar eta(x^4)^2`.
fn eta4_sq(n: i64) -> Series<Q> {
    euler_product("x", n, &q(1), 4, 2)
}

/// Virtual Euler characteristics, coefficient of `x^vd`.
pub fn euler_rk2(s: &SurfaceDescriptor, c1: &str, order: i64) -> Result<Series<Q>> {
    let n = order + 1;
    let th = theta(ThetaKind::Theta3, n);
    let a = euler_product("x", n, &q(1), 2, 12).invert()?.scale(&qr(1, 2));
    let b = eta4_sq(n).div(&th)?.scale(&q(2));
    let r = th.div(&th.flip_sign()?)?;
    Ok(assemble(s, &s.sw_pairs_rank2(c1)?, &a, &b, &r)?.truncate_i(n))
}

/// `prod (1 - x^{2n} y)(1 - x^{2n}/y)(1 - x^{2n})^10`.
fn chiy_p(n: i64) -> Result<Series<LaurentU>> {
    let up = euler_product("x", n, &LaurentU::y_pow(q(1), 1), 2, 1);
    let dn = euler_product("x", n, &LaurentU::y_pow(q(1), -1), 2, 1);
    Ok(up.mul(&dn)?.mul(&lift(&euler_product("x", n, &q(1), 2, 10)))?)
}

fn chiy_parts(n: i64) -> Result<(Series<LaurentU>, Series<LaurentU>, Series<LaurentU>)> {
    let th = theta3_sqrt_y(n);
    let a = chiy_p(n)?.invert()?.scale(&qr(1, 2));
    let b = lift::<LaurentU>(&eta4_sq(n)).div(&th)?.scale(&q(2));
    let r = th.div(&th.flip_sign()?)?;
    Ok((a, b, r))
}

/// Normalized virtual chi_{-y}-genera as Laurent polynomials in `u = y^{1/2}`.
pub fn chiy_rk2(s: &SurfaceDescriptor, c1: &str, order: i64) -> Result<Series<LaurentU>> {
    let n = order + 1;
    let (a, b, r) = chiy_parts(n)?;
    let out = assemble(s, &s.sw_pairs_rank2(c1)?, &a, &b, &r)?.truncate_i(n);
    assert_symmetric_laurent(&out)?;
    Ok(out)
}

/// Two readings of `f^ev |_{(q^{1/2}, y)}` in the denominator of `B^elg`. They agree at `q^0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EllReading {
    /// Keep `c_{2m,n} q^{2m}`, then substitute `q -> q^{1/2}`: `sum c_{2m,n} q^m y^n`.
    EvenThenHalf,
    /// Substitute first, then keep integral even exponents: `sum c_{4m,n} q^{2m} y^n`.
    HalfThenEven,
}

fn ell_parts(reading: EllReading, pn: i64, qn: i64) -> Result<(PQSeries, PQSeries)> {
    let jn = 2 * pn * qn + 4;
    let phi01 = jacobi(JacobiName::Phi01, jn)?.series;
    let a = borcherds_lift(&phi01, 2, pn, qn)?.invert()?;
    let ph = jacobi(JacobiName::Phi0Half(1), 2 * jn)?.series;
    let p3 = jacobi(JacobiName::Phi0Half(3), jn)?.series;
    let num4 = borcherds_lift(&ph.mul(&p3)?.scale(&q(2)), 4, pn, qn)?;
    let num1 = borcherds_lift(&ph.scale(&q(-2)), 1, pn, qn)?;
    let half = qr(1, 2);
    let ev = match reading {
        EllReading::EvenThenHalf => subst_qy(&even_part(&ph), &half, 1)?,
        EllReading::HalfThenEven => even_part(&subst_qy(&ph, &half, 1)?),
    };
    let f = ev.scale(&q(-2)).sub(&subst_qy(&ph, &q(2), 2)?)?.add(&ph.mul(&ph)?.scale(&q(2)))?;
    let den = borcherds_lift(&f, 2, pn, qn)?;
    Ok((a, num4.mul(&num1)?.div(&den)?))
}

/// Virtual elliptic genera: a `p`-series (`p = x`) of `q`-series, truncated below
/// `p^{p_order+1}` and `q^{q_order+1}`.
pub fn ellgen_rk2(s: &SurfaceDescriptor, c1: &str, reading: EllReading, p_order: i64, q_order: i64) -> Result<PQSeries> {
    let (pn, qn) = (p_order + 1, q_order + 1);
    let (a, b) = ell_parts(reading, pn, qn)?;
    let r = b.flip_sign()?.div(&b)?;
    let out = assemble(s, &s.sw_pairs_rank2(c1)?, &a.scale(&qr(1, 2)), &b.scale(&q(2)), &r)?.truncate_i(pn);
    let out = out.map_coeffs(|c| c.truncate_i(qn));
    for (e, c) in out.terms() {
        assert_symmetric_laurent(c).map_err(|_| ConjError::NotLaurent(format!("p^{e}")))?;
    }
    Ok(out)
}

/// `1/B^cob` through `p^5` in the Chern numbers `v_1..v_5` of the genus.
fn inv_b_cob(v: &[Q; 5]) -> Series<Q> {
    let [v1, v2, v3, _, v5] = v;
    let c4 = q(4) * (v1 * v1 * v1 * v1 - q(3) * v2 * v1 * v1 + v3 * v1);
    let c5 = q(4)
        * (v1 * v1 * v1 * v1 * v1 - q(6) * v1 * v1 * v1 * v2 - q(12) * v1 * v1 * v3 + q(9) * v1 * v2 * v2 + q(22) * v2 * v3
            + q(38) * v5);
    Series::from_coeffs("x", vec![q(1), q(2) * v1, q(0), q(-16) * v3, c4, c5], Some(COB_MAX_ORDER + 1))
}

/// Virtual cobordism classes for the genus with `h(0) = 1`, `[h^k]h = v_k`.
/// `A^cob` comes from Hilbert scheme integrals on `P^2` and `P^1 x P^1`.
pub fn cob_rk2(s: &SurfaceDescriptor, c1: &str, v: &[Q; 5], order: i64, sp: &Specialization) -> Result<Series<Q>> {
    if order > COB_MAX_ORDER {
        return Err(ConjError::Order(format!("cobordism series known through x^{COB_MAX_ORDER}, {order} requested")));
    }
    let n = order + 1;
    let m = order / 2;
    let gen = |t: &ToricSurface| -> Result<Series<Q>> {
        let c = (0..=m as usize).map(|k| cobordism_number(t, k, sp, v)).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Series::from_coeffs("x", c, Some(m + 1)))
    };
    let egl = gen(&ToricSurface::p1xp1())?.pow_i(9)?.div(&gen(&ToricSurface::p2())?.pow_i(8)?)?;
    let a = egl.dilate(&q(2))?.truncate_i(n);
    let b = inv_b_cob(v).truncate_i(n).invert()?;
    let r = b.flip_sign()?.div(&b)?;
    Ok(assemble(s, &s.sw_pairs_rank2(c1)?, &a.scale(&qr(1, 2)), &b.scale(&q(2)), &r)?.truncate_i(n))
}

/// A line bundle class `L` through its intersections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineData {
    pub l_sq: i64,
    pub l_dot_k: i64,
    /// `L . a` for every SW class of the surface.
    pub l_dot: Vec<i64>,
}

impl LineData {
    fn check(&self, s: &SurfaceDescriptor) -> Result<()> {
        if self.l_dot.len() != s.classes.len() {
            return Err(ConjError::Unsupported(format!("line data has {} pairings, surface has {} classes", self.l_dot.len(), s.classes.len())));
        }
        Ok(())
    }
}

/// K-theoretic Donaldson invariants `chi^vir(M, mu(L) (x) E^{1/2})`, coefficient of `x^vd`.
pub fn kdonaldson_rk2(s: &SurfaceDescriptor, c1: &str, l: &LineData, order: i64) -> Result<Series<Q>> {
    l.check(s)?;
    let n = order + 1;
    let one_m = Series::from_coeffs("x", vec![q(1), q(0), q(-1)], None).truncate_i(n);
    let lk_sq = l.l_sq - 2 * l.l_dot_k + s.k2;
    let pre = one_m.pow_rational(&-(qr(lk_sq, 2) + q(s.chi_o)))?.scale(&pow2(2 - s.chi_o + s.k2));
    let ratio = Series::from_coeffs("x", vec![q(1), q(1)], None).truncate_i(n).div(&Series::from_coeffs("x", vec![q(1), q(-1)], None).truncate_i(n))?;
    let mut parts = Vec::new();
    for t in s.sw_pairs_rank2(c1)? {
        let e = qr(l.l_dot_k - s.k2, 2) - q(l.l_dot[t.class] - t.a_dot_k);
        parts.push(ratio.pow_rational(&e)?.scale(&q(t.sw * t.sign)));
    }
    Ok(pre.mul(&sum_series(parts, "x", Some(q(n)))?)?.truncate_i(n))
}

/// `prod_{m >= 1} f_m^{w(m)}` over `m` with `k m < n`, each `f_m` given as (numerator factors,
/// denominator factors) of the form `1 + c x^{k m}`.
fn weighted_product(
    n: i64,
    k: impl Fn(i64) -> i64,
    factors: impl Fn(i64) -> (Vec<LaurentU>, Vec<LaurentU>),
    w: impl Fn(i64) -> i64,
) -> Result<Series<LaurentU>> {
    let ord = Some(q(n));
    let mut acc = Series::constant("x", LaurentU::one(), ord.clone());
    let mut m = 1;
    while k(m) < n {
        let e = q(k(m));
        let lin = |c: &LaurentU| Series::from_terms("x", [(q(0), LaurentU::one()), (e.clone(), c.clone())], ord.clone());
        let (nu, de) = factors(m);
        let mut f = Series::constant("x", LaurentU::one(), ord.clone());
        for c in &nu {
            f = f.mul(&lin(c))?;
        }
        for c in &de {
            f = f.div(&lin(c))?;
        }
        acc = acc.mul(&f.pow_i(w(m))?)?;
        m += 1;
    }
    Ok(acc)
}

/// chi_{-y}-genera valued in `mu(L)`, Laurent in `u = y^{1/2}`.
pub fn verlinde_chiy_rk2(s: &SurfaceDescriptor, c1: &str, l: &LineData, order: i64) -> Result<Series<LaurentU>> {
    l.check(s)?;
    let n = order + 1;
    let (a, b, r) = chiy_parts(n)?;
    let u = |c: i64, k: i64| LaurentU::monomial(q(c), k);
    let y = |c: i64, k: i64| LaurentU::y_pow(q(c), k);
    let f1 = weighted_product(n, |m| 2 * m, |_| (vec![u(-1, 0), u(-1, 0)], vec![y(-1, 1), y(-1, -1)]), |m| m * m)?;
    let f2 = weighted_product(n, |m| 2 * m, |_| (vec![y(-1, -1)], vec![y(-1, 1)]), |m| m)?;
    let g = weighted_product(n, |m| 2 * m - 1, |_| (vec![u(-1, 1), u(1, -1)], vec![u(-1, -1), u(1, 1)]), |m| 2 * m - 1)?;
    let mut parts = Vec::new();
    for t in s.sw_pairs_rank2(c1)? {
        let e = qr(l.l_dot_k, 2) - q(l.l_dot[t.class]);
        parts.push(r.pow_i(t.a_dot_k)?.mul(&g.pow_rational(&e)?)?.scale(&q(t.sw * t.sign)));
    }
    let sum = sum_series(parts, "x", Some(q(n)))?;
    let pre = a.pow_i(s.chi_o)?.mul(&b.pow_i(s.k2)?)?.mul(&f1.pow_rational(&qr(l.l_sq, 2))?)?.mul(&f2.pow_i(l.l_dot_k)?)?;
    let out = pre.mul(&sum)?.scale(&q(4)).truncate_i(n);
    // no y <-> 1/y symmetry once L K != 0: the second product inverts under it
    for (e, c) in out.terms() {
        if !c.is_laurent() {
            return Err(ConjError::NotLaurent(crate::rational::fmt_q(&e)));
        }
    }
    Ok(out)
}

/// Pieces of the rank-2 Vafa-Witten function in `x = q^{1/4}` with exact bound `nb`.
struct VwPieces {
    th3: Series<Cyclo12>,
    th2: Series<Cyclo12>,
    eta2: Series<Cyclo12>,
    /// `prod (1 - t^n)^12` in `t`, to be evaluated at `t = +-x^2`, `x^8`.
    p12: Series<Cyclo12>,
}

impl VwPieces {
    fn new(nb: i64) -> Result<Self> {
        let tb = nb / 4 + 2;
        let th3 = lift::<Cyclo12>(&theta(ThetaKind::Theta3, tb)).dilate(&q(4))?;
        let th2 = lift::<Cyclo12>(&theta(ThetaKind::Theta2, tb)).dilate(&q(4))?;
        let eta2 = lift::<Cyclo12>(&euler_product("x", nb, &q(1), 4, 2)).shift(&qr(1, 3));
        let p12 = lift::<Cyclo12>(&euler_product("x", nb / 2 + 2, &q(1), 1, 12));
        Ok(VwPieces { th3, th2, eta2, p12 })
    }
}

/// `2 (1/(2 d))^chi ((t+)/(2 eta^2))^{-K^2} sum SW (-1)^{a c1} ((t+)/(t-))^{aK}`.
fn vw_branch(s: &SurfaceDescriptor, terms: &[Rank2Term], tp: &Series<Cyclo12>, tm: &Series<Cyclo12>, d: &Series<Cyclo12>, eta2: &Series<Cyclo12>) -> Result<Series<Cyclo12>> {
    let r = tp.div(tm)?;
    let parts = terms.iter().map(|t| Ok(r.pow_i(t.a_dot_k)?.scale(&q(t.sw * t.sign)))).collect::<Result<Vec<_>>>()?;
    let sum = sum_series(parts, "x", r.order())?;
    let a = d.scale(&q(2)).invert()?.pow_i(s.chi_o)?;
    let b = tp.div(&eta2.scale(&q(2)))?.pow_i(-s.k2)?;
    Ok(a.mul(&b)?.mul(&sum)?.scale(&q(2)))
}

fn to_q_var(s: &Series<Q>, want: &Q, what: &str) -> Result<Series<Q>> {
    let out = s.dilate(&qr(1, 4))?.with_var("q");
    need_order(&out, want, what)?;
    Ok(out.truncate(want))
}

fn vw_bound(s: &SurfaceDescriptor, max_vd: i64) -> (Q, i64) {
    let want = (q(-s.chi_o) + qr(s.k2, 3) + q(max_vd + 1)) / q(4);
    let nb = max_vd + 1 + 4 * s.chi_o.abs() + s.k2.abs() + 8;
    (want, nb)
}

/// Instanton branch of the SU(2) Vafa-Witten function in `q`, exact through the exponent
/// `-chi/4 + K^2/12 + max_vd/4`.
pub fn zinst_rank2(s: &SurfaceDescriptor, c1: &str, max_vd: i64) -> Result<Series<Q>> {
    let (want, nb) = vw_bound(s, max_vd);
    let p = VwPieces::new(nb)?;
    let terms = s.sw_pairs_rank2(c1)?;
    let i = Cyclo12::i();
    // Delta(q^{1/2})^{1/2} and the branch i q^{1/4} prod (1 - (-1)^n q^{n/2})^12 of Delta(-q^{1/2})^{1/2}
    let d1 = p.p12.dilate(&q(2))?.shift(&q(1));
    let d2 = p.p12.flip_sign()?.dilate(&q(2))?.shift(&q(1)).mul_c(&i);
    let b1 = vw_branch(s, &terms, &p.th3.add(&p.th2)?, &p.th3.sub(&p.th2)?, &d1, &p.eta2)?;
    let ith2 = p.th2.mul_c(&i);
    let b2 = vw_branch(s, &terms, &p.th3.add(&ith2)?, &p.th3.sub(&ith2)?, &d2, &p.eta2)?.mul_c(&Cyclo12::i_pow(s.c1(c1)?.c1_sq));
    to_q_var(&rationalize(&b1.add(&b2)?)?, &want, "instanton branch")
}

/// Full SU(2) Vafa-Witten partition function: the monopole line plus the instanton branch.
pub fn vwfull_rk2(s: &SurfaceDescriptor, c1: &str, max_vd: i64) -> Result<Series<Q>> {
    let (want, nb) = vw_bound(s, max_vd);
    let p = VwPieces::new(nb)?;
    let th3 = rationalize(&p.th3)?;
    let th2 = rationalize(&p.th2)?;
    let eta2 = rationalize(&p.eta2)?;
    // Delta(q^2)^{1/2} = x^4 prod (1 - x^{8n})^12
    let d = rationalize(&p.p12)?.dilate(&q(8))?.shift(&q(4));
    let r = th3.div(&th2)?;
    let parts = s
        .sw_pairs_rank2(c1)?
        .into_iter()
        .filter(|t| t.congruent_mod2)
        .map(|t| Ok(r.pow_i(t.a_dot_k)?.scale(&q(t.sw))))
        .collect::<Result<Vec<_>>>()?;
    let sum = sum_series(parts, "x", r.order())?;
    let sign = if s.chi_o % 2 == 0 { q(1) } else { q(-1) };
    let line = d.scale(&q(2)).invert()?.pow_i(s.chi_o)?.mul(&th3.div(&eta2)?.pow_i(-s.k2)?)?.mul(&sum)?.scale(&sign);
    let line = to_q_var(&line, &want, "monopole line")?;
    Ok(line.add(&zinst_rank2(s, c1, max_vd)?)?.truncate(&want))
}
