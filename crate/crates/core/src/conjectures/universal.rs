//! Universal series of the Verlinde and Segre correspondences after the change of variables,
//! plus the closed algebraic forms known in ranks 2 and 3.

use super::{ConjError, ConjectureId, Result};
use crate::domain::{Coeff, Cyclo12};
use crate::rational::{q, qr, Q};
use crate::series::Series;
use std::collections::BTreeMap;

/// Named series in one variable, plus the change of variables that produced them.
#[derive(Clone, Debug)]
pub struct UniversalBundle {
    pub id: ConjectureId,
    pub var: String,
    pub series: BTreeMap<String, Series<Q>>,
}

/// `1 + c var` modulo `var^n`.
pub(crate) fn lin<C: Coeff>(var: &str, c: &Q, n: i64) -> Series<C> {
    Series::from_terms(var, [(q(0), C::one()), (q(1), C::from_q(c))], Some(q(n)))
}

/// `v(1 + v)^{k-1}` reverted: `v` as a series in `w`.
pub(crate) fn verlinde_v_of_w(k: &Q, n: i64) -> Result<Series<Q>> {
    let w = lin::<Q>("v", &q(1), n).pow_rational(&(k - q(1)))?.shift(&q(1)).truncate_i(n);
    Ok(w.revert()?.with_var("w"))
}

/// `t(1 + (1 - sigma) t)^{1 - sigma}` reverted: `t` as a series in `z`.
pub(crate) fn segre_t_of_z(sigma: &Q, n: i64) -> Result<Series<Q>> {
    let z = lin::<Q>("t", &(q(1) - sigma), n).pow_rational(&(q(1) - sigma))?.shift(&q(1)).truncate_i(n);
    Ok(z.revert()?.with_var("z"))
}

/// Verlinde series `g, f` in `v` for rank `rho`, twist `r`.
pub(crate) fn verlinde_in_v(rho: i64, r: i64, n: i64) -> Result<(Series<Q>, Series<Q>)> {
    let k = qr(r * r, rho * rho);
    let g = lin::<Q>("v", &q(1), n);
    let f = g.pow_rational(&k)?.div(&lin("v", &k, n))?;
    Ok((g, f))
}

/// Segre series `V, W, X` in `t` for rank `rho`, twist `s`.
pub(crate) fn segre_in_t(rho: i64, s: i64, n: i64) -> Result<(Series<Q>, Series<Q>, Series<Q>)> {
    let sigma = qr(s, rho);
    let a = lin::<Q>("t", &(q(1) - &sigma), n);
    let b = lin::<Q>("t", &(q(2) - &sigma), n);
    let c = lin::<Q>("t", &((q(1) - &sigma) * (q(2) - &sigma)), n);
    let v = a.pow_i(1 - s)?.mul(&b.pow_i(s)?)?.mul(&a.pow_i(rho - 1)?)?;
    let w = a.pow_rational(&(qr(s, 2) - q(1) + qr(1 - rho, 2)))?.mul(&b.pow_rational(&qr(1 - s, 2))?)?;
    let x = a
        .pow_rational(&(qr(s * s, 2) - q(s) - qr((rho - 1) * (rho - 1) * s, 2 * rho)))?
        .mul(&b.pow_rational(&qr(1 - s * s, 2))?)?
        .mul(&c.pow_rational(&qr(-1, 2))?)?;
    Ok((v, w, x))
}

/// Universal series through `order` in the natural variable (`w` for Verlinde, `z` for Segre).
pub fn universal_vs(id: ConjectureId, order: i64) -> Result<UniversalBundle> {
    let n = order + 1;
    let mut series = BTreeMap::new();
    let var = match id {
        ConjectureId::EGLVerlinde(r) => {
            return universal_vs(ConjectureId::VerlindeGeneral { rho: 1, r }, order).map(|b| UniversalBundle { id, ..b });
        }
        ConjectureId::VerlindeGeneral { rho, r } if rho >= 1 => {
            let v = verlinde_v_of_w(&qr(r * r, rho * rho), n)?;
            let (g, f) = verlinde_in_v(rho, r, n)?;
            series.insert("g".into(), g.substitute(&v)?);
            series.insert("f".into(), f.substitute(&v)?);
            series.insert("v".into(), v);
            "w"
        }
        ConjectureId::MOPSegre(s) => {
            return universal_vs(ConjectureId::SegreGeneral { rho: 1, s }, order).map(|b| UniversalBundle { id, ..b });
        }
        ConjectureId::SegreGeneral { rho, s } if rho >= 1 => {
            let t = segre_t_of_z(&qr(s, rho), n)?;
            let (v, w, x) = segre_in_t(rho, s, n)?;
            series.insert("V".into(), v.substitute(&t)?);
            series.insert("W".into(), w.substitute(&t)?);
            series.insert("X".into(), x.substitute(&t)?);
            series.insert("t".into(), t);
            "z"
        }
        ConjectureId::Lehn => {
            // z = t(1-t)(1-2t)^4/(1-6t+6t^2)^3
            let t = lehn_t_of_z(n)?;
            series.insert("t".into(), t);
            "z"
        }
        other => return Err(ConjError::Unsupported(format!("no universal series for {}", other.key()))),
    };
    Ok(UniversalBundle { id, var: var.into(), series })
}

pub(crate) fn lehn_t_of_z(n: i64) -> Result<Series<Q>> {
    let num = Series::from_coeffs("t", vec![q(1), q(-1)], None).mul(&Series::from_coeffs("t", vec![q(1), q(-2)], None).pow_i(4)?)?;
    let den = Series::from_coeffs("t", vec![q(1), q(-6), q(6)], None).truncate_i(n).pow_i(3)?;
    let z = num.truncate_i(n).div(&den)?.shift(&q(1)).truncate_i(n);
    Ok(z.revert()?.with_var("z"))
}

type Cs = Series<Cyclo12>;

fn sqrt(s: &Cs) -> Result<Cs> {
    Ok(s.pow_rational(&qr(1, 2))?)
}

/// `1 + c t` evaluated on a series in `T`.
fn aff(t: &Cs, c: Q) -> Result<Cs> {
    Ok(t.scale(&c).add(&Series::constant(t.var(), Cyclo12::one(), None))?)
}

fn poly(t: &Cs, cs: &[Q]) -> Result<Cs> {
    let mut acc = Series::zero(t.var(), t.order());
    let mut pw = Series::constant(t.var(), Cyclo12::one(), None);
    for c in cs {
        acc = acc.add(&pw.scale(c))?;
        pw = pw.mul(t)?;
    }
    Ok(acc)
}

/// Rank 2, `r = -1`: `(A, B)` as functions of `h = v^{1/2}`.
pub(crate) fn ex1_verlinde(h: &Cs) -> Result<(Cs, Cs)> {
    let v = h.mul(h)?;
    let rt = h.mul(&sqrt(&aff(&v, qr(1, 4))?)?)?;
    Ok((aff(&v, qr(1, 2))?.add(&rt)?, aff(&v, qr(1, 4))?.sub(&rt.scale(&qr(1, 2)))?))
}

/// Rank 2, `s = 1`: `(Y, Z)` as functions of `th = t^{1/2}`.
pub(crate) fn ex1_segre(th: &Cs) -> Result<(Cs, Cs)> {
    let t = th.mul(th)?;
    let rt = th.mul(&sqrt(&aff(&t, qr(3, 4))?)?)?;
    let y = aff(&t, q(1))?.add(&rt)?;
    let z = aff(&t, qr(3, 4))?.sub(&rt.scale(&qr(1, 2)))?.div(&aff(&t, qr(1, 2))?)?;
    Ok((y, z))
}

/// Rank 2, `r = 1`.
pub(crate) fn ex2_verlinde(h: &Cs) -> Result<(Cs, Cs)> {
    let v = h.mul(h)?;
    let s4 = sqrt(&aff(&v, qr(1, 4))?)?;
    let g = aff(&v, q(1))?;
    let a = aff(&v, qr(1, 2))?.add(&h.mul(&s4)?)?.div(&g)?;
    let b = g.mul(&g.mul(&aff(&v, qr(1, 4))?)?.sub(&h.mul(&aff(&v, qr(1, 3))?)?.mul(&s4)?.scale(&qr(3, 2)))?)?;
    Ok((a, b))
}

/// Rank 2, `s = 3`.
pub(crate) fn ex2_segre(th: &Cs) -> Result<(Cs, Cs)> {
    let t = th.mul(th)?;
    let s4 = sqrt(&aff(&t, qr(-1, 4))?)?;
    let y = th.mul(&s4)?.add(&Series::constant(t.var(), Cyclo12::one(), None))?;
    let pre = aff(&t, qr(1, 2))?.div(&aff(&t, qr(-1, 2))?.pow_i(3)?)?;
    let inner = aff(&t, qr(-1, 4))?.mul(&aff(&t, qr(1, 2))?)?.sub(&th.mul(&s4)?.mul(&aff(&t, qr(-1, 6))?)?.scale(&qr(3, 2)))?;
    Ok((y, pre.mul(&inner)?))
}

/// Rank 3 closed forms: the four `A` products, the four `B` products, keyed by name.
/// `v` is given as a series in the working variable.
pub(crate) fn ex3_verlinde(v: &Cs) -> Result<BTreeMap<&'static str, Cs>> {
    let s49 = sqrt(&aff(v, qr(4, 9))?)?;
    let al1 = poly(v, &[q(2), qr(3, 2)])?;
    let be1 = v.mul(&s49)?.scale(&qr(3, 2));
    let ga1 = poly(v, &[q(0), q(6), qr(9, 2), q(1)])?;
    let de1 = poly(v, &[q(0), q(6), qr(9, 2)])?.mul(&s49)?;
    let al2 = poly(v, &[q(3), qr(4, 3)])?;
    let be2 = aff(v, q(1))?.mul(&s49)?;
    let ga2 = poly(v, &[q(0), q(6), qr(11, 3), qr(4, 9)])?;
    let de2 = poly(v, &[q(0), q(6), qr(8, 3)])?.mul(&s49)?;
    Ok(rank3_family(&al1, &be1, &ga1, &de1, &al2, &be2, &ga2, &de2, None)?
        .into_iter()
        .zip(["A", "A.A1.A2", "A.A1", "A.A2", "B", "B.B11.B12.B22", "B.B11", "B.B22"])
        .map(|(s, k)| (k, s))
        .collect())
}

pub(crate) fn ex3_segre(t: &Cs) -> Result<BTreeMap<&'static str, Cs>> {
    let s23 = sqrt(&aff(t, qr(2, 3))?)?;
    let s109 = sqrt(&aff(t, qr(10, 9))?)?;
    let a1 = s23.mul(&poly(t, &[q(2), qr(17, 6)])?)?;
    let b1 = t.mul(&s109)?.scale(&qr(3, 2));
    let c1 = poly(t, &[q(0), q(6), qr(25, 2), qr(20, 3)])?;
    let d1 = poly(t, &[q(0), q(6), qr(17, 2)])?.mul(&s23)?.mul(&s109)?;
    let a2 = poly(t, &[q(3), qr(10, 3)])?.mul(&s23)?;
    let b2 = poly(t, &[q(1), qr(5, 3)])?.mul(&s109)?;
    let c2 = poly(t, &[q(0), q(6), qr(35, 3), qr(50, 9)])?;
    let d2 = poly(t, &[q(0), q(6), qr(20, 3)])?.mul(&s23)?.mul(&s109)?;
    let den = aff(t, qr(2, 3))?.pow_rational(&qr(3, 2))?;
    Ok(rank3_family(&a1, &b1, &c1, &d1, &a2, &b2, &c2, &d2, Some(&den))?
        .into_iter()
        .zip(["Y", "Y.Y11.Y21", "Y.Y11", "Y.Y21", "Z", "Z.Z11.Z12.Z22", "Z.Z11", "Z.Z22"])
        .map(|(s, k)| (k, s))
        .collect())
}

/// `1/2 (a + b -+ sqrt(c + d))`, `1/2 (a - b +- sqrt(c - d))` for the first family and the
/// opposite sign pattern, divided by `den`, for the second.
#[allow(clippy::too_many_arguments)]
fn rank3_family(a1: &Cs, b1: &Cs, c1: &Cs, d1: &Cs, a2: &Cs, b2: &Cs, c2: &Cs, d2: &Cs, den: Option<&Cs>) -> Result<Vec<Cs>> {
    let half = qr(1, 2);
    let r1p = sqrt(&c1.add(d1)?)?;
    let r1m = sqrt(&c1.sub(d1)?)?;
    let r2p = sqrt(&c2.add(d2)?)?;
    let r2m = sqrt(&c2.sub(d2)?)?;
    let s1 = a1.add(b1)?;
    let t1 = a1.sub(b1)?;
    let s2 = a2.add(b2)?;
    let t2 = a2.sub(b2)?;
    let mut out = vec![s1.sub(&r1p)?, s1.add(&r1p)?, t1.add(&r1m)?, t1.sub(&r1m)?];
    let mut second = vec![s2.add(&r2p)?, s2.sub(&r2p)?, t2.sub(&r2m)?, t2.add(&r2m)?];
    if let Some(d) = den {
        second = second.into_iter().map(|x| x.div(d)).collect::<std::result::Result<_, _>>()?;
    }
    out.append(&mut second);
    Ok(out.into_iter().map(|x| x.scale(&half)).collect())
}

/// `T = t^{1/2}` truncated below `T^n`, and `t = T^2`.
fn tt(n: i64) -> (Cs, Cs) {
    let t = Series::gen("T").truncate_i(n);
    let t2 = t.mul(&t).expect("same variable");
    (t, t2)
}

/// Example 1 (rank 2, Verlinde twist -1, Segre twist 1) in `T = t^{1/2}`.
pub fn example1(order: i64) -> Result<BTreeMap<String, Series<Cyclo12>>> {
    let n = order + 1;
    let (th, t) = tt(n);
    let h = th.mul(&aff(&t, qr(1, 2))?.pow_rational(&qr(-1, 2))?)?;
    let (a, b) = ex1_verlinde(&h)?;
    let (y, z) = ex1_segre(&th)?;
    let w = aff(&t, qr(1, 2))?.invert()?;
    Ok(named([("A", a), ("B", b), ("Y", y), ("Z", z), ("W", w), ("v^(1/2)", h)]))
}

/// Example 2 (rank 2, Verlinde twist 1, Segre twist 3) in `T = t^{1/2}`.
pub fn example2(order: i64) -> Result<BTreeMap<String, Series<Cyclo12>>> {
    let n = order + 1;
    let (th, t) = tt(n);
    let h = th.mul(&aff(&t, qr(-1, 2))?.pow_rational(&qr(-1, 2))?)?;
    let (a, b) = ex2_verlinde(&h)?;
    let (y, z) = ex2_segre(&th)?;
    let w = aff(&t, qr(1, 2))?.invert()?;
    Ok(named([("A", a), ("B", b), ("Y", y), ("Z", z), ("W", w), ("v^(1/2)", h)]))
}

/// Example 3 (rank 3, Verlinde twist -2, Segre twist 1) in `T = t^{1/2}`. Precision is padded
/// for the square roots of series with valuation 2 and 4.
pub fn example3(order: i64) -> Result<BTreeMap<String, Series<Cyclo12>>> {
    let n = order + 1;
    let (_, t) = tt(n + 4);
    let v = t.div(&aff(&t, qr(2, 3))?)?;
    let mut out: BTreeMap<String, Cs> = BTreeMap::new();
    for (k, s) in ex3_verlinde(&v)?.into_iter().chain(ex3_segre(&t)?) {
        out.insert(k.into(), s.truncate_i(n));
    }
    out.insert("W".into(), aff(&t, qr(2, 3))?.pow_rational(&qr(-3, 2))?.truncate_i(n));
    Ok(out)
}

fn named<const N: usize>(items: [(&str, Cs); N]) -> BTreeMap<String, Cs> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
