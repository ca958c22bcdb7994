//! Rank 3 generating functions. The sums run over pairs `(a, b)` of SW classes with weight
//! `Z+^{ab} Z-^{(K-a)(K-b)}`, where `Z+-` are the roots of `Z^2 - e1 Z + e2`. Terms are
//! grouped with their partner `(K-a, K-b)` so only the symmetric functions `e1, e2` are needed.

use super::{assert_symmetric_laurent, at_y_one, lift, rationalize, ConjError, Result};
use crate::domain::{Coeff, Cyclo12, LaurentU};
use crate::qforms::{euler_product, lattice_theta, Lattice, LatticeThetaSpec};
use crate::rational::{fmt_q, q, qr, Q};
use crate::series::Series;
use crate::surfaces::{Rank3Term, SurfaceDescriptor};

/// Power sums `P_m = Z+^m + Z-^m` of the roots of `Z^2 - e1 Z + e2`.
#[derive(Clone, Debug)]
pub struct QuadraticRootData<C: Coeff> {
    pub e1: Series<C>,
    pub e2: Series<C>,
    sums: Vec<Series<C>>,
}

impl<C: Coeff> QuadraticRootData<C> {
    pub fn new(e1: Series<C>, e2: Series<C>, max_m: usize) -> Result<Self> {
        let two = Series::constant(e1.var(), C::from_q(&q(2)), e1.order());
        let mut sums = vec![two, e1.clone()];
        for m in 2..=max_m.max(1) {
            let next = e1.mul(&sums[m - 1])?.sub(&e2.mul(&sums[m - 2])?)?;
            sums.push(next);
        }
        Ok(QuadraticRootData { e1, e2, sums })
    }

    /// `P_m` for any integer `m`, using `P_{-m} = P_m / e2^m`.
    pub fn power_sum(&self, m: i64) -> Result<Series<C>> {
        let k = m.unsigned_abs() as usize;
        let p = self.sums.get(k).ok_or_else(|| ConjError::Pairing(format!("power sum {m} beyond table")))?;
        if m >= 0 {
            Ok(p.clone())
        } else {
            Ok(p.div(&self.e2.pow_i(k as i64)?)?)
        }
    }

    /// `Z+^p Z-^q + Z+^q Z-^p = e2^{min(p,q)} P_{|p-q|}`.
    pub fn pair_sum(&self, p: i64, qq: i64) -> Result<Series<C>> {
        Ok(self.e2.pow_i(p.min(qq))?.mul(&self.power_sum((p - qq).abs())?)?)
    }

    /// `(Z+ Z-)^p`.
    pub fn self_term(&self, p: i64) -> Result<Series<C>> {
        Ok(self.e2.pow_i(p)?)
    }
}

fn max_gap(terms: &[Rank3Term]) -> usize {
    terms.iter().map(|t| (t.p - t.q).unsigned_abs() as usize).max().unwrap_or(0)
}

/// `sum_{t in included} c_t Z+^{p_t} Z-^{q_t}` through partner grouping.
fn paired_sum<C: Coeff>(terms: &[Rank3Term], coeffs: &[Cyclo12], included: &[bool], roots: &QuadraticRootData<C>) -> Result<Series<C>> {
    let rational = |c: &Cyclo12, what: &str| c.rational().ok_or_else(|| ConjError::Pairing(format!("{what}: coefficient {c:?} is not rational")));
    let mut used = vec![false; terms.len()];
    let mut acc = Series::zero(roots.e1.var(), roots.e1.order());
    for (i, t) in terms.iter().enumerate() {
        if !included[i] || used[i] {
            continue;
        }
        let j = t.partner;
        let label = format!("terms {:?}/{:?}", t.classes, terms[j].classes);
        let part = if j == i {
            if t.p != t.q {
                return Err(ConjError::Pairing(format!("{label}: self-partnered term with p != q")));
            }
            roots.self_term(t.p)?.scale(&rational(&coeffs[i], &label)?)
        } else if included[j] {
            if used[j] {
                return Err(ConjError::Pairing(format!("{label}: partner consumed twice")));
            }
            if coeffs[j] != coeffs[i].conj() || terms[j].p != t.q || terms[j].q != t.p {
                return Err(ConjError::Pairing(format!("{label}: partner is not the conjugate term")));
            }
            let re = coeffs[i].add(&coeffs[i].conj()).scale(&qr(1, 2));
            if t.p != t.q && re != coeffs[i] {
                return Err(ConjError::Pairing(format!("{label}: antisymmetric part needs the individual roots")));
            }
            used[j] = true;
            roots.pair_sum(t.p, t.q)?.scale(&rational(&re, &label)?)
        } else {
            if t.p != t.q {
                return Err(ConjError::Pairing(format!("{label}: partner excluded and p != q")));
            }
            roots.self_term(t.p)?.scale(&rational(&coeffs[i], &label)?)
        };
        used[i] = true;
        acc = acc.add(&part)?;
    }
    if used.iter().zip(included).any(|(u, inc)| u != inc) {
        return Err(ConjError::Pairing("a term was consumed other than exactly once".into()));
    }
    Ok(acc)
}

fn eps_coeffs(terms: &[Rank3Term]) -> Vec<Cyclo12> {
    terms.iter().map(|t| Cyclo12::eps_pow(t.eps_exp).scale(&q(t.sw))).collect()
}

fn a2_dual(coset: (i64, i64), refined: bool, n: i64) -> Series<LaurentU> {
    lattice_theta(LatticeThetaSpec::new(Lattice::A2Dual, coset, refined).expect("catalogued coset"), n)
}

fn a2(coset: (i64, i64), n: i64) -> Series<LaurentU> {
    lattice_theta(LatticeThetaSpec::new(Lattice::A2, coset, false).expect("catalogued coset"), n)
}

/// `9 (1/(3 A))^chi (3 bar eta(x^6)^3 / T)^{K^2}` with `A = bar eta(x^2)^12` or its refinement.
fn rk3_prefactor<C: Coeff>(s: &SurfaceDescriptor, a: &Series<C>, t01: &Series<C>, n: i64) -> Result<Series<C>> {
    let e6 = lift::<C>(&euler_product("x", n, &q(1), 6, 3));
    let pa = a.scale(&q(3)).invert()?.pow_i(s.chi_o)?;
    let pb = e6.scale(&q(3)).div(t01)?.pow_i(s.k2)?;
    Ok(pa.mul(&pb)?.scale(&q(9)))
}

/// `Theta_{A2^v,(0,0)} / Theta_{A2^v,(0,1)}` at `y = 1`.
fn z_ratio(n: i64) -> Result<(Series<Q>, Series<Q>)> {
    let t00 = at_y_one(&a2_dual((0, 0), false, n))?;
    let t01 = at_y_one(&a2_dual((0, 1), false, n))?;
    Ok((t00.div(&t01)?, t01))
}

/// Rank 3 virtual Euler characteristics, coefficient of `x^vd`.
pub fn euler_rk3(s: &SurfaceDescriptor, c1: &str, order: i64) -> Result<Series<Q>> {
    let n = order + 1;
    let (z, t01) = z_ratio(n)?;
    let terms = s.sw_pairs_rank3(c1)?;
    let roots = QuadraticRootData::new(z.mul(&z)?.scale(&q(4)), z.scale(&q(4)), max_gap(&terms))?;
    let sum = paired_sum(&terms, &eps_coeffs(&terms), &vec![true; terms.len()], &roots)?;
    let pre = rk3_prefactor(s, &euler_product("x", n, &q(1), 2, 12), &t01, n)?;
    Ok(pre.mul(&sum)?.truncate_i(n))
}

/// The same series from the explicit roots `Z+- = 2 Z^2 +- 2 sqrt(Z^4 - Z)` over `Q(zeta_12)`,
/// with the root whose leading coefficient is `+3 sqrt 3` taken for `Z+`.
pub fn euler_rk3_explicit(s: &SurfaceDescriptor, c1: &str, order: i64) -> Result<Series<Q>> {
    let n = order + 1;
    // the square root of a valuation-2 series loses one term of precision
    let (z, t01) = z_ratio(n + 1)?;
    let z = lift::<Cyclo12>(&z);
    let z2 = z.mul(&z)?;
    let root = z2.mul(&z2)?.sub(&z)?.pow_rational(&qr(1, 2))?;
    let zp = z2.add(&root)?.scale(&q(2));
    let zm = z2.sub(&root)?.scale(&q(2));
    let terms = s.sw_pairs_rank3(c1)?;
    let mut sum = Series::zero("x", zp.order());
    for (t, c) in terms.iter().zip(eps_coeffs(&terms)) {
        sum = sum.add(&zp.pow_i(t.p)?.mul(&zm.pow_i(t.q)?)?.mul_c(&c))?;
    }
    let sum = rationalize(&sum)?;
    let pre = rk3_prefactor(s, &euler_product("x", n + 1, &q(1), 2, 12), &t01, n + 1)?;
    Ok(pre.mul(&sum)?.truncate_i(n))
}

/// Rank 3 normalized virtual chi_{-y}-genera, Laurent in `u = y^{1/2}`.
pub fn chiy_rk3(s: &SurfaceDescriptor, c1: &str, order: i64) -> Result<Series<LaurentU>> {
    let n = order + 1;
    let t00 = a2_dual((0, 0), true, n);
    let t01 = a2_dual((0, 1), true, n);
    let zy = t00.div(&t01)?;
    let z1 = lift::<LaurentU>(&z_ratio(n)?.0);
    let e1 = zy.mul(&zy)?.add(&zy.mul(&z1)?.scale(&q(3)))?;
    let e2 = zy.add(&z1.scale(&q(3)))?;
    let terms = s.sw_pairs_rank3(c1)?;
    let roots = QuadraticRootData::new(e1, e2, max_gap(&terms))?;
    let sum = paired_sum(&terms, &eps_coeffs(&terms), &vec![true; terms.len()], &roots)?;
    let up = euler_product("x", n, &LaurentU::y_pow(q(1), 1), 2, 1);
    let dn = euler_product("x", n, &LaurentU::y_pow(q(1), -1), 2, 1);
    let a = up.mul(&dn)?.mul(&lift(&euler_product("x", n, &q(1), 2, 10)))?;
    let out = rk3_prefactor(s, &a, &t01, n)?.mul(&sum)?.truncate_i(n);
    assert_symmetric_laurent(&out)?;
    Ok(out)
}

/// Rank 3 monopole contribution in `q`, exact below `q^order`. Only pairs with
/// `c1 + a - b = 0 mod 3` contribute.
pub fn mono_rk3(s: &SurfaceDescriptor, c1: &str, order: i64) -> Result<Series<Q>> {
    let terms = s.sw_pairs_rank3(c1)?;
    let want = q(order);
    let mut pad = 2 * s.chi_o.abs() + s.k2.abs() + 4;
    for _ in 0..4 {
        let nb = order + pad;
        let half = qr(1, 2);
        let t00 = at_y_one(&a2((0, 0), 2 * nb))?.dilate(&half)?.with_var("q");
        let t10 = at_y_one(&a2((1, 0), 2 * nb))?.dilate(&half)?.with_var("q");
        let w = t00.div(&t10)?;
        let roots = QuadraticRootData::new(w.mul(&w)?.scale(&q(4)), w.scale(&q(4)), max_gap(&terms))?;
        let coeffs: Vec<Cyclo12> = terms.iter().map(|t| Cyclo12::from_q(&q(t.sw))).collect();
        let included: Vec<bool> = terms.iter().map(|t| t.delta_mod3).collect();
        let sum = paired_sum(&terms, &coeffs, &included, &roots)?;
        // Delta(q^3)^{1/2} and eta^3
        let d = euler_product("q", nb, &q(1), 3, 12).shift(&qr(3, 2));
        let eta3 = euler_product("q", nb, &q(1), 1, 3).shift(&qr(1, 8));
        let pre = d.scale(&q(3)).invert()?.pow_i(s.chi_o)?.mul(&t10.div(&eta3)?.pow_i(-s.k2)?)?;
        let out = pre.mul(&sum)?;
        if out.order().is_none_or(|o| o >= want) {
            return Ok(out.truncate(&want));
        }
        pad *= 2;
    }
    Err(ConjError::Order(format!("monopole series could not reach q^{}", fmt_q(&want))))
}
