//! Truncated Puiseux/Laurent series in one variable over a [`Coeff`] domain.
//!
//! Exponents live on the lattice `(1/D) Z` where `D = exp_den`; they are stored as integer
//! numerators over `D`. `order` is the truncation bound: coefficients at exponents `>= order`
//! are unknown. `order = None` marks an exact (finite) series. Stored coefficients are
//! nonzero and strictly below the order, and `D` is always reduced to the smallest lattice
//! containing every stored exponent and the order.
//!
//! An empty variable name is used only by exact constants, which combine with any variable.

use crate::domain::Coeff;
use crate::rational::{fmt_q, parse_q, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde_json::Value;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("variable mismatch: {0} vs {1}")]
    VarMismatch(String, String),
    #[error("leading coefficient is not a unit")]
    NonUnit,
    #[error("zero series has no inverse")]
    ZeroDivision,
    #[error("leading coefficient has no {0}-th power in the domain")]
    NoRoot(String),
    #[error("exponent lattice violation: {0}")]
    Lattice(String),
    #[error("composition needs an image of positive valuation")]
    NonPositiveValuation,
    #[error("coefficient at exponent {exp} requested beyond truncation order {order}")]
    BeyondOrder { exp: String, order: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed series record: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

#[derive(Clone)]
pub struct Series<C: Coeff> {
    var: Arc<str>,
    den: i64,
    terms: BTreeMap<i64, C>,
    order: Option<i64>,
}

impl<C: Coeff> std::fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = if self.var.is_empty() { "_" } else { &self.var };
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?}){v}^{}", fmt_exp(*k, self.den))?;
        }
        if first {
            write!(f, "0")?;
        }
        match self.order {
            Some(o) => write!(f, " + O({v}^{})", fmt_exp(o, self.den)),
            None => Ok(()),
        }
    }
}

fn fmt_exp(k: i64, d: i64) -> String {
    if d == 1 {
        k.to_string()
    } else {
        let g = k.gcd(&d);
        format!("{}/{}", k / g, d / g)
    }
}

impl<C: Coeff> PartialEq for Series<C> {
    fn eq(&self, o: &Self) -> bool {
        (self.var == o.var || self.var.is_empty() || o.var.is_empty())
            && self.den == o.den
            && self.order == o.order
            && self.terms == o.terms
    }
}

fn q_parts(e: &Q) -> (i64, i64) {
    (e.numer().to_i64().expect("exponent numerator overflow"), e.denom().to_i64().expect("exponent denominator overflow"))
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl<C: Coeff> Series<C> {
    fn raw(var: Arc<str>, den: i64, terms: BTreeMap<i64, C>, order: Option<i64>) -> Self {
        let mut s = Series { var, den, terms, order };
        if let Some(o) = s.order {
            s.terms.retain(|&k, c| k < o && !c.is_zero());
        } else {
            s.terms.retain(|_, c| !c.is_zero());
        }
        s.normalize_den();
        s
    }

    fn normalize_den(&mut self) {
        let mut g = self.den;
        for &k in self.terms.keys() {
            g = g.gcd(&k);
            if g == 1 {
                return;
            }
        }
        if let Some(o) = self.order {
            g = g.gcd(&o);
        }
        if g > 1 {
            self.den /= g;
            self.terms = std::mem::take(&mut self.terms).into_iter().map(|(k, c)| (k / g, c)).collect();
            self.order = self.order.map(|o| o / g);
        }
    }

    /// Re-express on the lattice `(1/d) Z`; `d` must be a multiple of `exp_den`.
    fn on_den(&self, d: i64) -> (BTreeMap<i64, C>, Option<i64>) {
        let f = d / self.den;
        debug_assert_eq!(f * self.den, d);
        (self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect(), self.order.map(|o| o * f))
    }

    fn join_var(&self, o: &Self) -> Result<Arc<str>> {
        if self.var == o.var || o.var.is_empty() {
            Ok(self.var.clone())
        } else if self.var.is_empty() {
            Ok(o.var.clone())
        } else {
            Err(SeriesError::VarMismatch(self.var.to_string(), o.var.to_string()))
        }
    }

    // ---- constructors ----

    /// Series from `(exponent, coefficient)` pairs, truncated at `order` (`None` = exact).
    pub fn from_terms<I: IntoIterator<Item = (Q, C)>>(var: &str, terms: I, order: Option<Q>) -> Self {
        let items: Vec<(Q, C)> = terms.into_iter().collect();
        let mut d: i64 = 1;
        for (e, _) in &items {
            d = d.lcm(&q_parts(e).1);
        }
        if let Some(o) = &order {
            d = d.lcm(&q_parts(o).1);
        }
        let mut m: BTreeMap<i64, C> = BTreeMap::new();
        for (e, c) in items {
            let (n, dd) = q_parts(&e);
            let k = n * (d / dd);
            let slot = m.entry(k).or_insert_with(C::zero);
            *slot = slot.add(&c);
        }
        let ord = order.map(|o| {
            let (n, dd) = q_parts(&o);
            n * (d / dd)
        });
        Self::raw(var.into(), d, m, ord)
    }

    /// Integer-exponent series `sum c_k var^k` for `k = 0..len`, truncated at `order`.
    pub fn from_coeffs(var: &str, coeffs: Vec<C>, order: Option<i64>) -> Self {
        let m = coeffs.into_iter().enumerate().map(|(k, c)| (k as i64, c)).collect();
        Self::raw(var.into(), 1, m, order)
    }

    pub fn zero(var: &str, order: Option<Q>) -> Self {
        Self::from_terms(var, std::iter::empty(), order)
    }

    pub fn constant(var: &str, c: C, order: Option<Q>) -> Self {
        Self::from_terms(var, [(Q::zero(), c)], order)
    }

    pub fn one(var: &str) -> Self {
        Self::constant(var, C::one(), None)
    }

    pub fn monomial(var: &str, c: C, e: Q) -> Self {
        Self::from_terms(var, [(e, c)], None)
    }

    /// The variable itself.
    pub fn gen(var: &str) -> Self {
        Self::monomial(var, C::one(), Q::one())
    }

    // ---- accessors ----

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn exp_den(&self) -> i64 {
        self.den
    }

    pub fn order(&self) -> Option<Q> {
        self.order.map(|o| Q::new(o.into(), self.den.into()))
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    pub fn with_var(&self, var: &str) -> Self {
        Series { var: var.into(), ..self.clone() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Q, &C)> + '_ {
        self.terms.iter().map(move |(k, c)| (Q::new((*k).into(), self.den.into()), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero_known(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent with a nonzero stored coefficient.
    pub fn valuation(&self) -> Option<Q> {
        self.terms.keys().next().map(|&k| Q::new(k.into(), self.den.into()))
    }

    /// Coefficient at exponent `e`; an error at or beyond the truncation order.
    pub fn coeff(&self, e: &Q) -> Result<C> {
        if let Some(o) = self.order() {
            if *e >= o {
                return Err(SeriesError::BeyondOrder { exp: fmt_q(e), order: fmt_q(&o) });
            }
        }
        let (n, d) = q_parts(e);
        if self.den % d != 0 {
            return Ok(C::zero());
        }
        Ok(self.terms.get(&(n * (self.den / d))).cloned().unwrap_or_else(C::zero))
    }

    /// Coefficient at an integer exponent.
    pub fn coeff_i(&self, k: i64) -> Result<C> {
        self.coeff(&Q::from_integer(k.into()))
    }

    /// Dense integer-exponent coefficients `0..n`; errors if the lattice is fractional
    /// within that range or `n` exceeds the order.
    pub fn dense(&self, n: usize) -> Result<Vec<C>> {
        (0..n as i64).map(|k| self.coeff_i(k)).collect()
    }

    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> Series<D> {
        Series::raw(self.var.clone(), self.den, self.terms.iter().map(|(k, c)| (*k, f(c))).collect(), self.order)
    }

    // ---- ring operations ----

    pub fn truncate(&self, order: &Q) -> Self {
        let o = min_opt(self.order.map(|x| x * q_parts(order).1), Some(q_parts(order).0 * self.den));
        let d = self.den * q_parts(order).1;
        let (t, _) = self.on_den(d);
        Self::raw(self.var.clone(), d, t, o)
    }

    pub fn truncate_i(&self, order: i64) -> Self {
        self.truncate(&Q::from_integer(order.into()))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let var = self.join_var(o)?;
        let d = self.den.lcm(&o.den);
        let (mut a, oa) = self.on_den(d);
        let (b, ob) = o.on_den(d);
        for (k, c) in b {
            match a.get_mut(&k) {
                Some(x) => *x = x.add(&c),
                None => {
                    a.insert(k, c);
                }
            }
        }
        Ok(Self::raw(var, d, a, min_opt(oa, ob)))
    }

    pub fn neg(&self) -> Self {
        Series { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: &Q) -> Self {
        Self::raw(self.var.clone(), self.den, self.terms.iter().map(|(k, c)| (*k, c.scale(a))).collect(), self.order)
    }

    pub fn mul_c(&self, a: &C) -> Self {
        Self::raw(self.var.clone(), self.den, self.terms.iter().map(|(k, c)| (*k, c.mul(a))).collect(), self.order)
    }

    /// Multiply by `var^e`.
    pub fn shift(&self, e: &Q) -> Self {
        let (n, dd) = q_parts(e);
        let d = self.den.lcm(&dd);
        let s = n * (d / dd);
        let (t, o) = self.on_den(d);
        Self::raw(self.var.clone(), d, t.into_iter().map(|(k, c)| (k + s, c)).collect(), o.map(|x| x + s))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let var = self.join_var(o)?;
        let d = self.den.lcm(&o.den);
        let (a, oa) = self.on_den(d);
        let (b, ob) = o.on_den(d);
        let va = a.keys().next().copied().or(oa);
        let vb = b.keys().next().copied().or(ob);
        let order = match (va, vb) {
            (Some(va), Some(vb)) => min_opt(oa.map(|x| x + vb), ob.map(|x| x + va)),
            // one factor is an exact zero
            _ => return Ok(Self::raw(var, d, BTreeMap::new(), None)),
        };
        let (Some(lo_a), Some(lo_b)) = (a.keys().next().copied(), b.keys().next().copied()) else {
            return Ok(Self::raw(var, d, BTreeMap::new(), order));
        };
        let hi_a = *a.keys().next_back().unwrap();
        let hi_b = *b.keys().next_back().unwrap();
        let lo = lo_a + lo_b;
        let mut hi = hi_a + hi_b;
        if let Some(o) = order {
            hi = hi.min(o - 1);
        }
        if hi < lo {
            return Ok(Self::raw(var, d, BTreeMap::new(), order));
        }
        let mut acc: Vec<Option<C>> = vec![None; (hi - lo + 1) as usize];
        let bv: Vec<(i64, &C)> = b.iter().map(|(k, c)| (*k, c)).collect();
        for (ka, ca) in &a {
            if ka + lo_b > hi {
                break;
            }
            for (kb, cb) in &bv {
                let k = ka + kb;
                if k > hi {
                    break;
                }
                let p = ca.mul(cb);
                let slot = &mut acc[(k - lo) as usize];
                *slot = Some(match slot.take() {
                    Some(x) => x.add(&p),
                    None => p,
                });
            }
        }
        let terms = acc.into_iter().enumerate().filter_map(|(i, c)| c.map(|c| (lo + i as i64, c))).collect();
        Ok(Self::raw(var, d, terms, order))
    }

    pub fn pow_i(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.invert()?.pow_i(-e);
        }
        let mut r = Self::one(&self.var);
        let mut b = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b)?;
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(r)
    }

    /// Leading term data `(c, v, h)` with `self = c var^v (1 + h)`; exponents are numerators.
    fn unit_split(&self) -> Result<(C, i64, Vec<C>, Option<i64>)> {
        let (&v, c) = self.terms.iter().next().ok_or(SeriesError::ZeroDivision)?;
        let cinv = c.inv().ok_or(SeriesError::NonUnit)?;
        let rel = self.order.map(|o| o - v);
        let len = match rel {
            Some(r) => r as usize,
            None => (*self.terms.keys().next_back().unwrap() - v + 1) as usize,
        };
        let mut h = vec![C::zero(); len];
        for (k, x) in &self.terms {
            h[(k - v) as usize] = x.mul(&cinv);
        }
        Ok((c.clone(), v, h, rel))
    }

    fn is_monomial(&self) -> bool {
        self.order.is_none() && self.terms.len() == 1
    }

    pub fn invert(&self) -> Result<Self> {
        let (c, v, h, rel) = self.unit_split()?;
        let cinv = c.inv().ok_or(SeriesError::NonUnit)?;
        if self.is_monomial() {
            return Ok(Self::raw(self.var.clone(), self.den, [(-v, cinv)].into(), None));
        }
        let Some(r) = rel else {
            return Err(SeriesError::Precondition("inverse of an exact non-monomial series needs a truncation order".into()));
        };
        let n = r as usize;
        let mut b: Vec<C> = Vec::with_capacity(n);
        for m in 0..n {
            if m == 0 {
                b.push(C::one());
                continue;
            }
            let mut acc = C::zero();
            for k in 1..=m.min(h.len() - 1) {
                if !h[k].is_zero() {
                    acc = acc.add(&h[k].mul(&b[m - k]));
                }
            }
            b.push(acc.neg());
        }
        let terms = b.into_iter().enumerate().map(|(i, x)| (i as i64 - v, x.mul(&cinv))).collect();
        Ok(Self::raw(self.var.clone(), self.den, terms, Some(r - v)))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.invert()?)
    }

    /// `self^e` for rational `e` via the binomial series of the unit part.
    pub fn pow_rational(&self, e: &Q) -> Result<Self> {
        if e.is_integer() && self.order.is_none() && !e.is_negative() {
            return self.pow_i(e.to_integer().to_i64().unwrap());
        }
        let (c, v, h, rel) = self.unit_split()?;
        let ce = c.root(e).ok_or_else(|| SeriesError::NoRoot(fmt_q(e)))?;
        // new leading exponent v*e/den on a refined lattice
        let ve = Q::new(BigInt::from(v), BigInt::from(self.den)) * e;
        let (ven, ved) = q_parts(&ve);
        let d = self.den.lcm(&ved);
        let f = d / self.den;
        let lead = ven * (d / ved);
        if self.is_monomial() {
            return Ok(Self::raw(self.var.clone(), d, [(lead, ce)].into(), None));
        }
        let Some(r) = rel else {
            return Err(SeriesError::Precondition("non-integer power of an exact series needs a truncation order".into()));
        };
        let n = r as usize;
        let mut g: Vec<C> = Vec::with_capacity(n);
        let e1 = e + Q::one();
        for m in 0..n {
            if m == 0 {
                g.push(C::one());
                continue;
            }
            let mut acc = C::zero();
            for k in 1..=m.min(h.len() - 1) {
                if h[k].is_zero() {
                    continue;
                }
                let w = &e1 * Q::from_integer((k as i64).into()) - Q::from_integer((m as i64).into());
                if !w.is_zero() {
                    acc = acc.add(&h[k].mul(&g[m - k]).scale(&w));
                }
            }
            g.push(acc.scale(&Q::new(BigInt::from(1), BigInt::from(m as i64))));
        }
        let terms = g.into_iter().enumerate().map(|(i, x)| (lead + i as i64 * f, x.mul(&ce))).collect();
        Ok(Self::raw(self.var.clone(), d, terms, Some(lead + r * f)))
    }

    /// Formal exponential; needs positive valuation and a finite order.
    pub fn exp(&self) -> Result<Self> {
        if self.terms.keys().next().is_some_and(|&k| k <= 0) {
            return Err(SeriesError::Precondition("exp needs positive valuation".into()));
        }
        let Some(n) = self.order else {
            if self.terms.is_empty() {
                return Ok(Self::one(&self.var));
            }
            return Err(SeriesError::Precondition("exp of an exact series needs a truncation order".into()));
        };
        if n <= 0 {
            return Ok(Self::raw(self.var.clone(), self.den, BTreeMap::new(), Some(n)));
        }
        let f: Vec<C> = (0..n).map(|k| self.terms.get(&k).cloned().unwrap_or_else(C::zero)).collect();
        let mut g: Vec<C> = vec![C::one()];
        for m in 1..n as usize {
            let mut acc = C::zero();
            for k in 1..=m {
                if !f[k].is_zero() {
                    acc = acc.add(&f[k].mul(&g[m - k]).scale(&Q::from_integer((k as i64).into())));
                }
            }
            g.push(acc.scale(&Q::new(BigInt::from(1), BigInt::from(m as i64))));
        }
        let terms = g.into_iter().enumerate().map(|(i, x)| (i as i64, x)).collect();
        Ok(Self::raw(self.var.clone(), self.den, terms, Some(n)))
    }

    /// Formal logarithm; needs constant term exactly one and a finite order.
    pub fn log(&self) -> Result<Self> {
        if self.terms.keys().next().is_some_and(|&k| k < 0) || !self.terms.get(&0).is_some_and(|c| c.is_one()) {
            return Err(SeriesError::Precondition("log needs constant term 1".into()));
        }
        let Some(n) = self.order else {
            if self.terms.len() == 1 {
                return Ok(Self::raw(self.var.clone(), 1, BTreeMap::new(), None));
            }
            return Err(SeriesError::Precondition("log of an exact series needs a truncation order".into()));
        };
        let f: Vec<C> = (0..n).map(|k| self.terms.get(&k).cloned().unwrap_or_else(C::zero)).collect();
        let mut l: Vec<C> = vec![C::zero()];
        for m in 1..n as usize {
            let mut acc = f[m].scale(&Q::from_integer((m as i64).into()));
            for k in 1..m {
                if !l[k].is_zero() && !f[m - k].is_zero() {
                    acc = acc.sub(&l[k].mul(&f[m - k]).scale(&Q::from_integer((k as i64).into())));
                }
            }
            l.push(acc.scale(&Q::new(BigInt::from(1), BigInt::from(m as i64))));
        }
        let terms = l.into_iter().enumerate().map(|(i, x)| (i as i64, x)).collect();
        Ok(Self::raw(self.var.clone(), self.den, terms, Some(n)))
    }

    /// `var * d/dvar`.
    pub fn theta_deriv(&self) -> Self {
        let d = Q::new(BigInt::from(1), BigInt::from(self.den));
        Self::raw(
            self.var.clone(),
            self.den,
            self.terms.iter().map(|(k, c)| (*k, c.scale(&(Q::from_integer((*k).into()) * &d)))).collect(),
            self.order,
        )
    }

    /// `self(c var^k)`, `k > 0` rational. Non-integer exponents need `c^e` in the domain.
    pub fn subst_monomial(&self, c: &C, k: &Q) -> Result<Self> {
        if !k.is_positive() {
            return Err(SeriesError::NonPositiveValuation);
        }
        let kd = Q::new(BigInt::from(1), BigInt::from(self.den)) * k;
        let (kn, kdd) = q_parts(&kd);
        let mut terms: BTreeMap<i64, C> = BTreeMap::new();
        for (e, x) in &self.terms {
            let ee = Q::new(BigInt::from(*e), BigInt::from(self.den));
            let ce = if c.is_one() { C::one() } else { c.root(&ee).ok_or_else(|| SeriesError::NoRoot(fmt_q(&ee)))? };
            terms.insert(e * kn, x.mul(&ce));
        }
        Ok(Self::raw(self.var.clone(), kdd, terms, self.order.map(|o| o * kn)))
    }

    /// `self(var^k)`.
    pub fn dilate(&self, k: &Q) -> Result<Self> {
        self.subst_monomial(&C::one(), k)
    }

    /// `self(-var)`; integer exponents only.
    pub fn flip_sign(&self) -> Result<Self> {
        if self.den != 1 {
            return Err(SeriesError::Lattice("sign flip on fractional exponents".into()));
        }
        self.subst_monomial(&C::one().neg(), &Q::one())
    }

    /// Composition `self(image)`; the result lives in the image's variable.
    pub fn substitute(&self, image: &Self) -> Result<Self> {
        if image.is_monomial() {
            let (&k, c) = image.terms.iter().next().unwrap();
            let e = Q::new(k.into(), image.den.into());
            return Ok(self.subst_monomial(c, &e)?.with_var(&image.var));
        }
        if self.den != 1 {
            return Err(SeriesError::Lattice("composition needs integer exponents in the outer series".into()));
        }
        let vb = image.terms.keys().next().copied().or(image.order).ok_or(SeriesError::NonPositiveValuation)?;
        if vb <= 0 {
            return Err(SeriesError::NonPositiveValuation);
        }
        let Some(&va) = self.terms.keys().next() else {
            let o = self.order.map(|o| Q::from_integer(o.into()) * Q::new(vb.into(), image.den.into()));
            return Ok(Series::zero(&image.var, o));
        };
        // order on the image lattice
        let from_outer = self.order.map(|o| o * vb);
        // a constant outer term does not see the image's truncation
        let ve = if va == 0 { 1 } else { va };
        let from_inner = image.order.map(|ob| ve * vb + ob - vb);
        let order = min_opt(from_outer, from_inner);
        let ordq = order.map(|o| Q::new(o.into(), image.den.into()));
        let trunc = |s: Self| match &ordq {
            Some(o) => s.truncate(o),
            None => s,
        };
        let img = trunc(image.clone());
        let mut acc = Series::zero(&image.var, ordq.clone());
        let mut pw = trunc(img.pow_i(va)?);
        let hi = *self.terms.keys().next_back().unwrap();
        for e in va..=hi {
            if let Some(c) = self.terms.get(&e) {
                acc = acc.add(&pw.mul_c(c))?;
            }
            if e < hi {
                pw = trunc(pw.mul(&img)?);
                if ordq.is_some() && pw.terms.is_empty() {
                    break;
                }
            }
        }
        Ok(trunc(acc).with_var(&image.var))
    }

    /// Compositional inverse of `c_1 var + ...` (integer exponents, unit `c_1`).
    pub fn revert(&self) -> Result<Self> {
        if self.den != 1 {
            return Err(SeriesError::Lattice("reversion needs integer exponents".into()));
        }
        if self.terms.keys().next().is_some_and(|&k| k < 1) {
            return Err(SeriesError::Precondition("reversion needs valuation >= 1".into()));
        }
        let c1 = self.terms.get(&1).ok_or(SeriesError::NonUnit)?;
        c1.inv().ok_or(SeriesError::NonUnit)?;
        let n = match self.order {
            Some(n) => n,
            None if self.terms.len() == 1 => {
                return Ok(Self::raw(self.var.clone(), 1, [(1, c1.inv().unwrap())].into(), None));
            }
            None => return Err(SeriesError::Precondition("reversion of an exact series needs a truncation order".into())),
        };
        // phi = z / a(z), known modulo z^(n-1)
        let a_over_z = self.shift(&-Q::one());
        let phi = a_over_z.invert()?;
        let mut out: BTreeMap<i64, C> = BTreeMap::new();
        let mut pw = Self::one(&self.var);
        for m in 1..n {
            pw = pw.mul(&phi)?;
            let c = pw.coeff_i(m - 1)?;
            out.insert(m, c.scale(&Q::new(BigInt::from(1), BigInt::from(m))));
        }
        Ok(Self::raw(self.var.clone(), 1, out, Some(n)))
    }

    /// Agreement on all exponents below both orders.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let d = self.den.lcm(&o.den);
        let (a, oa) = self.on_den(d);
        let (b, ob) = o.on_den(d);
        let lim = min_opt(oa, ob);
        let keys: std::collections::BTreeSet<i64> = a.keys().chain(b.keys()).copied().collect();
        keys.into_iter().filter(|k| lim.is_none_or(|l| *k < l)).all(|k| {
            let z = C::zero();
            a.get(&k).unwrap_or(&z) == b.get(&k).unwrap_or(&z)
        })
    }

    /// The record `{variable, exp_den, order, terms: [{exp, coeff}]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(e, c)| serde_json::json!({ "exp": fmt_q(&e), "coeff": c.to_json() }))
            .collect();
        serde_json::json!({
            "variable": self.var.to_string(),
            "exp_den": self.den,
            "order": match self.order() { Some(o) => fmt_q(&o), None => "inf".to_string() },
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let err = |m: &str| SeriesError::Parse(m.to_string());
        let var = v.get("variable").and_then(|x| x.as_str()).ok_or_else(|| err("variable"))?;
        let den = v.get("exp_den").and_then(|x| x.as_i64()).ok_or_else(|| err("exp_den"))?;
        let ord = v.get("order").and_then(|x| x.as_str()).ok_or_else(|| err("order"))?;
        let order = if ord == "inf" { None } else { Some(parse_q(ord).ok_or_else(|| err("order value"))?) };
        let mut terms = Vec::new();
        for t in v.get("terms").and_then(|x| x.as_array()).ok_or_else(|| err("terms"))? {
            let e = t.get("exp").and_then(|x| x.as_str()).and_then(parse_q).ok_or_else(|| err("exp"))?;
            let c = t.get("coeff").and_then(C::from_json).ok_or_else(|| err("coeff"))?;
            terms.push((e, c));
        }
        let s = Self::from_terms(var, terms, order);
        if s.den != den && den % s.den != 0 {
            return Err(err("exp_den inconsistent with exponents"));
        }
        Ok(s)
    }
}

/// Nested series: series coefficients for multi-variable objects such as lifts in p over
/// (q, y). Variable clashes inside ring operations are programming errors.
impl<C: Coeff> Coeff for Series<C> {
    fn zero() -> Self {
        Series::raw("".into(), 1, BTreeMap::new(), None)
    }
    fn one() -> Self {
        Series::raw("".into(), 1, [(0, C::one())].into(), None)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.order.is_none()
    }
    fn is_one(&self) -> bool {
        self.order.is_none() && self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }
    fn add(&self, o: &Self) -> Self {
        Series::add(self, o).expect("nested series variable mismatch")
    }
    fn neg(&self) -> Self {
        Series::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        Series::mul(self, o).expect("nested series variable mismatch")
    }
    fn inv(&self) -> Option<Self> {
        self.invert().ok()
    }
    fn from_q(a: &Q) -> Self {
        Series::raw("".into(), 1, [(0, C::from_q(a))].into(), None)
    }
    fn scale(&self, a: &Q) -> Self {
        Series::scale(self, a)
    }
    fn to_json(&self) -> Value {
        Series::to_json(self)
    }
    fn from_json(v: &Value) -> Option<Self> {
        Series::from_json(v).ok()
    }
}

/// Residue in t (coefficient of t^{-1}) of a t-series.
pub fn residue_t<C: Coeff>(f: &Series<C>) -> Result<C> {
    f.coeff(&-Q::one())
}
