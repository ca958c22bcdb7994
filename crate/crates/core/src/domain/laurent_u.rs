//! Rational functions in u = y^{1/2} over Q.
//!
//! Stored as `u^shift * num(u) / den(u)` with `num(0) != 0`, `den(0) = 1` and
//! `gcd(num, den) = 1`. Laurent polynomials are exactly the values with `den = 1`;
//! zero is `shift = 0, num = 0, den = 1`.

use super::Coeff;
use crate::poly::Poly;
use crate::rational::{fmt_q, parse_q, pow_q, to_i64, Q};

use serde_json::{Map, Value};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentU {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl std::fmt::Debug for LaurentU {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "u^{}*({:?})", self.shift, self.num)?;
        if !self.den.is_one() {
            write!(f, "/({:?})", self.den)?;
        }
        Ok(())
    }
}

impl LaurentU {
    fn build(shift: i64, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return <Self as Coeff>::zero();
        }
        let vn = num.low_degree().unwrap();
        let vd = den.low_degree().unwrap();
        let mut num = num.unshift(vn);
        let mut den = den.unshift(vd);
        let shift = shift + vn as i64 - vd as i64;
        if den.degree() != Some(0) {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g).unwrap();
                den = den.div_exact(&g).unwrap();
            }
        }
        let c = den.coeff(0);
        if !c.is_one() {
            let ci = c.recip();
            num = num.scale(&ci);
            den = den.scale(&ci);
        }
        LaurentU { shift, num, den }
    }

    /// `c u^k`.
    pub fn monomial(c: Q, k: i64) -> Self {
        Self::build(k, Poly::constant(c), Poly::one())
    }

    /// `c y^k = c u^{2k}`.
    pub fn y_pow(c: Q, k: i64) -> Self {
        Self::monomial(c, 2 * k)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Q)>>(it: I) -> Self {
        let mut m: BTreeMap<i64, Q> = BTreeMap::new();
        for (k, c) in it {
            *m.entry(k).or_insert_with(Q::zero) += c;
        }
        m.retain(|_, c| !c.is_zero());
        let Some((&lo, _)) = m.iter().next() else {
            return <Self as Coeff>::zero();
        };
        let hi = *m.keys().next_back().unwrap();
        let mut c = vec![Q::zero(); (hi - lo + 1) as usize];
        for (k, v) in m {
            c[(k - lo) as usize] = v;
        }
        Self::build(lo, Poly::from_coeffs(c), Poly::one())
    }

    /// General rational function `n(u)/d(u)`, both given as Laurent term lists.
    pub fn ratio(n: &LaurentU, d: &LaurentU) -> Option<Self> {
        Some(n.mul(&d.inv()?))
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Terms `u^k -> c` of a Laurent value; `None` if the value is not Laurent.
    pub fn terms(&self) -> Option<BTreeMap<i64, Q>> {
        if !self.is_laurent() {
            return None;
        }
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.shift + i as i64, c.clone()))
                .collect(),
        )
    }

    pub fn coeff_u(&self, k: i64) -> Option<Q> {
        if !self.is_laurent() {
            return None;
        }
        let i = k - self.shift;
        Some(if i < 0 { Q::zero() } else { self.num.coeff(i as usize) })
    }

    /// Value at u = w (y = w^2).
    pub fn eval(&self, w: &Q) -> Option<Q> {
        let d = self.den.eval(w);
        if d.is_zero() || (w.is_zero() && self.shift < 0) {
            return None;
        }
        Some(crate::rational::pow_qi(w, self.shift) * self.num.eval(w) / d)
    }

    /// Value at y = 1.
    pub fn at_one(&self) -> Option<Q> {
        self.eval(&Q::one())
    }

    /// f(1/u).
    pub fn invert_u(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let rev = |p: &Poly, d: usize| Poly::from_coeffs((0..=d).rev().map(|i| p.coeff(i)).collect());
        Self::build(-self.shift - dn as i64 + dd as i64, rev(&self.num, dn), rev(&self.den, dd))
    }

    /// f(-u), i.e. y^{1/2} -> -y^{1/2}.
    pub fn negate_u(&self) -> Self {
        let s = if self.shift.rem_euclid(2) == 1 { -Q::one() } else { Q::one() };
        Self::build(self.shift, self.num.reflect().scale(&s), self.den.reflect())
    }

    /// f(u^k) for k > 0 (y -> y^k).
    pub fn dilate_u(&self, k: u32) -> Self {
        let up = |p: &Poly| {
            let mut c = vec![Q::zero(); p.coeffs().len().saturating_sub(1) * k as usize + 1];
            for (i, a) in p.coeffs().iter().enumerate() {
                c[i * k as usize] = a.clone();
            }
            Poly::from_coeffs(c)
        };
        Self::build(self.shift * k as i64, up(&self.num), up(&self.den))
    }

    /// Invariant under y <-> 1/y.
    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_u()
    }

    /// `u d/du`; for y-derivatives use `y d/dy = (1/2) u d/du`.
    pub fn u_deriv(&self) -> Self {
        // (u^s n/d)' u = u^s (s n d + u n' d - u n d') / d^2
        let s = Q::from_integer(self.shift.into());
        let ud = |p: &Poly| p.derivative().shift(1);
        let n = self
            .num
            .mul(&self.den)
            .scale(&s)
            .add(&ud(&self.num).mul(&self.den))
            .sub(&self.num.mul(&ud(&self.den)));
        Self::build(self.shift, n, self.den.mul(&self.den))
    }

    pub fn y_deriv(&self) -> Self {
        self.u_deriv().scale(&crate::rational::qr(1, 2))
    }
}

impl Coeff for LaurentU {
    fn zero() -> Self {
        LaurentU { shift: 0, num: Poly::zero(), den: Poly::one() }
    }
    fn one() -> Self {
        LaurentU { shift: 0, num: Poly::one(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let a = self.num.shift((self.shift - s) as usize);
        let b = o.num.shift((o.shift - s) as usize);
        if self.den.is_one() && o.den.is_one() {
            return Self::build(s, a.add(&b), Poly::one());
        }
        let n = a.mul(&o.den).add(&b.mul(&self.den));
        Self::build(s, n, self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        LaurentU { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return LaurentU { shift: self.shift + o.shift, num: self.num.mul(&o.num), den: Poly::one() };
        }
        Self::build(self.shift + o.shift, self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::build(-self.shift, self.den.clone(), self.num.clone()))
    }
    fn from_q(a: &Q) -> Self {
        Self::monomial(a.clone(), 0)
    }
    fn scale(&self, a: &Q) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        LaurentU { shift: self.shift, num: self.num.scale(a), den: self.den.clone() }
    }
    fn root(&self, e: &Q) -> Option<Self> {
        if self.is_one() {
            return Some(Self::one());
        }
        if self.den.is_one() && self.num.degree() == Some(0) {
            let c = pow_q(&self.num.coeff(0), e)?;
            let k = to_i64(&(e * Q::from_integer(self.shift.into())))?;
            return Some(Self::monomial(c, k));
        }
        self.pow_i(to_i64(e)?)
    }
    fn to_json(&self) -> Value {
        let enc = |x: &LaurentU| {
            let mut m = Map::new();
            for (k, c) in x.terms().unwrap() {
                m.insert(k.to_string(), Value::String(fmt_q(&c)));
            }
            Value::Object(m)
        };
        if self.is_laurent() {
            enc(self)
        } else {
            let n = Self::build(self.shift, self.num.clone(), Poly::one());
            let d = Self::build(0, self.den.clone(), Poly::one());
            serde_json::json!({ "num": enc(&n), "den": enc(&d) })
        }
    }
    fn from_json(v: &Value) -> Option<Self> {
        let dec = |v: &Value| -> Option<LaurentU> {
            let m = v.as_object()?;
            let mut t = Vec::new();
            for (k, c) in m {
                t.push((k.parse::<i64>().ok()?, parse_q(c.as_str()?)?));
            }
            Some(LaurentU::from_terms(t))
        };
        let m = v.as_object()?;
        if m.contains_key("num") && m.contains_key("den") {
            LaurentU::ratio(&dec(&m["num"])?, &dec(&m["den"])?)
        } else {
            dec(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    #[test]
    fn laurent_arithmetic() {
        let a = LaurentU::from_terms([(2, q(1)), (-2, q(1))]); // y + 1/y
        let b = LaurentU::from_terms([(0, q(10))]);
        let s = a.add(&b);
        assert!(s.is_symmetric());
        assert_eq!(s.at_one(), Some(q(12)));
        let p = a.mul(&a);
        assert_eq!(p.coeff_u(0), Some(q(2)));
        assert_eq!(p.coeff_u(4), Some(q(1)));
    }

    #[test]
    fn non_laurent_normalizer() {
        // (y+1)/(y-1) is not Laurent; times (y-1) it is
        let y = LaurentU::y_pow(q(1), 1);
        let one = LaurentU::one();
        let f = LaurentU::ratio(&y.add(&one), &y.sub(&one)).unwrap();
        assert!(!f.is_laurent());
        let g = f.mul(&y.sub(&one));
        assert!(g.is_laurent());
        assert_eq!(g, y.add(&one));
        // symmetric up to sign: f(1/y) = -f(y)
        assert_eq!(f.invert_u(), f.neg());
        let back = LaurentU::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn derivative_and_roots() {
        let f = LaurentU::from_terms([(2, q(3)), (-1, q(1))]);
        let d = f.u_deriv();
        assert_eq!(d, LaurentU::from_terms([(2, q(6)), (-1, q(-1))]));
        let m = LaurentU::monomial(qr(4, 9), 2);
        assert_eq!(m.root(&qr(1, 2)), Some(LaurentU::monomial(qr(2, 3), 1)));
        assert_eq!(LaurentU::monomial(q(4), 1).root(&qr(1, 2)), None);
    }
}
