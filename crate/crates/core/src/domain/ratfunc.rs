//! Rational functions in t over Q.
//!
//! Invariant: `num/den` is reduced and `den` is monic, so equal functions have equal
//! representations. The zero function is `0/1`.

use super::Coeff;
use crate::poly::Poly;
use crate::rational::{fmt_q, parse_q, Q};

use serde_json::Value;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl std::fmt::Debug for RatFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFn { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::monic_den(n, d)
    }

    fn monic_den(num: Poly, den: Poly) -> Self {
        let l = den.lead();
        if l.is_one() {
            RatFn { num, den }
        } else {
            let li = l.recip();
            RatFn { num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn t() -> Self {
        RatFn::poly(Poly::x())
    }

    /// `c t^k`, negative `k` allowed.
    pub fn monomial(c: Q, k: i64) -> Self {
        if k >= 0 {
            RatFn::poly(Poly::monomial(c, k as usize))
        } else {
            RatFn::new(Poly::constant(c), Poly::monomial(Q::one(), (-k) as usize))
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Laurent expansion at t = 0: returns `(v, c)` with `self = t^v (c_0 + c_1 t + ...)`,
    /// coefficients `c_0 .. c_{len-1}`.
    pub fn laurent_at_zero(&self, len: usize) -> (i64, Vec<Q>) {
        if self.num.is_zero() {
            return (0, vec![Q::zero(); len]);
        }
        let vn = self.num.low_degree().unwrap();
        let vd = self.den.low_degree().unwrap();
        let n = self.num.unshift(vn);
        let d = self.den.unshift(vd);
        let d0inv = d.coeff(0).recip();
        let mut out: Vec<Q> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = n.coeff(k);
            for j in 1..=k.min(d.degree().unwrap_or(0)) {
                acc -= d.coeff(j) * &out[k - j];
            }
            out.push(acc * &d0inv);
        }
        (vn as i64 - vd as i64, out)
    }

    /// Coefficient of `t^-1` in the Laurent expansion at 0.
    pub fn residue(&self) -> Q {
        self.laurent_coeff(-1)
    }

    pub fn laurent_coeff(&self, k: i64) -> Q {
        if self.num.is_zero() {
            return Q::zero();
        }
        let vn = self.num.low_degree().unwrap() as i64;
        let vd = self.den.low_degree().unwrap() as i64;
        let v = vn - vd;
        if k < v {
            return Q::zero();
        }
        let (_, c) = self.laurent_at_zero((k - v + 1) as usize);
        c[(k - v) as usize].clone()
    }

    /// `f(-t)`.
    pub fn reflect(&self) -> Self {
        RatFn::new(self.num.reflect(), self.den.reflect())
    }

    /// `f(a t)`.
    pub fn dilate(&self, a: &Q) -> Self {
        RatFn::new(self.num.dilate(a), self.den.dilate(a))
    }
}

impl Coeff for RatFn {
    fn zero() -> Self {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }
    fn one() -> Self {
        RatFn { num: Poly::one(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RatFn::poly(self.num.add(&o.num));
            }
            return RatFn::new(self.num.add(&o.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            let d = self.den.mul(&o.den);
            // coprime denominators: the sum is already reduced
            return Self::monic_den(n, d);
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = o.den.div_exact(&g).unwrap();
        let n = self.num.mul(&d1).add(&o.num.mul(&b1));
        if n.is_zero() {
            return Self::zero();
        }
        let h = n.gcd(&g);
        let (n, g2) = if h.is_one() {
            (n, g)
        } else {
            (n.div_exact(&h).unwrap(), g.div_exact(&h).unwrap())
        };
        Self::monic_den(n, b1.mul(&d1).mul(&g2))
    }
    fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFn::poly(self.num.mul(&o.num));
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = o.den.div_exact(&g1).unwrap();
        let c = o.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        Self::monic_den(a.mul(&c), b.mul(&d))
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::monic_den(self.den.clone(), self.num.clone()))
        }
    }
    fn from_q(a: &Q) -> Self {
        RatFn::poly(Poly::constant(a.clone()))
    }
    fn scale(&self, a: &Q) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        RatFn { num: self.num.scale(a), den: self.den.clone() }
    }
    fn root(&self, e: &Q) -> Option<Self> {
        if self.is_one() {
            return Some(Self::one());
        }
        if self.den.is_one() && self.num.degree() == Some(0) {
            return crate::rational::pow_q(&self.num.coeff(0), e).map(|c| Self::from_q(&c));
        }
        self.pow_i(crate::rational::to_i64(e)?)
    }
    fn to_json(&self) -> Value {
        let enc = |p: &Poly| Value::Array(p.coeffs().iter().map(|a| Value::String(fmt_q(a))).collect());
        serde_json::json!({ "num": enc(&self.num), "den": enc(&self.den) })
    }
    fn from_json(v: &Value) -> Option<Self> {
        let dec = |v: &Value| -> Option<Poly> {
            let a = v.as_array()?;
            let c: Option<Vec<Q>> = a.iter().map(|x| parse_q(x.as_str()?)).collect();
            Some(Poly::from_coeffs(c?))
        };
        let n = dec(v.get("num")?)?;
        let d = dec(v.get("den")?)?;
        if d.is_zero() {
            return None;
        }
        Some(RatFn::new(n, d))
    }
}

impl Default for RatFn {
    fn default() -> Self {
        <Self as Coeff>::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn lin(a: i64, b: i64) -> Poly {
        Poly::linear(q(a), q(b))
    }

    #[test]
    fn canonical_form() {
        // (2t+2)/(4t^2-4) = (1/2)/(t-1)
        let f = RatFn::new(lin(2, 2), Poly::from_coeffs(vec![q(-4), q(0), q(4)]));
        assert_eq!(f.den(), &lin(-1, 1));
        assert_eq!(f.num(), &Poly::constant(qr(1, 2)));
        let g = RatFn::new(Poly::constant(q(1)), lin(-2, 2));
        assert_eq!(f, g);
    }

    #[test]
    fn field_ops() {
        let a = RatFn::new(Poly::one(), lin(1, 2));
        let b = RatFn::new(Poly::one(), lin(1, -2));
        let s = a.add(&b);
        // 1/(1+2t) + 1/(1-2t) = 2/(1-4t^2)
        let expect = RatFn::new(Poly::constant(q(2)), Poly::from_coeffs(vec![q(1), q(0), q(-4)]));
        assert_eq!(s, expect);
        assert_eq!(a.mul(&a.inv().unwrap()), RatFn::one());
        assert!(RatFn::zero().inv().is_none());
        assert_eq!(a.sub(&a), RatFn::zero());
    }

    #[test]
    fn residue_simple_pole() {
        // 1/(t (1 - 2t)) has residue 1 at 0
        let f = RatFn::new(Poly::one(), Poly::x().mul(&lin(1, -2)));
        assert_eq!(f.residue(), q(1));
        // a/t + b + c t
        let g = RatFn::monomial(q(5), -1)
            .add(&RatFn::from_q(&q(7)))
            .add(&RatFn::monomial(q(3), 1));
        assert_eq!(g.residue(), q(5));
        assert_eq!(f.laurent_coeff(2), q(8));
    }
}
