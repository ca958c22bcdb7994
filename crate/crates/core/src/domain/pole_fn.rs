//! Rational functions in t whose poles lie in {0, -1/2, 1/2}.
//!
//! Stored as `num(t) * t^-e0 * (1+2t)^-e1 * (1-2t)^-e2` with `num` coprime to all three
//! factors, which makes the representation canonical without polynomial gcds.

use super::{Coeff, RatFn};
use crate::poly::Poly;
use crate::rational::{q, qr, Q};
use serde_json::Value;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PoleFn {
    num: Poly,
    e: [i64; 3],
}

impl std::fmt::Debug for PoleFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}) t^{} (1+2t)^{} (1-2t)^{}", self.num, -self.e[0], -self.e[1], -self.e[2])
    }
}

fn factor(i: usize) -> Poly {
    match i {
        0 => Poly::x(),
        1 => Poly::linear(q(1), q(2)),
        _ => Poly::linear(q(1), q(-2)),
    }
}

fn root(i: usize) -> Q {
    match i {
        0 => q(0),
        1 => qr(-1, 2),
        _ => qr(1, 2),
    }
}

impl PoleFn {
    pub fn new(num: Poly, e: [i64; 3]) -> Self {
        let mut s = PoleFn { num, e };
        s.normalize();
        s
    }

    pub fn poly(p: Poly) -> Self {
        Self::new(p, [0; 3])
    }

    /// `c t^a (1+2t)^b (1-2t)^c`.
    pub fn unit(c: Q, a: i64, b: i64, cc: i64) -> Self {
        Self::new(Poly::constant(c), [-a, -b, -cc])
    }

    pub fn t() -> Self {
        Self::unit(q(1), 1, 0, 0)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.e = [0; 3];
            return;
        }
        for i in 0..3 {
            let r = root(i);
            while self.num.eval(&r).is_zero() {
                self.num = self.num.div_exact(&factor(i)).unwrap();
                self.e[i] -= 1;
            }
        }
    }

    /// Numerator after clearing to the denominator `t^a (1+2t)^b (1-2t)^c` with all `a,b,c >= 0`.
    pub fn cleared(&self) -> (Poly, [i64; 3]) {
        let mut n = self.num.clone();
        let mut d = [0i64; 3];
        for i in 0..3 {
            if self.e[i] >= 0 {
                d[i] = self.e[i];
            } else {
                n = n.mul(&factor(i).pow((-self.e[i]) as u32));
            }
        }
        (n, d)
    }

    pub fn to_ratfn(&self) -> RatFn {
        let (n, d) = self.cleared();
        let mut den = Poly::one();
        for i in 0..3 {
            den = den.mul(&factor(i).pow(d[i] as u32));
        }
        RatFn::new(n, den)
    }

    /// Inverse of [`Self::to_ratfn`]; `None` when `f` has other poles.
    pub fn from_ratfn(f: &RatFn) -> Option<Self> {
        let mut den = f.den().clone();
        let mut e = [0i64; 3];
        for i in 0..3 {
            while !den.is_zero() && den.degree() > Some(0) && den.eval(&root(i)).is_zero() {
                den = den.div_exact(&factor(i)).unwrap();
                e[i] += 1;
            }
        }
        if den.degree() != Some(0) {
            return None;
        }
        Some(Self::new(f.num().scale(&den.coeff(0).recip()), e))
    }

    pub fn eval(&self, x: &Q) -> Option<Q> {
        let mut v = self.num.eval(x);
        for i in 0..3 {
            let b = factor(i).eval(x);
            if b.is_zero() {
                if self.e[i] > 0 {
                    return None;
                }
                if self.e[i] < 0 {
                    return Some(Q::from_integer(0.into()));
                }
                continue;
            }
            v *= crate::rational::pow_qi(&b, -self.e[i]);
        }
        Some(v)
    }

    /// Coefficient of `t^k` in the Laurent expansion at 0.
    pub fn laurent_coeff(&self, k: i64) -> Q {
        if self.num.is_zero() {
            return q(0);
        }
        // num * (1+2t)^-e1 * (1-2t)^-e2, coefficient of t^(k + e0)
        let m = k + self.e[0];
        if m < 0 {
            return q(0);
        }
        let m = m as usize;
        let series = |e: i64, s: i64| -> Vec<Q> {
            // (1 + 2 s t)^-e up to t^m
            let mut c = vec![q(1)];
            for j in 1..=m {
                let prev = c[j - 1].clone();
                // binomial(-e, j) (2s)^j recurrence
                c.push(prev * q(-e - (j as i64) + 1) * q(2 * s) / q(j as i64));
            }
            c
        };
        let b = series(self.e[1], 1);
        let c = series(self.e[2], -1);
        let mut bc = vec![q(0); m + 1];
        for i in 0..=m {
            for j in 0..=(m - i) {
                bc[i + j] += &b[i] * &c[j];
            }
        }
        let mut acc = q(0);
        for (i, a) in self.num.coeffs().iter().enumerate() {
            if i > m {
                break;
            }
            acc += a * &bc[m - i];
        }
        acc
    }

    pub fn residue(&self) -> Q {
        self.laurent_coeff(-1)
    }
}

impl Coeff for PoleFn {
    fn zero() -> Self {
        PoleFn { num: Poly::zero(), e: [0; 3] }
    }
    fn one() -> Self {
        PoleFn { num: Poly::one(), e: [0; 3] }
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
        let mut a = self.num.clone();
        let mut b = o.num.clone();
        let mut e = [0i64; 3];
        for i in 0..3 {
            e[i] = self.e[i].max(o.e[i]);
            if e[i] > self.e[i] {
                a = a.mul(&factor(i).pow((e[i] - self.e[i]) as u32));
            }
            if e[i] > o.e[i] {
                b = b.mul(&factor(i).pow((e[i] - o.e[i]) as u32));
            }
        }
        Self::new(a.add(&b), e)
    }
    fn neg(&self) -> Self {
        PoleFn { num: self.num.neg(), e: self.e }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        PoleFn { num: self.num.mul(&o.num), e: [self.e[0] + o.e[0], self.e[1] + o.e[1], self.e[2] + o.e[2]] }
    }
    /// Units are exactly the scalar multiples of `t^a (1+2t)^b (1-2t)^c`.
    fn inv(&self) -> Option<Self> {
        if self.num.degree() != Some(0) {
            return None;
        }
        Some(PoleFn { num: Poly::constant(self.num.coeff(0).recip()), e: [-self.e[0], -self.e[1], -self.e[2]] })
    }
    fn from_q(a: &Q) -> Self {
        Self::new(Poly::constant(a.clone()), [0; 3])
    }
    fn scale(&self, a: &Q) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        PoleFn { num: self.num.scale(a), e: self.e }
    }
    fn to_json(&self) -> Value {
        self.to_ratfn().to_json()
    }
    fn from_json(v: &Value) -> Option<Self> {
        Self::from_ratfn(&RatFn::from_json(v)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_and_roundtrip() {
        // (1+2t)/(t (1+2t)) = 1/t
        let f = PoleFn::new(factor(1), [1, 1, 0]);
        assert_eq!(f, PoleFn::unit(q(1), -1, 0, 0));
        let g = PoleFn::unit(q(3), -2, -1, 2).add(&PoleFn::t());
        assert_eq!(PoleFn::from_ratfn(&g.to_ratfn()).unwrap(), g);
        assert_eq!(g.sub(&g), PoleFn::zero());
    }

    #[test]
    fn residue_matches_ratfn() {
        let g = PoleFn::unit(q(5), -3, -2, -1).add(&PoleFn::unit(qr(1, 3), -1, 1, 0));
        assert_eq!(g.residue(), g.to_ratfn().residue());
        assert_eq!(g.laurent_coeff(2), g.to_ratfn().laurent_coeff(2));
    }
}
