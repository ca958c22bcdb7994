//! Q(sqrt D) for a squarefree integer D != 1, elements `a + b sqrt(D)`.

use super::Coeff;
use crate::rational::{fmt_q, parse_q, pow_q, Q};
use num_traits::Signed;
use serde_json::Value;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt<const D: i64> {
    pub a: Q,
    pub b: Q,
}

impl<const D: i64> std::fmt::Debug for QuadExt<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, D)
    }
}

impl<const D: i64> QuadExt<D> {
    pub fn new(a: Q, b: Q) -> Self {
        QuadExt { a, b }
    }

    pub fn sqrt_d() -> Self {
        QuadExt { a: Q::zero(), b: Q::one() }
    }

    pub fn conj(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -&self.b }
    }

    /// `a^2 - D b^2`.
    pub fn norm(&self) -> Q {
        &self.a * &self.a - Q::from_integer(D.into()) * &self.b * &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.a.clone())
    }
}

impl<const D: i64> Coeff for QuadExt<D> {
    fn zero() -> Self {
        QuadExt { a: Q::zero(), b: Q::zero() }
    }
    fn one() -> Self {
        QuadExt { a: Q::one(), b: Q::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        QuadExt { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    fn neg(&self) -> Self {
        QuadExt { a: -&self.a, b: -&self.b }
    }
    fn mul(&self, o: &Self) -> Self {
        let d = Q::from_integer(D.into());
        QuadExt {
            a: &self.a * &o.a + d * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(QuadExt { a: c.a / &n, b: c.b / &n })
    }
    fn from_q(a: &Q) -> Self {
        QuadExt { a: a.clone(), b: Q::zero() }
    }
    fn scale(&self, c: &Q) -> Self {
        QuadExt { a: &self.a * c, b: &self.b * c }
    }
    /// Rational powers of rational elements: `c^{1/2}` lands in the field when `c` or
    /// `c / D` is a rational square.
    fn root(&self, e: &Q) -> Option<Self> {
        if self.is_one() {
            return Some(Self::one());
        }
        if e.is_integer() {
            return self.pow_i(crate::rational::to_i64(e)?);
        }
        if !self.b.is_zero() {
            return None;
        }
        if let Some(r) = pow_q(&self.a, e) {
            return Some(Self::from_q(&r));
        }
        if *e.denom() == 2.into() {
            let d = Q::from_integer(D.into());
            let s = pow_q(&(&self.a / &d), &crate::rational::qr(1, 2))?;
            if s.is_negative() {
                return None;
            }
            let half = QuadExt { a: Q::zero(), b: s };
            return half.pow_i(crate::rational::to_i64(&Q::from_integer(e.numer().clone()))?);
        }
        None
    }
    fn to_json(&self) -> Value {
        serde_json::json!({ "a": fmt_q(&self.a), "b": fmt_q(&self.b), "d": D })
    }
    fn from_json(v: &Value) -> Option<Self> {
        if v.get("d")?.as_i64()? != D {
            return None;
        }
        Some(QuadExt { a: parse_q(v.get("a")?.as_str()?)?, b: parse_q(v.get("b")?.as_str()?)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    #[test]
    fn sqrt_squares_to_d() {
        let s = QuadExt::<3>::sqrt_d();
        assert_eq!(s.mul(&s), QuadExt::from_q(&q(3)));
        let i = QuadExt::<-1>::sqrt_d();
        assert_eq!(i.mul(&i), QuadExt::from_q(&q(-1)));
    }

    #[test]
    fn inverse_and_roots() {
        let x = QuadExt::<3>::new(q(2), q(1));
        assert_eq!(x.mul(&x.inv().unwrap()), QuadExt::one());
        // sqrt(27) = 3 sqrt(3)
        let r = QuadExt::<3>::from_q(&q(27)).root(&qr(1, 2)).unwrap();
        assert_eq!(r, QuadExt::new(q(0), q(3)));
        assert_eq!(QuadExt::<3>::from_q(&q(9)).root(&qr(1, 2)).unwrap(), QuadExt::from_q(&q(3)));
        assert!(QuadExt::<3>::from_q(&q(2)).root(&qr(1, 2)).is_none());
    }
}
