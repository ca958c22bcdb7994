//! The cyclotomic field Q(zeta_12) = Q(i, sqrt 3), elements `re + im i` with
//! `re, im` in Q(sqrt 3). Holds every root of unity the closed formulas use
//! (`i`, `eps = e^{2 pi i/3}`) together with the square roots `sqrt 3`, `sqrt -3`.

use super::{Coeff, QuadExt};
use crate::rational::{pow_q, qr, to_i64, Q};
use num_traits::{Signed, Zero};
use serde_json::Value;

type R3 = QuadExt<3>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo12 {
    pub re: R3,
    pub im: R3,
}

impl std::fmt::Debug for Cyclo12 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}) + ({:?})*i", self.re, self.im)
    }
}

impl Cyclo12 {
    pub fn new(re: R3, im: R3) -> Self {
        Cyclo12 { re, im }
    }

    pub fn i() -> Self {
        Cyclo12 { re: R3::zero(), im: R3::one() }
    }

    pub fn sqrt3() -> Self {
        Cyclo12 { re: R3::sqrt_d(), im: R3::zero() }
    }

    /// `eps^k` with `eps = -1/2 + (sqrt 3/2) i`.
    pub fn eps_pow(k: i64) -> Self {
        let half3 = R3::new(<Q as Zero>::zero(), qr(1, 2));
        let e = Cyclo12 { re: R3::from_q(&qr(-1, 2)), im: half3 };
        match k.rem_euclid(3) {
            0 => Self::one(),
            1 => e,
            _ => e.conj(),
        }
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::one().neg(),
            _ => Self::i().neg(),
        }
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        Cyclo12 { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn rational(&self) -> Option<Q> {
        if self.im.is_zero() {
            self.re.rational()
        } else {
            None
        }
    }
}

impl Coeff for Cyclo12 {
    fn zero() -> Self {
        Cyclo12 { re: R3::zero(), im: R3::zero() }
    }
    fn one() -> Self {
        Cyclo12 { re: R3::one(), im: R3::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Cyclo12 { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
    fn neg(&self) -> Self {
        Cyclo12 { re: self.re.neg(), im: self.im.neg() }
    }
    fn mul(&self, o: &Self) -> Self {
        Cyclo12 {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    fn inv(&self) -> Option<Self> {
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let ni = n.inv()?;
        Some(Cyclo12 { re: self.re.mul(&ni), im: self.im.neg().mul(&ni) })
    }
    fn from_q(a: &Q) -> Self {
        Cyclo12 { re: R3::from_q(a), im: R3::zero() }
    }
    fn scale(&self, a: &Q) -> Self {
        Cyclo12 { re: self.re.scale(a), im: self.im.scale(a) }
    }
    /// Rational powers of rational elements; square roots land in the field when one of
    /// `c`, `c/3`, `-c`, `-c/3` is a rational square.
    fn root(&self, e: &Q) -> Option<Self> {
        if self.is_one() {
            return Some(Self::one());
        }
        if e.is_integer() {
            return self.pow_i(to_i64(e)?);
        }
        let c = self.rational()?;
        if let Some(r) = pow_q(&c, e) {
            return Some(Self::from_q(&r));
        }
        if *e.denom() != 2.into() {
            return None;
        }
        let half = qr(1, 2);
        let unit = if c.is_negative() { Self::i() } else { Self::one() };
        let a = c.abs();
        let s = if let Some(s) = pow_q(&a, &half) {
            Self::from_q(&s)
        } else {
            Self::from_q(&pow_q(&(a / Q::from_integer(3.into())), &half)?).mul(&Self::sqrt3())
        };
        unit.mul(&s).pow_i(to_i64(&Q::from_integer(e.numer().clone()))?)
    }
    fn to_json(&self) -> Value {
        serde_json::json!({ "re": self.re.to_json(), "im": self.im.to_json() })
    }
    fn from_json(v: &Value) -> Option<Self> {
        Some(Cyclo12 { re: R3::from_json(v.get("re")?)?, im: R3::from_json(v.get("im")?)? })
    }
}

impl Default for Cyclo12 {
    fn default() -> Self {
        <Self as Coeff>::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn roots_of_unity() {
        let e = Cyclo12::eps_pow(1);
        assert_eq!(e.pow_i(3).unwrap(), Cyclo12::one());
        assert_eq!(e.add(&e.conj()), Cyclo12::from_q(&q(-1)));
        assert_eq!(Cyclo12::i().pow_i(2).unwrap(), Cyclo12::from_q(&q(-1)));
        let x = e.add(&Cyclo12::i());
        assert_eq!(x.mul(&x.inv().unwrap()), Cyclo12::one());
    }

    #[test]
    fn square_roots() {
        for c in [q(12), q(-12), q(-4), qr(-4, 3), q(9)] {
            let r = Cyclo12::from_q(&c).root(&qr(1, 2)).unwrap();
            assert_eq!(r.mul(&r), Cyclo12::from_q(&c));
        }
        assert!(Cyclo12::from_q(&q(2)).root(&qr(1, 2)).is_none());
    }
}
