//! Coefficient domains behind one commutative-ring interface.

mod cyclo12;
mod laurent_u;
mod pole_fn;
mod quad_ext;
mod ratfunc;

pub use cyclo12::Cyclo12;
pub use laurent_u::LaurentU;
pub use pole_fn::PoleFn;
pub use quad_ext::QuadExt;
pub use ratfunc::RatFn;

use crate::rational::{fmt_q, parse_q, pow_q, to_i64, Q};
use num_traits::{One, Zero};
use serde_json::Value;
use std::fmt::Debug;

/// Commutative ring containing Q. `inv` answers `None` exactly on non-units.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_q(a: &Q) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn scale(&self, a: &Q) -> Self {
        self.mul(&Self::from_q(a))
    }

    fn pow_i(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut r = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Some(r)
    }

    /// `self^e` when it exists in the domain.
    fn root(&self, e: &Q) -> Option<Self> {
        if self.is_one() {
            return Some(Self::one());
        }
        self.pow_i(to_i64(e)?)
    }

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Option<Self>;
}

impl Coeff for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_q(a: &Q) -> Self {
        a.clone()
    }
    fn scale(&self, a: &Q) -> Self {
        self * a
    }
    fn root(&self, e: &Q) -> Option<Self> {
        pow_q(self, e)
    }
    fn to_json(&self) -> Value {
        Value::String(fmt_q(self))
    }
    fn from_json(v: &Value) -> Option<Self> {
        parse_q(v.as_str()?)
    }
}
