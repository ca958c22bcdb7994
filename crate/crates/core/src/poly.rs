//! Dense univariate polynomials over Q, ascending degree, no trailing zeros.

use crate::rational::Q;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(a: Q) -> Self {
        Poly::from_coeffs(vec![a])
    }

    /// `x` itself.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![Q::zero(), Q::one()])
    }

    pub fn monomial(a: Q, k: usize) -> Self {
        let mut c = vec![Q::zero(); k + 1];
        c[k] = a;
        Poly::from_coeffs(c)
    }

    /// `a + b x`.
    pub fn linear(a: Q, b: Q) -> Self {
        Poly::from_coeffs(vec![a, b])
    }

    pub fn from_coeffs(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.c.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    /// Lowest index with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|k| self.coeff(k) + o.coeff(k)).collect();
        Poly::from_coeffs(c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|k| self.coeff(k) - o.coeff(k)).collect();
        Poly::from_coeffs(c)
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, a: &Q) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|b| b * a).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::from_coeffs(c)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    /// Drop the `x^k` factor; caller guarantees the low coefficients vanish.
    pub fn unshift(&self, k: usize) -> Poly {
        Poly::from_coeffs(self.c.iter().skip(k).cloned().collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = d.lead().recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut qc = vec![Q::zero(); r.len() - dd];
        for k in (0..qc.len()).rev() {
            let a = &r[k + dd] * &inv;
            if !a.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &a * b;
                }
            }
            qc[k] = a;
        }
        r.truncate(dd);
        (Poly::from_coeffs(qc), Poly::from_coeffs(r))
    }

    /// Exact quotient if `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic gcd; the gcd of two zeros is zero.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = o.monic();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * Q::from_integer((k as i64).into()))
                .collect(),
        )
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Poly {
        Poly {
            c: self
                .c
                .iter()
                .enumerate()
                .map(|(k, a)| if k % 2 == 1 { -a } else { a.clone() })
                .collect(),
        }
    }

    /// `p(a x)`.
    pub fn dilate(&self, a: &Q) -> Poly {
        let mut f = Q::one();
        let mut c = Vec::with_capacity(self.c.len());
        for b in &self.c {
            c.push(b * &f);
            f *= a;
        }
        Poly::from_coeffs(c)
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(a.clone()));
        }
        acc
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})x")?,
                _ => write!(f, "({a})x^{k}")?,
            }
        }
        Ok(())
    }
}
