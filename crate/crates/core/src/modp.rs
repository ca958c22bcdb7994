//! Word-size prime fields, Chinese remaindering and rational reconstruction.

use crate::rational::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Fp { p }
    }
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }
    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + self.p - b }
    }
    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 { 0 } else { self.p - a }
    }
    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
    pub fn inv(self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, self.p - 2))
    }
    pub fn from_i64(self, a: i64) -> u64 {
        let r = a.rem_euclid(self.p as i64);
        r as u64
    }
    pub fn from_big(self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    /// `None` when the denominator vanishes mod p.
    pub fn from_q(self, a: &Q) -> Option<u64> {
        let d = self.from_big(a.denom());
        Some(self.mul(self.from_big(a.numer()), self.inv(d)?))
    }
}

/// Montgomery form arithmetic modulo an odd `p < 2^63`; elements stay in `[0, p)`.
#[derive(Clone, Copy, Debug)]
pub struct Mont {
    pub p: u64,
    /// `-p^-1 mod 2^64`
    ninv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Mont {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < 1 << 63);
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Mont { p, ninv: inv.wrapping_neg(), r2 }
    }
    #[inline]
    fn redc(self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.ninv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p { u - self.p } else { u }
    }
    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }
    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + self.p - b }
    }
    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 { 0 } else { self.p - a }
    }
    pub fn to_mont(self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }
    pub fn from_mont(self, a: u64) -> u64 {
        self.redc(a as u128)
    }
    pub fn one(self) -> u64 {
        self.to_mont(1)
    }
    pub fn from_i64(self, a: i64) -> u64 {
        self.to_mont(a.rem_euclid(self.p as i64) as u64)
    }
    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
    pub fn inv(self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, self.p - 2))
    }
    /// Integer power, negative exponents through the inverse.
    pub fn pow_i(self, a: u64, e: i64) -> Option<u64> {
        if e < 0 {
            Some(self.pow(self.inv(a)?, e.unsigned_abs()))
        } else {
            Some(self.pow(a, e as u64))
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let f = Fp::new(n);
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, largest first.
pub fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

/// Combine `(r mod m)` with `(a mod p)`.
pub fn crt(r: &BigInt, m: &BigInt, a: u64, p: u64) -> BigInt {
    let f = Fp::new(p);
    let rm = f.from_big(r);
    let mm = f.from_big(m);
    let k = f.mul(f.sub(a, rm), f.inv(mm).expect("moduli not coprime"));
    r + m * BigInt::from(k)
}

/// The fraction `n/d` with `|n|, d <= sqrt(m/2)` congruent to `r`, if any.
pub fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Q> {
    let r = r.mod_floor(m);
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::from(1));
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !(&r1.gcd(&t1)).eq(&BigInt::from(1)) {
        return None;
    }
    Some(Q::new(r1, t1))
}

/// Monomial coefficients of the polynomial through `(xs[i], ys[i])`.
pub fn interpolate(f: Fp, xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let n = xs.len();
    // Newton divided differences
    let mut c = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = f.sub(c[i], c[i - 1]);
            let den = f.sub(xs[i], xs[i - j]);
            c[i] = f.mul(num, f.inv(den).expect("repeated node"));
        }
    }
    let mut poly = vec![0u64; n];
    for k in (0..n).rev() {
        // poly = poly * (x - xs[k]) + c[k]
        let mut next = vec![0u64; n];
        for i in 0..n {
            if poly[i] == 0 {
                continue;
            }
            if i + 1 < n {
                next[i + 1] = f.add(next[i + 1], poly[i]);
            }
            next[i] = f.sub(next[i], f.mul(poly[i], xs[k]));
        }
        next[0] = f.add(next[0], c[k]);
        poly = next;
    }
    poly
}

pub fn eval_poly(f: Fp, c: &[u64], x: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    #[test]
    fn primes_and_inverse() {
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime((1u64 << 61) + 1));
        let p = primes().next().unwrap();
        let f = Fp::new(p);
        assert_eq!(f.mul(7, f.inv(7).unwrap()), 1);
    }

    #[test]
    fn reconstruct_through_crt() {
        let x = qr(-12345, 678);
        let mut r = BigInt::zero();
        let mut m = BigInt::from(1);
        for p in primes().take(2) {
            let a = Fp::new(p).from_q(&x).unwrap();
            r = crt(&r, &m, a, p);
            m *= BigInt::from(p);
        }
        assert_eq!(rational_reconstruct(&r, &m), Some(x));
    }

    #[test]
    fn montgomery_agrees_with_plain() {
        let p = primes().next().unwrap();
        let (f, m) = (Fp::new(p), Mont::new(p));
        let (a, b) = (p - 12345, 987654321987654321 % p);
        assert_eq!(m.from_mont(m.mul(m.to_mont(a), m.to_mont(b))), f.mul(a, b));
        assert_eq!(m.from_mont(m.inv(m.from_i64(-7)).unwrap()), f.inv(f.from_i64(-7)).unwrap());
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let f = Fp::new(1_000_000_007);
        let c = vec![5u64, 0, 3, 1];
        let xs: Vec<u64> = (1..=4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| eval_poly(f, &c, x)).collect();
        assert_eq!(interpolate(f, &xs, &ys), c);
    }
}
