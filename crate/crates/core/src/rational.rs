//! Exact rationals and the `"num/den"` text form used everywhere in output.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Always `num/den`, also for integers, so every printed value parses back the same way.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Exact `k`-th root of a non-negative integer if it exists.
fn int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if n.is_zero() || n.is_one() {
        return Some(n.clone());
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// `x^e` for rational `e`, when the answer is again rational.
pub fn pow_q(x: &Q, e: &Q) -> Option<Q> {
    if e.is_zero() {
        return Some(Q::one());
    }
    if x.is_zero() {
        return if e.is_positive() { Some(Q::zero()) } else { None };
    }
    let k = e.denom().to_u32()?;
    let m = e.numer().to_i32()?;
    let sign_neg = x.is_negative();
    if sign_neg && k % 2 == 0 {
        return None;
    }
    let a = x.abs();
    let rn = int_root(a.numer(), k)?;
    let rd = int_root(a.denom(), k)?;
    let mut root = Q::new(rn, rd);
    if sign_neg {
        root = -root;
    }
    Some(pow_qi(&root, m as i64))
}

pub fn pow_qi(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub fn lcm_u(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd_i(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for (n, d) in [(3, 4), (-7, 2), (0, 1), (5, 1)] {
            let x = qr(n, d);
            assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
        }
        assert_eq!(fmt_q(&q(5)), "5/1");
        assert_eq!(parse_q("12"), Some(q(12)));
        assert_eq!(parse_q("1/0"), None);
    }

    #[test]
    fn rational_powers() {
        assert_eq!(pow_q(&qr(4, 9), &qr(1, 2)), Some(qr(2, 3)));
        assert_eq!(pow_q(&qr(-8, 27), &qr(1, 3)), Some(qr(-2, 3)));
        assert_eq!(pow_q(&qr(-8, 27), &qr(-2, 3)), Some(qr(9, 4)));
        assert_eq!(pow_q(&q(2), &qr(1, 2)), None);
        assert_eq!(pow_q(&q(-1), &qr(1, 2)), None);
    }
}
