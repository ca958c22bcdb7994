//! Rank-2 Mochizuki integrals on toric surfaces, the seven universal series and the
//! universal formula for virtual Euler characteristics.
//!
//! At a fixed point of `S^[n1] x S^[n2]` the normalized integrand divided by the tangent
//! Euler class is
//!
//! ```text
//! t^-n c(T1) c(T2) / (e(T1) e(T2)) * e(N)/c(N) * e(O(a1)^[n1]) * e(O(a2)^[n2] (x) t^2)
//! ```
//!
//! with `N = N+ + N-`, `N+ = D(Z1, Z2; a2 - a1)` of `t`-weight `+2t` and
//! `N- = D(Z2, Z1; a1 - a2)` of weight `-2t`, where on a chart
//! `D(W, Z; D) = chi_D (-Z - W*/(s1 s2) + W* Z (1-s1)(1-s2)/(s1 s2))`.
//! Every piece is a sum over charts, so the generating function is a product of chart
//! factors once the non-equivariant limit `eps = mu * sigma`, `mu -> 0` is taken.
//!
//! The fast path evaluates that limit modulo word-size primes at sample values of `t`,
//! interpolates `t^5n (1+2t)^n (1-2t)^n Z_n(t)` (a polynomial of degree at most `7n`) and
//! lifts the coefficients by Chinese remaindering and rational reconstruction.

use crate::domain::{Coeff, PoleFn};
use crate::hilb::{
    rhom_pair, taut_weights, tangent_weights, Chart, DivisorCombo, EquivKClass, EquivWeight, HilbError, Partition,
    ToricSurface,
};
use crate::modp::{crt, eval_poly, interpolate, primes, rational_reconstruct, Fp, Mont};
use crate::poly::Poly;
use crate::rational::{fmt_q, parse_q, q, qr, Q};
use crate::series::{Series, SeriesError};
use crate::surfaces::{chi_of_class, SurfaceDescriptor, SurfaceError};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

/// Generic integer draw for `(eps1, eps2)`, a multiple of `(97/61, -55/129)`.
pub const SIGMA_PRIMARY: (i64, i64) = (12513, -3355);
pub const SIGMA_SECONDARY: (i64, i64) = (-7919, 10007);

#[derive(Debug, Error)]
pub enum MochizukiError {
    #[error("insertion {0} is not implemented by the localization pipeline")]
    Unsupported(String),
    #[error("weight {0} vanishes at the specialization; choose another draw")]
    VanishingWeight(String),
    #[error("mu-limit of the chart product has a surviving negative power at q^{0}")]
    NotALimit(usize),
    #[error("interpolation check failed at q^{0}: degree bound exceeded")]
    DegreeBound(usize),
    #[error("rational reconstruction did not stabilize after {0} primes")]
    Reconstruction(usize),
    #[error("vd {vd} needs universal series to q^{need}, available through q^{have}")]
    InsufficientOrder { vd: i64, need: i64, have: usize },
    #[error("half-sum over a1 H <= a2 H is not determined by the data of {0}")]
    Polarization(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Hilb(#[from] HilbError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

pub type Result<T> = std::result::Result<T, MochizukiError>;

/// Invariant to be captured by the descendent insertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Euler,
    ChiY,
    EllipticGenus,
    Cobordism(usize),
    Verlinde(i64),
    Segre(i64),
    VerlindeChiY,
}

impl Insertion {
    pub fn key(&self) -> String {
        match self {
            Insertion::Euler => "euler".into(),
            Insertion::ChiY => "chiy".into(),
            Insertion::EllipticGenus => "ellgen".into(),
            Insertion::Cobordism(k) => format!("cobordism{k}"),
            Insertion::Verlinde(r) => format!("verlinde{r}"),
            Insertion::Segre(s) => format!("segre{s}"),
            Insertion::VerlindeChiY => "verlindechiy".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let num = |p: &str| s.strip_prefix(p).and_then(|r| r.parse::<i64>().ok());
        Some(match s {
            "euler" => Insertion::Euler,
            "chiy" => Insertion::ChiY,
            "ellgen" => Insertion::EllipticGenus,
            "verlindechiy" => Insertion::VerlindeChiY,
            _ => {
                if let Some(k) = num("cobordism") {
                    Insertion::Cobordism(k as usize)
                } else if let Some(r) = num("verlinde") {
                    Insertion::Verlinde(r)
                } else if let Some(r) = num("segre") {
                    Insertion::Segre(r)
                } else {
                    return None;
                }
            }
        })
    }

    fn require_euler(&self) -> Result<()> {
        if *self == Insertion::Euler {
            Ok(())
        } else {
            Err(MochizukiError::Unsupported(self.key()))
        }
    }
}

/// `(a1^2, a1 a2, a2^2, a1 K, a2 K, K^2, chi(O))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChernVector(pub [i64; 7]);

impl ChernVector {
    pub fn chi(&self) -> i64 {
        self.0[6]
    }

    /// `(c^2, cK)` of `x a1 + y a2`.
    fn combo(&self, x: i64, y: i64) -> (i64, i64) {
        let [a11, a12, a22, a1k, a2k, ..] = self.0;
        (x * x * a11 + 2 * x * y * a12 + y * y * a22, x * a1k + y * a2k)
    }

    fn chi_of(&self, x: i64, y: i64) -> i64 {
        let (sq, k) = self.combo(x, y);
        chi_of_class(self.chi(), sq, k).expect("classes from integral data")
    }
}

/// A surface with two divisor classes.
#[derive(Clone, Debug)]
pub struct Triple {
    pub surface: ToricSurface,
    pub a1: DivisorCombo,
    pub a2: DivisorCombo,
}

impl Triple {
    pub fn new(surface: ToricSurface, a1: &[(&str, i64)], a2: &[(&str, i64)]) -> Result<Self> {
        let a1 = DivisorCombo::parse(&surface, a1)?;
        let a2 = DivisorCombo::parse(&surface, a2)?;
        Ok(Triple { surface, a1, a2 })
    }

    pub fn chern_vector(&self) -> ChernVector {
        let s = &self.surface;
        ChernVector([
            s.dot(&self.a1, &self.a1),
            s.dot(&self.a1, &self.a2),
            s.dot(&self.a2, &self.a2),
            s.dot_k(&self.a1),
            s.dot_k(&self.a2),
            s.k2,
            s.chi_o,
        ])
    }

    /// `(P2,0,0), (P2,H,0), (P2,0,H), (P2,H,H), (P1xP1,0,0), (P1xP1,H1,0), (P1xP1,0,H1)`.
    pub fn reference() -> Vec<Triple> {
        let p2 = ToricSurface::p2;
        let pp = ToricSurface::p1xp1;
        let h: &[(&str, i64)] = &[("H", 1)];
        let h1: &[(&str, i64)] = &[("H1", 1)];
        vec![
            Triple::new(p2(), &[], &[]),
            Triple::new(p2(), h, &[]),
            Triple::new(p2(), &[], h),
            Triple::new(p2(), h, h),
            Triple::new(pp(), &[], &[]),
            Triple::new(pp(), h1, &[]),
            Triple::new(pp(), &[], h1),
        ]
        .into_iter()
        .map(|t| t.expect("reference divisors exist"))
        .collect()
    }
}

/// `C(a1, a2, t)`, the `n1 = n2 = 0` term of the integrand.
pub fn leading_term(v: &ChernVector) -> PoleFn {
    let [a11, _, a22, a1k, a2k, _, chi] = v.0;
    let texp = -1 + 2 * chi + (a11 - a1k) / 2 + (a22 - a2k) / 2;
    let chi2 = v.chi_of(0, 1);
    let d21 = v.chi_of(-1, 1);
    let d12 = v.chi_of(1, -1);
    let c = crate::rational::pow_qi(&q(2), -chi2 + d21) * crate::rational::pow_qi(&q(-2), d12);
    PoleFn::unit(c, texp - chi2 + d21 + d12, -d21, -d12)
}

/// `D(W, Z; D)` on a chart, as weights in `eps`.
fn delta_class(w: &Partition, z: &Partition, chi: EquivWeight, s: &ToricSurface, c: usize) -> EquivKClass {
    let ch = &s.charts[c];
    let mut k = rhom_pair((w, c), (z, c), chi, s);
    k.add_class(&taut_weights(chi, z, ch).neg());
    // chi W* / (s1 s2)
    for (i, j) in w.character() {
        k.push(chi + ch.monomial(-i - 1, -j - 1), -1);
    }
    k
}

/// Integer data of one chart term `(lambda1, lambda2)` at the draw `sigma`.
#[derive(Clone, Debug)]
struct LocalTerm {
    k: usize,
    k1: usize,
    k2: usize,
    tangent: Vec<i64>,
    taut1: Vec<i64>,
    taut2: Vec<i64>,
    nplus: Vec<(i64, i64)>,
    nminus: Vec<(i64, i64)>,
    rank_plus: i64,
    rank_minus: i64,
}

fn eval_sigma(w: EquivWeight, sigma: (i64, i64)) -> i64 {
    w.e1 * sigma.0 + w.e2 * sigma.1
}

fn local_terms(t: &Triple, c: usize, order: usize, sigma: (i64, i64)) -> Result<Vec<LocalTerm>> {
    let s = &t.surface;
    let ch: &Chart = &s.charts[c];
    let chi1 = s.character(&t.a1, c);
    let chi2 = s.character(&t.a2, c);
    let mut out = Vec::new();
    for k in 0..=order {
        for k1 in 0..=k {
            for l1 in Partition::all(k1) {
                for l2 in Partition::all(k - k1) {
                    let mut tan = tangent_weights(&l1, ch).dual();
                    tan.add_class(&tangent_weights(&l2, ch).dual());
                    let mut tangent = Vec::new();
                    for (w, m) in tan.iter() {
                        let a = eval_sigma(w, sigma);
                        if a == 0 {
                            return Err(MochizukiError::VanishingWeight(w.to_string()));
                        }
                        tangent.extend(std::iter::repeat_n(a, m as usize));
                    }
                    let flat = |kc: &EquivKClass| -> Vec<i64> {
                        kc.iter().flat_map(|(w, m)| std::iter::repeat_n(eval_sigma(w, sigma), m as usize)).collect()
                    };
                    let pairs = |kc: &EquivKClass| -> Vec<(i64, i64)> {
                        kc.iter().map(|(w, m)| (eval_sigma(w, sigma), m)).filter(|(a, _)| *a != 0).collect()
                    };
                    let np = delta_class(&l1, &l2, chi2 - chi1, s, c);
                    let nm = delta_class(&l2, &l1, chi1 - chi2, s, c);
                    out.push(LocalTerm {
                        k,
                        k1,
                        k2: k - k1,
                        tangent,
                        taut1: flat(&taut_weights(chi1, &l1, ch)),
                        taut2: flat(&taut_weights(chi2, &l2, ch)),
                        rank_plus: np.rank(),
                        rank_minus: nm.rank(),
                        nplus: pairs(&np),
                        nminus: pairs(&nm),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `s *= (1 + a x)^m` truncated to `s.len()`.
fn mul_linear_pow(m: Mont, s: &mut [u64], a: u64, e: i64) {
    if e > 0 {
        for _ in 0..e {
            for j in (1..s.len()).rev() {
                s[j] = m.add(s[j], m.mul(a, s[j - 1]));
            }
        }
    } else {
        for _ in 0..(-e) {
            for j in 1..s.len() {
                s[j] = m.sub(s[j], m.mul(a, s[j - 1]));
            }
        }
    }
}

fn mul_trunc(m: Mont, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    let mut r = vec![0u64; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            r[i + j] = m.add(r[i + j], m.mul(x, y));
        }
    }
    r
}

/// Reduction of a [`LocalTerm`] modulo one prime, in Montgomery form.
struct PrimeTerm {
    k: usize,
    k1: usize,
    k2: usize,
    rank_plus: i64,
    rank_minus: i64,
    f0: Vec<u64>,
    g: Vec<u64>,
    fb: Vec<u64>,
    fc: Vec<u64>,
}

fn reduce_term(m: Mont, t: &LocalTerm, len: usize) -> Result<PrimeTerm> {
    let mut c = m.one();
    for &a in &t.taut1 {
        c = m.mul(c, m.from_i64(a));
    }
    for &a in &t.tangent {
        let inv = m.inv(m.from_i64(a)).ok_or_else(|| MochizukiError::VanishingWeight(format!("{a} mod {}", m.p)))?;
        c = m.mul(c, inv);
    }
    let mut f0 = vec![0u64; t.tangent.len() + 1];
    f0[0] = c;
    for &a in &t.tangent {
        mul_linear_pow(m, &mut f0, m.from_i64(a), 1);
    }
    let mut unit = vec![0u64; len];
    unit[0] = m.one();
    let mut g = unit.clone();
    for &a in &t.taut2 {
        mul_linear_pow(m, &mut g, m.from_i64(a), 1);
    }
    for &(a, e) in &t.nplus {
        mul_linear_pow(m, &mut g, m.from_i64(a), e);
    }
    for &(a, e) in &t.nminus {
        mul_linear_pow(m, &mut g, m.from_i64(-a), e);
    }
    let mut fb = unit.clone();
    for &(a, e) in &t.nplus {
        mul_linear_pow(m, &mut fb, m.from_i64(a), -e);
    }
    let mut fc = unit;
    for &(a, e) in &t.nminus {
        mul_linear_pow(m, &mut fc, m.from_i64(a), -e);
    }
    Ok(PrimeTerm { k: t.k, k1: t.k1, k2: t.k2, rank_plus: t.rank_plus, rank_minus: t.rank_minus, f0, g, fb, fc })
}

/// `Z_n(tau) mod p` for `n <= order` at each sample `tau`.
fn z_values_mod(m: Mont, charts: &[Vec<LocalTerm>], order: usize, taus: &[i64]) -> Result<Vec<Vec<u64>>> {
    let len = 2 * order + 1;
    let reduced: Vec<Vec<PrimeTerm>> =
        charts.iter().map(|ts| ts.iter().map(|t| reduce_term(m, t, len)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        let tm = m.from_i64(tau);
        let two_t = m.add(tm, tm);
        let one = m.one();
        let inv_tt = m.inv(two_t).expect("tau avoids 0");
        let ib = m.inv(m.add(one, two_t)).expect("tau avoids -1/2");
        let ic = m.inv(m.sub(one, two_t)).expect("tau avoids 1/2");
        let powers = |x: u64| {
            let mut v = vec![one; len];
            for j in 1..len {
                v[j] = m.mul(v[j - 1], x);
            }
            v
        };
        let (pr, pb, pc) = (powers(inv_tt), powers(ib), powers(ic));
        let plus = m.mul(two_t, ib);
        let minus = m.mul(m.neg(two_t), ic);
        // acc[n][e + 2n] for e in [-2n, 2(order - n)]
        let mut acc: Vec<Vec<u64>> = (0..=order).map(|_| vec![0u64; len]).collect();
        acc[0][0] = one;
        for terms in &reduced {
            let mut local: Vec<Vec<u64>> = (0..=order).map(|_| vec![0u64; len]).collect();
            for t in terms {
                let scaled = |s: &[u64], p: &[u64]| s.iter().zip(p).map(|(a, b)| m.mul(*a, *b)).collect::<Vec<u64>>();
                let h = mul_trunc(m, &scaled(&t.g, &pr), &scaled(&t.fb, &pb), len);
                let h = mul_trunc(m, &h, &scaled(&t.fc, &pc), len);
                let pref = [
                    m.pow_i(tm, -(t.k as i64)).unwrap(),
                    m.pow(two_t, t.k2 as u64),
                    m.pow_i(plus, t.rank_plus).unwrap(),
                    m.pow_i(minus, t.rank_minus).unwrap(),
                ]
                .into_iter()
                .fold(one, |a, b| m.mul(a, b));
                let lo = t.k1 as i64 - 2 * t.k as i64;
                let hi = 2 * (order - t.k) as i64;
                let slot = &mut local[t.k];
                for (i, &f) in t.f0.iter().enumerate() {
                    if f == 0 {
                        continue;
                    }
                    let fp = m.mul(pref, f);
                    let e0 = lo + i as i64;
                    for (j, &x) in h.iter().enumerate() {
                        let e = e0 + j as i64;
                        if e > hi {
                            break;
                        }
                        let idx = (e + 2 * t.k as i64) as usize;
                        slot[idx] = m.add(slot[idx], m.mul(fp, x));
                    }
                }
            }
            let mut next: Vec<Vec<u64>> = (0..=order).map(|_| vec![0u64; len]).collect();
            for n in 0..=order {
                let hi = 2 * (order - n) as i64;
                for k in 0..=n {
                    let (a, b) = (&acc[n - k], &local[k]);
                    for (i, &x) in a.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        let ea = i as i64 - 2 * (n - k) as i64;
                        for (j, &y) in b.iter().enumerate() {
                            let e = ea + j as i64 - 2 * k as i64;
                            if e > hi {
                                break;
                            }
                            let idx = (e + 2 * n as i64) as usize;
                            next[n][idx] = m.add(next[n][idx], m.mul(x, y));
                        }
                    }
                }
            }
            acc = next;
        }
        let mut z = Vec::with_capacity(order + 1);
        for (n, a) in acc.iter().enumerate() {
            if a[..2 * n].iter().any(|&x| x != 0) {
                return Err(MochizukiError::NotALimit(n));
            }
            z.push(m.from_mont(a[2 * n]));
        }
        out.push(z);
    }
    Ok(out)
}

/// `t^5n (1+2t)^n (1-2t)^n`.
fn clearing_poly(n: usize) -> Poly {
    let b = Poly::linear(q(1), q(2)).mul(&Poly::linear(q(1), q(-2)));
    b.pow(n as u32).shift(5 * n)
}

/// `Z_S(a1, a2, t, q)` through `q^order`, by the modular fast path.
pub fn z_series(t: &Triple, ins: &Insertion, order: usize) -> Result<Series<PoleFn>> {
    z_series_with(t, ins, order, SIGMA_PRIMARY)
}

pub fn z_series_with(t: &Triple, ins: &Insertion, order: usize, sigma: (i64, i64)) -> Result<Series<PoleFn>> {
    ins.require_euler()?;
    let charts: Vec<Vec<LocalTerm>> =
        (0..t.surface.charts.len()).map(|c| local_terms(t, c, order, sigma)).collect::<Result<_>>()?;
    let npts = 7 * order + 3;
    let taus: Vec<i64> = (0..npts as i64).map(|i| 3 + i).collect();
    // per n: CRT state of the numerator coefficients
    let mut residues: Vec<Vec<BigInt>> = (0..=order).map(|n| vec![BigInt::from(0); 7 * n + 1]).collect();
    let mut modulus = BigInt::from(1);
    let mut last: Option<Vec<Vec<Q>>> = None;
    for (round, p) in primes().enumerate() {
        if round > 200 {
            return Err(MochizukiError::Reconstruction(round));
        }
        let m = Mont::new(p);
        let f = Fp::new(p);
        let vals = z_values_mod(m, &charts, order, &taus)?;
        let xs: Vec<u64> = taus.iter().map(|&x| f.from_i64(x)).collect();
        for n in 0..=order {
            let d = clearing_poly(n);
            let ys: Vec<u64> = (0..npts)
                .map(|i| {
                    let dv = f.from_q(&d.eval(&q(taus[i]))).unwrap();
                    f.mul(dv, vals[i][n])
                })
                .collect();
            let deg = 7 * n;
            let coeffs = interpolate(f, &xs[..=deg], &ys[..=deg]);
            for i in deg + 1..npts {
                if eval_poly(f, &coeffs, xs[i]) != ys[i] {
                    return Err(MochizukiError::DegreeBound(n));
                }
            }
            for (r, c) in residues[n].iter_mut().zip(&coeffs) {
                *r = crt(r, &modulus, *c, p);
            }
        }
        modulus *= BigInt::from(p);
        let recon: Option<Vec<Vec<Q>>> =
            residues.iter().map(|rs| rs.iter().map(|r| rational_reconstruct(r, &modulus)).collect()).collect();
        if let Some(rec) = recon {
            if last.as_ref() == Some(&rec) {
                let terms = rec
                    .into_iter()
                    .enumerate()
                    .map(|(n, c)| (q(n as i64), PoleFn::new(Poly::from_coeffs(c), [5 * n as i64, n as i64, n as i64])));
                return Ok(Series::from_terms("q", terms, Some(q(order as i64 + 1))));
            }
            last = Some(rec);
        } else {
            last = None;
        }
    }
    unreachable!("prime iterator is infinite")
}

/// The Chern-number matrix with rows `w_i` of the reference triples.
pub fn reference_matrix() -> Vec<[i64; 7]> {
    Triple::reference().iter().map(|t| t.chern_vector().0).collect()
}

/// Inverse of a square rational matrix, `None` when singular.
fn invert(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> =
        a.iter().enumerate().map(|(i, r)| r.iter().cloned().chain((0..n).map(|j| q((i == j) as i64))).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `A_1..A_7` of the universality theorem.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalSeriesSet {
    pub insertion: Insertion,
    pub order: usize,
    pub a: Vec<Series<PoleFn>>,
    pub epsilon_draws: Vec<(i64, i64)>,
}

pub fn extract_universal(ins: &Insertion, order: usize) -> Result<UniversalSeriesSet> {
    extract_universal_with(ins, order, SIGMA_PRIMARY)
}

pub fn extract_universal_with(ins: &Insertion, order: usize, sigma: (i64, i64)) -> Result<UniversalSeriesSet> {
    ins.require_euler()?;
    let logs: Vec<Series<PoleFn>> =
        Triple::reference().iter().map(|t| z_series_with(t, ins, order, sigma)?.log().map_err(Into::into)).collect::<Result<_>>()?;
    // W has the w_i as columns; A_j = exp(sum_i m_ij log Z_i) with M = W^-1
    let rows = reference_matrix();
    let w: Vec<Vec<Q>> = (0..7).map(|j| (0..7).map(|i| q(rows[i][j])).collect()).collect();
    let minv = invert(&w).expect("reference Chern vectors form a basis");
    let ord = Some(q(order as i64 + 1));
    let mut a = Vec::with_capacity(7);
    for j in 0..7 {
        let mut l = Series::zero("q", ord.clone());
        for (i, li) in logs.iter().enumerate() {
            if !minv[i][j].is_zero() {
                l = l.add(&li.scale(&minv[i][j]))?;
            }
        }
        a.push(l.exp()?);
    }
    Ok(UniversalSeriesSet { insertion: ins.clone(), order, a, epsilon_draws: vec![sigma] })
}

impl UniversalSeriesSet {
    /// `A_1^w1 ... A_7^w7`.
    pub fn product(&self, w: &ChernVector) -> Result<Series<PoleFn>> {
        let mut r = Series::constant("q", PoleFn::one(), Some(q(self.order as i64 + 1)));
        for (a, &e) in self.a.iter().zip(w.0.iter()) {
            if e != 0 {
                r = r.mul(&a.pow_i(e)?)?;
            }
        }
        Ok(r)
    }

    fn series_json(&self) -> Value {
        Value::Array(self.a.iter().map(|s| s.to_json()).collect())
    }

    pub fn checksum(&self) -> String {
        let bytes = serde_json::to_vec(&self.series_json()).expect("series serialize");
        let d = Sha256::digest(&bytes);
        d.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format": FORMAT_VERSION,
            "insertion": self.insertion.key(),
            "order": self.order,
            "epsilon_draws": self.epsilon_draws.iter().map(|(a, b)| vec![a, b]).collect::<Vec<_>>(),
            "series": self.series_json(),
            "checksum": self.checksum(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| MochizukiError::Cache(m.to_string());
        if v["format"].as_u64() != Some(FORMAT_VERSION as u64) {
            return Err(bad("format version mismatch"));
        }
        let insertion = v["insertion"].as_str().and_then(Insertion::parse).ok_or_else(|| bad("insertion"))?;
        let order = v["order"].as_u64().ok_or_else(|| bad("order"))? as usize;
        let epsilon_draws = v["epsilon_draws"]
            .as_array()
            .ok_or_else(|| bad("epsilon_draws"))?
            .iter()
            .map(|p| Some((p[0].as_i64()?, p[1].as_i64()?)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("epsilon_draws"))?;
        let a = v["series"]
            .as_array()
            .ok_or_else(|| bad("series"))?
            .iter()
            .map(Series::from_json)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if a.len() != 7 {
            return Err(bad("expected seven series"));
        }
        let s = UniversalSeriesSet { insertion, order, a, epsilon_draws };
        if v["checksum"].as_str() != Some(s.checksum().as_str()) {
            return Err(bad("checksum mismatch"));
        }
        Ok(s)
    }
}

pub fn cache_path(dir: &Path, ins: &Insertion, order: usize) -> PathBuf {
    dir.join(format!("universal-{}-o{}-v{}.json", ins.key(), order, FORMAT_VERSION))
}

/// Read a cached set of at least `order`, or extract and write it.
pub fn load_or_extract(dir: &Path, ins: &Insertion, order: usize) -> Result<UniversalSeriesSet> {
    for o in order..=order + 16 {
        let p = cache_path(dir, ins, o);
        if let Ok(text) = std::fs::read_to_string(&p) {
            let v: Value = serde_json::from_str(&text).map_err(|e| MochizukiError::Cache(e.to_string()))?;
            let mut s = UniversalSeriesSet::from_json(&v)?;
            if o > order {
                s.a = s.a.iter().map(|x| x.truncate_i(order as i64 + 1)).collect();
                s.order = order;
            }
            return Ok(s);
        }
    }
    let s = extract_universal(ins, order)?;
    write_cache(dir, &s)?;
    Ok(s)
}

pub fn write_cache(dir: &Path, s: &UniversalSeriesSet) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| MochizukiError::Cache(e.to_string()))?;
    let p = cache_path(dir, &s.insertion, s.order);
    let text = serde_json::to_string_pretty(&s.to_json()).expect("serialize") + "\n";
    std::fs::write(&p, text).map_err(|e| MochizukiError::Cache(e.to_string()))?;
    Ok(p)
}

/// Which `(a1, a2)` with `a1 + a2 = c1` enter the universal formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumRule {
    /// `a1 H <= a2 H`. Decided through `K` in place of `H`, which is exact for minimal
    /// surfaces of general type (`KH > 0`) and for a single basic class.
    Half,
    /// All `a1 + a2 = c1`, the conjectural strengthening without polarization conditions.
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rank2Value {
    pub value: Q,
    pub notes: Vec<String>,
}

/// Data of one Seiberg-Witten term of the universal formula.
pub fn term_vector(s: &SurfaceDescriptor, c1: &str, class: usize) -> Result<ChernVector> {
    let c = s.c1(c1)?;
    let a = &s.classes[class];
    let (a11, a1c, a1k) = (a.a_dot_a, c.c1_dot[class], a.a_dot_k);
    Ok(ChernVector([a11, a1c - a11, c.c1_sq - 2 * a1c + a11, a1k, c.c1_dot_k - a1k, s.k2, s.chi_o]))
}

/// `e^vir(M)` with `vd(M) = vd` via the universal formula.
pub fn evaluate_rank2(
    s: &SurfaceDescriptor,
    c1: &str,
    set: &UniversalSeriesSet,
    vd: i64,
    rule: SumRule,
) -> Result<Rank2Value> {
    set.insertion.require_euler()?;
    let c = s.c1(c1)?;
    let mut notes = Vec::new();
    if rule == SumRule::Full {
        notes.push("sum over all a1 + a2 = c1 (polarization conditions dropped)".to_string());
    } else if !(s.minimal_general_type || s.classes.len() == 1) {
        return Err(MochizukiError::Polarization(s.name.clone()));
    }
    if s.derived_data {
        notes.push(format!("{} carries derived SW data", s.name));
    }
    if vd >= 0 && sheaf_chi(s, c1, vd)? <= q(0) {
        notes.push(format!("chi(v) <= 0 at vd {vd}: outside the range of the universal formula"));
    }
    let mut total = q(0);
    if vd < 0 {
        return Ok(Rank2Value { value: total, notes });
    }
    for (i, a) in s.classes.iter().enumerate() {
        if a.sw == 0 {
            continue;
        }
        if rule == SumRule::Half && 2 * a.a_dot_k > c.c1_dot_k {
            continue;
        }
        let w = term_vector(s, c1, i)?;
        let [a11, a12, a22, ..] = w.0;
        let shift = -(a11 - 2 * a12 + a22) - 3 * s.chi_o;
        let need = vd - shift;
        if need.rem_euclid(4) != 0 {
            continue;
        }
        let m = need / 4;
        if m < 0 {
            continue;
        }
        if m as usize > set.order {
            return Err(MochizukiError::InsufficientOrder { vd, need: m, have: set.order });
        }
        let chi2 = w.chi_of(0, 1);
        let d21 = w.chi_of(-1, 1);
        let d12 = w.chi_of(1, -1);
        let scal = q(-2 * a.sw) * crate::rational::pow_qi(&q(2), -chi2 + d21) * crate::rational::pow_qi(&q(-2), d12);
        let pref = PoleFn::unit(scal, s.chi_o - 1 + d21 + d12, -d21, -d12);
        let coeff = set.product(&w)?.truncate_i(m + 1).coeff_i(m)?;
        total += pref.mul(&coeff).residue();
    }
    Ok(Rank2Value { value: total, notes })
}

/// `chi` of the Chern character `(2, c1, c1^2/2 - c2)` with `c2` fixed by `vd`. The universal
/// formula needs it positive.
pub fn sheaf_chi(s: &SurfaceDescriptor, c1: &str, vd: i64) -> Result<Q> {
    let c = s.c1(c1)?;
    let c2 = qr(vd + c.c1_sq + 3 * s.chi_o, 4);
    Ok(q(2 * s.chi_o) - qr(c.c1_dot_k, 2) + qr(c.c1_sq, 2) - c2)
}

/// Smallest universal-series order for which `evaluate_rank2` covers every `vd <= max_vd`.
pub fn required_order(s: &SurfaceDescriptor, c1: &str, max_vd: i64, rule: SumRule) -> Result<usize> {
    let c = s.c1(c1)?;
    let mut need = 0;
    for (i, a) in s.classes.iter().enumerate() {
        if a.sw == 0 || (rule == SumRule::Half && 2 * a.a_dot_k > c.c1_dot_k) {
            continue;
        }
        let [a11, a12, a22, ..] = term_vector(s, c1, i)?.0;
        let shift = -(a11 - 2 * a12 + a22) - 3 * s.chi_o;
        for vd in 0..=max_vd {
            let d = vd - shift;
            if d >= 0 && d % 4 == 0 {
                need = need.max((d / 4) as usize);
            }
        }
    }
    Ok(need)
}

/// Render a value for reports.
pub fn show(x: &Q) -> String {
    fmt_q(x)
}

pub fn parse_value(s: &str) -> Option<Q> {
    parse_q(s)
}
