//! Torus-fixed points of Hilbert schemes of points on toric surfaces and Atiyah-Bott
//! localization.
//!
//! Weights are integer combinations of `eps1, eps2, t`. Integration specializes
//! `(eps1, eps2)` to a generic rational pair, which leaves rational functions of `t`.

use crate::domain::{Coeff, RatFn};
use crate::poly::Poly;
use crate::rational::{q, qr, Q};
use crate::series::{Series, SeriesError};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbError {
    #[error("partition parts must be positive and weakly decreasing: {0:?}")]
    BadPartition(Vec<usize>),
    #[error("weight {weight} vanishes at (eps1, eps2) = ({s1}, {s2}) at fixed point {point}; re-draw the specialization")]
    VanishingWeight { weight: String, s1: String, s2: String, point: String },
    #[error("mu^{0} survives in a non-equivariant limit")]
    NotALimit(String),
    #[error("unknown divisor {0}")]
    UnknownDivisor(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, HilbError>;

/// `e1 * eps1 + e2 * eps2 + t * t`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EquivWeight {
    pub e1: i64,
    pub e2: i64,
    pub t: i64,
}

impl EquivWeight {
    pub const ZERO: EquivWeight = EquivWeight { e1: 0, e2: 0, t: 0 };

    pub const fn new(e1: i64, e2: i64, t: i64) -> Self {
        EquivWeight { e1, e2, t }
    }

    pub const fn eps(e1: i64, e2: i64) -> Self {
        EquivWeight { e1, e2, t: 0 }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    /// Dual character: all signs flipped.
    pub fn dual(&self) -> Self {
        -*self
    }
}

impl Add for EquivWeight {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        EquivWeight::new(self.e1 + o.e1, self.e2 + o.e2, self.t + o.t)
    }
}

impl Sub for EquivWeight {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for EquivWeight {
    type Output = Self;
    fn neg(self) -> Self {
        EquivWeight::new(-self.e1, -self.e2, -self.t)
    }
}

impl Mul<EquivWeight> for i64 {
    type Output = EquivWeight;
    fn mul(self, w: EquivWeight) -> EquivWeight {
        EquivWeight::new(self * w.e1, self * w.e2, self * w.t)
    }
}

impl fmt::Display for EquivWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e1{:+}e2{:+}t", self.e1, self.e2, self.t)
    }
}

/// Signed multiset of weights, i.e. a class in the representation ring written additively.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivKClass {
    terms: BTreeMap<EquivWeight, i64>,
}

impl EquivKClass {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_weights<I: IntoIterator<Item = EquivWeight>>(ws: I) -> Self {
        let mut k = Self::new();
        for w in ws {
            k.push(w, 1);
        }
        k
    }

    pub fn push(&mut self, w: EquivWeight, m: i64) {
        if m == 0 {
            return;
        }
        let e = self.terms.entry(w).or_insert(0);
        *e += m;
        if *e == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn add_class(&mut self, o: &EquivKClass) {
        for (w, m) in &o.terms {
            self.push(*w, *m);
        }
    }

    pub fn neg(&self) -> Self {
        EquivKClass { terms: self.terms.iter().map(|(w, m)| (*w, -m)).collect() }
    }

    pub fn dual(&self) -> Self {
        EquivKClass { terms: self.terms.iter().map(|(w, m)| (w.dual(), *m)).collect() }
    }

    /// Tensor with a one-dimensional character.
    pub fn twist(&self, c: EquivWeight) -> Self {
        EquivKClass { terms: self.terms.iter().map(|(w, m)| (*w + c, *m)).collect() }
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EquivWeight, i64)> + '_ {
        self.terms.iter().map(|(w, m)| (*w, *m))
    }

    /// Signed multiplicity of the zero weight.
    pub fn zero_weights(&self) -> i64 {
        self.terms.get(&EquivWeight::ZERO).copied().unwrap_or(0)
    }

    /// `prod (1 + w)^m` at `eps = mu * sigma`, below `mu^order`.
    pub fn chern_mu(&self, sp: &Specialization, order: i64) -> Result<Series<RatFn>> {
        let mut r = Series::constant(MU, RatFn::one(), Some(q(order)));
        for (w, m) in self.iter() {
            let f = sp.mu_weight(w).add(&Series::one(MU))?;
            let f = if m > 0 { f.pow_i(m)? } else { f.truncate_i(order).pow_i(m)? };
            r = r.mul(&f)?;
        }
        Ok(r)
    }

    /// `prod w^m` at `eps = mu * sigma`, below `mu^order`.
    pub fn euler_mu(&self, sp: &Specialization, order: i64, point: &dyn fmt::Display) -> Result<Series<RatFn>> {
        let mut r = Series::one(MU);
        for (w, m) in self.iter() {
            if w.t == 0 && sp.eval_eps(w).is_zero() {
                return Err(sp.vanishing(w, point));
            }
            let f = sp.mu_weight(w);
            let f = if m > 0 || f.num_terms() == 1 { f.pow_i(m)? } else { f.truncate_i(order).pow_i(m)? };
            r = r.mul(&f)?;
        }
        Ok(if r.is_exact() && r.num_terms() == 1 { r } else { r.truncate_i(order) })
    }

    /// Equivariant Euler class at a specialization.
    pub fn euler(&self, sp: &Specialization, point: &dyn fmt::Display) -> Result<RatFn> {
        let mut num = Poly::one();
        let mut den = Poly::one();
        for (w, m) in self.iter() {
            let p = sp.eval(w);
            if p.is_zero() {
                return Err(sp.vanishing(w, point));
            }
            if m > 0 {
                num = num.mul(&p.pow(m as u32));
            } else {
                den = den.mul(&p.pow((-m) as u32));
            }
        }
        Ok(RatFn::new(num, den))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(HilbError::BadPartition(parts));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Self {
        let m = self.0.first().copied().unwrap_or(0);
        Partition((0..m).map(|i| self.0.iter().filter(|&&p| p > i).count()).collect())
    }

    /// Boxes `(i, j)`: row `j` has length `parts[j]` along the first coordinate.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().enumerate().flat_map(|(j, &l)| (0..l).map(move |i| (i, j)))
    }

    pub fn arm(&self, i: usize, j: usize) -> i64 {
        self.0[j] as i64 - i as i64 - 1
    }

    pub fn leg(&self, i: usize, j: usize) -> i64 {
        self.0.iter().filter(|&&p| p > i).count() as i64 - j as i64 - 1
    }

    /// All partitions of `n`, reverse lexicographic.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Character `sum_(i,j) s1^i s2^j` of the structure sheaf, as exponent pairs.
    pub fn character(&self) -> Vec<(i64, i64)> {
        self.boxes().map(|(i, j)| (i as i64, j as i64)).collect()
    }
}

/// Torus characters of the two local coordinates on an affine chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chart {
    pub w1: EquivWeight,
    pub w2: EquivWeight,
}

impl Chart {
    pub fn new(w1: (i64, i64), w2: (i64, i64)) -> Self {
        Chart { w1: EquivWeight::eps(w1.0, w1.1), w2: EquivWeight::eps(w2.0, w2.1) }
    }

    /// Weight of the monomial `x^i y^j`.
    pub fn monomial(&self, i: i64, j: i64) -> EquivWeight {
        i * self.w1 + j * self.w2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub name: String,
    /// Character of the divisor on each chart.
    pub chars: Vec<EquivWeight>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricSurface {
    pub name: String,
    pub charts: Vec<Chart>,
    pub divisors: Vec<Divisor>,
    pub k2: i64,
    pub chi_o: i64,
    pub e: i64,
    /// Intersection pairing on `divisors`, same order.
    pub pairing: Vec<Vec<i64>>,
    /// `D . K` for each divisor.
    pub dot_k: Vec<i64>,
}

impl ToricSurface {
    pub fn p2() -> Self {
        let charts = vec![Chart::new((1, 0), (0, 1)), Chart::new((-1, 1), (-1, 0)), Chart::new((0, -1), (1, -1))];
        let h = Divisor { name: "H".into(), chars: vec![EquivWeight::ZERO, EquivWeight::eps(1, 0), EquivWeight::eps(0, 1)] };
        ToricSurface {
            name: "P2".into(),
            charts,
            divisors: vec![h],
            k2: 9,
            chi_o: 1,
            e: 3,
            pairing: vec![vec![1]],
            dot_k: vec![-3],
        }
    }

    pub fn p1xp1() -> Self {
        let charts = vec![
            Chart::new((1, 0), (0, 1)),
            Chart::new((-1, 0), (0, 1)),
            Chart::new((1, 0), (0, -1)),
            Chart::new((-1, 0), (0, -1)),
        ];
        // chart k sits at (X_{k&1}, Y_{k>>1}); H1 is cut by X_1, H2 by Y_1
        let z = EquivWeight::ZERO;
        let h1 = Divisor { name: "H1".into(), chars: vec![z, EquivWeight::eps(1, 0), z, EquivWeight::eps(1, 0)] };
        let h2 = Divisor { name: "H2".into(), chars: vec![z, z, EquivWeight::eps(0, 1), EquivWeight::eps(0, 1)] };
        ToricSurface {
            name: "P1xP1".into(),
            charts,
            divisors: vec![h1, h2],
            k2: 8,
            chi_o: 1,
            e: 4,
            pairing: vec![vec![0, 1], vec![1, 0]],
            dot_k: vec![-2, -2],
        }
    }

    /// `S' ⊔ S''`; divisors are given as pairs of component divisor names (`None` = 0).
    pub fn disjoint_union(a: &ToricSurface, b: &ToricSurface, divisors: &[(&str, Option<&str>, Option<&str>)]) -> Result<Self> {
        let mut charts = a.charts.clone();
        charts.extend_from_slice(&b.charts);
        let mut divs = Vec::new();
        let mut idx = Vec::new();
        for (name, da, db) in divisors {
            let ca = match da {
                Some(n) => a.divisor(n)?.chars.clone(),
                None => vec![EquivWeight::ZERO; a.charts.len()],
            };
            let cb = match db {
                Some(n) => b.divisor(n)?.chars.clone(),
                None => vec![EquivWeight::ZERO; b.charts.len()],
            };
            let ia = da.map(|n| a.divisor_index(n)).transpose()?;
            let ib = db.map(|n| b.divisor_index(n)).transpose()?;
            idx.push((ia, ib));
            divs.push(Divisor { name: name.to_string(), chars: ca.into_iter().chain(cb).collect() });
        }
        let pair = |x: &ToricSurface, i: Option<usize>, j: Option<usize>| match (i, j) {
            (Some(i), Some(j)) => x.pairing[i][j],
            _ => 0,
        };
        let pairing = idx
            .iter()
            .map(|&(ia, ib)| idx.iter().map(|&(ja, jb)| pair(a, ia, ja) + pair(b, ib, jb)).collect())
            .collect();
        let dot_k = idx
            .iter()
            .map(|&(ia, ib)| ia.map_or(0, |i| a.dot_k[i]) + ib.map_or(0, |i| b.dot_k[i]))
            .collect();
        Ok(ToricSurface {
            name: format!("{}+{}", a.name, b.name),
            charts,
            divisors: divs,
            k2: a.k2 + b.k2,
            chi_o: a.chi_o + b.chi_o,
            e: a.e + b.e,
            pairing,
            dot_k,
        })
    }

    pub fn divisor_index(&self, name: &str) -> Result<usize> {
        self.divisors.iter().position(|d| d.name == name).ok_or_else(|| HilbError::UnknownDivisor(name.into()))
    }

    pub fn divisor(&self, name: &str) -> Result<&Divisor> {
        Ok(&self.divisors[self.divisor_index(name)?])
    }

    /// Character of an integer combination of divisors on chart `c`.
    pub fn character(&self, d: &DivisorCombo, c: usize) -> EquivWeight {
        d.0.iter().fold(EquivWeight::ZERO, |acc, (i, m)| acc + *m * self.divisors[*i].chars[c])
    }

    /// `(a.b, a.K)` of divisor combinations.
    pub fn dot(&self, a: &DivisorCombo, b: &DivisorCombo) -> i64 {
        let mut s = 0;
        for (i, m) in &a.0 {
            for (j, n) in &b.0 {
                s += m * n * self.pairing[*i][*j];
            }
        }
        s
    }

    pub fn dot_k(&self, a: &DivisorCombo) -> i64 {
        a.0.iter().map(|(i, m)| m * self.dot_k[*i]).sum()
    }
}

/// Integer combination of named T-invariant divisors, by index into `ToricSurface::divisors`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisorCombo(pub Vec<(usize, i64)>);

impl DivisorCombo {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn parse(s: &ToricSurface, terms: &[(&str, i64)]) -> Result<Self> {
        terms.iter().map(|(n, m)| Ok((s.divisor_index(n)?, *m))).collect::<Result<Vec<_>>>().map(DivisorCombo)
    }

    pub fn scaled(&self, k: i64) -> Self {
        DivisorCombo(self.0.iter().map(|(i, m)| (*i, m * k)).collect())
    }

    pub fn plus(&self, o: &Self) -> Self {
        DivisorCombo(self.0.iter().chain(o.0.iter()).cloned().collect())
    }
}

/// A fixed point of `S^[n1] x S^[n2]`: one partition per factor and chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub parts: [Vec<Partition>; 2],
    pub n: (usize, usize),
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Vec<Partition>| v.iter().map(|p| format!("{:?}", p.parts())).collect::<Vec<_>>().join(",");
        write!(f, "[{}]x[{}]", show(&self.parts[0]), show(&self.parts[1]))
    }
}

/// Every way to place total size `n` over `charts` charts.
pub fn chart_partitions(charts: usize, n: usize) -> Vec<Vec<Partition>> {
    if charts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for k in 0..=n {
        for p in Partition::all(k) {
            for rest in chart_partitions(charts - 1, n - k) {
                let mut v = vec![p.clone()];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

pub fn fixed_points(s: &ToricSurface, n1: usize, n2: usize) -> Vec<FixedPoint> {
    let a = chart_partitions(s.charts.len(), n1);
    let b = chart_partitions(s.charts.len(), n2);
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in &a {
        for y in &b {
            out.push(FixedPoint { parts: [x.clone(), y.clone()], n: (n1, n2) });
        }
    }
    out
}

/// Tangent weights at the monomial ideal of `lambda`, from arm and leg lengths.
///
/// The chart weights are characters of the coordinate functions, so in the convention of
/// [`taut_weights`] (where a function `x^i y^j` has weight `i w1 + j w2`) the tangent
/// representation is the dual of this class. Only odd-degree classes see the difference.
pub fn tangent_weights(lambda: &Partition, chart: &Chart) -> EquivKClass {
    let mut k = EquivKClass::new();
    for (i, j) in lambda.boxes() {
        let a = lambda.arm(i, j);
        let l = lambda.leg(i, j);
        k.push((a + 1) * chart.w1 - l * chart.w2, 1);
        k.push(-a * chart.w1 + (l + 1) * chart.w2, 1);
    }
    k
}

/// Tangent weights of a whole fixed point of `S^[n1] x S^[n2]`.
pub fn tangent_at(s: &ToricSurface, fp: &FixedPoint) -> EquivKClass {
    let mut k = EquivKClass::new();
    for f in &fp.parts {
        for (c, lam) in f.iter().enumerate() {
            k.add_class(&tangent_weights(lam, &s.charts[c]));
        }
    }
    k
}

/// `L^[n]` at the monomial ideal: `chi_D + i w1 + j w2` over boxes.
pub fn taut_weights(chi_d: EquivWeight, lambda: &Partition, chart: &Chart) -> EquivKClass {
    EquivKClass::from_weights(lambda.boxes().map(|(i, j)| chi_d + chart.monomial(i as i64, j as i64)))
}

/// `L^[n]` at a collection of chart partitions.
pub fn taut_at(s: &ToricSurface, d: &DivisorCombo, parts: &[Partition]) -> EquivKClass {
    let mut k = EquivKClass::new();
    for (c, lam) in parts.iter().enumerate() {
        k.add_class(&taut_weights(s.character(d, c), lam, &s.charts[c]));
    }
    k
}

/// `RHom(O_W, O_Z(D))` for subschemes supported on charts `cw` and `cz`: zero unless
/// the charts agree, otherwise `chi_D W* Z (1-s1)(1-s2)/(s1 s2)`.
pub fn rhom_pair(w: (&Partition, usize), z: (&Partition, usize), chi_d: EquivWeight, s: &ToricSurface) -> EquivKClass {
    let mut k = EquivKClass::new();
    if w.1 != z.1 {
        return k;
    }
    let ch = &s.charts[w.1];
    // (1-s1)(1-s2)/(s1 s2) = s1^-1 s2^-1 - s2^-1 - s1^-1 + 1
    let p = [((-1, -1), 1), ((0, -1), -1), ((-1, 0), -1), ((0, 0), 1)];
    for (wi, wj) in w.0.character() {
        for (zi, zj) in z.0.character() {
            for ((pi, pj), m) in p {
                k.push(chi_d + ch.monomial(zi - wi + pi, zj - wj + pj), m);
            }
        }
    }
    k
}

/// A rational value for `(eps1, eps2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub s1: Q,
    pub s2: Q,
}

impl Specialization {
    pub fn new(s1: Q, s2: Q) -> Self {
        Specialization { s1, s2 }
    }

    pub fn primary() -> Self {
        Self::new(qr(97, 61), qr(-55, 129))
    }

    pub fn secondary() -> Self {
        Self::new(qr(-31, 17), qr(211, 43))
    }

    /// The weight as a polynomial in `t`.
    pub fn eval(&self, w: EquivWeight) -> Poly {
        Poly::linear(self.eval_eps(w), q(w.t))
    }

    /// `w` at `eps = mu * sigma`, exact in `mu`.
    pub fn mu_weight(&self, w: EquivWeight) -> Series<RatFn> {
        let c0 = RatFn::poly(Poly::monomial(q(w.t), 1));
        Series::from_coeffs(MU, vec![c0, RatFn::from_q(&self.eval_eps(w))], None)
    }

    pub fn eval_eps(&self, w: EquivWeight) -> Q {
        &self.s1 * q(w.e1) + &self.s2 * q(w.e2)
    }

    fn vanishing(&self, w: EquivWeight, point: &dyn fmt::Display) -> HilbError {
        HilbError::VanishingWeight {
            weight: w.to_string(),
            s1: crate::rational::fmt_q(&self.s1),
            s2: crate::rational::fmt_q(&self.s2),
            point: point.to_string(),
        }
    }
}

/// Non-equivariant integral over `S^[n1] x S^[n2]`.
///
/// Weights are evaluated at `eps = mu * sigma`; `integrand(F, sp, order)` must return a
/// `mu`-series correct below `mu^order`. The result is the `mu^0` coefficient of
/// `sum_F integrand(F) / e(T_F)`, whose negative `mu` powers are checked to cancel.
pub fn integrate<F>(s: &ToricSurface, n: (usize, usize), integrand: F, sp: &Specialization) -> Result<RatFn>
where
    F: Fn(&FixedPoint, &Specialization, i64) -> Result<Series<RatFn>>,
{
    let dim = 2 * (n.0 + n.1) as i64;
    let mut acc = Series::zero(MU, Some(q(1)));
    for fp in fixed_points(s, n.0, n.1) {
        let e = tangent_at(s, &fp).euler_mu(sp, dim + 1, &fp)?;
        let v = integrand(&fp, sp, dim + 1)?;
        acc = acc.add(&v.div(&e)?)?;
    }
    for (k, c) in acc.terms() {
        if k < q(0) && !c.is_zero() {
            return Err(HilbError::NotALimit(crate::rational::fmt_q(&k)));
        }
    }
    Ok(acc.coeff_i(0)?)
}

pub const MU: &str = "mu";

/// Constant weights of a class at a specialization, with multiplicities; `t` must not occur.
fn constant_weights(k: &EquivKClass, sp: &Specialization) -> Vec<(Q, i64)> {
    k.iter()
        .map(|(w, m)| {
            assert_eq!(w.t, 0, "constant weight expected");
            (sp.eval_eps(w), m)
        })
        .collect()
}

/// `prod (1 + w h)^m` as a series in `h` through `h^deg`.
fn total_chern(ws: &[(Q, i64)], deg: i64) -> Result<Series<Q>> {
    let mut r = Series::constant("h", q(1), Some(q(deg + 1)));
    for (w, m) in ws {
        if w.is_zero() {
            continue;
        }
        let f = Series::from_coeffs("h", vec![q(1), w.clone()], Some(deg + 1));
        r = r.mul(&f.pow_i(*m)?)?;
    }
    Ok(r)
}

/// Degree-`2n` localization `sum_F [prod (1 + w h)]_{h^2n} / e(T_F)` of a per-point class.
fn integrate_top<F>(s: &ToricSurface, n: usize, sp: &Specialization, top: F) -> Result<Q>
where
    F: Fn(&FixedPoint) -> Result<Q>,
{
    let mut acc = q(0);
    for fp in fixed_points(s, n, 0) {
        let e = tangent_at(s, &fp).euler(sp, &fp)?;
        let e = e.eval(&q(0)).expect("constant Euler class");
        acc += top(&fp)? / e;
    }
    Ok(acc)
}

/// `int_{S^[n]} c_2n(T)`.
pub fn euler_number(s: &ToricSurface, n: usize, sp: &Specialization) -> Result<Q> {
    integrate_top(s, n, sp, |fp| {
        let c = total_chern(&constant_weights(&tangent_at(s, fp), sp), 2 * n as i64)?;
        Ok(c.coeff_i(2 * n as i64)?)
    })
}

/// `int_{S^[n]} s_2n(L^[n])`, with the total Segre class `1 / c(L^[n])`.
pub fn segre_number(s: &ToricSurface, l: &DivisorCombo, n: usize, sp: &Specialization) -> Result<Q> {
    integrate_top(s, n, sp, |fp| {
        let ws: Vec<(Q, i64)> = constant_weights(&taut_at(s, l, &fp.parts[0]), sp).into_iter().map(|(w, m)| (w, -m)).collect();
        Ok(total_chern(&ws, 2 * n as i64)?.coeff_i(2 * n as i64)?)
    })
}

/// `chi(S^[n], mu(L) (x) E^r)` with `E = det O^[n]`, by Hirzebruch-Riemann-Roch and localization.
pub fn verlinde_number(s: &ToricSurface, l: &DivisorCombo, r: i64, n: usize, sp: &Specialization) -> Result<Q> {
    let deg = 2 * n as i64;
    let x = Series::<Q>::gen("h");
    // x / (1 - e^-x)
    let emx = x.neg().truncate_i(deg + 2).exp()?;
    let todd = Series::constant("h", q(1), Some(q(deg + 2))).sub(&emx)?.shift(&q(-1)).truncate_i(deg + 1).invert()?;
    integrate_top(s, n, sp, |fp| {
        // c1(mu(L)) = c1(L^[n]) - c1(O^[n])
        let sum = |k: &EquivKClass| constant_weights(k, sp).into_iter().fold(q(0), |a, (w, m)| a + w * q(m));
        let c1 = sum(&taut_at(s, l, &fp.parts[0])) - q(1 - r) * sum(&taut_at(s, &DivisorCombo::zero(), &fp.parts[0]));
        let mut acc = Series::from_coeffs("h", vec![q(0), c1], Some(deg + 1)).exp()?;
        for (w, m) in constant_weights(&tangent_at(s, fp).dual(), sp) {
            acc = acc.mul(&todd.subst_monomial(&w, &q(1))?.pow_i(m)?)?;
        }
        Ok(acc.coeff_i(deg)?)
    })
}

/// Cobordism class of `S^[n]` at numeric `v`: `int prod_i (1 + sum_k v_k x_i^k)` over the
/// Chern roots of `T`; `v[k-1]` is `v_k`, higher `v_k` are zero.
pub fn cobordism_number(s: &ToricSurface, n: usize, sp: &Specialization, v: &[Q]) -> Result<Q> {
    let deg = 2 * n as i64;
    let mut c = vec![q(1)];
    c.extend(v.iter().take(deg as usize).cloned());
    let genus = Series::from_coeffs("h", c, Some(deg + 1));
    integrate_top(s, n, sp, |fp| {
        let mut acc = Series::constant("h", q(1), Some(q(deg + 1)));
        for (w, m) in constant_weights(&tangent_at(s, fp).dual(), sp) {
            acc = acc.mul(&genus.subst_monomial(&w, &q(1))?.pow_i(m)?)?;
        }
        Ok(acc.coeff_i(deg)?)
    })
}
