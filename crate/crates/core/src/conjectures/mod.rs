//! Closed-form generating functions for virtual invariants of moduli of sheaves, and
//! checkers for the identities relating them.
//!
//! Evaluators in `x` (or `p`) take `order` as the largest exponent wanted; any internal
//! q-series are built with truncation bound `order + 1`.

mod eval;
mod identities;
mod rank2;
mod rank3;
mod universal;

pub use eval::{eval_rank2, eval_rank3, Evaluated, Rank2Params};
pub use identities::{check_identity, hurwitz_by_reduction, IdentityKind, IdentityReport, Mismatch};
pub use rank2::{
    cob_rk2, ellgen_rk2, euler_rk2, chiy_rk2, kdonaldson_rk2, verlinde_chiy_rk2, vwfull_rk2, zinst_rank2, EllReading, LineData,
    COB_MAX_ORDER,
};
pub use rank3::{chiy_rk3, euler_rk3, euler_rk3_explicit, mono_rk3, QuadraticRootData};
pub use universal::{example1, example2, example3, universal_vs, UniversalBundle};

use crate::domain::{Coeff, Cyclo12, LaurentU};
use crate::hilb::HilbError;
use crate::qforms::QformError;
use crate::rational::{fmt_q, q, Q};
use crate::series::{Series, SeriesError};
use crate::surfaces::SurfaceError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConjError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Qform(#[from] QformError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Hilb(#[from] HilbError),
    #[error("coefficient at {0} is not rational: {1}")]
    NotRational(String, String),
    #[error("coefficient at {0} is not a Laurent polynomial in y^(1/2)")]
    NotLaurent(String),
    #[error("coefficient at {0} is not symmetric under y <-> 1/y")]
    NotSymmetric(String),
    #[error("rank-3 pairing: {0}")]
    Pairing(String),
    #[error("insufficient order: {0}")]
    Order(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, ConjError>;

/// The generating functions and correspondences this module knows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConjectureId {
    EulerRk2,
    EulerRk3,
    ChiYRk2,
    ChiYRk3,
    EllGenRk2,
    CobRk2,
    KDonaldsonRk2,
    VerlindeChiYRk2,
    VerlindeGeneral { rho: i64, r: i64 },
    SegreGeneral { rho: i64, s: i64 },
    VWFullRk2,
    MonoRk3,
    Lehn,
    Klyachko,
    EGLVerlinde(i64),
    MOPSegre(i64),
}

impl ConjectureId {
    pub fn key(&self) -> &'static str {
        match self {
            ConjectureId::EulerRk2 => "euler-rk2",
            ConjectureId::EulerRk3 => "euler-rk3",
            ConjectureId::ChiYRk2 => "chiy-rk2",
            ConjectureId::ChiYRk3 => "chiy-rk3",
            ConjectureId::EllGenRk2 => "ellgen-rk2",
            ConjectureId::CobRk2 => "cob-rk2",
            ConjectureId::KDonaldsonRk2 => "kdonaldson-rk2",
            ConjectureId::VerlindeChiYRk2 => "verlinde-chiy-rk2",
            ConjectureId::VerlindeGeneral { .. } => "verlinde-general",
            ConjectureId::SegreGeneral { .. } => "segre-general",
            ConjectureId::VWFullRk2 => "vw-full-rk2",
            ConjectureId::MonoRk3 => "mono-rk3",
            ConjectureId::Lehn => "lehn",
            ConjectureId::Klyachko => "klyachko",
            ConjectureId::EGLVerlinde(_) => "egl-verlinde",
            ConjectureId::MOPSegre(_) => "mop-segre",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ConjectureId::EulerRk2 => "rank 2 virtual Euler characteristics",
            ConjectureId::EulerRk3 => "rank 3 virtual Euler characteristics",
            ConjectureId::ChiYRk2 => "rank 2 normalized virtual chi_y-genera",
            ConjectureId::ChiYRk3 => "rank 3 normalized virtual chi_y-genera",
            ConjectureId::EllGenRk2 => "rank 2 virtual elliptic genera",
            ConjectureId::CobRk2 => "rank 2 virtual cobordism classes",
            ConjectureId::KDonaldsonRk2 => "rank 2 K-theoretic Donaldson invariants",
            ConjectureId::VerlindeChiYRk2 => "rank 2 chi_y-genera valued in a Donaldson line bundle",
            ConjectureId::VerlindeGeneral { .. } => "universal Verlinde series in rank rho",
            ConjectureId::SegreGeneral { .. } => "universal Segre series in rank rho",
            ConjectureId::VWFullRk2 => "full SU(2) Vafa-Witten partition function",
            ConjectureId::MonoRk3 => "rank 3 monopole contribution",
            ConjectureId::Lehn => "top Segre classes of tautological bundles on Hilbert schemes",
            ConjectureId::Klyachko => "Euler characteristics of rank 2 sheaves on the projective plane",
            ConjectureId::EGLVerlinde(_) => "Verlinde series of Hilbert schemes",
            ConjectureId::MOPSegre(_) => "Segre series of Hilbert schemes",
        }
    }

    /// Parses a key; parametrized ids take their parameters from `a`, `b`.
    pub fn parse(key: &str, a: i64, b: i64) -> Option<Self> {
        Some(match key {
            "euler-rk2" => ConjectureId::EulerRk2,
            "euler-rk3" => ConjectureId::EulerRk3,
            "chiy-rk2" => ConjectureId::ChiYRk2,
            "chiy-rk3" => ConjectureId::ChiYRk3,
            "ellgen-rk2" => ConjectureId::EllGenRk2,
            "cob-rk2" => ConjectureId::CobRk2,
            "kdonaldson-rk2" => ConjectureId::KDonaldsonRk2,
            "verlinde-chiy-rk2" => ConjectureId::VerlindeChiYRk2,
            "verlinde-general" => ConjectureId::VerlindeGeneral { rho: a, r: b },
            "segre-general" => ConjectureId::SegreGeneral { rho: a, s: b },
            "vw-full-rk2" => ConjectureId::VWFullRk2,
            "mono-rk3" => ConjectureId::MonoRk3,
            "lehn" => ConjectureId::Lehn,
            "klyachko" => ConjectureId::Klyachko,
            "egl-verlinde" => ConjectureId::EGLVerlinde(b),
            "mop-segre" => ConjectureId::MOPSegre(b),
            _ => return None,
        })
    }
}

/// Embeds a rational series into another coefficient domain.
pub(crate) fn lift<C: Coeff>(s: &Series<Q>) -> Series<C> {
    s.map_coeffs(|c| C::from_q(c))
}

pub(crate) fn pow2(e: i64) -> Q {
    crate::rational::pow_qi(&q(2), e)
}

/// Coefficientwise rationality of a cyclotomic series.
pub(crate) fn rationalize(s: &Series<Cyclo12>) -> Result<Series<Q>> {
    let mut terms = Vec::new();
    for (e, c) in s.terms() {
        let r = c.rational().ok_or_else(|| ConjError::NotRational(fmt_q(&e), format!("{c:?}")))?;
        terms.push((e, r));
    }
    Ok(Series::from_terms(s.var(), terms, s.order()))
}

/// Every coefficient Laurent in `u` and invariant under `u -> 1/u`.
pub(crate) fn assert_symmetric_laurent(s: &Series<LaurentU>) -> Result<()> {
    for (e, c) in s.terms() {
        if !c.is_laurent() {
            return Err(ConjError::NotLaurent(fmt_q(&e)));
        }
        if !c.is_symmetric() {
            return Err(ConjError::NotSymmetric(fmt_q(&e)));
        }
    }
    Ok(())
}

/// `y = 1` specialization.
pub fn at_y_one(s: &Series<LaurentU>) -> Result<Series<Q>> {
    let mut terms = Vec::new();
    for (e, c) in s.terms() {
        terms.push((e.clone(), c.at_one().ok_or_else(|| ConjError::NotLaurent(fmt_q(&e)))?));
    }
    Ok(Series::from_terms(s.var(), terms, s.order()))
}

pub(crate) fn need_order<C: Coeff>(s: &Series<C>, want: &Q, what: &str) -> Result<()> {
    if s.order().is_some_and(|o| &o < want) {
        return Err(ConjError::Order(format!("{what}: exact below {} but {} requested", fmt_q(&s.order().unwrap()), fmt_q(want))));
    }
    Ok(())
}
