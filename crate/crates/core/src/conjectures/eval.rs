//! Dispatch from a `ConjectureId` to its evaluator.

use super::{
    chiy_rk2, chiy_rk3, cob_rk2, ellgen_rk2, euler_rk2, euler_rk3, kdonaldson_rk2, mono_rk3, verlinde_chiy_rk2, vwfull_rk2, ConjError,
    ConjectureId, EllReading, LineData, Result,
};
use crate::domain::LaurentU;
use crate::hilb::Specialization;
use crate::qforms::PQSeries;
use crate::rational::Q;
use crate::series::Series;
use crate::surfaces::SurfaceDescriptor;

/// Inputs beyond surface, `c1` and order that some evaluators need.
#[derive(Clone, Debug)]
pub struct Rank2Params {
    pub reading: EllReading,
    /// `q`-order of elliptic genera.
    pub q_order: i64,
    /// Chern numbers `v_1..v_5` of the cobordism genus.
    pub cob_v: Option<[Q; 5]>,
    pub line: Option<LineData>,
    pub specialization: Specialization,
}

impl Default for Rank2Params {
    fn default() -> Self {
        Rank2Params { reading: EllReading::EvenThenHalf, q_order: 2, cob_v: None, line: None, specialization: Specialization::primary() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evaluated {
    Rational(Series<Q>),
    Refined(Series<LaurentU>),
    Elliptic(PQSeries),
}

impl Evaluated {
    pub fn rational(self) -> Option<Series<Q>> {
        match self {
            Evaluated::Rational(s) => Some(s),
            _ => None,
        }
    }

    pub fn refined(self) -> Option<Series<LaurentU>> {
        match self {
            Evaluated::Refined(s) => Some(s),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Evaluated::Rational(s) => s.to_json(),
            Evaluated::Refined(s) => s.to_json(),
            Evaluated::Elliptic(s) => s.to_json(),
        }
    }
}

fn missing(what: &str, id: ConjectureId) -> ConjError {
    ConjError::Unsupported(format!("{} needs {what}", id.key()))
}

/// Rank 2 series through `x^order` (for elliptic genera `p^order`).
pub fn eval_rank2(id: ConjectureId, s: &SurfaceDescriptor, c1: &str, params: &Rank2Params, order: i64) -> Result<Evaluated> {
    Ok(match id {
        ConjectureId::EulerRk2 => Evaluated::Rational(euler_rk2(s, c1, order)?),
        ConjectureId::ChiYRk2 => Evaluated::Refined(chiy_rk2(s, c1, order)?),
        ConjectureId::EllGenRk2 => Evaluated::Elliptic(ellgen_rk2(s, c1, params.reading, order, params.q_order)?),
        ConjectureId::CobRk2 => {
            let v = params.cob_v.as_ref().ok_or_else(|| missing("Chern numbers of the genus", id))?;
            Evaluated::Rational(cob_rk2(s, c1, v, order, &params.specialization)?)
        }
        ConjectureId::KDonaldsonRk2 => {
            let l = params.line.as_ref().ok_or_else(|| missing("a line bundle", id))?;
            Evaluated::Rational(kdonaldson_rk2(s, c1, l, order)?)
        }
        ConjectureId::VerlindeChiYRk2 => {
            let l = params.line.as_ref().ok_or_else(|| missing("a line bundle", id))?;
            Evaluated::Refined(verlinde_chiy_rk2(s, c1, l, order)?)
        }
        other => return Err(ConjError::Unsupported(format!("{} is not a rank 2 evaluator", other.key()))),
    })
}

/// Rank 3 series, and the Vafa-Witten functions. `order` is the `x`-order for the Euler and
/// chi_y series, the `q`-bound for the monopole series and the largest vd for `VWFullRk2`.
pub fn eval_rank3(id: ConjectureId, s: &SurfaceDescriptor, c1: &str, order: i64) -> Result<Evaluated> {
    Ok(match id {
        ConjectureId::EulerRk3 => Evaluated::Rational(euler_rk3(s, c1, order)?),
        ConjectureId::ChiYRk3 => Evaluated::Refined(chiy_rk3(s, c1, order)?),
        ConjectureId::MonoRk3 => Evaluated::Rational(mono_rk3(s, c1, order)?),
        ConjectureId::VWFullRk2 => Evaluated::Rational(vwfull_rk2(s, c1, order)?),
        other => return Err(ConjError::Unsupported(format!("{} is not a rank 3 evaluator", other.key()))),
    })
}
