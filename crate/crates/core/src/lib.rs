//! Exact computations for virtual invariants of moduli spaces of sheaves on surfaces.

pub mod conjectures;
pub mod domain;
pub mod hilb;
pub mod mochizuki;
pub mod modp;
pub mod poly;
pub mod qforms;
pub mod rational;
pub mod series;
pub mod surfaces;
