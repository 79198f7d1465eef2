//! Genus-2 hyperelliptic Jacobians in Mumford coordinates: exact fields,
//! weighted polynomial rings, curve normal forms, divisor arithmetic,
//! torsion conditions, and an independent Cantor-algorithm oracle.

pub mod error;
pub mod exactfield;
pub mod polyring;
pub mod curve;
pub mod divisor;
pub mod scalar;
pub mod grouplaw;
pub mod cantororacle;
pub mod torsion;

pub use error::{Error, Result};
