//! Serialization helpers for exact and high-precision values.
//!
//! Big integers and rationals are written as decimal strings so that no
//! consumer silently truncates them to a double.

use rug::{Float, Integer, Rational};
use serde::Serializer;

use crate::numeric::float_string;

/// Significant digits used when rendering high-precision floats.
pub const FLOAT_DIGITS: usize = 30;

pub fn ser_integer<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_integers<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn ser_rational<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_opt_rational<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

pub fn ser_float<S: Serializer>(v: &Float, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&float_string(v, FLOAT_DIGITS))
}

pub fn ser_opt_float<S: Serializer>(v: &Option<Float>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(f) => s.serialize_str(&float_string(f, FLOAT_DIGITS)),
        None => s.serialize_none(),
    }
}

pub fn opt_float_cell(v: &Option<Float>) -> String {
    v.as_ref().map(|f| float_string(f, FLOAT_DIGITS)).unwrap_or_default()
}
