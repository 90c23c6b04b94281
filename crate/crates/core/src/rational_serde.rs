//! Serde adapter rendering exact rationals as `{"num": "...", "den": "..."}`
//! string pairs, so arbitrarily large exact values survive JSON untouched.

use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::Serializer;

pub fn serialize<S: Serializer>(value: &BigRational, serializer: S) -> Result<S::Ok, S::Error> {
    let mut s = serializer.serialize_struct("Rational", 2)?;
    s.serialize_field("num", &value.numer().to_string())?;
    s.serialize_field("den", &value.denom().to_string())?;
    s.end()
}
