//! Exact rational scalars.
//!
//! Model coefficients, transverse weights, and energies are kept as `i128`
//! rationals so that cost-table and energy-preservation checks can compare
//! with literal equality. Floating point only enters in eigensolves.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};
use std::fmt;

/// Exact rational scalar used throughout the model layer.
pub type Rat = Ratio<i128>;

/// Shorthand constructor, mostly for tests and fixtures.
pub fn rat(numer: i128, denom: i128) -> Rat {
    Ratio::new(numer, denom)
}

/// Render a rational as `"p"` or `"p/q"`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p"` or `"p/q"` into a rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i128 = numer
        .parse()
        .map_err(|_| format!("invalid rational numerator in {s:?}"))?;
    let d: i128 = denom
        .parse()
        .map_err(|_| format!("invalid rational denominator in {s:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Ratio::new(n, d))
}

/// Lossy conversion for the spectral layer.
pub fn rat_to_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Serde adapter: integers stay JSON numbers, everything else becomes `"p/q"`.
pub mod rat_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        if r.denom().is_one() {
            ser.serialize_i128(*r.numer())
        } else {
            ser.serialize_str(&format_rat(r))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        de.deserialize_any(RatVisitor)
    }
}

/// Serde adapter for vectors of rationals (`delta` arrays).
pub mod rat_vec_serde {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rat], ser: S) -> Result<S::Ok, S::Error> {
        struct One<'a>(&'a Rat);
        impl serde::Serialize for One<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
                rat_serde::serialize(self.0, ser)
            }
        }
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&One(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rat>, D::Error> {
        struct VecVisitor;
        impl<'de> Visitor<'de> for VecVisitor {
            type Value = Vec<Rat>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a sequence of integers or \"p/q\" strings")
            }
            fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                struct One;
                impl<'de> de::DeserializeSeed<'de> for One {
                    type Value = Rat;
                    fn deserialize<D: Deserializer<'de>>(self, de: D) -> Result<Rat, D::Error> {
                        de.deserialize_any(RatVisitor)
                    }
                }
                let mut out = Vec::with_capacity(seq.size_hint().unwrap_or(0));
                while let Some(r) = seq.next_element_seed(One)? {
                    out.push(r);
                }
                Ok(out)
            }
        }
        de.deserialize_seq(VecVisitor)
    }
}

struct RatVisitor;

impl Visitor<'_> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Ok(Rat::from_integer(v as i128))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        Ok(Rat::from_integer(v as i128))
    }

    fn visit_i128<E: de::Error>(self, v: i128) -> Result<Rat, E> {
        Ok(Rat::from_integer(v))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rat, E> {
        Err(E::custom(format!(
            "floating-point coefficient {v} is not exact; write it as a \"p/q\" string"
        )))
    }

    fn visit_str<E: de::Error>(self, s: &str) -> Result<Rat, E> {
        parse_rat(s).map_err(E::custom)
    }
}

/// True when every coefficient magnitude is exactly 1.
pub fn is_unit(r: &Rat) -> bool {
    r.abs() == Rat::one()
}

/// True when the value is zero (readability helper for serde skips).
pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}
