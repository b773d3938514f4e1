//! Report numbers with a fixed number of significant digits.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Significant decimal digits kept in reports.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// A real rounded to [`SIGNIFICANT_DIGITS`] digits on construction.
///
/// Non-finite values serialize as the strings `"-inf"`, `"inf"` and `"nan"`.
#[derive(Debug, Clone, Copy)]
pub struct Num(f64);

impl Num {
    pub fn new(x: f64) -> Self {
        if !x.is_finite() || x == 0.0 {
            // normalizes -0.0 as well
            return Num(if x == 0.0 { 0.0 } else { x });
        }
        let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
        Num(s.parse().expect("formatted float parses"))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num::new(x)
    }
}

impl PartialEq for Num {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0 || (self.0.is_nan() && other.0.is_nan())
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            x if x.is_nan() => write!(f, "nan"),
            x if x == f64::NEG_INFINITY => write!(f, "-inf"),
            x if x == f64::INFINITY => write!(f, "inf"),
            x => write!(f, "{x}"),
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

struct NumVisitor;

impl Visitor<'_> for NumVisitor {
    type Value = Num;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "a number or one of \"-inf\", \"inf\", \"nan\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
        Ok(Num::new(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
        Ok(Num::new(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
        Ok(Num::new(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
        match v {
            "-inf" => Ok(Num(f64::NEG_INFINITY)),
            "inf" => Ok(Num(f64::INFINITY)),
            "nan" => Ok(Num(f64::NAN)),
            other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Num, D::Error> {
        d.deserialize_any(NumVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_twelve_digits() {
        assert_eq!(Num::new(1.0 / 7.0).get(), 0.142857142857);
        assert_eq!(Num::new(-0.0).get().to_bits(), 0.0f64.to_bits());
        assert_eq!(Num::new(1.0).get(), 1.0);
    }

    #[test]
    fn json_round_trip() {
        for x in [std::f64::consts::E, -1e-300, 6.02214076e23, f64::NEG_INFINITY, 0.1 + 0.2] {
            let n = Num::new(x);
            let text = serde_json::to_string(&n).unwrap();
            let back: Num = serde_json::from_str(&text).unwrap();
            assert_eq!(back, n, "{text}");
        }
        assert_eq!(serde_json::to_string(&Num::new(f64::NEG_INFINITY)).unwrap(), "\"-inf\"");
    }
}
