//! Field formats for the canonical CSV files: booleans as `0`/`1`, floats
//! with six decimals.

pub mod bool01 {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(u8::from(*v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        let raw = String::deserialize(d)?;
        match raw.trim() {
            "1" | "true" | "True" => Ok(true),
            "0" | "false" | "False" => Ok(false),
            other => Err(de::Error::custom(format!("expected 0/1, got {other:?}"))),
        }
    }
}

pub mod f6 {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:.6}"))
    }
}

/// Fixed six-decimal rendering used by every report writer.
pub fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}
