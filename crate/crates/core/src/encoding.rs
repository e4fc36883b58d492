//! Canonical wire encoding shared by every file format.
//!
//! Integers are decimal strings without sign or leading zeros. Objects are
//! compact JSON whose key order is the struct field order, so the bytes are
//! stable and can be hashed.

use num_bigint::BigUint;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// `serde(with = ...)` adapter for a decimal-string `BigUint`.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&value.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(deserializer)?;
        super::parse_decimal(&text).map_err(D::Error::custom)
    }
}

/// Same as [`decimal`] for a list.
pub mod decimal_vec {
    use num_bigint::BigUint;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigUint], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_str_radix(10))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<BigUint>, D::Error> {
        let texts = Vec::<String>::deserialize(deserializer)?;
        texts
            .iter()
            .map(|t| super::parse_decimal(t).map_err(D::Error::custom))
            .collect()
    }
}

/// Same as [`decimal_vec`] for an optional list.
pub mod decimal_vec_opt {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrapped(#[serde(with = "super::decimal_vec")] Vec<BigUint>);

    pub fn serialize<S: Serializer>(
        values: &Option<Vec<BigUint>>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        match values {
            Some(v) => serializer.serialize_some(&Wrapped(v.clone())),
            None => serializer.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Option<Vec<BigUint>>, D::Error> {
        Ok(Option::<Wrapped>::deserialize(deserializer)?.map(|w| w.0))
    }
}

/// Parses a canonical decimal string: digits only, no leading zeros.
pub fn parse_decimal(text: &str) -> Result<BigUint, String> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{text:?} is not a decimal integer"));
    }
    if text.len() > 1 && text.starts_with('0') {
        return Err(format!("{text:?} has leading zeros"));
    }
    BigUint::parse_bytes(text.as_bytes(), 10).ok_or_else(|| format!("bad integer {text:?}"))
}

/// Compact JSON bytes of `value`.
pub fn canonical_json<T: Serialize>(value: &T) -> Vec<u8> {
    serde_json::to_vec(value).expect("wire types always serialize")
}

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Lowercase hex SHA-256 of the canonical JSON of `value`.
pub fn digest_of<T: Serialize>(value: &T) -> String {
    sha256_hex(&canonical_json(value))
}
