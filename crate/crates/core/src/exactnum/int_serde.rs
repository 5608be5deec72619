//! Serde adapters writing integers as JSON numbers when they fit in `i64`
//! and as decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(n: &BigInt) -> Self {
        n.to_i64().map(IntRepr::Small).unwrap_or_else(|| IntRepr::Big(n.to_string()))
    }

    fn into_big<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            IntRepr::Small(n) => Ok(BigInt::from(n)),
            IntRepr::Big(s) => s.trim().parse::<BigInt>().map_err(E::custom),
        }
    }
}

pub fn serialize<S: Serializer>(n: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    IntRepr::from_big(n).serialize(serializer)
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigInt, D::Error> {
    IntRepr::deserialize(deserializer)?.into_big()
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
        v.iter().map(IntRepr::from_big).collect::<Vec<_>>().serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<IntRepr>::deserialize(deserializer)?.into_iter().map(IntRepr::into_big).collect()
    }
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<BigInt>], serializer: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|row| row.iter().map(IntRepr::from_big).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<IntRepr>>::deserialize(deserializer)?
            .into_iter()
            .map(|row| row.into_iter().map(IntRepr::into_big).collect())
            .collect()
    }
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(n: &Option<BigInt>, serializer: S) -> Result<S::Ok, S::Error> {
        n.as_ref().map(IntRepr::from_big).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Option<BigInt>, D::Error> {
        Option::<IntRepr>::deserialize(deserializer)?.map(IntRepr::into_big).transpose()
    }
}
