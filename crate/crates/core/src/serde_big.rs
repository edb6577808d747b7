//! JSON encoding for big integers: plain numbers when they fit in 64 bits, decimal strings
//! otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Int(i64),
    Text(String),
}

impl Repr {
    fn into_big<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            Repr::Int(i) => Ok(BigInt::from(i)),
            Repr::Text(s) => s.parse().map_err(E::custom),
        }
    }
}

struct Wrapped<'a>(&'a BigInt);

impl serde::Serialize for Wrapped<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize(self.0, s)
    }
}

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(i) => s.serialize_i64(i),
        None => s.serialize_str(&v.to_string()),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    Repr::deserialize(d)?.into_big()
}

pub fn serialize_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Wrapped(x))?;
    }
    seq.end()
}

pub fn deserialize_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    Vec::<Repr>::deserialize(d)?
        .into_iter()
        .map(|r| r.into_big::<D::Error>())
        .collect()
}

pub fn serialize_pair<S: Serializer>(v: &(BigInt, BigInt), s: S) -> Result<S::Ok, S::Error> {
    serialize_vec(&[v.0.clone(), v.1.clone()], s)
}

pub fn deserialize_pair<'de, D: Deserializer<'de>>(d: D) -> Result<(BigInt, BigInt), D::Error> {
    let v = deserialize_vec(d)?;
    match <[BigInt; 2]>::try_from(v) {
        Ok([a, b]) => Ok((a, b)),
        Err(_) => Err(serde::de::Error::custom("expected two integers")),
    }
}
