//! Serde adapters that write integers and rationals as decimal strings, so
//! arbitrary-precision values survive consumers with 53-bit number types.

use num_rational::Ratio;
use serde::de::{self, Deserialize, Deserializer};
use serde::ser::{SerializeSeq, Serializer};

use crate::scalar::Int;

pub fn serialize<T: Int, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub fn deserialize<'de, T: Int, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
    let text = String::deserialize(d)?;
    parse(&text).map_err(de::Error::custom)
}

fn parse<T: Int>(text: &str) -> Result<T, String> {
    text.trim()
        .parse::<T>()
        .map_err(|e| format!("bad integer {text:?}: {e}"))
}

pub mod seq {
    use super::*;

    pub fn serialize<T: Int, S: Serializer>(xs: &[T], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, T: Int, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items
            .iter()
            .map(|x| parse(x).map_err(de::Error::custom))
            .collect()
    }
}

pub mod triple {
    use super::*;

    pub fn serialize<T: Int, S: Serializer>(xs: &[T; 3], s: S) -> Result<S::Ok, S::Error> {
        seq::serialize(xs.as_slice(), s)
    }

    pub fn deserialize<'de, T: Int, D: Deserializer<'de>>(d: D) -> Result<[T; 3], D::Error> {
        let items = seq::deserialize::<T, D>(d)?;
        <[T; 3]>::try_from(items)
            .map_err(|v| de::Error::custom(format!("expected 3 entries, got {}", v.len())))
    }
}

pub mod option_triple {
    use super::*;

    pub fn serialize<T: Int, S: Serializer>(xs: &Option<[T; 3]>, s: S) -> Result<S::Ok, S::Error> {
        match xs {
            Some(xs) => triple::serialize(xs, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T: Int, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<[T; 3]>, D::Error> {
        let items = Option::<Vec<String>>::deserialize(d)?;
        match items {
            None => Ok(None),
            Some(items) => {
                let parsed = items
                    .iter()
                    .map(|x| parse(x).map_err(de::Error::custom))
                    .collect::<Result<Vec<T>, _>>()?;
                <[T; 3]>::try_from(parsed)
                    .map(Some)
                    .map_err(|_| de::Error::custom("expected 3 entries"))
            }
        }
    }
}

pub mod option {
    use super::*;

    pub fn serialize<T: Int, S: Serializer>(x: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.collect_str(x),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T: Int, D: Deserializer<'de>>(d: D) -> Result<Option<T>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|x| parse(&x).map_err(de::Error::custom))
            .transpose()
    }
}

/// Machine-sized counts and exponents, also as strings.
pub mod display {
    use std::fmt::Display;
    use std::str::FromStr;

    use super::*;

    pub fn serialize<T: Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr<Err: Display>,
        D: Deserializer<'de>,
    {
        let text = String::deserialize(d)?;
        text.trim().parse().map_err(de::Error::custom)
    }
}

/// Rationals as `"num/den"`, or just `"num"` when the denominator is 1.
pub mod rational {
    use super::*;

    pub fn to_string<T: Int>(q: &Ratio<T>) -> String {
        if q.denom().is_one() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        }
    }

    pub fn parse<T: Int>(text: &str) -> Result<Ratio<T>, String> {
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (super::parse::<T>(n)?, super::parse::<T>(d)?),
            None => (super::parse::<T>(text)?, T::one()),
        };
        if den.is_zero() {
            return Err(format!("zero denominator in {text:?}"));
        }
        Ok(Ratio::new(num, den))
    }

    pub fn serialize<T: Int, S: Serializer>(q: &Ratio<T>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(q))
    }

    pub fn deserialize<'de, T: Int, D: Deserializer<'de>>(d: D) -> Result<Ratio<T>, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(de::Error::custom)
    }
}
