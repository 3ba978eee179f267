use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::{check_unit, Error, Result};

/// Literal written in place of `f` when no gathered data was tagged for
/// future use.
pub const UNMEASURED: &str = "unmeasured";

/// The six index values of one analysis iteration.
///
/// `f` is `None` when the data inventory carried no future-use evidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexSnapshot {
    pub pi: f64,
    pub u: f64,
    pub f: Option<f64>,
    pub pri: f64,
    pub iu: f64,
    pub gq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IndexName {
    #[serde(rename = "PI")]
    Pi,
    #[serde(rename = "U")]
    U,
    #[serde(rename = "F")]
    F,
    #[serde(rename = "PRI")]
    Pri,
    #[serde(rename = "IU")]
    Iu,
    #[serde(rename = "GQ")]
    Gq,
}

impl IndexName {
    pub const ALL: [IndexName; 6] = [
        IndexName::Pi,
        IndexName::U,
        IndexName::F,
        IndexName::Pri,
        IndexName::Iu,
        IndexName::Gq,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IndexName::Pi => "PI",
            IndexName::U => "U",
            IndexName::F => "F",
            IndexName::Pri => "PRI",
            IndexName::Iu => "IU",
            IndexName::Gq => "GQ",
        }
    }

    fn field(self) -> &'static str {
        match self {
            IndexName::Pi => "pi",
            IndexName::U => "u",
            IndexName::F => "f",
            IndexName::Pri => "pri",
            IndexName::Iu => "iu",
            IndexName::Gq => "gq",
        }
    }
}

impl fmt::Display for IndexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IndexName {
    type Err = Error;

    /// Case-insensitive; accepts the short symbol or the field name.
    fn from_str(s: &str) -> Result<Self> {
        IndexName::ALL
            .into_iter()
            .find(|name| name.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownIndexName(s.to_string()))
    }
}

impl IndexSnapshot {
    /// Every index at the same value, with `f` measured.
    pub fn uniform(value: f64) -> Self {
        IndexSnapshot {
            pi: value,
            u: value,
            f: Some(value),
            pri: value,
            iu: value,
            gq: value,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for name in IndexName::ALL {
            if let Some(value) = self.get(name) {
                check_unit(name.field(), value)?;
            }
        }
        Ok(())
    }

    pub fn get(&self, name: IndexName) -> Option<f64> {
        match name {
            IndexName::Pi => Some(self.pi),
            IndexName::U => Some(self.u),
            IndexName::F => self.f,
            IndexName::Pri => Some(self.pri),
            IndexName::Iu => Some(self.iu),
            IndexName::Gq => Some(self.gq),
        }
    }

    /// Returns a copy with one index replaced. `None` is only meaningful for `F`.
    pub fn with(mut self, name: IndexName, value: Option<f64>) -> Self {
        match name {
            IndexName::Pi => self.pi = value.unwrap_or(self.pi),
            IndexName::U => self.u = value.unwrap_or(self.u),
            IndexName::F => self.f = value,
            IndexName::Pri => self.pri = value.unwrap_or(self.pri),
            IndexName::Iu => self.iu = value.unwrap_or(self.iu),
            IndexName::Gq => self.gq = value.unwrap_or(self.gq),
        }
        self
    }

    /// Measured values in `PI, U, F, PRI, IU, GQ` order.
    pub fn measured(&self) -> impl Iterator<Item = (IndexName, f64)> + '_ {
        IndexName::ALL
            .into_iter()
            .filter_map(|name| self.get(name).map(|v| (name, v)))
    }
}

impl Serialize for IndexSnapshot {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        for (name, value) in self.measured() {
            if !value.is_finite() {
                return Err(serde::ser::Error::custom(format!("{name} is not finite")));
            }
        }
        let mut s = serializer.serialize_struct("IndexSnapshot", 6)?;
        s.serialize_field("pi", &decimal::raw(self.pi))?;
        s.serialize_field("u", &decimal::raw(self.u))?;
        match self.f {
            Some(f) => s.serialize_field("f", &decimal::raw(f))?,
            None => s.serialize_field("f", UNMEASURED)?,
        }
        s.serialize_field("pri", &decimal::raw(self.pri))?;
        s.serialize_field("iu", &decimal::raw(self.iu))?;
        s.serialize_field("gq", &decimal::raw(self.gq))?;
        s.end()
    }
}

struct MaybeMeasured(Option<f64>);

impl<'de> Deserialize<'de> for MaybeMeasured {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = MaybeMeasured;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a number or the string \"{UNMEASURED}\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(MaybeMeasured(Some(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(MaybeMeasured(Some(v as f64)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(MaybeMeasured(Some(v as f64)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v == UNMEASURED {
                    Ok(MaybeMeasured(None))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotDoc {
    pi: f64,
    u: f64,
    f: MaybeMeasured,
    pri: f64,
    iu: f64,
    gq: f64,
}

impl<'de> Deserialize<'de> for IndexSnapshot {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = SnapshotDoc::deserialize(deserializer)?;
        Ok(IndexSnapshot {
            pi: doc.pi,
            u: doc.u,
            f: doc.f.0,
            pri: doc.pri,
            iu: doc.iu,
            gq: doc.gq,
        })
    }
}

impl fmt::Display for IndexSnapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fv = self
            .f
            .map_or_else(|| UNMEASURED.to_string(), |v| format!("{v:.3}"));
        write!(
            f,
            "PI={:.3} U={:.3} F={} PRI={:.3} IU={:.3} GQ={:.3}",
            self.pi, self.u, fv, self.pri, self.iu, self.gq
        )
    }
}
