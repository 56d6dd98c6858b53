//! System definition files.
//!
//! ```json
//! {
//!   "polygon": [[0, 0], [1, 0], ["1/2", "5/8"]],
//!   "maps": [{"a": "1/2", "b": 0, "c": 0, "d": "1/2", "e": 0, "f": 0}, ...]
//! }
//! ```
//!
//! Each map is `S(x, y) = (a x + b y + e, c x + d y + f)`. Numbers may be
//! JSON numbers or strings holding an integer, a decimal, an exponent form
//! or a fraction `p/q`; all are read exactly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use crate::geometry::{AffineMap2, ConvexPolygon, Point2, Rational};
use crate::polysys::{PolygonalSystem, SystemError};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("parse error")]
    Parse(#[from] serde_json::Error),
    #[error("invalid system")]
    System(#[from] SystemError),
}

/// Exact numeric literal.
#[derive(Clone, Debug, PartialEq)]
pub struct Literal(pub Rational);

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s,
            other => {
                return Err(de::Error::invalid_type(
                    unexpected(&other),
                    &"a number or a \"p/q\" string",
                ))
            }
        };
        parse_rational(&text)
            .map(Literal)
            .map_err(de::Error::custom)
    }
}

fn unexpected(v: &serde_json::Value) -> de::Unexpected<'_> {
    match v {
        serde_json::Value::Null => de::Unexpected::Unit,
        serde_json::Value::Bool(b) => de::Unexpected::Bool(*b),
        serde_json::Value::Array(_) => de::Unexpected::Seq,
        serde_json::Value::Object(_) => de::Unexpected::Map,
        _ => de::Unexpected::Other("value"),
    }
}

impl Serialize for Literal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid number literal {0:?}")]
pub struct LiteralError(pub String);

/// Parses `p/q`, integers, decimals and exponent forms exactly.
pub fn parse_rational(text: &str) -> Result<Rational, LiteralError> {
    let err = || LiteralError(text.to_owned());
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let all: BigInt = format!("{int_part}{frac_part}0")
        .parse::<BigInt>()
        .map_err(|_| err())?
        / 10;
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(10.into());
    let factor = if scale >= 0 {
        pow(&ten, scale as u32)
    } else {
        pow(&ten, (-scale) as u32).recip()
    };
    Ok(Rational::from_integer(all * sign) * factor)
}

fn pow(base: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * base)
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDefinition {
    pub a: Literal,
    pub b: Literal,
    pub c: Literal,
    pub d: Literal,
    pub e: Literal,
    pub f: Literal,
}

/// On-disk form of a system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDefinition {
    pub polygon: Vec<[Literal; 2]>,
    pub maps: Vec<MapDefinition>,
}

impl SystemDefinition {
    pub fn from_system(sys: &PolygonalSystem) -> Self {
        let lit = |r: &Rational| Literal(r.clone());
        Self {
            polygon: sys
                .base()
                .vertices()
                .iter()
                .map(|p| [lit(&p.x), lit(&p.y)])
                .collect(),
            maps: sys
                .maps()
                .iter()
                .map(|m| MapDefinition {
                    a: lit(&m.a),
                    b: lit(&m.b),
                    c: lit(&m.c),
                    d: lit(&m.d),
                    e: lit(&m.e),
                    f: lit(&m.f),
                })
                .collect(),
        }
    }

    pub fn into_system(self) -> Result<PolygonalSystem, SystemError> {
        let vertices = self
            .polygon
            .into_iter()
            .map(|[x, y]| Point2::new(x.0, y.0))
            .collect();
        let base = ConvexPolygon::new(vertices).map_err(SystemError::Polygon)?;
        let maps = self
            .maps
            .into_iter()
            .map(|m| AffineMap2::new(m.a.0, m.b.0, m.c.0, m.d.0, m.e.0, m.f.0))
            .collect();
        PolygonalSystem::new(base, maps)
    }
}

/// Parses a system definition; syntax errors carry line and column.
pub fn parse_system(text: &str) -> Result<PolygonalSystem, LoadError> {
    let def: SystemDefinition = serde_json::from_str(text)?;
    Ok(def.into_system()?)
}

/// Pretty-printed definition with exact literals.
pub fn system_to_json(sys: &PolygonalSystem) -> String {
    let mut s = serde_json::to_string_pretty(&SystemDefinition::from_system(sys))
        .expect("definition serializes");
    s.push('\n');
    s
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}
