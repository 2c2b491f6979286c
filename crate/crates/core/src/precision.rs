//! Working precision and small helpers around `rug` numbers.
//!
//! Every high-precision quantity in this crate is a [`rug::Float`] carrying
//! its own precision; [`Precision`] is the validated knob callers pass in.
//! Exact quantities are [`rug::Rational`] and travel as `"num/den"` strings
//! in every external format.

use std::fmt;

use rug::{Assign, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const MIN_PRECISION_BITS: u32 = 64;

/// Working precision in bits (always at least 64).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_PRECISION_BITS {
            Err(Error::Precision(bits))
        } else {
            Ok(Precision(bits))
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Precision with `extra` guard bits added.
    pub fn with_guard(self, extra: u32) -> Self {
        Precision(self.0 + extra)
    }

    pub fn doubled(self) -> Self {
        Precision(self.0.saturating_mul(2))
    }

    pub fn float<T>(self, value: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.0, value)
    }

    pub fn zero(self) -> Float {
        Float::new(self.0)
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.0, rug::float::Constant::Pi)
    }

    /// `1/2 - log 2`, the continuous logarithmic energy of the unit sphere.
    pub fn kappa(self) -> Float {
        let ln2 = Float::with_val(self.0, rug::float::Constant::Log2);
        Float::with_val(self.0, 0.5) - ln2
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION_BITS)
    }
}

impl TryFrom<u32> for Precision {
    type Error = Error;
    fn try_from(bits: u32) -> Result<Self> {
        Precision::new(bits)
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.0
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// `"num/den"`, always with an explicit denominator.
pub fn rational_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: Integer = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let den: Integer = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if den == 0 {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::from((num, den)))
}

/// Decimal rendering with enough digits to round-trip at the value's own
/// precision; infinities print as `inf` / `-inf`.
pub fn float_string(x: &Float) -> String {
    if x.is_infinite() {
        if x.is_sign_negative() { "-inf".into() } else { "inf".into() }
    } else if x.is_nan() {
        "nan".into()
    } else {
        x.to_string_radix(10, None)
    }
}

/// Stable log-sum-exp: `log(sum(exp(x_i)))`. Terms equal to `-inf` are skipped;
/// an empty (or all `-inf`) input gives `-inf`.
pub fn log_sum_exp(terms: &[Float], prec: Precision) -> Float {
    let finite: Vec<&Float> = terms.iter().filter(|t| !t.is_infinite()).collect();
    let Some(max) = finite
        .iter()
        .copied()
        .max_by(|a, b| a.partial_cmp(b).expect("NaN in log_sum_exp"))
    else {
        return Float::with_val(prec.bits(), rug::float::Special::NegInfinity);
    };
    let mut acc = prec.zero();
    for t in &finite {
        acc += Float::with_val(prec.bits(), *t - max).exp();
    }
    acc.ln() + max
}

pub(crate) mod serde_float {
    use rug::Float;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Float, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::float_string(x))
    }
}

pub(crate) mod serde_rational {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::rational_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
