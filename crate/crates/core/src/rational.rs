//! Exact non-negative rationals shared by the metrics.
//!
//! Ratios serialize as strings (`"5/7"`, `"1"`). On input, a JSON number or
//! a decimal string such as `"0.3"` is read exactly as `3/10`.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serializer};

pub type Rational = Ratio<u64>;

/// Builds `num/den`. Panics on a zero denominator, like [`Ratio::new`].
pub fn ratio(num: usize, den: usize) -> Rational {
    Ratio::new(num as u64, den as u64)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `|a - b|` without leaving the unsigned domain.
pub fn abs_diff(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// Parses `"a/b"`, an integer, or a plain decimal (`"0.25"`).
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: u64 = n.trim().parse().ok()?;
        let d: u64 = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Ratio::new(n, d));
    }
    let (whole, frac) = match text.split_once('.') {
        Some((w, f)) => (w, f),
        None => (text, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
        return None;
    }
    let whole: u64 = if whole.is_empty() { 0 } else { whole.parse().ok()? };
    let scale = 10u64.pow(frac.len() as u32);
    let frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let num = whole.checked_mul(scale)?.checked_add(frac_val)?;
    Some(Ratio::new(num, scale))
}

pub fn format(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRational {
    Text(String),
    Number(serde_json::Number),
}

fn from_raw<E: de::Error>(raw: RawRational) -> Result<Rational, E> {
    let text = match raw {
        RawRational::Text(s) => s,
        RawRational::Number(n) => n.to_string(),
    };
    parse(&text).ok_or_else(|| E::custom(format!("`{text}` is not a non-negative rational")))
}

/// `#[serde(with = "crate::rational::text")]`
pub mod text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        from_raw(RawRational::deserialize(d)?)
    }
}

/// Same as [`text`] for `Option<Rational>`.
pub mod opt_text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<RawRational>::deserialize(d)?.map(from_raw).transpose()
    }
}
