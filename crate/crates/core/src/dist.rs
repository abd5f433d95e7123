//! Exact nonnegative distances.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A nonnegative exact rational distance.
///
/// Parsed from decimal strings (`"0.25"`, `"3"`, `"1.5e-2"`) or fractions
/// (`"1/3"`). Comparison and equality are exact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Dist(BigRational);

impl Dist {
    pub fn zero() -> Self {
        Dist(BigRational::zero())
    }

    pub fn from_integer(n: u64) -> Self {
        Dist(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; `None` when `den` is zero.
    pub fn from_ratio(num: u64, den: u64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        Some(Dist(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_rational(value: BigRational) -> Result<Self, Error> {
        if value.is_negative() {
            return Err(Error::Parse(format!("negative distance {value}")));
        }
        Ok(Dist(value))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Midpoint of two distances; used to place a label strictly between two others.
    pub fn midpoint(&self, other: &Dist) -> Dist {
        let two = BigRational::from_integer(BigInt::from(2));
        Dist((&self.0 + &other.0) / two)
    }

    pub fn checked_add(&self, other: &Dist) -> Dist {
        Dist(&self.0 + &other.0)
    }

    /// Reduced fraction `p/q` (or `p` for integers). Used where a single
    /// unambiguous spelling is required, e.g. canonical tree encodings.
    pub fn to_fraction_string(&self) -> String {
        if self.0.is_integer() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }

    /// Terminating decimal spelling when one exists, otherwise the reduced
    /// fraction.
    pub fn to_decimal_string(&self) -> String {
        if self.0.is_integer() {
            return self.0.numer().to_string();
        }
        let denom = self.0.denom();
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        let mut rest = denom.clone();
        let (mut twos, mut fives) = (0usize, 0usize);
        while rest.is_even() {
            rest /= &two;
            twos += 1;
        }
        while (&rest % &five).is_zero() {
            rest /= &five;
            fives += 1;
        }
        if !rest.is_one() {
            return self.to_fraction_string();
        }
        let places = twos.max(fives);
        let scale = num_traits::pow(BigInt::from(10), places);
        let scaled = (self.0.numer() * &scale) / denom;
        let digits = scaled.to_string();
        let digits = format!("{digits:0>width$}", width = places + 1);
        let (int_part, frac_part) = digits.split_at(digits.len() - places);
        format!("{int_part}.{frac_part}")
    }

    /// Lossy view for display and statistics only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    let exp = exponent - i32::try_from(frac_part.len()).ok()?;
    let ten = BigInt::from(10);
    let value = if exp >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, exp as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, exp.unsigned_abs() as usize))
    };
    Some(value)
}

impl FromStr for Dist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let text = text.strip_prefix('+').unwrap_or(text);
        if text.starts_with('-') {
            return Err(Error::Parse(format!("negative distance {s:?}")));
        }
        let value = if let Some((num, den)) = text.split_once('/') {
            let num = BigInt::parse_bytes(num.trim().as_bytes(), 10);
            let den = BigInt::parse_bytes(den.trim().as_bytes(), 10);
            match (num, den) {
                (Some(n), Some(d)) if !d.is_zero() && n.sign() != Sign::Minus && d.sign() == Sign::Plus => {
                    BigRational::new(n, d)
                }
                _ => return Err(Error::Parse(format!("invalid fraction {s:?}"))),
            }
        } else {
            parse_decimal(text).ok_or_else(|| Error::Parse(format!("invalid distance {s:?}")))?
        };
        Ok(Dist(value))
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl fmt::Debug for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dist({})", self.to_fraction_string())
    }
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dist {
        s.parse().unwrap()
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(d("0.5"), Dist::from_ratio(1, 2).unwrap());
        assert_eq!(d("2/4"), d("0.5"));
        assert_eq!(d("1.5e-1"), Dist::from_ratio(3, 20).unwrap());
        assert_eq!(d("12e2"), Dist::from_integer(1200));
        assert_eq!(d(".25"), Dist::from_ratio(1, 4).unwrap());
        assert_eq!(d("3."), Dist::from_integer(3));
        assert_eq!(d("0"), Dist::zero());
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["-1", "abc", "", ".", "1/0", "1/-2", "1..2", "e5", "0x10"] {
            assert!(bad.parse::<Dist>().is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn exact_where_floats_are_not() {
        assert_eq!(d("0.1").checked_add(&d("0.2")), d("0.3"));
    }

    #[test]
    fn decimal_spelling() {
        assert_eq!(d("1/8").to_decimal_string(), "0.125");
        assert_eq!(d("1/3").to_decimal_string(), "1/3");
        assert_eq!(d("2").to_decimal_string(), "2");
        assert_eq!(d("0.05").to_decimal_string(), "0.05");
        assert_eq!(d("7/20").to_decimal_string(), "0.35");
        assert_eq!(d("1/3").to_fraction_string(), "1/3");
        assert_eq!(d("0.5").to_fraction_string(), "1/2");
    }

    #[test]
    fn serde_uses_strings() {
        let json = serde_json::to_string(&d("1/4")).unwrap();
        assert_eq!(json, "\"0.25\"");
        let back: Dist = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d("0.25"));
    }
}
