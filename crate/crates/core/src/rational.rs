//! Exact rational scalars and their text/JSON encodings.
//!
//! `Rational` is `num_rational::BigRational`: always in lowest terms with a
//! positive denominator, zero is `0/1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Least common multiple of the denominators of `values` (1 for an empty input).
pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Scales `values` by the lcm of their denominators, yielding integers with the same ratios.
pub fn scale_to_integers(values: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = lcm_of_denominators(values);
    let ints = values
        .iter()
        .map(|r| r.numer() * (&l / r.denom()))
        .collect();
    (ints, l)
}

/// Parses `p/q`, an integer, or a finite decimal such as `-1.25` or `3e-2`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("empty rational literal"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::parse(format!("not a rational number: {s:?}"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// `p/q`, or `p` when the value is integral.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when the denominator has no prime factors other than 2 and 5.
pub fn is_finite_decimal(r: &Rational) -> bool {
    let mut d = r.denom().clone();
    for p in [2u32, 5] {
        let p = BigInt::from(p);
        while (&d % &p).is_zero() {
            d /= &p;
        }
    }
    d.is_one()
}

/// Decimal rendering of `r`. The flag is false when the text is a rounded
/// approximation (20 fractional digits) rather than the exact value.
pub fn to_decimal(r: &Rational) -> (String, bool) {
    let exact = is_finite_decimal(r);
    let digits = if exact {
        let mut d = r.denom().clone();
        let (mut twos, mut fives) = (0usize, 0usize);
        while d.is_even() {
            d >>= 1;
            twos += 1;
        }
        let five = BigInt::from(5);
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        twos.max(fives)
    } else {
        20
    };
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (r * Rational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let (whole, frac) = abs.div_rem(&scale);
    let mut text = whole.to_string();
    if digits > 0 {
        let frac = format!("{:0>width$}", frac.to_string(), width = digits);
        let frac = frac.trim_end_matches('0');
        if !frac.is_empty() {
            text.push('.');
            text.push_str(frac);
        }
    }
    if neg && text.chars().any(|c| c != '0' && c != '.') {
        text.insert(0, '-');
    }
    (text, exact)
}

/// JSON encoding of a single rational: `{"num": .., "den": ..}` on output;
/// integers, `"p/q"` strings and `{num, den}` objects accepted on input.
pub mod json {
    use super::*;

    #[derive(Serialize)]
    struct Out {
        num: BigJson,
        den: BigJson,
    }

    enum BigJson {
        Small(i64),
        Big(String),
    }

    impl Serialize for BigJson {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            match self {
                BigJson::Small(v) => s.serialize_i64(*v),
                BigJson::Big(v) => s.serialize_str(v),
            }
        }
    }

    fn big(v: &BigInt) -> BigJson {
        v.to_i64()
            .map(BigJson::Small)
            .unwrap_or_else(|| BigJson::Big(v.to_string()))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum IntIn {
        Int(i64),
        Text(String),
    }

    impl IntIn {
        fn into_big<E: de::Error>(self) -> std::result::Result<BigInt, E> {
            match self {
                IntIn::Int(v) => Ok(BigInt::from(v)),
                IntIn::Text(s) => s.trim().parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
            }
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum In {
        Int(i64),
        Text(String),
        Pair { num: IntIn, den: IntIn },
    }

    fn decode<E: de::Error>(v: In) -> std::result::Result<Rational, E> {
        match v {
            In::Int(i) => Ok(int(i)),
            In::Text(s) => parse_rational(&s).map_err(E::custom),
            In::Pair { num, den } => {
                let (num, den) = (num.into_big::<E>()?, den.into_big::<E>()?);
                if den.is_zero() {
                    return Err(E::custom("zero denominator"));
                }
                Ok(Rational::new(num, den))
            }
        }
    }

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        Out {
            num: big(r.numer()),
            den: big(r.denom()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        decode(In::deserialize(d)?)
    }

    /// Same encoding for `Vec<Rational>`.
    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            use serde::ser::SerializeSeq;
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&Out {
                    num: big(r.numer()),
                    den: big(r.denom()),
                })?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            Vec::<In>::deserialize(d)?.into_iter().map(decode).collect()
        }
    }

    /// Same encoding for `Option<Rational>`.
    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match v {
                Some(r) => super::serialize(r, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
            Option::<In>::deserialize(d)?.map(decode).transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("-.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("3e-2").unwrap(), rat(3, 100));
        assert_eq!(parse_rational("2.5E1").unwrap(), int(25));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn canonical_zero() {
        let z = rat(0, -5);
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(1, 4)), ("0.25".to_string(), true));
        assert_eq!(to_decimal(&rat(-3, 40)), ("-0.075".to_string(), true));
        assert_eq!(to_decimal(&int(12)), ("12".to_string(), true));
        let (text, exact) = to_decimal(&rat(1, 3));
        assert!(!exact);
        assert!(text.starts_with("0.3333333333"));
        assert!(!is_finite_decimal(&rat(1, 12)));
    }

    #[test]
    fn lcm_and_scaling() {
        let c = [rat(1, 2), rat(1, 3), int(1), int(0)];
        assert_eq!(lcm_of_denominators(&c), BigInt::from(6));
        let (ints, l) = scale_to_integers(&c);
        assert_eq!(l, BigInt::from(6));
        assert_eq!(ints, vec![3.into(), 2.into(), 6.into(), 0.into()]);
    }

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap {
        #[serde(with = "json")]
        r: Rational,
        #[serde(with = "json::vec")]
        v: Vec<Rational>,
    }

    #[test]
    fn json_forms() {
        let w: Wrap = serde_json::from_str(r#"{"r": "2/4", "v": [1, {"num": -3, "den": "9"}, "0.5"]}"#).unwrap();
        assert_eq!(w.r, rat(1, 2));
        assert_eq!(w.v, vec![int(1), rat(-1, 3), rat(1, 2)]);
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, r#"{"r":{"num":1,"den":2},"v":[{"num":1,"den":1},{"num":-1,"den":3},{"num":1,"den":2}]}"#);
        let back: Wrap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
    }
}
