//! Encodings shared by the pairwise-weight instance formats.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

/// `[i, j, num, den]` with 1-based item indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PairWeight {
    pub i: usize,
    pub j: usize,
    pub value: Rational,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntLike {
    Int(i64),
    Text(String),
}

impl IntLike {
    fn into_big<E: de::Error>(self) -> std::result::Result<BigInt, E> {
        match self {
            IntLike::Int(v) => Ok(v.into()),
            IntLike::Text(s) => s.trim().parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
        }
    }
}

impl<'de> Deserialize<'de> for PairWeight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (i, j, num, den) = <(usize, usize, IntLike, IntLike)>::deserialize(d)?;
        let (num, den) = (num.into_big::<D::Error>()?, den.into_big::<D::Error>()?);
        if den.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(PairWeight {
            i,
            j,
            value: Rational::new(num, den),
        })
    }
}

fn ser_big<S: SerializeTuple>(t: &mut S, v: &BigInt) -> std::result::Result<(), S::Error> {
    match v.to_i64() {
        Some(small) => t.serialize_element(&small),
        None => t.serialize_element(&v.to_string()),
    }
}

impl Serialize for PairWeight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(4)?;
        t.serialize_element(&self.i)?;
        t.serialize_element(&self.j)?;
        ser_big(&mut t, self.value.numer())?;
        ser_big(&mut t, self.value.denom())?;
        t.end()
    }
}

pub(crate) fn check_item(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::invalid(format!("index {i} outside 1..={n}")));
    }
    Ok(())
}

/// Reads `n` followed by an `n × n` matrix of numbers. Lines before the first
/// lone integer are treated as a title.
pub(crate) fn parse_dense_matrix(text: &str) -> Result<(usize, Vec<Vec<Rational>>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let n = loop {
        let line = lines.next().ok_or_else(|| Error::parse("missing size line"))?;
        let mut toks = line.split_whitespace();
        if let (Some(t), None) = (toks.next(), toks.next()) {
            if let Ok(n) = t.parse::<usize>() {
                break n;
            }
        }
    };
    let values = lines
        .flat_map(str::split_whitespace)
        .map(parse_rational)
        .collect::<Result<Vec<_>>>()?;
    if values.len() != n * n {
        return Err(Error::parse(format!("expected {} matrix entries, found {}", n * n, values.len())));
    }
    Ok((n, values.chunks(n.max(1)).map(<[Rational]>::to_vec).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn pair_weight_json() {
        let w: Vec<PairWeight> = serde_json::from_str(r#"[[1, 2, 3, 6], [2, 1, "-4", "1"]]"#).unwrap();
        assert_eq!(w[0].value, rat(1, 2));
        assert_eq!(w[1].value, int(-4));
        assert_eq!(serde_json::to_string(&w).unwrap(), "[[1,2,1,2],[2,1,-4,1]]");
        assert!(serde_json::from_str::<PairWeight>("[1, 2, 1, 0]").is_err());
    }

    #[test]
    fn dense_matrix_with_title() {
        let (n, m) = parse_dense_matrix("be75eec\n2\n0 1.5\n-2 0\n").unwrap();
        assert_eq!(n, 2);
        assert_eq!(m[0][1], rat(3, 2));
        assert_eq!(m[1][0], int(-2));
        assert!(parse_dense_matrix("2\n0 1 2\n").is_err());
        assert!(parse_dense_matrix("").is_err());
    }
}
