//! File formats: direction-matrix input and JSON exports.
//!
//! Rationals are always written as strings (`"3"`, `"-1/2"`) so no value ever
//! passes through a float.

use serde::{Deserialize, Serialize};

use crate::error::{BoxError, Result};
use crate::ratlinalg::{parse_rational, RatMatrix, Rational};

/// Direction-matrix input file:
/// `{"rows": 2, "cols": 3, "entries": [["1","0","1"],["0","1","1"]], "centered": false}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiSpec {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
    #[serde(default)]
    pub centered: bool,
}

impl XiSpec {
    pub fn from_matrix(xi: &RatMatrix, centered: bool) -> Self {
        Self {
            rows: xi.rows(),
            cols: xi.cols(),
            entries: xi.row_vecs().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
            centered,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| BoxError::Parse(e.to_string()))
    }

    /// The direction matrix, checked for shape and full row rank.
    pub fn matrix(&self) -> Result<RatMatrix> {
        if self.rows == 0 || self.cols < self.rows {
            return Err(BoxError::Parse(format!("need n >= s >= 1, got s={}, n={}", self.rows, self.cols)));
        }
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(BoxError::Parse("entries do not match the declared shape".into()));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| parse_rational(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let xi = RatMatrix::from_rows(rows)?;
        let rank = xi.rank();
        if rank < self.rows {
            return Err(BoxError::DegenerateMatrix { rank, expected: self.rows });
        }
        Ok(xi)
    }
}

pub mod rat {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub mod rat_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let text = Vec::<String>::deserialize(d)?;
        text.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect()
    }
}

pub mod rat_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &RatMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m.row_vecs().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RatMatrix, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        RatMatrix::from_rows(parsed).map_err(serde::de::Error::custom)
    }
}

pub mod rat_points {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|r| r.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)
    }
}

/// Parses a comma-separated point such as `"1/2,1/4"`.
pub fn parse_point(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::frac;

    #[test]
    fn xi_spec_roundtrip() {
        let spec = XiSpec::parse(r#"{"rows":2,"cols":3,"entries":[["1","0","1"],["0","1","1"]]}"#).unwrap();
        assert!(!spec.centered);
        let xi = spec.matrix().unwrap();
        assert_eq!(xi, RatMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 1]]));
        assert_eq!(XiSpec::from_matrix(&xi, false), spec);
    }

    #[test]
    fn xi_spec_rejects_bad_input() {
        let degenerate = XiSpec::parse(r#"{"rows":2,"cols":2,"entries":[["1","2"],["2","4"]]}"#).unwrap();
        assert!(matches!(degenerate.matrix(), Err(BoxError::DegenerateMatrix { .. })));
        let ragged = XiSpec::parse(r#"{"rows":2,"cols":2,"entries":[["1","2"],["2"]]}"#).unwrap();
        assert!(matches!(ragged.matrix(), Err(BoxError::Parse(_))));
        let irrational = XiSpec::parse(r#"{"rows":1,"cols":1,"entries":[["sqrt(2)"]]}"#).unwrap();
        assert!(matches!(irrational.matrix(), Err(BoxError::Parse(_))));
        assert!(XiSpec::parse("{").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("1/2, 1/4").unwrap(), vec![frac(1, 2), frac(1, 4)]);
        assert!(parse_point("1/2,x").is_err());
    }
}
