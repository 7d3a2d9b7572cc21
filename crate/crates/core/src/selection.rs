use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A contiguous, inclusive range of parts written `a..b`, or `all`.
///
/// Endpoints are matched against part names first (numerically when both
/// are integers, so `5` selects a part named `05`) and otherwise read as
/// 1-based ranks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PartRange {
    All,
    Span(String, String),
}

impl PartRange {
    /// Resolves to part indices (0-based) in rank order.
    pub fn resolve<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        match self {
            PartRange::All => Ok((0..names.len()).collect()),
            PartRange::Span(a, b) => {
                let lo = locate(a, names)?;
                let hi = locate(b, names)?;
                if lo > hi {
                    return Err(Error::EmptyRange(self.to_string()));
                }
                Ok((lo..=hi).collect())
            }
        }
    }
}

fn locate<S: AsRef<str>>(key: &str, names: &[S]) -> Result<usize> {
    if let Some(i) = names.iter().position(|n| n.as_ref() == key) {
        return Ok(i);
    }
    if let Ok(k) = key.parse::<u64>() {
        if let Some(i) = names.iter().position(|n| n.as_ref().parse::<u64>().ok() == Some(k)) {
            return Ok(i);
        }
        if k >= 1 && (k as usize) <= names.len() {
            return Ok(k as usize - 1);
        }
    }
    Err(Error::UnknownPart(key.to_string()))
}

impl FromStr for PartRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "all" {
            return Ok(PartRange::All);
        }
        match s.split_once("..") {
            Some((a, b)) if !a.is_empty() && !b.is_empty() => {
                Ok(PartRange::Span(a.trim().to_string(), b.trim().to_string()))
            }
            None if !s.is_empty() => Ok(PartRange::Span(s.to_string(), s.to_string())),
            _ => Err(Error::InvalidArgument(format!("invalid part range `{s}`"))),
        }
    }
}

impl fmt::Display for PartRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartRange::All => f.write_str("all"),
            PartRange::Span(a, b) => write!(f, "{a}..{b}"),
        }
    }
}

impl From<PartRange> for String {
    fn from(r: PartRange) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for PartRange {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_names_numbers_and_ranks() {
        let names = ["Source", "Target", "01", "02", "03", "04", "05"];
        let r: PartRange = "2..4".parse().unwrap();
        assert_eq!(r.resolve(&names).unwrap(), vec![3, 4, 5]);
        let r: PartRange = "Target..02".parse().unwrap();
        assert_eq!(r.resolve(&names).unwrap(), vec![1, 2, 3]);
        let r: PartRange = "all".parse().unwrap();
        assert_eq!(r.resolve(&names).unwrap().len(), 7);

        let plain = ["a", "b", "c"];
        let r: PartRange = "2..3".parse().unwrap();
        assert_eq!(r.resolve(&plain).unwrap(), vec![1, 2]);
    }

    #[test]
    fn rejects_bad_ranges() {
        let names = ["a", "b", "c"];
        assert!(matches!(
            "3..1".parse::<PartRange>().unwrap().resolve(&names),
            Err(Error::EmptyRange(_))
        ));
        assert!(matches!(
            "a..zz".parse::<PartRange>().unwrap().resolve(&names),
            Err(Error::UnknownPart(_))
        ));
        assert!("..3".parse::<PartRange>().is_err());
    }
}
