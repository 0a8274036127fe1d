use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::DensePolynomial;

/// The finite set `S` of allowed child counts. Always contains 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChildSet {
    elements: Vec<u32>,
}

impl ChildSet {
    pub fn new(elements: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut elements: Vec<u32> = elements.into_iter().collect();
        let len = elements.len();
        elements.sort_unstable();
        elements.dedup();
        if elements.len() != len {
            return Err(Error::InvalidChildSet("duplicate child counts".into()));
        }
        if elements.first() != Some(&0) {
            return Err(Error::InvalidChildSet("0 must be an allowed child count".into()));
        }
        Ok(ChildSet { elements })
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, s: u32) -> bool {
        self.elements.binary_search(&s).is_ok()
    }

    pub fn max(&self) -> u32 {
        *self.elements.last().expect("child set is never empty")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, s: u32) -> Option<usize> {
        self.elements.binary_search(&s).ok()
    }

    /// `phi(z) = sum over s in S of z^s`.
    pub fn phi(&self) -> DensePolynomial {
        let mut c = vec![0i64; self.max() as usize + 1];
        for &s in &self.elements {
            c[s as usize] = 1;
        }
        DensePolynomial::from_i64(&c)
    }
}

impl fmt::Display for ChildSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// Parses a comma-separated list such as `0,1,2` (braces optional).
impl FromStr for ChildSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('{').trim_end_matches('}');
        let parsed = trimmed
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidChildSet(format!("bad element {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        ChildSet::new(parsed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ChildSet::new([1, 2]).is_err());
        assert!(ChildSet::new([0, 1, 1]).is_err());
        assert!(ChildSet::new([]).is_err());
        let s = ChildSet::new([2, 0, 1]).unwrap();
        assert_eq!(s.elements(), &[0, 1, 2]);
        assert_eq!(s.to_string(), "{0,1,2}");
        assert!(ChildSet::new([0]).is_ok());
    }

    #[test]
    fn parse() {
        let s: ChildSet = "0,2,3".parse().unwrap();
        assert_eq!(s.elements(), &[0, 2, 3]);
        assert_eq!("{0, 1}".parse::<ChildSet>().unwrap().elements(), &[0, 1]);
        assert!("0,-1".parse::<ChildSet>().is_err());
        assert!("1,2".parse::<ChildSet>().is_err());
        assert!("".parse::<ChildSet>().is_err());
    }

    #[test]
    fn phi_coefficients() {
        let s = ChildSet::new([0, 2, 3]).unwrap();
        assert_eq!(s.phi(), DensePolynomial::from_i64(&[1, 0, 1, 1]));
    }
}
