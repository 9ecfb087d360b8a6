use std::collections::HashMap;

use crate::error::{Error, Result};

/// Shifted degree `|x|' = |x| - 1`, the degree in the suspension `A[1]`.
pub fn shift(degree: i64) -> i64 {
    degree - 1
}

pub fn unshift(shifted: i64) -> i64 {
    shifted + 1
}

/// An ordered, finite list of named basis vectors with integer degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    names: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

impl GradedBasis {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (name, deg) in elements {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::Malformed("empty basis name".into()));
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::Malformed(format!("duplicate basis name `{name}`")));
            }
            names.push(name);
            degrees.push(deg);
        }
        Ok(Self {
            names,
            degrees,
            index,
        })
    }

    /// The zero-dimensional space. Only used for degenerate homology.
    pub fn empty() -> Self {
        Self {
            names: Vec::new(),
            degrees: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn shifted(&self, i: usize) -> i64 {
        shift(self.degrees[i])
    }

    pub fn shifted_degrees(&self) -> Vec<i64> {
        self.degrees.iter().map(|d| shift(*d)).collect()
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn word_shifted(&self, word: &[usize]) -> i64 {
        word.iter().map(|i| self.shifted(*i)).sum()
    }

    pub fn render_word(&self, word: &[usize]) -> String {
        word.iter()
            .map(|i| self.name(*i))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_roundtrip() {
        for d in -5..5 {
            assert_eq!(shift(unshift(d)), d);
        }
    }

    #[test]
    fn rejects_duplicates() {
        assert!(GradedBasis::new([("a", 0), ("a", 1)]).is_err());
        let b = GradedBasis::new([("a", 0), ("b", 3)]).unwrap();
        assert_eq!(b.lookup("b"), Some(1));
        assert_eq!(b.shifted(1), 2);
    }
}
