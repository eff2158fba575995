//! Subsets of a finite sample space `{0, …, n-1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset of a finite space with `space_size` points. Members are sorted and unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSubset")]
pub struct FiniteSubset {
    space_size: usize,
    members: Vec<usize>,
}

#[derive(Deserialize)]
struct RawSubset {
    space_size: usize,
    members: Vec<usize>,
}

impl TryFrom<RawSubset> for FiniteSubset {
    type Error = Error;

    fn try_from(raw: RawSubset) -> Result<Self> {
        Self::new(raw.space_size, raw.members)
    }
}

impl FiniteSubset {
    pub fn new(space_size: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&index) = members.iter().find(|&&i| i >= space_size) {
            return Err(Error::IndexOutOfRange {
                index,
                size: space_size,
            });
        }
        Ok(Self {
            space_size,
            members,
        })
    }

    pub fn empty(space_size: usize) -> Self {
        Self {
            space_size,
            members: Vec::new(),
        }
    }

    pub fn full(space_size: usize) -> Self {
        Self {
            space_size,
            members: (0..space_size).collect(),
        }
    }

    pub fn space_size(&self) -> usize {
        self.space_size
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space_size == other.space_size {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                expected: format!("finite({})", self.space_size),
                found: format!("finite({})", other.space_size),
            })
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Self::new(
            self.space_size,
            self.members.iter().chain(&other.members).copied(),
        )
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(Self {
            space_size: self.space_size,
            members: self
                .members
                .iter()
                .copied()
                .filter(|&i| other.contains(i))
                .collect(),
        })
    }

    pub fn complement(&self) -> Self {
        Self {
            space_size: self.space_size,
            members: (0..self.space_size)
                .filter(|&i| !self.contains(i))
                .collect(),
        }
    }
}
