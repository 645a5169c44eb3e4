//! Multi-partite factorizations `H = H_0 (x) H_1 (x) ... (x) H_{N-1}` and
//! subsystem collections.
//!
//! Flat amplitude indices are mixed-radix with factor 0 as the most
//! significant digit (row-major). The kept and complement multi-indices of a
//! [`Selector`] follow the same convention restricted to their own factors, in
//! increasing factor order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("factor list is empty")]
    Empty,
    #[error("factor {index} has dimension 0; dimensions must be >= 1")]
    ZeroDimension { index: usize },
    #[error("cannot parse dimension list {0:?}; expected e.g. 2x3x5")]
    BadDims(String),
    #[error("cannot parse selector {0:?}; expected comma-separated indices e.g. 0,2")]
    BadSelector(String),
    #[error("factor index {index} out of range for {factors} factors")]
    IndexOutOfRange { index: usize, factors: usize },
    #[error("factor index {0} repeated in selector")]
    DuplicateIndex(usize),
    #[error("{kept} does not divide {total}")]
    NotADivisor { kept: BigUint, total: BigUint },
}

pub type Result<T> = std::result::Result<T, PartitionError>;

/// Ordered factor dimensions and their exact product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorList {
    dims: Vec<u64>,
    total: BigUint,
}

impl FactorList {
    pub fn new(dims: Vec<u64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(PartitionError::Empty);
        }
        if let Some(index) = dims.iter().position(|&d| d == 0) {
            return Err(PartitionError::ZeroDimension { index });
        }
        let total = dims.iter().map(|&d| BigUint::from(d)).product();
        Ok(FactorList { dims, total })
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Total dimension if it fits in `usize`.
    pub fn total_usize(&self) -> Option<usize> {
        self.total.to_usize()
    }

    pub fn select(&self, indices: &[usize]) -> Result<Selector> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(PartitionError::DuplicateIndex(w[0]));
            }
        }
        if let Some(&index) = sorted.iter().find(|&&i| i >= self.dims.len()) {
            return Err(PartitionError::IndexOutOfRange {
                index,
                factors: self.dims.len(),
            });
        }
        let kept_dim: BigUint = sorted
            .iter()
            .map(|&i| BigUint::from(self.dims[i]))
            .product();
        let complement_dim = &self.total / &kept_dim;
        Ok(Selector {
            indices: sorted,
            kept_dim,
            complement_dim,
        })
    }

    /// Parse a selector string such as `"0,2"` (empty string selects nothing).
    pub fn parse_selector(&self, text: &str) -> Result<Selector> {
        let text = text.trim();
        if text.is_empty() {
            return self.select(&[]);
        }
        let indices = text
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::BadSelector(text.to_string()))?;
        self.select(&indices)
    }

    /// The factors not in `sel`.
    pub fn complement(&self, sel: &Selector) -> Selector {
        let rest: Vec<usize> = (0..self.dims.len())
            .filter(|i| !sel.indices.contains(i))
            .collect();
        self.select(&rest).expect("complement indices are valid")
    }

    /// Union of two selectors on this factor list.
    pub fn union(&self, a: &Selector, b: &Selector) -> Result<Selector> {
        let mut all = a.indices.clone();
        all.extend(b.indices.iter().copied().filter(|i| !a.indices.contains(i)));
        self.select(&all)
    }
}

impl FromStr for FactorList {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .trim()
            .split(['x', 'X'])
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::BadDims(s.to_string()))?;
        FactorList::new(dims)
    }
}

impl fmt::Display for FactorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(u64::to_string).collect();
        f.write_str(&parts.join("x"))
    }
}

impl Serialize for FactorList {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A collection of factors, with the dimensions of the collection and of
/// everything else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selector {
    indices: Vec<usize>,
    kept_dim: BigUint,
    complement_dim: BigUint,
}

impl Selector {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn kept_dim(&self) -> &BigUint {
        &self.kept_dim
    }

    pub fn complement_dim(&self) -> &BigUint {
        &self.complement_dim
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `(min, max)` of a collection dimension and its complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinMaxSplit {
    pub m: BigUint,
    pub big_m: BigUint,
}

pub fn collection_dims(factors: &FactorList, indices: &[usize]) -> Result<(BigUint, BigUint)> {
    let sel = factors.select(indices)?;
    Ok((sel.kept_dim, sel.complement_dim))
}

pub fn min_max_split(kept_dim: &BigUint, total: &BigUint) -> Result<MinMaxSplit> {
    let (other, rem) = total.div_rem(kept_dim);
    if kept_dim == &BigUint::ZERO || rem != BigUint::ZERO {
        return Err(PartitionError::NotADivisor {
            kept: kept_dim.clone(),
            total: total.clone(),
        });
    }
    let (m, big_m) = if kept_dim <= &other {
        (kept_dim.clone(), other)
    } else {
        (other, kept_dim.clone())
    };
    Ok(MinMaxSplit { m, big_m })
}

pub fn disjoint(a: &Selector, b: &Selector) -> bool {
    a.indices.iter().all(|i| !b.contains(*i))
}
