//! Coefficient tables `λ ↦ ξ_λ` indexed by (strict) partitions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::partitions::{Partition, StrictPartition};
use crate::rational::Rational;
use crate::series::SeriesError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpandError {
    #[error("expansion needs a {0} series")]
    WrongKind(&'static str),
    #[error("expansion needs a series without parameters or y variables")]
    HasParams,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Index types carrying a weight.
pub trait Weighted: Ord + Clone {
    fn weight(&self) -> u32;
    fn is_empty_index(&self) -> bool;
}

impl Weighted for Partition {
    fn weight(&self) -> u32 {
        Partition::weight(self)
    }
    fn is_empty_index(&self) -> bool {
        self.is_empty()
    }
}

impl Weighted for StrictPartition {
    fn weight(&self) -> u32 {
        StrictPartition::weight(self)
    }
    fn is_empty_index(&self) -> bool {
        self.is_empty()
    }
}

/// Sparse table of coefficients; absent keys read as zero. The empty
/// partition is always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable<K: Weighted> {
    max_weight: u32,
    entries: BTreeMap<K, Rational>,
}

pub type SchurTable = CoeffTable<Partition>;
pub type QTable = CoeffTable<StrictPartition>;

impl<K: Weighted + Default> CoeffTable<K> {
    pub fn new(max_weight: u32) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(K::default(), Rational::zero());
        CoeffTable {
            max_weight,
            entries,
        }
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    /// Sets `ξ_key`; keys above `max_weight` are ignored and zeros are not
    /// stored (except for the empty index).
    pub fn set(&mut self, key: K, value: Rational) {
        if key.weight() > self.max_weight {
            return;
        }
        if value.is_zero() && !key.is_empty_index() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn get(&self, key: &K) -> Rational {
        self.entries
            .get(key)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn empty_coefficient(&self) -> Rational {
        self.get(&K::default())
    }

    /// Stored entries in graded order.
    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.entries.iter()
    }

    /// Stored entries with non-zero values.
    pub fn nonzero(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.entries.iter().filter(|(_, v)| !v.is_zero())
    }

    /// Same entries, restricted to weight at most `w`.
    pub fn restricted(&self, w: u32) -> Self {
        CoeffTable {
            max_weight: w.min(self.max_weight),
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| k.weight() <= w)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}
