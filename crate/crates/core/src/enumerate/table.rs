use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::scalar::{Count, Rational, Weight};

/// Arbitrary-precision counts keyed by `K`, with their running total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable<K: Ord> {
    entries: BTreeMap<K, Count>,
    total: Count,
}

impl<K: Ord> Default for CountTable<K> {
    fn default() -> Self {
        CountTable {
            entries: BTreeMap::new(),
            total: Count::zero(),
        }
    }
}

impl<K: Ord> CountTable<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: K, count: Count) {
        self.total += &count;
        *self.entries.entry(key).or_default() += count;
    }

    /// Adds `key` with count zero if absent, so that it shows up in reports.
    pub fn touch(&mut self, key: K) {
        self.entries.entry(key).or_default();
    }

    pub fn get(&self, key: &K) -> Count {
        self.entries.get(key).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> &Count {
        &self.total
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Count)> {
        self.entries.iter()
    }

    pub fn merge(&mut self, other: CountTable<K>) {
        for (k, c) in other.entries {
            self.add(k, c);
        }
    }
}

impl<K: Ord> FromIterator<(K, u64)> for CountTable<K> {
    fn from_iter<T: IntoIterator<Item = (K, u64)>>(iter: T) -> Self {
        let mut table = CountTable::new();
        for (k, c) in iter {
            table.add(k, BigUint::from(c));
        }
        table
    }
}

/// A [`CountTable`] normalized by its total. With `P = Rational` the
/// probabilities are exact and sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<K: Ord, P: Weight = Rational> {
    table: CountTable<K>,
    probs: BTreeMap<K, P>,
}

impl<K: Ord + Clone, P: Weight> Distribution<K, P> {
    pub fn from_table(table: CountTable<K>) -> Self {
        let mut probs = BTreeMap::new();
        if !table.total.is_zero() {
            for (k, c) in &table.entries {
                probs.insert(k.clone(), P::from_counts(c, &table.total));
            }
        }
        Distribution { table, probs }
    }

    pub fn table(&self) -> &CountTable<K> {
        &self.table
    }

    pub fn total(&self) -> &Count {
        self.table.total()
    }

    pub fn probability(&self, key: &K) -> P {
        self.probs.get(key).cloned().unwrap_or_else(P::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &P)> {
        self.probs.iter()
    }

    /// Largest probability and the smallest key attaining it.
    pub fn sup(&self) -> Option<(K, P)> {
        let mut best: Option<(&K, &P)> = None;
        for (k, p) in &self.probs {
            if best.is_none_or(|(_, b)| p > b) {
                best = Some((k, p));
            }
        }
        best.map(|(k, p)| (k.clone(), p.clone()))
    }

    pub fn sup_value(&self) -> P {
        self.sup().map_or_else(P::zero, |(_, p)| p)
    }

    pub fn to_weight<Q: Weight>(&self) -> Distribution<K, Q> {
        Distribution::from_table(self.table.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn totals_and_probabilities() {
        let table: CountTable<u32> = [(1, 2), (2, 1), (1, 1)].into_iter().collect();
        assert_eq!(table.total(), &BigUint::from(4u32));
        assert_eq!(table.get(&1), BigUint::from(3u32));
        let d: Distribution<u32> = Distribution::from_table(table);
        let sum = d.iter().fold(Rational::zero(), |acc, (_, p)| acc + p);
        assert!(sum.is_one());
        assert_eq!(d.sup(), Some((1, Rational::new(3.into(), 4.into()))));
        let f: Distribution<u32, f64> = d.to_weight();
        assert_eq!(f.probability(&2), 0.25);
        assert_eq!(f.probability(&7), 0.0);
    }

    #[test]
    fn empty_distribution() {
        let mut table: CountTable<u32> = CountTable::new();
        table.touch(3);
        let d: Distribution<u32> = Distribution::from_table(table);
        assert_eq!(d.sup(), None);
        assert!(d.sup_value().is_zero());
        assert_eq!(d.table().len(), 1);
    }
}
