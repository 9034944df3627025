//! Serializable table reports. Counts are decimal strings so they survive
//! JSON consumers without big-integer support.

use num_traits::Zero;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::lattice::Point;
use crate::scalar::{Count, Rational, Weight};

use super::engine::WalkClass;
use super::table::{CountTable, Distribution};

pub(crate) fn ser_decimal<S: Serializer>(c: &Count, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_str_radix(10))
}

pub(crate) fn ser_decimal_vec<S: Serializer>(cs: &[Count], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(cs.iter().map(|c| c.to_str_radix(10)))
}

pub trait ReportKey {
    fn to_json(&self) -> Value;

    fn to_text(&self) -> String {
        match self.to_json() {
            Value::String(s) => s,
            v => v.to_string(),
        }
    }
}

impl ReportKey for Point {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl ReportKey for usize {
    fn to_json(&self) -> Value {
        Value::from(*self)
    }
}

impl ReportKey for String {
    fn to_json(&self) -> Value {
        Value::String(self.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportEntry {
    pub key: Value,
    pub count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub dim: usize,
    pub n: usize,
    pub class: WalkClass,
    pub report: String,
    pub total: String,
    pub entries: Vec<ReportEntry>,
    /// Largest probability as an exact fraction, for distribution reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup: Option<String>,
}

impl TableReport {
    pub fn from_table<K: Ord + ReportKey>(
        dim: usize,
        n: usize,
        class: WalkClass,
        report: &str,
        table: &CountTable<K>,
    ) -> Self {
        TableReport {
            dim,
            n,
            class,
            report: report.to_string(),
            total: table.total().to_str_radix(10),
            entries: table
                .iter()
                .map(|(k, c)| ReportEntry {
                    key: k.to_json(),
                    count: c.to_str_radix(10),
                    probability: None,
                })
                .collect(),
            sup: None,
        }
    }

    pub fn from_distribution<K: Ord + Clone + ReportKey>(
        dim: usize,
        n: usize,
        class: WalkClass,
        report: &str,
        dist: &Distribution<K>,
    ) -> Self {
        let mut out = Self::from_table(dim, n, class, report, dist.table());
        if !dist.total().is_zero() {
            for (entry, (_, c)) in out.entries.iter_mut().zip(dist.table().iter()) {
                entry.probability = Some(Rational::from_counts(c, dist.total()).to_string());
            }
            out.sup = Some(dist.sup_value().to_string());
        }
        out
    }
}
