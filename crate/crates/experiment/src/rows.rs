// SPDX-License-Identifier: Apache-2.0

//! The CSV output schema.

use std::cmp::Ordering;
use std::io::Write;

use serde::Serialize;

use crate::Result;

pub const HEADER: &str =
    "scenario,policy,axis,axis_value,utilization,metric,source,epsilon,value,theta_star,flag";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Bound,
    Simulation,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub scenario: String,
    pub policy: String,
    pub axis: String,
    pub axis_value: f64,
    pub utilization: f64,
    pub metric: String,
    pub source: Source,
    pub epsilon: f64,
    pub value: Option<f64>,
    pub theta_star: Option<f64>,
    /// `;`-separated annotations such as `infeasible` or `sigma3=...`.
    pub flag: String,
}

fn key_cmp(a: &CsvRow, b: &CsvRow) -> Ordering {
    a.scenario
        .cmp(&b.scenario)
        .then_with(|| a.policy.cmp(&b.policy))
        .then_with(|| a.axis.cmp(&b.axis))
        .then_with(|| a.axis_value.total_cmp(&b.axis_value))
        .then_with(|| a.metric.cmp(&b.metric))
        .then_with(|| a.source.cmp(&b.source))
        .then_with(|| b.epsilon.total_cmp(&a.epsilon))
}

/// Sorts rows into their canonical order.
pub fn sort_rows(rows: &mut [CsvRow]) {
    rows.sort_by(key_cmp);
}

/// Writes the header and the rows in canonical order.
pub fn write_csv<W: Write>(out: W, mut rows: Vec<CsvRow>) -> Result<()> {
    sort_rows(&mut rows);
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Joins non-empty annotations.
pub fn flags<I: IntoIterator<Item = String>>(parts: I) -> String {
    parts.into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join(";")
}
