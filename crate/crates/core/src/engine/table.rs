use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{best_upper_bound, BoundOptions, BoundQuery, StartSource};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub q: u64,
    pub g: usize,
    #[serde(with = "crate::serde_big")]
    pub start: BigInt,
    pub source: StartSource,
    #[serde(with = "crate::serde_big")]
    pub upper_bound: BigInt,
    pub resolved: bool,
    /// Rules that eliminated something on the way down, `;`-separated.
    pub rules: String,
}

pub fn table_rows(qs: &[u64], genera: RangeInclusive<usize>, options: BoundOptions) -> Result<Vec<TableRow>> {
    let grid: Vec<(u64, usize)> = qs
        .iter()
        .flat_map(|&q| genera.clone().map(move |g| (q, g)))
        .collect();
    grid.par_iter()
        .map(|&(q, g)| {
            let r = best_upper_bound(&BoundQuery::new(q, g).with_options(options))?;
            let rules: Vec<&str> = r.rules_used().iter().map(|r| r.name()).collect();
            Ok(TableRow {
                q,
                g,
                start: r.start.value.clone(),
                source: r.start.source,
                upper_bound: r.upper_bound.clone(),
                resolved: r.resolved,
                rules: rules.join(";"),
            })
        })
        .collect()
}

/// Bound table over `qs x genera`, rows ordered by `q` as listed, then `g`.
pub fn emit_table(
    qs: &[u64],
    genera: RangeInclusive<usize>,
    options: BoundOptions,
    format: TableFormat,
) -> Result<String> {
    let rows = table_rows(qs, genera, options)?;
    Ok(match format {
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
            s.push('\n');
            s
        }
        TableFormat::Csv => {
            let mut s = String::from("q,g,start,source,upper_bound,resolved,rules\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.q,
                    r.g,
                    r.start,
                    r.source.name(),
                    r.upper_bound,
                    r.resolved,
                    r.rules
                );
            }
            s
        }
    })
}
