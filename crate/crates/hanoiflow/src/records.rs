//! Serializable report records and their CSV/JSON/text renderings.
//!
//! Fractions render as reduced `num/den` strings, floats through their
//! shortest round-trip form, so identical runs produce identical bytes.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PairSize {
    pub a: usize,
    pub b: usize,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GraphRecord {
    pub p: usize,
    pub n: usize,
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub connected: bool,
    /// `(degree, vertex count)`, ascending by degree.
    pub degree_histogram: Vec<(usize, usize)>,
    /// Boundary matchings between top-level siblings `a < b`.
    pub matchings: Vec<PairSize>,
    /// Facet sizes `|F_ab|` of the whole graph.
    pub facets: Vec<PairSize>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LevelRecord {
    pub level: usize,
    pub shuffle: f64,
    pub transmission: f64,
    pub concentration_distribution: f64,
    pub rho: f64,
    pub increment: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ValidationRecord {
    pub arithmetic: &'static str,
    pub per_commodity: bool,
    /// MSF problems checked: the aggregate, plus every source flow and
    /// stage chain in per-commodity mode.
    pub problems_checked: usize,
    pub failures: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FlowRecord {
    pub p: usize,
    pub n: usize,
    pub levels: Vec<LevelRecord>,
    pub rho: String,
    pub max_arc_load: String,
    pub argmax_arc: Option<(usize, usize)>,
    pub lower_bound: String,
    pub witness_upper_bound: String,
    pub fitted_constant: f64,
    pub exact_h: Option<String>,
    pub theta_ratio: Option<String>,
    pub validation: ValidationRecord,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ExpansionRecord {
    pub graph: String,
    pub vertices: usize,
    pub edge_expansion: String,
    pub edge_witness: Vec<usize>,
    pub edge_boundary: usize,
    pub vertex_expansion: Option<String>,
    pub vertex_witness: Option<Vec<usize>>,
    pub witness_upper_bound: Option<String>,
    pub flow_lower_bound: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TreewidthRecord {
    pub graph: String,
    pub vertices: usize,
    pub treewidth: usize,
    pub elimination_order: Vec<usize>,
    /// `|V| h / (3Δ) - 1` from the flow lower bound on `h`, when available.
    pub flow_lower_bound: Option<String>,
}

/// One row of the fixed results table; empty cells mark skipped oracles.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TableRow {
    pub p: usize,
    pub n: usize,
    pub rho: String,
    pub lower_bound: String,
    pub exact_h: Option<String>,
    pub witness_bound: String,
    /// `exact_h * (p/(p-2))^n`.
    pub theta_ratio: Option<String>,
}

impl From<&FlowRecord> for TableRow {
    fn from(r: &FlowRecord) -> Self {
        TableRow {
            p: r.p,
            n: r.n,
            rho: r.rho.clone(),
            lower_bound: r.lower_bound.clone(),
            exact_h: r.exact_h.clone(),
            witness_bound: r.witness_upper_bound.clone(),
            theta_ratio: r.theta_ratio.clone(),
        }
    }
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_csv_has_fixed_columns_and_empty_skips() {
        let rows = [TableRow {
            p: 3,
            n: 4,
            rho: "9".into(),
            lower_bound: "1/18".into(),
            exact_h: None,
            witness_bound: "2/27".into(),
            theta_ratio: None,
        }];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "p,n,rho,lower_bound,exact_h,witness_bound,theta_ratio\n3,4,9,1/18,,2/27,\n"
        );
    }
}
