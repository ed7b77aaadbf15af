//! Metric rows and their per-cell averages.

use std::io::Write;

use anyhow::{bail, Result};
use cuttree::oracle::{all_pairs_min_cut, check_cut_tree, OracleMode};
use cuttree::{gomory_hu, gusfield, oc_gomory_hu, CutTreeRun, Graph, PairHeuristic, RunMetrics};

/// Largest instance a bench cell verifies against the oracle.
pub const VERIFY_LIMIT: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Alg {
    Ghh,
    Ghr,
    Gus,
    Oc,
}

impl Alg {
    pub fn name(self) -> &'static str {
        match self {
            Alg::Ghh => "GH_h",
            Alg::Ghr => "GH_r",
            Alg::Gus => "Gusfield",
            Alg::Oc => "OC",
        }
    }

    pub fn run(self, g: &Graph) -> cuttree::Result<CutTreeRun> {
        match self {
            Alg::Ghh => gomory_hu(g, PairHeuristic::Heaviest),
            Alg::Ghr => gomory_hu(g, PairHeuristic::Reuse),
            Alg::Gus => gusfield(g),
            Alg::Oc => oc_gomory_hu(g),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
}

/// One output line. Ratios are `(nodes, edges)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub instance: String,
    pub n: f64,
    pub m: f64,
    pub algorithm: String,
    pub h_over_g: (f64, f64),
    pub mf_over_h: (f64, f64),
    pub mf_over_g: (f64, f64),
    pub diameter: (usize, usize),
    pub t_total: f64,
    pub t_mf: f64,
}

impl Row {
    pub fn from_metrics(instance: &str, algorithm: &str, m: &RunMetrics) -> Row {
        Row {
            instance: instance.to_string(),
            n: m.size_g.nodes as f64,
            m: m.size_g.edges as f64,
            algorithm: algorithm.to_string(),
            h_over_g: m.size_h.ratio(&m.size_g),
            mf_over_h: m.size_mf.ratio(&m.size_h),
            mf_over_g: m.size_mf.ratio(&m.size_g),
            diameter: (m.tree_diameter, m.tree_diameter),
            t_total: m.t_total.as_secs_f64(),
            t_mf: m.t_mf.as_secs_f64(),
        }
    }
}

/// Mean of every numeric column; diameters become their range.
pub fn average(rows: &[Row]) -> Row {
    assert!(!rows.is_empty());
    let k = rows.len() as f64;
    let mean = |f: &dyn Fn(&Row) -> f64| rows.iter().map(f).sum::<f64>() / k;
    Row {
        instance: rows[0].instance.clone(),
        n: mean(&|r| r.n),
        m: mean(&|r| r.m),
        algorithm: rows[0].algorithm.clone(),
        h_over_g: (mean(&|r| r.h_over_g.0), mean(&|r| r.h_over_g.1)),
        mf_over_h: (mean(&|r| r.mf_over_h.0), mean(&|r| r.mf_over_h.1)),
        mf_over_g: (mean(&|r| r.mf_over_g.0), mean(&|r| r.mf_over_g.1)),
        diameter: (
            rows.iter().map(|r| r.diameter.0).min().unwrap(),
            rows.iter().map(|r| r.diameter.1).max().unwrap(),
        ),
        t_total: mean(&|r| r.t_total),
        t_mf: mean(&|r| r.t_mf),
    }
}

pub const HEADER: [&str; 13] = [
    "instance",
    "n",
    "m",
    "algorithm",
    "size_h/size_g nodes",
    "size_h/size_g edges",
    "size_mf/size_h nodes",
    "size_mf/size_h edges",
    "size_mf/size_g nodes",
    "size_mf/size_g edges",
    "diameter",
    "t_total",
    "t_mf",
];

fn num(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{x:.0}")
    } else {
        format!("{x:.4}")
    }
}

pub fn write_rows(out: impl Write, format: Format, rows: &[Row]) -> Result<()> {
    let delim = match format {
        Format::Csv => b',',
        Format::Tsv => b'\t',
    };
    let mut w = csv::WriterBuilder::new().delimiter(delim).from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        let diameter = if r.diameter.0 == r.diameter.1 {
            r.diameter.0.to_string()
        } else {
            format!("{}-{}", r.diameter.0, r.diameter.1)
        };
        w.write_record([
            r.instance.clone(),
            num(r.n),
            num(r.m),
            r.algorithm.clone(),
            num(r.h_over_g.0),
            num(r.h_over_g.1),
            num(r.mf_over_h.0),
            num(r.mf_over_h.1),
            num(r.mf_over_g.0),
            num(r.mf_over_g.1),
            diameter,
            format!("{:.6}", r.t_total),
            format!("{:.6}", r.t_mf),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Runs `alg` on `g`; instances small enough are checked against the
/// oracle and rejected on any mismatch.
pub fn run_cell(instance: &str, g: &Graph, alg: Alg) -> Result<Row> {
    let run = alg.run(g)?;
    if g.node_count() <= VERIFY_LIMIT {
        let truth = all_pairs_min_cut(g, OracleMode::MaxFlow)?;
        let bad = check_cut_tree(&run.tree, &truth)?;
        if let Some(b) = bad.first() {
            bail!(
                "{} on {instance}: {} wrong pairs, e.g. ({}, {}) has {} instead of {}",
                alg.name(),
                bad.len(),
                b.u,
                b.v,
                b.got,
                b.expected
            );
        }
    }
    Ok(Row::from_metrics(instance, alg.name(), &run.metrics))
}
