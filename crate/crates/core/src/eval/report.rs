//! Result tables: CSV for machines, a short summary for people.

use std::fmt::Write as _;
use std::io::Write;
use std::time::Duration;

use super::features::EdgeFeatureOp;
use crate::trainer::SamplingMode;

pub const CSV_HEADER: &str = "experiment,mode,operator,repeat,micro_f1,macro_f1,ratio";

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub mode: SamplingMode,
    pub operator: Option<EdgeFeatureOp>,
    pub repeat: usize,
    pub micro_f1: f64,
    pub macro_f1: f64,
    /// Positive-to-negative mean edge distance.
    pub ratio: Option<f64>,
    /// Share of test edges with an endpoint isolated in the training graph.
    pub isolated_fraction: Option<f64>,
    pub test_positive_fraction: Option<f64>,
    pub cache_time: Duration,
    pub optimization_time: Duration,
}

/// Mean over the rows of one (experiment, mode, operator) group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupMean {
    pub experiment: String,
    pub mode: SamplingMode,
    pub operator: Option<EdgeFeatureOp>,
    pub rows: usize,
    pub micro_f1: f64,
    pub macro_f1: f64,
    /// Present only if every row has a ratio.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    rows: Vec<ResultRow>,
}

fn fmt4(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_default()
}

impl ResultTable {
    pub fn new(rows: Vec<ResultRow>) -> Self {
        ResultTable { rows }
    }

    pub fn rows(&self) -> &[ResultRow] {
        &self.rows
    }

    pub fn extend(&mut self, other: ResultTable) {
        self.rows.extend(other.rows);
    }

    /// Group means in order of first appearance.
    pub fn means(&self) -> Vec<GroupMean> {
        let mut out: Vec<(GroupMean, Vec<&ResultRow>)> = Vec::new();
        for r in &self.rows {
            let key = |g: &GroupMean| g.experiment == r.experiment && g.mode == r.mode && g.operator == r.operator;
            match out.iter_mut().find(|(g, _)| key(g)) {
                Some((_, members)) => members.push(r),
                None => out.push((
                    GroupMean {
                        experiment: r.experiment.clone(),
                        mode: r.mode,
                        operator: r.operator,
                        rows: 0,
                        micro_f1: 0.0,
                        macro_f1: 0.0,
                        ratio: None,
                    },
                    vec![r],
                )),
            }
        }
        out.into_iter()
            .map(|(mut g, members)| {
                let n = members.len() as f64;
                g.rows = members.len();
                g.micro_f1 = members.iter().map(|r| r.micro_f1).sum::<f64>() / n;
                g.macro_f1 = members.iter().map(|r| r.macro_f1).sum::<f64>() / n;
                g.ratio = members.iter().map(|r| r.ratio).sum::<Option<f64>>().map(|s| s / n);
                g
            })
            .collect()
    }

    /// Writes the header, every row, and a `mean` row after each group that
    /// has more than one row. Numbers carry four decimals; absent values are
    /// empty fields.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        let means = self.means();
        for g in &means {
            let op = g.operator.map(EdgeFeatureOp::name).unwrap_or("");
            for r in self
                .rows
                .iter()
                .filter(|r| r.experiment == g.experiment && r.mode == g.mode && r.operator == g.operator)
            {
                writeln!(
                    out,
                    "{},{},{},{},{:.4},{:.4},{}",
                    r.experiment,
                    r.mode.name(),
                    op,
                    r.repeat,
                    r.micro_f1,
                    r.macro_f1,
                    fmt4(r.ratio)
                )?;
            }
            if g.rows > 1 {
                writeln!(
                    out,
                    "{},{},{},mean,{:.4},{:.4},{}",
                    g.experiment,
                    g.mode.name(),
                    op,
                    g.micro_f1,
                    g.macro_f1,
                    fmt4(g.ratio)
                )?;
            }
        }
        Ok(())
    }

    /// One line per group with the mean scores and timings.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for g in self.means() {
            let members = self
                .rows
                .iter()
                .filter(|r| r.experiment == g.experiment && r.mode == g.mode && r.operator == g.operator);
            let (cache, opt) = members
                .clone()
                .fold((Duration::ZERO, Duration::ZERO), |(c, o), r| (c + r.cache_time, o + r.optimization_time));
            let _ = write!(s, "{} [{}", g.experiment, g.mode.name());
            if let Some(op) = g.operator {
                let _ = write!(s, ", {op}");
            }
            let _ = write!(s, "] x{}: micro F1 {:.4}, macro F1 {:.4}", g.rows, g.micro_f1, g.macro_f1);
            if let Some(r) = g.ratio {
                let _ = write!(s, ", distance ratio {r:.4}");
            }
            let isolated: Vec<f64> = members.clone().filter_map(|r| r.isolated_fraction).collect();
            if !isolated.is_empty() {
                let _ = write!(s, ", isolated test edges {:.4}", isolated.iter().sum::<f64>() / isolated.len() as f64);
            }
            let positive: Vec<f64> = members.filter_map(|r| r.test_positive_fraction).collect();
            if !positive.is_empty() {
                let _ = write!(s, ", positive test edges {:.4}", positive.iter().sum::<f64>() / positive.len() as f64);
            }
            let _ = writeln!(s, " (sampling {:.3}s, optimization {:.3}s)", cache.as_secs_f64(), opt.as_secs_f64());
        }
        s
    }
}
