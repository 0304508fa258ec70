//! CSV tables and run manifests.
//!
//! Floats in CSV files are written in scientific notation with 17 significant
//! digits (`{:.16e}`), which round-trips every `f64` and does not depend on
//! the locale.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{CheckRow, TrialConfig, TrialRecord};
use crate::graphs::{classify_edges, CanonicalGraph};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV document with a fixed header.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Csv {
    columns: usize,
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { columns: header.len(), text: format!("{}\n", header.join(",")) }
    }

    pub fn push(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "CSV row width must match the header");
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, &self.text)?;
        Ok(())
    }
}

/// `trial,s_min,s_max,ks,m1,...,mK,zero_count`.
pub fn trials_csv(records: &[TrialRecord], k_moments: usize) -> Csv {
    let moment_cols: Vec<String> = (1..=k_moments).map(|k| format!("m{k}")).collect();
    let mut header = vec!["trial", "s_min", "s_max", "ks"];
    header.extend(moment_cols.iter().map(String::as_str));
    header.push("zero_count");
    let mut csv = Csv::new(&header);
    for r in records {
        let mut row = vec![r.trial.to_string(), fmt_f64(r.s_min), fmt_f64(r.s_max), fmt_f64(r.ks)];
        row.extend(r.moments.iter().map(|&m| fmt_f64(m)));
        row.push(r.zero_count.to_string());
        csv.push(&row);
    }
    csv
}

/// `n,seed,trial,observed,target,margin`.
pub fn lemma_csv(rows: &[(u64, CheckRow)]) -> Csv {
    let mut csv = Csv::new(&["n", "seed", "trial", "observed", "target", "margin"]);
    for (seed, r) in rows {
        csv.push(&[
            r.n.to_string(),
            seed.to_string(),
            r.trial.to_string(),
            fmt_f64(r.observed),
            fmt_f64(r.target),
            fmt_f64(r.margin),
        ]);
    }
    csv
}

/// `x,density,cdf`.
pub fn grid_csv(grid: &[(f64, f64, f64)]) -> Csv {
    let mut csv = Csv::new(&["x", "density", "cdf"]);
    for &(x, d, c) in grid {
        csv.push(&[fmt_f64(x), fmt_f64(d), fmt_f64(c)]);
    }
    csv
}

/// `k,s,count`.
pub fn counts_csv(k: usize, counts: &std::collections::BTreeMap<usize, u64>) -> Csv {
    let mut csv = Csv::new(&["k", "s", "count"]);
    for (s, c) in counts {
        csv.push(&[k.to_string(), s.to_string(), c.to_string()]);
    }
    csv
}

/// `k,r,s,f,g,labels,single_edge`, with dash-joined maps and space-joined
/// edge labels.
pub fn graphs_list_csv(graphs: &[CanonicalGraph]) -> Csv {
    let mut csv = Csv::new(&["k", "r", "s", "f", "g", "labels", "single_edge"]);
    for g in graphs {
        let labels: Vec<&str> = classify_edges(g).iter().map(|l| l.code()).collect();
        csv.push(&[
            g.k().to_string(),
            g.r().to_string(),
            g.s().to_string(),
            g.f_string(),
            g.g_string(),
            labels.join(" "),
            g.has_single_edge().to_string(),
        ]);
    }
    csv
}

/// Everything needed to rerun a `simulate` call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: TrialConfig,
    pub seed: u64,
    pub version: String,
    pub wall_time_secs: f64,
    pub records: Vec<TrialRecord>,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let m: Self = serde_json::from_str(&text)?;
        if m.seed != m.config.seed {
            return Err(Error::InvalidArgument("manifest seed disagrees with its config".into()));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::EntryDistribution;

    #[test]
    fn float_format_round_trips() {
        for &x in &[0.1, 1.0 / 3.0, 2.25, -1e-300, 6.02e23] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn trials_header() {
        let rec = TrialRecord { trial: 0, y_n: 0.5, s_min: 0.1, s_max: 2.0, ks: 0.05, moments: vec![1.0, 1.5], zero_count: 0 };
        let csv = trials_csv(&[rec], 2);
        let mut lines = csv.as_str().lines();
        assert_eq!(lines.next().unwrap(), "trial,s_min,s_max,ks,m1,m2,zero_count");
        assert_eq!(lines.next().unwrap().split(',').count(), 7);
    }

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        let cfg = TrialConfig::new(4, 8, EntryDistribution::gaussian(1.0), 1, 9);
        let m = RunManifest {
            command: "simulate".into(),
            config: cfg,
            seed: 9,
            version: VERSION.into(),
            wall_time_secs: 0.5,
            records: vec![],
        };
        m.write(&path).unwrap();
        assert_eq!(RunManifest::read(&path).unwrap(), m);
    }
}
