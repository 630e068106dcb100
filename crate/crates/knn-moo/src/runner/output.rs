//! Deterministic file emission: manifest, per-run CSVs, verdict tables.
//!
//! Everything written here is byte-stable across re-runs of the same config:
//! no timestamps, no absolute paths, floats through Rust's shortest-roundtrip
//! formatting, rows in config order.

use crate::error::{Error, Result};
use crate::metrics::FrontAssessment;
use crate::runner::config::{ApproachSpec, GaSpec, ProblemSpec};
use crate::stats::{ComparisonVerdict, Verdict};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const RESULTS_FILE: &str = "results.csv";
pub const FRONTS_DIR: &str = "fronts";
pub const VERDICTS_CSV_FILE: &str = "verdicts.csv";
pub const VERDICTS_TEXT_FILE: &str = "verdicts.txt";

/// Metric identifiers used in CSV headers and verdict rows, with their
/// display names and polarity (true = higher is better).
pub const METRICS: [(&str, &str, bool); 3] =
    [("hv_pred", "HV-pred", true), ("hv_eff", "HV-eff", true), ("delta_f", "dF", false)];

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

fn csv_err(path: &Path, source: csv::Error) -> Error {
    io_err(path, std::io::Error::other(source.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Failed,
}

/// One run's outcome as recorded in the manifest. Failed runs keep their
/// seed and error message but no metrics.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub approach: String,
    pub run_index: u32,
    pub seed: u64,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generations: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consumed_budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub archive_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub front_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hv_pred: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hv_eff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_f: Option<f64>,
}

impl RunRecord {
    pub fn metric(&self, id: &str) -> Option<f64> {
        match id {
            "hv_pred" => self.hv_pred,
            "hv_eff" => self.hv_eff,
            "delta_f" => self.delta_f,
            _ => None,
        }
    }
}

/// The experiment manifest: the resolved config, every run's seed, and every
/// per-run result, sufficient to re-derive all CSV content.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    pub base_seed: u64,
    pub repetitions_per_approach: u32,
    pub effective_reps: u32,
    pub alpha: f64,
    pub failed_runs: u32,
    pub problem: ProblemSpec,
    pub ga: GaSpec,
    pub approaches: Vec<ApproachSpec>,
    pub runs: Vec<RunRecord>,
}

impl Manifest {
    pub fn path_in(dir: &Path) -> PathBuf {
        dir.join(MANIFEST_FILE)
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = Self::path_in(dir);
        let text = toml::to_string_pretty(self).expect("manifest serializes to TOML");
        std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        Ok(path)
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = Self::path_in(dir);
        let text = std::fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        toml::from_str(&text)
            .map_err(|e| Error::Parse { path: path.display().to_string(), message: e.to_string() })
    }

    /// Approach labels in config order.
    pub fn approach_labels(&self) -> Vec<String> {
        self.approaches.iter().map(|a| a.label()).collect()
    }

    /// Successful runs of one approach, in run-index order.
    pub fn ok_runs(&self, label: &str) -> Vec<&RunRecord> {
        self.runs
            .iter()
            .filter(|r| r.approach == label && r.status == RunStatus::Ok)
            .collect()
    }

    /// One metric's samples for one approach, run-index order.
    pub fn metric_samples(&self, label: &str, metric: &str) -> Vec<f64> {
        self.ok_runs(label)
            .iter()
            .filter_map(|r| r.metric(metric))
            .collect()
    }
}

/// results.csv: one row per successful run, approaches in config order.
pub fn write_results_csv(dir: &Path, manifest: &Manifest) -> Result<PathBuf> {
    let path = dir.join(RESULTS_FILE);
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
    w.write_record([
        "approach",
        "run_index",
        "seed",
        "generations",
        "consumed_budget",
        "archive_size",
        "front_size",
        "hv_pred",
        "hv_eff",
        "delta_f",
    ])
    .map_err(|e| csv_err(&path, e))?;
    for r in manifest.runs.iter().filter(|r| r.status == RunStatus::Ok) {
        w.write_record([
            r.approach.clone(),
            r.run_index.to_string(),
            r.seed.to_string(),
            r.generations.expect("ok run has generations").to_string(),
            r.consumed_budget.expect("ok run has budget").to_string(),
            r.archive_size.expect("ok run has archive size").to_string(),
            r.front_size.expect("ok run has front size").to_string(),
            r.hv_pred.expect("ok run has hv_pred").to_string(),
            r.hv_eff.expect("ok run has hv_eff").to_string(),
            r.delta_f.expect("ok run has delta_f").to_string(),
        ])
        .map_err(|e| csv_err(&path, e))?;
    }
    w.flush().map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// Filename of one run's front dump inside `fronts/`.
pub fn front_file_name(label: &str, run_index: u32) -> String {
    format!("{label}-{run_index:02}.csv")
}

/// Front dump for one run: per solution, the decision vector plus the
/// predicted and effective objectives (one arrow of the front plot per row).
pub fn write_front_csv(
    dir: &Path,
    label: &str,
    run_index: u32,
    assessment: &FrontAssessment,
) -> Result<PathBuf> {
    let fronts = dir.join(FRONTS_DIR);
    std::fs::create_dir_all(&fronts).map_err(|e| io_err(&fronts, e))?;
    let path = fronts.join(front_file_name(label, run_index));
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
    let dims = assessment.predicted.first().map_or(0, |(x, _)| x.len());
    let objectives = assessment.predicted.first().map_or(0, |(_, f)| f.len());
    let mut header: Vec<String> = (1..=dims).map(|i| format!("x{i}")).collect();
    header.extend((1..=objectives).map(|i| format!("pred_f{i}")));
    header.extend((1..=objectives).map(|i| format!("eff_f{i}")));
    w.write_record(&header).map_err(|e| csv_err(&path, e))?;
    for ((x, pred), (_, eff)) in assessment.predicted.iter().zip(&assessment.effective) {
        let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        row.extend(pred.iter().map(|v| v.to_string()));
        row.extend(eff.iter().map(|v| v.to_string()));
        w.write_record(&row).map_err(|e| csv_err(&path, e))?;
    }
    w.flush().map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// One long-format metric CSV (`approach,run_index,value`), rows in config
/// order then run order — ready for boxplot tooling.
pub fn write_metric_csv(dir: &Path, metric: &str, manifest: &Manifest) -> Result<PathBuf> {
    let path = dir.join(format!("{metric}.csv"));
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
    w.write_record(["approach", "run_index", "value"]).map_err(|e| csv_err(&path, e))?;
    for label in manifest.approach_labels() {
        for r in manifest.ok_runs(&label) {
            let value = r.metric(metric).expect("ok run has all metrics");
            w.write_record([label.clone(), r.run_index.to_string(), value.to_string()])
                .map_err(|e| csv_err(&path, e))?;
        }
    }
    w.flush().map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// verdicts.csv: one row per (approach pair, metric), pair-major order.
pub fn write_verdicts_csv(dir: &Path, verdicts: &[ComparisonVerdict]) -> Result<PathBuf> {
    let path = dir.join(VERDICTS_CSV_FILE);
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
    w.write_record(["app1", "app2", "metric", "higher_is_better", "p_value", "a12", "verdict"])
        .map_err(|e| csv_err(&path, e))?;
    for v in verdicts {
        let verdict = match v.verdict {
            Verdict::App1Better => "app1_better",
            Verdict::App2Better => "app2_better",
            Verdict::Equivalent => "equivalent",
        };
        w.write_record([
            v.app1.clone(),
            v.app2.clone(),
            v.metric.clone(),
            v.higher_is_better.to_string(),
            v.p_value.to_string(),
            v.a12.to_string(),
            verdict.to_string(),
        ])
        .map_err(|e| csv_err(&path, e))?;
    }
    w.flush().map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// The aligned text table: one row per approach pair, one symbol column per
/// metric, in the same order as the CSV.
pub fn render_verdict_text(manifest: &Manifest, verdicts: &[ComparisonVerdict]) -> String {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for v in verdicts {
        let key = (v.app1.clone(), v.app2.clone());
        if !pairs.contains(&key) {
            pairs.push(key);
        }
    }
    let symbol = |app1: &str, app2: &str, metric: &str| -> &'static str {
        verdicts
            .iter()
            .find(|v| v.app1 == app1 && v.app2 == app2 && v.metric == metric)
            .map_or(" ", |v| v.verdict.symbol())
    };

    let w1 = pairs.iter().map(|(a, _)| a.chars().count()).chain(["app1".len()]).max().unwrap();
    let w2 = pairs.iter().map(|(_, b)| b.chars().count()).chain(["app2".len()]).max().unwrap();

    let mut out = String::new();
    out.push_str(&format!(
        "{} — {} runs per approach, alpha {}",
        manifest.name, manifest.repetitions_per_approach, manifest.alpha
    ));
    if manifest.failed_runs > 0 {
        out.push_str(&format!(" (failed runs excluded: {})", manifest.failed_runs));
    }
    out.push('\n');
    out.push('\n');
    out.push_str(&format!("{:<w1$}  {:<w2$}", "app1", "app2"));
    for (_, display, _) in METRICS {
        out.push_str(&format!("  {display:>7}"));
    }
    out.push('\n');
    for (app1, app2) in &pairs {
        out.push_str(&format!("{app1:<w1$}  {app2:<w2$}"));
        for (id, _, _) in METRICS {
            out.push_str(&format!("  {:>7}", symbol(app1, app2, id)));
        }
        out.push('\n');
    }
    out.push('\n');
    out.push_str("✓ app1 significantly better   ✗ app1 significantly worse   ≡ no significant difference\n");
    out
}

pub fn write_verdict_text(dir: &Path, text: &str) -> Result<PathBuf> {
    let path = dir.join(VERDICTS_TEXT_FILE);
    std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{ObjectiveVector, SolutionVector};
    use crate::stats::Verdict;

    fn sample_manifest() -> Manifest {
        Manifest {
            name: "demo".into(),
            base_seed: 42,
            repetitions_per_approach: 2,
            effective_reps: 30,
            alpha: 0.05,
            failed_runs: 1,
            problem: ProblemSpec {
                kind: "zdt1".into(),
                dimensions: Some(10),
                noise_sigma: Some([0.05, 0.05]),
                reference_point: Some([1.1, 10.0]),
                base_critical_position: None,
                critical_time: None,
                distance_slope: None,
                noise_sigma_distance: None,
                collision_threshold: None,
            },
            ga: GaSpec {
                population_size: 10,
                total_budget: 500,
                crossover_probability: Some(0.9),
                crossover_eta: Some(15.0),
                mutation_probability: Some(0.1),
                mutation_eta: Some(20.0),
            },
            approaches: vec![ApproachSpec::Baseline, ApproachSpec::Repetition { n: 5 }],
            runs: vec![
                RunRecord {
                    approach: "B".into(),
                    run_index: 0,
                    seed: 11,
                    status: RunStatus::Ok,
                    error: None,
                    generations: Some(50),
                    consumed_budget: Some(500),
                    archive_size: Some(500),
                    front_size: Some(4),
                    hv_pred: Some(0.75),
                    hv_eff: Some(0.5),
                    delta_f: Some(0.25),
                },
                RunRecord {
                    approach: "B".into(),
                    run_index: 1,
                    seed: 12,
                    status: RunStatus::Failed,
                    error: Some("boom".into()),
                    generations: None,
                    consumed_budget: None,
                    archive_size: None,
                    front_size: None,
                    hv_pred: None,
                    hv_eff: None,
                    delta_f: None,
                },
                RunRecord {
                    approach: "Rep-5".into(),
                    run_index: 0,
                    seed: 13,
                    status: RunStatus::Ok,
                    error: None,
                    generations: Some(10),
                    consumed_budget: Some(500),
                    archive_size: Some(100),
                    front_size: Some(3),
                    hv_pred: Some(0.5),
                    hv_eff: Some(0.45),
                    delta_f: Some(0.125),
                },
            ],
        }
    }

    #[test]
    fn manifest_round_trips_through_toml() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = sample_manifest();
        manifest.write(dir.path()).unwrap();
        let back = Manifest::load(dir.path()).unwrap();
        assert_eq!(back.name, "demo");
        assert_eq!(back.runs.len(), 3);
        assert_eq!(back.runs[1].status, RunStatus::Failed);
        assert_eq!(back.runs[1].error.as_deref(), Some("boom"));
        assert_eq!(back.runs[2].hv_pred, Some(0.5));
        assert_eq!(back.approaches, manifest.approaches);
        assert_eq!(back.problem, manifest.problem);
    }

    #[test]
    fn manifest_writes_are_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = sample_manifest();
        let path = manifest.write(dir.path()).unwrap();
        let first = std::fs::read(&path).unwrap();
        manifest.write(dir.path()).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn results_csv_lists_only_successful_runs() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_results_csv(dir.path(), &sample_manifest()).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3, "header + 2 ok runs:\n{text}");
        assert_eq!(
            lines[0],
            "approach,run_index,seed,generations,consumed_budget,archive_size,front_size,hv_pred,hv_eff,delta_f"
        );
        assert_eq!(lines[1], "B,0,11,50,500,500,4,0.75,0.5,0.25");
        assert_eq!(lines[2], "Rep-5,0,13,10,500,100,3,0.5,0.45,0.125");
    }

    #[test]
    fn metric_csv_is_long_format_in_config_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_metric_csv(dir.path(), "delta_f", &sample_manifest()).unwrap();
        assert!(path.ends_with("delta_f.csv"));
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(text, "approach,run_index,value\nB,0,0.25\nRep-5,0,0.125\n");
    }

    #[test]
    fn front_csv_rows_pair_predicted_with_effective() {
        let dir = tempfile::tempdir().unwrap();
        let assessment = FrontAssessment {
            predicted: vec![
                (SolutionVector::new(vec![0.5, 0.25]), ObjectiveVector::new(vec![1.0, 2.0])),
                (SolutionVector::new(vec![0.75, 0.125]), ObjectiveVector::new(vec![3.0, 4.0])),
            ],
            effective: vec![
                (SolutionVector::new(vec![0.5, 0.25]), ObjectiveVector::new(vec![1.5, 2.5])),
                (SolutionVector::new(vec![0.75, 0.125]), ObjectiveVector::new(vec![3.5, 4.5])),
            ],
            hv_pred: 0.0,
            hv_eff: 0.0,
            delta_f: 0.0,
            reference_point: ObjectiveVector::new(vec![1.1, 10.0]),
            effective_repetitions: 30,
        };
        let path = write_front_csv(dir.path(), "kNN-Avg-10", 3, &assessment).unwrap();
        assert!(path.ends_with("fronts/kNN-Avg-10-03.csv"), "{path:?}");
        let text = std::fs::read_to_string(path).unwrap();
        assert_eq!(
            text,
            "x1,x2,pred_f1,pred_f2,eff_f1,eff_f2\n\
             0.5,0.25,1,2,1.5,2.5\n\
             0.75,0.125,3,4,3.5,4.5\n"
        );
    }

    fn sample_verdicts() -> Vec<ComparisonVerdict> {
        let mk = |metric: &str, verdict: Verdict, hib: bool| ComparisonVerdict {
            metric: metric.into(),
            app1: "Rep-5".into(),
            app2: "B".into(),
            p_value: 0.01,
            a12: 0.8,
            verdict,
            higher_is_better: hib,
        };
        vec![
            mk("hv_pred", Verdict::App2Better, true),
            mk("hv_eff", Verdict::Equivalent, true),
            mk("delta_f", Verdict::App1Better, false),
        ]
    }

    #[test]
    fn verdicts_csv_has_one_row_per_pair_metric() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_verdicts_csv(dir.path(), &sample_verdicts()).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "app1,app2,metric,higher_is_better,p_value,a12,verdict");
        assert_eq!(lines[1], "Rep-5,B,hv_pred,true,0.01,0.8,app2_better");
        assert_eq!(lines[2], "Rep-5,B,hv_eff,true,0.01,0.8,equivalent");
        assert_eq!(lines[3], "Rep-5,B,delta_f,false,0.01,0.8,app1_better");
    }

    #[test]
    fn verdict_text_is_aligned_and_symbolic() {
        let manifest = sample_manifest();
        let text = render_verdict_text(&manifest, &sample_verdicts());
        assert!(text.contains("demo — 2 runs per approach, alpha 0.05"), "{text}");
        assert!(text.contains("(failed runs excluded: 1)"), "{text}");
        let header = text.lines().nth(2).unwrap();
        let row = text.lines().nth(3).unwrap();
        assert!(header.contains("HV-pred") && header.contains("HV-eff") && header.contains("dF"));
        assert!(row.starts_with("Rep-5"), "{row}");
        assert!(row.contains('✗') && row.contains('≡') && row.contains('✓'), "{row}");
        // Symbols line up under their metric headers.
        let pos = |s: &str, needle: &str| {
            s.char_indices()
                .map(|(i, _)| i)
                .position(|i| s[i..].starts_with(needle))
                .unwrap()
        };
        assert_eq!(
            pos(header, "HV-pred") + "HV-pred".chars().count(),
            pos(row, "✗") + 1,
            "right-aligned columns:\n{text}"
        );
    }

    #[test]
    fn front_filenames_sort_with_run_index() {
        assert_eq!(front_file_name("B", 0), "B-00.csv");
        assert_eq!(front_file_name("kNN-Avg-50", 12), "kNN-Avg-50-12.csv");
    }
}
