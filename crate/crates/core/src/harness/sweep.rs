//! Cartesian parameter sweeps over an experiment config.
//!
//! A sweep file holds a base experiment, a map from JSON pointers into it to
//! lists of values, and an output directory. Combination `i` (last
//! parameter varying fastest, parameters in key order) runs into
//! `output/combo_i/`, and `output/sweep.csv` collects every summary row.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{run_experiment, summary_fields, ExperimentConfig, ExperimentSummary};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: Value,
    pub parameters: BTreeMap<String, Vec<Value>>,
    pub output: PathBuf,
}

impl SweepConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Every combination as `(assignments, config)`.
    pub fn expand(&self) -> Result<Vec<(Vec<Value>, ExperimentConfig)>> {
        for (pointer, values) in &self.parameters {
            if values.is_empty() {
                return Err(Error::config(format!("parameters.{pointer}"), "empty value list"));
            }
        }
        let lists: Vec<(&String, &Vec<Value>)> = self.parameters.iter().collect();
        let total: usize = lists.iter().map(|(_, v)| v.len()).product();
        let mut out = Vec::with_capacity(total);
        for index in 0..total {
            let mut rest = index;
            let mut picks = vec![Value::Null; lists.len()];
            for (slot, (_, values)) in lists.iter().enumerate().rev() {
                picks[slot] = values[rest % values.len()].clone();
                rest /= values.len();
            }
            let mut doc = self.base.clone();
            for ((pointer, _), value) in lists.iter().zip(&picks) {
                let target = doc.pointer_mut(pointer).ok_or_else(|| {
                    Error::config(format!("parameters.{pointer}"), "pointer does not exist in base")
                })?;
                *target = value.clone();
            }
            let mut config: ExperimentConfig = serde_json::from_value(doc)?;
            config.output = Some(self.output.join(format!("combo_{index}")));
            config.validate()?;
            out.push((picks, config));
        }
        Ok(out)
    }
}

pub fn run_sweep(sweep: &SweepConfig) -> Result<Vec<ExperimentSummary>> {
    let combos = sweep.expand()?;
    fs::create_dir_all(&sweep.output).map_err(|e| Error::io(&sweep.output, e))?;
    let path = sweep.output.join("sweep.csv");
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let mut header = vec!["combo".to_string()];
    header.extend(sweep.parameters.keys().cloned());
    header.extend(
        ["n", "mean_regret", "var_regret", "stderr", "tail_prob", "bound_value"].map(String::from),
    );
    w.write_record(&header)?;
    let mut summaries = Vec::with_capacity(combos.len());
    for (index, (picks, config)) in combos.iter().enumerate() {
        let outcome = run_experiment(config)?;
        for h in &outcome.summary.horizons {
            let mut row = vec![index.to_string()];
            row.extend(picks.iter().map(|v| v.to_string()));
            row.extend(summary_fields(h));
            w.write_record(&row)?;
        }
        summaries.push(outcome.summary);
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(summaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sweep(output: PathBuf) -> SweepConfig {
        serde_json::from_value(json!({
            "base": {
                "policy": {"kind": "exp3_fixed", "eta": {"fixed": 0.1}},
                "environment": {"kind": "variance_adversary", "alpha": 0.1},
                "horizons": [16, 32, 64],
                "replications": 3
            },
            "parameters": {
                "/environment/alpha": [0.1, 0.3],
                "/policy/eta/fixed": [0.05, 0.1, 0.2]
            },
            "output": output
        }))
        .unwrap()
    }

    #[test]
    fn expands_cartesian_product_in_order() {
        let s = sweep(PathBuf::from("out"));
        let combos = s.expand().unwrap();
        assert_eq!(combos.len(), 6);
        assert_eq!(combos[1].0, vec![json!(0.1), json!(0.1)]);
        assert_eq!(combos[3].0, vec![json!(0.3), json!(0.05)]);
        assert_eq!(combos[5].1.output, Some(PathBuf::from("out/combo_5")));
    }

    #[test]
    fn missing_pointer_is_reported() {
        let mut s = sweep(PathBuf::from("out"));
        s.parameters.insert("/policy/nope".into(), vec![json!(1)]);
        let err = s.expand().unwrap_err().to_string();
        assert!(err.contains("/policy/nope"), "{err}");
    }

    #[test]
    fn writes_combined_csv() {
        let dir = tempfile::tempdir().unwrap();
        let s = sweep(dir.path().to_path_buf());
        let summaries = run_sweep(&s).unwrap();
        assert_eq!(summaries.len(), 6);
        let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
        assert_eq!(text.lines().count(), 1 + 6 * 3);
        assert!(text.starts_with("combo,/environment/alpha,/policy/eta/fixed,n,"));
        assert!(dir.path().join("combo_4/summary.csv").exists());
    }
}
