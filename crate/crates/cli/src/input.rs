use std::fs;
use std::path::Path;

use dominance_core::{MixtureModel, SampleSet};

use crate::CliError;

/// Parses one value per line. Blank lines and lines starting with `#` are skipped.
pub fn parse_samples(text: &str, source: &str) -> Result<SampleSet, CliError> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |why: &str| CliError::Input(format!("{source}:{}: {why}: {line:?}", i + 1));
        let v: f64 = line.parse().map_err(|_| bad("not a decimal number"))?;
        if !v.is_finite() {
            return Err(bad("value is not finite"));
        }
        values.push(v);
    }
    SampleSet::new(values).map_err(|e| CliError::Input(format!("{source}: {e}")))
}

pub fn read_samples(path: &Path) -> Result<SampleSet, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_samples(&text, &path.display().to_string())
}

pub fn read_mixture(path: &Path) -> Result<MixtureModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    MixtureModel::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn label(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}
