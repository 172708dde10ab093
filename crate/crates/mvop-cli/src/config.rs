use crate::CliError;
use mvop::weight::{MatrixWeight, NilpotentMatrix, Potential};
use serde::Deserialize;
use std::path::Path;

/// `{"r": 2, "alpha": [1.0], "v": [0, 0, 1]}`
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub r: usize,
    pub alpha: Vec<f64>,
    pub v: Vec<f64>,
}

impl WeightConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: WeightConfig =
            serde_json::from_str(text).map_err(|e| CliError::Validation(format!("malformed config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.r == 0 {
            return Err(CliError::Validation("r must be at least 1".into()));
        }
        if self.alpha.len() != self.r - 1 {
            return Err(CliError::Validation(format!(
                "alpha has {} entries, expected r-1 = {}",
                self.alpha.len(),
                self.r - 1
            )));
        }
        if self.alpha.iter().any(|a| !a.is_finite()) {
            return Err(CliError::Validation("alpha entries must be finite".into()));
        }
        self.potential().map(|_| ())
    }

    pub fn potential(&self) -> Result<Potential<f64>, CliError> {
        Potential::new(self.v.clone()).map_err(|e| CliError::Validation(format!("v: {e}")))
    }

    pub fn nilpotent(&self) -> NilpotentMatrix<f64> {
        NilpotentMatrix::new(self.alpha.clone())
    }

    pub fn weight(&self) -> Result<MatrixWeight<f64>, CliError> {
        Ok(MatrixWeight::new(self.potential()?, self.nilpotent()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid() {
        let c = WeightConfig::parse(r#"{"r": 3, "alpha": [1.0, 0.5], "v": [0, 0, 0, 0, 1]}"#).unwrap();
        assert_eq!(c.weight().unwrap().r(), 3);
    }

    #[test]
    fn rejects_bad_configs() {
        for bad in [
            r#"{"r": 2, "alpha": [], "v": [0, 0, 1]}"#,
            r#"{"r": 2, "alpha": [1], "v": [0, 0, 2]}"#,
            r#"{"r": 2, "alpha": [1], "v": [0, 1]}"#,
            r#"{"r": 0, "alpha": [], "v": [0, 0, 1]}"#,
            r#"{"r": 2, "alpha": [1], "v": [0, 0, 1], "extra": 1}"#,
            r#"{"r": 2, "alpha": [1]"#,
        ] {
            assert!(matches!(WeightConfig::parse(bad), Err(CliError::Validation(_))), "{bad}");
        }
    }
}
