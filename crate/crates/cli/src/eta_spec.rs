//! Avoiding-function specifications: `table:v0,v1,...`, `gauss:K`, `crisp`.

use std::str::FromStr;

use ftl_core::{AvoidingFunction, CoreError};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum EtaSpec {
    Table(Vec<f64>),
    /// η(n) = e^{−(n/K)²} for n ≤ K.
    Gauss(u32),
    Crisp,
}

#[derive(Debug, Error, PartialEq)]
pub enum EtaSpecError {
    #[error("expected `table:v0,v1,...`, `gauss:K` or `crisp`, got `{0}`")]
    Syntax(String),
    #[error("bad table entry `{0}`")]
    BadNumber(String),
    #[error(transparent)]
    Invalid(#[from] CoreError),
}

impl FromStr for EtaSpec {
    type Err = EtaSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "crisp" {
            return Ok(EtaSpec::Crisp);
        }
        if let Some(k) = s.strip_prefix("gauss:") {
            return k
                .trim()
                .parse()
                .map(EtaSpec::Gauss)
                .map_err(|_| EtaSpecError::Syntax(s.to_string()));
        }
        if let Some(vals) = s.strip_prefix("table:") {
            return vals
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| EtaSpecError::BadNumber(v.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(EtaSpec::Table);
        }
        Err(EtaSpecError::Syntax(s.to_string()))
    }
}

impl EtaSpec {
    pub fn table(&self) -> Vec<f64> {
        match self {
            EtaSpec::Table(t) => t.clone(),
            EtaSpec::Gauss(k) => gauss_table(*k),
            EtaSpec::Crisp => vec![1.0],
        }
    }

    pub fn build(&self) -> Result<AvoidingFunction, EtaSpecError> {
        Ok(AvoidingFunction::new(self.table())?)
    }
}

fn gauss_table(k: u32) -> Vec<f64> {
    if k == 0 {
        return vec![1.0];
    }
    (0..=k)
        .map(|n| {
            let x = n as f64 / k as f64;
            (-x * x).exp()
        })
        .collect()
}

/// Parses and validates in one step.
pub fn parse_eta(s: &str) -> Result<AvoidingFunction, EtaSpecError> {
    s.parse::<EtaSpec>()?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_twenty() {
        let eta = parse_eta("gauss:20").unwrap();
        assert_eq!(eta.n_eta(), 21);
        assert_eq!(eta.table()[0], 1.0);
        assert!(eta.table().windows(2).all(|w| w[1] < w[0]));
        assert!((eta.weight(4) - (-0.04f64).exp()).abs() < 1e-15);
        assert_eq!(eta.weight(21), 0.0);
    }

    #[test]
    fn table_and_crisp() {
        assert_eq!(parse_eta("table:1,0.5,0.3").unwrap().table(), [1.0, 0.5, 0.3]);
        assert_eq!(parse_eta("crisp").unwrap().n_eta(), 1);
        assert_eq!(parse_eta("gauss:0").unwrap().n_eta(), 1);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(parse_eta("table:1,0.5,0.5"), Err(EtaSpecError::Invalid(_))));
        assert!(matches!(parse_eta("table:0.9"), Err(EtaSpecError::Invalid(_))));
        assert!(matches!(parse_eta("table:1,x"), Err(EtaSpecError::BadNumber(_))));
        assert!(matches!(parse_eta("gauss:-1"), Err(EtaSpecError::Syntax(_))));
        assert!(matches!(parse_eta("normal"), Err(EtaSpecError::Syntax(_))));
    }
}
