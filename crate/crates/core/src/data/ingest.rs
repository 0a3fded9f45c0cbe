use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DesignSpec;
use crate::error::{Error, Result};

/// One data row: response, weight and covariate labels in the order of
/// [`Dataset::covariate_names`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawObservation {
    pub response: f64,
    pub weight: f64,
    pub levels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub covariate_names: Vec<String>,
    pub rows: Vec<RawObservation>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.rows.iter().map(|r| r.weight).sum()
    }
}

pub fn ingest_path(path: impl AsRef<Path>, spec: &DesignSpec) -> Result<Dataset> {
    ingest_csv(File::open(path)?, spec)
}

/// Reads observations from a headed, comma-separated CSV stream.
///
/// Responses may be exactly 0 or 1 here; only class means are required to lie
/// strictly inside (0,1). Row numbers in errors count data rows from 1.
pub fn ingest_csv<R: Read>(reader: R, spec: &DesignSpec) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let response_idx = find(&spec.response)?;
    let weight_idx = spec.weight.as_deref().map(find).transpose()?;
    let covariate_idx = spec
        .covariates
        .iter()
        .map(|c| find(c))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record?;
        let field = |idx: usize| record.get(idx).unwrap_or("").trim();

        let response = parse_number(field(response_idx), row, &spec.response)?;
        if !(0.0..=1.0).contains(&response) {
            return Err(Error::RowDomain {
                row,
                message: format!("response {response} is outside [0,1]"),
            });
        }
        let weight = match (weight_idx, &spec.weight) {
            (Some(idx), Some(name)) => {
                let w = parse_number(field(idx), row, name)?;
                if !(w > 0.0 && w.is_finite()) {
                    return Err(Error::RowDomain {
                        row,
                        message: format!("weight {w} must be positive"),
                    });
                }
                w
            }
            _ => 1.0,
        };
        let levels = covariate_idx
            .iter()
            .map(|&j| field(j).to_string())
            .collect();
        rows.push(RawObservation {
            response,
            weight,
            levels,
        });
    }

    Ok(Dataset {
        covariate_names: spec.covariates.clone(),
        rows,
    })
}

/// All values of one numeric column.
pub fn read_column<R: Read>(reader: R, column: Option<&str>) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let (idx, name) = match column {
        Some(c) => (
            headers
                .iter()
                .position(|h| h.trim() == c)
                .ok_or_else(|| Error::MissingColumn(c.to_string()))?,
            c.to_string(),
        ),
        None => (0, headers.get(0).unwrap_or("").to_string()),
    };
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        out.push(parse_number(
            record.get(idx).unwrap_or("").trim(),
            i + 1,
            &name,
        )?);
    }
    Ok(out)
}

fn parse_number(s: &str, row: usize, column: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            row,
            column: column.to_string(),
            value: s.to_string(),
        })
}
