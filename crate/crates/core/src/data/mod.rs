//! Observation ingestion, class aggregation and dummy-coded design matrices.

mod aggregate;
mod design;
mod ingest;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use aggregate::{aggregate, describe_class, AggregatedClass, AggregatedData};
pub use design::{build_design, DesignInfo};
pub use ingest::{ingest_csv, ingest_path, read_column, Dataset, RawObservation};

/// Which CSV columns play which role in a model.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec {
    pub response: String,
    pub weight: Option<String>,
    pub covariates: Vec<String>,
    /// Per-covariate reference level; covariates not listed use their
    /// lexicographically first observed category.
    #[serde(default)]
    pub reference_levels: BTreeMap<String, String>,
}

impl DesignSpec {
    pub fn new(response: impl Into<String>) -> Self {
        DesignSpec {
            response: response.into(),
            ..Default::default()
        }
    }

    pub fn weight(mut self, column: impl Into<String>) -> Self {
        self.weight = Some(column.into());
        self
    }

    pub fn covariate(mut self, column: impl Into<String>) -> Self {
        self.covariates.push(column.into());
        self
    }

    pub fn covariates<I, S>(mut self, columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.covariates.extend(columns.into_iter().map(Into::into));
        self
    }

    pub fn reference(mut self, covariate: impl Into<String>, level: impl Into<String>) -> Self {
        self.reference_levels.insert(covariate.into(), level.into());
        self
    }
}
