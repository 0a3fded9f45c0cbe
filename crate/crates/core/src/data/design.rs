use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::aggregate::AggregatedData;
use super::DesignSpec;
use crate::error::{Error, Result};
use crate::glm::{DesignMatrix, WeightedResponse};

/// Bookkeeping from dummy coding.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DesignInfo {
    /// Reference level chosen for each covariate, in spec order.
    pub reference_levels: Vec<(String, String)>,
    /// Covariates that contributed no column because only one category was
    /// observed.
    pub dropped_covariates: Vec<String>,
}

impl DesignInfo {
    pub fn warnings(&self) -> Vec<String> {
        self.dropped_covariates
            .iter()
            .map(|c| format!("covariate `{c}` has a single observed category and was dropped"))
            .collect()
    }
}

/// Treatment-contrast design: an intercept, then for each covariate one
/// indicator per non-reference category in ascending lexicographic order.
/// Columns are named `<covariate><category>`.
pub fn build_design(
    data: &AggregatedData,
    spec: &DesignSpec,
) -> Result<(DesignMatrix, WeightedResponse, DesignInfo)> {
    if data.classes.is_empty() {
        return Err(Error::Empty("no classes to build a design from".into()));
    }

    let positions = spec
        .covariates
        .iter()
        .map(|name| {
            data.covariate_names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::MissingColumn(name.clone()))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut names = vec!["(Intercept)".to_string()];
    // (position in class levels, category) for each indicator column
    let mut indicators: Vec<(usize, String)> = Vec::new();
    let mut info = DesignInfo::default();

    for (name, &pos) in spec.covariates.iter().zip(&positions) {
        let categories: BTreeSet<&str> = data
            .classes
            .iter()
            .map(|c| c.levels[pos].as_str())
            .collect();
        let reference = match spec.reference_levels.get(name) {
            Some(r) if categories.contains(r.as_str()) => r.clone(),
            Some(r) => {
                return Err(Error::domain(format!(
                    "reference level `{r}` of `{name}` is not among the observed categories"
                )))
            }
            None => categories
                .iter()
                .next()
                .map(|s| s.to_string())
                .unwrap_or_default(),
        };
        info.reference_levels
            .push((name.clone(), reference.clone()));
        if categories.len() < 2 {
            info.dropped_covariates.push(name.clone());
            continue;
        }
        for cat in categories.into_iter().filter(|c| *c != reference) {
            names.push(format!("{name}{cat}"));
            indicators.push((pos, cat.to_string()));
        }
    }

    let m = data.classes.len();
    let p = names.len();
    let mut values = Vec::with_capacity(m * p);
    for class in &data.classes {
        values.push(1.0);
        for (pos, cat) in &indicators {
            values.push(if class.levels[*pos] == *cat { 1.0 } else { 0.0 });
        }
    }

    let design = DesignMatrix::from_row_major(m, p, values, names)?;
    let response = WeightedResponse::new(
        data.classes.iter().map(|c| c.y_bar).collect(),
        data.classes.iter().map(|c| c.w_plus).collect(),
    )?;
    Ok((design, response, info))
}
