use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric model matrix whose first column is the intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    matrix: DMatrix<f64>,
    names: Vec<String>,
}

impl DesignMatrix {
    pub fn from_row_major(
        rows: usize,
        cols: usize,
        values: Vec<f64>,
        names: Vec<String>,
    ) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} values cannot fill a {rows}x{cols} matrix",
                values.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, &values), names)
    }

    /// Rows given as slices, without the intercept; a column of ones is
    /// prepended and named `(Intercept)`.
    pub fn with_intercept(rows: &[Vec<f64>], names: &[&str]) -> Result<Self> {
        let p = names.len() + 1;
        let mut values = Vec::with_capacity(rows.len() * p);
        for (i, r) in rows.iter().enumerate() {
            if r.len() + 1 != p {
                return Err(Error::Dimension(format!(
                    "row {i} has {} covariates, expected {}",
                    r.len(),
                    p - 1
                )));
            }
            values.push(1.0);
            values.extend_from_slice(r);
        }
        let mut all = vec!["(Intercept)".to_string()];
        all.extend(names.iter().map(|s| s.to_string()));
        Self::from_row_major(rows.len(), p, values, all)
    }

    pub fn from_matrix(matrix: DMatrix<f64>, names: Vec<String>) -> Result<Self> {
        if names.len() != matrix.ncols() {
            return Err(Error::Dimension(format!(
                "{} column names for {} columns",
                names.len(),
                matrix.ncols()
            )));
        }
        if matrix.ncols() == 0 || matrix.nrows() == 0 {
            return Err(Error::Empty("design matrix has no rows or columns".into()));
        }
        if matrix.column(0).iter().any(|&v| v != 1.0) {
            return Err(Error::domain(
                "first design column must be the intercept (all ones)",
            ));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("design matrix has non-finite entries"));
        }
        Ok(DesignMatrix { matrix, names })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.matrix.row(i).iter().copied().collect()
    }

    /// Same design with rows reordered by `order`.
    pub fn select_rows(&self, order: &[usize]) -> Self {
        DesignMatrix {
            matrix: self.matrix.select_rows(order),
            names: self.names.clone(),
        }
    }
}

/// Class means with their prior weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedResponse {
    y: Vec<f64>,
    w: Vec<f64>,
}

impl WeightedResponse {
    pub fn new(y: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if y.len() != w.len() {
            return Err(Error::Dimension(format!(
                "{} responses but {} weights",
                y.len(),
                w.len()
            )));
        }
        if y.is_empty() {
            return Err(Error::Empty("response has no classes".into()));
        }
        for (i, (&yi, &wi)) in y.iter().zip(&w).enumerate() {
            if !(yi.is_finite() && yi > 0.0 && yi < 1.0) {
                return Err(Error::domain(format!(
                    "response {i} = {yi} is not strictly inside (0,1)"
                )));
            }
            if !(wi.is_finite() && wi > 0.0) {
                return Err(Error::domain(format!("weight {i} = {wi} must be positive")));
            }
        }
        Ok(WeightedResponse { y, w })
    }

    /// Unit weights.
    pub fn unweighted(y: Vec<f64>) -> Result<Self> {
        let w = vec![1.0; y.len()];
        Self::new(y, w)
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn min_weight(&self) -> f64 {
        self.w.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ wᵢyᵢ / Σ wᵢ`.
    pub fn weighted_mean(&self) -> f64 {
        let sw: f64 = self.w.iter().sum();
        self.y.iter().zip(&self.w).map(|(y, w)| y * w).sum::<f64>() / sw
    }

    pub fn select(&self, order: &[usize]) -> Self {
        WeightedResponse {
            y: order.iter().map(|&i| self.y[i]).collect(),
            w: order.iter().map(|&i| self.w[i]).collect(),
        }
    }
}
