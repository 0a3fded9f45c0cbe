use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::ingest::Dataset;
use crate::error::{Error, Result};

/// All observations sharing one covariate tuple, reduced to their weighted
/// mean response and total weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregatedClass {
    pub levels: Vec<String>,
    pub y_bar: f64,
    pub w_plus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregatedData {
    pub covariate_names: Vec<String>,
    pub classes: Vec<AggregatedClass>,
}

impl AggregatedData {
    /// Treats every row as its own class, keeping input order. This is the
    /// unaggregated fitting path; each response must then lie strictly
    /// inside (0,1).
    pub fn from_rows(data: &Dataset) -> Result<Self> {
        let classes = data
            .rows
            .iter()
            .map(|r| AggregatedClass {
                levels: r.levels.clone(),
                y_bar: r.response,
                w_plus: r.weight,
            })
            .collect::<Vec<_>>();
        for (i, c) in classes.iter().enumerate() {
            if !(c.y_bar > 0.0 && c.y_bar < 1.0) {
                return Err(Error::RowDomain {
                    row: i + 1,
                    message: format!(
                        "response {} is on the boundary of (0,1); aggregate the data or drop the row",
                        c.y_bar
                    ),
                });
            }
        }
        Ok(AggregatedData {
            covariate_names: data.covariate_names.clone(),
            classes,
        })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.classes.iter().map(|c| c.w_plus).sum()
    }

    /// Smallest class weight together with the class that carries it.
    pub fn min_weight(&self) -> Option<(f64, &AggregatedClass)> {
        self.classes
            .iter()
            .min_by(|a, b| a.w_plus.total_cmp(&b.w_plus))
            .map(|c| (c.w_plus, c))
    }

    pub fn max_weight(&self) -> Option<f64> {
        self.classes.iter().map(|c| c.w_plus).max_by(f64::total_cmp)
    }

    /// Columns `<covariates...>,y_bar,w_plus`; numbers in shortest
    /// round-trip form so the output can be ingested again losslessly.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<&str> = self.covariate_names.iter().map(String::as_str).collect();
        header.extend(["y_bar", "w_plus"]);
        w.write_record(&header)?;
        for c in &self.classes {
            let mut rec: Vec<String> = c.levels.clone();
            rec.push(c.y_bar.to_string());
            rec.push(c.w_plus.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Groups rows by covariate tuple: `ȳ = Σ wᵢyᵢ / w₊`, `w₊ = Σ wᵢ`.
///
/// Classes come out sorted by covariate tuple. A class whose mean lands on 0
/// or 1 is an error, since its canonical parameter would be infinite.
pub fn aggregate(data: &Dataset) -> Result<AggregatedData> {
    if data.rows.is_empty() {
        return Err(Error::Empty("no observations to aggregate".into()));
    }

    // Per class: the products wᵢyᵢ, the weights wᵢ and the first response.
    type Terms = (Vec<f64>, Vec<f64>, f64);
    let mut groups: BTreeMap<&[String], Terms> = BTreeMap::new();
    for row in &data.rows {
        let (wy, w, _) = groups
            .entry(row.levels.as_slice())
            .or_insert_with(|| (Vec::new(), Vec::new(), row.response));
        wy.push(row.weight * row.response);
        w.push(row.weight);
    }

    let mut classes = Vec::with_capacity(groups.len());
    for (levels, (wy, w, first_y)) in groups {
        let sum_w = order_free_sum(w);
        // A singleton keeps its response bit-for-bit, which makes
        // re-aggregating aggregated data an identity.
        let y_bar = if wy.len() == 1 {
            first_y
        } else {
            order_free_sum(wy) / sum_w
        };
        if !(y_bar > 0.0 && y_bar < 1.0) {
            return Err(Error::ClassDomain {
                class: describe_class(&data.covariate_names, levels),
                message: format!("class mean {y_bar} is not strictly inside (0,1)"),
            });
        }
        classes.push(AggregatedClass {
            levels: levels.to_vec(),
            y_bar,
            w_plus: sum_w,
        });
    }

    Ok(AggregatedData {
        covariate_names: data.covariate_names.clone(),
        classes,
    })
}

/// Sum that does not depend on the order of `values`: the terms are sorted,
/// then added with Neumaier compensation.
fn order_free_sum(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        comp += if f64::abs(sum) >= f64::abs(v) {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + comp
}

/// `name=level, ...` label for a class.
pub fn describe_class(names: &[String], levels: &[String]) -> String {
    if names.is_empty() {
        return "(all rows)".into();
    }
    names
        .iter()
        .zip(levels)
        .map(|(n, l)| format!("{n}={l}"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::ingest::RawObservation;

    fn row(y: f64, w: f64, levels: &[&str]) -> RawObservation {
        RawObservation {
            response: y,
            weight: w,
            levels: levels.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn dataset(rows: Vec<RawObservation>) -> Dataset {
        Dataset {
            covariate_names: vec!["g".into()],
            rows,
        }
    }

    #[test]
    fn two_rows_one_class() {
        let agg = aggregate(&dataset(vec![row(0.2, 1.0, &["A"]), row(0.4, 1.0, &["A"])])).unwrap();
        assert_eq!(agg.len(), 1);
        assert!((agg.classes[0].y_bar - 0.3).abs() < 1e-15);
        assert_eq!(agg.classes[0].w_plus, 2.0);
    }

    #[test]
    fn distinct_rows_are_identity_and_sorted() {
        let agg = aggregate(&dataset(vec![
            row(0.7, 2.0, &["C"]),
            row(0.2, 1.0, &["A"]),
            row(0.4, 3.0, &["B"]),
        ]))
        .unwrap();
        let got: Vec<_> = agg
            .classes
            .iter()
            .map(|c| (c.levels[0].as_str(), c.y_bar, c.w_plus))
            .collect();
        assert_eq!(got, vec![("A", 0.2, 1.0), ("B", 0.4, 3.0), ("C", 0.7, 2.0)]);
    }

    #[test]
    fn boundary_rows_allowed_if_class_mean_is_interior() {
        let agg = aggregate(&dataset(vec![row(0.0, 1.0, &["A"]), row(1.0, 3.0, &["A"])])).unwrap();
        assert_eq!(agg.classes[0].y_bar, 0.75);
    }

    #[test]
    fn degenerate_class_is_reported() {
        let err =
            aggregate(&dataset(vec![row(0.5, 1.0, &["A"]), row(1.0, 1.0, &["B"])])).unwrap_err();
        match err {
            Error::ClassDomain { class, .. } => assert_eq!(class, "g=B"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(aggregate(&dataset(vec![])), Err(Error::Empty(_))));
    }

    #[test]
    fn unaggregated_rows_reject_boundary() {
        let err =
            AggregatedData::from_rows(&dataset(vec![row(0.5, 1.0, &["A"]), row(0.0, 1.0, &["A"])]))
                .unwrap_err();
        assert!(matches!(err, Error::RowDomain { row: 2, .. }));
    }

    #[test]
    fn csv_output() {
        let agg = aggregate(&dataset(vec![row(0.2, 1.0, &["A"]), row(0.4, 1.0, &["A"])])).unwrap();
        let mut buf = Vec::new();
        agg.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            format!("g,y_bar,w_plus\nA,{},2\n", (0.2f64 + 0.4) / 2.0)
        );
    }

    #[test]
    fn weight_extremes() {
        let agg = aggregate(&dataset(vec![
            row(0.2, 4.0, &["A"]),
            row(0.4, 1.0, &["B"]),
            row(0.4, 2.0, &["B"]),
        ]))
        .unwrap();
        let (w, c) = agg.min_weight().unwrap();
        assert_eq!(w, 3.0);
        assert_eq!(c.levels[0], "B");
        assert_eq!(agg.max_weight(), Some(4.0));
    }
}
