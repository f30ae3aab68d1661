//! Percent errors of piecewise-flat curvature against smooth references.

use serde::{Deserialize, Serialize};

use super::SmoothReference;
use crate::{Error, Report, Result};

/// References smaller than this fraction of the largest one are treated as zero.
pub const ZERO_REFERENCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub orbit: usize,
    pub value: f64,
    pub reference: f64,
    /// `100 |1 − value / reference|`, absent when the reference is zero.
    pub percent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantityError {
    pub name: String,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub excluded: usize,
    pub rows: Vec<ErrorRow>,
}

impl QuantityError {
    pub fn new(name: &str, values: &[f64], references: &[f64]) -> Result<Self> {
        if values.len() != references.len() {
            return Err(Error::Invalid(format!(
                "{name}: {} values against {} references",
                values.len(),
                references.len()
            )));
        }
        let scale = references.iter().fold(0.0f64, |a, r| a.max(r.abs()));
        let rows: Vec<ErrorRow> = values
            .iter()
            .zip(references)
            .enumerate()
            .map(|(orbit, (&value, &reference))| ErrorRow {
                orbit,
                value,
                reference,
                percent: (reference.abs() > ZERO_REFERENCE * scale && scale > 0.0)
                    .then(|| 100.0 * (1.0 - value / reference).abs()),
            })
            .collect();
        let kept: Vec<f64> = rows.iter().filter_map(|r| r.percent).collect();
        let n = kept.len() as f64;
        let (mean, std) = if kept.is_empty() {
            (0.0, 0.0)
        } else {
            let mean = kept.iter().sum::<f64>() / n;
            (mean, (kept.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n).sqrt())
        };
        Ok(QuantityError {
            name: name.into(),
            mean,
            std,
            excluded: rows.len() - kept.len(),
            rows,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub quantities: Vec<QuantityError>,
}

impl ErrorReport {
    pub fn get(&self, name: &str) -> Option<&QuantityError> {
        self.quantities.iter().find(|q| q.name == name)
    }
}

/// Scalar, sectional and Ricci errors, plus the single-hinge sectional and experimental
/// Ricci operators against the same references.
pub fn error_report(report: &Report, reference: &SmoothReference) -> Result<ErrorReport> {
    let scalar: Vec<f64> = report.vertices.iter().map(|v| v.scalar).collect();
    let pick = |f: fn(&crate::curvature::EdgeCurvature<f64>) -> f64| report.edges.iter().map(f).collect::<Vec<_>>();
    Ok(ErrorReport {
        quantities: vec![
            QuantityError::new("scalar", &scalar, &reference.vertex_scalar)?,
            QuantityError::new("sectional", &pick(|e| e.sectional), &reference.edge_sectional)?,
            QuantityError::new("ricci", &pick(|e| e.ricci), &reference.edge_ricci)?,
            QuantityError::new(
                "sectional_single_hinge",
                &pick(|e| e.sectional_single_hinge),
                &reference.edge_sectional,
            )?,
            QuantityError::new("ricci_experimental", &pick(|e| e.ricci_experimental), &reference.edge_ricci)?,
        ],
    })
}
