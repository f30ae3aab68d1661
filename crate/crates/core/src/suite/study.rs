//! Per-resolution summaries shared by the table reproductions and the acceptance suite.

use serde::Serialize;

use super::{error_report, generate, ErrorReport, GeneratorConfig};
use crate::curvature::curvature_report;
use crate::flow::quality_report;
use crate::{CurvatureOptions, EdgeVolumeMethod, Report, Result};

/// Curvature of a regular sphere triangulation, scaled to unit radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphereRow {
    pub cells: usize,
    pub length: f64,
    pub deficit: f64,
    pub scalar: f64,
    pub sectional: f64,
    pub ricci: f64,
    /// Unnormalized `dr/dt · r`.
    pub radius_rate: f64,
    /// Restricted vertex volume `V_{v|ℓ} / r³` from the solid-angle share.
    pub restricted_solid_angle: f64,
    /// The same volume from clipping the dual cells.
    pub restricted_clipped: f64,
}

pub fn sphere_row(cells: usize, radius: f64) -> Result<SphereRow> {
    let g = generate(&GeneratorConfig::Sphere { cells, radius })?;
    let r = curvature_report(&g.complex, &g.metric, g.options)?;
    let clipped = CurvatureOptions { method: EdgeVolumeMethod::Clipped, ..g.options };
    let c = curvature_report(&g.complex, &g.metric, clipped)?;
    let e = &r.edges[0];
    let r2 = radius * radius;
    let r3 = r2 * radius;
    Ok(SphereRow {
        cells,
        length: e.length / radius,
        deficit: e.deficit,
        scalar: r.vertices[0].scalar * r2,
        sectional: e.sectional * r2,
        ricci: e.ricci * r2,
        radius_rate: -e.ricci * r2,
        restricted_solid_angle: e.restricted[0] / r3,
        restricted_clipped: c.edges[0].restricted[0] / r3,
    })
}

/// Deficit-angle statistics in degrees and curvature errors of one generated mesh.
#[derive(Clone, Debug)]
pub struct ResolutionRow {
    pub name: String,
    pub max_deficit_deg: f64,
    pub mean_deficit_deg: f64,
    pub std_deficit_deg: f64,
    pub errors: ErrorReport,
    pub report: Report,
}

pub fn resolution_row(cfg: &GeneratorConfig) -> Result<ResolutionRow> {
    let g = generate(cfg)?;
    let q = quality_report(&g.complex, &g.metric)?;
    let report = curvature_report(&g.complex, &g.metric, g.options)?;
    let errors = error_report(&report, &g.reference)?;
    Ok(ResolutionRow {
        name: g.name,
        max_deficit_deg: q.max_abs_deficit_deg,
        mean_deficit_deg: q.mean_abs_deficit_deg,
        std_deficit_deg: q.std_abs_deficit_deg,
        errors,
        report,
    })
}

/// True when every value is strictly below the one before it.
pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

/// Agreement with a printed value: within `rel`, or within half a unit of its last digit.
pub fn matches_printed(value: f64, printed: &str, rel: f64) -> bool {
    let Ok(target) = printed.parse::<f64>() else { return false };
    let decimals = printed.split_once('.').map_or(0, |(_, d)| d.len()) as i32;
    (value / target - 1.0).abs() <= rel || (value - target).abs() <= 0.5 * 10f64.powi(-decimals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_precision() {
        assert!(matches_printed(0.6536, "0.65", 5e-3));
        assert!(!matches_printed(0.66, "0.65", 5e-3));
        assert!(matches_printed(8.4605, "8.46045", 5e-3));
        assert!(!matches_printed(1.0, "n/a", 5e-3));
    }

    #[test]
    fn strict_decrease() {
        assert!(strictly_decreasing(&[3.0, 2.0, 1.0]));
        assert!(!strictly_decreasing(&[3.0, 3.0, 1.0]));
    }
}
