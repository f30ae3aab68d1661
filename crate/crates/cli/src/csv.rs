//! CSV emission with fixed row order and 12 significant digits.

use pfcurv::flow::FlowTrajectory;
use pfcurv::suite::{ErrorReport, SmoothReference};
use pfcurv::Report;

pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000e0".into();
    }
    format!("{x:.11e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub struct Table {
    text: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { text: header.join(",") + "\n" }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub const CURVATURE_HEADER: [&str; 5] = ["entity_kind", "orbit_id", "value", "smooth_reference", "percent_error"];

fn percent(value: f64, reference: Option<f64>) -> Option<f64> {
    reference.filter(|r| *r != 0.0).map(|r| 100.0 * (1.0 - value / r).abs())
}

/// One row per entity and quantity: vertex quantities first, then edge quantities, each by orbit.
pub fn curvature_csv(report: &Report, reference: Option<&SmoothReference>) -> String {
    let mut t = Table::new(&CURVATURE_HEADER);
    let mut emit = |kind: &str, orbit: usize, value: f64, r: Option<f64>| {
        t.row(&[kind.into(), orbit.to_string(), num(value), opt(r), opt(percent(value, r))]);
    };
    for v in &report.vertices {
        emit("vertex_volume", v.orbit, v.volume, None);
    }
    for v in &report.vertices {
        emit("scalar", v.orbit, v.scalar, reference.map(|r| r.vertex_scalar[v.orbit]));
    }
    type Pick = fn(&pfcurv::curvature::EdgeCurvature<f64>) -> f64;
    let edge_rows: [(&str, Pick, Option<&Vec<f64>>); 7] = [
        ("edge_length", |e| e.length, None),
        ("deficit", |e| e.deficit, None),
        ("edge_volume", |e| e.volume, None),
        ("sectional", |e| e.sectional, reference.map(|r| &r.edge_sectional)),
        ("ricci", |e| e.ricci, reference.map(|r| &r.edge_ricci)),
        ("sectional_single_hinge", |e| e.sectional_single_hinge, reference.map(|r| &r.edge_sectional)),
        ("ricci_experimental", |e| e.ricci_experimental, reference.map(|r| &r.edge_ricci)),
    ];
    for (kind, pick, refs) in edge_rows {
        for e in &report.edges {
            emit(kind, e.orbit, pick(e), refs.map(|r| r[e.orbit]));
        }
    }
    t.finish()
}

pub fn error_csv(errors: &ErrorReport) -> String {
    let mut t = Table::new(&["quantity", "mean_percent", "std_percent", "count", "excluded"]);
    for q in &errors.quantities {
        t.row(&[
            q.name.clone(),
            num(q.mean),
            num(q.std),
            (q.rows.len() - q.excluded).to_string(),
            q.excluded.to_string(),
        ]);
    }
    t.finish()
}

pub fn trajectory_csv(trajectory: &FlowTrajectory<f64>) -> String {
    let mut t = Table::new(&[
        "step",
        "t",
        "edge_orbit",
        "length",
        "ricci",
        "average_scalar",
        "max_deficit_deg",
        "total_volume",
    ]);
    for s in &trajectory.samples {
        let deg = s.max_abs_deficit.to_degrees();
        for (orbit, (l, rc)) in s.lengths.iter().zip(&s.ricci).enumerate() {
            t.row(&[
                s.step.to_string(),
                num(s.time),
                orbit.to_string(),
                num(*l),
                num(*rc),
                num(s.average_scalar),
                num(deg),
                num(s.total_volume),
            ]);
        }
    }
    t.finish()
}
