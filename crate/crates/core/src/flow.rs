//! Piecewise-flat Ricci flow on edge lengths.

use serde::{Deserialize, Serialize};

use crate::complex::{EdgeLengthMetric, MeshGeometry, SimplicialComplex3};
use crate::curvature::{curvature_report_from_geometry, CurvatureOptions, CurvatureReport};
use crate::dual::{delaunay_quality, DelaunayQuality};
use crate::{Error, Real, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Euler,
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowConfig<T> {
    /// Adds `R̃_S / 3` to every fractional rate.
    pub normalized: bool,
    pub dt: T,
    pub steps: usize,
    pub integrator: Integrator,
    pub curvature: CurvatureOptions,
    /// Halt once any `|ε|` exceeds this many radians.
    pub max_deficit: T,
    /// Halt once any tetrahedron's `288 V² / mean⁶` falls below this.
    pub min_quality: T,
}

impl<T: Real> Default for FlowConfig<T> {
    fn default() -> Self {
        FlowConfig {
            normalized: false,
            dt: T::lit(1e-3),
            steps: 100,
            integrator: Integrator::Rk4,
            curvature: CurvatureOptions::default(),
            max_deficit: T::lit(0.5),
            min_quality: T::lit(1e-10),
        }
    }
}

impl<T: Real> FlowConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::Invalid(format!("time step {} must be positive", self.dt.as_f64())));
        }
        if !(self.max_deficit > T::zero()) || !(self.min_quality > T::zero()) {
            return Err(Error::Invalid("quality thresholds must be positive".into()));
        }
        Ok(())
    }
}

/// State of the flow at one recorded time.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSample<T> {
    pub step: usize,
    pub time: T,
    /// One length per edge orbit.
    pub lengths: Vec<T>,
    /// Ricci curvature per edge orbit.
    pub ricci: Vec<T>,
    pub average_scalar: T,
    pub total_volume: T,
    pub max_abs_deficit: T,
    pub min_quality: T,
}

/// Why an integration stopped before its requested step count.
#[derive(Clone, Debug, PartialEq)]
pub enum FlowHalt {
    /// The lengths stopped forming valid tetrahedra.
    InvalidMetric { step: usize, message: String },
    /// A rate evaluated to NaN or infinity.
    NonFinite { step: usize, edge_orbit: usize },
    DeficitTooLarge { step: usize, edge: usize, deficit: f64 },
    QualityTooLow { step: usize, tet: usize, quality: f64 },
    /// Curvature evaluation failed, e.g. on a degenerate dual cell.
    Numerical { step: usize, message: String },
}

impl std::fmt::Display for FlowHalt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FlowHalt::InvalidMetric { step, message } => write!(f, "step {step}: {message}"),
            FlowHalt::NonFinite { step, edge_orbit } => {
                write!(f, "step {step}: non-finite rate on edge orbit {edge_orbit}")
            }
            FlowHalt::DeficitTooLarge { step, edge, deficit } => {
                write!(f, "step {step}: edge {edge} deficit {deficit:e} rad exceeds threshold")
            }
            FlowHalt::QualityTooLow { step, tet, quality } => {
                write!(f, "step {step}: tetrahedron {tet} quality {quality:e} below threshold")
            }
            FlowHalt::Numerical { step, message } => write!(f, "step {step}: {message}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowTrajectory<T> {
    pub samples: Vec<FlowSample<T>>,
    pub halt: Option<FlowHalt>,
}

impl<T: Real> FlowTrajectory<T> {
    pub fn last(&self) -> &FlowSample<T> {
        self.samples.last().expect("trajectory holds the initial state")
    }
}

fn rates_from_report<T: Real>(
    report: &CurvatureReport<T>,
    normalized: bool,
) -> Vec<T> {
    let norm = if normalized {
        report.average_scalar / T::lit(3.0)
    } else {
        T::zero()
    };
    report
        .edges
        .iter()
        .map(|e| e.length * (norm - e.ricci))
        .collect()
}

/// `d|ℓ|/dt = |ℓ| (−Rc_ℓ + [R̃_S / 3])` for every edge orbit.
pub fn flow_rhs<T: Real>(
    c: &SimplicialComplex3,
    m: &EdgeLengthMetric<T>,
    options: CurvatureOptions,
    normalized: bool,
) -> Result<Vec<T>> {
    let geom = MeshGeometry::new(c, m)?;
    let report = curvature_report_from_geometry(c, &geom, options)?;
    Ok(rates_from_report(&report, normalized))
}

struct Evaluated<T> {
    rates: Vec<T>,
    sample: FlowSample<T>,
}

fn evaluate<T: Real>(
    c: &SimplicialComplex3,
    lengths: &[T],
    config: &FlowConfig<T>,
    step: usize,
    time: T,
) -> std::result::Result<Evaluated<T>, FlowHalt> {
    let m = EdgeLengthMetric::from_orbit_lengths(c, lengths).map_err(|e| FlowHalt::InvalidMetric {
        step,
        message: e.to_string(),
    })?;
    let numerical = |e: Error| FlowHalt::Numerical {
        step,
        message: e.to_string(),
    };
    let geom = MeshGeometry::new(c, &m).map_err(numerical)?;
    let report = curvature_report_from_geometry(c, &geom, config.curvature).map_err(numerical)?;
    let rates = rates_from_report(&report, config.normalized);
    if let Some(k) = rates.iter().position(|r| !r.is_finite()) {
        return Err(FlowHalt::NonFinite { step, edge_orbit: k });
    }
    let max_abs_deficit = geom.deficits.iter().fold(T::zero(), |a, &d| a.max(d.abs()));
    let min_quality = geom
        .tets
        .iter()
        .fold(T::infinity(), |a, t| a.min(t.lengths.quality()));
    Ok(Evaluated {
        rates,
        sample: FlowSample {
            step,
            time,
            lengths: lengths.to_vec(),
            ricci: report.edges.iter().map(|e| e.ricci).collect(),
            average_scalar: report.average_scalar,
            total_volume: report.total_volume,
            max_abs_deficit,
            min_quality,
        },
    })
}

fn check_quality<T: Real>(
    c: &SimplicialComplex3,
    lengths: &[T],
    config: &FlowConfig<T>,
    step: usize,
) -> Option<FlowHalt> {
    let m = match EdgeLengthMetric::from_orbit_lengths(c, lengths) {
        Ok(m) => m,
        Err(e) => {
            return Some(FlowHalt::InvalidMetric {
                step,
                message: e.to_string(),
            })
        }
    };
    let geom = match MeshGeometry::new(c, &m) {
        Ok(g) => g,
        Err(e) => {
            return Some(FlowHalt::InvalidMetric {
                step,
                message: e.to_string(),
            })
        }
    };
    for (e, d) in geom.deficits.iter().enumerate() {
        if d.abs() > config.max_deficit {
            return Some(FlowHalt::DeficitTooLarge {
                step,
                edge: e,
                deficit: d.as_f64(),
            });
        }
    }
    for (t, g) in geom.tets.iter().enumerate() {
        let q = g.lengths.quality();
        if q < config.min_quality {
            return Some(FlowHalt::QualityTooLow {
                step,
                tet: t,
                quality: q.as_f64(),
            });
        }
    }
    None
}

fn axpy<T: Real>(x: &[T], a: T, y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(&xi, &yi)| xi + a * yi).collect()
}

/// Fixed-step integration recording the state before every step and after the last one.
///
/// Returns an error only for an invalid configuration or initial metric; problems that
/// arise during the flow end the trajectory with a [`FlowHalt`].
pub fn integrate<T: Real>(
    c: &SimplicialComplex3,
    m0: &EdgeLengthMetric<T>,
    config: &FlowConfig<T>,
) -> Result<FlowTrajectory<T>> {
    config.validate()?;
    m0.validate(c)?;
    let mut lengths = m0.orbit_lengths(c);
    let mut samples = Vec::with_capacity(config.steps + 1);
    let mut time = T::zero();
    let dt = config.dt;
    let half = T::lit(0.5);
    for step in 0..config.steps {
        let k1 = match evaluate(c, &lengths, config, step, time) {
            Ok(ev) => {
                samples.push(ev.sample);
                ev.rates
            }
            Err(halt) => return Ok(FlowTrajectory { samples, halt: Some(halt) }),
        };
        let next = match config.integrator {
            Integrator::Euler => axpy(&lengths, dt, &k1),
            Integrator::Rk4 => {
                let stage = |y: &[T], h: T| evaluate(c, y, config, step, time + h).map(|e| e.rates);
                let r = (|| {
                    let k2 = stage(&axpy(&lengths, half * dt, &k1), half * dt)?;
                    let k3 = stage(&axpy(&lengths, half * dt, &k2), half * dt)?;
                    let k4 = stage(&axpy(&lengths, dt, &k3), dt)?;
                    Ok::<_, FlowHalt>((k2, k3, k4))
                })();
                let (k2, k3, k4) = match r {
                    Ok(k) => k,
                    Err(halt) => return Ok(FlowTrajectory { samples, halt: Some(halt) }),
                };
                let sixth = dt / T::lit(6.0);
                (0..lengths.len())
                    .map(|i| {
                        lengths[i] + sixth * (k1[i] + T::lit(2.0) * (k2[i] + k3[i]) + k4[i])
                    })
                    .collect()
            }
        };
        lengths = next;
        time = time + dt;
        if let Some(halt) = check_quality(c, &lengths, config, step + 1) {
            return Ok(FlowTrajectory { samples, halt: Some(halt) });
        }
    }
    match evaluate(c, &lengths, config, config.steps, time) {
        Ok(ev) => samples.push(ev.sample),
        Err(halt) => return Ok(FlowTrajectory { samples, halt: Some(halt) }),
    }
    Ok(FlowTrajectory { samples, halt: None })
}

/// Deficit-angle statistics, shape quality and Delaunay flags of a metric.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityReport<T> {
    /// Statistics of `|ε|` over edge orbits, in degrees.
    pub max_abs_deficit_deg: T,
    pub mean_abs_deficit_deg: T,
    pub std_abs_deficit_deg: T,
    /// Smallest `288 V² / mean⁶` over tetrahedra.
    pub min_quality: T,
    pub worst_tet: usize,
    pub delaunay: DelaunayQuality,
}

pub fn quality_report<T: Real>(c: &SimplicialComplex3, m: &EdgeLengthMetric<T>) -> Result<QualityReport<T>> {
    let geom = MeshGeometry::new(c, m)?;
    let to_deg = T::lit(180.0) / T::PI();
    let abs: Vec<T> = c
        .orbits()
        .edge_reps
        .iter()
        .map(|&e| geom.deficits[e].abs() * to_deg)
        .collect();
    let n = T::from_usize(abs.len()).unwrap_or_else(T::one);
    let mean = abs.iter().copied().sum::<T>() / n;
    let var = abs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / n;
    let (worst_tet, min_quality) = geom
        .tets
        .iter()
        .enumerate()
        .map(|(i, t)| (i, t.lengths.quality()))
        .fold((0, T::infinity()), |a, b| if b.1 < a.1 { b } else { a });
    Ok(QualityReport {
        max_abs_deficit_deg: abs.iter().fold(T::zero(), |a, &b| a.max(b)),
        mean_abs_deficit_deg: mean,
        std_abs_deficit_deg: var.sqrt(),
        min_quality,
        worst_tet,
        delaunay: delaunay_quality(c, &geom),
    })
}
