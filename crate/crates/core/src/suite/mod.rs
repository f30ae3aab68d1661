//! Test triangulations of smooth 3-manifolds with known curvature, and the smooth oracles
//! they are compared against.

pub mod chart;
pub mod geodesic;
pub mod generate;
pub mod periodic;
pub mod report;
pub mod study;

use serde::{Deserialize, Serialize};

use crate::complex::QuotientLabeling;
use crate::{CurvatureOptions, EdgeLengthMetric, SimplicialComplex3};
use chart::{Point, SmoothChart, SmoothCurvature, Tensor2, Tensor3};
use geodesic::GeodesicRecord;

pub use generate::{
    generate, generate_cylinder, generate_flat_torus, generate_gowdy, generate_nil3, generate_nil3_flat,
    generate_sphere_cell, GeneratorConfig, GowdyStyle,
};
pub use report::{error_report, ErrorReport, QuantityError};

/// The smooth metrics the generators sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldChart {
    Euclidean,
    Sphere { radius: f64 },
    Cylinder { radius: f64 },
    Gowdy { f: f64, amplitude: f64, a: f64 },
    Nil3,
}

impl ManifoldChart {
    fn with<R>(&self, f: impl FnOnce(&dyn SmoothChart) -> R) -> R {
        match *self {
            ManifoldChart::Euclidean => f(&chart::Euclidean),
            ManifoldChart::Sphere { radius } => f(&chart::Sphere3 { radius }),
            ManifoldChart::Cylinder { radius } => f(&chart::Cylinder3 { radius }),
            ManifoldChart::Gowdy { f: ff, amplitude, a } => f(&chart::Gowdy { f: ff, amplitude, a }),
            ManifoldChart::Nil3 => f(&chart::Nil3),
        }
    }
}

impl SmoothChart for ManifoldChart {
    fn name(&self) -> &str {
        match self {
            ManifoldChart::Euclidean => "euclidean",
            ManifoldChart::Sphere { .. } => "sphere",
            ManifoldChart::Cylinder { .. } => "cylinder",
            ManifoldChart::Gowdy { .. } => "gowdy",
            ManifoldChart::Nil3 => "nil3",
        }
    }

    fn metric(&self, x: Point) -> Tensor2 {
        self.with(|c| c.metric(x))
    }

    fn scale(&self) -> f64 {
        self.with(|c| c.scale())
    }

    fn metric_derivatives(&self, x: Point) -> Option<Tensor3> {
        self.with(|c| c.metric_derivatives(x))
    }

    fn analytic_curvature(&self, x: Point, u: Point) -> Option<SmoothCurvature> {
        self.with(|c| c.analytic_curvature(x, u))
    }
}

/// Smooth curvature values to compare against, indexed by vertex and edge orbit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SmoothReference {
    pub vertex_scalar: Vec<f64>,
    pub edge_sectional: Vec<f64>,
    pub edge_ricci: Vec<f64>,
}

/// A triangulation with edge lengths sampled from a smooth metric.
#[derive(Clone, Debug)]
pub struct GeneratedTriangulation {
    pub name: String,
    pub chart: ManifoldChart,
    pub complex: SimplicialComplex3,
    pub labeling: Option<QuotientLabeling>,
    pub metric: EdgeLengthMetric,
    /// Chart coordinates of every covering vertex.
    pub coords: Vec<Point>,
    /// Human-readable class of every edge orbit.
    pub edge_labels: Vec<String>,
    /// Smooth length of every edge orbit before rescaling.
    pub smooth_lengths: Vec<f64>,
    /// Solved geodesics per edge orbit; empty when lengths are closed-form.
    pub geodesics: Vec<GeodesicRecord>,
    /// Factor applied to every smooth length.
    pub rescale: f64,
    /// Smooth volume of the fundamental domain.
    pub smooth_volume: f64,
    pub reference: SmoothReference,
    /// Dual scheme and edge-volume method suited to this triangulation.
    pub options: CurvatureOptions,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `∫ √det g` over a coordinate box by tensor-product Gauss–Legendre quadrature.
pub fn chart_volume(chart: &dyn SmoothChart, lo: Point, hi: Point, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let half: Point = std::array::from_fn(|k| 0.5 * (hi[k] - lo[k]));
    let mid: Point = std::array::from_fn(|k| 0.5 * (hi[k] + lo[k]));
    let mut sum = 0.0;
    for i in 0..order {
        for j in 0..order {
            for k in 0..order {
                let p = [mid[0] + half[0] * x[i], mid[1] + half[1] * x[j], mid[2] + half[2] * x[k]];
                sum += w[i] * w[j] * w[k] * chart::det(&chart.metric(p)).max(0.0).sqrt();
            }
        }
    }
    sum * half[0] * half[1] * half[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(5);
        let q = |f: &dyn Fn(f64) -> f64| x.iter().zip(&w).map(|(&x, &w)| w * f(x)).sum::<f64>();
        assert!((q(&|_| 1.0) - 2.0).abs() < 1e-14);
        assert!((q(&|t| t.powi(8)) - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_chart_volume() {
        let r = 1.3;
        let pi = std::f64::consts::PI;
        let v = chart_volume(&chart::Sphere3 { radius: r }, [0.0; 3], [pi, pi, 2.0 * pi], 24);
        assert!((v / (2.0 * pi * pi * r.powi(3)) - 1.0).abs() < 1e-12);
    }
}
