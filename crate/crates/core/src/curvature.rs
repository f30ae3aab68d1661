//! Piecewise-flat curvature operators.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{EdgeLengthMetric, MeshGeometry, SimplicialComplex3};
use crate::dual::{DualScheme, DualVolumeTable, EdgeVolumeMethod};
use crate::vec3;
use crate::{Error, Real, Result};

/// Integrated sectional curvature of a plane at angle `theta` to a hinge with deficit `eps`,
/// to first order in `eps`.
pub fn integrated_sectional_hinge<T: Real>(theta: T, eps: T) -> T {
    theta.cos() * eps
}

/// Scalar curvature averaged over the dual cell of vertex `v`.
pub fn scalar_vertex<T: Real>(
    c: &SimplicialComplex3,
    geom: &MeshGeometry<T>,
    duals: &DualVolumeTable<T>,
    v: usize,
) -> Result<T> {
    let vol = *duals
        .vertex_volume
        .get(v)
        .ok_or_else(|| Error::NotFound(format!("vertex {v}")))?;
    if !(vol > T::zero()) {
        return Err(Error::DegenerateDual(format!("vertex {v} has dual volume {}", vol.as_f64())));
    }
    let sum: T = c
        .edges_at_vertex(v)?
        .iter()
        .map(|&h| geom.lengths[h] * geom.deficits[h])
        .sum();
    Ok(sum / vol)
}

/// Sectional curvature orthogonal to edge `e` in the triangle-sum form: each triangle
/// `(ℓ, h1, h2)` adds `½ (d²/|h1| ε1 + (|ℓ| − d)²/|h2| ε2)` with `d` the foot distance.
pub fn sectional_edge<T: Real>(
    geom: &MeshGeometry<T>,
    duals: &DualVolumeTable<T>,
    e: usize,
) -> Result<T> {
    let ev = duals.edge(e)?;
    let len = ev.length;
    let half = T::lit(0.5);
    let mut sum = len * geom.deficits[e];
    for pair in ev.hinges.chunks(2) {
        let [h1, h2] = [pair[0], pair[1]];
        let (l1, l2) = (geom.lengths[h1.edge], geom.lengths[h2.edge]);
        let d = h1.cos_theta * l1;
        let rest = len - d;
        sum = sum + half * (d * d / l1 * geom.deficits[h1.edge] + rest * rest / l2 * geom.deficits[h2.edge]);
    }
    Ok(sum / ev.volume)
}

/// Cosine of the angle at `v` between edges `(v, w)` and `(v, x)`, from an embedding of a
/// tetrahedron that contains all three vertices.
fn embedded_cos<T: Real>(c: &SimplicialComplex3, geom: &MeshGeometry<T>, v: usize, w: usize, x: usize) -> Result<T> {
    let e = c.edge_id(v, w).ok_or_else(|| Error::NotFound(format!("edge {v}-{w}")))?;
    let t = c
        .tets_at_edge(e)?
        .iter()
        .copied()
        .find(|&t| c.local_vertex(t, x).is_some())
        .ok_or_else(|| Error::NotFound(format!("tetrahedron containing {v}, {w}, {x}")))?;
    let p = &geom.tets[t].points;
    let at = |y: usize| p[c.local_vertex(t, y).unwrap_or(0)];
    let a = vec3::sub(at(w), at(v));
    let b = vec3::sub(at(x), at(v));
    Ok(vec3::dot(a, b) / (vec3::norm(a) * vec3::norm(b)))
}

/// Sectional curvature orthogonal to edge `e` in the hinge-sum form
/// `(|ℓ| ε_ℓ + Σ_h |h ∩ V_ℓ| cos²θ_h ε_h) / |V_ℓ|`, with angles taken from embedded vectors.
pub fn sectional_edge_general<T: Real>(
    c: &SimplicialComplex3,
    geom: &MeshGeometry<T>,
    duals: &DualVolumeTable<T>,
    e: usize,
) -> Result<T> {
    let ev = duals.edge(e)?;
    let ends = c.vertices_of_edge(e)?;
    let mut sum = ev.length * geom.deficits[e];
    for h in &ev.hinges {
        let v = ends[h.endpoint];
        let w = ends[1 - h.endpoint];
        let [a, b] = c.vertices_of_edge(h.edge)?;
        let x = if a == v { b } else { a };
        let cos = embedded_cos(c, geom, v, w, x)?;
        sum = sum + h.length * cos * cos * geom.deficits[h.edge];
    }
    Ok(sum / ev.volume)
}

/// Baseline sectional curvature that only sees the edge's own deficit angle.
pub fn sectional_single_hinge<T: Real>(
    geom: &MeshGeometry<T>,
    duals: &DualVolumeTable<T>,
    e: usize,
) -> Result<T> {
    let ev = duals.edge(e)?;
    Ok(ev.length * geom.deficits[e] / ev.volume)
}

/// Ricci curvature along edge `e`: the mean of the endpoint scalar curvatures, each weighted
/// by the half of the edge inside its dual cell, minus the orthogonal sectional curvature.
pub fn ricci_edge<T: Real>(scalar_endpoints: [T; 2], sectional: T) -> T {
    T::lit(0.25) * (scalar_endpoints[0] + scalar_endpoints[1]) - sectional
}

/// Experimental Ricci operator `Σ_h |h ∩ V_ℓ| sin²θ_h ε_h / |V_ℓ|`; no convergence is claimed.
pub fn ricci_experimental<T: Real>(
    geom: &MeshGeometry<T>,
    duals: &DualVolumeTable<T>,
    e: usize,
) -> Result<T> {
    let ev = duals.edge(e)?;
    let sum: T = ev
        .hinges
        .iter()
        .map(|h| h.length * (T::one() - h.cos_theta * h.cos_theta) * geom.deficits[h.edge])
        .sum();
    Ok(sum / ev.volume)
}

/// Covering-space sum `Σ_h |h| ε_h`.
fn hinge_sum<T: Real>(geom: &MeshGeometry<T>) -> T {
    geom.lengths
        .iter()
        .zip(&geom.deficits)
        .map(|(&l, &e)| l * e)
        .sum()
}

/// Regge action `2 Σ_h |h| ε_h` of the fundamental domain.
pub fn regge_action<T: Real>(c: &SimplicialComplex3, geom: &MeshGeometry<T>) -> T {
    T::lit(2.0) * hinge_sum(geom) / T::from_usize(c.orbits().sheets).unwrap_or_else(T::one)
}

/// Average scalar curvature over the whole manifold, `2 Σ_h |h| ε_h / |S|`.
pub fn average_scalar_global<T: Real>(geom: &MeshGeometry<T>) -> T {
    T::lit(2.0) * hinge_sum(geom) / geom.covering_volume()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureOptions {
    pub scheme: DualScheme,
    pub method: EdgeVolumeMethod,
}

impl Default for CurvatureOptions {
    fn default() -> Self {
        CurvatureOptions {
            scheme: DualScheme::Voronoi,
            method: EdgeVolumeMethod::Clipped,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexCurvature<T> {
    pub orbit: usize,
    /// Orbit representative.
    pub vertex: usize,
    pub volume: T,
    pub scalar: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeCurvature<T> {
    pub orbit: usize,
    /// Orbit representative.
    pub edge: usize,
    pub vertices: [usize; 2],
    pub length: T,
    pub deficit: T,
    pub volume: T,
    pub restricted: [T; 2],
    pub sectional: T,
    pub sectional_general: T,
    pub sectional_single_hinge: T,
    pub ricci: T,
    pub ricci_experimental: T,
    pub obtuse_hinges: usize,
    pub outside_star_hinges: usize,
}

/// Curvatures of every vertex and edge orbit plus global quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport<T> {
    pub options: CurvatureOptions,
    pub vertices: Vec<VertexCurvature<T>>,
    pub edges: Vec<EdgeCurvature<T>>,
    /// Scalar curvature of every covering vertex.
    pub vertex_scalar: Vec<T>,
    pub vertex_volume: Vec<T>,
    pub average_scalar: T,
    pub regge_action: T,
    /// Fundamental-domain volume.
    pub total_volume: T,
}

impl<T: Real> CurvatureReport<T> {
    /// `Σ_v R_v |V_v|` over the fundamental domain.
    pub fn scalar_integral(&self, sheets: usize) -> T {
        let s: T = self
            .vertex_scalar
            .iter()
            .zip(&self.vertex_volume)
            .map(|(&r, &v)| r * v)
            .sum();
        s / T::from_usize(sheets).unwrap_or_else(T::one)
    }
}

pub fn curvature_report<T: Real>(
    c: &SimplicialComplex3,
    m: &EdgeLengthMetric<T>,
    options: CurvatureOptions,
) -> Result<CurvatureReport<T>> {
    let geom = MeshGeometry::new(c, m)?;
    curvature_report_from_geometry(c, &geom, options)
}

pub fn curvature_report_from_geometry<T: Real>(
    c: &SimplicialComplex3,
    geom: &MeshGeometry<T>,
    options: CurvatureOptions,
) -> Result<CurvatureReport<T>> {
    let orbits = c.orbits();
    let duals = DualVolumeTable::build(c, geom, options.scheme, options.method, &orbits.edge_reps)?;
    let vertex_scalar = (0..c.n_vertices())
        .into_par_iter()
        .map(|v| scalar_vertex(c, geom, &duals, v))
        .collect::<Result<Vec<_>>>()?;
    let vertices = orbits
        .vertex_reps
        .iter()
        .enumerate()
        .map(|(orbit, &v)| VertexCurvature {
            orbit,
            vertex: v,
            volume: duals.vertex_volume[v],
            scalar: vertex_scalar[v],
        })
        .collect();
    let edges = orbits
        .edge_reps
        .par_iter()
        .enumerate()
        .map(|(orbit, &e)| {
            let ev = duals.edge(e)?;
            let vertices = c.vertices_of_edge(e)?;
            let sectional = sectional_edge(geom, &duals, e)?;
            Ok(EdgeCurvature {
                orbit,
                edge: e,
                vertices,
                length: ev.length,
                deficit: geom.deficits[e],
                volume: ev.volume,
                restricted: ev.restricted,
                sectional,
                sectional_general: sectional_edge_general(c, geom, &duals, e)?,
                sectional_single_hinge: sectional_single_hinge(geom, &duals, e)?,
                ricci: ricci_edge([vertex_scalar[vertices[0]], vertex_scalar[vertices[1]]], sectional),
                ricci_experimental: ricci_experimental(geom, &duals, e)?,
                obtuse_hinges: ev.obtuse_hinges,
                outside_star_hinges: ev.outside_star_hinges,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sheets = T::from_usize(orbits.sheets).unwrap_or_else(T::one);
    Ok(CurvatureReport {
        options,
        vertices,
        edges,
        vertex_scalar,
        vertex_volume: duals.vertex_volume.clone(),
        average_scalar: average_scalar_global(geom),
        regge_action: regge_action(c, geom),
        total_volume: geom.covering_volume() / sheets,
    })
}
