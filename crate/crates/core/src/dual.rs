//! Voronoi and barycentric dual cells, edge volumes and Delaunay-quality flags.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clip::slab_volume;
use crate::complex::{EdgeLengthMetric, MeshGeometry, SimplicialComplex3};
use crate::simplex::{circumcenter_point, foot_decomposition};
use crate::vec3::{self, Vec3};
use crate::{Error, Real, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualScheme {
    /// Circumcentric cells; pieces are signed when a circumcenter leaves its simplex.
    Voronoi,
    /// Equal-share cells through simplex barycenters.
    Barycentric,
}

/// How the per-endpoint parts `V_{v|ℓ}` of an edge volume are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeVolumeMethod {
    /// Clip each endpoint's dual cell to the slab between the planes orthogonal to the edge.
    Clipped,
    /// Half of each endpoint's dual volume.
    HalfVertex,
    /// Dual volume rescaled by the total solid angle at the endpoint: `2π V_v / Ω_v`.
    SolidAngle,
}

/// One of the six flag tetrahedra `[v, edge point, face point, tet point]` of a dual piece.
#[derive(Clone, Copy, Debug)]
pub struct FlagTet<T> {
    pub points: [Vec3<T>; 4],
    pub signed_volume: T,
}

/// Dual-cell pieces of one tetrahedron, six flag tetrahedra per local vertex.
pub type TetPieces<T> = [[FlagTet<T>; 6]; 4];

fn tet_center<T: Real>(p: &[Vec3<T>; 4], scheme: DualScheme) -> Vec3<T> {
    match scheme {
        DualScheme::Barycentric => {
            let s = vec3::add(vec3::add(p[0], p[1]), vec3::add(p[2], p[3]));
            vec3::scale(s, T::lit(0.25))
        }
        DualScheme::Voronoi => {
            let q = [
                [T::zero(); 3],
                vec3::sub(p[1], p[0]),
                vec3::sub(p[2], p[0]),
                vec3::sub(p[3], p[0]),
            ];
            vec3::add(p[0], circumcenter_point(&q))
        }
    }
}

fn face_center<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>, scheme: DualScheme) -> Vec3<T> {
    match scheme {
        DualScheme::Barycentric => vec3::scale(vec3::add(vec3::add(a, b), c), T::one() / T::lit(3.0)),
        DualScheme::Voronoi => vec3::triangle_circumcenter(a, b, c),
    }
}

/// Subdivides an embedded tetrahedron into the dual pieces of its four vertices.
pub fn tet_pieces<T: Real>(p: &[Vec3<T>; 4], scheme: DualScheme) -> TetPieces<T> {
    let half = T::lit(0.5);
    let center = tet_center(p, scheme);
    std::array::from_fn(|v| {
        let others: Vec<usize> = (0..4).filter(|&x| x != v).collect();
        let mut flags = [FlagTet {
            points: [[T::zero(); 3]; 4],
            signed_volume: T::zero(),
        }; 6];
        let mut n = 0;
        for &j in &others {
            let mid = vec3::scale(vec3::add(p[v], p[j]), half);
            for &k in &others {
                if k == j {
                    continue;
                }
                let l = others.iter().copied().find(|&x| x != j && x != k).unwrap_or(k);
                let orient = vec3::det3(vec3::sub(p[j], p[v]), vec3::sub(p[k], p[v]), vec3::sub(p[l], p[v]));
                let fc = face_center(p[v], p[j], p[k], scheme);
                let raw = vec3::signed_tet_volume(p[v], mid, fc, center);
                flags[n] = FlagTet {
                    points: [p[v], mid, fc, center],
                    signed_volume: if orient >= T::zero() { raw } else { -raw },
                };
                n += 1;
            }
        }
        flags
    })
}

/// Dual-cell volume of each local vertex of an embedded tetrahedron.
pub fn tet_vertex_shares<T: Real>(p: &[Vec3<T>; 4], volume: T, scheme: DualScheme) -> [T; 4] {
    match scheme {
        DualScheme::Barycentric => [volume * T::lit(0.25); 4],
        DualScheme::Voronoi => {
            let pieces = tet_pieces(p, scheme);
            std::array::from_fn(|v| pieces[v].iter().map(|f| f.signed_volume).sum())
        }
    }
}

/// Part of the dual volume of a hinge `h` attributed to one of its endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HingeRestriction<T> {
    /// Hinge edge id.
    pub edge: usize,
    /// Triangle shared by the hinge and the edge.
    pub triangle: usize,
    /// 0 when the hinge meets the edge at its first vertex, 1 at the second.
    pub endpoint: usize,
    /// `|h ∩ V_ℓ|`, half the hinge length.
    pub length: T,
    /// Cosine of the angle between the hinge and the edge at the shared vertex.
    pub cos_theta: T,
}

/// Edge volume `V_ℓ` and the data the sectional-curvature formula needs.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeVolume<T> {
    pub edge: usize,
    pub length: T,
    pub volume: T,
    /// `V_{v|ℓ}` for the two endpoints, in edge-vertex order.
    pub restricted: [T; 2],
    /// `A_ℓ = |V_ℓ| / |ℓ|`.
    pub cross_section: T,
    pub hinges: Vec<HingeRestriction<T>>,
    /// Hinges whose angle to the edge exceeds a right angle.
    pub obtuse_hinges: usize,
    /// Hinges at an endpoint outside the edge star that lean into the clipped slab.
    pub outside_star_hinges: usize,
}

/// Dual volumes of every vertex, plus edge volumes for a chosen set of edges.
#[derive(Clone, Debug)]
pub struct DualVolumeTable<T> {
    pub scheme: DualScheme,
    pub method: EdgeVolumeMethod,
    /// `|V_v|` for every covering vertex.
    pub vertex_volume: Vec<T>,
    /// Total solid angle around every vertex.
    pub vertex_solid_angle: Vec<T>,
    /// Indexed by edge id; `Some` for the edges requested at construction.
    pub edges: Vec<Option<EdgeVolume<T>>>,
}

impl<T: Real> DualVolumeTable<T> {
    pub fn build(
        c: &SimplicialComplex3,
        geom: &MeshGeometry<T>,
        scheme: DualScheme,
        method: EdgeVolumeMethod,
        edges: &[usize],
    ) -> Result<Self> {
        let shares: Vec<[T; 4]> = geom
            .tets
            .par_iter()
            .map(|g| tet_vertex_shares(&g.points, g.volume, scheme))
            .collect();
        let mut vertex_volume = vec![T::zero(); c.n_vertices()];
        let mut vertex_solid_angle = vec![T::zero(); c.n_vertices()];
        for (t, verts) in c.tets().iter().enumerate() {
            for k in 0..4 {
                vertex_volume[verts[k]] = vertex_volume[verts[k]] + shares[t][k];
                vertex_solid_angle[verts[k]] = vertex_solid_angle[verts[k]] + geom.tets[t].solid[k];
            }
        }
        for (v, &vol) in vertex_volume.iter().enumerate() {
            if !(vol > T::zero()) {
                return Err(Error::DegenerateDual(format!(
                    "vertex {v} has dual volume {}",
                    vol.as_f64()
                )));
            }
        }
        let mut table = DualVolumeTable {
            scheme,
            method,
            vertex_volume,
            vertex_solid_angle,
            edges: vec![None; c.n_edges()],
        };
        let computed = edges
            .par_iter()
            .map(|&e| edge_volume(c, geom, &table, e))
            .collect::<Result<Vec<_>>>()?;
        for ev in computed {
            let e = ev.edge;
            table.edges[e] = Some(ev);
        }
        Ok(table)
    }

    /// `|h ∩ V_v|`: half the hinge length when `v` is an endpoint of `h`, else zero.
    pub fn hinge_restriction(&self, c: &SimplicialComplex3, m: &EdgeLengthMetric<T>, v: usize, h: usize) -> T {
        match c.vertices_of_edge(h) {
            Ok([a, b]) if a == v || b == v => m.length(h) * T::lit(0.5),
            _ => T::zero(),
        }
    }

    pub fn edge(&self, e: usize) -> Result<&EdgeVolume<T>> {
        self.edges
            .get(e)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::NotFound(format!("edge volume for edge {e} was not computed")))
    }
}

/// Dual volumes of every vertex under `scheme`.
pub fn vertex_dual_volumes<T: Real>(
    c: &SimplicialComplex3,
    geom: &MeshGeometry<T>,
    scheme: DualScheme,
) -> Result<Vec<T>> {
    Ok(DualVolumeTable::build(c, geom, scheme, EdgeVolumeMethod::HalfVertex, &[])?.vertex_volume)
}

/// `2π V_v / Ω_v` where `Ω_v` is the total solid angle at the vertex.
pub fn solid_angle_vvl_approx<T: Real>(vertex_volume: T, total_solid_angle: T) -> Result<T> {
    if !(total_solid_angle > T::zero()) {
        return Err(Error::Domain(format!(
            "solid angle {} must be positive",
            total_solid_angle.as_f64()
        )));
    }
    Ok(T::lit(2.0) * T::PI() * vertex_volume / total_solid_angle)
}

/// Edge volume of `e` with the hinge list used by the sectional-curvature formula.
pub fn edge_volume<T: Real>(
    c: &SimplicialComplex3,
    geom: &MeshGeometry<T>,
    duals: &DualVolumeTable<T>,
    e: usize,
) -> Result<EdgeVolume<T>> {
    let [v1, v2] = c.vertices_of_edge(e)?;
    let len = geom.lengths[e];
    let half = T::lit(0.5);

    let mut hinges = Vec::new();
    for &f in c.triangles_at_edge(e)? {
        let x = c.triangles()[f].iter().copied().find(|&x| x != v1 && x != v2).unwrap_or(v1);
        let h1 = c.edge_id(v1, x).ok_or_else(|| Error::NotFound(format!("edge {v1}-{x}")))?;
        let h2 = c.edge_id(v2, x).ok_or_else(|| Error::NotFound(format!("edge {v2}-{x}")))?;
        let (l1, l2) = (geom.lengths[h1], geom.lengths[h2]);
        let foot = foot_decomposition(len, l1, l2)?;
        hinges.push(HingeRestriction {
            edge: h1,
            triangle: f,
            endpoint: 0,
            length: l1 * half,
            cos_theta: foot.cos_theta1,
        });
        hinges.push(HingeRestriction {
            edge: h2,
            triangle: f,
            endpoint: 1,
            length: l2 * half,
            cos_theta: foot.cos_theta2,
        });
    }
    let obtuse_hinges = hinges.iter().filter(|h| h.cos_theta < T::zero()).count();

    let mut outside_star_hinges = 0;
    let restricted = match duals.method {
        EdgeVolumeMethod::HalfVertex => [
            duals.vertex_volume[v1] * half,
            duals.vertex_volume[v2] * half,
        ],
        EdgeVolumeMethod::SolidAngle => [
            solid_angle_vvl_approx(duals.vertex_volume[v1], duals.vertex_solid_angle[v1])?,
            solid_angle_vvl_approx(duals.vertex_volume[v2], duals.vertex_solid_angle[v2])?,
        ],
        EdgeVolumeMethod::Clipped => {
            let (a, na) = clipped_restricted(c, geom, duals.scheme, e, v1, v2, len);
            let (b, nb) = clipped_restricted(c, geom, duals.scheme, e, v2, v1, len);
            outside_star_hinges = na + nb;
            [a, b]
        }
    };
    let volume = restricted[0] + restricted[1];
    if !(volume > T::zero()) {
        return Err(Error::DegenerateDual(format!(
            "edge {v1}-{v2} has edge volume {}",
            volume.as_f64()
        )));
    }
    Ok(EdgeVolume {
        edge: e,
        length: len,
        volume,
        restricted,
        cross_section: volume / len,
        hinges,
        obtuse_hinges,
        outside_star_hinges,
    })
}

/// Part of `V_v` between the planes orthogonal to edge `(v, w)` at `v` and at distance `len`.
///
/// The edge direction is carried from the tetrahedra around the edge to the rest of the
/// star of `v` by unfolding across faces through `v`.
fn clipped_restricted<T: Real>(
    c: &SimplicialComplex3,
    geom: &MeshGeometry<T>,
    scheme: DualScheme,
    e: usize,
    v: usize,
    w: usize,
    len: T,
) -> (T, usize) {
    let star = c.tets_at_vertex(v).unwrap_or(&[]);
    let mut dir: Vec<Option<Vec3<T>>> = vec![None; star.len()];
    let slot = |t: usize| star.binary_search(&t).ok();
    let mut queue = VecDeque::new();
    for &t in c.tets_at_edge(e).unwrap_or(&[]) {
        let p = &geom.tets[t].points;
        let (lv, lw) = (c.local_vertex(t, v).unwrap_or(0), c.local_vertex(t, w).unwrap_or(0));
        let u = vec3::sub(p[lw], p[lv]);
        if let Some(s) = slot(t) {
            dir[s] = Some(vec3::scale(u, T::one() / vec3::norm(u)));
            queue.push_back(t);
        }
    }
    while let Some(t) = queue.pop_front() {
        let u = dir[slot(t).unwrap_or(0)].unwrap_or([T::zero(); 3]);
        let lv = c.local_vertex(t, v).unwrap_or(0);
        for k in (0..4).filter(|&k| k != lv) {
            let n = c.neighbor_across(t, k);
            let Some(sn) = slot(n) else { continue };
            if dir[sn].is_some() {
                continue;
            }
            dir[sn] = Some(unfold(c, geom, t, n, k, v, u));
            queue.push_back(n);
        }
    }

    let mut total = T::zero();
    for (s, &t) in star.iter().enumerate() {
        let Some(u) = dir[s] else { continue };
        let lv = c.local_vertex(t, v).unwrap_or(0);
        let p = &geom.tets[t].points;
        for flag in tet_pieces(p, scheme)[lv].iter() {
            let vol = slab_volume(&flag.points, p[lv], u, T::zero(), len);
            total = total + if flag.signed_volume >= T::zero() { vol } else { -vol };
        }
    }

    let mut leaning = 0;
    for &h in c.edges_at_vertex(v).unwrap_or(&[]) {
        let [a, b] = c.vertices_of_edge(h).unwrap_or([v, v]);
        let other = if a == v { b } else { a };
        if h == e || c.triangle_id(v, w, other).is_some() {
            continue;
        }
        let Some(&t) = c.tets_at_edge(h).ok().and_then(|ts| ts.first()) else { continue };
        let Some(u) = slot(t).and_then(|s| dir[s]) else { continue };
        let p = &geom.tets[t].points;
        let (lv, lo) = (c.local_vertex(t, v).unwrap_or(0), c.local_vertex(t, other).unwrap_or(0));
        let d = vec3::sub(p[lo], p[lv]);
        if vec3::dot(d, u) > T::lit(1e-9) * vec3::norm(d) {
            leaning += 1;
        }
    }
    (total, leaning)
}

/// Carries direction `u` from tetrahedron `t` into neighbor `n` across the face opposite
/// local vertex `k` of `t`; the face contains vertex `v`.
fn unfold<T: Real>(
    c: &SimplicialComplex3,
    geom: &MeshGeometry<T>,
    t: usize,
    n: usize,
    k: usize,
    v: usize,
    u: Vec3<T>,
) -> Vec3<T> {
    let tv = c.tets()[t];
    let face: Vec<usize> = (0..4).filter(|&i| i != k).map(|i| tv[i]).collect();
    let others: Vec<usize> = face.iter().copied().filter(|&x| x != v).collect();
    let (a, b) = (others[0], others[1]);
    let apex_n = c.tets()[n].iter().copied().find(|x| !face.contains(x)).unwrap_or(v);

    let frame = |tet: usize, apex: usize| {
        let p = &geom.tets[tet].points;
        let at = |x: usize| p[c.local_vertex(tet, x).unwrap_or(0)];
        let o = at(v);
        let e1 = vec3::sub(at(a), o);
        let e2 = vec3::sub(at(b), o);
        let mut nrm = vec3::cross(e1, e2);
        nrm = vec3::scale(nrm, T::one() / vec3::norm(nrm));
        if vec3::dot(nrm, vec3::sub(at(apex), o)) < T::zero() {
            nrm = vec3::scale(nrm, -T::one());
        }
        (e1, e2, nrm)
    };
    let (e1, e2, n1) = frame(t, tv[k]);
    let gamma = vec3::dot(u, n1);
    let in_plane = vec3::sub(u, vec3::scale(n1, gamma));
    let (g11, g12, g22) = (vec3::dot(e1, e1), vec3::dot(e1, e2), vec3::dot(e2, e2));
    let (r1, r2) = (vec3::dot(in_plane, e1), vec3::dot(in_plane, e2));
    let det = g11 * g22 - g12 * g12;
    let alpha = (r1 * g22 - r2 * g12) / det;
    let beta = (r2 * g11 - r1 * g12) / det;
    let (f1, f2, n2) = frame(n, apex_n);
    vec3::sub(vec3::add(vec3::scale(f1, alpha), vec3::scale(f2, beta)), vec3::scale(n2, gamma))
}

/// Circumcenter-containment and dual-edge orientation flags.
#[derive(Clone, Debug, PartialEq)]
pub struct DelaunayQuality {
    /// Per tetrahedron: circumcenter inside or on the boundary.
    pub tet_contains_circumcenter: Vec<bool>,
    /// Per triangle: the circumcenters of its two tetrahedra are in the wrong order across it.
    pub triangle_inverted: Vec<bool>,
}

impl DelaunayQuality {
    pub fn outside_count(&self) -> usize {
        self.tet_contains_circumcenter.iter().filter(|&&x| !x).count()
    }

    pub fn inverted_count(&self) -> usize {
        self.triangle_inverted.iter().filter(|&&x| x).count()
    }

    pub fn is_delaunay(&self) -> bool {
        self.inverted_count() == 0
    }
}

pub fn delaunay_quality<T: Real>(c: &SimplicialComplex3, geom: &MeshGeometry<T>) -> DelaunayQuality {
    let tol = T::lit(1e-10);
    let info: Vec<([T; 4], T)> = geom
        .tets
        .iter()
        .map(|g| {
            let p = &g.points;
            let cc = circumcenter_point(p);
            let w = vec3::solve_columns(p[1], p[2], p[3], cc);
            let weights = [T::one() - w[0] - w[1] - w[2], w[0], w[1], w[2]];
            (weights, g.lengths.mean())
        })
        .collect();
    let tet_contains_circumcenter = info
        .iter()
        .map(|(w, _)| w.iter().all(|&x| x >= -tol))
        .collect();
    // Signed distance of a circumcenter to a face, positive toward the opposite vertex:
    // the barycentric weight of that vertex times the vertex's height over the face.
    let height = |t: usize, k: usize| {
        let g = &geom.tets[t];
        let f = crate::simplex::TET_FACES[k];
        let p = &g.points;
        let area2 = vec3::norm(vec3::cross(vec3::sub(p[f[1]], p[f[0]]), vec3::sub(p[f[2]], p[f[0]])));
        T::lit(6.0) * g.volume / area2
    };
    let triangle_inverted = (0..c.n_triangles())
        .map(|f| {
            let ts = c.tets_at_triangle(f).unwrap_or([0, 0]);
            let mut sum = T::zero();
            let mut scale = T::zero();
            for t in ts {
                let k = c.tet_faces(t).iter().position(|&x| x == f).unwrap_or(0);
                sum = sum + info[t].0[k] * height(t, k);
                scale = scale + info[t].1;
            }
            sum < -tol * scale
        })
        .collect();
    DelaunayQuality {
        tet_contains_circumcenter,
        triangle_inverted,
    }
}
