//! Generators for the sphere, cylinder, flat torus, Gowdy and Nil test triangulations.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::chart::{smooth_curvatures, Point, Sphere3};
use super::geodesic::{average_curvatures_along_geodesic, GeodesicConfig};
use super::periodic::{shoot_edges, Lattice, Universal};
use super::{chart_volume, GeneratedTriangulation, ManifoldChart, SmoothReference};
use crate::complex::total_volume;
use crate::{CurvatureOptions, DualScheme, EdgeLengthMetric, EdgeVolumeMethod, Error, Result, SimplicialComplex3};

const GOLDEN: f64 = 1.618_033_988_749_895;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GowdyStyle {
    /// Unit cubes stacked along θ.
    Cubic,
    /// Body-centred lattice of isosceles tetrahedra, skewed linearly in θ.
    Isosceles,
}

fn default_amplitude() -> f64 {
    0.1
}

fn default_true() -> bool {
    true
}

/// Declarative description of a generated triangulation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "manifold", rename_all = "snake_case")]
pub enum GeneratorConfig {
    Sphere {
        cells: usize,
        radius: f64,
    },
    Cylinder {
        radius: f64,
        b_len: f64,
        rings: usize,
    },
    FlatTorus {
        n: usize,
        spacing: f64,
    },
    Gowdy {
        blocks: usize,
        style: GowdyStyle,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
    Nil3 {
        blocks: usize,
        #[serde(default = "default_true")]
        twisted: bool,
    },
}

pub fn generate(cfg: &GeneratorConfig) -> Result<GeneratedTriangulation> {
    match *cfg {
        GeneratorConfig::Sphere { cells, radius } => generate_sphere_cell(cells, radius),
        GeneratorConfig::Cylinder { radius, b_len, rings } => generate_cylinder(radius, b_len, rings),
        GeneratorConfig::FlatTorus { n, spacing } => generate_flat_torus(n, spacing),
        GeneratorConfig::Gowdy { blocks, style, amplitude } => generate_gowdy(blocks, style, amplitude),
        GeneratorConfig::Nil3 { blocks, twisted: true } => generate_nil3(blocks),
        GeneratorConfig::Nil3 { blocks, twisted: false } => generate_nil3_flat(blocks),
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{name} must be positive, got {x}")))
    }
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn is_even(p: &[usize; 4]) -> bool {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Unit vertices in R⁴ of the regular 5-, 16- or 600-cell.
pub fn polytope_vertices(cells: usize) -> Result<Vec<[f64; 4]>> {
    match cells {
        5 => {
            // Cholesky factor of the Gram matrix with off-diagonal −1/4.
            let mut l = [[0.0f64; 4]; 4];
            for i in 0..4 {
                for j in 0..=i {
                    let g = if i == j { 1.0 } else { -0.25 };
                    let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
                    l[i][j] = if i == j { (g - s).sqrt() } else { (g - s) / l[j][j] };
                }
            }
            let mut v: Vec<[f64; 4]> = l.to_vec();
            v.push(std::array::from_fn(|k| -(0..4).map(|i| l[i][k]).sum::<f64>()));
            Ok(v)
        }
        16 => Ok((0..8)
            .map(|i| {
                let mut v = [0.0; 4];
                v[i / 2] = if i % 2 == 0 { 1.0 } else { -1.0 };
                v
            })
            .collect()),
        600 => {
            let mut v = Vec::with_capacity(120);
            for i in 0..8 {
                let mut p = [0.0; 4];
                p[i / 2] = if i % 2 == 0 { 1.0 } else { -1.0 };
                v.push(p);
            }
            for s in 0..16 {
                v.push(std::array::from_fn(|k| if s >> k & 1 == 1 { -0.5 } else { 0.5 }));
            }
            let base = [GOLDEN / 2.0, 0.5, 0.5 / GOLDEN, 0.0];
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        for d in 0..4 {
                            let perm = [a, b, c, d];
                            let mut seen = [false; 4];
                            perm.iter().for_each(|&x| seen[x] = true);
                            if !seen.iter().all(|&s| s) || !is_even(&perm) {
                                continue;
                            }
                            for s in 0..8 {
                                let mut p = [0.0; 4];
                                for k in 0..3 {
                                    p[perm[k]] = if s >> k & 1 == 1 { -base[k] } else { base[k] };
                                }
                                v.push(p);
                            }
                        }
                    }
                }
            }
            Ok(v)
        }
        _ => Err(Error::Invalid(format!("no regular 3-sphere triangulation with {cells} cells"))),
    }
}

/// Vertex sets of all 4-cliques in the nearest-neighbour graph.
fn nearest_cliques(points: &[[f64; 4]]) -> Vec<[usize; 4]> {
    let n = points.len();
    let max = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| dot4(&points[i], &points[j]))
        .fold(f64::MIN, f64::max);
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && dot4(&points[i], &points[j]) > max - 1e-9).collect())
        .collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !adj[a][b] {
                continue;
            }
            for c in b + 1..n {
                if !adj[a][c] || !adj[b][c] {
                    continue;
                }
                for d in c + 1..n {
                    if adj[a][d] && adj[b][d] && adj[c][d] {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Regular triangulation of the round 3-sphere of radius `radius`, with every edge scaled so
/// the total volume matches the smooth sphere.
pub fn generate_sphere_cell(cells: usize, radius: f64) -> Result<GeneratedTriangulation> {
    positive("radius", radius)?;
    let points = polytope_vertices(cells)?;
    let tets = nearest_cliques(&points);
    if tets.len() != cells {
        return Err(Error::Topology(format!("expected {cells} tetrahedra, found {}", tets.len())));
    }
    let complex = SimplicialComplex3::new(tets, None)?;
    let length = (12.0 * 2f64.sqrt() * PI * PI * radius.powi(3) / cells as f64).cbrt();
    let metric = EdgeLengthMetric::from_fn(&complex, |_, _| length)?;
    let orbits = complex.orbits();
    let smooth_lengths: Vec<f64> = orbits
        .edge_reps
        .iter()
        .map(|&e| {
            let [a, b] = complex.edges()[e];
            radius * dot4(&points[a], &points[b]).clamp(-1.0, 1.0).acos()
        })
        .collect();
    let k = 1.0 / (radius * radius);
    Ok(GeneratedTriangulation {
        name: format!("sphere-{cells}-cell"),
        chart: ManifoldChart::Sphere { radius },
        labeling: None,
        metric,
        coords: points.iter().map(|&p| Sphere3::coordinates(p)).collect(),
        edge_labels: vec!["edge".into(); orbits.edge_reps.len()],
        rescale: length / smooth_lengths[0],
        smooth_lengths,
        geodesics: Vec::new(),
        smooth_volume: 2.0 * PI * PI * radius.powi(3),
        reference: SmoothReference {
            vertex_scalar: vec![6.0 * k; orbits.vertex_reps.len()],
            edge_sectional: vec![k; orbits.edge_reps.len()],
            edge_ricci: vec![2.0 * k; orbits.edge_reps.len()],
        },
        options: CurvatureOptions {
            scheme: DualScheme::Voronoi,
            method: EdgeVolumeMethod::SolidAngle,
        },
        complex,
    })
}

fn icosahedron() -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let mut v = Vec::with_capacity(12);
    for s in 0..4 {
        let a = if s & 1 == 1 { -1.0 } else { 1.0 };
        let b = if s & 2 == 2 { -GOLDEN } else { GOLDEN };
        v.push([0.0, a, b]);
        v.push([a, b, 0.0]);
        v.push([b, 0.0, a]);
    }
    let near = |i: usize, j: usize| {
        let d: f64 = (0..3).map(|k| (v[i][k] - v[j][k]).powi(2)).sum();
        (d - 4.0).abs() < 1e-9
    };
    let mut faces = Vec::with_capacity(20);
    for a in 0..12 {
        for b in a + 1..12 {
            for c in b + 1..12 {
                if near(a, b) && near(a, c) && near(b, c) {
                    faces.push([a, b, c]);
                }
            }
        }
    }
    (v, faces)
}

/// Periodic stack of icosahedral prisms approximating `S²(radius) × S¹(rings · b_len)`.
///
/// Each prism splits into three tetrahedra whose side diagonals run from the lower-indexed
/// vertex on one ring to the higher-indexed vertex on the next, so neighbouring prisms agree.
pub fn generate_cylinder(radius: f64, b_len: f64, rings: usize) -> Result<GeneratedTriangulation> {
    positive("radius", radius)?;
    positive("b_len", b_len)?;
    if rings < 3 {
        return Err(Error::Invalid(format!("cylinder needs at least 3 rings, got {rings}")));
    }
    let (ico, faces) = icosahedron();
    let id = |ring: usize, i: usize| (ring % rings) * 12 + i;
    let mut tets = Vec::with_capacity(60 * rings);
    for k in 0..rings {
        for &[u, v, w] in &faces {
            let (u0, v0, w0) = (id(k, u), id(k, v), id(k, w));
            let (u1, v1, w1) = (id(k + 1, u), id(k + 1, v), id(k + 1, w));
            tets.push([u0, v0, w0, w1]);
            tets.push([u0, v0, v1, w1]);
            tets.push([u0, u1, v1, w1]);
        }
    }
    let complex = SimplicialComplex3::new(tets, None)?;
    let a = 2.0 * (PI / (5.0 * 3f64.sqrt())).sqrt() * radius;
    let c = (a * a + b_len * b_len).sqrt();
    let class = |x: usize, y: usize| {
        if x / 12 == y / 12 {
            'a'
        } else if x % 12 == y % 12 {
            'b'
        } else {
            'c'
        }
    };
    let metric = EdgeLengthMetric::from_fn(&complex, |x, y| match class(x, y) {
        'a' => a,
        'b' => b_len,
        _ => c,
    })?;
    let orbits = complex.orbits();
    let k = 1.0 / (radius * radius);
    let cos2 = b_len * b_len / (c * c);
    let mut labels = Vec::new();
    let (mut lengths, mut sectional, mut ricci) = (Vec::new(), Vec::new(), Vec::new());
    for &e in &orbits.edge_reps {
        let [x, y] = complex.edges()[e];
        let cl = class(x, y);
        labels.push(cl.to_string());
        let (l, ks, rc) = match cl {
            'a' => (a, 0.0, k),
            'b' => (b_len, k, 0.0),
            _ => (c, cos2 * k, (1.0 - cos2) * k),
        };
        lengths.push(l);
        sectional.push(ks);
        ricci.push(rc);
    }
    let coords = (0..complex.n_vertices())
        .map(|v| {
            let p = ico[v % 12];
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            [(p[2] / n).acos(), p[1].atan2(p[0]), (v / 12) as f64 * b_len]
        })
        .collect();
    Ok(GeneratedTriangulation {
        name: format!("cylinder-{rings}"),
        chart: ManifoldChart::Cylinder { radius },
        labeling: None,
        metric,
        coords,
        edge_labels: labels,
        smooth_lengths: lengths,
        geodesics: Vec::new(),
        rescale: 1.0,
        smooth_volume: 4.0 * PI * radius * radius * rings as f64 * b_len,
        reference: SmoothReference {
            vertex_scalar: vec![2.0 * k; orbits.vertex_reps.len()],
            edge_sectional: sectional,
            edge_ricci: ricci,
        },
        options: CurvatureOptions {
            scheme: DualScheme::Voronoi,
            method: EdgeVolumeMethod::HalfVertex,
        },
        complex,
    })
}

/// Flat 3-torus of `n³` cubes, each split into six tetrahedra along its main diagonal.
pub fn generate_flat_torus(n: usize, spacing: f64) -> Result<GeneratedTriangulation> {
    positive("spacing", spacing)?;
    if n < 3 {
        return Err(Error::Invalid(format!("flat torus needs at least 3 cubes per side, got {n}")));
    }
    let ni = n as i64;
    let id = |p: [i64; 3]| -> usize {
        let w = p.map(|x| x.rem_euclid(ni) as usize);
        w[0] + n * (w[1] + n * w[2])
    };
    let unit = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut tets = Vec::with_capacity(6 * n * n * n);
    for z in 0..ni {
        for y in 0..ni {
            for x in 0..ni {
                for t in super::periodic::kuhn_cell([x, y, z], unit) {
                    tets.push(t.map(id));
                }
            }
        }
    }
    let complex = SimplicialComplex3::new(tets, None)?;
    let coord = |v: usize| [v % n, (v / n) % n, v / (n * n)];
    let metric = EdgeLengthMetric::from_fn(&complex, |a, b| {
        let (pa, pb) = (coord(a), coord(b));
        let d2: f64 = (0..3)
            .map(|k| {
                let d = (pb[k] as i64 - pa[k] as i64).rem_euclid(ni);
                let d = d.min(ni - d) as f64;
                d * d
            })
            .sum();
        spacing * d2.sqrt()
    })?;
    let orbits = complex.orbits();
    let smooth_lengths = orbits.edge_reps.iter().map(|&e| metric.length(e)).collect();
    Ok(GeneratedTriangulation {
        name: format!("flat-torus-{n}"),
        chart: ManifoldChart::Euclidean,
        labeling: None,
        coords: (0..complex.n_vertices()).map(|v| coord(v).map(|x| x as f64 * spacing)).collect(),
        edge_labels: orbits.edge_reps.iter().map(|&e| format!("{:?}", complex.edges()[e])).collect(),
        smooth_lengths,
        geodesics: Vec::new(),
        rescale: 1.0,
        smooth_volume: (n as f64 * spacing).powi(3),
        reference: SmoothReference {
            vertex_scalar: vec![0.0; orbits.vertex_reps.len()],
            edge_sectional: vec![0.0; orbits.edge_reps.len()],
            edge_ricci: vec![0.0; orbits.edge_reps.len()],
        },
        options: CurvatureOptions::default(),
        metric,
        complex,
    })
}

struct PeriodicLayout<'a, F> {
    name: String,
    chart: ManifoldChart,
    lattice: Lattice,
    position: F,
    box_hi: Point,
    options: CurvatureOptions,
    geodesic: &'a GeodesicConfig,
}

fn periodic<F>(layout: PeriodicLayout<'_, F>) -> Result<GeneratedTriangulation>
where
    F: Fn(Universal) -> Point + Sync,
{
    let lattice = &layout.lattice;
    let (complex, labeling, keys) = lattice.build()?;
    let orbits = complex.orbits();
    // Orbit numbering in the complex follows the smallest covering edge, not the key order.
    let keys: Vec<_> = orbits
        .edge_reps
        .iter()
        .map(|&e| {
            let [a, b] = complex.edges()[e];
            keys[labeling.edge_orbit[&(a, b)]]
        })
        .collect();
    let chart = layout.chart;
    let geodesics = shoot_edges(&chart, &layout.position, &keys, layout.geodesic)?;
    let smooth_lengths: Vec<f64> = geodesics.iter().map(|g| g.length).collect();
    let raw = EdgeLengthMetric::from_orbit_lengths(&complex, &smooth_lengths)?;
    let smooth_volume = chart_volume(&chart, [0.0; 3], layout.box_hi, 16);
    let rescale = (smooth_volume / total_volume(&complex, &raw)?).cbrt();
    let metric = raw.scaled(rescale);
    let coords: Vec<Point> = (0..complex.n_vertices())
        .map(|v| (layout.position)(lattice.covering_vertex(v)))
        .collect();
    let vertex_scalar = orbits
        .vertex_reps
        .iter()
        .map(|&v| smooth_curvatures(&chart, coords[v], [1.0, 0.0, 0.0]).map(|c| c.scalar))
        .collect::<Result<Vec<_>>>()?;
    let averages = geodesics
        .iter()
        .map(|g| average_curvatures_along_geodesic(&chart, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratedTriangulation {
        name: layout.name,
        chart,
        labeling: Some(labeling),
        metric,
        coords,
        edge_labels: keys.iter().map(|(a, b)| format!("{a:?}->{b:?}")).collect(),
        smooth_lengths,
        geodesics,
        rescale,
        smooth_volume,
        reference: SmoothReference {
            vertex_scalar,
            edge_sectional: averages.iter().map(|a| a.1).collect(),
            edge_ricci: averages.iter().map(|a| a.0).collect(),
        },
        options: layout.options,
        complex,
    })
}

/// Gowdy plane-wave metric on `T³`, one cell per θ-level in the fundamental domain.
///
/// The cubic style uses cells of side `Δ = 2π / blocks`. The isosceles style steps
/// `(−Δ/√2, 0, Δ)` per level with in-level periods `(Δ/√2, ±Δ, 0)`, which makes every
/// tetrahedron congruent in the flat limit, with edges `√1.5 Δ` and `√2 Δ`.
pub fn generate_gowdy(blocks: usize, style: GowdyStyle, amplitude: f64) -> Result<GeneratedTriangulation> {
    if blocks == 0 {
        return Err(Error::Invalid("Gowdy needs at least one block".into()));
    }
    let d = 2.0 * PI / blocks as f64;
    let chart = ManifoldChart::Gowdy { f: 1.0, amplitude, a: 0.0 };
    let cfg = GeodesicConfig::default();
    match style {
        GowdyStyle::Cubic => periodic(PeriodicLayout {
            name: format!("gowdy-cubic-{blocks}"),
            chart,
            lattice: Lattice::cubic(blocks),
            position: move |u: Universal| [u[1] as f64 * d, u[2] as f64 * d, u[0] as f64 * d],
            box_hi: [d, d, 2.0 * PI],
            options: CurvatureOptions {
                scheme: DualScheme::Barycentric,
                method: EdgeVolumeMethod::Clipped,
            },
            geodesic: &cfg,
        }),
        GowdyStyle::Isosceles => periodic(PeriodicLayout {
            name: format!("gowdy-isosceles-{blocks}"),
            chart,
            lattice: Lattice::body_centred(blocks)?,
            position: move |u: Universal| {
                let h = d / 2f64.sqrt();
                let (r, p, q) = (u[0] as f64, u[1] as f64, u[2] as f64);
                [h * (p + q - r), d * (p - q), d * r]
            },
            box_hi: [2f64.sqrt() * d, d, 2.0 * PI],
            options: CurvatureOptions {
                scheme: DualScheme::Voronoi,
                method: EdgeVolumeMethod::Clipped,
            },
            geodesic: &cfg,
        }),
    }
}

fn nil_position(blocks: usize) -> impl Fn(Universal) -> Point + Sync {
    let n = blocks as f64;
    move |u: Universal| [u[0] as f64 / n, u[1] as f64 / n, u[2] as f64 / n]
}

/// Nil geometry on the quotient by `x ↦ x + 1, z ↦ z + y` and translations of `y`, `z` by
/// `1 / blocks`.
pub fn generate_nil3(blocks: usize) -> Result<GeneratedTriangulation> {
    if blocks == 0 {
        return Err(Error::Invalid("Nil needs at least one block".into()));
    }
    let l = 1.0 / blocks as f64;
    periodic(PeriodicLayout {
        name: format!("nil3-{blocks}"),
        chart: ManifoldChart::Nil3,
        lattice: Lattice::sheared(blocks),
        position: nil_position(blocks),
        box_hi: [1.0, l, l],
        options: CurvatureOptions {
            scheme: DualScheme::Barycentric,
            method: EdgeVolumeMethod::Clipped,
        },
        geodesic: &GeodesicConfig::default(),
    })
}

/// Flat comparison for [`generate_nil3`]: Euclidean metric, untwisted identification.
pub fn generate_nil3_flat(blocks: usize) -> Result<GeneratedTriangulation> {
    if blocks == 0 {
        return Err(Error::Invalid("Nil needs at least one block".into()));
    }
    let l = 1.0 / blocks as f64;
    periodic(PeriodicLayout {
        name: format!("nil3-flat-{blocks}"),
        chart: ManifoldChart::Euclidean,
        lattice: Lattice::cubic(blocks),
        position: nil_position(blocks),
        box_hi: [1.0, l, l],
        options: CurvatureOptions {
            scheme: DualScheme::Barycentric,
            method: EdgeVolumeMethod::Clipped,
        },
        geodesic: &GeodesicConfig::default(),
    })
}
