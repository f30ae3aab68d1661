//! Simplicial 3-manifolds: topology, covering-space orbits, edge-length metrics and deficit angles.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::simplex::{
    dihedral_angles_embedded, embed_tet, solid_angles_from_dihedrals, tet_volume, TetLengths,
    TET_EDGES, TET_FACES,
};
use crate::vec3::Vec3;
use crate::{Error, Real, Result};

/// Identification of a covering-space complex with its quotient.
///
/// `vertex_orbit[v]` is the fundamental-domain vertex of covering vertex `v`; `edge_orbit`
/// maps canonical covering edges `(min, max)` to a fundamental edge id. Orbit ids may be
/// arbitrary; they are renumbered by representative when the complex is built.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuotientLabeling {
    pub vertex_orbit: Vec<usize>,
    pub edge_orbit: BTreeMap<(usize, usize), usize>,
    /// Human-readable generators of the deck group used for the covering.
    pub deck: Vec<String>,
}

/// Orbit structure of a complex; the identity when no labeling is supplied.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbits {
    pub vertex_orbit: Vec<usize>,
    pub edge_orbit: Vec<usize>,
    /// Smallest vertex id in each vertex orbit.
    pub vertex_reps: Vec<usize>,
    /// Lexicographically smallest edge in each edge orbit.
    pub edge_reps: Vec<usize>,
    /// Number of covering copies of the fundamental domain.
    pub sheets: usize,
    pub deck: Vec<String>,
}

/// Closed simplicial 3-manifold given by its tetrahedra.
#[derive(Clone, Debug)]
pub struct SimplicialComplex3 {
    n_vertices: usize,
    tets: Vec<[usize; 4]>,
    edges: Vec<[usize; 2]>,
    edge_index: HashMap<[usize; 2], usize>,
    triangles: Vec<[usize; 3]>,
    triangle_index: HashMap<[usize; 3], usize>,
    tet_edges: Vec<[usize; 6]>,
    tet_faces: Vec<[usize; 4]>,
    edges_at_vertex: Vec<Vec<usize>>,
    tets_at_vertex: Vec<Vec<usize>>,
    tets_at_edge: Vec<Vec<usize>>,
    triangles_at_edge: Vec<Vec<usize>>,
    tets_at_triangle: Vec<[usize; 2]>,
    orbits: Orbits,
}

fn sorted2(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

impl SimplicialComplex3 {
    /// Builds the complex, derives edges and triangles, and checks the manifold conditions.
    pub fn new(tets: Vec<[usize; 4]>, labeling: Option<&QuotientLabeling>) -> Result<Self> {
        if tets.is_empty() {
            return Err(Error::Invalid("empty tetrahedron list".into()));
        }
        let n_vertices = tets.iter().flatten().copied().max().unwrap_or(0) + 1;
        for (i, t) in tets.iter().enumerate() {
            for a in 0..4 {
                for b in a + 1..4 {
                    if t[a] == t[b] {
                        return Err(Error::Topology(format!(
                            "tetrahedron {i} {t:?} repeats vertex {}",
                            t[a]
                        )));
                    }
                }
            }
        }

        let mut edge_set: Vec<[usize; 2]> = tets
            .iter()
            .flat_map(|t| TET_EDGES.iter().map(move |[a, b]| sorted2(t[*a], t[*b])))
            .collect();
        edge_set.sort_unstable();
        edge_set.dedup();
        let edge_index: HashMap<_, _> = edge_set.iter().enumerate().map(|(i, e)| (*e, i)).collect();

        let mut tri_set: Vec<[usize; 3]> = tets
            .iter()
            .flat_map(|t| TET_FACES.iter().map(move |f| sorted3([t[f[0]], t[f[1]], t[f[2]]])))
            .collect();
        tri_set.sort_unstable();
        tri_set.dedup();
        let triangle_index: HashMap<_, _> = tri_set.iter().enumerate().map(|(i, t)| (*t, i)).collect();

        let mut tet_edges = Vec::with_capacity(tets.len());
        let mut tet_faces = Vec::with_capacity(tets.len());
        let mut edges_at_vertex = vec![Vec::new(); n_vertices];
        let mut tets_at_vertex = vec![Vec::new(); n_vertices];
        let mut tets_at_edge = vec![Vec::new(); edge_set.len()];
        let mut triangles_at_edge = vec![Vec::new(); edge_set.len()];
        let mut tri_tets: Vec<Vec<usize>> = vec![Vec::new(); tri_set.len()];

        for (ti, t) in tets.iter().enumerate() {
            let mut te = [0; 6];
            for (k, [a, b]) in TET_EDGES.iter().enumerate() {
                te[k] = edge_index[&sorted2(t[*a], t[*b])];
                tets_at_edge[te[k]].push(ti);
            }
            let mut tf = [0; 4];
            for (k, f) in TET_FACES.iter().enumerate() {
                tf[k] = triangle_index[&sorted3([t[f[0]], t[f[1]], t[f[2]]])];
                tri_tets[tf[k]].push(ti);
            }
            for &v in t {
                tets_at_vertex[v].push(ti);
            }
            tet_edges.push(te);
            tet_faces.push(tf);
        }
        for (ei, [a, b]) in edge_set.iter().enumerate() {
            edges_at_vertex[*a].push(ei);
            edges_at_vertex[*b].push(ei);
        }
        for (fi, [a, b, c]) in tri_set.iter().enumerate() {
            for (x, y) in [(a, b), (a, c), (b, c)] {
                triangles_at_edge[edge_index[&[*x, *y]]].push(fi);
            }
        }
        for (v, list) in tets_at_vertex.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::Topology(format!("vertex {v} belongs to no tetrahedron")));
            }
        }

        let mut tets_at_triangle = Vec::with_capacity(tri_set.len());
        for (fi, list) in tri_tets.iter().enumerate() {
            if list.len() != 2 {
                return Err(Error::Topology(format!(
                    "triangle {:?} is shared by {} tetrahedra (expected 2)",
                    tri_set[fi],
                    list.len()
                )));
            }
            tets_at_triangle.push([list[0], list[1]]);
        }

        for (ei, list) in tets_at_edge.iter().enumerate() {
            let [a, b] = edge_set[ei];
            let link: Vec<[usize; 2]> = list
                .iter()
                .map(|&ti| {
                    let mut rest = tets[ti].iter().copied().filter(|&x| x != a && x != b);
                    [rest.next().unwrap_or(a), rest.next().unwrap_or(b)]
                })
                .collect();
            if !is_single_cycle(&link) {
                return Err(Error::Topology(format!(
                    "link of edge ({a},{b}) is not a single cycle"
                )));
            }
        }

        let orbits = build_orbits(n_vertices, &edge_set, &edge_index, labeling)?;

        Ok(SimplicialComplex3 {
            n_vertices,
            tets,
            edges: edge_set,
            edge_index,
            triangles: tri_set,
            triangle_index,
            tet_edges,
            tet_faces,
            edges_at_vertex,
            tets_at_vertex,
            tets_at_edge,
            triangles_at_edge,
            tets_at_triangle,
            orbits,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    /// Canonical sorted vertex pairs, in lexicographic order.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn orbits(&self) -> &Orbits {
        &self.orbits
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&sorted2(a, b)).copied()
    }

    pub fn triangle_id(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        self.triangle_index.get(&sorted3([a, b, c])).copied()
    }

    pub fn vertices_of_edge(&self, e: usize) -> Result<[usize; 2]> {
        self.edges
            .get(e)
            .copied()
            .ok_or_else(|| Error::NotFound(format!("edge {e}")))
    }

    pub fn edges_at_vertex(&self, v: usize) -> Result<&[usize]> {
        self.edges_at_vertex
            .get(v)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::NotFound(format!("vertex {v}")))
    }

    pub fn tets_at_vertex(&self, v: usize) -> Result<&[usize]> {
        self.tets_at_vertex
            .get(v)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::NotFound(format!("vertex {v}")))
    }

    pub fn tets_at_edge(&self, e: usize) -> Result<&[usize]> {
        self.tets_at_edge
            .get(e)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::NotFound(format!("edge {e}")))
    }

    pub fn triangles_at_edge(&self, e: usize) -> Result<&[usize]> {
        self.triangles_at_edge
            .get(e)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::NotFound(format!("edge {e}")))
    }

    pub fn tets_at_triangle(&self, f: usize) -> Result<[usize; 2]> {
        self.tets_at_triangle
            .get(f)
            .copied()
            .ok_or_else(|| Error::NotFound(format!("triangle {f}")))
    }

    /// Edge ids of a tetrahedron in local [`TET_EDGES`] order.
    pub fn tet_edges(&self, t: usize) -> &[usize; 6] {
        &self.tet_edges[t]
    }

    /// Triangle ids of a tetrahedron; entry `k` is the face opposite local vertex `k`.
    pub fn tet_faces(&self, t: usize) -> &[usize; 4] {
        &self.tet_faces[t]
    }

    /// Local index of vertex `v` inside tetrahedron `t`.
    pub fn local_vertex(&self, t: usize, v: usize) -> Option<usize> {
        self.tets[t].iter().position(|&x| x == v)
    }

    /// The tetrahedron across the face opposite local vertex `k` of `t`.
    pub fn neighbor_across(&self, t: usize, k: usize) -> usize {
        let [a, b] = self.tets_at_triangle[self.tet_faces[t][k]];
        if a == t {
            b
        } else {
            a
        }
    }
}

fn is_single_cycle(link: &[[usize; 2]]) -> bool {
    if link.len() < 3 {
        return false;
    }
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &[c, d] in link {
        adj.entry(c).or_default().push(d);
        adj.entry(d).or_default().push(c);
    }
    if adj.len() != link.len() || adj.values().any(|n| n.len() != 2) {
        return false;
    }
    let start = link[0][0];
    let (mut prev, mut cur) = (start, link[0][1]);
    let mut steps = 1;
    while cur != start {
        let n = &adj[&cur];
        let next = if n[0] == prev { n[1] } else { n[0] };
        prev = cur;
        cur = next;
        steps += 1;
        if steps > link.len() {
            return false;
        }
    }
    steps == link.len()
}

fn build_orbits(
    n_vertices: usize,
    edges: &[[usize; 2]],
    edge_index: &HashMap<[usize; 2], usize>,
    labeling: Option<&QuotientLabeling>,
) -> Result<Orbits> {
    let Some(lab) = labeling else {
        return Ok(Orbits {
            vertex_orbit: (0..n_vertices).collect(),
            edge_orbit: (0..edges.len()).collect(),
            vertex_reps: (0..n_vertices).collect(),
            edge_reps: (0..edges.len()).collect(),
            sheets: 1,
            deck: Vec::new(),
        });
    };
    if lab.vertex_orbit.len() != n_vertices {
        return Err(Error::Invalid(format!(
            "labeling covers {} vertices, complex has {n_vertices}",
            lab.vertex_orbit.len()
        )));
    }
    if lab.edge_orbit.len() != edges.len() {
        return Err(Error::Invalid(format!(
            "labeling covers {} edges, complex has {}",
            lab.edge_orbit.len(),
            edges.len()
        )));
    }
    let (vertex_orbit, vertex_reps) = renumber(&lab.vertex_orbit);
    let mut raw_edge = vec![0usize; edges.len()];
    for (&(a, b), &o) in &lab.edge_orbit {
        let e = edge_index
            .get(&sorted2(a, b))
            .ok_or_else(|| Error::Invalid(format!("labeling names unknown edge {a}-{b}")))?;
        raw_edge[*e] = o;
    }
    let (edge_orbit, edge_reps) = renumber(&raw_edge);

    // Members of an edge orbit must join the same pair of vertex orbits.
    let key = |e: usize| {
        let [a, b] = edges[e];
        let (x, y) = (vertex_orbit[a], vertex_orbit[b]);
        if x < y {
            (x, y)
        } else {
            (y, x)
        }
    };
    for (e, &o) in edge_orbit.iter().enumerate() {
        if key(e) != key(edge_reps[o]) {
            return Err(Error::Invalid(format!(
                "edge {:?} and its orbit representative {:?} join different vertex orbits",
                edges[e], edges[edge_reps[o]]
            )));
        }
    }
    let n_orbits = vertex_reps.len();
    if n_vertices % n_orbits != 0 {
        return Err(Error::Invalid(format!(
            "{n_vertices} covering vertices do not split evenly into {n_orbits} orbits"
        )));
    }
    Ok(Orbits {
        vertex_orbit,
        edge_orbit,
        vertex_reps,
        edge_reps,
        sheets: n_vertices / n_orbits,
        deck: lab.deck.clone(),
    })
}

/// Renumbers arbitrary labels densely in order of their smallest member.
fn renumber(raw: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut map: HashMap<usize, usize> = HashMap::new();
    let mut reps = Vec::new();
    let ids = raw
        .iter()
        .enumerate()
        .map(|(i, r)| {
            *map.entry(*r).or_insert_with(|| {
                reps.push(i);
                reps.len() - 1
            })
        })
        .collect();
    (ids, reps)
}

/// Positive length for every edge of a complex.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeLengthMetric<T> {
    lengths: Vec<T>,
}

impl<T: Real> EdgeLengthMetric<T> {
    /// Validates positivity, orbit consistency and every tetrahedron.
    pub fn new(c: &SimplicialComplex3, lengths: Vec<T>) -> Result<Self> {
        if lengths.len() != c.n_edges() {
            return Err(Error::Invalid(format!(
                "{} lengths for {} edges",
                lengths.len(),
                c.n_edges()
            )));
        }
        let orbits = c.orbits();
        for (e, &l) in lengths.iter().enumerate() {
            let rep = lengths[orbits.edge_reps[orbits.edge_orbit[e]]];
            if (l - rep).abs() > T::lit(1e-9) * rep.abs() {
                let [a, b] = c.edges[e];
                return Err(Error::Invalid(format!(
                    "edge {a}-{b} length {} disagrees with its orbit representative {}",
                    l.as_f64(),
                    rep.as_f64()
                )));
            }
        }
        let m = EdgeLengthMetric { lengths };
        m.validate(c)?;
        Ok(m)
    }

    /// Expands one length per edge orbit to the whole covering complex.
    pub fn from_orbit_lengths(c: &SimplicialComplex3, orbit_lengths: &[T]) -> Result<Self> {
        let orbits = c.orbits();
        if orbit_lengths.len() != orbits.edge_reps.len() {
            return Err(Error::Invalid(format!(
                "{} orbit lengths for {} edge orbits",
                orbit_lengths.len(),
                orbits.edge_reps.len()
            )));
        }
        let lengths = orbits.edge_orbit.iter().map(|&o| orbit_lengths[o]).collect();
        Self::new(c, lengths)
    }

    pub fn from_fn(c: &SimplicialComplex3, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let lengths = c.edges().iter().map(|&[a, b]| f(a, b)).collect();
        Self::new(c, lengths)
    }

    pub fn length(&self, e: usize) -> T {
        self.lengths[e]
    }

    pub fn lengths(&self) -> &[T] {
        &self.lengths
    }

    /// Length of each orbit representative.
    pub fn orbit_lengths(&self, c: &SimplicialComplex3) -> Vec<T> {
        c.orbits().edge_reps.iter().map(|&e| self.lengths[e]).collect()
    }

    pub fn scaled(&self, s: T) -> Self {
        EdgeLengthMetric {
            lengths: self.lengths.iter().map(|&l| l * s).collect(),
        }
    }

    pub fn tet_lengths(&self, c: &SimplicialComplex3, t: usize) -> Result<TetLengths<T>> {
        let te = c.tet_edges(t);
        let mut l = [T::zero(); 6];
        for k in 0..6 {
            l[k] = self.lengths[te[k]];
        }
        TetLengths::new(l).map_err(|e| match e {
            Error::InvalidSimplex(msg) => {
                Error::InvalidSimplex(format!("tetrahedron {t} {:?}: {msg}", c.tets[t]))
            }
            other => other,
        })
    }

    pub fn validate(&self, c: &SimplicialComplex3) -> Result<()> {
        for (e, &l) in self.lengths.iter().enumerate() {
            if !(l > T::zero()) || !l.is_finite() {
                let [a, b] = c.edges[e];
                return Err(Error::InvalidSimplex(format!(
                    "edge {a}-{b} has invalid length {}",
                    l.as_f64()
                )));
            }
        }
        (0..c.n_tets()).try_for_each(|t| self.tet_lengths(c, t).map(|_| ()))
    }
}

/// Embedded geometry of one tetrahedron.
#[derive(Clone, Debug)]
pub struct TetGeometry<T> {
    pub lengths: TetLengths<T>,
    pub points: [Vec3<T>; 4],
    pub volume: T,
    pub dihedral: [T; 6],
    pub solid: [T; 4],
}

impl<T: Real> TetGeometry<T> {
    pub fn new(lengths: TetLengths<T>) -> Self {
        let points = embed_tet(&lengths);
        let dihedral = dihedral_angles_embedded(&points);
        TetGeometry {
            lengths,
            points,
            volume: tet_volume(&lengths),
            dihedral,
            solid: solid_angles_from_dihedrals(&dihedral),
        }
    }
}

/// Per-tetrahedron embeddings and per-edge deficit angles of a metric.
#[derive(Clone, Debug)]
pub struct MeshGeometry<T> {
    pub tets: Vec<TetGeometry<T>>,
    pub lengths: Vec<T>,
    pub deficits: Vec<T>,
}

impl<T: Real> MeshGeometry<T> {
    pub fn new(c: &SimplicialComplex3, m: &EdgeLengthMetric<T>) -> Result<Self> {
        let tets = (0..c.n_tets())
            .into_par_iter()
            .map(|t| m.tet_lengths(c, t).map(TetGeometry::new))
            .collect::<Result<Vec<_>>>()?;
        let deficits = (0..c.n_edges())
            .map(|e| deficit_from_tets(c, &tets, e))
            .collect();
        Ok(MeshGeometry {
            tets,
            lengths: m.lengths().to_vec(),
            deficits,
        })
    }

    /// Covering-space volume (all tetrahedra).
    pub fn covering_volume(&self) -> T {
        self.tets.iter().map(|t| t.volume).sum()
    }
}

fn deficit_from_tets<T: Real>(c: &SimplicialComplex3, tets: &[TetGeometry<T>], e: usize) -> T {
    let total: T = c.tets_at_edge[e]
        .iter()
        .map(|&t| {
            let k = c.tet_edges[t].iter().position(|&x| x == e).unwrap_or(0);
            tets[t].dihedral[k]
        })
        .sum();
    T::lit(2.0) * T::PI() - total
}

/// `2π` minus the sum of dihedral angles around edge `e`; may be negative.
pub fn deficit_angle<T: Real>(c: &SimplicialComplex3, m: &EdgeLengthMetric<T>, e: usize) -> Result<T> {
    let tets = c.tets_at_edge(e)?;
    let mut total = T::zero();
    for &t in tets {
        let g = TetGeometry::new(m.tet_lengths(c, t)?);
        let k = c.tet_edges[t].iter().position(|&x| x == e).unwrap_or(0);
        total = total + g.dihedral[k];
    }
    Ok(T::lit(2.0) * T::PI() - total)
}

/// Volume of the fundamental domain: the covering total divided by the number of sheets.
pub fn total_volume<T: Real>(c: &SimplicialComplex3, m: &EdgeLengthMetric<T>) -> Result<T> {
    let mut v = T::zero();
    for t in 0..c.n_tets() {
        v = v + tet_volume(&m.tet_lengths(c, t)?);
    }
    Ok(v / T::from_usize(c.orbits().sheets).unwrap_or_else(T::one))
}
