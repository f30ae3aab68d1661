//! Lattice triangulations of quotients of R³ by a deck group `⟨S, T_J, T_K⟩`.
//!
//! Universal vertices are integer triples `(I, J, K)` with `I` the level along the wrapped
//! axis. `T_J` and `T_K` add one to `J` and `K`; `S` advances `I` by the number of levels
//! and may shear the other two. The complex is built on the finite covering by
//! `H = ⟨S^c, T_J³, T_K³⟩` with `c = ⌈3 / levels⌉`, which keeps every edge and triangle
//! distinct, together with the labeling of the fundamental orbits.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::chart::{Point, SmoothChart};
use super::geodesic::{geodesic_length, GeodesicConfig, GeodesicRecord};
use crate::complex::QuotientLabeling;
use crate::{Error, Result, SimplicialComplex3};

pub type Universal = [i64; 3];

/// How `S^m` acts on a universal vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wrap {
    /// `(I + mN, J, K)`.
    Straight,
    /// `(I + mN, J + mN/2, K + mN/2)`; needs an even level count.
    Staggered,
    /// `(I + mN, J, K + mJ)`.
    Sheared,
}

impl Wrap {
    pub fn apply(self, u: Universal, m: i64, levels: i64) -> Universal {
        match self {
            Wrap::Straight => [u[0] + m * levels, u[1], u[2]],
            Wrap::Staggered => [u[0] + m * levels, u[1] + m * levels / 2, u[2] + m * levels / 2],
            Wrap::Sheared => [u[0] + m * levels, u[1], u[2] + m * u[1]],
        }
    }
}

/// A lattice triangulation: wrap rule, level count and the tetrahedra of one fundamental
/// cell per level, in universal coordinates.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub levels: usize,
    pub wrap: Wrap,
    pub pattern: Vec<[Universal; 4]>,
}

/// Canonical key of an edge orbit: first endpoint moved to `(i, 0, 0)` with `0 ≤ i < N`,
/// minimized over the choice of first endpoint.
pub type EdgeKey = (Universal, Universal);

fn add(a: Universal, b: Universal) -> Universal {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn cube(bits: u8) -> Universal {
    [i64::from(bits >> 2 & 1), i64::from(bits >> 1 & 1), i64::from(bits & 1)]
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Six tetrahedra along the main diagonal of the parallelepiped spanned by `steps` at `base`.
pub fn kuhn_cell(base: Universal, steps: [Universal; 3]) -> Vec<[Universal; 4]> {
    PERMUTATIONS
        .iter()
        .map(|p| {
            let a = base;
            let b = add(a, steps[p[0]]);
            let c = add(b, steps[p[1]]);
            let d = add(c, steps[p[2]]);
            [a, b, c, d]
        })
        .collect()
}

const UNIT_STEPS: [Universal; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

impl Lattice {
    /// Unit cubes split along the `000–111` diagonal at every level.
    pub fn cubic(levels: usize) -> Self {
        let pattern = (0..levels as i64).flat_map(|s| kuhn_cell([s, 0, 0], UNIT_STEPS)).collect();
        Lattice { levels, wrap: Wrap::Straight, pattern }
    }

    /// Cube combinatorics with a staggered wrap. Mapped so that the unit steps become
    /// nearest-neighbour vectors of a body-centred cubic lattice, every tetrahedron is the
    /// same isosceles tetrahedron and the levels are its (110) planes.
    pub fn body_centred(levels: usize) -> Result<Self> {
        if levels % 2 == 1 {
            return Err(Error::Invalid(format!("body-centred lattice needs an even level count, got {levels}")));
        }
        let pattern = (0..levels as i64).flat_map(|s| kuhn_cell([s, 0, 0], UNIT_STEPS)).collect();
        Ok(Lattice { levels, wrap: Wrap::Staggered, pattern })
    }

    /// Cubes with a sheared wrap. Level 0 triangulates its lower face along the
    /// anti-diagonal so that it matches the sheared image of the top level.
    pub fn sheared(levels: usize) -> Self {
        let first = [
            [0b000, 0b100, 0b101, 0b111],
            [0b000, 0b100, 0b110, 0b111],
            [0b000, 0b010, 0b110, 0b111],
            [0b001, 0b000, 0b101, 0b111],
            [0b001, 0b000, 0b010, 0b111],
            [0b001, 0b011, 0b010, 0b111],
        ]
        .map(|t| t.map(cube));
        let mut pattern = first.to_vec();
        pattern.extend((1..levels as i64).flat_map(|s| kuhn_cell([s, 0, 0], UNIT_STEPS)));
        Lattice { levels, wrap: Wrap::Sheared, pattern }
    }

    fn n(&self) -> i64 {
        self.levels as i64
    }

    /// Power of `S` generating the level part of the covering group.
    pub fn covering_wraps(&self) -> i64 {
        (3 + self.n() - 1) / self.n()
    }

    fn covering_levels(&self) -> i64 {
        self.covering_wraps() * self.n()
    }

    /// Label of the covering vertex under universal vertex `u`.
    pub fn covering_label(&self, u: Universal) -> usize {
        let cl = self.covering_levels();
        let a = u[0].div_euclid(cl);
        let w = self.wrap.apply(u, -a * self.covering_wraps(), self.n());
        let (i, j, k) = (w[0], w[1].rem_euclid(3), w[2].rem_euclid(3));
        (i + cl * (j + 3 * k)) as usize
    }

    /// Canonical universal representative of a covering label.
    pub fn covering_vertex(&self, label: usize) -> Universal {
        let cl = self.covering_levels() as usize;
        let i = label % cl;
        let jk = label / cl;
        [i as i64, (jk % 3) as i64, (jk / 3) as i64]
    }

    pub fn n_covering_vertices(&self) -> usize {
        9 * self.covering_levels() as usize
    }

    pub fn vertex_orbit(&self, u: Universal) -> usize {
        u[0].rem_euclid(self.n()) as usize
    }

    fn normalize(&self, a: Universal, b: Universal) -> EdgeKey {
        let m = a[0].div_euclid(self.n());
        let a1 = self.wrap.apply(a, -m, self.n());
        let b1 = self.wrap.apply(b, -m, self.n());
        let shift = [0, -a1[1], -a1[2]];
        (add(a1, shift), add(b1, shift))
    }

    pub fn edge_key(&self, a: Universal, b: Universal) -> EdgeKey {
        self.normalize(a, b).min(self.normalize(b, a))
    }

    /// Covering tetrahedra, the quotient labeling and one key per edge orbit.
    pub fn build(&self) -> Result<(SimplicialComplex3, QuotientLabeling, Vec<EdgeKey>)> {
        let c = self.covering_wraps();
        let mut tets = Vec::with_capacity(9 * c as usize * self.pattern.len());
        let mut keys: BTreeMap<EdgeKey, usize> = BTreeMap::new();
        let mut edge_keys: BTreeMap<(usize, usize), EdgeKey> = BTreeMap::new();
        for wraps in 0..c {
            for k in 0..3 {
                for j in 0..3 {
                    for t in &self.pattern {
                        let u = t.map(|p| add(self.wrap.apply(p, wraps, self.n()), [0, j, k]));
                        let labels = u.map(|p| self.covering_label(p));
                        for a in 0..4 {
                            for b in a + 1..4 {
                                let key = self.edge_key(u[a], u[b]);
                                let next = keys.len();
                                keys.entry(key).or_insert(next);
                                let pair = (labels[a].min(labels[b]), labels[a].max(labels[b]));
                                if let Some(old) = edge_keys.insert(pair, key) {
                                    if old != key {
                                        return Err(Error::Topology(format!(
                                            "covering edge {}-{} joins two different edge orbits",
                                            pair.0, pair.1
                                        )));
                                    }
                                }
                            }
                        }
                        tets.push(labels);
                    }
                }
            }
        }
        let order: Vec<EdgeKey> = keys.keys().copied().collect();
        let id: BTreeMap<EdgeKey, usize> = order.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let vertex_orbit = (0..self.n_covering_vertices())
            .map(|v| self.vertex_orbit(self.covering_vertex(v)))
            .collect();
        let edge_orbit = edge_keys.iter().map(|(&pair, key)| (pair, id[key])).collect();
        let deck = vec![
            format!("S: {:?} wrap over {} levels", self.wrap, self.levels),
            "T_J: (I, J + 1, K)".into(),
            "T_K: (I, J, K + 1)".into(),
        ];
        let labeling = QuotientLabeling { vertex_orbit, edge_orbit, deck };
        let complex = SimplicialComplex3::new(tets, Some(&labeling))?;
        Ok((complex, labeling, order))
    }
}

/// Geodesic between the chart images of both endpoints of every edge key, in parallel.
pub fn shoot_edges<F>(
    chart: &dyn SmoothChart,
    position: F,
    keys: &[EdgeKey],
    cfg: &GeodesicConfig,
) -> Result<Vec<GeodesicRecord>>
where
    F: Fn(Universal) -> Point + Sync,
{
    keys.par_iter()
        .map(|&(a, b)| {
            geodesic_length(chart, position(a), position(b), cfg).map_err(|e| {
                Error::Solver(format!("edge {a:?}-{b:?}: {e}"))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_counts() {
        for lattice in [Lattice::cubic(1), Lattice::sheared(1), Lattice::body_centred(2).unwrap()] {
            let (c, _, keys) = lattice.build().unwrap();
            let o = c.orbits();
            assert_eq!(o.vertex_reps.len(), lattice.levels);
            assert_eq!(keys.len(), 7 * lattice.levels);
            assert_eq!(o.edge_reps.len(), keys.len());
            assert_eq!(c.n_tets(), o.sheets * 6 * lattice.levels);
        }
    }

    #[test]
    fn covering_labels_round_trip() {
        let l = Lattice::sheared(4);
        for v in 0..l.n_covering_vertices() {
            assert_eq!(l.covering_label(l.covering_vertex(v)), v);
        }
        let u = [5, -7, 11];
        let image = Wrap::Sheared.apply(u, 1, 4);
        assert_eq!(l.vertex_orbit(u), l.vertex_orbit(image));
        assert_eq!(l.edge_key(u, add(u, [1, 1, 0])), l.edge_key(image, Wrap::Sheared.apply(add(u, [1, 1, 0]), 1, 4)));
    }

    #[test]
    fn sheared_wrap_is_a_group_action() {
        let u = [3, 2, -1];
        let once = Wrap::Sheared.apply(Wrap::Sheared.apply(u, 2, 6), -3, 6);
        assert_eq!(once, Wrap::Sheared.apply(u, -1, 6));
    }

    #[test]
    fn odd_body_centred_rejected() {
        assert!(Lattice::body_centred(3).is_err());
    }
}
