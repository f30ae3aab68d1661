//! Euclidean geometry of a single tetrahedron or triangle, determined by edge lengths alone.

use crate::vec3::{self, Vec3};
use crate::{Error, Real, Result};

/// Local vertex pairs of a tetrahedron, in the order used by every edge-indexed array.
pub const TET_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Local faces of a tetrahedron; entry `k` is the face opposite vertex `k`.
pub const TET_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

/// Local index of the edge joining local vertices `a` and `b`.
///
/// # Panics
/// Panics if `a == b` or either index is above 3.
pub fn tet_edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no tetrahedron edge between local vertices {a} and {b}"),
    }
}

/// Edge opposite to local edge `e` (the pair of the remaining two vertices).
pub fn opposite_edge(e: usize) -> usize {
    5 - e
}

/// Relative degeneracy threshold on the Cayley–Menger determinant.
pub const DEGENERACY_THRESHOLD: f64 = 1e-14;

/// Six edge lengths of a non-degenerate Euclidean tetrahedron, indexed as in [`TET_EDGES`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TetLengths<T> {
    l: [T; 6],
}

impl<T: Real> TetLengths<T> {
    /// Validates positivity, every face triangle inequality and the Cayley–Menger determinant.
    pub fn new(l: [T; 6]) -> Result<Self> {
        for (i, &x) in l.iter().enumerate() {
            if !(x > T::zero()) || !x.is_finite() {
                let [a, b] = TET_EDGES[i];
                return Err(Error::InvalidSimplex(format!(
                    "edge ({a},{b}) has non-positive or non-finite length {}",
                    x.as_f64()
                )));
            }
        }
        let t = TetLengths { l };
        for face in TET_FACES {
            let [a, b, c] = face;
            let (x, y, z) = (t.get(a, b), t.get(a, c), t.get(b, c));
            if !(x < y + z && y < x + z && z < x + y) {
                return Err(Error::InvalidSimplex(format!(
                    "face ({a},{b},{c}) violates the triangle inequality: {}, {}, {}",
                    x.as_f64(),
                    y.as_f64(),
                    z.as_f64()
                )));
            }
        }
        let cm = t.cayley_menger();
        let floor = T::lit(DEGENERACY_THRESHOLD) * t.mean().powi(6);
        if !(cm > floor) {
            return Err(Error::InvalidSimplex(format!(
                "Cayley-Menger determinant {:e} below threshold {:e}",
                cm.as_f64(),
                floor.as_f64()
            )));
        }
        Ok(t)
    }

    /// Builds from a function of local vertex pairs `(a, b)` with `a < b`.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut l = [T::zero(); 6];
        for (i, [a, b]) in TET_EDGES.iter().enumerate() {
            l[i] = f(*a, *b);
        }
        Self::new(l)
    }

    pub fn lengths(&self) -> &[T; 6] {
        &self.l
    }

    /// Length between local vertices `a` and `b`.
    pub fn get(&self, a: usize, b: usize) -> T {
        self.l[tet_edge_index(a, b)]
    }

    pub fn mean(&self) -> T {
        self.l.iter().copied().sum::<T>() / T::lit(6.0)
    }

    /// Gram determinant of the edge vectors from vertex 0; equals `36 V²`.
    fn gram_det(&self) -> T {
        let half = T::lit(0.5);
        let sq = |a, b| {
            let x = self.get(a, b);
            x * x
        };
        let g11 = sq(0, 1);
        let g22 = sq(0, 2);
        let g33 = sq(0, 3);
        let g12 = half * (g11 + g22 - sq(1, 2));
        let g13 = half * (g11 + g33 - sq(1, 3));
        let g23 = half * (g22 + g33 - sq(2, 3));
        g11 * (g22 * g33 - g23 * g23) - g12 * (g12 * g33 - g23 * g13)
            + g13 * (g12 * g23 - g22 * g13)
    }

    /// Cayley–Menger determinant, `288 V²`.
    pub fn cayley_menger(&self) -> T {
        T::lit(8.0) * self.gram_det()
    }

    /// Scale-free shape measure `288 V² / (mean length)⁶`; 4 for the regular tetrahedron.
    pub fn quality(&self) -> T {
        self.cayley_menger() / self.mean().powi(6)
    }

    /// Lengths scaled uniformly by `s > 0`.
    pub fn scaled(&self, s: T) -> Self {
        let mut l = self.l;
        for x in &mut l {
            *x = *x * s;
        }
        TetLengths { l }
    }
}

/// Euclidean volume.
pub fn tet_volume<T: Real>(t: &TetLengths<T>) -> T {
    t.gram_det().max(T::zero()).sqrt() / T::lit(6.0)
}

/// Coordinates with vertex 0 at the origin, vertex 1 on the x axis, vertex 2 in the
/// upper xy half-plane and vertex 3 above that plane, so the orientation determinant is positive.
pub fn embed_tet<T: Real>(t: &TetLengths<T>) -> [Vec3<T>; 4] {
    let two = T::lit(2.0);
    let l01 = t.get(0, 1);
    let l02 = t.get(0, 2);
    let l03 = t.get(0, 3);
    let x2 = (l01 * l01 + l02 * l02 - t.get(1, 2).powi(2)) / (two * l01);
    let area012 = triangle_area_unchecked(l01, l02, t.get(1, 2));
    let y2 = two * area012 / l01;
    let x3 = (l01 * l01 + l03 * l03 - t.get(1, 3).powi(2)) / (two * l01);
    let y3 = (l02 * l02 + l03 * l03 - t.get(2, 3).powi(2) - two * x2 * x3) / (two * y2);
    let z3 = T::lit(3.0) * tet_volume(t) / area012;
    let o = T::zero();
    [[o, o, o], [l01, o, o], [x2, y2, o], [x3, y3, z3]]
}

/// Dihedral angles at all six edges of an embedded tetrahedron.
pub fn dihedral_angles_embedded<T: Real>(p: &[Vec3<T>; 4]) -> [T; 6] {
    let mut out = [T::zero(); 6];
    for (i, [a, b]) in TET_EDGES.iter().enumerate() {
        let [c, d] = TET_EDGES[opposite_edge(i)];
        let e = vec3::sub(p[*b], p[*a]);
        let n1 = vec3::cross(e, vec3::sub(p[c], p[*a]));
        let n2 = vec3::cross(e, vec3::sub(p[d], p[*a]));
        out[i] = vec3::norm(vec3::cross(n1, n2)).atan2(vec3::dot(n1, n2));
    }
    out
}

/// Interior dihedral angle at local edge `edge_index`, in radians.
pub fn dihedral_angle<T: Real>(t: &TetLengths<T>, edge_index: usize) -> Result<T> {
    if edge_index >= 6 {
        return Err(Error::NotFound(format!("tetrahedron edge index {edge_index}")));
    }
    Ok(dihedral_angles_embedded(&embed_tet(t))[edge_index])
}

/// Solid angles at the four vertices from dihedral angles (spherical excess).
pub fn solid_angles_from_dihedrals<T: Real>(dihedral: &[T; 6]) -> [T; 4] {
    let mut out = [T::zero(); 4];
    for (v, slot) in out.iter_mut().enumerate() {
        let s: T = (0..4)
            .filter(|&w| w != v)
            .map(|w| dihedral[tet_edge_index(v, w)])
            .sum();
        *slot = s - T::PI();
    }
    out
}

/// Solid angle at a local vertex, in steradians.
pub fn solid_angle<T: Real>(t: &TetLengths<T>, vertex_index: usize) -> Result<T> {
    if vertex_index >= 4 {
        return Err(Error::NotFound(format!("tetrahedron vertex index {vertex_index}")));
    }
    let d = dihedral_angles_embedded(&embed_tet(t));
    Ok(solid_angles_from_dihedrals(&d)[vertex_index])
}

/// Three side lengths satisfying the strict triangle inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriLengths<T> {
    l: [T; 3],
}

impl<T: Real> TriLengths<T> {
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        let ok = a > T::zero() && b > T::zero() && c > T::zero() && a < b + c && b < a + c && c < a + b;
        if !ok || !(a + b + c).is_finite() {
            return Err(Error::InvalidSimplex(format!(
                "triangle ({}, {}, {}) violates the triangle inequality",
                a.as_f64(),
                b.as_f64(),
                c.as_f64()
            )));
        }
        Ok(TriLengths { l: [a, b, c] })
    }

    pub fn lengths(&self) -> &[T; 3] {
        &self.l
    }
}

/// Heron area in the cancellation-free ordering (Kahan).
fn triangle_area_unchecked<T: Real>(a: T, b: T, c: T) -> T {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    p.max(T::zero()).sqrt() / T::lit(4.0)
}

pub fn triangle_area<T: Real>(t: &TriLengths<T>) -> T {
    let [a, b, c] = t.l;
    triangle_area_unchecked(a, b, c)
}

/// Position of a triangle's third vertex relative to its base edge `ℓ = (v1, v2)`,
/// with sides `h1` at `v1` and `h2` at `v2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FootDecomposition<T> {
    /// Signed distance from `v1` to the foot of the perpendicular, measured toward `v2`.
    pub d: T,
    /// Perpendicular distance from the base line to the third vertex.
    pub z: T,
    /// Cosine of the angle between `ℓ` and `h1` at `v1`.
    pub cos_theta1: T,
    /// Cosine of the angle between `ℓ` reversed and `h2` at `v2`.
    pub cos_theta2: T,
}

pub fn foot_decomposition<T: Real>(len_l: T, len_h1: T, len_h2: T) -> Result<FootDecomposition<T>> {
    let tri = TriLengths::new(len_l, len_h1, len_h2)?;
    let d = (len_l * len_l + len_h1 * len_h1 - len_h2 * len_h2) / (T::lit(2.0) * len_l);
    let z = T::lit(2.0) * triangle_area(&tri) / len_l;
    Ok(FootDecomposition {
        d,
        z,
        cos_theta1: d / len_h1,
        cos_theta2: (len_l - d) / len_h2,
    })
}

/// Circumcenter in barycentric weights, with its radius and a containment flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circumcenter<T> {
    pub weights: [T; 4],
    pub radius: T,
    /// True when every weight is non-negative.
    pub inside: bool,
}

/// Circumcenter of an embedded tetrahedron whose vertex 0 is at the origin.
pub fn circumcenter_point<T: Real>(p: &[Vec3<T>; 4]) -> Vec3<T> {
    let half = T::lit(0.5);
    let r1 = half * vec3::dot(p[1], p[1]);
    let r2 = half * vec3::dot(p[2], p[2]);
    let r3 = half * vec3::dot(p[3], p[3]);
    let d = vec3::det3(p[1], p[2], p[3]);
    let num = vec3::add(
        vec3::add(
            vec3::scale(vec3::cross(p[2], p[3]), r1),
            vec3::scale(vec3::cross(p[3], p[1]), r2),
        ),
        vec3::scale(vec3::cross(p[1], p[2]), r3),
    );
    vec3::scale(num, T::one() / d)
}

pub fn circumcenter_tet<T: Real>(t: &TetLengths<T>) -> Circumcenter<T> {
    let p = embed_tet(t);
    let c = circumcenter_point(&p);
    let w = vec3::solve_columns(p[1], p[2], p[3], c);
    let weights = [T::one() - w[0] - w[1] - w[2], w[0], w[1], w[2]];
    Circumcenter {
        weights,
        radius: vec3::norm(c),
        inside: weights.iter().all(|&x| x >= T::zero()),
    }
}

pub fn barycenter_tet<T: Real>(_t: &TetLengths<T>) -> [T; 4] {
    [T::lit(0.25); 4]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cube_corner() -> TetLengths<f64> {
        let s = 2f64.sqrt();
        TetLengths::new([1.0, 1.0, 1.0, s, s, s]).unwrap()
    }

    #[test]
    fn equilateral_values() {
        let t = TetLengths::new([1.0f64; 6]).unwrap();
        assert_relative_eq!(tet_volume(&t), 1.0 / (6.0 * 2f64.sqrt()), max_relative = 1e-14);
        for e in 0..6 {
            assert_relative_eq!(dihedral_angle(&t, e).unwrap(), (1.0f64 / 3.0).acos(), epsilon = 1e-12);
        }
        for v in 0..4 {
            assert_relative_eq!(solid_angle(&t, v).unwrap(), (23.0f64 / 27.0).acos(), epsilon = 1e-12);
        }
        let c = circumcenter_tet(&t);
        for w in c.weights {
            assert_relative_eq!(w, 0.25, epsilon = 1e-12);
        }
        assert_relative_eq!(c.radius, (3.0f64 / 8.0).sqrt(), epsilon = 1e-12);
        assert!(c.inside);
    }

    #[test]
    fn cube_corner_values() {
        let t = cube_corner();
        assert_relative_eq!(tet_volume(&t), 1.0 / 6.0, epsilon = 1e-14);
        for e in 0..3 {
            assert_relative_eq!(dihedral_angle(&t, e).unwrap(), std::f64::consts::FRAC_PI_2, epsilon = 1e-12);
        }
        assert_relative_eq!(solid_angle(&t, 0).unwrap(), std::f64::consts::FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn planar_first_face() {
        let t = TetLengths::new([3.0f64, 4.0, 3.0, 5.0, 4.0, 4.0]).unwrap();
        let p = embed_tet(&t);
        assert_eq!(p[0][2], 0.0);
        assert_eq!(p[1][2], 0.0);
        assert_eq!(p[2][2], 0.0);
        assert!(p[3][2] > 0.0);
    }

    #[test]
    fn triangle_areas() {
        assert_relative_eq!(triangle_area(&TriLengths::new(1.0f64, 1.0, 1.0).unwrap()), 3f64.sqrt() / 4.0);
        assert_relative_eq!(triangle_area(&TriLengths::new(3.0f64, 4.0, 5.0).unwrap()), 6.0);
        assert!(TriLengths::new(1.0f64, 2.0, 3.0).is_err());
    }

    #[test]
    fn feet() {
        let f = foot_decomposition(1.0f64, 1.0, 1.0).unwrap();
        assert_relative_eq!(f.d, 0.5);
        assert_relative_eq!(f.z, 3f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_relative_eq!(f.cos_theta1, 0.5);
        let f = foot_decomposition(5.0f64, 3.0, 4.0).unwrap();
        assert_relative_eq!(f.d, 9.0 / 5.0);
        assert_relative_eq!(f.z, 12.0 / 5.0, epsilon = 1e-14);
        let f = foot_decomposition(1.0f64, 2.0, 1.2).unwrap();
        assert!(f.d > 1.0);
        assert!(f.cos_theta2 < 0.0);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(TetLengths::new([1.0f64, 1.0, 1.0, 1.0, 1.0, 3.0]).is_err());
        // flat: four coplanar points of a unit square
        let s = 2f64.sqrt();
        let err = TetLengths::new([1.0f64, s, 1.0, 1.0, s, 1.0]).unwrap_err();
        assert!(err.to_string().contains("Cayley-Menger"));
        assert!(TetLengths::new([0.0f64, 1.0, 1.0, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn f32_kernel() {
        let t = TetLengths::new([1.0f32; 6]).unwrap();
        assert!((dihedral_angle(&t, 2).unwrap() - (1.0f32 / 3.0).acos()).abs() < 1e-5);
    }
}
