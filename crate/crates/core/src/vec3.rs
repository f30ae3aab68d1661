//! Small fixed-size vector helpers shared by the kernels.

use crate::Real;

pub type Vec3<T> = [T; 3];

#[inline]
pub fn sub<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale<T: Real>(a: Vec3<T>, s: T) -> Vec3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm<T: Real>(a: Vec3<T>) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn det3<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> T {
    dot(a, cross(b, c))
}

/// Point `a + t (b - a)`.
#[inline]
pub fn lerp<T: Real>(a: Vec3<T>, b: Vec3<T>, t: T) -> Vec3<T> {
    add(a, scale(sub(b, a), t))
}

/// Signed volume of the tetrahedron `(a, b, c, d)`.
#[inline]
pub fn signed_tet_volume<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>, d: Vec3<T>) -> T {
    det3(sub(b, a), sub(c, a), sub(d, a)) / T::lit(6.0)
}

/// Circumcenter of the triangle `(a, b, c)` in space.
pub fn triangle_circumcenter<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> Vec3<T> {
    let u = sub(b, a);
    let v = sub(c, a);
    let w = cross(u, v);
    let num = add(scale(cross(v, w), dot(u, u)), scale(cross(w, u), dot(v, v)));
    add(a, scale(num, T::one() / (T::lit(2.0) * dot(w, w))))
}

/// Solves `[c0 c1 c2] x = rhs` for column vectors by Cramer's rule.
pub fn solve_columns<T: Real>(c0: Vec3<T>, c1: Vec3<T>, c2: Vec3<T>, rhs: Vec3<T>) -> Vec3<T> {
    let d = det3(c0, c1, c2);
    [
        det3(rhs, c1, c2) / d,
        det3(c0, rhs, c2) / d,
        det3(c0, c1, rhs) / d,
    ]
}
