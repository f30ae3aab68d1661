//! Half-space clipping of tetrahedra.

use crate::vec3::{self, Vec3};
use crate::Real;

/// Splits the part of tetrahedron `p` where the affine function with vertex values `f`
/// is non-negative into tetrahedra.
pub fn clip_tet<T: Real>(p: &[Vec3<T>; 4], f: [T; 4]) -> Vec<[Vec3<T>; 4]> {
    let inside: Vec<usize> = (0..4).filter(|&i| f[i] >= T::zero()).collect();
    let outside: Vec<usize> = (0..4).filter(|&i| f[i] < T::zero()).collect();
    let cut = |a: usize, b: usize| vec3::lerp(p[a], p[b], f[a] / (f[a] - f[b]));
    match inside.len() {
        0 => Vec::new(),
        4 => vec![*p],
        1 => {
            let a = inside[0];
            let [b, c, d] = [outside[0], outside[1], outside[2]];
            vec![[p[a], cut(a, b), cut(a, c), cut(a, d)]]
        }
        2 => {
            let (a, b) = (inside[0], inside[1]);
            let (c, d) = (outside[0], outside[1]);
            prism([p[a], cut(a, c), cut(a, d)], [p[b], cut(b, c), cut(b, d)])
        }
        _ => {
            let [a, b, c] = [inside[0], inside[1], inside[2]];
            let d = outside[0];
            prism([p[a], p[b], p[c]], [cut(a, d), cut(b, d), cut(c, d)])
        }
    }
}

/// Three tetrahedra filling the prism between corresponding triangles `s` and `t`.
fn prism<T: Real>(s: [Vec3<T>; 3], t: [Vec3<T>; 3]) -> Vec<[Vec3<T>; 4]> {
    vec![[s[0], s[1], s[2], t[0]], [s[1], s[2], t[0], t[1]], [s[2], t[0], t[1], t[2]]]
}

/// Unsigned volume of the part of `p` inside the slab `lo <= (x - origin) . dir <= hi`.
pub fn slab_volume<T: Real>(p: &[Vec3<T>; 4], origin: Vec3<T>, dir: Vec3<T>, lo: T, hi: T) -> T {
    let s: [T; 4] = std::array::from_fn(|i| vec3::dot(vec3::sub(p[i], origin), dir));
    if s.iter().all(|&x| x >= lo && x <= hi) {
        return vec3::signed_tet_volume(p[0], p[1], p[2], p[3]).abs();
    }
    let mut total = T::zero();
    for q in clip_tet(p, s.map(|x| x - lo)) {
        let sq: [T; 4] = std::array::from_fn(|i| hi - vec3::dot(vec3::sub(q[i], origin), dir));
        for r in clip_tet(&q, sq) {
            total = total + vec3::signed_tet_volume(r[0], r[1], r[2], r[3]).abs();
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_corner() -> [Vec3<f64>; 4] {
        [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    }

    #[test]
    fn corner_slices() {
        let p = unit_corner();
        let o = [0.0; 3];
        // x <= h cuts off a tet of volume (1 - (1-h)^3) / 6
        for h in [0.1, 0.3, 0.5, 0.9] {
            let v = slab_volume(&p, o, [1.0, 0.0, 0.0], 0.0, h);
            let want = (1.0 - (1.0f64 - h).powi(3)) / 6.0;
            assert!((v - want).abs() < 1e-15, "{h}: {v} vs {want}");
        }
        let full = slab_volume(&p, o, [1.0, 0.0, 0.0], -1.0, 2.0);
        assert!((full - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(slab_volume(&p, o, [1.0, 0.0, 0.0], 2.0, 3.0), 0.0);
    }

    #[test]
    fn complementary_cuts_add_up() {
        let p: [Vec3<f64>; 4] = [[0.1, 0.2, -0.3], [1.3, 0.1, 0.2], [0.4, 1.1, 0.0], [0.2, 0.3, 0.9]];
        let dir = [0.6, 0.0, 0.8];
        let whole = vec3::signed_tet_volume(p[0], p[1], p[2], p[3]).abs();
        let o = [0.0; 3];
        let a = slab_volume(&p, o, dir, -5.0, 0.35);
        let b = slab_volume(&p, o, dir, 0.35, 0.6);
        let c = slab_volume(&p, o, dir, 0.6, 5.0);
        assert!((a + b + c - whole).abs() < 1e-14);
        assert!(a > 0.0 && b > 0.0 && c > 0.0);
    }
}
