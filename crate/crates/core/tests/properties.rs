use approx::assert_relative_eq;
use proptest::prelude::*;

use pfcurv::curvature::curvature_report;
use pfcurv::simplex::{
    dihedral_angle, embed_tet, foot_decomposition, solid_angle, tet_volume, triangle_area, TetLengths, TriLengths,
    TET_EDGES,
};
use pfcurv::suite::generate_flat_torus;
use pfcurv::{CurvatureOptions, DualScheme, EdgeLengthMetric, EdgeVolumeMethod, SimplicialComplex3};

type P = [f64; 3];

fn dist(a: P, b: P) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn lengths_of(p: &[P; 4]) -> [f64; 6] {
    TET_EDGES.map(|[a, b]| dist(p[a], p[b]))
}

fn point() -> impl Strategy<Value = P> {
    [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64]
}

/// Random tetrahedra that are not too flat.
fn tet() -> impl Strategy<Value = TetLengths<f64>> {
    [point(), point(), point(), point()]
        .prop_filter_map("near-degenerate", |p| {
            TetLengths::new(lengths_of(&p)).ok().filter(|t| t.quality() > 1e-2)
        })
}

const PERMS: [[usize; 4]; 4] = [[1, 0, 2, 3], [0, 2, 1, 3], [3, 1, 2, 0], [2, 3, 0, 1]];

fn permuted(t: &TetLengths<f64>, p: [usize; 4]) -> TetLengths<f64> {
    TetLengths::from_fn(|a, b| t.get(p[a], p[b])).unwrap()
}

/// Flat 3-torus of 27 cubes with every edge length perturbed independently.
fn perturbed_torus(factors: &[f64]) -> (SimplicialComplex3, EdgeLengthMetric) {
    let g = generate_flat_torus(3, 1.0).unwrap();
    let lengths = g.metric.lengths().iter().zip(factors).map(|(l, f)| l * (1.0 + f)).collect();
    let m = EdgeLengthMetric::new(&g.complex, lengths).unwrap();
    (g.complex, m)
}

const TORUS_EDGES: usize = 7 * 27;

fn options() -> impl Strategy<Value = CurvatureOptions> {
    (
        prop_oneof![Just(DualScheme::Voronoi), Just(DualScheme::Barycentric)],
        prop_oneof![Just(EdgeVolumeMethod::Clipped), Just(EdgeVolumeMethod::HalfVertex)],
    )
        .prop_map(|(scheme, method)| CurvatureOptions { scheme, method })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_reproduces_lengths(t in tet()) {
        let p = embed_tet(&t);
        for (k, [a, b]) in TET_EDGES.iter().enumerate() {
            prop_assert!((dist(p[*a], p[*b]) / t.lengths()[k] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn volume_and_angles_follow_vertex_permutations(t in tet(), which in 0..PERMS.len()) {
        let p = PERMS[which];
        let u = permuted(&t, p);
        assert_relative_eq!(tet_volume(&u), tet_volume(&t), max_relative = 1e-10);
        for (k, [a, b]) in TET_EDGES.iter().enumerate() {
            let original = pfcurv::simplex::tet_edge_index(p[*a], p[*b]);
            assert_relative_eq!(dihedral_angle(&u, k).unwrap(), dihedral_angle(&t, original).unwrap(), max_relative = 1e-9);
        }
    }

    #[test]
    fn solid_angles_match_dihedral_sum(t in tet()) {
        let dihedral: f64 = (0..6).map(|k| dihedral_angle(&t, k).unwrap()).sum();
        let solid: f64 = (0..4).map(|v| solid_angle(&t, v).unwrap()).sum();
        prop_assert!((solid - (2.0 * dihedral - 4.0 * std::f64::consts::PI)).abs() < 1e-9);
    }

    #[test]
    fn foot_decomposition_rebuilds_the_triangle(l in 0.5..2.0f64, h1 in 0.5..2.0f64, h2 in 0.5..2.0f64) {
        prop_assume!(l + h1 > h2 * 1.01 && l + h2 > h1 * 1.01 && h1 + h2 > l * 1.01);
        let f = foot_decomposition(l, h1, h2).unwrap();
        prop_assert!((f.d * f.d + f.z * f.z - h1 * h1).abs() < 1e-12);
        prop_assert!(((l - f.d).powi(2) + f.z * f.z - h2 * h2).abs() < 1e-12);
        let area = triangle_area(&TriLengths::new(l, h1, h2).unwrap());
        prop_assert!((0.5 * l * f.z - area).abs() < 1e-12);
    }

    #[test]
    fn curvatures_scale_inversely_with_area(
        factors in prop::collection::vec(-0.03..0.03f64, TORUS_EDGES),
        s in 0.3..4.0f64,
        opts in options(),
    ) {
        let (c, m) = perturbed_torus(&factors);
        let a = curvature_report(&c, &m, opts).unwrap();
        let b = curvature_report(&c, &m.scaled(s), opts).unwrap();
        let scale = a.edges.iter().fold(0.0f64, |x, e| x.max(e.sectional.abs()).max(e.ricci.abs()));
        for (x, y) in a.vertices.iter().zip(&b.vertices) {
            prop_assert!((y.scalar * s * s - x.scalar).abs() <= 1e-9 * scale);
        }
        for (x, y) in a.edges.iter().zip(&b.edges) {
            prop_assert!((y.deficit - x.deficit).abs() < 1e-12);
            prop_assert!((y.sectional * s * s - x.sectional).abs() <= 1e-9 * scale);
            prop_assert!((y.ricci * s * s - x.ricci).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn dual_volumes_tile_the_manifold(factors in prop::collection::vec(-0.03..0.03f64, TORUS_EDGES), opts in options()) {
        let (c, m) = perturbed_torus(&factors);
        let r = curvature_report(&c, &m, opts).unwrap();
        let sum: f64 = r.vertex_volume.iter().sum();
        prop_assert!((sum / r.total_volume - 1.0).abs() < 1e-10);
    }

    #[test]
    fn scalar_integral_equals_regge_action(factors in prop::collection::vec(-0.03..0.03f64, TORUS_EDGES), opts in options()) {
        let (c, m) = perturbed_torus(&factors);
        let r = curvature_report(&c, &m, opts).unwrap();
        let size: f64 = r.edges.iter().map(|e| e.length * e.deficit.abs()).sum();
        prop_assert!((r.scalar_integral(1) - r.regge_action).abs() <= 1e-10 * 2.0 * size);
    }

    #[test]
    fn reduced_and_general_sectional_agree(factors in prop::collection::vec(-0.03..0.03f64, TORUS_EDGES), opts in options()) {
        let (c, m) = perturbed_torus(&factors);
        let r = curvature_report(&c, &m, opts).unwrap();
        for e in &r.edges {
            prop_assert!((e.sectional - e.sectional_general).abs() <= 1e-12 * e.sectional.abs().max(1.0));
        }
    }

    #[test]
    fn ricci_is_half_mean_scalar_minus_sectional(factors in prop::collection::vec(-0.03..0.03f64, TORUS_EDGES)) {
        let (c, m) = perturbed_torus(&factors);
        let r = curvature_report(&c, &m, CurvatureOptions::default()).unwrap();
        for e in &r.edges {
            let [a, b] = e.vertices;
            let expected = 0.25 * (r.vertex_scalar[a] + r.vertex_scalar[b]) - e.sectional;
            prop_assert!((e.ricci - expected).abs() <= 1e-14 * expected.abs().max(1.0));
        }
    }
}
