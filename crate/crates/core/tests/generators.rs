use std::f64::consts::PI;

use pfcurv::complex::total_volume;
use pfcurv::curvature::curvature_report;
use pfcurv::suite::{
    generate, generate_cylinder, generate_flat_torus, generate_gowdy, generate_nil3, generate_nil3_flat,
    generate_sphere_cell, GeneratedTriangulation, GeneratorConfig, GowdyStyle,
};

fn fundamental_volume(g: &GeneratedTriangulation) -> f64 {
    total_volume(&g.complex, &g.metric).unwrap()
}

#[test]
fn regular_sphere_counts_and_lengths() {
    // (cells, triangles, edges, vertices, tets per edge, tets per vertex, edges per vertex)
    let table = [(5, 10, 10, 5, 3, 4, 4), (16, 32, 24, 8, 4, 8, 6), (600, 1200, 720, 120, 5, 20, 12)];
    let r = 0.8;
    for (cells, tri, edges, verts, per_edge, per_vertex, edges_per_vertex) in table {
        let g = generate_sphere_cell(cells, r).unwrap();
        let c = &g.complex;
        assert_eq!((c.n_tets(), c.n_triangles(), c.n_edges(), c.n_vertices()), (cells, tri, edges, verts));
        for e in 0..c.n_edges() {
            assert_eq!(c.tets_at_edge(e).unwrap().len(), per_edge);
        }
        for v in 0..c.n_vertices() {
            assert_eq!(c.tets_at_vertex(v).unwrap().len(), per_vertex);
            assert_eq!(c.edges_at_vertex(v).unwrap().len(), edges_per_vertex);
        }
        let expected = (12.0 * 2f64.sqrt() * PI * PI * r.powi(3) / cells as f64).cbrt();
        assert!(g.metric.lengths().iter().all(|l| (l / expected - 1.0).abs() < 1e-12));
        assert!((fundamental_volume(&g) / (2.0 * PI * PI * r.powi(3)) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn cylinder_edge_classes() {
    let r = 1.3;
    let g = generate_cylinder(r, 0.7, 4).unwrap();
    let a = 2.0 * (PI / (5.0 * 3f64.sqrt())).sqrt() * r;
    assert!((a / r - 1.2046).abs() < 1e-4);
    let report = curvature_report(&g.complex, &g.metric, g.options).unwrap();
    let mut b_deficit_per_ring = 0.0;
    for e in &report.edges {
        let class = g.edge_labels[e.orbit].as_str();
        let (length, deficit) = match class {
            "a" => (a, 0.0),
            "b" => (0.7, PI / 3.0),
            "c" => ((a * a + 0.49f64).sqrt(), 0.0),
            other => panic!("unexpected class {other}"),
        };
        assert!((e.length - length).abs() < 1e-12, "{class}: {}", e.length);
        assert!((e.deficit - deficit).abs() < 1e-10, "{class}: {}", e.deficit);
        if class == "b" {
            b_deficit_per_ring += e.deficit;
        }
    }
    // One ring of axial edges sits over the icosahedron's 12 vertices.
    assert!((b_deficit_per_ring / 4.0 - 4.0 * PI).abs() < 1e-9);
    assert!((fundamental_volume(&g) / g.smooth_volume - 1.0).abs() < 1e-12);
    assert!((g.smooth_volume - 4.0 * PI * r * r * 0.7 * 4.0).abs() < 1e-9);
}

#[test]
fn cylinder_needs_three_rings() {
    assert!(generate_cylinder(1.0, 1.0, 2).is_err());
    assert!(generate_cylinder(-1.0, 1.0, 3).is_err());
}

#[test]
fn flat_limits_have_no_curvature() {
    let flats = [
        generate_flat_torus(3, 0.5).unwrap(),
        generate_gowdy(6, GowdyStyle::Cubic, 0.0).unwrap(),
        generate_gowdy(6, GowdyStyle::Isosceles, 0.0).unwrap(),
        generate_nil3_flat(6).unwrap(),
    ];
    for g in flats {
        let r = curvature_report(&g.complex, &g.metric, g.options).unwrap();
        let worst = r.edges.iter().map(|e| e.deficit.abs().max(e.sectional.abs())).fold(0.0, f64::max);
        assert!(worst < 1e-9, "{}: {worst:e}", g.name);
        assert!(r.vertices.iter().all(|v| v.scalar.abs() < 1e-9), "{}", g.name);
    }
}

#[test]
fn isosceles_tetrahedra_are_congruent_when_flat() {
    let g = generate_gowdy(6, GowdyStyle::Isosceles, 0.0).unwrap();
    let d = 2.0 * PI / 6.0;
    for &l in g.metric.lengths() {
        let short = (l / (1.5f64.sqrt() * d) - 1.0).abs() < 1e-9;
        let long = (l / (2f64.sqrt() * d) - 1.0).abs() < 1e-9;
        assert!(short || long, "{l}");
    }
}

#[test]
fn nil_single_block() {
    let g = generate_nil3(1).unwrap();
    let o = g.complex.orbits();
    assert_eq!(g.complex.n_tets() / o.sheets, 6);
    assert_eq!(o.edge_reps.len(), 7);
    assert_eq!(o.vertex_reps.len(), 1);
}

#[test]
fn periodic_suites_close_volume_and_record_geodesics() {
    let suites = [
        generate_gowdy(6, GowdyStyle::Cubic, 0.1).unwrap(),
        generate_gowdy(6, GowdyStyle::Isosceles, 0.1).unwrap(),
        generate_nil3(6).unwrap(),
    ];
    for g in suites {
        assert!((fundamental_volume(&g) / g.smooth_volume - 1.0).abs() < 1e-8, "{}", g.name);
        let lengths = g.metric.orbit_lengths(&g.complex);
        assert_eq!(lengths.len(), g.geodesics.len());
        for (l, geo) in lengths.iter().zip(&g.geodesics) {
            assert!((l / (geo.length * g.rescale) - 1.0).abs() < 1e-12);
            assert!(!geo.ambiguous);
        }
        assert!(g.labeling.is_some());
    }
}

#[test]
fn gowdy_deficits_shrink_with_resolution() {
    let max = |blocks| {
        let g = generate_gowdy(blocks, GowdyStyle::Cubic, 0.1).unwrap();
        let r = curvature_report(&g.complex, &g.metric, g.options).unwrap();
        r.edges.iter().map(|e| e.deficit.abs()).fold(0.0, f64::max)
    };
    let (a, b) = (max(6), max(12));
    assert!(b < a, "{a} {b}");
}

#[test]
fn odd_isosceles_block_counts_are_rejected() {
    assert!(generate_gowdy(7, GowdyStyle::Isosceles, 0.1).is_err());
    assert!(generate_gowdy(0, GowdyStyle::Cubic, 0.1).is_err());
    assert!(generate_nil3(0).is_err());
}

#[test]
fn generator_config_json() {
    let cfg: GeneratorConfig = serde_json::from_str(r#"{"manifold": "gowdy", "blocks": 6, "style": "isosceles"}"#).unwrap();
    assert_eq!(cfg, GeneratorConfig::Gowdy { blocks: 6, style: GowdyStyle::Isosceles, amplitude: 0.1 });
    let back: GeneratorConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(back, cfg);
    let g = generate(&GeneratorConfig::Sphere { cells: 16, radius: 1.0 }).unwrap();
    assert_eq!(g.complex.n_tets(), 16);
    assert!(serde_json::from_str::<GeneratorConfig>(r#"{"manifold": "torus"}"#).is_err());
}
