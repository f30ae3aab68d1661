use pfcurv::curvature::curvature_report;
use pfcurv::io::{parse_edge_key, MeshFile};
use pfcurv::suite::{generate_cylinder, generate_nil3, generate_sphere_cell};

#[test]
fn generated_mesh_round_trips_exactly() {
    for g in [generate_nil3(6).unwrap(), generate_cylinder(1.0, 0.5, 3).unwrap()] {
        let text = serde_json::to_string(&MeshFile::from_generated(&g)).unwrap();
        let mesh: MeshFile = serde_json::from_str(&text).unwrap();
        let loaded = mesh.load().unwrap();
        assert_eq!(loaded.metric.lengths(), g.metric.lengths());
        assert_eq!(loaded.complex.orbits(), g.complex.orbits());
        assert_eq!(loaded.reference.as_ref(), Some(&g.reference));
        let a = curvature_report(&g.complex, &g.metric, g.options).unwrap();
        let b = curvature_report(&loaded.complex, &loaded.metric, loaded.options.unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn field_names_are_fixed() {
    let g = generate_sphere_cell(5, 1.0).unwrap();
    let value = serde_json::to_value(MeshFile::from_generated(&g)).unwrap();
    assert_eq!(value["vertices"], 5);
    assert_eq!(value["tets"].as_array().unwrap().len(), 5);
    assert!(value["lengths"]["0-4"].is_f64());
    assert!(value.get("labeling").is_none());
}

#[test]
fn malformed_meshes_are_rejected() {
    let g = generate_sphere_cell(5, 1.0).unwrap();
    let good = MeshFile::from_generated(&g);

    let mut missing = good.clone();
    missing.lengths.remove("0-1");
    assert!(missing.load().is_err());

    let mut reversed = good.clone();
    let l = reversed.lengths.remove("0-1").unwrap();
    reversed.lengths.insert("1-0".into(), l);
    assert!(reversed.load().is_err());

    let mut count = good.clone();
    count.vertices = 6;
    assert!(count.load().is_err());

    let mut bad = good;
    bad.lengths.insert("0-1".into(), 100.0);
    assert!(bad.load().is_err());

    assert!(parse_edge_key("3-3").is_err());
    assert!(parse_edge_key("a-3").is_err());
    assert_eq!(parse_edge_key("2-10").unwrap(), (2, 10));
}
