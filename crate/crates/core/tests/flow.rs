use pfcurv::flow::{flow_rhs, integrate};
use pfcurv::suite::{generate_cylinder, generate_sphere_cell};
use pfcurv::{FlowConfig, Integrator};

fn sphere_error(cells: usize, integrator: Integrator, steps: usize) -> f64 {
    let g = generate_sphere_cell(cells, 1.0).unwrap();
    let horizon = 0.05;
    let cfg = FlowConfig {
        dt: horizon / steps as f64,
        steps,
        integrator,
        curvature: g.options,
        max_deficit: 3.0,
        ..FlowConfig::default()
    };
    let t = integrate(&g.complex, &g.metric, &cfg).unwrap();
    assert!(t.halt.is_none());
    assert_eq!(t.samples.len(), steps + 1);
    let s0 = &t.samples[0];
    // |ℓ|² Rc is constant along the flow of a regular triangulation.
    let exact = s0.lengths[0] * (1.0 - 2.0 * s0.ricci[0] * horizon).sqrt();
    (t.last().lengths[0] - exact).abs()
}

#[test]
fn euler_is_first_order_and_rk4_fourth_order() {
    let e = [sphere_error(16, Integrator::Euler, 8), sphere_error(16, Integrator::Euler, 16)];
    assert!((e[0] / e[1] - 2.0).abs() < 0.2, "{e:?}");
    let r = [sphere_error(16, Integrator::Rk4, 2), sphere_error(16, Integrator::Rk4, 4)];
    assert!((r[0] / r[1] - 16.0).abs() < 2.5, "{r:?}");
}

#[test]
fn cylinder_axial_edges_are_fixed() {
    let r = 1.2;
    let g = generate_cylinder(r, 0.5, 3).unwrap();
    let rates = flow_rhs(&g.complex, &g.metric, g.options, false).unwrap();
    let lengths = g.metric.orbit_lengths(&g.complex);
    for (o, (rate, l)) in rates.iter().zip(&lengths).enumerate() {
        match g.edge_labels[o].as_str() {
            "a" => assert!((rate / l + 1.0 / (r * r)).abs() < 1e-10),
            "b" => assert!(rate.abs() < 1e-12),
            _ => {}
        }
    }
}

#[test]
fn invalid_step_is_rejected() {
    let g = generate_sphere_cell(5, 1.0).unwrap();
    let cfg = FlowConfig { dt: -1.0, ..FlowConfig::default() };
    assert!(integrate(&g.complex, &g.metric, &cfg).is_err());
}

#[test]
fn collapsing_sphere_halts_instead_of_failing() {
    let g = generate_sphere_cell(5, 1.0).unwrap();
    let cfg = FlowConfig {
        dt: 0.05,
        steps: 40,
        integrator: Integrator::Euler,
        curvature: g.options,
        max_deficit: 3.0,
        ..FlowConfig::default()
    };
    let t = integrate(&g.complex, &g.metric, &cfg).unwrap();
    assert!(t.halt.is_some());
    assert!(t.samples.len() < 41);
}
