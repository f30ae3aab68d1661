//! Geodesic boundary-value problems by single shooting.

use super::chart::{christoffel, inner, smooth_curvatures, FiniteDifference, Point, SmoothChart};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicConfig {
    /// RK4 steps over the unit parameter interval; must be even for Simpson quadrature.
    pub steps: usize,
    /// Allowed endpoint miss, relative to `max(1, |q − p|)` in coordinates.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Re-solve from a perturbed seed and flag disagreement.
    pub restart_check: bool,
    pub fd: FiniteDifference,
}

impl Default for GeodesicConfig {
    fn default() -> Self {
        GeodesicConfig {
            steps: 64,
            tolerance: 1e-10,
            max_iterations: 50,
            restart_check: true,
            fd: FiniteDifference::default(),
        }
    }
}

/// Solved geodesic with coordinate samples at uniform parameter values.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicRecord {
    pub start: Point,
    pub end: Point,
    pub length: f64,
    pub points: Vec<Point>,
    /// Coordinate velocities `dx/ds` at the sample points.
    pub velocities: Vec<Point>,
    pub iterations: usize,
    /// A restart from a perturbed seed converged to a different length.
    pub ambiguous: bool,
}

type State = [f64; 6];

fn rhs(chart: &dyn SmoothChart, fd: &FiniteDifference, y: &State) -> Result<State> {
    let x = [y[0], y[1], y[2]];
    let v = [y[3], y[4], y[5]];
    let g = christoffel(chart, x, fd)?;
    let mut out = [v[0], v[1], v[2], 0.0, 0.0, 0.0];
    for k in 0..3 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += g[k][i][j] * v[i] * v[j];
            }
        }
        out[3 + k] = -s;
    }
    Ok(out)
}

fn shoot(chart: &dyn SmoothChart, cfg: &GeodesicConfig, p: Point, v0: Point, record: bool) -> Result<(Vec<State>, Point)> {
    let h = 1.0 / cfg.steps as f64;
    let mut y: State = [p[0], p[1], p[2], v0[0], v0[1], v0[2]];
    let mut path = Vec::with_capacity(if record { cfg.steps + 1 } else { 0 });
    if record {
        path.push(y);
    }
    let add = |a: &State, b: &State, s: f64| -> State { std::array::from_fn(|i| a[i] + s * b[i]) };
    for _ in 0..cfg.steps {
        let k1 = rhs(chart, &cfg.fd, &y)?;
        let k2 = rhs(chart, &cfg.fd, &add(&y, &k1, h / 2.0))?;
        let k3 = rhs(chart, &cfg.fd, &add(&y, &k2, h / 2.0))?;
        let k4 = rhs(chart, &cfg.fd, &add(&y, &k3, h))?;
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]));
        if record {
            path.push(y);
        }
    }
    Ok((path, [y[0], y[1], y[2]]))
}

fn norm(a: Point) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn solve3(m: [[f64; 3]; 3], r: Point) -> Option<Point> {
    let det = super::chart::det(&m);
    if det.abs() < 1e-300 || !det.is_finite() {
        return None;
    }
    Some(std::array::from_fn(|k| {
        let mut a = m;
        for i in 0..3 {
            a[i][k] = r[i];
        }
        super::chart::det(&a) / det
    }))
}

/// Newton iteration on the initial velocity; returns the velocity and iteration count.
fn newton(chart: &dyn SmoothChart, cfg: &GeodesicConfig, p: Point, q: Point, seed: Point) -> Result<(Point, usize)> {
    let tol = cfg.tolerance * norm(sub(q, p)).max(1.0);
    let mut v = seed;
    let (_, end) = shoot(chart, cfg, p, v, false)?;
    let mut miss = sub(end, q);
    for it in 0..cfg.max_iterations {
        if norm(miss) <= tol {
            return Ok((v, it));
        }
        let delta = 1e-6 * norm(v).max(1e-3);
        let mut jac = [[0.0; 3]; 3];
        for j in 0..3 {
            let mut vp = v;
            let mut vm = v;
            vp[j] += delta;
            vm[j] -= delta;
            let (_, ep) = shoot(chart, cfg, p, vp, false)?;
            let (_, em) = shoot(chart, cfg, p, vm, false)?;
            for i in 0..3 {
                jac[i][j] = (ep[i] - em[i]) / (2.0 * delta);
            }
        }
        let step = solve3(jac, miss)
            .ok_or_else(|| Error::Solver(format!("singular shooting Jacobian from {p:?} to {q:?}")))?;
        let mut damping = 1.0;
        loop {
            let trial = [v[0] - damping * step[0], v[1] - damping * step[1], v[2] - damping * step[2]];
            let (_, e) = shoot(chart, cfg, p, trial, false)?;
            let m = sub(e, q);
            if norm(m) < norm(miss) || damping < 1e-4 {
                v = trial;
                miss = m;
                break;
            }
            damping *= 0.5;
        }
    }
    if norm(miss) <= tol {
        return Ok((v, cfg.max_iterations));
    }
    Err(Error::Solver(format!(
        "shooting from {p:?} to {q:?} missed by {:e} after {} iterations",
        norm(miss),
        cfg.max_iterations
    )))
}

fn simpson_weights(n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

/// Shortest geodesic between `p` and `q`, seeded by the coordinate straight line.
pub fn geodesic_length(chart: &dyn SmoothChart, p: Point, q: Point, cfg: &GeodesicConfig) -> Result<GeodesicRecord> {
    if cfg.steps == 0 || cfg.steps % 2 == 1 {
        return Err(Error::Invalid(format!("geodesic steps {} must be positive and even", cfg.steps)));
    }
    let seed = sub(q, p);
    let (v0, iterations) = newton(chart, cfg, p, q, seed)?;
    let (path, _) = shoot(chart, cfg, p, v0, true)?;
    let weights = simpson_weights(cfg.steps);
    let mut length = 0.0;
    for (y, w) in path.iter().zip(&weights) {
        let x = [y[0], y[1], y[2]];
        let v = [y[3], y[4], y[5]];
        length += w * inner(&chart.metric(x), v, v).max(0.0).sqrt();
    }
    let mut ambiguous = false;
    if cfg.restart_check {
        let s = norm(seed).max(1e-12);
        let perturbed = [seed[0] + 0.1 * s, seed[1] - 0.07 * s, seed[2] + 0.05 * s];
        if let Ok((v1, _)) = newton(chart, cfg, p, q, perturbed) {
            let (other, _) = shoot(chart, cfg, p, v1, true)?;
            let alt: f64 = other
                .iter()
                .zip(&weights)
                .map(|(y, w)| w * inner(&chart.metric([y[0], y[1], y[2]]), [y[3], y[4], y[5]], [y[3], y[4], y[5]]).max(0.0).sqrt())
                .sum();
            ambiguous = (alt - length).abs() > 1e-8 * length;
        }
    }
    Ok(GeodesicRecord {
        start: p,
        end: q,
        length,
        points: path.iter().map(|y| [y[0], y[1], y[2]]).collect(),
        velocities: path.iter().map(|y| [y[3], y[4], y[5]]).collect(),
        iterations,
        ambiguous,
    })
}

/// Arclength averages of `Rc(γ̂, γ̂)` and of the sectional curvature orthogonal to `γ̂`.
pub fn average_curvatures_along_geodesic(chart: &dyn SmoothChart, rec: &GeodesicRecord) -> Result<(f64, f64)> {
    let n = rec.points.len() - 1;
    let weights = simpson_weights(n);
    let mut ricci = 0.0;
    let mut sectional = 0.0;
    let mut total = 0.0;
    for ((x, v), w) in rec.points.iter().zip(&rec.velocities).zip(&weights) {
        let speed = inner(&chart.metric(*x), *v, *v).max(0.0).sqrt();
        let c = smooth_curvatures(chart, *x, *v)?;
        ricci += w * speed * c.ricci;
        sectional += w * speed * c.sectional_orthogonal;
        total += w * speed;
    }
    Ok((ricci / total, sectional / total))
}

/// Arclength average of `Rc(γ̂, γ̂)` along a solved geodesic.
pub fn average_ricci_along_geodesic(chart: &dyn SmoothChart, rec: &GeodesicRecord) -> Result<f64> {
    average_curvatures_along_geodesic(chart, rec).map(|(r, _)| r)
}
