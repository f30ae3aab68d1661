//! Smooth Riemannian charts and their curvature, analytic or by finite differences.

use crate::{Error, Result};

pub type Point = [f64; 3];
pub type Tensor2 = [[f64; 3]; 3];
/// `d[k][i][j] = ∂_k g_ij`, or `Γ[k][i][j] = Γ^k_ij`.
pub type Tensor3 = [[[f64; 3]; 3]; 3];

/// Curvature of a smooth metric at a point, relative to a direction `u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothCurvature {
    pub scalar: f64,
    /// Sectional curvature of the plane orthogonal to `u`.
    pub sectional_orthogonal: f64,
    /// `Rc(u, u)` for unit `u`.
    pub ricci: f64,
}

/// A coordinate chart on a smooth 3-manifold.
pub trait SmoothChart: Send + Sync {
    fn name(&self) -> &str;

    /// Metric components `g_ij(x)`.
    fn metric(&self, x: Point) -> Tensor2;

    /// Characteristic length of the coordinate domain; scales finite-difference steps.
    fn scale(&self) -> f64 {
        1.0
    }

    /// Closed-form `∂_k g_ij`, when known.
    fn metric_derivatives(&self, _x: Point) -> Option<Tensor3> {
        None
    }

    /// Closed-form curvature, when known.
    fn analytic_curvature(&self, _x: Point, _u: Point) -> Option<SmoothCurvature> {
        None
    }
}

/// Finite-difference settings for the numeric curvature pipeline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteDifference {
    /// Step as a fraction of [`SmoothChart::scale`].
    pub relative_step: f64,
    /// Combine steps `h` and `h/2` to cancel the leading error term.
    pub richardson: bool,
}

impl Default for FiniteDifference {
    fn default() -> Self {
        FiniteDifference {
            relative_step: 1e-4,
            richardson: true,
        }
    }
}

impl FiniteDifference {
    fn derivative<const N: usize>(&self, scale: f64, x: Point, k: usize, f: &dyn Fn(Point) -> [f64; N]) -> [f64; N] {
        let central = |h: f64| {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let (a, b) = (f(xp), f(xm));
            std::array::from_fn(|i| (a[i] - b[i]) / (2.0 * h))
        };
        let h = self.relative_step * scale;
        let d1 = central(h);
        if !self.richardson {
            return d1;
        }
        let d2 = central(h / 2.0);
        std::array::from_fn(|i| (4.0 * d2[i] - d1[i]) / 3.0)
    }
}

fn flatten2(t: Tensor2) -> [f64; 9] {
    std::array::from_fn(|i| t[i / 3][i % 3])
}

fn flatten3(t: Tensor3) -> [f64; 27] {
    std::array::from_fn(|i| t[i / 9][(i / 3) % 3][i % 3])
}

pub fn det(g: &Tensor2) -> f64 {
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

/// Inverse of a symmetric positive-definite metric; errors when `g` is not SPD.
pub fn inverse_spd(g: &Tensor2) -> Result<Tensor2> {
    let m1 = g[0][0];
    let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let d = det(g);
    if !(m1 > 0.0 && m2 > 0.0 && d > 0.0) {
        return Err(Error::Chart(format!("metric is not positive definite: {g:?}")));
    }
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, e) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (g[a][c] * g[b][e] - g[a][e] * g[b][c]) / d;
        }
    }
    Ok(inv)
}

pub fn inner(g: &Tensor2, u: Point, v: Point) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += g[i][j] * u[i] * v[j];
        }
    }
    s
}

/// `∂_k g_ij`, analytic when the chart provides it.
pub fn metric_derivatives(chart: &dyn SmoothChart, x: Point, fd: &FiniteDifference) -> Tensor3 {
    if let Some(d) = chart.metric_derivatives(x) {
        return d;
    }
    numeric_metric_derivatives(chart, x, fd)
}

/// `∂_k g_ij` by central differences, ignoring any closed form.
pub fn numeric_metric_derivatives(chart: &dyn SmoothChart, x: Point, fd: &FiniteDifference) -> Tensor3 {
    let f = |p: Point| flatten2(chart.metric(p));
    std::array::from_fn(|k| {
        let d = fd.derivative(chart.scale(), x, k, &f);
        std::array::from_fn(|i| std::array::from_fn(|j| d[3 * i + j]))
    })
}

/// Christoffel symbols `Γ^k_ij`.
pub fn christoffel(chart: &dyn SmoothChart, x: Point, fd: &FiniteDifference) -> Result<Tensor3> {
    let g = chart.metric(x);
    let ginv = inverse_spd(&g)?;
    let dg = metric_derivatives(chart, x, fd);
    let mut out = [[[0.0; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in i..3 {
                let mut s = 0.0;
                for l in 0..3 {
                    s += ginv[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
                }
                out[k][i][j] = 0.5 * s;
                out[k][j][i] = 0.5 * s;
            }
        }
    }
    Ok(out)
}

/// Ricci tensor `R_ij` from finite differences of the Christoffel symbols.
pub fn ricci_tensor(chart: &dyn SmoothChart, x: Point, fd: &FiniteDifference) -> Result<Tensor2> {
    let gamma = christoffel(chart, x, fd)?;
    let f = |p: Point| flatten3(christoffel(chart, p, fd).unwrap_or([[[f64::NAN; 3]; 3]; 3]));
    // dgamma[m][k][i][j] = ∂_m Γ^k_ij
    let dgamma: [Tensor3; 3] = std::array::from_fn(|m| {
        let d = fd.derivative(chart.scale(), x, m, &f);
        std::array::from_fn(|k| std::array::from_fn(|i| std::array::from_fn(|j| d[9 * k + 3 * i + j])))
    });
    // R_ij = ∂_k Γ^k_ij − ∂_j Γ^k_ik + Γ^k_kl Γ^l_ij − Γ^k_jl Γ^l_ik
    let mut ric = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0.0;
            for k in 0..3 {
                s += dgamma[k][k][i][j] - dgamma[j][k][i][k];
                for l in 0..3 {
                    s += gamma[k][k][l] * gamma[l][i][j] - gamma[k][j][l] * gamma[l][i][k];
                }
            }
            ric[i][j] = s;
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let m = 0.5 * (ric[i][j] + ric[j][i]);
            ric[i][j] = m;
            ric[j][i] = m;
        }
    }
    if ric.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Chart(format!("non-finite curvature at {x:?}")));
    }
    Ok(ric)
}

/// Scalar, orthogonal sectional and Ricci curvature by finite differences.
pub fn numeric_curvatures(chart: &dyn SmoothChart, x: Point, u: Point, fd: &FiniteDifference) -> Result<SmoothCurvature> {
    let g = chart.metric(x);
    let ginv = inverse_spd(&g)?;
    let ric = ricci_tensor(chart, x, fd)?;
    let mut scalar = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            scalar += ginv[i][j] * ric[i][j];
        }
    }
    let uu = inner(&g, u, u);
    if !(uu > 0.0) {
        return Err(Error::Chart("direction must be nonzero".into()));
    }
    let ricci = inner(&ric, u, u) / uu;
    Ok(SmoothCurvature {
        scalar,
        sectional_orthogonal: 0.5 * scalar - ricci,
        ricci,
    })
}

/// Closed forms where the chart has them, finite differences otherwise.
pub fn smooth_curvatures(chart: &dyn SmoothChart, x: Point, u: Point) -> Result<SmoothCurvature> {
    inverse_spd(&chart.metric(x))?;
    if let Some(k) = chart.analytic_curvature(x, u) {
        return Ok(k);
    }
    numeric_curvatures(chart, x, u, &FiniteDifference::default())
}

/// Flat space in Cartesian coordinates.
#[derive(Clone, Copy, Debug, Default)]
pub struct Euclidean;

impl SmoothChart for Euclidean {
    fn name(&self) -> &str {
        "euclidean"
    }

    fn metric(&self, _x: Point) -> Tensor2 {
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    }

    fn metric_derivatives(&self, _x: Point) -> Option<Tensor3> {
        Some([[[0.0; 3]; 3]; 3])
    }

    fn analytic_curvature(&self, _x: Point, _u: Point) -> Option<SmoothCurvature> {
        Some(SmoothCurvature {
            scalar: 0.0,
            sectional_orthogonal: 0.0,
            ricci: 0.0,
        })
    }
}

/// Round 3-sphere of radius `r` in hyperspherical coordinates `(χ, θ, φ)`.
#[derive(Clone, Copy, Debug)]
pub struct Sphere3 {
    pub radius: f64,
}

impl Sphere3 {
    /// Unit vector in R⁴ for hyperspherical coordinates.
    pub fn embed(x: Point) -> [f64; 4] {
        let (c, t, p) = (x[0], x[1], x[2]);
        [c.sin() * t.sin() * p.cos(), c.sin() * t.sin() * p.sin(), c.sin() * t.cos(), c.cos()]
    }

    /// Hyperspherical coordinates of a unit vector in R⁴.
    pub fn coordinates(v: [f64; 4]) -> Point {
        let chi = v[3].clamp(-1.0, 1.0).acos();
        let rho = (v[0] * v[0] + v[1] * v[1]).sqrt();
        let theta = rho.atan2(v[2]);
        let phi = v[1].atan2(v[0]);
        [chi, theta, phi]
    }
}

impl SmoothChart for Sphere3 {
    fn name(&self) -> &str {
        "sphere"
    }

    fn metric(&self, x: Point) -> Tensor2 {
        let r2 = self.radius * self.radius;
        let s = x[0].sin().powi(2);
        [[r2, 0.0, 0.0], [0.0, r2 * s, 0.0], [0.0, 0.0, r2 * s * x[1].sin().powi(2)]]
    }

    fn scale(&self) -> f64 {
        1.0
    }

    fn analytic_curvature(&self, _x: Point, _u: Point) -> Option<SmoothCurvature> {
        let k = 1.0 / (self.radius * self.radius);
        Some(SmoothCurvature {
            scalar: 6.0 * k,
            sectional_orthogonal: k,
            ricci: 2.0 * k,
        })
    }
}

/// Product of a round 2-sphere of radius `r` with a line, coordinates `(θ, φ, z)`.
#[derive(Clone, Copy, Debug)]
pub struct Cylinder3 {
    pub radius: f64,
}

impl SmoothChart for Cylinder3 {
    fn name(&self) -> &str {
        "cylinder"
    }

    fn metric(&self, x: Point) -> Tensor2 {
        let r2 = self.radius * self.radius;
        [[r2, 0.0, 0.0], [0.0, r2 * x[0].sin().powi(2), 0.0], [0.0, 0.0, 1.0]]
    }

    fn scale(&self) -> f64 {
        1.0
    }

    fn analytic_curvature(&self, x: Point, u: Point) -> Option<SmoothCurvature> {
        let k = 1.0 / (self.radius * self.radius);
        let cos2 = u[2] * u[2] / inner(&self.metric(x), u, u);
        Some(SmoothCurvature {
            scalar: 2.0 * k,
            sectional_orthogonal: cos2 * k,
            ricci: (1.0 - cos2) * k,
        })
    }
}

/// Plane-wave metric `e^{fW} dx² + e^{−fW} dy² + e^{2a} dθ²` with `W = A sin θ`,
/// coordinates `(x, y, θ)`.
#[derive(Clone, Copy, Debug)]
pub struct Gowdy {
    pub f: f64,
    pub amplitude: f64,
    pub a: f64,
}

impl Default for Gowdy {
    fn default() -> Self {
        Gowdy {
            f: 1.0,
            amplitude: 0.1,
            a: 0.0,
        }
    }
}

impl SmoothChart for Gowdy {
    fn name(&self) -> &str {
        "gowdy"
    }

    fn metric(&self, x: Point) -> Tensor2 {
        let w = self.f * self.amplitude * x[2].sin();
        [[w.exp(), 0.0, 0.0], [0.0, (-w).exp(), 0.0], [0.0, 0.0, (2.0 * self.a).exp()]]
    }

    fn scale(&self) -> f64 {
        2.0 * std::f64::consts::PI
    }

    fn metric_derivatives(&self, x: Point) -> Option<Tensor3> {
        let w = self.f * self.amplitude * x[2].sin();
        let dw = self.f * self.amplitude * x[2].cos();
        let mut d = [[[0.0; 3]; 3]; 3];
        d[2][0][0] = dw * w.exp();
        d[2][1][1] = -dw * (-w).exp();
        Some(d)
    }
}

/// Nil geometry `dx² + dy² + (dz − x dy)²`, coordinates `(x, y, z)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Nil3;

impl SmoothChart for Nil3 {
    fn name(&self) -> &str {
        "nil3"
    }

    fn metric(&self, p: Point) -> Tensor2 {
        let x = p[0];
        [[1.0, 0.0, 0.0], [0.0, 1.0 + x * x, -x], [0.0, -x, 1.0]]
    }

    fn metric_derivatives(&self, p: Point) -> Option<Tensor3> {
        let x = p[0];
        let mut d = [[[0.0; 3]; 3]; 3];
        d[0][1][1] = 2.0 * x;
        d[0][1][2] = -1.0;
        d[0][2][1] = -1.0;
        Some(d)
    }
}
