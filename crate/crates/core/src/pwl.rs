//! Continuous piecewise-linear functions on a uniform mesh of `[0, 1]` and the
//! L² projection onto them.

use crate::error::{Error, Result};
use crate::func1d::{GridFunction, Interval};
use crate::tridiag;

/// Sharp constant of `sup_τ |p| ≤ C'₀ h^{-1/2} ‖p‖_{L²(τ)}` for affine `p`
/// (attained by `p = (1, -1/2)` at the cell ends).
pub const INVERSE_C0: f64 = 2.0;
/// Sharp constant of `|p'| ≤ C'₁ h^{-3/2} ‖p‖_{L²(τ)}` for affine `p`
/// (attained by `p = (1, -1)`); also covers `sup |p|` when `h ≤ 1`.
pub const INVERSE_C1: f64 = 3.464_101_615_137_754_6;

/// Uniform mesh with `N ≥ 2` cells of width `h = 1/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformMesh {
    cells: usize,
}

impl UniformMesh {
    pub fn new(cells: usize) -> Result<Self> {
        if cells < 2 {
            return Err(Error::InvalidParameter(format!("mesh needs at least 2 cells, got {cells}")));
        }
        Ok(Self { cells })
    }

    /// Mesh whose width is `1/round(1/h)`.
    pub fn from_width(h: f64) -> Result<Self> {
        if !(h > 0.0 && h <= 0.5) {
            return Err(Error::InvalidParameter(format!("mesh width {h} must lie in (0, 1/2]")));
        }
        Self::new((1.0 / h).round() as usize)
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn h(&self) -> f64 {
        1.0 / self.cells as f64
    }

    pub fn breakpoint(&self, i: usize) -> f64 {
        if i == self.cells {
            1.0
        } else {
            i as f64 * self.h()
        }
    }
}

/// Element of the piecewise-linear space, stored by nodal values.
#[derive(Debug, Clone, PartialEq)]
pub struct PwlFunction {
    mesh: UniformMesh,
    coeffs: Vec<f64>,
}

impl PwlFunction {
    pub fn new(mesh: UniformMesh, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != mesh.cells + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for a mesh with {} nodes",
                coeffs.len(),
                mesh.cells + 1
            )));
        }
        Ok(Self { mesh, coeffs })
    }

    pub fn mesh(&self) -> UniformMesh {
        self.mesh
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, s: f64) -> f64 {
        let t = (s * self.mesh.cells as f64).clamp(0.0, self.mesh.cells as f64);
        let k = (t.floor() as usize).min(self.mesh.cells - 1);
        let u = t - k as f64;
        self.coeffs[k] * (1.0 - u) + self.coeffs[k + 1] * u
    }

    pub fn slopes(&self) -> Vec<f64> {
        let n = self.mesh.cells as f64;
        self.coeffs.windows(2).map(|w| (w[1] - w[0]) * n).collect()
    }

    /// Samples on a uniform grid over `[0, 1]` with `n` nodes.
    pub fn sample(&self, n: usize) -> Result<GridFunction> {
        GridFunction::from_fn(Interval::unit(), n, |s| self.eval(s))
    }
}

/// L² projection of the piecewise-linear extension of `w`.
///
/// Loads `∫ w·φ_i` are integrated exactly: the grid and mesh breakpoints are
/// merged and Simpson's rule is applied to each quadratic piece.
pub fn project_l2(mesh: UniformMesh, w: &GridFunction) -> Result<PwlFunction> {
    let load = loads(mesh, w)?;
    let (lower, diag, upper) = mass_matrix(mesh);
    let coeffs = tridiag::solve(&lower, &diag, &upper, &load)?;
    PwlFunction::new(mesh, coeffs)
}

/// `∫ w·φ_i` for every hat `φ_i` of the mesh, `w` extended piecewise linearly.
pub fn loads(mesh: UniformMesh, w: &GridFunction) -> Result<Vec<f64>> {
    if w.interval() != Interval::unit() {
        return Err(Error::InvalidParameter("projection expects a function on [0, 1]".into()));
    }
    let nodes_per_cell = mesh.h() / w.spacing() + 1.0;
    if nodes_per_cell < 5.0 - 1e-9 {
        return Err(Error::GridTooCoarse { nodes_per_cell });
    }
    let h = mesh.h();
    let grid_h = w.spacing();
    let mut load = vec![0.0; mesh.cells + 1];
    let mut pts = Vec::new();
    for j in 0..mesh.cells {
        let (a, b) = (mesh.breakpoint(j), mesh.breakpoint(j + 1));
        pts.clear();
        pts.push(a);
        let mut k = (a / grid_h).floor() as usize + 1;
        while k < w.len() && w.node(k) < b {
            if w.node(k) > a {
                pts.push(w.node(k));
            }
            k += 1;
        }
        pts.push(b);
        let piece = |x: f64| {
            let u = (x - a) / h;
            let wx = w.eval_linear(x);
            (wx * (1.0 - u), wx * u)
        };
        for seg in pts.windows(2) {
            let (x0, x1) = (seg[0], seg[1]);
            let (l0, r0) = piece(x0);
            let (lm, rm) = piece(0.5 * (x0 + x1));
            let (l1, r1) = piece(x1);
            let c = (x1 - x0) / 6.0;
            load[j] += c * (l0 + 4.0 * lm + l1);
            load[j + 1] += c * (r0 + 4.0 * rm + r1);
        }
    }
    Ok(load)
}

/// `max_i |⟨w − p, φ_i⟩|` over the hats of the mesh.
pub fn galerkin_residual(w: &GridFunction, p: &PwlFunction) -> Result<f64> {
    let mesh = p.mesh();
    let load = loads(mesh, w)?;
    let (lower, diag, upper) = mass_matrix(mesh);
    let c = &p.coeffs;
    let n = c.len();
    Ok((0..n)
        .map(|i| {
            let mut mc = diag[i] * c[i];
            if i > 0 {
                mc += lower[i] * c[i - 1];
            }
            if i + 1 < n {
                mc += upper[i] * c[i + 1];
            }
            (load[i] - mc).abs()
        })
        .fold(0.0, f64::max))
}

/// Tridiagonal mass matrix of the hat basis as (lower, diagonal, upper).
pub fn mass_matrix(mesh: UniformMesh) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let nn = mesh.cells + 1;
    let h = mesh.h();
    let mut diag = vec![2.0 * h / 3.0; nn];
    diag[0] = h / 3.0;
    diag[nn - 1] = h / 3.0;
    (vec![h / 6.0; nn], diag, vec![h / 6.0; nn])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseOrder {
    /// `sup |p|` against `h^{-1/2}‖p‖`
    Zero,
    /// `max(sup |p|, |p'|)` against `h^{-3/2}‖p‖`
    One,
}

/// Cell-wise inverse inequality; returns `(lhs, rhs)` of the cell where the
/// ratio `lhs/rhs` is largest.
pub fn inverse_inequality_check(mesh: UniformMesh, p: &PwlFunction, m: InverseOrder) -> (f64, f64) {
    let h = mesh.h();
    let mut worst = (0.0, 0.0, -1.0);
    for w in p.coeffs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let l2 = (h * (a * a + a * b + b * b) / 3.0).sqrt();
        let sup = a.abs().max(b.abs());
        let (lhs, rhs) = match m {
            InverseOrder::Zero => (sup, INVERSE_C0 * h.powf(-0.5) * l2),
            InverseOrder::One => (sup.max((b - a).abs() / h), INVERSE_C1 * h.powf(-1.5) * l2),
        };
        let ratio = if rhs > 0.0 { lhs / rhs } else if lhs > 0.0 { f64::INFINITY } else { 0.0 };
        if ratio > worst.2 {
            worst = (lhs, rhs, ratio);
        }
    }
    (worst.0, worst.1)
}

/// Constants entering the mesh admissibility conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshConstants {
    /// Lower bound of `|γ'|`.
    pub c_gamma: f64,
    /// Lower bound of `|g'|`.
    pub c_g: f64,
    /// Inverse inequality, order 0.
    pub c0_inverse: f64,
    /// Inverse inequality, order 1.
    pub c1_inverse: f64,
    /// Projection error in `L^∞` per `h^{3/2}‖·‖_{H⁴}`.
    pub c0_approx: f64,
    /// Projection error in `W^{1,∞}` per `h^{1/2}‖·‖_{H⁴}`.
    pub c1_approx: f64,
}

/// Bound on `‖Π_h g − g‖_∞ / (h^{3/2}‖g‖_{H⁴})` for `h ≤ 1/8`. The
/// quadratic curve maps are the worst case measured (about 0.016).
pub const APPROX_C0: f64 = 0.05;
/// Bound on `‖Π_h g − g‖_{W^{1,∞}} / (h^{1/2}‖g‖_{H⁴})` for `h ≤ 1/8`
/// (about 0.094 measured).
pub const APPROX_C1: f64 = 0.2;

impl MeshConstants {
    pub fn calibrated(c_gamma: f64, c_g: f64) -> Self {
        Self {
            c_gamma,
            c_g,
            c0_inverse: INVERSE_C0,
            c1_inverse: INVERSE_C1,
            c0_approx: APPROX_C0,
            c1_approx: APPROX_C1,
        }
    }

    /// Bound on `‖g∘γ − Π_h(gᵉ∘γ)‖_∞` implied by the two error sources.
    pub fn sup_deviation(&self, h: f64, eps: f64, g_norm_h4: f64) -> f64 {
        self.c0_approx * h.powf(1.5) * g_norm_h4 + self.c0_inverse * eps / (self.c_gamma * h.sqrt())
    }
}

/// Both admissibility inequalities coupling `h` to `ε`:
/// `C̃₁h²‖g∘γ‖ + C'₁ε/C_γ ≤ C_gC_γ h^{3/2}/2` and
/// `C̃₀h²‖g∘γ‖ + C'₀ε/C_γ < h^{3/2}/2`.
pub fn check_mesh_conditions(h: f64, eps: f64, g_norm_h4: f64, k: &MeshConstants) -> bool {
    let h32 = h.powf(1.5);
    let slope = k.c1_approx * h * h * g_norm_h4 + k.c1_inverse * eps / k.c_gamma <= 0.5 * k.c_g * k.c_gamma * h32;
    let value = k.c0_approx * h * h * g_norm_h4 + k.c0_inverse * eps / k.c_gamma < 0.5 * h32;
    slope && value
}

/// Extreme absolute cell slopes.
pub fn derivative_bracket(p: &PwlFunction) -> (f64, f64) {
    p.slopes()
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), s| (lo.min(s.abs()), hi.max(s.abs())))
}
