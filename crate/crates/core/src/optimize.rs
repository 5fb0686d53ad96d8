//! Optimal control directions for a qubit: analytic optima for the two
//! presets, a grid-plus-simplex oracle for arbitrary Γ, and local
//! optimality diagnostics.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::{Euclid, Float};

use crate::error::{Error, Result};
use crate::linalg::{symmetric_lstsq_residual, CMatrix};
use crate::qubit::{
    controlled_rate_unchecked, nu_from_gamma, rate_free_bloch, BlochVector, ControlDirection, GammaMatrix,
};

/// `arccos(1/3)`, where the dephasing optimum changes branch.
pub fn alpha0() -> f64 {
    (1.0f64 / 3.0).acos()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizationResult {
    pub theta_opt: f64,
    pub phi_opt: f64,
    pub gamma_opt: f64,
    pub gamma_free: f64,
    /// `γ_opt / γ_free`; the analytic presets report the continuous limit
    /// where `γ_free` vanishes.
    pub kappa: Option<f64>,
    pub hessian_ok: bool,
    pub degenerate: bool,
    pub method: Method,
}

impl OptimizationResult {
    pub fn direction(&self) -> ControlDirection {
        ControlDirection::new(self.theta_opt, self.phi_opt)
    }
}

fn wrap_2pi(phi: f64) -> f64 {
    let w = Euclid::rem_euclid(&phi, &(2.0 * PI));
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// Maps `(θ, φ)` to `θ ∈ [0, π]`, `φ ∈ [0, 2π)` describing the same axis.
pub fn normalize_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = Euclid::rem_euclid(&theta, &(2.0 * PI));
    let mut p = phi;
    if t > PI {
        t = 2.0 * PI - t;
        p += PI;
    }
    (t, wrap_2pi(p))
}

/// The rate is even in `n_c`, so `(θ, φ)` and `(π − θ, φ + π)` are the same
/// control. Picks the representative with the smaller `(θ, φ)`.
fn canonical(theta: f64, phi: f64) -> (f64, f64) {
    let (t, p) = normalize_angles(theta, phi);
    let (ta, pa) = normalize_angles(PI - t, p + PI);
    let (t, p) = if (ta, pa) < (t, p) { (ta, pa) } else { (t, p) };
    if t < 1e-12 {
        (0.0, 0.0)
    } else {
        (t, p)
    }
}

/// Simplex termination settings.
#[derive(Clone, Copy, Debug)]
pub struct SimplexOptions {
    pub step: f64,
    pub ftol: f64,
    pub xtol: f64,
    pub max_iter: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            step: 0.05,
            ftol: 1e-14,
            xtol: 1e-10,
            max_iter: 2000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Nelder–Mead minimization with standard coefficients.
pub fn nelder_mead(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: SimplexOptions) -> SimplexResult {
    let n = x0.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[n] - vals[0];
        let diameter = pts[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&pts[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= opts.ftol && diameter <= opts.xtol.max(opts.ftol) {
            break;
        }
        if diameter <= opts.xtol {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| pts[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&pts[n])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            let (xc, fc) = if fr < vals[n] {
                let xc = along(-0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < vals[n].min(fr) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                let best = pts[0].clone();
                for i in 1..=n {
                    for k in 0..n {
                        pts[i][k] = best[k] + 0.5 * (pts[i][k] - best[k]);
                    }
                    vals[i] = f(&pts[i]);
                }
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    SimplexResult {
        x: pts[best].clone(),
        value: vals[best],
        iterations,
    }
}

/// Grid size used when none is given.
pub const DEFAULT_GRID: (usize, usize) = (64, 128);
const MAX_CANDIDATES: usize = 16;

/// Minimizes the controlled rate over `(θ_c, φ_c)` by exhaustive grid search
/// followed by simplex refinement of the best discrete local minima.
pub fn grid_oracle(
    g: &GammaMatrix,
    r0: BlochVector,
    n_theta: usize,
    n_phi: usize,
) -> Result<OptimizationResult> {
    r0.require_pure()?;
    if n_theta < 2 || n_phi < 1 {
        return Err(Error::InvalidArgument("grid needs n_theta >= 2 and n_phi >= 1"));
    }
    let r = r0.to_array();
    let rate = |t: f64, p: f64| controlled_rate_unchecked(g, r, BlochVector::from_angles(t, p).to_array());
    let dt = PI / (n_theta - 1) as f64;
    let dp = 2.0 * PI / n_phi as f64;
    let mut grid = alloc::vec![0.0; n_theta * n_phi];
    for i in 0..n_theta {
        for j in 0..n_phi {
            grid[i * n_phi + j] = rate(i as f64 * dt, j as f64 * dp);
        }
    }

    // Discrete local minima (φ periodic, θ clamped).
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n_theta {
        for j in 0..n_phi {
            let v = grid[i * n_phi + j];
            let mut is_min = true;
            'nb: for di in [-1i64, 0, 1] {
                let ii = i as i64 + di;
                if ii < 0 || ii >= n_theta as i64 {
                    continue;
                }
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(n_phi as i64) as usize;
                    if grid[ii as usize * n_phi + jj] < v {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                candidates.push((v, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    candidates.truncate(MAX_CANDIDATES);

    let scale = g.trace().abs().max(1e-300);
    let opts = SimplexOptions {
        step: 0.5 * dt,
        ftol: 1e-15 * scale.max(1.0),
        xtol: 1e-11,
        max_iter: 4000,
    };
    let (ar, br) = r0.angles();
    let mut finalists: Vec<(f64, f64, f64)> = Vec::new();
    finalists.push({
        let (t, p) = canonical(ar, br);
        (rate(t, p), t, p)
    });
    for &(v, i, j) in &candidates {
        let (t0, p0) = (i as f64 * dt, j as f64 * dp);
        let (tc, pc) = canonical(t0, p0);
        finalists.push((v, tc, pc));
        let res = nelder_mead(|x| rate(x[0], x[1]), &[t0, p0], opts);
        if res.value < v {
            let (t, p) = canonical(res.x[0], res.x[1]);
            finalists.push((rate(t, p), t, p));
        }
    }
    let best = finalists.iter().map(|f| f.0).fold(f64::INFINITY, f64::min);
    let tie = 1e-12 * scale.max(1.0);
    let (gamma_opt, theta, phi) = finalists
        .iter()
        .copied()
        .filter(|f| f.0 <= best + tie)
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.2.total_cmp(&b.2)))
        .expect("at least one finalist");

    let gamma_free = rate_free_bloch(g, r0)?;
    let stat = stationarity_check(g, r0, ControlDirection::new(theta, phi))?;
    Ok(OptimizationResult {
        theta_opt: theta,
        phi_opt: phi,
        gamma_opt,
        gamma_free,
        kappa: (gamma_free > 1e-15).then(|| gamma_opt / gamma_free),
        hessian_ok: stat.hessian_ok,
        degenerate: stat.degenerate,
        method: Method::Numeric,
    })
}

fn check_analytic_inputs(alpha: f64, beta: f64, mu: f64) -> Result<()> {
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::Domain {
            what: "polar angle alpha",
            value: alpha,
        });
    }
    if !beta.is_finite() {
        return Err(Error::NonFinite { what: "azimuth beta" });
    }
    if !mu.is_finite() {
        return Err(Error::NonFinite { what: "noise rate" });
    }
    if mu < 0.0 {
        return Err(Error::NegativeRate { rate: mu });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn analytic_result(
    g: GammaMatrix,
    alpha: f64,
    beta: f64,
    theta: f64,
    phi: f64,
    gamma_opt: f64,
    gamma_free: f64,
    kappa: f64,
) -> Result<OptimizationResult> {
    let stat = stationarity_check(
        &g,
        BlochVector::from_angles(alpha, beta),
        ControlDirection::new(theta, phi),
    )?;
    Ok(OptimizationResult {
        theta_opt: theta,
        phi_opt: wrap_2pi(phi),
        gamma_opt,
        gamma_free,
        kappa: Some(kappa),
        hessian_ok: stat.hessian_ok,
        degenerate: stat.degenerate,
        method: Method::Analytic,
    })
}

/// Piecewise optimum for dephasing noise.
///
/// | range              | θ_c         | φ_c       | γ_opt                        |
/// |--------------------|-------------|-----------|------------------------------|
/// | α < α₀             | α/2         | β         | (μ/8)(5 − 2cos α − 3cos²α)   |
/// | α₀ ≤ α ≤ π − α₀    | π/2         | β + π/2   | μ/2                          |
/// | α > π − α₀         | (π + α)/2   | β         | (μ/8)(5 − 3cos α)(1 + cos α) |
///
/// with `α₀ = arccos(1/3)`.
pub fn optimal_dephasing(alpha: f64, beta: f64, mu: f64) -> Result<OptimizationResult> {
    check_analytic_inputs(alpha, beta, mu)?;
    let a0 = alpha0();
    let c = alpha.cos();
    let s2 = alpha.sin().powi(2);
    let gamma_free = mu * s2;
    let (theta, phi, gamma, kappa) = if alpha < a0 {
        (
            0.5 * alpha,
            beta,
            mu / 8.0 * (5.0 - 2.0 * c - 3.0 * c * c),
            (5.0 + 3.0 * c) / (8.0 * (1.0 + c)),
        )
    } else if alpha <= PI - a0 {
        (0.5 * PI, beta + 0.5 * PI, 0.5 * mu, 0.5 / s2)
    } else {
        (
            0.5 * (PI + alpha),
            beta,
            mu / 8.0 * (5.0 - 3.0 * c) * (1.0 + c),
            (5.0 - 3.0 * c) / (8.0 * (1.0 - c)),
        )
    };
    analytic_result(
        crate::qubit::preset_dephasing(mu)?,
        alpha,
        beta,
        theta,
        phi,
        gamma,
        gamma_free,
        kappa,
    )
}

/// Optimum for amplitude damping: `n_c` at `(α/2, β)`,
/// `γ_opt = (3/8) μ sin⁴(α/2)`, so `κ = 3/8` for every pure state.
pub fn optimal_amplitude_damping(alpha: f64, beta: f64, mu: f64) -> Result<OptimizationResult> {
    check_analytic_inputs(alpha, beta, mu)?;
    let s4 = (0.5 * alpha).sin().powi(4);
    analytic_result(
        crate::qubit::preset_amplitude_damping(mu)?,
        alpha,
        beta,
        0.5 * alpha,
        beta,
        0.375 * mu * s4,
        mu * s4,
        0.375,
    )
}

/// Finite-difference gradient and Hessian diagnostics at a direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stationarity {
    pub residual_theta: f64,
    pub residual_phi: f64,
    /// `∂²θ`, `∂θ∂φ`, `∂²φ`.
    pub hessian: [f64; 3],
    pub hessian_ok: bool,
    /// A flat direction: the pole (φ undefined) or a singular Hessian.
    pub degenerate: bool,
}

pub const FD_STEP: f64 = 1e-5;

/// Central differences with step `1e-5` and one Richardson extrapolation.
/// The second-order test is `A > 0 ∧ AC − B² > 0`.
pub fn stationarity_check(g: &GammaMatrix, r0: BlochVector, nc: ControlDirection) -> Result<Stationarity> {
    r0.require_pure()?;
    let r = r0.to_array();
    let f = |t: f64, p: f64| controlled_rate_unchecked(g, r, BlochVector::from_angles(t, p).to_array());
    let (t, p) = (nc.theta, nc.phi);
    let richardson = |d: &dyn Fn(f64) -> f64| {
        let h = FD_STEP;
        (4.0 * d(0.5 * h) - d(h)) / 3.0
    };
    let dt = richardson(&|h| (f(t + h, p) - f(t - h, p)) / (2.0 * h));
    let dp = richardson(&|h| (f(t, p + h) - f(t, p - h)) / (2.0 * h));
    let f0 = f(t, p);
    let a = richardson(&|h| (f(t + h, p) - 2.0 * f0 + f(t - h, p)) / (h * h));
    let c = richardson(&|h| (f(t, p + h) - 2.0 * f0 + f(t, p - h)) / (h * h));
    let b = richardson(&|h| {
        (f(t + h, p + h) - f(t + h, p - h) - f(t - h, p + h) + f(t - h, p - h)) / (4.0 * h * h)
    });
    let det = a * c - b * b;
    let hessian_ok = a > 0.0 && det > 0.0;

    // Second differences carry roundoff of order ε·|f|/h².
    let noise = 1e-4 * (g.trace().abs() + f0.abs()).max(1e-300);
    let half_trace = 0.5 * (a + c);
    let radius = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let min_eig_abs = (half_trace - radius).abs().min((half_trace + radius).abs());
    let degenerate = t.sin().abs() < 1e-6 || min_eig_abs < noise;
    Ok(Stationarity {
        residual_theta: dt.abs(),
        residual_phi: dp.abs(),
        hessian: [a, b, c],
        hessian_ok,
        degenerate,
    })
}

/// Least-squares residual of the projector stationarity equation
///
/// `M(Λ) = −3/2 (Γ P_n P_r + P_r P_n Γ) + ½(Γ P_r + P_r Γ) − ½ RᵀΓR
///        + ½(r νᵀ + ν rᵀ) + P_n Λ + Λ P_n − Λ`
///
/// minimized over unconstrained `Λ`. Γ enters through its real part; the
/// imaginary part only contributes through ν.
pub fn variational_residual(g: &GammaMatrix, r0: BlochVector, nc: ControlDirection) -> Result<f64> {
    r0.require_pure()?;
    let gr = g.real_part();
    let r = r0.to_array();
    let n = nc.unit_vector();
    let nu = nu_from_gamma(g).0;
    let outer = |a: [f64; 3], b: [f64; 3]| {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[i] * b[j];
            }
        }
        m
    };
    let mul = |a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]| {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        m
    };
    let transpose = |a: &[[f64; 3]; 3]| {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[j][i];
            }
        }
        m
    };
    let pn = outer(n, n);
    let pr = outer(r, r);
    let rm = [[0.0, r[2], -r[1]], [-r[2], 0.0, r[0]], [r[1], -r[0], 0.0]];
    let g_pn_pr = mul(&mul(&gr, &pn), &pr);
    let pr_pn_g = mul(&mul(&pr, &pn), &gr);
    let g_pr = mul(&gr, &pr);
    let pr_g = mul(&pr, &gr);
    let rgr = mul(&mul(&transpose(&rm), &gr), &rm);
    let rn = outer(r, nu);
    let nr = outer(nu, r);
    let mut c = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            c[3 * i + j] = -1.5 * (g_pn_pr[i][j] + pr_pn_g[i][j]) + 0.5 * (g_pr[i][j] + pr_g[i][j])
                - 0.5 * rgr[i][j]
                + 0.5 * (rn[i][j] + nr[i][j]);
        }
    }
    // Λ ↦ P_n Λ + Λ P_n − Λ on row-major vec(Λ): P⊗I + I⊗P − I.
    let a = CMatrix::from_fn(9, 9, |row, col| {
        let (i, j) = (row / 3, row % 3);
        let (k, l) = (col / 3, col % 3);
        let mut v = 0.0;
        if j == l {
            v += pn[i][k];
        }
        if i == k {
            v += pn[l][j];
        }
        if row == col {
            v -= 1.0;
        }
        num_complex::Complex64::new(v, 0.0)
    });
    symmetric_lstsq_residual(&a, &c)
}
