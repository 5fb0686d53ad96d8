//! Strong coherent control with strength `g = ω/τ`.
//!
//! Over one measurement interval the propagator is
//! `exp(ω L_c + τ (L_μ + L_{H₀}))` with `L_c = −i[H_c, ·]`. When
//! `e^{−iωH_c}` is a global phase the control drops out at `τ = 0` and the
//! Zeno-limit rate becomes an average over the control frame.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{pairwise_sum, CMatrix};
use crate::liouville::{
    hamiltonian_superop, total_liouvillian, Operator, PureState, Superoperator, SystemModel, HERMITIAN_TOL,
};
use crate::quadrature::GaussLegendre;
use crate::qubit::ControlDirection;
use crate::zeno::{check_state_dim, real_part, survival_under};

/// Default Gauss–Legendre order for η-integrals.
pub const DEFAULT_ORDER: usize = 64;
/// Nested order for the second derivative.
pub const NESTED_ORDER: usize = 32;
/// Phase tolerance for the resonance condition.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Control Hamiltonian `H_c` with rotation weight `ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlHamiltonian {
    hc: Operator,
    omega: f64,
}

impl ControlHamiltonian {
    pub fn new(hc: Operator, omega: f64) -> Result<Self> {
        hc.require_hermitian(HERMITIAN_TOL)?;
        if !omega.is_finite() {
            return Err(Error::NonFinite {
                what: "control weight",
            });
        }
        Ok(Self { hc, omega })
    }

    /// `H_c = n_c·σ` with `ω = nπ`.
    pub fn qubit(direction: ControlDirection, multiple: i64) -> Self {
        Self {
            hc: direction.hamiltonian(),
            omega: multiple as f64 * PI,
        }
    }

    pub fn hc(&self) -> &Operator {
        &self.hc
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Control strength `g = ω/τ`.
    pub fn strength(&self, tau: f64) -> f64 {
        self.omega / tau
    }
}

/// A pair of eigenvalues whose gap breaks the resonance condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonanceViolation {
    pub i: usize,
    pub j: usize,
    pub gap: f64,
    /// Distance of `ω·gap` from the nearest multiple of 2π.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceReport {
    pub resonant: bool,
    pub violations: Vec<ResonanceViolation>,
    pub worst_deviation: f64,
    /// Necessary condition: all nonzero gap ratios are rational.
    pub rational_gaps: bool,
}

pub fn check_resonance(ctrl: &ControlHamiltonian, tol: f64) -> Result<ResonanceReport> {
    let (vals, _) = ctrl.hc.matrix().hermitian_eigen()?;
    let mut violations = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            let gap = vals[j] - vals[i];
            let deviation = phase_deviation(ctrl.omega * gap);
            worst = worst.max(deviation);
            if deviation > tol {
                violations.push(ResonanceViolation { i, j, gap, deviation });
            }
        }
    }
    Ok(ResonanceReport {
        resonant: violations.is_empty(),
        violations,
        worst_deviation: worst,
        rational_gaps: gap_ratios(&vals).is_some(),
    })
}

fn phase_deviation(phase: f64) -> f64 {
    let turns = phase / (2.0 * PI);
    (turns - turns.round()).abs() * 2.0 * PI
}

const GAP_ZERO: f64 = 1e-9;
const MAX_DENOMINATOR: i64 = 1000;

/// Nonzero gaps as rational multiples `p/q` of the smallest gap, or `None`
/// if some ratio is not close to a fraction with a small denominator.
fn gap_ratios(vals: &[f64]) -> Option<(f64, Vec<(i64, i64)>)> {
    let mut gaps: Vec<f64> = Vec::new();
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            let g = (vals[j] - vals[i]).abs();
            if g > GAP_ZERO {
                gaps.push(g);
            }
        }
    }
    let base = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    if !base.is_finite() {
        return Some((0.0, Vec::new()));
    }
    gaps.iter()
        .map(|g| rational_approx(g / base))
        .collect::<Option<Vec<_>>>()
        .map(|r| (base, r))
}

/// Continued-fraction approximation with bounded denominator.
fn rational_approx(x: f64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        let ai = a as i64;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64 / k1 as f64) - x).abs() <= 1e-9 * x.abs().max(1.0) {
            return Some((h1, k1));
        }
        let frac = y - a;
        if frac.abs() < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Smallest `ω > 0` with `e^{−iωH_c}` a global phase: `2π / gcd(gaps)`.
pub fn minimal_resonant_omega(hc: &Operator) -> Result<f64> {
    hc.require_hermitian(HERMITIAN_TOL)?;
    let (vals, _) = hc.matrix().hermitian_eigen()?;
    let (base, ratios) = gap_ratios(&vals).ok_or(Error::ConditionInapplicable {
        what: "eigenvalue gaps of the control Hamiltonian are incommensurate",
    })?;
    if ratios.is_empty() {
        return Err(Error::ConditionInapplicable {
            what: "control Hamiltonian is proportional to the identity",
        });
    }
    let lcm = ratios.iter().fold(1i64, |l, &(_, q)| l / gcd(l, q) * q);
    let g = ratios.iter().fold(0i64, |acc, &(p, q)| gcd(acc, p * (lcm / q)));
    let unit = base * g as f64 / lcm as f64;
    Ok(2.0 * PI / unit)
}

fn require_resonance(ctrl: &ControlHamiltonian) -> Result<()> {
    let report = check_resonance(ctrl, RESONANCE_TOL)?;
    if !report.resonant {
        return Err(Error::ResonanceViolation {
            worst_deviation: report.worst_deviation,
        });
    }
    Ok(())
}

fn check_ctrl_dim(model: &SystemModel, ctrl: &ControlHamiltonian) -> Result<()> {
    if ctrl.hc.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: ctrl.hc.dim(),
        });
    }
    Ok(())
}

/// `exp(ω L_c + τ (L_μ + L_{H₀}))`.
pub fn controlled_propagator(
    model: &SystemModel,
    ctrl: &ControlHamiltonian,
    tau: f64,
) -> Result<Superoperator> {
    scaled_propagator(model, ctrl, tau, -1)
}

/// Propagator for the power law `g = ω τ^k` over one interval `τ`:
/// `exp(ω τ^{k+1} L_c + τ L₀)`. `k = −1` is [`controlled_propagator`].
pub fn scaled_propagator(
    model: &SystemModel,
    ctrl: &ControlHamiltonian,
    tau: f64,
    k: i32,
) -> Result<Superoperator> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::Domain {
            what: "measurement interval",
            value: tau,
        });
    }
    check_ctrl_dim(model, ctrl)?;
    let weight = if k == -1 {
        ctrl.omega
    } else {
        ctrl.omega * tau.powi(k + 1)
    };
    let lc = hamiltonian_superop(&ctrl.hc)?;
    lc.scale(weight).add(&total_liouvillian(model)?.scale(tau))?.exp()
}

/// `p_c(τ) = ⟨ψ₀|e^{ωL_c + τL₀}[ρ₀]|ψ₀⟩`.
pub fn controlled_survival(
    model: &SystemModel,
    ctrl: &ControlHamiltonian,
    psi0: &PureState,
    tau: f64,
) -> Result<f64> {
    check_state_dim(model, psi0)?;
    survival_under(&controlled_propagator(model, ctrl, tau)?, psi0)
}

/// Control frame `X ↦ U(η) X U(η)†` with `U(η) = e^{−iωηH_c}`, built from
/// one eigendecomposition of `H_c`.
struct Frame {
    vals: Vec<f64>,
    vecs: CMatrix,
    omega: f64,
}

impl Frame {
    fn new(ctrl: &ControlHamiltonian) -> Result<Self> {
        let (vals, vecs) = ctrl.hc.matrix().hermitian_eigen()?;
        Ok(Self {
            vals,
            vecs,
            omega: ctrl.omega,
        })
    }

    fn unitary(&self, eta: f64) -> CMatrix {
        let phases: Vec<Complex64> = self
            .vals
            .iter()
            .map(|e| Complex64::from_polar(1.0, -self.omega * eta * e))
            .collect();
        &(&self.vecs * &CMatrix::diagonal(&phases)) * &self.vecs.adjoint()
    }

    /// `B̃(η)[X] = e^{−ηωL_c} B e^{ηωL_c} [X]`.
    fn rotated_apply(&self, b: &Superoperator, eta: f64, x: &CMatrix) -> CMatrix {
        let u = self.unitary(eta);
        let ud = u.adjoint();
        let inner = &(&u * x) * &ud;
        let out = b.apply(&inner);
        &(&ud * &out) * &u
    }
}

fn frame_average(
    target: &Superoperator,
    ctrl: &ControlHamiltonian,
    psi0: &PureState,
    order: usize,
) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be positive"));
    }
    let frame = Frame::new(ctrl)?;
    let rho = psi0.projector();
    let rule = GaussLegendre::new(order);
    let terms = rule
        .mapped(0.0, 1.0)
        .map(|(eta, w)| {
            let v = frame.rotated_apply(target, eta, rho.matrix());
            real_part(psi0.overlap(&v)).map(|x| w * x)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

fn check_all(model: &SystemModel, ctrl: &ControlHamiltonian, psi0: &PureState) -> Result<()> {
    check_ctrl_dim(model, ctrl)?;
    check_state_dim(model, psi0)?;
    require_resonance(ctrl)
}

/// `γ = −∫₀¹ ⟨ψ₀|L̃_μ^{(η)}[ρ₀]|ψ₀⟩ dη`.
pub fn zeno_limit_rate_controlled(
    model: &SystemModel,
    ctrl: &ControlHamiltonian,
    psi0: &PureState,
    order: usize,
) -> Result<f64> {
    check_all(model, ctrl, psi0)?;
    Ok(-frame_average(&model.dissipator()?, ctrl, psi0, order)?)
}

/// `∫₀¹ ⟨ψ₀|L̃_{H₀}^{(η)}[ρ₀]|ψ₀⟩ dη`, which vanishes identically.
pub fn hamiltonian_first_order_contribution(
    model: &SystemModel,
    ctrl: &ControlHamiltonian,
    psi0: &PureState,
    order: usize,
) -> Result<f64> {
    check_all(model, ctrl, psi0)?;
    frame_average(&hamiltonian_superop(model.h0())?, ctrl, psi0, order)
}

/// `∂_τ p_c` and `∂²_τ p_c` at `τ = 0` from the frame integrals
/// `∫₀¹ B̃(η) dη` and `2∫₀¹dη₂∫₀^{η₂}dη₁ B̃(η₂)B̃(η₁)` with `B = L₀`.
pub fn survival_derivatives_controlled(
    model: &SystemModel,
    ctrl: &ControlHamiltonian,
    psi0: &PureState,
    order: usize,
) -> Result<(f64, f64)> {
    check_all(model, ctrl, psi0)?;
    if order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be positive"));
    }
    let b = total_liouvillian(model)?;
    let first = frame_average(&b, ctrl, psi0, DEFAULT_ORDER.max(order))?;
    let frame = Frame::new(ctrl)?;
    let rho = psi0.projector();
    let rule = GaussLegendre::new(order);
    let mut outer = Vec::with_capacity(order);
    for (eta2, w2) in rule.mapped(0.0, 1.0) {
        let mut inner = Vec::with_capacity(order);
        for (eta1, w1) in rule.mapped(0.0, eta2) {
            let once = frame.rotated_apply(&b, eta1, rho.matrix());
            let twice = frame.rotated_apply(&b, eta2, &once);
            inner.push(w1 * real_part(psi0.overlap(&twice))?);
        }
        outer.push(w2 * pairwise_sum(&inner));
    }
    Ok((first, 2.0 * pairwise_sum(&outer)))
}

/// `|(∂²_τ p_c − (∂_τ p_c)²) / (2 ∂_τ p_c)|` at `τ = 0`.
pub fn min_frequency_controlled(
    model: &SystemModel,
    ctrl: &ControlHamiltonian,
    psi0: &PureState,
) -> Result<f64> {
    let (d1, d2) = survival_derivatives_controlled(model, ctrl, psi0, NESTED_ORDER)?;
    if d1.abs() < 1e-15 {
        return Err(Error::ConditionInapplicable {
            what: "first derivative of the controlled survival vanishes",
        });
    }
    Ok(((d2 - d1 * d1) / (2.0 * d1)).abs())
}
