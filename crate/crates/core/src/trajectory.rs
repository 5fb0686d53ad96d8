//! Bloch-sphere paths within one measurement interval and full
//! repeated-measurement runs.
//!
//! Inside an interval the control strength stays at `ω/τ`, so reaching
//! time `s` applies `exp((s/τ) ω L_c + s L₀)`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::control::ControlHamiltonian;
use crate::error::{Error, Result};
use crate::liouville::{
    hamiltonian_superop, total_liouvillian, DensityMatrix, PureState, Superoperator, SystemModel, OUTPUT_TOL,
};
use crate::qubit::BlochVector;
use crate::zeno::as_probability;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Segment {
    /// Between two measurements.
    Actual,
    /// The same generator continued past the measurement time.
    Continued,
    /// Without control, over the same interval.
    Free,
}

impl Segment {
    pub fn as_str(self) -> &'static str {
        match self {
            Segment::Actual => "actual",
            Segment::Continued => "continued",
            Segment::Free => "free",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathSample {
    pub step: usize,
    pub time: f64,
    pub bloch: BlochVector,
    pub cumulative_survival: f64,
}

fn require_qubit(model: &SystemModel) -> Result<()> {
    if model.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: model.dim(),
        });
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Domain {
            what: "measurement interval",
            value: tau,
        });
    }
    Ok(())
}

/// Generator per unit time within an interval: `(ω/τ) L_c + L₀`.
fn interval_generator(
    model: &SystemModel,
    ctrl: Option<&ControlHamiltonian>,
    tau: f64,
) -> Result<Superoperator> {
    let l0 = total_liouvillian(model)?;
    match ctrl {
        Some(c) => {
            if c.hc().dim() != model.dim() {
                return Err(Error::DimensionMismatch {
                    expected: model.dim(),
                    found: c.hc().dim(),
                });
            }
            hamiltonian_superop(c.hc())?.scale(c.omega() / tau).add(&l0)
        }
        None => Ok(l0),
    }
}

fn overlap(rho0: &DensityMatrix, rho: &crate::CMatrix) -> Result<f64> {
    as_probability((rho0.matrix() * rho).trace())
}

fn sample_path(
    gen: &Superoperator,
    tau: f64,
    n_steps: usize,
    rho0: &DensityMatrix,
    first: usize,
    last: usize,
    survival: impl Fn(usize, &crate::CMatrix) -> Result<f64>,
) -> Result<Vec<PathSample>> {
    let dt = tau / n_steps as f64;
    let mut out = Vec::with_capacity(last - first + 1);
    for k in first..=last {
        let time = k as f64 * dt;
        let prop = gen.scale(time).exp()?;
        let rho = prop.apply(rho0.matrix());
        DensityMatrix::with_tolerance(rho.clone(), OUTPUT_TOL, OUTPUT_TOL)?;
        out.push(PathSample {
            step: k,
            time,
            bloch: BlochVector::from_density(&rho),
            cumulative_survival: survival(k, &rho)?,
        });
    }
    Ok(out)
}

/// Samples `ρ(s)` at `s = kτ/n` for `k = 0..=n`. Survival is 1 until the
/// measurement at `s = τ`, where it becomes `Tr(ρ₀ρ(τ))`.
pub fn interval_path(
    model: &SystemModel,
    ctrl: Option<&ControlHamiltonian>,
    tau: f64,
    n_steps: usize,
    rho0: &DensityMatrix,
) -> Result<Vec<PathSample>> {
    require_qubit(model)?;
    check_tau(tau)?;
    if n_steps < 2 {
        return Err(Error::InvalidArgument("path needs at least two steps"));
    }
    let gen = interval_generator(model, ctrl, tau)?;
    sample_path(&gen, tau, n_steps, rho0, 0, n_steps, |k, rho| {
        if k == n_steps {
            overlap(rho0, rho)
        } else {
            Ok(1.0)
        }
    })
}

/// The same generator continued over `s ∈ [τ, 2τ]`, as if the measurement
/// did not happen. Survival stays at its value at `τ`.
pub fn continued_path(
    model: &SystemModel,
    ctrl: Option<&ControlHamiltonian>,
    tau: f64,
    n_steps: usize,
    rho0: &DensityMatrix,
) -> Result<Vec<PathSample>> {
    require_qubit(model)?;
    check_tau(tau)?;
    if n_steps < 2 {
        return Err(Error::InvalidArgument("path needs at least two steps"));
    }
    let gen = interval_generator(model, ctrl, tau)?;
    let at_tau = gen.scale(tau).exp()?.apply(rho0.matrix());
    let p = overlap(rho0, &at_tau)?;
    sample_path(&gen, tau, n_steps, rho0, n_steps, 2 * n_steps, |_, _| Ok(p))
}

/// Repeated measurements every `τ` up to `t`, one sample per measurement.
/// On survival the state is reset to `ρ₀`; the sample holds the Bloch
/// vector just before the measurement.
pub fn protocol_run(
    model: &SystemModel,
    ctrl: Option<&ControlHamiltonian>,
    tau: f64,
    t: f64,
    psi0: &PureState,
) -> Result<Vec<PathSample>> {
    require_qubit(model)?;
    check_tau(tau)?;
    if !(t >= tau) || !t.is_finite() {
        return Err(Error::Domain {
            what: "total time (must be at least one interval)",
            value: t,
        });
    }
    let cycles = (t / tau + 1e-9).floor() as usize;
    let prop = interval_generator(model, ctrl, tau)?.scale(tau).exp()?;
    let rho0 = psi0.projector();
    let mut cumulative = 1.0;
    let mut out = Vec::with_capacity(cycles + 1);
    out.push(PathSample {
        step: 0,
        time: 0.0,
        bloch: BlochVector::from_density(rho0.matrix()),
        cumulative_survival: 1.0,
    });
    for k in 1..=cycles {
        let rho = prop.apply(rho0.matrix());
        DensityMatrix::with_tolerance(rho.clone(), OUTPUT_TOL, OUTPUT_TOL)?;
        let p = as_probability(psi0.overlap(&rho))?;
        cumulative *= p;
        out.push(PathSample {
            step: k,
            time: k as f64 * tau,
            bloch: BlochVector::from_density(&rho),
            cumulative_survival: cumulative,
        });
    }
    Ok(out)
}
