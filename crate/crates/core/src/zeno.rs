//! Repeated projective measurements without control: survival
//! probability, effective decay rate and the Zeno-limit expansion.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::liouville::{
    evolve_checked, propagate, total_liouvillian, Operator, PureState, Superoperator, SystemModel,
};

/// Allowed imaginary residue for quantities that are real in exact
/// arithmetic.
pub const IMAG_TOL: f64 = 1e-10;
/// Probabilities may overshoot `[0, 1]` by this much before clamping.
pub const PROB_TOL: f64 = 1e-10;

/// Measurement protocol: interval `tau`, total time and initial state.
#[derive(Clone, Debug, PartialEq)]
pub struct ZenoProtocol {
    tau: f64,
    total_time: f64,
    psi0: PureState,
}

impl ZenoProtocol {
    pub fn new(tau: f64, total_time: f64, psi0: PureState) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::Domain {
                what: "measurement interval",
                value: tau,
            });
        }
        if !(total_time >= 0.0) || !total_time.is_finite() {
            return Err(Error::Domain {
                what: "total time",
                value: total_time,
            });
        }
        Ok(Self {
            tau,
            total_time,
            psi0,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn psi0(&self) -> &PureState {
        &self.psi0
    }

    /// Propagates one interval and summarizes the decay.
    pub fn run(&self, model: &SystemModel) -> Result<DecayEstimate> {
        let p = survival_probability(model, &self.psi0, self.tau)?;
        DecayEstimate::from_survival(p, self.tau, self.total_time)
    }
}

/// Single-interval survival, effective rate and total survival.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayEstimate {
    pub p_tau: f64,
    pub gamma_eff: f64,
    pub survival_total: f64,
}

impl DecayEstimate {
    pub fn from_survival(p_tau: f64, tau: f64, t: f64) -> Result<Self> {
        let gamma_eff = effective_rate(p_tau, tau)?;
        Ok(Self {
            p_tau,
            gamma_eff,
            survival_total: (-gamma_eff * t).exp(),
        })
    }
}

/// Rejects a complex number whose imaginary part exceeds [`IMAG_TOL`].
pub fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::NumericalInconsistency { imaginary: z.im });
    }
    Ok(z.re)
}

/// Converts a raw overlap into a probability, clamping roundoff.
pub fn as_probability(z: Complex64) -> Result<f64> {
    let p = real_part(z)?;
    if !(-PROB_TOL..=1.0 + PROB_TOL).contains(&p) {
        return Err(Error::Domain {
            what: "survival probability",
            value: p,
        });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `⟨ψ₀|P[|ψ₀⟩⟨ψ₀|]|ψ₀⟩` for a propagator `P`.
pub fn survival_under(prop: &Superoperator, psi0: &PureState) -> Result<f64> {
    let rho = evolve_checked(prop, &psi0.projector())?;
    as_probability(psi0.overlap(rho.matrix()))
}

/// `p(τ) = ⟨ψ₀|ρ(τ)|ψ₀⟩`.
pub fn survival_probability(model: &SystemModel, psi0: &PureState, tau: f64) -> Result<f64> {
    check_state_dim(model, psi0)?;
    let rho = propagate(model, &psi0.projector(), tau)?;
    as_probability(psi0.overlap(rho.matrix()))
}

/// `γ_eff = −ln p / τ`.
pub fn effective_rate(p_tau: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Domain {
            what: "measurement interval",
            value: tau,
        });
    }
    if p_tau == 0.0 {
        return Err(Error::InfiniteRate);
    }
    if !(p_tau > 0.0 && p_tau <= 1.0) {
        return Err(Error::Domain {
            what: "survival probability",
            value: p_tau,
        });
    }
    let rate = -p_tau.ln() / tau;
    Ok(if (-1e-12..0.0).contains(&rate) { 0.0 } else { rate })
}

/// `P(t) = p^{t/τ}` with a real exponent.
pub fn repeated_survival(p_tau: f64, tau: f64, t: f64) -> f64 {
    p_tau.powf(t / tau)
}

/// Short-time noiseless survival `1 − τ²⟨Δ²H⟩`.
pub fn quadratic_decay_check(h: &Operator, psi0: &PureState, tau: f64) -> f64 {
    1.0 - tau * tau * variance(h, psi0)
}

/// `⟨H²⟩ − ⟨H⟩²` for Hermitian `H`.
pub fn variance(h: &Operator, psi0: &PureState) -> f64 {
    let h2 = Operator::new(h.matrix() * h.matrix()).expect("square product");
    let mean = h.expectation(psi0).re;
    h2.expectation(psi0).re - mean * mean
}

/// `Σ_k μ_k (⟨V_k†V_k⟩ − |⟨V_k⟩|²)`, the Zeno-limit rate without control.
pub fn zeno_limit_rate_free(model: &SystemModel, psi0: &PureState) -> Result<f64> {
    check_state_dim(model, psi0)?;
    let mut total = 0.0;
    for ch in model.channels() {
        let v = ch.jump().matrix();
        let vdv = &v.adjoint() * v;
        let a = psi0.overlap(&vdv).re;
        let b = psi0.overlap(v).norm_sqr();
        total += ch.rate() * (a - b);
    }
    Ok(total)
}

/// First and second Liouville moments `⟨⟨ρ₀|L|ρ₀⟩⟩`, `⟨⟨ρ₀|L²|ρ₀⟩⟩`.
pub fn liouville_moments(l: &Superoperator, psi0: &PureState) -> Result<(f64, f64)> {
    let rho = psi0.projector();
    let once = l.apply(rho.matrix());
    let twice = l.apply(&once);
    Ok((real_part(psi0.overlap(&once))?, real_part(psi0.overlap(&twice))?))
}

/// Slope of `γ_eff(τ)` at `τ = 0`: `−½⟨Δ²L⟩`.
pub fn first_order_coefficient_free(model: &SystemModel, psi0: &PureState) -> Result<f64> {
    check_state_dim(model, psi0)?;
    let (m1, m2) = liouville_moments(&total_liouvillian(model)?, psi0)?;
    Ok(-0.5 * (m2 - m1 * m1))
}

/// Measurement frequency above which the first-order term is negligible:
/// `|⟨Δ²L⟩ / (2⟨L_μ⟩)|`.
pub fn min_frequency_free(model: &SystemModel, psi0: &PureState) -> Result<f64> {
    check_state_dim(model, psi0)?;
    let (m1, m2) = liouville_moments(&total_liouvillian(model)?, psi0)?;
    let (mu1, _) = liouville_moments(&model.dissipator()?, psi0)?;
    if mu1.abs() < 1e-15 {
        return Err(Error::ConditionInapplicable {
            what: "mean of the dissipator vanishes",
        });
    }
    Ok(((m2 - m1 * m1) / (2.0 * mu1)).abs())
}

pub(crate) fn check_state_dim(model: &SystemModel, psi0: &PureState) -> Result<()> {
    if psi0.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: psi0.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::{hamiltonian_superop, NoiseChannel};
    use crate::qubit::{pauli, BlochVector};
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn plus() -> PureState {
        BlochVector::from_angles(core::f64::consts::FRAC_PI_2, 0.0).to_state()
    }

    fn dephasing(mu: f64) -> SystemModel {
        SystemModel::noise_only(2, vec![NoiseChannel::new(mu, pauli::z()).unwrap()]).unwrap()
    }

    fn amplitude_damping(mu: f64) -> SystemModel {
        SystemModel::noise_only(2, vec![NoiseChannel::new(mu, pauli::lowering()).unwrap()]).unwrap()
    }

    #[test]
    fn survival_examples() {
        let m = dephasing(1.0);
        assert_eq!(survival_probability(&m, &plus(), 0.0).unwrap(), 1.0);
        let p = survival_probability(&m, &plus(), 0.1).unwrap();
        assert_abs_diff_eq!(p, 0.5 * (1.0 + (-0.2f64).exp()), epsilon = 1e-13);
        let h = SystemModel::noise_only(2, vec![])
            .unwrap()
            .with_h0(pauli::z())
            .unwrap();
        for t in [0.1, 1.0, 7.0] {
            let p = survival_probability(&h, &PureState::basis(2, 1), t).unwrap();
            assert_abs_diff_eq!(p, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn effective_rate_examples() {
        assert_eq!(effective_rate(1.0, 0.3).unwrap(), 0.0);
        assert_abs_diff_eq!(
            effective_rate((-0.1f64).exp(), 1.0).unwrap(),
            0.1,
            epsilon = 1e-15
        );
        let p = 0.5 * (1.0 + (-0.2f64).exp());
        let g = effective_rate(p, 0.1).unwrap();
        assert_abs_diff_eq!(g, -p.ln() / 0.1, epsilon = 1e-15);
        assert!((g - 0.950).abs() < 1e-3);
        assert_eq!(effective_rate(0.0, 1.0), Err(Error::InfiniteRate));
        assert!(matches!(effective_rate(1.5, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn repeated_survival_examples() {
        assert_eq!(repeated_survival(1.0, 0.1, 42.0), 1.0);
        assert_abs_diff_eq!(
            repeated_survival(0.99, 0.01, 1.0),
            0.99f64.powi(100),
            epsilon = 1e-14
        );
        assert!((repeated_survival(0.99, 0.01, 1.0) - 0.366).abs() < 1e-3);
        let g = effective_rate(0.93, 0.2).unwrap();
        assert_abs_diff_eq!(
            repeated_survival(0.93, 0.2, 3.3),
            (-g * 3.3).exp(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn quadratic_decay_examples() {
        assert_abs_diff_eq!(
            quadratic_decay_check(&pauli::z(), &PureState::basis(2, 0), 0.3),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            quadratic_decay_check(&pauli::z(), &plus(), 0.3),
            1.0 - 0.09,
            epsilon = 1e-15
        );
        // Remainder shrinks by 16 when τ halves.
        let m = SystemModel::noise_only(2, vec![])
            .unwrap()
            .with_h0(pauli::z())
            .unwrap();
        let err = |tau: f64| {
            (survival_probability(&m, &plus(), tau).unwrap()
                - quadratic_decay_check(&pauli::z(), &plus(), tau))
            .abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn zeno_limit_rate_free_examples() {
        let none = SystemModel::noise_only(2, vec![]).unwrap();
        assert_eq!(zeno_limit_rate_free(&none, &plus()).unwrap(), 0.0);
        assert_abs_diff_eq!(
            zeno_limit_rate_free(&dephasing(0.7), &plus()).unwrap(),
            0.7,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            zeno_limit_rate_free(&amplitude_damping(0.7), &PureState::basis(2, 1)).unwrap(),
            0.7,
            epsilon = 1e-15
        );
    }

    #[test]
    fn hamiltonian_has_zero_mean() {
        let h = Operator::hermitian(crate::CMatrix::from_rows([
            [Complex64::new(0.3, 0.0), Complex64::new(0.2, -0.7)],
            [Complex64::new(0.2, 0.7), Complex64::new(-1.1, 0.0)],
        ]))
        .unwrap();
        let psi = PureState::normalized(vec![Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.8)]).unwrap();
        let (m1, _) = liouville_moments(&hamiltonian_superop(&h).unwrap(), &psi).unwrap();
        assert!(m1.abs() < 1e-15);
    }

    #[test]
    fn first_order_coefficient_examples() {
        let m = SystemModel::noise_only(2, vec![])
            .unwrap()
            .with_h0(pauli::z())
            .unwrap();
        assert_abs_diff_eq!(
            first_order_coefficient_free(&m, &plus()).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_eq!(
            first_order_coefficient_free(&dephasing(1.0), &PureState::basis(2, 0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn min_frequency_examples() {
        let none = SystemModel::noise_only(2, vec![])
            .unwrap()
            .with_h0(pauli::x())
            .unwrap();
        assert!(matches!(
            min_frequency_free(&none, &plus()),
            Err(Error::ConditionInapplicable { .. })
        ));

        // Dephasing on the equator: L ρ₀ = −2 μ ρ_off, so ⟨L⟩ = −μ, ⟨L²⟩ = 2μ².
        let mu = 0.6;
        let f = min_frequency_free(&dephasing(mu), &plus()).unwrap();
        assert_abs_diff_eq!(f, (2.0 * mu * mu - mu * mu) / (2.0 * mu), epsilon = 1e-14);
        let f2 = min_frequency_free(&dephasing(2.0 * mu), &plus()).unwrap();
        assert_abs_diff_eq!(f2, 2.0 * f, epsilon = 1e-14);
    }

    #[test]
    fn protocol_and_estimate() {
        let proto = ZenoProtocol::new(0.1, 2.0, plus()).unwrap();
        let est = proto.run(&dephasing(1.0)).unwrap();
        assert_abs_diff_eq!(est.survival_total, (-est.gamma_eff * 2.0).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            est.survival_total,
            repeated_survival(est.p_tau, 0.1, 2.0),
            epsilon = 1e-12
        );
        assert!(ZenoProtocol::new(0.0, 1.0, plus()).is_err());
    }
}
