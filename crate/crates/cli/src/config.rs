//! JSON run configuration.
//!
//! Complex numbers are `[re, im]` pairs. Matrices are either nested rows or a
//! flat row-major list of `d²` pairs. Exactly one of `channels`, `gamma` and
//! `preset` describes the noise.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use zeno_core::control::{check_resonance, minimal_resonant_omega, ControlHamiltonian, RESONANCE_TOL};
use zeno_core::optimize::{
    grid_oracle, optimal_amplitude_damping, optimal_dephasing, OptimizationResult, DEFAULT_GRID,
};
use zeno_core::qubit::{
    gamma_to_channels, preset_amplitude_damping, preset_dephasing, BlochVector, ControlDirection, GammaMatrix,
};
use zeno_core::{CMatrix, NoiseChannel, Operator, PureState, SystemModel};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Rows(Vec<Vec<[f64; 2]>>),
    Flat(Vec<[f64; 2]>),
}

impl MatrixSpec {
    fn to_matrix(&self, what: &str) -> Result<CMatrix, CliError> {
        let c = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
        let (d, data): (usize, Vec<Complex64>) = match self {
            MatrixSpec::Rows(rows) => {
                let d = rows.len();
                if d == 0 || rows.iter().any(|r| r.len() != d) {
                    return Err(CliError::schema(format!(
                        "{what} must be a non-empty square matrix"
                    )));
                }
                (d, rows.iter().flatten().map(c).collect())
            }
            MatrixSpec::Flat(v) => {
                let d = (v.len() as f64).sqrt().round() as usize;
                if d == 0 || d * d != v.len() {
                    return Err(CliError::schema(format!(
                        "{what} has {} entries, not a square number",
                        v.len()
                    )));
                }
                (d, v.iter().map(c).collect())
            }
        };
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CliError::schema(format!("{what} has non-finite entries")));
        }
        Ok(CMatrix::from_row_major(d, d, data))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawChannel {
    pub rate: f64,
    pub v: MatrixSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetKind {
    Dephasing,
    AmplitudeDamping,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPreset {
    pub kind: PresetKind,
    pub mu: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAxisControl {
    pub theta: f64,
    pub phi: f64,
    pub omega_multiple: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHamiltonianControl {
    pub hc: MatrixSpec,
    pub omega_multiple: i64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RawControl {
    Keyword(String),
    Axis(RawAxisControl),
    Hamiltonian(RawHamiltonianControl),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub dimension: Option<usize>,
    pub h0: Option<MatrixSpec>,
    pub channels: Option<Vec<RawChannel>>,
    pub gamma: Option<MatrixSpec>,
    pub preset: Option<RawPreset>,
    pub psi0: Option<Vec<[f64; 2]>>,
    /// Qubit shorthand for `psi0`: Bloch polar angle.
    pub alpha: Option<f64>,
    /// Bloch azimuth; also the azimuth used by `sweep-alpha`.
    pub beta: Option<f64>,
    pub control: Option<RawControl>,
    pub tau: Option<f64>,
    pub t: Option<f64>,
}

#[derive(Clone, Debug)]
pub enum Noise {
    Preset {
        kind: PresetKind,
        mu: f64,
        gamma: GammaMatrix,
    },
    Gamma(GammaMatrix),
    Channels,
}

impl Noise {
    pub fn gamma(&self) -> Option<&GammaMatrix> {
        match self {
            Noise::Preset { gamma, .. } | Noise::Gamma(gamma) => Some(gamma),
            Noise::Channels => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Control {
    Fixed(ControlHamiltonian),
    /// Resolved per initial state from the noise coefficients.
    Optimal,
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Config {
    pub model: SystemModel,
    pub noise: Noise,
    pub psi0: Option<PureState>,
    pub control: Option<Control>,
    pub beta: f64,
    pub tau: Option<f64>,
    pub t: Option<f64>,
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !x.is_finite() || x <= 0.0 => Err(CliError::schema(format!(
            "{name} must be positive and finite, got {x}"
        ))),
        other => Ok(other),
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::schema(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self, CliError> {
        let sources = [raw.channels.is_some(), raw.gamma.is_some(), raw.preset.is_some()];
        if sources.iter().filter(|s| **s).count() != 1 {
            return Err(CliError::schema(
                "exactly one of `channels`, `gamma` and `preset` is required",
            ));
        }
        let h0 = raw.h0.as_ref().map(|m| m.to_matrix("h0")).transpose()?;
        let dim = raw
            .dimension
            .or(h0.as_ref().map(CMatrix::rows))
            .or_else(|| raw.psi0.as_ref().map(Vec::len))
            .or_else(|| {
                raw.channels
                    .as_ref()
                    .and_then(|c| c.first())
                    .and_then(|c| c.v.to_matrix("channel").ok())
                    .map(|m| m.rows())
            })
            .unwrap_or(2);
        let h0 = match h0 {
            Some(m) => Operator::hermitian(m)?,
            None => Operator::zeros(dim),
        };
        if h0.dim() != dim {
            return Err(CliError::schema(format!(
                "h0 is {}x{0}, expected {dim}x{dim}",
                h0.dim()
            )));
        }

        let (noise, channels) = if let Some(chs) = &raw.channels {
            let mut out = Vec::with_capacity(chs.len());
            for (k, ch) in chs.iter().enumerate() {
                let v = ch.v.to_matrix(&format!("channels[{k}].v"))?;
                if v.rows() != dim {
                    return Err(CliError::schema(format!("channels[{k}].v is not {dim}x{dim}")));
                }
                out.push(NoiseChannel::new(ch.rate, Operator::new(v)?)?);
            }
            (Noise::Channels, out)
        } else {
            if dim != 2 {
                return Err(CliError::schema(
                    "`gamma` and `preset` describe qubit noise (dimension 2)",
                ));
            }
            let noise = if let Some(p) = &raw.preset {
                let gamma = match p.kind {
                    PresetKind::Dephasing => preset_dephasing(p.mu)?,
                    PresetKind::AmplitudeDamping => preset_amplitude_damping(p.mu)?,
                };
                Noise::Preset {
                    kind: p.kind,
                    mu: p.mu,
                    gamma,
                }
            } else {
                let m = raw.gamma.as_ref().expect("checked above").to_matrix("gamma")?;
                if m.rows() != 3 {
                    return Err(CliError::schema("gamma must be 3x3"));
                }
                Noise::Gamma(GammaMatrix::new(m)?)
            };
            let chans = gamma_to_channels(noise.gamma().expect("qubit noise"))?;
            (noise, chans)
        };
        let model = SystemModel::new(h0, channels)?;

        let psi0 = match (&raw.psi0, raw.alpha) {
            (Some(_), Some(_)) => {
                return Err(CliError::schema("give either `psi0` or `alpha`/`beta`, not both"))
            }
            (Some(v), None) => {
                if v.len() != dim {
                    return Err(CliError::schema(format!(
                        "psi0 has {} amplitudes, expected {dim}",
                        v.len()
                    )));
                }
                Some(PureState::new(
                    v.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
                )?)
            }
            (None, Some(a)) => {
                if dim != 2 {
                    return Err(CliError::schema("`alpha`/`beta` need dimension 2"));
                }
                let b = raw.beta.unwrap_or(0.0);
                if !a.is_finite() || !b.is_finite() {
                    return Err(CliError::schema("alpha and beta must be finite"));
                }
                Some(BlochVector::from_angles(a, b).to_state())
            }
            (None, None) => None,
        };

        let control = match &raw.control {
            None => None,
            Some(RawControl::Keyword(k)) if k == "optimal" => {
                if noise.gamma().is_none() {
                    return Err(CliError::schema(
                        "`optimal` control needs `gamma` or `preset` noise",
                    ));
                }
                Some(Control::Optimal)
            }
            Some(RawControl::Keyword(k)) => {
                return Err(CliError::schema(format!("unknown control keyword `{k}`")))
            }
            Some(RawControl::Axis(a)) => {
                if dim != 2 {
                    return Err(CliError::schema(
                        "axis control (`theta`, `phi`) needs dimension 2",
                    ));
                }
                if !a.theta.is_finite() || !a.phi.is_finite() {
                    return Err(CliError::schema("control angles must be finite"));
                }
                Some(Control::Fixed(ControlHamiltonian::qubit(
                    ControlDirection::new(a.theta, a.phi),
                    a.omega_multiple,
                )))
            }
            Some(RawControl::Hamiltonian(h)) => {
                let hc = Operator::hermitian(h.hc.to_matrix("control.hc")?)?;
                if hc.dim() != dim {
                    return Err(CliError::schema(format!("control.hc is not {dim}x{dim}")));
                }
                let unit = minimal_resonant_omega(&hc).map_err(|e| CliError::Resonance(e.to_string()))?;
                let ctrl = ControlHamiltonian::new(hc, h.omega_multiple as f64 * unit)?;
                let report = check_resonance(&ctrl, RESONANCE_TOL)?;
                if !report.resonant {
                    return Err(CliError::Resonance(format!(
                        "worst phase deviation {:e}",
                        report.worst_deviation
                    )));
                }
                Some(Control::Fixed(ctrl))
            }
        };

        let beta = raw.beta.unwrap_or(0.0);
        if !beta.is_finite() {
            return Err(CliError::schema("beta must be finite"));
        }
        Ok(Config {
            model,
            noise,
            psi0,
            control,
            beta,
            tau: positive("tau", raw.tau)?,
            t: positive("t", raw.t)?,
        })
    }

    pub fn require_psi0(&self) -> Result<&PureState, CliError> {
        self.psi0
            .as_ref()
            .ok_or_else(|| CliError::schema("this command needs `psi0` or `alpha`"))
    }

    pub fn require_tau(&self) -> Result<f64, CliError> {
        self.tau
            .ok_or_else(|| CliError::schema("this command needs `tau`"))
    }

    pub fn require_preset(&self) -> Result<(PresetKind, f64), CliError> {
        match &self.noise {
            Noise::Preset { kind, mu, .. } => Ok((*kind, *mu)),
            _ => Err(CliError::schema("this command needs `preset` noise")),
        }
    }

    /// Optimal control axis for a qubit state, analytic for presets and
    /// grid search otherwise.
    pub fn optimum_for(&self, r0: BlochVector) -> Result<OptimizationResult, CliError> {
        let (alpha, beta) = r0.angles();
        match &self.noise {
            Noise::Preset {
                kind: PresetKind::Dephasing,
                mu,
                ..
            } => Ok(optimal_dephasing(alpha, beta, *mu)?),
            Noise::Preset {
                kind: PresetKind::AmplitudeDamping,
                mu,
                ..
            } => Ok(optimal_amplitude_damping(alpha, beta, *mu)?),
            Noise::Gamma(g) => Ok(grid_oracle(g, r0, DEFAULT_GRID.0, DEFAULT_GRID.1)?),
            Noise::Channels => Err(CliError::schema(
                "`optimal` control needs `gamma` or `preset` noise",
            )),
        }
    }

    /// The control Hamiltonian to apply for `psi0`, if any, plus the
    /// optimization result when it was resolved from `optimal`.
    pub fn resolve_control(
        &self,
        psi0: &PureState,
    ) -> Result<Option<(ControlHamiltonian, Option<OptimizationResult>)>, CliError> {
        match &self.control {
            None => Ok(None),
            Some(Control::Fixed(c)) => Ok(Some((c.clone(), None))),
            Some(Control::Optimal) => {
                let r0 = BlochVector::from_density(psi0.projector().matrix());
                let opt = self.optimum_for(r0)?;
                Ok(Some((ControlHamiltonian::qubit(opt.direction(), 1), Some(opt))))
            }
        }
    }
}
