use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use zeno_core::control::{min_frequency_controlled, zeno_limit_rate_controlled, DEFAULT_ORDER};
use zeno_core::fidelity::{ensemble_fidelity, RateField, DEFAULT_NODES};
use zeno_core::optimize::{optimal_amplitude_damping, optimal_dephasing};
use zeno_core::trajectory::{continued_path, interval_path, PathSample, Segment};
use zeno_core::zeno::{min_frequency_free, zeno_limit_rate_free};
use zeno_core::Error as CoreError;

use crate::config::{Config, PresetKind};
use crate::error::CliError;
use crate::output::{format_number, format_optional, round15, Table};

pub const DEFAULT_SWEEP_POINTS: usize = 181;
pub const DEFAULT_FIDELITY_POINTS: usize = 50;
pub const DEFAULT_STEPS: usize = 50;

/// Free rates below this give no meaningful ratio.
const KAPPA_FLOOR: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub gamma_free: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_controlled: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// `null` when the first-order expansion has no decaying term.
    pub min_frequency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_opt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_opt: Option<f64>,
}

fn inapplicable_to_none(r: Result<f64, CoreError>) -> Result<Option<f64>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(CoreError::ConditionInapplicable { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn rate(cfg: &Config) -> Result<RateReport, CliError> {
    let psi = cfg.require_psi0()?;
    let gamma_free = zeno_limit_rate_free(&cfg.model, psi)?;
    let mut report = RateReport {
        gamma_free,
        gamma_controlled: None,
        kappa: None,
        min_frequency: None,
        theta_opt: None,
        phi_opt: None,
    };
    match cfg.resolve_control(psi)? {
        None => {
            report.min_frequency = inapplicable_to_none(min_frequency_free(&cfg.model, psi))?;
        }
        Some((ctrl, opt)) => {
            let gc = match &opt {
                Some(o) => o.gamma_opt,
                None => zeno_limit_rate_controlled(&cfg.model, &ctrl, psi, DEFAULT_ORDER)?,
            };
            report.gamma_controlled = Some(gc);
            report.kappa = match &opt {
                Some(o) => o.kappa,
                None if gamma_free > KAPPA_FLOOR => Some(gc / gamma_free),
                None => None,
            };
            if let Some(o) = opt {
                report.theta_opt = Some(o.theta_opt);
                report.phi_opt = Some(o.phi_opt);
            }
            report.min_frequency = inapplicable_to_none(min_frequency_controlled(&cfg.model, &ctrl, psi))?;
        }
    }
    let r = |x: Option<f64>| x.map(round15);
    Ok(RateReport {
        gamma_free: round15(report.gamma_free),
        gamma_controlled: r(report.gamma_controlled),
        kappa: r(report.kappa),
        min_frequency: r(report.min_frequency),
        theta_opt: r(report.theta_opt),
        phi_opt: r(report.phi_opt),
    })
}

pub fn rate_json(cfg: &Config) -> Result<String, CliError> {
    let report = rate(cfg)?;
    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
    s.push('\n');
    Ok(s)
}

/// `n` evenly spaced points on `[a, b]`; a single point sits at `a`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn require_points(n: usize) -> Result<usize, CliError> {
    if n == 0 {
        return Err(CliError::schema("--points must be at least 1"));
    }
    Ok(n)
}

pub const SWEEP_HEADER: &[&str] = &[
    "alpha",
    "gamma_free",
    "gamma_opt",
    "kappa",
    "theta_opt",
    "phi_opt",
];

pub fn sweep_alpha(cfg: &Config, n_points: usize) -> Result<Table, CliError> {
    let (kind, mu) = cfg.require_preset()?;
    let beta = cfg.beta;
    let alphas = linspace(0.0, PI, require_points(n_points)?);
    let rows = alphas
        .par_iter()
        .map(|&a| {
            let opt = match kind {
                PresetKind::Dephasing => optimal_dephasing(a, beta, mu),
                PresetKind::AmplitudeDamping => optimal_amplitude_damping(a, beta, mu),
            }?;
            Ok(vec![
                format_number(a),
                format_number(opt.gamma_free),
                format_number(opt.gamma_opt),
                format_optional(opt.kappa),
                format_number(opt.theta_opt),
                format_number(opt.phi_opt),
            ])
        })
        .collect::<Result<Vec<_>, CoreError>>()?;
    let mut table = Table::new(SWEEP_HEADER);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub const FIDELITY_HEADER: &[&str] = &["t", "F_free", "F_opt"];

pub fn fidelity(cfg: &Config, n_points: usize) -> Result<Table, CliError> {
    let (kind, mu) = cfg.require_preset()?;
    let t_max = cfg.t.ok_or_else(|| CliError::schema("fidelity needs `t`"))?;
    let (free, opt) = match kind {
        PresetKind::Dephasing => (RateField::dephasing_free(mu), RateField::dephasing_optimal(mu)),
        PresetKind::AmplitudeDamping => (
            RateField::amplitude_damping_free(mu),
            RateField::amplitude_damping_optimal(mu),
        ),
    };
    let (na, nb) = DEFAULT_NODES;
    let grid = linspace(0.0, t_max, require_points(n_points)?);
    let rows = grid
        .par_iter()
        .map(|&t| {
            let f_free = ensemble_fidelity(&free, t, na, nb)?;
            let f_opt = ensemble_fidelity(&opt, t, na, nb)?;
            Ok(vec![
                format_number(t),
                format_number(f_free),
                format_number(f_opt),
            ])
        })
        .collect::<Result<Vec<_>, CoreError>>()?;
    let mut table = Table::new(FIDELITY_HEADER);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub const TRAJECTORY_HEADER: &[&str] = &["segment", "step", "time", "rx", "ry", "rz", "cumulative_survival"];

pub fn trajectory(cfg: &Config, n_steps: usize) -> Result<Table, CliError> {
    if n_steps < 2 {
        return Err(CliError::schema("--steps must be at least 2"));
    }
    if cfg.model.dim() != 2 {
        return Err(CliError::schema("trajectory needs a qubit model"));
    }
    let psi = cfg.require_psi0()?;
    let tau = cfg.require_tau()?;
    let rho0 = psi.projector();
    let ctrl = cfg.resolve_control(psi)?.map(|(c, _)| c);
    let segments: [(Segment, Vec<PathSample>); 3] = [
        (
            Segment::Actual,
            interval_path(&cfg.model, ctrl.as_ref(), tau, n_steps, &rho0)?,
        ),
        (
            Segment::Continued,
            continued_path(&cfg.model, ctrl.as_ref(), tau, n_steps, &rho0)?,
        ),
        (
            Segment::Free,
            interval_path(&cfg.model, None, tau, n_steps, &rho0)?,
        ),
    ];
    let mut table = Table::new(TRAJECTORY_HEADER);
    for (seg, samples) in &segments {
        for s in samples {
            table.push(vec![
                seg.as_str().to_owned(),
                s.step.to_string(),
                format_number(s.time),
                format_number(s.bloch.x),
                format_number(s.bloch.y),
                format_number(s.bloch.z),
                format_number(s.cumulative_survival),
            ]);
        }
    }
    Ok(table)
}
