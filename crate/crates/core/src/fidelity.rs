//! Ensemble-average fidelity over uniformly distributed pure states:
//! `F(t) = (1/4π) ∫dβ ∫dα sin α · e^{−γ(α,β) t}`.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::pairwise_sum;
use crate::optimize::alpha0;
use crate::quadrature::{periodic_trapezoid, GaussLegendre};
use crate::qubit::{controlled_rate_unchecked, BlochVector, ControlDirection, GammaMatrix};

pub const DEFAULT_NODES: (usize, usize) = (64, 128);
/// Rates below this are rejected as unphysical.
pub const RATE_FLOOR: f64 = -1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Free,
    ControlledOptimal,
    ControlledFixed,
}

type RateFn<'a> = Box<dyn Fn(f64, f64) -> f64 + Send + Sync + 'a>;

/// Decay rate as a function of the initial-state angles `(α, β)`.
pub struct RateField<'a> {
    kind: FieldKind,
    /// Polar angles where the field has a kink; quadrature panels break there.
    kinks: Vec<f64>,
    rate: RateFn<'a>,
}

impl core::fmt::Debug for RateField<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("RateField")
            .field("kind", &self.kind)
            .field("kinks", &self.kinks)
            .finish_non_exhaustive()
    }
}

impl<'a> RateField<'a> {
    pub fn new(kind: FieldKind, rate: impl Fn(f64, f64) -> f64 + Send + Sync + 'a) -> Self {
        Self {
            kind,
            kinks: Vec::new(),
            rate: Box::new(rate),
        }
    }

    pub fn with_kinks(mut self, alphas: &[f64]) -> Self {
        self.kinks = alphas.to_vec();
        self
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn rate(&self, alpha: f64, beta: f64) -> f64 {
        (self.rate)(alpha, beta)
    }

    pub fn constant(gamma: f64) -> Self {
        Self::new(FieldKind::Free, move |_, _| gamma)
    }

    /// `μ sin²α`.
    pub fn dephasing_free(mu: f64) -> Self {
        Self::new(FieldKind::Free, move |a, _| mu * a.sin().powi(2))
    }

    /// Piecewise optimum, see [`crate::optimize::optimal_dephasing`].
    pub fn dephasing_optimal(mu: f64) -> Self {
        let a0 = alpha0();
        Self::new(FieldKind::ControlledOptimal, move |a, _| {
            let c = a.cos();
            if a < a0 {
                mu / 8.0 * (5.0 - 2.0 * c - 3.0 * c * c)
            } else if a <= PI - a0 {
                0.5 * mu
            } else {
                mu / 8.0 * (5.0 - 3.0 * c) * (1.0 + c)
            }
        })
        .with_kinks(&[a0, PI - a0])
    }

    /// `μ sin⁴(α/2)`.
    pub fn amplitude_damping_free(mu: f64) -> Self {
        Self::new(FieldKind::Free, move |a, _| mu * (0.5 * a).sin().powi(4))
    }

    /// `(3/8) μ sin⁴(α/2)`.
    pub fn amplitude_damping_optimal(mu: f64) -> Self {
        Self::new(FieldKind::ControlledOptimal, move |a, _| {
            0.375 * mu * (0.5 * a).sin().powi(4)
        })
    }

    /// Zeno-limit rate with a fixed control axis for every initial state.
    pub fn controlled_fixed(g: &'a GammaMatrix, nc: ControlDirection) -> Self {
        let n = nc.unit_vector();
        Self::new(FieldKind::ControlledFixed, move |a, b| {
            controlled_rate_unchecked(g, BlochVector::from_angles(a, b).to_array(), n)
        })
    }
}

/// Breakpoints in `u = cos α` on `[−1, 1]`, ascending.
fn panels(kinks: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = kinks
        .iter()
        .map(|a| a.cos())
        .filter(|u| *u > -1.0 && *u < 1.0)
        .collect();
    u.push(-1.0);
    u.push(1.0);
    u.sort_by(f64::total_cmp);
    u.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    u
}

/// Gauss–Legendre in `u = cos α` (per panel) times a periodic trapezoid rule
/// in `β`.
pub fn ensemble_fidelity(field: &RateField<'_>, t: f64, n_alpha: usize, n_beta: usize) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            what: "time",
            value: t,
        });
    }
    if n_alpha == 0 || n_beta == 0 {
        return Err(Error::InvalidArgument("node counts must be positive"));
    }
    let rule = GaussLegendre::new(n_alpha);
    let breaks = panels(&field.kinks);
    let mut bad: Option<f64> = None;
    let mut terms = Vec::with_capacity(n_alpha * (breaks.len() - 1));
    for w in breaks.windows(2) {
        for (u, wu) in rule.mapped(w[0], w[1]) {
            let alpha = u.clamp(-1.0, 1.0).acos();
            let inner = periodic_trapezoid(n_beta, 2.0 * PI, |beta| {
                let g = field.rate(alpha, beta);
                if !(g >= RATE_FLOOR) {
                    bad = Some(g);
                }
                (-g.max(0.0) * t).exp()
            });
            terms.push(wu * inner);
        }
    }
    if let Some(g) = bad {
        return Err(Error::Domain {
            what: "decay rate in fidelity field",
            value: g,
        });
    }
    Ok((pairwise_sum(&terms) / (4.0 * PI)).clamp(0.0, 1.0))
}

/// `F(t)` on a non-decreasing time grid.
pub fn fidelity_curve(
    field: &RateField<'_>,
    t_grid: &[f64],
    n_alpha: usize,
    n_beta: usize,
) -> Result<Vec<(f64, f64)>> {
    if t_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidArgument("time grid must be sorted"));
    }
    t_grid
        .iter()
        .map(|&t| ensemble_fidelity(field, t, n_alpha, n_beta).map(|f| (t, f)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::preset_amplitude_damping;
    use approx::assert_abs_diff_eq;

    /// Adaptive Simpson on `[a, b]`, an oracle independent of Gauss rules.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40)
    }

    #[test]
    fn trivial_fields() {
        let f = RateField::dephasing_free(1.0);
        assert_abs_diff_eq!(ensemble_fidelity(&f, 0.0, 64, 128).unwrap(), 1.0, epsilon = 1e-14);
        let zero = RateField::constant(0.0);
        assert_abs_diff_eq!(
            ensemble_fidelity(&zero, 9.0, 64, 128).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        for t in [0.5, 2.0] {
            let c = RateField::constant(0.7);
            assert_abs_diff_eq!(
                ensemble_fidelity(&c, t, 64, 128).unwrap(),
                (-0.7 * t).exp(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn dephasing_matches_adaptive_oracle() {
        let f = ensemble_fidelity(&RateField::dephasing_free(1.0), 1.0, 64, 128).unwrap();
        let oracle = 0.5 * simpson(&|a: f64| (-a.sin().powi(2)).exp() * a.sin(), 0.0, PI, 1e-14);
        assert_abs_diff_eq!(f, oracle, epsilon = 1e-10);

        let f = ensemble_fidelity(&RateField::dephasing_optimal(1.0), 3.0, 64, 128).unwrap();
        let field = RateField::dephasing_optimal(1.0);
        let a0 = alpha0();
        let g = |a: f64| (-field.rate(a, 0.0) * 3.0).exp() * a.sin();
        let oracle = 0.5
            * (simpson(&g, 0.0, a0, 1e-14)
                + simpson(&g, a0, PI - a0, 1e-14)
                + simpson(&g, PI - a0, PI, 1e-14));
        assert_abs_diff_eq!(f, oracle, epsilon = 1e-10);
    }

    #[test]
    fn node_doubling_is_stable() {
        for field in [
            RateField::dephasing_free(1.0),
            RateField::dephasing_optimal(1.0),
            RateField::amplitude_damping_free(1.0),
            RateField::amplitude_damping_optimal(1.0),
        ] {
            for t in [0.5, 2.0, 5.0] {
                let a = ensemble_fidelity(&field, t, 64, 128).unwrap();
                let b = ensemble_fidelity(&field, t, 128, 256).unwrap();
                assert!((a - b).abs() < 1e-10, "{:?} t={t}", field.kind());
            }
        }
    }

    #[test]
    fn optimal_dominates_free() {
        let grid: Vec<f64> = (0..50).map(|k| 5.0 * k as f64 / 49.0).collect();
        let pairs = [
            (RateField::dephasing_free(1.0), RateField::dephasing_optimal(1.0)),
            (
                RateField::amplitude_damping_free(1.0),
                RateField::amplitude_damping_optimal(1.0),
            ),
        ];
        for (free, opt) in &pairs {
            let cf = fidelity_curve(free, &grid, 64, 128).unwrap();
            let co = fidelity_curve(opt, &grid, 64, 128).unwrap();
            for ((t, a), (_, b)) in cf.iter().zip(&co) {
                if *t > 0.0 {
                    assert!(b > a, "t={t}");
                }
            }
            assert!(cf.windows(2).all(|w| w[1].1 < w[0].1));
        }
    }

    #[test]
    fn fixed_control_field_is_bounded() {
        let g = preset_amplitude_damping(1.0).unwrap();
        let f = RateField::controlled_fixed(&g, ControlDirection::new(0.4, 1.0));
        let v = ensemble_fidelity(&f, 1.0, 32, 64).unwrap();
        assert!(v > 0.0 && v < 1.0);
        assert!(fidelity_curve(&f, &[1.0, 0.5], 8, 8).is_err());
    }

    #[test]
    fn negative_field_is_rejected() {
        assert!(ensemble_fidelity(&RateField::constant(-0.1), 1.0, 8, 8).is_err());
    }
}
