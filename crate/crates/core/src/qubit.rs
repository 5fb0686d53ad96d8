//! Two-level specialization in the Bloch picture.
//!
//! Pauli indices run over (x, y, z). The basis convention is
//! `σz|0⟩ = |0⟩`, so `|0⟩` is the north pole and amplitude damping relaxes
//! towards it through the jump `|0⟩⟨1|`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ZERO};
use crate::liouville::{NoiseChannel, Operator, PureState, Superoperator, INPUT_EIG_TOL, INPUT_TOL};

/// Pauli matrices and friends.
pub mod pauli {
    use crate::linalg::CMatrix;
    use crate::liouville::Operator;
    use num_complex::Complex64;

    fn op(m: CMatrix) -> Operator {
        Operator::new(m).expect("constant 2x2 matrix")
    }

    pub fn x() -> Operator {
        op(CMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]))
    }

    pub fn y() -> Operator {
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        op(CMatrix::from_rows([[z, -i], [i, z]]))
    }

    pub fn z() -> Operator {
        op(CMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]]))
    }

    /// `|0⟩⟨1|`.
    pub fn lowering() -> Operator {
        op(CMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]]))
    }

    /// `σ_x, σ_y, σ_z`.
    pub fn all() -> [Operator; 3] {
        [x(), y(), z()]
    }

    /// `Σ_i c_i σ_i` for complex coefficients.
    pub fn combination(c: [Complex64; 3]) -> CMatrix {
        let s = all();
        let mut out = CMatrix::zeros(2, 2);
        for (ci, si) in c.iter().zip(&s) {
            out = &out + &si.matrix().scale(*ci);
        }
        out
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Real 3×3 matrix-vector product.
fn mat3_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

fn quad(m: &[[f64; 3]; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    dot(a, mat3_vec(m, b))
}

/// Bloch vector `r` with `ρ = (I + r·σ)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = Self { x, y, z };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite { what: "Bloch vector" });
        }
        if r.norm() > 1.0 + INPUT_TOL {
            return Err(Error::Domain {
                what: "Bloch vector length",
                value: r.norm(),
            });
        }
        Ok(r)
    }

    /// `(sin α cos β, sin α sin β, cos α)`.
    pub fn from_angles(alpha: f64, beta: f64) -> Self {
        Self {
            x: alpha.sin() * beta.cos(),
            y: alpha.sin() * beta.sin(),
            z: alpha.cos(),
        }
    }

    /// Bloch vector of a qubit density matrix, `r_i = Tr(ρσ_i)`.
    pub fn from_density(rho: &CMatrix) -> Self {
        let [sx, sy, sz] = pauli::all();
        let tr = |s: &Operator| (rho * s.matrix()).trace().re;
        Self {
            x: tr(&sx),
            y: tr(&sy),
            z: tr(&sz),
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(self) -> f64 {
        dot(self.to_array(), self.to_array()).sqrt()
    }

    pub fn is_pure(self) -> bool {
        (self.norm() - 1.0).abs() <= INPUT_TOL
    }

    pub fn require_pure(self) -> Result<()> {
        if !self.is_pure() {
            return Err(Error::MixedState { norm: self.norm() });
        }
        Ok(())
    }

    /// Polar and azimuthal angles `(α, β)` with `β ∈ (−π, π]`.
    pub fn angles(self) -> (f64, f64) {
        let alpha = self.z.clamp(-1.0, 1.0).acos();
        let beta = if self.x == 0.0 && self.y == 0.0 {
            0.0
        } else {
            self.y.atan2(self.x)
        };
        (alpha, beta)
    }

    /// `cos(α/2)|0⟩ + e^{iβ} sin(α/2)|1⟩` for the direction of `r`.
    pub fn to_state(self) -> PureState {
        let (alpha, beta) = self.angles();
        let (s, c) = (0.5 * alpha).sin_cos();
        PureState::new(alloc::vec![
            Complex64::new(c, 0.0),
            Complex64::from_polar(s, beta)
        ])
        .expect("unit amplitudes")
    }

    pub fn distance(self, other: Self) -> f64 {
        let d = [self.x - other.x, self.y - other.y, self.z - other.z];
        dot(d, d).sqrt()
    }
}

/// Hermitian positive semidefinite noise-coefficient matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaMatrix(CMatrix);

impl GammaMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.rows() != 3 || m.cols() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: m.rows().max(m.cols()),
            });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite { what: "Gamma matrix" });
        }
        let deviation = m.hermiticity_deviation();
        if deviation > INPUT_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let (vals, _) = m.hermitian_eigen()?;
        if vals[0] < -INPUT_EIG_TOL {
            return Err(Error::NonMarkovian {
                min_eigenvalue: vals[0],
            });
        }
        Ok(Self(m))
    }

    pub fn zero() -> Self {
        Self(CMatrix::zeros(3, 3))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Real part of Γ; quadratic forms with real vectors only see it.
    pub fn real_part(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.0[(i, j)].re;
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(self.0.scale_re(c))
    }
}

/// `ν = 2(Im μ₂₃, Im μ₃₁, Im μ₁₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NuVector(pub [f64; 3]);

/// Control axis `n_c = (sin θ cos φ, sin θ sin φ, cos θ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlDirection {
    pub theta: f64,
    pub phi: f64,
}

impl ControlDirection {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Direction of a nonzero vector.
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let n = dot(v, v).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument(
                "control direction must be a nonzero vector",
            ));
        }
        let (theta, phi) = BlochVector {
            x: v[0] / n,
            y: v[1] / n,
            z: v[2] / n,
        }
        .angles();
        Ok(Self { theta, phi })
    }

    pub fn unit_vector(self) -> [f64; 3] {
        BlochVector::from_angles(self.theta, self.phi).to_array()
    }

    /// `n_c·σ`, eigenvalues ±1.
    pub fn hamiltonian(self) -> Operator {
        let n = self.unit_vector();
        Operator::new(pauli::combination(n.map(|c| Complex64::new(c, 0.0)))).expect("2x2 Pauli combination")
    }
}

pub fn nu_from_gamma(g: &GammaMatrix) -> NuVector {
    NuVector([
        2.0 * g.entry(1, 2).im,
        2.0 * g.entry(2, 0).im,
        2.0 * g.entry(0, 1).im,
    ])
}

fn check_mu(mu: f64) -> Result<()> {
    if !mu.is_finite() {
        return Err(Error::NonFinite { what: "noise rate" });
    }
    if mu < 0.0 {
        return Err(Error::NegativeRate { rate: mu });
    }
    Ok(())
}

/// `diag(0, 0, μ)`.
pub fn preset_dephasing(mu: f64) -> Result<GammaMatrix> {
    check_mu(mu)?;
    GammaMatrix::new(CMatrix::from_real_rows([
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, mu],
    ]))
}

/// `(μ/4)[[1, −i, 0], [i, 1, 0], [0, 0, 0]]`.
pub fn preset_amplitude_damping(mu: f64) -> Result<GammaMatrix> {
    check_mu(mu)?;
    let q = 0.25 * mu;
    let re = |v: f64| Complex64::new(v, 0.0);
    let im = |v: f64| Complex64::new(0.0, v);
    GammaMatrix::new(CMatrix::from_rows([
        [re(q), im(-q), ZERO],
        [im(q), re(q), ZERO],
        [ZERO, ZERO, ZERO],
    ]))
}

/// Eigen-decomposes Γ into Lindblad channels.
///
/// Jump operators are normalized to unit spectral norm, with the rate
/// absorbing the scale, and the largest eigenvector component is made real
/// and positive so the output is deterministic.
pub fn gamma_to_channels(g: &GammaMatrix) -> Result<Vec<NoiseChannel>> {
    let (vals, vecs) = g.matrix().hermitian_eigen()?;
    if vals[0] < -INPUT_EIG_TOL {
        return Err(Error::NonMarkovian {
            min_eigenvalue: vals[0],
        });
    }
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::new();
    for (k, &lambda) in vals.iter().enumerate().rev() {
        if lambda <= 1e-14 * scale.max(1.0) || lambda <= 0.0 {
            continue;
        }
        let mut u = [vecs[(0, k)], vecs[(1, k)], vecs[(2, k)]];
        let lead = u.iter().copied().fold(
            ZERO,
            |best, z| if z.norm() > best.norm() + 1e-12 { z } else { best },
        );
        let phase = lead.conj() / lead.norm();
        for z in &mut u {
            *z *= phase;
        }
        let v = pauli::combination(u);
        let (ev, _) = (&v.adjoint() * &v).hermitian_eigen()?;
        let spectral_sq = ev[ev.len() - 1];
        let jump = Operator::new(v.scale_re(1.0 / spectral_sq.sqrt()))?;
        out.push(NoiseChannel::new(lambda * spectral_sq, jump)?);
    }
    Ok(out)
}

/// `Σ_ij μ_ij (σ_i ρ σ_j − ½{σ_jσ_i, ρ})` assembled directly from Γ.
pub fn dissipator_from_gamma(g: &GammaMatrix) -> Superoperator {
    let s = pauli::all();
    let id = CMatrix::identity(2);
    let mut acc = CMatrix::zeros(4, 4);
    for i in 0..3 {
        for j in 0..3 {
            let mu = g.entry(i, j);
            if mu == ZERO {
                continue;
            }
            let si = s[i].matrix();
            let sj = s[j].matrix();
            let sjsi = sj * si;
            let jump = sj.transpose().kron(si);
            let anti = &id.kron(&sjsi) + &sjsi.transpose().kron(&id);
            let term = &jump - &anti.scale_re(0.5);
            acc = &acc + &term.scale(mu);
        }
    }
    Superoperator::from_matrix(2, acc).expect("4x4 superoperator")
}

/// `γ = −rᵀΓr + TrΓ + ν·r` for a pure Bloch vector.
pub fn rate_free_bloch(g: &GammaMatrix, r0: BlochVector) -> Result<f64> {
    r0.require_pure()?;
    let re = g.real_part();
    let r = r0.to_array();
    Ok(-quad(&re, r, r) + g.trace() + dot(nu_from_gamma(g).0, r))
}

/// Zeno-limit rate under resonant control along `n_c`:
///
/// `−3/2 (n·r)² nᵀΓn + ½(n·r)(nᵀΓr + rᵀΓn) − ½ rᵀΓr − ½ (n×r)ᵀΓ(n×r)
///  + TrΓ + (n·r)(ν·n)`.
pub fn rate_controlled_bloch(g: &GammaMatrix, r0: BlochVector, nc: ControlDirection) -> Result<f64> {
    r0.require_pure()?;
    Ok(controlled_rate_unchecked(g, r0.to_array(), nc.unit_vector()))
}

pub(crate) fn controlled_rate_unchecked(g: &GammaMatrix, r: [f64; 3], n: [f64; 3]) -> f64 {
    let re = g.real_part();
    let nu = nu_from_gamma(g).0;
    let nr = dot(n, r);
    let c = cross(n, r);
    -1.5 * nr * nr * quad(&re, n, n) + nr * quad(&re, n, r) - 0.5 * quad(&re, r, r) - 0.5 * quad(&re, c, c)
        + g.trace()
        + nr * dot(nu, n)
}

/// Trigonometric closed form for dephasing noise under control.
pub fn dephasing_rate_controlled(alpha: f64, beta: f64, theta_c: f64, phi_c: f64, mu: f64) -> f64 {
    let d = beta - phi_c;
    let (a, t) = (alpha, theta_c);
    let s2 = a.sin().powi(2) * t.sin().powi(2);
    let k = 1.0 + 3.0 * (2.0 * t).cos();
    mu / 64.0
        * (39.0
            - 2.0 * (2.0 * a).cos() * k * k
            - 3.0 * (4.0 * t).cos()
            - 8.0 * (2.0 * d).cos() * s2
            - 4.0 * (2.0 * t).cos() * (1.0 + 6.0 * (2.0 * d).cos() * s2)
            - 4.0 * d.cos() * (2.0 * a).sin() * (2.0 * (2.0 * t).sin() + 3.0 * (4.0 * t).sin()))
}

/// Trigonometric closed form for amplitude damping under control.
pub fn ad_rate_controlled(alpha: f64, beta: f64, theta_c: f64, phi_c: f64, mu: f64) -> f64 {
    let d = beta - phi_c;
    let (a, t) = (alpha, theta_c);
    let (c, s) = (f64::cos, f64::sin);
    mu / 512.0
        * (178.0 + 12.0 * c(2.0 * (a - t)) + c(2.0 * (a - d)) + c(2.0 * (a + d))
            - 256.0 * c(a) * c(t).powi(2)
            + 8.0 * c(2.0 * t)
            + 6.0 * c(4.0 * t)
            + 2.0 * c(2.0 * a) * (11.0 + 6.0 * c(2.0 * t) + 9.0 * c(4.0 * t))
            + 2.0 * c(2.0 * d) * (-1.0 + 2.0 * (4.0 * c(2.0 * t) - 3.0 * c(4.0 * t)) * s(a).powi(2))
            + 4.0
                * (-32.0 * c(d) * s(a) + (4.0 * c(d) * (1.0 + 3.0 * c(2.0 * t)) - 3.0) * s(2.0 * a))
                * s(2.0 * t))
}
