//! Liouville-space engine: vectorization, superoperator assembly,
//! propagation and control-frame rotations.
//!
//! Vectorization is column stacking throughout, so that
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, I, ZERO};

/// Hermiticity tolerance applied to Hamiltonian-like inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerances for user-supplied density matrices.
pub const INPUT_TOL: f64 = 1e-12;
pub const INPUT_EIG_TOL: f64 = 1e-10;
/// Tolerance for density matrices produced by propagation.
pub const OUTPUT_TOL: f64 = 1e-9;
/// Largest Hilbert dimension accepted from configuration files.
pub const MAX_DIM: usize = 8;

/// Square complex matrix acting on the system Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(CMatrix);

impl Operator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.rows() == 0 {
            return Err(Error::InvalidArgument("operator dimension must be positive"));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite { what: "operator" });
        }
        Ok(Self(m))
    }

    /// Checked constructor that also requires Hermiticity within
    /// [`HERMITIAN_TOL`].
    pub fn hermitian(m: CMatrix) -> Result<Self> {
        let op = Self::new(m)?;
        op.require_hermitian(HERMITIAN_TOL)?;
        Ok(op)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.0.hermiticity_deviation() <= tol
    }

    pub fn require_hermitian(&self, tol: f64) -> Result<()> {
        let deviation = self.0.hermiticity_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale_re(s))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &PureState) -> Complex64 {
        self.0.sandwich(psi.amplitudes(), psi.amplitudes())
    }
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState(Vec<Complex64>);

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("state vector is empty"));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { what: "state vector" });
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > INPUT_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(amplitudes))
    }

    /// Normalizes the input before wrapping it.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = alloc::vec![ZERO; dim];
        v[k] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(CMatrix::outer(&self.0, &self.0))
    }

    /// `⟨ψ|ρ|ψ⟩` as a complex number (the imaginary part is roundoff).
    pub fn overlap(&self, rho: &CMatrix) -> Complex64 {
        rho.sandwich(&self.0, &self.0)
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, INPUT_TOL, INPUT_EIG_TOL)
    }

    /// Validates Hermiticity and trace within `tol` and eigenvalues above
    /// `-eig_tol`.
    pub fn with_tolerance(m: CMatrix, tol: f64, eig_tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite {
                what: "density matrix",
            });
        }
        let dev = m.hermiticity_deviation();
        if dev > tol {
            return Err(Error::InvalidDensityMatrix {
                reason: "not Hermitian",
                value: dev,
            });
        }
        let tr = m.trace();
        let tr_dev = (tr - Complex64::new(1.0, 0.0)).norm();
        if tr_dev > tol {
            return Err(Error::InvalidDensityMatrix {
                reason: "trace differs from 1",
                value: tr_dev,
            });
        }
        let (vals, _) = m.hermitian_eigen()?;
        if vals[0] < -eig_tol {
            return Err(Error::InvalidDensityMatrix {
                reason: "negative eigenvalue",
                value: vals[0],
            });
        }
        Ok(Self(m))
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(CMatrix::identity(dim).scale_re(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.hermitian_eigen().map(|(v, _)| v[0]).unwrap_or(f64::NAN)
    }
}

/// A single Lindblad channel `rate · D[jump]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseChannel {
    rate: f64,
    jump: Operator,
}

impl NoiseChannel {
    pub fn new(rate: f64, jump: Operator) -> Result<Self> {
        if !rate.is_finite() {
            return Err(Error::NonFinite { what: "noise rate" });
        }
        if rate < 0.0 {
            return Err(Error::NegativeRate { rate });
        }
        Ok(Self { rate, jump })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn jump(&self) -> &Operator {
        &self.jump
    }
}

/// Free Hamiltonian plus Markovian noise channels.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemModel {
    h0: Operator,
    channels: Vec<NoiseChannel>,
}

impl SystemModel {
    pub fn new(h0: Operator, channels: Vec<NoiseChannel>) -> Result<Self> {
        h0.require_hermitian(HERMITIAN_TOL)?;
        let d = h0.dim();
        for ch in &channels {
            if ch.jump.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: ch.jump.dim(),
                });
            }
        }
        Ok(Self { h0, channels })
    }

    /// Noise only, no free Hamiltonian.
    pub fn noise_only(dim: usize, channels: Vec<NoiseChannel>) -> Result<Self> {
        Self::new(Operator::zeros(dim), channels)
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn h0(&self) -> &Operator {
        &self.h0
    }

    pub fn channels(&self) -> &[NoiseChannel] {
        &self.channels
    }

    pub fn with_h0(&self, h0: Operator) -> Result<Self> {
        Self::new(h0, self.channels.clone())
    }

    /// Same model with every rate multiplied by `factor`.
    pub fn scale_rates(&self, factor: f64) -> Result<Self> {
        let channels = self
            .channels
            .iter()
            .map(|ch| NoiseChannel::new(ch.rate * factor, ch.jump.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.h0.clone(), channels)
    }

    /// `L_μ`, the dissipative part of the generator.
    pub fn dissipator(&self) -> Result<Superoperator> {
        let mut acc = Superoperator::zero(self.dim());
        for ch in &self.channels {
            acc = acc.add(&dissipator_superop(ch)?)?;
        }
        Ok(acc)
    }
}

/// `d² × d²` matrix acting on column-stacked density matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.rows(),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::identity(dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.scale_re(s),
        }
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn exp(&self) -> Result<Self> {
        Ok(Self {
            dim: self.dim,
            matrix: self.matrix.expm()?,
        })
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        devectorize(&self.matrix.mat_vec(&vectorize(x)), self.dim)
    }

    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mat_vec(v)
    }

    /// `⟨⟨ρ₀| L |ρ₀⟩⟩ = ⟨ψ₀| L[ρ₀] |ψ₀⟩` for `ρ₀ = |ψ₀⟩⟨ψ₀|`.
    pub fn expectation(&self, psi: &PureState) -> Complex64 {
        let rho = psi.projector();
        psi.overlap(&self.apply(rho.matrix()))
    }

    /// Largest `|⟨⟨I| L|e_k⟩⟩|`; zero for trace-preserving generators.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim;
        let n = d * d;
        (0..n)
            .map(|col| {
                (0..d)
                    .map(|i| self.matrix[(i * d + i, col)])
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

/// Column-stacking vectorization.
pub fn vectorize(m: &CMatrix) -> Vec<Complex64> {
    let (r, c) = (m.rows(), m.cols());
    let mut out = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Inverse of [`vectorize`] for a `dim × dim` matrix.
pub fn devectorize(v: &[Complex64], dim: usize) -> CMatrix {
    assert_eq!(v.len(), dim * dim, "vector length is not dim²");
    CMatrix::from_fn(dim, dim, |i, j| v[j * dim + i])
}

/// `L_H[·] = −i[H, ·]` as the matrix `−i(I⊗H − Hᵀ⊗I)`.
pub fn hamiltonian_superop(h: &Operator) -> Result<Superoperator> {
    h.require_hermitian(HERMITIAN_TOL)?;
    let d = h.dim();
    let id = CMatrix::identity(d);
    let m = &id.kron(h.matrix()) - &h.matrix().transpose().kron(&id);
    Superoperator::from_matrix(d, m.scale(-I))
}

/// `μ D[V]` as `μ[V̄⊗V − ½ I⊗V†V − ½ (V†V)ᵀ⊗I]`.
pub fn dissipator_superop(ch: &NoiseChannel) -> Result<Superoperator> {
    if ch.rate < 0.0 {
        return Err(Error::NegativeRate { rate: ch.rate });
    }
    let v = ch.jump.matrix();
    let d = v.rows();
    let id = CMatrix::identity(d);
    let vdv = &v.adjoint() * v;
    let jump = v.conj().kron(v);
    let anti = &id.kron(&vdv) + &vdv.transpose().kron(&id);
    let m = &jump - &anti.scale_re(0.5);
    Superoperator::from_matrix(d, m.scale_re(ch.rate))
}

/// `L_tot = L_{H₀} + Σ_k μ_k D[V_k]`.
pub fn total_liouvillian(model: &SystemModel) -> Result<Superoperator> {
    hamiltonian_superop(model.h0())?.add(&model.dissipator()?)
}

/// `ρ(t) = e^{L_tot t}[ρ₀]`.
pub fn propagate(model: &SystemModel, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            what: "propagation time",
            value: t,
        });
    }
    if rho0.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: rho0.dim(),
        });
    }
    let gen = total_liouvillian(model)?.scale(t);
    let prop = gen.exp()?;
    evolve_checked(&prop, rho0)
}

/// Applies a propagator to a state and validates the output at the
/// propagation tolerance.
pub fn evolve_checked(prop: &Superoperator, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    let rho = prop.apply(rho0.matrix());
    DensityMatrix::with_tolerance(rho, OUTPUT_TOL, OUTPUT_TOL)
}

/// `e^{−ωηL_c} · target · e^{ωηL_c}` with `L_c = −i[hc, ·]`.
pub fn rotate_frame(target: &Superoperator, hc: &Operator, omega: f64, eta: f64) -> Result<Superoperator> {
    let lc = hamiltonian_superop(hc)?;
    if lc.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: target.dim(),
            found: lc.dim(),
        });
    }
    let forward = lc.scale(omega * eta).exp()?;
    let backward = lc.scale(-omega * eta).exp()?;
    backward.compose(target)?.compose(&forward)
}

/// `e^{iωηH_c} A e^{−iωηH_c}`, the operator-level picture of
/// [`rotate_frame`].
pub fn rotate_operator(op: &Operator, hc: &Operator, omega: f64, eta: f64) -> Result<Operator> {
    hc.require_hermitian(HERMITIAN_TOL)?;
    let u = hc.matrix().scale(I * (omega * eta)).expm()?;
    let ud = u.adjoint();
    Operator::new(&(&u * op.matrix()) * &ud)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::pauli;
    use approx::assert_abs_diff_eq;
    use num_traits::Float;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> PureState {
        let s = 0.5f64.sqrt();
        PureState::new(alloc::vec![c(s, 0.0), c(s, 0.0)]).unwrap()
    }

    fn dephasing(mu: f64) -> SystemModel {
        SystemModel::noise_only(2, alloc::vec![NoiseChannel::new(mu, pauli::z()).unwrap()]).unwrap()
    }

    fn amplitude_damping(mu: f64) -> SystemModel {
        SystemModel::noise_only(2, alloc::vec![NoiseChannel::new(mu, pauli::lowering()).unwrap()]).unwrap()
    }

    #[test]
    fn vectorize_examples() {
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_eq!(
            vectorize(mixed.matrix()),
            alloc::vec![c(0.5, 0.0), ZERO, ZERO, c(0.5, 0.0)]
        );
        let zero = PureState::basis(2, 0).projector();
        assert_eq!(
            vectorize(zero.matrix()),
            alloc::vec![c(1.0, 0.0), ZERO, ZERO, ZERO]
        );
        let p = plus().projector();
        for z in vectorize(p.matrix()) {
            assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn vec_of_product_matches_kron_identity() {
        let a = CMatrix::from_rows([[c(1.0, 2.0), c(0.0, 1.0)], [c(-1.0, 0.0), c(3.0, 0.5)]]);
        let x = CMatrix::from_rows([[c(0.2, 0.0), c(1.0, -1.0)], [c(0.0, 4.0), c(2.0, 0.0)]]);
        let b = CMatrix::from_rows([[c(0.0, 1.0), c(1.0, 1.0)], [c(2.0, 0.0), c(0.0, -3.0)]]);
        let lhs = vectorize(&(&(&a * &x) * &b));
        let rhs = b.transpose().kron(&a).mat_vec(&vectorize(&x));
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!((l - r).norm() < 1e-13);
        }
        assert_eq!(devectorize(&vectorize(&x), 2), x);
    }

    #[test]
    fn hamiltonian_superop_is_commutator() {
        assert_eq!(
            hamiltonian_superop(&Operator::zeros(2)).unwrap(),
            Superoperator::zero(2)
        );
        let z = pauli::z();
        let rho = plus().projector();
        let lh = hamiltonian_superop(&z).unwrap();
        let direct = (&(z.matrix() * rho.matrix()) - &(rho.matrix() * z.matrix())).scale(-I);
        assert!(lh.apply(rho.matrix()).max_abs_diff(&direct) < 1e-15);
        // -i[σz, |+⟩⟨+|] has ρ01 -> -i, ρ10 -> +i
        let out = lh.apply(rho.matrix());
        assert!((out[(0, 1)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((out[(1, 0)] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_superop_rejects_non_hermitian() {
        let h = Operator::new(CMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]])).unwrap();
        assert!(matches!(hamiltonian_superop(&h), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn dissipator_examples() {
        let id = NoiseChannel::new(1.0, Operator::identity(2)).unwrap();
        assert!(dissipator_superop(&id).unwrap().matrix().max_abs() < 1e-15);

        // σz ρ σz − ρ on |+⟩⟨+| leaves diagonals and sends ρ01 to −2ρ01.
        let dz = dissipator_superop(&NoiseChannel::new(1.0, pauli::z()).unwrap()).unwrap();
        let out = dz.apply(plus().projector().matrix());
        assert!((out[(0, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(out[(0, 0)].norm() < 1e-15);

        // D[|0⟩⟨1|] on |1⟩⟨1| = |0⟩⟨0| − |1⟩⟨1|
        let dad = dissipator_superop(&NoiseChannel::new(1.0, pauli::lowering()).unwrap()).unwrap();
        let out = dad.apply(PureState::basis(2, 1).projector().matrix());
        let expected = CMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]]);
        assert!(out.max_abs_diff(&expected) < 1e-15);
        assert!(dz.trace_defect() < 1e-15 && dad.trace_defect() < 1e-15);
    }

    #[test]
    fn negative_rate_is_rejected() {
        assert_eq!(
            NoiseChannel::new(-0.1, pauli::z()),
            Err(Error::NegativeRate { rate: -0.1 })
        );
    }

    #[test]
    fn total_liouvillian_is_additive() {
        assert_eq!(
            total_liouvillian(&SystemModel::noise_only(2, alloc::vec![]).unwrap()).unwrap(),
            Superoperator::zero(2)
        );
        let m = dephasing(0.7);
        let direct = dissipator_superop(&m.channels()[0]).unwrap();
        assert!(total_liouvillian(&m).unwrap().max_abs_diff(&direct) < 1e-16);

        // σz + amplitude damping, assembled term by term from the raw
        // definitions −i(Hρ − ρH) and VρV† − ½{V†V, ρ}.
        let m = amplitude_damping(0.4).with_h0(pauli::z()).unwrap();
        let l = total_liouvillian(&m).unwrap();
        let (h, v) = (pauli::z().into_matrix(), pauli::lowering().into_matrix());
        let vdv = &v.adjoint() * &v;
        for k in 0..4 {
            let mut e = alloc::vec![ZERO; 4];
            e[k] = c(1.0, 0.0);
            let x = devectorize(&e, 2);
            let comm = (&(&h * &x) - &(&x * &h)).scale(-I);
            let diss = &(&(&v * &x) * &v.adjoint()) - &(&(&vdv * &x) + &(&x * &vdv)).scale_re(0.5);
            let col = vectorize(&(&comm + &diss.scale_re(0.4)));
            for (i, z) in col.iter().enumerate() {
                assert!((l.matrix()[(i, k)] - z).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn total_liouvillian_rejects_dim_mismatch() {
        let ch = NoiseChannel::new(1.0, Operator::identity(3)).unwrap();
        assert!(matches!(
            SystemModel::noise_only(2, alloc::vec![ch]),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn propagate_at_zero_is_identity() {
        let m = amplitude_damping(1.0).with_h0(pauli::x()).unwrap();
        let rho = plus().projector();
        assert_eq!(propagate(&m, &rho, 0.0).unwrap(), rho);
        assert!(matches!(propagate(&m, &rho, -1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn dephasing_coherence_decays_as_closed_form() {
        let mu = 0.8;
        for &t in &[0.1, 0.5, 2.0] {
            let rho = propagate(&dephasing(mu), &plus().projector(), t).unwrap();
            let m = rho.matrix();
            assert_abs_diff_eq!(m[(0, 1)].re, 0.5 * (-2.0 * mu * t).exp(), epsilon = 1e-14);
            assert_abs_diff_eq!(m[(0, 0)].re, 0.5, epsilon = 1e-14);
            assert_abs_diff_eq!(m[(1, 1)].re, 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn amplitude_damping_relaxes_to_ground() {
        let rho = propagate(&amplitude_damping(1.0), &PureState::basis(2, 1).projector(), 40.0).unwrap();
        let ground = PureState::basis(2, 0).projector();
        assert!(rho.matrix().max_abs_diff(ground.matrix()) < 1e-12);
    }

    #[test]
    fn rotate_frame_examples() {
        let target = total_liouvillian(&dephasing(1.0).with_h0(pauli::x()).unwrap()).unwrap();
        let hz = pauli::z();
        assert!(
            rotate_frame(&target, &hz, 1.3, 0.0)
                .unwrap()
                .max_abs_diff(&target)
                < 1e-15
        );
        let full = rotate_frame(&target, &hz, core::f64::consts::PI, 1.0).unwrap();
        assert!(full.max_abs_diff(&target) < 1e-13);

        // ωη = π/2 about x sends σz to −σz; ωη = π/4 sends it to ±σy.
        let pi = core::f64::consts::PI;
        let deph = dephasing(1.0).dissipator().unwrap();
        let rotated = rotate_frame(&deph, &pauli::x(), pi, 0.5).unwrap();
        let vz = rotate_operator(&pauli::z(), &pauli::x(), pi, 0.5).unwrap();
        assert!(vz.matrix().max_abs_diff(pauli::z().scale(-1.0).matrix()) < 1e-14);
        let built = dissipator_superop(&NoiseChannel::new(1.0, vz).unwrap()).unwrap();
        assert!(rotated.max_abs_diff(&built) < 1e-13);

        let quarter = rotate_frame(&deph, &pauli::x(), pi, 0.25).unwrap();
        let vq = rotate_operator(&pauli::z(), &pauli::x(), pi, 0.25).unwrap();
        assert!(
            vq.matrix().max_abs_diff(pauli::y().matrix()) < 1e-14
                || vq.matrix().max_abs_diff(pauli::y().scale(-1.0).matrix()) < 1e-14
        );
        let via_y = dissipator_superop(&NoiseChannel::new(1.0, pauli::y()).unwrap()).unwrap();
        assert!(quarter.max_abs_diff(&via_y) < 1e-13);
    }

    #[test]
    fn rotate_frame_rejects_non_hermitian_control() {
        let bad = Operator::new(CMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]])).unwrap();
        assert!(rotate_frame(&Superoperator::zero(2), &bad, 1.0, 0.5).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = CMatrix::from_real_rows([[1.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(
            DensityMatrix::new(bad_trace),
            Err(Error::InvalidDensityMatrix {
                reason: "trace differs from 1",
                ..
            })
        ));
        let negative = CMatrix::from_real_rows([[1.5, 0.0], [0.0, -0.5]]);
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::InvalidDensityMatrix {
                reason: "negative eigenvalue",
                ..
            })
        ));
        assert!(PureState::new(alloc::vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(
            (PureState::normalized(alloc::vec![c(3.0, 0.0), c(0.0, 4.0)])
                .unwrap()
                .amplitudes()[1]
                - c(0.0, 0.8))
            .norm()
                < 1e-15
        );
        let _ = Float::abs(1.0f64);
    }
}
