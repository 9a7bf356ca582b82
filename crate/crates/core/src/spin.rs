//! Qubit states, SU(2) unitaries and the Pauli algebra.
//!
//! The polarization basis is fixed once here and used everywhere else:
//! σ₃ eigenstates are |H⟩, |V⟩; σ₁ eigenstates are the diagonal states
//! |L±⟩ = (|H⟩ ± |V⟩)/√2; σ₂ eigenstates are the circular states
//! |C±⟩ = (|H⟩ ± i|V⟩)/√2. In that basis the Poincaré sphere and the Bloch
//! sphere coincide.
//!
//! Two-qubit matrices use qubit 1 (mode k₁) as the slow index and qubit 2
//! (mode k₂) as the fast index, i.e. `|a⟩₁|b⟩₂ ↦ 2a + b`.

use std::ops::Mul;

use nalgebra::{Complex, DMatrix, Matrix2, Matrix4, SMatrix, Vector2};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix<const D: usize> = SMatrix<C64, D, D>;

/// Tolerance for algebraic identities on 2×2 and 4×4 matrices.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Eigenvalues above this floor are accepted as non-negative.
pub const PSD_FLOOR: f64 = -1e-10;
/// Slack on the Bloch-ball radius.
pub const BLOCH_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Pauli matrix σᵢ for `i` in 0..4, with σ₀ = I.
pub fn pauli(i: usize) -> Matrix2<C64> {
    match i {
        0 => Matrix2::new(ONE, ZERO, ZERO, ONE),
        1 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        2 => Matrix2::new(ZERO, -I, I, ZERO),
        3 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli index {i} out of range"),
    }
}

/// Kronecker product with `a` acting on qubit 1 and `b` on qubit 2.
pub fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// σᵢ ⊗ σⱼ.
pub fn pauli_pair(i: usize, j: usize) -> Matrix4<C64> {
    kron(&pauli(i), &pauli(j))
}

fn trace<const D: usize>(m: &CMatrix<D>) -> C64 {
    (0..D).map(|k| m[(k, k)]).sum()
}

fn max_abs<const D: usize>(m: &CMatrix<D>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub(crate) fn hermitian_eigen<const D: usize>(m: &CMatrix<D>) -> (Vec<f64>, DMatrix<C64>) {
    let dm = DMatrix::from_column_slice(D, D, m.as_slice());
    let herm = (&dm + dm.adjoint()) * real(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..D).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(D, D, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// Rebuilds `V diag(values) V†`.
pub(crate) fn from_eigen<const D: usize>(values: &[f64], vectors: &DMatrix<C64>) -> CMatrix<D> {
    let mut out = CMatrix::<D>::zeros();
    for (k, &lambda) in values.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let v = vectors.column(k);
        for r in 0..D {
            for col in 0..D {
                out[(r, col)] += real(lambda) * v[r] * v[col].conj();
            }
        }
    }
    out
}

/// A normalized pure polarization state ψ₁|H⟩ + ψ₂|V⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    psi: Vector2<C64>,
}

impl PureQubit {
    pub fn new(psi1: C64, psi2: C64) -> Result<Self> {
        let norm = (psi1.norm_sqr() + psi2.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            psi: Vector2::new(psi1, psi2),
        })
    }

    /// Normalizes an arbitrary non-zero spinor.
    pub fn normalized(psi1: C64, psi2: C64) -> Result<Self> {
        let norm = (psi1.norm_sqr() + psi2.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            psi: Vector2::new(psi1 / norm, psi2 / norm),
        })
    }

    fn raw(psi: Vector2<C64>) -> Self {
        Self { psi }
    }

    pub fn horizontal() -> Self {
        Self::raw(Vector2::new(ONE, ZERO))
    }

    pub fn vertical() -> Self {
        Self::raw(Vector2::new(ZERO, ONE))
    }

    /// |L₊⟩ for `plus`, |L₋⟩ otherwise.
    pub fn diagonal(plus: bool) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sign = if plus { 1.0 } else { -1.0 };
        Self::raw(Vector2::new(real(s), real(sign * s)))
    }

    /// |C₊⟩ for `plus`, |C₋⟩ otherwise.
    pub fn circular(plus: bool) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sign = if plus { 1.0 } else { -1.0 };
        Self::raw(Vector2::new(real(s), c(0.0, sign * s)))
    }

    /// Haar-uniform pure state.
    pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(q) = Self::normalized(c(g[0], g[1]), c(g[2], g[3])) {
                return q;
            }
        }
    }

    pub fn psi1(&self) -> C64 {
        self.psi[0]
    }

    pub fn psi2(&self) -> C64 {
        self.psi[1]
    }

    pub fn vector(&self) -> &Vector2<C64> {
        &self.psi
    }

    /// The antipodal state (−ψ₂*, ψ₁*).
    pub fn orthogonal(&self) -> Self {
        Self::raw(Vector2::new(-self.psi[1].conj(), self.psi[0].conj()))
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureQubit) -> C64 {
        self.psi.dotc(&other.psi)
    }

    pub fn density(&self) -> DensityMatrix1Q {
        DensityMatrix::from_matrix_unchecked(self.psi * self.psi.adjoint())
    }

    pub fn bloch(&self) -> BlochVector {
        self.density().bloch()
    }
}

/// A real 3-vector in the closed unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r: [f64; 3],
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let v = Self { r: [r1, r2, r3] };
        let norm = v.norm();
        if norm > 1.0 + BLOCH_TOL || !norm.is_finite() {
            return Err(Error::BlochOutOfRange(norm));
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.r.iter().zip(other.r.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            r: self.r.map(|x| x * k),
        }
    }
}

/// A unit axis in spin space together with a rotation angle, describing
/// `exp[i(θ/2) n·σ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle {
    pub axis: [f64; 3],
    pub theta: f64,
}

impl AxisAngle {
    pub fn new(axis: [f64; 3], theta: f64) -> Result<Self> {
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::NonUnitAxis(norm));
        }
        Ok(Self { axis, theta })
    }

    /// Rescales a non-zero axis to unit length.
    pub fn normalized(axis: [f64; 3], theta: f64) -> Result<Self> {
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NonUnitAxis(norm));
        }
        Ok(Self {
            axis: axis.map(|x| x / norm),
            theta,
        })
    }

    /// Axis uniform on the sphere, angle uniform in [0, 2π).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let g: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(mut aa) = Self::normalized(g, 0.0) {
                aa.theta = rng.random_range(0.0..std::f64::consts::TAU);
                return aa;
            }
        }
    }

    /// cos(θ/2) I + i sin(θ/2) n·σ.
    pub fn unitary(&self) -> Unitary {
        let (s, co) = (0.5 * self.theta).sin_cos();
        let [n1, n2, n3] = self.axis;
        // n·σ = [[n3, n1 - i n2], [n1 + i n2, -n3]]
        let m = Matrix2::new(
            c(co, s * n3),
            c(s * n2, s * n1),
            c(-s * n2, s * n1),
            c(co, -s * n3),
        );
        Unitary { u: m }
    }

    pub fn inverse(&self) -> Self {
        Self {
            axis: self.axis,
            theta: -self.theta,
        }
    }
}

/// Closed-form `exp[i(θ/2) n·σ]`; rejects non-unit axes.
pub fn axis_angle_unitary(axis: [f64; 3], theta: f64) -> Result<Unitary> {
    Ok(AxisAngle::new(axis, theta)?.unitary())
}

/// A 2×2 unitary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary {
    u: Matrix2<C64>,
}

impl Unitary {
    pub fn new(u: Matrix2<C64>) -> Result<Self> {
        let dev = max_abs(&(u.adjoint() * u - Matrix2::identity()));
        if dev > ALGEBRA_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { u })
    }

    pub(crate) fn from_matrix_unchecked(u: Matrix2<C64>) -> Self {
        Self { u }
    }

    pub fn identity() -> Self {
        Self {
            u: Matrix2::identity(),
        }
    }

    /// i·σ_k for k in 1..=3.
    pub fn i_sigma(k: usize) -> Self {
        Self { u: pauli(k) * I }
    }

    /// Haar-random element of SU(2), from a uniform unit quaternion.
    pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let [a0, a1, a2, a3] = g.map(|x| x / norm);
            let u = Matrix2::new(c(a0, a3), c(a2, a1), c(-a2, a1), c(a0, -a3));
            return Self { u };
        }
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.u
    }

    pub fn adjoint(&self) -> Self {
        Self {
            u: self.u.adjoint(),
        }
    }

    pub fn determinant(&self) -> C64 {
        self.u.determinant()
    }

    pub fn apply(&self, q: &PureQubit) -> PureQubit {
        PureQubit::raw(self.u * q.psi)
    }

    /// Largest elementwise deviation from `other`.
    pub fn max_deviation(&self, other: &Unitary) -> f64 {
        max_abs(&(self.u - other.u))
    }

    /// `min_φ ‖self − e^{iφ} other‖_F`, evaluated at the optimal phase.
    pub fn phase_distance(&self, other: &Unitary) -> f64 {
        let overlap = trace(&(other.u.adjoint() * self.u));
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        (self.u - other.u * phase).norm()
    }

    pub fn eq_up_to_phase(&self, other: &Unitary, tol: f64) -> bool {
        self.phase_distance(other) <= tol
    }
}

impl Mul for Unitary {
    type Output = Unitary;

    fn mul(self, rhs: Unitary) -> Unitary {
        Unitary { u: self.u * rhs.u }
    }
}

impl Mul for &Unitary {
    type Output = Unitary;

    fn mul(self, rhs: &Unitary) -> Unitary {
        Unitary { u: self.u * rhs.u }
    }
}

/// `min_φ ‖u − e^{iφ}v‖_F ≤ tol`.
pub fn equal_up_to_global_phase(u: &Unitary, v: &Unitary, tol: f64) -> bool {
    u.eq_up_to_phase(v, tol)
}

/// Euclidean projection of `values` onto `{p : p ≥ 0, Σp = 1}`.
pub(crate) fn simplex_projection(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if v - t > 0.0 {
            shift = t;
        } else {
            break;
        }
    }
    values.iter().map(|&v| (v - shift).max(0.0)).collect()
}

/// A Hermitian, unit-trace, positive semi-definite D×D matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<const D: usize> {
    m: CMatrix<D>,
}

pub type DensityMatrix1Q = DensityMatrix<2>;
pub type TwoQubitDensity = DensityMatrix<4>;

impl<const D: usize> DensityMatrix<D> {
    pub fn new(m: CMatrix<D>) -> Result<Self> {
        let herm_dev = max_abs(&(m - m.adjoint()));
        if herm_dev > ALGEBRA_TOL {
            return Err(Error::NotHermitian(herm_dev));
        }
        let tr = trace(&m);
        if (tr.re - 1.0).abs() > ALGEBRA_TOL || tr.im.abs() > ALGEBRA_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let (values, _) = hermitian_eigen(&m);
        if values[0] < PSD_FLOOR {
            return Err(Error::NotPsd(values[0]));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix<D>) -> Self {
        Self { m }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: CMatrix::<D>::identity() * real(1.0 / D as f64),
        }
    }

    /// Nearest physical state in Frobenius norm.
    ///
    /// The eigenvalues are projected onto the probability simplex: every
    /// eigenvalue is lowered by a common shift `τ` and clipped at zero, with
    /// `τ` chosen so the result has unit trace. Returns the state and the
    /// negative eigenvalue mass of the input. The input only needs to be
    /// Hermitian up to rounding.
    pub fn project_physical(m: &CMatrix<D>) -> (Self, f64) {
        let (values, vectors) = hermitian_eigen(m);
        let clipped_mass: f64 = values.iter().filter(|&&x| x < 0.0).map(|x| -x).sum();
        let hermitian = (m + m.adjoint()) * real(0.5);
        let floor = -16.0 * f64::EPSILON;
        if values[0] >= floor && (hermitian.trace().re - 1.0).abs() <= 16.0 * f64::EPSILON {
            // Already physical up to rounding; rebuilding from the
            // eigenvectors would only add rounding of its own.
            return (Self { m: hermitian }, clipped_mass);
        }
        let projected = simplex_projection(&values);
        let mut out = from_eigen::<D>(&projected, &vectors);
        out = (out + out.adjoint()) * real(0.5);
        (Self { m: out }, clipped_mass)
    }

    pub fn matrix(&self) -> &CMatrix<D> {
        &self.m
    }

    pub fn trace(&self) -> C64 {
        trace(&self.m)
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        trace(&(self.m * self.m)).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.m).0
    }

    /// Tr[ρ·op].
    pub fn expectation(&self, op: &CMatrix<D>) -> f64 {
        trace(&(self.m * op)).re
    }

    /// Convex mixture `Σ wₖ ρₖ`; weights must be non-negative and sum to one.
    pub fn mixture<'a, It>(parts: It) -> Result<Self>
    where
        It: IntoIterator<Item = (f64, &'a DensityMatrix<D>)>,
    {
        let mut m = CMatrix::<D>::zeros();
        let mut total = 0.0;
        for (w, rho) in parts {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::ProbabilityOutOfRange(w));
            }
            m += rho.m * real(w);
            total += w;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::ProbabilitySum(total));
        }
        Ok(Self { m: m / real(total) })
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        max_abs(&(self.m - other.m))
    }

    /// ½‖self − other‖₁.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        let (values, _) = hermitian_eigen(&(self.m - other.m));
        0.5 * values.iter().map(|x| x.abs()).sum::<f64>()
    }
}

impl DensityMatrix1Q {
    /// ½(I + r·σ).
    pub fn from_bloch(r: &BlochVector) -> Result<Self> {
        let norm = r.norm();
        if norm > 1.0 + BLOCH_TOL || !norm.is_finite() {
            return Err(Error::BlochOutOfRange(norm));
        }
        let mut m = pauli(0);
        for (k, rk) in r.r.iter().enumerate() {
            m += pauli(k + 1) * real(*rk);
        }
        Ok(Self { m: m * real(0.5) })
    }

    /// rₖ = Tr[ρ σₖ].
    pub fn bloch(&self) -> BlochVector {
        BlochVector {
            r: std::array::from_fn(|k| self.expectation(&pauli(k + 1))),
        }
    }

    /// U ρ U†.
    pub fn apply_unitary(&self, u: &Unitary) -> Self {
        Self {
            m: u.u * self.m * u.u.adjoint(),
        }
    }

    /// (1 − p) ρ + p I/2.
    pub fn depolarize(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(Self {
            m: self.m * real(1.0 - p) + pauli(0) * real(0.5 * p),
        })
    }
}

/// ½(I + r·σ); rejects vectors outside the unit ball.
pub fn density_from_bloch(r: &BlochVector) -> Result<DensityMatrix1Q> {
    DensityMatrix1Q::from_bloch(r)
}

impl TwoQubitDensity {
    pub fn product(a: &DensityMatrix1Q, b: &DensityMatrix1Q) -> Self {
        Self {
            m: kron(&a.m, &b.m),
        }
    }

    pub fn from_pure(psi: &nalgebra::Vector4<C64>) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            m: psi * psi.adjoint(),
        })
    }

    /// (I ⊗ U) ρ (I ⊗ U)†: qubit 1 untouched, qubit 2 evolved by `u`.
    pub fn apply_second(&self, u: &Unitary) -> Self {
        let big = kron(&Matrix2::identity(), &u.u);
        Self {
            m: big * self.m * big.adjoint(),
        }
    }

    /// Depolarizes qubit 2 only: (1 − p) ρ + p ρ₁ ⊗ I/2.
    pub fn depolarize_second(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let first = self.reduced_first();
        let mixed = kron(&first.m, &(pauli(0) * real(0.5)));
        Ok(Self {
            m: self.m * real(1.0 - p) + mixed * real(p),
        })
    }

    /// Reduced state of qubit 1 (trace over qubit 2).
    pub fn reduced_first(&self) -> DensityMatrix1Q {
        let m = Matrix2::from_fn(|i, j| (0..2).map(|k| self.m[(2 * i + k, 2 * j + k)]).sum());
        DensityMatrix { m }
    }

    /// Reduced state of qubit 2 (trace over qubit 1).
    pub fn reduced_second(&self) -> DensityMatrix1Q {
        let m = Matrix2::from_fn(|k, l| (0..2).map(|i| self.m[(2 * i + k, 2 * i + l)]).sum());
        DensityMatrix { m }
    }

    /// s[i][j] = Tr[ρ (σᵢ ⊗ σⱼ)].
    pub fn pauli_expectations(&self) -> PauliExpectationMatrix {
        PauliExpectationMatrix {
            s: nalgebra::Matrix4::from_fn(|i, j| self.expectation(&pauli_pair(i, j))),
        }
    }
}

/// The 4×4 table of two-qubit Pauli correlators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliExpectationMatrix {
    pub s: nalgebra::Matrix4<f64>,
}

impl PauliExpectationMatrix {
    /// ¼ Σᵢⱼ s[i][j] σᵢ⊗σⱼ, not checked for positivity.
    pub fn to_matrix(&self) -> Matrix4<C64> {
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                if self.s[(i, j)] != 0.0 {
                    m += pauli_pair(i, j) * real(self.s[(i, j)]);
                }
            }
        }
        m * real(0.25)
    }
}

/// Free-function form of [`TwoQubitDensity::pauli_expectations`].
pub fn pauli_expectation_matrix(rho: &TwoQubitDensity) -> PauliExpectationMatrix {
    rho.pauli_expectations()
}

/// Uhlmann fidelity `(Tr√(√σ ρ √σ))²`, clamped to [0, 1].
///
/// Both arguments share a dimension by construction, so a mismatch cannot
/// be expressed.
pub fn uhlmann_fidelity<const D: usize>(rho: &DensityMatrix<D>, sigma: &DensityMatrix<D>) -> f64 {
    // (Tr√(√σ ρ √σ))² is the squared trace norm of √ρ√σ. Taking singular
    // values of the product avoids a second square root, which would turn
    // rounding noise in the null space into errors of order 1e-8.
    let product = psd_sqrt(&rho.m) * psd_sqrt(&sigma.m);
    let tr: f64 = product.singular_values().iter().sum();
    (tr * tr).clamp(0.0, 1.0)
}

fn psd_sqrt<const D: usize>(m: &CMatrix<D>) -> DMatrix<C64> {
    let (values, vectors) = hermitian_eigen(m);
    // Eigenvalues at the rounding floor are zero as far as the input can tell.
    let floor = 16.0 * f64::EPSILON * values.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let roots: Vec<f64> = values
        .iter()
        .map(|&x| if x > floor { x.sqrt() } else { 0.0 })
        .collect();
    let s = from_eigen::<D>(&roots, &vectors);
    DMatrix::from_column_slice(D, D, s.as_slice())
}
