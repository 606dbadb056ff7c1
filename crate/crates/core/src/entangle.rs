//! Fermion–boson entanglement of pure states (ψ0, ψ1).
//!
//! Concurrence is available from the Gram determinant of the two boson
//! components, from the 2×2 minors of the coefficient array, and from the
//! purity of either reduced density matrix. Entropies use log₂.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fock::{re, CMatrix, CVector};
use crate::golden::{fibonacci, phi_pow, phi_prime_pow, GoldenNumber};
use crate::qcalc::golden_exp_real;
use crate::susy::SuperState;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const NEGATIVE_EIGEN_TOL: f64 = 1e-10;
const EIGEN_CLAMP: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub dim: usize,
    pub entries: CMatrix,
}

fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    m.clone().symmetric_eigen().eigenvalues.iter().copied().collect()
}

impl DensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c {
            return Err(Error::DimensionMismatch(r, c));
        }
        let herm = (&entries - entries.adjoint()).iter().map(|x| x.norm()).fold(0.0, f64::max);
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = entries.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized(tr));
        }
        let min = hermitian_eigenvalues(&entries).into_iter().fold(f64::INFINITY, f64::min);
        if min < -NEGATIVE_EIGEN_TOL {
            return Err(Error::InvalidSpectrum(min));
        }
        Ok(Self { dim: r, entries })
    }

    /// Diagonal density matrix with the given unit-sum spectrum.
    pub fn from_spectrum(values: &[f64]) -> Result<Self> {
        Self::new(crate::fock::diag_real(values.iter().copied()))
    }

    /// Eigenvalues in ascending order, clamped to 0 below 1e−12.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = hermitian_eigenvalues(&self.entries)
            .into_iter()
            .map(|x| if x.abs() < EIGEN_CLAMP { 0.0 } else { x })
            .collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    /// tr ρ² = ‖ρ‖²_F.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|x| x.norm_sqr()).sum()
    }
}

/// Inner products g_ij = ⟨ψ_i|ψ_j⟩ of the two boson components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramForm {
    pub g00: f64,
    pub g01: Complex64,
    pub g10: Complex64,
    pub g11: f64,
}

impl GramForm {
    pub fn new(psi0: &CVector, psi1: &CVector) -> Self {
        let g01 = psi0.dotc(psi1);
        Self { g00: psi0.norm_squared(), g01, g10: g01.conj(), g11: psi1.norm_squared() }
    }

    pub fn det(&self) -> f64 {
        self.g00 * self.g11 - self.g01.norm_sqr()
    }
}

fn check_normalized(s: &SuperState) -> Result<()> {
    let n = s.norm_sq();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// ρ_b = |ψ0⟩⟨ψ0| + |ψ1⟩⟨ψ1|.
pub fn reduce_boson(s: &SuperState) -> Result<DensityMatrix> {
    check_normalized(s)?;
    let m = &s.psi0 * s.psi0.adjoint() + &s.psi1 * s.psi1.adjoint();
    DensityMatrix::new(m)
}

/// ρ_f with (ρ_f)_ij = ⟨ψ_j|ψ_i⟩.
pub fn reduce_fermion(s: &SuperState) -> Result<DensityMatrix> {
    check_normalized(s)?;
    let g = GramForm::new(&s.psi0, &s.psi1);
    let m = CMatrix::from_row_slice(2, 2, &[re(g.g00), g.g10, g.g01, re(g.g11)]);
    DensityMatrix::new(m)
}

/// C = 2√(g00·g11 − |g01|²), clamped to [0, √2].
pub fn concurrence_gram(psi0: &CVector, psi1: &CVector) -> f64 {
    let det = GramForm::new(psi0, psi1).det().max(0.0);
    (2.0 * det.sqrt()).min(std::f64::consts::SQRT_2)
}

/// C = 2√(Σ_{n<m} |c_{0n}c_{1m} − c_{0m}c_{1n}|²).
pub fn concurrence_minors(c0: &[Complex64], c1: &[Complex64]) -> f64 {
    assert_eq!(c0.len(), c1.len(), "coefficient rows must have equal length");
    let mut sum = 0.0;
    for n in 0..c0.len() {
        for m in n + 1..c0.len() {
            sum += (c0[n] * c1[m] - c0[m] * c1[n]).norm_sqr();
        }
    }
    2.0 * sum.sqrt()
}

/// C = √2·√(1 − tr ρ²).
pub fn concurrence_from_purity(rho: &DensityMatrix) -> f64 {
    std::f64::consts::SQRT_2 * (1.0 - rho.purity()).max(0.0).sqrt()
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// −Σ λ log₂ λ with 0·log 0 = 0.
pub fn von_neumann(rho: &DensityMatrix) -> Result<f64> {
    let raw = hermitian_eigenvalues(&rho.entries);
    if let Some(&bad) = raw.iter().find(|&&x| x < -NEGATIVE_EIGEN_TOL) {
        return Err(Error::InvalidSpectrum(bad));
    }
    Ok(-rho.eigenvalues().into_iter().map(xlog2x).sum::<f64>())
}

/// Binary entropy of (1 ± √(1 − C²))/2.
pub fn entropy_from_concurrence(c: f64) -> f64 {
    let r = (1.0 - c * c).max(0.0).sqrt();
    -(xlog2x(0.5 * (1.0 + r)) + xlog2x(0.5 * (1.0 - r)))
}

/// 2φ^k/(1 + φ^{2k}).
pub fn reference_concurrence(k: u32) -> f64 {
    let p = phi_pow(k);
    2.0 * p / (1.0 + p * p)
}

/// log₂(φ^{2k} + 1) − 2φ^{2k}/(φ^{2k} + 1)·log₂ φ^k.
pub fn reference_entropy(k: u32) -> f64 {
    let p2 = phi_pow(2 * k);
    (p2 + 1.0).log2() - 2.0 * p2 / (p2 + 1.0) * phi_pow(k).log2()
}

/// C_max(n) = √(2(n − 1)/n).
pub fn c_max(n: usize) -> f64 {
    (2.0 * (n as f64 - 1.0) / n as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrobeniusReport {
    pub n: usize,
    pub frobenius_norm_sq: f64,
    pub concurrence: f64,
    pub c_max: f64,
    /// ‖ρ‖_F, which lies in [1/√n, 1].
    pub shell_position: f64,
    /// 4·Σ_{i<j}(ρ_ii ρ_jj − |ρ_ij|²).
    pub minors_concurrence_sq: f64,
}

pub fn frobenius_classify(rho: &DensityMatrix) -> FrobeniusReport {
    let f2 = rho.purity();
    let e = &rho.entries;
    let mut minors = 0.0;
    for i in 0..rho.dim {
        for j in i + 1..rho.dim {
            minors += (e[(i, i)] * e[(j, j)]).re - e[(i, j)].norm_sqr();
        }
    }
    FrobeniusReport {
        n: rho.dim,
        frobenius_norm_sq: f2,
        concurrence: (2.0 * (1.0 - f2)).max(0.0).sqrt(),
        c_max: c_max(rho.dim),
        shell_position: f2.sqrt(),
        minors_concurrence_sq: 4.0 * minors,
    }
}

fn real_parts(v: &[Complex64]) -> Result<Vec<f64>> {
    v.iter().map(|x| if x.im == 0.0 { Ok(x.re) } else { Err(Error::ComplexInput) }).collect()
}

/// A = √(|a|²|b|² − (a·b)²) for real coefficient vectors.
pub fn parallelogram_area(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(a.len(), b.len()));
    }
    let (a, b) = (real_parts(a)?, real_parts(b)?);
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    Ok((dot(&a, &a) * dot(&b, &b) - dot(&a, &b).powi(2)).max(0.0).sqrt())
}

/// Σ_{n<m} A_nm² over the coordinate-plane projections.
pub fn projected_areas_sq(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for n in 0..a.len() {
        for m in n + 1..a.len() {
            s += (a[n] * b[m] - a[m] * b[n]).powi(2);
        }
    }
    s
}

/// φF_k + F_{k−1} in Z[φ], with F_{−1} = 1.
pub fn rectangle_side_ratio(k: u32) -> GoldenNumber {
    if k == 0 {
        return GoldenNumber::one();
    }
    let fk = num_bigint::BigInt::from(fibonacci(k as u64));
    let fm = num_bigint::BigInt::from(fibonacci(k as u64 - 1));
    GoldenNumber::new(fm, fk)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherentKind {
    L,
    B,
}

/// Largest |β| accepted by [`coherent_concurrence_closed`].
pub fn beta_limit(k: u32) -> f64 {
    if k == 0 {
        1.5
    } else {
        3.0
    }
}

/// Concurrence of the L± or B± super-coherent states from golden
/// exponentials.
pub fn coherent_concurrence_closed(k: u32, beta: f64, kind: CoherentKind) -> Result<f64> {
    let b = beta.abs();
    if !b.is_finite() || b > beta_limit(k) {
        return Err(Error::RangeUnsupported(beta));
    }
    let t = b * b;
    let e = |x: f64| golden_exp_real(k, x);
    let (u, v) = match kind {
        CoherentKind::L => (phi_pow(k), phi_prime_pow(k)),
        CoherentKind::B => (phi_prime_pow(k), phi_pow(k)),
    };
    let u2 = u * u;
    let radicand = e(u * t) * e(u2 * t) + v * t * e(t) * e(u2 * t) - u2 * t * e(u * t).powi(2);
    let denom = u2 * e(u2 * t) + u * t * e(t) + e(v * t);
    Ok(2.0 * u.abs() * radicand.max(0.0).sqrt() / denom)
}

/// Uniformly random pure state with |re|, |im| ≤ 1 before normalization.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, k: u32, d: usize, real: bool) -> SuperState {
    let mut draw = || {
        let im = if real { 0.0 } else { rng.random_range(-1.0..1.0) };
        Complex64::new(rng.random_range(-1.0..1.0), im)
    };
    let psi0 = CVector::from_fn(d, |_, _| draw());
    let psi1 = CVector::from_fn(d, |_, _| draw());
    SuperState::new(k, psi0, psi1).normalized().expect("nonzero with probability one")
}

/// Random unit-sum spectrum of length n.
pub fn random_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.random_range(f64::EPSILON..1.0).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}
