//! N=2 supersymmetric block operators on the fermion ⊗ boson space.
//!
//! Operators are 2×2 matrices of d×d boson blocks with the fermion index
//! outermost: a state is the pair (ψ0, ψ1) of its zero- and one-fermion
//! components, and the dense index of |f⟩ ⊗ |n⟩ is f·d + n.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{diag_real, ladder_ops, max_abs_diff_rows, re, CMatrix, CVector, FockOperator};
use crate::golden::{lucas_f64, parity_sign, phi_pow, phi_prime_pow, FibDivisorTable};

/// Block operator [[ul, ur], [ll, lr]].
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    pub k: u32,
    pub dim: usize,
    /// Blocks in the order upper-left, upper-right, lower-left, lower-right.
    pub blocks: [CMatrix; 4],
    /// Safe rows per block, same order as `blocks`.
    pub safe_rows: [usize; 4],
}

impl SuperOperator {
    pub fn new(k: u32, blocks: [CMatrix; 4], safe_rows: [usize; 4]) -> Self {
        let dim = blocks[0].nrows();
        Self { k, dim, blocks, safe_rows }
    }

    pub fn zeros(k: u32, d: usize) -> Self {
        let z = CMatrix::zeros(d, d);
        Self::new(k, [z.clone(), z.clone(), z.clone(), z], [d; 4])
    }

    pub fn block_diag(k: u32, upper: CMatrix, lower: CMatrix, safe: [usize; 2]) -> Self {
        let d = upper.nrows();
        let z = CMatrix::zeros(d, d);
        Self::new(k, [upper, z.clone(), z, lower], [safe[0], d, d, safe[1]])
    }

    pub fn ul(&self) -> &CMatrix {
        &self.blocks[0]
    }
    pub fn ur(&self) -> &CMatrix {
        &self.blocks[1]
    }
    pub fn ll(&self) -> &CMatrix {
        &self.blocks[2]
    }
    pub fn lr(&self) -> &CMatrix {
        &self.blocks[3]
    }

    pub fn min_safe_rows(&self) -> usize {
        *self.safe_rows.iter().min().expect("four blocks")
    }

    /// Dense 2d × 2d matrix.
    pub fn to_dense(&self) -> CMatrix {
        let d = self.dim;
        let mut m = CMatrix::zeros(2 * d, 2 * d);
        for (idx, b) in self.blocks.iter().enumerate() {
            let (r, c) = (idx / 2, idx % 2);
            m.view_mut((r * d, c * d), (d, d)).copy_from(b);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let [ul, ur, ll, lr] = &self.blocks;
        let s = self.safe_rows;
        Self::new(self.k, [ul.adjoint(), ll.adjoint(), ur.adjoint(), lr.adjoint()], [s[0], s[2], s[1], s[3]])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let blocks = self.blocks.clone().map(|b| b * s);
        Self::new(self.k, blocks, self.safe_rows)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut blocks = self.blocks.clone();
        let mut safe = self.safe_rows;
        for i in 0..4 {
            blocks[i] += &other.blocks[i];
            safe[i] = safe[i].min(other.safe_rows[i]);
        }
        Self::new(self.k, blocks, safe)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(re(-1.0)))
    }

    /// Sum of the diagonal blocks (fermionic partial trace without checks).
    pub fn block_trace(&self) -> CMatrix {
        self.ul() + self.lr()
    }

    /// Max |entry| of the off-diagonal blocks.
    pub fn off_diagonal_norm(&self) -> f64 {
        self.ur().iter().chain(self.ll().iter()).map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Max block-wise deviation on each block's safe rows.
    pub fn max_diff_safe(&self, other: &Self) -> f64 {
        (0..4)
            .map(|i| {
                let rows = self.safe_rows[i].min(other.safe_rows[i]);
                max_abs_diff_rows(&self.blocks[i], &other.blocks[i], rows)
            })
            .fold(0.0, f64::max)
    }

    /// Max block-wise deviation over all rows.
    pub fn max_diff_all(&self, other: &Self) -> f64 {
        (0..4).map(|i| max_abs_diff_rows(&self.blocks[i], &other.blocks[i], self.dim)).fold(0.0, f64::max)
    }

    /// Max |entry| over each block's safe rows.
    pub fn max_abs_safe(&self) -> f64 {
        (0..4)
            .map(|i| {
                let b = &self.blocks[i];
                (0..self.safe_rows[i].min(self.dim))
                    .flat_map(|r| b.row(r).iter().map(|x| x.norm()).collect::<Vec<_>>())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, s: &SuperState) -> SuperState {
        SuperState {
            k: s.k,
            psi0: self.ul() * &s.psi0 + self.ur() * &s.psi1,
            psi1: self.ll() * &s.psi0 + self.lr() * &s.psi1,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        assert!(n >= 1, "operator power needs n >= 1");
        let mut acc = self.clone();
        for _ in 1..n {
            acc = &acc * self;
        }
        acc
    }
}

fn block_is_zero(m: &CMatrix) -> bool {
    m.iter().all(|x| x.is_zero())
}

impl Mul for &SuperOperator {
    type Output = SuperOperator;

    fn mul(self, rhs: &SuperOperator) -> SuperOperator {
        let d = self.dim;
        let mut blocks: [CMatrix; 4] = std::array::from_fn(|_| CMatrix::zeros(d, d));
        let mut safe = [d; 4];
        for i in 0..2 {
            for j in 0..2 {
                for m in 0..2 {
                    let a = &self.blocks[2 * i + m];
                    let b = &rhs.blocks[2 * m + j];
                    if block_is_zero(a) || block_is_zero(b) {
                        continue;
                    }
                    blocks[2 * i + j] += a * b;
                    let depth = (d - self.safe_rows[2 * i + m]) + (d - rhs.safe_rows[2 * m + j]);
                    safe[2 * i + j] = safe[2 * i + j].min(d.saturating_sub(depth));
                }
            }
        }
        SuperOperator::new(self.k, blocks, safe)
    }
}

/// Vector in the fermion ⊗ boson space, stored as (ψ0, ψ1).
#[derive(Debug, Clone, PartialEq)]
pub struct SuperState {
    pub k: u32,
    pub psi0: CVector,
    pub psi1: CVector,
}

impl SuperState {
    pub fn new(k: u32, psi0: CVector, psi1: CVector) -> Self {
        assert_eq!(psi0.len(), psi1.len(), "components must share the cutoff");
        Self { k, psi0, psi1 }
    }

    pub fn dim(&self) -> usize {
        self.psi0.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.psi0.norm_squared() + self.psi1.norm_squared()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(re(1.0 / n)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.k, &self.psi0 * s, &self.psi1 * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.k, &self.psi0 + &other.psi0, &self.psi1 + &other.psi1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.k, &self.psi0 - &other.psi0, &self.psi1 - &other.psi1)
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.psi0.dotc(&other.psi0) + self.psi1.dotc(&other.psi1)
    }

    /// Dense 2d vector, fermion index outermost.
    pub fn to_vector(&self) -> CVector {
        let d = self.dim();
        CVector::from_fn(2 * d, |i, _| if i < d { self.psi0[i] } else { self.psi1[i - d] })
    }

    /// Coefficient array c_{f n} as two rows.
    pub fn coefficients(&self) -> [Vec<Complex64>; 2] {
        [self.psi0.iter().copied().collect(), self.psi1.iter().copied().collect()]
    }

    /// Zero-pads or truncates both components to cutoff d.
    pub fn resized(&self, d: usize) -> Self {
        let fit = |v: &CVector| CVector::from_fn(d, |i, _| if i < v.len() { v[i] } else { Complex64::zero() });
        Self::new(self.k, fit(&self.psi0), fit(&self.psi1))
    }
}

/// A point on the super-Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint {
    pub theta: f64,
    pub phi: f64,
}

impl BlochPoint {
    /// θ must lie in [0, π]; φ is reduced into [0, 2π).
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::InvalidBlochPoint { theta, phi });
        }
        let phi = phi.rem_euclid(2.0 * PI);
        Ok(Self { theta, phi })
    }

    /// Stereographic coordinate ξ = tan(θ/2) e^{iφ}.
    pub fn stereographic(&self) -> Complex64 {
        Complex64::from_polar((0.5 * self.theta).tan(), self.phi)
    }
}

/// (Q_k, Q_k†) with b_k in the lower-left block of Q_k.
pub fn supercharges(k: u32, d: usize) -> Result<(SuperOperator, SuperOperator)> {
    let (b, _) = ladder_ops(k, d)?;
    let mut q = SuperOperator::zeros(k, d);
    q.blocks[2] = b.matrix;
    q.safe_rows[2] = b.safe_rows;
    let qd = q.adjoint();
    Ok((q, qd))
}

fn divisor_floats(k: u32, n_max: usize) -> Result<Vec<f64>> {
    Ok(FibDivisorTable::new(k, n_max)?.to_f64())
}

/// ħω/2 · blockdiag(F_N^(k), F_{N+1}^(k)), built from tables so every row
/// is exact.
pub fn super_hamiltonian(k: u32, d: usize, hbar_omega: f64) -> Result<SuperOperator> {
    Ok(super_fib_table(k, d)?.scale(re(0.5 * hbar_omega)))
}

/// blockdiag(F_N^(k), F_{N+1}^(k)) from the divisor table.
pub fn super_fib_table(k: u32, d: usize) -> Result<SuperOperator> {
    if d < 2 {
        return Err(Error::CutoffTooSmall { dim: d, min: 2 });
    }
    let f = divisor_floats(k, d)?;
    Ok(SuperOperator::block_diag(k, diag_real(f[..d].iter().copied()), diag_real(f[1..=d].iter().copied()), [d, d]))
}

/// Super-number operator 𝒩 = blockdiag(N, N + 1).
pub fn super_number_op(d: usize) -> SuperOperator {
    SuperOperator::block_diag(0, diag_real((0..d).map(|n| n as f64)), diag_real((0..d).map(|n| n as f64 + 1.0)), [d, d])
}

/// Binet function (φ^{km} − φ′^{km}) / (φ^k − φ′^k) of a real argument m;
/// k = 0 is the limit m.
pub fn binet(k: u32, m: f64) -> f64 {
    if k == 0 {
        return m;
    }
    let (p, q) = (phi_pow(k), phi_prime_pow(k));
    let qm = if m.fract() == 0.0 { q.powi(m as i32) } else { q.powf(m) };
    (p.powf(m) - qm) / (p - q)
}

/// ℱ_𝒩^(k): the Binet function applied entrywise to the diagonal 𝒩.
pub fn super_fib_binet(k: u32, d: usize) -> Result<SuperOperator> {
    if d < 2 {
        return Err(Error::CutoffTooSmall { dim: d, min: 2 });
    }
    let n = super_number_op(d);
    let apply = |m: &CMatrix| diag_real(m.diagonal().iter().map(|x| binet(k, x.re)));
    let mut out = SuperOperator::block_diag(k, apply(n.ul()), apply(n.lr()), [d, d]);
    out.k = k;
    Ok(out)
}

/// [a, b] on safe rows: (max |entry|, max |entry| / max |ab entry|).
pub fn commutator_residual(a: &SuperOperator, b: &SuperOperator) -> (f64, f64) {
    let ab = a * b;
    let comm = ab.sub(&(b * a));
    let abs = comm.max_abs_safe();
    (abs, abs / ab.max_abs_safe().max(f64::MIN_POSITIVE))
}

/// Tr_f of a block-diagonal operator: the sum of its two diagonal blocks.
pub fn partial_trace_fermion_op(h: &SuperOperator) -> Result<FockOperator> {
    let off = h.off_diagonal_norm();
    if off > 1e-12 {
        return Err(Error::NotBlockDiagonal(off));
    }
    let safe = h.safe_rows[0].min(h.safe_rows[3]);
    Ok(FockOperator::new(h.k, h.block_trace(), safe))
}

/// cos(θ/2)|0⟩_f|n;k⟩ + sin(θ/2)e^{iφ}|1⟩_f|n−1;k⟩, eigenvector of ℱ_𝒩^(k)
/// with eigenvalue F_n^(k). The fermion-vacuum coefficient is real and
/// non-negative.
pub fn super_number_state(n: usize, k: u32, p: BlochPoint, d: usize) -> Result<SuperState> {
    if n == 0 || n >= d {
        return Err(Error::IndexOutOfRange { n, dim: d });
    }
    let mut psi0 = CVector::zeros(d);
    let mut psi1 = CVector::zeros(d);
    psi0[n] = re((0.5 * p.theta).cos());
    psi1[n - 1] = Complex64::from_polar((0.5 * p.theta).sin(), p.phi);
    Ok(SuperState::new(k, psi0, psi1))
}

/// ‖(A − λ)ψ‖.
pub fn eigen_residual(op: &SuperOperator, state: &SuperState, lambda: Complex64) -> f64 {
    op.apply(state).sub(&state.scale(lambda)).norm_sq().sqrt()
}

/// ⟨ψ|A|ψ⟩ / ⟨ψ|ψ⟩.
pub fn expectation(op: &SuperOperator, state: &SuperState) -> Complex64 {
    state.inner(&op.apply(state)) / state.norm_sq()
}

/// Iterates λ_{n+1} = L_k + (−1)^{k−1}/λ_n, returning λ_0..=λ_steps.
pub fn energy_ratio_iter(k: u32, lambda0: f64, steps: usize) -> Result<Vec<f64>> {
    let lk = lucas_f64(k);
    let s = -parity_sign(k);
    let mut out = Vec::with_capacity(steps + 1);
    let mut lambda = lambda0;
    out.push(lambda);
    for step in 0..steps {
        if lambda == 0.0 {
            return Err(Error::DivisionByZero { step });
        }
        lambda = lk + s / lambda;
        out.push(lambda);
    }
    Ok(out)
}

/// Leading large-n behaviour of E_n = ħω/2 F_n^(k): ħω/2 · φ^{kn}/(φ^k − φ′^k).
pub fn asymptotic_level(k: u32, n: usize, hbar_omega: f64) -> f64 {
    let (p, q) = (phi_pow(k), phi_prime_pow(k));
    0.5 * hbar_omega * p.powi(n as i32) / (p - q)
}

/// ħω/2 · φ^{−k} e^{kn ln φ}. Tracks [`asymptotic_level`] up to the constant
/// factor φ^k / (F_k √5), which tends to 1 only as k grows.
pub fn shifted_power_level(k: u32, n: usize, hbar_omega: f64) -> f64 {
    0.5 * hbar_omega * phi_pow(k).powi(n as i32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::hamiltonian_boson;
    use crate::golden::{fibonacci, PHI};
    use num_traits::ToPrimitive;

    fn sorted_eigs(op: &SuperOperator) -> Vec<f64> {
        let mut v: Vec<f64> = op.ul().diagonal().iter().chain(op.lr().diagonal().iter()).map(|x| x.re).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn supercharges_nilpotent() {
        for k in 0..4 {
            let (q, qd) = supercharges(k, 6).unwrap();
            assert!((&q * &q).to_dense().iter().all(|x| x.is_zero()));
            assert!((&qd * &qd).to_dense().iter().all(|x| x.is_zero()));
        }
        let (q, _) = supercharges(0, 3).unwrap();
        let (b, _) = ladder_ops(0, 3).unwrap();
        assert_eq!(q.ll(), &b.matrix);
        assert!(block_is_zero(q.ul()) && block_is_zero(q.ur()) && block_is_zero(q.lr()));
    }

    #[test]
    fn anticommutator_matches_table() {
        for k in 0..=5 {
            let d = 12;
            let (q, qd) = supercharges(k, d).unwrap();
            let anti = (&q * &qd).add(&(&qd * &q)).scale(re(0.5));
            let h = super_hamiltonian(k, d, 1.0).unwrap();
            let rows = anti.min_safe_rows();
            assert_eq!(rows, d - 2);
            for i in [0, 3] {
                let scale = h.blocks[i].iter().map(|x| x.norm()).fold(1.0, f64::max);
                assert!(max_abs_diff_rows(&anti.blocks[i], &h.blocks[i], rows) < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn hamiltonian_spectra() {
        let h1 = super_hamiltonian(1, 8, 2.0).unwrap();
        let e = sorted_eigs(&h1);
        // F_1 = F_2 = 1 makes the first excited level fourfold
        assert_eq!(&e[..10], &[0.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 5.0]);
        let h4 = super_hamiltonian(4, 6, 2.0).unwrap();
        let mut distinct = sorted_eigs(&h4);
        distinct.dedup();
        assert_eq!(&distinct[1..6], &[1.0, 7.0, 48.0, 329.0, 2255.0]);
        let h0 = super_hamiltonian(0, 5, 2.0).unwrap();
        assert_eq!(sorted_eigs(&h0), vec![0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0, 5.0]);
    }

    #[test]
    fn binet_operator() {
        let f1 = super_fib_binet(1, 4).unwrap();
        assert!((f1.lr()[(0, 0)].re - 1.0).abs() < 1e-12);
        let f3 = super_fib_binet(3, 6).unwrap();
        assert!((f3.ul()[(4, 4)].re - 72.0).abs() < 1e-9);
        for k in 0..=5 {
            let a = super_fib_binet(k, 20).unwrap();
            let b = super_fib_table(k, 20).unwrap();
            for i in [0, 3] {
                for n in 0..20 {
                    let (x, y) = (a.blocks[i][(n, n)].re, b.blocks[i][(n, n)].re);
                    assert!((x - y).abs() <= 1e-10 * y.max(1.0), "k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn partial_traces() {
        let h = super_hamiltonian(1, 10, 1.0).unwrap();
        let tr = partial_trace_fermion_op(&h).unwrap();
        assert_eq!(tr.matrix, hamiltonian_boson(1, 10, 1.0).unwrap().matrix);
        let h0 = partial_trace_fermion_op(&super_hamiltonian(0, 6, 1.0).unwrap()).unwrap();
        assert_eq!(h0.diagonal(), vec![0.5, 1.5, 2.5, 3.5, 4.5, 5.5]);
        let (q, qd) = supercharges(2, 10).unwrap();
        let anti = (&q * &qd).add(&(&qd * &q)).scale(re(0.5));
        let tr = partial_trace_fermion_op(&anti).unwrap();
        let hb = hamiltonian_boson(2, 10, 1.0).unwrap();
        assert!(max_abs_diff_rows(&tr.matrix, &hb.matrix, tr.safe_rows) < 1e-12);
        assert!(matches!(partial_trace_fermion_op(&q), Err(Error::NotBlockDiagonal(_))));
    }

    #[test]
    fn number_states() {
        let d = 8;
        let north = super_number_state(3, 2, BlochPoint::new(0.0, 0.0).unwrap(), d).unwrap();
        assert_eq!(north.psi0[3], re(1.0));
        assert!(north.psi1.norm() == 0.0);
        let south = super_number_state(3, 2, BlochPoint::new(PI, 0.0).unwrap(), d).unwrap();
        assert!(south.psi0.norm() < 1e-16);
        assert!((south.psi1[2].norm() - 1.0).abs() < 1e-16);
        assert_eq!(
            super_number_state(8, 1, BlochPoint::new(0.1, 0.0).unwrap(), 8).unwrap_err(),
            Error::IndexOutOfRange { n: 8, dim: 8 }
        );
        let nop = super_number_op(d);
        for k in 0..=4 {
            let fop = super_fib_binet(k, d).unwrap();
            for n in 1..d {
                for (t, p) in [(0.3, 1.0), (1.2, 4.0), (PI / 2.0, 6.0)] {
                    let s = super_number_state(n, k, BlochPoint::new(t, p).unwrap(), d).unwrap();
                    assert!((s.norm_sq() - 1.0).abs() < 1e-12);
                    let fkn = crate::golden::fib_divisor(k, n as u64).unwrap().to_f64().unwrap();
                    assert!(eigen_residual(&fop, &s, re(fkn)) < 1e-10 * fkn.max(1.0));
                    assert!((expectation(&nop, &s).re - n as f64).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bloch_point_ranges() {
        assert!(BlochPoint::new(-0.1, 0.0).is_err());
        assert!(BlochPoint::new(3.2, 0.0).is_err());
        let p = BlochPoint::new(1.0, -PI / 2.0).unwrap();
        assert!((p.phi - 1.5 * PI).abs() < 1e-15);
        let q = BlochPoint::new(2.0 * (PHI.atan()), PI).unwrap();
        assert!((q.stereographic() - re(-PHI)).norm() < 1e-12);
    }

    #[test]
    fn ratio_iteration() {
        let v = energy_ratio_iter(1, 1.0, 60).unwrap();
        assert!((v[60] - PHI).abs() < 1e-10);
        let v = energy_ratio_iter(2, 3.0, 60).unwrap();
        assert!((v[60] - PHI * PHI).abs() < 1e-10);
        for k in 1..=5u32 {
            let v = energy_ratio_iter(k, 1.0, 40).unwrap();
            let l = *v.last().unwrap();
            assert!((l - phi_pow(k)).abs() < 1e-8);
            let s = -parity_sign(k);
            assert!((l * l - (lucas_f64(k) * l + s)).abs() < 1e-10 * l * l);
        }
        // k = 2, λ₀ = 1 → λ₁ = 3 − 1 = 2; λ₀ = 0 is rejected at step 0
        assert_eq!(energy_ratio_iter(2, 0.0, 3).unwrap_err(), Error::DivisionByZero { step: 0 });
        // k = 1: λ = 1 + 1/λ; λ₀ = −1 → 0 at step 1
        assert_eq!(energy_ratio_iter(1, -1.0, 3).unwrap_err(), Error::DivisionByZero { step: 1 });
    }

    #[test]
    fn asymptotics() {
        let e30 = fibonacci(60).to_f64().unwrap() * 0.5;
        let a = asymptotic_level(2, 30, 1.0);
        assert!(((a - e30) / e30).abs() < 0.01);
        // the shifted-power form is off by φ^k/(F_k √5)
        let ratio = e30 / shifted_power_level(2, 30, 1.0);
        assert!((ratio - PHI * PHI / 5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn dense_layout() {
        let (q, _) = supercharges(1, 3).unwrap();
        let m = q.to_dense();
        // ⟨1_f, 0| Q |0_f, 1⟩ = ⟨0|b|1⟩ = 1
        assert_eq!(m[(3, 1)], re(1.0));
        let s = SuperState::new(1, CVector::from_vec(vec![re(0.0), re(1.0), re(0.0)]), CVector::zeros(3));
        let direct = &m * s.to_vector();
        assert_eq!(direct, q.apply(&s).to_vector());
    }
}
