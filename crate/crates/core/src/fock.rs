//! Truncated Fock-space realization of the Fibonacci-divisor oscillators.
//!
//! Every operator carries `safe_rows`: the number of leading basis rows on
//! which its defining identities survive truncation at cutoff d. Products of
//! m ladder factors are trusted on the leading d − m rows only.

use std::ops::Mul;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::golden::{FibDivisorTable, PHI};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Diagonal complex matrix from real entries.
pub fn diag_real<I: IntoIterator<Item = f64>>(values: I) -> CMatrix {
    let v: Vec<Complex64> = values.into_iter().map(re).collect();
    CMatrix::from_diagonal(&CVector::from_vec(v))
}

/// Max |a_ij − b_ij| over the leading `rows` rows.
pub fn max_abs_diff_rows(a: &CMatrix, b: &CMatrix, rows: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..rows.min(a.nrows()) {
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

/// Max over the leading `rows` rows of |a_ij − b_ij| / max(1, max_j |b_ij|).
pub fn max_rel_diff_rows(a: &CMatrix, b: &CMatrix, rows: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..rows.min(a.nrows()) {
        let scale = b.row(i).iter().map(|x| x.norm()).fold(1.0, f64::max);
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm() / scale);
        }
    }
    worst
}

/// Dense operator on the d-dimensional truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub k: u32,
    pub dim: usize,
    pub matrix: CMatrix,
    pub safe_rows: usize,
}

impl FockOperator {
    pub fn new(k: u32, matrix: CMatrix, safe_rows: usize) -> Self {
        let dim = matrix.nrows();
        Self { k, dim, matrix, safe_rows }
    }

    pub fn depth(&self) -> usize {
        self.dim - self.safe_rows
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.k, self.matrix.adjoint(), self.safe_rows)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.k, self.matrix.map(|x| x * s), self.safe_rows)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|x| x.re).collect()
    }

    /// Max entry-wise deviation from `other` on rows safe for both.
    pub fn max_diff_safe(&self, other: &Self) -> f64 {
        max_abs_diff_rows(&self.matrix, &other.matrix, self.safe_rows.min(other.safe_rows))
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;

    fn mul(self, rhs: &FockOperator) -> FockOperator {
        let depth = self.depth() + rhs.depth();
        FockOperator::new(self.k, &self.matrix * &rhs.matrix, self.dim.saturating_sub(depth))
    }
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(Error::CutoffTooSmall { dim: d, min });
    }
    Ok(())
}

fn divisor_floats(k: u32, n_max: usize) -> Result<Vec<f64>> {
    Ok(FibDivisorTable::new(k, n_max)?.to_f64())
}

/// (b_k, b_k†) with ⟨n−1|b_k|n⟩ = √F_n^(k).
pub fn ladder_ops(k: u32, d: usize) -> Result<(FockOperator, FockOperator)> {
    check_dim(d, 2)?;
    let f = divisor_floats(k, d)?;
    let mut b = CMatrix::zeros(d, d);
    for n in 1..d {
        b[(n - 1, n)] = re(f[n].sqrt());
    }
    let b = FockOperator::new(k, b, d - 1);
    let bd = b.adjoint();
    Ok((b, bd))
}

/// Harmonic number operator N = diag(0, 1, …, d−1).
pub fn number_op(d: usize) -> FockOperator {
    FockOperator::new(0, diag_real((0..d).map(|n| n as f64)), d)
}

/// F_N^(k) = diag(F_n^(k)), exact on all rows.
pub fn fib_divisor_op(k: u32, d: usize) -> Result<FockOperator> {
    check_dim(d, 1)?;
    let f = divisor_floats(k, d)?;
    Ok(FockOperator::new(k, diag_real(f[..d].iter().copied()), d))
}

/// F_{N+I}^(k) = diag(F_{n+1}^(k)).
pub fn fib_divisor_shifted_op(k: u32, d: usize) -> Result<FockOperator> {
    check_dim(d, 1)?;
    let f = divisor_floats(k, d)?;
    Ok(FockOperator::new(k, diag_real(f[1..=d].iter().copied()), d))
}

/// ħω/2 (F_N + F_{N+I}).
pub fn hamiltonian_boson(k: u32, d: usize, hbar_omega: f64) -> Result<FockOperator> {
    check_dim(d, 2)?;
    let f = divisor_floats(k, d)?;
    let h = diag_real((0..d).map(|n| 0.5 * hbar_omega * (f[n] + f[n + 1])));
    Ok(FockOperator::new(k, h, d))
}

/// ħω/2 (F_{N+I} − F_N), defined for odd k only.
pub fn hamiltonian_fermionic(k: u32, d: usize, hbar_omega: f64) -> Result<FockOperator> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidLevel(k));
    }
    check_dim(d, 2)?;
    let f = divisor_floats(k, d)?;
    let h = diag_real((0..d).map(|n| 0.5 * hbar_omega * (f[n + 1] - f[n])));
    Ok(FockOperator::new(k, h, d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// ħω/2 (F_n + F_{n+1})
    Bosonic,
    /// ħω/2 (F_{n+1} − F_n)
    Fermionic,
    /// ħω/2 F_n
    Susy,
}

impl SpectrumKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumKind::Bosonic => "bosonic",
            SpectrumKind::Fermionic => "fermionic",
            SpectrumKind::Susy => "susy",
        }
    }
}

/// Energy levels E_0..=E_{n_max}, stored exactly as integer multiples of
/// ħω/2 and as floats.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub k: u32,
    pub hbar_omega: f64,
    pub kind: SpectrumKind,
    pub half_quanta: Vec<BigInt>,
    pub levels: Vec<f64>,
}

impl SpectrumTable {
    pub fn new(k: u32, n_max: usize, hbar_omega: f64, kind: SpectrumKind) -> Result<Self> {
        if kind == SpectrumKind::Fermionic && k.is_multiple_of(2) {
            return Err(Error::InvalidLevel(k));
        }
        let t = FibDivisorTable::new(k, n_max + 1)?;
        let f = |n: usize| BigInt::from(t.get(n).clone());
        let half_quanta: Vec<BigInt> = (0..=n_max)
            .map(|n| match kind {
                SpectrumKind::Bosonic => f(n) + f(n + 1),
                SpectrumKind::Fermionic => f(n + 1) - f(n),
                SpectrumKind::Susy => f(n),
            })
            .collect();
        let levels = half_quanta.iter().map(|e| 0.5 * hbar_omega * e.to_f64().unwrap_or(f64::INFINITY)).collect();
        Ok(Self { k, hbar_omega, kind, half_quanta, levels })
    }

    /// First n where E_{n+1} ≠ L_k E_n + (−1)^{k−1} E_{n−1}, checked over the
    /// exact integers.
    pub fn recurrence_violation(&self) -> Option<usize> {
        let lk = BigInt::from(crate::golden::lucas(self.k as u64));
        let odd = self.k % 2 == 1;
        let e = &self.half_quanta;
        (1..e.len().saturating_sub(1)).find(|&n| {
            let rhs = if odd { &lk * &e[n] + &e[n - 1] } else { &lk * &e[n] - &e[n - 1] };
            e[n + 1] != rhs
        })
    }
}

/// Closed form for even k, with k allowed to be real (k → 0 gives
/// ħω(n + ½)): ħω/2 · sinh((n+½)a) / sinh(a/2), a = k ln φ.
pub fn spectrum_even_form(k: f64, n: usize, hbar_omega: f64) -> f64 {
    let a = k * PHI.ln();
    let x = (n as f64 + 0.5) * a;
    0.5 * hbar_omega * x.sinh() / (0.5 * a).sinh()
}

/// Leading sinh/cosh term for odd k:
/// ħω/2 · 2cosh(a/2)/cosh(a) · {sinh, cosh}((n+½)a) for {even, odd} n.
/// Differs from the exact level by ħω/2 · (−1)ⁿ e^{−(n+1)a} / cosh(a).
pub fn odd_leading_term(k: u32, n: usize, hbar_omega: f64) -> f64 {
    let a = k as f64 * PHI.ln();
    let x = (n as f64 + 0.5) * a;
    let factor = 2.0 * (0.5 * a).cosh() / a.cosh();
    let body = if n.is_multiple_of(2) { x.sinh() } else { x.cosh() };
    0.5 * hbar_omega * body * factor
}

/// Closed-form bosonic level E_n^(k) without any Fibonacci tables.
pub fn spectrum_closed_form(k: u32, n: usize, hbar_omega: f64) -> f64 {
    if k == 0 {
        return hbar_omega * (n as f64 + 0.5);
    }
    if k.is_multiple_of(2) {
        return spectrum_even_form(k as f64, n, hbar_omega);
    }
    let a = k as f64 * PHI.ln();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let correction = 0.5 * hbar_omega * sign * (-(n as f64 + 1.0) * a).exp() / a.cosh();
    odd_leading_term(k, n, hbar_omega) + correction
}

/// Max-norm residual of b_k − b·√(F_N^(k)/N) on safe rows. The n = 0 entry of
/// the diagonal factor multiplies a zero column and is set to 1.
pub fn nonlinear_map_check(k: u32, d: usize) -> Result<f64> {
    check_dim(d, 3)?;
    let (bk, _) = ladder_ops(k, d)?;
    let (b, _) = ladder_ops(0, d)?;
    let f = divisor_floats(k, d)?;
    let factor = diag_real((0..d).map(|n| if n == 0 { 1.0 } else { (f[n] / n as f64).sqrt() }));
    let mapped = &b.matrix * factor;
    Ok(max_abs_diff_rows(&bk.matrix, &mapped, bk.safe_rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::{lucas_f64, phi_pow, phi_prime_pow};

    #[test]
    fn harmonic_ladder() {
        let (b, _) = ladder_ops(0, 4).unwrap();
        assert_eq!(b.matrix[(0, 1)], re(1.0));
        assert!((b.matrix[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
        assert!((b.matrix[(2, 3)].re - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(b.safe_rows, 3);
    }

    #[test]
    fn level_two_ladder() {
        let (b, bd) = ladder_ops(2, 5).unwrap();
        assert_eq!(b.matrix[(0, 1)].re, 1.0);
        assert!((b.matrix[(1, 2)].re - 3f64.sqrt()).abs() < 1e-15);
        assert!((b.matrix[(2, 3)].re - 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(bd.matrix, b.matrix.adjoint());
        // vacuum annihilation
        let mut vac = CVector::zeros(5);
        vac[0] = re(1.0);
        assert!(b.apply(&vac).norm() == 0.0);
    }

    #[test]
    fn ladder_needs_two_levels() {
        assert_eq!(ladder_ops(1, 1).unwrap_err(), Error::CutoffTooSmall { dim: 1, min: 2 });
    }

    #[test]
    fn divisor_operator() {
        assert_eq!(fib_divisor_op(0, 4).unwrap().diagonal(), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(fib_divisor_op(4, 6).unwrap().diagonal(), vec![0.0, 1.0, 7.0, 48.0, 329.0, 2255.0]);
    }

    #[test]
    fn factorized_forms() {
        for k in 0..=5 {
            let d = 12;
            let (b, bd) = ladder_ops(k, d).unwrap();
            let n_op = fib_divisor_op(k, d).unwrap();
            let bdb = &bd * &b;
            let bbd = &b * &bd;
            // b†b is exact on every row
            assert!(max_rel_diff_rows(&bdb.matrix, &n_op.matrix, d) < 1e-14);
            let shifted = fib_divisor_shifted_op(k, d).unwrap();
            assert!(max_rel_diff_rows(&bbd.matrix, &shifted.matrix, bbd.safe_rows) < 1e-14);
            assert_eq!(bbd.safe_rows, d - 2);
        }
    }

    #[test]
    fn quantum_algebra() {
        for k in 0..=6u32 {
            let d = 16;
            let (b, bd) = ladder_ops(k, d).unwrap();
            let bbd = &b * &bd;
            let bdb = &bd * &b;
            let (p, q) = (phi_pow(k), phi_prime_pow(k));
            let lhs1 = &bbd.matrix - bdb.matrix.map(|x| x * p);
            let lhs2 = &bbd.matrix - bdb.matrix.map(|x| x * q);
            let rhs1 = diag_real((0..d).map(|n| q.powi(n as i32)));
            let rhs2 = diag_real((0..d).map(|n| p.powi(n as i32)));
            let rows = bbd.safe_rows;
            // cancellation of φ^k F_n against F_{n+1}: relative to the row scale
            let scale: Vec<f64> = bbd.diagonal();
            for i in 0..rows {
                let s = scale[i].max(1.0);
                assert!((lhs1[(i, i)] - rhs1[(i, i)]).norm() < 1e-10 * s, "k={k} n={i}");
                assert!((lhs2[(i, i)] - rhs2[(i, i)]).norm() < 1e-10 * s, "k={k} n={i}");
            }
            if k <= 3 {
                assert!(max_abs_diff_rows(&lhs1, &rhs1, rows.min(6)) < 1e-10, "k={k}");
            }
        }
    }

    #[test]
    fn number_commutators() {
        for k in 0..4 {
            let d = 10;
            let (b, bd) = ladder_ops(k, d).unwrap();
            let n = number_op(d);
            let c1 = &(&n * &bd).matrix - &(&bd * &n).matrix;
            let c2 = &(&n * &b).matrix - &(&b * &n).matrix;
            assert!(max_abs_diff_rows(&c1, &bd.matrix, d - 1) < 1e-12);
            assert!(max_abs_diff_rows(&c2, &(-b.matrix.clone()), d - 1) < 1e-12);
        }
    }

    #[test]
    fn commutator_is_divisor_gap() {
        for k in 0..=5 {
            let d = 14;
            let (b, bd) = ladder_ops(k, d).unwrap();
            let comm = &(&b * &bd).matrix - &(&bd * &b).matrix;
            let gap = &fib_divisor_shifted_op(k, d).unwrap().matrix - &fib_divisor_op(k, d).unwrap().matrix;
            assert!(max_rel_diff_rows(&comm, &gap, d - 2) < 1e-12);
        }
    }

    #[test]
    fn shift_identities() {
        for k in 0..=4 {
            let d = 12;
            let (b, bd) = ladder_ops(k, d).unwrap();
            let fn_ = fib_divisor_op(k, d).unwrap();
            let fn1 = fib_divisor_shifted_op(k, d).unwrap();
            for f in [|x: f64| x, |x: f64| x * x] {
                let f_n = fn_.matrix.map(|z| re(f(z.re)));
                let f_n1 = fn1.matrix.map(|z| re(f(z.re)));
                let lhs = &bd.matrix * &f_n1;
                let rhs = &f_n * &bd.matrix;
                let scale = f_n1.iter().map(|z| z.norm()).fold(1.0, f64::max);
                assert!(max_abs_diff_rows(&lhs, &rhs, d - 1) <= 1e-12 * scale);
                let lhs = &b.matrix * &f_n;
                let rhs = &f_n1 * &b.matrix;
                assert!(max_abs_diff_rows(&lhs, &rhs, d - 1) <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn divisor_recursions() {
        for k in 1..=6u32 {
            let f = divisor_floats(k, 31).unwrap();
            let (p, q) = (phi_pow(k), phi_prime_pow(k));
            for n in 0..=30usize {
                let a = p * f[n] + q.powi(n as i32);
                let b = q * f[n] + p.powi(n as i32);
                let tol = 1e-10 * f[n + 1].max(1.0);
                assert!((f[n + 1] - a).abs() < tol, "k={k} n={n}");
                assert!((f[n + 1] - b).abs() < tol, "k={k} n={n}");
            }
            // F_{n+1} = L_k F_n + (−1)^{k−1} F_{n−1}
            let s = if k % 2 == 1 { 1.0 } else { -1.0 };
            for n in 1..30 {
                assert!((f[n + 1] - (lucas_f64(k) * f[n] + s * f[n - 1])).abs() < 1e-10 * f[n + 1]);
            }
        }
    }

    #[test]
    fn boson_hamiltonian() {
        let h0 = hamiltonian_boson(0, 5, 1.0).unwrap();
        assert_eq!(h0.diagonal(), vec![0.5, 1.5, 2.5, 3.5, 4.5]);
        let h1 = hamiltonian_boson(1, 4, 2.0).unwrap();
        assert_eq!(h1.diagonal(), vec![1.0, 2.0, 3.0, 5.0]);
        let h2 = hamiltonian_boson(2, 3, 1.0).unwrap();
        assert_eq!(h2.diagonal()[1], 2.0);
        // equals ħω/2 (b b† + b† b) on safe rows
        for k in 0..=4 {
            let d = 10;
            let (b, bd) = ladder_ops(k, d).unwrap();
            let sum = &(&b * &bd).matrix + &(&bd * &b).matrix;
            let h = hamiltonian_boson(k, d, 1.0).unwrap();
            assert!(max_abs_diff_rows(&sum.map(|x| x * 0.5), &h.matrix, d - 2) < 1e-9);
        }
    }

    #[test]
    fn fermionic_hamiltonian() {
        let h = hamiltonian_fermionic(1, 5, 2.0).unwrap();
        assert_eq!(h.diagonal(), vec![1.0, 0.0, 1.0, 1.0, 2.0]);
        let h3 = hamiltonian_fermionic(3, 4, 2.0).unwrap();
        assert_eq!(h3.diagonal()[1], 3.0);
        assert_eq!(hamiltonian_fermionic(2, 4, 1.0).unwrap_err(), Error::InvalidLevel(2));
    }

    #[test]
    fn spectrum_tables() {
        let t = SpectrumTable::new(1, 4, 1.0, SpectrumKind::Bosonic).unwrap();
        let ints: Vec<i64> = t.half_quanta.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(ints, vec![1, 2, 3, 5, 8]);
        for k in 0..=8 {
            for kind in [SpectrumKind::Bosonic, SpectrumKind::Susy] {
                let t = SpectrumTable::new(k, 64, 1.0, kind).unwrap();
                assert_eq!(t.recurrence_violation(), None);
                if k >= 1 {
                    assert!(t.levels[1..].windows(2).all(|w| w[1] > w[0]) || k == 1);
                }
            }
        }
        assert!(SpectrumTable::new(2, 4, 1.0, SpectrumKind::Fermionic).is_err());
    }

    #[test]
    fn closed_form_matches_table() {
        for k in 0..=7u32 {
            let h = hamiltonian_boson(k, 40, 1.0).unwrap().diagonal();
            for (n, e) in h.iter().enumerate() {
                let c = spectrum_closed_form(k, n, 1.0);
                assert!(((c - e) / e).abs() < 1e-10, "k={k} n={n}: {c} vs {e}");
            }
        }
        assert!((spectrum_closed_form(2, 3, 1.0) - 14.5).abs() < 1e-12);
    }

    #[test]
    fn odd_leading_term_error_is_the_correction() {
        // k = 1, n = 0: leading term 1/√5 against the exact ħω/2.
        assert!((odd_leading_term(1, 0, 2.0) - 1.0 / 5f64.sqrt()).abs() < 1e-14);
        for k in [1u32, 3, 5] {
            let a = k as f64 * PHI.ln();
            for n in 0..20usize {
                let exact = spectrum_closed_form(k, n, 2.0);
                let diff = exact - odd_leading_term(k, n, 2.0);
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let expected = sign * (-(n as f64 + 1.0) * a).exp() / a.cosh();
                assert!((diff - expected).abs() < 1e-9 * exact.max(1.0));
            }
        }
    }

    #[test]
    fn harmonic_limit_and_growth() {
        for n in 0..10 {
            let e = spectrum_even_form(1e-8, n, 1.0);
            assert!((e - (n as f64 + 0.5)).abs() < 1e-6);
        }
        let ratio = spectrum_closed_form(2, 41, 1.0) / spectrum_closed_form(2, 40, 1.0);
        assert!((ratio - phi_pow(2)).abs() < 1e-4);
    }

    #[test]
    fn nonlinear_map() {
        assert_eq!(nonlinear_map_check(0, 8).unwrap(), 0.0);
        assert!(nonlinear_map_check(1, 8).unwrap() < 1e-12);
        assert!(nonlinear_map_check(3, 8).unwrap() < 1e-12);
        assert!(nonlinear_map_check(2, 2).is_err());
    }
}
