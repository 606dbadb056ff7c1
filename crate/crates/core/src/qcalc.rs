//! (p,q)-calculus with the golden bases p = φ^k, q = φ′^k.
//!
//! Covers the (p,q)-numbers, golden factorials F_n^(k)!, the entire golden
//! exponential functions e_F^z = Σ zⁿ / F_n^(k)! and the Fibonacci-divisor
//! derivative D_k, both pointwise and on power-series coefficients.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::golden::{lucas_f64, phi_pow, phi_prime_pow, FibDivisorTable};

/// Hard cap on golden exponential terms.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// Default stopping tolerance for float golden exponentials.
pub const DEFAULT_SERIES_TOL: f64 = 1e-17;

/// `[n]_{pq} = (pⁿ − qⁿ)/(p − q)`.
pub fn pq_number(p: f64, q: f64, n: u32) -> Result<f64> {
    if p == q {
        return Err(Error::DegenerateBases(p));
    }
    Ok((p.powi(n as i32) - q.powi(n as i32)) / (p - q))
}

/// Fibonacci divisors F_1^(k), F_2^(k), … as floats, generated with the
/// three-term recurrence. Exact for k = 0.
#[derive(Debug, Clone)]
pub struct DivisorFloats {
    lucas: f64,
    sign: f64,
    prev: f64,
    cur: f64,
}

impl DivisorFloats {
    pub fn new(k: u32) -> Self {
        Self { lucas: lucas_f64(k), sign: if k % 2 == 1 { 1.0 } else { -1.0 }, prev: 0.0, cur: 0.0 }
    }
}

impl Iterator for DivisorFloats {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let next = if self.cur == 0.0 { 1.0 } else { self.lucas * self.cur + self.sign * self.prev };
        self.prev = self.cur;
        self.cur = next;
        Some(next)
    }
}

/// F_n^(k)! = Π_{m=1}^{n} F_m^(k), with F_0^(k)! = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenFactorialTable {
    k: u32,
    values: Vec<BigUint>,
}

impl GoldenFactorialTable {
    pub fn new(k: u32, n_max: usize) -> Result<Self> {
        let divisors = FibDivisorTable::new(k, n_max)?;
        let mut values = Vec::with_capacity(n_max + 1);
        let mut acc = BigUint::one();
        values.push(acc.clone());
        for n in 1..=n_max {
            acc *= divisors.get(n);
            values.push(acc.clone());
        }
        Ok(Self { k, values })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.values[n]
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }
}

/// Result of a float golden exponential evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenExp {
    pub value: Complex64,
    /// Upper bound on the magnitude of the discarded tail.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Evaluates e_F^z for level k.
///
/// Terms are summed until the geometric bound on the remaining tail drops
/// below `tol · (|S| + 1e−3)`, which also bounds the next term. For k = 0
/// this is the ordinary exponential series.
pub fn golden_exp(k: u32, z: Complex64, tol: f64) -> Result<GoldenExp> {
    let mut sum = Complex64::one();
    let mut term = Complex64::one();
    let zabs = z.norm();
    if zabs == 0.0 {
        return Ok(GoldenExp { value: sum, tail_bound: 0.0, terms: 1 });
    }
    let mut divisors = DivisorFloats::new(k).peekable();
    for n in 1..MAX_SERIES_TERMS {
        let f = divisors.next().expect("infinite iterator");
        term = term * z / f;
        sum += term;
        let next_f = *divisors.peek().expect("infinite iterator");
        let ratio = zabs / next_f;
        if ratio <= 0.5 {
            let tail = term.norm() * ratio / (1.0 - ratio);
            if tail < tol * (sum.norm() + 1e-3) {
                return Ok(GoldenExp { value: sum, tail_bound: tail, terms: n + 1 });
            }
        }
    }
    Err(Error::NonConvergence { terms: MAX_SERIES_TERMS })
}

/// e_F^x for real x at the default tolerance.
pub fn golden_exp_real(k: u32, x: f64) -> f64 {
    golden_exp(k, Complex64::new(x, 0.0), DEFAULT_SERIES_TOL).map(|e| e.value.re).unwrap_or(f64::NAN)
}

/// Exact coefficients 1/F_n^(k)! for n = 0..n_terms.
pub fn golden_exp_coefficients(k: u32, n_terms: usize) -> Result<Vec<BigRational>> {
    let table = GoldenFactorialTable::new(k, n_terms.saturating_sub(1))?;
    Ok(table.values().iter().take(n_terms).map(|f| BigRational::new(BigInt::one(), BigInt::from(f.clone()))).collect())
}

/// Truncated power series Σ c_n zⁿ in float arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenSeries {
    pub k: u32,
    pub coeffs: Vec<Complex64>,
    /// Bound on Σ_{n > n_max} |c_n zⁿ| for |z| ≤ `radius`, when known.
    pub tail_bound: Option<f64>,
    pub radius: f64,
}

impl GoldenSeries {
    /// Coefficients of e_F^z truncated with the same rule as [`golden_exp`]
    /// at |z| = `radius`.
    pub fn exponential(k: u32, radius: f64, tol: f64) -> Result<Self> {
        let e = golden_exp(k, Complex64::new(radius, 0.0), tol)?;
        let mut coeffs = Vec::with_capacity(e.terms);
        let mut c = Complex64::one();
        coeffs.push(c);
        for f in DivisorFloats::new(k).take(e.terms - 1) {
            c /= f;
            coeffs.push(c);
        }
        Ok(Self { k, coeffs, tail_bound: Some(e.tail_bound), radius })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c)
    }
}

/// D_k on coefficients: c_n zⁿ ↦ F_n^(k) c_n z^{n−1}.
pub fn golden_derivative_series(k: u32, s: &GoldenSeries) -> GoldenSeries {
    let coeffs = s.coeffs.iter().skip(1).zip(DivisorFloats::new(k)).map(|(c, f)| c * f).collect();
    GoldenSeries { k, coeffs, tail_bound: None, radius: s.radius }
}

/// Exact D_k on rational coefficients.
pub fn golden_derivative_exact(k: u32, coeffs: &[BigRational]) -> Result<Vec<BigRational>> {
    if coeffs.len() < 2 {
        return Ok(Vec::new());
    }
    let table = FibDivisorTable::new(k, coeffs.len() - 1)?;
    Ok(coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c * BigRational::from_integer(BigInt::from(table.get(n).clone())))
        .collect())
}

/// Two-point golden derivative (f(φ^k x) − f(φ′^k x)) / ((φ^k − φ′^k) x).
///
/// k = 0 has coincident bases and is rejected.
pub fn golden_derivative_point<F: Fn(f64) -> f64>(k: u32, f: F, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::SingularPoint);
    }
    let p = phi_pow(k);
    let q = phi_prime_pow(k);
    if p == q {
        return Err(Error::DegenerateBases(p));
    }
    Ok((f(p * x) - f(q * x)) / ((p - q) * x))
}
