//! Exact arithmetic in the golden ring Z[φ] and big-integer Fibonacci,
//! Lucas and Fibonacci-divisor sequences.
//!
//! Elements are stored as `a + b·φ` with φ² = φ + 1. The silver conjugate
//! φ′ = 1 − φ = −1/φ keeps conjugation inside the integer basis, so every
//! identity here is checked without floating point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// φ = (1 + √5)/2.
pub const PHI: f64 = 1.618_033_988_749_895;
/// φ′ = (1 − √5)/2 = −1/φ.
pub const PHI_PRIME: f64 = -0.618_033_988_749_894_9;

/// φ^k as a float.
pub fn phi_pow(k: u32) -> f64 {
    PHI.powi(k as i32)
}

/// φ′^k as a float (negative for odd k).
pub fn phi_prime_pow(k: u32) -> f64 {
    PHI_PRIME.powi(k as i32)
}

/// Lucas number L_k = φ^k + φ′^k as a float.
pub fn lucas_f64(k: u32) -> f64 {
    lucas(k as u64).to_f64().unwrap_or(f64::INFINITY)
}

/// (−1)^k as ±1.
pub fn parity_sign(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// An element `a + b·φ` of Z[φ].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoldenNumber {
    pub a: BigInt,
    pub b: BigInt,
}

impl GoldenNumber {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn phi() -> Self {
        Self::new(0, 1)
    }

    /// φ′ = 1 − φ.
    pub fn phi_prime() -> Self {
        Self::new(1, -1)
    }

    pub fn from_int(a: impl Into<BigInt>) -> Self {
        Self::new(a, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Silver conjugate φ ↦ φ′: (a, b) ↦ (a + b, −b).
    pub fn conj(&self) -> Self {
        Self { a: &self.a + &self.b, b: -&self.b }
    }

    /// Field norm x·conj(x) = a² + ab − b², an integer.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self { a: &self.a * s, b: &self.b * s }
    }

    /// x^n by square-and-multiply.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient self / rhs in Z[φ], or `None` if rhs is zero or the
    /// quotient leaves Z[φ].
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        let n = rhs.norm();
        if n.is_zero() {
            return None;
        }
        let num = self * &rhs.conj();
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(Self { a: qa, b: qb })
        } else {
            None
        }
    }

    /// a + b·φ in double precision.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * PHI
    }
}

impl fmt::Display for GoldenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}φ", self.a, -&self.b)
        } else {
            write!(f, "{} + {}φ", self.a, self.b)
        }
    }
}

impl Mul<&GoldenNumber> for &GoldenNumber {
    type Output = GoldenNumber;

    fn mul(self, rhs: &GoldenNumber) -> GoldenNumber {
        let bb = &self.b * &rhs.b;
        GoldenNumber { a: &self.a * &rhs.a + &bb, b: &self.a * &rhs.b + &rhs.a * &self.b + bb }
    }
}

impl Mul for GoldenNumber {
    type Output = GoldenNumber;
    fn mul(self, rhs: GoldenNumber) -> GoldenNumber {
        &self * &rhs
    }
}

impl Add<&GoldenNumber> for &GoldenNumber {
    type Output = GoldenNumber;
    fn add(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Add for GoldenNumber {
    type Output = GoldenNumber;
    fn add(self, rhs: GoldenNumber) -> GoldenNumber {
        &self + &rhs
    }
}

impl Sub<&GoldenNumber> for &GoldenNumber {
    type Output = GoldenNumber;
    fn sub(self, rhs: &GoldenNumber) -> GoldenNumber {
        GoldenNumber { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Sub for GoldenNumber {
    type Output = GoldenNumber;
    fn sub(self, rhs: GoldenNumber) -> GoldenNumber {
        &self - &rhs
    }
}

impl Neg for GoldenNumber {
    type Output = GoldenNumber;
    fn neg(self) -> GoldenNumber {
        GoldenNumber { a: -self.a, b: -self.b }
    }
}

/// Ring product, `(a₁a₂ + b₁b₂, a₁b₂ + a₂b₁ + b₁b₂)`.
pub fn gmul(x: &GoldenNumber, y: &GoldenNumber) -> GoldenNumber {
    x * y
}

pub fn gpow(x: &GoldenNumber, n: u64) -> GoldenNumber {
    x.pow(n)
}

pub fn to_real(x: &GoldenNumber) -> f64 {
    x.to_f64()
}

/// F_n with F₀ = 0, F₁ = 1.
pub fn fibonacci(n: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// L_n with L₀ = 2, L₁ = 1.
pub fn lucas(n: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::from(2u32), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Fibonacci numbers F_0..=F_n.
pub fn fibonacci_list(n: u64) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..=n {
        out.push(a.clone());
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    out
}

/// Fibonacci divisor F_n^(k) = F_{kn}/F_k; k = 0 is the limit F_n^(0) = n.
pub fn fib_divisor(k: u32, n: u64) -> Result<BigUint> {
    if k == 0 {
        return Ok(BigUint::from(n));
    }
    let (q, r) = fibonacci(k as u64 * n).div_rem(&fibonacci(k as u64));
    if !r.is_zero() {
        return Err(Error::DivisibilityViolation { k, n });
    }
    Ok(q)
}

/// Table of F_n^(k) for n = 0..=n_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibDivisorTable {
    k: u32,
    values: Vec<BigUint>,
}

impl FibDivisorTable {
    pub fn new(k: u32, n_max: usize) -> Result<Self> {
        let values = if k == 0 {
            (0..=n_max as u64).map(BigUint::from).collect()
        } else {
            let fibs = fibonacci_list(k as u64 * n_max.max(1) as u64);
            let fk = &fibs[k as usize];
            let mut values = Vec::with_capacity(n_max + 1);
            for n in 0..=n_max {
                let (q, r) = fibs[k as usize * n].div_rem(fk);
                if !r.is_zero() {
                    return Err(Error::DivisibilityViolation { k, n: n as u64 });
                }
                values.push(q);
            }
            values
        };
        Ok(Self { k, values })
    }

    /// Wraps arbitrary values without any checks (used to inject faults).
    pub fn from_values_unchecked(k: u32, values: Vec<BigUint>) -> Self {
        Self { k, values }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.values[n]
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64().unwrap_or(f64::INFINITY)).collect()
    }

    /// First n in 1..n_max where F_{n+1} ≠ L_k F_n + (−1)^{k−1} F_{n−1}.
    pub fn recurrence_violation(&self) -> Option<usize> {
        let lk = BigInt::from(lucas(self.k as u64));
        // k = 0: L_0 = 2 and (−1)^{−1} = −1, giving n+1 = 2n − (n−1).
        let odd = self.k % 2 == 1;
        (1..self.n_max()).find(|&n| {
            let prev = BigInt::from(self.values[n - 1].clone());
            let cur = BigInt::from(self.values[n].clone());
            let next = BigInt::from(self.values[n + 1].clone());
            let rhs = if odd { &lk * cur + prev } else { &lk * cur - prev };
            next != rhs
        })
    }
}

/// Exact Binet quotient (φ^{kn} − φ′^{kn}) / (φ^k − φ′^k) in Z[φ]. Returns
/// `None` for k = 0 (0/0) or if the quotient is not in Z[φ].
pub fn binet_quotient(k: u32, n: u64) -> Option<GoldenNumber> {
    let phi = GoldenNumber::phi();
    let phi_p = GoldenNumber::phi_prime();
    let num = phi.pow(k as u64 * n) - phi_p.pow(k as u64 * n);
    let den = phi.pow(k as u64) - phi_p.pow(k as u64);
    num.checked_div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GoldenNumber {
        GoldenNumber::new(a, b)
    }

    #[test]
    fn phi_squared_is_one_plus_phi() {
        assert_eq!(gmul(&GoldenNumber::phi(), &GoldenNumber::phi()), g(1, 1));
    }

    #[test]
    fn one_is_identity() {
        let x = g(-7, 13);
        assert_eq!(gmul(&GoldenNumber::one(), &x), x);
    }

    #[test]
    fn phi_times_conjugate() {
        let p = GoldenNumber::phi();
        assert_eq!(&p * &p.conj(), g(-1, 0));
        assert_eq!(&p + &GoldenNumber::phi_prime(), g(1, 0));
        assert_eq!(p.conj(), GoldenNumber::phi_prime());
    }

    #[test]
    fn powers() {
        assert_eq!(gpow(&GoldenNumber::phi(), 0), g(1, 0));
        assert_eq!(gpow(&GoldenNumber::phi(), 5), g(3, 5));
        assert_eq!(gpow(&GoldenNumber::phi_prime(), 5), g(8, -5));
        for n in 1..40u64 {
            let p = gpow(&GoldenNumber::phi(), n);
            assert_eq!(p, GoldenNumber::new(fibonacci(n - 1), fibonacci(n)));
        }
    }

    #[test]
    fn sequences() {
        assert_eq!(fibonacci(0), BigUint::zero());
        assert_eq!(fibonacci(1), BigUint::one());
        assert_eq!(fibonacci(10), BigUint::from(55u32));
        assert_eq!(lucas(4), BigUint::from(7u32));
        let p = GoldenNumber::phi();
        let l4 = p.pow(4) + p.conj().pow(4);
        assert_eq!(l4, g(7, 0));
    }

    #[test]
    fn divisor_values() {
        let k3: Vec<u64> = (1..=5).map(|n| fib_divisor(3, n).unwrap().to_u64().unwrap()).collect();
        assert_eq!(k3, vec![1, 4, 17, 72, 305]);
        let k5: Vec<u64> = (1..=5).map(|n| fib_divisor(5, n).unwrap().to_u64().unwrap()).collect();
        assert_eq!(k5, vec![1, 11, 122, 1353, 15005]);
        for k in 0..10 {
            assert_eq!(fib_divisor(k, 1).unwrap(), BigUint::one());
            assert_eq!(fib_divisor(k, 0).unwrap(), BigUint::zero());
        }
        assert_eq!(fib_divisor(0, 17).unwrap(), BigUint::from(17u32));
    }

    #[test]
    fn sequence_exceeds_u64() {
        assert!(fibonacci(125).bits() > 64);
        assert_eq!(fib_divisor(5, 25).unwrap() * 5u32, fibonacci(125));
    }

    #[test]
    fn real_values() {
        assert!((to_real(&g(0, 1)) - 1.618_033_988_7).abs() < 1e-10);
        assert!((to_real(&g(1, -1)) + 0.618_033_988_7).abs() < 1e-10);
        assert!((to_real(&g(3, 5)) - PHI.powi(5)).abs() < 1e-12);
    }

    #[test]
    fn table_matches_direct_and_recurrence() {
        for k in 0..=8 {
            let t = FibDivisorTable::new(k, 64).unwrap();
            assert_eq!(t.recurrence_violation(), None, "k = {k}");
            for n in [0usize, 1, 7, 64] {
                assert_eq!(t.get(n), &fib_divisor(k, n as u64).unwrap());
            }
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let t = FibDivisorTable::new(2, 10).unwrap();
        let mut v = t.values().to_vec();
        v[5] += 1u32;
        let bad = FibDivisorTable::from_values_unchecked(2, v);
        assert_eq!(bad.recurrence_violation(), Some(4));
    }

    #[test]
    fn exact_division() {
        let x = g(3, 5);
        let y = g(2, -1);
        let prod = &x * &y;
        assert_eq!(prod.checked_div(&y), Some(x));
        assert_eq!(g(1, 0).checked_div(&g(2, 0)), None);
        assert_eq!(g(1, 0).checked_div(&GoldenNumber::zero()), None);
        // φ is a unit: φ·(φ − 1) = 1
        assert_eq!(g(1, 0).checked_div(&GoldenNumber::phi()), Some(g(-1, 1)));
    }

    #[test]
    fn binet_quotient_small() {
        assert_eq!(binet_quotient(3, 4), Some(g(72, 0)));
        assert_eq!(binet_quotient(0, 4), None);
    }

    #[test]
    fn power_split_formula() {
        // φ^{kn} = φ^k F_n^(k) + (−1)^{k+1} F_{n−1}^(k)
        let phi = GoldenNumber::phi();
        for k in 1..=8u32 {
            for n in 1..=30u64 {
                let lhs = phi.pow(k as u64 * n);
                let sign = if k % 2 == 1 { 1 } else { -1 };
                let fn_ = BigInt::from(fib_divisor(k, n).unwrap());
                let fn1 = BigInt::from(fib_divisor(k, n - 1).unwrap());
                let rhs = phi.pow(k as u64).scale(&fn_) + GoldenNumber::from_int(fn1 * sign);
                assert_eq!(lhs, rhs, "k={k} n={n}");
            }
        }
    }
}
