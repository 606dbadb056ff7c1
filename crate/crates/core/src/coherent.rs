//! Golden coherent states and the supersymmetric coherent-state hierarchy.
//!
//! The bosonic building blocks are |β/λ⟩ with amplitudes (β/λ)ⁿ/√F_n!, and
//! the derived states |β′/λ⟩ with amplitudes F_n βⁿ⁻¹/(λⁿ√F_n!). Both are
//! defined by their amplitude laws, so they are unambiguous at any cutoff.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{ladder_ops, re, CMatrix, CVector, FockOperator};
use crate::golden::{parity_sign, phi_pow, phi_prime_pow, FibDivisorTable};
use crate::qcalc::{golden_exp, golden_exp_real, DEFAULT_SERIES_TOL};
use crate::susy::{eigen_residual, SuperOperator, SuperState};

/// Bound on the relative weight |a_{d−1}|² / Σ|a_n|² of the last amplitude.
pub const TAIL_THRESHOLD: f64 = 1e-16;

/// Truncation residual targeted by the adaptive cutoff of bosonic states.
pub const BOSON_RESIDUAL_TARGET: f64 = 1e-11;

/// Per-component truncation residual targeted for super-coherent states.
pub const SUPER_RESIDUAL_TARGET: f64 = 1e-9;

/// Largest cutoff the adaptive search may choose.
pub const MAX_ADAPTIVE_CUTOFF: usize = 32;

/// Relative tolerance between closed-form and direct normalizers.
pub const NORMALIZER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    Fixed(usize),
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Bosonic coherent vector |β/λ⟩ or |β′/λ⟩ truncated at `amps.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentVector {
    pub k: u32,
    pub beta: Complex64,
    pub scale: f64,
    pub derived: bool,
    pub amps: CVector,
    pub normalized: bool,
}

fn divisors(k: u32, d: usize) -> Vec<f64> {
    FibDivisorTable::new(k, d).expect("table construction cannot fail").to_f64()
}

fn raw_amplitudes(k: u32, beta: Complex64, scale: f64, derived: bool, d: usize) -> Vec<Complex64> {
    let f = divisors(k, d);
    let x = beta / scale;
    let mut plain = Vec::with_capacity(d);
    let mut a = Complex64::new(1.0, 0.0);
    plain.push(a);
    for fn_ in f.iter().take(d).skip(1) {
        a = a * x / fn_.sqrt();
        plain.push(a);
    }
    if !derived {
        return plain;
    }
    // F_n βⁿ⁻¹/(λⁿ√F_n!) = (√F_n/λ)·(β/λ)ⁿ⁻¹/√F_{n−1}!
    let mut out = vec![Complex64::zero(); d];
    for n in 1..d {
        out[n] = plain[n - 1] * (f[n].sqrt() / scale);
    }
    out
}

fn tail_ok(amps: &[Complex64]) -> bool {
    let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let last = amps.last().map_or(0.0, |a| a.norm_sqr());
    last <= TAIL_THRESHOLD * total
}

// Dropping row d−1 of b_k v leaves a residual of |β/λ|·|a_{d−1}|.
fn truncation_ok(amps: &[Complex64], x: f64, residual: f64) -> bool {
    let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let last = amps.last().map_or(0.0, |a| a.norm());
    tail_ok(amps) && x.max(1.0) * last <= residual * total.sqrt()
}

/// Smallest d ≥ 2 at which |β/λ⟩ (or |β′/λ⟩) meets the tail criterion and
/// its truncation residual is below `residual`.
pub fn adaptive_cutoff(k: u32, beta: Complex64, scale: f64, derived: bool, residual: f64) -> Result<usize> {
    let amps = raw_amplitudes(k, beta, scale, derived, MAX_ADAPTIVE_CUTOFF);
    let x = beta.norm() / scale.abs();
    (2..=MAX_ADAPTIVE_CUTOFF)
        .find(|&d| truncation_ok(&amps[..d], x, residual))
        .ok_or(Error::CutoffCapExceeded { cap: MAX_ADAPTIVE_CUTOFF })
}

fn resolve(cutoff: Cutoff, k: u32, beta: Complex64, scale: f64, derived: bool) -> Result<usize> {
    match cutoff {
        Cutoff::Fixed(d) if d < 2 => Err(Error::CutoffTooSmall { dim: d, min: 2 }),
        Cutoff::Fixed(d) => Ok(d),
        Cutoff::Adaptive => adaptive_cutoff(k, beta, scale, derived, BOSON_RESIDUAL_TARGET),
    }
}

impl CoherentVector {
    /// Unnormalized vector at a fixed cutoff d.
    pub fn build(k: u32, beta: Complex64, scale: f64, derived: bool, d: usize) -> Self {
        let amps = CVector::from_vec(raw_amplitudes(k, beta, scale, derived, d));
        Self { k, beta, scale, derived, amps, normalized: false }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn tail_ok(&self) -> bool {
        tail_ok(self.amps.as_slice())
    }

    /// ⟨self|other⟩ over the common cutoff.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let d = self.dim().min(other.dim());
        (0..d).map(|n| self.amps[n].conj() * other.amps[n]).sum()
    }

    pub fn resized(&self, d: usize) -> Self {
        Self::build(self.k, self.beta, self.scale, self.derived, d)
    }

    /// ‖(b_k − β/λ)v‖ / ‖v‖.
    pub fn eigen_residual(&self) -> f64 {
        let (b, _) = ladder_ops(self.k, self.dim()).expect("dim >= 2");
        let r = b.apply(&self.amps) - &self.amps * (self.beta / self.scale);
        r.norm() / self.amps.norm()
    }
}

/// |β⟩ = Σ βⁿ/√F_n! |n⟩, optionally divided by √e_F^{|β|²}.
pub fn coherent_state(k: u32, beta: Complex64, normalize: bool, cutoff: Cutoff) -> Result<CoherentVector> {
    scaled_state(k, beta, 1.0, normalize, cutoff)
}

/// |β/λ⟩, optionally divided by √e_F^{|β|²/λ²}.
pub fn scaled_state(k: u32, beta: Complex64, scale: f64, normalize: bool, cutoff: Cutoff) -> Result<CoherentVector> {
    let d = resolve(cutoff, k, beta, scale, false)?;
    let mut v = CoherentVector::build(k, beta, scale, false, d);
    if normalize {
        let e = golden_exp(k, re(beta.norm_sqr() / (scale * scale)), DEFAULT_SERIES_TOL)?.value.re;
        v.amps /= re(e.sqrt());
        v.normalized = true;
    }
    Ok(v)
}

/// |β′/λ⟩ = D_k|β/λ⟩ by its amplitude law.
pub fn derived_state(k: u32, beta: Complex64, scale: f64, cutoff: Cutoff) -> Result<CoherentVector> {
    let d = resolve(cutoff, k, beta, scale, true)?;
    Ok(CoherentVector::build(k, beta, scale, true, d))
}

/// ⟨β|α⟩ = e_F^{β̄α}.
pub fn inner_plain(k: u32, beta: Complex64, alpha: Complex64) -> Result<Complex64> {
    Ok(golden_exp(k, beta.conj() * alpha, DEFAULT_SERIES_TOL)?.value)
}

/// ⟨β/λ|β/μ⟩ = e_F^{|β|²/(λμ)}.
pub fn inner_scaled(k: u32, beta: Complex64, lambda: f64, mu: f64) -> f64 {
    golden_exp_real(k, beta.norm_sqr() / (lambda * mu))
}

/// ⟨β′/λ|β/μ⟩ = (β/(λμ))·e_F^{|β|²/(λμ)}.
pub fn inner_derived_plain(k: u32, beta: Complex64, lambda: f64, mu: f64) -> Complex64 {
    let lm = lambda * mu;
    beta / lm * golden_exp_real(k, beta.norm_sqr() / lm)
}

/// ⟨β′/λ|β′/μ⟩ = (φ^k t e_F^t + e_F^{φ′^k t})/(λμ), t = |β|²/(λμ).
pub fn inner_derived_phi(k: u32, beta: Complex64, lambda: f64, mu: f64) -> f64 {
    let lm = lambda * mu;
    let t = beta.norm_sqr() / lm;
    (phi_pow(k) * t * golden_exp_real(k, t) + golden_exp_real(k, phi_prime_pow(k) * t)) / lm
}

/// ⟨β′/λ|β′/μ⟩ = (φ′^k t e_F^t + e_F^{φ^k t})/(λμ), t = |β|²/(λμ).
pub fn inner_derived_phi_prime(k: u32, beta: Complex64, lambda: f64, mu: f64) -> f64 {
    let lm = lambda * mu;
    let t = beta.norm_sqr() / lm;
    (phi_prime_pow(k) * t * golden_exp_real(k, t) + golden_exp_real(k, phi_pow(k) * t)) / lm
}

/// b_kⁿ with accumulated safe rows; n = 0 is the identity.
pub fn ladder_power(k: u32, n: u32, d: usize) -> Result<FockOperator> {
    let (b, _) = ladder_ops(k, d)?;
    let mut acc = FockOperator::new(k, CMatrix::identity(d, d), d);
    for _ in 0..n {
        acc = &acc * &b;
    }
    Ok(acc)
}

fn triangular(k: u32, diag: (f64, f64), off: f64, n: u32, transposed: bool, d: usize) -> Result<SuperOperator> {
    let bn = ladder_power(k, n, d)?;
    let bm = ladder_power(k, n - 1, d)?;
    let z = CMatrix::zeros(d, d);
    let ul = &bn.matrix * re(diag.0);
    let lr = &bn.matrix * re(diag.1);
    let o = &bm.matrix * re(off);
    let (ur, ll, s_ur, s_ll) = if transposed { (z, o, d, bm.safe_rows) } else { (o, z, bm.safe_rows, d) };
    Ok(SuperOperator::new(k, [ul, ur, ll, lr], [bn.safe_rows, s_ur, s_ll, bn.safe_rows]))
}

/// A_{±k} = [[φ^k b_k, ±1], [0, φ′^k b_k]]; `transposed` moves ±1 to the
/// lower-left block.
pub fn super_annihilator(k: u32, sign: Sign, transposed: bool, d: usize) -> Result<SuperOperator> {
    triangular(k, (phi_pow(k), phi_prime_pow(k)), sign.value(), 1, transposed, d)
}

/// Aⁿ = [[φ^{kn} bⁿ, ±F_n bⁿ⁻¹], [0, φ′^{kn} bⁿ]].
pub fn super_annihilator_power(k: u32, sign: Sign, n: u32, transposed: bool, d: usize) -> Result<SuperOperator> {
    assert!(n >= 1, "power needs n >= 1");
    let f = divisors(k, n as usize);
    let diag = (phi_pow(k).powi(n as i32), phi_prime_pow(k).powi(n as i32));
    triangular(k, diag, sign.value() * f[n as usize], n, transposed, d)
}

/// Aⁿ = F_n·[[φ^k bⁿ, ±bⁿ⁻¹], [0, φ′^k bⁿ]] + (−1)^{k+1} F_{n−1}·bⁿ ⊗ 1.
pub fn super_annihilator_power_split(k: u32, sign: Sign, n: u32, transposed: bool, d: usize) -> Result<SuperOperator> {
    split_power(k, (phi_pow(k), phi_prime_pow(k)), sign, n, transposed, d)
}

fn split_power(k: u32, diag: (f64, f64), sign: Sign, n: u32, transposed: bool, d: usize) -> Result<SuperOperator> {
    assert!(n >= 1, "power needs n >= 1");
    let f = divisors(k, n as usize);
    let (fn_, fm) = (f[n as usize], f[n as usize - 1]);
    let main = triangular(k, (fn_ * diag.0, fn_ * diag.1), fn_ * sign.value(), n, transposed, d)?;
    let bn = ladder_power(k, n, d)?;
    let c = -parity_sign(k) * fm;
    let shift = SuperOperator::block_diag(k, &bn.matrix * re(c), &bn.matrix * re(c), [bn.safe_rows; 2]);
    Ok(main.add(&shift))
}

/// S_{±k} = [[φ′^k b_k, ±1], [0, φ^k b_k]]; commutes with A_{∓k}.
pub fn symmetry_operator(k: u32, sign: Sign, d: usize) -> Result<SuperOperator> {
    triangular(k, (phi_prime_pow(k), phi_pow(k)), sign.value(), 1, false, d)
}

/// Sⁿ = [[φ′^{kn} bⁿ, ±F_n bⁿ⁻¹], [0, φ^{kn} bⁿ]].
pub fn symmetry_power(k: u32, sign: Sign, n: u32, d: usize) -> Result<SuperOperator> {
    assert!(n >= 1, "power needs n >= 1");
    let f = divisors(k, n as usize);
    let diag = (phi_prime_pow(k).powi(n as i32), phi_pow(k).powi(n as i32));
    triangular(k, diag, sign.value() * f[n as usize], n, false, d)
}

/// Sⁿ = F_n·[[φ′^k bⁿ, ±bⁿ⁻¹], [0, φ^k bⁿ]] + (−1)^{k+1} F_{n−1}·bⁿ ⊗ 1.
pub fn symmetry_power_split(k: u32, sign: Sign, n: u32, d: usize) -> Result<SuperOperator> {
    split_power(k, (phi_prime_pow(k), phi_pow(k)), sign, n, false, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    SepUp,
    SepDown,
    LPlus,
    LMinus,
    BPlus,
    BMinus,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::SepUp, Family::SepDown, Family::LPlus, Family::LMinus, Family::BPlus, Family::BMinus];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::SepUp => "sep-up",
            Family::SepDown => "sep-down",
            Family::LPlus => "L+",
            Family::LMinus => "L-",
            Family::BPlus => "B+",
            Family::BMinus => "B-",
        }
    }

    /// Operator with this family as eigenstates: A_{∓k} for L_±, A^T_{∓k}
    /// for B_±, A_{+k} for sep↑ and A^T_{+k} for sep↓.
    pub fn annihilator(self, k: u32, d: usize) -> Result<SuperOperator> {
        match self {
            Family::SepUp => super_annihilator(k, Sign::Plus, false, d),
            Family::SepDown => super_annihilator(k, Sign::Plus, true, d),
            Family::LPlus => super_annihilator(k, Sign::Minus, false, d),
            Family::LMinus => super_annihilator(k, Sign::Plus, false, d),
            Family::BPlus => super_annihilator(k, Sign::Minus, true, d),
            Family::BMinus => super_annihilator(k, Sign::Plus, true, d),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

/// A normalized super-coherent state with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperCoherentFamily {
    pub family: Family,
    pub k: u32,
    pub beta: Complex64,
    pub state: SuperState,
    pub norm_sq_closed: f64,
    pub norm_sq_direct: f64,
    pub residual: f64,
}

struct Component {
    coeff: f64,
    scale: f64,
    derived: bool,
}

fn components(family: Family, k: u32) -> [Option<Component>; 2] {
    let (p, q, s) = (phi_pow(k), phi_prime_pow(k), parity_sign(k));
    let plain = |coeff, scale| Some(Component { coeff, scale, derived: false });
    let primed = Some(Component { coeff: s, scale: s, derived: true });
    match family {
        Family::SepUp => [plain(1.0, p), None],
        Family::SepDown => [None, plain(1.0, q)],
        Family::LPlus => [primed, plain(p, q)],
        Family::LMinus => [primed, plain(-p, q)],
        Family::BPlus => [plain(q, p), primed],
        Family::BMinus => [plain(-q, p), primed],
    }
}

/// Squared norm of the unnormalized family state from its closed form.
pub fn closed_norm_sq(family: Family, k: u32, beta: Complex64) -> f64 {
    let (p, q) = (phi_pow(k), phi_prime_pow(k));
    let b2 = beta.norm_sqr();
    let e = |x: f64| golden_exp_real(k, x);
    match family {
        Family::SepUp => e(b2 / (p * p)),
        Family::SepDown => e(b2 / (q * q)),
        Family::LPlus | Family::LMinus => p * p * e(p * p * b2) + p * b2 * e(b2) + e(q * b2),
        Family::BPlus | Family::BMinus => q * q * e(q * q * b2) + q * b2 * e(b2) + e(p * b2),
    }
}

/// Builds a super-coherent state, checks its closed-form normalizer against
/// the direct norm and records the eigenvalue residual.
pub fn super_coherent(family: Family, k: u32, beta: Complex64, cutoff: Cutoff) -> Result<SuperCoherentFamily> {
    let comps = components(family, k);
    let d = match cutoff {
        Cutoff::Fixed(d) => resolve(cutoff, k, beta, 1.0, false).map(|_| d)?,
        Cutoff::Adaptive => {
            let mut d = 2;
            for c in comps.iter().flatten() {
                d = d.max(adaptive_cutoff(k, beta, c.scale, c.derived, SUPER_RESIDUAL_TARGET)?);
            }
            d
        }
    };
    let vec_of = |c: &Option<Component>| match c {
        Some(c) => CoherentVector::build(k, beta, c.scale, c.derived, d).amps * re(c.coeff),
        None => CVector::zeros(d),
    };
    let raw = SuperState::new(k, vec_of(&comps[0]), vec_of(&comps[1]));
    let direct = raw.norm_sq();
    let closed = closed_norm_sq(family, k, beta);
    if (closed - direct).abs() > NORMALIZER_TOL * closed {
        return Err(Error::NormalizerMismatch { closed, direct });
    }
    let state = raw.normalized()?;
    let a = family.annihilator(k, d)?;
    let residual = eigen_residual(&a, &state, beta);
    Ok(SuperCoherentFamily { family, k, beta, state, norm_sq_closed: closed, norm_sq_direct: direct, residual })
}

/// |L+⟩, |L−⟩, |B+⟩, |B−⟩ in that order.
pub fn reference_states(k: u32, d: usize) -> Result<[SuperState; 4]> {
    if d < 2 {
        return Err(Error::CutoffTooSmall { dim: d, min: 2 });
    }
    let (p, q) = (phi_pow(k), phi_prime_pow(k));
    let basis = |n: usize, c: f64| {
        let mut v = CVector::zeros(d);
        v[n] = re(c);
        v
    };
    let nl = 1.0 / (1.0 + p * p).sqrt();
    let nb = 1.0 / (1.0 + q * q).sqrt();
    let l = |s: f64| SuperState::new(k, basis(1, nl), basis(0, s * p * nl));
    let b = |s: f64| SuperState::new(k, basis(0, s * q * nb), basis(1, nb));
    Ok([l(1.0), l(-1.0), b(1.0), b(-1.0)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    L,
    B,
}

/// c0|0, sep↑⟩ + c1|L_±⟩ (side L) or c0|0, sep↓⟩ + c1|B_±⟩ (side B),
/// normalized. The result is annihilated by A_{∓k} or A^T_{∓k}.
pub fn reference_combination(
    c0: Complex64,
    c1: Complex64,
    k: u32,
    sign: Sign,
    side: Side,
    d: usize,
) -> Result<SuperState> {
    let refs = reference_states(k, d)?;
    let mut vac = CVector::zeros(d);
    vac[0] = re(1.0);
    let zero = CVector::zeros(d);
    let idx = match (side, sign) {
        (Side::L, Sign::Plus) => 0,
        (Side::L, Sign::Minus) => 1,
        (Side::B, Sign::Plus) => 2,
        (Side::B, Sign::Minus) => 3,
    };
    let sep = match side {
        Side::L => SuperState::new(k, vac, zero),
        Side::B => SuperState::new(k, zero, vac),
    };
    sep.scale(c0).add(&refs[idx].scale(c1)).normalized()
}
