//! Identity-verification suite.
//!
//! Every check is an independent pure function returning its worst residual.
//! Exact checks count mismatches and pass only at zero; float checks compare
//! against `tol · factor`, so the default `tol = 1e−10` reproduces each
//! identity's own tolerance and tightening `tol` shows which ones degrade.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coherent::{
    closed_norm_sq, derived_state, inner_derived_phi, inner_derived_phi_prime, inner_scaled, ladder_power,
    reference_states, scaled_state, super_annihilator, super_annihilator_power, super_annihilator_power_split,
    super_coherent, symmetry_operator, symmetry_power, symmetry_power_split, CoherentVector, Cutoff, Family, Sign,
};
use crate::entangle::{
    coherent_concurrence_closed, concurrence_from_purity, concurrence_gram, concurrence_minors,
    entropy_from_concurrence, frobenius_classify, parallelogram_area, random_pure_state, random_spectrum,
    rectangle_side_ratio, reduce_boson, reduce_fermion, reference_concurrence, reference_entropy, von_neumann,
    CoherentKind, DensityMatrix,
};
use crate::fock::{
    fib_divisor_op, fib_divisor_shifted_op, ladder_ops, max_rel_diff_rows, nonlinear_map_check, re,
    spectrum_closed_form, SpectrumKind, SpectrumTable,
};
use crate::golden::{
    binet_quotient, fib_divisor, fibonacci, parity_sign, phi_pow, phi_prime_pow, FibDivisorTable, GoldenNumber,
};
use crate::qcalc::{
    golden_derivative_exact, golden_derivative_point, golden_exp_coefficients, golden_exp_real, pq_number,
};
use crate::susy::{
    commutator_residual, eigen_residual, super_fib_binet, super_fib_table, super_hamiltonian, super_number_state,
    supercharges, BlochPoint, SuperOperator,
};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Deliberate corruption used to confirm the harness catches failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds one to F_4^(k) in the divisor tables.
    PerturbedDivisorTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub tol: f64,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, seed: 2024, fault: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub exact: bool,
    pub max_residual: f64,
    pub threshold: f64,
    pub safe_rows: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub tol: f64,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

struct Outcome {
    residual: f64,
    safe_rows: Option<usize>,
}

impl From<f64> for Outcome {
    fn from(residual: f64) -> Self {
        Self { residual, safe_rows: None }
    }
}

enum Kind {
    Exact,
    /// Threshold is `tol · factor`.
    Float(f64),
}

struct Check {
    name: &'static str,
    kind: Kind,
    run: fn(&VerifyConfig) -> Outcome,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn count(it: impl Iterator<Item = bool>) -> f64 {
    it.filter(|ok| !ok).count() as f64
}

fn divisor_table(k: u32, n_max: usize, cfg: &VerifyConfig) -> FibDivisorTable {
    let t = FibDivisorTable::new(k, n_max).expect("valid table");
    match cfg.fault {
        Some(Fault::PerturbedDivisorTable) => {
            let mut v = t.values().to_vec();
            v[4] += 1u32;
            FibDivisorTable::from_values_unchecked(k, v)
        }
        None => t,
    }
}

fn golden_ring(_: &VerifyConfig) -> Outcome {
    let (p, q) = (GoldenNumber::phi(), GoldenNumber::phi_prime());
    let one = GoldenNumber::one();
    count(
        [&p * &p == &p + &one, &p * &q == -one.clone(), &p + &q == one, p.conj() == q, p.norm() == BigInt::from(-1)]
            .into_iter(),
    )
    .into()
}

fn binet_exact(_: &VerifyConfig) -> Outcome {
    count((1..=8u32).flat_map(|k| {
        (0..=64u64).map(move |n| {
            let fd = fib_divisor(k, n).expect("exact divisor");
            binet_quotient(k, n) == Some(GoldenNumber::from_int(BigInt::from(fd)))
        })
    }))
    .into()
}

fn divisibility(_: &VerifyConfig) -> Outcome {
    count((1..=8u64).flat_map(|k| (0..=64u64).map(move |n| (fibonacci(k * n) % fibonacci(k)).is_zero()))).into()
}

fn triple_recurrence(cfg: &VerifyConfig) -> Outcome {
    count((0..=8u32).map(|k| divisor_table(k, 64, cfg).recurrence_violation().is_none())).into()
}

fn divisor_table_direct(cfg: &VerifyConfig) -> Outcome {
    count((0..=8u32).flat_map(|k| {
        let t = divisor_table(k, 64, cfg);
        (0..=64u64).map(move |n| *t.get(n as usize) == fib_divisor(k, n).expect("exact divisor"))
    }))
    .into()
}

fn spectrum_recurrence(_: &VerifyConfig) -> Outcome {
    let mut bad = 0.0;
    for k in 0..=8u32 {
        for kind in [SpectrumKind::Bosonic, SpectrumKind::Fermionic, SpectrumKind::Susy] {
            if kind == SpectrumKind::Fermionic && k % 2 == 0 {
                continue;
            }
            let t = SpectrumTable::new(k, 40, 1.0, kind).expect("valid table");
            bad += count(std::iter::once(t.recurrence_violation().is_none()));
        }
    }
    bad.into()
}

/// E_n in units of ħω/2 for k = 1..=5, n = 1..=5.
pub const SPECTRA_TABLE: [[u64; 5]; 5] =
    [[1, 1, 2, 3, 5], [1, 3, 8, 21, 55], [1, 4, 17, 72, 305], [1, 7, 48, 329, 2255], [1, 11, 122, 1353, 15005]];

fn spectra_table(_: &VerifyConfig) -> Outcome {
    count((1..=5u32).flat_map(|k| {
        let t = SpectrumTable::new(k, 5, 1.0, SpectrumKind::Susy).expect("valid table");
        (1..=5).map(move |n| t.half_quanta[n] == BigInt::from(SPECTRA_TABLE[k as usize - 1][n - 1]))
    }))
    .into()
}

fn exp_fixed_point(_: &VerifyConfig) -> Outcome {
    count((0..=6u32).map(|k| {
        let c = golden_exp_coefficients(k, 30).expect("coefficients");
        golden_derivative_exact(k, &c).expect("derivative") == c[..29]
    }))
    .into()
}

fn rectangle_ratio(_: &VerifyConfig) -> Outcome {
    count((0..=20u32).map(|k| rectangle_side_ratio(k) == GoldenNumber::phi().pow(k as u64))).into()
}

fn supercharge_nilpotent(_: &VerifyConfig) -> Outcome {
    count((0..=5u32).map(|k| {
        let (q, qd) = supercharges(k, 12).expect("d >= 2");
        (&q * &q).to_dense().iter().all(|x| x.is_zero()) && (&qd * &qd).to_dense().iter().all(|x| x.is_zero())
    }))
    .into()
}

fn pq_numbers(_: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=6u32 {
        for n in 0..=30u32 {
            let pq = pq_number(phi_pow(k), phi_prime_pow(k), n).expect("distinct bases");
            let exact = fib_divisor(k, n as u64).expect("exact").to_f64().expect("finite");
            worst = worst.max((pq - exact).abs() / exact.max(1.0));
        }
    }
    worst.into()
}

fn derivative_monomials(_: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=4u32 {
        let f = FibDivisorTable::new(k, 10).expect("table").to_f64();
        for n in 1..=10i32 {
            for x in [0.7, 1.3, -0.9] {
                let d = golden_derivative_point(k, |t| t.powi(n), x).expect("x != 0");
                worst = worst.max(rel(d, f[n as usize] * x.powi(n - 1)));
            }
        }
    }
    worst.into()
}

fn exp_derivative_point(_: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=4u32 {
        for x in [0.5, 1.0, -0.7, 2.0] {
            let d = golden_derivative_point(k, |t| golden_exp_real(k, t), x).expect("x != 0");
            worst = worst.max(rel(d, golden_exp_real(k, x)));
        }
    }
    worst.into()
}

fn ladder_factorization(_: &VerifyConfig) -> Outcome {
    let d = 16;
    let mut worst: f64 = 0.0;
    let mut rows = d;
    for k in 0..=6u32 {
        let (b, bd) = ladder_ops(k, d).expect("d >= 2");
        let bdb = &bd * &b;
        let bbd = &b * &bd;
        rows = rows.min(bbd.safe_rows);
        let fnn = fib_divisor_op(k, d).expect("table");
        let fn1 = fib_divisor_shifted_op(k, d).expect("table");
        worst = worst.max(max_rel_diff_rows(&bdb.matrix, &fnn.matrix, bdb.safe_rows)).max(max_rel_diff_rows(
            &bbd.matrix,
            &fn1.matrix,
            bbd.safe_rows,
        ));
    }
    Outcome { residual: worst, safe_rows: Some(rows) }
}

fn quantum_algebra(_: &VerifyConfig) -> Outcome {
    let d = 16;
    let mut worst: f64 = 0.0;
    let mut rows = d;
    for k in 0..=6u32 {
        let (b, bd) = ladder_ops(k, d).expect("d >= 2");
        let bbd = &b * &bd;
        let bdb = &bd * &b;
        rows = rows.min(bbd.safe_rows);
        let (p, q) = (phi_pow(k), phi_prime_pow(k));
        for n in 0..bbd.safe_rows {
            let (x, y) = (bbd.matrix[(n, n)].re, bdb.matrix[(n, n)].re);
            let scale = x.abs().max(1.0);
            worst = worst
                .max((x - p * y - q.powi(n as i32)).abs() / scale)
                .max((x - q * y - p.powi(n as i32)).abs() / scale);
        }
    }
    Outcome { residual: worst, safe_rows: Some(rows) }
}

fn spectrum_closed(_: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..=7u32 {
        let t = SpectrumTable::new(k, 39, 1.0, SpectrumKind::Bosonic).expect("table");
        for n in 0..40 {
            worst = worst.max(rel(spectrum_closed_form(k, n, 1.0), t.levels[n]));
        }
    }
    worst.into()
}

fn nonlinear_map(_: &VerifyConfig) -> Outcome {
    let d = 12;
    let mut worst: f64 = 0.0;
    for k in 0..=4u32 {
        let (b, _) = ladder_ops(k, d).expect("d >= 2");
        let scale = b.matrix.iter().map(|x| x.norm()).fold(1.0, f64::max);
        worst = worst.max(nonlinear_map_check(k, d).expect("d >= 3") / scale);
    }
    Outcome { residual: worst, safe_rows: Some(d - 1) }
}

fn super_hamiltonian_check(_: &VerifyConfig) -> Outcome {
    let d = 16;
    let mut worst: f64 = 0.0;
    let mut rows = d;
    for k in 0..=5u32 {
        let (q, qd) = supercharges(k, d).expect("d >= 2");
        let anti = (&q * &qd).add(&(&qd * &q)).scale(re(0.5));
        let h = super_hamiltonian(k, d, 1.0).expect("d >= 2");
        rows = rows.min(anti.min_safe_rows());
        for i in [0, 3] {
            worst = worst.max(max_rel_diff_rows(&anti.blocks[i], &h.blocks[i], anti.safe_rows[i]));
        }
        worst = worst.max(anti.off_diagonal_norm());
    }
    Outcome { residual: worst, safe_rows: Some(rows) }
}

fn super_binet(_: &VerifyConfig) -> Outcome {
    let d = 20;
    let mut worst: f64 = 0.0;
    for k in 0..=5u32 {
        let a = super_fib_binet(k, d).expect("d >= 2");
        let b = super_fib_table(k, d).expect("d >= 2");
        for i in [0, 3] {
            worst = worst.max(max_rel_diff_rows(&a.blocks[i], &b.blocks[i], d));
        }
    }
    worst.into()
}

fn bloch_samples() -> Vec<BlochPoint> {
    (0..10)
        .map(|i| {
            let theta = std::f64::consts::PI * (i as f64 + 0.5) / 10.0;
            BlochPoint::new(theta, 0.61 * i as f64).expect("in range")
        })
        .collect()
}

fn super_number_states(_: &VerifyConfig) -> Outcome {
    let d = 8;
    let mut worst: f64 = 0.0;
    for k in 0..=4u32 {
        let fop = super_fib_binet(k, d).expect("d >= 2");
        let f = FibDivisorTable::new(k, 6).expect("table").to_f64();
        for (n, &fn_) in f.iter().enumerate().skip(1) {
            for p in bloch_samples() {
                let s = super_number_state(n, k, p, d).expect("n < d");
                worst = worst.max(eigen_residual(&fop, &s, re(fn_)) / fn_.max(1.0));
            }
        }
    }
    worst.into()
}

fn bloch_concurrence(_: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..=4u32 {
        for n in 1..=6 {
            for p in bloch_samples() {
                let s = super_number_state(n, k, p, 8).expect("n < d");
                let [c0, c1] = s.coefficients();
                worst = worst
                    .max((concurrence_minors(&c0, &c1) - p.theta.sin()).abs())
                    .max((concurrence_gram(&s.psi0, &s.psi1) - p.theta.sin()).abs());
            }
        }
    }
    worst.into()
}

fn beta_grid(k: u32, count: usize, max: f64) -> Vec<Complex64> {
    (0..count)
        .map(|i| Complex64::from_polar(max * i as f64 / (count - 1) as f64, 0.37 * i as f64))
        .collect::<Vec<_>>()
        .into_iter()
        .map(|b| if k.is_multiple_of(2) { b } else { b.conj() })
        .collect()
}

fn beta_max(k: u32) -> f64 {
    if k == 0 {
        1.5
    } else {
        1.0
    }
}

fn coherent_eigenstates(_: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut dmax = 0;
    for k in 0..=3u32 {
        for beta in beta_grid(k, 11, beta_max(k)) {
            let v = scaled_state(k, beta, 1.0, true, Cutoff::Adaptive).expect("within cap");
            dmax = dmax.max(v.dim());
            worst = worst.max(v.eigen_residual());
        }
    }
    Outcome { residual: worst, safe_rows: Some(dmax) }
}

fn inner_products(_: &VerifyConfig) -> Outcome {
    let d = 40;
    let mut worst: f64 = 0.0;
    for k in 0..=4u32 {
        for (beta, l, m) in [
            (Complex64::new(0.3, 0.2), 1.0, 1.0),
            (Complex64::new(1.0, -0.5), -0.8, 1.7),
            (Complex64::new(1.5, 0.0), 1.3, -1.1),
        ] {
            let bl = CoherentVector::build(k, beta, l, false, d);
            let bm = CoherentVector::build(k, beta, m, false, d);
            let pl = CoherentVector::build(k, beta, l, true, d);
            let pm = CoherentVector::build(k, beta, m, true, d);
            let direct = pl.inner(&pm).re;
            worst = worst
                .max(rel(bl.inner(&bm).re, inner_scaled(k, beta, l, m)))
                .max(rel(direct, inner_derived_phi(k, beta, l, m)))
                .max(rel(direct, inner_derived_phi_prime(k, beta, l, m)));
        }
    }
    worst.into()
}

fn two_term_relation(_: &VerifyConfig) -> Outcome {
    let d = 30;
    let mut worst: f64 = 0.0;
    for k in 0..=4u32 {
        let s = parity_sign(k);
        let beta = Complex64::new(0.8, 0.3);
        let (b, _) = ladder_ops(k, d).expect("d >= 2");
        let primed = derived_state(k, beta, s, Cutoff::Fixed(d)).expect("d >= 2").amps;
        let lhs = b.apply(&primed);
        let over_p = CoherentVector::build(k, beta, phi_pow(k), false, d).amps;
        let over_q = CoherentVector::build(k, beta, phi_prime_pow(k), false, d).amps;
        let rhs1 = &primed * (beta / phi_pow(k)) + &over_q * re(s);
        let rhs2 = &primed * (beta / phi_prime_pow(k)) + &over_p * re(s);
        for n in 0..d - 1 {
            worst = worst.max((lhs[n] - rhs1[n]).norm()).max((lhs[n] - rhs2[n]).norm());
        }
    }
    Outcome { residual: worst, safe_rows: Some(d - 1) }
}

fn super_coherent_families(_: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut dmax = 0;
    for k in 0..=3u32 {
        for family in Family::ALL {
            for beta in beta_grid(k, 6, beta_max(k)) {
                match super_coherent(family, k, beta, Cutoff::Adaptive) {
                    Ok(f) => {
                        dmax = dmax.max(f.state.dim());
                        worst = worst.max(f.residual);
                        worst = worst.max(rel(f.norm_sq_direct, closed_norm_sq(family, k, beta)) * 1e-2);
                    }
                    Err(_) => worst = f64::INFINITY,
                }
            }
        }
    }
    Outcome { residual: worst, safe_rows: Some(dmax) }
}

fn symmetry_commutator(_: &VerifyConfig) -> Outcome {
    let d = 16;
    let mut worst: f64 = 0.0;
    for k in 0..=4u32 {
        for sign in [Sign::Plus, Sign::Minus] {
            let a = super_annihilator(k, sign, false, d).expect("d >= 2");
            let s = symmetry_operator(k, sign.flip(), d).expect("d >= 2");
            worst = worst.max(commutator_residual(&a, &s).1);
        }
    }
    Outcome { residual: worst, safe_rows: Some(d - 2) }
}

fn block_scale(op: &SuperOperator) -> f64 {
    op.max_abs_safe().max(1.0)
}

fn power_closed_forms(_: &VerifyConfig) -> Outcome {
    let d = 16;
    let mut worst: f64 = 0.0;
    let mut rows = d;
    for k in 0..=4u32 {
        for sign in [Sign::Plus, Sign::Minus] {
            let a = super_annihilator(k, sign, false, d).expect("d >= 2");
            let s = symmetry_operator(k, sign, d).expect("d >= 2");
            for n in 1..=5 {
                let cf = super_annihilator_power(k, sign, n, false, d).expect("d >= 2");
                let sp = super_annihilator_power_split(k, sign, n, false, d).expect("d >= 2");
                let it = a.pow(n);
                rows = rows.min(it.min_safe_rows());
                worst =
                    worst.max(it.max_diff_safe(&cf) / block_scale(&cf)).max(sp.max_diff_safe(&cf) / block_scale(&cf));
                let cf = symmetry_power(k, sign, n, d).expect("d >= 2");
                let sp = symmetry_power_split(k, sign, n, d).expect("d >= 2");
                let it = s.pow(n);
                worst =
                    worst.max(it.max_diff_safe(&cf) / block_scale(&cf)).max(sp.max_diff_safe(&cf) / block_scale(&cf));
            }
        }
    }
    Outcome { residual: worst, safe_rows: Some(rows) }
}

fn reference_annihilation(_: &VerifyConfig) -> Outcome {
    let d = 8;
    let mut worst: f64 = 0.0;
    for k in 0..=6u32 {
        let [lp, lm, bp, bm] = reference_states(k, d).expect("d >= 2");
        let zero = Complex64::zero();
        let a = |s, t| super_annihilator(k, s, t, d).expect("d >= 2");
        worst = worst
            .max(eigen_residual(&a(Sign::Plus, false), &lm, zero))
            .max(eigen_residual(&a(Sign::Minus, false), &lp, zero))
            .max(eigen_residual(&a(Sign::Plus, true), &bm, zero))
            .max(eigen_residual(&a(Sign::Minus, true), &bp, zero));
        let fop = super_fib_binet(k, d).expect("d >= 2");
        worst = worst.max(eigen_residual(&fop, &lp, re(1.0))).max(eigen_residual(&fop, &lm, re(1.0)));
    }
    worst.into()
}

fn reference_concurrence_check(_: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..=12u32 {
        for s in reference_states(k, 4).expect("d >= 2") {
            worst = worst.max((concurrence_gram(&s.psi0, &s.psi1) - reference_concurrence(k)).abs());
        }
    }
    worst.into()
}

fn reference_entropy_check(_: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..=6u32 {
        for s in reference_states(k, 4).expect("d >= 2") {
            let e = von_neumann(&reduce_fermion(&s).expect("normalized")).expect("valid spectrum");
            worst = worst.max((e - reference_entropy(k)).abs());
        }
    }
    worst.into()
}

fn random_states(cfg: &VerifyConfig, n: usize, real: bool) -> Vec<crate::susy::SuperState> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..n).map(|i| random_pure_state(&mut rng, 0, 2 + i % 11, real)).collect()
}

fn concurrence_triangle(cfg: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for s in random_states(cfg, 200, false) {
        let [c0, c1] = s.coefficients();
        let g = concurrence_gram(&s.psi0, &s.psi1);
        let m = concurrence_minors(&c0, &c1);
        let p = concurrence_from_purity(&reduce_boson(&s).expect("normalized"));
        worst = worst.max((g - m).abs()).max((g - p).abs()).max((m - p).abs());
    }
    worst.into()
}

fn purity_symmetry(cfg: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for s in random_states(cfg, 200, false) {
        let b = reduce_boson(&s).expect("normalized").purity();
        let f = reduce_fermion(&s).expect("normalized").purity();
        worst = worst.max((b - f).abs());
    }
    worst.into()
}

fn entropy_consistency(cfg: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for s in random_states(cfg, 200, false) {
        let e = von_neumann(&reduce_fermion(&s).expect("normalized")).expect("valid spectrum");
        worst = worst.max((e - entropy_from_concurrence(concurrence_gram(&s.psi0, &s.psi1))).abs());
    }
    worst.into()
}

fn coherent_concurrence(_: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..=3u32 {
        for i in 0..20 {
            let beta = beta_max(k) * i as f64 / 19.0;
            for (kind, fam) in [
                (CoherentKind::L, Family::LPlus),
                (CoherentKind::L, Family::LMinus),
                (CoherentKind::B, Family::BPlus),
                (CoherentKind::B, Family::BMinus),
            ] {
                let closed = coherent_concurrence_closed(k, beta, kind).expect("in range");
                let st = match super_coherent(fam, k, re(beta), Cutoff::Adaptive) {
                    Ok(f) => f.state,
                    Err(_) => return f64::INFINITY.into(),
                };
                worst = worst.max((closed - concurrence_gram(&st.psi0, &st.psi1)).abs());
            }
        }
        for kind in [CoherentKind::L, CoherentKind::B] {
            let c0 = coherent_concurrence_closed(k, 0.0, kind).expect("in range");
            worst = worst.max((c0 - reference_concurrence(k)).abs());
        }
    }
    worst.into()
}

fn frobenius_extremum(cfg: &VerifyConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut worst: f64 = 0.0;
    for n in [2usize, 3, 4, 16] {
        for _ in 0..1000 {
            let spec = random_spectrum(&mut rng, n);
            let r = frobenius_classify(&DensityMatrix::from_spectrum(&spec).expect("valid spectrum"));
            worst = worst.max(r.concurrence - r.c_max).max((r.concurrence.powi(2) - r.minors_concurrence_sq).abs());
        }
    }
    worst.max(0.0).into()
}

fn area_concurrence(cfg: &VerifyConfig) -> Outcome {
    let mut worst: f64 = 0.0;
    for s in random_states(cfg, 100, true) {
        let [c0, c1] = s.coefficients();
        let a = parallelogram_area(&c0, &c1).expect("real input");
        worst = worst.max((2.0 * a - concurrence_gram(&s.psi0, &s.psi1)).abs());
    }
    worst.into()
}

fn ladder_powers_sanity(_: &VerifyConfig) -> Outcome {
    let d = 10;
    let mut worst: f64 = 0.0;
    for k in 0..=4u32 {
        let b3 = ladder_power(k, 3, d).expect("d >= 2");
        let f = FibDivisorTable::new(k, d).expect("table").to_f64();
        for n in 3..d {
            let expect = (f[n] * f[n - 1] * f[n - 2]).sqrt();
            worst = worst.max(rel(b3.matrix[(n - 3, n)].re, expect));
        }
    }
    Outcome { residual: worst, safe_rows: Some(d - 3) }
}

fn checks() -> Vec<Check> {
    use Kind::{Exact, Float};
    let c = |name, kind, run| Check { name, kind, run };
    vec![
        c("golden-ring", Exact, golden_ring),
        c("binet-exact", Exact, binet_exact),
        c("divisibility", Exact, divisibility),
        c("triple-recurrence", Exact, triple_recurrence),
        c("divisor-table", Exact, divisor_table_direct),
        c("spectrum-recurrence", Exact, spectrum_recurrence),
        c("spectra-table", Exact, spectra_table),
        c("golden-exp-fixed-point", Exact, exp_fixed_point),
        c("rectangle-ratio", Exact, rectangle_ratio),
        c("supercharge-nilpotent", Exact, supercharge_nilpotent),
        c("pq-numbers", Float(0.01), pq_numbers),
        c("derivative-monomials", Float(1.0), derivative_monomials),
        c("derivative-exp-point", Float(1.0), exp_derivative_point),
        c("ladder-factorization", Float(0.01), ladder_factorization),
        c("ladder-powers", Float(0.01), ladder_powers_sanity),
        c("quantum-algebra", Float(1.0), quantum_algebra),
        c("spectrum-closed-form", Float(1.0), spectrum_closed),
        c("nonlinear-map", Float(0.01), nonlinear_map),
        c("super-hamiltonian", Float(0.01), super_hamiltonian_check),
        c("super-binet", Float(1.0), super_binet),
        c("super-number-states", Float(1.0), super_number_states),
        c("bloch-concurrence", Float(0.01), bloch_concurrence),
        c("coherent-eigenstates", Float(1.0), coherent_eigenstates),
        c("inner-products", Float(1.0), inner_products),
        c("two-term-relation", Float(1.0), two_term_relation),
        c("super-coherent-families", Float(100.0), super_coherent_families),
        c("symmetry-commutator", Float(1.0), symmetry_commutator),
        c("power-closed-forms", Float(10.0), power_closed_forms),
        c("reference-annihilation", Float(0.01), reference_annihilation),
        c("reference-concurrence", Float(0.01), reference_concurrence_check),
        c("reference-entropy", Float(1.0), reference_entropy_check),
        c("concurrence-triangle", Float(1.0), concurrence_triangle),
        c("purity-symmetry", Float(0.01), purity_symmetry),
        c("entropy-consistency", Float(1.0), entropy_consistency),
        c("coherent-concurrence", Float(100.0), coherent_concurrence),
        c("frobenius-extremum", Float(0.01), frobenius_extremum),
        c("area-concurrence", Float(1.0), area_concurrence),
    ]
}

/// Names of all checks in report order.
pub fn check_names() -> Vec<&'static str> {
    checks().iter().map(|c| c.name).collect()
}

/// Runs every check in parallel; results keep the fixed check order.
pub fn run_suite(cfg: &VerifyConfig) -> Report {
    let results = checks()
        .into_par_iter()
        .map(|c| {
            let out = (c.run)(cfg);
            let (exact, threshold) = match c.kind {
                Kind::Exact => (true, 0.0),
                Kind::Float(f) => (false, cfg.tol * f),
            };
            CheckResult {
                name: c.name,
                passed: out.residual <= threshold,
                exact,
                max_residual: out.residual,
                threshold,
                safe_rows: out.safe_rows,
            }
        })
        .collect();
    Report { tol: cfg.tol, checks: results }
}
