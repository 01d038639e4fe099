//! Minimal partial-transpose eigenvalue for every cut `k : N-k`.
//!
//! Transposing the legs of a size-`k` subset moves the corner coherence onto
//! the pair of basis strings `|1_A 0_B⟩`, `|0_A 1_B⟩`, whose diagonal entries
//! are `λ_k` and `λ_{N-k}`. Every other basis string stays an eigenvector
//! with a non-negative eigenvalue, so the only candidate for a negative
//! eigenvalue is the lower eigenvalue of
//!
//! ```text
//! [ λ_k   c       ]
//! [ c*    λ_{N-k} ]
//! ```
//!
//! i.e. `Λ_k = δ - sqrt(δ² - Δ)` with `δ = (λ_k + λ_{N-k})/2` and
//! `Δ = λ_k λ_{N-k} - |c|²`.

use serde::Serialize;

use crate::channels::ChannelSpec;
use crate::error::{check_probability, domain, Result};
use crate::logspace::{log_add_exp, log_sub_exp, Sign, SignedLog};
use crate::state::{ln_offdiag_abs, log_lambda_coefficient, GhzParams, SymmetricEvolvedState};

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtSpectrumResult {
    /// Qubits on the smaller side of the cut.
    pub k: usize,
    /// Lower eigenvalue of the coherence block.
    pub min_eigenvalue: f64,
    pub negativity: f64,
    /// Mean of the block diagonal, `δ_k`.
    pub block_mean: f64,
    /// Block determinant, `Δ_k`.
    pub block_determinant: f64,
    #[serde(skip)]
    pub log_min_eigenvalue: SignedLog,
}

/// Lower eigenvalue of `[[a, c], [c*, b]]` given `|c|`; returns `(Λ, δ, Δ)`.
pub fn coherence_block_min(a: f64, b: f64, c_abs: f64) -> (f64, f64, f64) {
    let mean = 0.5 * (a + b);
    let det = a * b - c_abs * c_abs;
    // δ² - Δ written as a sum of squares, so it cannot go negative.
    let half_gap = 0.5 * (a - b);
    let disc = (half_gap * half_gap + c_abs * c_abs).max(0.0);
    let root = disc.sqrt();
    let min = if det > 0.0 {
        // Both eigenvalues positive; avoid the cancellation in δ - √(δ²-Δ).
        det / (mean + root)
    } else {
        mean - root
    };
    (min, mean, det)
}

/// [`coherence_block_min`] with every input and the result in log form:
/// `Λ = Δ / (δ + √(δ² - Δ))`.
pub fn coherence_block_min_ln(ln_a: f64, ln_b: f64, ln_c: f64) -> SignedLog {
    let ln_mean = log_add_exp(ln_a, ln_b) - LN_2;
    let det = SignedLog::positive(ln_a + ln_b) - SignedLog::positive(2.0 * ln_c);
    let ln_gap = if ln_a >= ln_b {
        log_sub_exp(ln_a, ln_b)
    } else {
        log_sub_exp(ln_b, ln_a)
    } - LN_2;
    let ln_root = 0.5 * log_add_exp(2.0 * ln_gap, 2.0 * ln_c);
    let ln_denominator = log_add_exp(ln_mean, ln_root);
    if ln_denominator == f64::NEG_INFINITY {
        return SignedLog::ZERO;
    }
    det / SignedLog::positive(ln_denominator)
}

fn check_cut(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n / 2 {
        domain(format!("cut size k = {k} must be in 1..={} for N = {n}", n / 2))
    } else {
        Ok(())
    }
}

pub fn min_pt_eigenvalue(state: &SymmetricEvolvedState, k: usize) -> Result<PtSpectrumResult> {
    let n = state.n();
    check_cut(n, k)?;
    let (a, b) = (state.lambda[k], state.lambda[n - k]);
    let (plain, mean, det) = coherence_block_min(a, b, state.offdiag.norm());
    let (min_eigenvalue, log_min) = if state.log_scale.is_some() {
        let log = coherence_block_min_ln(state.ln_lambda(k), state.ln_lambda(n - k), state.ln_offdiag_abs());
        (log.to_f64(), log)
    } else {
        (plain, SignedLog::from_f64(plain))
    };
    Ok(PtSpectrumResult {
        k,
        min_eigenvalue,
        negativity: (-min_eigenvalue).max(0.0),
        block_mean: mean,
        block_determinant: det,
        log_min_eigenvalue: log_min,
    })
}

/// `Λ_k(p)` straight from the parameters in log form, without building the
/// full weight profile. This is what the root finders evaluate.
pub fn min_pt_eigenvalue_at(channel: &ChannelSpec, params: &GhzParams, p: f64, k: usize) -> Result<SignedLog> {
    check_probability(p)?;
    check_cut(params.n, k)?;
    let ln_a = log_lambda_coefficient(channel, params, p, k)?.ln_abs;
    let ln_b = log_lambda_coefficient(channel, params, p, params.n - k)?.ln_abs;
    Ok(coherence_block_min_ln(ln_a, ln_b, ln_offdiag_abs(channel, params, p)))
}

/// Dephasing result `Λ_k = -|αβ|(1-p)^N`, the same for every cut.
pub fn pd_min_eigenvalue(params: &GhzParams, p: f64, _k: usize) -> f64 {
    -params.abs_alpha_beta() * (1.0 - p).powi(params.n as i32)
}

pub fn negativity_profile(state: &SymmetricEvolvedState) -> Vec<PtSpectrumResult> {
    (1..=state.n() / 2)
        .map(|k| min_pt_eigenvalue(state, k).expect("k is in range by construction"))
        .collect()
}

/// Whole partial-transpose spectrum for the cut of size `k`, as
/// `(eigenvalue, multiplicity)` pairs.
pub fn closed_form_pt_spectrum(state: &SymmetricEvolvedState, k: usize) -> Result<Vec<(f64, u128)>> {
    let n = state.n();
    check_cut(n, k)?;
    if n > 120 {
        return domain("spectrum multiplicities only tracked up to N = 120");
    }
    let res = min_pt_eigenvalue(state, k)?;
    let upper = 2.0 * res.block_mean - res.min_eigenvalue;
    let mut out = vec![(res.min_eigenvalue, 1), (upper, 1)];
    let mut binom: u128 = 1;
    for j in 0..=n {
        let mut mult = binom;
        if j == k {
            mult -= 1;
        }
        if j == n - k {
            mult -= 1;
        }
        if mult > 0 {
            out.push((state.lambda[j], mult));
        }
        binom = binom * (n - j) as u128 / (j + 1) as u128;
    }
    Ok(out)
}

/// Smallest eigenvalue of the partial transpose over the whole spectrum.
/// Equals `Λ_k` whenever `Λ_k ≤ 0`.
pub fn pt_spectrum_minimum(state: &SymmetricEvolvedState, k: usize) -> Result<f64> {
    Ok(closed_form_pt_spectrum(state, k)?
        .into_iter()
        .map(|(v, _)| v)
        .fold(f64::INFINITY, f64::min))
}

/// True when `|Λ_1| ≤ |Λ_2| ≤ …` holds across the profile, checked only
/// when every entry is negative (within `tol`).
pub fn profile_is_ordered(profile: &[PtSpectrumResult], tol: f64) -> bool {
    if profile.iter().any(|r| r.min_eigenvalue >= 0.0) {
        return true;
    }
    profile
        .windows(2)
        .all(|w| w[1].negativity + tol * w[1].negativity.max(1e-300) >= w[0].negativity)
}

impl PtSpectrumResult {
    pub fn sign(&self) -> Sign {
        self.log_min_eigenvalue.sign
    }
}
