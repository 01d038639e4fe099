//! Full-separability certificate for amplitude damping at its critical point.
//!
//! At `p_c = |α/β|^{2/N}` the evolved state splits as
//! `ρ = |α|² |0…0⟩⟨0…0| + ρ_s`. The residual part `ρ_s` is proportional to
//! what a local filter `A_1 = δ(√p_c |0⟩⟨0| + √(1-p_c) |1⟩⟨1|)` on every
//! qubit produces from the GHZ-diagonal state
//! `σ = 2^{-N}|β|² [1 + |β/α| ((α/β)(|0⟩⟨1|)^{⊗N} + h.c.)]`.
//! Local filtering cannot create entanglement, so separability of `σ`
//! carries over to `ρ_s`. Here the proportionality is checked numerically
//! with a fitted scale, and `σ` is checked to be PPT across the cuts.
//! Full separability of `σ` itself rests on the known criterion for
//! GHZ-diagonal states and is not re-derived.

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{ChannelSpec, Mat2};
use crate::criticality::esd_probability_ad;
use crate::dense::{check_capacity, hermitian_eigenvalues, DenseState};
use crate::error::{domain, Error, Result};
use crate::oracle::{evolved_ghz_dense, partial_transpose, QubitSubset, NEGATIVE_EIGENVALUE_TOL};
use crate::state::GhzParams;

/// Largest relative reconstruction error accepted for a valid certificate.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;
/// Up to this N every subset is checked; above it one subset per size.
const ALL_SUBSETS_UP_TO: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparabilityCertificate {
    pub n: usize,
    pub p_c: f64,
    /// Fitted `c` in `A^{⊗N} σ A^{⊗N} ≈ c·ρ_s`.
    pub scale: f64,
    /// `max|A^{⊗N} σ A^{⊗N} - c·ρ_s| / (|c|·‖ρ_s‖_F)`.
    pub reconstruction_residual: f64,
    pub sigma_ppt_ok: bool,
    pub sigma_min_pt_eigenvalue: f64,
    pub cuts_checked: usize,
    pub delta: f64,
}

impl SeparabilityCertificate {
    pub fn is_valid(&self) -> bool {
        self.sigma_ppt_ok && self.reconstruction_residual <= RECONSTRUCTION_TOL
    }
}

fn require_both_amplitudes(params: &GhzParams) -> Result<()> {
    if params.is_product() {
        domain("sigma needs alpha != 0 and beta != 0")
    } else {
        Ok(())
    }
}

/// The unnormalized GHZ-diagonal state `σ`, trace `|β|²`.
pub fn sigma_state(params: &GhzParams) -> Result<DenseState> {
    require_both_amplitudes(params)?;
    let n = params.n;
    check_capacity(n)?;
    let base = params.beta_sq() / (1u64 << n) as f64;
    let corner = params.alpha / params.beta * (params.beta.norm() / params.alpha.norm()) * base;
    let mut sigma = DenseState::zeros(n);
    let last = sigma.dim() - 1;
    for i in 0..=last {
        sigma.set(i, i, Complex64::new(base, 0.0));
    }
    sigma.set(0, last, corner);
    sigma.set(last, 0, corner.conj());
    Ok(sigma)
}

/// `A_1 = δ(√p_c |0⟩⟨0| + √(1-p_c) |1⟩⟨1|)`.
pub fn povm_element(p_c: f64, delta: f64) -> Result<Mat2> {
    if !(0.0..=1.0).contains(&p_c) {
        return domain(format!("p_c = {p_c} is outside [0, 1]"));
    }
    if delta.is_nan() || delta <= 0.0 {
        return domain(format!("POVM scale delta = {delta} must be positive"));
    }
    let (a, b) = (delta * p_c.sqrt(), delta * (1.0 - p_c).sqrt());
    // A_1†A_1 = diag(a², b²) must not exceed the identity.
    if a * a > 1.0 + 1e-15 || b * b > 1.0 + 1e-15 {
        return domain(format!("delta = {delta} gives A_1^dag A_1 > 1"));
    }
    let zero = Complex64::new(0.0, 0.0);
    Ok(Mat2::new(Complex64::new(a, 0.0), zero, zero, Complex64::new(b, 0.0)))
}

/// `A_2†A_2 = 1 - A_1†A_1`, the other outcome of the local measurement.
pub fn povm_complement(a1: &Mat2) -> Mat2 {
    Mat2::identity() - a1.adjoint() * a1
}

/// `ρ_s = ρ_AD(p) - |α|² |0…0⟩⟨0…0|`, computed through the dense oracle.
///
/// For `p < p_c` this matrix is not positive (the state is still entangled
/// there); from `p_c` on it must be, and a negative eigenvalue below
/// `-1e-12` is reported as a structural error.
pub fn residual_state(params: &GhzParams, p: f64) -> Result<DenseState> {
    let mut rho = evolved_ghz_dense(params, &ChannelSpec::amplitude_damping(), p)?;
    let corner = rho.get(0, 0) - params.alpha_sq();
    rho.set(0, 0, corner);
    if !params.is_product() && p >= esd_probability_ad(params)?.p_c {
        let min = hermitian_eigenvalues(&rho)?[0];
        if min < -NEGATIVE_EIGENVALUE_TOL {
            return Err(Error::Structural(format!(
                "residual state at p = {p} >= p_c has eigenvalue {min:e}"
            )));
        }
    }
    Ok(rho)
}

fn sigma_cuts(n: usize) -> Vec<QubitSubset> {
    if n <= ALL_SUBSETS_UP_TO {
        (1..n).flat_map(|k| QubitSubset::all_of_size(k, n)).collect()
    } else {
        (1..=n / 2).map(|k| QubitSubset::leading(k, n).unwrap()).collect()
    }
}

/// Smallest partial-transpose eigenvalue of `σ` over the checked cuts.
pub fn sigma_min_pt_eigenvalue(params: &GhzParams) -> Result<(f64, usize)> {
    let sigma = sigma_state(params)?;
    let cuts = sigma_cuts(params.n);
    let mut min = f64::INFINITY;
    for cut in &cuts {
        min = min.min(hermitian_eigenvalues(&partial_transpose(&sigma, cut)?)?[0]);
    }
    Ok((min, cuts.len()))
}

pub fn verify_full_separability(params: &GhzParams) -> Result<SeparabilityCertificate> {
    verify_full_separability_with_delta(params, 1.0)
}

pub fn verify_full_separability_with_delta(params: &GhzParams, delta: f64) -> Result<SeparabilityCertificate> {
    require_both_amplitudes(params)?;
    if params.alpha.norm() >= params.beta.norm() {
        return domain(
            "|alpha| >= |beta|: p_c = 1, where the damped state is |0...0><0...0| and trivially separable",
        );
    }
    check_capacity(params.n)?;
    let p_c = esd_probability_ad(params)?.p_c;
    let a1 = povm_element(p_c, delta)?;

    let mut filtered = sigma_state(params)?;
    for q in 0..params.n {
        filtered = filtered.conjugate_qubit(&a1, q);
    }
    let rho_s = residual_state(params, p_c)?;

    let norm_sq = rho_s.frobenius_norm().powi(2);
    let scale = rho_s.inner(&filtered).re / norm_sq;
    let residual = filtered.sub(&rho_s.scaled(scale)).max_abs() / (scale.abs() * norm_sq.sqrt());

    let (sigma_min, cuts_checked) = sigma_min_pt_eigenvalue(params)?;
    Ok(SeparabilityCertificate {
        n: params.n,
        p_c,
        scale,
        reconstruction_residual: residual,
        sigma_ppt_ok: sigma_min >= -NEGATIVE_EIGENVALUE_TOL,
        sigma_min_pt_eigenvalue: sigma_min,
        cuts_checked,
        delta,
    })
}
