//! Generalized GHZ states `α|0…0⟩ + β|1…1⟩` and their exact evolution under
//! independent identical channels on every qubit.
//!
//! The evolved density matrix is diagonal in the computational basis except
//! for the two corner coherences `|0…0⟩⟨1…1|` and its adjoint, and every
//! diagonal entry depends only on the Hamming weight of its bit string. The
//! whole `2^N × 2^N` matrix is therefore carried by `N + 2` numbers.

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{ChannelFamily, ChannelSpec};
use crate::dense::{check_capacity, DenseState};
use crate::error::{check_probability, domain, Result};
use crate::logspace::{ln_binomial_row, ln_pow, log_add_exp, SignedLog};

/// Above this qubit count the log-domain companion values are populated.
pub const LOG_DOMAIN_THRESHOLD: usize = 64;

const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhzParams {
    #[serde(serialize_with = "ser_complex")]
    pub alpha: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub beta: Complex64,
    pub n: usize,
}

fn ser_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&c.re)?;
    t.serialize_element(&c.im)?;
    t.end()
}

impl GhzParams {
    pub fn new(alpha: Complex64, beta: Complex64, n: usize) -> Result<Self> {
        if n < 2 {
            return domain(format!("need at least 2 qubits, got N = {n}"));
        }
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if norm.is_nan() || (norm - 1.0).abs() > NORMALIZATION_TOL {
            return domain(format!("|alpha|^2 + |beta|^2 = {norm}, expected 1"));
        }
        Ok(GhzParams { alpha, beta, n })
    }

    /// Real non-negative amplitudes with `|α|² = alpha_sq`.
    pub fn from_alpha_sq(alpha_sq: f64, n: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha_sq) {
            return domain(format!("|alpha|^2 = {alpha_sq} is outside [0, 1]"));
        }
        Self::new(
            Complex64::new(alpha_sq.sqrt(), 0.0),
            Complex64::new((1.0 - alpha_sq).sqrt(), 0.0),
            n,
        )
    }

    pub fn balanced(n: usize) -> Result<Self> {
        Self::from_alpha_sq(0.5, n)
    }

    pub fn with_n(self, n: usize) -> Result<Self> {
        Self::new(self.alpha, self.beta, n)
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn beta_sq(&self) -> f64 {
        self.beta.norm_sqr()
    }

    /// `|αβ|`, the initial negativity of every bipartition.
    pub fn abs_alpha_beta(&self) -> f64 {
        self.alpha.norm() * self.beta.norm()
    }

    pub fn is_product(&self) -> bool {
        self.alpha.norm() == 0.0 || self.beta.norm() == 0.0
    }

    /// Size of the most balanced cut, `⌊N/2⌋`.
    pub fn balanced_k(&self) -> usize {
        self.n / 2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogCompanion {
    pub ln_lambda: Vec<f64>,
    pub ln_offdiag_abs: f64,
}

/// Exact evolved state in weight-indexed form.
///
/// `lambda[k]` is the coefficient of each individual projector with exactly
/// `k` qubits in `|1⟩`; the total weight-`k` probability is `C(N,k)·lambda[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEvolvedState {
    pub params: GhzParams,
    pub channel: ChannelSpec,
    pub p: f64,
    pub lambda: Vec<f64>,
    /// Coefficient of `(|0⟩⟨1|)^{⊗N}`.
    pub offdiag: Complex64,
    pub log_scale: Option<LogCompanion>,
}

pub fn evolve(params: &GhzParams, channel: &ChannelSpec, p: f64) -> Result<SymmetricEvolvedState> {
    check_probability(p)?;
    let n = params.n;
    let lambda = (0..=n)
        .map(|k| lambda_coefficient(channel, params, p, k))
        .collect::<Result<Vec<_>>>()?;
    let factor = (1.0 - p).powf(channel.coherence_exponent() * n as f64);
    let offdiag = params.alpha * params.beta.conj() * factor;
    let log_scale = if n > LOG_DOMAIN_THRESHOLD {
        let ln_lambda = (0..=n)
            .map(|k| log_lambda_coefficient(channel, params, p, k).map(|v| v.ln_abs))
            .collect::<Result<Vec<_>>>()?;
        Some(LogCompanion {
            ln_lambda,
            ln_offdiag_abs: ln_offdiag_abs(channel, params, p),
        })
    } else {
        None
    };
    Ok(SymmetricEvolvedState {
        params: *params,
        channel: *channel,
        p,
        lambda,
        offdiag,
        log_scale,
    })
}

fn check_weight(params: &GhzParams, k: usize) -> Result<()> {
    if k > params.n {
        domain(format!("weight k = {k} exceeds N = {}", params.n))
    } else {
        Ok(())
    }
}

/// `λ_k = |α|² x^{N-k} y^k + |β|² w^{N-k} z^k` with the channel's
/// population-transfer coefficients.
pub fn lambda_coefficient(channel: &ChannelSpec, params: &GhzParams, p: f64, k: usize) -> Result<f64> {
    check_weight(params, k)?;
    let c = channel.population_transfer(p)?;
    let (up, down) = ((params.n - k) as i32, k as i32);
    Ok(params.alpha_sq() * c.x.powi(up) * c.y.powi(down)
        + params.beta_sq() * c.w.powi(up) * c.z.powi(down))
}

/// Same quantity as [`lambda_coefficient`], evaluated as a log-sum-exp of
/// the two terms so that it survives N in the tens of thousands.
pub fn log_lambda_coefficient(
    channel: &ChannelSpec,
    params: &GhzParams,
    p: f64,
    k: usize,
) -> Result<SignedLog> {
    check_weight(params, k)?;
    let c = channel.population_transfer(p)?;
    let ln = |v: f64| if v == 0.0 { f64::NEG_INFINITY } else { v.ln() };
    // x = 1 - y and z = 1 - w; ln_1p keeps the small-p end exact.
    let (ln_x, ln_y) = (ln_1m(c.y), ln(c.y));
    let (ln_w, ln_z) = (ln(c.w), ln_1m(c.w));
    let (up, down) = ((params.n - k) as f64, k as f64);
    let first = ln(params.alpha_sq()) + ln_pow(ln_x, up) + ln_pow(ln_y, down);
    let second = ln(params.beta_sq()) + ln_pow(ln_w, up) + ln_pow(ln_z, down);
    Ok(SignedLog::positive(log_add_exp(first, second)))
}

fn ln_1m(v: f64) -> f64 {
    (-v).ln_1p()
}

/// `ln |αβ| + e·N·ln(1-p)` where `e` is the per-qubit coherence exponent.
pub(crate) fn ln_offdiag_abs(channel: &ChannelSpec, params: &GhzParams, p: f64) -> f64 {
    let ab = params.abs_alpha_beta();
    if ab == 0.0 {
        return f64::NEG_INFINITY;
    }
    ab.ln() + ln_pow(ln_1m(p), channel.coherence_exponent() * params.n as f64)
}

impl SymmetricEvolvedState {
    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn family(&self) -> ChannelFamily {
        self.channel.family
    }

    /// `ln λ_k`, from the companion when present.
    pub fn ln_lambda(&self, k: usize) -> f64 {
        match &self.log_scale {
            Some(log) => log.ln_lambda[k],
            None => {
                let v = self.lambda[k];
                if v > 0.0 {
                    v.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    pub fn ln_offdiag_abs(&self) -> f64 {
        match &self.log_scale {
            Some(log) => log.ln_offdiag_abs,
            None => {
                let v = self.offdiag.norm();
                if v > 0.0 {
                    v.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// `Σ_k C(N,k) λ_k`, accumulated in log space.
    pub fn trace(&self) -> f64 {
        let binom = ln_binomial_row(self.n());
        binom
            .iter()
            .enumerate()
            .map(|(k, b)| b + self.ln_lambda(k))
            .fold(f64::NEG_INFINITY, log_add_exp)
            .exp()
    }

    /// Aggregated probability of finding exactly `k` excitations.
    pub fn weight_probability(&self, k: usize) -> f64 {
        (ln_binomial_row(self.n())[k] + self.ln_lambda(k)).exp()
    }

    pub fn check_invariants(&self) -> Result<()> {
        if let Some(k) = self.lambda.iter().position(|&l| l.is_nan() || l < 0.0) {
            return Err(crate::Error::Structural(format!("lambda[{k}] = {} < 0", self.lambda[k])));
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(crate::Error::Structural(format!("trace = {trace}, expected 1")));
        }
        let n = self.n();
        let coherence = self.offdiag.norm_sqr();
        let corner = self.lambda[0] * self.lambda[n];
        if coherence > corner + 1e-12 {
            return Err(crate::Error::Structural(format!(
                "corner block not positive: |c|^2 = {coherence} > lambda_0 lambda_N = {corner}"
            )));
        }
        Ok(())
    }

    /// Expands into the explicit `2^N × 2^N` matrix.
    pub fn to_dense(&self) -> Result<DenseState> {
        let n = self.n();
        check_capacity(n)?;
        let mut rho = DenseState::zeros(n);
        let dim = rho.dim();
        for s in 0..dim {
            rho.set(s, s, Complex64::new(self.lambda[s.count_ones() as usize], 0.0));
        }
        let last = dim - 1;
        rho.set(0, last, rho.get(0, last) + self.offdiag);
        rho.set(last, 0, rho.get(last, 0) + self.offdiag.conj());
        Ok(rho)
    }
}

pub fn dense_from_symmetric(state: &SymmetricEvolvedState) -> Result<DenseState> {
    state.to_dense()
}
