//! Single-qubit noise channels: amplitude damping (zero and finite
//! temperature), the purely diffusive limit, depolarization and dephasing.
//!
//! Every channel is evaluated at an exchange probability `p` in `[0, 1]`;
//! converting physical time into `p` is a separate step
//! ([`probability_from_time`], [`diffusive_probability`]).

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_probability, domain, Result};

pub type Mat2 = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelFamily {
    AmplitudeDamping,
    GeneralizedAmplitudeDamping,
    Diffusive,
    Depolarizing,
    PhaseDamping,
}

impl ChannelFamily {
    pub const ALL: [ChannelFamily; 5] = [
        ChannelFamily::AmplitudeDamping,
        ChannelFamily::GeneralizedAmplitudeDamping,
        ChannelFamily::Diffusive,
        ChannelFamily::Depolarizing,
        ChannelFamily::PhaseDamping,
    ];

    /// AD, GAD and the diffusive limit share the Kraus structure of the
    /// finite-temperature damping channel.
    pub fn is_damping(self) -> bool {
        matches!(
            self,
            ChannelFamily::AmplitudeDamping
                | ChannelFamily::GeneralizedAmplitudeDamping
                | ChannelFamily::Diffusive
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelFamily::AmplitudeDamping => "ad",
            ChannelFamily::GeneralizedAmplitudeDamping => "gad",
            ChannelFamily::Diffusive => "diffusive",
            ChannelFamily::Depolarizing => "depolarizing",
            ChannelFamily::PhaseDamping => "dephasing",
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ad" | "amplitude-damping" => Ok(ChannelFamily::AmplitudeDamping),
            "gad" | "generalized-amplitude-damping" => Ok(ChannelFamily::GeneralizedAmplitudeDamping),
            "diffusive" | "diff" => Ok(ChannelFamily::Diffusive),
            "depolarizing" | "d" => Ok(ChannelFamily::Depolarizing),
            "dephasing" | "pd" | "phase-damping" => Ok(ChannelFamily::PhaseDamping),
            other => Err(format!("unknown channel family `{other}`")),
        }
    }
}

/// A channel family with its physical parameters.
///
/// `nbar` is only read for GAD; `gamma` for AD and GAD; `diffusion` (the
/// diffusion constant, written Γ in the literature) for the diffusive family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelSpec {
    pub family: ChannelFamily,
    pub nbar: f64,
    pub gamma: f64,
    pub diffusion: f64,
}

impl ChannelSpec {
    pub fn new(family: ChannelFamily, nbar: f64) -> Result<Self> {
        if !nbar.is_finite() || nbar < 0.0 {
            return domain(format!("mean bath excitation nbar = {nbar} must be finite and >= 0"));
        }
        let nbar = if family == ChannelFamily::GeneralizedAmplitudeDamping {
            nbar
        } else {
            0.0
        };
        Ok(ChannelSpec {
            family,
            nbar,
            gamma: 1.0,
            diffusion: 1.0,
        })
    }

    pub fn amplitude_damping() -> Self {
        Self::new(ChannelFamily::AmplitudeDamping, 0.0).unwrap()
    }

    pub fn generalized_amplitude_damping(nbar: f64) -> Result<Self> {
        Self::new(ChannelFamily::GeneralizedAmplitudeDamping, nbar)
    }

    pub fn diffusive() -> Self {
        Self::new(ChannelFamily::Diffusive, 0.0).unwrap()
    }

    pub fn depolarizing() -> Self {
        Self::new(ChannelFamily::Depolarizing, 0.0).unwrap()
    }

    pub fn phase_damping() -> Self {
        Self::new(ChannelFamily::PhaseDamping, 0.0).unwrap()
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if gamma.is_nan() || gamma < 0.0 {
            return domain(format!("dissipation rate gamma = {gamma} must be >= 0"));
        }
        self.gamma = gamma;
        Ok(self)
    }

    pub fn with_diffusion(mut self, diffusion: f64) -> Result<Self> {
        if diffusion.is_nan() || diffusion < 0.0 {
            return domain(format!("diffusion constant = {diffusion} must be >= 0"));
        }
        self.diffusion = diffusion;
        Ok(self)
    }

    /// Exchange probability reached after time `t`, for the families that
    /// carry a rate.
    pub fn probability_at(&self, t: f64) -> Result<f64> {
        match self.family {
            ChannelFamily::AmplitudeDamping | ChannelFamily::GeneralizedAmplitudeDamping => {
                probability_from_time(self.gamma, self.nbar, t)
            }
            ChannelFamily::Diffusive => diffusive_probability(self.diffusion, t),
            other => domain(format!("{other} channel has no time parametrization, use p directly")),
        }
    }

    /// Single-qubit population transfer at probability `p`: `|0><0|` maps to
    /// `x|0><0| + y|1><1|` and `|1><1|` to `w|0><0| + z|1><1|`.
    ///
    /// Depolarization moves populations exactly like the diffusive channel;
    /// dephasing leaves them untouched.
    pub fn population_transfer(&self, p: f64) -> Result<GadCoefficients> {
        check_probability(p)?;
        Ok(match self.family {
            ChannelFamily::AmplitudeDamping | ChannelFamily::GeneralizedAmplitudeDamping => {
                gad_coefficients(self.nbar, p)?
            }
            ChannelFamily::Diffusive | ChannelFamily::Depolarizing => diffusive_coefficients(p),
            ChannelFamily::PhaseDamping => GadCoefficients {
                x: 1.0,
                y: 0.0,
                w: 0.0,
                z: 1.0,
            },
        })
    }

    /// Power of `(1-p)` by which one qubit multiplies an off-diagonal element.
    pub fn coherence_exponent(&self) -> f64 {
        if self.family.is_damping() {
            0.5
        } else {
            1.0
        }
    }
}

/// `p(t) = 1 - exp(-gamma (2 nbar + 1) t / 2)`.
pub fn probability_from_time(gamma: f64, nbar: f64, t: f64) -> Result<f64> {
    if !(gamma >= 0.0 && nbar >= 0.0 && t >= 0.0) {
        return domain(format!(
            "time parametrization needs gamma, nbar, t >= 0 (got {gamma}, {nbar}, {t})"
        ));
    }
    Ok(-(-0.5 * gamma * (2.0 * nbar + 1.0) * t).exp_m1())
}

/// High-temperature limit at fixed `nbar * gamma`: `p(t) = 1 - exp(-diffusion t)`.
pub fn diffusive_probability(diffusion: f64, t: f64) -> Result<f64> {
    if !(diffusion >= 0.0 && t >= 0.0) {
        return domain(format!(
            "diffusive parametrization needs diffusion, t >= 0 (got {diffusion}, {t})"
        ));
    }
    Ok(-(-diffusion * t).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GadCoefficients {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub z: f64,
}

pub fn gad_coefficients(nbar: f64, p: f64) -> Result<GadCoefficients> {
    check_probability(p)?;
    if !nbar.is_finite() || nbar < 0.0 {
        return domain(format!("mean bath excitation nbar = {nbar} must be finite and >= 0"));
    }
    let denom = 2.0 * nbar + 1.0;
    let y = p * nbar / denom;
    let w = p * (nbar + 1.0) / denom;
    Ok(GadCoefficients {
        x: 1.0 - y,
        y,
        w,
        z: 1.0 - w,
    })
}

fn diffusive_coefficients(p: f64) -> GadCoefficients {
    let half = 0.5 * p;
    GadCoefficients {
        x: 1.0 - half,
        y: half,
        w: half,
        z: 1.0 - half,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub ops: Vec<Mat2>,
}

impl KrausSet {
    /// `Σ E† E`, which must be the identity.
    pub fn completeness(&self) -> Mat2 {
        self.ops.iter().map(|e| e.adjoint() * e).sum()
    }

    pub fn apply(&self, rho: &Mat2) -> Mat2 {
        self.ops.iter().map(|e| e * rho * e.adjoint()).sum()
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn diag(a: f64, b: f64) -> Mat2 {
    Mat2::new(real(a), ZERO, ZERO, real(b))
}

pub fn kraus_operators(spec: &ChannelSpec, p: f64) -> Result<KrausSet> {
    check_probability(p)?;
    let ops = match spec.family {
        ChannelFamily::AmplitudeDamping | ChannelFamily::GeneralizedAmplitudeDamping => {
            let denom = 2.0 * spec.nbar + 1.0;
            damping_kraus((spec.nbar + 1.0) / denom, spec.nbar / denom, p)
        }
        ChannelFamily::Diffusive => damping_kraus(0.5, 0.5, p),
        ChannelFamily::Depolarizing => {
            let id = (1.0 - 0.75 * p).sqrt();
            let pauli = (0.25 * p).sqrt();
            let i = Complex64::new(0.0, 1.0);
            vec![
                Mat2::identity() * real(id),
                Mat2::new(ZERO, ONE, ONE, ZERO) * real(pauli),
                Mat2::new(ZERO, -i, i, ZERO) * real(pauli),
                Mat2::new(ONE, ZERO, ZERO, -ONE) * real(pauli),
            ]
        }
        ChannelFamily::PhaseDamping => {
            let keep = (1.0 - p).sqrt();
            let flip = p.sqrt();
            vec![diag(keep, keep), diag(flip, 0.0), diag(0.0, flip)]
        }
    };
    Ok(KrausSet { ops })
}

/// The four damping operators with `decay = (nbar+1)/(2nbar+1)` and
/// `excite = nbar/(2nbar+1)`.
fn damping_kraus(decay: f64, excite: f64, p: f64) -> Vec<Mat2> {
    let (sd, se) = (decay.sqrt(), excite.sqrt());
    let sq = (1.0 - p).sqrt();
    vec![
        diag(sd, sd * sq),
        Mat2::new(ZERO, real((decay * p).sqrt()), ZERO, ZERO),
        diag(se * sq, se),
        Mat2::new(ZERO, ZERO, real((excite * p).sqrt()), ZERO),
    ]
}

pub fn apply_single_qubit(kraus: &KrausSet, rho: &Mat2) -> Result<Mat2> {
    let skew = (rho - rho.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if skew > 1e-12 {
        return domain(format!("input is not Hermitian (max |rho - rho^dag| = {skew:e})"));
    }
    Ok(kraus.apply(rho))
}
