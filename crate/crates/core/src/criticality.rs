//! Sudden-death points, ε-decay thresholds and bound-entanglement windows.
//!
//! Roots of `Λ_k(p) = 0` are located by a sign scan on a uniform grid
//! followed by bisection. `Λ_k` is evaluated in log form, so the same code
//! path works for N = 4 and N = 10⁴.

use serde::Serialize;

use crate::channels::{ChannelFamily, ChannelSpec};
use crate::error::{domain, Error, Result};
use crate::logspace::Sign;
use crate::negativity::min_pt_eigenvalue_at;
use crate::state::GhzParams;

pub const SCAN_POINTS: usize = 1000;
pub const DEFAULT_EPSILON: f64 = 1e-2;
/// Largest `|Λ_k(p_c)|` accepted from bisection.
pub const MAX_ROOT_RESIDUAL: f64 = 1e-12;
const WINDOW_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalResult {
    pub p_c: f64,
    pub k: usize,
    pub method: Method,
    pub residual: f64,
}

/// Outcome of a numeric sudden-death search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EsdOutcome {
    /// `Λ_k` reaches zero at `p_c ≤ 1` after being negative on `[0, p_c)`.
    Finite(CriticalResult),
    /// `Λ_k < 0` on all of `[0, 1)`: entanglement only vanishes asymptotically.
    Asymptotic,
}

impl EsdOutcome {
    pub fn finite(self) -> Option<CriticalResult> {
        match self {
            EsdOutcome::Finite(r) => Some(r),
            EsdOutcome::Asymptotic => None,
        }
    }

    /// `p_c`, reading the asymptotic case as `p = 1`.
    pub fn p_c_or_one(self) -> f64 {
        self.finite().map_or(1.0, |r| r.p_c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonResult {
    pub epsilon: f64,
    pub p_eps: f64,
    pub p_eps_approx: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundWindow {
    /// Where `Λ_1` first reaches zero (1 if it never does before `p = 1`).
    pub p_start: f64,
    /// Where the most balanced cut first reaches zero.
    pub p_end: f64,
    pub nonempty: bool,
    pub reason: String,
    pub warnings: Vec<String>,
}

fn require_entangled(params: &GhzParams) -> Result<()> {
    if params.is_product() {
        Err(Error::UndefinedCriticalPoint(
            "alpha or beta is zero: the state is a product and its negativity is identically zero".into(),
        ))
    } else {
        Ok(())
    }
}

fn require_even(params: &GhzParams, what: &str) -> Result<()> {
    if params.n % 2 == 1 {
        domain(format!(
            "the {what} closed form covers the N/2 : N/2 cut and needs even N (got N = {}); use the numeric root",
            params.n
        ))
    } else {
        Ok(())
    }
}

/// Zero-temperature damping: `p_c = min{1, |α/β|^{2/N}}`, the same for every cut.
pub fn esd_probability_ad(params: &GhzParams) -> Result<CriticalResult> {
    require_entangled(params)?;
    let ratio = params.alpha.norm() / params.beta.norm();
    Ok(CriticalResult {
        p_c: ratio.powf(2.0 / params.n as f64).min(1.0),
        k: params.balanced_k(),
        method: Method::ClosedForm,
        residual: 0.0,
    })
}

/// Purely diffusive bath, balanced cut:
/// `p_c = 1 + 2|αβ|^{2/N} - sqrt(1 + 4|αβ|^{4/N})`.
pub fn esd_probability_diffusive(params: &GhzParams) -> Result<CriticalResult> {
    require_entangled(params)?;
    require_even(params, "diffusive")?;
    let r = params.abs_alpha_beta().powf(2.0 / params.n as f64);
    Ok(CriticalResult {
        p_c: 1.0 + 2.0 * r - (1.0 + 4.0 * r * r).sqrt(),
        k: params.n / 2,
        method: Method::ClosedForm,
        residual: 0.0,
    })
}

/// Depolarization, balanced cut: `p_c = 1 - (1 + 4|αβ|^{2/N})^{-1/2}`.
pub fn esd_probability_depolarizing(params: &GhzParams) -> Result<CriticalResult> {
    require_entangled(params)?;
    require_even(params, "depolarizing")?;
    let r = params.abs_alpha_beta().powf(2.0 / params.n as f64);
    Ok(CriticalResult {
        p_c: 1.0 - (1.0 + 4.0 * r).powf(-0.5),
        k: params.n / 2,
        method: Method::ClosedForm,
        residual: 0.0,
    })
}

/// Closed form for the family at cut `k`, when one exists.
pub fn esd_probability_closed_form(channel: &ChannelSpec, params: &GhzParams, k: usize) -> Option<CriticalResult> {
    let r = match channel.family {
        ChannelFamily::AmplitudeDamping => esd_probability_ad(params).ok(),
        ChannelFamily::Diffusive if k == params.n / 2 => esd_probability_diffusive(params).ok(),
        ChannelFamily::Depolarizing if k == params.n / 2 => esd_probability_depolarizing(params).ok(),
        _ => None,
    }?;
    Some(CriticalResult { k, ..r })
}

/// Smallest `p` in `(lo, 1]` where `crossed(p)` holds, assuming
/// `crossed(lo)` is false. `None` when only `p = 1` itself qualifies.
fn first_crossing(lo: f64, crossed: impl Fn(f64) -> Result<bool>) -> Result<Option<f64>> {
    let step = (1.0 - lo) / SCAN_POINTS as f64;
    let mut prev = lo;
    let mut bracket = None;
    for i in 1..SCAN_POINTS {
        let p = lo + step * i as f64;
        if crossed(p)? {
            bracket = Some((prev, p));
            break;
        }
        prev = p;
    }
    if bracket.is_none() {
        // The last grid cell is probed on a geometric ladder toward p = 1 so
        // that roots squeezed against the endpoint are not lost.
        for j in 1..=15 {
            let p = 1.0 - step * 10f64.powi(-j);
            if p <= prev || p >= 1.0 {
                continue;
            }
            if crossed(p)? {
                bracket = Some((prev, p));
                break;
            }
            prev = p;
        }
    }
    let Some((mut a, mut b)) = bracket else {
        return Ok(None);
    };
    for _ in 0..200 {
        let mid = a + 0.5 * (b - a);
        if mid <= a || mid >= b {
            break;
        }
        if crossed(mid)? {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(Some(b))
}

/// Smallest root of `Λ_k(p) = 0` by sign scan plus bisection.
pub fn esd_probability_numeric(channel: &ChannelSpec, params: &GhzParams, k: usize) -> Result<EsdOutcome> {
    require_entangled(params)?;
    let lambda = |p: f64| min_pt_eigenvalue_at(channel, params, p, k);
    lambda(0.0)?;
    let root = first_crossing(0.0, |p| Ok(lambda(p)?.sign != Sign::Negative))?;
    let Some(p_c) = root else {
        return Ok(EsdOutcome::Asymptotic);
    };
    let residual = lambda(p_c)?.to_f64().abs();
    if residual > MAX_ROOT_RESIDUAL {
        return Err(Error::Numerical(format!(
            "bisection stalled at p = {p_c} with |Lambda_{k}| = {residual:e}"
        )));
    }
    Ok(EsdOutcome::Finite(CriticalResult {
        p_c,
        k,
        method: Method::Bisection,
        residual,
    }))
}

/// `p_ε` where the balanced-cut eigenvalue has shrunk to `ε` times its
/// initial value `-|αβ|`, plus the first-order large-N estimate.
pub fn epsilon_probability(channel: &ChannelSpec, params: &GhzParams, epsilon: f64) -> Result<EpsilonResult> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return domain(format!("epsilon = {epsilon} must lie in (0, 1)"));
    }
    require_entangled(params)?;
    let k = params.balanced_k();
    let ln_target = epsilon.ln() + params.abs_alpha_beta().ln();
    let crossed = |p: f64| -> Result<bool> {
        let v = min_pt_eigenvalue_at(channel, params, p, k)?;
        Ok(v.sign != Sign::Negative || v.ln_abs <= ln_target)
    };
    let p_eps = first_crossing(0.0, crossed)?.unwrap_or(1.0);
    let rate = if channel.family.is_damping() { 2.0 } else { 1.0 };
    Ok(EpsilonResult {
        epsilon,
        p_eps,
        p_eps_approx: -rate / params.n as f64 * epsilon.ln(),
        n: params.n,
    })
}

/// Large-N limit of the balanced-cut sudden-death probability.
pub fn asymptotic_esd_limit(family: ChannelFamily) -> Result<f64> {
    match family {
        ChannelFamily::AmplitudeDamping => Ok(1.0),
        ChannelFamily::Diffusive => Ok(3.0 - 5f64.sqrt()),
        ChannelFamily::Depolarizing => Ok(1.0 - 1.0 / 5f64.sqrt()),
        ChannelFamily::PhaseDamping => Err(Error::UndefinedCriticalPoint(
            "dephasing never produces sudden death".into(),
        )),
        ChannelFamily::GeneralizedAmplitudeDamping => domain("no closed-form limit for finite-temperature damping"),
    }
}

pub fn bound_entanglement_window(channel: &ChannelSpec, params: &GhzParams) -> Result<BoundWindow> {
    if params.n < 4 {
        return domain(format!("a bound-entanglement window needs N >= 4, got N = {}", params.n));
    }
    if params.is_product() {
        return domain("alpha or beta is zero: no entanglement to bound");
    }
    let balanced = params.balanced_k();
    let first = esd_probability_numeric(channel, params, 1)?;
    let last = esd_probability_numeric(channel, params, balanced)?;
    let (p_start, p_end) = (first.p_c_or_one(), last.p_c_or_one());
    let nonempty = p_start < p_end - WINDOW_GAP;
    let reason = match (first, last) {
        (EsdOutcome::Asymptotic, EsdOutcome::Asymptotic) => "no sudden death on any cut".to_string(),
        _ if nonempty => format!("1:{} cuts are PPT while the {balanced}:{} cut is NPT", params.n - 1, params.n - balanced),
        _ => "all cuts lose entanglement at the same point".to_string(),
    };
    let mut warnings = Vec::new();
    if nonempty {
        for i in 1..=101 {
            let p = p_start + (p_end - p_start) * i as f64 / 102.0;
            let one = min_pt_eigenvalue_at(channel, params, p, 1)?;
            let bal = min_pt_eigenvalue_at(channel, params, p, balanced)?;
            if one.is_negative() {
                warnings.push(format!("Lambda_1 turns negative again at p = {p}"));
            }
            if !bal.is_negative() {
                warnings.push(format!("Lambda_{balanced} is non-negative at p = {p} inside the window"));
            }
        }
    }
    Ok(BoundWindow {
        p_start,
        p_end,
        nonempty,
        reason,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn unbalanced(n: usize) -> GhzParams {
        GhzParams::new(Complex64::new(1.0 / 3.0, 0.0), Complex64::new(8f64.sqrt() / 3.0, 0.0), n).unwrap()
    }

    #[test]
    fn amplitude_damping_examples() {
        let r = esd_probability_ad(&unbalanced(4)).unwrap();
        assert!((r.p_c - 8f64.powf(-0.25)).abs() < 1e-15);
        assert!((r.p_c - 0.594_604).abs() < 1e-6);
        assert_eq!(esd_probability_ad(&GhzParams::balanced(2).unwrap()).unwrap().p_c, 1.0);
        assert_eq!(esd_probability_ad(&GhzParams::from_alpha_sq(0.8, 6).unwrap()).unwrap().p_c, 1.0);
        assert!(matches!(
            esd_probability_ad(&GhzParams::from_alpha_sq(1.0, 4).unwrap()),
            Err(Error::UndefinedCriticalPoint(_))
        ));
    }

    #[test]
    fn diffusive_and_depolarizing_examples() {
        let b4 = GhzParams::balanced(4).unwrap();
        let d = esd_probability_diffusive(&b4).unwrap().p_c;
        assert!((d - (1.0 + 2f64.sqrt() - 3f64.sqrt())).abs() < 1e-15);
        assert!((d - 0.68216).abs() < 1e-5);
        let dep = esd_probability_depolarizing(&b4).unwrap().p_c;
        assert!((dep - 0.48892).abs() < 1e-5);
        assert!(esd_probability_depolarizing(&GhzParams::balanced(5).unwrap()).is_err());
        assert!(esd_probability_diffusive(&GhzParams::from_alpha_sq(0.0, 4).unwrap()).is_err());
    }

    #[test]
    fn numeric_matches_closed_forms() {
        for n in [2, 4, 6, 8] {
            for params in [GhzParams::balanced(n).unwrap(), unbalanced(n)] {
                let k = n / 2;
                let diff = esd_probability_numeric(&ChannelSpec::diffusive(), &params, k).unwrap();
                let want = esd_probability_diffusive(&params).unwrap().p_c;
                assert!((diff.finite().unwrap().p_c - want).abs() < 1e-9);
                let dep = esd_probability_numeric(&ChannelSpec::depolarizing(), &params, k).unwrap();
                let want = esd_probability_depolarizing(&params).unwrap().p_c;
                assert!((dep.finite().unwrap().p_c - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn amplitude_damping_numeric_is_cut_independent() {
        let params = unbalanced(8);
        let want = esd_probability_ad(&params).unwrap().p_c;
        for k in 1..=4 {
            let r = esd_probability_numeric(&ChannelSpec::amplitude_damping(), &params, k)
                .unwrap()
                .finite()
                .unwrap();
            assert!((r.p_c - want).abs() < 1e-9);
            assert!(r.residual <= MAX_ROOT_RESIDUAL);
        }
        // |α| ≥ |β|: only the asymptotic zero remains
        let flipped = GhzParams::from_alpha_sq(0.7, 4).unwrap();
        let r = esd_probability_numeric(&ChannelSpec::amplitude_damping(), &flipped, 2).unwrap();
        assert_eq!(r, EsdOutcome::Asymptotic);
        assert_eq!(r.p_c_or_one(), esd_probability_ad(&flipped).unwrap().p_c);
    }

    #[test]
    fn root_close_to_one_is_found() {
        // p_c = (1/8)^{1/N} with N = 10_000 sits in the last scan cell.
        let params = unbalanced(10_000);
        let want = esd_probability_ad(&params).unwrap().p_c;
        assert!(want > 0.999);
        let got = esd_probability_numeric(&ChannelSpec::amplitude_damping(), &params, 5000).unwrap();
        assert!((got.finite().unwrap().p_c - want).abs() < 1e-9);
    }

    #[test]
    fn dephasing_has_no_root() {
        for n in 2..=8 {
            for k in 1..=n / 2 {
                let r = esd_probability_numeric(&ChannelSpec::phase_damping(), &unbalanced(n), k).unwrap();
                assert_eq!(r, EsdOutcome::Asymptotic);
            }
        }
    }

    #[test]
    fn epsilon_examples() {
        let params = GhzParams::balanced(100).unwrap();
        let r = epsilon_probability(&ChannelSpec::phase_damping(), &params, 0.01).unwrap();
        assert!((r.p_eps - (1.0 - 0.01f64.powf(0.01))).abs() < 1e-12);
        assert!((r.p_eps - 0.04501).abs() < 1e-5);
        let r = epsilon_probability(&ChannelSpec::amplitude_damping(), &GhzParams::balanced(400).unwrap(), 1e-3).unwrap();
        let target = -2.0 * 1e-3f64.ln();
        assert!(((400.0 * r.p_eps - target) / target).abs() <= 0.05);
        assert!((400.0 * r.p_eps_approx - target).abs() < 1e-12);
        assert!(epsilon_probability(&ChannelSpec::depolarizing(), &params, 1.0).is_err());
        assert!(epsilon_probability(&ChannelSpec::depolarizing(), &params, 0.0).is_err());
    }

    #[test]
    fn epsilon_tends_to_zero_as_epsilon_tends_to_one() {
        let params = unbalanced(8);
        let mut prev = 1.0;
        for eps in [0.5, 0.9, 0.99, 0.999, 0.999_999] {
            let r = epsilon_probability(&ChannelSpec::depolarizing(), &params, eps).unwrap();
            assert!(r.p_eps < prev);
            prev = r.p_eps;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn epsilon_precedes_sudden_death() {
        for n in [4, 8, 40] {
            let params = unbalanced(n);
            for ch in [ChannelSpec::amplitude_damping(), ChannelSpec::diffusive(), ChannelSpec::depolarizing()] {
                let eps = epsilon_probability(&ch, &params, DEFAULT_EPSILON).unwrap();
                let pc = esd_probability_numeric(&ch, &params, params.balanced_k()).unwrap().p_c_or_one();
                assert!(eps.p_eps > 0.0 && eps.p_eps < pc, "{:?} N={n}", ch.family);
            }
        }
    }

    #[test]
    fn limits() {
        assert_eq!(asymptotic_esd_limit(ChannelFamily::AmplitudeDamping).unwrap(), 1.0);
        assert_eq!(asymptotic_esd_limit(ChannelFamily::Diffusive).unwrap(), 3.0 - 5f64.sqrt());
        assert_eq!(asymptotic_esd_limit(ChannelFamily::Depolarizing).unwrap(), 1.0 - 1.0 / 5f64.sqrt());
        assert!(asymptotic_esd_limit(ChannelFamily::PhaseDamping).is_err());
    }

    #[test]
    fn windows() {
        let w = bound_entanglement_window(&ChannelSpec::depolarizing(), &GhzParams::balanced(4).unwrap()).unwrap();
        assert!(w.nonempty);
        assert!(w.p_start > 0.0 && w.p_start < w.p_end);
        assert!((w.p_end - 0.48892).abs() < 1e-4);
        assert!(w.warnings.is_empty());
        let w = bound_entanglement_window(&ChannelSpec::amplitude_damping(), &unbalanced(6)).unwrap();
        assert!(!w.nonempty);
        let w = bound_entanglement_window(&ChannelSpec::phase_damping(), &unbalanced(6)).unwrap();
        assert!(!w.nonempty);
        assert_eq!(w.reason, "no sudden death on any cut");
        assert!(bound_entanglement_window(&ChannelSpec::depolarizing(), &GhzParams::balanced(3).unwrap()).is_err());
    }

    #[test]
    fn critical_points_grow_with_n() {
        let mut prev = (0.0, 0.0);
        for n in [2, 4, 10, 40, 100, 1000, 10_000] {
            let params = unbalanced(n);
            let d = esd_probability_depolarizing(&params).unwrap().p_c;
            let f = esd_probability_diffusive(&params).unwrap().p_c;
            assert!(d > prev.0 && f > prev.1);
            prev = (d, f);
        }
        assert!((prev.0 - (1.0 - 1.0 / 5f64.sqrt())).abs() < 1e-3);
        assert!((prev.1 - (3.0 - 5f64.sqrt())).abs() < 1e-3);
    }
}
