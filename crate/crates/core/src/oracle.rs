//! Brute-force reference: full density matrix, Kraus maps applied qubit by
//! qubit, partial transposes over arbitrary subsets, and negativity from a
//! dense Hermitian eigensolver. Nothing here relies on the weight symmetry
//! used by [`crate::state`].

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{kraus_operators, ChannelSpec};
use crate::dense::{check_capacity, hermitian_eigenvalues, DenseState};
use crate::error::{domain, Result};
use crate::state::GhzParams;

/// Eigenvalues above `-NEGATIVE_EIGENVALUE_TOL` count as zero.
pub const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-12;

/// A nonempty proper subset of the qubits, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitSubset {
    indices: Vec<usize>,
    n: usize,
}

impl QubitSubset {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() || indices.len() >= n {
            return domain(format!("subset {indices:?} is not a nonempty proper subset of {n} qubits"));
        }
        if let Some(&bad) = indices.iter().find(|&&q| q >= n) {
            return domain(format!("qubit index {bad} out of range for N = {n}"));
        }
        Ok(QubitSubset { indices, n })
    }

    /// The first `k` qubits.
    pub fn leading(k: usize, n: usize) -> Result<Self> {
        Self::new((0..k).collect(), n)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn mask(&self) -> usize {
        self.indices.iter().map(|q| 1usize << (self.n - 1 - q)).sum()
    }

    /// Every subset of size `k`, in lexicographic order.
    pub fn all_of_size(k: usize, n: usize) -> Vec<QubitSubset> {
        (0usize..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| {
                let idx = (0..n).filter(|q| m & (1 << (n - 1 - q)) != 0).collect();
                QubitSubset { indices: idx, n }
            })
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect()
    }
}

pub fn build_initial(params: &GhzParams) -> Result<DenseState> {
    let n = params.n;
    check_capacity(n)?;
    let last = (1usize << n) - 1;
    let amp = |i: usize| {
        if i == 0 {
            params.alpha
        } else if i == last {
            params.beta
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    Ok(DenseState::from_fn(n, |i, j| amp(i) * amp(j).conj()))
}

/// Applies the channel to every qubit in turn, `0, 1, …, N-1`.
pub fn evolve_dense(rho: &DenseState, channel: &ChannelSpec, p: f64) -> Result<DenseState> {
    let order: Vec<usize> = (0..rho.n()).collect();
    evolve_dense_ordered(rho, channel, p, &order)
}

pub fn evolve_dense_ordered(
    rho: &DenseState,
    channel: &ChannelSpec,
    p: f64,
    order: &[usize],
) -> Result<DenseState> {
    let kraus = kraus_operators(channel, p)?;
    let mut out = rho.clone();
    for &q in order {
        if q >= rho.n() {
            return domain(format!("qubit {q} out of range"));
        }
        out = out.apply_kraus_qubit(&kraus.ops, q);
    }
    Ok(out)
}

/// Transposes the tensor legs of the qubits in `subset`.
pub fn partial_transpose(rho: &DenseState, subset: &QubitSubset) -> Result<DenseState> {
    if subset.n != rho.n() {
        return domain(format!("subset is for {} qubits, state has {}", subset.n, rho.n()));
    }
    let m = subset.mask();
    Ok(DenseState::from_fn(rho.n(), |i, j| {
        let (i2, j2) = ((i & !m) | (j & m), (j & !m) | (i & m));
        rho.get(i2, j2)
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseNegativity {
    pub negativity: f64,
    pub negative_count: usize,
    pub min_eigenvalue: f64,
    #[serde(skip)]
    pub spectrum: Vec<f64>,
}

pub fn negativity_dense(rho: &DenseState, subset: &QubitSubset) -> Result<DenseNegativity> {
    let pt = partial_transpose(rho, subset)?;
    let spectrum = hermitian_eigenvalues(&pt)?;
    let negatives: Vec<f64> = spectrum.iter().copied().filter(|&e| e < -NEGATIVE_EIGENVALUE_TOL).collect();
    Ok(DenseNegativity {
        negativity: negatives.iter().map(|e| -e).sum(),
        negative_count: negatives.len(),
        min_eigenvalue: spectrum[0],
        spectrum,
    })
}

/// Evolved GHZ state built entirely through the dense path.
pub fn evolved_ghz_dense(params: &GhzParams, channel: &ChannelSpec, p: f64) -> Result<DenseState> {
    evolve_dense(&build_initial(params)?, channel, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::hermitian_eigenvalues_full;
    use crate::state::evolve;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn families() -> Vec<ChannelSpec> {
        vec![
            ChannelSpec::amplitude_damping(),
            ChannelSpec::generalized_amplitude_damping(1.0).unwrap(),
            ChannelSpec::generalized_amplitude_damping(0.3).unwrap(),
            ChannelSpec::diffusive(),
            ChannelSpec::depolarizing(),
            ChannelSpec::phase_damping(),
        ]
    }

    fn bell() -> DenseState {
        build_initial(&GhzParams::balanced(2).unwrap()).unwrap()
    }

    #[test]
    fn product_initial_state() {
        let params = GhzParams::from_alpha_sq(1.0, 3).unwrap();
        let rho = build_initial(&params).unwrap();
        assert_eq!(rho.get(0, 0), c(1.0, 0.0));
        assert_eq!(rho.frobenius_norm(), 1.0);
    }

    #[test]
    fn initial_state_is_pure() {
        let params = GhzParams::new(c(0.6, 0.0), c(0.0, 0.8), 4).unwrap();
        let rho = build_initial(&params).unwrap();
        assert!((rho.matmul(&rho).trace() - c(1.0, 0.0)).norm() < 1e-15);
        let sym = evolve(&params, &ChannelSpec::depolarizing(), 0.0).unwrap().to_dense().unwrap();
        assert!(sym.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn capacity_refused() {
        assert!(matches!(
            build_initial(&GhzParams::balanced(13).unwrap()),
            Err(crate::Error::Capacity { .. })
        ));
    }

    #[test]
    fn evolution_limits() {
        let params = GhzParams::new(c(0.6, 0.0), c(0.0, 0.8), 3).unwrap();
        let rho = build_initial(&params).unwrap();
        for ch in families() {
            let same = evolve_dense(&rho, &ch, 0.0).unwrap();
            assert!(same.max_abs_diff(&rho) < 1e-15);
        }
        let mixed = evolve_dense(&rho, &ChannelSpec::depolarizing(), 1.0).unwrap();
        let id = DenseState::from_fn(3, |i, j| if i == j { c(0.125, 0.0) } else { c(0.0, 0.0) });
        assert!(mixed.max_abs_diff(&id) < 1e-15);
        let ground = evolve_dense(&rho, &ChannelSpec::amplitude_damping(), 1.0).unwrap();
        let mut g = DenseState::zeros(3);
        g.set(0, 0, c(1.0, 0.0));
        assert!(ground.max_abs_diff(&g) < 1e-15);
    }

    #[test]
    fn bell_partial_transpose() {
        let subset = QubitSubset::new(vec![0], 2).unwrap();
        let res = negativity_dense(&bell(), &subset).unwrap();
        assert!((res.min_eigenvalue + 0.5).abs() < 1e-14);
        assert!((res.negativity - 0.5).abs() < 1e-14);
        assert_eq!(res.negative_count, 1);
        let pt = partial_transpose(&bell(), &subset).unwrap();
        let full = hermitian_eigenvalues_full(&pt).unwrap();
        assert!((full[0] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn product_state_is_ppt() {
        // (a|0><0| + b|1><1| + c|0><1| + h.c.) on each qubit
        let single = [[c(0.7, 0.0), c(0.2, 0.3)], [c(0.2, -0.3), c(0.3, 0.0)]];
        let rho = DenseState::from_fn(2, |i, j| single[i >> 1][j >> 1] * single[i & 1][j & 1]);
        let res = negativity_dense(&rho, &QubitSubset::new(vec![1], 2).unwrap()).unwrap();
        assert!(res.min_eigenvalue >= -1e-14);
        assert_eq!(res.negative_count, 0);
    }

    #[test]
    fn subset_validation() {
        assert!(QubitSubset::new(vec![], 3).is_err());
        assert!(QubitSubset::new(vec![0, 1, 2], 3).is_err());
        assert!(QubitSubset::new(vec![3], 3).is_err());
        assert_eq!(QubitSubset::all_of_size(2, 5).len(), 10);
        assert_eq!(QubitSubset::all_of_size(2, 4)[0].indices(), &[0, 1]);
    }

    #[test]
    fn ghz_negativity_at_zero() {
        let params = GhzParams::new(c(1.0 / 3.0, 0.0), c(0.0, 8f64.sqrt() / 3.0), 5).unwrap();
        let rho = build_initial(&params).unwrap();
        for k in 1..=2 {
            for s in QubitSubset::all_of_size(k, 5) {
                let res = negativity_dense(&rho, &s).unwrap();
                assert!((res.negativity - params.abs_alpha_beta()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn channel_order_does_not_matter() {
        let params = GhzParams::new(c(0.6, 0.0), c(0.48, 0.64), 4).unwrap();
        let rho = build_initial(&params).unwrap();
        for ch in families() {
            let a = evolve_dense_ordered(&rho, &ch, 0.37, &[0, 1, 2, 3]).unwrap();
            let b = evolve_dense_ordered(&rho, &ch, 0.37, &[2, 0, 3, 1]).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-13);
        }
    }

    #[test]
    fn subset_independence() {
        // N=5, k=2: all ten subsets give the same PT negativity.
        let params = GhzParams::new(c(1.0 / 3.0, 0.0), c(8f64.sqrt() / 3.0, 0.0), 5).unwrap();
        for ch in families() {
            let rho = evolved_ghz_dense(&params, &ch, 0.3).unwrap();
            let all: Vec<f64> = QubitSubset::all_of_size(2, 5)
                .iter()
                .map(|s| negativity_dense(&rho, s).unwrap().negativity)
                .collect();
            assert_eq!(all.len(), 10);
            for v in &all {
                assert!((v - all[0]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn block_eigensolver_agrees_with_full_on_evolved_states() {
        for n in 2..=5 {
            let params = GhzParams::new(c(0.6, 0.0), c(0.48, 0.64), n).unwrap();
            for ch in families() {
                let rho = evolved_ghz_dense(&params, &ch, 0.41).unwrap();
                for k in 1..=n / 2 {
                    let pt = partial_transpose(&rho, &QubitSubset::leading(k, n).unwrap()).unwrap();
                    let a = hermitian_eigenvalues(&pt).unwrap();
                    let b = hermitian_eigenvalues_full(&pt).unwrap();
                    for (x, y) in a.iter().zip(&b) {
                        assert!((x - y).abs() < 1e-13);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn pt_is_an_involution(seed in proptest::collection::vec(-1.0f64..1.0, 128), mask in 1usize..7) {
            let m = DenseState::from_fn(3, |i, j| c(seed[i * 8 + j], seed[(j * 8 + i + 64) % 128]));
            let idx: Vec<usize> = (0..3).filter(|q| mask & (1 << q) != 0).collect();
            if let Ok(s) = QubitSubset::new(idx, 3) {
                let twice = partial_transpose(&partial_transpose(&m, &s).unwrap(), &s).unwrap();
                prop_assert_eq!(twice, m.clone());
                prop_assert_eq!(partial_transpose(&m, &s).unwrap().trace(), m.trace());
            }
        }

        #[test]
        fn evolution_preserves_trace_and_hermiticity(p in 0.0f64..=1.0, a2 in 0.0f64..=1.0, phase in 0.0f64..6.3) {
            let params = GhzParams::new(
                c(a2.sqrt(), 0.0),
                Complex64::from_polar((1.0 - a2).sqrt(), phase),
                3,
            ).unwrap();
            let rho = build_initial(&params).unwrap();
            for ch in families() {
                let out = evolve_dense(&rho, &ch, p).unwrap();
                prop_assert!((out.trace() - c(1.0, 0.0)).norm() < 1e-12);
                prop_assert!(out.hermiticity_error() < 1e-12);
            }
        }
    }
}
