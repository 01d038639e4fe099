//! Closed-form negativity against the dense oracle for one cut.

use serde::Serialize;

use crate::channels::ChannelSpec;
use crate::dense::DenseState;
use crate::error::Result;
use crate::negativity::{min_pt_eigenvalue, pt_spectrum_minimum};
use crate::oracle::{negativity_dense, QubitSubset};
use crate::state::SymmetricEvolvedState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutComparison {
    pub k: usize,
    pub closed_min_eigenvalue: f64,
    pub dense_min_eigenvalue: f64,
    /// Distance from `Λ_k` to the nearest eigenvalue of the dense partial transpose.
    pub eigenvalue_gap: f64,
    /// `|min(closed spectrum) - min(dense spectrum)|`; equals `|Λ_k - λ_min|` when `Λ_k ≤ 0`.
    pub minimum_gap: f64,
    pub negativity_gap: f64,
    pub dense_negative_count: usize,
}

impl CutComparison {
    pub fn worst_gap(&self) -> f64 {
        self.eigenvalue_gap.max(self.minimum_gap).max(self.negativity_gap)
    }
}

/// Compares cut `k` of `state` against `dense` transposed over `subset`.
pub fn compare_cut(state: &SymmetricEvolvedState, dense: &DenseState, subset: &QubitSubset) -> Result<CutComparison> {
    let k = subset.len().min(state.n() - subset.len());
    let closed = min_pt_eigenvalue(state, k)?;
    let closed_min = pt_spectrum_minimum(state, k)?;
    let oracle = negativity_dense(dense, subset)?;
    let eigenvalue_gap = oracle
        .spectrum
        .iter()
        .map(|e| (e - closed.min_eigenvalue).abs())
        .fold(f64::INFINITY, f64::min);
    Ok(CutComparison {
        k,
        closed_min_eigenvalue: closed.min_eigenvalue,
        dense_min_eigenvalue: oracle.min_eigenvalue,
        eigenvalue_gap,
        minimum_gap: (closed_min - oracle.min_eigenvalue).abs(),
        negativity_gap: (closed.negativity - oracle.negativity).abs(),
        dense_negative_count: oracle.negative_count,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct GridSummary {
    pub points: usize,
    pub max_eigenvalue_gap: f64,
    pub max_minimum_gap: f64,
    pub max_negativity_gap: f64,
    pub max_negative_count: usize,
    /// Largest `|Λ_k - λ_min(dense)|` over points with `Λ_k ≤ 0`.
    pub max_direct_gap: f64,
}

impl GridSummary {
    pub fn absorb(&mut self, c: &CutComparison) {
        self.points += 1;
        self.max_eigenvalue_gap = self.max_eigenvalue_gap.max(c.eigenvalue_gap);
        self.max_minimum_gap = self.max_minimum_gap.max(c.minimum_gap);
        self.max_negativity_gap = self.max_negativity_gap.max(c.negativity_gap);
        self.max_negative_count = self.max_negative_count.max(c.dense_negative_count);
        if c.closed_min_eigenvalue <= 0.0 {
            self.max_direct_gap = self
                .max_direct_gap
                .max((c.closed_min_eigenvalue - c.dense_min_eigenvalue).abs());
        }
    }

    pub fn merge(&mut self, other: &GridSummary) {
        self.points += other.points;
        self.max_eigenvalue_gap = self.max_eigenvalue_gap.max(other.max_eigenvalue_gap);
        self.max_minimum_gap = self.max_minimum_gap.max(other.max_minimum_gap);
        self.max_negativity_gap = self.max_negativity_gap.max(other.max_negativity_gap);
        self.max_negative_count = self.max_negative_count.max(other.max_negative_count);
        self.max_direct_gap = self.max_direct_gap.max(other.max_direct_gap);
    }

    pub fn worst_gap(&self) -> f64 {
        self.max_eigenvalue_gap
            .max(self.max_minimum_gap)
            .max(self.max_negativity_gap)
            .max(self.max_direct_gap)
    }
}

/// Runs every cut `1..=⌊N/2⌋` (leading subsets) at each grid point.
pub fn compare_grid(
    params: &crate::state::GhzParams,
    channel: &ChannelSpec,
    grid: &[f64],
) -> Result<GridSummary> {
    let mut summary = GridSummary::default();
    for &p in grid {
        let state = crate::state::evolve(params, channel, p)?;
        let dense = crate::oracle::evolved_ghz_dense(params, channel, p)?;
        for k in 1..=params.n / 2 {
            let cmp = compare_cut(&state, &dense, &QubitSubset::leading(k, params.n)?)?;
            summary.absorb(&cmp);
        }
    }
    Ok(summary)
}
