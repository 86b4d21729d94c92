//! Run-count binning: the fitting and independence bin schemes, observed
//! counts, and model areas per bin.

use crate::error::{Error, Result};
use crate::weibull::WeibullParams;

/// A partition of `[edges[0], ∞)` into half-open bins `[edges[k], edges[k+1])`
/// with a final open bin `[edges[last], ∞)`. One bin per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct BinScheme {
    edges: Vec<f64>,
}

impl BinScheme {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::Input("bin scheme needs at least one edge".into()));
        }
        if edges.iter().any(|e| !e.is_finite()) {
            return Err(Error::Input("bin edges must be finite".into()));
        }
        if edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input("bin edges must be strictly increasing".into()));
        }
        Ok(Self { edges })
    }

    pub fn n_bins(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn first_edge(&self) -> f64 {
        self.edges[0]
    }

    /// Lower and upper bounds of bin `k`; the last bin's upper bound is `∞`.
    pub fn bounds(&self, k: usize) -> Result<(f64, f64)> {
        if k >= self.n_bins() {
            return Err(Error::Input(format!(
                "bin index {k} out of range for {} bins",
                self.n_bins()
            )));
        }
        let hi = self.edges.get(k + 1).copied().unwrap_or(f64::INFINITY);
        Ok((self.edges[k], hi))
    }

    /// Index of the bin containing `x`; errors below the first edge.
    pub fn bin_index(&self, x: f64) -> Result<usize> {
        if x < self.edges[0] {
            return Err(Error::Input(format!(
                "value {x} below the first bin edge {}",
                self.edges[0]
            )));
        }
        Ok(self.edges.partition_point(|e| *e <= x) - 1)
    }
}

/// The 12-bin fitting scheme: `[−.5, .5), [.5, 1.5), …, [8.5, 9.5),
/// [9.5, 11.5), [11.5, ∞)`. Integer scores sit at bin centers.
pub fn default_fit_bins() -> BinScheme {
    let mut edges: Vec<f64> = (0..11).map(|k| k as f64 - 0.5).collect();
    edges.push(11.5);
    BinScheme::new(edges).expect("static scheme is valid")
}

/// The 11-bin scheme for the independence test: `[0, 1), …, [8, 9), [9, 11),
/// [11, ∞)`, with integer left endpoints.
pub fn independence_bins() -> BinScheme {
    let mut edges: Vec<f64> = (0..10).map(|k| k as f64).collect();
    edges.push(11.0);
    BinScheme::new(edges).expect("static scheme is valid")
}

/// Per-bin game counts under a scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedCounts {
    scheme: BinScheme,
    counts: Vec<u32>,
    total_games: u32,
}

impl BinnedCounts {
    pub fn scheme(&self) -> &BinScheme {
        &self.scheme
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total_games(&self) -> u32 {
        self.total_games
    }
}

/// Counts how many scores fall in each bin of the scheme.
pub fn bin_counts(scores: &[u32], scheme: &BinScheme) -> Result<BinnedCounts> {
    let mut counts = vec![0u32; scheme.n_bins()];
    for &s in scores {
        counts[scheme.bin_index(s as f64)?] += 1;
    }
    Ok(BinnedCounts {
        scheme: scheme.clone(),
        counts,
        total_games: scores.len() as u32,
    })
}

/// Area under the Weibull density over bin `k`: `cdf(hi) − cdf(lo)`.
pub fn bin_area(p: &WeibullParams, scheme: &BinScheme, k: usize) -> Result<f64> {
    let (lo, hi) = scheme.bounds(k)?;
    Ok(p.cdf(hi) - p.cdf(lo))
}

/// Areas for every bin at once; one cdf evaluation per edge.
pub fn bin_areas(p: &WeibullParams, scheme: &BinScheme) -> Vec<f64> {
    let n = scheme.n_bins();
    let mut cdfs = Vec::with_capacity(n + 1);
    for &e in scheme.edges() {
        cdfs.push(p.cdf(e));
    }
    cdfs.push(1.0);
    (0..n).map(|k| cdfs[k + 1] - cdfs[k]).collect()
}
