//! Per-team Weibull parameter estimation from binned run data, by least
//! squares or maximum likelihood over `(α_RS, α_RA, γ)` with the shift fixed.

use crate::binning::{bin_areas, default_fit_bins, bin_counts, BinScheme, BinnedCounts};
use crate::error::{Error, Result};
use crate::optim::{nelder_mead, NelderMeadOptions, OptimOutcome};
use crate::weibull::{alpha_from_mean, pythag_wp, WeibullParams};

use serde::{Deserialize, Serialize};

/// One team's season of per-game `(runs_scored, runs_allowed)` pairs.
///
/// Ties are rejected at construction; the win count is derived from the
/// pairs, never supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeamSeason {
    team_id: String,
    games: Vec<(u32, u32)>,
    wins: u32,
}

impl TeamSeason {
    pub fn new(team_id: impl Into<String>, games: Vec<(u32, u32)>) -> Result<Self> {
        let team_id = team_id.into();
        if let Some(idx) = games.iter().position(|&(rs, ra)| rs == ra) {
            let (rs, ra) = games[idx];
            return Err(Error::Input(format!(
                "team {team_id}: game {} is a tie ({rs}-{ra}); baseball games cannot tie",
                idx + 1
            )));
        }
        let wins = games.iter().filter(|&&(rs, ra)| rs > ra).count() as u32;
        Ok(Self { team_id, games, wins })
    }

    pub fn team_id(&self) -> &str {
        &self.team_id
    }

    pub fn games(&self) -> &[(u32, u32)] {
        &self.games
    }

    pub fn n_games(&self) -> usize {
        self.games.len()
    }

    pub fn wins(&self) -> u32 {
        self.wins
    }

    pub fn scored(&self) -> Vec<u32> {
        self.games.iter().map(|&(rs, _)| rs).collect()
    }

    pub fn allowed(&self) -> Vec<u32> {
        self.games.iter().map(|&(_, ra)| ra).collect()
    }

    pub fn rs_mean(&self) -> f64 {
        mean_u32(&self.scored())
    }

    pub fn ra_mean(&self) -> f64 {
        mean_u32(&self.allowed())
    }
}

fn mean_u32(xs: &[u32]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().map(|&x| x as f64).sum::<f64>() / xs.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitMethod {
    LeastSquares,
    MaxLikelihood,
}

impl std::fmt::Display for FitMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitMethod::LeastSquares => write!(f, "ls"),
            FitMethod::MaxLikelihood => write!(f, "mle"),
        }
    }
}

impl std::str::FromStr for FitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ls" | "least-squares" => Ok(FitMethod::LeastSquares),
            "mle" | "max-likelihood" => Ok(FitMethod::MaxLikelihood),
            other => Err(Error::Input(format!("unknown fit method {other:?}"))),
        }
    }
}

/// Knobs for the per-team fits. Every field is overridable; the defaults
/// reproduce the standard analysis.
#[derive(Debug, Clone)]
pub struct FitConfig {
    /// Bin scheme used for both runs scored and allowed.
    pub scheme: BinScheme,
    /// Shift parameter, fixed during the fit.
    pub beta: f64,
    /// Fix the shape instead of estimating it.
    pub pinned_gamma: Option<f64>,
    /// Shape values seeding the multi-start; a fixed grid keeps fits
    /// deterministic.
    pub gamma_starts: Vec<f64>,
    /// Objective-spread tolerance handed to the simplex optimizer.
    pub tol: f64,
    /// Evaluation budget per optimizer run.
    pub max_evals: usize,
    /// Seasons shorter than this are fitted anyway but flagged.
    pub min_games: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            scheme: default_fit_bins(),
            beta: -0.5,
            pinned_gamma: None,
            gamma_starts: vec![1.5, 1.8, 2.1],
            tol: 1e-8,
            max_evals: 10_000,
            min_games: 20,
        }
    }
}

/// Fitted parameters plus convergence metadata.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub alpha_rs: f64,
    pub alpha_ra: f64,
    pub gamma: f64,
    pub beta: f64,
    /// Sum of squared errors for least squares; log-likelihood for MLE.
    pub objective: f64,
    pub method: FitMethod,
    /// Simplex iterations spent across multi-starts and polish runs.
    pub iterations: usize,
    /// True only if the optimizer settled and ±1e-6 parameter perturbations
    /// fail to improve the objective by more than 1e-9.
    pub converged: bool,
    /// Fitted parameters ran away to implausible magnitudes, which happens
    /// on degenerate data such as a single occupied bin.
    pub at_boundary: bool,
    /// Season shorter than `FitConfig::min_games`.
    pub low_sample: bool,
}

impl FitResult {
    pub fn params_rs(&self) -> WeibullParams {
        WeibullParams::new(self.alpha_rs, self.beta, self.gamma)
            .expect("fitted parameters are positive")
    }

    pub fn params_ra(&self) -> WeibullParams {
        WeibullParams::new(self.alpha_ra, self.beta, self.gamma)
            .expect("fitted parameters are positive")
    }

    /// Mean of the fitted runs-scored Weibull.
    pub fn predicted_rs_mean(&self) -> f64 {
        self.params_rs().mean()
    }

    /// Mean of the fitted runs-allowed Weibull.
    pub fn predicted_ra_mean(&self) -> f64 {
        self.params_ra().mean()
    }

    /// Closed-form winning percentage implied by the fitted parameters.
    pub fn win_probability(&self) -> f64 {
        pythag_wp(
            self.predicted_rs_mean(),
            self.predicted_ra_mean(),
            self.beta,
            self.gamma,
        )
        .expect("fitted means lie above the shift")
    }
}

fn check_shared_scheme(rs: &BinnedCounts, ra: &BinnedCounts) -> Result<()> {
    if rs.scheme() != ra.scheme() {
        return Err(Error::Input(
            "runs-scored and runs-allowed counts use different bin schemes".into(),
        ));
    }
    if rs.total_games() != ra.total_games() {
        return Err(Error::Input(format!(
            "runs-scored and runs-allowed counts cover different game totals: {} vs {}",
            rs.total_games(),
            ra.total_games()
        )));
    }
    Ok(())
}

/// `Σ_k (RS_obs(k) − G·A_RS(k))² + Σ_k (RA_obs(k) − G·A_RA(k))²` with
/// `G` the shared game count.
pub fn least_squares_objective(
    rs: &BinnedCounts,
    ra: &BinnedCounts,
    alpha_rs: f64,
    alpha_ra: f64,
    beta: f64,
    gamma: f64,
) -> Result<f64> {
    check_shared_scheme(rs, ra)?;
    let p_rs = WeibullParams::new(alpha_rs, beta, gamma)?;
    let p_ra = WeibullParams::new(alpha_ra, beta, gamma)?;
    let g_total = rs.total_games() as f64;
    let mut sum = 0.0;
    for (counts, p) in [(rs.counts(), &p_rs), (ra.counts(), &p_ra)] {
        for (&obs, area) in counts.iter().zip(bin_areas(p, rs.scheme())) {
            let r = obs as f64 - g_total * area;
            sum += r * r;
        }
    }
    Ok(sum)
}

/// `Σ_k RS_obs(k)·ln A_RS(k) + Σ_k RA_obs(k)·ln A_RA(k)`, the multinomial
/// log-likelihood without its parameter-free coefficients.
///
/// A bin with observed games but zero model area yields `−∞`, never NaN.
pub fn log_likelihood(
    rs: &BinnedCounts,
    ra: &BinnedCounts,
    alpha_rs: f64,
    alpha_ra: f64,
    beta: f64,
    gamma: f64,
) -> Result<f64> {
    check_shared_scheme(rs, ra)?;
    let p_rs = WeibullParams::new(alpha_rs, beta, gamma)?;
    let p_ra = WeibullParams::new(alpha_ra, beta, gamma)?;
    let mut sum = 0.0;
    for (counts, p) in [(rs.counts(), &p_rs), (ra.counts(), &p_ra)] {
        for (&obs, area) in counts.iter().zip(bin_areas(p, rs.scheme())) {
            if obs == 0 {
                continue;
            }
            let area = area.max(0.0);
            if area == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            sum += obs as f64 * area.ln();
        }
    }
    Ok(sum)
}

/// Fitted shapes outside this range mark a boundary solution.
const GAMMA_SANE: (f64, f64) = (0.05, 50.0);
const ALPHA_SANE: (f64, f64) = (1e-3, 1e3);
/// Perturbation used to certify a local optimum, and the improvement that
/// disqualifies one.
const CERTIFY_STEP: f64 = 1e-6;
const CERTIFY_GAIN: f64 = 1e-9;

/// Best fit by the method of least squares with the shift held at
/// `config.beta` and one shared shape.
pub fn fit_least_squares(team: &TeamSeason, config: &FitConfig) -> Result<FitResult> {
    run_fit(team, config, FitMethod::LeastSquares)
}

/// Best fit by maximum likelihood; same parameterization as least squares.
pub fn fit_mle(team: &TeamSeason, config: &FitConfig) -> Result<FitResult> {
    run_fit(team, config, FitMethod::MaxLikelihood)
}

fn run_fit(team: &TeamSeason, config: &FitConfig, method: FitMethod) -> Result<FitResult> {
    if team.n_games() == 0 {
        return Err(Error::Degenerate(format!(
            "team {}: cannot fit an empty season",
            team.team_id()
        )));
    }
    let rs_counts = bin_counts(&team.scored(), &config.scheme)?;
    let ra_counts = bin_counts(&team.allowed(), &config.scheme)?;
    let g_total = team.n_games() as f64;
    let rs_mean = team.rs_mean();
    let ra_mean = team.ra_mean();

    // Minimized objective: the SSE itself, or the negated log-likelihood.
    let natural = |a_rs: f64, a_ra: f64, g: f64| -> f64 {
        let value = match method {
            FitMethod::LeastSquares => least_squares_objective(
                &rs_counts, &ra_counts, a_rs, a_ra, config.beta, g,
            ),
            FitMethod::MaxLikelihood => log_likelihood(
                &rs_counts, &ra_counts, a_rs, a_ra, config.beta, g,
            )
            .map(|ll| -ll),
        };
        value.unwrap_or(f64::INFINITY)
    };

    // Optimize in log-space so positivity is structural.
    let pinned = config.pinned_gamma;
    let decode = move |z: &[f64]| -> (f64, f64, f64) {
        let g = pinned.unwrap_or_else(|| z[2].exp());
        (z[0].exp(), z[1].exp(), g)
    };
    let ln_obj = |z: &[f64]| -> f64 {
        let (a_rs, a_ra, g) = decode(z);
        if !a_rs.is_finite() || !a_ra.is_finite() || !g.is_finite() {
            return f64::INFINITY;
        }
        natural(a_rs, a_ra, g)
    };

    let starts: Vec<f64> = match pinned {
        Some(g) => {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::Domain(format!("pinned gamma must be positive, got {g}")));
            }
            vec![g]
        }
        None => {
            if config.gamma_starts.is_empty() {
                return Err(Error::Input("gamma_starts must not be empty".into()));
            }
            config.gamma_starts.clone()
        }
    };

    let nm = NelderMeadOptions {
        tol: config.tol,
        max_evals: config.max_evals,
        initial_step: 0.15,
    };

    let mut best: Option<OptimOutcome> = None;
    let mut iterations = 0usize;
    for &g0 in &starts {
        // Method-of-moments start: scales matching the observed means.
        let a_rs0 = alpha_from_mean(rs_mean, config.beta, g0)?;
        let a_ra0 = alpha_from_mean(ra_mean, config.beta, g0)?;
        let mut x0 = vec![a_rs0.ln(), a_ra0.ln()];
        if pinned.is_none() {
            x0.push(g0.ln());
        }
        let out = nelder_mead(&ln_obj, &x0, &nm);
        iterations += out.iterations;
        if best.as_ref().map_or(true, |b| out.value < b.value) {
            best = Some(out);
        }
    }
    let mut best = best.expect("at least one start");

    // Restart with a tightening simplex to sharpen the optimum.
    for step in [1e-3, 1e-5] {
        let polish = nelder_mead(
            &ln_obj,
            &best.x,
            &NelderMeadOptions {
                tol: config.tol.min(1e-10),
                max_evals: config.max_evals,
                initial_step: step,
            },
        );
        iterations += polish.iterations;
        if polish.value <= best.value {
            best = polish;
        }
    }

    let (alpha_rs, alpha_ra, gamma) = decode(&best.x);
    let at_boundary = !(GAMMA_SANE.0..=GAMMA_SANE.1).contains(&gamma)
        || !(ALPHA_SANE.0..=ALPHA_SANE.1).contains(&alpha_rs)
        || !(ALPHA_SANE.0..=ALPHA_SANE.1).contains(&alpha_ra)
        || !best.value.is_finite();

    // Certify the optimum in natural parameter space.
    let mut certified = best.converged && !at_boundary;
    if certified {
        'outer: for dim in 0..3 {
            if dim == 2 && pinned.is_some() {
                continue;
            }
            for sign in [-1.0, 1.0] {
                let mut p = [alpha_rs, alpha_ra, gamma];
                p[dim] += sign * CERTIFY_STEP;
                if p[dim] <= 0.0 {
                    continue;
                }
                if natural(p[0], p[1], p[2]) < best.value - CERTIFY_GAIN {
                    certified = false;
                    break 'outer;
                }
            }
        }
    }

    let objective = match method {
        FitMethod::LeastSquares => best.value,
        FitMethod::MaxLikelihood => -best.value,
    };

    Ok(FitResult {
        alpha_rs,
        alpha_ra,
        gamma,
        beta: config.beta,
        objective,
        method,
        iterations,
        converged: certified,
        at_boundary,
        low_sample: team.n_games() < config.min_games,
    })
}
