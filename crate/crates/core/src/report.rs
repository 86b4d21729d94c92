//! Season-wide orchestration: per-team fits, tests, and predictions rolled
//! into a report with league summary statistics. Reports emit as CSV
//! (canonical, round-trippable) or JSON.

use crate::binning::bin_counts;
use crate::error::{Error, Result};
use crate::fit::{fit_least_squares, fit_mle, FitConfig, FitMethod, FitResult, TeamSeason};
use crate::inference::{
    build_contingency, chisq_gof, chisq_independence, ipf_expected, z_test_runs, ChiSquareResult,
    ZTestResult,
};
use crate::predictor::{games_off, predicted_wins};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Row flags: convergence problems.
pub const FLAG_FIT_ERROR: &str = "fit_error";
pub const FLAG_FIT_NOT_CONVERGED: &str = "fit_not_converged";
pub const FLAG_FIT_AT_BOUNDARY: &str = "fit_at_boundary";
pub const FLAG_IPF_NOT_CONVERGED: &str = "ipf_not_converged";
/// Row flags: data-quality notes that leave the run healthy.
pub const FLAG_LOW_SAMPLE: &str = "low_sample";
pub const FLAG_Z_ERROR: &str = "z_error";
pub const FLAG_GOF_ERROR: &str = "gof_error";
pub const FLAG_GOF_LOW_EXPECTED: &str = "gof_low_expected";
pub const FLAG_INDEPENDENCE_EMPTY_MARGIN: &str = "independence_empty_margin";

/// Configuration for a full season analysis.
#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub method: FitMethod,
    pub fit: FitConfig,
    pub ipf_tol: f64,
    pub ipf_max_iter: usize,
    /// Worker threads for per-team analysis; 0 means automatic.
    pub threads: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            method: FitMethod::LeastSquares,
            fit: FitConfig::default(),
            ipf_tol: 1e-10,
            ipf_max_iter: 10_000,
            threads: 0,
        }
    }
}

/// Everything computed for one team, before flattening into report rows.
#[derive(Debug, Clone)]
pub struct TeamAnalysis {
    pub team_id: String,
    pub games: usize,
    pub obs_wins: u32,
    pub obs_rs_mean: f64,
    pub obs_ra_mean: f64,
    pub fit: Option<FitResult>,
    pub z_rs: Option<ZTestResult>,
    pub z_ra: Option<ZTestResult>,
    pub gof: Option<ChiSquareResult>,
    pub independence: Option<ChiSquareResult>,
    /// Games dropped from the contingency table for landing on the
    /// structural-zero diagonal through a wide bin.
    pub excluded_diagonal_games: u32,
    pub flags: Vec<String>,
}

/// Analyzes one season: fit, z-tests, goodness of fit, independence.
/// Failures in any stage are recorded as flags, never propagated.
pub fn analyze_team(season: &TeamSeason, config: &AnalysisConfig) -> TeamAnalysis {
    let mut flags = Vec::new();

    let fit = match config.method {
        FitMethod::LeastSquares => fit_least_squares(season, &config.fit),
        FitMethod::MaxLikelihood => fit_mle(season, &config.fit),
    };
    let fit = match fit {
        Ok(f) => {
            if !f.converged {
                flags.push(FLAG_FIT_NOT_CONVERGED.to_string());
            }
            if f.at_boundary {
                flags.push(FLAG_FIT_AT_BOUNDARY.to_string());
            }
            if f.low_sample {
                flags.push(FLAG_LOW_SAMPLE.to_string());
            }
            Some(f)
        }
        Err(_) => {
            flags.push(FLAG_FIT_ERROR.to_string());
            None
        }
    };

    let scored = season.scored();
    let allowed = season.allowed();

    let (z_rs, z_ra) = match &fit {
        Some(f) => {
            let zr = z_test_runs(&scored, f.predicted_rs_mean());
            let za = z_test_runs(&allowed, f.predicted_ra_mean());
            if zr.is_err() || za.is_err() {
                flags.push(FLAG_Z_ERROR.to_string());
            }
            (zr.ok(), za.ok())
        }
        None => (None, None),
    };

    let gof = match &fit {
        Some(f) => {
            let res = bin_counts(&scored, &config.fit.scheme)
                .and_then(|rs| {
                    bin_counts(&allowed, &config.fit.scheme).map(|ra| (rs, ra))
                })
                .and_then(|(rs, ra)| chisq_gof(&rs, &ra, f));
            match res {
                Ok(r) => {
                    if r.low_expected_count {
                        flags.push(FLAG_GOF_LOW_EXPECTED.to_string());
                    }
                    Some(r)
                }
                Err(_) => {
                    flags.push(FLAG_GOF_ERROR.to_string());
                    None
                }
            }
        }
        None => None,
    };

    let table = build_contingency(season);
    let excluded = table.excluded_games();
    if excluded > 0 {
        flags.push(format!("diagonal_excluded={excluded}"));
    }
    let independence = match ipf_expected(&table, config.ipf_tol, config.ipf_max_iter) {
        Ok(expected) => match chisq_independence(&table, &expected) {
            Ok(r) => Some(r),
            Err(_) => {
                flags.push(FLAG_INDEPENDENCE_EMPTY_MARGIN.to_string());
                None
            }
        },
        Err(Error::NoConvergence { .. }) => {
            flags.push(FLAG_IPF_NOT_CONVERGED.to_string());
            None
        }
        Err(_) => {
            flags.push(FLAG_INDEPENDENCE_EMPTY_MARGIN.to_string());
            None
        }
    };

    TeamAnalysis {
        team_id: season.team_id().to_string(),
        games: season.n_games(),
        obs_wins: season.wins(),
        obs_rs_mean: season.rs_mean(),
        obs_ra_mean: season.ra_mean(),
        fit,
        z_rs,
        z_ra,
        gof,
        independence,
        excluded_diagonal_games: excluded,
        flags,
    }
}

/// Analyzes every season in parallel, returning results ordered by observed
/// wins descending, then team id.
pub fn analyze_seasons(seasons: &[TeamSeason], config: &AnalysisConfig) -> Vec<TeamAnalysis> {
    let run = || -> Vec<TeamAnalysis> {
        seasons
            .par_iter()
            .map(|s| analyze_team(s, config))
            .collect()
    };
    let mut analyses = if config.threads == 0 {
        run()
    } else {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
        {
            Ok(pool) => pool.install(run),
            Err(_) => seasons.iter().map(|s| analyze_team(s, config)).collect(),
        }
    };
    analyses.sort_by(|a, b| {
        b.obs_wins
            .cmp(&a.obs_wins)
            .then_with(|| a.team_id.cmp(&b.team_id))
    });
    analyses
}

/// One report row per team; column order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamRow {
    pub team_id: String,
    pub obs_wins: u32,
    pub pred_wins: f64,
    pub obs_pct: f64,
    pub pred_pct: f64,
    pub diff_games: f64,
    pub gamma: f64,
    pub z_rs: f64,
    pub z_ra: f64,
    pub gof_chisq: f64,
    pub indep_chisq: f64,
    pub flags: Vec<String>,
}

/// League-level summary, recomputable from the rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeagueSummary {
    pub mean_gamma: f64,
    pub sd_gamma: f64,
    pub mean_abs_games_off: f64,
    pub sd_abs_games_off: f64,
    pub mean_signed_games_off: f64,
    pub teams: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonReport {
    pub rows: Vec<TeamRow>,
    pub league: LeagueSummary,
}

fn mean_and_sample_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

impl SeasonReport {
    pub fn from_analyses(analyses: &[TeamAnalysis]) -> Self {
        let rows: Vec<TeamRow> = analyses
            .iter()
            .map(|a| {
                let (pred_pct, gamma) = match &a.fit {
                    Some(f) => (f.win_probability(), f.gamma),
                    None => (f64::NAN, f64::NAN),
                };
                let pred_wins = predicted_wins(pred_pct, a.games as u32);
                let (diff_games, _) = games_off(a.obs_wins, pred_wins);
                TeamRow {
                    team_id: a.team_id.clone(),
                    obs_wins: a.obs_wins,
                    pred_wins,
                    obs_pct: a.obs_wins as f64 / a.games as f64,
                    pred_pct,
                    diff_games,
                    gamma,
                    z_rs: a.z_rs.as_ref().map_or(f64::NAN, |z| z.statistic),
                    z_ra: a.z_ra.as_ref().map_or(f64::NAN, |z| z.statistic),
                    gof_chisq: a.gof.as_ref().map_or(f64::NAN, |g| g.statistic),
                    indep_chisq: a.independence.as_ref().map_or(f64::NAN, |g| g.statistic),
                    flags: a.flags.clone(),
                }
            })
            .collect();

        let gammas: Vec<f64> = rows.iter().map(|r| r.gamma).filter(|g| g.is_finite()).collect();
        let signed: Vec<f64> = rows
            .iter()
            .map(|r| r.diff_games)
            .filter(|d| d.is_finite())
            .collect();
        let abs: Vec<f64> = signed.iter().map(|d| d.abs()).collect();
        let (mean_gamma, sd_gamma) = mean_and_sample_sd(&gammas);
        let (mean_abs, sd_abs) = mean_and_sample_sd(&abs);
        let (mean_signed, _) = mean_and_sample_sd(&signed);

        SeasonReport {
            rows,
            league: LeagueSummary {
                mean_gamma,
                sd_gamma,
                mean_abs_games_off: mean_abs,
                sd_abs_games_off: sd_abs,
                mean_signed_games_off: mean_signed,
                teams: analyses.len(),
            },
        }
    }

    /// Any row flagged with a convergence failure (as opposed to a
    /// data-quality note).
    pub fn has_numerical_failure(&self) -> bool {
        self.rows.iter().any(|r| {
            r.flags.iter().any(|f| {
                f == FLAG_FIT_ERROR
                    || f == FLAG_FIT_NOT_CONVERGED
                    || f == FLAG_FIT_AT_BOUNDARY
                    || f == FLAG_IPF_NOT_CONVERGED
            })
        })
    }

    /// Canonical CSV: a row block, a blank line, then the league summary.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "team_id,obs_wins,pred_wins,obs_pct,pred_pct,diff_games,gamma,z_rs,z_ra,gof_chisq,indep_chisq,flags\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.team_id,
                r.obs_wins,
                format_sig6(r.pred_wins),
                format_sig6(r.obs_pct),
                format_sig6(r.pred_pct),
                format_sig6(r.diff_games),
                format_sig6(r.gamma),
                format_sig6(r.z_rs),
                format_sig6(r.z_ra),
                format_sig6(r.gof_chisq),
                format_sig6(r.indep_chisq),
                r.flags.join(";"),
            ));
        }
        out.push('\n');
        out.push_str(
            "mean_gamma,sd_gamma,mean_abs_games_off,sd_abs_games_off,mean_signed_games_off,teams\n",
        );
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_sig6(self.league.mean_gamma),
            format_sig6(self.league.sd_gamma),
            format_sig6(self.league.mean_abs_games_off),
            format_sig6(self.league.sd_abs_games_off),
            format_sig6(self.league.mean_signed_games_off),
            self.league.teams,
        ));
        out
    }

    /// Parses the CSV emitted by [`SeasonReport::to_csv`].
    pub fn from_csv(text: &str) -> Result<SeasonReport> {
        let mut sections = text.split("\n\n");
        let rows_block = sections
            .next()
            .ok_or_else(|| Error::Input("report CSV is empty".into()))?;
        let league_block = sections
            .next()
            .ok_or_else(|| Error::Input("report CSV is missing the league summary".into()))?;

        let mut lines = rows_block.lines();
        let header = lines.next().unwrap_or_default();
        if !header.starts_with("team_id,") {
            return Err(Error::Input(format!("unexpected report header {header:?}")));
        }
        let mut rows = Vec::new();
        for line in lines {
            let f: Vec<&str> = line.splitn(12, ',').collect();
            if f.len() != 12 {
                return Err(Error::Input(format!("bad report row {line:?}")));
            }
            let float = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .map_err(|_| Error::Input(format!("bad float {s:?} in report row")))
            };
            rows.push(TeamRow {
                team_id: f[0].to_string(),
                obs_wins: f[1]
                    .parse()
                    .map_err(|_| Error::Input(format!("bad obs_wins {:?}", f[1])))?,
                pred_wins: float(f[2])?,
                obs_pct: float(f[3])?,
                pred_pct: float(f[4])?,
                diff_games: float(f[5])?,
                gamma: float(f[6])?,
                z_rs: float(f[7])?,
                z_ra: float(f[8])?,
                gof_chisq: float(f[9])?,
                indep_chisq: float(f[10])?,
                flags: if f[11].is_empty() {
                    Vec::new()
                } else {
                    f[11].split(';').map(str::to_string).collect()
                },
            });
        }

        let mut league_lines = league_block.lines();
        let league_header = league_lines.next().unwrap_or_default();
        if !league_header.starts_with("mean_gamma,") {
            return Err(Error::Input(format!(
                "unexpected league header {league_header:?}"
            )));
        }
        let league_row = league_lines
            .next()
            .ok_or_else(|| Error::Input("missing league summary row".into()))?;
        let f: Vec<&str> = league_row.split(',').collect();
        if f.len() != 6 {
            return Err(Error::Input(format!("bad league row {league_row:?}")));
        }
        let float = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Input(format!("bad float {s:?} in league row")))
        };
        Ok(SeasonReport {
            rows,
            league: LeagueSummary {
                mean_gamma: float(f[0])?,
                sd_gamma: float(f[1])?,
                mean_abs_games_off: float(f[2])?,
                sd_abs_games_off: float(f[3])?,
                mean_signed_games_off: float(f[4])?,
                teams: f[5]
                    .parse()
                    .map_err(|_| Error::Input(format!("bad team count {:?}", f[5])))?,
            },
        })
    }

    /// JSON with floats rounded to the same 6 significant digits as the CSV;
    /// non-finite values serialize as null.
    pub fn to_json(&self) -> String {
        let mut rounded = self.clone();
        for r in &mut rounded.rows {
            for v in [
                &mut r.pred_wins,
                &mut r.obs_pct,
                &mut r.pred_pct,
                &mut r.diff_games,
                &mut r.gamma,
                &mut r.z_rs,
                &mut r.z_ra,
                &mut r.gof_chisq,
                &mut r.indep_chisq,
            ] {
                *v = round_sig6(*v);
            }
        }
        rounded.league.mean_gamma = round_sig6(rounded.league.mean_gamma);
        rounded.league.sd_gamma = round_sig6(rounded.league.sd_gamma);
        rounded.league.mean_abs_games_off = round_sig6(rounded.league.mean_abs_games_off);
        rounded.league.sd_abs_games_off = round_sig6(rounded.league.sd_abs_games_off);
        rounded.league.mean_signed_games_off = round_sig6(rounded.league.mean_signed_games_off);
        serde_json::to_string_pretty(&rounded).expect("report serializes")
    }
}

/// Per-team fit and validation report, assembled end to end.
pub fn run_season_analysis(seasons: &[TeamSeason], config: &AnalysisConfig) -> SeasonReport {
    SeasonReport::from_analyses(&analyze_seasons(seasons, config))
}

/// The z-test and χ² view of an analysis (observed vs predicted means and
/// both test statistics per team).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestsRow {
    pub team_id: String,
    pub obs_rs: f64,
    pub pred_rs: f64,
    pub z_rs: f64,
    pub obs_ra: f64,
    pub pred_ra: f64,
    pub z_ra: f64,
    pub gof_chisq: f64,
    pub indep_chisq: f64,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestsReport {
    pub rows: Vec<TestsRow>,
}

impl TestsReport {
    pub fn from_analyses(analyses: &[TeamAnalysis]) -> Self {
        let rows = analyses
            .iter()
            .map(|a| TestsRow {
                team_id: a.team_id.clone(),
                obs_rs: a.obs_rs_mean,
                pred_rs: a.fit.as_ref().map_or(f64::NAN, |f| f.predicted_rs_mean()),
                z_rs: a.z_rs.as_ref().map_or(f64::NAN, |z| z.statistic),
                obs_ra: a.obs_ra_mean,
                pred_ra: a.fit.as_ref().map_or(f64::NAN, |f| f.predicted_ra_mean()),
                z_ra: a.z_ra.as_ref().map_or(f64::NAN, |z| z.statistic),
                gof_chisq: a.gof.as_ref().map_or(f64::NAN, |g| g.statistic),
                indep_chisq: a.independence.as_ref().map_or(f64::NAN, |g| g.statistic),
                flags: a.flags.clone(),
            })
            .collect();
        TestsReport { rows }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "team_id,obs_rs,pred_rs,z_rs,obs_ra,pred_ra,z_ra,gof_chisq,indep_chisq,flags\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.team_id,
                format_sig6(r.obs_rs),
                format_sig6(r.pred_rs),
                format_sig6(r.z_rs),
                format_sig6(r.obs_ra),
                format_sig6(r.pred_ra),
                format_sig6(r.z_ra),
                format_sig6(r.gof_chisq),
                format_sig6(r.indep_chisq),
                r.flags.join(";"),
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut rounded = self.clone();
        for r in &mut rounded.rows {
            for v in [
                &mut r.obs_rs,
                &mut r.pred_rs,
                &mut r.z_rs,
                &mut r.obs_ra,
                &mut r.pred_ra,
                &mut r.z_ra,
                &mut r.gof_chisq,
                &mut r.indep_chisq,
            ] {
                *v = round_sig6(*v);
            }
        }
        serde_json::to_string_pretty(&rounded).expect("report serializes")
    }
}

/// Formats with 6 significant digits, trimming trailing zeros. Reparsing the
/// output and formatting again reproduces the same string.
pub fn format_sig6(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let mut decimals = sig_decimals(x);
    let mut s = format!("{x:.decimals$}");
    // Rounding can push the magnitude across a power of ten ("99.99995" →
    // "100.0000"); reformat once at the new magnitude.
    if let Ok(back) = s.parse::<f64>() {
        let d2 = if back == 0.0 { decimals } else { sig_decimals(back) };
        if d2 != decimals {
            decimals = d2;
            s = format!("{x:.decimals$}");
        }
    }
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn sig_decimals(x: f64) -> usize {
    let magnitude = x.abs().log10().floor() as i64;
    (5 - magnitude).max(0) as usize
}

/// Rounds to 6 significant digits through the canonical text form.
pub fn round_sig6(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format_sig6(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{synthetic_season, SimConfig};
    use crate::weibull::MatchupParams;

    fn synthetic(team: &str, alpha_rs: f64, alpha_ra: f64, seed: u64) -> TeamSeason {
        let cfg = SimConfig {
            matchup: MatchupParams::new(alpha_rs, alpha_ra, -0.5, 1.8).unwrap(),
            n_games: 162,
            seed,
            discretize: true,
        };
        synthetic_season(&cfg, team).unwrap()
    }

    #[test]
    fn format_sig6_cases() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(-0.0), "0");
        assert_eq!(format_sig6(81.0), "81");
        assert_eq!(format_sig6(97.4214), "97.4214");
        assert_eq!(format_sig6(0.602), "0.602");
        assert_eq!(format_sig6(0.000653049), "0.000653049");
        assert_eq!(format_sig6(-0.13), "-0.13");
        assert_eq!(format_sig6(f64::NAN), "NaN");
        assert_eq!(format_sig6(1234567.0), "1234567");
        // Magnitude crossing under rounding stays idempotent.
        let s = format_sig6(99.999999);
        let back: f64 = s.parse().unwrap();
        assert_eq!(format_sig6(back), s);
    }

    #[test]
    fn single_team_report_summary_equals_row() {
        let team = synthetic("SOLO", 5.0, 4.5, 41);
        let report = run_season_analysis(&[team], &AnalysisConfig::default());
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert_eq!(report.league.teams, 1);
        assert!((report.league.mean_gamma - row.gamma).abs() < 1e-12);
        assert!((report.league.mean_signed_games_off - row.diff_games).abs() < 1e-12);
        assert!(
            (report.league.mean_abs_games_off - row.diff_games.abs()).abs() < 1e-12
        );
    }

    #[test]
    fn obs_pct_consistency() {
        let seasons = vec![
            synthetic("AAA", 5.0, 4.5, 1),
            synthetic("BBB", 4.2, 4.8, 2),
        ];
        let report = run_season_analysis(&seasons, &AnalysisConfig::default());
        for (row, season) in report.rows.iter().zip(
            report
                .rows
                .iter()
                .map(|r| seasons.iter().find(|s| s.team_id() == r.team_id).unwrap()),
        ) {
            let want = season.wins() as f64 / season.n_games() as f64;
            assert!((row.obs_pct - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_sorted_by_wins_then_id() {
        let seasons = vec![
            synthetic("CCC", 4.0, 5.0, 3),
            synthetic("AAA", 5.5, 4.0, 4),
            synthetic("BBB", 5.5, 4.0, 4), // identical record to AAA
        ];
        let report = run_season_analysis(&seasons, &AnalysisConfig::default());
        let wins: Vec<u32> = report.rows.iter().map(|r| r.obs_wins).collect();
        assert!(wins.windows(2).all(|w| w[0] >= w[1]), "not descending: {wins:?}");
        let tied: Vec<&str> = report
            .rows
            .iter()
            .filter(|r| r.obs_wins == wins[0])
            .map(|r| r.team_id.as_str())
            .collect();
        assert!(tied.windows(2).all(|w| w[0] <= w[1]), "ties not by id: {tied:?}");
    }

    #[test]
    fn report_is_deterministic() {
        let seasons = vec![
            synthetic("AAA", 5.0, 4.5, 1),
            synthetic("BBB", 4.2, 4.8, 2),
            synthetic("CCC", 4.9, 4.9, 3),
        ];
        let a = run_season_analysis(&seasons, &AnalysisConfig::default());
        let b = run_season_analysis(&seasons, &AnalysisConfig::default());
        assert_eq!(a.to_csv(), b.to_csv());
        // Thread cap must not change results, only scheduling.
        let single = run_season_analysis(
            &seasons,
            &AnalysisConfig {
                threads: 1,
                ..AnalysisConfig::default()
            },
        );
        assert_eq!(a.to_csv(), single.to_csv());
    }

    #[test]
    fn csv_round_trips_exactly() {
        let seasons = vec![
            synthetic("AAA", 5.0, 4.5, 1),
            synthetic("BBB", 4.2, 4.8, 2),
        ];
        let report = run_season_analysis(&seasons, &AnalysisConfig::default());
        let csv = report.to_csv();
        let parsed = SeasonReport::from_csv(&csv).unwrap();
        assert_eq!(parsed.to_csv(), csv);
    }

    #[test]
    fn csv_round_trips_flagged_rows() {
        // A degenerate season produces NaN columns and flags; the text form
        // must survive a parse/emit cycle unchanged.
        let degenerate = TeamSeason::new("DGN", vec![(3, 2); 40]).unwrap();
        let report = run_season_analysis(&[degenerate], &AnalysisConfig::default());
        assert!(report.has_numerical_failure());
        let csv = report.to_csv();
        let parsed = SeasonReport::from_csv(&csv).unwrap();
        assert_eq!(parsed.to_csv(), csv);
    }

    #[test]
    fn json_shape() {
        let team = synthetic("SOLO", 5.0, 4.5, 41);
        let report = run_season_analysis(&[team], &AnalysisConfig::default());
        let json = report.to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value.get("rows").and_then(|r| r.as_array()).is_some());
        assert!(value.get("league").is_some());
        assert_eq!(value["rows"][0]["team_id"], "SOLO");
    }

    #[test]
    fn tests_view_carries_means_and_statistics() {
        let seasons = vec![synthetic("AAA", 5.0, 4.5, 1)];
        let analyses = analyze_seasons(&seasons, &AnalysisConfig::default());
        let tests = TestsReport::from_analyses(&analyses);
        let row = &tests.rows[0];
        assert!((row.obs_rs - seasons[0].rs_mean()).abs() < 1e-12);
        assert!(row.pred_rs.is_finite());
        assert!(row.gof_chisq.is_finite());
        let csv = tests.to_csv();
        assert!(csv.starts_with("team_id,obs_rs,pred_rs,z_rs,obs_ra"));
    }
}
