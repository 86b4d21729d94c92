//! Season-level prediction: wins from winning percentage, the value of
//! marginal runs scored or prevented, and the linearized predictor with
//! slope `γ / (4 R_total)`.

use crate::error::{Error, Result};
use crate::weibull::pythag_wp;

use std::io::{self, Write};

/// League context for run-value and linearization questions.
///
/// The run-value surfaces conventionally use `beta = 0`, where the winning
/// percentage depends only on the ratio of runs and totals or per-game
/// averages are interchangeable; fit-derived predictions use `beta = -0.5`.
#[derive(Debug, Clone, Copy)]
pub struct RunEnvironment {
    /// League-average total runs per team per season.
    pub r_total: f64,
    pub gamma: f64,
    pub games_per_season: u32,
    pub beta: f64,
}

impl RunEnvironment {
    pub fn new(r_total: f64, gamma: f64) -> Result<Self> {
        if !r_total.is_finite() || r_total <= 0.0 {
            return Err(Error::Domain(format!("r_total must be positive, got {r_total}")));
        }
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self {
            r_total,
            gamma,
            games_per_season: 162,
            beta: 0.0,
        })
    }

    pub fn with_games(mut self, games: u32) -> Self {
        self.games_per_season = games;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }
}

/// Expected wins from a winning percentage over a schedule.
pub fn predicted_wins(wp: f64, games: u32) -> f64 {
    wp * games as f64
}

/// `(observed − predicted, |observed − predicted|)`.
pub fn games_off(observed_wins: u32, predicted_wins: f64) -> (f64, f64) {
    let signed = observed_wins as f64 - predicted_wins;
    (signed, signed.abs())
}

fn p_win(x: f64, y: f64, env: &RunEnvironment) -> Result<f64> {
    pythag_wp(x, y, env.beta, env.gamma)
}

/// Extra wins per season from scoring `s` more runs at production level
/// `(x, y)`: `games × (P(x+s, y) − P(x, y))`.
pub fn marginal_wins_scoring(x: f64, y: f64, s: f64, env: &RunEnvironment) -> Result<f64> {
    Ok(env.games_per_season as f64 * (p_win(x + s, y, env)? - p_win(x, y, env)?))
}

/// Extra wins per season from allowing `s` fewer runs:
/// `games × (P(x, y−s) − P(x, y))`. The reduced total must stay above the
/// shift.
pub fn marginal_wins_preventing(x: f64, y: f64, s: f64, env: &RunEnvironment) -> Result<f64> {
    Ok(env.games_per_season as f64 * (p_win(x, y - s, env)? - p_win(x, y, env)?))
}

/// Inclusive numeric grid for surface evaluation.
#[derive(Debug, Clone, Copy)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(Error::Input(format!(
                "invalid grid range [{start}, {stop}] step {step}"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// The standard run-total window: 600 through 800 in steps of 5.
    pub fn default_runs() -> Self {
        Self {
            start: 600.0,
            stop: 800.0,
            step: 5.0,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step).round() as usize;
        (0..=n)
            .map(|i| self.start + i as f64 * self.step)
            .filter(|&v| v <= self.stop + 1e-9 * self.step)
            .collect()
    }
}

/// Which marginal-run surface to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    /// Wins gained by scoring `s` more runs.
    Scoring,
    /// Wins gained by preventing `s` runs.
    Preventing,
    /// Scoring minus preventing.
    Difference,
}

/// Win deltas over a grid of (runs scored, runs allowed) totals.
#[derive(Debug, Clone)]
pub struct WinValueGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `values[i][j]` is the delta at `(xs[j], ys[i])`.
    pub values: Vec<Vec<f64>>,
}

impl WinValueGrid {
    /// Matrix CSV: x grid as the header row, y grid as the first column.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "y\\x")?;
        for x in &self.xs {
            write!(w, ",{}", crate::report::format_sig6(*x))?;
        }
        writeln!(w)?;
        for (y, row) in self.ys.iter().zip(&self.values) {
            write!(w, "{}", crate::report::format_sig6(*y))?;
            for v in row {
                write!(w, ",{}", crate::report::format_sig6(*v))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Evaluates one marginal-run surface over the given grids.
pub fn win_value_surface(
    kind: SurfaceKind,
    xs: &GridRange,
    ys: &GridRange,
    s: f64,
    env: &RunEnvironment,
) -> Result<WinValueGrid> {
    let x_points = xs.points();
    let y_points = ys.points();
    let mut values = Vec::with_capacity(y_points.len());
    for &y in &y_points {
        let mut row = Vec::with_capacity(x_points.len());
        for &x in &x_points {
            let v = match kind {
                SurfaceKind::Scoring => marginal_wins_scoring(x, y, s, env)?,
                SurfaceKind::Preventing => marginal_wins_preventing(x, y, s, env)?,
                SurfaceKind::Difference => {
                    marginal_wins_scoring(x, y, s, env)? - marginal_wins_preventing(x, y, s, env)?
                }
            };
            row.push(v);
        }
        values.push(row);
    }
    Ok(WinValueGrid {
        xs: x_points,
        ys: y_points,
        values,
    })
}

/// Scoring-minus-preventing surface, positive where scoring runs is worth
/// more than saving them.
pub fn score_vs_prevent_surface(
    xs: &GridRange,
    ys: &GridRange,
    s: f64,
    env: &RunEnvironment,
) -> Result<WinValueGrid> {
    win_value_surface(SurfaceKind::Difference, xs, ys, s, env)
}

/// Theoretical slope of the linear winning-percentage predictor:
/// `B = γ / (4 R_total)`.
pub fn slope_b(env: &RunEnvironment) -> f64 {
    env.gamma / (4.0 * env.r_total)
}

/// A linear winning-percentage estimate, clamped into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearWp {
    pub value: f64,
    pub clamped: bool,
}

/// `0.500 + B (RS − RA)` on season totals, clamped with a flag since the
/// linear form is unbounded.
pub fn linear_wp(rs_total: f64, ra_total: f64, b: f64) -> LinearWp {
    let raw = 0.5 + b * (rs_total - ra_total);
    let value = raw.clamp(0.0, 1.0);
    LinearWp {
        value,
        clamped: value != raw,
    }
}

/// Absolute gap between the full formula and its linearization at the
/// league expansion point; the Taylor remainder that bounds where the linear
/// model is trustworthy.
pub fn linearization_error(rs_total: f64, ra_total: f64, env: &RunEnvironment) -> Result<f64> {
    let exact = p_win(rs_total, ra_total, env)?;
    let linear = linear_wp(rs_total, ra_total, slope_b(env)).value;
    Ok((exact - linear).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env_2012() -> RunEnvironment {
        RunEnvironment::new(700.567, 1.83).unwrap()
    }

    #[test]
    fn predicted_wins_examples() {
        assert_eq!(predicted_wins(0.5, 162), 81.0);
        assert!((predicted_wins(0.602, 162) - 97.5).abs() < 0.05);
        assert!((predicted_wins(0.496, 162) - 80.3).abs() < 0.05);
    }

    #[test]
    fn games_off_examples() {
        assert_eq!(games_off(98, 97.5), (0.5, 0.5));
        assert_eq!(games_off(81, 81.0), (0.0, 0.0));
        let (signed, abs) = games_off(79, 80.3);
        assert!((signed + 1.3).abs() < 1e-12);
        assert!((abs - 1.3).abs() < 1e-12);
    }

    #[test]
    fn marginal_scoring_zero_shift() {
        let env = env_2012();
        assert_eq!(marginal_wins_scoring(700.0, 650.0, 0.0, &env).unwrap(), 0.0);
        assert_eq!(
            marginal_wins_preventing(700.0, 650.0, 0.0, &env).unwrap(),
            0.0
        );
    }

    #[test]
    fn ten_runs_about_one_win() {
        let env = env_2012();
        let w = marginal_wins_scoring(700.0, 700.0, 10.0, &env).unwrap();
        assert!((w - 1.05).abs() < 0.01, "got {w}");
    }

    #[test]
    fn preventing_beats_scoring_at_parity() {
        let env = env_2012();
        let score = marginal_wins_scoring(700.0, 700.0, 10.0, &env).unwrap();
        let prevent = marginal_wins_preventing(700.0, 700.0, 10.0, &env).unwrap();
        assert!(prevent > score, "prevent {prevent} vs score {score}");
    }

    #[test]
    fn marginals_positive_for_positive_s() {
        let env = env_2012();
        for &(x, y) in &[(600.0, 800.0), (700.0, 700.0), (800.0, 620.0)] {
            assert!(marginal_wins_scoring(x, y, 10.0, &env).unwrap() > 0.0);
            assert!(marginal_wins_preventing(x, y, 10.0, &env).unwrap() > 0.0);
        }
    }

    #[test]
    fn preventing_domain_error() {
        let env = env_2012();
        assert!(marginal_wins_preventing(700.0, 5.0, 10.0, &env).is_err());
    }

    #[test]
    fn surface_sign_pattern_and_definition() {
        let env = env_2012();
        let xs = GridRange::new(600.0, 800.0, 50.0).unwrap();
        let ys = GridRange::new(600.0, 800.0, 50.0).unwrap();
        let grid = score_vs_prevent_surface(&xs, &ys, 10.0, &env).unwrap();

        // Upper-left region (low scoring, high allowed): scoring is worth
        // more. Lower-right: preventing wins out.
        let x_lo = 0;
        let x_hi = grid.xs.len() - 1;
        let y_lo = 0;
        let y_hi = grid.ys.len() - 1;
        assert!(grid.values[y_hi][x_lo] > 0.0, "x≪y cell should be positive");
        assert!(grid.values[y_lo][x_hi] < 0.0, "x≫y cell should be negative");

        for (i, &y) in grid.ys.iter().enumerate() {
            for (j, &x) in grid.xs.iter().enumerate() {
                let direct = marginal_wins_scoring(x, y, 10.0, &env).unwrap()
                    - marginal_wins_preventing(x, y, 10.0, &env).unwrap();
                assert!((grid.values[i][j] - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_s_gives_zero_surface() {
        let env = env_2012();
        let r = GridRange::new(650.0, 750.0, 25.0).unwrap();
        let grid = score_vs_prevent_surface(&r, &r, 0.0, &env).unwrap();
        assert!(grid
            .values
            .iter()
            .all(|row| row.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn slope_matches_quoted_league_value() {
        let b = slope_b(&env_2012());
        assert!((b - 0.000653).abs() < 5e-6, "B = {b}");
    }

    #[test]
    fn slope_exact_arithmetic_and_homogeneity() {
        let env = RunEnvironment::new(500.0, 2.0).unwrap();
        assert_eq!(slope_b(&env), 0.001);
        let doubled = RunEnvironment::new(1000.0, 2.0).unwrap();
        assert_eq!(slope_b(&doubled), 0.0005);
    }

    #[test]
    fn slope_is_central_derivative_at_parity() {
        let env = env_2012();
        let r = env.r_total;
        let h = 1e-3 * r;
        let fd = (pythag_wp(r + h, r, 0.0, env.gamma).unwrap()
            - pythag_wp(r - h, r, 0.0, env.gamma).unwrap())
            / (2.0 * h);
        let b = slope_b(&env);
        assert!(((fd - b) / b).abs() < 1e-6, "fd {fd} vs B {b}");
    }

    #[test]
    fn linear_wp_identities() {
        assert_eq!(linear_wp(700.0, 700.0, 0.000653).value, 0.5);
        let nats = linear_wp(731.0, 594.0, 0.000653);
        assert!((nats.value - 0.5895).abs() < 1e-4, "got {}", nats.value);
        assert!(!nats.clamped);

        let a = linear_wp(740.0, 660.0, 0.000653);
        let b = linear_wp(660.0, 740.0, 0.000653);
        assert!((a.value + b.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn linear_wp_clamps_and_flags() {
        let out = linear_wp(5000.0, 0.0, 0.000653);
        assert_eq!(out.value, 1.0);
        assert!(out.clamped);
        let out = linear_wp(0.0, 5000.0, 0.000653);
        assert_eq!(out.value, 0.0);
        assert!(out.clamped);
    }

    #[test]
    fn linearization_error_vanishes_at_expansion_point() {
        let env = env_2012();
        assert_eq!(
            linearization_error(env.r_total, env.r_total, &env).unwrap(),
            0.0
        );
    }

    #[test]
    fn linearization_error_grows_with_run_gap() {
        let env = env_2012();
        let r = env.r_total;
        let mut last = -1.0;
        for d in [0.0, 10.0, 20.0, 30.0, 40.0, 50.0] {
            let e = linearization_error(r + d / 2.0, r - d / 2.0, &env).unwrap();
            assert!(e >= last, "error dipped at gap {d}: {e} < {last}");
            last = e;
        }
    }

    #[test]
    fn scale_consistency_of_win_deltas() {
        // P is homogeneous of degree zero at beta = 0: scaling x, y, s and
        // r_total together leaves win deltas unchanged.
        let env = env_2012();
        let scaled = RunEnvironment::new(env.r_total * 3.0, env.gamma).unwrap();
        let a = marginal_wins_scoring(680.0, 720.0, 10.0, &env).unwrap();
        let b = marginal_wins_scoring(3.0 * 680.0, 3.0 * 720.0, 30.0, &scaled).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn grid_points_inclusive() {
        let r = GridRange::new(600.0, 800.0, 5.0).unwrap();
        let pts = r.points();
        assert_eq!(pts.len(), 41);
        assert_eq!(pts[0], 600.0);
        assert_eq!(*pts.last().unwrap(), 800.0);
        assert!(GridRange::new(800.0, 600.0, 5.0).is_err());
        assert!(GridRange::new(600.0, 800.0, 0.0).is_err());
    }

    #[test]
    fn surface_csv_shape() {
        let env = env_2012();
        let r = GridRange::new(600.0, 610.0, 5.0).unwrap();
        let grid = score_vs_prevent_surface(&r, &r, 10.0, &env).unwrap();
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4); // header + 3 y rows
        assert!(lines[0].starts_with("y\\x,600,605,610"));
        assert_eq!(lines[1].split(',').count(), 4);
    }
}
