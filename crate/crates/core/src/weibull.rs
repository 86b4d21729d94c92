//! Three-parameter Weibull run distributions and the closed-form win
//! probability for a matchup of two Weibulls sharing shift and shape.

use crate::error::{Error, Result};
use crate::gamma::gamma_pos;

/// Parameters of a shifted Weibull: scale `alpha`, shift `beta`, shape `gamma`.
///
/// The density is `(γ/α) ((x−β)/α)^(γ−1) e^(−((x−β)/α)^γ)` for `x ≥ β` and 0
/// below the shift. `γ = 1` is the exponential distribution, `γ = 2` the
/// Rayleigh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl WeibullParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        if !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be finite, got {beta}")));
        }
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Probability density at `x`; zero below the shift `β`.
    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.beta {
            return 0.0;
        }
        let z = (x - self.beta) / self.alpha;
        if z == 0.0 {
            // Limit at the support boundary depends on the shape.
            return if self.gamma < 1.0 {
                f64::INFINITY
            } else if self.gamma == 1.0 {
                1.0 / self.alpha
            } else {
                0.0
            };
        }
        (self.gamma / self.alpha) * z.powf(self.gamma - 1.0) * (-z.powf(self.gamma)).exp()
    }

    /// Cumulative distribution `1 − e^(−((x−β)/α)^γ)` for `x ≥ β`, else 0.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.beta {
            return 0.0;
        }
        let z = (x - self.beta) / self.alpha;
        1.0 - (-z.powf(self.gamma)).exp()
    }

    /// Mean `α Γ(1 + 1/γ) + β`.
    pub fn mean(&self) -> f64 {
        self.alpha * gamma_pos(1.0 + 1.0 / self.gamma) + self.beta
    }

    /// Variance `α² Γ(1 + 2/γ) − α² Γ(1 + 1/γ)²`; independent of the shift.
    pub fn variance(&self) -> f64 {
        let g1 = gamma_pos(1.0 + 1.0 / self.gamma);
        let g2 = gamma_pos(1.0 + 2.0 / self.gamma);
        (self.alpha * self.alpha * (g2 - g1 * g1)).max(0.0)
    }
}

/// The scale that gives a Weibull with shift `beta` and shape `gamma` the
/// requested mean: `α = (mean − β) / Γ(1 + 1/γ)`.
pub fn alpha_from_mean(target_mean: f64, beta: f64, gamma: f64) -> Result<f64> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    if !(target_mean > beta) {
        return Err(Error::Domain(format!(
            "no positive scale reaches mean {target_mean} with shift {beta}"
        )));
    }
    Ok((target_mean - beta) / gamma_pos(1.0 + 1.0 / gamma))
}

/// Runs-scored and runs-allowed Weibulls sharing shift and shape, the setting
/// in which the win probability has a closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchupParams {
    rs: WeibullParams,
    ra: WeibullParams,
}

impl MatchupParams {
    pub fn new(alpha_rs: f64, alpha_ra: f64, beta: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            rs: WeibullParams::new(alpha_rs, beta, gamma)?,
            ra: WeibullParams::new(alpha_ra, beta, gamma)?,
        })
    }

    /// Builds the matchup whose component means are the given run averages.
    pub fn from_means(rs_mean: f64, ra_mean: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(
            alpha_from_mean(rs_mean, beta, gamma)?,
            alpha_from_mean(ra_mean, beta, gamma)?,
            beta,
            gamma,
        )
    }

    /// Pairs two existing Weibulls, enforcing the shared shift and shape.
    pub fn from_parts(rs: WeibullParams, ra: WeibullParams) -> Result<Self> {
        if rs.beta() != ra.beta() {
            return Err(Error::Input(format!(
                "matchup requires a shared shift: {} vs {}",
                rs.beta(),
                ra.beta()
            )));
        }
        if rs.gamma() != ra.gamma() {
            return Err(Error::Input(format!(
                "matchup requires a shared shape: {} vs {}",
                rs.gamma(),
                ra.gamma()
            )));
        }
        Ok(Self { rs, ra })
    }

    pub fn rs(&self) -> &WeibullParams {
        &self.rs
    }

    pub fn ra(&self) -> &WeibullParams {
        &self.ra
    }

    pub fn beta(&self) -> f64 {
        self.rs.beta()
    }

    pub fn gamma(&self) -> f64 {
        self.rs.gamma()
    }

    /// Probability that a draw from the runs-scored Weibull exceeds one from
    /// the runs-allowed Weibull: `α_RS^γ / (α_RS^γ + α_RA^γ)`.
    pub fn win_probability(&self) -> f64 {
        scale_free_split(self.rs.alpha(), self.ra.alpha(), self.gamma())
    }
}

/// The Pythagorean winning percentage
/// `(RS−β)^γ / ((RS−β)^γ + (RA−β)^γ)` from mean runs scored and allowed.
///
/// The formula depends only on the shifted values `RS−β` and `RA−β`, so with
/// `β = 0` season totals and per-game averages give identical results.
pub fn pythag_wp(rs_mean: f64, ra_mean: f64, beta: f64, gamma: f64) -> Result<f64> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    if !(rs_mean > beta) || !(ra_mean > beta) {
        return Err(Error::Domain(format!(
            "pythag_wp requires both means above the shift {beta}, got RS = {rs_mean}, RA = {ra_mean}"
        )));
    }
    Ok(scale_free_split(rs_mean - beta, ra_mean - beta, gamma))
}

/// `x^γ / (x^γ + y^γ)` computed as `1 / (1 + (y/x)^γ)` on the smaller side,
/// which avoids overflow for extreme ratios and makes the two orderings sum
/// to exactly 1.
fn scale_free_split(x: f64, y: f64, gamma: f64) -> f64 {
    if x == y {
        return 0.5;
    }
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    let minority = 1.0 / (1.0 + (hi / lo).powf(gamma));
    if x < y {
        minority
    } else {
        1.0 - minority
    }
}

/// Head-to-head estimate for a team of strength `a` beating a team of
/// strength `b`: `a(1−b) / (a(1−b) + (1−a)b)`.
pub fn log5(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!(
            "log5 requires strengths strictly inside (0, 1), got a = {a}, b = {b}"
        )));
    }
    let num = a * (1.0 - b);
    Ok(num / (num + (1.0 - a) * b))
}
