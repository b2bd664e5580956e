//! Sobolev-type diagnostics for `sin_p(π_p ·)` from its sine coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{coeff_bound, worst_slack, CoeffKind, CoeffTable};
use crate::trig::PExponent;

/// Coefficients below this are treated as quadrature noise.
pub const NOISE_FLOOR: f64 = 1e-13;
/// Smallest index used in the decay regression.
const SLOPE_FROM: usize = 11;
/// Allowance on the fitted slope when comparing it with [`bound_slope`]:
/// the fit sees finite-`j` corrections the asymptotic bound does not.
pub const SLOPE_SLACK: f64 = 0.05;
const SLOPE_MIN_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub p: f64,
    pub rho: f64,
    #[serde(rename = "J")]
    pub cutoff: usize,
    /// `Σ_{j <= J} ⟨j⟩^{2ρ} |a_j|²` with `⟨j⟩² = 1 + j²`.
    pub partial_sum: f64,
    /// Log-log slope of `|a_j|` over odd `j`; `None` when too few
    /// coefficients clear the noise floor (e.g. `p = 2`).
    pub slope_estimate: Option<f64>,
    /// `r(p) = p' + 1/2`, only for `p > 2`.
    pub r_threshold: Option<f64>,
}

fn sine_table(p: f64, cutoff: usize) -> Result<CoeffTable> {
    if cutoff == 0 {
        return Err(Error::domain("J must be >= 1"));
    }
    CoeffTable::compute(&PExponent::new(p)?, CoeffKind::SineA, cutoff)
}

/// `Σ_{odd j <= J} ⟨j⟩^{2ρ} |a_j|²` over an existing sine table.
pub fn sobolev_sum(table: &CoeffTable, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::domain(format!(
            "rho must be finite and >= 0, got {rho}"
        )));
    }
    if table.kind() != CoeffKind::SineA {
        return Err(Error::domain("Sobolev sums use the sine coefficients"));
    }
    Ok(table
        .iter()
        .filter(|(j, _)| j % 2 == 1)
        .map(|(j, c)| (1.0 + (j * j) as f64).powf(rho) * c.value * c.value)
        .sum())
}

pub fn sobolev_partial(p: f64, rho: f64, cutoff: usize) -> Result<f64> {
    sobolev_sum(&sine_table(p, cutoff)?, rho)
}

/// `min_{odd j <= J} (16 π_p² c_p/π³ j^-3 − |a_j|)` for `1 < p < 2`.
pub fn coeff_bound_check_p_less2(p: f64, cutoff: usize) -> Result<f64> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::domain(format!("requires 1 < p < 2, got {p}")));
    }
    worst_slack(&sine_table(p, cutoff)?, 1)
}

/// `min_{odd 3 <= j <= J} (π_p C(p)/π j^-(p'+1) − |a_j|)` for `p > 2`.
pub fn coeff_bound_check_p_greater2(p: f64, cutoff: usize) -> Result<f64> {
    if !(p > 2.0) {
        return Err(Error::domain(format!("requires p > 2, got {p}")));
    }
    if cutoff < 3 {
        return Err(Error::domain(format!("J must be >= 3, got {cutoff}")));
    }
    worst_slack(&sine_table(p, cutoff)?, 3)
}

/// Least-squares slope of `log|a_j|` against `log j` over odd
/// `11 <= j <= J` with `|a_j|` above [`NOISE_FLOOR`].
pub fn slope_from_table(table: &CoeffTable) -> Result<f64> {
    let points: Vec<(f64, f64)> = table
        .iter()
        .filter(|&(j, c)| j % 2 == 1 && j >= SLOPE_FROM && c.value.abs() > NOISE_FLOOR)
        .map(|(j, c)| ((j as f64).ln(), c.value.abs().ln()))
        .collect();
    if points.len() < SLOPE_MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} coefficients above {NOISE_FLOOR:e} in [{SLOPE_FROM}, {}]",
            points.len(),
            table.j_max()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

pub fn decay_slope(p: f64, j_max: usize) -> Result<f64> {
    if j_max < 51 {
        return Err(Error::domain(format!("Jmax must be >= 51, got {j_max}")));
    }
    slope_from_table(&sine_table(p, j_max)?)
}

/// The one-sided slope the proven bounds allow: `−(p'+1)` for `p > 2`, `−3`
/// for `p < 2`.
pub fn bound_slope(p: f64) -> Option<f64> {
    if p > 2.0 {
        Some(-(p / (p - 1.0) + 1.0))
    } else if p < 2.0 && p > 1.0 {
        Some(-3.0)
    } else {
        None
    }
}

/// `r(p) = p' + 1/2` for `p > 2`.
pub fn r_threshold(p: f64) -> Option<f64> {
    (p > 2.0).then(|| p / (p - 1.0) + 0.5)
}

pub fn regularity_report(p: f64, rho: f64, cutoff: usize) -> Result<RegularityReport> {
    report_from_table(&sine_table(p, cutoff)?, rho)
}

/// [`regularity_report`] on an existing sine table (`J = j_max`).
pub fn report_from_table(table: &CoeffTable, rho: f64) -> Result<RegularityReport> {
    let p = table.exponent().p();
    let cutoff = table.j_max();
    let slope_estimate = match slope_from_table(table) {
        Ok(s) => Some(s),
        Err(Error::InsufficientData(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(RegularityReport {
        p,
        rho,
        cutoff,
        partial_sum: sobolev_sum(table, rho)?,
        slope_estimate,
        r_threshold: r_threshold(p),
    })
}

/// Largest ratio `⟨j⟩^{2ρ}|a_j|² / (K² j^{2ρ−2p'−2})` over odd `3 <= j <= J`,
/// with `K j^-(p'+1)` the `p > 2` bound on `|a_j|`. Whenever that bound
/// holds the ratio is at most `(1 + 1/9)^ρ`.
pub fn increment_domination(p: f64, rho: f64, cutoff: usize) -> Result<f64> {
    if !(p > 2.0) {
        return Err(Error::domain(format!("requires p > 2, got {p}")));
    }
    let table = sine_table(p, cutoff)?;
    let q = p / (p - 1.0);
    let mut worst = 0.0f64;
    for (j, c) in table.iter().filter(|(j, _)| j % 2 == 1 && *j >= 3) {
        let bound = coeff_bound(p, CoeffKind::SineA, j)?.expect("p > 2, odd j >= 3");
        let k = bound * (j as f64).powf(q + 1.0);
        let jf = j as f64;
        let term = (1.0 + jf * jf).powf(rho) * c.value * c.value;
        let dom = k * k * jf.powf(2.0 * rho - 2.0 * q - 2.0);
        worst = worst.max(term / dom);
    }
    Ok(worst)
}
