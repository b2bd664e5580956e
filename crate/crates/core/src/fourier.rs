//! Fourier coefficients of `sin_p(π_p x)` and `cos_p(π_p x)` on `[0, 1]`,
//! their decay bounds, and the diagonal-dominance basis criterion.
//!
//! With `a_j = 2∫₀¹ sin_p(π_p x) sin(jπx) dx` and
//! `b_j = 2∫₀¹ cos_p(π_p x) cos(jπx) dx`, the symmetries of `sin_p`/`cos_p`
//! about `x = 1/2` kill every even index and fold the odd ones onto
//! `[0, 1/2]`, where the quarter-period evaluator is accurate at both ends.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{graded_panels, GaussLegendre, Node};
use crate::trig::{c_p, PExponent};
use crate::zeta::{odd_reciprocal_sum, odd_reciprocal_tail};

/// Innermost graded panel width next to `x = 0` and `x = 1/2`.
const MIN_PANEL: f64 = 1e-13;

/// Default truncation index for the criterion tail.
pub const DEFAULT_CUTOFF: usize = 999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffKind {
    /// `a_j`, sine coefficients of `sin_p(π_p x)`.
    SineA,
    /// `b_j`, cosine coefficients of `cos_p(π_p x)`.
    CosineB,
}

impl CoeffKind {
    pub fn first_index(self) -> usize {
        match self {
            CoeffKind::SineA => 1,
            CoeffKind::CosineB => 0,
        }
    }
}

/// A coefficient together with its (heuristic) quadrature error estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Coeff {
    pub value: f64,
    pub err_est: f64,
}

impl Coeff {
    const ZERO: Coeff = Coeff {
        value: 0.0,
        err_est: 0.0,
    };
}

/// `a_j` or `b_j` for every `j` from the kind's first index to `j_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    p: PExponent,
    kind: CoeffKind,
    j_max: usize,
    /// Indexed by `j`; slot 0 of a sine table is unused.
    entries: Vec<Coeff>,
}

impl CoeffTable {
    pub fn compute(p: &PExponent, kind: CoeffKind, j_max: usize) -> Result<Self> {
        let (a, b) = Self::compute_pair(p, j_max)?;
        Ok(match kind {
            CoeffKind::SineA => a,
            CoeffKind::CosineB => b,
        })
    }

    /// Both tables from one pass over the quadrature nodes.
    pub fn compute_pair(p: &PExponent, j_max: usize) -> Result<(Self, Self)> {
        if j_max == 0 {
            return Err(Error::domain("j_max must be at least 1"));
        }
        let (odd_a, odd_b) = if p.p() == 2.0 {
            let mut one = vec![Coeff::ZERO; j_max.div_ceil(2)];
            one[0] = Coeff {
                value: 1.0,
                err_est: 0.0,
            };
            (one.clone(), one)
        } else {
            odd_coefficients(p, j_max)?
        };
        let spread = |kind: CoeffKind, odd: Vec<Coeff>| {
            let mut entries = vec![Coeff::ZERO; j_max + 1];
            for (i, c) in odd.into_iter().enumerate() {
                entries[2 * i + 1] = c;
            }
            CoeffTable {
                p: *p,
                kind,
                j_max,
                entries,
            }
        };
        Ok((
            spread(CoeffKind::SineA, odd_a),
            spread(CoeffKind::CosineB, odd_b),
        ))
    }

    pub fn exponent(&self) -> &PExponent {
        &self.p
    }

    pub fn kind(&self) -> CoeffKind {
        self.kind
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn get(&self, j: usize) -> Option<Coeff> {
        if j < self.kind.first_index() {
            return None;
        }
        self.entries.get(j).copied()
    }

    /// `(j, coefficient)` in increasing `j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Coeff)> + '_ {
        self.entries
            .iter()
            .copied()
            .enumerate()
            .skip(self.kind.first_index())
    }

    pub fn max_err_est(&self) -> f64 {
        self.iter().map(|(_, c)| c.err_est).fold(0.0, f64::max)
    }
}

/// Sums `Σ w f(u) sin(jπu)` and `Σ w g(u) cos(jπu)` over `nodes`, for all odd
/// `j` at once, with `(f, g) = (sin_p, cos_p)(π_p u)`.
fn accumulate(p: &PExponent, nodes: &[Node], sa: &mut [f64], sb: &mut [f64]) -> Result<()> {
    sa.fill(0.0);
    sb.fill(0.0);
    for node in nodes {
        let (s, c) = p.quarter(node.from_left, node.from_right)?;
        let (ws, wc) = (node.weight * s, node.weight * c);
        let theta = PI * node.from_left;
        let (mut sj, mut cj) = theta.sin_cos();
        let (s2, c2) = (2.0 * theta).sin_cos();
        for (a, b) in sa.iter_mut().zip(sb.iter_mut()) {
            *a += ws * sj;
            *b += wc * cj;
            (cj, sj) = (cj * c2 - sj * s2, sj * c2 + cj * s2);
        }
    }
    Ok(())
}

/// Odd-index `a_j`, `b_j` for `j <= j_max` on one shared panel grid.
///
/// The bulk panels have width `1/(2 j_max)`, a quarter wavelength of the
/// fastest mode, so for `j = j_max` they sit exactly between consecutive
/// zeros and extrema of `cos(jπx)`. Each panel is integrated with GL16 and
/// again with GL16 on both halves; the halves give the value and the
/// difference gives the error estimate.
fn odd_coefficients(p: &PExponent, j_max: usize) -> Result<(Vec<Coeff>, Vec<Coeff>)> {
    let n = j_max.div_ceil(2);
    let rule = GaussLegendre::gl16();
    let mut a = vec![Coeff::ZERO; n];
    let mut b = vec![Coeff::ZERO; n];
    let (mut ca, mut cb) = (vec![0.0; n], vec![0.0; n]);
    let (mut fa, mut fb) = (vec![0.0; n], vec![0.0; n]);
    let mut coarse = Vec::with_capacity(rule.len());
    let mut fine = Vec::with_capacity(2 * rule.len());
    for panel in graded_panels(0.5, j_max, MIN_PANEL) {
        coarse.clear();
        fine.clear();
        panel.nodes(rule, 0.5, &mut coarse);
        for half in panel.split() {
            half.nodes(rule, 0.5, &mut fine);
        }
        accumulate(p, &coarse, &mut ca, &mut cb)?;
        accumulate(p, &fine, &mut fa, &mut fb)?;
        for i in 0..n {
            a[i].value += fa[i];
            a[i].err_est += (fa[i] - ca[i]).abs();
            b[i].value += fb[i];
            b[i].err_est += (fb[i] - cb[i]).abs();
        }
    }
    for c in a.iter_mut().chain(b.iter_mut()) {
        c.value *= 4.0;
        c.err_est *= 4.0;
    }
    let worst = a.iter().chain(&b).map(|c| c.err_est).fold(0.0, f64::max);
    if !worst.is_finite() || worst > 1e-10 {
        return Err(Error::Quadrature { err_est: worst });
    }
    Ok((a, b))
}

/// `b_j(p)`, on panels aligned with the zeros of `cos(jπx)`.
pub fn cosine_coeff(p: &PExponent, j: usize) -> Result<Coeff> {
    if j.is_multiple_of(2) {
        return Ok(Coeff::ZERO);
    }
    let table = CoeffTable::compute(p, CoeffKind::CosineB, j)?;
    Ok(table.entries[j])
}

/// `a_j(p)` for `j >= 1`.
pub fn sine_coeff(p: &PExponent, j: usize) -> Result<Coeff> {
    if j == 0 {
        return Err(Error::domain("sine coefficients start at j = 1"));
    }
    if j.is_multiple_of(2) {
        return Ok(Coeff::ZERO);
    }
    let table = CoeffTable::compute(p, CoeffKind::SineA, j)?;
    Ok(table.entries[j])
}

/// `|b_j − (jπ/π_p) a_j|` together with the combined error estimate of the
/// two sides.
pub fn coeff_relation_residual(p: &PExponent, j: usize) -> Result<(f64, f64)> {
    if j.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "relation check needs odd j, got {j}"
        )));
    }
    let (a, b) = CoeffTable::compute_pair(p, j)?;
    let (a, b) = (a.entries[j], b.entries[j]);
    let scale = j as f64 * PI / p.pi_p();
    let residual = (b.value - scale * a.value).abs();
    Ok((residual, b.err_est + scale * a.err_est))
}

/// `|b_j − (jπ/π_p) a_j|` for odd `j`.
pub fn coeff_relation_check(p: &PExponent, j: usize) -> Result<f64> {
    coeff_relation_residual(p, j).map(|(r, _)| r)
}

/// `8 π_p c_p / π²`, so that `|b_j| < K j^-2` for `1 < p < 2`.
pub fn sub_quadratic_constant(p: f64) -> Result<f64> {
    let pe = PExponent::new(p)?;
    Ok(8.0 * pe.pi_p() * c_p(p)? / (PI * PI))
}

/// `(2 π_{p'} / (π² (p−1))) [2 + π²(p−2)/2]`, so that `|b_j| < C j^-p'` for
/// `p > 2`, `j >= 3`.
pub fn super_quadratic_constant(p: f64) -> Result<f64> {
    if !(p > 2.0) {
        return Err(Error::domain(format!("requires p > 2, got {p}")));
    }
    let pc = PExponent::new(p)?.conjugate()?;
    Ok(2.0 * pc.pi_p() / (PI * PI * (p - 1.0)) * (2.0 + 0.5 * PI * PI * (p - 2.0)))
}

/// The analytic bound on `|b_j|` (or on `|a_j|`, which is `π_p/(jπ)` times
/// it), where one is available: every odd `j` for `1 < p < 2`, odd `j >= 3`
/// for `p > 2`.
///
/// For `a_j` with `p < 2` this is the looser `16 π_p² c_p/π³ j^-3`, as stated.
pub fn coeff_bound(p: f64, kind: CoeffKind, j: usize) -> Result<Option<f64>> {
    let pe = PExponent::new(p)?;
    if j.is_multiple_of(2) || p == 2.0 {
        return Ok(None);
    }
    let jf = j as f64;
    Ok(match kind {
        CoeffKind::CosineB if p < 2.0 => Some(sub_quadratic_constant(p)? / (jf * jf)),
        CoeffKind::SineA if p < 2.0 => {
            Some(16.0 * pe.pi_p().powi(2) * c_p(p)? / PI.powi(3) / jf.powi(3))
        }
        _ if j < 3 => None,
        CoeffKind::CosineB => Some(super_quadratic_constant(p)? * jf.powf(-pe.p_conj())),
        CoeffKind::SineA => {
            Some(super_quadratic_constant(p)? * pe.pi_p() / PI * jf.powf(-(pe.p_conj() + 1.0)))
        }
    })
}

fn check_cutoff(j: usize) -> Result<()> {
    if j < 3 || j.is_multiple_of(2) {
        return Err(Error::domain(format!("J must be odd and >= 3, got {j}")));
    }
    Ok(())
}

/// Rigorous upper bound on `Σ_{odd j > J} |b_j(p)|`.
///
/// Uses the coefficient bound for the matching regime times the exact odd
/// tail `Σ_{odd j > J} j^-q` (zeta minus the head sum), padded for the
/// rounding of that subtraction.
pub fn tail_remainder_bound(p: f64, j: usize) -> Result<f64> {
    check_cutoff(j)?;
    let pe = PExponent::new(p)?;
    if p == 2.0 {
        return Ok(0.0);
    }
    let (constant, q) = if p < 2.0 {
        (sub_quadratic_constant(p)?, 2.0)
    } else {
        (super_quadratic_constant(p)?, pe.p_conj())
    };
    let total = odd_reciprocal_sum(q)?;
    let tail = odd_reciprocal_tail(q, j)?;
    let padded = tail + 64.0 * f64::EPSILON * total;
    Ok(constant * padded * (1.0 + 1e-12))
}

/// Outcome of the criterion `Σ_{odd j >= 3} |b_j| < |b_1|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub p: f64,
    pub b1: f64,
    /// `Σ_{odd 3 <= j <= J} |b_j|` from quadrature.
    pub tail_computed: f64,
    /// Analytic bound on `Σ_{odd j > J} |b_j|`.
    pub tail_remainder_bound: f64,
    #[serde(rename = "J")]
    pub cutoff: usize,
    pub margin: f64,
    pub holds: bool,
    /// Summed quadrature error estimates of `b_1, …, b_J` (not part of the margin).
    pub err_est: f64,
}

impl CriterionReport {
    /// `tail_remainder_bound / b1`.
    pub fn remainder_share(&self) -> f64 {
        self.tail_remainder_bound / self.b1
    }
}

pub fn basis_criterion(p: f64, j: usize) -> Result<CriterionReport> {
    check_cutoff(j)?;
    let pe = PExponent::new(p)?;
    let table = CoeffTable::compute(&pe, CoeffKind::CosineB, j)?;
    criterion_from_table(&table)
}

/// The criterion evaluated on an existing cosine table (`J = j_max`).
pub fn criterion_from_table(table: &CoeffTable) -> Result<CriterionReport> {
    if table.kind != CoeffKind::CosineB {
        return Err(Error::domain("criterion needs the cosine table"));
    }
    let j = table.j_max - (1 - table.j_max % 2);
    check_cutoff(j)?;
    let p = table.p.p();
    let b1 = table.entries[1].value.abs();
    let tail_computed: f64 = (3..=j)
        .step_by(2)
        .map(|k| table.entries[k].value.abs())
        .sum();
    let err_est = (1..=j).step_by(2).map(|k| table.entries[k].err_est).sum();
    let tail_remainder_bound = tail_remainder_bound(p, j)?;
    let margin = b1 - tail_computed - tail_remainder_bound;
    Ok(CriterionReport {
        p,
        b1,
        tail_computed,
        tail_remainder_bound,
        cutoff: j,
        margin,
        holds: margin > 0.0,
        err_est,
    })
}

/// `min_{odd j <= J} (8π_p c_p/(j²π²) − |b_j|)` for `1 < p < 2`.
pub fn bound_check_lemma32(p: f64, j: usize) -> Result<f64> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::domain(format!("requires 1 < p < 2, got {p}")));
    }
    let table = CoeffTable::compute(&PExponent::new(p)?, CoeffKind::CosineB, j.max(1))?;
    worst_slack(&table, 1)
}

/// `min_{odd 3 <= j <= J} (C(p) j^-p' − |b_j|)` for `p > 2`.
pub fn bound_check_lemma34(p: f64, j: usize) -> Result<f64> {
    if !(p > 2.0) {
        return Err(Error::domain(format!("requires p > 2, got {p}")));
    }
    if j < 3 {
        return Err(Error::domain(format!("J must be >= 3, got {j}")));
    }
    let table = CoeffTable::compute(&PExponent::new(p)?, CoeffKind::CosineB, j)?;
    worst_slack(&table, 3)
}

/// Smallest `bound − |coefficient|` over odd `j >= from` in `table`.
pub fn worst_slack(table: &CoeffTable, from: usize) -> Result<f64> {
    let p = table.p.p();
    let mut worst = f64::INFINITY;
    for (j, c) in table.iter().filter(|(j, _)| j % 2 == 1 && *j >= from) {
        if let Some(bound) = coeff_bound(p, table.kind, j)? {
            worst = worst.min(bound - c.value.abs());
        }
    }
    Ok(worst)
}

/// The sharper coefficient bounds next to the earlier ones (`τ_j` in the older
/// notation), for one `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub p: f64,
    /// Analytic bound on `Σ_{odd j >= 3} |b_j|` from the sharper coefficient bounds.
    pub tail_bound: f64,
    /// The earlier tail bound.
    pub prior_tail_bound: f64,
    /// Lower bound on `b_1`: `π/π_p` (p < 2), `8/(π π_p)` (p >= 2).
    pub b1_lower: f64,
    /// The earlier lower bound on `τ_1 = b_1`.
    pub prior_b1_lower: f64,
    /// `Σ_{odd 3 <= j <= J} |b_j|` plus the certified remainder.
    pub tail_computed: f64,
    pub b1_computed: f64,
    /// `tail_bound <= prior_tail_bound`; asserted for `1 < p < 2` and `2 <= p <= 3`.
    pub tail_sharper: bool,
    /// `b1_lower >= prior_b1_lower`; asserted for `p > 2`.
    pub b1_sharper: bool,
}

/// `p_0^* = (72(π−2) − 2π³) / (96(π−2) − 3π³) ≈ 1.22`, where the two branches
/// of the earlier `τ_1` lower bound meet.
pub fn prior_branch_point() -> f64 {
    let (a, c) = (PI - 2.0, PI.powi(3));
    (72.0 * a - 2.0 * c) / (96.0 * a - 3.0 * c)
}

/// The earlier lower bound on `τ_1(p, p, 1)`.
pub fn prior_tau1_lower(p: f64) -> f64 {
    let lead = PI * (p - 1.0) / (2.0 * p - 1.0);
    if p < prior_branch_point() {
        lead - (PI - 2.0) * (p - 1.0) / (3.0 * p - 2.0)
    } else {
        lead - PI.powi(3) * (p - 1.0) / (24.0 * (4.0 * p - 3.0))
    }
}

pub fn compare_bounds(p: f64) -> Result<BoundComparison> {
    compare_bounds_with(p, DEFAULT_CUTOFF)
}

pub fn compare_bounds_with(p: f64, cutoff: usize) -> Result<BoundComparison> {
    let pe = PExponent::new(p)?;
    let report = basis_criterion(p, cutoff)?;
    let (tail_bound, prior_tail_bound, b1_lower) = if p < 2.0 {
        let head = PI * PI / 8.0 - 1.0;
        (
            sub_quadratic_constant(p)? * head,
            pe.pi_p() * (PI * PI - 8.0) / (PI * PI),
            PI / pe.pi_p(),
        )
    } else {
        let pc = pe.conjugate()?;
        let q = pe.p_conj();
        let odd = odd_reciprocal_sum(q)? - 1.0;
        let lead = 2.0 * pc.pi_p() / (PI * PI * (p - 1.0));
        (
            lead * (2.0 + 0.5 * PI * PI * (p - 2.0)) * odd,
            lead * (4.0 + PI * (p - 1.0)) * odd,
            8.0 / (PI * pe.pi_p()),
        )
    };
    let prior_b1_lower = prior_tau1_lower(p);
    Ok(BoundComparison {
        p,
        tail_bound,
        prior_tail_bound,
        b1_lower,
        prior_b1_lower,
        tail_computed: report.tail_computed + report.tail_remainder_bound,
        b1_computed: report.b1,
        tail_sharper: tail_bound <= prior_tail_bound,
        b1_sharper: b1_lower >= prior_b1_lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_table_is_exact() {
        let p = PExponent::new(2.0).unwrap();
        let (a, b) = CoeffTable::compute_pair(&p, 9).unwrap();
        for (j, c) in b.iter() {
            assert_eq!(c.value, if j == 1 { 1.0 } else { 0.0 });
        }
        assert!(a.get(0).is_none());
        assert_eq!(a.get(1).unwrap().value, 1.0);
    }

    #[test]
    fn near_classical_matches() {
        let p = PExponent::new(2.0 + 1e-9).unwrap();
        let b = CoeffTable::compute(&p, CoeffKind::CosineB, 21).unwrap();
        assert!((b.get(1).unwrap().value - 1.0).abs() < 1e-7);
        for j in (3..=21).step_by(2) {
            assert!(b.get(j).unwrap().value.abs() < 1e-7);
        }
    }

    #[test]
    fn even_entries_are_zero() {
        let p = PExponent::new(1.7).unwrap();
        let b = CoeffTable::compute(&p, CoeffKind::CosineB, 12).unwrap();
        for j in (0..=12).step_by(2) {
            assert_eq!(b.get(j).unwrap(), Coeff::ZERO);
        }
        assert_eq!(cosine_coeff(&p, 0).unwrap().value, 0.0);
        assert_eq!(sine_coeff(&p, 4).unwrap().value, 0.0);
        assert!(sine_coeff(&p, 0).is_err());
    }

    #[test]
    fn single_coefficient_agrees_with_table() {
        let p = PExponent::new(2.7).unwrap();
        let table = CoeffTable::compute(&p, CoeffKind::CosineB, 31).unwrap();
        let single = cosine_coeff(&p, 7).unwrap();
        assert!((table.get(7).unwrap().value - single.value).abs() < 1e-12);
    }

    #[test]
    fn cutoff_validation() {
        assert!(tail_remainder_bound(1.5, 4).is_err());
        assert!(tail_remainder_bound(1.5, 1).is_err());
        assert!(tail_remainder_bound(1.0, 9).is_err());
        assert_eq!(tail_remainder_bound(2.0, 9).unwrap(), 0.0);
    }

    #[test]
    fn remainder_decreases() {
        for p in [1.3, 2.6] {
            let r: Vec<f64> = [3, 9, 99, 999]
                .iter()
                .map(|&j| tail_remainder_bound(p, j).unwrap())
                .collect();
            assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
        }
    }

    #[test]
    fn branch_point_value() {
        let p = prior_branch_point();
        let lhs = (4.0 * p - 3.0) / (3.0 * p - 2.0);
        assert!((lhs - PI.powi(3) / (24.0 * (PI - 2.0))).abs() < 1e-13);
        assert!((p - 1.22).abs() < 0.01);
    }
}
