//! The two threshold equations and their roots `p₀ ≈ 1.458801`,
//! `p₁ ≈ 2.42865`, plus the analytic facts used to bracket them.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trig::{c_p, pi_p};
pub use crate::zeta::{odd_reciprocal_sum, zeta};

/// Step of the central-difference derivative used by Newton.
const DIFF_STEP: f64 = 1e-7;
/// Final bracket width and residual bound.
const ROOT_TOL: f64 = 1e-12;
const MAX_ITERS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub root: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub trace: Vec<f64>,
}

/// Safeguarded Newton on `f` over `[lo, hi]` with a central-difference
/// derivative; falls back to bisection whenever a step leaves the bracket.
///
/// Terminates with `hi − lo <= 1e-12` and `|f(root)| <= 1e-12`, or errors.
pub fn solve_bracketed<F>(f: F, lo: f64, hi: f64) -> Result<RootResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 || f_hi == 0.0 {
        let root = if f_lo == 0.0 { lo } else { hi };
        return Ok(RootResult {
            root,
            residual: 0.0,
            bracket: (root, root),
            iterations: 0,
            trace: vec![root],
        });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    let lo_sign = f_lo.signum();
    let mut trace = Vec::new();
    let mut x = 0.5 * (lo + hi);
    let mut fx = f(x)?;
    let mut best = (x, fx);
    let mut step_old = hi - lo;
    let mut step = step_old;
    let mut iterations = 0;
    while iterations < MAX_ITERS {
        iterations += 1;
        trace.push(x);
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            lo = x;
            hi = x;
            break;
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= ROOT_TOL {
            break;
        }
        let slope = (f(x + DIFF_STEP)? - f(x - DIFF_STEP)?) / (2.0 * DIFF_STEP);
        let newton = x - fx / slope;
        let inside = newton.is_finite() && newton > lo && newton < hi;
        // Newton is only trusted while its steps shrink at least geometrically.
        let contracting = (2.0 * fx).abs() <= (step_old * slope).abs();
        step_old = step;
        let next = if inside && (newton - x).abs() < 0.25 * ROOT_TOL {
            // Newton has converged: probe both sides of it so the bracket
            // collapses instead of creeping in from one end.
            for probe in [newton - 0.25 * ROOT_TOL, newton + 0.25 * ROOT_TOL] {
                if probe > lo && probe < hi {
                    let fp = f(probe)?;
                    if fp.abs() < best.1.abs() {
                        best = (probe, fp);
                    }
                    if fp.signum() == lo_sign {
                        lo = probe;
                    } else {
                        hi = probe;
                    }
                }
            }
            0.5 * (lo + hi)
        } else if inside && contracting {
            step = newton - x;
            newton
        } else {
            step = 0.5 * (hi - lo);
            0.5 * (lo + hi)
        };
        x = next;
        fx = f(x)?;
    }
    if hi - lo > ROOT_TOL {
        return Err(Error::Convergence {
            iterations,
            residual: best.1,
        });
    }
    let (mut root, mut residual) = if best.0 >= lo && best.0 <= hi {
        best
    } else {
        (x, fx)
    };
    // The bracket may close on a bisection point; one last Newton step from
    // the best iterate usually brings the residual down to rounding level.
    if residual != 0.0 {
        let slope = (f(root + DIFF_STEP)? - f(root - DIFF_STEP)?) / (2.0 * DIFF_STEP);
        let polished = root - residual / slope;
        if polished >= lo && polished <= hi {
            let fp = f(polished)?;
            if fp.abs() < residual.abs() {
                (root, residual) = (polished, fp);
            }
        }
    }
    if residual.abs() > ROOT_TOL {
        return Err(Error::Convergence {
            iterations,
            residual,
        });
    }
    Ok(RootResult {
        root,
        residual,
        bracket: (lo, hi),
        iterations,
        trace,
    })
}

fn check_sub_quadratic(p: f64) -> Result<()> {
    if p > 1.0 && p < 2.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("requires 1 < p < 2, got {p}")))
    }
}

/// `π_p² c_p` for `1 < p < 2`.
pub fn lhs_eq51(p: f64) -> Result<f64> {
    check_sub_quadratic(p)?;
    Ok(pi_p(p)?.powi(2) * c_p(p)?)
}

/// `π³ / (π² − 8)`, the level at which the `p < 2` criterion becomes tight.
pub fn p0_level() -> f64 {
    PI.powi(3) / (PI * PI - 8.0)
}

pub const P0_BRACKET: (f64, f64) = (4.0 / 3.0, 1.5);
pub const P1_BRACKET: (f64, f64) = (11.0 / 5.0, 3.0);

/// Root of `π_p² c_p = π³/(π² − 8)` in `(4/3, 3/2)`.
pub fn solve_p0() -> Result<RootResult> {
    let level = p0_level();
    solve_bracketed(|p| Ok(lhs_eq51(p)? - level), P0_BRACKET.0, P0_BRACKET.1)
}

/// `π/(p² sin²(π/p)) (2 + π²(p−2)/2) [(1 − 2^-p') ζ(p') − 1]`.
pub fn h(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::domain(format!("h requires p > 1, got {p}")));
    }
    let q = p / (p - 1.0);
    let s = (PI / p).sin();
    Ok(PI / (p * p * s * s) * (2.0 + 0.5 * PI * PI * (p - 2.0)) * (odd_reciprocal_sum(q)? - 1.0))
}

/// Left side minus right side of the unreduced `p > 2` threshold equation,
/// `C(p) [(1 − 2^-p') ζ(p') − 1] − 8/(π π_p)`, relative to `8/(π π_p)`.
pub fn unreduced_p1_gap(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::domain(format!("requires p > 1, got {p}")));
    }
    let q = p / (p - 1.0);
    let lhs = 2.0 * pi_p(q)? / (PI * PI * (p - 1.0))
        * (2.0 + 0.5 * PI * PI * (p - 2.0))
        * (odd_reciprocal_sum(q)? - 1.0);
    let rhs = 8.0 / (PI * pi_p(p)?);
    Ok((lhs - rhs) / rhs)
}

/// Root of `h(p) = 1` in `(11/5, 3)`; also checks that the unreduced form
/// holds at the root to `1e-10`.
pub fn solve_p1() -> Result<RootResult> {
    let r = solve_bracketed(|p| Ok(h(p)? - 1.0), P1_BRACKET.0, P1_BRACKET.1)?;
    let gap = unreduced_p1_gap(r.root)?;
    if gap.abs() > 1e-10 {
        return Err(Error::Convergence {
            iterations: r.iterations,
            residual: gap,
        });
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zeta32Sandwich {
    pub t0: f64,
    pub lower: f64,
    pub value: f64,
    /// `c₁`, the closed-form upper bound.
    pub upper: f64,
}

/// `t₀ = 2(e² − 3e + 1)/(e² − 2e − 1)`.
pub fn t0() -> f64 {
    2.0 * (E * E - 3.0 * E + 1.0) / (E * E - 2.0 * E - 1.0)
}

/// The closed-form upper bound `c₁` on `ζ(3/2)`.
pub fn c1() -> f64 {
    let t = t0();
    let e1 = E - 1.0;
    2.0 / PI.sqrt()
        * (2.0 * 2f64.sqrt() * (1.0 / 2f64.sqrt()).atan() + PI * PI / 6.0 + t * t / 4.0
            - (t - 1.0).powi(2) / (2.0 * e1 * e1)
            - (t * (E - 2.0) + 1.0) / e1)
}

/// `1 + √2/4 + √3 (π²/6 − 5/4)`, a lower bound on `ζ(3/2)`.
pub fn zeta32_lower() -> f64 {
    1.0 + 2f64.sqrt() / 4.0 + 3f64.sqrt() * (PI * PI / 6.0 - 1.25)
}

pub fn zeta32_sandwich() -> Result<Zeta32Sandwich> {
    let s = Zeta32Sandwich {
        t0: t0(),
        lower: zeta32_lower(),
        value: zeta(1.5)?,
        upper: c1(),
    };
    if !(s.lower < s.value && s.value < s.upper) {
        return Err(Error::Convergence {
            iterations: 0,
            residual: s.value,
        });
    }
    Ok(s)
}

/// The chord bound `ζ(11/6) <= π²/9 + c₁/3`.
pub fn zeta_11_6_chord() -> f64 {
    PI * PI / 9.0 + c1() / 3.0
}

/// `sin(5π/11) − [(√6/22)(√3 + 3) + 5/11]`; positive by concavity of `sin`.
pub fn sin_5pi_11_gap() -> f64 {
    let chord = 6f64.sqrt() / 22.0 * (3f64.sqrt() + 3.0) + 5.0 / 11.0;
    (5.0 * PI / 11.0).sin() - chord
}

/// Number of grid points in [`convexity_scan`].
pub const CONVEXITY_GRID: usize = 1000;

/// Smallest second difference of `log(π_p² c_p)` on an even grid over
/// `[1.01, 1.99]`.
pub fn convexity_scan() -> Result<f64> {
    let (a, b) = (1.01, 1.99);
    let step = (b - a) / (CONVEXITY_GRID - 1) as f64;
    let values = (0..CONVEXITY_GRID)
        .map(|i| lhs_eq51(a + step * i as f64).map(f64::ln))
        .collect::<Result<Vec<_>>>()?;
    Ok(values
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .fold(f64::INFINITY, f64::min))
}
