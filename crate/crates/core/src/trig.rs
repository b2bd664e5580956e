//! The p-trigonometric functions `sin_p`, `cos_p` and friends.
//!
//! `sin_p` is the inverse of `F_p(y) = ∫_0^y (1 - t^p)^(-1/p) dt` on the first
//! quarter period `[0, π_p/2]`, extended to the real line by oddness, the
//! reflection `sin_p(π_p/2 - x) = sin_p(π_p/2 + x)` and `2π_p`-periodicity.
//!
//! Inside the quarter period the evaluation switches between two routes at the
//! point where `|sin_p|^p = |cos_p|^p = 1/2`:
//!
//! * below it, `y = sin_p(x)` is found by safeguarded Newton on `F_p(y) = x`;
//! * above it, the conjugate identity
//!   `cos_p(π_p u) = sin_q(π_q (1/2 - u))^(q-1)`, `q = p/(p-1)`, is used so
//!   that `cos_p` keeps full relative accuracy near its zero.
//!
//! Both routes only ever invert `F` on `[0, 0.6^(1/p)]`, where the integrand
//! is bounded.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{tanh_sinh, GaussLegendre, TanhSinhOptions};

/// Tolerances and iteration limits for function evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_newton_iters: usize,
    /// Maximum tanh-sinh refinement depth.
    pub quad_levels: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_newton_iters: 60,
            quad_levels: 12,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::domain("tolerances must be positive"));
        }
        if self.max_newton_iters < 1 {
            return Err(Error::domain("max_newton_iters must be at least 1"));
        }
        if self.quad_levels < 2 {
            return Err(Error::domain("quad_levels must be at least 2"));
        }
        Ok(())
    }

    fn tanh_sinh(&self, bounded: bool) -> TanhSinhOptions {
        TanhSinhOptions {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_level: self.quad_levels,
            weight_cutoff: if bounded { 1e-18 } else { 0.0 },
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "p must be a finite real > 1, got {p}"
        )))
    }
}

fn half_period(p: f64) -> f64 {
    // sin(pi/p) = sin(pi (p-1)/p); the second form is accurate as p -> 1.
    let s = if p < 2.0 {
        (PI * ((p - 1.0) / p)).sin()
    } else {
        (PI / p).sin()
    };
    2.0 * PI / (p * s)
}

/// The half period `π_p = 2π / (p sin(π/p))`.
pub fn pi_p(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(half_period(p))
}

/// Integrand `(1 - t^q)^(-1/q)` given `t` and an accurate `1 - t`.
#[inline]
fn f_integrand(q: f64, t: f64, one_minus_t: f64) -> f64 {
    let gap = if t < 0.5 {
        1.0 - t.powf(q)
    } else {
        -(q * (-one_minus_t).ln_1p()).exp_m1()
    };
    gap.powf(-1.0 / q)
}

fn incomplete(q: f64, y: f64, config: &EvalConfig, bounded: bool) -> Result<f64> {
    if y == 0.0 {
        return Ok(0.0);
    }
    let tail = 1.0 - y;
    let opts = config.tanh_sinh(bounded);
    tanh_sinh(|t, _, dr| f_integrand(q, t, tail + dr), 0.0, y, &opts).map(|r| r.value)
}

/// Solves `F_q(y) = x` for `y` in `[0, 0.6^(1/q)]`.
fn invert_incomplete(q: f64, x: f64, config: &EvalConfig) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let gl = GaussLegendre::gl16();
    let mut lo = 0.0;
    let mut hi = 0.6f64.powf(1.0 / q);
    // F_q(y) >= y, so the root never exceeds x and Newton on the convex F_q
    // approaches it monotonically from the right.
    let mut y = x.min(hi);
    let mut fy = incomplete(q, y, config, true)?;
    let tol = 16.0 * f64::EPSILON;
    for _ in 0..config.max_newton_iters {
        let r = fy - x;
        if r == 0.0 {
            return Ok(y);
        }
        if r > 0.0 {
            hi = y;
        } else {
            lo = y;
        }
        let slope = f_integrand(q, y, 1.0 - y);
        let mut next = y - r / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = next - y;
        if step.abs() <= tol * y {
            return Ok(next);
        }
        let reach = y.min(next).min(1.0 - y.max(next));
        fy = if step.abs() < 0.1 * reach {
            fy + gl.integrate(|t| f_integrand(q, t, 1.0 - t), y, next)
        } else {
            incomplete(q, next, config, true)?
        };
        y = next;
    }
    let residual = (fy - x).abs();
    if residual <= config.rel_tol * x + config.abs_tol {
        Ok(y)
    } else {
        Err(Error::Convergence {
            iterations: config.max_newton_iters,
            residual,
        })
    }
}

/// A validated exponent `p > 1` with its conjugate `p' = p/(p-1)` and the
/// cached half periods `π_p`, `π_{p'}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent {
    p: f64,
    p_conj: f64,
    pi_p: f64,
    pi_conj: f64,
    /// Fraction `u` of `π_p` at which `sin_p(π_p u)^p = 1/2`.
    split: f64,
    config: EvalConfig,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        Self::with_config(p, EvalConfig::default())
    }

    pub fn with_config(p: f64, config: EvalConfig) -> Result<Self> {
        check_p(p)?;
        config.validate()?;
        let p_conj = p / (p - 1.0);
        if !p_conj.is_finite() {
            return Err(Error::domain(format!("p = {p} too close to 1")));
        }
        let pi_p = half_period(p);
        let pi_conj = half_period(p_conj);
        let split = incomplete(p, 0.5f64.powf(1.0 / p), &config, true)? / pi_p;
        Ok(Self {
            p,
            p_conj,
            pi_p,
            pi_conj,
            split,
            config,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn p_conj(&self) -> f64 {
        self.p_conj
    }

    pub fn pi_p(&self) -> f64 {
        self.pi_p
    }

    pub fn config(&self) -> &EvalConfig {
        &self.config
    }

    /// The conjugate exponent as its own `PExponent`.
    pub fn conjugate(&self) -> Result<PExponent> {
        Self::with_config(self.p_conj, self.config)
    }

    /// `F_p(y)` for `y` in `[0, 1]`.
    pub fn incomplete_f(&self, y: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::domain(format!("F_p needs 0 <= y <= 1, got {y}")));
        }
        incomplete(self.p, y, &self.config, false)
    }

    /// `(sin_p(π_p u), cos_p(π_p u))` for `u` in `[0, 1/2]`, given `v = 1/2 - u`
    /// computed without cancellation.
    pub(crate) fn quarter(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        if u <= self.split {
            let s = invert_incomplete(self.p, self.pi_p * u, &self.config)?;
            let c = (1.0 - s.powf(self.p)).powf(1.0 / self.p);
            Ok((s, c))
        } else {
            let sigma = invert_incomplete(self.p_conj, self.pi_conj * v, &self.config)?;
            let s = (1.0 - sigma.powf(self.p_conj)).powf(1.0 / self.p);
            let c = sigma.powf(1.0 / (self.p - 1.0));
            Ok((s, c))
        }
    }

    /// `(sin_p(π_p w), cos_p(π_p w))` for any finite `w`.
    pub fn sin_cos_scaled(&self, w: f64) -> Result<(f64, f64)> {
        if !w.is_finite() {
            return Err(Error::domain("argument must be finite"));
        }
        let t = 2.0 * w;
        let k = t.floor();
        let f = t - k;
        self.sin_cos_split(k.rem_euclid(4.0) as i64, 0.5 * f, 0.5 * (1.0 - f))
    }

    /// `(sin_p, cos_p)` at `π_p (k/2 + u)` with `u` in `[0, 1/2]` and
    /// `v = 1/2 − u` supplied separately, so points close to either end of
    /// the half-quadrant keep full relative precision.
    pub(crate) fn sin_cos_split(&self, k: i64, u: f64, v: f64) -> Result<(f64, f64)> {
        Ok(match k.rem_euclid(4) {
            0 => self.quarter(u, v)?,
            1 => {
                let (s, c) = self.quarter(v, u)?;
                (s, -c)
            }
            2 => {
                let (s, c) = self.quarter(u, v)?;
                (-s, -c)
            }
            _ => {
                let (s, c) = self.quarter(v, u)?;
                (-s, c)
            }
        })
    }

    pub fn sin_cos(&self, x: f64) -> Result<(f64, f64)> {
        self.sin_cos_scaled(x / self.pi_p)
    }

    pub fn sin_p(&self, x: f64) -> Result<f64> {
        self.sin_cos(x).map(|(s, _)| s)
    }

    pub fn cos_p(&self, x: f64) -> Result<f64> {
        self.sin_cos(x).map(|(_, c)| c)
    }

    /// `exp_p(iy) = cos_p(y) + i sin_p(y)`.
    pub fn exp_p(&self, y: f64) -> Result<Complex64> {
        let (s, c) = self.sin_cos(y)?;
        Ok(Complex64::new(c, s))
    }

    fn first_quarter(&self, x: f64, open: bool) -> Result<(f64, f64)> {
        let half = 0.5 * self.pi_p;
        let slack = 4.0 * f64::EPSILON * half;
        let inside = if open {
            x > 0.0 && x < half
        } else {
            x >= 0.0 && x <= half + slack
        };
        if !inside {
            let interval = if open { "(0, π_p/2)" } else { "[0, π_p/2]" };
            return Err(Error::domain(format!("x = {x} outside {interval}")));
        }
        let u = (x / self.pi_p).min(0.5);
        self.quarter(u, 0.5 - u)
    }

    /// `d/dx cos_p(x) = -sin_p(x)^(p-1) cos_p(x)^(2-p)` on `[0, π_p/2]`.
    ///
    /// For `p > 2` the derivative blows up at `π_p/2`; once `cos_p(x) < 1e-13`
    /// the result is `-inf`.
    pub fn dcos_p(&self, x: f64) -> Result<f64> {
        let (s, c) = self.first_quarter(x, false)?;
        if self.p > 2.0 && c < 1e-13 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(-s.powf(self.p - 1.0) * c.powf(2.0 - self.p))
    }

    /// `d²/dx² cos_p(x) = sin_p^(p-2) cos_p^(3-2p) (2 - p - cos_p^p)` on the
    /// open quarter period.
    pub fn d2cos_p(&self, x: f64) -> Result<f64> {
        let (s, c) = self.first_quarter(x, true)?;
        Ok(s.powf(self.p - 2.0) * c.powf(3.0 - 2.0 * self.p) * (2.0 - self.p - c.powf(self.p)))
    }
}

fn check_sub_quadratic(p: f64) -> Result<()> {
    if p > 1.0 && p < 2.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("requires 1 < p < 2, got {p}")))
    }
}

/// `c_p = (p-1)^((p-1)/p) (2-p)^((2-p)/p)` for `1 < p < 2`.
pub fn c_p(p: f64) -> Result<f64> {
    check_sub_quadratic(p)?;
    // powf(0, 0) == 1, which is the continuous extension at both ends.
    Ok((p - 1.0).powf((p - 1.0) / p) * (2.0 - p).powf((2.0 - p) / p))
}

/// `u_p(x) = cos_p'(π_p x)` for `1 < p < 2` and `x` in `[0, 1/2]`.
pub fn u_p(x: f64, p: f64) -> Result<f64> {
    check_sub_quadratic(p)?;
    PExponent::new(p)?.u_p(x)
}

/// The unique `m_p` in `(0, 1/2)` with `cos_p(π_p m_p)^p = 2 - p`.
pub fn m_p(p: f64) -> Result<f64> {
    check_sub_quadratic(p)?;
    PExponent::new(p)?.m_p()
}

/// `v_p(x) = (p'-1) sin_{p'}(π_{p'} x)^(p'-2) cos_{p'}(π_{p'} x)` for `p > 2`
/// and `x` in `(0, 1/2]`.
pub fn v_p(x: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if p <= 2.0 {
        return Err(Error::domain(format!("v_p requires p > 2, got {p}")));
    }
    if !(x > 0.0 && x <= 0.5) {
        return Err(Error::domain(format!("v_p needs 0 < x <= 1/2, got {x}")));
    }
    let q = PExponent::new(p)?.conjugate()?;
    let (s, c) = q.quarter(x, 0.5 - x)?;
    Ok((q.p - 1.0) * s.powf(q.p - 2.0) * c)
}

impl PExponent {
    /// See [`u_p`].
    pub fn u_p(&self, x: f64) -> Result<f64> {
        check_sub_quadratic(self.p)?;
        if !(0.0..=0.5).contains(&x) {
            return Err(Error::domain(format!("u_p needs 0 <= x <= 1/2, got {x}")));
        }
        let (s, c) = self.quarter(x, 0.5 - x)?;
        Ok(-s.powf(self.p - 1.0) * c.powf(2.0 - self.p))
    }

    /// See [`m_p`]; bisection to an absolute width of `1e-12`.
    pub fn m_p(&self) -> Result<f64> {
        check_sub_quadratic(self.p)?;
        let target = 2.0 - self.p;
        let (mut lo, mut hi) = (0.0f64, 0.5f64);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            let (_, c) = self.quarter(mid, 0.5 - mid)?;
            if c.powf(self.p) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
