//! Quadrature rules.
//!
//! Two families are provided:
//!
//! * a tanh-sinh (double exponential) rule for integrands with algebraic
//!   endpoint singularities, used for the incomplete integral `F_p`;
//! * composite Gauss–Legendre on panel layouts that are geometrically graded
//!   toward both ends of an interval, used for Fourier coefficients and norms.
//!
//! Integrands receive the distance of the node to *both* ends of the interval
//! so that expressions like `1 - t^p` near `t = 1` can be formed without
//! cancellation.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Result of a quadrature together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_est: f64,
}

#[derive(Debug, Clone, Copy)]
struct TsNode {
    /// `1 - x` for the abscissa `x = tanh(pi/2 sinh t)`, t > 0.
    complement: f64,
    /// Weight `pi/2 cosh t / cosh^2(pi/2 sinh t)` without the step size.
    weight: f64,
}

/// Abscissa offsets in `(0, 1]` for level `l` of the tanh-sinh rule. Level 0
/// holds the integer multiples of the unit step; level `l > 0` the odd
/// multiples of `2^-l`.
struct TsTable {
    levels: Vec<Vec<TsNode>>,
}

const TS_MAX_LEVEL: usize = 16;
const TS_T_MAX: f64 = 6.5;

fn ts_node(t: f64) -> Option<TsNode> {
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u).exp();
    let complement = 2.0 * e / (1.0 + e);
    if complement < 1e-300 {
        return None;
    }
    let weight = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    Some(TsNode { complement, weight })
}

fn ts_table() -> &'static TsTable {
    static TABLE: OnceLock<TsTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut levels = Vec::with_capacity(TS_MAX_LEVEL + 1);
        for level in 0..=TS_MAX_LEVEL {
            let h = (0.5f64).powi(level as i32);
            let mut nodes = Vec::new();
            let mut k = 1usize;
            loop {
                if level > 0 && k.is_multiple_of(2) {
                    k += 1;
                    continue;
                }
                let t = k as f64 * h;
                if t > TS_T_MAX {
                    break;
                }
                match ts_node(t) {
                    Some(node) => nodes.push(node),
                    None => break,
                }
                k += 1;
            }
            levels.push(nodes);
        }
        TsTable { levels }
    })
}

/// Options for [`tanh_sinh`].
#[derive(Debug, Clone, Copy)]
pub struct TanhSinhOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_level: usize,
    /// Nodes whose weight falls below this value are skipped. Only safe for
    /// integrands bounded near the endpoints; leave at zero otherwise.
    pub weight_cutoff: f64,
}

impl Default for TanhSinhOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_level: 12,
            weight_cutoff: 0.0,
        }
    }
}

/// Integrates `f` over `[a, b]` with the tanh-sinh rule, halving the step
/// until two successive levels agree to the requested tolerance.
///
/// `f` is called as `f(x, x - a, b - x)`; the two distances are accurate even
/// when `x` rounds to an endpoint.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, opts: &TanhSinhOptions) -> Result<QuadResult>
where
    F: FnMut(f64, f64, f64) -> f64,
{
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            err_est: 0.0,
        });
    }
    let half = 0.5 * (b - a);
    let mid = a + half;
    let table = ts_table();
    let max_level = opts.max_level.min(TS_MAX_LEVEL);

    // Sum of f * w over all nodes seen so far, excluding the step factor.
    let mut sum = FRAC_PI_2 * f(mid, half, half);
    let eval_level = |nodes: &[TsNode], f: &mut F| -> f64 {
        let mut acc = 0.0;
        for node in nodes {
            if node.weight < opts.weight_cutoff {
                break;
            }
            let d = half * node.complement;
            let left = f(a + d, d, 2.0 * half - d);
            let right = f(b - d, 2.0 * half - d, d);
            acc += node.weight * (left + right);
        }
        acc
    };

    sum += eval_level(&table.levels[0], &mut f);
    let mut prev = half * sum;
    let mut diff = f64::INFINITY;
    for level in 1..=max_level {
        sum += eval_level(&table.levels[level], &mut f);
        let h = (0.5f64).powi(level as i32);
        let estimate = half * h * sum;
        diff = (estimate - prev).abs();
        prev = estimate;
        if !estimate.is_finite() {
            break;
        }
        if level >= 2 && diff <= opts.abs_tol.max(opts.rel_tol * estimate.abs()) {
            return Ok(QuadResult {
                value: estimate,
                err_est: diff,
            });
        }
    }
    Err(Error::Quadrature { err_est: diff })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared 16-point rule.
    pub fn gl16() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Plain integral of `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let r = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(c + r * x))
            .sum::<f64>()
            * r
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Which end of the parent interval a panel's coordinates are measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Left,
    Right,
}

/// A sub-interval `[lo, hi]` of `[0, len]`, with `lo`/`hi` measured from the
/// anchor end. Right-anchored panels keep full relative precision for nodes
/// close to the right endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub lo: f64,
    pub hi: f64,
    pub anchor: Anchor,
}

/// A quadrature node expressed by its distances to both ends of the parent
/// interval, with the weight already scaled to the panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub from_left: f64,
    pub from_right: f64,
    pub weight: f64,
}

impl Panel {
    /// Maps `rule` onto this panel inside a parent interval of length `len`.
    pub fn nodes(&self, rule: &GaussLegendre, len: f64, out: &mut Vec<Node>) {
        let c = 0.5 * (self.lo + self.hi);
        let r = 0.5 * (self.hi - self.lo);
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            let d = c + r * x;
            let (from_left, from_right) = match self.anchor {
                Anchor::Left => (d, len - d),
                Anchor::Right => (len - d, d),
            };
            out.push(Node {
                from_left,
                from_right,
                weight: w * r,
            });
        }
    }

    /// The two halves of this panel.
    pub fn split(&self) -> [Panel; 2] {
        let m = 0.5 * (self.lo + self.hi);
        [
            Panel {
                lo: self.lo,
                hi: m,
                anchor: self.anchor,
            },
            Panel {
                lo: m,
                hi: self.hi,
                anchor: self.anchor,
            },
        ]
    }
}

/// Ratio between consecutive graded panels.
pub const GRADING_RATIO: f64 = 0.2;

/// Splits `[0, len]` into `n_bulk` equal panels, then replaces the first and
/// last of them by geometric sequences that shrink toward the endpoints until
/// the innermost panel is narrower than `min_width`.
pub fn graded_panels(len: f64, n_bulk: usize, min_width: f64) -> Vec<Panel> {
    assert!(n_bulk >= 1 && len > 0.0);
    let h = len / n_bulk as f64;
    let mut panels = Vec::new();
    let end_width = if n_bulk == 1 { 0.5 * len } else { h };
    let grade = |anchor: Anchor, panels: &mut Vec<Panel>| {
        let mut outer = end_width;
        let mut seq = Vec::new();
        while outer > min_width {
            let inner = outer * GRADING_RATIO;
            seq.push(Panel {
                lo: inner,
                hi: outer,
                anchor,
            });
            outer = inner;
        }
        seq.push(Panel {
            lo: 0.0,
            hi: outer,
            anchor,
        });
        match anchor {
            Anchor::Left => panels.extend(seq.into_iter().rev()),
            Anchor::Right => panels.extend(seq),
        }
    };
    grade(Anchor::Left, &mut panels);
    if n_bulk > 2 {
        for k in 1..n_bulk - 1 {
            let lo = k as f64 * h;
            let hi = if k + 1 == n_bulk - 1 {
                len - h
            } else {
                (k + 1) as f64 * h
            };
            panels.push(Panel {
                lo,
                hi,
                anchor: Anchor::Left,
            });
        }
    }
    grade(Anchor::Right, &mut panels);
    panels
}
