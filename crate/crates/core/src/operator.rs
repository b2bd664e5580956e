//! Dilations `M_n` on cosine coordinates and the truncated change of basis
//! `A = Σ b_j M_j` taking `e_n(x) = cos(nπx)` to `f_n(x) = cos_p(nπ_p x)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{CoeffKind, CoeffTable};
use crate::quadrature::{graded_panels, GaussLegendre, Node, Panel};
use crate::trig::PExponent;

/// How slot 0 of a [`CosineVector`] relates to the constant term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroTerm {
    /// Slot 0 holds `ĝ(0) = 2∫g`; the function is `ĝ(0)/2 + Σ ĝ(k) e_k`.
    Unscaled,
    /// Slot 0 holds the coordinate of `e_0` itself, `∫g`.
    Halved,
}

/// Coordinates of a function in the cosine system `{e_k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosineVector {
    coeffs: Vec<f64>,
    zero: ZeroTerm,
}

impl CosineVector {
    pub fn new(coeffs: Vec<f64>, zero: ZeroTerm) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("cosine vector needs at least one entry"));
        }
        Ok(Self { coeffs, zero })
    }

    /// The unit vector `e_k` of length `len`, with `e_0` meaning the function 1.
    pub fn unit(k: usize, len: usize, zero: ZeroTerm) -> Result<Self> {
        if k >= len {
            return Err(Error::domain(format!("unit index {k} >= length {len}")));
        }
        let mut coeffs = vec![0.0; len];
        coeffs[k] = if k == 0 && zero == ZeroTerm::Unscaled {
            2.0
        } else {
            1.0
        };
        Self::new(coeffs, zero)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn zero_term(&self) -> ZeroTerm {
        self.zero
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Plain coordinates: the function equals `Σ c_k e_k`.
    pub fn coordinates(&self) -> Vec<f64> {
        let mut c = self.coeffs.clone();
        if self.zero == ZeroTerm::Unscaled {
            c[0] *= 0.5;
        }
        c
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn from_coordinates(mut c: Vec<f64>, zero: ZeroTerm) -> Result<Self> {
        if zero == ZeroTerm::Unscaled && !c.is_empty() {
            c[0] *= 2.0;
        }
        Self::new(c, zero)
    }
}

/// `M_n`: the coefficient at `j` moves to `n j`. The result has length
/// `n (N − 1) + 1`, or `cap` if that is smaller.
pub fn apply_mn(v: &CosineVector, n: usize, cap: Option<usize>) -> Result<CosineVector> {
    if n == 0 {
        return Err(Error::domain("dilation factor must be >= 1"));
    }
    let full = n * (v.len() - 1) + 1;
    let len = cap.map_or(full, |c| c.clamp(1, full));
    let mut out = vec![0.0; len];
    for (j, &c) in v.coeffs.iter().enumerate() {
        if let Some(slot) = out.get_mut(n * j) {
            *slot = c;
        }
    }
    CosineVector::new(out, v.zero)
}

/// Panels per unit length for the `L_s` norms.
const NORM_PANELS: usize = 64;

/// Deepest bisection below an initial panel.
const MAX_DEPTH: usize = 40;

/// `∫_0^len h` starting from `panels` equal panels, GL16 on each and on both
/// halves; panels whose halves disagree by more than their share of
/// `1e-13 ∫|h|` are bisected. Returns the value and `Σ |refined − coarse|`
/// over the final panels.
fn panel_integral<H: FnMut(f64) -> f64>(mut h: H, len: f64, panels: usize) -> (f64, f64) {
    let rule = GaussLegendre::gl16();
    let width = len / panels as f64;
    let coarse: Vec<f64> = (0..panels)
        .map(|i| rule.integrate(&mut h, i as f64 * width, (i + 1) as f64 * width))
        .collect();
    let scale: f64 = coarse.iter().map(|c| c.abs()).sum();
    let tol = 1e-13 * scale.max(f64::MIN_POSITIVE) / panels as f64;
    let (mut value, mut err) = (0.0, 0.0);
    // Explicit stack of (a, b, coarse, tol, depth).
    let mut stack: Vec<_> = coarse
        .iter()
        .enumerate()
        .rev()
        .map(|(i, &c)| (i as f64 * width, (i + 1) as f64 * width, c, tol, 0))
        .collect();
    while let Some((a, b, c, tol, depth)) = stack.pop() {
        let mid = 0.5 * (a + b);
        let left = rule.integrate(&mut h, a, mid);
        let right = rule.integrate(&mut h, mid, b);
        let diff = (left + right - c).abs();
        if diff <= tol || depth == MAX_DEPTH {
            value += left + right;
            err += diff;
        } else {
            stack.push((mid, b, right, 0.5 * tol, depth + 1));
            stack.push((a, mid, left, 0.5 * tol, depth + 1));
        }
    }
    (value, err)
}

/// The even, 2-periodic extension of `g` from `[0, 1]`.
fn periodic_even<G: Fn(f64) -> f64>(g: &G, x: f64) -> f64 {
    let y = x - 2.0 * (x / 2.0).floor();
    if y <= 1.0 {
        g(y)
    } else {
        g(2.0 - y)
    }
}

/// `|‖M_n g‖_s / ‖g‖_s − 1|`, where `M_n g(x) = g*(n x)` with `g*` the even
/// 2-periodic extension of `g`.
///
/// Both norms start from 64 GL16 panels per unit (so the kinks of the
/// dilated integrand at `x = l/n` fall on panel edges) and bisect where
/// `|g|^s` is rough, e.g. around sign changes of `g`.
pub fn isometry_check<G: Fn(f64) -> f64>(g: G, n: usize, s: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("dilation factor must be >= 1"));
    }
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::domain(format!("L_s needs finite s > 1, got {s}")));
    }
    let (base, e0) = panel_integral(|x| g(x).abs().powf(s), 1.0, NORM_PANELS);
    let (dilated, e1) = panel_integral(
        |x| periodic_even(&g, n as f64 * x).abs().powf(s),
        1.0,
        NORM_PANELS * n,
    );
    if !(base > 0.0) || !dilated.is_finite() {
        return Err(Error::domain("g must have a finite, nonzero L_s norm"));
    }
    let err = (e0 / base).max(e1 / dilated);
    if err > 1e-10 {
        return Err(Error::Quadrature { err_est: err });
    }
    Ok(((dilated / base).powf(1.0 / s) - 1.0).abs())
}

/// `A` truncated to indices `0..N`, stored by column.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedBasisOp {
    p: f64,
    size: usize,
    /// `columns[n]` lists `(k, A_{k,n})` with `k` increasing; the first entry
    /// is the diagonal.
    columns: Vec<Vec<(usize, f64)>>,
}

/// Builds `A` on `0..N` from the cosine coefficients of `cos_p(π_p x)`:
/// `A_{k,n} = b_{k/n}` when `n | k` and `k/n` is odd, and `A e_0 = e_0`.
pub fn build_truncated_a(p: f64, size: usize) -> Result<TruncatedBasisOp> {
    if size < 2 {
        return Err(Error::domain(format!("N must be >= 2, got {size}")));
    }
    let pe = PExponent::new(p)?;
    let table = CoeffTable::compute(&pe, CoeffKind::CosineB, size - 1)?;
    TruncatedBasisOp::from_table(&table, size)
}

impl TruncatedBasisOp {
    /// Uses `b_j` from `table`, which must reach `N − 1`.
    pub fn from_table(table: &CoeffTable, size: usize) -> Result<Self> {
        if table.kind() != CoeffKind::CosineB || table.j_max() + 1 < size {
            return Err(Error::domain("need cosine coefficients up to N - 1"));
        }
        let mut columns = vec![vec![(0, 1.0)]];
        for n in 1..size {
            let col = (1..)
                .step_by(2)
                .map(|m| m * n)
                .take_while(|&k| k < size)
                .filter_map(|k| {
                    let b = table.get(k / n).map_or(0.0, |c| c.value);
                    (b != 0.0 || k == n).then_some((k, b))
                })
                .collect();
            columns.push(col);
        }
        Ok(Self {
            p: table.exponent().p(),
            size,
            columns,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `A_{k,n}` (zero off the sparsity pattern).
    pub fn entry(&self, k: usize, n: usize) -> f64 {
        self.columns
            .get(n)
            .and_then(|col| col.iter().find(|&&(r, _)| r == k))
            .map_or(0.0, |&(_, v)| v)
    }

    pub fn column(&self, n: usize) -> &[(usize, f64)] {
        &self.columns[n]
    }

    /// `(k, n, A_{k,n})` for every stored entry, column by column.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(n, col)| col.iter().map(move |&(k, v)| (k, n, v)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.size {
            return Err(Error::domain(format!(
                "vector length {len} does not match N = {}",
                self.size
            )));
        }
        Ok(())
    }

    /// `A c` on plain coordinates.
    pub fn apply(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.check_len(c.len())?;
        let mut out = vec![0.0; self.size];
        for (col, &cn) in self.columns.iter().zip(c) {
            for &(k, v) in col {
                out[k] += v * cn;
            }
        }
        Ok(out)
    }

    /// Solves `A c = f` by forward substitution; `A` is lower triangular
    /// (column `n` only reaches rows that are odd multiples of `n`).
    pub fn solve(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_len(f.len())?;
        let b1 = self.columns.get(1).map_or(1.0, |col| col[0].1);
        if b1.abs() < 1e-12 {
            return Err(Error::Singular(b1));
        }
        let mut r = f.to_vec();
        let mut c = vec![0.0; self.size];
        for (n, col) in self.columns.iter().enumerate() {
            c[n] = r[n] / col[0].1;
            for &(k, v) in &col[1..] {
                r[k] -= v * c[n];
            }
        }
        Ok(c)
    }

    /// `max_n Σ_k |A_{k,n}|`.
    pub fn norm1(&self) -> f64 {
        self.columns
            .iter()
            .map(|col| col.iter().map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `‖A‖₁ ‖A⁻¹‖₁`, with the inverse formed column by column. This is an
    /// estimate for the truncation only, not a bound for the full operator.
    pub fn condition_estimate(&self) -> Result<f64> {
        let mut inv = 0.0f64;
        for n in 0..self.size {
            let mut e = vec![0.0; self.size];
            e[n] = 1.0;
            let col: f64 = self.solve(&e)?.iter().map(|v| v.abs()).sum();
            inv = inv.max(col);
        }
        Ok(self.norm1() * inv)
    }
}

/// Plain coordinates `c_0 = ∫ f_n`, `c_k = 2∫ f_n e_k` of
/// `f_n(x) = cos_p(n π_p x)`, for `k < size`, by direct quadrature.
///
/// `[0, 1]` is cut at the half-quadrant points `x = m/(2n)`, where `n x`
/// crosses a zero or extremum of `cos_p(π_p ·)`; each piece is integrated in
/// the local offset with graded panels at both ends.
pub fn pcosine_coordinates(p: &PExponent, n: usize, size: usize) -> Result<Vec<f64>> {
    if n == 0 {
        let mut c = vec![0.0; size];
        c[0] = 1.0;
        return Ok(c);
    }
    let rule = GaussLegendre::gl16();
    let bulk = size.div_ceil(n).clamp(2, 64);
    let panels: Vec<Panel> = graded_panels(0.5, bulk, 1e-13);
    let mut total = vec![0.0; size];
    let mut err = 0.0f64;
    let (mut coarse, mut fine) = (vec![0.0; size], vec![0.0; size]);
    let mut nodes: Vec<Node> = Vec::new();
    let sum_over = |nodes: &[Node], m: usize, out: &mut [f64]| -> Result<()> {
        out.fill(0.0);
        for node in nodes {
            let (_, c) = p.sin_cos_split(m as i64, node.from_left, node.from_right)?;
            // n x = m/2 + t
            let x = (0.5 * m as f64 + node.from_left) / n as f64;
            let wc = node.weight * c / n as f64;
            out[0] += wc;
            for (k, o) in out.iter_mut().enumerate().skip(1) {
                *o += 2.0 * wc * (k as f64 * PI * x).cos();
            }
        }
        Ok(())
    };
    for m in 0..2 * n {
        for panel in &panels {
            nodes.clear();
            panel.nodes(rule, 0.5, &mut nodes);
            sum_over(&nodes, m, &mut coarse)?;
            nodes.clear();
            for half in panel.split() {
                half.nodes(rule, 0.5, &mut nodes);
            }
            sum_over(&nodes, m, &mut fine)?;
            for k in 0..size {
                total[k] += fine[k];
                err = err.max((fine[k] - coarse[k]).abs());
            }
        }
    }
    if err > 1e-10 {
        return Err(Error::Quadrature { err_est: err });
    }
    Ok(total)
}

/// `max_k |A_{k,n} − f̂_n(k)|` over `k < N`, with `f̂_n` from direct
/// quadrature (plain coordinates, so `k = 0` compares `∫ f_n`).
pub fn reconstruct_check(p: f64, n: usize, size: usize) -> Result<f64> {
    if n >= size {
        return Err(Error::domain(format!(
            "need n < N, got n = {n}, N = {size}"
        )));
    }
    let op = build_truncated_a(p, size)?;
    reconstruct_with(&op, &PExponent::new(p)?, n)
}

/// [`reconstruct_check`] against a prebuilt operator.
pub fn reconstruct_with(op: &TruncatedBasisOp, p: &PExponent, n: usize) -> Result<f64> {
    let size = op.size();
    if n >= size {
        return Err(Error::domain(format!(
            "need n < N, got n = {n}, N = {size}"
        )));
    }
    let direct = pcosine_coordinates(p, n, size)?;
    Ok((0..size)
        .map(|k| (op.entry(k, n) - direct[k]).abs())
        .fold(0.0, f64::max))
}

/// Solves the truncated system `A c = f̂` for the coordinates of `f̂` in the
/// p-cosine system. Returns `c` (in `f̂`'s convention) and `‖A c − f̂‖∞`.
///
/// Meaningful when the basis criterion holds for `p`; only a vanishing `b_1`
/// is rejected here.
pub fn expand_in_pcosine(fhat: &CosineVector, p: f64, size: usize) -> Result<(CosineVector, f64)> {
    let op = build_truncated_a(p, size)?;
    expand_with(&op, fhat)
}

/// [`expand_in_pcosine`] with a prebuilt operator. `f̂` is truncated or
/// zero-padded to `N`.
pub fn expand_with(op: &TruncatedBasisOp, fhat: &CosineVector) -> Result<(CosineVector, f64)> {
    let mut f = fhat.coordinates();
    f.resize(op.size(), 0.0);
    let c = op.solve(&f)?;
    let back = op.apply(&c)?;
    let residual = back
        .iter()
        .zip(&f)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((
        CosineVector::from_coordinates(c, fhat.zero_term())?,
        residual,
    ))
}
