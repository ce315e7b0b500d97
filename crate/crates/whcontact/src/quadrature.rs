//! Contour and real-line integration primitives.
//!
//! Everything the factorization and inversion pipeline needs lives here:
//! adaptive Gauss-Kronrod panels, principal-value Cauchy integrals by
//! singularity subtraction, Cauchy transforms of a log-coefficient and their
//! Plemelj boundary values, product-integration weights for gridded Cauchy
//! kernels, and a Filon-type oscillatory inverse transform whose panel
//! moments are exact for polynomials times `exp(-i t x)`.
//!
//! Infinite tails are mapped to finite intervals by `t -> 1/t`. Integrands
//! with an `|s|` kink are always split at zero.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;

use num_complex::Complex64;

// Required for no_std math; shadowed by the inherent methods whenever
// dev-dependency feature unification links std into the test build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Tolerances and budgets for one integration task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Panel budget per top-level operation.
    pub max_panels: usize,
    /// Radius beyond which tails are handled by the `1/t` map (or by the
    /// fitted asymptotic term in the oscillatory inverse).
    pub truncation_radius: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-9,
            rel_tol: 1e-8,
            max_panels: 3000,
            truncation_radius: 50.0,
        }
    }
}

impl QuadratureSpec {
    /// Default tolerances for oscillatory inversion (absolute-error driven).
    pub fn oscillatory() -> Self {
        QuadratureSpec {
            abs_tol: 1e-7,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::BadArgument("tolerances must be positive"));
        }
        if self.max_panels < 16 {
            return Err(Error::BadArgument("max_panels must be at least 16"));
        }
        if !(self.truncation_radius > 0.0) {
            return Err(Error::BadArgument("truncation_radius must be positive"));
        }
        Ok(())
    }
}

/// Whether an integrand is smooth or carries the `|s|` derivative kink at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    KinkAtZero,
}

/// A real-line integrand with its declared algebraic decay rate.
pub struct RealFunctionHandle<F> {
    evaluator: F,
    decay_exponent: f64,
    smoothness: Smoothness,
}

impl<F: Fn(f64) -> f64> RealFunctionHandle<F> {
    pub fn new(evaluator: F, decay_exponent: f64, smoothness: Smoothness) -> Self {
        RealFunctionHandle {
            evaluator,
            decay_exponent,
            smoothness,
        }
    }

    pub fn smooth(evaluator: F, decay_exponent: f64) -> Self {
        Self::new(evaluator, decay_exponent, Smoothness::Smooth)
    }

    pub fn kinked(evaluator: F, decay_exponent: f64) -> Self {
        Self::new(evaluator, decay_exponent, Smoothness::KinkAtZero)
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.evaluator)(t)
    }

    pub fn decay_exponent(&self) -> f64 {
        self.decay_exponent
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    fn check_decay(&self) -> Result<()> {
        if self.decay_exponent > 0.0 {
            Ok(())
        } else {
            Err(Error::BadArgument(
                "decay_exponent must be positive for infinite intervals",
            ))
        }
    }
}

/// Integration interval for [`pv_cauchy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interval {
    FullLine,
    HalfLine,
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod core
// ---------------------------------------------------------------------------

/// Scalar-or-complex integrand values.
pub(crate) trait IntegrandValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, c: f64) -> Self;
    fn norm(self) -> f64;
}

impl IntegrandValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl IntegrandValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
    fn norm(self) -> f64 {
        self.norm()
    }
}

// 15-point Kronrod extension of 7-point Gauss on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<V: IntegrandValue>(f: &impl Fn(f64) -> V, a: f64, b: f64) -> (V, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let f_mid = f(mid);
    let mut kronrod = f_mid.scale(WGK[7]);
    let mut gauss = f_mid.scale(WG[3]);
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(mid - dx).add(f(mid + dx));
        kronrod = kronrod.add(pair.scale(WGK[j]));
        if j % 2 == 1 {
            gauss = gauss.add(pair.scale(WG[j / 2]));
        }
    }
    let value = kronrod.scale(half);
    let err = kronrod.add(gauss.scale(-1.0)).norm() * half.abs();
    (value, err)
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
}

struct PanelOrd(f64, usize);

impl PartialEq for PanelOrd {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0 && self.1 == other.1
    }
}
impl Eq for PanelOrd {}
impl PartialOrd for PanelOrd {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for PanelOrd {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.0
            .partial_cmp(&other.0)
            .unwrap_or(core::cmp::Ordering::Equal)
    }
}

/// Globally adaptive GK15 over a fixed list of seed segments. The budget is
/// shared across calls belonging to one public operation.
fn adaptive_segments<V: IntegrandValue>(
    f: &impl Fn(f64) -> V,
    segments: &[(f64, f64)],
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut usize,
) -> Result<V> {
    let mut panels: Vec<Panel<V>> = Vec::with_capacity(segments.len() + 64);
    let mut heap = BinaryHeap::new();
    let mut total = V::zero();
    let mut total_err = 0.0;
    for &(a, b) in segments {
        if a == b {
            continue;
        }
        let (value, err) = gk15(f, a, b);
        total = total.add(value);
        total_err += err;
        heap.push(PanelOrd(err, panels.len()));
        panels.push(Panel { a, b, value, err });
        *budget = budget.saturating_sub(1);
    }
    loop {
        if !total.norm().is_finite() {
            return Err(Error::Nonconvergence("non-finite integrand"));
        }
        if total_err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok(total);
        }
        if *budget < 2 {
            // Accept a modest overshoot rather than failing outright.
            if total_err <= 50.0 * abs_tol.max(rel_tol * total.norm()) {
                return Ok(total);
            }
            return Err(Error::Nonconvergence("panel budget exhausted"));
        }
        let Some(PanelOrd(err, idx)) = heap.pop() else {
            return Ok(total);
        };
        if panels[idx].err != err {
            continue; // stale heap entry
        }
        let Panel { a, b, value, err } = panels[idx];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // Interval at rounding resolution; keep its estimate.
            panels[idx].err = 0.0;
            total_err -= err;
            continue;
        }
        let (v1, e1) = gk15(f, a, mid);
        let (v2, e2) = gk15(f, mid, b);
        *budget = budget.saturating_sub(2);
        total = total.add(v1).add(v2).add(value.scale(-1.0));
        total_err += e1 + e2 - err;
        panels[idx] = Panel {
            a,
            b: mid,
            value: v1,
            err: e1,
        };
        heap.push(PanelOrd(e1, idx));
        heap.push(PanelOrd(e2, panels.len()));
        panels.push(Panel {
            a: mid,
            b,
            value: v2,
            err: e2,
        });
    }
}

fn adaptive<V: IntegrandValue>(
    f: &impl Fn(f64) -> V,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut usize,
) -> Result<V> {
    adaptive_segments(f, &[(a, b)], abs_tol, rel_tol, budget)
}

/// Geometric breakpoints covering [lo, hi], 0 < lo < hi, so that thin
/// features near the origin of a huge interval are never skipped over.
fn geometric_cuts(lo: f64, hi: f64) -> Vec<f64> {
    let mut cuts = Vec::new();
    let mut t = lo;
    cuts.push(t);
    while t * 4.0 < hi {
        t *= 4.0;
        cuts.push(t);
    }
    cuts.push(hi);
    cuts
}

/// Segments of `[lo, hi]` (with `0 <= lo < hi`) in geometric progression so
/// thin features near the origin are never skipped over.
fn push_graded_positive(out: &mut Vec<(f64, f64)>, lo: f64, hi: f64) {
    let anchor = lo.max(hi * 1e-12).max(f64::MIN_POSITIVE);
    if anchor >= hi {
        out.push((lo, hi));
        return;
    }
    let cuts = geometric_cuts(anchor, hi);
    let mut first = true;
    for w in cuts.windows(2) {
        let a = if first { lo } else { w[0] };
        first = false;
        out.push((a, w[1]));
    }
}

/// Integral over [lo, hi] with geometric pre-splitting away from zero.
fn integrate_graded<V: IntegrandValue>(
    f: &impl Fn(f64) -> V,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut usize,
) -> Result<V> {
    debug_assert!(lo < hi);
    let mut seg: Vec<(f64, f64)> = Vec::new();
    let mut tmp: Vec<(f64, f64)> = Vec::new();
    if lo >= 0.0 {
        push_graded_positive(&mut seg, lo, hi);
    } else if hi <= 0.0 {
        push_graded_positive(&mut tmp, -hi, -lo);
        for &(a, b) in &tmp {
            seg.push((-b, -a));
        }
    } else {
        push_graded_positive(&mut seg, 0.0, hi);
        push_graded_positive(&mut tmp, 0.0, -lo);
        for &(a, b) in &tmp {
            seg.push((-b, -a));
        }
    }
    adaptive_segments(f, &seg, abs_tol, rel_tol, budget)
}

/// `int_R^inf f(t) dt` via the substitution `t = 1/u`.
fn tail_positive<V: IntegrandValue>(
    f: &impl Fn(f64) -> V,
    r: f64,
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut usize,
) -> Result<V> {
    let g = |u: f64| f(1.0 / u).scale(1.0 / (u * u));
    adaptive(&g, 0.0, 1.0 / r, abs_tol, rel_tol, budget)
}

/// `int_{-inf}^{-R} f(t) dt`.
fn tail_negative<V: IntegrandValue>(
    f: &impl Fn(f64) -> V,
    r: f64,
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut usize,
) -> Result<V> {
    let g = |u: f64| f(-1.0 / u).scale(1.0 / (u * u));
    adaptive(&g, 0.0, 1.0 / r, abs_tol, rel_tol, budget)
}

// ---------------------------------------------------------------------------
// Principal-value Cauchy integrals
// ---------------------------------------------------------------------------

/// PV over a finite panel [a, b] containing x, by singularity subtraction:
/// `f(t) = [f(t) - f(x)] + f(x)`, the log term integrated in closed form.
fn pv_finite(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    x: f64,
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut usize,
) -> Result<f64> {
    debug_assert!(a < x && x < b);
    let fx = f(x);
    let sub = |t: f64| {
        if t == x {
            0.0
        } else {
            (f(t) - fx) / (t - x)
        }
    };
    let smooth = adaptive_segments(&sub, &[(a, x), (x, b)], abs_tol, rel_tol, budget)?;
    Ok(smooth + fx * ((b - x) / (x - a)).ln())
}

/// Principal value `int f(t)/(t - x) dt` over the full line or the half line
/// `[0, inf)`.
pub fn pv_cauchy<F: Fn(f64) -> f64>(
    f: &RealFunctionHandle<F>,
    interval: Interval,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    f.check_decay()?;
    let mut budget = spec.max_panels;
    let kernel = |t: f64| f.eval(t) / (t - x);
    let r = spec.truncation_radius.max(2.0 * x.abs() + 10.0);
    let (at, rt) = (spec.abs_tol, spec.rel_tol);

    // PV panel half-width: a few absolute units near the origin, scaled up
    // for huge |x| so that x - d stays representable in f64.
    let cap = 5.0f64.max(1e-8 * x.abs());

    match interval {
        Interval::HalfLine => {
            if x <= 0.0 {
                return Err(Error::SingularEndpoint(x));
            }
            let d = (x * 0.5).min((r - x) * 0.5).min(cap);
            let mut total = pv_finite(&|t| f.eval(t), x - d, x + d, x, at, rt, &mut budget)?;
            if x - d > 0.0 {
                total += integrate_graded(&kernel, 0.0, x - d, at, rt, &mut budget)?;
            }
            total += integrate_graded(&kernel, x + d, r, at, rt, &mut budget)?;
            total += tail_positive(&kernel, r, at, rt, &mut budget)?;
            Ok(total)
        }
        Interval::FullLine => {
            let d = if x == 0.0 {
                r.min(10.0) * 0.5
            } else {
                (x.abs() * 0.5).min((r - x.abs()) * 0.5).min(cap)
            };
            let kinked = f.smoothness() == Smoothness::KinkAtZero;
            let mut total = pv_finite(&|t| f.eval(t), x - d, x + d, x, at, rt, &mut budget)?;
            // Remaining pieces of [-r, r], split at 0 when the integrand kinks.
            let mut edges = Vec::new();
            push_segment(&mut edges, -r, x - d, kinked);
            push_segment(&mut edges, x + d, r, kinked);
            for (a, b) in edges {
                total += integrate_graded(&kernel, a, b, at, rt, &mut budget)?;
            }
            total += tail_positive(&kernel, r, at, rt, &mut budget)?;
            total += tail_negative(&kernel, r, at, rt, &mut budget)?;
            Ok(total)
        }
    }
}

fn push_segment(out: &mut Vec<(f64, f64)>, a: f64, b: f64, split_at_zero: bool) {
    if a >= b {
        return;
    }
    if split_at_zero && a < 0.0 && b > 0.0 {
        out.push((a, 0.0));
        out.push((0.0, b));
    } else {
        out.push((a, b));
    }
}

// ---------------------------------------------------------------------------
// Cauchy transforms of a log-coefficient and their boundary values
// ---------------------------------------------------------------------------

/// `(1/(2 pi i)) int ln G(s) ds / (s - z)` for `Im z != 0`. The exponential
/// of the result is the canonical solution `X(z)`.
pub fn log_cauchy_transform<F: Fn(f64) -> f64>(
    log_g: &RealFunctionHandle<F>,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    spec.validate()?;
    log_g.check_decay()?;
    if z.im == 0.0 {
        return Err(Error::OnAxis);
    }
    let mut budget = spec.max_panels;
    let r = spec.truncation_radius.max(2.0 * z.re.abs() + 10.0);
    let kernel = |t: f64| Complex64::new(log_g.eval(t), 0.0) / (Complex64::new(t, 0.0) - z);
    let mut total = integrate_graded(&kernel, -r, r, spec.abs_tol, spec.rel_tol, &mut budget)?;
    total += tail_positive(&kernel, r, spec.abs_tol, spec.rel_tol, &mut budget)?;
    total += tail_negative(&kernel, r, spec.abs_tol, spec.rel_tol, &mut budget)?;
    Ok(total / Complex64::new(0.0, 2.0 * core::f64::consts::PI))
}

/// Plemelj boundary values of the canonical solution on the real axis:
/// `X±(s) = exp(±ln G(s)/2 + (1/(2 pi i)) PV int ln G(t) dt/(t - s))`.
///
/// Both values share one PV evaluation, so `X+ = G X-` holds to rounding;
/// `|X±| = G(s)^(±1/2)` keeps both bounded away from zero for positive G.
pub fn boundary_values<F: Fn(f64) -> f64>(
    log_g: &RealFunctionHandle<F>,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    let pv = pv_cauchy(log_g, Interval::FullLine, s, spec)?;
    let half = 0.5 * log_g.eval(s);
    // (1/(2 pi i)) * pv is purely imaginary for real ln G: a unit phase.
    let phase = -pv / (2.0 * core::f64::consts::PI);
    let x_plus = Complex64::from_polar(half.exp(), phase);
    let x_minus = Complex64::from_polar((-half).exp(), phase);
    Ok((x_plus, x_minus))
}

// ---------------------------------------------------------------------------
// Product integration of gridded data against the Cauchy kernel
// ---------------------------------------------------------------------------

/// Weights `w_j` such that `sum_j w_j v_j ~ PV int v(t)/(t - x) dt` for the
/// piecewise-linear interpolant `v` through `(nodes[j], v_j)`.
///
/// `singular`: index `i` with `x == nodes[i]` (interior), or `None` when `x`
/// lies strictly inside a panel or outside the grid. The log terms of the
/// principal value are evaluated in closed form, so constants integrate to
/// `ln((b - x)/(x - a))` exactly.
pub fn pv_weights(nodes: &[f64], x: f64, singular: Option<usize>) -> Result<Vec<f64>> {
    let n = nodes.len();
    if n < 3 {
        return Err(Error::BadArgument("pv_weights needs at least three nodes"));
    }
    let mut w = alloc::vec![0.0; n];
    match singular {
        Some(i) => {
            if i == 0 || i + 1 >= n {
                return Err(Error::SingularEndpoint(x));
            }
            if nodes[i] != x {
                return Err(Error::BadArgument("singular index does not match x"));
            }
            // Joint treatment of the two panels around the node.
            let a = nodes[i - 1];
            let b = nodes[i + 1];
            w[i - 1] -= 1.0;
            w[i] += ((b - x) / (x - a)).ln();
            w[i + 1] += 1.0;
            for j in 0..n - 1 {
                if j + 1 == i || j == i {
                    continue;
                }
                accumulate_panel(&mut w, nodes, j, x, false);
            }
        }
        None => {
            for j in 0..n - 1 {
                let inside = nodes[j] < x && x < nodes[j + 1];
                accumulate_panel(&mut w, nodes, j, x, inside);
            }
        }
    }
    Ok(w)
}

fn accumulate_panel(w: &mut [f64], nodes: &[f64], j: usize, x: f64, pv_inside: bool) {
    let a = nodes[j];
    let b = nodes[j + 1];
    let h = b - a;
    let l = if pv_inside {
        ((b - x) / (x - a)).ln()
    } else {
        ((b - x) / (a - x)).abs().ln()
    };
    let frac = (x - a) / h;
    w[j] += l * (1.0 - frac) - 1.0;
    w[j + 1] += l * frac + 1.0;
}

// ---------------------------------------------------------------------------
// Oscillatory Fourier inversion
// ---------------------------------------------------------------------------

/// `mu_m(theta) = int_0^1 w^m exp(-i theta w) dw` for m = 0, 1, 2.
fn filon_mu(theta: f64) -> [Complex64; 3] {
    if theta.abs() < 0.5 {
        // Maclaurin series; 24 terms give full precision for |theta| < 0.5.
        let mut mu = [Complex64::new(0.0, 0.0); 3];
        for (m, slot) in mu.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0, 0.0);
            let mut sum = Complex64::new(1.0 / (m as f64 + 1.0), 0.0);
            for n in 1..24 {
                term *= Complex64::new(0.0, -theta) / n as f64;
                sum += term / (m as f64 + n as f64 + 1.0);
            }
            *slot = sum;
        }
        mu
    } else {
        let it = Complex64::new(0.0, theta);
        let e = Complex64::new(0.0, -theta).exp();
        let mu0 = (Complex64::new(1.0, 0.0) - e) / it;
        let mu1 = (mu0 - e) / it;
        let mu2 = ((mu1 + mu1) - e) / it;
        [mu0, mu1, mu2]
    }
}

/// Exact integral of the quadratic through `(t0,v0),(t1,v1),(t2,v2)` times
/// `exp(-i t x)` over `[t0, t2]`.
fn filon_panel_quadratic(
    t0: f64,
    t1: f64,
    t2: f64,
    v0: Complex64,
    v1: Complex64,
    v2: Complex64,
    x: f64,
) -> Complex64 {
    let u1 = t1 - t0;
    let u2 = t2 - t0;
    let c0 = v0;
    let c2 = ((v2 - v0) / u2 - (v1 - v0) / u1) / (u2 - u1);
    let c1 = (v1 - v0) / u1 - c2 * u1;
    let mu = filon_mu(x * u2);
    let phase = Complex64::new(0.0, -t0 * x).exp();
    phase * (c0 * mu[0].scale(u2) + c1 * mu[1].scale(u2 * u2) + c2 * mu[2].scale(u2 * u2 * u2))
}

fn filon_panel_linear(t0: f64, t1: f64, v0: Complex64, v1: Complex64, x: f64) -> Complex64 {
    let u1 = t1 - t0;
    let c1 = (v1 - v0) / u1;
    let mu = filon_mu(x * u1);
    let phase = Complex64::new(0.0, -t0 * x).exp();
    phase * (v0 * mu[0].scale(u1) + c1 * mu[1].scale(u1 * u1))
}

/// `int f(t) exp(-i t x) dt` over gridded nodes by composite quadratic
/// panels (a trailing odd interval falls back to a linear panel).
pub(crate) fn filon_grid(nodes: &[f64], values: &[Complex64], x: f64) -> Complex64 {
    debug_assert_eq!(nodes.len(), values.len());
    let mut total = Complex64::new(0.0, 0.0);
    let mut j = 0;
    while j + 2 < nodes.len() {
        total += filon_panel_quadratic(
            nodes[j],
            nodes[j + 1],
            nodes[j + 2],
            values[j],
            values[j + 1],
            values[j + 2],
            x,
        );
        j += 2;
    }
    if j + 1 < nodes.len() {
        total += filon_panel_linear(nodes[j], nodes[j + 1], values[j], values[j + 1], x);
    }
    total
}

/// `J(w, p) = int_0^inf (w - i s)^(-p) e^(-s) ds`, the rotated-contour
/// factor of the algebraic oscillatory tail (`w = R x > 0`).
fn rotated_tail_factor(w: f64, p: f64, budget: &mut usize) -> Result<Complex64> {
    let f = |s: f64| Complex64::new(w, -s).powf(-p) * (-s).exp();
    adaptive(&f, 0.0, 60.0, 1e-13, 1e-11, budget)
}

/// Three-term algebraic tail model of one side of the spectrum:
/// `Fhat(side * t) ~ sum_j C_j t^{-(p+j)}`, `j = 0..3`, fitted from samples
/// on `[r/2, r]`. The leading exponent comes from a log-log slope; the
/// coefficients solve a small collocation system at `t = r, 0.8 r, 0.64 r`.
/// All-zero samples give a zero model.
/// Leading tail exponent fitted on `|Fhat|` over `[r/2, r]`, both signs
/// pooled: a real stress has `Fhat(-t) = conj Fhat(t)`, so `|Fhat|` is even
/// and a single exponent serves both tails (independent per-side exponents
/// would amplify tiny asymmetries of the tabulated spectrum). Returns the
/// fallback when the samples are numerically zero.
fn fit_tail_exponent(fhat: &impl Fn(f64) -> Complex64, r: f64, fallback_p: f64) -> (f64, f64) {
    const M: usize = 8;
    let mut scale = 0.0f64;
    let mut xs = [0.0; 2 * M];
    let mut ys = [0.0; 2 * M];
    for i in 0..M {
        let t = 0.5 * r * (2.0f64).powf(i as f64 / (M - 1) as f64);
        for (k, side) in [1.0f64, -1.0].iter().enumerate() {
            let v = fhat(side * t);
            scale = scale.max(v.norm());
            xs[2 * i + k] = t.ln();
            ys[2 * i + k] = v.norm().max(f64::MIN_POSITIVE).ln();
        }
    }
    if scale < 1e-280 {
        return (fallback_p.clamp(0.05, 8.0), scale);
    }
    let n = (2 * M) as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|v| v * v).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(a, b)| a * b).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let mut p = -slope;
    if !p.is_finite() || !(0.05..=8.0).contains(&p) {
        p = fallback_p.clamp(0.05, 8.0);
    }
    (p, scale)
}

/// Coefficients of the three-term tail model `sum_j C_j t^{-(p+j)}` on one
/// side, by collocation at `t = r, 0.8 r, 0.64 r`.
fn fit_tail_coefficients(
    fhat: &impl Fn(f64) -> Complex64,
    r: f64,
    side: f64,
    p: f64,
) -> [Complex64; 3] {
    let zero = [Complex64::new(0.0, 0.0); 3];
    // Normalized unknowns y_j = C_j r^{-(p+j)} keep the system O(1).
    let q = 0.8f64;
    let mut mat = [[Complex64::new(0.0, 0.0); 3]; 3];
    let mut rhs = [Complex64::new(0.0, 0.0); 3];
    for (i, row) in mat.iter_mut().enumerate() {
        let ti = r * q.powi(i as i32);
        rhs[i] = fhat(side * ti);
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = Complex64::new((ti / r).powf(-(p + j as f64)), 0.0);
        }
    }
    if !solve3(&mut mat, &mut rhs) {
        return zero;
    }
    let mut c = [Complex64::new(0.0, 0.0); 3];
    for j in 0..3 {
        c[j] = rhs[j] * r.powf(p + j as f64);
    }
    c
}

/// In-place Gaussian elimination of a 3x3 complex system.
fn solve3(a: &mut [[Complex64; 3]; 3], b: &mut [Complex64; 3]) -> bool {
    for col in 0..3 {
        let mut piv = col;
        for r in col + 1..3 {
            if a[r][col].norm() > a[piv][col].norm() {
                piv = r;
            }
        }
        if a[piv][col].norm() < 1e-14 {
            return false;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            let pivot_row = a[col];
            for (c, entry) in a[r].iter_mut().enumerate().skip(col) {
                *entry -= f * pivot_row[c];
            }
            let pivot_val = b[col];
            b[r] -= f * pivot_val;
        }
    }
    for r in (0..3).rev() {
        let mut acc = b[r];
        for c in r + 1..3 {
            acc -= a[r][c] * b[c];
        }
        b[r] = acc / a[r][r];
    }
    true
}

/// Inverse Fourier transform `(1/(2 pi)) int Fhat(t) exp(-i t x) dt` at
/// `x > 0` for a spectrum decaying like `|t|^(-tail_exponent)`.
///
/// The band `[-R, R]` is integrated by panel-wise product rules exact for
/// quadratics times the oscillator; each tail is replaced by its fitted
/// leading term `C |t|^(-p)` and integrated semi-analytically on a rotated
/// contour. `tail_exponent <= 0.25` widens the truncation radius fourfold.
pub fn oscillatory_inverse<F: Fn(f64) -> Complex64>(
    fhat: F,
    tail_exponent: f64,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    spec.validate()?;
    if !(x > 0.0) {
        return Err(Error::BadArgument("oscillatory_inverse requires x > 0"));
    }
    let mut r = spec.truncation_radius;
    if tail_exponent <= 0.25 {
        r *= 4.0;
    }

    // Symmetric geometric ladder, dense near the kink at t = 0.
    let t_min = r * 1e-7;
    let ratio = 1.02f64;
    let mut pos = Vec::with_capacity(2048);
    pos.push(0.0);
    let mut t = t_min;
    while t < r {
        pos.push(t);
        t *= ratio;
    }
    pos.push(r);

    let mut band = Complex64::new(0.0, 0.0);
    {
        let vals: Vec<Complex64> = pos.iter().map(|&t| fhat(t)).collect();
        band += filon_grid(&pos, &vals, x);
        // Negative side via reflection: int_{-r}^0 F(t) e^{-itx} dt
        //                             = int_0^r F(-u) e^{-iu(-x)} du.
        let vals_neg: Vec<Complex64> = pos.iter().map(|&t| fhat(-t)).collect();
        band += filon_grid(&pos, &vals_neg, -x);
    }

    // Each tail term: int_r^inf t^{-q} e^{∓itx} dt
    //   = x^{q-1} (∓i) e^{∓irx} int_0^inf (rx ∓ is)^{-q} e^{-s} ds.
    let mut budget = spec.max_panels;
    let (p, scale) = fit_tail_exponent(&fhat, r, tail_exponent);
    let mut tails = Complex64::new(0.0, 0.0);
    if scale > 1e-280 {
        let c_pos = fit_tail_coefficients(&fhat, r, 1.0, p);
        let c_neg = fit_tail_coefficients(&fhat, r, -1.0, p);
        for j in 0..3 {
            let q = p + j as f64;
            if c_pos[j].norm() == 0.0 && c_neg[j].norm() == 0.0 {
                continue;
            }
            let factor = rotated_tail_factor(r * x, q, &mut budget)?;
            let xq = x.powf(q - 1.0);
            tails += c_pos[j]
                * xq
                * Complex64::new(0.0, -1.0)
                * Complex64::new(0.0, -r * x).exp()
                * factor;
            tails += c_neg[j]
                * xq
                * Complex64::new(0.0, 1.0)
                * Complex64::new(0.0, r * x).exp()
                * factor.conj();
        }
    }

    Ok((band + tails) / (2.0 * core::f64::consts::PI))
}

// ---------------------------------------------------------------------------
// Plain integration helpers used by the factorization pipeline
// ---------------------------------------------------------------------------

/// Adaptive integral over a finite interval (complex values).
pub(crate) fn integrate_complex(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let mut budget = spec.max_panels;
    integrate_graded(&f, a, b, spec.abs_tol, spec.rel_tol, &mut budget)
}

/// Adaptive integral of `f` over `[r, inf)` via the `1/t` map.
pub(crate) fn integrate_tail_complex(
    f: &impl Fn(f64) -> Complex64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let mut budget = spec.max_panels;
    tail_positive(&f, r, spec.abs_tol, spec.rel_tol, &mut budget)
}
