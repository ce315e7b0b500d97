//! Wiener-Hopf solution of the transform-domain Riemann problem.
//!
//! The contact equation becomes, on the real transform axis,
//!
//! ```text
//! Phi+(s) (1 + lambda|s| + k s^2) = F-(s) + i lambda T sgn s - k phi'(0) + i k s T
//! ```
//!
//! with `Phi+` analytic in the upper half-plane and `F-` in the lower. The
//! coefficient is split as `G(s) R+(s) R-(s)` in two ways:
//!
//! - case A (valid for all `k >= 0`): `G = M / (sqrt(1+lambda^2 s^2)
//!   sqrt(1+ktilde^2 s^2))`, rational factors `sqrt(lambda s ± i)
//!   sqrt(ktilde s ± i)` with branch cuts along rays from `∓i/lambda`,
//!   `∓i/ktilde` in the +x direction;
//! - case B (valid for `k > 0`): `G = M / (1 + k s^2)`, factors
//!   `1 ∓ i sqrt(k) s`.
//!
//! `X(z) = exp((1/(2 pi i)) int ln G(s) ds/(s-z))` is the canonical solution
//! of the conjugation problem `X+ = G X-`; projecting the forcing onto the
//! upper half-plane eliminates the unknown `phi'(0)` (its kernel is a pure
//! minus-function) and yields `Phi` in closed form. The additive constant of
//! the projection is pinned by the end condition `phi(0+) = T`, equivalently
//! by `z Phi(z) -> iT`: with it, `K(z) = -T - i z Phi(z)` (the transform of
//! `phi'`) decays at infinity and the stress is the inverse transform of
//! `-K` on `x > 0`.
//!
//! All computations run in units of `lambda` with dimensionless compliance
//! `kappa = k/lambda^2`; conversions happen at the API boundary.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

// Required for no_std math; shadowed by the inherent methods whenever
// dev-dependency feature unification links std into the test build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::params::{ContactCase, ModelParams};
use crate::quadrature::{
    self, boundary_values, log_cauchy_transform, oscillatory_inverse, QuadratureSpec,
    RealFunctionHandle,
};
use crate::{Error, Result};

const PI: f64 = core::f64::consts::PI;

/// Which factorization of the coefficient is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    /// Case A with `k > 0`: bounded endpoint stress.
    CaseAPositive,
    /// Case A at `k = 0`: rigid contact, singular endpoint stress.
    CaseARigid,
    /// Case B, `k > 0`.
    CaseB,
}

/// A coefficient case bound to concrete model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientCase {
    pub kind: CaseKind,
    pub params: ModelParams,
}

impl CoefficientCase {
    pub fn new(params: ModelParams) -> Result<Self> {
        let kind = match params.case {
            ContactCase::CaseA => {
                if params.k > 0.0 {
                    CaseKind::CaseAPositive
                } else {
                    CaseKind::CaseARigid
                }
            }
            ContactCase::RigidLimit => {
                if params.k != 0.0 {
                    return Err(Error::CaseMismatch("rigid kind requires k = 0"));
                }
                CaseKind::CaseARigid
            }
            ContactCase::CaseB => {
                if params.k <= 0.0 {
                    return Err(Error::CaseMismatch("case B requires k > 0"));
                }
                CaseKind::CaseB
            }
        };
        Ok(CoefficientCase { kind, params })
    }

    fn kappa(&self) -> f64 {
        self.params.kappa()
    }

    /// ln G at dimensionless sigma = lambda*s.
    fn log_g(&self, sigma: f64) -> f64 {
        let a = sigma.abs();
        let kappa = self.kappa();
        match self.kind {
            CaseKind::CaseAPositive => {
                let m = 1.0 + a + kappa * sigma * sigma;
                let d2 = (1.0 + sigma * sigma) * (1.0 + kappa * kappa * sigma * sigma);
                (m * m / d2).ln() * 0.5
            }
            CaseKind::CaseARigid => {
                let m = 1.0 + a;
                (m * m / (1.0 + sigma * sigma)).ln() * 0.5
            }
            CaseKind::CaseB => {
                let m = 1.0 + a + kappa * sigma * sigma;
                (m / (1.0 + kappa * sigma * sigma)).ln()
            }
        }
    }

    fn log_g_handle(&self) -> RealFunctionHandle<impl Fn(f64) -> f64 + '_> {
        RealFunctionHandle::kinked(move |sigma: f64| self.log_g(sigma), 1.0)
    }

    /// The non-Cauchy factors (R+, R-) at dimensionless zeta.
    fn factors(&self, zeta: Complex64) -> (Complex64, Complex64) {
        let kappa = self.kappa();
        match self.kind {
            CaseKind::CaseAPositive => (
                sqrt_plus(1.0, zeta) * sqrt_plus(kappa, zeta),
                sqrt_minus(1.0, zeta) * sqrt_minus(kappa, zeta),
            ),
            CaseKind::CaseARigid => (sqrt_plus(1.0, zeta), sqrt_minus(1.0, zeta)),
            CaseKind::CaseB => {
                let sk = kappa.sqrt();
                let i_sk_z = Complex64::new(0.0, sk) * zeta;
                (
                    Complex64::new(1.0, 0.0) - i_sk_z,
                    Complex64::new(1.0, 0.0) + i_sk_z,
                )
            }
        }
    }

    /// Additive constant of the upper projection, fixed by `phi(0+) = T`.
    /// `R+(z)` grows like `sqrt(kappa) z` (case A) or `-i sqrt(kappa) z`
    /// (case B), so the constant is `i sqrt(kappa) T` resp. `sqrt(kappa) T`;
    /// it vanishes in the rigid limit where `R+` grows only like `sqrt(z)`.
    fn projection_constant(&self) -> Complex64 {
        let t = self.params.t_load;
        let sk = self.kappa().sqrt();
        match self.kind {
            CaseKind::CaseAPositive => Complex64::new(0.0, sk * t),
            CaseKind::CaseARigid => Complex64::new(0.0, 0.0),
            CaseKind::CaseB => Complex64::new(sk * t, 0.0),
        }
    }
}

/// Branch of `sqrt(a z + i)` cut along the ray from `-i/a` in the +x
/// direction, positive on the upper side of the cut. Realized as the
/// continuous-argument square root with `arg` taken in `[0, 2 pi)`.
pub(crate) fn sqrt_plus(a: f64, z: Complex64) -> Complex64 {
    if a == 0.0 {
        // sqrt(i): the k -> 0 degeneration of the ktilde factor.
        return Complex64::from_polar(1.0, PI / 4.0);
    }
    let w = z.scale(a) + Complex64::new(0.0, 1.0);
    let mut theta = w.arg();
    if theta < 0.0 {
        theta += 2.0 * PI;
    }
    Complex64::from_polar(w.norm().sqrt(), 0.5 * theta)
}

/// Branch of `sqrt(a z - i)` cut along the ray from `i/a` in the +x
/// direction, negative on the upper side of the cut.
pub(crate) fn sqrt_minus(a: f64, z: Complex64) -> Complex64 {
    if a == 0.0 {
        // -sqrt(-i) = e^{-i pi/4}.
        return Complex64::from_polar(1.0, -PI / 4.0);
    }
    let w = z.scale(a) - Complex64::new(0.0, 1.0);
    let mut theta = w.arg();
    if theta < 0.0 {
        theta += 2.0 * PI;
    }
    -Complex64::from_polar(w.norm().sqrt(), 0.5 * theta)
}

/// Coefficient `G(s)` of the conjugation problem at physical `s`, together
/// with the rational factors `(R+, R-)` of the requested case.
///
/// `G` is positive, even, equals 1 at `s = 0` and at infinity, and the
/// factors satisfy `G(s) R+(s) R-(s) = 1 + lambda|s| + k s^2`.
pub fn coefficient(case: &CoefficientCase, s: f64) -> (f64, (Complex64, Complex64)) {
    let sigma = case.params.lambda * s;
    let g = case.log_g(sigma).exp();
    let factors = case.factors(Complex64::new(sigma, 0.0));
    (g, factors)
}

/// Canonical solution `X(z)` of `X+ = G X-` at physical `z` off the real
/// axis: the exponential of the Cauchy transform of `ln G`. Nonvanishing,
/// `X(inf) = 1`.
pub fn canonical_x(
    case: &CoefficientCase,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let zeta = z.scale(case.params.lambda);
    let handle = case.log_g_handle();
    Ok(log_cauchy_transform(&handle, zeta, spec)?.exp())
}

// ---------------------------------------------------------------------------
// Prepared factorization: tabulated X-(t)/R-(t) on the positive half line
// ---------------------------------------------------------------------------

/// Per-case tables reused across evaluations of the transform solution:
/// `W(t) = X-(t)/R-(t)` on a geometric grid of `[0, r_w]` plus the moments
/// of its algebraic tail.
struct Prepared<'a> {
    case: &'a CoefficientCase,
    spec: QuadratureSpec,
    w_nodes: Vec<f64>,
    /// Phase of `X-` at the nodes. `W(t) = G(t)^{-1/2} e^{i psi(t)} / R-(t)`
    /// with `G` and `R-` in closed form, so only this smooth, algebraically
    /// decaying phase is interpolated: its error shrinks exactly where the
    /// spectrum evaluation `Khat = T + i t Phi+` amplifies absolute noise
    /// by `t`.
    psi_vals: Vec<f64>,
    r_w: f64,
    /// `int_{r_w}^inf W(t) t^{-(m+1)} dt`; enough orders that the kernel
    /// expansion of the tail still converges past 1e-10 at `|z| = r_w/4`.
    tail_moments: [Complex64; 16],
}

const W_GRID_DENSITY: f64 = 140.0; // nodes per ln-unit
const W_GRID_MIN: f64 = 1e-6;

/// Inner tolerances for the spectrum tabulation. The imaginary residue of
/// the recovered stress measures the mismatch between the independently
/// computed `t > 0` and `t < 0` halves of the spectrum, so the inner
/// quadratures must run well below the 1e-8 realness threshold.
fn inner_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: (spec.abs_tol * 1e-2).max(1e-13),
        rel_tol: (spec.rel_tol * 1e-2).max(1e-12),
        max_panels: spec.max_panels * 2,
        truncation_radius: spec.truncation_radius,
    }
}

impl<'a> Prepared<'a> {
    fn build(case: &'a CoefficientCase, spec: &QuadratureSpec, reach: f64) -> Result<Self> {
        let spec = &inner_spec(spec);
        let r_w = 4.0 * reach.max(50.0);
        let mut w_nodes = Vec::new();
        w_nodes.push(0.0);
        let ratio = (1.0 / W_GRID_DENSITY).exp();
        let mut t = W_GRID_MIN;
        while t < r_w {
            w_nodes.push(t);
            t *= ratio;
        }
        w_nodes.push(r_w);

        let handle = case.log_g_handle();
        let mut psi_vals = Vec::with_capacity(w_nodes.len());
        for &t in &w_nodes {
            psi_vals.push(psi_at(&handle, t, spec)?);
        }

        // Tail moments: subtract the known leading behavior A t^{-q} of W
        // (q = 1/2 in the rigid case, 1 otherwise) and integrate it in
        // closed form; the remainder decays an extra power with only a
        // logarithmic factor, so the 1/t map leaves smooth integrands.
        let q = match case.kind {
            CaseKind::CaseARigid => 0.5,
            _ => 1.0,
        };
        let a_coef = w_at(case, &handle, r_w, spec)? * r_w.powf(q);
        let mut tail_moments = [Complex64::new(0.0, 0.0); 16];
        for (m, moment) in tail_moments.iter_mut().enumerate() {
            let f = |t: f64| -> Complex64 {
                match w_at(case, &handle, t, spec) {
                    Ok(v) => (v - a_coef * t.powf(-q)) * t.powi(-(m as i32 + 1)),
                    Err(_) => Complex64::new(f64::NAN, f64::NAN),
                }
            };
            let correction = quadrature::integrate_tail_complex(&f, r_w, spec)?;
            let leading = a_coef * r_w.powf(-(m as f64 + q)) / (m as f64 + q);
            *moment = correction + leading;
        }

        Ok(Prepared {
            case,
            spec: *spec,
            w_nodes,
            psi_vals,
            r_w,
            tail_moments,
        })
    }

    /// W from the interpolated phase and the closed-form magnitude. The
    /// interpolation (centered cubic) touches only `psi`; a one-sided or
    /// lower-order stencil would leave a signed bias that survives the
    /// Cauchy integrals and breaks the Hermitian symmetry of the spectrum.
    fn w_interp(&self, t: f64) -> Complex64 {
        debug_assert!(t >= 0.0 && t <= self.r_w);
        let psi = lagrange4_real(&self.w_nodes, &self.psi_vals, t);
        w_from_phase(self.case, t, psi)
    }

    /// Tail `int_{r_w}^inf W(t)/(t - z) dt` by the moment expansion of the
    /// kernel; requires `|z| <= r_w/4`, guaranteed by construction.
    fn tail_cauchy(&self, z: Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut zp = Complex64::new(1.0, 0.0);
        for m in 0..self.tail_moments.len() {
            total += zp * self.tail_moments[m];
            zp *= z;
        }
        total
    }

    /// `H(z) = int_0^inf W(t)/(t - z) dt` for `Im z > 0`.
    fn half_line_cauchy_complex(&self, z: Complex64) -> Result<Complex64> {
        let f = |t: f64| self.w_interp(t) / (Complex64::new(t, 0.0) - z);
        let body = quadrature::integrate_complex(&f, 0.0, self.r_w, &self.spec)?;
        Ok(body + self.tail_cauchy(z))
    }

    /// Boundary value `H+(s) = lim_{eps->0+} H(s + i eps)` at real `s`:
    /// principal value plus the half-residue `i pi W(s)` for `s > 0`.
    ///
    /// The subtraction constant and the half-residue use an exact `W(s)`:
    /// the interpolant's bias would otherwise enter the spectrum with a
    /// sign that breaks the Hermitian symmetry of `Khat` (the interpolation
    /// error inside the integral alternates sign panel to panel and
    /// largely cancels; the pointwise value at `s` does not).
    fn half_line_cauchy_boundary(&self, s: f64) -> Result<Complex64> {
        if s <= 0.0 {
            let f = |t: f64| self.w_interp(t) / Complex64::new(t - s, 0.0);
            let body = quadrature::integrate_complex(&f, 0.0, self.r_w, &self.spec)?;
            return Ok(body + self.tail_cauchy(Complex64::new(s, 0.0)));
        }
        debug_assert!(s < self.r_w);
        let handle = self.case.log_g_handle();
        let ws = w_at(self.case, &handle, s, &self.spec)?;
        let sub = |t: f64| {
            if t == s {
                Complex64::new(0.0, 0.0)
            } else {
                (self.w_interp(t) - ws) / Complex64::new(t - s, 0.0)
            }
        };
        let left = quadrature::integrate_complex(&sub, 0.0, s, &self.spec)?;
        let right = quadrature::integrate_complex(&sub, s, self.r_w, &self.spec)?;
        let log_term = ws.scale(((self.r_w - s) / s).ln());
        let pv = left + right + log_term + self.tail_cauchy(Complex64::new(s, 0.0));
        Ok(pv + Complex64::new(0.0, PI) * ws)
    }

    /// `Phi(z)` in dimensionless variables, `Im z > 0`.
    fn phi_upper(&self, zeta: Complex64) -> Result<Complex64> {
        let t = self.case.params.t_load;
        let h = self.half_line_cauchy_complex(zeta)?;
        let p_tilde = h.scale(t / PI);
        let x = canonical_x_nondim(self.case, zeta, &self.spec)?;
        let (r_plus, _) = self.case.factors(zeta);
        Ok((p_tilde + self.case.projection_constant()) / (x * r_plus))
    }

    /// Spectrum of the stress: `Khat(s) = T + i s Phi+(s)`, the Fourier
    /// transform of `tau` restricted to `x > 0`. Decays algebraically.
    fn k_hat_boundary(&self, s: f64) -> Result<Complex64> {
        let t = self.case.params.t_load;
        if s == 0.0 {
            return Ok(Complex64::new(t, 0.0));
        }
        let h = self.half_line_cauchy_boundary(s)?;
        let p_tilde = h.scale(t / PI);
        let (x_plus, _) = boundary_x_nondim(self.case, s, &self.spec)?;
        let (r_plus, _) = self.case.factors(Complex64::new(s, 0.0));
        let phi = (p_tilde + self.case.projection_constant()) / (x_plus * r_plus);
        Ok(Complex64::new(t, 0.0) + Complex64::new(0.0, s) * phi)
    }
}

/// Cubic Lagrange interpolation on the four nodes bracketing `t`, with the
/// stencil clamped to `[lo_idx, ..]` when a kink must not be crossed.
fn lagrange4(
    nodes: &[f64],
    values: &[Complex64],
    t: f64,
    keep_side_of: Option<usize>,
) -> Complex64 {
    let n = nodes.len();
    let j = match nodes.binary_search_by(|a| a.partial_cmp(&t).unwrap()) {
        Ok(j) => return values[j],
        Err(j) => j,
    };
    // Bracketing panel is [j-1, j]; center the stencil on it.
    let mut start = j.saturating_sub(2).min(n - 4);
    if let Some(zero_idx) = keep_side_of {
        if t >= 0.0 {
            start = start.max(zero_idx).min(n - 4);
        } else if start + 3 > zero_idx {
            start = zero_idx.saturating_sub(3);
        }
    }
    let xs = &nodes[start..start + 4];
    let vs = &values[start..start + 4];
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..4 {
        let mut l = 1.0;
        for b in 0..4 {
            if a != b {
                l *= (t - xs[b]) / (xs[a] - xs[b]);
            }
        }
        acc += vs[a].scale(l);
    }
    acc
}

/// Phase of the canonical boundary values at `s`:
/// `(1/(2 pi i)) PV int ln G(t) dt/(t - s)`, purely imaginary for real
/// `ln G`, returned as the real phase angle.
fn psi_at(
    handle: &RealFunctionHandle<impl Fn(f64) -> f64>,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if s == 0.0 {
        // The PV of an even ln G vanishes at the origin.
        return Ok(0.0);
    }
    let pv = quadrature::pv_cauchy(handle, quadrature::Interval::FullLine, s, spec)?;
    Ok(-pv / (2.0 * PI))
}

/// `W(t) = X-(t)/R-(t)` with `X- = G^{-1/2} e^{i psi}`.
fn w_from_phase(case: &CoefficientCase, t: f64, psi: f64) -> Complex64 {
    let x_minus = Complex64::from_polar((-0.5 * case.log_g(t)).exp(), psi);
    let (_, r_minus) = case.factors(Complex64::new(t, 0.0));
    x_minus / r_minus
}

fn w_at(
    case: &CoefficientCase,
    handle: &RealFunctionHandle<impl Fn(f64) -> f64>,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    Ok(w_from_phase(case, t, psi_at(handle, t, spec)?))
}

/// Real-valued counterpart of [`lagrange4`].
fn lagrange4_real(nodes: &[f64], values: &[f64], t: f64) -> f64 {
    let n = nodes.len();
    let j = match nodes.binary_search_by(|a| a.partial_cmp(&t).unwrap()) {
        Ok(j) => return values[j],
        Err(j) => j,
    };
    let start = j.saturating_sub(2).min(n - 4);
    let xs = &nodes[start..start + 4];
    let vs = &values[start..start + 4];
    let mut acc = 0.0;
    for a in 0..4 {
        let mut l = 1.0;
        for b in 0..4 {
            if a != b {
                l *= (t - xs[b]) / (xs[a] - xs[b]);
            }
        }
        acc += l * vs[a];
    }
    acc
}

fn canonical_x_nondim(
    case: &CoefficientCase,
    zeta: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let handle = case.log_g_handle();
    Ok(log_cauchy_transform(&handle, zeta, spec)?.exp())
}

fn boundary_x_nondim(
    case: &CoefficientCase,
    sigma: f64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    let handle = case.log_g_handle();
    boundary_values(&handle, sigma, spec)
}

/// `Phi(z)` of the Riemann problem at physical `z`, `Im z > 0`.
///
/// The unknown `phi'(0)` of the transform equation never appears: its
/// forcing term is the boundary value of a lower-half-plane function, so its
/// upper projection vanishes identically.
pub fn phi_transform(
    case: &CoefficientCase,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::BadArgument("phi_transform requires Im z > 0"));
    }
    let lambda = case.params.lambda;
    let t_load = case.params.t_load;
    let unit_params = ModelParams {
        t_load: 1.0,
        ..case.params
    };
    let unit_case = CoefficientCase {
        kind: case.kind,
        params: unit_params,
    };
    let zeta = z.scale(lambda);
    let prepared = Prepared::build(&unit_case, spec, 4.0 * zeta.norm() + 50.0)?;
    Ok(prepared.phi_upper(zeta)?.scale(lambda * t_load))
}

// ---------------------------------------------------------------------------
// Factorization certificate
// ---------------------------------------------------------------------------

/// Sampled boundary values of the factorization with their residuals.
#[derive(Debug, Clone)]
pub struct FactorizationCertificate {
    pub s_samples: Vec<f64>,
    pub g_values: Vec<f64>,
    pub xplus_values: Vec<Complex64>,
    pub xminus_values: Vec<Complex64>,
    /// `max |X+ - G X-| / |X+|` over the samples.
    pub max_jump_residual: f64,
    /// `|X(iR) - 1|` at large `R` (default `R = 1e6`).
    pub infinity_residual: f64,
}

/// Default certification tolerance on the jump residual.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-7;

/// Build a factorization certificate from `n` samples of physical
/// `s in [-s_max, s_max]` plus a decay check at `z = i * 1e6`.
pub fn certificate(
    case: &CoefficientCase,
    n: usize,
    s_max: f64,
    spec: &QuadratureSpec,
) -> Result<FactorizationCertificate> {
    let lambda = case.params.lambda;
    let mut s_samples = Vec::with_capacity(n);
    let mut g_values = Vec::with_capacity(n);
    let mut xplus_values = Vec::with_capacity(n);
    let mut xminus_values = Vec::with_capacity(n);
    let mut max_jump = 0.0f64;
    for i in 0..n {
        let s = -s_max + 2.0 * s_max * i as f64 / (n - 1) as f64;
        let sigma = lambda * s;
        let (x_plus, x_minus) = boundary_x_nondim(case, sigma, spec)?;
        let g = case.log_g(sigma).exp();
        let residual = (x_plus - x_minus.scale(g)).norm() / x_plus.norm();
        max_jump = max_jump.max(residual);
        if x_plus.norm() == 0.0 || x_minus.norm() == 0.0 {
            return Err(Error::CertificateFailed {
                max_jump_residual: f64::INFINITY,
            });
        }
        s_samples.push(s);
        g_values.push(g);
        xplus_values.push(x_plus);
        xminus_values.push(x_minus);
    }
    let x_far = canonical_x(case, Complex64::new(0.0, 1e6), spec)?;
    let infinity_residual = (x_far - Complex64::new(1.0, 0.0)).norm();
    Ok(FactorizationCertificate {
        s_samples,
        g_values,
        xplus_values,
        xminus_values,
        max_jump_residual: max_jump,
        infinity_residual,
    })
}

impl FactorizationCertificate {
    /// The contractual invariant: the Plemelj jump identity. The decay of
    /// `X` at infinity is reported in `infinity_residual`; its magnitude at
    /// finite height scales with `int ln G`, which grows like
    /// `(lambda^2/k) ln` for small `k`, so it is a reported diagnostic
    /// rather than a gate.
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_jump_residual <= tolerance
    }
}

// ---------------------------------------------------------------------------
// Spectral solution (tabulated stress spectrum)
// ---------------------------------------------------------------------------

/// Tabulated spectrum `Khat(t)` whose inverse Fourier transform is the
/// contact stress, with its fitted algebraic tail.
pub struct SpectralSolution {
    pub case: CoefficientCase,
    /// Symmetric dimensionless grid, dense near the `|t|` kink at 0.
    pub nodes: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Fitted exponent `p` of `|Khat| ~ C |t|^{-p}` on the outer half-decade.
    pub tail_exponent: f64,
    /// Additive constant removed beyond `-K(t)`; zero here because the end
    /// condition `phi(0+) = T` already pins the projection constant that
    /// makes `K` decay (see module docs).
    pub constant_shift: f64,
    pub truncation_radius: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

const K_GRID_DENSITY: f64 = 110.0;
const K_GRID_MIN: f64 = 1e-4;
/// Largest resolvable dimensionless spectral radius.
const K_RADIUS_CAP: f64 = 1.0e6;

fn spectral_radius(case: &CoefficientCase) -> Result<f64> {
    match case.kind {
        CaseKind::CaseARigid => Ok(2000.0),
        _ => {
            let kappa = case.kappa();
            let needed = 200.0f64.max(20.0 / kappa);
            if needed > K_RADIUS_CAP {
                return Err(Error::Nonconvergence(
                    "spectral shoulder exceeds resolvable radius (k/lambda^2 too small; use the rigid path for k = 0)",
                ));
            }
            Ok(needed)
        }
    }
}

/// Tabulate the stress spectrum for one case. Runs a coarse certificate
/// first and reports tail diagnostics.
pub fn spectral_solution(
    case: &CoefficientCase,
    spec: &QuadratureSpec,
) -> Result<SpectralSolution> {
    spec.validate()?;
    let cert = certificate(case, 64, 100.0 / case.params.lambda.max(1.0), spec)?;
    if !cert.passes(CERTIFICATE_TOLERANCE) {
        return Err(Error::CertificateFailed {
            max_jump_residual: cert.max_jump_residual,
        });
    }

    let t_load = case.params.t_load;
    // The problem is linear in the end load: solve at unit load and scale,
    // so tau(x; cT) = c tau(x; T) holds to rounding.
    let unit_params = ModelParams {
        t_load: 1.0,
        ..case.params
    };
    let unit_case = CoefficientCase {
        kind: case.kind,
        params: unit_params,
    };
    let r_k = spectral_radius(case)?;
    let prepared = Prepared::build(&unit_case, spec, r_k)?;

    let mut pos = Vec::new();
    let ratio = (1.0 / K_GRID_DENSITY).exp();
    let mut t = K_GRID_MIN;
    while t < r_k {
        pos.push(t);
        t *= ratio;
    }
    pos.push(r_k);

    let mut nodes = Vec::with_capacity(2 * pos.len() + 1);
    for &t in pos.iter().rev() {
        nodes.push(-t);
    }
    nodes.push(0.0);
    nodes.extend_from_slice(&pos);

    let mut values = Vec::with_capacity(nodes.len());
    for &t in &nodes {
        values.push(prepared.k_hat_boundary(t)?.scale(t_load));
    }

    let scale = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let (tail_exponent, fit_rms) = if scale <= 1e-300 || t_load == 0.0 {
        (1.0, 0.0)
    } else {
        fit_spectrum_tail(&nodes, &values, r_k)?
    };

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert(
        String::from("certificate_max_jump_residual"),
        cert.max_jump_residual,
    );
    diagnostics.insert(
        String::from("certificate_infinity_residual"),
        cert.infinity_residual,
    );
    diagnostics.insert(String::from("spectral_radius"), r_k);
    diagnostics.insert(String::from("tail_fit_rms"), fit_rms);
    diagnostics.insert(String::from("tail_exponent"), tail_exponent);

    Ok(SpectralSolution {
        case: *case,
        nodes,
        values,
        tail_exponent,
        constant_shift: 0.0,
        truncation_radius: r_k,
        diagnostics,
    })
}

/// Least-squares fit of `ln |Khat|` against `ln |t|` over `|t| in [R/2, R]`,
/// both signs pooled. Returns `(exponent, rms residual)`.
fn fit_spectrum_tail(nodes: &[f64], values: &[Complex64], r_k: f64) -> Result<(f64, f64)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (t, v) in nodes.iter().zip(values) {
        let a = t.abs();
        if a >= 0.5 * r_k && a <= r_k && v.norm() > 0.0 {
            xs.push(a.ln());
            ys.push(v.norm().ln());
        }
    }
    if xs.len() < 8 {
        return Err(Error::TailFitFailed { exponent: f64::NAN });
    }
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|v| v * v).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(a, b)| a * b).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let mut rms = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let r = y - (slope * x + intercept);
        rms += r * r;
    }
    let rms = (rms / n).sqrt();
    let exponent = -slope;
    if !exponent.is_finite() || exponent <= 0.0 || exponent > 4.0 || rms > 0.5 {
        return Err(Error::TailFitFailed { exponent });
    }
    Ok((exponent, rms))
}

impl SpectralSolution {
    /// Cubic interpolation of the spectrum, never crossing the kink at
    /// `t = 0`; outside the tabulated band the edge value is returned (the
    /// oscillatory inverse runs with `truncation_radius` equal to this
    /// table's radius, so its own tail model takes over there).
    pub fn eval(&self, t: f64) -> Complex64 {
        let nodes = &self.nodes;
        let n = nodes.len();
        if t <= nodes[0] {
            return self.values[0];
        }
        if t >= nodes[n - 1] {
            return self.values[n - 1];
        }
        let zero_idx = n / 2;
        debug_assert_eq!(nodes[zero_idx], 0.0);
        lagrange4(nodes, &self.values, t, Some(zero_idx))
    }
}

// ---------------------------------------------------------------------------
// Contact stress
// ---------------------------------------------------------------------------

/// Which pipeline produced a stress solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    WienerHopfA,
    WienerHopfB,
    RigidLimit,
    DirectCollocation,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::WienerHopfA => "wiener_hopf_A",
            Method::WienerHopfB => "wiener_hopf_B",
            Method::RigidLimit => "rigid_limit",
            Method::DirectCollocation => "direct_collocation",
        }
    }
}

/// Stress and integrated load along the contact line.
#[derive(Debug, Clone)]
pub struct StressSolution {
    /// Grid (m), strictly increasing.
    pub x: Vec<f64>,
    /// Tangential contact stress tau(x) (N/m^2).
    pub tau: Vec<f64>,
    /// `phi(x) = T - int_0^x tau`, the residual axial force in the patch (N/m).
    pub phi: Vec<f64>,
    pub method: Method,
    pub diagnostics: BTreeMap<String, f64>,
}

/// Relative imaginary-residue threshold on the recovered stress.
pub const REALNESS_TOLERANCE: f64 = 1e-8;

/// Contact stress on a positive grid by oscillatory inversion of the
/// spectrum; also accumulates `phi(x) = T - int_0^x tau`.
pub fn contact_stress(
    case: &CoefficientCase,
    x_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<StressSolution> {
    let solution = spectral_solution(case, spec)?;
    contact_stress_from_spectrum(&solution, x_grid, spec)
}

/// Same as [`contact_stress`] but reusing an existing spectrum table.
pub fn contact_stress_from_spectrum(
    solution: &SpectralSolution,
    x_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<StressSolution> {
    let case = &solution.case;
    let lambda = case.params.lambda;
    let t_load = case.params.t_load;
    if x_grid.is_empty() {
        return Err(Error::BadArgument("empty x grid"));
    }
    for w in x_grid.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::BadArgument("x grid must be strictly increasing"));
        }
    }
    if x_grid[0] <= 0.0 {
        return Err(Error::BadArgument(
            "contact stress is defined for x > 0 only",
        ));
    }

    let osc_spec = QuadratureSpec {
        abs_tol: spec.abs_tol.max(1e-12),
        rel_tol: spec.rel_tol,
        max_panels: spec.max_panels,
        truncation_radius: solution.truncation_radius,
    };

    let mut tau_hat = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let xh = x / lambda;
        let v = oscillatory_inverse(|t| solution.eval(t), solution.tail_exponent, xh, &osc_spec)?;
        tau_hat.push(v);
    }

    let scale = tau_hat.iter().map(|v| v.re.abs()).fold(0.0f64, f64::max);
    let max_im = tau_hat.iter().map(|v| v.im.abs()).fold(0.0f64, f64::max);
    if scale > 0.0 {
        let im_ratio = max_im / scale;
        if im_ratio > REALNESS_TOLERANCE {
            return Err(Error::RealnessViolation { im_ratio });
        }
    }

    let tau_nd: Vec<f64> = tau_hat.iter().map(|v| v.re).collect();
    let x_nd: Vec<f64> = x_grid.iter().map(|&x| x / lambda).collect();
    let phi = accumulate_phi(&x_nd, &tau_nd, t_load);

    let tau: Vec<f64> = tau_nd.iter().map(|v| v / lambda).collect();

    let mut diagnostics = solution.diagnostics.clone();
    diagnostics.insert(
        String::from("imaginary_residue_ratio"),
        if scale > 0.0 { max_im / scale } else { 0.0 },
    );

    let method = match case.kind {
        CaseKind::CaseAPositive => Method::WienerHopfA,
        CaseKind::CaseARigid => Method::RigidLimit,
        CaseKind::CaseB => Method::WienerHopfB,
    };

    Ok(StressSolution {
        x: x_grid.to_vec(),
        tau,
        phi,
        method,
        diagnostics,
    })
}

/// `phi(x_j) = T - int_0^{x_j} tau` by trapezoids on the grid; the piece
/// below the first node uses a local power-law model of tau so the rigid
/// case (integrable singularity) accumulates correctly.
fn accumulate_phi(x_nd: &[f64], tau_nd: &[f64], t_load: f64) -> Vec<f64> {
    let n = x_nd.len();
    let mut alpha = 0.0;
    let m = n.min(8);
    if m >= 4 && tau_nd[..m].iter().all(|&v| v > 0.0) {
        let sx: f64 = x_nd[..m].iter().map(|v| v.ln()).sum();
        let sy: f64 = tau_nd[..m].iter().map(|v| v.ln()).sum();
        let sxx: f64 = x_nd[..m].iter().map(|v| v.ln() * v.ln()).sum();
        let sxy: f64 = x_nd[..m]
            .iter()
            .zip(&tau_nd[..m])
            .map(|(a, b)| a.ln() * b.ln())
            .sum();
        let mf = m as f64;
        let slope = (mf * sxy - sx * sy) / (mf * sxx - sx * sx);
        if slope.is_finite() {
            alpha = (-slope).clamp(-0.5, 0.95);
        }
    }
    let head = tau_nd[0] * x_nd[0] / (1.0 - alpha);
    let mut phi = Vec::with_capacity(n);
    let mut acc = head;
    phi.push(t_load - acc);
    for j in 1..n {
        acc += 0.5 * (tau_nd[j] + tau_nd[j - 1]) * (x_nd[j] - x_nd[j - 1]);
        phi.push(t_load - acc);
    }
    phi
}
