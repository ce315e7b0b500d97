//! Direct collocation solver for the contact equation, independent of the
//! factorization pipeline, used to validate it end to end.
//!
//! In units of `lambda` the unknown `phi` satisfies
//!
//! ```text
//! phi(x) - (1/pi) PV int_0^inf phi'(t) dt/(t - x) - kappa phi''(x) = 0,  x > 0
//! phi(0) = T,  phi(inf) = 0,
//! ```
//!
//! discretized on a graded mesh truncated at `x = L` with a hard `phi(L) = 0`
//! row: second-order finite differences for `phi''`, product integration of a
//! piecewise-linear `phi'` for the Cauchy term, dense LU for the solve.
//! `tau = -phi'` comes from fourth-order differences (one-sided near the
//! loaded end). The rigid `k = 0` case is out of scope here: its endpoint
//! singularity defeats this discretization.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

// Required for no_std math; shadowed by the inherent methods whenever
// dev-dependency feature unification links std into the test build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::params::ModelParams;
use crate::quadrature::pv_weights;
use crate::wiener_hopf::{Method, StressSolution};
use crate::{Error, Result};

const PI: f64 = core::f64::consts::PI;

/// Truncated half-line mesh: length in units of `lambda`, node count, and a
/// geometric clustering factor toward the loaded end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Truncation length `L` (units of lambda).
    pub length: f64,
    /// Interval count `N` (the mesh has `N + 1` nodes).
    pub nodes: usize,
    /// Ratio of successive interval widths, `>= 1`.
    pub grading: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            length: 40.0,
            nodes: 800,
            grading: 1.08,
        }
    }
}

/// Smallest first interval as a fraction of `L`. Stronger grading than this
/// buys nothing (the second-difference rows lose all their digits) so the
/// effective ratio is reduced to meet it.
const MIN_FIRST_INTERVAL: f64 = 3e-6;

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.length >= 20.0) {
            return Err(Error::BadArgument("grid length must be at least 20 lambda"));
        }
        if self.nodes < 200 {
            return Err(Error::BadArgument("grid needs at least 200 intervals"));
        }
        if !(self.grading >= 1.0) {
            return Err(Error::BadArgument("grading must be >= 1"));
        }
        Ok(())
    }

    /// Node positions in units of lambda, `x_0 = 0 .. x_N = L`.
    pub fn mesh(&self) -> Vec<f64> {
        let n = self.nodes;
        let l = self.length;
        let g = self.effective_grading();
        let mut x = Vec::with_capacity(n + 1);
        if (g - 1.0).abs() < 1e-12 {
            for i in 0..=n {
                x.push(l * i as f64 / n as f64);
            }
        } else {
            // x_i = L (g^i - 1)/(g^N - 1), evaluated in log space.
            let denom = ((n as f64) * g.ln()).exp_m1();
            for i in 0..=n {
                x.push(l * ((i as f64) * g.ln()).exp_m1() / denom);
            }
            x[n] = l;
        }
        x
    }

    fn effective_grading(&self) -> f64 {
        let n = self.nodes as f64;
        let first = |g: f64| -> f64 {
            if (g - 1.0).abs() < 1e-12 {
                1.0 / n
            } else {
                (g - 1.0) / ((n * g.ln()).exp_m1())
            }
        };
        if first(self.grading) >= MIN_FIRST_INTERVAL {
            return self.grading;
        }
        // Bisect for the ratio whose first interval hits the floor.
        let (mut lo, mut hi) = (1.0, self.grading);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if first(mid) >= MIN_FIRST_INTERVAL {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Fornberg weights: derivative of the given order at `x0` from the nodal
/// values at `nodes`.
pub(crate) fn fd_weights(x0: f64, nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    debug_assert!(order < n);
    let mut c = vec![vec![0.0f64; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[order]).collect()
}

/// Dense LU solve with partial pivoting, in place.
fn lu_solve(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<()> {
    let n = b.len();
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot = a[col][col].abs();
        for (r, row) in a.iter().enumerate().skip(col + 1) {
            if row[col].abs() > pivot {
                pivot = row[col].abs();
                pivot_row = r;
            }
        }
        if pivot < 1e-300 {
            return Err(Error::SingularSystem { pivot });
        }
        if pivot_row != col {
            a.swap(col, pivot_row);
            b.swap(col, pivot_row);
        }
        let inv = 1.0 / a[col][col];
        let (pivot_rows, rest) = a.split_at_mut(col + 1);
        let pivot_row = &pivot_rows[col];
        for (off, row) in rest.iter_mut().enumerate() {
            let factor = row[col] * inv;
            if factor == 0.0 {
                continue;
            }
            row[col] = 0.0;
            for c in col + 1..n {
                row[c] -= factor * pivot_row[c];
            }
            b[col + 1 + off] -= factor * b[col];
        }
    }
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r][c] * b[c];
        }
        b[r] = acc / a[r][r];
    }
    Ok(())
}

/// First-derivative rows (3-point, second order, one-sided at the ends).
fn derivative_rows(x: &[f64]) -> Vec<(usize, Vec<f64>)> {
    let n = x.len();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let (start, stencil) = if i == 0 {
            (0usize, &x[0..3])
        } else if i == n - 1 {
            (n - 3, &x[n - 3..n])
        } else {
            (i - 1, &x[i - 1..i + 2])
        };
        rows.push((start, fd_weights(x[i], stencil, 1)));
    }
    rows
}

/// Solve the truncated equation for `phi`, then differentiate for `tau`.
pub fn solve_direct(params: &ModelParams, grid: &GridSpec) -> Result<StressSolution> {
    if params.k <= 0.0 {
        return Err(Error::KZeroUnsupported);
    }
    grid.validate()?;
    let kappa = params.kappa();
    let lambda = params.lambda;
    let t_load = params.t_load;

    let x = grid.mesh();
    let n = x.len();

    let d_rows = derivative_rows(&x);

    let mut a: Vec<Vec<f64>> = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];

    // Boundary rows: phi(0) = T, phi(L) = 0, enforced exactly.
    a[0][0] = 1.0;
    b[0] = t_load;
    a[n - 1][n - 1] = 1.0;

    for i in 1..n - 1 {
        a[i][i] += 1.0;
        // Cauchy term: -(1/pi) sum_m C_im (D phi)_m with product-integration
        // weights for a piecewise-linear phi'.
        let c_row = pv_weights(&x, x[i], Some(i))?;
        for (m, &w) in c_row.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let (start, d) = &d_rows[m];
            let scale = -w / PI;
            for (off, &dv) in d.iter().enumerate() {
                a[i][start + off] += scale * dv;
            }
        }
        // Second derivative: 3-point nonuniform stencil.
        let s = fd_weights(x[i], &x[i - 1..i + 2], 2);
        for (off, &sv) in s.iter().enumerate() {
            a[i][i - 1 + off] -= kappa * sv;
        }
    }

    lu_solve(&mut a, &mut b)?;
    let phi_nd = b;

    // tau = -phi': 5-point fourth-order differences, one-sided near x = 0.
    let mut tau_nd = Vec::with_capacity(n);
    for i in 0..n {
        let start = if i < 2 {
            0
        } else if i + 2 >= n {
            n - 5
        } else {
            i - 2
        };
        let w = fd_weights(x[i], &x[start..start + 5], 1);
        let mut dphi = 0.0;
        for (off, &wv) in w.iter().enumerate() {
            dphi += wv * phi_nd[start + off];
        }
        tau_nd.push(-dphi);
    }

    let mut diagnostics = BTreeMap::new();
    diagnostics.insert(String::from("first_interval"), x[1] - x[0]);
    diagnostics.insert(String::from("effective_grading"), grid.effective_grading());
    diagnostics.insert(
        String::from("boundary_phi0_error"),
        (phi_nd[0] - t_load).abs(),
    );
    diagnostics.insert(String::from("boundary_phiL_error"), phi_nd[n - 1].abs());

    let solution = StressSolution {
        x: x.iter().map(|&v| v * lambda).collect(),
        tau: tau_nd.iter().map(|&v| v / lambda).collect(),
        phi: phi_nd,
        method: Method::DirectCollocation,
        diagnostics,
    };

    Ok(solution)
}

/// Pointwise residual of the contact equation at interior probes (physical
/// coordinates), for any stress solution: interpolation of `phi`, `phi'`,
/// `phi''` plus product integration of the Cauchy term over the solution
/// grid, with power-law models below the first node and beyond the last.
pub fn residual(
    solution: &StressSolution,
    params: &ModelParams,
    probes: &[f64],
) -> Result<Vec<f64>> {
    let lambda = params.lambda;
    let kappa = params.kappa();
    let x_nd: Vec<f64> = solution.x.iter().map(|&v| v / lambda).collect();
    // phi' in lambda units.
    let dphi_nd: Vec<f64> = solution.tau.iter().map(|&v| -v * lambda).collect();
    let n = x_nd.len();
    if n < 8 {
        return Err(Error::BadArgument(
            "solution grid too small for residual probes",
        ));
    }

    // Far field: beyond a cut the gridded phi' is replaced by its fitted
    // power law. Truncated solves distort the last stretch of their grid
    // (the hard phi(L) = 0 row squeezes the tail mass there), so the cut
    // and the fit window stay on the clean part.
    let l_grid = x_nd[n - 1];
    let x_cut = match solution.method {
        Method::DirectCollocation => 0.6 * l_grid,
        _ => 0.9 * l_grid,
    };
    let j_cut = x_nd.iter().position(|&v| v > x_cut).unwrap_or(n) - 1;
    let (tail_c, tail_beta) = fit_tail_model(&x_nd, &dphi_nd, x_nd[j_cut]).unwrap_or((0.0, 2.0));
    // Near-field growth below the first node (only relevant when x_0 > 0).
    let head_alpha = fit_growth(&x_nd, &dphi_nd).unwrap_or(0.0);

    let mut out = Vec::with_capacity(probes.len());
    for &p in probes {
        let ph = p / lambda;
        if !(ph > x_nd[0] && ph < x_nd[n - 1]) {
            return Err(Error::ProbeOutOfRange(p));
        }
        if x_nd.contains(&ph) {
            return Err(Error::ProbeOutOfRange(p));
        }

        let phi_p = interp_local(&x_nd, &solution.phi, ph, 0);
        let dphi_p = interp_local(&x_nd, &dphi_nd, ph, 0);
        let ddphi_p = interp_local(&x_nd, &dphi_nd, ph, 1);
        let _ = dphi_p;

        // PV integral of phi'/(t - x) over the clean gridded part.
        let w = pv_weights(&x_nd[..=j_cut], ph, None)?;
        let mut pv: f64 = w.iter().zip(&dphi_nd[..=j_cut]).map(|(a, b)| a * b).sum();

        // [0, x_0] piece via phi'(t) ~ phi'(x_0) (t/x_0)^{-alpha}, kernel
        // expanded in t/x; requires the probe to sit well above x_0.
        let x0 = x_nd[0];
        if x0 > 0.0 {
            if ph < 4.0 * x0 {
                return Err(Error::ProbeOutOfRange(p));
            }
            let d0 = dphi_nd[0];
            let mut head = 0.0;
            let mut pow = 1.0;
            for m in 0..4 {
                // int_0^{x0} t^{m-alpha} dt = x0^{m+1-alpha}/(m+1-alpha)
                head += pow * d0 * x0 / (m as f64 + 1.0 - head_alpha);
                pow *= x0 / ph;
            }
            pv += -head / ph * 1.0; // kernel -1/x * sum (t/x)^m
        }

        // [x_cut, inf) from the fitted model C t^{-beta}: expanding the
        // kernel in x/t (x < x_cut) gives
        // int C t^{-beta}/(t - x) dt = C xc^{-beta} sum_m (x/xc)^m/(beta+m).
        let xc = x_nd[j_cut];
        if tail_c != 0.0 && tail_beta > 1.05 {
            let mut tail = 0.0;
            let mut pow = 1.0;
            for m in 0..8 {
                tail += pow / (tail_beta + m as f64);
                pow *= ph / xc;
            }
            pv += tail_c * xc.powf(-tail_beta) * tail;
        }

        out.push(phi_p - pv / PI - kappa * ddphi_p);
    }
    Ok(out)
}

/// Local cubic Lagrange interpolation (or its derivative) on the four nodes
/// bracketing `x`.
fn interp_local(nodes: &[f64], values: &[f64], x: f64, deriv: usize) -> f64 {
    let n = nodes.len();
    let j = match nodes.binary_search_by(|a| a.partial_cmp(&x).unwrap()) {
        Ok(j) => j,
        Err(j) => j,
    };
    let start = j.saturating_sub(2).min(n - 4);
    let w = fd_weights(x, &nodes[start..start + 4], deriv);
    w.iter()
        .zip(&values[start..start + 4])
        .map(|(a, b)| a * b)
        .sum()
}

/// `(C, beta)` of `v ~ C x^{-beta}` fitted on `[x_cut/6, x_cut]`.
fn fit_tail_model(x: &[f64], v: &[f64], x_cut: f64) -> Option<(f64, f64)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut sign = 0.0f64;
    for i in 0..x.len() {
        if x[i] >= x_cut / 6.0 && x[i] <= x_cut && v[i] != 0.0 {
            if sign == 0.0 {
                sign = v[i].signum();
            } else if v[i].signum() != sign {
                return None;
            }
            xs.push(x[i].ln());
            ys.push(v[i].abs().ln());
        }
    }
    let beta = -slope(&xs, &ys)?;
    let n = xs.len() as f64;
    let intercept = (ys.iter().sum::<f64>() + beta * xs.iter().sum::<f64>()) / n;
    Some((sign * intercept.exp(), beta))
}

/// Fitted exponent `alpha` of `|v| ~ x^{-alpha}` over the first decade.
fn fit_growth(x: &[f64], v: &[f64]) -> Option<f64> {
    if x[0] <= 0.0 {
        return Some(0.0);
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..x.len() {
        if x[i] <= 10.0 * x[0] && v[i] != 0.0 {
            xs.push(x[i].ln());
            ys.push(v[i].abs().ln());
        }
    }
    slope(&xs, &ys).map(|s| (-s).clamp(-1.0, 0.95))
}

fn slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 4 {
        return None;
    }
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|v| v * v).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(a, b)| a * b).sum();
    let s = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    s.is_finite().then_some(s)
}
