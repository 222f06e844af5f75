//! Independent reference computations.
//!
//! The finite-difference oracle discretizes -u'' + q u on a uniform mesh
//! with the standard three-point stencil and Dirichlet ends, samples q by
//! cell averages (the potentials here have jumps; pointwise sampling would
//! only converge at first order), and extracts eigenvalues by bisection on
//! the Sturm pivot count. No phase angles, no shooting: a genuinely
//! different route to the same spectrum.
//!
//! The coupling oracle walks a dense lambda grid and watches the matching
//! function sin(theta_d + gamma) change sign; it shares the phase
//! integrator but none of the branch bookkeeping of the production root
//! isolation.

use sturm_rand::{BoundaryAngle, RegularProblem, Solver};

/// Cell average of q over (lo, hi), splitting at breakpoints and applying
/// composite Simpson per smooth piece.
fn cell_average(q: &dyn Fn(f64) -> f64, breaks: &[f64], lo: f64, hi: f64) -> f64 {
    let mut cuts = vec![lo];
    for &b in breaks {
        if b > lo && b < hi {
            cuts.push(b);
        }
    }
    cuts.push(hi);
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        // 4 Simpson panels per piece; exact for the piecewise profiles
        // used here and far below mesh error for the smooth ones.
        let (a, b) = (w[0], w[1]);
        let n = 8; // must be even
        let h = (b - a) / n as f64;
        let mut s = q(a) + q(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * q(a + i as f64 * h);
        }
        acc += s * h / 3.0;
    }
    acc / (hi - lo)
}

/// Number of eigenvalues of the FD matrix strictly below `shift`, by
/// counting negative pivots of the shifted LDL^T factorization.
fn sturm_count(diag: &[f64], off2: f64, shift: f64) -> usize {
    let mut count = 0usize;
    let mut prev = f64::INFINITY;
    for (i, &d) in diag.iter().enumerate() {
        let mut piv = d - shift;
        if i > 0 {
            piv -= off2 / prev;
        }
        if piv == 0.0 {
            piv = -f64::MIN_POSITIVE;
        }
        if piv < 0.0 {
            count += 1;
        }
        prev = piv;
    }
    count
}

/// Lowest `count` Dirichlet eigenvalues of -u'' + q u on (a, b) via the
/// cell-averaged FD matrix with m interior nodes.
pub fn fd_eigenvalues(
    q: &dyn Fn(f64) -> f64,
    breaks: &[f64],
    a: f64,
    b: f64,
    m: usize,
    count: usize,
) -> Vec<f64> {
    let h = (b - a) / (m + 1) as f64;
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = (1..=m)
        .map(|i| {
            let x = a + i as f64 * h;
            2.0 * inv_h2 + cell_average(q, breaks, x - h / 2.0, x + h / 2.0)
        })
        .collect();
    let off2 = inv_h2 * inv_h2;
    let qmin = diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * inv_h2;
    let qmax = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0 * inv_h2;
    let mut out = Vec::with_capacity(count);
    let mut floor = qmin - 1.0;
    for k in 0..count {
        let (mut lo, mut hi) = (floor, qmax + 1.0);
        // Invariant: count(lo) <= k < count(hi).
        while hi - lo > 1e-10 * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(&diag, off2, mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let e = 0.5 * (lo + hi);
        out.push(e);
        floor = lo;
    }
    out
}

/// Roots of the coupling matching condition in `window`, by dense scan plus
/// local bisection. `step` is the scan resolution.
#[allow(clippy::too_many_arguments)]
pub fn lambda_scan_roots(
    solver: &Solver<f64>,
    template: &RegularProblem<f64>,
    energy: f64,
    window: (f64, f64),
    theta0: BoundaryAngle<f64>,
    gamma0: BoundaryAngle<f64>,
    step: f64,
    tol: f64,
) -> Vec<f64> {
    let bounded = template.with_boundary(theta0, gamma0);
    let h = |lambda: f64| -> f64 {
        let problem = bounded.with_coupling_lambda(lambda).expect("template has coupling");
        let theta = solver.integrate(&problem, energy).expect("scan point integrates").theta;
        // Unreduced matching function: vanishes exactly on the branch
        // targets theta = (pi - gamma0) + k pi and nowhere else.
        (theta + gamma0.angle()).sin()
    };
    let n = ((window.1 - window.0) / step).ceil() as usize;
    let mut roots = Vec::new();
    let mut x_prev = window.0;
    let mut h_prev = h(x_prev);
    for i in 1..=n {
        let x = (window.0 + i as f64 * step).min(window.1);
        let hx = h(x);
        if h_prev == 0.0 {
            roots.push(x_prev);
        } else if h_prev * hx < 0.0 {
            let (mut lo, mut hi) = (x_prev, x);
            let mut f_lo = h_prev;
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = h(mid);
                if (fm > 0.0) == (f_lo > 0.0) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x_prev = x;
        h_prev = hx;
        if x >= window.1 {
            break;
        }
    }
    roots
}
