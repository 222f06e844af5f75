//! Coupling-constant spectra.
//!
//! Fix an energy E, an interval (c, d) carrying a nonnegative bump f, and
//! boundary angles extracted from a reference solution. The set of
//! couplings lambda for which E is an eigenvalue of -u'' + (q + lambda f) u
//! on (c, d) is discrete: the terminal phase angle is strictly decreasing
//! in lambda, so each matching branch theta_d(lambda) = gamma + k pi has at
//! most one root. These routines enumerate the roots in a window by
//! branch-wise bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundaryAngle, RegularProblem};
use crate::prufer::{gamma_star, Solver};
use crate::scalar::Scalar;

/// Signed distance from the terminal angle to its nearest matching branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mismatch<S> {
    pub distance: S,
    pub branch: usize,
}

/// Roots of the matching condition in a coupling window, sorted ascending.
/// `brackets[i]` is the isolating interval that produced `roots[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingSetResult<S> {
    pub energy: S,
    pub window: (S, S),
    pub roots: Vec<S>,
    pub brackets: Vec<(S, S)>,
    pub min_gap: Option<S>,
}

/// Outcome of re-isolating the roots at a finer tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretenessReport<S> {
    pub refine_factor: S,
    pub coarse_count: usize,
    pub refined_count: usize,
    pub coarse_min_gap: Option<S>,
    pub refined_min_gap: Option<S>,
    pub max_root_shift: Option<S>,
    pub stable: bool,
}

/// Boundary angles of a solution from its (value, derivative) data at the
/// two cut points: the angle a with u cos(a) + u' sin(a) = 0, folded to
/// [0, pi). Errors when a pair is identically zero.
pub fn extract_boundary_angles<S: Scalar>(
    left: (S, S),
    right: (S, S),
) -> Result<(BoundaryAngle<S>, BoundaryAngle<S>)> {
    let angle = |u: S, du: S| -> Result<BoundaryAngle<S>> {
        if u == S::zero() && du == S::zero() {
            return Err(Error::DegenerateEigenfunction);
        }
        BoundaryAngle::new((-u).atan2(du))
    };
    Ok((angle(left.0, left.1)?, angle(right.0, right.1)?))
}

fn terminal_theta<S: Scalar>(
    solver: &Solver<S>,
    template: &RegularProblem<S>,
    energy: S,
    lambda: S,
) -> Result<S> {
    let problem = template.with_coupling_lambda(lambda)?;
    Ok(solver.integrate(&problem, energy)?.theta)
}

/// How far E is from being an eigenvalue of the coupled problem at this
/// lambda: the terminal angle's signed distance to the nearest matching
/// branch, plus that branch's index. Zero distance means E is the
/// branch-th eigenvalue.
pub fn coupling_mismatch<S: Scalar>(
    solver: &Solver<S>,
    template: &RegularProblem<S>,
    energy: S,
    lambda: S,
    theta0: BoundaryAngle<S>,
    gamma0: BoundaryAngle<S>,
) -> Result<Mismatch<S>> {
    let template = template.with_boundary(theta0, gamma0);
    let theta = terminal_theta(solver, &template, energy, lambda)?;
    let base = gamma_star(gamma0);
    let t = (theta - base) / S::PI();
    let k = t.round().max(S::zero());
    let branch = k.to_usize().unwrap_or(0);
    Ok(Mismatch { distance: theta - (base + k * S::PI()), branch })
}

/// Enumerate the couplings in `window` at which E is an eigenvalue of the
/// template problem with boundary angles (theta0, gamma0). The template
/// must carry a coupling term; its bump is nonnegative, which makes the
/// terminal angle strictly decreasing in lambda. Violations of that
/// monotonicity are reported as an invalid bump.
pub fn coupling_roots<S: Scalar>(
    solver: &Solver<S>,
    template: &RegularProblem<S>,
    energy: S,
    window: (S, S),
    theta0: BoundaryAngle<S>,
    gamma0: BoundaryAngle<S>,
    tol: S,
) -> Result<CouplingSetResult<S>> {
    if !window.0.is_finite() || !window.1.is_finite() || window.0 >= window.1 {
        return Err(Error::invalid("coupling window", "need finite lo < hi"));
    }
    if !tol.is_finite() || tol <= S::zero() {
        return Err(Error::invalid("tolerance", "must be finite and positive"));
    }
    let template = template.with_boundary(theta0, gamma0);
    let theta_at = |lambda: S| terminal_theta(solver, &template, energy, lambda);
    let (wlo, whi) = window;
    let t_lo = theta_at(wlo)?;
    let t_hi = theta_at(whi)?;
    let slack = S::of(1e-8) * (S::one() + t_lo.abs().max(t_hi.abs()));
    let invalid = || Error::InvalidBump { lo: wlo.as_f64(), hi: whi.as_f64() };
    if t_lo < t_hi - slack {
        return Err(invalid());
    }
    let base = gamma_star(gamma0);
    let pi = S::PI();
    // Branch k has a root iff its target sits between the window's terminal
    // angles; the angle decreases in lambda, so larger k means smaller root.
    let k_min = ((t_hi - base) / pi).ceil().max(S::zero());
    let k_max = ((t_lo - base) / pi).floor();
    let mut roots: Vec<S> = Vec::new();
    let mut brackets: Vec<(S, S)> = Vec::new();
    if k_max >= k_min && k_max >= S::zero() {
        let k_min = k_min.to_i64().unwrap();
        let k_max = k_max.to_i64().unwrap();
        for k in (k_min..=k_max).rev() {
            let target = base + S::from_i64(k).unwrap() * pi;
            let (lo, hi) = bisect_descending(&theta_at, (wlo, whi), target, tol)?;
            roots.push((lo + hi) / S::of(2.0));
            brackets.push((lo, hi));
        }
    }
    // Distinct branches have distinct roots; separate any brackets that
    // still overlap at the user tolerance.
    for i in 1..roots.len() {
        if roots[i] <= roots[i - 1] {
            return Err(invalid());
        }
    }
    let mut rounds = 0usize;
    loop {
        let mut overlapping = Vec::new();
        for i in 1..brackets.len() {
            if brackets[i].0 < brackets[i - 1].1 {
                overlapping.push(i - 1);
                overlapping.push(i);
            }
        }
        if overlapping.is_empty() {
            break;
        }
        rounds += 1;
        if rounds > 64 {
            return Err(invalid());
        }
        overlapping.dedup();
        for &i in &overlapping {
            let (lo, hi) = brackets[i];
            let theta_lo = theta_at(lo)?;
            let k = ((theta_lo - base) / pi).floor();
            let target = base + k * pi;
            let width = (hi - lo) / S::of(16.0);
            let (lo, hi) = bisect_descending(&theta_at, (lo, hi), target, width)?;
            brackets[i] = (lo, hi);
            roots[i] = (lo + hi) / S::of(2.0);
        }
    }
    let min_gap = roots
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(None, |m: Option<S>, g| Some(m.map_or(g, |m| m.min(g))));
    Ok(CouplingSetResult { energy, window, roots, brackets, min_gap })
}

/// Bisect theta(lambda) = target for a decreasing theta on a bracket with
/// theta(lo) >= target >= theta(hi).
fn bisect_descending<S: Scalar>(
    theta_at: &impl Fn(S) -> Result<S>,
    bracket: (S, S),
    target: S,
    tol: S,
) -> Result<(S, S)> {
    let (mut lo, mut hi) = bracket;
    let mut guard = 0usize;
    while hi - lo > tol {
        guard += 1;
        if guard > 4096 {
            break;
        }
        let mid = (lo + hi) / S::of(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if theta_at(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Re-isolate the roots at tolerance tol / refine_factor and compare. The
/// root set is discrete precisely when refinement preserves the count and
/// moves nothing beyond the combined tolerances.
pub fn verify_discreteness<S: Scalar>(
    solver: &Solver<S>,
    template: &RegularProblem<S>,
    coarse: &CouplingSetResult<S>,
    theta0: BoundaryAngle<S>,
    gamma0: BoundaryAngle<S>,
    tol: S,
    refine_factor: S,
) -> Result<DiscretenessReport<S>> {
    if !refine_factor.is_finite() || refine_factor <= S::one() {
        return Err(Error::invalid("refine factor", "must exceed 1"));
    }
    let fine_tol = tol / refine_factor;
    let refined = coupling_roots(
        solver,
        template,
        coarse.energy,
        coarse.window,
        theta0,
        gamma0,
        fine_tol,
    )?;
    let same_count = refined.roots.len() == coarse.roots.len();
    let max_root_shift = if same_count && !coarse.roots.is_empty() {
        Some(
            coarse
                .roots
                .iter()
                .zip(&refined.roots)
                .map(|(a, b)| (*a - *b).abs())
                .fold(S::zero(), |m, v| m.max(v)),
        )
    } else {
        None
    };
    let shift_ok = match max_root_shift {
        Some(shift) => shift <= tol + fine_tol,
        None => coarse.roots.is_empty() && refined.roots.is_empty(),
    };
    let gap_ok = match (coarse.min_gap, refined.min_gap) {
        (None, None) => true,
        (Some(a), Some(b)) => (a - b).abs() <= S::of(4.0) * (tol + fine_tol),
        _ => false,
    };
    Ok(DiscretenessReport {
        refine_factor,
        coarse_count: coarse.roots.len(),
        refined_count: refined.roots.len(),
        coarse_min_gap: coarse.min_gap,
        refined_min_gap: refined.min_gap,
        max_root_shift,
        stable: same_count && shift_ok && gap_ok,
    })
}
