//! Shooting solver in phase coordinates.
//!
//! Writing u = rho sin(theta), u' = rho cos(theta) turns -u'' + q u = E u
//! into the first order system
//!
//!   theta' = cos^2(theta) + (E - q) sin^2(theta)
//!   (log rho)' = (1 + q - E) sin(theta) cos(theta)
//!
//! The angle is never reduced mod pi: along the integration it crosses
//! multiples of pi only upward, so the terminal angle counts oscillations
//! and is strictly increasing in E. All spectral routines reduce to
//! bisection on that terminal angle.
//!
//! Boundary dictionary, both angles in [0, pi): the left condition
//! u cos(a) + u' sin(a) = 0 pins theta(lo) = 0 if a = 0, else pi - a.
//! The right condition with angle b is met exactly when
//! theta(hi) = gamma + k pi, where gamma = pi for b = 0, else pi - b;
//! k = 0, 1, 2, ... labels the k-th eigenvalue branch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundaryAngle, Potential, RegularProblem};
use crate::ode::{integrate_piece, OdeSettings, State};
use crate::scalar::Scalar;

/// Phase state at a point: unwrapped angle plus log amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruferState<S> {
    pub x: S,
    pub theta: S,
    pub log_rho: S,
}

/// One eigenvalue with its normalized eigenfunction samples (x, u, u').
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair<S> {
    pub index: usize,
    pub value: S,
    pub eigenfunction: Vec<(S, S, S)>,
}

/// All eigenpairs inside an energy window, indices consecutive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumWindow<S> {
    pub window: (S, S),
    pub pairs: Vec<Eigenpair<S>>,
}

/// Wronskian u1 u2' - u1' u2 of two (value, derivative) pairs at a point.
pub fn wronskian<S: Scalar>(u1: (S, S), u2: (S, S)) -> S {
    u1.0 * u2.1 - u1.1 * u2.0
}

pub(crate) fn theta_init<S: Scalar>(left: BoundaryAngle<S>) -> S {
    let a = left.angle();
    if a == S::zero() {
        S::zero()
    } else {
        S::PI() - a
    }
}

/// Base of the terminal matching targets, in (0, pi].
pub(crate) fn gamma_star<S: Scalar>(right: BoundaryAngle<S>) -> S {
    let b = right.angle();
    if b == S::zero() {
        S::PI()
    } else {
        S::PI() - b
    }
}

/// Solver knobs. A `Solver` is stateless given a problem; methods may be
/// called from many threads on the same instance.
#[derive(Debug, Clone, Copy)]
pub struct Solver<S> {
    pub ode: OdeSettings<S>,
    /// Sample count for reconstructed eigenfunctions.
    pub grid_points: usize,
    /// Cap on bracket doublings in the eigenvalue search.
    pub max_expansions: usize,
}

impl<S: Scalar> Default for Solver<S> {
    fn default() -> Self {
        Solver { ode: OdeSettings::default(), grid_points: 2048, max_expansions: 64 }
    }
}

impl<S: Scalar> Solver<S> {
    /// Integrate the phase system across the interval; terminal state.
    pub fn integrate(&self, problem: &RegularProblem<S>, energy: S) -> Result<PruferState<S>> {
        let (lo, hi) = (problem.interval().lo(), problem.interval().hi());
        let stops = problem.potential().breakpoints(lo, hi);
        let y0 = [theta_init(problem.left_bc()), S::zero()];
        let y =
            self.phase_march(problem.potential(), energy, None, &stops, y0, |_, _| {})?;
        Ok(PruferState { x: hi, theta: y[0], log_rho: y[1] })
    }

    /// Number of eigenvalues strictly below `energy`.
    pub fn count_below(&self, problem: &RegularProblem<S>, energy: S) -> Result<usize> {
        let state = self.integrate(problem, energy)?;
        let t = ((state.theta - gamma_star(problem.right_bc())) / S::PI()).ceil();
        Ok(if t <= S::zero() { 0 } else { t.to_usize().unwrap_or(0) })
    }

    /// The k-th eigenvalue (k interior zeros) to absolute tolerance `tol`.
    pub fn kth_value(&self, problem: &RegularProblem<S>, k: usize, tol: S) -> Result<S> {
        let bracket = self.bracket_for(problem, k)?;
        self.bisect_branch(problem, k, tol, bracket)
    }

    /// The k-th eigenpair with its normalized eigenfunction.
    pub fn kth_eigenpair(
        &self,
        problem: &RegularProblem<S>,
        k: usize,
        tol: S,
    ) -> Result<Eigenpair<S>> {
        let value = self.kth_value(problem, k, tol)?;
        let eigenfunction = self.sample_eigenfunction(problem, value)?;
        Ok(Eigenpair { index: k, value, eigenfunction })
    }

    /// Eigenvalues inside the open window, values only.
    pub fn values_in_window(
        &self,
        problem: &RegularProblem<S>,
        window: (S, S),
        tol: S,
    ) -> Result<Vec<S>> {
        check_window(window)?;
        check_tol(tol)?;
        let (elo, ehi) = window;
        let k_lo = self.count_below(problem, elo)?;
        let k_hi = self.count_below(problem, ehi)?;
        let mut out = Vec::with_capacity(k_hi.saturating_sub(k_lo));
        let mut left = elo;
        for k in k_lo..k_hi {
            // Terminal angle is increasing in E, so earlier roots tighten
            // the left edge for later branches.
            let e = self.bisect_branch(problem, k, tol, (left, ehi))?;
            out.push(e);
            left = e;
        }
        Ok(out)
    }

    /// Eigenpairs inside the window, with eigenfunctions.
    pub fn window(
        &self,
        problem: &RegularProblem<S>,
        window: (S, S),
        tol: S,
    ) -> Result<SpectrumWindow<S>> {
        let values = self.values_in_window(problem, window, tol)?;
        let k0 = self.count_below(problem, window.0)?;
        let pairs = values
            .into_iter()
            .enumerate()
            .map(|(i, value)| {
                Ok(Eigenpair {
                    index: k0 + i,
                    value,
                    eigenfunction: self.sample_eigenfunction(problem, value)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectrumWindow { window, pairs })
    }

    /// Solution of the left boundary condition at energy E, sampled at the
    /// given sorted points. Amplitude 1 at the left endpoint; the first
    /// nonzero component of (u, u') there is positive.
    pub fn left_solution(
        &self,
        problem: &RegularProblem<S>,
        energy: S,
        points: &[S],
    ) -> Result<Vec<(S, S)>> {
        self.sample_system(problem, energy, theta_init(problem.left_bc()), points, false)
    }

    /// Solution of the right boundary condition at energy E, sampled at the
    /// given sorted points. Amplitude 1 at the right endpoint; the first
    /// nonzero component of (u, u') there is positive. Computed by
    /// integrating the reflected problem left to right.
    pub fn right_solution(
        &self,
        problem: &RegularProblem<S>,
        energy: S,
        points: &[S],
    ) -> Result<Vec<(S, S)>> {
        let (a, b) = (problem.interval().lo(), problem.interval().hi());
        // Reflected left angle for right angle g is (-g) mod pi, which makes
        // the reflected initial phase equal to g itself.
        let gamma = problem.right_bc().angle();
        let reflected: Vec<S> = points.iter().rev().map(|&x| a + b - x).collect();
        let mut samples = self.sample_system(problem, energy, gamma, &reflected, true)?;
        samples.reverse();
        // Map back: psi(x) = u~(a+b-x), psi'(x) = -u~'(a+b-x); then fix the
        // sign so the first nonzero of (psi, psi') at b is positive.
        let sign = if gamma == S::zero() { -S::one() } else { S::one() };
        for (u, du) in samples.iter_mut() {
            *du = -*du;
            *u *= sign;
            *du *= sign;
        }
        Ok(samples)
    }

    /// L2 norm over the problem interval of the solution matching the left
    /// boundary condition at energy E (trapezoid on the solver grid).
    pub fn left_solution_norm(&self, problem: &RegularProblem<S>, energy: S) -> Result<S> {
        let xs = linspace(
            problem.interval().lo(),
            problem.interval().hi(),
            self.grid_points,
        );
        let samples = self.left_solution(problem, energy, &xs)?;
        let us: Vec<S> = samples.iter().map(|p| p.0).collect();
        Ok(trapezoid_norm(&xs, &us))
    }

    fn sample_system(
        &self,
        problem: &RegularProblem<S>,
        energy: S,
        theta0: S,
        points: &[S],
        reflect_breaks: bool,
    ) -> Result<Vec<(S, S)>> {
        let (a, b) = (problem.interval().lo(), problem.interval().hi());
        for w in points.windows(2) {
            if w[0] > w[1] {
                return Err(Error::invalid("sample points", "must be sorted"));
            }
        }
        if let (Some(&first), Some(&last)) = (points.first(), points.last()) {
            if first < a || last > b {
                return Err(Error::OutOfDomain {
                    x: if first < a { first.as_f64() } else { last.as_f64() },
                    lo: a.as_f64(),
                    hi: b.as_f64(),
                });
            }
        }
        let mut breaks = problem.potential().breakpoints(a, b);
        let reflect = if reflect_breaks {
            breaks = breaks.into_iter().rev().map(|x| a + b - x).collect();
            Some((a, b))
        } else {
            None
        };
        let stops = merge_stops(&breaks, points);
        let mut out = Vec::with_capacity(points.len());
        let mut ptr = 0usize;
        let y0 = [theta0, S::zero()];
        let mut record = |x: S, y: &State<S>, ptr: &mut usize| {
            while *ptr < points.len() && points[*ptr] == x {
                let (s, c) = y[0].sin_cos();
                let rho = y[1].exp();
                out.push((rho * s, rho * c));
                *ptr += 1;
            }
        };
        record(a, &y0, &mut ptr);
        self.phase_march(problem.potential(), energy, reflect, &stops, y0, |x, y| {
            record(x, y, &mut ptr)
        })?;
        if ptr != points.len() {
            return Err(Error::invalid(
                "sample points",
                "not all points were visited; duplicates outside the interval?",
            ));
        }
        Ok(out)
    }

    fn sample_eigenfunction(
        &self,
        problem: &RegularProblem<S>,
        energy: S,
    ) -> Result<Vec<(S, S, S)>> {
        let (a, b) = (problem.interval().lo(), problem.interval().hi());
        let xs = linspace(a, b, self.grid_points);
        let pot = problem.potential();
        let stops = merge_stops(&pot.breakpoints(a, b), &xs);
        let mut phases: Vec<(S, S, S)> = Vec::with_capacity(xs.len());
        let y0 = [theta_init(problem.left_bc()), S::zero()];
        let mut ptr = 0usize;
        let mut record = |x: S, y: &State<S>, ptr: &mut usize| {
            while *ptr < xs.len() && xs[*ptr] == x {
                phases.push((x, y[0], y[1]));
                *ptr += 1;
            }
        };
        record(a, &y0, &mut ptr);
        self.phase_march(pot, energy, None, &stops, y0, |x, y| record(x, y, &mut ptr))?;
        debug_assert_eq!(phases.len(), xs.len());

        // Rebuild u relative to the peak log-amplitude to dodge overflow,
        // then normalize in L2.
        let peak = phases
            .iter()
            .map(|p| p.2)
            .fold(S::neg_infinity(), |m, v| m.max(v));
        let mut samples: Vec<(S, S, S)> = phases
            .into_iter()
            .map(|(x, theta, log_rho)| {
                let (s, c) = theta.sin_cos();
                let rho = (log_rho - peak).exp();
                (x, rho * s, rho * c)
            })
            .collect();
        let us: Vec<S> = samples.iter().map(|p| p.1).collect();
        let norm = trapezoid_norm(&xs, &us);
        if norm == S::zero() || !norm.is_finite() {
            return Err(Error::DegenerateEigenfunction);
        }
        // Sign: first nonzero of (u, u') at the left end positive. The
        // phase construction already guarantees it; flip defensively.
        let head = samples[0];
        let lead = if head.1 != S::zero() { head.1 } else { head.2 };
        let sign = if lead < S::zero() { -S::one() } else { S::one() };
        let scale = sign / norm;
        for p in samples.iter_mut() {
            p.1 *= scale;
            p.2 *= scale;
        }
        Ok(samples)
    }

    /// Advance the phase system across consecutive stops. Pieces on which
    /// the potential is constant take the closed-form update; the rest run
    /// through the adaptive stepper. `reflect` carries the interval ends
    /// when marching the reflected problem, whose potential is read
    /// mirror-image.
    fn phase_march(
        &self,
        pot: &Potential<S>,
        energy: S,
        reflect: Option<(S, S)>,
        stops: &[S],
        y0: State<S>,
        mut on_stop: impl FnMut(S, &State<S>),
    ) -> Result<State<S>> {
        let rhs = |x: S, y: &State<S>| {
            let q = match reflect {
                Some((a, b)) => pot.eval(a + b - x),
                None => pot.eval(x),
            };
            let (s, c) = y[0].sin_cos();
            [c * c + (energy - q) * s * s, (S::one() + q - energy) * s * c]
        };
        let mut y = y0;
        for w in stops.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let constant = match reflect {
                Some((a, b)) => pot.constant_on(a + b - x1, a + b - x0),
                None => pot.constant_on(x0, x1),
            };
            y = match constant {
                Some(q) => constant_phase_step(y, energy - q, x1 - x0),
                None => integrate_piece(&rhs, x0, x1, y, &self.ode)?,
            };
            on_stop(x1, &y);
        }
        Ok(y)
    }

    /// Bisect the k-th matching branch inside a bracket known to contain it.
    fn bisect_branch(
        &self,
        problem: &RegularProblem<S>,
        k: usize,
        tol: S,
        bracket: (S, S),
    ) -> Result<S> {
        check_tol(tol)?;
        let target = gamma_star(problem.right_bc())
            + S::from_usize(k).unwrap() * S::PI();
        let (mut lo, mut hi) = bracket;
        let mut guard = 0usize;
        while hi - lo > tol {
            guard += 1;
            if guard > 4096 {
                return Err(Error::SearchBound { index: k, bound: hi.as_f64() });
            }
            let mid = (lo + hi) / S::of(2.0);
            if mid <= lo || mid >= hi {
                break; // bracket at floating point resolution
            }
            if self.integrate(problem, mid)?.theta < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo + hi) / S::of(2.0))
    }

    /// Initial bracket around the k-th branch: a Weyl-count guess above,
    /// doubled until it straddles the target, and min q minus a growing
    /// offset below.
    fn bracket_for(&self, problem: &RegularProblem<S>, k: usize) -> Result<(S, S)> {
        let target = gamma_star(problem.right_bc())
            + S::from_usize(k).unwrap() * S::PI();
        let (qmin, qmax) = problem.potential().bounds(problem.interval());
        let len = problem.interval().length();
        let kk = S::from_usize(k + 2).unwrap();
        let mut offset = (S::PI() * kk / len).powi(2);
        let mut hi = qmax + offset;
        let mut tries = 0usize;
        while self.integrate(problem, hi)?.theta < target {
            tries += 1;
            if tries > self.max_expansions {
                return Err(Error::SearchBound { index: k, bound: hi.as_f64() });
            }
            offset *= S::of(2.0);
            hi = qmax + offset;
        }
        let mut drop = S::one();
        let mut lo = qmin - drop;
        tries = 0;
        while self.integrate(problem, lo)?.theta >= target {
            tries += 1;
            if tries > self.max_expansions {
                return Err(Error::SearchBound { index: k, bound: lo.as_f64() });
            }
            drop *= S::of(2.0);
            lo = qmin - drop;
        }
        Ok((lo, hi))
    }
}

/// Exact update of [theta, log rho] across a piece of length `len` on
/// which E - q = mu is constant.
///
/// Above the barrier the scaled phase phi = atan2(w u, u'), w = sqrt(mu),
/// advances linearly: phi' = w exactly. Folding theta into its pi-strip,
/// advancing phi, and unfolding preserves the winding count. At or below
/// the barrier the solution crosses zero at most once and theta never
/// crosses a multiple of pi downward, so it moves by less than 2 pi and a
/// single 2 pi fold of atan2(u, u') recovers it. Amplitudes come from the
/// explicit transfer matrix; the growing branch is factored out of the
/// hyperbolic case so deep barriers cannot overflow.
fn constant_phase_step<S: Scalar>(y: State<S>, mu: S, len: S) -> State<S> {
    let pi = S::PI();
    let two = S::of(2.0);
    let k = (y[0] / pi).floor();
    let r = y[0] - k * pi; // in [0, pi)
    let (sr, cr) = r.sin_cos();
    if mu > S::zero() {
        let w = mu.sqrt();
        let phi = (w * sr).atan2(cr) + w * len;
        let m = (phi / pi).floor();
        let s = phi - m * pi;
        let theta = (k + m) * pi + s.sin().atan2(w * s.cos());
        let (sw, cw) = (w * len).sin_cos();
        let u = sr * cw + cr * sw / w;
        let du = cr * cw - sr * w * sw;
        [theta, y[1] + (u * u + du * du).ln() / two]
    } else if mu == S::zero() {
        let u = sr + cr * len;
        let du = cr;
        let mut psi = u.atan2(du);
        if psi < S::zero() {
            psi += two * pi;
        }
        [k * pi + psi, y[1] + (u * u + du * du).ln() / two]
    } else {
        let v = (-mu).sqrt();
        // u = alpha e^{v s} + beta e^{-v s}; work with the vector scaled by
        // the dominant exponential.
        let alpha = (sr + cr / v) / two;
        let beta = (sr - cr / v) / two;
        let t = (-two * v * len).exp();
        let (u, du, log_scale) = if alpha != S::zero() {
            (alpha + beta * t, v * (alpha - beta * t), v * len)
        } else {
            (beta, -v * beta, -(v * len))
        };
        let mut psi = u.atan2(du);
        if psi < S::zero() {
            psi += two * pi;
        }
        [k * pi + psi, y[1] + log_scale + (u * u + du * du).ln() / two]
    }
}

fn check_window<S: Scalar>(window: (S, S)) -> Result<()> {
    if !window.0.is_finite() || !window.1.is_finite() || window.0 >= window.1 {
        return Err(Error::invalid("energy window", "need finite lo < hi"));
    }
    Ok(())
}

fn check_tol<S: Scalar>(tol: S) -> Result<()> {
    if !tol.is_finite() || tol <= S::zero() {
        return Err(Error::invalid("tolerance", "must be finite and positive"));
    }
    Ok(())
}

pub(crate) fn linspace<S: Scalar>(lo: S, hi: S, n: usize) -> Vec<S> {
    let nm1 = S::from_usize(n - 1).unwrap();
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * S::from_usize(i).unwrap() / nm1
            }
        })
        .collect()
}

fn trapezoid_norm<S: Scalar>(xs: &[S], us: &[S]) -> S {
    let mut acc = S::zero();
    for i in 1..xs.len() {
        let h = xs[i] - xs[i - 1];
        acc += h * (us[i] * us[i] + us[i - 1] * us[i - 1]) / S::of(2.0);
    }
    acc.sqrt()
}

/// Union of two sorted stop lists, deduplicated by exact equality.
fn merge_stops<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => {
                if x <= y {
                    i += 1;
                    x
                } else {
                    j += 1;
                    y
                }
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => break,
        };
        if out.last() != Some(&next) {
            out.push(next);
        }
    }
    out
}
