//! Embedded Dormand-Prince 5(4) stepper for the two-component phase systems
//! used by the shooting solver.
//!
//! The right-hand sides here are smooth only between potential breakpoints,
//! so the driver integrates piece by piece and never steps across a stop
//! point. Integration always runs left to right.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type State<S> = [S; 2];

#[derive(Debug, Clone, Copy)]
pub struct OdeSettings<S> {
    pub rel_tol: S,
    pub abs_tol: S,
    /// Guard against runaway step rejection; generous for normal use.
    pub max_steps: usize,
}

impl<S: Scalar> Default for OdeSettings<S> {
    fn default() -> Self {
        // Floors keep the f32 instantiation attainable.
        let eps = S::epsilon();
        OdeSettings {
            rel_tol: S::of(1e-10).max(eps * S::of(32.0)),
            abs_tol: S::of(1e-12).max(eps * S::of(4.0)),
            max_steps: 1_000_000,
        }
    }
}

// Dormand-Prince coefficients. k7 is evaluated at the accepted point and
// reused as k1 of the next step (FSAL).
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// Difference between the 5th and embedded 4th order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate dy/dx = f(x, y) over one smooth piece [x0, x1], x0 < x1.
pub fn integrate_piece<S, F>(
    f: &F,
    x0: S,
    x1: S,
    y0: State<S>,
    settings: &OdeSettings<S>,
) -> Result<State<S>>
where
    S: Scalar,
    F: Fn(S, &State<S>) -> State<S>,
{
    let span = x1 - x0;
    if span <= S::zero() {
        return Ok(y0);
    }
    let mut x = x0;
    let mut y = y0;
    let mut h = span / S::of(16.0);
    let mut k1 = f(x, &y);
    let mut steps = 0usize;
    let a: Vec<[S; 6]> = A
        .iter()
        .map(|row| {
            let mut out = [S::zero(); 6];
            for (o, v) in out.iter_mut().zip(row) {
                *o = S::of(*v);
            }
            out
        })
        .collect();
    let c: Vec<S> = C.iter().map(|&v| S::of(v)).collect();
    let e: Vec<S> = E.iter().map(|&v| S::of(v)).collect();

    while x < x1 {
        steps += 1;
        if steps > settings.max_steps {
            return Err(Error::IntegrationFailure { x: x.as_f64(), h: h.as_f64() });
        }
        let h_min = S::epsilon() * S::of(16.0) * x.abs().max(S::one());
        if h < h_min {
            return Err(Error::IntegrationFailure { x: x.as_f64(), h: h.as_f64() });
        }
        let mut hh = h.min(x1 - x);
        // Land exactly on the piece end instead of leaving a sliver.
        if x + hh * S::of(1.05) >= x1 {
            hh = x1 - x;
        }

        let mut k = [[S::zero(); 2]; 7];
        k[0] = k1;
        for s in 0..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s + 1) {
                let w = a[s][j] * hh;
                ys[0] += w * kj[0];
                ys[1] += w * kj[1];
            }
            k[s + 1] = f(x + c[s] * hh, &ys);
        }
        // k[6] is f at the 5th order solution point (row 6 of A = weights b).
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let w = a[5][j] * hh;
            y_new[0] += w * kj[0];
            y_new[1] += w * kj[1];
        }

        let mut err = S::zero();
        for i in 0..2 {
            let mut de = S::zero();
            for (j, kj) in k.iter().enumerate() {
                de += e[j] * kj[i];
            }
            de *= hh;
            let scale = settings.abs_tol
                + settings.rel_tol * y[i].abs().max(y_new[i].abs());
            let r = de / scale;
            err += r * r;
        }
        err = (err / S::of(2.0)).sqrt();

        if err <= S::one() {
            x += hh;
            y = y_new;
            k1 = k[6];
            let grow = if err == S::zero() {
                S::of(5.0)
            } else {
                (S::of(0.9) * err.powf(S::of(-0.2))).min(S::of(5.0))
            };
            h = hh * grow.max(S::of(0.2));
        } else {
            h = hh * (S::of(0.9) * err.powf(S::of(-0.2))).max(S::of(0.2));
        }
    }
    Ok(y)
}

/// Integrate across a sorted stop list (breakpoints plus any sample points),
/// invoking `on_stop` after each stop is reached, the first stop excluded.
pub fn integrate_with_stops<S, F, G>(
    f: &F,
    stops: &[S],
    y0: State<S>,
    settings: &OdeSettings<S>,
    mut on_stop: G,
) -> Result<State<S>>
where
    S: Scalar,
    F: Fn(S, &State<S>) -> State<S>,
    G: FnMut(S, &State<S>),
{
    let mut y = y0;
    for w in stops.windows(2) {
        y = integrate_piece(f, w[0], w[1], y, settings)?;
        on_stop(w[1], &y);
    }
    Ok(y)
}

/// Integrate across the stop list, final state only.
pub fn integrate_piecewise<S, F>(
    f: &F,
    stops: &[S],
    y0: State<S>,
    settings: &OdeSettings<S>,
) -> Result<State<S>>
where
    S: Scalar,
    F: Fn(S, &State<S>) -> State<S>,
{
    integrate_with_stops(f, stops, y0, settings, |_, _| {})
}
