//! Model data types: intervals, boundary angles, bumps, base potentials, the
//! random-potential model, realizations of it, and regular problems ready for
//! the shooting solver.
//!
//! The operator under study is H u = -u'' + q u on a finite interval with
//! separated boundary conditions u(x) cos(angle) + u'(x) sin(angle) = 0. The
//! random model takes q = v + sum_n omega(n) f_n with disjoint bump supports;
//! a realization freezes omega and yields an ordinary regular problem.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::DistributionSpec;
use crate::scalar::Scalar;

/// Open interval (lo, hi), finite endpoints, lo < hi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<S> {
    lo: S,
    hi: S,
}

impl<S: Scalar> Interval<S> {
    pub fn new(lo: S, hi: S) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid("interval", "endpoints must be finite"));
        }
        if lo >= hi {
            return Err(Error::invalid(
                "interval",
                format!("need lo < hi, got [{lo}, {hi}]"),
            ));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> S {
        self.lo
    }

    pub fn hi(&self) -> S {
        self.hi
    }

    pub fn length(&self) -> S {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> S {
        (self.lo + self.hi) / S::of(2.0)
    }

    /// Open containment: lo < x < hi.
    pub fn contains(&self, x: S) -> bool {
        self.lo < x && x < self.hi
    }

    /// Closed containment: lo <= x <= hi.
    pub fn contains_closed(&self, x: S) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval<S>) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// True when the open intervals share no point.
    pub fn disjoint_from(&self, other: &Interval<S>) -> bool {
        self.hi <= other.lo || other.hi <= self.lo
    }
}

/// Boundary condition u cos(a) + u' sin(a) = 0 encoded by the angle a in
/// [0, pi). 0 is Dirichlet, pi/2 is Neumann; the constructor folds mod pi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundaryAngle<S>(S);

impl<S: Scalar> BoundaryAngle<S> {
    pub fn new(angle: S) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::invalid("boundary angle", "must be finite"));
        }
        let pi = S::PI();
        let mut a = angle % pi;
        if a < S::zero() {
            a += pi;
        }
        // a + pi can round back up to pi for tiny negative angles.
        if a >= pi {
            a = S::zero();
        }
        Ok(BoundaryAngle(a))
    }

    pub fn dirichlet() -> Self {
        BoundaryAngle(S::zero())
    }

    pub fn neumann() -> Self {
        BoundaryAngle(S::FRAC_PI_2())
    }

    pub fn angle(&self) -> S {
        self.0
    }
}

/// Bump profile over its support. Every shape is nonnegative, vanishes off
/// the open support, and peaks at the stated amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpShape {
    Indicator,
    RaisedCosine,
    Tent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpFunction<S> {
    support: Interval<S>,
    shape: BumpShape,
    amplitude: S,
}

impl<S: Scalar> BumpFunction<S> {
    pub fn new(support: Interval<S>, shape: BumpShape, amplitude: S) -> Result<Self> {
        if !amplitude.is_finite() || amplitude <= S::zero() {
            return Err(Error::invalid("bump amplitude", "must be finite and positive"));
        }
        Ok(BumpFunction { support, shape, amplitude })
    }

    pub fn indicator(lo: S, hi: S, amplitude: S) -> Result<Self> {
        BumpFunction::new(Interval::new(lo, hi)?, BumpShape::Indicator, amplitude)
    }

    pub fn support(&self) -> &Interval<S> {
        &self.support
    }

    pub fn shape(&self) -> BumpShape {
        self.shape
    }

    pub fn amplitude(&self) -> S {
        self.amplitude
    }

    /// Value at x; zero off the open support.
    pub fn eval(&self, x: S) -> S {
        if !self.support.contains(x) {
            return S::zero();
        }
        let t = (x - self.support.lo()) / self.support.length();
        match self.shape {
            BumpShape::Indicator => self.amplitude,
            BumpShape::RaisedCosine => {
                let half = S::of(0.5);
                self.amplitude * half * (S::one() - (S::of(2.0) * S::PI() * t).cos())
            }
            BumpShape::Tent => {
                let two = S::of(2.0);
                self.amplitude * (S::one() - (two * t - S::one()).abs())
            }
        }
    }

    /// Points where the profile loses smoothness; integration steps stop here.
    pub fn breakpoints(&self) -> Vec<S> {
        match self.shape {
            BumpShape::Indicator | BumpShape::RaisedCosine => {
                vec![self.support.lo(), self.support.hi()]
            }
            BumpShape::Tent => vec![
                self.support.lo(),
                self.support.midpoint(),
                self.support.hi(),
            ],
        }
    }
}

/// Deterministic background potential v.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasePotential<S> {
    Zero,
    Constant { c0: S },
    /// Linear interpolation through (x, v) knots; clamped outside the knots.
    PiecewiseLinear { breakpoints: Vec<(S, S)> },
    /// Same interpolation over parallel grid/value arrays.
    Tabulated { grid: Vec<S>, values: Vec<S> },
}

impl<S: Scalar> BasePotential<S> {
    pub fn constant(c0: S) -> Self {
        BasePotential::Constant { c0 }
    }

    pub fn piecewise_linear(breakpoints: Vec<(S, S)>) -> Result<Self> {
        let p = BasePotential::PiecewiseLinear { breakpoints };
        p.validate()?;
        Ok(p)
    }

    pub fn tabulated(grid: Vec<S>, values: Vec<S>) -> Result<Self> {
        let p = BasePotential::Tabulated { grid, values };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |xs: &[S], vs: &[S]| -> Result<()> {
            if xs.is_empty() {
                return Err(Error::invalid("base potential", "needs at least one knot"));
            }
            if xs.len() != vs.len() {
                return Err(Error::invalid(
                    "base potential",
                    format!("{} grid points vs {} values", xs.len(), vs.len()),
                ));
            }
            if xs.iter().chain(vs).any(|v| !v.is_finite()) {
                return Err(Error::invalid("base potential", "knots must be finite"));
            }
            if xs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(
                    "base potential",
                    "grid must be strictly increasing",
                ));
            }
            Ok(())
        };
        match self {
            BasePotential::Zero => Ok(()),
            BasePotential::Constant { c0 } => {
                if c0.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid("base potential", "constant must be finite"))
                }
            }
            BasePotential::PiecewiseLinear { breakpoints } => {
                let xs: Vec<S> = breakpoints.iter().map(|p| p.0).collect();
                let vs: Vec<S> = breakpoints.iter().map(|p| p.1).collect();
                check(&xs, &vs)
            }
            BasePotential::Tabulated { grid, values } => check(grid, values),
        }
    }

    pub fn eval(&self, x: S) -> S {
        match self {
            BasePotential::Zero => S::zero(),
            BasePotential::Constant { c0 } => *c0,
            BasePotential::PiecewiseLinear { breakpoints } => {
                let j = segment(breakpoints.len(), |i| breakpoints[i].0, x);
                match j {
                    Segment::Below => breakpoints[0].1,
                    Segment::Above => breakpoints[breakpoints.len() - 1].1,
                    Segment::Inside(j) => {
                        let (x0, v0) = breakpoints[j - 1];
                        let (x1, v1) = breakpoints[j];
                        v0 + (x - x0) / (x1 - x0) * (v1 - v0)
                    }
                }
            }
            BasePotential::Tabulated { grid, values } => {
                match segment(grid.len(), |i| grid[i], x) {
                    Segment::Below => values[0],
                    Segment::Above => values[values.len() - 1],
                    Segment::Inside(j) => {
                        let (x0, x1) = (grid[j - 1], grid[j]);
                        values[j - 1] + (x - x0) / (x1 - x0) * (values[j] - values[j - 1])
                    }
                }
            }
        }
    }

    /// Interior knots, where the interpolant loses smoothness.
    pub fn breakpoints(&self) -> Vec<S> {
        match self {
            BasePotential::Zero | BasePotential::Constant { .. } => Vec::new(),
            BasePotential::PiecewiseLinear { breakpoints } => {
                breakpoints.iter().map(|p| p.0).collect()
            }
            BasePotential::Tabulated { grid, .. } => grid.clone(),
        }
    }

    /// Exact range over [lo, hi]; extremes of a linear interpolant sit at
    /// knots or at the interval ends.
    pub fn bounds_on(&self, interval: &Interval<S>) -> (S, S) {
        let mut min = self.eval(interval.lo()).min(self.eval(interval.hi()));
        let mut max = self.eval(interval.lo()).max(self.eval(interval.hi()));
        for x in self.breakpoints() {
            if interval.contains(x) {
                let v = self.eval(x);
                min = min.min(v);
                max = max.max(v);
            }
        }
        (min, max)
    }
}

enum Segment {
    Below,
    Above,
    Inside(usize),
}

/// Locate x within a strictly increasing knot sequence given by `knot(i)`.
fn segment<S: Scalar>(len: usize, knot: impl Fn(usize) -> S, x: S) -> Segment {
    if x <= knot(0) {
        return Segment::Below;
    }
    if x >= knot(len - 1) {
        return Segment::Above;
    }
    // Binary search for the first knot > x.
    let (mut lo, mut hi) = (0usize, len - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if knot(mid) <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Segment::Inside(hi)
}

/// Contiguous range of active bump indices, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub lo: i64,
    pub hi: i64,
}

impl IndexRange {
    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false // constructed nonempty by the model
    }
}

/// The random family q_omega = v + sum_n omega(n) f_n on a finite working
/// interval, with one distribution per coordinate and default boundary
/// conditions for the full-interval problem.
#[derive(Debug, Clone)]
pub struct RandomPotentialModel<S> {
    truncation: Interval<S>,
    base: BasePotential<S>,
    bumps: BTreeMap<i64, BumpFunction<S>>,
    distributions: BTreeMap<i64, DistributionSpec<S>>,
    index_range: IndexRange,
    left_bc: BoundaryAngle<S>,
    right_bc: BoundaryAngle<S>,
}

impl<S: Scalar> RandomPotentialModel<S> {
    pub fn new(
        truncation: Interval<S>,
        base: BasePotential<S>,
        entries: Vec<(i64, BumpFunction<S>, DistributionSpec<S>)>,
        left_bc: BoundaryAngle<S>,
        right_bc: BoundaryAngle<S>,
    ) -> Result<Self> {
        base.validate()?;
        if entries.is_empty() {
            return Err(Error::invalid("model", "needs at least one bump"));
        }
        let mut bumps = BTreeMap::new();
        let mut distributions = BTreeMap::new();
        for (n, bump, dist) in entries {
            dist.validate()?;
            if bumps.insert(n, bump).is_some() {
                return Err(Error::invalid("model", format!("duplicate index {n}")));
            }
            distributions.insert(n, dist);
        }
        let lo = *bumps.keys().next().unwrap();
        let hi = *bumps.keys().last().unwrap();
        if (hi - lo + 1) as usize != bumps.len() {
            return Err(Error::invalid(
                "model",
                format!("bump indices must be contiguous, got gaps in {lo}..={hi}"),
            ));
        }
        let mut supports: Vec<&Interval<S>> =
            bumps.values().map(|b| b.support()).collect();
        supports.sort_by(|a, b| a.lo().partial_cmp(&b.lo()).unwrap());
        for w in supports.windows(2) {
            if !w[0].disjoint_from(w[1]) {
                return Err(Error::invalid(
                    "model",
                    format!(
                        "bump supports overlap: [{}, {}] and [{}, {}]",
                        w[0].lo(),
                        w[0].hi(),
                        w[1].lo(),
                        w[1].hi()
                    ),
                ));
            }
        }
        Ok(RandomPotentialModel {
            truncation,
            base,
            bumps,
            distributions,
            index_range: IndexRange { lo, hi },
            left_bc,
            right_bc,
        })
    }

    /// The canonical arrangement: indicator bumps of unit amplitude on
    /// (n, n+1) for n in lo..=hi, one shared distribution.
    pub fn unit_bumps(
        truncation: Interval<S>,
        base: BasePotential<S>,
        lo: i64,
        hi: i64,
        dist: DistributionSpec<S>,
        left_bc: BoundaryAngle<S>,
        right_bc: BoundaryAngle<S>,
    ) -> Result<Self> {
        let entries = (lo..=hi)
            .map(|n| {
                let support = Interval::new(S::from_i64(n).unwrap(), S::from_i64(n + 1).unwrap())?;
                Ok((
                    n,
                    BumpFunction::new(support, BumpShape::Indicator, S::one())?,
                    dist.clone(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        RandomPotentialModel::new(truncation, base, entries, left_bc, right_bc)
    }

    pub fn truncation(&self) -> &Interval<S> {
        &self.truncation
    }

    pub fn base(&self) -> &BasePotential<S> {
        &self.base
    }

    pub fn bumps(&self) -> &BTreeMap<i64, BumpFunction<S>> {
        &self.bumps
    }

    pub fn bump(&self, n: i64) -> Option<&BumpFunction<S>> {
        self.bumps.get(&n)
    }

    pub fn distributions(&self) -> &BTreeMap<i64, DistributionSpec<S>> {
        &self.distributions
    }

    pub fn index_range(&self) -> IndexRange {
        self.index_range
    }

    pub fn left_bc(&self) -> BoundaryAngle<S> {
        self.left_bc
    }

    pub fn right_bc(&self) -> BoundaryAngle<S> {
        self.right_bc
    }

    fn check_omega(&self, omega: &OmegaSample<S>) -> Result<()> {
        if omega.values.len() != self.bumps.len()
            || !omega.values.keys().eq(self.bumps.keys())
        {
            return Err(Error::invalid(
                "omega sample",
                "coordinate keys do not match the model index set",
            ));
        }
        Ok(())
    }
}

/// One realization of the random coordinates, keyed like the model bumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaSample<S> {
    pub seed: u64,
    pub values: BTreeMap<i64, S>,
}

impl<S: Scalar> OmegaSample<S> {
    pub fn get(&self, n: i64) -> Option<S> {
        self.values.get(&n).copied()
    }

    /// Copy with one coordinate replaced; used for independence checks.
    pub fn with_value(&self, n: i64, value: S) -> Self {
        let mut out = self.clone();
        out.values.insert(n, value);
        out
    }
}

/// Evaluate q_omega(x) = v(x) + sum_n omega(n) f_n(x).
///
/// One-off utility; the solver hot path goes through [`Potential`], which
/// pre-sorts the realized bumps.
pub fn eval_potential<S: Scalar>(
    model: &RandomPotentialModel<S>,
    omega: &OmegaSample<S>,
    x: S,
) -> Result<S> {
    if !model.truncation.contains_closed(x) {
        return Err(Error::OutOfDomain {
            x: x.as_f64(),
            lo: model.truncation.lo().as_f64(),
            hi: model.truncation.hi().as_f64(),
        });
    }
    model.check_omega(omega)?;
    let mut q = model.base.eval(x);
    for (n, bump) in &model.bumps {
        q += omega.values[n] * bump.eval(x);
    }
    Ok(q)
}

#[derive(Debug, Clone)]
struct RealizedBump<S> {
    weight: S,
    bump: BumpFunction<S>,
}

/// A frozen potential: base plus weighted disjoint bumps plus an optional
/// coupling term lambda * f that may overlap the others.
#[derive(Debug, Clone)]
pub struct Potential<S> {
    base: BasePotential<S>,
    bumps: Vec<RealizedBump<S>>,
    coupling: Option<(S, BumpFunction<S>)>,
}

impl<S: Scalar> Potential<S> {
    pub fn new(
        base: BasePotential<S>,
        realized: Vec<(S, BumpFunction<S>)>,
        coupling: Option<(S, BumpFunction<S>)>,
    ) -> Result<Self> {
        base.validate()?;
        if let Some((lambda, _)) = &coupling {
            if !lambda.is_finite() {
                return Err(Error::invalid("coupling", "lambda must be finite"));
            }
        }
        let mut bumps: Vec<RealizedBump<S>> = realized
            .into_iter()
            .map(|(weight, bump)| {
                if weight.is_finite() {
                    Ok(RealizedBump { weight, bump })
                } else {
                    Err(Error::invalid("realized bump", "weight must be finite"))
                }
            })
            .collect::<Result<_>>()?;
        bumps.sort_by(|a, b| {
            a.bump.support().lo().partial_cmp(&b.bump.support().lo()).unwrap()
        });
        for w in bumps.windows(2) {
            if !w[0].bump.support().disjoint_from(w[1].bump.support()) {
                return Err(Error::invalid("realized bumps", "supports overlap"));
            }
        }
        Ok(Potential { base, bumps, coupling })
    }

    pub fn constant(c0: S) -> Self {
        Potential {
            base: BasePotential::constant(c0),
            bumps: Vec::new(),
            coupling: None,
        }
    }

    pub fn zero() -> Self {
        Potential { base: BasePotential::Zero, bumps: Vec::new(), coupling: None }
    }

    pub fn coupling(&self) -> Option<&(S, BumpFunction<S>)> {
        self.coupling.as_ref()
    }

    /// Same potential with the coupling weight replaced.
    pub fn with_coupling_lambda(&self, lambda: S) -> Result<Self> {
        match &self.coupling {
            Some((_, f)) => Ok(Potential {
                base: self.base.clone(),
                bumps: self.bumps.clone(),
                coupling: Some((lambda, f.clone())),
            }),
            None => Err(Error::invalid("coupling", "potential has no coupling term")),
        }
    }

    pub fn eval(&self, x: S) -> S {
        let mut q = self.base.eval(x);
        // Disjoint sorted supports: at most one bump is live at x.
        let j = self.bumps.partition_point(|rb| rb.bump.support().lo() < x);
        if j > 0 {
            let rb = &self.bumps[j - 1];
            q += rb.weight * rb.bump.eval(x);
        }
        if let Some((lambda, f)) = &self.coupling {
            q += *lambda * f.eval(x);
        }
        q
    }

    /// The constant value of the potential on the open piece (lo, hi), or
    /// None if it varies there. Pieces delimited by `breakpoints` never
    /// straddle a support edge, so indicator bumps over a flat base always
    /// report a constant; any partial overlap or shaped bump disqualifies
    /// the piece and the caller falls back to quadrature.
    pub fn constant_on(&self, lo: S, hi: S) -> Option<S> {
        let mut q = match &self.base {
            BasePotential::Zero => S::zero(),
            BasePotential::Constant { c0 } => *c0,
            _ => return None,
        };
        let term = |weight: S, bump: &BumpFunction<S>| -> Option<S> {
            let (a, b) = (bump.support().lo(), bump.support().hi());
            if hi <= a || lo >= b {
                Some(S::zero())
            } else if a <= lo && hi <= b && bump.shape() == BumpShape::Indicator {
                Some(weight * bump.amplitude())
            } else {
                None
            }
        };
        for rb in &self.bumps {
            q += term(rb.weight, &rb.bump)?;
        }
        if let Some((lambda, f)) = &self.coupling {
            q += term(*lambda, f)?;
        }
        Some(q)
    }

    /// Sorted de-duplicated smoothness breakpoints restricted to [lo, hi],
    /// including both endpoints. Points closer together than integration
    /// resolution are merged.
    pub fn breakpoints(&self, lo: S, hi: S) -> Vec<S> {
        let mut pts = vec![lo, hi];
        pts.extend(self.base.breakpoints());
        for rb in &self.bumps {
            pts.extend(rb.bump.breakpoints());
        }
        if let Some((_, f)) = &self.coupling {
            pts.extend(f.breakpoints());
        }
        pts.retain(|&x| x >= lo && x <= hi);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let merge = S::epsilon() * S::of(16.0) * (S::one() + lo.abs().max(hi.abs()));
        let mut out: Vec<S> = Vec::with_capacity(pts.len());
        for x in pts {
            match out.last() {
                Some(&last) if x - last < merge => {}
                _ => out.push(x),
            }
        }
        // The right endpoint always survives the merge.
        if let Some(last) = out.last_mut() {
            *last = hi;
        }
        out
    }

    /// Conservative potential range over [lo, hi]. At any x at most one
    /// realized bump is live, so the bump contribution is bounded by the
    /// worst single term; the coupling term can overlap one of them.
    pub fn bounds(&self, interval: &Interval<S>) -> (S, S) {
        let (mut min, mut max) = self.base.bounds_on(interval);
        let mut bump_min = S::zero();
        let mut bump_max = S::zero();
        for rb in &self.bumps {
            if rb.bump.support().disjoint_from(interval) {
                continue;
            }
            let peak = rb.weight * rb.bump.amplitude();
            bump_min = bump_min.min(peak);
            bump_max = bump_max.max(peak);
        }
        min += bump_min;
        max += bump_max;
        if let Some((lambda, f)) = &self.coupling {
            if !f.support().disjoint_from(interval) {
                let peak = *lambda * f.amplitude();
                min += peak.min(S::zero());
                max += peak.max(S::zero());
            }
        }
        (min, max)
    }
}

/// A regular Sturm-Liouville problem: -u'' + q u = E u on a finite interval
/// with separated boundary angles.
#[derive(Debug, Clone)]
pub struct RegularProblem<S> {
    interval: Interval<S>,
    potential: Potential<S>,
    left_bc: BoundaryAngle<S>,
    right_bc: BoundaryAngle<S>,
}

impl<S: Scalar> RegularProblem<S> {
    pub fn new(
        interval: Interval<S>,
        potential: Potential<S>,
        left_bc: BoundaryAngle<S>,
        right_bc: BoundaryAngle<S>,
    ) -> Self {
        RegularProblem { interval, potential, left_bc, right_bc }
    }

    pub fn interval(&self) -> &Interval<S> {
        &self.interval
    }

    pub fn potential(&self) -> &Potential<S> {
        &self.potential
    }

    pub fn left_bc(&self) -> BoundaryAngle<S> {
        self.left_bc
    }

    pub fn right_bc(&self) -> BoundaryAngle<S> {
        self.right_bc
    }

    pub fn with_coupling_lambda(&self, lambda: S) -> Result<Self> {
        Ok(RegularProblem {
            interval: self.interval,
            potential: self.potential.with_coupling_lambda(lambda)?,
            left_bc: self.left_bc,
            right_bc: self.right_bc,
        })
    }

    pub fn with_boundary(&self, left: BoundaryAngle<S>, right: BoundaryAngle<S>) -> Self {
        RegularProblem {
            interval: self.interval,
            potential: self.potential.clone(),
            left_bc: left,
            right_bc: right,
        }
    }
}

/// Freeze a realization of the model on a subinterval of the working
/// interval. Bumps whose support misses the interval are dropped; an optional
/// coupling term lambda * f is appended.
pub fn build_regular_problem<S: Scalar>(
    model: &RandomPotentialModel<S>,
    omega: &OmegaSample<S>,
    interval: Interval<S>,
    left_bc: BoundaryAngle<S>,
    right_bc: BoundaryAngle<S>,
    coupling: Option<(S, BumpFunction<S>)>,
) -> Result<RegularProblem<S>> {
    if !model.truncation().contains_interval(&interval) {
        return Err(Error::invalid(
            "problem interval",
            format!(
                "[{}, {}] not contained in the working interval [{}, {}]",
                interval.lo(),
                interval.hi(),
                model.truncation().lo(),
                model.truncation().hi()
            ),
        ));
    }
    model.check_omega(omega)?;
    let realized = model
        .bumps()
        .iter()
        .filter(|(_, bump)| !bump.support().disjoint_from(&interval))
        .map(|(n, bump)| (omega.values[n], bump.clone()))
        .collect();
    let potential = Potential::new(model.base().clone(), realized, coupling)?;
    Ok(RegularProblem::new(interval, potential, left_bc, right_bc))
}

/// Full-interval problem with the model's own boundary conditions.
pub fn full_problem<S: Scalar>(
    model: &RandomPotentialModel<S>,
    omega: &OmegaSample<S>,
) -> Result<RegularProblem<S>> {
    build_regular_problem(
        model,
        omega,
        *model.truncation(),
        model.left_bc(),
        model.right_bc(),
        None,
    )
}
