//! Agreement between the shooting solver and the independent
//! finite-difference oracle.
//!
//! The oracle discretizes -u'' + q u on a uniform mesh with cell-averaged
//! coefficients and locates eigenvalues by Sturm sequence bisection. It
//! shares no code with the Prufer solver, so agreement here checks the
//! whole shooting pipeline end to end.

mod common;

use common::{anderson_model, oracle::fd_eigenvalues};
use sturm_rand::{
    full_problem, sample_omega, BasePotential, BoundaryAngle, BumpFunction, BumpShape,
    Interval, Potential, RegularProblem, Solver, SubStream,
};

const ORACLE_NODES: usize = 100_000;

/// Eigenvalues of -u'' + 10*chi_(0.4,0.6) u on (0,1), Dirichlet, from the
/// exact transcendental matching condition (50-digit bisection).
const STEP_EXACT: [f64; 3] = [13.563965119739, 39.952667978095, 91.936629286455];

/// Same three eigenvalues from the finite-difference oracle at 1e5 nodes,
/// pinned so oracle regressions are caught directly.
const STEP_FD: [f64; 3] = [13.56396293624687, 39.952669142711365, 91.93662833802341];

fn fd_for_problem(problem: &RegularProblem<f64>, count: usize) -> Vec<f64> {
    let (a, b) = (problem.interval().lo(), problem.interval().hi());
    let pot = problem.potential();
    let breaks = pot.breakpoints(a, b);
    fd_eigenvalues(&|x| pot.eval(x), &breaks, a, b, ORACLE_NODES, count)
}

fn step_problem() -> RegularProblem<f64> {
    let f = BumpFunction::indicator(0.4, 0.6, 10.0).unwrap();
    RegularProblem::new(
        Interval::new(0.0, 1.0).unwrap(),
        Potential::new(BasePotential::Zero, vec![(1.0, f)], None).unwrap(),
        BoundaryAngle::dirichlet(),
        BoundaryAngle::dirichlet(),
    )
}

#[test]
fn step_potential_frozen_values() {
    let problem = step_problem();
    let fd = fd_for_problem(&problem, 3);
    let solver = Solver::default();
    for k in 0..3 {
        // Oracle must reproduce its pinned output and sit within the
        // second-order discretization budget of the exact roots.
        assert!(
            (fd[k] - STEP_FD[k]).abs() <= 1e-9 * STEP_FD[k],
            "oracle drifted at k={k}: {} vs pinned {}",
            fd[k],
            STEP_FD[k]
        );
        assert!(
            (fd[k] - STEP_EXACT[k]).abs() <= 5e-7 * STEP_EXACT[k],
            "oracle vs exact at k={k}: {} vs {}",
            fd[k],
            STEP_EXACT[k]
        );

        let e = solver.kth_value(&problem, k, 1e-10).unwrap();
        assert!(
            (e - STEP_EXACT[k]).abs() <= 1e-6 * STEP_EXACT[k],
            "solver vs exact at k={k}: {e} vs {}",
            STEP_EXACT[k]
        );
        assert!(
            (e - fd[k]).abs() <= 1e-5 * fd[k].abs(),
            "solver vs oracle at k={k}: {e} vs {}",
            fd[k]
        );
    }
}

/// Deterministic mixed-shape potential: signed bumps of all three shapes in
/// disjoint slots over a piecewise linear background.
fn random_mixed_problem(tag: i64) -> RegularProblem<f64> {
    let mut st = SubStream::for_coordinate(0xA11CE, tag);
    let interval = Interval::new(-4.0, 4.0).unwrap();

    let knots: Vec<(f64, f64)> = (0..5)
        .map(|i| (-4.0 + 2.0 * i as f64, st.next_unit() - 0.5))
        .collect();
    let base = BasePotential::piecewise_linear(knots).unwrap();

    let n_bumps = 4 + (st.next_unit() * 5.0) as usize;
    let slot = 8.0 / n_bumps as f64;
    let mut realized = Vec::new();
    for j in 0..n_bumps {
        let lo = -4.0 + slot * j as f64 + 0.1 * slot;
        let hi = lo + 0.8 * slot;
        let shape = match (st.next_unit() * 3.0) as usize {
            0 => BumpShape::Indicator,
            1 => BumpShape::RaisedCosine,
            _ => BumpShape::Tent,
        };
        let amplitude = 0.5 + 4.0 * st.next_unit();
        let weight = 2.0 * st.next_unit() - 1.0;
        let support = Interval::new(lo, hi).unwrap();
        realized.push((weight, BumpFunction::new(support, shape, amplitude).unwrap()));
    }

    RegularProblem::new(
        interval,
        Potential::new(base, realized, None).unwrap(),
        BoundaryAngle::dirichlet(),
        BoundaryAngle::dirichlet(),
    )
}

#[test]
fn random_potentials_match_oracle() {
    let solver = Solver::default();
    for tag in 0..20 {
        let problem = random_mixed_problem(tag);
        let fd = fd_for_problem(&problem, 10);
        for (k, &reference) in fd.iter().enumerate() {
            let e = solver.kth_value(&problem, k, 1e-10).unwrap();
            let scale = reference.abs().max(1.0);
            assert!(
                (e - reference).abs() <= 1e-5 * scale,
                "potential {tag}, k={k}: solver {e} vs oracle {reference}"
            );
        }
    }
}

#[test]
fn window_values_match_oracle_list() {
    let model = anderson_model();
    let omega = sample_omega(&model, 123);
    let problem = full_problem(&model, &omega).unwrap();
    let solver = Solver::default();

    let (lo, hi) = (0.0, 20.0);
    let values = solver.values_in_window(&problem, (lo, hi), 1e-10).unwrap();
    assert!(!values.is_empty());

    // Oracle list must have exactly the same members below the window top.
    let fd = fd_for_problem(&problem, values.len() + 1);
    assert!(fd[0] > lo, "ground state expected inside the window");
    assert!(
        fd[values.len()] > hi,
        "oracle found an extra eigenvalue inside the window"
    );
    for (k, &e) in values.iter().enumerate() {
        assert!(
            (e - fd[k]).abs() <= 1e-5 * fd[k].abs().max(1.0),
            "k={k}: solver {e} vs oracle {}",
            fd[k]
        );
    }

    // Indexed form agrees with the plain value list.
    let spectrum = solver.window(&problem, (lo, hi), 1e-10).unwrap();
    assert_eq!(spectrum.pairs.len(), values.len());
    for (offset, (pair, &e)) in spectrum.pairs.iter().zip(&values).enumerate() {
        assert_eq!(pair.value, e);
        assert_eq!(pair.index, offset, "window starts at the ground state here");
    }
}
