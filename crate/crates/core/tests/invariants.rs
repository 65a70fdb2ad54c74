//! Property tests of the certified value under the symmetries of the
//! problem, and of the two witnesses against each other.

use bidisc::mobius::BidiscPoint;
use bidisc::oracle::{sandwich, Budget};
use bidisc::regions::{classify, sigma, PolePair};
use bidisc::solver::{
    proposition_refine, solve, solve_normalized, DiscWitness, Problem, SolverConfig,
};
use bidisc::{Complex, DiscPoint};
use proptest::prelude::*;

fn disc(r: f64) -> impl Strategy<Value = Complex> {
    (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(m, a)| Complex::from_polar(m, a))
}

fn point(r: f64) -> impl Strategy<Value = BidiscPoint> {
    (disc(r), disc(r)).prop_map(|(a, b)| BidiscPoint::new(a, b).unwrap())
}

/// Problems whose normalized pair lies in a generic region with margin 1e-3.
fn generic_problem() -> impl Strategy<Value = Problem> {
    (point(0.6), point(0.95), point(0.95)).prop_filter_map("non-generic", |(z, p, q)| {
        let problem = Problem::new(z, p, q).ok()?;
        classify(&problem.normalized_pair(), 1e-3)
            .label
            .is_generic()
            .then_some(problem)
    })
}

fn value(problem: &Problem) -> f64 {
    let cert = solve(problem, &SolverConfig::default()).unwrap();
    assert!(cert.is_valid(), "{:?}", cert.residuals);
    cert.value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rotation_invariance(problem in generic_problem(), a in 0.0..6.3f64, b in 0.0..6.3f64) {
        let (u1, u2) = (Complex::from_polar(1.0, a), Complex::from_polar(1.0, b));
        let r = |x: BidiscPoint| BidiscPoint::new(u1 * x.x1(), u2 * x.x2()).unwrap();
        let rotated = Problem::new(r(problem.z), r(problem.p), r(problem.q)).unwrap();
        prop_assert!((value(&rotated) - value(&problem)).abs() < 1e-9);
    }

    #[test]
    fn sigma_invariance(problem in generic_problem()) {
        let swapped = Problem::new(problem.z.swap(), problem.p.swap(), problem.q.swap()).unwrap();
        prop_assert!((value(&swapped) - value(&problem)).abs() < 1e-9);
    }

    #[test]
    fn pole_swap_invariance(problem in generic_problem()) {
        let swapped = Problem::new(problem.z, problem.q, problem.p).unwrap();
        prop_assert!((value(&swapped) - value(&problem)).abs() < 1e-9);
    }

    #[test]
    fn base_point_normalization(problem in generic_problem()) {
        let pair = problem.normalized_pair();
        let direct = solve_normalized(&pair, &SolverConfig::default()).unwrap();
        prop_assert_eq!(solve(&problem, &SolverConfig::default()).unwrap().value, direct.value);
    }

    #[test]
    fn witnesses_pin_the_value(problem in generic_problem()) {
        let cert = solve(&problem, &SolverConfig::default()).unwrap();
        prop_assert!(cert.is_valid());
        // the function side at the base point and the disc side at the poles
        let at_base = cert.left_inverse_at_original(problem.z.coords()).norm().ln();
        prop_assert!(at_base <= cert.value + 1e-10);
        let product = (cert.arguments[0] * cert.arguments[1]).norm();
        prop_assert!(product >= cert.value.exp() - 1e-10);
        for x in [problem.p, problem.q] {
            prop_assert!(cert.left_inverse_at_original(x.coords()).norm() < 1e-10);
        }
    }

    #[test]
    fn proposition_agrees_with_certificate(problem in generic_problem()) {
        let pair = problem.normalized_pair();
        let cert = solve_normalized(&pair, &SolverConfig::default()).unwrap();
        prop_assume!(cert.region.is_omega2());
        let DiscWitness::Extremal { params } = cert.disc else { panic!("extremal disc expected") };
        let work = if cert.coordinate_swap { sigma(&pair) } else { pair };
        let l = DiscPoint::new(params.c.value() * params.partner()).unwrap();
        let cands = proposition_refine(&work, params.omega, l).unwrap();
        let close = |s: f64| cands.iter().any(|k| {
            (k.c.value() - s * params.c.value()).norm() < 1e-7
                && (k.alpha.value() - s * params.alpha.value()).norm() < 1e-7
                && (k.beta.value() - s * params.beta.value()).norm() < 1e-7
        });
        prop_assert!(close(1.0) && close(-1.0), "{cands:?} vs {params:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sandwich_contains_the_value(problem in generic_problem()) {
        let pair: PolePair = problem.normalized_pair();
        let cert = solve_normalized(&pair, &SolverConfig::default()).unwrap();
        let s = sandwich(&pair, &Budget::default()).unwrap();
        prop_assert!(s.c_lower <= s.l_upper + 1e-9);
        prop_assert!(s.contains(cert.value), "{} not in [{}, {}]", cert.value, s.c_lower, s.l_upper);
    }

    #[test]
    fn larger_budget_never_widens(problem in generic_problem()) {
        let pair = problem.normalized_pair();
        let small = Budget { disc_starts: 8, ..Budget::default() };
        match (sandwich(&pair, &small), sandwich(&pair, &small.scaled(2))) {
            (Ok(a), Ok(b)) => prop_assert!(b.width <= a.width, "{} > {}", b.width, a.width),
            (Ok(_), Err(e)) => prop_assert!(false, "larger budget lost the disc: {e}"),
            _ => {}
        }
    }
}
