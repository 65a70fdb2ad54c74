//! Reduced-count invariant suites, run by `bidisc selftest`.
//!
//! Each suite draws from its own seeded stream and reports the worst observed
//! deviation next to its tolerance.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::extremal::{automorphism_quotient, big_phi, critical_tau, gamma, phi, rational_inner};
use crate::mobius::{mobius_dist, mobius_map, BidiscPoint, DiscPoint};
use crate::oracle::{sandwich, Budget};
use crate::pick::{pick_interpolant, pick_solvable, PickDatum};
use crate::regions::{classify, sigma, PolePair, RegionLabel};
use crate::sample::{random_bidisc, random_disc, random_pair, random_params, random_unimodular};
use crate::solver::{omega2_solve, solve, solve_normalized, DiscWitness, Problem, SolverConfig};
use crate::Complex;

/// Rule producing `τ` from `(α, β)` for the left-inverse suite.
pub type TauRule = fn(Complex, Complex) -> Complex;

pub fn critical_tau_rule(alpha: Complex, beta: Complex) -> Complex {
    let d = alpha - beta;
    d.conj() / d
}

#[derive(Clone, Copy, Debug)]
pub struct SelftestOptions {
    pub quick: bool,
    pub seed: u64,
    pub tau: TauRule,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            quick: false,
            seed: 0x5e1f_7e57,
            tau: critical_tau_rule,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub samples: usize,
    /// Worst observed deviation (or failure fraction).
    pub worst: f64,
    pub tolerance: f64,
    pub seconds: f64,
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<16} n={:<6} worst={:.3e} tol={:.0e} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.samples,
            self.worst,
            self.tolerance,
            self.seconds
        )
    }
}

type Suite = fn(&SelftestOptions, &mut ChaCha8Rng, usize) -> (usize, f64);

struct Entry {
    name: &'static str,
    suite: Suite,
    full: usize,
    quick: usize,
    tolerance: f64,
}

const SUITES: &[Entry] = &[
    Entry {
        name: "mobius",
        suite: mobius,
        full: 5000,
        quick: 500,
        tolerance: 1e-12,
    },
    Entry {
        name: "pick",
        suite: pick,
        full: 5000,
        quick: 500,
        tolerance: 1e-12,
    },
    Entry {
        name: "regions",
        suite: regions,
        full: 20000,
        quick: 2000,
        tolerance: 0.0,
    },
    Entry {
        name: "left_inverse",
        suite: left_inverse,
        full: 2000,
        quick: 200,
        tolerance: 1e-12,
    },
    Entry {
        name: "automorphism",
        suite: automorphism,
        full: 500,
        quick: 50,
        tolerance: 1e-10,
    },
    Entry {
        name: "symmetry",
        suite: symmetry,
        full: 2000,
        quick: 200,
        tolerance: 1e-14,
    },
    Entry {
        name: "omega1",
        suite: omega1,
        full: 500,
        quick: 50,
        tolerance: 1e-12,
    },
    Entry {
        name: "roundtrip",
        suite: roundtrip,
        full: 40,
        quick: 6,
        tolerance: 1e-8,
    },
    Entry {
        name: "invariance",
        suite: invariance,
        full: 20,
        quick: 3,
        tolerance: 1e-9,
    },
    Entry {
        name: "sandwich",
        suite: oracle,
        full: 6,
        quick: 1,
        tolerance: 1e-6,
    },
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|e| e.name)
}

/// Runs every suite and returns one report each.
pub fn run(opts: &SelftestOptions) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k as u64));
            let n = if opts.quick { e.quick } else { e.full };
            let start = Instant::now();
            let (samples, worst) = (e.suite)(opts, &mut rng, n);
            SuiteReport {
                name: e.name,
                passed: worst <= e.tolerance && samples > 0,
                samples,
                worst,
                tolerance: e.tolerance,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn mobius(_: &SelftestOptions, rng: &mut ChaCha8Rng, n: usize) -> (usize, f64) {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (a, x, y) = (
            random_disc(rng, 0.95),
            random_disc(rng, 0.95),
            random_disc(rng, 0.95),
        );
        worst = worst.max((mobius_map(a, mobius_map(a, x)) - x).norm());
        let moved = mobius_dist(mobius_map(a, x), mobius_map(a, y));
        worst = worst.max((moved - mobius_dist(x, y)).abs());
    }
    (n, worst)
}

fn pick(_: &SelftestOptions, rng: &mut ChaCha8Rng, n: usize) -> (usize, f64) {
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < n {
        let [a, b, c, d] = std::array::from_fn(|_| DiscPoint::new_unchecked(random_disc(rng, 0.9)));
        let Ok(datum) = PickDatum::new(a, b, c, d) else {
            continue;
        };
        if !pick_solvable(&datum) {
            continue;
        }
        let Ok(psi) = pick_interpolant(&datum) else {
            return (done, f64::INFINITY);
        };
        done += 1;
        worst = worst
            .max((psi.eval(a.value()) - c.value()).norm())
            .max((psi.eval(b.value()) - d.value()).norm());
    }
    (n, worst)
}

/// Fraction of σ-equivariance violations, plus a density shortfall below 99%.
fn regions(_: &SelftestOptions, rng: &mut ChaCha8Rng, n: usize) -> (usize, f64) {
    let (mut broken, mut generic) = (0usize, 0usize);
    for _ in 0..n {
        let pair = random_pair(rng, 1.0);
        let c = classify(&pair, 1e-6);
        if classify(&sigma(&pair), 1e-6).label != c.label.sigma() {
            broken += 1;
        }
        if c.label.is_generic() {
            generic += 1;
        }
    }
    let shortfall = (0.99 - generic as f64 / n as f64).max(0.0);
    (n, broken as f64 / n as f64 + shortfall)
}

fn left_inverse(opts: &SelftestOptions, rng: &mut ChaCha8Rng, n: usize) -> (usize, f64) {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let params = random_params(rng, 0.95, 0.0);
        let (alpha, beta) = (params.alpha.value(), params.beta.value());
        let omega = params.omega.value();
        let tau = (opts.tau)(alpha, beta);
        let g = gamma(params.alpha, params.beta, params.t).unwrap().value();
        for _ in 0..10 {
            let l = random_disc(rng, 0.99);
            let image = rational_inner(params.t, omega, tau, phi(alpha, beta, omega, l));
            worst = worst.max((image - l * mobius_map(g, l)).norm());
        }
    }
    (n, worst)
}

fn automorphism(_: &SelftestOptions, rng: &mut ChaCha8Rng, n: usize) -> (usize, f64) {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let params = random_params(rng, 0.95, 0.01);
        let (alpha, beta, t) = (params.alpha.value(), params.beta.value(), params.t);
        let tau = critical_tau(params.alpha, params.beta).unwrap().value();
        worst = worst.max((automorphism_quotient(alpha, beta, t, tau) - 1.0).abs());
        let other = random_unimodular(rng).value();
        if (other - tau).norm() > 1e-3 && automorphism_quotient(alpha, beta, t, other) >= 1.0 {
            return (n, f64::INFINITY);
        }
    }
    (n, worst)
}

fn symmetry(_: &SelftestOptions, rng: &mut ChaCha8Rng, n: usize) -> (usize, f64) {
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < n {
        let params = random_params(rng, 0.95, 0.01);
        let (Ok(a), Ok(b)) = (big_phi(&params), big_phi(&params.negated())) else {
            continue;
        };
        done += 1;
        worst = worst.max(a.p.dist_inf(&b.p)).max(a.q.dist_inf(&b.q));
    }
    (n, worst)
}

fn omega1(_: &SelftestOptions, rng: &mut ChaCha8Rng, n: usize) -> (usize, f64) {
    let config = SolverConfig::default();
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < n {
        let pair = random_pair(rng, 0.99);
        if classify(&pair, config.eps).label != RegionLabel::U {
            continue;
        }
        done += 1;
        let Ok(cert) = solve_normalized(&pair, &config) else {
            return (done, f64::INFINITY);
        };
        let closed = (pair.p.x1() * pair.q.x1()).norm().ln();
        worst = worst
            .max((cert.value - closed).abs())
            .max(cert.residuals.max());
    }
    (n, worst)
}

fn roundtrip(_: &SelftestOptions, rng: &mut ChaCha8Rng, n: usize) -> (usize, f64) {
    let config = SolverConfig::default();
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < n {
        let truth = random_params(rng, 0.9, 0.1);
        let Ok(pair) = big_phi(&truth) else { continue };
        let cls = classify(&pair, config.eps);
        if !matches!(cls.label, RegionLabel::E1 | RegionLabel::E2) {
            continue;
        }
        done += 1;
        let Ok(cert) = omega2_solve(&pair, cls, &config) else {
            return (done, f64::INFINITY);
        };
        let DiscWitness::Extremal { params } = cert.disc else {
            return (done, f64::INFINITY);
        };
        let (a, b) = (params, truth.canonical());
        let gap = [
            (a.alpha.value() - b.alpha.value()).norm(),
            (a.beta.value() - b.beta.value()).norm(),
            (a.c.value() - b.c.value()).norm(),
            (a.omega.value() - b.omega.value()).norm(),
            (a.t - b.t).abs(),
            cert.residuals.max(),
        ];
        worst = gap.into_iter().fold(worst, f64::max);
    }
    (n, worst)
}

fn generic_problem(rng: &mut ChaCha8Rng) -> Problem {
    loop {
        let z = random_bidisc(rng, 0.5);
        let (p, q) = (random_bidisc(rng, 0.9), random_bidisc(rng, 0.9));
        let Ok(problem) = Problem::new(z, p, q) else {
            continue;
        };
        if classify(&problem.normalized_pair(), 1e-3)
            .label
            .is_generic()
        {
            return problem;
        }
    }
}

fn invariance(_: &SelftestOptions, rng: &mut ChaCha8Rng, n: usize) -> (usize, f64) {
    let config = SolverConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..n {
        let problem = generic_problem(rng);
        let (u1, u2) = (
            random_unimodular(rng).value(),
            random_unimodular(rng).value(),
        );
        let rotate = |x: BidiscPoint| BidiscPoint::new(u1 * x.x1(), u2 * x.x2()).unwrap();
        let variants = [
            Problem::new(rotate(problem.z), rotate(problem.p), rotate(problem.q)),
            Problem::new(problem.z.swap(), problem.p.swap(), problem.q.swap()),
            Problem::new(problem.z, problem.q, problem.p),
        ];
        let Ok(base) = solve(&problem, &config) else {
            return (n, f64::INFINITY);
        };
        for v in variants {
            match v.and_then(|v| solve(&v, &config)) {
                Ok(c) => worst = worst.max((c.value - base.value).abs()),
                Err(_) => return (n, f64::INFINITY),
            }
        }
    }
    (n, worst)
}

fn oracle(_: &SelftestOptions, rng: &mut ChaCha8Rng, n: usize) -> (usize, f64) {
    let config = SolverConfig::default();
    let budget = Budget::default();
    let mut worst = 0.0f64;
    for _ in 0..n {
        let pair = loop {
            let pair: PolePair = random_pair(rng, 0.95);
            if classify(&pair, 1e-3).label.is_omega2() {
                break pair;
            }
        };
        let (Ok(cert), Ok(s)) = (solve_normalized(&pair, &config), sandwich(&pair, &budget)) else {
            return (n, f64::INFINITY);
        };
        if !s.contains(cert.value) {
            return (n, f64::INFINITY);
        }
        worst = worst.max(s.width.abs());
    }
    (n, worst)
}
