//! Upper bound: analytic discs through the origin hitting both poles.
//!
//! Families: the geodesic `(λ, λψ(λ))` when the two-point Pick problem in
//! the first coordinate is solvable (and its `σ` image), and
//! `h(λ) = (ω λ m_a(λ), λ m_b(λ))` with free `a, b, ω` and pole arguments
//! `λ₁, λ₂`. For the latter, `a` and `b` are eliminated through
//! `h(λ₁) = p`, leaving four real equations `h(λ₂) = q` in `(λ₁, λ₂)` for
//! each rotation `ω = e^{iθ}`. The feasible set is a curve in
//! `(θ, λ₁, λ₂)`, followed downhill in `log |λ₁ λ₂|` from each start.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lsq::{levenberg_marquardt, LmOptions};
use crate::mobius::{disc_from_plane, mobius_center, mobius_map, plane_from_disc, DiscPoint};
use crate::pick::{pick_interpolant, PickDatum, SchurInterpolant};
use crate::regions::{sigma, PolePair};
use crate::{Complex, Error, Result};

use super::curve::Curve;
use super::{Budget, ADMISSION_TOL};

const ARC_STEP: f64 = 0.01;
const MAX_ARC_STEPS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LempertWitness {
    /// `λ ↦ (λ, λψ(λ))`, coordinates exchanged when `swapped`.
    Geodesic {
        swapped: bool,
        interpolant: SchurInterpolant,
        lambdas: [Complex; 2],
        residual: f64,
    },
    /// `λ ↦ (ωλ m_a(λ), λ m_b(λ))`, coordinates exchanged when `swapped`.
    Rotated {
        swapped: bool,
        omega: Complex,
        a: Complex,
        b: Complex,
        lambdas: [Complex; 2],
        residual: f64,
    },
}

impl LempertWitness {
    pub fn eval(&self, lambda: Complex) -> [Complex; 2] {
        let (x, swapped) = match *self {
            LempertWitness::Geodesic {
                swapped,
                interpolant,
                ..
            } => ([lambda, lambda * interpolant.eval(lambda)], swapped),
            LempertWitness::Rotated {
                swapped,
                omega,
                a,
                b,
                ..
            } => (
                [
                    omega * lambda * mobius_map(a, lambda),
                    lambda * mobius_map(b, lambda),
                ],
                swapped,
            ),
        };
        if swapped {
            [x[1], x[0]]
        } else {
            x
        }
    }

    pub fn lambdas(&self) -> [Complex; 2] {
        match *self {
            LempertWitness::Geodesic { lambdas, .. } | LempertWitness::Rotated { lambdas, .. } => {
                lambdas
            }
        }
    }

    pub fn residual(&self) -> f64 {
        match *self {
            LempertWitness::Geodesic { residual, .. }
            | LempertWitness::Rotated { residual, .. } => residual,
        }
    }

    pub fn value(&self) -> f64 {
        let [l1, l2] = self.lambdas();
        (l1 * l2).norm().ln()
    }
}

fn interpolation_residual(w: &LempertWitness, pair: &PolePair) -> f64 {
    let [l1, l2] = w.lambdas();
    let (hp, hq) = (w.eval(l1), w.eval(l2));
    [
        hp[0] - pair.p.x1(),
        hp[1] - pair.p.x2(),
        hq[0] - pair.q.x1(),
        hq[1] - pair.q.x2(),
    ]
    .iter()
    .fold(0.0f64, |m, d| m.max(d.norm()))
}

fn geodesic(pair: &PolePair, swapped: bool) -> Option<LempertWitness> {
    let work = if swapped { sigma(pair) } else { *pair };
    let (p, q) = (work.p, work.q);
    let datum = PickDatum::new(
        DiscPoint::new(p.x1()).ok()?,
        DiscPoint::new(q.x1()).ok()?,
        DiscPoint::new(p.x2() / p.x1()).ok()?,
        DiscPoint::new(q.x2() / q.x1()).ok()?,
    )
    .ok()?;
    let interpolant = pick_interpolant(&datum).ok()?;
    let mut w = LempertWitness::Geodesic {
        swapped,
        interpolant,
        lambdas: [p.x1(), q.x1()],
        residual: 0.0,
    };
    let r = interpolation_residual(&w, pair);
    if let LempertWitness::Geodesic { residual, .. } = &mut w {
        *residual = r;
    }
    (r < ADMISSION_TOL).then_some(w)
}

fn lambdas(x: &[f64; 4]) -> (Complex, Complex) {
    (Complex::new(x[0], x[1]), Complex::new(x[2], x[3]))
}

/// Maps both pole arguments through `f`.
fn map_pair(x: &[f64; 4], f: fn(Complex) -> Complex) -> [f64; 4] {
    let (a, b) = (f(Complex::new(x[0], x[1])), f(Complex::new(x[2], x[3])));
    [a.re, a.im, b.re, b.im]
}

/// The `h` family for one coordinate order.
struct Rotated {
    p: [Complex; 2],
    q: [Complex; 2],
    swapped: bool,
}

#[derive(Clone, Copy, Debug)]
struct Point {
    theta: f64,
    x: [f64; 4],
}

impl Rotated {
    /// `(a, b)` from `h(λ₁) = p`, when admissible.
    fn centers(&self, omega: Complex, l1: Complex) -> Option<(Complex, Complex)> {
        let u = omega.conj() * self.p[0] / l1;
        let v = self.p[1] / l1;
        if l1.norm() >= 1.0 || u.norm() >= 1.0 || v.norm() >= 1.0 {
            return None;
        }
        Some((mobius_center(l1, u), mobius_center(l1, v)))
    }

    fn residual(&self, theta: f64, x: &[f64; 4]) -> Option<[f64; 4]> {
        let omega = Complex::from_polar(1.0, theta);
        let (l1, l2) = lambdas(x);
        if l2.norm() >= 1.0 {
            return None;
        }
        let (a, b) = self.centers(omega, l1)?;
        let r1 = omega * l2 * mobius_map(a, l2) - self.q[0];
        let r2 = l2 * mobius_map(b, l2) - self.q[1];
        Some([r1.re, r1.im, r2.re, r2.im])
    }

    /// Lands on the feasible curve from `(θ, x0)`. The angle is left free and
    /// the pole arguments are carried in unconstrained coordinates, so that
    /// iterates stay admissible even when the feasible angles are few.
    fn land(&self, theta: f64, x0: [f64; 4], opts: &LmOptions) -> Option<Point> {
        let w0 = map_pair(&x0, plane_from_disc);
        let out = levenberg_marquardt(
            |y: &[f64; 5]| {
                let x = map_pair(&[y[1], y[2], y[3], y[4]], disc_from_plane);
                self.residual(y[0], &x)
            },
            [theta, w0[0], w0[1], w0[2], w0[3]],
            opts,
        );
        if !out.converged {
            return None;
        }
        let y = out.x;
        let x = map_pair(&[y[1], y[2], y[3], y[4]], disc_from_plane);
        let (l1, l2) = lambdas(&x);
        ((l1 * l2).norm() > 0.0).then_some(Point { theta: y[0], x })
    }

    fn witness(&self, pt: &Point, pair: &PolePair) -> Option<LempertWitness> {
        let omega = Complex::from_polar(1.0, pt.theta);
        let (l1, l2) = lambdas(&pt.x);
        let (a, b) = self.centers(omega, l1)?;
        if a.norm() >= 1.0 || b.norm() >= 1.0 {
            return None;
        }
        let mut w = LempertWitness::Rotated {
            swapped: self.swapped,
            omega,
            a,
            b,
            lambdas: [l1, l2],
            residual: 0.0,
        };
        let r = interpolation_residual(&w, pair);
        if let LempertWitness::Rotated { residual, .. } = &mut w {
            *residual = r;
        }
        (r < ADMISSION_TOL).then_some(w)
    }

    fn random_start(&self, rng: &mut impl Rng) -> (f64, [f64; 4]) {
        let floor1 = self.p[0].norm().max(self.p[1].norm());
        let floor2 = self.q[0].norm().max(self.q[1].norm());
        let mut draw = |floor: f64| {
            let r = rng.gen_range(floor..1.0);
            Complex::from_polar(r, rng.gen_range(0.0..TAU))
        };
        let (l1, l2) = (draw(floor1), draw(floor2));
        (rng.gen_range(0.0..TAU), [l1.re, l1.im, l2.re, l2.im])
    }

    #[allow(clippy::type_complexity)]
    fn curve(
        &self,
        budget: &Budget,
    ) -> Curve<impl Fn(&[f64; 5]) -> Option<[f64; 4]> + '_, impl Fn(&[f64; 5]) -> f64, 5, 4> {
        Curve {
            equations: move |y: &[f64; 5]| self.residual(y[0], &[y[1], y[2], y[3], y[4]]),
            objective: |y: &[f64; 5]| {
                let (l1, l2) = lambdas(&[y[1], y[2], y[3], y[4]]);
                -(l1 * l2).norm().ln()
            },
            newton_steps: budget.newton_steps,
            golden_steps: budget.golden_steps,
            arc_step: ARC_STEP,
            max_arc_steps: MAX_ARC_STEPS,
        }
    }

    fn search(
        &self,
        pair: &PolePair,
        budget: &Budget,
        rng: &mut impl Rng,
    ) -> Option<LempertWitness> {
        let opts = LmOptions {
            max_iterations: 100,
            tolerance: 1e-13,
            ..LmOptions::default()
        };
        let curve = self.curve(budget);
        let mut best: Option<LempertWitness> = None;
        let mut visited: Vec<[f64; 5]> = Vec::new();
        for _ in 0..budget.disc_starts {
            let (theta, x0) = self.random_start(rng);
            let Some(start) = self.land(theta, x0, &opts) else {
                continue;
            };
            let y0 = [start.theta, start.x[0], start.x[1], start.x[2], start.x[3]];
            // a start on a stretch already climbed leads to the same peak
            if visited.iter().any(|v| distance(v, &y0) < ARC_STEP) {
                continue;
            }
            let (y, path) = curve.climb(y0);
            // fall back along the path when the peak itself is not admitted
            let admitted = std::iter::once(&y).chain(path.iter().rev()).find_map(|y| {
                let pt = Point {
                    theta: y[0],
                    x: [y[1], y[2], y[3], y[4]],
                };
                self.witness(&pt, pair)
            });
            visited.extend(path);
            if let Some(w) = admitted {
                if best.as_ref().is_none_or(|b| w.value() < b.value()) {
                    best = Some(w);
                }
            }
        }
        best
    }
}

fn distance(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    let d = (a[0] - b[0]).rem_euclid(TAU);
    let d = d.min(TAU - d);
    (d * d + (1..5).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>()).sqrt()
}

/// Best admitted `log |λ_p λ_q|` and its witness.
pub fn lempert_upper(pair: &PolePair, budget: &Budget) -> Result<(f64, LempertWitness)> {
    let mut candidates: Vec<LempertWitness> = [false, true]
        .into_iter()
        .filter_map(|s| geodesic(pair, s))
        .collect();
    for swapped in [false, true] {
        let work = if swapped { sigma(pair) } else { *pair };
        let family = Rotated {
            p: work.p.coords(),
            q: work.q.coords(),
            swapped,
        };
        // one stream per family, so a larger budget only adds starts
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(swapped as u64));
        candidates.extend(family.search(pair, budget, &mut rng));
    }
    candidates
        .into_iter()
        .map(|w| (w.value(), w))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or(Error::NoFeasibleDisc)
}
