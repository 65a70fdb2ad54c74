//! Lower bound: functions into the disc vanishing at both poles.
//!
//! Families: `m_{p₁}(x₁) m_{q₁}(x₁)`, its `x₂` analog, and
//! `m_s ∘ F_{t,ω,τ}` with the degree-(1,1) rational inner function
//!
//! ```text
//! F(x) = (t ω̄ x₁ + (1 − t) x₂ + τ ω̄ x₁ x₂) / (1 + τ ((1 − t) ω̄ x₁ + t x₂)),
//! ```
//!
//! where `(ω, τ)` solve `F(p) = F(q)` and `s` is that common value.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::mobius::mobius_map;
use crate::regions::{sigma, PolePair};
use crate::Complex;

use super::curve::Curve;
use super::{Budget, ADMISSION_TOL};

/// Seeds kept per `t` from the coarse angle grid.
const SEEDS_PER_T: usize = 6;
/// Best grid roots whose curves are climbed.
const REFINED_BRANCHES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CaraWitness {
    /// `m_{zeros[0]}(x_k) m_{zeros[1]}(x_k)`, `k = coordinate`.
    CoordinateBlaschke {
        coordinate: usize,
        zeros: [Complex; 2],
    },
    /// `m_s(F_{t,ω,τ}(x))`, on `σ(x)` when `swapped`.
    Rational {
        swapped: bool,
        t: f64,
        omega: Complex,
        tau: Complex,
        s: Complex,
        residual: f64,
    },
}

impl CaraWitness {
    pub fn eval(&self, x: [Complex; 2]) -> Complex {
        match *self {
            CaraWitness::CoordinateBlaschke { coordinate, zeros } => {
                mobius_map(zeros[0], x[coordinate]) * mobius_map(zeros[1], x[coordinate])
            }
            CaraWitness::Rational {
                swapped,
                t,
                omega,
                tau,
                s,
                ..
            } => {
                let x = if swapped { [x[1], x[0]] } else { x };
                mobius_map(s, inner(t, omega, tau, x))
            }
        }
    }
}

fn inner(t: f64, omega: Complex, tau: Complex, x: [Complex; 2]) -> Complex {
    let y = omega.conj() * x[0];
    (t * y + (1.0 - t) * x[1] + tau * y * x[1]) / (1.0 + tau * ((1.0 - t) * y + t * x[1]))
}

struct Rational {
    p: [Complex; 2],
    q: [Complex; 2],
    swapped: bool,
}

/// A point `(t, θ_ω, θ_τ)` on the solution curve of `F(p) = F(q)`.
#[derive(Clone, Copy, Debug)]
struct Root {
    y: [f64; 3],
    value: f64,
    s: Complex,
    residual: f64,
}

/// Continuation step along the curve.
const ARC_STEP: f64 = 0.01;
const MAX_ARC_STEPS: usize = 400;

impl Rational {
    fn gap(&self, y: [f64; 3]) -> Complex {
        let (w, tau) = (
            Complex::from_polar(1.0, y[1]),
            Complex::from_polar(1.0, y[2]),
        );
        inner(y[0], w, tau, self.p) - inner(y[0], w, tau, self.q)
    }

    #[allow(clippy::type_complexity)]
    fn curve(
        &self,
        budget: &Budget,
    ) -> Curve<impl Fn(&[f64; 3]) -> Option<[f64; 2]> + '_, impl Fn(&[f64; 3]) -> f64 + '_, 3, 2>
    {
        Curve {
            equations: move |y: &[f64; 3]| {
                let g = self.gap(*y);
                (y[0] > 0.0 && y[0] < 1.0).then_some([g.re, g.im])
            },
            objective: move |y: &[f64; 3]| {
                let w = Complex::from_polar(1.0, y[1]);
                let tau = Complex::from_polar(1.0, y[2]);
                inner(y[0], w, tau, self.p).norm().ln()
            },
            newton_steps: budget.newton_steps,
            golden_steps: budget.golden_steps,
            arc_step: ARC_STEP,
            max_arc_steps: MAX_ARC_STEPS,
        }
    }

    fn admit(&self, y: [f64; 3]) -> Option<Root> {
        if !(y[0] > 0.0 && y[0] < 1.0) {
            return None;
        }
        let (w, tau) = (
            Complex::from_polar(1.0, y[1]),
            Complex::from_polar(1.0, y[2]),
        );
        let s = inner(y[0], w, tau, self.p);
        let residual = mobius_map(s, inner(y[0], w, tau, self.q)).norm();
        let value = s.norm().ln();
        (s.norm() < 1.0 && residual < ADMISSION_TOL && value.is_finite()).then_some(Root {
            y,
            value,
            s,
            residual,
        })
    }

    /// Local minima of `|gap|` on the periodic angle grid at fixed `t`.
    fn seeds(&self, t: f64, n: usize) -> Vec<[f64; 3]> {
        let step = TAU / n as f64;
        let point = |i: usize, j: usize| [t, (i % n) as f64 * step, (j % n) as f64 * step];
        let grid: Vec<f64> = (0..n * n)
            .map(|k| self.gap(point(k / n, k % n)).norm())
            .collect();
        let at = |i: usize, j: usize| grid[(i % n) * n + (j % n)];
        let mut minima: Vec<(f64, [f64; 3])> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = at(i, j);
                let is_min = (0..3).all(|di| {
                    (0..3).all(|dj| (di == 1 && dj == 1) || v <= at(i + n + di - 1, j + n + dj - 1))
                });
                if is_min {
                    minima.push((v, point(i, j)));
                }
            }
        }
        minima.sort_by(|a, b| a.0.total_cmp(&b.0));
        minima.into_iter().take(SEEDS_PER_T).map(|m| m.1).collect()
    }

    fn witness(&self, root: &Root) -> CaraWitness {
        CaraWitness::Rational {
            swapped: self.swapped,
            t: root.y[0],
            omega: Complex::from_polar(1.0, root.y[1]),
            tau: Complex::from_polar(1.0, root.y[2]),
            s: root.s,
            residual: root.residual,
        }
    }

    fn search(&self, budget: &Budget) -> Option<(f64, CaraWitness)> {
        let n = budget.t_grid;
        let curve = self.curve(budget);
        let fix_t = [1.0, 0.0, 0.0];
        let mut roots: Vec<Root> = Vec::new();
        for k in 0..n {
            let t = (k + 1) as f64 / (n + 1) as f64;
            let best = self
                .seeds(t, budget.angle_grid)
                .into_iter()
                .filter_map(|y| curve.correct(y, &fix_t, t).and_then(|y| self.admit(y)))
                .max_by(|x, y| x.value.total_cmp(&y.value));
            roots.extend(best);
        }
        roots.sort_by(|a, b| b.value.total_cmp(&a.value));
        roots
            .into_iter()
            .take(REFINED_BRANCHES)
            .filter_map(|r| self.admit(curve.climb(r.y).0).or(Some(r)))
            .max_by(|a, b| a.value.total_cmp(&b.value))
            .map(|r| (r.value, self.witness(&r)))
    }
}

/// Best admitted `log |G(0,0)|` and its witness.
pub fn cara_lower(pair: &PolePair, budget: &Budget) -> (f64, CaraWitness) {
    let (p, q) = (pair.p.coords(), pair.q.coords());
    let mut best = (
        (p[0] * q[0]).norm().ln(),
        CaraWitness::CoordinateBlaschke {
            coordinate: 0,
            zeros: [p[0], q[0]],
        },
    );
    let second = (p[1] * q[1]).norm().ln();
    if second > best.0 {
        best = (
            second,
            CaraWitness::CoordinateBlaschke {
                coordinate: 1,
                zeros: [p[1], q[1]],
            },
        );
    }
    for swapped in [false, true] {
        let work = if swapped { sigma(pair) } else { *pair };
        let family = Rational {
            p: work.p.coords(),
            q: work.q.coords(),
            swapped,
        };
        if let Some((v, w)) = family.search(budget) {
            if v > best.0 {
                best = (v, w);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{big_phi, omega2_value};
    use crate::regions::classify;
    use crate::sample::random_params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn witnesses_vanish_at_poles() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let budget = Budget::default();
        for _ in 0..5 {
            let pair = crate::sample::random_pair(&mut rng, 0.9);
            let (v, w) = cara_lower(&pair, &budget);
            assert!(w.eval(pair.p.coords()).norm() < ADMISSION_TOL);
            assert!(w.eval(pair.q.coords()).norm() < ADMISSION_TOL);
            let at_zero = w.eval([Complex::from(0.0); 2]).norm().ln();
            assert!((at_zero - v).abs() < 1e-12);
        }
    }

    #[test]
    fn rational_family_reaches_extremal_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let budget = Budget::default();
        let mut checked = 0;
        while checked < 8 {
            let truth = random_params(&mut rng, 0.9, 0.1);
            let Ok(pair) = big_phi(&truth) else { continue };
            if !classify(&pair, 1e-3).label.is_omega2() {
                continue;
            }
            checked += 1;
            let value = omega2_value(&truth).unwrap();
            let (lower, w) = cara_lower(&pair, &budget);
            assert!((lower - value).abs() < 1e-6, "{lower} vs {value}");
            assert!(matches!(w, CaraWitness::Rational { .. }));
            // the coordinate family never beats the extremal value
            assert!((pair.p.x1() * pair.q.x1()).norm().ln() <= value + 1e-12);
        }
    }
}
