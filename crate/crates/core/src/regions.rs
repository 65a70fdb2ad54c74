//! Classification of a normalized pole pair `(p, q)` (base point at the
//! origin) into the generic regions on which the solver has a closed form or
//! an inversion, plus the exceptional sets.
//!
//! With `a = |p₁| − |p₂|`, `b = |q₁| − |q₂|`:
//!
//! * `U`: `a > 0`, `b > 0`, `m(p₂/p₁, q₂/q₁) < m(p₁, q₁)`; `SIGMA_U` is its
//!   image under the coordinate swap `σ`.
//! * `E1`: `a < 0`, `b > 0`; `E3 = σ(E1)`.
//! * `E2`: `a > 0`, `b > 0`, `m(p₂/p₁, q₂/q₁) > m(p₁, q₁)`; `E4 = σ(E2)`.
//! * `THIN_A`: `p₁ = q₁` or `p₂ = q₂`. The `E` regions exclude it.
//!
//! Every strict inequality must hold with slack greater than `ε`; a pair that
//! passes none of the tests that way lands in `BOUNDARY_BAND`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::mobius::{mobius_dist, BidiscPoint};
use crate::{Error, Result};

pub const DEFAULT_EPS: f64 = 1e-9;

/// Pole pairs closer than this (coordinatewise) are treated as coincident.
pub const COINCIDENCE_TOL: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegionLabel {
    Diagonal,
    PoleAtBase,
    ThinA,
    U,
    SigmaU,
    E1,
    E2,
    E3,
    E4,
    BoundaryBand,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 10] = [
        RegionLabel::Diagonal,
        RegionLabel::PoleAtBase,
        RegionLabel::ThinA,
        RegionLabel::U,
        RegionLabel::SigmaU,
        RegionLabel::E1,
        RegionLabel::E2,
        RegionLabel::E3,
        RegionLabel::E4,
        RegionLabel::BoundaryBand,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::Diagonal => "DIAGONAL",
            RegionLabel::PoleAtBase => "POLE_AT_BASE",
            RegionLabel::ThinA => "THIN_A",
            RegionLabel::U => "U",
            RegionLabel::SigmaU => "SIGMA_U",
            RegionLabel::E1 => "E1",
            RegionLabel::E2 => "E2",
            RegionLabel::E3 => "E3",
            RegionLabel::E4 => "E4",
            RegionLabel::BoundaryBand => "BOUNDARY_BAND",
        }
    }

    /// The label of `σ(pair)` given the label of `pair`.
    pub fn sigma(self) -> RegionLabel {
        match self {
            RegionLabel::U => RegionLabel::SigmaU,
            RegionLabel::SigmaU => RegionLabel::U,
            RegionLabel::E1 => RegionLabel::E3,
            RegionLabel::E3 => RegionLabel::E1,
            RegionLabel::E2 => RegionLabel::E4,
            RegionLabel::E4 => RegionLabel::E2,
            other => other,
        }
    }

    /// `U` or `SIGMA_U`.
    pub fn is_omega1(self) -> bool {
        matches!(self, RegionLabel::U | RegionLabel::SigmaU)
    }

    /// One of `E1..E4`.
    pub fn is_omega2(self) -> bool {
        matches!(
            self,
            RegionLabel::E1 | RegionLabel::E2 | RegionLabel::E3 | RegionLabel::E4
        )
    }

    pub fn is_generic(self) -> bool {
        self.is_omega1() || self.is_omega2()
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RegionLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RegionLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown region tag {s}")))
    }
}

/// An ordered pair of poles in the bidisc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolePair {
    pub p: BidiscPoint,
    pub q: BidiscPoint,
}

impl PolePair {
    pub fn new(p: BidiscPoint, q: BidiscPoint) -> Self {
        PolePair { p, q }
    }

    /// From `[p1re, p1im, p2re, p2im, q1re, q1im, q2re, q2im]`.
    pub fn from_reals(r: [f64; 8]) -> Result<Self> {
        Ok(PolePair {
            p: BidiscPoint::from_reals([r[0], r[1], r[2], r[3]])?,
            q: BidiscPoint::from_reals([r[4], r[5], r[6], r[7]])?,
        })
    }

    pub fn to_reals(&self) -> [f64; 8] {
        let (p, q) = (self.p.to_reals(), self.q.to_reals());
        [p[0], p[1], p[2], p[3], q[0], q[1], q[2], q[3]]
    }

    /// `(q, p)`.
    pub fn swap_poles(&self) -> Self {
        PolePair {
            p: self.q,
            q: self.p,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.p.dist_inf(&self.q) < COINCIDENCE_TOL
    }
}

/// `σ(p, q) = ((p₂, p₁), (q₂, q₁))`.
pub fn sigma(pair: &PolePair) -> PolePair {
    PolePair {
        p: pair.p.swap(),
        q: pair.q.swap(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: RegionLabel,
    /// Smallest slack among the defining inequalities of `label`. For the
    /// band it is the best slack any generic region achieved (at most `ε`).
    pub margin: f64,
}

/// Raw slacks of the inequalities that carve out the generic regions.
/// Positive means "satisfied".
#[derive(Clone, Copy, Debug)]
struct Slacks {
    /// `|p₁| − |p₂|`
    a: f64,
    /// `|q₁| − |q₂|`
    b: f64,
    /// `m(p₁, q₁) − m(p₂/p₁, q₂/q₁)`, meaningful when `a, b > 0`.
    geodesic_first: f64,
    /// `m(p₂, q₂) − m(p₁/p₂, q₁/q₂)`, meaningful when `a, b < 0`.
    geodesic_second: f64,
}

impl Slacks {
    fn of(pair: &PolePair) -> Self {
        let [p1, p2] = pair.p.coords();
        let [q1, q2] = pair.q.coords();
        let a = p1.norm() - p2.norm();
        let b = q1.norm() - q2.norm();
        let geodesic_first = if a > 0.0 && b > 0.0 {
            mobius_dist(p1, q1) - mobius_dist(p2 / p1, q2 / q1)
        } else {
            f64::NAN
        };
        let geodesic_second = if a < 0.0 && b < 0.0 {
            mobius_dist(p2, q2) - mobius_dist(p1 / p2, q1 / q2)
        } else {
            f64::NAN
        };
        Slacks {
            a,
            b,
            geodesic_first,
            geodesic_second,
        }
    }
}

/// Classifies a pair whose base point has been normalized to the origin.
pub fn classify(pair: &PolePair, eps: f64) -> Classification {
    let done = |label, margin| Classification { label, margin };
    if pair.is_diagonal() {
        return done(RegionLabel::Diagonal, 0.0);
    }
    if pair.p.is_origin(COINCIDENCE_TOL) || pair.q.is_origin(COINCIDENCE_TOL) {
        return done(RegionLabel::PoleAtBase, 0.0);
    }
    let [p1, p2] = pair.p.coords();
    let [q1, q2] = pair.q.coords();
    let thin = (p1 - q1).norm().min((p2 - q2).norm());
    if thin < eps {
        return done(RegionLabel::ThinA, eps - thin);
    }

    let s = Slacks::of(pair);
    let (a, b) = (s.a, s.b);
    let mut best = f64::NEG_INFINITY;
    let mut attempt = |label: RegionLabel, margin: f64| -> Option<Classification> {
        if margin > eps {
            // E_j = F_j minus the thin set, so its distance counts as a slack
            let margin = if label.is_omega2() {
                margin.min(thin)
            } else {
                margin
            };
            Some(done(label, margin))
        } else {
            best = best.max(margin);
            None
        }
    };

    let found = if a > 0.0 && b > 0.0 {
        let d = s.geodesic_first;
        let m = a.min(b);
        attempt(RegionLabel::U, m.min(d)).or_else(|| attempt(RegionLabel::E2, m.min(-d)))
    } else if a < 0.0 && b < 0.0 {
        let d = s.geodesic_second;
        let m = (-a).min(-b);
        attempt(RegionLabel::SigmaU, m.min(d)).or_else(|| attempt(RegionLabel::E4, m.min(-d)))
    } else if a < 0.0 {
        attempt(RegionLabel::E1, (-a).min(b))
    } else {
        attempt(RegionLabel::E3, a.min(-b))
    };
    found.unwrap_or(done(RegionLabel::BoundaryBand, best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_pair;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair(r: [f64; 8]) -> PolePair {
        PolePair::from_reals(r).unwrap()
    }

    #[test]
    fn hand_examples() {
        let u = pair([0.5, 0.0, 0.1, 0.0, -0.5, 0.0, 0.05, 0.0]);
        assert_eq!(classify(&u, DEFAULT_EPS).label, RegionLabel::U);

        let e1 = pair([0.1, 0.0, 0.5, 0.0, 0.5, 0.0, 0.1, 0.0]);
        assert_eq!(classify(&e1, DEFAULT_EPS).label, RegionLabel::E1);

        let e2 = pair([0.5, 0.0, 0.4, 0.0, 0.6, 0.0, -0.5, 0.0]);
        assert_eq!(classify(&e2, DEFAULT_EPS).label, RegionLabel::E2);

        assert_eq!(
            classify(&PolePair::new(u.p, u.p), DEFAULT_EPS).label,
            RegionLabel::Diagonal
        );
        let base = PolePair::new(BidiscPoint::ORIGIN, u.q);
        assert_eq!(classify(&base, DEFAULT_EPS).label, RegionLabel::PoleAtBase);

        let thin = pair([0.5, 0.0, 0.1, 0.0, 0.5, 0.0, 0.3, 0.2]);
        assert_eq!(classify(&thin, DEFAULT_EPS).label, RegionLabel::ThinA);
    }

    #[test]
    fn u_margin_is_smallest_slack() {
        let u = pair([0.5, 0.0, 0.1, 0.0, -0.5, 0.0, 0.05, 0.0]);
        let c = classify(&u, DEFAULT_EPS);
        let geo = 0.8 - 0.3 / 1.02;
        let expected = (0.4f64).min(0.45).min(geo);
        assert!((c.margin - expected).abs() < 1e-15);
    }

    #[test]
    fn band_between_u_and_e2() {
        // m(p2/p1, q2/q1) = m(0, 0.8) = 0.8 = m(0.5, -0.5): on the U/E2 interface
        let tie = pair([0.5, 0.0, 0.0, 0.0, -0.5, 0.0, -0.4, 0.0]);
        let c = classify(&tie, 1e-9);
        assert_eq!(c.label, RegionLabel::BoundaryBand);
        assert!(c.margin <= 1e-9);
        let inside_u = pair([0.5, 0.0, 0.0, 0.0, -0.5, 0.0, -0.39, 0.0]);
        assert_eq!(classify(&inside_u, 1e-9).label, RegionLabel::U);
        let inside_e2 = pair([0.5, 0.0, 0.0, 0.0, -0.5, 0.0, -0.41, 0.0]);
        assert_eq!(classify(&inside_e2, 1e-9).label, RegionLabel::E2);
    }

    #[test]
    fn sigma_examples() {
        let pr = pair([0.1, 0.2, 0.3, 0.4, -0.5, 0.1, 0.2, -0.3]);
        assert_eq!(sigma(&sigma(&pr)), pr);
        let s = sigma(&pr);
        assert_eq!(s.p.x1(), pr.p.x2());
        assert_eq!(s.q.x2(), pr.q.x1());
    }

    #[test]
    fn sigma_equivariance_and_disjointness() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100_000 {
            let pr = random_pair(&mut rng, 1.0);
            let c = classify(&pr, 1e-6);
            let cs = classify(&sigma(&pr), 1e-6);
            assert_eq!(cs.label, c.label.sigma());
            assert_eq!(cs.margin, c.margin);
            check_defining_inequalities(&pr, c.label);
        }
    }

    /// Re-evaluates the raw set definitions independently of `classify`.
    fn check_defining_inequalities(pr: &PolePair, label: RegionLabel) {
        let [p1, p2] = pr.p.coords();
        let [q1, q2] = pr.q.coords();
        let in_a = p1 == q1 || p2 == q2;
        let in_u = p2.norm() < p1.norm()
            && q2.norm() < q1.norm()
            && mobius_dist(p2 / p1, q2 / q1) < mobius_dist(p1, q1);
        let in_su = p1.norm() < p2.norm()
            && q1.norm() < q2.norm()
            && mobius_dist(p1 / p2, q1 / q2) < mobius_dist(p2, q2);
        let in_f1 = p2.norm() > p1.norm() && q2.norm() < q1.norm();
        let in_f3 = p1.norm() > p2.norm() && q1.norm() < q2.norm();
        let in_f2 = p2.norm() < p1.norm()
            && q2.norm() < q1.norm()
            && mobius_dist(p2 / p1, q2 / q1) > mobius_dist(p1, q1);
        let in_f4 = p1.norm() < p2.norm()
            && q1.norm() < q2.norm()
            && mobius_dist(p1 / p2, q1 / q2) > mobius_dist(p2, q2);
        let memberships = [
            (RegionLabel::U, in_u),
            (RegionLabel::SigmaU, in_su),
            (RegionLabel::E1, in_f1 && !in_a),
            (RegionLabel::E2, in_f2 && !in_a),
            (RegionLabel::E3, in_f3 && !in_a),
            (RegionLabel::E4, in_f4 && !in_a),
        ];
        let hits = memberships.iter().filter(|(_, m)| *m).count();
        assert!(hits <= 1, "overlapping regions for {pr:?}");
        for (l, member) in memberships {
            if l == label {
                assert!(member, "{pr:?} labeled {label} but fails its inequalities");
            }
        }
    }

    #[test]
    fn density() {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let n = 100_000;
        let generic = (0..n)
            .filter(|_| {
                classify(&random_pair(&mut rng, 1.0), 1e-6)
                    .label
                    .is_generic()
            })
            .count();
        assert!(generic as f64 >= 0.99 * n as f64, "{generic}");
    }

    #[test]
    fn label_round_trip() {
        for l in RegionLabel::ALL {
            assert_eq!(l.as_str().parse::<RegionLabel>().unwrap(), l);
            assert_eq!(serde_json::to_string(&l).unwrap(), format!("\"{l}\""));
        }
    }
}
