//! Two-point Nevanlinna–Pick interpolation on the unit disc.

use serde::{Deserialize, Serialize};

use crate::mobius::{mobius_dist, mobius_map, DiscPoint};
use crate::{Complex, Error, Result};

/// Slack allowed when comparing the two pseudohyperbolic distances, for data
/// at unit distance from the circle. Rounding in the distance grows like
/// `1 / (1 - |x|)`, so the slack is scaled by the point nearest the circle.
pub const SOLVABILITY_TOL: f64 = 1e-14;

/// Interpolation data `node1 ↦ target1`, `node2 ↦ target2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PickDatum {
    pub node1: DiscPoint,
    pub node2: DiscPoint,
    pub target1: DiscPoint,
    pub target2: DiscPoint,
}

impl PickDatum {
    pub fn new(
        node1: DiscPoint,
        node2: DiscPoint,
        target1: DiscPoint,
        target2: DiscPoint,
    ) -> Result<Self> {
        if node1 == node2 {
            return Err(Error::Degenerate("interpolation nodes coincide"));
        }
        Ok(PickDatum {
            node1,
            node2,
            target1,
            target2,
        })
    }
}

/// `ψ(λ) = m_{target}(η · m_{node}(λ))` with `|η| ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurInterpolant {
    pub node: Complex,
    pub target: Complex,
    pub eta: Complex,
}

impl SchurInterpolant {
    pub fn eval(&self, lambda: Complex) -> Complex {
        mobius_map(self.target, self.eta * mobius_map(self.node, lambda))
    }

    /// True when `ψ` is a disc automorphism (`|η| = 1` within `tol`).
    pub fn is_automorphism(&self, tol: f64) -> bool {
        (self.eta.norm() - 1.0).abs() <= tol
    }
}

pub fn pick_solvable(d: &PickDatum) -> bool {
    let clearance = [d.node1, d.node2, d.target1, d.target2]
        .iter()
        .map(|x| 1.0 - x.value().norm())
        .fold(1.0, f64::min);
    mobius_dist(d.target1, d.target2) <= mobius_dist(d.node1, d.node2) + SOLVABILITY_TOL / clearance
}

pub fn pick_interpolant(d: &PickDatum) -> Result<SchurInterpolant> {
    if !pick_solvable(d) {
        return Err(Error::NotSolvable);
    }
    let t1 = d.target1.value();
    let shifted_target = mobius_map(t1, d.target2.value());
    let mut eta = if shifted_target == Complex::from(0.0) {
        Complex::from(0.0)
    } else {
        shifted_target / mobius_map(d.node1, d.node2.value())
    };
    // Within the solvability slack |η| may exceed one by a rounding error.
    if eta.norm() > 1.0 {
        eta /= eta.norm();
    }
    Ok(SchurInterpolant {
        node: d.node1.value(),
        target: t1,
        eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dp(re: f64, im: f64) -> DiscPoint {
        DiscPoint::from_parts(re, im).unwrap()
    }

    fn random_dp(rng: &mut impl Rng) -> DiscPoint {
        loop {
            let z = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if let Ok(p) = DiscPoint::new(z) {
                return p;
            }
        }
    }

    #[test]
    fn solvability_examples() {
        let w = dp(0.1, 0.2);
        let d = PickDatum::new(dp(0.5, 0.0), dp(-0.5, 0.0), w, w).unwrap();
        assert!(pick_solvable(&d));

        let d = PickDatum::new(dp(0.5, 0.0), dp(-0.5, 0.0), dp(0.2, 0.0), dp(-0.1, 0.0)).unwrap();
        assert!(pick_solvable(&d));

        let d = PickDatum::new(dp(0.5, 0.0), dp(0.6, 0.0), dp(0.8, 0.0), dp(-0.8333, 0.0)).unwrap();
        assert!(!pick_solvable(&d));
        assert_eq!(pick_interpolant(&d), Err(Error::NotSolvable));
    }

    #[test]
    fn equal_nodes_rejected() {
        let a = dp(0.1, 0.1);
        assert!(PickDatum::new(a, a, a, a).is_err());
    }

    #[test]
    fn constant_interpolant() {
        let w = dp(0.3, -0.6);
        let d = PickDatum::new(dp(0.5, 0.0), dp(-0.2, 0.4), w, w).unwrap();
        let psi = pick_interpolant(&d).unwrap();
        assert_eq!(psi.eta, Complex::from(0.0));
        for l in [Complex::new(0.1, 0.9), Complex::new(-0.7, 0.0)] {
            assert!((psi.eval(l) - w.value()).norm() < 1e-15);
        }
    }

    #[test]
    fn hand_example() {
        let d = PickDatum::new(dp(0.5, 0.0), dp(-0.5, 0.0), dp(0.2, 0.0), dp(-0.1, 0.0)).unwrap();
        let psi = pick_interpolant(&d).unwrap();
        assert!((psi.eta.norm() - (0.3 / 1.02) / 0.8).abs() < 1e-15);
        assert!((psi.eval(Complex::from(0.5)) - 0.2).norm() < 1e-14);
        assert!((psi.eval(Complex::from(-0.5)) + 0.1).norm() < 1e-14);
    }

    #[test]
    fn extremal_case_is_automorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let n1 = random_dp(&mut rng);
            let n2 = random_dp(&mut rng);
            // targets = rotated image of the nodes under an automorphism
            let a = random_dp(&mut rng);
            let u = Complex::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            let t1 = DiscPoint::new(u * mobius_map(a, n1.value())).unwrap();
            let t2 = DiscPoint::new(u * mobius_map(a, n2.value())).unwrap();
            let psi = pick_interpolant(&PickDatum::new(n1, n2, t1, t2).unwrap()).unwrap();
            assert!(psi.is_automorphism(1e-9), "|eta| = {}", psi.eta.norm());
        }
    }

    #[test]
    fn random_solvable_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut count = 0;
        while count < 10_000 {
            let d = PickDatum {
                node1: random_dp(&mut rng),
                node2: random_dp(&mut rng),
                target1: random_dp(&mut rng),
                target2: random_dp(&mut rng),
            };
            if !pick_solvable(&d) {
                continue;
            }
            count += 1;
            let psi = pick_interpolant(&d).unwrap();
            let r1 = (psi.eval(d.node1.value()) - d.target1.value()).norm();
            let r2 = (psi.eval(d.node2.value()) - d.target2.value()).norm();
            assert!(r1 < 1e-13 && r2 < 1e-13, "{r1} {r2} {d:?}");
            if count % 100 == 0 {
                for _ in 0..10 {
                    assert!(psi.eval(random_dp(&mut rng).value()).norm() < 1.0);
                }
            }
        }
    }
}
