//! Seeded samplers for disc points, pole pairs and extremal parameters,
//! shared by the tests, the self-test and the acceptance suite.

use std::f64::consts::TAU;

use rand::Rng;

use crate::extremal::ExtremalParams;
use crate::mobius::{BidiscPoint, DiscPoint, UnimodularScalar};
use crate::regions::PolePair;
use crate::Complex;

/// Uniform point of the open disc of the given radius (`radius ≤ 1`).
pub fn random_disc(rng: &mut impl Rng, radius: f64) -> Complex {
    loop {
        let z = Complex::new(
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        );
        if z.norm() < radius && z.norm() < 1.0 - crate::mobius::DISC_GUARD {
            return z;
        }
    }
}

pub fn random_disc_point(rng: &mut impl Rng, radius: f64) -> DiscPoint {
    DiscPoint::new_unchecked(random_disc(rng, radius))
}

pub fn random_unimodular(rng: &mut impl Rng) -> UnimodularScalar {
    UnimodularScalar::from_angle(rng.gen_range(0.0..TAU))
}

pub fn random_bidisc(rng: &mut impl Rng, radius: f64) -> BidiscPoint {
    BidiscPoint::new_unchecked(random_disc(rng, radius), random_disc(rng, radius))
}

/// Both poles uniform in the polydisc of the given radius.
pub fn random_pair(rng: &mut impl Rng, radius: f64) -> PolePair {
    PolePair::new(random_bidisc(rng, radius), random_bidisc(rng, radius))
}

/// `α, β, c` uniform in the disc of radius `radius`, `ω` uniform on the
/// circle, `t` uniform in `(t_lo, 1 − t_lo)`. Degenerate draws are skipped.
pub fn random_params(rng: &mut impl Rng, radius: f64, t_lo: f64) -> ExtremalParams {
    loop {
        let alpha = random_disc_point(rng, radius);
        let beta = random_disc_point(rng, radius);
        let c = random_disc_point(rng, radius);
        let omega = random_unimodular(rng);
        let t = rng.gen_range(t_lo..1.0 - t_lo);
        if let Ok(p) = ExtremalParams::new(alpha, beta, c, omega, t) {
            return p;
        }
    }
}
