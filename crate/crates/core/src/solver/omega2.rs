//! Inversion of `Φ(α, β, c, ω, t) = (φ(c), φ(m_γ(c)))` on `E1..E4`.
//!
//! Eight real unknowns, eight real equations. The unknowns are carried in
//! unconstrained coordinates so that every iterate is admissible:
//! `α = w / √(1 + |w|²)` (same for `β`, `c`), `ω = e^{iθ}`,
//! `t = (1 + tanh s) / 2`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::extremal::{big_phi_raw, ExtremalParams};
use crate::lsq::{levenberg_marquardt, LmOptions};
use crate::mobius::{disc_from_plane, plane_from_disc, DiscPoint, UnimodularScalar};
use crate::regions::{Classification, PolePair, RegionLabel};
use crate::sample::random_disc;
use crate::{Complex, Error, Result};

use super::{
    oriented, Certificate, CertificateStatus, DiscWitness, LeftInverseWitness, SolveStats,
    SolverConfig,
};

/// Accept an inversion once `‖Φ(P) − pair‖∞` is below this.
pub const INVERSION_TOL: f64 = 1e-12;

const START_RADIUS: f64 = 0.95;
const START_T: (f64, f64) = (0.05, 0.95);

/// How the pair is presented to `Φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Direct,
    PolesSwapped,
    Sigma,
    SigmaPolesSwapped,
}

impl Orientation {
    pub fn coordinate_swap(self) -> bool {
        matches!(self, Orientation::Sigma | Orientation::SigmaPolesSwapped)
    }

    pub fn poles_swapped(self) -> bool {
        matches!(
            self,
            Orientation::PolesSwapped | Orientation::SigmaPolesSwapped
        )
    }

    fn apply(self, pair: &PolePair) -> PolePair {
        let p = oriented(pair, self.coordinate_swap());
        if self.poles_swapped() {
            p.swap_poles()
        } else {
            p
        }
    }

    /// Order in which orientations are tried for a given region.
    pub fn preference(label: RegionLabel) -> [Orientation; 4] {
        use Orientation::*;
        match label {
            RegionLabel::E4 => [Sigma, SigmaPolesSwapped, Direct, PolesSwapped],
            RegionLabel::E3 => [PolesSwapped, Direct, Sigma, SigmaPolesSwapped],
            _ => [Direct, PolesSwapped, Sigma, SigmaPolesSwapped],
        }
    }
}

/// A converged preimage, expressed for the original (unoriented) pole order
/// and canonicalized in the `±` class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inversion {
    pub params: ExtremalParams,
    pub orientation: Orientation,
    pub residual: f64,
    pub starts_used: usize,
    pub iterations: usize,
}

fn unpack(x: &[f64; 8]) -> (Complex, Complex, Complex, Complex, f64) {
    (
        disc_from_plane(Complex::new(x[0], x[1])),
        disc_from_plane(Complex::new(x[2], x[3])),
        disc_from_plane(Complex::new(x[4], x[5])),
        Complex::from_polar(1.0, x[6]),
        0.5 * (1.0 + x[7].tanh()),
    )
}

fn residual(x: &[f64; 8], target: &[Complex; 4]) -> Option<[f64; 8]> {
    let (alpha, beta, c, omega, t) = unpack(x);
    let image = big_phi_raw(alpha, beta, c, omega, t);
    let mut r = [0.0; 8];
    for k in 0..4 {
        let d = image[k] - target[k];
        r[2 * k] = d.re;
        r[2 * k + 1] = d.im;
    }
    Some(r)
}

fn random_start(rng: &mut impl Rng) -> [f64; 8] {
    let a = plane_from_disc(random_disc(rng, START_RADIUS));
    let b = plane_from_disc(random_disc(rng, START_RADIUS));
    let c = plane_from_disc(random_disc(rng, START_RADIUS));
    let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let t: f64 = rng.gen_range(START_T.0..START_T.1);
    [
        a.re,
        a.im,
        b.re,
        b.im,
        c.re,
        c.im,
        theta,
        (2.0 * t - 1.0).atanh(),
    ]
}

fn params_from(x: &[f64; 8]) -> Option<ExtremalParams> {
    let (alpha, beta, c, omega, t) = unpack(x);
    ExtremalParams::new(
        DiscPoint::new(alpha).ok()?,
        DiscPoint::new(beta).ok()?,
        DiscPoint::new(c).ok()?,
        UnimodularScalar::normalize(omega).ok()?,
        t,
    )
    .ok()
}

fn lm_options(config: &SolverConfig) -> LmOptions {
    LmOptions {
        max_iterations: config.max_iterations,
        tolerance: INVERSION_TOL,
        ..LmOptions::default()
    }
}

/// Multistart search for a preimage of `pair` in one orientation. Starts are
/// drawn from `rng`; returns the first start that converges.
pub fn invert_big_phi(
    pair: &PolePair,
    orientation: Orientation,
    starts: usize,
    rng: &mut impl Rng,
    config: &SolverConfig,
) -> std::result::Result<Inversion, (usize, usize)> {
    let work = orientation.apply(pair);
    let target = [work.p.x1(), work.p.x2(), work.q.x1(), work.q.x2()];
    let opts = lm_options(config);
    let mut iterations = 0;
    for k in 0..starts {
        let x0 = random_start(rng);
        let out = levenberg_marquardt(|x| residual(x, &target), x0, &opts);
        iterations += out.iterations;
        if !out.converged {
            continue;
        }
        let Some(mut params) = params_from(&out.x) else {
            continue;
        };
        if orientation.poles_swapped() {
            params = params.with_poles_swapped();
        }
        return Ok(Inversion {
            params: params.canonical(),
            orientation,
            residual: out.residual,
            starts_used: k + 1,
            iterations,
        });
    }
    Err((starts, iterations))
}

/// Certificate for a pair in `E1..E4`.
pub fn omega2_solve(
    pair: &PolePair,
    classification: Classification,
    config: &SolverConfig,
) -> Result<Certificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut stats = SolveStats::default();
    for orientation in Orientation::preference(classification.label) {
        // Each orientation keeps searching until its budget is spent or a
        // start yields a certificate that verifies.
        let mut remaining = config.starts;
        while remaining > 0 {
            match invert_big_phi(pair, orientation, remaining, &mut rng, config) {
                Ok(inv) => {
                    remaining -= inv.starts_used;
                    stats.starts_used += inv.starts_used;
                    stats.iterations += inv.iterations;
                    if let Some(cert) = certify(pair, classification, &inv, config, stats) {
                        return Ok(cert);
                    }
                }
                Err((used, iterations)) => {
                    stats.starts_used += used;
                    stats.iterations += iterations;
                    remaining = 0;
                }
            }
        }
    }
    Err(Error::NoConvergence {
        starts: stats.starts_used,
    })
}

fn certify(
    pair: &PolePair,
    classification: Classification,
    inv: &Inversion,
    config: &SolverConfig,
    stats: SolveStats,
) -> Option<Certificate> {
    let params = inv.params;
    let left_inverse = params.left_inverse().ok()?;
    let cert = Certificate::assemble(
        classification,
        *pair,
        inv.orientation.coordinate_swap(),
        DiscWitness::Extremal { params },
        [params.c.value(), params.partner()],
        LeftInverseWitness::Rational { left_inverse },
        config.seed,
        stats,
    );
    (cert.status == CertificateStatus::Valid).then_some(cert)
}
