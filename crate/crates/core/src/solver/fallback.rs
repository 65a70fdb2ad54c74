//! Thin set and boundary band: solve nearby generic problems and extrapolate.
//!
//! The pair is pushed by `δ` and `δ/2` along two fixed directions in the
//! real 8-space of pole coordinates. Each direction gives a Richardson
//! estimate `2 v(δ/2) − v(δ)`; the reported value is their mean and the
//! disagreement between the two bounds the value gap.

use serde::{Deserialize, Serialize};

use crate::regions::{classify, Classification, PolePair, RegionLabel};
use crate::{Error, Result};

use super::{omega1_solve, omega2_solve, Certificate, CertificateStatus, SolverConfig};

/// Two fixed unit directions with no special alignment to the coordinate
/// axes, the diagonal, or `σ`.
const DIRECTIONS: [[f64; 8]; 2] = [
    [0.41, -0.27, 0.13, 0.38, -0.35, 0.22, -0.46, 0.47],
    [-0.19, 0.44, 0.36, -0.21, 0.29, 0.49, 0.17, -0.49],
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FallbackRecord {
    pub delta: f64,
    /// Unit directions actually used (a direction is negated when the
    /// forward push leaves the bidisc or lands on a non-generic pair).
    pub directions: [[f64; 8]; 2],
    /// `[v(δ), v(δ/2)]` per direction.
    pub values: [[f64; 2]; 2],
    pub estimates: [f64; 2],
    pub spread: f64,
    /// The perturbed pair the stored witnesses interpolate.
    pub witness_poles: PolePair,
}

fn unit(d: [f64; 8]) -> [f64; 8] {
    let n = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    d.map(|x| x / n)
}

fn push(pair: &PolePair, dir: &[f64; 8], h: f64) -> Result<PolePair> {
    let mut r = pair.to_reals();
    for (x, d) in r.iter_mut().zip(dir) {
        *x += h * d;
    }
    PolePair::from_reals(r)
}

fn solve_generic(pair: &PolePair, config: &SolverConfig) -> Result<Certificate> {
    let cls = classify(pair, config.eps);
    let cert = match cls.label {
        RegionLabel::U | RegionLabel::SigmaU => omega1_solve(pair, cls)?,
        RegionLabel::E1 | RegionLabel::E2 | RegionLabel::E3 | RegionLabel::E4 => {
            omega2_solve(pair, cls, config)?
        }
        _ => return Err(Error::NoConvergence { starts: 0 }),
    };
    if cert.is_valid() {
        Ok(cert)
    } else {
        Err(Error::NoConvergence {
            starts: cert.stats.starts_used,
        })
    }
}

/// Solves at `pair + h d` and `pair + (h/2) d`, flipping `d` if needed.
fn probe(
    pair: &PolePair,
    dir: [f64; 8],
    delta: f64,
    config: &SolverConfig,
) -> Result<([f64; 8], [Certificate; 2], PolePair)> {
    let mut last = Error::NoConvergence { starts: 0 };
    for sign in [1.0, -1.0] {
        let d = dir.map(|x| sign * x);
        let attempt = (|| {
            let far = push(pair, &d, delta)?;
            let near = push(pair, &d, delta / 2.0)?;
            Ok::<_, Error>((
                [solve_generic(&far, config)?, solve_generic(&near, config)?],
                near,
            ))
        })();
        match attempt {
            Ok((certs, near)) => return Ok((d, certs, near)),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Certificate for a pair off the generic regions.
pub fn thin_set_fallback(
    pair: &PolePair,
    classification: Classification,
    config: &SolverConfig,
) -> Result<Certificate> {
    if pair.is_diagonal() {
        return Err(Error::DiagonalPoles);
    }
    let delta = config.fallback_delta;
    let (d0, c0, witness_poles) = probe(pair, unit(DIRECTIONS[0]), delta, config)?;
    let (d1, c1, _) = probe(pair, unit(DIRECTIONS[1]), delta, config)?;

    let values = [[c0[0].value, c0[1].value], [c1[0].value, c1[1].value]];
    let estimates = values.map(|[far, near]| 2.0 * near - far);
    let spread = (estimates[0] - estimates[1]).abs();

    let mut residuals = c0[0].residuals;
    let mut stats = c0[0].stats;
    for cert in c0.iter().chain(c1.iter()).skip(1) {
        residuals = residuals.worst(&cert.residuals);
        stats.starts_used += cert.stats.starts_used;
        stats.iterations += cert.stats.iterations;
    }
    residuals.value_gap = residuals.value_gap.max(spread);

    let witness = &c0[1];
    Ok(Certificate {
        region: classification.label,
        margin: classification.margin,
        status: CertificateStatus::Fallback,
        value: 0.5 * (estimates[0] + estimates[1]),
        base_point: crate::mobius::BidiscPoint::ORIGIN,
        poles: *pair,
        coordinate_swap: witness.coordinate_swap,
        disc: witness.disc,
        arguments: witness.arguments,
        left_inverse: witness.left_inverse,
        residuals,
        fallback: Some(FallbackRecord {
            delta,
            directions: [d0, d1],
            values,
            estimates,
            spread,
            witness_poles,
        }),
        seed: config.seed,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::DEFAULT_EPS;

    #[test]
    fn thin_pair_extrapolates() {
        let pair = PolePair::from_reals([0.3, 0.2, -0.4, 0.1, 0.3, 0.2, 0.5, -0.3]).unwrap();
        let cls = classify(&pair, DEFAULT_EPS);
        assert_eq!(cls.label, RegionLabel::ThinA);
        let cert = thin_set_fallback(&pair, cls, &SolverConfig::default()).unwrap();
        let rec = cert.fallback.as_ref().unwrap();
        assert!(cert.value.is_finite() && cert.value < 0.0);
        assert!(rec.spread < 1e-5, "spread {}", rec.spread);
        assert_eq!(cert.status, CertificateStatus::Fallback);
        // the stored witnesses still certify the perturbed pair
        let r = cert.witness_residuals();
        assert!(r.interp_p.max(r.interp_q).max(r.vanish_p).max(r.vanish_q) < 1e-10);
    }

    #[test]
    fn u_interior_matches_closed_form() {
        let pair = PolePair::from_reals([0.5, 0.0, 0.1, 0.0, -0.5, 0.0, 0.05, 0.0]).unwrap();
        let cls = classify(&pair, DEFAULT_EPS);
        let cert = thin_set_fallback(&pair, cls, &SolverConfig::default()).unwrap();
        assert!((cert.value - 0.25f64.ln()).abs() < 1e-4);
    }

    #[test]
    fn diagonal_is_an_error() {
        let pair = PolePair::from_reals([0.3, 0.0, 0.1, 0.0, 0.3, 0.0, 0.1, 0.0]).unwrap();
        let cls = classify(&pair, DEFAULT_EPS);
        assert_eq!(
            thin_set_fallback(&pair, cls, &SolverConfig::default()),
            Err(Error::DiagonalPoles)
        );
    }
}
