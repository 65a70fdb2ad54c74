//! Closed form on `U`: the disc `(λ, λψ(λ))` and the function
//! `m_{p₁}(x₁) m_{q₁}(x₁)` both pin the value `log |p₁ q₁|`.

use crate::mobius::DiscPoint;
use crate::pick::{pick_interpolant, PickDatum};
use crate::regions::{Classification, PolePair, RegionLabel};
use crate::{Error, Result};

use super::{oriented, Certificate, DiscWitness, LeftInverseWitness, SolveStats};

/// Certificate for a pair in `U`, or in `σ(U)` when the label says so.
pub fn omega1_solve(pair: &PolePair, classification: Classification) -> Result<Certificate> {
    let coordinate_swap = match classification.label {
        RegionLabel::U => false,
        RegionLabel::SigmaU => true,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "closed form needs a U or SIGMA_U pair, got {}",
                classification.label
            )))
        }
    };
    let work = oriented(pair, coordinate_swap);
    let (p, q) = (work.p, work.q);
    let node1 = DiscPoint::new(p.x1())?;
    let node2 = DiscPoint::new(q.x1())?;
    let datum = PickDatum::new(
        node1,
        node2,
        DiscPoint::new(p.x2() / p.x1())?,
        DiscPoint::new(q.x2() / q.x1())?,
    )?;
    let interpolant = pick_interpolant(&datum)?;
    Ok(Certificate::assemble(
        classification,
        *pair,
        coordinate_swap,
        DiscWitness::Geodesic { interpolant },
        [p.x1(), q.x1()],
        LeftInverseWitness::Coordinate {
            zeros: [node1, node2],
        },
        0,
        SolveStats::default(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{classify, sigma, DEFAULT_EPS};
    use crate::sample::random_pair;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_u_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut seen = 0;
        while seen < 2000 {
            let pair = random_pair(&mut rng, 1.0);
            let cls = classify(&pair, DEFAULT_EPS);
            if cls.label != RegionLabel::U {
                continue;
            }
            seen += 1;
            let cert = omega1_solve(&pair, cls).unwrap();
            assert_eq!(cert.value, (pair.p.x1() * pair.q.x1()).norm().ln());
            assert!(
                cert.residuals.max() < 1e-12,
                "{:?} {pair:?}",
                cert.residuals
            );
            assert!(cert.is_valid());

            let image = sigma(&pair);
            let mirrored = omega1_solve(&image, classify(&image, DEFAULT_EPS)).unwrap();
            assert!(mirrored.coordinate_swap);
            assert_eq!(mirrored.value, cert.value);
            assert!(mirrored.residuals.max() < 1e-12);
        }
    }

    #[test]
    fn rejects_other_regions() {
        let pair = PolePair::from_reals([0.1, 0.0, 0.5, 0.0, 0.5, 0.0, 0.1, 0.0]).unwrap();
        let cls = classify(&pair, DEFAULT_EPS);
        assert!(omega1_solve(&pair, cls).is_err());
    }
}
