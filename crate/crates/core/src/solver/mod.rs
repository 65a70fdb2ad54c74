//! The certified solver.
//!
//! [`solve`] moves the base point to the origin, classifies the pole pair and
//! dispatches: the two-geodesic closed form on `U`/`SIGMA_U`, inversion of the
//! extremal parametrization on `E1..E4`, and a perturb-and-extrapolate
//! fallback on the thin set and the boundary band. Every result is a
//! [`Certificate`] carrying both witnesses and their residuals.

mod fallback;
mod omega1;
mod omega2;
mod proposition;

pub use fallback::{thin_set_fallback, FallbackRecord};
pub use omega1::omega1_solve;
pub use omega2::{invert_big_phi, omega2_solve, Inversion, Orientation};
pub use proposition::{
    proposition_refine, InversionMatrices, PropositionCandidate, PROPOSITION_CONSISTENCY_TOL,
};

use serde::{Deserialize, Serialize};

use crate::extremal::{ExtremalParams, LeftInverse};
use crate::mobius::{automorphism_normalize, mobius_map, BidiscPoint, DiscPoint};
use crate::pick::SchurInterpolant;
use crate::regions::{classify, sigma, Classification, PolePair, RegionLabel, COINCIDENCE_TOL};
use crate::{Complex, Error, Result};

/// Residual bound for a certificate to count as valid.
pub const CERTIFICATE_TOL: f64 = 1e-10;

pub const DEFAULT_SEED: u64 = 0x0005_eed0_c0ae_2d15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub seed: u64,
    /// Multistart budget of the inversion, per orientation.
    pub starts: usize,
    /// Classification tolerance.
    pub eps: f64,
    pub max_iterations: usize,
    /// Perturbation size of the thin-set fallback.
    pub fallback_delta: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: DEFAULT_SEED,
            starts: 64,
            eps: crate::regions::DEFAULT_EPS,
            max_iterations: 200,
            fallback_delta: 1e-4,
        }
    }
}

/// Base point `z` and poles `p`, `q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub z: BidiscPoint,
    pub p: BidiscPoint,
    pub q: BidiscPoint,
}

impl Problem {
    pub fn new(z: BidiscPoint, p: BidiscPoint, q: BidiscPoint) -> Result<Self> {
        if p.dist_inf(&q) < COINCIDENCE_TOL {
            return Err(Error::DiagonalPoles);
        }
        if p.dist_inf(&z) < COINCIDENCE_TOL || q.dist_inf(&z) < COINCIDENCE_TOL {
            return Err(Error::PoleAtBase);
        }
        Ok(Problem { z, p, q })
    }

    pub fn at_origin(p: BidiscPoint, q: BidiscPoint) -> Result<Self> {
        Problem::new(BidiscPoint::ORIGIN, p, q)
    }

    /// Poles after the automorphism sending `z` to the origin.
    pub fn normalized_pair(&self) -> PolePair {
        PolePair::new(
            automorphism_normalize(&self.z, &self.p),
            automorphism_normalize(&self.z, &self.q),
        )
    }
}

/// The interpolating disc realizing the Lempert side, in the solver's frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiscWitness {
    /// `λ ↦ (λ, λ ψ(λ))`.
    Geodesic { interpolant: SchurInterpolant },
    /// `λ ↦ (ω λ m_α(λ), λ m_β(λ))`.
    Extremal { params: ExtremalParams },
}

impl DiscWitness {
    pub fn eval(&self, lambda: Complex) -> [Complex; 2] {
        match self {
            DiscWitness::Geodesic { interpolant } => [lambda, lambda * interpolant.eval(lambda)],
            DiscWitness::Extremal { params } => params.disc(lambda),
        }
    }
}

/// The function vanishing at both poles realizing the Carathéodory side, in
/// the solver's frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LeftInverseWitness {
    /// `x ↦ m_a(x₁) m_b(x₁)`.
    Coordinate { zeros: [DiscPoint; 2] },
    /// `x ↦ m_s(F_{t,ω,τ}(x))`.
    Rational { left_inverse: LeftInverse },
}

impl LeftInverseWitness {
    pub fn eval(&self, x: [Complex; 2]) -> Complex {
        match self {
            LeftInverseWitness::Coordinate { zeros } => {
                mobius_map(zeros[0], x[0]) * mobius_map(zeros[1], x[0])
            }
            LeftInverseWitness::Rational { left_inverse } => left_inverse.eval(x),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖disc(λ_p) − p‖∞`
    pub interp_p: f64,
    pub interp_q: f64,
    /// `|G(p)|`
    pub vanish_p: f64,
    pub vanish_q: f64,
    /// `| log|G(0,0)| − value |`
    pub value_gap: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        [
            self.interp_p,
            self.interp_q,
            self.vanish_p,
            self.vanish_q,
            self.value_gap,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Componentwise maximum.
    pub fn worst(&self, other: &Residuals) -> Residuals {
        Residuals {
            interp_p: self.interp_p.max(other.interp_p),
            interp_q: self.interp_q.max(other.interp_q),
            vanish_p: self.vanish_p.max(other.vanish_p),
            vanish_q: self.vanish_q.max(other.vanish_q),
            value_gap: self.value_gap.max(other.value_gap),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertificateStatus {
    Valid,
    Fallback,
    Invalid,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub starts_used: usize,
    pub iterations: usize,
}

/// Witness pair proving `c(z; p, q) = l(z; p, q) = value`.
///
/// The witnesses live in the normalized frame (base point at the origin).
/// When `coordinate_swap` is set they were computed for `σ(poles)` and are
/// conjugated by `σ` on evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub region: RegionLabel,
    pub margin: f64,
    pub status: CertificateStatus,
    /// `log |λ_p λ_q|`, natural logarithm.
    pub value: f64,
    pub base_point: BidiscPoint,
    /// Normalized poles.
    pub poles: PolePair,
    pub coordinate_swap: bool,
    pub disc: DiscWitness,
    /// Disc arguments `(λ_p, λ_q)` hitting the two poles.
    pub arguments: [Complex; 2],
    pub left_inverse: LeftInverseWitness,
    pub residuals: Residuals,
    pub fallback: Option<FallbackRecord>,
    pub seed: u64,
    pub stats: SolveStats,
}

impl Certificate {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        classification: Classification,
        poles: PolePair,
        coordinate_swap: bool,
        disc: DiscWitness,
        arguments: [Complex; 2],
        left_inverse: LeftInverseWitness,
        seed: u64,
        stats: SolveStats,
    ) -> Certificate {
        let mut cert = Certificate {
            region: classification.label,
            margin: classification.margin,
            status: CertificateStatus::Invalid,
            value: (arguments[0] * arguments[1]).norm().ln(),
            base_point: BidiscPoint::ORIGIN,
            poles,
            coordinate_swap,
            disc,
            arguments,
            left_inverse,
            residuals: Residuals::default(),
            fallback: None,
            seed,
            stats,
        };
        cert.residuals = cert.witness_residuals();
        cert.status = if cert.residuals.max() < CERTIFICATE_TOL {
            CertificateStatus::Valid
        } else {
            CertificateStatus::Invalid
        };
        cert
    }

    fn frame(&self, x: [Complex; 2]) -> [Complex; 2] {
        if self.coordinate_swap {
            [x[1], x[0]]
        } else {
            x
        }
    }

    /// The interpolating disc in the normalized frame.
    pub fn disc_at(&self, lambda: Complex) -> [Complex; 2] {
        self.frame(self.disc.eval(lambda))
    }

    /// The left inverse in the normalized frame.
    pub fn left_inverse_at(&self, x: [Complex; 2]) -> Complex {
        self.left_inverse.eval(self.frame(x))
    }

    /// The interpolating disc in the caller's coordinates (through `z` at 0).
    pub fn disc_at_original(&self, lambda: Complex) -> [Complex; 2] {
        let [a, b] = self.disc_at(lambda);
        let z = self.base_point;
        [mobius_map(z.x1(), a), mobius_map(z.x2(), b)]
    }

    /// The left inverse in the caller's coordinates.
    pub fn left_inverse_at_original(&self, x: [Complex; 2]) -> Complex {
        let z = self.base_point;
        self.left_inverse_at([mobius_map(z.x1(), x[0]), mobius_map(z.x2(), x[1])])
    }

    /// Poles the witnesses were built for: the normalized poles, or the
    /// perturbed ones for a fallback certificate.
    pub fn witness_poles(&self) -> PolePair {
        self.fallback
            .as_ref()
            .map(|f| f.witness_poles)
            .unwrap_or(self.poles)
    }

    /// Recomputes the residuals of the witnesses by direct evaluation.
    pub fn witness_residuals(&self) -> Residuals {
        let poles = self.witness_poles();
        let [lp, lq] = self.arguments;
        let dist =
            |a: [Complex; 2], b: &BidiscPoint| (a[0] - b.x1()).norm().max((a[1] - b.x2()).norm());
        let witness_value = (lp * lq).norm().ln();
        let at_origin = self.left_inverse_at([Complex::from(0.0); 2]).norm().ln();
        Residuals {
            interp_p: dist(self.disc_at(lp), &poles.p),
            interp_q: dist(self.disc_at(lq), &poles.q),
            vanish_p: self.left_inverse_at(poles.p.coords()).norm(),
            vanish_q: self.left_inverse_at(poles.q.coords()).norm(),
            value_gap: (at_origin - witness_value).abs(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.status == CertificateStatus::Valid
    }

    /// `e^value`.
    pub fn modulus(&self) -> f64 {
        self.value.exp()
    }
}

/// Solves the two-pole problem at `problem.z`.
pub fn solve(problem: &Problem, config: &SolverConfig) -> Result<Certificate> {
    let pair = problem.normalized_pair();
    let mut cert = solve_normalized(&pair, config)?;
    cert.base_point = problem.z;
    Ok(cert)
}

/// Solves for base point at the origin.
pub fn solve_normalized(pair: &PolePair, config: &SolverConfig) -> Result<Certificate> {
    let classification = classify(pair, config.eps);
    match classification.label {
        RegionLabel::Diagonal => Err(Error::DiagonalPoles),
        RegionLabel::PoleAtBase => Err(Error::PoleAtBase),
        RegionLabel::U | RegionLabel::SigmaU => {
            let mut cert = omega1_solve(pair, classification)?;
            cert.seed = config.seed;
            Ok(cert)
        }
        RegionLabel::E1 | RegionLabel::E2 | RegionLabel::E3 | RegionLabel::E4 => {
            omega2_solve(pair, classification, config)
        }
        RegionLabel::ThinA | RegionLabel::BoundaryBand => {
            thin_set_fallback(pair, classification, config)
        }
    }
}

pub(crate) fn oriented(pair: &PolePair, coordinate_swap: bool) -> PolePair {
    if coordinate_swap {
        sigma(pair)
    } else {
        *pair
    }
}
