//! Linear-algebra recovery of `(α, β, c)` once `ω` and `l = c m_γ(c)` are
//! known.
//!
//! With `z = (ω̄ p₁, ω̄ q₁)` and `w = (p₂, q₂)` the equations
//! `z₁ = c m_α(c)`, `z₂ = (l/c) m_α(l/c)` (and the same for `w`, `β`) are
//! linear in `α`, `ᾱ` given `v = (c, 1/c)`:
//!
//! ```text
//! (α, β) = M v,    (ᾱ, β̄) = N v,    so    M v = N̄ v̄.
//! ```
//!
//! When `M` is invertible, `v = P v̄` with `P = M⁻¹ N̄`, hence
//! `v ∈ ker(I − P P̄)`, which fixes `c²` up to the kernel direction. When `M`
//! is singular the roles of `M` and `N` are exchanged.

use serde::{Deserialize, Serialize};

use crate::mobius::{DiscPoint, UnimodularScalar};
use crate::regions::PolePair;
use crate::{Complex, Error, Result};

/// Conjugate-equation mismatch allowed for a candidate.
pub const PROPOSITION_CONSISTENCY_TOL: f64 = 1e-8;

/// An eigenvalue of `P P̄` this far from one means `l` is off.
const KERNEL_TOL: f64 = 1e-7;

const SINGULAR_TOL: f64 = 1e-14;

type Mat2 = [[Complex; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionMatrices {
    pub m: Mat2,
    pub n: Mat2,
    /// `M⁻¹ N̄`, or `N⁻¹ M̄` when `M` is singular.
    pub p: Mat2,
    pub m_invertible: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropositionCandidate {
    pub alpha: DiscPoint,
    pub beta: DiscPoint,
    pub c: DiscPoint,
    /// `‖M v − conj(N v)‖∞`.
    pub consistency: f64,
}

fn det(a: &Mat2) -> Complex {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn inverse(a: &Mat2) -> Mat2 {
    let d = det(a);
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

fn conj(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[0][1].conj()],
        [a[1][0].conj(), a[1][1].conj()],
    ]
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex::from(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn apply(a: &Mat2, v: [Complex; 2]) -> [Complex; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

fn scale(a: &Mat2) -> f64 {
    a.iter().flatten().fold(0.0f64, |m, x| m.max(x.norm()))
}

/// Rows of `M` and `N` for one coordinate pair `(x₁, x₂)`.
fn rows(x1: Complex, x2: Complex, l: Complex) -> ([Complex; 2], [Complex; 2]) {
    let m = [x2 * (1.0 - x1 / l) / (x2 - x1), x1 * (x2 - l) / (x2 - x1)];
    let n = [(1.0 - x2 / l) / (x1 - x2), (x1 - l) / (x1 - x2)];
    (m, n)
}

impl InversionMatrices {
    pub fn new(pair: &PolePair, omega: UnimodularScalar, l: Complex) -> Result<Self> {
        let w = omega.conj().value();
        let (z1, z2) = (w * pair.p.x1(), w * pair.q.x1());
        let (w1, w2) = (pair.p.x2(), pair.q.x2());
        if l.norm() == 0.0 || z1 == z2 || w1 == w2 {
            return Err(Error::Degenerate("coincident coordinates or l = 0"));
        }
        let (m_a, n_a) = rows(z1, z2, l);
        let (m_b, n_b) = rows(w1, w2, l);
        let m = [m_a, m_b];
        let n = [n_a, n_b];
        let m_invertible = det(&m).norm() > SINGULAR_TOL * scale(&m).powi(2).max(1.0);
        let p = if m_invertible {
            mul(&inverse(&m), &conj(&n))
        } else if det(&n).norm() > SINGULAR_TOL * scale(&n).powi(2).max(1.0) {
            mul(&inverse(&n), &conj(&m))
        } else {
            return Err(Error::Degenerate("both M and N are singular"));
        };
        Ok(InversionMatrices {
            m,
            n,
            p,
            m_invertible,
        })
    }

    /// Direction of `ker(I − P P̄)`, if `P P̄` has an eigenvalue near one.
    pub fn kernel(&self) -> Option<[Complex; 2]> {
        let a = mul(&self.p, &conj(&self.p));
        let tr = a[0][0] + a[1][1];
        let disc = (tr * tr - 4.0 * det(&a)).sqrt();
        let mu = [(tr + disc) / 2.0, (tr - disc) / 2.0]
            .into_iter()
            .min_by(|x, y| (x - 1.0).norm().total_cmp(&(y - 1.0).norm()))?;
        if (mu - 1.0).norm() > KERNEL_TOL {
            return None;
        }
        let k1 = [a[0][1], mu - a[0][0]];
        let k2 = [mu - a[1][1], a[1][0]];
        let norm = |k: &[Complex; 2]| k[0].norm() + k[1].norm();
        let k = if norm(&k1) >= norm(&k2) { k1 } else { k2 };
        (norm(&k) > 0.0).then_some(k)
    }
}

/// Candidates `(α, β, c)` for the pair at the given `ω` and `l`.
pub fn proposition_refine(
    pair: &PolePair,
    omega: UnimodularScalar,
    l_guess: DiscPoint,
) -> Result<Vec<PropositionCandidate>> {
    let mats = InversionMatrices::new(pair, omega, l_guess.value())?;
    let k = mats.kernel().ok_or(Error::NoCandidate)?;
    if k[1].norm() == 0.0 {
        return Err(Error::NoCandidate);
    }
    let root = (k[0] / k[1]).sqrt();
    let mut out = Vec::with_capacity(2);
    for c in [root, -root] {
        if c.norm() == 0.0 {
            continue;
        }
        let v = [c, 1.0 / c];
        let from_m = apply(&mats.m, v);
        let from_n = apply(&mats.n, v);
        let consistency = (from_m[0] - from_n[0].conj())
            .norm()
            .max((from_m[1] - from_n[1].conj()).norm());
        if consistency > PROPOSITION_CONSISTENCY_TOL {
            continue;
        }
        let (Ok(alpha), Ok(beta), Ok(c)) = (
            DiscPoint::new(from_m[0]),
            DiscPoint::new(from_m[1]),
            DiscPoint::new(c),
        ) else {
            continue;
        };
        out.push(PropositionCandidate {
            alpha,
            beta,
            c,
            consistency,
        });
    }
    if out.is_empty() {
        Err(Error::NoCandidate)
    } else {
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::big_phi;
    use crate::sample::random_params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn recovers_the_sign_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        while checked < 200 {
            let truth = random_params(&mut rng, 0.9, 0.05);
            let Ok(pair) = big_phi(&truth) else { continue };
            checked += 1;
            let l = DiscPoint::new(truth.c.value() * truth.partner()).unwrap();
            let cands = proposition_refine(&pair, truth.omega, l).unwrap();
            assert_eq!(cands.len(), 2, "{truth:?}");
            for cand in &cands {
                let s = if (cand.c.value() - truth.c.value()).norm() < 1e-6 {
                    1.0
                } else {
                    -1.0
                };
                assert!((cand.c.value() - s * truth.c.value()).norm() < 1e-7);
                assert!((cand.alpha.value() - s * truth.alpha.value()).norm() < 1e-7);
                assert!((cand.beta.value() - s * truth.beta.value()).norm() < 1e-7);
            }
            assert!((cands[0].c.value() + cands[1].c.value()).norm() < 1e-12);
        }
    }

    #[test]
    fn wrong_l_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let truth = random_params(&mut rng, 0.9, 0.05);
        let pair = big_phi(&truth).unwrap();
        let l = truth.c.value() * truth.partner();
        let off = DiscPoint::new(-0.5 * l + Complex::new(0.1, 0.2)).unwrap();
        assert!(proposition_refine(&pair, truth.omega, off).is_err());
    }
}
