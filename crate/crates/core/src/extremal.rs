//! Three-extremal discs of the bidisc and their rational inner left inverses.
//!
//! For `α ≠ β` in the disc and unimodular `ω` the disc
//!
//! ```text
//! φ(ζ) = (ω ζ m_α(ζ), ζ m_β(ζ))
//! ```
//!
//! has the left inverse
//!
//! ```text
//!          t ω̄ x₁ + (1 − t) x₂ + τ ω̄ x₁ x₂
//! F(x) = ───────────────────────────────────
//!          1 + τ ((1 − t) ω̄ x₁ + t x₂)
//! ```
//!
//! with `F(φ(λ)) = λ m_γ(λ)`, `γ = tα + (1 − t)β`, exactly when
//! `τ = conj(α − β)/(α − β)`. Since `m_γ` is an involution, `F` takes the same
//! value `c m_γ(c)` at `φ(c)` and `φ(m_γ(c))`; composing with `m_s` for that
//! common value `s` gives a function vanishing at both points with `|s|` at
//! the origin. The disc reaches the same two points at arguments whose product
//! has modulus `|s|`, so both extremal problems are pinned to `log |s|`.

use serde::{Deserialize, Serialize};

use crate::mobius::{mobius_map, BidiscPoint, DiscPoint, UnimodularScalar};
use crate::regions::PolePair;
use crate::{Complex, Error, Result};

/// `α` and `β` closer than this are treated as equal.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Parameters `(α, β, c, ω, t)` of a three-extremal disc and its two pole
/// arguments `c` and `m_γ(c)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalParams {
    pub alpha: DiscPoint,
    pub beta: DiscPoint,
    pub c: DiscPoint,
    pub omega: UnimodularScalar,
    pub t: f64,
}

impl ExtremalParams {
    pub fn new(
        alpha: DiscPoint,
        beta: DiscPoint,
        c: DiscPoint,
        omega: UnimodularScalar,
        t: f64,
    ) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidArgument(format!("t = {t} is not in (0, 1)")));
        }
        if (alpha.value() - beta.value()).norm() < DEGENERATE_TOL {
            return Err(Error::Degenerate("alpha and beta coincide"));
        }
        if c.value() == Complex::from(0.0) {
            return Err(Error::Degenerate("c is zero"));
        }
        Ok(ExtremalParams {
            alpha,
            beta,
            c,
            omega,
            t,
        })
    }

    pub fn gamma(&self) -> Complex {
        self.t * self.alpha.value() + (1.0 - self.t) * self.beta.value()
    }

    /// Argument of the second pole, `m_γ(c)`.
    pub fn partner(&self) -> Complex {
        mobius_map(self.gamma(), self.c.value())
    }

    /// `(−α, −β, −c, ω, t)`, which has the same image under [`big_phi`].
    pub fn negated(&self) -> Self {
        ExtremalParams {
            alpha: DiscPoint::new_unchecked(-self.alpha.value()),
            beta: DiscPoint::new_unchecked(-self.beta.value()),
            c: DiscPoint::new_unchecked(-self.c.value()),
            ..*self
        }
    }

    /// Representative of the `±` class with `Re α > 0`, or `Re α = 0` and
    /// `Im α > 0`.
    pub fn canonical(&self) -> Self {
        let a = self.alpha.value();
        if a.re < 0.0 || (a.re == 0.0 && a.im < 0.0) {
            self.negated()
        } else {
            *self
        }
    }

    /// Same disc with the roles of the two poles exchanged (`c ↦ m_γ(c)`).
    pub fn with_poles_swapped(&self) -> Self {
        ExtremalParams {
            c: DiscPoint::new_unchecked(self.partner()),
            ..*self
        }
    }

    pub fn disc(&self, zeta: Complex) -> [Complex; 2] {
        phi(self.alpha, self.beta, self.omega, zeta)
    }

    /// The critical left inverse, post-composed so that it vanishes at both
    /// poles.
    pub fn left_inverse(&self) -> Result<LeftInverse> {
        let tau = critical_tau(self.alpha, self.beta)?;
        let inner = LeftInverse {
            t: self.t,
            omega: self.omega,
            tau,
            s: DiscPoint::ORIGIN,
        };
        let s = inner.inner(self.disc(self.c.value()));
        Ok(LeftInverse {
            s: DiscPoint::new(s)?,
            ..inner
        })
    }
}

/// `γ = tα + (1 − t)β` for `t ∈ [0, 1]`.
pub fn gamma(alpha: DiscPoint, beta: DiscPoint, t: f64) -> Result<DiscPoint> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("t = {t} is not in [0, 1]")));
    }
    Ok(DiscPoint::new_unchecked(
        t * alpha.value() + (1.0 - t) * beta.value(),
    ))
}

/// `φ_{α,β,ω}(ζ) = (ω ζ m_α(ζ), ζ m_β(ζ))`.
#[inline]
pub fn phi(
    alpha: impl Into<Complex>,
    beta: impl Into<Complex>,
    omega: impl Into<Complex>,
    zeta: Complex,
) -> [Complex; 2] {
    [
        omega.into() * zeta * mobius_map(alpha, zeta),
        zeta * mobius_map(beta, zeta),
    ]
}

/// `τ = conj(α − β)/(α − β)`.
pub fn critical_tau(alpha: DiscPoint, beta: DiscPoint) -> Result<UnimodularScalar> {
    let d = alpha.value() - beta.value();
    if d.norm() < DEGENERATE_TOL {
        return Err(Error::Degenerate("alpha and beta coincide"));
    }
    UnimodularScalar::normalize(d.conj() / d)
}

/// `G = m_s ∘ F_{t,ω,τ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeftInverse {
    pub t: f64,
    pub omega: UnimodularScalar,
    pub tau: UnimodularScalar,
    pub s: DiscPoint,
}

impl LeftInverse {
    /// The rational inner function `F`, before post-composition.
    #[inline]
    pub fn inner(&self, x: [Complex; 2]) -> Complex {
        rational_inner(self.t, self.omega.value(), self.tau.value(), x)
    }

    #[inline]
    pub fn eval(&self, x: [Complex; 2]) -> Complex {
        mobius_map(self.s, self.inner(x))
    }
}

/// `F_{t,ω,τ}(x)` for arbitrary `t`, `ω`, `τ` (no validation).
#[inline]
pub fn rational_inner(t: f64, omega: Complex, tau: Complex, x: [Complex; 2]) -> Complex {
    let y1 = omega.conj() * x[0];
    let x2 = x[1];
    let num = t * y1 + (1.0 - t) * x2 + tau * y1 * x2;
    let den = 1.0 + tau * ((1.0 - t) * y1 + t * x2);
    num / den
}

pub fn left_inverse_eval(l: &LeftInverse, x: &BidiscPoint) -> Complex {
    l.eval(x.coords())
}

/// `Φ(α, β, c, ω, t) = (φ(c), φ(m_γ(c)))`.
pub fn big_phi(params: &ExtremalParams) -> Result<PolePair> {
    let c = params.c.value();
    let partner = params.partner();
    if (partner - c).norm() < crate::regions::COINCIDENCE_TOL {
        return Err(Error::DiagonalOutput);
    }
    let [p1, p2] = params.disc(c);
    let [q1, q2] = params.disc(partner);
    Ok(PolePair::new(
        BidiscPoint::new(p1, p2)?,
        BidiscPoint::new(q1, q2)?,
    ))
}

/// Raw form of [`big_phi`] used inside iterative solvers.
#[inline]
pub(crate) fn big_phi_raw(
    alpha: Complex,
    beta: Complex,
    c: Complex,
    omega: Complex,
    t: f64,
) -> [Complex; 4] {
    let g = t * alpha + (1.0 - t) * beta;
    let partner = mobius_map(g, c);
    let [p1, p2] = phi(alpha, beta, omega, c);
    let [q1, q2] = phi(alpha, beta, omega, partner);
    [p1, p2, q1, q2]
}

/// `log |c · m_γ(c)|`, the common value of both extremal problems at the
/// pair `big_phi(params)`.
pub fn omega2_value(params: &ExtremalParams) -> Result<f64> {
    let c = params.c.value();
    let partner = params.partner();
    if (partner - c).norm() < crate::regions::COINCIDENCE_TOL {
        return Err(Error::DiagonalOutput);
    }
    Ok((c * partner).norm().ln())
}

/// `f′(0)` where `F(φ(λ)) = λ f(λ)`:
/// `−[t(1 − |α|²) + (1 − t)(1 − |β|²)] − τ t (1 − t)(α − β)²`.
pub fn f_prime_at_zero(alpha: Complex, beta: Complex, t: f64, tau: Complex) -> Complex {
    let d = alpha - beta;
    -Complex::from(t * (1.0 - alpha.norm_sqr()) + (1.0 - t) * (1.0 - beta.norm_sqr()))
        - tau * t * (1.0 - t) * d * d
}

/// Schwarz–Pick quotient `|f′(0)|/(1 − |f(0)|²)` of `f = F(φ(·))/·`. It is at
/// most one, with equality exactly at the critical `τ`. The value does not
/// depend on `ω`.
pub fn automorphism_quotient(alpha: Complex, beta: Complex, t: f64, tau: Complex) -> f64 {
    let g = t * alpha + (1.0 - t) * beta;
    f_prime_at_zero(alpha, beta, t, tau).norm() / (1.0 - g.norm_sqr())
}

/// [`automorphism_quotient`] with `f′(0)` from a central difference of
/// `F ∘ φ` with step `h`.
pub fn automorphism_quotient_fd(
    alpha: Complex,
    beta: Complex,
    omega: Complex,
    t: f64,
    tau: Complex,
    h: f64,
) -> f64 {
    let f = |l: Complex| rational_inner(t, omega, tau, phi(alpha, beta, omega, l)) / l;
    let hc = Complex::from(h);
    let derivative = (f(hc) - f(-hc)) / (2.0 * h);
    let g = t * alpha + (1.0 - t) * beta;
    derivative.norm() / (1.0 - g.norm_sqr())
}
