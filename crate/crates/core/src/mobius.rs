//! Disc-algebra primitives: Möbius maps, the pseudohyperbolic distance,
//! finite Blaschke products and the coordinatewise automorphism of the bidisc
//! that moves a base point to the origin.
//!
//! The Möbius map is the idempotent normalization
//!
//! ```text
//! m_a(λ) = (a − λ) / (1 − conj(a) λ)
//! ```
//!
//! so `m_a(0) = a`, `m_a(a) = 0` and `m_a ∘ m_a = id`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, Result};

/// Points with modulus at or above `1 - DISC_GUARD` are rejected.
pub const DISC_GUARD: f64 = 1e-15;

/// Allowed deviation of `|u|` from one for a [`UnimodularScalar`].
pub const UNIMODULAR_TOL: f64 = 1e-14;

/// A point of the open unit disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex", into = "Complex")]
pub struct DiscPoint(Complex);

impl DiscPoint {
    pub const ORIGIN: DiscPoint = DiscPoint(Complex::new(0.0, 0.0));

    pub fn new(value: Complex) -> Result<Self> {
        if value.re.is_finite() && value.im.is_finite() && value.norm() < 1.0 - DISC_GUARD {
            Ok(DiscPoint(value))
        } else {
            Err(Error::InvalidPoint(format!("{value}")))
        }
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex::new(re, im))
    }

    /// Caller guarantees `|value| < 1`.
    pub(crate) fn new_unchecked(value: Complex) -> Self {
        debug_assert!(value.norm() < 1.0, "{value} outside the disc");
        DiscPoint(value)
    }

    #[inline]
    pub fn value(self) -> Complex {
        self.0
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }
}

impl From<DiscPoint> for Complex {
    fn from(p: DiscPoint) -> Complex {
        p.0
    }
}

impl TryFrom<Complex> for DiscPoint {
    type Error = Error;
    fn try_from(value: Complex) -> Result<Self> {
        DiscPoint::new(value)
    }
}

impl fmt::Display for DiscPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A complex number of modulus one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex", into = "Complex")]
pub struct UnimodularScalar(Complex);

impl UnimodularScalar {
    pub const ONE: UnimodularScalar = UnimodularScalar(Complex::new(1.0, 0.0));

    pub fn new(value: Complex) -> Result<Self> {
        if (value.norm() - 1.0).abs() <= UNIMODULAR_TOL {
            Ok(UnimodularScalar(value))
        } else {
            Err(Error::NotUnimodular(format!("{value}")))
        }
    }

    pub fn from_angle(theta: f64) -> Self {
        UnimodularScalar(Complex::from_polar(1.0, theta))
    }

    /// Projects a nonzero number onto the circle.
    pub fn normalize(value: Complex) -> Result<Self> {
        let r = value.norm();
        if r > 0.0 && r.is_finite() {
            Ok(UnimodularScalar(value / r))
        } else {
            Err(Error::Degenerate("cannot normalize zero onto the circle"))
        }
    }

    #[inline]
    pub fn value(self) -> Complex {
        self.0
    }

    pub fn angle(self) -> f64 {
        self.0.arg()
    }

    pub fn conj(self) -> Self {
        UnimodularScalar(self.0.conj())
    }
}

impl From<UnimodularScalar> for Complex {
    fn from(u: UnimodularScalar) -> Complex {
        u.0
    }
}

impl TryFrom<Complex> for UnimodularScalar {
    type Error = Error;
    fn try_from(value: Complex) -> Result<Self> {
        UnimodularScalar::new(value)
    }
}

/// A point of the bidisc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Complex; 2]", into = "[Complex; 2]")]
pub struct BidiscPoint([Complex; 2]);

impl BidiscPoint {
    pub const ORIGIN: BidiscPoint = BidiscPoint([Complex::new(0.0, 0.0); 2]);

    pub fn new(x1: Complex, x2: Complex) -> Result<Self> {
        DiscPoint::new(x1)?;
        DiscPoint::new(x2)?;
        Ok(BidiscPoint([x1, x2]))
    }

    /// From `[re1, im1, re2, im2]`.
    pub fn from_reals(r: [f64; 4]) -> Result<Self> {
        Self::new(Complex::new(r[0], r[1]), Complex::new(r[2], r[3]))
    }

    pub(crate) fn new_unchecked(x1: Complex, x2: Complex) -> Self {
        debug_assert!(x1.norm() < 1.0 && x2.norm() < 1.0);
        BidiscPoint([x1, x2])
    }

    #[inline]
    pub fn x1(&self) -> Complex {
        self.0[0]
    }

    #[inline]
    pub fn x2(&self) -> Complex {
        self.0[1]
    }

    #[inline]
    pub fn coords(&self) -> [Complex; 2] {
        self.0
    }

    pub fn to_reals(&self) -> [f64; 4] {
        [self.0[0].re, self.0[0].im, self.0[1].re, self.0[1].im]
    }

    /// Exchanges the two coordinates.
    pub fn swap(&self) -> Self {
        BidiscPoint([self.0[1], self.0[0]])
    }

    /// Largest coordinatewise distance.
    pub fn dist_inf(&self, other: &BidiscPoint) -> f64 {
        (self.0[0] - other.0[0])
            .norm()
            .max((self.0[1] - other.0[1]).norm())
    }

    pub fn is_origin(&self, tol: f64) -> bool {
        self.0[0].norm() < tol && self.0[1].norm() < tol
    }
}

impl From<BidiscPoint> for [Complex; 2] {
    fn from(p: BidiscPoint) -> Self {
        p.0
    }
}

impl TryFrom<[Complex; 2]> for BidiscPoint {
    type Error = Error;
    fn try_from(x: [Complex; 2]) -> Result<Self> {
        BidiscPoint::new(x[0], x[1])
    }
}

impl fmt::Display for BidiscPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

/// `m_a(λ) = (a − λ)/(1 − conj(a) λ)` for `|a| < 1`, `|λ| ≤ 1`.
#[inline]
pub fn mobius_map(a: impl Into<Complex>, lambda: Complex) -> Complex {
    let a = a.into();
    (a - lambda) / (1.0 - a.conj() * lambda)
}

/// Derivative of `m_a` at `λ`: `(|a|² − 1)/(1 − conj(a) λ)²`.
#[inline]
pub fn mobius_derivative(a: impl Into<Complex>, lambda: Complex) -> Complex {
    let a = a.into();
    let d = 1.0 - a.conj() * lambda;
    Complex::from(a.norm_sqr() - 1.0) / (d * d)
}

/// Pseudohyperbolic distance `|(x − y)/(1 − conj(x) y)|`.
#[inline]
pub fn mobius_dist(x: impl Into<Complex>, y: impl Into<Complex>) -> f64 {
    let (x, y) = (x.into(), y.into());
    (x - y).norm() / (1.0 - x.conj() * y).norm()
}

/// The unique `a` with `m_a(λ) = u`, for `|λ|, |u| < 1`.
///
/// Solves `a + uλ·conj(a) = u + λ` together with its conjugate.
pub fn mobius_center(lambda: Complex, u: Complex) -> Complex {
    let l2 = lambda.norm_sqr();
    let u2 = u.norm_sqr();
    (u * (1.0 - l2) + lambda * (1.0 - u2)) / (1.0 - u2 * l2)
}

/// A finite Blaschke product `rotation · ∏ m_{zero}(λ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    pub zeros: Vec<DiscPoint>,
    pub rotation: UnimodularScalar,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<DiscPoint>, rotation: UnimodularScalar) -> Self {
        BlaschkeProduct { zeros, rotation }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, lambda: Complex) -> Complex {
        blaschke_eval(self, lambda)
    }
}

pub fn blaschke_eval(b: &BlaschkeProduct, lambda: Complex) -> Complex {
    b.zeros
        .iter()
        .fold(b.rotation.value(), |acc, &a| acc * mobius_map(a, lambda))
}

/// Diffeomorphism `w ↦ w / √(1 + |w|²)` of the plane onto the open disc.
#[inline]
pub fn disc_from_plane(w: Complex) -> Complex {
    w / (1.0 + w.norm_sqr()).sqrt()
}

/// Inverse of [`disc_from_plane`], for `|z| < 1`.
#[inline]
pub fn plane_from_disc(z: Complex) -> Complex {
    z / (1.0 - z.norm_sqr()).sqrt()
}

/// `(m_{z₁}(x₁), m_{z₂}(x₂))`. Sends `z` to the origin and is its own inverse.
pub fn automorphism_normalize(z: &BidiscPoint, x: &BidiscPoint) -> BidiscPoint {
    BidiscPoint::new_unchecked(mobius_map(z.x1(), x.x1()), mobius_map(z.x2(), x.x2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn random_disc(rng: &mut impl Rng, r: f64) -> Complex {
        loop {
            let z = c(rng.gen_range(-r..r), rng.gen_range(-r..r));
            if z.norm() < r {
                return z;
            }
        }
    }

    #[test]
    fn mobius_examples() {
        let a = c(0.3, -0.2);
        assert_eq!(mobius_map(a, Complex::from(0.0)), a);
        assert!(mobius_map(a, a).norm() < 1e-16);
        let v = mobius_map(c(0.5, 0.0), c(-0.5, 0.0));
        assert!((v - c(0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dist_examples() {
        let a = c(0.4, 0.1);
        assert_eq!(mobius_dist(a, a), 0.0);
        assert!((mobius_dist(Complex::from(0.0), a) - a.norm()).abs() < 1e-16);
        assert!((mobius_dist(c(0.2, 0.0), c(-0.1, 0.0)) - 0.3 / 1.02).abs() < 1e-15);
    }

    #[test]
    fn disc_point_guard() {
        assert!(DiscPoint::from_parts(0.5, 0.5).is_ok());
        assert!(DiscPoint::from_parts(1.0, 0.0).is_err());
        assert!(DiscPoint::from_parts(1.0 - 1e-16, 0.0).is_err());
        assert!(DiscPoint::from_parts(f64::NAN, 0.0).is_err());
        assert!(UnimodularScalar::new(c(0.6, 0.8)).is_ok());
        assert!(UnimodularScalar::new(c(0.6, 0.81)).is_err());
    }

    #[test]
    fn blaschke_examples() {
        let b = BlaschkeProduct::new(vec![DiscPoint::ORIGIN], UnimodularScalar::ONE);
        let l = c(0.3, 0.4);
        assert!((b.eval(l) + l).norm() < 1e-16);

        let za = DiscPoint::from_parts(0.2, 0.5).unwrap();
        let zb = DiscPoint::from_parts(-0.7, 0.1).unwrap();
        let b = BlaschkeProduct::new(vec![za, zb], UnimodularScalar::from_angle(0.7));
        assert!(b.eval(za.value()).norm() < 1e-16);
        assert_eq!(b.degree(), 2);

        let w = UnimodularScalar::from_angle(2.0);
        let b = BlaschkeProduct::new(vec![], w);
        assert_eq!(b.eval(l), w.value());
    }

    #[test]
    fn mobius_center_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let l = random_disc(&mut rng, 0.99);
            let u = random_disc(&mut rng, 0.99);
            let a = mobius_center(l, u);
            assert!(a.norm() < 1.0);
            assert!((mobius_map(a, l) - u).norm() < 1e-11, "{l} {u}");
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let a = c(0.3, 0.6);
        let l = c(-0.2, 0.1);
        let h = 1e-6;
        let fd = (mobius_map(a, l + h) - mobius_map(a, l - h)) / (2.0 * h);
        assert!((fd - mobius_derivative(a, l)).norm() < 1e-8);
    }

    #[test]
    fn involution_and_isometry() {
        // Near the circle a single rounding of m_a(x) is amplified by
        // 1/(1 - |a|), so points stay inside radius 0.95.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let a = random_disc(&mut rng, 0.95);
            let x = random_disc(&mut rng, 0.95);
            let y = random_disc(&mut rng, 0.95);
            assert!((mobius_map(a, mobius_map(a, x)) - x).norm() < 1e-13);
            let d0 = mobius_dist(x, y);
            let d1 = mobius_dist(mobius_map(a, x), mobius_map(a, y));
            assert!((d0 - d1).abs() < 1e-13, "{a} {x} {y} {}", d0 - d1);
        }
    }

    #[test]
    fn blaschke_unimodular_on_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for deg in 0..=3 {
            let zeros = (0..deg)
                .map(|_| DiscPoint::new(random_disc(&mut rng, 0.99)).unwrap())
                .collect();
            let b = BlaschkeProduct::new(zeros, UnimodularScalar::from_angle(rng.gen()));
            for _ in 0..1000 {
                let e = Complex::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                assert!((b.eval(e).norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn normalization_examples() {
        let z = BidiscPoint::new(c(0.3, 0.1), c(-0.5, 0.2)).unwrap();
        assert!(automorphism_normalize(&z, &z).is_origin(1e-16));
        let x = BidiscPoint::new(c(0.1, -0.4), c(0.6, 0.0)).unwrap();
        let y = automorphism_normalize(&BidiscPoint::ORIGIN, &x);
        assert_eq!(y.x1(), -x.x1());
        assert_eq!(y.x2(), -x.x2());
        let back = automorphism_normalize(&z, &automorphism_normalize(&z, &x));
        assert!(back.dist_inf(&x) < 1e-15);
    }
}
