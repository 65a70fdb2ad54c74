//! Brute-force two-sided bounds, computed without the solver.
//!
//! [`cara_lower`] maximizes `log |G(0,0)|` over explicit functions vanishing
//! at both poles; [`lempert_upper`] minimizes `log |λ_p λ_q|` over explicit
//! discs through the origin and both poles. Every admitted witness is checked
//! by direct evaluation, so `c_lower ≤ c ≤ l ≤ l_upper` up to the admission
//! residual. When the width closes, the common value is confirmed
//! independently of the certified solver.

mod cara;
mod curve;
mod lempert;

pub use cara::{cara_lower, CaraWitness};
pub use lempert::{lempert_upper, LempertWitness};

use serde::{Deserialize, Serialize};

use crate::regions::PolePair;
use crate::Result;

/// Witness constraints must hold to this before a value is admitted.
pub const ADMISSION_TOL: f64 = 1e-8;

/// Slack allowed when checking that a value lies inside the sandwich.
pub const CONTAINMENT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub seed: u64,
    /// `t` values of the rational family, evenly spaced in `(0, 1)`.
    pub t_grid: usize,
    /// Coarse grid per angle of the rational family.
    pub angle_grid: usize,
    pub newton_steps: usize,
    /// Golden-section steps for the one-dimensional refinements.
    pub golden_steps: usize,
    /// Multistarts of the disc family.
    pub disc_starts: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            seed: 0x0cac_1e5e,
            t_grid: 33,
            angle_grid: 64,
            newton_steps: 20,
            golden_steps: 48,
            disc_starts: 128,
        }
    }
}

impl Budget {
    /// Same search with the multistart budget scaled by `k`.
    pub fn scaled(self, k: usize) -> Budget {
        Budget {
            disc_starts: self.disc_starts * k,
            ..self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub c_lower: f64,
    pub l_upper: f64,
    pub width: f64,
    pub cara_witness: CaraWitness,
    pub lempert_witness: LempertWitness,
}

impl Sandwich {
    /// Whether `value` lies in `[c_lower − 1e−8, l_upper + 1e−8]`.
    pub fn contains(&self, value: f64) -> bool {
        value >= self.c_lower - CONTAINMENT_TOL && value <= self.l_upper + CONTAINMENT_TOL
    }
}

pub fn sandwich(pair: &PolePair, budget: &Budget) -> Result<Sandwich> {
    let (c_lower, cara_witness) = cara_lower(pair, budget);
    let (l_upper, lempert_witness) = lempert_upper(pair, budget)?;
    Ok(Sandwich {
        c_lower,
        l_upper,
        width: l_upper - c_lower,
        cara_witness,
        lempert_witness,
    })
}

/// Golden-section maximization of `f` on `[lo, hi]`. Returns the best point
/// seen and its value.
pub(crate) fn golden_max(
    mut f: impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    steps: usize,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..steps {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
