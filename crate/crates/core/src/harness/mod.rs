//! Graph generators, experiment sweeps and the known extremal bounds.

mod generate;
mod sweep;

pub use generate::*;
pub use sweep::*;

use serde::{Deserialize, Serialize};

/// Known asymptotic forms for the average degree forcing `K_t` minors and
/// subdivisions: `c(t) = (2a + o(1)) t sqrt(log t)` for an explicit `a`,
/// and `(9/64 + o(1)) t^2 <= s(t) <= (10/23 + o(1)) t^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownBounds {
    pub t: usize,
    /// `2a` in `c(t) ~ 2a t sqrt(log t)`.
    pub c_t_coefficient: f64,
    pub s_t_lower: f64,
    pub s_t_upper: f64,
}

/// The constant `a = 0.319...` in the asymptotic minor density.
pub const MINOR_DENSITY_ALPHA: f64 = 0.319;

impl KnownBounds {
    pub fn new(t: usize) -> Self {
        KnownBounds {
            t,
            c_t_coefficient: 2.0 * MINOR_DENSITY_ALPHA,
            s_t_lower: 9.0 / 64.0,
            s_t_upper: 10.0 / 23.0,
        }
    }

    /// `2a t sqrt(log t)`.
    pub fn c_t(&self) -> f64 {
        let t = self.t as f64;
        self.c_t_coefficient * t * t.ln().max(0.0).sqrt()
    }

    pub fn s_t_range(&self) -> (f64, f64) {
        let t2 = (self.t * self.t) as f64;
        (self.s_t_lower * t2, self.s_t_upper * t2)
    }
}
