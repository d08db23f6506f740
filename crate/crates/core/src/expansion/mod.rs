//! Expansion functions, expander extraction and guaranteed ball growth.
//!
//! Natural logarithms throughout. Fractional size thresholds such as
//! `m^(1-eta)` are rounded down.

mod extract;
mod growth;
mod violating;

pub use extract::*;
pub use growth::*;
pub use violating::*;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// All scalar knobs of the constructions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionParams {
    pub delta: f64,
    pub eta: f64,
    /// Order of the original input graph (the `n` inside `f`).
    pub ambient_n: usize,
    pub t: usize,
    pub sigma: f64,
    /// Effective expansion rate; `None` means `f(m)`.
    pub lambda: Option<f64>,
}

impl ExpansionParams {
    pub fn new(delta: f64, eta: f64, ambient_n: usize, t: usize) -> Result<Self> {
        let p = ExpansionParams {
            delta,
            eta,
            ambient_n,
            t,
            sigma: 1.0 / (100.0 * t.max(1) as f64),
            lambda: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// `eta = 1/8t`, the rate used when building minors.
    pub fn for_minor(t: usize, delta: f64, ambient_n: usize) -> Result<Self> {
        Self::new(delta, 1.0 / (8.0 * t.max(1) as f64), ambient_n, t)
    }

    /// `eta = 1/300t^3`, the rate used when building subdivisions.
    pub fn for_subdivision(t: usize, delta: f64, ambient_n: usize) -> Result<Self> {
        let tf = t.max(1) as f64;
        Self::new(delta, 1.0 / (300.0 * tf * tf * tf), ambient_n, t)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| x > 0.0 && x < 1.0;
        if !unit(self.delta) {
            return Err(Error::InvalidParameter(format!(
                "delta = {} not in (0,1)",
                self.delta
            )));
        }
        if !unit(self.eta) {
            return Err(Error::InvalidParameter(format!(
                "eta = {} not in (0,1)",
                self.eta
            )));
        }
        if self.t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        if self.ambient_n < 3 {
            return Err(Error::TooSmall(self.ambient_n));
        }
        if let Some(l) = self.lambda {
            if l <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "lambda = {l} must be positive"
                )));
            }
        }
        Ok(())
    }

    /// The expansion function evaluated at a real argument `m >= 1`.
    pub fn f(&self, m: f64) -> f64 {
        expansion_value(self.delta, self.eta, self.ambient_n as f64, m)
    }
}

/// `max{ delta*eta^2 / (32 (log log 4m)^2), delta*eta*log m / (8 log n) }`.
pub fn expansion_value(delta: f64, eta: f64, n: f64, m: f64) -> f64 {
    let lll = (4.0 * m).ln().ln();
    let small = delta * eta * eta / (32.0 * lll * lll);
    let large = delta * eta * m.ln() / (8.0 * n.ln());
    small.max(large)
}

/// `f(m)` for an integer order `3 <= m <= ambient_n`.
pub fn expansion_function_f(m: usize, p: &ExpansionParams) -> Result<f64> {
    if m < 3 {
        return Err(Error::TooSmall(m));
    }
    if m > p.ambient_n {
        return Err(Error::InvalidParameter(format!(
            "m = {m} exceeds ambient n = {}",
            p.ambient_n
        )));
    }
    Ok(p.f(m as f64))
}

/// The required neighbourhood rate for a set of `size` vertices in a
/// small-set expander: `delta / (20 (log log 4|S|)^2)`.
pub fn small_set_rate(delta: f64, size: usize) -> f64 {
    let lll = (4.0 * size as f64).ln().ln();
    delta / (20.0 * lll * lll)
}

/// `floor(m^e)`, snapping values within rounding noise of an integer.
pub fn floor_pow(m: usize, e: f64) -> usize {
    let x = (m as f64).powf(e);
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r as usize
    } else {
        x.floor() as usize
    }
}

/// Scale quantities derived from the current order `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedScales {
    pub m: usize,
    pub f_m: f64,
    /// `ceil(4 log m / f(m))`: path-length and radius budget.
    pub k: usize,
    /// `floor((log log m)^2)`, at least 1.
    pub l: usize,
}

impl DerivedScales {
    pub fn new(m: usize, p: &ExpansionParams) -> Result<Self> {
        let f_m = expansion_function_f(m, p)?;
        let k = (4.0 * (m as f64).ln() / f_m).ceil();
        let ll = (m as f64).ln().ln();
        let l = if ll > 0.0 {
            (ll * ll).floor() as usize
        } else {
            0
        };
        Ok(DerivedScales {
            m,
            f_m,
            k: if k.is_finite() && k < usize::MAX as f64 {
                k as usize
            } else {
                usize::MAX / 64
            },
            l: l.max(1),
        })
    }

    /// The expansion rate in force: the explicit `lambda` if set, else `f(m)`.
    pub fn rate(&self, p: &ExpansionParams) -> f64 {
        p.lambda.unwrap_or(self.f_m)
    }

    /// `floor(m^(1-eta))`, the size cap for expanding sets.
    pub fn large_set_limit(&self, p: &ExpansionParams) -> usize {
        floor_pow(self.m, 1.0 - p.eta)
    }
}

/// Outcome of [`check_expansion_function`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionFunctionReport {
    pub passed: bool,
    pub subadditive: bool,
    /// First sampled `(a, c, b)` with `a <= c <= b` and `f(c) > f(a) + f(b)`.
    pub subadditivity_witness: Option<(f64, f64, f64)>,
    pub triples_checked: usize,
    /// `floor(-log log n / log(1 - eta/2))`.
    pub y: i64,
    pub sum: f64,
    /// `delta / 2`.
    pub sum_bound: f64,
    /// `sum_bound - sum`; negative when the sum condition fails.
    pub margin: f64,
}

/// Checks `f` from [`ExpansionParams`] against the two defining conditions of
/// an expansion function on `[1, n]`.
pub fn check_expansion_function(p: &ExpansionParams, n: usize) -> Result<ExpansionFunctionReport> {
    if n < 16 {
        return Err(Error::InvalidParameter(format!(
            "n = {n} must be at least 16"
        )));
    }
    let (delta, eta) = (p.delta, p.eta);
    Ok(check_expansion_function_with(
        |m| expansion_value(delta, eta, n as f64, m),
        delta,
        eta,
        n,
    ))
}

/// Same check for an arbitrary candidate function.
///
/// The nesting condition is sampled on triples `a <= c <= b`: a value `f(c)`
/// at a size between two interval endpoints must be covered by `f(a) + f(b)`,
/// which is what the density accounting of the extraction process consumes.
pub fn check_expansion_function_with<F>(
    f: F,
    delta: f64,
    eta: f64,
    n: usize,
) -> ExpansionFunctionReport
where
    F: Fn(f64) -> f64,
{
    let nf = n as f64;
    const GRID: usize = 48;
    let mut points: Vec<f64> = (0..=GRID)
        .map(|i| nf.powf(i as f64 / GRID as f64))
        .collect();
    points.extend([1.0, 2.0, 3.0, 4.0, 16.0, nf.sqrt(), nf - 1.0, nf]);
    // Around the crossover of the decreasing and increasing branches.
    if let Some(cross) = crossover(&f, nf) {
        for s in [0.5, 0.9, 0.99, 1.0, 1.01, 1.1, 2.0] {
            let x = cross * s;
            if (1.0..=nf).contains(&x) {
                points.push(x);
            }
        }
    }
    points.retain(|x| (1.0..=nf).contains(x));
    points.sort_by(f64::total_cmp);
    points.dedup();

    let values: Vec<f64> = points.iter().map(|&x| f(x)).collect();
    let mut witness = None;
    let mut checked = 0;
    'outer: for ia in 0..points.len() {
        for ic in ia..points.len() {
            for ib in ic..points.len() {
                checked += 1;
                if values[ic] > values[ia] + values[ib] + 1e-15 {
                    witness = Some((points[ia], points[ic], points[ib]));
                    break 'outer;
                }
            }
        }
    }

    let shrink = 1.0 - eta / 2.0;
    let y = (-(nf.ln().ln()) / shrink.ln()).floor() as i64;
    let mut sum = 0.0;
    let mut x = 0;
    while x <= y - 2 {
        sum += f((nf.ln() * shrink.powi(x as i32)).exp());
        x += 1;
    }
    let sum_bound = delta / 2.0;
    ExpansionFunctionReport {
        passed: witness.is_none() && sum <= sum_bound,
        subadditive: witness.is_none(),
        subadditivity_witness: witness,
        triples_checked: checked,
        y,
        sum,
        sum_bound,
        margin: sum_bound - sum,
    }
}

/// Location of the minimum of `f` on a log grid, used to seed adversarial samples.
fn crossover<F: Fn(f64) -> f64>(f: &F, n: f64) -> Option<f64> {
    (0..=400)
        .map(|i| n.powf(i as f64 / 400.0))
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
}
