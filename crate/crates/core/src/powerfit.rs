//! Sign-frequency distributions and discrete truncated power-law fits.
//!
//! The fitted family has mass `p(f) = f^-(alpha + 1) / Z` on the integers
//! `f_min..=f_max`, so its complementary CDF decays roughly like
//! `f^-alpha`. `alpha` is the reported exponent; `1 / alpha` is the
//! corresponding Zipf (rank-frequency) exponent.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::complementary_cdf;

pub const MIN_SAMPLES: usize = 10;
pub const ALPHA_LOWER: f64 = 0.01;
pub const ALPHA_UPPER: f64 = 10.0;
pub const ALPHA_TOLERANCE: f64 = 1e-4;

/// `(f, fraction of signs with frequency >= f)` at each distinct frequency.
pub fn frequency_cdf(frequencies: &[u64]) -> Result<Vec<(u64, f64)>> {
    if frequencies.is_empty() {
        return Err(Error::InvalidArgument("empty frequency table".into()));
    }
    Ok(complementary_cdf(frequencies))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    /// Complementary-CDF exponent.
    pub alpha: f64,
    /// Mass exponent, `alpha + 1`.
    pub gamma: f64,
    /// `1 / alpha`.
    pub zipf: f64,
    pub f_min: u64,
    pub f_max: u64,
    /// Samples inside `[f_min, f_max]`.
    pub samples: usize,
    pub log_likelihood: f64,
}

impl PowerLawFit {
    /// Fitted probability mass at `f` (zero outside the range).
    pub fn pmf(&self, f: u64) -> f64 {
        if f < self.f_min || f > self.f_max {
            return 0.0;
        }
        (f as f64).powf(-self.gamma) / partition(self.gamma, self.f_min, self.f_max)
    }
}

fn partition(gamma: f64, f_min: u64, f_max: u64) -> f64 {
    (f_min..=f_max).map(|f| (f as f64).powf(-gamma)).sum()
}

fn neg_log_likelihood(alpha: f64, n: f64, sum_ln: f64, f_min: u64, f_max: u64) -> f64 {
    let gamma = alpha + 1.0;
    gamma * sum_ln + n * partition(gamma, f_min, f_max).ln()
}

/// Golden-section minimisation of a unimodal function on `[lo, hi]`.
fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    (lo + hi) / 2.0
}

/// Maximum-likelihood exponent of the frequencies lying in `[f_min, f_max]`.
pub fn fit_power_law(frequencies: &[u64], f_min: u64, f_max: u64) -> Result<PowerLawFit> {
    if f_min < 1 || f_max <= f_min {
        return Err(Error::InvalidArgument(format!(
            "fit range [{f_min}, {f_max}] needs 1 <= f_min < f_max"
        )));
    }
    let inside: Vec<u64> = frequencies
        .iter()
        .copied()
        .filter(|&f| f >= f_min && f <= f_max)
        .collect();
    if inside.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            found: inside.len(),
            needed: MIN_SAMPLES,
        });
    }
    if inside.iter().all(|&f| f == inside[0]) {
        return Err(Error::NoFiniteOptimum(format!(
            "all {} samples equal {}",
            inside.len(),
            inside[0]
        )));
    }
    let n = inside.len() as f64;
    let sum_ln: f64 = inside.iter().map(|&f| (f as f64).ln()).sum();
    let nll = |a: f64| neg_log_likelihood(a, n, sum_ln, f_min, f_max);
    let alpha = golden_section(nll, ALPHA_LOWER, ALPHA_UPPER, ALPHA_TOLERANCE);
    if alpha - ALPHA_LOWER < ALPHA_TOLERANCE || ALPHA_UPPER - alpha < ALPHA_TOLERANCE {
        return Err(Error::NoFiniteOptimum(format!(
            "optimum at search bound alpha = {alpha:.4}"
        )));
    }
    Ok(PowerLawFit {
        alpha,
        gamma: alpha + 1.0,
        zipf: 1.0 / alpha,
        f_min,
        f_max,
        samples: inside.len(),
        log_likelihood: -nll(alpha),
    })
}

/// Sampler for the discrete truncated power law with mass exponent `gamma`.
#[derive(Clone, Debug)]
pub struct TruncatedPowerLaw {
    f_min: u64,
    cumulative: Vec<f64>,
}

impl TruncatedPowerLaw {
    pub fn new(gamma: f64, f_min: u64, f_max: u64) -> Result<Self> {
        if f_min < 1 || f_max < f_min || !gamma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "invalid power law: gamma {gamma}, range [{f_min}, {f_max}]"
            )));
        }
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = (f_min..=f_max)
            .map(|f| {
                acc += (f as f64).powf(-gamma);
                acc
            })
            .collect();
        for c in &mut cumulative {
            *c /= acc;
        }
        Ok(TruncatedPowerLaw { f_min, cumulative })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.f_min + k.min(self.cumulative.len() - 1) as u64
    }
}
