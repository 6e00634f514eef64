//! Worker completion-time models and expected order-statistic delays.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{digamma, ln_gamma};

use crate::error::{GcError, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Largest n for which H_n is summed as an exact fraction.
pub const HARMONIC_EXACT_MAX: u64 = 30;

/// Per-gradient random time X.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// Pr(X > x) = (lambda/x)^rho for x > lambda.
    Pareto { lambda: f64, rho: f64 },
    /// Pr(X > x) = exp(−(x − gamma)/w) for x > gamma.
    #[serde(rename = "sexp")]
    ShiftedExp { gamma: f64, w: f64 },
}

/// How a worker's time grows with `points` gradient computations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Scaling {
    /// Y = points·delta + X
    Data { delta: f64 },
    /// Y = points·X
    Server,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelayModel {
    #[serde(flatten)]
    pub family: Family,
    pub scaling: Scaling,
}

impl DelayModel {
    pub fn pareto(lambda: f64, rho: f64, scaling: Scaling) -> Result<Self> {
        DelayModel { family: Family::Pareto { lambda, rho }, scaling }.validated()
    }

    pub fn shifted_exp(gamma: f64, w: f64, scaling: Scaling) -> Result<Self> {
        DelayModel { family: Family::ShiftedExp { gamma, w }, scaling }.validated()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<DelayModel>(text)?.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = match self.family {
            Family::Pareto { lambda, rho } => lambda > 0.0 && rho > 0.0,
            Family::ShiftedExp { gamma, w } => gamma >= 0.0 && w > 0.0,
        };
        if !ok {
            return Err(GcError::Parameter(format!("invalid delay family {:?}", self.family)));
        }
        if let Scaling::Data { delta } = self.scaling {
            if !(delta >= 0.0) {
                return Err(GcError::Parameter(format!("delta must be >= 0, got {delta}")));
            }
        }
        Ok(self)
    }

    /// Same model with the data-dependent delta replaced, if data-dependent.
    pub fn with_delta(mut self, delta: Option<f64>) -> Self {
        if let (Some(d), Scaling::Data { .. }) = (delta, self.scaling) {
            self.scaling = Scaling::Data { delta: d };
        }
        self
    }

    /// One draw of X by inverse CDF.
    pub fn raw_draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // 1 − U lies in (0, 1], so the logarithm and power stay finite.
        let u = 1.0 - rng.random::<f64>();
        match self.family {
            Family::Pareto { lambda, rho } => lambda * u.powf(-1.0 / rho),
            Family::ShiftedExp { gamma, w } => gamma - w * u.ln(),
        }
    }

    /// Completion time for `points` gradients given a raw draw X.
    pub fn completion(&self, points: f64, x: f64) -> f64 {
        match self.scaling {
            Scaling::Data { delta } => points * delta + x,
            Scaling::Server => points * x,
        }
    }

    pub fn sample_completion<R: Rng + ?Sized>(&self, points: f64, rng: &mut R) -> f64 {
        let x = self.raw_draw(rng);
        self.completion(points, x)
    }

    /// E[Y_(n−s):n] for `points` gradients per worker.
    pub fn expected_iteration_delay(&self, n: usize, s: usize, points: f64) -> Result<f64> {
        if s >= n {
            return Err(GcError::Parameter(format!("need s < n, got s={s}, n={n}")));
        }
        self.expected_real(n, s as f64, points)
    }

    /// As `expected_iteration_delay` but with a real-valued s, which the
    /// analytic scheme comparison needs.
    pub fn expected_real(&self, n: usize, s: f64, points: f64) -> Result<f64> {
        let x = expected_order_stat(&self.family, n, s)?;
        Ok(match self.scaling {
            Scaling::Data { delta } => points * delta + x,
            Scaling::Server => points * x,
        })
    }

    /// Empirical mean of the (n−s)-th smallest of n completion times.
    /// Trials are split into chunks with one ChaCha stream each, so the
    /// result does not depend on the thread count.
    pub fn monte_carlo(&self, n: usize, s: usize, points: f64, trials: usize, seed: u64) -> Result<f64> {
        if s >= n || trials == 0 {
            return Err(GcError::Parameter(format!("need s < n and trials > 0 (n={n}, s={s}, trials={trials})")));
        }
        const CHUNK: usize = 4096;
        let chunks = trials.div_ceil(CHUNK);
        let total: f64 = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let mut buf = vec![0.0; n];
                let mut acc = 0.0;
                for _ in 0..CHUNK.min(trials - c * CHUNK) {
                    for b in buf.iter_mut() {
                        *b = self.sample_completion(points, &mut rng);
                    }
                    let (_, v, _) = buf.select_nth_unstable_by(n - s - 1, f64::total_cmp);
                    acc += *v;
                }
                acc
            })
            .collect::<Vec<_>>()
            .into_iter()
            .sum();
        Ok(total / trials as f64)
    }
}

/// E[X_(n−s):n] for i.i.d. X, the (n−s)-th smallest of n.
///
/// Pareto: lambda · n!/s! · Γ(s+1−1/rho)/Γ(n+1−1/rho), in log-Gamma form so
/// real s works and nothing overflows. At s = 0 this is the mean of the
/// maximum. Shifted exponential: gamma + w(H_n − H_s).
pub fn expected_order_stat(family: &Family, n: usize, s: f64) -> Result<f64> {
    if !(0.0..n as f64).contains(&s) {
        return Err(GcError::Parameter(format!("need 0 <= s < n, got s={s}, n={n}")));
    }
    let nf = n as f64;
    match *family {
        Family::Pareto { lambda, rho } => {
            if rho <= 1.0 {
                return Err(GcError::InfiniteMean(format!("Pareto tail index rho={rho} <= 1")));
            }
            let e = 1.0 / rho;
            let log = ln_gamma(nf + 1.0) - ln_gamma(s + 1.0) + ln_gamma(s + 1.0 - e) - ln_gamma(nf + 1.0 - e);
            Ok(lambda * log.exp())
        }
        Family::ShiftedExp { gamma, w } => Ok(gamma + w * (harmonic(n as f64) - harmonic(s))),
    }
}

/// H_n as an exact fraction.
pub fn harmonic_exact(n: u64) -> Ratio<i128> {
    (1..=n as i128).map(|i| Ratio::new(1, i)).sum()
}

/// H_x = ψ(x+1) + γ. Integer x up to `HARMONIC_EXACT_MAX` goes through the
/// exact sum.
pub fn harmonic(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x.fract() == 0.0 && x <= HARMONIC_EXACT_MAX as f64 {
        let h = harmonic_exact(x as u64);
        return *h.numer() as f64 / *h.denom() as f64;
    }
    digamma(x + 1.0) + EULER_GAMMA
}

pub fn harmonic_digamma(x: f64) -> f64 {
    digamma(x + 1.0) + EULER_GAMMA
}

/// Uncoded (Scheme 1) against the y = 2 combinatorial scheme (Scheme 2).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchemeComparison {
    pub s1: f64,
    pub s2: f64,
    pub delay1: f64,
    pub delay2: f64,
    /// The sufficient condition for Scheme 2 to be faster in this model.
    pub predicate: bool,
    /// Pareto with data scaling only: the other printed form of the
    /// condition, with (1−α)^(−1/ρ) − 1 in the second factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicate_alt: Option<bool>,
    /// delay1 > delay2 from the exact closed forms.
    pub scheme2_faster: bool,
}

/// s_2 with s(s−1) = (1−α)n(n−1), the positive root.
pub fn s2_real(n: usize, alpha: f64) -> f64 {
    let c = (1.0 - alpha) * n as f64 * (n as f64 - 1.0);
    (1.0 + (1.0 + 4.0 * c).sqrt()) / 2.0
}

/// `d` is the dataset size; workers compute d/n (Scheme 1) or 2d/n
/// (Scheme 2) gradients.
pub fn scheme1_vs_scheme2(model: &DelayModel, n: usize, alpha: f64, d: f64) -> Result<SchemeComparison> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(GcError::Parameter(format!("need 0 < alpha < 1, got {alpha}")));
    }
    let nf = n as f64;
    let s1 = nf * (1.0 - alpha);
    let s2 = s2_real(n, alpha);
    let delay1 = model.expected_real(n, s1, d / nf)?;
    let delay2 = model.expected_real(n, s2, 2.0 * d / nf)?;
    let q = 1.0 - alpha;
    let (predicate, predicate_alt) = match (model.family, model.scaling) {
        (Family::Pareto { lambda, rho }, Scaling::Data { delta }) => {
            let lead = lambda * q.powf(-1.0 / (2.0 * rho));
            let rhs = d / nf * delta;
            (lead * (q.powf(-1.0 / (2.0 * rho)) - 1.0) > rhs, Some(lead * (q.powf(-1.0 / rho) - 1.0) > rhs))
        }
        (Family::ShiftedExp { w, .. }, Scaling::Data { delta }) => (w / 2.0 * (1.0 / q).ln() > d / nf * delta, None),
        (Family::Pareto { rho, .. }, Scaling::Server) => (q.powf(-2.0 / rho) > 2.0, None),
        (Family::ShiftedExp { .. }, Scaling::Server) => (false, None),
    };
    Ok(SchemeComparison { s1, s2, delay1, delay2, predicate, predicate_alt, scheme2_faster: delay1 > delay2 })
}
