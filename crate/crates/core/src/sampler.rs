//! Haar-uniform pure states and reproducible parallel Monte Carlo averages.
//!
//! Sample `i` of a run with seed `s` is drawn from ChaCha8 keyed by `s` on
//! stream `i`, so the sample sequence does not depend on scheduling. Samples
//! are grouped in fixed-size blocks; each block keeps a Welford accumulator
//! and blocks are merged in index order.

use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analytic::{avg_purity, avg_tangle, Analytic};
use crate::exactmath::{BigReal, Rational};
use crate::partition::{disjoint, FactorList, PartitionError, Selector};
use crate::quantum::{self, PureState, QuantumError, DEFAULT_SPECTRAL_CAP};

pub const DEFAULT_STATE_CAP: usize = 1 << 22;
pub const STATE_CAP_ENV: &str = "SUBENTROPY_STATE_CAP";
pub const SPECTRAL_CAP_ENV: &str = "SUBENTROPY_SPECTRAL_CAP";

/// Samples per accumulation block.
pub const BLOCK: u64 = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("{what} {size} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: String,
        cap: usize,
    },
    #[error("Haar sampling needs total dimension >= 2, got {0}")]
    TooSmall(usize),
    #[error("invalid sample spec: {0}")]
    Invalid(String),
    #[error("cannot parse {var}={value:?} as a positive integer")]
    BadEnv { var: &'static str, value: String },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

impl SamplerError {
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            SamplerError::CapExceeded { .. }
                | SamplerError::Quantum(QuantumError::CapExceeded { .. })
        )
    }
}

pub type Result<T> = std::result::Result<T, SamplerError>;

/// Materialisation limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Largest number of amplitudes in a sampled state.
    pub state: usize,
    /// Largest matrix side passed to the eigensolver.
    pub spectral: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            state: DEFAULT_STATE_CAP,
            spectral: DEFAULT_SPECTRAL_CAP,
        }
    }
}

impl Caps {
    /// Defaults overridden by `SUBENTROPY_STATE_CAP` / `SUBENTROPY_SPECTRAL_CAP`.
    pub fn from_env() -> Result<Self> {
        let read = |var: &'static str, default: usize| -> Result<usize> {
            match std::env::var(var) {
                Ok(value) => match value.trim().parse::<usize>() {
                    Ok(v) if v > 0 => Ok(v),
                    _ => Err(SamplerError::BadEnv { var, value }),
                },
                Err(_) => Ok(default),
            }
        };
        Ok(Caps {
            state: read(STATE_CAP_ENV, DEFAULT_STATE_CAP)?,
            spectral: read(SPECTRAL_CAP_ENV, DEFAULT_SPECTRAL_CAP)?,
        })
    }
}

/// The generator for sample `index` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `n` i.i.d. complex Gaussians, normalized.
pub fn sample_haar_amplitudes<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    caps: &Caps,
) -> Result<Vec<Complex64>> {
    if n < 2 {
        return Err(SamplerError::TooSmall(n));
    }
    if n > caps.state {
        return Err(SamplerError::CapExceeded {
            what: "state dimension",
            size: n.to_string(),
            cap: caps.state,
        });
    }
    let mut amps: Vec<Complex64> = (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    let inv = 1.0 / amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z *= inv;
    }
    Ok(amps)
}

pub fn sample_haar_state<R: Rng + ?Sized>(
    factors: &FactorList,
    rng: &mut R,
    caps: &Caps,
) -> Result<PureState> {
    let n = factors
        .total_usize()
        .filter(|&n| n <= caps.state)
        .ok_or_else(|| SamplerError::CapExceeded {
            what: "state dimension",
            size: factors.total().to_string(),
            cap: caps.state,
        })?;
    let amps = sample_haar_amplitudes(n, rng, caps)?;
    Ok(PureState::new(amps, factors.clone())?)
}

/// The per-state quantity to average, with its subsystem selectors given as
/// factor indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Quantity {
    Entropy { keep: Vec<usize> },
    Purity { keep: Vec<usize> },
    Tangle { keep: Vec<usize> },
    Concurrence { keep: Vec<usize> },
    Negativity { keep: Vec<usize> },
    Renyi { keep: Vec<usize>, q: f64 },
    Tsallis { keep: Vec<usize>, q: f64 },
    MutualInfo { a: Vec<usize>, b: Vec<usize> },
}

fn braces(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Entropy { keep } => write!(f, "entropy{}", braces(keep)),
            Quantity::Purity { keep } => write!(f, "purity{}", braces(keep)),
            Quantity::Tangle { keep } => write!(f, "tangle{}", braces(keep)),
            Quantity::Concurrence { keep } => write!(f, "concurrence{}", braces(keep)),
            Quantity::Negativity { keep } => write!(f, "negativity{}", braces(keep)),
            Quantity::Renyi { keep, q } => write!(f, "renyi(q={q}){}", braces(keep)),
            Quantity::Tsallis { keep, q } => write!(f, "tsallis(q={q}){}", braces(keep)),
            Quantity::MutualInfo { a, b } => {
                write!(f, "mutual-info{}:{}", braces(a), braces(b))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSpec {
    pub factors: FactorList,
    pub quantity: Quantity,
    pub samples: u64,
    pub seed: u64,
}

/// A [`SampleSpec`] with its selectors resolved and checked.
#[derive(Clone, Debug)]
struct Prepared {
    kind: Kind,
    keep: Selector,
    other: Option<Selector>,
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Entropy,
    Purity,
    Tangle,
    Concurrence,
    Negativity,
    Renyi(f64),
    Tsallis(f64),
    MutualInfo,
}

impl SampleSpec {
    fn prepare(&self, caps: &Caps) -> Result<Prepared> {
        if self.samples == 0 {
            return Err(SamplerError::Invalid("samples must be positive".into()));
        }
        let f = &self.factors;
        let n = f.total_usize().filter(|&n| n <= caps.state);
        match n {
            None => {
                return Err(SamplerError::CapExceeded {
                    what: "state dimension",
                    size: f.total().to_string(),
                    cap: caps.state,
                })
            }
            Some(n) if n < 2 => return Err(SamplerError::TooSmall(n)),
            _ => {}
        }
        let (kind, keep, other) = match &self.quantity {
            Quantity::Entropy { keep } => (Kind::Entropy, keep, None),
            Quantity::Purity { keep } => (Kind::Purity, keep, None),
            Quantity::Tangle { keep } => (Kind::Tangle, keep, None),
            Quantity::Concurrence { keep } => (Kind::Concurrence, keep, None),
            Quantity::Negativity { keep } => (Kind::Negativity, keep, None),
            Quantity::Renyi { keep, q } => (Kind::Renyi(*q), keep, None),
            Quantity::Tsallis { keep, q } => (Kind::Tsallis(*q), keep, None),
            Quantity::MutualInfo { a, b } => (Kind::MutualInfo, a, Some(b)),
        };
        if let Kind::Renyi(q) | Kind::Tsallis(q) = kind {
            if q.is_nan() || q <= 0.0 || q == 1.0 {
                return Err(QuantumError::BadOrder(q).into());
            }
        }
        let keep = f.select(keep)?;
        let other = other.map(|b| f.select(b)).transpose()?;
        let mut sides = vec![keep.clone()];
        if let Some(b) = &other {
            if !disjoint(&keep, b) {
                return Err(SamplerError::Invalid(format!(
                    "collections {keep} and {b} overlap"
                )));
            }
            sides.push(b.clone());
            sides.push(f.union(&keep, b)?);
        }
        for s in &sides {
            let side = s.kept_dim().min(s.complement_dim());
            if side.to_usize().is_none_or(|v| v > caps.spectral) {
                return Err(SamplerError::CapExceeded {
                    what: "spectral side",
                    size: side.to_string(),
                    cap: caps.spectral,
                });
            }
        }
        Ok(Prepared { kind, keep, other })
    }
}

impl Prepared {
    fn value(&self, state: &PureState, caps: &Caps) -> Result<f64> {
        if let Some(b) = &self.other {
            return Ok(quantum::mutual_info_with_cap(
                state,
                &self.keep,
                b,
                caps.spectral,
            )?);
        }
        let spec = quantum::spectrum_of_with_cap(state, &self.keep, caps.spectral)?;
        Ok(match self.kind {
            Kind::Entropy => quantum::von_neumann(&spec),
            Kind::Purity => quantum::purity(&spec),
            Kind::Tangle => quantum::tangle(&spec),
            Kind::Concurrence => quantum::concurrence(&spec),
            Kind::Negativity => quantum::pure_state_negativity(&spec),
            Kind::Renyi(q) => quantum::renyi(&spec, q)?,
            Kind::Tsallis(q) => quantum::tsallis(&spec, q)?,
            Kind::MutualInfo => unreachable!("handled above"),
        })
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let frac = other.n as f64 / n as f64;
        Welford {
            n,
            mean: self.mean + d * frac,
            m2: self.m2 + other.m2 + d * d * self.n as f64 * frac,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateResult {
    pub dims: String,
    pub quantity: String,
    pub mean: f64,
    /// Sample standard deviation (unbiased) over `sqrt(samples)`.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// The `index`-th sampled state of a run.
pub fn sample_state(factors: &FactorList, seed: u64, index: u64, caps: &Caps) -> Result<PureState> {
    sample_haar_state(factors, &mut stream_rng(seed, index), caps)
}

/// Per-sample values for indices `range`, in order.
pub fn sample_values(
    spec: &SampleSpec,
    range: std::ops::Range<u64>,
    caps: &Caps,
) -> Result<Vec<f64>> {
    let prep = spec.prepare(caps)?;
    range
        .map(|i| prep.value(&sample_state(&spec.factors, spec.seed, i, caps)?, caps))
        .collect()
}

/// Mean and standard error over `spec.samples` draws on `workers` threads.
/// The result does not depend on `workers`.
pub fn estimate(spec: &SampleSpec, workers: usize, caps: &Caps) -> Result<EstimateResult> {
    let prep = spec.prepare(caps)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SamplerError::Invalid(format!("thread pool: {e}")))?;
    let blocks = spec.samples.div_ceil(BLOCK);
    let partials: Vec<Result<Welford>> = pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut acc = Welford::default();
                for i in b * BLOCK..((b + 1) * BLOCK).min(spec.samples) {
                    let state = sample_state(&spec.factors, spec.seed, i, caps)?;
                    acc.push(prep.value(&state, caps)?);
                }
                Ok(acc)
            })
            .collect()
    });
    let mut total = Welford::default();
    for p in partials {
        total = total.merge(p?);
    }
    let stderr = if total.n > 1 {
        (total.m2 / (total.n - 1) as f64 / total.n as f64).sqrt()
    } else {
        0.0
    };
    Ok(EstimateResult {
        dims: spec.factors.to_string(),
        quantity: spec.quantity.to_string(),
        mean: total.mean,
        stderr,
        samples: total.n,
        seed: spec.seed,
    })
}

/// Closed-form average a Monte Carlo estimate can be compared against.
#[derive(Clone, Debug)]
pub struct Oracle {
    pub value: BigReal,
    pub exact: Option<Rational>,
    /// True when `value` is only an upper bound on the average.
    pub upper_bound: bool,
}

impl Oracle {
    fn exact(r: Rational, digits: u32) -> Self {
        Oracle {
            value: BigReal::from_ratio(&r, digits),
            exact: Some(r),
            upper_bound: false,
        }
    }
}

/// The analytic average for `spec`'s quantity, if there is one.
pub fn oracle_for(spec: &SampleSpec, analytic: &Analytic) -> Result<Option<Oracle>> {
    let prep = spec.prepare(&Caps {
        state: usize::MAX,
        spectral: usize::MAX,
    })?;
    let d = analytic.digits();
    let (na, nb) = (prep.keep.kept_dim(), prep.keep.complement_dim());
    let small = |x: &num_bigint::BigUint| x.to_u64().expect("sampled dimensions fit in u64");
    Ok(match prep.kind {
        Kind::Entropy => {
            let v = analytic.page_sen_big(na, nb);
            Some(Oracle {
                value: v.nats,
                exact: v.exact,
                upper_bound: false,
            })
        }
        Kind::Purity => Some(Oracle::exact(avg_purity(small(na), small(nb)), d)),
        Kind::Tangle => Some(Oracle::exact(avg_tangle(small(na), small(nb)), d)),
        Kind::Tsallis(2.0) => Some(Oracle::exact(
            Rational::from_integer(1.into()) - avg_purity(small(na), small(nb)),
            d,
        )),
        Kind::Concurrence => Some(Oracle {
            value: analytic.concurrence_bound(small(na), small(nb)),
            exact: None,
            upper_bound: true,
        }),
        Kind::MutualInfo => {
            let b = prep.other.as_ref().expect("mutual info has two sides");
            let v = analytic
                .multipartite_avg_mutual_info(&spec.factors, &prep.keep, b)
                .map_err(|e| SamplerError::Invalid(e.to_string()))?;
            Some(Oracle {
                value: v.nats,
                exact: v.exact,
                upper_bound: false,
            })
        }
        _ => None,
    })
}

/// `|mean - oracle| / stderr` (infinite when `stderr` is 0 and they differ).
pub fn z_score(result: &EstimateResult, oracle: f64) -> f64 {
    let diff = (result.mean - oracle).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / result.stderr
    }
}
