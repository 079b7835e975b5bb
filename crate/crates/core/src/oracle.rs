//! Exact error rates by case analysis over the storage level.
//!
//! With every source able to reach every delay, a cycle depends on the past
//! only through the number `s` of stored photons. Given `h` heralds the cycle
//! fills `min(m, s + h)` slots and keeps `min(C, s + h - filled)` photons, so
//! the storage level is a Markov chain on `0..=C`. Its stationary distribution
//! gives the long-run lack rate. Scheduling never looks at multiplicity, so
//! the emitted photons are an unbiased sample of heralded ones and the
//! multi-photon rate follows from the lack rate.

use crate::emission::herald_probabilities;
use crate::error::{domain, Error, Result};

/// Probability of `h` heralds among `source_count` independent sources, for
/// `h` in `0..=source_count`.
pub fn herald_count_distribution(source_count: usize, p_herald: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p_herald) {
        return Err(domain(format!("herald probability must lie in [0, 1], got {p_herald}")));
    }
    if source_count == 0 {
        return Err(domain("source count must be at least 1"));
    }
    if p_herald == 0.0 || p_herald == 1.0 {
        let mut out = vec![0.0; source_count + 1];
        out[if p_herald == 0.0 { 0 } else { source_count }] = 1.0;
        return Ok(out);
    }
    let n = source_count as f64;
    let (ln_p, ln_q) = (p_herald.ln(), (-p_herald).ln_1p());
    let mut ln_choose = 0.0;
    let mut out = Vec::with_capacity(source_count + 1);
    for h in 0..=source_count {
        if h > 0 {
            ln_choose += ((n - h as f64 + 1.0) / h as f64).ln();
        }
        out.push((ln_choose + h as f64 * ln_p + (n - h as f64) * ln_q).exp());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    pub source_count: usize,
    pub multiple: u32,
    pub capacity: u32,
    pub p_herald: f64,
    pub p_multi: f64,
}

impl ChainSpec {
    /// Chain for `source_count` sources, `step_count` register layers and
    /// frequency multiple `multiple` at mean pair number `mean_pairs`.
    pub fn new(source_count: usize, multiple: u32, step_count: u32, mean_pairs: f64) -> Result<Self> {
        if step_count == 0 || step_count > crate::topology::MAX_STEPS {
            return Err(domain(format!("steps must lie in 1..={}", crate::topology::MAX_STEPS)));
        }
        let train = 1u32 << step_count;
        if multiple == 0 || multiple > train {
            return Err(domain(format!("multiple must lie in 1..={train}, got {multiple}")));
        }
        let hp = herald_probabilities(mean_pairs)?;
        Ok(Self { source_count, multiple, capacity: train - multiple, p_herald: hp.p_herald, p_multi: hp.p_multi })
    }
}

/// Row-stochastic transition matrix plus per-state expected lacks and
/// discards.
#[derive(Debug, Clone)]
pub struct StorageChain {
    pub transition: Vec<Vec<f64>>,
    pub expected_lack: Vec<f64>,
    pub expected_discard: Vec<f64>,
}

pub fn build_chain(spec: &ChainSpec) -> Result<StorageChain> {
    let herald_dist = herald_count_distribution(spec.source_count, spec.p_herald)?;
    let states = spec.capacity as usize + 1;
    let m = spec.multiple as usize;
    let cap = spec.capacity as usize;
    let mut transition = vec![vec![0.0; states]; states];
    let mut expected_lack = vec![0.0; states];
    let mut expected_discard = vec![0.0; states];
    for s in 0..states {
        for (h, &p) in herald_dist.iter().enumerate() {
            let available = s + h;
            let filled = available.min(m);
            let next = (available - filled).min(cap);
            transition[s][next] += p;
            expected_lack[s] += p * (m - filled) as f64;
            expected_discard[s] += p * (available - filled - next) as f64;
        }
    }
    Ok(StorageChain { transition, expected_lack, expected_discard })
}

pub const POWER_ITERATION_BUDGET: usize = 1_000_000;
pub const STATIONARY_TOLERANCE: f64 = 1e-12;

/// Stationary distribution by power iteration from the uniform vector.
pub fn stationary_distribution(transition: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = transition.len();
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..POWER_ITERATION_BUDGET {
        next.iter_mut().for_each(|x| *x = 0.0);
        for (i, row) in transition.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                next[j] += pi[i] * p;
            }
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        residual = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut pi, &mut next);
        if residual < STATIONARY_TOLERANCE * 1e-2 {
            return Ok(pi);
        }
    }
    Err(Error::NoConvergence { iterations: POWER_ITERATION_BUDGET, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryRates {
    pub lack_rate: f64,
    pub multi_rate: f64,
    pub mean_storage: f64,
    /// Expected photons routed out per cycle.
    pub mean_discarded: f64,
    pub distribution: Vec<f64>,
}

impl StationaryRates {
    pub fn relative_multi_rate(&self) -> f64 {
        self.multi_rate / (1.0 - self.lack_rate)
    }
}

pub fn stationary_rates(spec: &ChainSpec) -> Result<StationaryRates> {
    let chain = build_chain(spec)?;
    let pi = stationary_distribution(&chain.transition)?;
    let m = f64::from(spec.multiple);
    let lack_rate = pi.iter().zip(&chain.expected_lack).map(|(p, l)| p * l).sum::<f64>() / m;
    let mean_discarded = pi.iter().zip(&chain.expected_discard).map(|(p, d)| p * d).sum();
    let mean_storage = pi.iter().enumerate().map(|(s, p)| s as f64 * p).sum();
    let multi_rate = spec.p_multi / spec.p_herald * (1.0 - lack_rate);
    Ok(StationaryRates { lack_rate, multi_rate, mean_storage, mean_discarded, distribution: pi })
}

/// Rates at mean pair number `mean_pairs`.
pub fn rates_at(source_count: usize, multiple: u32, step_count: u32, mean_pairs: f64) -> Result<StationaryRates> {
    stationary_rates(&ChainSpec::new(source_count, multiple, step_count, mean_pairs)?)
}

pub const OPTIMIZE_LOWER: f64 = 1e-6;
pub const OPTIMIZE_UPPER: f64 = 1.0;
/// The upper end is doubled up to this value when `(1e-6, 1]` holds no
/// crossing, as happens for very small arrays.
pub const OPTIMIZE_UPPER_LIMIT: f64 = 64.0;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedPoint {
    pub mean_pairs: f64,
    pub rates: StationaryRates,
    pub iterations: usize,
}

/// Finds the mean pair number at which the lack rate equals the multi-photon
/// rate, by bisection on `lack - multi`.
pub fn optimized_power(source_count: usize, multiple: u32, step_count: u32, tolerance: f64) -> Result<OptimizedPoint> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let gap = |n: f64| -> Result<(f64, StationaryRates)> {
        let r = rates_at(source_count, multiple, step_count, n)?;
        Ok((r.lack_rate - r.multi_rate, r))
    };
    let mut lo = OPTIMIZE_LOWER;
    let (f_lo, _) = gap(lo)?;
    let mut hi = OPTIMIZE_UPPER;
    let (mut f_hi, mut r_hi) = gap(hi)?;
    while f_lo.signum() == f_hi.signum() && hi < OPTIMIZE_UPPER_LIMIT {
        hi *= 2.0;
        (f_hi, r_hi) = gap(hi)?;
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Search(format!(
            "lack - multi does not change sign on [{lo}, {hi}] ({f_lo:e}, {f_hi:e})"
        )));
    }
    if f_hi.abs() < tolerance {
        return Ok(OptimizedPoint { mean_pairs: hi, rates: r_hi, iterations: 0 });
    }
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let (f_mid, r_mid) = gap(mid)?;
        if f_mid.abs() < tolerance || (hi - lo) < f64::EPSILON * mid {
            return Ok(OptimizedPoint { mean_pairs: mid, rates: r_mid, iterations });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}
