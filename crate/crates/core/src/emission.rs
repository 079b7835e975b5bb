//! Pair-generation statistics of a pulsed downconverter array.
//!
//! Each downconverter emits a Poisson-distributed number of pairs per pump
//! pulse. The heralding detectors are non-number-resolving: control logic sees
//! only whether a source fired, while the true pair count is carried along for
//! error accounting.

use rand::Rng;

use crate::error::{domain, Result};

fn check_mean(mean_pairs: f64) -> Result<()> {
    if mean_pairs.is_finite() && mean_pairs > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("mean pair number must be positive, got {mean_pairs}")))
    }
}

/// Probability of exactly `n` pairs in one pulse when the mean is `mean_pairs`.
pub fn pair_pmf(n: u32, mean_pairs: f64) -> Result<f64> {
    check_mean(mean_pairs)?;
    // Product form keeps every factor in range and underflows cleanly to 0.
    let mut p = (-mean_pairs).exp();
    for k in 1..=n {
        p *= mean_pairs / f64::from(k);
        if p == 0.0 {
            break;
        }
    }
    Ok(p)
}

/// Probabilities that a single source heralds (>= 1 pair) and that it emits a
/// multi-pair event (>= 2 pairs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldProbabilities {
    pub p_herald: f64,
    pub p_multi: f64,
}

impl HeraldProbabilities {
    /// Fraction of heralded emissions that carry more than one pair.
    pub fn multi_fraction(&self) -> f64 {
        self.p_multi / self.p_herald
    }
}

pub fn herald_probabilities(mean_pairs: f64) -> Result<HeraldProbabilities> {
    check_mean(mean_pairs)?;
    let p_herald = -(-mean_pairs).exp_m1();
    let p_multi = if mean_pairs < 1.0 {
        // Direct tail sum; 1 - p0 - p1 cancels catastrophically for small N.
        let mut term = pair_pmf(2, mean_pairs)?;
        let mut sum = 0.0;
        let mut n = 2.0;
        while term > sum * 1e-18 && term > 0.0 {
            sum += term;
            n += 1.0;
            term *= mean_pairs / n;
        }
        sum
    } else {
        p_herald - mean_pairs * (-mean_pairs).exp()
    };
    Ok(HeraldProbabilities { p_herald, p_multi })
}

/// Pair counts of every downconverter for one pump cycle. Index 0 is the top
/// of the array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmissionBatch {
    pub cycle_index: u64,
    pub pair_counts: Vec<u32>,
}

/// What the detectors report, plus the hidden multiplicity used for metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeraldReport {
    pub heralded: Vec<bool>,
    pub multiplicity: Vec<u32>,
}

impl HeraldReport {
    pub fn source_count(&self) -> usize {
        self.heralded.len()
    }

    pub fn herald_count(&self) -> usize {
        self.heralded.iter().filter(|&&h| h).count()
    }

    /// Builds a report from pair counts; useful for hand-made scenarios.
    pub fn from_counts(counts: &[u32]) -> Self {
        herald(&EmissionBatch { cycle_index: 0, pair_counts: counts.to_vec() })
    }

    /// Report where exactly the listed 1-based sources fired a single pair.
    pub fn single_pairs_at(source_count: usize, sources: &[usize]) -> Self {
        let mut counts = vec![0; source_count];
        for &s in sources {
            counts[s - 1] = 1;
        }
        Self::from_counts(&counts)
    }
}

/// Draws one Poisson variate by sequential search of the inverse CDF.
pub fn sample_pairs<R: Rng + ?Sized>(mean_pairs: f64, rng: &mut R) -> u32 {
    let u: f64 = rng.random();
    let mut k = 0u32;
    let mut p = (-mean_pairs).exp();
    let mut cdf = p;
    while u >= cdf {
        k += 1;
        p *= mean_pairs / f64::from(k);
        if p == 0.0 {
            break;
        }
        cdf += p;
    }
    k
}

/// Samples one pump cycle: an independent Poisson draw per source, in array
/// order.
pub fn sample_cycle_emissions<R: Rng + ?Sized>(
    source_count: usize,
    mean_pairs: f64,
    cycle_index: u64,
    rng: &mut R,
) -> Result<EmissionBatch> {
    check_mean(mean_pairs)?;
    if source_count == 0 {
        return Err(domain("source count must be at least 1"));
    }
    let pair_counts = (0..source_count).map(|_| sample_pairs(mean_pairs, rng)).collect();
    Ok(EmissionBatch { cycle_index, pair_counts })
}

pub fn herald(batch: &EmissionBatch) -> HeraldReport {
    HeraldReport {
        heralded: batch.pair_counts.iter().map(|&n| n >= 1).collect(),
        multiplicity: batch.pair_counts.clone(),
    }
}
