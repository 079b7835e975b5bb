//! Geometry of the crossed by-passable binary delay register.
//!
//! The register has `K` layers with delays `1, 2, 4, ..., 2^(K-1)` (in units of
//! the slot period `T`). A photon entering at source `i` of an `S`-source array
//! crosses the layers diagonally, so the top boundary limits how many layers
//! it can take (at most `i - 1`) and the bottom boundary limits how many it
//! can skip (at most `S - i`). Interior sources reach every delay in
//! `0..2^K`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{domain, Error, Result};

/// Largest supported register depth; delay sets are stored as 64-bit masks.
pub const MAX_STEPS: u32 = 6;

/// Whether the boundary reachability limits of the register apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundaryMode {
    #[default]
    Constrained,
    /// Every source reaches every delay (all-interior idealization).
    Unconstrained,
}

impl BoundaryMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryMode::Constrained => "constrained",
            BoundaryMode::Unconstrained => "unconstrained",
        }
    }
}

impl std::str::FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constrained" => Ok(BoundaryMode::Constrained),
            "unconstrained" => Ok(BoundaryMode::Unconstrained),
            other => Err(domain(format!("unknown boundary mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterTopology {
    source_count: usize,
    step_count: u32,
    boundary: BoundaryMode,
    masks: Vec<u64>,
}

/// Delays reachable by one source, in units of `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelaySet {
    pub source_index: usize,
    pub accessible: BTreeSet<u32>,
}

/// One admissible route through the register.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DelayPath {
    pub delay: u32,
    /// Delays of the layers taken, ascending.
    pub steps: Vec<u32>,
}

impl RegisterTopology {
    pub fn new(source_count: usize, step_count: u32) -> Result<Self> {
        Self::with_boundary(source_count, step_count, BoundaryMode::Constrained)
    }

    pub fn unconstrained(source_count: usize, step_count: u32) -> Result<Self> {
        Self::with_boundary(source_count, step_count, BoundaryMode::Unconstrained)
    }

    pub fn with_boundary(source_count: usize, step_count: u32, boundary: BoundaryMode) -> Result<Self> {
        if source_count == 0 {
            return Err(domain("source count must be at least 1"));
        }
        if step_count == 0 || step_count > MAX_STEPS {
            return Err(domain(format!("step count must lie in 1..={MAX_STEPS}, got {step_count}")));
        }
        let full = if step_count == 6 { u64::MAX } else { (1u64 << (1u32 << step_count)) - 1 };
        let masks = (1..=source_count)
            .map(|i| match boundary {
                BoundaryMode::Unconstrained => full,
                BoundaryMode::Constrained => {
                    let (lo, hi) = step_bounds(source_count, step_count, i);
                    (0..1u32 << step_count)
                        .filter(|d| (lo..=hi).contains(&d.count_ones()))
                        .fold(0u64, |m, d| m | (1 << d))
                }
            })
            .collect();
        Ok(Self { source_count, step_count, boundary, masks })
    }

    pub fn source_count(&self) -> usize {
        self.source_count
    }

    pub fn step_count(&self) -> u32 {
        self.step_count
    }

    pub fn boundary(&self) -> BoundaryMode {
        self.boundary
    }

    pub fn step_delays(&self) -> Vec<u32> {
        (0..self.step_count).map(|k| 1 << k).collect()
    }

    /// Longest photon train the register can form, `2^K`.
    pub fn train_length(&self) -> u32 {
        1 << self.step_count
    }

    pub fn max_delay(&self) -> u32 {
        self.train_length() - 1
    }

    /// Photons that can be carried over to the next cycle at frequency
    /// multiple `multiple`.
    pub fn storage_capacity(&self, multiple: u32) -> Result<u32> {
        if multiple == 0 || multiple > self.train_length() {
            return Err(domain(format!(
                "frequency multiple must lie in 1..={}, got {multiple}",
                self.train_length()
            )));
        }
        Ok(self.train_length() - multiple)
    }

    fn check_index(&self, source_index: usize) -> Result<()> {
        if source_index == 0 || source_index > self.source_count {
            Err(Error::IndexOutOfRange { index: source_index, source_count: self.source_count })
        } else {
            Ok(())
        }
    }

    /// Bitmask of reachable delays for a 1-based source. Panics on a bad index.
    #[inline]
    pub fn mask(&self, source_index: usize) -> u64 {
        self.masks[source_index - 1]
    }

    #[inline]
    pub fn can_reach(&self, source_index: usize, delay: u32) -> bool {
        delay < 64 && self.mask(source_index) & (1 << delay) != 0
    }

    pub fn accessible_delays(&self, source_index: usize) -> Result<DelaySet> {
        self.check_index(source_index)?;
        let mask = self.mask(source_index);
        let accessible = (0..self.train_length()).filter(|&d| mask & (1 << d) != 0).collect();
        Ok(DelaySet { source_index, accessible })
    }

    pub fn inaccessible_delays(&self, source_index: usize) -> Result<BTreeSet<u32>> {
        let set = self.accessible_delays(source_index)?;
        Ok((0..self.train_length()).filter(|d| !set.accessible.contains(d)).collect())
    }

    /// Every admissible subset of layers for a source, sorted by delay.
    pub fn enumerate_delay_paths(&self, source_index: usize) -> Result<Vec<DelayPath>> {
        self.check_index(source_index)?;
        let (lo, hi) = match self.boundary {
            BoundaryMode::Constrained => step_bounds(self.source_count, self.step_count, source_index),
            BoundaryMode::Unconstrained => (0, self.step_count),
        };
        let mut paths: Vec<DelayPath> = (0..self.train_length())
            .filter(|subset| (lo..=hi).contains(&subset.count_ones()))
            .map(|subset| DelayPath {
                // Layer k has delay 2^k, so the subset bitmask is the delay.
                delay: subset,
                steps: (0..self.step_count).filter(|k| subset & (1 << k) != 0).map(|k| 1 << k).collect(),
            })
            .collect();
        paths.sort();
        Ok(paths)
    }

    /// Accessibility table as CSV: one row per source.
    pub fn accessibility_csv(&self) -> String {
        let mut out = String::from("source,min_steps,max_steps,accessible,inaccessible\n");
        for i in 1..=self.source_count {
            let (lo, hi) = match self.boundary {
                BoundaryMode::Constrained => step_bounds(self.source_count, self.step_count, i),
                BoundaryMode::Unconstrained => (0, self.step_count),
            };
            let acc = self.accessible_delays(i).expect("index in range");
            let inacc = self.inaccessible_delays(i).expect("index in range");
            let join = |s: &BTreeSet<u32>| s.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
            let _ = writeln!(out, "{i},{lo},{hi},{},{}", join(&acc.accessible), join(&inacc));
        }
        out
    }
}

/// Allowed number of layers taken by source `i`: `[max(0, K-(S-i)), min(K, i-1)]`.
fn step_bounds(source_count: usize, step_count: u32, source_index: usize) -> (u32, u32) {
    let below = (source_count - source_index) as u64;
    let above = (source_index - 1) as u64;
    let lo = u64::from(step_count).saturating_sub(below) as u32;
    let hi = above.min(u64::from(step_count)) as u32;
    (lo, hi)
}

/// Checks that delays strictly increase with source index, the ordering under
/// which every register and tree switch flips at most once per cycle and in a
/// single direction.
pub fn verify_monotone_assignment(assignments: &[(usize, u32)]) -> Result<bool> {
    let mut sorted = assignments.to_vec();
    sorted.sort_by_key(|&(source, _)| source);
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(domain(format!("source {} assigned more than once", w[0].0)));
    }
    Ok(sorted.windows(2).all(|w| w[0].1 < w[1].1))
}
