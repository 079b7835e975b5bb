//! Monte Carlo engine over pump cycles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::emission::{herald, sample_cycle_emissions, HeraldReport};
use crate::error::{domain, Error, Result};
use crate::scheduler::{plan_cycle, CyclePlan, StorageState};
use crate::topology::{BoundaryMode, RegisterTopology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FeedbackMode {
    #[default]
    Off,
    /// Raise the pump by a fixed factor whenever storage is not full.
    Boost,
    /// Raise the pump in proportion to the empty fraction of storage.
    TurboBoost,
}

impl FeedbackMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FeedbackMode::Off => "off",
            FeedbackMode::Boost => "boost",
            FeedbackMode::TurboBoost => "turbo_boost",
        }
    }
}

impl std::str::FromStr for FeedbackMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" => Ok(FeedbackMode::Off),
            "boost" => Ok(FeedbackMode::Boost),
            "turbo_boost" | "turbo-boost" => Ok(FeedbackMode::TurboBoost),
            other => Err(domain(format!("unknown feedback mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FeedbackPolicy {
    pub mode: FeedbackMode,
    pub strength: f64,
}

impl FeedbackPolicy {
    pub const OFF: FeedbackPolicy = FeedbackPolicy { mode: FeedbackMode::Off, strength: 0.0 };

    pub fn boost(strength: f64) -> Self {
        Self { mode: FeedbackMode::Boost, strength }
    }

    pub fn turbo_boost(strength: f64) -> Self {
        Self { mode: FeedbackMode::TurboBoost, strength }
    }

    pub fn is_off(&self) -> bool {
        self.mode == FeedbackMode::Off
    }
}

/// Pump mean for the next cycle given the storage level left by the last one.
pub fn apply_feedback(policy: FeedbackPolicy, storage_level: u32, capacity: u32, base_mean: f64) -> f64 {
    match policy.mode {
        FeedbackMode::Off => base_mean,
        FeedbackMode::Boost if storage_level < capacity => base_mean * (1.0 + policy.strength),
        FeedbackMode::Boost => base_mean,
        FeedbackMode::TurboBoost if capacity == 0 => base_mean,
        FeedbackMode::TurboBoost => {
            let empty = f64::from(capacity.saturating_sub(storage_level)) / f64::from(capacity);
            base_mean * (1.0 + policy.strength * empty)
        }
    }
}

/// Full description of one Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub source_count: usize,
    pub step_count: u32,
    pub multiple: u32,
    pub mean_pairs: f64,
    pub cycles: u64,
    pub seed: u64,
    pub feedback: FeedbackPolicy,
    pub boundary: BoundaryMode,
}

impl SimConfig {
    pub const DEFAULT_STEPS: u32 = 3;
    pub const DEFAULT_CYCLES: u64 = 100_000;
    pub const DEFAULT_SEED: u64 = 1;

    /// Config with every optional field at its default.
    pub fn new(source_count: usize, multiple: u32, mean_pairs: f64) -> Self {
        Self {
            source_count,
            step_count: Self::DEFAULT_STEPS,
            multiple,
            mean_pairs,
            cycles: Self::DEFAULT_CYCLES,
            seed: Self::DEFAULT_SEED,
            feedback: FeedbackPolicy::OFF,
            boundary: BoundaryMode::Constrained,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.source_count == 0 {
            return Err(domain("sources must be at least 1"));
        }
        if self.step_count == 0 || self.step_count > crate::topology::MAX_STEPS {
            return Err(domain(format!("steps must lie in 1..={}", crate::topology::MAX_STEPS)));
        }
        let train = 1u32 << self.step_count;
        if self.multiple == 0 || self.multiple > train {
            return Err(domain(format!(
                "multiple must lie in 1..={train} for {} steps, got {}",
                self.step_count, self.multiple
            )));
        }
        if !(self.mean_pairs.is_finite() && self.mean_pairs > 0.0) {
            return Err(domain(format!("mean_pairs must be positive, got {}", self.mean_pairs)));
        }
        if !(self.feedback.strength.is_finite() && self.feedback.strength >= 0.0) {
            return Err(domain(format!("feedback strength must be non-negative, got {}", self.feedback.strength)));
        }
        Ok(())
    }

    pub fn capacity(&self) -> u32 {
        (1u32 << self.step_count) - self.multiple
    }

    pub fn topology(&self) -> Result<RegisterTopology> {
        RegisterTopology::with_boundary(self.source_count, self.step_count, self.boundary)
    }
}

/// Stream for stream id `stream` under master seed `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Number of batches behind the batch-means standard errors.
pub const STD_ERROR_BATCHES: u64 = 50;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimMetrics {
    pub cycles: u64,
    pub multiple: u32,
    pub total_slots: u64,
    pub lack_count: u64,
    pub multi_count: u64,
    pub filled_count: u64,
    pub discarded_count: u64,
    pub herald_count: u64,
    pub final_storage: u64,
    pub storage_level_sum: u64,
    pub conservation_violations: u64,
    /// Batch-means standard error of `lack_rate`; `None` below two cycles per
    /// batch.
    pub lack_std_error: Option<f64>,
    pub multi_std_error: Option<f64>,
}

impl SimMetrics {
    fn ratio(num: u64, den: u64) -> Option<f64> {
        (den > 0).then(|| num as f64 / den as f64)
    }

    pub fn lack_rate(&self) -> Option<f64> {
        Self::ratio(self.lack_count, self.total_slots)
    }

    pub fn multi_rate(&self) -> Option<f64> {
        Self::ratio(self.multi_count, self.total_slots)
    }

    pub fn relative_multi_rate(&self) -> Option<f64> {
        Self::ratio(self.multi_count, self.filled_count)
    }

    /// Average storage level left at the end of a cycle.
    pub fn mean_storage_level(&self) -> Option<f64> {
        Self::ratio(self.storage_level_sum, self.cycles)
    }
}

/// What the observer of [`Simulator::run_with`] sees after each cycle.
#[derive(Debug)]
pub struct CycleTrace<'a> {
    pub cycle_index: u64,
    pub effective_mean: f64,
    pub report: &'a HeraldReport,
    pub stored_in: usize,
    pub plan: &'a CyclePlan,
}

impl CycleTrace<'_> {
    pub fn heralds_in(&self) -> usize {
        self.report.herald_count()
    }

    pub fn conserves(&self) -> bool {
        self.plan.conserves(self.heralds_in(), self.stored_in)
    }
}

#[derive(Debug, Clone)]
pub struct Simulator {
    config: SimConfig,
    topology: RegisterTopology,
}

impl Simulator {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let topology = config.topology()?;
        Ok(Self { config, topology })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn topology(&self) -> &RegisterTopology {
        &self.topology
    }

    /// One pump cycle: sample, herald, plan. Returns the report with the plan
    /// so callers can audit it.
    pub fn run_cycle<R: rand::Rng + ?Sized>(
        &self,
        state: &StorageState,
        effective_mean: f64,
        cycle_index: u64,
        rng: &mut R,
    ) -> Result<(HeraldReport, CyclePlan)> {
        let batch = sample_cycle_emissions(self.config.source_count, effective_mean, cycle_index, rng)?;
        let report = herald(&batch);
        let plan = plan_cycle(&self.topology, &report, state, self.config.multiple)?;
        Ok((report, plan))
    }

    pub fn run(&self, stream: u64) -> Result<SimMetrics> {
        self.run_with(stream, |_| {})
    }

    /// Runs all cycles from empty storage on stream `stream` of the config
    /// seed, calling `observer` after every cycle.
    pub fn run_with(&self, stream: u64, mut observer: impl FnMut(&CycleTrace<'_>)) -> Result<SimMetrics> {
        let cfg = &self.config;
        let capacity = cfg.capacity();
        let mut rng = rng_for(cfg.seed, stream);
        let mut state = StorageState::empty(capacity);
        let mut m = SimMetrics { cycles: cfg.cycles, multiple: cfg.multiple, ..Default::default() };

        let batches = STD_ERROR_BATCHES;
        let mut batch_slots = vec![0u64; batches as usize];
        let mut batch_lack = vec![0u64; batches as usize];
        let mut batch_multi = vec![0u64; batches as usize];

        for cycle in 0..cfg.cycles {
            let mean = apply_feedback(cfg.feedback, state.level() as u32, capacity, cfg.mean_pairs);
            let stored_in = state.level();
            let (report, plan) = self.run_cycle(&state, mean, cycle, &mut rng)?;

            let trace = CycleTrace { cycle_index: cycle, effective_mean: mean, report: &report, stored_in, plan: &plan };
            if !trace.conserves() {
                m.conservation_violations += 1;
            }
            observer(&trace);

            m.herald_count += report.herald_count() as u64;
            m.lack_count += u64::from(plan.lack_count);
            m.multi_count += u64::from(plan.multi_count);
            m.filled_count += u64::from(plan.filled());
            m.discarded_count += u64::from(plan.discarded);
            m.storage_level_sum += plan.storage_out.level() as u64;

            let b = (u128::from(cycle) * u128::from(batches) / u128::from(cfg.cycles)) as usize;
            batch_slots[b] += u64::from(cfg.multiple);
            batch_lack[b] += u64::from(plan.lack_count);
            batch_multi[b] += u64::from(plan.multi_count);

            state = plan.storage_out;
        }
        m.total_slots = cfg.cycles * u64::from(cfg.multiple);
        m.final_storage = state.level() as u64;
        if cfg.cycles >= 2 * batches {
            m.lack_std_error = Some(batch_std_error(&batch_lack, &batch_slots));
            m.multi_std_error = Some(batch_std_error(&batch_multi, &batch_slots));
        }
        Ok(m)
    }
}

fn batch_std_error(counts: &[u64], slots: &[u64]) -> f64 {
    let rates: Vec<f64> = counts.iter().zip(slots).map(|(&c, &s)| c as f64 / s as f64).collect();
    let n = rates.len() as f64;
    let mean = rates.iter().sum::<f64>() / n;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}

/// Runs `config` on stream 0 of its seed.
pub fn run_simulation(config: &SimConfig) -> Result<SimMetrics> {
    Simulator::new(config.clone())?.run(0)
}
