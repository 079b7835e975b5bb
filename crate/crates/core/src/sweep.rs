//! Parameter sweeps and their CSV / gnuplot output.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::oracle::rates_at;
use crate::simulator::{SimConfig, SimMetrics, Simulator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    /// Mean pair number per source.
    Power,
    /// Frequency multiple.
    Multiple,
    /// Number of sources.
    Size,
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(Self::Power),
            "multiple" => Ok(Self::Multiple),
            "size" => Ok(Self::Size),
            other => Err(domain(format!("unknown sweep parameter `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Values(Vec<f64>),
    /// `steps` evenly spaced points from `from` to `to` inclusive.
    Range { from: f64, to: f64, steps: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.clone(),
            Grid::Range { from, steps: 1, .. } => vec![*from],
            Grid::Range { from, to, steps } => {
                let step = (to - from) / (*steps as f64 - 1.0);
                (0..*steps).map(|i| if i + 1 == *steps { *to } else { from + step * i as f64 }).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Engine {
    #[default]
    MonteCarlo,
    Oracle,
    Both,
}

impl Engine {
    fn tags(self) -> &'static [EngineTag] {
        match self {
            Engine::MonteCarlo => &[EngineTag::MonteCarlo],
            Engine::Oracle => &[EngineTag::Oracle],
            Engine::Both => &[EngineTag::MonteCarlo, EngineTag::Oracle],
        }
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monte_carlo" | "mc" => Ok(Self::MonteCarlo),
            "oracle" => Ok(Self::Oracle),
            "both" => Ok(Self::Both),
            other => Err(domain(format!("unknown engine `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineTag {
    MonteCarlo,
    Oracle,
}

impl EngineTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineTag::MonteCarlo => "monte_carlo",
            EngineTag::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub grid: Grid,
    pub base: SimConfig,
    pub engine: Engine,
}

/// One output record. Counts are totals over `cycles`; oracle rows carry
/// expected values.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub param: f64,
    pub lack_rate: Option<f64>,
    pub multi_rate: Option<f64>,
    pub relative_multi_rate: Option<f64>,
    pub filled: f64,
    pub discarded: f64,
    pub mean_storage: Option<f64>,
    pub engine: EngineTag,
    pub seed: u64,
    pub cycles: u64,
}

impl MetricRow {
    pub fn from_metrics(param: f64, config: &SimConfig, m: &SimMetrics) -> Self {
        Self {
            param,
            lack_rate: m.lack_rate(),
            multi_rate: m.multi_rate(),
            relative_multi_rate: m.relative_multi_rate(),
            filled: m.filled_count as f64,
            discarded: m.discarded_count as f64,
            mean_storage: m.mean_storage_level(),
            engine: EngineTag::MonteCarlo,
            seed: config.seed,
            cycles: config.cycles,
        }
    }

    /// Exact stationary rates for the all-interior version of `config`.
    pub fn oracle(param: f64, config: &SimConfig) -> Result<Self> {
        if !config.feedback.is_off() {
            return Err(domain("the exact oracle does not model feedback; use feedback=off"));
        }
        config.validate()?;
        let r = rates_at(config.source_count, config.multiple, config.step_count, config.mean_pairs)?;
        let cycles = config.cycles as f64;
        Ok(Self {
            param,
            lack_rate: Some(r.lack_rate),
            multi_rate: Some(r.multi_rate),
            relative_multi_rate: Some(r.relative_multi_rate()),
            filled: (1.0 - r.lack_rate) * f64::from(config.multiple) * cycles,
            discarded: r.mean_discarded * cycles,
            mean_storage: Some(r.mean_storage),
            engine: EngineTag::Oracle,
            seed: config.seed,
            cycles: config.cycles,
        })
    }
}

fn integral(value: f64, what: &str) -> Result<u64> {
    if value.fract() != 0.0 || value < 1.0 || !value.is_finite() {
        return Err(domain(format!("{what} must be a positive integer, got {value}")));
    }
    Ok(value as u64)
}

/// Base config with the swept parameter set to `value`.
pub fn point_config(parameter: SweepParameter, base: &SimConfig, value: f64) -> Result<SimConfig> {
    let mut cfg = base.clone();
    match parameter {
        SweepParameter::Power => cfg.mean_pairs = value,
        SweepParameter::Multiple => cfg.multiple = u32::try_from(integral(value, "multiple")?).map_err(|_| domain("multiple too large"))?,
        SweepParameter::Size => cfg.source_count = integral(value, "size")? as usize,
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs every grid point, in parallel, and returns rows in grid order. Point
/// `i` uses stream `i` of the base seed, so output does not depend on thread
/// count.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<MetricRow>> {
    let points = spec.grid.points();
    if points.is_empty() {
        return Err(domain("sweep grid is empty"));
    }
    let configs = points
        .iter()
        .map(|&v| point_config(spec.parameter, &spec.base, v))
        .collect::<Result<Vec<_>>>()?;
    let per_point: Vec<Result<Vec<MetricRow>>> = configs
        .par_iter()
        .zip(points.par_iter())
        .enumerate()
        .map(|(i, (cfg, &value))| {
            spec.engine
                .tags()
                .iter()
                .map(|tag| match tag {
                    EngineTag::MonteCarlo => {
                        let metrics = Simulator::new(cfg.clone())?.run(i as u64)?;
                        Ok(MetricRow::from_metrics(value, cfg, &metrics))
                    }
                    EngineTag::Oracle => MetricRow::oracle(value, cfg),
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "param,lack_rate,multi_rate,relative_multi_rate,filled,discarded,mean_storage,engine,seed,cycles";

/// Formats `x` with six significant digits in plain decimal notation. Whole
/// numbers are written as integers.
pub fn format_sig6(x: f64) -> String {
    if !x.is_finite() {
        return "NA".into();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = 5 - magnitude;
    if decimals <= 0 {
        let scale = 10f64.powi(-decimals);
        return format!("{}", ((x / scale).round() * scale) as i64);
    }
    format!("{:.*}", decimals as usize, x)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), format_sig6)
}

pub fn emit_csv(rows: &[MetricRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            format_sig6(r.param),
            opt(r.lack_rate),
            opt(r.multi_rate),
            opt(r.relative_multi_rate),
            format_sig6(r.filled),
            format_sig6(r.discarded),
            opt(r.mean_storage),
            r.engine.as_str(),
            r.seed,
            r.cycles
        );
    }
    out
}

/// Two-column blocks (`param value`), one per engine and error series,
/// separated by two blank lines so gnuplot can address them with `index`.
pub fn emit_gnuplot(rows: &[MetricRow]) -> String {
    let mut out = String::new();
    let mut first = true;
    for tag in [EngineTag::MonteCarlo, EngineTag::Oracle] {
        let series: Vec<&MetricRow> = rows.iter().filter(|r| r.engine == tag).collect();
        if series.is_empty() {
            continue;
        }
        for (name, get) in [
            ("lack_rate", (|r: &MetricRow| r.lack_rate) as fn(&MetricRow) -> Option<f64>),
            ("multi_rate", |r: &MetricRow| r.multi_rate),
        ] {
            if !first {
                out.push_str("\n\n");
            }
            first = false;
            let _ = writeln!(out, "# {} {}", tag.as_str(), name);
            for r in &series {
                let _ = writeln!(out, "{} {}", format_sig6(r.param), opt(get(r)));
            }
        }
    }
    out
}
