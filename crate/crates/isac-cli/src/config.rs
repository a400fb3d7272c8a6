//! Run configuration: TOML text with one table per command.
//!
//! Every key is optional. Missing keys fall back to the selected preset.
//! dB-valued keys (`power_dbm`, `rician_k_db`) are converted to linear
//! units here and nowhere else.

use std::path::Path;

use isac_core::allocate::{NoiseCoupling, ObjectiveMode, TimeMode};
use isac_core::gaussian::ScalarScenario;
use isac_core::numerics::{DEFAULT_ORDER, MAX_ORDER};
use serde::Deserialize;

use crate::error::CliError;

/// `10^{x/10}`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

/// Absolute scale of the default scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Preset {
    /// 10 dBm = 0.01 W transmit power against noise 0.1.
    #[default]
    #[value(name = "tableI-dbm")]
    TableIDbm,
    /// Power 10 against noise 0.1 (20 dB link SNR).
    #[value(name = "tableI-normalized")]
    TableINormalized,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Self::TableIDbm => "tableI-dbm",
            Self::TableINormalized => "tableI-normalized",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "tableI-dbm" => Some(Self::TableIDbm),
            "tableI-normalized" => Some(Self::TableINormalized),
            _ => None,
        }
    }

    fn power(&self) -> f64 {
        match self {
            Self::TableIDbm => dbm_to_watts(10.0),
            Self::TableINormalized => 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    /// `H = I` (rectangular identity for unequal dimensions).
    Identity,
    /// One i.i.d. `CN(0, 1)` draw from the run seed.
    Rayleigh,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub c_min: f64,
    pub c_max: f64,
    pub c_step: f64,
    pub rician_k: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierConfig {
    pub budgets: Vec<f64>,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MimoConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub channel: ChannelKind,
    pub c_min: f64,
    pub c_max: f64,
    pub c_step: f64,
    pub snr_min_db: f64,
    pub snr_max_db: f64,
    pub snr_step_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocateConfig {
    pub lambda: f64,
    pub alpha0: f64,
    pub c_ai: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub mode: ObjectiveMode,
    pub coupling: NoiseCoupling,
    pub time: TimeMode,
    pub total_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub alpha: f64,
    pub mc_samples: u64,
}

/// Fully resolved configuration in linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    pub seed: u64,
    pub quadrature_order: usize,
    pub scenario: ScalarScenario,
    /// Recorded for provenance; no computation reads them.
    pub carrier_ghz: f64,
    pub blocklength: u64,
    pub sweep: SweepConfig,
    pub frontier: FrontierConfig,
    pub mimo: MimoConfig,
    pub allocate: AllocateConfig,
    pub verify: VerifyConfig,
}

impl RunConfig {
    pub fn preset(preset: Preset) -> Self {
        Self {
            preset,
            seed: 20_240_601,
            quadrature_order: DEFAULT_ORDER,
            scenario: ScalarScenario {
                power: preset.power(),
                gain_c: 1.0,
                gain_s: 1.0,
                noise_c: 0.1,
                noise_s: 0.1,
                prior_var: 1.0,
            },
            carrier_ghz: 28.0,
            blocklength: 10_000,
            sweep: SweepConfig { c_min: 0.0, c_max: 8.0, c_step: 0.25, rician_k: db_to_linear(6.0) },
            frontier: FrontierConfig { budgets: vec![0.5, 2.0, 4.0, 6.0, f64::INFINITY], points: 201 },
            mimo: MimoConfig {
                n_t: 2,
                n_r: 2,
                channel: ChannelKind::Identity,
                c_min: 0.5,
                c_max: 8.0,
                c_step: 0.5,
                snr_min_db: -5.0,
                snr_max_db: 25.0,
                snr_step_db: 1.0,
            },
            allocate: AllocateConfig {
                lambda: 0.3,
                alpha0: 0.4,
                c_ai: 4.0,
                max_iter: 50,
                tol: 1e-9,
                mode: ObjectiveMode::RatePenalty,
                coupling: NoiseCoupling::TotalPower,
                time: TimeMode::Fixed,
                total_time: 1.0,
            },
            verify: VerifyConfig { alpha: 0.6, mc_samples: 1_000_000 },
        }
    }

    /// Reads `path`, or the preset defaults when `path` is `None`.
    /// `preset_override` wins over a `preset` key in the file.
    pub fn load(path: Option<&Path>, preset_override: Option<Preset>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::preset(preset_override.unwrap_or_default())),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                Self::from_toml(&text, preset_override)
            }
        }
    }

    pub fn from_toml(text: &str, preset_override: Option<Preset>) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of_offset(text, s.start)).unwrap_or(0);
            CliError::Config { line, field: String::new(), message: e.message().to_string() }
        })?;
        let at = |section: &str, key: &str, message: &str| CliError::Config {
            line: line_of_key(text, section, key),
            field: if section.is_empty() { key.to_string() } else { format!("{section}.{key}") },
            message: message.to_string(),
        };

        let preset = match (preset_override, raw.preset.as_deref()) {
            (Some(p), _) => p,
            (None, None) => Preset::default(),
            (None, Some(name)) => {
                Preset::parse(name).ok_or_else(|| at("", "preset", "expected tableI-dbm or tableI-normalized"))?
            }
        };
        let mut cfg = Self::preset(preset);
        if let Some(s) = raw.seed {
            cfg.seed = s;
        }
        if let Some(m) = raw.quadrature_order {
            if m == 0 || m > MAX_ORDER {
                return Err(at("", "quadrature_order", "must lie in 1..=128"));
            }
            cfg.quadrature_order = m;
        }

        let sc = raw.scenario.unwrap_or_default();
        let s = &mut cfg.scenario;
        match (sc.power, sc.power_dbm) {
            (Some(_), Some(_)) => return Err(at("scenario", "power", "give power or power_dbm, not both")),
            (Some(p), None) => s.power = p,
            (None, Some(dbm)) => s.power = dbm_to_watts(dbm),
            (None, None) => {}
        }
        if !(s.power > 0.0) || !s.power.is_finite() {
            let key = if sc.power_dbm.is_some() { "power_dbm" } else { "power" };
            return Err(at("scenario", key, "power must be positive"));
        }
        for (key, value, slot, allow_zero) in [
            ("gain_c", sc.gain_c, &mut s.gain_c, true),
            ("gain_s", sc.gain_s, &mut s.gain_s, true),
            ("noise_c", sc.noise_c, &mut s.noise_c, false),
            ("noise_s", sc.noise_s, &mut s.noise_s, false),
            ("prior_var", sc.prior_var, &mut s.prior_var, false),
        ] {
            if let Some(v) = value {
                let ok = v.is_finite() && (v > 0.0 || (allow_zero && v == 0.0));
                if !ok {
                    return Err(at("scenario", key, if allow_zero { "must be non-negative" } else { "must be positive" }));
                }
                *slot = v;
            }
        }
        if let Some(v) = sc.carrier_ghz {
            cfg.carrier_ghz = v;
        }
        if let Some(v) = sc.blocklength {
            cfg.blocklength = v;
        }

        if let Some(g) = raw.gaussian_sweep {
            let w = &mut cfg.sweep;
            set(&mut w.c_min, g.c_min);
            set(&mut w.c_max, g.c_max);
            set(&mut w.c_step, g.c_step);
            if let Some(k) = g.rician_k_db {
                w.rician_k = db_to_linear(k);
            }
            check_grid(w.c_min, w.c_max, w.c_step, true).map_err(|m| at("gaussian_sweep", "c_step", m))?;
        }

        if let Some(f) = raw.frontier {
            if let Some(b) = f.budgets {
                if b.is_empty() || b.iter().any(|&c| !(c > 0.0)) {
                    return Err(at("frontier", "budgets", "budgets must be positive (inf allowed)"));
                }
                cfg.frontier.budgets = b;
            }
            if let Some(n) = f.points {
                if n < 2 {
                    return Err(at("frontier", "points", "need at least 2 points"));
                }
                cfg.frontier.points = n;
            }
        }

        if let Some(m) = raw.mimo_surface {
            let w = &mut cfg.mimo;
            set(&mut w.n_t, m.n_t);
            set(&mut w.n_r, m.n_r);
            if w.n_t == 0 || w.n_r == 0 || w.n_t > 64 || w.n_r > 64 {
                return Err(at("mimo_surface", "n_t", "antenna counts must lie in 1..=64"));
            }
            if let Some(ch) = m.channel.as_deref() {
                w.channel = match ch {
                    "identity" => ChannelKind::Identity,
                    "rayleigh" => ChannelKind::Rayleigh,
                    _ => return Err(at("mimo_surface", "channel", "expected identity or rayleigh")),
                };
            }
            set(&mut w.c_min, m.c_min);
            set(&mut w.c_max, m.c_max);
            set(&mut w.c_step, m.c_step);
            set(&mut w.snr_min_db, m.snr_min_db);
            set(&mut w.snr_max_db, m.snr_max_db);
            set(&mut w.snr_step_db, m.snr_step_db);
            check_grid(w.c_min, w.c_max, w.c_step, false).map_err(|e| at("mimo_surface", "c_step", e))?;
            check_grid(w.snr_min_db, w.snr_max_db, w.snr_step_db, true)
                .map_err(|e| at("mimo_surface", "snr_step_db", e))?;
        }

        if let Some(a) = raw.allocate {
            let w = &mut cfg.allocate;
            set(&mut w.lambda, a.lambda);
            set(&mut w.alpha0, a.alpha0);
            set(&mut w.c_ai, a.c_ai);
            set(&mut w.max_iter, a.max_iter);
            set(&mut w.tol, a.tol);
            set(&mut w.total_time, a.total_time);
            if !(0.0..=1.0).contains(&w.lambda) {
                return Err(at("allocate", "lambda", "must lie in [0, 1]"));
            }
            if !(0.0..=1.0).contains(&w.alpha0) {
                return Err(at("allocate", "alpha0", "must lie in [0, 1]"));
            }
            if !(w.c_ai >= 0.0) {
                return Err(at("allocate", "c_ai", "must be non-negative"));
            }
            if !(w.tol > 0.0) {
                return Err(at("allocate", "tol", "must be positive"));
            }
            if !(w.total_time > 0.0) {
                return Err(at("allocate", "total_time", "must be positive"));
            }
            if let Some(mode) = a.mode.as_deref() {
                w.mode = match mode {
                    "rate-penalty" => ObjectiveMode::RatePenalty,
                    "weighted" => ObjectiveMode::Weighted,
                    _ => return Err(at("allocate", "mode", "expected rate-penalty or weighted")),
                };
            }
            if let Some(c) = a.coupling.as_deref() {
                w.coupling = match c {
                    "total-power" => NoiseCoupling::TotalPower,
                    "per-task" => NoiseCoupling::PerTask,
                    _ => return Err(at("allocate", "coupling", "expected total-power or per-task")),
                };
            }
            if let Some(f) = a.comm_time_fraction {
                if !(0.0..=1.0).contains(&f) {
                    return Err(at("allocate", "comm_time_fraction", "must lie in [0, 1]"));
                }
                w.time = TimeMode::Energy { comm_fraction: f };
            }
        }

        if let Some(v) = raw.verify {
            set(&mut cfg.verify.alpha, v.alpha);
            set(&mut cfg.verify.mc_samples, v.mc_samples);
            if !(0.0..=1.0).contains(&cfg.verify.alpha) {
                return Err(at("verify", "alpha", "must lie in [0, 1]"));
            }
            if cfg.verify.mc_samples == 0 {
                return Err(at("verify", "mc_samples", "must be at least 1"));
            }
        }
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn check_grid(lo: f64, hi: f64, step: f64, allow_nonpositive: bool) -> Result<(), &'static str> {
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err("grid needs finite min <= max and a positive step");
    }
    if !allow_nonpositive && lo <= 0.0 {
        return Err("grid must start above zero");
    }
    Ok(())
}

/// `lo, lo + step, …` up to `hi` inclusive (with a half-step allowance).
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of `key = …` inside `[section]` (top level when `section` is empty).
fn line_of_key(text: &str, section: &str, key: &str) -> usize {
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            current = name.trim().to_string();
            continue;
        }
        if current == section {
            if let Some((k, _)) = t.split_once('=') {
                if k.trim() == key {
                    return i + 1;
                }
            }
        }
    }
    0
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Option<String>,
    seed: Option<u64>,
    quadrature_order: Option<usize>,
    scenario: Option<RawScenario>,
    gaussian_sweep: Option<RawSweep>,
    frontier: Option<RawFrontier>,
    mimo_surface: Option<RawMimo>,
    allocate: Option<RawAllocate>,
    verify: Option<RawVerify>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    power: Option<f64>,
    power_dbm: Option<f64>,
    gain_c: Option<f64>,
    gain_s: Option<f64>,
    noise_c: Option<f64>,
    noise_s: Option<f64>,
    prior_var: Option<f64>,
    carrier_ghz: Option<f64>,
    blocklength: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    c_min: Option<f64>,
    c_max: Option<f64>,
    c_step: Option<f64>,
    rician_k_db: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrontier {
    budgets: Option<Vec<f64>>,
    points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMimo {
    n_t: Option<usize>,
    n_r: Option<usize>,
    channel: Option<String>,
    c_min: Option<f64>,
    c_max: Option<f64>,
    c_step: Option<f64>,
    snr_min_db: Option<f64>,
    snr_max_db: Option<f64>,
    snr_step_db: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAllocate {
    lambda: Option<f64>,
    alpha0: Option<f64>,
    c_ai: Option<f64>,
    max_iter: Option<usize>,
    tol: Option<f64>,
    mode: Option<String>,
    coupling: Option<String>,
    comm_time_fraction: Option<f64>,
    total_time: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVerify {
    alpha: Option<f64>,
    mc_samples: Option<u64>,
}
