//! Flat `key = value` run configuration with command-line overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Equilibrium,
    SingleScan,
    InitialScan,
    DoubleTimeScan,
    MiddleScan,
    Spectral,
    Loschmidt,
    Validate,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Equilibrium,
        Scenario::SingleScan,
        Scenario::InitialScan,
        Scenario::DoubleTimeScan,
        Scenario::MiddleScan,
        Scenario::Spectral,
        Scenario::Loschmidt,
        Scenario::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Equilibrium => "equilibrium",
            Scenario::SingleScan => "single-scan",
            Scenario::InitialScan => "initial-scan",
            Scenario::DoubleTimeScan => "double-time-scan",
            Scenario::MiddleScan => "middle-scan",
            Scenario::Spectral => "spectral",
            Scenario::Loschmidt => "loschmidt",
            Scenario::Validate => "validate",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown scenario '{s}'")))
    }

    /// What the grid sweeps.
    pub fn swept(self) -> Option<&'static str> {
        match self {
            Scenario::Equilibrium => Some("h"),
            Scenario::SingleScan | Scenario::Spectral | Scenario::Loschmidt => Some("hf"),
            Scenario::InitialScan => Some("hi"),
            Scenario::DoubleTimeScan => Some("spend_time"),
            Scenario::MiddleScan => Some("hm"),
            Scenario::Validate => None,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiddleMode {
    /// Middle stage fully dephased; `T` plays no role.
    Dephased,
    /// `T` maximizing each correlation measure over `[0, t_max]`.
    ArgmaxT,
}

impl MiddleMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dephased" => Ok(MiddleMode::Dephased),
            "argmax-T" | "argmax-t" => Ok(MiddleMode::ArgmaxT),
            _ => Err(CliError::Config(format!("mode must be 'dephased' or 'argmax-T', got '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MiddleMode::Dephased => "dephased",
            MiddleMode::ArgmaxT => "argmax-T",
        }
    }
}

/// Union of `START:STOP:STEP` segments, inclusive of both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    segments: Vec<(f64, f64, f64)>,
}

impl Grid {
    pub fn parse(spec: &str) -> Result<Self> {
        let mut segments = Vec::new();
        for seg in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let parts: Vec<&str> = seg.split(':').collect();
            let bad = || CliError::Config(format!("grid segment '{seg}' is not START:STOP:STEP"));
            if parts.len() != 3 {
                return Err(bad());
            }
            let nums: Vec<f64> = parts
                .iter()
                .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            let (start, stop, step) = (nums[0], nums[1], nums[2]);
            if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
                return Err(CliError::Config(format!(
                    "grid segment '{seg}' needs finite START <= STOP and STEP > 0"
                )));
            }
            segments.push((start, stop, step));
        }
        if segments.is_empty() {
            return Err(CliError::Config("empty grid".into()));
        }
        Ok(Self { segments })
    }

    /// Sorted points with duplicates (segment joints) removed.
    pub fn points(&self) -> Vec<f64> {
        let mut pts = Vec::new();
        for &(start, stop, step) in &self.segments {
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            for i in 0..=count {
                // integer multiples keep grid values free of accumulated drift
                let x = start + i as f64 * step;
                pts.push((x * 1e12).round() / 1e12);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        pts
    }
}

const KNOWN_KEYS: [&str; 15] = [
    "scenario", "j", "delta", "n_sites", "hi", "hm", "hf", "spend_time", "grid", "mode", "out", "jobs",
    "t_max", "t_step", "critical_times",
];

/// Raw settings: file values first, then overrides.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{origin}:{}: expected 'key = value'", lineno + 1))
            })?;
            s.set(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("{origin}:{}: {e}", lineno + 1)))?;
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("unknown key '{key}'")));
        }
        self.values.insert(key, value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Settings that define the data, in key order; output path and thread
    /// count are excluded so they cannot change the CSV bytes.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.values
            .iter()
            .filter(|(k, _)| !matches!(k.as_str(), "out" | "jobs"))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Config(format!("{key}: '{v}' is not a finite number")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    let list: Vec<f64> = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(key, s))
        .collect::<Result<_>>()?;
    if list.is_empty() {
        return Err(CliError::Config(format!("{key}: empty list")));
    }
    Ok(list)
}

/// Validated configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub scenario: Scenario,
    pub j: f64,
    pub delta: f64,
    pub n_sites: usize,
    pub hi: Vec<f64>,
    pub hm: Vec<f64>,
    pub hf: Vec<f64>,
    pub spend_time: Vec<f64>,
    pub grid: Option<Grid>,
    pub mode: MiddleMode,
    pub t_max: f64,
    pub t_step: f64,
    pub critical_times: usize,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub settings: Settings,
}

pub const DEFAULT_DELTA: f64 = 0.5;
pub const DEFAULT_SITES: usize = 2000;

impl ScanConfig {
    pub fn from_settings(scenario: Scenario, settings: Settings) -> Result<Self> {
        if let Some(s) = settings.get("scenario") {
            let named = Scenario::parse(s)?;
            if named != scenario {
                return Err(CliError::Config(format!(
                    "config is for '{named}', but '{scenario}' was requested"
                )));
            }
        }
        let f = |key: &str, default: f64| settings.get(key).map_or(Ok(default), |v| parse_f64(key, v));
        let list = |key: &str| settings.get(key).map_or(Ok(Vec::new()), |v| parse_list(key, v));
        let count = |key: &str, default: usize| {
            settings.get(key).map_or(Ok(default), |v| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Config(format!("{key}: '{v}' is not a non-negative integer")))
            })
        };

        let cfg = Self {
            scenario,
            j: f("j", 1.0)?,
            delta: f("delta", DEFAULT_DELTA)?,
            n_sites: count("n_sites", DEFAULT_SITES)?,
            hi: list("hi")?,
            hm: list("hm")?,
            hf: list("hf")?,
            spend_time: list("spend_time")?,
            grid: settings.get("grid").map(Grid::parse).transpose()?,
            mode: settings.get("mode").map_or(Ok(MiddleMode::Dephased), MiddleMode::parse)?,
            t_max: f("t_max", 10.0)?,
            t_step: f("t_step", 0.01)?,
            critical_times: count("critical_times", 3)?,
            out: settings.get("out").map(PathBuf::from),
            jobs: settings.get("jobs").map(|_| count("jobs", 0)).transpose()?,
            settings,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn require(&self, ok: bool, what: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(CliError::Config(format!("{} needs {what}", self.scenario)))
        }
    }

    fn check(&self) -> Result<()> {
        xyquench::ChainParams::with_coupling(self.j, self.delta, 0.0, self.n_sites)
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.jobs == Some(0) {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        if !(self.t_max > 0.0 && self.t_step > 0.0 && self.t_step <= self.t_max) {
            return Err(CliError::Config("need 0 < t_step <= t_max".into()));
        }
        if self.spend_time.iter().any(|&t| t < 0.0) {
            return Err(CliError::Config("spend_time must be non-negative".into()));
        }
        if self.scenario.swept().is_some() {
            self.require(self.grid.is_some(), "a grid")?;
        }
        let grid_nonneg = self.grid.as_ref().is_none_or(|g| g.points()[0] >= 0.0);
        match self.scenario {
            Scenario::SingleScan | Scenario::Spectral => self.require(!self.hi.is_empty(), "hi"),
            Scenario::InitialScan => self.require(!self.hf.is_empty(), "hf"),
            Scenario::DoubleTimeScan => {
                self.require(!self.hi.is_empty() && !self.hm.is_empty() && !self.hf.is_empty(), "hi, hm and hf")?;
                self.require(grid_nonneg, "a non-negative time grid")
            }
            Scenario::MiddleScan => self.require(!self.hi.is_empty() && !self.hf.is_empty(), "hi and hf"),
            Scenario::Loschmidt => {
                self.require(!self.hi.is_empty(), "hi")?;
                self.require(
                    self.hm.is_empty() == self.spend_time.is_empty(),
                    "both hm and spend_time for a double quench, or neither",
                )
            }
            Scenario::Equilibrium | Scenario::Validate => Ok(()),
        }
    }

    pub fn grid_points(&self) -> Vec<f64> {
        self.grid.as_ref().map(Grid::points).unwrap_or_default()
    }
}
