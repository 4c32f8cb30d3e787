//! Experiment configuration: a line-oriented `key = value` file.
//!
//! Blank lines and text after `#` are ignored. Every key is optional and
//! falls back to the default listed in [`KEYS`]; unknown or repeated keys
//! are errors. Values are checked against the invariants of the type that
//! owns them before anything is computed.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use cachenet_core::montecarlo::{Estimator, HopModel};
use cachenet_core::optimizer::log_space;
use cachenet_core::{Association, CacheEconomics, Error as CoreError, NetworkParams, QuadratureSpec, SimulationSpec};
use thiserror::Error;

/// One documented configuration key.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub unit: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

const fn key(name: &'static str, unit: &'static str, default: &'static str, help: &'static str) -> Key {
    Key {
        name,
        unit,
        default,
        help,
    }
}

/// Every accepted key, in the order the effective configuration is written.
pub const KEYS: &[Key] = &[
    key("experiment", "", "", "sweep_hit | feasible_set | sweep_density_ase | sweep_density_ee | optimize | validate; the command line argument takes precedence"),
    key("lambda", "SCs/m²", "0.01", "SC density for sweep_hit and the trial dump"),
    key("alpha", "", "4", "pathloss exponent, > 2"),
    key("theta", "", "1", "SINR threshold, >= 0"),
    key("sigma2", "W", "0", "noise power"),
    key("rho_sc", "W", "0.5", "SC transmit power"),
    key("rho_bh", "W", "1", "BH transmit power"),
    key("beta_ut", "", "0.5", "UT link distance is beta_ut/(2 sqrt(lambda))"),
    key("beta_bh", "", "1", "BH link distance is beta_bh/(2 sqrt(lambda)); > beta_ut"),
    key("catalog_size", "files", "10000000", "number of files F"),
    key("storage_size", "files/SC", "0", "storage S used by the trial dump; hit probability is S/F"),
    key("s_max", "files/SC", "5000000", "largest storage per SC, <= catalog_size"),
    key("lambda_min", "SCs/m²", "0.0001", "smallest deployable SC density"),
    key("lambda_max", "SCs/m²", "0.01", "largest deployable SC density"),
    key("price_sc", "$/SC", "250", "price of one SC"),
    key("price_storage", "$/file", "0.005", "price of storing one file at one SC"),
    key("budget", "$/m²", "1, 2.5, 5", "comma-separated monetary budgets"),
    key("e_hit", "J/file", "1", "energy to deliver a cached file"),
    key("e_miss", "J/file", "10", "energy to deliver a file through the BH; >= e_hit"),
    key("p_hit_start", "", "0", "first hit probability of sweep_hit"),
    key("p_hit_stop", "", "1", "last hit probability of sweep_hit"),
    key("p_hit_points", "", "21", "number of sweep_hit points"),
    key("p_hit_scale", "", "lin", "lin | log spacing of sweep_hit"),
    key("density_start", "SCs/m²", "0.0001", "lowest density of the density sweeps, clipped to the budget's feasible range"),
    key("density_stop", "SCs/m²", "0.01", "highest density of the density sweeps, clipped likewise"),
    key("density_points", "", "50", "number of density sweep points per budget"),
    key("density_scale", "", "log", "lin | log spacing of the density sweeps"),
    key("feasible_points", "", "100", "points per budget curve in feasible_set"),
    key("grid_resolution", "", "512", "budget-line grid used to verify the optimizer"),
    key("quad_nodes", "", "64", "initial trapezoid nodes of the BH angle average"),
    key("quad_tolerance", "", "0.000000001", "relative stopping tolerance of the angle average"),
    key("quad_doublings", "", "12", "maximum node doublings of the angle average"),
    key("validate_lambda", "SCs/m²", "0.0001, 0.001, 0.01", "densities of the validation grid"),
    key("validate_p_hit", "", "0, 0.25, 0.5, 0.75, 1", "hit probabilities of the validation grid"),
    key("validate_theta", "", "0.5, 1, 2", "SINR thresholds of the validation grid"),
    key("pass_band", "std errors", "3", "a validation cell passes within this many standard errors"),
    key("pass_fraction", "", "0.95", "required share of passing cells per policy"),
    key("trials", "", "1000000", "Monte Carlo trials per cell"),
    key("seed", "", "1", "Monte Carlo seed"),
    key("truncation_fraction", "", "0.0001", "share of mean interference left outside the simulation disk"),
    key("estimator", "", "indicator", "indicator | conditional"),
    key("hop_model", "", "independent", "independent | correlated backhaul interference field"),
    key("tail_compensation", "", "true", "add the mean interference from outside the simulation disk"),
    key("out_dir", "", "out", "output directory"),
];

/// Text for `--help`: every key with its unit and default.
pub fn keys_help() -> String {
    let width = KEYS.iter().map(|k| k.name.len()).max().unwrap_or(0);
    let mut out = String::from("Configuration keys (`key = value`, `#` starts a comment):\n");
    for k in KEYS {
        let unit = if k.unit.is_empty() {
            String::new()
        } else {
            format!(" [{}]", k.unit)
        };
        let default = if k.default.is_empty() { "unset" } else { k.default };
        out.push_str(&format!(
            "  {:width$}  {}{} (default: {})\n",
            k.name, k.help, unit, default
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{key}`")]
    UnknownKey { key: String },
    #[error("`{key}` is set more than once")]
    Duplicate { key: String },
    #[error("`{key}`: cannot parse `{value}` as {expected}")]
    Value {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("`{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error("config file {path} is empty")]
    Empty { path: String },
    #[error("cannot read config file {path}: {message}")]
    Read { path: String, message: String },
}

impl ConfigError {
    /// The offending key, when the error concerns one.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::UnknownKey { key }
            | ConfigError::Duplicate { key }
            | ConfigError::Value { key, .. }
            | ConfigError::Invalid { key, .. } => Some(key),
            _ => None,
        }
    }

    fn invalid(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

impl From<CoreError> for ConfigError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Domain {
                name,
                value,
                requirement,
            } => ConfigError::invalid(name, format!("{value} violates {requirement}")),
            CoreError::EnergyOrdering { .. } => ConfigError::invalid("e_miss", e.to_string()),
            other => ConfigError::invalid("config", other.to_string()),
        }
    }
}

/// Raw settings in the order they were given; later layers replace values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<&'static str, String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Settings, ConfigError> {
        let mut settings = Settings::default();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: index + 1,
                    text: raw.trim().to_string(),
                });
            };
            let name = lookup(k.trim())?;
            if settings.values.insert(name, v.trim().to_string()).is_some() {
                return Err(ConfigError::Duplicate { key: name.to_string() });
            }
        }
        Ok(settings)
    }

    /// Sets or replaces one key, as command-line overrides do.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        let name = lookup(key)?;
        self.values.insert(name, value.into());
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn get(&self, key: &'static str) -> &str {
        match self.values.get(key) {
            Some(v) => v,
            None => default_of(key),
        }
    }

    fn number<T: FromStr>(&self, key: &'static str, expected: &'static str) -> Result<T, ConfigError> {
        let raw = self.get(key);
        raw.parse().map_err(|_| ConfigError::Value {
            key: key.to_string(),
            value: raw.to_string(),
            expected,
        })
    }

    fn real(&self, key: &'static str) -> Result<f64, ConfigError> {
        let v: f64 = self.number(key, "a number")?;
        if !v.is_finite() {
            return Err(ConfigError::invalid(key, format!("{v} is not finite")));
        }
        Ok(v)
    }

    fn reals(&self, key: &'static str) -> Result<Vec<f64>, ConfigError> {
        let raw = self.get(key);
        let mut out = Vec::new();
        for item in raw.split(',') {
            let item = item.trim();
            let v: f64 = item.parse().map_err(|_| ConfigError::Value {
                key: key.to_string(),
                value: raw.to_string(),
                expected: "a comma-separated list of numbers",
            })?;
            if !v.is_finite() {
                return Err(ConfigError::invalid(key, format!("{v} is not finite")));
            }
            out.push(v);
        }
        Ok(out)
    }

    fn word<T: FromStr>(&self, key: &'static str, expected: &'static str) -> Result<T, ConfigError> {
        self.number(key, expected)
    }
}

fn lookup(name: &str) -> Result<&'static str, ConfigError> {
    KEYS.iter()
        .find(|k| k.name == name)
        .map(|k| k.name)
        .ok_or_else(|| ConfigError::UnknownKey { key: name.to_string() })
}

fn default_of(name: &str) -> &'static str {
    KEYS.iter()
        .find(|k| k.name == name)
        .map(|k| k.default)
        .expect("documented key")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    SweepHit,
    FeasibleSet,
    SweepDensityAse,
    SweepDensityEe,
    Optimize,
    Validate,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::SweepHit,
        Experiment::FeasibleSet,
        Experiment::SweepDensityAse,
        Experiment::SweepDensityEe,
        Experiment::Optimize,
        Experiment::Validate,
    ];
    pub const NAMES: [&'static str; 6] = [
        "sweep_hit",
        "feasible_set",
        "sweep_density_ase",
        "sweep_density_ee",
        "optimize",
        "validate",
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("expected one of {}", Experiment::NAMES.join(", ")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Lin,
    Log,
}

impl FromStr for Scale {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "lin" => Ok(Scale::Lin),
            "log" => Ok(Scale::Log),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Lin => "lin",
            Scale::Log => "log",
        })
    }
}

/// Evenly spaced sweep with exact end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        match self.scale {
            Scale::Log => log_space(self.start, self.stop, self.points).collect(),
            Scale::Lin => {
                let n = self.points - 1;
                (0..=n)
                    .map(|i| {
                        if i == n {
                            self.stop
                        } else {
                            self.start + (self.stop - self.start) * i as f64 / n as f64
                        }
                    })
                    .collect()
            }
        }
    }

    /// The part of the grid range inside `[lo, hi]`, or `None` if they do
    /// not overlap.
    pub fn clipped(&self, lo: f64, hi: f64) -> Option<Grid> {
        let start = self.start.max(lo);
        let stop = self.stop.min(hi);
        (start <= stop).then_some(Grid { start, stop, ..*self })
    }

    fn read(s: &Settings, prefix: &'static str, keys: [&'static str; 4]) -> Result<Grid, ConfigError> {
        let [k_start, k_stop, k_points, k_scale] = keys;
        let grid = Grid {
            start: s.real(k_start)?,
            stop: s.real(k_stop)?,
            points: s.number(k_points, "a positive integer")?,
            scale: s.word(k_scale, "lin or log")?,
        };
        if grid.points == 0 {
            return Err(ConfigError::invalid(k_points, "must be at least 1"));
        }
        if grid.stop < grid.start {
            return Err(ConfigError::invalid(
                k_stop,
                format!("{prefix} range must satisfy start <= stop"),
            ));
        }
        if grid.scale == Scale::Log && grid.start <= 0.0 {
            return Err(ConfigError::invalid(k_start, "log spacing needs start > 0"));
        }
        Ok(grid)
    }
}

/// Monte Carlo settings shared by every validation cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simulation {
    pub trials: u64,
    pub seed: u64,
    pub truncation_fraction: f64,
    pub estimator: Estimator,
    pub hop_model: HopModel,
    pub tail_compensation: bool,
}

impl Simulation {
    pub fn spec(&self, policy: Association) -> Result<SimulationSpec, CoreError> {
        Ok(SimulationSpec::new(policy, self.trials, self.seed)?
            .with_truncation_fraction(self.truncation_fraction)?
            .with_estimator(self.estimator)
            .with_hop_model(self.hop_model)
            .with_tail_compensation(self.tail_compensation))
    }
}

fn estimator_name(e: Estimator) -> &'static str {
    match e {
        Estimator::Indicator => "indicator",
        Estimator::Conditional => "conditional",
    }
}

fn hop_model_name(h: HopModel) -> &'static str {
    match h {
        HopModel::Independent => "independent",
        HopModel::Correlated => "correlated",
    }
}

struct Word<T>(T);

impl FromStr for Word<Estimator> {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "indicator" => Ok(Word(Estimator::Indicator)),
            "conditional" => Ok(Word(Estimator::Conditional)),
            _ => Err(()),
        }
    }
}

impl FromStr for Word<HopModel> {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "independent" => Ok(Word(HopModel::Independent)),
            "correlated" => Ok(Word(HopModel::Correlated)),
            _ => Err(()),
        }
    }
}

/// Fully validated configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub network: NetworkParams,
    /// Economics at the first budget; see [`ExperimentConfig::economics_at`].
    pub economics: CacheEconomics,
    pub budgets: Vec<f64>,
    pub p_hit_grid: Grid,
    pub density_grid: Grid,
    pub feasible_points: usize,
    pub grid_resolution: usize,
    pub quadrature: QuadratureSpec,
    pub validate_lambda: Vec<f64>,
    pub validate_p_hit: Vec<f64>,
    pub validate_theta: Vec<f64>,
    pub pass_band: f64,
    pub pass_fraction: f64,
    pub simulation: Simulation,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig::from_settings(&Settings::default()).expect("defaults are valid")
    }
}

/// Parses configuration text; missing keys take their defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    ExperimentConfig::from_settings(&Settings::parse(text)?)
}

impl ExperimentConfig {
    pub fn from_settings(s: &Settings) -> Result<ExperimentConfig, ConfigError> {
        let experiment = match s.get("experiment") {
            "" => None,
            name => Some(name.parse().map_err(|_| ConfigError::Value {
                key: "experiment".into(),
                value: name.into(),
                expected: "an experiment name",
            })?),
        };

        let network = NetworkParams::builder()
            .lambda(s.real("lambda")?)
            .alpha(s.real("alpha")?)
            .theta(s.real("theta")?)
            .sigma2(s.real("sigma2")?)
            .rho_sc(s.real("rho_sc")?)
            .rho_bh(s.real("rho_bh")?)
            .beta_ut(s.real("beta_ut")?)
            .beta_bh(s.real("beta_bh")?)
            .build()?;

        let budgets = s.reals("budget")?;
        let economics = CacheEconomics::builder()
            .catalog_size(s.number("catalog_size", "a positive integer")?)
            .storage_size(s.real("storage_size")?)
            .s_max(s.real("s_max")?)
            .lambda_min(s.real("lambda_min")?)
            .lambda_max(s.real("lambda_max")?)
            .price_sc(s.real("price_sc")?)
            .price_storage(s.real("price_storage")?)
            .budget(budgets[0])
            .e_hit(s.real("e_hit")?)
            .e_miss(s.real("e_miss")?)
            .build()?;
        for &c in &budgets {
            economics.with_budget(c)?;
        }

        let p_hit_grid = Grid::read(s, "p_hit", ["p_hit_start", "p_hit_stop", "p_hit_points", "p_hit_scale"])?;
        for (k, v) in [("p_hit_start", p_hit_grid.start), ("p_hit_stop", p_hit_grid.stop)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ConfigError::invalid(k, format!("{v} violates 0 <= p_hit <= 1")));
            }
        }
        let density_grid = Grid::read(
            s,
            "density",
            ["density_start", "density_stop", "density_points", "density_scale"],
        )?;
        if density_grid.start <= 0.0 {
            return Err(ConfigError::invalid("density_start", "must be > 0"));
        }

        let feasible_points: usize = s.number("feasible_points", "a positive integer")?;
        if feasible_points < 2 {
            return Err(ConfigError::invalid("feasible_points", "must be at least 2"));
        }
        let grid_resolution: usize = s.number("grid_resolution", "a positive integer")?;
        if grid_resolution < 16 {
            return Err(ConfigError::invalid("grid_resolution", "must be at least 16"));
        }
        let quadrature = QuadratureSpec::new(
            s.number("quad_nodes", "a positive integer")?,
            s.real("quad_tolerance")?,
            s.number("quad_doublings", "a positive integer")?,
        )
        .map_err(|e| match e {
            CoreError::Domain {
                name,
                value,
                requirement,
            } => ConfigError::invalid(
                match name {
                    "initial_nodes" => "quad_nodes",
                    "relative_tolerance" => "quad_tolerance",
                    _ => "quad_doublings",
                },
                format!("{value} violates {requirement}"),
            ),
            other => other.into(),
        })?;

        let validate_lambda = s.reals("validate_lambda")?;
        for &l in &validate_lambda {
            if l <= 0.0 {
                return Err(ConfigError::invalid(
                    "validate_lambda",
                    format!("{l} violates lambda > 0"),
                ));
            }
        }
        let validate_p_hit = s.reals("validate_p_hit")?;
        for &p in &validate_p_hit {
            if !(0.0..=1.0).contains(&p) {
                return Err(ConfigError::invalid(
                    "validate_p_hit",
                    format!("{p} violates 0 <= p_hit <= 1"),
                ));
            }
        }
        let validate_theta = s.reals("validate_theta")?;
        for &t in &validate_theta {
            if t < 0.0 {
                return Err(ConfigError::invalid(
                    "validate_theta",
                    format!("{t} violates theta >= 0"),
                ));
            }
        }
        let pass_band = s.real("pass_band")?;
        if pass_band <= 0.0 {
            return Err(ConfigError::invalid("pass_band", "must be > 0"));
        }
        let pass_fraction = s.real("pass_fraction")?;
        if !(0.0..=1.0).contains(&pass_fraction) {
            return Err(ConfigError::invalid("pass_fraction", "must lie in [0, 1]"));
        }

        let simulation = Simulation {
            trials: s.number("trials", "a positive integer")?,
            seed: s.number("seed", "an unsigned 64-bit integer")?,
            truncation_fraction: s.real("truncation_fraction")?,
            estimator: s.word::<Word<Estimator>>("estimator", "indicator or conditional")?.0,
            hop_model: s.word::<Word<HopModel>>("hop_model", "independent or correlated")?.0,
            tail_compensation: s.word("tail_compensation", "true or false")?,
        };
        simulation.spec(Association::Static)?;

        let out_dir = s.get("out_dir");
        if out_dir.is_empty() {
            return Err(ConfigError::invalid("out_dir", "must not be empty"));
        }

        Ok(ExperimentConfig {
            experiment,
            network,
            economics,
            budgets,
            p_hit_grid,
            density_grid,
            feasible_points,
            grid_resolution,
            quadrature,
            validate_lambda,
            validate_p_hit,
            validate_theta,
            pass_band,
            pass_fraction,
            simulation,
            out_dir: PathBuf::from(out_dir),
        })
    }

    /// Economics with the budget replaced by `budget`.
    pub fn economics_at(&self, budget: f64) -> CacheEconomics {
        self.economics
            .with_budget(budget)
            .expect("budgets are validated on parse")
    }

    /// The configuration as text that parses back to an identical value.
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let n = &self.network;
        let e = &self.economics;
        let sim = &self.simulation;
        let q = &self.quadrature;
        let mut out = String::from("# cachenet effective configuration\n");
        for k in KEYS {
            let value = match k.name {
                "experiment" => match self.experiment {
                    Some(x) => x.name().to_string(),
                    None => continue,
                },
                "lambda" => n.lambda().to_string(),
                "alpha" => n.alpha().to_string(),
                "theta" => n.theta().to_string(),
                "sigma2" => n.sigma2().to_string(),
                "rho_sc" => n.rho_sc().to_string(),
                "rho_bh" => n.rho_bh().to_string(),
                "beta_ut" => n.beta_ut().to_string(),
                "beta_bh" => n.beta_bh().to_string(),
                "catalog_size" => e.catalog_size().to_string(),
                "storage_size" => e.storage_size().to_string(),
                "s_max" => e.s_max().to_string(),
                "lambda_min" => e.lambda_min().to_string(),
                "lambda_max" => e.lambda_max().to_string(),
                "price_sc" => e.price_sc().to_string(),
                "price_storage" => e.price_storage().to_string(),
                "budget" => list(&self.budgets),
                "e_hit" => e.e_hit().to_string(),
                "e_miss" => e.e_miss().to_string(),
                "p_hit_start" => self.p_hit_grid.start.to_string(),
                "p_hit_stop" => self.p_hit_grid.stop.to_string(),
                "p_hit_points" => self.p_hit_grid.points.to_string(),
                "p_hit_scale" => self.p_hit_grid.scale.to_string(),
                "density_start" => self.density_grid.start.to_string(),
                "density_stop" => self.density_grid.stop.to_string(),
                "density_points" => self.density_grid.points.to_string(),
                "density_scale" => self.density_grid.scale.to_string(),
                "feasible_points" => self.feasible_points.to_string(),
                "grid_resolution" => self.grid_resolution.to_string(),
                "quad_nodes" => q.initial_nodes().to_string(),
                "quad_tolerance" => q.relative_tolerance().to_string(),
                "quad_doublings" => q.max_doublings().to_string(),
                "validate_lambda" => list(&self.validate_lambda),
                "validate_p_hit" => list(&self.validate_p_hit),
                "validate_theta" => list(&self.validate_theta),
                "pass_band" => self.pass_band.to_string(),
                "pass_fraction" => self.pass_fraction.to_string(),
                "trials" => sim.trials.to_string(),
                "seed" => sim.seed.to_string(),
                "truncation_fraction" => sim.truncation_fraction.to_string(),
                "estimator" => estimator_name(sim.estimator).to_string(),
                "hop_model" => hop_model_name(sim.hop_model).to_string(),
                "tail_compensation" => sim.tail_compensation.to_string(),
                "out_dir" => self.out_dir.display().to_string(),
                other => unreachable!("key {other} has no writer"),
            };
            out.push_str(&format!("{} = {}\n", k.name, value));
        }
        out
    }
}
