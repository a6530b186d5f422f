//! Flat `key=value` run configuration.
//!
//! ```text
//! # ground state of the 1s channel
//! command=c2
//! kappa=-1
//! nu=0.5
//! grid.N=4000
//! sweep.nu=0.9,1.0,1.05
//! ```
//!
//! One entry per line, `#` starts a comment, lists are comma separated.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use schurdirac::dirac::{GridSpec, SpectrumSettings, SweepSettings};
use schurdirac::{DiracChannelSpec, GridScheme, Tolerances};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        key: key.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Validate,
    Solve,
    C2,
    Spectrum,
    HardySweep,
    Convergence,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Validate,
        Command::Solve,
        Command::C2,
        Command::Spectrum,
        Command::HardySweep,
        Command::Convergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Solve => "solve",
            Command::C2 => "c2",
            Command::Spectrum => "spectrum",
            Command::HardySweep => "hardy-sweep",
            Command::Convergence => "convergence",
        }
    }

    fn needs_nu(self) -> bool {
        self != Command::HardySweep
    }

    fn needs_sweep_grids(self) -> bool {
        matches!(self, Command::HardySweep | Command::Convergence)
    }

    pub fn default_format(self) -> OutputFormat {
        match self {
            Command::HardySweep | Command::Convergence => OutputFormat::Csv,
            _ => OutputFormat::Json,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("expected `csv` or `json`, got `{s}`")),
        }
    }
}

/// Right-hand side profile for the `solve` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Zero,
    One,
    /// `e^{-r}` sampled at the nodes.
    Exp,
}

impl Source {
    pub fn sample(self, r: f64) -> f64 {
        match self {
            Source::Zero => 0.0,
            Source::One => 1.0,
            Source::Exp => (-r).exp(),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Zero => "zero",
            Source::One => "one",
            Source::Exp => "exp",
        })
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "zero" => Ok(Source::Zero),
            "one" => Ok(Source::One),
            "exp" => Ok(Source::Exp),
            _ => Err(format!("expected `zero`, `one` or `exp`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub kappa: i32,
    /// Unused by `hardy-sweep`, which reads `sweep.nu`.
    pub nu: Option<f64>,
    pub gamma: f64,
    pub grid: GridSpec<f64>,
    pub sweep_nu: Vec<f64>,
    pub sweep_n: Vec<usize>,
    /// One entry for all grids, or one per `sweep.N` entry.
    pub sweep_r_min: Vec<f64>,
    pub sweep_spectrum: bool,
    pub bisection_tol: f64,
    pub eigen_tol: f64,
    pub psd_eps: f64,
    pub spectrum_k: usize,
    pub solve_f1: Source,
    pub solve_f2: Source,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub output_timing: bool,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        let grid = GridSpec::logarithmic(2000);
        Self {
            command,
            kappa: -1,
            nu: None,
            gamma: 0.5,
            grid,
            sweep_nu: Vec::new(),
            sweep_n: Vec::new(),
            sweep_r_min: Vec::new(),
            sweep_spectrum: true,
            bisection_tol: 1e-8,
            eigen_tol: 1e-8,
            psd_eps: 1e-9,
            spectrum_k: 2,
            solve_f1: Source::Exp,
            solve_f2: Source::Zero,
            output_path: None,
            output_format: command.default_format(),
            output_timing: false,
        }
    }

    pub fn channel(&self) -> Result<DiracChannelSpec<f64>, schurdirac::Error> {
        DiracChannelSpec::new(self.kappa, self.nu.unwrap_or(f64::NAN), self.gamma)
    }

    pub fn tolerances(&self) -> Tolerances<f64> {
        Tolerances {
            bisection: self.bisection_tol,
            psd_eps: self.psd_eps,
            ..Tolerances::default()
        }
    }

    pub fn spectrum_settings(&self) -> SpectrumSettings<f64> {
        SpectrumSettings {
            eigen_tol: self.eigen_tol,
            tolerances: self.tolerances(),
            ..SpectrumSettings::default()
        }
    }

    pub fn sweep_settings(&self) -> SweepSettings<f64> {
        SweepSettings {
            spectrum: self.spectrum_settings(),
            with_spectrum: self.sweep_spectrum,
            ..SweepSettings::default()
        }
    }

    /// Grids of a sweep: `sweep.N` paired with `sweep.r_min`, scheme and
    /// `r_max` taken from `grid.*`.
    pub fn sweep_grids(&self) -> Vec<GridSpec<f64>> {
        self.sweep_n
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let r_min = match self.sweep_r_min.len() {
                    0 => self.grid.r_min,
                    1 => self.sweep_r_min[0],
                    _ => self.sweep_r_min[i],
                };
                GridSpec {
                    n,
                    r_min,
                    ..self.grid
                }
            })
            .collect()
    }

    /// Every resolved key in canonical order; parses back to `self`.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let mut out = vec![
            ("command", self.command.to_string()),
            ("kappa", self.kappa.to_string()),
        ];
        if let Some(nu) = self.nu {
            out.push(("nu", format!("{:?}", nu)));
        }
        out.extend([
            ("gamma", format!("{:?}", self.gamma)),
            ("grid.scheme", self.grid.scheme.to_string()),
            ("grid.N", self.grid.n.to_string()),
            ("grid.r_min", format!("{:?}", self.grid.r_min)),
            ("grid.r_max", format!("{:?}", self.grid.r_max)),
        ]);
        if !self.sweep_nu.is_empty() {
            out.push(("sweep.nu", list(&self.sweep_nu)));
        }
        if !self.sweep_n.is_empty() {
            let ns: Vec<String> = self.sweep_n.iter().map(|n| n.to_string()).collect();
            out.push(("sweep.N", ns.join(",")));
        }
        if !self.sweep_r_min.is_empty() {
            out.push(("sweep.r_min", list(&self.sweep_r_min)));
        }
        out.extend([
            ("sweep.spectrum", self.sweep_spectrum.to_string()),
            ("tol.bisection", format!("{:?}", self.bisection_tol)),
            ("tol.eigen", format!("{:?}", self.eigen_tol)),
            ("tol.psd", format!("{:?}", self.psd_eps)),
            ("spectrum.k", self.spectrum_k.to_string()),
            ("solve.f1", self.solve_f1.to_string()),
            ("solve.f2", self.solve_f2.to_string()),
        ]);
        if let Some(p) = &self.output_path {
            out.push(("output.path", p.display().to_string()));
        }
        out.push(("output.format", self.output_format.to_string()));
        out.push(("output.timing", self.output_timing.to_string()));
        out
    }

    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.kappa == 0 {
            return Err(invalid("kappa", "must be a nonzero integer"));
        }
        if self.command.needs_nu() {
            match self.nu {
                None => return Err(invalid("nu", "required by this command")),
                Some(nu) if !(nu > 0.0 && nu.is_finite()) => {
                    return Err(invalid("nu", format!("must be positive, got {nu}")))
                }
                _ => {}
            }
        }
        positive("gamma", self.gamma)?;
        if self.grid.n < 2 {
            return Err(invalid("grid.N", "need at least 2 nodes"));
        }
        positive("grid.r_min", self.grid.r_min)?;
        if !(self.grid.r_max > self.grid.r_min && self.grid.r_max.is_finite()) {
            return Err(invalid("grid.r_max", "must exceed grid.r_min"));
        }
        positive("tol.bisection", self.bisection_tol)?;
        positive("tol.eigen", self.eigen_tol)?;
        positive("tol.psd", self.psd_eps)?;
        if self.spectrum_k == 0 {
            return Err(invalid("spectrum.k", "must be at least 1"));
        }
        for &nu in &self.sweep_nu {
            if !(nu > 0.0 && nu.is_finite()) {
                return Err(invalid("sweep.nu", format!("entries must be positive, got {nu}")));
            }
        }
        if let Some(&n) = self.sweep_n.iter().find(|&&n| n < 2) {
            return Err(invalid("sweep.N", format!("grids need at least 2 nodes, got {n}")));
        }
        for &r in &self.sweep_r_min {
            if !(r > 0.0 && r < self.grid.r_max) {
                return Err(invalid("sweep.r_min", format!("entries must lie in (0, grid.r_max), got {r}")));
            }
        }
        if self.sweep_r_min.len() > 1 && self.sweep_r_min.len() != self.sweep_n.len() {
            return Err(invalid("sweep.r_min", "give one value or one per sweep.N entry"));
        }
        if self.command == Command::HardySweep && self.sweep_nu.is_empty() {
            return Err(invalid("sweep.nu", "required by hardy-sweep"));
        }
        if self.command.needs_sweep_grids() && self.sweep_n.is_empty() {
            return Err(invalid("sweep.N", format!("required by {}", self.command)));
        }
        Ok(())
    }
}

fn positive(key: &str, x: f64) -> Result<(), ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(key, format!("must be positive, got {x}")))
    }
}

struct Entry<'a> {
    line: usize,
    value_column: usize,
    value: &'a str,
}

impl Entry<'_> {
    fn parse<V: FromStr>(&self, what: &str) -> Result<V, ConfigError>
    where
        V::Err: fmt::Display,
    {
        self.value.parse().map_err(|e: V::Err| ConfigError::Parse {
            line: self.line,
            column: self.value_column,
            message: format!("expected {what}: {e}"),
        })
    }

    fn parse_list<V: FromStr>(&self, what: &str) -> Result<Vec<V>, ConfigError>
    where
        V::Err: fmt::Display,
    {
        let mut out = Vec::new();
        let mut column = self.value_column;
        for item in self.value.split(',') {
            let lead = item.len() - item.trim_start().len();
            let parsed = item.trim().parse().map_err(|e: V::Err| ConfigError::Parse {
                line: self.line,
                column: column + lead,
                message: format!("expected a list of {what}: {e}"),
            })?;
            out.push(parsed);
            column += item.chars().count() + 1;
        }
        Ok(out)
    }
}

/// Parses and validates a configuration. `command` comes from the command
/// line; a `command` key in the text must agree with it.
pub fn parse_config_for(text: &str, command: Option<Command>) -> Result<RunConfig, ConfigError> {
    let mut entries: Vec<(String, Entry)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            let column = content.len() - content.trim_start().len() + 1;
            return Err(ConfigError::Parse {
                line,
                column,
                message: "expected `key=value`".into(),
            });
        };
        let key = content[..eq].trim();
        if key.is_empty() {
            return Err(ConfigError::Parse {
                line,
                column: eq + 1,
                message: "missing key before `=`".into(),
            });
        }
        let rest = &content[eq + 1..];
        let value = rest.trim();
        let value_column = content[..eq + 1].chars().count() + rest.len() - rest.trim_start().len() + 1;
        if entries.iter().any(|(k, _)| k == key) {
            return Err(ConfigError::Parse {
                line,
                column: content.len() - content.trim_start().len() + 1,
                message: format!("duplicate key `{key}`"),
            });
        }
        entries.push((key.to_string(), Entry { line, value_column, value }));
    }

    let from_text = match entries.iter().find(|(k, _)| k == "command") {
        Some((_, e)) => Some(e.parse::<Command>("a command")?),
        None => None,
    };
    let command = match (command, from_text) {
        (Some(a), Some(b)) if a != b => {
            return Err(invalid("command", format!("config says `{b}` but `{a}` was requested")))
        }
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => return Err(invalid("command", "no command given")),
    };

    let mut cfg = RunConfig::defaults(command);
    for (key, e) in &entries {
        match key.as_str() {
            "command" => {}
            "kappa" => cfg.kappa = e.parse("an integer")?,
            "nu" => cfg.nu = Some(e.parse("a number")?),
            "gamma" => cfg.gamma = e.parse("a number")?,
            "grid.scheme" => {
                cfg.grid.scheme = e.parse::<GridScheme>("`uniform` or `logarithmic`")?
            }
            "grid.N" => cfg.grid.n = e.parse("a node count")?,
            "grid.r_min" => cfg.grid.r_min = e.parse("a number")?,
            "grid.r_max" => cfg.grid.r_max = e.parse("a number")?,
            "sweep.nu" => cfg.sweep_nu = e.parse_list("numbers")?,
            "sweep.N" => cfg.sweep_n = e.parse_list("node counts")?,
            "sweep.r_min" => cfg.sweep_r_min = e.parse_list("numbers")?,
            "sweep.spectrum" => cfg.sweep_spectrum = e.parse("`true` or `false`")?,
            "tol.bisection" => cfg.bisection_tol = e.parse("a number")?,
            "tol.eigen" => cfg.eigen_tol = e.parse("a number")?,
            "tol.psd" => cfg.psd_eps = e.parse("a number")?,
            "spectrum.k" => cfg.spectrum_k = e.parse("a count")?,
            "solve.f1" => cfg.solve_f1 = e.parse("a source profile")?,
            "solve.f2" => cfg.solve_f2 = e.parse("a source profile")?,
            "output.path" => cfg.output_path = Some(PathBuf::from(e.value)),
            "output.format" => cfg.output_format = e.parse("an output format")?,
            "output.timing" => cfg.output_timing = e.parse("`true` or `false`")?,
            other => return Err(invalid(other, "unknown key")),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_for(text, None)
}
