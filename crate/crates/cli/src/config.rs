use std::fmt;
use std::path::PathBuf;

use fsifeti::benchmarks::SolverChoice;
use fsifeti::coupling::CouplingMethod;

/// Configuration error; `line` is set for errors that come from a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Benchmark {
    #[default]
    Cavity,
    Duct,
    Scatter,
    Sweep,
}

impl Benchmark {
    pub fn name(self) -> &'static str {
        match self {
            Self::Cavity => "cavity",
            Self::Duct => "duct",
            Self::Scatter => "scatter",
            Self::Sweep => "sweep",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "cavity" => Self::Cavity,
            "duct" => Self::Duct,
            "scatter" => Self::Scatter,
            "sweep" => Self::Sweep,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Frame {
    #[default]
    Coarse,
    Fine,
}

/// Everything a run needs. Frequency and mesh density are optional because
/// their defaults depend on the benchmark; use the `resolved_*` accessors.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub benchmark: Benchmark,
    /// Hz. For the duct it sets the wavenumber `2 pi f / c`.
    pub freq: Option<f64>,
    pub sweep_min: f64,
    pub sweep_max: f64,
    pub sweep_points: usize,
    /// Fluid elements per unit reference length (see each benchmark).
    pub lh: Option<usize>,
    pub lh_struct: Option<usize>,
    pub ns: usize,
    /// Duct wavenumber when no frequency is given.
    pub k: f64,
    /// Incidence angle of the scattered plane wave (rad).
    pub alpha: f64,
    pub coupling: CouplingMethod,
    pub frame: Frame,
    pub solver: SolverChoice,
    pub tol: f64,
    pub max_iter: usize,
    pub nu: f64,
    pub out: PathBuf,
    pub dump_mesh: bool,
    pub dump_matrices: bool,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            benchmark: Benchmark::Cavity,
            freq: None,
            sweep_min: 1.0,
            sweep_max: 100.0,
            sweep_points: 100,
            lh: None,
            lh_struct: None,
            ns: 4,
            k: 1.0,
            alpha: std::f64::consts::FRAC_PI_4,
            coupling: CouplingMethod::Llm,
            frame: Frame::Coarse,
            solver: SolverChoice::Bicgstab,
            tol: 1e-10,
            max_iter: 1000,
            nu: 0.3,
            out: PathBuf::from("out"),
            dump_mesh: false,
            dump_matrices: false,
            threads: None,
        }
    }
}

fn positive_f64(key: &str, v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("{key}: cannot parse {v:?} as a number"))?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(format!("{key} must be positive and finite, got {v}"));
    }
    Ok(x)
}

fn positive_usize(key: &str, v: &str) -> Result<usize, String> {
    let x: usize = v.parse().map_err(|_| format!("{key}: cannot parse {v:?} as a non-negative integer"))?;
    if x == 0 {
        return Err(format!("{key} must be at least 1"));
    }
    Ok(x)
}

fn boolean(key: &str, v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("{key}: expected true or false, got {v:?}")),
    }
}

impl RunConfig {
    /// Sets one key; `-` and `_` are interchangeable in key names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let key = key.replace('-', "_");
        let v = value.trim();
        match key.as_str() {
            "benchmark" => {
                self.benchmark = Benchmark::parse(v).ok_or_else(|| format!("unknown benchmark {v:?} (cavity, duct, scatter, sweep)"))?
            }
            "freq" => self.freq = Some(positive_f64(&key, v)?),
            "sweep_min" => self.sweep_min = positive_f64(&key, v)?,
            "sweep_max" => self.sweep_max = positive_f64(&key, v)?,
            "sweep_points" => self.sweep_points = positive_usize(&key, v)?,
            "lh" => self.lh = Some(positive_usize(&key, v)?),
            "lh_struct" => self.lh_struct = Some(positive_usize(&key, v)?),
            "ns" => self.ns = positive_usize(&key, v)?,
            "k" => self.k = positive_f64(&key, v)?,
            "alpha" => {
                let a: f64 = v.parse().map_err(|_| format!("alpha: cannot parse {v:?} as a number"))?;
                if !a.is_finite() {
                    return Err(format!("alpha must be finite, got {v}"));
                }
                self.alpha = a;
            }
            "coupling" => {
                self.coupling = match v {
                    "llm" => CouplingMethod::Llm,
                    "mortar" => CouplingMethod::Mortar,
                    _ => return Err(format!("coupling must be mortar or llm, got {v:?}")),
                }
            }
            "frame" => {
                self.frame = match v {
                    "coarse" => Frame::Coarse,
                    "fine" => Frame::Fine,
                    _ => return Err(format!("frame must be coarse or fine, got {v:?}")),
                }
            }
            "solver" => {
                self.solver = match v {
                    "bicgstab" => SolverChoice::Bicgstab,
                    "direct" => SolverChoice::Direct,
                    _ => return Err(format!("solver must be bicgstab or direct, got {v:?}")),
                }
            }
            "tol" => {
                let t: f64 = v.parse().map_err(|_| format!("tol: cannot parse {v:?} as a number"))?;
                if !(t > 0.0 && t < 1.0) {
                    return Err(format!("tol must lie in (0, 1), got {v}"));
                }
                self.tol = t;
            }
            "max_iter" => self.max_iter = positive_usize(&key, v)?,
            "nu" => {
                let nu: f64 = v.parse().map_err(|_| format!("nu: cannot parse {v:?} as a number"))?;
                if !(nu > 0.0 && nu < 0.5) {
                    return Err(format!("nu must lie in (0, 0.5), got {v}"));
                }
                self.nu = nu;
            }
            "out" => {
                if v.is_empty() {
                    return Err("out must not be empty".into());
                }
                self.out = PathBuf::from(v);
            }
            "dump_mesh" => self.dump_mesh = boolean(&key, v)?,
            "dump_matrices" => self.dump_matrices = boolean(&key, v)?,
            "threads" => self.threads = Some(positive_usize(&key, v)?),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Checks constraints between keys.
    pub fn validate(&self) -> Result<(), String> {
        if self.sweep_max < self.sweep_min {
            return Err(format!(
                "sweep_max ({}) must not be below sweep_min ({})",
                self.sweep_max, self.sweep_min
            ));
        }
        if self.sweep_points == 1 && self.sweep_max != self.sweep_min {
            return Err("a sweep over a range needs at least 2 points".into());
        }
        Ok(())
    }

    pub fn resolved_freq(&self) -> f64 {
        self.freq.unwrap_or(match self.benchmark {
            Benchmark::Scatter => 500.0,
            _ => 5.0,
        })
    }

    pub fn resolved_lh(&self) -> usize {
        self.lh.unwrap_or(match self.benchmark {
            Benchmark::Duct => 10,
            _ => 64,
        })
    }

    pub fn resolved_lh_struct(&self) -> usize {
        self.lh_struct.unwrap_or_else(|| self.resolved_lh())
    }

    pub fn sweep_frequencies(&self) -> Vec<f64> {
        let n = self.sweep_points;
        if n == 1 {
            return vec![self.sweep_min];
        }
        (0..n)
            .map(|i| self.sweep_min + (self.sweep_max - self.sweep_min) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Parses flat `key = value` text. `#` starts a comment; blank lines are
/// ignored; a key may appear only once.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<String> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| ConfigError { line: Some(line), message };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got {content:?}")))?;
        let key = key.trim().replace('-', "_");
        if key.is_empty() {
            return Err(err("missing key".into()));
        }
        if seen.contains(&key) {
            return Err(err(format!("duplicate key {key:?}")));
        }
        cfg.set(&key, value).map_err(err)?;
        seen.push(key);
        last_line = line;
    }
    cfg.validate().map_err(|message| ConfigError {
        line: (last_line > 0).then_some(last_line),
        message,
    })?;
    Ok(cfg)
}
