use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use fsifeti_cli::{parse_config, run, RunConfig, BUILD_ID};

/// Non-symmetric BEM-FEM domain decomposition benchmarks.
///
/// Flags override keys read from `--config`. Exit status: 0 converged,
/// 2 not converged, 1 configuration or setup error.
#[derive(Parser, Debug)]
#[command(name = "fsifeti", version = BUILD_ID)]
struct Cli {
    /// cavity, duct, scatter or sweep (default: from the config, else cavity)
    #[arg(value_parser = ["cavity", "duct", "scatter", "sweep"])]
    benchmark: Option<String>,
    /// Flat `key = value` configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Excitation frequency in Hz
    #[arg(long)]
    freq: Option<String>,
    /// Fluid mesh density
    #[arg(long)]
    lh: Option<String>,
    /// Beam mesh density (default: same as --lh)
    #[arg(long)]
    lh_struct: Option<String>,
    /// Number of duct subdomains
    #[arg(long)]
    ns: Option<String>,
    /// Duct wavenumber when --freq is not given
    #[arg(long)]
    k: Option<String>,
    /// Incidence angle of the scattered wave (rad)
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, value_parser = ["mortar", "llm"])]
    coupling: Option<String>,
    /// Interface frame for localized multipliers
    #[arg(long, value_parser = ["coarse", "fine"])]
    frame: Option<String>,
    #[arg(long, value_parser = ["bicgstab", "direct"])]
    solver: Option<String>,
    /// Normalized residual tolerance
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    max_iter: Option<String>,
    /// Poisson ratio used by the variable scaling
    #[arg(long)]
    nu: Option<String>,
    /// First sweep frequency (Hz)
    #[arg(long)]
    sweep_min: Option<String>,
    /// Last sweep frequency (Hz)
    #[arg(long)]
    sweep_max: Option<String>,
    #[arg(long)]
    sweep_points: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    dump_mesh: bool,
    #[arg(long)]
    dump_matrices: bool,
    /// Worker threads (1 gives reproducible scheduling)
    #[arg(long)]
    threads: Option<String>,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        let pairs: [(&'static str, &Option<String>); 18] = [
            ("benchmark", &self.benchmark),
            ("freq", &self.freq),
            ("lh", &self.lh),
            ("lh_struct", &self.lh_struct),
            ("ns", &self.ns),
            ("k", &self.k),
            ("alpha", &self.alpha),
            ("coupling", &self.coupling),
            ("frame", &self.frame),
            ("solver", &self.solver),
            ("tol", &self.tol),
            ("max_iter", &self.max_iter),
            ("nu", &self.nu),
            ("sweep_min", &self.sweep_min),
            ("sweep_max", &self.sweep_max),
            ("sweep_points", &self.sweep_points),
            ("out", &self.out),
            ("threads", &self.threads),
        ];
        let mut v: Vec<(&'static str, &str)> = pairs
            .into_iter()
            .filter_map(|(k, val)| val.as_deref().map(|s| (k, s)))
            .collect();
        if self.dump_mesh {
            v.push(("dump_mesh", "true"));
        }
        if self.dump_matrices {
            v.push(("dump_matrices", "true"));
        }
        v
    }
}

fn config(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => RunConfig::default(),
    };
    for (key, value) in cli.overrides() {
        cfg.set(key, value).map_err(|e| format!("--{}: {e}", key.replace('_', "-")))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("fsifeti: {e}");
            return ExitCode::from(1);
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            let solver = &outcome.report["solver"];
            if !solver.is_null() {
                println!(
                    "{}: {} iterations, converged = {}",
                    cfg.benchmark.name(),
                    solver["iterations"],
                    solver["converged"]
                );
            } else {
                println!("{}: converged = {}", cfg.benchmark.name(), outcome.converged);
            }
            if !outcome.converged {
                eprintln!("fsifeti: iteration did not converge");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("fsifeti: {e}");
            ExitCode::from(1)
        }
    }
}
