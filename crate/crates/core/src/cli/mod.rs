//! The `sts` command-line front end.
//!
//! ```text
//! sts [--config FILE] [overrides] <tunnel|sweep|density|reference|verify>
//! ```
//!
//! Settings come from defaults, then the config file, then flags. All data
//! goes out as CSV (to `--out` or stdout); diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid input or domain
//! error, 3 quadrature non-convergence.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;

mod commands;
pub mod config;
pub mod csv;

pub use commands::{run_command, verify_report, Check, CommandOutput};
pub use config::{KGrid, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NO_CONVERGENCE: u8 = 3;

/// Exit status for an error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        _ => EXIT_INVALID,
    }
}

#[derive(Debug, Parser)]
#[command(name = "sts", version, about = "Tunnelling times for rectangular barriers in spacetime-symmetric quantum mechanics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub overrides: Overrides,

    /// Print the effective configuration as key = value text and exit.
    #[arg(long, global = true)]
    pub echo_config: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Closed-form, series, quadrature and classical tunnelling times for one window [0, emax].
    Tunnel,
    /// T_STS/τ0 and comparison times over a k/k0 grid, one table per k0L.
    Sweep,
    /// Long-format ρ(x|t) over --xrange × --trange.
    Density,
    /// Comparison times at E = emax.
    Reference,
    /// Fractional-operator and limit checks; exit 1 if any fails.
    Verify,
}

#[derive(Debug, Default, Args)]
pub struct Overrides {
    /// key = value file read before the other flags are applied.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub mass: Option<String>,
    #[arg(long, global = true)]
    pub hbar: Option<String>,
    /// Barrier height (ignored when --k0l is given).
    #[arg(long, global = true)]
    pub v0: Option<String>,
    /// Barrier width L.
    #[arg(long, global = true)]
    pub length: Option<String>,
    /// Upper edge of the flat packet window [0, emax]; the energy for `reference`.
    #[arg(long, global = true)]
    pub emax: Option<String>,
    /// Barrier strength(s) k0·L, comma separated; accepts forms like pi/10 or 30pi.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k0l: Option<String>,
    /// k/k0 values: start:stop:step or a comma list.
    #[arg(long, global = true)]
    pub kgrid: Option<String>,
    /// x_lo,x_hi
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xrange: Option<String>,
    /// t_lo,t_hi
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub trange: Option<String>,
    #[arg(long, global = true)]
    pub nx: Option<String>,
    /// Time samples for `density`; base grid size for `verify` convergence checks.
    #[arg(long, global = true)]
    pub nt: Option<String>,
    #[arg(long, global = true)]
    pub rel_tol: Option<String>,
    #[arg(long, global = true)]
    pub abs_tol: Option<String>,
    #[arg(long, global = true)]
    pub max_subdivisions: Option<String>,
    /// Output file (sweep with several k0L values writes <stem>_k0l_<value>.<ext>).
    #[arg(long, global = true)]
    pub out: Option<String>,
}

impl Overrides {
    fn assignments(&self) -> Vec<(&'static str, &str)> {
        let pairs: [(&'static str, &Option<String>); 15] = [
            ("mass", &self.mass),
            ("hbar", &self.hbar),
            ("v0", &self.v0),
            ("length", &self.length),
            ("emax", &self.emax),
            ("k0l", &self.k0l),
            ("kgrid", &self.kgrid),
            ("xrange", &self.xrange),
            ("trange", &self.trange),
            ("nx", &self.nx),
            ("nt", &self.nt),
            ("rel_tol", &self.rel_tol),
            ("abs_tol", &self.abs_tol),
            ("max_subdivisions", &self.max_subdivisions),
            ("out", &self.out),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.as_deref().map(|v| (k, v))).collect()
    }

    /// Defaults, then the config file, then the flags.
    pub fn resolve(&self) -> crate::Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
            cfg.apply_text(&text)?;
        }
        for (key, value) in self.assignments() {
            cfg.set(key, value).map_err(|e| Error::InvalidInput(format!("--{}: {e}", key.replace('_', "-"))))?;
        }
        Ok(cfg)
    }
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(&cli))
}

pub fn run(cli: &Cli) -> u8 {
    let cfg = match cli.overrides.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("sts: {e}");
            return EXIT_INVALID;
        }
    };
    if cli.echo_config {
        print!("{}", cfg.to_text());
        return EXIT_OK;
    }
    match run_command(cli.command, &cfg) {
        Ok(out) => match out.emit(&cfg) {
            Ok(()) => out.status,
            Err(e) => {
                eprintln!("sts: {e}");
                EXIT_INVALID
            }
        },
        Err(e) => {
            eprintln!("sts: {e}");
            exit_code(&e)
        }
    }
}
