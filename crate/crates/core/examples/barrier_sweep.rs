//! T_STS/τ0 across the barrier top for the three standard strengths, written as
//! the same CSV the `sts sweep` command produces.
//!
//!     cargo run --example barrier_sweep > sweep.csv

use sts_core::cli::{run_command, Command, KGrid, RunConfig};

fn main() {
    let cfg = RunConfig { kgrid: KGrid::Range { start: 0.05, stop: 2.0, step: 0.05 }, ..RunConfig::default() };
    match run_command(Command::Sweep, &cfg) {
        Ok(out) => print!("{}", out.stdout_text()),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    }
}
