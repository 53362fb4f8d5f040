use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractional::{
    caputo_half, eigen_error, weak_pde_residual, HalfOrder, ResidualMode, SampledSignal, UniformGrid,
};
use crate::phys::{tau0, Barrier, EnergyWindow, PhysicalParams};
use crate::quadrature::oracle_tunneling_time;
use crate::reference::table1_times;
use crate::solver::{
    classical_energy_avg_time, density_grid, free_to_tunnel_ratio, tunneling_time_closed, tunneling_time_extended,
    tunneling_time_first_order, tunneling_time_series, weak_travel_time, Component, Geometry, WavePacketSpec,
};

use super::config::RunConfig;
use super::csv::{Flag, Row, Table};
use super::{Command, EXIT_NO_CONVERGENCE, EXIT_OK, EXIT_VERIFY_FAILED};

/// Result of a subcommand: CSV blocks (each to a file or stdout), stderr lines and an exit status.
#[derive(Debug, Clone, Default)]
pub struct CommandOutput {
    pub blocks: Vec<(Option<PathBuf>, String)>,
    pub diagnostics: Vec<String>,
    pub status: u8,
}

impl CommandOutput {
    fn single(cfg: &RunConfig, text: String, status: u8) -> Self {
        Self { blocks: vec![(cfg.out.clone(), text)], diagnostics: Vec::new(), status }
    }

    /// Write files, print stdout blocks separated by blank lines, print diagnostics.
    pub fn emit(&self, _cfg: &RunConfig) -> Result<()> {
        for line in &self.diagnostics {
            eprintln!("sts: {line}");
        }
        let mut first = true;
        for (path, text) in &self.blocks {
            match path {
                Some(p) => std::fs::write(p, text)
                    .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display())))?,
                None => {
                    if !first {
                        println!();
                    }
                    print!("{text}");
                    first = false;
                }
            }
        }
        Ok(())
    }

    /// All stdout blocks joined as [`emit`](Self::emit) would print them.
    pub fn stdout_text(&self) -> String {
        self.blocks.iter().filter(|(p, _)| p.is_none()).map(|(_, t)| t.as_str()).collect::<Vec<_>>().join("\n")
    }
}

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    match command {
        Command::Tunnel => tunnel(cfg),
        Command::Sweep => sweep(cfg),
        Command::Density => density(cfg),
        Command::Reference => reference(cfg),
        Command::Verify => verify(cfg),
    }
}

fn tunnel(cfg: &RunConfig) -> Result<CommandOutput> {
    let params = cfg.params()?;
    let barrier = cfg.barrier()?;
    let settings = cfg.quadrature()?;
    let e = cfg.emax;

    let closed = tunneling_time_closed(&params, &barrier, e)?;
    let series = tunneling_time_series(&params, &barrier, e)?;
    let classical = classical_energy_avg_time(&params, &barrier, e)?;
    let tau = tau0(&params, &barrier)?;
    let packet = WavePacketSpec::right_moving(cfg.window()?);
    let oracle = oracle_tunneling_time(&packet, &Geometry::new(params, barrier), &settings);

    let mut table = Table::new(&[
        "mass", "hbar", "v0", "length", "emax", "tau0", "closed_re", "closed_im", "series_re", "series_im",
        "oracle_re", "oracle_im", "classical",
    ]);
    let row = Row::new()
        .num(params.mass())
        .num(params.hbar())
        .num(barrier.height())
        .num(barrier.width())
        .num(e)
        .num(tau)
        .complex(closed.value())
        .complex(series.value());
    let mut out = CommandOutput::default();
    let row = match oracle {
        Ok(t) => row.complex(t.value()).num(classical),
        Err(err @ Error::NoConvergence { .. }) => {
            out.diagnostics.push(format!("oracle: {err}"));
            out.status = EXIT_NO_CONVERGENCE;
            row.blank(2).num(classical).flag(Flag::NoConv)
        }
        Err(err) => return Err(err),
    };
    table.push(row);
    out.blocks.push((cfg.out.clone(), table.render()));
    Ok(out)
}

const SWEEP_COLUMNS: [&str; 7] = [
    "k_over_k0",
    "re_T_sts_over_tau0",
    "im_T_sts_over_tau0",
    "tau_phase",
    "tau_dwell",
    "tau_larmor",
    "tau_bl",
];

/// `k/k0` within this distance of 1 is treated as the branch point.
const BRANCH_WIDTH: f64 = 1e-9;

fn sweep_row(params: &PhysicalParams, barrier: &Barrier, ratio: f64) -> Row {
    let row = Row::new().num(ratio);
    if (ratio - 1.0).abs() <= BRANCH_WIDTH {
        return row.blank(6).flag(Flag::Singular);
    }
    let tau = match tau0(params, barrier) {
        Ok(t) => t,
        Err(_) => return row.blank(6).flag(Flag::Singular),
    };
    let energy = ratio * ratio * barrier.height();
    let sts = match tunneling_time_extended(params, barrier, energy) {
        Ok(t) => t.value() / tau,
        Err(Error::NoConvergence { .. }) => return row.blank(6).flag(Flag::NoConv),
        Err(_) => return row.blank(6).flag(Flag::Singular),
    };
    let row = row.complex(sts);
    if ratio > 1.0 {
        // the comparison times are opaque-barrier forms, undefined above V0
        return row.blank(4);
    }
    match table1_times(params, barrier, energy) {
        Ok(f) => row.num(f.tau_phase / tau).num(f.tau_dwell / tau).num(f.tau_larmor / tau).num(f.tau_bl / tau),
        Err(_) => row.blank(4).flag(Flag::Singular),
    }
}

fn sweep_path(out: &Path, k0l: f64) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sweep".into());
    let name = match out.extension() {
        Some(ext) => format!("{stem}_k0l_{k0l:.6}.{}", ext.to_string_lossy()),
        None => format!("{stem}_k0l_{k0l:.6}"),
    };
    out.with_file_name(name)
}

fn sweep(cfg: &RunConfig) -> Result<CommandOutput> {
    let params = cfg.params()?;
    let barriers = cfg.sweep_barriers()?;
    let ratios = cfg.kgrid.values();
    let single = barriers.len() == 1;

    let mut out = CommandOutput::default();
    for (k0l, barrier) in barriers {
        let rows: Vec<Row> = ratios.par_iter().map(|&r| sweep_row(&params, &barrier, r)).collect();
        let mut table = Table::new(&SWEEP_COLUMNS);
        rows.into_iter().for_each(|r| table.push(r));
        if table.worst_flag() == Flag::NoConv {
            out.status = EXIT_NO_CONVERGENCE;
        }
        let path = cfg.out.as_ref().map(|p| if single { p.clone() } else { sweep_path(p, k0l) });
        out.blocks.push((path, table.render()));
    }
    Ok(out)
}

fn density(cfg: &RunConfig) -> Result<CommandOutput> {
    let params = cfg.params()?;
    let barrier = cfg.barrier()?;
    let settings = cfg.quadrature()?;
    let packet = WavePacketSpec::right_moving(cfg.window()?);
    let grid = density_grid(&packet, &Geometry::new(params, barrier), cfg.xrange, cfg.trange, cfg.nx, cfg.nt, &settings)?;

    let mut table = Table::new(&["x", "t", "rho", "rho_err"]);
    for (ix, &x) in grid.xs.iter().enumerate() {
        for (it, &t) in grid.ts.iter().enumerate() {
            let s = grid.get(ix, it);
            let flag = if s.converged { Flag::Ok } else { Flag::NoConv };
            table.push(Row::new().num(x).num(t).num(s.rho).num(s.error_bound).flag(flag));
        }
    }
    let status = if table.worst_flag() == Flag::NoConv { EXIT_NO_CONVERGENCE } else { EXIT_OK };
    let mut out = CommandOutput::single(cfg, table.render(), status);
    if status != EXIT_OK {
        out.diagnostics.push("some density cells did not reach the requested tolerance (flag = noconv)".into());
    }
    Ok(out)
}

fn reference(cfg: &RunConfig) -> Result<CommandOutput> {
    let params = cfg.params()?;
    let barrier = cfg.barrier()?;
    let e = cfg.emax;
    let f = table1_times(&params, &barrier, e)?;
    let sts = tunneling_time_closed(&params, &barrier, e)?;
    let tau = tau0(&params, &barrier)?;
    let mut table = Table::new(&[
        "energy",
        "k_over_k0",
        "tau0",
        "tau_phase",
        "tau_dwell",
        "tau_larmor",
        "tau_bl",
        "tau_complex_re",
        "tau_complex_im",
        "tau_stochastic_re",
        "tau_stochastic_im",
        "tau_sts_re",
        "tau_sts_im",
    ]);
    table.push(
        Row::new()
            .num(e)
            .num((e / barrier.height()).sqrt())
            .num(tau)
            .num(f.tau_phase)
            .num(f.tau_dwell)
            .num(f.tau_larmor)
            .num(f.tau_bl)
            .complex(f.tau_complex)
            .complex(f.tau_stochastic)
            .complex(sts.value()),
    );
    Ok(CommandOutput::single(cfg, table.render(), EXIT_OK))
}

/// One verification outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }

    fn from_result(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

/// Observed orders `log2(e_k/e_{k+1})` over successive halvings.
fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

fn order_check<F: Fn(&UniformGrid) -> Result<f64>>(base: UniformGrid, threshold: f64, err: F) -> Result<(bool, String)> {
    let grids = [base, base.refined(), base.refined().refined()];
    let errors = grids.iter().map(&err).collect::<Result<Vec<_>>>()?;
    let q = orders(&errors);
    let worst = q.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((
        worst >= threshold,
        format!("n = {}, errors {:.3e} {:.3e} {:.3e}, orders {:.3} {:.3} (need >= {threshold})", base.len(), errors[0], errors[1], errors[2], q[0], q[1]),
    ))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Run every verification check with the physical parameters of `cfg`.
///
/// Fractional checks use `f = e^{−iωt}` with `ω = 1/ħ` over one period and a
/// base grid of `cfg.nt` samples refined twice; limit checks use the barrier of `cfg`.
pub fn verify_report(cfg: &RunConfig) -> Result<Vec<Check>> {
    let params = cfg.params()?;
    let barrier = cfg.barrier()?;
    if barrier.height() <= 0.0 {
        return Err(Error::InvalidInput("verify needs a barrier with V0 > 0".into()));
    }
    let (m, hbar, width, v0) = (params.mass(), params.hbar(), barrier.width(), barrier.height());
    let omega = 1.0 / hbar;
    let base = UniformGrid::spanning(0.0, 2.0 * PI / omega, cfg.nt.max(3))?;
    let mut checks = Vec::new();

    checks.push(Check::from_result("caputo_constant_zero", (|| {
        let d = caputo_half(&SampledSignal::from_fn(base, |_| Complex64::new(1.0, -2.0)))?;
        let zero = d.values().iter().all(|v| *v == Complex64::new(0.0, 0.0));
        Ok((zero, "D^1/2 of a constant is exactly 0".to_string()))
    })()));
    checks.push(Check::from_result(
        "caputo_eigen_order",
        order_check(base, 1.0, |g| eigen_error(omega, g, HalfOrder::Derivative)),
    ));
    checks.push(Check::from_result(
        "rl_integral_eigen_order",
        order_check(base, 1.0, |g| eigen_error(omega, g, HalfOrder::Integral)),
    ));
    let v_weak = 0.2 * hbar * omega;
    checks.push(Check::from_result("weak_pde_analytic_residual", (|| {
        let mut worst: f64 = 0.0;
        for c in Component::BOTH {
            worst = worst.max(weak_pde_residual(&params, v_weak, omega, c, &base, ResidualMode::Analytic)?);
        }
        Ok((worst <= 1e-12, format!("max residual {worst:.3e} (need <= 1e-12)")))
    })()));
    checks.push(Check::from_result(
        "weak_pde_discrete_order",
        order_check(base, 1.0, |g| weak_pde_residual(&params, v_weak, omega, Component::Plus, g, ResidualMode::Discrete)),
    ));

    let p0 = (2.0 * m * v0).sqrt();
    let tau = tau0(&params, &barrier)?;
    checks.push(Check::from_result("limit_emax_to_zero", (|| {
        let t = tunneling_time_closed(&params, &barrier, 1e-8 * v0)?;
        let want = Complex64::new(0.0, m * width / p0);
        let r = rel(t.value(), want);
        Ok((r <= 1e-6, format!("|T - imL/p0|/|imL/p0| = {r:.3e} (need <= 1e-6)")))
    })()));
    checks.push(Check::from_result("limit_hbar_to_zero", (|| {
        let e = 0.1 * v0;
        let tiny = PhysicalParams::new(m, hbar * 1e-6)?;
        let t = tunneling_time_closed(&tiny, &barrier, e)?;
        let want = Complex64::new(0.0, m * width / (2.0 * m * (v0 - e)).sqrt());
        let r = rel(t.value(), want);
        Ok((r <= 1e-4, format!("|T - imL/pE|/|imL/pE| = {r:.3e} (need <= 1e-4)")))
    })()));
    checks.push(Check::from_result("anchor_tau0", (|| {
        let t = tunneling_time_closed(&params, &barrier, 1e-8 * v0)?;
        let ratio = t.im() / tau;
        Ok(((ratio - 1.0).abs() <= 1e-4, format!("Im T/tau0 = {ratio:.10} (need 1 +- 1e-4)")))
    })()));
    checks.push(Check::from_result("anti_hermitian_below_barrier", (|| {
        let mut worst: f64 = 0.0;
        for j in 1..=9 {
            let r = j as f64 / 10.0;
            let t = tunneling_time_closed(&params, &barrier, r * r * v0)?;
            worst = worst.max(t.re().abs() / t.im().abs());
        }
        Ok((worst <= 1e-12, format!("max |Re T|/|Im T| = {worst:.3e} (need <= 1e-12)")))
    })()));
    checks.push(Check::from_result("series_cubic_remainder", (|| {
        let devs = [1e-2, 5e-3, 2.5e-3]
            .iter()
            .map(|eps| {
                let c = tunneling_time_closed(&params, &barrier, eps * v0)?;
                let s = tunneling_time_series(&params, &barrier, eps * v0)?;
                Ok(rel(s.value(), c.value()))
            })
            .collect::<Result<Vec<_>>>()?;
        let f1 = devs[0] / devs[1];
        let f2 = devs[1] / devs[2];
        Ok((f1 >= 7.0 && f2 >= 7.0, format!("reduction factors {f1:.3} {f2:.3} (need >= 7)")))
    })()));
    checks.push(Check::from_result("classical_average", (|| {
        let eps = 1e-2;
        let avg = classical_energy_avg_time(&params, &barrier, eps * v0)?;
        let first = tunneling_time_first_order(&params, &barrier, eps * v0)?;
        let r = (avg - first.norm()).abs() / first.norm();
        Ok((r <= eps * eps, format!("relative gap {r:.3e} (need <= {:.1e})", eps * eps)))
    })()));
    checks.push(Check::from_result("free_particle_ratio", (|| {
        let eps = 1e-2;
        let e = eps * v0;
        let free = weak_travel_time(&params, &Barrier::new(0.0, width)?, &EnergyWindow::new(0.0, e)?)?;
        let exact_free = 2.0 * m * width / (2.0 * m * e).sqrt();
        let ratio = free_to_tunnel_ratio(&params, &barrier, e)?;
        let exact = 2.0 * ((v0 - e) / e).sqrt();
        let approx = 2.0 * (v0 / e).sqrt();
        let ok = (free - exact_free).abs() <= 1e-14 * exact_free
            && (ratio - exact).abs() <= 1e-12 * exact
            && (ratio - approx).abs() <= 0.05 * approx;
        Ok((ok, format!("ratio {ratio:.12} vs 2sqrt((V0-E)/E) = {exact:.12}")))
    })()));
    Ok(checks)
}

fn verify(cfg: &RunConfig) -> Result<CommandOutput> {
    let checks = verify_report(cfg)?;
    let mut report = String::new();
    for c in &checks {
        report.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    report.push_str(&format!("{} of {} checks passed\n", checks.len() - failed, checks.len()));
    let status = if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok(CommandOutput { blocks: vec![(None, report)], diagnostics: Vec::new(), status })
}
