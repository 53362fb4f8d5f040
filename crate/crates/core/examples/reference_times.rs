//! Comparison tunnelling times against the STS time for one barrier strength,
//! all in units of τ0.
//!
//!     cargo run --example reference_times -- [k0L]

use sts_core::phys::tau0;
use sts_core::reference::{opaque_limits, table1_times};
use sts_core::solver::tunneling_time_closed;
use sts_core::{Barrier, PhysicalParams};

fn main() -> sts_core::Result<()> {
    let k0l: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3.0 * std::f64::consts::PI);
    let params = PhysicalParams::natural();
    let barrier = Barrier::from_strength(k0l)?;
    let tau = tau0(&params, &barrier)?;

    println!("k0L = {k0l:.4}, V0 = {:.4}", barrier.height());
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>16}",
        "k/k0", "Im T_sts", "phase", "dwell", "larmor", "BL", "stochastic"
    );
    for j in 1..10 {
        let r = j as f64 / 10.0;
        let e = r * r * barrier.height();
        let f = table1_times(&params, &barrier, e)?;
        let sts = tunneling_time_closed(&params, &barrier, e)?;
        println!(
            "{r:>6.2} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>16}",
            sts.im() / tau,
            f.tau_phase / tau,
            f.tau_dwell / tau,
            f.tau_larmor / tau,
            f.tau_bl / tau,
            format!("{:.4}", f.tau_stochastic / tau),
        );
    }
    let lim = opaque_limits(&params, &barrier, 1e-4 * barrier.height())?;
    println!("opaque limits at E/V0 = 1e-4: larmor {:.6}, phase {:.6}", lim.tau_larmor / tau, lim.tau_phase / tau);
    Ok(())
}
