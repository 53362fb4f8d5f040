//! Closed form, second-order series and classical average of the tunnelling
//! time for a flat packet on [0, E_max], as E_max sweeps up to the barrier top.
//!
//!     cargo run --example tunnel_closed_form -- [V0]

use sts_core::phys::tau0;
use sts_core::solver::{classical_energy_avg_time, tunneling_time_closed, tunneling_time_series};
use sts_core::{Barrier, PhysicalParams};

fn main() -> sts_core::Result<()> {
    let v0: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100.0);
    let params = PhysicalParams::natural();
    let barrier = Barrier::new(v0, 1.0)?;
    let tau = tau0(&params, &barrier)?;

    println!("V0 = {v0}, tau0 = {tau:.6}");
    println!("{:>10} {:>14} {:>14} {:>14}", "Emax/V0", "Im T/tau0", "series/tau0", "classical/tau0");
    for ratio in [1e-8, 1e-4, 1e-2, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let e = ratio * v0;
        let closed = tunneling_time_closed(&params, &barrier, e)?;
        let series = tunneling_time_series(&params, &barrier, e)?;
        let classical = classical_energy_avg_time(&params, &barrier, e)?;
        println!(
            "{ratio:>10.1e} {:>14.8} {:>14.8} {:>14.8}",
            closed.im() / tau,
            series.im() / tau,
            classical / tau
        );
    }
    Ok(())
}
