//! ρ(x|t) on a coarse grid for a flat packet hitting a tall barrier, printed as
//! a character heat map (rows are t, columns are x).
//!
//!     cargo run --release --example density_map

use sts_core::solver::density_grid;
use sts_core::{Barrier, EnergyWindow, Geometry, PhysicalParams, QuadratureSettings, WavePacketSpec};

fn main() -> sts_core::Result<()> {
    let geometry = Geometry::new(PhysicalParams::natural(), Barrier::new(100.0, 1.0)?);
    let packet = WavePacketSpec::right_moving(EnergyWindow::new(0.0, 1.0)?);
    let (nx, nt) = (61, 31);
    let grid = density_grid(&packet, &geometry, (-1.0, 2.0), (0.0, 15.0), nx, nt, &QuadratureSettings::default())?;

    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    let peak = grid.samples.iter().map(|s| s.rho).fold(0.0, f64::max);
    println!("x from -1 to 2 (barrier on [0, 1]), t from 0 to 15; darkest = {peak:.3}, log scale over 4 decades");
    for it in 0..nt {
        let line: String = (0..nx)
            .map(|ix| {
                let level = ((grid.rho(ix, it) / peak).log10() + 4.0) / 4.0;
                let k = (level.clamp(0.0, 0.999) * shades.len() as f64) as usize;
                shades[k]
            })
            .collect();
        println!("t={:>5.1} |{line}|", grid.ts[it]);
    }
    Ok(())
}
