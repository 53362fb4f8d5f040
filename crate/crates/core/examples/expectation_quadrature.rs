//! ⟨T⟩(x) along the line for a packet with both momentum components, by the
//! analytic-derivative quadrature and by the finite-difference oracle.
//!
//!     cargo run --release --example expectation_quadrature

use num_complex::Complex64;
use sts_core::quadrature::oracle_expectation_time;
use sts_core::solver::{expectation_time, Distribution};
use sts_core::{Barrier, EnergyWindow, Geometry, PhysicalParams, QuadratureSettings, WavePacketSpec};

fn main() -> sts_core::Result<()> {
    let geometry = Geometry::new(PhysicalParams::natural(), Barrier::new(20.0, 1.0)?);
    let window = EnergyWindow::new(0.0, 6.0)?;
    // right movers fading out with energy, a weak left-moving background
    let plus = Distribution::Tabulated(vec![(0.0, Complex64::new(1.0, 0.0)), (6.0, Complex64::new(0.2, 0.0))]);
    let minus = Distribution::Constant(Complex64::new(0.3, 0.0));
    let packet = WavePacketSpec::new(window, plus, minus)?;
    let settings = QuadratureSettings::default();

    println!("{:>6} {:>24} {:>24} {:>10}", "x", "<T> analytic", "<T> oracle", "rel diff");
    for j in 0..=12 {
        let x = -1.0 + 0.25 * j as f64;
        let a = expectation_time(&packet, &geometry, x, &settings)?;
        let o = oracle_expectation_time(&packet, &geometry, x, &settings)?;
        let rel = (a - o).norm() / a.norm();
        println!("{x:>6.2} {:>24} {:>24} {rel:>10.2e}", format!("{a:.6}"), format!("{o:.6}"));
    }
    Ok(())
}
