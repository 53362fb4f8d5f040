//! Phase-integral waves: on a rectangular barrier the WKB wave is the exact
//! plane wave; on a smooth bump it gives the familiar decay exponent.
//!
//!     cargo run --example wkb_phase

use num_complex::Complex64;
use sts_core::solver::{connect_barrier, spatial_wave, wkb_spatial, Component};
use sts_core::{Barrier, PhysicalParams, QuadratureSettings};

fn main() -> sts_core::Result<()> {
    let params = PhysicalParams::natural();
    let settings = QuadratureSettings::default();
    let barrier = Barrier::new(100.0, 1.0)?;
    let e = 10.0;

    let one = Complex64::new(1.0, 0.0);
    let exact = connect_barrier(&params, &barrier, e, one, one)?;
    println!("{:>6} {:>26} {:>26}", "x", "plane wave", "phase integral");
    for j in 0..=5 {
        let x = 0.2 * j as f64;
        let g = spatial_wave(&exact, &params, x, Component::Plus);
        let w = wkb_spatial(&params, |s| barrier.potential(s), e, 0.0, x, Component::Plus, &settings)?;
        println!("{x:>6.2} {:>26} {:>26}", format!("{g:.6e}"), format!("{w:.6e}"));
    }

    // V(x) = V0 (1 - x²) on [-1, 1]: |ψ| falls by exp(-∫κ dx) across the classically forbidden core
    let bump = |x: f64| if x.abs() < 1.0 { 100.0 * (1.0 - x * x) } else { 0.0 };
    let turn = (1.0 - e / 100.0f64).sqrt();
    let w = wkb_spatial(&params, bump, e, -turn, turn, Component::Plus, &settings)?;
    println!("bump: |psi| ratio across the forbidden region = {:.6e}", w.norm());
    // ∫ √(2(V0(1 − x²) − E)) dx over the turning points = π√(2V0)·turn²/2
    let gamow = std::f64::consts::PI * (200.0f64).sqrt() * turn * turn / 2.0;
    println!("closed form exp(-pi*sqrt(2V0)*a^2/2) = {:.6e}", (-gamow).exp());
    Ok(())
}
