//! Order-½ operators on a uniform grid: convergence of the L1 Caputo scheme and
//! of the weak-potential residual for the plane wave e^{-iωt}.
//!
//!     cargo run --release --example fractional_residual

use sts_core::fractional::{eigen_error, weak_pde_residual, HalfOrder, ResidualMode, UniformGrid};
use sts_core::solver::Component;
use sts_core::PhysicalParams;

fn main() -> sts_core::Result<()> {
    let params = PhysicalParams::natural();
    let omega = 1.0;
    let v0 = 0.4;
    let mut grid = UniformGrid::spanning(0.0, 2.0 * std::f64::consts::PI, 17)?;

    let analytic = weak_pde_residual(&params, v0, omega, Component::Plus, &grid, ResidualMode::Analytic)?;
    println!("analytic residual: {analytic:.3e}");
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "n", "caputo err", "rl err", "pde resid", "order");
    let mut last: Option<f64> = None;
    for _ in 0..5 {
        let caputo = eigen_error(omega, &grid, HalfOrder::Derivative)?;
        let rl = eigen_error(omega, &grid, HalfOrder::Integral)?;
        let pde = weak_pde_residual(&params, v0, omega, Component::Plus, &grid, ResidualMode::Discrete)?;
        let order = last.map(|l| format!("{:.3}", (l / pde).log2())).unwrap_or_default();
        println!("{:>6} {caputo:>12.3e} {rl:>12.3e} {pde:>12.3e} {order:>12}", grid.len());
        last = Some(pde);
        grid = grid.refined();
    }
    Ok(())
}
