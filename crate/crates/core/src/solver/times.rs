//! Closed-form travel and tunnelling times for a flat (`C⁺ = const`, `C⁻ = 0`)
//! packet on `[0, E_max]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phys::{momentum, Barrier, EnergyWindow, PhysicalParams};

use super::ComplexTime;

/// Relative guard band below `V0`: strong-potential operations need
/// `E_max < V0·(1 − BRANCH_GUARD)`.
pub const BRANCH_GUARD: f64 = 1e-9;

fn check_below_barrier(barrier: &Barrier, e_max: f64) -> Result<()> {
    let v0 = barrier.height();
    if !(e_max > 0.0) {
        return Err(Error::domain(format!("E_max must be positive, got {e_max}")));
    }
    if !(e_max < v0 * (1.0 - BRANCH_GUARD)) {
        return Err(Error::domain(format!(
            "E_max = {e_max} must lie below the barrier height V0 = {v0} (strong-potential regime)"
        )));
    }
    Ok(())
}

/// `e^{−a} − 1 + a` without cancellation for small `a`.
fn exp_remainder(a: f64) -> f64 {
    if a.abs() < 1.0 {
        let mut term = a * a / 2.0;
        let mut sum: f64 = 0.0;
        let mut k = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            sum += term;
            k += 1.0;
            term *= -a / k;
        }
        sum
    } else {
        (-a).exp() - 1.0 + a
    }
}

/// `⟨T⟩(x)` inside the barrier (`0 < x ≤ L`) for the flat packet below the barrier:
///
/// `2imx²(1 − γ) / (ħ(1 − γ) + 2x(p_E − p0γ))`, `γ = exp[−2(p0 − p_E)x/ħ]`.
///
/// The denominator is evaluated as `2xp0(1 − γ) − ħ(e^{−a} − 1 + a)` with
/// `a = 2(p0 − p_E)x/ħ`, which stays accurate as `x → 0` or `E_max → 0`.
pub fn expectation_time_closed(params: &PhysicalParams, barrier: &Barrier, e_max: f64, x: f64) -> Result<ComplexTime> {
    check_below_barrier(barrier, e_max)?;
    if !(x > 0.0 && x <= barrier.width()) {
        return Err(Error::domain(format!("closed form holds for 0 < x <= L, got x = {x}")));
    }
    let (m, hbar) = (params.mass(), params.hbar());
    let p0 = (2.0 * m * barrier.height()).sqrt();
    let pe = (2.0 * m * (barrier.height() - e_max)).sqrt();
    let gap = 2.0 * m * e_max / (p0 + pe); // p0 − p_E
    let a = 2.0 * gap * x / hbar;
    let one_minus_gamma = -(-a).exp_m1();
    let denom = 2.0 * x * p0 * one_minus_gamma - hbar * exp_remainder(a);
    Ok(ComplexTime::new(0.0, 2.0 * m * x * x * one_minus_gamma / denom))
}

/// `T_STS(0 → L) = ⟨T⟩(L) − ⟨T⟩(0)`, purely imaginary below the barrier.
pub fn tunneling_time_closed(params: &PhysicalParams, barrier: &Barrier, e_max: f64) -> Result<ComplexTime> {
    expectation_time_closed(params, barrier, e_max, barrier.width())
}

/// The closed form continued to `E_max > V0` with `p_E = √(2m(V0 − E_max)) = +i|p_E|`.
/// Below the barrier this is [`tunneling_time_closed`]. Within the guard band
/// around `V0` it is a domain error.
pub fn tunneling_time_extended(params: &PhysicalParams, barrier: &Barrier, e_max: f64) -> Result<ComplexTime> {
    let v0 = barrier.height();
    if e_max <= v0 {
        return tunneling_time_closed(params, barrier, e_max);
    }
    if !(e_max > v0 * (1.0 + BRANCH_GUARD)) || !e_max.is_finite() {
        return Err(Error::domain(format!("E_max = {e_max} sits on the branch point V0 = {v0}")));
    }
    let (m, hbar, width) = (params.mass(), params.hbar(), barrier.width());
    let p0 = Complex64::new((2.0 * m * v0).sqrt(), 0.0);
    let pe = momentum(v0, e_max, params);
    let gamma = (-(p0 - pe) * 2.0 * width / hbar).exp();
    let one = Complex64::new(1.0, 0.0);
    let value = Complex64::i() * 2.0 * m * width * width * (one - gamma)
        / ((one - gamma) * hbar + (pe - p0 * gamma) * 2.0 * width);
    Ok(ComplexTime(value))
}

/// Expansion to second order in `E_max/V0`:
/// `(imL/p0)(1 + ε/4) + (imL/8p0 + imL²/24ħ)ε²`.
pub fn tunneling_time_series(params: &PhysicalParams, barrier: &Barrier, e_max: f64) -> Result<ComplexTime> {
    check_below_barrier(barrier, e_max)?;
    let (m, hbar, width) = (params.mass(), params.hbar(), barrier.width());
    let p0 = (2.0 * m * barrier.height()).sqrt();
    let eps = e_max / barrier.height();
    let first = m * width / p0 * (1.0 + eps / 4.0);
    let second = (m * width / (8.0 * p0) + m * width * width / (24.0 * hbar)) * eps * eps;
    Ok(ComplexTime::new(0.0, first + second))
}

/// First line of the series only: `(imL/p0)(1 + E_max/4V0)`.
pub fn tunneling_time_first_order(params: &PhysicalParams, barrier: &Barrier, e_max: f64) -> Result<ComplexTime> {
    check_below_barrier(barrier, e_max)?;
    let p0 = (2.0 * params.mass() * barrier.height()).sqrt();
    let eps = e_max / barrier.height();
    Ok(ComplexTime::new(0.0, params.mass() * barrier.width() / p0 * (1.0 + eps / 4.0)))
}

/// Energy average of the classical crossing times `mL/√(2m(V0 − E))` over `[0, E_max]`,
/// i.e. `L(p0 − p_E)/E_max = 2mL/(p0 + p_E)`.
pub fn classical_energy_avg_time(params: &PhysicalParams, barrier: &Barrier, e_max: f64) -> Result<f64> {
    check_below_barrier(barrier, e_max)?;
    let m = params.mass();
    let p0 = (2.0 * m * barrier.height()).sqrt();
    let pe = (2.0 * m * (barrier.height() - e_max)).sqrt();
    Ok(2.0 * m * barrier.width() / (p0 + pe))
}

/// Travel time across `[0, L]` above a weak potential:
/// `(L/ΔE)[√(2m(E_f − V0)) − √(2m(E_i − V0))] = 2mL/(p_f + p_i)`.
pub fn weak_travel_time(params: &PhysicalParams, barrier: &Barrier, window: &EnergyWindow) -> Result<f64> {
    let v0 = barrier.height();
    if window.lo() < v0 {
        return Err(Error::domain(format!(
            "weak-potential travel time needs E_i >= V0, got E_i = {} and V0 = {v0}",
            window.lo()
        )));
    }
    let m = params.mass();
    let pf = (2.0 * m * (window.hi() - v0)).sqrt();
    let pi = (2.0 * m * (window.lo() - v0)).sqrt();
    Ok(2.0 * m * barrier.width() / (pf + pi))
}

/// Free travel time over `[0, E_max]` divided by the first-order tunnelling
/// magnitude `mL/√(2m(V0 − E_max))`; equals `2√((V0 − E_max)/E_max)`.
pub fn free_to_tunnel_ratio(params: &PhysicalParams, barrier: &Barrier, e_max: f64) -> Result<f64> {
    check_below_barrier(barrier, e_max)?;
    let free_barrier = Barrier::new(0.0, barrier.width())?;
    let free = weak_travel_time(params, &free_barrier, &EnergyWindow::new(0.0, e_max)?)?;
    let m = params.mass();
    let tunnel = m * barrier.width() / (2.0 * m * (barrier.height() - e_max)).sqrt();
    Ok(free / tunnel)
}
