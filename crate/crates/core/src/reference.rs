//! Comparison tunnelling times for a rectangular barrier in their opaque-barrier
//! (`V0 ≫ E`) forms: phase, dwell, Larmor, Büttiker–Landauer, complex and
//! stochastic-model times.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phys::{momentum, wavenumbers, Barrier, PhysicalParams};
use crate::solver::ComplexTime;

/// One row of comparison times at a single energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeFamily {
    /// `τ_P = τ_φ ≃ 2m/(ħkκ)`
    pub tau_phase: f64,
    /// `τ_D = τ_y ≃ 2mk/(ħκk0²)`
    pub tau_dwell: f64,
    /// `τ_L = τ_z ≃ mL/(ħκ)`
    pub tau_larmor: f64,
    /// `τ_BL = √(τ_z² + τ_y²)`
    pub tau_bl: f64,
    /// `τ_y − iτ_z`, so that `Im τ_C = −τ_L` and `|τ_C| = τ_BL`.
    pub tau_complex: Complex64,
    /// `a(mL/ħκ)² + i·mL/(ħκ)`
    pub tau_stochastic: Complex64,
}

/// `V0 ≫ E` limits of the same quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpaqueLimits {
    pub tau_phase: f64,
    pub tau_dwell: f64,
    pub tau_larmor: f64,
    pub tau_complex_im: f64,
    pub tau_stochastic: Complex64,
    pub tau_sts: Complex64,
}

pub fn table1_times(params: &PhysicalParams, barrier: &Barrier, energy: f64) -> Result<TimeFamily> {
    if !(energy > 0.0) {
        return Err(Error::domain(format!("comparison times need E > 0 (phase time pole), got {energy}")));
    }
    if !(energy < barrier.height()) {
        return Err(Error::domain(format!(
            "comparison times need E < V0 = {} (kappa -> 0 pole), got {energy}",
            barrier.height()
        )));
    }
    let (m, hbar, width) = (params.mass(), params.hbar(), barrier.width());
    let w = wavenumbers(params, barrier, energy)?;
    let kappa = w.kappa.re;

    let tau_phase = 2.0 * m / (hbar * w.k * kappa);
    let tau_dwell = 2.0 * m * w.k / (hbar * kappa * w.k0 * w.k0);
    let tau_larmor = m * width / (hbar * kappa);
    let a = friction_coefficient(params, barrier, energy)?;
    Ok(TimeFamily {
        tau_phase,
        tau_dwell,
        tau_larmor,
        tau_bl: tau_larmor.hypot(tau_dwell),
        tau_complex: Complex64::new(tau_dwell, -tau_larmor),
        tau_stochastic: a * tau_larmor * tau_larmor + Complex64::new(0.0, tau_larmor),
    })
}

pub fn opaque_limits(params: &PhysicalParams, barrier: &Barrier, energy: f64) -> Result<OpaqueLimits> {
    let w = wavenumbers(params, barrier, energy)?;
    if barrier.height() <= 0.0 {
        return Err(Error::domain("opaque limits need V0 > 0"));
    }
    let (m, hbar, width) = (params.mass(), params.hbar(), barrier.width());
    let larmor = m * width / (hbar * w.k0);
    Ok(OpaqueLimits {
        tau_phase: 2.0 * m / (hbar * w.k * w.k0),
        tau_dwell: 0.0,
        tau_larmor: larmor,
        tau_complex_im: -larmor,
        tau_stochastic: Complex64::new(0.0, larmor),
        tau_sts: Complex64::new(0.0, larmor),
    })
}

/// Telegrapher's-equation coefficient matched to the second-order STS term:
/// `a = i·m²E_max²/(12ħV0)`.
pub fn friction_coefficient(params: &PhysicalParams, barrier: &Barrier, e_max: f64) -> Result<Complex64> {
    if barrier.height() <= 0.0 {
        return Err(Error::domain("friction coefficient needs V0 > 0"));
    }
    let m = params.mass();
    Ok(Complex64::new(0.0, m * m * e_max * e_max / (12.0 * params.hbar() * barrier.height())))
}

/// `mL/√(2m(E − V0))`: real above the barrier, `−i·|·|` below it.
pub fn classical_crossing_time(params: &PhysicalParams, barrier: &Barrier, energy: f64) -> Result<ComplexTime> {
    if energy == barrier.height() {
        return Err(Error::domain(format!("classical crossing time has a pole at E = V0 = {energy}")));
    }
    let p = momentum(energy, barrier.height(), params);
    Ok(ComplexTime(params.mass() * barrier.width() / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural() -> (PhysicalParams, Barrier) {
        (PhysicalParams::natural(), Barrier::new(100.0, 1.0).unwrap())
    }

    #[test]
    fn table_values_at_half_height() {
        let (p, b) = natural();
        let t = table1_times(&p, &b, 50.0).unwrap();
        assert!((t.tau_larmor - 0.1).abs() < 1e-15);
        assert!((t.tau_dwell - 0.01).abs() < 1e-16);
        assert!((t.tau_phase - 0.02).abs() < 1e-16);
        // √(0.1² + 0.01²) = 0.1004987562112089
        assert!((t.tau_bl - 0.100_498_756_211_208_9).abs() < 1e-15);
        assert_eq!(t.tau_complex.im, -t.tau_larmor);
        assert!((t.tau_complex.norm() - t.tau_bl).abs() < 1e-15);
    }

    #[test]
    fn table_domain() {
        let (p, b) = natural();
        assert!(table1_times(&p, &b, 0.0).is_err());
        assert!(table1_times(&p, &b, 100.0).is_err());
        assert!(table1_times(&p, &b, 120.0).is_err());
    }

    #[test]
    fn opaque_limit_column() {
        let (p, b) = natural();
        let e = 1e-6;
        let t = table1_times(&p, &b, e).unwrap();
        let lim = opaque_limits(&p, &b, e).unwrap();
        assert!((t.tau_phase / lim.tau_phase - 1.0).abs() < 1e-8);
        assert!((t.tau_larmor / lim.tau_larmor - 1.0).abs() < 1e-8);
        assert!(t.tau_dwell < 1e-3 * t.tau_larmor);
        assert!((t.tau_stochastic.im - lim.tau_stochastic.im).abs() < 1e-8);
    }

    #[test]
    fn friction_values() {
        let (p, b) = natural();
        assert_eq!(friction_coefficient(&p, &b, 0.0).unwrap(), Complex64::new(0.0, 0.0));
        let a = friction_coefficient(&p, &b, 10.0).unwrap();
        assert!((a - Complex64::new(0.0, 1.0 / 12.0)).norm() < 1e-16);
        assert!(friction_coefficient(&p, &Barrier::new(0.0, 1.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn friction_matches_second_order_term() {
        let p = PhysicalParams::new(1.7, 0.3).unwrap();
        let b = Barrier::new(40.0, 2.5).unwrap();
        let e = 0.4;
        let a = friction_coefficient(&p, &b, e).unwrap();
        let p0 = (2.0 * p.mass() * b.height()).sqrt();
        let lhs = a * (b.width() / p0).powi(2);
        let rhs = p.mass() * b.width().powi(2) / (24.0 * p.hbar()) * (e / b.height()).powi(2);
        assert!((lhs.im - rhs).abs() < 1e-14 * rhs);
        assert_eq!(lhs.re, 0.0);
    }

    #[test]
    fn crossing_time_examples() {
        let (p, b) = natural();
        let above = classical_crossing_time(&p, &b, 200.0).unwrap();
        assert!((above.re() - 0.070_710_678_118_654_75).abs() < 1e-16);
        assert_eq!(above.im(), 0.0);
        let below = classical_crossing_time(&p, &b, 0.0).unwrap();
        assert_eq!(below.re(), 0.0);
        assert!((below.im() + 1.0 / 200f64.sqrt()).abs() < 1e-16);
        assert!(classical_crossing_time(&p, &b, 100.0).is_err());
    }
}
