//! Order-½ fractional operators on uniform grids and the residual of the
//! weak-potential fractional equation for plane-wave solutions.
//!
//! Both discrete operators use the grid start as their lower terminal:
//! * Caputo derivative: L1 scheme (piecewise-linear `f`, order 1.5),
//! * Riemann–Liouville integral: product trapezoid rule (order 2).
//!
//! The eigenvalue rule `∂^α e^{βt} = β^α e^{βt}` only holds for a terminal at
//! `−∞`. For `β = −iω` the missing history `(−∞, t0]` is available in closed
//! contour form through [`history_tail`], which the residual checks add back.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phys::PhysicalParams;
use crate::quadrature::{integrate_complex, QuadratureSettings};
use crate::solver::Component;

/// `t_j = t0 + j·dt`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    t0: f64,
    dt: f64,
    n: usize,
}

impl UniformGrid {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !t0.is_finite() || !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!("grid needs finite t0 and dt > 0, got t0 = {t0}, dt = {dt}")));
        }
        if n < 2 {
            return Err(Error::invalid(format!("grid needs at least two samples, got {n}")));
        }
        Ok(Self { t0, dt, n })
    }

    /// `n` samples spanning `[t0, t1]`.
    pub fn spanning(t0: f64, t1: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("grid needs at least two samples, got {n}")));
        }
        Self::new(t0, (t1 - t0) / (n - 1) as f64, n)
    }

    /// Same span with the step halved (`2n − 1` samples).
    pub fn refined(&self) -> Self {
        Self { t0: self.t0, dt: 0.5 * self.dt, n: 2 * self.n - 1 }
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    /// Indices of the last third of the grid, where the terminal transient is smallest.
    pub fn trailing_third(&self) -> std::ops::Range<usize> {
        (2 * self.n / 3).max(1)..self.n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: UniformGrid,
    values: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "signal has {} samples but the grid has {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: UniformGrid, f: F) -> Self {
        let values = (0..grid.len()).map(|j| f(grid.time(j))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// `β^α` on the principal branch, `arg β ∈ (−π, π]`.
pub fn frac_power(alpha: f64, beta: Complex64) -> Result<Complex64> {
    if beta == Complex64::new(0.0, 0.0) {
        return match alpha {
            a if a > 0.0 => Ok(Complex64::new(0.0, 0.0)),
            0.0 => Ok(Complex64::new(1.0, 0.0)),
            _ => Err(Error::domain(format!("0^{alpha} is a pole"))),
        };
    }
    let mut arg = beta.im.atan2(beta.re);
    if arg == -PI {
        arg = PI;
    }
    Ok(Complex64::from_polar(beta.norm().powf(alpha), alpha * arg))
}

/// Order-½ Caputo derivative by the L1 scheme:
/// `D f(t_n) ≈ dt^{−1/2}/Γ(3/2) · Σ_{j<n} b_j (f_{n−j} − f_{n−j−1})`,
/// `b_j = (j+1)^{1/2} − j^{1/2}`. The first sample is 0.
pub fn caputo_half(signal: &SampledSignal) -> Result<SampledSignal> {
    let grid = signal.grid;
    if grid.len() < 3 {
        return Err(Error::invalid(format!("Caputo derivative needs n >= 3, got {}", grid.len())));
    }
    let f = &signal.values;
    let n = grid.len();
    let weights: Vec<f64> = (0..n).map(|j| ((j + 1) as f64).sqrt() - (j as f64).sqrt()).collect();
    let coef = 2.0 / (PI.sqrt() * grid.dt.sqrt());

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let acc: Complex64 = (0..k).map(|j| (f[k - j] - f[k - j - 1]) * weights[j]).sum();
        *slot = acc * coef;
    }
    Ok(SampledSignal { grid, values: out })
}

/// Order-½ Riemann–Liouville integral by product trapezoid quadrature
/// (exact for piecewise-linear `f`). The first sample is 0.
pub fn rl_half_integral(signal: &SampledSignal) -> Result<SampledSignal> {
    let grid = signal.grid;
    if grid.len() < 2 {
        return Err(Error::invalid(format!("fractional integral needs n >= 2, got {}", grid.len())));
    }
    let f = &signal.values;
    let n = grid.len();
    // dt^α / Γ(α + 2) with Γ(5/2) = 3√π/4
    let coef = grid.dt.sqrt() * 4.0 / (3.0 * PI.sqrt());
    let p = |k: f64| k.powf(1.5);

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        let mut acc = f[0] * (p(kf - 1.0) - (kf - 1.5) * kf.sqrt()) + f[k];
        for (j, fj) in f.iter().enumerate().take(k).skip(1) {
            let r = (k - j) as f64;
            acc += fj * (p(r + 1.0) - 2.0 * p(r) + p(r - 1.0));
        }
        *slot = acc * coef;
    }
    Ok(SampledSignal { grid, values: out })
}

/// Which half-order operator a history contribution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfOrder {
    Derivative,
    Integral,
}

fn tail_settings() -> QuadratureSettings {
    QuadratureSettings::new(1e-13, 1e-16, 4000).expect("static tolerances are valid")
}

/// Contribution of the history `s ∈ (−∞, t0]` of `f(s) = e^{−iωs}` to the
/// order-½ operator at time `t ≥ t0`.
///
/// Both operators reduce to `J(t − t0) = ∫_{t−t0}^∞ τ^{−1/2} e^{iωτ} dτ`, which is
/// evaluated on the contour `τ = s + i·sgn(ω)·r` where the integrand decays
/// like `e^{−|ω|r}`.
pub fn history_tail(omega: f64, t0: f64, t: f64, order: HalfOrder) -> Result<Complex64> {
    if !(omega != 0.0 && omega.is_finite()) {
        return Err(Error::domain("history tail needs a non-zero finite frequency"));
    }
    let s = t - t0;
    if !(s >= 0.0) {
        return Err(Error::domain(format!("history tail needs t >= t0, got t - t0 = {s}")));
    }
    let beta = Complex64::new(0.0, -omega);
    let j = if s == 0.0 {
        // Γ(1/2) β^{−1/2}
        PI.sqrt() * frac_power(-0.5, beta)?
    } else {
        let sigma = omega.signum();
        let w = omega.abs();
        let body = integrate_complex(
            |v| Complex64::new(s, sigma * v / w).powf(-0.5) * (-v).exp(),
            0.0,
            60.0,
            &tail_settings(),
        )?;
        Complex64::new(0.0, sigma / w) * Complex64::new(0.0, omega * s).exp() * body.value
    };
    let wave = (beta * t).exp();
    let factor = match order {
        HalfOrder::Derivative => beta,
        HalfOrder::Integral => Complex64::new(1.0, 0.0),
    };
    Ok(factor * wave * j / PI.sqrt())
}

/// Maximum deviation on the trailing third between the discrete operator
/// applied to `e^{−iωt}` (plus its history) and the eigenvalue rule.
pub fn eigen_error(omega: f64, grid: &UniformGrid, order: HalfOrder) -> Result<f64> {
    let beta = Complex64::new(0.0, -omega);
    let signal = SampledSignal::from_fn(*grid, |t| (beta * t).exp());
    let (discrete, eigen) = match order {
        HalfOrder::Derivative => (caputo_half(&signal)?, frac_power(0.5, beta)?),
        HalfOrder::Integral => (rl_half_integral(&signal)?, frac_power(-0.5, beta)?),
    };
    let mut worst: f64 = 0.0;
    for j in grid.trailing_third() {
        let t = grid.time(j);
        let full = discrete.values[j] + history_tail(omega, grid.t0, t, order)?;
        worst = worst.max((full - eigen * signal.values[j]).norm());
    }
    Ok(worst)
}

/// How the fractional operators are evaluated in [`weak_pde_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualMode {
    /// Eigenvalue rule `β^{±1/2}`.
    Analytic,
    /// L1 / product-trapezoid operators plus the analytic history.
    Discrete,
}

/// Max-norm residual on the trailing third of `grid` of
///
/// `−iħ∂ₓφ = σ_z[√(2miħ) ∂_t^{1/2}φ − √(m/2iħ) V0 ∂_t^{−1/2}φ]`
///
/// for `φ^± = exp(−iωt ± ipx/ħ)` with `p = √(2mħω)(1 − V0/2ħω)`, sampled at `x = 0`
/// (`|G| = 1`, so the residual does not depend on `x`).
pub fn weak_pde_residual(
    params: &PhysicalParams,
    v0: f64,
    omega: f64,
    component: Component,
    grid: &UniformGrid,
    mode: ResidualMode,
) -> Result<f64> {
    let (m, hbar) = (params.mass(), params.hbar());
    let energy = hbar * omega;
    if !(energy > 0.0) {
        return Err(Error::domain(format!("weak-potential residual needs ħω > 0, got {energy}")));
    }
    let p = (2.0 * m * energy).sqrt() * (1.0 - v0 / (2.0 * energy));
    if !(p > 0.0) {
        return Err(Error::domain(format!(
            "separation momentum must be positive; V0 = {v0} is too strong for ħω = {energy}"
        )));
    }
    let sign = component.sign();
    let beta = Complex64::new(0.0, -omega);
    let drive = (Complex64::i() * 2.0 * m * hbar).sqrt();
    let damping = (Complex64::new(0.0, -1.0) * (m / (2.0 * hbar))).sqrt() * v0;

    let signal = SampledSignal::from_fn(*grid, |t| (beta * t).exp());
    let (half_d, half_i) = match mode {
        ResidualMode::Analytic => {
            let d = frac_power(0.5, beta)?;
            let i = frac_power(-0.5, beta)?;
            (signal.values.iter().map(|f| d * f).collect::<Vec<_>>(), signal.values.iter().map(|f| i * f).collect())
        }
        ResidualMode::Discrete => {
            let mut d = caputo_half(&signal)?.values;
            let mut i = rl_half_integral(&signal)?.values;
            for j in grid.trailing_third() {
                let t = grid.time(j);
                d[j] += history_tail(omega, grid.t0, t, HalfOrder::Derivative)?;
                i[j] += history_tail(omega, grid.t0, t, HalfOrder::Integral)?;
            }
            (d, i)
        }
    };

    let mut worst: f64 = 0.0;
    for j in grid.trailing_third() {
        let lhs = signal.values[j] * (sign * p);
        let rhs = (drive * half_d[j] - damping * half_i[j]) * sign;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn frac_power_examples() {
        assert_eq!(frac_power(0.5, c(1.0)).unwrap(), c(1.0));
        let z = frac_power(0.5, Complex64::new(0.0, -1.0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((z - Complex64::new(h, -h)).norm() < 1e-15);
        assert!(frac_power(-0.5, c(0.0)).is_err());
        assert_eq!(frac_power(0.5, c(0.0)).unwrap(), c(0.0));
        // negative real axis takes arg = +π
        let neg = frac_power(0.5, Complex64::new(-4.0, -0.0)).unwrap();
        assert!((neg - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn grid_and_signal_invariants() {
        assert!(UniformGrid::new(0.0, 0.0, 5).is_err());
        assert!(UniformGrid::new(0.0, 0.1, 1).is_err());
        let g = UniformGrid::new(0.0, 0.1, 4).unwrap();
        assert!(SampledSignal::new(g, vec![c(0.0); 3]).is_err());
        let r = g.refined();
        assert_eq!(r.len(), 7);
        assert_eq!(r.time(6), g.time(3));
        assert!(caputo_half(&SampledSignal::from_fn(UniformGrid::new(0.0, 0.1, 2).unwrap(), |_| c(1.0))).is_err());
        assert!(rl_half_integral(&SampledSignal::from_fn(UniformGrid::new(0.0, 0.1, 2).unwrap(), |_| c(1.0))).is_ok());
    }

    #[test]
    fn caputo_of_constant_is_zero() {
        let g = UniformGrid::new(3.0, 0.05, 40).unwrap();
        let d = caputo_half(&SampledSignal::from_fn(g, |_| Complex64::new(2.5, -1.0))).unwrap();
        assert!(d.values().iter().all(|v| *v == c(0.0)));
    }

    #[test]
    fn linear_and_constant_closed_forms_are_exact() {
        // ∂^{1/2} t = 2√(t/π) and I^{1/2} 1 = 2√(t/π)
        let g = UniformGrid::spanning(0.0, 1.0, 21).unwrap();
        let d = caputo_half(&SampledSignal::from_fn(g, c)).unwrap();
        let i = rl_half_integral(&SampledSignal::from_fn(g, |_| c(1.0))).unwrap();
        for j in 0..g.len() {
            let want = 2.0 * (g.time(j) / PI).sqrt();
            assert!((d.values()[j].re - want).abs() < 1e-13, "caputo j={j}");
            assert!((i.values()[j].re - want).abs() < 1e-13, "rl j={j}");
        }
        let zero = rl_half_integral(&SampledSignal::from_fn(g, |_| c(0.0))).unwrap();
        assert!(zero.values().iter().all(|v| *v == c(0.0)));
    }

    #[test]
    fn history_at_terminal_is_the_whole_operator() {
        let beta = Complex64::new(0.0, -2.0);
        let t = 1.3;
        let d = history_tail(2.0, t, t, HalfOrder::Derivative).unwrap();
        let want = frac_power(0.5, beta).unwrap() * (beta * t).exp();
        assert!((d - want).norm() < 1e-14);
        assert!(history_tail(0.0, 0.0, 1.0, HalfOrder::Integral).is_err());
        assert!(history_tail(1.0, 1.0, 0.0, HalfOrder::Integral).is_err());
    }

    #[test]
    fn history_is_continuous_at_terminal() {
        for order in [HalfOrder::Derivative, HalfOrder::Integral] {
            let a = history_tail(1.0, 0.0, 0.0, order).unwrap();
            let b = history_tail(1.0, 0.0, 1e-10, order).unwrap();
            assert!((a - b).norm() < 1e-4, "{order:?}");
        }
    }

    #[test]
    fn analytic_residual_vanishes() {
        let p = PhysicalParams::new(1.3, 0.8).unwrap();
        let g = UniformGrid::new(0.0, 0.1, 30).unwrap();
        for (v0, omega) in [(0.0, 1.0), (0.1, 2.0), (0.5, 7.0)] {
            for comp in Component::BOTH {
                let r = weak_pde_residual(&p, v0, omega, comp, &g, ResidualMode::Analytic).unwrap();
                assert!(r < 1e-12, "v0={v0} omega={omega} r={r}");
            }
        }
    }

    #[test]
    fn residual_precondition() {
        let p = PhysicalParams::natural();
        let g = UniformGrid::new(0.0, 0.1, 30).unwrap();
        // ħω = V0/2 makes p vanish
        assert!(matches!(
            weak_pde_residual(&p, 2.0, 1.0, Component::Plus, &g, ResidualMode::Analytic),
            Err(Error::Domain(_))
        ));
        assert!(weak_pde_residual(&p, 0.0, -1.0, Component::Plus, &g, ResidualMode::Analytic).is_err());
    }
}
