use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phys::{Barrier, EnergyWindow};
use crate::quadrature::{integrate_branch_points, Estimate, QuadratureSettings};

use super::{wave_and_energy_derivative, Component, ComplexTime, Distribution, Geometry, WavePacketSpec};

/// Barrier entrance is probed at `x = ENTRANCE_OFFSET·L` instead of `x = 0`,
/// where the closed form is a removable 0/0.
pub const ENTRANCE_OFFSET: f64 = 1e-8;

const SCALE_SAMPLES: usize = 64;

/// Momentum branch points (`E = 0`, `E = V0`) on the closed window.
pub(crate) fn branch_breakpoints(window: &EnergyWindow, barrier: &Barrier) -> Vec<f64> {
    [0.0, barrier.height()]
        .into_iter()
        .filter(|&e| e >= window.lo() && e <= window.hi())
        .collect()
}

/// Largest finite value of `f` over cell midpoints of `[a, b]`. Integrands are
/// divided by it so that the absolute tolerance is measured against the
/// integrand's own scale, however small that is.
pub(crate) fn sampled_peak<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let step = (b - a) / SCALE_SAMPLES as f64;
    (0..SCALE_SAMPLES)
        .map(|j| f(a + (j as f64 + 0.5) * step))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
}

pub(crate) fn scaled_integral<F>(
    f: F,
    window: &EnergyWindow,
    breakpoints: &[f64],
    scale: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    let est = integrate_branch_points(|e| f(e) / scale, window.lo(), window.hi(), breakpoints, settings)
        .map_err(|err| match err {
            Error::NoConvergence { estimate, error_bound, subdivisions } => Error::NoConvergence {
                estimate: estimate * scale,
                error_bound: error_bound * scale,
                subdivisions,
            },
            other => other,
        })?;
    Ok(Estimate { value: est.value * scale, error: est.error * scale, subdivisions: est.subdivisions })
}

/// Central difference of a tabulated distribution, with the stencil kept inside the window.
fn distribution_slope(dist: &Distribution, energy: f64, window: &EnergyWindow) -> Complex64 {
    if dist.is_constant() {
        return Complex64::new(0.0, 0.0);
    }
    let h = 1e-6 * window.width();
    let f = |e: f64| dist.value(e);
    if energy - h < window.lo() {
        (f(energy) * -3.0 + f(energy + h) * 4.0 - f(energy + 2.0 * h)) / (2.0 * h)
    } else if energy + h > window.hi() {
        (f(energy) * 3.0 - f(energy - h) * 4.0 + f(energy - 2.0 * h)) / (2.0 * h)
    } else {
        (f(energy + h) - f(energy - h)) / (2.0 * h)
    }
}

fn active_components(packet: &WavePacketSpec) -> Vec<Component> {
    Component::BOTH
        .into_iter()
        .filter(|&c| !packet.distribution(c).is_zero())
        .collect()
}

/// `⟨T⟩(x) = iħ Σ_r ∫dE C G ∂_E[C G]* / Σ_r ∫dE |C G|²`.
///
/// `∂_E G` is analytic (`∂_E p = m/p`); tabulated distributions contribute a
/// central-difference slope. The window is split at the momentum branch points.
pub fn expectation_time(
    packet: &WavePacketSpec,
    geometry: &Geometry,
    x: f64,
    settings: &QuadratureSettings,
) -> Result<ComplexTime> {
    let Geometry { params, barrier } = geometry;
    let window = packet.window();
    let components = active_components(packet);
    if components.is_empty() {
        return Err(Error::ZeroDenominator { x });
    }

    let weight = |e: f64| -> f64 {
        components
            .iter()
            .map(|&c| {
                let (g, _) = wave_and_energy_derivative(params, barrier, e, x, c);
                (packet.distribution(c).value(e) * g).norm_sqr()
            })
            .sum()
    };
    let numerator = |e: f64| -> Complex64 {
        components
            .iter()
            .map(|&c| {
                let dist = packet.distribution(c);
                let (g, dg) = wave_and_energy_derivative(params, barrier, e, x, c);
                let amp = dist.value(e);
                let d_amp = distribution_slope(dist, e, window) * g + amp * dg;
                amp * g * d_amp.conj()
            })
            .sum()
    };

    let breaks = branch_breakpoints(window, barrier);
    let d_scale = sampled_peak(weight, window.lo(), window.hi());
    if !(d_scale > 0.0) {
        return Err(Error::ZeroDenominator { x });
    }
    let denom = scaled_integral(|e| Complex64::new(weight(e), 0.0), window, &breaks, d_scale, settings)?;
    if denom.value.re <= 0.0 {
        return Err(Error::ZeroDenominator { x });
    }

    let n_scale = sampled_peak(|e| numerator(e).norm(), window.lo(), window.hi());
    if n_scale == 0.0 {
        return Ok(ComplexTime::new(0.0, 0.0));
    }
    let numer = scaled_integral(numerator, window, &breaks, n_scale, settings)?;

    Ok(ComplexTime(Complex64::i() * params.hbar() * numer.value / denom.value.re))
}

/// `⟨T⟩(L) − ⟨T⟩(0⁺)` by quadrature for an arbitrary packet.
pub fn tunneling_time_quadrature(
    packet: &WavePacketSpec,
    geometry: &Geometry,
    settings: &QuadratureSettings,
) -> Result<ComplexTime> {
    let width = geometry.barrier.width();
    let exit = expectation_time(packet, geometry, width, settings)?;
    let entrance = expectation_time(packet, geometry, ENTRANCE_OFFSET * width, settings)?;
    Ok(exit - entrance)
}

/// One density value with its accuracy bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub rho: f64,
    pub error_bound: f64,
    /// False when an energy integral exhausted its subdivision budget; `rho`
    /// then holds the best available estimate.
    pub converged: bool,
}

/// `ρ(t|x) = Σ_r |∫dE C_E^r e^{−iEt/ħ} G^r(E, x)|²`, keeping non-converged estimates.
pub fn density_sample(
    packet: &WavePacketSpec,
    geometry: &Geometry,
    x: f64,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<DensitySample> {
    let Geometry { params, barrier } = geometry;
    let window = packet.window();
    let breaks = branch_breakpoints(window, barrier);
    let mut sample = DensitySample { rho: 0.0, error_bound: 0.0, converged: true };

    for c in active_components(packet) {
        let dist = packet.distribution(c);
        let profile = |e: f64| dist.value(e) * wave_and_energy_derivative(params, barrier, e, x, c).0;
        let scale = sampled_peak(|e| profile(e).norm(), window.lo(), window.hi());
        if scale == 0.0 {
            continue;
        }
        let phase = -t / params.hbar();
        let amplitude = |e: f64| profile(e) * Complex64::new(0.0, phase * e).exp();
        let (value, error) = match scaled_integral(amplitude, window, &breaks, scale, settings) {
            Ok(est) => (est.value, est.error),
            Err(Error::NoConvergence { estimate, error_bound, .. }) => {
                sample.converged = false;
                (estimate, error_bound)
            }
            Err(e) => return Err(e),
        };
        sample.rho += value.norm_sqr();
        sample.error_bound += 2.0 * value.norm() * error + error * error;
    }
    Ok(sample)
}

/// Strict form of [`density_sample`]: non-convergence is an error.
pub fn density_rho(
    packet: &WavePacketSpec,
    geometry: &Geometry,
    x: f64,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let sample = density_sample(packet, geometry, x, t, settings)?;
    if !sample.converged {
        return Err(Error::NoConvergence {
            estimate: Complex64::new(sample.rho, 0.0),
            error_bound: sample.error_bound,
            subdivisions: settings.max_subdivisions(),
        });
    }
    Ok(sample.rho)
}

/// Density on a regular `(x, t)` grid, stored with `x` as the outer (row) index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
    pub samples: Vec<DensitySample>,
}

impl DensityGrid {
    pub fn get(&self, ix: usize, it: usize) -> &DensitySample {
        &self.samples[ix * self.ts.len() + it]
    }

    pub fn rho(&self, ix: usize, it: usize) -> f64 {
        self.get(ix, it).rho
    }
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    let (lo, hi) = range;
    (0..n)
        .map(|j| if j + 1 == n { hi } else { lo + (hi - lo) * j as f64 / (n - 1) as f64 })
        .collect()
}

/// Evaluates [`density_sample`] on `nx × nt` points spanning the closed ranges.
/// Cells are independent, so the result does not depend on scheduling.
pub fn density_grid(
    packet: &WavePacketSpec,
    geometry: &Geometry,
    x_range: (f64, f64),
    t_range: (f64, f64),
    nx: usize,
    nt: usize,
    settings: &QuadratureSettings,
) -> Result<DensityGrid> {
    if nx < 2 || nt < 2 {
        return Err(Error::invalid(format!("density grid needs nx, nt >= 2, got {nx} x {nt}")));
    }
    for (name, (lo, hi)) in [("x", x_range), ("t", t_range)] {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!("{name} range needs lo < hi, got [{lo}, {hi}]")));
        }
    }
    let xs = linspace(x_range, nx);
    let ts = linspace(t_range, nt);
    let results: Vec<Result<DensitySample>> = (0..nx * nt)
        .into_par_iter()
        .map(|k| density_sample(packet, geometry, xs[k / nt], ts[k % nt], settings))
        .collect();
    let samples = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(DensityGrid { xs, ts, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phys::PhysicalParams;

    fn geometry(v0: f64) -> Geometry {
        Geometry::new(PhysicalParams::natural(), Barrier::new(v0, 1.0).unwrap())
    }

    #[test]
    fn free_particle_travel_time() {
        let g = geometry(0.0);
        let w = EnergyWindow::new(2.0, 8.0).unwrap();
        let packet = WavePacketSpec::right_moving(w);
        let got = expectation_time(&packet, &g, 1.0, &QuadratureSettings::default()).unwrap();
        let want = (16f64.sqrt() - 4f64.sqrt()) / 6.0;
        assert!((got.re() - want).abs() < 1e-10 * want);
        assert!(got.im().abs() < 1e-12);
    }

    #[test]
    fn free_particle_from_zero_energy() {
        let g = geometry(0.0);
        let packet = WavePacketSpec::right_moving(EnergyWindow::new(0.0, 3.0).unwrap());
        let got = expectation_time(&packet, &g, 1.0, &QuadratureSettings::default()).unwrap();
        assert!((got.re() - 6f64.sqrt() / 3.0).abs() < 1e-8);
    }

    #[test]
    fn entrance_limit_vanishes() {
        let g = geometry(100.0);
        let packet = WavePacketSpec::right_moving(EnergyWindow::new(0.0, 10.0).unwrap());
        let s = QuadratureSettings::default();
        assert_eq!(expectation_time(&packet, &g, 0.0, &s).unwrap().norm(), 0.0);
        assert!(expectation_time(&packet, &g, 1e-8, &s).unwrap().norm() < 1e-9);
    }

    #[test]
    fn empty_packet_has_no_time_and_zero_density() {
        let g = geometry(100.0);
        let packet = WavePacketSpec::empty(EnergyWindow::new(0.0, 1.0).unwrap());
        let s = QuadratureSettings::default();
        assert!(matches!(expectation_time(&packet, &g, 0.5, &s), Err(Error::ZeroDenominator { .. })));
        assert_eq!(density_rho(&packet, &g, 0.3, 2.0, &s).unwrap(), 0.0);
        let grid = density_grid(&packet, &g, (-1.0, 2.0), (0.0, 5.0), 3, 4, &s).unwrap();
        assert!(grid.samples.iter().all(|c| c.rho == 0.0));
    }

    #[test]
    fn density_at_origin_time_zero() {
        let g = geometry(0.0);
        let packet = WavePacketSpec::right_moving(EnergyWindow::new(0.0, 3.0).unwrap());
        let rho = density_rho(&packet, &g, 0.0, 0.0, &QuadratureSettings::default()).unwrap();
        assert!((rho - 9.0).abs() < 1e-10);
    }

    #[test]
    fn grid_matches_pointwise_calls() {
        let g = geometry(100.0);
        let packet = WavePacketSpec::right_moving(EnergyWindow::new(0.0, 1.0).unwrap());
        let s = QuadratureSettings::default();
        let grid = density_grid(&packet, &g, (-1.0, 2.0), (0.0, 3.0), 2, 2, &s).unwrap();
        for (ix, &x) in [-1.0, 2.0].iter().enumerate() {
            for (it, &t) in [0.0, 3.0].iter().enumerate() {
                assert_eq!(grid.rho(ix, it), density_rho(&packet, &g, x, t, &s).unwrap());
            }
        }
        assert!(density_grid(&packet, &g, (0.0, 1.0), (0.0, 1.0), 1, 5, &s).is_err());
        assert!(density_grid(&packet, &g, (1.0, 0.0), (0.0, 1.0), 2, 5, &s).is_err());
    }

    #[test]
    fn tabulated_constant_matches_constant() {
        let g = geometry(100.0);
        let w = EnergyWindow::new(0.0, 10.0).unwrap();
        let s = QuadratureSettings::default();
        let flat = WavePacketSpec::right_moving(w);
        let c1 = Complex64::new(1.0, 0.0);
        let table = WavePacketSpec::new(w, Distribution::Tabulated(vec![(0.0, c1), (10.0, c1)]), Distribution::zero())
            .unwrap();
        let a = expectation_time(&flat, &g, 0.7, &s).unwrap();
        let b = expectation_time(&table, &g, 0.7, &s).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
    }
}
