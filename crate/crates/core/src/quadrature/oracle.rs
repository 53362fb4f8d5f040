//! Brute-force evaluation of `⟨T⟩(x)` used to cross-check the analytic paths.
//!
//! Every energy derivative here is a finite difference of the connected plane
//! wave; nothing is shared with the analytic `∂_E p = m/p` route of the solver.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solver::{connect_barrier, spatial_wave, Component, ComplexTime, Geometry, WavePacketSpec, ENTRANCE_OFFSET};

use super::{integrate_complex, QuadratureSettings};

const PEAK_SAMPLES: usize = 128;

fn amplitude(packet: &WavePacketSpec, geometry: &Geometry, energy: f64, x: f64, component: Component) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    // u² can round a hair below 0
    let wave = connect_barrier(&geometry.params, &geometry.barrier, energy.max(0.0), one, one)
        .expect("stencil energies stay inside a non-negative window piece");
    packet.distribution(component).value(energy) * spatial_wave(&wave, &geometry.params, x, component)
}

/// Central difference with step `h`, switching to second-order one-sided
/// stencils so that no sample leaves `[lo, hi]`.
fn derivative<F: Fn(f64) -> Complex64>(f: F, e: f64, h: f64, lo: f64, hi: f64) -> Complex64 {
    if e - h < lo {
        (f(e) * -3.0 + f(e + h) * 4.0 - f(e + 2.0 * h)) / (2.0 * h)
    } else if e + h > hi {
        (f(e) * 3.0 - f(e - h) * 4.0 + f(e - 2.0 * h)) / (2.0 * h)
    } else {
        (f(e + h) - f(e - h)) / (2.0 * h)
    }
}

fn peak<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    (0..=PEAK_SAMPLES)
        .map(|j| f(a + (b - a) * j as f64 / PEAK_SAMPLES as f64))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
}

/// One stretch of the energy axis in the integration variable `u`, with
/// `E(u) = origin + direction·u²` next to a branch point or `E(u) = u` elsewhere.
struct Piece {
    origin: f64,
    direction: f64,
    squared: bool,
    span: (f64, f64),
}

impl Piece {
    fn energy(&self, u: f64) -> f64 {
        if self.squared {
            self.origin + self.direction * u * u
        } else {
            u
        }
    }

    /// `dE/du`
    fn jacobian(&self, u: f64) -> f64 {
        if self.squared {
            2.0 * self.direction * u
        } else {
            1.0
        }
    }
}

fn pieces(lo: f64, hi: f64, branch: &[f64]) -> Vec<Piece> {
    let mut nodes = vec![lo];
    nodes.extend(branch.iter().copied().filter(|&e| e > lo && e < hi));
    nodes.push(hi);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();

    let mapped = |origin: f64, direction: f64, far: f64| Piece {
        origin,
        direction,
        squared: true,
        span: (0.0, (far - origin).abs().sqrt()),
    };
    let mut out = Vec::new();
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        match (branch.contains(&a), branch.contains(&b)) {
            (true, true) => {
                let mid = 0.5 * (a + b);
                out.push(mapped(a, 1.0, mid));
                out.push(mapped(b, -1.0, mid));
            }
            (true, false) => out.push(mapped(a, 1.0, b)),
            (false, true) => out.push(mapped(b, -1.0, a)),
            (false, false) => out.push(Piece { origin: 0.0, direction: 1.0, squared: false, span: (a, b) }),
        }
    }
    out
}

/// `⟨T⟩(x) = N/D` with
/// `N = 2πiħ² Σ_r ∫dE C G ∂_E[C G]*` and `D = 2πħ Σ_r ∫dE |C G|²`,
/// all by quadrature with finite-difference derivatives.
///
/// Next to the momentum branch points `E = 0` and `E = V0` the energy is
/// written as `E_b ± u²` and differences are taken in `u`, where the waves are
/// smooth; `∂_E = (dE/du)^{−1} ∂_u`. The step is `1e-6` of the piece length in
/// its own variable.
pub fn oracle_expectation_time(
    packet: &WavePacketSpec,
    geometry: &Geometry,
    x: f64,
    settings: &QuadratureSettings,
) -> Result<ComplexTime> {
    let window = packet.window();
    let hbar = geometry.params.hbar();
    let branch = [0.0, geometry.barrier.height()];

    let amp = |e: f64, c: Component| amplitude(packet, geometry, e, x, c);
    let mut numer = Complex64::new(0.0, 0.0);
    let mut denom = 0.0;
    for piece in pieces(window.lo(), window.hi(), &branch) {
        let (lo, hi) = piece.span;
        let h = 1e-6 * (hi - lo);
        let at = |u: f64, c: Component| amp(piece.energy(u), c);
        let sq = |u: f64| -> f64 { Component::BOTH.iter().map(|&c| at(u, c).norm_sqr()).sum() };
        let weight = |u: f64| sq(u) * piece.jacobian(u).abs();
        // C G ∂_E[C G]* dE = C G ∂_u[C G]* sgn(dE/du) du
        let product = |u: f64| -> Complex64 {
            let sign = piece.jacobian(u).signum();
            Component::BOTH
                .iter()
                .map(|&c| at(u, c) * derivative(|v| at(v, c), u, h, lo, hi).conj() * sign)
                .sum()
        };

        let d_scale = peak(weight, lo, hi);
        if d_scale > 0.0 {
            let est = integrate_complex(|u| Complex64::new(weight(u) / d_scale, 0.0), lo, hi, settings)?;
            denom += est.value.re * d_scale;
        }
        let sq_peak = peak(sq, lo, hi);
        // finite-difference noise must not set the accuracy target
        let n_scale = peak(|u| product(u).norm(), lo, hi).max(sq_peak / (hi - lo));
        if n_scale > 0.0 {
            // rounding in the difference quotient is about ε·|CG|²/h per sample
            let noise = 100.0 * f64::EPSILON * sq_peak / (h * n_scale) * (hi - lo);
            let piece_settings = QuadratureSettings::new(
                settings.rel_tol(),
                settings.abs_tol().max(noise),
                settings.max_subdivisions(),
            )?;
            let est = integrate_complex(|u| product(u) / n_scale, lo, hi, &piece_settings)?;
            numer += est.value * n_scale;
        }
    }

    let n_full = Complex64::i() * 2.0 * PI * hbar * hbar * numer;
    let d_full = 2.0 * PI * hbar * denom;
    if !(d_full > 0.0) {
        return Err(Error::ZeroDenominator { x });
    }
    Ok(ComplexTime(n_full / d_full))
}

/// `⟨T⟩(L) − ⟨T⟩(0⁺)` from the oracle.
pub fn oracle_tunneling_time(
    packet: &WavePacketSpec,
    geometry: &Geometry,
    settings: &QuadratureSettings,
) -> Result<ComplexTime> {
    let width = geometry.barrier.width();
    let exit = oracle_expectation_time(packet, geometry, width, settings)?;
    let entrance = oracle_expectation_time(packet, geometry, ENTRANCE_OFFSET * width, settings)?;
    Ok(exit - entrance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phys::{Barrier, EnergyWindow, PhysicalParams};

    #[test]
    fn free_particle() {
        let g = Geometry::new(PhysicalParams::new(1.5, 1.0).unwrap(), Barrier::new(0.0, 2.0).unwrap());
        let w = EnergyWindow::new(1.0, 4.0).unwrap();
        let t = oracle_expectation_time(&WavePacketSpec::right_moving(w), &g, 2.0, &QuadratureSettings::default())
            .unwrap();
        let want = 2.0 / 3.0 * ((3.0f64 * 4.0).sqrt() - 3.0f64.sqrt());
        assert!((t.re() - want).abs() < 1e-8 * want);
        assert!(t.im().abs() < 1e-8);
    }

    #[test]
    fn entrance_is_zero() {
        let g = Geometry::new(PhysicalParams::natural(), Barrier::new(100.0, 1.0).unwrap());
        let w = EnergyWindow::new(0.0, 10.0).unwrap();
        let t = oracle_expectation_time(&WavePacketSpec::right_moving(w), &g, 1e-8, &QuadratureSettings::default())
            .unwrap();
        assert!(t.norm() < 1e-7, "{t}");
    }
}
