use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phys::{momentum, Barrier, PhysicalParams};
use crate::quadrature::{integrate_complex, QuadratureSettings};

/// Pseudo-spinor component; `Plus` carries `exp(+ipx/ħ)`, `Minus` carries `exp(−ipx/ħ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Plus,
    Minus,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::Plus, Component::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Component::Plus => 1.0,
            Component::Minus => -1.0,
        }
    }
}

/// Piecewise plane wave at one energy: region 1 is `x < 0`, region 2 the
/// barrier `0 ≤ x ≤ L`, region 3 is `x > L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionWave {
    /// Momentum outside the barrier.
    pub p1: Complex64,
    /// Momentum inside the barrier.
    pub p2: Complex64,
    pub a1p: Complex64,
    pub a1m: Complex64,
    pub a2p: Complex64,
    pub a2m: Complex64,
    pub a3p: Complex64,
    pub a3m: Complex64,
    pub width: f64,
}

impl RegionWave {
    fn amplitudes(&self, component: Component) -> [Complex64; 3] {
        match component {
            Component::Plus => [self.a1p, self.a2p, self.a3p],
            Component::Minus => [self.a1m, self.a2m, self.a3m],
        }
    }
}

/// Matches the plane waves at `x = 0` and `x = L`:
/// `A2± = A1±` and `A3± = A1±·exp[±(i/ħ)(p2 − p1)L]`.
pub fn connect_barrier(
    params: &PhysicalParams,
    barrier: &Barrier,
    energy: f64,
    a1p: Complex64,
    a1m: Complex64,
) -> Result<RegionWave> {
    if !(energy >= 0.0) {
        return Err(Error::domain(format!("connection needs E >= 0, got {energy}")));
    }
    let p1 = momentum(energy, 0.0, params);
    let p2 = momentum(energy, barrier.height(), params);
    let shift = Complex64::i() * (p2 - p1) * barrier.width() / params.hbar();
    Ok(RegionWave {
        p1,
        p2,
        a1p,
        a1m,
        a2p: a1p,
        a2m: a1m,
        a3p: a1p * shift.exp(),
        a3m: a1m * (-shift).exp(),
        width: barrier.width(),
    })
}

/// Evaluates `G±(x)` for the region containing `x`; the interfaces belong to the barrier.
pub fn spatial_wave(wave: &RegionWave, params: &PhysicalParams, x: f64, component: Component) -> Complex64 {
    let [a1, a2, a3] = wave.amplitudes(component);
    let (amp, p) = if x < 0.0 {
        (a1, wave.p1)
    } else if x <= wave.width {
        (a2, wave.p2)
    } else {
        (a3, wave.p1)
    };
    if amp == Complex64::new(0.0, 0.0) {
        return amp;
    }
    amp * (Complex64::i() * component.sign() * p * x / params.hbar()).exp()
}

/// Unit-amplitude (`A1± = 1`) wave `G(E, x)` together with `∂G/∂E`, using
/// `∂p/∂E = m/p`. The derivative is infinite at a momentum branch point.
pub fn wave_and_energy_derivative(
    params: &PhysicalParams,
    barrier: &Barrier,
    energy: f64,
    x: f64,
    component: Component,
) -> (Complex64, Complex64) {
    let m = params.mass();
    let width = barrier.width();
    let p1 = momentum(energy, 0.0, params);
    let p2 = momentum(energy, barrier.height(), params);
    // x·m/p with 0·∞ read as 0
    let lever = |len: f64, p: Complex64| {
        if len == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            m * len / p
        }
    };

    let (phase, dphase) = if x < 0.0 {
        (p1 * x, lever(x, p1))
    } else if x <= width {
        (p2 * x, lever(x, p2))
    } else {
        ((p2 - p1) * width + p1 * x, lever(width, p2) + lever(x - width, p1))
    };
    let i_s = Complex64::i() * component.sign() / params.hbar();
    let g = (i_s * phase).exp();
    (g, i_s * dphase * g)
}

/// Phase-integral wave `exp[±(i/ħ)∫_{x0}^{x} √(2m(E − V(x'))) dx']` for a
/// general potential, with the same momentum branch as the rectangular case.
pub fn wkb_spatial<V>(
    params: &PhysicalParams,
    potential: V,
    energy: f64,
    x0: f64,
    x: f64,
    component: Component,
    settings: &QuadratureSettings,
) -> Result<Complex64>
where
    V: Fn(f64) -> f64,
{
    let integrand = |s: f64| momentum(energy, potential(s), params);
    let phase = if x >= x0 {
        integrate_complex(integrand, x0, x, settings)?.value
    } else {
        -integrate_complex(integrand, x, x0, settings)?.value
    };
    Ok((Complex64::i() * component.sign() * phase / params.hbar()).exp())
}
