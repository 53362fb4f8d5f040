//! Units, barrier geometry and the complex momentum branch convention.
//!
//! Every square root of an energy difference in the crate goes through
//! [`momentum`], which fixes `√(negative) = +i·√|·|`. With that choice
//! `exp(+ipx/ħ)` decays for `x > 0` inside a classically forbidden region.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Mass and reduced Planck constant. Natural units are just `PhysicalParams::natural()`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    mass: f64,
    hbar: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::invalid(format!("mass must be positive and finite, got {mass}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::invalid(format!("hbar must be positive and finite, got {hbar}")));
        }
        Ok(Self { mass, hbar })
    }

    /// `m = ħ = 1`.
    pub fn natural() -> Self {
        Self { mass: 1.0, hbar: 1.0 }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// Rectangular barrier of height `V0` occupying `0 ≤ x ≤ L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barrier {
    height: f64,
    width: f64,
}

impl Barrier {
    pub fn new(height: f64, width: f64) -> Result<Self> {
        if !(height >= 0.0 && height.is_finite()) {
            return Err(Error::invalid(format!("barrier height must be >= 0, got {height}")));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::invalid(format!("barrier width must be > 0, got {width}")));
        }
        Ok(Self { height, width })
    }

    /// Barrier of strength `k0·L` in units `m = ħ = L = 1`, i.e. `V0 = (k0L)²/2`.
    pub fn from_strength(k0l: f64) -> Result<Self> {
        Self::new(0.5 * k0l * k0l, 1.0)
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Potential at `x`; the interfaces belong to the barrier.
    pub fn potential(&self, x: f64) -> f64 {
        if (0.0..=self.width).contains(&x) {
            self.height
        } else {
            0.0
        }
    }
}

/// Energy interval `[lo, hi]` of a wave packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyWindow {
    lo: f64,
    hi: f64,
}

impl EnergyWindow {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!("energy window needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, e: f64) -> bool {
        (self.lo..=self.hi).contains(&e)
    }
}

/// Wavenumbers `k = √(2mE)/ħ`, `k0 = √(2mV0)/ħ` and `κ = √(k0² − k²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumbers {
    pub k: f64,
    pub k0: f64,
    /// Real below the barrier, `+i·|κ|` above it.
    pub kappa: Complex64,
}

/// `√(2m(E − V))` with the crate-wide branch: `Im ≥ 0`, and `+i√(2m(V − E))` for `E < V`.
pub fn momentum(energy: f64, potential: f64, params: &PhysicalParams) -> Complex64 {
    branch_sqrt(2.0 * params.mass * (energy - potential))
}

/// Principal square root of a real number with `√(−a) = +i√a`.
pub fn branch_sqrt(value: f64) -> Complex64 {
    if value >= 0.0 {
        Complex64::new(value.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-value).sqrt())
    }
}

pub fn wavenumbers(params: &PhysicalParams, barrier: &Barrier, energy: f64) -> Result<Wavenumbers> {
    if !(energy >= 0.0) {
        return Err(Error::domain(format!("wavenumbers need E >= 0, got {energy}")));
    }
    let hbar = params.hbar;
    let k = (2.0 * params.mass * energy).sqrt() / hbar;
    let k0 = (2.0 * params.mass * barrier.height).sqrt() / hbar;
    // same radicand as momentum(V0, E) but in wavenumber units
    let kappa = momentum(barrier.height, energy, params) / hbar;
    Ok(Wavenumbers { k, k0, kappa })
}

/// Characteristic barrier time `τ0 = mL/(ħk0) = mL/√(2mV0)`.
pub fn tau0(params: &PhysicalParams, barrier: &Barrier) -> Result<f64> {
    if barrier.height <= 0.0 {
        return Err(Error::domain("tau0 is undefined for a barrier of zero height"));
    }
    Ok(params.mass * barrier.width / (2.0 * params.mass * barrier.height).sqrt())
}
