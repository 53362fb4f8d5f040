//! Plane-wave solutions across a rectangular barrier, energy wave packets and
//! the time-operator expectation values built from them.
//!
//! The wave function at fixed position is not normalised; every expectation
//! value carries its own denominator `Σ_r ∫dE |C_E^r G^r(E, x)|²`, which depends
//! on `x`.

use std::fmt;

use num_complex::Complex64;

use crate::phys::{Barrier, PhysicalParams};

mod expectation;
mod packet;
mod times;
mod wave;

pub use expectation::{
    density_grid, density_rho, density_sample, expectation_time, tunneling_time_quadrature, DensityGrid,
    DensitySample, ENTRANCE_OFFSET,
};
pub use packet::{Distribution, WavePacketSpec};
pub use times::{
    classical_energy_avg_time, expectation_time_closed, free_to_tunnel_ratio, tunneling_time_closed,
    tunneling_time_extended, tunneling_time_first_order, tunneling_time_series, weak_travel_time, BRANCH_GUARD,
};
pub use wave::{connect_barrier, spatial_wave, wave_and_energy_derivative, wkb_spatial, Component, RegionWave};

/// Physical constants together with the barrier they act on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub params: PhysicalParams,
    pub barrier: Barrier,
}

impl Geometry {
    pub fn new(params: PhysicalParams, barrier: Barrier) -> Self {
        Self { params, barrier }
    }
}

/// A complex time. The real part is the Hermitian-like arrival time, the
/// imaginary part the anti-Hermitian tunnelling contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexTime(pub Complex64);

impl ComplexTime {
    pub fn new(re: f64, im: f64) -> Self {
        Self(Complex64::new(re, im))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.re.is_finite() && self.0.im.is_finite()
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

impl std::ops::Sub for ComplexTime {
    type Output = ComplexTime;

    fn sub(self, rhs: Self) -> Self {
        ComplexTime(self.0 - rhs.0)
    }
}

impl From<Complex64> for ComplexTime {
    fn from(z: Complex64) -> Self {
        Self(z)
    }
}

impl fmt::Display for ComplexTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
