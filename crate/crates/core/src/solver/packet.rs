use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phys::EnergyWindow;

use super::Component;

/// Energy distribution `C_E` of one spinor component.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Constant(Complex64),
    /// `(E, C)` nodes, strictly increasing in `E`, linearly interpolated and
    /// held at the end values outside the node range.
    Tabulated(Vec<(f64, Complex64)>),
}

impl Distribution {
    pub fn zero() -> Self {
        Distribution::Constant(Complex64::new(0.0, 0.0))
    }

    pub fn constant(value: f64) -> Self {
        Distribution::Constant(Complex64::new(value, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Distribution::Constant(c) => *c == Complex64::new(0.0, 0.0),
            Distribution::Tabulated(nodes) => nodes.iter().all(|(_, c)| *c == Complex64::new(0.0, 0.0)),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Distribution::Constant(_))
    }

    pub fn value(&self, energy: f64) -> Complex64 {
        match self {
            Distribution::Constant(c) => *c,
            Distribution::Tabulated(nodes) => {
                let (first, last) = (nodes[0], nodes[nodes.len() - 1]);
                if energy <= first.0 {
                    return first.1;
                }
                if energy >= last.0 {
                    return last.1;
                }
                let k = nodes.partition_point(|(e, _)| *e <= energy);
                let (e0, c0) = nodes[k - 1];
                let (e1, c1) = nodes[k];
                let w = (energy - e0) / (e1 - e0);
                c0 * (1.0 - w) + c1 * w
            }
        }
    }

    fn validate(&self, window: &EnergyWindow) -> Result<()> {
        match self {
            Distribution::Constant(c) => {
                if !(c.re.is_finite() && c.im.is_finite()) {
                    return Err(Error::invalid("distribution value must be finite"));
                }
            }
            Distribution::Tabulated(nodes) => {
                if nodes.len() < 2 {
                    return Err(Error::invalid("a tabulated distribution needs at least two nodes"));
                }
                for pair in nodes.windows(2) {
                    if !(pair[0].0 < pair[1].0) {
                        return Err(Error::invalid("tabulated energies must be strictly increasing"));
                    }
                }
                for (e, c) in nodes {
                    if !window.contains(*e) {
                        return Err(Error::invalid(format!(
                            "tabulated node E = {e} lies outside the window [{}, {}]",
                            window.lo(),
                            window.hi()
                        )));
                    }
                    if !(c.re.is_finite() && c.im.is_finite()) {
                        return Err(Error::invalid("distribution value must be finite"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Energy-domain wave packet: a window plus one distribution per spinor component.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacketSpec {
    window: EnergyWindow,
    plus: Distribution,
    minus: Distribution,
}

impl WavePacketSpec {
    pub fn new(window: EnergyWindow, plus: Distribution, minus: Distribution) -> Result<Self> {
        plus.validate(&window)?;
        minus.validate(&window)?;
        if plus.is_zero() && minus.is_zero() {
            return Err(Error::invalid("at least one energy distribution must be non-zero"));
        }
        Ok(Self { window, plus, minus })
    }

    /// `C⁺ = 1`, `C⁻ = 0`: a right-moving packet with flat energy content.
    pub fn right_moving(window: EnergyWindow) -> Self {
        Self { window, plus: Distribution::constant(1.0), minus: Distribution::zero() }
    }

    /// A packet with both distributions identically zero. Not constructible
    /// through [`WavePacketSpec::new`]; densities of it are zero everywhere.
    pub fn empty(window: EnergyWindow) -> Self {
        Self { window, plus: Distribution::zero(), minus: Distribution::zero() }
    }

    pub fn window(&self) -> &EnergyWindow {
        &self.window
    }

    pub fn distribution(&self, component: Component) -> &Distribution {
        match component {
            Component::Plus => &self.plus,
            Component::Minus => &self.minus,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }
}
