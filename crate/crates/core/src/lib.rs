//! Time-operator expectation values and tunnelling times for rectangular
//! barriers in spacetime-symmetric quantum mechanics.
//!
//! Position is a parameter and time an operator: at a detector position `x` the
//! wave function `φ(t|x)` is a function of `t`, and `⟨T⟩(x)` is its time
//! expectation value. The tunnelling time is `⟨T⟩(L) − ⟨T⟩(0)` across a barrier
//! of height `V0` on `0 ≤ x ≤ L`.
//!
//! * [`phys`]: units, barrier, momentum branch convention.
//! * [`solver`]: plane waves, packets, `⟨T⟩(x)`, densities, closed forms.
//! * [`quadrature`]: adaptive complex integration and the brute-force oracle.
//! * [`fractional`]: order-½ Caputo / Riemann–Liouville operators and the
//!   weak-potential residual.
//! * [`reference`]: phase, dwell, Larmor and related comparison times.
//! * [`cli`]: the `sts` command-line front end.


// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fractional;
pub mod phys;
pub mod quadrature;
pub mod reference;
pub mod solver;

pub use error::{Error, Result};
pub use phys::{Barrier, EnergyWindow, PhysicalParams};
pub use quadrature::QuadratureSettings;
pub use solver::{ComplexTime, Geometry, WavePacketSpec};
