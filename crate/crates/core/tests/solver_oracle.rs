//! The analytic-derivative quadrature route against the finite-difference
//! oracle, and both against closed forms where those exist.

use std::f64::consts::PI;

use num_complex::Complex64;
use sts_core::quadrature::{oracle_expectation_time, oracle_tunneling_time};
use sts_core::solver::{
    density_rho, expectation_time, expectation_time_closed, tunneling_time_closed, tunneling_time_quadrature,
    Distribution, ENTRANCE_OFFSET,
};
use sts_core::{Barrier, EnergyWindow, Error, Geometry, PhysicalParams, QuadratureSettings, WavePacketSpec};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn settings() -> QuadratureSettings {
    QuadratureSettings::default()
}

#[test]
fn interior_positions_match_closed_form() {
    let params = PhysicalParams::new(1.3, 0.7).unwrap();
    let barrier = Barrier::new(40.0, 0.8).unwrap();
    let g = Geometry::new(params, barrier);
    let e_max = 12.0;
    let packet = WavePacketSpec::right_moving(EnergyWindow::new(0.0, e_max).unwrap());
    for x in [0.05, 0.2, 0.5, 0.8] {
        let closed = expectation_time_closed(&params, &barrier, e_max, x).unwrap();
        let analytic = expectation_time(&packet, &g, x, &settings()).unwrap();
        let oracle = oracle_expectation_time(&packet, &g, x, &settings()).unwrap();
        assert!(rel(analytic.value(), closed.value()) < 1e-9, "x = {x}");
        assert!(rel(oracle.value(), closed.value()) < 1e-6, "x = {x}");
    }
}

#[test]
fn analytic_route_and_oracle_agree_outside_barrier() {
    let g = Geometry::new(PhysicalParams::natural(), Barrier::new(100.0, 1.0).unwrap());
    let packet = WavePacketSpec::right_moving(EnergyWindow::new(0.0, 10.0).unwrap());
    for x in [-1.0, -0.25, 1.5, 2.0] {
        let a = expectation_time(&packet, &g, x, &settings()).unwrap();
        let o = oracle_expectation_time(&packet, &g, x, &settings()).unwrap();
        assert!(rel(a.value(), o.value()) < 1e-6, "x = {x}: {a} vs {o}");
    }
    // left of the barrier only the free wave contributes: ⟨T⟩ = x·√(2mE_max)/E_max
    let left = expectation_time(&packet, &g, -1.0, &settings()).unwrap();
    assert!(rel(left.value(), Complex64::new(-(20f64).sqrt() / 10.0, 0.0)) < 1e-10);
}

#[test]
fn window_straddling_the_barrier_top() {
    // the integrands change branch at E = V0
    let g = Geometry::new(PhysicalParams::natural(), Barrier::new(5.0, 1.0).unwrap());
    let packet = WavePacketSpec::right_moving(EnergyWindow::new(0.0, 8.0).unwrap());
    for x in [0.3, 1.0, 1.7] {
        let a = expectation_time(&packet, &g, x, &settings()).unwrap();
        let o = oracle_expectation_time(&packet, &g, x, &settings()).unwrap();
        assert!(rel(a.value(), o.value()) < 1e-6, "x = {x}: {a} vs {o}");
        assert!(a.re().abs() > 0.0);
    }
}

#[test]
fn two_components_and_tabulated_amplitudes() {
    let window = EnergyWindow::new(0.0, 6.0).unwrap();
    let plus = Distribution::Tabulated(vec![
        (0.0, Complex64::new(1.0, 0.0)),
        (3.0, Complex64::new(0.5, 0.5)),
        (6.0, Complex64::new(0.2, -0.1)),
    ]);
    let minus = Distribution::Constant(Complex64::new(0.3, 0.0));
    let packet = WavePacketSpec::new(window, plus, minus).unwrap();
    let g = Geometry::new(PhysicalParams::natural(), Barrier::new(20.0, 1.0).unwrap());
    for x in [-0.5, 0.4, 1.3] {
        let a = expectation_time(&packet, &g, x, &settings()).unwrap();
        let o = oracle_expectation_time(&packet, &g, x, &settings()).unwrap();
        assert!(rel(a.value(), o.value()) < 1e-6, "x = {x}: {a} vs {o}");
    }
}

#[test]
fn tunnelling_time_three_ways() {
    for k0l in [PI / 10.0, 3.0 * PI, 30.0 * PI] {
        let params = PhysicalParams::natural();
        let barrier = Barrier::from_strength(k0l).unwrap();
        let g = Geometry::new(params, barrier);
        for ratio in [0.2, 0.7] {
            let e = ratio * ratio * barrier.height();
            let packet = WavePacketSpec::right_moving(EnergyWindow::new(0.0, e).unwrap());
            let closed = tunneling_time_closed(&params, &barrier, e).unwrap();
            let quad = tunneling_time_quadrature(&packet, &g, &settings()).unwrap();
            let oracle = oracle_tunneling_time(&packet, &g, &settings()).unwrap();
            assert!(rel(quad.value(), closed.value()) < 1e-8, "k0L={k0l} ratio={ratio}");
            assert!(rel(oracle.value(), closed.value()) < 1e-6, "k0L={k0l} ratio={ratio}");
        }
    }
}

#[test]
fn entrance_offset_is_negligible() {
    let params = PhysicalParams::natural();
    let barrier = Barrier::new(100.0, 1.0).unwrap();
    let at = expectation_time_closed(&params, &barrier, 10.0, ENTRANCE_OFFSET).unwrap();
    assert!(at.norm() < 1e-7);
}

#[test]
fn empty_packet_has_no_expectation_value() {
    let g = Geometry::new(PhysicalParams::natural(), Barrier::new(10.0, 1.0).unwrap());
    let packet = WavePacketSpec::empty(EnergyWindow::new(0.0, 1.0).unwrap());
    assert!(matches!(expectation_time(&packet, &g, 0.5, &settings()), Err(Error::ZeroDenominator { .. })));
    assert_eq!(density_rho(&packet, &g, 0.5, 1.0, &settings()).unwrap(), 0.0);
}

/// `ρ(t|x)` for `x < 0` by direct trapezoid summation over energy, with the
/// left-region wave written out by hand.
#[test]
fn density_matches_hand_summation() {
    let params = PhysicalParams::new(1.0, 1.0).unwrap();
    let g = Geometry::new(params, Barrier::new(100.0, 1.0).unwrap());
    let packet = WavePacketSpec::right_moving(EnergyWindow::new(0.0, 1.0).unwrap());
    let (x, t) = (-0.7, 2.5);
    let n = 200_000;
    let h = 1.0 / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=n {
        let e = j as f64 * h;
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        let p = (2.0 * e).sqrt();
        acc += Complex64::new(0.0, p * x - e * t).exp() * w;
    }
    let want = (acc * h).norm_sqr();
    let got = density_rho(&packet, &g, x, t, &settings()).unwrap();
    assert!((got - want).abs() < 1e-8 * want.max(1e-3), "{got} vs {want}");
}
