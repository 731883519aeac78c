//! The static field laws checked through the public API: Gauss's law,
//! vanishing magnetic flux, vanishing electrostatic circulation, and the
//! exact on-axis field of a current loop.

use std::f64::consts::PI;

use emcalc_core::domains::{circle, sphere_surface};
use emcalc_core::em::{EPSILON0, MU0};
use emcalc_core::*;
use proptest::prelude::*;

fn unit_loop_b() -> VectorField {
    b_field_from_line_current(1.0, &circle(1.0, Position::ORIGIN, Vec3::Z).unwrap())
}

#[test]
fn gauss_law_at_several_radii() {
    let e = e_field(&ChargeDistribution::point(1.0, Position::ORIGIN));
    for r in [0.5, 1.0, 5.0] {
        let flux = dotted_surface_integral(&surface_sample(200), &e, &sphere_surface(r, Position::ORIGIN).unwrap())
            .unwrap();
        assert!((flux * EPSILON0 - 1.0).abs() < 0.005, "R = {r}: {flux}");
    }
}

#[test]
fn gauss_law_ignores_outside_charges() {
    let dist = ChargeDistribution::Multiple(vec![
        ChargeDistribution::point(2.0, Position::cartesian(0.1, 0.2, -0.1)),
        ChargeDistribution::point(-5.0, Position::cartesian(3.0, 0.0, 0.0)),
    ]);
    let flux =
        dotted_surface_integral(&surface_sample(200), &e_field(&dist), &sphere_surface(1.0, Position::ORIGIN).unwrap())
            .unwrap();
    assert!((flux * EPSILON0 / 2.0 - 1.0).abs() < 0.01, "{}", flux * EPSILON0);
}

#[test]
fn loop_field_on_axis() {
    let b = unit_loop_b();
    for z in [0.0f64, 0.5, 1.0, 2.0] {
        let want = MU0 / (2.0 * (1.0 + z * z).powf(1.5));
        let got = b.eval(Position::cartesian(0.0, 0.0, z)).unwrap();
        assert!((got.z - want).abs() / want < 1e-5, "z = {z}");
        assert!(got.x.abs().max(got.y.abs()) < 1e-9 * want);
    }
}

#[test]
fn no_magnetic_monopoles() {
    let b = unit_loop_b();
    let s = sphere_surface(0.5, Position::cartesian(0.0, 0.0, 2.0)).unwrap();
    let flux = dotted_surface_integral(&surface_sample(100), &b, &s).unwrap();
    let scale = b.eval(Position::cartesian(0.0, 0.0, 2.0)).unwrap().magnitude() * 4.0 * PI * 0.25;
    assert!(flux.abs() < 1e-3 * scale);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn electrostatic_circulation_vanishes(
        q in -5.0f64..5.0,
        cx in 1.5f64..3.0,
        cy in -1.0f64..1.0,
        r in 0.2f64..1.0,
    ) {
        let e = e_field(&ChargeDistribution::point(q, Position::ORIGIN));
        let c = circle(r, Position::cartesian(cx, cy, 0.3), Vec3::new(0.2, 0.1, 1.0)).unwrap();
        let circulation = dotted_line_integral(&curve_sample(1000), &e, &c).unwrap();
        let max_e = (0..64)
            .map(|k| e.eval(c.at(2.0 * PI * k as f64 / 64.0)).unwrap().magnitude())
            .fold(0.0, f64::max);
        prop_assert!(circulation.abs() < 1e-6 * max_e * 2.0 * PI * r);
    }

    #[test]
    fn superposition_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, x in 0.5f64..2.0) {
        let p1 = Position::cartesian(0.0, 0.0, 0.0);
        let p2 = Position::cartesian(0.0, 1.0, 0.0);
        let probe = Position::cartesian(x, -0.5, 0.25);
        let both = e_field(&ChargeDistribution::Multiple(vec![
            ChargeDistribution::point(a, p1),
            ChargeDistribution::point(b, p2),
        ]))
        .eval(probe)
        .unwrap();
        let sum = e_field(&ChargeDistribution::point(a, p1)).eval(probe).unwrap()
            + e_field(&ChargeDistribution::point(b, p2)).eval(probe).unwrap();
        prop_assert!((both - sum).magnitude() <= 1e-12 * sum.magnitude().max(1.0));
    }
}
