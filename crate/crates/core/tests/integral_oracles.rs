//! Each of the nine integrals against a closed-form value, plus second-order
//! convergence: doubling the sampler resolution cuts the error at least 3×.

use std::f64::consts::PI;

use emcalc_core::domains::{ball, circle, sphere_surface};
use emcalc_core::*;

fn unit_circle() -> Curve {
    circle(1.0, Position::ORIGIN, Vec3::Z).unwrap()
}

fn unit_sphere() -> Surface {
    sphere_surface(1.0, Position::ORIGIN).unwrap()
}

fn unit_ball() -> Volume {
    ball(1.0, Position::ORIGIN).unwrap()
}

/// Errors at resolution `n` and `2n`.
fn errors(n: usize, err: impl Fn(usize) -> f64) -> (f64, f64) {
    (err(n), err(2 * n))
}

fn assert_converges(name: &str, n: usize, err: impl Fn(usize) -> f64) {
    let (e1, e2) = errors(n, err);
    assert!(e1 > 0.0, "{name}: error vanished at n={n}");
    assert!(e1 / e2 >= 3.0, "{name}: error {e1:e} -> {e2:e}, ratio {}", e1 / e2);
}

#[test]
fn scalar_line() {
    let f = ScalarField::new(|p| p.x() * p.x());
    let c = unit_circle();
    let v = scalar_line_integral(&curve_sample(1000), &f, &c).unwrap();
    assert!((v - PI).abs() < 1e-5);
    assert_converges("scalarLineIntegral", 16, |n| (scalar_line_integral(&curve_sample(n), &f, &c).unwrap() - PI).abs());
}

#[test]
fn vector_line() {
    let f = VectorField::new(|p| Vec3::new(p.x() * p.x(), p.y(), 1.0));
    let c = unit_circle();
    let want = Vec3::new(PI, 0.0, 2.0 * PI);
    let v = vector_line_integral(&curve_sample(1000), &f, &c).unwrap();
    assert!((v - want).magnitude() < 1e-4);
    assert_converges("vectorLineIntegral", 16, |n| {
        (vector_line_integral(&curve_sample(n), &f, &c).unwrap() - want).magnitude()
    });
}

#[test]
fn dotted_line() {
    let f = VectorField::new(|p| Vec3::new(-p.y(), p.x(), 0.0));
    let c = unit_circle();
    let v = dotted_line_integral(&curve_sample(1000), &f, &c).unwrap();
    assert!((v - 2.0 * PI).abs() < 1e-4);
    assert_converges("dottedLineIntegral", 16, |n| {
        (dotted_line_integral(&curve_sample(n), &f, &c).unwrap() - 2.0 * PI).abs()
    });
}

#[test]
fn crossed_line() {
    // (0, 0, x) × dℓ = (−x dy, x dx, 0) integrates to (−π, 0, 0).
    let f = VectorField::new(|p| Vec3::new(0.0, 0.0, p.x()));
    let c = unit_circle();
    let want = Vec3::new(-PI, 0.0, 0.0);
    let v = crossed_line_integral(&curve_sample(1000), &f, &c).unwrap();
    assert!((v - want).magnitude() < 1e-4);
    assert_converges("crossedLineIntegral", 16, |n| {
        (crossed_line_integral(&curve_sample(n), &f, &c).unwrap() - want).magnitude()
    });
}

#[test]
fn scalar_surface() {
    let f = ScalarField::new(|p| p.z() * p.z());
    let s = unit_sphere();
    let want = 4.0 * PI / 3.0;
    let v = scalar_surface_integral(&surface_sample(200), &f, &s).unwrap();
    assert!((v - want).abs() < 0.005 * want);
    assert_converges("scalarSurfaceIntegral", 8, |n| {
        (scalar_surface_integral(&surface_sample(n), &f, &s).unwrap() - want).abs()
    });
}

#[test]
fn vector_surface() {
    let f = VectorField::new(|p| Vec3::new(p.z() * p.z(), 0.0, 1.0));
    let s = unit_sphere();
    let want = Vec3::new(4.0 * PI / 3.0, 0.0, 4.0 * PI);
    let v = vector_surface_integral(&surface_sample(200), &f, &s).unwrap();
    assert!((v - want).magnitude() < 0.005 * want.magnitude());
    assert_converges("vectorSurfaceIntegral", 8, |n| {
        (vector_surface_integral(&surface_sample(n), &f, &s).unwrap() - want).magnitude()
    });
}

#[test]
fn dotted_surface() {
    // Flux of r̂/r² through a sphere of any radius is 4π.
    let f = VectorField::new(|p| {
        let r = p.to_vec();
        r / (r.magnitude() * r.magnitude() * r.magnitude())
    });
    let s = sphere_surface(3.0, Position::ORIGIN).unwrap();
    let v = dotted_surface_integral(&surface_sample(200), &f, &s).unwrap();
    assert!((v - 4.0 * PI).abs() < 0.005 * 4.0 * PI);
    assert_converges("dottedSurfaceIntegral", 8, |n| {
        (dotted_surface_integral(&surface_sample(n), &f, &s).unwrap() - 4.0 * PI).abs()
    });
}

#[test]
fn scalar_volume() {
    // ∫ x² over the unit ball is 4π/15.
    let f = ScalarField::new(|p| p.x() * p.x() + 1.0);
    let v = unit_ball();
    let want = 4.0 * PI / 15.0 + 4.0 * PI / 3.0;
    let got = scalar_volume_integral(&volume_sample(40), &f, &v).unwrap();
    assert!((got - want).abs() < 0.005 * want);
    assert_converges("scalarVolumeIntegral", 8, |n| {
        (scalar_volume_integral(&volume_sample(n), &f, &v).unwrap() - want).abs()
    });
}

#[test]
fn vector_volume() {
    let f = VectorField::new(|p| Vec3::new(p.z() * p.z(), p.x(), 1.0));
    let v = unit_ball();
    let want = Vec3::new(4.0 * PI / 15.0, 0.0, 4.0 * PI / 3.0);
    let got = vector_volume_integral(&volume_sample(40), &f, &v).unwrap();
    assert!((got - want).magnitude() < 0.005 * want.magnitude());
    assert_converges("vectorVolumeIntegral", 8, |n| {
        (vector_volume_integral(&volume_sample(n), &f, &v).unwrap() - want).magnitude()
    });
}
