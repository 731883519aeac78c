//! Vectors, positions under Cartesian/cylindrical/spherical coordinates, and
//! the position-dependent unit-basis fields.
//!
//! Conventions: `s` is the distance from the z-axis, `r` the distance from the
//! origin, `theta` is measured from +z, and `phi` from +x toward +y. Extracted
//! `phi` lies in `(-π, π]`; on the z-axis it is reported as 0.

use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::math::{atan2, cos, sin, sqrt, PI};

/// A three-dimensional vector in Cartesian components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vec3 = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Vec3 = Vec3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Right-handed cross product.
    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn magnitude(self) -> f64 {
        sqrt(self.dot(self))
    }

    pub fn normalize(self) -> Result<Vec3> {
        let m = self.magnitude();
        if m > 0.0 {
            Ok(self / m)
        } else {
            Err(Error::ZeroVectorNormalization)
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, c: f64) -> Vec3 {
        Vec3::new(self.x * c, self.y * c, self.z * c)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, c: f64) -> Vec3 {
        Vec3::new(self.x / c, self.y / c, self.z / c)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

/// Left-to-right sum; the order is the iterator's order.
impl Sum for Vec3 {
    fn sum<I: Iterator<Item = Vec3>>(iter: I) -> Vec3 {
        iter.fold(Vec3::ZERO, |acc, v| acc + v)
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A point in space. Stored as a Cartesian triple; the other coordinate
/// systems are conversions, never alternate representations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    x: f64,
    y: f64,
    z: f64,
}

impl Position {
    pub const ORIGIN: Position = Position { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn cartesian(x: f64, y: f64, z: f64) -> Self {
        Position { x, y, z }
    }

    /// `(s, phi, z)`; `s` must be non-negative.
    pub fn cylindrical(s: f64, phi: f64, z: f64) -> Result<Self> {
        if s < 0.0 {
            return Err(Error::NegativeRadial { coordinate: "s", value: s });
        }
        Ok(Position { x: s * cos(phi), y: s * sin(phi), z })
    }

    /// `(r, theta, phi)`; `r ≥ 0` and `0 ≤ theta ≤ π`.
    pub fn spherical(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if r < 0.0 {
            return Err(Error::NegativeRadial { coordinate: "r", value: r });
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::PolarAngleOutOfRange(theta));
        }
        let st = sin(theta);
        Ok(Position { x: r * st * cos(phi), y: r * st * sin(phi), z: r * cos(theta) })
    }

    pub fn cartesian_coordinates(self) -> (f64, f64, f64) {
        (self.x, self.y, self.z)
    }

    pub fn cylindrical_coordinates(self) -> (f64, f64, f64) {
        (self.axial_distance(), self.azimuth(), self.z)
    }

    pub fn spherical_coordinates(self) -> (f64, f64, f64) {
        let s = self.axial_distance();
        let r = sqrt(s * s + self.z * self.z);
        let theta = if r == 0.0 { 0.0 } else { atan2(s, self.z) };
        (r, theta, self.azimuth())
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn y(self) -> f64 {
        self.y
    }

    pub fn z(self) -> f64 {
        self.z
    }

    /// The position as a vector from the origin.
    pub fn to_vec(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn from_vec(v: Vec3) -> Self {
        Position { x: v.x, y: v.y, z: v.z }
    }

    pub fn shifted(self, v: Vec3) -> Position {
        Position { x: self.x + v.x, y: self.y + v.y, z: self.z + v.z }
    }

    pub fn is_finite(self) -> bool {
        self.to_vec().is_finite()
    }

    fn axial_distance(self) -> f64 {
        sqrt(self.x * self.x + self.y * self.y)
    }

    fn azimuth(self) -> f64 {
        if self.x == 0.0 && self.y == 0.0 {
            return 0.0;
        }
        let phi = atan2(self.y, self.x);
        // atan2(-0.0, x < 0) is -π; keep the half-open branch (-π, π].
        if phi == -PI {
            PI
        } else {
            phi
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Vector from `source` to `target`.
pub fn displacement(source: Position, target: Position) -> Vec3 {
    target.to_vec() - source.to_vec()
}

/// Unit vectors of the three coordinate systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    XHat,
    YHat,
    ZHat,
    SHat,
    PhiHat,
    RHat,
    ThetaHat,
}

impl Basis {
    pub const ALL: [Basis; 7] = [
        Basis::XHat,
        Basis::YHat,
        Basis::ZHat,
        Basis::SHat,
        Basis::PhiHat,
        Basis::RHat,
        Basis::ThetaHat,
    ];

    /// Unit vector at `p`. Errors on the z-axis for `SHat`/`PhiHat` and at the
    /// origin for `RHat`/`ThetaHat`.
    pub fn at(self, p: Position) -> Result<Vec3> {
        let (s, phi, _) = p.cylindrical_coordinates();
        let singular = Err(Error::SingularBasis { basis: self, at: p });
        match self {
            Basis::XHat => Ok(Vec3::X),
            Basis::YHat => Ok(Vec3::Y),
            Basis::ZHat => Ok(Vec3::Z),
            Basis::SHat if s == 0.0 => singular,
            Basis::SHat => Ok(Vec3::new(cos(phi), sin(phi), 0.0)),
            Basis::PhiHat if s == 0.0 => singular,
            Basis::PhiHat => Ok(Vec3::new(-sin(phi), cos(phi), 0.0)),
            Basis::RHat => p.to_vec().normalize().or(singular),
            Basis::ThetaHat => {
                let (r, theta, phi) = p.spherical_coordinates();
                if r == 0.0 {
                    return singular;
                }
                let ct = cos(theta);
                Ok(Vec3::new(ct * cos(phi), ct * sin(phi), -sin(theta)))
            }
        }
    }
}

/// The unit-basis vector field for `basis`.
pub fn unit_basis(basis: Basis) -> VectorField {
    VectorField::try_new(move |p| basis.at(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn cross_examples() {
        assert_eq!(Vec3::X.cross(Vec3::Y), Vec3::Z);
        let v = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(v.cross(v), Vec3::ZERO);
        assert_eq!(v.cross(Vec3::new(4.0, 5.0, 6.0)), Vec3::new(-3.0, 6.0, -3.0));
    }

    #[test]
    fn normalize_zero_is_an_error() {
        assert_eq!(Vec3::ZERO.normalize(), Err(Error::ZeroVectorNormalization));
        assert_eq!(Error::ZeroVectorNormalization.to_string(), "zero-vector normalization");
        let n = Vec3::new(3.0, 0.0, 4.0).normalize().unwrap();
        assert_eq!(n, Vec3::new(0.6, 0.0, 0.8));
    }

    #[test]
    fn constructors_follow_coordinate_conventions() {
        let p = Position::spherical(1.0, PI / 2.0, 0.0).unwrap();
        assert!(close(p.to_vec(), Vec3::X, 1e-16));
        let p = Position::cylindrical(2.0, PI / 2.0, 3.0).unwrap();
        assert!(close(p.to_vec(), Vec3::new(0.0, 2.0, 3.0), 1e-15));
        let p = Position::spherical(2.0, 0.0, 1.234).unwrap();
        assert_eq!(p.to_vec(), Vec3::new(0.0, 0.0, 2.0));
    }

    #[test]
    fn negative_radial_coordinates_are_rejected() {
        assert!(matches!(
            Position::cylindrical(-1.0, 0.0, 0.0),
            Err(Error::NegativeRadial { coordinate: "s", .. })
        ));
        assert!(matches!(
            Position::spherical(-1.0, 0.0, 0.0),
            Err(Error::NegativeRadial { coordinate: "r", .. })
        ));
        assert!(Position::spherical(1.0, 4.0, 0.0).is_err());
    }

    #[test]
    fn extractor_examples() {
        let (r, theta, phi) = Position::cartesian(0.0, 0.0, -3.0).spherical_coordinates();
        assert_eq!((r, theta, phi), (3.0, PI, 0.0));
        let (s, phi, z) = Position::cartesian(1.0, 1.0, 0.0).cylindrical_coordinates();
        assert!((s - 2f64.sqrt()).abs() < 1e-15);
        assert!((phi - PI / 4.0).abs() < 1e-15);
        assert_eq!(z, 0.0);
        assert_eq!(
            Position::cartesian(0.3, -0.4, 5.0).cartesian_coordinates(),
            (0.3, -0.4, 5.0)
        );
    }

    #[test]
    fn phi_branch_is_half_open() {
        assert_eq!(Position::cartesian(-1.0, 0.0, 0.0).cylindrical_coordinates().1, PI);
        assert_eq!(Position::cartesian(-1.0, -0.0, 0.0).cylindrical_coordinates().1, PI);
        assert_eq!(Position::cartesian(-0.0, 0.0, 2.0).cylindrical_coordinates().1, 0.0);
        assert_eq!(Position::ORIGIN.spherical_coordinates(), (0.0, 0.0, 0.0));
    }

    #[test]
    fn displacement_is_target_minus_source() {
        let o = Position::ORIGIN;
        let p = Position::cartesian(1.0, 2.0, 3.0);
        assert_eq!(displacement(o, p), Vec3::new(1.0, 2.0, 3.0));
        assert_eq!(displacement(p, p), Vec3::ZERO);
        assert_eq!(
            displacement(Position::cartesian(1.0, 0.0, 0.0), o),
            Vec3::new(-1.0, 0.0, 0.0)
        );
    }

    #[test]
    fn basis_examples() {
        let r = unit_basis(Basis::RHat).eval(Position::cartesian(0.0, 0.0, 5.0)).unwrap();
        assert_eq!(r, Vec3::Z);
        let phi = Basis::PhiHat.at(Position::cartesian(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(phi, Vec3::Y);
        let p = Position::cartesian(1.0, 1.0, 1.0);
        let d = Basis::RHat.at(p).unwrap().dot(Basis::ThetaHat.at(p).unwrap());
        assert!(d.abs() < 1e-15);
    }

    #[test]
    fn basis_errors_on_singular_loci() {
        for (b, p) in [
            (Basis::RHat, Position::ORIGIN),
            (Basis::ThetaHat, Position::ORIGIN),
            (Basis::SHat, Position::cartesian(0.0, 0.0, 2.0)),
            (Basis::PhiHat, Position::cartesian(0.0, 0.0, -1.0)),
        ] {
            let e = b.at(p).unwrap_err();
            assert_eq!(e, Error::SingularBasis { basis: b, at: p });
            assert!(e.to_string().starts_with("basis undefined on singular locus"));
        }
        assert_eq!(Basis::ZHat.at(Position::ORIGIN), Ok(Vec3::Z));
    }

    fn point() -> impl Strategy<Value = Position> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64)
            .prop_filter("off the z-axis", |(x, y, _)| x.hypot(*y) > 1e-3)
            .prop_map(|(x, y, z)| Position::cartesian(x, y, z))
    }

    fn vec3() -> impl Strategy<Value = Vec3> {
        (-100.0..100.0f64, -100.0..100.0f64, -100.0..100.0f64)
            .prop_map(|(x, y, z)| Vec3::new(x, y, z))
    }

    fn assert_frame(a: Vec3, b: Vec3, c: Vec3) {
        for (u, v) in [(a, b), (b, c), (a, c)] {
            assert!(u.dot(v).abs() < 1e-12);
        }
        for u in [a, b, c] {
            assert!((u.magnitude() - 1.0).abs() < 1e-12);
        }
        assert!(close(a.cross(b), c, 1e-12));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bases_are_right_handed_orthonormal(p in point()) {
            let at = |b: Basis| b.at(p).unwrap();
            assert_frame(at(Basis::RHat), at(Basis::ThetaHat), at(Basis::PhiHat));
            assert_frame(at(Basis::SHat), at(Basis::PhiHat), at(Basis::ZHat));
        }

        #[test]
        fn spherical_round_trip(
            r in 1e-3..1e3f64,
            theta in 1e-3..(PI - 1e-3),
            phi in -3.1..3.1f64,
        ) {
            let p = Position::spherical(r, theta, phi).unwrap();
            let (r2, t2, f2) = p.spherical_coordinates();
            let q = Position::spherical(r2, t2, f2).unwrap();
            prop_assert!((q.to_vec() - p.to_vec()).magnitude() <= 1e-12 * r);
            let (s, f3, z) = p.cylindrical_coordinates();
            let q = Position::cylindrical(s, f3, z).unwrap();
            prop_assert!((q.to_vec() - p.to_vec()).magnitude() <= 1e-12 * r);
        }

        #[test]
        fn cartesian_round_trip_is_exact(x in -1e6..1e6f64, y in -1e6..1e6f64, z in -1e6..1e6f64) {
            let (a, b, c) = Position::cartesian(x, y, z).cartesian_coordinates();
            prop_assert_eq!(Position::cartesian(a, b, c), Position::cartesian(x, y, z));
        }

        #[test]
        fn cross_is_antisymmetric_and_bilinear(a in vec3(), b in vec3(), c in vec3(), k in -5.0..5.0f64) {
            let scale = a.magnitude().max(1.0) * b.magnitude().max(1.0) * c.magnitude().max(1.0);
            let tol = 1e-12 * scale * 10.0;
            prop_assert!(close(a.cross(b), -b.cross(a), tol));
            prop_assert!(close((a + c).cross(b), a.cross(b) + c.cross(b), tol));
            prop_assert!(close((k * a).cross(b), k * a.cross(b), tol));
            let self_cross = a.cross(a);
            prop_assert!(self_cross.max_abs() <= 1e-12 * a.dot(a));
        }

        #[test]
        fn magnitude_is_non_negative(a in vec3()) {
            prop_assert!(a.magnitude() >= 0.0);
            prop_assert_eq!(a.magnitude() == 0.0, a == Vec3::ZERO);
        }
    }
}
