//! Planar vectors and bearing-cone computations.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::SteerError;

/// A point or displacement in the plane, in units of the noise-disc radius.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `angle` radians from the +x axis.
    #[inline]
    pub fn from_angle(angle: f64) -> Self {
        Self::new(libm::cos(angle), libm::sin(angle))
    }

    #[inline]
    pub fn from_polar(radius: f64, angle: f64) -> Self {
        Self::from_angle(angle) * radius
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Direction of `self`, or an error for the zero (or non-finite) vector.
    pub fn unit(self) -> Result<Vec2, SteerError> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Ok(self / n)
        } else {
            Err(SteerError::ZeroVector)
        }
    }

    /// Polar angle normalized to `[0, 2π)`.
    pub fn angle(self) -> f64 {
        normalize_angle(libm::atan2(self.y, self.x))
    }

    /// Rotation counter-clockwise by `angle` radians.
    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Maps any finite angle into `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle - TAU * libm::floor(angle / TAU);
    // can round up to exactly TAU for tiny negative inputs
    if !(0.0..TAU).contains(&a) {
        0.0
    } else {
        a
    }
}

/// The smallest cone (apex at the origin) containing a set of bearings.
///
/// The cone spans `[start, start + width]` counter-clockwise; `start` is in
/// `[0, 2π)` and `width` in `[0, 2π)`. Reporting start and width rather than
/// two endpoint angles keeps cones that straddle the +x axis unambiguous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    pub start: f64,
    pub width: f64,
}

impl Cone {
    /// Whether `direction` lies inside the closed cone, up to `tol` radians.
    pub fn contains(&self, direction: Vec2, tol: f64) -> bool {
        let offset = normalize_angle(direction.angle() - self.start);
        offset <= self.width + tol || offset >= TAU - tol
    }

    /// Unit vector along the cone's bisector.
    pub fn bisector(&self) -> Vec2 {
        Vec2::from_angle(self.start + 0.5 * self.width)
    }

    /// True when the bearings do not fit in any open half-plane.
    pub fn surrounds(&self) -> bool {
        self.width >= PI
    }
}

/// Smallest cone containing every bearing; its width is the angular spread.
///
/// Computed as `2π` minus the largest gap between consecutive sorted
/// bearing angles (including the wrap-around gap). Bearings need not be
/// normalized but must be nonzero.
pub fn angular_spread(bearings: &[Vec2]) -> Result<Cone, SteerError> {
    if bearings.is_empty() {
        return Err(SteerError::EmptyInput);
    }
    let mut angles = Vec::with_capacity(bearings.len());
    for b in bearings {
        if !b.is_finite() || b.norm() <= 0.0 {
            return Err(SteerError::ZeroVector);
        }
        angles.push(b.angle());
    }
    angles.sort_unstable_by(f64::total_cmp);

    let last = angles.len() - 1;
    // gap that wraps from the last angle back around to the first
    let mut max_gap = angles[0] + TAU - angles[last];
    let mut start = angles[0];
    for w in angles.windows(2) {
        let gap = w[1] - w[0];
        if gap > max_gap {
            max_gap = gap;
            start = w[1];
        }
    }
    let width = (TAU - max_gap).max(0.0);
    Ok(Cone { start, width })
}

/// Smallest disc containing every point, as `(center, radius)`.
///
/// Exact incremental construction (Welzl's algorithm without the random
/// shuffle, so the result is deterministic); worst case `O(m³)`, which is
/// fine for swarm-sized inputs. Returns the origin and radius 0 for an
/// empty slice.
pub fn smallest_enclosing_disc(points: &[Vec2]) -> (Vec2, f64) {
    let Some(&first) = points.first() else {
        return (Vec2::ZERO, 0.0);
    };
    let inside = |c: Vec2, r: f64, p: Vec2| p.distance(c) <= r * (1.0 + 1e-12) + 1e-12;
    let (mut center, mut radius) = (first, 0.0);
    for i in 1..points.len() {
        if inside(center, radius, points[i]) {
            continue;
        }
        center = points[i];
        radius = 0.0;
        for j in 0..i {
            if inside(center, radius, points[j]) {
                continue;
            }
            center = (points[i] + points[j]) * 0.5;
            radius = points[i].distance(points[j]) * 0.5;
            for k in 0..j {
                if inside(center, radius, points[k]) {
                    continue;
                }
                (center, radius) = disc_through(points[i], points[j], points[k]);
            }
        }
    }
    (center, radius)
}

/// Circumscribed disc of three points; for (near-)collinear points, the
/// disc on the farthest pair as diameter.
fn disc_through(a: Vec2, b: Vec2, c: Vec2) -> (Vec2, f64) {
    let ab = b - a;
    let ac = c - a;
    let cross = ab.x * ac.y - ab.y * ac.x;
    let scale = ab.norm_sq().max(ac.norm_sq());
    if cross.abs() <= 1e-14 * scale {
        let pairs = [(a, b), (a, c), (b, c)];
        let (p, q) = pairs
            .into_iter()
            .max_by(|x, y| x.0.distance(x.1).total_cmp(&y.0.distance(y.1)))
            .unwrap_or((a, b));
        return ((p + q) * 0.5, p.distance(q) * 0.5);
    }
    let d = 2.0 * cross;
    let ux = (ac.y * ab.norm_sq() - ab.y * ac.norm_sq()) / d;
    let uy = (ab.x * ac.norm_sq() - ac.x * ab.norm_sq()) / d;
    let offset = Vec2::new(ux, uy);
    (a + offset, offset.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn bearings(angles: &[f64]) -> Vec<Vec2> {
        angles.iter().map(|&a| Vec2::from_angle(a)).collect()
    }

    /// Brute force: try every bearing as the cone start, take the smallest
    /// counter-clockwise span that reaches all the others.
    fn brute_spread(angles: &[f64]) -> f64 {
        angles
            .iter()
            .map(|&s| {
                angles
                    .iter()
                    .map(|&a| normalize_angle(a - s))
                    .fold(0.0_f64, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn single_bearing_has_zero_spread() {
        let cone = angular_spread(&bearings(&[1.3])).unwrap();
        assert_eq!(cone.width, 0.0);
        assert!((cone.start - 1.3).abs() < 1e-12);
    }

    #[test]
    fn quarter_turn_pair() {
        let cone = angular_spread(&bearings(&[0.0, PI / 2.0])).unwrap();
        assert!((cone.width - PI / 2.0).abs() < 1e-12);
        assert!(cone.start.abs() < 1e-12);
    }

    #[test]
    fn three_way_split_excludes_one_gap() {
        let angles = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];
        let cone = angular_spread(&bearings(&angles)).unwrap();
        let expected = brute_spread(&angles);
        assert!((expected - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!((cone.width - expected).abs() < 1e-12);
        assert!(cone.surrounds());
    }

    #[test]
    fn cone_straddling_zero() {
        let cone = angular_spread(&bearings(&[-0.2, 0.3])).unwrap();
        assert!((cone.width - 0.5).abs() < 1e-12);
        assert!((cone.start - (TAU - 0.2)).abs() < 1e-12);
        assert!(cone.contains(Vec2::from_angle(0.1), 1e-12));
        assert!(!cone.contains(Vec2::from_angle(0.4), 1e-12));
        assert!((cone.bisector().angle() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn rejects_empty_and_zero() {
        assert_eq!(angular_spread(&[]), Err(SteerError::EmptyInput));
        assert_eq!(
            angular_spread(&[Vec2::new(1.0, 0.0), Vec2::ZERO]),
            Err(SteerError::ZeroVector)
        );
        assert_eq!(Vec2::ZERO.unit(), Err(SteerError::ZeroVector));
    }

    #[test]
    fn normalize_handles_tiny_negative() {
        let a = normalize_angle(-1e-18);
        assert!((0.0..TAU).contains(&a));
    }

    #[test]
    fn enclosing_disc_small_cases() {
        assert_eq!(smallest_enclosing_disc(&[]).1, 0.0);
        let same = [Vec2::new(2.0, 3.0); 4];
        assert_eq!(smallest_enclosing_disc(&same), (Vec2::new(2.0, 3.0), 0.0));
        let pair = [Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0)];
        let (c, r) = smallest_enclosing_disc(&pair);
        assert!(c.norm() < 1e-15 && (r - 1.0).abs() < 1e-15);
        // right triangle: hypotenuse is the diameter
        let tri = [
            Vec2::new(0.0, 0.0),
            Vec2::new(4.0, 0.0),
            Vec2::new(0.0, 3.0),
        ];
        let (c, r) = smallest_enclosing_disc(&tri);
        assert!((r - 2.5).abs() < 1e-12 && (c - Vec2::new(2.0, 1.5)).norm() < 1e-12);
        // equilateral triangle: circumradius side/sqrt(3)
        let eq: Vec<Vec2> = (0..3)
            .map(|i| Vec2::from_angle(i as f64 * TAU / 3.0))
            .collect();
        assert!((smallest_enclosing_disc(&eq).1 - 1.0).abs() < 1e-12);
        let line = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(5.0, 0.0),
        ];
        assert!((smallest_enclosing_disc(&line).1 - 2.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn enclosing_disc_contains_and_is_tight(
            pts in proptest::collection::vec((-10.0..10.0_f64, -10.0..10.0_f64), 1..25),
        ) {
            let p: Vec<Vec2> = pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
            let (c, r) = smallest_enclosing_disc(&p);
            for &q in &p {
                prop_assert!(q.distance(c) <= r + 1e-9);
            }
            // never larger than the farthest-from-centroid disc, never
            // smaller than half the diameter of the point set
            let mut diam = 0.0_f64;
            for a in &p {
                for b in &p {
                    diam = diam.max(a.distance(*b));
                }
            }
            prop_assert!(r >= diam / 2.0 - 1e-9);
            let cm = p.iter().fold(Vec2::ZERO, |a, &b| a + b) / p.len() as f64;
            let far = p.iter().map(|q| q.distance(cm)).fold(0.0, f64::max);
            prop_assert!(r <= far + 1e-9);
        }

        #[test]
        fn unit_vector_has_unit_norm(x in -1e6..1e6_f64, y in -1e6..1e6_f64) {
            prop_assume!(x != 0.0 || y != 0.0);
            let u = Vec2::new(x, y).unit().unwrap();
            prop_assert!((u.norm() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn spread_matches_brute_force(angles in proptest::collection::vec(0.0..TAU, 1..12)) {
            let cone = angular_spread(&bearings(&angles)).unwrap();
            let expected = brute_spread(&angles);
            prop_assert!((cone.width - expected).abs() < 1e-9);
            for &a in &angles {
                prop_assert!(cone.contains(Vec2::from_angle(a), 1e-9));
            }
        }

        #[test]
        fn spread_is_rotation_invariant(
            angles in proptest::collection::vec(0.0..TAU, 1..12),
            rot in -10.0..10.0_f64,
        ) {
            let base = angular_spread(&bearings(&angles)).unwrap();
            let turned: Vec<Vec2> = bearings(&angles).into_iter().map(|b| b.rotated(rot)).collect();
            let rotated = angular_spread(&turned).unwrap();
            prop_assert!((base.width - rotated.width).abs() < 1e-9);
        }
    }
}
