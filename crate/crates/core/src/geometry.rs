//! Exact 2D primitives shared by every planner: points, discs, segments,
//! angular sectors and the collision predicates built on them.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Slack applied to the angular test in [`point_in_sector`], in radians.
///
/// Points produced by polar sampling land on the sector boundary up to
/// floating-point rounding; this keeps them inside.
pub const ANGULAR_TOLERANCE: f64 = 1e-9;

/// A configuration in the planar workspace. Coordinates are always finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct Point2 {
    x: f64,
    y: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    x: f64,
    y: f64,
}

impl TryFrom<RawPoint> for Point2 {
    type Error = GeometryError;
    fn try_from(raw: RawPoint) -> Result<Self, Self::Error> {
        Point2::try_new(raw.x, raw.y)
    }
}

impl From<Point2> for RawPoint {
    fn from(p: Point2) -> Self {
        RawPoint { x: p.x, y: p.y }
    }
}

impl Point2 {
    /// Panics on non-finite input; use [`Point2::try_new`] for untrusted data.
    pub fn new(x: f64, y: f64) -> Self {
        Self::try_new(x, y).expect("point coordinates must be finite")
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn distance(&self, other: &Point2) -> f64 {
        euclidean_distance(*self, *other)
    }

    /// Point reached by moving `dist` along `heading` (radians).
    pub fn offset_polar(&self, heading: f64, dist: f64) -> Point2 {
        Point2::new(self.x + dist * heading.cos(), self.y + dist * heading.sin())
    }

    /// Rotates about `center` by `angle` radians (counter-clockwise).
    pub fn rotate_about(&self, center: Point2, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        let dx = self.x - center.x;
        let dy = self.y - center.y;
        Point2::new(center.x + c * dx - s * dy, center.y + s * dx + c * dy)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Closed disc obstacle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    center: Point2,
    radius: f64,
}

impl Disc {
    pub fn new(center: Point2, radius: f64) -> Result<Self, GeometryError> {
        if radius.is_finite() && radius > 0.0 {
            Ok(Self { center, radius })
        } else {
            Err(GeometryError::InvalidRadius(radius))
        }
    }

    #[inline]
    pub fn center(&self) -> Point2 {
        self.center
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Boundary contact counts as contained.
    #[inline]
    pub fn contains(&self, p: Point2) -> bool {
        euclidean_distance(self.center, p) <= self.radius
    }
}

/// Straight local path between two states. Zero length is allowed and
/// behaves like a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        euclidean_distance(self.a, self.b)
    }

    /// Point on the closed segment nearest to `p`.
    pub fn closest_point(&self, p: Point2) -> Point2 {
        let dx = self.b.x - self.a.x;
        let dy = self.b.y - self.a.y;
        let len2 = dx * dx + dy * dy;
        if len2 == 0.0 {
            return self.a;
        }
        let t = (((p.x - self.a.x) * dx + (p.y - self.a.y) * dy) / len2).clamp(0.0, 1.0);
        Point2::new(self.a.x + t * dx, self.a.y + t * dy)
    }

    pub fn distance_to_point(&self, p: Point2) -> f64 {
        euclidean_distance(self.closest_point(p), p)
    }
}

/// Angle-bounded sampling region: every point within `length` of `apex`
/// whose bearing deviates from `heading` by at most `half_angle`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    apex: Point2,
    heading: f64,
    half_angle: f64,
    length: f64,
}

impl Sector {
    /// `heading` is normalized into [-π, π).
    pub fn new(apex: Point2, heading: f64, half_angle: f64, length: f64) -> Result<Self, GeometryError> {
        if !heading.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if !(0.0..=PI).contains(&half_angle) {
            return Err(GeometryError::InvalidHalfAngle(half_angle));
        }
        if !(length.is_finite() && length >= 0.0) {
            return Err(GeometryError::InvalidLength(length));
        }
        Ok(Self {
            apex,
            heading: normalize_angle(heading),
            half_angle,
            length,
        })
    }

    #[inline]
    pub fn apex(&self) -> Point2 {
        self.apex
    }

    #[inline]
    pub fn heading(&self) -> f64 {
        self.heading
    }

    #[inline]
    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_full_disc(&self) -> bool {
        self.half_angle >= PI
    }

    pub fn contains(&self, p: Point2) -> bool {
        point_in_sector(p, self)
    }
}

/// Wraps an angle into [-π, π).
pub fn normalize_angle(theta: f64) -> f64 {
    if (-PI..PI).contains(&theta) {
        return theta;
    }
    let mut a = (theta + PI).rem_euclid(TAU) - PI;
    // rem_euclid can round up to TAU for inputs just below a multiple of TAU.
    if a >= PI {
        a -= TAU;
    }
    a
}

#[inline]
pub fn euclidean_distance(a: Point2, b: Point2) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    (dx * dx + dy * dy).sqrt()
}

/// Exact closest-approach test; tangency counts as a hit.
pub fn segment_hits_disc(s: &Segment, d: &Disc) -> bool {
    s.distance_to_point(d.center) <= d.radius
}

/// Principal angle of `to - from`, in [-π, π).
pub fn angle_of(from: Point2, to: Point2) -> Result<f64, GeometryError> {
    if from == to {
        return Err(GeometryError::ZeroVector);
    }
    Ok(normalize_angle((to.y - from.y).atan2(to.x - from.x)))
}

/// Signed deviation of `angle` from `reference`, wrapped to [-π, π).
#[inline]
pub fn angular_deviation(angle: f64, reference: f64) -> f64 {
    normalize_angle(angle - reference)
}

pub fn point_in_sector(p: Point2, s: &Sector) -> bool {
    if euclidean_distance(p, s.apex) > s.length {
        return false;
    }
    if p == s.apex || s.half_angle >= PI {
        return true;
    }
    let bearing = (p.y - s.apex.y).atan2(p.x - s.apex.x);
    angular_deviation(bearing, s.heading).abs() <= s.half_angle + ANGULAR_TOLERANCE
}
