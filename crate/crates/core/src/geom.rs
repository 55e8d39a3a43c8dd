//! Minimal 2-D vector/point arithmetic shared by the field, tracing, and
//! stroke-geometry modules.
//!
//! Coordinates follow image conventions throughout the crate: `x` is the
//! column, `y` is the row, and the origin sits at the centre of the top-left
//! pixel.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A point or direction in image coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

/// Points and vectors share one representation; `Point` is used in
/// signatures where a location (rather than a direction) is meant.
pub type Point = Vec2;

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, rhs: Self) -> f64 {
        self.x * rhs.x + self.y * rhs.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, rhs: Self) -> f64 {
        (self - rhs).norm()
    }

    /// Unit vector in the same direction, or `None` for (near-)zero input.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n <= f64::EPSILON {
            None
        } else {
            Some(Self::new(self.x / n, self.y / n))
        }
    }

    /// Counter-clockwise perpendicular (in y-down image coordinates this is
    /// the 90 degree rotation (x, y) -> (-y, x)).
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn lerp(self, rhs: Self, t: f64) -> Self {
        self + (rhs - self) * t
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Distance from `p` to the closed segment `[a, b]`. The projection is
/// clamped to the endpoints, so a degenerate segment behaves like a point.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    point_segment_distance_sq(p, a, b).sqrt()
}

/// Squared distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance_sq(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq <= 0.0 {
        return (p - a).norm_sq();
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    (p - a.lerp(b, t)).norm_sq()
}
