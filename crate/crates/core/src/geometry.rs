//! Small 3D vector type and the planar distance helpers used by the cost model.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Segments shorter than this (meters) are treated as degenerate.
pub const EPS_LEN: f64 = 1e-9;

/// A point or displacement in meters: x east, y north, z up.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(self, other: Point3) -> f64 {
        (other - self).norm()
    }

    /// Length of the projection onto the horizontal plane.
    pub fn horizontal_norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Projection onto the horizontal plane, `k x (v x k)`.
    pub fn horizontal(self) -> Point3 {
        Point3::new(self.x, self.y, 0.0)
    }

    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Point3) -> Point3 {
        Point3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn midpoint(self, other: Point3) -> Point3 {
        Point3::new(
            0.5 * (self.x + other.x),
            0.5 * (self.y + other.y),
            0.5 * (self.z + other.z),
        )
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, rhs: f64) -> Point3 {
        Point3::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

/// Minimum distance in the x-y plane from `(px, py)` to the segment `a`-`b`
/// (both endpoints projected; z ignored).
pub fn horizontal_point_segment_distance(px: f64, py: f64, a: Point3, b: Point3) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 <= EPS_LEN * EPS_LEN {
        return (px - a.x).hypot(py - a.y);
    }
    let t = (((px - a.x) * dx + (py - a.y) * dy) / len2).clamp(0.0, 1.0);
    (px - (a.x + t * dx)).hypot(py - (a.y + t * dy))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_interior_projection() {
        let a = Point3::new(0.0, 0.0, 5.0);
        let b = Point3::new(10.0, 0.0, -3.0);
        assert_eq!(horizontal_point_segment_distance(5.0, 4.0, a, b), 4.0);
    }

    #[test]
    fn segment_distance_clamps_to_endpoint() {
        let a = Point3::new(0.0, 0.0, 0.0);
        let b = Point3::new(10.0, 0.0, 0.0);
        assert_eq!(horizontal_point_segment_distance(13.0, 4.0, a, b), 5.0);
        assert_eq!(horizontal_point_segment_distance(-3.0, -4.0, a, b), 5.0);
    }

    #[test]
    fn segment_distance_vertical_segment_is_point_distance() {
        let a = Point3::new(1.0, 1.0, 0.0);
        let b = Point3::new(1.0, 1.0, 50.0);
        assert_eq!(horizontal_point_segment_distance(4.0, 5.0, a, b), 5.0);
    }
}
