//! Small 2D vector type used throughout the mesh and flux kernels.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

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

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Rotation by -90 degrees.
    #[inline]
    pub fn perp_cw(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn midpoint(self, other: Vec2) -> Vec2 {
        Vec2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(v: [f64; 2]) -> Self {
        Vec2::new(v[0], v[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
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
        Vec2::new(self * v.x, self * v.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

/// Twice the signed area of triangle (a, b, c); positive when counterclockwise.
#[inline]
pub fn signed_area2(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

/// Gradients of the three P1 basis functions of a counterclockwise triangle.
pub fn p1_gradients(p: &[Vec2; 3]) -> [Vec2; 3] {
    let a2 = signed_area2(p[0], p[1], p[2]);
    let inv = 1.0 / a2;
    let mut g = [Vec2::ZERO; 3];
    for m in 0..3 {
        let p1 = p[(m + 1) % 3];
        let p2 = p[(m + 2) % 3];
        g[m] = Vec2::new(p1.y - p2.y, p2.x - p1.x) * inv;
    }
    g
}

/// Incircle diameter of a triangle, `4 A / P`.
pub fn incircle_diameter(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    let area = 0.5 * signed_area2(a, b, c).abs();
    let perimeter = (b - a).norm() + (c - b).norm() + (a - c).norm();
    4.0 * area / perimeter
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_gradients_reference_triangle() {
        let p = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let g = p1_gradients(&p);
        assert_eq!(g[0], Vec2::new(-1.0, -1.0));
        assert_eq!(g[1], Vec2::new(1.0, 0.0));
        assert_eq!(g[2], Vec2::new(0.0, 1.0));
    }

    #[test]
    fn incircle_examples() {
        let s = 2.0;
        let d = incircle_diameter(
            Vec2::new(0.0, 0.0),
            Vec2::new(s, 0.0),
            Vec2::new(0.5 * s, 0.5 * 3f64.sqrt() * s),
        );
        assert!((d - s / 3f64.sqrt()).abs() < 1e-14);
        let d = incircle_diameter(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0));
        assert!((d - (2.0 - 2f64.sqrt())).abs() < 1e-14);
    }
}
