//! Planar points with interval coordinates.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::interval::{Interval, Result};

#[derive(Clone, Copy, PartialEq)]
pub struct IPoint {
    pub x: Interval,
    pub y: Interval,
}

impl fmt::Debug for IPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

impl fmt::Display for IPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl IPoint {
    pub fn new(x: Interval, y: Interval) -> Self {
        IPoint { x, y }
    }

    pub fn point(x: f64, y: f64) -> Self {
        IPoint::new(Interval::point(x), Interval::point(y))
    }

    pub fn mid(&self) -> (f64, f64) {
        (self.x.mid(), self.y.mid())
    }

    pub fn is_point(&self) -> bool {
        self.x.is_point() && self.y.is_point()
    }

    pub fn scale(self, k: Interval) -> IPoint {
        IPoint::new(self.x * k, self.y * k)
    }

    pub fn dot(self, other: IPoint) -> Interval {
        self.x * other.x + self.y * other.y
    }

    /// `self.x * other.y - self.y * other.x`.
    pub fn cross(self, other: IPoint) -> Interval {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> Interval {
        self.x.sqr() + self.y.sqr()
    }

    pub fn norm(self) -> Interval {
        self.norm_sq().sqrt_nonneg()
    }

    pub fn dist(self, other: IPoint) -> Interval {
        (self - other).norm()
    }

    /// Rotation by the angle whose cosine and sine are given.
    pub fn rotate(self, cos: Interval, sin: Interval) -> IPoint {
        IPoint::new(self.x * cos - self.y * sin, self.x * sin + self.y * cos)
    }

    /// Third vertex of the equilateral triangle on `a b`, to the left of `a -> b`.
    pub fn equilateral_left(a: IPoint, b: IPoint) -> IPoint {
        let half = Interval::point(0.5);
        let h = Interval::sqrt3() * half;
        a + (b - a).rotate(half, h)
    }

    /// Third vertex to the right of `a -> b`.
    pub fn equilateral_right(a: IPoint, b: IPoint) -> IPoint {
        IPoint::equilateral_left(b, a)
    }

    /// Cosine of the angle `a v b` at vertex `v`.
    pub fn cos_angle(a: IPoint, v: IPoint, b: IPoint) -> Result<Interval> {
        let (u, w) = (a - v, b - v);
        let c = u.dot(w).div(u.norm() * w.norm())?;
        Ok(Interval::from_raw(c.lo().clamp(-1.0, 1.0), c.hi().clamp(-1.0, 1.0)))
    }

    /// Angle `a v b` in `[0, pi]`.
    pub fn angle(a: IPoint, v: IPoint, b: IPoint) -> Result<Interval> {
        IPoint::cos_angle(a, v, b)?.acos()
    }
}

impl Add for IPoint {
    type Output = IPoint;
    fn add(self, rhs: IPoint) -> IPoint {
        IPoint::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for IPoint {
    type Output = IPoint;
    fn sub(self, rhs: IPoint) -> IPoint {
        IPoint::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for IPoint {
    type Output = IPoint;
    fn neg(self) -> IPoint {
        IPoint::new(-self.x, -self.y)
    }
}

/// Plain float point, used by the numeric oracle and by figure output.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pt {
    pub x: f64,
    pub y: f64,
}

impl Pt {
    pub const fn new(x: f64, y: f64) -> Self {
        Pt { x, y }
    }

    pub fn dist(self, o: Pt) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, o: Pt) -> Pt {
        Pt::new(self.x - o.x, self.y - o.y)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, o: Pt) -> Pt {
        Pt::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, k: f64) -> Pt {
        Pt::new(self.x * k, self.y * k)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn to_interval(self) -> IPoint {
        IPoint::point(self.x, self.y)
    }

    /// Angle `a v b` in `[0, pi]`.
    pub fn angle(a: Pt, v: Pt, b: Pt) -> f64 {
        let (u, w) = (a.sub(v), b.sub(v));
        let c = (u.x * w.x + u.y * w.y) / (u.norm() * w.norm());
        c.clamp(-1.0, 1.0).acos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral_vertex_is_equidistant() {
        let a = IPoint::point(0.0, 0.0);
        let b = IPoint::point(1.0, 0.0);
        let e = IPoint::equilateral_left(a, b);
        assert!(e.y.lo() > 0.0);
        assert!(e.dist(a).contains(1.0) || e.dist(a).width() < 1e-15);
        assert!(e.dist(b).overlaps(&Interval::ONE));
        let r = IPoint::equilateral_right(a, b);
        assert!(r.y.hi() < 0.0);
    }

    #[test]
    fn right_angle() {
        let a = IPoint::point(1.0, 0.0);
        let v = IPoint::point(0.0, 0.0);
        let b = IPoint::point(0.0, 3.0);
        let ang = IPoint::angle(a, v, b).unwrap();
        assert!(ang.overlaps(&Interval::half_pi()));
        assert!((Pt::angle(Pt::new(1.0, 0.0), Pt::default(), Pt::new(0.0, 3.0))
            - std::f64::consts::FRAC_PI_2)
            .abs()
            < 1e-15);
    }
}
