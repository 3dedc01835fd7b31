//! Plain plane geometry: points, axis-aligned rectangles, seed regions.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of the plane in physical units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T: Scalar = f64> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2 {
            x: T::zero(),
            y: T::zero(),
        }
    }

    pub fn distance(self, other: Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]` in physical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T: Scalar = f64> {
    pub x0: T,
    pub y0: T,
    pub x1: T,
    pub y1: T,
}

impl<T: Scalar> Rect<T> {
    pub fn new(x0: T, y0: T, x1: T, y1: T) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::DegenerateBounds(format!(
                "[{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) {
            return Err(Error::DegenerateBounds("non-finite corner".into()));
        }
        Ok(Rect { x0, y0, x1, y1 })
    }

    /// Unit square `[0,1]^2`.
    pub fn unit() -> Self {
        Rect {
            x0: T::zero(),
            y0: T::zero(),
            x1: T::one(),
            y1: T::one(),
        }
    }

    pub fn width(&self) -> T {
        self.x1 - self.x0
    }

    pub fn height(&self) -> T {
        self.y1 - self.y0
    }

    pub fn center(&self) -> Point2<T> {
        let half = T::from_f64_lossy(0.5);
        Point2::new((self.x0 + self.x1) * half, (self.y0 + self.y1) * half)
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn contains_rect(&self, other: &Rect<T>) -> bool {
        other.x0 >= self.x0 && other.x1 <= self.x1 && other.y0 >= self.y0 && other.y1 <= self.y1
    }

    /// Distance from `p` to the boundary of the rectangle (positive inside).
    pub fn distance_to_boundary(&self, p: Point2<T>) -> T {
        let dx = (p.x - self.x0).min(self.x1 - p.x);
        let dy = (p.y - self.y0).min(self.y1 - p.y);
        dx.min(dy)
    }
}

/// Region used to seed a grid: every cell whose center lies inside is
/// marked occupied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedRegion<T: Scalar = f64> {
    Rect(Rect<T>),
    Disk { center: Point2<T>, radius: T },
}

impl<T: Scalar> SeedRegion<T> {
    pub fn contains(&self, p: Point2<T>) -> bool {
        match *self {
            SeedRegion::Rect(r) => r.contains(p),
            SeedRegion::Disk { center, radius } => p.distance(center) <= radius,
        }
    }

    /// Tight bounding rectangle of the region.
    pub fn bounding_rect(&self) -> Rect<T> {
        match *self {
            SeedRegion::Rect(r) => r,
            SeedRegion::Disk { center, radius } => Rect {
                x0: center.x - radius,
                y0: center.y - radius,
                x1: center.x + radius,
                y1: center.y + radius,
            },
        }
    }
}
