//! Axis-aligned boxes in page-pixel coordinates.
//!
//! Boxes are real-valued rectangles with the origin at the top-left corner
//! of the page; area is `(x2 - x1) * (y2 - y1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned rectangle `(x1, y1)`-`(x2, y2)` with `x1 < x2` and `y1 < y2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl BBox {
    /// Builds a box, rejecting non-finite coordinates and empty extents.
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Result<Self> {
        let b = Self { x1, y1, x2, y2 };
        if b.is_valid() {
            Ok(b)
        } else {
            Err(Error::InvalidBox { x1, y1, x2, y2 })
        }
    }

    pub fn is_valid(&self) -> bool {
        [self.x1, self.y1, self.x2, self.y2]
            .iter()
            .all(|v| v.is_finite())
            && self.x1 < self.x2
            && self.y1 < self.y2
    }

    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> f64 {
        self.y2 - self.y1
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Intersection rectangle, `None` when the interiors do not meet.
    pub fn intersection(&self, other: &BBox) -> Option<BBox> {
        let b = BBox {
            x1: self.x1.max(other.x1),
            y1: self.y1.max(other.y1),
            x2: self.x2.min(other.x2),
            y2: self.y2.min(other.y2),
        };
        (b.x1 < b.x2 && b.y1 < b.y2).then_some(b)
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        self.intersection(other).map_or(0.0, |b| b.area())
    }

    pub fn contains(&self, other: &BBox) -> bool {
        self.x1 <= other.x1 && self.y1 <= other.y1 && self.x2 >= other.x2 && self.y2 >= other.y2
    }

    pub fn within_page(&self, width: f64, height: f64) -> bool {
        self.x1 >= 0.0 && self.y1 >= 0.0 && self.x2 <= width && self.y2 <= height
    }

    pub fn union(&self, other: &BBox) -> BBox {
        BBox {
            x1: self.x1.min(other.x1),
            y1: self.y1.min(other.y1),
            x2: self.x2.max(other.x2),
            y2: self.y2.max(other.y2),
        }
    }

    pub fn center(&self) -> Point {
        center(self)
    }
}

/// Intersection over union of two valid boxes; 0 when they are disjoint.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter <= 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

pub fn center(b: &BBox) -> Point {
    Point::new((b.x1 + b.x2) / 2.0, (b.y1 + b.y2) / 2.0)
}

/// Smallest axis-aligned box containing every input box.
pub fn enclosing_box<'a, I>(boxes: I) -> Result<BBox>
where
    I: IntoIterator<Item = &'a BBox>,
{
    boxes
        .into_iter()
        .copied()
        .reduce(|acc, b| acc.union(&b))
        .ok_or(Error::EmptyGeometry)
}

/// Smallest axis-aligned box containing every point. The result may be
/// degenerate (zero width or height) when the points are collinear along an
/// axis, so it is returned as raw coordinates.
pub fn enclosing_points<'a, I>(points: I) -> Result<(f64, f64, f64, f64)>
where
    I: IntoIterator<Item = &'a Point>,
{
    points
        .into_iter()
        .map(|p| (p.x, p.y, p.x, p.y))
        .reduce(|a, b| (a.0.min(b.0), a.1.min(b.1), a.2.max(b.2), a.3.max(b.3)))
        .ok_or(Error::EmptyGeometry)
}
