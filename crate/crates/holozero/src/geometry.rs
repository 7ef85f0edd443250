//! Axis-aligned rectangles in the complex plane, their oriented boundaries,
//! and splitting.
//!
//! All types here are immutable values and may be shared freely between
//! threads. Rectangle boundaries are always traversed counterclockwise
//! (positive orientation, interior on the left).

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("rectangle must have positive area and finite coordinates: [{re_min}, {re_max}] x [{im_min}, {im_max}]")]
    InvalidRectangle {
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
    },
}

/// An axis-aligned rectangle `[re_min, re_max] + [im_min, im_max]i`.
///
/// Containment is closed: points on the boundary (corners included) count
/// as inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, GeometryError> {
        let ok = re_min.is_finite()
            && re_max.is_finite()
            && im_min.is_finite()
            && im_max.is_finite()
            && re_min < re_max
            && im_min < im_max;
        if !ok {
            return Err(GeometryError::InvalidRectangle {
                re_min,
                re_max,
                im_min,
                im_max,
            });
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Length of the diagonal.
    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    /// Closed containment test.
    pub fn contains(&self, z: Complex64) -> bool {
        self.re_min <= z.re && z.re <= self.re_max && self.im_min <= z.im && z.im <= self.im_max
    }

    /// Corners in counterclockwise order starting at the lower left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    /// The four directed boundary edges in counterclockwise order:
    /// bottom, right, top, left.
    pub fn edges(&self) -> [Edge; 4] {
        let [ll, lr, ur, ul] = self.corners();
        [
            Edge::new(ll, lr),
            Edge::new(lr, ur),
            Edge::new(ur, ul),
            Edge::new(ul, ll),
        ]
    }

    /// Splits the rectangle perpendicular to its longer side at
    /// `offset_fraction` of that side (0.5 gives equal halves). Squares are
    /// split vertically. Returns the two children (left/bottom first) and
    /// the inserted edge, which the first child traverses with positive
    /// orientation and the second with negative.
    ///
    /// `offset_fraction` must lie strictly inside (0, 1); callers are
    /// expected to keep it well away from the endpoints.
    pub fn split(&self, offset_fraction: f64) -> (Rectangle, Rectangle, Edge) {
        debug_assert!(offset_fraction > 0.0 && offset_fraction < 1.0);
        if self.width() >= self.height() {
            let x = self.re_min + offset_fraction * self.width();
            let left = Rectangle {
                re_max: x,
                ..*self
            };
            let right = Rectangle {
                re_min: x,
                ..*self
            };
            let edge = Edge::new(
                Complex64::new(x, self.im_min),
                Complex64::new(x, self.im_max),
            );
            (left, right, edge)
        } else {
            let y = self.im_min + offset_fraction * self.height();
            let bottom = Rectangle {
                im_max: y,
                ..*self
            };
            let top = Rectangle {
                im_min: y,
                ..*self
            };
            let edge = Edge::new(
                Complex64::new(self.re_min, y),
                Complex64::new(self.re_max, y),
            );
            (bottom, top, edge)
        }
    }

    pub fn boundary(&self) -> BoundaryParam {
        BoundaryParam { rect: *self }
    }
}

impl std::fmt::Display for Rectangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}] + [{}, {}]i",
            self.re_min, self.re_max, self.im_min, self.im_max
        )
    }
}

/// A directed straight segment in the complex plane. Reversing an edge
/// negates any contour integral along it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub start: Complex64,
    pub end: Complex64,
}

impl Edge {
    pub fn new(start: Complex64, end: Complex64) -> Self {
        debug_assert!(start != end);
        Self { start, end }
    }

    pub fn reversed(&self) -> Self {
        Self {
            start: self.end,
            end: self.start,
        }
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }

    /// Point at fraction `t` in [0, 1] along the edge.
    pub fn point_at(&self, t: f64) -> Complex64 {
        self.start + (self.end - self.start) * t
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({} + {}i) -> ({} + {}i)",
            self.start.re, self.start.im, self.end.re, self.end.im
        )
    }
}

/// Arclength parametrization of a rectangle boundary, counterclockwise.
///
/// `t = 0` maps to the lower-left corner; the parameter is periodic with
/// period equal to the perimeter.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryParam {
    rect: Rectangle,
}

impl BoundaryParam {
    pub fn rect(&self) -> Rectangle {
        self.rect
    }

    /// Total arclength of the boundary.
    pub fn total_length(&self) -> f64 {
        2.0 * (self.rect.width() + self.rect.height())
    }

    /// Boundary point at parameter `t` (reduced modulo the perimeter).
    pub fn point(&self, t: f64) -> Complex64 {
        let w = self.rect.width();
        let h = self.rect.height();
        let perimeter = self.total_length();
        let mut t = t % perimeter;
        if t < 0.0 {
            t += perimeter;
        }
        if t < w {
            Complex64::new(self.rect.re_min + t, self.rect.im_min)
        } else if t < w + h {
            Complex64::new(self.rect.re_max, self.rect.im_min + (t - w))
        } else if t < 2.0 * w + h {
            Complex64::new(self.rect.re_max - (t - w - h), self.rect.im_max)
        } else {
            Complex64::new(self.rect.re_min, self.rect.im_max - (t - 2.0 * w - h))
        }
    }
}
