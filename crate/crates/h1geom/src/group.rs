//! Points of the group, tangent vectors in the left-invariant frame, and the
//! horizontal structure: J operator, horizontal lines, Killing fields.

use crate::error::{Error, Result};
#[cfg(not(feature = "std"))]
use crate::numeric::Float;

/// A point (x, y, t) of the group.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl Point {
    pub const ORIGIN: Point = Point {
        x: 0.0,
        y: 0.0,
        t: 0.0,
    };

    pub fn new(x: f64, y: f64, t: f64) -> Point {
        Point { x, y, t }
    }

    /// Group product `self * rhs`.
    ///
    /// With z = x + iy the product is [z,t][z',t'] = [z+z', t+t'+Im(z conj z')],
    /// so the vertical increment is `y x' - x y'`.
    pub fn product(self, rhs: Point) -> Point {
        Point {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            t: self.t + rhs.t + self.y * rhs.x - self.x * rhs.y,
        }
    }

    /// Group inverse; `p.product(p.inverse())` is the origin.
    pub fn inverse(self) -> Point {
        Point {
            x: -self.x,
            y: -self.y,
            t: -self.t,
        }
    }

    /// Rotation about the t-axis by `theta`, a sub-Riemannian isometry. Used
    /// to normalize charts before analysis, not as a frame operation.
    pub fn rotate_about_t(self, theta: f64) -> Point {
        let (sin, cos) = theta.sin_cos();
        Point {
            x: self.x * cos - self.y * sin,
            y: self.x * sin + self.y * cos,
            t: self.t,
        }
    }

    #[cfg(test)]
    fn euclid_dist(self, rhs: Point) -> f64 {
        let dx = self.x - rhs.x;
        let dy = self.y - rhs.y;
        let dt = self.t - rhs.t;
        (dx * dx + dy * dy + dt * dt).sqrt()
    }
}

/// Tangent vector `a X + b Y + c T` at a base point.
///
/// Operations that combine two vectors insist on equal base points; there is
/// no implicit parallel transport.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameVector {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub base: Point,
}

impl FrameVector {
    pub fn new(a: f64, b: f64, c: f64, base: Point) -> FrameVector {
        FrameVector { a, b, c, base }
    }

    /// Reads a coordinate vector `(v1, v2, v3)` at `base` in the frame.
    /// The vertical frame component is `v3 - v1 y + v2 x`.
    pub fn from_euclidean(v: [f64; 3], base: Point) -> FrameVector {
        FrameVector {
            a: v[0],
            b: v[1],
            c: v[2] - v[0] * base.y + v[1] * base.x,
            base,
        }
    }

    /// Coordinate components of the vector, inverse of [`from_euclidean`].
    ///
    /// [`from_euclidean`]: FrameVector::from_euclidean
    pub fn to_euclidean(self) -> [f64; 3] {
        [
            self.a,
            self.b,
            self.c + self.a * self.base.y - self.b * self.base.x,
        ]
    }

    /// The 90-degree rotation J on the horizontal plane: J(X) = Y, J(Y) = -X,
    /// J(T) = 0. The vertical component is discarded.
    pub fn j(self) -> FrameVector {
        FrameVector {
            a: -self.b,
            b: self.a,
            c: 0.0,
            base: self.base,
        }
    }

    /// Metric inner product making the frame orthonormal.
    pub fn inner(self, rhs: FrameVector) -> Result<f64> {
        if self.base != rhs.base {
            return Err(Error::BaseMismatch);
        }
        Ok(self.a * rhs.a + self.b * rhs.b + self.c * rhs.c)
    }

    /// Projection onto the horizontal distribution (drops the T component).
    pub fn horizontal(self) -> FrameVector {
        FrameVector { c: 0.0, ..self }
    }

    pub fn norm(self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c).sqrt()
    }

    pub fn scale(self, k: f64) -> FrameVector {
        FrameVector {
            a: k * self.a,
            b: k * self.b,
            c: k * self.c,
            base: self.base,
        }
    }

    // Not `ops::Add`: summing only makes sense at a shared base point, so
    // this has to stay fallible.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: FrameVector) -> Result<FrameVector> {
        if self.base != rhs.base {
            return Err(Error::BaseMismatch);
        }
        Ok(FrameVector {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            c: self.c + rhs.c,
            base: self.base,
        })
    }

    /// Frame cross product, orienting (X, Y, T) positively.
    pub fn cross(self, rhs: FrameVector) -> Result<FrameVector> {
        if self.base != rhs.base {
            return Err(Error::BaseMismatch);
        }
        Ok(FrameVector {
            a: self.b * rhs.c - self.c * rhs.b,
            b: self.c * rhs.a - self.a * rhs.c,
            c: self.a * rhs.b - self.b * rhs.a,
            base: self.base,
        })
    }

    /// Rotation about the t-axis applied to a tangent vector: the horizontal
    /// pair (a, b) rotates, the vertical component is unchanged, and the base
    /// point moves with the isometry.
    pub fn rotate_about_t(self, theta: f64) -> FrameVector {
        let (sin, cos) = theta.sin_cos();
        FrameVector {
            a: self.a * cos - self.b * sin,
            b: self.a * sin + self.b * cos,
            c: self.c,
            base: self.base.rotate_about_t(theta),
        }
    }
}

/// Point of the horizontal line through `p0` with direction `a X + b Y`,
/// at parameter `s`. The t-coordinate moves linearly with slope `a y0 - b x0`.
pub fn horizontal_line(p0: Point, a: f64, b: f64, s: f64) -> Point {
    Point {
        x: p0.x + a * s,
        y: p0.y + b * s,
        t: p0.t + (a * p0.y - b * p0.x) * s,
    }
}

/// Largest vertical frame component of the finite-difference tangent along a
/// uniformly sampled curve; zero (to O(step^2)) exactly when the curve is
/// horizontal. Interior samples use central differences.
pub fn horizontality_residual(samples: &[Point], step: f64) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            need: 3,
            got: samples.len(),
        });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::BadStep);
    }
    let mut worst = 0.0f64;
    for i in 1..samples.len() - 1 {
        let p = samples[i];
        let v = [
            (samples[i + 1].x - samples[i - 1].x) / (2.0 * step),
            (samples[i + 1].y - samples[i - 1].y) / (2.0 * step),
            (samples[i + 1].t - samples[i - 1].t) / (2.0 * step),
        ];
        worst = worst.max(FrameVector::from_euclidean(v, p).c.abs());
    }
    Ok(worst)
}

/// The three generating Killing fields of the metric: right-invariant
/// translations and the vertical direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KillingField {
    /// Right translation generator with frame components (1, 0, -2y).
    RightX,
    /// Right translation generator with frame components (0, 1, 2x).
    RightY,
    /// The vertical field T.
    Vertical,
}

impl KillingField {
    pub fn at(self, p: Point) -> FrameVector {
        match self {
            KillingField::RightX => FrameVector::new(1.0, 0.0, -2.0 * p.y, p),
            KillingField::RightY => FrameVector::new(0.0, 1.0, 2.0 * p.x, p),
            KillingField::Vertical => FrameVector::new(0.0, 0.0, 1.0, p),
        }
    }

    pub const ALL: [KillingField; 3] = [
        KillingField::RightX,
        KillingField::RightY,
        KillingField::Vertical,
    ];
}
