//! Pinhole camera model with radial-tangential distortion.
//!
//! Pixel centers sit at integer coordinates; the optical axis projects to
//! `(cx, cy)`. Depths follow the z-depth convention: the stored value is the
//! z-coordinate in the camera frame, not the ray length.

use nalgebra::{Matrix2, Matrix2x3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{DevoError, Result};

/// Pinhole intrinsics plus `[k1, k2, p1, p2]` distortion coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinholeCamera {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: u32,
    pub height: u32,
    #[serde(default)]
    pub dist: [f64; 4],
}

impl PinholeCamera {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64, width: u32, height: u32) -> Result<Self> {
        let cam = PinholeCamera {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
            dist: [0.0; 4],
        };
        cam.validate()?;
        Ok(cam)
    }

    pub fn with_distortion(mut self, dist: [f64; 4]) -> Self {
        self.dist = dist;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fx > 0.0 && self.fy > 0.0) {
            return Err(DevoError::InvalidParameter(format!(
                "focal lengths must be positive, got fx={} fy={}",
                self.fx, self.fy
            )));
        }
        if !(0.0 <= self.cx && self.cx < self.width as f64)
            || !(0.0 <= self.cy && self.cy < self.height as f64)
        {
            return Err(DevoError::InvalidParameter(format!(
                "principal point ({}, {}) outside {}x{} sensor",
                self.cx, self.cy, self.width, self.height
            )));
        }
        Ok(())
    }

    /// Project a camera-frame point to sub-pixel image coordinates.
    ///
    /// The result may land outside the image bounds; callers check with
    /// [`PinholeCamera::contains`].
    pub fn project(&self, p: &Vector3<f64>) -> Result<Vector2<f64>> {
        if p.z <= 0.0 {
            return Err(DevoError::BehindCamera { z: p.z });
        }
        let n = Vector2::new(p.x / p.z, p.y / p.z);
        let d = self.distort(&n);
        Ok(Vector2::new(self.fx * d.x + self.cx, self.fy * d.y + self.cy))
    }

    /// Back-project a pixel to the camera-frame point at z-depth `z`.
    pub fn backproject(&self, pixel: &Vector2<f64>, z: f64) -> Result<Vector3<f64>> {
        if z <= 0.0 {
            return Err(DevoError::InvalidDepth { z });
        }
        let d = Vector2::new((pixel.x - self.cx) / self.fx, (pixel.y - self.cy) / self.fy);
        let n = self.undistort(&d);
        Ok(Vector3::new(n.x * z, n.y * z, z))
    }

    /// Unit-depth ray direction through a pixel, `(x, y, 1)`.
    pub fn ray(&self, pixel: &Vector2<f64>) -> Vector3<f64> {
        let d = Vector2::new((pixel.x - self.cx) / self.fx, (pixel.y - self.cy) / self.fy);
        let n = self.undistort(&d);
        Vector3::new(n.x, n.y, 1.0)
    }

    /// True when `(u, v)` lies in the sampled pixel-center domain
    /// `[0, w-1] x [0, h-1]`.
    pub fn contains(&self, pixel: &Vector2<f64>) -> bool {
        pixel.x >= 0.0
            && pixel.y >= 0.0
            && pixel.x <= (self.width - 1) as f64
            && pixel.y <= (self.height - 1) as f64
    }

    /// Apply radial-tangential distortion to normalized coordinates.
    fn distort(&self, n: &Vector2<f64>) -> Vector2<f64> {
        let [k1, k2, p1, p2] = self.dist;
        if self.dist == [0.0; 4] {
            return *n;
        }
        let (x, y) = (n.x, n.y);
        let r2 = x * x + y * y;
        let radial = 1.0 + k1 * r2 + k2 * r2 * r2;
        Vector2::new(
            x * radial + 2.0 * p1 * x * y + p2 * (r2 + 2.0 * x * x),
            y * radial + p1 * (r2 + 2.0 * y * y) + 2.0 * p2 * x * y,
        )
    }

    /// Invert the distortion by fixed-point iteration.
    fn undistort(&self, d: &Vector2<f64>) -> Vector2<f64> {
        if self.dist == [0.0; 4] {
            return *d;
        }
        let mut n = *d;
        for _ in 0..12 {
            let err = self.distort(&n) - d;
            n -= err;
            if err.norm_squared() < 1e-28 {
                break;
            }
        }
        n
    }

    /// Jacobian of the distortion map at normalized coordinates `n`.
    fn distortion_jacobian(&self, n: &Vector2<f64>) -> Matrix2<f64> {
        let [k1, k2, p1, p2] = self.dist;
        if self.dist == [0.0; 4] {
            return Matrix2::identity();
        }
        let (x, y) = (n.x, n.y);
        let r2 = x * x + y * y;
        let radial = 1.0 + k1 * r2 + k2 * r2 * r2;
        let d_radial = 2.0 * (k1 + 2.0 * k2 * r2); // d(radial)/d(r2) * 2
        Matrix2::new(
            radial + x * x * d_radial + 2.0 * p1 * y + 6.0 * p2 * x,
            x * y * d_radial + 2.0 * p1 * x + 2.0 * p2 * y,
            x * y * d_radial + 2.0 * p1 * x + 2.0 * p2 * y,
            radial + y * y * d_radial + 6.0 * p1 * y + 2.0 * p2 * x,
        )
    }

    /// Jacobian of the full projection w.r.t. the camera-frame point.
    pub fn projection_jacobian(&self, p: &Vector3<f64>) -> Matrix2x3<f64> {
        let inv_z = 1.0 / p.z;
        let n = Vector2::new(p.x * inv_z, p.y * inv_z);
        let d_norm = Matrix2x3::new(
            inv_z,
            0.0,
            -p.x * inv_z * inv_z,
            0.0,
            inv_z,
            -p.y * inv_z * inv_z,
        );
        let d_dist = self.distortion_jacobian(&n);
        let focal = Matrix2::new(self.fx, 0.0, 0.0, self.fy);
        focal * d_dist * d_norm
    }
}
