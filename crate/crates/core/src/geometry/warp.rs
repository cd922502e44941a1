//! Warp maps between the depth camera, the event camera, and across poses.

use nalgebra::{Vector2, Vector3};

use super::camera::PinholeCamera;
use super::pose::{PoseSE3, RigidTransform};
use crate::error::{DevoError, Result};

/// Extrinsic calibration: rigid transform taking depth-camera coordinates
/// into event-camera coordinates, `X_e = T_ed * X_d`.
#[derive(Debug, Clone, Copy)]
pub struct ExtrinsicCalib {
    pub t_ed: PoseSE3,
}

impl ExtrinsicCalib {
    pub fn identity() -> Self {
        ExtrinsicCalib {
            t_ed: PoseSE3::identity(),
        }
    }

    pub fn new(t_ed: PoseSE3) -> Self {
        ExtrinsicCalib { t_ed }
    }
}

/// Result of warping one depth pixel into the event camera.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DepthWarp {
    /// Sub-pixel location in the event image and the depth there.
    InBounds { pixel: Vector2<f64>, depth: f64 },
    /// Projected fine but fell outside the event image.
    OutOfBounds { pixel: Vector2<f64>, depth: f64 },
    /// Transformed point ended up at or behind the event camera.
    BehindCamera,
}

/// Warp a depth-camera pixel with depth `z_d` into the event camera.
///
/// The returned depth is the z-coordinate of the transformed point in the
/// event-camera frame.
pub fn warp_depth_pixel(
    calib: &ExtrinsicCalib,
    cam_d: &PinholeCamera,
    cam_e: &PinholeCamera,
    x_d: &Vector2<f64>,
    z_d: f64,
) -> Result<DepthWarp> {
    if z_d <= 0.0 {
        return Err(DevoError::InvalidDepth { z: z_d });
    }
    let p_d = cam_d.ray(x_d) * z_d;
    let p_e = calib.t_ed.transform_point(&p_d);
    Ok(warp_point_rigid(&p_e, cam_e))
}

/// Same warp with a precomputed rigid transform, for bulk scattering.
pub fn warp_depth_pixel_rigid(
    t_ed: &RigidTransform,
    cam_d: &PinholeCamera,
    cam_e: &PinholeCamera,
    x_d: &Vector2<f64>,
    z_d: f64,
) -> DepthWarp {
    let p_d = cam_d.ray(x_d) * z_d;
    let p_e = t_ed.transform_point(&p_d);
    warp_point_rigid(&p_e, cam_e)
}

fn warp_point_rigid(p_e: &Vector3<f64>, cam_e: &PinholeCamera) -> DepthWarp {
    if p_e.z <= 0.0 {
        return DepthWarp::BehindCamera;
    }
    let pixel = cam_e
        .project(p_e)
        .expect("z > 0 checked above, projection cannot fail");
    if cam_e.contains(&pixel) {
        DepthWarp::InBounds { pixel, depth: p_e.z }
    } else {
        DepthWarp::OutOfBounds { pixel, depth: p_e.z }
    }
}

/// Warp a reference-frame map point into the current frame.
///
/// `t_rel` is the relative pose `T_ref^-1 * T_cur`; map points are carried by
/// its inverse and projected through the event camera. Identity `t_rel`
/// reproduces the reference projection.
pub fn warp_map_point(
    cam_e: &PinholeCamera,
    p_ref: &Vector3<f64>,
    t_rel: &PoseSE3,
) -> Result<Vector2<f64>> {
    let p_cur = t_rel.inverse().transform_point(p_ref);
    cam_e.project(&p_cur)
}
