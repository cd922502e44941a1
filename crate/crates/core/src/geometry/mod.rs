//! Camera models, SE(3) poses, and projection/warp maps.

mod camera;
mod pose;
mod warp;

pub use camera::PinholeCamera;
pub use pose::{
    exp_twist, matrix_to_rodriguez, rodriguez_to_matrix, skew, PoseSE3, RigidTransform,
};
pub use warp::{warp_depth_pixel, warp_depth_pixel_rigid, warp_map_point, DepthWarp, ExtrinsicCalib};
