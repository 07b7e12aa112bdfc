//! Core mesh/skeleton representation, dual-quaternion skinning, posing, and
//! canonical-pose unposing.

mod mesh;
mod rigidity;
mod skeleton;
mod skinning;

pub use mesh::Mesh;
pub use rigidity::{MaterialTable, RigidityWeights};
pub use skeleton::{
    forward_kinematics, forward_kinematics_with_dofs, FkDofFrames, Joint, Landmark, Pose, Skeleton,
};
pub use skinning::{
    dqs_pose, dqs_vertex_transforms, lbs_pose, unpose_to_canonical, DualQuat, SkinningWeights,
};
