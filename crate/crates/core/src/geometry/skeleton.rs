//! Kinematic skeleton: joint tree, axis-angle pose parameters, forward
//! kinematics, and per-dof frames for analytic marker Jacobians.

use nalgebra::{DVector, Isometry3, Point3, Translation3, Unit, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::rotate_axis_angle_jacobian;
use crate::scalar::Real;

/// One joint of the tree. Rotation axes are fixed in the joint's local frame;
/// each axis consumes one pose angle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Joint<T: Real> {
    pub name: String,
    pub parent: Option<usize>,
    /// Offset from the parent joint origin, in the parent frame (meters).
    pub offset: Vector3<T>,
    /// 0–3 rotation axes, applied in order.
    pub axes: Vec<Unit<Vector3<T>>>,
}

/// Attachment point on the skeleton: joint index plus an offset in the joint
/// frame. Used for 2D keypoint supervision.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Landmark<T: Real> {
    pub joint: usize,
    pub offset: Vector3<T>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Skeleton<T: Real> {
    joints: Vec<Joint<T>>,
    landmarks: Vec<Landmark<T>>,
    dof_count: usize,
    /// First dof index of each joint.
    dof_offsets: Vec<usize>,
}

impl<T: Real> Skeleton<T> {
    pub fn new(joints: Vec<Joint<T>>, landmarks: Vec<Landmark<T>>) -> Result<Self> {
        if joints.is_empty() {
            return Err(Error::InvalidSkeleton("no joints".into()));
        }
        let mut roots = 0;
        for (i, j) in joints.iter().enumerate() {
            match j.parent {
                None => roots += 1,
                Some(p) if p >= i => {
                    return Err(Error::InvalidSkeleton(format!(
                        "joint {i} has parent {p}; parents must precede children"
                    )));
                }
                _ => {}
            }
            if j.axes.len() > 3 {
                return Err(Error::InvalidSkeleton(format!(
                    "joint {i} declares {} axes (max 3)",
                    j.axes.len()
                )));
            }
        }
        if roots != 1 {
            return Err(Error::InvalidSkeleton(format!(
                "expected exactly one root, found {roots}"
            )));
        }
        for (li, l) in landmarks.iter().enumerate() {
            if l.joint >= joints.len() {
                return Err(Error::InvalidSkeleton(format!(
                    "landmark {li} references joint {}",
                    l.joint
                )));
            }
        }
        let mut dof_offsets = Vec::with_capacity(joints.len());
        let mut dof_count = 0;
        for j in &joints {
            dof_offsets.push(dof_count);
            dof_count += j.axes.len();
        }
        Ok(Self {
            joints,
            landmarks,
            dof_count,
            dof_offsets,
        })
    }

    pub fn joints(&self) -> &[Joint<T>] {
        &self.joints
    }

    pub fn joint_count(&self) -> usize {
        self.joints.len()
    }

    pub fn landmarks(&self) -> &[Landmark<T>] {
        &self.landmarks
    }

    pub fn dof_count(&self) -> usize {
        self.dof_count
    }

    pub fn dof_offset(&self, joint: usize) -> usize {
        self.dof_offsets[joint]
    }

    /// True if `ancestor` is `joint` or on the parent chain of `joint`.
    pub fn is_ancestor_or_self(&self, ancestor: usize, joint: usize) -> bool {
        let mut cur = Some(joint);
        while let Some(j) = cur {
            if j == ancestor {
                return true;
            }
            cur = self.joints[j].parent;
        }
        false
    }
}

/// Skeleton pose: joint angles (radians), root rotation as an axis-angle
/// vector, and global translation (meters).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pose<T: Real> {
    pub theta: DVector<T>,
    pub alpha: Vector3<T>,
    pub translation: Vector3<T>,
}

impl<T: Real> Pose<T> {
    pub fn zero(dof_count: usize) -> Self {
        Self {
            theta: DVector::zeros(dof_count),
            alpha: Vector3::zeros(),
            translation: Vector3::zeros(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.theta.iter().all(|v| v.is_zero())
            && self.alpha == Vector3::zeros()
            && self.translation == Vector3::zeros()
    }

    pub fn is_finite(&self) -> bool {
        self.theta.iter().all(|v| v.is_finite())
            && self.alpha.iter().all(|v| v.is_finite())
            && self.translation.iter().all(|v| v.is_finite())
    }
}

fn check_pose<T: Real>(skeleton: &Skeleton<T>, pose: &Pose<T>) -> Result<()> {
    if pose.theta.len() != skeleton.dof_count() {
        return Err(Error::DimensionMismatch(format!(
            "pose has {} angles, skeleton has {} dofs",
            pose.theta.len(),
            skeleton.dof_count()
        )));
    }
    Ok(())
}

/// World rigid transform of every joint: the root is rotated by `alpha` and
/// translated by `t`, children compose in topological order.
pub fn forward_kinematics<T: Real>(
    skeleton: &Skeleton<T>,
    pose: &Pose<T>,
) -> Result<Vec<Isometry3<T>>> {
    Ok(forward_kinematics_with_dofs(skeleton, pose)?.joint_world)
}

/// Per-dof world frames recorded during FK, for marker Jacobians.
#[derive(Debug, Clone)]
pub struct FkDofFrames<T: Real> {
    pub joint_world: Vec<Isometry3<T>>,
    /// World direction of each rotation axis at the current pose.
    pub dof_axis: Vec<Vector3<T>>,
    /// World origin of the frame each rotation is applied in.
    pub dof_origin: Vec<Point3<T>>,
    /// Joint that owns each dof.
    pub dof_joint: Vec<usize>,
}

pub fn forward_kinematics_with_dofs<T: Real>(
    skeleton: &Skeleton<T>,
    pose: &Pose<T>,
) -> Result<FkDofFrames<T>> {
    check_pose(skeleton, pose)?;
    let nj = skeleton.joint_count();
    let mut joint_world = Vec::with_capacity(nj);
    let mut dof_axis = Vec::with_capacity(skeleton.dof_count());
    let mut dof_origin = Vec::with_capacity(skeleton.dof_count());
    let mut dof_joint = Vec::with_capacity(skeleton.dof_count());

    let root_prefix = Translation3::from(pose.translation)
        * UnitQuaternion::from_scaled_axis(pose.alpha);

    for (ji, joint) in skeleton.joints().iter().enumerate() {
        let parent_world: Isometry3<T> = match joint.parent {
            Some(p) => joint_world[p],
            None => root_prefix,
        };
        let mut frame = parent_world * Translation3::from(joint.offset);
        let base_dof = skeleton.dof_offset(ji);
        for (k, axis) in joint.axes.iter().enumerate() {
            dof_axis.push(frame.rotation * axis.into_inner());
            dof_origin.push(Point3::from(frame.translation.vector));
            dof_joint.push(ji);
            let angle = pose.theta[base_dof + k];
            frame *= UnitQuaternion::from_axis_angle(axis, angle);
        }
        joint_world.push(frame);
    }

    Ok(FkDofFrames {
        joint_world,
        dof_axis,
        dof_origin,
        dof_joint,
    })
}

impl<T: Real> FkDofFrames<T> {
    /// World positions of the skeleton's landmarks.
    pub fn landmark_positions(&self, skeleton: &Skeleton<T>) -> Vec<Point3<T>> {
        skeleton
            .landmarks()
            .iter()
            .map(|l| self.joint_world[l.joint] * Point3::from(l.offset))
            .collect()
    }

    /// Gradient of a world point attached to `joint` with respect to the
    /// pose vector `[theta..., alpha, t]`, columns in that order.
    pub fn point_jacobian(
        &self,
        skeleton: &Skeleton<T>,
        pose: &Pose<T>,
        joint: usize,
        world_point: &Point3<T>,
    ) -> nalgebra::DMatrix<T> {
        let dof = skeleton.dof_count();
        let mut jac = nalgebra::DMatrix::zeros(3, dof + 6);
        for d in 0..dof {
            if skeleton.is_ancestor_or_self(self.dof_joint[d], joint) {
                let col = self.dof_axis[d].cross(&(world_point - self.dof_origin[d]));
                jac.view_mut((0, d), (3, 1)).copy_from(&col);
            }
        }
        // alpha: world point = t + R(alpha) q, q fixed in the post-alpha frame
        let q = UnitQuaternion::from_scaled_axis(pose.alpha)
            .inverse_transform_vector(&(world_point.coords - pose.translation));
        let jac_alpha = rotate_axis_angle_jacobian(&pose.alpha, &q);
        jac.view_mut((0, dof), (3, 3)).copy_from(&jac_alpha);
        jac.view_mut((0, dof + 3), (3, 3))
            .copy_from(&nalgebra::Matrix3::identity());
        jac
    }
}
