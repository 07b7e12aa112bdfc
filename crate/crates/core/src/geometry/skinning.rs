//! Dual quaternion skinning and its inverse (unposing), plus linear blend
//! skinning for the parametric body+hand model.

use nalgebra::{Isometry3, Point3, Quaternion, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{forward_kinematics, Pose, Skeleton};
use crate::scalar::{real, Real};

/// Sparse per-vertex joint influences. Rows are `(joint, weight)` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkinningWeights<T: Real> {
    rows: Vec<Vec<(usize, T)>>,
    max_influences: usize,
}

pub const DEFAULT_MAX_INFLUENCES: usize = 4;

impl<T: Real> SkinningWeights<T> {
    /// Validates row normalization (sum 1 ± 1e-6), non-negativity, the
    /// influence cap, and joint indices.
    pub fn new(rows: Vec<Vec<(usize, T)>>, joint_count: usize) -> Result<Self> {
        Self::with_max_influences(rows, joint_count, DEFAULT_MAX_INFLUENCES)
    }

    pub fn with_max_influences(
        rows: Vec<Vec<(usize, T)>>,
        joint_count: usize,
        max_influences: usize,
    ) -> Result<Self> {
        for (vi, row) in rows.iter().enumerate() {
            if row.is_empty() || row.len() > max_influences {
                return Err(Error::DimensionMismatch(format!(
                    "vertex {vi} has {} influences (allowed 1..={max_influences})",
                    row.len()
                )));
            }
            let mut sum = T::zero();
            for &(j, w) in row {
                if j >= joint_count {
                    return Err(Error::DimensionMismatch(format!(
                        "vertex {vi} references joint {j} >= {joint_count}"
                    )));
                }
                if w < T::zero() {
                    return Err(Error::DimensionMismatch(format!(
                        "vertex {vi} has negative weight"
                    )));
                }
                sum += w;
            }
            if (sum - T::one()).abs() > real(1e-6) {
                return Err(Error::DimensionMismatch(format!(
                    "vertex {vi} weights sum to {}",
                    sum.to_f64_lossy()
                )));
            }
        }
        Ok(Self {
            rows,
            max_influences,
        })
    }

    /// All weight on a single joint for every vertex.
    pub fn rigid(vertex_count: usize, joint: usize) -> Self {
        Self {
            rows: vec![vec![(joint, T::one())]; vertex_count],
            max_influences: DEFAULT_MAX_INFLUENCES,
        }
    }

    pub fn rows(&self) -> &[Vec<(usize, T)>] {
        &self.rows
    }

    pub fn row(&self, vertex: usize) -> &[(usize, T)] {
        &self.rows[vertex]
    }

    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    pub fn max_influences(&self) -> usize {
        self.max_influences
    }
}

/// Rigid-transform dual quaternion: `real` encodes the rotation, `dual`
/// encodes translation (dq = q + ε ½ t q).
#[derive(Debug, Clone, Copy)]
pub struct DualQuat<T: Real> {
    pub real: Quaternion<T>,
    pub dual: Quaternion<T>,
}

impl<T: Real> DualQuat<T> {
    pub fn identity() -> Self {
        Self {
            real: Quaternion::identity(),
            dual: Quaternion::from_parts(T::zero(), Vector3::zeros()),
        }
    }

    pub fn from_isometry(iso: &Isometry3<T>) -> Self {
        let q = iso.rotation.into_inner();
        let t = Quaternion::from_parts(T::zero(), iso.translation.vector);
        Self {
            real: q,
            dual: t * q * real::<T>(0.5),
        }
    }

    /// Full dual-number normalization: afterwards `|real| = 1` and
    /// `dot(real, dual) = 0`.
    pub fn normalized(&self) -> Self {
        let s = self.real.norm();
        let e = self.real.dot(&self.dual) / s;
        let q = self.real / s;
        let d = self.dual / s - q * (e / s);
        Self { real: q, dual: d }
    }

    /// Inverse of a unit dual quaternion (quaternion conjugate of both parts).
    pub fn inverse_unit(&self) -> Self {
        Self {
            real: self.real.conjugate(),
            dual: self.dual.conjugate(),
        }
    }

    /// Rotation and translation of a unit dual quaternion.
    pub fn to_isometry(&self) -> Isometry3<T> {
        let rot = UnitQuaternion::new_unchecked(self.real);
        let t = (self.dual * self.real.conjugate()) * real::<T>(2.0);
        Isometry3::from_parts(t.imag().into(), rot)
    }

    pub fn transform_point(&self, p: &Point3<T>) -> Point3<T> {
        let rot = UnitQuaternion::new_unchecked(self.real);
        let t = (self.dual * self.real.conjugate()) * real::<T>(2.0);
        rot * p + t.imag()
    }

    fn scaled(&self, w: T) -> Self {
        Self {
            real: self.real * w,
            dual: self.dual * w,
        }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            real: self.real + other.real,
            dual: self.dual + other.dual,
        }
    }
}

/// Per-joint skinning transforms: world pose relative to the rest (zero)
/// pose, so the zero pose skins to the identity.
fn joint_skin_isometries<T: Real>(
    skeleton: &Skeleton<T>,
    pose: &Pose<T>,
) -> Result<Vec<Isometry3<T>>> {
    let posed = forward_kinematics(skeleton, pose)?;
    let rest = forward_kinematics(skeleton, &Pose::zero(skeleton.dof_count()))?;
    Ok(posed
        .iter()
        .zip(&rest)
        .map(|(p, r)| p * r.inverse())
        .collect())
}

/// Blend joint dual quaternions for one vertex with sign-consistent
/// hemisphere selection (relative to the largest-weight joint) and full
/// normalization.
fn blend_row<T: Real>(
    joint_dqs: &[DualQuat<T>],
    row: &[(usize, T)],
    vertex: usize,
) -> Result<DualQuat<T>> {
    let reference = row
        .iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite weights"))
        .expect("non-empty row");
    let ref_real = joint_dqs[reference.0].real;
    let mut acc = DualQuat {
        real: Quaternion::from_parts(T::zero(), Vector3::zeros()),
        dual: Quaternion::from_parts(T::zero(), Vector3::zeros()),
    };
    for &(j, w) in row {
        let mut dq = joint_dqs[j];
        if dq.real.dot(&ref_real) < T::zero() {
            dq = dq.scaled(-T::one());
        }
        acc = acc.add(&dq.scaled(w));
    }
    let norm = acc.real.norm();
    if norm < real(1e-12) {
        return Err(Error::DegenerateBlend {
            vertex,
            norm: norm.to_f64_lossy(),
        });
    }
    Ok(acc.normalized())
}

/// Blended per-vertex rigid transforms of dual quaternion skinning. With the
/// pose frozen these are constants, which is how posed-space gradients are
/// pulled back to canonical space.
pub fn dqs_vertex_transforms<T: Real>(
    skeleton: &Skeleton<T>,
    weights: &SkinningWeights<T>,
    pose: &Pose<T>,
) -> Result<Vec<Isometry3<T>>> {
    let joint_dqs: Vec<DualQuat<T>> = joint_skin_isometries(skeleton, pose)?
        .iter()
        .map(DualQuat::from_isometry)
        .collect();
    weights
        .rows()
        .iter()
        .enumerate()
        .map(|(vi, row)| Ok(blend_row(&joint_dqs, row, vi)?.to_isometry()))
        .collect()
}

/// Dual quaternion skinning of canonical-pose vertices.
pub fn dqs_pose<T: Real>(
    vertices: &[Point3<T>],
    skeleton: &Skeleton<T>,
    weights: &SkinningWeights<T>,
    pose: &Pose<T>,
) -> Result<Vec<Point3<T>>> {
    check_weights(vertices, weights)?;
    let transforms = dqs_vertex_transforms(skeleton, weights, pose)?;
    Ok(vertices
        .iter()
        .zip(&transforms)
        .map(|(v, iso)| iso * v)
        .collect())
}

/// Inverse of `dqs_pose`: applies the inverse of each vertex's blended
/// transform, so pose → unpose round-trips to machine precision.
pub fn unpose_to_canonical<T: Real>(
    posed_vertices: &[Point3<T>],
    skeleton: &Skeleton<T>,
    weights: &SkinningWeights<T>,
    pose: &Pose<T>,
) -> Result<Vec<Point3<T>>> {
    check_weights(posed_vertices, weights)?;
    let transforms = dqs_vertex_transforms(skeleton, weights, pose)?;
    Ok(posed_vertices
        .iter()
        .zip(&transforms)
        .map(|(v, iso)| iso.inverse_transform_point(v))
        .collect())
}

/// Linear blend skinning (weighted sum of joint-transformed positions).
pub fn lbs_pose<T: Real>(
    vertices: &[Point3<T>],
    skeleton: &Skeleton<T>,
    weights: &SkinningWeights<T>,
    pose: &Pose<T>,
) -> Result<Vec<Point3<T>>> {
    check_weights(vertices, weights)?;
    let isos = joint_skin_isometries(skeleton, pose)?;
    Ok(vertices
        .iter()
        .zip(weights.rows())
        .map(|(v, row)| {
            let mut acc = Vector3::zeros();
            for &(j, w) in row {
                acc += (isos[j] * v).coords * w;
            }
            Point3::from(acc)
        })
        .collect())
}

fn check_weights<T: Real>(vertices: &[Point3<T>], weights: &SkinningWeights<T>) -> Result<()> {
    if vertices.len() != weights.vertex_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} vertices vs {} skinning rows",
            vertices.len(),
            weights.vertex_count()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Joint;
    use approx::assert_relative_eq;
    use nalgebra::Unit;

    fn two_bone_skeleton() -> Skeleton<f64> {
        Skeleton::new(
            vec![
                Joint {
                    name: "root".into(),
                    parent: None,
                    offset: Vector3::zeros(),
                    axes: vec![Unit::new_normalize(Vector3::z())],
                },
                Joint {
                    name: "tip".into(),
                    parent: Some(0),
                    offset: Vector3::new(0.0, 0.0, 1.0),
                    axes: vec![Unit::new_normalize(Vector3::z())],
                },
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn identity_pose_leaves_vertices_unchanged() {
        let skel = two_bone_skeleton();
        let verts = vec![
            Point3::new(0.3, -0.2, 0.5),
            Point3::new(-1.0, 0.4, 1.5),
            Point3::new(0.0, 0.0, 2.0),
        ];
        let weights = SkinningWeights::new(
            vec![
                vec![(0, 1.0)],
                vec![(0, 0.5), (1, 0.5)],
                vec![(1, 1.0)],
            ],
            2,
        )
        .unwrap();
        let posed = dqs_pose(&verts, &skel, &weights, &Pose::zero(skel.dof_count())).unwrap();
        for (a, b) in verts.iter().zip(&posed) {
            assert_relative_eq!(a.coords, b.coords, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_bone_weight_is_exact_rigid_motion() {
        let skel = two_bone_skeleton();
        let verts = vec![Point3::new(0.7, 0.1, 0.2)];
        let weights = SkinningWeights::rigid(1, 0);
        let mut pose = Pose::zero(skel.dof_count());
        pose.theta[0] = 0.9;
        pose.alpha = Vector3::new(0.1, 0.2, 0.3);
        pose.translation = Vector3::new(-1.0, 2.0, 0.25);

        let posed = dqs_pose(&verts, &skel, &weights, &pose).unwrap();
        let fk = forward_kinematics(&skel, &pose).unwrap();
        let rest = forward_kinematics(&skel, &Pose::zero(skel.dof_count())).unwrap();
        let expected = (fk[0] * rest[0].inverse()) * verts[0];
        assert_relative_eq!(posed[0].coords, expected.coords, epsilon = 1e-12);
    }

    /// First-principles dual-quaternion blend oracle using quaternion
    /// exp/log, independent of the `DualQuat` implementation.
    mod oracle {
        use nalgebra::{Point3, Quaternion, Vector3};

        #[derive(Clone, Copy)]
        pub struct Dq {
            pub real: Quaternion<f64>,
            pub dual: Quaternion<f64>,
        }

        pub fn from_axis_angle_translation(
            axis: Vector3<f64>,
            angle: f64,
            t: Vector3<f64>,
        ) -> Dq {
            // q = exp(½ angle axis) computed from the quaternion exponential
            let half = axis.normalize() * (0.5 * angle);
            let norm = half.norm();
            let (w, v) = if norm < 1e-12 {
                (1.0, half)
            } else {
                (norm.cos(), half * (norm.sin() / norm))
            };
            let real = Quaternion::from_parts(w, v);
            let dual = Quaternion::from_parts(0.0, t) * real * 0.5;
            Dq { real, dual }
        }

        pub fn blend(entries: &[(f64, Dq)]) -> Dq {
            let mut real = Quaternion::from_parts(0.0, Vector3::zeros());
            let mut dual = Quaternion::from_parts(0.0, Vector3::zeros());
            for (w, dq) in entries {
                real += dq.real * *w;
                dual += dq.dual * *w;
            }
            let s = real.norm();
            let e = real.dot(&dual) / s;
            Dq {
                real: real / s,
                dual: dual / s - (real / s) * (e / s),
            }
        }

        pub fn transform(dq: &Dq, p: &Point3<f64>) -> Point3<f64> {
            // p' = q p q* + 2 d q*
            let pq = Quaternion::from_parts(0.0, p.coords);
            let rotated = dq.real * pq * dq.real.conjugate();
            let t = (dq.dual * dq.real.conjugate()) * 2.0;
            Point3::from(rotated.imag() + t.imag())
        }
    }

    #[test]
    fn half_blend_matches_first_principles_oracle_and_differs_from_lbs() {
        // 50/50 blend of identity and a 90° rotation about z, applied to (1,0,0).
        let skel = two_bone_skeleton();
        let verts = vec![Point3::new(1.0, 0.0, 0.0)];
        let weights =
            SkinningWeights::new(vec![vec![(0, 0.5), (1, 0.5)]], 2).unwrap();
        let mut pose = Pose::zero(skel.dof_count());
        // joint 1 sits at z=1 on the z axis; rotating it about z keeps its
        // frame origin fixed, so the skin transform is a pure z-rotation.
        pose.theta[1] = std::f64::consts::FRAC_PI_2;

        let posed = dqs_pose(&verts, &skel, &weights, &pose).unwrap();

        let id = oracle::from_axis_angle_translation(Vector3::z(), 0.0, Vector3::zeros());
        let rot = oracle::from_axis_angle_translation(
            Vector3::z(),
            std::f64::consts::FRAC_PI_2,
            Vector3::zeros(),
        );
        let blended = oracle::blend(&[(0.5, id), (0.5, rot)]);
        let expected = oracle::transform(&blended, &verts[0]);
        assert_relative_eq!(posed[0].coords, expected.coords, epsilon = 1e-9);

        // linear blend of the same transforms shortens the vector
        let lbs = lbs_pose(&verts, &skel, &weights, &pose).unwrap();
        let diff = (posed[0] - lbs[0]).norm();
        assert!(diff > 1e-3, "DQS must differ from LBS, diff = {diff}");
        assert_relative_eq!(posed[0].coords.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unpose_round_trip() {
        let skel = two_bone_skeleton();
        // small test cylinder around the bone
        let mut verts = Vec::new();
        for k in 0..8 {
            for ring in 0..5 {
                let phi = (k as f64) / 8.0 * std::f64::consts::TAU;
                let z = ring as f64 * 0.5;
                verts.push(Point3::new(0.3 * phi.cos(), 0.3 * phi.sin(), z));
            }
        }
        let weights = SkinningWeights::new(
            verts
                .iter()
                .map(|v| {
                    let w1 = (v.z / 2.0).clamp(0.0, 1.0);
                    if w1 == 0.0 {
                        vec![(0, 1.0)]
                    } else if w1 == 1.0 {
                        vec![(1, 1.0)]
                    } else {
                        vec![(0, 1.0 - w1), (1, w1)]
                    }
                })
                .collect(),
            2,
        )
        .unwrap();
        let mut pose = Pose::zero(skel.dof_count());
        pose.theta[0] = 0.7;
        pose.theta[1] = -1.2;
        pose.alpha = Vector3::new(0.2, -0.1, 0.4);
        pose.translation = Vector3::new(0.3, 1.0, -0.5);

        let posed = dqs_pose(&verts, &skel, &weights, &pose).unwrap();
        let unposed = unpose_to_canonical(&posed, &skel, &weights, &pose).unwrap();
        let reposed = dqs_pose(&unposed, &skel, &weights, &pose).unwrap();
        for ((orig, un), re) in verts.iter().zip(&unposed).zip(&reposed) {
            assert_relative_eq!(orig.coords, un.coords, epsilon = 1e-8);
            assert_relative_eq!(posed[0].coords, reposed[0].coords, epsilon = 1e-8);
            let _ = re;
        }
    }

    #[test]
    fn rigid_motion_equivariance() {
        // all joints share one rigid motion -> every vertex moves rigidly
        let skel = two_bone_skeleton();
        let verts = vec![
            Point3::new(0.2, 0.4, 0.1),
            Point3::new(-0.5, 0.2, 1.7),
            Point3::new(0.9, -0.3, 0.8),
        ];
        let weights = SkinningWeights::new(
            vec![
                vec![(0, 0.25), (1, 0.75)],
                vec![(0, 0.6), (1, 0.4)],
                vec![(1, 1.0)],
            ],
            2,
        )
        .unwrap();
        // zero joint angles, rigid root motion only
        let mut pose = Pose::zero(skel.dof_count());
        pose.alpha = Vector3::new(0.3, 0.7, -0.5);
        pose.translation = Vector3::new(2.0, -1.0, 0.5);
        let posed = dqs_pose(&verts, &skel, &weights, &pose).unwrap();
        let rot = nalgebra::Rotation3::from_scaled_axis(pose.alpha);
        for (v, p) in verts.iter().zip(&posed) {
            let expected = rot * v + pose.translation;
            assert_relative_eq!(p.coords, expected.coords, epsilon = 1e-9);
        }
    }

    #[test]
    fn single_bone_vertices_preserve_pairwise_distances() {
        let skel = two_bone_skeleton();
        let verts = vec![
            Point3::new(0.0, 0.0, 1.2),
            Point3::new(0.5, 0.0, 1.4),
            Point3::new(0.0, 0.5, 1.9),
        ];
        let weights = SkinningWeights::rigid(3, 1);
        let mut pose = Pose::zero(skel.dof_count());
        pose.theta[0] = 1.1;
        pose.theta[1] = -0.8;
        let posed = dqs_pose(&verts, &skel, &weights, &pose).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert_relative_eq!(
                    (verts[i] - verts[j]).norm(),
                    (posed[i] - posed[j]).norm(),
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn weight_rows_must_normalize() {
        assert!(SkinningWeights::new(vec![vec![(0, 0.5), (1, 0.4)]], 2).is_err());
        assert!(SkinningWeights::new(vec![vec![(0, 1.0 + 1e-7)]], 1).is_ok());
    }
}
