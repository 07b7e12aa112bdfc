//! Person-specific template: mesh, skeleton, skinning, rigidity and material
//! labels, stored in the canonical (all-zero) pose.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    dqs_pose, unpose_to_canonical, Mesh, Pose, RigidityWeights, Skeleton, SkinningWeights,
};
use crate::scalar::Real;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Template<T: Real> {
    /// Mesh in the canonical (zero) pose.
    pub mesh: Mesh<T>,
    pub skeleton: Skeleton<T>,
    pub skinning: SkinningWeights<T>,
    pub rigidity: RigidityWeights<T>,
    /// Per-vertex material label (drives rigidity and region removal).
    pub materials: Vec<String>,
    /// Pose the source scan was rigged in; canonical is all-zero.
    pub rigging_pose: Pose<T>,
}

impl<T: Real> Template<T> {
    /// Builds a template whose mesh is already canonical (rigging pose zero).
    pub fn from_canonical(
        mesh: Mesh<T>,
        skeleton: Skeleton<T>,
        skinning: SkinningWeights<T>,
        rigidity: RigidityWeights<T>,
        materials: Vec<String>,
    ) -> Result<Self> {
        let rigging_pose = Pose::zero(skeleton.dof_count());
        let t = Self {
            mesh,
            skeleton,
            skinning,
            rigidity,
            materials,
            rigging_pose,
        };
        t.validate()?;
        Ok(t)
    }

    /// Builds a template from a mesh scanned in `rigging_pose`; the stored
    /// mesh is unposed to canonical.
    pub fn from_rigged(
        mesh: Mesh<T>,
        skeleton: Skeleton<T>,
        skinning: SkinningWeights<T>,
        rigidity: RigidityWeights<T>,
        materials: Vec<String>,
        rigging_pose: Pose<T>,
    ) -> Result<Self> {
        let mesh = if rigging_pose.is_zero() {
            mesh
        } else {
            let canonical =
                unpose_to_canonical(mesh.vertices(), &skeleton, &skinning, &rigging_pose)?;
            Mesh::new(canonical, mesh.faces().to_vec(), mesh.albedo().to_vec())?
        };
        let t = Self {
            mesh,
            skeleton,
            skinning,
            rigidity,
            materials,
            rigging_pose,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let n = self.mesh.vertex_count();
        if self.skinning.vertex_count() != n {
            return Err(Error::DimensionMismatch(format!(
                "skinning rows {} != vertices {n}",
                self.skinning.vertex_count()
            )));
        }
        if self.rigidity.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "rigidity weights {} != vertices {n}",
                self.rigidity.len()
            )));
        }
        if self.materials.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "material labels {} != vertices {n}",
                self.materials.len()
            )));
        }
        if self.rigging_pose.theta.len() != self.skeleton.dof_count() {
            return Err(Error::DimensionMismatch(
                "rigging pose does not match skeleton dofs".into(),
            ));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.mesh.vertex_count()
    }

    /// Mesh vertices posed back into the rigging pose (for export).
    pub fn rigged_vertices(&self) -> Result<Vec<nalgebra::Point3<T>>> {
        if self.rigging_pose.is_zero() {
            return Ok(self.mesh.vertices().to_vec());
        }
        dqs_pose(
            self.mesh.vertices(),
            &self.skeleton,
            &self.skinning,
            &self.rigging_pose,
        )
    }
}
