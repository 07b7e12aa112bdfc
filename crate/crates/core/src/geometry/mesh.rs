//! Triangle mesh with per-vertex albedo and a derived undirected edge set.

use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mesh<T: Real> {
    vertices: Vec<Point3<T>>,
    faces: Vec<[usize; 3]>,
    albedo: Vec<Vector3<T>>,
    /// Undirected, deduplicated, `e[0] < e[1]`.
    edges: Vec<[usize; 2]>,
    /// Per-vertex sorted neighbor lists (the symmetric view of `edges`).
    neighbors: Vec<Vec<usize>>,
}

impl<T: Real> Mesh<T> {
    /// Builds a mesh and validates the rest geometry: in-range face indices,
    /// no zero-area faces, no zero-length rest edges.
    pub fn new(
        vertices: Vec<Point3<T>>,
        faces: Vec<[usize; 3]>,
        albedo: Vec<Vector3<T>>,
    ) -> Result<Self> {
        let n = vertices.len();
        if albedo.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "albedo rows {} != vertex count {}",
                albedo.len(),
                n
            )));
        }
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                if v >= n {
                    return Err(Error::InvalidMesh(format!(
                        "face {fi} references vertex {v} >= {n}"
                    )));
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidMesh(format!("face {fi} repeats a vertex")));
            }
            let a = &vertices[f[0]];
            let b = &vertices[f[1]];
            let c = &vertices[f[2]];
            let area2 = (b - a).cross(&(c - a)).norm();
            if area2 <= T::zero() {
                return Err(Error::InvalidMesh(format!("face {fi} has zero area")));
            }
        }

        let mut edges: Vec<[usize; 2]> = faces
            .iter()
            .flat_map(|f| {
                [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])]
                    .into_iter()
                    .map(|(a, b)| if a < b { [a, b] } else { [b, a] })
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();

        for &[i, j] in &edges {
            if (vertices[i] - vertices[j]).norm() <= T::zero() {
                return Err(Error::InvalidMesh(format!(
                    "rest edge ({i},{j}) has zero length"
                )));
            }
        }

        let mut neighbors = vec![Vec::new(); n];
        for &[i, j] in &edges {
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }

        Ok(Self {
            vertices,
            faces,
            albedo,
            edges,
            neighbors,
        })
    }

    pub fn with_uniform_albedo(
        vertices: Vec<Point3<T>>,
        faces: Vec<[usize; 3]>,
        gray: T,
    ) -> Result<Self> {
        let albedo = vec![Vector3::new(gray, gray, gray); vertices.len()];
        Self::new(vertices, faces, albedo)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point3<T>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn albedo(&self) -> &[Vector3<T>] {
        &self.albedo
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn neighbors(&self, vertex: usize) -> &[usize] {
        &self.neighbors[vertex]
    }

    /// Number of edges incident to `vertex`.
    pub fn degree(&self, vertex: usize) -> usize {
        self.neighbors[vertex].len()
    }

    pub fn edge_lengths(&self) -> Vec<T> {
        self.edges
            .iter()
            .map(|&[i, j]| (self.vertices[i] - self.vertices[j]).norm())
            .collect()
    }

    /// True if the vertex-edge graph is a single connected component.
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.neighbors[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.vertices.len()
    }

    /// Diagonal length of the axis-aligned bounding box.
    pub fn bbox_diagonal(&self) -> T {
        bbox_diagonal(&self.vertices)
    }

    /// Area-weighted per-vertex normals (sum of unnormalized face cross
    /// products, then renormalized) for the given vertex positions.
    pub fn vertex_normals(&self, positions: &[Point3<T>]) -> Vec<Vector3<T>> {
        let mut normals = vec![Vector3::zeros(); positions.len()];
        for f in &self.faces {
            let a = &positions[f[0]];
            let b = &positions[f[1]];
            let c = &positions[f[2]];
            let cross = (b - a).cross(&(c - a));
            normals[f[0]] += cross;
            normals[f[1]] += cross;
            normals[f[2]] += cross;
        }
        for nrm in &mut normals {
            let len = nrm.norm();
            if len > real(1e-20) {
                *nrm /= len;
            }
        }
        normals
    }
}

pub fn bbox_diagonal<T: Real>(points: &[Point3<T>]) -> T {
    if points.is_empty() {
        return T::zero();
    }
    let mut min = points[0];
    let mut max = points[0];
    for p in points {
        for k in 0..3 {
            if p[k] < min[k] {
                min[k] = p[k];
            }
            if p[k] > max[k] {
                max[k] = p[k];
            }
        }
    }
    (max - min).norm()
}
