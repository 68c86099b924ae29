use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Result;
use crate::fem::basis::{local_dof_count, local_nodes};
use crate::mesh::{Point, Triangulation};

/// Lagrange space of degree 1 or 2 with the zero-trace subspace marked by
/// `interior_dof_mask`.
#[derive(Debug)]
pub struct FeSpace {
    mesh: Arc<Triangulation>,
    degree: usize,
    dof_coordinates: Vec<Point>,
    element_dofs: Vec<[usize; 6]>,
    local_len: usize,
    interior: Vec<bool>,
    interior_index: Vec<Option<usize>>,
    n_interior: usize,
}

impl FeSpace {
    pub fn new(mesh: Arc<Triangulation>, degree: usize) -> Result<Self> {
        let local_len = local_dof_count(degree)?;
        let mut dof_coordinates: Vec<Point> = mesh.vertices().to_vec();
        let mut interior: Vec<bool> = mesh.boundary_flags().iter().map(|b| !b).collect();
        let mut element_dofs = Vec::with_capacity(mesh.n_triangles());

        if degree == 1 {
            for tri in mesh.triangles() {
                element_dofs.push([tri[0], tri[1], tri[2], 0, 0, 0]);
            }
        } else {
            let owners = mesh.edge_map();
            let mut edge_dof: HashMap<(usize, usize), usize> = HashMap::with_capacity(owners.len());
            let nodes = local_nodes(2)?;
            for (t, tri) in mesh.triangles().iter().enumerate() {
                let mut dofs = [tri[0], tri[1], tri[2], 0, 0, 0];
                for i in 0..3 {
                    let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
                    let key = (a.min(b), a.max(b));
                    dofs[3 + i] = *edge_dof.entry(key).or_insert_with(|| {
                        dof_coordinates.push(mesh.point_at(t, nodes[3 + i]));
                        interior.push(owners[&key].len() == 2);
                        dof_coordinates.len() - 1
                    });
                }
                element_dofs.push(dofs);
            }
        }

        let mut interior_index = vec![None; interior.len()];
        let mut n_interior = 0;
        for (i, &inside) in interior.iter().enumerate() {
            if inside {
                interior_index[i] = Some(n_interior);
                n_interior += 1;
            }
        }
        Ok(Self {
            mesh,
            degree,
            dof_coordinates,
            element_dofs,
            local_len,
            interior,
            interior_index,
            n_interior,
        })
    }

    pub fn mesh(&self) -> &Arc<Triangulation> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_dofs(&self) -> usize {
        self.dof_coordinates.len()
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    pub fn local_len(&self) -> usize {
        self.local_len
    }

    pub fn dof_coordinates(&self) -> &[Point] {
        &self.dof_coordinates
    }

    pub fn element_dofs(&self, t: usize) -> &[usize] {
        &self.element_dofs[t][..self.local_len]
    }

    pub fn interior_dof_mask(&self) -> &[bool] {
        &self.interior
    }

    /// Position of a global DOF among the interior unknowns.
    pub fn interior_index(&self, dof: usize) -> Option<usize> {
        self.interior_index[dof]
    }

    /// Global DOF numbers of the interior unknowns, in unknown order.
    pub fn interior_dofs(&self) -> Vec<usize> {
        (0..self.n_dofs()).filter(|&i| self.interior[i]).collect()
    }

    /// True when `other` is the same space (same mesh object and degree).
    pub fn same_as(&self, other: &FeSpace) -> bool {
        self.degree == other.degree && Arc::ptr_eq(&self.mesh, &other.mesh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{mesh_at_level, ConvexPolygon};

    #[test]
    fn dof_counts() {
        let mesh = Arc::new(mesh_at_level(&ConvexPolygon::unit_square(), 2).unwrap());
        let n_edges = mesh.edge_map().len();
        let p1 = FeSpace::new(mesh.clone(), 1).unwrap();
        assert_eq!(p1.n_dofs(), mesh.n_vertices());
        let p2 = FeSpace::new(mesh.clone(), 2).unwrap();
        assert_eq!(p2.n_dofs(), mesh.n_vertices() + n_edges);
        assert_eq!(p2.element_dofs(0).len(), 6);
        assert_eq!(p1.element_dofs(0).len(), 3);
        assert!(FeSpace::new(mesh, 3).is_err());
    }

    #[test]
    fn boundary_dofs_are_on_boundary() {
        let mesh = Arc::new(mesh_at_level(&ConvexPolygon::regular(5, 1.0).unwrap(), 2).unwrap());
        let space = FeSpace::new(mesh.clone(), 2).unwrap();
        for (x, &inside) in space.dof_coordinates().iter().zip(space.interior_dof_mask()) {
            let on_boundary = mesh.domain().boundary_edge_of(*x, 1e-12).is_some();
            assert_eq!(inside, !on_boundary);
        }
        assert_eq!(space.interior_dofs().len(), space.n_interior());
    }
}
