//! Lattice graphs, family builders, symmetries and structural transforms.

pub mod families;
pub mod graph;
pub mod symmetry;
pub mod transform;

pub use families::{build_family, build_path_family, family, FamilyId, FamilyName};
pub use graph::{lattice_graph, LatticeGraph, LatticePoint, Vertex};
pub use symmetry::{
    invariant_matching_graph, orbits, quotient_by_group, symmetry_map, SymmetryKind, SymmetryMap,
};
pub use transform::{
    canonical_form, embedding_isomorphism, grid_faces, inner_dual, isomorphic_by_embedding,
    outer_face_vertices, temperley_refinement,
};
