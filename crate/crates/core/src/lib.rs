pub mod arith;
pub mod circuits;
pub mod ehrhart;
pub mod enumerate;
pub mod equivalence;
pub mod error;
pub mod hull;
pub mod lp;
pub mod matrix;
pub mod point;
pub mod polytope;
pub mod properties;
pub mod simplices;
pub mod store;

pub use error::{Error, Result};
pub use matrix::IntMatrix;
pub use point::{HalfSpace, LatticePoint};
pub use polytope::{convex_hull, simplex_volume, LatticePolytope};
pub use equivalence::{apply_map, are_equivalent, canonical_form, canonical_key, CanonicalForm, CanonicalKey, UnimodularMap};
pub use simplices::{enumerate_simplices, enumerate_simplices_upto, SimplexClassSet};
pub use circuits::{apex_point, corank_one_triangulations, volume_vector, volume_vector_set, VolumeVector};
pub use enumerate::{enumerate_polytopes, exceptional_simplex, lattice_pyramid, lawrence_prism, PolytopeClassSet};
