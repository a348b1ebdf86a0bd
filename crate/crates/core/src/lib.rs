//! Exact combinatorial cohomology of linear subspace arrangement complements.

pub mod arrangement;
pub mod catalog;
pub mod linear;
pub mod poset;
pub mod complex;
pub mod homology;
pub mod nerve;
pub mod transverse;
pub mod decomposition;
pub mod sheaf;
pub mod cup;
