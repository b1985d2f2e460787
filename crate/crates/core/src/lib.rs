//! Computational toolkit for finite groups in which every cyclic subgroup is
//! an intersection of maximal subgroups.
//!
//! [`group`] holds the concrete group engine, [`lattice`] the brute-force
//! subgroup lattice and its closure invariants, [`structured`] the closed
//! formulas for semidirect products of elementary abelian modules by abelian
//! groups, and [`section4`] the non-soluble example over GF(11).

pub mod arith;
pub mod families;
pub mod group;
pub mod lattice;
pub mod linalg;
pub mod section4;
pub mod structured;

pub use group::{FiniteGroup, GroupElement, GroupError, Perm, Realization, StructuredElement, Subgroup};
pub use lattice::{ClassificationReport, LatticeError, SubgroupLattice};
pub use structured::{ModuleSpec, StructuredError, StructuredGroup};
