//! Finite rings, submodule lattices, hull-kernel and hyperspace topologies.
//!
//! Everything here is `no_std` with `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bitset;
pub mod error;
pub mod finring;
pub mod hyper;
pub mod modlat;
pub mod report;
pub mod topo;
pub mod verify;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use finring::{Ring, RingSpec};
pub use modlat::{FiniteModule, IdealLattice, ModuleSpec, SubmoduleLattice};
pub use report::{CheckReport, Witness};
pub use topo::{FinSpace, Poset, Preorder};
