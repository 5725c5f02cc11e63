//! Subrack lattices of finite-group conjugation racks, and the recovery of
//! solvability and derived length from the abstract lattice alone.

pub mod bits;
pub mod catalog;
pub mod config;
pub mod error;
pub mod group;
pub mod iso;
pub mod lattice;
pub mod poset;
pub mod formats;
pub mod rack;
pub mod reconstruct;
pub mod topology;
pub mod verify;
mod tuples;

pub use bits::Bits;
pub use config::Config;
pub use error::{Error, Result};
pub use group::FiniteGroup;
pub use lattice::SubrackLattice;
pub use poset::AbstractLattice;
pub use rack::Rack;
