//! Lattice-only reconstruction: conjugacy classes, maximal abelian and
//! maximal normal abelian subgroups, coset partitions, quotient lattices and
//! the derived length.

pub mod classes;
pub mod cosets;
pub mod derived;
pub mod hypothetical;
pub mod partition;

pub use classes::{max_normal_abelian, maximal_boolean_elements, recover_classes, AtomClassPartition};
pub use cosets::{coset_partition_of, join_of_cosets, rack_closure, CosetPartition};
pub use derived::{lattice_derived_length, Derivation, DerivedLength, DerivedLengthSolver, Step};
pub use hypothetical::{
    find_coset_partition, is_hypothetical_coset_partition, join_poset, ConditionReport, HypotheticalCosetPartition,
    JoinPoset, LatticeContext,
};
pub use partition::{is_valid_bijection, partition_bijection};
