//! Shared inputs for the benchmarks.

use rackle::{catalog, AbstractLattice, Config, Rack, SubrackLattice};

pub fn group_rack(name: &str) -> Rack {
    Rack::group_rack(&catalog::by_name(name).expect("benchmark groups are in the catalog"))
}

/// The subrack lattice of a catalog group, relabelled by `seed`.
pub fn abstract_lattice(name: &str, seed: u64, config: &Config) -> AbstractLattice {
    SubrackLattice::enumerate(&group_rack(name), config)
        .expect("benchmark lattices fit the default caps")
        .to_abstract(Some(seed))
        .0
}
