/// Size caps, search budgets and the sampling seed shared by every stage.
///
/// All values are ordinary configuration; the CLI exposes each one as a flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Largest group built by permutation closure.
    pub generation_cap: usize,
    /// Largest group whose subgroups are enumerated.
    pub subgroup_cap: usize,
    /// Largest rack ground set handed to lattice enumeration.
    pub ground_cap: usize,
    /// Largest number of closed sets kept by one enumeration.
    pub lattice_cap: usize,
    /// Backtrack nodes allowed to one isomorphism search.
    pub iso_budget: u64,
    /// Representative-tuple count below which join-independence checks are exhaustive.
    pub tuple_budget: u64,
    /// Number of seeded samples drawn when a tuple space exceeds the budget.
    pub samples: usize,
    /// Largest number of parts whose join poset is built.
    pub join_poset_cap: usize,
    /// Largest proper part for explicit chain counting.
    pub chain_cap: usize,
    /// Lattices at most this large get an exhaustive least-upper-bound check.
    pub lub_exhaustive_cap: usize,
    pub exhaustive: bool,
    pub seed: u64,
    /// Worker threads for enumeration and scans; 0 means rayon's default.
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            generation_cap: 10_000,
            subgroup_cap: 48,
            ground_cap: 30,
            lattice_cap: 2_000_000,
            iso_budget: 10_000_000,
            tuple_budget: 10_000,
            samples: 1_000,
            join_poset_cap: 16,
            chain_cap: 200,
            lub_exhaustive_cap: 200,
            exhaustive: false,
            seed: 0,
            threads: 0,
        }
    }
}

impl Config {
    /// One-line rendering stamped into every report.
    pub fn summary(&self) -> String {
        format!(
            "seed={} exhaustive={} tuple_budget={} samples={} ground_cap={} lattice_cap={} subgroup_cap={} iso_budget={}",
            self.seed,
            self.exhaustive,
            self.tuple_budget,
            self.samples,
            self.ground_cap,
            self.lattice_cap,
            self.subgroup_cap,
            self.iso_budget
        )
    }
}
