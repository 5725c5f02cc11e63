use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rackle::formats::{read_cayley, read_lattice, read_permutation_generators, read_rack, LatticeFile};
use rackle::{catalog, Config, FiniteGroup, Rack};

/// A group given either as a `.cay`/`.pgen` file or as a catalog name.
pub fn group(arg: &str, config: &Config) -> Result<FiniteGroup> {
    let path = Path::new(arg);
    let ext = path.extension().and_then(|e| e.to_str());
    let g = match ext {
        Some("cay") => read_cayley(&read(path)?).with_context(|| format!("reading {arg}"))?,
        Some("pgen") => read_permutation_generators(&read(path)?, config.generation_cap)
            .with_context(|| format!("reading {arg}"))?,
        _ => return catalog::by_name(arg).map_err(Into::into),
    };
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    Ok(g.named(stem))
}

/// A rack: a `.rk` file, or the group rack of a group argument.
pub fn rack(arg: &str, config: &Config) -> Result<Rack> {
    let path = Path::new(arg);
    if path.extension().and_then(|e| e.to_str()) == Some("rk") {
        return read_rack(&read(path)?).with_context(|| format!("reading {arg}"));
    }
    Ok(Rack::group_rack(&group(arg, config)?))
}

pub fn lattice(arg: &str) -> Result<LatticeFile> {
    read_lattice(&read(Path::new(arg))?).with_context(|| format!("reading {arg}"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}
