//! Hasse diagrams and topology dumps of the spaces attached to an instance.

use std::str::FromStr;

use spectral_core::hyper;
use spectral_core::topo::{hull_kernel_space, FinSpace};
use spectral_core::verify::lu_space;

use crate::error::KitError;
use crate::formats::{space_dot, TopologyJson};
use crate::run::{prepare, Instance, Prepared, RunOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Artifact {
    Hasse,
    Topology,
    Lattice,
}

impl FromStr for Artifact {
    type Err = KitError;

    fn from_str(s: &str) -> Result<Artifact, KitError> {
        match s {
            "hasse" => Ok(Artifact::Hasse),
            "topology" => Ok(Artifact::Topology),
            "lattice" => Ok(Artifact::Lattice),
            _ => Err(KitError::Usage(format!(
                "unknown artifact {s:?}; expected hasse, topology or lattice"
            ))),
        }
    }
}

/// Space names accepted per instance kind; the first is listed in the order
/// `lattice`, `hasse`, `topology` defaults.
pub fn space_names(inst: &Instance) -> &'static [&'static str] {
    match inst {
        Instance::Ring(_) => &["id", "rd", "spec", "id*"],
        Instance::Module(_) => &["smod", "spec", "smod*", "spec+m", "lu"],
        Instance::Poset { .. } => &["poset", "inverse", "zariski", "lower-vietoris", "upper-vietoris"],
    }
}

/// The space used when none is named.
pub fn default_space(inst: &Instance, artifact: Artifact) -> &'static str {
    match (inst, artifact) {
        (Instance::Ring(_), Artifact::Lattice) => "id",
        (Instance::Ring(_), Artifact::Topology) => "rd",
        (Instance::Ring(_), Artifact::Hasse) => "spec",
        (Instance::Module(_), Artifact::Lattice) => "smod",
        (Instance::Module(_), _) => "spec",
        (Instance::Poset { .. }, Artifact::Lattice) => "zariski",
        (Instance::Poset { .. }, _) => "poset",
    }
}

/// Builds the named space of an instance.
pub fn build_space(inst: &Instance, name: &str, opts: &RunOptions) -> Result<FinSpace, KitError> {
    if !space_names(inst).contains(&name) {
        return Err(KitError::Usage(format!(
            "unknown space {name:?} for a {} instance; expected one of {}",
            inst.target().name(),
            space_names(inst).join(", ")
        )));
    }
    let prepared = prepare(inst, opts)?;
    let lim = opts.limits.hyper_base;
    let space = match (&prepared, name) {
        (Prepared::Ring(l), "id") => hull_kernel_space(l.ideals(false), l.module()),
        (Prepared::Ring(l), "id*") => hull_kernel_space(l.ideals(true), l.module()),
        (Prepared::Ring(l), "rd") => hull_kernel_space(&l.rd()?, l.module()),
        (Prepared::Ring(l), "spec") => hull_kernel_space(l.spec(), l.module()),
        (Prepared::Module(l), "smod") => hull_kernel_space(l.members(), l.module()),
        (Prepared::Module(l), "smod*") => {
            let top = l.top_index();
            let proper: Vec<_> = l
                .members()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != top)
                .map(|(_, n)| n.clone())
                .collect();
            hull_kernel_space(&proper, l.module())
        }
        (Prepared::Module(l), "spec") => hull_kernel_space(&l.prime_submodules(), l.module()),
        (Prepared::Module(l), "spec+m") => {
            let mut family = l.prime_submodules();
            family.push(l.module().top());
            hull_kernel_space(&family, l.module())
        }
        (Prepared::Module(l), "lu") => lu_space(l).1,
        (Prepared::Poset(p), "poset") => FinSpace::from_poset(p),
        (Prepared::Poset(p), "inverse") => FinSpace::from_poset(p).inverse_space()?,
        (Prepared::Poset(p), "zariski") => hyper::zariski_hyperspace_with_limit(&FinSpace::from_poset(p), lim)?.space,
        (Prepared::Poset(p), "lower-vietoris") => {
            hyper::lower_vietoris_with_limit(&FinSpace::from_poset(p), lim)?.space
        }
        (Prepared::Poset(p), "upper-vietoris") => hyper::upper_vietoris(&FinSpace::from_poset(p))?.space,
        _ => unreachable!("space names are validated above"),
    };
    Ok(space)
}

/// Renders an artifact: DOT for `hasse` and `lattice`, JSON for `topology`.
pub fn render(inst: &Instance, artifact: Artifact, space: Option<&str>, opts: &RunOptions) -> Result<String, KitError> {
    let name = space.unwrap_or_else(|| default_space(inst, artifact));
    let s = build_space(inst, name, opts)?;
    let title = format!("{name} of {}", inst.id());
    Ok(match artifact {
        Artifact::Hasse | Artifact::Lattice => space_dot(&title, &s),
        Artifact::Topology => {
            let mut text = serde_json::to_string_pretty(&TopologyJson::new(&title, &s))?;
            text.push('\n');
            text
        }
    })
}
