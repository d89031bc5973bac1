//! Instances, resource limits and checker dispatch.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use spectral_core::finring::{RingSpec, AXIOM_SCAN_LIMIT};
use spectral_core::hyper::HYPERSPACE_BASE_LIMIT;
use spectral_core::modlat::{ClosureOp, IdealLattice, LinearMap, ModuleSpec, SubmoduleLattice, DEFAULT_MODULE_LIMIT};
use spectral_core::report::CheckReport;
use spectral_core::topo::Poset;
use spectral_core::verify::{self, checker, HkLattice, Target, HYPERSPACE_SUITE_LIMIT};

use crate::cache::{cached_lattice, Cache};
use crate::error::KitError;

/// Modules up to this size get random closure tables.
pub const RANDOM_CLOSURE_MODULE_LIMIT: usize = 16;
/// Modules up to this size get the functor check.
pub const FUNCTOR_MODULE_LIMIT: usize = 16;
/// Composition pairs tested exhaustively up to this count; above it every
/// map is paired with a seeded sample of partners.
pub const FUNCTOR_PAIR_LIMIT: usize = 1 << 16;
const FUNCTOR_PARTNERS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub module: usize,
    pub hyper_base: usize,
    pub hyper_suite: usize,
    pub maps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            module: DEFAULT_MODULE_LIMIT,
            hyper_base: HYPERSPACE_BASE_LIMIT,
            hyper_suite: HYPERSPACE_SUITE_LIMIT,
            maps: 4096,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub limits: Limits,
    pub seed: u64,
    pub random_closures: usize,
    pub cache: Option<Cache>,
    /// Scan ring and module axioms before checking.
    pub axiom_scan: bool,
    /// Record wall-clock times in JSON reports.
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            limits: Limits::default(),
            seed: 0,
            random_closures: 50,
            cache: None,
            axiom_scan: false,
            timings: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Instance {
    Ring(RingSpec),
    Module(ModuleSpec),
    Poset { id: String, poset: Poset },
}

/// `poset(a,b,c; a<b, b<c)`, listing points and cover relations.
pub fn poset_id(p: &Poset) -> String {
    let l = p.labels();
    let covers: Vec<String> = p.covers().into_iter().map(|(a, b)| format!("{}<{}", l[a], l[b])).collect();
    if covers.is_empty() {
        format!("poset({})", l.join(","))
    } else {
        format!("poset({}; {})", l.join(","), covers.join(", "))
    }
}

impl Instance {
    pub fn poset(p: Poset) -> Instance {
        Instance::Poset {
            id: poset_id(&p),
            poset: p,
        }
    }

    pub fn id(&self) -> String {
        match self {
            Instance::Ring(s) => s.to_string(),
            Instance::Module(s) => s.to_string(),
            Instance::Poset { id, .. } => id.clone(),
        }
    }

    pub fn target(&self) -> Target {
        match self {
            Instance::Ring(_) => Target::Ring,
            Instance::Module(_) => Target::Module,
            Instance::Poset { .. } => Target::Poset,
        }
    }
}

/// A checker verdict with its wall-clock time.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: CheckReport,
    pub elapsed_ms: f64,
}

/// The enumerated structure a checker works on.
pub enum Prepared {
    Ring(IdealLattice),
    Module(SubmoduleLattice),
    Poset(Poset),
}

pub fn prepare(instance: &Instance, opts: &RunOptions) -> Result<Prepared, KitError> {
    match instance {
        Instance::Ring(spec) => {
            let ring = Arc::new(spec.build()?);
            if opts.axiom_scan && ring.size() <= AXIOM_SCAN_LIMIT {
                ring.verify_axioms()?;
            }
            let module = Arc::new(spectral_core::FiniteModule::regular(ring));
            let key = format!("ideals {spec}");
            let lattice = cached_lattice(opts.cache.as_ref(), &key, &module, opts.limits.module)?;
            Ok(Prepared::Ring(IdealLattice::from_lattice(lattice)?))
        }
        Instance::Module(spec) => {
            let module = Arc::new(spec.build()?);
            if opts.axiom_scan && module.size() <= AXIOM_SCAN_LIMIT {
                module.verify_axioms()?;
            }
            let key = format!("submodules {spec}");
            Ok(Prepared::Module(cached_lattice(opts.cache.as_ref(), &key, &module, opts.limits.module)?))
        }
        Instance::Poset { poset, .. } => Ok(Prepared::Poset(poset.clone())),
    }
}

/// A seed derived from the run seed and a string, stable across platforms.
pub fn derived_seed(seed: u64, tag: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(tag.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}

/// `count` closures generated from random fixed-point families.
pub fn random_closures(lattice: &SubmoduleLattice, count: usize, seed: u64) -> Result<Vec<ClosureOp>, KitError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let fixed: Vec<usize> = (0..lattice.len()).filter(|_| rng.gen_bool(0.35)).collect();
        out.push(ClosureOp::from_fixed_points(lattice, &fixed)?);
    }
    Ok(out)
}

/// Composition pairs for `nf` maps followed by `ng` maps: all of them when
/// there are at most [`FUNCTOR_PAIR_LIMIT`], otherwise each first map with
/// a seeded sample of partners.
pub fn functor_pairs(nf: usize, ng: usize, seed: u64) -> Vec<(usize, usize)> {
    if nf.saturating_mul(ng) <= FUNCTOR_PAIR_LIMIT {
        return (0..nf).flat_map(|i| (0..ng).map(move |j| (i, j))).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = FUNCTOR_PARTNERS.min(ng);
    (0..nf)
        .flat_map(|i| {
            let mut js = sample(&mut rng, ng, k).into_vec();
            js.sort_unstable();
            js.into_iter().map(move |j| (i, j))
        })
        .collect()
}

fn closure_check(lattice: &SubmoduleLattice, id: &str, opts: &RunOptions) -> Result<CheckReport, KitError> {
    let mut r = verify::verify_builtin_closures(lattice, id)?;
    if opts.random_closures > 0 && lattice.module().size() <= RANDOM_CLOSURE_MODULE_LIMIT {
        let ops = random_closures(lattice, opts.random_closures, derived_seed(opts.seed, id))?;
        for (k, op) in ops.iter().enumerate() {
            let mut sub = verify::verify_closure_space(lattice, op, id)?;
            sub.check = format!("closure table {k}");
            if !r.absorb(&sub) {
                break;
            }
        }
        r.size("random_tables", ops.len());
    }
    Ok(r)
}

fn functor_check(lattice: &SubmoduleLattice, id: &str, opts: &RunOptions) -> Result<CheckReport, KitError> {
    let m = lattice.module();
    let maps = LinearMap::enumerate_all(m, m, opts.limits.maps)?;
    let pairs = functor_pairs(maps.len(), maps.len(), derived_seed(opts.seed, id));
    let h = HkLattice::new(lattice);
    Ok(verify::verify_functor_family(&h, &h, &h, &maps, &maps, &pairs, id)?)
}

/// Whether a checker is run on an instance in the corpus by default.
pub fn applicable(name: &str, prepared: &Prepared, limits: &Limits) -> bool {
    match (name, prepared) {
        ("functor", Prepared::Module(l)) => l.module().size() <= FUNCTOR_MODULE_LIMIT,
        ("idealization", Prepared::Module(l)) => {
            l.module().ring().size().saturating_mul(l.module().size()) <= limits.module.min(256)
        }
        ("nullstellensatz", Prepared::Ring(l)) => l.spec().len() <= limits.hyper_base,
        ("hyperspace", Prepared::Poset(p)) => p.len() <= limits.hyper_suite,
        ("hyper-dimension", Prepared::Poset(p)) => p.len() <= limits.hyper_base,
        _ => true,
    }
}

pub fn run_prepared(name: &str, prepared: &Prepared, id: &str, opts: &RunOptions) -> Result<CheckReport, KitError> {
    let lim = &opts.limits;
    let report = match (name, prepared) {
        ("nullstellensatz", Prepared::Ring(l)) => verify::verify_nullstellensatz_with_limit(l, lim.hyper_base, id)?,
        ("dimension", Prepared::Ring(l)) => verify::verify_dimension(l, id)?,
        ("radicals", Prepared::Ring(l)) => verify::verify_radicals(l, id)?,
        ("hull-kernel", Prepared::Ring(l)) => verify::verify_spec_hk_equals_zariski(l, id)?,
        ("topology", Prepared::Ring(l)) => verify::verify_ring_topology(l, id)?,
        ("smod", Prepared::Module(l)) => verify::verify_smod_spectral(l, id)?,
        ("prime-spectrum", Prepared::Module(l)) => verify::verify_prime_spectrum(l, id)?,
        ("closure", Prepared::Module(l)) => closure_check(l, id, opts)?,
        ("functor", Prepared::Module(l)) => functor_check(l, id, opts)?,
        ("idealization", Prepared::Module(l)) => verify::verify_idealization(l, lim.module, id)?,
        ("lu-topology", Prepared::Module(l)) => verify::verify_lu_topology(l, id)?,
        ("hyperspace", Prepared::Poset(p)) => verify::verify_hyperspace_suite_with_limit(p, lim.hyper_suite, id)?,
        ("hyper-dimension", Prepared::Poset(p)) => verify::verify_hyper_dimension_with_limit(p, lim.hyper_base, id)?,
        ("poset-topology", Prepared::Poset(p)) => verify::verify_poset_topology(p, id)?,
        _ => return Err(KitError::Usage(format!("checker {name} does not apply to this instance"))),
    };
    Ok(report)
}

/// Checks that every name exists and targets the instance's kind.
pub fn validate_names(instance: &Instance, names: &[String]) -> Result<(), KitError> {
    for n in names {
        match checker(n) {
            None => return Err(KitError::Usage(format!("unknown checker {n:?}; see list-checkers"))),
            Some(c) if c.target != instance.target() => {
                return Err(KitError::Usage(format!(
                    "checker {n} takes a {} instance, not a {}",
                    c.target.name(),
                    instance.target().name()
                )))
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// Runs the named checkers (all checkers for the instance kind when `names`
/// is empty) on one instance.
pub fn run_checks(instance: &Instance, names: &[String], opts: &RunOptions) -> Result<Vec<Outcome>, KitError> {
    validate_names(instance, names)?;
    let names: Vec<String> = if names.is_empty() {
        verify::checkers_for(instance.target()).map(|c| c.name.to_string()).collect()
    } else {
        names.to_vec()
    };
    let id = instance.id();
    let prepared = prepare(instance, opts)?;
    names
        .iter()
        .map(|n| {
            let t = Instant::now();
            let report = run_prepared(n, &prepared, &id, opts)?;
            Ok(Outcome {
                report,
                elapsed_ms: t.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_module, parse_ring};

    #[test]
    fn z6_all_ring_checks_pass() {
        let out = run_checks(&Instance::Ring(parse_ring("Z/6").unwrap()), &[], &RunOptions::default()).unwrap();
        assert_eq!(out.len(), verify::checkers_for(Target::Ring).count());
        assert!(out.iter().all(|o| o.report.passed));
    }

    #[test]
    fn module_checks_pass() {
        let inst = Instance::Module(parse_module("Z/2 + Z/2").unwrap());
        let out = run_checks(&inst, &[], &RunOptions::default()).unwrap();
        for o in &out {
            assert!(o.report.passed, "{}: {:?}", o.report.check, o.report.witness);
        }
    }

    #[test]
    fn wrong_target_is_usage_error() {
        let inst = Instance::Ring(parse_ring("Z/6").unwrap());
        let e = run_checks(&inst, &["hyperspace".to_string()], &RunOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run_checks(&inst, &["nope".to_string()], &RunOptions::default()).unwrap_err();
        assert!(e.to_string().contains("unknown checker"));
    }

    #[test]
    fn pairs_exhaustive_or_sampled() {
        assert_eq!(functor_pairs(3, 4, 1).len(), 12);
        let big = functor_pairs(1024, 1024, 1);
        assert_eq!(big.len(), 1024 * FUNCTOR_PARTNERS);
        assert_eq!(big, functor_pairs(1024, 1024, 1));
    }

    #[test]
    fn random_closures_are_deterministic() {
        let inst = Instance::Module(parse_module("Z/2 + Z/2").unwrap());
        let Prepared::Module(l) = prepare(&inst, &RunOptions::default()).unwrap() else {
            panic!("module instance")
        };
        let a: Vec<Vec<usize>> = random_closures(&l, 5, 9)
            .unwrap()
            .iter()
            .map(|c| c.closed_submodules())
            .collect();
        let b: Vec<Vec<usize>> = random_closures(&l, 5, 9)
            .unwrap()
            .iter()
            .map(|c| c.closed_submodules())
            .collect();
        assert_eq!(a, b);
    }
}
