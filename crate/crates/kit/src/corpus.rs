//! The built-in corpus and its parallel runner.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use spectral_core::finring::RingSpec;
use spectral_core::modlat::{IdealLattice, ModuleSpec};
use spectral_core::topo::Poset;
use spectral_core::verify::{self, Target};

use rayon::prelude::*;

use crate::error::KitError;
use crate::formats::ReportJson;
use crate::run::{applicable, derived_seed, prepare, run_prepared, Instance, RunOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    /// Rings larger than this are dropped (and so are their modules).
    pub max_ring_size: usize,
    /// Every poset up to this many points, up to isomorphism (at most 6).
    pub max_poset: usize,
    pub random_posets: usize,
    pub random_poset_sizes: (usize, usize),
    pub max_module_size: usize,
    pub max_summands: usize,
    pub max_idealization_size: usize,
    /// Keep only modules with zero annihilator. A module over `R` with
    /// annihilator `I` is the same module over `R/I`, and every such quotient
    /// of a corpus ring is again a corpus ring up to isomorphism.
    pub faithful_only: bool,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_ring_size: 256,
            max_poset: 5,
            random_posets: 100,
            random_poset_sizes: (6, 7),
            max_module_size: 256,
            max_summands: 3,
            max_idealization_size: 256,
            faithful_only: true,
            seed: 0,
        }
    }
}

/// One corpus instance with the checkers it runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub kind: String,
    pub spec: String,
    pub checks: Vec<String>,
}

fn f4() -> RingSpec {
    RingSpec::PolyQuot {
        p: 2,
        coeffs: vec![1, 1, 1],
    }
}

fn dual_numbers() -> RingSpec {
    RingSpec::PolyQuot {
        p: 2,
        coeffs: vec![0, 0, 1],
    }
}

/// The factors products are built from.
pub fn product_factors() -> Vec<RingSpec> {
    vec![RingSpec::ZMod(2), RingSpec::ZMod(3), RingSpec::ZMod(4), f4(), dual_numbers()]
}

/// Quotients `F_p[x]/(f)` in the corpus, including `F₄` and `F₂[x]/(x²)`.
pub fn poly_quotients() -> Vec<RingSpec> {
    let q = |p: usize, coeffs: &[usize]| RingSpec::PolyQuot {
        p,
        coeffs: coeffs.to_vec(),
    };
    vec![
        f4(),
        dual_numbers(),
        q(2, &[0, 1, 1]),
        q(2, &[1, 0, 1]),
        q(2, &[0, 0, 0, 1]),
        q(2, &[1, 1, 0, 1]),
        q(2, &[0, 0, 0, 0, 1]),
        q(3, &[0, 0, 1]),
        q(3, &[1, 0, 1]),
        q(5, &[0, 0, 1]),
    ]
}

fn spec_size(spec: &RingSpec) -> usize {
    match spec {
        RingSpec::ZMod(n) => *n,
        RingSpec::PolyQuot { p, coeffs } => p.pow(coeffs.len() as u32 - 1),
        RingSpec::Product(a, b) => spec_size(a) * spec_size(b),
        RingSpec::Idealization(m) => m.build().map(|m| m.ring().size() * m.size()).unwrap_or(usize::MAX),
    }
}

/// Base rings: `Z/n` for `n ≤ 60`, products of two or three listed
/// factors, and the polynomial quotients.
pub fn base_rings(cfg: &CorpusConfig) -> Vec<RingSpec> {
    let mut out: Vec<RingSpec> = (1..=60usize).map(RingSpec::ZMod).collect();
    let factors = product_factors();
    let k = factors.len();
    for a in 0..k {
        for b in a..k {
            out.push(RingSpec::product(factors[a].clone(), factors[b].clone()));
        }
    }
    for a in 0..k {
        for b in a..k {
            for c in b..k {
                let ab = RingSpec::product(factors[a].clone(), factors[b].clone());
                out.push(RingSpec::product(ab, factors[c].clone()));
            }
        }
    }
    out.extend(poly_quotients());
    let mut seen = BTreeSet::new();
    out.retain(|s| spec_size(s) <= cfg.max_ring_size && seen.insert(s.to_string()));
    out
}

/// `⊕` of at most `max_summands` nonzero cyclic quotients `R/I` over each
/// base ring with `|M| ≤ max_module_size`, plus the zero module.
pub fn module_corpus(cfg: &CorpusConfig, bases: &[RingSpec]) -> Result<Vec<ModuleSpec>, KitError> {
    Ok(sized_module_corpus(cfg, bases)?.into_iter().map(|(m, _)| m).collect())
}

/// Corpus modules with `|R|·|M|`.
fn sized_module_corpus(cfg: &CorpusConfig, bases: &[RingSpec]) -> Result<Vec<(ModuleSpec, usize)>, KitError> {
    let mut out = Vec::new();
    for spec in bases {
        let ring = Arc::new(spec.build()?);
        let lat = IdealLattice::new(ring.clone())?;
        let module = lat.module();
        let quotients: Vec<(Vec<String>, usize)> = lat
            .ideals(true)
            .iter()
            .map(|i| {
                let gens = module
                    .generators_of(i)
                    .into_iter()
                    .map(|g| ring.element_name(g).to_string())
                    .collect();
                (gens, ring.size() / i.len())
            })
            .collect();
        if !cfg.faithful_only || ring.size() == 1 {
            let zero = ModuleSpec {
                ring: spec.clone(),
                summands: vec![],
            };
            out.push((zero, ring.size()));
        }
        let ideals = lat.ideals(true);
        let mut pick: Vec<usize> = Vec::new();
        extend_multisets(&quotients, cfg, 0, 1, &mut pick, &mut |p| {
            let faithful = || {
                let mut ann = module.top();
                for &q in p {
                    ann.intersect_with(&ideals[q]);
                }
                ann.len() == 1
            };
            if !cfg.faithful_only || faithful() {
                let m = ModuleSpec {
                    ring: spec.clone(),
                    summands: p.iter().map(|&q| quotients[q].0.clone()).collect(),
                };
                let size: usize = p.iter().map(|&q| quotients[q].1).product();
                out.push((m, ring.size() * size));
            }
        });
    }
    Ok(out)
}

fn extend_multisets(
    quotients: &[(Vec<String>, usize)],
    cfg: &CorpusConfig,
    from: usize,
    size: usize,
    pick: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if pick.len() == cfg.max_summands {
        return;
    }
    for q in from..quotients.len() {
        let s = size.saturating_mul(quotients[q].1);
        if s > cfg.max_module_size {
            continue;
        }
        pick.push(q);
        emit(pick);
        extend_multisets(quotients, cfg, q, s, pick, emit);
        pick.pop();
    }
}

/// Idealizations `R ⋉ M` of corpus modules with `|R|·|M|` within bounds.
pub fn idealization_rings(cfg: &CorpusConfig, bases: &[RingSpec]) -> Result<Vec<RingSpec>, KitError> {
    let bound = cfg.max_idealization_size.min(cfg.max_ring_size);
    Ok(sized_module_corpus(cfg, bases)?
        .into_iter()
        .filter(|&(_, size)| size <= bound)
        .map(|(m, _)| RingSpec::Idealization(Box::new(m)))
        .collect())
}

/// A random poset on `n` points: a random relation compatible with the
/// natural order, transitively closed.
pub fn random_poset(n: usize, rng: &mut ChaCha8Rng) -> Poset {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.3) {
                pairs.push((a, b));
            }
        }
    }
    Poset::from_relations(Poset::default_labels(n), &pairs).expect("forward edges are acyclic")
}

pub fn poset_corpus(cfg: &CorpusConfig) -> Result<Vec<Poset>, KitError> {
    let mut out = Vec::new();
    for n in 0..=cfg.max_poset.min(6) {
        out.extend(Poset::all_up_to_iso(n)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derived_seed(cfg.seed, "random posets"));
    let (lo, hi) = cfg.random_poset_sizes;
    for _ in 0..cfg.random_posets {
        let n = rng.gen_range(lo..=hi);
        out.push(random_poset(n, &mut rng));
    }
    Ok(out)
}

/// Every corpus instance, in canonical order: base rings, idealizations,
/// modules, posets.
pub fn instances(cfg: &CorpusConfig) -> Result<Vec<Instance>, KitError> {
    let bases = base_rings(cfg);
    let sized = sized_module_corpus(cfg, &bases)?;
    let bound = cfg.max_idealization_size.min(cfg.max_ring_size);
    let ideal_rings = sized
        .iter()
        .filter(|&&(_, size)| size <= bound)
        .map(|(m, _)| RingSpec::Idealization(Box::new(m.clone())));
    let modules: Vec<ModuleSpec> = sized.iter().map(|(m, _)| m.clone()).collect();
    let mut out: Vec<Instance> = bases.into_iter().map(Instance::Ring).collect();
    out.extend(ideal_rings.map(Instance::Ring));
    out.extend(modules.into_iter().map(Instance::Module));
    out.extend(poset_corpus(cfg)?.into_iter().map(Instance::poset));
    Ok(out)
}

/// Runs every applicable checker on one instance.
pub fn run_instance(inst: &Instance, opts: &RunOptions) -> Result<(CorpusEntry, Vec<ReportJson>), KitError> {
    let id = inst.id();
    let prepared = prepare(inst, opts)?;
    let mut entry = CorpusEntry {
        kind: inst.target().name().to_string(),
        spec: id.clone(),
        checks: Vec::new(),
    };
    let mut reports = Vec::new();
    for c in verify::checkers_for(inst.target()) {
        if !applicable(c.name, &prepared, &opts.limits) {
            continue;
        }
        let t = std::time::Instant::now();
        let report = run_prepared(c.name, &prepared, &id, opts)?;
        let elapsed = t.elapsed().as_secs_f64() * 1e3;
        entry.checks.push(c.name.to_string());
        reports.push((report, elapsed));
    }
    Ok((
        entry,
        reports
            .into_iter()
            .map(|(r, e)| ReportJson::new(r, opts_timing(e, opts)))
            .collect(),
    ))
}

fn opts_timing(elapsed: f64, opts: &RunOptions) -> Option<f64> {
    opts.timings.then_some(elapsed)
}

/// Aggregate corpus report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusReport {
    pub version: String,
    pub seed: u64,
    pub instances: usize,
    pub checks: usize,
    pub failed: usize,
    pub counts: std::collections::BTreeMap<String, usize>,
    pub reports: Vec<ReportJson>,
}

impl CorpusReport {
    pub fn failures(&self) -> impl Iterator<Item = &ReportJson> {
        self.reports.iter().filter(|r| !r.passed)
    }
}

/// Runs the corpus on a pool of `jobs` threads. Reports are assembled in
/// canonical instance order whatever the completion order.
pub fn run_corpus(cfg: &CorpusConfig, opts: &RunOptions, jobs: usize) -> Result<CorpusReport, KitError> {
    let insts = instances(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| KitError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    let results: Vec<Result<(CorpusEntry, Vec<ReportJson>), KitError>> =
        pool.install(|| insts.par_iter().map(|i| run_instance(i, opts)).collect());
    let mut reports = Vec::new();
    let mut counts = std::collections::BTreeMap::new();
    for (inst, res) in insts.iter().zip(results) {
        let (_, rs) = res.map_err(|e| match e {
            KitError::Core(c) => KitError::Core(c),
            other => KitError::Usage(format!("{}: {other}", inst.id())),
        })?;
        *counts.entry(inst.target().name().to_string()).or_insert(0) += 1;
        reports.extend(rs);
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    Ok(CorpusReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        instances: insts.len(),
        checks: reports.len(),
        failed,
        counts,
        reports,
    })
}

/// Instance kinds, for filtering.
pub fn target_of(kind: &str) -> Option<Target> {
    match kind {
        "ring" => Some(Target::Ring),
        "module" => Some(Target::Module),
        "poset" => Some(Target::Poset),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_ring_list() {
        let cfg = CorpusConfig::default();
        let rings = base_rings(&cfg);
        assert!(rings.iter().any(|r| r.to_string() == "Z/60"));
        assert!(rings.iter().any(|r| r.to_string() == "Z/4 x GF(2)[x]/(x^2)"));
        // 60 + 15 pairs + 35 triples + 10 quotients
        assert_eq!(rings.len(), 120);
        let tiny = base_rings(&CorpusConfig {
            max_ring_size: 1,
            ..cfg
        });
        assert_eq!(tiny, vec![RingSpec::ZMod(1)]);
    }

    #[test]
    fn multisets_respect_bounds() {
        let all = CorpusConfig {
            faithful_only: false,
            ..CorpusConfig::default()
        };
        let mods = module_corpus(&all, &[RingSpec::ZMod(4)]).unwrap();
        let names: Vec<String> = mods.iter().map(|m| m.summands_display()).collect();
        assert!(names.contains(&"Z/4/(2) + Z/4/(2) + Z/4/(2)".to_string()), "{names:?}");
        assert!(mods.iter().all(|m| m.summands.len() <= 3));
        // zero module; then 2 singles, 3 pairs, 4 triples over {Z/4, Z/2}
        assert_eq!(mods.len(), 1 + 2 + 3 + 4);
        let faithful = module_corpus(&CorpusConfig::default(), &[RingSpec::ZMod(4)]).unwrap();
        assert_eq!(faithful.len(), 1 + 2 + 3);
        let tiny = module_corpus(&CorpusConfig::default(), &[RingSpec::ZMod(1)]).unwrap();
        assert_eq!(tiny.len(), 1);
    }

    #[test]
    fn random_posets_are_seeded() {
        let cfg = CorpusConfig::default();
        let a: Vec<String> = poset_corpus(&cfg).unwrap().iter().map(crate::run::poset_id).collect();
        let b: Vec<String> = poset_corpus(&cfg).unwrap().iter().map(crate::run::poset_id).collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 1 + 1 + 2 + 5 + 16 + 63 + 100);
    }
}
