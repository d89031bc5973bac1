//! One PASS/FAIL line per acceptance criterion, all with exact equality.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use spectral_core::modlat::{ClosureKind, ClosureOp, LinearMap};
use spectral_core::topo::{FinSpace, Poset};
use spectral_core::verify::{verify_functor_family, HkLattice};
use spectral_core::{FiniteModule, IdealLattice, RingSpec, SubmoduleLattice};
use spectral_kit::corpus::{self, CorpusConfig, CorpusReport};
use spectral_kit::export;
use spectral_kit::formats::ReportJson;
use spectral_kit::parse::{parse_module, parse_ring};
use spectral_kit::run::{self, poset_id, Instance, RunOptions};

type Outcome = Result<String, String>;

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn by_check<'a>(rep: &'a CorpusReport, check: &str) -> Vec<&'a ReportJson> {
    rep.reports.iter().filter(|r| r.check == check).collect()
}

fn size(r: &ReportJson, key: &str) -> i64 {
    *r.sizes.get(key).unwrap_or_else(|| panic!("{} on {} has no size {key}", r.check, r.instance))
}

fn all_pass(rs: &[&ReportJson]) -> Result<(), String> {
    match rs.iter().find(|r| !r.passed) {
        Some(r) => Err(format!("{} fails on {}: {:?}", r.check, r.instance, r.witness)),
        None => Ok(()),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn distinct_primes(mut n: u64) -> i64 {
    let mut k = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            k += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    k + i64::from(n > 1)
}

fn zmod_of(instance: &str) -> Option<u64> {
    instance.strip_prefix("Z/")?.parse().ok()
}

fn criterion1(rep: &CorpusReport, rings: &[RingSpec]) -> Outcome {
    let rs = by_check(rep, "nullstellensatz");
    ensure(rs.len() == rings.len(), || format!("{} reports for {} rings", rs.len(), rings.len()))?;
    all_pass(&rs)?;
    let opts = RunOptions::default();
    let names = vec!["nullstellensatz".to_string()];
    let t = Instant::now();
    for spec in rings {
        run::run_checks(&Instance::Ring(spec.clone()), &names, &opts).map_err(|e| e.to_string())?;
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("one pass over the rings took {secs:.2}s"))?;
    Ok(format!("{} rings, both homeomorphisms, one pass {secs:.2}s", rs.len()))
}

fn criterion2(rep: &CorpusReport, posets: &BTreeMap<String, Poset>) -> Outcome {
    let rs = by_check(rep, "dimension");
    all_pass(&rs)?;
    for r in &rs {
        let spec = size(r, "spec");
        let dim_spec = if spec == 0 { -1 } else { 0 };
        ensure(size(r, "dim_rd") == spec - 1, || format!("dim Rd on {}", r.instance))?;
        ensure(size(r, "dim_spec") == dim_spec, || format!("dim Spec on {}", r.instance))?;
        ensure(size(r, "chain_length") == spec - 1, || format!("radical chain on {}", r.instance))?;
    }
    let hs = by_check(rep, "hyper-dimension");
    all_pass(&hs)?;
    let mut chains = 0;
    for r in &hs {
        let p = &posets[&r.instance];
        let n = p.len() as i64;
        let height = poset_height(p);
        ensure(size(r, "dim_hyperspace") == n - 1, || format!("dim X' on {}", r.instance))?;
        ensure(size(r, "dim_poset") == height, || format!("dim P on {}", r.instance))?;
        ensure(n - 1 >= height, || format!("inequality on {}", r.instance))?;
        if n > 0 && height == n - 1 {
            chains += 1;
        }
    }
    let small = hs.iter().filter(|r| posets[&r.instance].len() <= 5).count();
    ensure(small == 88, || format!("{small} posets with at most 5 points, expected 88"))?;
    ensure(hs.len() == 188, || format!("{} posets, expected 188", hs.len()))?;
    Ok(format!("{} rings, {} posets ({chains} chains)", rs.len(), hs.len()))
}

/// Longest strict chain, by brute force over the order relation.
fn poset_height(p: &Poset) -> i64 {
    let n = p.len();
    let mut best = vec![0i64; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (0..n).filter(|&y| p.leq(y, x)).count());
    for &x in &order {
        for y in 0..n {
            if y != x && p.leq(y, x) {
                best[x] = best[x].max(best[y] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(-1)
}

fn criterion3(rep: &CorpusReport) -> Outcome {
    let rs = by_check(rep, "radicals");
    all_pass(&rs)?;
    let mut zmods = 0;
    for r in &rs {
        let spec = size(r, "spec");
        ensure(size(r, "rd") == (1i64 << spec) - 1, || format!("|Rd| on {}", r.instance))?;
        if let Some(n) = zmod_of(&r.instance) {
            zmods += 1;
            ensure(spec == distinct_primes(n), || format!("|Spec| on {}", r.instance))?;
        }
    }
    let z30 = rs.iter().find(|r| r.instance == "Z/30").ok_or("Z/30 missing")?;
    ensure(size(z30, "rd") == 7, || "Z/30 does not give 7".into())?;
    Ok(format!("{} rings ({zmods} of the form Z/n), Z/30 -> 7", rs.len()))
}

fn criterion4(rep: &CorpusReport) -> Outcome {
    let rs = by_check(rep, "radicals");
    all_pass(&rs)?;
    let ideals: i64 = rs.iter().map(|r| size(r, "ideals")).sum();
    Ok(format!("{ideals} ideals over {} rings", rs.len()))
}

fn criterion5(rep: &CorpusReport, oracle_rings: &[RingSpec]) -> Outcome {
    let hk = by_check(rep, "hull-kernel");
    all_pass(&hk)?;
    let smod = by_check(rep, "smod");
    all_pass(&smod)?;
    for spec in oracle_rings {
        let lat = IdealLattice::new(Arc::new(spec.build().map_err(|e| e.to_string())?)).map_err(|e| e.to_string())?;
        let ideals = lat.ideals(false);
        let space = spectral_core::topo::hull_kernel_space(ideals, lat.module());
        for (i, a) in ideals.iter().enumerate() {
            for (j, b) in ideals.iter().enumerate() {
                let closure = space.closure(&spectral_core::BitSet::singleton(ideals.len(), i));
                ensure(closure.contains(j) == a.is_subset(b), || format!("order on Id({spec})"))?;
            }
        }
    }
    Ok(format!(
        "{} rings, {} modules, inclusion oracle on {} rings",
        hk.len(),
        smod.len(),
        oracle_rings.len()
    ))
}

fn criterion6(rep: &CorpusReport, posets: &BTreeMap<String, Poset>) -> Outcome {
    let hs = by_check(rep, "hyperspace");
    all_pass(&hs)?;
    ensure(hs.len() == 188, || format!("{} posets, expected 188", hs.len()))?;
    for r in &hs {
        let p = &posets[&r.instance];
        let comparable = (0..p.len()).any(|x| (0..p.len()).any(|y| x != y && p.leq(x, y)));
        ensure((size(r, "upper_vietoris_t0") == 0) == comparable, || {
            format!("upper Vietoris T0 on {}", r.instance)
        })?;
    }
    Ok(format!("{} posets", hs.len()))
}

fn criterion7(rep: &CorpusReport, oracle_rings: &[RingSpec]) -> Outcome {
    let smod = by_check(rep, "smod");
    let prime = by_check(rep, "prime-spectrum");
    all_pass(&smod)?;
    all_pass(&prime)?;
    ensure(smod.len() == prime.len(), || "smod and prime-spectrum counts differ".into())?;
    let lu = by_check(rep, "lu-topology");
    all_pass(&lu)?;
    let f2 = lu
        .iter()
        .find(|r| r.instance == "Z/2 + Z/2 over Z/2")
        .ok_or("F2 + F2 instance missing")?;
    ensure(
        size(f2, "tau_t0") == 0 && size(f2, "hk_t0") == 1 && size(f2, "primes") == 4,
        || format!("F2 + F2 sizes {:?}", f2.sizes),
    )?;
    for spec in oracle_rings {
        let ring = Arc::new(spec.build().map_err(|e| e.to_string())?);
        let lat = IdealLattice::new(ring.clone()).map_err(|e| e.to_string())?;
        let regular = SubmoduleLattice::enumerate(Arc::new(FiniteModule::regular(ring))).map_err(|e| e.to_string())?;
        let a: BTreeSet<Vec<usize>> = regular.prime_submodules().iter().map(|p| p.to_vec()).collect();
        let b: BTreeSet<Vec<usize>> = lat.spec().iter().map(|p| p.to_vec()).collect();
        ensure(a == b, || format!("Spec_R(R) differs from Spec(R) on {spec}"))?;
    }
    Ok(format!(
        "{} modules, Spec_R(R) = Spec(R) on {} rings, F2 + F2: tau not T0, hull-kernel T0",
        smod.len(),
        oracle_rings.len()
    ))
}

fn identity_table(lat: &SubmoduleLattice) -> Vec<usize> {
    (0..lat.len()).collect()
}

fn index(lat: &SubmoduleLattice, gens: &[usize]) -> usize {
    lat.index_of(&lat.module().span(gens.iter().copied())).expect("span is a member")
}

fn rejected(lat: &SubmoduleLattice, table: Vec<usize>, word: &str) -> Result<(), String> {
    match ClosureOp::new(lat, ClosureKind::Table(table)) {
        Ok(_) => Err(format!("corrupted table accepted, expected a {word} violation")),
        Err(e) if e.to_string().contains(word) => Ok(()),
        Err(e) => Err(format!("expected {word}, got {e}")),
    }
}

fn lattice_of(spec: &str) -> Result<SubmoduleLattice, String> {
    let m = parse_module(spec).map_err(|e| e.to_string())?.build().map_err(|e| e.to_string())?;
    SubmoduleLattice::enumerate(Arc::new(m)).map_err(|e| e.to_string())
}

fn criterion8(rep: &CorpusReport) -> Outcome {
    let cs = by_check(rep, "closure");
    all_pass(&cs)?;
    let small: Vec<&&ReportJson> = cs.iter().filter(|r| r.sizes.contains_key("random_tables")).collect();
    ensure(small.iter().all(|r| size(r, "random_tables") == 50), || "missing random tables".into())?;
    let radical = rep
        .reports
        .iter()
        .filter(|r| r.check == "closure" && r.sizes.contains_key("closed_radical"))
        .count();

    let chain = lattice_of("Z/4")?;
    let (zero, two, top) = (index(&chain, &[]), index(&chain, &[2]), chain.top_index());
    let mut t = identity_table(&chain);
    t[top] = zero;
    rejected(&chain, t, "extensive")?;
    let mut t = identity_table(&chain);
    t[zero] = two;
    t[two] = top;
    rejected(&chain, t, "idempotent")?;
    let square = lattice_of("Z/2 + Z/2")?;
    let m = square.module();
    let l1 = index(&square, &[m.element_from_reps(&[1, 0])]);
    let mut t = identity_table(&square);
    t[index(&square, &[])] = l1;
    rejected(&square, t, "order-preserving")?;
    Ok(format!(
        "{} modules, {} with 50 random tables, {radical} with radical; 3 corrupted tables rejected",
        cs.len(),
        small.len()
    ))
}

fn brute_preimage(f: &LinearMap, target: &spectral_core::BitSet) -> spectral_core::BitSet {
    let n = f.source().size();
    spectral_core::BitSet::from_indices(n, (0..n).filter(|&m| target.contains(f.apply(m))))
}

fn criterion9(rep: &CorpusReport) -> Outcome {
    let fs = by_check(rep, "functor");
    all_pass(&fs)?;
    let families: [&[&str]; 4] = [
        &["Z/4", "Z/2 over Z/4", "Z/4 + Z/2", "Z/2 + Z/2 over Z/4"],
        &["Z/6", "Z/2 + Z/3 over Z/6", "Z/3 over Z/6"],
        &["R over GF(2)[x]/(x^2)", "R/(x) over GF(2)[x]/(x^2)", "R + R/(x) over GF(2)[x]/(x^2)"],
        &["Z/2 + Z/2 over Z/2", "Z/2 over Z/2", "Z/2 + Z/2 + Z/2 over Z/2"],
    ];
    let mut triples = 0;
    let mut pairs_total = 0;
    for family in families {
        let lats: Vec<SubmoduleLattice> = family.iter().map(|s| lattice_of(s)).collect::<Result<_, _>>()?;
        for a in &lats {
            for b in &lats {
                let fs = LinearMap::enumerate_all(a.module(), b.module(), 4096).map_err(|e| e.to_string())?;
                for f in &fs {
                    for l in b.members() {
                        ensure(f.preimage(l) == brute_preimage(f, l), || "preimage differs from brute force".into())?;
                    }
                }
                for c in &lats {
                    let gs = LinearMap::enumerate_all(b.module(), c.module(), 4096).map_err(|e| e.to_string())?;
                    let pairs: Vec<(usize, usize)> =
                        (0..fs.len()).flat_map(|i| (0..gs.len()).map(move |j| (i, j))).collect();
                    let (h1, h2, h3) = (HkLattice::new(a), HkLattice::new(b), HkLattice::new(c));
                    let r = verify_functor_family(&h1, &h2, &h3, &fs, &gs, &pairs, "family")
                        .map_err(|e| e.to_string())?;
                    ensure(r.passed, || format!("functor fails: {:?}", r.witness))?;
                    triples += 1;
                    pairs_total += pairs.len();
                }
            }
        }
    }
    Ok(format!(
        "{} modules (endomorphisms), {triples} cross-module triples with {pairs_total} composition pairs",
        fs.len()
    ))
}

/// Opens generated from the sub-basis by closing under finite unions and
/// intersections, as bit masks.
fn generated_opens(space: &FinSpace) -> BTreeSet<u32> {
    let n = space.len();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut opens: BTreeSet<u32> = BTreeSet::from([0, full]);
    opens.extend(space.subbasis().iter().map(|s| s.iter().fold(0u32, |m, i| m | 1 << i)));
    loop {
        let cur: Vec<u32> = opens.iter().copied().collect();
        let before = opens.len();
        for &a in &cur {
            for &b in &cur {
                opens.insert(a | b);
                opens.insert(a & b);
            }
        }
        if opens.len() == before {
            return opens;
        }
    }
}

/// Down-sets of `x ≤ y iff every open containing y contains x`.
fn preorder_opens(space: &FinSpace, opens: &BTreeSet<u32>) -> BTreeSet<u32> {
    let n = space.len();
    let leq = |x: usize, y: usize| opens.iter().all(|&u| u >> y & 1 == 0 || u >> x & 1 == 1);
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|y| s >> y & 1 == 0 || (0..n).all(|x| !leq(x, y) || s >> x & 1 == 1)))
        .collect()
}

fn alexandrov_agrees(space: &FinSpace) -> Result<(), String> {
    let explicit = generated_opens(space);
    let derived = preorder_opens(space, &explicit);
    ensure(explicit == derived, || "explicit opens differ from down-sets".into())?;
    let lib: BTreeSet<u32> = space
        .opens_from_preorder()
        .map_err(|e| e.to_string())?
        .iter()
        .map(|s| s.iter().fold(0u32, |m, i| m | 1 << i))
        .collect();
    ensure(lib == explicit, || "library opens differ from explicit opens".into())
}

fn criterion10(first: &str, cfg: &CorpusConfig, insts: &[Instance]) -> Outcome {
    let second = run_json(cfg)?;
    ensure(first.as_bytes() == second.as_bytes(), || "corpus JSON differs between runs".into())?;
    let opts = RunOptions::default();
    let mut spaces = 0;
    for inst in insts {
        if let Instance::Module(spec) = inst {
            if spec.build().map_err(|e| e.to_string())?.size() > 16 {
                continue;
            }
        }
        for name in export::space_names(inst) {
            let space = match export::build_space(inst, name, &opts) {
                Ok(s) => s,
                Err(_) => continue,
            };
            if space.len() > 12 {
                continue;
            }
            alexandrov_agrees(&space).map_err(|e| format!("{} {name}: {e}", inst.id()))?;
            spaces += 1;
        }
    }
    Ok(format!("{} bytes identical, Alexandrov oracle on {spaces} spaces", first.len()))
}

fn run_json(cfg: &CorpusConfig) -> Result<String, String> {
    let rep = corpus::run_corpus(cfg, &RunOptions::default(), jobs()).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&rep).map_err(|e| e.to_string())
}

fn main() {
    let cfg = CorpusConfig::default();
    let insts = corpus::instances(&cfg).expect("corpus builds");
    let first = run_json(&cfg).expect("corpus runs");
    let rep: CorpusReport = serde_json::from_str(&first).expect("report parses");
    let rings: Vec<RingSpec> = insts
        .iter()
        .filter_map(|i| match i {
            Instance::Ring(s) => Some(s.clone()),
            _ => None,
        })
        .collect();
    let posets: BTreeMap<String, Poset> = corpus::poset_corpus(&cfg)
        .expect("posets build")
        .into_iter()
        .map(|p| (poset_id(&p), p))
        .collect();
    let oracle_rings: Vec<RingSpec> = ["Z/1", "Z/12", "Z/30", "Z/60", "Z/2 x Z/4", "GF(2)[x]/(x^2) x Z/3", "Z/2 x Z/2 x Z/2"]
        .iter()
        .map(|s| parse_ring(s).expect("ring parses"))
        .collect();

    let results: Vec<(&str, Outcome)> = vec![
        ("1 nullstellensatz", criterion1(&rep, &rings)),
        ("2 dimension formula", criterion2(&rep, &posets)),
        ("3 cardinality of Rd", criterion3(&rep)),
        ("4 radical agreement", criterion4(&rep)),
        ("5 hull-kernel order", criterion5(&rep, &oracle_rings)),
        ("6 hyperspace suite", criterion6(&rep, &posets)),
        ("7 module spectra", criterion7(&rep, &oracle_rings)),
        ("8 closure operations", criterion8(&rep)),
        ("9 functoriality", criterion9(&rep)),
        ("10 determinism", criterion10(&first, &cfg, &insts)),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("corpus: {} instances, {} checks, {} failed", rep.instances, rep.checks, rep.failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
