//! One checker per theorem. Each returns a [`CheckReport`] whose witness
//! names the offending points, submodules or open sets.
//!
//! Finite spaces carry only principal ultrafilters, so every verdict here is
//! an instance verification.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::finring::Ring;
use crate::hyper::{
    check_basis_law, closed_set_label, j_map, lower_vietoris, lower_vietoris_with_limit, upper_vietoris, v_map,
    zariski_hyperspace, zariski_hyperspace_with_limit, PhiPrime, HYPERSPACE_BASE_LIMIT,
};
use crate::modlat::{
    power_radical, ClosureKind, ClosureOp, Ideal, IdealLattice, LinearMap, Submodule, SubmoduleLattice,
};
use crate::report::CheckReport;
use crate::topo::{hull_kernel_space, inclusion_preorder, FinSpace, Poset, Preorder, SpaceMap, EXPLICIT_OPEN_LIMIT};

/// Posets larger than this are refused by the hyperspace suite.
pub const HYPERSPACE_SUITE_LIMIT: usize = 8;

/// What kind of instance a checker consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Ring,
    Module,
    Poset,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Ring => "ring",
            Target::Module => "module",
            Target::Poset => "poset",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckerInfo {
    pub name: &'static str,
    pub target: Target,
    pub summary: &'static str,
}

pub const CHECKERS: &[CheckerInfo] = &[
    CheckerInfo {
        name: "nullstellensatz",
        target: Target::Ring,
        summary: "J is a homeomorphism X'(Spec R)^zar -> Rd(R)^inv and X'^inv -> Rd(R)^hk; V and J are inverse",
    },
    CheckerInfo {
        name: "dimension",
        target: Target::Ring,
        summary: "dim Rd(R) = |Spec R| - 1 >= dim Spec R, with the minimal-element radical chain",
    },
    CheckerInfo {
        name: "radicals",
        target: Target::Ring,
        summary: "power radical equals the meet of containing primes; |Rd(R)| = 2^|Spec R| - 1",
    },
    CheckerInfo {
        name: "hull-kernel",
        target: Target::Ring,
        summary: "hull-kernel order is inclusion on Id, Id*, Rd, Spec; hull-kernel equals Zariski on Spec",
    },
    CheckerInfo {
        name: "topology",
        target: Target::Ring,
        summary: "Alexandrov soundness and finite-space sanity on Spec, Id and Rd",
    },
    CheckerInfo {
        name: "smod",
        target: Target::Module,
        summary: "SMod(M|R) and SMod without M are spectral, ordered by inclusion, with N_U = N",
    },
    CheckerInfo {
        name: "prime-spectrum",
        target: Target::Module,
        summary: "Spec_R(M) and Spec_R(M) with M are spectral; Spec_R(R) = Spec R; free-module cover pattern",
    },
    CheckerInfo {
        name: "closure",
        target: Target::Module,
        summary: "SMod^c is spectral and constructible-closed for radical, identity and constant closures",
    },
    CheckerInfo {
        name: "functor",
        target: Target::Module,
        summary: "SMod(f) is a spectral map; preimage identity and contravariance over all endomorphism pairs",
    },
    CheckerInfo {
        name: "idealization",
        target: Target::Module,
        summary: "ideals of R x M between 0 and 0 x M are homeomorphic to SMod(M|R)",
    },
    CheckerInfo {
        name: "lu-topology",
        target: Target::Module,
        summary: "the colon topology on Spec_R(M) is coarser than hull-kernel and T0 iff P -> (P:M) is injective",
    },
    CheckerInfo {
        name: "hyperspace",
        target: Target::Poset,
        summary: "lower Vietoris is inverse Zariski, phi' embeds, upper Vietoris T0 iff antichain, identity composite",
    },
    CheckerInfo {
        name: "hyper-dimension",
        target: Target::Poset,
        summary: "dim X'(P) = |P| - 1 >= dim P, equality on chains, with the minimal-element closed chain",
    },
    CheckerInfo {
        name: "poset-topology",
        target: Target::Poset,
        summary: "Alexandrov soundness, sobriety and inverse duality on the poset space and its hyperspace",
    },
];

pub fn checker(name: &str) -> Option<&'static CheckerInfo> {
    CHECKERS.iter().find(|c| c.name == name)
}

pub fn checkers_for(target: Target) -> impl Iterator<Item = &'static CheckerInfo> {
    CHECKERS.iter().filter(move |c| c.target == target)
}

fn relabel(mut r: CheckReport, instance: &str) -> CheckReport {
    r.instance = instance.to_string();
    r
}

fn preorders_equal(a: &Preorder, b: &Preorder) -> Option<(usize, usize)> {
    let n = a.len();
    (0..n).find_map(|x| (0..n).find(|&y| a.leq(x, y) != b.leq(x, y)).map(|y| (x, y)))
}

fn require_order(r: &mut CheckReport, what: &str, space: &FinSpace, expected: &Preorder) -> bool {
    match preorders_equal(space.specialization_preorder(), expected) {
        None => true,
        Some((x, y)) => {
            r.fail(
                format!("{what}: specialization order differs from inclusion"),
                [space.label(x).to_string(), space.label(y).to_string()],
            );
            false
        }
    }
}

fn require_spectral(r: &mut CheckReport, what: &str, space: &FinSpace) -> bool {
    let mut s = space.is_spectral();
    s.check = format!("{what} spectral");
    r.absorb(&s)
}

fn index_map(family: &[BitSet], images: impl Iterator<Item = BitSet>) -> Option<Vec<usize>> {
    images.map(|x| family.binary_search(&x).ok()).collect()
}

/// Proper radical ideals, recomputed from the power radical alone.
fn radical_ideals(lat: &IdealLattice) -> Vec<Ideal> {
    let ring = lat.ring();
    lat.ideals(true)
        .iter()
        .filter(|i| power_radical(ring, i) == **i)
        .cloned()
        .collect()
}

fn rd_space(lat: &IdealLattice, rd: &[Ideal]) -> FinSpace {
    hull_kernel_space(rd, lat.module())
}

/// The theorem identifying `X′(Spec R)` with `Rd(R)` through `J`.
pub fn verify_nullstellensatz(lat: &IdealLattice, instance: &str) -> Result<CheckReport> {
    verify_nullstellensatz_with_limit(lat, HYPERSPACE_BASE_LIMIT, instance)
}

pub fn verify_nullstellensatz_with_limit(lat: &IdealLattice, limit: usize, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("nullstellensatz", instance);
    let spec = lat.spec();
    if spec.len() > limit {
        return Err(Error::Resource {
            what: "prime ideals for the hyperspace",
            size: spec.len(),
            limit,
        });
    }
    let base = hull_kernel_space(spec, lat.module());
    let hyper = zariski_hyperspace_with_limit(&base, limit)?;
    let rd = radical_ideals(lat);
    let rd_hk = rd_space(lat, &rd);
    let rd_inv = rd_hk.inverse_space()?;
    r.size("spec", spec.len());
    r.size("hyperspace", hyper.points.len());
    r.size("rd", rd.len());

    let mut image = Vec::with_capacity(hyper.points.len());
    for c in &hyper.points {
        let h = j_map(lat, c)?;
        match rd.binary_search(&h) {
            Ok(k) => image.push(k),
            Err(_) => {
                r.fail(
                    "J(C) is not a proper radical ideal",
                    [closed_set_label(&base, c), lat.label(&h)],
                );
                return Ok(r);
            }
        }
    }
    if image.len() != rd.len() {
        r.fail(
            "X' and Rd have different sizes",
            [format!("{}", image.len()), format!("{}", rd.len())],
        );
        return Ok(r);
    }

    let zar_to_inv = SpaceMap::new(&hyper.space, &rd_inv, image.clone())?;
    let mut h1 = zar_to_inv.check_homeo();
    h1.check = "J zariski->inverse".into();
    r.absorb(&h1);
    let hyper_inv = hyper.space.inverse_space()?;
    let inv_to_hk = SpaceMap::new(&hyper_inv, &rd_hk, image.clone())?;
    let mut h2 = inv_to_hk.check_homeo();
    h2.check = "J inverse->hull-kernel".into();
    r.absorb(&h2);
    require_spectral(&mut r, "X'", &hyper.space);

    for c in &hyper.points {
        let back = v_map(lat, &j_map(lat, c)?);
        if !r.require(back == *c, || {
            ("V(J(C)) differs from C".into(), alloc::vec![closed_set_label(&base, c)])
        }) {
            break;
        }
    }
    for h in &rd {
        let c = v_map(lat, h);
        let ok = !c.is_empty() && j_map(lat, &c)? == *h;
        if !r.require(ok, || ("J(V(H)) differs from H".into(), alloc::vec![lat.label(h)])) {
            break;
        }
    }

    // lower Vietoris -> Rd^hk is the same bijection, and pulls D(I) back to D(I)⁻
    let low = lower_vietoris_with_limit(&base, limit)?;
    let mut h3 = SpaceMap::new(&low.space, &rd_hk, image.clone())?.check_homeo();
    h3.check = "J lower-vietoris->hull-kernel".into();
    r.absorb(&h3);
    for i in lat.ideals(false) {
        let d_rd = BitSet::from_indices(rd.len(), (0..rd.len()).filter(|&k| !i.is_subset(&rd[k])));
        let pulled = BitSet::from_indices(image.len(), (0..image.len()).filter(|&p| d_rd.contains(image[p])));
        let d_spec: BitSet = BitSet::from_indices(spec.len(), (0..spec.len()).filter(|&q| !i.is_subset(&spec[q])));
        let hits = BitSet::from_indices(
            hyper.points.len(),
            (0..hyper.points.len()).filter(|&p| hyper.points[p].intersects(&d_spec)),
        );
        if !r.require(pulled == hits, || {
            ("preimage of D(I) under J is not D(I)^-".into(), alloc::vec![lat.label(i)])
        }) {
            break;
        }
    }
    Ok(r)
}

/// Iterated minimal elements `P_n, P_{n−1}, …, P_1` of a preordered point set,
/// returned in the order `P_1, …, P_n`.
fn minimal_element_sequence(order: &Preorder) -> Vec<usize> {
    let n = order.len();
    let mut remaining = BitSet::full(n);
    let mut picked = Vec::with_capacity(n);
    while let Some(m) = remaining
        .iter()
        .find(|&x| remaining.iter().all(|y| y == x || !order.leq(y, x) || order.leq(x, y)))
    {
        picked.push(m);
        remaining.remove(m);
    }
    picked.reverse();
    picked
}

/// `dim Rd(R) = |Spec R| − 1 ≥ dim Spec R`, equality when Spec is a chain,
/// and the chain `H_n ⊊ … ⊊ H_1` built from iterated minimal primes.
pub fn verify_dimension(lat: &IdealLattice, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("dimension", instance);
    let spec = lat.spec();
    let spec_space = hull_kernel_space(spec, lat.module());
    let rd = radical_ideals(lat);
    let rd_hk = rd_space(lat, &rd);
    let n = spec.len() as i64;
    let dim_rd = rd_hk.dimension();
    let dim_spec = spec_space.dimension();
    r.size("spec", n);
    r.size("dim_rd", dim_rd);
    r.size("dim_spec", dim_spec);
    r.require(dim_rd == n - 1, || {
        ("dim Rd(R) differs from |Spec R| - 1".into(), alloc::vec![format!("{dim_rd}"), format!("{}", n - 1)])
    });
    r.require(n - 1 >= dim_spec, || {
        ("|Spec R| - 1 is below dim Spec R".into(), alloc::vec![format!("{}", n - 1), format!("{dim_spec}")])
    });
    if spec_space.specialization_preorder().is_total() {
        r.require(dim_rd == dim_spec, || {
            ("Spec is a chain but dim Rd differs from dim Spec".into(), alloc::vec![format!("{dim_rd}"), format!("{dim_spec}")])
        });
    }

    let seq = minimal_element_sequence(spec_space.specialization_preorder());
    let mut chain: Vec<Ideal> = Vec::with_capacity(seq.len());
    let mut acc = BitSet::full(lat.ring().size());
    for &p in &seq {
        acc.intersect_with(&spec[p]);
        chain.push(acc.clone());
    }
    for (i, h) in chain.iter().enumerate() {
        if !r.require(rd.binary_search(h).is_ok(), || {
            ("chain member is not a proper radical ideal".into(), alloc::vec![lat.label(h)])
        }) {
            break;
        }
        if i > 0 && !r.require(h.is_subset(&chain[i - 1]) && *h != chain[i - 1], || {
            ("minimal-element chain is not strictly decreasing".into(), alloc::vec![lat.label(&chain[i - 1]), lat.label(h)])
        }) {
            break;
        }
    }
    r.size("chain_length", chain.len() as i64 - 1);
    r.require(chain.len() as i64 - 1 == n - 1, || {
        ("minimal-element chain has the wrong length".into(), alloc::vec![format!("{}", chain.len())])
    });
    Ok(r)
}

/// Power-membership radical against the meet of containing primes, and the
/// count of radical ideals.
pub fn verify_radicals(lat: &IdealLattice, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("radicals", instance);
    let ring = lat.ring();
    for i in lat.ideals(false) {
        let a = power_radical(ring, i);
        let b = lat.primes_radical(i);
        if !r.require(a == b, || {
            ("power radical differs from the meet of containing primes".into(), alloc::vec![lat.label(i), lat.label(&a), lat.label(&b)])
        }) {
            break;
        }
    }
    let rd = radical_ideals(lat);
    let primes = lat.spec().len();
    r.size("ideals", lat.ideals(false).len());
    r.size("spec", primes);
    r.size("rd", rd.len());
    let expected = if primes < 63 { (1i64 << primes) - 1 } else { i64::MAX };
    r.require(rd.len() as i64 == expected, || {
        ("|Rd(R)| differs from 2^|Spec R| - 1".into(), alloc::vec![format!("{}", rd.len()), format!("{expected}")])
    });
    for h in &rd {
        if !r.require(lat.primes_radical(h) == *h, || {
            ("radical ideal is not a meet of primes".into(), alloc::vec![lat.label(h)])
        }) {
            break;
        }
    }
    Ok(r)
}

/// Hull-kernel order equals inclusion on `Id`, `Id•`, `Rd`, `Spec`, and the
/// hull-kernel topology on `Spec` is the Zariski topology.
pub fn verify_spec_hk_equals_zariski(lat: &IdealLattice, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("hull-kernel", instance);
    let rd = radical_ideals(lat);
    let families: [(&str, &[Ideal]); 4] = [
        ("Id", lat.ideals(false)),
        ("Id*", lat.ideals(true)),
        ("Rd", &rd),
        ("Spec", lat.spec()),
    ];
    for (what, family) in families {
        let space = hull_kernel_space(family, lat.module());
        require_order(&mut r, what, &space, &inclusion_preorder(family));
        require_spectral(&mut r, what, &space);
    }
    let spec = lat.spec();
    let hk = hull_kernel_space(spec, lat.module());
    let zariski_subbasis = lat
        .ideals(false)
        .iter()
        .map(|i| BitSet::from_indices(spec.len(), (0..spec.len()).filter(|&p| !i.is_subset(&spec[p]))))
        .collect();
    let zariski = FinSpace::new(hk.labels().to_vec(), zariski_subbasis)?;
    if let Some((x, y)) = preorders_equal(hk.specialization_preorder(), zariski.specialization_preorder()) {
        r.fail("hull-kernel and Zariski orders differ on Spec", [hk.label(x), hk.label(y)]);
    }
    r.size("ideals", lat.ideals(false).len());
    r.size("spec", spec.len());
    r.size("rd", rd.len());
    Ok(r)
}

/// Finite-space sanity for one space: explicit topology equals the down-sets
/// of the preorder (up to the explicit-open limit), subbasic opens are
/// quasi-compact, `{x}^gen` is the meet of opens around `x`, `Cl = sp`,
/// sobriety matches `↑x`, and inverse is an involution on T0 spaces.
pub fn verify_space(space: &FinSpace, what: &str, r: &mut CheckReport) -> Result<()> {
    let n = space.len();
    if n <= EXPLICIT_OPEN_LIMIT {
        let explicit = space.generated_opens()?;
        let derived = space.opens_from_preorder()?;
        if explicit != derived {
            let bad = explicit
                .iter()
                .find(|u| derived.binary_search(u).is_err())
                .or_else(|| derived.iter().find(|u| explicit.binary_search(u).is_err()));
            let items: Vec<String> = bad.map(|u| u.iter().map(|x| space.label(x).to_string()).collect()).unwrap_or_default();
            r.fail(format!("{what}: generated opens differ from down-sets"), items);
            return Ok(());
        }
    }
    for s in space.subbasis() {
        if !space.is_quasi_compact(s) {
            r.fail(format!("{what}: subbasic open is not quasi-compact"), s.iter().map(|x| space.label(x).to_string()));
            return Ok(());
        }
    }
    let fixpoints = space.ultrafilter_fixpoint_sets();
    for x in 0..n {
        let single = BitSet::singleton(n, x);
        if space.generization(&single) != space.smallest_open(x) {
            r.fail(format!("{what}: generization differs from the meet of opens"), [space.label(x)]);
            return Ok(());
        }
        if space.closure(&single) != space.specialization(&single) {
            r.fail(format!("{what}: closure differs from specialization"), [space.label(x)]);
            return Ok(());
        }
        if !fixpoints[x].contains(x) || (n <= 64 && fixpoints[x] != space.ultrafilter_fixpoints(x)) {
            r.fail(format!("{what}: ultrafilter limit set misses its centre"), [space.label(x)]);
            return Ok(());
        }
    }
    if space.is_t0().passed {
        let inv = space.inverse_space()?;
        if preorders_equal(inv.specialization_preorder(), &space.specialization_preorder().opposite()).is_some() {
            r.fail(format!("{what}: inverse topology does not reverse the order"), Vec::<String>::new());
            return Ok(());
        }
        let back = inv.inverse_space()?;
        if preorders_equal(back.specialization_preorder(), space.specialization_preorder()).is_some() {
            r.fail(format!("{what}: double inverse changes the order"), Vec::<String>::new());
            return Ok(());
        }
        let principal: Vec<BitSet> = space.irreducible_closed_sets();
        if n <= EXPLICIT_OPEN_LIMIT {
            let exhaustive = space.irreducible_closed_sets_exhaustive()?;
            if exhaustive != principal {
                r.fail(format!("{what}: irreducible closed sets are not the principal up-sets"), Vec::<String>::new());
                return Ok(());
            }
        }
        for x in 0..n {
            let c = space.constructible_closed(&BitSet::singleton(n, x));
            if !c.passed {
                r.fail(format!("{what}: point is not constructible-closed"), [space.label(x)]);
                return Ok(());
            }
        }
    }
    Ok(())
}

/// [`verify_space`] over `Spec`, `Id` and `Rd` of a ring.
pub fn verify_ring_topology(lat: &IdealLattice, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("topology", instance);
    let rd = radical_ideals(lat);
    let spaces = [
        ("Spec", hull_kernel_space(lat.spec(), lat.module())),
        ("Id", hull_kernel_space(lat.ideals(false), lat.module())),
        ("Rd", rd_space(lat, &rd)),
    ];
    for (what, space) in &spaces {
        r.size(what, space.len());
        verify_space(space, what, &mut r)?;
    }
    Ok(r)
}

/// `SMod(M|R)` and `SMod•(M|R)` are spectral with the inclusion order, and
/// `N_𝒰 = N` for the principal ultrafilter at each `N`.
pub fn verify_smod_spectral(lattice: &SubmoduleLattice, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("smod", instance);
    let module = lattice.module();
    let members = lattice.members();
    r.size("module", module.size());
    r.size("submodules", members.len());
    if lattice.verify_lattice().is_err() {
        r.fail("submodule list is not closed under meet and sum", Vec::<String>::new());
    }
    let space = hull_kernel_space(members, module);
    require_order(&mut r, "SMod", &space, &inclusion_preorder(members));
    require_spectral(&mut r, "SMod", &space);
    let proper = &members[..members.len() - 1];
    let proper_space = hull_kernel_space(proper, module);
    require_order(&mut r, "SMod*", &proper_space, &inclusion_preorder(proper));
    require_spectral(&mut r, "SMod*", &proper_space);

    // V(y) as a subset of the family, for every y in M
    let hulls: Vec<BitSet> = (0..module.size())
        .map(|y| BitSet::from_indices(members.len(), (0..members.len()).filter(|&i| members[i].contains(y))))
        .collect();
    let fixpoints = space.ultrafilter_fixpoint_sets();
    for (i, n) in members.iter().enumerate() {
        let n_u = BitSet::from_indices(module.size(), (0..module.size()).filter(|&y| hulls[y].contains(i)));
        if !r.require(n_u == *n, || {
            ("ultrafilter submodule differs from its centre".into(), alloc::vec![module.submodule_label(n)])
        }) {
            break;
        }
        let fix = &fixpoints[i];
        if !r.require(*fix == BitSet::singleton(members.len(), i), || {
            ("ultrafilter limit is not the single centre".into(), alloc::vec![module.submodule_label(n)])
        }) {
            break;
        }
    }
    Ok(r)
}

/// `Spec_R(M) ∪ {M}` and `Spec_R(M)` are spectral; `Spec_R(R) = Spec(R)`;
/// on a free module no proper subfamily of `D(e_j)` covers `Spec_R(M)`.
pub fn verify_prime_spectrum(lattice: &SubmoduleLattice, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("prime-spectrum", instance);
    let module = lattice.module();
    let primes = lattice.prime_submodules();
    r.size("primes", primes.len());
    let mut with_top = primes.clone();
    with_top.push(module.top());
    with_top.sort();
    with_top.dedup();
    for (what, family) in [("Spec_R(M)", &primes), ("Spec_R(M)+M", &with_top)] {
        let space = hull_kernel_space(family, module);
        require_order(&mut r, what, &space, &inclusion_preorder(family));
        require_spectral(&mut r, what, &space);
        let qc = space.is_quasi_compact(&BitSet::full(space.len()));
        r.require(qc == space.is_spectral().passed, || {
            (format!("{what}: spectral verdict differs from quasi-compactness"), Vec::new())
        });
    }
    if module.is_regular() {
        let ring = module.ring();
        let ring_primes: Vec<Ideal> = lattice
            .members()
            .iter()
            .filter(|p| crate::modlat::is_prime_ideal(ring, p))
            .cloned()
            .collect();
        if primes != ring_primes {
            let odd = primes
                .iter()
                .find(|p| !ring_primes.contains(p))
                .or_else(|| ring_primes.iter().find(|p| !primes.contains(p)));
            r.fail(
                "prime submodules of R differ from Spec R",
                odd.map(|p| module.submodule_label(p)),
            );
        }
    }
    let free = module.annihilators().iter().all(|a| a.len() == 1);
    if free && !module.ring().is_zero_ring() && module.num_summands() > 0 {
        let gens = module.generators();
        let covered = primes.iter().all(|p| gens.iter().any(|&e| !p.contains(e)));
        r.require(covered, || ("the D(e_j) do not cover Spec_R(M)".into(), Vec::new()));
        for (j, &ej) in gens.iter().enumerate() {
            let others: Vec<usize> = gens.iter().copied().filter(|&e| e != ej).collect();
            let avoided = primes.iter().any(|p| others.iter().all(|&e| p.contains(e)));
            if !r.require(avoided, || {
                ("dropping one D(e_j) still covers Spec_R(M)".into(), alloc::vec![format!("e{}", j + 1)])
            }) {
                break;
            }
        }
        r.size("free_rank", gens.len());
    }
    Ok(r)
}

/// `SMod^c(M|R)` and `SMod•^c(M|R)` are spectral, and `SMod^c` is closed in
/// the constructible topology of `SMod(M|R)`.
pub fn verify_closure_space(lattice: &SubmoduleLattice, op: &ClosureOp, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("closure", instance);
    let module = lattice.module();
    let members = lattice.members();
    let fixed = op.closed_submodules();
    r.size("submodules", members.len());
    r.size("closed", fixed.len());
    if let Err(e) = op.check_finite_type(lattice) {
        r.fail(format!("closure is not of finite type: {e}"), Vec::<String>::new());
    }
    r.require(fixed.contains(&lattice.top_index()), || ("M is not closed".into(), Vec::new()));
    let family: Vec<Submodule> = fixed.iter().map(|&i| members[i].clone()).collect();
    let space = hull_kernel_space(&family, module);
    require_order(&mut r, "SMod^c", &space, &inclusion_preorder(&family));
    require_spectral(&mut r, "SMod^c", &space);
    let proper: Vec<Submodule> = family.iter().filter(|n| !n.is_full()).cloned().collect();
    require_spectral(&mut r, "SMod*^c", &hull_kernel_space(&proper, module));
    let ambient = hull_kernel_space(members, module);
    let y = BitSet::from_indices(members.len(), fixed.iter().copied());
    let cons = relabel(ambient.constructible_closed(&y), instance);
    r.absorb(&cons);
    Ok(r)
}

/// The built-in closures applicable to a lattice: identity, constant `M`,
/// and the radical when the module is the ring itself.
pub fn builtin_closures(lattice: &SubmoduleLattice) -> Result<Vec<ClosureOp>> {
    let mut out = alloc::vec![
        ClosureOp::new(lattice, ClosureKind::Identity)?,
        ClosureOp::new(lattice, ClosureKind::Top)?,
    ];
    if lattice.module().is_regular() {
        out.push(ClosureOp::new(lattice, ClosureKind::Radical)?);
    }
    Ok(out)
}

/// Runs [`verify_closure_space`] for every built-in closure.
pub fn verify_builtin_closures(lattice: &SubmoduleLattice, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("closure", instance);
    for op in builtin_closures(lattice)? {
        let mut sub = verify_closure_space(lattice, &op, instance)?;
        sub.check = format!("closure {}", closure_name(op.kind()));
        r.absorb(&sub);
        r.size(&format!("closed_{}", closure_name(op.kind())), sub.sizes.get("closed").copied().unwrap_or(0));
    }
    r.size("submodules", lattice.len());
    Ok(r)
}

pub fn closure_name(kind: &ClosureKind) -> &'static str {
    match kind {
        ClosureKind::Radical => "radical",
        ClosureKind::Identity => "identity",
        ClosureKind::Top => "constant",
        ClosureKind::Table(_) => "table",
    }
}

/// A submodule lattice with its hull-kernel space and the hulls `V(x)`.
pub struct HkLattice<'a> {
    pub lattice: &'a SubmoduleLattice,
    pub space: FinSpace,
    hulls: Vec<BitSet>,
}

impl<'a> HkLattice<'a> {
    pub fn new(lattice: &'a SubmoduleLattice) -> HkLattice<'a> {
        let members = lattice.members();
        let space = hull_kernel_space(members, lattice.module());
        let hulls = (0..lattice.module().size())
            .map(|x| BitSet::from_indices(members.len(), (0..members.len()).filter(|&i| members[i].contains(x))))
            .collect();
        HkLattice { lattice, space, hulls }
    }

    /// `V(x₁,…,xₘ)` as a set of lattice indices.
    pub fn hull(&self, xs: &[usize]) -> BitSet {
        let mut acc = BitSet::full(self.lattice.len());
        for &x in xs {
            acc.intersect_with(&self.hulls[x]);
        }
        acc
    }
}

/// Single-map half of the functor checks for `f : M₁ → M₂`: `SMod(f)` is a
/// spectral map `SMod(M₂) → SMod(M₁)` and
/// `SMod(f)⁻¹(V(x₁,…,xₘ)) = V(f(x₁),…,f(xₘ))` for every tuple of length one,
/// and of length two when `|M₁| ≤ 16`. Returns `SMod(f)` as an index map.
pub fn verify_smod_map(f: &LinearMap, h1: &HkLattice<'_>, h2: &HkLattice<'_>, r: &mut CheckReport) -> Result<Vec<usize>> {
    let smod_f = f.smod_functor(h1.lattice, h2.lattice)?;
    let mut sm = SpaceMap::new(&h2.space, &h1.space, smod_f.clone())?.check_spectral_map();
    sm.check = "SMod(f)".into();
    if !r.absorb(&sm) {
        return Ok(smod_f);
    }
    let m1 = h1.lattice.module();
    let n = m1.size();
    let pairs = n <= 16;
    for a in 0..n {
        for b in a..if pairs { n } else { a + 1 } {
            let xs = [a, b];
            let v = h1.hull(&xs);
            let pre = BitSet::from_indices(h2.lattice.len(), (0..h2.lattice.len()).filter(|&i| v.contains(smod_f[i])));
            if !r.require(pre == h2.hull(&[f.apply(a), f.apply(b)]), || {
                (
                    "preimage of V(x) under SMod(f) differs from V(f(x))".into(),
                    alloc::vec![m1.element_name(a), m1.element_name(b)],
                )
            }) {
                return Ok(smod_f);
            }
        }
    }
    Ok(smod_f)
}

/// First submodule `L` of `M₃` where `(g∘f)⁻¹(L)` differs from
/// `SMod(f)(SMod(g)(L))`, compared pointwise without building `g∘f`.
pub fn composition_violation(
    f: &LinearMap,
    g: &LinearMap,
    smod_f: &[usize],
    smod_g: &[usize],
    l1: &SubmoduleLattice,
    l3: &SubmoduleLattice,
) -> Option<usize> {
    let n = f.source().size();
    (0..l3.len()).find(|&k| {
        let target = &l3.members()[k];
        let via = &l1.members()[smod_f[smod_g[k]]];
        (0..n).any(|m| target.contains(g.apply(f.apply(m))) != via.contains(m))
    })
}

fn identity_law(h: &HkLattice<'_>, r: &mut CheckReport) -> Result<()> {
    let id = LinearMap::identity(h.lattice.module().clone());
    let smod_id = id.smod_functor(h.lattice, h.lattice)?;
    r.require(smod_id.iter().enumerate().all(|(i, &j)| i == j), || {
        ("SMod(id) is not the identity".into(), Vec::new())
    });
    Ok(())
}

/// Lattices for the three modules in `M₁ →f M₂ →g M₃`.
pub struct FunctorLattices<'a> {
    pub first: &'a SubmoduleLattice,
    pub second: &'a SubmoduleLattice,
    pub third: &'a SubmoduleLattice,
}

/// `SMod(f)` and `SMod(g)` are spectral maps satisfying the preimage
/// identity, `SMod(g∘f) = SMod(f)∘SMod(g)`, and `SMod(id) = id`.
pub fn verify_functor(f: &LinearMap, g: &LinearMap, lats: &FunctorLattices<'_>, instance: &str) -> Result<CheckReport> {
    let (h1, h2, h3) = (HkLattice::new(lats.first), HkLattice::new(lats.second), HkLattice::new(lats.third));
    verify_functor_family(&h1, &h2, &h3, core::slice::from_ref(f), core::slice::from_ref(g), &[(0, 0)], instance)
}

/// Functor checks over families `fs : M₁ → M₂` and `gs : M₂ → M₃`: every
/// map gets the single-map checks, and composition is tested on `pairs`
/// (indices into `fs` and `gs`). Composition is also cross-checked against
/// an explicitly built `g∘f` on the first pair.
pub fn verify_functor_family(
    h1: &HkLattice<'_>,
    h2: &HkLattice<'_>,
    h3: &HkLattice<'_>,
    fs: &[LinearMap],
    gs: &[LinearMap],
    pairs: &[(usize, usize)],
    instance: &str,
) -> Result<CheckReport> {
    let mut r = CheckReport::new("functor", instance);
    r.size("maps", fs.len() + gs.len());
    r.size("pairs", pairs.len());
    let mut smod_fs = Vec::with_capacity(fs.len());
    for f in fs {
        smod_fs.push(verify_smod_map(f, h1, h2, &mut r)?);
    }
    let mut smod_gs = Vec::with_capacity(gs.len());
    for g in gs {
        smod_gs.push(verify_smod_map(g, h2, h3, &mut r)?);
    }
    if !r.passed {
        return Ok(r);
    }
    for &(i, j) in pairs {
        if let Some(k) = composition_violation(&fs[i], &gs[j], &smod_fs[i], &smod_gs[j], h1.lattice, h3.lattice) {
            let l3 = h3.lattice;
            r.fail(
                "SMod(g f) differs from SMod(f) SMod(g)",
                [l3.module().submodule_label(&l3.members()[k])],
            );
            return Ok(r);
        }
    }
    if let Some(&(i, j)) = pairs.first() {
        let gf = fs[i].then(&gs[j])?;
        let direct = gf.smod_functor(h1.lattice, h3.lattice)?;
        let composed: Vec<usize> = smod_gs[j].iter().map(|&k| smod_fs[i][k]).collect();
        r.require(direct == composed, || ("SMod(g f) differs from SMod(f) SMod(g)".into(), Vec::new()));
    }
    identity_law(h1, &mut r)?;
    identity_law(h2, &mut r)?;
    Ok(r)
}

/// `Id((0⋉M, 0) | R⋉M)` with its hull-kernel topology is homeomorphic to
/// `SMod(M|R)` via `N ↦ 0⋉N`.
pub fn verify_idealization(lattice: &SubmoduleLattice, limit: usize, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("idealization", instance);
    let module = lattice.module().clone();
    let m = module.size();
    let ring_size = module.ring().size().saturating_mul(m);
    if ring_size > limit {
        return Err(Error::Resource {
            what: "idealization ring size",
            size: ring_size,
            limit,
        });
    }
    let ideal_ring = Arc::new(Ring::idealization(module.clone()));
    let lat = IdealLattice::with_limit(ideal_ring, limit)?;
    let n = lat.ring().size();
    // (0, x) sits at index x
    let square_zero = BitSet::from_indices(n, 0..m);
    let zero = BitSet::singleton(n, 0);
    let interval = lat.interval(&zero, &square_zero)?;
    r.size("submodules", lattice.len());
    r.size("interval", interval.len());
    let image = match index_map(&interval, lattice.members().iter().map(|s| BitSet::from_indices(n, s.iter()))) {
        Some(v) => v,
        None => {
            r.fail("0 x N is not an ideal of the idealization", Vec::<String>::new());
            return Ok(r);
        }
    };
    let smod = hull_kernel_space(lattice.members(), &module);
    let ideals = hull_kernel_space(&interval, lat.module());
    r.absorb(&SpaceMap::new(&smod, &ideals, image)?.check_homeo());
    require_spectral(&mut r, "Id((0 x M,0))", &ideals);
    Ok(r)
}

/// The colon topology on `Spec_R(M)`, with closed sub-basis
/// `V(N) = {P : (P:M) ⊆ (N:M)}`.
pub fn lu_space(lattice: &SubmoduleLattice) -> (Vec<Submodule>, FinSpace) {
    let module = lattice.module();
    let primes = lattice.prime_submodules();
    let psi: Vec<Ideal> = primes.iter().map(|p| module.colon(p)).collect();
    let subbasis = lattice
        .members()
        .iter()
        .map(|n| {
            let cn = module.colon(n);
            BitSet::from_indices(primes.len(), (0..primes.len()).filter(|&i| !psi[i].is_subset(&cn)))
        })
        .collect();
    let labels = primes.iter().map(|p| module.submodule_label(p)).collect();
    let space = FinSpace::new(labels, subbasis).expect("labels match primes");
    (primes, space)
}

/// The colon topology is coarser than hull-kernel, and T0 iff
/// `ψ : P ↦ (P:M)` is injective.
pub fn verify_lu_topology(lattice: &SubmoduleLattice, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("lu-topology", instance);
    let module = lattice.module();
    let (primes, tau) = lu_space(lattice);
    let hk = hull_kernel_space(&primes, module);
    let k = primes.len();
    for a in 0..k {
        for b in 0..k {
            if hk.leq(a, b) && !tau.leq(a, b) {
                r.fail("colon topology is not coarser than hull-kernel", [hk.label(a), hk.label(b)]);
            }
        }
    }
    let psi: Vec<Ideal> = primes.iter().map(|p| module.colon(p)).collect();
    let injective = psi.iter().collect::<BTreeSet<_>>().len() == k;
    let tau_t0 = tau.is_t0().passed;
    let hk_t0 = hk.is_t0().passed;
    r.size("primes", k);
    r.size("psi_injective", injective as i64);
    r.size("tau_t0", tau_t0 as i64);
    r.size("hk_t0", hk_t0 as i64);
    r.require(tau_t0 == injective, || {
        ("colon topology T0 status differs from injectivity of psi".into(), Vec::new())
    });
    r.require(hk_t0, || ("hull-kernel topology on Spec_R(M) is not T0".into(), Vec::new()));
    if module.is_regular() {
        r.require(preorders_equal(tau.specialization_preorder(), hk.specialization_preorder()).is_none(), || {
            ("colon and hull-kernel topologies differ on Spec_R(R)".into(), Vec::new())
        });
    }
    Ok(r)
}

fn check_poset_guard(p: &Poset, limit: usize) -> Result<()> {
    if p.len() > limit {
        return Err(Error::Resource {
            what: "poset points for the hyperspace",
            size: p.len(),
            limit,
        });
    }
    Ok(())
}

/// The four hyperspace assertions on `X = from_poset(P)`.
pub fn verify_hyperspace_suite(p: &Poset, instance: &str) -> Result<CheckReport> {
    verify_hyperspace_suite_with_limit(p, HYPERSPACE_SUITE_LIMIT, instance)
}

pub fn verify_hyperspace_suite_with_limit(p: &Poset, limit: usize, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("hyperspace", instance);
    check_poset_guard(p, limit)?;
    let x = FinSpace::from_poset(p);
    let zar = zariski_hyperspace_with_limit(&x, limit)?;
    let low = lower_vietoris_with_limit(&x, limit)?;
    let up = upper_vietoris(&x)?;
    r.size("points", p.len());
    r.size("hyperspace", zar.points.len());

    require_order(&mut r, "X'", &zar.space, &inclusion_preorder(&zar.points));
    require_spectral(&mut r, "X'", &zar.space);
    let opens = x.opens_from_preorder()?;
    if let Some((i, j)) = check_basis_law(&zar.points, &opens) {
        r.fail(
            "U'(A) and U'(B) do not meet in U'(A u B)",
            [closed_set_label(&x, &opens[i]), closed_set_label(&x, &opens[j])],
        );
    }

    if let Some((a, b)) = preorders_equal(low.space.specialization_preorder(), &zar.space.specialization_preorder().opposite()) {
        r.fail(
            "lower Vietoris order is not the opposite of the Zariski order",
            [low.space.label(a), low.space.label(b)],
        );
    }

    let up_t0 = up.space.is_t0().passed;
    r.size("upper_vietoris_t0", up_t0 as i64);
    r.require(up_t0 == p.is_antichain(), || {
        let items = match up.space.specialization_preorder().antisymmetry_violation() {
            Some((a, b)) => alloc::vec![up.space.label(a).to_string(), up.space.label(b).to_string()],
            None => Vec::new(),
        };
        ("upper Vietoris T0 status differs from the antichain criterion".into(), items)
    });

    let phi = PhiPrime::new(&x)?;
    let mut emb = phi.map().check_embedding();
    emb.check = "phi'".into();
    r.absorb(&emb);

    let ident: Vec<usize> = (0..zar.points.len()).collect();
    let zar_inv = zar.space.inverse_space()?;
    let mut c1 = SpaceMap::new(&low.space, &zar_inv, ident.clone())?.check_homeo();
    c1.check = "lower-vietoris->inverse".into();
    r.absorb(&c1);
    let zar_inv_inv = zar_inv.inverse_space()?;
    let mut c2 = SpaceMap::new(&zar.space, &zar_inv_inv, ident)?.check_homeo();
    c2.check = "zariski->double-inverse".into();
    r.absorb(&c2);
    Ok(r)
}

/// `dim X′(P) = |P| − 1 ≥ dim P`, equality on chains, and the closed chain
/// `Cl{P_1} ⊊ Cl{P_1,P_2} ⊊ …` from iterated minimal elements.
pub fn verify_hyper_dimension(p: &Poset, instance: &str) -> Result<CheckReport> {
    verify_hyper_dimension_with_limit(p, HYPERSPACE_BASE_LIMIT, instance)
}

pub fn verify_hyper_dimension_with_limit(p: &Poset, limit: usize, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("hyper-dimension", instance);
    check_poset_guard(p, limit)?;
    let x = FinSpace::from_poset(p);
    let zar = zariski_hyperspace_with_limit(&x, limit)?;
    let n = p.len() as i64;
    let dim_h = zar.space.dimension();
    let dim_p = x.dimension();
    r.size("points", n);
    r.size("dim_hyperspace", dim_h);
    r.size("dim_poset", dim_p);
    r.require(dim_h == n - 1, || {
        ("dim X'(P) differs from |P| - 1".into(), alloc::vec![format!("{dim_h}"), format!("{}", n - 1)])
    });
    r.require(n - 1 >= dim_p, || ("|P| - 1 is below dim P".into(), alloc::vec![format!("{dim_p}")]));
    if p.is_chain() {
        r.require(dim_h == dim_p, || ("P is a chain but dim X'(P) differs from dim P".into(), Vec::new()));
    }
    let seq = minimal_element_sequence(p.order());
    let mut prev: Option<usize> = None;
    let mut acc = BitSet::empty(p.len());
    let mut steps = 0i64;
    for &q in &seq {
        acc.insert(q);
        let c = x.closure(&acc);
        let k = match zar.points.binary_search(&c) {
            Ok(k) => k,
            Err(_) => {
                r.fail("chain member is not a hyperspace point", [closed_set_label(&x, &c)]);
                break;
            }
        };
        if let Some(j) = prev {
            if !r.require(zar.space.leq(j, k) && k != j, || {
                ("minimal-element chain is not strict".into(), alloc::vec![zar.space.label(k).to_string()])
            }) {
                break;
            }
            steps += 1;
        }
        prev = Some(k);
    }
    r.require(n == 0 || steps == n - 1, || {
        ("minimal-element chain has the wrong length".into(), alloc::vec![format!("{steps}")])
    });
    Ok(r)
}

/// [`verify_space`] on the poset space and, when small, its hyperspaces.
pub fn verify_poset_topology(p: &Poset, instance: &str) -> Result<CheckReport> {
    let mut r = CheckReport::new("poset-topology", instance);
    let x = FinSpace::from_poset(p);
    if let Some((a, b)) = preorders_equal(x.specialization_preorder(), p.order()) {
        r.fail("space order differs from the poset", [x.label(a), x.label(b)]);
    }
    r.size("points", x.len());
    verify_space(&x, "X", &mut r)?;
    if p.len() <= HYPERSPACE_SUITE_LIMIT {
        let zar = zariski_hyperspace(&x)?;
        r.size("hyperspace", zar.points.len());
        verify_space(&zar.space, "X'", &mut r)?;
        if zar.points.len() <= EXPLICIT_OPEN_LIMIT {
            let low = lower_vietoris(&x)?;
            verify_space(&low.space, "X' lower", &mut r)?;
            let full_low = crate::hyper::lower_vietoris_all_opens(&x)?;
            let full_zar = crate::hyper::zariski_all_opens(&x)?;
            if low.space.generated_opens()? != full_low.space.generated_opens()? {
                r.fail("lower Vietoris principal sub-basis generates a different topology", Vec::<String>::new());
            }
            if zar.space.generated_opens()? != full_zar.space.generated_opens()? {
                r.fail("Zariski principal sub-basis generates a different topology", Vec::<String>::new());
            }
        }
    }
    Ok(r)
}
