//! Finite modules, submodule and ideal lattices, prime submodules, radicals,
//! colon ideals, linear maps and closure operations.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::error::{invalid_arg, invalid_spec, Error, Result};
use crate::finring::{Ring, RingSpec};

/// Submodules are member sets over the module's element indices.
pub type Submodule = BitSet;
/// Ideals are submodules of the ring over itself.
pub type Ideal = BitSet;

/// Default cap on `|M|` for submodule enumeration.
pub const DEFAULT_MODULE_LIMIT: usize = 1024;

/// Modules up to this size get a materialized addition table.
const MODULE_TABLE_LIMIT: usize = 1024;

/// `⊕_j R/I_j`, each `I_j` given by generator names in `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ModuleSpec {
    pub ring: RingSpec,
    pub summands: Vec<Vec<String>>,
}

impl ModuleSpec {
    pub fn build(&self) -> Result<FiniteModule> {
        let ring = Arc::new(self.ring.build()?);
        let regular = FiniteModule::regular(ring.clone());
        let mut anns = Vec::with_capacity(self.summands.len());
        for gens in &self.summands {
            let mut idx = Vec::with_capacity(gens.len());
            for g in gens {
                let e = ring
                    .element(g)
                    .ok_or_else(|| invalid_spec(format!("unknown element {g:?} of {}", self.ring)))?;
                idx.push(e);
            }
            anns.push(regular.span(idx));
        }
        FiniteModule::new(ring, anns)
    }

    /// The summand list as written in module spec strings.
    pub fn summands_display(&self) -> String {
        if self.summands.is_empty() {
            return "0".to_string();
        }
        let ring = match self.ring {
            RingSpec::ZMod(_) | RingSpec::PolyQuot { .. } => self.ring.to_string(),
            _ => format!("({})", self.ring),
        };
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|g| {
                if g.is_empty() {
                    ring.clone()
                } else {
                    format!("{ring}/({})", g.join(","))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl core::fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} over {}", self.summands_display(), self.ring)
    }
}

#[derive(Clone, Debug)]
struct Summand {
    /// ring element -> coset class
    class_of: Vec<u32>,
    /// class -> smallest ring element in the coset
    reps: Vec<usize>,
}

/// A finite module `⊕_j R/I_j` over a finite ring.
///
/// Elements are tuples of coset classes encoded in mixed radix with the first
/// summand most significant, so index 0 is the zero element.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    ring: Arc<Ring>,
    annihilators: Vec<Ideal>,
    summands: Vec<Summand>,
    size: usize,
    add_table: Option<Vec<u32>>,
    smul_table: Vec<u32>,
}

impl FiniteModule {
    /// Builds `⊕_j R/I_j`. Each annihilator must be an ideal of `R`.
    pub fn new(ring: Arc<Ring>, annihilators: Vec<Ideal>) -> Result<FiniteModule> {
        let n = ring.size();
        let mut summands = Vec::with_capacity(annihilators.len());
        let mut size: usize = 1;
        for ideal in &annihilators {
            if ideal.universe() != n || !is_ideal(&ring, ideal) {
                return Err(invalid_spec("summand annihilator is not an ideal of the ring"));
            }
            let mut class_of = alloc::vec![u32::MAX; n];
            let mut reps = Vec::new();
            for a in 0..n {
                if class_of[a] != u32::MAX {
                    continue;
                }
                let c = reps.len() as u32;
                reps.push(a);
                for i in ideal.iter() {
                    class_of[ring.add(a, i)] = c;
                }
            }
            size = size
                .checked_mul(reps.len())
                .ok_or_else(|| invalid_spec("module too large"))?;
            summands.push(Summand { class_of, reps });
        }
        let mut module = FiniteModule {
            ring,
            annihilators,
            summands,
            size,
            add_table: None,
            smul_table: Vec::new(),
        };
        if size <= MODULE_TABLE_LIMIT {
            let mut t = Vec::with_capacity(size * size);
            for a in 0..size {
                for b in 0..size {
                    t.push(module.eval_add(a, b) as u32);
                }
            }
            module.add_table = Some(t);
        }
        let mut s = Vec::with_capacity(n.saturating_mul(size));
        if n.saturating_mul(size) <= 1 << 24 {
            for r in 0..n {
                for m in 0..size {
                    s.push(module.eval_smul(r, m) as u32);
                }
            }
            module.smul_table = s;
        }
        Ok(module)
    }

    /// `R` as a module over itself.
    pub fn regular(ring: Arc<Ring>) -> FiniteModule {
        let zero = BitSet::singleton(ring.size(), 0);
        FiniteModule::new(ring, alloc::vec![zero]).expect("(0) is an ideal")
    }

    /// The zero module over `R`.
    pub fn zero(ring: Arc<Ring>) -> FiniteModule {
        FiniteModule::new(ring, Vec::new()).expect("empty sum")
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn annihilators(&self) -> &[Ideal] {
        &self.annihilators
    }

    pub fn num_summands(&self) -> usize {
        self.summands.len()
    }

    /// `true` when this is `R` over itself with its identity generator.
    pub fn is_regular(&self) -> bool {
        self.annihilators.len() == 1 && self.annihilators[0].len() == 1 && self.size == self.ring.size()
    }

    fn decode(&self, mut m: usize) -> Vec<usize> {
        let mut out = alloc::vec![0; self.summands.len()];
        for j in (0..self.summands.len()).rev() {
            let k = self.summands[j].reps.len();
            out[j] = m % k;
            m /= k;
        }
        out
    }

    fn encode(&self, classes: &[usize]) -> usize {
        self.summands
            .iter()
            .zip(classes)
            .fold(0, |acc, (s, &c)| acc * s.reps.len() + c)
    }

    /// The element whose only nonzero coordinate is the image of `r` in
    /// summand `j`.
    pub fn coordinate(&self, j: usize, r: usize) -> usize {
        let mut c = alloc::vec![0; self.summands.len()];
        c[j] = self.summands[j].class_of[r] as usize;
        self.encode(&c)
    }

    /// Canonical generators `e_j`.
    pub fn generators(&self) -> Vec<usize> {
        (0..self.summands.len())
            .map(|j| self.coordinate(j, self.ring.one()))
            .collect()
    }

    /// Builds the element with the given ring representatives per summand.
    pub fn element_from_reps(&self, reps: &[usize]) -> usize {
        let classes: Vec<usize> = self
            .summands
            .iter()
            .zip(reps)
            .map(|(s, &r)| s.class_of[r] as usize)
            .collect();
        self.encode(&classes)
    }

    pub fn element_name(&self, m: usize) -> String {
        let cls = self.decode(m);
        let parts: Vec<&str> = cls
            .iter()
            .enumerate()
            .map(|(j, &c)| self.ring.element_name(self.summands[j].reps[c]))
            .collect();
        match parts.len() {
            0 => "0".to_string(),
            1 => parts[0].to_string(),
            _ => format!("({})", parts.join(",")),
        }
    }

    /// Looks an element up by display name, ignoring whitespace.
    pub fn element(&self, name: &str) -> Option<usize> {
        let want: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        (0..self.size).find(|&m| self.element_name(m) == want)
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.add_table {
            Some(t) => t[a * self.size + b] as usize,
            None => self.eval_add(a, b),
        }
    }

    /// Scalar action `r · m`.
    #[inline]
    pub fn smul(&self, r: usize, m: usize) -> usize {
        if self.smul_table.is_empty() {
            self.eval_smul(r, m)
        } else {
            self.smul_table[r * self.size + m] as usize
        }
    }

    pub fn neg(&self, m: usize) -> usize {
        self.smul(self.ring.neg(self.ring.one()), m)
    }

    /// Applies `f` to the ring representatives of each coordinate and
    /// re-encodes, least significant summand first.
    fn eval_digitwise(&self, a: usize, b: usize, f: impl Fn(&Summand, usize, usize) -> usize) -> usize {
        let (mut a, mut b) = (a, b);
        let (mut out, mut scale) = (0, 1);
        for s in self.summands.iter().rev() {
            let k = s.reps.len();
            out += f(s, a % k, b % k) * scale;
            a /= k;
            b /= k;
            scale *= k;
        }
        out
    }

    fn eval_add(&self, a: usize, b: usize) -> usize {
        self.eval_digitwise(a, b, |s, x, y| s.class_of[self.ring.add(s.reps[x], s.reps[y])] as usize)
    }

    fn eval_smul(&self, r: usize, m: usize) -> usize {
        self.eval_digitwise(m, 0, |s, x, _| s.class_of[self.ring.mul(r, s.reps[x])] as usize)
    }

    /// Exhaustive scan of the group and action axioms.
    pub fn verify_axioms(&self) -> Result<()> {
        let (n, r) = (self.size, self.ring.size());
        let bad = |what: &str| Err(Error::Internal(format!("module axiom fails: {what}")));
        for a in 0..n {
            if self.add(a, 0) != a || self.add(a, self.neg(a)) != 0 {
                return bad("additive identity/inverse");
            }
            if self.smul(self.ring.one(), a) != a {
                return bad("unital action");
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return bad("commutativity");
                }
                for s in 0..r {
                    if self.smul(s, self.add(a, b)) != self.add(self.smul(s, a), self.smul(s, b)) {
                        return bad("action distributes over +");
                    }
                }
            }
            for s in 0..r {
                for t in 0..r {
                    if self.smul(self.ring.add(s, t), a) != self.add(self.smul(s, a), self.smul(t, a))
                        || self.smul(self.ring.mul(s, t), a) != self.smul(s, self.smul(t, a))
                    {
                        return bad("ring action compatibility");
                    }
                }
            }
        }
        if n > 64 {
            return Ok(());
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return bad("associativity");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn zero_submodule(&self) -> Submodule {
        BitSet::singleton(self.size, 0)
    }

    pub fn top(&self) -> Submodule {
        BitSet::full(self.size)
    }

    /// `R·m`.
    pub fn cyclic(&self, m: usize) -> Submodule {
        BitSet::from_indices(self.size, (0..self.ring.size()).map(|r| self.smul(r, m)))
    }

    /// `A + B` for submodules `A`, `B`, built coset by coset.
    pub fn sum(&self, a: &Submodule, b: &Submodule) -> Submodule {
        let mut out = a.clone();
        for c in b.iter() {
            if !out.contains(c) {
                for x in a.iter() {
                    out.insert(self.add(x, c));
                }
            }
        }
        out
    }

    /// Smallest submodule containing `gens`.
    pub fn span<I: IntoIterator<Item = usize>>(&self, gens: I) -> Submodule {
        let mut acc = self.zero_submodule();
        for g in gens {
            if !acc.contains(g) {
                acc = self.sum(&acc, &self.cyclic(g));
            }
        }
        acc
    }

    /// Exhaustive closure test: contains 0, closed under + and the action.
    pub fn is_submodule(&self, s: &BitSet) -> bool {
        s.universe() == self.size
            && s.contains(0)
            && s.iter().all(|a| {
                s.iter().all(|b| s.contains(self.add(a, b)))
                    && (0..self.ring.size()).all(|r| s.contains(self.smul(r, a)))
            })
    }

    /// `(N : M) = {a ∈ R : aM ⊆ N}`.
    pub fn colon(&self, n: &Submodule) -> Ideal {
        let gens = self.generators();
        BitSet::from_indices(
            self.ring.size(),
            (0..self.ring.size()).filter(|&a| gens.iter().all(|&g| n.contains(self.smul(a, g)))),
        )
    }

    /// Definition scan: `N ≠ M` and `am ∈ N` forces `m ∈ N` or `aM ⊆ N`.
    /// On failure returns the offending pair `(a, m)`.
    pub fn prime_submodule_witness(&self, n: &Submodule) -> core::result::Result<(), Option<(usize, usize)>> {
        if n.is_full() {
            return Err(None);
        }
        let colon = self.colon(n);
        for a in 0..self.ring.size() {
            if colon.contains(a) {
                continue;
            }
            for m in 0..self.size {
                if !n.contains(m) && n.contains(self.smul(a, m)) {
                    return Err(Some((a, m)));
                }
            }
        }
        Ok(())
    }

    pub fn is_prime_submodule(&self, n: &Submodule) -> bool {
        self.prime_submodule_witness(n).is_ok()
    }

    /// A small generating set found greedily in index order.
    pub fn generators_of(&self, n: &Submodule) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut acc = self.zero_submodule();
        for m in n.iter() {
            if !acc.contains(m) {
                gens.push(m);
                acc = self.sum(&acc, &self.cyclic(m));
            }
        }
        gens
    }

    /// Display label such as `(2)` or `((1,0),(0,1))`.
    pub fn submodule_label(&self, n: &Submodule) -> String {
        let gens = self.generators_of(n);
        if gens.is_empty() {
            return "(0)".to_string();
        }
        let names: Vec<String> = gens.iter().map(|&g| self.element_name(g)).collect();
        format!("({})", names.join(","))
    }
}

pub(crate) fn is_ideal(ring: &Ring, s: &BitSet) -> bool {
    s.contains(0)
        && s.iter().all(|a| {
            s.iter().all(|b| s.contains(ring.add(a, b))) && (0..ring.size()).all(|r| s.contains(ring.mul(r, a)))
        })
}

/// All submodules of a module, in canonical order.
#[derive(Clone, Debug)]
pub struct SubmoduleLattice {
    module: Arc<FiniteModule>,
    members: Vec<Submodule>,
    /// `(fingerprint, position)` sorted, for membership lookups.
    index: Vec<(u64, u32)>,
}

fn fingerprint_index(members: &[Submodule]) -> Vec<(u64, u32)> {
    let mut index: Vec<(u64, u32)> = members.iter().enumerate().map(|(i, m)| (m.fingerprint(), i as u32)).collect();
    index.sort_unstable();
    index
}

impl SubmoduleLattice {
    pub fn enumerate(module: Arc<FiniteModule>) -> Result<SubmoduleLattice> {
        Self::enumerate_with_limit(module, DEFAULT_MODULE_LIMIT)
    }

    /// Worklist enumeration: starting at `0`, every found `N` is extended by
    /// each distinct cyclic submodule not already inside it.
    pub fn enumerate_with_limit(module: Arc<FiniteModule>, limit: usize) -> Result<SubmoduleLattice> {
        if module.size() > limit {
            return Err(Error::Resource {
                what: "module size for submodule enumeration",
                size: module.size(),
                limit,
            });
        }
        let cyclics: Vec<Submodule> = (0..module.size())
            .map(|m| module.cyclic(m))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut seen: BTreeSet<Submodule> = BTreeSet::new();
        let zero = module.zero_submodule();
        seen.insert(zero.clone());
        let mut work = alloc::vec![zero];
        while let Some(n) = work.pop() {
            for c in &cyclics {
                if c.is_subset(&n) {
                    continue;
                }
                let s = module.sum(&n, c);
                if !seen.contains(&s) {
                    seen.insert(s.clone());
                    work.push(s);
                }
            }
        }
        Ok(SubmoduleLattice {
            module,
            index: fingerprint_index(&seen.iter().cloned().collect::<Vec<_>>()),
            members: seen.into_iter().collect(),
        })
    }

    /// Wraps an externally supplied list (for example from a cache), checking
    /// that each member is a submodule and that `0` and `M` are present.
    pub fn from_members(module: Arc<FiniteModule>, mut members: Vec<Submodule>) -> Result<SubmoduleLattice> {
        members.sort();
        members.dedup();
        if members.iter().any(|s| !module.is_submodule(s)) {
            return Err(invalid_arg("lattice member is not a submodule"));
        }
        if members.first() != Some(&module.zero_submodule()) || members.last() != Some(&module.top()) {
            return Err(invalid_arg("lattice must contain 0 and M"));
        }
        Ok(SubmoduleLattice {
            index: fingerprint_index(&members),
            module,
            members,
        })
    }

    pub fn module(&self) -> &Arc<FiniteModule> {
        &self.module
    }

    pub fn members(&self) -> &[Submodule] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, n: &Submodule) -> Option<usize> {
        let h = n.fingerprint();
        let start = self.index.partition_point(|&(g, _)| g < h);
        self.index[start..]
            .iter()
            .take_while(|&&(g, _)| g == h)
            .map(|&(_, i)| i as usize)
            .find(|&i| self.members[i] == *n)
    }

    pub fn top_index(&self) -> usize {
        self.members.len() - 1
    }

    /// `Spec_R(M)`: the prime submodules.
    pub fn prime_submodules(&self) -> Vec<Submodule> {
        self.members
            .iter()
            .filter(|n| self.module.is_prime_submodule(n))
            .cloned()
            .collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.members.iter().map(|n| self.module.submodule_label(n)).collect()
    }

    /// Closure under intersection and sum.
    /// Closure under meets of all pairs and under sums with cyclic
    /// submodules, which generate every sum.
    pub fn verify_lattice(&self) -> Result<()> {
        let broken = || Err(Error::Internal("submodule list not closed under meet/join".into()));
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                if self.index_of(&a.intersection(b)).is_none() {
                    return broken();
                }
            }
        }
        let cyclic: BTreeSet<Submodule> = (0..self.module.size()).map(|x| self.module.cyclic(x)).collect();
        for c in &cyclic {
            if self.index_of(c).is_none() {
                return broken();
            }
            for a in &self.members {
                if !c.is_subset(a) && self.index_of(&self.module.sum(a, c)).is_none() {
                    return broken();
                }
            }
        }
        Ok(())
    }
}

/// The ideals of a ring together with its prime spectrum.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    lattice: SubmoduleLattice,
    primes: Vec<Ideal>,
}

impl IdealLattice {
    pub fn new(ring: Arc<Ring>) -> Result<IdealLattice> {
        Self::with_limit(ring, DEFAULT_MODULE_LIMIT)
    }

    pub fn with_limit(ring: Arc<Ring>, limit: usize) -> Result<IdealLattice> {
        let module = Arc::new(FiniteModule::regular(ring));
        let lattice = SubmoduleLattice::enumerate_with_limit(module, limit)?;
        Self::from_lattice(lattice)
    }

    /// Wraps the submodule lattice of the regular module.
    pub fn from_lattice(lattice: SubmoduleLattice) -> Result<IdealLattice> {
        if !lattice.module().is_regular() {
            return Err(invalid_arg("ideal lattice needs the ring as a module over itself"));
        }
        let ring = lattice.module.ring().clone();
        let primes = lattice
            .members
            .iter()
            .filter(|p| is_prime_ideal(&ring, p))
            .cloned()
            .collect();
        Ok(IdealLattice { lattice, primes })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.lattice.module.ring()
    }

    pub fn as_submodules(&self) -> &SubmoduleLattice {
        &self.lattice
    }

    pub fn module(&self) -> &Arc<FiniteModule> {
        &self.lattice.module
    }

    /// `Id(R)`, or `Id•(R)` when `proper_only`.
    pub fn ideals(&self, proper_only: bool) -> &[Ideal] {
        let all = &self.lattice.members;
        if proper_only {
            &all[..all.len() - 1]
        } else {
            all
        }
    }

    /// `Spec(R)`.
    pub fn spec(&self) -> &[Ideal] {
        &self.primes
    }

    /// Power-membership radical, cross-checked against the intersection of
    /// the primes containing `I`.
    pub fn radical(&self, ideal: &Ideal) -> Result<Ideal> {
        let by_powers = power_radical(self.ring(), ideal);
        let by_primes = self.primes_radical(ideal);
        if by_powers != by_primes {
            return Err(Error::Internal(format!(
                "radical mismatch for {}",
                self.module().submodule_label(ideal)
            )));
        }
        Ok(by_powers)
    }

    /// `⋂ {P ∈ Spec(R) : I ⊆ P}`; the empty intersection is `R`.
    pub fn primes_radical(&self, ideal: &Ideal) -> Ideal {
        let mut acc = BitSet::full(self.ring().size());
        for p in self.primes.iter().filter(|p| ideal.is_subset(p)) {
            acc.intersect_with(p);
        }
        acc
    }

    /// `Rd(R)`: proper radical ideals, with the `2^|Spec| - 1` cross-check.
    pub fn rd(&self) -> Result<Vec<Ideal>> {
        let mut out = Vec::new();
        for i in self.ideals(true) {
            if self.radical(i)? == *i {
                out.push(i.clone());
            }
        }
        let expected = (1usize << self.primes.len()) - 1;
        if out.len() != expected {
            return Err(Error::Internal(format!(
                "|Rd(R)| = {} but 2^|Spec(R)| - 1 = {expected}",
                out.len()
            )));
        }
        Ok(out)
    }

    /// `{H ∈ Id(R) : J ⊆ H ⊆ I}`.
    pub fn interval(&self, lower: &Ideal, upper: &Ideal) -> Result<Vec<Ideal>> {
        if !lower.is_subset(upper) {
            return Err(invalid_arg("interval lower bound is not contained in upper bound"));
        }
        Ok(self
            .lattice
            .members
            .iter()
            .filter(|h| lower.is_subset(h) && h.is_subset(upper))
            .cloned()
            .collect())
    }

    pub fn label(&self, ideal: &Ideal) -> String {
        self.module().submodule_label(ideal)
    }
}

pub fn is_prime_ideal(ring: &Ring, p: &Ideal) -> bool {
    if p.is_full() {
        return false;
    }
    let outside: Vec<usize> = p.complement().to_vec();
    outside
        .iter()
        .all(|&a| outside.iter().all(|&b| !p.contains(ring.mul(a, b))))
}

/// `{x : x^k ∈ I for some 1 ≤ k ≤ |R|}`.
pub fn power_radical(ring: &Ring, ideal: &Ideal) -> Ideal {
    let n = ring.size();
    BitSet::from_indices(
        n,
        (0..n).filter(|&x| {
            let mut acc = x;
            for _ in 0..n {
                if ideal.contains(acc) {
                    return true;
                }
                acc = ring.mul(acc, x);
            }
            false
        }),
    )
}

/// An `R`-linear map given by the images of the source's canonical generators.
#[derive(Clone, Debug)]
pub struct LinearMap {
    source: Arc<FiniteModule>,
    target: Arc<FiniteModule>,
    gen_images: Vec<usize>,
    table: Vec<usize>,
}

impl LinearMap {
    pub fn new(source: Arc<FiniteModule>, target: Arc<FiniteModule>, gen_images: Vec<usize>) -> Result<LinearMap> {
        if !Arc::ptr_eq(source.ring(), target.ring()) && **source.ring() != **target.ring() {
            return Err(invalid_arg("linear map between modules over different rings"));
        }
        if gen_images.len() != source.num_summands() {
            return Err(invalid_arg("one image per source generator is required"));
        }
        for (j, &img) in gen_images.iter().enumerate() {
            if img >= target.size() {
                return Err(invalid_arg("generator image out of range"));
            }
            if source.annihilators()[j].iter().any(|a| target.smul(a, img) != 0) {
                return Err(invalid_arg(format!(
                    "image of generator {j} is not annihilated by its annihilator"
                )));
            }
        }
        let table = (0..source.size())
            .map(|m| {
                let cls = source.decode(m);
                cls.iter().enumerate().fold(0, |acc, (j, &c)| {
                    let r = source.summands[j].reps[c];
                    target.add(acc, target.smul(r, gen_images[j]))
                })
            })
            .collect();
        let map = LinearMap {
            source,
            target,
            gen_images,
            table,
        };
        map.verify_linear()?;
        Ok(map)
    }

    pub fn identity(module: Arc<FiniteModule>) -> LinearMap {
        let gens = module.generators();
        LinearMap::new(module.clone(), module, gens).expect("identity is linear")
    }

    /// Every linear map `source → target`, or a resource error when there
    /// are more than `limit`.
    pub fn enumerate_all(source: &Arc<FiniteModule>, target: &Arc<FiniteModule>, limit: usize) -> Result<Vec<LinearMap>> {
        let choices: Vec<Vec<usize>> = source
            .annihilators()
            .iter()
            .map(|ann| {
                (0..target.size())
                    .filter(|&t| ann.iter().all(|a| target.smul(a, t) == 0))
                    .collect()
            })
            .collect();
        let total = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
        match total {
            Some(t) if t <= limit => {}
            _ => {
                return Err(Error::Resource {
                    what: "number of linear maps",
                    size: total.unwrap_or(usize::MAX),
                    limit,
                })
            }
        }
        let mut out = Vec::new();
        let mut pick = alloc::vec![0usize; choices.len()];
        loop {
            let imgs = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            out.push(LinearMap::new(source.clone(), target.clone(), imgs)?);
            let mut k = choices.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    break;
                }
                pick[k] = 0;
            }
        }
    }

    pub fn source(&self) -> &Arc<FiniteModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteModule> {
        &self.target
    }

    pub fn gen_images(&self) -> &[usize] {
        &self.gen_images
    }

    #[inline]
    pub fn apply(&self, m: usize) -> usize {
        self.table[m]
    }

    fn verify_linear(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        for a in 0..s.size() {
            for b in 0..s.size() {
                if self.apply(s.add(a, b)) != t.add(self.apply(a), self.apply(b)) {
                    return Err(invalid_arg("map is not additive"));
                }
            }
            for r in 0..s.ring().size() {
                if self.apply(s.smul(r, a)) != t.smul(r, self.apply(a)) {
                    return Err(invalid_arg("map does not commute with the action"));
                }
            }
        }
        Ok(())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &LinearMap) -> Result<LinearMap> {
        if g.source.size() != self.target.size() {
            return Err(invalid_arg("maps are not composable"));
        }
        let imgs = self.gen_images.iter().map(|&x| g.apply(x)).collect();
        LinearMap::new(self.source.clone(), g.target.clone(), imgs)
    }

    /// `f⁻¹(L)`, the action of `SMod(f)` on a target submodule.
    pub fn preimage(&self, l: &Submodule) -> Submodule {
        BitSet::from_indices(self.source.size(), (0..self.source.size()).filter(|&m| l.contains(self.apply(m))))
    }

    /// `SMod(f)` as an index map from the target lattice into the source
    /// lattice.
    pub fn smod_functor(&self, source_lattice: &SubmoduleLattice, target_lattice: &SubmoduleLattice) -> Result<Vec<usize>> {
        target_lattice
            .members()
            .iter()
            .map(|l| {
                source_lattice
                    .index_of(&self.preimage(l))
                    .ok_or_else(|| Error::Internal("preimage is not a submodule".into()))
            })
            .collect()
    }
}

/// How a closure operation was specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    /// Radical of ideals; only valid on the ideal lattice.
    Radical,
    Identity,
    /// Constant map onto `M`.
    Top,
    /// Explicit table over lattice indices.
    Table(Vec<usize>),
}

/// A closure operation on the submodules of a fixed module, tabulated over
/// the lattice indices and validated at construction.
#[derive(Clone, Debug)]
pub struct ClosureOp {
    kind: ClosureKind,
    image: Vec<usize>,
}

impl ClosureOp {
    pub fn new(lattice: &SubmoduleLattice, kind: ClosureKind) -> Result<ClosureOp> {
        let n = lattice.len();
        let image = match &kind {
            ClosureKind::Identity => (0..n).collect(),
            ClosureKind::Top => alloc::vec![lattice.top_index(); n],
            ClosureKind::Radical => {
                if !lattice.module().is_regular() {
                    return Err(invalid_arg("radical closure needs the ideal lattice"));
                }
                let ring = lattice.module().ring();
                lattice
                    .members()
                    .iter()
                    .map(|i| {
                        lattice
                            .index_of(&power_radical(ring, i))
                            .ok_or_else(|| Error::Internal("radical is not an ideal".into()))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            ClosureKind::Table(t) => {
                if t.len() != n || t.iter().any(|&j| j >= n) {
                    return Err(invalid_arg("closure table must map every lattice index into the lattice"));
                }
                t.clone()
            }
        };
        let op = ClosureOp { kind, image };
        op.validate(lattice)?;
        Ok(op)
    }

    /// The closure whose fixed points are the smallest intersection-closed
    /// family containing `fixed` and `M`.
    pub fn from_fixed_points(lattice: &SubmoduleLattice, fixed: &[usize]) -> Result<ClosureOp> {
        let members = lattice.members();
        let mut family: BTreeSet<usize> = fixed.iter().copied().collect();
        family.insert(lattice.top_index());
        loop {
            let current: Vec<usize> = family.iter().copied().collect();
            let mut grew = false;
            for &a in &current {
                for &b in &current {
                    let meet = members[a].intersection(&members[b]);
                    let k = lattice
                        .index_of(&meet)
                        .ok_or_else(|| Error::Internal("meet missing from lattice".into()))?;
                    grew |= family.insert(k);
                }
            }
            if !grew {
                break;
            }
        }
        let table = members
            .iter()
            .map(|n| {
                let mut acc = lattice.module().top();
                for &f in &family {
                    if n.is_subset(&members[f]) {
                        acc.intersect_with(&members[f]);
                    }
                }
                lattice.index_of(&acc).expect("meet of family members is a member")
            })
            .collect();
        ClosureOp::new(lattice, ClosureKind::Table(table))
    }

    fn validate(&self, lattice: &SubmoduleLattice) -> Result<()> {
        let m = lattice.members();
        for (i, &ci) in self.image.iter().enumerate() {
            if !m[i].is_subset(&m[ci]) {
                return Err(invalid_arg(format!(
                    "closure is not extensive at {}",
                    lattice.module().submodule_label(&m[i])
                )));
            }
            if self.image[ci] != ci {
                return Err(invalid_arg(format!(
                    "closure is not idempotent at {}",
                    lattice.module().submodule_label(&m[i])
                )));
            }
        }
        for i in 0..m.len() {
            for j in 0..m.len() {
                if m[i].is_subset(&m[j]) && !m[self.image[i]].is_subset(&m[self.image[j]]) {
                    return Err(invalid_arg(format!(
                        "closure is not order-preserving at {} ⊆ {}",
                        lattice.module().submodule_label(&m[i]),
                        lattice.module().submodule_label(&m[j])
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &ClosureKind {
        &self.kind
    }

    pub fn apply(&self, index: usize) -> usize {
        self.image[index]
    }

    /// Lattice indices of `SMod^c(M|R) = {N : N = N^c}`.
    pub fn closed_submodules(&self) -> Vec<usize> {
        (0..self.image.len()).filter(|&i| self.image[i] == i).collect()
    }

    /// `N^c = ⋃ {L^c : L ⊆ N finitely generated}`; every finite submodule is
    /// finitely generated, so `L` ranges over all submodules below `N`.
    pub fn check_finite_type(&self, lattice: &SubmoduleLattice) -> Result<()> {
        let m = lattice.members();
        for (i, n) in m.iter().enumerate() {
            let mut acc = BitSet::empty(lattice.module().size());
            for (j, l) in m.iter().enumerate() {
                if l.is_subset(n) {
                    acc.union_with(&m[self.image[j]]);
                }
            }
            if acc != m[self.image[i]] {
                return Err(Error::Internal(format!(
                    "finite-type formula fails at {}",
                    lattice.module().submodule_label(n)
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod(n: usize) -> Arc<Ring> {
        Arc::new(Ring::zmod(n).unwrap())
    }

    fn module(ring: &Arc<Ring>, anns: &[&[usize]]) -> Arc<FiniteModule> {
        let reg = FiniteModule::regular(ring.clone());
        let anns = anns.iter().map(|g| reg.span(g.iter().copied())).collect();
        Arc::new(FiniteModule::new(ring.clone(), anns).unwrap())
    }

    /// Subset-filter oracle for submodule counts.
    fn submodules_by_subsets(m: &FiniteModule) -> Vec<BitSet> {
        let n = m.size();
        assert!(n <= 16);
        let mut out: Vec<BitSet> = (0u32..1 << n)
            .map(|mask| BitSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1)))
            .filter(|s| m.is_submodule(s))
            .collect();
        out.sort();
        out
    }

    /// Closure-iteration oracle for spans.
    fn span_by_iteration(m: &FiniteModule, gens: &[usize]) -> BitSet {
        let mut s = BitSet::from_indices(m.size(), gens.iter().copied().chain([0]));
        loop {
            let before = s.clone();
            for a in before.iter() {
                for b in before.iter() {
                    s.insert(m.add(a, b));
                }
                for r in 0..m.ring().size() {
                    s.insert(m.smul(r, a));
                }
            }
            if s == before {
                return s;
            }
        }
    }

    #[test]
    fn spans() {
        let f2 = zmod(2);
        let v = module(&f2, &[&[], &[]]);
        let e0 = v.element("(1,0)").unwrap();
        assert_eq!(v.span([e0]), BitSet::from_indices(4, [0, e0]));
        let z4 = FiniteModule::regular(zmod(4));
        assert_eq!(z4.span([2]), BitSet::from_indices(4, [0, 2]));
        assert_eq!(z4.span([2]), span_by_iteration(&z4, &[2]));
        assert_eq!(z4.span([]), z4.zero_submodule());
        for g in 0..4 {
            assert_eq!(v.span([g, 3 - g]), span_by_iteration(&v, &[g, 3 - g]));
        }
    }

    #[test]
    fn enumeration_matches_subset_filter() {
        let f2 = zmod(2);
        let z4 = zmod(4);
        let z6 = zmod(6);
        let cases = [
            (module(&f2, &[&[], &[]]), 5),
            (module(&z4, &[&[]]), 3),
            (module(&f2, &[]), 1),
            (module(&z6, &[&[2], &[3]]), 4),
            (module(&z4, &[&[], &[2]]), 0),
        ];
        for (m, expected) in cases {
            m.verify_axioms().unwrap();
            let lat = SubmoduleLattice::enumerate(m.clone()).unwrap();
            let oracle = submodules_by_subsets(&m);
            assert_eq!(lat.members(), &oracle[..]);
            if expected > 0 {
                assert_eq!(lat.len(), expected);
            }
            lat.verify_lattice().unwrap();
        }
    }

    #[test]
    fn enumeration_guard() {
        let m = module(&zmod(2), &[&[], &[], &[]]);
        let err = SubmoduleLattice::enumerate_with_limit(m, 4).unwrap_err();
        assert!(matches!(err, Error::Resource { limit: 4, .. }));
    }

    #[test]
    fn ideals_and_spectra() {
        let z12 = IdealLattice::new(zmod(12)).unwrap();
        assert_eq!(z12.ideals(false).len(), 6);
        assert_eq!(z12.ideals(true).len(), 5);
        let labels: Vec<String> = z12.spec().iter().map(|p| z12.label(p)).collect();
        assert_eq!(labels, ["(3)", "(2)"]);

        let f4 = IdealLattice::new(Arc::new(Ring::poly_quotient(2, &[1, 1, 1]).unwrap())).unwrap();
        assert_eq!(f4.ideals(false).len(), 2);
        assert_eq!(f4.ideals(true).len(), 1);
        assert_eq!(f4.spec().len(), 1);

        let z1 = IdealLattice::new(zmod(1)).unwrap();
        assert!(z1.ideals(true).is_empty());
        assert!(z1.spec().is_empty());
        assert!(z1.rd().unwrap().is_empty());
    }

    #[test]
    fn radicals() {
        let z12 = IdealLattice::new(zmod(12)).unwrap();
        let m = z12.module();
        let four = m.span([4]);
        assert_eq!(z12.radical(&four).unwrap(), m.span([2]));
        let z6 = IdealLattice::new(zmod(6)).unwrap();
        let zero = z6.module().zero_submodule();
        assert_eq!(z6.radical(&zero).unwrap(), zero);
        for p in z12.spec() {
            assert_eq!(&z12.radical(p).unwrap(), p);
        }
        let rd: Vec<String> = z12.rd().unwrap().iter().map(|i| z12.label(i)).collect();
        assert_eq!(rd, ["(6)", "(3)", "(2)"]);
        let z30 = IdealLattice::new(zmod(30)).unwrap();
        assert_eq!(z30.rd().unwrap().len(), 7);
        let dual = IdealLattice::new(Arc::new(Ring::poly_quotient(2, &[0, 0, 1]).unwrap())).unwrap();
        assert_eq!(dual.radical(&dual.module().zero_submodule()).unwrap(), dual.module().span([2]));
    }

    #[test]
    fn intervals() {
        let z12 = IdealLattice::new(zmod(12)).unwrap();
        let m = z12.module();
        let got = z12.interval(&m.span([6]), &m.span([2])).unwrap();
        assert_eq!(got, [m.span([6]), m.span([2])]);
        assert_eq!(z12.interval(&m.zero_submodule(), &m.top()).unwrap().len(), 6);
        let p = m.span([3]);
        assert_eq!(z12.interval(&p, &p).unwrap(), [p.clone()]);
        assert!(matches!(z12.interval(&m.span([2]), &m.span([6])), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn prime_submodules() {
        let z6 = zmod(6);
        let reg = FiniteModule::regular(z6.clone());
        assert_eq!(reg.prime_submodule_witness(&reg.zero_submodule()), Err(Some((2, 3))));

        // Z/2 ⊕ Z/3 over Z/6
        let m = module(&z6, &[&[2], &[3]]);
        let p = m.span([m.coordinate(0, 1)]);
        assert!(m.is_prime_submodule(&p));
        let lat = SubmoduleLattice::enumerate(m.clone()).unwrap();
        let primes = lat.prime_submodules();
        assert_eq!(primes.len(), 2);
        assert!(primes.contains(&p));
        assert!(primes.contains(&m.span([m.coordinate(1, 1)])));

        let v = module(&zmod(2), &[&[], &[]]);
        let lat = SubmoduleLattice::enumerate(v.clone()).unwrap();
        assert_eq!(lat.prime_submodules().len(), 4);

        let reg_lat = IdealLattice::new(z6).unwrap();
        assert_eq!(reg_lat.as_submodules().prime_submodules(), reg_lat.spec());
    }

    #[test]
    fn colons() {
        let z6 = zmod(6);
        let m = module(&z6, &[&[2], &[3]]);
        let p = m.span([m.coordinate(0, 1)]);
        assert_eq!(m.colon(&p), BitSet::from_indices(6, [0, 3]));
        assert!(m.colon(&m.top()).is_full());
        let v = module(&zmod(2), &[&[], &[]]);
        assert_eq!(v.colon(&v.zero_submodule()), BitSet::singleton(2, 0));
    }

    #[test]
    fn linear_maps_and_functor() {
        let f2 = zmod(2);
        let line = module(&f2, &[&[]]);
        let plane = module(&f2, &[&[], &[]]);
        let incl = LinearMap::new(line.clone(), plane.clone(), alloc::vec![plane.element("(1,0)").unwrap()]).unwrap();
        let diag = plane.span([plane.element("(1,1)").unwrap()]);
        assert_eq!(incl.preimage(&diag), line.zero_submodule());

        let lat = SubmoduleLattice::enumerate(plane.clone()).unwrap();
        let id = LinearMap::identity(plane.clone());
        let idx = id.smod_functor(&lat, &lat).unwrap();
        assert_eq!(idx, (0..lat.len()).collect::<Vec<_>>());

        // Z/4 -> Z/2 must send 1 to something killed by 4 = 0, fine; Z/2 -> Z/4 needs 2·img = 0
        let z4 = zmod(4);
        let a = module(&z4, &[&[2]]);
        let b = module(&z4, &[&[]]);
        assert!(LinearMap::new(a.clone(), b.clone(), alloc::vec![1]).is_err());
        assert!(LinearMap::new(a.clone(), b.clone(), alloc::vec![2]).is_ok());
        assert_eq!(LinearMap::enumerate_all(&a, &b, 100).unwrap().len(), 2);
        assert_eq!(LinearMap::enumerate_all(&b, &a, 100).unwrap().len(), 2);
    }

    #[test]
    fn closure_ops() {
        let z12 = IdealLattice::new(zmod(12)).unwrap();
        let lat = z12.as_submodules();
        let rad = ClosureOp::new(lat, ClosureKind::Radical).unwrap();
        let fixed: Vec<String> = rad.closed_submodules().iter().map(|&i| z12.label(&lat.members()[i])).collect();
        assert_eq!(fixed, ["(6)", "(3)", "(2)", "(1)"]);
        rad.check_finite_type(lat).unwrap();

        let id = ClosureOp::new(lat, ClosureKind::Identity).unwrap();
        assert_eq!(id.closed_submodules().len(), 6);
        let top = ClosureOp::new(lat, ClosureKind::Top).unwrap();
        assert_eq!(top.closed_submodules(), [lat.top_index()]);

        // non-radical lattices refuse the radical
        let v = module(&zmod(2), &[&[], &[]]);
        let vl = SubmoduleLattice::enumerate(v).unwrap();
        assert!(ClosureOp::new(&vl, ClosureKind::Radical).is_err());
    }

    #[test]
    fn corrupted_closure_tables_rejected() {
        let z12 = IdealLattice::new(zmod(12)).unwrap();
        let lat = z12.as_submodules();
        let n = lat.len();
        let top = lat.top_index();
        // maps R to 0: not extensive
        let mut t: Vec<usize> = (0..n).collect();
        t[top] = 0;
        let e = ClosureOp::new(lat, ClosureKind::Table(t)).unwrap_err();
        assert!(matches!(e, Error::InvalidArgument(ref m) if m.contains("extensive")));
        // 0 -> (6) but (6) -> R: not idempotent
        let six = lat.index_of(&lat.module().span([6])).unwrap();
        let mut t: Vec<usize> = (0..n).collect();
        t[0] = six;
        t[six] = top;
        let e = ClosureOp::new(lat, ClosureKind::Table(t)).unwrap_err();
        assert!(matches!(e, Error::InvalidArgument(ref m) if m.contains("idempotent")));
        // 0 -> R while (6) stays fixed: not order-preserving
        let mut t: Vec<usize> = (0..n).collect();
        t[0] = top;
        let e = ClosureOp::new(lat, ClosureKind::Table(t)).unwrap_err();
        assert!(matches!(e, Error::InvalidArgument(ref m) if m.contains("order-preserving")));
    }
}
