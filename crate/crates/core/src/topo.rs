//! Finite topological spaces given by a sub-basis of opens.
//!
//! Every question about a finite topology is decided on its specialization
//! preorder: `x ≤ y` iff `y ∈ Cl({x})` iff every open containing `y`
//! contains `x`. The opens are exactly the down-sets of this preorder and the
//! closed sets are the up-sets. Explicit open-set generation exists only as a
//! test oracle for small spaces.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::error::{invalid_arg, Error, Result};
use crate::modlat::{FiniteModule, Submodule};
use crate::report::CheckReport;

/// Largest space for which topologies are generated explicitly.
pub const EXPLICIT_OPEN_LIMIT: usize = 12;

/// Largest space whose basic opens are intersected pairwise in the spectral
/// checklist.
pub const PAIRWISE_BASIS_LIMIT: usize = 256;

/// A preorder stored as principal up-sets `up[x] = {y : x ≤ y}` and their
/// transpose, the principal down-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

impl Preorder {
    fn from_up(up: Vec<BitSet>) -> Preorder {
        let n = up.len();
        let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::empty(n)).collect();
        for (x, row) in up.iter().enumerate() {
            for y in row.iter() {
                down[y].insert(x);
            }
        }
        Preorder { up, down }
    }

    /// Takes the reflexive-transitive closure of the given relation rows.
    pub fn closure_of(mut up: Vec<BitSet>) -> Preorder {
        let n = up.len();
        for (x, row) in up.iter_mut().enumerate() {
            row.insert(x);
        }
        // Warshall on bit rows
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Preorder::from_up(up)
    }

    pub fn from_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Preorder {
        let up = (0..n)
            .map(|x| BitSet::from_indices(n, (0..n).filter(|&y| leq(x, y))))
            .collect();
        Preorder::from_up(up)
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn up(&self, x: usize) -> &BitSet {
        &self.up[x]
    }

    pub fn down(&self, y: usize) -> &BitSet {
        &self.down[y]
    }

    pub fn opposite(&self) -> Preorder {
        Preorder::from_fn(self.len(), |x, y| self.leq(y, x))
    }

    /// First pair of distinct mutually comparable points, if any.
    pub fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        (0..self.len()).find_map(|x| {
            self.up[x]
                .iter()
                .find(|&y| y != x && self.leq(y, x))
                .map(|y| (x, y))
        })
    }

    pub fn is_partial_order(&self) -> bool {
        self.antisymmetry_violation().is_none()
    }

    /// Equivalence classes of `x ≤ y ≤ x`, in order of first member.
    pub fn classes(&self) -> Vec<BitSet> {
        let n = self.len();
        let mut seen = BitSet::empty(n);
        let mut out = Vec::new();
        for x in 0..n {
            if seen.contains(x) {
                continue;
            }
            let class = BitSet::from_indices(n, self.up[x].iter().filter(|&y| self.leq(y, x)));
            seen.union_with(&class);
            out.push(class);
        }
        out
    }

    /// Length in steps of the longest strict chain; −1 when empty.
    pub fn height(&self) -> i64 {
        let n = self.len();
        if n == 0 {
            return -1;
        }
        let strict = |x: usize, y: usize| self.leq(x, y) && !self.leq(y, x);
        // points with smaller up-sets are handled first, so every strict
        // successor is done before its predecessors
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| core::cmp::Reverse(self.up[x].len()));
        let mut above = alloc::vec![0i64; n];
        for &x in order.iter().rev() {
            above[x] = self.up[x]
                .iter()
                .filter(|&y| strict(x, y))
                .map(|y| above[y] + 1)
                .max()
                .unwrap_or(0);
        }
        above.into_iter().max().unwrap_or(0)
    }

    pub fn is_total(&self) -> bool {
        (0..self.len()).all(|x| (0..self.len()).all(|y| self.leq(x, y) || self.leq(y, x)))
    }

    pub fn is_up_set(&self, s: &BitSet) -> bool {
        s.iter().all(|x| self.up[x].is_subset(s))
    }

    pub fn is_down_set(&self, s: &BitSet) -> bool {
        s.iter().all(|y| self.down[y].is_subset(s))
    }

    pub fn up_closure(&self, s: &BitSet) -> BitSet {
        let mut out = BitSet::empty(self.len());
        for x in s.iter() {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn down_closure(&self, s: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| self.up[x].intersects(s)),
        )
    }

    /// All up-sets, in canonical order. Exponential; `n ≤ 20` enforced.
    pub fn up_sets(&self) -> Result<Vec<BitSet>> {
        let n = self.len();
        if n > 20 {
            return Err(Error::Resource {
                what: "points for up-set enumeration",
                size: n,
                limit: 20,
            });
        }
        // grow up-sets by adding whole equivalence classes whose strict
        // up-set is already inside, in a fixed linear extension from the top
        let mut classes = self.classes();
        classes.sort_by_key(|c| core::cmp::Reverse(self.up[c.first().expect("classes are nonempty")].len()));
        let k = classes.len();
        let mut out = Vec::new();
        let mut stack = alloc::vec![(BitSet::empty(n), 0usize)];
        while let Some((set, start)) = stack.pop() {
            out.push(set.clone());
            for i in start..k {
                let class = &classes[k - 1 - i];
                let above = self.up[class.first().expect("classes are nonempty")].difference(class);
                if !set.intersects(class) && above.is_subset(&set) {
                    stack.push((set.union(class), i + 1));
                }
            }
        }
        let out: BTreeSet<BitSet> = out.into_iter().collect();
        Ok(out.into_iter().collect())
    }
}

/// A finite partial order with display labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    order: Preorder,
}

impl Poset {
    /// Builds a poset from `≤` pairs; the reflexive-transitive closure is
    /// applied and antisymmetry is validated.
    pub fn from_relations(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let n = labels.len();
        let mut up: Vec<BitSet> = (0..n).map(|_| BitSet::empty(n)).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(invalid_arg("relation mentions an unknown point"));
            }
            up[a].insert(b);
        }
        Self::new(labels, Preorder::closure_of(up))
    }

    pub fn new(labels: Vec<String>, order: Preorder) -> Result<Poset> {
        if labels.len() != order.len() {
            return Err(invalid_arg("label count differs from point count"));
        }
        for x in 0..order.len() {
            if !order.leq(x, x) {
                return Err(invalid_arg("order is not reflexive"));
            }
            for y in order.up(x).iter() {
                if !order.up(y).is_subset(order.up(x)) {
                    return Err(invalid_arg("order is not transitive"));
                }
            }
        }
        if let Some((a, b)) = order.antisymmetry_violation() {
            return Err(invalid_arg(format!(
                "order is not antisymmetric: {} and {}",
                labels[a], labels[b]
            )));
        }
        Ok(Poset { labels, order })
    }

    pub fn default_labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    /// `p0 < p1 < … < p(n-1)`.
    pub fn chain(n: usize) -> Poset {
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_relations(Self::default_labels(n), &pairs).expect("chain")
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_relations(Self::default_labels(n), &[]).expect("antichain")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn order(&self) -> &Preorder {
        &self.order
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.order.leq(x, y)
    }

    pub fn is_chain(&self) -> bool {
        self.order.is_total()
    }

    pub fn is_antichain(&self) -> bool {
        (0..self.len()).all(|x| self.order.up(x).len() == 1)
    }

    /// Strict covering pairs `(x, y)` with `x < y` and nothing in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in self.order.up(x).iter().filter(|&y| y != x) {
                let between = self
                    .order
                    .up(x)
                    .iter()
                    .any(|z| z != x && z != y && self.leq(z, y));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// One representative of every isomorphism class of posets on `n`
    /// points (`n ≤ 6`).
    pub fn all_up_to_iso(n: usize) -> Result<Vec<Poset>> {
        if n > 6 {
            return Err(Error::Resource {
                what: "points for poset enumeration",
                size: n,
                limit: 6,
            });
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let perms = permutations(n);
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut out = Vec::new();
        // every poset has a linear extension, so relations inside the natural
        // order i < j reach every isomorphism class
        for mask in 0u64..1 << pairs.len() {
            let rel = |i: usize, j: usize| {
                i == j || (i < j && mask >> pairs.iter().position(|&p| p == (i, j)).unwrap() & 1 == 1)
            };
            let transitive = (0..n).all(|i| {
                (i + 1..n).all(|j| !rel(i, j) || (j + 1..n).all(|k| !rel(j, k) || rel(i, k)))
            });
            if !transitive {
                continue;
            }
            let canon = perms
                .iter()
                .map(|p| {
                    let mut code = 0u64;
                    for i in 0..n {
                        for j in 0..n {
                            if rel(i, j) {
                                code |= 1 << (p[i] * n + p[j]);
                            }
                        }
                    }
                    code
                })
                .min()
                .unwrap_or(0);
            if seen.insert(canon) {
                let order = Preorder::from_fn(n, rel);
                out.push(Poset::new(Self::default_labels(n), order)?);
            }
        }
        Ok(out)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// A finite topological space presented by a sub-basis of open sets, with
/// its specialization preorder cached.
#[derive(Clone, Debug)]
pub struct FinSpace {
    labels: Vec<String>,
    subbasis: Vec<BitSet>,
    preorder: Preorder,
}

impl FinSpace {
    pub fn new(labels: Vec<String>, subbasis: Vec<BitSet>) -> Result<FinSpace> {
        let n = labels.len();
        if subbasis.iter().any(|s| s.universe() != n) {
            return Err(invalid_arg("subbasic open over the wrong point set"));
        }
        let subbasis: Vec<BitSet> = subbasis.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        // ↓y is the intersection of all subbasic opens containing y
        let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::full(n)).collect();
        for s in &subbasis {
            for y in s.iter() {
                down[y].intersect_with(s);
            }
        }
        let preorder = Preorder::from_fn(n, |x, y| down[y].contains(x));
        Ok(FinSpace {
            labels,
            subbasis,
            preorder,
        })
    }

    /// The space whose specialization order is the given poset:
    /// sub-basis `{X ∖ ↑x}`.
    pub fn from_poset(p: &Poset) -> FinSpace {
        let n = p.len();
        let subbasis = (0..n)
            .map(|x| p.order().up(x).complement())
            .filter(|s| !s.is_empty())
            .collect();
        FinSpace::new(p.labels().to_vec(), subbasis).expect("complements live on the same points")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn subbasis(&self) -> &[BitSet] {
        &self.subbasis
    }

    pub fn specialization_preorder(&self) -> &Preorder {
        &self.preorder
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.preorder.leq(x, y)
    }

    /// `Cl(S)`: the up-set generated by `S`.
    pub fn closure(&self, s: &BitSet) -> BitSet {
        self.preorder.up_closure(s)
    }

    /// `S^gen`: points that generize some point of `S`.
    pub fn generization(&self, s: &BitSet) -> BitSet {
        self.preorder.down_closure(s)
    }

    /// `S^sp`: points that specialize some point of `S`. Equal to `Cl(S)` in
    /// a finite space.
    pub fn specialization(&self, s: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| s.iter().any(|y| self.closure(&BitSet::singleton(self.len(), y)).contains(x))),
        )
    }

    pub fn is_open(&self, s: &BitSet) -> bool {
        self.preorder.is_down_set(s)
    }

    pub fn is_closed(&self, s: &BitSet) -> bool {
        self.preorder.is_up_set(s)
    }

    /// `⋂ {U open : x ∈ U}`, computed from the sub-basis.
    pub fn smallest_open(&self, x: usize) -> BitSet {
        let mut acc = BitSet::full(self.len());
        for s in self.subbasis.iter().filter(|s| s.contains(x)) {
            acc.intersect_with(s);
        }
        acc
    }

    fn label_set(&self, s: &BitSet) -> String {
        let parts: Vec<&str> = s.iter().map(|x| self.label(x)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn is_t0(&self) -> CheckReport {
        let mut r = CheckReport::new("t0", "");
        r.size("points", self.len());
        if let Some((a, b)) = self.preorder.antisymmetry_violation() {
            r.fail("points are topologically indistinguishable", [self.label(a), self.label(b)]);
        }
        r
    }

    /// Irreducibility of a closed set via its opens: nonempty, and any two
    /// nonempty open traces on it meet. The minimal opens `↓a` suffice, and
    /// among those the ones at minimal points of `c`, since `↓a ∩ ↓b` only
    /// shrinks as `a` and `b` go down.
    pub fn is_irreducible(&self, c: &BitSet) -> bool {
        if c.is_empty() {
            return false;
        }
        let downs: Vec<BitSet> = c
            .iter()
            .filter(|&a| {
                let mut below = self.preorder.down(a).intersection(c);
                below.difference_with(self.preorder.up(a));
                below.is_empty()
            })
            .map(|a| self.preorder.down(a).intersection(c))
            .collect();
        downs.iter().all(|da| downs.iter().all(|db| da.intersects(db)))
    }

    /// The irreducible closed sets: in a finite space these are the point
    /// closures `↑x`.
    pub fn irreducible_closed_sets(&self) -> Vec<BitSet> {
        let set: BTreeSet<BitSet> = (0..self.len()).map(|x| self.preorder.up(x).clone()).collect();
        set.into_iter().collect()
    }

    /// Definitional enumeration: closed sets that are not the union of two
    /// proper closed subsets. Small spaces only.
    pub fn irreducible_closed_sets_exhaustive(&self) -> Result<Vec<BitSet>> {
        let closed: Vec<BitSet> = self
            .generated_opens()?
            .into_iter()
            .map(|u| u.complement())
            .collect();
        let mut out: Vec<BitSet> = closed
            .iter()
            .filter(|c| !c.is_empty())
            .filter(|c| {
                let proper: Vec<&BitSet> = closed.iter().filter(|d| d.is_subset(c) && d != c).collect();
                !proper.iter().any(|a| proper.iter().any(|b| &a.union(b) == *c))
            })
            .cloned()
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn is_sober(&self) -> CheckReport {
        let mut r = CheckReport::new("sober", "");
        let irreducible = self.irreducible_closed_sets();
        r.size("irreducible_closed", irreducible.len());
        for c in &irreducible {
            if !self.is_irreducible(c) {
                r.fail("point closure is not irreducible", [self.label_set(c)]);
                break;
            }
            let generic: Vec<usize> = (0..self.len()).filter(|&x| self.preorder.up(x) == c).collect();
            if generic.len() != 1 {
                let mut items = alloc::vec![self.label_set(c)];
                items.extend(generic.iter().map(|&x| self.label(x).to_string()));
                r.fail("irreducible closed set without a unique generic point", items);
                break;
            }
        }
        r
    }

    /// Extracts a finite subcover of `target` from `cover`, if `cover` covers.
    pub fn finite_subcover(&self, target: &BitSet, cover: &[BitSet]) -> Option<Vec<usize>> {
        let mut left = target.clone();
        let mut picked = Vec::new();
        while let Some(x) = left.first() {
            let k = cover.iter().position(|u| u.contains(x))?;
            picked.push(k);
            left.difference_with(&cover[k]);
        }
        Some(picked)
    }

    /// Quasi-compactness of `s` against its finest open cover `{↓x : x ∈ s}`:
    /// a greedy pass must extract a subcover with at most `|s|` members.
    pub fn is_quasi_compact(&self, s: &BitSet) -> bool {
        let mut left = s.clone();
        let mut picked = 0;
        while let Some(x) = left.first() {
            left.difference_with(self.preorder.down(x));
            picked += 1;
            if picked > s.len() {
                return false;
            }
        }
        true
    }

    /// The four-condition spectral checklist: T0, quasi-compact, a basis of
    /// quasi-compact opens closed under finite intersections, sober.
    pub fn is_spectral(&self) -> CheckReport {
        let mut r = CheckReport::new("spectral", "");
        let n = self.len();
        r.size("points", n);
        r.size("subbasis", self.subbasis.len());
        let t0 = self.is_t0();
        r.absorb(&t0);
        let full = BitSet::full(n);
        r.require(self.is_quasi_compact(&full), || ("space is not quasi-compact".into(), Vec::new()));
        for s in &self.subbasis {
            if !r.require(self.is_open(s) && self.is_quasi_compact(s), || {
                ("subbasic open is not quasi-compact open".into(), alloc::vec![self.label_set(s)])
            }) {
                break;
            }
        }
        // basis {↓x}: pairwise intersections must again be quasi-compact
        // opens; on larger spaces each ↓x is checked instead
        if n > PAIRWISE_BASIS_LIMIT {
            for x in 0..n {
                let d = self.preorder.down(x);
                if !(self.is_open(d) && self.is_quasi_compact(d)) {
                    r.fail("basic open is not a quasi-compact open", [self.label(x)]);
                    break;
                }
            }
        } else {
            'outer: for a in 0..n {
                for b in a + 1..n {
                    let meet = self.preorder.down(a).intersection(self.preorder.down(b));
                    if !(self.is_open(&meet) && self.is_quasi_compact(&meet)) {
                        r.fail(
                            "basic opens do not meet in a quasi-compact open",
                            [self.label(a), self.label(b)],
                        );
                        break 'outer;
                    }
                }
            }
        }
        r.absorb(&self.is_sober());
        if r.passed != t0.passed {
            r.passed = false;
            r.witness.get_or_insert(crate::report::Witness {
                reason: "spectral verdict disagrees with T0 verdict on a finite space".into(),
                items: Vec::new(),
            });
        }
        r
    }

    /// Hochster inverse topology: closed sets generated by the opens of `X`,
    /// so the new sub-basis is the complements of the old one.
    pub fn inverse_space(&self) -> Result<FinSpace> {
        if let Some((a, b)) = self.preorder.antisymmetry_violation() {
            return Err(invalid_arg(format!(
                "inverse topology needs a T0 space; {} and {} are indistinguishable",
                self.label(a),
                self.label(b)
            )));
        }
        let subbasis = self.subbasis.iter().map(|s| s.complement()).collect();
        FinSpace::new(self.labels.clone(), subbasis)
    }

    /// Sub-basis indistinguishability classes.
    pub fn constructible_classes(&self) -> Vec<BitSet> {
        self.preorder.classes()
    }

    /// `Y` is closed in the constructible topology iff `Y(𝒱_y) ⊆ Y` for every
    /// principal ultrafilter, i.e. iff `Y` is a union of classes.
    pub fn constructible_closed(&self, y: &BitSet) -> CheckReport {
        let mut r = CheckReport::new("constructible_closed", "");
        r.size("subset", y.len());
        let fixpoints = self.ultrafilter_fixpoint_sets();
        for p in y.iter() {
            let fix = &fixpoints[p];
            if let Some(q) = fix.difference(y).first() {
                r.fail("ultrafilter limit escapes the subset", [self.label(p), self.label(q)]);
                break;
            }
        }
        r
    }

    /// `X(𝒰_x)` for the principal ultrafilter at `x`: the points lying in
    /// exactly the same subbasic opens as `x`.
    pub fn ultrafilter_fixpoints(&self, x: usize) -> BitSet {
        BitSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&z| self.subbasis.iter().all(|s| s.contains(z) == s.contains(x))),
        )
    }

    /// `X(𝒰_x)` for every `x` at once, grouping points by the set of subbasic
    /// opens they lie in.
    pub fn ultrafilter_fixpoint_sets(&self) -> Vec<BitSet> {
        let n = self.len();
        let mut sig: Vec<BitSet> = (0..n).map(|_| BitSet::empty(self.subbasis.len())).collect();
        for (k, s) in self.subbasis.iter().enumerate() {
            for z in s.iter() {
                sig[z].insert(k);
            }
        }
        let mut groups: alloc::collections::BTreeMap<&BitSet, BitSet> = alloc::collections::BTreeMap::new();
        for (z, g) in sig.iter().enumerate() {
            groups.entry(g).or_insert_with(|| BitSet::empty(n)).insert(z);
        }
        sig.iter().map(|g| groups[g].clone()).collect()
    }

    /// Krull dimension: longest chain of irreducible closed sets, −1 if empty.
    pub fn dimension(&self) -> i64 {
        self.preorder.height()
    }

    /// Explicit topology generated by the sub-basis: finite intersections,
    /// then unions. Test oracle for the Alexandrov reduction.
    pub fn generated_opens(&self) -> Result<Vec<BitSet>> {
        let n = self.len();
        if n > EXPLICIT_OPEN_LIMIT {
            return Err(Error::Resource {
                what: "points for explicit topology",
                size: n,
                limit: EXPLICIT_OPEN_LIMIT,
            });
        }
        let mut basis: BTreeSet<BitSet> = BTreeSet::new();
        basis.insert(BitSet::full(n));
        for s in &self.subbasis {
            let current: Vec<BitSet> = basis.iter().cloned().collect();
            for b in current {
                basis.insert(b.intersection(s));
            }
        }
        let mut opens: BTreeSet<BitSet> = BTreeSet::new();
        opens.insert(BitSet::empty(n));
        for b in &basis {
            let current: Vec<BitSet> = opens.iter().cloned().collect();
            for u in current {
                opens.insert(u.union(b));
            }
        }
        Ok(opens.into_iter().collect())
    }

    /// Opens derived from the preorder: all down-sets.
    pub fn opens_from_preorder(&self) -> Result<Vec<BitSet>> {
        let mut out: Vec<BitSet> = self
            .preorder
            .up_sets()?
            .into_iter()
            .map(|c| c.complement())
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Points of `family` with sub-basis `D(x) = {N : x ∉ N}` for `x ∈ M`.
pub fn hull_kernel_space(family: &[Submodule], module: &FiniteModule) -> FinSpace {
    hull_kernel_space_labeled(family, module.size(), family.iter().map(|n| module.submodule_label(n)).collect())
}

/// Hull-kernel space over an arbitrary universe with caller-chosen labels.
pub fn hull_kernel_space_labeled(family: &[BitSet], universe: usize, labels: Vec<String>) -> FinSpace {
    let k = family.len();
    let subbasis = (0..universe)
        .map(|x| BitSet::from_indices(k, (0..k).filter(|&i| !family[i].contains(x))))
        .collect();
    FinSpace::new(labels, subbasis).expect("labels match family")
}

/// Set inclusion on a family, as a preorder.
pub fn inclusion_preorder(family: &[BitSet]) -> Preorder {
    Preorder::from_fn(family.len(), |a, b| family[a].is_subset(&family[b]))
}

/// A total point map between finite spaces.
#[derive(Clone, Debug)]
pub struct SpaceMap<'a> {
    pub source: &'a FinSpace,
    pub target: &'a FinSpace,
    pub image: Vec<usize>,
}

impl<'a> SpaceMap<'a> {
    pub fn new(source: &'a FinSpace, target: &'a FinSpace, image: Vec<usize>) -> Result<SpaceMap<'a>> {
        if image.len() != source.len() || image.iter().any(|&y| y >= target.len()) {
            return Err(invalid_arg("map is not total into the target"));
        }
        Ok(SpaceMap { source, target, image })
    }

    fn pair(&self, a: usize, b: usize) -> [String; 2] {
        [self.source.label(a).to_string(), self.source.label(b).to_string()]
    }

    /// Continuity as order preservation of specialization.
    pub fn check_continuous(&self) -> CheckReport {
        let mut r = CheckReport::new("continuous", "");
        let n = self.source.len();
        'outer: for a in 0..n {
            for b in self.source.specialization_preorder().up(a).iter() {
                if !self.target.leq(self.image[a], self.image[b]) {
                    r.fail("map does not preserve specialization", self.pair(a, b));
                    break 'outer;
                }
            }
        }
        r
    }

    /// Preimages of subbasic opens are quasi-compact opens; computed from the
    /// sub-basis and checked against [`Self::check_continuous`].
    pub fn check_spectral_map(&self) -> CheckReport {
        let mut r = CheckReport::new("spectral_map", "");
        for s in self.target.subbasis() {
            let pre = BitSet::from_indices(
                self.source.len(),
                (0..self.source.len()).filter(|&x| s.contains(self.image[x])),
            );
            if !(self.source.is_open(&pre) && self.source.is_quasi_compact(&pre)) {
                r.fail(
                    "preimage of a subbasic open is not a quasi-compact open",
                    [self.target.label_set(s)],
                );
                break;
            }
        }
        let cont = self.check_continuous();
        if cont.passed != r.passed {
            r.passed = false;
            r.witness.get_or_insert(crate::report::Witness {
                reason: "spectral-map verdict disagrees with continuity".into(),
                items: Vec::new(),
            });
        }
        r
    }

    fn injectivity_violation(&self) -> Option<(usize, usize)> {
        let n = self.source.len();
        (0..n).find_map(|a| (a + 1..n).find(|&b| self.image[a] == self.image[b]).map(|b| (a, b)))
    }

    /// Injective and an order isomorphism onto the image.
    pub fn check_embedding(&self) -> CheckReport {
        let mut r = CheckReport::new("embedding", "");
        if let Some((a, b)) = self.injectivity_violation() {
            r.fail("map is not injective", self.pair(a, b));
            return r;
        }
        let n = self.source.len();
        'outer: for a in 0..n {
            for b in 0..n {
                if self.source.leq(a, b) != self.target.leq(self.image[a], self.image[b]) {
                    r.fail("order is not reflected", self.pair(a, b));
                    break 'outer;
                }
            }
        }
        r
    }

    /// Bijective order isomorphism.
    pub fn check_homeo(&self) -> CheckReport {
        let mut r = CheckReport::new("homeomorphism", "");
        r.size("points", self.source.len());
        if self.source.len() != self.target.len() {
            r.fail(
                "point counts differ",
                [format!("{}", self.source.len()), format!("{}", self.target.len())],
            );
            return r;
        }
        let e = self.check_embedding();
        r.absorb(&e);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::Ring;
    use crate::modlat::{IdealLattice, SubmoduleLattice};
    use alloc::sync::Arc;

    #[test]
    fn up_sets_of_a_preorder_move_classes_together() {
        // 0 ~ 1 below 2
        let p = Preorder::from_fn(3, |x, y| x == y || y == 2 || (x < 2 && y < 2));
        let sets: Vec<Vec<usize>> = p.up_sets().unwrap().iter().map(|s| s.to_vec()).collect();
        assert_eq!(sets, alloc::vec![alloc::vec![], alloc::vec![2], alloc::vec![0, 1, 2]]);
    }

    fn set(n: usize, xs: &[usize]) -> BitSet {
        BitSet::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn poset_spaces() {
        let c2 = FinSpace::from_poset(&Poset::chain(2));
        assert_eq!(c2.subbasis(), &[set(2, &[0])]);
        assert_eq!(c2.generated_opens().unwrap(), [set(2, &[]), set(2, &[0]), set(2, &[0, 1])]);
        let a3 = FinSpace::from_poset(&Poset::antichain(3));
        assert_eq!(a3.generated_opens().unwrap().len(), 8);
        let one = FinSpace::from_poset(&Poset::chain(1));
        assert_eq!(one.generated_opens().unwrap().len(), 2);
        for p in Poset::all_up_to_iso(4).unwrap() {
            let x = FinSpace::from_poset(&p);
            assert_eq!(x.specialization_preorder(), p.order());
        }
    }

    #[test]
    fn poset_counts_up_to_iso() {
        let counts: Vec<usize> = (0..=5).map(|n| Poset::all_up_to_iso(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn preorder_edge_cases() {
        let discrete = FinSpace::new(
            Poset::default_labels(3),
            (0..3).map(|i| set(3, &[i]).complement()).collect(),
        )
        .unwrap();
        assert_eq!(discrete.specialization_preorder(), &Preorder::from_fn(3, |a, b| a == b));
        let blob = FinSpace::new(Poset::default_labels(2), Vec::new()).unwrap();
        assert!(blob.leq(0, 1) && blob.leq(1, 0));
        let t0 = blob.is_t0();
        assert!(!t0.passed);
        assert_eq!(t0.witness.unwrap().items, ["p0", "p1"]);
        assert!(!blob.is_spectral().passed);
    }

    #[test]
    fn closures_on_chain() {
        let c2 = FinSpace::from_poset(&Poset::chain(2));
        let x = set(2, &[0]);
        assert_eq!(c2.closure(&x), set(2, &[0, 1]));
        assert_eq!(c2.generization(&x), x);
        assert_eq!(c2.specialization(&x), c2.closure(&x));
        let all = BitSet::full(2);
        assert_eq!(c2.closure(&all), all);
        assert_eq!(c2.generization(&all), all);
        let none = BitSet::empty(2);
        assert_eq!(c2.closure(&none), none);
        assert_eq!(c2.generization(&none), none);
    }

    #[test]
    fn irreducibles_and_dimension() {
        let c2 = FinSpace::from_poset(&Poset::chain(2));
        assert_eq!(c2.irreducible_closed_sets(), [set(2, &[1]), set(2, &[0, 1])]);
        assert_eq!(c2.irreducible_closed_sets_exhaustive().unwrap(), c2.irreducible_closed_sets());
        let a3 = FinSpace::from_poset(&Poset::antichain(3));
        assert_eq!(a3.irreducible_closed_sets().len(), 3);
        let empty = FinSpace::new(Vec::new(), Vec::new()).unwrap();
        assert!(empty.irreducible_closed_sets().is_empty());
        assert_eq!(empty.dimension(), -1);
        assert!(empty.is_spectral().passed);
        assert_eq!(FinSpace::from_poset(&Poset::chain(3)).dimension(), 2);
        assert_eq!(a3.dimension(), 0);
    }

    #[test]
    fn inverse_and_constructible() {
        let c2 = FinSpace::from_poset(&Poset::chain(2));
        let inv = c2.inverse_space().unwrap();
        assert_eq!(inv.specialization_preorder(), &c2.specialization_preorder().opposite());
        let back = inv.inverse_space().unwrap();
        assert_eq!(back.specialization_preorder(), c2.specialization_preorder());
        let blob = FinSpace::new(Poset::default_labels(2), Vec::new()).unwrap();
        assert!(matches!(blob.inverse_space(), Err(Error::InvalidArgument(_))));

        assert!(c2.constructible_closed(&set(2, &[1])).passed);
        assert!(c2.constructible_closed(&set(2, &[])).passed);
        let r = blob.constructible_closed(&set(2, &[0]));
        assert!(!r.passed);
        assert_eq!(r.witness.unwrap().items, ["p0", "p1"]);
        assert_eq!(blob.ultrafilter_fixpoints(0), set(2, &[0, 1]));
        assert_eq!(c2.ultrafilter_fixpoints(1), set(2, &[1]));
    }

    #[test]
    fn hull_kernel_orders() {
        let z6 = IdealLattice::new(Arc::new(Ring::zmod(6).unwrap())).unwrap();
        let ids = z6.ideals(false);
        let x = hull_kernel_space(ids, z6.module());
        assert_eq!(x.specialization_preorder(), &inclusion_preorder(ids));
        let z12 = IdealLattice::new(Arc::new(Ring::zmod(12).unwrap())).unwrap();
        let spec = hull_kernel_space(z12.spec(), z12.module());
        assert_eq!(spec.specialization_preorder(), &Preorder::from_fn(2, |a, b| a == b));
        let z4 = IdealLattice::new(Arc::new(Ring::zmod(4).unwrap())).unwrap();
        let x = hull_kernel_space(z4.ideals(false), z4.module());
        assert!(x.specialization_preorder().is_total());
        assert_eq!(x.dimension(), 2);
        let v = Arc::new(
            crate::modlat::ModuleSpec {
                ring: crate::finring::RingSpec::ZMod(2),
                summands: alloc::vec![Vec::new(), Vec::new()],
            }
            .build()
            .unwrap(),
        );
        let lat = SubmoduleLattice::enumerate(v.clone()).unwrap();
        assert!(hull_kernel_space(lat.members(), &v).is_spectral().passed);
    }

    #[test]
    fn maps() {
        let c2 = FinSpace::from_poset(&Poset::chain(2));
        let id = SpaceMap::new(&c2, &c2, alloc::vec![0, 1]).unwrap();
        assert!(id.check_homeo().passed);
        assert!(id.check_spectral_map().passed);
        let pt = FinSpace::from_poset(&Poset::chain(1));
        let k = SpaceMap::new(&c2, &pt, alloc::vec![0, 0]).unwrap();
        assert!(k.check_continuous().passed);
        assert!(k.check_spectral_map().passed);
        assert!(!k.check_embedding().passed);
        let swap = SpaceMap::new(&c2, &c2, alloc::vec![1, 0]).unwrap();
        assert!(!swap.check_continuous().passed);
        assert!(!swap.check_spectral_map().passed);
    }
}
