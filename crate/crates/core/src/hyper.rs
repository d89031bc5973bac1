//! The hyperspace `X′(X)` of nonempty closed subsets of a finite T0 space,
//! with its Zariski, lower-Vietoris and upper-Vietoris topologies, and the
//! maps `φ′`, `J` and `V`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::error::{invalid_arg, Error, Result};
use crate::modlat::{Ideal, IdealLattice};
use crate::topo::{FinSpace, SpaceMap};

/// Bases with more points than this are refused (the hyperspace can have
/// `2^n − 1` points).
pub const HYPERSPACE_BASE_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    Zariski,
    LowerVietoris,
    UpperVietoris,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Zariski => "zariski",
            Flavor::LowerVietoris => "lower-vietoris",
            Flavor::UpperVietoris => "upper-vietoris",
        }
    }
}

/// `X′(X)` with one of its three topologies. All flavors over the same base
/// share the same point list, so maps between flavors are index-preserving.
#[derive(Clone, Debug)]
pub struct HyperSpace {
    pub flavor: Flavor,
    pub points: Vec<BitSet>,
    pub space: FinSpace,
}

fn check_base(base: &FinSpace, limit: usize) -> Result<()> {
    if base.len() > limit {
        return Err(Error::Resource {
            what: "base points for hyperspace",
            size: base.len(),
            limit,
        });
    }
    if let Some((a, b)) = base.specialization_preorder().antisymmetry_violation() {
        return Err(invalid_arg(format!(
            "hyperspace needs a T0 base; {} and {} are indistinguishable",
            base.label(a),
            base.label(b)
        )));
    }
    Ok(())
}

/// Renders a closed set as a brace list of base labels.
pub fn closed_set_label(base: &FinSpace, c: &BitSet) -> String {
    let parts: Vec<&str> = c.iter().map(|x| base.label(x)).collect();
    format!("{{{}}}", parts.join(", "))
}

/// All nonempty closed subsets (up-sets) of a T0 base, in canonical order.
pub fn closed_nonempty(base: &FinSpace) -> Result<Vec<BitSet>> {
    closed_nonempty_with_limit(base, HYPERSPACE_BASE_LIMIT)
}

pub fn closed_nonempty_with_limit(base: &FinSpace, limit: usize) -> Result<Vec<BitSet>> {
    check_base(base, limit)?;
    Ok(base
        .specialization_preorder()
        .up_sets()?
        .into_iter()
        .filter(|c| !c.is_empty())
        .collect())
}

fn build(base: &FinSpace, points: Vec<BitSet>, flavor: Flavor, subbasis: Vec<BitSet>) -> Result<HyperSpace> {
    let labels = points.iter().map(|c| closed_set_label(base, c)).collect();
    let space = FinSpace::new(labels, subbasis)?;
    Ok(HyperSpace { flavor, points, space })
}

fn members_where(points: &[BitSet], pred: impl Fn(&BitSet) -> bool) -> BitSet {
    BitSet::from_indices(points.len(), (0..points.len()).filter(|&i| pred(&points[i])))
}

/// Zariski topology on `X′(X)`. The sub-basis is `U′(↓x) = {C : x ∉ C}`;
/// since `U′(Ω₁ ∪ Ω₂) = U′(Ω₁) ∩ U′(Ω₂)` and every open is a union of
/// principal opens `↓x`, these generate every `U′(Ω)`.
pub fn zariski_hyperspace(base: &FinSpace) -> Result<HyperSpace> {
    zariski_hyperspace_with_limit(base, HYPERSPACE_BASE_LIMIT)
}

pub fn zariski_hyperspace_with_limit(base: &FinSpace, limit: usize) -> Result<HyperSpace> {
    let points = closed_nonempty_with_limit(base, limit)?;
    let subbasis = (0..base.len())
        .map(|x| members_where(&points, |c| !c.contains(x)))
        .collect();
    build(base, points, Flavor::Zariski, subbasis)
}

/// The full family `{U′(Ω) : Ω open}`, indexed like `opens`.
pub fn zariski_basis(points: &[BitSet], opens: &[BitSet]) -> Vec<BitSet> {
    opens
        .iter()
        .map(|omega| members_where(points, |c| !c.intersects(omega)))
        .collect()
}

/// Checks `U′(Ω₁) ∩ U′(Ω₂) = U′(Ω₁ ∪ Ω₂)` over all pairs of the given opens.
/// Returns the first failing pair of open indices.
pub fn check_basis_law(points: &[BitSet], opens: &[BitSet]) -> Option<(usize, usize)> {
    let u = |omega: &BitSet| members_where(points, |c| !c.intersects(omega));
    let family: Vec<BitSet> = opens.iter().map(u).collect();
    for i in 0..opens.len() {
        for j in i..opens.len() {
            if family[i].intersection(&family[j]) != u(&opens[i].union(&opens[j])) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Lower Vietoris: sub-basis `U⁻ = {C : C ∩ U ≠ ∅}`. Because
/// `(⋃ Uᵢ)⁻ = ⋃ Uᵢ⁻`, the principal opens `↓x` suffice, giving
/// `(↓x)⁻ = {C : x ∈ C}`.
pub fn lower_vietoris(base: &FinSpace) -> Result<HyperSpace> {
    lower_vietoris_with_limit(base, HYPERSPACE_BASE_LIMIT)
}

pub fn lower_vietoris_with_limit(base: &FinSpace, limit: usize) -> Result<HyperSpace> {
    let points = closed_nonempty_with_limit(base, limit)?;
    let subbasis = (0..base.len())
        .map(|x| members_where(&points, |c| c.contains(x)))
        .collect();
    build(base, points, Flavor::LowerVietoris, subbasis)
}

/// Lower Vietoris with `U` ranging over every open of the base. Oracle for
/// [`lower_vietoris`].
pub fn lower_vietoris_all_opens(base: &FinSpace) -> Result<HyperSpace> {
    let points = closed_nonempty(base)?;
    let opens = base.opens_from_preorder()?;
    let subbasis = opens
        .iter()
        .map(|u| members_where(&points, |c| c.intersects(u)))
        .collect();
    build(base, points, Flavor::LowerVietoris, subbasis)
}

/// Zariski with `Ω` ranging over every open of the base. Oracle for
/// [`zariski_hyperspace`].
pub fn zariski_all_opens(base: &FinSpace) -> Result<HyperSpace> {
    let points = closed_nonempty(base)?;
    let opens = base.opens_from_preorder()?;
    let subbasis = zariski_basis(&points, &opens);
    build(base, points, Flavor::Zariski, subbasis)
}

/// Upper Vietoris: basis `U⁺ = {C : C ⊆ U}` over every open `U`.
pub fn upper_vietoris(base: &FinSpace) -> Result<HyperSpace> {
    let points = closed_nonempty(base)?;
    let opens = base.opens_from_preorder()?;
    let subbasis = opens
        .iter()
        .map(|u| members_where(&points, |c| c.is_subset(u)))
        .collect();
    build(base, points, Flavor::UpperVietoris, subbasis)
}

/// `φ′ : X^inv → X′(X)^zar`, `x ↦ Cl({x})`, with both spaces.
#[derive(Clone, Debug)]
pub struct PhiPrime {
    pub inverse: FinSpace,
    pub hyper: HyperSpace,
    pub image: Vec<usize>,
}

impl PhiPrime {
    pub fn new(base: &FinSpace) -> Result<PhiPrime> {
        let hyper = zariski_hyperspace(base)?;
        let inverse = base.inverse_space()?;
        let image = (0..base.len())
            .map(|x| {
                let cl = base.closure(&BitSet::singleton(base.len(), x));
                hyper
                    .points
                    .binary_search(&cl)
                    .map_err(|_| Error::Internal("point closure missing from hyperspace".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PhiPrime { inverse, hyper, image })
    }

    pub fn map(&self) -> SpaceMap<'_> {
        SpaceMap {
            source: &self.inverse,
            target: &self.hyper.space,
            image: self.image.clone(),
        }
    }
}

/// `J(C) = ⋂ {P : P ∈ C}` for a nonempty set of primes (indices into
/// `lattice.spec()`).
pub fn j_map(lattice: &IdealLattice, c: &BitSet) -> Result<Ideal> {
    if c.is_empty() {
        return Err(invalid_arg("J is undefined on the empty closed set"));
    }
    let mut acc = BitSet::full(lattice.ring().size());
    for p in c.iter() {
        acc.intersect_with(&lattice.spec()[p]);
    }
    Ok(acc)
}

/// `V(H) = {P ∈ Spec(R) : H ⊆ P}` as a set of prime indices.
pub fn v_map(lattice: &IdealLattice, h: &Ideal) -> BitSet {
    let spec = lattice.spec();
    BitSet::from_indices(spec.len(), (0..spec.len()).filter(|&i| h.is_subset(&spec[i])))
}
