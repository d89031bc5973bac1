//! Poset and space JSON, report JSON and DOT Hasse diagrams.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use spectral_core::bitset::BitSet;
use spectral_core::report::{CheckReport, Witness};
use spectral_core::topo::{FinSpace, Poset, Preorder};

use crate::error::KitError;

/// `{"points": ["x","y"], "leq": [["x","y"]]}`; reflexive and transitive
/// closure is applied on load and antisymmetry is validated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub points: Vec<String>,
    #[serde(default)]
    pub leq: Vec<[String; 2]>,
}

fn index_of(points: &[String], name: &str) -> Result<usize, KitError> {
    points
        .iter()
        .position(|p| p == name)
        .ok_or_else(|| KitError::Parse(format!("unknown point {name:?}")))
}

fn check_unique(points: &[String]) -> Result<(), KitError> {
    let mut seen = std::collections::BTreeSet::new();
    for p in points {
        if !seen.insert(p) {
            return Err(KitError::Parse(format!("duplicate point {p:?}")));
        }
    }
    Ok(())
}

impl PosetJson {
    pub fn to_poset(&self) -> Result<Poset, KitError> {
        check_unique(&self.points)?;
        let pairs = self
            .leq
            .iter()
            .map(|[a, b]| Ok((index_of(&self.points, a)?, index_of(&self.points, b)?)))
            .collect::<Result<Vec<_>, KitError>>()?;
        Ok(Poset::from_relations(self.points.clone(), &pairs)?)
    }

    /// The cover relations of a poset.
    pub fn from_poset(p: &Poset) -> PosetJson {
        let labels = p.labels();
        PosetJson {
            points: labels.to_vec(),
            leq: p
                .covers()
                .into_iter()
                .map(|(a, b)| [labels[a].clone(), labels[b].clone()])
                .collect(),
        }
    }
}

/// `{"points": [...], "subbasis_opens": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub points: Vec<String>,
    pub subbasis_opens: Vec<Vec<String>>,
}

impl SpaceJson {
    pub fn to_space(&self) -> Result<FinSpace, KitError> {
        check_unique(&self.points)?;
        let n = self.points.len();
        let subbasis = self
            .subbasis_opens
            .iter()
            .map(|open| {
                let idx = open
                    .iter()
                    .map(|name| index_of(&self.points, name))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(BitSet::from_indices(n, idx))
            })
            .collect::<Result<Vec<_>, KitError>>()?;
        Ok(FinSpace::new(self.points.clone(), subbasis)?)
    }
}

fn names(space: &FinSpace, s: &BitSet) -> Vec<String> {
    s.iter().map(|x| space.label(x).to_string()).collect()
}

/// A topology dump: the space JSON plus its specialization order as the
/// list of pairs `x ≤ y` with `x ≠ y`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TopologyJson {
    pub space: String,
    pub points: Vec<String>,
    pub subbasis_opens: Vec<Vec<String>>,
    pub preorder: Vec<[String; 2]>,
    pub t0: bool,
    pub dimension: i64,
}

impl TopologyJson {
    pub fn new(title: &str, space: &FinSpace) -> TopologyJson {
        let n = space.len();
        let mut preorder = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && space.leq(x, y) {
                    preorder.push([space.label(x).to_string(), space.label(y).to_string()]);
                }
            }
        }
        TopologyJson {
            space: title.to_string(),
            points: space.labels().to_vec(),
            subbasis_opens: space.subbasis().iter().map(|s| names(space, s)).collect(),
            preorder,
            t0: space.is_t0().passed,
            dimension: space.dimension(),
        }
    }
}

/// One report line in the JSON schema
/// `{check, instance, passed, witness?, elapsed_ms, sizes}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub check: String,
    pub instance: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    /// `null` unless timings were requested, so that reports stay
    /// byte-identical across runs.
    pub elapsed_ms: Option<f64>,
    pub sizes: BTreeMap<String, i64>,
}

impl ReportJson {
    pub fn new(report: CheckReport, elapsed_ms: Option<f64>) -> ReportJson {
        ReportJson {
            check: report.check,
            instance: report.instance,
            passed: report.passed,
            witness: report.witness,
            elapsed_ms,
            sizes: report.sizes,
        }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram of a preorder, drawn on its classes of equivalent points
/// (joined with `~`), edges from lower to upper covers.
pub fn hasse_dot(title: &str, labels: &[String], order: &Preorder) -> String {
    let classes = order.classes();
    let k = classes.len();
    let rep: Vec<usize> = classes.iter().map(|c| c.first().expect("classes are nonempty")).collect();
    let below = |a: usize, b: usize| a != b && order.leq(rep[a], rep[b]);
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", dot_escape(title));
    out.push_str("  rankdir=BT;\n  node [shape=box];\n");
    for (i, c) in classes.iter().enumerate() {
        let label: Vec<&str> = c.iter().map(|x| labels[x].as_str()).collect();
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(&label.join(" ~ ")));
    }
    for a in 0..k {
        for b in 0..k {
            if below(a, b) && !(0..k).any(|c| below(a, c) && below(c, b)) {
                let _ = writeln!(out, "  n{a} -> n{b};");
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn space_dot(title: &str, space: &FinSpace) -> String {
    hasse_dot(title, space.labels(), space.specialization_preorder())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_json_closure_and_validation() {
        let pj: PosetJson = serde_json::from_str(r#"{"points":["a","b","c"],"leq":[["a","b"],["b","c"]]}"#).unwrap();
        let p = pj.to_poset().unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(PosetJson::from_poset(&p), pj);
        let cyc: PosetJson = serde_json::from_str(r#"{"points":["a","b"],"leq":[["a","b"],["b","a"]]}"#).unwrap();
        assert!(cyc.to_poset().is_err());
        let dup: PosetJson = serde_json::from_str(r#"{"points":["a","a"]}"#).unwrap();
        assert!(dup.to_poset().is_err());
    }

    #[test]
    fn space_json_indistinguishable() {
        let sj: SpaceJson = serde_json::from_str(r#"{"points":["a","b"],"subbasis_opens":[]}"#).unwrap();
        let s = sj.to_space().unwrap();
        assert!(!s.is_t0().passed);
        let dot = space_dot("s", &s);
        assert!(dot.contains("a ~ b"));
    }

    #[test]
    fn chain_dot() {
        let p = Poset::chain(3);
        let dot = hasse_dot("c", p.labels(), p.order());
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.contains("n1 -> n2;"));
        assert!(!dot.contains("n0 -> n2;"));
    }
}
