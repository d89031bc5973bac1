use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// A counterexample attached to a failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub reason: String,
    /// Offending points, submodules or open sets, rendered as labels.
    pub items: Vec<String>,
}

/// Verdict of one checker on one instance. `witness` is present exactly
/// when `passed` is false.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub passed: bool,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none", default))]
    pub witness: Option<Witness>,
    pub sizes: BTreeMap<String, i64>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, instance: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            instance: instance.into(),
            passed: true,
            witness: None,
            sizes: BTreeMap::new(),
        }
    }

    pub fn size(&mut self, key: &str, value: impl TryInto<i64>) -> &mut Self {
        self.sizes.insert(key.to_string(), value.try_into().unwrap_or(i64::MAX));
        self
    }

    /// Records a failure. Only the first failure is kept.
    pub fn fail<I, S>(&mut self, reason: impl Into<String>, items: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if self.passed {
            self.passed = false;
            self.witness = Some(Witness {
                reason: reason.into(),
                items: items.into_iter().map(Into::into).collect(),
            });
        }
        self
    }

    /// Records a failure when `ok` is false; the witness is built lazily.
    pub fn require<F>(&mut self, ok: bool, witness: F) -> bool
    where
        F: FnOnce() -> (String, Vec<String>),
    {
        if !ok {
            let (reason, items) = witness();
            self.fail(reason, items);
        }
        ok
    }

    /// Folds a sub-check into this report, prefixing its failure reason.
    pub fn absorb(&mut self, sub: &CheckReport) -> bool {
        if let Some(w) = &sub.witness {
            let reason = alloc::format!("{}: {}", sub.check, w.reason);
            self.fail(reason, w.items.iter().cloned());
        }
        sub.passed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_failure_wins() {
        let mut r = CheckReport::new("demo", "Z/6");
        assert!(r.passed && r.witness.is_none());
        r.fail("first", ["a"]);
        r.fail("second", ["b"]);
        assert!(!r.passed);
        assert_eq!(r.witness.as_ref().unwrap().reason, "first");
    }

    #[test]
    fn absorb_prefixes_reason() {
        let mut sub = CheckReport::new("t0", "x");
        sub.fail("pair", ["p", "q"]);
        let mut top = CheckReport::new("spectral", "x");
        assert!(!top.absorb(&sub));
        assert_eq!(top.witness.unwrap().reason, "t0: pair");
    }
}
