use std::collections::BTreeMap;
use std::fmt;

use super::{Elem, FiniteRig, RigError};

/// Cardinality class of the index set mapped to one carrier element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinality {
    /// `n ≥ 1` indices.
    Finite(u64),
    /// Countably many indices.
    Infinite,
}

impl Cardinality {
    fn plus(self, other: Cardinality) -> Cardinality {
        match (self, other) {
            (Cardinality::Finite(a), Cardinality::Finite(b)) => {
                a.checked_add(b).map_or(Cardinality::Infinite, Cardinality::Finite)
            }
            _ => Cardinality::Infinite,
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => f.write_str("inf"),
        }
    }
}

/// An indexed family of rig elements up to reindexing: how many indices
/// carry each element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FamilyDescriptor {
    support: BTreeMap<Elem, Cardinality>,
}

impl FamilyDescriptor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(e: Elem) -> Self {
        let mut support = BTreeMap::new();
        support.insert(e, Cardinality::Finite(1));
        FamilyDescriptor { support }
    }

    /// Family with one index per listed element; repeats merge.
    pub fn from_elems<I: IntoIterator<Item = Elem>>(items: I) -> Self {
        let mut fam = Self::new();
        for e in items {
            fam.insert(e, Cardinality::Finite(1));
        }
        fam
    }

    /// Adds `count` more indices carrying `e`. A finite count of zero is
    /// rejected.
    pub fn with(mut self, e: Elem, count: Cardinality) -> Result<Self, RigError> {
        if count == Cardinality::Finite(0) {
            return Err(RigError::MalformedTable {
                table: "family",
                detail: "cardinalities must be positive".into(),
            });
        }
        self.insert(e, count);
        Ok(self)
    }

    fn insert(&mut self, e: Elem, count: Cardinality) {
        let slot = self.support.entry(e).or_insert(Cardinality::Finite(0));
        *slot = slot.plus(count);
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.support.values().all(|c| matches!(c, Cardinality::Finite(_)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Elem, Cardinality)> + '_ {
        self.support.iter().map(|(&e, &c)| (e, c))
    }

    /// Disjoint union of the two index sets.
    pub fn merged(&self, other: &FamilyDescriptor) -> FamilyDescriptor {
        let mut out = self.clone();
        for (e, c) in other.iter() {
            out.insert(e, c);
        }
        out
    }

    /// Applies `f` to every member, merging collisions.
    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> FamilyDescriptor {
        let mut out = FamilyDescriptor::new();
        for (e, c) in self.iter() {
            out.insert(f(e), c);
        }
        out
    }

    pub fn display(&self, rig: &FiniteRig) -> String {
        let parts: Vec<String> = self.iter().map(|(e, c)| format!("{}:{}", rig.label(e), c)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Descriptors with per-element counts drawn from {absent, 1, 2, ∞}.
    /// Carriers above four elements only get supports of size at most two.
    pub(crate) fn enumerate_small(rig: &FiniteRig) -> Vec<FamilyDescriptor> {
        const COUNTS: [Option<Cardinality>; 4] = [
            None,
            Some(Cardinality::Finite(1)),
            Some(Cardinality::Finite(2)),
            Some(Cardinality::Infinite),
        ];
        let n = rig.size();
        let max_support = if n <= 4 { n } else { 2 };
        let mut out = Vec::new();
        let total = 4usize.pow(n.min(8) as u32);
        if n <= 8 {
            for code in 0..total {
                let mut fam = FamilyDescriptor::new();
                let mut c = code;
                for e in rig.elements() {
                    if let Some(card) = COUNTS[c % 4] {
                        fam.insert(e, card);
                    }
                    c /= 4;
                }
                if fam.support.len() <= max_support {
                    out.push(fam);
                }
            }
        } else {
            out.push(FamilyDescriptor::new());
            for a in rig.elements() {
                for ca in COUNTS.iter().flatten() {
                    out.push(FamilyDescriptor::new().with(a, *ca).unwrap());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use proptest::prelude::*;

    fn arb_family(n: u8) -> impl Strategy<Value = FamilyDescriptor> {
        proptest::collection::vec((0..n, 0u8..4), 0..4).prop_map(|items| {
            let mut fam = FamilyDescriptor::new();
            for (e, k) in items {
                let c = match k {
                    0 => Cardinality::Finite(1),
                    1 => Cardinality::Finite(2),
                    2 => Cardinality::Finite(5),
                    _ => Cardinality::Infinite,
                };
                fam.insert(Elem(e), c);
            }
            fam
        })
    }

    #[test]
    fn zero_count_rejected() {
        assert!(FamilyDescriptor::new().with(Elem(0), Cardinality::Finite(0)).is_err());
    }

    #[test]
    fn merge_adds_counts() {
        let a = FamilyDescriptor::from_elems([Elem(1), Elem(1)]);
        let b = FamilyDescriptor::new().with(Elem(1), Cardinality::Infinite).unwrap();
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![(Elem(1), Cardinality::Finite(2))]);
        assert_eq!(
            a.merged(&b).iter().collect::<Vec<_>>(),
            vec![(Elem(1), Cardinality::Infinite)]
        );
    }

    proptest! {
        #[test]
        fn merge_is_additive_for_finite_families(f in arb_family(3), g in arb_family(3)) {
            for name in ["bool", "chain3", "trunc3", "gf2"] {
                let rig = corpus::rig(name).unwrap();
                let n = rig.size() as u8;
                let (f, g) = (f.map(|e| Elem(e.0 % n)), g.map(|e| Elem(e.0 % n)));
                if rig.infinitary().is_none() && !(f.is_finite() && g.is_finite()) {
                    continue;
                }
                let lhs = rig.sum_family(&f.merged(&g)).unwrap();
                let rhs = rig.add(rig.sum_family(&f).unwrap(), rig.sum_family(&g).unwrap());
                prop_assert_eq!(lhs, rhs, "rig {}", name);
            }
        }

        #[test]
        fn infinitary_sums_distribute(f in arb_family(3), b in 0u8..3) {
            for name in ["bool", "chain3"] {
                let rig = corpus::rig(name).unwrap();
                let n = rig.size() as u8;
                let f = f.map(|e| Elem(e.0 % n));
                let b = Elem(b % n);
                let lhs = rig.mul(rig.sum_family(&f).unwrap(), b);
                let rhs = rig.sum_family(&f.map(|e| rig.mul(e, b))).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
