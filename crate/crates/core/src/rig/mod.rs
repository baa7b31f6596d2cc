//! Finite commutative-addition rigs used as scalar algebras.
//!
//! A [`FiniteRig`] is a tabulated carrier with an addition and a
//! multiplication table, plus an optional infinitary summation rule. Elements
//! are referred to by [`Elem`], an index into the carrier list; the carrier
//! order is the canonical order used for every enumeration and witness.

mod family;
mod text;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Sum of a family descriptor under a custom infinitary rule.
pub type FamilySum = dyn Fn(&FiniteRig, &FamilyDescriptor) -> Elem + Send + Sync;

type TripleLaw<'a> = dyn Fn(Elem, Elem, Elem) -> bool + 'a;

pub use family::{Cardinality, FamilyDescriptor};
pub use text::{parse_rig, write_rig};

/// Index of an element in a rig's carrier list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u8);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RigError {
    #[error("malformed {table} table: {detail}")]
    MalformedTable { table: &'static str, detail: String },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate carrier element `{0}`")]
    DuplicateElement(String),
    #[error("carrier must contain between 1 and 255 elements, got {0}")]
    CarrierSize(usize),
    #[error("family has an infinite cardinality but rig `{0}` has no infinitary rule")]
    InfiniteUnsupported(String),
    #[error("rig `{rig}` is not a valid rig: {violation}")]
    InvalidRig { rig: String, violation: String },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Infinitary summation supplied as data.
#[derive(Clone)]
pub enum InfinitaryRule {
    /// Least upper bound in the additive order; only meaningful when addition
    /// is idempotent.
    Join,
    /// Arbitrary rule on family descriptors.
    Custom(Arc<FamilySum>),
}

impl fmt::Debug for InfinitaryRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfinitaryRule::Join => f.write_str("Join"),
            InfinitaryRule::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteRig {
    name: String,
    carrier: Vec<String>,
    zero: Elem,
    one: Elem,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    infinitary: Option<InfinitaryRule>,
}

impl PartialEq for FiniteRig {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.carrier == other.carrier
            && self.zero == other.zero
            && self.one == other.one
            && self.add == other.add
            && self.mul == other.mul
            && matches!(
                (&self.infinitary, &other.infinitary),
                (None, None) | (Some(InfinitaryRule::Join), Some(InfinitaryRule::Join))
            )
    }
}

impl FiniteRig {
    /// Builds a rig from index tables. `add[a][b]` and `mul[a][b]` are
    /// carrier indices.
    pub fn new(
        name: impl Into<String>,
        carrier: Vec<String>,
        zero: usize,
        one: usize,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        infinitary: Option<InfinitaryRule>,
    ) -> Result<Self, RigError> {
        let n = carrier.len();
        if n == 0 || n > 255 {
            return Err(RigError::CarrierSize(n));
        }
        for (i, label) in carrier.iter().enumerate() {
            if carrier[..i].contains(label) {
                return Err(RigError::DuplicateElement(label.clone()));
            }
        }
        for (which, e) in [("zero", zero), ("one", one)] {
            if e >= n {
                return Err(RigError::MalformedTable {
                    table: which,
                    detail: format!("index {e} outside carrier of size {n}"),
                });
            }
        }
        let add = flatten_table("add", add, n)?;
        let mul = flatten_table("mul", mul, n)?;
        Ok(FiniteRig {
            name: name.into(),
            carrier,
            zero: Elem(zero as u8),
            one: Elem(one as u8),
            add,
            mul,
            infinitary,
        })
    }

    /// Builds a rig from total functions on carrier indices.
    pub fn from_fns(
        name: impl Into<String>,
        carrier: &[&str],
        zero: usize,
        one: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
        infinitary: Option<InfinitaryRule>,
    ) -> Result<Self, RigError> {
        let n = carrier.len();
        let table = |f: &dyn Fn(usize, usize) -> usize| {
            (0..n)
                .map(|a| (0..n).map(|b| f(a, b)).collect())
                .collect::<Vec<Vec<usize>>>()
        };
        FiniteRig::new(
            name,
            carrier.iter().map(|s| s.to_string()).collect(),
            zero,
            one,
            table(&add),
            table(&mul),
            infinitary,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + ExactSizeIterator {
        (0..self.carrier.len() as u8).map(Elem)
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.carrier[e.index()]
    }

    pub fn elem(&self, label: &str) -> Option<Elem> {
        self.carrier.iter().position(|l| l == label).map(|i| Elem(i as u8))
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn infinitary(&self) -> Option<&InfinitaryRule> {
        self.infinitary.as_ref()
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a.index() * self.size() + b.index()]
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a.index() * self.size() + b.index()]
    }

    /// Finite sum; the empty sum is zero.
    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.zero, |acc, e| self.add(acc, e))
    }

    /// `a ≤ b` in the additive preorder `a + b = b`.
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.add(a, b) == b
    }

    pub fn is_idempotent(&self) -> bool {
        self.elements().all(|a| self.add(a, a) == a)
    }

    /// Two-sided multiplicative inverse, if any.
    pub fn inverse(&self, a: Elem) -> Option<Elem> {
        self.elements()
            .find(|&b| self.mul(a, b) == self.one && self.mul(b, a) == self.one)
    }

    /// `count` copies of `e` added together, by doubling.
    fn multiple(&self, e: Elem, mut count: u64) -> Elem {
        let mut acc = self.zero;
        let mut base = e;
        while count > 0 {
            if count & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            count >>= 1;
        }
        acc
    }

    fn finite_sum(&self, fam: &FamilyDescriptor) -> Elem {
        fam.iter().fold(self.zero, |acc, (e, c)| match c {
            Cardinality::Finite(n) => self.add(acc, self.multiple(e, n)),
            Cardinality::Infinite => unreachable!("finite_sum called on infinite family"),
        })
    }

    /// Evaluates the infinitary rule directly, bypassing the finite fold.
    fn apply_rule(&self, rule: &InfinitaryRule, fam: &FamilyDescriptor) -> Elem {
        match rule {
            InfinitaryRule::Join => self.sum(fam.iter().map(|(e, _)| e)),
            InfinitaryRule::Custom(f) => f(self, fam),
        }
    }

    /// Sum of the family described by `fam`.
    pub fn sum_family(&self, fam: &FamilyDescriptor) -> Result<Elem, RigError> {
        if fam.is_finite() {
            return Ok(self.finite_sum(fam));
        }
        match &self.infinitary {
            Some(rule) => Ok(self.apply_rule(rule, fam)),
            None => Err(RigError::InfiniteUnsupported(self.name.clone())),
        }
    }

    /// Checks every rig law on the tables. The report holds the first
    /// violation of each law, in lexicographic witness order.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let els: Vec<Elem> = self.elements().collect();
        let (z, o) = (self.zero, self.one);

        let mut unary = |law: &'static str, ok: &dyn Fn(Elem) -> bool| {
            if let Some(&a) = els.iter().find(|&&a| !ok(a)) {
                report.push(law, vec![self.label(a).to_string()]);
            }
        };
        unary("additive identity", &|a| self.add(a, z) == a && self.add(z, a) == a);
        unary("multiplicative identity", &|a| {
            self.mul(a, o) == a && self.mul(o, a) == a
        });
        unary("zero annihilation", &|a| self.mul(z, a) == z && self.mul(a, z) == z);

        if let Some((a, b)) = first_pair(&els, |a, b| self.add(a, b) != self.add(b, a)) {
            report.push("additive commutativity", self.labels(&[a, b]));
        }
        let triple_laws: [(&'static str, &TripleLaw); 4] = [
            ("additive associativity", &|a, b, c| {
                self.add(self.add(a, b), c) == self.add(a, self.add(b, c))
            }),
            ("multiplicative associativity", &|a, b, c| {
                self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
            }),
            ("left distributivity", &|a, b, c| {
                self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c))
            }),
            ("right distributivity", &|a, b, c| {
                self.mul(self.add(a, b), c) == self.add(self.mul(a, c), self.mul(b, c))
            }),
        ];
        for (law, holds) in triple_laws {
            if let Some((a, b, c)) = first_triple(&els, |a, b, c| !holds(a, b, c)) {
                report.push(law, self.labels(&[a, b, c]));
            }
        }

        if let Some(rule) = &self.infinitary {
            self.validate_rule(rule, &els, &mut report);
        }
        report
    }

    fn validate_rule(&self, rule: &InfinitaryRule, els: &[Elem], report: &mut ValidationReport) {
        if matches!(rule, InfinitaryRule::Join) {
            if let Some(&a) = els.iter().find(|&&a| self.add(a, a) != a) {
                report.push("infinitary join idempotence", vec![self.label(a).to_string()]);
            }
        }
        if let Some(&a) = els
            .iter()
            .find(|&&a| self.apply_rule(rule, &FamilyDescriptor::singleton(a)) != a)
        {
            report.push("infinitary singleton", vec![self.label(a).to_string()]);
        }
        if let Some((a, b)) = first_pair(els, |a, b| {
            self.apply_rule(rule, &FamilyDescriptor::from_elems([a, b])) != self.add(a, b)
        }) {
            report.push("infinitary pair", self.labels(&[a, b]));
        }

        let sum = |f: &FamilyDescriptor| -> Elem {
            if f.is_finite() {
                self.finite_sum(f)
            } else {
                self.apply_rule(rule, f)
            }
        };
        let fams = FamilyDescriptor::enumerate_small(self);
        'assoc: for f in &fams {
            for g in &fams {
                if sum(&f.merged(g)) != self.add(sum(f), sum(g)) {
                    report.push("infinitary associativity", vec![f.display(self), g.display(self)]);
                    break 'assoc;
                }
            }
        }
        'dist: for f in &fams {
            for &b in els {
                let right = f.map(|e| self.mul(e, b));
                let left = f.map(|e| self.mul(b, e));
                if self.mul(sum(f), b) != sum(&right) || self.mul(b, sum(f)) != sum(&left) {
                    report.push(
                        "infinitary distributivity",
                        vec![f.display(self), self.label(b).to_string()],
                    );
                    break 'dist;
                }
            }
        }
    }

    /// Decides whether this rig is an infinitary division rig and, if so,
    /// whether it has collapsed to the two-element Boolean rig.
    pub fn division_collapse_check(&self) -> Result<CollapseVerdict, RigError> {
        let report = self.validate();
        if let Some(v) = report.violations.first() {
            return Err(RigError::InvalidRig {
                rig: self.name.clone(),
                violation: v.to_string(),
            });
        }
        // R \ {0} must be a nonempty group under multiplication
        if self.zero == self.one {
            return Ok(CollapseVerdict::NotDivisionRig { witness: None });
        }
        if let Some(a) = self.elements().find(|&a| a != self.zero && self.inverse(a).is_none()) {
            return Ok(CollapseVerdict::NotDivisionRig { witness: Some(a) });
        }
        if self.infinitary.is_none() {
            return Ok(CollapseVerdict::NotInfinitary);
        }
        let one_plus_one = self.add(self.one, self.one);
        if self.size() == 2 && one_plus_one == self.one {
            Ok(CollapseVerdict::Collapsed)
        } else {
            Ok(CollapseVerdict::CollapseViolated {
                units: self.size() - 1,
                one_plus_one,
            })
        }
    }

    fn labels(&self, es: &[Elem]) -> Vec<String> {
        es.iter().map(|&e| self.label(e).to_string()).collect()
    }
}

fn flatten_table(table: &'static str, rows: Vec<Vec<usize>>, n: usize) -> Result<Vec<Elem>, RigError> {
    if rows.len() != n {
        return Err(RigError::MalformedTable {
            table,
            detail: format!("expected {n} rows, got {}", rows.len()),
        });
    }
    let mut flat = Vec::with_capacity(n * n);
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != n {
            return Err(RigError::MalformedTable {
                table,
                detail: format!("row {i} has {} entries, expected {n}", row.len()),
            });
        }
        for (j, e) in row.into_iter().enumerate() {
            if e >= n {
                return Err(RigError::MalformedTable {
                    table,
                    detail: format!("entry ({i},{j}) = {e} is outside the carrier"),
                });
            }
            flat.push(Elem(e as u8));
        }
    }
    Ok(flat)
}

fn first_pair(els: &[Elem], bad: impl Fn(Elem, Elem) -> bool) -> Option<(Elem, Elem)> {
    els.iter()
        .flat_map(|&a| els.iter().map(move |&b| (a, b)))
        .find(|&(a, b)| bad(a, b))
}

fn first_triple(els: &[Elem], bad: impl Fn(Elem, Elem, Elem) -> bool) -> Option<(Elem, Elem, Elem)> {
    for &a in els {
        for &b in els {
            for &c in els {
                if bad(a, b, c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: &'static str,
    pub witness: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (witness {})", self.law, self.witness.join(", "))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&self, law: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.law == law)
    }

    fn push(&mut self, law: &'static str, witness: Vec<String>) {
        self.violations.push(Violation { law, witness });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollapseVerdict {
    /// Some nonzero element has no two-sided inverse. `None` means the rig
    /// has no nonzero elements at all (zero = one).
    NotDivisionRig { witness: Option<Elem> },
    /// A division rig without an infinitary rule.
    NotInfinitary,
    /// An infinitary division rig equal to `{0, 1}` with `1 + 1 = 1`.
    Collapsed,
    /// An infinitary division rig that did not collapse. Unreachable on
    /// valid rigs; seeing it means the rig checks are wrong.
    CollapseViolated { units: usize, one_plus_one: Elem },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn broken_identity() -> FiniteRig {
        FiniteRig::from_fns(
            "broken",
            &["0", "1"],
            0,
            1,
            |a, b| if (a, b) == (1, 0) { 0 } else { a.max(b) },
            |a, b| a.min(b),
            None,
        )
        .unwrap()
    }

    #[test]
    fn bundled_rigs_validate() {
        for name in ["bool", "chain3", "trunc3", "gf2", "trivial"] {
            let rig = corpus::rig(name).unwrap();
            assert!(rig.validate().is_valid(), "{name}: {:?}", rig.validate());
        }
    }

    #[test]
    fn broken_identity_cites_witness() {
        let report = broken_identity().validate();
        let v = report.violation("additive identity").unwrap();
        assert_eq!(v.witness, vec!["1".to_string()]);
    }

    #[test]
    fn out_of_carrier_entry_is_malformed() {
        let err = FiniteRig::new(
            "bad",
            vec!["0".into(), "1".into()],
            0,
            1,
            vec![vec![0, 1], vec![1, 2]],
            vec![vec![0, 0], vec![0, 1]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, RigError::MalformedTable { table: "add", .. }));
    }

    #[test]
    fn short_row_is_malformed() {
        let err = FiniteRig::new(
            "bad",
            vec!["0".into(), "1".into()],
            0,
            1,
            vec![vec![0, 1], vec![1]],
            vec![vec![0, 0], vec![0, 1]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, RigError::MalformedTable { .. }));
    }

    #[test]
    fn sum_family_examples() {
        let b = corpus::rig("bool").unwrap();
        let one = b.one();
        let zero = b.zero();
        let inf = FamilyDescriptor::new().with(one, Cardinality::Infinite).unwrap();
        assert_eq!(b.sum_family(&inf).unwrap(), one);
        assert_eq!(b.sum_family(&FamilyDescriptor::new()).unwrap(), zero);
        let fin = FamilyDescriptor::new()
            .with(zero, Cardinality::Finite(3))
            .unwrap()
            .with(one, Cardinality::Finite(2))
            .unwrap();
        assert_eq!(b.sum_family(&fin).unwrap(), one);
    }

    #[test]
    fn infinite_family_needs_rule() {
        let gf2 = corpus::rig("gf2").unwrap();
        let inf = FamilyDescriptor::new().with(gf2.one(), Cardinality::Infinite).unwrap();
        assert_eq!(gf2.sum_family(&inf), Err(RigError::InfiniteUnsupported("gf2".into())));
        // finite sums still fold the table: 1 + 1 + 1 = 1 in GF(2)
        let three = FamilyDescriptor::new().with(gf2.one(), Cardinality::Finite(3)).unwrap();
        assert_eq!(gf2.sum_family(&three).unwrap(), gf2.one());
    }

    #[test]
    fn multiple_matches_repeated_addition() {
        let t = corpus::rig("trunc3").unwrap();
        let one = t.one();
        for n in 0..10u64 {
            let slow = (0..n).fold(t.zero(), |acc, _| t.add(acc, one));
            assert_eq!(t.multiple(one, n), slow);
        }
    }

    #[test]
    fn collapse_verdicts() {
        let verdict = |n: &str| corpus::rig(n).unwrap().division_collapse_check().unwrap();
        assert_eq!(verdict("bool"), CollapseVerdict::Collapsed);
        assert_eq!(verdict("gf2"), CollapseVerdict::NotInfinitary);
        let chain = corpus::rig("chain3").unwrap();
        assert_eq!(
            verdict("chain3"),
            CollapseVerdict::NotDivisionRig {
                witness: chain.elem("1/2")
            }
        );
        let trunc = corpus::rig("trunc3").unwrap();
        assert_eq!(
            verdict("trunc3"),
            CollapseVerdict::NotDivisionRig {
                witness: trunc.elem("2")
            }
        );
        assert_eq!(verdict("trivial"), CollapseVerdict::NotDivisionRig { witness: None });
    }

    #[test]
    fn half_has_no_inverse_by_scan() {
        // independent scan: ½·x never reaches 1 under (max, min)
        let chain = corpus::rig("chain3").unwrap();
        let half = chain.elem("1/2").unwrap();
        assert!(chain.elements().all(|x| chain.mul(half, x) != chain.one()));
    }

    #[test]
    fn invalid_rig_is_rejected_by_collapse_check() {
        assert!(matches!(
            broken_identity().division_collapse_check(),
            Err(RigError::InvalidRig { .. })
        ));
    }

    #[test]
    fn join_rule_on_non_idempotent_rig_is_flagged() {
        let t = FiniteRig::from_fns(
            "trunc-join",
            &["0", "1", "2"],
            0,
            1,
            |a, b| (a + b).min(2),
            |a, b| (a * b).min(2),
            Some(InfinitaryRule::Join),
        )
        .unwrap();
        let report = t.validate();
        assert!(report.violation("infinitary join idempotence").is_some());
    }

    #[test]
    fn saturating_custom_rule_is_consistent() {
        // counting sum saturating at 2 is an associative infinitary extension
        let rule = InfinitaryRule::Custom(Arc::new(|rig: &FiniteRig, fam: &FamilyDescriptor| {
            let mut acc = rig.zero();
            for (e, c) in fam.iter() {
                let n = match c {
                    Cardinality::Finite(n) => n.min(2),
                    Cardinality::Infinite => 2,
                };
                for _ in 0..n {
                    acc = rig.add(acc, e);
                }
            }
            acc
        }));
        let t = FiniteRig::from_fns(
            "trunc-sat",
            &["0", "1", "2"],
            0,
            1,
            |a, b| (a + b).min(2),
            |a, b| (a * b).min(2),
            Some(rule),
        )
        .unwrap();
        assert!(t.validate().is_valid(), "{:?}", t.validate());
        assert_eq!(
            t.division_collapse_check().unwrap(),
            CollapseVerdict::NotDivisionRig { witness: t.elem("2") }
        );
    }
}
