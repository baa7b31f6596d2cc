//! A common interface over the two concrete categories the checker runs on:
//! relations between sets `{0,…,n-1}` and matrices over a finite rig.
//!
//! Objects are sizes. Morphism enumeration follows one canonical order for
//! both models (see [`MatrixCategory::hom_nth`]), so witnesses agree when
//! the rig is Boolean.

use std::fmt::Debug;
use std::hash::Hash;

use crate::bitmat::BoolMat;
use crate::corpus;
use crate::matcat::{self, MatError, MatrixCategory, RigMatrix};
use crate::rel::{self, FinSet, Relation};
use crate::rig::{Elem, FiniteRig};

pub trait Model {
    type Mor: Clone + Eq + Hash + Ord + Debug;

    /// `rel` or `rig:<name>`.
    fn name(&self) -> String;
    fn rig(&self) -> &FiniteRig;

    fn dom(&self, f: &Self::Mor) -> usize;
    fn cod(&self, f: &Self::Mor) -> usize;
    /// Entry at codomain index `i`, domain index `j`.
    fn entry(&self, f: &Self::Mor, i: usize, j: usize) -> Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_fn(&self, cod: usize, dom: usize, f: &dyn Fn(usize, usize) -> Elem) -> Self::Mor;

    /// `g ∘ f`. Panics if the shapes do not match.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn dagger(&self, f: &Self::Mor) -> Self::Mor;
    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    /// Entrywise sum of parallel morphisms.
    fn add(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    fn direct_sum(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;

    fn hom_count(&self, cod: usize, dom: usize) -> Option<u64>;
    fn hom_nth(&self, cod: usize, dom: usize, k: u64) -> Self::Mor;

    /// A dagger kernel of `f`, `None` if there is none.
    fn kernel(&self, f: &Self::Mor, search_bound: usize) -> Result<Option<Self::Mor>, MatError>;

    /// Serializes named morphisms in the model's file format.
    fn write_items(&self, items: &[(String, Self::Mor)]) -> String;
    fn parse_items(&self, text: &str) -> Result<Vec<(String, Self::Mor)>, String>;

    fn identity(&self, n: usize) -> Self::Mor {
        let (z, o) = (self.rig().zero(), self.rig().one());
        self.from_fn(n, n, &|i, j| if i == j { o } else { z })
    }

    fn zero(&self, cod: usize, dom: usize) -> Self::Mor {
        let z = self.rig().zero();
        self.from_fn(cod, dom, &|_, _| z)
    }

    fn is_zero(&self, f: &Self::Mor) -> bool {
        *f == self.zero(self.cod(f), self.dom(f))
    }

    /// Every morphism `dom → cod`, canonical order.
    fn hom(&self, cod: usize, dom: usize) -> Vec<Self::Mor> {
        let n = self.hom_count(cod, dom).expect("hom-set too large to enumerate");
        (0..n).map(|k| self.hom_nth(cod, dom, k)).collect()
    }

    /// One-line rendering used in witness lhs/rhs.
    fn show(&self, f: &Self::Mor) -> String {
        let rig = self.rig();
        let rows: Vec<String> = (0..self.cod(f))
            .map(|i| {
                (0..self.dom(f))
                    .map(|j| rig.label(self.entry(f, i, j)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        format!("{}<-{} [{}]", self.cod(f), self.dom(f), rows.join("; "))
    }

    /// `a ≤ b` in the order `a + b = b`.
    fn le(&self, a: &Self::Mor, b: &Self::Mor) -> bool {
        self.add(a, b) == *b
    }

    fn injections(&self, sizes: &[usize]) -> Vec<Self::Mor> {
        let total: usize = sizes.iter().sum();
        let (z, o) = (self.rig().zero(), self.rig().one());
        let mut offset = 0;
        sizes
            .iter()
            .map(|&n| {
                let off = offset;
                offset += n;
                self.from_fn(total, n, &|i, j| if i == off + j { o } else { z })
            })
            .collect()
    }

    fn associator(&self, x: usize, y: usize, z: usize) -> Self::Mor {
        self.identity(x * y * z)
    }

    fn unitor(&self, n: usize) -> Self::Mor {
        self.identity(n)
    }

    /// `x ⊗ y → y ⊗ x`.
    fn braiding(&self, x: usize, y: usize) -> Self::Mor {
        let (z, o) = (self.rig().zero(), self.rig().one());
        self.from_fn(y * x, x * y, &|i, j| if i == (j % y) * x + j / y { o } else { z })
    }

    /// `η_n : 1 → n⊗n`.
    fn eta(&self, n: usize) -> Self::Mor {
        let (z, o) = (self.rig().zero(), self.rig().one());
        self.from_fn(n * n, 1, &|i, _| if i / n == i % n { o } else { z })
    }

    fn scalar(&self, e: Elem) -> Self::Mor {
        self.from_fn(1, 1, &|_, _| e)
    }
}

/// Relations between the sets `{0,…,n-1}`.
#[derive(Debug)]
pub struct RelModel {
    rig: FiniteRig,
}

impl Default for RelModel {
    fn default() -> Self {
        RelModel::new()
    }
}

impl RelModel {
    pub fn new() -> Self {
        RelModel {
            rig: corpus::rig("bool").expect("bool is bundled"),
        }
    }

    pub fn set(n: usize) -> FinSet {
        FinSet::new(format!("S{n}"), (0..n).map(|i| i.to_string())).expect("distinct labels")
    }

    pub fn to_relation(&self, f: &BoolMat) -> Relation {
        Relation::from_matrix(RelModel::set(f.rows()), RelModel::set(f.cols()), f.clone())
    }
}

// Morphisms are stored as relations are: one row per domain element.
impl Model for RelModel {
    type Mor = BoolMat;

    fn name(&self) -> String {
        "rel".into()
    }

    fn rig(&self) -> &FiniteRig {
        &self.rig
    }

    fn dom(&self, f: &BoolMat) -> usize {
        f.rows()
    }

    fn cod(&self, f: &BoolMat) -> usize {
        f.cols()
    }

    fn entry(&self, f: &BoolMat, i: usize, j: usize) -> Elem {
        if f.get(j, i) {
            self.rig.one()
        } else {
            self.rig.zero()
        }
    }

    fn from_fn(&self, cod: usize, dom: usize, f: &dyn Fn(usize, usize) -> Elem) -> BoolMat {
        let one = self.rig.one();
        BoolMat::from_fn(dom, cod, |j, i| f(i, j) == one)
    }

    fn compose(&self, g: &BoolMat, f: &BoolMat) -> BoolMat {
        f.mul(g)
    }

    fn dagger(&self, f: &BoolMat) -> BoolMat {
        f.transpose()
    }

    fn tensor(&self, f: &BoolMat, g: &BoolMat) -> BoolMat {
        f.kron(g)
    }

    fn add(&self, f: &BoolMat, g: &BoolMat) -> BoolMat {
        f.or(g)
    }

    fn direct_sum(&self, f: &BoolMat, g: &BoolMat) -> BoolMat {
        f.direct_sum(g)
    }

    fn identity(&self, n: usize) -> BoolMat {
        BoolMat::identity(n)
    }

    fn zero(&self, cod: usize, dom: usize) -> BoolMat {
        BoolMat::zeros(dom, cod)
    }

    fn is_zero(&self, f: &BoolMat) -> bool {
        f.is_zero()
    }

    fn le(&self, a: &BoolMat, b: &BoolMat) -> bool {
        a.and(b) == *a
    }

    fn hom_count(&self, cod: usize, dom: usize) -> Option<u64> {
        2u64.checked_pow(u32::try_from(cod * dom).ok()?)
    }

    fn hom_nth(&self, cod: usize, dom: usize, k: u64) -> BoolMat {
        // same order as the matrix model over {0,1}: digit 0 is entry 1
        let n = cod * dom;
        BoolMat::from_fn(dom, cod, |j, i| {
            let p = i * dom + j;
            k >> (n - 1 - p) & 1 == 0
        })
    }

    fn kernel(&self, f: &BoolMat, _search_bound: usize) -> Result<Option<BoolMat>, MatError> {
        Ok(Some(rel::kernel(&self.to_relation(f)).m.matrix().clone()))
    }

    fn write_items(&self, items: &[(String, BoolMat)]) -> String {
        let rels = items.iter().map(|(n, f)| (n.clone(), self.to_relation(f))).collect();
        rel::write_relations(&rel::RelDocument::from_relations(rels))
    }

    fn parse_items(&self, text: &str) -> Result<Vec<(String, BoolMat)>, String> {
        let doc = rel::parse_relations(text).map_err(|e| e.to_string())?;
        Ok(doc
            .relations
            .into_iter()
            .map(|(n, r)| (n, r.matrix().clone()))
            .collect())
    }
}

impl Model for MatrixCategory {
    type Mor = RigMatrix;

    fn name(&self) -> String {
        format!("rig:{}", self.rig().name())
    }

    fn rig(&self) -> &FiniteRig {
        MatrixCategory::rig(self)
    }

    fn dom(&self, f: &RigMatrix) -> usize {
        f.dom()
    }

    fn cod(&self, f: &RigMatrix) -> usize {
        f.cod()
    }

    fn entry(&self, f: &RigMatrix, i: usize, j: usize) -> Elem {
        f.get(i, j)
    }

    fn from_fn(&self, cod: usize, dom: usize, f: &dyn Fn(usize, usize) -> Elem) -> RigMatrix {
        RigMatrix::from_fn(cod, dom, f)
    }

    fn compose(&self, g: &RigMatrix, f: &RigMatrix) -> RigMatrix {
        assert_eq!(g.dom(), f.cod(), "composition shape");
        self.compose_unchecked(g, f)
    }

    fn dagger(&self, f: &RigMatrix) -> RigMatrix {
        MatrixCategory::dagger(self, f)
    }

    fn tensor(&self, f: &RigMatrix, g: &RigMatrix) -> RigMatrix {
        MatrixCategory::tensor(self, f, g)
    }

    fn add(&self, f: &RigMatrix, g: &RigMatrix) -> RigMatrix {
        MatrixCategory::add(self, f, g).expect("parallel morphisms")
    }

    fn direct_sum(&self, f: &RigMatrix, g: &RigMatrix) -> RigMatrix {
        MatrixCategory::direct_sum(self, f, g)
    }

    fn hom_count(&self, cod: usize, dom: usize) -> Option<u64> {
        MatrixCategory::hom_count(self, cod, dom)
    }

    fn hom_nth(&self, cod: usize, dom: usize, k: u64) -> RigMatrix {
        MatrixCategory::hom_nth(self, cod, dom, k)
    }

    fn kernel(&self, f: &RigMatrix, search_bound: usize) -> Result<Option<RigMatrix>, MatError> {
        Ok(self.find_kernel(f, search_bound.max(1))?.found().map(|k| k.m))
    }

    fn write_items(&self, items: &[(String, RigMatrix)]) -> String {
        matcat::write_matrices(items, self.rig())
    }

    fn parse_items(&self, text: &str) -> Result<Vec<(String, RigMatrix)>, String> {
        matcat::parse_matrices(text, self.rig()).map_err(|e| e.to_string())
    }
}
