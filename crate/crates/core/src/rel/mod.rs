//! The category of finite sets and relations.
//!
//! A [`Relation`] stores one bitset row per domain element. Every structural
//! morphism is built on labelled sets, so composites such as the snake
//! equations type-check on the nose and can be compared structurally.

mod text;

use std::fmt;

use thiserror::Error;

use crate::bitmat::BoolMat;

pub use text::{parse_relations, write_relations, RelDocument};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelError {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("{kind} expects {expected} object(s), got {found}")]
    ArityMismatch {
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("not a dagger kernel: {0}")]
    NotDaggerKernel(String),
    #[error("duplicate element `{element}` in set `{set}`")]
    DuplicateElement { set: String, element: String },
    #[error("`{element}` is not an element of set `{set}`")]
    UnknownElement { set: String, element: String },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// A labelled finite set. Element order is significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSet {
    label: String,
    elements: Vec<String>,
}

impl FinSet {
    pub fn new<S: Into<String>>(
        label: impl Into<String>,
        elements: impl IntoIterator<Item = S>,
    ) -> Result<Self, RelError> {
        let label = label.into();
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(RelError::DuplicateElement {
                    set: label,
                    element: e.clone(),
                });
            }
        }
        Ok(FinSet { label, elements })
    }

    /// The monoidal unit `I = {*}`.
    pub fn unit() -> Self {
        FinSet {
            label: "I".into(),
            elements: vec!["*".into()],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, element: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == element)
    }

    fn index_or_err(&self, element: &str) -> Result<usize, RelError> {
        self.index_of(element).ok_or_else(|| RelError::UnknownElement {
            set: self.label.clone(),
            element: element.into(),
        })
    }

    /// Cartesian product with `(x,u)` labels, left factor major.
    pub fn tensor(&self, other: &FinSet) -> FinSet {
        let elements = self
            .elements
            .iter()
            .flat_map(|x| other.elements.iter().map(move |u| format!("({x},{u})")))
            .collect();
        FinSet {
            label: format!("{}*{}", wrap(&self.label), wrap(&other.label)),
            elements,
        }
    }

    /// Subset in ambient order, labelled `X|<mask bits>` so that equal
    /// subsets of equal ambients produce equal sets.
    pub fn subset(&self, mask: &[bool]) -> FinSet {
        assert_eq!(mask.len(), self.len(), "mask length");
        let bits: String = mask.iter().map(|&b| if b { '1' } else { '0' }).collect();
        FinSet {
            label: format!("{}|{}", self.label, bits),
            elements: self
                .elements
                .iter()
                .zip(mask)
                .filter(|(_, &m)| m)
                .map(|(e, _)| e.clone())
                .collect(),
        }
    }
}

fn wrap(label: &str) -> String {
    if label.contains('*') || label.contains('+') {
        format!("({label})")
    } else {
        label.to_string()
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.label, self.elements.join(","))
    }
}

/// A relation `dom → cod`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    dom: FinSet,
    cod: FinSet,
    mat: BoolMat,
}

/// A relation out of the unit, identified with a subset of its codomain.
pub type Point = Relation;

impl Relation {
    pub fn new<'a>(
        dom: FinSet,
        cod: FinSet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, RelError> {
        let mut mat = BoolMat::zeros(dom.len(), cod.len());
        for (x, y) in pairs {
            mat.set(dom.index_or_err(x)?, cod.index_or_err(y)?, true);
        }
        Ok(Relation { dom, cod, mat })
    }

    /// Wraps a matrix whose rows index `dom` and columns index `cod`.
    pub fn from_matrix(dom: FinSet, cod: FinSet, mat: BoolMat) -> Self {
        assert_eq!((mat.rows(), mat.cols()), (dom.len(), cod.len()), "matrix shape");
        Relation { dom, cod, mat }
    }

    pub fn identity(x: &FinSet) -> Self {
        Relation::from_matrix(x.clone(), x.clone(), BoolMat::identity(x.len()))
    }

    pub fn zero(dom: &FinSet, cod: &FinSet) -> Self {
        Relation::from_matrix(dom.clone(), cod.clone(), BoolMat::zeros(dom.len(), cod.len()))
    }

    /// The point of `x` whose subset is given by `mask`.
    pub fn point(x: &FinSet, mask: &[bool]) -> Point {
        assert_eq!(mask.len(), x.len(), "mask length");
        Relation::from_matrix(FinSet::unit(), x.clone(), BoolMat::from_fn(1, x.len(), |_, c| mask[c]))
    }

    /// Every relation `dom → cod`, by increasing bit code.
    pub fn all(dom: &FinSet, cod: &FinSet) -> impl Iterator<Item = Relation> {
        let n = dom.len() * cod.len();
        assert!(n < 64, "too many relations to enumerate");
        let (dom, cod) = (dom.clone(), cod.clone());
        (0..1u64 << n).map(move |code| {
            Relation::from_matrix(dom.clone(), cod.clone(), BoolMat::from_code(dom.len(), cod.len(), code))
        })
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn matrix(&self) -> &BoolMat {
        &self.mat
    }

    pub fn contains(&self, x: &str, y: &str) -> bool {
        match (self.dom.index_of(x), self.cod.index_of(y)) {
            (Some(i), Some(j)) => self.mat.get(i, j),
            _ => false,
        }
    }

    pub fn pairs(&self) -> Vec<(&str, &str)> {
        self.mat
            .ones()
            .map(|(i, j)| (self.dom.elements[i].as_str(), self.cod.elements[j].as_str()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn is_point(&self) -> bool {
        self.dom == FinSet::unit()
    }

    /// For a point, the membership mask of its subset.
    pub fn mask(&self) -> Vec<bool> {
        (0..self.cod.len()).map(|j| self.mat.get(0, j)).collect()
    }

    /// The converse relation.
    pub fn dagger(&self) -> Relation {
        Relation {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            mat: self.mat.transpose(),
        }
    }

    /// `r ≤ s`: every pair of `r` is a pair of `s`.
    pub fn le(&self, other: &Relation) -> bool {
        self.mat.or(&other.mat) == other.mat
    }

    /// Whether the pairs form the graph of an injective total function.
    pub fn is_injective_function(&self) -> bool {
        let t = self.mat.transpose();
        (0..self.dom.len()).all(|i| (0..self.cod.len()).filter(|&j| self.mat.get(i, j)).count() == 1)
            && (0..self.cod.len()).all(|j| (0..self.dom.len()).filter(|&i| t.get(j, i)).count() <= 1)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{} {:?}", self.dom.label, self.cod.label, self.pairs())
    }
}

fn describe(r: &Relation) -> String {
    format!("{}→{}", r.dom.label, r.cod.label)
}

/// `s ∘ r`: `(x,z)` is related iff some `y` has `(x,y) ∈ r` and `(y,z) ∈ s`.
pub fn compose(s: &Relation, r: &Relation) -> Result<Relation, RelError> {
    if r.cod != s.dom {
        return Err(RelError::DomainMismatch(format!(
            "cannot compose {} after {}",
            describe(s),
            describe(r)
        )));
    }
    Ok(Relation {
        dom: r.dom.clone(),
        cod: s.cod.clone(),
        mat: r.mat.mul(&s.mat),
    })
}

pub fn dagger(r: &Relation) -> Relation {
    r.dagger()
}

pub fn tensor(r: &Relation, s: &Relation) -> Relation {
    Relation {
        dom: r.dom.tensor(&s.dom),
        cod: r.cod.tensor(&s.cod),
        mat: r.mat.kron(&s.mat),
    }
}

/// Disjoint union with coprojections and their daggers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biproduct {
    pub object: FinSet,
    pub injections: Vec<Relation>,
    pub projections: Vec<Relation>,
}

pub fn biproduct(sets: &[FinSet]) -> Biproduct {
    let label = if sets.is_empty() {
        "0".to_string()
    } else {
        sets.iter().map(|s| wrap(&s.label)).collect::<Vec<_>>().join("+")
    };
    let elements = sets
        .iter()
        .enumerate()
        .flat_map(|(a, s)| s.elements.iter().map(move |x| format!("{a}.{x}")))
        .collect();
    let object = FinSet { label, elements };
    let mut offset = 0;
    let mut injections = Vec::with_capacity(sets.len());
    for s in sets {
        let mat = BoolMat::from_fn(s.len(), object.len(), |i, j| j == offset + i);
        injections.push(Relation::from_matrix(s.clone(), object.clone(), mat));
        offset += s.len();
    }
    let projections = injections.iter().map(Relation::dagger).collect();
    Biproduct {
        object,
        injections,
        projections,
    }
}

pub fn direct_sum(r: &Relation, s: &Relation) -> Relation {
    Relation {
        dom: biproduct(&[r.dom.clone(), s.dom.clone()]).object,
        cod: biproduct(&[r.cod.clone(), s.cod.clone()]).object,
        mat: r.mat.direct_sum(&s.mat),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructuralKind {
    /// `(X⊗Y)⊗Z → X⊗(Y⊗Z)`
    Associator,
    /// `X⊗Y → Y⊗X`
    Braiding,
    /// `I⊗X → X`
    LeftUnitor,
    /// `X⊗I → X`
    RightUnitor,
    /// `X → ⊕ X`, with the given number of summands.
    Diagonal(usize),
    /// `⊕ X → X`, the dagger of the diagonal.
    Codiagonal(usize),
    /// The empty relation `X → Y`.
    ZeroMorphism,
}

impl StructuralKind {
    fn name(self) -> &'static str {
        match self {
            StructuralKind::Associator => "associator",
            StructuralKind::Braiding => "braiding",
            StructuralKind::LeftUnitor => "left unitor",
            StructuralKind::RightUnitor => "right unitor",
            StructuralKind::Diagonal(_) => "diagonal",
            StructuralKind::Codiagonal(_) => "codiagonal",
            StructuralKind::ZeroMorphism => "zero morphism",
        }
    }

    fn arity(self) -> usize {
        match self {
            StructuralKind::Associator => 3,
            StructuralKind::Braiding | StructuralKind::ZeroMorphism => 2,
            _ => 1,
        }
    }
}

pub fn structural(kind: StructuralKind, objects: &[FinSet]) -> Result<Relation, RelError> {
    if objects.len() != kind.arity() {
        return Err(RelError::ArityMismatch {
            kind: kind.name(),
            expected: kind.arity(),
            found: objects.len(),
        });
    }
    let unit = FinSet::unit();
    Ok(match kind {
        StructuralKind::Associator => {
            let (x, y, z) = (&objects[0], &objects[1], &objects[2]);
            let dom = x.tensor(y).tensor(z);
            let cod = x.tensor(&y.tensor(z));
            let n = dom.len();
            Relation::from_matrix(dom, cod, BoolMat::identity(n))
        }
        StructuralKind::Braiding => {
            let (x, y) = (&objects[0], &objects[1]);
            let (nx, ny) = (x.len(), y.len());
            let mat = BoolMat::from_fn(nx * ny, ny * nx, |i, j| j == (i % ny) * nx + i / ny);
            Relation::from_matrix(x.tensor(y), y.tensor(x), mat)
        }
        StructuralKind::LeftUnitor => {
            let x = &objects[0];
            Relation::from_matrix(unit.tensor(x), x.clone(), BoolMat::identity(x.len()))
        }
        StructuralKind::RightUnitor => {
            let x = &objects[0];
            Relation::from_matrix(x.tensor(&unit), x.clone(), BoolMat::identity(x.len()))
        }
        StructuralKind::Diagonal(copies) => diagonal(&objects[0], copies),
        StructuralKind::Codiagonal(copies) => diagonal(&objects[0], copies).dagger(),
        StructuralKind::ZeroMorphism => Relation::zero(&objects[0], &objects[1]),
    })
}

fn diagonal(x: &FinSet, copies: usize) -> Relation {
    let sum = biproduct(&vec![x.clone(); copies]).object;
    let n = x.len();
    let mat = BoolMat::from_fn(n, n * copies, |i, j| j % n.max(1) == i);
    Relation::from_matrix(x.clone(), sum, mat)
}

/// A subset inclusion together with the relation it is a kernel of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DaggerKernelWitness {
    pub m: Relation,
    pub source: Relation,
}

/// Inclusion of the elements of `dom(r)` related to nothing.
pub fn kernel(r: &Relation) -> DaggerKernelWitness {
    let mask: Vec<bool> = (0..r.dom.len()).map(|i| r.mat.row_is_zero(i)).collect();
    DaggerKernelWitness {
        m: inclusion(&r.dom, &mask),
        source: r.clone(),
    }
}

/// Inclusion `X|mask ↪ X`.
pub fn inclusion(x: &FinSet, mask: &[bool]) -> Relation {
    let sub = x.subset(mask);
    let positions: Vec<usize> = (0..x.len()).filter(|&i| mask[i]).collect();
    let mat = BoolMat::from_fn(sub.len(), x.len(), |i, j| positions[i] == j);
    Relation::from_matrix(sub, x.clone(), mat)
}

/// `m⊥ = ker(m†)`.
pub fn complement(w: &DaggerKernelWitness) -> Result<DaggerKernelWitness, RelError> {
    if !w.m.is_injective_function() {
        return Err(RelError::NotDaggerKernel(format!(
            "{} is not an injective function",
            describe(&w.m)
        )));
    }
    if w.source.dom != w.m.cod || !compose(&w.source, &w.m)?.is_zero() {
        return Err(RelError::NotDaggerKernel(format!(
            "{} does not annihilate {}",
            describe(&w.source),
            describe(&w.m)
        )));
    }
    Ok(kernel(&w.m.dagger()))
}

/// Complement of a bare inclusion, taking `m` as the kernel of its own
/// complement projection.
pub fn complement_of(m: &Relation) -> Result<DaggerKernelWitness, RelError> {
    if !m.is_injective_function() {
        return Err(RelError::NotDaggerKernel(format!(
            "{} is not an injective function",
            describe(m)
        )));
    }
    Ok(kernel(&m.dagger()))
}

/// `coker(r) = ker(r†)†`.
pub fn cokernel(r: &Relation) -> Relation {
    kernel(&r.dagger()).m.dagger()
}

/// Union of parallel relations; the empty join is the zero relation.
pub fn join(dom: &FinSet, cod: &FinSet, rs: &[Relation]) -> Result<Relation, RelError> {
    let mut out = Relation::zero(dom, cod);
    for r in rs {
        if &r.dom != dom || &r.cod != cod {
            return Err(RelError::DomainMismatch(format!(
                "join of {} with {}→{}",
                describe(r),
                dom.label,
                cod.label
            )));
        }
        out.mat = out.mat.or(&r.mat);
    }
    Ok(out)
}

pub fn top(x: &FinSet) -> Point {
    Relation::point(x, &vec![true; x.len()])
}

fn require_point(a: &Relation) -> Result<(), RelError> {
    if a.is_point() {
        Ok(())
    } else {
        Err(RelError::DomainMismatch(format!(
            "{} is not a point (domain must be I)",
            describe(a)
        )))
    }
}

/// The complementary subset.
pub fn neg(a: &Point) -> Result<Point, RelError> {
    require_point(a)?;
    let mask: Vec<bool> = a.mask().iter().map(|b| !b).collect();
    Ok(Relation::point(&a.cod, &mask))
}

/// `a ∧ b = j∘j†∘b` where `j` is the complement of `ker(a†)`.
pub fn meet(a: &Point, b: &Point) -> Result<Point, RelError> {
    require_point(a)?;
    require_point(b)?;
    if a.cod != b.cod {
        return Err(RelError::DomainMismatch(format!(
            "meet of points of {} and {}",
            a.cod.label, b.cod.label
        )));
    }
    let j = complement(&kernel(&a.dagger()))?.m;
    compose(&j, &compose(&j.dagger(), b)?)
}

/// Singleton points in element order.
pub fn atoms(x: &FinSet) -> Vec<Point> {
    (0..x.len())
        .map(|i| {
            let mask: Vec<bool> = (0..x.len()).map(|j| j == i).collect();
            Relation::point(x, &mask)
        })
        .collect()
}

/// `η_X : I → X⊗X`, relating `*` to every `(x,x)`.
pub fn dual_unit(x: &FinSet) -> Relation {
    let xx = x.tensor(x);
    let n = x.len();
    let mat = BoolMat::from_fn(1, n * n, |_, j| j / n.max(1) == j % n.max(1));
    Relation::from_matrix(FinSet::unit(), xx, mat)
}

fn chain(steps: &[Relation]) -> Result<Relation, RelError> {
    let mut acc = steps[0].clone();
    for s in &steps[1..] {
        acc = compose(s, &acc)?;
    }
    Ok(acc)
}

fn inverse_of_iso(r: &Relation) -> Relation {
    r.dagger()
}

/// `λ ∘ (η† ⊗ id) ∘ α⁻¹ ∘ (id ⊗ η) ∘ ρ⁻¹ : X → X`.
pub fn snake_left(x: &FinSet) -> Relation {
    let eta = dual_unit(x);
    let id = Relation::identity(x);
    chain(&[
        inverse_of_iso(&structural(StructuralKind::RightUnitor, std::slice::from_ref(x)).unwrap()),
        tensor(&id, &eta),
        inverse_of_iso(&structural(StructuralKind::Associator, &[x.clone(), x.clone(), x.clone()]).unwrap()),
        tensor(&eta.dagger(), &id),
        structural(StructuralKind::LeftUnitor, std::slice::from_ref(x)).unwrap(),
    ])
    .expect("snake pipeline is well typed")
}

/// `ρ ∘ (id ⊗ η†) ∘ α ∘ (η ⊗ id) ∘ λ⁻¹ : X → X`.
pub fn snake_right(x: &FinSet) -> Relation {
    let eta = dual_unit(x);
    let id = Relation::identity(x);
    chain(&[
        inverse_of_iso(&structural(StructuralKind::LeftUnitor, std::slice::from_ref(x)).unwrap()),
        tensor(&eta, &id),
        structural(StructuralKind::Associator, &[x.clone(), x.clone(), x.clone()]).unwrap(),
        tensor(&id, &eta.dagger()),
        structural(StructuralKind::RightUnitor, std::slice::from_ref(x)).unwrap(),
    ])
    .expect("snake pipeline is well typed")
}

/// `η† ∘ β ∘ (r ⊗ id) ∘ η : I → I`.
pub fn trace_scalar(r: &Relation) -> Result<Relation, RelError> {
    if r.dom != r.cod {
        return Err(RelError::DomainMismatch(format!(
            "trace of non-endomorphism {}",
            describe(r)
        )));
    }
    let x = &r.dom;
    let eta = dual_unit(x);
    chain(&[
        eta.clone(),
        tensor(r, &Relation::identity(x)),
        structural(StructuralKind::Braiding, &[x.clone(), x.clone()])?,
        eta.dagger(),
    ])
}

/// Trace as a Boolean: true iff `r` has a fixed point.
pub fn trace(r: &Relation) -> Result<bool, RelError> {
    Ok(!trace_scalar(r)?.is_zero())
}

/// `r̆ = (id_X ⊗ r) ∘ η_X : I → X⊗Y`.
pub fn breve(r: &Relation) -> Point {
    compose(&tensor(&Relation::identity(&r.dom), r), &dual_unit(&r.dom)).expect("breve pipeline is well typed")
}

/// Inverse of [`breve`] for a point of `x ⊗ y`.
pub fn un_breve(p: &Point, x: &FinSet, y: &FinSet) -> Result<Relation, RelError> {
    require_point(p)?;
    if p.cod != x.tensor(y) {
        return Err(RelError::DomainMismatch(format!(
            "point of {} is not a point of {}",
            p.cod.label,
            x.tensor(y).label
        )));
    }
    let ny = y.len();
    let mat = BoolMat::from_fn(x.len(), ny, |i, j| p.mat.get(0, i * ny + j));
    Ok(Relation::from_matrix(x.clone(), y.clone(), mat))
}

#[cfg(test)]
mod tests;
