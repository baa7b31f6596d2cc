//! Matrices over a finite rig, viewed as a dagger symmetric monoidal
//! category with biproducts.
//!
//! Objects are natural numbers `n`, standing for `I ⊕ … ⊕ I`. A morphism
//! `n → m` is an `m × n` matrix. Tensor is the Kronecker product, the
//! biproduct is the block-diagonal sum, and the dagger is the transpose.
//! Structural isomorphisms live on flat indices, so associators and unitors
//! are identity matrices and the braiding is a transpose-of-index
//! permutation.

mod text;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::rig::{Elem, FiniteRig, RigError};

type MonicList = Arc<Vec<RigMatrix>>;

pub use text::{parse_matrices, write_matrices, write_matrix};

/// Object `I^{⊕n}`, identified with its size.
pub type MatObject = usize;

/// Default cap on kernel candidates examined per search.
pub const DEFAULT_KERNEL_CEILING: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("matrix is over rig `{found}`, expected `{expected}`")]
    RigMismatch { expected: String, found: String },
    #[error("kernel search needs {needed} candidates, ceiling is {ceiling}")]
    SearchExhausted { needed: u64, ceiling: u64 },
    #[error(transparent)]
    Rig(#[from] RigError),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// A `cod × dom` matrix of rig elements, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RigMatrix {
    cod: usize,
    dom: usize,
    entries: Vec<Elem>,
}

impl RigMatrix {
    pub fn new(cod: usize, dom: usize, entries: Vec<Elem>) -> Self {
        assert_eq!(entries.len(), cod * dom, "entry count");
        RigMatrix { cod, dom, entries }
    }

    pub fn from_fn(cod: usize, dom: usize, f: impl Fn(usize, usize) -> Elem) -> Self {
        let mut entries = Vec::with_capacity(cod * dom);
        for i in 0..cod {
            for j in 0..dom {
                entries.push(f(i, j));
            }
        }
        RigMatrix { cod, dom, entries }
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.dom + j]
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }
}

impl fmt::Debug for RigMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} [", self.cod, self.dom)?;
        for i in 0..self.cod {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.dom {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(i, j).0)?;
            }
        }
        f.write_str("]")
    }
}

/// A dagger-monic `m` that is a kernel of `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatKernel {
    pub m: RigMatrix,
    pub source: RigMatrix,
}

/// Outcome of [`MatrixCategory::find_kernel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelSearch {
    Found(MatKernel),
    /// No candidate passed. Counts are the certificate: how many
    /// dagger-monic candidates there were and how many annihilated `r`.
    NotFound {
        dagger_monic: usize,
        annihilating: usize,
    },
}

impl KernelSearch {
    pub fn found(self) -> Option<MatKernel> {
        match self {
            KernelSearch::Found(k) => Some(k),
            KernelSearch::NotFound { .. } => None,
        }
    }
}

/// Outcome of a snake-equation check on one object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualVerdict {
    Holds,
    /// The first snake composite that differs from the identity.
    Fails {
        which: &'static str,
        composite: RigMatrix,
    },
}

pub struct MatrixCategory {
    rig: Arc<FiniteRig>,
    kernel_ceiling: u64,
    monic_cache: Mutex<HashMap<(usize, usize), MonicList>>,
}

impl fmt::Debug for MatrixCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixCategory({})", self.rig.name())
    }
}

impl MatrixCategory {
    /// Fails with the first violated law if the rig is not valid.
    pub fn new(rig: FiniteRig) -> Result<Self, MatError> {
        if let Some(v) = rig.validate().violations.first() {
            return Err(RigError::InvalidRig {
                rig: rig.name().to_string(),
                violation: v.to_string(),
            }
            .into());
        }
        Ok(MatrixCategory {
            rig: Arc::new(rig),
            kernel_ceiling: DEFAULT_KERNEL_CEILING,
            monic_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_kernel_ceiling(mut self, ceiling: u64) -> Self {
        self.kernel_ceiling = ceiling;
        self
    }

    pub fn kernel_ceiling(&self) -> u64 {
        self.kernel_ceiling
    }

    pub fn rig(&self) -> &FiniteRig {
        &self.rig
    }

    pub fn identity(&self, n: usize) -> RigMatrix {
        let (z, o) = (self.rig.zero(), self.rig.one());
        RigMatrix::from_fn(n, n, |i, j| if i == j { o } else { z })
    }

    pub fn zero(&self, cod: usize, dom: usize) -> RigMatrix {
        RigMatrix::new(cod, dom, vec![self.rig.zero(); cod * dom])
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &RigMatrix, f: &RigMatrix) -> Result<RigMatrix, MatError> {
        if g.dom != f.cod {
            return Err(MatError::DomainMismatch(format!(
                "cannot compose {}→{} after {}→{}",
                g.dom, g.cod, f.dom, f.cod
            )));
        }
        Ok(self.compose_unchecked(g, f))
    }

    pub(crate) fn compose_unchecked(&self, g: &RigMatrix, f: &RigMatrix) -> RigMatrix {
        debug_assert_eq!(g.dom, f.cod);
        let rig = &*self.rig;
        let z = rig.zero();
        let mut entries = Vec::with_capacity(g.cod * f.dom);
        for i in 0..g.cod {
            for j in 0..f.dom {
                let mut acc = z;
                for k in 0..g.dom {
                    acc = rig.add(acc, rig.mul(g.get(i, k), f.get(k, j)));
                }
                entries.push(acc);
            }
        }
        RigMatrix::new(g.cod, f.dom, entries)
    }

    pub fn dagger(&self, f: &RigMatrix) -> RigMatrix {
        RigMatrix::from_fn(f.dom, f.cod, |i, j| f.get(j, i))
    }

    /// Kronecker product, left factor major.
    pub fn tensor(&self, f: &RigMatrix, g: &RigMatrix) -> RigMatrix {
        RigMatrix::from_fn(f.cod * g.cod, f.dom * g.dom, |i, j| {
            self.rig.mul(f.get(i / g.cod, j / g.dom), g.get(i % g.cod, j % g.dom))
        })
    }

    pub fn direct_sum(&self, f: &RigMatrix, g: &RigMatrix) -> RigMatrix {
        let z = self.rig.zero();
        RigMatrix::from_fn(f.cod + g.cod, f.dom + g.dom, |i, j| match (i < f.cod, j < f.dom) {
            (true, true) => f.get(i, j),
            (false, false) => g.get(i - f.cod, j - f.dom),
            _ => z,
        })
    }

    /// Entrywise sum of parallel matrices.
    pub fn add(&self, f: &RigMatrix, g: &RigMatrix) -> Result<RigMatrix, MatError> {
        if (f.cod, f.dom) != (g.cod, g.dom) {
            return Err(MatError::DomainMismatch(format!(
                "cannot add {}→{} and {}→{}",
                f.dom, f.cod, g.dom, g.cod
            )));
        }
        Ok(self.add_unchecked(f, g))
    }

    pub(crate) fn add_unchecked(&self, f: &RigMatrix, g: &RigMatrix) -> RigMatrix {
        let entries = f
            .entries
            .iter()
            .zip(&g.entries)
            .map(|(&a, &b)| self.rig.add(a, b))
            .collect();
        RigMatrix::new(f.cod, f.dom, entries)
    }

    /// Coprojections into `⊕ sizes`.
    pub fn injections(&self, sizes: &[usize]) -> Vec<RigMatrix> {
        let total: usize = sizes.iter().sum();
        let (z, o) = (self.rig.zero(), self.rig.one());
        let mut offset = 0;
        sizes
            .iter()
            .map(|&n| {
                let m = RigMatrix::from_fn(total, n, |i, j| if i == offset + j { o } else { z });
                offset += n;
                m
            })
            .collect()
    }

    pub fn projections(&self, sizes: &[usize]) -> Vec<RigMatrix> {
        self.injections(sizes).iter().map(|i| self.dagger(i)).collect()
    }

    /// `Δ : n → ⊕_{copies} n`.
    pub fn diagonal(&self, n: usize, copies: usize) -> RigMatrix {
        let (z, o) = (self.rig.zero(), self.rig.one());
        RigMatrix::from_fn(n * copies, n, |i, j| if i % n == j { o } else { z })
    }

    pub fn associator(&self, x: usize, y: usize, z: usize) -> RigMatrix {
        self.identity(x * y * z)
    }

    /// `x ⊗ y → y ⊗ x`.
    pub fn braiding(&self, x: usize, y: usize) -> RigMatrix {
        let (z, o) = (self.rig.zero(), self.rig.one());
        // column (a,b) = a*y + b goes to row (b,a) = b*x + a
        RigMatrix::from_fn(y * x, x * y, |i, j| if i == (j % y) * x + j / y { o } else { z })
    }

    pub fn left_unitor(&self, n: usize) -> RigMatrix {
        self.identity(n)
    }

    pub fn right_unitor(&self, n: usize) -> RigMatrix {
        self.identity(n)
    }

    /// `Δ† ∘ (⊕ rs) ∘ Δ`; the empty family gives the zero matrix.
    pub fn sum_via_diagonal(&self, cod: usize, dom: usize, rs: &[RigMatrix]) -> Result<RigMatrix, MatError> {
        if let Some(r) = rs.iter().find(|r| (r.cod, r.dom) != (cod, dom)) {
            return Err(MatError::DomainMismatch(format!(
                "{}→{} in a family of {}→{}",
                r.dom, r.cod, dom, cod
            )));
        }
        let k = rs.len();
        let blocks = rs.iter().fold(self.zero(0, 0), |acc, r| self.direct_sum(&acc, r));
        let inner = self.compose_unchecked(&blocks, &self.diagonal(dom, k));
        Ok(self.compose_unchecked(&self.dagger(&self.diagonal(cod, k)), &inner))
    }

    pub fn is_dagger_monic(&self, m: &RigMatrix) -> bool {
        self.compose_unchecked(&self.dagger(m), m) == self.identity(m.dom)
    }

    /// Number of matrices `dom → cod`, if it fits in a `u64`.
    pub fn hom_count(&self, cod: usize, dom: usize) -> Option<u64> {
        (self.rig.size() as u64).checked_pow(u32::try_from(cod * dom).ok()?)
    }

    /// The `k`-th matrix `dom → cod` in canonical order: entries row-major,
    /// earlier entries more significant, each entry running through the
    /// carrier from its last element down to its first.
    pub fn hom_nth(&self, cod: usize, dom: usize, k: u64) -> RigMatrix {
        let s = self.rig.size() as u64;
        let n = cod * dom;
        let mut entries = vec![Elem(0); n];
        let mut rest = k;
        for p in (0..n).rev() {
            let digit = rest % s;
            rest /= s;
            entries[p] = Elem((s - 1 - digit) as u8);
        }
        RigMatrix::new(cod, dom, entries)
    }

    pub fn hom(&self, cod: usize, dom: usize) -> impl Iterator<Item = RigMatrix> + '_ {
        let count = self.hom_count(cod, dom).expect("hom-set too large to enumerate");
        (0..count).map(move |k| self.hom_nth(cod, dom, k))
    }

    /// Dagger-monic matrices `k → n` in canonical order, cached.
    fn dagger_monics(&self, n: usize, k: usize) -> Result<Arc<Vec<RigMatrix>>, MatError> {
        if let Some(v) = self.monic_cache.lock().unwrap().get(&(n, k)) {
            return Ok(v.clone());
        }
        let count = self
            .hom_count(n, k)
            .filter(|&c| c <= self.kernel_ceiling)
            .ok_or(MatError::SearchExhausted {
                needed: self.hom_count(n, k).unwrap_or(u64::MAX),
                ceiling: self.kernel_ceiling,
            })?;
        let list: Vec<RigMatrix> = (0..count)
            .map(|i| self.hom_nth(n, k, i))
            .filter(|m| self.is_dagger_monic(m))
            .collect();
        let list = Arc::new(list);
        self.monic_cache.lock().unwrap().insert((n, k), list.clone());
        Ok(list)
    }

    /// Searches for a dagger kernel of `r` among dagger-monic `m` into
    /// `dom(r)` with domain at most `dom(r)`, ordered by domain size and
    /// then canonically. A candidate must satisfy `r∘m = 0` and factor
    /// every `g : j → dom(r)` (`1 ≤ j ≤ search_bound`) with `r∘g = 0`;
    /// the factor is necessarily `m†∘g`. Composition acts column by
    /// column, so it suffices to test single columns.
    pub fn find_kernel(&self, r: &RigMatrix, search_bound: usize) -> Result<KernelSearch, MatError> {
        let n = r.dom;
        if search_bound == 0 {
            return Err(MatError::DomainMismatch("search bound must be at least 1".into()));
        }
        let annihilated: Vec<RigMatrix> = self
            .hom(n, 1)
            .filter(|g| self.compose_unchecked(r, g) == self.zero(r.cod, 1))
            .collect();
        let mut dagger_monic = 0;
        let mut annihilating = 0;
        for k in 0..=n {
            for m in self.dagger_monics(n, k)?.iter() {
                dagger_monic += 1;
                if self.compose_unchecked(r, m) != self.zero(r.cod, k) {
                    continue;
                }
                annihilating += 1;
                let md = self.dagger(m);
                let factors = annihilated
                    .iter()
                    .all(|g| &self.compose_unchecked(m, &self.compose_unchecked(&md, g)) == g);
                if factors {
                    return Ok(KernelSearch::Found(MatKernel {
                        m: m.clone(),
                        source: r.clone(),
                    }));
                }
            }
        }
        Ok(KernelSearch::NotFound {
            dagger_monic,
            annihilating,
        })
    }

    /// `η_n : 1 → n⊗n`, the vectorized identity.
    pub fn eta(&self, n: usize) -> RigMatrix {
        let (z, o) = (self.rig.zero(), self.rig.one());
        RigMatrix::from_fn(n * n, 1, |i, _| if i / n == i % n { o } else { z })
    }

    /// `λ ∘ (η† ⊗ id) ∘ α⁻¹ ∘ (id ⊗ η) ∘ ρ⁻¹`.
    pub fn snake_left(&self, n: usize) -> RigMatrix {
        let id = self.identity(n);
        let eta = self.eta(n);
        let steps = [
            self.dagger(&self.right_unitor(n)),
            self.tensor(&id, &eta),
            self.dagger(&self.associator(n, n, n)),
            self.tensor(&self.dagger(&eta), &id),
            self.left_unitor(n),
        ];
        self.chain(&steps)
    }

    /// `ρ ∘ (id ⊗ η†) ∘ α ∘ (η ⊗ id) ∘ λ⁻¹`.
    pub fn snake_right(&self, n: usize) -> RigMatrix {
        let id = self.identity(n);
        let eta = self.eta(n);
        let steps = [
            self.dagger(&self.left_unitor(n)),
            self.tensor(&eta, &id),
            self.associator(n, n, n),
            self.tensor(&id, &self.dagger(&eta)),
            self.right_unitor(n),
        ];
        self.chain(&steps)
    }

    fn chain(&self, steps: &[RigMatrix]) -> RigMatrix {
        steps[1..]
            .iter()
            .fold(steps[0].clone(), |acc, s| self.compose_unchecked(s, &acc))
    }

    pub fn check_dagger_dual(&self, n: usize) -> DualVerdict {
        let id = self.identity(n);
        for (which, composite) in [("left", self.snake_left(n)), ("right", self.snake_right(n))] {
            if composite != id {
                return DualVerdict::Fails { which, composite };
            }
        }
        DualVerdict::Holds
    }

    /// `η† ∘ β ∘ (r ⊗ id) ∘ η : 1 → 1`.
    pub fn trace(&self, r: &RigMatrix) -> Result<Elem, MatError> {
        if r.cod != r.dom {
            return Err(MatError::DomainMismatch(format!(
                "trace of non-endomorphism {}→{}",
                r.dom, r.cod
            )));
        }
        let n = r.dom;
        let eta = self.eta(n);
        let t = self.chain(&[
            eta.clone(),
            self.tensor(r, &self.identity(n)),
            self.braiding(n, n),
            self.dagger(&eta),
        ]);
        Ok(t.get(0, 0))
    }

    /// `(id_X ⊗ r) ∘ η_X : 1 → X⊗Y`.
    pub fn breve(&self, r: &RigMatrix) -> RigMatrix {
        let x = r.dom;
        self.compose_unchecked(&self.tensor(&self.identity(x), r), &self.eta(x))
    }

    /// Inverse of [`breve`](Self::breve): reshapes a point of `x⊗y`.
    pub fn un_breve(&self, p: &RigMatrix, x: usize, y: usize) -> Result<RigMatrix, MatError> {
        if (p.cod, p.dom) != (x * y, 1) {
            return Err(MatError::DomainMismatch(format!(
                "{}→{} is not a point of {x}⊗{y}",
                p.dom, p.cod
            )));
        }
        Ok(RigMatrix::from_fn(y, x, |i, j| p.get(j * y + i, 0)))
    }
}
