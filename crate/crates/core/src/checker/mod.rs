//! Bounded verification of the characterizing properties of relations.
//!
//! Every check quantifies over objects up to a size bound. A `HOLDS`
//! verdict certifies the laws on those objects only; every report header
//! says so. A `FAILS` verdict carries a counterexample that re-evaluates to
//! the recorded inequality (see [`replay`]).

mod conditions;
mod lattice;
mod laws;
mod lemmas;

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::rc::Rc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::extraction;
use crate::matcat::MatError;
use crate::model::Model;

pub use conditions::{check_characterization, check_monoidal_separator, check_point_characterization};
pub use lattice::{verify_hom_lattice, LatticeReport, PointLattice};
pub(crate) use laws::eval as eval_law;
pub use laws::{parse_witness, replay, Item, ReplayOutcome, Witness};
pub use lemmas::verify_decomposition_lemmas;

/// How triple laws of the point lattice are scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeMode {
    Exhaustive,
    Sampled { triples: usize, seed: u64 },
}

/// Caps and sampling knobs. Every field is echoed in the report header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Separation is checked exhaustively when a signature has at most this
    /// many candidate rows, and by sampling otherwise.
    pub separator_ceiling: u64,
    pub separator_samples: usize,
    pub sample_seed: u64,
    pub lattice_mode: LatticeMode,
    /// Largest object size for functoriality of extraction.
    pub functor_cap: usize,
    /// Largest `|X|·|Y|·|Z|` for coherence squares.
    pub coherence_cap: usize,
    /// Largest hom-set enumerated by exhaustive scans.
    pub hom_ceiling: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            separator_ceiling: 1_000_000,
            separator_samples: 2000,
            sample_seed: 0,
            lattice_mode: LatticeMode::Exhaustive,
            functor_cap: 2,
            coherence_cap: 9,
            hom_ceiling: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub condition: String,
    pub law: String,
    pub lhs: String,
    pub rhs: String,
    /// Witness morphisms in the model's file format, followed by any
    /// extracted relations.
    pub items: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    HoldsAtBound,
    Fails(Box<Counterexample>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsAtBound)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::HoldsAtBound => None,
            Verdict::Fails(c) => Some(c),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConditionResult {
    pub id: &'static str,
    pub verdict: Verdict,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub model: String,
    pub bound: usize,
    pub notes: Vec<String>,
    pub results: Vec<ConditionResult>,
}

impl AxiomReport {
    pub(crate) fn for_ctx<M: Model>(ctx: &Ctx<'_, M>) -> Self {
        AxiomReport {
            model: ctx.model.name(),
            bound: ctx.bound,
            notes: header_notes(&ctx.config, ctx.bound),
            results: Vec::new(),
        }
    }

    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.verdict.holds())
    }

    pub fn get(&self, id: &str) -> Option<&ConditionResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionResult> {
        self.results.iter().filter(|r| !r.verdict.holds())
    }

    /// The report text. `witness_path` maps a failing condition to the path
    /// printed after `witness=`.
    pub fn render(&self, witness_path: impl Fn(&ConditionResult) -> String) -> String {
        let mut out = String::new();
        writeln!(out, "# model: {}", self.model).unwrap();
        writeln!(out, "# bound: {}", self.bound).unwrap();
        for note in &self.notes {
            writeln!(out, "# {note}").unwrap();
        }
        for r in &self.results {
            match &r.verdict {
                Verdict::HoldsAtBound => writeln!(out, "{} HOLDS bound={}", r.id, self.bound),
                Verdict::Fails(_) => writeln!(out, "{} FAILS bound={} witness={}", r.id, self.bound, witness_path(r)),
            }
            .unwrap();
        }
        out
    }

    fn merge(&mut self, other: AxiomReport) {
        for r in other.results {
            if self.get(r.id).is_none() {
                self.results.push(r);
            }
        }
    }
}

fn header_notes(config: &Config, bound: usize) -> Vec<String> {
    let lattice = match config.lattice_mode {
        LatticeMode::Exhaustive => "exhaustive".to_string(),
        LatticeMode::Sampled { triples, seed } => format!("{triples} sampled triples, seed {seed}"),
    };
    vec![
        format!("bounded verification: HOLDS certifies the laws on objects of size <= {bound} only, never in general"),
        "assumption: kernel candidates have domain no larger than the kernel's ambient object".into(),
        "assumption: dagger kernels into X are enumerated as kernels of maps X -> I".into(),
        "assumption: infinite biproducts are tested on the constant family of I through the rig's infinitary sum"
            .into(),
        "separation and joint epicity are checked one matrix row at a time, which covers every codomain".into(),
        format!(
            "cap: separation exhaustive up to {} rows per signature, else {} seeded pairs (seed {})",
            config.separator_ceiling, config.separator_samples, config.sample_seed
        ),
        format!(
            "cap: extraction functoriality at sizes <= {}",
            config.functor_cap.min(bound)
        ),
        format!(
            "cap: coherence squares on size triples with product <= {}",
            config.coherence_cap
        ),
        format!("cap: essential surjectivity checked for finite sets of size <= {bound}"),
        format!("lattice triple laws: {lattice}"),
    ]
}

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("search exhausted while checking {condition}: {source}")]
    SearchExhausted {
        condition: &'static str,
        source: MatError,
        partial: Box<AxiomReport>,
    },
    #[error("hom-set {cod}<-{dom} is too large to enumerate while checking {condition}")]
    HomTooLarge {
        condition: &'static str,
        cod: usize,
        dom: usize,
    },
}

/// Error raised inside a single condition, before it is attached to the
/// partial report.
#[derive(Debug)]
pub(crate) enum Abort {
    Search(MatError),
    HomTooLarge { cod: usize, dom: usize },
}

impl From<MatError> for Abort {
    fn from(e: MatError) -> Self {
        Abort::Search(e)
    }
}

pub(crate) type CondResult = Result<Verdict, Abort>;

/// Shared state for one run: the model, the bound, and memoized kernels,
/// point lattices and atoms.
pub struct Ctx<'m, M: Model> {
    pub model: &'m M,
    pub bound: usize,
    pub config: Config,
    kernels: RefCell<HashMap<M::Mor, Option<M::Mor>>>,
    lattices: RefCell<HashMap<usize, Rc<PointLattice<M>>>>,
    atoms: RefCell<HashMap<usize, Rc<Vec<M::Mor>>>>,
}

impl<'m, M: Model> Ctx<'m, M> {
    pub fn new(model: &'m M, bound: usize, config: Config) -> Self {
        Ctx {
            model,
            bound,
            config,
            kernels: RefCell::new(HashMap::new()),
            lattices: RefCell::new(HashMap::new()),
            atoms: RefCell::new(HashMap::new()),
        }
    }

    pub(crate) fn kernel(&self, f: &M::Mor) -> Result<Option<M::Mor>, MatError> {
        if let Some(k) = self.kernels.borrow().get(f) {
            return Ok(k.clone());
        }
        let search_bound = self.bound.max(self.model.dom(f)).max(1);
        let k = self.model.kernel(f, search_bound)?;
        self.kernels.borrow_mut().insert(f.clone(), k.clone());
        Ok(k)
    }

    pub(crate) fn hom(&self, cod: usize, dom: usize) -> Result<Vec<M::Mor>, Abort> {
        match self.model.hom_count(cod, dom) {
            Some(n) if n <= self.config.hom_ceiling => Ok(self.model.hom(cod, dom)),
            _ => Err(Abort::HomTooLarge { cod, dom }),
        }
    }

    /// Points `1 → n`, canonical order.
    pub(crate) fn points(&self, n: usize) -> Result<Vec<M::Mor>, Abort> {
        self.hom(n, 1)
    }

    pub(crate) fn lattice(&self, n: usize) -> Result<Rc<PointLattice<M>>, Abort> {
        if let Some(l) = self.lattices.borrow().get(&n) {
            return Ok(l.clone());
        }
        let l = Rc::new(PointLattice::new(self.model, self.points(n)?));
        self.lattices.borrow_mut().insert(n, l.clone());
        Ok(l)
    }

    pub(crate) fn atoms(&self, n: usize) -> Result<Rc<Vec<M::Mor>>, Abort> {
        if let Some(a) = self.atoms.borrow().get(&n) {
            return Ok(a.clone());
        }
        let count = self
            .model
            .hom_count(n, 1)
            .filter(|&c| c <= self.config.hom_ceiling)
            .ok_or(Abort::HomTooLarge { cod: n, dom: 1 })?;
        let a = Rc::new(extraction::atoms_by_scan(self.model, n, count));
        self.atoms.borrow_mut().insert(n, a.clone());
        Ok(a)
    }

    /// Dagger kernels into `n`: kernels of `a†` over all points `a`,
    /// deduplicated, in order of first appearance.
    pub(crate) fn dagger_kernels(&self, n: usize) -> Result<Vec<M::Mor>, Abort> {
        let mut out: Vec<M::Mor> = Vec::new();
        for a in self.points(n)? {
            if let Some(k) = self.kernel(&self.model.dagger(&a))? {
                if !out.contains(&k) {
                    out.push(k);
                }
            }
        }
        Ok(out)
    }

    /// Builds a failing verdict, evaluating the law on its witnesses.
    pub(crate) fn fail(&self, condition: &'static str, law: &'static str, items: Vec<(&str, Item<M::Mor>)>) -> Verdict {
        let items: Vec<(String, Item<M::Mor>)> = items.into_iter().map(|(n, i)| (n.to_string(), i)).collect();
        let (lhs, rhs) =
            laws::eval(self, law, &items).unwrap_or_else(|e| (format!("evaluation failed: {e}"), String::new()));
        debug_assert_ne!(lhs, rhs, "{condition}/{law} witness does not fail");
        Verdict::Fails(Box::new(Counterexample {
            condition: condition.to_string(),
            law: law.to_string(),
            lhs,
            rhs,
            items: laws::write_items(self.model, &items),
        }))
    }
}

pub(crate) fn timed(
    report: &mut AxiomReport,
    id: &'static str,
    f: impl FnOnce() -> CondResult,
) -> Result<(), CheckError> {
    let start = Instant::now();
    match f() {
        Ok(verdict) => {
            report.results.push(ConditionResult {
                id,
                verdict,
                elapsed: start.elapsed(),
            });
            Ok(())
        }
        Err(Abort::Search(source)) => Err(CheckError::SearchExhausted {
            condition: id,
            source,
            partial: Box::new(report.clone()),
        }),
        Err(Abort::HomTooLarge { cod, dom }) => Err(CheckError::HomTooLarge {
            condition: id,
            cod,
            dom,
        }),
    }
}

/// Condition ids in report order.
pub const SUITE_IDS: &[&str] = &[
    "biproducts",
    "kernels",
    "joint-epic",
    "unit-nonzero",
    "scalars-invertible",
    "separator",
    "dagger-duals",
    "unit-simple-separating",
    "unique-top",
    "point-splitting",
    "monoidal-separator",
    "lattice-order",
    "lattice-meet",
    "lattice-distributive",
    "lattice-complement",
    "lattice-involution",
    "lattice-antitone",
    "lattice-atomic",
    "kernel-decomposition",
    "atom-decomposition",
    "point-factorization",
    "complement-factorization",
    "atom-existence",
    "extract-identity",
    "extract-composition",
    "extract-dagger",
    "extract-faithful",
    "extract-full",
    "extract-preimage",
    "extract-eso",
    "mu-bijective",
    "associator-square",
    "braiding-square",
    "unit-iso",
];

/// Every check at once, in [`SUITE_IDS`] order.
pub fn run_suite<M: Model>(model: &M, bound: usize, config: Config) -> Result<AxiomReport, CheckError> {
    if bound == 0 {
        return Err(CheckError::ZeroBound);
    }
    let ctx = Ctx::new(model, bound, config);
    let mut report = conditions::characterization(&ctx)?;
    report.merge(conditions::point_characterization(&ctx, &report)?);
    conditions::monoidal_separator_into(&ctx, &mut report)?;
    lattice::lattice_into(&ctx, &mut report)?;
    lemmas::lemmas_into(&ctx, &mut report)?;
    extraction::equivalence_into(&ctx, &mut report)?;
    extraction::coherence_into(&ctx, &mut report)?;
    debug_assert_eq!(report.results.iter().map(|r| r.id).collect::<Vec<_>>(), SUITE_IDS);
    Ok(report)
}
