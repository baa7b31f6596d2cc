//! Extracting a relation between atom sets from a morphism, and checking
//! that extraction is a monoidal equivalence on small objects.
//!
//! An object `X` becomes its set of atoms: minimal nonzero points `I → X`.
//! A morphism `r : X → Y` becomes `{(x, y) | y† ∘ r ∘ x = 1}`.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::bitmat::BoolMat;
use crate::checker::{timed, AxiomReport, CheckError, CondResult, Config, Ctx, Item, Verdict};
use crate::model::Model;

type NamedCase<M> = (&'static str, Vec<(String, Item<<M as Model>::Mor>)>);

/// Atoms of `n` in canonical order. A point `a` is an atom when it is
/// nonzero and every nonzero point below it is `a` itself. The points below
/// `a` are exactly the vectors whose entries lie below `a`'s entries, so it
/// is enough to count that product of down-sets.
pub fn atoms_by_scan<M: Model>(model: &M, n: usize, count: u64) -> Vec<M::Mor> {
    let rig = model.rig();
    let down: Vec<(usize, bool)> = rig
        .elements()
        .map(|e| {
            let below = rig.elements().filter(|&d| rig.add(d, e) == e).count();
            (below, rig.add(e, e) == e)
        })
        .collect();
    (0..count)
        .map(|k| model.hom_nth(n, 1, k))
        .filter(|a| {
            let mut below = 1usize;
            let mut self_below = true;
            let mut nonzero = false;
            for i in 0..n {
                let e = model.entry(a, i, 0);
                nonzero |= e != rig.zero();
                let (c, idem) = down[e.index()];
                below = below.saturating_mul(c);
                self_below &= idem;
            }
            // below counts the zero vector too
            nonzero && (below == 1 || (below == 2 && self_below))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("object {size} is not atomic: point {point} has no atom below it")]
    NotAtomic { size: usize, point: String },
    #[error("object {size} has too many points to scan")]
    TooLarge { size: usize },
}

/// The atoms of `n`, failing when some nonzero point lies above no atom.
pub fn extract_object<M: Model>(model: &M, n: usize) -> Result<Vec<M::Mor>, ExtractError> {
    let count = model
        .hom_count(n, 1)
        .filter(|&c| c <= 1 << 20)
        .ok_or(ExtractError::TooLarge { size: n })?;
    let atoms = atoms_by_scan(model, n, count);
    for k in 0..count {
        let a = model.hom_nth(n, 1, k);
        if !model.is_zero(&a) && !atoms.iter().any(|t| model.le(t, &a)) {
            return Err(ExtractError::NotAtomic {
                size: n,
                point: model.show(&a),
            });
        }
    }
    Ok(atoms)
}

/// `E(r)`: rows are atoms of the domain, columns atoms of the codomain.
pub fn extract_with<M: Model>(model: &M, dom_atoms: &[M::Mor], cod_atoms: &[M::Mor], r: &M::Mor) -> BoolMat {
    let one = model.identity(1);
    let images: Vec<M::Mor> = dom_atoms.iter().map(|x| model.compose(r, x)).collect();
    let duals: Vec<M::Mor> = cod_atoms.iter().map(|y| model.dagger(y)).collect();
    BoolMat::from_fn(dom_atoms.len(), cod_atoms.len(), |i, j| {
        model.compose(&duals[j], &images[i]) == one
    })
}

/// `E(r)` with atoms computed from scratch.
pub fn extract_morphism<M: Model>(model: &M, r: &M::Mor) -> Result<BoolMat, ExtractError> {
    let dom = extract_object(model, model.dom(r))?;
    let cod = extract_object(model, model.cod(r))?;
    Ok(extract_with(model, &dom, &cod, r))
}

/// `Σ_{(i,j) ∈ rel} y_j ∘ x_i†`, the morphism whose extraction should be
/// `rel`.
pub fn full_preimage<M: Model>(
    model: &M,
    dom_atoms: &[M::Mor],
    cod_atoms: &[M::Mor],
    dom: usize,
    cod: usize,
    rel: &BoolMat,
) -> M::Mor {
    rel.ones().fold(model.zero(cod, dom), |acc, (i, j)| {
        model.add(&acc, &model.compose(&cod_atoms[j], &model.dagger(&dom_atoms[i])))
    })
}

/// The comparison `E(X) × E(Y) → E(X ⊗ Y)`, `(x, y) ↦ x ⊗ y`, as a
/// relation. Pairs whose tensor is not an atom have no image.
pub fn mu_relation<M: Model>(model: &M, ax: &[M::Mor], ay: &[M::Mor], axy: &[M::Mor]) -> BoolMat {
    let index: HashMap<&M::Mor, usize> = axy.iter().zip(0..).collect();
    let mut out = BoolMat::zeros(ax.len() * ay.len(), axy.len());
    for (i, x) in ax.iter().enumerate() {
        for (j, y) in ay.iter().enumerate() {
            if let Some(&c) = index.get(&model.tensor(x, y)) {
                out.set(i * ay.len() + j, c, true);
            }
        }
    }
    out
}

/// `(i, j) ↦ (j, i)` on index pairs `i·ey + j`.
pub fn swap_relation(ex: usize, ey: usize) -> BoolMat {
    BoolMat::from_fn(ex * ey, ey * ex, |r, c| c == (r % ey) * ex + r / ey)
}

pub fn show_erel(r: &BoolMat) -> String {
    let mut s = format!("{}->{} {{", r.rows(), r.cols());
    for (k, (i, j)) in r.ones().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        write!(s, "({i},{j})").unwrap();
    }
    s.push('}');
    s
}

pub const EQUIVALENCE_IDS: [&str; 7] = [
    "extract-identity",
    "extract-composition",
    "extract-dagger",
    "extract-faithful",
    "extract-full",
    "extract-preimage",
    "extract-eso",
];

pub const COHERENCE_IDS: [&str; 4] = ["mu-bijective", "associator-square", "braiding-square", "unit-iso"];

fn id<M: Model>(ctx: &Ctx<'_, M>, n: usize) -> Item<M::Mor> {
    Item::Mor(ctx.model.identity(n))
}

fn extract<M: Model>(ctx: &Ctx<'_, M>, r: &M::Mor) -> Result<BoolMat, crate::checker::Abort> {
    let m = ctx.model;
    Ok(extract_with(m, &ctx.atoms(m.dom(r))?, &ctx.atoms(m.cod(r))?, r))
}

fn identity<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    for n in 0..=ctx.bound {
        if extract(ctx, &ctx.model.identity(n))? != BoolMat::identity(ctx.atoms(n)?.len()) {
            return Ok(ctx.fail("extract-identity", "extract-identity", vec![("x", id(ctx, n))]));
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn composition<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    let cap = ctx.config.functor_cap.min(ctx.bound);
    for x in 0..=cap {
        for y in 0..=cap {
            let rs: Vec<(M::Mor, BoolMat)> = ctx
                .hom(y, x)?
                .into_iter()
                .map(|r| extract(ctx, &r).map(|e| (r, e)))
                .collect::<Result<_, _>>()?;
            for z in 0..=cap {
                for s in ctx.hom(z, y)? {
                    let es = extract(ctx, &s)?;
                    for (r, er) in &rs {
                        if extract(ctx, &m.compose(&s, r))? != er.mul(&es) {
                            let items = vec![("r", Item::Mor(r.clone())), ("s", Item::Mor(s))];
                            return Ok(ctx.fail("extract-composition", "extract-composition", items));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

/// Runs `f` on every morphism between objects of size at most the bound.
fn each_morphism<M: Model>(ctx: &Ctx<'_, M>, mut f: impl FnMut(usize, usize, Vec<M::Mor>) -> CondResult) -> CondResult {
    for x in 0..=ctx.bound {
        for y in 0..=ctx.bound {
            let v = f(x, y, ctx.hom(y, x)?)?;
            if !v.holds() {
                return Ok(v);
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn dagger<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    each_morphism(ctx, |_, _, hom| {
        for r in hom {
            if extract(ctx, &m.dagger(&r))? != extract(ctx, &r)?.transpose() {
                return Ok(ctx.fail("extract-dagger", "extract-dagger", vec![("r", Item::Mor(r))]));
            }
        }
        Ok(Verdict::HoldsAtBound)
    })
}

fn faithful<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    each_morphism(ctx, |_, _, hom| {
        let mut seen: HashMap<BoolMat, M::Mor> = HashMap::new();
        for r in hom {
            if let Some(s) = seen.insert(extract(ctx, &r)?, r.clone()) {
                let items = vec![("r", Item::Mor(s)), ("s", Item::Mor(r))];
                return Ok(ctx.fail("extract-faithful", "extract-faithful", items));
            }
        }
        Ok(Verdict::HoldsAtBound)
    })
}

fn full<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    for x in 0..=ctx.bound {
        for y in 0..=ctx.bound {
            let (ax, ay) = (ctx.atoms(x)?, ctx.atoms(y)?);
            let cells = ax.len() * ay.len();
            if cells > 20 {
                return Err(crate::checker::Abort::HomTooLarge { cod: y, dom: x });
            }
            for code in 0..1u64 << cells {
                let rel = BoolMat::from_code(ax.len(), ay.len(), code);
                let f = full_preimage(m, &ax, &ay, x, y, &rel);
                if extract_with(m, &ax, &ay, &f) != rel {
                    let items = vec![("x", id(ctx, x)), ("y", id(ctx, y)), ("R", Item::Erel(rel))];
                    return Ok(ctx.fail("extract-full", "extract-full", items));
                }
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn preimage<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    each_morphism(ctx, |x, y, hom| {
        let (ax, ay) = (ctx.atoms(x)?, ctx.atoms(y)?);
        for r in hom {
            if full_preimage(m, &ax, &ay, x, y, &extract_with(m, &ax, &ay, &r)) != r {
                return Ok(ctx.fail("extract-preimage", "extract-preimage", vec![("r", Item::Mor(r))]));
            }
        }
        Ok(Verdict::HoldsAtBound)
    })
}

/// Every finite set `{0,…,n-1}` should come back as the atoms of `n`,
/// which are then exactly the coordinate points.
fn eso<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    for n in 0..=ctx.bound {
        if *ctx.atoms(n)? != m.injections(&vec![1; n]) {
            return Ok(ctx.fail("extract-eso", "extract-eso", vec![("x", id(ctx, n))]));
        }
    }
    Ok(Verdict::HoldsAtBound)
}

pub(crate) fn equivalence_into<M: Model>(ctx: &Ctx<'_, M>, report: &mut AxiomReport) -> Result<(), CheckError> {
    timed(report, EQUIVALENCE_IDS[0], || identity(ctx))?;
    timed(report, EQUIVALENCE_IDS[1], || composition(ctx))?;
    timed(report, EQUIVALENCE_IDS[2], || dagger(ctx))?;
    timed(report, EQUIVALENCE_IDS[3], || faithful(ctx))?;
    timed(report, EQUIVALENCE_IDS[4], || full(ctx))?;
    timed(report, EQUIVALENCE_IDS[5], || preimage(ctx))?;
    timed(report, EQUIVALENCE_IDS[6], || eso(ctx))
}

fn mu_bijective<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    for x in 0..=ctx.bound {
        for y in 0..=ctx.bound {
            let mu = mu_relation(ctx.model, &ctx.atoms(x)?, &ctx.atoms(y)?, &ctx.atoms(x * y)?);
            let bijective = mu.rows() == mu.cols()
                && (0..mu.rows()).all(|r| (0..mu.cols()).filter(|&c| mu.get(r, c)).count() == 1)
                && (0..mu.cols()).all(|c| (0..mu.rows()).filter(|&r| mu.get(r, c)).count() == 1);
            if !bijective {
                let items = vec![("x", id(ctx, x)), ("y", id(ctx, y))];
                return Ok(ctx.fail("mu-bijective", "mu-bijective", items));
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn squares<M: Model>(ctx: &Ctx<'_, M>, law: &'static str) -> CondResult {
    let b = ctx.bound;
    let one = |n| vec![n];
    let sizes: Vec<Vec<usize>> = match law {
        "associator-square" => (0..=b)
            .flat_map(|x| (0..=b).flat_map(move |y| (0..=b).map(move |z| vec![x, y, z])))
            .filter(|v| v.iter().product::<usize>() <= ctx.config.coherence_cap)
            .collect(),
        "braiding-square" => (0..=b).flat_map(|x| (0..=b).map(move |y| vec![x, y])).collect(),
        _ => (0..=b).map(one).collect(),
    };
    for s in sizes {
        let names = ["x", "y", "z"];
        let items: Vec<(String, Item<M::Mor>)> = names
            .iter()
            .zip(&s)
            .map(|(n, &k)| (n.to_string(), id(ctx, k)))
            .collect();
        let holds = matches!(crate::checker::eval_law(ctx, law, &items), Ok((l, r)) if l == r);
        if !holds {
            let items = items.iter().map(|(n, i)| (n.as_str(), i.clone())).collect();
            return Ok(ctx.fail(law, law, items));
        }
    }
    Ok(Verdict::HoldsAtBound)
}

pub(crate) fn coherence_into<M: Model>(ctx: &Ctx<'_, M>, report: &mut AxiomReport) -> Result<(), CheckError> {
    timed(report, COHERENCE_IDS[0], || mu_bijective(ctx))?;
    timed(report, COHERENCE_IDS[1], || squares(ctx, "associator-square"))?;
    timed(report, COHERENCE_IDS[2], || squares(ctx, "braiding-square"))?;
    timed(report, COHERENCE_IDS[3], || squares(ctx, "unit-iso"))
}

/// Faithful, full and essentially surjective, plus identity, composition
/// and dagger preservation, on objects of size at most `bound`.
pub fn verify_equivalence<M: Model>(model: &M, bound: usize) -> Result<AxiomReport, CheckError> {
    if bound == 0 {
        return Err(CheckError::ZeroBound);
    }
    let ctx = Ctx::new(model, bound, Config::default());
    let mut report = AxiomReport::for_ctx(&ctx);
    equivalence_into(&ctx, &mut report)?;
    Ok(report)
}

/// Coherence verdicts at one size triple.
#[derive(Clone, Debug)]
pub struct CoherenceReport {
    pub sizes: (usize, usize, usize),
    pub results: Vec<(&'static str, Verdict)>,
}

impl CoherenceReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|(_, v)| v.holds())
    }

    pub fn get(&self, id: &str) -> Option<&Verdict> {
        self.results.iter().find(|(i, _)| *i == id).map(|(_, v)| v)
    }
}

/// The associator square at `(x, y, z)`, the braiding square at `(x, y)`,
/// the unit comparison at `x`, and bijectivity of `mu` on each pair used.
pub fn verify_monoidal_coherence<M: Model>(model: &M, sizes: (usize, usize, usize)) -> CoherenceReport {
    let (x, y, z) = sizes;
    let ctx = Ctx::new(model, x.max(y).max(z).max(1), Config::default());
    let ids = |ns: &[usize]| -> Vec<(String, Item<M::Mor>)> {
        ["x", "y", "z"]
            .iter()
            .zip(ns)
            .map(|(n, &k)| (n.to_string(), id(&ctx, k)))
            .collect()
    };
    let cases: [NamedCase<M>; 4] = [
        ("mu-bijective", ids(&[x, y])),
        ("associator-square", ids(&[x, y, z])),
        ("braiding-square", ids(&[x, y])),
        ("unit-iso", ids(&[x])),
    ];
    let results = cases
        .into_iter()
        .map(|(law, items)| {
            let holds = matches!(crate::checker::eval_law(&ctx, law, &items), Ok((l, r)) if l == r);
            let v = if holds {
                Verdict::HoldsAtBound
            } else {
                ctx.fail(law, law, items.iter().map(|(n, i)| (n.as_str(), i.clone())).collect())
            };
            (law, v)
        })
        .collect();
    CoherenceReport { sizes, results }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MuError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("atom pair ({0},{1}) does not map to an atom")]
    NotAnAtom(usize, usize),
    #[error("atom {0} of the tensor is missed")]
    Missed(usize),
}

/// `mu` as a list: entry `i·|E(Y)| + j` is the index of `x_i ⊗ y_j` among
/// the atoms of `X ⊗ Y`.
pub fn mu<M: Model>(model: &M, x: usize, y: usize) -> Result<Vec<usize>, MuError> {
    let (ax, ay, axy) = (
        extract_object(model, x)?,
        extract_object(model, y)?,
        extract_object(model, x * y)?,
    );
    let rel = mu_relation(model, &ax, &ay, &axy);
    let images = (0..rel.rows())
        .map(|r| {
            (0..rel.cols())
                .find(|&c| rel.get(r, c))
                .ok_or(MuError::NotAnAtom(r / ay.len(), r % ay.len()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(c) = (0..axy.len()).find(|c| images.iter().filter(|&i| i == c).count() != 1) {
        return Err(MuError::Missed(c));
    }
    Ok(images)
}
