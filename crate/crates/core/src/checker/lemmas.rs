//! Decompositions that follow from the characterizing conditions: kernels
//! split the identity, atoms resolve it, and points factor through their
//! complemented kernels.

use crate::model::Model;

use super::{timed, AxiomReport, CheckError, CondResult, Config, Ctx, Item, Verdict};

pub const LEMMA_IDS: [&str; 5] = [
    "kernel-decomposition",
    "atom-decomposition",
    "point-factorization",
    "complement-factorization",
    "atom-existence",
];

fn kernel_decomposition<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    for x in 0..=ctx.bound {
        let id = m.identity(x);
        for k in ctx.dagger_kernels(x)? {
            let kp = ctx.kernel(&m.dagger(&k))?;
            let ok = kp.is_some_and(|kp| m.add(&m.compose(&k, &m.dagger(&k)), &m.compose(&kp, &m.dagger(&kp))) == id);
            if !ok {
                return Ok(ctx.fail(
                    "kernel-decomposition",
                    "kernel-decomposition",
                    vec![("k", Item::Mor(k))],
                ));
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn atom_decomposition<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    for x in 0..=ctx.bound {
        let sum = ctx
            .atoms(x)?
            .iter()
            .fold(m.zero(x, x), |acc, a| m.add(&acc, &m.compose(a, &m.dagger(a))));
        if sum != m.identity(x) {
            let items = vec![("x", Item::Mor(m.identity(x)))];
            return Ok(ctx.fail("atom-decomposition", "atom-decomposition", items));
        }
    }
    Ok(Verdict::HoldsAtBound)
}

/// Checks `a = j ∘ ⊤` with `j` the complement of the kernel of `a†`, and
/// `¬a = k ∘ ⊤` with `k` that kernel.
fn factorization<M: Model>(ctx: &Ctx<'_, M>, complement: bool) -> CondResult {
    let (id, law) = if complement {
        ("complement-factorization", "complement-factorization")
    } else {
        ("point-factorization", "point-factorization")
    };
    let m = ctx.model;
    for x in 0..=ctx.bound {
        let l = ctx.lattice(x)?;
        for (i, a) in l.points.iter().enumerate() {
            let item = || vec![("a", Item::Mor(a.clone()))];
            let Some(k) = ctx.kernel(&m.dagger(a))? else {
                return Ok(ctx.fail(id, law, item()));
            };
            let j = if complement {
                Some(k)
            } else {
                ctx.kernel(&m.dagger(&k))?
            };
            let Some(j) = j else {
                return Ok(ctx.fail(id, law, item()));
            };
            let top = ctx.lattice(m.dom(&j))?.top_point().cloned();
            let got = top.map(|t| m.compose(&j, &t));
            let expected = if complement {
                l.neg(i).map(|n| l.points[n].clone())
            } else {
                Some(a.clone())
            };
            if got.is_none() || got != expected {
                return Ok(ctx.fail(id, law, item()));
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn atom_existence<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    let one = m.identity(1);
    for x in 0..=ctx.bound {
        let l = ctx.lattice(x)?;
        let unit_top = l.top_point().is_some_and(|t| m.compose(&m.dagger(t), t) == one);
        if unit_top && ctx.atoms(x)?.is_empty() {
            let items = vec![("x", Item::Mor(m.identity(x)))];
            return Ok(ctx.fail("atom-existence", "atom-existence", items));
        }
    }
    Ok(Verdict::HoldsAtBound)
}

pub(crate) fn lemmas_into<M: Model>(ctx: &Ctx<'_, M>, report: &mut AxiomReport) -> Result<(), CheckError> {
    timed(report, LEMMA_IDS[0], || kernel_decomposition(ctx))?;
    timed(report, LEMMA_IDS[1], || atom_decomposition(ctx))?;
    timed(report, LEMMA_IDS[2], || factorization(ctx, false))?;
    timed(report, LEMMA_IDS[3], || factorization(ctx, true))?;
    timed(report, LEMMA_IDS[4], || atom_existence(ctx))
}

/// Runs the decomposition lemmas on objects of size at most `bound`.
pub fn verify_decomposition_lemmas<M: Model>(model: &M, bound: usize) -> Result<AxiomReport, CheckError> {
    if bound == 0 {
        return Err(CheckError::ZeroBound);
    }
    let ctx = Ctx::new(model, bound, Config::default());
    let mut report = AxiomReport::for_ctx(&ctx);
    lemmas_into(&ctx, &mut report)?;
    Ok(report)
}
