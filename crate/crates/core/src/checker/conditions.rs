//! The characterizing conditions: biproducts, dagger kernels, joint
//! epicity, a nonzero unit with invertible nonzero scalars, the unit as a
//! separator, and dagger duals; the point-level variants that replace the
//! scalar and separator conditions; and monoidal separation.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::Model;

use super::laws::{self, split_points, zero_cokernel_points};
use super::{timed, Abort, AxiomReport, CheckError, CondResult, ConditionResult, Config, Ctx, Item, Verdict};

type Pair<M> = (<M as Model>::Mor, <M as Model>::Mor);

fn id_item<M: Model>(ctx: &Ctx<'_, M>, n: usize) -> Item<M::Mor> {
    Item::Mor(ctx.model.identity(n))
}

/// Multisets of positive sizes summing to at most `bound`, as
/// non-increasing lists.
fn partitions(bound: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(bound, bound, &mut Vec::new(), &mut out);
    out
}

fn biproducts<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    const C: &str = "biproducts";
    let m = ctx.model;
    let mut families = vec![Vec::new()];
    for p in partitions(ctx.bound) {
        let mut with_zero = p.clone();
        with_zero.push(0);
        families.push(p);
        families.push(with_zero);
    }
    for sizes in &families {
        let inj = m.injections(sizes);
        let total: usize = sizes.iter().sum();
        for (a, i) in inj.iter().enumerate() {
            for (b, j) in inj.iter().enumerate() {
                let got = m.compose(&m.dagger(i), j);
                let expected = if a == b {
                    m.identity(sizes[a])
                } else {
                    m.zero(sizes[a], sizes[b])
                };
                if got != expected {
                    let items = vec![("i", Item::Mor(i.clone())), ("j", Item::Mor(j.clone()))];
                    return Ok(ctx.fail(C, "projection-injection", items));
                }
            }
        }
        let sum = inj
            .iter()
            .fold(m.zero(total, total), |acc, i| m.add(&acc, &m.compose(i, &m.dagger(i))));
        if sum != m.identity(total) {
            let names: Vec<String> = (0..inj.len()).map(|k| format!("i{k}")).collect();
            let items = names
                .iter()
                .zip(&inj)
                .map(|(n, i)| (n.as_str(), Item::Mor(i.clone())))
                .collect();
            return Ok(ctx.fail(C, "injection-completeness", items));
        }
    }
    let (lhs, rhs) = laws::infinite_sums(m);
    if lhs != rhs {
        return Ok(ctx.fail(C, "infinite-constant-family", vec![]));
    }
    Ok(Verdict::HoldsAtBound)
}

fn kernels<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    const C: &str = "kernels";
    let m = ctx.model;
    for x in 0..=ctx.bound {
        let points = ctx.points(x)?;
        for y in 0..=ctx.bound {
            for r in ctx.hom(y, x)? {
                let item = || vec![("r", Item::Mor(r.clone()))];
                let Some(k) = ctx.kernel(&r)? else {
                    return Ok(ctx.fail(C, "kernel-exists", item()));
                };
                if m.compose(&m.dagger(&k), &k) != m.identity(m.dom(&k)) {
                    return Ok(ctx.fail(C, "kernel-dagger-monic", item()));
                }
                if !m.is_zero(&m.compose(&r, &k)) {
                    return Ok(ctx.fail(C, "kernel-annihilates", item()));
                }
                // composition acts column by column, so factoring every
                // point through k factors every map through k
                let proj = m.compose(&k, &m.dagger(&k));
                for g in &points {
                    if m.is_zero(&m.compose(&r, g)) && m.compose(&proj, g) != *g {
                        let mut items = item();
                        items.push(("g", Item::Mor(g.clone())));
                        return Ok(ctx.fail(C, "kernel-factorization", items));
                    }
                }
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

/// Finds two distinct rows `1 ← n` with the same key. Rows suffice: a
/// composite `f ∘ p` depends on each row of `f` separately, so a collision
/// for any codomain yields one for a single row and conversely.
fn row_collision<M: Model, K: Eq + std::hash::Hash>(
    ctx: &Ctx<'_, M>,
    n: usize,
    key: impl Fn(&M::Mor) -> K,
) -> Result<Option<Pair<M>>, Abort> {
    let m = ctx.model;
    let count = m.hom_count(1, n);
    match count {
        Some(c) if c <= ctx.config.separator_ceiling => {
            let mut seen: HashMap<K, M::Mor> = HashMap::new();
            for u in ctx.hom(1, n)? {
                if let Some(v) = seen.insert(key(&u), u.clone()) {
                    return Ok(Some((v, u)));
                }
            }
            Ok(None)
        }
        _ if n == 0 => Ok(None),
        _ => {
            let size = m.rig().size();
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.sample_seed ^ n as u64);
            let elems: Vec<_> = m.rig().elements().collect();
            for _ in 0..ctx.config.separator_samples {
                let row: Vec<_> = (0..n).map(|_| elems[rng.gen_range(0..size)]).collect();
                let pos = rng.gen_range(0..n);
                let shift = rng.gen_range(1..size.max(2));
                let mut other = row.clone();
                other[pos] = elems[(other[pos].index() + shift) % size];
                let u = m.from_fn(1, n, &|_, j| row[j]);
                let v = m.from_fn(1, n, &|_, j| other[j]);
                if u != v && key(&u) == key(&v) {
                    return Ok(Some((u, v)));
                }
            }
            Ok(None)
        }
    }
}

fn joint_epic<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    const C: &str = "joint-epic";
    let m = ctx.model;
    for x in 0..=ctx.bound {
        for k in ctx.dagger_kernels(x)? {
            let Some(kp) = ctx.kernel(&m.dagger(&k))? else {
                return Ok(ctx.fail(C, "complement-exists", vec![("k", Item::Mor(k))]));
            };
            let hit = row_collision(ctx, x, |u| (m.compose(u, &k), m.compose(u, &kp)))?;
            if let Some((f, g)) = hit {
                let items = vec![("k", Item::Mor(k)), ("f", Item::Mor(f)), ("g", Item::Mor(g))];
                return Ok(ctx.fail(C, "joint-epic", items));
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn unit_nonzero<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    if m.identity(1) == m.zero(1, 1) {
        return Ok(ctx.fail("unit-nonzero", "unit-nonzero", vec![]));
    }
    Ok(Verdict::HoldsAtBound)
}

fn scalars_invertible<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    let one = m.identity(1);
    let scalars = ctx.hom(1, 1)?;
    for s in scalars.iter().filter(|s| !m.is_zero(s)) {
        if !scalars.iter().any(|t| m.compose(s, t) == one && m.compose(t, s) == one) {
            return Ok(ctx.fail(
                "scalars-invertible",
                "scalar-invertible",
                vec![("s", Item::Mor(s.clone()))],
            ));
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn separator<M: Model>(ctx: &Ctx<'_, M>, condition: &'static str) -> CondResult {
    let m = ctx.model;
    for x in 0..=ctx.bound {
        let points = ctx.points(x)?;
        let hit = row_collision(ctx, x, |u| points.iter().map(|a| m.compose(u, a)).collect::<Vec<_>>())?;
        if let Some((f, g)) = hit {
            return Ok(ctx.fail(condition, "separator", vec![("f", Item::Mor(f)), ("g", Item::Mor(g))]));
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn dagger_duals<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    for n in 0..=ctx.bound {
        let id = m.identity(n);
        for (law, composite) in [
            ("snake-left", laws::snake_left(m, n)),
            ("snake-right", laws::snake_right(m, n)),
        ] {
            if composite != id {
                return Ok(ctx.fail("dagger-duals", law, vec![("x", id_item(ctx, n))]));
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn unit_simple_separating<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    const C: &str = "unit-simple-separating";
    let m = ctx.model;
    if m.identity(1) == m.zero(1, 1) {
        return Ok(ctx.fail(C, "unit-nonzero", vec![]));
    }
    let id = m.identity(1);
    for y in 0..=ctx.bound {
        for r in ctx.hom(y, 1)? {
            let item = vec![("r", Item::Mor(r.clone()))];
            match ctx.kernel(&r)? {
                None => return Ok(ctx.fail(C, "kernel-exists", item)),
                Some(k) if m.dom(&k) != 0 && k != id => return Ok(ctx.fail(C, "unit-simple", item)),
                Some(_) => {}
            }
        }
    }
    separator(ctx, C)
}

fn unique_top<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    for x in 0..=ctx.bound {
        let pts = zero_cokernel_points(ctx, x)?;
        if pts.len() != 1 {
            let mut items = vec![("x".to_string(), id_item(ctx, x))];
            items.extend(
                pts.into_iter()
                    .enumerate()
                    .map(|(i, a)| (format!("a{i}"), Item::Mor(a))),
            );
            let items = items.iter().map(|(n, i)| (n.as_str(), i.clone())).collect();
            return Ok(ctx.fail("unique-top", "unique-top", items));
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn point_splitting<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    for x in 0..=ctx.bound {
        let split = split_points(ctx, x)?;
        for a in ctx.points(x)? {
            if split.binary_search(&a).is_err() {
                return Ok(ctx.fail("point-splitting", "point-splitting", vec![("a", Item::Mor(a))]));
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

fn monoidal_separator<M: Model>(ctx: &Ctx<'_, M>) -> CondResult {
    let m = ctx.model;
    for x in 0..=ctx.bound {
        let px = ctx.points(x)?;
        for y in 0..=ctx.bound {
            let probes: Vec<M::Mor> = ctx
                .points(y)?
                .iter()
                .flat_map(|b| px.iter().map(move |a| m.tensor(a, b)))
                .collect();
            let hit = row_collision(ctx, x * y, |u| {
                probes.iter().map(|p| m.compose(u, p)).collect::<Vec<_>>()
            })?;
            if let Some((f, g)) = hit {
                let items = vec![
                    ("x", id_item(ctx, x)),
                    ("y", id_item(ctx, y)),
                    ("f", Item::Mor(f)),
                    ("g", Item::Mor(g)),
                ];
                return Ok(ctx.fail("monoidal-separator", "monoidal-separator", items));
            }
        }
    }
    Ok(Verdict::HoldsAtBound)
}

pub(crate) fn characterization<M: Model>(ctx: &Ctx<'_, M>) -> Result<AxiomReport, CheckError> {
    let mut report = AxiomReport::for_ctx(ctx);
    timed(&mut report, "biproducts", || biproducts(ctx))?;
    timed(&mut report, "kernels", || kernels(ctx))?;
    timed(&mut report, "joint-epic", || joint_epic(ctx))?;
    timed(&mut report, "unit-nonzero", || unit_nonzero(ctx))?;
    timed(&mut report, "scalars-invertible", || scalars_invertible(ctx))?;
    timed(&mut report, "separator", || separator(ctx, "separator"))?;
    timed(&mut report, "dagger-duals", || dagger_duals(ctx))?;
    Ok(report)
}

/// The point-level conditions, reusing the biproduct verdict from `prior`
/// when present.
pub(crate) fn point_characterization<M: Model>(
    ctx: &Ctx<'_, M>,
    prior: &AxiomReport,
) -> Result<AxiomReport, CheckError> {
    let mut report = AxiomReport::for_ctx(ctx);
    match prior.get("biproducts") {
        Some(r) => report.results.push(r.clone()),
        None => timed(&mut report, "biproducts", || biproducts(ctx))?,
    }
    timed(&mut report, "unit-simple-separating", || unit_simple_separating(ctx))?;
    timed(&mut report, "unique-top", || unique_top(ctx))?;
    timed(&mut report, "point-splitting", || point_splitting(ctx))?;
    Ok(report)
}

pub(crate) fn monoidal_separator_into<M: Model>(ctx: &Ctx<'_, M>, report: &mut AxiomReport) -> Result<(), CheckError> {
    timed(report, "monoidal-separator", || monoidal_separator(ctx))
}

/// Biproducts, dagger kernels, joint epicity, nonzero unit, invertible
/// scalars, separator and dagger duals, on objects of size at most `bound`.
pub fn check_characterization<M: Model>(model: &M, bound: usize) -> Result<AxiomReport, CheckError> {
    if bound == 0 {
        return Err(CheckError::ZeroBound);
    }
    characterization(&Ctx::new(model, bound, Config::default()))
}

/// Biproducts plus the point-level conditions: the unit is simple and
/// separating, every object has exactly one point with zero cokernel, and
/// every point splits off a summand.
pub fn check_point_characterization<M: Model>(model: &M, bound: usize) -> Result<AxiomReport, CheckError> {
    if bound == 0 {
        return Err(CheckError::ZeroBound);
    }
    let ctx = Ctx::new(model, bound, Config::default());
    point_characterization(&ctx, &AxiomReport::for_ctx(&ctx))
}

/// Whether maps out of `X ⊗ Y` are determined by their values on `a ⊗ b`.
pub fn check_monoidal_separator<M: Model>(
    model: &M,
    bound: usize,
    config: Config,
) -> Result<ConditionResult, CheckError> {
    if bound == 0 {
        return Err(CheckError::ZeroBound);
    }
    let ctx = Ctx::new(model, bound, config);
    let mut report = AxiomReport::for_ctx(&ctx);
    monoidal_separator_into(&ctx, &mut report)?;
    Ok(report.results.pop().expect("one result"))
}
