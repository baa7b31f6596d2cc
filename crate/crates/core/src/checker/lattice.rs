//! The order on points `I → X` given by `a ≤ b ⇔ a + b = b`, and the
//! lattice laws it should satisfy.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::Model;

use super::{timed, AxiomReport, CheckError, CondResult, Config, Ctx, Item, LatticeMode, Verdict};

/// Points of one object with join, meet, negation and atoms tabulated.
/// Meets and negations are found by brute force over the order, so they
/// exist only where the order has them.
pub struct PointLattice<M: Model> {
    pub size: usize,
    pub points: Vec<M::Mor>,
    index: HashMap<M::Mor, usize>,
    le: Vec<bool>,
    join: Vec<Option<usize>>,
    meet: Vec<Option<usize>>,
    neg: Vec<Option<usize>>,
    pub zero: usize,
    pub top: Option<usize>,
    pub atoms: Vec<usize>,
}

fn maximum(cands: &[usize], le: impl Fn(usize, usize) -> bool) -> Option<usize> {
    cands.iter().copied().find(|&m| cands.iter().all(|&c| le(c, m)))
}

impl<M: Model> PointLattice<M> {
    pub fn new(model: &M, points: Vec<M::Mor>) -> Self {
        let p = points.len();
        let size = points.first().map_or(0, |a| model.cod(a));
        let index: HashMap<M::Mor, usize> = points.iter().cloned().zip(0..).collect();
        let mut le = vec![false; p * p];
        let mut join = vec![None; p * p];
        for a in 0..p {
            for b in 0..p {
                let s = model.add(&points[a], &points[b]);
                le[a * p + b] = s == points[b];
                join[a * p + b] = index.get(&s).copied();
            }
        }
        let lef = |a: usize, b: usize| le[a * p + b];
        let zero = index[&model.zero(size, 1)];
        let all: Vec<usize> = (0..p).collect();
        let top = maximum(&all, lef);
        let lower: Vec<Vec<usize>> = (0..p).map(|a| (0..p).filter(|&c| lef(c, a)).collect()).collect();
        let mut meet = vec![None; p * p];
        for a in 0..p {
            for b in 0..p {
                let common: Vec<usize> = lower[a].iter().copied().filter(|&c| lef(c, b)).collect();
                meet[a * p + b] = maximum(&common, lef);
            }
        }
        let neg = points
            .iter()
            .map(|a| {
                let ad = model.dagger(a);
                let orth: Vec<usize> = (0..p)
                    .filter(|&b| model.is_zero(&model.compose(&ad, &points[b])))
                    .collect();
                maximum(&orth, lef)
            })
            .collect();
        let atoms = (0..p)
            .filter(|&a| a != zero && lower[a].iter().all(|&c| c == zero || c == a))
            .collect();
        PointLattice {
            size,
            points,
            index,
            le,
            join,
            meet,
            neg,
            zero,
            top,
            atoms,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index(&self, f: &M::Mor) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.join[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.meet[a * self.len() + b]
    }

    /// The largest point orthogonal to `a`.
    pub fn neg(&self, a: usize) -> Option<usize> {
        self.neg[a]
    }

    pub fn top_point(&self) -> Option<&M::Mor> {
        self.top.map(|t| &self.points[t])
    }

    fn meet_o(&self, a: Option<usize>, b: Option<usize>) -> Option<usize> {
        self.meet(a?, b?)
    }

    fn join_o(&self, a: Option<usize>, b: Option<usize>) -> Option<usize> {
        self.join(a?, b?)
    }
}

/// Verdicts of the lattice laws on one object.
pub struct LatticeReport<M: Model> {
    pub size: usize,
    pub points: usize,
    pub atoms: Vec<M::Mor>,
    pub results: Vec<(&'static str, Verdict)>,
}

impl<M: Model> LatticeReport<M> {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|(_, v)| v.holds())
    }

    pub fn get(&self, id: &str) -> Option<&Verdict> {
        self.results.iter().find(|(i, _)| *i == id).map(|(_, v)| v)
    }
}

pub const LATTICE_IDS: [&str; 7] = [
    "lattice-order",
    "lattice-meet",
    "lattice-distributive",
    "lattice-complement",
    "lattice-involution",
    "lattice-antitone",
    "lattice-atomic",
];

type Group<M> = fn(&Ctx<'_, M>, &PointLattice<M>) -> Option<Verdict>;

fn groups<M: Model>() -> [Group<M>; 7] {
    [order, meets, distributive, complement, involution, antitone, atomic]
}

/// Checks every lattice law on the points of `n`.
pub fn verify_hom_lattice<M: Model>(model: &M, n: usize, mode: LatticeMode) -> Result<LatticeReport<M>, CheckError> {
    let ctx = Ctx::new(
        model,
        n.max(1),
        Config {
            lattice_mode: mode,
            ..Config::default()
        },
    );
    let l = ctx.lattice(n).map_err(|_| CheckError::HomTooLarge {
        condition: "lattice",
        cod: n,
        dom: 1,
    })?;
    let results = LATTICE_IDS
        .iter()
        .zip(groups::<M>())
        .map(|(&id, g)| (id, g(&ctx, &l).unwrap_or(Verdict::HoldsAtBound)))
        .collect();
    Ok(LatticeReport {
        size: n,
        points: l.len(),
        atoms: l.atoms.iter().map(|&a| l.points[a].clone()).collect(),
        results,
    })
}

pub(crate) fn lattice_into<M: Model>(ctx: &Ctx<'_, M>, report: &mut AxiomReport) -> Result<(), CheckError> {
    for (&id, g) in LATTICE_IDS.iter().zip(groups::<M>()) {
        timed(report, id, || -> CondResult {
            for n in 0..=ctx.bound {
                let l = ctx.lattice(n)?;
                if let Some(v) = g(ctx, &l) {
                    return Ok(v);
                }
            }
            Ok(Verdict::HoldsAtBound)
        })?;
    }
    Ok(())
}

fn pt<M: Model>(l: &PointLattice<M>, i: usize) -> Item<M::Mor> {
    Item::Mor(l.points[i].clone())
}

fn pairs<M: Model>(l: &PointLattice<M>) -> impl Iterator<Item = (usize, usize)> {
    let p = l.len();
    (0..p).flat_map(move |a| (0..p).map(move |b| (a, b)))
}

fn triples<M: Model>(ctx: &Ctx<'_, M>, l: &PointLattice<M>) -> Vec<(usize, usize, usize)> {
    let p = l.len();
    match ctx.config.lattice_mode {
        LatticeMode::Exhaustive => (0..p)
            .flat_map(|a| (0..p).flat_map(move |b| (0..p).map(move |c| (a, b, c))))
            .collect(),
        LatticeMode::Sampled { triples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ l.size as u64);
            (0..triples)
                .map(|_| (rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p)))
                .collect()
        }
    }
}

fn order<M: Model>(ctx: &Ctx<'_, M>, l: &PointLattice<M>) -> Option<Verdict> {
    for a in 0..l.len() {
        if l.join(a, a) != Some(a) {
            return Some(ctx.fail("lattice-order", "join-idempotent", vec![("a", pt(l, a))]));
        }
    }
    if l.top.is_none() {
        let x = Item::Mor(ctx.model.identity(l.size));
        return Some(ctx.fail("lattice-order", "top-exists", vec![("x", x)]));
    }
    None
}

fn meets<M: Model>(ctx: &Ctx<'_, M>, l: &PointLattice<M>) -> Option<Verdict> {
    const C: &str = "lattice-meet";
    for (a, b) in pairs(l) {
        if l.meet(a, b).is_none() {
            return Some(ctx.fail(C, "meet-exists", vec![("a", pt(l, a)), ("b", pt(l, b))]));
        }
    }
    for (a, b) in pairs(l) {
        let sa = Some(a);
        if l.meet_o(sa, l.join(a, b)) != sa || l.join_o(sa, l.meet(a, b)) != sa {
            return Some(ctx.fail(C, "absorption", vec![("a", pt(l, a)), ("b", pt(l, b))]));
        }
    }
    for (a, b, c) in triples(ctx, l) {
        if l.meet_o(Some(a), l.meet(b, c)) != l.meet_o(l.meet(a, b), Some(c)) {
            let items = vec![("a", pt(l, a)), ("b", pt(l, b)), ("c", pt(l, c))];
            return Some(ctx.fail(C, "meet-associative", items));
        }
    }
    None
}

fn distributive<M: Model>(ctx: &Ctx<'_, M>, l: &PointLattice<M>) -> Option<Verdict> {
    const C: &str = "lattice-distributive";
    for (a, b, c) in triples(ctx, l) {
        let items = || vec![("a", pt(l, a)), ("b", pt(l, b)), ("c", pt(l, c))];
        let sa = Some(a);
        if l.meet_o(sa, l.join(b, c)) != l.join_o(l.meet(a, b), l.meet(a, c)) {
            return Some(ctx.fail(C, "meet-distributes", items()));
        }
        if l.join_o(sa, l.meet(b, c)) != l.meet_o(l.join(a, b), l.join(a, c)) {
            return Some(ctx.fail(C, "join-distributes", items()));
        }
    }
    None
}

fn complement<M: Model>(ctx: &Ctx<'_, M>, l: &PointLattice<M>) -> Option<Verdict> {
    const C: &str = "lattice-complement";
    for a in 0..l.len() {
        let na = l.neg(a);
        let law = if na.is_none() {
            "negation-exists"
        } else if l.meet_o(Some(a), na) != Some(l.zero) {
            "complement-meet"
        } else if l.join_o(Some(a), na) != l.top {
            "complement-join"
        } else {
            continue;
        };
        return Some(ctx.fail(C, law, vec![("a", pt(l, a))]));
    }
    None
}

fn involution<M: Model>(ctx: &Ctx<'_, M>, l: &PointLattice<M>) -> Option<Verdict> {
    (0..l.len())
        .find(|&a| l.neg(a).and_then(|n| l.neg(n)) != Some(a))
        .map(|a| ctx.fail("lattice-involution", "double-negation", vec![("a", pt(l, a))]))
}

fn antitone<M: Model>(ctx: &Ctx<'_, M>, l: &PointLattice<M>) -> Option<Verdict> {
    pairs(l)
        .filter(|&(a, b)| l.le(a, b) && l.neg(a).is_some() && l.neg(b).is_some())
        .find(|&(a, b)| l.join_o(l.neg(b), l.neg(a)) != l.neg(a))
        .map(|(a, b)| {
            ctx.fail(
                "lattice-antitone",
                "negation-antitone",
                vec![("a", pt(l, a)), ("b", pt(l, b))],
            )
        })
}

fn atomic<M: Model>(ctx: &Ctx<'_, M>, l: &PointLattice<M>) -> Option<Verdict> {
    (0..l.len())
        .filter(|&a| a != l.zero)
        .find(|&a| !l.atoms.iter().any(|&t| l.le(t, a)))
        .map(|a| ctx.fail("lattice-atomic", "atomic", vec![("a", pt(l, a))]))
}
