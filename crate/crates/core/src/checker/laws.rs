//! Law evaluation shared by the checker and witness replay.
//!
//! Each law maps named witnesses to a pair of strings that are equal
//! exactly when the law holds on those witnesses. The checker detects
//! failures with faster code and then records this pair; replay parses the
//! witness file and evaluates the same function again.

use std::fmt::Write as _;

use crate::bitmat::BoolMat;
use crate::extraction;
use crate::model::Model;
use crate::rig::{Cardinality, FamilyDescriptor};

use super::{Abort, Config, Ctx};

/// A named witness: a morphism of the model, or a relation between atom
/// sets (rows indexed by domain atoms).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item<F> {
    Mor(F),
    Erel(BoolMat),
}

type Items<F> = [(String, Item<F>)];

fn lookup<'a, F>(items: &'a Items<F>, name: &str) -> Result<&'a Item<F>, String> {
    items
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, i)| i)
        .ok_or_else(|| format!("witness `{name}` missing"))
}

fn mor<'a, F>(items: &'a Items<F>, name: &str) -> Result<&'a F, String> {
    match lookup(items, name)? {
        Item::Mor(f) => Ok(f),
        Item::Erel(_) => Err(format!("witness `{name}` is not a morphism")),
    }
}

fn erel<'a, F>(items: &'a Items<F>, name: &str) -> Result<&'a BoolMat, String> {
    match lookup(items, name)? {
        Item::Erel(r) => Ok(r),
        Item::Mor(_) => Err(format!("witness `{name}` is not an extracted relation")),
    }
}

fn abort(e: Abort) -> String {
    match e {
        Abort::Search(e) => e.to_string(),
        Abort::HomTooLarge { cod, dom } => format!("hom-set {cod}<-{dom} too large"),
    }
}

fn need(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(format!("witness premise fails: {what}"))
    }
}

fn show_opt<M: Model>(m: &M, f: Option<&M::Mor>) -> String {
    f.map_or_else(|| "undefined".to_string(), |f| m.show(f))
}

fn verdict_pair(ok: bool, got: String, expected: &str) -> (String, String) {
    if ok {
        (got.clone(), got)
    } else {
        (got, expected.to_string())
    }
}

pub(crate) fn snake_left<M: Model>(m: &M, n: usize) -> M::Mor {
    let id = m.identity(n);
    let eta = m.eta(n);
    let steps = [
        m.unitor(n),
        m.tensor(&id, &eta),
        m.dagger(&m.associator(n, n, n)),
        m.tensor(&m.dagger(&eta), &id),
        m.unitor(n),
    ];
    steps[1..].iter().fold(steps[0].clone(), |acc, s| m.compose(s, &acc))
}

pub(crate) fn snake_right<M: Model>(m: &M, n: usize) -> M::Mor {
    let id = m.identity(n);
    let eta = m.eta(n);
    let steps = [
        m.unitor(n),
        m.tensor(&eta, &id),
        m.associator(n, n, n),
        m.tensor(&id, &m.dagger(&eta)),
        m.unitor(n),
    ];
    steps[1..].iter().fold(steps[0].clone(), |acc, s| m.compose(s, &acc))
}

/// The infinitary sums that a biproduct of infinitely many copies of the
/// unit needs: `Σ∞1`, `Σ{1, 0…}`, `Σ{0…}`, and `Σ∞1 + Σ∞1`.
pub(crate) fn infinite_sums<M: Model>(m: &M) -> (String, String) {
    let rig = m.rig();
    let (z, o) = (rig.zero(), rig.one());
    let fam = |parts: &[(crate::rig::Elem, Cardinality)]| {
        let mut f = FamilyDescriptor::new();
        for &(e, c) in parts {
            f = f.with(e, c).expect("positive count");
        }
        rig.sum_family(&f).ok()
    };
    let label = |e: Option<crate::rig::Elem>| e.map_or("undefined", |e| rig.label(e)).to_string();
    let ones = fam(&[(o, Cardinality::Infinite)]);
    let diag = fam(&[(o, Cardinality::Finite(1)), (z, Cardinality::Infinite)]);
    let zeros = fam(&[(z, Cardinality::Infinite)]);
    let doubled = ones.map(|e| rig.add(e, e));
    let lhs = format!(
        "sum(1 x inf)={} sum(1, 0 x inf)={} sum(0 x inf)={} sum(1 x inf)+sum(1 x inf)={}",
        label(ones),
        label(diag),
        label(zeros),
        label(doubled)
    );
    let expected = match ones {
        Some(e) => rig.label(e).to_string(),
        None => "defined".to_string(),
    };
    let rhs = format!(
        "sum(1 x inf)={expected} sum(1, 0 x inf)={} sum(0 x inf)={} sum(1 x inf)+sum(1 x inf)={expected}",
        rig.label(o),
        rig.label(z)
    );
    (lhs, rhs)
}

/// Points of `x` whose cokernel is zero, i.e. whose adjoint has a kernel
/// with domain 0.
pub(crate) fn zero_cokernel_points<M: Model>(ctx: &Ctx<'_, M>, x: usize) -> Result<Vec<M::Mor>, Abort> {
    let mut out = Vec::new();
    for a in ctx.points(x)? {
        if let Some(k) = ctx.kernel(&ctx.model.dagger(&a))? {
            if ctx.model.dom(&k) == 0 {
                out.push(a);
            }
        }
    }
    Ok(out)
}

/// Points `a` of `x` of the form `i ∘ inj₁ ∘ t` with `i` a dagger
/// automorphism of `x = p ⊕ q` and `t` a point of `p` with zero cokernel.
pub(crate) fn split_points<M: Model>(ctx: &Ctx<'_, M>, x: usize) -> Result<Vec<M::Mor>, Abort> {
    let m = ctx.model;
    let id = m.identity(x);
    let isos: Vec<M::Mor> = ctx
        .hom(x, x)?
        .into_iter()
        .filter(|i| m.compose(&m.dagger(i), i) == id && m.compose(i, &m.dagger(i)) == id)
        .collect();
    let mut out = std::collections::BTreeSet::new();
    for p in 0..=x {
        let inj = m.injections(&[p, x - p]).swap_remove(0);
        for t in zero_cokernel_points(ctx, p)? {
            let a = m.compose(&inj, &t);
            for i in &isos {
                out.insert(m.compose(i, &a));
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn sum_all<M: Model>(m: &M, cod: usize, dom: usize, fs: impl IntoIterator<Item = M::Mor>) -> M::Mor {
    fs.into_iter().fold(m.zero(cod, dom), |acc, f| m.add(&acc, &f))
}

fn lattice_eval<M: Model>(ctx: &Ctx<'_, M>, law: &str, items: &Items<M::Mor>) -> Result<(String, String), String> {
    let m = ctx.model;
    let first = mor(items, if law == "top-exists" { "x" } else { "a" })?;
    let n = m.cod(first);
    let l = ctx.lattice(n).map_err(abort)?;
    let idx = |name: &str| -> Result<usize, String> {
        let f = mor(items, name)?;
        l.index(f).ok_or_else(|| format!("`{name}` is not a point of {n}"))
    };
    let pt = |i: Option<usize>| show_opt(m, i.map(|i| &l.points[i]));
    let join = |a: usize, b: usize| l.join(a, b);
    let meet = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(a), Some(b)) => l.meet(a, b),
        _ => None,
    };
    let joino = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(a), Some(b)) => join(a, b),
        _ => None,
    };
    let neg = |a: Option<usize>| a.and_then(|a| l.neg(a));
    Ok(match law {
        "join-idempotent" => {
            let a = idx("a")?;
            (pt(join(a, a)), pt(Some(a)))
        }
        "top-exists" => {
            let got = if l.top.is_some() {
                "maximum point exists"
            } else {
                "no maximum point"
            };
            (got.into(), "maximum point exists".into())
        }
        "meet-exists" => {
            let (a, b) = (idx("a")?, idx("b")?);
            let got = pt(l.meet(a, b));
            verdict_pair(l.meet(a, b).is_some(), got, "a greatest lower bound")
        }
        "absorption" => {
            let (a, b) = (Some(idx("a")?), Some(idx("b")?));
            let lhs = format!("{} , {}", pt(meet(a, joino(a, b))), pt(joino(a, meet(a, b))));
            (lhs, format!("{} , {}", pt(a), pt(a)))
        }
        "meet-associative" => {
            let (a, b, c) = (Some(idx("a")?), Some(idx("b")?), Some(idx("c")?));
            (pt(meet(a, meet(b, c))), pt(meet(meet(a, b), c)))
        }
        "meet-distributes" => {
            let (a, b, c) = (Some(idx("a")?), Some(idx("b")?), Some(idx("c")?));
            (pt(meet(a, joino(b, c))), pt(joino(meet(a, b), meet(a, c))))
        }
        "join-distributes" => {
            let (a, b, c) = (Some(idx("a")?), Some(idx("b")?), Some(idx("c")?));
            (pt(joino(a, meet(b, c))), pt(meet(joino(a, b), joino(a, c))))
        }
        "negation-exists" => {
            let a = idx("a")?;
            verdict_pair(l.neg(a).is_some(), pt(l.neg(a)), "a largest point orthogonal to a")
        }
        "complement-meet" => {
            let a = Some(idx("a")?);
            (pt(meet(a, neg(a))), pt(Some(l.zero)))
        }
        "complement-join" => {
            let a = Some(idx("a")?);
            (pt(joino(a, neg(a))), pt(l.top))
        }
        "double-negation" => {
            let a = Some(idx("a")?);
            (pt(neg(neg(a))), pt(a))
        }
        "negation-antitone" => {
            let (a, b) = (idx("a")?, idx("b")?);
            need(l.le(a, b), "a <= b")?;
            (pt(joino(neg(Some(b)), neg(Some(a)))), pt(neg(Some(a))))
        }
        "atomic" => {
            let a = idx("a")?;
            need(a != l.zero, "a is nonzero")?;
            let below: Vec<String> = l.atoms.iter().filter(|&&t| l.le(t, a)).map(|&t| pt(Some(t))).collect();
            verdict_pair(
                !below.is_empty(),
                format!("atoms below: [{}]", below.join(" , ")),
                "at least one atom below",
            )
        }
        _ => return Err(format!("unknown law `{law}`")),
    })
}

/// Evaluates `law` on `items`.
pub(crate) fn eval<M: Model>(ctx: &Ctx<'_, M>, law: &str, items: &Items<M::Mor>) -> Result<(String, String), String> {
    let m = ctx.model;
    let kernel = |f: &M::Mor| -> Result<M::Mor, String> {
        ctx.kernel(f)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| "no kernel".to_string())
    };
    let atoms = |n: usize| ctx.atoms(n).map_err(abort);
    let extract = |f: &M::Mor| -> Result<BoolMat, String> {
        Ok(extraction::extract_with(m, &atoms(m.dom(f))?, &atoms(m.cod(f))?, f))
    };
    let e = extraction::show_erel;
    Ok(match law {
        "projection-injection" => {
            let (i, j) = (mor(items, "i")?, mor(items, "j")?);
            let expected = if i == j {
                m.identity(m.dom(i))
            } else {
                m.zero(m.dom(i), m.dom(j))
            };
            (m.show(&m.compose(&m.dagger(i), j)), m.show(&expected))
        }
        "injection-completeness" => {
            let incs: Vec<&M::Mor> = items
                .iter()
                .filter_map(|(_, it)| match it {
                    Item::Mor(f) => Some(f),
                    Item::Erel(_) => None,
                })
                .collect();
            let n = incs.first().map_or(0, |f| m.cod(f));
            let sum = sum_all(m, n, n, incs.iter().map(|i| m.compose(i, &m.dagger(i))));
            (m.show(&sum), m.show(&m.identity(n)))
        }
        "infinite-constant-family" => infinite_sums(m),
        "kernel-exists" => {
            let r = mor(items, "r")?;
            let found = ctx.kernel(r).map_err(|e| e.to_string())?.is_some();
            let got = if found { "kernel found" } else { "no kernel found" };
            (got.into(), "kernel found".into())
        }
        "kernel-dagger-monic" => {
            let k = kernel(mor(items, "r")?)?;
            (m.show(&m.compose(&m.dagger(&k), &k)), m.show(&m.identity(m.dom(&k))))
        }
        "kernel-annihilates" => {
            let r = mor(items, "r")?;
            let k = kernel(r)?;
            (m.show(&m.compose(r, &k)), m.show(&m.zero(m.cod(r), m.dom(&k))))
        }
        "kernel-factorization" => {
            let (r, g) = (mor(items, "r")?, mor(items, "g")?);
            need(m.is_zero(&m.compose(r, g)), "r . g = 0")?;
            let k = kernel(r)?;
            (m.show(&m.compose(&k, &m.compose(&m.dagger(&k), g))), m.show(g))
        }
        "complement-exists" => {
            let k = mor(items, "k")?;
            let found = ctx.kernel(&m.dagger(k)).map_err(|e| e.to_string())?.is_some();
            if found {
                ("kernel of k^dagger found".into(), "kernel of k^dagger found".into())
            } else {
                ("no kernel of k^dagger".into(), "kernel of k^dagger found".into())
            }
        }
        "joint-epic" => {
            let (k, f, g) = (mor(items, "k")?, mor(items, "f")?, mor(items, "g")?);
            let kp = kernel(&m.dagger(k))?;
            need(m.compose(f, k) == m.compose(g, k), "f . k = g . k")?;
            need(m.compose(f, &kp) == m.compose(g, &kp), "f . k' = g . k'")?;
            (m.show(f), m.show(g))
        }
        "unit-nonzero" => {
            let zero = m.identity(1) == m.zero(1, 1);
            (if zero { "id_I = 0" } else { "id_I != 0" }.into(), "id_I != 0".into())
        }
        "scalar-invertible" => {
            let s = mor(items, "s")?;
            let one = m.identity(1);
            let inv = ctx
                .hom(1, 1)
                .map_err(abort)?
                .into_iter()
                .find(|t| m.compose(s, t) == one && m.compose(t, s) == one);
            let label = m.rig().label(m.entry(s, 0, 0)).to_string();
            match inv {
                Some(t) => {
                    let got = format!("{label} has inverse {}", m.rig().label(m.entry(&t, 0, 0)));
                    (got.clone(), got)
                }
                None => (format!("{label} has no inverse"), format!("{label} has an inverse")),
            }
        }
        "separator" => {
            let (f, g) = (mor(items, "f")?, mor(items, "g")?);
            for a in ctx.points(m.dom(f)).map_err(abort)? {
                need(m.compose(f, &a) == m.compose(g, &a), "f and g agree on every point")?;
            }
            (m.show(f), m.show(g))
        }
        "monoidal-separator" => {
            let (x, y) = (m.dom(mor(items, "x")?), m.dom(mor(items, "y")?));
            let (f, g) = (mor(items, "f")?, mor(items, "g")?);
            let pb = ctx.points(y).map_err(abort)?;
            for a in ctx.points(x).map_err(abort)? {
                for b in &pb {
                    let ab = m.tensor(&a, b);
                    need(m.compose(f, &ab) == m.compose(g, &ab), "f and g agree on every a (x) b")?;
                }
            }
            (m.show(f), m.show(g))
        }
        "snake-left" => {
            let n = m.dom(mor(items, "x")?);
            (m.show(&snake_left(m, n)), m.show(&m.identity(n)))
        }
        "snake-right" => {
            let n = m.dom(mor(items, "x")?);
            (m.show(&snake_right(m, n)), m.show(&m.identity(n)))
        }
        "unit-simple" => {
            let k = kernel(mor(items, "r")?)?;
            let ok = m.dom(&k) == 0 || k == m.identity(1);
            verdict_pair(ok, m.show(&k), "a kernel with domain 0 or id_I")
        }
        "unique-top" => {
            let n = m.dom(mor(items, "x")?);
            let pts = zero_cokernel_points(ctx, n).map_err(abort)?;
            let shown: Vec<String> = pts.iter().map(|p| m.show(p)).collect();
            let got = format!("{} point(s) with zero cokernel: [{}]", pts.len(), shown.join(" , "));
            verdict_pair(pts.len() == 1, got, "exactly 1 point with zero cokernel")
        }
        "point-splitting" => {
            let a = mor(items, "a")?;
            let split = split_points(ctx, m.cod(a)).map_err(abort)?;
            let got = if split.contains(a) {
                "a splits"
            } else {
                "a does not split"
            };
            (got.into(), "a splits".into())
        }
        "kernel-decomposition" => {
            let k = mor(items, "k")?;
            let kp = kernel(&m.dagger(k))?;
            let sum = m.add(&m.compose(k, &m.dagger(k)), &m.compose(&kp, &m.dagger(&kp)));
            (m.show(&sum), m.show(&m.identity(m.cod(k))))
        }
        "atom-decomposition" => {
            let n = m.dom(mor(items, "x")?);
            let sum = sum_all(m, n, n, atoms(n)?.iter().map(|x| m.compose(x, &m.dagger(x))));
            (m.show(&sum), m.show(&m.identity(n)))
        }
        "point-factorization" | "complement-factorization" => {
            let a = mor(items, "a")?;
            let n = m.cod(a);
            let ka = kernel(&m.dagger(a))?;
            let j = if law == "point-factorization" {
                kernel(&m.dagger(&ka))?
            } else {
                ka
            };
            let top = ctx.lattice(m.dom(&j)).map_err(abort)?.top_point().cloned();
            let got = show_opt(m, top.map(|t| m.compose(&j, &t)).as_ref());
            let l = ctx.lattice(n).map_err(abort)?;
            let expected = if law == "point-factorization" {
                Some(a.clone())
            } else {
                l.index(a).and_then(|i| l.neg(i)).map(|i| l.points[i].clone())
            };
            if got == "undefined" {
                (got, "a defined composite with the top point".into())
            } else {
                (got, show_opt(m, expected.as_ref()))
            }
        }
        "atom-existence" => {
            let n = m.dom(mor(items, "x")?);
            let l = ctx.lattice(n).map_err(abort)?;
            let premise = l
                .top_point()
                .is_some_and(|t| m.compose(&m.dagger(t), t) == m.identity(1));
            let got = if premise && atoms(n)?.is_empty() {
                "top is a unit vector but there are no atoms"
            } else {
                "implication holds"
            };
            (got.into(), "implication holds".into())
        }
        "extract-identity" => {
            let n = m.dom(mor(items, "x")?);
            (e(&extract(&m.identity(n))?), e(&BoolMat::identity(atoms(n)?.len())))
        }
        "extract-composition" => {
            let (r, s) = (mor(items, "r")?, mor(items, "s")?);
            (e(&extract(&m.compose(s, r))?), e(&extract(r)?.mul(&extract(s)?)))
        }
        "extract-dagger" => {
            let r = mor(items, "r")?;
            (e(&extract(&m.dagger(r))?), e(&extract(r)?.transpose()))
        }
        "extract-faithful" => {
            let (r, s) = (mor(items, "r")?, mor(items, "s")?);
            need(extract(r)? == extract(s)?, "r and s extract to the same relation")?;
            (m.show(r), m.show(s))
        }
        "extract-full" => {
            let (x, y) = (m.dom(mor(items, "x")?), m.dom(mor(items, "y")?));
            let rel = erel(items, "R")?;
            let (ax, ay) = (atoms(x)?, atoms(y)?);
            let f = extraction::full_preimage(m, &ax, &ay, x, y, rel);
            (e(&extraction::extract_with(m, &ax, &ay, &f)), e(rel))
        }
        "extract-preimage" => {
            let r = mor(items, "r")?;
            let (ax, ay) = (atoms(m.dom(r))?, atoms(m.cod(r))?);
            let f = extraction::full_preimage(m, &ax, &ay, m.dom(r), m.cod(r), &extract(r)?);
            (m.show(&f), m.show(r))
        }
        "extract-eso" => {
            let n = m.dom(mor(items, "x")?);
            let got: Vec<String> = atoms(n)?.iter().map(|a| m.show(a)).collect();
            let expected: Vec<String> = m.injections(&vec![1; n]).iter().map(|a| m.show(a)).collect();
            (got.join(" , "), expected.join(" , "))
        }
        "mu-bijective" => {
            let (x, y) = (m.dom(mor(items, "x")?), m.dom(mor(items, "y")?));
            let mu = extraction::mu_relation(m, &atoms(x)?, &atoms(y)?, &atoms(x * y)?);
            let total = mu.cols();
            let images: Vec<String> = (0..mu.rows())
                .map(|r| (0..total).find(|&c| mu.get(r, c)).map_or("-".into(), |c| c.to_string()))
                .collect();
            let bijective =
                mu.rows() == total && (0..total).all(|c| (0..mu.rows()).filter(|&r| mu.get(r, c)).count() == 1);
            let got = format!("[{}] of {total}", images.join(" "));
            verdict_pair(bijective, got, &format!("a bijection onto {total} atoms"))
        }
        "associator-square" => {
            let (x, y, z) = (
                m.dom(mor(items, "x")?),
                m.dom(mor(items, "y")?),
                m.dom(mor(items, "z")?),
            );
            let (ax, ay, az) = (atoms(x)?, atoms(y)?, atoms(z)?);
            let (axy, ayz, axyz) = (atoms(x * y)?, atoms(y * z)?, atoms(x * y * z)?);
            let alpha = extraction::extract_with(m, &axyz, &axyz, &m.associator(x, y, z));
            let left = BoolMat::identity(az.len());
            let c1 = extraction::mu_relation(m, &ax, &ay, &axy)
                .kron(&left)
                .mul(&extraction::mu_relation(m, &axy, &az, &axyz))
                .mul(&alpha);
            let c2 = BoolMat::identity(ax.len())
                .kron(&extraction::mu_relation(m, &ay, &az, &ayz))
                .mul(&extraction::mu_relation(m, &ax, &ayz, &axyz));
            (e(&c1), e(&c2))
        }
        "braiding-square" => {
            let (x, y) = (m.dom(mor(items, "x")?), m.dom(mor(items, "y")?));
            let (ax, ay, axy, ayx) = (atoms(x)?, atoms(y)?, atoms(x * y)?, atoms(y * x)?);
            let beta = extraction::extract_with(m, &axy, &ayx, &m.braiding(x, y));
            let c1 = extraction::mu_relation(m, &ax, &ay, &axy).mul(&beta);
            let c2 = extraction::swap_relation(ax.len(), ay.len()).mul(&extraction::mu_relation(m, &ay, &ax, &ayx));
            (e(&c1), e(&c2))
        }
        "unit-iso" => {
            let n = m.dom(mor(items, "x")?);
            let (a1, ax) = (atoms(1)?, atoms(n)?);
            let one = m.identity(1);
            let u = BoolMat::from_fn(1, a1.len(), |_, c| a1[c] == one);
            let lambda = extraction::extract_with(m, &ax, &ax, &m.unitor(n));
            let c1 = u
                .kron(&BoolMat::identity(ax.len()))
                .mul(&extraction::mu_relation(m, &a1, &ax, &ax))
                .mul(&lambda);
            (e(&c1), e(&BoolMat::identity(ax.len())))
        }
        _ => return lattice_eval(ctx, law, items),
    })
}

pub(crate) fn write_items<M: Model>(m: &M, items: &Items<M::Mor>) -> String {
    let mors: Vec<(String, M::Mor)> = items
        .iter()
        .filter_map(|(n, i)| match i {
            Item::Mor(f) => Some((n.clone(), f.clone())),
            Item::Erel(_) => None,
        })
        .collect();
    let mut out = if mors.is_empty() {
        String::new()
    } else {
        m.write_items(&mors)
    };
    for (n, i) in items {
        if let Item::Erel(r) = i {
            writeln!(out, "erel {n} {} {}", r.rows(), r.cols()).unwrap();
            for (a, b) in r.ones() {
                writeln!(out, "{a} {b}").unwrap();
            }
        }
    }
    out
}

fn parse_erels(text: &str) -> Result<Vec<(String, BoolMat)>, String> {
    let mut out: Vec<(String, BoolMat)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = || format!("line {}: malformed extracted relation", ln + 1);
        match toks.as_slice() {
            [] => {}
            ["erel", name, rows, cols] => {
                let rows = rows.parse().map_err(|_| bad())?;
                let cols = cols.parse().map_err(|_| bad())?;
                out.push((name.to_string(), BoolMat::zeros(rows, cols)));
            }
            [a, b] => {
                let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                let (_, r) = out.last_mut().ok_or_else(bad)?;
                if a >= r.rows() || b >= r.cols() {
                    return Err(bad());
                }
                r.set(a, b, true);
            }
            _ => return Err(bad()),
        }
    }
    Ok(out)
}

/// A parsed witness file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub condition: String,
    pub law: String,
    pub model: String,
    pub bound: usize,
    pub lhs: String,
    pub rhs: String,
    pub items: String,
}

impl Witness {
    pub fn render(&self) -> String {
        format!(
            "witness {} {}\n# model: {}\n# bound: {}\n# lhs: {}\n# rhs: {}\n{}",
            self.condition, self.law, self.model, self.bound, self.lhs, self.rhs, self.items
        )
    }
}

pub fn parse_witness(text: &str) -> Result<Witness, String> {
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next().unwrap_or("").split_whitespace().collect();
    let ["witness", condition, law] = head.as_slice() else {
        return Err("line 1: expected `witness <condition> <law>`".into());
    };
    let mut field = |n: usize, key: &str| -> Result<String, String> {
        let line = lines.next().unwrap_or("");
        line.strip_prefix(&format!("# {key}: "))
            .or_else(|| (line == format!("# {key}:")).then_some(""))
            .map(str::to_string)
            .ok_or_else(|| format!("line {n}: expected `# {key}:`"))
    };
    let model = field(2, "model")?;
    let bound = field(3, "bound")?
        .parse()
        .map_err(|_| "line 3: bad bound".to_string())?;
    let lhs = field(4, "lhs")?;
    let rhs = field(5, "rhs")?;
    let items: String = lines.flat_map(|l| [l, "\n"]).collect();
    Ok(Witness {
        condition: condition.to_string(),
        law: law.to_string(),
        model,
        bound,
        lhs,
        rhs,
        items,
    })
}

/// Result of re-evaluating a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayOutcome {
    pub lhs: String,
    pub rhs: String,
    pub recorded_lhs: String,
    pub recorded_rhs: String,
}

impl ReplayOutcome {
    /// The recomputed sides match the recorded ones and differ.
    pub fn reproduces(&self) -> bool {
        self.lhs == self.recorded_lhs && self.rhs == self.recorded_rhs && self.lhs != self.rhs
    }
}

/// Re-evaluates a witness in `model`.
pub fn replay<M: Model>(model: &M, w: &Witness) -> Result<ReplayOutcome, String> {
    if w.model != model.name() {
        return Err(format!("witness is for model {}, not {}", w.model, model.name()));
    }
    let split = w
        .items
        .match_indices("erel ")
        .find(|&(i, _)| i == 0 || w.items.as_bytes()[i - 1] == b'\n')
        .map_or(w.items.len(), |(i, _)| i);
    let (mor_text, erel_text) = w.items.split_at(split);
    let mut items: Vec<(String, Item<M::Mor>)> = if mor_text.trim().is_empty() {
        Vec::new()
    } else {
        model
            .parse_items(mor_text)?
            .into_iter()
            .map(|(n, f)| (n, Item::Mor(f)))
            .collect()
    };
    items.extend(parse_erels(erel_text)?.into_iter().map(|(n, r)| (n, Item::Erel(r))));
    let ctx = Ctx::new(model, w.bound, Config::default());
    let (lhs, rhs) = eval(&ctx, &w.law, &items)?;
    Ok(ReplayOutcome {
        lhs,
        rhs,
        recorded_lhs: w.lhs.clone(),
        recorded_rhs: w.rhs.clone(),
    })
}
