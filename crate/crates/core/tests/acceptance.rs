//! Acceptance criteria, one PASS/FAIL line each. Tolerances are pinned as
//! constants below; the process exits nonzero if any criterion fails.

mod common;

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relcat::bitmat::BoolMat;
use relcat::checker::{self, LatticeMode};
use relcat::corpus;
use relcat::extraction::{self, verify_monoidal_coherence};
use relcat::model::RelModel;
use relcat::rel::{self, FinSet, Relation, StructuralKind};
use relcat::rig::CollapseVerdict;

const SUITE_TIME_LIMIT: Duration = Duration::from_secs(120);
const SUITE_CONDITIONS: usize = 34;
const SAMPLED_TRIPLES: usize = 1000;
const SAMPLE_SEED: u64 = 2024;
const ENRICHMENT_FAMILIES: usize = 200;
const ENRICHMENT_SEED: u64 = 7;
const MAX_FAMILY: usize = 5;
const MAX_SIZE: usize = 4;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type VerdictCheck = (&'static str, fn(&CollapseVerdict) -> bool);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn set(n: usize) -> FinSet {
    RelModel::set(n)
}

fn cli(args: &[&str], dir: &std::path::Path) -> (i32, String) {
    let out = Command::new(common::BIN).args(args).current_dir(dir).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn report_lines(report: &str) -> Vec<(&str, &str, Option<&str>)> {
    report
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let w: Vec<&str> = l.split(' ').collect();
            (w[0], w[1], w.get(3).and_then(|p| p.strip_prefix("witness=")))
        })
        .collect()
}

fn rel_suite() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let (code, out) = cli(&["check", "--model", "rel", "--bound", "3"], dir.path());
    let took = start.elapsed();
    let lines = report_lines(&out);
    let holding = lines.iter().filter(|(_, v, _)| *v == "HOLDS").count();
    ensure(code == 0, || format!("exit {code}"))?;
    ensure(lines.len() == SUITE_CONDITIONS && holding == SUITE_CONDITIONS, || {
        format!("{holding}/{} conditions hold", lines.len())
    })?;
    ensure(took < SUITE_TIME_LIMIT, || format!("took {took:?}"))?;
    Ok(format!(
        "{holding}/{SUITE_CONDITIONS} hold at bound 3 in {:.2}s (limit 120s)",
        took.as_secs_f64()
    ))
}

fn counter_models() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let witness = |rel: &str| fs::read_to_string(dir.path().join(rel)).unwrap();
    let failing = |out: &str, id: &str| -> Result<String, String> {
        report_lines(out)
            .into_iter()
            .find(|(i, v, _)| *i == id && *v == "FAILS")
            .and_then(|(_, _, p)| p.map(str::to_string))
            .ok_or_else(|| format!("{id} does not fail"))
    };
    // the last matrix row of a witness is the offending value
    let last_value = |text: &str| text.lines().last().unwrap_or("").trim().to_string();

    let (code, out) = cli(
        &["check", "--rig", "chain3", "--bound", "2", "--out", "chain3.txt"],
        dir.path(),
    );
    let out = if out.is_empty() {
        fs::read_to_string(dir.path().join("chain3.txt")).unwrap()
    } else {
        out
    };
    ensure(code == 1, || format!("chain3 exit {code}"))?;
    let s = witness(&failing(&out, "scalars-invertible")?);
    ensure(last_value(&s) == "1/2", || {
        format!("chain3 scalar witness {}", last_value(&s))
    })?;
    let u = witness(&failing(&out, "unique-top")?);
    ensure(u.contains("# lhs: 2 point(s) with zero cokernel"), || {
        "unique-top witness is not a duplicate".into()
    })?;

    let (code, out) = cli(&["lattice", "--rig", "chain3", "--size", "1"], dir.path());
    ensure(code == 1, || format!("chain3 lattice exit {code}"))?;
    let c = out
        .lines()
        .find(|l| l.starts_with("lattice-complement FAILS"))
        .ok_or("lattice report does not flag complementation")?;
    let c = witness(c.rsplit('=').next().unwrap());
    ensure(last_value(&c) == "1/2", || {
        format!("complement witness {}", last_value(&c))
    })?;

    let (code, out) = cli(
        &["check", "--rig", "trunc3", "--bound", "2", "--out", "trunc3.txt"],
        dir.path(),
    );
    let out = if out.is_empty() {
        fs::read_to_string(dir.path().join("trunc3.txt")).unwrap()
    } else {
        out
    };
    ensure(code == 1, || format!("trunc3 exit {code}"))?;
    let t = witness(&failing(&out, "scalars-invertible")?);
    ensure(last_value(&t) == "2", || {
        format!("trunc3 scalar witness {}", last_value(&t))
    })?;
    Ok("chain3 fails scalars at 1/2, unique-top, complement at 1/2; trunc3 fails scalars at 2".into())
}

fn hom_lattice() -> Outcome {
    let m = RelModel::new();
    for n in 0..=3 {
        let r = checker::verify_hom_lattice(&m, n, LatticeMode::Exhaustive).map_err(|e| e.to_string())?;
        ensure(r.points == 1 << n && r.atoms.len() == n, || {
            format!("size {n}: {} points, {} atoms", r.points, r.atoms.len())
        })?;
        ensure(r.all_hold(), || format!("size {n}: a lattice law fails"))?;
    }
    let mode = LatticeMode::Sampled {
        triples: SAMPLED_TRIPLES,
        seed: SAMPLE_SEED,
    };
    let r = checker::verify_hom_lattice(&m, 4, mode).map_err(|e| e.to_string())?;
    ensure(r.get("lattice-distributive").is_some_and(|v| v.holds()), || {
        "distributivity fails at size 4".into()
    })?;
    let mut pairs = 0;
    for n in 0..=4 {
        let x = set(n);
        for a in 0..1u32 << n {
            for b in 0..1u32 << n {
                let mask = |bits: u32| (0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>();
                let got = rel::meet(&Relation::point(&x, &mask(a)), &Relation::point(&x, &mask(b))).unwrap();
                ensure(got.mask() == mask(a & b), || format!("meet {a:b} {b:b} at size {n}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "sizes 0..=3 exhaustive; {SAMPLED_TRIPLES} triples at size 4 (seed {SAMPLE_SEED}); {pairs} meets equal intersection"
    ))
}

fn decomposition_lemmas() -> Outcome {
    let report = checker::verify_decomposition_lemmas(&RelModel::new(), 4).map_err(|e| e.to_string())?;
    ensure(report.all_hold(), || {
        format!("failing: {:?}", report.failures().map(|r| r.id).collect::<Vec<_>>())
    })?;
    // independent oracle: a subset and its complement split the identity
    let mut subsets = 0;
    for n in 0..=4 {
        let x = set(n);
        for bits in 0..1u32 << n {
            let mask: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            let inv: Vec<bool> = mask.iter().map(|b| !b).collect();
            let k = rel::inclusion(&x, &mask);
            let kc = rel::inclusion(&x, &inv);
            let proj = |k: &Relation| rel::compose(k, &k.dagger()).unwrap();
            let sum = rel::join(&x, &x, &[proj(&k), proj(&kc)]).unwrap();
            ensure(sum == Relation::identity(&x), || {
                format!("split fails for {bits:b} at size {n}")
            })?;
            subsets += 1;
        }
    }
    Ok(format!(
        "{} lemma checks hold up to size 4; {subsets} subsets split the identity",
        report.results.len()
    ))
}

fn extraction_equivalence() -> Outcome {
    let m = RelModel::new();
    let report = extraction::verify_equivalence(&m, 3).map_err(|e| e.to_string())?;
    ensure(report.all_hold(), || {
        format!("failing: {:?}", report.failures().map(|r| r.id).collect::<Vec<_>>())
    })?;
    // independent oracle: on relations, atoms are singletons in element order,
    // so E is the identity on matrices and the preimage inverts it
    let mut count = 0;
    for p in 0..=3 {
        for q in 0..=3 {
            let (ap, aq) = (
                extraction::extract_object(&m, p).unwrap(),
                extraction::extract_object(&m, q).unwrap(),
            );
            for r in Relation::all(&set(p), &set(q)) {
                let mat = r.matrix().clone();
                let e = extraction::extract_with(&m, &ap, &aq, &mat);
                ensure(e == mat, || format!("E changes a {p}x{q} relation"))?;
                let back = extraction::full_preimage(&m, &ap, &aq, p, q, &e);
                ensure(back == mat, || format!("preimage round trip fails at {p}x{q}"))?;
                count += 1;
            }
        }
    }
    Ok(format!(
        "{} equivalence checks hold at bound 3; {count} relations round trip",
        report.results.len()
    ))
}

fn monoidal_coherence() -> Outcome {
    let m = RelModel::new();
    for sizes in [(2, 2, 2), (1, 2, 3)] {
        let r = verify_monoidal_coherence(&m, sizes);
        ensure(r.all_hold(), || format!("{sizes:?}: {:?}", r.results))?;
        let (x, y, _) = sizes;
        let mu = extraction::mu(&m, x, y).map_err(|e| e.to_string())?;
        let mut seen = mu.clone();
        seen.sort_unstable();
        ensure(seen == (0..x * y).collect::<Vec<_>>(), || {
            format!("mu at {sizes:?} is not a bijection")
        })?;
    }
    Ok("mu bijective; associator and braiding squares commute at (2,2,2) and (1,2,3)".into())
}

fn block_diagonal(rs: &[Relation], x: &FinSet, y: &FinSet) -> Relation {
    let (nx, ny) = (x.len(), y.len());
    let mat = BoolMat::from_fn(nx * rs.len(), ny * rs.len(), |i, j| {
        let (bi, bj) = (i / nx.max(1), j / ny.max(1));
        bi == bj && rs[bi].matrix().get(i % nx, j % ny)
    });
    let sum = |s: &FinSet| rel::biproduct(&vec![s.clone(); rs.len()]).object;
    Relation::from_matrix(sum(x), sum(y), mat)
}

fn enrichment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ENRICHMENT_SEED);
    for t in 0..ENRICHMENT_FAMILIES {
        let (x, y) = (set(rng.gen_range(0..=MAX_SIZE)), set(rng.gen_range(0..=MAX_SIZE)));
        let k = rng.gen_range(0..=MAX_FAMILY);
        let rs: Vec<Relation> = (0..k)
            .map(|_| {
                let bits: Vec<bool> = (0..x.len() * y.len()).map(|_| rng.gen_bool(0.5)).collect();
                let mat = BoolMat::from_fn(x.len(), y.len(), |i, j| bits[i * y.len() + j]);
                Relation::from_matrix(x.clone(), y.clone(), mat)
            })
            .collect();
        let join = rel::join(&x, &y, &rs).unwrap();
        let diag = rel::structural(StructuralKind::Diagonal(k), std::slice::from_ref(&x)).unwrap();
        let codiag = rel::structural(StructuralKind::Codiagonal(k), std::slice::from_ref(&y)).unwrap();
        let via = rel::compose(&codiag, &rel::compose(&block_diagonal(&rs, &x, &y), &diag).unwrap()).unwrap();
        ensure(via == join, || format!("family {t} ({k} maps {}x{})", x.len(), y.len()))?;
        let union = BoolMat::from_fn(x.len(), y.len(), |i, j| rs.iter().any(|r| r.matrix().get(i, j)));
        ensure(join.matrix() == &union, || format!("family {t}: join is not the union"))?;
    }
    Ok(format!("{ENRICHMENT_FAMILIES} families (seed {ENRICHMENT_SEED}, <= {MAX_FAMILY} maps, sizes <= {MAX_SIZE}) agree exactly"))
}

fn compact_structure() -> Outcome {
    for n in 0..=4 {
        let x = set(n);
        ensure(rel::snake_left(&x) == Relation::identity(&x), || {
            format!("left snake at {n}")
        })?;
        ensure(rel::snake_right(&x) == Relation::identity(&x), || {
            format!("right snake at {n}")
        })?;
    }
    let mut traced = 0;
    for n in 0..=3 {
        let x = set(n);
        for r in Relation::all(&x, &x) {
            let fixed = (0..n).any(|i| r.matrix().get(i, i));
            ensure(rel::trace(&r).unwrap() == fixed, || format!("trace of {:?}", r.pairs()))?;
            traced += 1;
        }
    }
    let mut breved = 0;
    for p in 0..=3 {
        for q in 0..=3 {
            let (x, y) = (set(p), set(q));
            let all: Vec<Relation> = Relation::all(&x, &y).collect();
            let breves: Vec<Relation> = all.iter().map(rel::breve).collect();
            for (r, b) in all.iter().zip(&breves) {
                let expected: Vec<bool> = (0..p * q).map(|k| r.matrix().get(k / q, k % q)).collect();
                ensure(b.mask() == expected, || format!("breve layout at {p}x{q}"))?;
                ensure(&rel::un_breve(b, &x, &y).unwrap() == r, || {
                    format!("round trip at {p}x{q}")
                })?;
            }
            let mut distinct = breves.clone();
            distinct.sort_by_key(|b| b.mask());
            distinct.dedup();
            ensure(distinct.len() == all.len(), || {
                format!("breve not injective at {p}x{q}")
            })?;
            for (r, br) in all.iter().zip(&breves) {
                for (s, bs) in all.iter().zip(&breves) {
                    let j = rel::join(&x, &y, &[r.clone(), s.clone()]).unwrap();
                    let bj = rel::join(br.dom(), br.cod(), &[br.clone(), bs.clone()]).unwrap();
                    ensure(rel::breve(&j) == bj, || {
                        format!("breve does not preserve a join at {p}x{q}")
                    })?;
                }
            }
            breved += all.len();
        }
    }
    Ok(format!(
        "snakes at sizes 0..=4; {traced} traces match fixed points; {breved} breves round trip"
    ))
}

fn division_collapse() -> Outcome {
    let expect: [VerdictCheck; 4] = [
        ("bool", |v| matches!(v, CollapseVerdict::Collapsed)),
        ("gf2", |v| matches!(v, CollapseVerdict::NotInfinitary)),
        ("chain3", |v| matches!(v, CollapseVerdict::NotDivisionRig { .. })),
        ("trunc3", |v| matches!(v, CollapseVerdict::NotDivisionRig { .. })),
    ];
    for (name, ok) in expect {
        let v = corpus::rig(name)
            .unwrap()
            .division_collapse_check()
            .map_err(|e| e.to_string())?;
        ensure(ok(&v), || format!("{name}: {v:?}"))?;
    }
    for name in corpus::RIG_NAMES {
        let v = corpus::rig(name)
            .unwrap()
            .division_collapse_check()
            .map_err(|e| e.to_string())?;
        ensure(!matches!(v, CollapseVerdict::CollapseViolated { .. }), || {
            format!("{name} violates collapse")
        })?;
    }
    Ok("bool Collapsed, gf2 NotInfinitary, chain3 and trunc3 NotDivisionRig; no rig violates collapse".into())
}

fn cli_contract() -> Outcome {
    let dirs = common::example_dirs();
    let mut codes = [0usize; 3];
    let mut replayed = 0;
    for dir in &dirs {
        let got = common::run_example(dir);
        let diffs = common::compare(dir, &got);
        ensure(diffs.is_empty(), || diffs.join("; "))?;
        ensure((0..=2).contains(&got.code), || {
            format!("{}: exit {}", dir.display(), got.code)
        })?;
        codes[got.code as usize] += 1;
        let args = fs::read_to_string(dir.join("args")).unwrap();
        let model = common::model_flags(&args);
        let model: Vec<&str> = model.iter().map(String::as_str).collect();
        let (ok, bad) = common::replay_witnesses(&got, &model);
        ensure(bad.is_empty(), || format!("{}: {bad:?} do not replay", dir.display()))?;
        replayed += ok;
    }
    ensure(codes.iter().all(|&c| c > 0), || format!("exit codes seen {codes:?}"))?;
    Ok(format!(
        "{} examples match golden files (exit 0/1/2: {}/{}/{}); {replayed} witnesses replay",
        dirs.len(),
        codes[0],
        codes[1],
        codes[2]
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("relation suite", rel_suite),
        ("counter-models", counter_models),
        ("hom lattice", hom_lattice),
        ("decomposition lemmas", decomposition_lemmas),
        ("extraction equivalence", extraction_equivalence),
        ("monoidal coherence", monoidal_coherence),
        ("enrichment", enrichment),
        ("compact structure", compact_structure),
        ("division collapse", division_collapse),
        ("cli contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
