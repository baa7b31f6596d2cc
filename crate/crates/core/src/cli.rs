//! The `relcat` command line.
//!
//! Exit codes: 0 when every check holds or a computation succeeds, 1 when a
//! checked property fails, 2 on input or usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checker::{self, AxiomReport, CheckError, Config, Counterexample, LatticeMode, PointLattice, Witness};
use crate::corpus;
use crate::extraction::{self, ExtractError};
use crate::matcat::{self, MatError, MatrixCategory, RigMatrix};
use crate::model::{Model, RelModel};
use crate::rel::{self, FinSet, RelDocument, Relation};
use crate::rig::{self, FiniteRig};

#[derive(Debug, Parser)]
#[command(
    name = "relcat",
    version,
    about = "Finite relations, rig matrices, and bounded axiom checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct ModelArgs {
    /// The category of finite relations.
    #[arg(long, value_parser = ["rel"])]
    model: Option<String>,
    /// Matrices over a bundled rig (bool, chain3, trunc3, gf2, trivial) or a rig file.
    #[arg(long)]
    rig: Option<String>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// Sample this many triples for the lattice triple laws.
    #[arg(long, requires = "seed")]
    sampled: Option<usize>,
    /// Seed for every sampled scan.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full axiom suite and write a report.
    Check {
        #[command(flatten)]
        model: ModelArgs,
        /// Largest object size scanned.
        #[arg(long)]
        bound: usize,
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one operation to relations or matrices read from files.
    Compute {
        #[arg(value_enum)]
        op: Op,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print atom sets and extracted relations.
    Extract {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the lattice laws on the points of one object.
    Lattice {
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-evaluate a witness file; exits 0 when it reproduces.
    Replay {
        witness: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    Kernel,
    Complement,
    Neg,
    Meet,
    Join,
    Top,
    Trace,
    Breve,
    Cokernel,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Kernel => "kernel",
            Op::Complement => "complement",
            Op::Neg => "neg",
            Op::Meet => "meet",
            Op::Join => "join",
            Op::Top => "top",
            Op::Trace => "trace",
            Op::Breve => "breve",
            Op::Cokernel => "cokernel",
        }
    }
}

/// Why a command stopped early.
#[derive(Debug)]
enum Stop {
    /// Exit 1 with a diagnostic.
    Fails(String),
    /// Exit 2 with a diagnostic.
    Input(String),
}

type Run = Result<u8, Stop>;

fn input(msg: impl Into<String>) -> Stop {
    Stop::Input(msg.into())
}

enum Selected {
    Rel(RelModel),
    Rig(MatrixCategory),
}

fn load_rig(spec: &str) -> Result<FiniteRig, Stop> {
    if let Some(r) = corpus::rig(spec) {
        return Ok(r);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(input(format!(
            "unknown rig `{spec}`: not bundled ({}) and no such file",
            corpus::RIG_NAMES.join(", ")
        )));
    }
    let text = read(path)?;
    rig::parse_rig(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn select(args: &ModelArgs, required: bool) -> Result<Selected, Stop> {
    match (&args.model, &args.rig) {
        (_, Some(spec)) => {
            let cat = MatrixCategory::new(load_rig(spec)?).map_err(|e| input(e.to_string()))?;
            Ok(Selected::Rig(cat))
        }
        (Some(_), None) => Ok(Selected::Rel(RelModel::new())),
        (None, None) if required => Err(input("one of --model rel or --rig <name> is required")),
        (None, None) => Ok(Selected::Rel(RelModel::new())),
    }
}

fn config(sample: &SampleArgs) -> Config {
    let seed = sample.seed.unwrap_or(0);
    Config {
        sample_seed: seed,
        lattice_mode: match sample.sampled {
            Some(triples) => LatticeMode::Sampled { triples, seed },
            None => LatticeMode::Exhaustive,
        },
        ..Config::default()
    }
}

fn read(path: &Path) -> Result<String, Stop> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Stop> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Where witnesses go: `<stem>_witnesses/` beside `--out`, or
/// `witnesses/` in the working directory. Returns the directory and the
/// prefix printed in reports.
fn witness_dir(out: Option<&Path>) -> (PathBuf, String) {
    match out {
        Some(p) => {
            let stem = p
                .file_stem()
                .map_or("report".into(), |s| s.to_string_lossy().into_owned());
            let name = format!("{stem}_witnesses");
            (p.parent().unwrap_or(Path::new("")).join(&name), name)
        }
        None => (PathBuf::from("witnesses"), "witnesses".into()),
    }
}

fn write_witnesses<'a>(
    model: &str,
    bound: usize,
    out: Option<&Path>,
    failures: impl Iterator<Item = (&'a str, &'a Counterexample)>,
) -> Result<Vec<(String, String)>, Stop> {
    let (dir, prefix) = witness_dir(out);
    let mut paths = Vec::new();
    for (id, c) in failures {
        if paths.is_empty() {
            fs::create_dir_all(&dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
        }
        let w = Witness {
            condition: c.condition.clone(),
            law: c.law.clone(),
            model: model.to_string(),
            bound,
            lhs: c.lhs.clone(),
            rhs: c.rhs.clone(),
            items: c.items.clone(),
        };
        let file = dir.join(format!("{id}.witness"));
        fs::write(&file, w.render()).map_err(|e| input(format!("{}: {e}", file.display())))?;
        paths.push((id.to_string(), format!("{prefix}/{id}.witness")));
    }
    Ok(paths)
}

fn check_error(e: CheckError) -> Stop {
    match e {
        CheckError::SearchExhausted {
            condition,
            source,
            partial,
        } => {
            let done: Vec<&str> = partial.results.iter().map(|r| r.id).collect();
            input(format!(
                "search exhausted while checking {condition}: {source} (completed: {})",
                if done.is_empty() {
                    "none".into()
                } else {
                    done.join(", ")
                }
            ))
        }
        other => input(other.to_string()),
    }
}

fn check<M: Model>(model: &M, bound: usize, cfg: Config, out: Option<&Path>) -> Run {
    let report: AxiomReport = checker::run_suite(model, bound, cfg).map_err(check_error)?;
    let failures = report
        .results
        .iter()
        .filter_map(|r| r.verdict.counterexample().map(|c| (r.id, c)));
    let paths = write_witnesses(&report.model, bound, out, failures)?;
    let text = report.render(|r| {
        paths
            .iter()
            .find(|(id, _)| id == r.id)
            .map(|(_, p)| p.clone())
            .unwrap_or_default()
    });
    emit(out, &text)?;
    Ok(if report.all_hold() { 0 } else { 1 })
}

fn lattice<M: Model>(model: &M, size: usize, mode: LatticeMode, out: Option<&Path>) -> Run {
    let report = checker::verify_hom_lattice(model, size, mode).map_err(check_error)?;
    let failures = report
        .results
        .iter()
        .filter_map(|(id, v)| v.counterexample().map(|c| (*id, c)));
    let paths = write_witnesses(&model.name(), size.max(1), out, failures)?;
    let mut text = String::new();
    writeln!(text, "# model: {}", model.name()).unwrap();
    writeln!(text, "# size: {size}").unwrap();
    writeln!(text, "# points: {}", report.points).unwrap();
    writeln!(text, "# atoms: {}", report.atoms.len()).unwrap();
    if let LatticeMode::Sampled { triples, seed } = mode {
        writeln!(text, "# triple laws: {triples} sampled triples, seed {seed}").unwrap();
    }
    for (id, v) in &report.results {
        match paths.iter().find(|(p, _)| p == id) {
            Some((_, path)) if !v.holds() => writeln!(text, "{id} FAILS witness={path}"),
            _ => writeln!(text, "{id} HOLDS"),
        }
        .unwrap();
    }
    emit(out, &text)?;
    Ok(if report.all_hold() { 0 } else { 1 })
}

fn replay<M: Model>(model: &M, path: &Path) -> Run {
    let w = checker::parse_witness(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let out = checker::replay(model, &w).map_err(|e| input(format!("{}: {e}", path.display())))?;
    println!("lhs: {}", out.lhs);
    println!("rhs: {}", out.rhs);
    if out.reproduces() {
        Ok(0)
    } else {
        Err(Stop::Fails(format!(
            "{}: witness does not reproduce the recorded values",
            path.display()
        )))
    }
}

// ---- relations ----

fn load_relations(files: &[PathBuf]) -> Result<Vec<(String, Relation)>, Stop> {
    let mut out = Vec::new();
    for f in files {
        let doc = rel::parse_relations(&read(f)?).map_err(|e| input(format!("{}: {e}", f.display())))?;
        out.extend(doc.relations);
    }
    Ok(out)
}

fn load_sets(files: &[PathBuf]) -> Result<Vec<FinSet>, Stop> {
    let mut out = Vec::new();
    for f in files {
        let doc = rel::parse_relations(&read(f)?).map_err(|e| input(format!("{}: {e}", f.display())))?;
        out.extend(doc.sets);
    }
    Ok(out)
}

fn operands<T>(items: &[(String, T)], op: Op, n: usize) -> Result<&[(String, T)], Stop> {
    if items.len() < n {
        return Err(input(format!(
            "{} needs {n} operand(s), found {}",
            op.name(),
            items.len()
        )));
    }
    Ok(&items[..n])
}

fn compute_rel(op: Op, files: &[PathBuf]) -> Result<String, Stop> {
    let rels = load_relations(files)?;
    let named = |e: rel::RelError, names: &[&str]| input(format!("{} on {}: {e}", op.name(), names.join(", ")));
    let (name, result) = match op {
        Op::Top => {
            let sets = load_sets(files)?;
            let x = sets
                .iter()
                .find(|s| s.label() != "I")
                .ok_or_else(|| input("top needs a declared set"))?;
            (format!("top_{}", x.label()), rel::top(x))
        }
        Op::Meet => {
            let [(an, a), (bn, b)] = operands(&rels, op, 2)? else {
                unreachable!()
            };
            let m = rel::meet(a, b).map_err(|e| named(e, &[an, bn]))?;
            (format!("meet_{an}_{bn}"), m)
        }
        Op::Join => {
            let all = operands(&rels, op, 1)?;
            let rs: Vec<Relation> = rels.iter().map(|(_, r)| r.clone()).collect();
            let names: Vec<&str> = rels.iter().map(|(n, _)| n.as_str()).collect();
            let j = rel::join(all[0].1.dom(), all[0].1.cod(), &rs).map_err(|e| named(e, &names))?;
            (format!("join_{}", names.join("_")), j)
        }
        _ => {
            let [(rn, r)] = operands(&rels, op, 1)? else {
                unreachable!()
            };
            let res = match op {
                Op::Kernel => Ok(rel::kernel(r).m),
                Op::Cokernel => Ok(rel::cokernel(r)),
                Op::Complement => rel::complement_of(r).map(|w| w.m),
                Op::Neg => rel::neg(r),
                Op::Trace => rel::trace_scalar(r),
                Op::Breve => Ok(rel::breve(r)),
                Op::Top | Op::Meet | Op::Join => unreachable!(),
            };
            (format!("{}_{rn}", op.name()), res.map_err(|e| named(e, &[rn]))?)
        }
    };
    Ok(rel::write_relations(&RelDocument::from_relations(vec![(name, result)])))
}

// ---- rig matrices ----

fn load_matrices(files: &[PathBuf], cat: &MatrixCategory) -> Result<Vec<(String, RigMatrix)>, Stop> {
    let mut out = Vec::new();
    for f in files {
        let ms = matcat::parse_matrices(&read(f)?, cat.rig()).map_err(|e| input(format!("{}: {e}", f.display())))?;
        out.extend(ms);
    }
    Ok(out)
}

fn point_lattice(cat: &MatrixCategory, n: usize) -> Result<PointLattice<MatrixCategory>, Stop> {
    match Model::hom_count(cat, n, 1) {
        Some(c) if c <= 1 << 16 => Ok(PointLattice::new(cat, Model::hom(cat, n, 1))),
        _ => Err(input(format!("object {n} has too many points to enumerate"))),
    }
}

fn compute_rig(op: Op, files: &[PathBuf], cat: &MatrixCategory) -> Result<String, Stop> {
    let mats = load_matrices(files, cat)?;
    let mismatch = |names: &[&str], what: &str| input(format!("{} on {}: {what}", op.name(), names.join(", ")));
    let search = |e: MatError| input(e.to_string());
    let kernel_of = |r: &RigMatrix, rn: &str| -> Result<RigMatrix, Stop> {
        cat.find_kernel(r, r.dom().max(1))
            .map_err(search)?
            .found()
            .map(|k| k.m)
            .ok_or_else(|| Stop::Fails(format!("{rn} has no dagger kernel over rig {}", cat.rig().name())))
    };
    let point = |a: &RigMatrix, an: &str| -> Result<(), Stop> {
        if a.dom() == 1 {
            Ok(())
        } else {
            Err(mismatch(
                &[an],
                &format!("expected a point 1 -> n, found {} -> {}", a.dom(), a.cod()),
            ))
        }
    };
    let (name, result) = match op {
        Op::Top => {
            let (_, f) = &operands(&mats, op, 1)?[0];
            let l = point_lattice(cat, f.cod())?;
            let top = l
                .top_point()
                .cloned()
                .ok_or_else(|| Stop::Fails(format!("object {} has no largest point", f.cod())))?;
            (format!("top_{}", f.cod()), top)
        }
        Op::Meet => {
            let [(an, a), (bn, b)] = operands(&mats, op, 2)? else {
                unreachable!()
            };
            point(a, an)?;
            point(b, bn)?;
            if a.cod() != b.cod() {
                return Err(mismatch(&[an, bn], "points of different objects"));
            }
            let l = point_lattice(cat, a.cod())?;
            let (ia, ib) = (l.index(a).unwrap(), l.index(b).unwrap());
            let m = l
                .meet(ia, ib)
                .ok_or_else(|| Stop::Fails(format!("{an} and {bn} have no greatest lower bound")))?;
            (format!("meet_{an}_{bn}"), l.points[m].clone())
        }
        Op::Join => {
            let all = operands(&mats, op, 1)?;
            let names: Vec<&str> = mats.iter().map(|(n, _)| n.as_str()).collect();
            let mut acc = cat.zero(all[0].1.cod(), all[0].1.dom());
            for (_, f) in &mats {
                acc = cat.add(&acc, f).map_err(|e| mismatch(&names, &e.to_string()))?;
            }
            (format!("join_{}", names.join("_")), acc)
        }
        _ => {
            let [(rn, r)] = operands(&mats, op, 1)? else {
                unreachable!()
            };
            let res = match op {
                Op::Kernel => kernel_of(r, rn)?,
                Op::Cokernel => cat.dagger(&kernel_of(&cat.dagger(r), rn)?),
                Op::Complement => {
                    if !cat.is_dagger_monic(r) {
                        return Err(mismatch(&[rn], "not a dagger monomorphism"));
                    }
                    kernel_of(&cat.dagger(r), rn)?
                }
                Op::Neg => {
                    point(r, rn)?;
                    let l = point_lattice(cat, r.cod())?;
                    let n = l
                        .neg(l.index(r).unwrap())
                        .ok_or_else(|| Stop::Fails(format!("{rn} has no largest orthogonal point")))?;
                    l.points[n].clone()
                }
                Op::Trace => {
                    let t = cat.trace(r).map_err(|e| mismatch(&[rn], &e.to_string()))?;
                    RigMatrix::new(1, 1, vec![t])
                }
                Op::Breve => cat.breve(r),
                Op::Top | Op::Meet | Op::Join => unreachable!(),
            };
            (format!("{}_{rn}", op.name()), res)
        }
    };
    Ok(matcat::write_matrix(&name, &result, cat.rig()))
}

// ---- extraction ----

fn bit_pattern<M: Model>(m: &M, a: &M::Mor) -> String {
    let one = m.rig().one();
    let labels: Vec<&str> = (0..m.cod(a)).map(|i| m.rig().label(m.entry(a, i, 0))).collect();
    if labels.iter().all(|l| l.len() == 1) && m.rig().size() == 2 && m.rig().label(one) == "1" {
        labels.concat()
    } else {
        labels.join(" ")
    }
}

/// Objects in first-use order with their display names, and the named
/// morphisms between them.
struct ExtractInput<M: Model> {
    objects: Vec<(String, usize)>,
    items: Vec<(String, M::Mor)>,
}

fn extract_output<M: Model>(m: &M, data: ExtractInput<M>) -> Run {
    let mut text = String::new();
    let mut problems = Vec::new();
    let mut atoms: Vec<(usize, Vec<M::Mor>)> = Vec::new();
    for (label, n) in &data.objects {
        let a = match atoms.iter().find(|(k, _)| k == n) {
            Some((_, a)) => a.clone(),
            None => {
                let a = match extraction::extract_object(m, *n) {
                    Ok(a) => a,
                    Err(e @ ExtractError::NotAtomic { .. }) => {
                        problems.push(format!("{label}: {e}"));
                        extraction::atoms_by_scan(m, *n, m.hom_count(*n, 1).unwrap_or(0))
                    }
                    Err(e) => return Err(input(format!("{label}: {e}"))),
                };
                let lat = checker::verify_hom_lattice(m, *n, LatticeMode::Exhaustive).map_err(check_error)?;
                for (id, v) in &lat.results {
                    if let Some(c) = v.counterexample() {
                        let at: Vec<String> = m
                            .parse_items(&c.items)
                            .unwrap_or_default()
                            .iter()
                            .map(|(n, f)| format!("{n} = {}", m.show(f)))
                            .collect();
                        problems.push(format!(
                            "{label}: {id} fails ({}) at {}: {} != {}",
                            c.law,
                            at.join(", "),
                            c.lhs,
                            c.rhs
                        ));
                    }
                }
                atoms.push((*n, a.clone()));
                a
            }
        };
        writeln!(text, "atoms {label} {}", a.len()).unwrap();
        for t in &a {
            writeln!(text, "{}", bit_pattern(m, t)).unwrap();
        }
    }
    let find = |n: usize| {
        atoms
            .iter()
            .find(|(k, _)| *k == n)
            .map(|(_, a)| a.as_slice())
            .unwrap_or(&[])
    };
    for (name, f) in &data.items {
        let e = extraction::extract_with(m, find(m.dom(f)), find(m.cod(f)), f);
        writeln!(text, "erel {name} {} {}", e.rows(), e.cols()).unwrap();
        for (i, j) in e.ones() {
            writeln!(text, "{i} {j}").unwrap();
        }
    }
    print!("{text}");
    if problems.is_empty() {
        Ok(0)
    } else {
        Err(Stop::Fails(problems.join("\n")))
    }
}

fn extract(files: &[PathBuf], sel: &Selected, out: Option<&Path>) -> Run {
    let result = match sel {
        Selected::Rel(m) => {
            let rels = load_relations(files)?;
            let mut objects: Vec<(String, usize)> = Vec::new();
            for (_, r) in &rels {
                for s in [r.dom(), r.cod()] {
                    if !objects.iter().any(|(l, _)| l == s.label()) {
                        objects.push((s.label().to_string(), s.len()));
                    }
                }
            }
            let items = rels.into_iter().map(|(n, r)| (n, r.matrix().clone())).collect();
            capture(out, || extract_output(m, ExtractInput { objects, items }))
        }
        Selected::Rig(cat) => {
            let mats = load_matrices(files, cat)?;
            let mut objects: Vec<(String, usize)> = Vec::new();
            for (_, f) in &mats {
                for n in [f.dom(), f.cod()] {
                    if !objects.iter().any(|(_, k)| *k == n) {
                        objects.push((n.to_string(), n));
                    }
                }
            }
            capture(out, || extract_output(cat, ExtractInput { objects, items: mats }))
        }
    };
    result
}

// extract_output prints; when --out is given, rerun into a buffer instead
fn capture(out: Option<&Path>, f: impl FnOnce() -> Run) -> Run {
    match out {
        None => f(),
        Some(p) => {
            let (code, text) = OUTPUT.with(|buf| {
                *buf.borrow_mut() = Some(String::new());
                let code = f();
                (code, buf.borrow_mut().take().unwrap_or_default())
            });
            emit(Some(p), &text)?;
            code
        }
    }
}

thread_local! {
    static OUTPUT: std::cell::RefCell<Option<String>> = const { std::cell::RefCell::new(None) };
}

macro_rules! print {
    ($($t:tt)*) => {{
        let s = format!($($t)*);
        let captured = OUTPUT.with(|buf| match buf.borrow_mut().as_mut() {
            Some(b) => { b.push_str(&s); true }
            None => false,
        });
        if !captured {
            ::std::print!("{s}");
        }
    }};
}
use print;

fn dispatch(cli: Cli) -> Run {
    match cli.command {
        Command::Check {
            model,
            bound,
            sample,
            out,
        } => {
            if bound == 0 {
                return Err(input("--bound must be at least 1"));
            }
            let cfg = config(&sample);
            match select(&model, true)? {
                Selected::Rel(m) => check(&m, bound, cfg, out.as_deref()),
                Selected::Rig(m) => check(&m, bound, cfg, out.as_deref()),
            }
        }
        Command::Compute { op, files, model, out } => {
            let text = match select(&model, false)? {
                Selected::Rel(_) => compute_rel(op, &files)?,
                Selected::Rig(cat) => compute_rig(op, &files, &cat)?,
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Extract { files, model, out } => extract(&files, &select(&model, false)?, out.as_deref()),
        Command::Lattice {
            size,
            model,
            sample,
            out,
        } => {
            let mode = config(&sample).lattice_mode;
            match select(&model, true)? {
                Selected::Rel(m) => lattice(&m, size, mode, out.as_deref()),
                Selected::Rig(m) => lattice(&m, size, mode, out.as_deref()),
            }
        }
        Command::Replay { witness, model } => match select(&model, true)? {
            Selected::Rel(m) => replay(&m, &witness),
            Selected::Rig(m) => replay(&m, &witness),
        },
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => i32::from(code),
        Err(Stop::Fails(msg)) => {
            eprintln!("relcat: {msg}");
            1
        }
        Err(Stop::Input(msg)) => {
            eprintln!("relcat: error: {msg}");
            2
        }
    }
}
