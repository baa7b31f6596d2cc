//! C ABI over `relcat`.
//!
//! Rigs and relations cross the boundary as opaque handles owned by the
//! caller and released with the matching `_free` function. Every entry
//! point returns a [`RelcatStatus`]; on anything but `RELCAT_STATUS_OK` the
//! message from [`relcat_last_error`] describes what went wrong. Strings
//! returned through out-parameters are freed with [`relcat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use relcat::checker::{self, Config, Witness};
use relcat::corpus;
use relcat::matcat::MatrixCategory;
use relcat::model::{Model, RelModel};
use relcat::rel::{self, RelDocument, RelError, Relation};
use relcat::rig::{self, CollapseVerdict, FiniteRig};

/// A finite rig.
pub struct RelcatRig(FiniteRig);

/// A relation between two labelled finite sets.
pub struct RelcatRelation(Relation);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelcatStatus {
    Ok = 0,
    /// A checked property does not hold, or the requested value does not exist.
    PropertyFails = 1,
    /// Text failed to parse or an argument is out of range.
    InvalidInput = 2,
    /// Operands have incompatible domains or codomains.
    DomainMismatch = 3,
    NullPointer = 4,
    /// A panic was caught at the boundary.
    Internal = 5,
}

/// Outcome of the division-rig collapse check.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelcatCollapse {
    NotDivisionRig = 0,
    NotInfinitary = 1,
    Collapsed = 2,
    CollapseViolated = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Failure(RelcatStatus, String);

impl From<RelError> for Failure {
    fn from(e: RelError) -> Self {
        let status = match e {
            RelError::DomainMismatch(_) | RelError::ArityMismatch { .. } => RelcatStatus::DomainMismatch,
            RelError::NotDaggerKernel(_) => RelcatStatus::PropertyFails,
            _ => RelcatStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: RelcatStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `f`, converting failures and panics into a status and an error message.
fn guard(f: impl FnOnce() -> Result<RelcatStatus, Failure>) -> RelcatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            if status == RelcatStatus::Ok {
                set_error("");
            }
            status
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error: panic caught at the C boundary");
            RelcatStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(RelcatStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(RelcatStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(RelcatStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<RelcatStatus, Failure> {
    if out.is_null() {
        return Err(fail(RelcatStatus::NullPointer, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(RelcatStatus::Ok)
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<RelcatStatus, Failure> {
    if out.is_null() {
        return Err(fail(RelcatStatus::NullPointer, "output pointer is null"));
    }
    let c = CString::new(s).map_err(|_| fail(RelcatStatus::Internal, "string contains NUL"))?;
    *out = c.into_raw();
    Ok(RelcatStatus::Ok)
}

unsafe fn clear<T>(out: *mut *mut T) {
    if !out.is_null() {
        *out = ptr::null_mut();
    }
}

/// Message describing the last failure on this thread, or an empty string.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn relcat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn relcat_string_free(s: *mut c_char) {
    if !s.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(CString::from_raw(s))));
    }
}

/// Looks up a bundled rig: `bool`, `chain3`, `trunc3`, `gf2` or `trivial`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_rig_bundled(name: *const c_char, out: *mut *mut RelcatRig) -> RelcatStatus {
    clear(out);
    guard(|| {
        let name = text(name, "name")?;
        let r = corpus::rig(name)
            .ok_or_else(|| fail(RelcatStatus::InvalidInput, format!("no bundled rig named `{name}`")))?;
        put(out, RelcatRig(r))
    })
}

/// Parses a rig in the textual rig format.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_rig_parse(src: *const c_char, out: *mut *mut RelcatRig) -> RelcatStatus {
    clear(out);
    guard(|| {
        let r = rig::parse_rig(text(src, "source")?).map_err(|e| fail(RelcatStatus::InvalidInput, e.to_string()))?;
        put(out, RelcatRig(r))
    })
}

/// # Safety
/// `r` must be null or a rig handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn relcat_rig_free(r: *mut RelcatRig) {
    if !r.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(r))));
    }
}

/// Classifies a rig under the division-rig collapse check.
///
/// # Safety
/// `r` must be a live rig handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_rig_collapse_verdict(r: *const RelcatRig, out: *mut RelcatCollapse) -> RelcatStatus {
    guard(|| {
        let r = handle(r, "rig")?;
        if out.is_null() {
            return Err(fail(RelcatStatus::NullPointer, "output pointer is null"));
        }
        let v =
            r.0.division_collapse_check()
                .map_err(|e| fail(RelcatStatus::InvalidInput, e.to_string()))?;
        *out = match v {
            CollapseVerdict::NotDivisionRig { .. } => RelcatCollapse::NotDivisionRig,
            CollapseVerdict::NotInfinitary => RelcatCollapse::NotInfinitary,
            CollapseVerdict::Collapsed => RelcatCollapse::Collapsed,
            CollapseVerdict::CollapseViolated { .. } => RelcatCollapse::CollapseViolated,
        };
        Ok(RelcatStatus::Ok)
    })
}

/// Parses a relation file and returns the relation called `name`, or the
/// first relation when `name` is null.
///
/// # Safety
/// `src` must be a NUL-terminated string, `name` null or NUL-terminated,
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_parse(
    src: *const c_char,
    name: *const c_char,
    out: *mut *mut RelcatRelation,
) -> RelcatStatus {
    clear(out);
    guard(|| {
        let doc = rel::parse_relations(text(src, "source")?)?;
        let found = if name.is_null() {
            doc.relations.into_iter().next()
        } else {
            let name = text(name, "name")?;
            doc.relations.into_iter().find(|(n, _)| n == name)
        };
        let (_, r) = found.ok_or_else(|| fail(RelcatStatus::InvalidInput, "no such relation in the source"))?;
        put(out, RelcatRelation(r))
    })
}

/// # Safety
/// `r` must be null or a relation handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_free(r: *mut RelcatRelation) {
    if !r.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(r))));
    }
}

unsafe fn unary(
    r: *const RelcatRelation,
    out: *mut *mut RelcatRelation,
    f: impl FnOnce(&Relation) -> Result<Relation, Failure>,
) -> RelcatStatus {
    clear(out);
    guard(|| {
        let r = handle(r, "relation")?;
        put(out, RelcatRelation(f(&r.0)?))
    })
}

unsafe fn binary(
    a: *const RelcatRelation,
    b: *const RelcatRelation,
    out: *mut *mut RelcatRelation,
    f: impl FnOnce(&Relation, &Relation) -> Result<Relation, Failure>,
) -> RelcatStatus {
    clear(out);
    guard(|| {
        let (a, b) = (handle(a, "first operand")?, handle(b, "second operand")?);
        put(out, RelcatRelation(f(&a.0, &b.0)?))
    })
}

/// `s ∘ r`.
///
/// # Safety
/// `s` and `r` must be live relation handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_compose(
    s: *const RelcatRelation,
    r: *const RelcatRelation,
    out: *mut *mut RelcatRelation,
) -> RelcatStatus {
    binary(s, r, out, |s, r| Ok(rel::compose(s, r)?))
}

/// The converse relation.
///
/// # Safety
/// `r` must be a live relation handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_dagger(
    r: *const RelcatRelation,
    out: *mut *mut RelcatRelation,
) -> RelcatStatus {
    unary(r, out, |r| Ok(rel::dagger(r)))
}

/// `r ⊗ s` on product sets.
///
/// # Safety
/// `r` and `s` must be live relation handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_tensor(
    r: *const RelcatRelation,
    s: *const RelcatRelation,
    out: *mut *mut RelcatRelation,
) -> RelcatStatus {
    binary(r, s, out, |r, s| Ok(rel::tensor(r, s)))
}

/// Inclusion of the domain elements related to nothing.
///
/// # Safety
/// `r` must be a live relation handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_kernel(
    r: *const RelcatRelation,
    out: *mut *mut RelcatRelation,
) -> RelcatStatus {
    unary(r, out, |r| Ok(rel::kernel(r).m))
}

/// Complement of a point `I -> X`.
///
/// # Safety
/// `a` must be a live relation handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_neg(a: *const RelcatRelation, out: *mut *mut RelcatRelation) -> RelcatStatus {
    unary(a, out, |a| Ok(rel::neg(a)?))
}

/// Meet of two points of the same set.
///
/// # Safety
/// `a` and `b` must be live relation handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_meet(
    a: *const RelcatRelation,
    b: *const RelcatRelation,
    out: *mut *mut RelcatRelation,
) -> RelcatStatus {
    binary(a, b, out, |a, b| Ok(rel::meet(a, b)?))
}

/// Union of two parallel relations.
///
/// # Safety
/// `a` and `b` must be live relation handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_join(
    a: *const RelcatRelation,
    b: *const RelcatRelation,
    out: *mut *mut RelcatRelation,
) -> RelcatStatus {
    binary(a, b, out, |a, b| {
        Ok(rel::join(a.dom(), a.cod(), &[a.clone(), b.clone()])?)
    })
}

/// Trace of an endorelation: true iff it has a fixed point.
///
/// # Safety
/// `r` must be a live relation handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_trace(r: *const RelcatRelation, out: *mut bool) -> RelcatStatus {
    guard(|| {
        let r = handle(r, "relation")?;
        if out.is_null() {
            return Err(fail(RelcatStatus::NullPointer, "output pointer is null"));
        }
        *out = rel::trace(&r.0)?;
        Ok(RelcatStatus::Ok)
    })
}

/// The point `I -> X⊗Y` naming a relation `X -> Y`.
///
/// # Safety
/// `r` must be a live relation handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_breve(
    r: *const RelcatRelation,
    out: *mut *mut RelcatRelation,
) -> RelcatStatus {
    unary(r, out, |r| Ok(rel::breve(r)))
}

/// Serializes a relation in the relation file format under `name`.
///
/// # Safety
/// `r` must be a live relation handle, `name` NUL-terminated, and `out`
/// writable. Free the result with [`relcat_string_free`].
#[no_mangle]
pub unsafe extern "C" fn relcat_relation_write(
    r: *const RelcatRelation,
    name: *const c_char,
    out: *mut *mut c_char,
) -> RelcatStatus {
    clear(out);
    guard(|| {
        let r = handle(r, "relation")?;
        let name = text(name, "name")?;
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(fail(RelcatStatus::InvalidInput, "name must be one nonempty word"));
        }
        let doc = RelDocument::from_relations(vec![(name.to_string(), r.0.clone())]);
        put_string(out, rel::write_relations(&doc))
    })
}

fn run_check<M: Model>(model: &M, bound: usize, dir: Option<&Path>) -> Result<(bool, String), Failure> {
    let report = checker::run_suite(model, bound, Config::default())
        .map_err(|e| fail(RelcatStatus::InvalidInput, e.to_string()))?;
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| fail(RelcatStatus::InvalidInput, e.to_string()))?;
        for r in &report.results {
            if let Some(c) = r.verdict.counterexample() {
                let w = Witness {
                    condition: c.condition.clone(),
                    law: c.law.clone(),
                    model: report.model.clone(),
                    bound,
                    lhs: c.lhs.clone(),
                    rhs: c.rhs.clone(),
                    items: c.items.clone(),
                };
                std::fs::write(dir.join(format!("{}.witness", r.id)), w.render())
                    .map_err(|e| fail(RelcatStatus::InvalidInput, e.to_string()))?;
            }
        }
    }
    let text = report.render(|r| format!("{}.witness", r.id));
    Ok((report.all_hold(), text))
}

/// Runs the full axiom suite on objects of size at most `bound`, over
/// relations when `rig` is null and over matrices with entries in `rig`
/// otherwise. Writes the report to `report_out`; witnesses are written to
/// `witness_dir` when it is not null. Returns `RELCAT_STATUS_OK` when every
/// condition holds and `RELCAT_STATUS_PROPERTY_FAILS` otherwise.
///
/// # Safety
/// `rig` must be null or a live rig handle, `witness_dir` null or
/// NUL-terminated, and `report_out` writable.
#[no_mangle]
pub unsafe extern "C" fn relcat_check(
    rig: *const RelcatRig,
    bound: u32,
    witness_dir: *const c_char,
    report_out: *mut *mut c_char,
) -> RelcatStatus {
    clear(report_out);
    guard(|| {
        if report_out.is_null() {
            return Err(fail(RelcatStatus::NullPointer, "output pointer is null"));
        }
        let dir = if witness_dir.is_null() {
            None
        } else {
            Some(Path::new(text(witness_dir, "witness_dir")?))
        };
        let bound = bound as usize;
        let (holds, report) = match rig.as_ref() {
            None => run_check(&RelModel::new(), bound, dir)?,
            Some(r) => {
                let cat =
                    MatrixCategory::new(r.0.clone()).map_err(|e| fail(RelcatStatus::InvalidInput, e.to_string()))?;
                run_check(&cat, bound, dir)?
            }
        };
        put_string(report_out, report)?;
        if holds {
            Ok(RelcatStatus::Ok)
        } else {
            Err(fail(
                RelcatStatus::PropertyFails,
                "some conditions fail; see the report",
            ))
        }
    })
}
