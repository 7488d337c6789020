//! C ABI over the orbifold-fusion library.
//!
//! Registries and tables cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function. Every fallible call
//! returns an [`OfStatus`]; on failure the message is available from
//! [`of_last_error_message`] until the next call on the same thread.
//! Strings returned through out-pointers are owned by the caller and must be
//! released with [`of_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use orbifold_fusion::config::{parse_scalar, GroupConfig, Registry};
use orbifold_fusion::expr::parse_vector;
use orbifold_fusion::singular::{canonical_vector, is_singular};
use orbifold_fusion::table::{build_table, emit, check_symmetries, Format, FusionTable, Verdict};
use orbifold_fusion::zhu::psi;
use orbifold_fusion::ModuleParams;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Parse = 4,
    Computation = 5,
    NotFound = 6,
    /// The bounds on a fusion rule disagree, so no single value exists.
    Undetermined = 7,
    Panic = 8,
}

/// Output formats of [`of_table_emit`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OfFormat {
    Text = 0,
    Records = 1,
}

/// A loaded module registry together with its group data.
pub struct OfRegistry {
    registry: Registry,
    group: GroupConfig,
}

/// A computed fusion table.
pub struct OfTable {
    table: FusionTable,
    symmetry_violations: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(OfStatus, String);

impl Failure {
    fn new(status: OfStatus, e: impl ToString) -> Self {
        Failure(status, e.to_string())
    }
}

fn set_error(message: Option<String>) {
    let c = message.map(|m| CString::new(m.replace('\0', " ")).expect("interior NULs removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            OfStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(Some(message));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            OfStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(OfStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::new(OfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::new(OfStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(OfStatus::NullPointer, format!("{what} is NULL")))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs removed").into_raw()
}

fn params(h: &str, k: &str) -> Result<ModuleParams, Failure> {
    let h = parse_scalar("h", h).map_err(|e| Failure::new(OfStatus::Parse, e))?;
    let k = parse_scalar("k", k).map_err(|e| Failure::new(OfStatus::Parse, e))?;
    Ok(ModuleParams::new(h, k))
}

/// Message of the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn of_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn of_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Load a registry file and the group data it names.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn of_registry_load(path: *const c_char, out_registry: *mut *mut OfRegistry) -> OfStatus {
    guard(|| {
        let path = text(path, "path")?;
        let slot = out(out_registry, "out_registry")?;
        let registry = Registry::load(Path::new(path)).map_err(|e| Failure::new(OfStatus::Config, e))?;
        let gpath = registry
            .group_path
            .clone()
            .ok_or_else(|| Failure::new(OfStatus::Config, "the registry names no group configuration"))?;
        let group = GroupConfig::load(&gpath).map_err(|e| Failure::new(OfStatus::Config, e))?;
        *slot = Box::into_raw(Box::new(OfRegistry { registry, group }));
        Ok(())
    })
}

/// # Safety
/// `registry` must come from [`of_registry_load`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn of_registry_free(registry: *mut OfRegistry) {
    if !registry.is_null() {
        drop(Box::from_raw(registry));
    }
}

/// Number of modules in the registry.
///
/// # Safety
/// `registry` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn of_registry_module_count(registry: *const OfRegistry, out_count: *mut usize) -> OfStatus {
    guard(|| {
        *out(out_count, "out_count")? = handle(registry, "registry")?.registry.modules.len();
        Ok(())
    })
}

/// Name of the module at `index`, in registry order.
///
/// # Safety
/// `registry` must be a live handle and `out_name` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn of_registry_module_name(
    registry: *const OfRegistry,
    index: usize,
    out_name: *mut *mut c_char,
) -> OfStatus {
    guard(|| {
        let reg = &handle(registry, "registry")?.registry;
        let slot = out(out_name, "out_name")?;
        let m = reg.modules.get(index).ok_or_else(|| Failure::new(OfStatus::NotFound, format!("no module {index}")))?;
        *slot = owned_string(m.name.clone());
        Ok(())
    })
}

/// The `(h, k)` recovered for a module, as scalar strings.
///
/// # Safety
/// `registry` must be a live handle, `name` a NUL-terminated string and the
/// out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn of_registry_module_params(
    registry: *const OfRegistry,
    name: *const c_char,
    out_h: *mut *mut c_char,
    out_k: *mut *mut c_char,
) -> OfStatus {
    guard(|| {
        let reg = &handle(registry, "registry")?.registry;
        let name = text(name, "name")?;
        let (h, k) = (out(out_h, "out_h")?, out(out_k, "out_k")?);
        let m = reg.get(name).map_err(|e| Failure::new(OfStatus::NotFound, e))?;
        *h = owned_string(m.params.h.to_string());
        *k = owned_string(m.params.k.to_string());
        Ok(())
    })
}

/// Compute bounds for every triple of registry modules.
///
/// # Safety
/// `registry` must be a live handle and `out_table` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn of_table_build(registry: *const OfRegistry, out_table: *mut *mut OfTable) -> OfStatus {
    guard(|| {
        let r = handle(registry, "registry")?;
        let slot = out(out_table, "out_table")?;
        let table = build_table(&r.registry, &r.group, &[]);
        if let Some(e) = table.errors.first() {
            return Err(Failure::new(OfStatus::Computation, format!("N({}; {}, {}): {}", e.l3, e.l1, e.l2, e.message)));
        }
        let sym = check_symmetries(&table, &r.registry).map_err(|e| Failure::new(OfStatus::Config, e))?;
        *slot = Box::into_raw(Box::new(OfTable { table, symmetry_violations: sym.violations.len() }));
        Ok(())
    })
}

/// # Safety
/// `table` must come from [`of_table_build`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn of_table_free(table: *mut OfTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Lower and upper bound for `N(l3; l1, l2)`.
///
/// # Safety
/// `table` must be a live handle, names NUL-terminated and out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn of_table_bounds(
    table: *const OfTable,
    l1: *const c_char,
    l2: *const c_char,
    l3: *const c_char,
    out_lower: *mut usize,
    out_upper: *mut usize,
) -> OfStatus {
    guard(|| {
        let t = &handle(table, "table")?.table;
        let (l1, l2, l3) = (text(l1, "l1")?, text(l2, "l2")?, text(l3, "l3")?);
        let (lo, hi) = (out(out_lower, "out_lower")?, out(out_upper, "out_upper")?);
        let r = t.get(l1, l2, l3).ok_or_else(|| Failure::new(OfStatus::NotFound, format!("no entry N({l3}; {l1}, {l2})")))?;
        *lo = r.lower;
        *hi = r.upper;
        Ok(())
    })
}

/// The fusion rule `N(l3; l1, l2)`; [`OfStatus::Undetermined`] when the
/// bounds disagree.
///
/// # Safety
/// `table` must be a live handle, names NUL-terminated and `out_value` valid.
#[no_mangle]
pub unsafe extern "C" fn of_table_multiplicity(
    table: *const OfTable,
    l1: *const c_char,
    l2: *const c_char,
    l3: *const c_char,
    out_value: *mut usize,
) -> OfStatus {
    guard(|| {
        let t = &handle(table, "table")?.table;
        let (l1, l2, l3) = (text(l1, "l1")?, text(l2, "l2")?, text(l3, "l3")?);
        let slot = out(out_value, "out_value")?;
        let r = t.get(l1, l2, l3).ok_or_else(|| Failure::new(OfStatus::NotFound, format!("no entry N({l3}; {l1}, {l2})")))?;
        if r.verdict != Verdict::Determined {
            return Err(Failure::new(OfStatus::Undetermined, format!("N({l3}; {l1}, {l2}) lies in {}..{}", r.lower, r.upper)));
        }
        *slot = r.lower;
        Ok(())
    })
}

/// Number of triples with contradictory bounds plus the number of failed
/// symmetry identities; zero for consistent inputs.
///
/// # Safety
/// `table` must be a live handle and `out_count` valid.
#[no_mangle]
pub unsafe extern "C" fn of_table_inconsistencies(table: *const OfTable, out_count: *mut usize) -> OfStatus {
    guard(|| {
        let t = handle(table, "table")?;
        *out(out_count, "out_count")? = t.table.count(Verdict::Violated) + t.symmetry_violations;
        Ok(())
    })
}

/// The table rendered as text or as CSV records.
///
/// # Safety
/// `table` must be a live handle and `out_text` valid.
#[no_mangle]
pub unsafe extern "C" fn of_table_emit(table: *const OfTable, format: OfFormat, out_text: *mut *mut c_char) -> OfStatus {
    guard(|| {
        let t = &handle(table, "table")?.table;
        let slot = out(out_text, "out_text")?;
        let format = match format {
            OfFormat::Text => Format::Text,
            OfFormat::Records => Format::Records,
        };
        *slot = owned_string(emit(t, format));
        Ok(())
    })
}

/// `ψ(h₂, k₂, h₃, k₃)` from scalar strings such as `"3/5"` or `"-2*s3"`.
///
/// # Safety
/// All inputs must be NUL-terminated strings and `out_value` valid.
#[no_mangle]
pub unsafe extern "C" fn of_psi(
    h2: *const c_char,
    k2: *const c_char,
    h3: *const c_char,
    k3: *const c_char,
    out_value: *mut *mut c_char,
) -> OfStatus {
    guard(|| {
        let p2 = params(text(h2, "h2")?, text(k2, "k2")?)?;
        let p3 = params(text(h3, "h3")?, text(k3, "k3")?)?;
        let slot = out(out_value, "out_value")?;
        *slot = owned_string(psi(&p2.h, &p2.k, &p3.h, &p3.k).to_string());
        Ok(())
    })
}

/// Whether `vector`, written in mode syntax such as `"J(-1)^2 - 30*L(-2)"`,
/// is singular in the module with lowest weight `h` and `J(0)`-eigenvalue `k`.
///
/// # Safety
/// All inputs must be NUL-terminated strings and `out_singular` valid.
#[no_mangle]
pub unsafe extern "C" fn of_is_singular(
    vector: *const c_char,
    h: *const c_char,
    k: *const c_char,
    out_singular: *mut bool,
) -> OfStatus {
    guard(|| {
        let terms = parse_vector(text(vector, "vector")?).map_err(|e| Failure::new(OfStatus::Parse, e))?;
        let p = params(text(h, "h")?, text(k, "k")?)?;
        let slot = out(out_singular, "out_singular")?;
        let v = canonical_vector(&terms, &p);
        *slot = is_singular(&v, &p).map_err(|e| Failure::new(OfStatus::Computation, e))?.is_singular;
        Ok(())
    })
}
