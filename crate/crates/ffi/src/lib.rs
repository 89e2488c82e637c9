//! C ABI over the `tnf` crate.
//!
//! Objects cross the boundary as opaque handles created by the parse and enumerate
//! constructors and released by the matching `*_free`. Every fallible
//! call returns a [`TnfStatus`]; on failure [`tnf_last_error_message`] holds a
//! description for the calling thread. Strings returned through `char **`
//! out-parameters are owned by the caller and released with
//! [`tnf_string_free`]. Weights are exact rationals throughout.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tnf::lattice::{enumerate_subgroups, SubgroupLattice};
use tnf::measures::{self, AlphaParams, DegenerateTag};
use tnf::numeric::format_rational;
use tnf::{Error, Permutation, Rational, Weight};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TnfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    InvalidAlpha = 5,
    SizeLimit = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TnfDegenerate {
    None = 0,
    Identity = 1,
    Alternating = 2,
    Regular = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct TnfClassification {
    pub tnf: bool,
    pub degenerate: u32,
    pub atomic: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct TnfEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Validated weights `α`.
pub struct TnfAlpha(AlphaParams<Rational>);

/// A finitely supported permutation of `{1, 2, …}`.
pub struct TnfPermutation(Permutation);

/// Every subgroup of a small symmetric group.
pub struct TnfLattice(SubgroupLattice);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> TnfStatus {
    match e {
        Error::Parse(_) | Error::Usage(_) | Error::Json(_) | Error::Csv(_) => TnfStatus::Parse,
        Error::Domain(_) | Error::WindowEscape { .. } | Error::InvalidAction(_) | Error::Io(_) => TnfStatus::Domain,
        Error::InvalidAlpha(_) => TnfStatus::InvalidAlpha,
        Error::SizeLimit(_) => TnfStatus::SizeLimit,
        Error::Internal(_) => TnfStatus::Internal,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (TnfStatus, String)>) -> TnfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TnfStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside tnf");
            TnfStatus::Panic
        }
    }
}

fn lift<T>(r: tnf::Result<T>) -> Result<T, (TnfStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, (TnfStatus, String)> {
    p.as_ref().ok_or_else(|| (TnfStatus::NullArgument, format!("{name} is null")))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, (TnfStatus, String)> {
    if p.is_null() {
        return Err((TnfStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (TnfStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

unsafe fn write_out<T>(out: *mut T, value: T) {
    if !out.is_null() {
        *out = value;
    }
}

unsafe fn write_rational(r: &Rational, out_exact: *mut *mut c_char, out_value: *mut f64) {
    if !out_exact.is_null() {
        *out_exact = into_c_string(format_rational(r));
    }
    write_out(out_value, r.to_f64());
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tnf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tnf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"weights": {"1": "1/2", ...}}` or the bare map.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_alpha_from_json(json: *const c_char, out: *mut *mut TnfAlpha) -> TnfStatus {
    guard(|| {
        if out.is_null() {
            return Err((TnfStatus::NullArgument, "out is null".into()));
        }
        let alpha = lift(AlphaParams::from_json_str(read_str(json, "json")?))?;
        *out = Box::into_raw(Box::new(TnfAlpha(alpha)));
        Ok(())
    })
}

/// # Safety
/// `alpha` must come from [`tnf_alpha_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn tnf_alpha_free(alpha: *mut TnfAlpha) {
    if !alpha.is_null() {
        drop(Box::from_raw(alpha));
    }
}

/// Canonical JSON form of `alpha`.
///
/// # Safety
/// `alpha` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_alpha_to_json(alpha: *const TnfAlpha, out: *mut *mut c_char) -> TnfStatus {
    guard(|| {
        let a = borrow(alpha, "alpha")?;
        if out.is_null() {
            return Err((TnfStatus::NullArgument, "out is null".into()));
        }
        *out = into_c_string(a.0.to_json().to_string());
        Ok(())
    })
}

/// Parses cycle notation such as `"(1 2)(3 4 5)"`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_permutation_parse(text: *const c_char, out: *mut *mut TnfPermutation) -> TnfStatus {
    guard(|| {
        if out.is_null() {
            return Err((TnfStatus::NullArgument, "out is null".into()));
        }
        let p: Permutation = lift(read_str(text, "text")?.parse())?;
        *out = Box::into_raw(Box::new(TnfPermutation(p)));
        Ok(())
    })
}

/// # Safety
/// `perm` must come from [`tnf_permutation_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn tnf_permutation_free(perm: *mut TnfPermutation) {
    if !perm.is_null() {
        drop(Box::from_raw(perm));
    }
}

/// Canonical cycle notation of `perm`.
///
/// # Safety
/// `perm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_permutation_to_string(perm: *const TnfPermutation, out: *mut *mut c_char) -> TnfStatus {
    guard(|| {
        let p = borrow(perm, "perm")?;
        if out.is_null() {
            return Err((TnfStatus::NullArgument, "out is null".into()));
        }
        *out = into_c_string(p.0.to_string());
        Ok(())
    })
}

unsafe fn rational_query(
    alpha: *const TnfAlpha,
    perm: *const TnfPermutation,
    out_exact: *mut *mut c_char,
    out_value: *mut f64,
    f: fn(&AlphaParams<Rational>, &Permutation) -> Rational,
) -> TnfStatus {
    guard(|| {
        let (a, p) = (borrow(alpha, "alpha")?, borrow(perm, "perm")?);
        write_rational(&f(&a.0, &p.0), out_exact, out_value);
        Ok(())
    })
}

/// `∏ p_k(α)^{c_k(g)}` with `p_k` the Newton sum over nonzero indices. Either
/// out-parameter may be null; `out_exact` receives `"p/q"`.
///
/// # Safety
/// Handles must be live; non-null out-parameters must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_fixed_measure_paper(
    alpha: *const TnfAlpha,
    perm: *const TnfPermutation,
    out_exact: *mut *mut c_char,
    out_value: *mut f64,
) -> TnfStatus {
    rational_query(alpha, perm, out_exact, out_value, measures::fixed_measure_paper)
}

/// `∏ (p_k(α) + α_0^k)^{c_k(g)}`.
///
/// # Safety
/// As for [`tnf_fixed_measure_paper`].
#[no_mangle]
pub unsafe extern "C" fn tnf_fixed_measure_full(
    alpha: *const TnfAlpha,
    perm: *const TnfPermutation,
    out_exact: *mut *mut c_char,
    out_value: *mut f64,
) -> TnfStatus {
    rational_query(alpha, perm, out_exact, out_value, measures::fixed_measure_full)
}

/// Character value from super-Newton sums.
///
/// # Safety
/// As for [`tnf_fixed_measure_paper`].
#[no_mangle]
pub unsafe extern "C" fn tnf_thoma_character(
    alpha: *const TnfAlpha,
    perm: *const TnfPermutation,
    out_exact: *mut *mut c_char,
    out_value: *mut f64,
) -> TnfStatus {
    rational_query(alpha, perm, out_exact, out_value, measures::thoma_character)
}

/// Seeded Monte Carlo estimate of the fixed-point probability.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_mc_fixed_probability(
    alpha: *const TnfAlpha,
    perm: *const TnfPermutation,
    samples: u64,
    seed: u64,
    out: *mut TnfEstimate,
) -> TnfStatus {
    guard(|| {
        let (a, p) = (borrow(alpha, "alpha")?, borrow(perm, "perm")?);
        if out.is_null() {
            return Err((TnfStatus::NullArgument, "out is null".into()));
        }
        let r = lift(measures::mc_fixed_probability(&a.0, &p.0, samples, seed))?;
        *out = TnfEstimate {
            estimate: r.mc_estimate,
            stderr: r.mc_stderr,
            samples,
        };
        Ok(())
    })
}

/// TNF verdict of `ν_α`; `degenerate` holds a [`TnfDegenerate`] value.
///
/// # Safety
/// `alpha` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_classify_nu(alpha: *const TnfAlpha, out: *mut TnfClassification) -> TnfStatus {
    guard(|| {
        let a = borrow(alpha, "alpha")?;
        if out.is_null() {
            return Err((TnfStatus::NullArgument, "out is null".into()));
        }
        let c = measures::classify_nu(&a.0);
        let degenerate = match c.degenerate {
            DegenerateTag::None => TnfDegenerate::None,
            DegenerateTag::Identity => TnfDegenerate::Identity,
            DegenerateTag::Alternating => TnfDegenerate::Alternating,
            DegenerateTag::Regular => TnfDegenerate::Regular,
        };
        *out = TnfClassification {
            tnf: c.is_tnf(),
            degenerate: degenerate as u32,
            atomic: c.atomic,
        };
        Ok(())
    })
}

/// TNF verdict of the product action on sequences; the symmetry count is
/// written in decimal to `out_symmetry` when non-null.
///
/// # Safety
/// `alpha` must be live; non-null out-parameters must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_classify_sequence_action(
    alpha: *const TnfAlpha,
    out_tnf: *mut bool,
    out_symmetry: *mut *mut c_char,
) -> TnfStatus {
    guard(|| {
        let a = borrow(alpha, "alpha")?;
        let c = measures::classify_sequence_action(&a.0);
        write_out(out_tnf, c.is_tnf());
        if !out_symmetry.is_null() {
            *out_symmetry = into_c_string(c.symmetry.to_string());
        }
        Ok(())
    })
}

/// Exact overlap of a fixed pair with a uniform perfect matching of `2m` points.
///
/// # Safety
/// Non-null out-parameters must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_part_l_overlap(
    l: usize,
    m: usize,
    out_exact: *mut *mut c_char,
    out_value: *mut f64,
) -> TnfStatus {
    guard(|| {
        let r = lift(measures::part_l_overlap(l, m))?;
        write_rational(&r, out_exact, out_value);
        Ok(())
    })
}

/// Enumerates the subgroups of `S_n` for `1 ≤ n ≤ 5`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_lattice_enumerate(n: usize, out: *mut *mut TnfLattice) -> TnfStatus {
    guard(|| {
        if out.is_null() {
            return Err((TnfStatus::NullArgument, "out is null".into()));
        }
        let l = lift(enumerate_subgroups(n))?;
        *out = Box::into_raw(Box::new(TnfLattice(l)));
        Ok(())
    })
}

/// # Safety
/// `lattice` must come from [`tnf_lattice_enumerate`] or be null.
#[no_mangle]
pub unsafe extern "C" fn tnf_lattice_free(lattice: *mut TnfLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Number of subgroups; 0 for a null handle.
///
/// # Safety
/// `lattice` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn tnf_lattice_len(lattice: *const TnfLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.len())
}

/// Number of conjugacy classes of subgroups; 0 for a null handle.
///
/// # Safety
/// `lattice` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn tnf_lattice_class_count(lattice: *const TnfLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.conjugacy_classes().len())
}

unsafe fn lattice_query<T>(
    lattice: *const TnfLattice,
    index: usize,
    out: *mut T,
    f: impl FnOnce(&SubgroupLattice, usize) -> T,
) -> TnfStatus {
    guard(|| {
        let l = borrow(lattice, "lattice")?;
        if index >= l.0.len() {
            return Err((TnfStatus::Domain, format!("subgroup index {index} out of range 0..{}", l.0.len())));
        }
        if out.is_null() {
            return Err((TnfStatus::NullArgument, "out is null".into()));
        }
        *out = f(&l.0, index);
        Ok(())
    })
}

/// Order of subgroup `index`.
///
/// # Safety
/// `lattice` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_lattice_order(lattice: *const TnfLattice, index: usize, out: *mut usize) -> TnfStatus {
    lattice_query(lattice, index, out, |l, i| l.order(i))
}

/// Index of the normalizer of subgroup `index`.
///
/// # Safety
/// `lattice` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_lattice_normalizer(lattice: *const TnfLattice, index: usize, out: *mut usize) -> TnfStatus {
    lattice_query(lattice, index, out, |l, i| l.normalizer(i))
}

/// Whether subgroup `index` equals its normalizer.
///
/// # Safety
/// `lattice` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_lattice_is_self_normalizing(
    lattice: *const TnfLattice,
    index: usize,
    out: *mut bool,
) -> TnfStatus {
    lattice_query(lattice, index, out, |l, i| l.is_self_normalizing(i))
}

/// Whether the action on cosets of subgroup `index` is totally nonfree.
///
/// # Safety
/// `lattice` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_lattice_transitive_tnf(
    lattice: *const TnfLattice,
    index: usize,
    out: *mut bool,
) -> TnfStatus {
    lattice_query(lattice, index, out, tnf::lattice::check_transitive_tnf)
}

/// Subgroup table as JSON.
///
/// # Safety
/// `lattice` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tnf_lattice_to_json(lattice: *const TnfLattice, out: *mut *mut c_char) -> TnfStatus {
    guard(|| {
        let l = borrow(lattice, "lattice")?;
        if out.is_null() {
            return Err((TnfStatus::NullArgument, "out is null".into()));
        }
        *out = into_c_string(l.0.to_json().to_string());
        Ok(())
    })
}
