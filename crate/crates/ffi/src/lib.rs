//! C interface to `elicit-core`.
//!
//! Profiles live behind an opaque [`ElicitProfile`] handle. Every query
//! returns an [`ElicitStatus`] and writes its result through an out pointer.
//! After a failure, [`elicit_last_error_message`] describes what went wrong
//! on the calling thread. Strings handed out by this library must be released
//! with [`elicit_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use elicit_core::elicitation::{
    coarse_elicitation_over, condorcet_winner_fixed, fine_elicitation_over,
    fine_sp_elicitation_over, possible_winners, CondorcetStatus,
};
use elicit_core::profile::Profile;
use elicit_core::reductions::{verify_reduction, PartitionInstance, ReductionKind};
use elicit_core::rules::{decision, Rule, TieBreak};
use elicit_core::Error;
use libc::c_char;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElicitStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    CapExceeded = 3,
    ModelMismatch = 4,
    InvalidProfile = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElicitCondorcet {
    /// The same candidate is the Condorcet winner in every completion.
    Fixed = 0,
    /// No completion has a Condorcet winner.
    None = 1,
    NotDetermined = 2,
}

/// Opaque profile handle.
pub struct ElicitProfile(Profile);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> ElicitStatus {
    match e {
        Error::Parse { .. } => ElicitStatus::ParseError,
        Error::CapExceeded { .. } | Error::TieBranchLimit(_) => ElicitStatus::CapExceeded,
        Error::ModelMismatch(_) => ElicitStatus::ModelMismatch,
        Error::InvalidProfile(_)
        | Error::Inconsistent(_)
        | Error::NotCompletableSp(_)
        | Error::Overflow => ElicitStatus::InvalidProfile,
        _ => ElicitStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> ElicitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ElicitStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            ElicitStatus::Internal
        }
    }
}

fn bad(msg: &str) -> Error {
    Error::InvalidInstance(msg.into())
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Error> {
    if s.is_null() {
        return Err(bad(&format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| bad(&format!("{what} is not UTF-8")))
}

unsafe fn profile<'a>(p: *const ElicitProfile) -> Result<&'a Profile, Error> {
    p.as_ref()
        .map(|p| &p.0)
        .ok_or_else(|| bad("profile is null"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Error> {
    if out.is_null() {
        return Err(bad("output pointer is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn rule_of(p: &Profile, rule: *const c_char) -> Result<Rule, Error> {
    Rule::parse(text(rule, "rule")?, p)
}

/// Parses a profile from its text form.
///
/// # Safety
/// `text_ptr` must be a nul-terminated string and `out` a valid pointer. On
/// success `*out` owns a handle to be released with [`elicit_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn elicit_profile_parse(
    text_ptr: *const c_char,
    out: *mut *mut ElicitProfile,
) -> ElicitStatus {
    guard(|| {
        let p = Profile::parse(text(text_ptr, "profile text")?)?;
        write(out, Box::into_raw(Box::new(ElicitProfile(p))))
    })
}

/// # Safety
/// `p` must come from [`elicit_profile_parse`] and not be freed twice. Null
/// is ignored.
#[no_mangle]
pub unsafe extern "C" fn elicit_profile_free(p: *mut ElicitProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Allows an even total weight when `strict` is false.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn elicit_profile_set_strict_odd(
    p: *mut ElicitProfile,
    strict: bool,
) -> ElicitStatus {
    guard(|| {
        let p = p.as_mut().ok_or_else(|| bad("profile is null"))?;
        p.0.set_strict_odd(strict);
        Ok(())
    })
}

/// Number of candidates, or 0 for a null handle.
///
/// # Safety
/// `p` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn elicit_profile_num_candidates(p: *const ElicitProfile) -> usize {
    p.as_ref().map_or(0, |p| p.0.num_candidates())
}

/// Label of candidate `index`, or null if out of range. Free the result with
/// [`elicit_string_free`].
///
/// # Safety
/// `p` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn elicit_candidate_label(
    p: *const ElicitProfile,
    index: usize,
) -> *mut c_char {
    match p.as_ref() {
        Some(p) if index < p.0.num_candidates() => {
            let label = p.0.label(elicit_core::profile::Candidate(index));
            CString::new(label).map_or(ptr::null_mut(), CString::into_raw)
        }
        _ => ptr::null_mut(),
    }
}

/// Winner of a complete profile. `tie_break` is `lex`, `favor:X` or
/// `against:X`; null means `lex`.
///
/// # Safety
/// `p` must be a live handle, the strings nul-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn elicit_winner(
    p: *const ElicitProfile,
    rule: *const c_char,
    tie_break: *const c_char,
    out: *mut usize,
) -> ElicitStatus {
    guard(|| {
        let p = profile(p)?;
        let rule = rule_of(p, rule)?;
        let tb = if tie_break.is_null() {
            TieBreak::Lexicographic
        } else {
            TieBreak::parse(text(tie_break, "tie-break")?, p)?
        };
        write(out, decision(&rule, p)?.winner(tb).0)
    })
}

/// Possible winners as a bit mask over candidate indices.
///
/// # Safety
/// As for [`elicit_winner`].
#[no_mangle]
pub unsafe extern "C" fn elicit_possible_winners(
    p: *const ElicitProfile,
    rule: *const c_char,
    cap: u64,
    out_mask: *mut u64,
) -> ElicitStatus {
    guard(|| {
        let p = profile(p)?;
        write(out_mask, possible_winners(&rule_of(p, rule)?, p, cap)?.0)
    })
}

/// Whether the winner is fixed over all completions of partial ballots and
/// unknown weight.
///
/// # Safety
/// As for [`elicit_winner`].
#[no_mangle]
pub unsafe extern "C" fn elicit_fine_over(
    p: *const ElicitProfile,
    rule: *const c_char,
    cap: u64,
    out: *mut bool,
) -> ElicitStatus {
    guard(|| {
        let p = profile(p)?;
        write(out, fine_elicitation_over(&rule_of(p, rule)?, p, cap)?)
    })
}

/// Whether the winner is fixed however the unknown weight votes.
///
/// # Safety
/// As for [`elicit_winner`].
#[no_mangle]
pub unsafe extern "C" fn elicit_coarse_over(
    p: *const ElicitProfile,
    rule: *const c_char,
    cap: u64,
    out: *mut bool,
) -> ElicitStatus {
    guard(|| {
        let p = profile(p)?;
        write(out, coarse_elicitation_over(&rule_of(p, rule)?, p, cap)?)
    })
}

/// Fine elicitation over single-peaked completions along the profile's axis.
///
/// # Safety
/// As for [`elicit_winner`].
#[no_mangle]
pub unsafe extern "C" fn elicit_fine_sp_over(
    p: *const ElicitProfile,
    rule: *const c_char,
    cap: u64,
    out: *mut bool,
) -> ElicitStatus {
    guard(|| {
        let p = profile(p)?;
        let axis = p.axis().ok_or_else(|| bad("profile has no axis"))?;
        write(
            out,
            fine_sp_elicitation_over(&rule_of(p, rule)?, p, axis, cap)?,
        )
    })
}

/// Whether committed weight settles the Condorcet winner. `out_winner` is
/// written only for [`ElicitCondorcet::Fixed`] and may be null.
///
/// # Safety
/// `p` must be a live handle, `out_status` valid, `out_winner` valid or null.
#[no_mangle]
pub unsafe extern "C" fn elicit_condorcet_fixed(
    p: *const ElicitProfile,
    out_status: *mut ElicitCondorcet,
    out_winner: *mut usize,
) -> ElicitStatus {
    guard(|| {
        let status = condorcet_winner_fixed(profile(p)?)?;
        match status {
            CondorcetStatus::True(c) => {
                if !out_winner.is_null() {
                    out_winner.write(c.0);
                }
                write(out_status, ElicitCondorcet::Fixed)
            }
            CondorcetStatus::False => write(out_status, ElicitCondorcet::None),
            CondorcetStatus::NotDetermined => write(out_status, ElicitCondorcet::NotDetermined),
        }
    })
}

/// Builds the `kind` construction for `bag` (e.g. `"1,1,2"`) and reports
/// whether its answer matches the partition oracle.
///
/// # Safety
/// The strings must be nul-terminated and `out_holds` valid.
#[no_mangle]
pub unsafe extern "C" fn elicit_verify_reduction(
    kind: *const c_char,
    bag: *const c_char,
    cap: u64,
    out_holds: *mut bool,
) -> ElicitStatus {
    guard(|| {
        let kind: ReductionKind = text(kind, "kind")?.parse()?;
        let bag: PartitionInstance = text(bag, "bag")?.parse()?;
        write(out_holds, verify_reduction(kind, &bag, cap)?.holds())
    })
}

/// Message for the last failure on this thread, or null. Free the result
/// with [`elicit_string_free`].
#[no_mangle]
pub extern "C" fn elicit_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |m| m.clone().into_raw())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn elicit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
