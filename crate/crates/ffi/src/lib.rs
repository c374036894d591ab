//! C ABI over the telecloning simulator.
//!
//! Every fallible function returns a [`TcStatus`] and writes its result
//! through an out pointer. On failure, [`tc_last_error_message`] describes
//! the most recent error on the calling thread. Channels are opaque and
//! must be released with [`tc_channel_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use telecloning::analysis::{closed_fidelity, man, p_kernel, ScenarioConfig};
use telecloning::entanglement::{log_negativity, Bipartition};
use telecloning::measurement::AcceptanceMask;
use telecloning::protocol::ChannelState;
use telecloning::states::{receiver_name, DisentangleParams};
use telecloning::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    NotPsd = 4,
    Degenerate = 5,
    Exhausted = 6,
    Panic = 7,
}

/// Shared resource between rounds.
pub struct TcChannel {
    inner: ChannelState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TcStatus {
    match e {
        Error::UnknownSlot(_) | Error::Shape(_) | Error::Validation(_) => TcStatus::InvalidArgument,
        Error::Domain(_) => TcStatus::Domain,
        Error::NotPsd(_) => TcStatus::NotPsd,
        Error::Degenerate(_) => TcStatus::Degenerate,
        Error::ProtocolExhausted => TcStatus::Exhausted,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            TcStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            TcStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn get<'a>(p: *const TcChannel) -> Result<&'a TcChannel, Fail> {
    p.as_ref().ok_or(Fail::Null("channel"))
}

unsafe fn slice<'a, T>(p: *const T, n: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn names(p: *const c_char, what: &'static str) -> Result<Vec<String>, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| Fail::Lib(Error::Validation(format!("{what} is not UTF-8"))))?;
    Ok(s.split(',').map(|n| n.trim().to_owned()).filter(|n| !n.is_empty()).collect())
}

fn boxed(state: ChannelState) -> *mut TcChannel {
    Box::into_raw(Box::new(TcChannel { inner: state }))
}

/// Fresh optimal channel for `receivers` receivers.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_channel_new_optimal(receivers: usize, out_channel: *mut *mut TcChannel) -> TcStatus {
    guard(|| {
        let slot = out(out_channel, "out_channel")?;
        *slot = boxed(ChannelState::fresh(receivers)?);
        Ok(())
    })
}

/// Fresh channel built from a disentangled resource. `eta_c` holds one
/// value per receiver.
///
/// # Safety
/// `eta_c` must point to `receivers` doubles; `out_channel` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_channel_new_disentangled(
    eta_p: f64,
    eta_a: f64,
    eta_c: *const f64,
    receivers: usize,
    out_channel: *mut *mut TcChannel,
) -> TcStatus {
    guard(|| {
        let slot = out(out_channel, "out_channel")?;
        let params = DisentangleParams::new(eta_p, eta_a, slice(eta_c, receivers, "eta_c")?.to_vec())?;
        *slot = boxed(ChannelState::from_params(&params)?);
        Ok(())
    })
}

/// Run one round at sharpness `lambda`. `accept` has one entry per receiver
/// still present; accepting receivers leave the channel.
///
/// # Safety
/// `channel` must come from a constructor here; `accept` must point to `n` bools.
#[no_mangle]
pub unsafe extern "C" fn tc_channel_recycle(
    channel: *mut TcChannel,
    lambda: f64,
    accept: *const bool,
    n: usize,
) -> TcStatus {
    guard(|| {
        let ch = channel.as_mut().ok_or(Fail::Null("channel"))?;
        let mask = AcceptanceMask::new(slice(accept, n, "accept")?.to_vec());
        ch.inner = ch.inner.recycle(lambda, &mask)?;
        Ok(())
    })
}

/// Receivers still attached.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_channel_receiver_count(channel: *const TcChannel, out_count: *mut usize) -> TcStatus {
    guard(|| {
        *out(out_count, "out_count")? = get(channel)?.inner.receivers().len();
        Ok(())
    })
}

/// Rounds completed so far.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_channel_round(channel: *const TcChannel, out_round: *mut usize) -> TcStatus {
    guard(|| {
        *out(out_round, "out_round")? = get(channel)?.inner.round_index();
        Ok(())
    })
}

/// Average fidelity of receiver `C{receiver}` (1-based) if the next round
/// runs at `lambda`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_channel_avg_fidelity(
    channel: *const TcChannel,
    lambda: f64,
    receiver: usize,
    out_fidelity: *mut f64,
) -> TcStatus {
    guard(|| {
        let slot = out(out_fidelity, "out_fidelity")?;
        *slot = get(channel)?.inner.avg_fidelity(lambda, &receiver_name(receiver))?;
        Ok(())
    })
}

/// Logarithmic negativity between two groups of slots, each a
/// comma-separated list of names such as `"P"` and `"A1,C1,C2"`. Slots in
/// neither group are traced out.
///
/// # Safety
/// Strings must be NUL-terminated; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_channel_log_negativity(
    channel: *const TcChannel,
    side_a: *const c_char,
    side_b: *const c_char,
    out_ln: *mut f64,
) -> TcStatus {
    guard(|| {
        let slot = out(out_ln, "out_ln")?;
        let rho = get(channel)?.inner.rho();
        let bip = Bipartition::explicit(rho, &names(side_a, "side_a")?, &names(side_b, "side_b")?)?;
        *slot = log_negativity(rho, &bip)?;
        Ok(())
    })
}

/// Release a channel. Null is ignored.
///
/// # Safety
/// `channel` must come from a constructor here and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tc_channel_free(channel: *mut TcChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// `P(λ)`, the per-round attenuation of the fidelity prefactor.
///
/// # Safety
/// `out_value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_p_kernel(lambda: f64, out_value: *mut f64) -> TcStatus {
    guard(|| {
        *out(out_value, "out_value")? = p_kernel(lambda)?;
        Ok(())
    })
}

/// Closed-form fidelity of round `n` for the optimal channel, all earlier
/// rounds refused.
///
/// # Safety
/// `lambdas` must point to `n` doubles; `out_fidelity` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tc_closed_fidelity(
    receivers: usize,
    lambdas: *const f64,
    n: usize,
    out_fidelity: *mut f64,
) -> TcStatus {
    guard(|| {
        let slot = out(out_fidelity, "out_fidelity")?;
        *slot = closed_fidelity(receivers, slice(lambdas, n, "lambdas")?)?;
        Ok(())
    })
}

/// Maximal attempting number at fidelity floor `f_min`. `eta_p` and `eta_c`
/// (applied to every receiver) are 1 for the optimal state.
///
/// # Safety
/// `out_man` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_man(receivers: usize, f_min: f64, eta_p: f64, eta_c: f64, out_man: *mut usize) -> TcStatus {
    guard(|| {
        let slot = out(out_man, "out_man")?;
        let etas = DisentangleParams::new(eta_p, 1.0, vec![eta_c; receivers])?;
        *slot = man(&ScenarioConfig { etas, f_min })?.man;
        Ok(())
    })
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
