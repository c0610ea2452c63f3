//! C ABI for `homgroup`.
//!
//! Conventions:
//! * Every fallible function returns an [`HgStatus`]; on failure a message is
//!   available from [`hg_last_error`] until the next failing call on the same
//!   thread.
//! * Objects are opaque handles created by `hg_*_new`/`hg_*_generate`/`hg_*_parse`
//!   and released with the matching `hg_*_free`.
//! * Strings returned through `char **out` are owned by the caller and must be
//!   released with [`hg_string_free`].
//! * Randomized functions take an explicit seed; equal seeds give equal output.
//! * Panics never cross the boundary; they are reported as `HG_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use homgroup::barrington::compile_barrington;
use homgroup::circuit::{parse_circuit, Circuit};
use homgroup::cyclic::{
    decrypt_cyclic, encrypt_cyclic, keygen_cyclic, mult_ciphertexts, CyclicCiphertext,
    CyclicPublicKey, CyclicSecretKey,
};
use homgroup::encsim::protocol_encrypted_circuit;
use homgroup::freeprod::GWord;
use homgroup::general::{
    decrypt_general, encrypt_general, is_cyclic_key_text, keygen_general, mult_ciphertexts_general,
    GeneralKeyPair, GeneralPublicKey, GeneralSecretKey,
};
use homgroup::group::builtin;
use homgroup::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HgStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed key, ciphertext, circuit or program text.
    Parse = 3,
    /// Key generation, encryption or decryption failed.
    Crypto = 4,
    /// Unknown group or element, or mismatched groups.
    Group = 5,
    /// Circuit evaluation or compilation failed.
    Circuit = 6,
    /// The operation needs a secret key the handle does not hold.
    MissingSecret = 7,
    /// Internal error; the library caught a panic.
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(HgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) | Error::Syntax { .. } | Error::MalformedWord(_) | Error::Io(_) => {
                HgStatus::Parse
            }
            Error::UndefinedWire { .. }
            | Error::DuplicateWire { .. }
            | Error::NoOutput
            | Error::ArityMismatch { .. }
            | Error::SolvableGroup
            | Error::NoCommutatorPair
            | Error::DepthExceeded { .. }
            | Error::UnexpectedValue(_) => HgStatus::Circuit,
            Error::BadTable
            | Error::NotLatinSquare
            | Error::NoIdentity
            | Error::NoInverse(_)
            | Error::NotAssociative(..)
            | Error::TooLarge(_)
            | Error::UnknownElement(_)
            | Error::IdentityGroup
            | Error::GroupMismatch => HgStatus::Group,
            _ => HgStatus::Crypto,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> HgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HgStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(HgStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `p` must be NULL or a valid NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(HgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` must be NULL or point to a live value of type `T`.
unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `p` must be NULL or point to `n` readable bytes.
unsafe fn bits_arg(p: *const u8, n: usize) -> FfiResult<Vec<bool>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(null("bits"));
    }
    Ok(std::slice::from_raw_parts(p, n)
        .iter()
        .map(|&b| b != 0)
        .collect())
}

/// # Safety
/// `out` must be NULL or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = CString::new(s).map_err(|_| Failure(HgStatus::Parse, "output contains NUL".into()))?;
    *out = s.into_raw();
    Ok(())
}

/// # Safety
/// `out` must be NULL or writable.
unsafe fn put_box<T>(out: *mut *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

enum Keys {
    Cyclic(CyclicPublicKey, Option<CyclicSecretKey>),
    General(GeneralPublicKey, Option<GeneralSecretKey>),
}

/// A public key, optionally with its secret half.
pub struct HgKeyPair {
    keys: Keys,
}

/// A parsed boolean circuit.
pub struct HgCircuit {
    circuit: Circuit,
}

/// Message for the most recent failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Generates a key pair. `group` is `z<m>` for the cyclic system or a builtin
/// name such as `sym3`, `sym5`, `alt5`.
///
/// # Safety
/// `group` must be a valid string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hg_keypair_generate(
    group: *const c_char,
    bits: u32,
    seed: u64,
    out: *mut *mut HgKeyPair,
) -> HgStatus {
    guard(|| {
        let group = str_arg(group, "group")?;
        let mut rng = rng(seed);
        let m = group.strip_prefix('z').and_then(|m| m.parse::<u64>().ok());
        let keys = match m {
            Some(m) => {
                let pair = keygen_cyclic(m, bits, &mut rng)?;
                Keys::Cyclic(pair.public, Some(pair.secret))
            }
            None => {
                let g = builtin(group).ok_or_else(|| {
                    Failure(HgStatus::Group, format!("unknown group `{group}`"))
                })??;
                let pair = keygen_general(&g, bits, &mut rng)?;
                Keys::General(pair.public, Some(pair.secret))
            }
        };
        put_box(out, HgKeyPair { keys })
    })
}

/// Loads a key pair from its text encodings. `secret_text` may be NULL for a
/// public-only handle.
///
/// # Safety
/// `public_text` must be a valid string, `secret_text` NULL or a valid string,
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hg_keypair_from_text(
    public_text: *const c_char,
    secret_text: *const c_char,
    out: *mut *mut HgKeyPair,
) -> HgStatus {
    guard(|| {
        let pk = str_arg(public_text, "public_text")?;
        let sk = if secret_text.is_null() {
            None
        } else {
            Some(str_arg(secret_text, "secret_text")?)
        };
        let keys = if is_cyclic_key_text(pk) {
            let public = CyclicPublicKey::from_text(pk)?;
            let secret = sk
                .map(|sk| CyclicSecretKey::from_text(sk, &public))
                .transpose()?;
            Keys::Cyclic(public, secret)
        } else {
            let public = GeneralPublicKey::from_text(pk)?;
            let secret = sk
                .map(|sk| GeneralSecretKey::from_text(sk, &public))
                .transpose()?;
            Keys::General(public, secret)
        };
        put_box(out, HgKeyPair { keys })
    })
}

/// # Safety
/// `kp` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hg_keypair_free(kp: *mut HgKeyPair) {
    if !kp.is_null() {
        drop(Box::from_raw(kp));
    }
}

/// Nonzero if the handle holds a secret key.
///
/// # Safety
/// `kp` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hg_keypair_has_secret(kp: *const HgKeyPair) -> u8 {
    match kp.as_ref().map(|k| &k.keys) {
        Some(Keys::Cyclic(_, s)) => u8::from(s.is_some()),
        Some(Keys::General(_, s)) => u8::from(s.is_some()),
        None => 0,
    }
}

/// # Safety
/// `kp` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hg_keypair_public_text(
    kp: *const HgKeyPair,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let text = match &ref_arg(kp, "keypair")?.keys {
            Keys::Cyclic(pk, _) => pk.to_text(),
            Keys::General(pk, _) => pk.to_text(),
        };
        put_string(out, text)
    })
}

/// # Safety
/// `kp` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hg_keypair_secret_text(
    kp: *const HgKeyPair,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let text = match &ref_arg(kp, "keypair")?.keys {
            Keys::Cyclic(_, Some(sk)) => sk.to_text(),
            Keys::General(_, Some(sk)) => sk.to_text(),
            _ => return Err(Failure(HgStatus::MissingSecret, "no secret key".into())),
        };
        put_string(out, text)
    })
}

/// Encrypts the element named `plaintext` (an integer for `z<m>` keys, a
/// cycle-notation label for permutation groups).
///
/// # Safety
/// `kp` must be a live handle, `plaintext` a valid string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hg_encrypt(
    kp: *const HgKeyPair,
    plaintext: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let kp = ref_arg(kp, "keypair")?;
        let plain = str_arg(plaintext, "plaintext")?.trim();
        let mut rng = rng(seed);
        let text = match &kp.keys {
            Keys::Cyclic(pk, _) => {
                let i: u64 = plain
                    .parse()
                    .map_err(|_| Error::UnknownElement(plain.to_string()))?;
                encrypt_cyclic(pk, i, &mut rng)?.to_text()
            }
            Keys::General(pk, _) => {
                let h = pk.group().parse_element(plain)?;
                encrypt_general(pk, h, &mut rng)?.to_text()
            }
        };
        put_string(out, text)
    })
}

/// Decrypts to the plaintext label.
///
/// # Safety
/// `kp` must be a live handle, `ciphertext` a valid string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hg_decrypt(
    kp: *const HgKeyPair,
    ciphertext: *const c_char,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let kp = ref_arg(kp, "keypair")?;
        let text = str_arg(ciphertext, "ciphertext")?;
        let missing = || Failure(HgStatus::MissingSecret, "no secret key".into());
        let label = match &kp.keys {
            Keys::Cyclic(pk, sk) => {
                let sk = sk.as_ref().ok_or_else(missing)?;
                decrypt_cyclic(sk, pk, &CyclicCiphertext::from_text(text, pk)?)?.to_string()
            }
            Keys::General(pk, sk) => {
                let sk = sk.as_ref().ok_or_else(missing)?;
                let c = GWord::parse(text, pk.family())?;
                pk.group().label(decrypt_general(sk, pk, &c)?)
            }
        };
        put_string(out, label)
    })
}

/// Multiplies two ciphertexts under the public key.
///
/// # Safety
/// `kp` must be a live handle, `c1` and `c2` valid strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hg_hommul(
    kp: *const HgKeyPair,
    c1: *const c_char,
    c2: *const c_char,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let kp = ref_arg(kp, "keypair")?;
        let (a, b) = (str_arg(c1, "c1")?, str_arg(c2, "c2")?);
        let text = match &kp.keys {
            Keys::Cyclic(pk, _) => {
                let (a, b) = (
                    CyclicCiphertext::from_text(a, pk)?,
                    CyclicCiphertext::from_text(b, pk)?,
                );
                mult_ciphertexts(pk, &a, &b).to_text()
            }
            Keys::General(pk, _) => {
                let (a, b) = (GWord::parse(a, pk.family())?, GWord::parse(b, pk.family())?);
                mult_ciphertexts_general(pk, &a, &b).to_text()
            }
        };
        put_string(out, text)
    })
}

/// Parses a boolean circuit.
///
/// # Safety
/// `text` must be a valid string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hg_circuit_parse(
    text: *const c_char,
    out: *mut *mut HgCircuit,
) -> HgStatus {
    guard(|| {
        let circuit = parse_circuit(str_arg(text, "text")?)?;
        put_box(out, HgCircuit { circuit })
    })
}

/// # Safety
/// `c` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hg_circuit_free(c: *mut HgCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of circuit inputs; 0 for NULL.
///
/// # Safety
/// `c` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hg_circuit_input_count(c: *const HgCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.circuit.input_count())
}

/// Evaluates the circuit on `n` input bytes (nonzero is true).
///
/// # Safety
/// `c` must be a live handle, `bits` must point to `n` bytes, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hg_circuit_eval(
    c: *const HgCircuit,
    bits: *const u8,
    n: usize,
    out: *mut u8,
) -> HgStatus {
    guard(|| {
        let c = ref_arg(c, "circuit")?;
        let value = c.circuit.eval(&bits_arg(bits, n)?)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = u8::from(value);
        Ok(())
    })
}

/// Compiles the circuit into a group program (`GPROG v1` text) over a builtin
/// unsolvable group such as `sym5` or `alt5`.
///
/// # Safety
/// `c` must be a live handle, `group` a valid string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hg_compile(
    c: *const HgCircuit,
    group: *const c_char,
    out: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let c = ref_arg(c, "circuit")?;
        let name = str_arg(group, "group")?;
        let g = builtin(name)
            .ok_or_else(|| Failure(HgStatus::Group, format!("unknown group `{name}`")))??;
        put_string(out, compile_barrington(&c.circuit, &g)?.to_text())
    })
}

/// Runs the encrypted-circuit protocol: the key holder owns `c`, the other
/// party owns the `n` input bytes. Writes the output bit and, if `transcript`
/// is not NULL, the transcript text.
///
/// # Safety
/// `kp` and `c` must be live handles, `bits` must point to `n` bytes, `out_bit`
/// writable, and `transcript` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn hg_protocol_circuit(
    kp: *const HgKeyPair,
    c: *const HgCircuit,
    bits: *const u8,
    n: usize,
    seed: u64,
    out_bit: *mut u8,
    transcript: *mut *mut c_char,
) -> HgStatus {
    guard(|| {
        let kp = ref_arg(kp, "keypair")?;
        let c = ref_arg(c, "circuit")?;
        let pair = match &kp.keys {
            Keys::General(public, Some(secret)) => GeneralKeyPair {
                public: public.clone(),
                secret: secret.clone(),
            },
            Keys::General(_, None) => {
                return Err(Failure(HgStatus::MissingSecret, "no secret key".into()))
            }
            Keys::Cyclic(..) => {
                return Err(Failure(
                    HgStatus::Group,
                    "the protocol needs an unsolvable group key".into(),
                ))
            }
        };
        let run = protocol_encrypted_circuit(&pair, &c.circuit, &bits_arg(bits, n)?, seed)?;
        let out_bit = out_bit.as_mut().ok_or_else(|| null("out_bit"))?;
        *out_bit = u8::from(run.result);
        if !transcript.is_null() {
            put_string(transcript, run.transcript.to_text())?;
        }
        Ok(())
    })
}
