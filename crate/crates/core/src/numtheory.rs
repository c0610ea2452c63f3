//! Modular arithmetic over arbitrary-precision naturals.
//!
//! Everything that draws randomness takes the generator explicitly, so a seeded
//! generator makes every result reproducible.

use std::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Miller-Rabin rounds used wherever a caller does not choose.
pub const DEFAULT_PRIME_ROUNDS: u32 = 40;

/// An element of `Z_n`, stored reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigUint,
    modulus: BigUint,
}

impl Residue {
    /// Reduces `value` modulo `modulus`.
    ///
    /// Panics if `modulus < 2`.
    pub fn new(value: impl Into<BigUint>, modulus: impl Into<BigUint>) -> Self {
        let modulus = modulus.into();
        assert!(
            modulus >= BigUint::from(2u32),
            "residue modulus must be >= 2"
        );
        let value = value.into() % &modulus;
        Residue { value, modulus }
    }

    pub fn one(modulus: &BigUint) -> Self {
        Residue::new(1u32, modulus.clone())
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn is_unit(&self) -> bool {
        self.value.gcd(&self.modulus).is_one()
    }

    /// Reinterprets the value modulo a different modulus.
    pub fn reduce(&self, modulus: &BigUint) -> Residue {
        Residue::new(self.value.clone(), modulus.clone())
    }

    pub fn mul(&self, other: &Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        Residue {
            value: (&self.value * &other.value) % &self.modulus,
            modulus: self.modulus.clone(),
        }
    }

    pub fn pow(&self, exp: &BigUint) -> Residue {
        mod_pow(self, exp)
    }

    pub fn pow_u64(&self, exp: u64) -> Residue {
        mod_pow(self, &BigUint::from(exp))
    }

    pub fn inverse(&self) -> Result<Residue> {
        mod_inverse(self)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

pub fn mod_pow(base: &Residue, exp: &BigUint) -> Residue {
    Residue {
        value: base.value.modpow(exp, &base.modulus),
        modulus: base.modulus.clone(),
    }
}

/// `gcd(0, 0) = 0`.
pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

pub fn mod_inverse(a: &Residue) -> Result<Residue> {
    let inv = a.value.modinv(&a.modulus).ok_or(Error::NotAUnit)?;
    Ok(Residue {
        value: inv,
        modulus: a.modulus.clone(),
    })
}

/// Jacobi symbol `(a / n)` for odd `n >= 3`.
pub fn jacobi(a: &BigUint, n: &BigUint) -> Result<i8> {
    if n.is_even() || *n < BigUint::from(3u32) {
        return Err(Error::EvenModulus);
    }
    if let Some(small) = n.to_u64() {
        return Ok(jacobi_u64(
            (a % n).to_u64().expect("reduced below n"),
            small,
        ));
    }
    let mut a = a % n;
    let mut n = n.clone();
    let mut sign = 1i8;
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        a >>= twos;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap();
        if twos % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            sign = -sign;
        }
        // reciprocity
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    Ok(if n.is_one() { sign } else { 0 })
}

fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    let mut sign = 1i8;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        if twos % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

const SMALL_PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Miller-Rabin with `rounds` random bases. Primes always pass; a composite
/// passes with probability at most `4^-rounds`.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigUint, rounds: u32, rng: &mut R) -> bool {
    if let Some(small) = n.to_u32() {
        if small < 2 {
            return false;
        }
        if SMALL_PRIMES.contains(&small) {
            return true;
        }
    }
    if SMALL_PRIMES.iter().any(|&p| (n % p).is_zero()) {
        return false;
    }

    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let twos = n_minus_1.trailing_zeros().unwrap_or(0);
    let odd = &n_minus_1 >> twos;
    let two = BigUint::from(2u32);

    'witness: for _ in 0..rounds.max(1) {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&odd, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..twos {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
            if x == one {
                return false;
            }
        }
        return false;
    }
    true
}

/// Random probable prime `p` in `[2^bits, 2^(bits+1)]` with `p = residue (mod modulus)`.
///
/// Gives up with [`Error::ExhaustedRetries`] after `64 * bits` candidates.
pub fn random_prime_congruent<R: Rng + ?Sized>(
    bits: u32,
    residue: &BigUint,
    modulus: &BigUint,
    rng: &mut R,
) -> Result<BigUint> {
    if modulus.is_zero() {
        return Err(Error::NotCoprime);
    }
    let residue = residue % modulus;
    if !gcd(&residue, modulus).is_one() && !modulus.is_one() {
        return Err(Error::NotCoprime);
    }
    let lo = BigUint::one() << bits;
    let hi = BigUint::one() << (bits + 1);
    let offset = (&residue + modulus - (&lo % modulus)) % modulus;
    let first = &lo + offset;
    if first > hi {
        return Err(Error::ExhaustedRetries(
            "a prime in the requested residue class",
        ));
    }
    let count = (&hi - &first) / modulus + 1u32;
    let budget = 64 * bits.max(1);
    for _ in 0..budget {
        let k = rng.gen_biguint_below(&count);
        let candidate = &first + k * modulus;
        if is_probable_prime(&candidate, DEFAULT_PRIME_ROUNDS, rng) {
            return Ok(candidate);
        }
    }
    Err(Error::ExhaustedRetries(
        "a prime in the requested residue class",
    ))
}

/// The unique `x mod pq` with `x = a_p (mod p)` and `x = a_q (mod q)`.
pub fn crt_pair(a_p: &Residue, a_q: &Residue) -> Result<Residue> {
    let (p, q) = (&a_p.modulus, &a_q.modulus);
    let p_inv = p.modinv(q).ok_or(Error::NotCoprime)?;
    if p == q {
        return Err(Error::NotCoprime);
    }
    let ap_mod_q = &a_p.value % q;
    let diff = (&a_q.value + q - ap_mod_q) % q;
    let k = (diff * p_inv) % q;
    Ok(Residue::new(&a_p.value + k * p, p * q))
}

/// Uniform unit of `Z_n`.
pub fn random_unit<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> BigUint {
    let one = BigUint::one();
    loop {
        let x = rng.gen_biguint_range(&one, n);
        if x.gcd(n).is_one() {
            return x;
        }
    }
}

/// Prime factorization of a machine-size integer by trial division.
pub fn factor_small(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Some `x` with `x^m = g (mod p)` for prime `p`, or `None` when `g` is not an
/// m-th power.
///
/// Reduces to a d-th root with `d = gcd(m, p-1)`, then peels one prime factor
/// of `d` at a time with an Adleman-Manders-Miller r-th root, steering each
/// intermediate root into the subgroup of remaining powers.
pub fn mth_root_mod_prime<R: Rng + ?Sized>(g: &Residue, m: u64, rng: &mut R) -> Option<Residue> {
    let p = g.modulus.clone();
    if !g.is_unit() {
        return None;
    }
    let one = BigUint::one();
    if m == 0 {
        return g.is_one().then(|| Residue::one(&p));
    }
    let order = &p - &one;
    let d = order.gcd(&BigUint::from(m));
    let cofactor = &order / &d;
    if !g.pow(&cofactor).is_one() {
        return None;
    }
    if cofactor.is_one() {
        // g = 1 and every element is a root; 1 is the canonical choice
        return Some(Residue::one(&p));
    }
    // x^m = g  <=  x^d = g^u  with  u = (m/d)^-1 mod (p-1)/d
    let t = BigUint::from(m) / &d;
    let u = (&t % &cofactor).modinv(&cofactor)?;
    let mut current = g.pow(&u);
    let mut remaining = d.to_u64()?;
    for (r, e) in factor_small(remaining) {
        for _ in 0..e {
            let (root, zeta) = prime_root(&current, r, &order, rng);
            remaining /= r;
            let test_exp = &order / remaining;
            let mut candidate = root;
            let mut found = false;
            for _ in 0..r {
                if candidate.pow(&test_exp).is_one() {
                    found = true;
                    break;
                }
                candidate = candidate.mul(&zeta);
            }
            if !found {
                return None;
            }
            current = candidate;
        }
    }
    debug_assert_eq!(current.pow_u64(m), *g);
    Some(current)
}

/// An r-th root of `c` (prime `r | order`, `c` an r-th power) together with a
/// primitive r-th root of unity.
fn prime_root<R: Rng + ?Sized>(
    c: &Residue,
    r: u64,
    order: &BigUint,
    rng: &mut R,
) -> (Residue, Residue) {
    let p = c.modulus();
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let r_big = BigUint::from(r);

    let mut sylow_exp = 0u32;
    let mut t = order.clone();
    while (&t % r).is_zero() {
        t /= r;
        sylow_exp += 1;
    }

    // non-r-th-residue
    let non_residue_test = order / &r_big;
    let rho = loop {
        let candidate = Residue::new(rng.gen_biguint_range(&two, p), p.clone());
        if !candidate.pow(&non_residue_test).is_one() {
            break candidate;
        }
    };
    let sylow_gen = rho.pow(&t);
    let zeta = sylow_gen.pow(&r_big.pow(sylow_exp - 1));

    // r*u = 1 + t*v
    let u = if t.is_one() {
        one.clone()
    } else {
        (&r_big % &t)
            .modinv(&t)
            .expect("r is coprime to the r-free part")
    };
    let v = (&r_big * &u - &one) / &t;
    let x0 = c.pow(&u);
    let err = c.pow(&t).pow(&v);
    let err_inv = err.inverse().expect("error term is a unit");

    let log = sylow_log(&sylow_gen, &err_inv, r, sylow_exp, &zeta);
    debug_assert!((&log % r).is_zero());
    let w = sylow_gen.pow(&(log / r));
    (x0.mul(&w), zeta)
}

/// Discrete log of `y` to base `gen`, where `gen` has order `r^s`; `zeta` is
/// `gen^(r^(s-1))`. Digit-by-digit Pohlig-Hellman.
fn sylow_log(gen: &Residue, y: &Residue, r: u64, s: u32, zeta: &Residue) -> BigUint {
    let gen_inv = gen.inverse().expect("generator is a unit");
    let r_big = BigUint::from(r);
    let mut log = BigUint::zero();
    let mut place = BigUint::one();
    for k in 0..s {
        let shifted = gen_inv.pow(&log).mul(y);
        let h = shifted.pow(&r_big.pow(s - 1 - k));
        let mut acc = Residue::one(gen.modulus());
        let mut digit = None;
        for dgt in 0..r {
            if acc == h {
                digit = Some(dgt);
                break;
            }
            acc = acc.mul(zeta);
        }
        let digit = digit.expect("digit exists in a cyclic r-group");
        log += &place * digit;
        place *= r;
    }
    log
}

/// All `x mod p` with `x^m = 1`, ascending; there are `gcd(m, p-1)` of them.
///
/// Panics if `m == 0`.
pub fn mth_roots_of_unity(m: u64, p: &BigUint) -> Vec<Residue> {
    assert!(m >= 1, "m must be positive");
    let order = p - 1u32;
    let d = order.gcd(&BigUint::from(m)).to_u64().expect("divides m");
    if d == 1 {
        return vec![Residue::one(p)];
    }
    let cofactor = &order / d;
    let primes: Vec<u64> = factor_small(d).into_iter().map(|(r, _)| r).collect();
    let mut x = BigUint::from(2u32);
    let omega = loop {
        let candidate = Residue::new(x.clone(), p.clone()).pow(&cofactor);
        if primes.iter().all(|&r| !candidate.pow_u64(d / r).is_one()) {
            break candidate;
        }
        x += 1u32;
    };
    let mut roots = Vec::with_capacity(d as usize);
    let mut acc = Residue::one(p);
    for _ in 0..d {
        roots.push(acc.clone());
        acc = acc.mul(&omega);
    }
    roots.sort_by(|a, b| a.value.cmp(&b.value));
    roots
}

/// Smallest generator of `Z_p^*`, by trial-factoring `p - 1`.
///
/// Only used for small fixture primes; fails for `p >= 2^48`.
pub fn smallest_primitive_root(p: &BigUint) -> Result<BigUint> {
    let p_small = p
        .to_u64()
        .filter(|&v| v < 1 << 48)
        .ok_or_else(|| Error::TooLarge(format!("trial factoring {p} - 1")))?;
    let order = p_small - 1;
    let primes: Vec<u64> = factor_small(order).into_iter().map(|(r, _)| r).collect();
    (2..p_small.max(3))
        .map(BigUint::from)
        .find(|g| {
            let g = Residue::new(g.clone(), p.clone());
            primes.iter().all(|&r| !g.pow_u64(order / r).is_one())
        })
        .or_else(|| (p_small == 2).then(BigUint::one))
        .ok_or(Error::NotAUnit)
}

pub(crate) fn parse_natural(text: &str) -> Result<BigUint> {
    let text = text.trim();
    let ok = !text.is_empty()
        && text.bytes().all(|b| b.is_ascii_digit())
        && (text == "0" || !text.starts_with('0'));
    if !ok {
        return Err(Error::parse(format!(
            "`{text}` is not a canonical decimal natural"
        )));
    }
    text.parse::<BigUint>()
        .map_err(|e| Error::parse(format!("`{text}`: {e}")))
}
