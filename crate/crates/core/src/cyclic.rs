//! The m-th residue cryptosystem over `Z_m`.
//!
//! With `n = pq`, `p = 1 (mod m)` and `q = -1 (mod m)`, ciphertexts live in
//! `G_{n,m} = {g unit : J_n(g) in {1, (-1)^(m mod 2)}}`, encryption of `i` is
//! `a^m * R[i]` for a random unit `a`, and the m-th powers form the kernel of
//! decryption. Only the holder of `p` and `q` can test m-th powers.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numtheory::{
    crt_pair, factor_small, is_probable_prime, jacobi, mth_root_mod_prime, mth_roots_of_unity,
    parse_natural, random_prime_congruent, random_unit, smallest_primitive_root, Residue,
    DEFAULT_PRIME_ROUNDS,
};
use crate::text::Lines;

pub const PUBLIC_KEY_HEADER: &str = "GHC-CYCLIC-PK v1";
pub const SECRET_KEY_HEADER: &str = "GHC-CYCLIC-SK v1";

/// How the transversal `R` is built at key generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransversalMode {
    /// `R[i] = h^i * s_i^m` with random `h` (of full class order) and random units `s_i`.
    Randomized,
    /// `R[i] = h^i` with `h = crt(g_p, g_q)` from the smallest primitive roots.
    /// Reproducible, for fixtures; needs primes below `2^48`.
    Canonical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicPublicKey {
    n: BigUint,
    m: u64,
    transversal: Vec<Residue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSecretKey {
    p: BigUint,
    q: BigUint,
    m: u64,
    m_prime: u64,
    exp_p: BigUint,
    exp_q: BigUint,
    /// `(R[i] mod p)^((p-1)/m)`, one distinct m-th root of unity per class.
    classes: Vec<Residue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicKeyPair {
    pub public: CyclicPublicKey,
    pub secret: CyclicSecretKey,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicCiphertext {
    value: Residue,
}

/// Public data of a FACTOR(n, m) instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorInstance {
    pub n: BigUint,
    pub m: u64,
    pub transversal: Vec<BigUint>,
}

impl CyclicPublicKey {
    /// Validates everything that can be checked without the factorization:
    /// `m >= 2`, `n` odd, `|R| = m`, and every `R[i]` a unit in `G_{n,m}`.
    pub fn new(n: BigUint, m: u64, transversal: Vec<BigUint>) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadOrder(m));
        }
        if n.is_even() || n < BigUint::from(3u32) {
            return Err(Error::InvalidKey(
                "modulus must be odd and at least 3".into(),
            ));
        }
        if transversal.len() as u64 != m {
            return Err(Error::InvalidKey(format!(
                "transversal has {} elements, expected {m}",
                transversal.len()
            )));
        }
        let mut reps = Vec::with_capacity(transversal.len());
        for r in transversal {
            if r >= n {
                return Err(Error::InvalidKey("transversal element not reduced".into()));
            }
            let r = Residue::new(r, n.clone());
            if !in_group(&n, m, &r)? {
                return Err(Error::InvalidKey(
                    "transversal element outside G_{n,m}".into(),
                ));
            }
            reps.push(r);
        }
        Ok(CyclicPublicKey {
            n,
            m,
            transversal: reps,
        })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn transversal(&self) -> &[Residue] {
        &self.transversal
    }

    pub fn factor_instance(&self) -> FactorInstance {
        FactorInstance {
            n: self.n.clone(),
            m: self.m,
            transversal: self.transversal.iter().map(|r| r.value().clone()).collect(),
        }
    }

    /// Residue mod `n` from a natural; fails unless `0 <= value < n`.
    pub fn residue(&self, value: BigUint) -> Result<Residue> {
        if value >= self.n {
            return Err(Error::parse(format!("{value} is not reduced modulo n")));
        }
        Ok(Residue::new(value, self.n.clone()))
    }

    pub fn to_text(&self) -> String {
        let reps: Vec<String> = self
            .transversal
            .iter()
            .map(|r| r.value().to_string())
            .collect();
        format!(
            "{PUBLIC_KEY_HEADER}\nm: {}\nn: {}\nR: {}\n",
            self.m,
            self.n,
            reps.join(" ")
        )
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let key = Self::read(&mut lines)?;
        lines.expect_end()?;
        Ok(key)
    }

    pub(crate) fn read(lines: &mut Lines<'_>) -> Result<Self> {
        let (no, header) = lines.expect_line("key header")?;
        if header != PUBLIC_KEY_HEADER {
            return Err(Error::parse(format!(
                "line {no}: expected `{PUBLIC_KEY_HEADER}`"
            )));
        }
        Self::read_body(lines)
    }

    pub(crate) fn read_body(lines: &mut Lines<'_>) -> Result<Self> {
        let (no, m) = lines.expect_field("m")?;
        let m = parse_natural(m)?
            .to_u64()
            .ok_or_else(|| Error::parse(format!("line {no}: m too large")))?;
        let n = parse_natural(lines.expect_field("n")?.1)?;
        let transversal = lines
            .expect_field("R")?
            .1
            .split_whitespace()
            .map(parse_natural)
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, m, transversal)
    }
}

impl CyclicSecretKey {
    fn new(p: BigUint, q: BigUint, pk: &CyclicPublicKey) -> Result<Self> {
        let m = pk.m;
        let m_big = BigUint::from(m);
        let m_prime = (&q - 1u32).gcd(&m_big).to_u64().expect("divides m");
        let exp_p = (&p - 1u32) / &m_big;
        let exp_q = (&q - 1u32) / m_prime;
        let classes: Vec<Residue> = pk
            .transversal
            .iter()
            .map(|r| r.reduce(&p).pow(&exp_p))
            .collect();
        for (i, c) in classes.iter().enumerate() {
            if classes[..i].contains(c) {
                return Err(Error::InvalidKey(format!(
                    "transversal entries {} and {i} lie in the same class",
                    classes[..i]
                        .iter()
                        .position(|x| x == c)
                        .expect("just found")
                )));
            }
        }
        Ok(CyclicSecretKey {
            p,
            q,
            m,
            m_prime,
            exp_p,
            exp_q,
            classes,
        })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn m_prime(&self) -> u64 {
        self.m_prime
    }

    pub fn to_text(&self) -> String {
        format!("{SECRET_KEY_HEADER}\np: {}\nq: {}\n", self.p, self.q)
    }

    /// Parses a secret key and checks it against its public half.
    pub fn from_text(text: &str, pk: &CyclicPublicKey) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (no, header) = lines.expect_line("key header")?;
        if header != SECRET_KEY_HEADER {
            return Err(Error::parse(format!(
                "line {no}: expected `{SECRET_KEY_HEADER}`"
            )));
        }
        let p = parse_natural(lines.expect_field("p")?.1)?;
        let q = parse_natural(lines.expect_field("q")?.1)?;
        lines.expect_end()?;
        Self::for_public_key(p, q, pk)
    }

    /// Secret key `(p, q)` for `pk`, checking `pq = n` and the residue conditions.
    pub fn for_public_key(p: BigUint, q: BigUint, pk: &CyclicPublicKey) -> Result<Self> {
        if &p * &q != pk.n {
            return Err(Error::KeyMismatch);
        }
        check_primes(pk.m, &p, &q)?;
        Self::new(p, q, pk)
    }
}

fn check_primes(m: u64, p: &BigUint, q: &BigUint) -> Result<()> {
    let m_big = BigUint::from(m);
    let two = BigUint::from(2u32);
    if p == q || p.is_even() || q.is_even() {
        return Err(Error::InvalidKey(
            "p and q must be distinct odd primes".into(),
        ));
    }
    if !((p - 1u32) % &m_big).is_zero() {
        return Err(Error::InvalidKey("p - 1 is not divisible by m".into()));
    }
    if (q - 1u32).gcd(&m_big) != m_big.gcd(&two) {
        return Err(Error::InvalidKey(
            "gcd(m, q - 1) differs from gcd(m, 2)".into(),
        ));
    }
    Ok(())
}

impl CyclicCiphertext {
    pub fn value(&self) -> &Residue {
        &self.value
    }

    pub fn from_residue(value: Residue) -> Self {
        CyclicCiphertext { value }
    }

    /// Decimal text, newline-terminated.
    pub fn to_text(&self) -> String {
        format!("{}\n", self.value.value())
    }

    pub fn from_text(text: &str, pk: &CyclicPublicKey) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (_, value) = lines.expect_line("ciphertext")?;
        lines.expect_end()?;
        Ok(CyclicCiphertext {
            value: pk.residue(parse_natural(value)?)?,
        })
    }
}

impl fmt::Display for CyclicCiphertext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value.value())
    }
}

/// Generates `p = 1 (mod m)` and `q = -1 (mod m)` of `bits + 1` bits each.
pub fn keygen_cyclic<R: Rng + ?Sized>(m: u64, bits: u32, rng: &mut R) -> Result<CyclicKeyPair> {
    keygen_cyclic_with(m, bits, TransversalMode::Randomized, rng)
}

pub fn keygen_cyclic_with<R: Rng + ?Sized>(
    m: u64,
    bits: u32,
    mode: TransversalMode,
    rng: &mut R,
) -> Result<CyclicKeyPair> {
    if m < 2 {
        return Err(Error::BadOrder(m));
    }
    let m_big = BigUint::from(m);
    let p = random_prime_congruent(bits, &BigUint::one(), &m_big, rng)?;
    let q_residue = &m_big - 1u32;
    for _ in 0..64 * bits.max(1) {
        let q = random_prime_congruent(bits, &q_residue, &m_big, rng)?;
        if q != p && q.is_odd() {
            return from_primes(m, p, q, mode, rng);
        }
    }
    Err(Error::ExhaustedRetries("a second prime distinct from p"))
}

/// Builds a key pair from given primes.
pub fn from_primes<R: Rng + ?Sized>(
    m: u64,
    p: BigUint,
    q: BigUint,
    mode: TransversalMode,
    rng: &mut R,
) -> Result<CyclicKeyPair> {
    if m < 2 {
        return Err(Error::BadOrder(m));
    }
    check_primes(m, &p, &q)?;
    if !is_probable_prime(&p, DEFAULT_PRIME_ROUNDS, rng)
        || !is_probable_prime(&q, DEFAULT_PRIME_ROUNDS, rng)
    {
        return Err(Error::InvalidKey("p and q must be prime".into()));
    }
    let n = &p * &q;
    let h = match mode {
        TransversalMode::Canonical => {
            let h_p = Residue::new(smallest_primitive_root(&p)?, p.clone());
            let h_q = Residue::new(smallest_primitive_root(&q)?, q.clone());
            crt_pair(&h_p, &h_q)?
        }
        TransversalMode::Randomized => {
            let h_p = class_generator_mod_p(&p, m, rng);
            let h_q = if m.is_multiple_of(2) {
                non_residue_mod(&q, rng)
            } else {
                Residue::new(random_unit(&q, rng), q.clone())
            };
            crt_pair(&h_p, &h_q)?
        }
    };
    let mut transversal = Vec::with_capacity(m as usize);
    let mut acc = Residue::one(&n);
    for _ in 0..m {
        let rep = match mode {
            TransversalMode::Canonical => acc.clone(),
            TransversalMode::Randomized => {
                let s = Residue::new(random_unit(&n, rng), n.clone());
                acc.mul(&s.pow_u64(m))
            }
        };
        transversal.push(rep.into_value());
        acc = acc.mul(&h);
    }
    let public = CyclicPublicKey::new(n, m, transversal)?;
    let secret = CyclicSecretKey::new(p, q, &public)?;
    Ok(CyclicKeyPair { public, secret })
}

/// Random `h` whose image generates `Z_p^* / (Z_p^*)^m`, i.e. `h^((p-1)/r) != 1`
/// for every prime `r | m`.
fn class_generator_mod_p<R: Rng + ?Sized>(p: &BigUint, m: u64, rng: &mut R) -> Residue {
    let order = p - 1u32;
    let primes: Vec<u64> = factor_small(m).into_iter().map(|(r, _)| r).collect();
    loop {
        let h = Residue::new(random_unit(p, rng), p.clone());
        if primes.iter().all(|&r| !h.pow(&(&order / r)).is_one()) {
            return h;
        }
    }
}

fn non_residue_mod<R: Rng + ?Sized>(q: &BigUint, rng: &mut R) -> Residue {
    let half = (q - 1u32) >> 1;
    loop {
        let h = Residue::new(random_unit(q, rng), q.clone());
        if !h.pow(&half).is_one() {
            return h;
        }
    }
}

fn in_group(n: &BigUint, m: u64, g: &Residue) -> Result<bool> {
    if !g.is_unit() {
        return Err(Error::NotAUnit);
    }
    let j = jacobi(g.value(), n)?;
    Ok(j == 1 || (m % 2 == 1 && j == -1))
}

/// Membership in `G_{n,m}`.
pub fn in_group_g(pk: &CyclicPublicKey, g: &Residue) -> Result<bool> {
    in_group(&pk.n, pk.m, g)
}

/// `P(a) = a^m`.
pub fn apply_p(pk: &CyclicPublicKey, a: &Residue) -> Result<CyclicCiphertext> {
    if !a.is_unit() {
        return Err(Error::NotAUnit);
    }
    Ok(CyclicCiphertext {
        value: a.pow_u64(pk.m),
    })
}

/// `P(a) * R[i]` with explicit randomness `a`.
pub fn encrypt_with(pk: &CyclicPublicKey, plaintext: u64, a: &Residue) -> Result<CyclicCiphertext> {
    if plaintext >= pk.m {
        return Err(Error::PlaintextRange {
            plaintext,
            order: pk.m,
        });
    }
    let pa = apply_p(pk, a)?;
    Ok(CyclicCiphertext {
        value: pa.value.mul(&pk.transversal[plaintext as usize]),
    })
}

pub fn encrypt_cyclic<R: Rng + ?Sized>(
    pk: &CyclicPublicKey,
    plaintext: u64,
    rng: &mut R,
) -> Result<CyclicCiphertext> {
    let a = Residue::new(random_unit(&pk.n, rng), pk.n.clone());
    encrypt_with(pk, plaintext, &a)
}

/// Trapdoor test for `g` being an m-th power modulo `n`.
pub fn is_mth_power(sk: &CyclicSecretKey, g: &Residue) -> Result<bool> {
    if !g.is_unit() {
        return Err(Error::NotAUnit);
    }
    let g_p = g.reduce(&sk.p);
    let g_q = g.reduce(&sk.q);
    Ok(g_p.pow(&sk.exp_p).is_one() && g_q.pow(&sk.exp_q).is_one())
}

pub fn decrypt_cyclic(
    sk: &CyclicSecretKey,
    pk: &CyclicPublicKey,
    c: &CyclicCiphertext,
) -> Result<u64> {
    decrypt_residue(sk, pk, &c.value)
}

/// The coset index of `g` modulo m-th powers; shared with the free-product
/// decryption, which applies it letter by letter.
///
/// Only the residue mod `p` is consulted: for `g` in `G_{n,m}`, an m-th power
/// mod `p` is also one mod `q`, because `gcd(m, q - 1) = gcd(m, 2)` and the
/// Jacobi condition fixes the quadratic character mod `q`.
pub fn decrypt_residue(sk: &CyclicSecretKey, pk: &CyclicPublicKey, g: &Residue) -> Result<u64> {
    if g.modulus() != &pk.n || !g.is_unit() || !in_group_g(pk, g)? {
        return Err(Error::NotInImage);
    }
    let class = g.reduce(&sk.p).pow(&sk.exp_p);
    match sk.classes.iter().position(|c| *c == class) {
        Some(i) => Ok(i as u64),
        None => Err(Error::NotInImage),
    }
}

/// A uniformly random `a` with `a^m = g`, or `None` if `g` is not an m-th power.
pub fn inverse_p_cyclic<R: Rng + ?Sized>(
    sk: &CyclicSecretKey,
    pk: &CyclicPublicKey,
    g: &Residue,
    rng: &mut R,
) -> Option<Residue> {
    if !g.is_unit() {
        return None;
    }
    let root_p = mth_root_mod_prime(&g.reduce(&sk.p), pk.m, rng)?;
    let root_q = mth_root_mod_prime(&g.reduce(&sk.q), pk.m, rng)?;
    let unity_p = mth_roots_of_unity(pk.m, &sk.p);
    let unity_q = mth_roots_of_unity(pk.m, &sk.q);
    let zeta_p = unity_p.choose(rng).expect("1 is always a root of unity");
    let zeta_q = unity_q.choose(rng).expect("1 is always a root of unity");
    crt_pair(&root_p.mul(zeta_p), &root_q.mul(zeta_q)).ok()
}

pub fn mult_ciphertexts(
    _pk: &CyclicPublicKey,
    c1: &CyclicCiphertext,
    c2: &CyclicCiphertext,
) -> CyclicCiphertext {
    CyclicCiphertext {
        value: c1.value.mul(&c2.value),
    }
}

/// A solver for INVERSE(P): some m-th root of `g`, or `None` if it claims none exists.
pub trait InverseOracle {
    fn invert(&mut self, g: &Residue) -> Option<Residue>;
}

impl<F: FnMut(&Residue) -> Option<Residue>> InverseOracle for F {
    fn invert(&mut self, g: &Residue) -> Option<Residue> {
        self(g)
    }
}

/// The honest oracle: [`inverse_p_cyclic`] with the trapdoor.
pub struct TrapdoorOracle<'a, R: Rng> {
    pub pair: &'a CyclicKeyPair,
    pub rng: R,
    pub calls: usize,
}

impl<'a, R: Rng> TrapdoorOracle<'a, R> {
    pub fn new(pair: &'a CyclicKeyPair, rng: R) -> Self {
        TrapdoorOracle {
            pair,
            rng,
            calls: 0,
        }
    }
}

impl<R: Rng> InverseOracle for TrapdoorOracle<'_, R> {
    fn invert(&mut self, g: &Residue) -> Option<Residue> {
        self.calls += 1;
        inverse_p_cyclic(&self.pair.secret, &self.pair.public, g, &mut self.rng)
    }
}

/// Oracle calls without a new root before drawing a fresh `g`.
pub const FRUITLESS_CALL_LIMIT: usize = 32;
/// Fresh `g` draws before giving up.
pub const FACTOR_ATTEMPTS: usize = 64;

/// Factors `n` using only an INVERSE(P) oracle: collect distinct m-th roots of
/// `g^m` until there are `3 - (m mod 2)` of them, then look for a pair whose
/// difference shares a proper factor with `n`. Returns `(p, q)` with `p < q`.
pub fn factor_via_inverse_oracle<O: InverseOracle + ?Sized, R: Rng + ?Sized>(
    instance: &FactorInstance,
    oracle: &mut O,
    rng: &mut R,
) -> Result<(BigUint, BigUint)> {
    let n = &instance.n;
    let wanted = 3 - (instance.m % 2) as usize;
    for _ in 0..FACTOR_ATTEMPTS {
        let g = Residue::new(random_unit(n, rng), n.clone());
        let target = g.pow_u64(instance.m);
        let mut roots: BTreeSet<BigUint> = BTreeSet::from([g.value().clone()]);
        let mut fruitless = 0;
        while roots.len() < wanted && fruitless < FRUITLESS_CALL_LIMIT {
            let root = oracle
                .invert(&target)
                .ok_or_else(|| Error::OracleFailure("no root reported for an m-th power".into()))?;
            if root.modulus() != n || root.pow_u64(instance.m) != target {
                return Err(Error::OracleFailure(format!(
                    "{} is not an m-th root",
                    root.value()
                )));
            }
            if !roots.insert(root.into_value()) {
                fruitless += 1;
            }
        }
        let roots: Vec<&BigUint> = roots.iter().collect();
        for (i, h1) in roots.iter().enumerate() {
            for h2 in &roots[i + 1..] {
                let d = (*h2 - *h1).gcd(n);
                if !d.is_one() && &d != n {
                    let other = n / &d;
                    return Ok(if d < other { (d, other) } else { (other, d) });
                }
            }
        }
    }
    Err(Error::ExhaustedRetries("a factoring pair of m-th roots"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    fn key35() -> CyclicKeyPair {
        from_primes(3, n(7), n(5), TransversalMode::Canonical, &mut rng(0)).unwrap()
    }

    fn key77() -> CyclicKeyPair {
        from_primes(2, n(7), n(11), TransversalMode::Canonical, &mut rng(0)).unwrap()
    }

    fn values(rs: &[Residue]) -> Vec<BigUint> {
        rs.iter().map(|r| r.value().clone()).collect()
    }

    #[test]
    fn canonical_transversals() {
        let k = key35();
        assert_eq!(k.public.n(), &n(35));
        assert_eq!(values(k.public.transversal()), vec![n(1), n(17), n(9)]);

        // 24 and 6 lie in the same class: 24 * 6^-1 = 4 = 2^2 mod 77
        let k = key77();
        let r1 = &k.public.transversal()[1];
        let six_inv = Residue::new(6u32, 77u32).inverse().unwrap();
        assert!(is_mth_power(&k.secret, &r1.mul(&six_inv)).unwrap());
        assert_eq!(jacobi(&n(6), &n(77)).unwrap(), 1);
        assert!(!is_mth_power(&k.secret, &Residue::new(6u32, 77u32)).unwrap());
    }

    #[test]
    fn keygen_tiny_bits_exhausts() {
        assert!(matches!(
            keygen_cyclic(2, 1, &mut rng(1)),
            Err(Error::ExhaustedRetries(_))
        ));
        assert!(matches!(
            keygen_cyclic(1, 16, &mut rng(1)),
            Err(Error::BadOrder(1))
        ));
    }

    #[test]
    fn keygen_conditions() {
        for m in 2..=6u64 {
            let k = keygen_cyclic(m, 16, &mut rng(m)).unwrap();
            let (p, q) = (k.secret.p(), k.secret.q());
            assert_eq!(p * q, *k.public.n());
            assert!(((p - 1u32) % m).is_zero());
            assert_eq!((q + 1u32) % m, n(0));
            assert!(p.bits() == 17 && q.bits() == 17);
        }
    }

    #[test]
    fn group_membership() {
        let k = key77();
        assert!(!in_group_g(&k.public, &Residue::new(2u32, 77u32)).unwrap());
        assert!(in_group_g(&k.public, &Residue::new(1u32, 77u32)).unwrap());
        let k = key35();
        assert!(in_group_g(&k.public, &Residue::new(2u32, 35u32)).unwrap());
        assert!(matches!(
            in_group_g(&k.public, &Residue::new(7u32, 35u32)),
            Err(Error::NotAUnit)
        ));
    }

    #[test]
    fn apply_p_examples() {
        let k = key35();
        assert_eq!(
            apply_p(&k.public, &Residue::new(1u32, 35u32))
                .unwrap()
                .value()
                .value(),
            &n(1)
        );
        assert_eq!(
            apply_p(&k.public, &Residue::new(2u32, 35u32))
                .unwrap()
                .value()
                .value(),
            &n(8)
        );
        let k = key77();
        assert_eq!(
            apply_p(&k.public, &Residue::new(3u32, 77u32))
                .unwrap()
                .value()
                .value(),
            &n(9)
        );
    }

    #[test]
    fn encrypt_decrypt_examples() {
        let k = key35();
        let c = encrypt_with(&k.public, 1, &Residue::new(2u32, 35u32)).unwrap();
        assert_eq!(c.value().value(), &n(31));
        assert_eq!(decrypt_cyclic(&k.secret, &k.public, &c).unwrap(), 1);
        let c0 = encrypt_with(&k.public, 0, &Residue::new(1u32, 35u32)).unwrap();
        assert_eq!(c0.value(), &k.public.transversal()[0]);
        assert_eq!(decrypt_cyclic(&k.secret, &k.public, &c0).unwrap(), 0);
        assert!(matches!(
            encrypt_with(&k.public, 3, &Residue::new(2u32, 35u32)),
            Err(Error::PlaintextRange {
                plaintext: 3,
                order: 3
            })
        ));

        let k = key77();
        // with R[1] = 6 the ciphertext for a = 3 is 54
        let pk6 = CyclicPublicKey::new(n(77), 2, vec![n(1), n(6)]).unwrap();
        let c = encrypt_with(&pk6, 1, &Residue::new(3u32, 77u32)).unwrap();
        assert_eq!(c.value().value(), &n(54));
        assert_eq!(decrypt_cyclic(&k.secret, &pk6, &c).unwrap(), 1);
    }

    #[test]
    fn mth_power_test() {
        let k = key35();
        assert!(is_mth_power(&k.secret, &Residue::new(8u32, 35u32)).unwrap());
        assert!(is_mth_power(&k.secret, &Residue::new(1u32, 35u32)).unwrap());
        assert!(!is_mth_power(&k.secret, &Residue::new(17u32, 35u32)).unwrap());
    }

    #[test]
    fn decrypt_outside_group_fails() {
        let k = key77();
        let c = CyclicCiphertext::from_residue(Residue::new(2u32, 77u32));
        assert!(matches!(
            decrypt_cyclic(&k.secret, &k.public, &c),
            Err(Error::NotInImage)
        ));
    }

    #[test]
    fn inverse_p_examples() {
        let k = key35();
        let mut r = rng(9);
        let mut seen = BTreeSet::new();
        for _ in 0..60 {
            let a =
                inverse_p_cyclic(&k.secret, &k.public, &Residue::new(8u32, 35u32), &mut r).unwrap();
            seen.insert(a.into_value());
        }
        // the cube roots of 8 mod 35, by exhaustive search
        let expected: BTreeSet<BigUint> =
            (1..35u64).filter(|x| x * x * x % 35 == 8).map(n).collect();
        assert_eq!(expected, [2u64, 22, 32].into_iter().map(n).collect());
        assert_eq!(seen, expected);
        assert!(
            inverse_p_cyclic(&k.secret, &k.public, &Residue::new(2u32, 35u32), &mut r).is_none()
        );
        let one =
            inverse_p_cyclic(&k.secret, &k.public, &Residue::new(1u32, 35u32), &mut r).unwrap();
        assert!(one.pow_u64(3).is_one());
    }

    #[test]
    fn homomorphism_examples() {
        let k = key35();
        let mut r = rng(4);
        let c1 = encrypt_cyclic(&k.public, 1, &mut r).unwrap();
        let c2 = encrypt_cyclic(&k.public, 2, &mut r).unwrap();
        let prod = mult_ciphertexts(&k.public, &c1, &c2);
        assert_eq!(decrypt_cyclic(&k.secret, &k.public, &prod).unwrap(), 0);
        let one = CyclicCiphertext::from_residue(Residue::one(k.public.n()));
        assert_eq!(mult_ciphertexts(&k.public, &c1, &one), c1);

        let k = key77();
        let c = encrypt_cyclic(&k.public, 1, &mut r).unwrap();
        let c2 = encrypt_cyclic(&k.public, 1, &mut r).unwrap();
        assert_eq!(
            decrypt_cyclic(&k.secret, &k.public, &mult_ciphertexts(&k.public, &c, &c2)).unwrap(),
            0
        );
    }

    #[test]
    fn factoring_with_honest_oracle() {
        for (pair, expected) in [(key35(), (n(5), n(7))), (key77(), (n(7), n(11)))] {
            let mut oracle = TrapdoorOracle::new(&pair, rng(11));
            let got = factor_via_inverse_oracle(
                &pair.public.factor_instance(),
                &mut oracle,
                &mut rng(12),
            )
            .unwrap();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn factoring_rejects_lying_oracle() {
        let pair = key35();
        let mut liar = |g: &Residue| Some(g.clone());
        let got = factor_via_inverse_oracle(&pair.public.factor_instance(), &mut liar, &mut rng(1));
        assert!(matches!(got, Err(Error::OracleFailure(_))));
    }

    #[test]
    fn key_text_round_trip() {
        let pair = keygen_cyclic(3, 16, &mut rng(2)).unwrap();
        let pk = CyclicPublicKey::from_text(&pair.public.to_text()).unwrap();
        assert_eq!(pk, pair.public);
        let sk = CyclicSecretKey::from_text(&pair.secret.to_text(), &pk).unwrap();
        assert_eq!(sk, pair.secret);
        let other = keygen_cyclic(3, 16, &mut rng(3)).unwrap();
        assert!(matches!(
            CyclicSecretKey::from_text(&pair.secret.to_text(), &other.public),
            Err(Error::KeyMismatch)
        ));
        let c = encrypt_cyclic(&pk, 2, &mut rng(5)).unwrap();
        assert_eq!(CyclicCiphertext::from_text(&c.to_text(), &pk).unwrap(), c);
        assert!(CyclicPublicKey::from_text("GHC-CYCLIC-PK v1\nm: 3\nn: 35\nR: 1 17\n").is_err());
    }
}
