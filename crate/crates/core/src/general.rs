//! The cryptosystem over an arbitrary finite nonidentity group `H`.
//!
//! For cyclic `H` this is the m-th residue system with plaintext `g^j`
//! encoded as `j` for the smallest generator `g`, carried as a one-factor
//! family so ciphertexts share the word encoding. Otherwise every
//! `h_i != 1` (in element index order) gets its own cyclic system of order
//! `ord(h_i)`, ciphertexts are words in the free product of those, and
//! decryption is `psi(phi(c))`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::cyclic::{
    encrypt_cyclic, keygen_cyclic, CyclicPublicKey, CyclicSecretKey,
    PUBLIC_KEY_HEADER as CYCLIC_PK_HEADER,
};
use crate::error::{Error, Result};
use crate::freeprod::{
    combined_p, g_inverse, g_multiply, inverse_p_phi, p_psi, phi_map, psi_map, random_phi_witness,
    FactorFamily, FamilySecret, GWord, PhiWitness, PsiWitness, TrapdoorFactorOracle,
};
use crate::group::{Elem, FiniteGroup};
use crate::numtheory::parse_natural;
use crate::text::{parse_usize, Lines};

pub const PUBLIC_KEY_HEADER: &str = "GHC-GENERAL-PK v1";
pub const SECRET_KEY_HEADER: &str = "GHC-GENERAL-SK v1";

/// Ciphertexts are normal-form words.
pub type GeneralCiphertext = GWord;

/// Key generation attempts per factor when hunting for a fresh modulus.
const DISTINCT_MODULUS_ATTEMPTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPublicKey {
    group: FiniteGroup,
    family: FactorFamily,
    cyclic: bool,
    /// `transversal[h]` is the published representative with `f(r) = h`.
    transversal: Vec<GWord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralSecretKey {
    family: FamilySecret,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralKeyPair {
    pub public: GeneralPublicKey,
    pub secret: GeneralSecretKey,
}

/// Randomization sizes for [`sample_a`]: `phi_steps` derivation steps for the
/// `phi` part and `psi_letters` random transversal letters for the `psi` part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingParams {
    pub phi_steps: usize,
    pub psi_letters: usize,
}

impl SamplingParams {
    /// `2|H|` steps and `|H|` letters.
    pub fn for_group(group: &FiniteGroup) -> Self {
        SamplingParams {
            phi_steps: 2 * group.order(),
            psi_letters: group.order(),
        }
    }

    pub fn none() -> Self {
        SamplingParams {
            phi_steps: 0,
            psi_letters: 0,
        }
    }
}

/// Element carried by factor `i`: the smallest generator for cyclic groups,
/// element `i` otherwise.
fn factor_elements(group: &FiniteGroup) -> Vec<Elem> {
    match group.cyclic_generator() {
        Some(g) => vec![g],
        None => group.nonidentity().collect(),
    }
}

pub fn keygen_general<R: Rng + ?Sized>(
    group: &FiniteGroup,
    bits: u32,
    rng: &mut R,
) -> Result<GeneralKeyPair> {
    if group.order() < 2 {
        return Err(Error::IdentityGroup);
    }
    let mut publics: Vec<(Elem, CyclicPublicKey)> = Vec::new();
    let mut secrets = Vec::new();
    for h in factor_elements(group) {
        let m = group.element_order(h) as u64;
        let mut attempts = 0;
        let pair = loop {
            let pair = keygen_cyclic(m, bits, rng)?;
            if publics.iter().all(|(_, pk)| pk.n() != pair.public.n()) {
                break pair;
            }
            attempts += 1;
            if attempts == DISTINCT_MODULUS_ATTEMPTS {
                return Err(Error::ExhaustedRetries("pairwise distinct factor moduli"));
            }
        };
        publics.push((h, pair.public));
        secrets.push(pair.secret);
    }
    let family = FactorFamily::new(group, publics)?;
    let public = GeneralPublicKey::assemble(group.clone(), family)?;
    Ok(GeneralKeyPair {
        public,
        secret: GeneralSecretKey {
            family: FamilySecret::new(secrets),
        },
    })
}

impl GeneralPublicKey {
    fn assemble(group: FiniteGroup, family: FactorFamily) -> Result<Self> {
        let cyclic = group.is_cyclic();
        let transversal = group
            .elements()
            .map(|h| transversal_word(&group, &family, cyclic, h))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneralPublicKey {
            group,
            family,
            cyclic,
            transversal,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn family(&self) -> &FactorFamily {
        &self.family
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    /// The published representative `r_h`.
    pub fn representative(&self, h: Elem) -> &GWord {
        &self.transversal[h.index()]
    }

    /// The underlying cyclic key when `H` is cyclic.
    pub fn cyclic_key(&self) -> Option<&CyclicPublicKey> {
        self.cyclic.then(|| self.family.key(1).expect("one factor"))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{PUBLIC_KEY_HEADER}\n");
        out.push_str(&self.group.to_text());
        for i in self.family.ids() {
            let key = self.family.key(i).expect("valid id");
            let reps: Vec<String> = key
                .transversal()
                .iter()
                .map(|r| r.value().to_string())
                .collect();
            out.push_str(&format!(
                "FACTOR {i} {} {} R: {}\n",
                key.m(),
                key.n(),
                reps.join(" ")
            ));
        }
        out.push_str("TRANSVERSAL\n");
        for (h, word) in self.transversal.iter().enumerate() {
            out.push_str(&format!("{h} {word}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (no, header) = lines.expect_line("key header")?;
        if header != PUBLIC_KEY_HEADER {
            return Err(Error::parse(format!(
                "line {no}: expected `{PUBLIC_KEY_HEADER}`"
            )));
        }
        let group = FiniteGroup::read(&mut lines)?;
        if group.order() < 2 {
            return Err(Error::IdentityGroup);
        }
        let elements = factor_elements(&group);
        let mut factors = Vec::with_capacity(elements.len());
        for (idx, h) in elements.into_iter().enumerate() {
            let (no, line) = lines.expect_line("FACTOR line")?;
            let (head, reps) = line.split_once("R:").ok_or_else(|| {
                Error::parse(format!("line {no}: expected `FACTOR i m n R: ...`"))
            })?;
            let head: Vec<&str> = head.split_whitespace().collect();
            let [tag, i, m, n] = head.as_slice() else {
                return Err(Error::parse(format!(
                    "line {no}: expected `FACTOR i m n R: ...`"
                )));
            };
            if *tag != "FACTOR" || parse_usize(i, no)? != idx + 1 {
                return Err(Error::parse(format!(
                    "line {no}: expected `FACTOR {}`",
                    idx + 1
                )));
            }
            let m = parse_natural(m)?
                .to_u64()
                .ok_or_else(|| Error::parse(format!("line {no}: order too large")))?;
            let n = parse_natural(n)?;
            let reps = reps
                .split_whitespace()
                .map(parse_natural)
                .collect::<Result<Vec<BigUint>>>()?;
            factors.push((h, CyclicPublicKey::new(n, m, reps)?));
        }
        let family = FactorFamily::new(&group, factors)?;
        let key = GeneralPublicKey::assemble(group, family)?;
        let (no, line) = lines.expect_line("TRANSVERSAL")?;
        if line != "TRANSVERSAL" {
            return Err(Error::parse(format!("line {no}: expected `TRANSVERSAL`")));
        }
        for h in key.group.elements() {
            let (no, line) = lines.expect_line("transversal line")?;
            let (idx, word) = line
                .split_once(' ')
                .ok_or_else(|| Error::parse(format!("line {no}: expected `<element> <word>`")))?;
            if parse_usize(idx, no)? != h.index()
                || GWord::parse(word, &key.family)? != key.transversal[h.index()]
            {
                return Err(Error::InvalidKey(format!(
                    "line {no}: transversal entry does not match the factors"
                )));
            }
        }
        lines.expect_end()?;
        Ok(key)
    }
}

/// `r_h`: empty for the identity; otherwise the single letter `R_i[e]` of the
/// factor whose element `h_i` satisfies `h = h_i^e`.
fn transversal_word(
    group: &FiniteGroup,
    family: &FactorFamily,
    cyclic: bool,
    h: Elem,
) -> Result<GWord> {
    let (factor, exponent) = if cyclic {
        let g = family.element(1)?;
        let j = group
            .cyclic_subgroup(g)
            .iter()
            .position(|&x| x == h)
            .expect("g generates");
        (1, j)
    } else if h.is_identity() {
        return Ok(GWord::empty());
    } else {
        (family.factor_of(h).ok_or(Error::IdentityGroup)?, 1)
    };
    p_psi(&PsiWitness::new(vec![(factor, exponent)]), family)
}

impl GeneralSecretKey {
    pub fn family(&self) -> &FamilySecret {
        &self.family
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{SECRET_KEY_HEADER}\n");
        for (i, key) in self.family.keys().iter().enumerate() {
            out.push_str(&format!("FACTOR {} {} {}\n", i + 1, key.p(), key.q()));
        }
        out
    }

    /// Parses a secret key and checks every factor against `pk`.
    pub fn from_text(text: &str, pk: &GeneralPublicKey) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (no, header) = lines.expect_line("key header")?;
        if header != SECRET_KEY_HEADER {
            return Err(Error::parse(format!(
                "line {no}: expected `{SECRET_KEY_HEADER}`"
            )));
        }
        let mut keys = Vec::with_capacity(pk.family.len());
        for i in pk.family.ids() {
            let (no, line) = lines.expect_line("FACTOR line")?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let ["FACTOR", idx, p, q] = fields.as_slice() else {
                return Err(Error::parse(format!("line {no}: expected `FACTOR i p q`")));
            };
            if parse_usize(idx, no)? != i {
                return Err(Error::parse(format!("line {no}: expected factor {i}")));
            }
            keys.push(CyclicSecretKey::for_public_key(
                parse_natural(p)?,
                parse_natural(q)?,
                pk.family.key(i)?,
            )?);
        }
        lines.expect_end()?;
        Ok(GeneralSecretKey {
            family: FamilySecret::new(keys),
        })
    }
}

/// Random element of `A = A_phi x A_psi`. The `psi` part is `psi_letters`
/// random transversal letters followed, when their image is not trivial, by
/// the one letter `R_t[1]` with `h_t` the inverse of that image.
pub fn sample_a<R: Rng + ?Sized>(
    pk: &GeneralPublicKey,
    params: SamplingParams,
    rng: &mut R,
) -> Result<(PhiWitness, PsiWitness)> {
    let phi = random_phi_witness(&pk.family, params.phi_steps, rng)?;
    let mut psi = PsiWitness::empty();
    let mut image = Elem::IDENTITY;
    for _ in 0..params.psi_letters {
        let i = rng.gen_range(pk.family.ids());
        let m = pk.family.key(i)?.m();
        let j = rng.gen_range(0..m);
        psi.push(i, j as usize);
        image = pk.group.mul(image, pk.group.pow(pk.family.element(i)?, j));
    }
    if !image.is_identity() {
        let closing = pk.group.inv(image);
        if pk.cyclic {
            let g = pk.family.element(1)?;
            let j = pk
                .group
                .cyclic_subgroup(g)
                .iter()
                .position(|&x| x == closing)
                .expect("g generates");
            psi.push(1, j);
        } else {
            psi.push(
                pk.family
                    .factor_of(closing)
                    .expect("every nonidentity element has a factor"),
                1,
            );
        }
    }
    Ok((phi, psi))
}

pub fn encrypt_general<R: Rng + ?Sized>(
    pk: &GeneralPublicKey,
    h: Elem,
    rng: &mut R,
) -> Result<GeneralCiphertext> {
    encrypt_general_with(pk, h, SamplingParams::for_group(&pk.group), rng)
}

/// Cyclic `H` encrypts with the m-th residue system directly and ignores `params`.
pub fn encrypt_general_with<R: Rng + ?Sized>(
    pk: &GeneralPublicKey,
    h: Elem,
    params: SamplingParams,
    rng: &mut R,
) -> Result<GeneralCiphertext> {
    if !pk.group.contains(h) {
        return Err(Error::UnknownElement(h.to_string()));
    }
    if let Some(key) = pk.cyclic_key() {
        let g = pk.family.element(1)?;
        let j = pk
            .group
            .cyclic_subgroup(g)
            .iter()
            .position(|&x| x == h)
            .expect("g generates");
        let c = encrypt_cyclic(key, j as u64, rng)?;
        return Ok(GWord::from_letter(
            pk.family.letter(1, c.value().value().clone())?,
        ));
    }
    let (a, b) = sample_a(pk, params, rng)?;
    Ok(g_multiply(
        &combined_p(&a, &b, &pk.family)?,
        &pk.transversal[h.index()],
    ))
}

/// `f(c) = psi(phi(c))`.
pub fn decrypt_general(
    sk: &GeneralSecretKey,
    pk: &GeneralPublicKey,
    c: &GeneralCiphertext,
) -> Result<Elem> {
    for letter in c.letters() {
        pk.family.key(letter.factor())?;
    }
    if pk.cyclic && c.len() > 1 {
        return Err(Error::MalformedWord(
            "a cyclic-group ciphertext has at most one letter".into(),
        ));
    }
    let k = phi_map(c, &pk.family, &sk.family, &pk.group)?;
    if pk.cyclic {
        return Ok(k
            .runs()
            .first()
            .map_or(Elem::IDENTITY, |&(g, e)| pk.group.pow(g, e)));
    }
    Ok(psi_map(&k, &pk.group))
}

pub fn mult_ciphertexts_general(
    _pk: &GeneralPublicKey,
    c1: &GeneralCiphertext,
    c2: &GeneralCiphertext,
) -> GeneralCiphertext {
    g_multiply(c1, c2)
}

pub fn inverse_ciphertext_general(
    _pk: &GeneralPublicKey,
    c: &GeneralCiphertext,
) -> GeneralCiphertext {
    g_inverse(c)
}

/// A preimage `(a, b)` with `combined_p(a, b) = g`, or `None` when `f(g) != 1`.
///
/// Lifts `phi(g)` letterwise to transversal letters `r`, then certifies
/// `g r^-1`, which lies in the kernel of `phi`, with [`inverse_p_phi`].
pub fn inverse_p_general<R: Rng>(
    sk: &GeneralSecretKey,
    pk: &GeneralPublicKey,
    g: &GWord,
    rng: R,
) -> Result<Option<(PhiWitness, PsiWitness)>> {
    if !decrypt_general(sk, pk, g)?.is_identity() {
        return Ok(None);
    }
    let k = phi_map(g, &pk.family, &sk.family, &pk.group)?;
    let mut r = PsiWitness::empty();
    for &(h, e) in k.runs() {
        let factor = pk
            .family
            .factor_of(h)
            .expect("phi images use factor elements");
        r.push(factor, e as usize);
    }
    let rest = g_multiply(g, &g_inverse(&p_psi(&r, &pk.family)?));
    let mut oracle = TrapdoorFactorOracle::new(&pk.family, &sk.family, rng);
    let (a, t) = inverse_p_phi(&rest, &pk.family, &mut oracle)?;
    if !t.is_empty() {
        return Err(Error::OracleFailure(
            "transversal lift left a non-kernel remainder".into(),
        ));
    }
    Ok(Some((a, r)))
}

/// Distinguishes the two key formats by their header line.
pub fn is_cyclic_key_text(text: &str) -> bool {
    Lines::new(text).peek() == Some(CYCLIC_PK_HEADER)
}
