//! Words in the free product `G = G_1 * ... * G_n` of residue groups.
//!
//! Factor `i` (1-based) carries a cyclic key pair whose plaintext group is
//! `K_i = <h_i>` for some `h_i` in the plaintext group `H`. A letter `[g, i]`
//! is a residue `g` in `G_i`; a [`GWord`] is kept in normal form (no identity
//! letters, no two adjacent letters from the same factor).
//!
//! `phi` maps `G` onto the free product `K` of the cyclic groups `<h_i>`
//! letterwise through the factor trapdoors, and `psi` rewrites a `K`-word to
//! the element of `H` it evaluates to. Kernel membership of `phi` is certified
//! by [`PhiWitness`] words built from the empty word by steps
//! `v => x^-1 x0 v x` with `x` a non-kernel letter and `x0` a preimage letter.

use std::fmt;

use num_bigint::BigUint;
use rand::Rng;

use crate::cyclic::{
    decrypt_residue, encrypt_cyclic, inverse_p_cyclic, CyclicPublicKey, CyclicSecretKey,
};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::numtheory::{jacobi, parse_natural, random_unit, Residue};

/// Public half of the factor systems: factor `i` encrypts `Z_{m_i}`, read as
/// the powers of `elements[i-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorFamily {
    keys: Vec<CyclicPublicKey>,
    elements: Vec<Elem>,
}

/// Trapdoors of every factor, in factor order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySecret {
    keys: Vec<CyclicSecretKey>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GLetter {
    factor: usize,
    value: Residue,
}

/// Normal-form element of `G`; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GWord {
    letters: Vec<GLetter>,
}

/// Element of `K` as runs `(h, e)` meaning `h` repeated `e` times, with
/// `0 < e < order(h)` and adjacent runs over distinct letters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KWord {
    runs: Vec<(Elem, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiLetter {
    /// A non-kernel letter of `G`.
    X(GLetter),
    /// A preimage letter `]a, i[` standing for `a^{m_i}` in `G_i`.
    A { factor: usize, value: Residue },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhiWitness {
    letters: Vec<PhiLetter>,
    depth: usize,
}

/// Word over the factor transversals: `(i, j)` stands for `R_i[j]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PsiWitness {
    letters: Vec<(usize, usize)>,
}

impl FactorFamily {
    /// Checks that the plaintext order of each factor is the order of its element in `group`.
    pub fn new(group: &FiniteGroup, factors: Vec<(Elem, CyclicPublicKey)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::IdentityGroup);
        }
        let mut keys = Vec::with_capacity(factors.len());
        let mut elements = Vec::with_capacity(factors.len());
        for (i, (h, key)) in factors.into_iter().enumerate() {
            if !group.contains(h) || h.is_identity() {
                return Err(Error::InvalidKey(format!(
                    "factor {} has no valid group element",
                    i + 1
                )));
            }
            if group.element_order(h) as u64 != key.m() {
                return Err(Error::InvalidKey(format!(
                    "factor {} encrypts Z_{} but its element has order {}",
                    i + 1,
                    key.m(),
                    group.element_order(h)
                )));
            }
            keys.push(key);
            elements.push(h);
        }
        Ok(FactorFamily { keys, elements })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Factor ids `1..=len`.
    pub fn ids(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.keys.len()
    }

    pub fn key(&self, factor: usize) -> Result<&CyclicPublicKey> {
        factor
            .checked_sub(1)
            .and_then(|i| self.keys.get(i))
            .ok_or_else(|| Error::MalformedWord(format!("no factor {factor}")))
    }

    /// The element `h_i` whose powers factor `i` encrypts.
    pub fn element(&self, factor: usize) -> Result<Elem> {
        factor
            .checked_sub(1)
            .and_then(|i| self.elements.get(i).copied())
            .ok_or_else(|| Error::MalformedWord(format!("no factor {factor}")))
    }

    /// The factor encrypting powers of `h`, if any.
    pub fn factor_of(&self, h: Elem) -> Option<usize> {
        self.elements.iter().position(|&e| e == h).map(|i| i + 1)
    }

    /// Validated letter `[value, factor]`.
    pub fn letter(&self, factor: usize, value: BigUint) -> Result<GLetter> {
        let key = self.key(factor)?;
        if &value >= key.n() {
            return Err(Error::LetterOutOfGroup(factor));
        }
        let value = Residue::new(value, key.n().clone());
        if !value.is_unit() {
            return Err(Error::LetterOutOfGroup(factor));
        }
        let j = jacobi(value.value(), key.n())?;
        if !(j == 1 || (key.m() % 2 == 1 && j == -1)) {
            return Err(Error::LetterOutOfGroup(factor));
        }
        Ok(GLetter { factor, value })
    }
}

impl FamilySecret {
    pub fn new(keys: Vec<CyclicSecretKey>) -> Self {
        FamilySecret { keys }
    }

    pub fn key(&self, factor: usize) -> Result<&CyclicSecretKey> {
        factor
            .checked_sub(1)
            .and_then(|i| self.keys.get(i))
            .ok_or(Error::MissingTrapdoor(factor))
    }

    pub fn keys(&self) -> &[CyclicSecretKey] {
        &self.keys
    }
}

impl GLetter {
    pub fn factor(&self) -> usize {
        self.factor
    }

    pub fn value(&self) -> &Residue {
        &self.value
    }

    pub fn inverse(&self) -> GLetter {
        GLetter {
            factor: self.factor,
            value: self.value.inverse().expect("letters are units"),
        }
    }
}

impl fmt::Display for GLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.factor, self.value.value())
    }
}

/// Appends `letter` to a normal-form stack, merging with the top when the
/// factors agree and dropping identities.
fn push_letter(stack: &mut Vec<GLetter>, letter: GLetter) {
    match stack.last_mut() {
        Some(top) if top.factor == letter.factor => {
            let merged = top.value.mul(&letter.value);
            if merged.is_one() {
                stack.pop();
            } else {
                top.value = merged;
            }
        }
        _ => {
            if !letter.value.is_one() {
                stack.push(letter);
            }
        }
    }
}

fn reduce(letters: impl IntoIterator<Item = GLetter>) -> GWord {
    let mut stack = Vec::new();
    for l in letters {
        push_letter(&mut stack, l);
    }
    GWord { letters: stack }
}

/// Normal form of a raw letter sequence `(factor, value)`.
pub fn normalize(raw: &[(usize, BigUint)], family: &FactorFamily) -> Result<GWord> {
    let letters = raw
        .iter()
        .map(|(i, v)| family.letter(*i, v.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce(letters))
}

pub fn g_multiply(u: &GWord, v: &GWord) -> GWord {
    reduce(u.letters.iter().chain(&v.letters).cloned())
}

/// Left-to-right product of several words in one pass.
pub fn g_product<'a>(words: impl IntoIterator<Item = &'a GWord>) -> GWord {
    reduce(words.into_iter().flat_map(|w| w.letters.iter().cloned()))
}

pub fn g_inverse(u: &GWord) -> GWord {
    GWord {
        letters: u.letters.iter().rev().map(GLetter::inverse).collect(),
    }
}

impl GWord {
    pub fn empty() -> Self {
        GWord::default()
    }

    pub fn from_letter(letter: GLetter) -> Self {
        reduce([letter])
    }

    pub fn letters(&self) -> &[GLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Space-separated `i:g` tokens, or `e` for the identity.
    pub fn to_text(&self) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        let tokens: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        tokens.join(" ")
    }

    /// Parses the token form; the result is normalized, so non-normal input is accepted.
    pub fn parse(text: &str, family: &FactorFamily) -> Result<Self> {
        let text = text.trim();
        if text == "e" {
            return Ok(GWord::empty());
        }
        if text.is_empty() {
            return Err(Error::MalformedWord(
                "empty text; the identity is written `e`".into(),
            ));
        }
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            let (i, g) = token
                .split_once(':')
                .ok_or_else(|| Error::MalformedWord(format!("token `{token}` is not `i:g`")))?;
            let i: usize = i
                .parse()
                .map_err(|_| Error::MalformedWord(format!("bad factor index in `{token}`")))?;
            family.key(i)?;
            let g = parse_natural(g)
                .map_err(|_| Error::MalformedWord(format!("bad residue in `{token}`")))?;
            raw.push((i, g));
        }
        normalize(&raw, family)
    }
}

impl fmt::Display for GWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl KWord {
    pub fn empty() -> Self {
        KWord::default()
    }

    pub fn runs(&self) -> &[(Elem, u64)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Total number of letters.
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|r| r.1).sum()
    }

    /// The letters one by one.
    pub fn letters(&self) -> Vec<Elem> {
        self.runs
            .iter()
            .flat_map(|&(h, e)| std::iter::repeat_n(h, e as usize))
            .collect()
    }

    /// Appends `h` repeated `e` times, reducing exponents modulo the order of `h`.
    pub fn push(&mut self, h: Elem, e: u64, group: &FiniteGroup) {
        if h.is_identity() {
            return;
        }
        let order = group.element_order(h) as u64;
        let e = e % order;
        if e == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some(last) if last.0 == h => {
                let merged = (last.1 + e) % order;
                if merged == 0 {
                    self.runs.pop();
                } else {
                    last.1 = merged;
                }
            }
            _ => self.runs.push((h, e)),
        }
    }

    pub fn from_letters(letters: &[Elem], group: &FiniteGroup) -> Self {
        let mut k = KWord::empty();
        for &h in letters {
            k.push(h, 1, group);
        }
        k
    }

    pub fn multiply(&self, other: &KWord, group: &FiniteGroup) -> KWord {
        let mut k = self.clone();
        for &(h, e) in &other.runs {
            k.push(h, e, group);
        }
        k
    }
}

/// `phi(g)`: each letter `[x, i]` becomes `h_i` repeated `f_i(x)` times.
pub fn phi_map(
    g: &GWord,
    family: &FactorFamily,
    secret: &FamilySecret,
    group: &FiniteGroup,
) -> Result<KWord> {
    let mut k = KWord::empty();
    for letter in &g.letters {
        let exponent = factor_plaintext(letter, family, secret)?;
        k.push(family.element(letter.factor)?, exponent, group);
    }
    Ok(k)
}

/// `f_i(x)` for a letter `[x, i]`.
pub fn factor_plaintext(
    letter: &GLetter,
    family: &FactorFamily,
    secret: &FamilySecret,
) -> Result<u64> {
    let pk = family.key(letter.factor)?;
    let sk = secret.key(letter.factor)?;
    decrypt_residue(sk, pk, &letter.value)
}

/// `psi(k)`: repeatedly replaces the first two letters `x1 x2` by `h^-1`, where
/// `h` is the element with `x1 x2 h` (or `x1 x2` when `h = 1`) a defining
/// relation, until at most one letter is left.
pub fn psi_map(k: &KWord, group: &FiniteGroup) -> Elem {
    let mut stack: Vec<Elem> = k.letters();
    stack.reverse();
    loop {
        if stack.len() <= 1 {
            return stack.pop().unwrap_or(Elem::IDENTITY);
        }
        let x1 = stack.pop().expect("two letters");
        let x2 = stack.pop().expect("two letters");
        let h = group
            .elements()
            .find(|&h| is_relation(group, x1, x2, h))
            .expect("every pair of letters closes a relation");
        let h_inv = group.inv(h);
        if !h_inv.is_identity() {
            stack.push(h_inv);
        }
    }
}

/// Whether the word `x1 x2 h` (just `x1 x2` when `h` is the identity) is one
/// of the defining relations of `H` over the alphabet of its nonidentity
/// elements.
fn is_relation(group: &FiniteGroup, x1: Elem, x2: Elem, h: Elem) -> bool {
    let order = |x: Elem| group.element_order(x);
    if h.is_identity() {
        // h h (order 2), or h h' with h h' = 1
        return (x1 == x2 && order(x1) == 2) || group.mul(x1, x2).is_identity();
    }
    if !group.product([x1, x2, h]).is_identity() {
        return false;
    }
    let x2_in_x1 = group.cyclic_subgroup(x1).contains(&x2);
    // h h h (order 3); h h h' with h^2 h' = 1 and order > 2
    let power_run = x1 == x2 && order(x1) > 2;
    // h h' h'' with h' outside <h>
    let mixed = !x2_in_x1;
    // h h' h'' with h' a power of h other than h itself: the two families
    // above miss these, and without them rewriting stalls on groups with
    // elements of order >= 4 (e.g. `1 2` in Z_6)
    let power_mixed = x2_in_x1 && x1 != x2;
    power_run || mixed || power_mixed
}

impl PhiWitness {
    pub fn empty() -> Self {
        PhiWitness::default()
    }

    pub fn letters(&self) -> &[PhiLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of `=>` steps in the derivation from the empty word.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// One derivation step `v => x^-1 x0 v x`; `None` stands for the empty word.
    pub fn step(&self, x: Option<&GLetter>, x0: Option<(usize, Residue)>) -> PhiWitness {
        let mut letters = Vec::with_capacity(self.letters.len() + 3);
        if let Some(x) = x {
            letters.push(PhiLetter::X(x.inverse()));
        }
        if let Some((factor, value)) = x0 {
            letters.push(PhiLetter::A { factor, value });
        }
        letters.extend(self.letters.iter().cloned());
        if let Some(x) = x {
            letters.push(PhiLetter::X(x.clone()));
        }
        PhiWitness {
            letters,
            depth: self.depth + 1,
        }
    }

    /// The preimage letter for factor `i` obtained by multiplying all of the
    /// witness's factor-`i` `A`-letters. When the witness certifies a single
    /// letter of `G_i`, this is a root of that letter.
    pub fn extract_factor_root(&self, factor: usize, family: &FactorFamily) -> Result<Residue> {
        let n = family.key(factor)?.n();
        let mut acc = Residue::one(n);
        for letter in &self.letters {
            if let PhiLetter::A { factor: i, value } = letter {
                if *i == factor {
                    acc = acc.mul(value);
                }
            }
        }
        Ok(acc)
    }
}

/// `P_phi`: `X`-letters pass through, `]a, i[` becomes `[a^{m_i}, i]`.
pub fn p_phi(a: &PhiWitness, family: &FactorFamily) -> Result<GWord> {
    let letters = a
        .letters
        .iter()
        .map(|l| match l {
            PhiLetter::X(x) => Ok(x.clone()),
            PhiLetter::A { factor, value } => {
                let m = family.key(*factor)?.m();
                Ok(GLetter {
                    factor: *factor,
                    value: value.pow_u64(m),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce(letters))
}

/// `L` random derivation steps from the empty witness. Each step picks `x`
/// uniformly from {skip, factor 1, ..., factor n} and, for a factor, an
/// encryption of a random nonzero plaintext (a non-kernel letter); `x0` is
/// skip or a random unit of a uniformly chosen factor.
pub fn random_phi_witness<R: Rng + ?Sized>(
    family: &FactorFamily,
    steps: usize,
    rng: &mut R,
) -> Result<PhiWitness> {
    // `front` holds the left half reversed, so each step only pushes.
    let mut front: Vec<PhiLetter> = Vec::new();
    let mut back: Vec<PhiLetter> = Vec::new();
    for _ in 0..steps {
        let x = match rng.gen_range(0..=family.len()) {
            0 => None,
            i => {
                let key = family.key(i)?;
                let plaintext = rng.gen_range(1..key.m());
                let c = encrypt_cyclic(key, plaintext, rng)?;
                Some(GLetter {
                    factor: i,
                    value: c.value().clone(),
                })
            }
        };
        let x0 = match rng.gen_range(0..=family.len()) {
            0 => None,
            i => {
                let n = family.key(i)?.n();
                Some((i, Residue::new(random_unit(n, rng), n.clone())))
            }
        };
        if let Some((factor, value)) = x0 {
            front.push(PhiLetter::A { factor, value });
        }
        if let Some(x) = x {
            front.push(PhiLetter::X(x.inverse()));
            back.push(PhiLetter::X(x));
        }
    }
    front.reverse();
    front.extend(back);
    Ok(PhiWitness {
        letters: front,
        depth: steps,
    })
}

/// Solver for INVERSE(P_i): an `a` with `a^{m_i} = g` in factor `i`, or `None`
/// when `g` is not in the kernel of `f_i`.
pub trait FactorOracle {
    fn invert(&mut self, factor: usize, g: &Residue) -> Option<Residue>;
}

impl<F: FnMut(usize, &Residue) -> Option<Residue>> FactorOracle for F {
    fn invert(&mut self, factor: usize, g: &Residue) -> Option<Residue> {
        self(factor, g)
    }
}

/// Answers with the factor trapdoors.
pub struct TrapdoorFactorOracle<'a, R: Rng> {
    family: &'a FactorFamily,
    secret: &'a FamilySecret,
    rng: R,
}

impl<'a, R: Rng> TrapdoorFactorOracle<'a, R> {
    pub fn new(family: &'a FactorFamily, secret: &'a FamilySecret, rng: R) -> Self {
        TrapdoorFactorOracle {
            family,
            secret,
            rng,
        }
    }
}

impl<R: Rng> FactorOracle for TrapdoorFactorOracle<'_, R> {
    fn invert(&mut self, factor: usize, g: &Residue) -> Option<Residue> {
        let pk = self.family.key(factor).ok()?;
        let sk = self.secret.key(factor).ok()?;
        inverse_p_cyclic(sk, pk, g, &mut self.rng)
    }
}

/// Counts the calls passed to an inner oracle.
pub struct CountingOracle<O> {
    pub inner: O,
    pub calls: usize,
}

impl<O> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        CountingOracle { inner, calls: 0 }
    }
}

impl<O: FactorOracle> FactorOracle for CountingOracle<O> {
    fn invert(&mut self, factor: usize, g: &Residue) -> Option<Residue> {
        self.calls += 1;
        self.inner.invert(factor, g)
    }
}

/// Solves INVERSE(P_phi) for `g`: returns `(a_g, t_g)` where `t_g` is empty iff
/// `g` lies in the kernel of `phi`, in which case `p_phi(a_g) = g`.
///
/// Each round finds the first kernel letter `x_j` (querying letters left to
/// right), rotates to `x_{j+1}...x_k x_1...x_{j-1}`, and recurses on that
/// shorter word; the witness is then assembled as
/// `x_1...x_{j-1} a_j a_h x_{j-1}^-1...x_1^-1`. At most `|g|` letters are
/// queried per round and there are at most `|g|` rounds.
pub fn inverse_p_phi<O: FactorOracle + ?Sized>(
    g: &GWord,
    family: &FactorFamily,
    oracle: &mut O,
) -> Result<(PhiWitness, GWord)> {
    // (prefix x_1..x_{j-1}, root a_j) per round
    let mut frames: Vec<(Vec<GLetter>, GLetter, Residue)> = Vec::new();
    let mut current = g.clone();
    loop {
        if current.is_empty() {
            break;
        }
        let mut kernel = None;
        for (j, x) in current.letters.iter().enumerate() {
            if let Some(a) = oracle.invert(x.factor, &x.value) {
                let m = family.key(x.factor)?.m();
                if a.modulus() != x.value.modulus() || a.pow_u64(m) != x.value {
                    return Err(Error::OracleFailure(format!(
                        "{} is not a preimage of letter {x}",
                        a.value()
                    )));
                }
                kernel = Some((j, a));
                break;
            }
        }
        let Some((j, a)) = kernel else {
            return Ok((PhiWitness::empty(), current));
        };
        let letters = &current.letters;
        let rotated = reduce(letters[j + 1..].iter().chain(&letters[..j]).cloned());
        frames.push((letters[..j].to_vec(), letters[j].clone(), a));
        current = rotated;
    }
    let mut witness = PhiWitness::empty();
    while let Some((prefix, x_j, a_j)) = frames.pop() {
        let insert = Some((x_j.factor, a_j));
        witness = match prefix.split_last() {
            None => witness.step(None, insert),
            Some((last, rest)) => {
                let mut w = witness.step(Some(&last.inverse()), insert);
                for x in rest.iter().rev() {
                    w = w.step(Some(&x.inverse()), None);
                }
                w
            }
        };
    }
    Ok((witness, GWord::empty()))
}

impl PsiWitness {
    pub fn empty() -> Self {
        PsiWitness::default()
    }

    pub fn new(letters: Vec<(usize, usize)>) -> Self {
        PsiWitness { letters }
    }

    pub fn letters(&self) -> &[(usize, usize)] {
        &self.letters
    }

    pub fn push(&mut self, factor: usize, index: usize) {
        self.letters.push((factor, index));
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// The normalized product of the transversal letters `R_i[j]`.
pub fn p_psi(b: &PsiWitness, family: &FactorFamily) -> Result<GWord> {
    let letters = b
        .letters
        .iter()
        .map(|&(i, j)| {
            let key = family.key(i)?;
            let value = key.transversal().get(j).ok_or_else(|| {
                Error::MalformedWord(format!("no transversal element {j} in factor {i}"))
            })?;
            Ok(GLetter {
                factor: i,
                value: value.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce(letters))
}

/// `P(a, b) = P_phi(a) P_psi(b)`.
pub fn combined_p(a: &PhiWitness, b: &PsiWitness, family: &FactorFamily) -> Result<GWord> {
    Ok(g_multiply(&p_phi(a, family)?, &p_psi(b, family)?))
}
