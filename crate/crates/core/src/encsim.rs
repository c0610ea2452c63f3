//! Encrypted simulation of boolean and group circuits, and the two
//! two-party protocols built on it.
//!
//! An [`EncryptedProgram`] replaces every instruction element `h_j` of a
//! [`GroupProgram`] with a random ciphertext `g_j`, `f(g_j) = h_j`. Anyone can
//! multiply the selected `g_j`; only the key holder learns whether the product
//! decrypts to the target or to the identity.
//!
//! Protocols run in process: [`Alice`] and [`Bob`] exchange [`Message`]s whose
//! payloads are the canonical text encodings, reparsed on receipt.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::barrington::{compile_barrington, GroupProgram};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::freeprod::{g_inverse, g_multiply, g_product, GWord};
use crate::general::{
    decrypt_general, encrypt_general, GeneralCiphertext, GeneralKeyPair, GeneralPublicKey,
    GeneralSecretKey,
};
use crate::group::{builtin, Elem, FiniteGroup};
use crate::text::{parse_usize, Lines};

pub const ENCRYPTED_PROGRAM_HEADER: &str = "EPROG v1";
pub const GROUP_CIRCUIT_HEADER: &str = "GCIRC v1";
pub const TRANSCRIPT_HEADER: &str = "TRANSCRIPT v1";

/// Bob's generator is seeded with `seed ^ BOB_SEED_TWEAK`.
pub const BOB_SEED_TWEAK: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncryptedProgram {
    input_count: usize,
    instructions: Vec<(GeneralCiphertext, usize)>,
    target: Elem,
}

impl EncryptedProgram {
    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn instructions(&self) -> &[(GeneralCiphertext, usize)] {
        &self.instructions
    }

    pub fn target(&self) -> Elem {
        self.target
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// `EPROG v1 <n> <target> <count>`, then `<var> <gword>` per instruction.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{ENCRYPTED_PROGRAM_HEADER} {} {} {}\n",
            self.input_count,
            self.target,
            self.instructions.len()
        );
        for (g, l) in &self.instructions {
            out.push_str(&format!("{l} {g}\n"));
        }
        out
    }

    pub fn from_text(text: &str, pk: &GeneralPublicKey) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (no, header) = lines.expect_line("encrypted program header")?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let ["EPROG", "v1", n, target, count] = fields.as_slice() else {
            return Err(Error::parse(format!(
                "line {no}: expected `{ENCRYPTED_PROGRAM_HEADER} <n> <target> <count>`"
            )));
        };
        let n = parse_usize(n, no)?;
        let target = Elem(parse_usize(target, no)?);
        if target.is_identity() || !pk.group().contains(target) {
            return Err(Error::parse(format!(
                "line {no}: target must be a nonidentity element"
            )));
        }
        let count = parse_usize(count, no)?;
        let mut instructions = Vec::with_capacity(count);
        for _ in 0..count {
            let (no, line) = lines.expect_line("instruction")?;
            let (l, word) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(format!("line {no}: expected `<var> <gword>`")))?;
            let l = parse_usize(l, no)?;
            if l > n {
                return Err(Error::parse(format!(
                    "line {no}: variable {l} out of range"
                )));
            }
            instructions.push((GWord::parse(word, pk.family())?, l));
        }
        lines.expect_end()?;
        Ok(EncryptedProgram {
            input_count: n,
            instructions,
            target,
        })
    }
}

pub fn encrypt_program<R: rand::Rng + ?Sized>(
    pk: &GeneralPublicKey,
    p: &GroupProgram,
    rng: &mut R,
) -> Result<EncryptedProgram> {
    if !p.group().same_table(pk.group()) {
        return Err(Error::GroupMismatch);
    }
    let instructions = p
        .instructions()
        .iter()
        .map(|&(h, l)| Ok((encrypt_general(pk, h, rng)?, l)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EncryptedProgram {
        input_count: p.input_count(),
        instructions,
        target: p.target(),
    })
}

/// Product of the selected instruction words. Uses public data only.
pub fn eval_encrypted(ep: &EncryptedProgram, x: &[bool]) -> Result<GeneralCiphertext> {
    if x.len() != ep.input_count {
        return Err(Error::ArityMismatch {
            expected: ep.input_count,
            got: x.len(),
        });
    }
    Ok(g_product(
        ep.instructions
            .iter()
            .filter(|&&(_, l)| l == ep.input_count || x[l])
            .map(|(g, _)| g),
    ))
}

/// `true` for `f(g) = target`, `false` for `f(g) = 1`.
pub fn decrypt_output(
    sk: &GeneralSecretKey,
    pk: &GeneralPublicKey,
    g: &GeneralCiphertext,
    target: Elem,
) -> Result<bool> {
    let h = decrypt_general(sk, pk, g)?;
    if h == target {
        Ok(true)
    } else if h.is_identity() {
        Ok(false)
    } else {
        Err(Error::UnexpectedValue(pk.group().label(h)))
    }
}

/// One step of a straight-line program over a group. Operands are indices of
/// earlier steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupOp<C> {
    Input(usize),
    Const(C),
    Mul(usize, usize),
    Inv(usize),
}

/// A circuit over `H`: a sequence of [`GroupOp`]s with constants in `H`.
///
/// ```text
/// GCIRC v1 sym3 2
/// input 0
/// const (12)
/// mul 0 1
/// input 1
/// mul 2 3
/// OUTPUT 4
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCircuit {
    group: FiniteGroup,
    input_count: usize,
    ops: Vec<GroupOp<Elem>>,
    output: usize,
}

/// A [`GroupCircuit`] with constants replaced by ciphertexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedCircuit {
    input_count: usize,
    ops: Vec<GroupOp<GWord>>,
    output: usize,
}

fn check_ops<C>(ops: &[GroupOp<C>], input_count: usize, output: usize) -> Result<()> {
    for (i, op) in ops.iter().enumerate() {
        let ok = match *op {
            GroupOp::Input(k) => k < input_count,
            GroupOp::Const(_) => true,
            GroupOp::Mul(a, b) => a < i && b < i,
            GroupOp::Inv(a) => a < i,
        };
        if !ok {
            return Err(Error::parse(format!(
                "step {i} refers to a later step or a missing input"
            )));
        }
    }
    if output >= ops.len() {
        return Err(Error::NoOutput);
    }
    Ok(())
}

fn run_ops<C, T: Clone>(
    ops: &[GroupOp<C>],
    output: usize,
    inputs: &[T],
    constant: impl Fn(&C) -> T,
    mul: impl Fn(&T, &T) -> T,
    inv: impl Fn(&T) -> T,
) -> T {
    let mut values: Vec<T> = Vec::with_capacity(ops.len());
    for op in ops {
        let v = match op {
            GroupOp::Input(k) => inputs[*k].clone(),
            GroupOp::Const(c) => constant(c),
            GroupOp::Mul(a, b) => mul(&values[*a], &values[*b]),
            GroupOp::Inv(a) => inv(&values[*a]),
        };
        values.push(v);
    }
    values.swap_remove(output)
}

impl GroupCircuit {
    pub fn new(
        group: FiniteGroup,
        input_count: usize,
        ops: Vec<GroupOp<Elem>>,
        output: usize,
    ) -> Result<Self> {
        check_ops(&ops, input_count, output)?;
        for op in &ops {
            if let GroupOp::Const(c) = op {
                if !group.contains(*c) {
                    return Err(Error::UnknownElement(c.to_string()));
                }
            }
        }
        Ok(GroupCircuit {
            group,
            input_count,
            ops,
            output,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn ops(&self) -> &[GroupOp<Elem>] {
        &self.ops
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn eval(&self, y: &[Elem]) -> Result<Elem> {
        if y.len() != self.input_count {
            return Err(Error::ArityMismatch {
                expected: self.input_count,
                got: y.len(),
            });
        }
        if let Some(bad) = y.iter().find(|e| !self.group.contains(**e)) {
            return Err(Error::UnknownElement(bad.to_string()));
        }
        let g = &self.group;
        Ok(run_ops(
            &self.ops,
            self.output,
            y,
            |c| *c,
            |a, b| g.mul(*a, *b),
            |a| g.inv(*a),
        ))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{GROUP_CIRCUIT_HEADER} {} {}\n",
            self.group.id(),
            self.input_count
        );
        for op in &self.ops {
            let line = match op {
                GroupOp::Input(k) => format!("input {k}"),
                GroupOp::Const(c) => format!("const {}", self.group.label(*c)),
                GroupOp::Mul(a, b) => format!("mul {a} {b}"),
                GroupOp::Inv(a) => format!("inv {a}"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&format!("OUTPUT {}\n", self.output));
        out
    }

    /// Parses a circuit over a builtin group.
    pub fn from_text(text: &str) -> Result<Self> {
        Self::parse(text, None)
    }

    /// Parses a circuit over `group`; the header id must match unless it is `custom`.
    pub fn from_text_with_group(text: &str, group: &FiniteGroup) -> Result<Self> {
        Self::parse(text, Some(group))
    }

    fn parse(text: &str, group: Option<&FiniteGroup>) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (no, header) = lines.expect_line("group circuit header")?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let ["GCIRC", "v1", id, n] = fields.as_slice() else {
            return Err(Error::parse(format!(
                "line {no}: expected `{GROUP_CIRCUIT_HEADER} <group> <n>`"
            )));
        };
        let group = match group {
            Some(g) if *id == "custom" || g.id() == *id => g.clone(),
            Some(_) => return Err(Error::GroupMismatch),
            None => builtin(id)
                .ok_or_else(|| Error::parse(format!("line {no}: unknown group `{id}`")))??,
        };
        let n = parse_usize(n, no)?;
        let mut ops = Vec::new();
        let mut output = None;
        while let Some((no, line)) = lines.next_line() {
            if output.is_some() {
                return Err(Error::parse(format!("line {no}: text after OUTPUT")));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let op = match fields.as_slice() {
                ["input", k] => GroupOp::Input(parse_usize(k, no)?),
                ["const", label] => GroupOp::Const(group.parse_element(label)?),
                ["mul", a, b] => GroupOp::Mul(parse_usize(a, no)?, parse_usize(b, no)?),
                ["inv", a] => GroupOp::Inv(parse_usize(a, no)?),
                ["OUTPUT", k] => {
                    output = Some(parse_usize(k, no)?);
                    continue;
                }
                _ => return Err(Error::parse(format!("line {no}: unknown step `{line}`"))),
            };
            ops.push(op);
        }
        let output = output.ok_or(Error::NoOutput)?;
        GroupCircuit::new(group, n, ops, output)
    }
}

/// Replaces every constant with a fresh encryption and every operation with
/// the corresponding ciphertext-word operation.
pub fn lift_group_circuit<R: rand::Rng + ?Sized>(
    pk: &GeneralPublicKey,
    bh: &GroupCircuit,
    rng: &mut R,
) -> Result<LiftedCircuit> {
    if !bh.group.same_table(pk.group()) {
        return Err(Error::GroupMismatch);
    }
    let ops = bh
        .ops
        .iter()
        .map(|op| {
            Ok(match op {
                GroupOp::Input(k) => GroupOp::Input(*k),
                GroupOp::Const(c) => GroupOp::Const(encrypt_general(pk, *c, rng)?),
                GroupOp::Mul(a, b) => GroupOp::Mul(*a, *b),
                GroupOp::Inv(a) => GroupOp::Inv(*a),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LiftedCircuit {
        input_count: bh.input_count,
        ops,
        output: bh.output,
    })
}

impl LiftedCircuit {
    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn ops(&self) -> &[GroupOp<GWord>] {
        &self.ops
    }

    pub fn eval(&self, z: &[GWord]) -> Result<GWord> {
        if z.len() != self.input_count {
            return Err(Error::ArityMismatch {
                expected: self.input_count,
                got: z.len(),
            });
        }
        Ok(run_ops(
            &self.ops,
            self.output,
            z,
            GWord::clone,
            g_multiply,
            g_inverse,
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Alice,
    Bob,
}

impl Role {
    fn name(self) -> &'static str {
        match self {
            Role::Alice => "alice",
            Role::Bob => "bob",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub from: Role,
    pub kind: String,
    pub payload: String,
}

impl Message {
    fn new(from: Role, kind: &str, payload: String) -> Self {
        Message {
            from,
            kind: kind.to_string(),
            payload,
        }
    }

    fn expect(&self, from: Role, kind: &str) -> Result<&str> {
        if self.from != from || self.kind != kind {
            return Err(Error::parse(format!(
                "expected a `{kind}` message from {}, got `{}` from {}",
                from.name(),
                self.kind,
                self.from.name()
            )));
        }
        Ok(&self.payload)
    }
}

/// `TRANSCRIPT v1`, then one `MSG <role> <type>` block per message.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub messages: Vec<Message>,
}

impl Transcript {
    fn record(&mut self, m: &Message) {
        self.messages.push(m.clone());
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{TRANSCRIPT_HEADER}\n");
        for m in &self.messages {
            out.push_str(&format!("MSG {} {}\n", m.from.name(), m.kind));
            out.push_str(&m.payload);
            if !m.payload.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim_end) != Some(TRANSCRIPT_HEADER) {
            return Err(Error::parse(format!("expected `{TRANSCRIPT_HEADER}`")));
        }
        let mut messages: Vec<Message> = Vec::new();
        for line in lines {
            if let Some(rest) = line.strip_prefix("MSG ") {
                let (role, kind) = rest
                    .split_once(' ')
                    .ok_or_else(|| Error::parse(format!("bad message header `{line}`")))?;
                let from = match role {
                    "alice" => Role::Alice,
                    "bob" => Role::Bob,
                    _ => return Err(Error::parse(format!("unknown role `{role}`"))),
                };
                messages.push(Message::new(from, kind.trim(), String::new()));
            } else {
                let m = messages
                    .last_mut()
                    .ok_or_else(|| Error::parse("payload before the first message"))?;
                m.payload.push_str(line);
                m.payload.push('\n');
            }
        }
        Ok(Transcript { messages })
    }
}

/// The key holder.
pub struct Alice {
    pair: GeneralKeyPair,
    rng: ChaCha20Rng,
    target: Option<Elem>,
}

/// The evaluator; never sees the secret key.
pub struct Bob {
    pk: Option<GeneralPublicKey>,
    program: Option<EncryptedProgram>,
    inputs: Vec<GWord>,
    rng: ChaCha20Rng,
}

impl Alice {
    pub fn new(pair: GeneralKeyPair, seed: u64) -> Self {
        Alice {
            pair,
            rng: ChaCha20Rng::seed_from_u64(seed),
            target: None,
        }
    }

    pub fn publish_key(&self) -> Message {
        Message::new(Role::Alice, "public-key", self.pair.public.to_text())
    }

    /// Compiles `c` over the key's group and encrypts the program.
    pub fn send_program(&mut self, c: &Circuit) -> Result<Message> {
        let p = compile_barrington(c, self.pair.public.group())?;
        let ep = encrypt_program(&self.pair.public, &p, &mut self.rng)?;
        self.target = Some(ep.target());
        Ok(Message::new(Role::Alice, "program", ep.to_text()))
    }

    /// Decrypts Bob's word; the message carries `f(g)` and the bit.
    pub fn announce_bit(&self, m: &Message) -> Result<(bool, Message)> {
        let pk = &self.pair.public;
        let g = GWord::parse(m.expect(Role::Bob, "word")?, pk.family())?;
        let target = self
            .target
            .ok_or_else(|| Error::parse("no program was sent"))?;
        let h = decrypt_general(&self.pair.secret, pk, &g)?;
        let bit = decrypt_output(&self.pair.secret, pk, &g, target)?;
        let payload = format!("value {}\nbit {}\n", pk.group().label(h), u8::from(bit));
        Ok((bit, Message::new(Role::Alice, "result", payload)))
    }

    pub fn send_inputs(&mut self, y: &[Elem]) -> Result<Message> {
        let mut payload = String::new();
        for &h in y {
            payload.push_str(&encrypt_general(&self.pair.public, h, &mut self.rng)?.to_text());
            payload.push('\n');
        }
        Ok(Message::new(Role::Alice, "inputs", payload))
    }

    pub fn announce_value(&self, m: &Message) -> Result<(Elem, Message)> {
        let pk = &self.pair.public;
        let g = GWord::parse(m.expect(Role::Bob, "word")?, pk.family())?;
        let h = decrypt_general(&self.pair.secret, pk, &g)?;
        Ok((
            h,
            Message::new(
                Role::Alice,
                "result",
                format!("value {}\n", pk.group().label(h)),
            ),
        ))
    }
}

impl Bob {
    pub fn new(seed: u64) -> Self {
        Bob {
            pk: None,
            program: None,
            inputs: Vec::new(),
            rng: ChaCha20Rng::seed_from_u64(seed ^ BOB_SEED_TWEAK),
        }
    }

    fn pk(&self) -> Result<&GeneralPublicKey> {
        self.pk
            .as_ref()
            .ok_or_else(|| Error::parse("no public key received"))
    }

    pub fn receive(&mut self, m: &Message) -> Result<()> {
        match (m.from, m.kind.as_str()) {
            (Role::Alice, "public-key") => self.pk = Some(GeneralPublicKey::from_text(&m.payload)?),
            (Role::Alice, "program") => {
                self.program = Some(EncryptedProgram::from_text(&m.payload, self.pk()?)?)
            }
            (Role::Alice, "inputs") => {
                let family = self.pk()?.family();
                let mut lines = Lines::new(&m.payload);
                let mut inputs = Vec::new();
                while let Some((_, line)) = lines.next_line() {
                    inputs.push(GWord::parse(line, family)?);
                }
                self.inputs = inputs;
            }
            _ => return Err(Error::parse(format!("unexpected `{}` message", m.kind))),
        }
        Ok(())
    }

    pub fn evaluate_program(&self, x: &[bool]) -> Result<Message> {
        let ep = self
            .program
            .as_ref()
            .ok_or_else(|| Error::parse("no program received"))?;
        Ok(Message::new(
            Role::Bob,
            "word",
            eval_encrypted(ep, x)?.to_text(),
        ))
    }

    pub fn evaluate_circuit(&mut self, bh: &GroupCircuit) -> Result<Message> {
        let pk = self
            .pk
            .as_ref()
            .ok_or_else(|| Error::parse("no public key received"))?;
        let lifted = lift_group_circuit(pk, bh, &mut self.rng)?;
        Ok(Message::new(
            Role::Bob,
            "word",
            lifted.eval(&self.inputs)?.to_text(),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolRun<T> {
    pub transcript: Transcript,
    pub result: T,
}

/// Alice holds the keys and `c`, Bob holds `x`. Bob learns `c(x)`.
pub fn protocol_encrypted_circuit(
    pair: &GeneralKeyPair,
    c: &Circuit,
    x: &[bool],
    seed: u64,
) -> Result<ProtocolRun<bool>> {
    if x.len() != c.input_count() {
        return Err(Error::ArityMismatch {
            expected: c.input_count(),
            got: x.len(),
        });
    }
    let mut alice = Alice::new(pair.clone(), seed);
    let mut bob = Bob::new(seed);
    let mut transcript = Transcript::default();
    let key = alice.publish_key();
    transcript.record(&key);
    bob.receive(&key)?;
    let program = alice.send_program(c)?;
    transcript.record(&program);
    bob.receive(&program)?;
    let word = bob.evaluate_program(x)?;
    transcript.record(&word);
    let (bit, result) = alice.announce_bit(&word)?;
    transcript.record(&result);
    Ok(ProtocolRun {
        transcript,
        result: bit,
    })
}

/// Alice holds the keys and `y`, Bob holds `bh`. Alice learns `bh(y)`.
pub fn protocol_encrypted_input(
    pair: &GeneralKeyPair,
    y: &[Elem],
    bh: &GroupCircuit,
    seed: u64,
) -> Result<ProtocolRun<Elem>> {
    if y.len() != bh.input_count() {
        return Err(Error::ArityMismatch {
            expected: bh.input_count(),
            got: y.len(),
        });
    }
    let mut alice = Alice::new(pair.clone(), seed);
    let mut bob = Bob::new(seed);
    let mut transcript = Transcript::default();
    let key = alice.publish_key();
    transcript.record(&key);
    bob.receive(&key)?;
    let inputs = alice.send_inputs(y)?;
    transcript.record(&inputs);
    bob.receive(&inputs)?;
    let word = bob.evaluate_circuit(bh)?;
    transcript.record(&word);
    let (h, result) = alice.announce_value(&word)?;
    transcript.record(&result);
    Ok(ProtocolRun {
        transcript,
        result: h,
    })
}
