//! The `homgroup` command line.
//!
//! Exit codes: 0 on success, 1 on a domain error (bad key, malformed file,
//! undecryptable ciphertext, ...), 2 on a usage error. Data goes to stdout or
//! `--out`; diagnostics go to stderr.
//!
//! Plaintexts are named by element labels: integers `0..m` for `z<m>` keys,
//! cycle notation such as `(123)(45)` or `()` for permutation groups, and
//! element indices for groups loaded from a table file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::barrington::{compile_with_cap, eval_program, GroupProgram, DEFAULT_DEPTH_CAP};
use crate::circuit::{parse_bits, parse_circuit};
use crate::cyclic::{
    decrypt_cyclic, encrypt_cyclic, factor_via_inverse_oracle, keygen_cyclic, mult_ciphertexts,
    CyclicCiphertext, CyclicKeyPair, CyclicPublicKey, CyclicSecretKey, TrapdoorOracle,
};
use crate::encsim::{protocol_encrypted_circuit, protocol_encrypted_input, GroupCircuit};
use crate::error::{Error, Result};
use crate::freeprod::GWord;
use crate::general::{
    decrypt_general, encrypt_general, is_cyclic_key_text, keygen_general, mult_ciphertexts_general,
    GeneralKeyPair, GeneralPublicKey, GeneralSecretKey,
};
use crate::group::{builtin, FiniteGroup};

#[derive(Debug, Parser)]
#[command(
    name = "homgroup",
    version,
    about = "Homomorphic encryption over finite groups"
)]
pub struct Cli {
    /// Print extra diagnostics to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key pair; writes pk.txt and sk.txt into --out.
    Keygen {
        /// `z<m>`, `sym<k>`, `alt<k>`, or a path to a `GROUP v1` table file.
        #[arg(long)]
        group: String,
        /// Bit length of each prime factor.
        #[arg(long)]
        bits: u32,
        /// RNG seed; the same seed gives the same key files.
        #[arg(long)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt one plaintext element.
    Encrypt {
        /// Public key file.
        #[arg(long)]
        pk: PathBuf,
        /// Plaintext: an integer for `z<m>` keys, an element label such as `(123)` otherwise.
        #[arg(long)]
        plain: String,
        /// RNG seed for the encryption randomness.
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Decrypt a ciphertext file; prints the plaintext label.
    Decrypt {
        /// Secret key file.
        #[arg(long)]
        sk: PathBuf,
        /// Public key file.
        #[arg(long)]
        pk: PathBuf,
        /// Ciphertext file.
        #[arg(long)]
        cipher: PathBuf,
    },
    /// Multiply two ciphertext files.
    Hommul {
        /// Public key file.
        #[arg(long)]
        pk: PathBuf,
        /// First ciphertext file.
        c1: PathBuf,
        /// Second ciphertext file.
        c2: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Compile a boolean circuit into a group program.
    Compile {
        /// Boolean circuit file.
        #[arg(long)]
        circuit: PathBuf,
        /// Unsolvable builtin group to compile into.
        #[arg(long, default_value = "sym5")]
        group: String,
        /// Refuse circuits deeper than this.
        #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
        max_depth: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate a group program on an input bit string.
    Simulate {
        /// Group program file.
        #[arg(long)]
        program: PathBuf,
        /// Input bits, e.g. `101`.
        #[arg(long)]
        input: String,
    },
    /// Run one of the two-party protocols in process.
    Protocol {
        #[command(subcommand)]
        kind: ProtocolKind,
    },
    /// Attacks on the cyclic system.
    Attack {
        #[command(subcommand)]
        kind: AttackKind,
    },
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Keys {
    /// Alice's public key file.
    #[arg(long)]
    pub pk: PathBuf,
    /// Alice's secret key file.
    #[arg(long)]
    pub sk: PathBuf,
    /// Seed for both parties' randomness.
    #[arg(long)]
    pub seed: u64,
    /// Write the message transcript here.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ProtocolKind {
    /// Evaluating an encrypted circuit: Alice holds the circuit, Bob the bits.
    Circuit {
        #[command(flatten)]
        keys: Keys,
        /// Boolean circuit file.
        #[arg(long)]
        circuit: PathBuf,
        /// Bob's input bits, e.g. `101`.
        #[arg(long)]
        input: String,
    },
    /// Evaluating at an encrypted input: Alice holds the elements, Bob the group circuit.
    Input {
        #[command(flatten)]
        keys: Keys,
        /// Group circuit file (`GCIRC v1`).
        #[arg(long)]
        gcircuit: PathBuf,
        /// Space- or comma-separated element labels.
        #[arg(long)]
        inputs: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum AttackKind {
    /// Factor the modulus using the trapdoor as an INVERSE oracle.
    Factor {
        /// Public key file.
        #[arg(long)]
        pk: PathBuf,
        /// Secret key file; the trapdoor answers the oracle queries.
        #[arg(long)]
        sk: PathBuf,
        /// RNG seed for the attack.
        #[arg(long)]
        seed: u64,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

/// [`run`] on the process arguments and standard streams.
pub fn run_cli() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn emit(out: &Output, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Builtin name or a `GROUP v1` table file.
fn load_group(spec: &str) -> Result<FiniteGroup> {
    match builtin(spec) {
        Some(group) => group,
        None => FiniteGroup::from_text(&read(Path::new(spec))?),
    }
}

enum PublicKey {
    Cyclic(CyclicPublicKey),
    General(GeneralPublicKey),
}

fn load_pk(path: &Path) -> Result<PublicKey> {
    let text = read(path)?;
    if is_cyclic_key_text(&text) {
        Ok(PublicKey::Cyclic(CyclicPublicKey::from_text(&text)?))
    } else {
        Ok(PublicKey::General(GeneralPublicKey::from_text(&text)?))
    }
}

fn load_general_pair(pk: &Path, sk: &Path) -> Result<GeneralKeyPair> {
    let public = match load_pk(pk)? {
        PublicKey::General(pk) => pk,
        PublicKey::Cyclic(_) => {
            return Err(Error::InvalidKey(
                "protocols need a general (non z<m>) key".into(),
            ))
        }
    };
    let secret = GeneralSecretKey::from_text(&read(sk)?, &public)?;
    Ok(GeneralKeyPair { public, secret })
}

fn cyclic_order(spec: &str) -> Option<u64> {
    spec.strip_prefix('z')?.parse().ok()
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Keygen {
            group,
            bits,
            seed,
            out,
        } => {
            let mut rng = rng(*seed);
            let (pk, sk) = match cyclic_order(group) {
                Some(m) => {
                    let pair = keygen_cyclic(m, *bits, &mut rng)?;
                    (pair.public.to_text(), pair.secret.to_text())
                }
                None => {
                    let pair = keygen_general(&load_group(group)?, *bits, &mut rng)?;
                    (pair.public.to_text(), pair.secret.to_text())
                }
            };
            fs::create_dir_all(out)?;
            fs::write(out.join("pk.txt"), pk)?;
            fs::write(out.join("sk.txt"), sk)?;
            if cli.verbose {
                writeln!(
                    stderr,
                    "wrote {} and {}",
                    out.join("pk.txt").display(),
                    out.join("sk.txt").display()
                )?;
            }
        }
        Command::Encrypt {
            pk,
            plain,
            seed,
            out,
        } => {
            let mut rng = rng(*seed);
            let text = match load_pk(pk)? {
                PublicKey::Cyclic(pk) => {
                    let i: u64 = plain
                        .trim()
                        .parse()
                        .map_err(|_| Error::UnknownElement(plain.clone()))?;
                    encrypt_cyclic(&pk, i, &mut rng)?.to_text()
                }
                PublicKey::General(pk) => {
                    let h = pk.group().parse_element(plain.trim())?;
                    encrypt_general(&pk, h, &mut rng)?.to_text() + "\n"
                }
            };
            emit(out, stdout, &text)?;
        }
        Command::Decrypt { sk, pk, cipher } => {
            let label = match load_pk(pk)? {
                PublicKey::Cyclic(pk) => {
                    let sk = CyclicSecretKey::from_text(&read(sk)?, &pk)?;
                    decrypt_cyclic(&sk, &pk, &CyclicCiphertext::from_text(&read(cipher)?, &pk)?)?
                        .to_string()
                }
                PublicKey::General(pk) => {
                    let sk = GeneralSecretKey::from_text(&read(sk)?, &pk)?;
                    let c = GWord::parse(&read(cipher)?, pk.family())?;
                    pk.group().label(decrypt_general(&sk, &pk, &c)?)
                }
            };
            writeln!(stdout, "{label}")?;
        }
        Command::Hommul { pk, c1, c2, out } => {
            let text = match load_pk(pk)? {
                PublicKey::Cyclic(pk) => {
                    let a = CyclicCiphertext::from_text(&read(c1)?, &pk)?;
                    let b = CyclicCiphertext::from_text(&read(c2)?, &pk)?;
                    mult_ciphertexts(&pk, &a, &b).to_text()
                }
                PublicKey::General(pk) => {
                    let a = GWord::parse(&read(c1)?, pk.family())?;
                    let b = GWord::parse(&read(c2)?, pk.family())?;
                    mult_ciphertexts_general(&pk, &a, &b).to_text() + "\n"
                }
            };
            emit(out, stdout, &text)?;
        }
        Command::Compile {
            circuit,
            group,
            max_depth,
            out,
        } => {
            let c = parse_circuit(&read(circuit)?)?;
            let p = compile_with_cap(&c, &load_group(group)?, *max_depth)?;
            if cli.verbose {
                writeln!(stderr, "depth {}, {} instructions", c.depth(), p.len())?;
            }
            emit(out, stdout, &p.to_text())?;
        }
        Command::Simulate { program, input } => {
            let p = GroupProgram::from_text(&read(program)?)?;
            let h = eval_program(&p, &parse_bits(input)?)?;
            let bit = if h == p.target() {
                1
            } else if h.is_identity() {
                0
            } else {
                return Err(Error::UnexpectedValue(p.group().label(h)));
            };
            writeln!(stdout, "value {}\nbit {bit}", p.group().label(h))?;
        }
        Command::Protocol { kind } => match kind {
            ProtocolKind::Circuit {
                keys,
                circuit,
                input,
            } => {
                let pair = load_general_pair(&keys.pk, &keys.sk)?;
                let c = parse_circuit(&read(circuit)?)?;
                let run = protocol_encrypted_circuit(&pair, &c, &parse_bits(input)?, keys.seed)?;
                write_transcript(keys, &run.transcript.to_text())?;
                writeln!(stdout, "{}", u8::from(run.result))?;
            }
            ProtocolKind::Input {
                keys,
                gcircuit,
                inputs,
            } => {
                let pair = load_general_pair(&keys.pk, &keys.sk)?;
                let group = pair.public.group();
                let bh = GroupCircuit::from_text_with_group(&read(gcircuit)?, group)?;
                let y = inputs
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| group.parse_element(s))
                    .collect::<Result<Vec<_>>>()?;
                let run = protocol_encrypted_input(&pair, &y, &bh, keys.seed)?;
                write_transcript(keys, &run.transcript.to_text())?;
                writeln!(stdout, "{}", group.label(run.result))?;
            }
        },
        Command::Attack {
            kind: AttackKind::Factor { pk, sk, seed },
        } => {
            let pairs: Vec<CyclicKeyPair> = match load_pk(pk)? {
                PublicKey::Cyclic(pk) => {
                    let sk = CyclicSecretKey::from_text(&read(sk)?, &pk)?;
                    vec![CyclicKeyPair {
                        public: pk,
                        secret: sk,
                    }]
                }
                PublicKey::General(pk) => {
                    let sk = GeneralSecretKey::from_text(&read(sk)?, &pk)?;
                    pk.family()
                        .ids()
                        .map(|i| {
                            Ok(CyclicKeyPair {
                                public: pk.family().key(i)?.clone(),
                                secret: sk.family().key(i)?.clone(),
                            })
                        })
                        .collect::<Result<_>>()?
                }
            };
            let mut rng = rng(*seed);
            for pair in &pairs {
                let mut oracle = TrapdoorOracle::new(
                    pair,
                    ChaCha20Rng::from_rng(&mut rng).expect("ChaCha never fails"),
                );
                let (p, q) = factor_via_inverse_oracle(
                    &pair.public.factor_instance(),
                    &mut oracle,
                    &mut rng,
                )?;
                writeln!(stdout, "n = {}\np = {p}\nq = {q}", pair.public.n())?;
                if cli.verbose {
                    writeln!(stderr, "{} oracle calls", oracle.calls)?;
                }
            }
        }
    }
    Ok(())
}

fn write_transcript(keys: &Keys, text: &str) -> Result<()> {
    if let Some(path) = &keys.transcript {
        fs::write(path, text)?;
    }
    Ok(())
}
