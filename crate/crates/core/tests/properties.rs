//! Randomized invariants, each checked against an independent computation
//! (machine-integer arithmetic, permutation composition, or circuit evaluation).

use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use homgroup::barrington::{compile_barrington, eval_program};
use homgroup::circuit::{assignments, parse_circuit};
use homgroup::cyclic::{
    decrypt_cyclic, encrypt_cyclic, keygen_cyclic, mult_ciphertexts, CyclicKeyPair,
};
use homgroup::freeprod::{g_inverse, g_multiply, normalize, GWord};
use homgroup::general::{decrypt_general, encrypt_general, keygen_general, GeneralKeyPair};
use homgroup::group::{sym, Elem, FiniteGroup};
use homgroup::numtheory::{jacobi, mod_inverse, Residue};

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn pow_u64(b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1u128 % u128::from(n);
    let mut b128 = u128::from(b % n);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b128 % u128::from(n);
        }
        b128 = b128 * b128 % u128::from(n);
        e >>= 1;
    }
    acc as u64
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn cyclic_key(m: u64) -> &'static CyclicKeyPair {
    static KEYS: OnceLock<Vec<CyclicKeyPair>> = OnceLock::new();
    let keys = KEYS.get_or_init(|| {
        (2..=6)
            .map(|m| keygen_cyclic(m, 20, &mut rng(m)).unwrap())
            .collect()
    });
    &keys[(m - 2) as usize]
}

fn s3_key() -> &'static (FiniteGroup, GeneralKeyPair) {
    static KEY: OnceLock<(FiniteGroup, GeneralKeyPair)> = OnceLock::new();
    KEY.get_or_init(|| {
        let g = sym(3).unwrap();
        let pair = keygen_general(&g, 12, &mut rng(33)).unwrap();
        (g, pair)
    })
}

/// Raw letters drawn from a small pool per factor so that merges and
/// cancellations actually happen. Squares have Jacobi symbol 1, so every
/// letter is a valid element of its factor.
fn raw_word(spec: &[(usize, usize)]) -> Vec<(usize, BigUint)> {
    let (_, pair) = s3_key();
    let family = pair.public.family();
    spec.iter()
        .map(|&(f, v)| {
            let factor = 1 + f % family.len();
            let n = family.key(factor).unwrap().n();
            let base = Residue::new(BigUint::from(2u32 + (v / 2) as u32), n.clone()).pow_u64(2);
            let value = if v % 2 == 0 {
                base
            } else {
                base.inverse().unwrap()
            };
            (factor, value.value().clone())
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn modpow_matches_machine_arithmetic(b in 0u64..1_000_000, e in 0u64..10_000, n in 2u64..1_000_000) {
        let r = Residue::new(b, n).pow(&BigUint::from(e));
        prop_assert_eq!(r.value(), &BigUint::from(pow_u64(b, e, n)));
    }

    #[test]
    fn inverse_is_inverse(a in 1u64..100_000, n in 2u64..100_000) {
        let r = Residue::new(a, n);
        match mod_inverse(&r) {
            Ok(inv) => {
                let product = r.mul(&inv);
                prop_assert_eq!(product.value(), &BigUint::from(1 % n));
            }
            Err(_) => prop_assert!(num_integer::gcd(a, n) != 1),
        }
    }

    #[test]
    fn jacobi_is_euler_criterion_for_primes(a in 0u64..100_000, p in 3u64..5_000) {
        prop_assume!(is_prime(p));
        let euler = pow_u64(a, (p - 1) / 2, p);
        let expected = if a % p == 0 { 0 } else if euler == 1 { 1 } else { -1 };
        prop_assert_eq!(jacobi(&BigUint::from(a), &BigUint::from(p)).unwrap(), expected);
    }

    #[test]
    fn jacobi_is_multiplicative_in_the_modulus(a in 0u64..10_000, p in 3u64..300, q in 3u64..300) {
        prop_assume!(p % 2 == 1 && q % 2 == 1);
        let j = |n: u64| jacobi(&BigUint::from(a), &BigUint::from(n)).unwrap();
        prop_assert_eq!(j(p * q), j(p) * j(q));
    }

    #[test]
    fn cyclic_round_trip_and_homomorphism(m in 2u64..=6, i in 0u64..6, j in 0u64..6, seed: u64) {
        let (i, j) = (i % m, j % m);
        let pair = cyclic_key(m);
        let mut rng = rng(seed);
        let c1 = encrypt_cyclic(&pair.public, i, &mut rng).unwrap();
        let c2 = encrypt_cyclic(&pair.public, j, &mut rng).unwrap();
        prop_assert_eq!(decrypt_cyclic(&pair.secret, &pair.public, &c1).unwrap(), i);
        let c = mult_ciphertexts(&pair.public, &c1, &c2);
        prop_assert_eq!(decrypt_cyclic(&pair.secret, &pair.public, &c).unwrap(), (i + j) % m);
    }

    #[test]
    fn permutation_products_compose_left_to_right(a in 0usize..120, b in 0usize..120) {
        let g = sym(5).unwrap();
        let (pa, pb) = (g.permutation(Elem(a)).unwrap(), g.permutation(Elem(b)).unwrap());
        let pab = g.permutation(g.mul(Elem(a), Elem(b))).unwrap();
        for x in 0..5 {
            prop_assert_eq!(pab[x], pb[pa[x] as usize]);
        }
    }

    #[test]
    fn normal_form_laws(
        u in prop::collection::vec((0usize..5, 0usize..6), 0..12),
        v in prop::collection::vec((0usize..5, 0usize..6), 0..12),
        w in prop::collection::vec((0usize..5, 0usize..6), 0..12),
    ) {
        let family = s3_key().1.public.family();
        let (ru, rv, rw) = (raw_word(&u), raw_word(&v), raw_word(&w));
        let (nu, nv, nw) = (
            normalize(&ru, family).unwrap(),
            normalize(&rv, family).unwrap(),
            normalize(&rw, family).unwrap(),
        );
        let raw_uv: Vec<_> = ru.iter().chain(&rv).cloned().collect();
        prop_assert_eq!(normalize(&raw_uv, family).unwrap(), g_multiply(&nu, &nv));
        prop_assert_eq!(g_multiply(&g_multiply(&nu, &nv), &nw), g_multiply(&nu, &g_multiply(&nv, &nw)));
        prop_assert!(g_multiply(&nu, &g_inverse(&nu)).is_empty());
        for pair in nu.letters().windows(2) {
            prop_assert_ne!(pair[0].factor(), pair[1].factor());
        }
        prop_assert_eq!(GWord::parse(&nu.to_text(), family).unwrap(), nu);
    }

    #[test]
    fn general_homomorphism_over_sym3(a in 0usize..6, b in 0usize..6, seed: u64) {
        let (g, pair) = s3_key();
        let mut rng = rng(seed);
        let c1 = encrypt_general(&pair.public, Elem(a), &mut rng).unwrap();
        let c2 = encrypt_general(&pair.public, Elem(b), &mut rng).unwrap();
        prop_assert_eq!(decrypt_general(&pair.secret, &pair.public, &c1).unwrap(), Elem(a));
        let c = g_multiply(&c1, &c2);
        prop_assert_eq!(decrypt_general(&pair.secret, &pair.public, &c).unwrap(), g.mul(Elem(a), Elem(b)));
        let inv = g_inverse(&c1);
        prop_assert_eq!(decrypt_general(&pair.secret, &pair.public, &inv).unwrap(), g.inv(Elem(a)));
    }
}

/// Circuit text over inputs `x0..x{n-1}` with gates picked from `spec`.
fn circuit_text(n: usize, spec: &[(u8, usize, usize)]) -> String {
    let mut text = format!(
        "INPUTS {}\n",
        (0..n)
            .map(|i| format!("x{i}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let name = |k: usize| {
        if k < n {
            format!("x{k}")
        } else {
            format!("g{}", k - n)
        }
    };
    for (i, &(kind, a, b)) in spec.iter().enumerate() {
        let wires = n + i;
        let (a, b) = (name(a % wires), name(b % wires));
        let rhs = match kind % 5 {
            0 => format!("AND {a} {b}"),
            1 => format!("OR {a} {b}"),
            2 => format!("NOT {a}"),
            3 => "TRUE".to_string(),
            _ => format!("AND {a} {a}"),
        };
        text.push_str(&format!("g{i} = {rhs}\n"));
    }
    text.push_str(&format!("OUTPUT {}\n", name(n + spec.len() - 1)));
    text
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_circuits_compile_exactly(n in 1usize..=4, spec in prop::collection::vec((0u8..5, 0usize..16, 0usize..16), 1..6)) {
        let c = parse_circuit(&circuit_text(n, &spec)).unwrap();
        prop_assert_eq!(parse_circuit(&c.to_text()).unwrap(), c.clone());
        let p = compile_barrington(&c, &sym(5).unwrap()).unwrap();
        for x in assignments(n) {
            let expected = if c.eval(&x).unwrap() { p.target() } else { Elem::IDENTITY };
            prop_assert_eq!(eval_program(&p, &x).unwrap(), expected);
        }
    }
}
