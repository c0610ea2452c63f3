//! Group programs: words `h_1^{x_{l_1}} ... h_m^{x_{l_m}}` over a finite group
//! that evaluate to `target^{B(x)}` for a boolean circuit `B`.
//!
//! Compilation needs an unsolvable group. Every gate's program is normalized
//! to one global 5-cycle `sigma`:
//!
//! * `NOT`: append `sigma^-1` on the pseudo-variable (see below), giving
//!   `sigma^{-(1-b)}`, then conjugate `sigma^-1` back to `sigma`.
//! * `AND`: with `alpha`, `beta` conjugates of `sigma` whose commutator is a
//!   5-cycle, `P_u^alpha P_v^beta (P_u^alpha)^-1 (P_v^beta)^-1` computes
//!   `[alpha, beta]^{u v}`; conjugate the commutator back to `sigma`.
//! * `OR`: `NOT(AND(NOT u, NOT v))`.
//!
//! Instructions without a real input (from `NOT` and `TRUE`) read a reserved
//! pseudo-variable with index `n` that is always 1.
//!
//! A gate of depth `d` compiles to at most `3 * 4^d - 2` instructions: `OR`
//! gives `S(d) <= 4 S(d-1) + 5`, the worst case.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::group::{builtin, Elem, FiniteGroup};
use crate::text::{parse_usize, Lines};

/// Default limit on circuit depth.
pub const DEFAULT_DEPTH_CAP: usize = 12;
/// Per-input base size `s_0` in the bound `size <= s_0 * 4^depth`.
pub const BASE_SIZE: usize = 3;

pub const PROGRAM_HEADER: &str = "GPROG v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupProgram {
    group: FiniteGroup,
    input_count: usize,
    instructions: Vec<(Elem, usize)>,
    target: Elem,
}

/// `s_0 * 4^depth`.
pub fn size_bound(depth: usize) -> usize {
    BASE_SIZE.saturating_mul(4usize.saturating_pow(depth as u32))
}

/// The conjugating elements used by the compiler.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Gadget {
    sigma: Elem,
    /// `to_alpha^-1 sigma to_alpha = alpha`, likewise for beta.
    to_alpha: Elem,
    to_beta: Elem,
    /// `from_gamma^-1 [alpha, beta] from_gamma = sigma`.
    from_gamma: Elem,
    /// `from_inverse^-1 sigma^-1 from_inverse = sigma`.
    from_inverse: Elem,
}

/// The smallest-index element of order 5 together with the first pair
/// `(alpha, beta)` of its conjugates (in index order) whose commutator is
/// conjugate to it, provided it is also conjugate to its own inverse.
pub fn find_commutator_pair(group: &FiniteGroup) -> Result<(Elem, Elem)> {
    let gadget = gadget(group)?;
    Ok((
        group.conjugate(gadget.sigma, gadget.to_alpha),
        group.conjugate(gadget.sigma, gadget.to_beta),
    ))
}

fn gadget(group: &FiniteGroup) -> Result<Gadget> {
    let sigma = group
        .elements()
        .find(|&e| group.element_order(e) == 5)
        .ok_or(Error::NoCommutatorPair)?;
    let from_inverse = group
        .conjugator(group.inv(sigma), sigma)
        .ok_or(Error::NoCommutatorPair)?;
    let mut class: Vec<(Elem, Elem)> = Vec::new();
    for c in group.elements() {
        let x = group.conjugate(sigma, c);
        if !class.iter().any(|&(y, _)| y == x) {
            class.push((x, c));
        }
    }
    class.sort();
    for &(alpha, to_alpha) in &class {
        for &(beta, to_beta) in &class {
            let gamma = group.commutator(alpha, beta);
            if let Some(&(_, to_gamma)) = class.iter().find(|&&(y, _)| y == gamma) {
                return Ok(Gadget {
                    sigma,
                    to_alpha,
                    to_beta,
                    from_gamma: group.inv(to_gamma),
                    from_inverse,
                });
            }
        }
    }
    Err(Error::NoCommutatorPair)
}

pub fn compile_barrington(c: &Circuit, group: &FiniteGroup) -> Result<GroupProgram> {
    compile_with_cap(c, group, DEFAULT_DEPTH_CAP)
}

pub fn compile_with_cap(c: &Circuit, group: &FiniteGroup, cap: usize) -> Result<GroupProgram> {
    if group.is_solvable() {
        return Err(Error::SolvableGroup);
    }
    let depth = c.depth();
    if depth > cap {
        return Err(Error::DepthExceeded { depth, cap });
    }
    let gd = gadget(group)?;
    let n = c.input_count();
    let conj = |prog: &[(Elem, usize)], by: Elem| -> Vec<(Elem, usize)> {
        prog.iter()
            .map(|&(e, l)| (group.conjugate(e, by), l))
            .collect()
    };
    let invert = |prog: &[(Elem, usize)]| -> Vec<(Elem, usize)> {
        prog.iter().rev().map(|&(e, l)| (group.inv(e), l)).collect()
    };
    let not = |prog: &[(Elem, usize)]| -> Vec<(Elem, usize)> {
        let mut p = prog.to_vec();
        p.push((group.inv(gd.sigma), n));
        conj(&p, gd.from_inverse)
    };
    let and = |u: &[(Elem, usize)], v: &[(Elem, usize)]| -> Vec<(Elem, usize)> {
        let pu = conj(u, gd.to_alpha);
        let pv = conj(v, gd.to_beta);
        let mut p = Vec::with_capacity(2 * (pu.len() + pv.len()));
        p.extend_from_slice(&pu);
        p.extend_from_slice(&pv);
        p.extend(invert(&pu));
        p.extend(invert(&pv));
        conj(&p, gd.from_gamma)
    };

    let depths = c.depths();
    let mut programs: Vec<Vec<(Elem, usize)>> = Vec::with_capacity(c.gates().len());
    for (i, gate) in c.gates().iter().enumerate() {
        let p = match *gate {
            Gate::Input(l) => vec![(gd.sigma, l)],
            Gate::Const(true) => vec![(gd.sigma, n)],
            Gate::Const(false) => Vec::new(),
            Gate::Not(a) => not(&programs[a]),
            Gate::And(a, b) => and(&programs[a], &programs[b]),
            Gate::Or(a, b) => not(&and(&not(&programs[a]), &not(&programs[b]))),
        };
        assert!(
            p.len() <= size_bound(depths[i]),
            "program size exceeds 3 * 4^depth"
        );
        programs.push(p);
    }
    Ok(GroupProgram {
        group: group.clone(),
        input_count: n,
        instructions: programs.swap_remove(c.output()),
        target: gd.sigma,
    })
}

impl GroupProgram {
    /// Validates variable indices (at most `input_count`, the pseudo-variable)
    /// and that the target is not the identity.
    pub fn new(
        group: FiniteGroup,
        input_count: usize,
        instructions: Vec<(Elem, usize)>,
        target: Elem,
    ) -> Result<Self> {
        if target.is_identity() || !group.contains(target) {
            return Err(Error::parse("program target must be a nonidentity element"));
        }
        for &(e, l) in &instructions {
            if !group.contains(e) || l > input_count {
                return Err(Error::parse(format!("bad instruction ({e}, {l})")));
            }
        }
        Ok(GroupProgram {
            group,
            input_count,
            instructions,
            target,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn instructions(&self) -> &[(Elem, usize)] {
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

    /// Conjugates every instruction and the target by `by`.
    pub fn conjugated(&self, by: Elem) -> GroupProgram {
        let g = &self.group;
        GroupProgram {
            group: g.clone(),
            input_count: self.input_count,
            instructions: self
                .instructions
                .iter()
                .map(|&(e, l)| (g.conjugate(e, by), l))
                .collect(),
            target: g.conjugate(self.target, by),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{PROGRAM_HEADER} {} {} {}\n",
            self.group.id(),
            self.input_count,
            self.target
        );
        for (e, l) in &self.instructions {
            out.push_str(&format!("{e} {l}\n"));
        }
        out
    }

    /// Parses a program over a builtin group.
    pub fn from_text(text: &str) -> Result<Self> {
        Self::parse(text, None)
    }

    /// Parses a program over `group` (which must match the header's group id
    /// unless that id is `custom`).
    pub fn from_text_with_group(text: &str, group: &FiniteGroup) -> Result<Self> {
        Self::parse(text, Some(group))
    }

    fn parse(text: &str, group: Option<&FiniteGroup>) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (no, header) = lines.expect_line("program header")?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let ["GPROG", "v1", id, n, target] = fields.as_slice() else {
            return Err(Error::parse(format!(
                "line {no}: expected `{PROGRAM_HEADER} <group> <n> <target>`"
            )));
        };
        let group = match group {
            Some(g) if *id == "custom" || g.id() == *id => g.clone(),
            Some(_) => return Err(Error::GroupMismatch),
            None => builtin(id)
                .ok_or_else(|| Error::parse(format!("line {no}: unknown group `{id}`")))??,
        };
        let n = parse_usize(n, no)?;
        let target = Elem(parse_usize(target, no)?);
        let mut instructions = Vec::new();
        while let Some((no, line)) = lines.next_line() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [e, l] = fields.as_slice() else {
                return Err(Error::parse(format!(
                    "line {no}: expected `<element> <variable>`"
                )));
            };
            instructions.push((Elem(parse_usize(e, no)?), parse_usize(l, no)?));
        }
        GroupProgram::new(group, n, instructions, target)
    }
}

/// Left-to-right product of the instructions whose variable is set; the
/// pseudo-variable `n` is always set.
pub fn eval_program(p: &GroupProgram, x: &[bool]) -> Result<Elem> {
    if x.len() != p.input_count {
        return Err(Error::ArityMismatch {
            expected: p.input_count,
            got: x.len(),
        });
    }
    Ok(p.group.product(
        p.instructions
            .iter()
            .filter(|&&(_, l)| l == p.input_count || x[l])
            .map(|&(e, _)| e),
    ))
}
