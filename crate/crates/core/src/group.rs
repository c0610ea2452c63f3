//! Finite groups given by their Cayley table.
//!
//! Element 0 is always the identity. For permutation groups the product
//! `a * b` means "apply `a` first, then `b`", i.e. `(a * b)(x) = b(a(x))`,
//! and elements are enumerated by their one-line notation in lexicographic
//! order.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::text::{parse_usize, Lines};

/// Index of an element in its group's table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub usize);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    pub fn index(self) -> usize {
        self.0
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Largest k accepted by [`sym`] and [`alt`].
pub const MAX_PERMUTATION_DEGREE: usize = 6;
/// Largest m accepted by [`cyclic`].
pub const MAX_CYCLIC_ORDER: usize = 1024;
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;
const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Origin {
    Table,
    Cyclic(usize),
    Symmetric(usize),
    Alternating(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    labels: Option<Vec<String>>,
    /// One-line images (0-based) for permutation groups.
    perms: Option<Vec<Vec<u8>>>,
    origin: Origin,
}

/// Validates a Cayley table and builds the group.
pub fn group_from_table(rows: &[Vec<usize>]) -> Result<FiniteGroup> {
    let order = rows.len();
    if order == 0
        || rows
            .iter()
            .any(|r| r.len() != order || r.iter().any(|&x| x >= order))
    {
        return Err(Error::BadTable);
    }
    for (i, row) in rows.iter().enumerate() {
        if rows[0][i] != i || row[0] != i {
            return Err(Error::NoIdentity);
        }
    }
    for i in 0..order {
        let mut seen_row = vec![false; order];
        let mut seen_col = vec![false; order];
        for j in 0..order {
            if std::mem::replace(&mut seen_row[rows[i][j]], true)
                || std::mem::replace(&mut seen_col[rows[j][i]], true)
            {
                return Err(Error::NotLatinSquare);
            }
        }
    }
    let mut inverses = vec![0u32; order];
    for (a, inv) in inverses.iter_mut().enumerate() {
        let b = (0..order)
            .find(|&b| rows[a][b] == 0 && rows[b][a] == 0)
            .ok_or(Error::NoInverse(a))?;
        *inv = b as u32;
    }
    let at = |a: usize, b: usize| rows[a][b];
    if order <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAssociative(a, b, c));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha20Rng::seed_from_u64(0x5eed);
        for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
            let (a, b, c) = (
                rng.gen_range(0..order),
                rng.gen_range(0..order),
                rng.gen_range(0..order),
            );
            if at(at(a, b), c) != at(a, at(b, c)) {
                return Err(Error::NotAssociative(a, b, c));
            }
        }
    }
    Ok(FiniteGroup {
        order,
        table: rows.iter().flatten().map(|&x| x as u32).collect(),
        inverses,
        labels: None,
        perms: None,
        origin: Origin::Table,
    })
}

/// Cyclic group `Z_m` under addition, labelled `0..m-1`.
pub fn cyclic(m: usize) -> Result<FiniteGroup> {
    if m == 0 || m > MAX_CYCLIC_ORDER {
        return Err(Error::TooLarge(format!("z{m}")));
    }
    let rows: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..m).map(|j| (i + j) % m).collect())
        .collect();
    let mut g = group_from_table(&rows)?;
    g.labels = Some((0..m).map(|i| i.to_string()).collect());
    g.origin = Origin::Cyclic(m);
    Ok(g)
}

/// Symmetric group on `{1..k}`.
pub fn sym(k: usize) -> Result<FiniteGroup> {
    if k == 0 || k > MAX_PERMUTATION_DEGREE {
        return Err(Error::TooLarge(format!("sym{k}")));
    }
    let perms = permutations(k);
    let mut g = permutation_group(perms)?;
    g.origin = Origin::Symmetric(k);
    Ok(g)
}

/// Alternating group on `{1..k}` (even permutations, same ordering as [`sym`]).
pub fn alt(k: usize) -> Result<FiniteGroup> {
    if k == 0 || k > MAX_PERMUTATION_DEGREE {
        return Err(Error::TooLarge(format!("alt{k}")));
    }
    let perms = permutations(k).into_iter().filter(|p| is_even(p)).collect();
    let mut g = permutation_group(perms)?;
    g.origin = Origin::Alternating(k);
    Ok(g)
}

/// Builtin groups by name: `z<m>`, `sym<k>`, `alt<k>`.
pub fn builtin(name: &str) -> Option<Result<FiniteGroup>> {
    let parse = |prefix: &str| {
        name.strip_prefix(prefix)
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<usize>().ok())
    };
    if let Some(k) = parse("sym") {
        Some(sym(k))
    } else if let Some(k) = parse("alt") {
        Some(alt(k))
    } else {
        parse("z").map(cyclic)
    }
}

fn permutations(k: usize) -> Vec<Vec<u8>> {
    fn rec(prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x as u8);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn is_even(p: &[u8]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

fn permutation_group(perms: Vec<Vec<u8>>) -> Result<FiniteGroup> {
    let index: std::collections::HashMap<&[u8], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let rows: Vec<Vec<usize>> = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| {
                    // apply a, then b
                    let ab: Vec<u8> = a.iter().map(|&x| b[x as usize]).collect();
                    index[ab.as_slice()]
                })
                .collect()
        })
        .collect();
    let mut g = group_from_table(&rows)?;
    g.labels = Some(perms.iter().map(|p| cycle_notation(p)).collect());
    g.perms = Some(perms);
    Ok(g)
}

/// Compact cycle notation on points `1..k`, e.g. `(123)(45)`; identity is `()`.
fn cycle_notation(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Parses cycle notation (spaces and commas between points are optional)
/// into a one-line permutation of `{0..k-1}`.
fn parse_cycles(text: &str, k: usize) -> Option<Vec<u8>> {
    let mut perm: Vec<u8> = (0..k as u8).collect();
    let mut rest = text.trim();
    if rest.is_empty() {
        return None;
    }
    while !rest.is_empty() {
        let inner_end = rest.find(')')?;
        let inner = rest.strip_prefix('(')?.get(..inner_end - 1)?;
        let points: Vec<usize> = if inner.contains([' ', ',']) {
            inner
                .split([' ', ','])
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().ok())
                .collect::<Option<_>>()?
        } else {
            inner
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()?
        };
        if points.iter().any(|&x| x == 0 || x > k) {
            return None;
        }
        // cycles compose left to right, matching the group product
        let mut cycle: Vec<u8> = (0..k as u8).collect();
        for (i, &x) in points.iter().enumerate() {
            cycle[x - 1] = (points[(i + 1) % points.len()] - 1) as u8;
        }
        let distinct: BTreeSet<_> = points.iter().collect();
        if distinct.len() != points.len() {
            return None;
        }
        perm = perm.iter().map(|&x| cycle[x as usize]).collect();
        rest = rest[inner_end + 1..].trim_start();
    }
    Some(perm)
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        Elem::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    /// Non-identity elements in index order.
    pub fn nonidentity(&self) -> impl Iterator<Item = Elem> {
        (1..self.order).map(Elem)
    }

    pub fn contains(&self, e: Elem) -> bool {
        e.0 < self.order
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.table[a.0 * self.order + b.0] as usize)
    }

    pub fn inv(&self, a: Elem) -> Elem {
        Elem(self.inverses[a.0] as usize)
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        let mut acc = Elem::IDENTITY;
        for _ in 0..k % self.element_order(a) as u64 {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Left-to-right product.
    pub fn product(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items
            .into_iter()
            .fold(Elem::IDENTITY, |acc, x| self.mul(acc, x))
    }

    /// `by^-1 * a * by`.
    pub fn conjugate(&self, a: Elem, by: Elem) -> Elem {
        self.mul(self.mul(self.inv(by), a), by)
    }

    /// `a * b * a^-1 * b^-1`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.product([a, b, self.inv(a), self.inv(b)])
    }

    pub fn element_order(&self, g: Elem) -> usize {
        let mut k = 1;
        let mut acc = g;
        while !acc.is_identity() {
            acc = self.mul(acc, g);
            k += 1;
        }
        k
    }

    /// `[1, g, g^2, ...]` up to the order of `g`.
    pub fn cyclic_subgroup(&self, g: Elem) -> Vec<Elem> {
        let mut out = vec![Elem::IDENTITY];
        let mut acc = g;
        while !acc.is_identity() {
            out.push(acc);
            acc = self.mul(acc, g);
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest-index generator, if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<Elem> {
        self.elements()
            .find(|&g| self.element_order(g) == self.order)
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// True iff the derived series reaches the trivial group.
    pub fn is_solvable(&self) -> bool {
        let mut current: Vec<Elem> = self.elements().collect();
        loop {
            if current.len() == 1 {
                return true;
            }
            let commutators: BTreeSet<Elem> = current
                .iter()
                .flat_map(|&a| current.iter().map(move |&b| (a, b)))
                .map(|(a, b)| self.commutator(a, b))
                .collect();
            let derived = self.closure(commutators);
            if derived.len() == current.len() {
                return false;
            }
            current = derived;
        }
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: impl IntoIterator<Item = Elem>) -> Vec<Elem> {
        let gens: Vec<Elem> = gens.into_iter().collect();
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut frontier = vec![Elem::IDENTITY];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y.0] {
                    seen[y.0] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).map(Elem).collect()
    }

    /// Some `c` with `c^-1 * a * c == b`.
    pub fn conjugator(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.elements().find(|&c| self.conjugate(a, c) == b)
    }

    pub fn label(&self, e: Elem) -> String {
        match &self.labels {
            Some(labels) => labels[e.0].clone(),
            None => e.0.to_string(),
        }
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.order {
            return Err(Error::parse("label count does not match group order"));
        }
        self.labels = Some(labels);
        Ok(())
    }

    /// Resolves an element by label, by cycle notation for permutation
    /// groups, or by decimal index.
    pub fn parse_element(&self, text: &str) -> Result<Elem> {
        let text = text.trim();
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == text) {
                return Ok(Elem(i));
            }
        }
        if let Some(perms) = &self.perms {
            if text.starts_with('(') {
                let k = perms[0].len();
                return parse_cycles(text, k)
                    .and_then(|p| perms.iter().position(|q| *q == p))
                    .map(Elem)
                    .ok_or_else(|| Error::UnknownElement(text.to_string()));
            }
        }
        text.parse::<usize>()
            .ok()
            .filter(|&i| i < self.order)
            .map(Elem)
            .ok_or_else(|| Error::UnknownElement(text.to_string()))
    }

    /// One-line image of a permutation-group element (0-based points).
    pub fn permutation(&self, e: Elem) -> Option<&[u8]> {
        self.perms.as_ref().map(|p| p[e.0].as_slice())
    }

    /// Builtin name (`sym5`, `z3`, ...) or `custom`.
    pub fn id(&self) -> String {
        match self.origin {
            Origin::Table => "custom".to_string(),
            Origin::Cyclic(m) => format!("z{m}"),
            Origin::Symmetric(k) => format!("sym{k}"),
            Origin::Alternating(k) => format!("alt{k}"),
        }
    }

    /// Same multiplication table (labels and provenance are ignored).
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.table == other.table
    }

    /// `GROUP v1` table text.
    pub fn to_text(&self) -> String {
        let mut out = format!("GROUP v1 {}\n", self.order);
        for row in self.table.chunks(self.order) {
            let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        if let Some(labels) = &self.labels {
            out.push_str("LABELS\n");
            for l in labels {
                out.push_str(l);
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<FiniteGroup> {
        let mut lines = Lines::new(text);
        let g = Self::read(&mut lines)?;
        lines.expect_end()?;
        Ok(g)
    }

    pub(crate) fn read(lines: &mut Lines<'_>) -> Result<FiniteGroup> {
        let (no, header) = lines.expect_line("GROUP header")?;
        let order = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["GROUP", "v1", order] => parse_usize(order, no)?,
            _ => {
                return Err(Error::parse(format!(
                    "line {no}: expected `GROUP v1 <order>`"
                )))
            }
        };
        if order == 0 || order > 4096 {
            return Err(Error::TooLarge(format!("group of order {order}")));
        }
        let mut rows = Vec::with_capacity(order);
        for _ in 0..order {
            let (no, line) = lines.expect_line("table row")?;
            let row = line
                .split_whitespace()
                .map(|t| parse_usize(t, no))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let mut group = group_from_table(&rows)?;
        if lines.peek() == Some("LABELS") {
            lines.next_line();
            let mut labels = Vec::with_capacity(order);
            for _ in 0..order {
                labels.push(lines.expect_line("label")?.1.to_string());
            }
            let distinct: BTreeSet<&String> = labels.iter().collect();
            if distinct.len() != order {
                return Err(Error::parse("labels must be distinct"));
            }
            group.labels = Some(labels);
        }
        if let Some(builtin) = recognize_builtin(&group) {
            return Ok(builtin);
        }
        Ok(group)
    }
}

/// Files that reproduce a builtin table verbatim (including labels) get the
/// builtin identity back, so cycle-notation parsing keeps working.
fn recognize_builtin(g: &FiniteGroup) -> Option<FiniteGroup> {
    g.labels.as_ref()?;
    let mut names = vec![format!("z{}", g.order)];
    for k in 1..=MAX_PERMUTATION_DEGREE {
        names.push(format!("sym{k}"));
        names.push(format!("alt{k}"));
    }
    names
        .iter()
        .filter_map(|n| builtin(n)?.ok())
        .find(|b| b.table == g.table && b.labels == g.labels)
}
