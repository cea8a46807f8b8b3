//! Power-commutator presentations with relative orders 3, and the free
//! Burnside groups `B(3, 2)` and `B(3, 3)` built from them.
//!
//! A presentation on `g1 .. gn` (0-based in code) has relations
//! `gi^3 = p_i` and `[gj, gi] = t_ji` for `j > i`, where the tails are normal
//! words in generators of index greater than `j` (greater than `i` for
//! powers). The commutator convention is `[a, b] = a^-1 b^-1 a b`, so
//! `gj gi = gi gj t_ji`.
//!
//! Multiplication uses collection from the left on exponent vectors.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::loop_core::{commutator, FiniteLoop, LoopError, Subloop};

/// Largest number of pc-generators supported.
pub const MAX_PC_GENS: usize = 8;

/// Version tag of the presentation text format.
pub const PCP_FORMAT: &str = "pcp/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BurnsideError {
    #[error("B(3,{0}) is not supported (rank must be 2 or 3)")]
    UnsupportedRank(u32),
    #[error("presentation is inconsistent: {0}")]
    Inconsistent(String),
    #[error("invalid tail for {relation}: {reason}")]
    InvalidTail { relation: String, reason: String },
    #[error("cannot parse {what}: {text}")]
    Parse { what: &'static str, text: String },
}

/// A normal word `g1^a1 * ... * gn^an`, exponents in `{0, 1, 2}`. Unused
/// trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PcWord([u8; MAX_PC_GENS]);

impl PcWord {
    pub const IDENTITY: PcWord = PcWord([0; MAX_PC_GENS]);

    pub fn from_exponents(exps: &[u8]) -> PcWord {
        assert!(exps.len() <= MAX_PC_GENS, "too many exponents");
        let mut w = [0; MAX_PC_GENS];
        for (slot, &e) in w.iter_mut().zip(exps) {
            *slot = e % 3;
        }
        PcWord(w)
    }

    /// The pc-generator `g_{i+1}` (0-based `i`).
    pub fn generator(i: usize) -> PcWord {
        let mut w = [0; MAX_PC_GENS];
        w[i] = 1;
        PcWord(w)
    }

    pub fn exponent(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn exponents(&self, n: usize) -> &[u8] {
        &self.0[..n]
    }

    pub fn is_identity(&self) -> bool {
        self.0 == [0; MAX_PC_GENS]
    }

    /// The letters of the word, each generator repeated by its exponent.
    fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
    }
}

impl fmt::Display for PcWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, e)| format!("g{}^{}", i + 1, e)).collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Debug for PcWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `g1^2*g4` style normal words (`1` is the identity). Generators must
/// appear in increasing order, each at most once.
impl FromStr for PcWord {
    type Err = BurnsideError;

    fn from_str(s: &str) -> Result<PcWord, BurnsideError> {
        let err = || BurnsideError::Parse { what: "pc word", text: s.to_string() };
        let s = s.trim();
        if s == "1" {
            return Ok(PcWord::IDENTITY);
        }
        let mut w = [0u8; MAX_PC_GENS];
        let mut last: Option<usize> = None;
        for factor in s.split('*') {
            let factor = factor.trim();
            let body = factor.strip_prefix('g').ok_or_else(err)?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e.parse::<u8>().map_err(|_| err())?),
                None => (body, 1),
            };
            let i: usize = idx.parse().map_err(|_| err())?;
            if i == 0 || i > MAX_PC_GENS || exp == 0 || exp > 2 || last.is_some_and(|l| l >= i - 1) {
                return Err(err());
            }
            w[i - 1] = exp;
            last = Some(i - 1);
        }
        Ok(PcWord(w))
    }
}

impl Serialize for PcWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A consistent power-commutator presentation with all relative orders 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pcp {
    n: usize,
    weights: Vec<u8>,
    powers: Vec<PcWord>,
    /// `comms[j][i]` for `j > i`.
    comms: Vec<Vec<PcWord>>,
}

/// Builder for [`Pcp`]: all relations start trivial.
#[derive(Debug, Clone)]
pub struct PcpBuilder {
    pcp: Pcp,
}

impl PcpBuilder {
    pub fn new(weights: &[u8]) -> PcpBuilder {
        let n = weights.len();
        assert!(n <= MAX_PC_GENS, "at most {MAX_PC_GENS} generators");
        PcpBuilder {
            pcp: Pcp {
                n,
                weights: weights.to_vec(),
                powers: vec![PcWord::IDENTITY; n],
                comms: (0..n).map(|j| vec![PcWord::IDENTITY; j]).collect(),
            },
        }
    }

    /// Sets `[g_j, g_i] = tail` (1-based indices, `j > i`).
    pub fn commutator(mut self, j: usize, i: usize, tail: &str) -> Result<PcpBuilder, BurnsideError> {
        let relation = format!("[g{j},g{i}]");
        if !(1 <= i && i < j && j <= self.pcp.n) {
            return Err(BurnsideError::InvalidTail { relation, reason: "indices out of order".into() });
        }
        let w: PcWord = tail.parse()?;
        if let Some(k) = (0..j).find(|&k| w.0[k] != 0) {
            return Err(BurnsideError::InvalidTail { relation, reason: format!("involves g{}", k + 1) });
        }
        if (self.pcp.n..MAX_PC_GENS).any(|k| w.0[k] != 0) {
            return Err(BurnsideError::InvalidTail { relation, reason: "generator out of range".into() });
        }
        self.pcp.comms[j - 1][i - 1] = w;
        Ok(self)
    }

    /// Sets `g_i^3 = tail` (1-based).
    pub fn power(mut self, i: usize, tail: &str) -> Result<PcpBuilder, BurnsideError> {
        let relation = format!("g{i}^3");
        let w: PcWord = tail.parse()?;
        if (0..i).any(|k| w.0[k] != 0) || (self.pcp.n..MAX_PC_GENS).any(|k| w.0[k] != 0) {
            return Err(BurnsideError::InvalidTail { relation, reason: "generator out of range".into() });
        }
        self.pcp.powers[i - 1] = w;
        Ok(self)
    }

    /// Checks consistency and returns the presentation.
    pub fn build(self) -> Result<Pcp, BurnsideError> {
        let report = pcp_consistency_check(&self.pcp);
        match report.failures.first() {
            None => Ok(self.pcp),
            Some(f) => Err(BurnsideError::Inconsistent(f.clone())),
        }
    }

    /// Returns the presentation without the consistency check.
    pub fn build_unchecked(self) -> Pcp {
        self.pcp
    }
}

impl Pcp {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weights(&self) -> &[u8] {
        &self.weights
    }

    pub fn power_tail(&self, i: usize) -> PcWord {
        self.powers[i]
    }

    /// `[g_j, g_i]` for 0-based `j > i`.
    pub fn commutator_tail(&self, j: usize, i: usize) -> PcWord {
        self.comms[j][i]
    }

    /// `v * g_i` by collection from the left.
    pub fn mul_gen(&self, v: &PcWord, i: usize) -> PcWord {
        let mut w = *v;
        let suffix: Vec<(usize, u8)> = ((i + 1)..self.n).filter(|&j| v.0[j] != 0).map(|j| (j, v.0[j])).collect();
        for &(j, _) in &suffix {
            w.0[j] = 0;
        }
        w.0[i] += 1;
        if w.0[i] == 3 {
            w.0[i] = 0;
            w = self.mul_letters(&w, self.powers[i].letters());
        }
        // The suffix conjugated by g_i: each g_j becomes g_j [g_j, g_i].
        for (j, e) in suffix {
            for _ in 0..e {
                w = self.mul_gen(&w, j);
                w = self.mul_letters(&w, self.comms[j][i].letters());
            }
        }
        w
    }

    fn mul_letters(&self, v: &PcWord, letters: impl Iterator<Item = usize>) -> PcWord {
        letters.fold(*v, |w, g| self.mul_gen(&w, g))
    }

    /// Normal form of a word given as `(generator, exponent)` pairs (0-based).
    pub fn collect(&self, word: &[(usize, u32)]) -> PcWord {
        let mut w = PcWord::IDENTITY;
        for &(g, e) in word {
            for _ in 0..e {
                w = self.mul_gen(&w, g);
            }
        }
        w
    }

    pub fn group_mul(&self, u: &PcWord, v: &PcWord) -> PcWord {
        self.mul_letters(u, v.letters())
    }

    /// Solves `u x = 1` one generator at a time.
    pub fn group_inv(&self, u: &PcWord) -> PcWord {
        let mut w = *u;
        let mut x = PcWord::IDENTITY;
        for i in 0..self.n {
            let e = (3 - w.0[i]) % 3;
            x.0[i] = e;
            for _ in 0..e {
                w = self.mul_gen(&w, i);
            }
        }
        debug_assert!(w.is_identity());
        x
    }

    pub fn order(&self) -> usize {
        3usize.pow(self.n as u32)
    }
}

/// Stable text form: version line, weights, then every nontrivial relation.
impl fmt::Display for Pcp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{PCP_FORMAT}")?;
        writeln!(f, "generators {}", self.n)?;
        let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        writeln!(f, "weights {}", ws.join(" "))?;
        for i in 0..self.n {
            if !self.powers[i].is_identity() {
                writeln!(f, "power g{} = {}", i + 1, self.powers[i])?;
            }
        }
        for j in 0..self.n {
            for i in 0..j {
                if !self.comms[j][i].is_identity() {
                    writeln!(f, "comm g{} g{} = {}", j + 1, i + 1, self.comms[j][i])?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Pcp {
    type Err = BurnsideError;

    fn from_str(s: &str) -> Result<Pcp, BurnsideError> {
        let err = |line: &str| BurnsideError::Parse { what: "presentation", text: line.to_string() };
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| err(""))?;
        if header != PCP_FORMAT {
            return Err(err(header));
        }
        let gens_line = lines.next().ok_or_else(|| err(""))?;
        let n: usize =
            gens_line.strip_prefix("generators ").and_then(|t| t.parse().ok()).ok_or_else(|| err(gens_line))?;
        let w_line = lines.next().ok_or_else(|| err(""))?;
        let weights: Vec<u8> = w_line
            .strip_prefix("weights")
            .ok_or_else(|| err(w_line))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(w_line)))
            .collect::<Result<_, _>>()?;
        if weights.len() != n {
            return Err(err(w_line));
        }
        let mut b = PcpBuilder::new(&weights);
        let gen_index = |t: &str, line: &str| -> Result<usize, BurnsideError> {
            t.strip_prefix('g').and_then(|i| i.parse().ok()).ok_or_else(|| err(line))
        };
        for line in lines {
            let (lhs, tail) = line.split_once('=').ok_or_else(|| err(line))?;
            let parts: Vec<&str> = lhs.split_whitespace().collect();
            b = match parts.as_slice() {
                ["power", g] => b.power(gen_index(g, line)?, tail)?,
                ["comm", gj, gi] => b.commutator(gen_index(gj, line)?, gen_index(gi, line)?, tail)?,
                _ => return Err(err(line)),
            };
        }
        b.build()
    }
}

/// Result of the overlap checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The standard overlap tests, each evaluated two ways by collection:
/// `(gk gj) gi = gk (gj gi)` for `k > j > i`, `(gj^3) gi = gj^2 (gj gi)` and
/// `gj (gi^3) = (gj gi) gi^2` for `j > i`, and `gi (gi^3) = (gi^3) gi`.
pub fn pcp_consistency_check(p: &Pcp) -> ConsistencyReport {
    let g = PcWord::generator;
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut check = |name: String, lhs: PcWord, rhs: PcWord| {
        checks += 1;
        if lhs != rhs {
            failures.push(format!("{name}: {lhs} != {rhs}"));
        }
    };
    let n = p.len();
    for k in 0..n {
        for j in 0..k {
            for i in 0..j {
                let lhs = p.group_mul(&p.group_mul(&g(k), &g(j)), &g(i));
                let rhs = p.group_mul(&g(k), &p.group_mul(&g(j), &g(i)));
                check(format!("(g{} g{}) g{}", k + 1, j + 1, i + 1), lhs, rhs);
            }
        }
    }
    for j in 0..n {
        let sq = p.collect(&[(j, 2)]);
        for i in 0..j {
            let lhs = p.group_mul(&p.power_tail(j), &g(i));
            let rhs = p.group_mul(&sq, &p.group_mul(&g(j), &g(i)));
            check(format!("g{}^3 g{}", j + 1, i + 1), lhs, rhs);

            let lhs = p.group_mul(&g(j), &p.power_tail(i));
            let rhs = p.group_mul(&p.group_mul(&g(j), &g(i)), &p.collect(&[(i, 2)]));
            check(format!("g{} g{}^3", j + 1, i + 1), lhs, rhs);
        }
        let lhs = p.group_mul(&g(j), &p.power_tail(j));
        let rhs = p.group_mul(&p.power_tail(j), &g(j));
        check(format!("g{} g{}^3", j + 1, j + 1), lhs, rhs);
    }
    ConsistencyReport { checks, failures }
}

/// Tails of `[g5, g2]` and `[g6, g1]` in `B(3, 3)` as powers of `g7`.
pub const B33_TAILS: (u8, u8) = (2, 1);

/// The `B(3, 3)` presentation with the two weight-3 tails given explicitly:
/// `[g5, g2] = g7^a`, `[g6, g1] = g7^b`. Not checked for consistency.
pub fn b33_presentation(a: u8, b: u8) -> Pcp {
    let tail = |e: u8| if e.is_multiple_of(3) { "1".to_string() } else { format!("g7^{}", e % 3) };
    PcpBuilder::new(&[1, 1, 1, 2, 2, 2, 3])
        .commutator(2, 1, "g4")
        .and_then(|b| b.commutator(3, 1, "g5"))
        .and_then(|b| b.commutator(3, 2, "g6"))
        .and_then(|b| b.commutator(4, 3, "g7"))
        .and_then(|bd| bd.commutator(5, 2, &tail(a)))
        .and_then(|bd| bd.commutator(6, 1, &tail(b)))
        .expect("well-formed tails")
        .build_unchecked()
}

/// The presentation of `B(3, r)` for `r = 2, 3`.
pub fn burnside_presentation(r: u32) -> Result<Pcp, BurnsideError> {
    match r {
        2 => PcpBuilder::new(&[1, 1, 2]).commutator(2, 1, "g3")?.build(),
        3 => {
            let p = b33_presentation(B33_TAILS.0, B33_TAILS.1);
            let report = pcp_consistency_check(&p);
            match report.failures.into_iter().next() {
                None => Ok(p),
                Some(f) => Err(BurnsideError::Inconsistent(f)),
            }
        }
        other => Err(BurnsideError::UnsupportedRank(other)),
    }
}

/// A group given by a presentation, as a loop. Elements are enumerated in
/// lexicographic order of exponent vectors (`g1` most significant).
#[derive(Debug, Clone)]
pub struct PcGroup {
    pcp: Pcp,
    name: String,
    rank: usize,
}

impl PcGroup {
    /// `rank` is the number of weight-1 generators.
    pub fn new(pcp: Pcp, name: impl Into<String>) -> PcGroup {
        let rank = pcp.weights().iter().filter(|&&w| w == 1).count();
        PcGroup { pcp, name: name.into(), rank }
    }

    pub fn pcp(&self) -> &Pcp {
        &self.pcp
    }

    /// The defining generators (weight 1).
    pub fn generators(&self) -> Vec<PcWord> {
        (0..self.rank).map(PcWord::generator).collect()
    }
}

/// `B(3, r)` for `r = 2, 3`.
pub fn build_burnside(r: u32) -> Result<PcGroup, BurnsideError> {
    Ok(PcGroup::new(burnside_presentation(r)?, format!("B(3,{r})")))
}

/// `B(3, 3)` with the tail of `[g5, g2]` replaced by `g7^1`, skipping the
/// consistency check; the verifiers must reject it.
pub fn build_burnside_mutant() -> PcGroup {
    PcGroup::new(b33_presentation(1, B33_TAILS.1), "B(3,3) with corrupted tail")
}

impl FiniteLoop for PcGroup {
    type Elem = PcWord;

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn order(&self) -> usize {
        self.pcp.order()
    }

    fn element(&self, mut index: usize) -> PcWord {
        let mut w = [0u8; MAX_PC_GENS];
        for k in (0..self.pcp.len()).rev() {
            w[k] = (index % 3) as u8;
            index /= 3;
        }
        PcWord(w)
    }

    fn index_of(&self, x: &PcWord) -> usize {
        x.0[..self.pcp.len()].iter().fold(0, |acc, &e| acc * 3 + e as usize)
    }

    fn identity(&self) -> PcWord {
        PcWord::IDENTITY
    }

    fn mul(&self, x: &PcWord, y: &PcWord) -> PcWord {
        self.pcp.group_mul(x, y)
    }

    fn left_div(&self, x: &PcWord, w: &PcWord) -> PcWord {
        self.pcp.group_mul(&self.pcp.group_inv(x), w)
    }

    fn right_div(&self, w: &PcWord, y: &PcWord) -> PcWord {
        self.pcp.group_mul(w, &self.pcp.group_inv(y))
    }

    fn format_element(&self, x: &PcWord) -> String {
        x.to_string()
    }

    fn parse_element(&self, text: &str) -> Option<PcWord> {
        let w: PcWord = text.parse().ok()?;
        (self.pcp.len()..MAX_PC_GENS).all(|k| w.0[k] == 0).then_some(w)
    }

    fn probe_elements(&self) -> Vec<PcWord> {
        (0..self.pcp.len()).map(PcWord::generator).collect()
    }

    /// A consistent presentation defines a group, so every element is nuclear.
    fn structured_nucleus(&self) -> Option<Result<Subloop<PcWord>, LoopError>> {
        if !pcp_consistency_check(&self.pcp).passed() {
            return Some(Err(LoopError::StrategyUnavailable(format!(
                "{} has an inconsistent presentation",
                self.name
            ))));
        }
        let gens = self.generators();
        let members = self.elements().collect();
        Some(Ok(Subloop::new(self, "Nuc", gens, members)))
    }
}

/// Outcome of a nilpotency-class check on the defining generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub expected_class: usize,
    pub passed: bool,
    /// A nontrivial left-normed commutator of weight `expected_class`.
    pub witness: Option<String>,
    /// A nontrivial left-normed commutator of weight `expected_class + 1`.
    pub violation: Option<String>,
}

/// Left-normed commutators `[[x1, x2], ..., xw]` of the given weight over
/// the defining generators, with their values.
fn left_normed(g: &PcGroup, weight: usize) -> Vec<(Vec<usize>, PcWord)> {
    let gens = g.generators();
    let mut out: Vec<(Vec<usize>, PcWord)> = gens.iter().enumerate().map(|(i, x)| (vec![i], *x)).collect();
    for _ in 1..weight {
        out = out
            .into_iter()
            .flat_map(|(idx, c)| {
                gens.iter().enumerate().map(move |(k, x)| {
                    let mut idx = idx.clone();
                    idx.push(k);
                    (idx, commutator(g, &c, x))
                })
            })
            .collect();
    }
    out
}

fn render_left_normed(idx: &[usize]) -> String {
    let mut s = format!("g{}", idx[0] + 1);
    for &k in &idx[1..] {
        s = format!("[{s},g{}]", k + 1);
    }
    s
}

/// PASS iff some left-normed generator commutator of weight `class` is
/// nontrivial and all of weight `class + 1` are trivial.
pub fn verify_class(g: &PcGroup, class: usize) -> ClassVerdict {
    let witness = left_normed(g, class).into_iter().find(|(_, c)| !c.is_identity());
    let violation = left_normed(g, class + 1).into_iter().find(|(_, c)| !c.is_identity());
    ClassVerdict {
        expected_class: class,
        passed: witness.is_some() && violation.is_none(),
        witness: witness.map(|(i, c)| format!("{} = {}", render_left_normed(&i), c)),
        violation: violation.map(|(i, c)| format!("{} = {}", render_left_normed(&i), c)),
    }
}

pub fn verify_class3(g: &PcGroup) -> ClassVerdict {
    verify_class(g, 3)
}

/// `[[x, y], y] = 1` on `trials` seeded random pairs; returns a failing pair.
pub fn check_two_engel(g: &PcGroup, trials: u64, seed: u64) -> Option<(PcWord, PcWord)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).find_map(|_| {
        let x = g.element(rng.gen_range(0..g.order()));
        let y = g.element(rng.gen_range(0..g.order()));
        let c = commutator(g, &commutator(g, &x, &y), &y);
        (!c.is_identity()).then_some((x, y))
    })
}
