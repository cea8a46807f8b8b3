//! Inner mappings, normality decisions, normal closure and quotients.
//!
//! A subloop is normal iff it is invariant under every inner mapping
//! `T_x = L_x^{-1} R_x`, `L_{x,y} = L_{xy}^{-1} L_x L_y` and
//! `R_{x,y} = R_{xy}^{-1} R_y R_x`. A failed decision carries a
//! [`NonNormalityCertificate`] that re-verifies through public operations.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{commutator, FiniteLoop, LoopError, Subloop, TableLoop, MAX_TABLE_ORDER};

/// Inner-mapping scans over all `(x, y, n)` are allowed up to this many steps.
pub const INNER_MAP_SCAN_LIMIT: u64 = 10_000_000_000;

/// Congruence closure costs about `2 * order^2` products.
pub const CONGRUENCE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InnerMapKind {
    T,
    L,
    R,
}

impl fmt::Display for InnerMapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InnerMapKind::T => "T",
            InnerMapKind::L => "L",
            InnerMapKind::R => "R",
        };
        f.write_str(s)
    }
}

/// `T_x(n) = x \ (n x)`.
pub fn inner_map_t<L: FiniteLoop>(l: &L, x: &L::Elem, n: &L::Elem) -> L::Elem {
    l.left_div(x, &l.mul(n, x))
}

/// `L_{x,y}(n) = (xy) \ (x(yn))`.
pub fn inner_map_l<L: FiniteLoop>(l: &L, x: &L::Elem, y: &L::Elem, n: &L::Elem) -> L::Elem {
    l.left_div(&l.mul(x, y), &l.mul(x, &l.mul(y, n)))
}

/// `R_{x,y}(n) = ((nx)y) / (xy)`.
pub fn inner_map_r<L: FiniteLoop>(l: &L, x: &L::Elem, y: &L::Elem, n: &L::Elem) -> L::Elem {
    l.right_div(&l.mul(&l.mul(n, x), y), &l.mul(x, y))
}

pub fn apply_inner_map<L: FiniteLoop>(
    l: &L,
    kind: InnerMapKind,
    x: &L::Elem,
    y: Option<&L::Elem>,
    n: &L::Elem,
) -> L::Elem {
    match (kind, y) {
        (InnerMapKind::T, _) => inner_map_t(l, x, n),
        (InnerMapKind::L, Some(y)) => inner_map_l(l, x, y, n),
        (InnerMapKind::R, Some(y)) => inner_map_r(l, x, y, n),
        (_, None) => panic!("inner map {kind} needs two parameters"),
    }
}

/// An inner mapping that moves a member of a subloop outside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonNormalityCertificate<E> {
    pub subloop: String,
    pub kind: InnerMapKind,
    pub x: E,
    pub y: Option<E>,
    pub n: E,
    pub image: E,
    /// An element that does not commute with `image`, when one is known.
    pub witness: Option<E>,
    /// `commutator(image, witness)`.
    pub defect: Option<E>,
}

/// Serialized form of a certificate: every element in the loop's text format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub schema: String,
    #[serde(rename = "loop")]
    pub loop_name: String,
    pub subloop: String,
    pub kind: InnerMapKind,
    pub x: String,
    pub y: Option<String>,
    pub n: String,
    pub image: String,
    pub witness: Option<String>,
    pub defect: Option<String>,
}

pub const CERTIFICATE_SCHEMA: &str = "moufang.certificate/1";

impl<E: Clone + Eq + std::hash::Hash + fmt::Debug> NonNormalityCertificate<E> {
    /// Recomputes the inner mapping and all claims from scratch.
    pub fn verify<L: FiniteLoop<Elem = E>>(&self, l: &L, subloop: &Subloop<E>) -> bool {
        if !subloop.contains(&self.n) || subloop.contains(&self.image) {
            return false;
        }
        if apply_inner_map(l, self.kind, &self.x, self.y.as_ref(), &self.n) != self.image {
            return false;
        }
        match (&self.witness, &self.defect) {
            (None, None) => true,
            (Some(d), defect) => {
                let ud = l.mul(&self.image, d);
                let du = l.mul(d, &self.image);
                ud != du && defect.as_ref().is_none_or(|s| *s == commutator(l, &self.image, d))
            }
            (None, Some(_)) => false,
        }
    }

    pub fn record<L: FiniteLoop<Elem = E>>(&self, l: &L) -> CertificateRecord {
        CertificateRecord {
            schema: CERTIFICATE_SCHEMA.to_string(),
            loop_name: l.describe(),
            subloop: self.subloop.clone(),
            kind: self.kind,
            x: l.format_element(&self.x),
            y: self.y.as_ref().map(|y| l.format_element(y)),
            n: l.format_element(&self.n),
            image: l.format_element(&self.image),
            witness: self.witness.as_ref().map(|d| l.format_element(d)),
            defect: self.defect.as_ref().map(|d| l.format_element(d)),
        }
    }

    pub fn describe<L: FiniteLoop<Elem = E>>(&self, l: &L) -> String {
        let params = match &self.y {
            Some(y) => format!("{},{}", l.format_element(&self.x), l.format_element(y)),
            None => l.format_element(&self.x),
        };
        let mut s = format!(
            "{}_{{{}}}({}) = {} not in {}",
            self.kind,
            params,
            l.format_element(&self.n),
            l.format_element(&self.image),
            self.subloop
        );
        if let (Some(d), Some(c)) = (&self.witness, &self.defect) {
            s.push_str(&format!("; witness {} with commutator {}", l.format_element(d), l.format_element(c)));
        }
        s
    }
}

impl CertificateRecord {
    /// Parses the record's elements back through `l` and re-verifies.
    pub fn verify<L: FiniteLoop>(&self, l: &L, subloop: &Subloop<L::Elem>) -> Result<bool, LoopError> {
        let parse = |s: &str| l.parse_element(s).ok_or_else(|| LoopError::ParseElement(s.to_string()));
        let cert = NonNormalityCertificate {
            subloop: self.subloop.clone(),
            kind: self.kind,
            x: parse(&self.x)?,
            y: self.y.as_deref().map(parse).transpose()?,
            n: parse(&self.n)?,
            image: parse(&self.image)?,
            witness: self.witness.as_deref().map(parse).transpose()?,
            defect: self.defect.as_deref().map(parse).transpose()?,
        };
        Ok(cert.verify(l, subloop))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalityMethod {
    /// Deterministic search over probe elements.
    Probe,
    /// Seeded random falsification; a `normal` verdict is only "no
    /// counterexample found".
    Randomized,
    /// Every inner mapping on every member.
    InnerMapScan,
    /// Congruence generated by the subloop, closed under all translations.
    Congruence,
    /// Formal polynomial invariance (polynomial loop only).
    Symbolic,
}

impl fmt::Display for NormalityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NormalityMethod::Probe => "probe",
            NormalityMethod::Randomized => "randomized",
            NormalityMethod::InnerMapScan => "inner-map-scan",
            NormalityMethod::Congruence => "congruence",
            NormalityMethod::Symbolic => "symbolic",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct NormalityVerdict<E> {
    pub normal: bool,
    pub method: NormalityMethod,
    pub certificate: Option<NonNormalityCertificate<E>>,
}

impl<E> NormalityVerdict<E> {
    pub fn normal(method: NormalityMethod) -> NormalityVerdict<E> {
        NormalityVerdict { normal: true, method, certificate: None }
    }

    pub fn refuted(method: NormalityMethod, cert: NonNormalityCertificate<E>) -> NormalityVerdict<E> {
        NormalityVerdict { normal: false, method, certificate: Some(cert) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalityOptions {
    pub samples: u64,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x4d6f_7566_616e_6733;

impl Default for NormalityOptions {
    fn default() -> Self {
        NormalityOptions { samples: 100_000, seed: DEFAULT_SEED }
    }
}

/// Finds an element not commuting with `u`: probes first, then a full scan
/// for moderate orders, then random samples.
pub fn non_commuting_witness<L: FiniteLoop>(l: &L, u: &L::Elem) -> Option<L::Elem> {
    let commutes = |d: &L::Elem| l.mul(u, d) == l.mul(d, u);
    if let Some(d) = l.probe_elements().into_iter().find(|d| !commutes(d)) {
        return Some(d);
    }
    if l.order() <= 200_000 {
        return l.elements().find(|d| !commutes(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    (0..10_000).map(|_| l.element(rng.gen_range(0..l.order()))).find(|d| !commutes(d))
}

fn certify<L: FiniteLoop>(
    l: &L,
    n_sub: &Subloop<L::Elem>,
    kind: InnerMapKind,
    x: L::Elem,
    y: Option<L::Elem>,
    n: L::Elem,
    image: L::Elem,
) -> NonNormalityCertificate<L::Elem> {
    let witness = non_commuting_witness(l, &image);
    let defect = witness.as_ref().map(|d| commutator(l, &image, d));
    NonNormalityCertificate { subloop: n_sub.label().to_string(), kind, x, y, n, image, witness, defect }
}

/// A certificate for `kind` at `(x, y, n)` if the image leaves `sub`.
pub fn certificate_for<L: FiniteLoop>(
    l: &L,
    sub: &Subloop<L::Elem>,
    kind: InnerMapKind,
    x: &L::Elem,
    y: Option<&L::Elem>,
    n: &L::Elem,
) -> Option<NonNormalityCertificate<L::Elem>> {
    let u = apply_inner_map(l, kind, x, y, n);
    (!sub.contains(&u)).then(|| certify(l, sub, kind, x.clone(), y.cloned(), n.clone(), u))
}

/// Deterministic search: for each generator `n` of the subloop, try `T_x`
/// for every probe `x`, then `R_{x,y}` and `L_{x,y}` for every probe pair.
pub fn probe_certificate<L: FiniteLoop>(l: &L, sub: &Subloop<L::Elem>) -> Option<NonNormalityCertificate<L::Elem>> {
    let probes = l.probe_elements();
    for n in sub.generators() {
        for x in &probes {
            if let Some(c) = certificate_for(l, sub, InnerMapKind::T, x, None, n) {
                return Some(c);
            }
        }
        for x in &probes {
            for y in &probes {
                for kind in [InnerMapKind::R, InnerMapKind::L] {
                    if let Some(c) = certificate_for(l, sub, kind, x, Some(y), n) {
                        return Some(c);
                    }
                }
            }
        }
    }
    None
}

/// Seeded random falsification over `samples` inner-mapping evaluations.
pub fn random_certificate<L: FiniteLoop>(
    l: &L,
    sub: &Subloop<L::Elem>,
    samples: u64,
    seed: u64,
) -> Option<NonNormalityCertificate<L::Elem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = sub.members();
    for k in 0..samples {
        let x = l.element(rng.gen_range(0..l.order()));
        let y = l.element(rng.gen_range(0..l.order()));
        let n = &members[rng.gen_range(0..members.len())];
        let kind = [InnerMapKind::T, InnerMapKind::R, InnerMapKind::L][(k % 3) as usize];
        let y = (kind != InnerMapKind::T).then_some(y);
        if let Some(c) = certificate_for(l, sub, kind, &x, y.as_ref(), n) {
            return Some(c);
        }
    }
    None
}

/// Exhaustive scan of all inner mappings on all members.
pub fn scan_certificate<L: FiniteLoop>(
    l: &L,
    sub: &Subloop<L::Elem>,
) -> Result<Option<NonNormalityCertificate<L::Elem>>, LoopError> {
    let ord = l.order() as u64;
    let steps = ord.saturating_mul(ord).saturating_mul(sub.len() as u64);
    if steps > INNER_MAP_SCAN_LIMIT {
        return Err(LoopError::SizeGuard { what: "inner-map scan", order: l.order(), limit: 0 });
    }
    let elems: Vec<L::Elem> = l.elements().collect();
    for x in &elems {
        for n in sub.members() {
            if let Some(c) = certificate_for(l, sub, InnerMapKind::T, x, None, n) {
                return Ok(Some(c));
            }
        }
    }
    for x in &elems {
        for y in &elems {
            for n in sub.members() {
                for kind in [InnerMapKind::R, InnerMapKind::L] {
                    if let Some(c) = certificate_for(l, sub, kind, x, Some(y), n) {
                        return Ok(Some(c));
                    }
                }
            }
        }
    }
    Ok(None)
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }
}

/// Class index (smallest member's enumeration index) for every element under
/// the least congruence identifying all of `sub` with the identity.
pub fn congruence_classes<L: FiniteLoop>(l: &L, sub: &Subloop<L::Elem>) -> Result<Vec<u32>, LoopError> {
    let n = l.order();
    if n > CONGRUENCE_LIMIT {
        return Err(LoopError::SizeGuard { what: "congruence closure", order: n, limit: CONGRUENCE_LIMIT });
    }
    let elems: Vec<L::Elem> = l.elements().collect();
    let mut uf = UnionFind::new(n);
    let e = l.index_of(&l.identity()) as u32;
    let mut pending: Vec<(u32, u32)> = Vec::new();
    for m in sub.members() {
        let i = l.index_of(m) as u32;
        if uf.union(e, i) {
            pending.push((e, i));
        }
    }
    while let Some((u, v)) = pending.pop() {
        let (eu, ev) = (&elems[u as usize], &elems[v as usize]);
        for a in &elems {
            let lu = l.index_of(&l.mul(a, eu)) as u32;
            let lv = l.index_of(&l.mul(a, ev)) as u32;
            if uf.union(lu, lv) {
                pending.push((lu, lv));
            }
            let ru = l.index_of(&l.mul(eu, a)) as u32;
            let rv = l.index_of(&l.mul(ev, a)) as u32;
            if uf.union(ru, rv) {
                pending.push((ru, rv));
            }
        }
    }
    Ok((0..n as u32).map(|i| uf.find(i)).collect())
}

/// The smallest normal subloop containing `sub`.
pub fn normal_closure<L: FiniteLoop>(l: &L, sub: &Subloop<L::Elem>) -> Result<Subloop<L::Elem>, LoopError> {
    let classes = congruence_classes(l, sub)?;
    let e = classes[l.index_of(&l.identity())];
    let members: Vec<L::Elem> =
        classes.iter().enumerate().filter(|(_, &c)| c == e).map(|(i, _)| l.element(i)).collect();
    Ok(Subloop::new(l, format!("normal closure of {}", sub.label()), sub.generators().to_vec(), members))
}

/// Runs one named strategy. `Randomized` and `Probe` only ever refute; a
/// `normal` answer from them means no counterexample was found.
pub fn is_normal_with<L: FiniteLoop>(
    l: &L,
    sub: &Subloop<L::Elem>,
    method: NormalityMethod,
    opts: NormalityOptions,
) -> Result<NormalityVerdict<L::Elem>, LoopError> {
    let verdict = |c: Option<NonNormalityCertificate<L::Elem>>| match c {
        Some(c) => NormalityVerdict::refuted(method, c),
        None => NormalityVerdict::normal(method),
    };
    match method {
        NormalityMethod::Probe => Ok(verdict(probe_certificate(l, sub))),
        NormalityMethod::Randomized => Ok(verdict(random_certificate(l, sub, opts.samples, opts.seed))),
        NormalityMethod::InnerMapScan => Ok(verdict(scan_certificate(l, sub)?)),
        NormalityMethod::Congruence => {
            let closure = normal_closure(l, sub)?;
            if closure.len() == sub.len() {
                return Ok(NormalityVerdict::normal(method));
            }
            let cert = probe_certificate(l, sub)
                .or_else(|| random_certificate(l, sub, opts.samples, opts.seed))
                .map(Ok)
                .unwrap_or_else(|| {
                    scan_certificate(l, sub).map(|c| c.expect("non-normal subloop has a moving inner map"))
                })?;
            Ok(NormalityVerdict::refuted(method, cert))
        }
        NormalityMethod::Symbolic => match l.structured_normality(sub) {
            Some(r) => r,
            None => Err(LoopError::StrategyUnavailable(format!("no symbolic normality for {}", l.describe()))),
        },
    }
}

/// Decides normality: deterministic probes, then seeded random
/// falsification, then a complete strategy (symbolic, congruence closure or
/// an exhaustive inner-map scan, whichever applies first).
pub fn is_normal<L: FiniteLoop>(
    l: &L,
    sub: &Subloop<L::Elem>,
    opts: NormalityOptions,
) -> Result<NormalityVerdict<L::Elem>, LoopError> {
    if sub.len() == l.order() {
        return Ok(NormalityVerdict::normal(NormalityMethod::Probe));
    }
    if let Some(c) = probe_certificate(l, sub) {
        return Ok(NormalityVerdict::refuted(NormalityMethod::Probe, c));
    }
    if let Some(c) = random_certificate(l, sub, opts.samples, opts.seed) {
        return Ok(NormalityVerdict::refuted(NormalityMethod::Randomized, c));
    }
    if let Some(r) = l.structured_normality(sub) {
        return r;
    }
    if l.order() <= CONGRUENCE_LIMIT {
        return is_normal_with(l, sub, NormalityMethod::Congruence, opts);
    }
    let ord = l.order() as u64;
    if ord.saturating_mul(ord).saturating_mul(sub.len() as u64) <= INNER_MAP_SCAN_LIMIT {
        return is_normal_with(l, sub, NormalityMethod::InnerMapScan, opts);
    }
    Err(LoopError::StrategyUnavailable(format!("normality of {} in {}", sub.label(), l.describe())))
}

/// The quotient loop `l / sub` on left cosets, as a table loop whose
/// elements are labelled `[representative]`. Normality is decided first.
pub fn quotient<L: FiniteLoop>(l: &L, sub: &Subloop<L::Elem>, opts: NormalityOptions) -> Result<TableLoop, LoopError> {
    let verdict = is_normal(l, sub, opts)?;
    if !verdict.normal {
        let why = verdict.certificate.map(|c| c.describe(l)).unwrap_or_default();
        return Err(LoopError::NotNormal(why));
    }
    let n = l.order();
    if n / sub.len() > MAX_TABLE_ORDER {
        return Err(LoopError::TooLarge { order: n / sub.len(), limit: MAX_TABLE_ORDER });
    }
    const UNSET: u32 = u32::MAX;
    let mut class = vec![UNSET; n];
    let mut reps: Vec<L::Elem> = Vec::new();
    for i in 0..n {
        if class[i] != UNSET {
            continue;
        }
        let x = l.element(i);
        let id = reps.len() as u32;
        for m in sub.members() {
            let j = l.index_of(&l.mul(&x, m));
            if class[j] != UNSET {
                return Err(LoopError::NotNormal(format!("left cosets of {} overlap", sub.label())));
            }
            class[j] = id;
        }
        reps.push(x);
    }
    let k = reps.len();
    let mut table = Vec::with_capacity(k * k);
    for a in &reps {
        for b in &reps {
            table.push(class[l.index_of(&l.mul(a, b))]);
        }
    }

    // Well-definedness on alternate representatives.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let members = sub.members();
    for _ in 0..opts.samples.min(20_000) {
        let (p, q) = (rng.gen_range(0..k), rng.gen_range(0..k));
        let a = l.mul(&reps[p], &members[rng.gen_range(0..members.len())]);
        let b = l.mul(&reps[q], &members[rng.gen_range(0..members.len())]);
        if class[l.index_of(&l.mul(&a, &b))] != table[p * k + q] {
            return Err(LoopError::NotNormal("coset product depends on representatives".into()));
        }
    }

    let labels: Vec<String> = reps.iter().map(|r| format!("[{}]", l.format_element(r))).collect();
    let probes: Vec<u32> = {
        let mut ps: Vec<u32> = l.probe_elements().iter().map(|p| class[l.index_of(p)]).collect();
        ps.dedup();
        ps
    };
    let name = format!("{} / {}", l.describe(), sub.label());
    Ok(TableLoop::from_table(name, k, table, labels)?.with_probes(probes))
}

/// Classes as a map from class index to members (for diagnostics).
pub fn classes_by_id(classes: &[u32]) -> HashMap<u32, Vec<usize>> {
    let mut out: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, &c) in classes.iter().enumerate() {
        out.entry(c).or_default().push(i);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loop_core::{subloop_closure, ElementaryAbelian};

    #[test]
    fn abelian_inner_maps_are_trivial() {
        let a = ElementaryAbelian::new(2);
        for x in a.elements() {
            assert_eq!(inner_map_t(&a, &x, &a.identity()), a.identity());
            for y in a.elements() {
                for n in a.elements() {
                    assert_eq!(inner_map_l(&a, &x, &y, &n), n);
                    assert_eq!(inner_map_r(&a, &x, &y, &n), n);
                }
            }
        }
    }

    #[test]
    fn whole_loop_is_normal() {
        let a = ElementaryAbelian::new(2);
        let all = subloop_closure(&a, &[1, 3]);
        assert!(is_normal(&a, &all, NormalityOptions::default()).unwrap().normal);
    }

    #[test]
    fn subgroups_of_abelian_groups_are_normal_and_quotients_have_index_order() {
        let a = ElementaryAbelian::new(3);
        let s = subloop_closure(&a, &[1]);
        for m in [NormalityMethod::InnerMapScan, NormalityMethod::Congruence, NormalityMethod::Randomized] {
            assert!(is_normal_with(&a, &s, m, NormalityOptions::default()).unwrap().normal);
        }
        let q = quotient(&a, &s, NormalityOptions::default()).unwrap();
        assert_eq!(q.order(), 9);
    }

    #[test]
    fn union_find_merges() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(3, 1));
        assert!(!uf.union(1, 3));
        assert_eq!(uf.find(3), 1);
    }
}
