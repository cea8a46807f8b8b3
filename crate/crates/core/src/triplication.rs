//! The triplication `M(M, 3)` of a Moufang loop `M` of exponent 3.
//!
//! Elements are formal `m`, `ρmρ`, `ρ²mρ²` for `m` in `M`, encoded as
//! `(sector, m)` with sectors 0, 1, 2 in that order. The product of
//! `(s, m)` and `(t, n)` lies in sector `s + t`; its base depends on
//! `d = t - s` (mod 3):
//!
//! | d | base               |
//! |---|--------------------|
//! | 0 | `m.n`              |
//! | 1 | `n.m`              |
//! | 2 | `(m⁻¹.n).m⁻¹`      |
//!
//! `ρ = ρ²ρ²` is `(2, 1)` and `ρ² = (1, 1)`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::loop_core::{
    associator, certificate_for, check_exponent_three_exhaustive, check_moufang_sampled, commutative_center,
    commutator, inverse, is_normal, loop_exponent, FiniteLoop, InnerMapKind, LoopError, NonNormalityCertificate,
    NormalityOptions, Subloop, EXHAUSTIVE_ELEMENT_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriplicationError {
    #[error("base loop does not have exponent 3: {0}")]
    ExponentViolation(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error(transparent)]
    Loop(#[from] LoopError),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriElement<E> {
    pub sector: u8,
    pub base: E,
}

impl<E> TriElement<E> {
    pub fn new(sector: u8, base: E) -> TriElement<E> {
        TriElement { sector: sector % 3, base }
    }
}

impl<E: fmt::Debug> fmt::Debug for TriElement<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:?}", self.sector, self.base)
    }
}

/// `M(M, 3)` over a base loop `M`.
#[derive(Debug, Clone)]
pub struct Triplication<M> {
    base: M,
    moufang_warning: Option<String>,
}

/// Seeded sample size for the Moufang warning on the base loop.
const BASE_MOUFANG_SAMPLES: u64 = 10_000;

/// Builds `M(M, 3)`. The base must have exponent 3 (scanned in full up to
/// 10^4 elements); a sampled Moufang failure is recorded as a warning.
pub fn build_triplication<M: FiniteLoop>(base: M) -> Result<Triplication<M>, TriplicationError> {
    if base.order() <= EXHAUSTIVE_ELEMENT_LIMIT {
        let v = check_exponent_three_exhaustive(&base)?;
        if let Some(cx) = v.counterexample {
            return Err(TriplicationError::ExponentViolation(format!("{} has order other than 3", cx[0])));
        }
    } else {
        let e = loop_exponent(&base)?;
        if e != 3 {
            return Err(TriplicationError::ExponentViolation(format!("exponent is {e}")));
        }
    }
    let moufang = check_moufang_sampled(&base, BASE_MOUFANG_SAMPLES, 3);
    let moufang_warning = moufang
        .counterexample
        .map(|cx| format!("{} is not Moufang: identity fails at ({})", base.describe(), cx.join(", ")));
    Ok(Triplication { base, moufang_warning })
}

impl<M: FiniteLoop> Triplication<M> {
    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn moufang_warning(&self) -> Option<&str> {
        self.moufang_warning.as_deref()
    }

    /// `ρ = (2, 1)`.
    pub fn rho(&self) -> TriElement<M::Elem> {
        TriElement::new(2, self.base.identity())
    }

    /// `ρ² = (1, 1)`.
    pub fn rho_squared(&self) -> TriElement<M::Elem> {
        TriElement::new(1, self.base.identity())
    }

    /// The sector-0 element `m`.
    pub fn embed(&self, m: M::Elem) -> TriElement<M::Elem> {
        TriElement::new(0, m)
    }

    fn binv(&self, m: &M::Elem) -> M::Elem {
        inverse(&self.base, m)
    }

    /// `(m⁻¹.n).m⁻¹`.
    fn sandwich(&self, m: &M::Elem, n: &M::Elem) -> M::Elem {
        let mi = self.binv(m);
        self.base.mul(&self.base.mul(&mi, n), &mi)
    }

    pub fn tri_mul(&self, x: &TriElement<M::Elem>, y: &TriElement<M::Elem>) -> TriElement<M::Elem> {
        let (m, n) = (&x.base, &y.base);
        let base = match (3 + y.sector - x.sector) % 3 {
            0 => self.base.mul(m, n),
            1 => self.base.mul(n, m),
            _ => self.sandwich(m, n),
        };
        TriElement::new(x.sector + y.sector, base)
    }

    /// The sector-0 copy of `M`.
    pub fn sector_zero(&self) -> Subloop<TriElement<M::Elem>> {
        let members: Vec<_> = self.base.elements().map(|m| self.embed(m)).collect();
        let gens: Vec<_> = self.base.probe_elements().into_iter().map(|m| self.embed(m)).collect();
        Subloop::new(self, "M", gens, members)
    }

    /// The nine products of Table 1 for formal `m`, `n`, e.g. `ρ(n.m)ρ`.
    pub fn table_entries() -> [[String; 3]; 3] {
        let wrap = |s: u8, b: &str| match s {
            0 => b.to_string(),
            1 => format!("ρ({b})ρ"),
            _ => format!("ρ²({b})ρ²"),
        };
        std::array::from_fn(|s| {
            std::array::from_fn(|t| {
                let base = match (3 + t - s) % 3 {
                    0 => "m.n",
                    1 => "n.m",
                    _ => "m⁻¹.n.m⁻¹",
                };
                wrap(((s + t) % 3) as u8, base)
            })
        })
    }

    fn scan_sector(&self, sector: u8, pred: impl Fn(&TriElement<M::Elem>) -> bool) -> TriElement<M::Elem> {
        self.base
            .elements()
            .map(|b| TriElement::new(sector, b))
            .find(|c| pred(c))
            .expect("division has a solution in a loop")
    }
}

impl<M: FiniteLoop> FiniteLoop for Triplication<M> {
    type Elem = TriElement<M::Elem>;

    fn describe(&self) -> String {
        format!("M({},3)", self.base.describe())
    }

    fn order(&self) -> usize {
        3 * self.base.order()
    }

    fn element(&self, index: usize) -> Self::Elem {
        let n = self.base.order();
        TriElement::new((index / n) as u8, self.base.element(index % n))
    }

    fn index_of(&self, x: &Self::Elem) -> usize {
        x.sector as usize * self.base.order() + self.base.index_of(&x.base)
    }

    fn identity(&self) -> Self::Elem {
        TriElement::new(0, self.base.identity())
    }

    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.tri_mul(x, y)
    }

    /// Inverts the product rule: with `x = (s, m)` and target sector `s + t`,
    /// the base of `y` is `m\w`, `w/m`, or `(m.w).m` for `d = 0, 1, 2`.
    fn left_div(&self, x: &Self::Elem, w: &Self::Elem) -> Self::Elem {
        let t = (3 + w.sector - x.sector) % 3;
        let (m, b) = (&x.base, &w.base);
        let candidate = match (3 + t - x.sector) % 3 {
            0 => TriElement::new(t, self.base.left_div(m, b)),
            1 => TriElement::new(t, self.base.right_div(b, m)),
            _ => TriElement::new(t, self.base.mul(&self.base.mul(m, b), m)),
        };
        if self.tri_mul(x, &candidate) == *w {
            candidate
        } else {
            self.scan_sector(t, |c| self.tri_mul(x, c) == *w)
        }
    }

    /// With `y = (t, n)` and target sector `s + t`, the base of `x` is `w/n`
    /// or `n\w` for `d = 0, 1`; for `d = 2` the candidate `w.(y.y)` (the
    /// right inverse property with `y⁻¹ = y.y`) is verified, with a sector
    /// scan as fallback.
    fn right_div(&self, w: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let s = (3 + w.sector - y.sector) % 3;
        let (n, b) = (&y.base, &w.base);
        let candidate = match (3 + y.sector - s) % 3 {
            0 => TriElement::new(s, self.base.right_div(b, n)),
            1 => TriElement::new(s, self.base.left_div(n, b)),
            _ => self.tri_mul(w, &self.tri_mul(y, y)),
        };
        if self.tri_mul(&candidate, y) == *w {
            candidate
        } else {
            self.scan_sector(s, |c| self.tri_mul(c, y) == *w)
        }
    }

    /// `s:<base>`.
    fn format_element(&self, x: &Self::Elem) -> String {
        format!("{}:{}", x.sector, self.base.format_element(&x.base))
    }

    fn parse_element(&self, text: &str) -> Option<Self::Elem> {
        let (s, b) = text.trim().split_once(':')?;
        let sector: u8 = s.parse().ok().filter(|&s| s < 3)?;
        Some(TriElement::new(sector, self.base.parse_element(b)?))
    }

    /// `ρ`, `ρ²`, then the base probes in each sector.
    fn probe_elements(&self) -> Vec<Self::Elem> {
        let mut out = vec![self.rho(), self.rho_squared()];
        for s in 0..3 {
            out.extend(self.base.probe_elements().into_iter().map(|m| TriElement::new(s, m)));
        }
        out
    }
}

/// `(ρ, m, n) = [n⁻¹, m⁻¹]` for sector-0 `m`, `n`, with the commutator
/// taken in the base loop.
pub fn check_rho_associator<M: FiniteLoop>(l: &Triplication<M>, m: &M::Elem, n: &M::Elem) -> bool {
    let lhs = associator(l, &l.rho(), &l.embed(m.clone()), &l.embed(n.clone()));
    let base = l.base();
    let rhs = l.embed(commutator(base, &inverse(base, n), &inverse(base, m)));
    lhs == rhs
}

/// Seeded sample of [`check_rho_associator`]; returns a failing pair.
pub fn check_rho_associator_sampled<M: FiniteLoop>(
    l: &Triplication<M>,
    trials: u64,
    seed: u64,
) -> Option<(M::Elem, M::Elem)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = l.base();
    (0..trials).find_map(|_| {
        let m = base.element(rng.gen_range(0..base.order()));
        let n = base.element(rng.gen_range(0..base.order()));
        (!check_rho_associator(l, &m, &n)).then_some((m, n))
    })
}

/// `(m⁻¹.n).m⁻¹ = m⁻¹.(n.m⁻¹)` on a seeded sample of base pairs.
pub fn check_sandwich_bracketing<M: FiniteLoop>(l: &Triplication<M>, trials: u64, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = l.base();
    (0..trials).all(|_| {
        let m = base.element(rng.gen_range(0..base.order()));
        let n = base.element(rng.gen_range(0..base.order()));
        let mi = inverse(base, &m);
        base.mul(&base.mul(&mi, &n), &mi) == base.mul(&mi, &base.mul(&n, &mi))
    })
}

/// Base triples tried exhaustively when looking for `[[x, y], z] != 1`.
const EXHAUSTIVE_WITNESS_TRIPLES: u64 = 30_000_000;

/// A triple with `[[x, y], z] != 1` in `m`: probes first, then seeded
/// samples, then an exhaustive scan for small loops.
pub fn find_commutator_triple<M: FiniteLoop>(m: &M, seed: u64) -> Option<(M::Elem, M::Elem, M::Elem)> {
    let fails = |x: &M::Elem, y: &M::Elem, z: &M::Elem| !m.is_identity(&commutator(m, &commutator(m, x, y), z));
    let probes = m.probe_elements();
    for x in &probes {
        for y in &probes {
            for z in &probes {
                if fails(x, y, z) {
                    return Some((x.clone(), y.clone(), z.clone()));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100_000 {
        let t: Vec<M::Elem> = (0..3).map(|_| m.element(rng.gen_range(0..m.order()))).collect();
        if fails(&t[0], &t[1], &t[2]) {
            return Some((t[0].clone(), t[1].clone(), t[2].clone()));
        }
    }
    let n = m.order() as u64;
    if n.saturating_pow(3) <= EXHAUSTIVE_WITNESS_TRIPLES {
        for x in m.elements() {
            for y in m.elements() {
                let c = commutator(m, &x, &y);
                for z in m.elements() {
                    if !m.is_identity(&commutator(m, &c, &z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
    }
    None
}

/// The data behind a non-normality certificate for `C(M(M, 3))`.
#[derive(Debug, Clone)]
pub struct PropositionCertificate<E> {
    /// `[[x, y], z] != 1` in the base loop.
    pub triple: (E, E, E),
    /// Base elements `x`, `y` with `[y⁻¹, x⁻¹]` outside `C(M(M, 3))`.
    pub pair: (E, E),
    /// `(ρ, x, y)` in the triplication.
    pub associator: TriElement<E>,
    pub center: Subloop<TriElement<E>>,
    pub certificate: NonNormalityCertificate<TriElement<E>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropositionReport {
    pub triple: [String; 3],
    pub pair: [String; 2],
    pub associator: String,
    pub center_order: usize,
    pub certificate: crate::loop_core::CertificateRecord,
}

impl<E: Clone + Eq + std::hash::Hash + fmt::Debug> PropositionCertificate<E> {
    pub fn report<M: FiniteLoop<Elem = E>>(&self, l: &Triplication<M>) -> PropositionReport {
        let b = l.base();
        PropositionReport {
            triple: [
                b.format_element(&self.triple.0),
                b.format_element(&self.triple.1),
                b.format_element(&self.triple.2),
            ],
            pair: [b.format_element(&self.pair.0), b.format_element(&self.pair.1)],
            associator: l.format_element(&self.associator),
            center_order: self.center.len(),
            certificate: self.certificate.record(l),
        }
    }
}

/// Realizes the argument that `C(M(M, 3))` is not normal when `M` violates
/// `[[x, y], z] = 1`: `ρ` is in the commutative center, and for suitable
/// `x`, `y` the associator `(ρ, x, y) = [y⁻¹, x⁻¹]` is not, which some
/// inner mapping `R_{x,y}` or `L_{x,y}` applied to `ρ` exhibits.
pub fn proposition_main_certificate<M: FiniteLoop>(
    l: &Triplication<M>,
    opts: NormalityOptions,
) -> Result<PropositionCertificate<M::Elem>, TriplicationError> {
    let base = l.base();
    let triple = find_commutator_triple(base, opts.seed)
        .ok_or_else(|| TriplicationError::HypothesisNotMet(format!("{} satisfies [[x,y],z] = 1", base.describe())))?;
    let center = commutative_center(l)?;
    if !center.contains(&l.rho()) {
        return Err(LoopError::StrategyUnavailable("rho is not in the commutative center".into()).into());
    }
    let mut candidates = base.probe_elements();
    candidates.extend([triple.0.clone(), triple.1.clone(), triple.2.clone()]);
    for x in &candidates {
        for y in &candidates {
            let assoc = associator(l, &l.rho(), &l.embed(x.clone()), &l.embed(y.clone()));
            if center.contains(&assoc) {
                continue;
            }
            let (ex, ey) = (l.embed(x.clone()), l.embed(y.clone()));
            let cert = [InnerMapKind::R, InnerMapKind::L]
                .into_iter()
                .find_map(|k| certificate_for(l, &center, k, &ex, Some(&ey), &l.rho()));
            let cert = match cert {
                Some(c) => c,
                None => is_normal(l, &center, opts)?
                    .certificate
                    .ok_or_else(|| LoopError::StrategyUnavailable("no certificate found".into()))?,
            };
            return Ok(PropositionCertificate {
                triple,
                pair: (x.clone(), y.clone()),
                associator: assoc,
                center,
                certificate: cert,
            });
        }
    }
    Err(TriplicationError::HypothesisNotMet(format!(
        "no pair x, y among the probes of {} with (rho, x, y) outside the commutative center",
        base.describe()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::{build_burnside, PcWord};
    use crate::loop_core::{
        associativity_witness, element_order, loop_exponent, ElementaryAbelian, NormalityOptions, TableLoop,
    };

    #[test]
    fn table_has_the_nine_printed_entries() {
        let t = Triplication::<ElementaryAbelian>::table_entries();
        assert_eq!(t[0][0], "m.n");
        assert_eq!(t[0][1], "ρ(n.m)ρ");
        assert_eq!(t[0][2], "ρ²(m⁻¹.n.m⁻¹)ρ²");
        assert_eq!(t[1][0], "ρ(m⁻¹.n.m⁻¹)ρ");
        assert_eq!(t[1][1], "ρ²(m.n)ρ²");
        assert_eq!(t[1][2], "n.m");
        assert_eq!(t[2][0], "ρ²(n.m)ρ²");
        assert_eq!(t[2][1], "m⁻¹.n.m⁻¹");
        assert_eq!(t[2][2], "ρ(m.n)ρ");
    }

    #[test]
    fn product_examples() {
        let g = build_burnside(2).unwrap();
        let l = build_triplication(g.clone()).unwrap();
        let (m, n) = (PcWord::generator(0), PcWord::generator(1));
        let t = |s, b| TriElement::new(s, b);
        assert_eq!(l.tri_mul(&t(0, m), &t(1, n)), t(1, g.mul(&n, &m)));
        let mi = inverse(&g, &m);
        assert_eq!(l.tri_mul(&t(2, m), &t(1, n)), t(0, g.mul(&g.mul(&mi, &n), &mi)));
        assert_eq!(l.tri_mul(&l.rho(), &t(0, n)), t(2, n));
        assert_eq!(l.tri_mul(&t(0, n), &l.rho()), t(2, n));
        assert_eq!(l.tri_mul(&l.identity(), &l.identity()), l.identity());
    }

    #[test]
    fn order_and_rho() {
        let l = build_triplication(build_burnside(2).unwrap()).unwrap();
        assert_eq!(l.order(), 81);
        assert_eq!(element_order(&l, &l.rho()), 3);
        assert_eq!(l.tri_mul(&l.rho(), &l.rho()), l.rho_squared());
        assert!(l.elements().all(|x| l.mul(&l.rho(), &x) == l.mul(&x, &l.rho())));
        assert_eq!(loop_exponent(&l).unwrap(), 3);
    }

    #[test]
    fn divisions_round_trip() {
        let l = build_triplication(build_burnside(2).unwrap()).unwrap();
        for x in l.elements() {
            for w in l.elements().step_by(5) {
                assert_eq!(l.mul(&x, &l.left_div(&x, &w)), w);
                assert_eq!(l.mul(&l.right_div(&w, &x), &x), w);
            }
        }
    }

    #[test]
    fn rho_associator_exhaustive_over_b32() {
        let g = build_burnside(2).unwrap();
        let l = build_triplication(g.clone()).unwrap();
        for m in g.elements() {
            assert!(check_rho_associator(&l, &m, &g.identity()));
            for n in g.elements() {
                assert!(check_rho_associator(&l, &m, &n), "{m} {n}");
            }
        }
    }

    #[test]
    fn order_nine_elements_are_rejected() {
        let n = 9;
        let table: Vec<u32> = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        let c9 = TableLoop::from_table("C9", n, table, (0..n).map(|i| i.to_string()).collect()).unwrap();
        assert!(matches!(build_triplication(c9), Err(TriplicationError::ExponentViolation(_))));
    }

    #[test]
    fn abelian_base_gives_an_associative_loop() {
        let l = build_triplication(ElementaryAbelian::new(2)).unwrap();
        assert_eq!(l.order(), 27);
        assert_eq!(associativity_witness(&l).unwrap(), None);
    }

    #[test]
    fn nonabelian_base_gives_a_nonassociative_loop() {
        let l = build_triplication(build_burnside(2).unwrap()).unwrap();
        let (x, y, z) = associativity_witness(&l).unwrap().expect("witness");
        assert_ne!(l.mul(&l.mul(&x, &y), &z), l.mul(&x, &l.mul(&y, &z)));
    }

    #[test]
    fn class_two_bases_do_not_meet_the_hypothesis() {
        let opts = NormalityOptions { samples: 1000, seed: 1 };
        let l = build_triplication(build_burnside(2).unwrap()).unwrap();
        assert!(matches!(proposition_main_certificate(&l, opts), Err(TriplicationError::HypothesisNotMet(_))));
        let l = build_triplication(ElementaryAbelian::new(2)).unwrap();
        assert!(matches!(proposition_main_certificate(&l, opts), Err(TriplicationError::HypothesisNotMet(_))));
    }

    #[test]
    fn text_format() {
        let l = build_triplication(build_burnside(2).unwrap()).unwrap();
        assert_eq!(l.format_element(&l.rho()), "2:1");
        assert_eq!(l.parse_element("2:1"), Some(l.rho()));
        let x = TriElement::new(1, PcWord::from_exponents(&[1, 0, 2]));
        assert_eq!(l.format_element(&x), "1:g1^1*g3^2");
        assert_eq!(l.parse_element("1:g1^1*g3^2"), Some(x));
        assert_eq!(l.parse_element("3:1"), None);
    }

    #[test]
    fn sandwich_bracketing_agrees() {
        let l = build_triplication(build_burnside(3).unwrap()).unwrap();
        assert!(check_sandwich_bracketing(&l, 2000, 5));
    }
}
