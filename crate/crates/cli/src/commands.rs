//! Report sections for the per-loop commands.

use std::str::FromStr;

use anyhow::{bail, Context, Result};
use moufang::burnside::{check_two_engel, pcp_consistency_check, verify_class, PcGroup};
use moufang::loop_core::{
    associativity_witness, associator, center, check_diassociativity_sampled, check_exponent_three_exhaustive,
    check_loop_axioms_sampled, check_moufang_exhaustive, check_moufang_sampled, commutative_center,
    commutativity_witness, commutator, is_normal, loop_exponent, nucleus, quotient, subloop_closure, CheckVerdict,
    FiniteLoop, LoopError, NormalityOptions, Subloop, TableLoop, EXHAUSTIVE_ELEMENT_LIMIT, EXHAUSTIVE_TRIPLE_LIMIT,
};
use moufang::poly_loop::{coordinate_support, verify_identity, PolyLoop, Term, Vec11};
use moufang::triplication::{
    check_rho_associator_sampled, find_commutator_triple, proposition_main_certificate, Triplication,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::Section;
use crate::spec::AnyLoop;
use crate::with_loop;

/// Sample sizes and seed shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub seed: u64,
    /// Seeded samples for identity checks too large to run exhaustively.
    pub samples: u64,
    /// Seeded samples for the randomized normality pass.
    pub normality_samples: u64,
}

impl RunOptions {
    pub fn normality(&self) -> NormalityOptions {
        NormalityOptions { samples: self.normality_samples, seed: self.seed }
    }

    /// Sample size for the cheaper auxiliary checks.
    fn aux_samples(&self) -> u64 {
        self.samples.min(100_000)
    }
}

/// Which subloop the `normality` command examines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubloopChoice {
    /// Commutative center `C(L)`.
    Center,
    Nucleus,
    /// Center `Z(L) = Nuc(L) ∩ C(L)`.
    ZCenter,
    /// Sector-0 copy of the base inside a triplication.
    Sector0,
    /// Span of basis vectors (1-based) in the polynomial loop.
    Span(Vec<usize>),
    /// Subloop generated by elements in the loop's text format.
    Gens(Vec<String>),
}

impl FromStr for SubloopChoice {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<SubloopChoice> {
        Ok(match s {
            "center" | "commutative-center" => SubloopChoice::Center,
            "nucleus" => SubloopChoice::Nucleus,
            "zcenter" => SubloopChoice::ZCenter,
            "sector0" => SubloopChoice::Sector0,
            _ => {
                if let Some(list) = s.strip_prefix("span:") {
                    let idx = list
                        .split(',')
                        .map(|t| t.trim().trim_start_matches('e').parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .with_context(|| format!("bad basis list `{list}`"))?;
                    SubloopChoice::Span(idx)
                } else if let Some(list) = s.strip_prefix("gens:") {
                    SubloopChoice::Gens(list.split(';').map(|t| t.trim().to_string()).collect())
                } else {
                    bail!("unknown subloop `{s}` (expected center, nucleus, zcenter, sector0, span:I,J,.. or gens:A;B;..)")
                }
            }
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubloopSummary {
    pub label: String,
    pub size: usize,
    pub generators: Vec<String>,
    /// Basis vectors `e_i` when the subloop is a coordinate subspace of the
    /// polynomial loop.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
}

/// Members are listed for subloops up to this size.
const LIST_MEMBERS_UP_TO: usize = 27;

pub fn summarize<L: FiniteLoop>(l: &L, s: &Subloop<L::Elem>, basis: Option<Vec<String>>) -> SubloopSummary {
    SubloopSummary {
        label: s.label().to_string(),
        size: s.len(),
        generators: s.generators().iter().map(|g| l.format_element(g)).collect(),
        basis,
        members: (s.len() <= LIST_MEMBERS_UP_TO).then(|| s.members().iter().map(|m| l.format_element(m)).collect()),
    }
}

fn poly_basis(s: &Subloop<Vec11>) -> Option<Vec<String>> {
    coordinate_support(s.members()).map(|idx| idx.iter().map(|i| format!("e{}", i + 1)).collect())
}

fn summary_of(any: &AnyLoop, s: &SubloopAny) -> SubloopSummary {
    match (any, s) {
        (AnyLoop::Poly(l), SubloopAny::Poly(s)) => summarize(l, s, poly_basis(s)),
        (AnyLoop::Group(l), SubloopAny::Group(s)) => summarize(l, s, None),
        (AnyLoop::Abelian(l), SubloopAny::Index(s)) => summarize(l, s, None),
        (AnyLoop::Table(l), SubloopAny::Index(s)) => summarize(l, s, None),
        (AnyLoop::Tri(l), SubloopAny::Tri(s)) => summarize(l, s, None),
        _ => unreachable!("subloop built from a different loop"),
    }
}

/// A subloop of an [`AnyLoop`], with the matching element type.
pub enum SubloopAny {
    Poly(Subloop<Vec11>),
    Group(Subloop<moufang::burnside::PcWord>),
    Index(Subloop<u32>),
    Tri(Subloop<moufang::triplication::TriElement<u32>>),
}

fn pick<L: FiniteLoop>(l: &L, choice: &SubloopChoice) -> Result<Subloop<L::Elem>> {
    Ok(match choice {
        SubloopChoice::Center => commutative_center(l)?,
        SubloopChoice::Nucleus => nucleus(l)?,
        SubloopChoice::ZCenter => center(l)?,
        SubloopChoice::Gens(texts) => {
            let gens = texts
                .iter()
                .map(|t| l.parse_element(t).ok_or_else(|| LoopError::ParseElement(t.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            subloop_closure(l, &gens).with_label(format!("<{}>", texts.join(", ")))
        }
        SubloopChoice::Sector0 => bail!("sector0 applies to triplications only"),
        SubloopChoice::Span(_) => bail!("span:... applies to the polynomial loop only"),
    })
}

/// Builds the chosen subloop.
pub fn select(any: &AnyLoop, choice: &SubloopChoice) -> Result<SubloopAny> {
    Ok(match any {
        AnyLoop::Poly(l) => SubloopAny::Poly(match choice {
            SubloopChoice::Span(idx) => {
                if idx.iter().any(|&i| i == 0 || i > 11) {
                    bail!("basis indices run from 1 to 11");
                }
                let label = format!("span{{{}}}", idx.iter().map(|i| format!("e{i}")).collect::<Vec<_>>().join(","));
                l.span(&label, idx)
            }
            other => pick(l, other)?,
        }),
        AnyLoop::Group(l) => SubloopAny::Group(pick(l, choice)?),
        AnyLoop::Abelian(l) => SubloopAny::Index(pick(l, choice)?),
        AnyLoop::Table(l) => SubloopAny::Index(pick(l, choice)?),
        AnyLoop::Tri(l) => SubloopAny::Tri(match choice {
            SubloopChoice::Sector0 => l.sector_zero(),
            other => pick(l, other)?,
        }),
    })
}

fn check_section(name: &str, f: impl FnOnce() -> Result<CheckVerdict>) -> Section {
    Section::run(name, || {
        let v = f()?;
        Ok((Some(v.passed), v))
    })
}

/// Sampled and exhaustive checks that apply to any finite loop.
fn generic_suite<L: FiniteLoop>(l: &L, o: &RunOptions) -> Vec<Section> {
    let n = l.order() as u64;
    let mut out = vec![check_section("loop axioms", || Ok(check_loop_axioms_sampled(l, o.aux_samples(), o.seed)))];
    out.push(check_section("moufang", || {
        if n.saturating_pow(3) <= EXHAUSTIVE_TRIPLE_LIMIT {
            Ok(check_moufang_exhaustive(l)?)
        } else {
            Ok(check_moufang_sampled(l, o.samples, o.seed))
        }
    }));
    out.push(check_section("diassociativity", || Ok(check_diassociativity_sampled(l, o.aux_samples(), o.seed))));
    out.push(Section::run("exponent 3", || {
        if l.order() <= EXHAUSTIVE_ELEMENT_LIMIT {
            let v = check_exponent_three_exhaustive(l)?;
            Ok((Some(v.passed), serde_json::to_value(v)?))
        } else {
            let e = loop_exponent(l)?;
            Ok((Some(e == 3), json!({ "exponent": e })))
        }
    }));
    out
}

/// The formal identity suite on the polynomial loop.
pub fn poly_identities() -> Vec<(&'static str, Term, Term)> {
    use Term::{Identity, X, Y, Z};
    vec![
        ("moufang", Term::mul(Term::mul(X, Y), Term::mul(Z, X)), Term::mul(Term::mul(X, Term::mul(Y, Z)), X)),
        ("right inverse", Term::mul(X, Term::inv(X)), Identity),
        ("left inverse", Term::mul(Term::inv(X), X), Identity),
        ("exponent 3", Term::mul(Term::mul(X, X), X), Identity),
        ("[[x,y],z] = 1", Term::commutator(Term::commutator(X, Y), Z), Identity),
    ]
}

fn poly_suite(l: &PolyLoop) -> Vec<Section> {
    poly_identities()
        .into_iter()
        .map(|(name, lhs, rhs)| {
            Section::run(name, || {
                let v = verify_identity(&l.symbolic(), &lhs, &rhs)?;
                Ok((
                    Some(v.passed()),
                    json!({ "identity": format!("{lhs} = {rhs}"), "method": "symbolic", "result": v }),
                ))
            })
        })
        .collect()
}

fn group_suite(g: &PcGroup, o: &RunOptions) -> Vec<Section> {
    let mut out = vec![Section::run("pcp consistency", || {
        let r = pcp_consistency_check(g.pcp());
        Ok((Some(r.passed()), r))
    })];
    out.extend(generic_suite(g, o));
    // Class 2 for two generators, 3 from three on.
    let class = if g.generators().len() <= 2 { 2 } else { 3 };
    out.push(Section::run("nilpotency class", || {
        let v = verify_class(g, class);
        Ok((Some(v.passed), v))
    }));
    out.push(Section::run("2-engel", || {
        let w = check_two_engel(g, o.aux_samples(), o.seed);
        let cx = w.map(|(x, y)| vec![x.to_string(), y.to_string()]);
        Ok((Some(cx.is_none()), json!({ "identity": "[[x,y],y] = 1", "counterexample": cx })))
    }));
    out
}

fn tri_suite<M: FiniteLoop>(l: &Triplication<M>, o: &RunOptions) -> Vec<Section> {
    let mut out = generic_suite(l, o);
    out.push(Section::run("rho central", || {
        let rho = l.rho();
        let bad = l.elements().find(|x| l.mul(&rho, x) != l.mul(x, &rho));
        Ok((Some(bad.is_none()), json!({ "checked": l.order(), "counterexample": bad.map(|x| l.format_element(&x)) })))
    }));
    out.push(Section::run("(rho,m,n) = [n^-1,m^-1]", || {
        let fail = check_rho_associator_sampled(l, o.aux_samples(), o.seed);
        let cx = fail.map(|(m, n)| vec![l.base().format_element(&m), l.base().format_element(&n)]);
        Ok((Some(cx.is_none()), json!({ "checked": o.aux_samples(), "counterexample": cx })))
    }));
    out
}

pub fn verify(any: &AnyLoop, o: &RunOptions) -> Vec<Section> {
    match any {
        AnyLoop::Poly(l) => poly_suite(l),
        AnyLoop::Group(g) => group_suite(g, o),
        AnyLoop::Tri(t) => tri_suite(t, o),
        AnyLoop::Abelian(l) => generic_suite(l, o),
        AnyLoop::Table(l) => generic_suite(l, o),
    }
}

/// Commutative center, nucleus and center, computing each piece once.
fn centers<L: FiniteLoop>(l: &L) -> Result<[Subloop<L::Elem>; 3]> {
    let c = commutative_center(l)?;
    let nuc = nucleus(l)?;
    let members: Vec<L::Elem> = nuc.members().iter().filter(|x| c.contains(x)).cloned().collect();
    let gens = moufang::loop_core::greedy_generators(l, &members);
    let z = Subloop::new(l, "Z", gens, members);
    Ok([c, nuc, z])
}

fn centers_any(any: &AnyLoop) -> Result<[SubloopAny; 3]> {
    Ok(match any {
        AnyLoop::Poly(l) => centers(l)?.map(SubloopAny::Poly),
        AnyLoop::Group(l) => centers(l)?.map(SubloopAny::Group),
        AnyLoop::Abelian(l) => centers(l)?.map(SubloopAny::Index),
        AnyLoop::Table(l) => centers(l)?.map(SubloopAny::Index),
        AnyLoop::Tri(l) => centers(l)?.map(SubloopAny::Tri),
    })
}

/// Associativity: exhaustive when small, else a search over probe triples
/// (which can only find a witness).
fn associativity<L: FiniteLoop>(l: &L) -> Result<Value> {
    match associativity_witness(l) {
        Ok(w) => Ok(json!({
            "associative": w.is_none(),
            "method": "exhaustive",
            "witness": w.map(|(x, y, z)| [x, y, z].map(|e| l.format_element(&e))),
        })),
        Err(LoopError::SizeGuard { .. }) => {
            let p = l.probe_elements();
            for x in &p {
                for y in &p {
                    for z in &p {
                        if l.mul(&l.mul(x, y), z) != l.mul(x, &l.mul(y, z)) {
                            let w = [x, y, z].map(|e| l.format_element(e));
                            return Ok(json!({ "associative": false, "method": "probes", "witness": w }));
                        }
                    }
                }
            }
            Ok(json!({ "associative": Value::Null, "method": "probes" }))
        }
        Err(e) => Err(e.into()),
    }
}

fn commutativity<L: FiniteLoop>(l: &L) -> Result<Value> {
    let w = commutativity_witness(l)?;
    Ok(json!({
        "commutative": w.is_none(),
        "witness": w.map(|(x, y)| [x, y].map(|e| l.format_element(&e))),
    }))
}

pub fn invariants(any: &AnyLoop) -> Vec<Section> {
    let mut out = vec![
        Section::info("order", || Ok(json!({ "loop": any.describe(), "order": any.order() }))),
        Section::info("exponent", || with_loop!(any, l => Ok(json!({ "exponent": loop_exponent(l)? })))),
        Section::info("commutativity", || with_loop!(any, l => commutativity(l))),
        Section::info("associativity", || with_loop!(any, l => associativity(l))),
    ];
    match centers_any(any) {
        Ok(subs) => {
            for (name, s) in ["commutative center", "nucleus", "center"].into_iter().zip(&subs) {
                out.push(Section::info(name, || Ok(summary_of(any, s))));
            }
        }
        Err(e) => out.push(Section::info::<()>("centers", || Err(e))),
    }
    out
}

/// Exhaustive associativity of a subloop, through its Cayley table.
fn subloop_associative<L: FiniteLoop>(l: &L, s: &Subloop<L::Elem>) -> Result<Value> {
    let t = TableLoop::from_subloop(l, s)?;
    let w = associativity_witness(&t)?;
    Ok(json!({
        "associative": w.is_none(),
        "triples": (s.len() as u64).pow(3),
        "witness": w.map(|(x, y, z)| [x, y, z].map(|e| t.format_element(&e))),
    }))
}

fn center_sections<L: FiniteLoop>(
    l: &L,
    any: &AnyLoop,
    which: SubloopChoice,
    wrap: fn(Subloop<L::Elem>) -> SubloopAny,
) -> Vec<Section> {
    let name = if which == SubloopChoice::Nucleus { "nucleus" } else { "commutative center" };
    match pick(l, &which) {
        Ok(s) => {
            let assoc = Section::info(&format!("{name} associativity"), || subloop_associative(l, &s));
            let wrapped = wrap(s);
            vec![Section::info(name, || Ok(summary_of(any, &wrapped))), assoc]
        }
        Err(e) => vec![Section::run::<()>(name, || Err(e))],
    }
}

/// `which` is [`SubloopChoice::Center`] or [`SubloopChoice::Nucleus`].
pub fn center_or_nucleus(any: &AnyLoop, which: SubloopChoice) -> Vec<Section> {
    match any {
        AnyLoop::Poly(l) => center_sections(l, any, which, SubloopAny::Poly),
        AnyLoop::Group(l) => center_sections(l, any, which, SubloopAny::Group),
        AnyLoop::Abelian(l) => center_sections(l, any, which, SubloopAny::Index),
        AnyLoop::Table(l) => center_sections(l, any, which, SubloopAny::Index),
        AnyLoop::Tri(l) => center_sections(l, any, which, SubloopAny::Tri),
    }
}

/// Whether the caller expects a normal or a non-normal subloop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Expectation {
    Normal,
    NotNormal,
}

fn normality_generic<L: FiniteLoop>(
    l: &L,
    sub: &Subloop<L::Elem>,
    expect: Option<Expectation>,
    o: &RunOptions,
) -> Vec<Section> {
    let mut out = Vec::new();
    let mut normal = None;
    out.push(Section::run("normality", || {
        let v = is_normal(l, sub, o.normality())?;
        normal = Some(v.normal);
        let cert = v.certificate.as_ref();
        let verified = cert.map(|c| c.verify(l, sub));
        let data = json!({
            "subloop": sub.label(),
            "size": sub.len(),
            "index": l.order() / sub.len().max(1),
            "normal": v.normal,
            "method": v.method,
            "certificate": cert.map(|c| c.record(l)),
            "statement": cert.map(|c| c.describe(l)),
            "certificate_verified": verified,
        });
        let ok_cert = verified.unwrap_or(true);
        let passed = match expect {
            Some(Expectation::Normal) => v.normal,
            Some(Expectation::NotNormal) => !v.normal && ok_cert,
            None => ok_cert,
        };
        Ok((Some(passed), data))
    }));
    if normal == Some(true) && sub.len() < l.order() {
        out.push(Section::info("quotient", || {
            let q = quotient(l, sub, o.normality())?;
            Ok(json!({
                "order": q.order(),
                "commutative": commutativity_witness(&q).ok().map(|w| w.is_none()),
                "exponent": loop_exponent(&q).ok(),
            }))
        }));
    }
    out
}

pub fn normality(any: &AnyLoop, choice: &SubloopChoice, expect: Option<Expectation>, o: &RunOptions) -> Vec<Section> {
    let sub = match select(any, choice) {
        Ok(s) => s,
        Err(e) => return vec![Section::run::<()>("subloop", || Err(e))],
    };
    let mut out = vec![Section::info("subloop", || Ok(summary_of(any, &sub)))];
    out.extend(match (any, &sub) {
        (AnyLoop::Poly(l), SubloopAny::Poly(s)) => normality_generic(l, s, expect, o),
        (AnyLoop::Group(l), SubloopAny::Group(s)) => normality_generic(l, s, expect, o),
        (AnyLoop::Abelian(l), SubloopAny::Index(s)) => normality_generic(l, s, expect, o),
        (AnyLoop::Table(l), SubloopAny::Index(s)) => normality_generic(l, s, expect, o),
        (AnyLoop::Tri(l), SubloopAny::Tri(s)) => normality_generic(l, s, expect, o),
        _ => unreachable!("subloop built from a different loop"),
    });
    out
}

/// The seven structure constants among `a, b, c, d = e1, e2, e3, e4`.
pub fn abcd_constants(l: &PolyLoop) -> Vec<(&'static str, Vec11, Vec11)> {
    let [a, b, c, d] = [1, 2, 3, 4].map(Vec11::e);
    let abc = associator(l, &a, &b, &c);
    vec![
        ("[b,c]", commutator(l, &b, &c), Vec11::e(5)),
        ("[b,d]", commutator(l, &b, &d), Vec11::e(6)),
        ("[c,d]", commutator(l, &c, &d), Vec11::e(7)),
        ("(a,b,c)", abc, Vec11::e(8)),
        ("(a,b,d)", associator(l, &a, &b, &d), Vec11::e(9)),
        ("(a,c,d)", associator(l, &a, &c, &d), Vec11::e(10)),
        ("[(a,b,c),d]", commutator(l, &abc, &d), Vec11::e(11)),
    ]
}

/// Witnesses for the main structural claims about a loop.
pub fn witness(any: &AnyLoop, o: &RunOptions) -> Vec<Section> {
    match any {
        AnyLoop::Poly(l) => {
            let mut out = vec![Section::run("structure constants (a,b,c,d = e1..e4)", || {
                let rows = abcd_constants(l);
                let ok = rows.iter().all(|(_, got, want)| got == want);
                let table: Vec<Value> = rows
                    .iter()
                    .map(|(name, got, want)| json!({ "expr": name, "value": got.basis_notation(), "expected": want.basis_notation() }))
                    .collect();
                Ok((Some(ok), table))
            })];
            match commutative_center(l) {
                Ok(c) => out.extend(normality_generic(l, &c, Some(Expectation::NotNormal), o)),
                Err(e) => out.push(Section::run::<()>("commutative center", || Err(e.into()))),
            }
            out
        }
        AnyLoop::Tri(t) => vec![Section::run("non-normal commutative center", || {
            let cert = proposition_main_certificate(t, o.normality())?;
            let verified = cert.certificate.verify(t, &cert.center);
            let mut data = serde_json::to_value(cert.report(t))?;
            data["statement"] = json!(cert.certificate.describe(t));
            data["certificate_verified"] = json!(verified);
            Ok((Some(verified), data))
        })],
        AnyLoop::Group(g) => vec![Section::info("[[x,y],z] != 1", || {
            let t = find_commutator_triple(g, o.seed);
            Ok(json!({ "triple": t.map(|(x, y, z)| [x, y, z].map(|e| e.to_string())) }))
        })],
        AnyLoop::Abelian(l) => vec![Section::info("associativity", || associativity(l))],
        AnyLoop::Table(l) => vec![
            Section::info("associativity", || associativity(l)),
            Section::info("moufang", || {
                Ok(check_moufang_exhaustive(l).unwrap_or_else(|_| check_moufang_sampled(l, o.samples, o.seed)))
            }),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_subloop_choices() {
        assert_eq!("center".parse::<SubloopChoice>().unwrap(), SubloopChoice::Center);
        assert_eq!("span:5,6,e7,11".parse::<SubloopChoice>().unwrap(), SubloopChoice::Span(vec![5, 6, 7, 11]));
        assert_eq!(
            "gens:0:g1^1;2:1".parse::<SubloopChoice>().unwrap(),
            SubloopChoice::Gens(vec!["0:g1^1".into(), "2:1".into()])
        );
        assert!("span:x".parse::<SubloopChoice>().is_err());
        assert!("middle".parse::<SubloopChoice>().is_err());
    }

    #[test]
    fn structure_constants_match() {
        let l = PolyLoop::new();
        assert!(abcd_constants(&l).iter().all(|(_, got, want)| got == want));
    }
}
