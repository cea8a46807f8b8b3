//! The full reproduction suite: twelve numbered claims, each a report section.

use anyhow::{anyhow, ensure, Result};
use moufang::burnside::{
    build_burnside, build_burnside_mutant, pcp_consistency_check, verify_class, verify_class3, PcGroup,
};
use moufang::loop_core::{
    associativity_witness, center, check_exponent_three_exhaustive, check_moufang_sampled, commutative_center,
    commutativity_witness, commutator, is_normal, nucleus, quotient, ElementaryAbelian, FiniteLoop, InnerMapKind,
    NormalityMethod, TableLoop,
};
use moufang::poly_loop::{verify_identity, PolyLoop, Vec11};
use moufang::triplication::{
    build_triplication, check_rho_associator_sampled, proposition_main_certificate, Triplication, TriplicationError,
};
use serde_json::{json, Value};

use crate::commands::{abcd_constants, poly_identities, RunOptions};
use crate::report::Section;

type Outcome = Result<(Option<bool>, Value)>;

fn identity(l: &PolyLoop, name: &str) -> Result<(bool, String)> {
    let (_, lhs, rhs) = poly_identities().into_iter().find(|(n, _, _)| *n == name).expect("known identity");
    let v = verify_identity(&l.symbolic(), &lhs, &rhs)?;
    Ok((v.passed(), v.to_string()))
}

fn symbolic_moufang(l: &PolyLoop) -> Outcome {
    let (ok, v) = identity(l, "moufang")?;
    Ok((Some(ok), json!({ "identity": "(X∘Y)∘(Z∘X) = (X∘(Y∘Z))∘X", "verdict": v })))
}

fn symbolic_inverse(l: &PolyLoop) -> Outcome {
    let (r, rv) = identity(l, "right inverse")?;
    let (s, sv) = identity(l, "left inverse")?;
    Ok((Some(r && s), json!({ "X∘X^-1 = 0": rv, "X^-1∘X = 0": sv })))
}

fn symbolic_exponent(l: &PolyLoop) -> Outcome {
    let (a, av) = identity(l, "exponent 3")?;
    let (b, bv) = identity(l, "[[x,y],z] = 1")?;
    Ok((Some(a && b), json!({ "(X∘X)∘X = 0": av, "[[X,Y],Z] = 0": bv })))
}

fn structure_constants(l: &PolyLoop) -> Outcome {
    let rows = abcd_constants(l);
    let ok = rows.iter().all(|(_, got, want)| got == want);
    let data: Vec<String> = rows.iter().map(|(n, got, _)| format!("{n} = {}", got.basis_notation())).collect();
    Ok((Some(ok), json!(data)))
}

fn commutative_center_claim(l: &PolyLoop) -> Outcome {
    let c = commutative_center(l)?;
    let expected = l.span("C", &[1, 5, 6, 7, 11]);
    let table = TableLoop::from_subloop(l, &c)?;
    let assoc = associativity_witness(&table)?;
    let ok = c.same_members(&expected) && c.len() == 243 && assoc.is_none();
    Ok((
        Some(ok),
        json!({ "size": c.len(), "span{e1,e5,e6,e7,e11}": c.same_members(&expected), "associative": assoc.is_none() }),
    ))
}

fn nucleus_claim(l: &PolyLoop) -> Outcome {
    let nuc = nucleus(l)?;
    let z = center(l)?;
    let nuc_ok = nuc.same_members(&l.span("Nuc", &[8, 9, 10, 11]));
    let z_ok = z.same_members(&l.span("Z", &[11]));
    Ok((
        Some(nuc_ok && z_ok && nuc.len() == 81 && z.len() == 3),
        json!({ "nucleus": nuc.len(), "nucleus = span{e8,e9,e10,e11}": nuc_ok, "center": z.len(), "center = span{e11}": z_ok }),
    ))
}

fn poly_center_not_normal(l: &PolyLoop, o: &RunOptions) -> Outcome {
    let c = commutative_center(l)?;
    let v = is_normal(l, &c, o.normality())?;
    let cert = v.certificate.ok_or_else(|| anyhow!("C(L) reported normal"))?;
    let verified = cert.verify(l, &c);
    let expected = cert.kind == InnerMapKind::R
        && cert.x == Vec11::e(2)
        && cert.y == Some(Vec11::e(3))
        && cert.n == Vec11::e(1)
        && cert.image == Vec11::e(1) + Vec11::e(8)
        && cert.witness == Some(Vec11::e(4))
        && cert.defect == Some(Vec11::e(11));
    Ok((
        Some(!v.normal && verified && expected),
        json!({ "normal": v.normal, "statement": cert.describe(l), "certificate": cert.record(l), "verified": verified }),
    ))
}

fn normal_n(l: &PolyLoop, o: &RunOptions) -> Outcome {
    let n = l.span("N", &[5, 6, 7, 11]);
    let v = is_normal(l, &n, o.normality())?;
    let q = quotient(l, &n, o.normality())?;
    let commutative = commutativity_witness(&q)?.is_none();
    let ok = v.normal && v.method == NormalityMethod::Symbolic && q.order() == 2187 && commutative;
    Ok((
        Some(ok),
        json!({ "normal": v.normal, "method": v.method, "quotient_order": q.order(), "quotient_commutative": commutative }),
    ))
}

fn is_class_two_exhaustive(g: &PcGroup) -> bool {
    let elems: Vec<_> = g.elements().collect();
    elems.iter().all(|x| {
        elems.iter().all(|y| {
            let c = commutator(g, x, y);
            elems.iter().all(|z| g.is_identity(&commutator(g, &c, z)))
        })
    })
}

/// The rank-3 checks on an arbitrary presentation, so the corrupted one can
/// be run through the same verifier.
fn burnside3_checks(g: &PcGroup) -> Result<(bool, Value)> {
    let consistency = pcp_consistency_check(g.pcp());
    let exponent = check_exponent_three_exhaustive(g)?;
    let class = verify_class3(g);
    let ok = consistency.passed() && g.order() == 2187 && exponent.passed && class.passed;
    Ok((
        ok,
        json!({
            "consistency": consistency.passed(),
            "consistency_failure": consistency.failures.first(),
            "order": g.order(),
            "exponent_3": exponent.passed,
            "class_3": class.passed,
            "class_witness": class.witness,
        }),
    ))
}

fn burnside_claims(b33: &PcGroup) -> Outcome {
    let (ok3, data3) = burnside3_checks(b33)?;
    let b32 = build_burnside(2)?;
    let class2 = verify_class(&b32, 2);
    let identity = is_class_two_exhaustive(&b32);
    let ok2 = b32.order() == 27 && class2.passed && identity && pcp_consistency_check(b32.pcp()).passed();
    Ok((
        Some(ok3 && ok2),
        json!({ "B(3,3)": data3, "B(3,2)": { "order": b32.order(), "class_2": class2.passed, "[[x,y],z]=1": identity } }),
    ))
}

fn triplication_claims(m: &Triplication<TableLoop>, o: &RunOptions) -> Outcome {
    let order = m.order();
    let exponent = check_exponent_three_exhaustive(m)?;
    let moufang = check_moufang_sampled(m, 1_000_000, o.seed);
    let rho = m.rho();
    let rho_central = m.elements().all(|x| m.mul(&rho, &x) == m.mul(&x, &rho));
    let sector0 = m.sector_zero();
    let s0 = is_normal(m, &sector0, o.normality())?;
    let index = quotient(m, &sector0, o.normality())?.order();
    let rho_assoc = check_rho_associator_sampled(m, 100_000, o.seed);
    let cert = proposition_main_certificate(m, o.normality())?;
    let c = &cert.center;
    let v = is_normal(m, c, o.normality())?;
    let verified = v.certificate.as_ref().is_some_and(|c2| c2.verify(m, c)) && cert.certificate.verify(m, c);
    let ok = order == 6561
        && exponent.passed
        && moufang.passed
        && rho_central
        && s0.normal
        && index == 3
        && rho_assoc.is_none()
        && !v.normal
        && verified;
    Ok((
        Some(ok),
        json!({
            "order": order,
            "exponent_3": exponent.passed,
            "moufang_samples": moufang.checked,
            "moufang": moufang.passed,
            "rho_central": rho_central,
            "sector0_normal": s0.normal,
            "sector0_index": index,
            "rho_associator_samples": 100_000,
            "rho_associator": rho_assoc.is_none(),
            "center_normal": v.normal,
            "statement": cert.certificate.describe(m),
            "certificate": cert.report(m),
            "verified": verified,
        }),
    ))
}

fn dichotomy(o: &RunOptions) -> Outcome {
    let abelian = build_triplication(ElementaryAbelian::new(2))?;
    let abelian_assoc = associativity_witness(&abelian)?.is_none();
    let b32 = build_triplication(build_burnside(2)?)?;
    let witness = associativity_witness(&b32)?;
    let hyp = proposition_main_certificate(&b32, o.normality());
    let not_met = matches!(hyp, Err(TriplicationError::HypothesisNotMet(_)));
    Ok((
        Some(abelian_assoc && witness.is_some() && not_met),
        json!({
            "M(C3xC3,3) associative": abelian_assoc,
            "M(B(3,2),3) witness": witness.map(|(x, y, z)| [x, y, z].map(|e| b32.format_element(&e))),
            "certificate search on B(3,2)": match hyp { Err(e) => e.to_string(), Ok(_) => "certificate found".into() },
        }),
    ))
}

fn mutations() -> Outcome {
    let mutant = PolyLoop::mutant();
    let (moufang_ok, verdict) = identity(&mutant, "moufang")?;
    let (b_ok, data) = burnside3_checks(&build_burnside_mutant())?;
    Ok((Some(!moufang_ok && !b_ok), json!({ "poly mutant moufang": verdict, "burnside mutant": data })))
}

/// Runs all twelve claims in order.
pub fn reproduce(o: &RunOptions) -> Vec<Section> {
    let l = PolyLoop::new();
    let mut out = vec![
        Section::run("1 symbolic moufang", || symbolic_moufang(&l)),
        Section::run("2 symbolic inverse", || symbolic_inverse(&l)),
        Section::run("3 exponent and [[x,y],z]", || symbolic_exponent(&l)),
        Section::run("4 structure constants", || structure_constants(&l)),
        Section::run("5 commutative center of L", || commutative_center_claim(&l)),
        Section::run("6 nucleus and center of L", || nucleus_claim(&l)),
        Section::run("7 C(L) not normal", || poly_center_not_normal(&l, o)),
        Section::run("8 N normal, L/N commutative", || normal_n(&l, o)),
    ];
    let b33 = build_burnside(3);
    out.push(Section::run("9 burnside groups", || burnside_claims(b33.as_ref().map_err(|e| anyhow!("{e}"))?)));
    out.push(Section::run("10 M(B(3,3),3)", || {
        let g = b33.as_ref().map_err(|e| anyhow!("{e}"))?;
        let m = build_triplication(TableLoop::from_loop(g)?)?;
        ensure!(m.moufang_warning().is_none(), "base is not Moufang");
        triplication_claims(&m, o)
    }));
    out.push(Section::run("11 associativity dichotomy", || dichotomy(o)));
    out.push(Section::run("12 mutation robustness", mutations));
    out
}
