//! Loop specifications on the command line and the loops they build.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use moufang::burnside::{build_burnside, build_burnside_mutant, pcp_consistency_check, PcGroup};
use moufang::loop_core::{nonassociative_five, ElementaryAbelian, FiniteLoop, TableLoop};
use moufang::poly_loop::PolyLoop;
use moufang::triplication::{build_triplication, Triplication};
use serde::Serialize;

/// A loop named on the command line.
///
/// Grammar: `poly`, `poly-mutant`, `burnside:<r>`, `burnside-mutant`,
/// `abelian:<k>`, `nonmoufang5`, `tri:<spec>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoopSpec {
    Poly,
    PolyMutant,
    Burnside(u32),
    BurnsideMutant,
    Abelian(u32),
    NonMoufang5,
    Tri(Box<LoopSpec>),
}

impl FromStr for LoopSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<LoopSpec> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("tri:").or_else(|| s.strip_prefix("triplication:")) {
            return Ok(LoopSpec::Tri(Box::new(inner.parse()?)));
        }
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let number = |what: &str| -> Result<u32> {
            let a = arg.with_context(|| format!("`{what}` needs an argument, e.g. `{what}:3`"))?;
            a.parse().with_context(|| format!("bad argument `{a}` for `{what}`"))
        };
        Ok(match head {
            "poly" | "poly-loop" => LoopSpec::Poly,
            "poly-mutant" => LoopSpec::PolyMutant,
            "burnside" => LoopSpec::Burnside(number("burnside")?),
            "burnside-mutant" => match arg {
                None | Some("3") => LoopSpec::BurnsideMutant,
                Some(a) => bail!("burnside-mutant exists for rank 3 only, got `{a}`"),
            },
            "abelian" => LoopSpec::Abelian(number("abelian")?),
            "nonmoufang5" => LoopSpec::NonMoufang5,
            _ => bail!("unknown loop `{s}` (expected poly, poly-mutant, burnside:R, burnside-mutant, abelian:K, nonmoufang5 or tri:<loop>)"),
        })
    }
}

impl fmt::Display for LoopSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopSpec::Poly => f.write_str("poly"),
            LoopSpec::PolyMutant => f.write_str("poly-mutant"),
            LoopSpec::Burnside(r) => write!(f, "burnside:{r}"),
            LoopSpec::BurnsideMutant => f.write_str("burnside-mutant"),
            LoopSpec::Abelian(k) => write!(f, "abelian:{k}"),
            LoopSpec::NonMoufang5 => f.write_str("nonmoufang5"),
            LoopSpec::Tri(inner) => write!(f, "tri:{inner}"),
        }
    }
}

/// A construction-time check that ran while building.
#[derive(Debug, Clone, Serialize)]
pub struct Validation {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

impl Validation {
    fn new(check: &str, passed: bool, detail: impl Into<String>) -> Validation {
        Validation { check: check.to_string(), passed, detail: detail.into() }
    }
}

/// Any loop the CLI can build.
pub enum AnyLoop {
    Poly(PolyLoop),
    Group(PcGroup),
    Abelian(ElementaryAbelian),
    Table(TableLoop),
    Tri(Triplication<TableLoop>),
}

/// Runs `$body` with `$l` bound to the concrete loop inside an [`AnyLoop`].
#[macro_export]
macro_rules! with_loop {
    ($any:expr, $l:ident => $body:expr) => {
        match $any {
            $crate::spec::AnyLoop::Poly($l) => $body,
            $crate::spec::AnyLoop::Group($l) => $body,
            $crate::spec::AnyLoop::Abelian($l) => $body,
            $crate::spec::AnyLoop::Table($l) => $body,
            $crate::spec::AnyLoop::Tri($l) => $body,
        }
    };
}

impl AnyLoop {
    pub fn describe(&self) -> String {
        with_loop!(self, l => l.describe())
    }

    pub fn order(&self) -> usize {
        with_loop!(self, l => l.order())
    }

    /// The loop as a Cayley table, subject to the 16-bit index limit.
    pub fn to_table(&self) -> Result<TableLoop> {
        Ok(match self {
            AnyLoop::Table(t) => t.clone(),
            other => with_loop!(other, l => TableLoop::from_loop(l)?),
        })
    }
}

/// Builds the loop named by `spec`, recording the construction-time checks.
pub fn build(spec: &LoopSpec) -> Result<(AnyLoop, Vec<Validation>)> {
    let mut checks = Vec::new();
    let l = match spec {
        LoopSpec::Poly | LoopSpec::PolyMutant => {
            let l = if *spec == LoopSpec::Poly { PolyLoop::new() } else { PolyLoop::mutant() };
            checks.push(Validation::new("triangularity", true, "each f_k depends only on coordinates of lower grade"));
            AnyLoop::Poly(l)
        }
        LoopSpec::Burnside(r) => {
            let g = build_burnside(*r)?;
            let report = pcp_consistency_check(g.pcp());
            checks.push(Validation::new("pcp consistency", report.passed(), format!("{} overlaps", report.checks)));
            AnyLoop::Group(g)
        }
        LoopSpec::BurnsideMutant => {
            let g = build_burnside_mutant();
            let report = pcp_consistency_check(g.pcp());
            let detail = match report.failures.first() {
                Some(f) => format!("{} overlaps, first failure at {f}", report.checks),
                None => format!("{} overlaps", report.checks),
            };
            checks.push(Validation::new("pcp consistency", report.passed(), detail));
            AnyLoop::Group(g)
        }
        LoopSpec::Abelian(k) => {
            if *k > 10 {
                bail!("abelian:{k} is not supported (rank at most 10)");
            }
            AnyLoop::Abelian(ElementaryAbelian::new(*k))
        }
        LoopSpec::NonMoufang5 => AnyLoop::Table(nonassociative_five()),
        LoopSpec::Tri(inner) => {
            let (base, inner_checks) = build(inner)?;
            checks.extend(inner_checks);
            let table = base.to_table().with_context(|| format!("tabulating {inner} for triplication"))?;
            let t = build_triplication(table)?;
            checks.push(Validation::new(
                "exponent-3 precondition",
                true,
                format!("{} has exponent 3", t.base().describe()),
            ));
            if let Some(w) = t.moufang_warning() {
                checks.push(Validation::new("base Moufang (sampled)", false, w));
            }
            AnyLoop::Tri(t)
        }
    };
    Ok((l, checks))
}
