//! Formal loop terms evaluated to polynomial maps.
//!
//! A term in the symbols `X`, `Y`, `Z` denotes a map `(F^11)^3 -> F^11` whose
//! coordinates are polynomials in `x = 0..11`, `y = 11..22`, `z = 22..33`.
//! Divisions stay polynomial because the correction map is triangular:
//! solving `a ∘ u = w` binds the coordinates of `u` grade by grade, and a
//! lookup of a coordinate not yet solved fails with `UnboundVariable`.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::gf3::{Coeff, PolyError, Polynomial, Var, BLOCK};
use crate::loop_core::{
    certificate_for, FiniteLoop, InnerMapKind, LoopError, NormalityMethod, NormalityVerdict, Subloop,
};

use super::{grade, InvMap, LoopMap, PolyLoop, PolyLoopError, Vec11, DIM};

/// Eleven coordinate polynomials.
pub type PolyVec = Vec<Polynomial>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    X,
    Y,
    Z,
    Identity,
    Const(Vec11),
    Mul(Box<Term>, Box<Term>),
    Inv(Box<Term>),
    /// `a \ b`: the `u` with `a ∘ u = b`.
    LDiv(Box<Term>, Box<Term>),
    /// `a / b`: the `u` with `u ∘ b = a`.
    RDiv(Box<Term>, Box<Term>),
}

impl Term {
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn inv(a: Term) -> Term {
        Term::Inv(Box::new(a))
    }

    pub fn ldiv(a: Term, b: Term) -> Term {
        Term::LDiv(Box::new(a), Box::new(b))
    }

    pub fn rdiv(a: Term, b: Term) -> Term {
        Term::RDiv(Box::new(a), Box::new(b))
    }

    /// `[a, b] = (ba) \ (ab)`.
    pub fn commutator(a: Term, b: Term) -> Term {
        Term::ldiv(Term::mul(b.clone(), a.clone()), Term::mul(a, b))
    }

    /// `(a, b, c) = (a(bc)) \ ((ab)c)`.
    pub fn associator(a: Term, b: Term, c: Term) -> Term {
        let left = Term::mul(Term::mul(a.clone(), b.clone()), c.clone());
        let right = Term::mul(a, Term::mul(b, c));
        Term::ldiv(right, left)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::X => f.write_str("X"),
            Term::Y => f.write_str("Y"),
            Term::Z => f.write_str("Z"),
            Term::Identity => f.write_str("1"),
            Term::Const(v) => write!(f, "{}", v.basis_notation()),
            Term::Mul(a, b) => write!(f, "({a}∘{b})"),
            Term::Inv(a) => write!(f, "{a}^-1"),
            Term::LDiv(a, b) => write!(f, "({a}\\{b})"),
            Term::RDiv(a, b) => write!(f, "({a}/{b})"),
        }
    }
}

/// Polynomial evaluation of loop terms for a given correction map.
#[derive(Debug, Clone, Copy)]
pub struct SymbolicLoop<'a> {
    map: &'a LoopMap,
    inv: &'a InvMap,
}

impl<'a> SymbolicLoop<'a> {
    pub fn new(map: &'a LoopMap, inv: &'a InvMap) -> SymbolicLoop<'a> {
        SymbolicLoop { map, inv }
    }

    /// The generic element of block `b` (0 = x, 1 = y, 2 = z).
    pub fn variable(block: u32) -> PolyVec {
        (0..DIM as Var).map(|k| Polynomial::var(block * BLOCK + k)).collect()
    }

    pub fn constant(v: &Vec11) -> PolyVec {
        (0..DIM).map(|k| Polynomial::constant(v.coord(k))).collect()
    }

    pub fn zero() -> PolyVec {
        vec![Polynomial::zero(); DIM]
    }

    pub fn mul(&self, a: &PolyVec, b: &PolyVec) -> Result<PolyVec, PolyError> {
        (0..DIM)
            .map(|k| {
                let f = self.map.correction(k).substitute_with(|v| bind_pair(v, a, b))?;
                Ok(&(&a[k] + &b[k]) + &f)
            })
            .collect()
    }

    /// `-a + h(a)`.
    pub fn inverse(&self, a: &PolyVec) -> Result<PolyVec, PolyError> {
        (0..DIM).map(|k| self.inv.component(k).substitute_with(|v| a.get(v as usize).filter(|_| v < BLOCK))).collect()
    }

    /// Solves `a ∘ u = w`.
    pub fn left_div(&self, a: &PolyVec, w: &PolyVec) -> Result<PolyVec, PolyError> {
        self.solve(a, w, false)
    }

    /// Solves `u ∘ b = w`.
    pub fn right_div(&self, w: &PolyVec, b: &PolyVec) -> Result<PolyVec, PolyError> {
        self.solve(b, w, true)
    }

    fn solve(&self, known: &PolyVec, w: &PolyVec, unknown_on_left: bool) -> Result<PolyVec, PolyError> {
        let mut u: Vec<Option<Polynomial>> = vec![None; DIM];
        for g in 1..=4 {
            let mut solved = Vec::new();
            for k in (0..DIM).filter(|&k| grade(k) == g) {
                let lookup = |v: Var| -> Option<&Polynomial> {
                    let (block, i) = (v / BLOCK, (v % BLOCK) as usize);
                    let unknown_block = if unknown_on_left { 0 } else { 1 };
                    match block {
                        b if b == unknown_block => u[i].as_ref(),
                        0 | 1 => Some(&known[i]),
                        _ => None,
                    }
                };
                let f = self.map.correction(k).substitute_with(lookup)?;
                solved.push((k, &(&w[k] - &known[k]) - &f));
            }
            for (k, p) in solved {
                u[k] = Some(p);
            }
        }
        Ok(u.into_iter().map(|p| p.expect("every grade solved")).collect())
    }

    pub fn eval(&self, t: &Term) -> Result<PolyVec, PolyError> {
        Ok(match t {
            Term::X => SymbolicLoop::variable(0),
            Term::Y => SymbolicLoop::variable(1),
            Term::Z => SymbolicLoop::variable(2),
            Term::Identity => SymbolicLoop::zero(),
            Term::Const(v) => SymbolicLoop::constant(v),
            Term::Mul(a, b) => self.mul(&self.eval(a)?, &self.eval(b)?)?,
            Term::Inv(a) => self.inverse(&self.eval(a)?)?,
            Term::LDiv(a, b) => self.left_div(&self.eval(a)?, &self.eval(b)?)?,
            Term::RDiv(a, b) => self.right_div(&self.eval(a)?, &self.eval(b)?)?,
        })
    }
}

fn bind_pair<'p>(v: Var, a: &'p PolyVec, b: &'p PolyVec) -> Option<&'p Polynomial> {
    match v / BLOCK {
        0 => a.get(v as usize),
        1 => b.get((v - BLOCK) as usize),
        _ => None,
    }
}

/// Outcome of a formal identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "UPPERCASE")]
pub enum IdentityVerdict {
    Pass,
    Fail {
        /// 1-based coordinate of the first nonzero difference.
        component: usize,
        /// Leading term of that difference, in polynomial text format.
        monomial: String,
        terms: usize,
    },
}

impl IdentityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, IdentityVerdict::Pass)
    }
}

impl fmt::Display for IdentityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityVerdict::Pass => f.write_str("PASS"),
            IdentityVerdict::Fail { component, monomial, terms } => {
                write!(f, "FAIL: component {component} differs by {terms} terms, leading {monomial}")
            }
        }
    }
}

/// PASS iff `lhs - rhs` is the zero polynomial in all 11 coordinates.
pub fn verify_identity(sym: &SymbolicLoop<'_>, lhs: &Term, rhs: &Term) -> Result<IdentityVerdict, PolyError> {
    let (a, b) = (sym.eval(lhs)?, sym.eval(rhs)?);
    for k in 0..DIM {
        let d = &a[k] - &b[k];
        if let Some((m, c)) = d.leading_term() {
            let monomial = Polynomial::term(c, m.clone()).to_string();
            return Ok(IdentityVerdict::Fail { component: k + 1, monomial, terms: d.len() });
        }
    }
    Ok(IdentityVerdict::Pass)
}

/// Cofactors (in the remaining variables) of every monomial in the `outer`
/// variables, across all coordinates of `diff`. Every outer variable must
/// have degree at most 2, so that vanishing at every point of F_3 is the
/// same as formal vanishing.
fn cofactor_constraints(diff: &PolyVec, outer: impl Fn(Var) -> bool + Copy) -> Result<Vec<Polynomial>, PolyError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in diff {
        for v in p.variables().into_iter().filter(|&v| outer(v)) {
            let d = p.max_degree_in(v);
            if d >= 3 {
                return Err(PolyError::DegreeTooHigh { var: v, degree: d });
            }
        }
        for (_, cof) in p.coefficients_by(outer) {
            if !cof.is_zero() && seen.insert(cof.clone()) {
                out.push(cof);
            }
        }
    }
    Ok(out)
}

/// Polynomials in `x` whose common zeros are exactly `C(L)`: the cofactors
/// of `X∘Y - Y∘X` with respect to the `y` monomials.
pub fn centralizer_constraints(map: &LoopMap) -> Result<Vec<Polynomial>, PolyLoopError> {
    let inv = InvMap::standard();
    let sym = SymbolicLoop::new(map, &inv);
    let (x, y) = (SymbolicLoop::variable(0), SymbolicLoop::variable(1));
    let (xy, yx) = (sym.mul(&x, &y)?, sym.mul(&y, &x)?);
    let diff: PolyVec = xy.iter().zip(&yx).map(|(a, b)| a - b).collect();
    Ok(cofactor_constraints(&diff, |v| v / BLOCK == 1)?)
}

/// Polynomials in `x` whose common zeros are exactly the left nucleus: the
/// cofactors of `(X∘Y)∘Z - X∘(Y∘Z)` with respect to the `(y, z)` monomials.
pub fn nucleus_constraints(map: &LoopMap) -> Result<Vec<Polynomial>, PolyLoopError> {
    let inv = InvMap::standard();
    let sym = SymbolicLoop::new(map, &inv);
    let (x, y, z) = (SymbolicLoop::variable(0), SymbolicLoop::variable(1), SymbolicLoop::variable(2));
    let left = sym.mul(&sym.mul(&x, &y)?, &z)?;
    let right = sym.mul(&x, &sym.mul(&y, &z)?)?;
    let diff: PolyVec = left.iter().zip(&right).map(|(a, b)| a - b).collect();
    Ok(cofactor_constraints(&diff, |v| v / BLOCK >= 1)?)
}

pub fn satisfies_all(constraints: &[Polynomial], v: &Vec11) -> bool {
    let c = v.coords();
    let point = |var: Var| c.get(var as usize).map(|&a| Coeff::new(a as i64));
    constraints.iter().all(|p| p.evaluate_with(point).map(|r| r.is_zero()).unwrap_or(false))
}

/// The 0-based coordinates `S` if `members` is exactly the coordinate
/// subspace spanned by `{e_k : k in S}`.
pub fn coordinate_support(members: &[Vec11]) -> Option<Vec<usize>> {
    let support: Vec<usize> = (0..DIM).filter(|&k| members.iter().any(|m| m.coords()[k] != 0)).collect();
    let expected = 3usize.checked_pow(support.len() as u32)?;
    let distinct: HashSet<&Vec11> = members.iter().collect();
    (distinct.len() == expected).then_some(support)
}

fn point_to_vectors(point: impl IntoIterator<Item = (Var, Coeff)>) -> (Vec11, Vec11) {
    let mut x = [0i64; DIM];
    let mut y = [0i64; DIM];
    for (v, c) in point {
        let (block, i) = (v / BLOCK, (v % BLOCK) as usize);
        match block {
            0 => x[i] = c.value() as i64,
            1 => y[i] = c.value() as i64,
            _ => {}
        }
    }
    (Vec11::new(x), Vec11::new(y))
}

/// Decides normality of a coordinate subspace `N` with support `S`: for
/// every `n` in `N` the images `T_X(n)`, `L_{X,Y}(n)`, `R_{X,Y}(n)` are
/// computed with `X`, `Y` symbolic, and every coordinate outside `S` must be
/// the zero polynomial. A nonzero coordinate is turned into a concrete
/// certificate by locating a point where it does not vanish.
pub fn symbolic_normality(l: &PolyLoop, sub: &Subloop<Vec11>) -> Result<NormalityVerdict<Vec11>, LoopError> {
    let support = coordinate_support(sub.members())
        .ok_or_else(|| LoopError::StrategyUnavailable(format!("{} is not a coordinate subspace", sub.label())))?;
    let outside: Vec<usize> = (0..DIM).filter(|k| !support.contains(k)).collect();
    let sym = l.symbolic();
    let (x, y) = (SymbolicLoop::variable(0), SymbolicLoop::variable(1));
    let xy = sym.mul(&x, &y)?;
    for n in sub.members() {
        let c = SymbolicLoop::constant(n);
        let t = sym.left_div(&x, &sym.mul(&c, &x)?)?;
        let lm = sym.left_div(&xy, &sym.mul(&x, &sym.mul(&y, &c)?)?)?;
        let rm = sym.right_div(&sym.mul(&sym.mul(&c, &x)?, &y)?, &xy)?;
        for (kind, image) in [(InnerMapKind::T, t), (InnerMapKind::L, lm), (InnerMapKind::R, rm)] {
            for &k in &outside {
                if image[k].is_zero() {
                    continue;
                }
                let (px, py) = nonvanishing_point(&image[k])?;
                let py = (kind != InnerMapKind::T).then_some(py);
                let cert = certificate_for(l, sub, kind, &px, py.as_ref(), n).ok_or_else(|| {
                    LoopError::StrategyUnavailable(format!(
                        "coordinate {} of the {kind} image of {} is formally nonzero but vanishes at the chosen point",
                        k + 1,
                        l.format_element(n)
                    ))
                })?;
                return Ok(NormalityVerdict::refuted(NormalityMethod::Symbolic, cert));
            }
        }
    }
    Ok(NormalityVerdict::normal(NormalityMethod::Symbolic))
}

/// A concrete `(x, y)` at which `p` is nonzero: exact when every variable has
/// degree below 3, otherwise by seeded search.
fn nonvanishing_point(p: &Polynomial) -> Result<(Vec11, Vec11), LoopError> {
    match p.find_nonzero_point() {
        Ok(Some(point)) => Ok(point_to_vectors(point)),
        Ok(None) => unreachable!("called on a nonzero polynomial"),
        Err(PolyError::DegreeTooHigh { .. }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x7074);
            let vars = p.variables();
            for _ in 0..100_000 {
                let point: Vec<(Var, Coeff)> = vars.iter().map(|&v| (v, Coeff::new(rng.gen_range(0..3)))).collect();
                let val = p.evaluate_with(|v| point.iter().find(|q| q.0 == v).map(|q| q.1))?;
                if !val.is_zero() {
                    return Ok(point_to_vectors(point));
                }
            }
            Err(LoopError::StrategyUnavailable(format!("no point found where {p} is nonzero")))
        }
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard() -> (LoopMap, InvMap) {
        (LoopMap::standard(), InvMap::standard())
    }

    #[test]
    fn product_term_is_the_map_itself() {
        let (m, i) = standard();
        let sym = SymbolicLoop::new(&m, &i);
        assert_eq!(sym.eval(&Term::mul(Term::X, Term::Y)).unwrap(), m.components());
    }

    #[test]
    fn inverse_identity_holds_formally() {
        let (m, i) = standard();
        let sym = SymbolicLoop::new(&m, &i);
        let id = Term::Identity;
        assert!(verify_identity(&sym, &Term::mul(Term::X, Term::inv(Term::X)), &id).unwrap().passed());
        assert!(verify_identity(&sym, &Term::mul(Term::inv(Term::X), Term::X), &id).unwrap().passed());
    }

    #[test]
    fn divisions_invert_products_formally() {
        let (m, i) = standard();
        let sym = SymbolicLoop::new(&m, &i);
        let t = Term::ldiv(Term::X, Term::mul(Term::X, Term::Y));
        assert!(verify_identity(&sym, &t, &Term::Y).unwrap().passed());
        let t = Term::rdiv(Term::mul(Term::X, Term::Y), Term::Y);
        assert!(verify_identity(&sym, &t, &Term::X).unwrap().passed());
    }

    #[test]
    fn a_false_identity_fails_with_a_location() {
        let (m, i) = standard();
        let sym = SymbolicLoop::new(&m, &i);
        let v = verify_identity(&sym, &Term::mul(Term::X, Term::Y), &Term::mul(Term::Y, Term::X)).unwrap();
        match v {
            IdentityVerdict::Fail { component, .. } => assert_eq!(component, 5),
            IdentityVerdict::Pass => panic!("L is not commutative"),
        }
    }

    #[test]
    fn centralizer_constraint_examples() {
        let cs = centralizer_constraints(&LoopMap::standard()).unwrap();
        assert!(satisfies_all(&cs, &Vec11::e(1)));
        assert!(satisfies_all(&cs, &Vec11::ZERO));
        assert!(!satisfies_all(&cs, &Vec11::e(8)));
    }

    #[test]
    fn nucleus_constraint_examples() {
        let cs = nucleus_constraints(&LoopMap::standard()).unwrap();
        assert!(satisfies_all(&cs, &Vec11::e(8)));
        assert!(satisfies_all(&cs, &Vec11::ZERO));
        assert!(!satisfies_all(&cs, &Vec11::e(1)));
    }

    #[test]
    fn support_detection() {
        let l = PolyLoop::new();
        let n = l.span("N", &[5, 6, 7, 11]);
        assert_eq!(coordinate_support(n.members()), Some(vec![4, 5, 6, 10]));
        assert_eq!(coordinate_support(&[Vec11::ZERO, Vec11::e(1) + Vec11::e(2)]), None);
    }

    #[test]
    fn division_rejects_non_triangular_dependence() {
        let mut f = LoopMap::standard().corrections().to_vec();
        f[4] = "y5".parse().unwrap();
        assert!(LoopMap::from_corrections(f).is_err());
    }
}
