//! The multiplication and inversion maps of the polynomial loop as explicit
//! polynomials.
//!
//! The defining polynomials are kept as data in the 1-based notation of the
//! defining formulas (`x1 .. x11`, `y1 .. y11`) and converted to the 0-based
//! variable layout of [`crate::gf3`] on construction.

use crate::gf3::{Coeff, Monomial, Polynomial, Var, BLOCK};

use super::{grade, PolyLoopError, DIM};

type TermTable = [&'static [(i8, &'static str)]; DIM];

/// `f_k` for `k = 1..11`.
#[rustfmt::skip]
const F_TABLE: TermTable = [
    &[],
    &[],
    &[],
    &[],
    &[(-1, "x3 y2")],
    &[(-1, "x4 y2")],
    &[(-1, "x4 y3")],
    &[(1, "x1 x3 y2"), (-1, "x1 y2 y3"), (-1, "x2 x3 y1"), (1, "x2 y1 y3")],
    &[(1, "x1 x4 y2"), (-1, "x1 y2 y4"), (-1, "x2 x4 y1"), (1, "x2 y1 y4")],
    &[(1, "x1 x4 y3"), (-1, "x1 y3 y4"), (-1, "x3 x4 y1"), (1, "x3 y1 y4")],
    &[
        (-1, "x1 x2 x4 y3"), (1, "x1 x2 y3 y4"), (1, "x1 x3 y2 y4"), (1, "x1 x4 y2 y3"),
        (1, "x2 x3 y1 y4"), (1, "x2 x4 y1 y3"), (-1, "x2 y1 y3 y4"), (1, "x3 x4 y1 y2"),
        (-1, "x4 y1 y2 y3"), (-1, "x1 x5 y4"), (1, "x1 x6 y3"), (-1, "x1 x7 y2"),
        (1, "x1 y2 y7"), (-1, "x1 y3 y6"), (1, "x1 y4 y5"), (1, "x2 x7 y1"),
        (-1, "x2 y1 y7"), (-1, "x3 x6 y1"), (1, "x3 y1 y6"), (1, "x4 x5 y1"),
        (-1, "x4 y1 y5"), (1, "x8 y4"), (-1, "x9 y3"), (1, "x10 y2"),
    ],
];

/// `h_k` for `k = 1..11`.
#[rustfmt::skip]
const H_TABLE: TermTable = [
    &[],
    &[],
    &[],
    &[],
    &[(-1, "x2 x3")],
    &[(-1, "x2 x4")],
    &[(-1, "x3 x4")],
    &[],
    &[],
    &[],
    &[(1, "x2 x10"), (-1, "x3 x9"), (1, "x4 x8")],
];

/// Parses a factor such as `x3` or `y10` (1-based) into a 0-based variable.
fn parse_factor(s: &str) -> Var {
    let (block, idx) = s.split_at(1);
    let i: Var = idx.parse().expect("well-formed factor");
    assert!((1..=BLOCK).contains(&i), "coordinate {i} out of range");
    match block {
        "x" => i - 1,
        "y" => BLOCK + i - 1,
        _ => panic!("unknown block in {s}"),
    }
}

fn table_polynomial(terms: &[(i8, &str)]) -> Polynomial {
    Polynomial::from_terms(terms.iter().map(|&(c, m)| {
        let vars = m.split_whitespace().map(|f| (parse_factor(f), 1));
        (Coeff::new(c as i64), Monomial::from_pairs(vars))
    }))
}

fn coordinate_of(v: Var) -> usize {
    (v % BLOCK) as usize
}

/// The correction polynomials `f_1 .. f_11` of `x ∘ y = x + y + f`, in the
/// variables `x = 0..11`, `y = 11..22`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopMap {
    f: Vec<Polynomial>,
}

impl LoopMap {
    pub fn standard() -> LoopMap {
        let f = F_TABLE.iter().map(|t| table_polynomial(t)).collect();
        LoopMap::from_corrections(f).expect("the defining map is triangular")
    }

    /// Validates triangularity: every variable of `f_k` belongs to a
    /// coordinate of strictly lower grade than `k`, and only `x`/`y`
    /// variables occur.
    pub fn from_corrections(f: Vec<Polynomial>) -> Result<LoopMap, PolyLoopError> {
        if f.len() != DIM {
            return Err(PolyLoopError::Dimension(f.len()));
        }
        for (k, fk) in f.iter().enumerate() {
            for (m, _) in fk.terms() {
                for &(v, _) in m.factors() {
                    if v >= 2 * BLOCK || grade(coordinate_of(v)) >= grade(k) {
                        return Err(PolyLoopError::NotTriangular { component: k + 1, monomial: m.to_string() });
                    }
                }
            }
        }
        Ok(LoopMap { f })
    }

    pub fn correction(&self, k: usize) -> &Polynomial {
        &self.f[k]
    }

    pub fn corrections(&self) -> &[Polynomial] {
        &self.f
    }

    /// The full component `x_k + y_k + f_k`.
    pub fn component(&self, k: usize) -> Polynomial {
        let lin = &Polynomial::var(k as Var) + &Polynomial::var(BLOCK + k as Var);
        &lin + &self.f[k]
    }

    pub fn components(&self) -> Vec<Polynomial> {
        (0..DIM).map(|k| self.component(k)).collect()
    }

    /// A copy with the sign of the `term`-th monomial (in descending order)
    /// of `f_k` flipped.
    pub fn with_flipped_sign(&self, k: usize, term: usize) -> Option<LoopMap> {
        let (m, c) = self.f.get(k)?.terms().nth(term)?;
        let mut f = self.f.clone();
        // c + c = -c over F_3.
        f[k].add_term(c, m.clone());
        Some(LoopMap { f })
    }
}

/// The correction polynomials `h_1 .. h_11` of `x^{-1} = -x + h` in the
/// variables `x = 0..11`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvMap {
    h: Vec<Polynomial>,
}

impl InvMap {
    pub fn standard() -> InvMap {
        InvMap { h: H_TABLE.iter().map(|t| table_polynomial(t)).collect() }
    }

    pub fn correction(&self, k: usize) -> &Polynomial {
        &self.h[k]
    }

    /// The full component `-x_k + h_k`.
    pub fn component(&self, k: usize) -> Polynomial {
        &self.h[k] - &Polynomial::var(k as Var)
    }

    pub fn components(&self) -> Vec<Polynomial> {
        (0..DIM).map(|k| self.component(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn quadratic_corrections_match_definition() {
        let m = LoopMap::standard();
        assert_eq!(*m.correction(4), p("-x2*y1"));
        assert_eq!(*m.correction(5), p("-x3*y1"));
        assert_eq!(*m.correction(6), p("-x3*y2"));
        assert!(m.correction(0).is_zero() && m.correction(3).is_zero());
        assert_eq!(*m.correction(7), p("x0*x2*y1 - x0*y1*y2 - x1*x2*y0 + x1*y0*y2"));
    }

    #[test]
    fn quartic_correction_has_24_terms() {
        let m = LoopMap::standard();
        assert_eq!(m.correction(10).len(), 24);
        assert_eq!(m.correction(10).total_degree(), 4);
        assert_eq!(m.correction(10).coeff(&Monomial::from_pairs([(9, 1), (12, 1)])), Coeff::ONE);
    }

    #[test]
    fn every_correction_respects_the_grading() {
        let m = LoopMap::standard();
        for k in 0..DIM {
            for v in m.correction(k).variables() {
                assert!(grade(coordinate_of(v)) < grade(k), "f{} uses {}", k + 1, crate::gf3::var_name(v));
            }
        }
    }

    #[test]
    fn non_triangular_map_is_rejected() {
        let mut f = LoopMap::standard().corrections().to_vec();
        f[4] = p("x5*y0");
        assert!(matches!(LoopMap::from_corrections(f), Err(PolyLoopError::NotTriangular { component: 5, .. })));
    }

    #[test]
    fn inverse_corrections() {
        let h = InvMap::standard();
        assert_eq!(*h.correction(4), p("-x1*x2"));
        assert_eq!(*h.correction(10), p("x1*x9 - x2*x8 + x3*x7"));
        assert_eq!(h.component(0), p("-x0"));
    }

    #[test]
    fn flipping_a_sign_changes_one_term() {
        let m = LoopMap::standard();
        let mutant = m.with_flipped_sign(10, 0).unwrap();
        let diff = mutant.correction(10) - m.correction(10);
        assert_eq!(diff.len(), 1);
        assert_eq!(mutant.correction(10).len(), 24);
    }
}
