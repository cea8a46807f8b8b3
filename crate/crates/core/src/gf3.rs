//! Sparse multivariate polynomials over the three-element field.
//!
//! Polynomials are formal: no `x^3 = x` reduction is ever applied, so an
//! identity proved here holds over every field of characteristic 3.
//!
//! Variables live in one global index space. The loop modules reserve
//! `[0, 11)` for `x`, `[11, 22)` for `y` and `[22, 33)` for `z`; the text
//! rendering uses those names (`x0..x10`, `y0..y10`, `z0..z10`) and falls back
//! to `v<index>` above 33.
//!
//! # Text format
//!
//! Terms are printed in descending monomial order. A coefficient of 2 is
//! rendered as a `-` sign, factors are joined by `*`, powers use `^`:
//!
//! ```text
//! x0^2 - x2*y1*y3 + 1
//! ```
//!
//! The zero polynomial prints as `0`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

/// Index of a polynomial variable.
pub type Var = u32;

/// Number of variables per named block (`x`, `y`, `z`).
pub const BLOCK: Var = 11;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable {} has no binding", var_name(*.0))]
    UnboundVariable(Var),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("variable {} has degree {degree} >= 3", var_name(*.var))]
    DegreeTooHigh { var: Var, degree: u32 },
}

/// An element of F_3, stored canonically as 0, 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coeff(u8);

impl Coeff {
    pub const ZERO: Coeff = Coeff(0);
    pub const ONE: Coeff = Coeff(1);
    pub const TWO: Coeff = Coeff(2);

    pub fn new(v: i64) -> Coeff {
        Coeff(v.rem_euclid(3) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn pow(self, e: u32) -> Coeff {
        let mut acc = Coeff::ONE;
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }

    pub fn all() -> [Coeff; 3] {
        [Coeff(0), Coeff(1), Coeff(2)]
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, rhs: Coeff) -> Coeff {
        Coeff((self.0 + rhs.0) % 3)
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        Coeff((self.0 + 3 - rhs.0) % 3)
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        Coeff((self.0 * rhs.0) % 3)
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff((3 - self.0) % 3)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A power product: sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary pairs; repeated variables are merged
    /// and zero exponents dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Monomial {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.0.binary_search_by_key(&v, |&(w, _)| w).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Splits into the factors whose variable satisfies `pred` and the rest.
    pub fn split(&self, pred: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let (inside, outside): (Vec<_>, Vec<_>) = self.0.iter().partition(|&&(v, _)| pred(v));
        (Monomial(inside), Monomial(outside))
    }

    pub fn evaluate(&self, point: impl Fn(Var) -> Option<Coeff>) -> Result<Coeff, PolyError> {
        let mut acc = Coeff::ONE;
        for &(v, e) in &self.0 {
            let c = point(v).ok_or(PolyError::UnboundVariable(v))?;
            acc = acc * c.pow(e);
        }
        Ok(acc)
    }
}

// Graded lexicographic: total degree first, then the dense exponent vectors
// compared from variable 0 upward.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let deg = self.total_degree().cmp(&other.total_degree());
        if deg != Ordering::Equal {
            return deg;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Greater;
                    }
                    if vb < va {
                        return Ordering::Less;
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders a variable index in the `x`/`y`/`z` block convention.
pub fn var_name(v: Var) -> String {
    match v / BLOCK {
        0 => format!("x{}", v),
        1 => format!("y{}", v - BLOCK),
        2 => format!("z{}", v - 2 * BLOCK),
        _ => format!("v{}", v),
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", var_name(v))?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

/// Canonical sparse polynomial: a map from monomial to nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn constant(c: Coeff) -> Polynomial {
        Polynomial::term(c, Monomial::one())
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Coeff::ONE)
    }

    pub fn var(v: Var) -> Polynomial {
        Polynomial::term(Coeff::ONE, Monomial::var(v))
    }

    pub fn term(c: Coeff, m: Monomial) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(c, m);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Coeff, Monomial)>) -> Polynomial {
        let mut p = Polynomial::zero();
        for (c, m) in terms {
            p.add_term(c, m);
        }
        p
    }

    /// Adds `c * m` in place, keeping the term map canonical.
    pub fn add_term(&mut self, c: Coeff, m: Monomial) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, Coeff)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).copied().unwrap_or(Coeff::ZERO)
    }

    /// The largest monomial, if any.
    pub fn leading_term(&self) -> Option<(&Monomial, Coeff)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn max_degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Sorted, deduplicated list of variables that occur.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.factors().iter().map(|&(v, _)| v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, &d)| (m.clone(), d * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces every variable by its bound polynomial and expands.
    pub fn substitute(&self, bindings: &HashMap<Var, Polynomial>) -> Result<Polynomial, PolyError> {
        self.substitute_with(|v| bindings.get(&v))
    }

    /// Same as [`Polynomial::substitute`] with a lookup function; powers of
    /// each bound polynomial are cached for the duration of the call.
    pub fn substitute_with<'a>(&self, lookup: impl Fn(Var) -> Option<&'a Polynomial>) -> Result<Polynomial, PolyError> {
        let mut powers: HashMap<(Var, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            let mut prod = Polynomial::constant(c);
            for &(v, e) in m.factors() {
                let base = lookup(v).ok_or(PolyError::UnboundVariable(v))?;
                if base.is_zero() {
                    prod = Polynomial::zero();
                    break;
                }
                let pw = powers.entry((v, e)).or_insert_with(|| base.pow(e));
                prod = &prod * &*pw;
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &HashMap<Var, Coeff>) -> Result<Coeff, PolyError> {
        self.evaluate_with(|v| point.get(&v).copied())
    }

    pub fn evaluate_with(&self, point: impl Fn(Var) -> Option<Coeff>) -> Result<Coeff, PolyError> {
        let mut acc = Coeff::ZERO;
        for (m, c) in self.terms() {
            acc = acc + c * m.evaluate(&point)?;
        }
        Ok(acc)
    }

    /// Groups terms by the part of their monomial on variables matching
    /// `outer`; each group's cofactor is a polynomial in the other variables.
    pub fn coefficients_by(&self, outer: impl Fn(Var) -> bool) -> BTreeMap<Monomial, Polynomial> {
        let mut groups: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in self.terms() {
            let (key, rest) = m.split(&outer);
            groups.entry(key).or_default().add_term(c, rest);
        }
        groups
    }

    /// Finds a point of F_3 at which this polynomial is nonzero by fixing
    /// variables one at a time. Requires every variable to have degree < 3,
    /// which guarantees such a point exists whenever the polynomial is
    /// formally nonzero. Returns `None` for the zero polynomial.
    pub fn find_nonzero_point(&self) -> Result<Option<BTreeMap<Var, Coeff>>, PolyError> {
        if self.is_zero() {
            return Ok(None);
        }
        for v in self.variables() {
            let d = self.max_degree_in(v);
            if d >= 3 {
                return Err(PolyError::DegreeTooHigh { var: v, degree: d });
            }
        }
        let mut point = BTreeMap::new();
        let mut current = self.clone();
        for v in self.variables() {
            let mut chosen = None;
            for c in Coeff::all() {
                let fixed = current.fix_variable(v, c);
                if !fixed.is_zero() {
                    chosen = Some((c, fixed));
                    break;
                }
            }
            let (c, fixed) = chosen.expect("degree < 3 polynomial vanishing on all of F_3");
            point.insert(v, c);
            current = fixed;
        }
        Ok(Some(point))
    }

    /// Substitutes a constant for one variable, leaving the others symbolic.
    pub fn fix_variable(&self, v: Var, c: Coeff) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, d) in self.terms() {
            let e = m.degree_in(v);
            if e == 0 {
                out.add_term(d, m.clone());
            } else {
                let (_, rest) = m.split(|w| w == v);
                out.add_term(d * c.pow(e), rest);
            }
        }
        out
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in small.terms() {
            out.add_term(c, m.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(-c, m.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                out.add_term(ca * cb, ma.mul(mb));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(Coeff::TWO)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let neg = c == Coeff::TWO;
            match (k, neg) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            write!(f, "{}", m)?;
        }
        Ok(())
    }
}

fn parse_var(tok: &str) -> Result<Var, PolyError> {
    let bad = || PolyError::Parse(format!("bad variable `{}`", tok));
    let (head, digits) = tok.split_at(1);
    let idx: Var = digits.parse().map_err(|_| bad())?;
    match head {
        "x" | "y" | "z" if idx >= BLOCK => Err(bad()),
        "x" => Ok(idx),
        "y" => Ok(BLOCK + idx),
        "z" => Ok(2 * BLOCK + idx),
        "v" => Ok(idx),
        _ => Err(bad()),
    }
}

fn parse_term(text: &str) -> Result<(Coeff, Monomial), PolyError> {
    let mut coeff = Coeff::ONE;
    let mut pairs = Vec::new();
    for factor in text.split('*').map(str::trim) {
        if factor.is_empty() {
            return Err(PolyError::Parse(format!("empty factor in `{}`", text)));
        }
        if factor.chars().all(|ch| ch.is_ascii_digit()) {
            let n: i64 = factor.parse().map_err(|_| PolyError::Parse(factor.to_string()))?;
            coeff = coeff * Coeff::new(n);
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (n, e.parse::<u32>().map_err(|_| PolyError::Parse(factor.to_string()))?),
            None => (factor, 1),
        };
        pairs.push((parse_var(name)?, exp));
    }
    Ok((coeff, Monomial::from_pairs(pairs)))
}

/// Parses the text format produced by `Display`. Integer factors such as
/// `2*x0` are accepted and reduced mod 3.
impl FromStr for Polynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Polynomial, PolyError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        let mut out = Polynomial::zero();
        let mut sign = Coeff::ONE;
        let mut start = 0;
        let bytes = s.as_bytes();
        let mut pieces = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 && bytes[..i].iter().any(|ch| !ch.is_ascii_whitespace()) {
                pieces.push((sign, &s[start..i]));
                sign = if b == b'-' { Coeff::TWO } else { Coeff::ONE };
                start = i + 1;
            } else if (b == b'+' || b == b'-') && i == 0 {
                sign = if b == b'-' { Coeff::TWO } else { Coeff::ONE };
                start = 1;
            }
        }
        pieces.push((sign, &s[start..]));
        for (sign, text) in pieces {
            let (c, m) = parse_term(text.trim())?;
            out.add_term(sign * c, m);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn x(i: Var) -> Polynomial {
        Polynomial::var(i)
    }

    #[test]
    fn coefficient_arithmetic() {
        assert_eq!(Coeff::ONE + Coeff::TWO, Coeff::ZERO);
        assert_eq!(Coeff::TWO * Coeff::TWO, Coeff::ONE);
        assert_eq!(-Coeff::ONE, Coeff::TWO);
        assert_eq!(Coeff::new(-4), Coeff::TWO);
    }

    #[test]
    fn add_examples() {
        let two_x0 = x(0).scale(Coeff::TWO);
        assert!((&x(0) + &two_x0).is_zero());
        let q = p("x0*x1 + y3");
        assert_eq!(&Polynomial::zero() + &q, q);
        let m = p("x0*x1");
        assert_eq!(&m + &m, p("-x0*x1"));
        assert_eq!((&m + &m).coeff(&Monomial::from_pairs([(0, 1), (1, 1)])), Coeff::TWO);
    }

    #[test]
    fn mul_examples() {
        let a = &x(0) + &x(1);
        let b = &x(0) + &x(1).scale(Coeff::TWO);
        assert_eq!(&a * &b, p("x0^2 - x1^2"));
        assert!((&a * &Polynomial::zero()).is_zero());
        assert_eq!(&x(0) * &x(0), p("x0^2"));
        assert_eq!((&x(0) * &x(0)).max_degree_in(0), 2);
    }

    #[test]
    fn substitute_examples() {
        let mut b = HashMap::new();
        b.insert(0, &x(0) + &x(1));
        assert_eq!(p("x0^2").substitute(&b).unwrap(), p("x0^2 + 2*x0*x1 + x1^2"));

        let q = p("x0*x1^2 - y2 + 1");
        let ident: HashMap<Var, Polynomial> = q.variables().into_iter().map(|v| (v, x(v))).collect();
        assert_eq!(q.substitute(&ident).unwrap(), q);

        let mut b = HashMap::new();
        b.insert(0, x(2));
        b.insert(1, Polynomial::zero());
        assert!(p("x0*x1").substitute(&b).unwrap().is_zero());
    }

    #[test]
    fn substitute_unbound_variable() {
        let b: HashMap<Var, Polynomial> = [(0, x(1))].into_iter().collect();
        assert_eq!(p("x0*x5").substitute(&b), Err(PolyError::UnboundVariable(5)));
    }

    #[test]
    fn evaluate_examples() {
        let pt: HashMap<Var, Coeff> = [(0, Coeff::ONE), (1, Coeff::ONE)].into_iter().collect();
        assert_eq!(p("x0*x1 + 2").evaluate(&pt).unwrap(), Coeff::ZERO);
        assert_eq!(Polynomial::zero().evaluate(&HashMap::new()).unwrap(), Coeff::ZERO);
        let pt: HashMap<Var, Coeff> = [(0, Coeff::TWO)].into_iter().collect();
        assert_eq!(p("x0^2").evaluate(&pt).unwrap(), Coeff::ONE);
        assert_eq!(p("x3").evaluate(&pt), Err(PolyError::UnboundVariable(3)));
    }

    #[test]
    fn is_zero_examples() {
        assert!(Polynomial::zero().is_zero());
        assert!(p("x0 + 2*x0").is_zero());
        assert!(!x(0).is_zero());
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(p("x0^2*x1").max_degree_in(0), 2);
        assert_eq!(Polynomial::zero().max_degree_in(0), 0);
        assert_eq!(x(1).max_degree_in(0), 0);
    }

    #[test]
    fn rendering() {
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(p("-x2*y1*y3").to_string(), "-x2*y1*y3");
        assert_eq!(p("1 + x0^2 - x1").to_string(), "x0^2 - x1 + 1");
        assert_eq!(p("-1").to_string(), "-1");
        assert_eq!(p("z10*v40").to_string(), "z10*v40");
    }

    #[test]
    fn graded_order() {
        let a = Monomial::from_pairs([(0, 2)]);
        let b = Monomial::from_pairs([(0, 1), (1, 1)]);
        let c = Monomial::from_pairs([(1, 2)]);
        let d = Monomial::var(5);
        assert!(a > b && b > c && c > d && d > Monomial::one());
    }

    #[test]
    fn nonzero_point_search() {
        let q = p("x0*x1 - x0^2*x1 + y0^2");
        let pt = q.find_nonzero_point().unwrap().unwrap();
        assert!(!q.evaluate_with(|v| Some(*pt.get(&v).unwrap())).unwrap().is_zero());
        assert_eq!(Polynomial::zero().find_nonzero_point().unwrap(), None);
        assert!(matches!(p("x0^3 - x0").find_nonzero_point(), Err(PolyError::DegreeTooHigh { .. })));
    }

    #[test]
    fn coefficient_extraction() {
        let q = p("x0*y1 + x2*y1 - x3 + y2^2");
        let groups = q.coefficients_by(|v| v >= BLOCK);
        assert_eq!(groups[&Monomial::var(BLOCK + 1)], p("x0 + x2"));
        assert_eq!(groups[&Monomial::one()], p("-x3"));
        assert_eq!(groups[&Monomial::from_pairs([(BLOCK + 2, 2)])], Polynomial::one());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("x0 + q1".parse::<Polynomial>().is_err());
        assert!("x11".parse::<Polynomial>().is_err());
        assert!("".parse::<Polynomial>().is_err());
    }
}
