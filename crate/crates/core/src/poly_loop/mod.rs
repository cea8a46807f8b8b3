//! The Moufang loop `L = (F_3^11, ∘)` of order `3^11`.
//!
//! Multiplication is `x ∘ y = x + y + f(x, y)` for explicit polynomials
//! `f_1 .. f_11`; the identity is the zero vector and `x^{-1} = -x + h(x)`.
//! Coordinates carry grades (1 for coordinates 1-4, 2 for 5-7, 3 for 8-10,
//! 4 for 11) and `f_k` only involves coordinates of lower grade than `k`, so
//! both divisions are solved grade by grade.
//!
//! Coordinates are 1-based in text (`e1 .. e11`) and 0-based in code.

mod maps;
mod symbolic;

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf3::{Coeff, PolyError, Polynomial};
use crate::loop_core::{greedy_generators, FiniteLoop, LoopError, NormalityVerdict, Subloop};

pub use maps::{InvMap, LoopMap};
pub use symbolic::{
    centralizer_constraints, coordinate_support, nucleus_constraints, satisfies_all, symbolic_normality,
    verify_identity, IdentityVerdict, PolyVec, SymbolicLoop, Term,
};

/// Dimension of the underlying vector space.
pub const DIM: usize = 11;

/// Number of elements, `3^11`.
pub const ORDER: usize = 177_147;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyLoopError {
    #[error("expected 11 components, got {0}")]
    Dimension(usize),
    #[error("f{component} is not triangular: monomial {monomial} involves a coordinate of equal or higher grade")]
    NotTriangular { component: usize, monomial: String },
    #[error("cannot parse vector `{0}`")]
    ParseVec(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Grade of the 0-based coordinate `k`.
pub fn grade(k: usize) -> u32 {
    match k {
        0..=3 => 1,
        4..=6 => 2,
        7..=9 => 3,
        10 => 4,
        _ => panic!("coordinate {k} out of range"),
    }
}

/// An element of `F_3^11`, coordinates stored as 0, 1, 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vec11([u8; DIM]);

impl Vec11 {
    pub const ZERO: Vec11 = Vec11([0; DIM]);

    /// Reduces every entry mod 3.
    pub fn new(coords: [i64; DIM]) -> Vec11 {
        Vec11(coords.map(|c| c.rem_euclid(3) as u8))
    }

    /// The standard basis vector `e_i`, `i` in `1..=11`.
    pub fn e(i: usize) -> Vec11 {
        assert!((1..=DIM).contains(&i), "basis index {i} out of range");
        let mut v = [0; DIM];
        v[i - 1] = 1;
        Vec11(v)
    }

    pub fn coords(&self) -> [u8; DIM] {
        self.0
    }

    /// 0-based coordinate.
    pub fn coord(&self, k: usize) -> Coeff {
        Coeff::new(self.0[k] as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; DIM]
    }

    pub fn scale(&self, c: u8) -> Vec11 {
        Vec11(self.0.map(|a| (a * (c % 3)) % 3))
    }

    /// 0-based coordinates with a nonzero entry.
    pub fn support(&self) -> Vec<usize> {
        (0..DIM).filter(|&k| self.0[k] != 0).collect()
    }

    /// Lexicographic rank with the first coordinate most significant.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &c| acc * 3 + c as usize)
    }

    pub fn from_index(mut index: usize) -> Vec11 {
        assert!(index < ORDER, "index {index} out of range");
        let mut v = [0; DIM];
        for k in (0..DIM).rev() {
            v[k] = (index % 3) as u8;
            index /= 3;
        }
        Vec11(v)
    }

    /// Basis notation such as `e1+2e8`; the zero vector is `0`.
    pub fn basis_notation(&self) -> String {
        let parts: Vec<String> = (0..DIM)
            .filter(|&k| self.0[k] != 0)
            .map(|k| if self.0[k] == 1 { format!("e{}", k + 1) } else { format!("2e{}", k + 1) })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    fn as_i64(&self) -> [i64; DIM] {
        self.0.map(i64::from)
    }
}

impl Add for Vec11 {
    type Output = Vec11;
    fn add(self, o: Vec11) -> Vec11 {
        Vec11(std::array::from_fn(|k| (self.0[k] + o.0[k]) % 3))
    }
}

impl Sub for Vec11 {
    type Output = Vec11;
    fn sub(self, o: Vec11) -> Vec11 {
        Vec11(std::array::from_fn(|k| (self.0[k] + 3 - o.0[k]) % 3))
    }
}

impl Neg for Vec11 {
    type Output = Vec11;
    fn neg(self) -> Vec11 {
        Vec11(self.0.map(|c| (3 - c) % 3))
    }
}

/// `(c1,c2,...,c11)`.
impl fmt::Display for Vec11 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", cs.join(","))
    }
}

impl fmt::Debug for Vec11 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis_notation())
    }
}

impl FromStr for Vec11 {
    type Err = PolyLoopError;

    fn from_str(s: &str) -> Result<Vec11, PolyLoopError> {
        let err = || PolyLoopError::ParseVec(s.to_string());
        let inner = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(err)?;
        let cs: Vec<u8> = inner
            .split(',')
            .map(|t| t.trim().parse::<u8>().ok().filter(|&c| c < 3).ok_or_else(err))
            .collect::<Result<_, _>>()?;
        let arr: [u8; DIM] = cs.try_into().map_err(|_| err())?;
        Ok(Vec11(arr))
    }
}

impl Serialize for Vec11 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Vec11 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Vec11, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `f(x, y)` for the defining map, evaluated directly.
fn standard_corrections(x: &[i64; DIM], y: &[i64; DIM]) -> [i64; DIM] {
    let [x1, x2, x3, x4, x5, x6, x7, x8, x9, x10, _] = *x;
    let [y1, y2, y3, y4, y5, y6, y7, ..] = *y;
    let mut f = [0i64; DIM];
    f[4] = -x3 * y2;
    f[5] = -x4 * y2;
    f[6] = -x4 * y3;
    f[7] = x1 * x3 * y2 - x1 * y2 * y3 - x2 * x3 * y1 + x2 * y1 * y3;
    f[8] = x1 * x4 * y2 - x1 * y2 * y4 - x2 * x4 * y1 + x2 * y1 * y4;
    f[9] = x1 * x4 * y3 - x1 * y3 * y4 - x3 * x4 * y1 + x3 * y1 * y4;
    f[10] = -x1 * x2 * x4 * y3
        + x1 * x2 * y3 * y4
        + x1 * x3 * y2 * y4
        + x1 * x4 * y2 * y3
        + x2 * x3 * y1 * y4
        + x2 * x4 * y1 * y3
        - x2 * y1 * y3 * y4
        + x3 * x4 * y1 * y2
        - x4 * y1 * y2 * y3
        - x1 * x5 * y4
        + x1 * x6 * y3
        - x1 * x7 * y2
        + x1 * y2 * y7
        - x1 * y3 * y6
        + x1 * y4 * y5
        + x2 * x7 * y1
        - x2 * y1 * y7
        - x3 * x6 * y1
        + x3 * y1 * y6
        + x4 * x5 * y1
        - x4 * y1 * y5
        + x8 * y4
        - x9 * y3
        + x10 * y2;
    f
}

/// The polynomial loop, optionally with a modified multiplication map (used
/// to show that the verifiers reject wrong maps).
#[derive(Debug, Clone)]
pub struct PolyLoop {
    map: LoopMap,
    inv: InvMap,
    standard: bool,
    name: String,
}

impl Default for PolyLoop {
    fn default() -> Self {
        PolyLoop::new()
    }
}

impl PolyLoop {
    pub fn new() -> PolyLoop {
        PolyLoop { map: LoopMap::standard(), inv: InvMap::standard(), standard: true, name: "L".into() }
    }

    /// A loop on `F_3^11` with another triangular correction map. Concrete
    /// arithmetic evaluates the polynomials; inversion keeps the standard
    /// inverse map for symbolic checks.
    pub fn with_map(map: LoopMap, name: impl Into<String>) -> PolyLoop {
        let standard = map == LoopMap::standard();
        PolyLoop { map, inv: InvMap::standard(), standard, name: name.into() }
    }

    /// The loop whose `f_11` has the sign of its first monomial flipped.
    pub fn mutant() -> PolyLoop {
        let map = LoopMap::standard().with_flipped_sign(10, 0).expect("f11 is nonempty");
        PolyLoop::with_map(map, "L (f11 sign-flipped)")
    }

    pub fn map(&self) -> &LoopMap {
        &self.map
    }

    pub fn inv_map(&self) -> &InvMap {
        &self.inv
    }

    pub fn symbolic(&self) -> SymbolicLoop<'_> {
        SymbolicLoop::new(&self.map, &self.inv)
    }

    fn corrections(&self, x: &[i64; DIM], y: &[i64; DIM]) -> [i64; DIM] {
        if self.standard {
            return standard_corrections(x, y);
        }
        std::array::from_fn(|k| {
            let c = self.map.correction(k).evaluate_with(|v| {
                let v = v as usize;
                Some(Coeff::new(if v < DIM { x[v] } else { y[v - DIM] }))
            });
            c.expect("corrections only use x and y variables").value() as i64
        })
    }

    pub fn mul(&self, x: &Vec11, y: &Vec11) -> Vec11 {
        let (a, b) = (x.as_i64(), y.as_i64());
        let f = self.corrections(&a, &b);
        Vec11::new(std::array::from_fn(|k| a[k] + b[k] + f[k]))
    }

    /// Solves `known ∘ u = w` (or `u ∘ known = w`) grade by grade.
    fn solve(&self, known: &Vec11, w: &Vec11, unknown_on_left: bool) -> Vec11 {
        let (kn, wv) = (known.as_i64(), w.as_i64());
        let mut u = [0i64; DIM];
        for g in 1..=4 {
            let f = if unknown_on_left { self.corrections(&u, &kn) } else { self.corrections(&kn, &u) };
            for k in (0..DIM).filter(|&k| grade(k) == g) {
                u[k] = (wv[k] - kn[k] - f[k]).rem_euclid(3);
            }
        }
        Vec11::new(u)
    }

    /// The unique `u` with `x ∘ u = w`.
    pub fn left_div(&self, x: &Vec11, w: &Vec11) -> Vec11 {
        self.solve(x, w, false)
    }

    /// The unique `u` with `u ∘ y = w`.
    pub fn right_div(&self, w: &Vec11, y: &Vec11) -> Vec11 {
        self.solve(y, w, true)
    }

    /// `x^{-1} = -x + h(x)` for the standard loop; division otherwise.
    pub fn inv(&self, x: &Vec11) -> Vec11 {
        if !self.standard {
            return self.left_div(x, &Vec11::ZERO);
        }
        let [_, x2, x3, x4, _, _, _, x8, x9, x10, _] = x.as_i64();
        let mut h = [0i64; DIM];
        h[4] = -x2 * x3;
        h[5] = -x2 * x4;
        h[6] = -x3 * x4;
        h[10] = x2 * x10 - x3 * x9 + x4 * x8;
        let a = x.as_i64();
        Vec11::new(std::array::from_fn(|k| h[k] - a[k]))
    }

    /// All points at which every constraint vanishes, in enumeration order.
    fn solutions(&self, constraints: &[Polynomial]) -> Vec<Vec11> {
        (0..ORDER).into_par_iter().map(Vec11::from_index).filter(|v| satisfies_all(constraints, v)).collect()
    }

    fn subspace_subloop(&self, label: &str, members: Vec<Vec11>) -> Subloop<Vec11> {
        let gens = match coordinate_support(&members) {
            Some(support) => support.into_iter().map(|k| Vec11::e(k + 1)).collect(),
            None => greedy_generators(self, &members),
        };
        Subloop::new(self, label, gens, members)
    }

    /// The coordinate subspace spanned by `e_i` for the given 1-based indices.
    pub fn span(&self, label: &str, basis: &[usize]) -> Subloop<Vec11> {
        let k = basis.len() as u32;
        let members = (0..3usize.pow(k))
            .map(|mut code| {
                let mut v = [0i64; DIM];
                for &i in basis {
                    v[i - 1] = (code % 3) as i64;
                    code /= 3;
                }
                Vec11::new(v)
            })
            .collect();
        let mut gens: Vec<Vec11> = basis.iter().map(|&i| Vec11::e(i)).collect();
        gens.sort_by_key(|g| std::cmp::Reverse(g.index()));
        Subloop::new(self, label, gens, members)
    }
}

impl FiniteLoop for PolyLoop {
    type Elem = Vec11;

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn order(&self) -> usize {
        ORDER
    }

    fn element(&self, index: usize) -> Vec11 {
        Vec11::from_index(index)
    }

    fn index_of(&self, x: &Vec11) -> usize {
        x.index()
    }

    fn identity(&self) -> Vec11 {
        Vec11::ZERO
    }

    fn mul(&self, x: &Vec11, y: &Vec11) -> Vec11 {
        PolyLoop::mul(self, x, y)
    }

    fn left_div(&self, x: &Vec11, w: &Vec11) -> Vec11 {
        PolyLoop::left_div(self, x, w)
    }

    fn right_div(&self, w: &Vec11, y: &Vec11) -> Vec11 {
        PolyLoop::right_div(self, w, y)
    }

    fn format_element(&self, x: &Vec11) -> String {
        x.to_string()
    }

    fn parse_element(&self, text: &str) -> Option<Vec11> {
        text.parse().ok()
    }

    fn probe_elements(&self) -> Vec<Vec11> {
        (1..=DIM).map(Vec11::e).collect()
    }

    fn structured_commutative_center(&self) -> Option<Result<Subloop<Vec11>, LoopError>> {
        Some(centralizer_constraints(&self.map).map_err(LoopError::from).map(|cs| {
            let members = self.solutions(&cs);
            self.subspace_subloop("C", members)
        }))
    }

    fn structured_nucleus(&self) -> Option<Result<Subloop<Vec11>, LoopError>> {
        Some(nucleus_constraints(&self.map).map_err(LoopError::from).map(|cs| {
            let members = self.solutions(&cs);
            self.subspace_subloop("Nuc", members)
        }))
    }

    fn structured_exponent(&self) -> Option<Result<u64, LoopError>> {
        let cube = Term::mul(Term::mul(Term::X, Term::X), Term::X);
        match verify_identity(&self.symbolic(), &cube, &Term::Identity) {
            Ok(IdentityVerdict::Pass) => Some(Ok(3)),
            Ok(IdentityVerdict::Fail { .. }) => None,
            Err(e) => Some(Err(e.into())),
        }
    }

    fn structured_normality(&self, n: &Subloop<Vec11>) -> Option<Result<NormalityVerdict<Vec11>, LoopError>> {
        Some(symbolic_normality(self, n))
    }
}

impl From<PolyLoopError> for LoopError {
    fn from(e: PolyLoopError) -> LoopError {
        match e {
            PolyLoopError::Poly(p) => LoopError::Poly(p),
            other => LoopError::NotALoop(other.to_string()),
        }
    }
}
