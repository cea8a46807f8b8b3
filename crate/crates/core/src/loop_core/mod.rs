//! Generic finite-loop algorithms.
//!
//! Everything here runs against the [`FiniteLoop`] contract: an enumerable
//! set with a multiplication, both divisions and an identity. Exhaustive scans
//! are guarded by explicit size limits; loops with exploitable structure (the
//! polynomial loop) plug in their own strategies through the `structured_*`
//! hooks.

mod algorithms;
mod normality;
mod small;
mod table;

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

use crate::gf3::PolyError;

pub use algorithms::*;
pub use normality::*;
pub use small::{nonassociative_five, ElementaryAbelian};
pub use table::{TableLoop, MAX_TABLE_ORDER};

/// Exhaustive pairwise scans (commutative center, commutativity) are allowed
/// up to this order.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 10_000;

/// Exhaustive element scans (exponent) are allowed up to this order.
pub const EXHAUSTIVE_ELEMENT_LIMIT: usize = 10_000;

/// Exhaustive triple scans (associativity, Moufang) are allowed up to this
/// many triples.
pub const EXHAUSTIVE_TRIPLE_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("{what}: order {order} exceeds the exhaustive limit {limit}")]
    SizeGuard { what: &'static str, order: usize, limit: usize },
    #[error("no strategy available: {0}")]
    StrategyUnavailable(String),
    #[error("subloop is not normal: {0}")]
    NotNormal(String),
    #[error("not a loop: {0}")]
    NotALoop(String),
    #[error("loop of order {order} is too large for a table (limit {limit})")]
    TooLarge { order: usize, limit: usize },
    #[error("cannot parse element `{0}`")]
    ParseElement(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A finite loop with a deterministic enumeration of its elements.
///
/// `element(i)` and `index_of` must be mutually inverse bijections between
/// `0..order()` and the elements.
pub trait FiniteLoop: Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn describe(&self) -> String;
    fn order(&self) -> usize;
    fn element(&self, index: usize) -> Self::Elem;
    fn index_of(&self, x: &Self::Elem) -> usize;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// The unique `u` with `x * u = w`.
    fn left_div(&self, x: &Self::Elem, w: &Self::Elem) -> Self::Elem;
    /// The unique `u` with `u * y = w`.
    fn right_div(&self, w: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn format_element(&self, x: &Self::Elem) -> String;
    fn parse_element(&self, text: &str) -> Option<Self::Elem>;

    /// Small elements tried first by deterministic searches: a generating set
    /// or basis where the loop has one.
    fn probe_elements(&self) -> Vec<Self::Elem> {
        (0..self.order().min(27)).map(|i| self.element(i)).collect()
    }

    fn elements(&self) -> impl Iterator<Item = Self::Elem> + '_
    where
        Self: Sized,
    {
        (0..self.order()).map(move |i| self.element(i))
    }

    fn is_identity(&self, x: &Self::Elem) -> bool {
        *x == self.identity()
    }

    fn structured_commutative_center(&self) -> Option<Result<Subloop<Self::Elem>, LoopError>> {
        None
    }

    fn structured_nucleus(&self) -> Option<Result<Subloop<Self::Elem>, LoopError>> {
        None
    }

    fn structured_exponent(&self) -> Option<Result<u64, LoopError>> {
        None
    }

    /// A complete normality decision (with certificate on failure).
    fn structured_normality(
        &self,
        _n: &Subloop<Self::Elem>,
    ) -> Option<Result<NormalityVerdict<Self::Elem>, LoopError>> {
        None
    }
}

/// A subloop given by its members (in enumeration order) and a generating set.
#[derive(Debug, Clone)]
pub struct Subloop<E> {
    label: String,
    generators: Vec<E>,
    members: Vec<E>,
    set: HashSet<E>,
}

impl<E: Clone + Eq + Hash + Debug> Subloop<E> {
    /// Builds a subloop record; `members` is sorted into enumeration order.
    pub fn new<L>(l: &L, label: impl Into<String>, generators: Vec<E>, members: Vec<E>) -> Subloop<E>
    where
        L: FiniteLoop<Elem = E>,
    {
        let mut members = members;
        members.sort_by_cached_key(|x| l.index_of(x));
        members.dedup();
        let set = members.iter().cloned().collect();
        Subloop { label: label.into(), generators, members, set }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Subloop<E> {
        self.label = label.into();
        self
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn members(&self) -> &[E] {
        &self.members
    }

    pub fn contains(&self, x: &E) -> bool {
        self.set.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn same_members(&self, other: &Subloop<E>) -> bool {
        self.set == other.set
    }
}
