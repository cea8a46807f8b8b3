use std::collections::{HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{FiniteLoop, LoopError, Subloop, EXHAUSTIVE_ELEMENT_LIMIT, EXHAUSTIVE_PAIR_LIMIT, EXHAUSTIVE_TRIPLE_LIMIT};

/// Upper bound on associativity checks spent by the exhaustive nucleus scan.
pub const NUCLEUS_CHECK_BUDGET: u64 = 6_000_000_000;

/// The unique `s` with `xy = (yx)s`.
pub fn commutator<L: FiniteLoop>(l: &L, x: &L::Elem, y: &L::Elem) -> L::Elem {
    l.left_div(&l.mul(y, x), &l.mul(x, y))
}

/// The unique `t` with `(xy)z = (x(yz))t`.
pub fn associator<L: FiniteLoop>(l: &L, x: &L::Elem, y: &L::Elem, z: &L::Elem) -> L::Elem {
    l.left_div(&l.mul(x, &l.mul(y, z)), &l.mul(&l.mul(x, y), z))
}

/// Two-sided inverse via right division of the identity.
pub fn inverse<L: FiniteLoop>(l: &L, x: &L::Elem) -> L::Elem {
    l.left_div(x, &l.identity())
}

/// Left-normed power `((x x) x) ... x`.
pub fn power<L: FiniteLoop>(l: &L, x: &L::Elem, n: u64) -> L::Elem {
    let mut acc = l.identity();
    for _ in 0..n {
        acc = l.mul(&acc, x);
    }
    acc
}

pub fn element_order<L: FiniteLoop>(l: &L, x: &L::Elem) -> u64 {
    let mut acc = x.clone();
    let mut n = 1;
    while !l.is_identity(&acc) {
        acc = l.mul(&acc, x);
        n += 1;
        assert!(n as usize <= l.order(), "left-normed powers of an element never reach the identity");
    }
    n
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least common multiple of all element orders.
pub fn loop_exponent<L: FiniteLoop>(l: &L) -> Result<u64, LoopError> {
    if let Some(r) = l.structured_exponent() {
        return r;
    }
    if l.order() > EXHAUSTIVE_ELEMENT_LIMIT {
        return Err(LoopError::SizeGuard { what: "exponent", order: l.order(), limit: EXHAUSTIVE_ELEMENT_LIMIT });
    }
    Ok((0..l.order()).into_par_iter().map(|i| element_order(l, &l.element(i))).reduce(|| 1, |a, b| a / gcd(a, b) * b))
}

/// Least multiplication-closed subset containing `generators` (and the identity).
pub fn subloop_closure<L: FiniteLoop>(l: &L, generators: &[L::Elem]) -> Subloop<L::Elem> {
    let mut members = vec![l.identity()];
    let mut seen: HashSet<L::Elem> = members.iter().cloned().collect();
    let mut queue: VecDeque<L::Elem> = VecDeque::new();
    for g in generators {
        if seen.insert(g.clone()) {
            members.push(g.clone());
            queue.push_back(g.clone());
        }
    }
    while let Some(a) = queue.pop_front() {
        let snapshot = members.len();
        for i in 0..snapshot {
            let b = members[i].clone();
            for p in [l.mul(&a, &b), l.mul(&b, &a)] {
                if seen.insert(p.clone()) {
                    members.push(p.clone());
                    queue.push_back(p);
                }
            }
        }
    }
    Subloop::new(l, format!("<{}>", format_list(l, generators)), generators.to_vec(), members)
}

pub fn format_list<L: FiniteLoop>(l: &L, xs: &[L::Elem]) -> String {
    xs.iter().map(|x| l.format_element(x)).collect::<Vec<_>>().join(", ")
}

/// Picks a generating set from `members` greedily in enumeration order.
pub fn greedy_generators<L: FiniteLoop>(l: &L, members: &[L::Elem]) -> Vec<L::Elem> {
    let mut gens = Vec::new();
    let mut closure: HashSet<L::Elem> = [l.identity()].into_iter().collect();
    let target = members.len();
    for m in members {
        if closure.len() >= target {
            break;
        }
        if closure.contains(m) {
            continue;
        }
        gens.push(m.clone());
        closure = subloop_closure(l, &gens).members().iter().cloned().collect();
    }
    gens
}

fn exhaustive_subloop<L: FiniteLoop>(l: &L, label: &str, members: Vec<L::Elem>) -> Subloop<L::Elem> {
    let gens = greedy_generators(l, &members);
    Subloop::new(l, label, gens, members)
}

/// All elements commuting with every element.
pub fn commutative_center<L: FiniteLoop>(l: &L) -> Result<Subloop<L::Elem>, LoopError> {
    if l.order() <= EXHAUSTIVE_PAIR_LIMIT {
        let members: Vec<L::Elem> = (0..l.order())
            .into_par_iter()
            .map(|i| l.element(i))
            .filter(|c| l.elements().all(|x| l.mul(c, &x) == l.mul(&x, c)))
            .collect();
        return Ok(exhaustive_subloop(l, "C", members));
    }
    match l.structured_commutative_center() {
        Some(r) => r,
        None => {
            Err(LoopError::SizeGuard { what: "commutative center", order: l.order(), limit: EXHAUSTIVE_PAIR_LIMIT })
        }
    }
}

/// Elements `a` with `(ax)y = a(xy)` for all `x, y`. The exhaustive path
/// checks the left slot only and then confirms the middle and right slots on
/// a sample.
pub fn nucleus<L: FiniteLoop>(l: &L) -> Result<Subloop<L::Elem>, LoopError> {
    if let Some(r) = l.structured_nucleus() {
        return r;
    }
    let n = l.order();
    if n > EXHAUSTIVE_PAIR_LIMIT {
        return Err(LoopError::SizeGuard { what: "nucleus", order: n, limit: EXHAUSTIVE_PAIR_LIMIT });
    }
    let elems: Vec<L::Elem> = l.elements().collect();
    let spent = AtomicU64::new(0);
    // None once the shared budget is exhausted.
    let left_nuclear = |a: &L::Elem| -> Option<bool> {
        for x in &elems {
            if spent.fetch_add(n as u64, Ordering::Relaxed) > NUCLEUS_CHECK_BUDGET {
                return None;
            }
            let ax = l.mul(a, x);
            if elems.iter().any(|y| l.mul(&ax, y) != l.mul(a, &l.mul(x, y))) {
                return Some(false);
            }
        }
        Some(true)
    };
    let results: Option<Vec<bool>> = elems.par_iter().map(left_nuclear).collect();
    let results = results.ok_or(LoopError::SizeGuard {
        what: "nucleus (check budget)",
        order: n,
        limit: EXHAUSTIVE_PAIR_LIMIT,
    })?;
    let members: Vec<L::Elem> = elems.iter().zip(&results).filter(|(_, &r)| r).map(|(a, _)| a.clone()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x6e75_636c);
    for a in &members {
        for _ in 0..200 {
            let x = l.element(rng.gen_range(0..n));
            let y = l.element(rng.gen_range(0..n));
            let middle = l.mul(&l.mul(&x, a), &y) == l.mul(&x, &l.mul(a, &y));
            let right = l.mul(&l.mul(&x, &y), a) == l.mul(&x, &l.mul(&y, a));
            if !(middle && right) {
                return Err(LoopError::StrategyUnavailable(format!(
                    "left nucleus element {} is not middle/right nuclear",
                    l.format_element(a)
                )));
            }
        }
    }
    Ok(exhaustive_subloop(l, "Nuc", members))
}

/// `Nuc(L) ∩ C(L)`.
pub fn center<L: FiniteLoop>(l: &L) -> Result<Subloop<L::Elem>, LoopError> {
    let c = commutative_center(l)?;
    let nuc = nucleus(l)?;
    let members: Vec<L::Elem> = nuc.members().iter().filter(|x| c.contains(x)).cloned().collect();
    let gens = greedy_generators(l, &members);
    Ok(Subloop::new(l, "Z", gens, members))
}

/// Exhaustive commutativity test; returns a non-commuting pair if one exists.
pub fn commutativity_witness<L: FiniteLoop>(l: &L) -> Result<Option<(L::Elem, L::Elem)>, LoopError> {
    if l.order() > EXHAUSTIVE_PAIR_LIMIT {
        return Err(LoopError::SizeGuard { what: "commutativity", order: l.order(), limit: EXHAUSTIVE_PAIR_LIMIT });
    }
    for i in 0..l.order() {
        let x = l.element(i);
        for j in (i + 1)..l.order() {
            let y = l.element(j);
            if l.mul(&x, &y) != l.mul(&y, &x) {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

fn triple_guard<L: FiniteLoop>(l: &L, what: &'static str) -> Result<(), LoopError> {
    let n = l.order() as u64;
    if n.saturating_mul(n).saturating_mul(n) > EXHAUSTIVE_TRIPLE_LIMIT {
        return Err(LoopError::SizeGuard { what, order: l.order(), limit: 368 });
    }
    Ok(())
}

/// First triple (in enumeration order) with `(xy)z != x(yz)`.
pub fn associativity_witness<L: FiniteLoop>(l: &L) -> Result<Option<(L::Elem, L::Elem, L::Elem)>, LoopError> {
    triple_guard(l, "associativity")?;
    let n = l.order();
    let found = (0..n).into_par_iter().find_first(|&i| {
        let x = l.element(i);
        l.elements().any(|y| {
            let xy = l.mul(&x, &y);
            l.elements().any(|z| l.mul(&xy, &z) != l.mul(&x, &l.mul(&y, &z)))
        })
    });
    Ok(found.map(|i| {
        let x = l.element(i);
        for y in l.elements() {
            for z in l.elements() {
                if l.mul(&l.mul(&x, &y), &z) != l.mul(&x, &l.mul(&y, &z)) {
                    return (x, y, z);
                }
            }
        }
        unreachable!("witness row without witness")
    }))
}

/// Outcome of a sampled or exhaustive identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckVerdict {
    pub identity: String,
    pub method: String,
    pub checked: u64,
    pub passed: bool,
    /// Text rendering of the first failing tuple.
    pub counterexample: Option<Vec<String>>,
}

impl CheckVerdict {
    fn new(identity: &str, method: String, checked: u64, counterexample: Option<Vec<String>>) -> CheckVerdict {
        CheckVerdict {
            identity: identity.to_string(),
            method,
            checked,
            passed: counterexample.is_none(),
            counterexample,
        }
    }
}

pub const MOUFANG_IDENTITY: &str = "(xy)(zx) = (x(yz))x";

fn moufang_holds<L: FiniteLoop>(l: &L, x: &L::Elem, y: &L::Elem, z: &L::Elem) -> bool {
    let lhs = l.mul(&l.mul(x, y), &l.mul(z, x));
    let rhs = l.mul(&l.mul(x, &l.mul(y, z)), x);
    lhs == rhs
}

fn sample<L: FiniteLoop>(l: &L, rng: &mut ChaCha8Rng) -> L::Elem {
    l.element(rng.gen_range(0..l.order()))
}

pub fn check_moufang_sampled<L: FiniteLoop>(l: &L, trials: u64, seed: u64) -> CheckVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let (x, y, z) = (sample(l, &mut rng), sample(l, &mut rng), sample(l, &mut rng));
        if !moufang_holds(l, &x, &y, &z) {
            let cx = vec![l.format_element(&x), l.format_element(&y), l.format_element(&z)];
            return CheckVerdict::new(MOUFANG_IDENTITY, format!("sampled (seed {seed})"), trials, Some(cx));
        }
    }
    CheckVerdict::new(MOUFANG_IDENTITY, format!("sampled (seed {seed})"), trials, None)
}

pub fn check_moufang_exhaustive<L: FiniteLoop>(l: &L) -> Result<CheckVerdict, LoopError> {
    triple_guard(l, "Moufang")?;
    let n = l.order();
    let bad = (0..n).into_par_iter().find_first(|&i| {
        let x = l.element(i);
        l.elements().any(|y| l.elements().any(|z| !moufang_holds(l, &x, &y, &z)))
    });
    let cx = bad.map(|i| {
        let x = l.element(i);
        for y in l.elements() {
            for z in l.elements() {
                if !moufang_holds(l, &x, &y, &z) {
                    return vec![l.format_element(&x), l.format_element(&y), l.format_element(&z)];
                }
            }
        }
        unreachable!()
    });
    Ok(CheckVerdict::new(MOUFANG_IDENTITY, "exhaustive".into(), (n as u64).pow(3), cx))
}

/// `(xx)y = x(xy)`, `(xy)y = x(yy)` and `(xy)x = x(yx)` on random pairs.
pub fn check_diassociativity_sampled<L: FiniteLoop>(l: &L, trials: u64, seed: u64) -> CheckVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = "(xx)y = x(xy), (xy)y = x(yy), (xy)x = x(yx)";
    for _ in 0..trials {
        let (x, y) = (sample(l, &mut rng), sample(l, &mut rng));
        let xy = l.mul(&x, &y);
        let ok = l.mul(&l.mul(&x, &x), &y) == l.mul(&x, &xy)
            && l.mul(&xy, &y) == l.mul(&x, &l.mul(&y, &y))
            && l.mul(&xy, &x) == l.mul(&x, &l.mul(&y, &x));
        if !ok {
            let cx = vec![l.format_element(&x), l.format_element(&y)];
            return CheckVerdict::new(id, format!("sampled (seed {seed})"), trials, Some(cx));
        }
    }
    CheckVerdict::new(id, format!("sampled (seed {seed})"), trials, None)
}

/// Identity element and both divisions round-trip on random pairs.
pub fn check_loop_axioms_sampled<L: FiniteLoop>(l: &L, trials: u64, seed: u64) -> CheckVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = l.identity();
    let id = "ex = xe = x, x(x\\w) = w, (w/y)y = w";
    for _ in 0..trials {
        let (x, w) = (sample(l, &mut rng), sample(l, &mut rng));
        let ok = l.mul(&e, &x) == x
            && l.mul(&x, &e) == x
            && l.mul(&x, &l.left_div(&x, &w)) == w
            && l.mul(&l.right_div(&w, &x), &x) == w;
        if !ok {
            let cx = vec![l.format_element(&x), l.format_element(&w)];
            return CheckVerdict::new(id, format!("sampled (seed {seed})"), trials, Some(cx));
        }
    }
    CheckVerdict::new(id, format!("sampled (seed {seed})"), trials, None)
}

/// Every element cubes (left-normed) to the identity.
pub fn check_exponent_three_exhaustive<L: FiniteLoop>(l: &L) -> Result<CheckVerdict, LoopError> {
    if l.order() > EXHAUSTIVE_ELEMENT_LIMIT * 100 {
        return Err(LoopError::SizeGuard {
            what: "exponent-3 scan",
            order: l.order(),
            limit: EXHAUSTIVE_ELEMENT_LIMIT * 100,
        });
    }
    let bad = (0..l.order()).into_par_iter().find_first(|&i| {
        let x = l.element(i);
        !l.is_identity(&power(l, &x, 3))
    });
    Ok(CheckVerdict::new(
        "x^3 = 1",
        "exhaustive".into(),
        l.order() as u64,
        bad.map(|i| vec![l.format_element(&l.element(i))]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loop_core::{nonassociative_five, ElementaryAbelian, TableLoop};

    fn cyclic(n: usize) -> TableLoop {
        let table: Vec<u32> = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        TableLoop::from_table(format!("C{n}"), n, table, labels).unwrap()
    }

    #[test]
    fn commutator_and_associator_trivial_cases() {
        let l = nonassociative_five();
        for x in l.elements() {
            assert!(l.is_identity(&commutator(&l, &x, &x)));
            for y in l.elements() {
                assert!(l.is_identity(&associator(&l, &l.identity(), &x, &y)));
                let s = commutator(&l, &x, &y);
                assert_eq!(l.mul(&l.mul(&y, &x), &s), l.mul(&x, &y));
                for z in l.elements() {
                    let t = associator(&l, &x, &y, &z);
                    assert_eq!(l.mul(&l.mul(&x, &l.mul(&y, &z)), &t), l.mul(&l.mul(&x, &y), &z));
                }
            }
        }
    }

    #[test]
    fn orders_and_exponent() {
        let c9 = cyclic(9);
        assert_eq!(element_order(&c9, &c9.identity()), 1);
        assert_eq!(element_order(&c9, &3), 3);
        assert_eq!(loop_exponent(&c9).unwrap(), 9);
        let a = ElementaryAbelian::new(3);
        assert_eq!(loop_exponent(&a).unwrap(), 3);
    }

    #[test]
    fn closure_examples() {
        let a = ElementaryAbelian::new(3);
        assert_eq!(subloop_closure(&a, &[a.identity()]).len(), 1);
        assert_eq!(subloop_closure(&a, &[1]).len(), 3);
        assert_eq!(subloop_closure(&a, &[1, 3]).len(), 9);
    }

    #[test]
    fn abelian_group_invariants() {
        let a = ElementaryAbelian::new(2);
        assert_eq!(commutative_center(&a).unwrap().len(), 9);
        assert_eq!(nucleus(&a).unwrap().len(), 9);
        assert_eq!(center(&a).unwrap().len(), 9);
        assert!(commutativity_witness(&a).unwrap().is_none());
        assert!(associativity_witness(&a).unwrap().is_none());
    }

    #[test]
    fn corrupted_table_fails_moufang() {
        let l = nonassociative_five();
        assert!(!check_moufang_exhaustive(&l).unwrap().passed);
        assert!(!check_moufang_sampled(&l, 10_000, 1).passed);
        assert!(associativity_witness(&l).unwrap().is_some());
        assert!(check_loop_axioms_sampled(&l, 1000, 3).passed);
    }

    #[test]
    fn groups_pass_moufang() {
        let c9 = cyclic(9);
        assert!(check_moufang_exhaustive(&c9).unwrap().passed);
        assert!(check_moufang_sampled(&c9, 1000, 7).passed);
        assert!(check_diassociativity_sampled(&c9, 1000, 7).passed);
    }

    #[test]
    fn closure_equals_division_closure_on_small_loops() {
        // Brute force: least subset closed under mul, left_div and right_div.
        let l = nonassociative_five();
        let a = ElementaryAbelian::new(3);
        fn brute<L: FiniteLoop>(l: &L, gens: &[L::Elem]) -> HashSet<L::Elem> {
            let mut set: HashSet<L::Elem> = gens.iter().cloned().collect();
            set.insert(l.identity());
            loop {
                let cur: Vec<L::Elem> = set.iter().cloned().collect();
                let before = set.len();
                for x in &cur {
                    for y in &cur {
                        set.insert(l.mul(x, y));
                        set.insert(l.left_div(x, y));
                        set.insert(l.right_div(x, y));
                    }
                }
                if set.len() == before {
                    return set;
                }
            }
        }
        for g in l.elements() {
            let c = subloop_closure(&l, &[g]);
            assert_eq!(c.members().iter().cloned().collect::<HashSet<_>>(), brute(&l, &[g]));
        }
        for g in a.elements() {
            for h in a.elements() {
                let c = subloop_closure(&a, &[g, h]);
                assert_eq!(c.members().iter().cloned().collect::<HashSet<_>>(), brute(&a, &[g, h]));
            }
        }
    }
}
