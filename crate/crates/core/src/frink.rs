//! Frink ideals on finite orthoposets.
//!
//! An ideal contains bottom and is closed under `J ↦ J^↑↓` for finite
//! `J ⊆ I`. On a finite poset the cone operators are monotone, so the single
//! test `I^↑↓ ⊆ I` covers every finite `J`.
//!
//! Note on the membership condition: the ideal must contain *bottom*.
//! Requiring top would force every ideal to be the whole poset, since
//! `{1}^↑↓ = P`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{OdpError, Result};
use crate::poset::{full_set, ElemSet, FinOrthoPoset};

/// Default node budget for [`enumerate_maximal_ideals`].
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Intersection of the up-sets of the members of `a`; all elements for ∅.
pub fn up_set(p: &FinOrthoPoset, a: &ElemSet) -> ElemSet {
    let mut s = full_set(p.size());
    for x in a.ones() {
        s.intersect_with(p.up(x));
    }
    s
}

pub fn down_set(p: &FinOrthoPoset, a: &ElemSet) -> ElemSet {
    let mut s = full_set(p.size());
    for x in a.ones() {
        s.intersect_with(p.down(x));
    }
    s
}

/// `A ∪ A^↑↓`.
pub fn closure_once(p: &FinOrthoPoset, a: &ElemSet) -> ElemSet {
    let mut s = down_set(p, &up_set(p, a));
    s.union_with(a);
    s
}

/// Smallest Frink ideal containing `a`.
pub fn generated_ideal<'p>(p: &'p FinOrthoPoset, a: &ElemSet) -> IdealSet<'p> {
    let mut cur = a.clone();
    cur.grow(p.size());
    cur.insert(p.bottom());
    for _ in 0..=p.size() {
        let next = closure_once(p, &cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    IdealSet::new(p, cur)
}

/// A subset of a poset's elements. Ideal predicates are evaluated on demand.
#[derive(Clone, PartialEq, Eq)]
pub struct IdealSet<'p> {
    poset: &'p FinOrthoPoset,
    members: ElemSet,
}

impl<'p> IdealSet<'p> {
    pub fn new(poset: &'p FinOrthoPoset, mut members: ElemSet) -> Self {
        members.grow(poset.size());
        IdealSet { poset, members }
    }

    pub fn from_indices(poset: &'p FinOrthoPoset, idx: &[usize]) -> Self {
        let mut s = poset.empty_set();
        for &i in idx {
            s.insert(i);
        }
        IdealSet { poset, members: s }
    }

    pub fn poset(&self) -> &'p FinOrthoPoset {
        self.poset
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn is_proper(&self) -> bool {
        !self.members.contains(self.poset.top())
    }

    pub fn is_frink_ideal(&self) -> bool {
        is_frink_ideal(self.poset, &self.members)
    }

    /// Bitstring over element indices, index 0 first.
    pub fn bitstring(&self) -> String {
        (0..self.poset.size())
            .map(|x| if self.contains(x) { '1' } else { '0' })
            .collect()
    }

    /// Lexicographic comparison of the sorted member lists.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.members.ones().cmp(other.members.ones())
    }
}

impl fmt::Debug for IdealSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.ones()).finish()
    }
}

pub fn is_frink_ideal(p: &FinOrthoPoset, i: &ElemSet) -> bool {
    i.contains(p.bottom()) && closure_once(p, i).is_subset(i)
}

/// First `x` (in index order) for which not exactly one of `x`, `x^⊥` lies
/// in `i`.
pub fn selectivity_witness(p: &FinOrthoPoset, i: &ElemSet) -> Option<usize> {
    (0..p.size()).find(|&x| i.contains(x) == i.contains(p.perp(x)))
}

pub fn is_selective(p: &FinOrthoPoset, i: &ElemSet) -> bool {
    selectivity_witness(p, i).is_none()
}

/// Maximality among proper Frink ideals. Errors when `i` is not a proper
/// Frink ideal.
pub fn is_maximal(p: &FinOrthoPoset, i: &ElemSet) -> Result<bool> {
    if !is_frink_ideal(p, i) {
        return Err(OdpError::Precondition("not a Frink ideal".into()));
    }
    if i.contains(p.top()) {
        return Err(OdpError::Precondition("ideal is improper".into()));
    }
    for a in (0..p.size()).filter(|&a| !i.contains(a)) {
        let mut ext = i.clone();
        ext.insert(a);
        if generated_ideal(p, &ext).is_proper() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greedy extension: scan elements in index order, keep `a` whenever the
/// ideal generated by `I ∪ {a}` stays proper, repeat until nothing changes.
pub fn extend_to_maximal<'p>(p: &'p FinOrthoPoset, i: &ElemSet) -> Result<IdealSet<'p>> {
    if !is_frink_ideal(p, i) {
        return Err(OdpError::Precondition("not a Frink ideal".into()));
    }
    if i.contains(p.top()) {
        return Err(OdpError::Precondition("ideal is improper".into()));
    }
    let mut cur = i.clone();
    loop {
        let mut changed = false;
        for a in 0..p.size() {
            if cur.contains(a) {
                continue;
            }
            let mut ext = cur.clone();
            ext.insert(a);
            let g = generated_ideal(p, &ext);
            if g.is_proper() {
                cur = g.members;
                changed = true;
            }
        }
        if !changed {
            return Ok(IdealSet::new(p, cur));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationStats {
    pub nodes: u64,
    /// Proper Frink ideals reached as leaves.
    pub proper_ideals: u64,
}

/// Every maximal proper Frink ideal, sorted canonically.
///
/// Include/exclude search over elements in index order. Including `e`
/// replaces the current ideal by the one generated with `e`, and the branch
/// is cut when that ideal is improper or hits an excluded element. Each
/// proper ideal is reached by exactly one path. Exceeding `node_budget`
/// returns [`OdpError::BudgetExceeded`].
pub fn enumerate_maximal_ideals(p: &FinOrthoPoset, node_budget: u64) -> Result<Vec<IdealSet<'_>>> {
    enumerate_maximal_ideals_with_stats(p, node_budget).map(|(v, _)| v)
}

pub fn enumerate_maximal_ideals_with_stats(
    p: &FinOrthoPoset,
    node_budget: u64,
) -> Result<(Vec<IdealSet<'_>>, EnumerationStats)> {
    let mut search = Search {
        p,
        budget: node_budget,
        stats: EnumerationStats {
            nodes: 0,
            proper_ideals: 0,
        },
        found: Vec::new(),
    };
    let start = generated_ideal(p, &p.empty_set()).members;
    let start_up = up_set(p, &start);
    if start.contains(p.top()) {
        // One-element poset: no proper ideals at all.
        return Ok((Vec::new(), search.stats));
    }
    search.descend(start, start_up, p.empty_set(), 0)?;
    let mut out: Vec<IdealSet<'_>> = search
        .found
        .into_iter()
        .map(|m| IdealSet::new(p, m))
        .collect();
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok((out, search.stats))
}

struct Search<'p> {
    p: &'p FinOrthoPoset,
    budget: u64,
    stats: EnumerationStats,
    found: Vec<ElemSet>,
}

impl Search<'_> {
    // `upper` is always `ideal^↑`, so the ideal generated by `ideal ∪ {e}`
    // is `(upper ∩ up(e))^↓`, and it is improper exactly when that
    // intersection is {top}.
    fn descend(&mut self, ideal: ElemSet, upper: ElemSet, excluded: ElemSet, from: usize) -> Result<()> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget {
            return Err(OdpError::BudgetExceeded {
                budget: self.budget,
            });
        }
        let p = self.p;
        let next = (from..p.size()).find(|&e| !ideal.contains(e) && !excluded.contains(e));
        let Some(e) = next else {
            self.stats.proper_ideals += 1;
            if self.leaf_is_maximal(&ideal, &upper) {
                self.found.push(ideal);
            }
            return Ok(());
        };

        let mut up_with = upper.clone();
        up_with.intersect_with(p.up(e));
        if !self.only_top(&up_with) {
            let grown = down_set(p, &up_with);
            if grown.is_disjoint(&excluded) {
                self.descend(grown, up_with, excluded.clone(), e + 1)?;
            }
        }

        let mut excl = excluded;
        excl.insert(e);
        self.descend(ideal, upper, excl, e + 1)
    }

    fn only_top(&self, s: &ElemSet) -> bool {
        s.count_ones(..) == 1 && s.contains(self.p.top())
    }

    fn leaf_is_maximal(&self, ideal: &ElemSet, upper: &ElemSet) -> bool {
        (0..self.p.size())
            .filter(|&a| !ideal.contains(a))
            .all(|a| {
                let mut u = upper.clone();
                u.intersect_with(self.p.up(a));
                self.only_top(&u)
            })
    }
}

/// Whether `a, b ∈ I ⇒ a Δ b ∈ I`; returns the first failing pair.
pub fn delta_closure_witness(
    d: &crate::odp::DeltaTable,
    i: &ElemSet,
) -> Option<(usize, usize)> {
    i.ones()
        .flat_map(|a| i.ones().map(move |b| (a, b)))
        .find(|&(a, b)| !i.contains(d.get(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{even_sets_odp, powerset_odp};

    fn set(p: &FinOrthoPoset, idx: &[usize]) -> ElemSet {
        IdealSet::from_indices(p, idx).members().clone()
    }

    fn ones(s: &ElemSet) -> Vec<usize> {
        s.ones().collect()
    }

    // Masks in the even-set family over 4 points, in canonical order:
    // 0:∅ 1:{1,2} 2:{1,3} 3:{2,3} 4:{1,4} 5:{2,4} 6:{3,4} 7:Ω
    #[test]
    fn cones_on_small_examples() {
        let b = powerset_odp(2).unwrap().poset;
        assert_eq!(ones(&up_set(&b, &set(&b, &[1]))), vec![1, 3]);
        assert_eq!(ones(&up_set(&b, &b.empty_set())), vec![0, 1, 2, 3]);
        let e = even_sets_odp(4).unwrap().poset;
        assert_eq!(ones(&up_set(&e, &set(&e, &[1, 2]))), vec![7]);
        assert_eq!(ones(&down_set(&e, &up_set(&e, &set(&e, &[3])))), vec![0, 3]);
    }

    #[test]
    fn closure_once_examples() {
        let b3 = powerset_odp(3).unwrap().poset;
        // {1},{2} are masks 1 and 2; their closure is the down-set of mask 3.
        assert_eq!(ones(&closure_once(&b3, &set(&b3, &[1, 2]))), vec![0, 1, 2, 3]);
        let e = even_sets_odp(4).unwrap().poset;
        assert_eq!(closure_once(&e, &set(&e, &[1, 2])).count_ones(..), 8);
        assert_eq!(ones(&closure_once(&e, &set(&e, &[0]))), vec![0]);
    }

    #[test]
    fn generated_ideal_examples() {
        let e = even_sets_odp(4).unwrap().poset;
        assert_eq!(generated_ideal(&e, &set(&e, &[1])).indices(), vec![0, 1]);
        // {1,2} and {3,4}
        let whole = generated_ideal(&e, &set(&e, &[1, 6]));
        assert_eq!(whole.len(), 8);
        assert!(!whole.is_proper());
        let b3 = powerset_odp(3).unwrap().poset;
        assert_eq!(generated_ideal(&b3, &set(&b3, &[5])).indices(), vec![0, 1, 4, 5]);
    }

    #[test]
    fn ideal_predicates() {
        let e = even_sets_odp(4).unwrap().poset;
        let i = set(&e, &[0, 1]);
        assert!(is_frink_ideal(&e, &i));
        assert!(IdealSet::new(&e, i.clone()).is_proper());
        assert!(!is_frink_ideal(&e, &set(&e, &[0, 1, 2])));
        assert!(is_frink_ideal(&e, &e.full_set()));
        assert!(!IdealSet::new(&e, e.full_set()).is_proper());
        assert!(!is_frink_ideal(&e, &set(&e, &[1])));

        assert!(!is_selective(&e, &i));
        assert_eq!(selectivity_witness(&e, &i), Some(2));
        assert!(!is_selective(&e, &e.full_set()));
        let b = powerset_odp(2).unwrap().poset;
        assert!(is_selective(&b, &set(&b, &[0, 1])));
    }

    #[test]
    fn maximality() {
        let e = even_sets_odp(4).unwrap().poset;
        assert_eq!(is_maximal(&e, &set(&e, &[0, 1])), Ok(true));
        let b = powerset_odp(2).unwrap().poset;
        assert_eq!(is_maximal(&b, &set(&b, &[0, 1])), Ok(true));
        assert_eq!(is_maximal(&b, &set(&b, &[0])), Ok(false));
        assert!(is_maximal(&b, &b.full_set()).is_err());
        assert!(is_maximal(&b, &set(&b, &[1])).is_err());
    }

    #[test]
    fn greedy_extension() {
        let b = powerset_odp(2).unwrap().poset;
        assert_eq!(extend_to_maximal(&b, &set(&b, &[0])).unwrap().indices(), vec![0, 1]);
        assert_eq!(extend_to_maximal(&b, &set(&b, &[0, 2])).unwrap().indices(), vec![0, 2]);
        let e = even_sets_odp(4).unwrap().poset;
        assert_eq!(extend_to_maximal(&e, &set(&e, &[0, 1])).unwrap().indices(), vec![0, 1]);
        assert!(extend_to_maximal(&e, &e.full_set()).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let b = powerset_odp(2).unwrap().poset;
        let ideals = enumerate_maximal_ideals(&b, DEFAULT_NODE_BUDGET).unwrap();
        let got: Vec<_> = ideals.iter().map(|i| i.indices()).collect();
        assert_eq!(got, vec![vec![0, 1], vec![0, 2]]);

        let e = even_sets_odp(4).unwrap().poset;
        let ideals = enumerate_maximal_ideals(&e, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(ideals.len(), 6);
        for (k, i) in ideals.iter().enumerate() {
            assert_eq!(i.indices(), vec![0, k + 1]);
            assert!(!is_selective(&e, i.members()));
        }

        for n in 1..=4 {
            let p = powerset_odp(n).unwrap().poset;
            let ideals = enumerate_maximal_ideals(&p, DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(ideals.len(), n);
            assert!(ideals.iter().all(|i| is_selective(&p, i.members())));
        }
    }

    #[test]
    fn budget_is_a_hard_error() {
        let p = powerset_odp(4).unwrap().poset;
        assert_eq!(
            enumerate_maximal_ideals(&p, 5).unwrap_err(),
            OdpError::BudgetExceeded { budget: 5 }
        );
    }

    #[test]
    fn one_element_poset_has_no_proper_ideals() {
        let p = FinOrthoPoset::from_fn(1, |_, _| true, vec![0]).unwrap();
        assert!(enumerate_maximal_ideals(&p, 10).unwrap().is_empty());
    }
}
