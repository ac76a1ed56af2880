//! Finite orthocomplemented posets.
//!
//! The order is stored twice as packed bit rows: `up[x]` is the set of
//! elements above `x` and `down[x]` the set of elements below it. Every
//! bound computation is an intersection of rows.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::{OdpError, Result};
use crate::report::{Axiom, CheckOptions, ViolationReport, WitnessSink};

/// A set of element indices.
pub type ElemSet = FixedBitSet;

pub(crate) fn full_set(m: usize) -> ElemSet {
    let mut s = ElemSet::with_capacity(m);
    s.insert_range(..);
    s
}

pub(crate) fn singleton(m: usize, x: usize) -> ElemSet {
    let mut s = ElemSet::with_capacity(m);
    s.insert(x);
    s
}

/// Refuse sizes above `cap`.
pub fn check_size(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(OdpError::TooLarge { size, cap })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinOrthoPoset {
    size: usize,
    up: Vec<ElemSet>,
    down: Vec<ElemSet>,
    down_count: Vec<usize>,
    up_count: Vec<usize>,
    perp: Vec<usize>,
    bottom: usize,
    top: usize,
    labels: Option<Vec<String>>,
}

impl FinOrthoPoset {
    /// Builds a poset from a boolean order matrix (`leq[x][y]` means x ≤ y)
    /// and a complement permutation. Bottom and top are inferred as the
    /// first least and greatest elements; when none exists index 0 (resp.
    /// the last index) is used and `verify_orthoposet` reports the failure.
    pub fn from_matrix(leq: &[Vec<bool>], perp: Vec<usize>) -> Result<Self> {
        let m = leq.len();
        let (up, down) = Self::rows_from_matrix(leq)?;
        let bottom = (0..m).find(|&x| up[x].count_ones(..) == m).unwrap_or(0);
        let top = (0..m)
            .find(|&x| down[x].count_ones(..) == m)
            .unwrap_or(m.saturating_sub(1));
        Self::assemble(up, down, perp, bottom, top)
    }

    /// Like [`FinOrthoPoset::from_matrix`] with explicit bounds.
    pub fn with_bounds(
        leq: &[Vec<bool>],
        perp: Vec<usize>,
        bottom: usize,
        top: usize,
    ) -> Result<Self> {
        let (up, down) = Self::rows_from_matrix(leq)?;
        let m = up.len();
        for idx in [bottom, top] {
            if idx >= m {
                return Err(OdpError::IndexOutOfRange {
                    index: idx,
                    size: m,
                });
            }
        }
        Self::assemble(up, down, perp, bottom, top)
    }

    /// Builds from a predicate `leq(x, y)` over `0..m`.
    pub fn from_fn(m: usize, leq: impl Fn(usize, usize) -> bool, perp: Vec<usize>) -> Result<Self> {
        let matrix: Vec<Vec<bool>> = (0..m)
            .map(|x| (0..m).map(|y| leq(x, y)).collect())
            .collect();
        Self::from_matrix(&matrix, perp)
    }

    fn rows_from_matrix(leq: &[Vec<bool>]) -> Result<(Vec<ElemSet>, Vec<ElemSet>)> {
        let m = leq.len();
        if m == 0 {
            return Err(OdpError::structure("a poset needs at least one element"));
        }
        let mut up = vec![ElemSet::with_capacity(m); m];
        let mut down = vec![ElemSet::with_capacity(m); m];
        for (x, row) in leq.iter().enumerate() {
            if row.len() != m {
                return Err(OdpError::structure(format!(
                    "order matrix is not square: row {} has {} entries, expected {}",
                    x,
                    row.len(),
                    m
                )));
            }
            for (y, &b) in row.iter().enumerate() {
                if b {
                    up[x].insert(y);
                    down[y].insert(x);
                }
            }
        }
        Ok((up, down))
    }

    fn assemble(
        up: Vec<ElemSet>,
        down: Vec<ElemSet>,
        perp: Vec<usize>,
        bottom: usize,
        top: usize,
    ) -> Result<Self> {
        let m = up.len();
        if perp.len() != m {
            return Err(OdpError::structure(format!(
                "perp has {} entries, expected {}",
                perp.len(),
                m
            )));
        }
        let mut seen = ElemSet::with_capacity(m);
        for (x, &px) in perp.iter().enumerate() {
            if px >= m {
                return Err(OdpError::structure(format!(
                    "perp({}) = {} is out of range",
                    x, px
                )));
            }
            if seen.put(px) {
                return Err(OdpError::structure(format!(
                    "perp is not a bijection: {} is hit twice",
                    px
                )));
            }
        }
        let down_count = down.iter().map(|s| s.count_ones(..)).collect();
        let up_count = up.iter().map(|s| s.count_ones(..)).collect();
        Ok(FinOrthoPoset {
            size: m,
            up,
            down,
            down_count,
            up_count,
            perp,
            bottom,
            top,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(OdpError::structure(format!(
                "{} labels for {} elements",
                labels.len(),
                self.size
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn perp(&self, x: usize) -> usize {
        self.perp[x]
    }

    pub fn perp_map(&self) -> &[usize] {
        &self.perp
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// Elements above `x`, including `x`.
    pub fn up(&self, x: usize) -> &ElemSet {
        &self.up[x]
    }

    /// Elements below `x`, including `x`.
    pub fn down(&self, x: usize) -> &ElemSet {
        &self.down[x]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.size)
            .map(|x| (0..self.size).map(|y| self.leq(x, y)).collect())
            .collect()
    }

    pub fn empty_set(&self) -> ElemSet {
        ElemSet::with_capacity(self.size)
    }

    pub fn full_set(&self) -> ElemSet {
        full_set(self.size)
    }

    pub fn check_index(&self, x: usize) -> Result<()> {
        if x < self.size {
            Ok(())
        } else {
            Err(OdpError::IndexOutOfRange {
                index: x,
                size: self.size,
            })
        }
    }

    /// Checks every orthoposet axiom and lists the failures with the
    /// lexicographically first witnesses.
    pub fn verify_orthoposet(&self, opts: &CheckOptions) -> ViolationReport {
        let m = self.size;
        if m > opts.max_elements {
            log::warn!(
                "verifying {} elements (above the cap {}): cubic checks may be slow",
                m,
                opts.max_elements
            );
        }
        let lim = opts.witness_limit;
        let mut report = ViolationReport::default();

        let mut refl = WitnessSink::new(Axiom::Reflexive, lim);
        for x in 0..m {
            if !self.leq(x, x) {
                refl.push(vec![x]);
            }
        }
        refl.finish_into(&mut report);

        let mut anti = WitnessSink::new(Axiom::Antisymmetric, lim);
        for x in 0..m {
            for y in self.up[x].ones().filter(|&y| y > x) {
                if self.leq(y, x) {
                    anti.push(vec![x, y]);
                }
            }
        }
        anti.finish_into(&mut report);

        let mut trans = WitnessSink::new(Axiom::Transitive, lim);
        for x in 0..m {
            for y in self.up[x].ones() {
                let mut missing = self.up[y].clone();
                missing.difference_with(&self.up[x]);
                for z in missing.ones() {
                    trans.push(vec![x, y, z]);
                }
            }
        }
        trans.finish_into(&mut report);

        let mut least = WitnessSink::new(Axiom::BottomLeast, lim);
        let mut greatest = WitnessSink::new(Axiom::TopGreatest, lim);
        for x in 0..m {
            if !self.leq(self.bottom, x) {
                least.push(vec![x]);
            }
            if !self.leq(x, self.top) {
                greatest.push(vec![x]);
            }
        }
        least.finish_into(&mut report);
        greatest.finish_into(&mut report);

        let mut invol = WitnessSink::new(Axiom::PerpInvolution, lim);
        for x in 0..m {
            if self.perp[self.perp[x]] != x {
                invol.push(vec![x]);
            }
        }
        invol.finish_into(&mut report);

        let mut antitone = WitnessSink::new(Axiom::PerpAntitone, lim);
        for x in 0..m {
            for y in self.up[x].ones() {
                if !self.leq(self.perp[y], self.perp[x]) {
                    antitone.push(vec![x, y]);
                }
            }
        }
        antitone.finish_into(&mut report);

        let mut meet_c = WitnessSink::new(Axiom::MeetWithComplement, lim);
        let mut join_c = WitnessSink::new(Axiom::JoinWithComplement, lim);
        for x in 0..m {
            let px = self.perp[x];
            let lower = self.lower_bounds_unchecked(x, px);
            if let Some(z) = lower.ones().find(|&z| z != self.bottom) {
                meet_c.push(vec![x, z]);
            }
            let upper = self.upper_bounds_unchecked(x, px);
            if let Some(z) = upper.ones().find(|&z| z != self.top) {
                join_c.push(vec![x, z]);
            }
        }
        meet_c.finish_into(&mut report);
        join_c.finish_into(&mut report);

        report
    }

    pub fn lower_bounds(&self, a: usize, b: usize) -> Result<ElemSet> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.lower_bounds_unchecked(a, b))
    }

    pub fn upper_bounds(&self, a: usize, b: usize) -> Result<ElemSet> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.upper_bounds_unchecked(a, b))
    }

    pub(crate) fn lower_bounds_unchecked(&self, a: usize, b: usize) -> ElemSet {
        let mut s = self.down[a].clone();
        s.intersect_with(&self.down[b]);
        s
    }

    pub(crate) fn upper_bounds_unchecked(&self, a: usize, b: usize) -> ElemSet {
        let mut s = self.up[a].clone();
        s.intersect_with(&self.up[b]);
        s
    }

    /// Greatest element of `set`, if any.
    pub fn greatest_of(&self, set: &ElemSet) -> Option<usize> {
        // The greatest element, if present, has the largest down-set.
        let cand = set.ones().max_by_key(|&g| self.down_count[g])?;
        set.is_subset(&self.down[cand]).then_some(cand)
    }

    /// Least element of `set`, if any.
    pub fn least_of(&self, set: &ElemSet) -> Option<usize> {
        let cand = set.ones().max_by_key(|&g| self.up_count[g])?;
        set.is_subset(&self.up[cand]).then_some(cand)
    }

    /// The meet of `a` and `b`. `Ok(None)` means no greatest lower bound
    /// exists, which is different from a meet equal to bottom.
    pub fn meet(&self, a: usize, b: usize) -> Result<Option<usize>> {
        self.lower_bounds(a, b).map(|l| self.greatest_of(&l))
    }

    pub fn join(&self, a: usize, b: usize) -> Result<Option<usize>> {
        self.upper_bounds(a, b).map(|u| self.least_of(&u))
    }

    /// Unchecked meet; panics on out-of-range indices.
    pub fn glb(&self, a: usize, b: usize) -> Option<usize> {
        self.greatest_of(&self.lower_bounds_unchecked(a, b))
    }

    /// Unchecked join; panics on out-of-range indices.
    pub fn lub(&self, a: usize, b: usize) -> Option<usize> {
        self.least_of(&self.upper_bounds_unchecked(a, b))
    }

    /// True when bottom is the only common lower bound of `a` and `b`.
    pub fn meets_to_bottom(&self, a: usize, b: usize) -> bool {
        let mut l = self.down[a].clone();
        l.intersect_with(&self.down[b]);
        l.count_ones(..) == 1 && l.contains(self.bottom)
    }

    /// First pair (in index order) lacking a meet or a join.
    pub fn lattice_witness(&self) -> Option<(usize, usize)> {
        let m = self.size;
        (0..m)
            .flat_map(|a| (a..m).map(move |b| (a, b)))
            .find(|&(a, b)| self.glb(a, b).is_none() || self.lub(a, b).is_none())
    }

    pub fn is_lattice(&self) -> bool {
        self.lattice_witness().is_none()
    }

    /// First triple violating a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c), assuming a
    /// lattice. Returns `None` when the poset is not a lattice.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let m = self.size;
        let mut meet = vec![0usize; m * m];
        let mut join = vec![0usize; m * m];
        for a in 0..m {
            for b in 0..m {
                meet[a * m + b] = self.glb(a, b)?;
                join[a * m + b] = self.lub(a, b)?;
            }
        }
        for a in 0..m {
            for b in 0..m {
                let ab = meet[a * m + b];
                for c in 0..m {
                    let lhs = meet[a * m + join[b * m + c]];
                    let rhs = join[ab * m + meet[a * m + c]];
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_boolean(&self) -> bool {
        self.is_lattice() && self.distributivity_witness().is_none()
    }

    /// Covering pairs `(x, y)` with x ⋖ y, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.size {
            let mut strict = self.up[x].clone();
            strict.set(x, false);
            let mut cover = strict.clone();
            for z in strict.ones() {
                let mut above_z = self.up[z].clone();
                above_z.set(z, false);
                cover.difference_with(&above_z);
            }
            out.extend(cover.ones().map(|y| (x, y)));
        }
        out
    }

    /// Hasse diagram in DOT, nodes in index order, edges pointing upward.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph hasse {\n  rankdir=BT;\n");
        for x in 0..self.size {
            let label = self.label(x).replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(s, "  n{} [label=\"{}\"];", x, label);
        }
        for (x, y) in self.covers() {
            let _ = writeln!(s, "  n{} -> n{};", x, y);
        }
        s.push_str("}\n");
        s
    }
}

/// Reflexive-transitive closure of a relation given as pairs over `0..m`,
/// returned as rows (`rows[x]` = elements reachable from `x`).
pub fn transitive_closure(m: usize, pairs: &[(usize, usize)]) -> Vec<ElemSet> {
    let mut rows: Vec<ElemSet> = (0..m).map(|x| singleton(m, x)).collect();
    for &(x, y) in pairs {
        rows[x].insert(y);
    }
    // Warshall, one row union per (k, i) pair.
    for k in 0..m {
        let row_k = rows[k].clone();
        for row in rows.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> FinOrthoPoset {
        FinOrthoPoset::from_fn(2, |x, y| x <= y, vec![1, 0]).unwrap()
    }

    // ∅, {1}, {2}, Ω as bitmasks 0..4
    fn boolean4(perp: Vec<usize>) -> FinOrthoPoset {
        FinOrthoPoset::from_fn(4, |x, y| x & !y == 0, perp).unwrap()
    }

    #[test]
    fn chain_and_diamond_verify() {
        let opts = CheckOptions::default();
        assert!(chain2().verify_orthoposet(&opts).is_empty());
        assert!(boolean4(vec![3, 2, 1, 0]).verify_orthoposet(&opts).is_empty());
    }

    #[test]
    fn identity_perp_is_reported() {
        let p = boolean4(vec![0, 1, 2, 3]);
        let r = p.verify_orthoposet(&CheckOptions::default());
        assert_eq!(r.first_witness(Axiom::MeetWithComplement), Some(&[1, 1][..]));
        assert_eq!(r.failure(Axiom::MeetWithComplement).unwrap().total, 3);
        assert_eq!(r.first_witness(Axiom::JoinWithComplement), Some(&[0, 0][..]));
        // x < y gives y ≤ x under the identity: every strict pair fails.
        assert_eq!(r.failure(Axiom::PerpAntitone).unwrap().total, 5);
        assert!(r.failure(Axiom::PerpInvolution).is_none());
    }

    #[test]
    fn structural_errors() {
        let bad = vec![vec![true, true], vec![false]];
        assert!(matches!(
            FinOrthoPoset::from_matrix(&bad, vec![1, 0]),
            Err(OdpError::Structure(_))
        ));
        let sq = vec![vec![true, true], vec![false, true]];
        assert!(matches!(
            FinOrthoPoset::from_matrix(&sq, vec![0, 0]),
            Err(OdpError::Structure(_))
        ));
        assert!(matches!(
            FinOrthoPoset::from_matrix(&sq, vec![0, 2]),
            Err(OdpError::Structure(_))
        ));
        assert!(FinOrthoPoset::from_matrix(&[], vec![]).is_err());
    }

    #[test]
    fn non_transitive_relation_is_reported() {
        // 0 ≤ 1 ≤ 2 without 0 ≤ 2
        let leq = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        let p = FinOrthoPoset::with_bounds(&leq, vec![2, 1, 0], 0, 2).unwrap();
        let r = p.verify_orthoposet(&CheckOptions::default());
        assert_eq!(r.first_witness(Axiom::Transitive), Some(&[0, 1, 2][..]));
        assert!(r.failure(Axiom::BottomLeast).is_some());
    }

    #[test]
    fn bounds_and_meets_on_diamond() {
        let p = boolean4(vec![3, 2, 1, 0]);
        assert_eq!(p.lower_bounds(1, 2).unwrap().ones().collect::<Vec<_>>(), vec![0]);
        assert_eq!(p.meet(1, 2).unwrap(), Some(0));
        assert_eq!(p.join(1, 2).unwrap(), Some(3));
        assert_eq!(p.lower_bounds(3, 3).unwrap(), p.down(3).clone());
        assert!(matches!(
            p.meet(0, 4),
            Err(OdpError::IndexOutOfRange { index: 4, size: 4 })
        ));
        assert!(p.is_lattice());
        assert!(p.is_boolean());
    }

    #[test]
    fn bowtie_has_no_meet() {
        // 0 < {1,2} < {3,4} < 5, each of 1,2 below both 3 and 4.
        let leq = |x: usize, y: usize| {
            x == y || x == 0 || y == 5 || ((x == 1 || x == 2) && (y == 3 || y == 4))
        };
        let p = FinOrthoPoset::from_fn(6, leq, vec![5, 3, 4, 1, 2, 0]).unwrap();
        assert_eq!(p.meet(3, 4).unwrap(), None);
        assert_eq!(p.join(1, 2).unwrap(), None);
        assert_eq!(p.meet(1, 2).unwrap(), Some(0));
        assert!(!p.is_lattice());
        // Not an orthoposet: 1 ≤ perp(1) = 3.
        assert!(!p.verify_orthoposet(&CheckOptions::default()).is_empty());
    }

    #[test]
    fn dot_for_chain_and_diamond() {
        let dot = chain2().to_dot();
        assert_eq!(dot.matches("->").count(), 1);
        assert_eq!(dot.matches("[label=").count(), 2);
        let dot = boolean4(vec![3, 2, 1, 0]).to_dot();
        assert_eq!(dot.matches("->").count(), 4);
        assert_eq!(dot.matches("[label=").count(), 4);
        assert!(dot.contains("n0 -> n1;"));
    }

    #[test]
    fn closure_of_covers_recovers_order() {
        let p = boolean4(vec![3, 2, 1, 0]);
        let rows = transitive_closure(p.size(), &p.covers());
        for (x, row) in rows.iter().enumerate() {
            assert_eq!(row, p.up(x));
        }
    }
}
