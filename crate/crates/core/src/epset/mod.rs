//! Eventually periodic subsets of ℕ = {0, 1, 2, ...} with exact set algebra,
//! and the coset families built from them.
//!
//! A set is a finite prefix (membership of `0..t`) followed by a periodic
//! tail: `n ≥ t` is a member iff `tail[n % p]`. Residues are absolute, not
//! relative to `t`. Every value is kept in canonical form (minimal period,
//! then minimal threshold), so structural equality is set equality.

mod expr;
mod family;

use std::fmt;

use rand::Rng;

pub use expr::{constant, eval_expr, parse_expr, Expr, CONSTANT_NAMES};
pub use family::{
    build_r_example, build_t_example, ClassId, CosetFamily, Membership, RCheck, WitnessPair,
    DEFAULT_MAX_PAIRS, MAX_FRAGMENT_POINTS,
};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EPSet {
    period: usize,
    prefix: Vec<bool>,
    tail: Vec<bool>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl EPSet {
    /// `prefix` fixes membership of `0..prefix.len()`; `tail` must have
    /// length `period >= 1`. The result is canonicalized.
    pub fn new(prefix: Vec<bool>, tail: Vec<bool>) -> Self {
        assert!(!tail.is_empty(), "period must be at least 1");
        let mut s = EPSet {
            period: tail.len(),
            prefix,
            tail,
        };
        s.canonicalize();
        s
    }

    pub fn empty() -> Self {
        EPSet::new(Vec::new(), vec![false])
    }

    pub fn nat() -> Self {
        EPSet::new(Vec::new(), vec![true])
    }

    /// Union of residue classes `r mod period`.
    pub fn residues(period: usize, residues: &[usize]) -> Self {
        let mut tail = vec![false; period];
        for &r in residues {
            tail[r % period] = true;
        }
        EPSet::new(Vec::new(), tail)
    }

    pub fn finite(elems: &[u64]) -> Self {
        let len = elems.iter().map(|&n| n as usize + 1).max().unwrap_or(0);
        let mut prefix = vec![false; len];
        for &n in elems {
            prefix[n as usize] = true;
        }
        EPSet::new(prefix, vec![false])
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn threshold(&self) -> usize {
        self.prefix.len()
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn tail(&self) -> &[bool] {
        &self.tail
    }

    pub fn tail_residues(&self) -> Vec<usize> {
        (0..self.period).filter(|&r| self.tail[r]).collect()
    }

    pub fn contains(&self, n: u64) -> bool {
        let n = n as usize;
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.tail[n % self.period]
        }
    }

    fn canonicalize(&mut self) {
        let p = self.period;
        if let Some(d) = (1..p)
            .filter(|d| p.is_multiple_of(*d))
            .find(|&d| (0..p).all(|r| self.tail[r] == self.tail[r % d]))
        {
            self.tail.truncate(d);
            self.period = d;
        }
        while let Some(&last) = self.prefix.last() {
            let n = self.prefix.len() - 1;
            if last == self.tail[n % self.period] {
                self.prefix.pop();
            } else {
                break;
            }
        }
    }

    /// Pointwise combination, aligned to the lcm of the periods and the
    /// larger threshold.
    pub fn combine(&self, other: &EPSet, op: impl Fn(bool, bool) -> bool) -> EPSet {
        let t = self.threshold().max(other.threshold());
        let p = lcm(self.period, other.period);
        let prefix = (0..t as u64)
            .map(|n| op(self.contains(n), other.contains(n)))
            .collect();
        let tail = (0..p)
            .map(|r| {
                // The representative of residue r at or above t.
                let n = t + (r + p - t % p) % p;
                op(self.contains(n as u64), other.contains(n as u64))
            })
            .collect();
        EPSet::new(prefix, tail)
    }

    pub fn complement(&self) -> EPSet {
        EPSet::new(
            self.prefix.iter().map(|b| !b).collect(),
            self.tail.iter().map(|b| !b).collect(),
        )
    }

    pub fn union(&self, other: &EPSet) -> EPSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &EPSet) -> EPSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn symdiff(&self, other: &EPSet) -> EPSet {
        self.combine(other, |a, b| a != b)
    }

    pub fn difference(&self, other: &EPSet) -> EPSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.prefix.iter().all(|b| !b)
    }

    pub fn is_finite(&self) -> bool {
        self.tail.iter().all(|b| !b)
    }

    pub fn is_subset(&self, other: &EPSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn equals(&self, other: &EPSet) -> bool {
        self == other
    }

    /// Elements of a finite set, ascending; `None` for infinite sets.
    pub fn finite_elements(&self) -> Option<Vec<u64>> {
        self.is_finite().then(|| {
            (0..self.prefix.len() as u64)
                .filter(|&n| self.prefix[n as usize])
                .collect()
        })
    }

    /// Smallest member, if any.
    pub fn min_element(&self) -> Option<u64> {
        if let Some(n) = self.prefix.iter().position(|&b| b) {
            return Some(n as u64);
        }
        let t = self.threshold();
        (t..t + self.period).find(|&n| self.tail[n % self.period]).map(|n| n as u64)
    }

    /// Membership of `0..n`.
    pub fn truncate(&self, n: usize) -> Vec<bool> {
        (0..n as u64).map(|k| self.contains(k)).collect()
    }

    /// Random canonical set with period in `1..=max_period` and a raw
    /// prefix of length `0..=max_threshold`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_period: usize, max_threshold: usize) -> EPSet {
        let p = rng.gen_range(1..=max_period);
        let t = rng.gen_range(0..=max_threshold);
        let prefix = (0..t).map(|_| rng.gen_bool(0.5)).collect();
        let tail = (0..p).map(|_| rng.gen_bool(0.5)).collect();
        EPSet::new(prefix, tail)
    }
}

impl fmt::Display for EPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ep(p={}", self.period)?;
        if !self.prefix.is_empty() {
            let bits: String = self.prefix.iter().map(|&b| if b { '1' } else { '0' }).collect();
            write!(f, "; prefix=0b{}", bits)?;
        }
        let res: Vec<String> = self.tail_residues().iter().map(|r| r.to_string()).collect();
        write!(f, "; tail={{{}}})", res.join(","))
    }
}

impl fmt::Debug for EPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> EPSet {
        EPSet::residues(2, &[0])
    }

    fn a2() -> EPSet {
        EPSet::residues(6, &[0, 3])
    }

    fn a3() -> EPSet {
        EPSet::residues(6, &[2, 3, 4])
    }

    #[test]
    fn canonical_forms() {
        let evens6 = EPSet::residues(6, &[0, 2, 4]);
        assert_eq!(evens6, a1());
        assert_eq!(evens6.period(), 2);
        // A prefix agreeing with the tail is dropped.
        let s = EPSet::new(vec![true, false, true], vec![true, false]);
        assert_eq!(s, a1());
        assert_eq!(s.threshold(), 0);
        let one_flip = EPSet::new(vec![true, true], vec![true, false]);
        assert_eq!(one_flip.threshold(), 2);
        assert_eq!(EPSet::new(vec![false; 5], vec![false, false]), EPSet::empty());
    }

    #[test]
    fn example_set_arithmetic() {
        assert_eq!(a1().symdiff(&a2()), a3());
        let e = a1().intersect(&a2().complement()).union(&a2().intersect(&a3()));
        assert_eq!(e, a3());
        assert!(a3().symdiff(&a3()).is_empty());
    }

    #[test]
    fn predicates() {
        let flipped = a1().symdiff(&EPSet::finite(&[4]));
        assert!(a1().symdiff(&flipped).is_finite());
        assert!(EPSet::residues(6, &[0]).is_subset(&a2()));
        assert!(!a2().is_subset(&EPSet::residues(6, &[0])));
        assert!(!a3().is_finite());
        assert!(EPSet::finite(&[]).is_empty());
        assert_eq!(EPSet::finite(&[3, 7]).finite_elements(), Some(vec![3, 7]));
        assert_eq!(a3().finite_elements(), None);
    }

    #[test]
    fn truncation() {
        assert_eq!(a1().truncate(6), vec![true, false, true, false, true, false]);
        assert_eq!(EPSet::empty().truncate(4), vec![false; 4]);
    }

    #[test]
    fn min_element() {
        assert_eq!(a3().min_element(), Some(2));
        assert_eq!(EPSet::finite(&[9]).min_element(), Some(9));
        assert_eq!(EPSet::empty().min_element(), None);
        let late = EPSet::new(vec![false; 7], vec![false, true]);
        assert_eq!(late.min_element(), Some(7));
    }

    #[test]
    fn display() {
        assert_eq!(a3().to_string(), "ep(p=6; tail={2,3,4})");
        assert_eq!(EPSet::finite(&[1]).to_string(), "ep(p=1; prefix=0b01; tail={})");
    }
}
