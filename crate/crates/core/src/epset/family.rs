//! Families `{D Δ F : D in a finite Δ-group, F finite ⊆ U}` of eventually
//! periodic sets and exact decision procedures over them.

use serde::Serialize;

use super::EPSet;
use crate::error::{OdpError, Result};

/// Largest `|U ∩ [0, B)|` accepted by fragment searches.
pub const MAX_FRAGMENT_POINTS: usize = 16;

/// Default cap on the number of pairs a fragment scan may test.
pub const DEFAULT_MAX_PAIRS: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetFamily {
    name: String,
    base: Vec<EPSet>,
    support: EPSet,
}

/// A member written as `base[base_index] Δ exceptions`. Unique per member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Membership {
    pub base_index: usize,
    pub exceptions: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessPair {
    pub a: Membership,
    pub b: Membership,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RCheck {
    Proven,
    Refuted(WitnessPair),
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassId {
    /// `a ∧ b = 0 ⇒ a ≤ b^⊥`
    R,
    /// `a ∧ b = a ∧ b^⊥ = 0 ⇒ a ≤ b^⊥`
    T,
}

fn group_closure(generators: &[EPSet]) -> Vec<EPSet> {
    let mut group = vec![EPSet::empty()];
    for g in generators {
        if group.contains(g) {
            continue;
        }
        let shifted: Vec<EPSet> = group.iter().map(|x| g.symdiff(x)).collect();
        group.extend(shifted);
    }
    group
}

fn evens() -> EPSet {
    EPSet::residues(2, &[0])
}

fn a2_set() -> EPSet {
    EPSet::residues(6, &[0, 3])
}

/// Base group generated by A1 = evens, A2 = N0 ∪ N3 and ℕ, with every
/// finite exception allowed.
pub fn build_r_example() -> CosetFamily {
    let base = group_closure(&[evens(), a2_set(), EPSet::nat()]);
    CosetFamily::new("R", base, EPSet::nat()).expect("generated group is valid")
}

/// Same base group; exceptions restricted to
/// E = (A1 ∩ A2^⊥) ∪ (A2 ∩ A3).
pub fn build_t_example() -> CosetFamily {
    let base = group_closure(&[evens(), a2_set(), EPSet::nat()]);
    CosetFamily::new("T", base, t_support()).expect("generated group is valid")
}

pub(crate) fn t_support() -> EPSet {
    let (a1, a2) = (evens(), a2_set());
    let a3 = a1.symdiff(&a2);
    a1.intersect(&a2.complement()).union(&a2.intersect(&a3))
}

impl CosetFamily {
    /// Validates that `base` contains ∅ and ℕ and is closed under Δ.
    pub fn new(name: impl Into<String>, base: Vec<EPSet>, support: EPSet) -> Result<Self> {
        if !base.contains(&EPSet::empty()) || !base.contains(&EPSet::nat()) {
            return Err(OdpError::structure("base group must contain the empty set and ℕ"));
        }
        for x in &base {
            for y in &base {
                if !base.contains(&x.symdiff(y)) {
                    return Err(OdpError::structure(format!(
                        "base group is not closed under symmetric difference: {} Δ {}",
                        x, y
                    )));
                }
            }
        }
        Ok(CosetFamily {
            name: name.into(),
            base,
            support,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &[EPSet] {
        &self.base
    }

    pub fn support(&self) -> &EPSet {
        &self.support
    }

    fn empty_index(&self) -> usize {
        self.base.iter().position(EPSet::is_empty).expect("validated")
    }

    /// The set `base[m.base_index] Δ m.exceptions`.
    pub fn member(&self, m: &Membership) -> EPSet {
        self.base[m.base_index].symdiff(&EPSet::finite(&m.exceptions))
    }

    /// The unique decomposition `X = D Δ F`, if `X` is a member. Distinct
    /// base sets differ on infinitely many points, so at most one `D` leaves
    /// a finite remainder.
    pub fn contains(&self, x: &EPSet) -> Option<Membership> {
        self.base.iter().enumerate().find_map(|(i, d)| {
            let f = x.symdiff(d);
            (f.is_finite() && f.is_subset(&self.support)).then(|| Membership {
                base_index: i,
                exceptions: f.finite_elements().expect("finite"),
            })
        })
    }

    /// A nonempty member contained in `s`, if one exists.
    ///
    /// Either a point of `U ∩ s` gives a singleton member, or some base set
    /// `D` meets `s` and `D ∖ s` is a finite subset of `U`, in which case
    /// `D Δ (D ∖ s) = D ∩ s` is a member. Every nonempty member below `s`
    /// yields one of the two.
    pub fn lower_bound_witness(&self, s: &EPSet) -> Option<Membership> {
        if let Some(n) = self.support.intersect(s).min_element() {
            return Some(Membership {
                base_index: self.empty_index(),
                exceptions: vec![n],
            });
        }
        self.base.iter().enumerate().find_map(|(i, d)| {
            if d.intersect(s).is_empty() {
                return None;
            }
            let outside = d.difference(s);
            (outside.is_finite() && outside.is_subset(&self.support)).then(|| Membership {
                base_index: i,
                exceptions: outside.finite_elements().expect("finite"),
            })
        })
    }

    pub fn has_nonzero_lower_bound(&self, s: &EPSet) -> bool {
        self.lower_bound_witness(s).is_some()
    }

    /// Whether ∅ is the only common lower bound of two members.
    pub fn meets_zero(&self, a: &EPSet, b: &EPSet) -> Result<bool> {
        for (x, tag) in [(a, "first"), (b, "second")] {
            if self.contains(x).is_none() {
                return Err(OdpError::Precondition(format!(
                    "{} argument {} is not a member of family {}",
                    tag, x, self.name
                )));
            }
        }
        Ok(self.meets_zero_members(a, b))
    }

    fn meets_zero_members(&self, a: &EPSet, b: &EPSet) -> bool {
        !self.has_nonzero_lower_bound(&a.intersect(b))
    }

    /// Proven when `U = ℕ`: then every nonempty intersection contains a
    /// singleton member, so `a ∧ b = 0` forces `a ∩ b = ∅`. Otherwise the
    /// base-group pairs are searched for a counterexample.
    pub fn class_r_check(&self) -> RCheck {
        if self.support.complement().is_empty() {
            return RCheck::Proven;
        }
        for (i, a) in self.base.iter().enumerate() {
            for (j, b) in self.base.iter().enumerate() {
                if self.meets_zero_members(a, b) && !a.is_subset(&b.complement()) {
                    return RCheck::Refuted(WitnessPair {
                        a: Membership {
                            base_index: i,
                            exceptions: Vec::new(),
                        },
                        b: Membership {
                            base_index: j,
                            exceptions: Vec::new(),
                        },
                    });
                }
            }
        }
        RCheck::Undecided
    }

    /// Human-readable name such as `A3^c` or `A1 Δ [4, 8]`, falling back
    /// to the canonical form for unnamed base sets.
    pub fn describe(&self, m: &Membership) -> String {
        const NAMES: [(&str, &str); 5] = [("A1", "A1"), ("A2", "A2"), ("A3", "A3"), ("NAT", "ℕ"), ("EMPTY", "∅")];
        let base = &self.base[m.base_index];
        let named = |complemented: bool| {
            NAMES.iter().find_map(|(c, n)| {
                let s = super::constant(c)?;
                let s = if complemented { s.complement() } else { s };
                (&s == base).then(|| if complemented { format!("{}^c", n) } else { n.to_string() })
            })
        };
        let name = named(false)
            .or_else(|| named(true))
            .unwrap_or_else(|| base.to_string());
        if m.exceptions.is_empty() {
            name
        } else {
            format!("{} Δ {:?}", name, m.exceptions)
        }
    }

    /// Points of `U ∩ [0, bound)`, ascending.
    pub fn fragment_points(&self, bound: u64) -> Vec<u64> {
        (0..bound).filter(|&n| self.support.contains(n)).collect()
    }

    /// Members whose exception set lies in `[0, bound)`, ordered by base
    /// index and then by exception bitmask over [`Self::fragment_points`].
    pub fn fragment(&self, bound: u64) -> Result<Vec<Membership>> {
        let pts = self.fragment_points(bound);
        if pts.len() > MAX_FRAGMENT_POINTS {
            return Err(OdpError::FragmentTooLarge {
                reason: format!(
                    "|U ∩ [0,{})| = {} exceeds {}",
                    bound,
                    pts.len(),
                    MAX_FRAGMENT_POINTS
                ),
            });
        }
        let mut out = Vec::with_capacity(self.base.len() << pts.len());
        for i in 0..self.base.len() {
            for mask in 0u32..(1 << pts.len()) {
                let exceptions = pts
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &n)| n)
                    .collect();
                out.push(Membership {
                    base_index: i,
                    exceptions,
                });
            }
        }
        Ok(out)
    }

    /// First pair `(a, b)` of fragment members, in fragment order, that
    /// violates the class implication. All meet tests are exact.
    ///
    /// For 𝒯, a counterexample needs `a ∩ U = ∅` (any point of `a ∩ U`
    /// lies in `a ∩ b` or in `a ∩ b^⊥` and is a singleton member below it),
    /// so other `a` are skipped without scanning partners.
    pub fn class_witness_search(&self, bound: u64, class: ClassId, max_pairs: u64) -> Result<Option<WitnessPair>> {
        let frag = self.fragment(bound)?;
        let sets: Vec<EPSet> = frag.iter().map(|m| self.member(m)).collect();
        let firsts: Vec<usize> = match class {
            ClassId::R => (0..sets.len()).collect(),
            ClassId::T => (0..sets.len())
                .filter(|&i| sets[i].intersect(&self.support).is_empty())
                .collect(),
        };
        let pairs = firsts.len() as u64 * sets.len() as u64;
        if pairs > max_pairs {
            return Err(OdpError::FragmentTooLarge {
                reason: format!("{} pairs to test exceed the cap {}", pairs, max_pairs),
            });
        }
        for &i in &firsts {
            let a = &sets[i];
            for (j, b) in sets.iter().enumerate() {
                let violated = match class {
                    ClassId::R => {
                        !a.intersect(b).is_empty() && self.meets_zero_members(a, b)
                    }
                    ClassId::T => {
                        !a.is_empty()
                            && self.meets_zero_members(a, b)
                            && self.meets_zero_members(a, &b.complement())
                    }
                };
                if violated {
                    return Ok(Some(WitnessPair {
                        a: frag[i].clone(),
                        b: frag[j].clone(),
                    }));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(rs: &[usize]) -> EPSet {
        EPSet::residues(6, rs)
    }

    #[test]
    fn examples_have_the_expected_shape() {
        let r = build_r_example();
        assert_eq!(r.base().len(), 8);
        assert_eq!(r.base()[1], res(&[0, 2, 4]));
        assert_eq!(r.base()[2], res(&[0, 3]));
        assert_eq!(r.base()[3], res(&[2, 3, 4]));
        let t = build_t_example();
        assert_eq!(t.support(), &res(&[2, 3, 4]));
        assert_eq!(t.base(), r.base());
    }

    #[test]
    fn invalid_base_is_rejected() {
        let bad = vec![EPSet::empty(), EPSet::nat(), res(&[0])];
        assert!(CosetFamily::new("bad", bad, EPSet::nat()).is_err());
        assert!(CosetFamily::new("bad", vec![EPSet::nat()], EPSet::nat()).is_err());
    }

    #[test]
    fn membership() {
        let r = build_r_example();
        let x = res(&[0, 2, 4]).symdiff(&EPSet::finite(&[7]));
        assert_eq!(
            r.contains(&x),
            Some(Membership {
                base_index: 1,
                exceptions: vec![7]
            })
        );
        assert_eq!(r.contains(&res(&[0])), None);
        let t = build_t_example();
        assert_eq!(t.contains(&EPSet::finite(&[5])), None);
        assert_eq!(
            t.contains(&EPSet::finite(&[8])),
            Some(Membership {
                base_index: 0,
                exceptions: vec![8]
            })
        );
    }

    #[test]
    fn zero_meets() {
        let t = build_t_example();
        let (a1, a2) = (res(&[0, 2, 4]), res(&[0, 3]));
        assert_eq!(t.meets_zero(&a1, &a2), Ok(true));
        assert!(t.meets_zero(&res(&[0]), &a2).is_err());
        assert!(!t.has_nonzero_lower_bound(&EPSet::empty()));
        let r = build_r_example();
        assert_eq!(r.meets_zero(&a1, &a2), Ok(false));
        assert_eq!(r.meets_zero(&a1, &a1.complement()), Ok(true));
    }

    #[test]
    fn lower_bound_witness_from_a_base_set() {
        // In T, A3^⊥ ∪ {2} contains A3^⊥ itself.
        let t = build_t_example();
        let s = res(&[0, 1, 5]).union(&EPSet::finite(&[2]));
        let w = t.lower_bound_witness(&s).unwrap();
        assert_eq!(w.exceptions, vec![2]);
        let w = t.lower_bound_witness(&res(&[0, 1, 5])).unwrap();
        assert_eq!(t.member(&w), res(&[0, 1, 5]));
    }

    #[test]
    fn r_check_and_searches() {
        assert_eq!(build_r_example().class_r_check(), RCheck::Proven);
        let t = build_t_example();
        let RCheck::Refuted(w) = t.class_r_check() else {
            panic!("T is not in R");
        };
        assert_eq!((w.a.base_index, w.b.base_index), (1, 2));
        let found = t.class_witness_search(12, ClassId::R, DEFAULT_MAX_PAIRS).unwrap().unwrap();
        assert_eq!(t.member(&found.a), res(&[0, 2, 4]));
        assert_eq!(t.member(&found.b), res(&[0, 3]));
        assert!(build_r_example()
            .class_witness_search(4, ClassId::R, DEFAULT_MAX_PAIRS)
            .unwrap()
            .is_none());
    }

    #[test]
    fn fragment_cap() {
        let r = build_r_example();
        assert_eq!(r.fragment(3).unwrap().len(), 64);
        assert!(matches!(r.fragment(17), Err(OdpError::FragmentTooLarge { .. })));
        let t = build_t_example();
        assert!(matches!(
            t.class_witness_search(12, ClassId::R, 1000),
            Err(OdpError::FragmentTooLarge { .. })
        ));
    }
}
