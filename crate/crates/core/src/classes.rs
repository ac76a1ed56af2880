//! Membership in the classes ℛ, 𝒮 and 𝒯, compatibility, and the combined
//! classification report.
//!
//! "a ∧ b = 0" always means that bottom is the *only* common lower bound of
//! `a` and `b`. A pair without a meet does not meet to zero.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{OdpError, Result};
use crate::frink::{enumerate_maximal_ideals, is_selective, selectivity_witness};
use crate::poset::FinOrthoPoset;

/// Evidence that a predicate fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Pair { a: usize, b: usize },
    Triple { a: usize, b: usize, c: usize },
    /// A maximal ideal (bitstring over elements) missing both `x` and `perp(x)`.
    Ideal { members: String, x: usize, perp_x: usize },
}

/// Result of a class predicate: `witness` is present exactly when the
/// predicate fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn from_pair(w: Option<(usize, usize)>) -> Self {
        Verdict {
            holds: w.is_none(),
            witness: w.map(|(a, b)| Witness::Pair { a, b }),
        }
    }
}

/// ℛ: `a ∧ b = 0 ⇒ a ≤ b^⊥` for all pairs; the witness is the first failing
/// pair in index order.
pub fn in_class_r(p: &FinOrthoPoset) -> Verdict {
    let m = p.size();
    let w = (0..m)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .find(|&(a, b)| p.meets_to_bottom(a, b) && !p.leq(a, p.perp(b)));
    Verdict::from_pair(w)
}

/// 𝒯: `a ∧ b = a ∧ b^⊥ = 0 ⇒ a ≤ b^⊥`.
pub fn in_class_t(p: &FinOrthoPoset) -> Verdict {
    Verdict::from_pair(class_t_scan(p, |a, b| p.leq(a, p.perp(b))))
}

/// 𝒯 with the conclusion replaced by `a = 0`. Equivalent on orthoposets.
pub fn in_class_t_bottom_form(p: &FinOrthoPoset) -> Verdict {
    Verdict::from_pair(class_t_scan(p, |a, _| a == p.bottom()))
}

fn class_t_scan(p: &FinOrthoPoset, conclusion: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    let m = p.size();
    (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).find(|&(a, b)| {
        p.meets_to_bottom(a, b) && p.meets_to_bottom(a, p.perp(b)) && !conclusion(a, b)
    })
}

/// 𝒮: every maximal Frink ideal is selective. Returns the number of
/// maximal and selective ideals alongside the verdict.
pub fn in_class_s(p: &FinOrthoPoset, node_budget: u64) -> Result<(Verdict, usize, usize)> {
    let ideals = enumerate_maximal_ideals(p, node_budget)?;
    let selective = ideals.iter().filter(|i| is_selective(p, i.members())).count();
    let witness = ideals.iter().find_map(|i| {
        selectivity_witness(p, i.members()).map(|x| Witness::Ideal {
            members: i.bitstring(),
            x,
            perp_x: p.perp(x),
        })
    });
    Ok((
        Verdict {
            holds: witness.is_none(),
            witness,
        },
        ideals.len(),
        selective,
    ))
}

/// Whether `a` and `b` split as `a = a1 ∨ c`, `b = b1 ∨ c` with `a1`, `b1`,
/// `c` pairwise orthogonal (x ⊥ y meaning x ≤ y^⊥). Exhaustive search over
/// `c ≤ a ∧ b`, `a1 ≤ a` and `b1 ≤ b`.
pub fn compatible(p: &FinOrthoPoset, a: usize, b: usize) -> Result<bool> {
    p.check_index(a)?;
    p.check_index(b)?;
    Ok(compatible_unchecked(p, a, b))
}

pub(crate) fn compatible_unchecked(p: &FinOrthoPoset, a: usize, b: usize) -> bool {
    let common: Vec<usize> = p.lower_bounds_unchecked(a, b).ones().collect();
    // Larger candidates first: in the common case c is the meet itself.
    for &c in common.iter().rev() {
        let pc = p.perp(c);
        let mut a_cands = p.down(a).clone();
        a_cands.intersect_with(p.down(pc));
        let a1s: Vec<usize> = a_cands.ones().filter(|&a1| p.lub(a1, c) == Some(a)).collect();
        if a1s.is_empty() {
            continue;
        }
        let mut b_cands = p.down(b).clone();
        b_cands.intersect_with(p.down(pc));
        for b1 in b_cands.ones().filter(|&b1| p.lub(b1, c) == Some(b)) {
            if a1s.iter().any(|&a1| p.leq(a1, p.perp(b1))) {
                return true;
            }
        }
    }
    false
}

/// Full classification. `in_s` is `None` when ideal enumeration ran out of
/// budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub elements: usize,
    pub in_r: bool,
    pub in_s: Option<bool>,
    pub in_t: bool,
    pub is_lattice: bool,
    pub is_boolean: bool,
    pub ideal_count: Option<usize>,
    pub selective_count: Option<usize>,
    pub witnesses: BTreeMap<String, Witness>,
}

impl ClassReport {
    /// `in_R ⇒ in_S ⇒ in_T`, skipping any implication involving an
    /// undecided `in_S`.
    pub fn chain_holds(&self) -> bool {
        match self.in_s {
            Some(s) => (!self.in_r || s) && (!s || self.in_t),
            None => true,
        }
    }

    /// Key/value view used by the CLI expectation flags.
    pub fn field(&self, key: &str) -> Option<String> {
        let b = |v: bool| v.to_string();
        let opt = |v: Option<String>| v.unwrap_or_else(|| "unknown".into());
        Some(match key {
            "elements" => self.elements.to_string(),
            "in_R" | "in_r" => b(self.in_r),
            "in_S" | "in_s" => opt(self.in_s.map(b)),
            "in_T" | "in_t" => b(self.in_t),
            "lattice" | "is_lattice" => b(self.is_lattice),
            "boolean" | "is_boolean" => b(self.is_boolean),
            "ideal_count" => opt(self.ideal_count.map(|c| c.to_string())),
            "selective_count" => opt(self.selective_count.map(|c| c.to_string())),
            _ => return None,
        })
    }
}

pub fn classify(p: &FinOrthoPoset, node_budget: u64) -> ClassReport {
    let mut witnesses = BTreeMap::new();
    let r = in_class_r(p);
    let t = in_class_t(p);
    if let Some(w) = r.witness {
        witnesses.insert("in_R".to_string(), w);
    }
    if let Some(w) = t.witness {
        witnesses.insert("in_T".to_string(), w);
    }
    let (in_s, ideal_count, selective_count) = match in_class_s(p, node_budget) {
        Ok((v, n, s)) => {
            if let Some(w) = v.witness {
                witnesses.insert("in_S".to_string(), w);
            }
            (Some(v.holds), Some(n), Some(s))
        }
        Err(OdpError::BudgetExceeded { budget }) => {
            log::warn!("ideal enumeration exceeded {} nodes; in_S unknown", budget);
            (None, None, None)
        }
        Err(e) => unreachable!("ideal enumeration only fails on budget: {e}"),
    };
    let lattice_w = p.lattice_witness();
    let is_lattice = lattice_w.is_none();
    if let Some((a, b)) = lattice_w {
        witnesses.insert("lattice".to_string(), Witness::Pair { a, b });
    }
    let is_boolean = if is_lattice {
        match p.distributivity_witness() {
            Some((a, b, c)) => {
                witnesses.insert("boolean".to_string(), Witness::Triple { a, b, c });
                false
            }
            None => true,
        }
    } else {
        let (a, b) = lattice_w.expect("not a lattice");
        witnesses.insert("boolean".to_string(), Witness::Pair { a, b });
        false
    };
    ClassReport {
        elements: p.size(),
        in_r: r.holds,
        in_s,
        in_t: t.holds,
        is_lattice,
        is_boolean,
        ideal_count,
        selective_count,
        witnesses,
    }
}
