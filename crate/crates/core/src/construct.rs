//! Example generators: power sets, even-cardinality families, products,
//! Δ-closed set families, and the set representation over selective ideals.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{OdpError, Result};
use crate::frink::enumerate_maximal_ideals;
use crate::odp::{DeltaTable, Odp};
use crate::poset::{ElemSet, FinOrthoPoset};

/// Largest structure any generator builds.
pub const MAX_GENERATED_ELEMENTS: usize = 4096;

/// Universe sizes are bounded by the bitmask width.
pub const MAX_UNIVERSE: usize = 63;

/// A family of subsets of `{0..n-1}` stored as bitmasks, sorted ascending
/// and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetFamily {
    universe: usize,
    members: Vec<u64>,
}

pub fn universe_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `{0,2}` style label for a subset.
pub fn set_label(mask: u64) -> String {
    let parts: Vec<String> = (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", parts.join(","))
}

impl SetFamily {
    pub fn new(universe: usize, mut members: Vec<u64>) -> Result<Self> {
        if universe == 0 || universe > MAX_UNIVERSE {
            return Err(OdpError::structure(format!(
                "universe size {} outside 1..={}",
                universe, MAX_UNIVERSE
            )));
        }
        let full = universe_mask(universe);
        if let Some(bad) = members.iter().find(|&&m| m & !full != 0) {
            return Err(OdpError::structure(format!(
                "subset {:#b} exceeds the universe of size {}",
                bad, universe
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(SetFamily { universe, members })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn full(&self) -> u64 {
        universe_mask(self.universe)
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.members.binary_search(&mask).ok()
    }

    pub fn is_delta_closed(&self) -> bool {
        self.members
            .iter()
            .all(|&a| self.members.iter().all(|&b| self.index_of(a ^ b).is_some()))
    }

    /// Induced structure: inclusion, set complement, symmetric difference.
    /// Fails when the family is not closed under complement or Δ.
    pub fn to_odp(&self) -> Result<Odp> {
        let m = self.members.len();
        if m > MAX_GENERATED_ELEMENTS {
            return Err(OdpError::TooLarge {
                size: m,
                cap: MAX_GENERATED_ELEMENTS,
            });
        }
        let full = self.full();
        let lookup: HashMap<u64, usize> =
            self.members.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let perp = self
            .members
            .iter()
            .map(|&s| {
                lookup.get(&(full ^ s)).copied().ok_or_else(|| {
                    OdpError::structure(format!(
                        "family is not closed under complement: {} is missing",
                        set_label(full ^ s)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = Vec::with_capacity(m * m);
        for &a in &self.members {
            for &b in &self.members {
                let idx = lookup.get(&(a ^ b)).copied().ok_or_else(|| {
                    OdpError::structure(format!(
                        "family is not closed under symmetric difference: {} is missing",
                        set_label(a ^ b)
                    ))
                })?;
                table.push(idx);
            }
        }
        let members = &self.members;
        let poset = FinOrthoPoset::from_fn(m, |x, y| members[x] & !members[y] == 0, perp)?
            .with_labels(members.iter().map(|&s| set_label(s)).collect())?;
        Odp::new(poset, DeltaTable::new(m, table)?)
    }
}

/// All subsets of an `n`-set.
pub fn powerset_family(n: usize) -> Result<SetFamily> {
    if n == 0 || (1usize << n.min(63)) > MAX_GENERATED_ELEMENTS {
        return Err(OdpError::TooLarge {
            size: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
            cap: MAX_GENERATED_ELEMENTS,
        });
    }
    SetFamily::new(n, (0..1u64 << n).collect())
}

pub fn powerset_odp(n: usize) -> Result<Odp> {
    powerset_family(n)?.to_odp()
}

/// Even-cardinality subsets of a `two_k`-set.
pub fn even_sets_family(two_k: usize) -> Result<SetFamily> {
    if two_k == 0 || two_k % 2 == 1 {
        return Err(OdpError::Precondition(format!(
            "even_sets needs an even universe size >= 2, got {}",
            two_k
        )));
    }
    if (1usize << (two_k - 1).min(63)) > MAX_GENERATED_ELEMENTS {
        return Err(OdpError::TooLarge {
            size: 1usize.checked_shl(two_k as u32 - 1).unwrap_or(usize::MAX),
            cap: MAX_GENERATED_ELEMENTS,
        });
    }
    SetFamily::new(
        two_k,
        (0..1u64 << two_k).filter(|s| s.count_ones() % 2 == 0).collect(),
    )
}

pub fn even_sets_odp(two_k: usize) -> Result<Odp> {
    even_sets_family(two_k)?.to_odp()
}

/// Cartesian product with componentwise order, complement and Δ. The pair
/// `(i, j)` gets index `i * |b| + j`.
pub fn product_odp(a: &Odp, b: &Odp) -> Result<Odp> {
    let (ma, mb) = (a.size(), b.size());
    let m = ma
        .checked_mul(mb)
        .filter(|&m| m <= MAX_GENERATED_ELEMENTS)
        .ok_or(OdpError::TooLarge {
            size: ma.saturating_mul(mb),
            cap: MAX_GENERATED_ELEMENTS,
        })?;
    let split = |x: usize| (x / mb, x % mb);
    let pa = &a.poset;
    let pb = &b.poset;
    let perp = (0..m)
        .map(|x| {
            let (i, j) = split(x);
            pa.perp(i) * mb + pb.perp(j)
        })
        .collect();
    let labels = (0..m)
        .map(|x| {
            let (i, j) = split(x);
            format!("({},{})", pa.label(i), pb.label(j))
        })
        .collect();
    let leq: Vec<Vec<bool>> = (0..m)
        .map(|x| {
            let (i, j) = split(x);
            (0..m)
                .map(|y| {
                    let (k, l) = split(y);
                    pa.leq(i, k) && pb.leq(j, l)
                })
                .collect()
        })
        .collect();
    let bottom = pa.bottom() * mb + pb.bottom();
    let top = pa.top() * mb + pb.top();
    let poset = FinOrthoPoset::with_bounds(&leq, perp, bottom, top)?.with_labels(labels)?;
    let delta = DeltaTable::from_fn(m, |x, y| {
        let (i, j) = split(x);
        let (k, l) = split(y);
        a.delta.get(i, k) * mb + b.delta.get(j, l)
    })?;
    Odp::new(poset, delta)
}

/// Linear span over GF(2) of `vectors`, sorted; `None` once it would exceed
/// `cap` members.
fn span(vectors: impl IntoIterator<Item = u64>, cap: usize) -> Option<Vec<u64>> {
    let mut group = vec![0u64];
    let mut present: BTreeSet<u64> = BTreeSet::from([0]);
    for v in vectors {
        if present.contains(&v) {
            continue;
        }
        if group.len() * 2 > cap {
            return None;
        }
        let shifted: Vec<u64> = group.iter().map(|&g| g ^ v).collect();
        for s in shifted {
            present.insert(s);
            group.push(s);
        }
    }
    Some(present.into_iter().collect())
}

/// Least Δ-closed family containing the generators and the universe.
pub fn delta_closure_family(n: usize, generators: &[u64]) -> Result<SetFamily> {
    if n == 0 || n > MAX_UNIVERSE {
        return Err(OdpError::structure(format!(
            "universe size {} outside 1..={}",
            n, MAX_UNIVERSE
        )));
    }
    let full = universe_mask(n);
    if let Some(bad) = generators.iter().find(|&&g| g & !full != 0) {
        return Err(OdpError::structure(format!(
            "generator {:#b} exceeds the universe of size {}",
            bad, n
        )));
    }
    let group = span(generators.iter().copied().chain([full]), MAX_GENERATED_ELEMENTS).ok_or(
        OdpError::TooLarge {
            size: MAX_GENERATED_ELEMENTS * 2,
            cap: MAX_GENERATED_ELEMENTS,
        },
    )?;
    SetFamily::new(n, group)
}

/// Largest universe accepted by [`enumerate_delta_subgroups`].
pub const MAX_SUBGROUP_UNIVERSE: usize = 5;

/// Every Δ-closed family of subsets of `{0..n-1}` that contains the
/// universe, ordered by size and then by member list.
pub fn enumerate_delta_subgroups(n: usize) -> Result<Vec<SetFamily>> {
    if n == 0 || n > MAX_SUBGROUP_UNIVERSE {
        return Err(OdpError::Precondition(format!(
            "subgroup enumeration supports 1 <= n <= {}, got {}",
            MAX_SUBGROUP_UNIVERSE, n
        )));
    }
    let full = universe_mask(n);
    let base = span([full], usize::MAX).expect("uncapped");
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut queue = VecDeque::from([base.clone()]);
    seen.insert(base);
    while let Some(g) = queue.pop_front() {
        for v in 0..=full {
            if g.binary_search(&v).is_ok() {
                continue;
            }
            let bigger = span(g.iter().copied().chain([v]), usize::MAX).expect("uncapped");
            if seen.insert(bigger.clone()) {
                queue.push_back(bigger);
            }
        }
    }
    let mut out: Vec<Vec<u64>> = seen.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.into_iter().map(|g| SetFamily::new(n, g)).collect()
}

/// Points are the selective maximal Frink ideals; element `a` maps to the
/// points whose ideal does not contain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    /// Member sets of the selective maximal ideals, in canonical order.
    pub points: Vec<ElemSet>,
    /// `embedding[a]` is a set over point indices.
    pub embedding: Vec<ElemSet>,
    pub order_embedding: bool,
    pub perp_ok: bool,
    pub delta_ok: bool,
}

impl Representation {
    pub fn all_ok(&self) -> bool {
        self.order_embedding && self.perp_ok && self.delta_ok
    }

    pub fn embedding_bitstring(&self, a: usize) -> String {
        (0..self.points.len())
            .map(|q| if self.embedding[a].contains(q) { '1' } else { '0' })
            .collect()
    }
}

pub fn representation(p: &FinOrthoPoset, d: &DeltaTable, node_budget: u64) -> Result<Representation> {
    let ideals = enumerate_maximal_ideals(p, node_budget)?;
    let points: Vec<ElemSet> = ideals
        .iter()
        .filter(|i| crate::frink::is_selective(p, i.members()))
        .map(|i| i.members().clone())
        .collect();
    let q = points.len();
    let m = p.size();
    let embedding: Vec<ElemSet> = (0..m)
        .map(|a| {
            let mut s = ElemSet::with_capacity(q);
            for (k, pt) in points.iter().enumerate() {
                if !pt.contains(a) {
                    s.insert(k);
                }
            }
            s
        })
        .collect();
    if q == 0 {
        return Ok(Representation {
            points,
            embedding,
            order_embedding: false,
            perp_ok: false,
            delta_ok: false,
        });
    }
    let order_embedding = (0..m).all(|a| {
        (0..m).all(|b| p.leq(a, b) == embedding[a].is_subset(&embedding[b]))
    });
    let perp_ok = (0..m).all(|a| {
        let mut comp = embedding[a].clone();
        comp.toggle_range(..);
        embedding[p.perp(a)] == comp
    });
    let delta_ok = (0..m).all(|a| {
        (0..m).all(|b| {
            let mut sd = embedding[a].clone();
            sd.symmetric_difference_with(&embedding[b]);
            embedding[d.get(a, b)] == sd
        })
    });
    Ok(Representation {
        points,
        embedding,
        order_embedding,
        perp_ok,
        delta_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frink::DEFAULT_NODE_BUDGET;
    use crate::report::CheckOptions;

    #[test]
    fn generator_sizes() {
        assert_eq!(powerset_odp(1).unwrap().size(), 2);
        assert_eq!(powerset_odp(2).unwrap().size(), 4);
        assert_eq!(even_sets_odp(2).unwrap().size(), 2);
        assert_eq!(even_sets_odp(4).unwrap().size(), 8);
        assert_eq!(even_sets_odp(6).unwrap().size(), 32);
        assert!(even_sets_odp(5).is_err());
        assert!(even_sets_odp(0).is_err());
        assert!(powerset_odp(0).is_err());
        assert!(powerset_odp(40).is_err());
    }

    #[test]
    fn generated_structures_verify() {
        let opts = CheckOptions::default();
        for odp in [
            powerset_odp(1).unwrap(),
            powerset_odp(2).unwrap(),
            even_sets_odp(4).unwrap(),
            product_odp(&powerset_odp(1).unwrap(), &powerset_odp(1).unwrap()).unwrap(),
        ] {
            assert!(odp.verify(&opts).is_empty());
        }
    }

    #[test]
    fn chain_times_chain_is_the_diamond() {
        let c = powerset_odp(1).unwrap();
        let prod = product_odp(&c, &c).unwrap();
        let diamond = powerset_odp(2).unwrap();
        assert_eq!(prod.poset.leq_matrix(), diamond.poset.leq_matrix());
        assert_eq!(prod.poset.perp_map(), diamond.poset.perp_map());
        assert_eq!(prod.delta, diamond.delta);
    }

    #[test]
    fn delta_closure_examples() {
        let f = delta_closure_family(4, &[0b0101]).unwrap();
        assert_eq!(f.members(), &[0b0000, 0b0101, 0b1010, 0b1111]);
        assert_eq!(delta_closure_family(3, &[]).unwrap().members(), &[0, 7]);
        assert_eq!(delta_closure_family(3, &[1, 2, 4]).unwrap().len(), 8);
        assert!(delta_closure_family(2, &[4]).is_err());
    }

    #[test]
    fn incomplete_families_are_rejected() {
        let not_closed = SetFamily::new(2, vec![0, 1, 3]).unwrap();
        assert!(matches!(not_closed.to_odp(), Err(OdpError::Structure(_))));
        let no_delta = SetFamily::new(3, vec![0, 1, 6, 7, 3, 4]).unwrap();
        assert!(matches!(no_delta.to_odp(), Err(OdpError::Structure(_))));
    }

    #[test]
    fn small_subgroup_counts() {
        assert_eq!(enumerate_delta_subgroups(1).unwrap().len(), 1);
        assert_eq!(enumerate_delta_subgroups(2).unwrap().len(), 2);
        assert!(enumerate_delta_subgroups(6).is_err());
    }

    #[test]
    fn representation_examples() {
        let chain = powerset_odp(1).unwrap();
        let r = representation(&chain.poset, &chain.delta, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.points.len(), 1);
        assert_eq!(r.embedding_bitstring(0), "0");
        assert_eq!(r.embedding_bitstring(1), "1");
        assert!(r.all_ok());

        let b = powerset_odp(2).unwrap();
        let r = representation(&b.poset, &b.delta, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.points.len(), 2);
        // {0} lies outside the second point {∅,{1}} only.
        assert_eq!(r.embedding_bitstring(1), "01");
        assert_eq!(r.embedding_bitstring(2), "10");
        assert!(r.all_ok());

        let e = even_sets_odp(4).unwrap();
        let r = representation(&e.poset, &e.delta, DEFAULT_NODE_BUDGET).unwrap();
        assert!(r.points.is_empty());
        assert!(!r.order_embedding && !r.perp_ok && !r.delta_ok);
    }
}
