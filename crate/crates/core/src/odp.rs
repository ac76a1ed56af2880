//! The symmetric-difference operation and its axioms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{OdpError, Result};
use crate::poset::FinOrthoPoset;
use crate::report::{Axiom, CheckOptions, ViolationReport, WitnessSink};

/// Total operation table `table[x * size + y] = x Δ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaTable {
    size: usize,
    table: Vec<usize>,
}

impl DeltaTable {
    pub fn new(size: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != size * size {
            return Err(OdpError::structure(format!(
                "delta table has {} entries, expected {}",
                table.len(),
                size * size
            )));
        }
        if let Some((i, &v)) = table.iter().enumerate().find(|(_, &v)| v >= size) {
            return Err(OdpError::structure(format!(
                "delta({}, {}) = {} is out of range",
                i / size,
                i % size,
                v
            )));
        }
        Ok(DeltaTable { size, table })
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let size = rows.len();
        let mut table = Vec::with_capacity(size * size);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(OdpError::structure(format!(
                    "delta row {} has {} entries, expected {}",
                    x,
                    row.len(),
                    size
                )));
            }
            table.extend_from_slice(row);
        }
        Self::new(size, table)
    }

    pub fn from_fn(size: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = (0..size)
            .flat_map(|x| (0..size).map(move |y| (x, y)))
            .map(|(x, y)| op(x, y))
            .collect();
        Self::new(size, table)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.size..(x + 1) * self.size]
    }
}

/// A finite orthoposet together with its difference table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Odp {
    pub poset: FinOrthoPoset,
    pub delta: DeltaTable,
}

impl Odp {
    pub fn new(poset: FinOrthoPoset, delta: DeltaTable) -> Result<Self> {
        if poset.size() != delta.size() {
            return Err(OdpError::SizeMismatch {
                poset: poset.size(),
                delta: delta.size(),
            });
        }
        Ok(Odp { poset, delta })
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    /// Orthoposet axioms followed by the three difference axioms.
    pub fn verify(&self, opts: &CheckOptions) -> ViolationReport {
        let mut report = self.poset.verify_orthoposet(opts);
        if report.is_empty() {
            report.merge(verify_odp(&self.poset, &self.delta, opts).expect("sizes checked"));
        }
        report
    }
}

/// Checks associativity, `x Δ 1 = 1 Δ x = x^⊥` and
/// `x, y ≤ z ⇒ x Δ y ≤ z`. Above `opts.max_elements` associativity is
/// checked on `opts.sample_triples` seeded random triples and the report is
/// marked as sampled.
pub fn verify_odp(p: &FinOrthoPoset, d: &DeltaTable, opts: &CheckOptions) -> Result<ViolationReport> {
    if p.size() != d.size() {
        return Err(OdpError::SizeMismatch {
            poset: p.size(),
            delta: d.size(),
        });
    }
    let m = p.size();
    let lim = opts.witness_limit;
    let mut report = ViolationReport::default();

    let mut assoc = WitnessSink::new(Axiom::Associative, lim);
    if m <= opts.max_elements {
        // One sink per x keeps the merged witness order lexicographic.
        let sinks: Vec<WitnessSink> = (0..m)
            .into_par_iter()
            .map(|x| {
                let mut sink = WitnessSink::new(Axiom::Associative, lim);
                let row_x = d.row(x);
                for y in 0..m {
                    let xy = row_x[y];
                    let row_y = d.row(y);
                    let row_xy = d.row(xy);
                    for z in 0..m {
                        if row_x[row_y[z]] != row_xy[z] {
                            sink.push(vec![x, y, z]);
                        }
                    }
                }
                sink
            })
            .collect();
        for s in sinks {
            assoc.absorb(s);
        }
    } else {
        log::warn!(
            "{} elements exceed the cap {}: sampling {} triples for associativity",
            m,
            opts.max_elements,
            opts.sample_triples
        );
        report.sampled = true;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut found = Vec::new();
        for _ in 0..opts.sample_triples {
            let (x, y, z) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
            if d.get(x, d.get(y, z)) != d.get(d.get(x, y), z) {
                found.push(vec![x, y, z]);
            }
        }
        found.sort();
        found.dedup();
        for w in found {
            assoc.push(w);
        }
    }
    assoc.finish_into(&mut report);

    let top = p.top();
    let mut def2 = WitnessSink::new(Axiom::TopIsComplement, lim);
    for x in 0..m {
        if d.get(x, top) != p.perp(x) || d.get(top, x) != p.perp(x) {
            def2.push(vec![x]);
        }
    }
    def2.finish_into(&mut report);

    let mut def3 = WitnessSink::new(Axiom::BoundedDifference, lim);
    let mut triples = Vec::new();
    for z in 0..m {
        let below = p.down(z);
        for x in below.ones() {
            for y in below.ones() {
                if !below.contains(d.get(x, y)) {
                    triples.push(vec![x, y, z]);
                }
            }
        }
    }
    triples.sort();
    for t in triples {
        def3.push(t);
    }
    def3.finish_into(&mut report);

    Ok(report)
}

/// Direct check of `x ≤ y ⇒ y = x ∨ (y ∧ x^⊥)`, requiring both the meet and
/// the join to exist. Needs no difference table.
pub fn check_orthomodularity(p: &FinOrthoPoset, opts: &CheckOptions) -> ViolationReport {
    let mut sink = WitnessSink::new(Axiom::Orthomodular, opts.witness_limit);
    for x in 0..p.size() {
        let px = p.perp(x);
        for y in p.up(x).ones() {
            let ok = p
                .glb(y, px)
                .and_then(|r| p.lub(x, r))
                .is_some_and(|j| j == y);
            if !ok {
                sink.push(vec![x, y]);
            }
        }
    }
    let mut report = ViolationReport::default();
    sink.finish_into(&mut report);
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaIdentities {
    /// Elements with `x Δ x ≠ 0`.
    pub self_inverse_failures: Vec<usize>,
    /// Elements with `x Δ 0 ≠ x` or `0 Δ x ≠ x`.
    pub zero_identity_failures: Vec<usize>,
    /// Informational only; commutativity is not one of the axioms.
    pub commutative: bool,
    pub first_noncommuting: Option<(usize, usize)>,
}

impl DeltaIdentities {
    pub fn identities_hold(&self) -> bool {
        self.self_inverse_failures.is_empty() && self.zero_identity_failures.is_empty()
    }
}

pub fn delta_identities_report(p: &FinOrthoPoset, d: &DeltaTable) -> DeltaIdentities {
    let m = p.size();
    let zero = p.bottom();
    let self_inverse_failures = (0..m).filter(|&x| d.get(x, x) != zero).collect();
    let zero_identity_failures = (0..m)
        .filter(|&x| d.get(x, zero) != x || d.get(zero, x) != x)
        .collect();
    let first_noncommuting = (0..m)
        .flat_map(|x| (x + 1..m).map(move |y| (x, y)))
        .find(|&(x, y)| d.get(x, y) != d.get(y, x));
    DeltaIdentities {
        self_inverse_failures,
        zero_identity_failures,
        commutative: first_noncommuting.is_none(),
        first_noncommuting,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FinOrthoPoset {
        FinOrthoPoset::from_fn(4, |x, y| x & !y == 0, vec![3, 2, 1, 0]).unwrap()
    }

    #[test]
    fn set_difference_on_diamond_is_an_odp() {
        let d = DeltaTable::from_fn(4, |x, y| x ^ y).unwrap();
        let r = verify_odp(&diamond(), &d, &CheckOptions::default()).unwrap();
        assert!(r.is_empty(), "{}", r);
        assert!(check_orthomodularity(&diamond(), &CheckOptions::default()).is_empty());
    }

    #[test]
    fn join_as_delta_breaks_def2() {
        let d = DeltaTable::from_fn(4, |x, y| x | y).unwrap();
        let r = verify_odp(&diamond(), &d, &CheckOptions::default()).unwrap();
        // {1} Δ Ω = Ω ≠ {2}; ∅ Δ Ω = Ω ≠ ∅^⊥ holds, so the first witness is {1}.
        assert_eq!(r.first_witness(Axiom::TopIsComplement), Some(&[1][..]));
        assert!(r.failure(Axiom::Associative).is_none());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let d = DeltaTable::from_fn(2, |x, y| x ^ y).unwrap();
        assert!(matches!(
            verify_odp(&diamond(), &d, &CheckOptions::default()),
            Err(OdpError::SizeMismatch { poset: 4, delta: 2 })
        ));
        assert!(DeltaTable::new(2, vec![0, 1, 1]).is_err());
        assert!(DeltaTable::new(2, vec![0, 1, 1, 2]).is_err());
    }

    #[test]
    fn sampled_associativity_is_marked() {
        let opts = CheckOptions {
            max_elements: 2,
            sample_triples: 500,
            ..CheckOptions::default()
        };
        let d = DeltaTable::from_fn(4, |x, y| x ^ y).unwrap();
        let r = verify_odp(&diamond(), &d, &opts).unwrap();
        assert!(r.sampled && r.is_empty());
        // x Δ y := x - y (set difference) is not associative.
        let bad = DeltaTable::from_fn(4, |x, y| x & !y).unwrap();
        let r = verify_odp(&diamond(), &bad, &opts).unwrap();
        assert!(r.failure(Axiom::Associative).is_some());
    }

    #[test]
    fn benzene_ring_is_not_orthomodular() {
        // 0 < a < b < 1 and 0 < b' < a' < 1 with a = 1, b = 2, b' = 3, a' = 4.
        let below = [(0, 1), (1, 2), (0, 3), (3, 4)];
        let rel: Vec<(usize, usize)> = below.to_vec();
        let rows = crate::poset::transitive_closure(6, &{
            let mut r = rel;
            for x in 0..5 {
                r.push((x, 5));
            }
            r
        });
        let p = FinOrthoPoset::from_fn(6, |x, y| rows[x].contains(y), vec![5, 4, 3, 2, 1, 0]).unwrap();
        assert!(p.verify_orthoposet(&CheckOptions::default()).is_empty());
        let r = check_orthomodularity(&p, &CheckOptions::default());
        assert_eq!(r.first_witness(Axiom::Orthomodular), Some(&[1, 2][..]));
    }

    #[test]
    fn identities_on_chain() {
        let p = FinOrthoPoset::from_fn(2, |x, y| x <= y, vec![1, 0]).unwrap();
        let d = DeltaTable::from_fn(2, |x, y| x ^ y).unwrap();
        let ids = delta_identities_report(&p, &d);
        assert!(ids.identities_hold());
        assert!(ids.commutative);
        assert_eq!(d.get(1, 1), 0);
    }
}
