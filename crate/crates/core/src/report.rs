//! Violation reports shared by the order and difference-operation checkers.

use std::fmt;

use serde::Serialize;

/// Default number of witnesses retained per axiom.
pub const DEFAULT_WITNESS_LIMIT: usize = 16;

/// Default element cap above which cubic checks warn or switch to sampling.
pub const DEFAULT_MAX_ELEMENTS: usize = 512;

/// Default number of random triples drawn by sampled associativity checks.
pub const DEFAULT_SAMPLE_TRIPLES: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    Reflexive,
    Antisymmetric,
    Transitive,
    BottomLeast,
    TopGreatest,
    PerpInvolution,
    PerpAntitone,
    MeetWithComplement,
    JoinWithComplement,
    /// x Δ (y Δ z) = (x Δ y) Δ z
    Associative,
    /// x Δ 1 = 1 Δ x = x^⊥
    TopIsComplement,
    /// x ≤ z, y ≤ z ⇒ x Δ y ≤ z
    BoundedDifference,
    /// x ≤ y ⇒ y = x ∨ (y ∧ x^⊥)
    Orthomodular,
    /// x Δ x = 0
    SelfInverse,
    /// x Δ 0 = 0 Δ x = x
    ZeroIdentity,
}

impl Axiom {
    pub fn describe(self) -> &'static str {
        match self {
            Axiom::Reflexive => "x <= x",
            Axiom::Antisymmetric => "x <= y and y <= x imply x = y",
            Axiom::Transitive => "x <= y and y <= z imply x <= z",
            Axiom::BottomLeast => "bottom <= x",
            Axiom::TopGreatest => "x <= top",
            Axiom::PerpInvolution => "perp(perp(x)) = x",
            Axiom::PerpAntitone => "x <= y implies perp(y) <= perp(x)",
            Axiom::MeetWithComplement => "x meet perp(x) = 0",
            Axiom::JoinWithComplement => "x join perp(x) = 1",
            Axiom::Associative => "x D (y D z) = (x D y) D z",
            Axiom::TopIsComplement => "x D 1 = 1 D x = perp(x)",
            Axiom::BoundedDifference => "x <= z and y <= z imply x D y <= z",
            Axiom::Orthomodular => "x <= y implies y = x join (y meet perp(x))",
            Axiom::SelfInverse => "x D x = 0",
            Axiom::ZeroIdentity => "x D 0 = 0 D x = x",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// All witnesses found for one axiom. `witnesses` holds the lexicographically
/// first tuples (up to the configured limit); `total` counts every failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub total: usize,
    pub witnesses: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ViolationReport {
    pub failures: Vec<AxiomFailure>,
    /// Set when part of the check ran on randomly sampled tuples.
    pub sampled: bool,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failure(&self, axiom: Axiom) -> Option<&AxiomFailure> {
        self.failures.iter().find(|f| f.axiom == axiom)
    }

    pub fn first_witness(&self, axiom: Axiom) -> Option<&[usize]> {
        self.failure(axiom)
            .and_then(|f| f.witnesses.first())
            .map(Vec::as_slice)
    }

    pub fn merge(&mut self, other: ViolationReport) {
        self.failures.extend(other.failures);
        self.sampled |= other.sampled;
    }
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            writeln!(f, "ok")?;
        }
        for failure in &self.failures {
            writeln!(
                f,
                "violation {} ({}): {} failing tuple(s)",
                failure.axiom,
                failure.axiom.describe(),
                failure.total
            )?;
            for w in &failure.witnesses {
                let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                writeln!(f, "  witness ({})", parts.join(", "))?;
            }
        }
        if self.sampled {
            writeln!(f, "note: associativity was checked on sampled triples")?;
        }
        Ok(())
    }
}

/// Collects witnesses for one axiom while a scan runs in lexicographic order.
#[derive(Debug)]
pub(crate) struct WitnessSink {
    axiom: Axiom,
    limit: Option<usize>,
    total: usize,
    witnesses: Vec<Vec<usize>>,
}

impl WitnessSink {
    pub(crate) fn new(axiom: Axiom, limit: Option<usize>) -> Self {
        WitnessSink {
            axiom,
            limit,
            total: 0,
            witnesses: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, witness: Vec<usize>) {
        self.total += 1;
        if self.limit.is_none_or(|l| self.witnesses.len() < l) {
            self.witnesses.push(witness);
        }
    }

    pub(crate) fn absorb(&mut self, other: WitnessSink) {
        self.total += other.total;
        for w in other.witnesses {
            if self.limit.is_none_or(|l| self.witnesses.len() < l) {
                self.witnesses.push(w);
            }
        }
    }

    pub(crate) fn finish_into(self, report: &mut ViolationReport) {
        if self.total > 0 {
            report.failures.push(AxiomFailure {
                axiom: self.axiom,
                total: self.total,
                witnesses: self.witnesses,
            });
        }
    }
}

/// Knobs shared by the axiom checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// `None` keeps every witness.
    pub witness_limit: Option<usize>,
    pub max_elements: usize,
    pub sample_triples: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            witness_limit: Some(DEFAULT_WITNESS_LIMIT),
            max_elements: DEFAULT_MAX_ELEMENTS,
            sample_triples: DEFAULT_SAMPLE_TRIPLES,
            seed: 0,
        }
    }
}
