//! The corpus-wide property suite. Each criterion is a pass/fail check with
//! a one-line detail; brute-force oracles used here are deliberately
//! written against raw subsets and bitmasks rather than the library's own
//! search code.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classes::{classify, compatible_unchecked, ClassReport, Witness};
use crate::construct::{even_sets_odp, powerset_odp, representation};
use crate::corpus::{frozen_corpus, CorpusInstance};
use crate::epset::{
    build_r_example, build_t_example, ClassId, CosetFamily, EPSet, Membership, RCheck, DEFAULT_MAX_PAIRS,
};
use crate::error::Result;
use crate::frink::{
    delta_closure_witness, enumerate_maximal_ideals, extend_to_maximal, is_frink_ideal, is_maximal,
    is_selective, DEFAULT_NODE_BUDGET,
};
use crate::odp::{check_orthomodularity, delta_identities_report, verify_odp};
use crate::poset::{ElemSet, FinOrthoPoset};
use crate::report::CheckOptions;

/// Instances up to this size get the exhaustive subset oracle.
pub const SMALL_INSTANCE: usize = 12;
/// Truncation length for the pointwise EPSet oracle.
pub const EPSET_TRUNCATION: usize = 600;
pub const EPSET_RANDOM_PAIRS: usize = 1000;
pub const EPSET_MAX_PERIOD: usize = 12;
pub const EPSET_MAX_THRESHOLD: usize = 20;
/// Fragment bounds for the lower-bound oracle.
pub const LOWER_BOUND_BOUNDS: [u64; 3] = [12, 24, 36];

/// Wall-clock limits, in seconds, per criterion id (index 0 unused).
pub const TIME_LIMITS: [Option<u64>; 14] = [
    None,
    Some(60),
    None,
    None,
    Some(120),
    None,
    None,
    None,
    Some(60),
    None,
    None,
    None,
    Some(120),
    None,
];

pub const TITLES: [&str; 14] = [
    "",
    "axiom suites on the corpus",
    "orthomodularity",
    "x Δ x = 0 and x Δ 0 = x",
    "maximal ideals vs subset oracle",
    "selective ⇒ maximal; extension to maximal",
    "ideals closed under Δ",
    "class chain R ⇒ S ⇒ T",
    "infinite examples: R proven, T witnesses",
    "T-lattices are Boolean",
    "set representation of R instances",
    "compatibility iff meet exists in R",
    "EPSet oracle equivalence",
    "classification goldens",
];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub node_budget: u64,
    pub seed: u64,
    pub max_pairs: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            seed: 0,
            max_pairs: DEFAULT_MAX_PAIRS,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} [{:>2}] {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Corpus plus lazily computed per-instance classification.
pub struct Suite {
    config: SuiteConfig,
    corpus: Vec<CorpusInstance>,
    classes: OnceLock<Vec<ClassReport>>,
}

type Outcome = std::result::Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

impl Suite {
    pub fn new(config: SuiteConfig) -> Result<Self> {
        Ok(Suite {
            config,
            corpus: frozen_corpus()?,
            classes: OnceLock::new(),
        })
    }

    pub fn corpus(&self) -> &[CorpusInstance] {
        &self.corpus
    }

    pub fn classes(&self) -> &[ClassReport] {
        self.classes.get_or_init(|| {
            self.corpus
                .par_iter()
                .map(|c| classify(&c.odp.poset, self.config.node_budget))
                .collect()
        })
    }

    pub fn run(&self, id: usize) -> CriterionResult {
        let start = Instant::now();
        let outcome = match id {
            1 => self.axioms(),
            2 => self.orthomodular(),
            3 => self.identities(),
            4 => self.ideals_vs_oracle(),
            5 => self.selective_and_extension(),
            6 => self.delta_closed_ideals(),
            7 => self.class_chain(),
            8 => self.infinite_examples(),
            9 => self.lattice_collapse(),
            10 => self.representations(),
            11 => self.compatibility(),
            12 => self.epset_oracles(),
            13 => self.goldens(),
            _ => Err(format!("no criterion {}", id)),
        };
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if let Some(limit) = TIME_LIMITS.get(id).copied().flatten() {
            if elapsed > Duration::from_secs(limit) {
                passed = false;
                detail = format!("{}; exceeded {}s", detail, limit);
            }
        }
        CriterionResult {
            id,
            title: TITLES.get(id).copied().unwrap_or("unknown"),
            passed,
            detail,
            elapsed,
        }
    }

    pub fn run_all(&self) -> Vec<CriterionResult> {
        (1..=13).map(|id| self.run(id)).collect()
    }

    fn small(&self) -> impl Iterator<Item = &CorpusInstance> {
        self.corpus.iter().filter(|c| c.size() <= SMALL_INSTANCE)
    }

    fn axioms(&self) -> Outcome {
        let opts = CheckOptions::default();
        let bad: Vec<String> = self
            .corpus
            .par_iter()
            .filter_map(|c| {
                let mut rep = c.odp.poset.verify_orthoposet(&opts);
                if rep.is_empty() {
                    rep = verify_odp(&c.odp.poset, &c.odp.delta, &opts).expect("sizes match");
                }
                (!rep.is_empty() || rep.sampled).then(|| format!("{}: {}", c.name, rep))
            })
            .collect();
        check(
            bad.is_empty(),
            format!("{} instances, {} failing {:?}", self.corpus.len(), bad.len(), first(&bad)),
        )
    }

    fn orthomodular(&self) -> Outcome {
        let opts = CheckOptions::default();
        let bad: Vec<String> = self
            .corpus
            .par_iter()
            .filter_map(|c| {
                let rep = check_orthomodularity(&c.odp.poset, &opts);
                (!rep.is_empty()).then(|| format!("{}: {}", c.name, rep))
            })
            .collect();
        check(bad.is_empty(), format!("{} failing {:?}", bad.len(), first(&bad)))
    }

    fn identities(&self) -> Outcome {
        let bad: Vec<&str> = self
            .corpus
            .par_iter()
            .filter(|c| !delta_identities_report(&c.odp.poset, &c.odp.delta).identities_hold())
            .map(|c| c.name.as_str())
            .collect();
        let commutative = self
            .corpus
            .iter()
            .filter(|c| delta_identities_report(&c.odp.poset, &c.odp.delta).commutative)
            .count();
        check(
            bad.is_empty(),
            format!(
                "{} failing {:?}; Δ commutative on {}/{}",
                bad.len(),
                bad.first(),
                commutative,
                self.corpus.len()
            ),
        )
    }

    fn ideals_vs_oracle(&self) -> Outcome {
        let small: Vec<&CorpusInstance> = self.small().collect();
        let bad: Vec<String> = small
            .par_iter()
            .filter_map(|c| {
                let p = &c.odp.poset;
                let expected = oracle_maximal_ideals(p);
                let got: Vec<ElemSet> = match enumerate_maximal_ideals(p, self.config.node_budget) {
                    Ok(v) => v.into_iter().map(|i| i.members().clone()).collect(),
                    Err(e) => return Some(format!("{}: {}", c.name, e)),
                };
                (got != expected).then(|| {
                    format!("{}: {} ideals, oracle {}", c.name, got.len(), expected.len())
                })
            })
            .collect();
        check(
            bad.is_empty(),
            format!("{} instances ≤ {} elements, {} mismatches {:?}", small.len(), SMALL_INSTANCE, bad.len(), first(&bad)),
        )
    }

    fn selective_and_extension(&self) -> Outcome {
        let budget = self.config.node_budget;
        let results: Vec<(usize, usize, Vec<String>)> = self
            .corpus
            .par_iter()
            .map(|c| {
                let p = &c.odp.poset;
                let mut errors = Vec::new();
                let mut selective_checked = 0;
                let mut extended = 0;
                let mut candidates: Vec<ElemSet> = match enumerate_maximal_ideals(p, budget) {
                    Ok(v) => v.into_iter().map(|i| i.members().clone()).collect(),
                    Err(e) => {
                        errors.push(format!("{}: {}", c.name, e));
                        Vec::new()
                    }
                };
                let all_proper = if c.size() <= SMALL_INSTANCE {
                    oracle_proper_ideals(p)
                } else {
                    Vec::new()
                };
                candidates.extend(all_proper.iter().cloned());
                for i in candidates.iter().filter(|i| is_selective(p, i)) {
                    selective_checked += 1;
                    if !matches!(is_maximal(p, i), Ok(true)) {
                        errors.push(format!("{}: selective ideal {:?} not maximal", c.name, ones(i)));
                    }
                }
                for i in &all_proper {
                    extended += 1;
                    match extend_to_maximal(p, i) {
                        Ok(m) if m.members().is_superset(i) && matches!(is_maximal(p, m.members()), Ok(true)) => {}
                        Ok(m) => errors.push(format!(
                            "{}: extension of {:?} gave {:?}",
                            c.name,
                            ones(i),
                            m.indices()
                        )),
                        Err(e) => errors.push(format!("{}: extension of {:?}: {}", c.name, ones(i), e)),
                    }
                }
                (selective_checked, extended, errors)
            })
            .collect();
        let selective: usize = results.iter().map(|r| r.0).sum();
        let extended: usize = results.iter().map(|r| r.1).sum();
        let errors: Vec<String> = results.into_iter().flat_map(|r| r.2).collect();
        check(
            errors.is_empty(),
            format!(
                "{} selective ideals maximal, {} proper ideals extended, {} errors {:?}",
                selective,
                extended,
                errors.len(),
                first(&errors)
            ),
        )
    }

    fn delta_closed_ideals(&self) -> Outcome {
        let budget = self.config.node_budget;
        let results: Vec<(usize, Option<String>)> = self
            .corpus
            .par_iter()
            .map(|c| {
                let p = &c.odp.poset;
                let mut ideals: Vec<ElemSet> = match enumerate_maximal_ideals(p, budget) {
                    Ok(v) => v.into_iter().map(|i| i.members().clone()).collect(),
                    Err(e) => return (0, Some(format!("{}: {}", c.name, e))),
                };
                if c.size() <= SMALL_INSTANCE {
                    ideals.extend(oracle_proper_ideals(p));
                }
                let bad = ideals.iter().find_map(|i| {
                    delta_closure_witness(&c.odp.delta, i)
                        .map(|(x, y)| format!("{}: {:?} has {} Δ {} outside", c.name, ones(i), x, y))
                });
                (ideals.len(), bad)
            })
            .collect();
        let total: usize = results.iter().map(|r| r.0).sum();
        let bad: Vec<String> = results.into_iter().filter_map(|r| r.1).collect();
        check(bad.is_empty(), format!("{} ideals checked, {} failing {:?}", total, bad.len(), first(&bad)))
    }

    fn class_chain(&self) -> Outcome {
        let classes = self.classes();
        let unknown = classes.iter().filter(|r| r.in_s.is_none()).count();
        let bad: Vec<&str> = self
            .corpus
            .iter()
            .zip(classes)
            .filter(|(_, r)| !r.chain_holds())
            .map(|(c, _)| c.name.as_str())
            .collect();
        let count = |f: fn(&ClassReport) -> bool| classes.iter().filter(|r| f(r)).count();
        check(
            bad.is_empty() && unknown == 0,
            format!(
                "R {} / S {} / T {} of {}; {} violations {:?}; {} with S unknown",
                count(|r| r.in_r),
                count(|r| r.in_s == Some(true)),
                count(|r| r.in_t),
                classes.len(),
                bad.len(),
                bad.first(),
                unknown
            ),
        )
    }

    fn infinite_examples(&self) -> Outcome {
        let r = build_r_example();
        let t = build_t_example();
        let mut parts = Vec::new();
        let mut ok = true;

        let r_check = r.class_r_check();
        ok &= r_check == RCheck::Proven;
        parts.push(format!("R-family ℛ check {:?}", r_check));

        let a1 = Membership {
            base_index: 1,
            exceptions: Vec::new(),
        };
        let a2 = Membership {
            base_index: 2,
            exceptions: Vec::new(),
        };
        match t.class_witness_search(12, ClassId::R, self.config.max_pairs) {
            Ok(Some(w)) => {
                let hit = w.a == a1 && w.b == a2;
                ok &= hit;
                parts.push(format!(
                    "T-family ℛ witness ({}, {}){}",
                    t.describe(&w.a),
                    t.describe(&w.b),
                    if hit { "" } else { " expected (A1, A2)" }
                ));
            }
            other => {
                ok = false;
                parts.push(format!("T-family ℛ search at B=12: {:?}", other));
            }
        }
        match t.class_witness_search(30, ClassId::T, self.config.max_pairs) {
            Ok(None) => parts.push("T-family 𝒯 search at B=30: none".into()),
            Ok(Some(w)) => {
                ok = false;
                parts.push(format!(
                    "T-family 𝒯 search at B=30 found ({}, {}), expected none",
                    t.describe(&w.a),
                    t.describe(&w.b)
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("T-family 𝒯 search at B=30: {}", e));
            }
        }
        check(ok, parts.join("; "))
    }

    fn lattice_collapse(&self) -> Outcome {
        let classes = self.classes();
        let relevant = classes.iter().filter(|r| r.in_t && r.is_lattice).count();
        let bad: Vec<&str> = self
            .corpus
            .iter()
            .zip(classes)
            .filter(|(_, r)| r.in_t && r.is_lattice && !r.is_boolean)
            .map(|(c, _)| c.name.as_str())
            .collect();
        check(bad.is_empty(), format!("{} 𝒯-lattices, {} not Boolean {:?}", relevant, bad.len(), bad.first()))
    }

    fn representations(&self) -> Outcome {
        let classes = self.classes();
        let budget = self.config.node_budget;
        let targets: Vec<&CorpusInstance> = self
            .corpus
            .iter()
            .zip(classes)
            .filter(|(_, r)| r.in_r)
            .map(|(c, _)| c)
            .collect();
        let bad: Vec<String> = targets
            .par_iter()
            .filter_map(|c| match representation(&c.odp.poset, &c.odp.delta, budget) {
                Ok(rep) if rep.all_ok() => None,
                Ok(rep) => Some(format!(
                    "{}: order {} perp {} delta {}",
                    c.name, rep.order_embedding, rep.perp_ok, rep.delta_ok
                )),
                Err(e) => Some(format!("{}: {}", c.name, e)),
            })
            .collect();
        let e4 = even_sets_odp(4).expect("even(4)");
        let q_empty = representation(&e4.poset, &e4.delta, budget)
            .map(|r| r.points.is_empty())
            .unwrap_or(false);
        check(
            bad.is_empty() && q_empty,
            format!(
                "{} ℛ instances, {} failing {:?}; even(4) Q empty: {}",
                targets.len(),
                bad.len(),
                first(&bad),
                q_empty
            ),
        )
    }

    fn compatibility(&self) -> Outcome {
        let classes = self.classes();
        let targets: Vec<&CorpusInstance> = self
            .corpus
            .iter()
            .zip(classes)
            .filter(|(_, r)| r.in_r)
            .map(|(c, _)| c)
            .collect();
        let pairs: usize = targets.iter().map(|c| c.size() * c.size()).sum();
        let bad: Vec<String> = targets
            .iter()
            .filter_map(|c| {
                let p = &c.odp.poset;
                let m = p.size();
                (0..m * m)
                    .into_par_iter()
                    .find_first(|&k| {
                        let (a, b) = (k / m, k % m);
                        compatible_unchecked(p, a, b) != p.glb(a, b).is_some()
                    })
                    .map(|k| format!("{}: pair ({}, {})", c.name, k / m, k % m))
            })
            .collect();
        check(
            bad.is_empty(),
            format!("{} ℛ instances, {} pairs, {} failing {:?}", targets.len(), pairs, bad.len(), first(&bad)),
        )
    }

    fn epset_oracles(&self) -> Outcome {
        let mut parts = Vec::new();
        let ops = epset_ops_vs_truncation(self.config.seed);
        let mut ok = ops.is_ok();
        parts.push(match ops {
            Ok(d) | Err(d) => d,
        });
        // With U = ℕ the fragment has 8·2^B members, so the R-family only
        // gets the smallest bound.
        let runs = LOWER_BOUND_BOUNDS
            .iter()
            .map(|&b| (build_t_example(), b))
            .chain([(build_r_example(), LOWER_BOUND_BOUNDS[0])]);
        for (fam, bound) in runs {
            let res = lower_bound_vs_fragment(&fam, bound, self.config.seed);
            ok &= res.is_ok();
            parts.push(match res {
                Ok(d) | Err(d) => d,
            });
        }
        check(ok, parts.join("; "))
    }

    fn goldens(&self) -> Outcome {
        let budget = self.config.node_budget;
        let mut errors = Vec::new();
        let e4 = classify(&even_sets_odp(4).expect("even(4)").poset, budget);
        let flags = (e4.in_r, e4.in_s, e4.in_t, e4.is_lattice, e4.is_boolean);
        if flags != (false, Some(false), false, true, false) {
            errors.push(format!("even(4) flags {:?}", flags));
        }
        if e4.ideal_count != Some(6) {
            errors.push(format!("even(4) ideal count {:?}", e4.ideal_count));
        }
        let expected = [
            ("in_R", Witness::Pair { a: 1, b: 2 }),
            ("in_T", Witness::Pair { a: 1, b: 2 }),
            (
                "in_S",
                Witness::Ideal {
                    members: "11000000".into(),
                    x: 2,
                    perp_x: 5,
                },
            ),
        ];
        for (key, w) in expected {
            if e4.witnesses.get(key) != Some(&w) {
                errors.push(format!("even(4) {} witness {:?}", key, e4.witnesses.get(key)));
            }
        }
        for n in 1..=4 {
            let rep = classify(&powerset_odp(n).expect("powerset").poset, budget);
            let all = rep.in_r && rep.in_s == Some(true) && rep.in_t && rep.is_lattice && rep.is_boolean;
            if !all || rep.ideal_count != Some(n) || !rep.witnesses.is_empty() {
                errors.push(format!("powerset({}) {:?}", n, rep));
            }
        }
        check(errors.is_empty(), format!("{} mismatches {:?}", errors.len(), first(&errors)))
    }
}

fn first(v: &[String]) -> Option<&str> {
    v.first().map(String::as_str)
}

fn ones(s: &ElemSet) -> Vec<usize> {
    s.ones().collect()
}

/// Every proper Frink ideal, straight from the definition over all 2^m
/// subsets: contains bottom, misses top, and `I^↑↓ ⊆ I`.
pub fn oracle_proper_ideals(p: &FinOrthoPoset) -> Vec<ElemSet> {
    let m = p.size();
    assert!(m <= 20, "subset oracle is exponential");
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask >> p.bottom() & 1 == 0 || mask >> p.top() & 1 == 1 {
            continue;
        }
        let mut s = FixedBitSet::with_capacity(m);
        for x in 0..m {
            s.set(x, mask >> x & 1 == 1);
        }
        // Upper cone, then its lower cone, spelled out pointwise.
        let upper: Vec<usize> = (0..m).filter(|&u| s.ones().all(|x| p.leq(x, u))).collect();
        let closed = (0..m)
            .filter(|&y| upper.iter().all(|&u| p.leq(y, u)))
            .all(|y| s.contains(y));
        if closed {
            out.push(s);
        }
    }
    out
}

/// Proper ideals not strictly contained in another proper ideal, in the
/// canonical (lexicographic member list) order.
pub fn oracle_maximal_ideals(p: &FinOrthoPoset) -> Vec<ElemSet> {
    let all = oracle_proper_ideals(p);
    let mut max: Vec<ElemSet> = all
        .iter()
        .filter(|i| !all.iter().any(|j| j != *i && j.is_superset(i)))
        .cloned()
        .collect();
    max.sort_by_key(ones);
    debug_assert!(max.iter().all(|i| is_frink_ideal(p, i)));
    max
}

fn bools_to_u128(v: &[bool]) -> u128 {
    v.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| if b { acc | 1 << i } else { acc })
}

/// Membership read straight off the stored prefix and residue table.
fn pointwise(s: &EPSet, k: usize) -> Vec<bool> {
    (0..k)
        .map(|n| match s.prefix().get(n) {
            Some(&b) => b,
            None => s.tail()[n % s.period()],
        })
        .collect()
}

/// Set operations and predicates on random pairs compared with the same
/// operations on truncated bit vectors.
pub fn epset_ops_vs_truncation(seed: u64) -> Outcome {
    let k = EPSET_TRUNCATION;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..EPSET_RANDOM_PAIRS {
        let a = EPSet::random(&mut rng, EPSET_MAX_PERIOD, EPSET_MAX_THRESHOLD);
        let b = EPSet::random(&mut rng, EPSET_MAX_PERIOD, EPSET_MAX_THRESHOLD);
        let (ta, tb) = (pointwise(&a, k), pointwise(&b, k));
        if a.truncate(k) != ta || (0..k).any(|n| a.contains(n as u64) != ta[n]) {
            failures.push(format!("trial {}: contains/truncate", trial));
        }
        let zip = |f: fn(bool, bool) -> bool| -> Vec<bool> { ta.iter().zip(&tb).map(|(&x, &y)| f(x, y)).collect() };
        let binary: [(&str, EPSet, Vec<bool>); 5] = [
            ("union", a.union(&b), zip(|x, y| x || y)),
            ("intersect", a.intersect(&b), zip(|x, y| x && y)),
            ("symdiff", a.symdiff(&b), zip(|x, y| x != y)),
            ("difference", a.difference(&b), zip(|x, y| x && !y)),
            ("complement", a.complement(), ta.iter().map(|x| !x).collect()),
        ];
        for (name, got, want) in binary {
            if pointwise(&got, k) != want {
                failures.push(format!("trial {}: {}", trial, name));
            }
        }
        let subset = ta.iter().zip(&tb).all(|(&x, &y)| !x || y);
        let empty = !ta.iter().any(|&x| x);
        // Thresholds and periods are small, so the second half of the
        // window is well inside the periodic regime.
        let finite = !ta[k / 2..].iter().any(|&x| x);
        let min = ta.iter().position(|&x| x).map(|n| n as u64);
        let preds = [
            ("is_subset", a.is_subset(&b), subset),
            ("equals", a.equals(&b), ta == tb),
            ("is_empty", a.is_empty(), empty),
            ("is_finite", a.is_finite(), finite),
            ("min_element", a.min_element() == min, true),
        ];
        for (name, got, want) in preds {
            if got != want {
                failures.push(format!("trial {}: {}", trial, name));
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{} random pairs at K={}, {} mismatches {:?}",
            EPSET_RANDOM_PAIRS,
            k,
            failures.len(),
            first(&failures)
        ),
    )
}

/// Window long enough to decide inclusion among members whose exceptions
/// lie below `bound`: every base set has period dividing 6.
fn fragment_window(fam: &CosetFamily, bound: u64) -> usize {
    let lcm = fam.base().iter().map(EPSet::period).fold(1, lcm);
    bound as usize + 2 * lcm.max(6)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Compares `has_nonzero_lower_bound` against a scan of every member
/// `D Δ F`, `F ⊆ U ∩ [0, bound)`, encoded as bitmasks over a window.
/// `S` ranges over intersections of two such members: all pairs when the
/// fragment is small, a seeded sample otherwise, plus all base pairs.
pub fn lower_bound_vs_fragment(fam: &CosetFamily, bound: u64, seed: u64) -> Outcome {
    let window = fragment_window(fam, bound);
    assert!(window <= 128, "window must fit a u128");
    let points: Vec<u64> = (0..bound).filter(|&n| fam.support().contains(n)).collect();
    let base_masks: Vec<u128> = fam.base().iter().map(|d| bools_to_u128(&d.truncate(window))).collect();
    let point_bits: Vec<u128> = points.iter().map(|&n| 1u128 << n).collect();
    let subsets = 1u64 << points.len();
    let members = fam.base().len() as u64 * subsets;
    let mask_of = |idx: u64| -> u128 {
        let (d, f) = ((idx / subsets) as usize, idx % subsets);
        let mut m = base_masks[d];
        for (k, bit) in point_bits.iter().enumerate() {
            if f >> k & 1 == 1 {
                m ^= bit;
            }
        }
        m
    };
    let membership_of = |idx: u64| -> Membership {
        let f = idx % subsets;
        Membership {
            base_index: (idx / subsets) as usize,
            exceptions: (0..points.len()).filter(|k| f >> k & 1 == 1).map(|k| points[k]).collect(),
        }
    };

    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let exhaustive = members.saturating_mul(members) <= 1 << 20;
    if exhaustive {
        for i in 0..members {
            for j in 0..members {
                pairs.push((i, j));
            }
        }
    } else {
        let samples = if bound <= 24 { 2000 } else { 200 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ bound);
        for _ in 0..samples {
            pairs.push((rng.gen_range(0..members), rng.gen_range(0..members)));
        }
        for d in 0..fam.base().len() as u64 {
            for e in 0..fam.base().len() as u64 {
                pairs.push((d * subsets, e * subsets));
            }
        }
    }
    // Distinct intersections only; the mask determines S on the window and
    // beyond it S agrees with the intersection of the two base sets.
    let mut distinct: BTreeMap<u128, (u64, u64)> = BTreeMap::new();
    for &(i, j) in &pairs {
        distinct.entry(mask_of(i) & mask_of(j)).or_insert((i, j));
    }
    let cases: Vec<(u128, u64, u64)> = distinct.into_iter().map(|(s, (i, j))| (s, i, j)).collect();

    let results: Vec<(bool, bool, Option<String>)> = cases
        .par_iter()
        .map(|&(s_mask, i, j)| {
            let s = fam.member(&membership_of(i)).intersect(&fam.member(&membership_of(j)));
            let oracle = (0..members).any(|idx| {
                let m = mask_of(idx);
                m != 0 && m & !s_mask == 0
            });
            let witness = fam.lower_bound_witness(&s);
            let procedure = fam.has_nonzero_lower_bound(&s);
            let mut err = None;
            if oracle && !procedure {
                err = Some(format!("S={} has a fragment lower bound the procedure missed", s));
            }
            if procedure {
                match &witness {
                    None => err = Some(format!("S={}: no witness returned", s)),
                    Some(w) => {
                        let x = fam.member(w);
                        let n = x.threshold().max(s.threshold()) + lcm(x.period(), s.period());
                        let (tx, ts) = (x.truncate(n), s.truncate(n));
                        let nonempty = tx.iter().any(|&b| b);
                        let below = tx.iter().zip(&ts).all(|(&a, &b)| !a || b);
                        if !nonempty || !below || fam.contains(&x).is_none() {
                            err = Some(format!("S={}: witness {} is not a nonzero member below S", s, x));
                        }
                    }
                }
            }
            (oracle, procedure, err)
        })
        .collect();
    let both = results.iter().filter(|r| r.0 && r.1).count();
    let only_procedure = results.iter().filter(|r| !r.0 && r.1).count();
    let errors: Vec<String> = results.into_iter().filter_map(|r| r.2).collect();
    check(
        errors.is_empty(),
        format!(
            "{}-family B={}: {} sets S ({}), {} both yes, {} found beyond the fragment, {} errors {:?}",
            fam.name(),
            bound,
            cases.len(),
            if exhaustive { "all pairs" } else { "sampled" },
            both,
            only_procedure,
            errors.len(),
            first(&errors)
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_counts_on_small_cases() {
        let p = even_sets_odp(4).unwrap().poset;
        assert_eq!(oracle_maximal_ideals(&p).len(), 6);
        // ∅ plus the six {∅, x} plus nothing larger.
        assert_eq!(oracle_proper_ideals(&p).len(), 7);
        let b = powerset_odp(2).unwrap().poset;
        assert_eq!(oracle_maximal_ideals(&b).len(), 2);
    }

    #[test]
    fn titles_and_limits_cover_every_criterion() {
        assert_eq!(TITLES.len(), TIME_LIMITS.len());
        assert!(TITLES[1..].iter().all(|t| !t.is_empty()));
    }
}
