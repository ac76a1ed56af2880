use std::fs;
use std::io::Read;
use std::path::Path;

use serde_json::{json, Map, Value};

use odplab::classes::{classify, Witness};
use odplab::construct::{
    delta_closure_family, even_sets_family, powerset_family, product_odp, representation, SetFamily,
    MAX_GENERATED_ELEMENTS,
};
use odplab::corpus::frozen_corpus;
use odplab::epset::{build_r_example, build_t_example, eval_expr, ClassId, CosetFamily, Membership, RCheck};
use odplab::format::{parse_structure, write_explicit, write_family, Structure};
use odplab::frink::{enumerate_maximal_ideals, is_selective};
use odplab::odp::verify_odp;
use odplab::poset::check_size;
use odplab::report::{CheckOptions, ViolationReport};
use odplab::suite::{Suite, SuiteConfig};
use odplab::OdpError;

use crate::args::{ClassName, Command, EpsetCmd, FamilyName, Format, Generate, GlobalOpts, InputArg};

/// Files larger than this are refused before parsing.
const INPUT_CEILING: usize = MAX_GENERATED_ELEMENTS;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable files, unknown expectation keys.
    Usage(String),
    Odp(OdpError),
}

impl From<OdpError> for CliError {
    fn from(e: OdpError) -> Self {
        CliError::Odp(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Odp(e) => write!(f, "{}", e),
        }
    }
}

/// What a command produced. `doc` doubles as the key space for `--expect`.
pub struct Output {
    pub text: String,
    pub doc: Map<String, Value>,
    pub dot: Option<String>,
    /// An axiom violation or failed property, reported with exit code 1.
    pub violated: bool,
}

impl Output {
    fn new(command: &str) -> Self {
        let mut doc = Map::new();
        doc.insert("command".into(), command.into());
        Output {
            text: String::new(),
            doc,
            dot: None,
            violated: false,
        }
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.doc.insert(key.into(), v.into());
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Text => Ok(self.text.clone()),
            Format::Doc => Ok(serde_json::to_string_pretty(&Value::Object(self.doc.clone())).expect("json") + "\n"),
            Format::Dot => self
                .dot
                .clone()
                .ok_or_else(|| CliError::Usage("--format dot is only available for verify".into())),
        }
    }
}

/// Value of a report field as compared by `--expect`.
fn expect_repr(v: &Value) -> String {
    match v {
        Value::Null => "unknown".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Returns the mismatches; unknown keys are usage errors.
pub fn check_expectations(out: &Output, wanted: &str) -> Result<Vec<String>, CliError> {
    let mut mismatches = Vec::new();
    for item in wanted.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expectation '{}' is not key=value", item)))?;
        let (k, v) = (k.trim(), v.trim());
        let got = out.doc.get(k).ok_or_else(|| {
            let keys: Vec<&str> = out.doc.keys().map(String::as_str).collect();
            CliError::Usage(format!("unknown expectation key '{}' (available: {})", k, keys.join(", ")))
        })?;
        let got = expect_repr(got);
        if !got.eq_ignore_ascii_case(v) {
            mismatches.push(format!("{}: expected {}, got {}", k, v, got));
        }
    }
    Ok(mismatches)
}

fn read_input(input: &InputArg) -> Result<String, CliError> {
    match input.input.as_deref() {
        None => read_stdin(),
        Some(p) if p == Path::new("-") => read_stdin(),
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {}", p.display(), e))),
    }
}

fn read_stdin() -> Result<String, CliError> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| CliError::Usage(format!("cannot read standard input: {}", e)))?;
    Ok(s)
}

fn load(input: &InputArg) -> Result<Structure, CliError> {
    Ok(parse_structure(&read_input(input)?, INPUT_CEILING)?)
}

fn check_options(g: &GlobalOpts) -> CheckOptions {
    CheckOptions {
        witness_limit: if g.all_witnesses {
            None
        } else {
            CheckOptions::default().witness_limit
        },
        max_elements: g.max_elements,
        seed: g.seed,
        ..CheckOptions::default()
    }
}

fn verification(s: &Structure, opts: &CheckOptions) -> Result<(ViolationReport, Option<ViolationReport>), CliError> {
    let ortho = s.poset.verify_orthoposet(opts);
    let odp = match &s.delta {
        Some(d) if ortho.is_empty() => Some(verify_odp(&s.poset, d, opts)?),
        _ => None,
    };
    Ok((ortho, odp))
}

/// Analyzers other than `verify` need a structure that passes every
/// applicable axiom and fits under the size cap.
fn load_verified(input: &InputArg, g: &GlobalOpts) -> Result<Structure, CliError> {
    let s = load(input)?;
    check_size(s.poset.size(), g.max_elements)?;
    let (ortho, odp) = verification(&s, &check_options(g))?;
    if !ortho.is_empty() {
        return Err(OdpError::Structure(format!("input is not an orthoposet: {}", ortho.to_string().trim_end())).into());
    }
    if let Some(r) = odp.filter(|r| !r.is_empty()) {
        return Err(OdpError::Structure(format!("input violates the ODP axioms: {}", r.to_string().trim_end())).into());
    }
    Ok(s)
}

pub fn run(command: &Command, g: &GlobalOpts) -> Result<Output, CliError> {
    match command {
        Command::Verify(input) => verify(input, g),
        Command::Classify(input) => classify_cmd(input, g),
        Command::Ideals(input) => ideals(input, g),
        Command::Represent(input) => represent(input, g),
        Command::Generate(gen) => generate(gen),
        Command::Epset(cmd) => epset(cmd, g),
        Command::CorpusCheck => corpus_check(g),
    }
}

fn failures_json(r: &ViolationReport) -> Value {
    Value::Array(
        r.failures
            .iter()
            .map(|f| {
                json!({
                    "axiom": format!("{}", f.axiom),
                    "description": f.axiom.describe(),
                    "total": f.total,
                    "witnesses": f.witnesses,
                })
            })
            .collect(),
    )
}

fn verify(input: &InputArg, g: &GlobalOpts) -> Result<Output, CliError> {
    let s = load(input)?;
    let (ortho, odp) = verification(&s, &check_options(g))?;
    let mut out = Output::new("verify");
    out.set("elements", s.poset.size());
    out.set("orthoposet", ortho.is_empty());
    let odp_ok = match (&s.delta, &odp) {
        (None, _) => Value::Null,
        (Some(_), None) => Value::Null,
        (Some(_), Some(r)) => r.is_empty().into(),
    };
    out.set("odp", odp_ok.clone());
    let sampled = odp.as_ref().is_some_and(|r| r.sampled);
    out.set("sampled", sampled);
    let ok = ortho.is_empty() && odp.as_ref().is_none_or(|r| r.is_empty());
    out.set("ok", ok);
    let mut all = ortho.clone();
    if let Some(r) = &odp {
        all.merge(r.clone());
    }
    out.set("failures", failures_json(&all));

    out.line(format!("elements {}", s.poset.size()));
    out.line(format!("orthoposet {}", if ortho.is_empty() { "ok" } else { "violated" }));
    out.line(match (&s.delta, &odp) {
        (None, _) => "odp skipped (no delta table)".to_string(),
        (Some(_), None) => "odp skipped (orthoposet axioms fail)".to_string(),
        (Some(_), Some(r)) => format!("odp {}", if r.is_empty() { "ok" } else { "violated" }),
    });
    if !all.is_empty() || sampled {
        out.text.push_str(&all.to_string());
    }
    out.dot = Some(s.poset.to_dot());
    out.violated = !ok;
    Ok(out)
}

fn witness_json(w: &Witness) -> Value {
    serde_json::to_value(w).expect("witness serializes")
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Pair { a, b } => format!("pair {} {}", a, b),
        Witness::Triple { a, b, c } => format!("triple {} {} {}", a, b, c),
        Witness::Ideal { members, x, perp_x } => format!("ideal {} missing {} and {}", members, x, perp_x),
    }
}

fn classify_cmd(input: &InputArg, g: &GlobalOpts) -> Result<Output, CliError> {
    let s = load_verified(input, g)?;
    let rep = classify(&s.poset, g.budget_nodes);
    let mut out = Output::new("classify");
    for key in [
        "elements",
        "in_R",
        "in_S",
        "in_T",
        "lattice",
        "boolean",
        "ideal_count",
        "selective_count",
    ] {
        let v = rep.field(key).expect("known key");
        out.line(format!("{}={}", key, v));
        let value = match key {
            "in_S" => rep.in_s.map_or(Value::Null, Value::from),
            "ideal_count" => rep.ideal_count.map_or(Value::Null, Value::from),
            "selective_count" => rep.selective_count.map_or(Value::Null, Value::from),
            "elements" => rep.elements.into(),
            _ => (v == "true").into(),
        };
        out.set(key, value);
    }
    let mut ws = Map::new();
    for (k, w) in &rep.witnesses {
        out.line(format!("witness.{}={}", k, witness_text(w)));
        ws.insert(k.clone(), witness_json(w));
    }
    out.set("witnesses", Value::Object(ws));
    Ok(out)
}

fn ideals(input: &InputArg, g: &GlobalOpts) -> Result<Output, CliError> {
    let s = load_verified(input, g)?;
    let p = &s.poset;
    let found = enumerate_maximal_ideals(p, g.budget_nodes)?;
    let mut out = Output::new("ideals");
    let mut list = Vec::new();
    let mut selective = 0;
    for i in &found {
        let sel = is_selective(p, i.members());
        selective += sel as usize;
        out.line(format!("{} selective={}", i.bitstring(), if sel { "yes" } else { "no" }));
        list.push(json!({ "members": i.bitstring(), "selective": sel }));
    }
    out.set("elements", p.size());
    out.set("count", found.len());
    out.set("selective_count", selective);
    out.set("ideals", Value::Array(list));
    Ok(out)
}

fn represent(input: &InputArg, g: &GlobalOpts) -> Result<Output, CliError> {
    let s = load_verified(input, g)?;
    let d = s
        .delta
        .as_ref()
        .ok_or_else(|| OdpError::Structure("represent needs a delta table".into()))?;
    let rep = representation(&s.poset, d, g.budget_nodes)?;
    let mut out = Output::new("represent");
    out.set("elements", s.poset.size());
    out.set("points", rep.points.len());
    out.set("order_embedding", rep.order_embedding);
    out.set("perp_ok", rep.perp_ok);
    out.set("delta_ok", rep.delta_ok);
    out.set("representable", rep.all_ok());
    out.line(format!("points={}", rep.points.len()));
    out.line(format!("order_embedding={}", rep.order_embedding));
    out.line(format!("perp_ok={}", rep.perp_ok));
    out.line(format!("delta_ok={}", rep.delta_ok));
    let mut emb = Vec::new();
    for a in 0..s.poset.size() {
        let bits = rep.embedding_bitstring(a);
        out.line(format!("{} {}", s.poset.label(a), bits));
        emb.push(json!({ "element": a, "label": s.poset.label(a), "set": bits }));
    }
    out.set("embedding", Value::Array(emb));
    Ok(out)
}

fn family_output(fam: &SetFamily, explicit: bool) -> Result<Output, CliError> {
    let mut out = Output::new("generate");
    out.text = if explicit {
        let odp = fam.to_odp()?;
        write_explicit(&odp.poset, Some(&odp.delta))
    } else {
        write_family(fam)
    };
    Ok(out)
}

fn parse_generator(n: usize, s: &str) -> Result<u64, CliError> {
    if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(CliError::Usage(format!("generator '{}' is not a {}-character bitstring", s, n)));
    }
    Ok(s.chars()
        .enumerate()
        .fold(0u64, |acc, (i, c)| if c == '1' { acc | 1 << i } else { acc }))
}

fn generate(gen: &Generate) -> Result<Output, CliError> {
    match gen {
        Generate::Powerset { n, explicit } => family_output(&powerset_family(*n)?, *explicit),
        Generate::Even { two_k, explicit } => family_output(&even_sets_family(*two_k)?, *explicit),
        Generate::DeltaClosure { n, generators, explicit } => {
            let gens = generators
                .iter()
                .map(|s| parse_generator(*n, s))
                .collect::<Result<Vec<_>, _>>()?;
            family_output(&delta_closure_family(*n, &gens)?, *explicit)
        }
        Generate::Product { left, right } => {
            let load_path = |p: &Path| -> Result<_, CliError> {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {}", p.display(), e)))?;
                Ok(parse_structure(&text, INPUT_CEILING)?.into_odp()?)
            };
            let prod = product_odp(&load_path(left)?, &load_path(right)?)?;
            let mut out = Output::new("generate");
            out.text = write_explicit(&prod.poset, Some(&prod.delta));
            Ok(out)
        }
        Generate::Corpus { out: dir } => {
            let corpus = frozen_corpus()?;
            let mut out = Output::new("generate");
            if let Some(dir) = dir {
                fs::create_dir_all(dir)
                    .map_err(|e| CliError::Usage(format!("cannot create {}: {}", dir.display(), e)))?;
            }
            for c in &corpus {
                out.line(format!("{} {}", c.name, c.size()));
                if let Some(dir) = dir {
                    let text = match &c.family {
                        Some(f) => write_family(f),
                        None => write_explicit(&c.odp.poset, Some(&c.odp.delta)),
                    };
                    let path = dir.join(format!("{}.odp", c.name));
                    fs::write(&path, text)
                        .map_err(|e| CliError::Usage(format!("cannot write {}: {}", path.display(), e)))?;
                }
            }
            Ok(out)
        }
    }
}

fn family(name: FamilyName) -> CosetFamily {
    match name {
        FamilyName::R => build_r_example(),
        FamilyName::T => build_t_example(),
    }
}

fn membership_json(fam: &CosetFamily, m: &Membership) -> Value {
    json!({
        "base_index": m.base_index,
        "exceptions": m.exceptions,
        "name": fam.describe(m),
        "set": fam.member(m).to_string(),
    })
}

fn epset(cmd: &EpsetCmd, g: &GlobalOpts) -> Result<Output, CliError> {
    let mut out = Output::new("epset");
    match cmd {
        EpsetCmd::Eval { expr } => {
            let v = eval_expr(expr)?;
            out.line(v.to_string());
            out.set("value", v.to_string());
            out.set("period", v.period());
            out.set("threshold", v.threshold());
            out.set("empty", v.is_empty());
            out.set("finite", v.is_finite());
        }
        EpsetCmd::Member { family: f, expr } => {
            let fam = family(*f);
            let v = eval_expr(expr)?;
            match fam.contains(&v) {
                Some(m) => {
                    out.line(format!("yes {}", fam.describe(&m)));
                    out.set("member", true);
                    out.set("witness", membership_json(&fam, &m));
                }
                None => {
                    out.line("no");
                    out.set("member", false);
                    out.set("witness", Value::Null);
                }
            }
        }
        EpsetCmd::MeetsZero { family: f, a, b } => {
            let fam = family(*f);
            let z = fam.meets_zero(&eval_expr(a)?, &eval_expr(b)?)?;
            out.line(if z { "yes" } else { "no" });
            out.set("meets_zero", z);
        }
        EpsetCmd::WitnessSearch { family: f, class } => {
            let fam = family(*f);
            let class_id = match class {
                ClassName::R => ClassId::R,
                ClassName::T => ClassId::T,
            };
            out.set("bound", g.fragment_bound);
            match fam.class_witness_search(g.fragment_bound, class_id, odplab::epset::DEFAULT_MAX_PAIRS)? {
                Some(w) => {
                    out.line(format!("witness a={} b={}", fam.describe(&w.a), fam.describe(&w.b)));
                    out.set("found", true);
                    out.set("a", membership_json(&fam, &w.a));
                    out.set("b", membership_json(&fam, &w.b));
                }
                None => {
                    out.line("none");
                    out.set("found", false);
                }
            }
        }
        EpsetCmd::RCheck { family: f } => {
            let fam = family(*f);
            let verdict = match fam.class_r_check() {
                RCheck::Proven => "proven".to_string(),
                RCheck::Undecided => "undecided".to_string(),
                RCheck::Refuted(w) => {
                    out.set("a", membership_json(&fam, &w.a));
                    out.set("b", membership_json(&fam, &w.b));
                    format!("refuted a={} b={}", fam.describe(&w.a), fam.describe(&w.b))
                }
            };
            out.line(&verdict);
            out.set("verdict", verdict.split_whitespace().next().unwrap_or("").to_string());
        }
    }
    Ok(out)
}

fn corpus_check(g: &GlobalOpts) -> Result<Output, CliError> {
    let suite = Suite::new(SuiteConfig {
        node_budget: g.budget_nodes,
        seed: g.seed,
        ..SuiteConfig::default()
    })?;
    let mut out = Output::new("corpus-check");
    out.set("instances", suite.corpus().len());
    let results = suite.run_all();
    let mut list = Vec::new();
    for r in &results {
        // Timings vary run to run, so they stay out of the output.
        out.line(format!(
            "{} [{:>2}] {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.title,
            r.detail
        ));
        list.push(json!({ "id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail }));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.line(format!("{} passed, {} failed", results.len() - failed, failed));
    out.set("passed", results.len() - failed);
    out.set("failed", failed);
    out.set("criteria", Value::Array(list));
    out.violated = failed > 0;
    Ok(out)
}
