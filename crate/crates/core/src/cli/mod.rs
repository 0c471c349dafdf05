//! Reading documents, running checks on them and reporting the outcome.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::classifier::{char, classify, ff_check, roundtrip_fibration, roundtrip_map, MapToOmega};
use crate::error::Error;
use crate::fincat::{SetDiagram, SetNat, SetPresheaf, SliceFamily};
use crate::prestack::{certify_dopf_pre, CatPresheaf, DiscOpfibPre, TwoNat};
use crate::search::Budget;
use crate::site::{sheaf_failure, sheafify_with_unit, subcanonical_check, validate_topology, GrothTopology};
use crate::stacks::{char_stacks, check_stack, omega_j_probe, OmegaJDatum};

pub mod text;

pub use text::{parse_file, parse_str, serialize, Document, ParseError, Section, Value, Writer};

pub const COMMANDS: [&str; 11] = [
    "validate",
    "classify",
    "char",
    "char-stacks",
    "sheafify",
    "check-sheaf",
    "check-stack",
    "check-site",
    "roundtrip",
    "ff-check",
    "probe-omega-j",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    BoundedPass,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::BoundedPass => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::BoundedPass => "bounded-pass",
        }
    }
}

/// A labelled piece of evidence: a table, a document or a message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub label: String,
    pub body: String,
}

impl Entry {
    fn new(label: impl Into<String>, body: impl Into<String>) -> Entry {
        Entry { label: label.into(), body: body.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Entry>,
    pub counterexamples: Vec<Entry>,
    /// Search-node bound in force.
    pub bound: u64,
    /// Search nodes visited.
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    fn new(command: &str, bound: u64) -> Report {
        Report {
            command: command.into(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            counterexamples: Vec::new(),
            bound,
            nodes: 0,
            timing_ms: None,
        }
    }

    fn witness(&mut self, label: impl Into<String>, body: impl Into<String>) {
        self.witnesses.push(Entry::new(label, body));
    }

    fn fail(&mut self, label: impl Into<String>, body: impl Into<String>) {
        self.verdict = Verdict::Fail;
        self.counterexamples.push(Entry::new(label, body));
    }

    /// Folds a library error into the verdict: running out of budget gives
    /// a bounded pass, anything else a failure.
    fn absorb(&mut self, e: Error) {
        if e.is_size_bound() {
            if self.verdict == Verdict::Pass {
                self.verdict = Verdict::BoundedPass;
            }
            self.witness(
                "bound",
                format!("search stopped at the bound of {} nodes; the check is incomplete", self.bound),
            );
        } else {
            self.fail("error", e.to_string());
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    /// Human-readable form.
    pub fn render(&self) -> String {
        let mut out = format!(
            "command: {}\nverdict: {}\nbound: {} (visited {})\n",
            self.command,
            self.verdict.as_str(),
            self.bound,
            self.nodes
        );
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("time: {ms} ms\n"));
        }
        for (kind, list) in [("witness", &self.witnesses), ("counterexample", &self.counterexamples)] {
            for e in list {
                out.push_str(&format!("{kind} {}:\n", e.label));
                for l in e.body.lines() {
                    out.push_str("  ");
                    out.push_str(l);
                    out.push('\n');
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("unknown command `{0}`; expected one of: {list}", list = COMMANDS.join(", "))]
    UnknownCommand(String),
    #[error("`{command}` needs a {needs} section")]
    MissingSection { command: String, needs: &'static str },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub bound: u64,
    pub timing: bool,
}

/// Parses `path` and runs `command` on it. Data that parses but violates an
/// invariant yields a failing report rather than an error.
pub fn run_file(command: &str, path: &Path, opts: RunOptions) -> Result<Report, CliError> {
    if !COMMANDS.contains(&command) {
        return Err(CliError::UnknownCommand(command.into()));
    }
    let start = Instant::now();
    let mut budget = Budget::new(opts.bound);
    let mut report = match parse_file(path, &mut budget) {
        Ok(doc) => run_with(command, &doc, &mut budget)?,
        Err(ParseError::Invariant { line, column, source }) => {
            let mut r = Report::new(command, opts.bound);
            if source.is_size_bound() {
                r.absorb(source);
            } else {
                r.fail(format!("{}:{line}:{column}", path.display()), source.to_string());
            }
            r
        }
        Err(e) => return Err(e.into()),
    };
    report.nodes = budget.used();
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

/// Runs `command` on a parsed document.
pub fn run(command: &str, doc: &Document, opts: RunOptions) -> Result<Report, CliError> {
    if !COMMANDS.contains(&command) {
        return Err(CliError::UnknownCommand(command.into()));
    }
    let start = Instant::now();
    let mut budget = Budget::new(opts.bound);
    let mut report = run_with(command, doc, &mut budget)?;
    report.nodes = budget.used();
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

fn last<'a, T>(
    doc: &'a Document,
    command: &str,
    needs: &'static str,
    pick: impl Fn(&'a Value) -> Option<T>,
) -> Result<(&'a str, T), CliError> {
    doc.all(pick).pop().ok_or(CliError::MissingSection { command: command.into(), needs })
}

fn set_presheaf(v: &Value) -> Option<&SetPresheaf> {
    match v {
        Value::SetPresheaf(z) => Some(z),
        _ => None,
    }
}

fn cat_presheaf(v: &Value) -> Option<&CatPresheaf> {
    match v {
        Value::CatPresheaf(f) => Some(f),
        _ => None,
    }
}

fn topology(v: &Value) -> Option<&GrothTopology> {
    match v {
        Value::Topology(j) => Some(j),
        _ => None,
    }
}

fn two_nat(v: &Value) -> Option<&TwoNat> {
    match v {
        Value::TwoNat(t) => Some(t),
        _ => None,
    }
}

fn map_to_omega(v: &Value) -> Option<&MapToOmega> {
    match v {
        Value::MapToOmega(z) => Some(z),
        _ => None,
    }
}

fn omega_datum(v: &Value) -> Option<&OmegaJDatum> {
    match v {
        Value::OmegaDatum(d) => Some(d),
        _ => None,
    }
}

fn sorted(mut lines: Vec<String>) -> String {
    lines.sort();
    lines.join("\n")
}

/// `c : x y z` per object.
fn sections_table(z: &SetPresheaf) -> String {
    let b = z.base();
    sorted(b.objects().map(|c| format!("{} : {}", b.object_name(c), z.set(c).join(" "))).collect())
}

/// `c : x>y ...` per object.
fn nat_table(n: &SetNat<SetPresheaf>) -> String {
    let b = n.source().base();
    sorted(
        b.objects()
            .map(|c| {
                let pairs: Vec<String> = n
                    .component(c)
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| format!("{}>{}", n.source().set(c)[x], n.target().set(c)[y]))
                    .collect();
                format!("{} : {}", b.object_name(c), pairs.join(" "))
            })
            .collect(),
    )
}

/// The fibre functor of a map into the classifier: the points over each
/// `(c, X)` and the action of each `ν` on them.
fn fibre_table(z: &MapToOmega) -> String {
    let b = z.base();
    let mut lines = Vec::new();
    for c in b.objects() {
        let fc = z.source().at(c);
        let top = z.slices().slice(c).top(b);
        for x in fc.objects() {
            lines.push(format!("{} {} : {}", b.object_name(c), fc.object_name(x), z.points(c, x).join(" ")));
        }
        for nu in fc.arrows().filter(|&nu| !fc.is_identity(nu)) {
            let n = z.arrow_value(c, nu);
            let pairs: Vec<String> = n
                .component(top)
                .iter()
                .enumerate()
                .map(|(i, &j)| format!("{}>{}", n.source().set(top)[i], n.target().set(top)[j]))
                .collect();
            lines.push(format!("{} {} : {}", b.object_name(c), fc.arrow_name(nu), pairs.join(" ")));
        }
    }
    sorted(lines)
}

fn fibres_of(phi: &DiscOpfibPre) -> String {
    let b = phi.base();
    let mut lines = Vec::new();
    for c in b.objects() {
        let fc = phi.over().at(c);
        let gc = phi.total().at(c);
        for x in fc.objects() {
            let names: Vec<&str> = phi.fibre(c, x).iter().map(|&o| gc.object_name(o)).collect();
            lines.push(format!("{} {} : {}", b.object_name(c), fc.object_name(x), names.join(" ")));
        }
    }
    sorted(lines)
}

fn run_with(command: &str, doc: &Document, budget: &mut Budget) -> Result<Report, CliError> {
    let mut r = Report::new(command, budget.limit());
    match command {
        "validate" => {
            for s in &doc.sections {
                r.witness(s.name.clone(), format!("{} (line {})", s.value.kind(), s.line));
            }
        }
        "classify" => {
            let (name, z) = last(doc, command, "map_to_omega", map_to_omega)?;
            match classify(z) {
                Ok(phi) => {
                    r.witness("fibres", fibres_of(&phi));
                    r.witness(
                        "opfibration",
                        serialize(&format!("{name}.classified"), &Value::TwoNat(phi.two_nat().clone())),
                    );
                }
                Err(e) => r.absorb(e),
            }
        }
        "char" | "char-stacks" => {
            let (name, t) = last(doc, command, "two_nat", two_nat)?;
            let j = if command == "char-stacks" { Some(last(doc, command, "topology", topology)?.1) } else { None };
            let phi = match certify_dopf_pre(t) {
                Ok(phi) => phi,
                Err(e) => {
                    r.absorb(e);
                    return Ok(r);
                }
            };
            let slices = SliceFamily::new(t.base().clone());
            let z = match j {
                None => char(&phi, &slices),
                Some(j) => char_stacks(&phi, j, &slices, false, budget).map(|zj| zj.map().clone()),
            };
            match z {
                Ok(z) => {
                    r.witness("fibre functor", fibre_table(&z));
                    r.witness("map", serialize(&format!("{name}.char"), &Value::MapToOmega(z)));
                }
                Err(e) => r.absorb(e),
            }
        }
        "sheafify" => {
            let (name, z) = last(doc, command, "set presheaf", set_presheaf)?;
            let (_, j) = last(doc, command, "topology", topology)?;
            match sheafify_with_unit(z, j, budget) {
                Ok((s, unit)) => {
                    r.witness("sections", sections_table(&s));
                    r.witness("unit", nat_table(&unit));
                    r.witness("unit is an iso", if unit.is_iso() { "yes" } else { "no" });
                    r.witness("sheaf", serialize(&format!("{name}.sheafified"), &Value::SetPresheaf(s)));
                }
                Err(e) => r.absorb(e),
            }
        }
        "check-sheaf" => {
            let (_, z) = last(doc, command, "set presheaf", set_presheaf)?;
            let (_, j) = last(doc, command, "topology", topology)?;
            match sheaf_failure(z, j, budget) {
                Ok(None) => r.witness("sheaf", "every matching family has exactly one amalgamation"),
                Ok(Some(f)) => r.fail("matching family", f.describe(z)),
                Err(e) => r.absorb(e),
            }
        }
        "check-stack" => {
            let (_, f) = last(doc, command, "Cat presheaf", cat_presheaf)?;
            let (_, j) = last(doc, command, "topology", topology)?;
            match check_stack(f, j, budget) {
                Ok(rep) => {
                    r.witness(
                        "checked",
                        format!("{} descent data, {} morphism families", rep.descent_data, rep.morphism_families),
                    );
                    if let Some(fail) = rep.failure {
                        r.fail(
                            fail.condition.to_string(),
                            format!("at `{}` for {}: {}", fail.object, fail.sieve, fail.witness),
                        );
                    } else if let Some(stratum) = rep.incomplete {
                        r.verdict = Verdict::BoundedPass;
                        r.witness("bound", format!("descent data unfinished at {stratum}"));
                    }
                }
                Err(e) => r.absorb(e),
            }
        }
        "check-site" => {
            let (_, j) = last(doc, command, "topology", topology)?;
            match validate_topology(j, budget).and_then(|()| subcanonical_check(j, budget)) {
                Ok(()) => {
                    r.witness("topology", "maximality, stability and transitivity hold; representables are sheaves")
                }
                Err(Error::AxiomViolation { kind, witness }) => r.fail(format!("{kind} axiom"), witness),
                Err(Error::NotSubcanonical { object, witness }) => {
                    r.fail("subcanonicity", format!("the representable at `{object}`: {witness}"))
                }
                Err(e) => r.absorb(e),
            }
        }
        "roundtrip" => {
            let primary = doc
                .sections
                .iter()
                .rev()
                .find(|s| matches!(s.value, Value::TwoNat(_) | Value::MapToOmega(_)))
                .ok_or(CliError::MissingSection { command: command.into(), needs: "two_nat or map_to_omega" })?;
            match &primary.value {
                Value::TwoNat(t) => {
                    let slices = SliceFamily::new(t.base().clone());
                    match certify_dopf_pre(t).and_then(|phi| roundtrip_fibration(&phi, &slices, budget)) {
                        Ok(iso) => r.witness(
                            "classify(char(φ)) ≅ φ",
                            serialize(&format!("{}.iso", primary.name), &Value::TwoNat(iso)),
                        ),
                        Err(e) => r.absorb(e),
                    }
                }
                Value::MapToOmega(z) => match roundtrip_map(z, budget) {
                    Ok(m) => {
                        let b = z.base();
                        let mut lines = Vec::new();
                        for c in b.objects() {
                            for x in z.source().at(c).objects() {
                                let top = z.slices().slice(c).top(b);
                                let n = m.component(c, x);
                                let pairs: Vec<String> = n
                                    .component(top)
                                    .iter()
                                    .enumerate()
                                    .map(|(i, &k)| format!("{}>{}", n.source().set(top)[i], n.target().set(top)[k]))
                                    .collect();
                                lines.push(format!(
                                    "{} {} : {}",
                                    b.object_name(c),
                                    z.source().at(c).object_name(x),
                                    pairs.join(" ")
                                ));
                            }
                        }
                        r.witness("char(classify(z)) ≅ z", sorted(lines));
                    }
                    Err(e) => r.absorb(e),
                },
                _ => unreachable!(),
            }
        }
        "ff-check" => {
            let maps = doc.all(map_to_omega);
            if maps.len() < 2 {
                return Err(CliError::MissingSection { command: command.into(), needs: "second map_to_omega" });
            }
            let ((n1, z), (n2, z2)) = (maps[maps.len() - 2], maps[maps.len() - 1]);
            match ff_check(z, z2, budget) {
                Ok(rep) => r.witness(
                    format!("{n1} => {n2}"),
                    format!("{} modifications ↔ {} morphisms over the source", rep.modifications, rep.fib_homs),
                ),
                Err(e @ (Error::NotInjective(_) | Error::NotSurjective(_))) => {
                    r.fail(format!("{n1} => {n2}"), e.to_string())
                }
                Err(e) => r.absorb(e),
            }
        }
        "probe-omega-j" => {
            let (name, d) = last(doc, command, "Omega descent_datum", omega_datum)?;
            match omega_j_probe(d, budget) {
                Ok(g) => {
                    r.witness("glued sections", sections_table(&g.glued));
                    let b = d.slices().base();
                    for (i, &f) in d.sieve().arrows().iter().enumerate() {
                        r.witness(format!("psi at {}", b.arrow_name(f)), nat_table(&g.psi[i]));
                    }
                    r.witness("morphisms glued", g.morphisms_glued.to_string());
                    r.witness("glued", serialize(&format!("{name}.glued"), &Value::SetPresheaf(g.glued)));
                }
                Err(e) => r.absorb(e),
            }
        }
        _ => return Err(CliError::UnknownCommand(command.into())),
    }
    Ok(r)
}
