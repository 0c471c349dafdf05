//! The `.tck` document format.
//!
//! A document is a sequence of blocks. Each block opens with a header line
//! and closes with `end`; `#` starts a comment. Tokens are separated by
//! whitespace and may be double-quoted (with `\"` and `\\` escapes). A block
//! may only refer to blocks above it. `import PATH` (outside blocks) splices
//! in another file, resolved relative to the importing one.
//!
//! ```text
//! category NAME [freely-generate]
//!   object a b            # any number per line
//!   arrow u a b           # name, domain, codomain
//!   identity a id_a       # required per object unless freely-generate
//!   compose g f gf        # g . f = gf; identity composites are implied
//! end
//! functor NAME : SOURCE -> TARGET
//!   obj x y
//!   arr f g               # identities default to identities
//! end
//! presheaf NAME : CAT -> Set
//!   set c x y z           # sorted, distinct labels
//!   map f y x x           # images in Z(dom f) of Z(cod f), in order
//! end
//! presheaf NAME : CAT -> Cat
//!   at c CATEGORY
//!   action f FUNCTOR
//! end
//! set_nat NAME : Z -> W
//!   component c y x       # images of Z(c), in order
//! end
//! two_nat NAME : G -> F
//!   component c FUNCTOR
//! end
//! topology NAME on CAT [closed]
//!   cover c f g           # the sieve generated by f, g; no arrows: empty sieve
//! end
//! sieve NAME on CAT at c
//!   arrows f g            # generators
//! end
//! descent_datum NAME : F on SIEVE
//!   object f X
//!   iso f g NU            # omitted isos default to identities
//! end
//! descent_datum NAME : Omega on SIEVE under TOPOLOGY
//!   local f PRESHEAF
//!   iso f g SET_NAT
//! end
//! map_to_omega NAME : F
//!   value c X PRESHEAF
//!   arrow_value c nu SET_NAT
//! end
//! ```
//!
//! A category can also be named `BASE/c`: the slice of `BASE` over `c`,
//! whose objects are the arrows into `c` and whose arrows are written
//! `g@f`. `closed` replaces the listed covers by the topology they generate.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::classifier::MapToOmega;
use crate::error::Error;
use crate::fincat::{Arr, CategoryTables, FinCat, FinFunctor, Obj, SetDiagram, SetNat, SetPresheaf, SliceFamily};
use crate::prestack::{CatPresheaf, TwoNat};
use crate::search::Budget;
use crate::site::{sieve_generate, GrothTopology, Sieve};
use crate::stacks::{DescentDatum, OmegaJDatum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unknown reference `{name}`")]
    DanglingReference { line: usize, column: usize, name: String },
    #[error("{line}:{column}: {source}")]
    Invariant { line: usize, column: usize, source: Error },
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
}

impl ParseError {
    /// Whether the text was well formed but described invalid data.
    pub fn is_invariant(&self) -> bool {
        matches!(self, ParseError::Invariant { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Category(Arc<FinCat>),
    Functor(FinFunctor),
    SetPresheaf(SetPresheaf),
    CatPresheaf(CatPresheaf),
    SetNat(SetNat<SetPresheaf>),
    TwoNat(TwoNat),
    Topology(GrothTopology),
    Sieve(Arc<FinCat>, Sieve),
    DescentDatum(DescentDatum),
    OmegaDatum(OmegaJDatum),
    MapToOmega(MapToOmega),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Category(_) => "category",
            Value::Functor(_) => "functor",
            Value::SetPresheaf(_) => "set presheaf",
            Value::CatPresheaf(_) => "Cat presheaf",
            Value::SetNat(_) => "set_nat",
            Value::TwoNat(_) => "two_nat",
            Value::Topology(_) => "topology",
            Value::Sieve(..) => "sieve",
            Value::DescentDatum(_) => "descent_datum",
            Value::OmegaDatum(_) => "Omega descent_datum",
            Value::MapToOmega(_) => "map_to_omega",
        }
    }
}

/// A named block. Equality ignores the line it was read from.
#[derive(Debug, Clone)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub value: Value,
}

impl PartialEq for Section {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.value == other.value
    }
}

impl Eq for Section {}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub sections: Vec<Section>,
}

impl Document {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.sections.iter().rev().find(|s| s.name == name).map(|s| &s.value)
    }

    /// Sections picked out by `pick`, in document order.
    pub fn all<'a, T>(&'a self, pick: impl Fn(&'a Value) -> Option<T>) -> Vec<(&'a str, T)> {
        self.sections.iter().filter_map(|s| pick(&s.value).map(|t| (s.name.as_str(), t))).collect()
    }

    /// Canonical text; parsing it gives back an equal document.
    pub fn to_text(&self) -> String {
        let mut w = Writer::new();
        for s in &self.sections {
            w.section(&s.name, &s.value);
        }
        w.finish()
    }
}

#[derive(Debug, Clone)]
struct Tok {
    text: String,
    col: usize,
}

#[derive(Debug, Clone)]
struct Line {
    no: usize,
    toks: Vec<Tok>,
}

impl Line {
    fn syntax(&self, i: usize, message: impl Into<String>) -> ParseError {
        let column = self.toks.get(i).map_or(1, |t| t.col);
        ParseError::Syntax { line: self.no, column, message: message.into() }
    }

    fn dangling(&self, i: usize) -> ParseError {
        ParseError::DanglingReference { line: self.no, column: self.toks[i].col, name: self.toks[i].text.clone() }
    }

    fn invariant(&self, i: usize, source: Error) -> ParseError {
        let column = self.toks.get(i).map_or(1, |t| t.col);
        ParseError::Invariant { line: self.no, column, source }
    }

    fn tok(&self, i: usize) -> &str {
        &self.toks[i].text
    }

    fn arity(&self, n: usize) -> Result<(), ParseError> {
        if self.toks.len() != n {
            return Err(self.syntax(self.toks.len().min(n), format!("`{}` takes {} fields", self.tok(0), n - 1)));
        }
        Ok(())
    }
}

fn tokenize(text: &str, no: usize) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().enumerate().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            break;
        } else if c == '"' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some((_, '"')) => break,
                    Some((_, '\\')) => match chars.next() {
                        Some((_, e @ ('"' | '\\'))) => s.push(e),
                        _ => return Err(ParseError::Syntax { line: no, column: i + 1, message: "bad escape".into() }),
                    },
                    Some((_, ch)) => s.push(ch),
                    None => {
                        return Err(ParseError::Syntax {
                            line: no,
                            column: i + 1,
                            message: "unterminated quote".into(),
                        })
                    }
                }
            }
            toks.push(Tok { text: s, col: i + 1 });
        } else {
            let mut s = String::new();
            while let Some(&(_, ch)) = chars.peek() {
                if ch.is_whitespace() {
                    break;
                }
                s.push(ch);
                chars.next();
            }
            toks.push(Tok { text: s, col: i + 1 });
        }
    }
    Ok(toks)
}

fn lines_of(text: &str) -> Result<Vec<Line>, ParseError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let toks = tokenize(l, i + 1)?;
        if !toks.is_empty() {
            out.push(Line { no: i + 1, toks });
        }
    }
    Ok(out)
}

/// Parses a document from text. `import` lines are rejected here; use
/// [`parse_file`].
pub fn parse_str(text: &str, budget: &mut Budget) -> Result<Document, ParseError> {
    let mut p = Parser::default();
    p.run(&lines_of(text)?, None, budget)?;
    Ok(p.doc)
}

/// Parses a file and the files it imports.
pub fn parse_file(path: &Path, budget: &mut Budget) -> Result<Document, ParseError> {
    let mut p = Parser::default();
    p.file(path, budget, 0)?;
    Ok(p.doc)
}

#[derive(Default)]
struct Parser {
    doc: Document,
    index: HashMap<String, usize>,
    slices: Vec<(Arc<FinCat>, Arc<SliceFamily>)>,
}

const HEADERS: [&str; 10] = [
    "category",
    "functor",
    "presheaf",
    "set_nat",
    "two_nat",
    "topology",
    "sieve",
    "descent_datum",
    "map_to_omega",
    "import",
];

impl Parser {
    fn file(&mut self, path: &Path, budget: &mut Budget, depth: usize) -> Result<(), ParseError> {
        let io = |e: std::io::Error| ParseError::Io { path: path.display().to_string(), message: e.to_string() };
        if depth > 16 {
            return Err(ParseError::Io { path: path.display().to_string(), message: "imports nest too deeply".into() });
        }
        let text = std::fs::read_to_string(path).map_err(io)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        self.run(&lines_of(&text)?, Some((&dir, depth)), budget)
    }

    fn run(&mut self, lines: &[Line], dir: Option<(&Path, usize)>, budget: &mut Budget) -> Result<(), ParseError> {
        let mut i = 0;
        while i < lines.len() {
            let head = &lines[i];
            let kw = head.tok(0);
            if !HEADERS.contains(&kw) {
                return Err(head.syntax(0, format!("expected a block header, found `{kw}`")));
            }
            if kw == "import" {
                head.arity(2)?;
                let Some((dir, depth)) = dir else {
                    return Err(head.syntax(0, "imports need a file path to resolve against"));
                };
                self.file(&dir.join(head.tok(1)), budget, depth + 1)?;
                i += 1;
                continue;
            }
            let Some(len) = lines[i + 1..].iter().position(|l| l.tok(0) == "end") else {
                return Err(head.syntax(0, "block is not closed by `end`"));
            };
            let body = &lines[i + 1..i + 1 + len];
            if let Some(l) = body.iter().find(|l| l.toks.len() > 1 && HEADERS.contains(&l.tok(0))) {
                return Err(l.syntax(0, "blocks do not nest; missing `end`?"));
            }
            lines[i + 1 + len].arity(1)?;
            if head.toks.len() < 2 {
                return Err(head.syntax(1, "block name missing"));
            }
            let name = head.tok(1).to_string();
            let value = self.block(head, body, budget)?;
            self.index.insert(name.clone(), self.doc.sections.len());
            self.doc.sections.push(Section { name, line: head.no, value });
            i += len + 2;
        }
        Ok(())
    }

    fn lookup(&self, l: &Line, i: usize) -> Result<&Value, ParseError> {
        self.index.get(l.tok(i)).map(|&k| &self.doc.sections[k].value).ok_or_else(|| l.dangling(i))
    }

    fn family(&mut self, base: &Arc<FinCat>) -> Arc<SliceFamily> {
        if let Some((_, f)) = self.slices.iter().find(|(b, _)| b == base) {
            return f.clone();
        }
        let f = SliceFamily::new(base.clone());
        self.slices.push((base.clone(), f.clone()));
        f
    }

    fn category(&mut self, l: &Line, i: usize) -> Result<Arc<FinCat>, ParseError> {
        if let Some(Value::Category(c)) = self.index.get(l.tok(i)).map(|&k| &self.doc.sections[k].value) {
            return Ok(c.clone());
        }
        if let Some((base, obj)) = l.tok(i).rsplit_once('/') {
            if let Some(Value::Category(b)) = self.index.get(base).map(|&k| &self.doc.sections[k].value) {
                let b = b.clone();
                let c = b.object(obj).map_err(|_| l.dangling(i))?;
                return Ok(self.family(&b).slice(c).cat().clone());
            }
        }
        match self.index.get(l.tok(i)) {
            Some(_) => Err(l.syntax(i, format!("`{}` is not a category", l.tok(i)))),
            None => Err(l.dangling(i)),
        }
    }

    fn expect<T>(&self, l: &Line, i: usize, what: &str, pick: impl Fn(&Value) -> Option<T>) -> Result<T, ParseError> {
        pick(self.lookup(l, i)?).ok_or_else(|| l.syntax(i, format!("`{}` is not a {what}", l.tok(i))))
    }

    fn block(&mut self, head: &Line, body: &[Line], budget: &mut Budget) -> Result<Value, ParseError> {
        let bad_line = |l: &Line| l.syntax(0, format!("unexpected `{}` in a {} block", l.tok(0), head.tok(0)));
        let inv = |e: Error| head.invariant(1, e);
        match head.tok(0) {
            "category" => {
                let free = match head.toks.len() {
                    2 => false,
                    3 if head.tok(2) == "freely-generate" => true,
                    _ => return Err(head.syntax(2, "expected `category NAME [freely-generate]`")),
                };
                let mut objects: Vec<String> = Vec::new();
                let mut arrows: Vec<(String, String, String)> = Vec::new();
                let mut tables = CategoryTables::new();
                for l in body {
                    match l.tok(0) {
                        "object" => {
                            for t in &l.toks[1..] {
                                objects.push(t.text.clone());
                                tables = tables.object(&t.text);
                            }
                        }
                        "arrow" => {
                            l.arity(4)?;
                            for k in [2, 3] {
                                if !objects.iter().any(|o| o == l.tok(k)) {
                                    return Err(l.dangling(k));
                                }
                            }
                            arrows.push((l.tok(1).into(), l.tok(2).into(), l.tok(3).into()));
                            tables = tables.arrow(l.tok(1), l.tok(2), l.tok(3));
                        }
                        "identity" | "compose" if free => {
                            return Err(l.syntax(0, "freely generated categories list generators only"))
                        }
                        "identity" => {
                            l.arity(3)?;
                            if !objects.iter().any(|o| o == l.tok(1)) {
                                return Err(l.dangling(1));
                            }
                            if !arrows.iter().any(|a| a.0 == l.tok(2)) {
                                return Err(l.dangling(2));
                            }
                            tables = tables.identity(l.tok(1), l.tok(2));
                        }
                        "compose" => {
                            l.arity(4)?;
                            for k in 1..4 {
                                if !arrows.iter().any(|a| a.0 == l.tok(k)) {
                                    return Err(l.dangling(k));
                                }
                            }
                            tables = tables.composite(l.tok(1), l.tok(2), l.tok(3));
                        }
                        _ => return Err(bad_line(l)),
                    }
                }
                let cat = if free {
                    let gens: Vec<(&str, &str, &str)> =
                        arrows.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
                    let objs: Vec<&str> = objects.iter().map(String::as_str).collect();
                    FinCat::free(&objs, &gens)
                } else {
                    tables.build()
                };
                Ok(Value::Category(Arc::new(cat.map_err(inv)?)))
            }
            "functor" => {
                self.arrow_header(head)?;
                let (s, t) = (self.category(head, 3)?, self.category(head, 5)?);
                let mut objects: Vec<Option<Obj>> = vec![None; s.object_count()];
                let mut arrows: Vec<Option<Arr>> = vec![None; s.arrow_count()];
                for l in body {
                    l.arity(3)?;
                    match l.tok(0) {
                        "obj" => {
                            let x = s.object(l.tok(1)).map_err(|_| l.dangling(1))?;
                            objects[x.0] = Some(t.object(l.tok(2)).map_err(|_| l.dangling(2))?);
                        }
                        "arr" => {
                            let x = s.arrow(l.tok(1)).map_err(|_| l.dangling(1))?;
                            arrows[x.0] = Some(t.arrow(l.tok(2)).map_err(|_| l.dangling(2))?);
                        }
                        _ => return Err(bad_line(l)),
                    }
                }
                let objects: Vec<Obj> = objects
                    .into_iter()
                    .enumerate()
                    .map(|(i, o)| {
                        o.ok_or_else(|| inv(Error::InvalidFunctor(format!("no image for `{}`", s.object_name(Obj(i))))))
                    })
                    .collect::<Result<_, _>>()?;
                let arrows: Vec<Arr> = arrows
                    .into_iter()
                    .enumerate()
                    .map(|(i, a)| match a {
                        Some(a) => Ok(a),
                        None if s.is_identity(Arr(i)) => Ok(t.identity(objects[s.dom(Arr(i)).0])),
                        None => Err(inv(Error::InvalidFunctor(format!("no image for `{}`", s.arrow_name(Arr(i)))))),
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Value::Functor(FinFunctor::new(s, t, objects, arrows).map_err(inv)?))
            }
            "presheaf" => {
                self.arrow_header(head)?;
                let base = self.category(head, 3)?;
                match head.tok(5) {
                    "Set" => self.set_presheaf(&base, body, &inv).map(Value::SetPresheaf),
                    "Cat" => self.cat_presheaf(&base, body, &inv).map(Value::CatPresheaf),
                    _ => Err(head.syntax(5, "a presheaf takes values in `Set` or `Cat`")),
                }
            }
            "set_nat" => {
                self.arrow_header(head)?;
                let pick = |v: &Value| match v {
                    Value::SetPresheaf(z) => Some(z.clone()),
                    _ => None,
                };
                let s = self.expect(head, 3, "set presheaf", pick)?;
                let t = self.expect(head, 5, "set presheaf", pick)?;
                let base = s.base().clone();
                let mut comps: Vec<Option<Vec<usize>>> = vec![None; base.object_count()];
                for l in body {
                    if l.tok(0) != "component" || l.toks.len() < 2 {
                        return Err(bad_line(l));
                    }
                    let c = base.object(l.tok(1)).map_err(|_| l.dangling(1))?;
                    if l.toks.len() - 2 != s.card(c) {
                        return Err(l.syntax(1, format!("expected {} images", s.card(c))));
                    }
                    let images = (2..l.toks.len())
                        .map(|k| t.element(c, l.tok(k)).ok_or_else(|| l.dangling(k)))
                        .collect::<Result<_, _>>()?;
                    comps[c.0] = Some(images);
                }
                let comps = comps
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.ok_or_else(|| {
                            inv(Error::InvalidNatural(format!("no component at `{}`", base.object_name(Obj(i)))))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Value::SetNat(SetNat::new(s, t, comps).map_err(inv)?))
            }
            "two_nat" => {
                self.arrow_header(head)?;
                let pick = |v: &Value| match v {
                    Value::CatPresheaf(z) => Some(z.clone()),
                    _ => None,
                };
                let g = self.expect(head, 3, "Cat presheaf", pick)?;
                let f = self.expect(head, 5, "Cat presheaf", pick)?;
                let base = g.base().clone();
                let mut comps: Vec<Option<FinFunctor>> = vec![None; base.object_count()];
                for l in body {
                    if l.tok(0) != "component" {
                        return Err(bad_line(l));
                    }
                    l.arity(3)?;
                    let c = base.object(l.tok(1)).map_err(|_| l.dangling(1))?;
                    comps[c.0] = Some(self.expect(l, 2, "functor", |v| match v {
                        Value::Functor(f) => Some(f.clone()),
                        _ => None,
                    })?);
                }
                let comps = comps
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.ok_or_else(|| {
                            inv(Error::InvalidTwoNat(format!("no component at `{}`", base.object_name(Obj(i)))))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Value::TwoNat(TwoNat::new(g, f, comps).map_err(inv)?))
            }
            "topology" => {
                let closed = match head.toks.len() {
                    4 => false,
                    5 if head.tok(4) == "closed" => true,
                    _ => return Err(head.syntax(2, "expected `topology NAME on CAT [closed]`")),
                };
                if head.tok(2) != "on" {
                    return Err(head.syntax(2, "expected `on`"));
                }
                let cat = self.category(head, 3)?;
                let mut covers = vec![Vec::new(); cat.object_count()];
                for l in body {
                    if l.tok(0) != "cover" || l.toks.len() < 2 {
                        return Err(bad_line(l));
                    }
                    let (c, s) = self.generated(&cat, l, 1)?;
                    covers[c.0].push(s);
                }
                let mut j = GrothTopology::new(cat, covers).map_err(inv)?;
                if closed {
                    j = j.close(budget).map_err(inv)?;
                }
                Ok(Value::Topology(j))
            }
            "sieve" => {
                if head.toks.len() != 6 || head.tok(2) != "on" || head.tok(4) != "at" {
                    return Err(head.syntax(2, "expected `sieve NAME on CAT at OBJECT`"));
                }
                let cat = self.category(head, 3)?;
                let c = cat.object(head.tok(5)).map_err(|_| head.dangling(5))?;
                let mut arrows = Vec::new();
                for l in body {
                    if l.tok(0) != "arrows" {
                        return Err(bad_line(l));
                    }
                    for k in 1..l.toks.len() {
                        arrows.push(cat.arrow(l.tok(k)).map_err(|_| l.dangling(k))?);
                    }
                }
                let s = sieve_generate(&cat, c, &arrows).map_err(inv)?;
                Ok(Value::Sieve(cat, s))
            }
            "descent_datum" => self.descent(head, body, budget),
            "map_to_omega" => {
                if head.toks.len() != 4 || head.tok(2) != ":" {
                    return Err(head.syntax(2, "expected `map_to_omega NAME : F`"));
                }
                let f = self.expect(head, 3, "Cat presheaf", |v| match v {
                    Value::CatPresheaf(z) => Some(z.clone()),
                    _ => None,
                })?;
                let b = f.base().clone();
                let slices = self.family(&b);
                let mut values: Vec<Vec<Option<SetPresheaf>>> =
                    b.objects().map(|c| vec![None; f.at(c).object_count()]).collect();
                let mut arrow_values: Vec<Vec<Option<SetNat<SetPresheaf>>>> =
                    b.objects().map(|c| vec![None; f.at(c).arrow_count()]).collect();
                for l in body {
                    l.arity(4)?;
                    let c = b.object(l.tok(1)).map_err(|_| l.dangling(1))?;
                    match l.tok(0) {
                        "value" => {
                            let x = f.at(c).object(l.tok(2)).map_err(|_| l.dangling(2))?;
                            values[c.0][x.0] = Some(self.expect(l, 3, "set presheaf", |v| match v {
                                Value::SetPresheaf(z) => Some(z.clone()),
                                _ => None,
                            })?);
                        }
                        "arrow_value" => {
                            let nu = f.at(c).arrow(l.tok(2)).map_err(|_| l.dangling(2))?;
                            arrow_values[c.0][nu.0] = Some(self.expect(l, 3, "set_nat", |v| match v {
                                Value::SetNat(n) => Some(n.clone()),
                                _ => None,
                            })?);
                        }
                        _ => return Err(bad_line(l)),
                    }
                }
                let missing = |what: String| inv(Error::InvalidMapToOmega(format!("no {what}")));
                let values: Vec<Vec<SetPresheaf>> = b
                    .objects()
                    .map(|c| {
                        values[c.0]
                            .iter()
                            .enumerate()
                            .map(|(i, v)| {
                                v.clone().ok_or_else(|| {
                                    missing(format!(
                                        "value at (`{}`, `{}`)",
                                        b.object_name(c),
                                        f.at(c).object_name(Obj(i))
                                    ))
                                })
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                let arrow_values = b
                    .objects()
                    .map(|c| {
                        let fc = f.at(c);
                        arrow_values[c.0]
                            .iter()
                            .enumerate()
                            .map(|(i, n)| match n {
                                Some(n) => Ok(n.clone()),
                                None if fc.is_identity(Arr(i)) => Ok(SetNat::identity(&values[c.0][fc.dom(Arr(i)).0])),
                                None => Err(missing(format!(
                                    "arrow value at (`{}`, `{}`)",
                                    b.object_name(c),
                                    fc.arrow_name(Arr(i))
                                ))),
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                Ok(Value::MapToOmega(MapToOmega::new(slices, f, values, arrow_values).map_err(inv)?))
            }
            _ => unreachable!("header keywords are checked by the caller"),
        }
    }

    /// `KEYWORD NAME : A -> B`
    fn arrow_header(&self, head: &Line) -> Result<(), ParseError> {
        if head.toks.len() != 6 || head.tok(2) != ":" || head.tok(4) != "->" {
            return Err(head.syntax(2, format!("expected `{} NAME : A -> B`", head.tok(0))));
        }
        Ok(())
    }

    /// The object at token `i` and the sieve generated by the arrows after it.
    fn generated(&self, cat: &FinCat, l: &Line, i: usize) -> Result<(Obj, Sieve), ParseError> {
        let c = cat.object(l.tok(i)).map_err(|_| l.dangling(i))?;
        let arrows: Vec<Arr> =
            (i + 1..l.toks.len()).map(|k| cat.arrow(l.tok(k)).map_err(|_| l.dangling(k))).collect::<Result<_, _>>()?;
        let s = sieve_generate(cat, c, &arrows).map_err(|e| l.invariant(i, e))?;
        Ok((c, s))
    }

    fn set_presheaf(
        &self,
        base: &Arc<FinCat>,
        body: &[Line],
        inv: &dyn Fn(Error) -> ParseError,
    ) -> Result<SetPresheaf, ParseError> {
        let mut sets: Vec<Option<Vec<String>>> = vec![None; base.object_count()];
        for l in body.iter().filter(|l| l.tok(0) == "set") {
            if l.toks.len() < 2 {
                return Err(l.syntax(1, "`set` needs an object"));
            }
            let c = base.object(l.tok(1)).map_err(|_| l.dangling(1))?;
            let labels: Vec<String> = l.toks[2..].iter().map(|t| t.text.clone()).collect();
            if labels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(l.invariant(1, Error::InvalidSetFunctor("labels must be sorted and distinct".into())));
            }
            sets[c.0] = Some(labels);
        }
        let sets: Vec<Vec<String>> = sets
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| inv(Error::InvalidSetFunctor(format!("no set at `{}`", base.object_name(Obj(i))))))
            })
            .collect::<Result<_, _>>()?;
        let find = |c: Obj, l: &Line, k: usize| -> Result<usize, ParseError> {
            sets[c.0].binary_search_by(|s| s.as_str().cmp(l.tok(k))).map_err(|_| l.dangling(k))
        };
        let mut maps: Vec<Option<Vec<usize>>> = vec![None; base.arrow_count()];
        for l in body {
            match l.tok(0) {
                "set" => {}
                "map" => {
                    if l.toks.len() < 2 {
                        return Err(l.syntax(1, "`map` needs an arrow"));
                    }
                    let f = base.arrow(l.tok(1)).map_err(|_| l.dangling(1))?;
                    let n = sets[base.cod(f).0].len();
                    if l.toks.len() - 2 != n {
                        return Err(l.syntax(1, format!("expected {n} images")));
                    }
                    maps[f.0] = Some((2..l.toks.len()).map(|k| find(base.dom(f), l, k)).collect::<Result<_, _>>()?);
                }
                _ => return Err(l.syntax(0, format!("unexpected `{}` in a presheaf block", l.tok(0)))),
            }
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(i, m)| match m {
                Some(m) => Ok(m),
                None if base.is_identity(Arr(i)) => Ok((0..sets[base.dom(Arr(i)).0].len()).collect()),
                None => {
                    Err(inv(Error::InvalidSetFunctor(format!("no function given for `{}`", base.arrow_name(Arr(i))))))
                }
            })
            .collect::<Result<_, _>>()?;
        SetPresheaf::new(base.clone(), sets, maps).map_err(inv)
    }

    fn cat_presheaf(
        &self,
        base: &Arc<FinCat>,
        body: &[Line],
        inv: &dyn Fn(Error) -> ParseError,
    ) -> Result<CatPresheaf, ParseError> {
        let mut cats: Vec<Option<Arc<FinCat>>> = vec![None; base.object_count()];
        let mut actions: Vec<Option<FinFunctor>> = vec![None; base.arrow_count()];
        for l in body {
            l.arity(3)?;
            match l.tok(0) {
                "at" => {
                    let c = base.object(l.tok(1)).map_err(|_| l.dangling(1))?;
                    cats[c.0] = Some(self.expect(l, 2, "category", |v| match v {
                        Value::Category(k) => Some(k.clone()),
                        _ => None,
                    })?);
                }
                "action" => {
                    let f = base.arrow(l.tok(1)).map_err(|_| l.dangling(1))?;
                    actions[f.0] = Some(self.expect(l, 2, "functor", |v| match v {
                        Value::Functor(k) => Some(k.clone()),
                        _ => None,
                    })?);
                }
                _ => return Err(l.syntax(0, format!("unexpected `{}` in a presheaf block", l.tok(0)))),
            }
        }
        let cats: Vec<Arc<FinCat>> = cats
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| {
                    inv(Error::InvalidCatPresheaf(format!("no category at `{}`", base.object_name(Obj(i)))))
                })
            })
            .collect::<Result<_, _>>()?;
        let actions = actions
            .into_iter()
            .enumerate()
            .map(|(i, a)| match a {
                Some(a) => Ok(a),
                None if base.is_identity(Arr(i)) => Ok(FinFunctor::identity(cats[base.dom(Arr(i)).0].clone())),
                None => {
                    Err(inv(Error::InvalidCatPresheaf(format!("no functor given for `{}`", base.arrow_name(Arr(i))))))
                }
            })
            .collect::<Result<_, _>>()?;
        CatPresheaf::new(base.clone(), cats, actions).map_err(inv)
    }

    fn descent(&mut self, head: &Line, body: &[Line], budget: &mut Budget) -> Result<Value, ParseError> {
        let inv = |e: Error| head.invariant(1, e);
        let omega = head.toks.len() == 8 && head.tok(3) == "Omega" && head.tok(6) == "under";
        if !(omega || head.toks.len() == 6) || head.tok(2) != ":" || head.tok(4) != "on" {
            return Err(head.syntax(
                2,
                "expected `descent_datum NAME : F on SIEVE` or `descent_datum NAME : Omega on SIEVE under TOPOLOGY`",
            ));
        }
        let (cat, sieve) = self.expect(head, 5, "sieve", |v| match v {
            Value::Sieve(c, s) => Some((c.clone(), s.clone())),
            _ => None,
        })?;
        let pos = |l: &Line, k: usize| -> Result<Arr, ParseError> {
            let f = cat.arrow(l.tok(k)).map_err(|_| l.dangling(k))?;
            if sieve.contains(f) {
                Ok(f)
            } else {
                Err(l.invariant(k, Error::InvalidDescent(format!("`{}` is not in the sieve", l.tok(k)))))
            }
        };
        let pair = |l: &Line| -> Result<(Arr, Arr), ParseError> {
            let f = pos(l, 1)?;
            let g = cat.arrow(l.tok(2)).map_err(|_| l.dangling(2))?;
            if cat.cod(g) != cat.dom(f) {
                return Err(l.invariant(
                    2,
                    Error::InvalidDescent(format!("`{}` does not land in the domain of `{}`", l.tok(2), l.tok(1))),
                ));
            }
            Ok((f, g))
        };
        let index = |f: Arr| sieve.arrows().binary_search(&f).expect("arrow of the sieve");
        if omega {
            let j = self.expect(head, 7, "topology", |v| match v {
                Value::Topology(j) => Some(j.clone()),
                _ => None,
            })?;
            let slices = self.family(&cat);
            let mut locals: Vec<Option<SetPresheaf>> = vec![None; sieve.len()];
            let mut isos = BTreeMap::new();
            for l in body {
                match l.tok(0) {
                    "local" => {
                        l.arity(3)?;
                        let f = pos(l, 1)?;
                        locals[index(f)] = Some(self.expect(l, 2, "set presheaf", |v| match v {
                            Value::SetPresheaf(z) => Some(z.clone()),
                            _ => None,
                        })?);
                    }
                    "iso" => {
                        l.arity(4)?;
                        let key = pair(l)?;
                        isos.insert(
                            key,
                            self.expect(l, 3, "set_nat", |v| match v {
                                Value::SetNat(n) => Some(n.clone()),
                                _ => None,
                            })?,
                        );
                    }
                    _ => return Err(l.syntax(0, format!("unexpected `{}` in a descent_datum block", l.tok(0)))),
                }
            }
            let locals: Vec<SetPresheaf> = locals
                .into_iter()
                .enumerate()
                .map(|(i, m)| {
                    m.ok_or_else(|| {
                        inv(Error::InvalidDescent(format!("no local sheaf at `{}`", cat.arrow_name(sieve.arrows()[i]))))
                    })
                })
                .collect::<Result<_, _>>()?;
            for &f in sieve.arrows() {
                for &g in cat.in_arrows(cat.dom(f)) {
                    if isos.contains_key(&(f, g)) {
                        continue;
                    }
                    let moved = locals[index(f)].reindex(slices.postcompose(g)).map_err(inv)?;
                    isos.insert((f, g), SetNat::identity(&moved));
                }
            }
            let d = OmegaJDatum::new(slices, j, sieve, locals, isos, budget).map_err(inv)?;
            return Ok(Value::OmegaDatum(d));
        }
        let f = self.expect(head, 3, "Cat presheaf", |v| match v {
            Value::CatPresheaf(z) => Some(z.clone()),
            _ => None,
        })?;
        let mut objects: Vec<Option<Obj>> = vec![None; sieve.len()];
        let mut isos = BTreeMap::new();
        for l in body {
            match l.tok(0) {
                "object" => {
                    l.arity(3)?;
                    let a = pos(l, 1)?;
                    objects[index(a)] = Some(f.at(cat.dom(a)).object(l.tok(2)).map_err(|_| l.dangling(2))?);
                }
                "iso" => {
                    l.arity(4)?;
                    let (a, g) = pair(l)?;
                    isos.insert((a, g), f.at(cat.dom(g)).arrow(l.tok(3)).map_err(|_| l.dangling(3))?);
                }
                _ => return Err(l.syntax(0, format!("unexpected `{}` in a descent_datum block", l.tok(0)))),
            }
        }
        let objects: Vec<Obj> = objects
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| {
                    inv(Error::InvalidDescent(format!("no object at `{}`", cat.arrow_name(sieve.arrows()[i]))))
                })
            })
            .collect::<Result<_, _>>()?;
        for &a in sieve.arrows() {
            for &g in cat.in_arrows(cat.dom(a)) {
                if !isos.contains_key(&(a, g)) {
                    let o = f.action(g).obj(objects[index(a)]);
                    isos.insert((a, g), f.at(cat.dom(g)).identity(o));
                }
            }
        }
        Ok(Value::DescentDatum(DescentDatum::new(f, sieve, objects, isos).map_err(inv)?))
    }
}

fn quote(s: &str) -> String {
    let plain = !s.is_empty() && !s.starts_with('#') && !s.chars().any(|c| c.is_whitespace() || c == '"');
    if plain {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

fn join<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    items.into_iter().map(quote).collect::<Vec<_>>().join(" ")
}

/// Canonical serializer. Dependencies are written once, before their first
/// use, under names derived from the caller's hint.
#[derive(Default)]
pub struct Writer {
    out: String,
    used: BTreeSet<String>,
    cats: Vec<(Arc<FinCat>, String)>,
    families: Vec<(Arc<SliceFamily>, String)>,
    functors: Vec<(FinFunctor, String)>,
    set_presheaves: Vec<(SetPresheaf, String)>,
    cat_presheaves: Vec<(CatPresheaf, String)>,
    set_nats: Vec<(SetNat<SetPresheaf>, String)>,
    sieves: Vec<(Sieve, Arc<FinCat>, String)>,
    topologies: Vec<(GrothTopology, String)>,
}

fn find<T: PartialEq>(list: &[(T, String)], v: &T) -> Option<String> {
    list.iter().find(|(x, _)| x == v).map(|(_, n)| n.clone())
}

impl Writer {
    pub fn new() -> Self {
        Writer::default()
    }

    pub fn finish(self) -> String {
        self.out
    }

    fn fresh(&mut self, hint: &str) -> String {
        let base: String = hint.chars().map(|c| if c.is_whitespace() || c == '"' { '_' } else { c }).collect();
        let base = if base.is_empty() || base.starts_with('#') { format!("_{base}") } else { base };
        let mut name = base.clone();
        let mut k = 2;
        while self.used.contains(&name) || HEADERS.contains(&name.as_str()) {
            name = format!("{base}.{k}");
            k += 1;
        }
        self.used.insert(name.clone());
        name
    }

    /// Writes `value` as a block called `name` (or a fresh variant of it),
    /// returning the name used.
    pub fn section(&mut self, name: &str, value: &Value) -> String {
        match value {
            Value::Category(c) => self.write_category(name, c),
            Value::Functor(f) => self.write_functor(name, f),
            Value::SetPresheaf(z) => self.write_set_presheaf(name, z),
            Value::CatPresheaf(f) => self.write_cat_presheaf(name, f),
            Value::SetNat(n) => self.write_set_nat(name, n),
            Value::TwoNat(t) => self.two_nat(name, t),
            Value::Topology(j) => self.write_topology(name, j),
            Value::Sieve(c, s) => self.write_sieve(name, c, s),
            Value::DescentDatum(d) => self.descent_datum(name, d),
            Value::OmegaDatum(d) => self.omega_datum(name, d),
            Value::MapToOmega(z) => self.map_to_omega(name, z),
        }
    }

    pub fn category(&mut self, hint: &str, c: &Arc<FinCat>) -> String {
        if let Some(n) = find(&self.cats, c) {
            return n;
        }
        for k in 0..self.cats.len() {
            let (cat, name) = self.cats[k].clone();
            if cat.object_count() > 0 && !self.families.iter().any(|(f, _)| f.base() == &cat) {
                self.families.push((SliceFamily::new(cat), name));
            }
        }
        for (fam, base) in &self.families {
            for o in fam.base().objects() {
                let name = fam.base().object_name(o);
                if !name.contains('/') && fam.slice(o).cat() == c {
                    return format!("{base}/{name}");
                }
            }
        }
        self.write_category(hint, c)
    }

    fn write_category(&mut self, hint: &str, c: &Arc<FinCat>) -> String {
        let name = self.fresh(hint);
        let o = &mut self.out;
        let _ = writeln!(o, "category {}", quote(&name));
        if c.object_count() > 0 {
            let _ = writeln!(o, "  object {}", join(c.objects().map(|x| c.object_name(x))));
        }
        for a in c.arrows() {
            let _ =
                writeln!(o, "  arrow {}", join([c.arrow_name(a), c.object_name(c.dom(a)), c.object_name(c.cod(a))]));
        }
        for x in c.objects() {
            let _ = writeln!(o, "  identity {}", join([c.object_name(x), c.arrow_name(c.identity(x))]));
        }
        for (g, f) in c.composable_pairs() {
            if !c.is_identity(g) && !c.is_identity(f) {
                let _ =
                    writeln!(o, "  compose {}", join([c.arrow_name(g), c.arrow_name(f), c.arrow_name(c.comp(g, f))]));
            }
        }
        o.push_str("end\n\n");
        self.cats.push((c.clone(), name.clone()));
        name
    }

    fn register_slices(&mut self, base: &Arc<SliceFamily>, base_name: String) {
        if !self.families.iter().any(|(f, _)| f.base() == base.base()) {
            self.families.push((base.clone(), base_name));
        }
    }

    pub fn functor(&mut self, hint: &str, f: &FinFunctor) -> String {
        match find(&self.functors, f) {
            Some(n) => n,
            None => self.write_functor(hint, f),
        }
    }

    fn write_functor(&mut self, hint: &str, f: &FinFunctor) -> String {
        let s = self.category(&format!("{hint}.source"), f.source());
        let t = self.category(&format!("{hint}.target"), f.target());
        let name = self.fresh(hint);
        let (a, b) = (f.source(), f.target());
        let o = &mut self.out;
        let _ = writeln!(o, "functor {} : {} -> {}", quote(&name), quote(&s), quote(&t));
        for x in a.objects() {
            let _ = writeln!(o, "  obj {}", join([a.object_name(x), b.object_name(f.obj(x))]));
        }
        for x in a.arrows().filter(|&x| !a.is_identity(x)) {
            let _ = writeln!(o, "  arr {}", join([a.arrow_name(x), b.arrow_name(f.arr(x))]));
        }
        o.push_str("end\n\n");
        self.functors.push((f.clone(), name.clone()));
        name
    }

    pub fn set_presheaf(&mut self, hint: &str, z: &SetPresheaf) -> String {
        match find(&self.set_presheaves, z) {
            Some(n) => n,
            None => self.write_set_presheaf(hint, z),
        }
    }

    fn write_set_presheaf(&mut self, hint: &str, z: &SetPresheaf) -> String {
        let b = z.base().clone();
        let base = self.category(&format!("{hint}.base"), &b);
        let name = self.fresh(hint);
        let o = &mut self.out;
        let _ = writeln!(o, "presheaf {} : {} -> Set", quote(&name), quote(&base));
        for c in b.objects() {
            let mut line = format!("  set {}", quote(b.object_name(c)));
            for x in z.set(c) {
                line.push(' ');
                line.push_str(&quote(x));
            }
            let _ = writeln!(o, "{line}");
        }
        for f in b.arrows().filter(|&f| !b.is_identity(f)) {
            let d = b.dom(f);
            let mut line = format!("  map {}", quote(b.arrow_name(f)));
            for &y in z.map(f) {
                line.push(' ');
                line.push_str(&quote(&z.set(d)[y]));
            }
            let _ = writeln!(o, "{line}");
        }
        o.push_str("end\n\n");
        self.set_presheaves.push((z.clone(), name.clone()));
        name
    }

    pub fn cat_presheaf(&mut self, hint: &str, f: &CatPresheaf) -> String {
        match find(&self.cat_presheaves, f) {
            Some(n) => n,
            None => self.write_cat_presheaf(hint, f),
        }
    }

    fn write_cat_presheaf(&mut self, hint: &str, f: &CatPresheaf) -> String {
        let b = f.base().clone();
        let base = self.category(&format!("{hint}.base"), &b);
        let cats: Vec<String> =
            b.objects().map(|c| self.category(&format!("{hint}.{}", b.object_name(c)), f.at(c))).collect();
        let actions: Vec<(Arr, String)> = b
            .arrows()
            .filter(|&a| !b.is_identity(a))
            .map(|a| (a, self.functor(&format!("{hint}.{}", b.arrow_name(a)), f.action(a))))
            .collect();
        let name = self.fresh(hint);
        let o = &mut self.out;
        let _ = writeln!(o, "presheaf {} : {} -> Cat", quote(&name), quote(&base));
        for c in b.objects() {
            let _ = writeln!(o, "  at {} {}", quote(b.object_name(c)), quote(&cats[c.0]));
        }
        for (a, n) in actions {
            let _ = writeln!(o, "  action {} {}", quote(b.arrow_name(a)), quote(&n));
        }
        o.push_str("end\n\n");
        self.cat_presheaves.push((f.clone(), name.clone()));
        name
    }

    pub fn set_nat(&mut self, hint: &str, n: &SetNat<SetPresheaf>) -> String {
        match find(&self.set_nats, n) {
            Some(k) => k,
            None => self.write_set_nat(hint, n),
        }
    }

    fn write_set_nat(&mut self, hint: &str, n: &SetNat<SetPresheaf>) -> String {
        let s = self.set_presheaf(&format!("{hint}.source"), n.source());
        let t = self.set_presheaf(&format!("{hint}.target"), n.target());
        let name = self.fresh(hint);
        let b = n.source().base().clone();
        let o = &mut self.out;
        let _ = writeln!(o, "set_nat {} : {} -> {}", quote(&name), quote(&s), quote(&t));
        for c in b.objects() {
            let mut line = format!("  component {}", quote(b.object_name(c)));
            for &y in n.component(c) {
                line.push(' ');
                line.push_str(&quote(&n.target().set(c)[y]));
            }
            let _ = writeln!(o, "{line}");
        }
        o.push_str("end\n\n");
        self.set_nats.push((n.clone(), name.clone()));
        name
    }

    pub fn two_nat(&mut self, hint: &str, t: &TwoNat) -> String {
        let g = self.cat_presheaf(&format!("{hint}.source"), t.source());
        let f = self.cat_presheaf(&format!("{hint}.target"), t.target());
        let b = t.base().clone();
        let comps: Vec<String> =
            b.objects().map(|c| self.functor(&format!("{hint}.{}", b.object_name(c)), t.component(c))).collect();
        let name = self.fresh(hint);
        let o = &mut self.out;
        let _ = writeln!(o, "two_nat {} : {} -> {}", quote(&name), quote(&g), quote(&f));
        for c in b.objects() {
            let _ = writeln!(o, "  component {} {}", quote(b.object_name(c)), quote(&comps[c.0]));
        }
        o.push_str("end\n\n");
        name
    }

    pub fn topology(&mut self, hint: &str, j: &GrothTopology) -> String {
        match find(&self.topologies, j) {
            Some(n) => n,
            None => self.write_topology(hint, j),
        }
    }

    fn write_topology(&mut self, hint: &str, j: &GrothTopology) -> String {
        let cat = j.cat().clone();
        let base = self.category(&format!("{hint}.cat"), &cat);
        let name = self.fresh(hint);
        let o = &mut self.out;
        let _ = writeln!(o, "topology {} on {}", quote(&name), quote(&base));
        for c in cat.objects() {
            for s in j.covers(c) {
                let mut line = format!("  cover {}", quote(cat.object_name(c)));
                for &a in s.arrows() {
                    line.push(' ');
                    line.push_str(&quote(cat.arrow_name(a)));
                }
                let _ = writeln!(o, "{line}");
            }
        }
        o.push_str("end\n\n");
        self.topologies.push((j.clone(), name.clone()));
        name
    }

    pub fn sieve(&mut self, hint: &str, cat: &Arc<FinCat>, s: &Sieve) -> String {
        match self.sieves.iter().find(|(x, c, _)| x == s && c == cat) {
            Some((_, _, n)) => n.clone(),
            None => self.write_sieve(hint, cat, s),
        }
    }

    fn write_sieve(&mut self, hint: &str, cat: &Arc<FinCat>, s: &Sieve) -> String {
        let base = self.category(&format!("{hint}.cat"), cat);
        let name = self.fresh(hint);
        let o = &mut self.out;
        let _ = writeln!(o, "sieve {} on {} at {}", quote(&name), quote(&base), quote(cat.object_name(s.at())));
        if !s.is_empty() {
            let _ = writeln!(o, "  arrows {}", join(s.arrows().iter().map(|&a| cat.arrow_name(a))));
        }
        o.push_str("end\n\n");
        self.sieves.push((s.clone(), cat.clone(), name.clone()));
        name
    }

    pub fn descent_datum(&mut self, hint: &str, d: &DescentDatum) -> String {
        let f = d.presheaf();
        let b = f.base().clone();
        let fname = self.cat_presheaf(&format!("{hint}.presheaf"), f);
        let sname = self.sieve(&format!("{hint}.sieve"), &b, d.sieve());
        let name = self.fresh(hint);
        let o = &mut self.out;
        let _ = writeln!(o, "descent_datum {} : {} on {}", quote(&name), quote(&fname), quote(&sname));
        for &a in d.sieve().arrows() {
            let _ = writeln!(o, "  object {}", join([b.arrow_name(a), f.at(b.dom(a)).object_name(d.object(a))]));
        }
        for (&(a, g), &nu) in d.isos() {
            let fe = f.at(b.dom(g));
            if !fe.is_identity(nu) {
                let _ = writeln!(o, "  iso {}", join([b.arrow_name(a), b.arrow_name(g), fe.arrow_name(nu)]));
            }
        }
        o.push_str("end\n\n");
        name
    }

    pub fn omega_datum(&mut self, hint: &str, d: &OmegaJDatum) -> String {
        let slices = d.slices().clone();
        let b = slices.base().clone();
        let base = self.category(&format!("{hint}.cat"), &b);
        self.register_slices(&slices, base);
        let sname = self.sieve(&format!("{hint}.sieve"), &b, d.sieve());
        let jname = self.topology(&format!("{hint}.topology"), d.topology());
        let locals: Vec<String> = d
            .sieve()
            .arrows()
            .iter()
            .map(|&f| self.set_presheaf(&format!("{hint}.{}", b.arrow_name(f)), d.local(f)))
            .collect();
        let mut isos = Vec::new();
        for &f in d.sieve().arrows() {
            for &g in b.in_arrows(b.dom(f)) {
                let n = d.iso(f, g);
                if !(n.source() == n.target() && *n == SetNat::identity(n.source())) {
                    let k = self.set_nat(&format!("{hint}.{}.{}", b.arrow_name(f), b.arrow_name(g)), n);
                    isos.push((f, g, k));
                }
            }
        }
        let name = self.fresh(hint);
        let o = &mut self.out;
        let _ = writeln!(o, "descent_datum {} : Omega on {} under {}", quote(&name), quote(&sname), quote(&jname));
        for (i, &f) in d.sieve().arrows().iter().enumerate() {
            let _ = writeln!(o, "  local {} {}", quote(b.arrow_name(f)), quote(&locals[i]));
        }
        for (f, g, k) in isos {
            let _ = writeln!(o, "  iso {}", join([b.arrow_name(f), b.arrow_name(g), &k]));
        }
        o.push_str("end\n\n");
        name
    }

    pub fn map_to_omega(&mut self, hint: &str, z: &MapToOmega) -> String {
        let b = z.base().clone();
        let f = z.source();
        let fname = self.cat_presheaf(&format!("{hint}.source"), f);
        let base = self.category(&format!("{hint}.base"), &b);
        self.register_slices(z.slices(), base);
        let mut lines = Vec::new();
        for c in b.objects() {
            let fc = f.at(c);
            for x in fc.objects() {
                let hint = format!("{hint}.{}.{}", b.object_name(c), fc.object_name(x));
                let v = self.set_presheaf(&hint, z.value(c, x));
                lines.push(format!("  value {}", join([b.object_name(c), fc.object_name(x), &v])));
            }
            for nu in fc.arrows().filter(|&nu| !fc.is_identity(nu)) {
                let hint = format!("{hint}.{}.{}", b.object_name(c), fc.arrow_name(nu));
                let n = self.set_nat(&hint, z.arrow_value(c, nu));
                lines.push(format!("  arrow_value {}", join([b.object_name(c), fc.arrow_name(nu), &n])));
            }
        }
        let name = self.fresh(hint);
        let o = &mut self.out;
        let _ = writeln!(o, "map_to_omega {} : {}", quote(&name), quote(&fname));
        for l in lines {
            let _ = writeln!(o, "{l}");
        }
        o.push_str("end\n\n");
        name
    }
}

/// Text for a single value and its dependencies.
pub fn serialize(name: &str, value: &Value) -> String {
    let mut w = Writer::new();
    w.section(name, value);
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::search::DEFAULT_BOUND;

    fn parse(text: &str) -> Result<Document, ParseError> {
        parse_str(text, &mut Budget::new(DEFAULT_BOUND))
    }

    const ARROW: &str = "category WalkingArrow freely-generate\n  object a b\n  arrow u a b\nend\n";

    #[test]
    fn walking_arrow_parses() {
        let doc = parse(ARROW).unwrap();
        let Some(Value::Category(c)) = doc.get("WalkingArrow") else { panic!() };
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.arrow_count(), 3);
        assert_eq!(**c, *corpus::walking_arrow());
    }

    #[test]
    fn unknown_arrow_in_compose_is_dangling() {
        let text = "category C\n  object a\n  arrow id_a a a\n  arrow e a a\n  identity a id_a\n  compose e e k\nend\n";
        match parse(text) {
            Err(ParseError::DanglingReference { line: 6, column: 15, name }) => assert_eq!(name, "k"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn open_site_topology_round_trips() {
        let text = "category Open\n  object 0 1 12 2\n  arrow id_0 0 0\n  arrow id_1 1 1\n  arrow id_2 2 2\n  arrow id_12 12 12\n  arrow 0<1 0 1\n  arrow 0<2 0 2\n  arrow 0<12 0 12\n  arrow 1<12 1 12\n  arrow 2<12 2 12\n  identity 0 id_0\n  identity 1 id_1\n  identity 2 id_2\n  identity 12 id_12\n  compose 1<12 0<1 0<12\n  compose 2<12 0<2 0<12\nend\ntopology J on Open closed\n  cover 12 1<12 2<12\n  cover 0\nend\n";
        let doc = parse(text).unwrap();
        let Some(Value::Topology(j)) = doc.get("J") else { panic!() };
        assert_eq!(*j, corpus::open_topology());
        let canon = doc.to_text();
        let again = parse(&canon).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_text(), canon);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("category C\n  object a\n") {
            Err(ParseError::Syntax { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse("presheaf Z : Nowhere -> Set\nend\n") {
            Err(ParseError::DanglingReference { line: 1, column: 14, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quoted_labels_survive() {
        let mut text = String::from(ARROW);
        text.push_str("presheaf Z : WalkingArrow -> Set\n  set a \"x y\"\n  set b \"#1\" \"q\\\"\"\n  map u \"x y\" \"x y\"\nend\n");
        let doc = parse(&text).unwrap();
        let Some(Value::SetPresheaf(z)) = doc.get("Z") else { panic!() };
        assert_eq!(z.set(Obj(1)), ["#1", "q\""]);
        assert_eq!(parse(&doc.to_text()).unwrap(), doc);
    }

    #[test]
    fn omega_descent_datum_round_trips() {
        for (name, d) in corpus::omega_j_data().into_iter().take(4) {
            let text = serialize(&name, &Value::OmegaDatum(d.clone()));
            let doc = parse(&text).unwrap();
            assert_eq!(doc.get(&name), Some(&Value::OmegaDatum(d)));
            assert_eq!(doc.to_text(), text);
        }
    }
}
