//! Text formats: an expression grammar for [`ProcExpr`] and a JSON document
//! format for events, actions and processes.
//!
//! Expression operators, tightest first: `|` (communication), then `||`,
//! `|L`, `|R` (merges), then `.` (sequencing), then `+` (choice). All are
//! left-associative. Abstraction is written `tau{a,b}(expr)` and an atom may
//! carry states as `name[in->out]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Map, Value};

use crate::acp::ProcExpr;
use crate::error::{Error, Result};
use crate::model::{
    Action, Category, CompatConstraint, CompatMode, Document, Element, Event, EventKind, Process, Relations,
    SemanticMap, SpaceGraph, Status, System, TemporalCoord, TAU,
};
use crate::rational::Rational;

/// A region of the input, as byte offsets plus the 1-based line and column of `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    fn at(text: &str, start: usize, end: usize) -> Self {
        let start = start.min(text.len());
        let end = end.clamp(start, text.len());
        let before = &text[..start];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        SourceSpan {
            start,
            end,
            line,
            column,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: BTreeSet<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.span.line, self.span.column, self.message
        )?;
        if !self.expected.is_empty() {
            let list: Vec<&str> = self.expected.iter().map(String::as_str).collect();
            write!(f, " (expected {})", list.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Plus,
    Dot,
    Merge,
    LeftMerge,
    RightMerge,
    Bar,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Arrow,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::End => "end of input".into(),
            t => format!("{:?}", t.spelling()),
        }
    }

    fn spelling(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Dot => ".",
            Tok::Merge => "||",
            Tok::LeftMerge => "|L",
            Tok::RightMerge => "|R",
            Tok::Bar => "|",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Arrow => "->",
            Tok::Comma => ",",
            Tok::Ident(_) => "identifier",
            Tok::End => "end of input",
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> std::result::Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let char_at = |k: usize| bytes.get(k).map(|&(_, c)| c);
    let off = |k: usize| bytes.get(k).map_or(text.len(), |&(o, _)| o);
    while i < bytes.len() {
        let c = bytes[i].1;
        let start = off(i);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = match c {
            '+' => (Tok::Plus, 1),
            '.' => (Tok::Dot, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            ',' => (Tok::Comma, 1),
            '-' if char_at(i + 1) == Some('>') => (Tok::Arrow, 2),
            '|' => match char_at(i + 1) {
                Some('|') => (Tok::Merge, 2),
                Some(m @ ('L' | 'R')) if !char_at(i + 2).is_some_and(is_ident_char) => {
                    (if m == 'L' { Tok::LeftMerge } else { Tok::RightMerge }, 2)
                }
                _ => (Tok::Bar, 1),
            },
            c if is_ident_start(c) => {
                let mut j = i;
                while char_at(j).is_some_and(is_ident_char) {
                    j += 1;
                }
                (Tok::Ident(text[start..off(j)].to_string()), j - i)
            }
            c => {
                return Err(ParseError {
                    span: SourceSpan::at(text, start, start + c.len_utf8()),
                    message: format!("unexpected character {c:?}"),
                    expected: BTreeSet::new(),
                })
            }
        };
        out.push((tok, start, off(i + len)));
        i += len;
    }
    out.push((Tok::End, text.len(), text.len()));
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

type Combine = fn(ProcExpr, ProcExpr) -> ProcExpr;
type PResult<T> = std::result::Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>, expected: &[&str]) -> PResult<T> {
        let (_, s, e) = self.toks[self.pos];
        Err(ParseError {
            span: SourceSpan::at(self.text, s, e),
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let found = self.peek().describe();
            self.error(format!("unexpected {found}"), &[tok.spelling()])
        }
    }

    fn ident(&mut self) -> PResult<(String, usize, usize)> {
        match self.bump() {
            (Tok::Ident(s), a, b) => Ok((s, a, b)),
            (t, ..) => {
                self.pos -= usize::from(t != Tok::End);
                self.error(format!("unexpected {}", t.describe()), &["identifier"])
            }
        }
    }

    fn binary(&mut self, next: fn(&mut Self) -> PResult<ProcExpr>, ops: &[(Tok, Combine)]) -> PResult<ProcExpr> {
        let mut lhs = next(self)?;
        while let Some((_, make)) = ops.iter().find(|(t, _)| t == self.peek()) {
            self.bump();
            let rhs = next(self)?;
            lhs = make(lhs, rhs);
        }
        Ok(lhs)
    }

    fn choice(&mut self) -> PResult<ProcExpr> {
        self.binary(Self::seq, &[(Tok::Plus, ProcExpr::choice)])
    }

    fn seq(&mut self) -> PResult<ProcExpr> {
        self.binary(Self::merge_term, &[(Tok::Dot, ProcExpr::seq)])
    }

    fn merge_term(&mut self) -> PResult<ProcExpr> {
        self.binary(
            Self::comm_term,
            &[
                (Tok::Merge, ProcExpr::merge),
                (Tok::LeftMerge, ProcExpr::left_merge),
                (Tok::RightMerge, ProcExpr::right_merge),
            ],
        )
    }

    fn comm_term(&mut self) -> PResult<ProcExpr> {
        self.binary(Self::primary, &[(Tok::Bar, ProcExpr::comm)])
    }

    fn primary(&mut self) -> PResult<ProcExpr> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.choice()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) if name == TAU => {
                let (_, s, e) = self.bump();
                if *self.peek() != Tok::LBrace {
                    return Err(ParseError {
                        span: SourceSpan::at(self.text, s, e),
                        message: format!("{TAU:?} is reserved and cannot name an atom"),
                        expected: ["{".to_string()].into(),
                    });
                }
                self.bump();
                let mut hide = BTreeSet::new();
                loop {
                    let (n, a, b) = self.ident()?;
                    if n == TAU {
                        return Err(ParseError {
                            span: SourceSpan::at(self.text, a, b),
                            message: format!("{TAU:?} is reserved and cannot be hidden"),
                            expected: BTreeSet::new(),
                        });
                    }
                    hide.insert(n);
                    match self.peek() {
                        Tok::Comma => {
                            self.bump();
                        }
                        Tok::RBrace => break,
                        t => {
                            let found = t.describe();
                            return self.error(format!("unexpected {found}"), &[",", "}"]);
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                self.expect(Tok::LParen)?;
                let body = self.choice()?;
                self.expect(Tok::RParen)?;
                Ok(ProcExpr::Abstract(hide, Box::new(body)))
            }
            Tok::Ident(_) => {
                let (name, ..) = self.bump();
                let Tok::Ident(name) = name else { unreachable!() };
                if *self.peek() == Tok::LBracket {
                    self.bump();
                    let (i, ..) = self.ident()?;
                    self.expect(Tok::Arrow)?;
                    let (o, ..) = self.ident()?;
                    self.expect(Tok::RBracket)?;
                    Ok(ProcExpr::atom_with_states(name, i, o))
                } else {
                    Ok(ProcExpr::atom(name))
                }
            }
            t => self.error(format!("unexpected {}", t.describe()), &["identifier", "(", "tau"]),
        }
    }
}

/// Parses an expression. A bare `tau` atom is a reserved-name error.
pub fn parse_expr(text: &str) -> Result<ProcExpr> {
    let mut p = Parser {
        text,
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.choice()?;
    if *p.peek() != Tok::End {
        let found = p.peek().describe();
        p.error(
            format!("unexpected {found}"),
            &["+", ".", "||", "|L", "|R", "|", "end of input"],
        )?;
    }
    Ok(e)
}

fn level(e: &ProcExpr) -> u8 {
    match e {
        ProcExpr::Choice(..) => 0,
        ProcExpr::Seq(..) => 1,
        ProcExpr::Merge(..) | ProcExpr::LeftMerge(..) | ProcExpr::RightMerge(..) => 2,
        ProcExpr::Comm(..) => 3,
        ProcExpr::Atom { .. } | ProcExpr::Abstract(..) => 4,
    }
}

fn write_expr(e: &ProcExpr, out: &mut String) {
    let (l, r, op) = match e {
        ProcExpr::Atom {
            name,
            in_state,
            out_state,
        } => {
            out.push_str(name);
            if let (Some(i), Some(o)) = (in_state, out_state) {
                out.push_str(&format!("[{i}->{o}]"));
            }
            return;
        }
        ProcExpr::Abstract(hide, body) => {
            let names: Vec<&str> = hide.iter().map(String::as_str).collect();
            out.push_str(&format!("tau{{{}}}(", names.join(",")));
            write_expr(body, out);
            out.push(')');
            return;
        }
        ProcExpr::Choice(l, r) => (l, r, " + "),
        ProcExpr::Seq(l, r) => (l, r, "."),
        ProcExpr::Merge(l, r) => (l, r, " || "),
        ProcExpr::LeftMerge(l, r) => (l, r, " |L "),
        ProcExpr::RightMerge(l, r) => (l, r, " |R "),
        ProcExpr::Comm(l, r) => (l, r, " | "),
    };
    let here = level(e);
    let operand = |x: &ProcExpr, wrap: bool, out: &mut String| {
        if wrap {
            out.push('(');
            write_expr(x, out);
            out.push(')');
        } else {
            write_expr(x, out);
        }
    };
    operand(l, level(l) < here, out);
    out.push_str(op);
    operand(r, level(r) <= here, out);
}

/// Minimal-parenthesis text for an expression; parses back to the same tree.
pub fn serialize_expr(e: &ProcExpr) -> String {
    let mut out = String::new();
    write_expr(e, &mut out);
    out
}

fn time_json(t: &TemporalCoord) -> Value {
    match t {
        TemporalCoord::Point(x) => json!(x.to_string()),
        TemporalCoord::Interval(b, e) => json!([b.to_string(), e.to_string()]),
        TemporalCoord::Points(ts) => json!({ "points": ts.iter().map(|x| x.to_string()).collect::<Vec<_>>() }),
    }
}

fn event_json(e: &Event) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(e.name));
    if let Some(t) = &e.tag.time {
        m.insert("time".into(), time_json(t));
    }
    if let Some(s) = &e.tag.space {
        m.insert("space".into(), json!(s));
    }
    m.insert("kind".into(), json!(e.kind.as_str()));
    if let Some(c) = &e.carrier {
        m.insert("carrier".into(), json!(c));
    }
    if let Some(s) = &e.in_state {
        m.insert("in".into(), json!(s));
    }
    if let Some(s) = &e.out_state {
        m.insert("out".into(), json!(s));
    }
    m.insert("observable".into(), json!(e.observable));
    if let Some(c) = e.category {
        m.insert("category".into(), json!(c.as_str()));
    }
    Value::Object(m)
}

fn frame_json<T: Element>(s: &System<T>, key: &str, element: impl Fn(&T) -> Value, out: &mut Map<String, Value>) {
    let elements: Map<String, Value> = s.elements().iter().map(|(id, x)| (id.clone(), element(x))).collect();
    out.insert(key.into(), Value::Object(elements));
    let rels: Map<String, Value> = s
        .relations()
        .iter()
        .filter(|(_, pairs)| !pairs.is_empty())
        .map(|(l, pairs)| {
            (
                l.clone(),
                json!(pairs.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>()),
            )
        })
        .collect();
    out.insert("relations".into(), Value::Object(rels));
    let cons: Vec<Value> = s
        .constraints()
        .iter()
        .map(|c| json!({ "from": c.from, "to": c.to, "mode": c.mode.as_str() }))
        .collect();
    out.insert("constraints".into(), json!(cons));
    out.insert("status".into(), json!(s.status().as_str()));
    if let Status::Emerging(ids) = s.status() {
        out.insert("actualized".into(), json!(ids));
    }
}

fn action_json(a: &Action) -> Value {
    let mut m = Map::new();
    frame_json(a, "events", event_json, &mut m);
    m.insert("shared_carriers".into(), json!(a.shared_carriers()));
    Value::Object(m)
}

fn process_json(p: &Process) -> Value {
    let mut m = Map::new();
    frame_json(p, "actions", action_json, &mut m);
    Value::Object(m)
}

pub fn document_json(d: &Document) -> Value {
    let edges: Vec<Value> = d.space_graph.edges.iter().map(|(a, b)| json!([a, b])).collect();
    json!({
        "space_graph": { "nodes": d.space_graph.nodes, "edges": edges },
        "semantics": d.semantics.entries,
        "actions": d.actions.iter().map(|(k, a)| (k.clone(), action_json(a))).collect::<Map<_, _>>(),
        "processes": d.processes.iter().map(|(k, p)| (k.clone(), process_json(p))).collect::<Map<_, _>>(),
    })
}

/// Canonical text: sorted keys, two-space indentation, LF line ends and a final newline.
pub fn serialize_document(d: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&document_json(d)).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// A JSON value with the path that led to it, for schema errors.
#[derive(Clone, Copy)]
struct At<'a> {
    v: &'a Value,
    path: &'a str,
}

fn child(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

impl<'a> At<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::schema(
            if self.path.is_empty() { "$" } else { self.path },
            message,
        ))
    }

    fn object(&self) -> Result<&'a Map<String, Value>> {
        self.v.as_object().map_or_else(|| self.err("expected an object"), Ok)
    }

    fn array(&self) -> Result<&'a Vec<Value>> {
        self.v.as_array().map_or_else(|| self.err("expected an array"), Ok)
    }

    fn str(&self) -> Result<&'a str> {
        self.v.as_str().map_or_else(|| self.err("expected a string"), Ok)
    }

    fn rational(&self) -> Result<Rational> {
        self.str()?
            .parse()
            .or_else(|_| self.err("expected a rational string such as \"3/2\""))
    }

    fn strings(&self) -> Result<Vec<String>> {
        let arr = self.array()?;
        let mut out = Vec::with_capacity(arr.len());
        for (i, x) in arr.iter().enumerate() {
            let p = format!("{}[{i}]", self.path);
            out.push(At { v: x, path: &p }.str()?.to_string());
        }
        Ok(out)
    }

    fn pair(&self) -> Result<(String, String)> {
        match self.strings()?.as_slice() {
            [a, b] => Ok((a.clone(), b.clone())),
            _ => self.err("expected a pair of strings"),
        }
    }
}

/// Only the listed keys may appear; returns a lookup for optional keys.
fn fields<'a>(at: At<'a>, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let m = at.object()?;
    for k in m.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::schema(child(at.path, k), "unknown key"));
        }
    }
    Ok(m)
}

fn opt_string(m: &Map<String, Value>, path: &str, key: &str) -> Result<Option<String>> {
    match m.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => {
            let p = child(path, key);
            Ok(Some(At { v, path: &p }.str()?.to_string()))
        }
    }
}

fn parse_time(at: At) -> Result<TemporalCoord> {
    let bad = |e: Error| Error::schema(at.path, e.to_string());
    match at.v {
        Value::String(_) => Ok(TemporalCoord::Point(at.rational()?)),
        Value::Array(items) if items.len() == 2 => {
            let p0 = format!("{}[0]", at.path);
            let p1 = format!("{}[1]", at.path);
            let b = At {
                v: &items[0],
                path: &p0,
            }
            .rational()?;
            let e = At {
                v: &items[1],
                path: &p1,
            }
            .rational()?;
            TemporalCoord::interval(b, e).map_err(bad)
        }
        Value::Object(_) => {
            let m = fields(at, &["points"])?;
            let p = child(at.path, "points");
            let Some(v) = m.get("points") else {
                return at.err("missing key \"points\"");
            };
            let arr = At { v, path: &p }.array()?;
            let mut ts = Vec::with_capacity(arr.len());
            for (i, x) in arr.iter().enumerate() {
                let pi = format!("{p}[{i}]");
                ts.push(At { v: x, path: &pi }.rational()?);
            }
            TemporalCoord::points(ts).map_err(bad)
        }
        _ => at.err("expected a rational string, a [begin, end] pair or {\"points\": [...]}"),
    }
}

fn parse_event(at: At) -> Result<Event> {
    let m = fields(
        at,
        &[
            "name",
            "time",
            "space",
            "kind",
            "carrier",
            "in",
            "out",
            "observable",
            "category",
        ],
    )?;
    let name = match m.get("name") {
        Some(v) => {
            let p = child(at.path, "name");
            At { v, path: &p }.str()?.to_string()
        }
        None => return at.err("missing key \"name\""),
    };
    let mut e = Event::named(name);
    if let Some(v) = m.get("time").filter(|v| !v.is_null()) {
        let p = child(at.path, "time");
        e.tag.time = Some(parse_time(At { v, path: &p })?);
    }
    e.tag.space = opt_string(m, at.path, "space")?;
    if let Some(k) = opt_string(m, at.path, "kind")? {
        e.kind =
            EventKind::parse(&k).ok_or_else(|| Error::schema(child(at.path, "kind"), format!("unknown kind {k:?}")))?;
    }
    e.carrier = opt_string(m, at.path, "carrier")?;
    e.in_state = opt_string(m, at.path, "in")?;
    e.out_state = opt_string(m, at.path, "out")?;
    if let Some(v) = m.get("observable") {
        e.observable = v
            .as_bool()
            .ok_or_else(|| Error::schema(child(at.path, "observable"), "expected a boolean"))?;
    }
    if let Some(c) = opt_string(m, at.path, "category")? {
        e.category = Some(
            Category::parse(&c)
                .ok_or_else(|| Error::schema(child(at.path, "category"), format!("unknown category {c:?}")))?,
        );
    }
    Ok(e)
}

fn parse_system<'a, T: Element>(
    at: At<'a>,
    key: &str,
    extra: &[&str],
    element: impl Fn(At) -> Result<T>,
) -> Result<(System<T>, &'a Map<String, Value>)> {
    let mut allowed = vec![key, "relations", "constraints", "status", "actualized"];
    allowed.extend_from_slice(extra);
    let m = fields(at, &allowed)?;
    let mut elements = Vec::new();
    if let Some(v) = m.get(key) {
        let p = child(at.path, key);
        for (id, x) in (At { v, path: &p }).object()? {
            let pi = child(&p, id);
            elements.push((id.clone(), element(At { v: x, path: &pi })?));
        }
    }
    let mut rels = Relations::new();
    if let Some(v) = m.get("relations") {
        let p = child(at.path, "relations");
        for (label, pairs) in (At { v, path: &p }).object()? {
            let pl = child(&p, label);
            let set = rels.entry(label.clone()).or_default();
            for (i, pair) in (At { v: pairs, path: &pl }).array()?.iter().enumerate() {
                let pi = format!("{pl}[{i}]");
                set.insert(At { v: pair, path: &pi }.pair()?);
            }
        }
    }
    let mut cons = BTreeSet::new();
    if let Some(v) = m.get("constraints") {
        let p = child(at.path, "constraints");
        for (i, c) in (At { v, path: &p }).array()?.iter().enumerate() {
            let pi = format!("{p}[{i}]");
            let cm = fields(At { v: c, path: &pi }, &["from", "to", "mode"])?;
            let get = |k: &str| -> Result<String> {
                opt_string(cm, &pi, k)?.ok_or_else(|| Error::schema(pi.clone(), format!("missing key {k:?}")))
            };
            let mode = get("mode")?;
            let mode = CompatMode::parse(&mode)
                .ok_or_else(|| Error::schema(child(&pi, "mode"), format!("unknown mode {mode:?}")))?;
            cons.insert(CompatConstraint::new(get("from")?, get("to")?, mode));
        }
    }
    let status = match opt_string(m, at.path, "status")?.as_deref() {
        None | Some("actualized") => Status::Actualized,
        Some("potential") => Status::Potential,
        Some("emerging") => {
            let p = child(at.path, "actualized");
            let ids = match m.get("actualized") {
                Some(v) => At { v, path: &p }.strings()?.into_iter().collect(),
                None => BTreeSet::new(),
            };
            Status::Emerging(ids)
        }
        Some(s) => return Err(Error::schema(child(at.path, "status"), format!("unknown status {s:?}"))),
    };
    if m.contains_key("actualized") && !matches!(status, Status::Emerging(_)) {
        return Err(Error::schema(
            child(at.path, "actualized"),
            "only emerging systems list an actualized part",
        ));
    }
    let sys = System::form(elements, rels, cons, status).map_err(|e| Error::schema(at.path, e.to_string()))?;
    Ok((sys, m))
}

fn parse_action(at: At) -> Result<Action> {
    let (a, m) = parse_system(at, "events", &["shared_carriers"], parse_event)?;
    let carriers = match m.get("shared_carriers") {
        Some(v) => {
            let p = child(at.path, "shared_carriers");
            At { v, path: &p }.strings()?
        }
        None => Vec::new(),
    };
    Ok(a.with_shared_carriers(carriers))
}

fn parse_process(at: At) -> Result<Process> {
    Ok(parse_system(at, "actions", &[], parse_action)?.0)
}

fn json_syntax_error(text: &str, e: &serde_json::Error) -> ParseError {
    let line = e.line().max(1);
    let start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum::<usize>();
    let col_chars = e.column().saturating_sub(1);
    let in_line = text[start.min(text.len())..]
        .char_indices()
        .nth(col_chars)
        .map_or(text.len() - start.min(text.len()), |(o, _)| o);
    let s = (start + in_line).min(text.len());
    ParseError {
        span: SourceSpan::at(text, s, s),
        message: format!("invalid JSON: {e}"),
        expected: BTreeSet::new(),
    }
}

pub fn document_from_json(v: &Value) -> Result<Document> {
    let root = At { v, path: "" };
    let m = fields(root, &["space_graph", "semantics", "actions", "processes"])?;
    let mut space = SpaceGraph::default();
    if let Some(v) = m.get("space_graph") {
        let sm = fields(At { v, path: "space_graph" }, &["nodes", "edges"])?;
        if let Some(v) = sm.get("nodes") {
            for n in (At {
                v,
                path: "space_graph.nodes",
            })
            .strings()?
            {
                space.add_node(n);
            }
        }
        if let Some(v) = sm.get("edges") {
            for (i, e) in (At {
                v,
                path: "space_graph.edges",
            })
            .array()?
            .iter()
            .enumerate()
            {
                let p = format!("space_graph.edges[{i}]");
                let (a, b) = At { v: e, path: &p }.pair()?;
                space
                    .add_edge(&a, &b)
                    .map_err(|e| Error::schema(p.clone(), e.to_string()))?;
            }
        }
    }
    let mut semantics = SemanticMap::identity();
    if let Some(v) = m.get("semantics") {
        for (k, x) in (At { v, path: "semantics" }).object()? {
            let p = child("semantics", k);
            semantics
                .entries
                .insert(k.clone(), At { v: x, path: &p }.str()?.to_string());
        }
    }
    let mut actions = BTreeMap::new();
    if let Some(v) = m.get("actions") {
        for (k, x) in (At { v, path: "actions" }).object()? {
            let p = child("actions", k);
            actions.insert(k.clone(), parse_action(At { v: x, path: &p })?);
        }
    }
    let mut processes = BTreeMap::new();
    if let Some(v) = m.get("processes") {
        for (k, x) in (At { v, path: "processes" }).object()? {
            let p = child("processes", k);
            processes.insert(k.clone(), parse_process(At { v: x, path: &p })?);
        }
    }
    let doc = Document {
        space_graph: space,
        semantics,
        actions,
        processes,
    };
    doc.validate()?;
    Ok(doc)
}

/// Parses a document. JSON syntax errors carry a span; schema errors name the path.
pub fn parse_document(text: &str) -> Result<Document> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_syntax_error(text, &e))?;
    document_from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{ExprGen, ExprGenConfig, Gen};
    use crate::model::action_of;
    use proptest::prelude::*;

    fn atom(n: &str) -> ProcExpr {
        ProcExpr::atom(n)
    }

    #[test]
    fn precedence_examples() {
        let e = parse_expr("(P.Q) || (R.V)").unwrap();
        assert_eq!(
            e,
            ProcExpr::merge(ProcExpr::seq(atom("P"), atom("Q")), ProcExpr::seq(atom("R"), atom("V")))
        );
        assert_eq!(
            parse_expr("a + b . c").unwrap(),
            ProcExpr::choice(atom("a"), ProcExpr::seq(atom("b"), atom("c")))
        );
        let hidden = parse_expr("tau{c}((a+b).c)").unwrap();
        assert_eq!(
            hidden,
            ProcExpr::Abstract(
                ["c".to_string()].into(),
                Box::new(ProcExpr::seq(ProcExpr::choice(atom("a"), atom("b")), atom("c")))
            )
        );
        assert_eq!(
            parse_expr("a | b || c").unwrap(),
            ProcExpr::merge(ProcExpr::comm(atom("a"), atom("b")), atom("c"))
        );
        assert!(matches!(parse_expr("a - b"), Err(Error::Parse(_))));
    }

    #[test]
    fn left_associative_and_merge_spellings() {
        assert_eq!(
            parse_expr("a.b.c").unwrap(),
            ProcExpr::seq(ProcExpr::seq(atom("a"), atom("b")), atom("c"))
        );
        assert_eq!(
            parse_expr("a |L b").unwrap(),
            ProcExpr::left_merge(atom("a"), atom("b"))
        );
        assert_eq!(
            parse_expr("a|R(b)").unwrap(),
            ProcExpr::right_merge(atom("a"), atom("b"))
        );
        // `|Lx` is communication with the atom `Lx`.
        assert_eq!(parse_expr("a |Lx").unwrap(), ProcExpr::comm(atom("a"), atom("Lx")));
        assert_eq!(
            parse_expr("a[s->t]").unwrap(),
            ProcExpr::atom_with_states("a", "s", "t")
        );
    }

    #[test]
    fn errors_carry_spans() {
        let cases = [
            "",
            "a +",
            "(a",
            "a b",
            "tau",
            "a + tau",
            "a $ b",
            "tau{}(a)",
            "tau{tau}(a)",
            "a[s->]",
            "(a))",
        ];
        for text in cases {
            match parse_expr(text) {
                Err(Error::Parse(p)) => {
                    assert!(p.span.start <= p.span.end && p.span.end <= text.len(), "{text:?}");
                    assert!(!p.message.is_empty());
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        let Err(Error::Parse(p)) = parse_expr("a +\n  $") else {
            panic!()
        };
        assert_eq!((p.span.line, p.span.column, p.span.start), (2, 3, 6));
        let Err(Error::Parse(p)) = parse_expr("a + tau") else {
            panic!()
        };
        assert!(p.message.contains("reserved"));
    }

    #[test]
    fn serializer_uses_minimal_parentheses() {
        for text in [
            "a + b.c",
            "(a + b).c",
            "a.(b.c)",
            "a || b |L c",
            "a || (b |R c)",
            "tau{a,b}(a | b)",
            "(a | b) | c",
        ] {
            let e = parse_expr(text).unwrap();
            let s = serialize_expr(&e);
            assert_eq!(parse_expr(&s).unwrap(), e);
            assert_eq!(serialize_expr(&parse_expr(&s).unwrap()), s);
        }
        assert_eq!(serialize_expr(&parse_expr("((a)+(b))").unwrap()), "a + b");
        assert_eq!(serialize_expr(&parse_expr("a.(b.c)").unwrap()), "a.(b.c)");
    }

    #[test]
    fn times_serialize_as_rational_strings() {
        let a = action_of([Event::point("a", Rational::new(3, 2).unwrap()), Event::point("b", 2)]);
        let mut d = Document::default();
        d.actions.insert("A".into(), a);
        let text = serialize_document(&d);
        assert!(text.contains("\"time\": \"3/2\""));
        assert!(text.contains("\"time\": \"2\""));
        assert_eq!(parse_document(&text).unwrap(), d);
        assert_eq!(parse_document(&text.replace('\n', "\r\n")).unwrap(), d);
    }

    #[test]
    fn schema_errors_name_the_path() {
        let text = r#"{"actions": {"A": {"events": {"e0": {"name": "a", "time": ["3", "1"]}}}}}"#;
        match parse_document(text) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "actions.A.events.e0.time"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"actions": {"A": {"events": {"e0": {"name": "a", "colour": "red"}}}}}"#;
        let Err(Error::Schema { path, .. }) = parse_document(text) else {
            panic!()
        };
        assert_eq!(path, "actions.A.events.e0.colour");
        let text = r#"{"actions": {"A": {"events": {"e0": {"name": "a", "space": "n9"}}}}}"#;
        let Err(Error::Schema { path, .. }) = parse_document(text) else {
            panic!()
        };
        assert_eq!(path, "actions.A.events.e0.space");
        let Err(Error::Parse(p)) = parse_document("{\n  \"actions\": [,]\n}") else {
            panic!()
        };
        assert_eq!(p.span.line, 2);
    }

    #[test]
    fn random_documents_round_trip() {
        let mut g = Gen::new(11);
        for _ in 0..200 {
            let d = g.document();
            let text = serialize_document(&d);
            let back = parse_document(&text).unwrap();
            assert_eq!(back, d);
            assert_eq!(serialize_document(&back), text);
        }
    }

    proptest! {
        #[test]
        fn random_expressions_round_trip(seed in any::<u64>()) {
            let mut g = ExprGen::new(seed, ExprGenConfig { max_depth: 6, ..ExprGenConfig::default() });
            let e = g.expr();
            let s = serialize_expr(&e);
            prop_assert_eq!(parse_expr(&s).unwrap(), e);
        }

        #[test]
        fn spans_stay_inside_input(text in "[a-c+.|()\\[\\]{}>, -]{0,12}") {
            if let Err(Error::Parse(p)) = parse_expr(&text) {
                prop_assert!(p.span.start <= p.span.end && p.span.end <= text.len());
            }
        }
    }
}
