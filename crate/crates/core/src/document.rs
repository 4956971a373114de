//! JSON documents for every artifact, with canonical output.
//!
//! States are named `q0, q1, …`, zero-padded to a common width; letters
//! are referred to by name. Objects print with sorted keys and sets print
//! sorted, so equal artifacts print to identical bytes.

use std::collections::HashMap;

use serde_json::{json, Map, Value};

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::hier::{Body, HnfAcceptor};
use crate::omega::{Acceptance, LassoWord, OmegaAcceptor, State, StateSet};
use crate::ordinal::OrdinalAutomaton;
use crate::structures::{Formula, Presentation};
use crate::tree::{CertNode, MullerTreeAutomaton, RegularTree, RunCertificate};
use crate::word::HierWord;

pub const VERSION: u64 = 1;

/// A parsed document of one of the supported kinds.
#[derive(Clone, Debug)]
pub enum Document {
    Omega(OmegaAcceptor),
    Ordinal(OrdinalAutomaton),
    Hnf(HnfAcceptor),
    Word { alphabet: Alphabet, word: HierWord },
    Presentation(Presentation),
    Formula(Formula),
    Tree(RegularTree),
    TreeAuto(MullerTreeAutomaton),
    Certificate(RunCertificate),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Omega(_) => "omega",
            Document::Ordinal(_) => "ordinal",
            Document::Hnf(_) => "hnf",
            Document::Word { .. } => "word",
            Document::Presentation(_) => "presentation",
            Document::Formula(_) => "formula",
            Document::Tree(_) => "tree",
            Document::TreeAuto(_) => "treeauto",
            Document::Certificate(_) => "certificate",
        }
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn print(&self) -> String {
        let mut body = match self {
            Document::Omega(a) => omega_value(a),
            Document::Ordinal(a) => ordinal_value(a),
            Document::Hnf(a) => hnf_value(a),
            Document::Word { alphabet, word } => {
                let mut v = word_value(word, alphabet);
                v.insert("alphabet".into(), alphabet_value(alphabet));
                v.insert("level".into(), json!(word.level()));
                v
            }
            Document::Presentation(p) => presentation_value(p),
            Document::Formula(f) => obj(json!({ "text": f.to_string() })),
            Document::Tree(t) => tree_value(t),
            Document::TreeAuto(m) => treeauto_value(m),
            Document::Certificate(c) => certificate_value(c),
        };
        body.insert("kind".into(), json!(self.kind()));
        body.insert("version".into(), json!(VERSION));
        let mut out = String::new();
        render(&Value::Object(body), 0, &mut out);
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<Document> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let v = as_obj(&value, "document")?;
        let version = field(v, "version")?
            .as_u64()
            .ok_or_else(|| schema("version must be a number"))?;
        if version != VERSION {
            return Err(schema(format!("unsupported version {version}")));
        }
        let mut hnfs = HashMap::new();
        Ok(match str_field(v, "kind")? {
            "omega" => Document::Omega(parse_omega(v)?),
            "ordinal" => Document::Ordinal(parse_ordinal(v)?),
            "hnf" => Document::Hnf(parse_hnf(v, &mut hnfs)?),
            "word" => {
                let alphabet = parse_alphabet(field(v, "alphabet")?)?;
                let level = usize_field(v, "level")?;
                let word = parse_word(v, &alphabet, level)?;
                Document::Word { alphabet, word }
            }
            "presentation" => Document::Presentation(parse_presentation(v, &mut hnfs)?),
            "formula" => Document::Formula(Formula::parse(str_field(v, "text")?)?),
            "tree" => Document::Tree(parse_tree(v)?),
            "treeauto" => Document::TreeAuto(parse_treeauto(v)?),
            "certificate" => Document::Certificate(parse_certificate(v)?),
            other => return Err(schema(format!("unknown kind `{other}`"))),
        })
    }
}

/// Width above which arrays of arrays break into one row per line.
const LINE: usize = 72;

/// Pretty JSON that keeps arrays of scalars, and short arrays of those, on
/// one line.
fn render(v: &Value, indent: usize, out: &mut String) {
    fn flat(v: &Value, depth: usize) -> bool {
        match v {
            Value::Array(xs) => depth < 2 && xs.iter().all(|x| flat(x, depth + 1)),
            Value::Object(m) => m.is_empty(),
            _ => true,
        }
    }
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(xs) if flat(v, 0) => {
            let mut line = String::from("[");
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    line.push_str(", ");
                }
                render(x, indent, &mut line);
            }
            line.push(']');
            if line.len() <= LINE || xs.iter().all(|x| !x.is_array()) {
                out.push_str(&line);
            } else {
                out.push_str("[\n");
                for (i, x) in xs.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    render(x, indent + 1, out);
                    out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push(']');
            }
        }
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                render(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&v.to_string()),
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("object literal"),
    }
}

fn as_obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(format!("{what} must be an object")))
}

fn as_arr<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what} must be an array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(format!("{what} must be a string")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(format!("{what} must be a natural number")))
}

fn field<'a>(v: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| schema(format!("missing field `{name}`")))
}

fn str_field<'a>(v: &'a Map<String, Value>, name: &str) -> Result<&'a str> {
    as_str(field(v, name)?, name)
}

fn usize_field(v: &Map<String, Value>, name: &str) -> Result<usize> {
    as_usize(field(v, name)?, name)
}

fn arr_field<'a>(v: &'a Map<String, Value>, name: &str) -> Result<&'a Vec<Value>> {
    as_arr(field(v, name)?, name)
}

/// Names `q0..q{n-1}`, zero-padded to the width of the largest.
pub fn state_names(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("q{i:0width$}")).collect()
}

struct States {
    names: Vec<String>,
    index: HashMap<String, State>,
}

impl States {
    fn print(n: usize) -> Self {
        States {
            names: state_names(n),
            index: HashMap::new(),
        }
    }

    fn parse(v: &Map<String, Value>) -> Result<Self> {
        let names = arr_field(v, "states")?
            .iter()
            .map(|s| as_str(s, "state").map(str::to_string))
            .collect::<Result<Vec<_>>>()?;
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(schema(format!("duplicate state `{n}`")));
            }
        }
        if names.is_empty() {
            return Err(schema("no states"));
        }
        Ok(States { names, index })
    }

    fn name(&self, q: State) -> Value {
        json!(self.names[q])
    }

    fn set(&self, s: &StateSet) -> Value {
        let mut names: Vec<&String> = s.iter().map(|&q| &self.names[q]).collect();
        names.sort();
        json!(names)
    }

    fn get(&self, v: &Value) -> Result<State> {
        let n = as_str(v, "state")?;
        self.index
            .get(n)
            .copied()
            .ok_or_else(|| schema(format!("unknown state `{n}`")))
    }

    fn get_set(&self, v: &Value) -> Result<StateSet> {
        as_arr(v, "state set")?.iter().map(|s| self.get(s)).collect()
    }
}

fn alphabet_value(a: &Alphabet) -> Value {
    json!(a.names())
}

fn parse_alphabet(v: &Value) -> Result<Alphabet> {
    let names = as_arr(v, "alphabet")?
        .iter()
        .map(|s| as_str(s, "letter").map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    Alphabet::new(names)
}

fn letter_value(a: &Alphabet, l: Letter) -> Value {
    json!(a.name(l))
}

fn parse_letter(a: &Alphabet, v: &Value) -> Result<Letter> {
    a.index_of(as_str(v, "letter")?)
}

fn sorted(mut rows: Vec<Value>) -> Value {
    rows.sort_by_key(|r| r.to_string());
    Value::Array(rows)
}

fn omega_value(a: &OmegaAcceptor) -> Map<String, Value> {
    let s = States::print(a.num_states());
    let al = a.alphabet();
    let delta = a
        .delta()
        .map(|(p, l, q)| json!([s.name(p), letter_value(al, l), s.name(q)]))
        .collect();
    let (kind, fin) = match a.acceptance() {
        Acceptance::Buchi(f) => ("buchi", s.set(f)),
        Acceptance::Muller(fam) => ("muller", sorted(fam.iter().map(|f| s.set(f)).collect())),
    };
    obj(json!({
        "alphabet": alphabet_value(al),
        "states": s.names,
        "initial": s.name(a.initial()),
        "delta": sorted(delta),
        "acceptance": kind,
        "final": fin,
    }))
}

fn parse_omega(v: &Map<String, Value>) -> Result<OmegaAcceptor> {
    let alphabet = parse_alphabet(field(v, "alphabet")?)?;
    let s = States::parse(v)?;
    let delta = arr_field(v, "delta")?
        .iter()
        .map(|t| match as_arr(t, "transition")?.as_slice() {
            [p, l, q] => Ok((s.get(p)?, parse_letter(&alphabet, l)?, s.get(q)?)),
            _ => Err(schema("a transition is [state, letter, state]")),
        })
        .collect::<Result<Vec<_>>>()?;
    let acceptance = match str_field(v, "acceptance")? {
        "buchi" => Acceptance::Buchi(s.get_set(field(v, "final")?)?),
        "muller" => Acceptance::Muller(
            arr_field(v, "final")?
                .iter()
                .map(|f| s.get_set(f))
                .collect::<Result<Vec<_>>>()?,
        ),
        other => return Err(schema(format!("unknown acceptance `{other}`"))),
    };
    OmegaAcceptor::new(alphabet, s.names.len(), s.get(field(v, "initial")?)?, delta, acceptance)
}

fn ordinal_value(a: &OrdinalAutomaton) -> Map<String, Value> {
    let s = States::print(a.num_states());
    let al = a.alphabet();
    let delta = a
        .delta()
        .map(|(p, l, q)| json!([s.name(p), letter_value(al, l), s.name(q)]))
        .collect();
    let gamma = a.gamma().map(|(set, q)| json!([s.set(set), s.name(q)])).collect();
    obj(json!({
        "alphabet": alphabet_value(al),
        "level": a.level(),
        "states": s.names,
        "initial": s.name(a.initial()),
        "delta": sorted(delta),
        "gamma": sorted(gamma),
        "final": s.set(a.final_states()),
    }))
}

fn parse_ordinal(v: &Map<String, Value>) -> Result<OrdinalAutomaton> {
    let alphabet = parse_alphabet(field(v, "alphabet")?)?;
    let s = States::parse(v)?;
    let delta = arr_field(v, "delta")?
        .iter()
        .map(|t| match as_arr(t, "transition")?.as_slice() {
            [p, l, q] => Ok((s.get(p)?, parse_letter(&alphabet, l)?, s.get(q)?)),
            _ => Err(schema("a transition is [state, letter, state]")),
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma = arr_field(v, "gamma")?
        .iter()
        .map(|t| match as_arr(t, "limit transition")?.as_slice() {
            [set, q] => Ok((s.get_set(set)?, s.get(q)?)),
            _ => Err(schema("a limit transition is [stateSet, state]")),
        })
        .collect::<Result<Vec<_>>>()?;
    OrdinalAutomaton::new(
        alphabet,
        usize_field(v, "level")?,
        s.names.len(),
        s.get(field(v, "initial")?)?,
        delta,
        gamma,
        s.get_set(field(v, "final")?)?,
    )
}

fn hnf_value(a: &HnfAcceptor) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("level".into(), json!(a.level()));
    m.insert("alphabet".into(), alphabet_value(a.alphabet()));
    match a.body() {
        Body::Base(b) => {
            m.insert("top".into(), Value::Object(omega_value(b)));
        }
        Body::Nested { top, letters } => {
            m.insert("top".into(), Value::Object(omega_value(top)));
            let ls = letters.iter().map(|l| Value::Object(hnf_value(l))).collect();
            m.insert("letters".into(), Value::Array(ls));
            m.insert("partitioned".into(), json!(a.is_partitioned()));
        }
    }
    m
}

/// Parses an acceptor, sharing structurally identical sub-acceptors.
fn parse_hnf(v: &Map<String, Value>, seen: &mut HashMap<String, HnfAcceptor>) -> Result<HnfAcceptor> {
    let mut key = v.clone();
    key.remove("kind");
    key.remove("version");
    let key = Value::Object(key).to_string();
    if let Some(h) = seen.get(&key) {
        return Ok(h.clone());
    }
    let alphabet = parse_alphabet(field(v, "alphabet")?)?;
    let level = usize_field(v, "level")?;
    let top = parse_omega(as_obj(field(v, "top")?, "top")?)?;
    let h = match v.get("letters") {
        None if level == 1 => {
            alphabet.ensure_same(top.alphabet())?;
            HnfAcceptor::base(top)
        }
        None => return Err(schema("a nested acceptor needs letters")),
        Some(ls) => {
            let letters = as_arr(ls, "letters")?
                .iter()
                .map(|l| parse_hnf(as_obj(l, "letter acceptor")?, seen))
                .collect::<Result<Vec<_>>>()?;
            let h = HnfAcceptor::nested(top, letters)?;
            if h.level() != level {
                return Err(Error::LevelMismatch {
                    expected: level,
                    found: h.level(),
                });
            }
            h.alphabet().ensure_same(&alphabet)?;
            match v.get("partitioned") {
                Some(Value::Bool(true)) => h.assume_partitioned(),
                Some(Value::Bool(false)) | None => h,
                Some(_) => return Err(schema("partitioned must be a boolean")),
            }
        }
    };
    seen.insert(key, h.clone());
    Ok(h)
}

fn word_value(w: &HierWord, a: &Alphabet) -> Map<String, Value> {
    match w {
        HierWord::Lasso(l) => {
            let names = |ls: &[Letter]| ls.iter().map(|&x| letter_value(a, x)).collect::<Vec<_>>();
            obj(json!({ "u": names(l.prefix()), "v": names(l.period()) }))
        }
        HierWord::Spine { prefix, period, .. } => {
            let blocks = |bs: &[HierWord]| bs.iter().map(|b| Value::Object(word_value(b, a))).collect::<Vec<_>>();
            obj(json!({ "u": blocks(prefix), "v": blocks(period) }))
        }
    }
}

fn parse_word(v: &Map<String, Value>, a: &Alphabet, level: usize) -> Result<HierWord> {
    if level == 0 {
        return Err(schema("level must be at least 1"));
    }
    let u = arr_field(v, "u")?;
    let vv = arr_field(v, "v")?;
    if level == 1 {
        let letters = |xs: &Vec<Value>| xs.iter().map(|x| parse_letter(a, x)).collect::<Result<Vec<_>>>();
        return Ok(HierWord::Lasso(LassoWord::new(letters(u)?, letters(vv)?)?));
    }
    let blocks = |xs: &Vec<Value>| {
        xs.iter()
            .map(|x| parse_word(as_obj(x, "block")?, a, level - 1))
            .collect::<Result<Vec<_>>>()
    };
    HierWord::spine(blocks(u)?, blocks(vv)?)
}

/// A word document over `alphabet`.
pub fn word_document(word: &HierWord, alphabet: &Alphabet) -> Document {
    Document::Word {
        alphabet: alphabet.clone(),
        word: word.clone(),
    }
}

fn presentation_value(p: &Presentation) -> Map<String, Value> {
    let relations: Map<String, Value> = p
        .relations()
        .map(|(name, arity, a)| (name.to_string(), json!({ "arity": arity, "acceptor": hnf_value(a) })))
        .collect();
    obj(json!({
        "alphabet": alphabet_value(p.alphabet()),
        "level": p.level(),
        "domain": hnf_value(p.domain()),
        "equality": p.equality().map(|e| Value::Object(hnf_value(e))),
        "relations": relations,
    }))
}

fn parse_presentation(v: &Map<String, Value>, seen: &mut HashMap<String, HnfAcceptor>) -> Result<Presentation> {
    let domain = parse_hnf(as_obj(field(v, "domain")?, "domain")?, seen)?;
    domain.alphabet().ensure_same(&parse_alphabet(field(v, "alphabet")?)?)?;
    if domain.level() != usize_field(v, "level")? {
        return Err(schema("domain level differs from the presentation level"));
    }
    let equality = match v.get("equality") {
        None | Some(Value::Null) => None,
        Some(e) => Some(parse_hnf(as_obj(e, "equality")?, seen)?),
    };
    let mut relations = Vec::new();
    for (name, r) in as_obj(field(v, "relations")?, "relations")? {
        let r = as_obj(r, "relation")?;
        let a = parse_hnf(as_obj(field(r, "acceptor")?, "acceptor")?, seen)?;
        relations.push((name.clone(), usize_field(r, "arity")?, a));
    }
    Presentation::new(domain, equality, relations)
}

fn tree_value(t: &RegularTree) -> Map<String, Value> {
    let nodes: Vec<Value> = (0..t.len())
        .map(|v| json!([letter_value(t.alphabet(), t.label(v)), t.left(v), t.right(v)]))
        .collect();
    obj(json!({ "alphabet": alphabet_value(t.alphabet()), "nodes": nodes }))
}

fn parse_tree(v: &Map<String, Value>) -> Result<RegularTree> {
    let alphabet = parse_alphabet(field(v, "alphabet")?)?;
    let (mut labels, mut left, mut right) = (Vec::new(), Vec::new(), Vec::new());
    for n in arr_field(v, "nodes")? {
        match as_arr(n, "node")?.as_slice() {
            [a, l, r] => {
                labels.push(parse_letter(&alphabet, a)?);
                left.push(as_usize(l, "left")?);
                right.push(as_usize(r, "right")?);
            }
            _ => return Err(schema("a node is [letter, left, right]")),
        }
    }
    RegularTree::new(alphabet, labels, left, right)
}

fn treeauto_value(m: &MullerTreeAutomaton) -> Map<String, Value> {
    let s = States::print(m.num_states());
    let al = m.alphabet();
    let delta = m
        .delta()
        .map(|(q, a, l, r)| json!([s.name(q), letter_value(al, a), s.name(l), s.name(r)]))
        .collect();
    let family = m.family().iter().map(|f| s.set(f)).collect();
    obj(json!({
        "alphabet": alphabet_value(al),
        "states": s.names,
        "initial": s.name(m.initial()),
        "delta": sorted(delta),
        "acceptance": "muller",
        "final": sorted(family),
    }))
}

fn parse_treeauto(v: &Map<String, Value>) -> Result<MullerTreeAutomaton> {
    let alphabet = parse_alphabet(field(v, "alphabet")?)?;
    let s = States::parse(v)?;
    if str_field(v, "acceptance")? != "muller" {
        return Err(schema("tree automata use muller acceptance"));
    }
    let delta = arr_field(v, "delta")?
        .iter()
        .map(|t| match as_arr(t, "transition")?.as_slice() {
            [q, a, l, r] => Ok((s.get(q)?, parse_letter(&alphabet, a)?, s.get(l)?, s.get(r)?)),
            _ => Err(schema("a tree transition is [state, letter, state, state]")),
        })
        .collect::<Result<Vec<_>>>()?;
    let family = arr_field(v, "final")?
        .iter()
        .map(|f| s.get_set(f))
        .collect::<Result<Vec<_>>>()?;
    MullerTreeAutomaton::new(alphabet, s.names.len(), s.get(field(v, "initial")?)?, delta, family)
}

fn certificate_value(c: &RunCertificate) -> Map<String, Value> {
    let top = c.nodes.iter().map(|n| n.state).max().unwrap_or(0);
    let names = state_names(top + 1);
    let nodes: Vec<Value> = c
        .nodes
        .iter()
        .map(|n| json!([n.tree, names[n.state], n.left, n.right]))
        .collect();
    obj(json!({ "nodes": nodes }))
}

fn parse_certificate(v: &Map<String, Value>) -> Result<RunCertificate> {
    let state = |x: &Value| -> Result<State> {
        as_str(x, "state")?
            .strip_prefix('q')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| schema("certificate states are named q<number>"))
    };
    let nodes = arr_field(v, "nodes")?
        .iter()
        .map(|n| match as_arr(n, "node")?.as_slice() {
            [t, q, l, r] => Ok(CertNode {
                tree: as_usize(t, "tree node")?,
                state: state(q)?,
                left: as_usize(l, "left")?,
                right: as_usize(r, "right")?,
            }),
            _ => Err(schema("a certificate node is [tree node, state, left, right]")),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunCertificate { nodes })
}

#[cfg(test)]
mod tests;
