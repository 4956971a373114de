//! ω^n-automatic presentations and the first-order compiler.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use super::convolve::unconvolve;
use super::formula::Formula;
use crate::alphabet::{Alphabet, TupleAlphabet};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::hier::{HnfAcceptor, TOP_LETTER_PREFIX};
use crate::omega::{Acceptance, OmegaAcceptor};
use crate::word::HierWord;

/// A structure presented by acceptors of ω^n-words: a domain, an optional
/// equality congruence (absent for injective presentations) and relations
/// over convolutions of domain words.
#[derive(Clone, Debug)]
pub struct Presentation {
    alphabet: Alphabet,
    level: usize,
    domain: HnfAcceptor,
    equality: Option<HnfAcceptor>,
    relations: BTreeMap<String, (usize, HnfAcceptor)>,
    valid: OnceLock<bool>,
}

impl Presentation {
    pub fn new(
        domain: HnfAcceptor,
        equality: Option<HnfAcceptor>,
        relations: impl IntoIterator<Item = (String, usize, HnfAcceptor)>,
    ) -> Result<Self> {
        let alphabet = domain.alphabet().clone();
        let level = domain.level();
        let check = |a: &HnfAcceptor, arity: usize| -> Result<()> {
            if a.level() != level {
                return Err(Error::LevelMismatch {
                    expected: level,
                    found: a.level(),
                });
            }
            a.alphabet()
                .ensure_same(TupleAlphabet::new(&alphabet, arity)?.alphabet())
        };
        if let Some(e) = &equality {
            check(e, 2)?;
        }
        let mut map = BTreeMap::new();
        for (name, arity, a) in relations {
            if arity == 0 {
                return Err(Error::Invalid(format!("relation `{name}` has arity 0")));
            }
            if !valid_identifier(&name) {
                return Err(Error::Invalid(format!("`{name}` is not an identifier")));
            }
            check(&a, arity)?;
            if map.insert(name.clone(), (arity, a)).is_some() {
                return Err(Error::Invalid(format!("relation `{name}` declared twice")));
            }
        }
        Ok(Presentation {
            alphabet,
            level,
            domain,
            equality,
            relations: map,
            valid: OnceLock::new(),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn domain(&self) -> &HnfAcceptor {
        &self.domain
    }

    pub fn equality(&self) -> Option<&HnfAcceptor> {
        self.equality.as_ref()
    }

    pub fn is_injective(&self) -> bool {
        self.equality.is_none()
    }

    /// Relation symbols with their arities.
    pub fn signature(&self) -> BTreeMap<String, usize> {
        self.relations.iter().map(|(n, (k, _))| (n.clone(), *k)).collect()
    }

    pub fn relation(&self, name: &str) -> Result<(usize, &HnfAcceptor)> {
        self.relations
            .get(name)
            .map(|(k, a)| (*k, a))
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize, &HnfAcceptor)> {
        self.relations.iter().map(|(n, (k, a))| (n.as_str(), *k, a))
    }

    /// Acceptor of the tuples, over the sorted `free_vars`, of domain words
    /// satisfying `formula`.
    pub fn compile(&self, formula: &Formula, free_vars: &[&str], budget: &Budget) -> Result<HnfAcceptor> {
        self.check_symbols(formula)?;
        let vars: BTreeSet<String> = free_vars.iter().map(|v| v.to_string()).collect();
        if let Some(v) = formula.free_vars().difference(&vars).next() {
            return Err(Error::UnboundVariable(v.clone()));
        }
        let vars: Vec<String> = vars.into_iter().collect();
        let mut c = Compiler::new(self, budget);
        let (a, own) = c.compile(&nnf(formula, true))?;
        let a = c.cylinder(&a, &own, &vars)?;
        c.relativize(&a, &vars)
    }

    /// Truth of a sentence. Presentations with an equality acceptor are
    /// validated first, once.
    pub fn model_check(&self, sentence: &Formula, budget: &Budget) -> Result<bool> {
        if let Some(v) = sentence.free_vars().into_iter().next() {
            return Err(Error::UnboundVariable(v));
        }
        self.check_symbols(sentence)?;
        self.ensure_valid(budget)?;
        let mut c = Compiler::new(self, budget);
        let (a, _) = c.compile(&nnf(sentence, true))?;
        Ok(!a.is_empty())
    }

    fn ensure_valid(&self, budget: &Budget) -> Result<()> {
        if self.is_injective() {
            return Ok(());
        }
        let ok = match self.valid.get() {
            Some(&ok) => ok,
            None => {
                let ok = self.check(budget)?.passed();
                let _ = self.valid.set(ok);
                ok
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Presentation("equality is not a congruence on the domain".into()))
        }
    }

    fn check_symbols(&self, formula: &Formula) -> Result<()> {
        for (s, n) in formula.symbols() {
            let (k, _) = self.relation(&s)?;
            if k != n {
                return Err(Error::ArityMismatch {
                    symbol: s,
                    expected: k,
                    found: n,
                });
            }
        }
        Ok(())
    }

    /// Decides the presentation conditions on the raw structure: a
    /// nonempty domain, equality an equivalence on it, and every relation
    /// compatible with equality in each coordinate separately.
    pub fn check(&self, budget: &Budget) -> Result<Report> {
        let mut checks = Vec::new();
        checks.push(CheckOutcome {
            name: "domain nonempty".into(),
            status: if self.domain.is_empty() {
                CheckStatus::Failed(Vec::new())
            } else {
                CheckStatus::Passed
            },
        });
        let Some(eq) = &self.equality else {
            for name in ["reflexivity", "symmetry", "transitivity"] {
                checks.push(CheckOutcome {
                    name: name.into(),
                    status: CheckStatus::Skipped,
                });
            }
            for (name, _, _) in self.relations() {
                checks.push(CheckOutcome {
                    name: format!("congruence {name}"),
                    status: CheckStatus::Skipped,
                });
            }
            return Ok(Report { checks });
        };
        let mut e = "Eq".to_string();
        while self.relations.contains_key(&e) {
            e.push('_');
        }
        let mut raw = self.clone();
        raw.equality = None;
        raw.relations.insert(e.clone(), (2, eq.clone()));
        let ex = |x: &str, y: &str| Formula::rel(&e, &[x, y]);
        let mut sentences = vec![
            ("reflexivity".to_string(), names(&["x"]), ex("x", "x")),
            (
                "symmetry".to_string(),
                names(&["x", "y"]),
                ex("x", "y").implies(ex("y", "x")),
            ),
            (
                "transitivity".to_string(),
                names(&["x", "y", "z"]),
                ex("x", "y").and(ex("y", "z")).implies(ex("x", "z")),
            ),
        ];
        for (name, arity, _) in self.relations() {
            let xs: Vec<String> = (1..=arity).map(|i| format!("x{i}")).collect();
            let args: Vec<&str> = xs.iter().map(String::as_str).collect();
            for i in 0..arity {
                let mut moved = args.clone();
                moved[i] = "y";
                let mut vars = xs.clone();
                vars.push("y".to_string());
                let body = ex(args[i], "y")
                    .and(Formula::rel(name, &args))
                    .implies(Formula::rel(name, &moved));
                let label = if arity == 1 {
                    format!("congruence {name}")
                } else {
                    format!("congruence {name}[{}]", i + 1)
                };
                sentences.push((label, vars, body));
            }
        }
        for (name, vars, body) in sentences {
            let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
            let status = match raw.counterexample(&vars, &body, budget)? {
                None => CheckStatus::Passed,
                Some(w) => CheckStatus::Failed(w),
            };
            checks.push(CheckOutcome { name, status });
        }
        Ok(Report { checks })
    }

    /// Domain words for `vars` falsifying `body`, if any.
    pub fn counterexample(
        &self,
        vars: &[&str],
        body: &Formula,
        budget: &Budget,
    ) -> Result<Option<Vec<(String, HierWord)>>> {
        let a = self.compile(&body.clone().not(), vars, budget)?;
        let Some(w) = a.witness() else { return Ok(None) };
        let mut names: Vec<&str> = vars.to_vec();
        names.sort_unstable();
        names.dedup();
        let tuple = TupleAlphabet::new(&self.alphabet, names.len())?;
        Ok(Some(
            names
                .iter()
                .map(|n| n.to_string())
                .zip(unconvolve(&w, &tuple))
                .collect(),
        ))
    }
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn valid_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The diagonal `{(w, w)}` over `alphabet × alphabet`.
pub fn diagonal(alphabet: &Alphabet, level: usize) -> Result<HnfAcceptor> {
    let pairs = TupleAlphabet::new(alphabet, 2)?;
    if level == 1 {
        let delta: Vec<_> = alphabet.letters().map(|l| (0, pairs.encode(&[l, l]), 0)).collect();
        let one = [0].into_iter().collect();
        return Ok(HnfAcceptor::base(OmegaAcceptor::new(
            pairs.alphabet().clone(),
            1,
            0,
            delta,
            Acceptance::Buchi(one),
        )?));
    }
    let inner = diagonal(alphabet, level - 1)?;
    let off = inner.complement(&Budget::unlimited())?;
    let top = OmegaAcceptor::new(
        Alphabet::synthetic(TOP_LETTER_PREFIX, 2),
        1,
        0,
        [(0, 0, 0)],
        Acceptance::Buchi([0].into_iter().collect()),
    )?;
    Ok(HnfAcceptor::nested(top, vec![inner, off])?.assume_partitioned())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Passed,
    /// Failed, with the offending words named by variable (empty when the
    /// domain itself is empty).
    Failed(Vec<(String, HierWord)>),
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !matches!(c.status, CheckStatus::Failed(_)))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        ReportTable(self, alphabet)
    }
}

struct ReportTable<'a>(&'a Report, &'a Alphabet);

impl fmt::Display for ReportTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.0.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.0.checks {
            let status = match &c.status {
                CheckStatus::Passed => "pass",
                CheckStatus::Failed(_) => "FAIL",
                CheckStatus::Skipped => "skip",
            };
            write!(f, "{:width$}  {status}", c.name)?;
            if let CheckStatus::Failed(ws) = &c.status {
                for (v, w) in ws {
                    write!(f, "  {v}={}", w.display(self.1))?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Nnf {
    Rel(bool, String, Vec<String>),
    Eq(bool, String, String),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Exists(String, Box<Nnf>),
    Forall(String, Box<Nnf>),
}

/// Negation normal form of `f` (of `¬f` when `positive` is false).
fn nnf(f: &Formula, positive: bool) -> Nnf {
    let bin = |a: &Formula, pa: bool, b: &Formula, pb: bool, conj: bool| {
        let (a, b) = (Box::new(nnf(a, pa)), Box::new(nnf(b, pb)));
        if conj {
            Nnf::And(a, b)
        } else {
            Nnf::Or(a, b)
        }
    };
    match f {
        Formula::Rel(s, args) => Nnf::Rel(positive, s.clone(), args.clone()),
        Formula::Eq(x, y) => Nnf::Eq(positive, x.clone(), y.clone()),
        Formula::Not(g) => nnf(g, !positive),
        Formula::And(a, b) => bin(a, positive, b, positive, positive),
        Formula::Or(a, b) => bin(a, positive, b, positive, !positive),
        Formula::Implies(a, b) => bin(a, !positive, b, positive, !positive),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let body = Box::new(nnf(g, positive));
            if matches!(f, Formula::Exists(..)) == positive {
                Nnf::Exists(v.clone(), body)
            } else {
                Nnf::Forall(v.clone(), body)
            }
        }
    }
}

type Compiled = (HnfAcceptor, Vec<String>);

/// Compiles negation normal forms bottom-up. Every result is an acceptor
/// over the sorted free variables of its formula; it may also accept tuples
/// with components outside the domain, which are cut away wherever that
/// matters (under complement and projection).
struct Compiler<'a> {
    p: &'a Presentation,
    budget: &'a Budget,
    universal_domain: bool,
    tuples: HashMap<usize, TupleAlphabet>,
    domains: HashMap<Vec<String>, HnfAcceptor>,
    memo: HashMap<Nnf, Compiled>,
    diagonal: Option<HnfAcceptor>,
}

impl<'a> Compiler<'a> {
    fn new(p: &'a Presentation, budget: &'a Budget) -> Self {
        Compiler {
            p,
            budget,
            universal_domain: p.domain.is_trivially_universal(),
            tuples: HashMap::new(),
            domains: HashMap::new(),
            memo: HashMap::new(),
            diagonal: None,
        }
    }

    fn tuple(&mut self, arity: usize) -> Result<TupleAlphabet> {
        if let Some(t) = self.tuples.get(&arity) {
            return Ok(t.clone());
        }
        let t = TupleAlphabet::new(&self.p.alphabet, arity)?;
        self.tuples.insert(arity, t.clone());
        Ok(t)
    }

    /// Reads an acceptor over `own` (sorted) as one over `vars` ⊇ `own`.
    fn cylinder(&mut self, a: &HnfAcceptor, own: &[String], vars: &[String]) -> Result<HnfAcceptor> {
        if own == vars {
            return Ok(a.clone());
        }
        let picks: Vec<usize> = own
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("subset"))
            .collect();
        let map = self.tuple(vars.len())?.selection(&picks)?;
        a.preimage(&map)
    }

    /// Tuples over `vars` whose every component lies in the domain.
    fn domain(&mut self, vars: &[String]) -> Result<HnfAcceptor> {
        if let Some(d) = self.domains.get(vars) {
            return Ok(d.clone());
        }
        let t = self.tuple(vars.len())?;
        let mut d = HnfAcceptor::universal(t.alphabet(), self.p.level);
        for i in 0..vars.len() {
            let one = self.p.domain.preimage(&t.selection(&[i])?)?;
            d = d.intersect(&one, self.budget)?;
        }
        self.domains.insert(vars.to_vec(), d.clone());
        Ok(d)
    }

    fn relativize(&mut self, a: &HnfAcceptor, vars: &[String]) -> Result<HnfAcceptor> {
        if self.universal_domain {
            return Ok(a.clone());
        }
        let d = self.domain(vars)?;
        a.intersect(&d, self.budget)
    }

    fn negate(&mut self, a: &HnfAcceptor, vars: &[String]) -> Result<HnfAcceptor> {
        let c = a.complement(self.budget)?;
        self.relativize(&c, vars)
    }

    fn atom(&mut self, a: &HnfAcceptor, args: &[String]) -> Result<Compiled> {
        let mut vars = args.to_vec();
        vars.sort();
        vars.dedup();
        let picks: Vec<usize> = args.iter().map(|x| vars.binary_search(x).expect("present")).collect();
        let map = self.tuple(vars.len())?.selection(&picks)?;
        Ok((a.preimage(&map)?, vars))
    }

    fn compile(&mut self, f: &Nnf) -> Result<Compiled> {
        if let Some(r) = self.memo.get(f) {
            return Ok(r.clone());
        }
        let r = self.compile_inner(f)?;
        self.memo.insert(f.clone(), r.clone());
        Ok(r)
    }

    fn compile_inner(&mut self, f: &Nnf) -> Result<Compiled> {
        match f {
            Nnf::Rel(positive, s, args) => {
                let a = self.p.relation(s)?.1.clone();
                let (a, vars) = self.atom(&a, args)?;
                if *positive {
                    Ok((a, vars))
                } else {
                    Ok((self.negate(&a, &vars)?, vars))
                }
            }
            Nnf::Eq(positive, x, y) => {
                let eq = match (&self.p.equality, &self.diagonal) {
                    (Some(e), _) | (None, Some(e)) => e.clone(),
                    (None, None) => {
                        let d = diagonal(&self.p.alphabet, self.p.level)?;
                        self.diagonal = Some(d.clone());
                        d
                    }
                };
                let (a, vars) = self.atom(&eq, &[x.clone(), y.clone()])?;
                if *positive {
                    Ok((a, vars))
                } else {
                    Ok((self.negate(&a, &vars)?, vars))
                }
            }
            Nnf::And(l, r) | Nnf::Or(l, r) => {
                let (a, va) = self.compile(l)?;
                let (b, vb) = self.compile(r)?;
                let vars: Vec<String> = va
                    .iter()
                    .chain(&vb)
                    .cloned()
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let a = self.cylinder(&a, &va, &vars)?;
                let b = self.cylinder(&b, &vb, &vars)?;
                let c = if matches!(f, Nnf::And(..)) {
                    if a.is_empty() || b.is_empty() {
                        HnfAcceptor::empty(a.alphabet(), self.p.level)
                    } else {
                        a.intersect(&b, self.budget)?
                    }
                } else {
                    a.union(&b)?
                };
                Ok((c, vars))
            }
            Nnf::Exists(x, body) => {
                let (a, vars) = self.compile(body)?;
                self.exists(x, a, vars)
            }
            Nnf::Forall(x, body) => {
                // ∀x φ  ≡  ¬∃x ¬φ, with ¬φ already in normal form.
                let (a, vars) = self.compile(&negated(body))?;
                let (e, rest) = self.exists(x, a, vars)?;
                Ok((self.negate(&e, &rest)?, rest))
            }
        }
    }

    fn exists(&mut self, x: &str, a: HnfAcceptor, vars: Vec<String>) -> Result<Compiled> {
        let Some(i) = vars.iter().position(|v| v == x) else {
            // Vacuous quantifier over a domain that may be empty.
            if self.p.domain.is_empty() {
                let t = self.tuple(vars.len())?;
                return Ok((HnfAcceptor::empty(t.alphabet(), self.p.level), vars));
            }
            return Ok((a, vars));
        };
        let t = self.tuple(vars.len())?;
        let a = if self.universal_domain {
            a
        } else {
            let d = self.p.domain.preimage(&t.selection(&[i])?)?;
            a.intersect(&d, self.budget)?
        };
        let rest: Vec<String> = vars.iter().filter(|v| *v != x).cloned().collect();
        let keep: Vec<usize> = (0..vars.len()).filter(|&j| j != i).collect();
        let p = a.project(&t.selection(&keep)?)?;
        Ok((p, rest))
    }
}

fn negated(f: &Nnf) -> Nnf {
    match f {
        Nnf::Rel(p, s, a) => Nnf::Rel(!p, s.clone(), a.clone()),
        Nnf::Eq(p, x, y) => Nnf::Eq(!p, x.clone(), y.clone()),
        Nnf::And(a, b) => Nnf::Or(Box::new(negated(a)), Box::new(negated(b))),
        Nnf::Or(a, b) => Nnf::And(Box::new(negated(a)), Box::new(negated(b))),
        Nnf::Exists(v, g) => Nnf::Forall(v.clone(), Box::new(negated(g))),
        Nnf::Forall(v, g) => Nnf::Exists(v.clone(), Box::new(negated(g))),
    }
}
