//! Batch front end: every command reads and writes JSON documents.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordauto::document::{word_document, Document};
use ordauto::hier::ordinal_to_hnf;
use ordauto::structures::{build_bn, build_lex, build_ln, build_omega_omega, Formula, Presentation};
use ordauto::tree::{encode_word_tree, find_run, hnf_to_tree_automaton, verify_run, DEFAULT_SCC_CAP};
use ordauto::{Alphabet, Budget, Error, HierWord, HnfAcceptor, LetterMap};

const DEFAULT_PAD: &str = "#";

#[derive(Parser)]
#[command(
    name = "ordauto",
    version,
    about = "Automata on words of length ω^n and ω^n-automatic structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Write the resulting document here instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    /// Largest automaton, in states, any construction may build.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Padding letter for lifting and tree encodings.
    #[arg(long, global = true, default_value = DEFAULT_PAD)]
    pad: String,
    /// Word level for textual words, or the level of a built structure.
    #[arg(long, global = true)]
    level: Option<usize>,
    /// Letters for `build lex` and for textual words given to `tree encode`.
    #[arg(long, global = true, default_value = "0,1")]
    alphabet: String,
    /// Letter map for `op project`, as `from:to` pairs separated by commas.
    #[arg(long, global = true)]
    map: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Boolean and structural operations on omega or hnf acceptors.
    Op { op: OpName, inputs: Vec<PathBuf> },
    /// Prints whether the language is empty; -o receives a witness word.
    Empty { acceptor: PathBuf },
    /// Prints whether the acceptor accepts the word.
    Member { acceptor: PathBuf, word: PathBuf },
    /// Runs a deterministic ordinal automaton on a word.
    Simulate { automaton: PathBuf, word: PathBuf },
    /// Builds a presentation, or the acceptor for `ln`.
    Build { name: BuildName },
    /// Checks the conditions a presentation must satisfy.
    Check { presentation: PathBuf },
    /// Decides a first-order sentence on a presentation.
    Mc { presentation: PathBuf, formula: PathBuf },
    /// Tree encodings, tree automata and accepting runs.
    Tree {
        #[command(subcommand)]
        command: TreeCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OpName {
    Union,
    Intersect,
    Complement,
    Project,
    Lift,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildName {
    Ln,
    Bn,
    OmegaOmega,
    Lex,
}

#[derive(Subcommand)]
enum TreeCommand {
    /// The tree of a word.
    Encode { word: PathBuf },
    /// The tree automaton of an hnf acceptor.
    Translate { acceptor: PathBuf },
    /// Searches an accepting run; -o receives the certificate.
    Run { tree: PathBuf, automaton: PathBuf },
}

/// Failures with their exit codes.
enum Failure {
    CheckFailed,
    Parse(String),
    Incompatible(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Resource { .. } => Failure::Resource(msg),
            Error::Syntax { .. } | Error::Schema(_) | Error::UnknownLetter(_) | Error::Invalid(_) => {
                Failure::Parse(msg)
            }
            Error::Presentation(_) => Failure::CheckFailed,
            _ => Failure::Incompatible(msg),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = match f {
                Failure::CheckFailed => 1,
                Failure::Parse(m) => {
                    eprintln!("error: {m}");
                    2
                }
                Failure::Incompatible(m) => {
                    eprintln!("error: {m}");
                    3
                }
                Failure::Resource(m) => {
                    eprintln!("error: {m}");
                    4
                }
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Outcome<()> {
    let o = &cli.opts;
    let budget = match o.cap {
        Some(c) => Budget::new(c, None),
        None => Budget::model_checking(),
    };
    match &cli.command {
        Command::Op { op, inputs } => {
            let docs = inputs.iter().map(|p| read(p)).collect::<Outcome<Vec<_>>>()?;
            let arity = match op {
                OpName::Union | OpName::Intersect => 2,
                _ => 1,
            };
            if docs.len() != arity {
                return Err(Failure::Parse(format!("expected {arity} input file(s)")));
            }
            emit(o, &operate(*op, &docs, o, &budget)?.print())
        }
        Command::Empty { acceptor } => {
            let (empty, witness) = match read(acceptor)? {
                Document::Omega(a) => (
                    a.is_empty(),
                    a.witness().map(HierWord::Lasso).map(|w| (a.alphabet().clone(), w)),
                ),
                Document::Hnf(a) => (a.is_empty(), a.witness().map(|w| (a.alphabet().clone(), w))),
                Document::Ordinal(a) => {
                    let h = ordinal_to_hnf(&a, &budget)?;
                    (h.is_empty(), h.witness().map(|w| (a.alphabet().clone(), w)))
                }
                d => return Err(kind_error(&d, "omega, hnf or ordinal")),
            };
            println!("{empty}");
            if let (Some(path), Some((alphabet, w))) = (&o.output, witness) {
                write(path, &word_document(&w, &alphabet).print())?;
            }
            Ok(())
        }
        Command::Member { acceptor, word } => {
            let verdict = match read(acceptor)? {
                Document::Omega(a) => match read_word(word, a.alphabet(), Some(1))? {
                    HierWord::Lasso(w) => a.accepts(&w)?,
                    w => {
                        return Err(Error::LevelMismatch {
                            expected: 1,
                            found: w.level(),
                        }
                        .into())
                    }
                },
                Document::Hnf(a) => a.accepts(&read_word(word, a.alphabet(), Some(a.level()))?)?,
                Document::Ordinal(a) => a.accepts(&read_word(word, a.alphabet(), Some(a.level()))?)?,
                d => return Err(kind_error(&d, "omega, hnf or ordinal")),
            };
            println!("{verdict}");
            Ok(())
        }
        Command::Simulate { automaton, word } => {
            let Document::Ordinal(a) = read(automaton)? else {
                return Err(Failure::Incompatible("simulate needs an ordinal automaton".into()));
            };
            let sim = a.simulate(&read_word(word, a.alphabet(), Some(a.level()))?)?;
            println!("{}", sim.accepted);
            Ok(())
        }
        Command::Build { name } => {
            let n = o.level.unwrap_or(1);
            let doc = match name {
                BuildName::Ln => Document::Hnf(build_ln(n)?),
                BuildName::Bn => Document::Presentation(build_bn(n)?),
                BuildName::OmegaOmega => Document::Presentation(build_omega_omega()?),
                BuildName::Lex => {
                    let letters = text_alphabet(o)?;
                    Document::Presentation(build_lex(&letters, n)?)
                }
            };
            emit(o, &doc.print())
        }
        Command::Check { presentation } => {
            let p = read_presentation(presentation)?;
            let report = p.check(&budget)?;
            print!("{}", report.display(p.alphabet()));
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::CheckFailed)
            }
        }
        Command::Mc { presentation, formula } => {
            let p = read_presentation(presentation)?;
            let f = read_formula(formula)?;
            println!("{}", p.model_check(&f, &budget)?);
            Ok(())
        }
        Command::Tree { command } => tree(command, o),
    }
}

fn tree(command: &TreeCommand, o: &Opts) -> Outcome<()> {
    let cap = o.cap.unwrap_or(ordauto::omega::DEFAULT_FAMILY_CAP);
    match command {
        TreeCommand::Encode { word } => {
            let alphabet = text_alphabet(o)?;
            let w = read_word(word, &alphabet, o.level)?;
            emit(o, &Document::Tree(encode_word_tree(&w, &alphabet, &o.pad)?).print())
        }
        TreeCommand::Translate { acceptor } => {
            let h = match read(acceptor)? {
                Document::Hnf(h) => h,
                Document::Omega(a) => HnfAcceptor::base(a),
                d => return Err(kind_error(&d, "hnf or omega")),
            };
            emit(o, &Document::TreeAuto(hnf_to_tree_automaton(&h, &o.pad, cap)?).print())
        }
        TreeCommand::Run { tree, automaton } => {
            let Document::Tree(t) = read(tree)? else {
                return Err(Failure::Incompatible("run needs a tree document".into()));
            };
            let Document::TreeAuto(m) = read(automaton)? else {
                return Err(Failure::Incompatible("run needs a treeauto document".into()));
            };
            t.alphabet().ensure_same(m.alphabet())?;
            let scc_cap = o.cap.unwrap_or(DEFAULT_SCC_CAP);
            match find_run(&t, &m, None, scc_cap)? {
                Some(cert) => {
                    if !verify_run(&t, &m, &cert, scc_cap)? {
                        return Err(Failure::Incompatible("found run failed verification".into()));
                    }
                    println!("found");
                    if let Some(path) = &o.output {
                        write(path, &Document::Certificate(cert).print())?;
                    }
                }
                None => println!("none"),
            }
            Ok(())
        }
    }
}

fn operate(op: OpName, docs: &[Document], o: &Opts, budget: &Budget) -> Outcome<Document> {
    let map = |alphabet: &Alphabet| -> Outcome<LetterMap> {
        let text = o
            .map
            .as_deref()
            .ok_or_else(|| Failure::Parse("project needs --map".into()))?;
        let pairs = text
            .split(',')
            .map(|p| {
                p.split_once(':')
                    .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                    .ok_or_else(|| Failure::Parse(format!("bad map entry `{p}`")))
            })
            .collect::<Outcome<Vec<_>>>()?;
        let mut targets: Vec<&str> = Vec::new();
        for (_, t) in &pairs {
            if !targets.contains(&t.as_str()) {
                targets.push(t);
            }
        }
        Ok(LetterMap::from_names(alphabet, &Alphabet::new(targets)?, &pairs)?)
    };
    Ok(match (op, docs) {
        (OpName::Union, [Document::Omega(a), Document::Omega(b)]) => Document::Omega(a.union(b)?),
        (OpName::Intersect, [Document::Omega(a), Document::Omega(b)]) => Document::Omega(a.intersect(b, budget)?),
        (OpName::Complement, [Document::Omega(a)]) => Document::Omega(a.complement(budget)?),
        (OpName::Project, [Document::Omega(a)]) => Document::Omega(a.map_letters(&map(a.alphabet())?)?),
        (OpName::Lift, [Document::Omega(a)]) => Document::Hnf(HnfAcceptor::base(a.clone()).lift(&o.pad)?),
        (OpName::Union, [Document::Hnf(a), Document::Hnf(b)]) => Document::Hnf(a.union(b)?),
        (OpName::Intersect, [Document::Hnf(a), Document::Hnf(b)]) => Document::Hnf(a.intersect(b, budget)?),
        (OpName::Complement, [Document::Hnf(a)]) => Document::Hnf(a.complement(budget)?),
        (OpName::Project, [Document::Hnf(a)]) => Document::Hnf(a.project(&map(a.alphabet())?)?),
        (OpName::Lift, [Document::Hnf(a)]) => Document::Hnf(a.lift(&o.pad)?),
        _ => {
            let kinds: Vec<&str> = docs.iter().map(Document::kind).collect();
            return Err(Failure::Incompatible(format!(
                "cannot apply to {}",
                kinds.join(" and ")
            )));
        }
    })
}

fn text_alphabet(o: &Opts) -> Outcome<Alphabet> {
    Ok(Alphabet::new(o.alphabet.split(',').map(str::trim))?)
}

fn kind_error(d: &Document, expected: &str) -> Failure {
    Failure::Incompatible(format!("expected {expected}, found {}", d.kind()))
}

fn read_text(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Outcome<Document> {
    Ok(Document::parse(&read_text(path)?)?)
}

fn read_presentation(path: &Path) -> Outcome<Presentation> {
    match read(path)? {
        Document::Presentation(p) => Ok(p),
        d => Err(kind_error(&d, "presentation")),
    }
}

/// A formula document, or the formula as plain text.
fn read_formula(path: &Path) -> Outcome<Formula> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        match Document::parse(&text)? {
            Document::Formula(f) => Ok(f),
            d => Err(kind_error(&d, "formula")),
        }
    } else {
        Ok(Formula::parse(text.trim())?)
    }
}

/// A word document, or the word as text over the acceptor's alphabet.
fn read_word(path: &Path, alphabet: &Alphabet, level: Option<usize>) -> Outcome<HierWord> {
    let text = read_text(path)?;
    let w = if text.trim_start().starts_with('{') {
        match Document::parse(&text)? {
            Document::Word { alphabet: a, word } => {
                a.ensure_same(alphabet)?;
                word
            }
            d => return Err(kind_error(&d, "word")),
        }
    } else {
        HierWord::parse(text.trim(), alphabet)?
    };
    if let Some(l) = level {
        w.check_level(l)?;
    }
    Ok(w)
}

fn write(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn emit(o: &Opts, text: &str) -> Outcome<()> {
    match &o.output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
