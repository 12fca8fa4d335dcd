//! Command language, script runner and REPL over a session of named rankings.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io::{self, BufRead, Write};
use std::sync::Arc;

use thiserror::Error;

use crate::error::Error;
use crate::logic::{self, is_identifier, Formula, Vocabulary};
use crate::ordinal::Ord2;
use crate::ranking::Ranking;
use crate::revision::{
    bar_plus, cond_revise, cond_strengthen, conditionalize, improvement_op, is_nearly_cf,
    istar_index, iterate_star, kern_isberner_revise, ramsey_holds, star, strengthening,
    Conditional, Preorder,
};
use crate::verify::{agreement_scan, axiom_scan, right_inverse};

pub const DEFAULT_ISTAR_BOUND: u64 = 10_000;

/// Usage line for every command, with the library operators it reaches.
pub const COMMANDS: &[(&str, &[&str])] = &[
    ("atoms: A B ...", &[]),
    ("ranking NAME { FORMULA => ORD ... else => ORD }", &[]),
    ("let NAME = star(A, B)", &["star"]),
    ("let NAME = barplus(A, B)", &["bar_plus"]),
    ("let NAME = iterate(A, OBS, K)", &["iterate_star"]),
    ("let NAME = strengthen(PHI, ORD)", &["strengthening"]),
    ("let NAME = conditionalize(A, PHI, D)", &["conditionalize"]),
    (
        "let NAME = condstrengthen(A, N, PSI | PHI)",
        &["cond_strengthen"],
    ),
    ("let NAME = condrevise(A, PSI | PHI)", &["cond_revise"]),
    ("let NAME = improve(A, PHI, N)", &["improvement_op"]),
    ("let NAME = ki(A, PSI | PHI)", &["kern_isberner_revise"]),
    ("let NAME = inverse(A)", &["right_inverse"]),
    ("show NAME", &[]),
    ("bel NAME", &[]),
    ("rank NAME FORMULA", &[]),
    ("degstrength NAME", &[]),
    ("nearlycf NAME PHI", &["is_nearly_cf"]),
    ("poss NAME PHI", &[]),
    ("level NAME K", &[]),
    ("decompose NAME", &[]),
    ("equiv A B", &[]),
    ("strengths NAME PSI | PHI", &["cond_revise"]),
    ("ramsey NAME RPRIME PSI | PHI", &["ramsey_holds"]),
    ("istar NAME PHI N [BOUND]", &["istar_index"]),
    ("scan axioms STATES DEGB SHIFTB", &["axiom_scan"]),
    ("scan agreement STATES VB", &["agreement_scan"]),
    ("save PATH", &[]),
    ("load PATH", &[]),
    ("help", &[]),
    ("quit", &[]),
];

pub fn usage() -> String {
    let mut out = String::from("commands:\n");
    for (line, _) in COMMANDS {
        let _ = writeln!(out, "  {line}");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Semantic,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Parse => 1,
            ErrorKind::Semantic => 2,
            ErrorKind::Io => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub kind: ErrorKind,
    pub message: String,
}

impl ScriptError {
    fn parse(line: usize, message: impl fmt::Display) -> Self {
        ScriptError {
            line,
            kind: ErrorKind::Parse,
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }
}

/// Failure of a single command, before a line number is attached.
#[derive(Debug)]
enum Fault {
    Semantic(String),
    Io(String),
    Parse(String),
}

impl From<Error> for Fault {
    fn from(e: Error) -> Self {
        Fault::Semantic(e.to_string())
    }
}

impl From<logic::LogicError> for Fault {
    fn from(e: logic::LogicError) -> Self {
        Fault::Semantic(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingDef {
    pub name: String,
    pub rules: Vec<(Formula, Ord2)>,
    pub default: Ord2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Star(String, String),
    BarPlus(String, String),
    Iterate(String, String, u64),
    Strengthen(Formula, Ord2),
    Conditionalize(String, Formula, u64),
    CondStrengthen(String, u64, Conditional),
    CondRevise(String, Conditional),
    Improve(String, Formula, u64),
    Ki(String, Conditional),
    Inverse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Atoms(Vec<String>),
    Ranking(RankingDef),
    Let(String, Expr),
    Show(String),
    Bel(String),
    Rank(String, Formula),
    DegStrength(String),
    NearlyCf(String, Formula),
    Poss(String, Formula),
    Level(String, u64),
    Decompose(String),
    Equiv(String, String),
    Strengths(String, Conditional),
    Ramsey(String, String, Conditional),
    Istar(String, Formula, Ord2, u64),
    ScanAxioms(usize, u64, u64),
    ScanAgreement(usize, u64),
    Save(String),
    Load(String),
    Help,
    Quit,
}

/// Pulls commands out of a script one at a time. Blank lines and lines
/// starting with `#` are skipped.
pub struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub fn new(text: &'a str) -> Self {
        Self::starting_at(text, 1)
    }

    pub fn starting_at(text: &'a str, first_line: usize) -> Self {
        Parser {
            lines: text
                .lines()
                .enumerate()
                .map(|(i, l)| (i + first_line, l))
                .collect(),
            pos: 0,
        }
    }

    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        while let Some(&(n, l)) = self.lines.get(self.pos) {
            self.pos += 1;
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Some((n, t));
            }
        }
        None
    }
}

impl Iterator for Parser<'_> {
    type Item = Result<(usize, Command), ScriptError>;

    fn next(&mut self) -> Option<Self::Item> {
        let (n, line) = self.next_line()?;
        let parsed = if line.starts_with("ranking") && !line.contains('}') {
            self.ranking_block(n, line)
        } else {
            parse_line(line).map_err(|m| ScriptError::parse(n, m))
        };
        Some(parsed.map(|c| (n, c)))
    }
}

impl Parser<'_> {
    fn ranking_block(&mut self, n: usize, header: &str) -> Result<Command, ScriptError> {
        let name = block_name(header).map_err(|m| ScriptError::parse(n, m))?;
        let mut rules = Vec::new();
        loop {
            let Some((k, line)) = self.next_line() else {
                return Err(ScriptError::parse(
                    n,
                    format!("ranking `{name}` is missing its closing `}}`"),
                ));
            };
            if line == "}" {
                return finish_rules(name, rules, k)
                    .map_err(|(line, m)| ScriptError::parse(line, m));
            }
            rules.push((k, line));
        }
    }
}

fn block_name(header: &str) -> Result<String, String> {
    let rest = header["ranking".len()..].trim();
    let name = rest
        .strip_suffix('{')
        .ok_or_else(|| "expected `ranking NAME {`".to_string())?
        .trim();
    check_name(name)?;
    Ok(name.to_string())
}

/// Builds the ranking command from `(line, rule)` pairs. Errors carry the
/// line of the offending rule, or `end` when the block as a whole is wrong.
fn finish_rules(
    name: String,
    lines: Vec<(usize, &str)>,
    end: usize,
) -> Result<Command, (usize, String)> {
    let mut rules = Vec::new();
    let mut default = None;
    for (i, &(n, line)) in lines.iter().enumerate() {
        let (lhs, rhs) = line
            .rsplit_once("=>")
            .ok_or_else(|| (n, format!("rule `{line}` needs the form `FORMULA => ORD`")))?;
        let value: Ord2 = rhs.trim().parse().map_err(|e| (n, format!("{e}")))?;
        if lhs.trim() == "else" {
            if i + 1 != lines.len() {
                return Err((n, "`else` must be the last rule".into()));
            }
            default = Some(value);
        } else {
            rules.push((logic::parse(lhs).map_err(|e| (n, e.to_string()))?, value));
        }
    }
    let default = default.ok_or_else(|| (end, format!("ranking `{name}` has no `else` rule")))?;
    Ok(Command::Ranking(RankingDef {
        name,
        rules,
        default,
    }))
}

fn check_name(name: &str) -> Result<(), String> {
    if is_identifier(name) {
        Ok(())
    } else {
        Err(format!("`{name}` is not a valid name"))
    }
}

fn name_arg(s: &str) -> Result<String, String> {
    let s = s.trim();
    check_name(s)?;
    Ok(s.to_string())
}

fn nat_arg(s: &str) -> Result<u64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("expected a natural number, found `{}`", s.trim()))
}

fn ord_arg(s: &str) -> Result<Ord2, String> {
    s.trim().parse().map_err(|e| format!("{e}"))
}

fn formula_arg(s: &str) -> Result<Formula, String> {
    logic::parse(s).map_err(|e| e.to_string())
}

fn cond_arg(s: &str) -> Result<Conditional, String> {
    s.parse().map_err(|e: logic::LogicError| e.to_string())
}

/// `NAME REST`: the first word and the remainder.
fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim()),
        None => (s, ""),
    }
}

/// Splits at top-level commas.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, b) in s.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn want_args(func: &str, args: &[&str], n: usize) -> Result<(), String> {
    if args.len() == n {
        Ok(())
    } else {
        Err(format!(
            "`{func}` takes {n} arguments, found {}",
            args.len()
        ))
    }
}

fn parse_expr(s: &str) -> Result<Expr, String> {
    let s = s.trim();
    let (func, inner) = s
        .split_once('(')
        .and_then(|(f, rest)| Some((f.trim(), rest.strip_suffix(')')?)))
        .ok_or_else(|| format!("expected `FUNCTION(ARGS)`, found `{s}`"))?;
    let a = split_args(inner);
    let arity = match func {
        "star" | "barplus" | "strengthen" | "condrevise" | "ki" => 2,
        "iterate" | "conditionalize" | "condstrengthen" | "improve" => 3,
        "inverse" => 1,
        _ => return Err(format!("unknown function `{func}`")),
    };
    want_args(func, &a, arity)?;
    Ok(match func {
        "star" => Expr::Star(name_arg(a[0])?, name_arg(a[1])?),
        "barplus" => Expr::BarPlus(name_arg(a[0])?, name_arg(a[1])?),
        "iterate" => Expr::Iterate(name_arg(a[0])?, name_arg(a[1])?, nat_arg(a[2])?),
        "strengthen" => Expr::Strengthen(formula_arg(a[0])?, ord_arg(a[1])?),
        "conditionalize" => {
            Expr::Conditionalize(name_arg(a[0])?, formula_arg(a[1])?, nat_arg(a[2])?)
        }
        "condstrengthen" => Expr::CondStrengthen(name_arg(a[0])?, nat_arg(a[1])?, cond_arg(a[2])?),
        "condrevise" => Expr::CondRevise(name_arg(a[0])?, cond_arg(a[1])?),
        "improve" => Expr::Improve(name_arg(a[0])?, formula_arg(a[1])?, nat_arg(a[2])?),
        "ki" => Expr::Ki(name_arg(a[0])?, cond_arg(a[1])?),
        _ => Expr::Inverse(name_arg(a[0])?),
    })
}

/// Parses a single-line command. Ranking blocks may be written on one line
/// with rules separated by `;`.
pub fn parse_line(line: &str) -> Result<Command, String> {
    let line = line.trim();
    if let Some(rest) = line.strip_prefix("atoms:") {
        return Ok(Command::Atoms(
            rest.split_whitespace().map(String::from).collect(),
        ));
    }
    let (word, rest) = split_word(line);
    let no_args = |c: Command| {
        if rest.is_empty() {
            Ok(c)
        } else {
            Err(format!("`{word}` takes no arguments"))
        }
    };
    match word {
        "ranking" => {
            let (header, body) = line
                .split_once('{')
                .ok_or_else(|| "expected `ranking NAME {`".to_string())?;
            let name = block_name(&format!("{header}{{"))?;
            let body = body
                .trim()
                .strip_suffix('}')
                .ok_or_else(|| "expected `}` at the end of the line".to_string())?;
            let rules = body
                .split(';')
                .map(str::trim)
                .filter(|r| !r.is_empty())
                .map(|r| (0, r))
                .collect();
            finish_rules(name, rules, 0).map_err(|(_, m)| m)
        }
        "let" => {
            let (name, expr) = rest
                .split_once('=')
                .ok_or_else(|| "expected `let NAME = EXPR`".to_string())?;
            Ok(Command::Let(name_arg(name)?, parse_expr(expr)?))
        }
        "show" => Ok(Command::Show(name_arg(rest)?)),
        "bel" => Ok(Command::Bel(name_arg(rest)?)),
        "degstrength" => Ok(Command::DegStrength(name_arg(rest)?)),
        "decompose" => Ok(Command::Decompose(name_arg(rest)?)),
        "rank" | "nearlycf" | "poss" => {
            let (name, f) = split_word(rest);
            let (name, f) = (name_arg(name)?, formula_arg(f)?);
            Ok(match word {
                "rank" => Command::Rank(name, f),
                "nearlycf" => Command::NearlyCf(name, f),
                _ => Command::Poss(name, f),
            })
        }
        "level" => {
            let (name, k) = split_word(rest);
            Ok(Command::Level(name_arg(name)?, nat_arg(k)?))
        }
        "equiv" => {
            let (a, b) = split_word(rest);
            Ok(Command::Equiv(name_arg(a)?, name_arg(b)?))
        }
        "strengths" => {
            let (name, c) = split_word(rest);
            Ok(Command::Strengths(name_arg(name)?, cond_arg(c)?))
        }
        "ramsey" => {
            let (name, rest) = split_word(rest);
            let (rprime, c) = split_word(rest);
            Ok(Command::Ramsey(
                name_arg(name)?,
                name_arg(rprime)?,
                cond_arg(c)?,
            ))
        }
        "istar" => parse_istar(rest),
        "scan" => {
            let (kind, rest) = split_word(rest);
            let nums: Vec<&str> = rest.split_whitespace().collect();
            match (kind, nums.as_slice()) {
                ("axioms", [s, d, c]) => Ok(Command::ScanAxioms(
                    nat_arg(s)? as usize,
                    nat_arg(d)?,
                    nat_arg(c)?,
                )),
                ("agreement", [s, v]) => {
                    Ok(Command::ScanAgreement(nat_arg(s)? as usize, nat_arg(v)?))
                }
                _ => Err(
                    "expected `scan axioms STATES DEGB SHIFTB` or `scan agreement STATES VB`"
                        .into(),
                ),
            }
        }
        "save" | "load" => {
            if rest.is_empty() {
                return Err(format!("`{word}` needs a path"));
            }
            Ok(if word == "save" {
                Command::Save(rest.to_string())
            } else {
                Command::Load(rest.to_string())
            })
        }
        "help" => no_args(Command::Help),
        "quit" | "exit" => no_args(Command::Quit),
        _ => Err(format!("unknown command `{word}`; try `help`")),
    }
}

/// `NAME PHI N [BOUND]`; the formula is everything between the name and the
/// trailing numbers.
fn parse_istar(rest: &str) -> Result<Command, String> {
    let (name, rest) = split_word(rest);
    let words: Vec<&str> = rest.split_whitespace().collect();
    let numeric = |w: &str| w.parse::<Ord2>().is_ok();
    let trailing = words
        .iter()
        .rev()
        .take(2)
        .take_while(|w| numeric(w))
        .count();
    let (formula_words, nums) = match trailing {
        2 if words.len() > 2 => words.split_at(words.len() - 2),
        t if t >= 1 && words.len() > 1 => words.split_at(words.len() - 1),
        _ => return Err("expected `istar NAME PHI N [BOUND]`".into()),
    };
    let bound = match nums {
        [_, b] => nat_arg(b)?,
        _ => DEFAULT_ISTAR_BOUND,
    };
    Ok(Command::Istar(
        name_arg(name)?,
        formula_arg(&formula_words.join(" "))?,
        ord_arg(nums[0])?,
        bound,
    ))
}

enum Flow {
    Continue,
    Quit,
}

/// Vocabulary plus named rankings, with a log of executed commands.
#[derive(Debug, Clone, Default)]
pub struct Session {
    vocab: Option<Arc<Vocabulary>>,
    rankings: BTreeMap<String, Ranking>,
    transcript: Vec<String>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vocabulary(&self) -> Option<&Arc<Vocabulary>> {
        self.vocab.as_ref()
    }

    pub fn rankings(&self) -> &BTreeMap<String, Ranking> {
        &self.rankings
    }

    pub fn get(&self, name: &str) -> Option<&Ranking> {
        self.rankings.get(name)
    }

    pub fn transcript(&self) -> &[String] {
        &self.transcript
    }

    /// Runs every command of `text`, writing results to `out`. Stops at the
    /// first error or at `quit`.
    pub fn run(&mut self, text: &str, out: &mut impl Write) -> Result<(), ScriptError> {
        self.run_from(text, 1, out).map(|_| ())
    }

    fn run_from(
        &mut self,
        text: &str,
        first_line: usize,
        out: &mut impl Write,
    ) -> Result<Flow, ScriptError> {
        for item in Parser::starting_at(text, first_line) {
            let (line, cmd) = item?;
            let mut buf = String::new();
            let flow = self.execute(&cmd, &mut buf).map_err(|fault| {
                let (kind, message) = match fault {
                    Fault::Semantic(m) => (ErrorKind::Semantic, m),
                    Fault::Io(m) => (ErrorKind::Io, m),
                    Fault::Parse(m) => (ErrorKind::Parse, m),
                };
                ScriptError {
                    line,
                    kind,
                    message,
                }
            })?;
            out.write_all(buf.as_bytes()).map_err(|e| ScriptError {
                line,
                kind: ErrorKind::Io,
                message: e.to_string(),
            })?;
            if let Flow::Quit = flow {
                return Ok(Flow::Quit);
            }
        }
        Ok(Flow::Continue)
    }

    fn vocab(&self) -> Result<&Arc<Vocabulary>, Fault> {
        self.vocab
            .as_ref()
            .ok_or_else(|| Fault::Semantic("no atoms declared; start with `atoms: ...`".into()))
    }

    fn lookup(&self, name: &str) -> Result<&Ranking, Fault> {
        self.rankings
            .get(name)
            .ok_or_else(|| Fault::Semantic(format!("no ranking named `{name}`")))
    }

    fn bind(&mut self, name: &str, r: Ranking) {
        self.rankings.insert(name.to_string(), r);
    }

    fn build(&self, def: &RankingDef) -> Result<Ranking, Fault> {
        let vocab = Arc::clone(self.vocab()?);
        let r = Ranking::from_rules(vocab, &def.rules, def.default)?;
        if !r.is_cf() {
            return Err(Fault::Semantic(Error::NotCf(def.name.clone()).to_string()));
        }
        Ok(r)
    }

    fn eval(&self, expr: &Expr) -> Result<Ranking, Fault> {
        Ok(match expr {
            Expr::Star(a, b) => star(self.lookup(a)?, self.lookup(b)?)?,
            Expr::BarPlus(a, b) => bar_plus(self.lookup(a)?, self.lookup(b)?)?,
            Expr::Iterate(a, obs, k) => iterate_star(self.lookup(a)?, self.lookup(obs)?, *k)?,
            Expr::Strengthen(f, n) => {
                let r = strengthening(self.vocab()?, f, *n)?;
                if !r.is_cf() {
                    return Err(Error::Unsatisfiable(f.to_string()).into());
                }
                r
            }
            Expr::Conditionalize(a, f, d) => conditionalize(self.lookup(a)?, f, *d)?,
            Expr::CondStrengthen(a, n, c) => cond_strengthen(self.lookup(a)?, *n, c)?,
            Expr::CondRevise(a, c) => cond_revise(self.lookup(a)?, c)?.ranking,
            Expr::Improve(a, f, n) => {
                let p = Preorder::from_ranking(self.lookup(a)?);
                improvement_op(&p, f, *n)?.canonical_ranking()
            }
            Expr::Ki(a, c) => kern_isberner_revise(self.lookup(a)?, c)?,
            Expr::Inverse(a) => right_inverse(self.lookup(a)?),
        })
    }

    fn execute(&mut self, cmd: &Command, out: &mut String) -> Result<Flow, Fault> {
        match cmd {
            Command::Atoms(atoms) => {
                self.vocab = Some(Arc::new(Vocabulary::new(atoms)?));
                self.rankings.clear();
            }
            Command::Ranking(def) => {
                let r = self.build(def)?;
                self.bind(&def.name, r);
            }
            Command::Let(name, expr) => {
                let r = self.eval(expr)?;
                self.bind(name, r);
            }
            Command::Show(name) => {
                let _ = write!(out, "{name}:\n{}", self.lookup(name)?.table());
            }
            Command::Bel(name) => {
                let r = self.lookup(name)?;
                let _ = writeln!(out, "{}", show_states(r, r.bel()));
            }
            Command::Rank(name, f) => {
                let rank = self.lookup(name)?.rank_of(f)?;
                let _ = writeln!(out, "{}", show_opt(rank));
            }
            Command::DegStrength(name) => {
                let _ = writeln!(out, "{}", show_opt(self.lookup(name)?.degree_of_strength()));
            }
            Command::NearlyCf(name, f) => {
                let _ = writeln!(out, "{}", is_nearly_cf(self.lookup(name)?, f)?);
            }
            Command::Poss(name, f) => {
                let levels: Vec<String> = self
                    .lookup(name)?
                    .poss(f)?
                    .iter()
                    .map(u64::to_string)
                    .collect();
                let _ = writeln!(out, "{{{}}}", levels.join(", "));
            }
            Command::Level(name, k) => {
                let r = self.lookup(name)?;
                let slice = r.level(*k).ok_or(Error::EmptyLevel(*k))?;
                let mut rows: Vec<_> = slice.finite_parts.iter().map(|(s, p)| (*p, *s)).collect();
                rows.sort();
                write_rows(out, r, rows.into_iter().map(|(p, s)| (s, p.to_string())));
            }
            Command::Decompose(name) => {
                let r = self.lookup(name)?;
                for lvl in r.decompose() {
                    let _ = writeln!(out, "level {} (offset {}):", lvl.level, lvl.offset);
                    let mut rows: Vec<_> = lvl.parts.iter().map(|(s, p)| (*p, *s)).collect();
                    rows.sort();
                    write_rows(out, r, rows.into_iter().map(|(p, s)| (s, p.to_string())));
                }
            }
            Command::Equiv(a, b) => {
                let _ = writeln!(out, "{}", self.lookup(a)?.equivalent(self.lookup(b)?)?);
            }
            Command::Strengths(name, c) => {
                let rev = cond_revise(self.lookup(name)?, c)?;
                let mut levels: Vec<(u64, String)> = rev
                    .strengths
                    .iter()
                    .map(|(k, n)| (*k, n.to_string()))
                    .collect();
                levels.extend(rev.skipped.iter().map(|k| (*k, "skipped".to_string())));
                levels.sort();
                for (k, n) in levels {
                    let _ = writeln!(out, "level {k}: {n}");
                }
            }
            Command::Ramsey(name, rprime, c) => {
                let _ = writeln!(
                    out,
                    "{}",
                    ramsey_holds(self.lookup(name)?, c, self.lookup(rprime)?)?
                );
            }
            Command::Istar(name, f, n, bound) => {
                let r = self.lookup(name)?;
                let obs = strengthening(r.vocabulary(), f, *n)?;
                match istar_index(r, &obs, f, *bound)? {
                    Some(i) => writeln!(out, "{i}"),
                    None => writeln!(out, "none within {bound}"),
                }
                .ok();
            }
            Command::ScanAxioms(s, d, c) => {
                let _ = write!(out, "{}", axiom_scan(*s, *d, *c)?);
            }
            Command::ScanAgreement(s, v) => {
                let _ = write!(out, "{}", agreement_scan(*s, *v)?);
            }
            Command::Save(path) => {
                let text = self
                    .to_session_text()
                    .ok_or_else(|| self.vocab().unwrap_err())?;
                std::fs::write(path, text)
                    .map_err(|e| Fault::Io(format!("cannot write `{path}`: {e}")))?;
            }
            Command::Load(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Fault::Io(format!("cannot read `{path}`: {e}")))?;
                let loaded = Session::from_session_text(&text)
                    .map_err(|e| Fault::Parse(format!("{path}: {e}")))?;
                self.vocab = loaded.vocab;
                self.rankings = loaded.rankings;
            }
            Command::Help => out.push_str(&usage()),
            Command::Quit => return Ok(Flow::Quit),
        }
        self.transcript.push(command_label(cmd));
        Ok(Flow::Continue)
    }

    /// `atoms:` line followed by one `ranking` block per binding, each state
    /// written as its own minterm rule.
    pub fn to_session_text(&self) -> Option<String> {
        let vocab = self.vocab.as_ref()?;
        let mut out = format!("atoms: {}\n", vocab.atoms().join(" "));
        for (name, r) in &self.rankings {
            let _ = writeln!(out, "ranking {name} {{");
            for (s, v) in r.iter() {
                let _ = writeln!(out, "  {} => {v}", vocab.minterm(s));
            }
            out.push_str("  else => 0\n}\n");
        }
        Some(out)
    }

    /// Parses a session file. Only `atoms:` and `ranking` commands are allowed.
    pub fn from_session_text(text: &str) -> Result<Session, ScriptError> {
        let mut session = Session::new();
        for item in Parser::new(text) {
            let (line, cmd) = item?;
            if !matches!(cmd, Command::Atoms(_) | Command::Ranking(_)) {
                return Err(ScriptError::parse(
                    line,
                    "session files hold only `atoms:` and `ranking` blocks",
                ));
            }
            session
                .execute(&cmd, &mut String::new())
                .map_err(|f| ScriptError::parse(line, describe(f)))?;
        }
        if session.vocab.is_none() {
            return Err(ScriptError::parse(
                text.lines().count().max(1),
                "session file has no `atoms:` line",
            ));
        }
        session.transcript.clear();
        Ok(session)
    }
}

fn describe(f: Fault) -> String {
    match f {
        Fault::Semantic(m) | Fault::Io(m) | Fault::Parse(m) => m,
    }
}

fn command_label(cmd: &Command) -> String {
    match cmd {
        Command::Ranking(def) => format!("ranking {}", def.name),
        other => format!("{other:?}"),
    }
}

fn show_opt(v: Option<Ord2>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}

fn show_states(r: &Ranking, states: Vec<logic::State>) -> String {
    let labels: Vec<String> = states
        .into_iter()
        .map(|s| r.vocabulary().display_state(s).to_string())
        .collect();
    labels.join(", ")
}

fn write_rows(out: &mut String, r: &Ranking, rows: impl Iterator<Item = (logic::State, String)>) {
    let rows: Vec<(String, String)> = rows
        .map(|(s, v)| (r.vocabulary().display_state(s).to_string(), v))
        .collect();
    let width = rows
        .iter()
        .map(|(l, _)| l.chars().count())
        .max()
        .unwrap_or(0);
    for (label, v) in rows {
        let _ = writeln!(out, "  {label:<width$}  {v}");
    }
}

/// Runs `text` against a fresh session and returns everything it printed.
pub fn run_script(text: &str) -> Result<String, ScriptError> {
    let mut out = Vec::new();
    Session::new().run(text, &mut out)?;
    Ok(String::from_utf8(out).expect("output is UTF-8"))
}

/// Interactive loop. Errors are reported on `out` and the session carries
/// on; a `ranking NAME {` line keeps reading until the closing `}`.
pub fn repl(input: impl BufRead, out: &mut impl Write) -> io::Result<Session> {
    let mut session = Session::new();
    let mut lines = input.lines().enumerate();
    loop {
        write!(out, "> ")?;
        out.flush()?;
        let Some((n, line)) = lines.next() else {
            writeln!(out)?;
            return Ok(session);
        };
        let mut chunk = line?;
        let t = chunk.trim();
        if t.starts_with("ranking") && t.ends_with('{') {
            for (_, more) in lines.by_ref() {
                let more = more?;
                let done = more.trim() == "}";
                chunk.push('\n');
                chunk.push_str(&more);
                if done {
                    break;
                }
                write!(out, "... ")?;
                out.flush()?;
            }
        }
        match session.run_from(&chunk, n + 1, out) {
            Ok(Flow::Quit) => return Ok(session),
            Ok(Flow::Continue) => {}
            Err(e) if e.kind == ErrorKind::Parse && e.message.starts_with("unknown command") => {
                writeln!(out, "error: {}", e.message)?;
                write!(out, "{}", usage())?;
            }
            Err(e) => writeln!(out, "error: {}", e.message)?,
        }
    }
}

/// A built-in script and the output it must produce.
pub struct Check {
    pub name: &'static str,
    pub script: &'static str,
    pub expected: &'static str,
}

pub const CHECKS: &[Check] = &[
    Check {
        name: "heavy_reports",
        script: include_str!("../scripts/heavy_reports.ocf"),
        expected: include_str!("../scripts/heavy_reports.out"),
    },
    Check {
        name: "order_matters",
        script: include_str!("../scripts/order_matters.ocf"),
        expected: include_str!("../scripts/order_matters.out"),
    },
    Check {
        name: "hollow_bones",
        script: include_str!("../scripts/hollow_bones.ocf"),
        expected: include_str!("../scripts/hollow_bones.out"),
    },
    Check {
        name: "axioms",
        script: include_str!("../scripts/axioms.ocf"),
        expected: include_str!("../scripts/axioms.out"),
    },
];

/// Runs every built-in check, writing one line per check. Returns whether
/// all of them matched.
pub fn run_checks(out: &mut impl Write) -> io::Result<bool> {
    let mut all = true;
    for check in CHECKS {
        let verdict = match run_script(check.script) {
            Ok(got) if got == check.expected => "ok".to_string(),
            Ok(_) => "output differs".to_string(),
            Err(e) => format!("failed: {e}"),
        };
        all &= verdict == "ok";
        writeln!(out, "{}: {verdict}", check.name)?;
    }
    Ok(all)
}
