//! Propositional vocabulary, states and formulas.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub const MAX_ATOMS: usize = 20;

const RESERVED: [&str; 3] = ["true", "false", "else"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("parse error at token {token} (offset {offset}): {message}")]
    Parse {
        token: usize,
        offset: usize,
        message: String,
    },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An ordered, duplicate-free list of atom names.
///
/// Atom `i` is bit `i` of a state index, so the state space is
/// `0..2^len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn new<S: AsRef<str>>(atoms: &[S]) -> Result<Self, LogicError> {
        if atoms.is_empty() {
            return Err(LogicError::InvalidVocabulary("no atoms".into()));
        }
        if atoms.len() > MAX_ATOMS {
            return Err(LogicError::InvalidVocabulary(format!(
                "{} atoms exceeds the limit of {MAX_ATOMS}",
                atoms.len()
            )));
        }
        let mut index = HashMap::new();
        for (i, atom) in atoms.iter().enumerate() {
            let atom = atom.as_ref();
            if !is_identifier(atom) || RESERVED.contains(&atom) {
                return Err(LogicError::InvalidVocabulary(format!(
                    "`{atom}` is not a valid atom name"
                )));
            }
            if index.insert(atom.to_string(), i).is_some() {
                return Err(LogicError::InvalidVocabulary(format!(
                    "duplicate atom `{atom}`"
                )));
            }
        }
        Ok(Vocabulary {
            atoms: atoms.iter().map(|a| a.as_ref().to_string()).collect(),
            index,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn state_count(&self) -> usize {
        1 << self.atoms.len()
    }

    pub fn states(&self) -> impl Iterator<Item = State> {
        (0..self.state_count() as u32).map(State)
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The state making exactly the named atoms true.
    pub fn state_of<S: AsRef<str>>(&self, true_atoms: &[S]) -> Result<State, LogicError> {
        let mut bits = 0u32;
        for atom in true_atoms {
            let i = self
                .atom_index(atom.as_ref())
                .ok_or_else(|| LogicError::UnknownAtom(atom.as_ref().to_string()))?;
            bits |= 1 << i;
        }
        Ok(State(bits))
    }

    pub fn display_state(&self, state: State) -> StateDisplay<'_> {
        StateDisplay { vocab: self, state }
    }

    /// The conjunction of literals satisfied by exactly `state`.
    pub fn minterm(&self, state: State) -> Formula {
        let literal = |(i, atom): (usize, &String)| {
            let a = Formula::atom(atom);
            if state.holds(i) {
                a
            } else {
                Formula::not(a)
            }
        };
        let mut lits = self.atoms.iter().enumerate().map(literal);
        let first = lits.next().expect("vocabulary is nonempty");
        lits.fold(first, Formula::and)
    }

    /// Truth value of `f` at every state, indexed by state.
    pub fn truth_table(&self, f: &Formula) -> Result<Vec<bool>, LogicError> {
        let compiled = self.compile(f)?;
        Ok(self.states().map(|s| compiled.eval(s)).collect())
    }

    pub fn models(&self, f: &Formula) -> Result<Vec<State>, LogicError> {
        let compiled = self.compile(f)?;
        Ok(self.states().filter(|s| compiled.eval(*s)).collect())
    }

    pub fn sat(&self, state: State, f: &Formula) -> Result<bool, LogicError> {
        Ok(self.compile(f)?.eval(state))
    }

    fn compile(&self, f: &Formula) -> Result<Compiled, LogicError> {
        Ok(match f {
            Formula::True => Compiled::Const(true),
            Formula::False => Compiled::Const(false),
            Formula::Atom(name) => Compiled::Bit(
                self.atom_index(name)
                    .ok_or_else(|| LogicError::UnknownAtom(name.clone()))?,
            ),
            Formula::Not(g) => Compiled::Not(Box::new(self.compile(g)?)),
            Formula::And(g, h) => {
                Compiled::And(Box::new(self.compile(g)?), Box::new(self.compile(h)?))
            }
            Formula::Or(g, h) => {
                Compiled::Or(Box::new(self.compile(g)?), Box::new(self.compile(h)?))
            }
            Formula::Implies(g, h) => Compiled::Or(
                Box::new(Compiled::Not(Box::new(self.compile(g)?))),
                Box::new(self.compile(h)?),
            ),
        })
    }
}

/// Formula with atoms resolved to bit positions.
enum Compiled {
    Const(bool),
    Bit(usize),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn eval(&self, s: State) -> bool {
        match self {
            Compiled::Const(b) => *b,
            Compiled::Bit(i) => s.holds(*i),
            Compiled::Not(g) => !g.eval(s),
            Compiled::And(g, h) => g.eval(s) && h.eval(s),
            Compiled::Or(g, h) => g.eval(s) || h.eval(s),
        }
    }
}

/// A truth assignment, stored as the bitmask of true atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(pub u32);

impl State {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn holds(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }
}

pub struct StateDisplay<'a> {
    vocab: &'a Vocabulary,
    state: State,
}

impl fmt::Display for StateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = (0..self.vocab.len())
            .filter(|i| self.state.holds(*i))
            .map(|i| self.vocab.atoms[i].as_str())
            .collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(g))
    }
}

/// Fully parenthesized canonical form; `parse` reads it back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(name) => write!(f, "{name}"),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::And(g, h) => write!(f, "({g} & {h})"),
            Formula::Or(g, h) => write!(f, "({g} | {h})"),
            Formula::Implies(g, h) => write!(f, "({g} -> {h})"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

fn describe(tok: Option<&Tok>) -> String {
    match tok {
        None => "end of input".into(),
        Some(Tok::Ident(name)) => format!("`{name}`"),
        Some(Tok::True) => "`true`".into(),
        Some(Tok::False) => "`false`".into(),
        Some(Tok::Not) => "`!`".into(),
        Some(Tok::And) => "`&`".into(),
        Some(Tok::Or) => "`|`".into(),
        Some(Tok::Implies) => "`->`".into(),
        Some(Tok::LParen) => "`(`".into(),
        Some(Tok::RParen) => "`)`".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, LogicError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                match &text[start..=i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(LogicError::Parse {
                    token: toks.len() + 1,
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        toks.push((tok, start));
        i += 1;
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn error(&self, message: String) -> LogicError {
        LogicError::Parse {
            token: self.pos + 1,
            offset: self.toks.get(self.pos).map_or(self.len, |(_, o)| *o),
            message,
        }
    }

    fn unexpected(&self) -> LogicError {
        self.error(format!("unexpected {}", describe(self.peek())))
    }

    fn implication(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        let f = match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                return Ok(Formula::not(self.unary()?));
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(
                        self.error(format!("expected `)`, found {}", describe(self.peek())))
                    );
                }
                inner
            }
            Some(Tok::True) => Formula::True,
            Some(Tok::False) => Formula::False,
            Some(Tok::Ident(name)) => Formula::Atom(name.clone()),
            _ => return Err(self.unexpected()),
        };
        self.pos += 1;
        Ok(f)
    }
}

/// Parses `!` `&` `|` `->` (tightest first, `->` right-associative),
/// parentheses, atoms and the literals `true`/`false`.
pub fn parse(text: &str) -> Result<Formula, LogicError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        len: text.len(),
    };
    let f = p.implication()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(f)
}
