//! Formulas of the explicit-knowledge language `L` and the
//! implicit-knowledge-plus-awareness language `LKA`.
//!
//! Disjunction, implication and the biconditional are not AST nodes; the
//! parser and the helper constructors rewrite them into `~` and `&`.

mod parse;
mod table;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::parse;
pub use table::{enumerate_formulas, FormulaTable, Shape};

/// An agent name, e.g. `b` in `K{b} i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Agent(String);

/// A propositional atom, `[a-z][a-zA-Z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Atom(String);

pub type AtomSet = BTreeSet<Atom>;
pub type AgentSet = BTreeSet<Agent>;

fn is_agent_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Agent {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_agent_name(&name) {
            Ok(Agent(name))
        } else {
            Err(Error::InvalidIdentifier(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_atom_name(&name) {
            Ok(Atom(name))
        } else {
            Err(Error::InvalidIdentifier(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Agent {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Agent::new(s)
    }
}

impl TryFrom<String> for Atom {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Atom::new(s)
    }
}

impl From<Agent> for String {
    fn from(a: Agent) -> String {
        a.0
    }
}

impl From<Atom> for String {
    fn from(a: Atom) -> String {
        a.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Renders an atom set as `{i,l}`.
pub fn format_atom_set<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> String {
    let names: Vec<&str> = atoms.into_iter().map(Atom::as_str).collect();
    format!("{{{}}}", names.join(","))
}

/// Which of the two languages a formula is read in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LanguageTag {
    /// `T | p | ~f | f & f | K{a} f`, with `A{a}` only as an abbreviation.
    L,
    /// `L` plus primitive `A{a}`, with `X{a}` as an abbreviation.
    Lka,
}

impl LanguageTag {
    pub fn name(self) -> &'static str {
        match self {
            LanguageTag::L => "L",
            LanguageTag::Lka => "LKA",
        }
    }
}

impl std::str::FromStr for LanguageTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(LanguageTag::L),
            "LKA" | "lka" | "Lka" => Ok(LanguageTag::Lka),
            other => Err(Error::Mismatch(format!("unknown language `{other}` (expected L or LKA)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Atom(Atom),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Know(Agent, Arc<Formula>),
    Aware(Agent, Arc<Formula>),
    ExplicitKnow(Agent, Arc<Formula>),
}

impl Formula {
    pub fn atom(p: &Atom) -> Formula {
        Formula::Atom(p.clone())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Arc::new(f), Arc::new(g))
    }

    pub fn know(a: &Agent, f: Formula) -> Formula {
        Formula::Know(a.clone(), Arc::new(f))
    }

    pub fn aware(a: &Agent, f: Formula) -> Formula {
        Formula::Aware(a.clone(), Arc::new(f))
    }

    pub fn explicit(a: &Agent, f: Formula) -> Formula {
        Formula::ExplicitKnow(a.clone(), Arc::new(f))
    }

    /// `f | g` as `~(~f & ~g)`.
    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(f), Formula::not(g)))
    }

    /// `f -> g` as `~(f & ~g)`.
    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::not(Formula::and(f, Formula::not(g)))
    }

    /// `f <-> g` as `(f -> g) & (g -> f)`.
    pub fn iff(f: Formula, g: Formula) -> Formula {
        Formula::and(Formula::implies(f.clone(), g.clone()), Formula::implies(g, f))
    }

    /// Conjunction of a list; the empty conjunction is `T`.
    pub fn conjunction(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut iter = fs.into_iter();
        match iter.next() {
            None => Formula::Top,
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    /// The `L` abbreviation of awareness: `K{a} f | K{a} ~K{a} f`.
    pub fn defined_awareness(a: &Agent, f: Formula) -> Formula {
        let k = Formula::know(a, f);
        Formula::or(k.clone(), Formula::know(a, Formula::not(k)))
    }

    pub fn atoms(&self) -> AtomSet {
        let mut out = AtomSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut AtomSet) {
        match self {
            Formula::Top => {}
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Not(f) | Formula::Know(_, f) | Formula::Aware(_, f) | Formula::ExplicitKnow(_, f) => {
                f.collect_atoms(out)
            }
            Formula::And(f, g) => {
                f.collect_atoms(out);
                g.collect_atoms(out);
            }
        }
    }

    pub fn agents(&self) -> AgentSet {
        let mut out = AgentSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Top | Formula::Atom(_) => {}
                Formula::Not(g) => stack.push(g),
                Formula::And(g, h) => {
                    stack.push(g);
                    stack.push(h);
                }
                Formula::Know(a, g) | Formula::Aware(a, g) | Formula::ExplicitKnow(a, g) => {
                    out.insert(a.clone());
                    stack.push(g);
                }
            }
        }
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Know(_, f) | Formula::Aware(_, f) | Formula::ExplicitKnow(_, f) => {
                1 + f.depth()
            }
            Formula::And(f, g) => 1 + f.depth().max(g.depth()),
        }
    }

    /// True when every node is a grammar primitive of `lang`.
    pub fn is_in(&self, lang: LanguageTag) -> bool {
        match self {
            Formula::Top | Formula::Atom(_) => true,
            Formula::Not(f) | Formula::Know(_, f) => f.is_in(lang),
            Formula::And(f, g) => f.is_in(lang) && g.is_in(lang),
            Formula::Aware(_, f) | Formula::ExplicitKnow(_, f) => lang == LanguageTag::Lka && f.is_in(lang),
        }
    }

    /// Fails unless the formula only uses primitives of `lang`.
    pub fn require(&self, lang: LanguageTag) -> Result<()> {
        match self {
            Formula::Top | Formula::Atom(_) => Ok(()),
            Formula::Not(f) | Formula::Know(_, f) => f.require(lang),
            Formula::And(f, g) => f.require(lang).and_then(|_| g.require(lang)),
            Formula::Aware(_, f) if lang == LanguageTag::Lka => f.require(lang),
            Formula::ExplicitKnow(_, f) if lang == LanguageTag::Lka => f.require(lang),
            Formula::Aware(..) => Err(Error::NotInLanguage { op: "A", lang: lang.name() }),
            Formula::ExplicitKnow(..) => Err(Error::NotInLanguage { op: "X", lang: lang.name() }),
        }
    }

    /// Rewrites the defined operators of `lang` into its primitives.
    ///
    /// Under `L`, `A{a} f` becomes `~(~K{a} f & ~K{a} ~K{a} f)` and `X{a} f`
    /// becomes the expansion of `A{a} f & K{a} f`. Under `LKA`, `X{a} f`
    /// becomes `A{a} f & K{a} f` and `A{a}` stays primitive.
    pub fn expand_defined(&self, lang: LanguageTag) -> Formula {
        match self {
            Formula::Top | Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.expand_defined(lang)),
            Formula::And(f, g) => Formula::and(f.expand_defined(lang), g.expand_defined(lang)),
            Formula::Know(a, f) => Formula::know(a, f.expand_defined(lang)),
            Formula::Aware(a, f) => {
                let inner = f.expand_defined(lang);
                match lang {
                    LanguageTag::L => Formula::defined_awareness(a, inner),
                    LanguageTag::Lka => Formula::aware(a, inner),
                }
            }
            Formula::ExplicitKnow(a, f) => {
                let inner = f.expand_defined(lang);
                match lang {
                    LanguageTag::L => Formula::and(
                        Formula::defined_awareness(a, inner.clone()),
                        Formula::know(a, inner),
                    ),
                    LanguageTag::Lka => Formula::and(Formula::aware(a, inner.clone()), Formula::know(a, inner)),
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("T"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Not(g) => write!(f, "~{g}"),
            Formula::And(g, h) => write!(f, "({g} & {h})"),
            Formula::Know(a, g) => write!(f, "K{{{a}}} {g}"),
            Formula::Aware(a, g) => write!(f, "A{{{a}}} {g}"),
            Formula::ExplicitKnow(a, g) => write!(f, "X{{{a}}} {g}"),
        }
    }
}
