//! Three-valued verdicts and a table-driven evaluator shared by all model
//! classes.
//!
//! A [`Semantics`] assigns every formula a value over all states of one
//! model at once, computed from the values of its immediate subformulas.
//! [`Evaluation`] fills such values for a whole [`FormulaTable`] in a single
//! front-to-back pass.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formula::{Agent, Atom, AtomSet, Formula, FormulaTable, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ThreeValued {
    True,
    False,
    Undefined,
}

impl ThreeValued {
    pub fn from_bool(b: bool) -> Self {
        if b {
            ThreeValued::True
        } else {
            ThreeValued::False
        }
    }

    pub fn is_true(self) -> bool {
        self == ThreeValued::True
    }

    pub fn is_defined(self) -> bool {
        self != ThreeValued::Undefined
    }

    pub fn negate(self) -> Self {
        match self {
            ThreeValued::True => ThreeValued::False,
            ThreeValued::False => ThreeValued::True,
            ThreeValued::Undefined => ThreeValued::Undefined,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ThreeValued::True => "True",
            ThreeValued::False => "False",
            ThreeValued::Undefined => "Undefined",
        }
    }
}

impl fmt::Display for ThreeValued {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A subformula handed to a connective: its text, atoms and value.
pub struct Node<'a, V> {
    pub formula: &'a Formula,
    pub atoms: &'a AtomSet,
    pub value: &'a V,
}

/// Compositional semantics over the finitely many states of one model.
pub trait Semantics {
    type Value;

    fn top(&self) -> Result<Self::Value>;
    fn atom(&self, p: &Atom) -> Result<Self::Value>;
    fn not(&self, arg: Node<'_, Self::Value>) -> Result<Self::Value>;
    fn and(&self, lhs: Node<'_, Self::Value>, rhs: Node<'_, Self::Value>) -> Result<Self::Value>;
    fn know(&self, agent: &Agent, arg: Node<'_, Self::Value>) -> Result<Self::Value>;
    fn aware(&self, agent: &Agent, arg: Node<'_, Self::Value>) -> Result<Self::Value>;

    fn state_count(&self) -> usize;
    fn verdict(&self, value: &Self::Value, state: usize) -> ThreeValued;
    fn state_label(&self, state: usize) -> String;

    /// Whether the atoms at `state` of a formula with atoms `atoms` all have
    /// a defined truth value there.
    fn atoms_defined(&self, atoms: &AtomSet, state: usize) -> bool;

    /// True when a connective's value depends only on the values and atom
    /// sets of its arguments, never on their syntax.
    fn extensional(&self) -> bool {
        true
    }
}

/// Values of every formula of a table under one semantics.
pub struct Evaluation<'s, S: Semantics> {
    sem: &'s S,
    values: Vec<S::Value>,
}

impl<'s, S: Semantics> Evaluation<'s, S> {
    pub fn new(sem: &'s S) -> Self {
        Evaluation { sem, values: Vec::new() }
    }

    pub fn semantics(&self) -> &'s S {
        self.sem
    }

    /// Evaluates all table entries not yet evaluated.
    pub fn fill(&mut self, table: &FormulaTable) -> Result<()> {
        while self.values.len() < table.len() {
            let id = self.values.len();
            let node = |i: usize| {
                let e = table.entry(i);
                Node { formula: &e.formula, atoms: &e.atoms, value: &self.values[i] }
            };
            let v = match &table.entry(id).shape {
                Shape::Top => self.sem.top()?,
                Shape::Atom(p) => self.sem.atom(p)?,
                Shape::Not(i) => self.sem.not(node(*i))?,
                Shape::And(i, j) => self.sem.and(node(*i), node(*j))?,
                Shape::Know(a, i) => self.sem.know(a, node(*i))?,
                Shape::Aware(a, i) => self.sem.aware(a, node(*i))?,
            };
            self.values.push(v);
        }
        Ok(())
    }

    pub fn value(&self, id: usize) -> &S::Value {
        &self.values[id]
    }

    pub fn verdict(&self, id: usize, state: usize) -> ThreeValued {
        self.sem.verdict(&self.values[id], state)
    }

    pub fn verdicts(&self, id: usize) -> Vec<ThreeValued> {
        (0..self.sem.state_count()).map(|s| self.sem.verdict(&self.values[id], s)).collect()
    }
}

/// Evaluates one formula at every state.
pub fn evaluate_all<S: Semantics>(sem: &S, f: &Formula) -> Result<Vec<ThreeValued>> {
    let mut table = FormulaTable::new();
    let id = table.intern(f);
    let mut ev = Evaluation::new(sem);
    ev.fill(&table)?;
    Ok(ev.verdicts(id))
}
