use std::collections::HashMap;
use std::sync::Arc;

use super::{Agent, AgentSet, Atom, AtomSet, Formula, LanguageTag};

/// One node of a hash-consed formula, with children referenced by table id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Top,
    Atom(Atom),
    Not(usize),
    And(usize, usize),
    Know(Agent, usize),
    Aware(Agent, usize),
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub formula: Arc<Formula>,
    pub atoms: AtomSet,
    pub depth: usize,
    pub shape: Shape,
}

/// Hash-consed formulas in topological order: every child id is smaller
/// than its parent's id, so evaluators can fill values front to back.
#[derive(Clone, Debug, Default)]
pub struct FormulaTable {
    entries: Vec<Entry>,
    index: HashMap<Shape, usize>,
    truncated: bool,
}

impl FormulaTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, id: usize) -> &Entry {
        &self.entries[id]
    }

    pub fn formula(&self, id: usize) -> &Arc<Formula> {
        &self.entries[id].formula
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// True when an enumeration stopped at its limit.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    fn push(&mut self, shape: Shape) -> usize {
        if let Some(&id) = self.index.get(&shape) {
            return id;
        }
        let (formula, atoms, depth) = match &shape {
            Shape::Top => (Formula::Top, AtomSet::new(), 0),
            Shape::Atom(p) => (Formula::Atom(p.clone()), [p.clone()].into(), 0),
            Shape::Not(i) => {
                let e = &self.entries[*i];
                (Formula::Not(e.formula.clone()), e.atoms.clone(), e.depth + 1)
            }
            Shape::And(i, j) => {
                let (a, b) = (&self.entries[*i], &self.entries[*j]);
                let atoms = a.atoms.union(&b.atoms).cloned().collect();
                (Formula::And(a.formula.clone(), b.formula.clone()), atoms, 1 + a.depth.max(b.depth))
            }
            Shape::Know(ag, i) => {
                let e = &self.entries[*i];
                (Formula::Know(ag.clone(), e.formula.clone()), e.atoms.clone(), e.depth + 1)
            }
            Shape::Aware(ag, i) => {
                let e = &self.entries[*i];
                (Formula::Aware(ag.clone(), e.formula.clone()), e.atoms.clone(), e.depth + 1)
            }
        };
        let id = self.entries.len();
        self.entries.push(Entry { formula: Arc::new(formula), atoms, depth, shape: shape.clone() });
        self.index.insert(shape, id);
        id
    }

    /// Adds `f` and all its subformulas, returning the id of `f`.
    ///
    /// `X{a} f` is stored as `A{a} f & K{a} f`.
    pub fn intern(&mut self, f: &Formula) -> usize {
        match f {
            Formula::Top => self.push(Shape::Top),
            Formula::Atom(p) => self.push(Shape::Atom(p.clone())),
            Formula::Not(g) => {
                let i = self.intern(g);
                self.push(Shape::Not(i))
            }
            Formula::And(g, h) => {
                let i = self.intern(g);
                let j = self.intern(h);
                self.push(Shape::And(i, j))
            }
            Formula::Know(a, g) => {
                let i = self.intern(g);
                self.push(Shape::Know(a.clone(), i))
            }
            Formula::Aware(a, g) => {
                let i = self.intern(g);
                self.push(Shape::Aware(a.clone(), i))
            }
            Formula::ExplicitKnow(a, g) => {
                let i = self.intern(g);
                let aw = self.push(Shape::Aware(a.clone(), i));
                let kn = self.push(Shape::Know(a.clone(), i));
                self.push(Shape::And(aw, kn))
            }
        }
    }

    /// Looks up an already interned formula without inserting.
    pub fn find(&self, f: &Formula) -> Option<usize> {
        let shape = match f {
            Formula::Top => Shape::Top,
            Formula::Atom(p) => Shape::Atom(p.clone()),
            Formula::Not(g) => Shape::Not(self.find(g)?),
            Formula::And(g, h) => Shape::And(self.find(g)?, self.find(h)?),
            Formula::Know(a, g) => Shape::Know(a.clone(), self.find(g)?),
            Formula::Aware(a, g) => Shape::Aware(a.clone(), self.find(g)?),
            Formula::ExplicitKnow(a, g) => {
                let i = self.find(g)?;
                let aw = *self.index.get(&Shape::Aware(a.clone(), i))?;
                let kn = *self.index.get(&Shape::Know(a.clone(), i))?;
                Shape::And(aw, kn)
            }
        };
        self.index.get(&shape).copied()
    }

    /// All formulas of depth at most `depth`, in enumeration order.
    ///
    /// Layer 0 is `T` followed by the atoms in order. Layer `d` lists
    /// negations of layer `d-1`, then conjunctions `(f & g)` over pairs of
    /// earlier formulas with `id(f) <= id(g)` and at least one conjunct of
    /// depth `d-1`, then `K{a}` of layer `d-1` for each agent, then `A{a}`
    /// likewise under `LKA`. At most `limit` formulas are produced.
    pub fn enumerate(
        atoms: &AtomSet,
        agents: &AgentSet,
        depth: usize,
        lang: LanguageTag,
        limit: Option<usize>,
    ) -> FormulaTable {
        let limit = limit.unwrap_or(usize::MAX);
        let mut t = FormulaTable::new();
        let full = |t: &mut FormulaTable| {
            if t.len() >= limit {
                t.truncated = true;
                true
            } else {
                false
            }
        };
        let mut base = vec![Shape::Top];
        base.extend(atoms.iter().cloned().map(Shape::Atom));
        for shape in base {
            if full(&mut t) {
                return t;
            }
            t.push(shape);
        }
        let mut layer = 0..t.len();
        for _ in 0..depth {
            let prefix = t.len();
            let prev = layer.clone();
            for i in prev.clone() {
                if full(&mut t) {
                    return t;
                }
                t.push(Shape::Not(i));
            }
            for i in 0..prefix {
                for j in i..prefix {
                    if prev.contains(&i) || prev.contains(&j) {
                        if full(&mut t) {
                            return t;
                        }
                        t.push(Shape::And(i, j));
                    }
                }
            }
            for a in agents {
                for i in prev.clone() {
                    if full(&mut t) {
                        return t;
                    }
                    t.push(Shape::Know(a.clone(), i));
                }
            }
            if lang == LanguageTag::Lka {
                for a in agents {
                    for i in prev.clone() {
                        if full(&mut t) {
                            return t;
                        }
                        t.push(Shape::Aware(a.clone(), i));
                    }
                }
            }
            layer = prefix..t.len();
        }
        t
    }
}

/// Deterministic, duplicate-free list of all formulas up to `depth`.
pub fn enumerate_formulas(atoms: &AtomSet, agents: &AgentSet, depth: usize, lang: LanguageTag) -> Vec<Formula> {
    FormulaTable::enumerate(atoms, agents, depth, lang, None)
        .entries
        .into_iter()
        .map(|e| Arc::unwrap_or_clone(e.formula))
        .collect()
}
