//! Kripke lattice models: a Kripke model, its restriction lattice, and
//! per-agent awareness maps `π_a` over the lattice.
//!
//! Awareness is stored in product form: one atom set `Aw_a(w)` per agent and
//! world, inducing `π_a(w_X) = w_{X ∩ Aw_a(w)}`. Any map satisfying No
//! Surprises has this form, so [`PointwiseAwarenessMap`] only serves as
//! checker input.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{format_atom_set, Agent, Atom, AtomSet, Formula, LanguageTag};
use crate::kripke::{check_lattice_cap, vocabularies, KripkeModel, Vocab, WorldId};
use crate::semantics::{Node, Semantics, ThreeValued};

/// `Aw_a(w)` for every agent and world (by name).
pub type AwarenessAssignment = BTreeMap<Agent, BTreeMap<String, AtomSet>>;

/// An explicit awareness map over `Ω_L`, keyed by agent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointwiseAwarenessMap {
    pub maps: BTreeMap<Agent, BTreeMap<WorldId, WorldId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub witness: Option<String>,
}

impl PropertyVerdict {
    fn from_witness(witness: Option<String>) -> Self {
        PropertyVerdict { holds: witness.is_none(), witness }
    }
}

/// Outcome of checking Downwards, Introspective Idempotence and No Surprises.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AwarenessReport {
    pub downwards: PropertyVerdict,
    pub introspective_idempotence: PropertyVerdict,
    pub no_surprises: PropertyVerdict,
}

impl AwarenessReport {
    pub fn all_hold(&self) -> bool {
        self.downwards.holds && self.introspective_idempotence.holds && self.no_surprises.holds
    }
}

/// How `LKA` connectives treat atoms outside the current vocabulary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LkaMode {
    /// Every clause is guarded by `At(f) ⊆ X`.
    #[default]
    Guarded,
    /// Classical booleans: atoms are read off the base valuation whatever
    /// the vocabulary, and nothing is undefined.
    StrictTwoValued,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeLatticeModel {
    base: KripkeModel,
    aware: Vec<Vec<Vocab>>,
}

impl KripkeLatticeModel {
    /// Builds the model, requiring a total assignment over agents and
    /// worlds that satisfies Introspective Idempotence.
    pub fn new(base: KripkeModel, assignment: &AwarenessAssignment) -> Result<Self> {
        let k = Self::new_unchecked(base, assignment)?;
        if let Some(w) = k.monotonicity_witness() {
            return Err(Error::AwarenessProperty { property: "II", witness: w });
        }
        Ok(k)
    }

    /// Like [`new`](Self::new) but skips the Introspective Idempotence check.
    pub fn new_unchecked(base: KripkeModel, assignment: &AwarenessAssignment) -> Result<Self> {
        for (agent, per_world) in assignment {
            base.agent_index(agent)?;
            for w in per_world.keys() {
                base.world_index(w)?;
            }
        }
        let mut aware = Vec::with_capacity(base.agents().len());
        for agent in base.agents() {
            let per_world =
                assignment.get(agent).ok_or_else(|| Error::NotTotal(format!("awareness of agent {agent}")))?;
            let mut row = Vec::with_capacity(base.worlds().len());
            for w in base.worlds() {
                let atoms = per_world
                    .get(w)
                    .ok_or_else(|| Error::NotTotal(format!("awareness of agent {agent} at world {w}")))?;
                row.push(base.vocab_of(atoms)?);
            }
            aware.push(row);
        }
        Ok(KripkeLatticeModel { base, aware })
    }

    /// First edge `(w,v) ∈ R_a` with `Aw_a(w) ⊄ Aw_a(v)`, if any.
    fn monotonicity_witness(&self) -> Option<String> {
        let k = &self.base;
        for (a, agent) in k.agents().iter().enumerate() {
            for w in 0..k.worlds().len() {
                for &v in k.successors(a, w) {
                    if !self.aware[a][w].is_subset(self.aware[a][v]) {
                        return Some(format!(
                            "agent {agent}: ({},{}) in R but Aw({})={} is not contained in Aw({})={}",
                            k.worlds()[w],
                            k.worlds()[v],
                            k.worlds()[w],
                            format_atom_set(&k.atoms_of(self.aware[a][w])),
                            k.worlds()[v],
                            format_atom_set(&k.atoms_of(self.aware[a][v]))
                        ));
                    }
                }
            }
        }
        None
    }

    pub fn base(&self) -> &KripkeModel {
        &self.base
    }

    /// `Aw_a(w)` by index.
    pub fn aware_vocab(&self, a: usize, w: usize) -> Vocab {
        self.aware[a][w]
    }

    pub fn assignment(&self) -> AwarenessAssignment {
        let k = &self.base;
        k.agents()
            .iter()
            .enumerate()
            .map(|(a, agent)| {
                let per_world =
                    k.worlds().iter().enumerate().map(|(w, name)| (name.clone(), k.atoms_of(self.aware[a][w]))).collect();
                (agent.clone(), per_world)
            })
            .collect()
    }

    /// `π_a(w_X) = w_{X ∩ Aw_a(w)}`.
    pub fn awareness_image(&self, a: &Agent, w: &WorldId) -> Result<WorldId> {
        let ai = self.base.agent_index(a)?;
        let (wi, x) = self.base.resolve(w)?;
        Ok(self.base.world_id(wi, x.meet(self.aware[ai][wi])))
    }

    /// `Ω_L` in lattice order: vocabularies from largest, worlds in
    /// declared order within each.
    pub fn states(&self) -> Result<Vec<(usize, Vocab)>> {
        check_lattice_cap(self.base.atoms().len())?;
        let n = self.base.worlds().len();
        Ok(vocabularies(self.base.atoms().len()).into_iter().flat_map(|x| (0..n).map(move |w| (w, x))).collect())
    }

    /// The map `π` written out at every point of `Ω_L`.
    pub fn induced_pointwise(&self) -> Result<PointwiseAwarenessMap> {
        let states = self.states()?;
        let mut maps = BTreeMap::new();
        for (a, agent) in self.base.agents().iter().enumerate() {
            let m = states
                .iter()
                .map(|&(w, x)| (self.base.world_id(w, x), self.base.world_id(w, x.meet(self.aware[a][w]))))
                .collect();
            maps.insert(agent.clone(), m);
        }
        Ok(PointwiseAwarenessMap { maps })
    }

    fn formula_vocab(&self, f: &Formula) -> Result<Vocab> {
        let mut v = Vocab::EMPTY;
        for p in f.atoms() {
            let i = self.base.atom_index(&p).ok_or_else(|| Error::UnknownAtom(p.to_string()))?;
            v.0 |= 1 << i;
        }
        Ok(v)
    }

    /// Three-valued satisfaction of an `L` formula at `w_X`.
    pub fn eval_l(&self, w: &WorldId, f: &Formula) -> Result<ThreeValued> {
        f.require(LanguageTag::L)?;
        let (wi, x) = self.base.resolve(w)?;
        self.eval_l_at(wi, x, f)
    }

    fn eval_l_at(&self, w: usize, x: Vocab, f: &Formula) -> Result<ThreeValued> {
        if !self.formula_vocab(f)?.is_subset(x) {
            return Ok(ThreeValued::Undefined);
        }
        let b = match f {
            Formula::Top => true,
            Formula::Atom(p) => self.base.truth(w).contains(self.base.atom_index(p).expect("checked")),
            Formula::Not(g) => !self.eval_l_at(w, x, g)?.is_true(),
            Formula::And(g, h) => self.eval_l_at(w, x, g)?.is_true() && self.eval_l_at(w, x, h)?.is_true(),
            Formula::Know(a, g) => {
                let ai = self.base.agent_index(a)?;
                let y = x.meet(self.aware[ai][w]);
                let mut all = true;
                for &v in self.base.successors(ai, w) {
                    all &= self.eval_l_at(v, y, g)?.is_true();
                }
                all
            }
            Formula::Aware(..) | Formula::ExplicitKnow(..) => return Err(f.require(LanguageTag::L).unwrap_err()),
        };
        Ok(ThreeValued::from_bool(b))
    }

    /// Satisfaction of an `LKA` formula at `w_X`: `K{a}` quantifies over
    /// successors at the full vocabulary, `A{a}` compares atoms with the
    /// awareness image.
    pub fn eval_lka(&self, w: &WorldId, f: &Formula, mode: LkaMode) -> Result<ThreeValued> {
        let (wi, x) = self.base.resolve(w)?;
        self.eval_lka_at(wi, x, &f.expand_defined(LanguageTag::Lka), mode)
    }

    fn eval_lka_at(&self, w: usize, x: Vocab, f: &Formula, mode: LkaMode) -> Result<ThreeValued> {
        let atoms = self.formula_vocab(f)?;
        if mode == LkaMode::Guarded && !atoms.is_subset(x) {
            return Ok(ThreeValued::Undefined);
        }
        let top = self.base.full_vocab();
        let b = match f {
            Formula::Top => true,
            Formula::Atom(p) => self.base.truth(w).contains(self.base.atom_index(p).expect("checked")),
            Formula::Not(g) => !self.eval_lka_at(w, x, g, mode)?.is_true(),
            Formula::And(g, h) => {
                self.eval_lka_at(w, x, g, mode)?.is_true() && self.eval_lka_at(w, x, h, mode)?.is_true()
            }
            Formula::Know(a, g) => {
                let ai = self.base.agent_index(a)?;
                let mut all = true;
                for &v in self.base.successors(ai, w) {
                    all &= self.eval_lka_at(v, top, g, mode)?.is_true();
                }
                all
            }
            Formula::Aware(a, _) => {
                let ai = self.base.agent_index(a)?;
                atoms.is_subset(x.meet(self.aware[ai][w]))
            }
            Formula::ExplicitKnow(..) => unreachable!("expanded before evaluation"),
        };
        Ok(ThreeValued::from_bool(b))
    }

    /// States of `Ω_L` where `f` is True, in lattice order.
    pub fn satisfying_states(&self, f: &Formula, lang: LanguageTag) -> Result<Vec<WorldId>> {
        if lang == LanguageTag::L {
            f.require(LanguageTag::L)?;
        }
        let mut out = Vec::new();
        for (w, x) in self.states()? {
            let v = match lang {
                LanguageTag::L => self.eval_l_at(w, x, f)?,
                LanguageTag::Lka => self.eval_lka_at(w, x, &f.expand_defined(LanguageTag::Lka), LkaMode::Guarded)?,
            };
            if v.is_true() {
                out.push(self.base.world_id(w, x));
            }
        }
        Ok(out)
    }
}

struct IndexedMap {
    /// `image[a][x * n + w]`: the image of `w_X` as (world, vocabulary).
    image: Vec<Vec<(usize, Vocab)>>,
    n: usize,
}

fn index_pointwise(base: &KripkeModel, m: &PointwiseAwarenessMap) -> Result<IndexedMap> {
    let n_atoms = base.atoms().len();
    check_lattice_cap(n_atoms)?;
    let n = base.worlds().len();
    let size = (1usize << n_atoms) * n;
    for agent in m.maps.keys() {
        base.agent_index(agent)?;
    }
    let mut image = Vec::new();
    for agent in base.agents() {
        let entries =
            m.maps.get(agent).ok_or_else(|| Error::NotTotal(format!("no awareness map for agent {agent}")))?;
        let mut row: Vec<Option<(usize, Vocab)>> = vec![None; size];
        for (from, to) in entries {
            let (w, x) = base.resolve(from)?;
            row[x.0 as usize * n + w] = Some(base.resolve(to)?);
        }
        let mut full = Vec::with_capacity(size);
        for (i, slot) in row.into_iter().enumerate() {
            match slot {
                Some(t) => full.push(t),
                None => {
                    let id = base.world_id(i % n, Vocab((i / n) as u64));
                    return Err(Error::NotTotal(format!("agent {agent} at {id}")));
                }
            }
        }
        image.push(full);
    }
    Ok(IndexedMap { image, n })
}

fn downwards_witness(base: &KripkeModel, m: &IndexedMap) -> Option<String> {
    for (a, agent) in base.agents().iter().enumerate() {
        for x in vocabularies(base.atoms().len()) {
            for w in 0..m.n {
                let (u, y) = m.image[a][x.0 as usize * m.n + w];
                if u != w || !y.is_subset(x) {
                    return Some(format!(
                        "agent {agent}: {} maps to {}",
                        base.world_id(w, x),
                        base.world_id(u, y)
                    ));
                }
            }
        }
    }
    None
}

fn idempotence_witness(base: &KripkeModel, m: &IndexedMap) -> Option<String> {
    for (a, agent) in base.agents().iter().enumerate() {
        for x in vocabularies(base.atoms().len()) {
            for w in 0..m.n {
                let (u, y) = m.image[a][x.0 as usize * m.n + w];
                for &v in base.successors(a, u) {
                    let (t, z) = m.image[a][y.0 as usize * m.n + v];
                    if z != y || !base.related(a, u, t) {
                        return Some(format!(
                            "agent {agent}: {} maps to {}, whose successor {} maps to {} outside I({})",
                            base.world_id(w, x),
                            base.world_id(u, y),
                            base.world_id(v, y),
                            base.world_id(t, z),
                            base.world_id(u, y)
                        ));
                    }
                }
            }
        }
    }
    None
}

fn no_surprises_witness(base: &KripkeModel, m: &IndexedMap) -> Option<String> {
    for (a, agent) in base.agents().iter().enumerate() {
        for x in vocabularies(base.atoms().len()) {
            for w in 0..m.n {
                let (u, z) = m.image[a][x.0 as usize * m.n + w];
                if u != w {
                    continue;
                }
                for y in x.subsets() {
                    if m.image[a][y.0 as usize * m.n + w] != (w, y.meet(z)) {
                        return Some(format!(
                            "agent {agent}: ({}, X={}, Y={})",
                            base.worlds()[w],
                            format_atom_set(&base.atoms_of(x)),
                            format_atom_set(&base.atoms_of(y))
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Checks Downwards, Introspective Idempotence and No Surprises of a total
/// pointwise map, reporting the first witness of each failure.
pub fn check_awareness_properties(base: &KripkeModel, m: &PointwiseAwarenessMap) -> Result<AwarenessReport> {
    let idx = index_pointwise(base, m)?;
    Ok(AwarenessReport {
        downwards: PropertyVerdict::from_witness(downwards_witness(base, &idx)),
        introspective_idempotence: PropertyVerdict::from_witness(idempotence_witness(base, &idx)),
        no_surprises: PropertyVerdict::from_witness(no_surprises_witness(base, &idx)),
    })
}

/// Recovers the product-form assignment from a map satisfying D and NS:
/// `Aw_a(w)` is the vocabulary of `π_a(w_At)`.
pub fn canonicalize(base: &KripkeModel, m: &PointwiseAwarenessMap) -> Result<AwarenessAssignment> {
    let idx = index_pointwise(base, m)?;
    if let Some(w) = downwards_witness(base, &idx) {
        return Err(Error::AwarenessProperty { property: "D", witness: w });
    }
    if let Some(w) = no_surprises_witness(base, &idx) {
        return Err(Error::AwarenessProperty { property: "NS", witness: w });
    }
    let top = base.full_vocab().0 as usize;
    Ok(base
        .agents()
        .iter()
        .enumerate()
        .map(|(a, agent)| {
            let per_world = (0..idx.n)
                .map(|w| (base.worlds()[w].clone(), base.atoms_of(idx.image[a][top * idx.n + w].1)))
                .collect();
            (agent.clone(), per_world)
        })
        .collect())
}

/// State layout shared by the table-driven KLM semantics: state
/// `x * |W| + w` is `w_X` for the vocabulary mask `x`.
fn state_of(n: usize, w: usize, x: Vocab) -> usize {
    x.0 as usize * n + w
}

struct Layout<'a> {
    k: &'a KripkeLatticeModel,
    n: usize,
    size: usize,
}

impl<'a> Layout<'a> {
    fn new(k: &'a KripkeLatticeModel) -> Result<Self> {
        check_lattice_cap(k.base.atoms().len())?;
        let n = k.base.worlds().len();
        Ok(Layout { k, n, size: (1usize << k.base.atoms().len()) * n })
    }

    fn vocab_of(&self, atoms: &AtomSet) -> Result<Vocab> {
        let mut v = Vocab::EMPTY;
        for p in atoms {
            let i = self.k.base.atom_index(p).ok_or_else(|| Error::UnknownAtom(p.to_string()))?;
            v.0 |= 1 << i;
        }
        Ok(v)
    }

    fn tabulate(&self, mut f: impl FnMut(usize, Vocab) -> ThreeValued) -> Vec<ThreeValued> {
        (0..self.size).map(|s| f(s % self.n, Vocab((s / self.n) as u64))).collect()
    }

    fn atom(&self, p: &Atom, strict: bool) -> Result<Vec<ThreeValued>> {
        let i = self.k.base.atom_index(p).ok_or_else(|| Error::UnknownAtom(p.to_string()))?;
        Ok(self.tabulate(|w, x| {
            if strict || x.contains(i) {
                ThreeValued::from_bool(self.k.base.truth(w).contains(i))
            } else {
                ThreeValued::Undefined
            }
        }))
    }

    fn guarded(&self, atoms: &AtomSet, strict: bool, mut f: impl FnMut(usize, Vocab) -> bool) -> Result<Vec<ThreeValued>> {
        let need = self.vocab_of(atoms)?;
        Ok(self.tabulate(|w, x| {
            if strict || need.is_subset(x) {
                ThreeValued::from_bool(f(w, x))
            } else {
                ThreeValued::Undefined
            }
        }))
    }

    fn label(&self, s: usize) -> String {
        self.k.base.world_id(s % self.n, Vocab((s / self.n) as u64)).to_string()
    }

    fn defined(&self, atoms: &AtomSet, s: usize) -> bool {
        self.vocab_of(atoms).is_ok_and(|v| v.is_subset(Vocab((s / self.n) as u64)))
    }
}

/// Table-driven `L` semantics over `Ω_L`.
pub struct KlmL<'a> {
    layout: Layout<'a>,
}

impl<'a> KlmL<'a> {
    pub fn new(k: &'a KripkeLatticeModel) -> Result<Self> {
        Ok(KlmL { layout: Layout::new(k)? })
    }

    /// Position of `w_X` in value vectors.
    pub fn state(&self, w: usize, x: Vocab) -> usize {
        state_of(self.layout.n, w, x)
    }
}

impl Semantics for KlmL<'_> {
    type Value = Vec<ThreeValued>;

    fn top(&self) -> Result<Self::Value> {
        Ok(vec![ThreeValued::True; self.layout.size])
    }

    fn atom(&self, p: &Atom) -> Result<Self::Value> {
        self.layout.atom(p, false)
    }

    fn not(&self, arg: Node<'_, Self::Value>) -> Result<Self::Value> {
        let n = self.layout.n;
        self.layout.guarded(arg.atoms, false, |w, x| !arg.value[state_of(n, w, x)].is_true())
    }

    fn and(&self, lhs: Node<'_, Self::Value>, rhs: Node<'_, Self::Value>) -> Result<Self::Value> {
        let n = self.layout.n;
        let atoms: AtomSet = lhs.atoms.union(rhs.atoms).cloned().collect();
        self.layout.guarded(&atoms, false, |w, x| {
            let s = state_of(n, w, x);
            lhs.value[s].is_true() && rhs.value[s].is_true()
        })
    }

    fn know(&self, agent: &Agent, arg: Node<'_, Self::Value>) -> Result<Self::Value> {
        let k = self.layout.k;
        let a = k.base.agent_index(agent)?;
        let n = self.layout.n;
        self.layout.guarded(arg.atoms, false, |w, x| {
            let y = x.meet(k.aware[a][w]);
            k.base.successors(a, w).iter().all(|&v| arg.value[state_of(n, v, y)].is_true())
        })
    }

    fn aware(&self, _agent: &Agent, _arg: Node<'_, Self::Value>) -> Result<Self::Value> {
        Err(Error::NotInLanguage { op: "A", lang: "L" })
    }

    fn state_count(&self) -> usize {
        self.layout.size
    }

    fn verdict(&self, value: &Self::Value, state: usize) -> ThreeValued {
        value[state]
    }

    fn state_label(&self, state: usize) -> String {
        self.layout.label(state)
    }

    fn atoms_defined(&self, atoms: &AtomSet, state: usize) -> bool {
        self.layout.defined(atoms, state)
    }
}

/// Table-driven `LKA` semantics over `Ω_L`.
pub struct KlmLka<'a> {
    layout: Layout<'a>,
    mode: LkaMode,
}

impl<'a> KlmLka<'a> {
    pub fn new(k: &'a KripkeLatticeModel, mode: LkaMode) -> Result<Self> {
        Ok(KlmLka { layout: Layout::new(k)?, mode })
    }

    pub fn state(&self, w: usize, x: Vocab) -> usize {
        state_of(self.layout.n, w, x)
    }

    fn strict(&self) -> bool {
        self.mode == LkaMode::StrictTwoValued
    }
}

impl Semantics for KlmLka<'_> {
    type Value = Vec<ThreeValued>;

    fn top(&self) -> Result<Self::Value> {
        Ok(vec![ThreeValued::True; self.layout.size])
    }

    fn atom(&self, p: &Atom) -> Result<Self::Value> {
        self.layout.atom(p, self.strict())
    }

    fn not(&self, arg: Node<'_, Self::Value>) -> Result<Self::Value> {
        let n = self.layout.n;
        self.layout.guarded(arg.atoms, self.strict(), |w, x| !arg.value[state_of(n, w, x)].is_true())
    }

    fn and(&self, lhs: Node<'_, Self::Value>, rhs: Node<'_, Self::Value>) -> Result<Self::Value> {
        let n = self.layout.n;
        let atoms: AtomSet = lhs.atoms.union(rhs.atoms).cloned().collect();
        self.layout.guarded(&atoms, self.strict(), |w, x| {
            let s = state_of(n, w, x);
            lhs.value[s].is_true() && rhs.value[s].is_true()
        })
    }

    fn know(&self, agent: &Agent, arg: Node<'_, Self::Value>) -> Result<Self::Value> {
        let k = self.layout.k;
        let a = k.base.agent_index(agent)?;
        let n = self.layout.n;
        let top = k.base.full_vocab();
        self.layout.guarded(arg.atoms, self.strict(), |w, _| {
            k.base.successors(a, w).iter().all(|&v| arg.value[state_of(n, v, top)].is_true())
        })
    }

    fn aware(&self, agent: &Agent, arg: Node<'_, Self::Value>) -> Result<Self::Value> {
        let k = self.layout.k;
        let a = k.base.agent_index(agent)?;
        let need = self.layout.vocab_of(arg.atoms)?;
        self.layout.guarded(arg.atoms, self.strict(), |w, x| need.is_subset(x.meet(k.aware[a][w])))
    }

    fn state_count(&self) -> usize {
        self.layout.size
    }

    fn verdict(&self, value: &Self::Value, state: usize) -> ThreeValued {
        value[state]
    }

    fn state_label(&self, state: usize) -> String {
        self.layout.label(state)
    }

    fn atoms_defined(&self, atoms: &AtomSet, state: usize) -> bool {
        self.strict() || self.layout.defined(atoms, state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::parse;
    use crate::semantics::evaluate_all;

    fn atoms(names: &[&str]) -> AtomSet {
        names.iter().map(|n| Atom::new(*n).unwrap()).collect()
    }

    fn ag(s: &str) -> Agent {
        Agent::new(s).unwrap()
    }

    fn wid(s: &str) -> WorldId {
        WorldId::parse(s, &atoms(&["i", "l"])).unwrap()
    }

    fn l(s: &str) -> Formula {
        parse(s, LanguageTag::Lka).unwrap().expand_defined(LanguageTag::L)
    }

    fn lka(s: &str) -> Formula {
        parse(s, LanguageTag::Lka).unwrap()
    }

    #[test]
    fn awareness_images() {
        let k = fixtures::trade();
        assert_eq!(k.awareness_image(&ag("b"), &wid("w2@{i,l}")).unwrap(), wid("w2@{i}"));
        assert_eq!(k.awareness_image(&ag("b"), &wid("w1@{i,l}")).unwrap(), wid("w1@{i,l}"));
        assert_eq!(k.awareness_image(&ag("b"), &wid("w2@{}")).unwrap(), wid("w2@{}"));
        assert!(k.awareness_image(&ag("z"), &wid("w2@{}")).is_err());
    }

    #[test]
    fn trade_l_examples() {
        let k = fixtures::trade();
        let t = ThreeValued::True;
        let f = ThreeValued::False;
        assert_eq!(k.eval_l(&wid("w1@{i,l}"), &l("K{b} i")).unwrap(), t);
        assert_eq!(k.eval_l(&wid("w1@{i,l}"), &l("K{o} i")).unwrap(), f);
        assert_eq!(k.eval_l(&wid("w2@{i,l}"), &l("A{b} l")).unwrap(), f);
        assert_eq!(k.eval_l(&wid("w2@{i}"), &l("l")).unwrap(), ThreeValued::Undefined);
        assert!(k.eval_l(&wid("w2@{i}"), &lka("A{b} l")).is_err());
    }

    #[test]
    fn trade_lka_examples() {
        let k = fixtures::trade();
        let g = LkaMode::Guarded;
        assert_eq!(k.eval_lka(&wid("w1@{i,l}"), &lka("A{o} l"), g).unwrap(), ThreeValued::True);
        assert_eq!(k.eval_lka(&wid("w2@{i,l}"), &lka("A{b} l"), g).unwrap(), ThreeValued::False);
        assert_eq!(k.eval_lka(&wid("w1@{i,l}"), &lka("K{o} i"), g).unwrap(), ThreeValued::False);
        assert_eq!(k.eval_lka(&wid("w1@{i,l}"), &lka("X{o} i"), g).unwrap(), ThreeValued::False);
        assert_eq!(k.eval_lka(&wid("w2@{i}"), &lka("A{b} l"), g).unwrap(), ThreeValued::Undefined);
        let strict = LkaMode::StrictTwoValued;
        assert_eq!(k.eval_lka(&wid("w1@{}"), &lka("i"), strict).unwrap(), ThreeValued::True);
        assert_eq!(k.eval_lka(&wid("w2@{i}"), &lka("A{b} l"), strict).unwrap(), ThreeValued::False);
    }

    #[test]
    fn satisfying_state_scans() {
        let k = fixtures::trade();
        let sat = k.satisfying_states(&l("i"), LanguageTag::L).unwrap();
        assert_eq!(sat, vec![wid("w1@{i,l}"), wid("w1@{i}")]);
        assert_eq!(k.satisfying_states(&Formula::Top, LanguageTag::L).unwrap().len(), 12);
        assert!(k.satisfying_states(&l("~T"), LanguageTag::L).unwrap().is_empty());
    }

    #[test]
    fn induced_map_passes_all_properties() {
        let k = fixtures::trade();
        let m = k.induced_pointwise().unwrap();
        assert!(check_awareness_properties(k.base(), &m).unwrap().all_hold());
        assert_eq!(canonicalize(k.base(), &m).unwrap(), k.assignment());
    }

    #[test]
    fn no_surprises_witness() {
        let k = fixtures::trade();
        let mut m = k.induced_pointwise().unwrap();
        let b = m.maps.get_mut(&ag("b")).unwrap();
        b.insert(wid("w2@{i,l}"), wid("w2@{i,l}"));
        b.insert(wid("w2@{i}"), wid("w2@{}"));
        let r = check_awareness_properties(k.base(), &m).unwrap();
        assert!(r.downwards.holds);
        assert!(!r.no_surprises.holds);
        assert_eq!(r.no_surprises.witness.as_deref(), Some("agent b: (w2, X={i,l}, Y={i})"));
        match canonicalize(k.base(), &m) {
            Err(Error::AwarenessProperty { property: "NS", witness }) => assert!(witness.contains("(w2, X={i,l}, Y={i})")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn idempotence_failure_on_cell() {
        let k = fixtures::trade();
        let mut asg = k.assignment();
        asg.get_mut(&ag("b")).unwrap().insert("w2".into(), atoms(&["i", "l"]));
        asg.get_mut(&ag("b")).unwrap().insert("w3".into(), AtomSet::new());
        let bad = KripkeLatticeModel::new_unchecked(k.base().clone(), &asg).unwrap();
        let r = check_awareness_properties(k.base(), &bad.induced_pointwise().unwrap()).unwrap();
        assert!(r.downwards.holds && r.no_surprises.holds);
        assert!(!r.introspective_idempotence.holds);
        assert!(KripkeLatticeModel::new(k.base().clone(), &asg).is_err());
    }

    #[test]
    fn empty_awareness_canonicalizes() {
        let k = fixtures::trade();
        let mut m = k.induced_pointwise().unwrap();
        for map in m.maps.values_mut() {
            for (from, to) in map.iter_mut() {
                *to = WorldId::new(from.base.clone(), AtomSet::new());
            }
        }
        let asg = canonicalize(k.base(), &m).unwrap();
        assert!(asg.values().flat_map(|pw| pw.values()).all(|s| s.is_empty()));
    }

    #[test]
    fn non_total_map_is_an_error() {
        let k = fixtures::trade();
        let mut m = k.induced_pointwise().unwrap();
        m.maps.get_mut(&ag("o")).unwrap().remove(&wid("w3@{l}"));
        assert!(matches!(check_awareness_properties(k.base(), &m), Err(Error::NotTotal(_))));
    }

    #[test]
    fn table_semantics_match_pointwise() {
        let k = fixtures::trade();
        let states = k.states().unwrap();
        let sem_l = KlmL::new(&k).unwrap();
        let sem_lka = KlmLka::new(&k, LkaMode::Guarded).unwrap();
        for text in ["K{b} i", "A{b} l", "(K{o} ~K{b} l & i)", "~K{b} l -> K{b} ~K{b} l"] {
            let f = l(text);
            let vals = evaluate_all(&sem_l, &f).unwrap();
            for &(w, x) in &states {
                assert_eq!(vals[sem_l.state(w, x)], k.eval_l(&k.base().world_id(w, x), &f).unwrap(), "{text}");
            }
        }
        for text in ["K{b} i", "A{b} l", "X{o} (i & A{b} l)", "~A{b} l -> K{b} ~A{b} l"] {
            let f = lka(text);
            let vals = evaluate_all(&sem_lka, &f.expand_defined(LanguageTag::Lka)).unwrap();
            for &(w, x) in &states {
                let id = k.base().world_id(w, x);
                assert_eq!(vals[sem_lka.state(w, x)], k.eval_lka(&id, &f, LkaMode::Guarded).unwrap(), "{text}");
            }
        }
    }
}
