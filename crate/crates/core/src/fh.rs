//! Fagin-Halpern awareness structures: a Kripke model plus an awareness set
//! `𝒜_a(w)` of formulas per agent and world.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{parse, Agent, AgentSet, Atom, AtomSet, Formula, FormulaTable, LanguageTag};
use crate::kripke::{KripkeData, KripkeModel};
use crate::semantics::{evaluate_all, Node, Semantics, ThreeValued};

/// `𝒜_a(w)`: either every formula over a set of atoms, or a literal list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AwarenessSet {
    AtomGenerated(AtomSet),
    Explicit(Vec<Formula>),
}

impl AwarenessSet {
    pub fn contains(&self, f: &Formula) -> bool {
        match self {
            AwarenessSet::AtomGenerated(atoms) => f.atoms().is_subset(atoms),
            AwarenessSet::Explicit(list) => list.contains(f),
        }
    }

    /// Atoms occurring in the set's formulas.
    pub fn extracted_atoms(&self) -> AtomSet {
        match self {
            AwarenessSet::AtomGenerated(atoms) => atoms.clone(),
            AwarenessSet::Explicit(list) => list.iter().flat_map(Formula::atoms).collect(),
        }
    }

    fn same_set(&self, other: &AwarenessSet) -> bool {
        match (self, other) {
            (AwarenessSet::AtomGenerated(x), AwarenessSet::AtomGenerated(y)) => x == y,
            (AwarenessSet::Explicit(x), AwarenessSet::Explicit(y)) => {
                x.iter().all(|f| y.contains(f)) && y.iter().all(|f| x.contains(f))
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AwarenessSetData {
    AtomGenerated { atoms: Vec<Atom> },
    Explicit { formulas: Vec<String> },
}

impl AwarenessSetData {
    pub fn to_set(&self) -> Result<AwarenessSet> {
        Ok(match self {
            AwarenessSetData::AtomGenerated { atoms } => AwarenessSet::AtomGenerated(atoms.iter().cloned().collect()),
            AwarenessSetData::Explicit { formulas } => AwarenessSet::Explicit(
                formulas.iter().map(|f| parse(f, LanguageTag::Lka)).collect::<Result<_>>()?,
            ),
        })
    }

    pub fn from_set(set: &AwarenessSet) -> Self {
        match set {
            AwarenessSet::AtomGenerated(atoms) => AwarenessSetData::AtomGenerated { atoms: atoms.iter().cloned().collect() },
            AwarenessSet::Explicit(list) => {
                AwarenessSetData::Explicit { formulas: list.iter().map(Formula::to_string).collect() }
            }
        }
    }
}

/// An FH model as written in model files.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FhData {
    #[serde(flatten)]
    pub kripke: KripkeData,
    pub awareness_sets: BTreeMap<Agent, BTreeMap<String, AwarenessSetData>>,
}

pub type AwarenessSets = BTreeMap<Agent, BTreeMap<String, AwarenessSet>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PpWitness {
    pub agent: Agent,
    pub world: String,
    pub formula: String,
    pub in_set: bool,
    pub missing_atoms: Vec<Atom>,
}

/// Outcome of the PP check. `bounded` is set when some explicit set was
/// only checked against a finite surrogate of the language.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PpReport {
    pub holds: bool,
    pub bounded: bool,
    pub witnesses: Vec<PpWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KaWitness {
    pub agent: Agent,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KaReport {
    pub holds: bool,
    pub witnesses: Vec<KaWitness>,
}

/// Depth of the formulas an explicit awareness set is checked against.
pub const PP_SURROGATE_DEPTH: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FhModel {
    base: KripkeModel,
    awareness: Vec<Vec<AwarenessSet>>,
}

impl FhModel {
    /// Requires exactly one awareness set per agent and world of `base`.
    pub fn new(base: KripkeModel, sets: AwarenessSets) -> Result<Self> {
        let mut errs = Vec::new();
        for (agent, per_world) in &sets {
            if base.agent_index(agent).is_err() {
                errs.push(format!("awareness sets for unknown agent `{agent}`"));
            }
            for w in per_world.keys() {
                if base.world_index(w).is_err() {
                    errs.push(format!("awareness set of `{agent}` at unknown world `{w}`"));
                }
            }
        }
        let mut awareness = Vec::new();
        for agent in base.agents() {
            let mut row = Vec::new();
            for w in base.worlds() {
                match sets.get(agent).and_then(|m| m.get(w)) {
                    Some(s) => row.push(s.clone()),
                    None => {
                        errs.push(format!("no awareness set for `{agent}` at `{w}`"));
                        row.push(AwarenessSet::Explicit(Vec::new()));
                    }
                }
            }
            awareness.push(row);
        }
        if !errs.is_empty() {
            return Err(Error::InvalidModel(errs));
        }
        Ok(FhModel { base, awareness })
    }

    pub fn from_data(data: &FhData) -> Result<Self> {
        let base = KripkeModel::from_data(&data.kripke)?;
        let sets = data
            .awareness_sets
            .iter()
            .map(|(a, m)| Ok((a.clone(), m.iter().map(|(w, s)| Ok((w.clone(), s.to_set()?))).collect::<Result<_>>()?)))
            .collect::<Result<_>>()?;
        FhModel::new(base, sets)
    }

    pub fn to_data(&self) -> FhData {
        let awareness_sets = self
            .base
            .agents()
            .iter()
            .enumerate()
            .map(|(a, agent)| {
                let per_world = self
                    .base
                    .worlds()
                    .iter()
                    .enumerate()
                    .map(|(w, name)| (name.clone(), AwarenessSetData::from_set(&self.awareness[a][w])))
                    .collect();
                (agent.clone(), per_world)
            })
            .collect();
        FhData { kripke: self.base.to_data(), awareness_sets }
    }

    pub fn base(&self) -> &KripkeModel {
        &self.base
    }

    pub fn awareness_set(&self, a: usize, w: usize) -> &AwarenessSet {
        &self.awareness[a][w]
    }

    pub fn awareness_sets(&self) -> AwarenessSets {
        self.base
            .agents()
            .iter()
            .enumerate()
            .map(|(a, agent)| {
                let m = self.base.worlds().iter().enumerate().map(|(w, n)| (n.clone(), self.awareness[a][w].clone())).collect();
                (agent.clone(), m)
            })
            .collect()
    }

    pub fn aware_of(&self, a: &Agent, w: &str, f: &Formula) -> Result<bool> {
        let ai = self.base.agent_index(a)?;
        let wi = self.base.world_index(w)?;
        Ok(self.awareness[ai][wi].contains(f))
    }

    /// Checks `φ ∈ 𝒜_a(w) ⟺ At(φ) ⊆ 𝒜_a(w)` for every agent and world.
    /// Explicit sets are tested on their own members first, then on every
    /// `L` formula of depth at most [`PP_SURROGATE_DEPTH`] over the atoms of
    /// the model.
    pub fn check_pp(&self) -> PpReport {
        let mut witnesses = Vec::new();
        let mut bounded = false;
        let mut surrogate: Option<FormulaTable> = None;
        for (a, agent) in self.base.agents().iter().enumerate() {
            for (w, world) in self.base.worlds().iter().enumerate() {
                let AwarenessSet::Explicit(list) = &self.awareness[a][w] else { continue };
                bounded = true;
                let table = surrogate.get_or_insert_with(|| {
                    let agents: AgentSet = self.base.agents().iter().cloned().collect();
                    FormulaTable::enumerate(&self.base.atom_set(), &agents, PP_SURROGATE_DEPTH, LanguageTag::L, None)
                });
                let set = &self.awareness[a][w];
                let candidates = list.iter().chain(table.entries().iter().map(|e| &*e.formula));
                for f in candidates {
                    let in_set = set.contains(f);
                    let missing: Vec<Atom> =
                        f.atoms().into_iter().filter(|p| !set.contains(&Formula::atom(p))).collect();
                    if in_set != missing.is_empty() {
                        witnesses.push(PpWitness {
                            agent: agent.clone(),
                            world: world.clone(),
                            formula: f.to_string(),
                            in_set,
                            missing_atoms: missing,
                        });
                        break;
                    }
                }
            }
        }
        PpReport { holds: witnesses.is_empty(), bounded, witnesses }
    }

    /// Checks `(w,v) ∈ R_a ⟹ 𝒜_a(w) = 𝒜_a(v)` on every pair.
    pub fn check_ka(&self) -> KaReport {
        let mut witnesses = Vec::new();
        for (a, agent) in self.base.agents().iter().enumerate() {
            for w in 0..self.base.worlds().len() {
                for &v in self.base.successors(a, w) {
                    if !self.awareness[a][w].same_set(&self.awareness[a][v]) {
                        witnesses.push(KaWitness {
                            agent: agent.clone(),
                            from: self.base.worlds()[w].clone(),
                            to: self.base.worlds()[v].clone(),
                        });
                    }
                }
            }
        }
        KaReport { holds: witnesses.is_empty(), witnesses }
    }

    pub fn require_ka(&self) -> Result<()> {
        let r = self.check_ka();
        match r.witnesses.first() {
            None => Ok(()),
            Some(w) => Err(Error::KnowAwarenessFailure(format!("agent {}: ({},{}) in R but awareness sets differ", w.agent, w.from, w.to))),
        }
    }

    fn eval(&self, w: &str, f: &Formula, lang: LanguageTag) -> Result<bool> {
        f.require(lang)?;
        let wi = self.base.world_index(w)?;
        let verdicts = match lang {
            LanguageTag::L => evaluate_all(&FhL { m: self }, f)?,
            LanguageTag::Lka => evaluate_all(&FhLka { m: self }, &f.expand_defined(lang))?,
        };
        Ok(verdicts[wi].is_true())
    }

    /// Two-valued `L` satisfaction: `K_aφ` requires awareness of `φ`.
    pub fn eval_l(&self, w: &str, f: &Formula) -> Result<bool> {
        self.eval(w, f, LanguageTag::L)
    }

    /// Two-valued `LKA` satisfaction: `K_a` is implicit, `A_a` is membership.
    pub fn eval_lka(&self, w: &str, f: &Formula) -> Result<bool> {
        self.eval(w, f, LanguageTag::Lka)
    }
}

fn world_values(m: &FhModel, mut f: impl FnMut(usize) -> bool) -> Vec<bool> {
    (0..m.base.worlds().len()).map(&mut f).collect()
}

fn fh_atom(m: &FhModel, p: &Atom) -> Result<Vec<bool>> {
    let i = m.base.atom_index(p).ok_or_else(|| Error::UnknownAtom(p.to_string()))?;
    Ok(world_values(m, |w| m.base.truth(w).contains(i)))
}

fn fh_implicit(m: &FhModel, a: usize, arg: &[bool]) -> Vec<bool> {
    world_values(m, |w| m.base.successors(a, w).iter().all(|&v| arg[v]))
}

/// Table-driven two-valued `L` semantics over an FH model. Knowledge
/// depends on the syntax of its argument through the awareness sets.
pub struct FhL<'a> {
    pub m: &'a FhModel,
}

/// Table-driven two-valued `LKA` semantics over an FH model.
pub struct FhLka<'a> {
    pub m: &'a FhModel,
}

macro_rules! fh_common {
    () => {
        type Value = Vec<bool>;

        fn top(&self) -> Result<Vec<bool>> {
            Ok(vec![true; self.m.base.worlds().len()])
        }

        fn atom(&self, p: &Atom) -> Result<Vec<bool>> {
            fh_atom(self.m, p)
        }

        fn not(&self, arg: Node<'_, Vec<bool>>) -> Result<Vec<bool>> {
            Ok(arg.value.iter().map(|b| !b).collect())
        }

        fn and(&self, lhs: Node<'_, Vec<bool>>, rhs: Node<'_, Vec<bool>>) -> Result<Vec<bool>> {
            Ok(lhs.value.iter().zip(rhs.value).map(|(x, y)| *x && *y).collect())
        }

        fn state_count(&self) -> usize {
            self.m.base.worlds().len()
        }

        fn verdict(&self, value: &Vec<bool>, state: usize) -> ThreeValued {
            ThreeValued::from_bool(value[state])
        }

        fn state_label(&self, state: usize) -> String {
            self.m.base.worlds()[state].clone()
        }

        fn atoms_defined(&self, atoms: &AtomSet, _state: usize) -> bool {
            atoms.iter().all(|p| self.m.base.atom_index(p).is_some())
        }

        fn extensional(&self) -> bool {
            self.m.awareness.iter().flatten().all(|s| matches!(s, AwarenessSet::AtomGenerated(_)))
        }
    };
}

impl Semantics for FhL<'_> {
    fh_common!();

    fn know(&self, agent: &Agent, arg: Node<'_, Vec<bool>>) -> Result<Vec<bool>> {
        let a = self.m.base.agent_index(agent)?;
        let implicit = fh_implicit(self.m, a, arg.value);
        Ok(world_values(self.m, |w| implicit[w] && self.m.awareness[a][w].contains(arg.formula)))
    }

    fn aware(&self, _agent: &Agent, _arg: Node<'_, Vec<bool>>) -> Result<Vec<bool>> {
        Err(Error::NotInLanguage { op: "A", lang: "L" })
    }
}

impl Semantics for FhLka<'_> {
    fh_common!();

    fn know(&self, agent: &Agent, arg: Node<'_, Vec<bool>>) -> Result<Vec<bool>> {
        let a = self.m.base.agent_index(agent)?;
        Ok(fh_implicit(self.m, a, arg.value))
    }

    fn aware(&self, agent: &Agent, arg: Node<'_, Vec<bool>>) -> Result<Vec<bool>> {
        let a = self.m.base.agent_index(agent)?;
        Ok(world_values(self.m, |w| self.m.awareness[a][w].contains(arg.formula)))
    }
}
