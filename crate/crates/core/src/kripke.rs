//! Kripke models, their restrictions to atom subsets, and the implicit
//! restriction lattice.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{format_atom_set, Agent, Atom, AtomSet};

/// Default bound on `|At|` for scans over all `2^|At|` vocabularies.
pub const DEFAULT_LATTICE_CAP: usize = 12;

/// The active lattice cap; `AWAREKIT_LATTICE_CAP` overrides the default.
pub fn lattice_cap() -> usize {
    std::env::var("AWAREKIT_LATTICE_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_LATTICE_CAP)
}

pub(crate) fn check_lattice_cap(atoms: usize) -> Result<()> {
    let cap = lattice_cap().min(63);
    if atoms > cap {
        Err(Error::LatticeCap { atoms, cap })
    } else {
        Ok(())
    }
}

/// A subset of a model's atoms, as a bit mask over the sorted atom list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vocab(pub u64);

impl Vocab {
    pub const EMPTY: Vocab = Vocab(0);

    pub fn full(n: usize) -> Vocab {
        if n >= 64 {
            Vocab(u64::MAX)
        } else {
            Vocab((1u64 << n) - 1)
        }
    }

    pub fn single(i: usize) -> Vocab {
        Vocab(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset(self, other: Vocab) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meet(self, other: Vocab) -> Vocab {
        Vocab(self.0 & other.0)
    }

    pub fn join(self, other: Vocab) -> Vocab {
        Vocab(self.0 | other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// Every subset of `self`, in lattice order (see [`vocabularies`]).
    pub fn subsets(self) -> Vec<Vocab> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut s = self.0;
        loop {
            out.push(Vocab(s));
            if s == 0 {
                break;
            }
            s = (s - 1) & self.0;
        }
        sort_lattice_order(&mut out);
        out
    }
}

fn sort_lattice_order(vs: &mut [Vocab]) {
    vs.sort_by(|a, b| {
        b.len().cmp(&a.len()).then_with(|| a.iter().collect::<Vec<_>>().cmp(&b.iter().collect::<Vec<_>>()))
    });
}

/// All vocabularies over `n` atoms: larger sets first, ties broken
/// lexicographically on the sorted atom lists.
pub fn vocabularies(n: usize) -> Vec<Vocab> {
    Vocab::full(n).subsets()
}

/// The pair `w_X`: base world `w` seen through vocabulary `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WorldId {
    pub base: String,
    pub vocabulary: AtomSet,
}

impl WorldId {
    pub fn new(base: impl Into<String>, vocabulary: AtomSet) -> Self {
        WorldId { base: base.into(), vocabulary }
    }

    /// Parses `w@{i,l}`; a bare `w` denotes `w` at vocabulary `top`.
    pub fn parse(text: &str, top: &AtomSet) -> Result<Self> {
        let text = text.trim();
        let Some((base, rest)) = text.split_once('@') else {
            check_world_name(text).map_err(|_| Error::UnknownWorld(text.to_string()))?;
            return Ok(WorldId::new(text, top.clone()));
        };
        let inner = rest
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::UnknownWorld(text.to_string()))?;
        let mut vocabulary = AtomSet::new();
        for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            vocabulary.insert(Atom::new(name)?);
        }
        Ok(WorldId::new(base.trim(), vocabulary))
    }
}

impl fmt::Display for WorldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.base, format_atom_set(&self.vocabulary))
    }
}

fn check_world_name(name: &str) -> std::result::Result<(), String> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || "@{},".contains(c)) {
        Err(format!("invalid world id `{name}`"))
    } else {
        Ok(())
    }
}

/// A Kripke model as written in model files.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeData {
    pub atoms: Vec<Atom>,
    pub agents: Vec<Agent>,
    pub worlds: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<Agent, Vec<(String, String)>>,
    #[serde(default)]
    pub valuation: BTreeMap<Atom, Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidModel(self.violations))
        }
    }
}

/// Lists every way `m` fails to be a Kripke model over its declared atoms.
pub fn validate_kripke(m: &KripkeData) -> ValidationReport {
    let mut v = Vec::new();
    if m.worlds.is_empty() {
        v.push("model has no worlds".to_string());
    }
    let mut seen = BTreeSet::new();
    for w in &m.worlds {
        if let Err(e) = check_world_name(w) {
            v.push(e);
        }
        if !seen.insert(w.as_str()) {
            v.push(format!("duplicate world `{w}`"));
        }
    }
    let atoms: BTreeSet<&Atom> = m.atoms.iter().collect();
    if atoms.len() != m.atoms.len() {
        v.push("duplicate atoms".to_string());
    }
    if m.atoms.len() > 63 {
        v.push(format!("{} atoms exceed the supported maximum of 63", m.atoms.len()));
    }
    let agents: BTreeSet<&Agent> = m.agents.iter().collect();
    if agents.len() != m.agents.len() {
        v.push("duplicate agents".to_string());
    }
    for (agent, pairs) in &m.relations {
        if !agents.contains(agent) {
            v.push(format!("relation for unknown agent `{agent}`"));
        }
        for (a, b) in pairs {
            for w in [a, b] {
                if !seen.contains(w.as_str()) {
                    v.push(format!("relation of `{agent}` mentions unknown world `{w}` in ({a},{b})"));
                    break;
                }
            }
        }
    }
    for (atom, ws) in &m.valuation {
        if !atoms.contains(atom) {
            v.push(format!("valuation for atom `{atom}` not in atoms"));
        }
        for w in ws {
            if !seen.contains(w.as_str()) {
                v.push(format!("valuation of `{atom}` mentions unknown world `{w}`"));
            }
        }
    }
    for atom in &m.atoms {
        if !m.valuation.contains_key(atom) {
            v.push(format!("no valuation for atom `{atom}`"));
        }
    }
    ValidationReport { violations: v }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationProperties {
    pub reflexive: bool,
    pub transitive: bool,
    pub symmetric: bool,
    pub equivalence: bool,
}

/// A validated Kripke model with indexed worlds, agents and atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    atoms: Vec<Atom>,
    agents: Vec<Agent>,
    worlds: Vec<String>,
    atom_index: HashMap<Atom, usize>,
    agent_index: HashMap<Agent, usize>,
    world_index: HashMap<String, usize>,
    succ: Vec<Vec<Vec<usize>>>,
    truth: Vec<Vocab>,
}

impl KripkeModel {
    pub fn from_data(data: &KripkeData) -> Result<Self> {
        validate_kripke(data).into_result()?;
        let mut atoms = data.atoms.clone();
        atoms.sort();
        let mut agents = data.agents.clone();
        agents.sort();
        let worlds = data.worlds.clone();
        let atom_index: HashMap<Atom, usize> = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let agent_index: HashMap<Agent, usize> = agents.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let world_index: HashMap<String, usize> = worlds.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut succ = vec![vec![Vec::new(); worlds.len()]; agents.len()];
        for (agent, pairs) in &data.relations {
            let a = agent_index[agent];
            for (w, v) in pairs {
                succ[a][world_index[w]].push(world_index[v]);
            }
        }
        for row in succ.iter_mut().flatten() {
            row.sort_unstable();
            row.dedup();
        }
        let mut truth = vec![Vocab::EMPTY; worlds.len()];
        for (atom, ws) in &data.valuation {
            let p = atom_index[atom];
            for w in ws {
                truth[world_index[w]].0 |= 1 << p;
            }
        }
        Ok(KripkeModel { atoms, agents, worlds, atom_index, agent_index, world_index, succ, truth })
    }

    /// Canonical file form: atoms and agents sorted, worlds in declared
    /// order, relation pairs and valuation sets in world order.
    pub fn to_data(&self) -> KripkeData {
        let relations = self
            .agents
            .iter()
            .enumerate()
            .map(|(a, agent)| {
                let pairs = (0..self.worlds.len())
                    .flat_map(|w| self.succ[a][w].iter().map(move |&v| (w, v)))
                    .map(|(w, v)| (self.worlds[w].clone(), self.worlds[v].clone()))
                    .collect();
                (agent.clone(), pairs)
            })
            .collect();
        let valuation = self
            .atoms
            .iter()
            .enumerate()
            .map(|(p, atom)| {
                let ws = (0..self.worlds.len())
                    .filter(|&w| self.truth[w].contains(p))
                    .map(|w| self.worlds[w].clone())
                    .collect();
                (atom.clone(), ws)
            })
            .collect();
        KripkeData {
            atoms: self.atoms.clone(),
            agents: self.agents.clone(),
            worlds: self.worlds.clone(),
            relations,
            valuation,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_set(&self) -> AtomSet {
        self.atoms.iter().cloned().collect()
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn atom_index(&self, p: &Atom) -> Option<usize> {
        self.atom_index.get(p).copied()
    }

    pub fn agent_index(&self, a: &Agent) -> Result<usize> {
        self.agent_index.get(a).copied().ok_or_else(|| Error::UnknownAgent(a.to_string()))
    }

    pub fn world_index(&self, w: &str) -> Result<usize> {
        self.world_index.get(w).copied().ok_or_else(|| Error::UnknownWorld(w.to_string()))
    }

    /// Successors of world `w` under the relation of agent `a` (indices).
    pub fn successors(&self, a: usize, w: usize) -> &[usize] {
        &self.succ[a][w]
    }

    pub fn related(&self, a: usize, w: usize, v: usize) -> bool {
        self.succ[a][w].binary_search(&v).is_ok()
    }

    /// Atoms true at world `w`.
    pub fn truth(&self, w: usize) -> Vocab {
        self.truth[w]
    }

    pub fn full_vocab(&self) -> Vocab {
        Vocab::full(self.atoms.len())
    }

    pub fn vocab_of(&self, atoms: &AtomSet) -> Result<Vocab> {
        let mut v = Vocab::EMPTY;
        for p in atoms {
            match self.atom_index(p) {
                Some(i) => v.0 |= 1 << i,
                None => return Err(Error::NotSubset { vocabulary: format_atom_set(atoms) }),
            }
        }
        Ok(v)
    }

    pub fn atoms_of(&self, v: Vocab) -> AtomSet {
        v.iter().map(|i| self.atoms[i].clone()).collect()
    }

    pub fn world_id(&self, w: usize, v: Vocab) -> WorldId {
        WorldId::new(self.worlds[w].clone(), self.atoms_of(v))
    }

    pub fn resolve(&self, w: &WorldId) -> Result<(usize, Vocab)> {
        Ok((self.world_index(&w.base)?, self.vocab_of(&w.vocabulary)?))
    }

    /// Parses `w@{..}` or a bare world name (read at the full vocabulary).
    pub fn parse_world(&self, text: &str) -> Result<WorldId> {
        let id = WorldId::parse(text, &self.atom_set())?;
        self.resolve(&id)?;
        Ok(id)
    }

    /// `I_a(w_X)`: the successors of `w` at the same vocabulary `X`.
    pub fn information_cell(&self, a: &Agent, w: &WorldId) -> Result<Vec<WorldId>> {
        let ai = self.agent_index(a)?;
        let (wi, x) = self.resolve(w)?;
        Ok(self.succ[ai][wi].iter().map(|&v| self.world_id(v, x)).collect())
    }

    /// The restriction `K_X` as a lazy view.
    pub fn restrict(&self, x: &AtomSet) -> Result<RestrictedModel<'_>> {
        Ok(RestrictedModel { source: self, vocab: self.vocab_of(x)? })
    }

    pub fn relation_properties(&self) -> BTreeMap<Agent, RelationProperties> {
        let n = self.worlds.len();
        self.agents
            .iter()
            .enumerate()
            .map(|(a, agent)| {
                let reflexive = (0..n).all(|w| self.related(a, w, w));
                let symmetric = (0..n).all(|w| self.succ[a][w].iter().all(|&v| self.related(a, v, w)));
                let transitive = (0..n).all(|w| {
                    self.succ[a][w].iter().all(|&v| self.succ[a][v].iter().all(|&u| self.related(a, w, u)))
                });
                let props = RelationProperties {
                    reflexive,
                    transitive,
                    symmetric,
                    equivalence: reflexive && symmetric && transitive,
                };
                (agent.clone(), props)
            })
            .collect()
    }

    /// Fails with a witness pair unless every relation is an equivalence.
    pub fn require_equivalence(&self) -> Result<()> {
        let n = self.worlds.len();
        for (a, agent) in self.agents.iter().enumerate() {
            let fail = |witness: String| Err(Error::NotEquivalence { agent: agent.to_string(), witness });
            for w in 0..n {
                if !self.related(a, w, w) {
                    return fail(format!("({0},{0}) missing (reflexivity)", self.worlds[w]));
                }
                for &v in &self.succ[a][w] {
                    if !self.related(a, v, w) {
                        return fail(format!(
                            "({},{}) present but ({},{}) missing (symmetry)",
                            self.worlds[w], self.worlds[v], self.worlds[v], self.worlds[w]
                        ));
                    }
                    for &u in &self.succ[a][v] {
                        if !self.related(a, w, u) {
                            return fail(format!(
                                "({},{}) and ({},{}) present but ({},{}) missing (transitivity)",
                                self.worlds[w], self.worlds[v], self.worlds[v], self.worlds[u], self.worlds[w], self.worlds[u]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `K_X`: the restriction of a Kripke model to the vocabulary `X`.
#[derive(Clone, Copy, Debug)]
pub struct RestrictedModel<'a> {
    source: &'a KripkeModel,
    vocab: Vocab,
}

impl<'a> RestrictedModel<'a> {
    pub fn source(&self) -> &'a KripkeModel {
        self.source
    }

    pub fn vocab(&self) -> Vocab {
        self.vocab
    }

    pub fn vocabulary(&self) -> AtomSet {
        self.source.atoms_of(self.vocab)
    }

    /// `W_X`, one copy of every world, in declared order.
    pub fn worlds(&self) -> Vec<WorldId> {
        (0..self.source.worlds.len()).map(|w| self.source.world_id(w, self.vocab)).collect()
    }

    pub fn world(&self, base: &str) -> Result<WorldId> {
        let w = self.source.world_index(base)?;
        Ok(self.source.world_id(w, self.vocab))
    }

    fn local(&self, w: &WorldId) -> Result<usize> {
        let (wi, x) = self.source.resolve(w)?;
        if x != self.vocab {
            return Err(Error::UnknownWorld(w.to_string()));
        }
        Ok(wi)
    }

    /// Whether `(w_X, v_X)` is in `R_Xa`.
    pub fn related(&self, a: &Agent, w: &WorldId, v: &WorldId) -> Result<bool> {
        let ai = self.source.agent_index(a)?;
        Ok(self.source.related(ai, self.local(w)?, self.local(v)?))
    }

    pub fn information_cell(&self, a: &Agent, w: &WorldId) -> Result<Vec<WorldId>> {
        self.local(w)?;
        self.source.information_cell(a, w)
    }

    /// `V_X(p)`; `None` when `p` is not in `X`.
    pub fn valuation(&self, p: &Atom) -> Option<Vec<WorldId>> {
        let i = self.source.atom_index(p)?;
        if !self.vocab.contains(i) {
            return None;
        }
        Some(
            (0..self.source.worlds.len())
                .filter(|&w| self.source.truth[w].contains(i))
                .map(|w| self.source.world_id(w, self.vocab))
                .collect(),
        )
    }

    /// A further restriction to `y`, which must be a subset of `X`.
    pub fn restrict(&self, y: &AtomSet) -> Result<RestrictedModel<'a>> {
        let v = self.source.vocab_of(y)?;
        if !v.is_subset(self.vocab) {
            return Err(Error::NotSubset { vocabulary: format_atom_set(y) });
        }
        Ok(RestrictedModel { source: self.source, vocab: v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn atoms(names: &[&str]) -> AtomSet {
        names.iter().map(|n| Atom::new(*n).unwrap()).collect()
    }

    fn ag(s: &str) -> Agent {
        Agent::new(s).unwrap()
    }

    #[test]
    fn trade_is_valid() {
        assert!(validate_kripke(&fixtures::trade_kripke_data()).is_valid());
    }

    #[test]
    fn dangling_relation_reported_once() {
        let mut d = fixtures::trade_kripke_data();
        d.relations.get_mut(&ag("b")).unwrap().push(("w1".into(), "w9".into()));
        assert_eq!(validate_kripke(&d).violations.len(), 1);
    }

    #[test]
    fn stray_valuation_reported_once() {
        let mut d = fixtures::trade_kripke_data();
        d.valuation.insert(Atom::new("q").unwrap(), vec!["w1".into()]);
        assert_eq!(validate_kripke(&d).violations.len(), 1);
    }

    #[test]
    fn information_cells() {
        let k = fixtures::trade_kripke();
        let top = k.atom_set();
        let w1 = WorldId::new("w1", top.clone());
        let cell: Vec<String> = k.information_cell(&ag("o"), &w1).unwrap().iter().map(|w| w.base.clone()).collect();
        assert_eq!(cell, ["w1", "w2", "w3"]);
        assert_eq!(k.information_cell(&ag("b"), &w1).unwrap(), vec![w1]);
        let r = k.restrict(&atoms(&["i"])).unwrap();
        let w2 = r.world("w2").unwrap();
        assert_eq!(
            r.information_cell(&ag("b"), &w2).unwrap(),
            vec![WorldId::new("w2", atoms(&["i"])), WorldId::new("w3", atoms(&["i"]))]
        );
    }

    #[test]
    fn restrictions() {
        let k = fixtures::trade_kripke();
        let i = Atom::new("i").unwrap();
        let l = Atom::new("l").unwrap();
        let top = k.restrict(&atoms(&["i", "l"])).unwrap();
        assert_eq!(top.valuation(&i).unwrap(), vec![WorldId::new("w1", atoms(&["i", "l"]))]);
        let bottom = k.restrict(&AtomSet::new()).unwrap();
        assert_eq!(bottom.worlds().len(), 3);
        assert!(bottom.valuation(&i).is_none() && bottom.valuation(&l).is_none());
        let xi = k.restrict(&atoms(&["i"])).unwrap();
        assert_eq!(xi.valuation(&i).unwrap(), vec![WorldId::new("w1", atoms(&["i"]))]);
        assert!(xi.valuation(&l).is_none());
        assert!(k.restrict(&atoms(&["q"])).is_err());
        assert!(xi.restrict(&atoms(&["l"])).is_err());
    }

    #[test]
    fn relation_flags() {
        let k = fixtures::trade_kripke();
        assert!(k.relation_properties().values().all(|p| p.equivalence));
        let single = KripkeModel::from_data(&KripkeData {
            atoms: vec![],
            agents: vec![ag("a")],
            worlds: vec!["u".into()],
            ..Default::default()
        })
        .unwrap();
        assert!(!single.relation_properties()[&ag("a")].reflexive);
        let chain = KripkeModel::from_data(&KripkeData {
            atoms: vec![],
            agents: vec![ag("a")],
            worlds: vec!["u".into(), "v".into()],
            relations: [(ag("a"), vec![("u".into(), "v".into())])].into(),
            ..Default::default()
        })
        .unwrap();
        let p = chain.relation_properties()[&ag("a")];
        assert!(p.transitive && !p.symmetric);
    }

    #[test]
    fn world_id_syntax() {
        let top = atoms(&["i", "l"]);
        assert_eq!(WorldId::parse("w2@{i,l}", &top).unwrap(), WorldId::new("w2", top.clone()));
        assert_eq!(WorldId::parse("w2", &top).unwrap(), WorldId::new("w2", top.clone()));
        assert_eq!(WorldId::parse("w2@{}", &top).unwrap(), WorldId::new("w2", AtomSet::new()));
        assert_eq!(WorldId::new("w2", atoms(&["l", "i"])).to_string(), "w2@{i,l}");
        assert!(WorldId::parse("w2@i", &top).is_err());
    }

    #[test]
    fn lattice_order() {
        let order: Vec<u64> = vocabularies(2).iter().map(|v| v.0).collect();
        assert_eq!(order, [0b11, 0b01, 0b10, 0b00]);
        assert_eq!(vocabularies(3).len(), 8);
    }

    #[test]
    fn round_trip_data() {
        let d = fixtures::trade_kripke_data();
        let k = KripkeModel::from_data(&d).unwrap();
        assert_eq!(KripkeModel::from_data(&k.to_data()).unwrap(), k);
    }
}
