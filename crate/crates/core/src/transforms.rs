//! Satisfaction-preserving transformations between the three model classes.
//!
//! * [`l_transform`]: HMS model to Kripke lattice model, with the state
//!   correspondence `ℓ`.
//! * [`h_transform`]: Kripke lattice model over equivalence relations to HMS
//!   model.
//! * [`k_transform`]: FH model satisfying KA to Kripke lattice model.
//! * [`fh_transform`]: Kripke lattice model to FH model.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fh::{AwarenessSet, FhModel};
use crate::formula::{format_atom_set, Agent, Atom, AtomSet};
use crate::hms::{EventData, HmsData, HmsModel};
use crate::klm::{canonicalize, check_awareness_properties, AwarenessReport, KripkeLatticeModel, PointwiseAwarenessMap};
use crate::kripke::{check_lattice_cap, vocabularies, KripkeData, KripkeModel, RelationProperties, Vocab, WorldId};

/// `ℓ`: each HMS state with the lattice worlds it corresponds to.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StateCorrespondence {
    pub entries: Vec<(String, Vec<WorldId>)>,
}

impl StateCorrespondence {
    pub fn get(&self, state: &str) -> Option<&[WorldId]> {
        self.entries.iter().find(|(s, _)| s == state).map(|(_, v)| v.as_slice())
    }
}

/// Output of [`l_transform`] together with the checks it passed.
#[derive(Clone, Debug)]
pub struct LTransform {
    pub model: KripkeLatticeModel,
    pub correspondence: StateCorrespondence,
    pub awareness: AwarenessReport,
    pub relations: BTreeMap<Agent, RelationProperties>,
}

/// Builds `L(M)`: worlds are the states of the top space, `R_a` relates `w`
/// to every `v` whose projection lies in `Π_a(w)`, and `π_a(w_X)` is read
/// off the cell of `w` projected to the least space defining `X`.
pub fn l_transform(m: &HmsModel) -> Result<LTransform> {
    let f = m.frame();
    let atoms = m.atoms();
    check_lattice_cap(atoms.len())?;
    let top = f.top().ok_or_else(|| Error::FrameDefect("no top space".into()))?;
    let at_all = m.atom_set();
    let space_atoms: Vec<AtomSet> = (0..f.space_count()).map(|s| m.defined_atoms(f.states_of(s))).collect();
    if !(0..f.space_count()).any(|s| space_atoms[s] == at_all) {
        return Err(Error::NoFullSpace);
    }
    let vocab = |x: &AtomSet| -> Vocab {
        Vocab(atoms.iter().enumerate().filter(|(_, p)| x.contains(*p)).map(|(i, _)| 1u64 << i).sum())
    };

    let worlds: Vec<usize> = f.states_of(top).to_vec();
    let world_names = world_names(&worlds.iter().map(|&w| f.state_name(w)).collect::<Vec<_>>());
    let conf_space = |a: usize, w: usize| -> Result<usize> {
        f.containing_space(f.pi(a, w))
            .ok_or_else(|| Error::FrameDefect(format!("Π of {} at {} is not confined", f.agents()[a], f.state_name(w))))
    };

    let mut relations = BTreeMap::new();
    for (a, agent) in f.agents().iter().enumerate() {
        let mut pairs = Vec::new();
        for (wi, &w) in worlds.iter().enumerate() {
            let s = conf_space(a, w)?;
            for (vi, &v) in worlds.iter().enumerate() {
                if f.project(v, s).is_some_and(|r| f.pi(a, w).contains(&r)) {
                    pairs.push((world_names[wi].clone(), world_names[vi].clone()));
                }
            }
        }
        relations.insert(agent.clone(), pairs);
    }
    let mut valuation = BTreeMap::new();
    for p in atoms {
        let up = f.event_up(m.valuation(p)?);
        let ws = worlds.iter().zip(&world_names).filter(|(&w, _)| up[w]).map(|(_, n)| n.clone()).collect();
        valuation.insert(p.clone(), ws);
    }
    let data = KripkeData {
        atoms: atoms.to_vec(),
        agents: f.agents().to_vec(),
        worlds: world_names.clone(),
        relations,
        valuation,
    };
    let base = KripkeModel::from_data(&data)?;

    // S_X for every realized vocabulary X.
    let mut least: BTreeMap<Vocab, usize> = BTreeMap::new();
    for x in vocabularies(atoms.len()) {
        let cands: Vec<usize> = (0..f.space_count()).filter(|&s| vocab(&space_atoms[s]) == x).collect();
        if cands.is_empty() {
            continue;
        }
        let minimal: Vec<usize> =
            cands.iter().copied().filter(|&s| cands.iter().all(|&t| t == s || !f.leq(t, s))).collect();
        if minimal.len() != 1 || !cands.iter().all(|&t| f.leq(minimal[0], t)) {
            return Err(Error::AmbiguousMinimum {
                atoms: format_atom_set(&base.atoms_of(x)),
                candidates: minimal.iter().map(|&s| f.space_name(s)).collect::<Vec<_>>().join(", "),
            });
        }
        least.insert(x, minimal[0]);
    }

    let full = base.full_vocab();
    let mut maps = BTreeMap::new();
    for (a, agent) in f.agents().iter().enumerate() {
        let mut map = BTreeMap::new();
        let image = |wi: usize, sx: usize| -> Result<Vocab> {
            let r = f.project(worlds[wi], sx).expect("space below top");
            Ok(vocab(&space_atoms[conf_space(a, r)?]))
        };
        for (wi, _) in worlds.iter().enumerate() {
            let z = image(wi, least[&full])?;
            for x in vocabularies(atoms.len()) {
                let y = match least.get(&x) {
                    Some(&sx) => image(wi, sx)?,
                    None => x.meet(z),
                };
                map.insert(base.world_id(wi, x), base.world_id(wi, y));
            }
        }
        maps.insert(agent.clone(), map);
    }
    let pointwise = PointwiseAwarenessMap { maps };
    let awareness = check_awareness_properties(&base, &pointwise)?;
    for (name, v) in [
        ("D", &awareness.downwards),
        ("II", &awareness.introspective_idempotence),
        ("NS", &awareness.no_surprises),
    ] {
        if !v.holds {
            return Err(Error::AwarenessProperty { property: name, witness: v.witness.clone().unwrap_or_default() });
        }
    }
    let assignment = canonicalize(&base, &pointwise)?;
    let relations = base.relation_properties();
    base.require_equivalence()?;
    let model = KripkeLatticeModel::new(base, &assignment)?;

    let mut entries = Vec::new();
    for s in 0..f.state_count() {
        let space = f.space_of(s);
        let x = vocab(&space_atoms[space]);
        let image = worlds
            .iter()
            .enumerate()
            .filter(|(_, &w)| f.project(w, space) == Some(s))
            .map(|(wi, _)| model.base().world_id(wi, x))
            .collect();
        entries.push((f.state_name(s).to_string(), image));
    }
    Ok(LTransform { model, correspondence: StateCorrespondence { entries }, awareness, relations })
}

/// World names for the top-space states: the part before any `@`, or
/// `t0, t1, ...` when that does not give distinct valid names.
fn world_names(states: &[&str]) -> Vec<String> {
    let stripped: Vec<String> = states.iter().map(|s| s.split('@').next().unwrap_or("").to_string()).collect();
    let valid = stripped.iter().all(|n| !n.is_empty() && !n.chars().any(|c| c.is_whitespace() || "@{},".contains(c)));
    let distinct = stripped.iter().collect::<std::collections::BTreeSet<_>>().len() == stripped.len();
    if valid && distinct {
        stripped
    } else {
        (0..states.len()).map(|i| format!("t{i}")).collect()
    }
}

/// Name of the space `W_X` in an H-transform.
pub fn space_name(atoms: &AtomSet) -> String {
    format!("W{}", format_atom_set(atoms))
}

/// Builds `H(K)`: one space per restriction `W_X`, projections forgetting
/// atoms, and `Π_a(w_X) = I_a(π_a(w_X))`.
pub fn h_transform(k: &KripkeLatticeModel) -> Result<HmsModel> {
    let base = k.base();
    base.require_equivalence()?;
    check_lattice_cap(base.atoms().len())?;
    let n = base.worlds().len();
    let vocabs = vocabularies(base.atoms().len());
    if vocabs.len() * n > crate::hms::MAX_STATES {
        return Err(Error::TooLarge(format!("{} states exceed the limit of {}", vocabs.len() * n, crate::hms::MAX_STATES)));
    }
    let sname = |x: Vocab| space_name(&base.atoms_of(x));
    let wname = |w: usize, x: Vocab| base.world_id(w, x).to_string();

    let spaces = vocabs.iter().map(|&x| (sname(x), (0..n).map(|w| wname(w, x)).collect())).collect();
    let mut order = Vec::new();
    let mut projections = BTreeMap::new();
    for &y in &vocabs {
        for i in 0..base.atoms().len() {
            if !y.contains(i) {
                order.push((sname(y), sname(y.join(Vocab::single(i)))));
            }
        }
        for x in y.subsets() {
            if x != y {
                let map = (0..n).map(|w| (wname(w, y), wname(w, x))).collect();
                projections.insert(format!("{}->{}", sname(y), sname(x)), map);
            }
        }
    }
    let mut pi = BTreeMap::new();
    for (a, agent) in base.agents().iter().enumerate() {
        let mut cells = BTreeMap::new();
        for &x in &vocabs {
            for w in 0..n {
                let y = x.meet(k.aware_vocab(a, w));
                cells.insert(wname(w, x), base.successors(a, w).iter().map(|&v| wname(v, y)).collect());
            }
        }
        pi.insert(agent.clone(), cells);
    }
    let mut valuation = BTreeMap::new();
    for (i, p) in base.atoms().iter().enumerate() {
        let x = Vocab::single(i);
        let base_set = (0..n).filter(|&w| base.truth(w).contains(i)).map(|w| wname(w, x)).collect();
        valuation.insert(p.clone(), EventData { base_space: sname(x), base_set });
    }
    HmsModel::from_data(&HmsData { spaces, order, projections, pi, valuation })
}

/// Builds `K(S)`: the same Kripke model with `Aw_a(w)` the atoms occurring
/// in `𝒜_a(w)`.
pub fn k_transform(s: &FhModel) -> Result<KripkeLatticeModel> {
    s.require_ka()?;
    let base = s.base();
    let at = base.atom_set();
    let mut assignment = BTreeMap::new();
    for (a, agent) in base.agents().iter().enumerate() {
        let per_world = base
            .worlds()
            .iter()
            .enumerate()
            .map(|(w, name)| {
                let y: AtomSet = s.awareness_set(a, w).extracted_atoms().intersection(&at).cloned().collect();
                (name.clone(), y)
            })
            .collect();
        assignment.insert(agent.clone(), per_world);
    }
    KripkeLatticeModel::new(base.clone(), &assignment)
}

/// Builds `FH(K)`: awareness of exactly the formulas over `Aw_a(w)`.
pub fn fh_transform(k: &KripkeLatticeModel) -> Result<FhModel> {
    let sets = k
        .assignment()
        .into_iter()
        .map(|(agent, per_world)| {
            (agent, per_world.into_iter().map(|(w, x): (String, AtomSet)| (w, AwarenessSet::AtomGenerated(x))).collect())
        })
        .collect();
    FhModel::new(k.base().clone(), sets)
}

/// Atoms of `x` that are not atoms of `k`.
pub fn foreign_atoms(k: &KripkeModel, x: &AtomSet) -> Vec<Atom> {
    x.iter().filter(|p| k.atom_index(p).is_none()).cloned().collect()
}
