//! Random models and formulas for property tests.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{Agent, Atom, AtomSet, Formula, LanguageTag};
use crate::klm::{AwarenessAssignment, KripkeLatticeModel};
use crate::kripke::{KripkeData, KripkeModel};

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_worlds: usize,
    pub max_atoms: usize,
    pub agents: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_worlds: 4, max_atoms: 3, agents: 2 }
    }
}

const ATOM_NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
const AGENT_NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn random_subset<R: Rng + ?Sized>(rng: &mut R, atoms: &[Atom]) -> AtomSet {
    atoms.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

fn skeleton<R: Rng + ?Sized>(rng: &mut R, shape: Shape) -> KripkeData {
    let n_worlds = rng.gen_range(1..=shape.max_worlds);
    let n_atoms = rng.gen_range(1..=shape.max_atoms.min(ATOM_NAMES.len()));
    let atoms: Vec<Atom> = ATOM_NAMES[..n_atoms].iter().map(|s| Atom::new(*s).unwrap()).collect();
    let agents = AGENT_NAMES[..shape.agents.min(AGENT_NAMES.len())].iter().map(|s| Agent::new(*s).unwrap()).collect();
    let worlds: Vec<String> = (1..=n_worlds).map(|i| format!("w{i}")).collect();
    let valuation = atoms
        .iter()
        .map(|p| (p.clone(), worlds.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()))
        .collect();
    KripkeData { atoms, agents, worlds, relations: BTreeMap::new(), valuation }
}

/// A random partition of `0..n` as a block label per element.
fn random_partition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let blocks = rng.gen_range(1..=n);
    let mut labels: Vec<usize> = (0..n).map(|i| if i < blocks { i } else { rng.gen_range(0..blocks) }).collect();
    labels.shuffle(rng);
    labels
}

/// A random model with an equivalence relation per agent and awareness
/// constant on each cell.
pub fn random_klm_eq<R: Rng + ?Sized>(rng: &mut R, shape: Shape) -> KripkeLatticeModel {
    let mut data = skeleton(rng, shape);
    let n = data.worlds.len();
    let mut assignment = AwarenessAssignment::new();
    for agent in data.agents.clone() {
        let labels = random_partition(rng, n);
        let cell_aware: Vec<AtomSet> = (0..n).map(|_| random_subset(rng, &data.atoms)).collect();
        let pairs = (0..n)
            .flat_map(|w| (0..n).map(move |v| (w, v)))
            .filter(|&(w, v)| labels[w] == labels[v])
            .map(|(w, v)| (data.worlds[w].clone(), data.worlds[v].clone()))
            .collect();
        data.relations.insert(agent.clone(), pairs);
        let per_world = (0..n).map(|w| (data.worlds[w].clone(), cell_aware[labels[w]].clone())).collect();
        assignment.insert(agent, per_world);
    }
    let base = KripkeModel::from_data(&data).expect("random model is well formed");
    KripkeLatticeModel::new(base, &assignment).expect("awareness is constant on cells")
}

/// A random model with arbitrary relations and awareness that grows along
/// every edge.
pub fn random_klm<R: Rng + ?Sized>(rng: &mut R, shape: Shape) -> KripkeLatticeModel {
    let mut data = skeleton(rng, shape);
    let n = data.worlds.len();
    let density = rng.gen_range(0.2..0.8);
    let mut assignment = AwarenessAssignment::new();
    for agent in data.agents.clone() {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|w| (0..n).map(move |v| (w, v))).filter(|_| rng.gen_bool(density)).collect();
        let mut aware: Vec<AtomSet> = (0..n).map(|_| random_subset(rng, &data.atoms)).collect();
        loop {
            let mut changed = false;
            for &(w, v) in &edges {
                let missing: Vec<Atom> = aware[w].difference(&aware[v]).cloned().collect();
                if !missing.is_empty() {
                    aware[v].extend(missing);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        data.relations.insert(
            agent.clone(),
            edges.iter().map(|&(w, v)| (data.worlds[w].clone(), data.worlds[v].clone())).collect(),
        );
        assignment.insert(agent, (0..n).map(|w| (data.worlds[w].clone(), aware[w].clone())).collect());
    }
    let base = KripkeModel::from_data(&data).expect("random model is well formed");
    KripkeLatticeModel::new(base, &assignment).expect("awareness is monotone along edges")
}

/// A random formula of depth at most `depth`.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[Atom],
    agents: &[Agent],
    depth: usize,
    lang: LanguageTag,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if atoms.is_empty() || rng.gen_bool(0.1) {
            Formula::Top
        } else {
            Formula::atom(atoms.choose(rng).unwrap())
        };
    }
    let ops = match lang {
        LanguageTag::L => 3,
        LanguageTag::Lka => 5,
    };
    let op = if agents.is_empty() { rng.gen_range(0..2) } else { rng.gen_range(0..ops) };
    let sub = |rng: &mut R| random_formula(rng, atoms, agents, depth - 1, lang);
    match op {
        0 => Formula::not(sub(rng)),
        1 => {
            let f = sub(rng);
            Formula::and(f, sub(rng))
        }
        2 => Formula::know(agents.choose(rng).unwrap(), sub(rng)),
        3 => Formula::aware(agents.choose(rng).unwrap(), sub(rng)),
        _ => Formula::explicit(agents.choose(rng).unwrap(), sub(rng)),
    }
}
