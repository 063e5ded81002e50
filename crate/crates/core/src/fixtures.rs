//! Small models used throughout the documentation and tests.

use std::collections::BTreeMap;

use crate::fh::{AwarenessSet, FhModel};
use crate::formula::{Agent, Atom, AtomSet};
use crate::hms::{EventData, HmsData, HmsModel};
use crate::klm::{AwarenessAssignment, KripkeLatticeModel};
use crate::kripke::{KripkeData, KripkeModel};

fn atom(s: &str) -> Atom {
    Atom::new(s).expect("fixture atom")
}

fn agent(s: &str) -> Agent {
    Agent::new(s).expect("fixture agent")
}

fn atoms(names: &[&str]) -> AtomSet {
    names.iter().map(|n| atom(n)).collect()
}

fn pairs(cells: &[&[&str]]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for cell in cells {
        for a in *cell {
            for b in *cell {
                out.push((a.to_string(), b.to_string()));
            }
        }
    }
    out
}

fn strings(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// The trade example: Buyer `b` is unaware of `l` outside `w1`, Owner `o`
/// is aware of everything but cannot tell the worlds apart.
pub fn trade_kripke_data() -> KripkeData {
    KripkeData {
        atoms: vec![atom("i"), atom("l")],
        agents: vec![agent("b"), agent("o")],
        worlds: strings(&["w1", "w2", "w3"]),
        relations: BTreeMap::from([
            (agent("b"), pairs(&[&["w1"], &["w2", "w3"]])),
            (agent("o"), pairs(&[&["w1", "w2", "w3"]])),
        ]),
        valuation: BTreeMap::from([(atom("i"), strings(&["w1"])), (atom("l"), strings(&["w1", "w2"]))]),
    }
}

pub fn trade_kripke() -> KripkeModel {
    KripkeModel::from_data(&trade_kripke_data()).expect("trade fixture")
}

pub fn trade_awareness() -> AwarenessAssignment {
    BTreeMap::from([
        (
            agent("b"),
            BTreeMap::from([
                ("w1".to_string(), atoms(&["i", "l"])),
                ("w2".to_string(), atoms(&["i"])),
                ("w3".to_string(), atoms(&["i"])),
            ]),
        ),
        (agent("o"), ["w1", "w2", "w3"].iter().map(|w| (w.to_string(), atoms(&["i", "l"]))).collect()),
    ])
}

pub fn trade() -> KripkeLatticeModel {
    KripkeLatticeModel::new(trade_kripke(), &trade_awareness()).expect("trade fixture")
}

/// The FH counterpart of [`trade`], with atom-generated awareness sets.
pub fn trade_fh() -> FhModel {
    let sets = trade_awareness()
        .into_iter()
        .map(|(a, per_world)| (a, per_world.into_iter().map(|(w, x)| (w, AwarenessSet::AtomGenerated(x))).collect()))
        .collect();
    FhModel::new(trade_kripke(), sets).expect("trade fixture")
}

/// One world `u`, one atom `p`, one agent `a` aware of `p`.
pub fn triv1_data() -> KripkeData {
    KripkeData {
        atoms: vec![atom("p")],
        agents: vec![agent("a")],
        worlds: strings(&["u"]),
        relations: BTreeMap::from([(agent("a"), pairs(&[&["u"]]))]),
        valuation: BTreeMap::from([(atom("p"), strings(&["u"]))]),
    }
}

pub fn triv1() -> KripkeLatticeModel {
    let k = KripkeModel::from_data(&triv1_data()).expect("triv1 fixture");
    let aw = BTreeMap::from([(agent("a"), BTreeMap::from([("u".to_string(), atoms(&["p"]))]))]);
    KripkeLatticeModel::new(k, &aw).expect("triv1 fixture")
}

/// The trade example as a three-space HMS chain `S_0 ⪯ S_i ⪯ T`. States
/// are named by literals: `nil` is `¬i ∧ l`, `ni` is `¬i`, `e` is the
/// single state of the bottom space. Owner's cells in `S_i` are the whole
/// space so that projections preserve knowledge.
pub fn three_space_hms_data() -> HmsData {
    let spaces = BTreeMap::from([
        ("S_0".to_string(), strings(&["e"])),
        ("S_i".to_string(), strings(&["i", "ni"])),
        ("T".to_string(), strings(&["il", "nil", "ninl"])),
    ]);
    let order = vec![("S_0".to_string(), "S_i".to_string()), ("S_i".to_string(), "T".to_string())];
    let map = |entries: &[(&str, &str)]| -> BTreeMap<String, String> {
        entries.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    };
    let projections = BTreeMap::from([
        ("T->S_i".to_string(), map(&[("il", "i"), ("nil", "ni"), ("ninl", "ni")])),
        ("T->S_0".to_string(), map(&[("il", "e"), ("nil", "e"), ("ninl", "e")])),
        ("S_i->S_0".to_string(), map(&[("i", "e"), ("ni", "e")])),
    ]);
    let cells = |entries: &[(&str, &[&str])]| -> BTreeMap<String, Vec<String>> {
        entries.iter().map(|(s, ts)| (s.to_string(), strings(ts))).collect()
    };
    let t: &[&str] = &["il", "nil", "ninl"];
    let si: &[&str] = &["i", "ni"];
    let pi = BTreeMap::from([
        (
            agent("b"),
            cells(&[
                ("il", &["il"]),
                ("nil", &["ni"]),
                ("ninl", &["ni"]),
                ("i", &["i"]),
                ("ni", &["ni"]),
                ("e", &["e"]),
            ]),
        ),
        (agent("o"), cells(&[("il", t), ("nil", t), ("ninl", t), ("i", si), ("ni", si), ("e", &["e"])])),
    ]);
    let valuation = BTreeMap::from([
        (atom("i"), EventData { base_space: "S_i".into(), base_set: strings(&["i"]) }),
        (atom("l"), EventData { base_space: "T".into(), base_set: strings(&["il", "nil"]) }),
    ]);
    HmsData { spaces, order, projections, pi, valuation }
}

pub fn three_space_hms() -> HmsModel {
    HmsModel::from_data(&three_space_hms_data()).expect("three-space fixture")
}
