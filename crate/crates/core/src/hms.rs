//! HMS unawareness frames and models: lattices of disjoint state spaces with
//! projections, possibility correspondences, events, and the three-valued
//! semantics of `L` over events.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Agent, Atom, AtomSet, Formula, FormulaTable, LanguageTag};
use crate::klm::PropertyVerdict;
use crate::semantics::{Evaluation, Node, Semantics, ThreeValued};

/// Frames with more states than this are refused.
pub const MAX_STATES: usize = 10_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventData {
    pub base_space: String,
    pub base_set: Vec<String>,
}

/// An HMS model as written in model files. Order pairs `[S, S2]` state
/// `S ⪯ S2`; projections are keyed `"S2->S"` for every strict pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HmsData {
    pub spaces: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub projections: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub pi: BTreeMap<Agent, BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    pub valuation: BTreeMap<Atom, EventData>,
}

/// An event `(D↑, S)` stored as its base space and base set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    pub base_space: usize,
    pub base_set: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameReport {
    pub lattice: PropertyVerdict,
    pub projections: PropertyVerdict,
    pub confinement: PropertyVerdict,
    pub generalized_reflexivity: PropertyVerdict,
    pub stationarity: PropertyVerdict,
    pub projections_preserve_ignorance: PropertyVerdict,
    pub projections_preserve_knowledge: PropertyVerdict,
}

impl FrameReport {
    pub fn checks(&self) -> [(&'static str, &PropertyVerdict); 7] {
        [
            ("lattice", &self.lattice),
            ("projections", &self.projections),
            ("Conf", &self.confinement),
            ("Gref", &self.generalized_reflexivity),
            ("Stat", &self.stationarity),
            ("PPI", &self.projections_preserve_ignorance),
            ("PPK", &self.projections_preserve_knowledge),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.checks().iter().all(|(_, v)| v.holds)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks()
            .iter()
            .filter(|(_, v)| !v.holds)
            .map(|(name, v)| format!("{name} fails: {}", v.witness.as_deref().unwrap_or("")))
            .collect()
    }
}

fn verdict(witness: Option<String>) -> PropertyVerdict {
    PropertyVerdict { holds: witness.is_none(), witness }
}

#[derive(Clone, Debug)]
pub struct UnawarenessFrame {
    space_names: Vec<String>,
    space_index: HashMap<String, usize>,
    space_states: Vec<Vec<usize>>,
    state_names: Vec<String>,
    state_index: HashMap<String, usize>,
    state_space: Vec<usize>,
    leq: Vec<Vec<bool>>,
    /// `proj[t][S]` is `r_S^{S(t)}(t)` whenever `S ⪯ S(t)`.
    proj: Vec<Vec<Option<usize>>>,
    agents: Vec<Agent>,
    agent_index: HashMap<Agent, usize>,
    pi: Vec<Vec<Vec<usize>>>,
    join: Vec<Vec<Option<usize>>>,
    meet: Vec<Vec<Option<usize>>>,
}

impl UnawarenessFrame {
    /// Indexes a frame, failing only on defects that prevent indexing
    /// (unknown names, overlapping spaces, missing maps). The frame
    /// properties themselves are left to [`validate_frame`].
    pub fn from_data(data: &HmsData) -> Result<Self> {
        let mut errs = Vec::new();
        let space_names: Vec<String> = data.spaces.keys().cloned().collect();
        let space_index: HashMap<String, usize> =
            space_names.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut state_names = Vec::new();
        let mut state_index = HashMap::new();
        let mut state_space = Vec::new();
        let mut space_states = Vec::new();
        for (si, (space, states)) in data.spaces.iter().enumerate() {
            if states.is_empty() {
                errs.push(format!("space `{space}` is empty"));
            }
            let mut ids = Vec::new();
            for s in states {
                if state_index.insert(s.clone(), state_names.len()).is_some() {
                    errs.push(format!("state `{s}` appears twice (spaces must be disjoint)"));
                    continue;
                }
                ids.push(state_names.len());
                state_names.push(s.clone());
                state_space.push(si);
            }
            space_states.push(ids);
        }
        if state_names.len() > MAX_STATES {
            return Err(Error::TooLarge(format!("{} states exceed the limit of {MAX_STATES}", state_names.len())));
        }
        if space_names.is_empty() {
            errs.push("frame has no state spaces".into());
        }
        let n = space_names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in &data.order {
            match (space_index.get(lo), space_index.get(hi)) {
                (Some(&a), Some(&b)) => leq[a][b] = true,
                _ => errs.push(format!("order pair ({lo},{hi}) names an unknown space")),
            }
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut proj = vec![vec![None; n]; state_names.len()];
        for (t, &st) in state_space.iter().enumerate() {
            proj[t][st] = Some(t);
        }
        let mut seen_keys = BTreeSet::new();
        for hi in 0..n {
            for lo in 0..n {
                if lo == hi || !leq[lo][hi] {
                    continue;
                }
                let key = format!("{}->{}", space_names[hi], space_names[lo]);
                seen_keys.insert(key.clone());
                let Some(map) = data.projections.get(&key) else {
                    errs.push(format!("missing projection {key}"));
                    continue;
                };
                for &t in &space_states[hi] {
                    match map.get(&state_names[t]).and_then(|target| state_index.get(target)) {
                        Some(&u) if state_space[u] == lo => proj[t][lo] = Some(u),
                        _ => errs.push(format!("projection {key} does not map `{}` into {}", state_names[t], space_names[lo])),
                    }
                }
                for src in map.keys() {
                    if state_index.get(src).map(|&t| state_space[t]) != Some(hi) {
                        errs.push(format!("projection {key} maps `{src}`, which is not a state of {}", space_names[hi]));
                    }
                }
            }
        }
        for key in data.projections.keys() {
            if !seen_keys.contains(key) {
                errs.push(format!("projection {key} is not between ordered spaces"));
            }
        }
        let agents: Vec<Agent> = data.pi.keys().cloned().collect();
        let agent_index = agents.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let mut pi = Vec::new();
        for (agent, map) in &data.pi {
            let mut rows = vec![Vec::new(); state_names.len()];
            for (s, targets) in map {
                let Some(&si) = state_index.get(s) else {
                    errs.push(format!("possibility correspondence of {agent} at unknown state `{s}`"));
                    continue;
                };
                for t in targets {
                    match state_index.get(t) {
                        Some(&ti) => rows[si].push(ti),
                        None => errs.push(format!("possibility correspondence of {agent} names unknown state `{t}`")),
                    }
                }
                rows[si].sort_unstable();
                rows[si].dedup();
            }
            for (si, name) in state_names.iter().enumerate() {
                if !map.contains_key(name) {
                    errs.push(format!("possibility correspondence of {agent} is undefined at `{name}`"));
                }
                let _ = si;
            }
            pi.push(rows);
        }
        if !errs.is_empty() {
            return Err(Error::InvalidModel(errs));
        }
        let bound = |i: usize, j: usize, up: bool| -> Option<usize> {
            let cands: Vec<usize> = (0..n)
                .filter(|&k| if up { leq[i][k] && leq[j][k] } else { leq[k][i] && leq[k][j] })
                .collect();
            cands
                .iter()
                .copied()
                .find(|&c| cands.iter().all(|&d| if up { leq[c][d] } else { leq[d][c] }))
        };
        let join = (0..n).map(|i| (0..n).map(|j| bound(i, j, true)).collect()).collect();
        let meet = (0..n).map(|i| (0..n).map(|j| bound(i, j, false)).collect()).collect();
        Ok(UnawarenessFrame {
            space_names,
            space_index,
            space_states,
            state_names,
            state_index,
            state_space,
            leq,
            proj,
            agents,
            agent_index,
            pi,
            join,
            meet,
        })
    }

    pub fn space_count(&self) -> usize {
        self.space_names.len()
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn space_name(&self, s: usize) -> &str {
        &self.space_names[s]
    }

    pub fn state_name(&self, t: usize) -> &str {
        &self.state_names[t]
    }

    pub fn space(&self, name: &str) -> Result<usize> {
        self.space_index.get(name).copied().ok_or_else(|| Error::UnknownSpace(name.to_string()))
    }

    pub fn state(&self, name: &str) -> Result<usize> {
        self.state_index.get(name).copied().ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent(&self, a: &Agent) -> Result<usize> {
        self.agent_index.get(a).copied().ok_or_else(|| Error::UnknownAgent(a.to_string()))
    }

    pub fn states_of(&self, space: usize) -> &[usize] {
        &self.space_states[space]
    }

    /// `S(t)`.
    pub fn space_of(&self, t: usize) -> usize {
        self.state_space[t]
    }

    pub fn leq(&self, s: usize, t: usize) -> bool {
        self.leq[s][t]
    }

    /// `r_S^{S(t)}(t)`, defined when `S ⪯ S(t)`.
    pub fn project(&self, t: usize, space: usize) -> Option<usize> {
        self.proj[t][space]
    }

    pub fn pi(&self, a: usize, t: usize) -> &[usize] {
        &self.pi[a][t]
    }

    pub fn join(&self, s: usize, t: usize) -> Option<usize> {
        self.join[s][t]
    }

    /// The unique ⪯-maximal space.
    pub fn top(&self) -> Option<usize> {
        (0..self.space_count()).find(|&s| (0..self.space_count()).all(|t| self.leq[t][s]))
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.space_count()).find(|&s| (0..self.space_count()).all(|t| self.leq[s][t]))
    }

    /// The space containing every state of `set`, if there is one.
    pub fn containing_space(&self, set: &[usize]) -> Option<usize> {
        let s = self.state_space[*set.first()?];
        set.iter().all(|&t| self.state_space[t] == s).then_some(s)
    }

    /// `D↑` as a membership mask over all states.
    pub fn up_mask(&self, space: usize, set: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.state_count()];
        for &d in set {
            inside[d] = true;
        }
        (0..self.state_count())
            .map(|t| self.leq[space][self.state_space[t]] && self.proj[t][space].is_some_and(|u| inside[u]))
            .collect()
    }

    /// `D↑ = ⋃_{S' ⪰ S} (r_S^{S'})⁻¹(D)`.
    pub fn upward_closure(&self, set: &[usize], space: usize) -> Result<Vec<usize>> {
        if let Some(&bad) = set.iter().find(|&&d| self.state_space[d] != space) {
            return Err(Error::Mismatch(format!(
                "state `{}` is not in space {}",
                self.state_names[bad], self.space_names[space]
            )));
        }
        Ok(mask_to_set(&self.up_mask(space, set)))
    }

    pub fn event(&self, space: &str, states: &[&str]) -> Result<Event> {
        let s = self.space(space)?;
        let mut set = Vec::new();
        for name in states {
            let t = self.state(name)?;
            if self.state_space[t] != s {
                return Err(Error::Mismatch(format!("state `{name}` is not in space {space}")));
            }
            set.push(t);
        }
        set.sort_unstable();
        set.dedup();
        Ok(Event { base_space: s, base_set: set })
    }

    pub fn event_up(&self, e: &Event) -> Vec<bool> {
        self.up_mask(e.base_space, &e.base_set)
    }

    /// `¬(D↑, S) = ((S∖D)↑, S)`.
    pub fn event_neg(&self, e: &Event) -> Event {
        let base_set = self.space_states[e.base_space].iter().copied().filter(|t| !e.base_set.contains(t)).collect();
        Event { base_space: e.base_space, base_set }
    }

    /// `(⋂ D_i↑, sup S_i)`, stored by its slice of the join space.
    pub fn event_and(&self, events: &[Event]) -> Result<Event> {
        let first = events.first().ok_or_else(|| Error::Mismatch("empty conjunction".into()))?;
        let mut space = first.base_space;
        for e in &events[1..] {
            space = self.join[space][e.base_space].ok_or_else(|| {
                Error::FrameDefect(format!(
                    "spaces {} and {} have no join",
                    self.space_names[space], self.space_names[e.base_space]
                ))
            })?;
        }
        let ups: Vec<Vec<bool>> = events.iter().map(|e| self.event_up(e)).collect();
        let meet: Vec<bool> = (0..self.state_count()).map(|t| ups.iter().all(|u| u[t])).collect();
        let base_set: Vec<usize> = self.space_states[space].iter().copied().filter(|&t| meet[t]).collect();
        if self.up_mask(space, &base_set) != meet {
            return Err(Error::FrameDefect(format!(
                "intersection of conjuncts is not an up-set based at {}",
                self.space_names[space]
            )));
        }
        Ok(Event { base_space: space, base_set })
    }

    fn modal_event(&self, a: usize, space: usize, target: &[bool], what: &str) -> Result<Event> {
        let raw: Vec<bool> = (0..self.state_count()).map(|w| self.pi[a][w].iter().all(|&t| target[t])).collect();
        if !raw.iter().any(|&b| b) {
            return Ok(Event { base_space: space, base_set: Vec::new() });
        }
        let base_set: Vec<usize> = self.space_states[space].iter().copied().filter(|&t| raw[t]).collect();
        if self.up_mask(space, &base_set) != raw {
            return Err(Error::FrameDefect(format!(
                "the {what} event of agent {} is not an up-set based at {}",
                self.agents[a], self.space_names[space]
            )));
        }
        Ok(Event { base_space: space, base_set })
    }

    /// `K_a(D↑, S) = ({w : Π_a(w) ⊆ D↑}, S)`.
    pub fn event_know(&self, a: usize, e: &Event) -> Result<Event> {
        self.modal_event(a, e.base_space, &self.event_up(e), "knowledge")
    }

    /// `A_a(D↑, S) = ({w : Π_a(w) ⊆ S↑}, S)`.
    pub fn event_aware(&self, a: usize, e: &Event) -> Result<Event> {
        let whole = self.up_mask(e.base_space, &self.space_states[e.base_space]);
        self.modal_event(a, e.base_space, &whole, "awareness")
    }

    pub fn format_event(&self, e: &Event) -> String {
        let names: Vec<&str> = e.base_set.iter().map(|&t| self.state_names[t].as_str()).collect();
        format!("({{{}}}, {})", names.join(","), self.space_names[e.base_space])
    }

    fn agent_state(&self, a: usize, w: usize) -> String {
        format!("agent {}, state {}", self.agents[a], self.state_names[w])
    }
}

fn mask_to_set(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

fn lattice_witness(f: &UnawarenessFrame) -> Option<String> {
    let n = f.space_count();
    for i in 0..n {
        for j in 0..n {
            if i != j && f.leq[i][j] && f.leq[j][i] {
                return Some(format!("{} and {} are mutually below each other", f.space_names[i], f.space_names[j]));
            }
            if f.join[i][j].is_none() {
                return Some(format!("{} and {} have no join", f.space_names[i], f.space_names[j]));
            }
            if f.meet[i][j].is_none() {
                return Some(format!("{} and {} have no meet", f.space_names[i], f.space_names[j]));
            }
            if f.leq[i][j] && f.space_states[i].len() > f.space_states[j].len() {
                return Some(format!("{} ⪯ {} but |{}| > |{}|", f.space_names[i], f.space_names[j], f.space_names[i], f.space_names[j]));
            }
        }
    }
    None
}

fn projection_witness(f: &UnawarenessFrame) -> Option<String> {
    let n = f.space_count();
    for hi in 0..n {
        for lo in 0..n {
            if lo == hi || !f.leq[lo][hi] {
                continue;
            }
            let image: BTreeSet<usize> = f.space_states[hi].iter().filter_map(|&t| f.proj[t][lo]).collect();
            if image.len() != f.space_states[lo].len() {
                return Some(format!("projection {}->{} is not surjective", f.space_names[hi], f.space_names[lo]));
            }
            for mid in 0..n {
                if !(f.leq[lo][mid] && f.leq[mid][hi]) {
                    continue;
                }
                for &t in &f.space_states[hi] {
                    let direct = f.proj[t][lo];
                    let composed = f.proj[t][mid].and_then(|u| f.proj[u][lo]);
                    if direct != composed {
                        return Some(format!(
                            "projections {}->{}->{} do not commute at {}",
                            f.space_names[hi], f.space_names[mid], f.space_names[lo], f.state_names[t]
                        ));
                    }
                }
            }
        }
    }
    None
}

fn confinement_witness(f: &UnawarenessFrame) -> Option<String> {
    for a in 0..f.agents.len() {
        for w in 0..f.state_count() {
            match f.containing_space(&f.pi[a][w]) {
                Some(s) if f.leq[s][f.state_space[w]] => {}
                Some(s) => {
                    return Some(format!(
                        "{}: Π lies in {}, which is not below {}",
                        f.agent_state(a, w),
                        f.space_names[s],
                        f.space_names[f.state_space[w]]
                    ))
                }
                None if f.pi[a][w].is_empty() => return Some(format!("{}: Π is empty", f.agent_state(a, w))),
                None => return Some(format!("{}: Π straddles several spaces", f.agent_state(a, w))),
            }
        }
    }
    None
}

/// `S(Π_a(w))` when Confinement holds at `w`.
fn confined_space(f: &UnawarenessFrame, a: usize, w: usize) -> Option<usize> {
    f.containing_space(&f.pi[a][w]).filter(|&s| f.leq[s][f.state_space[w]])
}

fn gref_witness(f: &UnawarenessFrame) -> Option<String> {
    for a in 0..f.agents.len() {
        for w in 0..f.state_count() {
            let ok = confined_space(f, a, w)
                .and_then(|s| f.proj[w][s])
                .is_some_and(|r| f.pi[a][w].contains(&r));
            if !ok {
                return Some(format!("{}: state is not in the up-closure of its Π", f.agent_state(a, w)));
            }
        }
    }
    None
}

fn stationarity_witness(f: &UnawarenessFrame) -> Option<String> {
    for a in 0..f.agents.len() {
        for w in 0..f.state_count() {
            for &v in &f.pi[a][w] {
                if f.pi[a][v] != f.pi[a][w] {
                    return Some(format!(
                        "{}: {} is possible but has a different Π",
                        f.agent_state(a, w),
                        f.state_names[v]
                    ));
                }
            }
        }
    }
    None
}

fn ppi_witness(f: &UnawarenessFrame) -> Option<String> {
    for a in 0..f.agents.len() {
        for w in 0..f.state_count() {
            let Some(sw) = confined_space(f, a, w) else { continue };
            let up_w = f.up_mask(sw, &f.pi[a][w]);
            for s in 0..f.space_count() {
                if !f.leq[s][f.state_space[w]] {
                    continue;
                }
                let Some(r) = f.proj[w][s] else { continue };
                let Some(sr) = confined_space(f, a, r) else { continue };
                let up_r = f.up_mask(sr, &f.pi[a][r]);
                if up_w.iter().zip(&up_r).any(|(&x, &y)| x && !y) {
                    return Some(format!(
                        "{}: Π↑ is not contained in Π↑ of its projection {} to {}",
                        f.agent_state(a, w),
                        f.state_names[r],
                        f.space_names[s]
                    ));
                }
            }
        }
    }
    None
}

fn ppk_witness(f: &UnawarenessFrame) -> Option<String> {
    for a in 0..f.agents.len() {
        for w in 0..f.state_count() {
            let Some(mid) = f.containing_space(&f.pi[a][w]) else { continue };
            if !f.leq[mid][f.state_space[w]] {
                continue;
            }
            for s in 0..f.space_count() {
                if !f.leq[s][mid] {
                    continue;
                }
                let projected: BTreeSet<Option<usize>> = f.pi[a][w].iter().map(|&t| f.proj[t][s]).collect();
                let Some(r) = f.proj[w][s] else { continue };
                let target: BTreeSet<Option<usize>> = f.pi[a][r].iter().map(|&t| Some(t)).collect();
                if projected != target {
                    return Some(format!(
                        "{}: Π ⊆ {} but its projection to {} differs from Π at {}",
                        f.agent_state(a, w),
                        f.space_names[mid],
                        f.space_names[s],
                        f.state_names[r]
                    ));
                }
            }
        }
    }
    None
}

/// Checks the lattice and projection laws and the five properties of the
/// possibility correspondences, exhaustively.
pub fn validate_frame(f: &UnawarenessFrame) -> FrameReport {
    FrameReport {
        lattice: verdict(lattice_witness(f)),
        projections: verdict(projection_witness(f)),
        confinement: verdict(confinement_witness(f)),
        generalized_reflexivity: verdict(gref_witness(f)),
        stationarity: verdict(stationarity_witness(f)),
        projections_preserve_ignorance: verdict(ppi_witness(f)),
        projections_preserve_knowledge: verdict(ppk_witness(f)),
    }
}

/// A validated unawareness frame with an event-valued valuation.
#[derive(Clone, Debug)]
pub struct HmsModel {
    frame: UnawarenessFrame,
    atoms: Vec<Atom>,
    valuation: Vec<Event>,
    data: HmsData,
}

impl HmsModel {
    pub fn from_data(data: &HmsData) -> Result<Self> {
        let frame = UnawarenessFrame::from_data(data)?;
        let report = validate_frame(&frame);
        if !report.all_hold() {
            return Err(Error::InvalidModel(report.failures()));
        }
        let mut atoms = Vec::new();
        let mut valuation = Vec::new();
        for (atom, ev) in &data.valuation {
            let names: Vec<&str> = ev.base_set.iter().map(String::as_str).collect();
            valuation.push(frame.event(&ev.base_space, &names)?);
            atoms.push(atom.clone());
        }
        Ok(HmsModel { frame, atoms, valuation, data: data.clone() })
    }

    pub fn frame(&self) -> &UnawarenessFrame {
        &self.frame
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_set(&self) -> AtomSet {
        self.atoms.iter().cloned().collect()
    }

    pub fn data(&self) -> &HmsData {
        &self.data
    }

    pub fn valuation(&self, p: &Atom) -> Result<&Event> {
        let i = self.atoms.binary_search(p).map_err(|_| Error::UnknownAtom(p.to_string()))?;
        Ok(&self.valuation[i])
    }

    /// States where `p` has a defined truth value.
    pub fn defined_mask(&self, p: &Atom) -> Result<Vec<bool>> {
        let e = self.valuation(p)?;
        let up = self.frame.event_up(e);
        let neg = self.frame.event_up(&self.frame.event_neg(e));
        Ok(up.iter().zip(&neg).map(|(&x, &y)| x || y).collect())
    }

    /// `At(O)`: atoms with a defined truth value at every state of `O`.
    pub fn defined_atoms(&self, states: &[usize]) -> AtomSet {
        self.atoms
            .iter()
            .filter(|p| {
                let mask = self.defined_mask(p).expect("own atom");
                states.iter().all(|&s| mask[s])
            })
            .cloned()
            .collect()
    }

    /// `⟦f⟧`, with `⟦T⟧` the whole bottom space.
    pub fn denotation(&self, f: &Formula) -> Result<Event> {
        f.require(LanguageTag::L)?;
        let sem = HmsL::new(self)?;
        let mut table = FormulaTable::new();
        let id = table.intern(f);
        let mut ev = Evaluation::new(&sem);
        ev.fill(&table)?;
        Ok(ev.value(id).event.clone())
    }

    pub fn eval_l(&self, state: usize, f: &Formula) -> Result<ThreeValued> {
        if state >= self.frame.state_count() {
            return Err(Error::UnknownState(state.to_string()));
        }
        let e = self.denotation(f)?;
        Ok(verdict_at(&self.frame, &e, state))
    }

    pub fn eval_l_named(&self, state: &str, f: &Formula) -> Result<ThreeValued> {
        self.eval_l(self.frame.state(state)?, f)
    }
}

fn verdict_at(frame: &UnawarenessFrame, e: &Event, s: usize) -> ThreeValued {
    if frame.event_up(e)[s] {
        ThreeValued::True
    } else if frame.event_up(&frame.event_neg(e))[s] {
        ThreeValued::False
    } else {
        ThreeValued::Undefined
    }
}

/// An event together with its three-valued reading at every state.
#[derive(Clone, Debug)]
pub struct HmsValue {
    pub event: Event,
    pub verdicts: Vec<ThreeValued>,
}

/// Event semantics of `L` over an HMS model.
pub struct HmsL<'a> {
    m: &'a HmsModel,
    bottom: usize,
    defined: Vec<Vec<bool>>,
}

impl<'a> HmsL<'a> {
    pub fn new(m: &'a HmsModel) -> Result<Self> {
        let bottom = m.frame.bottom().ok_or_else(|| Error::FrameDefect("no bottom space".into()))?;
        let defined = m.atoms.iter().map(|p| m.defined_mask(p)).collect::<Result<_>>()?;
        Ok(HmsL { m, bottom, defined })
    }

    fn value(&self, event: Event) -> HmsValue {
        let f = &self.m.frame;
        let up = f.event_up(&event);
        let neg = f.event_up(&f.event_neg(&event));
        let verdicts = up
            .iter()
            .zip(&neg)
            .map(|(&t, &n)| if t { ThreeValued::True } else if n { ThreeValued::False } else { ThreeValued::Undefined })
            .collect();
        HmsValue { event, verdicts }
    }
}

impl Semantics for HmsL<'_> {
    type Value = HmsValue;

    fn top(&self) -> Result<HmsValue> {
        let f = &self.m.frame;
        Ok(self.value(Event { base_space: self.bottom, base_set: f.states_of(self.bottom).to_vec() }))
    }

    fn atom(&self, p: &Atom) -> Result<HmsValue> {
        Ok(self.value(self.m.valuation(p)?.clone()))
    }

    fn not(&self, arg: Node<'_, HmsValue>) -> Result<HmsValue> {
        Ok(self.value(self.m.frame.event_neg(&arg.value.event)))
    }

    fn and(&self, lhs: Node<'_, HmsValue>, rhs: Node<'_, HmsValue>) -> Result<HmsValue> {
        Ok(self.value(self.m.frame.event_and(&[lhs.value.event.clone(), rhs.value.event.clone()])?))
    }

    fn know(&self, agent: &Agent, arg: Node<'_, HmsValue>) -> Result<HmsValue> {
        let a = self.m.frame.agent(agent)?;
        Ok(self.value(self.m.frame.event_know(a, &arg.value.event)?))
    }

    fn aware(&self, _agent: &Agent, _arg: Node<'_, HmsValue>) -> Result<HmsValue> {
        Err(Error::NotInLanguage { op: "A", lang: "L" })
    }

    fn state_count(&self) -> usize {
        self.m.frame.state_count()
    }

    fn verdict(&self, value: &HmsValue, state: usize) -> ThreeValued {
        value.verdicts[state]
    }

    fn state_label(&self, state: usize) -> String {
        self.m.frame.state_name(state).to_string()
    }

    fn atoms_defined(&self, atoms: &AtomSet, state: usize) -> bool {
        atoms.iter().all(|p| match self.m.atoms.binary_search(p) {
            Ok(i) => self.defined[i][state],
            Err(_) => false,
        })
    }
}
