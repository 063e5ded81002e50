//! Mechanical checks of the satisfaction-preservation results and of the
//! soundness of the two axiom systems over finite model corpora.
//!
//! All checks enumerate formulas in the fixed order of
//! [`FormulaTable::enumerate`] and evaluate them with the table-driven
//! semantics, so reports are reproducible byte for byte.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fh::{FhL, FhLka, FhModel};
use crate::formula::{Agent, AgentSet, AtomSet, Formula, FormulaTable, LanguageTag};
use crate::hms::{HmsL, HmsModel};
use crate::klm::{KlmL, KlmLka, KripkeLatticeModel, LkaMode};
use crate::semantics::{Evaluation, Semantics, ThreeValued};
use crate::transforms::{fh_transform, h_transform, k_transform, l_transform, StateCorrespondence};

/// Upper bound on formulas or instances examined by one check.
pub const INSTANTIATION_CAP: usize = 1_000_000;

/// Failures kept per schema or rule; counts are always complete.
const KEPT_FAILURES: usize = 16;

/// One failing (formula, state) pair. For equivalence checks `left` and
/// `right` are the two verdicts; for validity checks `left` is the verdict
/// found and `right` the expected `True`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub formula: String,
    pub state: String,
    pub left: String,
    pub right: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<usize>,
}

/// The machine-readable report shared by all checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub kind: String,
    pub depth: usize,
    pub checked: u64,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub depth: usize,
    pub formulas: usize,
    pub comparisons: u64,
    pub agreements: u64,
    pub first_disagreement: Option<Failure>,
    /// Set when the formula enumeration stopped at [`INSTANTIATION_CAP`].
    pub truncated: bool,
}

impl EquivalenceReport {
    pub fn disagreements(&self) -> u64 {
        self.comparisons - self.agreements
    }

    pub fn holds(&self) -> bool {
        self.comparisons == self.agreements
    }

    pub fn to_report(&self) -> Report {
        Report {
            kind: "equivalence".into(),
            depth: self.depth,
            checked: self.comparisons,
            failures: self.first_disagreement.iter().cloned().collect(),
        }
    }
}

/// The semantics a model is evaluated under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemanticsKind {
    Hms,
    KlmL,
    KlmLka,
    FhL,
    FhLka,
}

impl SemanticsKind {
    pub fn language(self) -> LanguageTag {
        match self {
            SemanticsKind::Hms | SemanticsKind::KlmL | SemanticsKind::FhL => LanguageTag::L,
            SemanticsKind::KlmLka | SemanticsKind::FhLka => LanguageTag::Lka,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum ModelRef<'a> {
    Klm(&'a KripkeLatticeModel),
    Hms(&'a HmsModel),
    Fh(&'a FhModel),
}

impl ModelRef<'_> {
    fn atoms_agents(&self) -> (AtomSet, AgentSet) {
        match self {
            ModelRef::Klm(k) => (k.base().atom_set(), k.base().agents().iter().cloned().collect()),
            ModelRef::Hms(m) => (m.atom_set(), m.frame().agents().iter().cloned().collect()),
            ModelRef::Fh(s) => (s.base().atom_set(), s.base().agents().iter().cloned().collect()),
        }
    }
}

enum Sem<'a> {
    Hms(HmsL<'a>),
    KlmL(KlmL<'a>),
    KlmLka(KlmLka<'a>),
    FhL(FhL<'a>),
    FhLka(FhLka<'a>),
}

/// A semantics together with the order in which its states are reported.
struct Bound<'a> {
    sem: Sem<'a>,
    order: Vec<usize>,
}

impl<'a> Bound<'a> {
    fn new(model: ModelRef<'a>, kind: SemanticsKind) -> Result<Self> {
        let klm_order = |k: &KripkeLatticeModel| -> Result<Vec<usize>> {
            let n = k.base().worlds().len();
            Ok(k.states()?.into_iter().map(|(w, x)| x.0 as usize * n + w).collect())
        };
        let (sem, order) = match (model, kind) {
            (ModelRef::Hms(m), SemanticsKind::Hms) => (Sem::Hms(HmsL::new(m)?), (0..m.frame().state_count()).collect()),
            (ModelRef::Klm(k), SemanticsKind::KlmL) => (Sem::KlmL(KlmL::new(k)?), klm_order(k)?),
            (ModelRef::Klm(k), SemanticsKind::KlmLka) => {
                (Sem::KlmLka(KlmLka::new(k, LkaMode::Guarded)?), klm_order(k)?)
            }
            (ModelRef::Fh(s), SemanticsKind::FhL) => (Sem::FhL(FhL { m: s }), (0..s.base().worlds().len()).collect()),
            (ModelRef::Fh(s), SemanticsKind::FhLka) => {
                (Sem::FhLka(FhLka { m: s }), (0..s.base().worlds().len()).collect())
            }
            (_, kind) => return Err(Error::Mismatch(format!("semantics {kind:?} does not apply to this model class"))),
        };
        Ok(Bound { sem, order })
    }

    fn evaluator(&self) -> Box<dyn Evaluator + '_> {
        fn boxed<'s, S: Semantics>(sem: &'s S, order: &'s [usize]) -> Box<dyn Evaluator + 's> {
            Box::new(Eval { ev: Evaluation::new(sem), order })
        }
        match &self.sem {
            Sem::Hms(s) => boxed(s, &self.order),
            Sem::KlmL(s) => boxed(s, &self.order),
            Sem::KlmLka(s) => boxed(s, &self.order),
            Sem::FhL(s) => boxed(s, &self.order),
            Sem::FhLka(s) => boxed(s, &self.order),
        }
    }
}

/// Object-safe view of an [`Evaluation`].
trait Evaluator {
    fn fill(&mut self, table: &FormulaTable) -> Result<()>;
    fn verdict(&self, id: usize, state: usize) -> ThreeValued;
    fn verdicts(&self, id: usize) -> Vec<ThreeValued>;
    fn defined(&self, atoms: &AtomSet, state: usize) -> bool;
    fn label(&self, state: usize) -> String;
    fn order(&self) -> &[usize];
    fn extensional(&self) -> bool;
}

struct Eval<'s, S: Semantics> {
    ev: Evaluation<'s, S>,
    order: &'s [usize],
}

impl<S: Semantics> Evaluator for Eval<'_, S> {
    fn fill(&mut self, table: &FormulaTable) -> Result<()> {
        self.ev.fill(table)
    }

    fn verdict(&self, id: usize, state: usize) -> ThreeValued {
        self.ev.verdict(id, state)
    }

    fn verdicts(&self, id: usize) -> Vec<ThreeValued> {
        self.ev.verdicts(id)
    }

    fn defined(&self, atoms: &AtomSet, state: usize) -> bool {
        self.ev.semantics().atoms_defined(atoms, state)
    }

    fn label(&self, state: usize) -> String {
        self.ev.semantics().state_label(state)
    }

    fn order(&self) -> &[usize] {
        self.order
    }

    fn extensional(&self) -> bool {
        self.ev.semantics().extensional()
    }
}

/// First state, in report order, where the formula is defined but not true.
fn first_counterexample(ev: &dyn Evaluator, table: &FormulaTable, id: usize) -> Option<(usize, ThreeValued)> {
    let atoms = &table.entry(id).atoms;
    ev.order()
        .iter()
        .copied()
        .filter(|&s| ev.defined(atoms, s))
        .map(|s| (s, ev.verdict(id, s)))
        .find(|(_, v)| !v.is_true())
}

fn compare(
    table: &FormulaTable,
    left: &mut dyn Evaluator,
    right: &mut dyn Evaluator,
    pairs: &[(usize, usize)],
    only_where_right_defined: bool,
    depth: usize,
) -> Result<EquivalenceReport> {
    left.fill(table)?;
    right.fill(table)?;
    let mut report = EquivalenceReport {
        depth,
        formulas: table.len(),
        comparisons: 0,
        agreements: 0,
        first_disagreement: None,
        truncated: table.is_truncated(),
    };
    for id in 0..table.len() {
        let atoms = &table.entry(id).atoms;
        for &(l, r) in pairs {
            if only_where_right_defined && !right.defined(atoms, r) {
                continue;
            }
            report.comparisons += 1;
            let (lv, rv) = (left.verdict(id, l), right.verdict(id, r));
            if lv == rv {
                report.agreements += 1;
            } else if report.first_disagreement.is_none() {
                report.first_disagreement = Some(Failure {
                    formula: table.formula(id).to_string(),
                    state: format!("{} / {}", left.label(l), right.label(r)),
                    left: lv.to_string(),
                    right: rv.to_string(),
                    schema: None,
                    model: None,
                });
            }
        }
    }
    Ok(report)
}

fn enumerate(atoms: &AtomSet, agents: &AgentSet, depth: usize, lang: LanguageTag) -> FormulaTable {
    FormulaTable::enumerate(atoms, agents, depth, lang, Some(INSTANTIATION_CAP))
}

/// Compares an HMS model with a Kripke lattice model at every state `s`
/// and every `v ∈ ℓ(s)`, three-valued and exact.
pub fn compare_hms_klm(
    m: &HmsModel,
    k: &KripkeLatticeModel,
    correspondence: &StateCorrespondence,
    depth: usize,
) -> Result<EquivalenceReport> {
    let left = Bound::new(ModelRef::Hms(m), SemanticsKind::Hms)?;
    let right = Bound::new(ModelRef::Klm(k), SemanticsKind::KlmL)?;
    let n = k.base().worlds().len();
    let mut pairs = Vec::new();
    for (state, worlds) in &correspondence.entries {
        let s = m.frame().state(state)?;
        for v in worlds {
            let (w, x) = k.base().resolve(v)?;
            pairs.push((s, x.0 as usize * n + w));
        }
    }
    let (atoms, agents) = ModelRef::Hms(m).atoms_agents();
    let table = enumerate(&atoms, &agents, depth, LanguageTag::L);
    let (mut le, mut re) = (left.evaluator(), right.evaluator());
    let report = compare(&table, &mut *le, &mut *re, &pairs, false, depth)?;
    Ok(report)
}

/// `M, s ⊨ φ` iff `L(M), v ⊩ φ` for all `v ∈ ℓ(s)`.
pub fn check_l_equiv_hms_klm(m: &HmsModel, depth: usize) -> Result<EquivalenceReport> {
    let l = l_transform(m)?;
    compare_hms_klm(m, &l.model, &l.correspondence, depth)
}

/// Compares a Kripke lattice model with an HMS model whose states are
/// named `w@{X}`, at every `w_X`.
pub fn compare_klm_hms(k: &KripkeLatticeModel, h: &HmsModel, depth: usize) -> Result<EquivalenceReport> {
    let left = Bound::new(ModelRef::Klm(k), SemanticsKind::KlmL)?;
    let right = Bound::new(ModelRef::Hms(h), SemanticsKind::Hms)?;
    let n = k.base().worlds().len();
    let mut pairs = Vec::new();
    for (w, x) in k.states()? {
        let name = k.base().world_id(w, x).to_string();
        pairs.push((x.0 as usize * n + w, h.frame().state(&name)?));
    }
    let (atoms, agents) = ModelRef::Klm(k).atoms_agents();
    let table = enumerate(&atoms, &agents, depth, LanguageTag::L);
    let (mut le, mut re) = (left.evaluator(), right.evaluator());
    let report = compare(&table, &mut *le, &mut *re, &pairs, false, depth)?;
    Ok(report)
}

/// `K, w_X ⊩ φ` iff `H(K), w_X ⊨ φ`.
pub fn check_l_equiv_klm_hms(k: &KripkeLatticeModel, depth: usize) -> Result<EquivalenceReport> {
    k.base().require_equivalence()?;
    let h = h_transform(k)?;
    compare_klm_hms(k, &h, depth)
}

/// Compares an FH model with a Kripke lattice model over the same worlds
/// at every `w` and `w_X` with `At(φ) ⊆ X`.
pub fn compare_fh_klm(s: &FhModel, k: &KripkeLatticeModel, lang: LanguageTag, depth: usize) -> Result<EquivalenceReport> {
    let (lk, rk) = match lang {
        LanguageTag::L => (SemanticsKind::FhL, SemanticsKind::KlmL),
        LanguageTag::Lka => (SemanticsKind::FhLka, SemanticsKind::KlmLka),
    };
    let left = Bound::new(ModelRef::Fh(s), lk)?;
    let right = Bound::new(ModelRef::Klm(k), rk)?;
    let n = k.base().worlds().len();
    let mut pairs = Vec::new();
    for (w, x) in k.states()? {
        let fw = s.base().world_index(&k.base().worlds()[w])?;
        pairs.push((fw, x.0 as usize * n + w));
    }
    let (atoms, agents) = ModelRef::Fh(s).atoms_agents();
    let table = enumerate(&atoms, &agents, depth, lang);
    let (mut le, mut re) = (left.evaluator(), right.evaluator());
    let report = compare(&table, &mut *le, &mut *re, &pairs, true, depth)?;
    Ok(report)
}

#[derive(Clone, Copy, Debug)]
pub enum FhOrKlm<'a> {
    Fh(&'a FhModel),
    Klm(&'a KripkeLatticeModel),
}

/// FH models are compared with their K-transform, Kripke lattice models
/// with their FH-transform.
pub fn check_equiv_fh_klm(x: FhOrKlm<'_>, lang: LanguageTag, depth: usize) -> Result<EquivalenceReport> {
    match x {
        FhOrKlm::Fh(s) => {
            s.require_ka()?;
            let k = k_transform(s)?;
            compare_fh_klm(s, &k, lang, depth)
        }
        FhOrKlm::Klm(k) => {
            let s = fh_transform(k)?;
            compare_fh_klm(&s, k, lang, depth)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validity {
    pub valid: bool,
    /// States at which the formula was defined and therefore examined.
    pub checked: u64,
    pub witnesses: Vec<Failure>,
}

impl Validity {
    pub fn to_report(&self, depth: usize) -> Report {
        Report { kind: "validity".into(), depth, checked: self.checked, failures: self.witnesses.clone() }
    }
}

/// Truth at every state, of every model, where all atoms of `f` are
/// defined. Defined operators are expanded for the language of `kind`.
pub fn valid_over(models: &[ModelRef<'_>], f: &Formula, kind: SemanticsKind) -> Result<Validity> {
    let lang = kind.language();
    let f = f.expand_defined(lang);
    f.require(lang)?;
    let mut out = Validity { valid: true, checked: 0, witnesses: Vec::new() };
    for (i, model) in models.iter().enumerate() {
        let bound = Bound::new(*model, kind)?;
        let mut ev = bound.evaluator();
        let mut table = FormulaTable::new();
        let id = table.intern(&f);
        ev.fill(&table)?;
        let atoms = &table.entry(id).atoms;
        for &s in ev.order() {
            if !ev.defined(atoms, s) {
                continue;
            }
            out.checked += 1;
            let v = ev.verdict(id, s);
            if !v.is_true() {
                out.valid = false;
                out.witnesses.push(Failure {
                    formula: f.to_string(),
                    state: ev.label(s),
                    left: v.to_string(),
                    right: ThreeValued::True.to_string(),
                    schema: None,
                    model: (models.len() > 1).then_some(i),
                });
            }
        }
    }
    Ok(out)
}

/// An axiom schema over formula metavariables `φ, ψ, χ` and agent
/// metavariables `a, b`.
#[derive(Clone, Copy)]
pub struct Schema {
    pub id: &'static str,
    pub name: &'static str,
    pub formulas: usize,
    pub agents: usize,
    pub build: fn(&[Formula], &[Agent]) -> Formula,
}

impl std::fmt::Debug for Schema {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Schema").field("id", &self.id).field("formulas", &self.formulas).field("agents", &self.agents).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    ModusPonens,
    /// RK-Inference with `n` premises.
    Rk(usize),
    KInference,
}

impl Rule {
    pub fn id(self) -> String {
        match self {
            Rule::ModusPonens => "MP".into(),
            Rule::Rk(n) => format!("RK{n}"),
            Rule::KInference => "K-Inference".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SuiteName {
    Hms,
    Lga,
}

#[derive(Clone, Debug)]
pub struct AxiomSuite {
    pub name: SuiteName,
    pub schemas: Vec<Schema>,
    pub rules: Vec<Rule>,
}

fn imp(f: Formula, g: Formula) -> Formula {
    Formula::implies(f, g)
}

fn not(f: Formula) -> Formula {
    Formula::not(f)
}

fn k(a: &Agent, f: Formula) -> Formula {
    Formula::know(a, f)
}

fn aw(a: &Agent, f: Formula) -> Formula {
    Formula::defined_awareness(a, f)
}

fn ap(a: &Agent, f: Formula) -> Formula {
    Formula::aware(a, f)
}

fn pl_schemas() -> Vec<Schema> {
    vec![
        Schema { id: "PL1", name: "φ → (ψ → φ)", formulas: 2, agents: 0, build: |f, _| {
            imp(f[0].clone(), imp(f[1].clone(), f[0].clone()))
        } },
        Schema { id: "PL2", name: "(φ → (ψ → χ)) → ((φ → ψ) → (φ → χ))", formulas: 3, agents: 0, build: |f, _| {
            let (p, q, r) = (f[0].clone(), f[1].clone(), f[2].clone());
            imp(imp(p.clone(), imp(q.clone(), r.clone())), imp(imp(p.clone(), q), imp(p, r)))
        } },
        Schema { id: "PL3", name: "(¬φ → ¬ψ) → (ψ → φ)", formulas: 2, agents: 0, build: |f, _| {
            imp(imp(not(f[0].clone()), not(f[1].clone())), imp(f[1].clone(), f[0].clone()))
        } },
        Schema { id: "PL-T", name: "T", formulas: 0, agents: 0, build: |_, _| Formula::Top },
    ]
}

/// The axiom `¬K_aφ → K_a¬K_aφ`, invalid over Kripke lattice models.
pub fn axiom_five() -> Schema {
    Schema { id: "5", name: "¬K_aφ → K_a¬K_aφ", formulas: 1, agents: 1, build: |f, a| {
        let kf = k(&a[0], f[0].clone());
        imp(not(kf.clone()), k(&a[0], not(kf)))
    } }
}

/// The system with explicit knowledge primitive and defined awareness.
pub fn hms_suite(include_five: bool) -> AxiomSuite {
    let mut schemas = pl_schemas();
    schemas.extend([
        Schema { id: "Symmetry", name: "A_a¬φ ↔ A_aφ", formulas: 1, agents: 1, build: |f, a| {
            Formula::iff(aw(&a[0], not(f[0].clone())), aw(&a[0], f[0].clone()))
        } },
        Schema { id: "AC", name: "A_a(φ ∧ ψ) ↔ A_aφ ∧ A_aψ", formulas: 2, agents: 1, build: |f, a| {
            Formula::iff(
                aw(&a[0], Formula::and(f[0].clone(), f[1].clone())),
                Formula::and(aw(&a[0], f[0].clone()), aw(&a[0], f[1].clone())),
            )
        } },
        Schema { id: "AKR", name: "A_aφ ↔ A_aK_bφ", formulas: 1, agents: 2, build: |f, a| {
            Formula::iff(aw(&a[0], f[0].clone()), aw(&a[0], k(&a[1], f[0].clone())))
        } },
        Schema { id: "T", name: "K_aφ → φ", formulas: 1, agents: 1, build: |f, a| imp(k(&a[0], f[0].clone()), f[0].clone()) },
        Schema { id: "4", name: "K_aφ → K_aK_aφ", formulas: 1, agents: 1, build: |f, a| {
            imp(k(&a[0], f[0].clone()), k(&a[0], k(&a[0], f[0].clone())))
        } },
    ]);
    if include_five {
        schemas.push(axiom_five());
    }
    AxiomSuite { name: SuiteName::Hms, schemas, rules: vec![Rule::ModusPonens, Rule::Rk(1), Rule::Rk(2)] }
}

/// The system with implicit knowledge and awareness primitive.
pub fn lga_suite() -> AxiomSuite {
    let mut schemas = pl_schemas();
    schemas.extend([
        Schema { id: "K", name: "(K_aφ ∧ (K_aφ → K_aψ)) → K_aψ", formulas: 2, agents: 1, build: |f, a| {
            let (kp, kq) = (k(&a[0], f[0].clone()), k(&a[0], f[1].clone()));
            imp(Formula::and(kp.clone(), imp(kp, kq.clone())), kq)
        } },
        Schema { id: "XK", name: "X_aφ ↔ (K_aφ ∧ A_aφ)", formulas: 1, agents: 1, build: |f, a| {
            Formula::iff(Formula::explicit(&a[0], f[0].clone()), Formula::and(k(&a[0], f[0].clone()), ap(&a[0], f[0].clone())))
        } },
        Schema { id: "A1", name: "A_a(φ ∧ ψ) ↔ (A_aφ ∧ A_aψ)", formulas: 2, agents: 1, build: |f, a| {
            Formula::iff(
                ap(&a[0], Formula::and(f[0].clone(), f[1].clone())),
                Formula::and(ap(&a[0], f[0].clone()), ap(&a[0], f[1].clone())),
            )
        } },
        Schema { id: "A2", name: "A_a¬φ ↔ A_aφ", formulas: 1, agents: 1, build: |f, a| {
            Formula::iff(ap(&a[0], not(f[0].clone())), ap(&a[0], f[0].clone()))
        } },
        Schema { id: "A3", name: "A_aX_bφ ↔ A_aφ", formulas: 1, agents: 2, build: |f, a| {
            Formula::iff(ap(&a[0], Formula::explicit(&a[1], f[0].clone())), ap(&a[0], f[0].clone()))
        } },
        Schema { id: "A4", name: "A_aA_bφ ↔ A_aφ", formulas: 1, agents: 2, build: |f, a| {
            Formula::iff(ap(&a[0], ap(&a[1], f[0].clone())), ap(&a[0], f[0].clone()))
        } },
        Schema { id: "A5", name: "A_aK_bφ ↔ A_aφ", formulas: 1, agents: 2, build: |f, a| {
            Formula::iff(ap(&a[0], k(&a[1], f[0].clone())), ap(&a[0], f[0].clone()))
        } },
        Schema { id: "A11", name: "A_aφ → K_aA_aφ", formulas: 1, agents: 1, build: |f, a| {
            imp(ap(&a[0], f[0].clone()), k(&a[0], ap(&a[0], f[0].clone())))
        } },
        Schema { id: "A12", name: "¬A_aφ → K_a¬A_aφ", formulas: 1, agents: 1, build: |f, a| {
            imp(not(ap(&a[0], f[0].clone())), k(&a[0], not(ap(&a[0], f[0].clone()))))
        } },
    ]);
    AxiomSuite { name: SuiteName::Lga, schemas, rules: vec![Rule::ModusPonens, Rule::KInference] }
}

/// Theorems of the explicit-knowledge system that are not axioms.
pub fn derived_theorems() -> Vec<Schema> {
    vec![
        Schema { id: "weak-5", name: "K_a¬K_a¬K_aφ → (K_aφ ∨ K_a¬K_aφ)", formulas: 1, agents: 1, build: |f, a| {
            let kf = k(&a[0], f[0].clone());
            imp(k(&a[0], not(k(&a[0], not(kf.clone())))), Formula::or(kf.clone(), k(&a[0], not(kf))))
        } },
        Schema { id: "awareness-introspection", name: "A_aφ → K_aA_aφ", formulas: 1, agents: 1, build: |f, a| {
            imp(aw(&a[0], f[0].clone()), k(&a[0], aw(&a[0], f[0].clone())))
        } },
        Schema { id: "generated-by-primitives", name: "A_aφ ↔ ⋀_{p ∈ At(φ)} A_a p", formulas: 1, agents: 1, build: |f, a| {
            let parts = f[0].atoms().iter().map(|p| aw(&a[0], Formula::atom(p))).collect::<Vec<_>>();
            Formula::iff(aw(&a[0], f[0].clone()), Formula::conjunction(parts))
        } },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemaResult {
    pub id: String,
    pub name: String,
    pub instances: u64,
    pub failed: u64,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleResult {
    pub id: String,
    /// Instances whose premises are valid on the model.
    pub checked: u64,
    /// Instances skipped because some premise is not valid.
    pub vacuous: u64,
    pub failed: u64,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub suite: String,
    pub depth: usize,
    pub schemas: Vec<SchemaResult>,
    pub rules: Vec<RuleResult>,
    /// Set when some model hit [`INSTANTIATION_CAP`]; counts then cover
    /// only the enumeration prefix examined.
    pub truncated: bool,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.schemas.iter().all(|s| s.failed == 0) && self.rules.iter().all(|r| r.failed == 0)
    }

    pub fn schema(&self, id: &str) -> Option<&SchemaResult> {
        self.schemas.iter().find(|s| s.id == id)
    }

    pub fn rule(&self, id: &str) -> Option<&RuleResult> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn to_report(&self) -> Report {
        let checked = self.schemas.iter().map(|s| s.instances).sum::<u64>() + self.rules.iter().map(|r| r.checked).sum::<u64>();
        let failures = self
            .schemas
            .iter()
            .flat_map(|s| s.failures.iter())
            .chain(self.rules.iter().flat_map(|r| r.failures.iter()))
            .cloned()
            .collect();
        Report { kind: "axioms".into(), depth: self.depth, checked, failures }
    }
}

/// Per-model state of an axiom check: the filler formulas deduplicated by
/// meaning, and a table that instances are added to.
struct Instantiator<'e> {
    ev: Box<dyn Evaluator + 'e>,
    table: FormulaTable,
    fillers: Vec<usize>,
    agents: Vec<Agent>,
    budget: usize,
    truncated: bool,
    model: Option<usize>,
}

impl<'e> Instantiator<'e> {
    fn new(ev: Box<dyn Evaluator + 'e>, model: ModelRef<'_>, lang: LanguageTag, depth: usize, index: Option<usize>) -> Result<Self> {
        let (atoms, agents) = model.atoms_agents();
        let table = FormulaTable::enumerate(&atoms, &agents, depth, lang, Some(INSTANTIATION_CAP));
        let mut inst = Instantiator {
            ev,
            truncated: table.is_truncated(),
            table,
            fillers: Vec::new(),
            agents: agents.into_iter().collect(),
            budget: INSTANTIATION_CAP,
            model: index,
        };
        inst.ev.fill(&inst.table)?;
        let n = inst.table.len();
        if inst.ev.extensional() {
            let mut seen = HashMap::new();
            for id in 0..n {
                let key = (inst.ev.verdicts(id), inst.table.entry(id).atoms.clone());
                seen.entry(key).or_insert_with(|| {
                    inst.fillers.push(id);
                });
            }
        } else {
            inst.fillers = (0..n).collect();
        }
        Ok(inst)
    }

    fn formula(&self, id: usize) -> Formula {
        (*self.table.formula(id).as_ref()).clone()
    }

    fn take(&mut self) -> bool {
        if self.budget == 0 {
            self.truncated = true;
            return false;
        }
        self.budget -= 1;
        true
    }

    fn add(&mut self, f: &Formula) -> Result<usize> {
        let id = self.table.intern(f);
        self.ev.fill(&self.table)?;
        Ok(id)
    }

    fn valid(&self, id: usize) -> bool {
        first_counterexample(&*self.ev, &self.table, id).is_none()
    }

    fn failure(&self, id: usize, schema: &str) -> Option<Failure> {
        first_counterexample(&*self.ev, &self.table, id).map(|(s, v)| Failure {
            formula: self.table.formula(id).to_string(),
            state: self.ev.label(s),
            left: v.to_string(),
            right: ThreeValued::True.to_string(),
            schema: Some(schema.to_string()),
            model: self.model,
        })
    }
}

/// All tuples of length `k` over `0..n`, in lexicographic order.
fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn schema_pass(inst: &mut Instantiator<'_>, schema: &Schema, result: &mut SchemaResult) -> Result<()> {
    for agent_tuple in tuples(inst.agents.len(), schema.agents) {
        let agents: Vec<Agent> = agent_tuple.iter().map(|&i| inst.agents[i].clone()).collect();
        for filler_tuple in tuples(inst.fillers.len(), schema.formulas) {
            if !inst.take() {
                return Ok(());
            }
            let fs: Vec<Formula> = filler_tuple.iter().map(|&i| inst.formula(inst.fillers[i])).collect();
            let id = inst.add(&(schema.build)(&fs, &agents))?;
            result.instances += 1;
            if let Some(f) = inst.failure(id, schema.id) {
                result.failed += 1;
                if result.failures.len() < KEPT_FAILURES {
                    result.failures.push(f);
                }
            }
        }
    }
    Ok(())
}

fn rule_pass(inst: &mut Instantiator<'_>, rule: Rule, result: &mut RuleResult) -> Result<()> {
    let id = rule.id();
    let record = |inst: &Instantiator<'_>, conclusion: usize, result: &mut RuleResult| {
        result.checked += 1;
        if let Some(f) = inst.failure(conclusion, &id) {
            result.failed += 1;
            if result.failures.len() < KEPT_FAILURES {
                result.failures.push(f);
            }
        }
    };
    match rule {
        Rule::ModusPonens => {
            for t in tuples(inst.fillers.len(), 2) {
                if !inst.take() {
                    return Ok(());
                }
                let (p, q) = (inst.fillers[t[0]], inst.fillers[t[1]]);
                let premise = inst.add(&imp(inst.formula(p), inst.formula(q)))?;
                if inst.valid(p) && inst.valid(premise) {
                    record(inst, q, result);
                } else {
                    result.vacuous += 1;
                }
            }
        }
        Rule::KInference => {
            for a in inst.agents.clone() {
                for i in 0..inst.fillers.len() {
                    if !inst.take() {
                        return Ok(());
                    }
                    let p = inst.fillers[i];
                    if inst.valid(p) {
                        let c = inst.add(&k(&a, inst.formula(p)))?;
                        record(inst, c, result);
                    } else {
                        result.vacuous += 1;
                    }
                }
            }
        }
        Rule::Rk(n) => {
            for a in inst.agents.clone() {
                for t in tuples(inst.fillers.len(), n + 1) {
                    let premises: Vec<Formula> = t[..n].iter().map(|&i| inst.formula(inst.fillers[i])).collect();
                    let target = inst.formula(inst.fillers[t[n]]);
                    let covered: AtomSet = premises.iter().flat_map(Formula::atoms).collect();
                    if !target.atoms().is_subset(&covered) {
                        continue;
                    }
                    if !inst.take() {
                        return Ok(());
                    }
                    let premise = inst.add(&imp(Formula::conjunction(premises.clone()), target.clone()))?;
                    if inst.valid(premise) {
                        let known = Formula::conjunction(premises.into_iter().map(|p| k(&a, p)));
                        let c = inst.add(&imp(known, k(&a, target)))?;
                        record(inst, c, result);
                    } else {
                        result.vacuous += 1;
                    }
                }
            }
        }
    }
    Ok(())
}

fn suite_semantics(suite: SuiteName, model: ModelRef<'_>) -> Result<SemanticsKind> {
    match (suite, model) {
        (SuiteName::Hms, ModelRef::Klm(k)) => {
            k.base().require_equivalence()?;
            Ok(SemanticsKind::KlmL)
        }
        (SuiteName::Hms, ModelRef::Hms(_)) => Ok(SemanticsKind::Hms),
        (SuiteName::Lga, ModelRef::Klm(_)) => Ok(SemanticsKind::KlmLka),
        (SuiteName::Lga, ModelRef::Fh(s)) => {
            s.require_ka()?;
            let pp = s.check_pp();
            if !pp.holds {
                return Err(Error::Mismatch("the axiom suite needs FH models whose awareness is generated by atoms".into()));
            }
            Ok(SemanticsKind::FhLka)
        }
        (suite, _) => Err(Error::Mismatch(format!("suite {suite:?} does not apply to this model class"))),
    }
}

/// Instantiates every schema with all fillers from the depth-`inst_depth`
/// enumeration and all agent tuples, and checks validity; rules are
/// checked as validity preservation, model by model.
pub fn check_axiom_suite(models: &[ModelRef<'_>], suite: &AxiomSuite, inst_depth: usize) -> Result<AxiomReport> {
    run_schemas(models, suite.name, &suite.schemas, &suite.rules, inst_depth)
}

fn run_schemas(
    models: &[ModelRef<'_>],
    suite: SuiteName,
    schemas: &[Schema],
    rules: &[Rule],
    inst_depth: usize,
) -> Result<AxiomReport> {
    let mut report = AxiomReport {
        suite: format!("{suite:?}").to_lowercase(),
        depth: inst_depth,
        schemas: schemas
            .iter()
            .map(|s| SchemaResult { id: s.id.into(), name: s.name.into(), instances: 0, failed: 0, failures: Vec::new() })
            .collect(),
        rules: rules
            .iter()
            .map(|r| RuleResult { id: r.id(), checked: 0, vacuous: 0, failed: 0, failures: Vec::new() })
            .collect(),
        truncated: false,
    };
    for (i, &model) in models.iter().enumerate() {
        let kind = suite_semantics(suite, model)?;
        let bound = Bound::new(model, kind)?;
        let index = (models.len() > 1).then_some(i);
        let mut inst = Instantiator::new(bound.evaluator(), model, kind.language(), inst_depth, index)?;
        for (schema, result) in schemas.iter().zip(report.schemas.iter_mut()) {
            schema_pass(&mut inst, schema, result)?;
        }
        for (&rule, result) in rules.iter().zip(report.rules.iter_mut()) {
            rule_pass(&mut inst, rule, result)?;
        }
        report.truncated |= inst.truncated;
    }
    Ok(report)
}

/// Checks the derived theorems with depth-1 fillers.
pub fn derived_theorem_checks(models: &[ModelRef<'_>]) -> Result<AxiomReport> {
    let mut r = run_schemas(models, SuiteName::Hms, &derived_theorems(), &[], 1)?;
    r.suite = "derived".into();
    Ok(r)
}
