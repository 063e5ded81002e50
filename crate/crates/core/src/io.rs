//! JSON model files.
//!
//! A file is one object with an optional `"kind"` (`kripke`, `klm`, `hms`
//! or `fh`) and an optional free-text `"comment"`. Without a kind the
//! class is inferred from the keys present: `spaces` means HMS,
//! `awareness_sets` FH, `awareness` or `pointwise_awareness` a Kripke
//! lattice model, anything else a plain Kripke model.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fh::{FhData, FhModel};
use crate::formula::{Agent, Atom, AtomSet};
use crate::hms::{HmsData, HmsModel};
use crate::fh::PP_SURROGATE_DEPTH;
use crate::hms::{validate_frame, UnawarenessFrame};
use crate::klm::{canonicalize, check_awareness_properties, AwarenessAssignment, KripkeLatticeModel, PointwiseAwarenessMap, PropertyVerdict};
use crate::kripke::{validate_kripke, KripkeData, KripkeModel, WorldId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Kripke,
    Klm,
    Hms,
    Fh,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Kripke => "kripke",
            ModelKind::Klm => "klm",
            ModelKind::Hms => "hms",
            ModelKind::Fh => "fh",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kripke" => Ok(ModelKind::Kripke),
            "klm" => Ok(ModelKind::Klm),
            "hms" => Ok(ModelKind::Hms),
            "fh" => Ok(ModelKind::Fh),
            other => Err(Error::InvalidModel(vec![format!("unknown model kind `{other}`")])),
        }
    }
}

/// One `π_a(world_from) = world_to` entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointwiseEntry {
    pub world: String,
    pub from: Vec<Atom>,
    pub to: Vec<Atom>,
}

/// A Kripke lattice model as written in model files: awareness either as
/// atom sets per world or as an explicit map over `Ω_L`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlmData {
    #[serde(flatten)]
    pub kripke: KripkeData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub awareness: Option<BTreeMap<Agent, BTreeMap<String, Vec<Atom>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointwise_awareness: Option<BTreeMap<Agent, Vec<PointwiseEntry>>>,
}

impl KlmData {
    pub fn from_model(k: &KripkeLatticeModel) -> Self {
        let awareness = k
            .assignment()
            .into_iter()
            .map(|(a, m)| (a, m.into_iter().map(|(w, x)| (w, x.into_iter().collect())).collect()))
            .collect();
        KlmData { kripke: k.base().to_data(), awareness: Some(awareness), pointwise_awareness: None }
    }

    fn assignment(&self) -> Option<AwarenessAssignment> {
        self.awareness.as_ref().map(|aw| {
            aw.iter()
                .map(|(a, m)| (a.clone(), m.iter().map(|(w, x)| (w.clone(), x.iter().cloned().collect())).collect()))
                .collect()
        })
    }

    fn pointwise(&self) -> Result<Option<PointwiseAwarenessMap>> {
        let Some(pw) = &self.pointwise_awareness else { return Ok(None) };
        let mut maps = BTreeMap::new();
        for (agent, entries) in pw {
            let mut m = BTreeMap::new();
            for e in entries {
                let from: AtomSet = e.from.iter().cloned().collect();
                let to: AtomSet = e.to.iter().cloned().collect();
                let key = WorldId::new(e.world.clone(), from);
                if m.insert(key.clone(), WorldId::new(e.world.clone(), to)).is_some() {
                    return Err(Error::InvalidModel(vec![format!("duplicate awareness entry for {key}")]));
                }
            }
            maps.insert(agent.clone(), m);
        }
        Ok(Some(PointwiseAwarenessMap { maps }))
    }

    /// The awareness map as given, without requiring D, II or NS.
    pub fn awareness_map(&self, base: &KripkeModel) -> Result<PointwiseAwarenessMap> {
        match (self.assignment(), self.pointwise()?) {
            (Some(_), Some(_)) => {
                Err(Error::InvalidModel(vec!["give either `awareness` or `pointwise_awareness`, not both".into()]))
            }
            (Some(aw), None) => KripkeLatticeModel::new_unchecked(base.clone(), &aw)?.induced_pointwise(),
            (None, Some(pw)) => Ok(pw),
            (None, None) => Err(Error::InvalidModel(vec!["Kripke lattice model without awareness".into()])),
        }
    }

    pub fn to_model(&self) -> Result<KripkeLatticeModel> {
        let base = KripkeModel::from_data(&self.kripke)?;
        let assignment = match self.assignment() {
            Some(aw) if self.pointwise_awareness.is_none() => aw,
            _ => canonicalize(&base, &self.awareness_map(&base)?)?,
        };
        KripkeLatticeModel::new(base, &assignment)
    }
}

#[derive(Clone, Debug)]
pub enum Model {
    Kripke(KripkeModel),
    Klm(KripkeLatticeModel),
    Hms(HmsModel),
    Fh(FhModel),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Kripke(_) => ModelKind::Kripke,
            Model::Klm(_) => ModelKind::Klm,
            Model::Hms(_) => ModelKind::Hms,
            Model::Fh(_) => ModelKind::Fh,
        }
    }

    /// The model as a Kripke lattice model; a plain Kripke model gets full
    /// awareness everywhere.
    pub fn into_klm(self) -> Result<KripkeLatticeModel> {
        match self {
            Model::Klm(k) => Ok(k),
            Model::Kripke(k) => {
                let all = k.atom_set();
                let assignment = k
                    .agents()
                    .iter()
                    .map(|a| (a.clone(), k.worlds().iter().map(|w| (w.clone(), all.clone())).collect()))
                    .collect();
                KripkeLatticeModel::new(k, &assignment)
            }
            other => Err(Error::Mismatch(format!("expected a Kripke lattice model, found {}", other.kind()))),
        }
    }

    pub fn to_json(&self) -> Value {
        let body = match self {
            Model::Kripke(k) => serde_json::to_value(k.to_data()),
            Model::Klm(k) => serde_json::to_value(KlmData::from_model(k)),
            Model::Hms(m) => serde_json::to_value(m.data()),
            Model::Fh(s) => serde_json::to_value(s.to_data()),
        };
        let mut obj = match body.expect("model data serializes") {
            Value::Object(o) => o,
            _ => Map::new(),
        };
        obj.insert("kind".into(), Value::String(self.kind().name().into()));
        Value::Object(obj)
    }
}

fn infer_kind(obj: &Map<String, Value>) -> ModelKind {
    if obj.contains_key("spaces") {
        ModelKind::Hms
    } else if obj.contains_key("awareness_sets") {
        ModelKind::Fh
    } else if obj.contains_key("awareness") || obj.contains_key("pointwise_awareness") {
        ModelKind::Klm
    } else {
        ModelKind::Kripke
    }
}

pub fn model_from_value(value: Value) -> Result<Model> {
    let Value::Object(mut obj) = value else {
        return Err(Error::InvalidModel(vec!["model file must hold a JSON object".into()]));
    };
    obj.remove("comment");
    let kind = match obj.remove("kind") {
        Some(Value::String(s)) => s.parse()?,
        Some(_) => return Err(Error::InvalidModel(vec!["`kind` must be a string".into()])),
        None => infer_kind(&obj),
    };
    let value = Value::Object(obj);
    Ok(match kind {
        ModelKind::Kripke => Model::Kripke(KripkeModel::from_data(&serde_json::from_value::<KripkeData>(value)?)?),
        ModelKind::Klm => Model::Klm(serde_json::from_value::<KlmData>(value)?.to_model()?),
        ModelKind::Hms => Model::Hms(HmsModel::from_data(&serde_json::from_value::<HmsData>(value)?)?),
        ModelKind::Fh => Model::Fh(FhModel::from_data(&serde_json::from_value::<FhData>(value)?)?),
    })
}

pub fn parse_model(text: &str) -> Result<Model> {
    model_from_value(serde_json::from_str(text)?)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    parse_model(&std::fs::read_to_string(path)?)
}

/// Outcome of checking a model file against the defining properties of its
/// class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub kind: String,
    pub checks: Vec<NamedVerdict>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedVerdict {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    fn push(&mut self, name: &str, v: &PropertyVerdict) {
        self.checks.push(NamedVerdict { name: name.into(), holds: v.holds, witness: v.witness.clone() });
    }
}

fn relation_notes(k: &KripkeModel) -> Vec<String> {
    k.relation_properties()
        .into_iter()
        .map(|(a, p)| {
            format!(
                "relation {a}: reflexive {}, symmetric {}, transitive {}, equivalence {}",
                p.reflexive, p.symmetric, p.transitive, p.equivalence
            )
        })
        .collect()
}

/// Checks a model file. Unlike [`model_from_value`] this reports
/// property failures instead of refusing the model; structural defects
/// (unknown names, malformed JSON) are still errors.
pub fn check_model_value(value: Value) -> Result<CheckReport> {
    let Value::Object(mut obj) = value else {
        return Err(Error::InvalidModel(vec!["model file must hold a JSON object".into()]));
    };
    obj.remove("comment");
    let kind = match obj.remove("kind") {
        Some(Value::String(s)) => s.parse()?,
        Some(_) => return Err(Error::InvalidModel(vec!["`kind` must be a string".into()])),
        None => infer_kind(&obj),
    };
    let value = Value::Object(obj);
    let mut report = CheckReport { kind: kind.name().into(), checks: Vec::new(), notes: Vec::new() };
    match kind {
        ModelKind::Kripke | ModelKind::Klm => {
            let data: KlmData = serde_json::from_value(value)?;
            let v = validate_kripke(&data.kripke);
            let witness = (!v.is_valid()).then(|| v.violations.join("; "));
            report.push("kripke", &PropertyVerdict { holds: witness.is_none(), witness });
            if !v.is_valid() {
                return Ok(report);
            }
            let base = KripkeModel::from_data(&data.kripke)?;
            report.notes = relation_notes(&base);
            if kind == ModelKind::Klm {
                let aw = check_awareness_properties(&base, &data.awareness_map(&base)?)?;
                report.push("D", &aw.downwards);
                report.push("II", &aw.introspective_idempotence);
                report.push("NS", &aw.no_surprises);
            }
        }
        ModelKind::Hms => {
            let data: HmsData = serde_json::from_value(value)?;
            let frame = UnawarenessFrame::from_data(&data)?;
            let fr = validate_frame(&frame);
            for (name, v) in fr.checks() {
                report.push(name, v);
            }
            if fr.all_hold() {
                HmsModel::from_data(&data)?;
            }
        }
        ModelKind::Fh => {
            let s = FhModel::from_data(&serde_json::from_value::<FhData>(value)?)?;
            report.notes = relation_notes(s.base());
            let pp = s.check_pp();
            let witness = pp.witnesses.first().map(|w| {
                if w.in_set {
                    let missing: Vec<&str> = w.missing_atoms.iter().map(|p| p.as_str()).collect();
                    format!("agent {}, world {}: {} is in the set, atoms {:?} are not", w.agent, w.world, w.formula, missing)
                } else {
                    format!("agent {}, world {}: {} is missing although its atoms are in the set", w.agent, w.world, w.formula)
                }
            });
            report.push("PP", &PropertyVerdict { holds: pp.holds, witness });
            if pp.bounded {
                report.notes.push(format!("PP checked against formulas up to depth {PP_SURROGATE_DEPTH}"));
            }
            let ka = s.check_ka();
            let witness = ka.witnesses.first().map(|w| format!("agent {}: {} -> {}", w.agent, w.from, w.to));
            report.push("KA", &PropertyVerdict { holds: ka.holds, witness });
        }
    }
    Ok(report)
}

pub fn check_model(path: impl AsRef<Path>) -> Result<CheckReport> {
    check_model_value(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Canonical text of a model: keys sorted, two-space indentation, a
/// trailing newline.
pub fn model_to_string(model: &Model, comment: Option<&str>) -> String {
    let mut value = model.to_json();
    if let (Some(c), Value::Object(obj)) = (comment, &mut value) {
        obj.insert("comment".into(), Value::String(c.into()));
    }
    let mut text = serde_json::to_string_pretty(&value).expect("json value serializes");
    text.push('\n');
    text
}

pub fn store_model(path: impl AsRef<Path>, model: &Model, comment: Option<&str>) -> Result<()> {
    std::fs::write(path, model_to_string(model, comment))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn kinds_are_inferred() {
        let klm = model_to_string(&Model::Klm(fixtures::trade()), None);
        let mut v: Value = serde_json::from_str(&klm).unwrap();
        v.as_object_mut().unwrap().remove("kind");
        assert_eq!(model_from_value(v).unwrap().kind(), ModelKind::Klm);
        let hms = serde_json::to_value(fixtures::three_space_hms_data()).unwrap();
        assert_eq!(model_from_value(hms).unwrap().kind(), ModelKind::Hms);
        let kr = serde_json::to_value(fixtures::trade_kripke_data()).unwrap();
        assert_eq!(model_from_value(kr).unwrap().kind(), ModelKind::Kripke);
        let fh = serde_json::to_value(fixtures::trade_fh().to_data()).unwrap();
        assert_eq!(model_from_value(fh).unwrap().kind(), ModelKind::Fh);
    }

    #[test]
    fn canonical_text_is_stable() {
        for m in [
            Model::Klm(fixtures::trade()),
            Model::Hms(fixtures::three_space_hms()),
            Model::Fh(fixtures::trade_fh()),
            Model::Kripke(fixtures::trade_kripke()),
        ] {
            let text = model_to_string(&m, Some("note"));
            let again = model_to_string(&parse_model(&text).unwrap(), Some("note"));
            assert_eq!(text, again);
        }
    }

    #[test]
    fn pointwise_awareness_is_canonicalized() {
        let k = fixtures::trade();
        let pw = k.induced_pointwise().unwrap();
        let entries = pw
            .maps
            .iter()
            .map(|(a, m)| {
                let list = m
                    .iter()
                    .map(|(from, to)| PointwiseEntry {
                        world: from.base.clone(),
                        from: from.vocabulary.iter().cloned().collect(),
                        to: to.vocabulary.iter().cloned().collect(),
                    })
                    .collect();
                (a.clone(), list)
            })
            .collect();
        let data = KlmData { kripke: k.base().to_data(), awareness: None, pointwise_awareness: Some(entries) };
        assert_eq!(data.to_model().unwrap(), k);
    }

    #[test]
    fn checks_report_instead_of_refusing() {
        let mut v = serde_json::to_value(KlmData::from_model(&fixtures::trade())).unwrap();
        let r = check_model_value(v.clone()).unwrap();
        assert_eq!(r.kind, "klm");
        assert!(r.all_hold());
        assert_eq!(r.checks.len(), 4);
        v["awareness"]["b"]["w3"] = serde_json::json!([]);
        v["awareness"]["b"]["w2"] = serde_json::json!(["i", "l"]);
        assert!(model_from_value(v.clone()).is_err());
        let r = check_model_value(v).unwrap();
        let ii = r.checks.iter().find(|c| c.name == "II").unwrap();
        assert!(!ii.holds && ii.witness.is_some());

        let r = check_model_value(serde_json::to_value(fixtures::three_space_hms_data()).unwrap()).unwrap();
        assert_eq!((r.kind.as_str(), r.checks.len(), r.all_hold()), ("hms", 7, true));
        let r = check_model_value(serde_json::to_value(fixtures::trade_fh().to_data()).unwrap()).unwrap();
        assert!(r.all_hold());
        let r = check_model_value(serde_json::to_value(fixtures::trade_kripke_data()).unwrap()).unwrap();
        assert_eq!(r.checks.len(), 1);
        assert!(r.notes.iter().any(|n| n.contains("equivalence true")));
    }

    #[test]
    fn bad_files_are_rejected() {
        assert!(parse_model("[1,2]").is_err());
        assert!(parse_model("{\"kind\":\"nope\"}").is_err());
        assert!(parse_model("{\"kind\":\"klm\",\"atoms\":[],\"agents\":[],\"worlds\":[\"u\"]}").is_err());
        let plain = Model::Kripke(fixtures::trade_kripke()).into_klm().unwrap();
        assert_eq!(plain.aware_vocab(0, 1), plain.base().full_vocab());
    }
}
