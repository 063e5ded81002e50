//! Python bindings. Models cross the boundary as JSON strings in the same
//! format as model files; reports come back as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use awarekit::io::{check_model_value, model_to_string, parse_model, Model};
use awarekit::klm::LkaMode;
use awarekit::transforms::{fh_transform, h_transform, k_transform, l_transform};
use awarekit::verify::{
    check_axiom_suite, check_equiv_fh_klm, check_l_equiv_hms_klm, check_l_equiv_klm_hms, hms_suite, lga_suite,
    FhOrKlm, ModelRef,
};
use awarekit::{parse, Error, LanguageTag, Result};

fn lang(name: &str) -> Result<LanguageTag> {
    match name {
        "L" => Ok(LanguageTag::L),
        "LKA" => Ok(LanguageTag::Lka),
        other => Err(Error::Mismatch(format!("unknown language {other:?}"))),
    }
}

fn formula(text: &str, tag: LanguageTag) -> Result<awarekit::Formula> {
    let f = parse(text, LanguageTag::Lka)?.expand_defined(tag);
    f.require(tag)?;
    Ok(f)
}

pub fn normalize_formula(text: &str, language: &str) -> Result<String> {
    Ok(formula(text, lang(language)?)?.to_string())
}

pub fn check_json(model: &str) -> Result<String> {
    let report = check_model_value(serde_json::from_str(model)?)?;
    Ok(serde_json::to_string(&report)?)
}

pub fn evaluate_json(model: &str, at: &str, text: &str, language: &str, strict: bool) -> Result<String> {
    let tag = lang(language)?;
    let f = formula(text, tag)?;
    let value = match (parse_model(model)?, tag) {
        (Model::Hms(m), LanguageTag::L) => m.eval_l_named(at, &f)?.to_string(),
        (Model::Hms(_), LanguageTag::Lka) => {
            return Err(Error::Mismatch("LKA has no semantics over HMS models".into()))
        }
        (Model::Fh(s), tag) => {
            let w = s.base().parse_world(at)?;
            let v = match tag {
                LanguageTag::L => s.eval_l(&w.base, &f)?,
                LanguageTag::Lka => s.eval_lka(&w.base, &f)?,
            };
            (if v { "True" } else { "False" }).to_string()
        }
        (other, tag) => {
            let k = other.into_klm()?;
            let w = k.base().parse_world(at)?;
            match tag {
                LanguageTag::L => k.eval_l(&w, &f)?.to_string(),
                LanguageTag::Lka => {
                    let mode = if strict { LkaMode::StrictTwoValued } else { LkaMode::Guarded };
                    k.eval_lka(&w, &f, mode)?.to_string()
                }
            }
        }
    };
    Ok(value)
}

pub fn transform_json(model: &str, kind: &str) -> Result<String> {
    let out = match (kind, parse_model(model)?) {
        ("L", Model::Hms(m)) => Model::Klm(l_transform(&m)?.model),
        ("H", m @ (Model::Klm(_) | Model::Kripke(_))) => Model::Hms(h_transform(&m.into_klm()?)?),
        ("K", Model::Fh(s)) => Model::Klm(k_transform(&s)?),
        ("FH", m @ (Model::Klm(_) | Model::Kripke(_))) => Model::Fh(fh_transform(&m.into_klm()?)?),
        (kind, m) => return Err(Error::Mismatch(format!("transform {kind} does not accept a {} model", m.kind()))),
    };
    Ok(model_to_string(&out, None))
}

pub fn equiv_json(model: &str, language: &str, depth: usize) -> Result<String> {
    let tag = lang(language)?;
    let report = match parse_model(model)? {
        Model::Hms(_) if tag == LanguageTag::Lka => {
            return Err(Error::Mismatch("LKA has no semantics over HMS models".into()))
        }
        Model::Hms(m) => check_l_equiv_hms_klm(&m, depth)?,
        Model::Fh(s) => check_equiv_fh_klm(FhOrKlm::Fh(&s), tag, depth)?,
        other => {
            let k = other.into_klm()?;
            match tag {
                LanguageTag::L => check_l_equiv_klm_hms(&k, depth)?,
                LanguageTag::Lka => check_equiv_fh_klm(FhOrKlm::Klm(&k), tag, depth)?,
            }
        }
    };
    Ok(report.to_report().to_json())
}

pub fn axioms_json(models: &[String], suite: &str, depth: usize, include_5: bool) -> Result<String> {
    let models = models
        .iter()
        .map(|text| match parse_model(text)? {
            m @ Model::Kripke(_) => m.into_klm().map(Model::Klm),
            m => Ok(m),
        })
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<ModelRef> = models
        .iter()
        .map(|m| match m {
            Model::Klm(k) => ModelRef::Klm(k),
            Model::Hms(h) => ModelRef::Hms(h),
            Model::Fh(s) => ModelRef::Fh(s),
            Model::Kripke(_) => unreachable!("converted above"),
        })
        .collect();
    let suite = match (suite, include_5) {
        ("hms", _) => hms_suite(include_5),
        ("lga", false) => lga_suite(),
        ("lga", true) => return Err(Error::Mismatch("include_5 applies to the hms suite".into())),
        (other, _) => return Err(Error::Mismatch(format!("unknown suite {other:?}"))),
    };
    Ok(check_axiom_suite(&refs, &suite, depth)?.to_report().to_json())
}

fn py(r: Result<String>) -> PyResult<String> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Parse a formula and print it in canonical form, expanding abbreviations
/// that `language` lacks.
#[pyfunction]
#[pyo3(signature = (text, language = "LKA"))]
fn normalize(text: &str, language: &str) -> PyResult<String> {
    py(normalize_formula(text, language))
}

/// Check a model against the defining properties of its class.
#[pyfunction]
fn check(model: &str) -> PyResult<String> {
    py(check_json(model))
}

/// Evaluate a formula at a state; returns "True", "False" or "Undefined".
#[pyfunction]
#[pyo3(signature = (model, at, formula, language = "L", strict_two_valued = false))]
fn evaluate(model: &str, at: &str, formula: &str, language: &str, strict_two_valued: bool) -> PyResult<String> {
    py(evaluate_json(model, at, formula, language, strict_two_valued))
}

/// Transform a model; `kind` is one of "L", "H", "K", "FH".
#[pyfunction]
fn transform(model: &str, kind: &str) -> PyResult<String> {
    py(transform_json(model, kind))
}

#[pyfunction]
#[pyo3(signature = (model, language = "L", depth = 2))]
fn equiv(model: &str, language: &str, depth: usize) -> PyResult<String> {
    py(equiv_json(model, language, depth))
}

#[pyfunction]
#[pyo3(signature = (models, suite = "hms", depth = 1, include_5 = false))]
fn axioms(models: Vec<String>, suite: &str, depth: usize, include_5: bool) -> PyResult<String> {
    py(axioms_json(&models, suite, depth, include_5))
}

#[pymodule(name = "awarekit")]
fn awarekit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(transform, m)?)?;
    m.add_function(wrap_pyfunction!(equiv, m)?)?;
    m.add_function(wrap_pyfunction!(axioms, m)?)?;
    Ok(())
}
