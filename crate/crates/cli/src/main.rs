use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use awarekit::io::{check_model, load_model, store_model, Model};
use awarekit::klm::LkaMode;
use awarekit::transforms::{fh_transform, h_transform, k_transform, l_transform};
use awarekit::verify::{
    check_axiom_suite, check_equiv_fh_klm, check_l_equiv_hms_klm, check_l_equiv_klm_hms, hms_suite, lga_suite,
    AxiomReport, EquivalenceReport, FhOrKlm, ModelRef,
};
use awarekit::formula::AgentSet;
use awarekit::{enumerate_formulas, parse, Agent, Atom, AtomSet, Formula, LanguageTag};

#[derive(Parser)]
#[command(name = "awarekit", version, about = "Model checking for epistemic logics with awareness")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lang {
    #[value(name = "L")]
    L,
    #[value(name = "LKA")]
    Lka,
}

impl From<Lang> for LanguageTag {
    fn from(l: Lang) -> Self {
        match l {
            Lang::L => LanguageTag::L,
            Lang::Lka => LanguageTag::Lka,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// HMS model to Kripke lattice model.
    #[value(name = "L")]
    L,
    /// Partitional Kripke lattice model to HMS model.
    #[value(name = "H")]
    H,
    /// FH model to Kripke lattice model.
    #[value(name = "K")]
    K,
    /// Kripke lattice model to FH model.
    #[value(name = "FH")]
    Fh,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Hms,
    Lga,
}

#[derive(Clone, Copy, ValueEnum)]
enum Against {
    Hms,
    Fh,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file against the defining properties of its class.
    Check {
        #[arg(long)]
        model: PathBuf,
    },
    /// Evaluate a formula at one state.
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// State: `w@{p,q}` for a lattice world, bare `w` for the top copy,
        /// or an HMS state name.
        #[arg(long)]
        at: String,
        #[arg(long, value_enum, default_value = "L")]
        lang: Lang,
        /// Read LKA connectives classically instead of guarding them.
        #[arg(long)]
        strict_two_valued: bool,
        formula: String,
    },
    /// Transform a model into another class.
    Transform {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that a model and its transform satisfy the same formulas.
    Equiv {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value = "L")]
        lang: Lang,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Transform to compare a Kripke lattice model against.
        #[arg(long, value_enum)]
        against: Option<Against>,
    },
    /// Check an axiom system over a corpus of models.
    Axioms {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, num_args = 1.., required = true)]
        models: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Add the schema ¬K_aφ → K_a¬K_aφ to the HMS suite.
        #[arg(long)]
        include_5: bool,
    },
    /// List all formulas up to a depth.
    Enumerate {
        /// Take atoms and agents from this model.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        atoms: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        agents: Vec<String>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, value_enum, default_value = "L")]
        lang: Lang,
        /// Print only the number of formulas.
        #[arg(long)]
        count: bool,
    },
}

/// Whether every check passed; errors map to exit code 2.
type Verdict = Result<bool>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &PathBuf) -> Result<Model> {
    load_model(path).with_context(|| format!("loading {}", path.display()))
}

fn run(cli: &Cli) -> Verdict {
    match &cli.command {
        Command::Check { model } => check(cli.json, model),
        Command::Eval { model, at, lang, strict_two_valued, formula } => {
            eval(cli.json, model, at, (*lang).into(), *strict_two_valued, formula)
        }
        Command::Transform { kind, input, out } => transform(cli.json, *kind, input, out),
        Command::Equiv { model, lang, depth, against } => equiv(cli.json, model, (*lang).into(), *depth, *against),
        Command::Axioms { suite, models, depth, include_5 } => axioms(cli.json, *suite, models, *depth, *include_5),
        Command::Enumerate { model, atoms, agents, depth, lang, count } => {
            enumerate(model.as_ref(), atoms, agents, *depth, (*lang).into(), *count)
        }
    }
}

fn check(json: bool, path: &PathBuf) -> Verdict {
    let report = check_model(path).with_context(|| format!("checking {}", path.display()))?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{} model {}", report.kind, path.display());
        for c in &report.checks {
            let tag = if c.holds { "pass" } else { "FAIL" };
            match &c.witness {
                Some(w) => println!("  {tag} {}: {w}", c.name),
                None => println!("  {tag} {}", c.name),
            }
        }
        for n in &report.notes {
            println!("  note: {n}");
        }
    }
    Ok(report.all_hold())
}

fn eval(json: bool, path: &PathBuf, at: &str, lang: LanguageTag, strict: bool, text: &str) -> Verdict {
    // Abbreviations are always accepted and expanded for the chosen language.
    let f = parse(text, LanguageTag::Lka)?.expand_defined(lang);
    f.require(lang)?;
    let model = load(path)?;
    let value = match (model, lang) {
        (Model::Hms(m), LanguageTag::L) => m.eval_l_named(at, &f)?.to_string(),
        (Model::Hms(_), LanguageTag::Lka) => bail!("LKA has no semantics over HMS models"),
        (Model::Fh(s), lang) => {
            let world = s.base().parse_world(at)?;
            let v = match lang {
                LanguageTag::L => s.eval_l(&world.base, &f)?,
                LanguageTag::Lka => s.eval_lka(&world.base, &f)?,
            };
            (if v { "True" } else { "False" }).to_string()
        }
        (other, lang) => {
            let k = other.into_klm()?;
            let w = k.base().parse_world(at)?;
            match lang {
                LanguageTag::L => k.eval_l(&w, &f)?.to_string(),
                LanguageTag::Lka => {
                    let mode = if strict { LkaMode::StrictTwoValued } else { LkaMode::Guarded };
                    k.eval_lka(&w, &f, mode)?.to_string()
                }
            }
        }
    };
    if json {
        let out = serde_json::json!({ "formula": f.to_string(), "state": at, "value": value });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{value}");
    }
    Ok(true)
}

fn transform(json: bool, kind: Kind, input: &PathBuf, out: &PathBuf) -> Verdict {
    let model = load(input)?;
    let (result, note) = match (kind, model) {
        (Kind::L, Model::Hms(m)) => {
            let lt = l_transform(&m)?;
            let names: Vec<String> = lt
                .correspondence
                .entries
                .iter()
                .map(|(s, ws)| format!("{s} -> {}", ws.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")))
                .collect();
            (Model::Klm(lt.model), format!("state correspondence: {}", names.join("; ")))
        }
        (Kind::H, m @ (Model::Klm(_) | Model::Kripke(_))) => (Model::Hms(h_transform(&m.into_klm()?)?), String::new()),
        (Kind::K, Model::Fh(s)) => (Model::Klm(k_transform(&s)?), String::new()),
        (Kind::Fh, m @ (Model::Klm(_) | Model::Kripke(_))) => (Model::Fh(fh_transform(&m.into_klm()?)?), String::new()),
        (_, m) => bail!("transform does not accept a {} model", m.kind()),
    };
    let comment = format!("generated from {}", input.display());
    store_model(out, &result, Some(&comment)).with_context(|| format!("writing {}", out.display()))?;
    if json {
        let report = serde_json::json!({ "kind": "transform", "output": result.kind().name(), "path": out.display().to_string() });
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("wrote {} model to {}", result.kind(), out.display());
        if !note.is_empty() {
            println!("{note}");
        }
    }
    Ok(true)
}

fn print_equivalence(json: bool, what: &str, r: &EquivalenceReport) -> Result<()> {
    if json {
        println!("{}", r.to_report().to_json());
        return Ok(());
    }
    println!("{what}, depth {}: {} formulas, {} comparisons, {} disagreements", r.depth, r.formulas, r.comparisons, r.disagreements());
    if r.truncated {
        println!("  enumeration truncated at the instantiation cap");
    }
    if let Some(f) = &r.first_disagreement {
        println!("  first disagreement: {} at {}: {} vs {}", f.formula, f.state, f.left, f.right);
    }
    Ok(())
}

fn equiv(json: bool, path: &PathBuf, lang: LanguageTag, depth: usize, against: Option<Against>) -> Verdict {
    let model = load(path)?;
    let (what, report) = match model {
        Model::Hms(m) => {
            if lang == LanguageTag::Lka {
                bail!("LKA has no semantics over HMS models");
            }
            ("HMS model vs its L-transform", check_l_equiv_hms_klm(&m, depth)?)
        }
        Model::Fh(s) => ("FH model vs its K-transform", check_equiv_fh_klm(FhOrKlm::Fh(&s), lang, depth)?),
        other => {
            let k = other.into_klm()?;
            let against = against.unwrap_or(if lang == LanguageTag::L { Against::Hms } else { Against::Fh });
            match against {
                Against::Hms if lang == LanguageTag::Lka => bail!("LKA has no semantics over HMS models"),
                Against::Hms => ("Kripke lattice model vs its H-transform", check_l_equiv_klm_hms(&k, depth)?),
                Against::Fh => {
                    ("Kripke lattice model vs its FH-transform", check_equiv_fh_klm(FhOrKlm::Klm(&k), lang, depth)?)
                }
            }
        }
    };
    print_equivalence(json, what, &report)?;
    Ok(report.holds())
}

fn print_axioms(json: bool, r: &AxiomReport) -> Result<()> {
    if json {
        println!("{}", r.to_report().to_json());
        return Ok(());
    }
    println!("suite {}, instantiation depth {}", r.suite, r.depth);
    for s in &r.schemas {
        let tag = if s.failed == 0 { "valid" } else { "INVALID" };
        println!("  {tag} {} ({}): {} instances, {} failed", s.id, s.name, s.instances, s.failed);
        if let Some(f) = s.failures.first() {
            let model = f.model.map(|m| format!(" of model {m}")).unwrap_or_default();
            println!("    witness {} at {}{model}: {}", f.formula, f.state, f.left);
        }
    }
    for rule in &r.rules {
        let tag = if rule.failed == 0 { "preserved" } else { "BROKEN" };
        println!(
            "  {tag} {}: {} premise-valid instances, {} vacuous, {} failed",
            rule.id, rule.checked, rule.vacuous, rule.failed
        );
        if let Some(f) = rule.failures.first() {
            println!("    witness {} at {}: {}", f.formula, f.state, f.left);
        }
    }
    if r.truncated {
        println!("  instantiation truncated at the cap");
    }
    Ok(())
}

fn axioms(json: bool, suite: Suite, paths: &[PathBuf], depth: usize, include_5: bool) -> Verdict {
    let models = paths.iter().map(load).collect::<Result<Vec<_>>>()?;
    let models = models
        .into_iter()
        .map(|m| match m {
            Model::Kripke(_) => m.into_klm().map(Model::Klm).map_err(Into::into),
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
    let suite = match suite {
        Suite::Hms => hms_suite(include_5),
        Suite::Lga if include_5 => bail!("--include-5 applies to the hms suite"),
        Suite::Lga => lga_suite(),
    };
    let report = check_axiom_suite(&refs, &suite, depth)?;
    print_axioms(json, &report)?;
    Ok(report.all_pass())
}

fn enumerate(
    model: Option<&PathBuf>,
    atoms: &[String],
    agents: &[String],
    depth: usize,
    lang: LanguageTag,
    count: bool,
) -> Verdict {
    let (atoms, agents): (AtomSet, AgentSet) = match model {
        Some(path) => match load(path)? {
            Model::Hms(m) => (m.atom_set(), m.frame().agents().iter().cloned().collect()),
            Model::Fh(s) => (s.base().atom_set(), s.base().agents().iter().cloned().collect()),
            m => {
                let k = m.into_klm()?;
                (k.base().atom_set(), k.base().agents().iter().cloned().collect())
            }
        },
        None => (
            atoms.iter().map(Atom::new).collect::<awarekit::Result<_>>()?,
            agents.iter().map(Agent::new).collect::<awarekit::Result<_>>()?,
        ),
    };
    if atoms.is_empty() && agents.is_empty() {
        return Err(anyhow!("give --model or --atoms/--agents"));
    }
    let fs: Vec<Formula> = enumerate_formulas(&atoms, &agents, depth, lang);
    if count {
        println!("{}", fs.len());
    } else {
        for f in fs {
            println!("{f}");
        }
    }
    Ok(true)
}
