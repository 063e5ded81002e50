use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use awarekit::io::{model_to_string, parse_model, Model};
use awarekit::klm::{check_awareness_properties, LkaMode};
use awarekit::kripke::Vocab;
use awarekit::random::{random_formula, random_klm, random_klm_eq, Shape};
use awarekit::{parse, Agent, Atom, Formula, LanguageTag, ThreeValued};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names() -> (Vec<Atom>, Vec<Agent>) {
    (
        ["p", "q", "r"].iter().map(|s| Atom::new(*s).unwrap()).collect(),
        ["a", "b"].iter().map(|s| Agent::new(*s).unwrap()).collect(),
    )
}

fn has_defined_ops(f: &Formula) -> bool {
    match f {
        Formula::Top | Formula::Atom(_) => false,
        Formula::Not(g) | Formula::Know(_, g) => has_defined_ops(g),
        Formula::And(g, h) => has_defined_ops(g) || has_defined_ops(h),
        Formula::Aware(..) | Formula::ExplicitKnow(..) => true,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), lka in any::<bool>()) {
        let (atoms, agents) = names();
        let lang = if lka { LanguageTag::Lka } else { LanguageTag::L };
        let f = random_formula(&mut rng(seed), &atoms, &agents, 4, lang);
        prop_assert_eq!(parse(&f.to_string(), lang).unwrap(), f);
    }

    #[test]
    fn expansion_keeps_atoms(seed in any::<u64>()) {
        let (atoms, agents) = names();
        let mut r = rng(seed);
        let mut f = random_formula(&mut r, &atoms, &agents, 3, LanguageTag::Lka);
        if r.gen_bool(0.5) {
            f = Formula::explicit(&agents[0], f);
        }
        for lang in [LanguageTag::L, LanguageTag::Lka] {
            let g = f.expand_defined(lang);
            prop_assert_eq!(g.atoms(), f.atoms());
            prop_assert!(g.is_in(lang));
        }
        prop_assert!(!has_defined_ops(&f.expand_defined(LanguageTag::L)));
    }

    #[test]
    fn induced_maps_satisfy_d_and_ns(seed in any::<u64>()) {
        let k = random_klm(&mut rng(seed), Shape::default());
        let rep = check_awareness_properties(k.base(), &k.induced_pointwise().unwrap()).unwrap();
        prop_assert!(rep.all_hold(), "{:?}", rep);
    }

    #[test]
    fn awareness_map_is_idempotent_under_reflexivity(seed in any::<u64>()) {
        let k = random_klm_eq(&mut rng(seed), Shape::default());
        let base = k.base();
        for agent in base.agents() {
            for (w, x) in k.states().unwrap() {
                let once = k.awareness_image(agent, &base.world_id(w, x)).unwrap();
                let twice = k.awareness_image(agent, &once).unwrap();
                prop_assert_eq!(once, twice);
            }
        }
    }

    #[test]
    fn defined_awareness_matches_primitive_on_partitions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_klm_eq(&mut r, Shape::default());
        let base = k.base();
        let f = random_formula(&mut r, base.atoms(), base.agents(), 2, LanguageTag::L);
        let agent = &base.agents()[r.gen_range(0..base.agents().len())];
        let primitive = Formula::aware(agent, f.clone());
        let abbreviated = primitive.expand_defined(LanguageTag::L);
        for (w, x) in k.states().unwrap() {
            let wid = base.world_id(w, x);
            if !f.atoms().is_subset(&wid.vocabulary) {
                continue;
            }
            let a = k.eval_l(&wid, &abbreviated).unwrap();
            let b = k.eval_lka(&wid, &primitive, LkaMode::Guarded).unwrap();
            prop_assert_eq!(a, b, "{} at {}", primitive, wid);
        }
    }

    #[test]
    fn strict_mode_is_two_valued_and_extends_guarded(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_klm(&mut r, Shape::default());
        let base = k.base();
        let f = random_formula(&mut r, base.atoms(), base.agents(), 3, LanguageTag::Lka);
        let wid = base.world_id(r.gen_range(0..base.worlds().len()), Vocab(r.gen_range(0..=base.full_vocab().0)));
        let strict = k.eval_lka(&wid, &f, LkaMode::StrictTwoValued).unwrap();
        prop_assert!(strict.is_defined());
        let top = base.world_id(base.world_index(&wid.base).unwrap(), base.full_vocab());
        prop_assert_eq!(k.eval_lka(&top, &f, LkaMode::Guarded).unwrap(), k.eval_lka(&top, &f, LkaMode::StrictTwoValued).unwrap());
    }

    #[test]
    fn model_files_round_trip(seed in any::<u64>()) {
        let k = random_klm(&mut rng(seed), Shape::default());
        let text = model_to_string(&Model::Klm(k.clone()), None);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(model_to_string(&back, None), text);
        match back {
            Model::Klm(k2) => prop_assert_eq!(k2, k),
            other => prop_assert!(false, "loaded as {}", other.kind()),
        }
    }

    #[test]
    fn negation_flips_defined_verdicts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_klm(&mut r, Shape::default());
        let base = k.base();
        let f = random_formula(&mut r, base.atoms(), base.agents(), 3, LanguageTag::L);
        for (w, x) in k.states().unwrap() {
            let wid = base.world_id(w, x);
            let v = k.eval_l(&wid, &f).unwrap();
            let n = k.eval_l(&wid, &Formula::not(f.clone())).unwrap();
            prop_assert_eq!(n, v.negate());
            prop_assert_eq!(v == ThreeValued::Undefined, !f.atoms().is_subset(&wid.vocabulary));
        }
    }
}
