//! Differential testing of the constraint interpreter against the naive
//! reference walker, plus print→parse structural identity over random
//! trees.

use umlprof_core::constraint::{evaluate, parse_constraint, pretty_print};
use umlprof_core::model::{resolve, ProfileRegistry};
use umlprof_core::testutil::{gen_expr, gen_model, naive_eval, values_agree, TestRng};

#[test]
fn two_hundred_random_trees_survive_print_then_parse() {
    let mut rng = TestRng::new(0xA57);
    for index in 0..200 {
        let expr = gen_expr(&mut rng, 4);
        let printed = pretty_print(&expr);
        let reparsed = parse_constraint(&printed)
            .unwrap_or_else(|e| panic!("tree {index} printed unparsable text {printed:?}: {e}"));
        assert_eq!(reparsed, expr, "tree {index} reshaped through {printed:?}");
    }
}

#[test]
fn interpreter_agrees_with_reference_on_random_pairs() {
    let mut rng = TestRng::new(0xD1CE);
    let registry = ProfileRegistry::new();
    let mut checked = 0;
    for _ in 0..60 {
        let model = gen_model(&mut rng);
        let resolved = resolve(&model, &registry);
        let expr = gen_expr(&mut rng, 4);
        for element in &model.elements {
            let fast = evaluate(&expr, &element.id, &resolved);
            let slow = naive_eval(&expr, &element.id, &resolved);
            assert!(
                values_agree(&fast, &slow),
                "divergence on {} over element {}:\n  impl:   {fast:?}\n  oracle: {slow:?}",
                pretty_print(&expr),
                element.id
            );
            checked += 1;
        }
    }
    assert!(checked >= 50, "only {checked} pairs exercised");
}

#[test]
fn interpreter_agrees_with_reference_on_handpicked_sources() {
    let registry = ProfileRegistry::new();
    let mut rng = TestRng::new(7);
    let model = gen_model(&mut rng);
    let resolved = resolve(&model, &registry);
    for source in [
        "self.keywords->size() >= 1",
        "self.nav('image')->isEmpty()",
        "self.items->forAll(v0 | v0.name <> '')",
        "self.items->exists(v0 | v0.metaclass = 'UMLClass')",
        "1/0 = 1 or true",
        "not self.name = 'x' implies self.attributes->notEmpty()",
        "self.parts->select(v0 | v0.stereotypes->isEmpty())->size() * 2 >= 0",
        "-3 + 4.5 < 2.0",
        "'abc' <= 'abd'",
    ] {
        let expr = parse_constraint(source).unwrap();
        for element in &model.elements {
            let fast = evaluate(&expr, &element.id, &resolved);
            let slow = naive_eval(&expr, &element.id, &resolved);
            assert!(
                values_agree(&fast, &slow),
                "divergence on {source} over {}: {fast:?} vs {slow:?}",
                element.id
            );
        }
    }
}
