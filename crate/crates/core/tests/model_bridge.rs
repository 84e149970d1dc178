//! The translation's correctness properties, checked on seeded random inputs:
//! conforming graphs give models, models give faithful graphs, and path
//! evaluation agrees with role interpretation.

mod common;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use shaclcheck_core::dl::{check_model, interpret_role, Concept, Element, ModelCheck};
use shaclcheck_core::eval::{eval_path, is_faithful};
use shaclcheck_core::fragments::{classify, FragmentClass};
use shaclcheck_core::reasoner::{bounded_model_search, tableau_sat, TableauConfig};
use shaclcheck_core::shapes::PathExpr;
use shaclcheck_core::translation::{
    graph_assignment_from_model, model_from_assignment, specialize, tau_role, tau_shapes, Presence,
};
use shaclcheck_core::SymbolTable;

#[test]
fn conforming_graphs_translate_to_models() {
    let mut rng = StdRng::seed_from_u64(1);
    let mut found = 0;
    let mut paths_checked = 0;
    while found < 60 {
        let mut t = SymbolTable::new();
        let vocab = common::Vocabulary::general(&mut t);
        let shapes = vocab.shape_set(&mut rng, 2);
        let g = vocab.graph(&mut rng, 3, &mut t);
        let Some(sigma) = common::faithful_assignments(&g, &shapes).into_iter().next() else {
            continue;
        };
        found += 1;
        let model = model_from_assignment(&g, &sigma, &shapes).expect("faithful input");
        // Elements follow node order, and every node is an object.
        for (i, v) in g.nodes().iter().enumerate() {
            assert_eq!(model.objects()[v], Element(i as u32));
        }
        // Constants absent from the graph drop out of the knowledge base.
        let presence = Presence {
            objects: g.nodes().clone(),
            classes: None,
        };
        let kb = specialize(&tau_shapes(&shapes), &presence);
        assert_eq!(check_model(&model, &kb).unwrap(), ModelCheck::Holds);

        let position = |v| Element(g.nodes().iter().position(|w| *w == v).unwrap() as u32);
        for _ in 0..3 {
            let path = random_path(&mut rng, &vocab.props);
            let expected: std::collections::BTreeSet<_> = common::path_pairs(&g, &path)
                .into_iter()
                .map(|(a, b)| (position(a), position(b)))
                .collect();
            let via_eval: std::collections::BTreeSet<_> = eval_path(&g, &path)
                .into_iter()
                .map(|(a, b)| (position(a), position(b)))
                .collect();
            assert_eq!(via_eval, expected);
            if path_mentions_only(&path, &shapes.properties()) {
                assert_eq!(
                    interpret_role(&model, &tau_role(&path)).unwrap(),
                    expected,
                    "{path:?}"
                );
                paths_checked += 1;
            }
        }
    }
    assert!(paths_checked > 0);
}

fn random_path(rng: &mut StdRng, props: &[shaclcheck_core::PropertyId]) -> PathExpr {
    let p = PathExpr::Prop(props[rng.gen_range(0..props.len())]);
    match rng.gen_range(0..4) {
        0 => PathExpr::inverse(p),
        1 => PathExpr::seq(p, random_path(rng, props)),
        _ => p,
    }
}

fn path_mentions_only(
    path: &PathExpr,
    allowed: &std::collections::BTreeSet<shaclcheck_core::PropertyId>,
) -> bool {
    let mut used = std::collections::BTreeSet::new();
    path.properties(&mut used);
    used.is_subset(allowed)
}

#[test]
fn reasoner_models_translate_to_faithful_graphs() {
    let mut rng = StdRng::seed_from_u64(2);
    let mut models = 0;
    for round in 0..60 {
        let mut t = SymbolTable::new();
        let vocab = if round % 2 == 0 {
            common::Vocabulary::no_inverse(&mut t)
        } else {
            common::Vocabulary::general(&mut t)
        };
        let shapes = vocab.shape_set(&mut rng, 2);
        let kb = tau_shapes(&shapes);
        let goal = Concept::and(
            Concept::shape(vocab.shapes[0]),
            Concept::not(Concept::shape(vocab.shapes[1])),
        );
        let mut found = Vec::new();
        if let Some(m) = bounded_model_search(&kb, &goal, 3).unwrap() {
            found.push(m);
        }
        if classify(&shapes).class == FragmentClass::LNoInv {
            if let Some(m) = tableau_sat(&kb, &goal, TableauConfig::default())
                .unwrap()
                .model
            {
                found.push(m);
            }
        }
        for m in found {
            let (g, sigma) = graph_assignment_from_model(&m, &shapes, &mut t).unwrap();
            assert!(is_faithful(&g, &shapes, &sigma).unwrap());
            assert!(common::faithful(&g, &shapes, &sigma));
            models += 1;
        }
    }
    assert!(models >= 20, "only {models} models produced");
}
