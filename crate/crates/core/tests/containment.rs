mod common;

use rand::rngs::StdRng;
use rand::SeedableRng;

use shaclcheck_core::dl::Concept;
use shaclcheck_core::eval::is_faithful;
use shaclcheck_core::fragments::{classify, FragmentClass};
use shaclcheck_core::io::{parse_constraint, parse_kb, parse_shapes};
use shaclcheck_core::reasoner::{
    bounded_model_search, decide_containment, find_counterexample, ContainmentOptions,
    ContainmentVerdict, Guarantee, Provenance,
};
use shaclcheck_core::shapes::{Constraint, Shape, ShapeSet, TargetQuery};
use shaclcheck_core::translation::encode_gci;
use shaclcheck_core::SymbolTable;

const S1: &str = include_str!("../../cli/tests/data/s1.shapes");

fn verdict(src: &str, sub: &str, sup: &str, options: ContainmentOptions) -> ContainmentVerdict {
    let mut t = SymbolTable::new();
    let shapes = parse_shapes(src, &mut t).unwrap().shapes;
    let (a, b) = (t.lookup_shape(sub).unwrap(), t.lookup_shape(sup).unwrap());
    decide_containment(&shapes, a, b, options, &mut t).unwrap()
}

#[test]
fn cubist_is_not_a_painter() {
    let mut t = SymbolTable::new();
    let shapes = parse_shapes(S1, &mut t).unwrap().shapes;
    let (cubist, painter) = (
        t.lookup_shape("CubistShape").unwrap(),
        t.lookup_shape("PainterShape").unwrap(),
    );
    let options = ContainmentOptions {
        bound: 5,
        ..Default::default()
    };
    let ContainmentVerdict::NotContained(cex) =
        decide_containment(&shapes, cubist, painter, options, &mut t).unwrap()
    else {
        panic!("expected a counterexample");
    };
    assert!(is_faithful(&cex.graph, &shapes, &cex.assignment).unwrap());
    assert!(common::faithful(&cex.graph, &shapes, &cex.assignment));
    assert!(cex.assignment.has(cex.witness, cubist));
    assert!(!cex.assignment.has(cex.witness, painter));
    assert_eq!(cex.graph.nodes().len(), 3);
    assert_eq!(cex.graph.triples().len(), 2);
}

#[test]
fn s1_queries_outside_the_inverse_free_fragment() {
    let opts = ContainmentOptions::default();
    assert!(matches!(
        verdict(S1, "PainterShape", "PaintingShape", opts),
        ContainmentVerdict::NotContained(_)
    ));
    assert!(matches!(
        verdict(S1, "PaintingShape", "CubistShape", opts),
        ContainmentVerdict::NotContained(_)
    ));
    assert_eq!(
        verdict(S1, "PaintingShape", "PaintingShape", opts),
        ContainmentVerdict::Contained {
            guarantee: Guarantee::Complete,
            provenance: Provenance::Reflexive
        }
    );
}

#[test]
fn counting_is_decided_by_the_tableau() {
    let src = "(shape Two (target none) (constraint (>= 2 p top)))
               (shape One (target none) (constraint (>= 1 p top)))";
    let opts = ContainmentOptions::default();
    assert_eq!(
        verdict(src, "Two", "One", opts),
        ContainmentVerdict::Contained {
            guarantee: Guarantee::Complete,
            provenance: Provenance::Tableau
        }
    );
    let ContainmentVerdict::NotContained(cex) = verdict(src, "One", "Two", opts) else {
        panic!()
    };
    assert_eq!(cex.graph.nodes().len(), 2);
}

#[test]
fn unknown_and_assumed_entailment_outside_the_fragment() {
    // A novel painting starts an influence chain in which nothing is
    // influenced twice; only an infinite graph has one.
    let src = "(shape Painting (target none)
                 (constraint (and (exists influences (ref Painting)) (<= 1 (inv influences) top))))
               (shape Novel (target none) (constraint (and (ref Painting) (<= 0 (inv influences) top))))
               (shape Nothing (target none) (constraint (not top)))";
    let opts = ContainmentOptions {
        bound: 4,
        ..Default::default()
    };
    assert_eq!(
        verdict(src, "Novel", "Nothing", opts),
        ContainmentVerdict::Unknown { bound: 4 }
    );
    let assumed = ContainmentOptions {
        assume_entailed: true,
        ..opts
    };
    assert_eq!(
        verdict(src, "Novel", "Nothing", assumed),
        ContainmentVerdict::Contained {
            guarantee: Guarantee::SoundOnly,
            provenance: Provenance::ExternalReasoner
        }
    );
    // A refutable query never turns into a sound-only answer.
    assert!(matches!(
        verdict(src, "Painting", "Novel", assumed),
        ContainmentVerdict::NotContained(_)
    ));
}

#[test]
fn refutation_only_search() {
    let mut t = SymbolTable::new();
    let shapes = parse_shapes(S1, &mut t).unwrap().shapes;
    let (cubist, painter) = (
        t.lookup_shape("CubistShape").unwrap(),
        t.lookup_shape("PainterShape").unwrap(),
    );
    let cex = find_counterexample(&shapes, cubist, painter, 3, &mut t)
        .unwrap()
        .unwrap();
    assert!(common::faithful(&cex.graph, &shapes, &cex.assignment));
    // With room for one node only, cubism has to be its own creator and style.
    let tiny = find_counterexample(&shapes, cubist, painter, 1, &mut t)
        .unwrap()
        .unwrap();
    assert_eq!(tiny.graph.nodes().len(), 1);
    assert_eq!(t.node_name(tiny.witness), "cubism");
    assert!(common::faithful(&tiny.graph, &shapes, &tiny.assignment));
    assert!(find_counterexample(&shapes, cubist, cubist, 4, &mut t)
        .unwrap()
        .is_none());
}

#[test]
fn gci_encoding() {
    let mut t = SymbolTable::new();
    let ambient = ShapeSet::default();
    let c = parse_constraint("(>= 2 p top)", &ambient, &mut t).unwrap();
    let d = parse_constraint("(>= 1 p top)", &ambient, &mut t).unwrap();
    let enc = encode_gci(&ambient, c, d, &mut t).unwrap();
    let opts = ContainmentOptions::default();
    assert!(matches!(
        decide_containment(&enc.shapes, enc.sub, enc.sup, opts, &mut t).unwrap(),
        ContainmentVerdict::Contained {
            guarantee: Guarantee::Complete,
            ..
        }
    ));

    let c = parse_constraint("top", &ambient, &mut t).unwrap();
    let d = parse_constraint("(node v)", &ambient, &mut t).unwrap();
    let enc = encode_gci(&ambient, c, d, &mut t).unwrap();
    let ContainmentVerdict::NotContained(cex) =
        decide_containment(&enc.shapes, enc.sub, enc.sup, opts, &mut t).unwrap()
    else {
        panic!("top is not contained in a single node");
    };
    assert_eq!(cex.graph.nodes().len(), 2);
    assert!(common::faithful(&cex.graph, &enc.shapes, &cex.assignment));
}

#[test]
fn infinite_painting_chain_has_no_finite_model() {
    let mut t = SymbolTable::new();
    let kb = parse_kb(
        "shapes:
         classes: Painting, NovelPainting
         properties: influences
         objects:
         ≥1 influences.Painting ⊓ ≤1 influences⁻.⊤ ≡ Painting
         Painting ⊓ ≤0 influences⁻.⊤ ≡ NovelPainting",
        &mut t,
    )
    .unwrap();
    let novel = Concept::class(t.lookup_node("NovelPainting").unwrap());
    assert_eq!(bounded_model_search(&kb, &novel, 5).unwrap(), None);
    let painting = Concept::class(t.lookup_node("Painting").unwrap());
    assert!(bounded_model_search(&kb, &painting, 1).unwrap().is_some());
}

#[test]
fn reflexivity_and_top_on_random_sets() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..40 {
        let mut t = SymbolTable::new();
        let vocab = common::Vocabulary::general(&mut t);
        let shapes = vocab.shape_set(&mut rng, 2);
        let top = t.shape("TopShape");
        let with_top = shapes
            .extended([Shape::new(top, Constraint::Top, TargetQuery::None)])
            .unwrap();
        for s in shapes.names() {
            let opts = ContainmentOptions::default();
            assert!(matches!(
                decide_containment(&with_top, s, s, opts, &mut t).unwrap(),
                ContainmentVerdict::Contained {
                    guarantee: Guarantee::Complete,
                    ..
                }
            ));
            assert!(matches!(
                decide_containment(&with_top, s, top, opts, &mut t).unwrap(),
                ContainmentVerdict::Contained {
                    guarantee: Guarantee::Complete,
                    ..
                }
            ));
        }
    }
}

#[test]
fn inverse_free_verdicts_match_the_oracle() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 25 {
        let mut t = SymbolTable::new();
        let vocab = common::Vocabulary::no_inverse(&mut t);
        let shapes = vocab.shape_set(&mut rng, 2);
        assert_eq!(classify(&shapes).class, FragmentClass::LNoInv);
        let (a, b) = (vocab.shapes[0], vocab.shapes[1]);
        let got = decide_containment(&shapes, a, b, ContainmentOptions::default(), &mut t).unwrap();
        let oracle = common::oracle_counterexample(&shapes, a, b, &vocab.props, 3, &mut t);
        match got {
            ContainmentVerdict::Contained { .. } => {
                assert!(oracle.is_none(), "oracle refutes {shapes:?}")
            }
            ContainmentVerdict::NotContained(cex) => {
                assert!(common::faithful(&cex.graph, &shapes, &cex.assignment));
                assert!(oracle.is_some() || cex.graph.nodes().len() > 3);
            }
            ContainmentVerdict::Unknown { .. } => panic!("inverse-free query left open"),
        }
        checked += 1;
    }
}
