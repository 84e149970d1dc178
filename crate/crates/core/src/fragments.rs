//! Language fragments and the guarantees they unlock.

use std::fmt;

use crate::shapes::{Constraint, PathExpr, ShapeSet, TargetQuery};
use crate::symbols::ShapeId;

/// Ordered from tightest to loosest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FragmentClass {
    /// No inverse or composed paths and no `objectsOf` targets.
    LNoInv,
    /// Inverse and composed paths only under `≥1`.
    LRestr,
    LFull,
}

impl FragmentClass {
    pub fn label(self) -> &'static str {
        match self {
            FragmentClass::LNoInv => "L-no-inv",
            FragmentClass::LRestr => "L-restricted",
            FragmentClass::LFull => "L",
        }
    }
}

impl fmt::Display for FragmentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construct {
    InversePath,
    SequencePath,
    ObjectsOfTarget,
    /// `≥n` with `n ≥ 2` over a path that is not a bare property.
    CountingOverComplexPath,
}

impl fmt::Display for Construct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construct::InversePath => "inverse path",
            Construct::SequencePath => "sequence path",
            Construct::ObjectsOfTarget => "objectsOf target",
            Construct::CountingOverComplexPath => "counting over a non-atomic path",
        })
    }
}

/// Why a tighter fragment was missed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub shape: ShapeId,
    /// Slash-separated route from the shape to the construct, e.g.
    /// `constraint/and.1/not/atleast/path`.
    pub ast_path: String,
    pub construct: Construct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub class: FragmentClass,
    pub witness: Option<Witness>,
}

pub fn classify(shapes: &ShapeSet) -> Fragment {
    let mut first_restr: Option<Witness> = None;
    let mut first_full: Option<Witness> = None;
    for shape in shapes.iter() {
        if matches!(shape.target, TargetQuery::ObjectsOf(_)) && first_restr.is_none() {
            first_restr = Some(Witness {
                shape: shape.name,
                ast_path: "target".into(),
                construct: Construct::ObjectsOfTarget,
            });
        }
        let mut route = vec!["constraint".to_string()];
        walk(
            &shape.constraint,
            &mut route,
            &mut |route, construct, full| {
                let slot = if full {
                    &mut first_full
                } else {
                    &mut first_restr
                };
                if slot.is_none() {
                    *slot = Some(Witness {
                        shape: shape.name,
                        ast_path: route.join("/"),
                        construct,
                    });
                }
            },
        );
    }
    match (first_full, first_restr) {
        (Some(w), _) => Fragment {
            class: FragmentClass::LFull,
            witness: Some(w),
        },
        (None, Some(w)) => Fragment {
            class: FragmentClass::LRestr,
            witness: Some(w),
        },
        (None, None) => Fragment {
            class: FragmentClass::LNoInv,
            witness: None,
        },
    }
}

fn walk(
    c: &Constraint,
    route: &mut Vec<String>,
    report: &mut dyn FnMut(&[String], Construct, bool),
) {
    match c {
        Constraint::Top | Constraint::ShapeRef(_) | Constraint::NodeConst(_) => {}
        Constraint::And(a, b) => {
            for (i, part) in [a, b].into_iter().enumerate() {
                route.push(format!("and.{i}"));
                walk(part, route, report);
                route.pop();
            }
        }
        Constraint::Not(a) => {
            route.push("not".into());
            walk(a, route, report);
            route.pop();
        }
        Constraint::AtLeast(n, path, inner) => {
            route.push("atleast".into());
            if !matches!(path, PathExpr::Prop(_)) {
                route.push("path".into());
                if n.get() >= 2 {
                    report(route, Construct::CountingOverComplexPath, true);
                }
                let construct = match path {
                    PathExpr::Inverse(_) => Construct::InversePath,
                    _ => Construct::SequencePath,
                };
                report(route, construct, false);
                route.pop();
            }
            route.push("filler".into());
            walk(inner, route, report);
            route.pop();
            route.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::{dl_fragment, DlFragment};
    use crate::shapes::Shape;
    use crate::symbols::SymbolTable;
    use crate::translation::tau_shapes;

    #[test]
    fn single_existential_is_inverse_free() {
        let mut t = SymbolTable::new();
        let a = t.shape("A");
        let p = PathExpr::Prop(t.property("p"));
        let s = ShapeSet::new([Shape::new(
            a,
            Constraint::exists(p, Constraint::Top),
            TargetQuery::None,
        )])
        .unwrap();
        let f = classify(&s);
        assert_eq!(
            f,
            Fragment {
                class: FragmentClass::LNoInv,
                witness: None
            }
        );
        assert_eq!(dl_fragment(&tau_shapes(&s)), DlFragment::Alcoq);
    }

    #[test]
    fn counting_over_sequence_is_full() {
        let mut t = SymbolTable::new();
        let a = t.shape("A");
        let p = PathExpr::Prop(t.property("p"));
        let q = PathExpr::Prop(t.property("q"));
        let c = Constraint::at_least(2, PathExpr::seq(p, q), Constraint::Top).unwrap();
        let s = ShapeSet::new([Shape::new(a, c, TargetQuery::None)]).unwrap();
        let f = classify(&s);
        assert_eq!(f.class, FragmentClass::LFull);
        let w = f.witness.unwrap();
        assert_eq!(w.construct, Construct::CountingOverComplexPath);
        assert_eq!(w.ast_path, "constraint/atleast/path");
    }

    #[test]
    fn forall_over_inverse_is_restricted() {
        let mut t = SymbolTable::new();
        let a = t.shape("A");
        let p = PathExpr::Prop(t.property("p"));
        let c = Constraint::forall(PathExpr::inverse(p), Constraint::ShapeRef(a));
        let s = ShapeSet::new([Shape::new(a, c, TargetQuery::None)]).unwrap();
        let f = classify(&s);
        assert_eq!(f.class, FragmentClass::LRestr);
        assert_eq!(f.witness.unwrap().ast_path, "constraint/not/atleast/path");
    }

    #[test]
    fn objects_of_target_forces_restricted() {
        let mut t = SymbolTable::new();
        let a = t.shape("A");
        let p = t.property("p");
        let s = ShapeSet::new([Shape::new(a, Constraint::Top, TargetQuery::ObjectsOf(p))]).unwrap();
        let f = classify(&s);
        assert_eq!(f.class, FragmentClass::LRestr);
        assert_eq!(f.witness.unwrap().construct, Construct::ObjectsOfTarget);
    }

    #[test]
    fn exactly_one_over_property_stays_inverse_free() {
        let mut t = SymbolTable::new();
        let a = t.shape("A");
        let p = PathExpr::Prop(t.property("p"));
        let s = ShapeSet::new([Shape::new(
            a,
            Constraint::exactly(1, p, Constraint::Top),
            TargetQuery::None,
        )])
        .unwrap();
        assert_eq!(classify(&s).class, FragmentClass::LNoInv);
    }

    #[test]
    fn empty_set_is_tightest() {
        assert_eq!(classify(&ShapeSet::default()).class, FragmentClass::LNoInv);
    }
}
