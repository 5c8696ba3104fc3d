mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::{check_round_trips, random_spec, spec};
use rand::rngs::StdRng;
use rand::SeedableRng;
use sok_core::charsphere::{make_character, RationalSubspace};
use sok_core::exact::{q, qq, Q};
use sok_core::extension::*;
use sok_core::group::{abelianization, Presentation};

fn qv(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

#[test]
fn klein_action_and_fix() {
    let s = spec("klein.json");
    let a = action_on_hom_h(&s);
    assert_eq!(a.len(), 1);
    assert_eq!(a[0].element, "beta");
    assert_eq!(a[0].matrix, vec![qv(&[-1, 0]), qv(&[0, 1])]);
    let fix = fix_subspace(&s);
    assert_eq!(fix, RationalSubspace::span(2, &[qv(&[0, 1])]));
    let g = build_extension_presentation(&s);
    assert_eq!(abelianization(&g).rank, 1);
}

#[test]
fn klein_extension_of_characters() {
    let s = spec("klein.json");
    let phi = make_character(s.h(), qv(&[0, 1])).unwrap();
    let hat = extend_character_finite(&s, &phi).unwrap();
    assert_eq!(hat.values(), &[q(0), q(1), qq(1, 2)]);
    assert_eq!(restrict_to_h(&s, &hat).unwrap(), phi);
    let bad = make_character(s.h(), qv(&[1, 1])).unwrap();
    assert_eq!(extend_character_finite(&s, &bad), Err(ExtensionError::NotFixed));
}

#[test]
fn dinf_routes() {
    for name in ["dinf.json", "dinf_nonsplit.json", "dinf_split.json"] {
        let s = spec(name);
        assert_eq!(fix_subspace(&s).dim(), 0, "{name}");
        let g = build_extension_presentation(&s);
        assert_eq!(abelianization(&g).rank, 0, "{name}");
    }
    let s = spec("dinf.json");
    assert_eq!(action_on_hom_h(&s)[0].matrix, vec![qv(&[-1])]);
    let g = build_extension_presentation(&s);
    assert_eq!(g.generators(), &["a".to_string(), "t".to_string()]);
    let rels: Vec<String> = g.relators().iter().map(|r| g.format_word(r)).collect();
    assert_eq!(rels, vec!["t t", "t a t^-1 a"]);
    let ab = abelianization(&g);
    assert_eq!(ab.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(), ["2", "2"]);
    let zero = make_character(s.h(), qv(&[0])).unwrap();
    assert_eq!(extend_character_finite(&s, &zero).unwrap().values(), &[q(0), q(0)]);
    let split = hom_space_split(&spec("dinf_split.json")).unwrap();
    assert_eq!(split.dim(), 0);
}

#[test]
fn thompson_extension() {
    let s = spec("thompson_z2.json");
    assert_eq!(action_on_hom_h(&s)[0].matrix, vec![qv(&[-1, 0]), qv(&[-1, 1])]);
    assert_eq!(fix_subspace(&s), RationalSubspace::span(2, &[qv(&[0, 1])]));
    let phi = make_character(s.h(), qv(&[0, 1])).unwrap();
    let hat = extend_character_finite(&s, &phi).unwrap();
    assert_eq!(hat.values(), &[q(0), q(1), q(0)]);
    let g = build_extension_presentation(&s);
    let rels: Vec<String> = g.relators().iter().map(|r| g.format_word(r)).collect();
    assert!(rels.contains(&"t x0 t^-1 x0".to_string()));
    assert!(rels.contains(&"t x1 t^-1 x0 x0 x1^-1 x0^-1".to_string()));
    assert_eq!(abelianization(&g).rank, 1);
}

#[test]
fn ex52_swap() {
    let s = spec("ex52.json");
    let m = &action_on_hom_h(&s)[0].matrix;
    assert_eq!(m, &vec![qv(&[0, 1, 0, 0]), qv(&[1, 0, 0, 0]), qv(&[0, 0, 0, 1]), qv(&[0, 0, 1, 0])]);
    let fix = fix_subspace(&s);
    assert_eq!(fix, RationalSubspace::span(4, &[qv(&[1, 1, 0, 0]), qv(&[0, 0, 1, 1])]));
    let split = hom_space_split(&spec("ex52_split.json")).unwrap();
    assert_eq!(split.dim(), 2);
    assert_eq!(split.hom_k.rank, 0);
    let chi = split.assemble(&qv(&[2, 2, -1, -1]), &[]).unwrap();
    assert_eq!(split.project(&chi), (qv(&[2, 2, -1, -1]), vec![]));
    assert_eq!(split.assemble(&qv(&[1, 0, 0, 0]), &[]).unwrap_err(), ExtensionError::NotFixed);
}

#[test]
fn transversal_invariance() {
    let s = spec("klein.json");
    let same: BTreeMap<String, String> = [("beta:alpha", "alpha^-1"), ("beta:delta", "delta")]
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert!(transversal_invariance_check(&s, &same).unwrap());
    // nu2(beta) = alpha beta: conjugation by alpha beta
    let alt: BTreeMap<String, String> = [
        ("beta:alpha", "alpha alpha^-1 alpha^-1"),
        ("beta:delta", "alpha delta alpha^-1"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    assert!(transversal_invariance_check(&s, &alt).unwrap());
    let corrupted: BTreeMap<String, String> = [("beta:alpha", "alpha"), ("beta:delta", "delta")]
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert!(!transversal_invariance_check(&s, &corrupted).unwrap());
}

#[test]
fn trivial_quotient() {
    let text = r#"{"H":{"generators":["x","y"],"relators":["x y x^-1 y^-1"]},
                  "K":{"generators":[],"relators":[]},"flavor":"finite","conjugation":{}}"#;
    let s = ExtensionSpec::from_json(text).unwrap();
    assert_eq!(&build_extension_presentation(&s), s.h().as_ref());
    assert_eq!(fix_subspace(&s).dim(), 2);
}

#[test]
fn spec_errors() {
    let base = common::fixture("klein.json");
    let missing = base.replace(r#""beta:delta": "delta""#, r#""beta:alpha2": "delta""#);
    assert!(matches!(ExtensionSpec::from_json(&missing), Err(ExtensionError::BadKey(_))));
    let bad_order = base.replace(r#""m": 2"#, r#""m": 3"#);
    assert!(matches!(ExtensionSpec::from_json(&bad_order), Err(ExtensionError::BadOrder { .. })));
    let unknown = base.replace(r#""flavor""#, r#""extra": 1, "flavor""#);
    assert!(matches!(ExtensionSpec::from_json(&unknown), Err(ExtensionError::Json(_))));
    let infinite = base.replace(r#""relators": ["beta beta"]"#, r#""relators": []"#);
    assert!(matches!(ExtensionSpec::from_json(&infinite), Err(ExtensionError::KNotFinite(_))));
    let singular = base.replace(r#""beta:alpha": "alpha^-1""#, r#""beta:alpha": "delta""#);
    assert!(matches!(
        ExtensionSpec::from_json(&singular),
        Err(ExtensionError::NonInvertibleAction(_))
    ));
    let inconsistent = r#"{"H":{"generators":["a","b"],"relators":["a a b^-1"]},
        "K":{"generators":["t"],"relators":["t t"]},"flavor":"split",
        "conjugation":{"t:a":"b","t:b":"a"}}"#;
    assert!(matches!(
        ExtensionSpec::from_json(inconsistent),
        Err(ExtensionError::InconsistentAction(_))
    ));
    let nonsplit = common::fixture("dinf_nonsplit.json");
    let unlifted = nonsplit.replace(r#"{ "relator": "p q p^-1 q^-1", "w": "z z" }"#, "");
    assert!(matches!(
        ExtensionSpec::from_json(&unlifted),
        Err(ExtensionError::MissingRelatorLift(2))
    ));
}

#[test]
fn spec_file_roundtrip() {
    for name in ["klein.json", "dinf_nonsplit.json", "ex52_split.json", "thompson_z2.json"] {
        let s = spec(name);
        let text = serde_json::to_string(&s.to_file()).unwrap();
        let back = ExtensionSpec::from_json(&text).unwrap();
        assert_eq!(back.to_file(), s.to_file());
    }
}

#[test]
fn fixtures_round_trip() {
    for name in [
        "klein.json",
        "dinf.json",
        "dinf_split.json",
        "dinf_nonsplit.json",
        "thompson_z2.json",
        "ex52.json",
        "ex52_split.json",
    ] {
        check_round_trips(&spec(name));
    }
}

#[test]
fn random_specs_round_trip() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..60 {
        let file = random_spec(&mut rng);
        let s = ExtensionSpec::from_file(&file).unwrap_or_else(|e| panic!("{e}: {file:?}"));
        check_round_trips(&s);
    }
}

#[test]
fn presentation_owner_is_shared() {
    let s = spec("klein.json");
    let p: &Arc<Presentation> = s.h();
    assert_eq!(p.num_generators(), 2);
}
