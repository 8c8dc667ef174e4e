use std::path::PathBuf;

use bordered::ainfty::{identity_da, Bimodule};
use bordered::grading::{check_da_gradings, dehn_twist_hom, propagate_da_gradings, torus_refinement, Twist};
use bordered::torus::{self, Framing};
use bordered::PointedMatchedCircle;
use proptest::prelude::*;

const TWISTS: [Twist; 4] = [Twist::M, Twist::MInv, Twist::L, Twist::LInv];

fn is_identity(word: &[Twist]) -> bool {
    let s = torus::mcg_word_bimodule(word).unwrap();
    s.result.match_generators(&identity_da(torus::torus_algebra())).is_some()
}

fn data(name: &str) -> Bimodule {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name);
    Bimodule::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn twists_have_three_generators() {
    for t in TWISTS {
        let m = torus::dehn_twist_da(t);
        assert_eq!(m.num_gens(), 3);
        assert!(m.is_finite());
    }
}

#[test]
fn twist_followed_by_inverse_is_identity() {
    for t in TWISTS {
        assert!(is_identity(&[t, t.inverse()]), "{t:?}");
        assert!(is_identity(&[t.inverse(), t]), "{t:?}");
    }
}

#[test]
fn words_of_length_two_cancel_with_their_inverses() {
    for a in TWISTS {
        for b in TWISTS {
            let w = vec![a, b];
            let mut full = w.clone();
            full.extend(torus::inverse_word(&w));
            assert!(is_identity(&full), "{w:?}");
        }
    }
}

#[test]
fn single_twists_are_not_the_identity() {
    for t in TWISTS {
        assert!(!is_identity(&[t]), "{t:?}");
    }
    assert!(!is_identity(&[Twist::M, Twist::L]));
}

#[test]
fn braid_relation() {
    let mut w = vec![Twist::M, Twist::L, Twist::M];
    w.extend(torus::inverse_word(&[Twist::L, Twist::M, Twist::L]));
    assert!(is_identity(&w));
}

#[test]
fn parsed_words() {
    assert_eq!(torus::parse_word("m,M, l,L").unwrap(), TWISTS.to_vec());
    assert!(torus::parse_word("m,x").is_err());
    assert!(torus::mcg_word_bimodule(&[]).is_err());
}

#[test]
fn stated_gradings_of_positive_meridian_twist() {
    let m = torus::dehn_twist_da(Twist::M);
    let gr = torus::dehn_twist_gradings(Twist::M);
    let z = PointedMatchedCircle::torus();
    check_da_gradings(&m, &z, &torus_refinement(), &gr, &dehn_twist_hom(Twist::M)).unwrap();
}

#[test]
fn propagated_gradings_are_consistent_for_every_twist() {
    let z = PointedMatchedCircle::torus();
    let rf = torus_refinement();
    for t in TWISTS {
        let m = torus::dehn_twist_da(t);
        let f = dehn_twist_hom(t);
        let p = m.gen_index("p").unwrap();
        let gr: Vec<_> = propagate_da_gradings(&m, &z, &rf, p, &f)
            .unwrap()
            .into_iter()
            .map(|g| g.unwrap_or_else(|| panic!("{t:?}: generator not reached")))
            .collect();
        check_da_gradings(&m, &z, &rf, &gr, &f).unwrap_or_else(|e| panic!("{t:?}: {e}"));
    }
}

#[test]
fn propagation_reproduces_stated_gradings_of_positive_meridian_twist() {
    let z = PointedMatchedCircle::torus();
    let m = torus::dehn_twist_da(Twist::M);
    let p = m.gen_index("p").unwrap();
    let gr = propagate_da_gradings(&m, &z, &torus_refinement(), p, &dehn_twist_hom(Twist::M)).unwrap();
    let stated = torus::dehn_twist_gradings(Twist::M);
    assert_eq!(gr[p].as_ref(), Some(&stated[p]));
    let ok = check_da_gradings(&m, &z, &torus_refinement(), &stated, &dehn_twist_hom(Twist::M));
    assert!(ok.is_ok());
}

#[test]
fn duality_example() {
    let r = torus::duality_example_check(4).unwrap();
    assert!(r.passed(), "{}", r.render());
}

#[test]
fn solid_torus_modules_pass_structure_checks() {
    for f in [Framing::Zero, Framing::MinusOneM, Framing::MinusOneN] {
        torus::solid_torus_d(f).check_structure(torus::PROBE_LEN).unwrap();
    }
    torus::solid_torus_a().check_structure(torus::PROBE_LEN).unwrap();
}

#[test]
fn shipped_bimodules_match_constructors() {
    let cases: Vec<(&str, Bimodule)> = vec![
        ("cfaa_id.json", torus::cfaa_id()),
        ("cfdd_id.json", torus::cfdd_id_small()),
        ("cfdd_id_big.json", torus::cfdd_id_big()),
        ("dehn_twist_m_da.json", torus::dehn_twist_da(Twist::M)),
        ("dehn_twist_m_inverse_da.json", torus::dehn_twist_da(Twist::MInv)),
        ("dehn_twist_l_da.json", torus::dehn_twist_da(Twist::L)),
        ("dehn_twist_l_inverse_da.json", torus::dehn_twist_da(Twist::LInv)),
        ("solid_torus_d_0.json", torus::solid_torus_d(Framing::Zero)),
    ];
    for (file, m) in cases {
        let loaded = data(file);
        assert_eq!(loaded.gens, m.gens, "{file}");
        assert_eq!(loaded.table(), m.table(), "{file}");
        loaded.check_structure(torus::PROBE_LEN).unwrap();
    }
    let a = data("solid_torus_a_0.json");
    let keys = bordered::ainfty::all_keys(&a.shape, &a.gens, 8);
    let b = torus::solid_torus_a();
    assert!(keys.iter().all(|k| a.op(k) == b.op(k)));
}

#[test]
fn serialisation_round_trips() {
    let mut all = vec![torus::cfaa_id(), torus::cfdd_id_big(), torus::solid_torus_a()];
    all.extend(TWISTS.map(torus::dehn_twist_da));
    for m in all {
        let text = m.to_json().unwrap();
        let back = Bimodule::from_json(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), text, "{}", m.name);
        assert_eq!(back.gens, m.gens);
    }
}

#[test]
fn malformed_bimodule_json_is_rejected() {
    assert!(Bimodule::from_json("{").is_err());
    let mut v: serde_json::Value = serde_json::from_str(&torus::cfaa_id().to_json().unwrap()).unwrap();
    v["left"] = serde_json::json!({"tag": "A", "algebra": "no-such-algebra"});
    assert!(Bimodule::from_json(&v.to_string()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_words_cancel_with_their_inverses(w in proptest::collection::vec(0usize..4, 1..=3)) {
        let w: Vec<Twist> = w.into_iter().map(|k| TWISTS[k]).collect();
        let mut full = w.clone();
        full.extend(torus::inverse_word(&w));
        prop_assert!(is_identity(&full));
        let s = torus::mcg_word_bimodule(&w).unwrap();
        s.result.check_structure(torus::PROBE_LEN).unwrap();
    }
}
