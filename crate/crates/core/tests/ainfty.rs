use std::sync::Arc;

use bordered::ainfty::*;
use bordered::grading::Twist;
use bordered::pmc::PointedMatchedCircle;
use bordered::torus::{self, Framing};
use bordered::{strands, Error};
use proptest::prelude::*;

const TWISTS: [Twist; 4] = [Twist::M, Twist::MInv, Twist::L, Twist::LInv];
const FRAMINGS: [Framing; 3] = [Framing::Zero, Framing::MinusOneM, Framing::MinusOneN];

fn same(a: &Bimodule, b: &Bimodule) -> bool {
    a.match_generators(b).is_some()
}

/// `g∘f + id = d(h)`, `f∘g = id`, and `f`, `g` are cycles, on every key
/// with at most `len` inputs.
fn assert_homotopy_equivalence(s: &Simplified, len: usize) {
    let (f, g, h) = (s.f(), s.g(), s.h());
    f.check_cycle(len).unwrap();
    g.check_cycle(len).unwrap();
    let src = s.source();
    let gf = g.after(&f);
    let id = StructureMorphism::identity(src.clone());
    for k in f.check_keys(len) {
        let mut v = gf.op(&k);
        v.extend(id.op(&k));
        v.extend(h.differential_at(&k));
        assert!(reduce_terms(v).is_empty(), "homotopy identity fails at {}", src.format_key(&k));
    }
    assert!(f.after(&g).equals(&StructureMorphism::identity(Arc::new(s.result.clone())), len));
}

#[test]
fn constructors_satisfy_structure_equations() {
    let a = torus::torus_algebra();
    let mut all = vec![
        torus::cfaa_id(),
        torus::cfdd_id_big(),
        torus::cfdd_id_small(),
        torus::cfdd_id_generic(),
        torus::solid_torus_a(),
        identity_da(a.clone()),
        algebra_aa(a.clone()),
        bar_dd(a, 3),
    ];
    all.extend(TWISTS.map(torus::dehn_twist_da));
    all.extend(FRAMINGS.map(torus::solid_torus_d));
    let z = PointedMatchedCircle::split(2).unwrap();
    all.push(algebra_aa(Arc::new(strands::algebra_basis(&z, -1))));
    all.push(cfdd_identity(&z, 0));
    for m in all {
        m.check_structure(torus::PROBE_LEN).unwrap_or_else(|e| panic!("{}: {e}", m.name));
    }
}

#[test]
fn dropping_an_operation_breaks_the_structure() {
    let mut m = torus::cfaa_id();
    let (l, r) = (m.left().unwrap().algebra.clone(), m.right().unwrap().algebra.clone());
    let key = (vec![l.gen("σ2")], m.gen_index("y").unwrap(), vec![r.gen("ρ2")]);
    assert!(!m.op(&key).is_empty());
    m.remove(&key);
    assert!(matches!(m.check_structure(torus::PROBE_LEN), Err(Error::StructureViolation(_))));
}

#[test]
fn general_dd_identity_matches_torus_model() {
    assert!(same(&torus::cfdd_id_generic(), &torus::cfdd_id_small()));
}

#[test]
fn dd_identity_generators_are_complementary_idempotents() {
    let z = PointedMatchedCircle::split(2).unwrap();
    let binom = |n: usize, k: usize| (0..k).fold(1usize, |acc, j| acc * (n - j) / (j + 1));
    for i in -2i64..=2 {
        let dd = cfdd_identity(&z, i);
        assert_eq!(dd.num_gens(), binom(4, (2 + i) as usize), "i={i}");
    }
}

#[test]
fn simplify_reduces_big_dd_identity() {
    let s = simplify(&torus::cfdd_id_big(), torus::PROBE_LEN).unwrap();
    assert_eq!(s.result.num_gens(), 2);
    assert!(same(&s.result, &torus::cfdd_id_small()));
    assert_homotopy_equivalence(&s, torus::PROBE_LEN);
}

#[test]
fn simplify_leaves_reduced_structures_alone() {
    let s = simplify(&torus::cfdd_id_small(), torus::PROBE_LEN).unwrap();
    assert!(s.steps.is_empty());
    assert!(same(&s.result, &torus::cfdd_id_small()));
}

#[test]
fn twist_composites_are_homotopy_equivalent_to_their_reductions() {
    for t in TWISTS {
        let raw = box_tensor(&torus::dehn_twist_da(t), &torus::dehn_twist_da(t.inverse())).unwrap();
        let s = simplify(&raw, torus::PROBE_LEN).unwrap();
        assert!(!s.steps.is_empty());
        assert_homotopy_equivalence(&s, 4);
    }
}

#[test]
fn boundedness_examples() {
    let a = torus::torus_algebra();
    assert_eq!(bar_dd(a.clone(), 3).is_bounded(BoundFlavor::Operational), Bounded::Yes);
    assert_eq!(torus::solid_torus_d(Framing::MinusOneM).is_bounded(BoundFlavor::Operational), Bounded::No);
    assert_eq!(torus::solid_torus_d(Framing::MinusOneN).is_bounded(BoundFlavor::Operational), Bounded::Yes);
    let id = identity_da(a);
    assert_eq!(id.is_bounded(BoundFlavor::Left), Bounded::Yes);
    assert_eq!(id.is_bounded(BoundFlavor::Right), Bounded::Yes);
    assert_eq!(id.is_bounded(BoundFlavor::Operational), Bounded::No);
}

#[test]
fn identity_bimodule_acts_trivially() {
    let id = identity_da(torus::torus_algebra());
    for f in FRAMINGS {
        let d = torus::solid_torus_d(f);
        let prod = box_tensor(&id, &d).unwrap();
        assert!(same(&prod, &d), "{f:?}");
    }
    assert_eq!(id.num_gens(), 2);
}

#[test]
fn identity_da_on_the_reversed_side_preserves_the_solid_torus_module() {
    let a = torus::solid_torus_a();
    let id = identity_da(torus::sigma_algebra());
    let prod = box_tensor(&a, &id).unwrap();
    assert_eq!(prod.num_gens(), 1);
    let keys = all_keys(&a.shape, &a.gens, 6);
    assert!(keys.iter().all(|k| prod.op(k) == a.op(k)));
}

#[test]
fn box_tensor_is_associative_on_torus_inputs() {
    let aa = torus::cfaa_id();
    for t in TWISTS {
        let da = torus::dehn_twist_da(t);
        for f in FRAMINGS {
            let d = torus::solid_torus_d(f);
            let left = box_tensor(&box_tensor(&aa, &da).unwrap(), &d).unwrap();
            let right = box_tensor(&aa, &box_tensor(&da, &d).unwrap()).unwrap();
            assert!(same(&left.materialize().unwrap(), &right.materialize().unwrap()), "{t:?} {f:?}");
        }
    }
}

#[test]
fn opposite_is_an_involution() {
    let mut all = vec![torus::cfdd_id_small(), torus::cfdd_id_big()];
    all.extend(FRAMINGS.map(torus::solid_torus_d));
    for x in all {
        let back = x.opposite().unwrap().opposite().unwrap();
        assert!(same(&back, &x), "{}", x.name);
        back.check_structure(torus::PROBE_LEN).unwrap();
    }
}

#[test]
fn opposite_of_zero_framed_solid_torus() {
    let x = torus::solid_torus_d(Framing::Zero);
    let o = x.opposite().unwrap();
    o.check_structure(torus::PROBE_LEN).unwrap();
    let rho12 = torus::torus_algebra().gen("ρ12");
    assert_eq!(o.zero_input_terms(0), vec![Term::new(None, 0, Some(rho12))]);
}

#[test]
fn solid_torus_models_are_isomorphic() {
    let f = torus::solid_torus_iso();
    let g = torus::solid_torus_iso_inverse();
    f.check_cycle(4).unwrap();
    g.check_cycle(4).unwrap();
    assert!(g.after(&f).equals(&StructureMorphism::identity(f.source.clone()), 4));
    assert!(f.after(&g).equals(&StructureMorphism::identity(g.source.clone()), 4));
}

#[test]
fn identity_morphism_survives_in_homology() {
    for f in FRAMINGS {
        let x = torus::solid_torus_d(f);
        let (c, basis) = mor_direct(&x, &x).unwrap();
        let alg = torus::torus_algebra();
        let id: Vec<usize> = (0..basis.len())
            .filter(|&k| {
                let b = basis[k];
                b.source == b.target && b.left.map(|a| alg.is_idempotent(a)).unwrap_or(true)
            })
            .collect();
        assert_eq!(id.len(), x.num_gens());
        let h = c.homology();
        assert!(bordered::f2::apply(&c.d, &id).is_empty(), "{f:?}");
        assert!(!h.is_boundary(&id), "{f:?}");
    }
}

#[test]
fn dd_identity_is_rigid() {
    let (_, degree_zero) = torus::dd_identity_endomorphisms(6).unwrap();
    assert_eq!(degree_zero, 1);
}

#[test]
fn hochschild_da_needs_operational_boundedness() {
    let id = identity_da(torus::torus_algebra());
    assert_eq!(hochschild_da(&id).unwrap_err(), Error::UnboundedInput);
}

/// The cyclic bar complex of a dg algebra with zero differential, written
/// out independently: `a0|a1|...|ak` maps to the sum of `a0 a1|...`,
/// `a0|...|ai a(i+1)|...` and `ak a0|a1|...|a(k-1)`.
fn cyclic_bar(alg: &bordered::Algebra, max_len: usize) -> (Vec<(usize, Vec<usize>)>, Vec<Vec<usize>>) {
    let mut basis = Vec::new();
    for x in 0..alg.dim() {
        for w in sequences(alg, alg.right_idem(x), max_len, false) {
            let end = w.last().map(|&a| alg.right_idem(a)).unwrap_or(alg.right_idem(x));
            if end == alg.left_idem(x) {
                basis.push((x, w));
            }
        }
    }
    let pos = |b: &(usize, Vec<usize>)| basis.iter().position(|c| c == b).unwrap();
    let mut d = Vec::new();
    for (x, w) in &basis {
        let mut img: Vec<usize> = Vec::new();
        let k = w.len();
        if k > 0 {
            for &c in alg.mul(*x, w[0]) {
                img.push(pos(&(c, w[1..].to_vec())));
            }
            for &c in alg.mul(w[k - 1], *x) {
                img.push(pos(&(c, w[..k - 1].to_vec())));
            }
        }
        for p in 0..k.saturating_sub(1) {
            for &c in alg.mul(w[p], w[p + 1]) {
                let mut w2 = w[..p].to_vec();
                w2.push(c);
                w2.extend_from_slice(&w[p + 2..]);
                img.push(pos(&(*x, w2)));
            }
        }
        d.push(bordered::f2::from_list(img));
    }
    (basis, d)
}

#[test]
fn hochschild_of_torus_algebra_matches_cyclic_bar_complex() {
    let a = torus::torus_algebra();
    for len in 1..=4 {
        let c = hochschild_aa(&algebra_aa(a.clone()), len).unwrap();
        c.check_d_squared().unwrap();
        let (basis, d) = cyclic_bar(&a, len);
        assert_eq!(c.dim(), basis.len());
        let labels: Vec<String> = basis
            .iter()
            .map(|(x, w)| std::iter::once(*x).chain(w.iter().copied()).map(|e| a.label(e)).collect::<Vec<_>>().join("|"))
            .collect();
        let map: Vec<usize> = labels.iter().map(|l| c.index_of(l).unwrap()).collect();
        for (j, col) in d.iter().enumerate() {
            let mut want: Vec<usize> = col.iter().map(|&i| map[i]).collect();
            want.sort();
            assert_eq!(c.d[map[j]], want, "len {len}: d({})", labels[j]);
        }
    }
}

#[test]
fn hochschild_pipelines_agree_on_torus_bimodules() {
    let a = torus::torus_algebra();
    let map = torus::sigma_opposite().isomorphism_to(&a).unwrap();
    let mut all = vec![torus::cfaa_id().transport_left(a.clone(), &map).unwrap(), algebra_aa(a.clone())];
    for t in TWISTS {
        all.push(box_tensor(&algebra_aa(a.clone()), &torus::dehn_twist_da(t)).unwrap());
    }
    for m in all {
        for len in 1..=3 {
            let (direct, twisted, map) = hochschild_bar_pair(&m, len).unwrap();
            direct.check_d_squared().unwrap();
            twisted.check_d_squared().unwrap();
            let map = map.unwrap_or_else(|| panic!("{}: no basis bijection", m.name));
            assert!(direct.isomorphic_via(&twisted, &map), "{} len {len}", m.name);
        }
    }
}

#[test]
fn transported_cfaa_is_a_bimodule_over_one_algebra() {
    let a = torus::torus_algebra();
    let map = torus::sigma_opposite().isomorphism_to(&a).unwrap();
    let m = torus::cfaa_id().transport_left(a.clone(), &map).unwrap();
    m.check_structure(torus::PROBE_LEN).unwrap();
    assert_eq!(m.left().unwrap().algebra.name(), a.name());
    assert!(torus::torus_algebra().isomorphism_to(&strands::algebra_basis(&PointedMatchedCircle::split(2).unwrap(), 0)).is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn twist_products_associate(i in 0usize..4, j in 0usize..4, f in 0usize..3) {
        let (x, y) = (torus::dehn_twist_da(TWISTS[i]), torus::dehn_twist_da(TWISTS[j]));
        let d = torus::solid_torus_d(FRAMINGS[f]);
        let left = box_tensor(&box_tensor(&x, &y).unwrap(), &d).unwrap().materialize().unwrap();
        let right = box_tensor(&x, &box_tensor(&y, &d).unwrap()).unwrap().materialize().unwrap();
        prop_assert!(same(&left, &right));
        left.check_structure(torus::PROBE_LEN).unwrap();
    }

    #[test]
    fn simplification_preserves_morphism_homology(i in 0usize..4, f in 0usize..3) {
        let raw = box_tensor(&torus::dehn_twist_da(TWISTS[i]), &torus::solid_torus_d(FRAMINGS[f])).unwrap();
        let s = simplify(&raw, torus::PROBE_LEN).unwrap();
        prop_assert!(s.result.num_gens() <= raw.num_gens());
        let zero = torus::solid_torus_d(Framing::Zero);
        let raw_c = mor_direct(&raw, &zero).unwrap().0.homology_rank();
        let simp_c = mor_direct(&s.result, &zero).unwrap().0.homology_rank();
        prop_assert_eq!(raw_c, simp_c);
    }
}

#[test]
fn pattern_inference_recovers_solid_torus_rule() {
    let a = torus::solid_torus_a();
    let want = a.rule().unwrap().pattern().unwrap();
    assert_eq!(PatternRule::infer(&a, 8), Some(want.clone()));
    assert_eq!(PatternRule::infer(&a, 3), None);
    let mirrored = a.mirror();
    assert_eq!(PatternRule::infer(&mirrored, 8), Some(want.mirrored()));
    assert_eq!(PatternRule::infer(&torus::cfaa_id(), 4), None);
}
