mod common;

use bordered::ainfty::{massey_product, MasseyContext};
use bordered::grading::{gr_prime_table, RefinementData};
use bordered::pmc::PointedMatchedCircle;
use bordered::strands::{self, StrandGen};
use proptest::prelude::*;

fn circle(spec: &str) -> PointedMatchedCircle {
    PointedMatchedCircle::from_spec(spec).unwrap()
}

const SPECS: [&str; 3] = ["torus", "split:2", "antipodal:2"];

fn ranks(spec: &str) -> Vec<usize> {
    let z = circle(spec);
    common::gradings(&z).map(|i| strands::homology(&z, &strands::algebra_basis(&z, i)).total_rank()).collect()
}

#[test]
fn split_genus_two_homology_ranks() {
    let r = ranks("split:2");
    assert_eq!(r, vec![1, 32, 98, 32, 1]);
    assert_eq!(r.iter().sum::<usize>(), 164);
}

#[test]
fn antipodal_genus_two_homology_ranks() {
    let r = ranks("antipodal:2");
    assert_eq!(r, vec![1, 32, 70, 32, 1]);
    assert_eq!(r.iter().sum::<usize>(), 136);
}

#[test]
fn torus_algebra_has_zero_differential_and_full_homology() {
    let z = circle("torus");
    let a = strands::algebra_basis(&z, 0);
    assert!(a.has_zero_differential());
    assert_eq!(strands::homology(&z, &a).total_rank(), 8);
}

#[test]
fn homology_support_matches_prediction() {
    for spec in SPECS {
        let z = circle(spec);
        for i in common::gradings(&z) {
            let a = strands::algebra_basis(&z, i);
            let h = strands::homology(&z, &a);
            strands::check_support(&z, &a, &h).unwrap_or_else(|e| panic!("{spec} i={i}: {e}"));
        }
    }
}

#[test]
fn algebra_axioms_hold() {
    for spec in SPECS {
        let z = circle(spec);
        for i in common::gradings(&z) {
            let a = strands::algebra_basis(&z, i);
            a.check_d_squared().unwrap();
            a.check_leibniz().unwrap();
            a.check_associativity(1).unwrap();
        }
    }
}

#[test]
fn direct_and_expanded_products_agree() {
    for spec in SPECS {
        let z = circle(spec);
        for i in common::gradings(&z) {
            let gens = strands::enumerate_generators(&z, i);
            for a in &gens {
                let right = a.right_pairs(&z);
                for b in gens.iter().filter(|b| b.left_pairs(&z) == right) {
                    let direct: Vec<StrandGen> = strands::direct_mul(&z, a, b).into_iter().collect();
                    assert_eq!(strands::expanded_mul(&z, a, b).unwrap(), direct, "{spec}: {a} * {b}");
                }
            }
        }
    }
}

#[test]
fn direct_and_expanded_differentials_agree() {
    for spec in SPECS {
        let z = circle(spec);
        for i in common::gradings(&z) {
            for a in strands::enumerate_generators(&z, i) {
                let mut direct = strands::direct_diff(&z, &a);
                direct.sort();
                let mut expanded = strands::expanded_diff(&z, &a).unwrap();
                expanded.sort();
                assert_eq!(direct, expanded, "{spec}: d({a})");
            }
        }
    }
}

#[test]
fn quotient_keeps_homology() {
    let t = circle("torus");
    assert_eq!(strands::quotient_a_prime(&t, 0).dim(), strands::algebra_basis(&t, 0).dim());
    let z = circle("split:2");
    let mut smaller = false;
    for i in common::gradings(&z) {
        let a = strands::algebra_basis(&z, i);
        let q = strands::quotient_a_prime(&z, i);
        q.check_d_squared().unwrap();
        q.check_leibniz().unwrap();
        assert!(q.dim() <= a.dim());
        smaller |= q.dim() < a.dim();
        assert_eq!(strands::homology(&z, &q).total_rank(), strands::homology(&z, &a).total_rank(), "i={i}");
    }
    assert!(smaller);
}

#[test]
fn refined_gradings_lie_in_small_group() {
    for spec in SPECS {
        let z = circle(spec);
        for i in common::gradings(&z) {
            let a = strands::algebra_basis(&z, i);
            let rf = RefinementData::standard(&z, &a);
            for g in rf.refine_table(&z, &a).unwrap() {
                assert!(g.is_in_small_group(&z), "{spec} i={i}: {g}");
            }
        }
    }
}

#[test]
fn massey_product_of_two_is_the_product() {
    let z = circle("antipodal:2");
    let alg = strands::algebra_basis(&z, 0);
    let h = strands::homology(&z, &alg);
    let ctx = MasseyContext::new(&z, &alg);
    let reps: Vec<_> = h.blocks.iter().filter(|b| b.rank > 0).map(|b| b.representatives[0].clone()).collect();
    let mut checked = 0;
    for a in &reps {
        for b in &reps {
            if let Ok(p) = ctx.product(&[a.clone(), b.clone()], false) {
                assert_eq!(p.cycle, alg.mul_elem(a, b));
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn massey_triple_on_antipodal_circle() {
    let z = circle("antipodal:2");
    let alg = strands::algebra_basis(&z, 0);
    let elem = |s: &str| vec![alg.index_of(s).unwrap_or_else(|| panic!("{s}"))];
    let inputs = [elem("6>7|{0}"), elem("1>2,3>5"), elem("2>3|{0}")];
    let p = massey_product(&z, &alg, &inputs, false).unwrap();
    let q = massey_product(&z, &alg, &inputs, true).unwrap();
    assert_eq!(p.class, q.class);
    let target = elem("1>5,6>7");
    let h = MasseyContext::new(&z, &alg);
    assert_eq!(Some(p.class), h.homology().class_of(&target));
    // adjacent products are null-homologous
    for w in inputs.windows(2) {
        assert!(h.homology().is_boundary(&alg.mul_elem(&w[0], &w[1])));
    }
}

#[test]
fn massey_rejects_inadmissible_sequences() {
    let z = circle("torus");
    let alg = strands::algebra_basis(&z, 0);
    let r1 = vec![alg.index_of("1>2").unwrap()];
    let r2 = vec![alg.index_of("2>3").unwrap()];
    let r3 = vec![alg.index_of("3>4").unwrap()];
    // ρ1ρ2 is nonzero, so the triple is not admissible
    assert!(massey_product(&z, &alg, &[r1.clone(), r2, r3], false).is_err());
    assert!(massey_product(&z, &alg, &[r1], false).is_err());
}

fn graded_algebra(spec: &str, i: i64) -> (PointedMatchedCircle, bordered::Algebra) {
    let z = circle(spec);
    let a = strands::algebra_basis(&z, i);
    (z, a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grading_is_multiplicative(which in 0usize..3, i in -1i64..=1, seed in any::<u64>()) {
        let (z, a) = graded_algebra(SPECS[which], i);
        let gr = gr_prime_table(&z, &a);
        let x = (seed % a.dim() as u64) as usize;
        for (y, prod) in a.right_products(x) {
            for &c in prod {
                prop_assert_eq!(&gr[c], &gr[x].mul(&gr[y]));
            }
        }
    }

    #[test]
    fn differential_lowers_maslov_by_one(which in 0usize..3, i in -1i64..=1, seed in any::<u64>()) {
        let (z, a) = graded_algebra(SPECS[which], i);
        let gr = gr_prime_table(&z, &a);
        let x = (seed % a.dim() as u64) as usize;
        for &c in a.d(x) {
            prop_assert_eq!(&gr[c], &gr[x].shift(-1));
        }
    }

    #[test]
    fn reversed_circle_has_same_ranks(which in 1usize..3) {
        let z = circle(SPECS[which]);
        let r = z.reverse();
        for i in common::gradings(&z) {
            let a = strands::homology(&z, &strands::algebra_basis(&z, i)).total_rank();
            let b = strands::homology(&r, &strands::algebra_basis(&r, -i)).total_rank();
            prop_assert_eq!(a, b);
        }
    }
}
