use bordered::diagrams::*;
use bordered::grading::{BiGrading, GradingElement, Twist};
use bordered::torus;
use num::{BigRational, Zero};
use proptest::prelude::*;

fn twist_diagram(t: Twist) -> ArcedDiagram {
    let name = match t {
        Twist::M => "dehn-twist-m",
        Twist::MInv => "dehn-twist-m-inverse",
        Twist::L => "dehn-twist-l",
        Twist::LInv => "dehn-twist-l-inverse",
    };
    shipped(name).unwrap()
}

const TWISTS: [Twist; 4] = [Twist::M, Twist::MInv, Twist::L, Twist::LInv];

/// Generators with one point on each side.
fn middle(d: &ArcedDiagram) -> Vec<Generator> {
    d.generators().into_iter().filter(|g| g.left.len() == 1 && g.right.len() == 1).collect()
}

/// Interval multiplicities of a torus algebra label: `ρ23` covers intervals
/// 2 and 3, idempotents nothing.
fn chord(label: &str) -> Vec<i64> {
    let mut v = vec![0; 3];
    if let Some(digits) = label.strip_prefix('ρ') {
        for c in digits.chars() {
            v[c.to_digit(10).unwrap() as usize - 1] += 1;
        }
    }
    v
}

/// Some `B` in `π2(x, y)` with the given boundary, found by adding
/// boundary rows to the corner-defect system.
fn domain_with_boundary(d: &ArcedDiagram, x: &Generator, y: &Generator, left: &[i64], right: &[i64]) -> Option<Domain> {
    let n = d.regions.len();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs = Vec::new();
    let mut target = vec![0; d.points.len()];
    for &p in &x.points {
        target[p] += 1;
    }
    for &p in &y.points {
        target[p] -= 1;
    }
    for (i, p) in d.points.iter().enumerate() {
        let mut row = vec![0; n];
        row[p.corners[0]] += 1;
        row[p.corners[2]] += 1;
        row[p.corners[1]] -= 1;
        row[p.corners[3]] -= 1;
        rows.push(row);
        rhs.push(target[i]);
    }
    for (r, reg) in d.regions.iter().enumerate() {
        if reg.z {
            let mut row = vec![0; n];
            row[r] = 1;
            rows.push(row);
            rhs.push(0);
        }
    }
    for k in 0..left.len() {
        rows.push(d.regions.iter().map(|r| r.left[k]).collect());
        rhs.push(left[k]);
    }
    for k in 0..right.len() {
        rows.push(d.regions.iter().map(|r| r.right[k]).collect());
        rhs.push(right[k]);
    }
    integer_solve(&rows, n, &rhs)
}

#[test]
fn shipped_diagrams_load_and_sum_to_euler_characteristic() {
    for n in shipped_names() {
        let d = shipped(n).unwrap();
        let total: i64 = d.regions.iter().map(|r| r.euler4).sum();
        assert_eq!(total, 4 * d.euler_characteristic(), "{n}");
        assert_eq!(d.euler_characteristic(), -4);
        assert_eq!(d.left_pmc.as_ref().unwrap().canonical(), vec![(1, 3), (2, 4)]);
        assert_eq!(d.right_pmc.as_ref().unwrap().canonical(), vec![(1, 3), (2, 4)]);
    }
}

#[test]
fn twist_basis_matches_stated_domains() {
    let d = twist_diagram(Twist::M);
    let basis = d.periodic_domains();
    assert_eq!(basis.len(), 2);
    let p1 = d.domain(&[(1, "D2"), (1, "D3"), (1, "D4")]).unwrap();
    let p2 = d.domain(&[(1, "D1"), (1, "D2"), (-1, "D4")]).unwrap();
    // the two lattices coincide: each basis writes the other with integers
    let as_rows = |v: &[Domain]| -> Vec<Vec<i64>> {
        (0..d.regions.len()).map(|r| v.iter().map(|b| b[r]).collect()).collect()
    };
    for b in &basis {
        assert!(integer_solve(&as_rows(&[p1.clone(), p2.clone()]), 2, b).is_some());
    }
    for b in [&p1, &p2] {
        assert!(integer_solve(&as_rows(&basis), 2, b).is_some());
    }
}

#[test]
fn twist_euler_and_point_measures() {
    let d = twist_diagram(Twist::M);
    let p = d.named_generator("p").unwrap();
    let a = d.domain(&[(1, "D2"), (1, "D3"), (1, "D4")]).unwrap();
    let b = d.domain(&[(1, "D1"), (1, "D2"), (-1, "D4")]).unwrap();
    assert_eq!(d.euler4(&a), -8);
    assert_eq!(d.point_measure4(&a, &p), 4);
    assert_eq!(d.euler4(&b), -2);
    assert_eq!(d.point_measure4(&b, &p), 2);
    let (l, r) = d.domain_grading(&a, &p, &p).unwrap();
    assert_eq!(BiGrading::pair(&l, &r).maslov2, 0);
    assert_eq!(r.alpha, vec![0, 1, 1]);
    let (l, r) = d.domain_grading(&b, &p, &p).unwrap();
    assert_eq!(BiGrading::pair(&l, &r).maslov2, -1);
    assert_eq!(r.alpha, vec![1, 0, -1]);
}

#[test]
fn d2_runs_from_r_to_p() {
    let d = twist_diagram(Twist::M);
    let (p, r) = (d.named_generator("p").unwrap(), d.named_generator("r").unwrap());
    let d2 = d.domain(&[(1, "D2")]).unwrap();
    assert!(d.connects(&d2, &r, &p));
    assert!(!d.connects(&d2, &p, &r));
    let (l, _) = d.domain_grading(&d2, &r, &p).unwrap();
    assert_eq!(l, GradingElement::new(-1, vec![0, 1, 0]));
    assert!(d.domain_grading(&d2, &p, &r).is_err());
    // the reverse connection exists but is negative
    let back = d.connecting_domain(&p, &r).unwrap();
    assert!(d.connects(&back, &p, &r));
    let neg: Domain = d2.iter().map(|c| -c).collect();
    let diff: Domain = back.iter().zip(&neg).map(|(a, b)| a - b).collect();
    assert!(d.is_periodic(&diff));
}

#[test]
fn twist_diagrams_have_three_middle_generators() {
    for t in TWISTS {
        let d = twist_diagram(t);
        assert_eq!(middle(&d).len(), 3, "{t:?}");
        assert_eq!(d.named_generators().len(), 3);
    }
}

#[test]
fn twist_generator_idempotents_match_bimodules() {
    for t in TWISTS {
        let d = twist_diagram(t);
        let m = torus::dehn_twist_da(t);
        for g in &m.gens {
            let h = d.named_generator(&g.label).unwrap();
            assert_eq!((h.left[0], h.right[0]), (g.left, g.right), "{t:?} {}", g.label);
        }
    }
}

#[test]
fn twist_operations_are_realised_by_positive_domains() {
    for t in TWISTS {
        let d = twist_diagram(t);
        let m = torus::dehn_twist_da(t);
        let la = m.left().unwrap().algebra.clone();
        let ra = m.right().unwrap().algebra.clone();
        for ((_, x, inputs), terms) in m.table() {
            let gx = d.named_generator(&m.gens[*x].label).unwrap();
            let mut right = vec![0; 3];
            for &a in inputs {
                for (o, c) in right.iter_mut().zip(chord(ra.label(a))) {
                    *o += c;
                }
            }
            for term in terms {
                let gy = d.named_generator(&m.gens[term.gen].label).unwrap();
                let mut left = chord(la.label(term.left.unwrap()));
                left.reverse();
                let b = domain_with_boundary(&d, &gx, &gy, &left, &right)
                    .unwrap_or_else(|| panic!("{t:?}: no domain for {:?}", (x, inputs, term.gen)));
                assert!(b.iter().all(|&c| c >= 0), "{t:?}: negative domain {b:?}");
            }
        }
    }
}

#[test]
fn finger_moved_identity_has_six_generators() {
    let d = shipped("heegaard-aa").unwrap();
    let mid = middle(&d);
    assert_eq!(mid.len(), 6);
    let mut labels: Vec<&str> = mid.iter().map(|g| d.label_of(g).unwrap()).collect();
    labels.sort();
    assert_eq!(labels, vec!["w1", "w2", "x", "y", "z1", "z2"]);
}

#[test]
fn finger_moved_identity_domains_connect_stated_generators() {
    let d = shipped("heegaard-aa").unwrap();
    let g = |l: &str| d.named_generator(l).unwrap();
    for (region, from, to, left, right) in [
        ("S1", "w1", "y", [0, 0, 0], [1, 0, 0]),
        ("R1", "z1", "y", [1, 0, 0], [0, 0, 0]),
        ("M", "y", "x", [0, 1, 0], [0, 1, 0]),
        ("R3", "x", "w2", [0, 0, 1], [0, 0, 0]),
        ("S3", "x", "z2", [0, 0, 0], [0, 0, 1]),
        ("B2", "w1", "w2", [0, 0, 0], [0, 0, 0]),
        ("B1", "z1", "z2", [0, 0, 0], [0, 0, 0]),
    ] {
        let b = d.domain(&[(1, region)]).unwrap();
        assert!(d.connects(&b, &g(from), &g(to)), "{region}");
        assert_eq!(d.left_boundary(&b), left.to_vec(), "{region}");
        assert_eq!(d.right_boundary(&b), right.to_vec(), "{region}");
    }
}

#[test]
fn canonical_identity_is_not_admissible() {
    let d = shipped("canonical-identity").unwrap();
    assert_eq!(d.periodic_domains().len(), 2);
    match d.check_admissible(Flavor::Full) {
        Admissibility::Witness(w) => {
            assert!(d.is_periodic(&w));
            assert!(w.iter().any(|&c| c != 0));
            assert!(w.iter().all(|&c| c >= 0) || w.iter().all(|&c| c <= 0));
        }
        a => panic!("accepted: {a:?}"),
    }
}

#[test]
fn finger_moved_identity_is_admissible_with_area_form() {
    let d = shipped("heegaard-aa").unwrap();
    for f in Flavor::ALL {
        let Admissibility::Admissible(area) = d.check_admissible(f) else { panic!("{f:?} rejected") };
        assert!(area.iter().all(|a| *a > BigRational::zero()));
        for p in d.periodic_domains_of(f) {
            let s: BigRational =
                p.iter().zip(&area).map(|(&c, a)| a * BigRational::from_integer(c.into())).sum();
            assert!(s.is_zero());
        }
    }
}

#[test]
fn flavor_implications_hold() {
    for n in shipped_names() {
        let d = shipped(n).unwrap();
        let ok = |f| d.check_admissible(f).is_admissible();
        if ok(Flavor::Full) {
            assert!(ok(Flavor::Left) && ok(Flavor::Right), "{n}");
        }
        if ok(Flavor::Left) || ok(Flavor::Right) {
            assert!(ok(Flavor::Provincial), "{n}");
        }
    }
}

#[test]
fn linear_program_agrees_with_brute_force() {
    for n in shipped_names() {
        let d = shipped(n).unwrap();
        for f in Flavor::ALL {
            let lp = d.check_admissible(f).is_admissible();
            let brute = d.brute_force_witness(f, 4).is_none();
            assert_eq!(lp, brute, "{n} {f:?}");
        }
    }
}

const SPHERE: &str = r#"{"name": "sphere", "genus": 0, "regions": [{"name": "Z", "euler4": 8, "z": true}],
 "points": [], "alphas": [], "betas": []}"#;

const THREE_SPHERE: &str = r#"{"name": "s3", "genus": 1, "regions": [{"name": "Z", "euler4": 0, "z": true}],
 "points": [{"name": "p", "alpha": "a", "beta": "b", "ne": "Z", "nw": "Z", "sw": "Z", "se": "Z"}],
 "alphas": [{"name": "a", "side": "circle", "points": ["p"]}], "betas": [{"name": "b", "points": ["p"]}]}"#;

const LENS: &str = r#"{"name": "lens-2", "genus": 1,
 "regions": [{"name": "A", "euler4": 0}, {"name": "Z", "euler4": 0, "z": true}],
 "points": [{"name": "p0", "alpha": "a", "beta": "b", "ne": "A", "nw": "Z", "sw": "A", "se": "Z"},
            {"name": "p1", "alpha": "a", "beta": "b", "ne": "Z", "nw": "A", "sw": "Z", "se": "A"}],
 "alphas": [{"name": "a", "side": "circle", "points": ["p0", "p1"]}],
 "betas": [{"name": "b", "points": ["p0", "p1"]}]}"#;

#[test]
fn empty_beta_set_has_one_empty_generator() {
    let d = ArcedDiagram::from_json(SPHERE).unwrap();
    let g = d.generators();
    assert_eq!(g.len(), 1);
    assert!(g[0].points.is_empty());
}

#[test]
fn all_regions_at_basepoint_gives_rank_zero() {
    let d = ArcedDiagram::from_json(THREE_SPHERE).unwrap();
    assert!(d.periodic_domains().is_empty());
    assert!(d.check_admissible(Flavor::Full).is_admissible());
}

#[test]
fn distinct_spin_c_classes_have_no_connecting_domain() {
    let d = ArcedDiagram::from_json(LENS).unwrap();
    let g = d.generators();
    assert_eq!(g.len(), 2);
    assert!(d.connecting_domain(&g[0], &g[1]).is_none());
    for a in -6..=6 {
        assert!(!d.connects(&[a, 0], &g[0], &g[1]));
    }
}

#[test]
fn zero_domain_connects_a_generator_to_itself() {
    for n in shipped_names() {
        let d = shipped(n).unwrap();
        for x in d.generators() {
            let b = d.connecting_domain(&x, &x).unwrap();
            assert!(d.is_periodic(&b));
            let zero = vec![0; d.regions.len()];
            let (l, r) = d.domain_grading(&zero, &x, &x).unwrap();
            assert!(l.is_identity() && r.is_identity());
        }
    }
}

#[test]
fn malformed_diagrams_are_rejected() {
    let bad_euler = THREE_SPHERE.replace("\"euler4\": 0", "\"euler4\": 4");
    assert!(ArcedDiagram::from_json(&bad_euler).is_err());
    let bad_point = LENS.replace("\"points\": [\"p0\", \"p1\"]}],\n \"betas\"", "\"points\": [\"p0\"]}],\n \"betas\"");
    assert!(ArcedDiagram::from_json(&bad_point).is_ok());
    let unknown = LENS.replace("\"ne\": \"A\"", "\"ne\": \"Q\"");
    assert!(ArcedDiagram::from_json(&unknown).is_err());
}

/// A random domain in `π2(x, y)`: a connecting domain plus a random
/// combination of periodic domains.
fn random_domain(d: &ArcedDiagram, x: &Generator, y: &Generator, coeffs: &[i64]) -> Domain {
    let mut b = d.connecting_domain(x, y).unwrap();
    for (c, p) in coeffs.iter().zip(d.periodic_domains()) {
        for (o, v) in b.iter_mut().zip(p) {
            *o += c * v;
        }
    }
    b
}

proptest! {
    #[test]
    fn grading_of_juxtaposition_is_the_product(
        which in 0usize..5,
        i in 0usize..6, j in 0usize..6, k in 0usize..6,
        c1 in proptest::collection::vec(-3i64..=3, 2),
        c2 in proptest::collection::vec(-3i64..=3, 2),
    ) {
        let name = shipped_names()[1 + which];
        let d = shipped(name).unwrap();
        let gens = middle(&d);
        let (x, y, w) = (&gens[i % gens.len()], &gens[j % gens.len()], &gens[k % gens.len()]);
        let b1 = random_domain(&d, x, y, &c1);
        let b2 = random_domain(&d, y, w, &c2);
        let sum: Domain = b1.iter().zip(&b2).map(|(a, b)| a + b).collect();
        let g = |b: &Domain, s, t| {
            let (l, r) = d.domain_grading(b, s, t).unwrap();
            BiGrading::pair(&l, &r)
        };
        prop_assert_eq!(g(&sum, x, w), g(&b1, x, y).mul(&g(&b2, y, w)));
    }
}
