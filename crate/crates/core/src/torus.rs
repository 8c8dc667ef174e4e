//! Genus one: the torus algebra and the explicit bimodules over it.
//!
//! `ρ` labels elements of the torus algebra `A`, `σ` labels elements of
//! the algebra `B` of the orientation-reversed circle. The two are
//! isomorphic through `σ_i ↔ ρ_i`. Right actions and right outputs over
//! `B` are stored as left ones over `B^op` and vice versa, following the
//! container conventions.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::ainfty::{
    box_tensor, simplify, Bimodule, Gen, PatternRule, Side, Simplified, StructureMorphism, Tag, Term,
};
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::grading::{GradingElement, Twist};
use crate::pmc::PointedMatchedCircle;
use crate::strands;

/// Input length used when verifying simplifications of torus bimodules.
pub const PROBE_LEN: usize = 6;

const STRAND_LABELS: [(&str, &str); 8] = [
    ("I{0}", "0"),
    ("I{1}", "1"),
    ("1>2", "1"),
    ("2>3", "2"),
    ("3>4", "3"),
    ("1>3", "12"),
    ("2>4", "23"),
    ("1>4", "123"),
];

fn relabel(alg: Algebra, name: &str, idem: &str, chord: &str) -> Algebra {
    let labels = alg
        .labels()
        .iter()
        .map(|l| {
            let (i, (_, suffix)) = STRAND_LABELS.iter().enumerate().find(|(_, (s, _))| s == l).expect("torus label");
            if i < 2 {
                format!("{idem}{suffix}")
            } else {
                format!("{chord}{suffix}")
            }
        })
        .collect();
    alg.with_labels(name, labels)
}

/// The torus algebra `A(T^2, 0)` with labels `ι0, ι1, ρ1, ..., ρ123`.
pub fn torus_algebra() -> Arc<Algebra> {
    static A: OnceLock<Arc<Algebra>> = OnceLock::new();
    A.get_or_init(|| {
        let z = PointedMatchedCircle::torus();
        Arc::new(relabel(strands::algebra_basis(&z, 0), "torus", "ι", "ρ"))
    })
    .clone()
}

/// The algebra of the reversed torus circle, labels `j0, j1, σ1, ..., σ123`.
pub fn sigma_algebra() -> Arc<Algebra> {
    static B: OnceLock<Arc<Algebra>> = OnceLock::new();
    B.get_or_init(|| {
        let z = PointedMatchedCircle::torus().reverse();
        Arc::new(relabel(strands::algebra_basis(&z, 0), "torus-sigma", "j", "σ"))
    })
    .clone()
}

/// `B^op`, the algebra of right actions by `B` written as left ones.
pub fn sigma_opposite() -> Arc<Algebra> {
    static BOP: OnceLock<Arc<Algebra>> = OnceLock::new();
    BOP.get_or_init(|| Arc::new(sigma_algebra().opposite())).clone()
}

fn idem(alg: &Algebra, label: &str) -> usize {
    alg.idem_position(alg.gen(label)).expect("idempotent label")
}

/// Builds a bimodule from entries written as `L ; x ; R => terms`.
///
/// Inputs are whitespace-separated labels in container order. Terms are
/// separated by `+`; each lists the left output (if the left side is type
/// D), the generator and the right output (if the right side is type D),
/// with `1` for the idempotent.
fn build(name: &str, left: Option<Side>, right: Option<Side>, gens: &[(&str, &str, &str)], entries: &[&str]) -> Bimodule {
    let pos = |side: &Option<Side>, l: &str| side.as_ref().map(|s| idem(&s.algebra, l)).unwrap_or(0);
    let gens: Vec<Gen> = gens
        .iter()
        .map(|(g, l, r)| Gen { label: g.to_string(), left: pos(&left, l), right: pos(&right, r) })
        .collect();
    let mut m = Bimodule::new(name, left.clone(), right.clone(), gens);
    let elem = |side: &Option<Side>, l: &str| side.as_ref().expect("side").algebra.gen(l);
    for e in entries {
        let (lhs, rhs) = e.split_once("=>").expect("entry arrow");
        let parts: Vec<&str> = lhs.split(';').map(str::trim).collect();
        let inputs = |s: &str, side: &Option<Side>| s.split_whitespace().map(|l| elem(side, l)).collect::<Vec<_>>();
        let x = m.gen_index(parts[1]).expect("generator");
        let key = (inputs(parts[0], &left), x, inputs(parts[2], &right));
        let mut terms = Vec::new();
        for t in rhs.split('+') {
            let mut toks: Vec<&str> = t.split_whitespace().collect();
            let out = |side: &Option<Side>, tok: &str, y: usize, is_left: bool| -> Option<usize> {
                match side {
                    Some(s) if s.tag == Tag::D => Some(if tok == "1" {
                        let g = &m.gens[y];
                        s.algebra.idem_elem(if is_left { g.left } else { g.right })
                    } else {
                        s.algebra.gen(tok)
                    }),
                    _ => None,
                }
            };
            let ld = matches!(&left, Some(s) if s.tag == Tag::D);
            let rd = matches!(&right, Some(s) if s.tag == Tag::D);
            let lo = if ld { Some(toks.remove(0)) } else { None };
            let ro = if rd { toks.pop() } else { None };
            let y = m.gen_index(toks[0]).expect("generator");
            let l = lo.and_then(|tok| out(&left, tok, y, true));
            let r = ro.and_then(|tok| out(&right, tok, y, false));
            terms.push(Term::new(l, y, r));
        }
        m.add(key, &terms);
    }
    m
}

fn side(tag: Tag, alg: Arc<Algebra>) -> Option<Side> {
    Some(Side::new(tag, alg))
}

/// `CFAA(Id)` of the genus one identity: a right A∞ module over `B`
/// (stored as a left one over `B^op`) and over `A`.
pub fn cfaa_id() -> Bimodule {
    build(
        "CFAA(Id)",
        side(Tag::A, sigma_opposite()),
        side(Tag::A, torus_algebra()),
        &[
            ("w1", "j0", "ι1"),
            ("z1", "j1", "ι0"),
            ("y", "j1", "ι1"),
            ("x", "j0", "ι0"),
            ("w2", "j0", "ι1"),
            ("z2", "j1", "ι0"),
        ],
        &[
            "σ1 ; w1 ; => y",
            "; z1 ; ρ1 => y",
            "σ2 ; y ; ρ2 => x",
            "; x ; ρ3 => w2",
            "σ3 ; x ; => z2",
            "; w1 ; => w2",
            "; z1 ; => z2",
            "σ12 ; w1 ; ρ23 => w2",
            "σ23 ; z1 ; ρ12 => z2",
            "σ12 ; w1 ; ρ2 => x",
            "σ2 ; y ; ρ23 => w2",
            "σ2 ; z1 ; ρ12 => x",
            "σ23 ; y ; ρ2 => z2",
            "σ123 ; w1 ; ρ2 => z2",
            "σ1 σ2 σ3 ; w1 ; ρ2 => z2",
            "σ2 ; z1 ; ρ123 => w2",
        ],
    )
}

/// The six-generator DD identity, left type D over `A` and right type D
/// over `B`.
pub fn cfdd_id_big() -> Bimodule {
    build(
        "CFDD(Id) big",
        side(Tag::D, torus_algebra()),
        side(Tag::D, sigma_opposite()),
        &[
            ("w1", "ι1", "j0"),
            ("z1", "ι0", "j1"),
            ("y", "ι1", "j1"),
            ("x", "ι0", "j0"),
            ("w2", "ι1", "j0"),
            ("z2", "ι0", "j1"),
        ],
        &[
            "; w1 ; => 1 y σ3 + 1 w2 1",
            "; z1 ; => ρ3 y 1 + 1 z2 1 + ρ123 w2 σ2",
            "; y ; => ρ2 x σ2",
            "; x ; => ρ1 w2 1 + 1 z2 σ1",
        ],
    )
}

/// The two-generator DD identity.
pub fn cfdd_id_small() -> Bimodule {
    build(
        "CFDD(Id)",
        side(Tag::D, torus_algebra()),
        side(Tag::D, sigma_opposite()),
        &[("p", "ι0", "j0"), ("q", "ι1", "j1")],
        &["; p ; => ρ1 q σ3 + ρ3 q σ1 + ρ123 q σ123", "; q ; => ρ2 p σ2"],
    )
}

/// The general DD identity construction for the torus, over the labelled
/// algebras.
pub fn cfdd_id_generic() -> Bimodule {
    crate::ainfty::cfdd_identity_over(&PointedMatchedCircle::torus(), 0, torus_algebra(), sigma_algebra())
}

fn da(name: &str, gens: &[(&str, &str, &str)], entries: &[&str]) -> Bimodule {
    build(name, side(Tag::D, torus_algebra()), side(Tag::A, torus_algebra()), gens, entries)
}

/// The DA bimodule of a Dehn twist.
pub fn dehn_twist_da(t: Twist) -> Bimodule {
    let pqr = [("p", "ι0", "ι0"), ("q", "ι1", "ι1"), ("r", "ι1", "ι0")];
    let pqs = [("p", "ι0", "ι0"), ("q", "ι1", "ι1"), ("s", "ι0", "ι1")];
    match t {
        Twist::M => da(
            "CFDA(m)",
            &pqr,
            &[
                "; p ; ρ1 => ρ1 q",
                "; p ; ρ123 => ρ123 q",
                "; p ; ρ3 ρ23 => ρ3 q",
                "; p ; ρ12 => ρ123 r",
                "; p ; ρ3 ρ2 => ρ3 r",
                "; q ; ρ2 => ρ23 r",
                "; q ; ρ23 => ρ23 q",
                "; r ; => ρ2 p",
                "; r ; ρ3 => 1 q",
            ],
        ),
        Twist::MInv => da(
            "CFDA(M)",
            &pqr,
            &[
                "; p ; ρ1 => ρ1 q",
                "; p ; ρ123 => ρ123 q",
                "; p ; ρ123 ρ2 => ρ12 p",
                "; p ; => ρ3 r",
                "; p ; ρ12 => ρ1 r",
                "; q ; ρ23 ρ2 => ρ2 p",
                "; q ; ρ2 => 1 r",
                "; q ; ρ23 => ρ23 q",
                "; r ; ρ3 ρ2 => ρ2 p",
                "; r ; ρ3 => ρ23 q",
            ],
        ),
        Twist::L => da(
            "CFDA(l)",
            &pqs,
            &[
                "; q ; ρ2 ρ12 => ρ2 p",
                "; q ; ρ2 ρ1 => ρ2 s",
                "; q ; ρ2 ρ123 => ρ23 q",
                "; p ; ρ1 => ρ12 s",
                "; p ; ρ12 => ρ12 p",
                "; p ; ρ3 => ρ3 q",
                "; p ; ρ123 => ρ123 q",
                "; s ; => ρ1 q",
                "; s ; ρ23 => ρ3 q",
                "; s ; ρ2 => 1 p",
            ],
        ),
        Twist::LInv => da(
            "CFDA(L)",
            &pqs,
            &[
                "; q ; => ρ2 s",
                "; p ; ρ12 => ρ12 p",
                "; p ; ρ1 => 1 s",
                "; p ; ρ3 => ρ3 q",
                "; p ; ρ123 => ρ123 q",
                "; p ; ρ12 ρ1 => ρ1 q",
                "; s ; ρ2 ρ1 => ρ1 q",
                "; s ; ρ23 => ρ123 q",
                "; s ; ρ2 => ρ12 p",
            ],
        ),
    }
}

/// Gradings of the generators of `dehn_twist_da(t)`, with the grading set
/// based at `p`.
pub fn dehn_twist_gradings(t: Twist) -> Vec<GradingElement> {
    let zero = GradingElement::new(0, vec![0, 0, 0]);
    let third = match t {
        Twist::M | Twist::L => GradingElement::new(1, vec![1, 1, 0]),
        Twist::MInv | Twist::LInv => GradingElement::new(-1, vec![-1, -1, 0]),
    };
    vec![zero.clone(), zero, third]
}

/// Solid torus framings with explicit type D models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Framing {
    Zero,
    /// The `-1`-framed solid torus, unbounded model.
    MinusOneM,
    /// The `-1`-framed solid torus, bounded model.
    MinusOneN,
}

/// Type D structure of a solid torus over `A`.
pub fn solid_torus_d(f: Framing) -> Bimodule {
    let a = side(Tag::D, torus_algebra());
    match f {
        Framing::Zero => build("CFD(0)", a, None, &[("x", "ι0", "")], &["; x ; => ρ12 x"]),
        Framing::MinusOneM => build(
            "CFD(-1) M",
            a,
            None,
            &[("a", "ι0", ""), ("b", "ι1", "")],
            &["; a ; => ρ12 a + ρ1 b + ρ3 b", "; b ; => ρ23 b"],
        ),
        Framing::MinusOneN => build(
            "CFD(-1) N",
            a,
            None,
            &[("c", "ι0", ""), ("d", "ι1", "")],
            &["; c ; => ρ1 d + ρ3 d"],
        ),
    }
}

/// The isomorphism `N -> M` of the two `-1`-framed models:
/// `c ↦ a`, `d ↦ b + ρ2 a`.
pub fn solid_torus_iso() -> StructureMorphism {
    let n = Arc::new(solid_torus_d(Framing::MinusOneN));
    let m = Arc::new(solid_torus_d(Framing::MinusOneM));
    let alg = torus_algebra();
    let mut f = StructureMorphism::new("f", n, m.clone());
    let (a, b) = (m.gen_index("a").unwrap(), m.gen_index("b").unwrap());
    let (i0, i1) = (alg.gen("ι0"), alg.gen("ι1"));
    f.add((vec![], 0, vec![]), &[Term::new(Some(i0), a, None)]);
    f.add((vec![], 1, vec![]), &[Term::new(Some(i1), b, None), Term::new(Some(alg.gen("ρ2")), a, None)]);
    f
}

/// The inverse of `solid_torus_iso`: `a ↦ c`, `b ↦ d + ρ2 c`.
pub fn solid_torus_iso_inverse() -> StructureMorphism {
    let n = Arc::new(solid_torus_d(Framing::MinusOneN));
    let m = Arc::new(solid_torus_d(Framing::MinusOneM));
    let alg = torus_algebra();
    let mut g = StructureMorphism::new("g", m, n.clone());
    let (c, d) = (n.gen_index("c").unwrap(), n.gen_index("d").unwrap());
    g.add((vec![], 0, vec![]), &[Term::new(Some(alg.gen("ι0")), c, None)]);
    g.add((vec![], 1, vec![]), &[Term::new(Some(alg.gen("ι1")), d, None), Term::new(Some(alg.gen("ρ2")), c, None)]);
    g
}

/// Type A module of the `0`-framed solid torus, a right module over `B`:
/// `m(y, σ3, σ23, ..., σ23, σ2) = y` for any number of `σ23`.
pub fn solid_torus_a() -> Bimodule {
    let b = sigma_algebra();
    let gens = vec![Gen { label: "y".into(), left: 0, right: idem(&b, "j0") }];
    let rule = PatternRule {
        right_side: true,
        gen: 0,
        out: 0,
        prefix: vec![b.gen("σ3")],
        repeat: vec![b.gen("σ23")],
        suffix: vec![b.gen("σ2")],
        labels: b.labels().to_vec(),
    };
    Bimodule::new("CFA(0)", None, side(Tag::A, b), gens).with_rule(Arc::new(rule))
}

/// Parses a comma-separated word such as `m,M,l,L`.
pub fn parse_word(s: &str) -> Result<Vec<Twist>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| Twist::parse(t).ok_or_else(|| Error::Parse(format!("unknown twist {t:?}"))))
        .collect()
}

/// The word read backwards with every letter inverted.
pub fn inverse_word(w: &[Twist]) -> Vec<Twist> {
    w.iter().rev().map(|t| t.inverse()).collect()
}

/// The DA bimodule of a product of twists: the factors tensored left to
/// right, simplified after each step. Returns the final simplification.
pub fn mcg_word_bimodule(word: &[Twist]) -> Result<Simplified> {
    let (first, rest) = word.split_first().ok_or_else(|| Error::Parse("empty word".into()))?;
    let mut cur = simplify(&dehn_twist_da(*first), PROBE_LEN)?;
    for t in rest {
        let next = box_tensor(&cur.result, &dehn_twist_da(*t))?;
        cur = simplify(&next, PROBE_LEN)?;
    }
    let name = word.iter().map(|t| t.letter()).collect::<Vec<_>>().join(",");
    cur.result = cur.result.named(&format!("CFDA({name})"));
    Ok(cur)
}

/// Names of the eleven basis morphisms of the duality example, keyed by
/// the generator labels produced by `dualize`.
pub const DUALITY_NAMES: [(&str, &str); 11] = [
    ("X", "ι0⊠j0⊠p*⊠x"),
    ("T1", "ι0⊠σ2⊠p*⊠x"),
    ("T2", "ι0⊠σ12⊠p*⊠x"),
    ("T3", "ρ2⊠σ3⊠q*⊠x"),
    ("T4", "ρ2⊠σ23⊠q*⊠x"),
    ("T5", "ρ2⊠σ123⊠q*⊠x"),
    ("H1", "ρ2⊠j1⊠q*⊠x"),
    ("H2", "ρ2⊠σ1⊠q*⊠x"),
    ("H3", "ρ12⊠j0⊠p*⊠x"),
    ("H4", "ρ12⊠σ2⊠p*⊠x"),
    ("H5", "ρ12⊠σ12⊠p*⊠x"),
];

/// Expected differential of the duality example, by name.
pub const DUALITY_ARROWS: [(&str, &str); 8] = [
    ("T1", "H1"),
    ("T2", "H2"),
    ("T3", "H3"),
    ("T4", "H4"),
    ("T5", "H5"),
    ("X", "H3"),
    ("T1", "H4"),
    ("T2", "H5"),
];

/// Outcome of the duality example.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub basis: Vec<String>,
    pub homology_rank: usize,
    pub checks: Vec<(String, bool)>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn render(&self) -> String {
        let mut s = format!("basis ({}): {}\nhomology rank: {}\n", self.basis.len(), self.basis.join(" "), self.homology_rank);
        for (name, ok) in &self.checks {
            s.push_str(&format!("{} {}\n", if *ok { "ok  " } else { "FAIL" }, name));
        }
        s
    }
}

/// Dualizes the `0`-framed solid torus through the DD identity and checks
/// the resulting morphism complex and module against the expected answer.
/// Patterns `m(y, σ3, σ23^i, σ2) = y` are compared for `i <= max_repeat`.
pub fn duality_example_check(max_repeat: usize) -> Result<DualityReport> {
    let d = crate::ainfty::dualize(&solid_torus_d(Framing::Zero), &cfdd_id_small(), PROBE_LEN)?;
    let raw = &d.raw;
    let name_of = |g: usize| -> String {
        let l = &raw.gens[g].label;
        DUALITY_NAMES.iter().find(|(_, k)| k == l).map(|(n, _)| n.to_string()).unwrap_or_else(|| l.clone())
    };
    let idx = |n: &str| -> Option<usize> {
        let label = DUALITY_NAMES.iter().find(|(m, _)| *m == n)?.1;
        raw.gen_index(label)
    };
    let vec_of = |names: &[&str]| -> Option<Vec<usize>> {
        let mut v = names.iter().map(|n| idx(n)).collect::<Option<Vec<_>>>()?;
        v.sort_unstable();
        Some(v)
    };
    let basis: Vec<String> = (0..raw.num_gens()).map(name_of).collect();
    let complex = raw.to_chain_complex()?;
    let h = complex.homology();
    let mut checks = Vec::new();
    checks.push(("eleven basis morphisms".to_string(), raw.num_gens() == 11));
    checks.push(("every basis morphism is named".to_string(), DUALITY_NAMES.iter().all(|(n, _)| idx(n).is_some())));
    checks.push(("homology has rank 1".to_string(), h.rank() == 1));
    let mut arrows: Vec<(String, String)> = Vec::new();
    for (j, col) in complex.d.iter().enumerate() {
        for &i in col {
            arrows.push((basis[j].clone(), basis[i].clone()));
        }
    }
    arrows.sort();
    let mut expected: Vec<(String, String)> = DUALITY_ARROWS.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    expected.sort();
    checks.push(("differential is T_i -> H_i plus X -> H3, T1 -> H4, T2 -> H5".to_string(), arrows == expected));
    let act = |v: &[usize], label: &str| -> Vec<usize> {
        let s = raw.left().expect("left action").algebra.gen(label);
        let mut out = Vec::new();
        for &g in v {
            crate::f2::add_into(&mut out, &raw.op(&(vec![s], g, vec![])).iter().map(|t| t.gen).collect::<Vec<_>>());
        }
        out
    };
    let diff = |v: &[usize]| crate::f2::apply(&complex.d, v);
    let y = vec_of(&["X", "T3"]);
    let t14 = vec_of(&["T1", "T4"]);
    let (h1, xt3) = (vec_of(&["H1"]), vec_of(&["X", "T3"]));
    let rel = |ok: Option<bool>| ok.unwrap_or(false);
    checks.push((
        "X+T3 is a cycle generating homology".to_string(),
        rel(y.as_ref().map(|y| diff(y).is_empty() && !h.is_boundary(y))),
    ));
    checks.push(("(X+T3)·σ3 = H1".to_string(), rel(y.as_ref().zip(h1.as_ref()).map(|(y, h1)| &act(y, "σ3") == h1))));
    checks.push(("∂(T1+T4) = H1".to_string(), rel(t14.as_ref().zip(h1.as_ref()).map(|(t, h1)| &diff(t) == h1))));
    checks.push((
        "(T1+T4)·σ2 = X+T3".to_string(),
        rel(t14.as_ref().zip(xt3.as_ref()).map(|(t, y)| &act(t, "σ2") == y)),
    ));
    checks.push((
        "(T1+T4)·σ23 = H1".to_string(),
        rel(t14.as_ref().zip(h1.as_ref()).map(|(t, h1)| &act(t, "σ23") == h1)),
    ));
    let module = &d.module;
    let target = solid_torus_a();
    let b = sigma_algebra();
    checks.push(("simplified module has one generator".to_string(), module.num_gens() == 1 && module.gens[0].right == target.gens[0].right));
    for i in 0..=max_repeat {
        let mut seq = vec![b.gen("σ3")];
        seq.extend(std::iter::repeat(b.gen("σ23")).take(i));
        seq.push(b.gen("σ2"));
        let key = (vec![], 0, seq);
        let ok = module.num_gens() == 1 && module.op(&key) == vec![Term::new(None, 0, None)];
        checks.push((format!("m(y, σ3, σ23^{i}, σ2) = y"), ok));
    }
    let len = max_repeat + 2;
    let agree = module.num_gens() == 1
        && crate::ainfty::all_keys(&target.shape, &target.gens, len).iter().all(|k| module.op(k) == target.op(k));
    checks.push((format!("no other operations on inputs of length <= {len}"), agree));
    Ok(DualityReport { basis, homology_rank: h.rank(), checks })
}

/// Homology of the morphism complex of the two-generator DD identity to
/// itself: the total rank and the rank in λ-degree zero.
///
/// Generators are graded in `G(Z) ×_λ G(-Z)` with `p` at the identity;
/// degrees are taken modulo the subgroup generated by the loops of the
/// differential, searched up to `depth` letters.
pub fn dd_identity_endomorphisms(depth: usize) -> Result<(usize, usize)> {
    use crate::grading::{in_subgroup, torus_refinement, BiGrading};
    let dd = cfdd_id_small();
    let (complex, basis) = crate::ainfty::mor_direct(&dd, &dd)?;
    let z = PointedMatchedCircle::torus();
    let rf = torus_refinement();
    let ga = rf.refine_table(&z, &torus_algebra())?;
    let gb = rf.refine_table(&z, &sigma_algebra())?;
    let pair = |a: usize, b: usize| BiGrading::pair(&ga[a], &gb[b]);
    let lam = |n: i64| BiGrading::pair(&GradingElement::lambda(4, n), &GradingElement::identity(4));
    let q = dd.gen_index("q").expect("q");
    let p = dd.gen_index("p").expect("p");
    let mut gr = vec![lam(0); 2];
    let back = dd.zero_input_terms(q);
    let t = back.iter().find(|t| t.gen == p).ok_or_else(|| Error::StructureViolation("no q -> p term".into()))?;
    // λ^{-1} gr(q) = gr(a, b) gr(p)
    gr[q] = lam(1).mul(&pair(t.left.unwrap(), t.right.unwrap())).mul(&gr[p]);
    let mut loops = Vec::new();
    for x in 0..2 {
        for t in dd.zero_input_terms(x) {
            loops.push(lam(1).mul(&pair(t.left.unwrap(), t.right.unwrap())).mul(&gr[t.gen]).mul(&gr[x].inv()));
        }
    }
    let degree = |b: &crate::ainfty::MorBasis| -> Option<i64> {
        let g = pair(b.left?, b.right?).mul(&gr[b.target]).mul(&gr[b.source].inv());
        (-6..=6).find(|&k| in_subgroup(&lam(-k).mul(&g), &loops, depth))
    };
    let degs: Vec<Option<i64>> = basis.iter().map(degree).collect();
    let zero: Vec<usize> = (0..basis.len()).filter(|&j| degs[j] == Some(0)).collect();
    let pos: std::collections::HashMap<usize, usize> = zero.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let d0: Vec<Vec<usize>> = zero.iter().map(|&j| complex.d[j].clone()).collect();
    let kernel = zero.len() - crate::f2::rank(&d0);
    let into: Vec<Vec<usize>> = (0..basis.len())
        .filter(|j| !pos.contains_key(j))
        .map(|j| crate::f2::from_list(complex.d[j].iter().filter_map(|i| pos.get(i).copied()).collect()))
        .collect();
    let image = crate::f2::rank(&into);
    Ok((complex.homology_rank(), kernel - image))
}
