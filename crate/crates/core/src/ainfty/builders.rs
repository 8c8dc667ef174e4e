//! Standard structures: identity bimodules, the algebra as an AA
//! bimodule, the bar resolution and the explicit DD identity.

use std::collections::HashMap;
use std::sync::Arc;

use super::*;
use crate::pmc::PointedMatchedCircle;
use crate::strands::{self, StrandGen};

fn idem_gens(alg: &Algebra) -> Vec<Gen> {
    (0..alg.num_idempotents())
        .map(|p| Gen { label: alg.label(alg.idem_elem(p)).to_string(), left: p, right: p })
        .collect()
}

/// The rank-one DA bimodule `[Id]`: one generator per idempotent and
/// `δ(ι, a) = a ⊗ ι'`.
pub fn identity_da(alg: Arc<Algebra>) -> Bimodule {
    let gens = idem_gens(&alg);
    let mut m = Bimodule::new(
        &format!("[Id]({})", alg.name()),
        Some(Side::new(Tag::D, alg.clone())),
        Some(Side::new(Tag::A, alg.clone())),
        gens,
    );
    for a in alg.augmentation_basis() {
        m.add((vec![], alg.left_idem(a), vec![a]), &[Term::new(Some(a), alg.right_idem(a), None)]);
    }
    m
}

/// The algebra as an AA bimodule over itself.
pub fn algebra_aa(alg: Arc<Algebra>) -> Bimodule {
    let gens: Vec<Gen> = (0..alg.dim())
        .map(|a| Gen { label: alg.label(a).to_string(), left: alg.left_idem(a), right: alg.right_idem(a) })
        .collect();
    let mut m = Bimodule::new(
        alg.name(),
        Some(Side::new(Tag::A, alg.clone())),
        Some(Side::new(Tag::A, alg.clone())),
        gens,
    );
    let aug = alg.augmentation_basis();
    for x in 0..alg.dim() {
        let d: Vec<Term> = alg.d(x).iter().map(|&c| Term::new(None, c, None)).collect();
        m.add((vec![], x, vec![]), &d);
        for &b in &aug {
            let left: Vec<Term> = alg.mul(b, x).iter().map(|&c| Term::new(None, c, None)).collect();
            m.add((vec![b], x, vec![]), &left);
            let right: Vec<Term> = alg.mul(x, b).iter().map(|&c| Term::new(None, c, None)).collect();
            m.add((vec![], x, vec![b]), &right);
        }
    }
    m
}

/// The bar resolution as a DD bimodule over the algebra on both sides, on
/// words of length at most `max_len` (a sub-bimodule, since the
/// differential never lengthens words).
pub fn bar_dd(alg: Arc<Algebra>, max_len: usize) -> Bimodule {
    let mut words: Vec<(Vec<usize>, usize, usize)> = Vec::new();
    for p in 0..alg.num_idempotents() {
        words.push((vec![], p, p));
    }
    for p in 0..alg.num_idempotents() {
        for w in sequences(&alg, p, max_len, false) {
            if !w.is_empty() {
                let r = alg.right_idem(*w.last().unwrap());
                words.push((w, p, r));
            }
        }
    }
    let index: HashMap<(Vec<usize>, usize), usize> = words.iter().enumerate().map(|(i, (w, l, _))| ((w.clone(), *l), i)).collect();
    let find = |w: &[usize], idem: usize| -> usize {
        let l = w.first().map(|&a| alg.left_idem(a)).unwrap_or(idem);
        index[&(w.to_vec(), l)]
    };
    let gens: Vec<Gen> = words
        .iter()
        .map(|(w, l, r)| {
            let label = if w.is_empty() {
                format!("[]{}", alg.label(alg.idem_elem(*l)))
            } else {
                format!("[{}]", w.iter().map(|&a| alg.label(a)).collect::<Vec<_>>().join("|"))
            };
            Gen { label, left: *l, right: *r }
        })
        .collect();
    let mut m = Bimodule::new(
        &format!("Bar({})", alg.name()),
        Some(Side::new(Tag::D, alg.clone())),
        Some(Side::new(Tag::D, alg.clone())),
        gens,
    );
    for (x, (w, l, r)) in words.iter().enumerate() {
        let k = w.len();
        if k == 0 {
            continue;
        }
        let (il, ir) = (alg.idem_elem(*l), alg.idem_elem(*r));
        let mut terms = Vec::new();
        terms.push(Term::new(Some(w[0]), find(&w[1..], alg.right_idem(w[0])), Some(ir)));
        terms.push(Term::new(Some(il), find(&w[..k - 1], alg.left_idem(w[k - 1])), Some(w[k - 1])));
        for p in 0..k {
            for &c in alg.d(w[p]) {
                let mut w2 = w.clone();
                w2[p] = c;
                terms.push(Term::new(Some(il), find(&w2, *l), Some(ir)));
            }
        }
        for p in 0..k - 1 {
            for &c in alg.mul(w[p], w[p + 1]) {
                let mut w2 = w[..p].to_vec();
                w2.push(c);
                w2.extend_from_slice(&w[p + 2..]);
                terms.push(Term::new(Some(il), find(&w2, *l), Some(ir)));
            }
        }
        m.add((vec![], x, vec![]), &terms);
    }
    m
}

fn idem_position(alg: &Algebra, pairs: &[usize]) -> Option<usize> {
    let basis = alg.strands()?;
    (0..alg.num_idempotents()).find(|&p| basis[alg.idem_elem(p)].horizontals == pairs)
}

fn strand_index(alg: &Algebra) -> HashMap<StrandGen, usize> {
    alg.strands().expect("strand algebra").iter().cloned().enumerate().map(|(i, g)| (g, i)).collect()
}

/// The explicit DD identity bimodule of `z` in strands grading `i`, with
/// left type D side over `a = A(z, i)` and right type D side over the
/// opposite of `b = A(-z, -i)`. Generators pair an idempotent with the
/// complementary one; the differential is the sum over chords `ρ` of
/// `a(ρ) ⊗ a(-ρ)`.
pub fn cfdd_identity_over(z: &PointedMatchedCircle, i: i64, a: Arc<Algebra>, b: Arc<Algebra>) -> Bimodule {
    let rz = z.reverse();
    let n = z.num_points();
    let flip = |p: usize| n + 1 - p;
    // pair index of -z holding the image of each pair of z
    let pair_map: Vec<usize> = z.pairs().iter().map(|&(p, _)| rz.pair_of(flip(p))).collect();
    let bop = Arc::new(b.opposite());
    let mut gens = Vec::new();
    let mut by_left: HashMap<usize, usize> = HashMap::new();
    for p in 0..a.num_idempotents() {
        let s = &a.strands().expect("strand algebra")[a.idem_elem(p)].horizontals;
        let mut comp: Vec<usize> = (0..z.num_pairs()).filter(|q| !s.contains(q)).map(|q| pair_map[q]).collect();
        comp.sort();
        if let Some(q) = idem_position(&b, &comp) {
            by_left.insert(p, gens.len());
            gens.push(Gen {
                label: format!("{}|{}", a.label(a.idem_elem(p)), b.label(b.idem_elem(q))),
                left: p,
                right: q,
            });
        }
    }
    let mut m = Bimodule::new(
        "CFDD(Id)",
        Some(Side::new(Tag::D, a.clone())),
        Some(Side::new(Tag::D, bop)),
        gens.clone(),
    );
    let ia = strand_index(&a);
    let ib = strand_index(&b);
    for x0 in 1..=n {
        for x1 in (x0 + 1)..=n {
            let alphas = strands::a_of_chords(z, i, &[(x0, x1)]);
            let betas = strands::a_of_chords(&rz, -i, &[(flip(x1), flip(x0))]);
            for al in &alphas {
                let Some(&ai) = ia.get(al) else { continue };
                let (Some(&x), Some(&y)) = (by_left.get(&a.left_idem(ai)), by_left.get(&a.right_idem(ai))) else {
                    continue;
                };
                for be in &betas {
                    let Some(&bi) = ib.get(be) else { continue };
                    if b.left_idem(bi) == gens[x].right && b.right_idem(bi) == gens[y].right {
                        m.add((vec![], x, vec![]), &[Term::new(Some(ai), y, Some(bi))]);
                    }
                }
            }
        }
    }
    m
}

pub fn cfdd_identity(z: &PointedMatchedCircle, i: i64) -> Bimodule {
    let a = Arc::new(strands::algebra_basis(z, i));
    let b = Arc::new(strands::algebra_basis(&z.reverse(), -i));
    cfdd_identity_over(z, i, a, b)
}

/// Result of dualizing a type D structure.
#[derive(Clone, Debug)]
pub struct Dualized {
    /// Morphisms from the DD identity (made type A on one side) to `N`,
    /// before simplification.
    pub raw: Bimodule,
    pub simplified: Simplified,
    /// The simplified module written as a right module.
    pub module: Bimodule,
}

/// Converts a left type D structure `n` over the left algebra of `dd` into
/// a right type A module over the algebra whose opposite is the right
/// algebra of `dd`: morphisms from `dd ⊠ algebra` to `n`, simplified.
pub fn dualize(n: &Bimodule, dd: &Bimodule, probe_len: usize) -> Result<Dualized> {
    let right = dd.right().ok_or_else(|| Error::TagMismatch("DD identity has no right side".into()))?;
    let m = box_tensor(dd, &algebra_aa(right.algebra.clone()))?;
    let raw = mor_d(&m, n, PairSide::Left)?;
    let simplified = simplify(&raw, probe_len)?;
    let module = simplified.result.mirror().named(&format!("dual({})", n.name));
    Ok(Dualized { raw, simplified, module })
}
