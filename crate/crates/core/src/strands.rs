//! Strands algebras `A(n,k)` and `A(Z,i)`.
//!
//! A generator of `A(Z,i)` is a set of moving strands `(a,b)`, `a < b`,
//! together with a set of horizontal matched pairs. Expanding each
//! horizontal pair into a choice of one of its two points gives the sum of
//! strand diagrams in `A(4k, k+i)` the generator stands for.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::{Algebra, Elem};
use crate::f2::{self, F2Vec, Homology};
use crate::pmc::PointedMatchedCircle;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrandGen {
    pub moving: Vec<(usize, usize)>,
    pub horizontals: Vec<usize>,
}

impl fmt::Display for StrandGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.moving.iter().map(|(a, b)| format!("{a}>{b}")).collect();
        let h: Vec<String> = self.horizontals.iter().map(|p| p.to_string()).collect();
        if m.is_empty() {
            write!(f, "I{{{}}}", h.join(","))
        } else if h.is_empty() {
            write!(f, "{}", m.join(","))
        } else {
            write!(f, "{}|{{{}}}", m.join(","), h.join(","))
        }
    }
}

/// Basis element `(S, T, phi)` of `A(n,k)`, stored as the sorted list of
/// pairs `(x, phi(x))`.
pub type SmallGen = Vec<(usize, usize)>;

pub fn inversions(strands: &[(usize, usize)]) -> usize {
    let mut c = 0;
    for i in 0..strands.len() {
        for j in 0..strands.len() {
            let (x1, y1) = strands[i];
            let (x2, y2) = strands[j];
            if x1 < x2 && y1 > y2 {
                c += 1;
            }
        }
    }
    c
}

/// Product in `A(n,k)`.
pub fn small_mul(a: &SmallGen, b: &SmallGen) -> Option<SmallGen> {
    let mut ta: Vec<usize> = a.iter().map(|s| s.1).collect();
    ta.sort();
    let sb: Vec<usize> = b.iter().map(|s| s.0).collect();
    if ta != sb {
        return None;
    }
    let bmap: HashMap<usize, usize> = b.iter().cloned().collect();
    let mut c: SmallGen = a.iter().map(|&(x, y)| (x, bmap[&y])).collect();
    c.sort();
    if inversions(&c) == inversions(a) + inversions(b) {
        Some(c)
    } else {
        None
    }
}

/// Differential in `A(n,k)`.
pub fn small_diff(a: &SmallGen) -> Vec<SmallGen> {
    let inv = inversions(a);
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in 0..a.len() {
            let (x1, y1) = a[i];
            let (x2, y2) = a[j];
            if x1 < x2 && y1 > y2 {
                let mut c = a.clone();
                c[i] = (x1, y2);
                c[j] = (x2, y1);
                if inversions(&c) + 1 == inv {
                    out.push(c);
                }
            }
        }
    }
    out
}

impl StrandGen {
    pub fn idempotent(pairs: Vec<usize>) -> Self {
        StrandGen { moving: vec![], horizontals: pairs }
    }

    pub fn is_idempotent(&self) -> bool {
        self.moving.is_empty()
    }

    pub fn num_strands(&self) -> usize {
        self.moving.len() + self.horizontals.len()
    }

    /// Occupied matched pairs at the bottom.
    pub fn left_pairs(&self, z: &PointedMatchedCircle) -> Vec<usize> {
        let mut v: Vec<usize> = self.moving.iter().map(|&(a, _)| z.pair_of(a)).collect();
        v.extend(&self.horizontals);
        v.sort();
        v
    }

    /// Occupied matched pairs at the top.
    pub fn right_pairs(&self, z: &PointedMatchedCircle) -> Vec<usize> {
        let mut v: Vec<usize> = self.moving.iter().map(|&(_, b)| z.pair_of(b)).collect();
        v.extend(&self.horizontals);
        v.sort();
        v
    }

    /// Local multiplicities on the `4k-1` intervals between consecutive points.
    pub fn multiplicity(&self, z: &PointedMatchedCircle) -> Vec<i64> {
        let n = z.num_points();
        let mut m = vec![0i64; n.saturating_sub(1)];
        for &(a, b) in &self.moving {
            for x in m.iter_mut().take(b - 1).skip(a - 1) {
                *x += 1;
            }
        }
        m
    }

    /// Strands with every horizontal placed on the lower point of its pair.
    pub fn placed(&self, z: &PointedMatchedCircle) -> SmallGen {
        let mut s: SmallGen = self.moving.clone();
        for &h in &self.horizontals {
            let p = z.pair(h).0;
            s.push((p, p));
        }
        s.sort();
        s
    }

    /// Inversion count. It is the same for every placement of the
    /// horizontals once the crossings with them are paired with `m([a], S)`;
    /// this returns the count at the lower-point placement.
    pub fn inv(&self, z: &PointedMatchedCircle) -> usize {
        inversions(&self.placed(z))
    }

    /// Whether no two strands cross, counting a horizontal pair as present at
    /// both of its points.
    pub fn is_crossingless(&self) -> bool {
        inversions(&self.moving) == 0
    }

    pub fn is_crossingless_in(&self, z: &PointedMatchedCircle) -> bool {
        if inversions(&self.moving) != 0 {
            return false;
        }
        for &h in &self.horizontals {
            let (p, q) = z.pair(h);
            for &(a, b) in &self.moving {
                if (a < p && p < b) || (a < q && q < b) {
                    return false;
                }
            }
        }
        true
    }

    /// The sum of strand diagrams in `A(4k, k+i)` this generator stands for.
    pub fn expand(&self, z: &PointedMatchedCircle) -> Vec<SmallGen> {
        let mut out = vec![self.moving.clone()];
        for &h in &self.horizontals {
            let (p, q) = z.pair(h);
            let mut next = Vec::with_capacity(out.len() * 2);
            for s in out {
                let mut s1 = s.clone();
                s1.push((p, p));
                let mut s2 = s;
                s2.push((q, q));
                next.push(s1);
                next.push(s2);
            }
            out = next;
        }
        for s in out.iter_mut() {
            s.sort();
        }
        out
    }

    /// Reads a strand diagram of `A(4k, k+i)` as a term of some generator.
    pub fn from_small(z: &PointedMatchedCircle, s: &SmallGen) -> StrandGen {
        let mut moving = Vec::new();
        let mut horizontals = Vec::new();
        for &(x, y) in s {
            if x == y {
                horizontals.push(z.pair_of(x));
            } else {
                moving.push((x, y));
            }
        }
        moving.sort();
        horizontals.sort();
        StrandGen { moving, horizontals }
    }

    pub fn is_valid(&self, z: &PointedMatchedCircle) -> bool {
        let l = self.left_pairs(z);
        let r = self.right_pairs(z);
        let distinct = |v: &Vec<usize>| v.windows(2).all(|w| w[0] != w[1]);
        self.moving.iter().all(|&(a, b)| a < b && b <= z.num_points()) && distinct(&l) && distinct(&r)
    }
}

/// Regroups a sum of `A(4k, k+i)` diagrams into generators of `A(Z,i)`.
/// Fails if the sum is not a combination of full expansions.
pub fn collect(z: &PointedMatchedCircle, terms: &[SmallGen]) -> Result<Vec<StrandGen>, String> {
    let mut counts: BTreeMap<SmallGen, usize> = BTreeMap::new();
    for t in terms {
        *counts.entry(t.clone()).or_default() += 1;
    }
    let mut classes: BTreeMap<StrandGen, usize> = BTreeMap::new();
    for (s, c) in counts {
        if c % 2 == 1 {
            *classes.entry(StrandGen::from_small(z, &s)).or_default() += 1;
        }
    }
    let mut out = Vec::new();
    for (g, c) in classes {
        let full = 1usize << g.horizontals.len();
        if c != full {
            return Err(format!("{g} appears with {c} of {full} terms"));
        }
        out.push(g);
    }
    Ok(out)
}

/// Product computed by expanding both factors into `A(4k, k+i)`.
pub fn expanded_mul(z: &PointedMatchedCircle, a: &StrandGen, b: &StrandGen) -> Result<Vec<StrandGen>, String> {
    let mut terms = Vec::new();
    for x in a.expand(z) {
        for y in b.expand(z) {
            if let Some(c) = small_mul(&x, &y) {
                terms.push(c);
            }
        }
    }
    collect(z, &terms)
}

/// Differential computed through the expansion into `A(4k, k+i)`.
pub fn expanded_diff(z: &PointedMatchedCircle, a: &StrandGen) -> Result<Vec<StrandGen>, String> {
    let mut terms = Vec::new();
    for x in a.expand(z) {
        terms.extend(small_diff(&x));
    }
    collect(z, &terms)
}

/// Product on generators, matching strand endpoints directly.
pub fn direct_mul(z: &PointedMatchedCircle, a: &StrandGen, b: &StrandGen) -> Option<StrandGen> {
    if a.right_pairs(z) != b.left_pairs(z) {
        return None;
    }
    let b_start: HashMap<usize, usize> = b.moving.iter().cloned().collect();
    let mut moving = Vec::new();
    let mut horizontals = Vec::new();
    // placed strands of the product, used for the inversion count
    let mut placed_a: SmallGen = Vec::new();
    let mut placed_b: SmallGen = Vec::new();
    let mut placed_c: SmallGen = Vec::new();
    for &(x, y) in &a.moving {
        if let Some(&w) = b_start.get(&y) {
            moving.push((x, w));
            placed_a.push((x, y));
            placed_b.push((y, w));
            placed_c.push((x, w));
        } else if b.horizontals.contains(&z.pair_of(y)) {
            moving.push((x, y));
            placed_a.push((x, y));
            placed_b.push((y, y));
            placed_c.push((x, y));
        } else {
            return None;
        }
    }
    for &h in &a.horizontals {
        let (p, q) = z.pair(h);
        if let Some(&w) = b_start.get(&p) {
            moving.push((p, w));
            placed_a.push((p, p));
            placed_b.push((p, w));
            placed_c.push((p, w));
        } else if let Some(&w) = b_start.get(&q) {
            moving.push((q, w));
            placed_a.push((q, q));
            placed_b.push((q, w));
            placed_c.push((q, w));
        } else if b.horizontals.contains(&h) {
            horizontals.push(h);
            placed_a.push((p, p));
            placed_b.push((p, p));
            placed_c.push((p, p));
        } else {
            return None;
        }
    }
    // every moving strand of b must have been reached
    if placed_b.iter().filter(|s| s.0 != s.1).count() != b.moving.len() {
        return None;
    }
    placed_a.sort();
    placed_b.sort();
    placed_c.sort();
    if inversions(&placed_c) != inversions(&placed_a) + inversions(&placed_b) {
        return None;
    }
    moving.sort();
    horizontals.sort();
    Some(StrandGen { moving, horizontals })
}

/// Differential on generators: smoothings of moving-moving crossings and of
/// crossings between a moving strand and either point of a horizontal pair.
pub fn direct_diff(z: &PointedMatchedCircle, a: &StrandGen) -> Vec<StrandGen> {
    let placed = a.placed(z);
    let inv = inversions(&placed);
    let mut out = Vec::new();
    let m = &a.moving;
    for i in 0..m.len() {
        for j in 0..m.len() {
            let (x1, y1) = m[i];
            let (x2, y2) = m[j];
            if x1 < x2 && y1 > y2 {
                let mut c = a.clone();
                c.moving[i] = (x1, y2);
                c.moving[j] = (x2, y1);
                c.moving.sort();
                if inversions(&c.placed(z)) + 1 == inv {
                    out.push(c);
                }
            }
        }
    }
    for (hi, &h) in a.horizontals.iter().enumerate() {
        let (p, q) = z.pair(h);
        for point in [p, q] {
            for (i, &(x, y)) in m.iter().enumerate() {
                if x < point && point < y {
                    // inversion change is measured with the horizontal at `point`
                    let mut before: SmallGen = m.clone();
                    let mut after: SmallGen = m.clone();
                    for (hj, &h2) in a.horizontals.iter().enumerate() {
                        let pt = if hj == hi { point } else { z.pair(h2).0 };
                        before.push((pt, pt));
                        if hj != hi {
                            after.push((pt, pt));
                        }
                    }
                    after[i] = (x, point);
                    after.push((point, y));
                    before.sort();
                    after.sort();
                    if inversions(&after) + 1 == inversions(&before) {
                        let mut moving: Vec<(usize, usize)> =
                            after.iter().cloned().filter(|s| s.0 != s.1).collect();
                        moving.sort();
                        let mut horizontals = a.horizontals.clone();
                        horizontals.remove(hi);
                        out.push(StrandGen { moving, horizontals });
                    }
                }
            }
        }
    }
    out.sort();
    // pairs cancel
    let mut res: Vec<StrandGen> = Vec::new();
    for g in out {
        if res.last() == Some(&g) {
            res.pop();
        } else {
            res.push(g);
        }
    }
    res
}

/// All generators of `A(Z,i)`, sorted.
pub fn enumerate_generators(z: &PointedMatchedCircle, i: i64) -> Vec<StrandGen> {
    let k = z.genus() as i64;
    if i < -k || i > k {
        return vec![];
    }
    let total = (k + i) as usize;
    let n = z.num_points();
    let npairs = z.num_pairs();
    let chords: Vec<(usize, usize)> = (1..=n).flat_map(|a| ((a + 1)..=n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    fn rec(
        z: &PointedMatchedCircle,
        chords: &[(usize, usize)],
        idx: usize,
        total: usize,
        npairs: usize,
        used_s: &mut Vec<bool>,
        used_t: &mut Vec<bool>,
        chosen: &mut Vec<(usize, usize)>,
        out: &mut Vec<StrandGen>,
    ) {
        if chosen.len() > total {
            return;
        }
        if idx == chords.len() {
            let free: Vec<usize> = (0..npairs).filter(|&p| !used_s[p] && !used_t[p]).collect();
            let need = total - chosen.len();
            for h in subsets(&free, need) {
                out.push(StrandGen { moving: chosen.clone(), horizontals: h });
            }
            return;
        }
        rec(z, chords, idx + 1, total, npairs, used_s, used_t, chosen, out);
        let (a, b) = chords[idx];
        let (pa, pb) = (z.pair_of(a), z.pair_of(b));
        if !used_s[pa] && !used_t[pb] {
            used_s[pa] = true;
            used_t[pb] = true;
            chosen.push((a, b));
            rec(z, chords, idx + 1, total, npairs, used_s, used_t, chosen, out);
            chosen.pop();
            used_s[pa] = false;
            used_t[pb] = false;
        }
    }
    let mut used_s = vec![false; npairs];
    let mut used_t = vec![false; npairs];
    rec(z, &chords, 0, total, npairs, &mut used_s, &mut used_t, &mut chosen, &mut out);
    out.sort();
    out
}

pub(crate) fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(items: &[usize], start: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, i + 1, size, cur, out);
            cur.pop();
        }
    }
    if size <= items.len() {
        go(items, 0, size, &mut cur, &mut out);
    }
    out
}

pub fn algebra_name(z: &PointedMatchedCircle, i: i64) -> String {
    let pairs: Vec<String> = z.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("A([{}],{})", pairs.join(" "), i)
}

/// The algebra `A(Z,i)` with product and differential tables.
pub fn algebra_basis(z: &PointedMatchedCircle, i: i64) -> Algebra {
    let gens = enumerate_generators(z, i);
    build_algebra(z, i, gens, |_| true, &algebra_name(z, i))
}

fn build_algebra(
    z: &PointedMatchedCircle,
    _i: i64,
    gens: Vec<StrandGen>,
    keep: impl Fn(&StrandGen) -> bool,
    name: &str,
) -> Algebra {
    let gens: Vec<StrandGen> = gens.into_iter().filter(|g| keep(g)).collect();
    let index: HashMap<StrandGen, usize> = gens.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let mut idem_keys: Vec<Vec<usize>> = gens.iter().filter(|g| g.is_idempotent()).map(|g| g.horizontals.clone()).collect();
    idem_keys.sort();
    let idem_pos: HashMap<Vec<usize>, usize> = idem_keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let idempotents: Vec<usize> = idem_keys.iter().map(|k| index[&StrandGen::idempotent(k.clone())]).collect();
    let left_idem: Vec<usize> = gens.iter().map(|g| idem_pos[&g.left_pairs(z)]).collect();
    let right_idem: Vec<usize> = gens.iter().map(|g| idem_pos[&g.right_pairs(z)]).collect();
    let diff: Vec<Elem> = gens
        .iter()
        .map(|g| f2::from_list(direct_diff(z, g).iter().filter_map(|h| index.get(h).copied()).collect()))
        .collect();
    let mut by_left: HashMap<usize, Vec<usize>> = HashMap::new();
    for (j, _) in gens.iter().enumerate() {
        by_left.entry(left_idem[j]).or_default().push(j);
    }
    let mut products = Vec::new();
    for (a, ga) in gens.iter().enumerate() {
        if ga.is_idempotent() {
            continue;
        }
        if let Some(bs) = by_left.get(&right_idem[a]) {
            for &b in bs {
                let gb = &gens[b];
                if gb.is_idempotent() {
                    continue;
                }
                if let Some(c) = direct_mul(z, ga, gb) {
                    if let Some(&ci) = index.get(&c) {
                        products.push(((a, b), vec![ci]));
                    }
                }
            }
        }
    }
    let labels = gens.iter().map(|g| g.to_string()).collect();
    Algebra::from_tables(name, labels, idempotents, left_idem, right_idem, diff, products, Some(gens))
}

/// `a(rho)`: the sum of generators whose moving strands are the given chords.
pub fn a_of_chords(z: &PointedMatchedCircle, i: i64, chords: &[(usize, usize)]) -> Vec<StrandGen> {
    let k = z.genus() as i64;
    if i < -k || i > k {
        return vec![];
    }
    let total = (k + i) as usize;
    let mut moving: Vec<(usize, usize)> = chords.to_vec();
    moving.sort();
    if moving.len() > total || moving.iter().any(|&(a, b)| a >= b || b > z.num_points()) {
        return vec![];
    }
    let starts: Vec<usize> = moving.iter().map(|&(a, _)| z.pair_of(a)).collect();
    let ends: Vec<usize> = moving.iter().map(|&(_, b)| z.pair_of(b)).collect();
    let distinct = |v: &[usize]| {
        let mut w = v.to_vec();
        w.sort();
        w.windows(2).all(|p| p[0] != p[1])
    };
    if !distinct(&starts) || !distinct(&ends) {
        return vec![];
    }
    let free: Vec<usize> = (0..z.num_pairs()).filter(|p| !starts.contains(p) && !ends.contains(p)).collect();
    subsets(&free, total - moving.len())
        .into_iter()
        .map(|h| StrandGen { moving: moving.clone(), horizontals: h })
        .collect()
}

/// Element of an algebra built by `algebra_basis` from generators.
pub fn elem_of(alg: &Algebra, gens: &[StrandGen]) -> Elem {
    let basis = alg.strands().expect("strand algebra");
    let mut out = Vec::new();
    for g in gens {
        if let Some(i) = basis.iter().position(|b| b == g) {
            out.push(i);
        }
    }
    f2::from_list(out)
}

/// Quotient by the span of generators with some local multiplicity at least 2.
pub fn quotient_a_prime(z: &PointedMatchedCircle, i: i64) -> Algebra {
    let gens = enumerate_generators(z, i);
    build_algebra(z, i, gens, |g| g.multiplicity(z).iter().all(|&m| m <= 1), &format!("{}'", algebra_name(z, i)))
}

/// A homology block: fixed idempotents and fixed multiplicity vector.
#[derive(Clone, Debug)]
pub struct HomologyBlock {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub class: Vec<i64>,
    pub size: usize,
    pub rank: usize,
    /// Representative cycles, as basis indices of the algebra.
    pub representatives: Vec<F2Vec>,
    /// Doubled Maslov degrees of the representatives (all terms agree).
    pub maslov2: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct AlgebraHomology {
    pub blocks: Vec<HomologyBlock>,
}

impl AlgebraHomology {
    pub fn total_rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank).sum()
    }
}

/// Doubled Maslov component of the unrefined grading of a generator.
pub fn maslov2(z: &PointedMatchedCircle, g: &StrandGen) -> i64 {
    let placed = g.placed(z);
    let mult = g.multiplicity(z);
    let n = z.num_points();
    let m2 = |p: usize| -> i64 {
        let below = if p >= 2 { mult[p - 2] } else { 0 };
        let above = if p < n { mult[p - 1] } else { 0 };
        below + above
    };
    let s: i64 = placed.iter().map(|&(x, _)| m2(x)).sum();
    2 * inversions(&placed) as i64 - s
}

/// Blockwise homology of `A(Z,i)` by Gaussian elimination.
pub fn homology(z: &PointedMatchedCircle, alg: &Algebra) -> AlgebraHomology {
    let gens = alg.strands().expect("strand algebra");
    let mut blocks: BTreeMap<(Vec<usize>, Vec<usize>, Vec<i64>), Vec<usize>> = BTreeMap::new();
    for (j, g) in gens.iter().enumerate() {
        blocks.entry((g.left_pairs(z), g.right_pairs(z), g.multiplicity(z))).or_default().push(j);
    }
    let keys: Vec<_> = blocks.into_iter().collect();
    use rayon::prelude::*;
    let out: Vec<HomologyBlock> = keys
        .into_par_iter()
        .map(|((left, right, class), members)| {
            let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
            let d: Vec<F2Vec> = members
                .iter()
                .map(|&g| f2::from_list(alg.d(g).iter().map(|x| local[x]).collect()))
                .collect();
            let h = Homology::compute(&d);
            let representatives: Vec<F2Vec> = h
                .representatives
                .iter()
                .map(|r| {
                    let mut v: Vec<usize> = r.iter().map(|&x| members[x]).collect();
                    v.sort();
                    v
                })
                .collect();
            let maslov2 = representatives.iter().map(|r| maslov2(z, &gens[r[0]])).collect();
            HomologyBlock { left, right, class, size: members.len(), rank: h.rank(), representatives, maslov2 }
        })
        .collect();
    AlgebraHomology { blocks: out }
}

/// The predicted support: multiplicities in {0,1} and the half-match condition.
pub fn predicted_nonzero(z: &PointedMatchedCircle, left: &[usize], right: &[usize], class: &[i64]) -> bool {
    if class.iter().any(|&m| m < 0 || m > 1) {
        return false;
    }
    let n = z.num_points();
    let interior = |p: usize| -> bool {
        let below = if p >= 2 { class[p - 2] } else { 0 };
        let above = if p < n { class[p - 1] } else { 0 };
        below > 0 && above > 0
    };
    for p1 in 1..=n {
        let p2 = z.mate(p1);
        if interior(p1) && !interior(p2) {
            let m = z.pair_of(p1);
            if left.contains(&m) && right.contains(&m) {
                return false;
            }
        }
    }
    true
}

/// Compares computed homology with the predicted support block by block:
/// nonzero blocks are exactly the predicted ones, each is one-dimensional in
/// the minimal Maslov degree of its block, and every crossingless generator
/// of that degree represents the generator of homology.
pub fn check_support(z: &PointedMatchedCircle, alg: &Algebra, hom: &AlgebraHomology) -> Result<usize, String> {
    let gens = alg.strands().expect("strand algebra");
    let mut members: HashMap<(Vec<usize>, Vec<usize>, Vec<i64>), Vec<usize>> = HashMap::new();
    for (j, g) in gens.iter().enumerate() {
        members.entry((g.left_pairs(z), g.right_pairs(z), g.multiplicity(z))).or_default().push(j);
    }
    let mut checked = 0;
    for b in &hom.blocks {
        let predicted = predicted_nonzero(z, &b.left, &b.right, &b.class);
        let expected_rank = usize::from(predicted);
        if b.rank != expected_rank {
            return Err(format!(
                "block {:?}->{:?} class {:?}: rank {} but predicted {}",
                b.left, b.right, b.class, b.rank, expected_rank
            ));
        }
        if predicted {
            let key = (b.left.clone(), b.right.clone(), b.class.clone());
            let ms = &members[&key];
            let min = ms.iter().map(|&j| maslov2(z, &gens[j])).min().unwrap();
            if b.maslov2[0] != min {
                return Err(format!("block {:?}: homology in Maslov {} not minimal {}", key, b.maslov2[0], min));
            }
            let local: HashMap<usize, usize> = ms.iter().enumerate().map(|(i, &g)| (g, i)).collect();
            let d: Vec<F2Vec> = ms.iter().map(|&g| f2::from_list(alg.d(g).iter().map(|x| local[x]).collect())).collect();
            let h = Homology::compute(&d);
            let mut found = 0;
            for (i, &j) in ms.iter().enumerate() {
                let g = &gens[j];
                if g.is_crossingless_in(z) && maslov2(z, g) == min {
                    found += 1;
                    if !d[i].is_empty() || h.is_boundary(&[i]) {
                        return Err(format!("crossingless {g} does not represent homology of {:?}", key));
                    }
                }
            }
            if found == 0 {
                return Err(format!("block {:?} has no crossingless representative", key));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> PointedMatchedCircle {
        PointedMatchedCircle::torus()
    }

    #[test]
    fn torus_dimension() {
        let a = algebra_basis(&torus(), 0);
        assert_eq!(a.dim(), 8);
        assert_eq!(a.num_idempotents(), 2);
    }

    #[test]
    fn extremal_gradings_are_one_dimensional() {
        let z = PointedMatchedCircle::split(2).unwrap();
        assert_eq!(algebra_basis(&z, -2).dim(), 1);
        assert_eq!(algebra_basis(&torus(), -1).dim(), 1);
    }

    #[test]
    fn chords() {
        let z = torus();
        assert_eq!(a_of_chords(&z, 0, &[(1, 2)]), vec![StrandGen { moving: vec![(1, 2)], horizontals: vec![] }]);
        assert!(a_of_chords(&z, 0, &[(1, 2), (2, 3)]).is_empty());
        assert_eq!(a_of_chords(&z, 0, &[(1, 4)]).len(), 1);
    }

    #[test]
    fn idempotent_count() {
        let z = PointedMatchedCircle::antipodal(2).unwrap();
        for i in -2..=2i64 {
            let a = algebra_basis(&z, i);
            let expect = match i {
                -2 | 2 => 1,
                -1 | 1 => 4,
                _ => 6,
            };
            assert_eq!(a.num_idempotents(), expect);
        }
    }
}
