//! Chain complexes: morphism complexes and Hochschild complexes.

use std::collections::HashMap;

use super::*;
use crate::f2::{self, F2Vec, Homology};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub labels: Vec<String>,
    /// `d[j]` is the image of basis vector `j`.
    pub d: Vec<F2Vec>,
    pub grading: Option<Vec<i64>>,
}

impl ChainComplex {
    pub fn new(labels: Vec<String>, d: Vec<F2Vec>) -> Self {
        ChainComplex { labels, d, grading: None }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for (j, img) in self.d.iter().enumerate() {
            let dd = f2::apply(&self.d, img);
            if !dd.is_empty() {
                return Err(Error::StructureViolation(format!("d^2({}) != 0", self.labels[j])));
            }
        }
        Ok(())
    }

    pub fn homology(&self) -> Homology {
        Homology::compute(&self.d)
    }

    pub fn homology_rank(&self) -> usize {
        self.homology().rank()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The subcomplex or quotient spanned by `keep`, assuming it is closed
    /// under `d` after discarding the other coordinates.
    pub fn restrict(&self, keep: &[usize]) -> ChainComplex {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &j)| (j, i)).collect();
        let labels = keep.iter().map(|&j| self.labels[j].clone()).collect();
        let d = keep
            .iter()
            .map(|&j| f2::from_list(self.d[j].iter().filter_map(|i| pos.get(i).copied()).collect()))
            .collect();
        let grading = self.grading.as_ref().map(|g| keep.iter().map(|&j| g[j]).collect());
        ChainComplex { labels, d, grading }
    }

    /// Whether the two complexes agree under the given bijection of bases.
    pub fn isomorphic_via(&self, other: &ChainComplex, map: &[usize]) -> bool {
        if self.dim() != other.dim() || map.len() != self.dim() {
            return false;
        }
        (0..self.dim()).all(|j| f2::from_list(self.d[j].iter().map(|&i| map[i]).collect()) == other.d[map[j]])
    }

    pub fn format_vec(&self, v: &[usize]) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter().map(|&i| self.labels[i].clone()).collect::<Vec<_>>().join(" + ")
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        for (j, img) in self.d.iter().enumerate() {
            s.push_str(&format!("  d({}) = {}\n", self.labels[j], self.format_vec(img)));
        }
        s
    }
}

impl Bimodule {
    /// The complex of no-input operations, for structures without type D
    /// sides.
    pub fn to_chain_complex(&self) -> Result<ChainComplex> {
        if self.shape.left_tag() == Some(Tag::D) || self.shape.right_tag() == Some(Tag::D) {
            return Err(Error::TagMismatch(format!("{} has a type D side", self.name)));
        }
        let labels = self.gens.iter().map(|g| g.label.clone()).collect();
        let d = (0..self.gens.len()).map(|x| f2::from_list(self.zero_input_terms(x).iter().map(|t| t.gen).collect())).collect();
        Ok(ChainComplex::new(labels, d))
    }
}

/// Which side of a pair of structures a morphism complex pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSide {
    Left,
    Right,
}

/// Morphisms paired along one type D side, as `opposite(X) ⊠ A ⊠ Y`. The
/// unpaired sides of `X` and `Y` survive as residual actions.
pub fn mor_d(x: &Bimodule, y: &Bimodule, side: PairSide) -> Result<Bimodule> {
    if side == PairSide::Right {
        return mor_d(&x.mirror(), &y.mirror(), PairSide::Left);
    }
    let (xs, ys) = match (x.left(), y.left()) {
        (Some(a), Some(b)) if a.tag == Tag::D && b.tag == Tag::D => (a, b),
        _ => return Err(Error::TagMismatch("morphisms need type D sides on the paired side".into())),
    };
    if xs.algebra.name() != ys.algebra.name() {
        return Err(Error::TagMismatch(format!("{} vs {}", xs.algebra.name(), ys.algebra.name())));
    }
    let alg = algebra_aa(xs.algebra.clone());
    let ox = x.opposite()?;
    let m = box_tensor(&box_tensor(&ox, &alg)?, y)?;
    Ok(m.named(&format!("Mor({}, {})", x.name, y.name)))
}

/// A basis morphism `x -> a ⊗ y ⊗ b` between structures whose sides are
/// all type D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorBasis {
    pub source: usize,
    pub left: Option<usize>,
    pub target: usize,
    pub right: Option<usize>,
}

/// Morphism complex computed directly from the definition, for
/// structures with no type A side.
pub fn mor_direct(x: &Bimodule, y: &Bimodule) -> Result<(ChainComplex, Vec<MorBasis>)> {
    let shape = &x.shape;
    for s in [&shape.left, &shape.right, &y.shape.left, &y.shape.right].into_iter().flatten() {
        if s.tag != Tag::D {
            return Err(Error::TagMismatch("direct morphism complexes need type D sides only".into()));
        }
    }
    let same = |a: &Option<Side>, b: &Option<Side>| match (a, b) {
        (Some(a), Some(b)) => a.algebra.name() == b.algebra.name(),
        (None, None) => true,
        _ => false,
    };
    if !same(&shape.left, &y.shape.left) || !same(&shape.right, &y.shape.right) {
        return Err(Error::TagMismatch(format!("{} and {} have different sides", x.name, y.name)));
    }
    let choices = |side: &Option<Side>, from: usize, to: usize| -> Vec<Option<usize>> {
        match side {
            None => vec![None],
            Some(s) => (0..s.algebra.dim())
                .filter(|&a| s.algebra.left_idem(a) == from && s.algebra.right_idem(a) == to)
                .map(Some)
                .collect(),
        }
    };
    let mut basis = Vec::new();
    for (i, gx) in x.gens.iter().enumerate() {
        for (j, gy) in y.gens.iter().enumerate() {
            for l in choices(&shape.left, gx.left, gy.left) {
                for r in choices(&shape.right, gy.right, gx.right) {
                    basis.push(MorBasis { source: i, left: l, target: j, right: r });
                }
            }
        }
    }
    let index: HashMap<MorBasis, usize> = basis.iter().enumerate().map(|(k, b)| (*b, k)).collect();
    let src = |k: &Key| x.op(k);
    let tgt = |k: &Key| y.op(k);
    let mut d = Vec::with_capacity(basis.len());
    for b in &basis {
        let f = |k: &Key| {
            if k.0.is_empty() && k.2.is_empty() && k.1 == b.source {
                vec![Term::new(b.left, b.target, b.right)]
            } else {
                vec![]
            }
        };
        let mut img = Vec::new();
        for xi in 0..x.gens.len() {
            for t in shape.map_differential(&src, &tgt, &f, &(vec![], xi, vec![])) {
                let mb = MorBasis { source: xi, left: t.left, target: t.gen, right: t.right };
                img.push(*index.get(&mb).expect("idempotent compatible"));
            }
        }
        d.push(f2::from_list(img));
    }
    let labels = basis.iter().map(|b| mor_label(x, y, b)).collect();
    Ok((ChainComplex::new(labels, d), basis))
}

fn mor_label(x: &Bimodule, y: &Bimodule, b: &MorBasis) -> String {
    let mut s = format!("{}↦", x.gens[b.source].label);
    if let (Some(side), Some(a)) = (&y.shape.left, b.left) {
        s.push_str(side.algebra.label(a));
        s.push('⊗');
    }
    s.push_str(&y.gens[b.target].label);
    if let (Some(side), Some(a)) = (&y.shape.right, b.right) {
        s.push('⊗');
        s.push_str(side.algebra.label(a));
    }
    s
}

fn same_algebra_both_sides(m: &Bimodule, left: Tag, right: Tag) -> Result<Arc<Algebra>> {
    match (m.left(), m.right()) {
        (Some(l), Some(r)) if l.tag == left && r.tag == right && l.algebra.name() == r.algebra.name() => {
            Ok(l.algebra.clone())
        }
        _ => Err(Error::TagMismatch(format!(
            "{} is not a {:?}{:?} bimodule over one algebra",
            m.name, left, right
        ))),
    }
}

/// Hochschild complex of an AA bimodule, on words of length at most
/// `max_len`; shorter words span a subcomplex.
pub fn hochschild_aa(m: &Bimodule, max_len: usize) -> Result<ChainComplex> {
    let alg = same_algebra_both_sides(m, Tag::A, Tag::A)?;
    let mut basis: Vec<(usize, Vec<usize>)> = Vec::new();
    for (x, g) in m.gens.iter().enumerate() {
        for w in sequences(&alg, g.right, max_len, false) {
            let end = w.last().map(|&a| alg.right_idem(a)).unwrap_or(g.right);
            if end == g.left {
                basis.push((x, w));
            }
        }
    }
    let index: HashMap<(usize, Vec<usize>), usize> = basis.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
    let look = |x: usize, w: Vec<usize>| -> usize { index[&(x, w)] };
    let mut d = Vec::with_capacity(basis.len());
    for (x, w) in &basis {
        let k = w.len();
        let mut img = Vec::new();
        for i in 0..=k {
            for j in 0..=(k - i) {
                let key = (w[k - i..].to_vec(), *x, w[..j].to_vec());
                for t in m.op(&key) {
                    img.push(look(t.gen, w[j..k - i].to_vec()));
                }
            }
        }
        for p in 0..k {
            for &c in alg.d(w[p]) {
                let mut w2 = w.clone();
                w2[p] = c;
                img.push(look(*x, w2));
            }
        }
        for p in 0..k.saturating_sub(1) {
            for &c in alg.mul(w[p], w[p + 1]) {
                let mut w2 = w[..p].to_vec();
                w2.push(c);
                w2.extend_from_slice(&w[p + 2..]);
                img.push(look(*x, w2));
            }
        }
        d.push(f2::from_list(img));
    }
    let labels = basis
        .iter()
        .map(|(x, w)| {
            let mut parts = vec![m.gens[*x].label.clone()];
            parts.extend(w.iter().map(|&a| alg.label(a).to_string()));
            parts.join("|")
        })
        .collect();
    let grading = Some(basis.iter().map(|(_, w)| w.len() as i64).collect());
    Ok(ChainComplex { labels, d, grading })
}

/// Hochschild complex of an operationally bounded DA bimodule on the
/// generators whose two idempotents agree.
pub fn hochschild_da(n: &Bimodule) -> Result<ChainComplex> {
    let alg = same_algebra_both_sides(n, Tag::D, Tag::A)?;
    if n.is_bounded(BoundFlavor::Operational) != Bounded::Yes {
        return Err(Error::UnboundedInput);
    }
    let basis: Vec<usize> = (0..n.gens.len()).filter(|&x| n.gens[x].left == n.gens[x].right).collect();
    let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let limit = n.gens.len() * (n.max_input_len().unwrap_or(0) + 2) + 2;
    let mut d = Vec::with_capacity(basis.len());
    for &x in &basis {
        let mut img = Vec::new();
        hoch_walk(n, &alg, x, &mut Vec::new(), 0, limit, &mut img)?;
        d.push(f2::from_list(img.iter().map(|y| pos[y]).collect()));
    }
    let labels = basis.iter().map(|&x| n.gens[x].label.clone()).collect();
    Ok(ChainComplex::new(labels, d))
}

fn hoch_walk(
    n: &Bimodule,
    alg: &Algebra,
    x: usize,
    pending: &mut Vec<usize>,
    depth: usize,
    limit: usize,
    out: &mut Vec<usize>,
) -> Result<()> {
    if depth > limit {
        return Err(Error::NonTerminating);
    }
    for j in 0..=pending.len() {
        for t in n.op(&(vec![], x, pending[..j].to_vec())) {
            let a = t.left.expect("type D output");
            if alg.is_idempotent(a) {
                if j == pending.len() {
                    out.push(t.gen);
                }
                continue;
            }
            let mut rest = pending[j..].to_vec();
            rest.push(a);
            hoch_walk(n, alg, t.gen, &mut rest, depth + 1, limit, out)?;
        }
    }
    Ok(())
}

/// Rank of the image of `H(F_small) -> H(F_big)` for a filtered complex
/// whose filtration levels are given by `grading` (basis elements of level
/// at most `small` span the subcomplex `F_small`).
pub fn filtered_image_rank(c: &ChainComplex, small: i64) -> usize {
    let g = c.grading.as_ref().expect("filtration levels");
    let sub: Vec<usize> = (0..c.dim()).filter(|&j| g[j] <= small).collect();
    let csub = c.restrict(&sub);
    let hs = csub.homology();
    let hb = c.homology();
    let mut red = f2::Reducer::new();
    let mut rank = 0;
    for (k, z) in hs.representatives.iter().enumerate() {
        let lifted: Vec<usize> = z.iter().map(|&i| sub[i]).collect();
        let cls = hb.class_of(&lifted).expect("cycle");
        if red.insert(&cls, k).is_none() {
            rank += 1;
        }
    }
    rank
}

/// The Hochschild complex of an AA bimodule `m` on words of length at most
/// `max_len`, the complex `hochschild_da(bar_dd(A, max_len) ⊠ m)`, and the
/// bijection `m|a1|...|ak ↦ [a1|...|ak] ⊠ m` between their bases.
pub fn hochschild_bar_pair(m: &Bimodule, max_len: usize) -> Result<(ChainComplex, ChainComplex, Option<Vec<usize>>)> {
    let alg = same_algebra_both_sides(m, Tag::A, Tag::A)?;
    let direct = hochschild_aa(m, max_len)?;
    let resolved = box_tensor(&bar_dd(alg.clone(), max_len), m)?;
    let twisted = hochschild_da(&resolved)?;
    let mut map = Vec::with_capacity(direct.dim());
    for (x, g) in m.gens.iter().enumerate() {
        for w in sequences(&alg, g.right, max_len, false) {
            let end = w.last().map(|&a| alg.right_idem(a)).unwrap_or(g.right);
            if end != g.left {
                continue;
            }
            let word = if w.is_empty() {
                format!("[]{}", alg.label(alg.idem_elem(g.left)))
            } else {
                format!("[{}]", w.iter().map(|&a| alg.label(a)).collect::<Vec<_>>().join("|"))
            };
            map.push(twisted.index_of(&format!("{}⊠{}", m.gens[x].label, word)));
        }
    }
    let map = map.into_iter().collect::<Option<Vec<usize>>>();
    Ok((direct, twisted, map))
}
