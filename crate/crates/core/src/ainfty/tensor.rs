//! Box tensor products.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::*;

struct BoxRule {
    x: Bimodule,
    y: Bimodule,
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    /// Longest input sequence `x` accepts on its right, if finite.
    x_cap: Option<usize>,
    memo_y: Memo<Box<dyn Fn(&Key) -> Terms + Send + Sync>>,
}

impl BoxRule {
    fn y_op(&self, y: usize, chunk: &[usize]) -> Terms {
        self.memo_y.get(&(vec![], y, chunk.to_vec()))
    }

    fn right_d(&self) -> Option<&Algebra> {
        match self.y.right() {
            Some(s) if s.tag == Tag::D => Some(&s.algebra),
            _ => None,
        }
    }

    fn left_d_idem(&self, x: usize) -> Option<usize> {
        match self.x.left() {
            Some(s) if s.tag == Tag::D => Some(s.algebra.idem_elem(self.x.gens[x].left)),
            _ => None,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        l: &[usize],
        x: usize,
        r: &[usize],
        cur: usize,
        pos: usize,
        seq: &mut Vec<usize>,
        rb: Option<usize>,
        out: &mut Vec<Term>,
    ) {
        let mid = &self.x.right().unwrap().algebra;
        for j in 0..=(r.len() - pos) {
            let end = pos + j;
            for t in self.y_op(cur, &r[pos..end]) {
                let a = t.left.expect("type D output");
                let rbs: Vec<Option<usize>> = match (rb, t.right, self.right_d()) {
                    (Some(prev), Some(b), Some(alg)) => alg.mul(b, prev).iter().map(|&c| Some(c)).collect(),
                    (None, b, _) => vec![b],
                    _ => vec![None],
                };
                for rb2 in rbs {
                    if mid.is_idempotent(a) {
                        if seq.is_empty() && end == r.len() && l.is_empty() {
                            if let Some(&g) = self.index.get(&(x, t.gen)) {
                                out.push(Term::new(self.left_d_idem(x), g, rb2));
                            }
                        }
                        continue;
                    }
                    if self.x_cap.is_some_and(|c| seq.len() + 1 > c) {
                        continue;
                    }
                    seq.push(a);
                    if end == r.len() {
                        for s in self.x.op(&(l.to_vec(), x, seq.clone())) {
                            if let Some(&g) = self.index.get(&(s.gen, t.gen)) {
                                out.push(Term::new(s.left, g, rb2));
                            }
                        }
                    }
                    self.walk(l, x, r, t.gen, end, seq, rb2, out);
                    seq.pop();
                }
            }
        }
    }

    /// Right-input sequences that some chain from `y` can consume.
    fn chain_inputs(&self, y: usize, ykeys: &HashMap<usize, Vec<Vec<usize>>>) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        let cap = self.x_cap.unwrap_or(0);
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(y, vec![], 0)];
        while let Some((cur, acc, steps)) = stack.pop() {
            out.insert(acc.clone());
            if steps >= cap {
                continue;
            }
            for chunk in ykeys.get(&cur).into_iter().flatten() {
                for t in self.y_op(cur, chunk) {
                    let mut acc2 = acc.clone();
                    acc2.extend_from_slice(chunk);
                    stack.push((t.gen, acc2, steps + 1));
                }
            }
        }
        out
    }
}

impl OpRule for BoxRule {
    fn eval(&self, key: &Key) -> Terms {
        let (l, g, r) = key;
        let (x, y) = self.pairs[*g];
        let mut out = Vec::new();
        if r.is_empty() {
            let yid = self.right_d().map(|alg| alg.idem_elem(self.y.gens[y].right));
            for s in self.x.op(&(l.clone(), x, vec![])) {
                if let Some(&h) = self.index.get(&(s.gen, y)) {
                    out.push(Term::new(s.left, h, yid));
                }
            }
        }
        let mut seq = Vec::new();
        self.walk(l, x, r, y, 0, &mut seq, None, &mut out);
        reduce_terms(out)
    }

    fn describe(&self) -> String {
        format!("{} ⊠ {}", self.x.name, self.y.name)
    }

    fn keys(&self) -> Option<Vec<Key>> {
        let has_left_a = self.x.shape.left_tag() == Some(Tag::A);
        let has_right_a = self.y.shape.right_tag() == Some(Tag::A);
        if !has_left_a && !has_right_a {
            return Some((0..self.pairs.len()).map(|g| (vec![], g, vec![])).collect());
        }
        let xkeys = self.x.keys()?;
        let ykeys_list = self.y.keys()?;
        self.x_cap?;
        let mut lefts: HashMap<usize, BTreeSet<Vec<usize>>> = HashMap::new();
        for k in &xkeys {
            lefts.entry(k.1).or_default().insert(k.0.clone());
        }
        let mut ykeys: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
        for k in &ykeys_list {
            ykeys.entry(k.1).or_default().push(k.2.clone());
        }
        let mut out = Vec::new();
        for (g, &(x, y)) in self.pairs.iter().enumerate() {
            let empty = BTreeSet::from([vec![]]);
            let ls = lefts.get(&x).unwrap_or(&empty);
            let rs = self.chain_inputs(y, &ykeys);
            for l in ls.iter().chain(std::iter::once(&vec![])) {
                for r in &rs {
                    out.push((l.clone(), g, r.clone()));
                }
            }
        }
        out.sort();
        out.dedup();
        Some(out)
    }
}

/// `X ⊠ Y`, pairing the right side of `X` with the left side of `Y`. One
/// of the paired sides must be type A and the other type D over the same
/// algebra.
pub fn box_tensor(x: &Bimodule, y: &Bimodule) -> Result<Bimodule> {
    let (xr, yl) = match (x.right(), y.left()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::TagMismatch(format!("{} has no right side or {} has no left side", x.name, y.name))),
    };
    if xr.algebra.name() != yl.algebra.name() {
        return Err(Error::TagMismatch(format!(
            "{} is over {} but {} is over {}",
            x.name,
            xr.algebra.name(),
            y.name,
            yl.algebra.name()
        )));
    }
    match (xr.tag, yl.tag) {
        (Tag::A, Tag::D) => box_ad(x, y),
        (Tag::D, Tag::A) => Ok(box_ad(&y.mirror(), &x.mirror())?.mirror().named(&format!("{} ⊠ {}", x.name, y.name))),
        _ => Err(Error::TagMismatch(format!("paired sides are both type {:?}", xr.tag))),
    }
}

fn box_ad(x: &Bimodule, y: &Bimodule) -> Result<Bimodule> {
    let x_cap = x.keys().map(|ks| ks.iter().map(|k| k.2.len()).max().unwrap_or(0));
    if x_cap.is_none() && y.is_bounded(BoundFlavor::Left) != Bounded::Yes {
        return Err(Error::UnboundedPair);
    }
    let mut pairs = Vec::new();
    let mut gens = Vec::new();
    let mut index = HashMap::new();
    for (i, gx) in x.gens.iter().enumerate() {
        for (j, gy) in y.gens.iter().enumerate() {
            if gx.right == gy.left {
                index.insert((i, j), pairs.len());
                pairs.push((i, j));
                gens.push(Gen { label: format!("{}⊠{}", gx.label, gy.label), left: gx.left, right: gy.right });
            }
        }
    }
    let yc = y.clone();
    let memo_y: Memo<Box<dyn Fn(&Key) -> Terms + Send + Sync>> = Memo::new(Box::new(move |k: &Key| yc.op(k)));
    let rule = BoxRule { x: x.clone(), y: y.clone(), pairs, index, x_cap, memo_y };
    let name = format!("{} ⊠ {}", x.name, y.name);
    let out = Bimodule::new(&name, x.shape.left.clone(), y.shape.right.clone(), gens).with_rule(Arc::new(rule));
    Ok(out.materialize().unwrap_or(out))
}
