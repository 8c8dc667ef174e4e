//! Modules and bimodules of type D and type A, in one container.
//!
//! A structure has up to two sides. Each side is tagged `D` (structure
//! maps output an algebra element on that side) or `A` (structure maps take
//! a sequence of augmentation-ideal inputs on that side). An operation is
//! keyed by `(left inputs, generator, right inputs)` and returns an F2 sum
//! of terms `(left output, generator, right output)`.
//!
//! Left inputs are written in the order they appear to the left of the
//! generator, so the last one is adjacent to it. A right module over `C`
//! is the same thing as a left module over `C^op` with the inputs
//! reversed; `mirror` implements that relabelling.

mod builders;
mod cancel;
mod complex;
mod massey;
mod morphism;
mod serial;
mod tensor;

pub use builders::*;
pub use cancel::*;
pub use complex::*;
pub use massey::*;
pub use morphism::*;
pub use serial::*;
pub use tensor::*;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    D,
    A,
}

#[derive(Clone, Debug)]
pub struct Side {
    pub tag: Tag,
    pub algebra: Arc<Algebra>,
}

impl Side {
    pub fn new(tag: Tag, algebra: Arc<Algebra>) -> Self {
        Side { tag, algebra }
    }

    pub fn mirrored(&self) -> Side {
        Side { tag: self.tag, algebra: Arc::new(self.algebra.opposite()) }
    }
}

/// `(left inputs, generator, right inputs)`.
pub type Key = (Vec<usize>, usize, Vec<usize>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub left: Option<usize>,
    pub gen: usize,
    pub right: Option<usize>,
}

impl Term {
    pub fn new(left: Option<usize>, gen: usize, right: Option<usize>) -> Self {
        Term { left, gen, right }
    }
}

/// An F2 sum of terms, sorted without repeats.
pub type Terms = Vec<Term>;

/// Reduces a list of terms mod 2.
pub fn reduce_terms(mut v: Vec<Term>) -> Terms {
    v.sort_unstable();
    let mut out: Vec<Term> = Vec::with_capacity(v.len());
    for t in v {
        if out.last() == Some(&t) {
            out.pop();
        } else {
            out.push(t);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gen {
    pub label: String,
    /// Idempotent positions in the left and right algebras (0 if no side).
    pub left: usize,
    pub right: usize,
}

/// Operations produced on demand.
pub trait OpRule: Send + Sync {
    fn eval(&self, key: &Key) -> Terms;
    fn describe(&self) -> String;
    /// Every key with a nonzero value, when that set is finite and known.
    fn keys(&self) -> Option<Vec<Key>> {
        None
    }
    /// Whether the operations vanish on long inputs, if the rule knows.
    fn bounded(&self) -> Option<bool> {
        None
    }
    /// Pattern descriptor for serialization, if the rule has one.
    fn pattern(&self) -> Option<PatternRule> {
        None
    }
}

/// Two sides sharing the evaluation conventions of one structure.
#[derive(Clone, Debug)]
pub struct Shape {
    pub left: Option<Side>,
    pub right: Option<Side>,
}

impl Shape {
    pub fn left_tag(&self) -> Option<Tag> {
        self.left.as_ref().map(|s| s.tag)
    }

    pub fn right_tag(&self) -> Option<Tag> {
        self.right.as_ref().map(|s| s.tag)
    }

    fn left_alg(&self) -> &Algebra {
        &self.left.as_ref().unwrap().algebra
    }

    fn right_alg(&self) -> &Algebra {
        &self.right.as_ref().unwrap().algebra
    }

    /// Output of the identity map on a generator.
    pub fn identity_term(&self, g: &Gen, idx: usize) -> Term {
        let l = match &self.left {
            Some(s) if s.tag == Tag::D => Some(s.algebra.idem_elem(g.left)),
            _ => None,
        };
        let r = match &self.right {
            Some(s) if s.tag == Tag::D => Some(s.algebra.idem_elem(g.right)),
            _ => None,
        };
        Term::new(l, idx, r)
    }

    /// Products of partial outputs: `inner * outer` on the left,
    /// `outer * inner` on the right.
    fn combine(&self, inner: &Term, outer: &Term) -> Vec<(Option<usize>, Option<usize>)> {
        let l: Vec<Option<usize>> = match (inner.left, outer.left) {
            (Some(a), Some(b)) => self.left_alg().mul(a, b).iter().map(|&c| Some(c)).collect(),
            _ => vec![None],
        };
        let r: Vec<Option<usize>> = match (inner.right, outer.right) {
            (Some(a), Some(b)) => self.right_alg().mul(b, a).iter().map(|&c| Some(c)).collect(),
            _ => vec![None],
        };
        let mut out = Vec::with_capacity(l.len() * r.len());
        for &x in &l {
            for &y in &r {
                out.push((x, y));
            }
        }
        out
    }

    /// `outer o inner` on a key: the inner map takes the inputs adjacent
    /// to the generator.
    pub fn compose(&self, outer: &dyn Fn(&Key) -> Terms, inner: &dyn Fn(&Key) -> Terms, key: &Key) -> Terms {
        let (l, x, r) = key;
        let mut out = Vec::new();
        for li in 0..=l.len() {
            for rj in 0..=r.len() {
                let inner_key = (l[li..].to_vec(), *x, r[..rj].to_vec());
                let t1s = inner(&inner_key);
                for t1 in &t1s {
                    let outer_key = (l[..li].to_vec(), t1.gen, r[rj..].to_vec());
                    for t2 in outer(&outer_key) {
                        for (a, b) in self.combine(t1, &t2) {
                            out.push(Term::new(a, t2.gen, b));
                        }
                    }
                }
            }
        }
        reduce_terms(out)
    }

    /// Terms from applying the algebra differential to one input, or
    /// multiplying two adjacent inputs, before applying `op`.
    pub fn input_terms(&self, op: &dyn Fn(&Key) -> Terms, key: &Key) -> Terms {
        let (l, x, r) = key;
        let mut out = Vec::new();
        if self.left_tag() == Some(Tag::A) {
            let alg = self.left_alg();
            for (k, &a) in l.iter().enumerate() {
                for &c in alg.d(a) {
                    let mut l2 = l.clone();
                    l2[k] = c;
                    out.extend(op(&(l2, *x, r.clone())));
                }
            }
            for k in 0..l.len().saturating_sub(1) {
                for &c in alg.mul(l[k], l[k + 1]) {
                    let mut l2 = l[..k].to_vec();
                    l2.push(c);
                    l2.extend_from_slice(&l[k + 2..]);
                    out.extend(op(&(l2, *x, r.clone())));
                }
            }
        }
        if self.right_tag() == Some(Tag::A) {
            let alg = self.right_alg();
            for (k, &a) in r.iter().enumerate() {
                for &c in alg.d(a) {
                    let mut r2 = r.clone();
                    r2[k] = c;
                    out.extend(op(&(l.clone(), *x, r2)));
                }
            }
            for k in 0..r.len().saturating_sub(1) {
                for &c in alg.mul(r[k], r[k + 1]) {
                    let mut r2 = r[..k].to_vec();
                    r2.push(c);
                    r2.extend_from_slice(&r[k + 2..]);
                    out.extend(op(&(l.clone(), *x, r2)));
                }
            }
        }
        reduce_terms(out)
    }

    /// The algebra differential applied to the outputs on D sides.
    pub fn output_d(&self, terms: &[Term]) -> Terms {
        let mut out = Vec::new();
        for t in terms {
            if let Some(a) = t.left {
                for &c in self.left_alg().d(a) {
                    out.push(Term::new(Some(c), t.gen, t.right));
                }
            }
            if let Some(b) = t.right {
                for &c in self.right_alg().d(b) {
                    out.push(Term::new(t.left, t.gen, Some(c)));
                }
            }
        }
        reduce_terms(out)
    }

    /// The structure relation of `op` at `key`.
    pub fn relation(&self, op: &dyn Fn(&Key) -> Terms, key: &Key) -> Terms {
        let mut v = self.compose(op, op, key);
        v.extend(self.input_terms(op, key));
        v.extend(self.output_d(&op(key)));
        reduce_terms(v)
    }

    /// The differential of a map `f` from a structure with operations
    /// `src` to one with operations `tgt`, at `key`.
    pub fn map_differential(
        &self,
        src: &dyn Fn(&Key) -> Terms,
        tgt: &dyn Fn(&Key) -> Terms,
        f: &dyn Fn(&Key) -> Terms,
        key: &Key,
    ) -> Terms {
        let mut v = self.compose(tgt, f, key);
        v.extend(self.compose(f, src, key));
        v.extend(self.input_terms(f, key));
        v.extend(self.output_d(&f(key)));
        reduce_terms(v)
    }

    /// Whether the inputs of `key` fit the idempotents of generator `g`
    /// and lie in the augmentation ideal.
    pub fn key_fits(&self, g: &Gen, key: &Key) -> bool {
        let (l, _, r) = key;
        match &self.left {
            Some(s) if s.tag == Tag::A => {
                let a = &s.algebra;
                if l.iter().any(|&x| a.is_idempotent(x)) {
                    return false;
                }
                if let Some(&last) = l.last() {
                    if a.right_idem(last) != g.left {
                        return false;
                    }
                }
                if l.windows(2).any(|w| a.right_idem(w[0]) != a.left_idem(w[1])) {
                    return false;
                }
            }
            _ => {
                if !l.is_empty() {
                    return false;
                }
            }
        }
        match &self.right {
            Some(s) if s.tag == Tag::A => {
                let a = &s.algebra;
                if r.iter().any(|&x| a.is_idempotent(x)) {
                    return false;
                }
                if let Some(&first) = r.first() {
                    if a.left_idem(first) != g.right {
                        return false;
                    }
                }
                if r.windows(2).any(|w| a.right_idem(w[0]) != a.left_idem(w[1])) {
                    return false;
                }
            }
            _ => {
                if !r.is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone)]
pub struct Bimodule {
    pub name: String,
    pub shape: Shape,
    pub gens: Vec<Gen>,
    table: BTreeMap<Key, Terms>,
    rule: Option<Arc<dyn OpRule>>,
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bimodule({}, {} generators, {} entries)", self.name, self.gens.len(), self.table.len())
    }
}

/// Flavor for boundedness queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundFlavor {
    Operational,
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bounded {
    Yes,
    No,
    Unknown,
}

impl Bimodule {
    pub fn new(name: &str, left: Option<Side>, right: Option<Side>, gens: Vec<Gen>) -> Self {
        Bimodule { name: name.to_string(), shape: Shape { left, right }, gens, table: BTreeMap::new(), rule: None }
    }

    pub fn with_rule(mut self, rule: Arc<dyn OpRule>) -> Self {
        self.rule = Some(rule);
        self
    }

    pub fn rule(&self) -> Option<&Arc<dyn OpRule>> {
        self.rule.as_ref()
    }

    pub fn left(&self) -> Option<&Side> {
        self.shape.left.as_ref()
    }

    pub fn right(&self) -> Option<&Side> {
        self.shape.right.as_ref()
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_index(&self, label: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.label == label)
    }

    /// Adds `terms` to the value at `key` (mod 2).
    pub fn add(&mut self, key: Key, terms: &[Term]) {
        let e = self.table.entry(key.clone()).or_default();
        e.extend_from_slice(terms);
        let v = reduce_terms(std::mem::take(e));
        if v.is_empty() {
            self.table.remove(&key);
        } else {
            self.table.insert(key, v);
        }
    }

    pub fn remove(&mut self, key: &Key) {
        self.table.remove(key);
    }

    pub fn table(&self) -> &BTreeMap<Key, Terms> {
        &self.table
    }

    pub fn op(&self, key: &Key) -> Terms {
        let mut v = self.table.get(key).cloned().unwrap_or_default();
        if let Some(r) = &self.rule {
            v.extend(r.eval(key));
            v = reduce_terms(v);
        }
        v
    }

    /// All keys with nonzero value, when finite and known.
    pub fn keys(&self) -> Option<Vec<Key>> {
        let mut ks: BTreeSet<Key> = self.table.keys().cloned().collect();
        if let Some(r) = &self.rule {
            ks.extend(r.keys()?);
        }
        Some(ks.into_iter().collect())
    }

    pub fn is_finite(&self) -> bool {
        self.keys().is_some()
    }

    /// Replaces a rule with known finite keys by an explicit table.
    pub fn materialize(&self) -> Option<Bimodule> {
        let keys = self.keys()?;
        let mut out = Bimodule::new(&self.name, self.shape.left.clone(), self.shape.right.clone(), self.gens.clone());
        for k in keys {
            let v = self.op(&k);
            if !v.is_empty() {
                out.table.insert(k, v);
            }
        }
        Some(out)
    }

    /// Generator bijection `self -> other`, preserving idempotents, under
    /// which the two tables agree. Both must be finite.
    pub fn match_generators(&self, other: &Bimodule) -> Option<Vec<usize>> {
        if self.gens.len() != other.gens.len()
            || self.shape.left_tag() != other.shape.left_tag()
            || self.shape.right_tag() != other.shape.right_tag()
        {
            return None;
        }
        let a = self.materialize()?;
        let b = other.materialize()?;
        let n = self.gens.len();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn search(a: &Bimodule, b: &Bimodule, i: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            if i == perm.len() {
                let image = |t: &Term| Term::new(t.left, perm[t.gen], t.right);
                let mapped: BTreeMap<Key, Terms> = a
                    .table
                    .iter()
                    .map(|((l, x, r), v)| ((l.clone(), perm[*x], r.clone()), reduce_terms(v.iter().map(image).collect())))
                    .collect();
                return mapped == b.table;
            }
            for j in 0..perm.len() {
                if !used[j] && a.gens[i].left == b.gens[j].left && a.gens[i].right == b.gens[j].right {
                    perm[i] = j;
                    used[j] = true;
                    if search(a, b, i + 1, perm, used) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            false
        }
        search(&a, &b, 0, &mut perm, &mut used).then_some(perm)
    }

    /// Keys with empty inputs.
    pub fn zero_input_terms(&self, x: usize) -> Terms {
        self.op(&(vec![], x, vec![]))
    }

    /// Longest input sequence (both sides together) in a finite table.
    pub fn max_input_len(&self) -> Option<usize> {
        Some(self.keys()?.iter().map(|(l, _, r)| l.len() + r.len()).max().unwrap_or(0))
    }

    /// Checks idempotent compatibility and strict unitality of every entry.
    pub fn validate(&self) -> Result<()> {
        let keys = match self.keys() {
            Some(k) => k,
            None => self.table.keys().cloned().collect(),
        };
        for key in keys {
            let g = &self.gens[key.1];
            if !self.shape.key_fits(g, &key) {
                return Err(Error::StructureViolation(format!("entry {} has incompatible inputs", self.format_key(&key))));
            }
            for t in self.op(&key) {
                if !self.term_fits(&key, &t) {
                    return Err(Error::StructureViolation(format!(
                        "entry {} -> {} is not idempotent compatible",
                        self.format_key(&key),
                        self.format_term(&t)
                    )));
                }
            }
        }
        Ok(())
    }

    fn term_fits(&self, key: &Key, t: &Term) -> bool {
        let (l, x, r) = key;
        let (src, tgt) = (&self.gens[*x], &self.gens[t.gen]);
        let ok_left = match &self.shape.left {
            None => t.left.is_none(),
            Some(s) if s.tag == Tag::D => match t.left {
                Some(c) => s.algebra.left_idem(c) == src.left && s.algebra.right_idem(c) == tgt.left,
                None => false,
            },
            Some(s) => {
                t.left.is_none()
                    && match l.first() {
                        Some(&a) => s.algebra.left_idem(a) == tgt.left,
                        None => src.left == tgt.left,
                    }
            }
        };
        let ok_right = match &self.shape.right {
            None => t.right.is_none(),
            Some(s) if s.tag == Tag::D => match t.right {
                Some(c) => s.algebra.left_idem(c) == tgt.right && s.algebra.right_idem(c) == src.right,
                None => false,
            },
            Some(s) => {
                t.right.is_none()
                    && match r.last() {
                        Some(&b) => s.algebra.right_idem(b) == tgt.right,
                        None => src.right == tgt.right,
                    }
            }
        };
        ok_left && ok_right
    }

    /// Keys on which the structure relation can be nonzero, for a finite table.
    pub fn candidate_keys(&self) -> Option<Vec<Key>> {
        let keys = self.keys()?;
        let mut by_gen: HashMap<usize, Vec<&Key>> = HashMap::new();
        for k in &keys {
            by_gen.entry(k.1).or_default().push(k);
        }
        let mut out: BTreeSet<Key> = keys.iter().cloned().collect();
        for k1 in &keys {
            let outs: BTreeSet<usize> = self.op(k1).iter().map(|t| t.gen).collect();
            for y in outs {
                for k2 in by_gen.get(&y).into_iter().flatten() {
                    let mut l = k2.0.clone();
                    l.extend_from_slice(&k1.0);
                    let mut r = k1.2.clone();
                    r.extend_from_slice(&k2.2);
                    out.insert((l, k1.1, r));
                }
            }
        }
        for (side_is_left, side) in [(true, &self.shape.left), (false, &self.shape.right)] {
            let Some(s) = side else { continue };
            if s.tag != Tag::A {
                continue;
            }
            let alg = &s.algebra;
            let (pre, fact) = algebra_indices(alg);
            for k in &keys {
                let seq = if side_is_left { &k.0 } else { &k.2 };
                for (p, &c) in seq.iter().enumerate() {
                    let rebuild = |new: Vec<usize>| -> Key {
                        let mut s2 = seq[..p].to_vec();
                        s2.extend(new);
                        s2.extend_from_slice(&seq[p + 1..]);
                        if side_is_left {
                            (s2, k.1, k.2.clone())
                        } else {
                            (k.0.clone(), k.1, s2)
                        }
                    };
                    for &a in &pre[c] {
                        out.insert(rebuild(vec![a]));
                    }
                    for &(a, b) in &fact[c] {
                        out.insert(rebuild(vec![a, b]));
                    }
                }
            }
        }
        Some(out.into_iter().filter(|k| self.shape.key_fits(&self.gens[k.1], k)).collect())
    }

    /// Verifies the structure relation. Finite structures are checked on
    /// every key where it can fail; rule-based ones on every key with at
    /// most `probe_len` inputs.
    pub fn check_structure(&self, probe_len: usize) -> Result<usize> {
        self.validate()?;
        let keys = match self.candidate_keys() {
            Some(k) => k,
            None => all_keys(&self.shape, &self.gens, probe_len),
        };
        let op = |k: &Key| self.op(k);
        use rayon::prelude::*;
        let bad = keys.par_iter().find_first(|k| !self.shape.relation(&op, k).is_empty());
        if let Some(k) = bad {
            let v = self.shape.relation(&op, k);
            return Err(Error::StructureViolation(format!(
                "relation at {} is {}",
                self.format_key(k),
                self.format_terms(&v)
            )));
        }
        Ok(keys.len())
    }

    pub fn format_key(&self, key: &Key) -> String {
        let (l, x, r) = key;
        let mut parts: Vec<String> = Vec::new();
        if let Some(s) = &self.shape.left {
            parts.extend(l.iter().map(|&a| s.algebra.label(a).to_string()));
        }
        parts.push(self.gens[*x].label.clone());
        if let Some(s) = &self.shape.right {
            parts.extend(r.iter().map(|&a| s.algebra.label(a).to_string()));
        }
        format!("({})", parts.join(", "))
    }

    pub fn format_term(&self, t: &Term) -> String {
        let mut parts = Vec::new();
        if let (Some(s), Some(a)) = (&self.shape.left, t.left) {
            parts.push(s.algebra.label(a).to_string());
        }
        parts.push(self.gens[t.gen].label.clone());
        if let (Some(s), Some(a)) = (&self.shape.right, t.right) {
            parts.push(s.algebra.label(a).to_string());
        }
        parts.join("⊗")
    }

    pub fn format_terms(&self, ts: &[Term]) -> String {
        if ts.is_empty() {
            return "0".into();
        }
        ts.iter().map(|t| self.format_term(t)).collect::<Vec<_>>().join(" + ")
    }

    /// Text listing of the generators and the operation table.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let tag = |o: &Option<Side>| match o {
            Some(x) => format!("{:?} over {}", x.tag, x.algebra.name()),
            None => "none".into(),
        };
        s.push_str(&format!("{}: left {}, right {}\n", self.name, tag(&self.shape.left), tag(&self.shape.right)));
        s.push_str(&format!(
            "generators: {}\n",
            self.gens.iter().map(|g| g.label.as_str()).collect::<Vec<_>>().join(" ")
        ));
        for (k, v) in &self.table {
            s.push_str(&format!("  {} -> {}\n", self.format_key(k), self.format_terms(v)));
        }
        if let Some(r) = &self.rule {
            s.push_str(&format!("  rule: {}\n", r.describe()));
        }
        s
    }

    /// The same structure with left and right exchanged, each algebra
    /// replaced by its opposite and input sequences reversed.
    pub fn mirror(&self) -> Bimodule {
        let left = self.shape.right.as_ref().map(|s| s.mirrored());
        let right = self.shape.left.as_ref().map(|s| s.mirrored());
        let gens = self.gens.iter().map(|g| Gen { label: g.label.clone(), left: g.right, right: g.left }).collect();
        let mut out = Bimodule::new(&self.name, left, right, gens);
        for (k, v) in &self.table {
            out.table.insert(mirror_key(k), mirror_terms(v));
        }
        if let Some(r) = &self.rule {
            out.rule = Some(Arc::new(MirrorRule { inner: r.clone() }));
        }
        out
    }

    /// The same structure with its left algebra replaced along an
    /// isomorphism `map` from the old left algebra to `alg`.
    pub fn transport_left(&self, alg: Arc<Algebra>, map: &[usize]) -> Result<Bimodule> {
        let old = self.shape.left.as_ref().ok_or_else(|| Error::TagMismatch(format!("{} has no left side", self.name)))?;
        let keys = self.keys().ok_or(Error::UnboundedInput)?;
        let idem = |p: usize| alg.idem_position(map[old.algebra.idem_elem(p)]).expect("isomorphism preserves idempotents");
        let gens = self.gens.iter().map(|g| Gen { label: g.label.clone(), left: idem(g.left), right: g.right }).collect();
        let side = Side::new(old.tag, alg.clone());
        let mut out = Bimodule::new(&self.name, Some(side), self.shape.right.clone(), gens);
        for k in keys {
            let terms: Vec<Term> =
                self.op(&k).iter().map(|t| Term::new(t.left.map(|a| map[a]), t.gen, t.right)).collect();
            out.add((k.0.iter().map(|&a| map[a]).collect(), k.1, k.2.clone()), &terms);
        }
        Ok(out)
    }

    /// Dual structure: generators `x*`, sides exchanged (same algebras),
    /// every arrow reversed. Requires a finite table.
    pub fn opposite(&self) -> Result<Bimodule> {
        let keys = self.keys().ok_or(Error::UnboundedInput)?;
        let gens = self.gens.iter().map(|g| Gen { label: format!("{}*", g.label), left: g.right, right: g.left }).collect();
        let mut out = Bimodule::new(&format!("{}*", self.name), self.shape.right.clone(), self.shape.left.clone(), gens);
        for k in keys {
            for t in self.op(&k) {
                out.add((k.2.clone(), t.gen, k.0.clone()), &[Term::new(t.right, k.1, t.left)]);
            }
        }
        Ok(out)
    }

    /// Whether iterating the no-input operations on one type D side can
    /// produce arbitrarily many non-idempotent outputs on that side while
    /// the outputs on the other side, multiplied together, stay nonzero.
    fn d_side_bounded(&self, is_left: bool) -> bool {
        let (this, other) = if is_left { (&self.shape.left, &self.shape.right) } else { (&self.shape.right, &self.shape.left) };
        let this_alg = &this.as_ref().unwrap().algebra;
        let other_alg = other.as_ref().filter(|s| s.tag == Tag::D).map(|s| s.algebra.clone());
        let mut ids: HashMap<(usize, Option<usize>), usize> = HashMap::new();
        let mut states: Vec<(usize, Option<usize>)> = Vec::new();
        let mut edges: Vec<Vec<(usize, bool)>> = Vec::new();
        let mut intern = |st: (usize, Option<usize>), states: &mut Vec<(usize, Option<usize>)>, edges: &mut Vec<Vec<(usize, bool)>>| {
            *ids.entry(st).or_insert_with(|| {
                states.push(st);
                edges.push(Vec::new());
                states.len() - 1
            })
        };
        for g in 0..self.gens.len() {
            intern((g, None), &mut states, &mut edges);
        }
        let mut k = 0;
        while k < states.len() {
            let (x, acc) = states[k];
            for t in self.zero_input_terms(x) {
                let (a, b) = if is_left { (t.left, t.right) } else { (t.right, t.left) };
                let counting = a.is_some_and(|a| !this_alg.is_idempotent(a));
                let accs: Vec<Option<usize>> = match (&other_alg, acc, b) {
                    (Some(alg), Some(p), Some(b)) => {
                        let prod = if is_left { alg.mul(b, p) } else { alg.mul(p, b) };
                        prod.iter().map(|&c| Some(c)).collect()
                    }
                    (Some(_), None, b) => vec![b],
                    _ => vec![None],
                };
                for acc2 in accs {
                    let j = intern((t.gen, acc2), &mut states, &mut edges);
                    edges[k].push((j, counting));
                }
            }
            k += 1;
        }
        let reach = |from: usize, to: usize| {
            let mut seen = vec![false; states.len()];
            let mut stack = vec![from];
            while let Some(u) = stack.pop() {
                if u == to {
                    return true;
                }
                if std::mem::replace(&mut seen[u], true) {
                    continue;
                }
                stack.extend(edges[u].iter().map(|e| e.0));
            }
            false
        };
        for u in 0..states.len() {
            for &(v, counting) in &edges[u] {
                if counting && reach(v, u) {
                    return false;
                }
            }
        }
        true
    }

    /// Boundedness. A type D side is bounded when iterated no-input
    /// operations eventually stop producing outputs on it. A type A side
    /// is bounded when operations vanish on long inputs (known for finite
    /// tables, or declared by a rule). Operational boundedness asks that
    /// every chain of operations dies: the graph of all nonzero entries is
    /// acyclic.
    pub fn is_bounded(&self, flavor: BoundFlavor) -> Bounded {
        let yes = |b: bool| if b { Bounded::Yes } else { Bounded::No };
        match flavor {
            BoundFlavor::Left | BoundFlavor::Right => {
                let is_left = flavor == BoundFlavor::Left;
                let s = if is_left { &self.shape.left } else { &self.shape.right };
                match s.as_ref().map(|s| s.tag) {
                    None => Bounded::Yes,
                    Some(Tag::D) => yes(self.d_side_bounded(is_left)),
                    Some(Tag::A) => self.inputs_bounded(),
                }
            }
            BoundFlavor::Operational => {
                let has_a = self.shape.left_tag() == Some(Tag::A) || self.shape.right_tag() == Some(Tag::A);
                if !has_a {
                    let adj: Vec<Vec<usize>> =
                        (0..self.gens.len()).map(|x| self.zero_input_terms(x).iter().map(|t| t.gen).collect()).collect();
                    return yes(is_acyclic(&adj));
                }
                match self.keys() {
                    Some(keys) => {
                        let mut adj = vec![Vec::new(); self.gens.len()];
                        for k in &keys {
                            for t in self.op(k) {
                                adj[k.1].push(t.gen);
                            }
                        }
                        yes(is_acyclic(&adj))
                    }
                    None => match self.rule.as_ref().and_then(|r| r.bounded()) {
                        Some(false) => Bounded::No,
                        _ => Bounded::Unknown,
                    },
                }
            }
        }
    }

    fn inputs_bounded(&self) -> Bounded {
        if self.keys().is_some() {
            return Bounded::Yes;
        }
        match self.rule.as_ref().and_then(|r| r.bounded()) {
            Some(true) => Bounded::Yes,
            Some(false) => Bounded::No,
            None => Bounded::Unknown,
        }
    }

    /// Renames the structure.
    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Literal equality of generator labels, idempotents and operations on
    /// the given keys (all keys if both are finite).
    pub fn same_operations(&self, other: &Bimodule, probe_len: usize) -> bool {
        if self.gens != other.gens {
            return false;
        }
        match (self.keys(), other.keys()) {
            (Some(a), Some(b)) => {
                let ks: BTreeSet<Key> = a.into_iter().chain(b).collect();
                ks.iter().all(|k| self.op(k) == other.op(k))
            }
            _ => all_keys(&self.shape, &self.gens, probe_len).iter().all(|k| self.op(k) == other.op(k)),
        }
    }
}

fn is_acyclic(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    let mut indeg = vec![0usize; n];
    for es in adj {
        for &y in es {
            indeg[y] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(x) = stack.pop() {
        seen += 1;
        for &y in &adj[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                stack.push(y);
            }
        }
    }
    seen == n
}

/// For each basis element `c`: the elements whose differential contains
/// `c`, and the pairs of non-idempotents whose product contains `c`.
#[allow(clippy::type_complexity)]
fn algebra_indices(alg: &Algebra) -> (Vec<Vec<usize>>, Vec<Vec<(usize, usize)>>) {
    let n = alg.dim();
    let mut pre = vec![Vec::new(); n];
    let mut fact = vec![Vec::new(); n];
    for a in 0..n {
        for &c in alg.d(a) {
            pre[c].push(a);
        }
        if alg.is_idempotent(a) {
            continue;
        }
        for (b, prod) in alg.right_products(a) {
            if alg.is_idempotent(b) {
                continue;
            }
            for &c in prod {
                fact[c].push((a, b));
            }
        }
    }
    (pre, fact)
}

pub fn mirror_key(k: &Key) -> Key {
    let mut l = k.2.clone();
    l.reverse();
    let mut r = k.0.clone();
    r.reverse();
    (l, k.1, r)
}

pub fn mirror_terms(v: &[Term]) -> Terms {
    reduce_terms(v.iter().map(|t| Term::new(t.right, t.gen, t.left)).collect())
}

struct MirrorRule {
    inner: Arc<dyn OpRule>,
}

impl OpRule for MirrorRule {
    fn eval(&self, key: &Key) -> Terms {
        mirror_terms(&self.inner.eval(&mirror_key(key)))
    }

    fn describe(&self) -> String {
        format!("mirror of [{}]", self.inner.describe())
    }

    fn keys(&self) -> Option<Vec<Key>> {
        Some(self.inner.keys()?.iter().map(mirror_key).collect())
    }

    fn bounded(&self) -> Option<bool> {
        self.inner.bounded()
    }

    fn pattern(&self) -> Option<PatternRule> {
        self.inner.pattern().map(|p| p.mirrored())
    }
}

/// All idempotent-compatible input sequences of augmentation-ideal basis
/// elements with total length at most `max_len`, for every generator.
pub fn all_keys(shape: &Shape, gens: &[Gen], max_len: usize) -> Vec<Key> {
    let mut out = Vec::new();
    for (x, g) in gens.iter().enumerate() {
        let lefts = match &shape.left {
            Some(s) if s.tag == Tag::A => sequences(&s.algebra, g.left, max_len, true),
            _ => vec![vec![]],
        };
        let rights = match &shape.right {
            Some(s) if s.tag == Tag::A => sequences(&s.algebra, g.right, max_len, false),
            _ => vec![vec![]],
        };
        for l in &lefts {
            for r in &rights {
                if l.len() + r.len() <= max_len {
                    out.push((l.clone(), x, r.clone()));
                }
            }
        }
    }
    out
}

/// Composable sequences of non-idempotent basis elements ending at (for
/// `ending`) or starting from idempotent position `e`.
pub fn sequences(alg: &Algebra, e: usize, max_len: usize, ending: bool) -> Vec<Vec<usize>> {
    let aug = alg.augmentation_basis();
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &a in &aug {
                let ok = if ending {
                    let target = s.first().map(|&f| alg.left_idem(f)).unwrap_or(e);
                    alg.right_idem(a) == target
                } else {
                    let source = s.last().map(|&l| alg.right_idem(l)).unwrap_or(e);
                    alg.left_idem(a) == source
                };
                if ok {
                    let mut t = Vec::with_capacity(s.len() + 1);
                    if ending {
                        t.push(a);
                        t.extend_from_slice(s);
                    } else {
                        t.extend_from_slice(s);
                        t.push(a);
                    }
                    next.push(t);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

/// A family of operations `(prefix, repeat^i, suffix)` on one side,
/// taking a generator to a generator, for all `i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PatternRule {
    /// Whether the inputs are on the right side.
    pub right_side: bool,
    pub gen: usize,
    pub out: usize,
    pub prefix: Vec<usize>,
    pub repeat: Vec<usize>,
    pub suffix: Vec<usize>,
    /// Display labels of the inputs, for reports.
    pub labels: Vec<String>,
}

impl PatternRule {
    fn matches(&self, seq: &[usize]) -> bool {
        let (p, s) = (self.prefix.len(), self.suffix.len());
        if seq.len() < p + s || seq[..p] != self.prefix[..] || seq[seq.len() - s..] != self.suffix[..] {
            return false;
        }
        let mid = &seq[p..seq.len() - s];
        if self.repeat.is_empty() {
            return mid.is_empty();
        }
        mid.len() % self.repeat.len() == 0 && mid.chunks(self.repeat.len()).all(|c| c == &self.repeat[..])
    }

    /// The pattern fitting every nonzero operation of a one-sided type A
    /// module on inputs of length at most `max_len`, if there is one and
    /// at least three of its terms are seen.
    pub fn infer(m: &Bimodule, max_len: usize) -> Option<PatternRule> {
        let (right_side, alg) = match (m.left(), m.right()) {
            (None, Some(s)) if s.tag == Tag::A => (true, s.algebra.clone()),
            (Some(s), None) if s.tag == Tag::A => (false, s.algebra.clone()),
            _ => return None,
        };
        let mut seen = Vec::new();
        for key in all_keys(&m.shape, &m.gens, max_len) {
            let terms = m.op(&key);
            if terms.is_empty() {
                continue;
            }
            let [t] = terms[..] else { return None };
            let seq = if right_side { key.2.clone() } else { key.0.clone() };
            seen.push((seq, key.1, t.gen));
        }
        seen.sort_by_key(|s| s.0.len());
        let (s0, gen, out) = seen.first()?.clone();
        let s1 = &seen.get(1)?.0;
        let r = s1.len().checked_sub(s0.len()).filter(|&r| r > 0)?;
        if s0.len() + 2 * r > max_len {
            return None;
        }
        (0..=s0.len()).find_map(|p| {
            let rule = PatternRule {
                right_side,
                gen,
                out,
                prefix: s0[..p].to_vec(),
                repeat: s1[p..p + r].to_vec(),
                suffix: s0[p..].to_vec(),
                labels: alg.labels().to_vec(),
            };
            let fits = all_keys(&m.shape, &m.gens, max_len).iter().all(|k| rule.eval(k) == m.op(k));
            fits.then_some(rule)
        })
    }

    pub fn mirrored(&self) -> PatternRule {
        let rev = |v: &Vec<usize>| v.iter().rev().copied().collect::<Vec<_>>();
        PatternRule {
            right_side: !self.right_side,
            gen: self.gen,
            out: self.out,
            prefix: rev(&self.suffix),
            repeat: rev(&self.repeat),
            suffix: rev(&self.prefix),
            labels: self.labels.clone(),
        }
    }
}

impl OpRule for PatternRule {
    fn eval(&self, key: &Key) -> Terms {
        let (l, x, r) = key;
        if *x != self.gen {
            return vec![];
        }
        let (seq, other) = if self.right_side { (r, l) } else { (l, r) };
        if other.is_empty() && self.matches(seq) {
            vec![Term::new(None, self.out, None)]
        } else {
            vec![]
        }
    }

    fn describe(&self) -> String {
        let ls = &self.labels;
        let name = |v: &[usize]| v.iter().map(|&a| ls.get(a).cloned().unwrap_or(a.to_string())).collect::<Vec<_>>();
        let mut parts = name(&self.prefix);
        if !self.repeat.is_empty() {
            parts.push(format!("({})^i", name(&self.repeat).join(",")));
        }
        parts.extend(name(&self.suffix));
        format!("m(g{}, {}) = g{} for all i >= 0", self.gen, parts.join(", "), self.out)
    }

    fn bounded(&self) -> Option<bool> {
        Some(self.repeat.is_empty())
    }

    fn pattern(&self) -> Option<PatternRule> {
        Some(self.clone())
    }
}

/// A rule with a memo table.
pub(crate) struct Memo<F: Fn(&Key) -> Terms + Send + Sync> {
    f: F,
    cache: std::sync::Mutex<HashMap<Key, Terms>>,
}

impl<F: Fn(&Key) -> Terms + Send + Sync> Memo<F> {
    pub(crate) fn new(f: F) -> Self {
        Memo { f, cache: std::sync::Mutex::new(HashMap::new()) }
    }

    pub(crate) fn get(&self, key: &Key) -> Terms {
        if let Some(v) = self.cache.lock().unwrap().get(key) {
            return v.clone();
        }
        let v = (self.f)(key);
        self.cache.lock().unwrap().insert(key.clone(), v.clone());
        v
    }
}
