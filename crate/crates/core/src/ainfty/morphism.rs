//! Morphisms between structures of the same shape.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::*;

/// A map `source -> target` given by components indexed like operations:
/// a key over the source generators goes to terms over the target ones.
#[derive(Clone)]
pub struct StructureMorphism {
    pub name: String,
    pub source: Arc<Bimodule>,
    pub target: Arc<Bimodule>,
    table: BTreeMap<Key, Terms>,
    rule: Option<Arc<dyn OpRule>>,
}

impl fmt::Debug for StructureMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureMorphism({}: {} -> {})", self.name, self.source.name, self.target.name)
    }
}

impl StructureMorphism {
    pub fn new(name: &str, source: Arc<Bimodule>, target: Arc<Bimodule>) -> Self {
        StructureMorphism { name: name.into(), source, target, table: BTreeMap::new(), rule: None }
    }

    pub fn with_rule(mut self, rule: Arc<dyn OpRule>) -> Self {
        self.rule = Some(rule);
        self
    }

    pub fn identity(x: Arc<Bimodule>) -> Self {
        let mut m = StructureMorphism::new("id", x.clone(), x.clone());
        for (i, g) in x.gens.iter().enumerate() {
            m.add((vec![], i, vec![]), &[x.shape.identity_term(g, i)]);
        }
        m
    }

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

    pub fn shape(&self) -> &Shape {
        &self.source.shape
    }

    pub fn op(&self, key: &Key) -> Terms {
        let mut v = self.table.get(key).cloned().unwrap_or_default();
        if let Some(r) = &self.rule {
            v.extend(r.eval(key));
            v = reduce_terms(v);
        }
        v
    }

    pub fn keys(&self) -> Option<Vec<Key>> {
        let mut ks: BTreeSet<Key> = self.table.keys().cloned().collect();
        if let Some(r) = &self.rule {
            ks.extend(r.keys()?);
        }
        Some(ks.into_iter().collect())
    }

    pub fn max_input_len(&self) -> Option<usize> {
        Some(self.keys()?.iter().map(|(l, _, r)| l.len() + r.len()).max().unwrap_or(0))
    }

    /// `self o inner`.
    pub fn after(&self, inner: &StructureMorphism) -> StructureMorphism {
        let rule = ComposeRule { outer: self.clone(), inner: inner.clone() };
        StructureMorphism::new(&format!("{} o {}", self.name, inner.name), inner.source.clone(), self.target.clone())
            .with_rule(Arc::new(rule))
    }

    pub fn plus(&self, other: &StructureMorphism) -> StructureMorphism {
        let rule = SumRule { parts: vec![self.clone(), other.clone()] };
        StructureMorphism::new(&format!("{} + {}", self.name, other.name), self.source.clone(), self.target.clone())
            .with_rule(Arc::new(rule))
    }

    /// The differential of this map in the morphism complex, at `key`.
    pub fn differential_at(&self, key: &Key) -> Terms {
        let src = |k: &Key| self.source.op(k);
        let tgt = |k: &Key| self.target.op(k);
        let f = |k: &Key| self.op(k);
        self.shape().map_differential(&src, &tgt, &f, key)
    }

    /// Keys on which identities between maps built from these pieces are
    /// checked: every key if the shape has no type A side, otherwise all
    /// keys up to `len`.
    pub fn check_keys(&self, len: usize) -> Vec<Key> {
        all_keys(self.shape(), &self.source.gens, len)
    }

    /// Verifies that this map is a cycle on all keys up to `len` inputs.
    pub fn check_cycle(&self, len: usize) -> Result<()> {
        for k in self.check_keys(len) {
            let v = self.differential_at(&k);
            if !v.is_empty() {
                return Err(Error::StructureViolation(format!(
                    "{} is not a cycle at {}: {}",
                    self.name,
                    self.source.format_key(&k),
                    self.target.format_terms(&v)
                )));
            }
        }
        Ok(())
    }

    /// Whether `self + other` vanishes on all keys up to `len` inputs.
    pub fn equals(&self, other: &StructureMorphism, len: usize) -> bool {
        self.check_keys(len).iter().all(|k| self.op(k) == other.op(k))
    }

    pub fn materialize(&self, keys: &[Key]) -> StructureMorphism {
        let mut m = StructureMorphism::new(&self.name, self.source.clone(), self.target.clone());
        for k in keys {
            let v = self.op(k);
            if !v.is_empty() {
                m.table.insert(k.clone(), v);
            }
        }
        m
    }

    pub fn table(&self) -> &BTreeMap<Key, Terms> {
        &self.table
    }

    pub fn report(&self) -> String {
        let mut s = format!("{}: {} -> {}\n", self.name, self.source.name, self.target.name);
        let entries: Vec<(Key, Terms)> = match self.keys() {
            Some(ks) => ks.into_iter().map(|k| (k.clone(), self.op(&k))).collect(),
            None => self.table.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        };
        for (k, v) in entries {
            if !v.is_empty() {
                s.push_str(&format!("  {} -> {}\n", self.source.format_key(&k), self.target.format_terms(&v)));
            }
        }
        s
    }
}

struct ComposeRule {
    outer: StructureMorphism,
    inner: StructureMorphism,
}

impl OpRule for ComposeRule {
    fn eval(&self, key: &Key) -> Terms {
        let o = |k: &Key| self.outer.op(k);
        let i = |k: &Key| self.inner.op(k);
        self.inner.shape().compose(&o, &i, key)
    }

    fn describe(&self) -> String {
        format!("{} o {}", self.outer.name, self.inner.name)
    }
}

struct SumRule {
    parts: Vec<StructureMorphism>,
}

impl OpRule for SumRule {
    fn eval(&self, key: &Key) -> Terms {
        reduce_terms(self.parts.iter().flat_map(|p| p.op(key)).collect())
    }

    fn describe(&self) -> String {
        self.parts.iter().map(|p| p.name.clone()).collect::<Vec<_>>().join(" + ")
    }

    fn keys(&self) -> Option<Vec<Key>> {
        let mut ks = BTreeSet::new();
        for p in &self.parts {
            ks.extend(p.keys()?);
        }
        Some(ks.into_iter().collect())
    }
}
