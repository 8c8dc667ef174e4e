//! Finite-dimensional dg algebras over F2 with an idempotent ground ring.
//!
//! Elements are F2 vectors of basis indices. Every basis element `a`
//! satisfies `e_l a e_r = a` for exactly one pair of primitive idempotents.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::f2::{self, F2Vec};
use crate::strands::StrandGen;

pub type Elem = F2Vec;

#[derive(Clone)]
pub struct Algebra {
    name: String,
    labels: Vec<String>,
    /// Basis indices of the primitive idempotents.
    idempotents: Vec<usize>,
    /// Position in `idempotents` of the left idempotent of each basis element.
    left_idem: Vec<usize>,
    right_idem: Vec<usize>,
    diff: Vec<Elem>,
    /// `prod[a]` maps `b` to `a*b` for the nonzero products only.
    prod: Vec<HashMap<usize, Elem>>,
    /// Strand diagrams for algebras built from a pointed matched circle.
    strands: Option<Arc<Vec<StrandGen>>>,
    /// Whether this is the opposite of the algebra carrying the strand data.
    opposite: bool,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, dim {})", self.name, self.dim())
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// Builds an algebra from tables. Products not listed are zero, except
    /// that idempotents act as units.
    pub fn from_tables(
        name: &str,
        labels: Vec<String>,
        idempotents: Vec<usize>,
        left_idem: Vec<usize>,
        right_idem: Vec<usize>,
        diff: Vec<Elem>,
        products: Vec<((usize, usize), Elem)>,
        strands: Option<Vec<StrandGen>>,
    ) -> Self {
        let n = labels.len();
        let mut prod: Vec<HashMap<usize, Elem>> = vec![HashMap::new(); n];
        for ((a, b), c) in products {
            if !c.is_empty() {
                prod[a].insert(b, c);
            }
        }
        for (pos, &e) in idempotents.iter().enumerate() {
            for x in 0..n {
                if left_idem[x] == pos {
                    prod[e].insert(x, vec![x]);
                }
                if right_idem[x] == pos {
                    prod[x].insert(e, vec![x]);
                }
            }
        }
        Algebra {
            name: name.to_string(),
            labels,
            idempotents,
            left_idem,
            right_idem,
            diff,
            prod,
            strands: strands.map(Arc::new),
            opposite: false,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Basis index for a label; panics on unknown labels.
    pub fn gen(&self, label: &str) -> usize {
        self.index_of(label).unwrap_or_else(|| panic!("no basis element {label} in {}", self.name))
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn num_idempotents(&self) -> usize {
        self.idempotents.len()
    }

    /// Position (among idempotents) of the left idempotent of `a`.
    pub fn left_idem(&self, a: usize) -> usize {
        self.left_idem[a]
    }

    pub fn right_idem(&self, a: usize) -> usize {
        self.right_idem[a]
    }

    pub fn idem_elem(&self, pos: usize) -> usize {
        self.idempotents[pos]
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.idempotents[self.left_idem[a]] == a
    }

    pub fn idem_position(&self, a: usize) -> Option<usize> {
        self.idempotents.iter().position(|&e| e == a)
    }

    pub fn strands(&self) -> Option<&[StrandGen]> {
        self.strands.as_deref().map(|v| v.as_slice())
    }

    pub fn is_opposite(&self) -> bool {
        self.opposite
    }

    /// Non-idempotent basis elements.
    pub fn augmentation_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&a| !self.is_idempotent(a)).collect()
    }

    pub fn mul(&self, a: usize, b: usize) -> &[usize] {
        match self.prod[a].get(&b) {
            Some(c) => c,
            None => &[],
        }
    }

    /// Nonzero products `a*b` for fixed `a`.
    pub fn right_products(&self, a: usize) -> impl Iterator<Item = (usize, &Elem)> {
        let mut v: Vec<(usize, &Elem)> = self.prod[a].iter().map(|(&b, c)| (b, c)).collect();
        v.sort_by_key(|p| p.0);
        v.into_iter()
    }

    pub fn d(&self, a: usize) -> &[usize] {
        &self.diff[a]
    }

    pub fn mul_elem(&self, x: &[usize], y: &[usize]) -> Elem {
        let mut out = Vec::new();
        for &a in x {
            for &b in y {
                let c = self.mul(a, b);
                if !c.is_empty() {
                    f2::add_into(&mut out, c);
                }
            }
        }
        out
    }

    pub fn d_elem(&self, x: &[usize]) -> Elem {
        let mut out = Vec::new();
        for &a in x {
            f2::add_into(&mut out, &self.diff[a]);
        }
        out
    }

    /// Sum of all primitive idempotents.
    pub fn unit(&self) -> Elem {
        let mut u = self.idempotents.clone();
        u.sort();
        u
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diff.iter().all(|d| d.is_empty())
    }

    /// The opposite algebra: same basis, `a *op b = b * a`, idempotent sides swapped.
    pub fn opposite(&self) -> Algebra {
        let n = self.dim();
        let mut prod: Vec<HashMap<usize, Elem>> = vec![HashMap::new(); n];
        for a in 0..n {
            for (&b, c) in &self.prod[a] {
                prod[b].insert(a, c.clone());
            }
        }
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        Algebra {
            name,
            labels: self.labels.clone(),
            idempotents: self.idempotents.clone(),
            left_idem: self.right_idem.clone(),
            right_idem: self.left_idem.clone(),
            diff: self.diff.clone(),
            prod,
            strands: self.strands.clone(),
            opposite: !self.opposite,
        }
    }

    /// A basis bijection `self -> other` preserving idempotents, the
    /// differential and all products, found by backtracking.
    pub fn isomorphism_to(&self, other: &Algebra) -> Option<Vec<usize>> {
        let n = self.dim();
        if n != other.dim() || self.num_idempotents() != other.num_idempotents() {
            return None;
        }
        fn image(map: &[usize], v: &[usize]) -> Option<Elem> {
            let mut out = Vec::with_capacity(v.len());
            for &a in v {
                if map[a] == usize::MAX {
                    return None;
                }
                out.push(map[a]);
            }
            Some(f2::from_list(out))
        }
        fn consistent(s: &Algebra, o: &Algebra, map: &[usize], a: usize) -> bool {
            let b = map[a];
            if s.is_idempotent(a) != o.is_idempotent(b) {
                return false;
            }
            if let Some(d) = image(map, s.d(a)) {
                if d.as_slice() != o.d(b) {
                    return false;
                }
            }
            for c in 0..s.dim() {
                if map[c] == usize::MAX {
                    continue;
                }
                for (x, y) in [(a, c), (c, a)] {
                    if let Some(p) = image(map, s.mul(x, y)) {
                        if p.as_slice() != o.mul(map[x], map[y]) {
                            return false;
                        }
                    }
                }
            }
            true
        }
        fn search(s: &Algebra, o: &Algebra, a: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            if a == map.len() {
                return (0..map.len()).all(|x| image(map, s.d(x)).as_deref() == Some(o.d(map[x])));
            }
            for b in 0..map.len() {
                if used[b] {
                    continue;
                }
                map[a] = b;
                used[b] = true;
                if consistent(s, o, map, a) && search(s, o, a + 1, map, used) {
                    return true;
                }
                used[b] = false;
                map[a] = usize::MAX;
            }
            false
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        search(self, other, 0, &mut map, &mut used).then_some(map)
    }

    /// Relabels basis elements (display only).
    pub fn with_labels(mut self, name: &str, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim());
        self.name = name.to_string();
        self.labels = labels;
        self
    }

    pub fn format_elem(&self, x: &[usize]) -> String {
        if x.is_empty() {
            return "0".to_string();
        }
        x.iter().map(|&a| self.labels[a].clone()).collect::<Vec<_>>().join("+")
    }

    /// Checks d^2 = 0 on every basis element.
    pub fn check_d_squared(&self) -> Result<(), String> {
        for a in 0..self.dim() {
            if !self.d_elem(&self.diff[a]).is_empty() {
                return Err(format!("d^2({}) != 0", self.labels[a]));
            }
        }
        Ok(())
    }

    /// Checks the Leibniz rule on every basis pair.
    pub fn check_leibniz(&self) -> Result<(), String> {
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                if self.right_idem[a] != self.left_idem[b] {
                    continue;
                }
                let lhs = self.d_elem(self.mul(a, b));
                let mut rhs = self.mul_elem(&self.diff[a], &[b]);
                f2::add_into(&mut rhs, &self.mul_elem(&[a], &self.diff[b]));
                if lhs != rhs {
                    return Err(format!("Leibniz fails on ({}, {})", self.labels[a], self.labels[b]));
                }
            }
        }
        Ok(())
    }

    /// Checks associativity on triples; `stride` > 1 subsamples the first factor.
    pub fn check_associativity(&self, stride: usize) -> Result<(), String> {
        let stride = stride.max(1);
        for a in (0..self.dim()).step_by(stride) {
            for (b, ab) in self.right_products(a) {
                for c in 0..self.dim() {
                    if self.right_idem[b] != self.left_idem[c] {
                        continue;
                    }
                    let lhs = self.mul_elem(ab, &[c]);
                    let rhs = self.mul_elem(&[a], self.mul(b, c));
                    if lhs != rhs {
                        return Err(format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        ));
                    }
                }
            }
            // triples with a*b = 0 but a*(b*c) possibly nonzero
            for b in 0..self.dim() {
                if self.right_idem[a] != self.left_idem[b] || !self.mul(a, b).is_empty() {
                    continue;
                }
                for (_c, bc) in self.right_products(b) {
                    if !self.mul_elem(&[a], bc).is_empty() {
                        return Err(format!("associativity fails on ({}, {}, _)", self.labels[a], self.labels[b]));
                    }
                }
            }
        }
        Ok(())
    }

    /// Length of the longest nonzero product of augmentation-ideal basis elements.
    pub fn nilpotency_length(&self) -> usize {
        let aug = self.augmentation_basis();
        let mut current: Vec<Elem> = aug.iter().map(|&a| vec![a]).collect();
        let mut len = 0;
        while !current.is_empty() {
            len += 1;
            let mut next: Vec<Elem> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for x in &current {
                for &a in &aug {
                    let y = self.mul_elem(x, &[a]);
                    if !y.is_empty() && seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            current = next;
            if len > self.dim() + 1 {
                break;
            }
        }
        len
    }
}
