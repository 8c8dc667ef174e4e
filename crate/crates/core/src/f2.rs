//! Sparse linear algebra over F2.
//!
//! Vectors are sorted lists of the indices carrying coefficient one.

use std::collections::HashMap;

pub type F2Vec = Vec<usize>;

/// `a += b`.
pub fn add_into(a: &mut F2Vec, b: &[usize]) {
    if b.is_empty() {
        return;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    *a = out;
}

pub fn sum(a: &[usize], b: &[usize]) -> F2Vec {
    let mut v = a.to_vec();
    add_into(&mut v, b);
    v
}

/// Turns an arbitrary list of indices into an F2 vector (pairs cancel).
pub fn from_list(mut v: Vec<usize>) -> F2Vec {
    v.sort_unstable();
    let mut out: Vec<usize> = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Incremental column reduction keyed on the largest index.
#[derive(Clone, Debug, Default)]
pub struct Reducer {
    pivots: HashMap<usize, usize>,
    reduced: Vec<F2Vec>,
    combos: Vec<F2Vec>,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    /// Reduces `v` against the stored columns. Returns the remainder and the
    /// ids of stored columns whose sum was subtracted.
    pub fn reduce(&self, v: &[usize]) -> (F2Vec, F2Vec) {
        let mut v = v.to_vec();
        let mut combo: F2Vec = Vec::new();
        while let Some(&top) = v.last() {
            match self.pivots.get(&top) {
                Some(&k) => {
                    add_into(&mut v, &self.reduced[k]);
                    add_into(&mut combo, &self.combos[k]);
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Inserts column `v` labelled `id`. Returns `Some(combo)` if `v` was
    /// dependent, where `combo` lists the labels summing to zero with `id`.
    pub fn insert(&mut self, v: &[usize], id: usize) -> Option<F2Vec> {
        let (rem, mut combo) = self.reduce(v);
        add_into(&mut combo, &[id]);
        if rem.is_empty() {
            return Some(combo);
        }
        let top = *rem.last().unwrap();
        self.pivots.insert(top, self.reduced.len());
        self.reduced.push(rem);
        self.combos.push(combo);
        None
    }

    pub fn contains(&self, v: &[usize]) -> bool {
        self.reduce(v).0.is_empty()
    }
}

pub fn rank(cols: &[F2Vec]) -> usize {
    let mut r = Reducer::new();
    for (i, c) in cols.iter().enumerate() {
        r.insert(c, i);
    }
    r.rank()
}

/// Basis of the kernel of the map whose columns are `cols`.
pub fn kernel(cols: &[F2Vec]) -> Vec<F2Vec> {
    let mut r = Reducer::new();
    let mut out = Vec::new();
    for (i, c) in cols.iter().enumerate() {
        if let Some(k) = r.insert(c, i) {
            out.push(k);
        }
    }
    out
}

/// Some `x` with `sum_{j in x} cols[j] = b`, if one exists.
pub fn solve(cols: &[F2Vec], b: &[usize]) -> Option<F2Vec> {
    let mut r = Reducer::new();
    for (i, c) in cols.iter().enumerate() {
        r.insert(c, i);
    }
    let (rem, combo) = r.reduce(b);
    if rem.is_empty() {
        Some(combo)
    } else {
        None
    }
}

/// Homology of a finite complex given by the images `d[j]` of basis vectors.
#[derive(Clone, Debug)]
pub struct Homology {
    pub dim: usize,
    pub rank_d: usize,
    /// Cycles whose classes form a basis of homology.
    pub representatives: Vec<F2Vec>,
    boundary_and_reps: Reducer,
    num_boundaries: usize,
}

impl Homology {
    pub fn compute(d: &[F2Vec]) -> Self {
        Self::compute_ordered(d, false)
    }

    /// As `compute`, optionally scanning cycles in reverse order.
    pub fn compute_ordered(d: &[F2Vec], reversed: bool) -> Self {
        let dim = d.len();
        let mut cycles_red = Reducer::new();
        let mut cycles = Vec::new();
        for (i, c) in d.iter().enumerate() {
            if let Some(k) = cycles_red.insert(c, i) {
                cycles.push(k);
            }
        }
        let rank_d = cycles_red.rank();
        // boundaries carry labels below num_boundaries, representatives above
        let mut br2 = Reducer::new();
        let mut nb2 = 0;
        for c in d.iter() {
            if !c.is_empty() && br2.insert(c, nb2).is_none() {
                nb2 += 1;
            }
        }
        let num_boundaries = dim + 1;
        let mut reps = Vec::new();
        if reversed {
            cycles.reverse();
        }
        for z in cycles {
            let label = num_boundaries + reps.len();
            if br2.insert(&z, label).is_none() {
                reps.push(z);
            }
        }
        debug_assert_eq!(reps.len(), dim - 2 * rank_d);
        Homology { dim, rank_d, representatives: reps, boundary_and_reps: br2, num_boundaries }
    }

    pub fn rank(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of a cycle in the representative basis.
    pub fn class_of(&self, cycle: &[usize]) -> Option<F2Vec> {
        let (rem, combo) = self.boundary_and_reps.reduce(cycle);
        if !rem.is_empty() {
            return None;
        }
        Some(combo.into_iter().filter(|&l| l >= self.num_boundaries).map(|l| l - self.num_boundaries).collect())
    }

    pub fn is_boundary(&self, cycle: &[usize]) -> bool {
        matches!(self.class_of(cycle), Some(c) if c.is_empty())
    }
}

/// Applies the linear map with columns `cols` to `v`.
pub fn apply(cols: &[F2Vec], v: &[usize]) -> F2Vec {
    let mut out = Vec::new();
    for &j in v {
        add_into(&mut out, &cols[j]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_term_acyclic() {
        let d = vec![vec![1], vec![]];
        let h = Homology::compute(&d);
        assert_eq!(h.rank(), 0);
    }

    #[test]
    fn zero_differential() {
        let d = vec![vec![], vec![], vec![]];
        assert_eq!(Homology::compute(&d).rank(), 3);
    }

    #[test]
    fn kernel_and_solve() {
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        assert_eq!(rank(&cols), 2);
        let k = kernel(&cols);
        assert_eq!(k, vec![vec![0, 1, 2]]);
        assert!(solve(&cols, &[0, 2]).is_some());
        assert!(solve(&cols, &[0]).is_none());
    }

    #[test]
    fn class_of_cycles() {
        // e0 -> e1 + e2 ; e3 cycle ; e1, e2 cycles
        let d = vec![vec![1, 2], vec![], vec![], vec![]];
        let h = Homology::compute(&d);
        assert_eq!(h.rank(), 2);
        assert!(h.is_boundary(&[1, 2]));
        assert!(!h.is_boundary(&[1]));
        assert_eq!(h.class_of(&[1]).unwrap().len(), h.class_of(&[2]).unwrap().len());
    }
}
