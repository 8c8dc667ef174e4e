//! Massey products in the homology of a strands algebra.

use std::collections::HashMap;

use crate::algebra::{Algebra, Elem};
use crate::error::{Error, Result};
use crate::f2::{self, Homology};
use crate::grading::{gr_prime_table, GradingElement};
use crate::pmc::PointedMatchedCircle;

/// A homogeneous piece of the algebra: grading plus idempotents.
type Piece = (GradingElement, usize, usize);

/// Result of a Massey product computation.
#[derive(Clone, Debug)]
pub struct MasseyProduct {
    /// The cycle `Σ ξ_{0,k} ξ_{k,m}`.
    pub cycle: Elem,
    /// Its class in the basis of `Homology::representatives`.
    pub class: Vec<usize>,
    /// The defining system `ξ_{i,j}`, keyed by `(i, j)`.
    pub system: HashMap<(usize, usize), Elem>,
}

/// Precomputed graded pieces and homology of a strands algebra, reused
/// across Massey product computations.
pub struct MasseyContext<'a> {
    alg: &'a Algebra,
    gr: Vec<GradingElement>,
    homology: Homology,
    cols: Vec<Elem>,
    pieces: HashMap<Piece, Vec<usize>>,
}

impl<'a> MasseyContext<'a> {
    pub fn new(z: &PointedMatchedCircle, alg: &'a Algebra) -> Self {
        let cols: Vec<Elem> = (0..alg.dim()).map(|a| alg.d(a).to_vec()).collect();
        let gr = gr_prime_table(z, alg);
        let mut pieces: HashMap<Piece, Vec<usize>> = HashMap::new();
        for a in 0..alg.dim() {
            pieces.entry((gr[a].clone(), alg.left_idem(a), alg.right_idem(a))).or_default().push(a);
        }
        MasseyContext { alg, gr, homology: Homology::compute(&cols), cols, pieces }
    }

    pub fn homology(&self) -> &Homology {
        &self.homology
    }

    fn piece(&self, a: usize) -> Piece {
        (self.gr[a].clone(), self.alg.left_idem(a), self.alg.right_idem(a))
    }

    fn homogeneous(&self, x: &[usize]) -> Option<Piece> {
        let p = self.piece(*x.first()?);
        x.iter().all(|&a| self.piece(a) == p).then_some(p)
    }

    fn members(&self, piece: &Piece) -> &[usize] {
        self.pieces.get(piece).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Dimension of homology in one homogeneous piece.
    fn homology_dim(&self, piece: &Piece) -> usize {
        let up = (piece.0.shift(1), piece.1, piece.2);
        let here = self.members(piece);
        let d_here: Vec<Elem> = here.iter().map(|&a| self.cols[a].clone()).collect();
        let d_above: Vec<Elem> = self.members(&up).iter().map(|&a| self.cols[a].clone()).collect();
        here.len() - f2::rank(&d_here) - f2::rank(&d_above)
    }

    /// Some `ξ` in `piece` with `dξ = t`, choosing pivots in basis order or
    /// reversed.
    fn primitive(&self, piece: &Piece, t: &[usize], reversed: bool) -> Option<Elem> {
        let mut order = self.members(piece).to_vec();
        if reversed {
            order.reverse();
        }
        let cols: Vec<Elem> = order.iter().map(|&a| self.cols[a].clone()).collect();
        let combo = f2::solve(&cols, t)?;
        Some(f2::from_list(combo.into_iter().map(|i| order[i]).collect()))
    }

    /// Grading and idempotents of `ξ` for consecutive inputs: the product
    /// of their gradings raised by `λ^{n-1}`.
    fn system_piece(&self, inputs: &[Piece]) -> Piece {
        let mut acc = inputs[0].0.clone();
        for p in &inputs[1..] {
            acc = acc.mul(&p.0);
        }
        (acc.shift(inputs.len() as i64 - 1), inputs[0].1, inputs[inputs.len() - 1].2)
    }

    /// See [`massey_product`].
    pub fn product(&self, cycles: &[Elem], reversed: bool) -> Result<MasseyProduct> {
        let alg = self.alg;
        let m = cycles.len();
        if m < 2 {
            return Err(Error::NotAdmissible("need at least two inputs".into()));
        }
        let mut pieces = Vec::with_capacity(m);
        for (i, c) in cycles.iter().enumerate() {
            let p = self
                .homogeneous(c)
                .ok_or_else(|| Error::NotAdmissible(format!("input {} is zero or not homogeneous", i + 1)))?;
            if !alg.d_elem(c).is_empty() {
                return Err(Error::NotAdmissible(format!("input {} is not a cycle", i + 1)));
            }
            pieces.push(p);
        }
        for w in pieces.windows(2) {
            if w[0].2 != w[1].1 {
                return Err(Error::NotAdmissible("inputs are not composable".into()));
            }
        }
        let mut xi: HashMap<(usize, usize), Elem> = HashMap::new();
        for (i, c) in cycles.iter().enumerate() {
            xi.insert((i, i + 1), c.clone());
        }
        let sum = |xi: &HashMap<(usize, usize), Elem>, i: usize, j: usize| -> Elem {
            let mut t = Vec::new();
            for k in i + 1..j {
                f2::add_into(&mut t, &alg.mul_elem(&xi[&(i, k)], &xi[&(k, j)]));
            }
            t
        };
        for len in 2..=m {
            for i in 0..=(m - len) {
                let j = i + len;
                if (i, j) == (0, m) {
                    continue;
                }
                let t = sum(&xi, i, j);
                let target = self.system_piece(&pieces[i..j]);
                if self.homology_dim(&target) != 0 {
                    return Err(Error::NotAdmissible(format!("homology in the grading of ξ({i},{j}) is nonzero")));
                }
                let x = self
                    .primitive(&target, &t, reversed)
                    .ok_or_else(|| Error::NotAdmissible(format!("the product of inputs {}..{} is nonzero", i + 1, j)))?;
                xi.insert((i, j), x);
            }
        }
        let cycle = sum(&xi, 0, m);
        if !alg.d_elem(&cycle).is_empty() {
            return Err(Error::NoSolution("the Massey sum is not a cycle".into()));
        }
        let class = self.homology.class_of(&cycle).ok_or_else(|| Error::NoSolution("the Massey sum has no class".into()))?;
        Ok(MasseyProduct { cycle, class, system: xi })
    }
}

/// The Massey product of the classes of homogeneous cycles `a_1, ..., a_m`
/// in the homology of a strands algebra, via a defining system
/// `dξ_{i,j} = Σ_{i<k<j} ξ_{i,k} ξ_{k,j}`. Linear solves pick pivots in
/// basis order, or in reverse when `reversed` is set.
///
/// The sequence must be Massey admissible: for every proper consecutive
/// subsequence the defining sum is a boundary and the homology in the
/// grading of its primitive vanishes.
pub fn massey_product(
    z: &PointedMatchedCircle,
    alg: &Algebra,
    cycles: &[Elem],
    reversed: bool,
) -> Result<MasseyProduct> {
    MasseyContext::new(z, alg).product(cycles, reversed)
}
