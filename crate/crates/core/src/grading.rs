//! The grading groups `G'(Z)` and `G(Z)`.
//!
//! An element is a Maslov component and a multiplicity vector on the
//! `4k-1` intervals between consecutive points. Maslov components are
//! half-integers and are stored doubled.

use num::rational::Ratio;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::pmc::PointedMatchedCircle;
use crate::strands::{maslov2, StrandGen};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradingElement {
    pub maslov2: i64,
    pub alpha: Vec<i64>,
}

/// `2 m(alpha, p)` for the 1-based point `p`.
fn m2_at(alpha: &[i64], p: usize) -> i64 {
    let below = if p >= 2 { alpha[p - 2] } else { 0 };
    let above = if p <= alpha.len() { alpha[p - 1] } else { 0 };
    below + above
}

/// Coefficient of the point `p` in the boundary of `alpha`.
fn boundary_at(alpha: &[i64], p: usize) -> i64 {
    let below = if p >= 2 { alpha[p - 2] } else { 0 };
    let above = if p <= alpha.len() { alpha[p - 1] } else { 0 };
    below - above
}

/// `2 m(beta, boundary(alpha))`.
fn twist2(alpha: &[i64], beta: &[i64]) -> i64 {
    (1..=alpha.len() + 1).map(|p| boundary_at(alpha, p) * m2_at(beta, p)).sum()
}

impl GradingElement {
    pub fn new(maslov2: i64, alpha: Vec<i64>) -> Self {
        GradingElement { maslov2, alpha }
    }

    /// Identity element for a circle with `num_points` points.
    pub fn identity(num_points: usize) -> Self {
        GradingElement { maslov2: 0, alpha: vec![0; num_points.saturating_sub(1)] }
    }

    /// `lambda^n`.
    pub fn lambda(num_points: usize, n: i64) -> Self {
        GradingElement { maslov2: 2 * n, alpha: vec![0; num_points.saturating_sub(1)] }
    }

    pub fn is_identity(&self) -> bool {
        self.maslov2 == 0 && self.alpha.iter().all(|&a| a == 0)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.alpha.len() != other.alpha.len() {
            return Err(Error::ParentMismatch(format!("{} vs {}", self.alpha.len(), other.alpha.len())));
        }
        Ok(self.mul(other))
    }

    /// Panics if the two elements come from circles of different size.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.alpha.len(), other.alpha.len(), "grading elements of different circles");
        let alpha = self.alpha.iter().zip(&other.alpha).map(|(a, b)| a + b).collect();
        GradingElement { maslov2: self.maslov2 + other.maslov2 + twist2(&self.alpha, &other.alpha), alpha }
    }

    pub fn inv(&self) -> Self {
        GradingElement {
            maslov2: -self.maslov2 + twist2(&self.alpha, &self.alpha),
            alpha: self.alpha.iter().map(|a| -a).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut out = GradingElement::identity(self.alpha.len() + 1);
        for _ in 0..n.abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Multiplies by `lambda^n`.
    pub fn shift(&self, n: i64) -> Self {
        GradingElement { maslov2: self.maslov2 + 2 * n, alpha: self.alpha.clone() }
    }

    /// Membership in the index-two subgroup `G'`: the Maslov component is
    /// a quarter of the number of parity changes of `alpha`, mod 1.
    pub fn satisfies_parity(&self) -> bool {
        let mut padded = vec![0];
        padded.extend(&self.alpha);
        padded.push(0);
        let changes = padded.windows(2).filter(|w| (w[0] - w[1]).rem_euclid(2) == 1).count() as i64;
        // 4 maslov = 2 maslov2 must equal changes mod 4
        (2 * self.maslov2 - changes).rem_euclid(4) == 0
    }

    /// Membership in `G(Z)`: the boundary of `alpha` vanishes on every matched pair.
    pub fn is_in_small_group(&self, z: &PointedMatchedCircle) -> bool {
        z.pairs().iter().all(|&(a, b)| boundary_at(&self.alpha, a) + boundary_at(&self.alpha, b) == 0)
    }

    /// The same element on the reversed circle, with the Maslov component negated.
    /// This is a homomorphism `G'(Z) -> G'(-Z)`.
    pub fn reversed(&self) -> Self {
        let mut alpha = self.alpha.clone();
        alpha.reverse();
        GradingElement { maslov2: -self.maslov2, alpha }
    }

    /// `[2*maslov, alpha...]`.
    pub fn to_json(&self) -> Vec<i64> {
        let mut v = vec![self.maslov2];
        v.extend(&self.alpha);
        v
    }

    pub fn from_json(v: &[i64]) -> Result<Self> {
        match v.split_first() {
            Some((&m, rest)) => Ok(GradingElement::new(m, rest.to_vec())),
            None => Err(Error::Parse("empty grading element".into())),
        }
    }
}

fn half(n: i64) -> String {
    if n % 2 == 0 {
        format!("{}", n / 2)
    } else {
        format!("{n}/2")
    }
}

impl fmt::Display for GradingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.alpha.iter().map(|x| x.to_string()).collect();
        write!(f, "({};{})", half(self.maslov2), a.join(","))
    }
}

/// `gr'(a) = (inv(a) - m([a], s), [a])`.
pub fn gr_prime(z: &PointedMatchedCircle, a: &StrandGen) -> GradingElement {
    GradingElement::new(maslov2(z, a), a.multiplicity(z))
}

/// `gr'` of every basis element of a strands algebra.
pub fn gr_prime_table(z: &PointedMatchedCircle, alg: &Algebra) -> Vec<GradingElement> {
    alg.strands().expect("strand algebra").iter().map(|g| gr_prime(z, g)).collect()
}

/// Grading refinement data: one element of `G'` per idempotent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementData {
    /// Keyed by the sorted matched pairs of the idempotent.
    pub table: BTreeMap<Vec<usize>, Vec<i64>>,
}

impl RefinementData {
    pub fn from_table(entries: Vec<(Vec<usize>, GradingElement)>) -> Self {
        RefinementData { table: entries.into_iter().map(|(k, g)| (k, g.to_json())).collect() }
    }

    pub fn get(&self, idem: &[usize]) -> Option<GradingElement> {
        self.table.get(idem).map(|v| GradingElement::from_json(v).unwrap())
    }

    /// Refinement data making a spanning forest of generators grade to the
    /// identity: the first idempotent gets the identity, and along a
    /// generator `a` from `s` to `t`, `psi(t) = psi(s) gr'(a)`.
    pub fn standard(z: &PointedMatchedCircle, alg: &Algebra) -> Self {
        let gens = alg.strands().expect("strand algebra");
        let n = alg.num_idempotents();
        let key = |pos: usize| gens[alg.idem_elem(pos)].horizontals.clone();
        let mut psi: Vec<Option<GradingElement>> = vec![None; n];
        let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
        for (j, g) in gens.iter().enumerate() {
            let (s, t) = (alg.left_idem(j), alg.right_idem(j));
            if s != t && !g.is_idempotent() {
                adj[s].push((t, j, true));
                adj[t].push((s, j, false));
            }
        }
        for root in 0..n {
            if psi[root].is_some() {
                continue;
            }
            psi[root] = Some(GradingElement::identity(z.num_points()));
            let mut queue = VecDeque::from([root]);
            while let Some(s) = queue.pop_front() {
                let base = psi[s].clone().unwrap();
                for &(t, j, forward) in &adj[s] {
                    if psi[t].is_none() {
                        let g = gr_prime(z, &gens[j]);
                        psi[t] = Some(if forward { base.mul(&g) } else { base.mul(&g.inv()) });
                        queue.push_back(t);
                    }
                }
            }
        }
        RefinementData::from_table((0..n).map(|p| (key(p), psi[p].clone().unwrap())).collect())
    }

    /// `gr(a) = psi(s) gr'(a) psi(t)^{-1}`.
    pub fn refine(&self, z: &PointedMatchedCircle, a: &StrandGen) -> Result<GradingElement> {
        let s = self
            .get(&a.left_pairs(z))
            .ok_or_else(|| Error::NotInSmallGroup(format!("no entry for {:?}", a.left_pairs(z))))?;
        let t = self
            .get(&a.right_pairs(z))
            .ok_or_else(|| Error::NotInSmallGroup(format!("no entry for {:?}", a.right_pairs(z))))?;
        let g = s.mul(&gr_prime(z, a)).mul(&t.inv());
        if !g.is_in_small_group(z) {
            return Err(Error::NotInSmallGroup(format!("{a} refines to {g}")));
        }
        Ok(g)
    }

    /// Refined gradings of every basis element.
    pub fn refine_table(&self, z: &PointedMatchedCircle, alg: &Algebra) -> Result<Vec<GradingElement>> {
        alg.strands().expect("strand algebra").iter().map(|g| self.refine(z, g)).collect()
    }
}

/// Refinement data for the torus: the identity on the idempotent at the
/// pair of point 1, and `(-1/2;1,0,0)` on the other.
pub fn torus_refinement() -> RefinementData {
    RefinementData::from_table(vec![
        (vec![0], GradingElement::new(0, vec![0, 0, 0])),
        (vec![1], GradingElement::new(-1, vec![1, 0, 0])),
    ])
}

/// A homomorphism of grading groups fixing `lambda`, given by the images of
/// elements whose multiplicity vectors form a basis of the relevant lattice.
#[derive(Clone, Debug)]
pub struct GroupHom {
    basis: Vec<GradingElement>,
    images: Vec<GradingElement>,
}

impl GroupHom {
    pub fn new(basis: Vec<GradingElement>, images: Vec<GradingElement>) -> Self {
        assert_eq!(basis.len(), images.len());
        GroupHom { basis, images }
    }

    pub fn identity(basis: Vec<GradingElement>) -> Self {
        let images = basis.clone();
        GroupHom { basis, images }
    }

    /// Integer coordinates of `alpha` in the basis, if they exist.
    fn coordinates(&self, alpha: &[i64]) -> Option<Vec<i64>> {
        let r = self.basis.len();
        let n = alpha.len();
        // augmented rows: one per interval, columns = basis vectors + rhs
        let mut rows: Vec<Vec<Ratio<i64>>> = (0..n)
            .map(|i| {
                let mut row: Vec<Ratio<i64>> = self.basis.iter().map(|b| Ratio::from_integer(b.alpha[i])).collect();
                row.push(Ratio::from_integer(alpha[i]));
                row
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..r {
            let Some(p) = (row..n).find(|&i| !rows[i][col].is_zero()) else { continue };
            rows.swap(row, p);
            let inv = Ratio::one() / rows[row][col];
            for x in rows[row].iter_mut() {
                *x *= inv;
            }
            for i in 0..n {
                if i != row && !rows[i][col].is_zero() {
                    let f = rows[i][col];
                    let pivot_row = rows[row].clone();
                    for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                        *x -= f * y;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        if rows[row..].iter().any(|rw| !rw[r].is_zero()) || pivot_cols.len() < r {
            return None;
        }
        let mut c = vec![0i64; r];
        for (i, &col) in pivot_cols.iter().enumerate() {
            let v = rows[i][r];
            if !v.is_integer() {
                return None;
            }
            c[col] = v.to_integer();
        }
        Some(c)
    }

    fn word(elems: &[GradingElement], coords: &[i64]) -> GradingElement {
        let n = elems[0].alpha.len() + 1;
        coords.iter().zip(elems).fold(GradingElement::identity(n), |acc, (&c, e)| acc.mul(&e.pow(c)))
    }

    pub fn apply(&self, g: &GradingElement) -> Result<GradingElement> {
        let coords = self
            .coordinates(&g.alpha)
            .ok_or_else(|| Error::GradingViolation(format!("{g} is outside the domain of the homomorphism")))?;
        let h = Self::word(&self.basis, &coords);
        let diff = g.maslov2 - h.maslov2;
        if diff % 2 != 0 {
            return Err(Error::GradingViolation(format!("{g} differs from {h} by a non-integral power of lambda")));
        }
        Ok(Self::word(&self.images, &coords).shift(diff / 2))
    }
}

/// Which torus Dehn twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Twist {
    M,
    MInv,
    L,
    LInv,
}

impl Twist {
    pub fn parse(s: &str) -> Option<Twist> {
        match s {
            "m" => Some(Twist::M),
            "M" | "m_inv" | "m-1" => Some(Twist::MInv),
            "l" => Some(Twist::L),
            "L" | "l_inv" | "l-1" => Some(Twist::LInv),
            _ => None,
        }
    }

    pub fn inverse(self) -> Twist {
        match self {
            Twist::M => Twist::MInv,
            Twist::MInv => Twist::M,
            Twist::L => Twist::LInv,
            Twist::LInv => Twist::L,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Twist::M => "m",
            Twist::MInv => "M",
            Twist::L => "l",
            Twist::LInv => "L",
        }
    }
}

/// Lift of the meridian to `G(torus)`: the grading of `rho_23`.
pub fn mu_tilde() -> GradingElement {
    GradingElement::new(1, vec![0, 1, 1])
}

/// Lift of the longitude: the grading of `rho_12`.
pub fn lambda_tilde() -> GradingElement {
    GradingElement::new(-1, vec![1, 1, 0])
}

/// The automorphism of `G(torus)` induced by a Dehn twist.
pub fn dehn_twist_hom(t: Twist) -> GroupHom {
    let (mu, la) = (mu_tilde(), lambda_tilde());
    let lam = GradingElement::lambda(4, 1);
    let lam_inv = GradingElement::lambda(4, -1);
    let (mu_img, la_img) = match t {
        Twist::M => (mu.clone(), lam.mul(&mu).mul(&la)),
        Twist::MInv => (mu.clone(), lam_inv.mul(&mu.inv()).mul(&la)),
        Twist::L => (lam_inv.mul(&mu).mul(&la.inv()), la.clone()),
        Twist::LInv => (lam.mul(&mu).mul(&la), la.clone()),
    };
    GroupHom::new(vec![mu, la], vec![mu_img, la_img])
}

/// Element of a product `G_1 x_lambda G_2`: one shared Maslov component.
/// One-sided gradings use an empty `right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiGrading {
    pub maslov2: i64,
    pub left: Vec<i64>,
    pub right: Vec<i64>,
}

impl BiGrading {
    pub fn one_sided(g: GradingElement) -> Self {
        BiGrading { maslov2: g.maslov2, left: g.alpha, right: vec![] }
    }

    pub fn pair(l: &GradingElement, r: &GradingElement) -> Self {
        BiGrading { maslov2: l.maslov2 + r.maslov2, left: l.alpha.clone(), right: r.alpha.clone() }
    }

    pub fn identity_like(&self) -> Self {
        BiGrading { maslov2: 0, left: vec![0; self.left.len()], right: vec![0; self.right.len()] }
    }

    pub fn is_identity(&self) -> bool {
        self.maslov2 == 0 && self.left.iter().chain(&self.right).all(|&a| a == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let l = GradingElement::new(self.maslov2, self.left.clone()).mul(&GradingElement::new(0, o.left.clone()));
        let r = GradingElement::new(o.maslov2, self.right.clone()).mul(&GradingElement::new(0, o.right.clone()));
        BiGrading { maslov2: l.maslov2 + r.maslov2, left: l.alpha, right: r.alpha }
    }

    pub fn inv(&self) -> Self {
        let l = GradingElement::new(self.maslov2, self.left.clone()).inv();
        let r = GradingElement::new(0, self.right.clone()).inv();
        BiGrading { maslov2: l.maslov2 + r.maslov2, left: l.alpha, right: r.alpha }
    }

    pub fn shift(&self, n: i64) -> Self {
        BiGrading { maslov2: self.maslov2 + 2 * n, ..self.clone() }
    }

    /// Embeds a left-factor element.
    pub fn from_left(g: &GradingElement, right_len: usize) -> Self {
        BiGrading { maslov2: g.maslov2, left: g.alpha.clone(), right: vec![0; right_len] }
    }

    /// Embeds a right-factor element.
    pub fn from_right(g: &GradingElement, left_len: usize) -> Self {
        BiGrading { maslov2: g.maslov2, left: vec![0; left_len], right: g.alpha.clone() }
    }
}

impl fmt::Display for BiGrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.left.iter().map(|x| x.to_string()).collect();
        if self.right.is_empty() {
            write!(f, "({};{})", half(self.maslov2), l.join(","))
        } else {
            let r: Vec<String> = self.right.iter().map(|x| x.to_string()).collect();
            write!(f, "({};{};{})", half(self.maslov2), l.join(","), r.join(","))
        }
    }
}

/// Whether `g` is a word of length at most `depth` in the generators
/// (and their inverses) of a subgroup.
pub fn in_subgroup(g: &BiGrading, generators: &[BiGrading], depth: usize) -> bool {
    if g.is_identity() {
        return true;
    }
    let mut steps: Vec<BiGrading> = generators.to_vec();
    steps.extend(generators.iter().map(|h| h.inv()));
    let mut seen: HashSet<BiGrading> = HashSet::new();
    let start = g.identity_like();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for s in &steps {
                let v = w.mul(s);
                if &v == g {
                    return true;
                }
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    false
}

/// Search depth for subgroup membership.
pub const SUBGROUP_DEPTH: usize = 6;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strands::algebra_basis;

    fn g(m: i64, a: &[i64]) -> GradingElement {
        GradingElement::new(m, a.to_vec())
    }

    fn torus_gen(chords: &[(usize, usize)]) -> StrandGen {
        let z = PointedMatchedCircle::torus();
        crate::strands::a_of_chords(&z, 0, chords).remove(0)
    }

    #[test]
    fn torus_gr_prime() {
        let z = PointedMatchedCircle::torus();
        assert_eq!(gr_prime(&z, &torus_gen(&[(1, 2)])), g(-1, &[1, 0, 0]));
        assert_eq!(gr_prime(&z, &torus_gen(&[(1, 3)])), g(-1, &[1, 1, 0]));
        assert_eq!(gr_prime(&z, &StrandGen::idempotent(vec![0])), g(0, &[0, 0, 0]));
        let r1 = gr_prime(&z, &torus_gen(&[(1, 2)]));
        let r2 = gr_prime(&z, &torus_gen(&[(2, 3)]));
        assert_eq!(r1.mul(&r2), g(-1, &[1, 1, 0]));
    }

    #[test]
    fn torus_refined() {
        let z = PointedMatchedCircle::torus();
        let psi = torus_refinement();
        assert_eq!(psi.refine(&z, &torus_gen(&[(1, 2)])).unwrap(), g(0, &[0, 0, 0]));
        assert_eq!(psi.refine(&z, &torus_gen(&[(2, 3)])).unwrap(), g(-1, &[1, 1, 0]));
        assert_eq!(psi.refine(&z, &torus_gen(&[(3, 4)])).unwrap(), g(0, &[-1, 0, 1]));
        assert_eq!(psi.refine(&z, &torus_gen(&[(2, 4)])).unwrap(), mu_tilde());
        assert_eq!(psi.refine(&z, &torus_gen(&[(1, 3)])).unwrap(), lambda_tilde());
        let alg = algebra_basis(&z, 0);
        assert_eq!(RefinementData::standard(&z, &alg), psi);
    }

    #[test]
    fn bad_refinement_rejected() {
        let z = PointedMatchedCircle::torus();
        let psi = RefinementData::from_table(vec![(vec![0], g(0, &[0, 0, 0])), (vec![1], g(0, &[0, 0, 0]))]);
        assert!(matches!(psi.refine(&z, &torus_gen(&[(1, 2)])), Err(Error::NotInSmallGroup(_))));
    }

    #[test]
    fn lambda_central_and_inverses() {
        let a = g(-1, &[1, 2, 0]);
        let l = GradingElement::lambda(4, 1);
        assert_eq!(a.mul(&l), l.mul(&a));
        assert!(a.mul(&a.inv()).is_identity());
        assert!(a.inv().mul(&a).is_identity());
    }

    #[test]
    fn twist_homs_fix_lambda_and_invert() {
        let lam = GradingElement::lambda(4, 1);
        for (t, u) in [(Twist::M, Twist::MInv), (Twist::L, Twist::LInv)] {
            let f = dehn_twist_hom(t);
            let h = dehn_twist_hom(u);
            assert_eq!(f.apply(&lam).unwrap(), lam);
            for e in [mu_tilde(), lambda_tilde(), g(0, &[-1, 0, 1])] {
                assert_eq!(h.apply(&f.apply(&e).unwrap()).unwrap(), e, "{t:?}");
            }
        }
    }

    #[test]
    fn parity() {
        assert!(g(-1, &[1, 0, 0]).satisfies_parity());
        assert!(!g(0, &[1, 0, 0]).satisfies_parity());
        assert!(g(0, &[1, 0, 1]).satisfies_parity());
    }
}

/// Checks that a DA bimodule over one strands algebra on both sides is
/// graded by `G` with the right action twisted by `f`: every term `b ⊗ y`
/// of `δ(x, a_1, ..., a_n)` has `gr(b) gr(y) = λ^{n-1} gr(x) f(gr(a_1)) ... f(gr(a_n))`.
/// Returns the number of terms checked.
pub fn check_da_gradings(
    m: &crate::ainfty::Bimodule,
    z: &PointedMatchedCircle,
    refinement: &RefinementData,
    gr: &[GradingElement],
    f: &GroupHom,
) -> Result<usize> {
    let (Some(l), Some(r)) = (m.left(), m.right()) else {
        return Err(Error::GradingViolation(format!("{} is not a bimodule", m.name)));
    };
    let left = refinement.refine_table(z, &l.algebra)?;
    let right = refinement.refine_table(z, &r.algebra)?;
    let keys = m.keys().ok_or_else(|| Error::GradingViolation(format!("{} has infinitely many operations", m.name)))?;
    let n = z.num_points();
    let mut count = 0;
    for key in keys {
        let (li, x, ri) = &key;
        if !li.is_empty() {
            return Err(Error::GradingViolation(format!("{} has left inputs", m.name)));
        }
        let mut rhs = GradingElement::lambda(n, ri.len() as i64 - 1).mul(&gr[*x]);
        for &a in ri {
            rhs = rhs.mul(&f.apply(&right[a])?);
        }
        for t in m.op(&key) {
            let b = t.left.expect("type D output");
            let lhs = left[b].mul(&gr[t.gen]);
            if lhs != rhs {
                return Err(Error::GradingViolation(format!(
                    "{} -> {}: {} != {}",
                    m.format_key(&key),
                    m.format_term(&t),
                    lhs,
                    rhs
                )));
            }
            count += 1;
        }
    }
    Ok(count)
}

/// Gradings of a DA bimodule forced by its operations once the generator
/// `base` is put at the identity, following the rule of
/// `check_da_gradings`. `None` for generators not reached.
pub fn propagate_da_gradings(
    m: &crate::ainfty::Bimodule,
    z: &PointedMatchedCircle,
    refinement: &RefinementData,
    base: usize,
    f: &GroupHom,
) -> Result<Vec<Option<GradingElement>>> {
    let (Some(l), Some(r)) = (m.left(), m.right()) else {
        return Err(Error::GradingViolation(format!("{} is not a bimodule", m.name)));
    };
    let left = refinement.refine_table(z, &l.algebra)?;
    let right = refinement.refine_table(z, &r.algebra)?;
    let keys = m.keys().ok_or_else(|| Error::GradingViolation(format!("{} has infinitely many operations", m.name)))?;
    let n = z.num_points();
    let mut gr: Vec<Option<GradingElement>> = vec![None; m.num_gens()];
    gr[base] = Some(GradingElement::identity(n));
    let mut changed = true;
    while changed {
        changed = false;
        for key in &keys {
            let (_, x, ri) = key;
            for t in m.op(key) {
                let b = &left[t.left.expect("type D output")];
                let rhs = |gx: &GradingElement| -> Result<GradingElement> {
                    let mut acc = GradingElement::lambda(n, ri.len() as i64 - 1).mul(gx);
                    for &a in ri {
                        acc = acc.mul(&f.apply(&right[a])?);
                    }
                    Ok(acc)
                };
                match (&gr[*x], &gr[t.gen]) {
                    (Some(gx), None) => {
                        gr[t.gen] = Some(b.inv().mul(&rhs(gx)?));
                        changed = true;
                    }
                    (None, Some(gy)) => {
                        // gr(x) = λ^{1-n} gr(b) gr(y) (Π f(gr(a)))^{-1}
                        let mut acc = GradingElement::lambda(n, 1 - ri.len() as i64).mul(b).mul(gy);
                        for &a in ri.iter().rev() {
                            acc = acc.mul(&f.apply(&right[a])?.inv());
                        }
                        gr[*x] = Some(acc);
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(gr)
}
