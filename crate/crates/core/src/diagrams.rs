//! Combinatorial arced bordered Heegaard diagrams.
//!
//! A diagram is stored as its regions and intersection points. Each region
//! carries its Euler measure (times four), its multiplicities on the
//! intervals of the two boundary circles and whether it contains the
//! basepoint arc. Each point lists the regions in its four quadrants, with
//! the alpha curve pointing east and the beta curve north. Boundary
//! intervals are numbered in the boundary orientation, starting after the
//! basepoint.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::GradingElement;
use crate::pmc::PointedMatchedCircle;

#[derive(Serialize, Deserialize)]
struct RegionFile {
    name: String,
    euler4: i64,
    #[serde(default)]
    left: Vec<i64>,
    #[serde(default)]
    right: Vec<i64>,
    #[serde(default)]
    z: bool,
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    name: String,
    alpha: String,
    beta: String,
    ne: String,
    nw: String,
    sw: String,
    se: String,
}

#[derive(Serialize, Deserialize)]
struct AlphaFile {
    name: String,
    side: String,
    #[serde(default)]
    ends: Vec<usize>,
    points: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct BetaFile {
    name: String,
    points: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct DiagramFile {
    name: String,
    genus: usize,
    regions: Vec<RegionFile>,
    points: Vec<PointFile>,
    alphas: Vec<AlphaFile>,
    betas: Vec<BetaFile>,
    #[serde(default)]
    generators: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub name: String,
    pub euler4: i64,
    pub left: Vec<i64>,
    pub right: Vec<i64>,
    pub z: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaKind {
    Left,
    Right,
    Circle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaCurve {
    pub name: String,
    pub kind: AlphaKind,
    /// Endpoints on the boundary circle, 1-based; empty for circles.
    pub ends: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub name: String,
    pub alpha: usize,
    pub beta: usize,
    /// Regions in the NE, NW, SW, SE quadrants.
    pub corners: [usize; 4],
}

/// A tuple of intersection points, one on each beta circle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    /// Point indices, sorted.
    pub points: Vec<usize>,
    /// Occupied matched pairs of the left boundary.
    pub left: Vec<usize>,
    /// Occupied matched pairs of the right boundary.
    pub right: Vec<usize>,
}

/// Integer multiplicity per region.
pub type Domain = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// All periodic domains.
    Full,
    /// Periodic domains with no right boundary.
    Left,
    /// Periodic domains with no left boundary.
    Right,
    /// Periodic domains with no boundary on either side.
    Provincial,
}

impl Flavor {
    pub fn parse(s: &str) -> Option<Flavor> {
        match s {
            "full" => Some(Flavor::Full),
            "left" => Some(Flavor::Left),
            "right" => Some(Flavor::Right),
            "provincial" => Some(Flavor::Provincial),
            _ => None,
        }
    }

    pub const ALL: [Flavor; 4] = [Flavor::Full, Flavor::Left, Flavor::Right, Flavor::Provincial];
}

/// Outcome of an admissibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Admissibility {
    /// A positive area per region under which every periodic domain of
    /// the flavor has area zero.
    Admissible(Vec<BigRational>),
    /// A nontrivial periodic domain with all coefficients of one sign.
    Witness(Domain),
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible(_))
    }
}

#[derive(Clone, Debug)]
pub struct ArcedDiagram {
    pub name: String,
    pub genus: usize,
    pub regions: Vec<Region>,
    pub points: Vec<Point>,
    pub alphas: Vec<AlphaCurve>,
    pub betas: Vec<String>,
    pub left_pmc: Option<PointedMatchedCircle>,
    pub right_pmc: Option<PointedMatchedCircle>,
    named: Vec<(String, Vec<usize>)>,
}

const SHIPPED: [(&str, &str); 6] = [
    ("canonical-identity", include_str!("../data/canonical_identity.json")),
    ("heegaard-aa", include_str!("../data/heegaard_aa.json")),
    ("dehn-twist-m", include_str!("../data/dehn_twist_m.json")),
    ("dehn-twist-m-inverse", include_str!("../data/dehn_twist_m_inverse.json")),
    ("dehn-twist-l", include_str!("../data/dehn_twist_l.json")),
    ("dehn-twist-l-inverse", include_str!("../data/dehn_twist_l_inverse.json")),
];

/// Names of the diagrams bundled with the crate.
pub fn shipped_names() -> Vec<&'static str> {
    SHIPPED.iter().map(|(n, _)| *n).collect()
}

/// A bundled diagram by name.
pub fn shipped(name: &str) -> Result<ArcedDiagram> {
    let (_, text) =
        SHIPPED.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::Parse(format!("no diagram named {name:?}")))?;
    ArcedDiagram::from_json(text)
}

fn pmc_of(arcs: &[&AlphaCurve]) -> Result<Option<PointedMatchedCircle>> {
    if arcs.is_empty() {
        return Ok(None);
    }
    let mut matching = Vec::new();
    for a in arcs {
        match a.ends.as_slice() {
            [p, q] => matching.push((*p, *q)),
            _ => return Err(Error::Parse(format!("arc {} needs two endpoints", a.name))),
        }
    }
    Ok(Some(PointedMatchedCircle::new(2 * arcs.len(), &matching)?))
}

impl ArcedDiagram {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: DiagramFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let index = |names: Vec<&str>| -> HashMap<String, usize> {
            names.into_iter().enumerate().map(|(i, n)| (n.to_string(), i)).collect()
        };
        let reg_ix = index(f.regions.iter().map(|r| r.name.as_str()).collect());
        let alpha_ix = index(f.alphas.iter().map(|a| a.name.as_str()).collect());
        let beta_ix = index(f.betas.iter().map(|b| b.name.as_str()).collect());
        let look = |m: &HashMap<String, usize>, n: &str, what: &str| {
            m.get(n).copied().ok_or_else(|| Error::Parse(format!("unknown {what} {n:?}")))
        };
        let mut points = Vec::new();
        for p in &f.points {
            let corners = [
                look(&reg_ix, &p.ne, "region")?,
                look(&reg_ix, &p.nw, "region")?,
                look(&reg_ix, &p.sw, "region")?,
                look(&reg_ix, &p.se, "region")?,
            ];
            points.push(Point {
                name: p.name.clone(),
                alpha: look(&alpha_ix, &p.alpha, "alpha curve")?,
                beta: look(&beta_ix, &p.beta, "beta circle")?,
                corners,
            });
        }
        let point_ix = index(points.iter().map(|p| p.name.as_str()).collect());
        if point_ix.len() != points.len() {
            return Err(Error::Parse("repeated point name".into()));
        }
        let mut alphas = Vec::new();
        for a in &f.alphas {
            let kind = match a.side.as_str() {
                "L" => AlphaKind::Left,
                "R" => AlphaKind::Right,
                "circle" => AlphaKind::Circle,
                s => return Err(Error::Parse(format!("unknown alpha side {s:?}"))),
            };
            alphas.push(AlphaCurve { name: a.name.clone(), kind, ends: a.ends.clone() });
        }
        let mut named = Vec::new();
        for (label, pts) in &f.generators {
            let mut v = pts.iter().map(|p| look(&point_ix, p, "point")).collect::<Result<Vec<_>>>()?;
            v.sort();
            named.push((label.clone(), v));
        }
        let left: Vec<&AlphaCurve> = alphas.iter().filter(|a| a.kind == AlphaKind::Left).collect();
        let right: Vec<&AlphaCurve> = alphas.iter().filter(|a| a.kind == AlphaKind::Right).collect();
        let left_pmc = pmc_of(&left)?;
        let right_pmc = pmc_of(&right)?;
        let d = ArcedDiagram {
            name: f.name.clone(),
            genus: f.genus,
            regions: f
                .regions
                .iter()
                .map(|r| Region {
                    name: r.name.clone(),
                    euler4: r.euler4,
                    left: r.left.clone(),
                    right: r.right.clone(),
                    z: r.z,
                })
                .collect(),
            points,
            alphas,
            betas: f.betas.iter().map(|b| b.name.clone()).collect(),
            left_pmc,
            right_pmc,
            named,
        };
        // the per-curve point lists must agree with the per-point curves
        for (i, a) in f.alphas.iter().enumerate() {
            for p in &a.points {
                if d.points[look(&point_ix, p, "point")?].alpha != i {
                    return Err(Error::Parse(format!("point {p} listed on alpha {} but not lying on it", a.name)));
                }
            }
        }
        for (i, b) in f.betas.iter().enumerate() {
            for p in &b.points {
                if d.points[look(&point_ix, p, "point")?].beta != i {
                    return Err(Error::Parse(format!("point {p} listed on beta {} but not lying on it", b.name)));
                }
            }
        }
        d.validate()?;
        Ok(d)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
        Self::from_json(&text)
    }

    fn intervals(pmc: &Option<PointedMatchedCircle>) -> usize {
        pmc.as_ref().map(|z| z.num_points() - 1).unwrap_or(0)
    }

    /// Number of boundary circles.
    pub fn boundary_count(&self) -> usize {
        self.left_pmc.is_some() as usize + self.right_pmc.is_some() as usize
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count() as i64
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parse(m));
        let (nl, nr) = (Self::intervals(&self.left_pmc), Self::intervals(&self.right_pmc));
        let mut cover_l = vec![0; nl];
        let mut cover_r = vec![0; nr];
        for r in &self.regions {
            if r.left.len() != nl || r.right.len() != nr {
                return bad(format!("region {} has chord vectors of the wrong length", r.name));
            }
            if r.z && r.left.iter().chain(&r.right).any(|&c| c != 0) {
                return bad(format!("basepoint region {} carries chords", r.name));
            }
            for (c, v) in cover_l.iter_mut().zip(&r.left) {
                *c += v;
            }
            for (c, v) in cover_r.iter_mut().zip(&r.right) {
                *c += v;
            }
        }
        if cover_l.iter().chain(&cover_r).any(|&c| c != 1) {
            return bad("boundary intervals are not each covered by exactly one region".into());
        }
        if self.boundary_count() > 0 && !self.regions.iter().any(|r| r.z) {
            return bad("no basepoint region".into());
        }
        let total: i64 = self.regions.iter().map(|r| r.euler4).sum();
        if total != 4 * self.euler_characteristic() {
            return bad(format!(
                "Euler measures sum to {}/4, expected {}",
                total,
                self.euler_characteristic()
            ));
        }
        for (label, pts) in &self.named {
            if !self.generators().iter().any(|g| &g.points == pts) {
                return bad(format!("named generator {label} is not a generator"));
            }
        }
        Ok(())
    }

    pub fn region_index(&self, name: &str) -> Option<usize> {
        self.regions.iter().position(|r| r.name == name)
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p.name == name)
    }

    /// The domain with the given coefficients on named regions.
    pub fn domain(&self, terms: &[(i64, &str)]) -> Result<Domain> {
        let mut b = vec![0; self.regions.len()];
        for &(c, n) in terms {
            let i = self.region_index(n).ok_or_else(|| Error::Parse(format!("unknown region {n:?}")))?;
            b[i] += c;
        }
        Ok(b)
    }

    /// Generators carrying a label in the data file, in label order.
    pub fn named_generators(&self) -> Vec<(String, Generator)> {
        self.named.iter().map(|(l, pts)| (l.clone(), self.generator_of(pts))).collect()
    }

    pub fn named_generator(&self, label: &str) -> Option<Generator> {
        self.named.iter().find(|(l, _)| l == label).map(|(_, pts)| self.generator_of(pts))
    }

    /// Label of a generator, if it has one.
    pub fn label_of(&self, g: &Generator) -> Option<&str> {
        self.named.iter().find(|(_, pts)| *pts == g.points).map(|(l, _)| l.as_str())
    }

    fn generator_of(&self, pts: &[usize]) -> Generator {
        let mut points = pts.to_vec();
        points.sort();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for &p in &points {
            let a = &self.alphas[self.points[p].alpha];
            match a.kind {
                AlphaKind::Left => left.push(self.left_pmc.as_ref().unwrap().pair_of(a.ends[0])),
                AlphaKind::Right => right.push(self.right_pmc.as_ref().unwrap().pair_of(a.ends[0])),
                AlphaKind::Circle => {}
            }
        }
        left.sort();
        right.sort();
        Generator { points, left, right }
    }

    /// All generators: one point on each beta circle, one on each alpha
    /// circle and at most one on each alpha arc.
    pub fn generators(&self) -> Vec<Generator> {
        let mut on_beta: Vec<Vec<usize>> = vec![Vec::new(); self.betas.len()];
        for (i, p) in self.points.iter().enumerate() {
            on_beta[p.beta].push(i);
        }
        let mut out = Vec::new();
        let mut used = vec![false; self.alphas.len()];
        let mut chosen = Vec::new();
        self.extend(&on_beta, 0, &mut used, &mut chosen, &mut out);
        out.sort();
        out
    }

    fn extend(
        &self,
        on_beta: &[Vec<usize>],
        b: usize,
        used: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Generator>,
    ) {
        if b == on_beta.len() {
            let circles_ok = self.alphas.iter().zip(used.iter()).all(|(a, &u)| u || a.kind != AlphaKind::Circle);
            if circles_ok {
                out.push(self.generator_of(chosen));
            }
            return;
        }
        for &p in &on_beta[b] {
            let a = self.points[p].alpha;
            if used[a] {
                continue;
            }
            used[a] = true;
            chosen.push(p);
            self.extend(on_beta, b + 1, used, chosen, out);
            chosen.pop();
            used[a] = false;
        }
    }

    /// `n_NE + n_SW - n_NW - n_SE` at every point.
    pub fn corner_defect(&self, b: &[i64]) -> Vec<i64> {
        self.points.iter().map(|p| b[p.corners[0]] + b[p.corners[2]] - b[p.corners[1]] - b[p.corners[3]]).collect()
    }

    /// The corner defect of domains in `π2(x, y)`: `+1` at points of `x`,
    /// `-1` at points of `y`.
    fn target_defect(&self, x: &Generator, y: &Generator) -> Vec<i64> {
        let mut t = vec![0; self.points.len()];
        for &p in &x.points {
            t[p] += 1;
        }
        for &p in &y.points {
            t[p] -= 1;
        }
        t
    }

    pub fn connects(&self, b: &[i64], x: &Generator, y: &Generator) -> bool {
        b.len() == self.regions.len()
            && self.regions.iter().zip(b).all(|(r, &c)| !r.z || c == 0)
            && self.corner_defect(b) == self.target_defect(x, y)
    }

    pub fn is_periodic(&self, b: &[i64]) -> bool {
        b.len() == self.regions.len()
            && self.regions.iter().zip(b).all(|(r, &c)| !r.z || c == 0)
            && self.corner_defect(b).iter().all(|&c| c == 0)
    }

    pub fn left_boundary(&self, b: &[i64]) -> Vec<i64> {
        let mut v = vec![0; Self::intervals(&self.left_pmc)];
        for (r, &c) in self.regions.iter().zip(b) {
            for (o, x) in v.iter_mut().zip(&r.left) {
                *o += c * x;
            }
        }
        v
    }

    pub fn right_boundary(&self, b: &[i64]) -> Vec<i64> {
        let mut v = vec![0; Self::intervals(&self.right_pmc)];
        for (r, &c) in self.regions.iter().zip(b) {
            for (o, x) in v.iter_mut().zip(&r.right) {
                *o += c * x;
            }
        }
        v
    }

    /// Four times the Euler measure.
    pub fn euler4(&self, b: &[i64]) -> i64 {
        self.regions.iter().zip(b).map(|(r, &c)| c * r.euler4).sum()
    }

    /// Four times the point measure `n_x(B)`.
    pub fn point_measure4(&self, b: &[i64], x: &Generator) -> i64 {
        x.points.iter().map(|&p| self.points[p].corners.iter().map(|&r| b[r]).sum::<i64>()).sum()
    }

    fn free_regions(&self) -> Vec<usize> {
        (0..self.regions.len()).filter(|&r| !self.regions[r].z).collect()
    }

    /// Constraint rows on the free regions: corner defects, plus boundary
    /// rows for the flavor.
    fn constraint_rows(&self, flavor: Flavor) -> Vec<Vec<i64>> {
        let free = self.free_regions();
        let mut rows: Vec<Vec<i64>> = self
            .points
            .iter()
            .map(|p| {
                free.iter()
                    .map(|&r| {
                        let c = &p.corners;
                        (c[0] == r) as i64 + (c[2] == r) as i64 - (c[1] == r) as i64 - (c[3] == r) as i64
                    })
                    .collect()
            })
            .collect();
        let (want_l, want_r) = match flavor {
            Flavor::Full => (false, false),
            Flavor::Left => (false, true),
            Flavor::Right => (true, false),
            Flavor::Provincial => (true, true),
        };
        if want_l {
            for k in 0..Self::intervals(&self.left_pmc) {
                rows.push(free.iter().map(|&r| self.regions[r].left[k]).collect());
            }
        }
        if want_r {
            for k in 0..Self::intervals(&self.right_pmc) {
                rows.push(free.iter().map(|&r| self.regions[r].right[k]).collect());
            }
        }
        rows
    }

    fn lift(&self, v: &[i64]) -> Domain {
        let mut b = vec![0; self.regions.len()];
        for (&r, &c) in self.free_regions().iter().zip(v) {
            b[r] = c;
        }
        b
    }

    /// A lattice basis of the periodic domains of the given flavor.
    pub fn periodic_domains_of(&self, flavor: Flavor) -> Vec<Domain> {
        let n = self.free_regions().len();
        integer_kernel(&self.constraint_rows(flavor), n).iter().map(|v| self.lift(v)).collect()
    }

    /// A lattice basis of all periodic domains.
    pub fn periodic_domains(&self) -> Vec<Domain> {
        self.periodic_domains_of(Flavor::Full)
    }

    /// Decides admissibility by exact linear programming.
    pub fn check_admissible(&self, flavor: Flavor) -> Admissibility {
        let rows = self.constraint_rows(flavor);
        let n = self.free_regions().len();
        if let Some(w) = nonnegative_kernel_vector(&rows, n) {
            return Admissibility::Witness(self.lift(&w));
        }
        let area = positive_row_space_vector(&rows, n)
            .expect("no one-signed kernel vector yet no positive orthogonal vector");
        let mut full = vec![BigRational::one(); self.regions.len()];
        for (&r, a) in self.free_regions().iter().zip(area) {
            full[r] = a;
        }
        Admissibility::Admissible(full)
    }

    /// Searches combinations of the periodic basis with coefficients in
    /// `[-bound, bound]` for a nontrivial one-signed domain.
    pub fn brute_force_witness(&self, flavor: Flavor, bound: i64) -> Option<Domain> {
        let basis = self.periodic_domains_of(flavor);
        let r = basis.len();
        if r == 0 {
            return None;
        }
        let mut coeffs = vec![-bound; r];
        loop {
            if coeffs.iter().any(|&c| c != 0) {
                let mut b = vec![0; self.regions.len()];
                for (c, p) in coeffs.iter().zip(&basis) {
                    for (o, x) in b.iter_mut().zip(p) {
                        *o += c * x;
                    }
                }
                if b.iter().all(|&c| c >= 0) || b.iter().all(|&c| c <= 0) {
                    return Some(b);
                }
            }
            let mut i = 0;
            while i < r && coeffs[i] == bound {
                coeffs[i] = -bound;
                i += 1;
            }
            if i == r {
                return None;
            }
            coeffs[i] += 1;
        }
    }

    /// Some domain in `π2(x, y)`, or `None` when `x` and `y` lie in
    /// different spin-c classes.
    pub fn connecting_domain(&self, x: &Generator, y: &Generator) -> Option<Domain> {
        let rows = self.constraint_rows(Flavor::Full);
        let n = self.free_regions().len();
        integer_solve(&rows, n, &self.target_defect(x, y)).map(|v| self.lift(&v))
    }

    /// `(-e(B) - n_x(B) - n_y(B); ∂_L B, ∂_R B)`, split into a left factor
    /// carrying the Maslov component and a right factor.
    pub fn domain_grading(&self, b: &[i64], x: &Generator, y: &Generator) -> Result<(GradingElement, GradingElement)> {
        if !self.connects(b, x, y) {
            return Err(Error::NotConnecting(format!("domain {b:?} in {}", self.name)));
        }
        let m4 = -self.euler4(b) - self.point_measure4(b, x) - self.point_measure4(b, y);
        if m4 % 2 != 0 {
            return Err(Error::NotConnecting(format!("Maslov component {m4}/4 is not a half-integer")));
        }
        Ok((GradingElement::new(m4 / 2, self.left_boundary(b)), GradingElement::new(0, self.right_boundary(b))))
    }
}

/// Greatest common divisor with Bezout coefficients.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Column reduction `M U = H` with `U` unimodular and `H` in column echelon
/// form. Returns `(H, U, rank)`; the last `n - rank` columns of `U` span the
/// integer kernel.
fn column_echelon(rows: &[Vec<i64>], n: usize) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, usize, Vec<usize>) {
    let mut h: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let mut rank = 0;
    let mut pivots = Vec::new();
    let col_op = |m: &mut Vec<Vec<i128>>, i: usize, j: usize, a: i128, b: i128, c: i128, d: i128| {
        // (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
        for row in m.iter_mut() {
            let (x, y) = (row[i], row[j]);
            row[i] = a * x + b * y;
            row[j] = c * x + d * y;
        }
    };
    for r in 0..h.len() {
        if rank == n {
            break;
        }
        for j in rank + 1..n {
            if h[r][j] == 0 {
                continue;
            }
            let (a, b) = (h[r][rank], h[r][j]);
            let (g, s, t) = ext_gcd(a, b);
            // [s -b/g; t a/g] has determinant 1
            col_op(&mut h, rank, j, s, t, -b / g, a / g);
            col_op(&mut u, rank, j, s, t, -b / g, a / g);
        }
        if h[r][rank] != 0 {
            if h[r][rank] < 0 {
                for m in [&mut h, &mut u] {
                    for row in m.iter_mut() {
                        row[rank] = -row[rank];
                    }
                }
            }
            pivots.push(r);
            rank += 1;
        }
    }
    (h, u, rank, pivots)
}

/// A basis of `{v in Z^n : rows v = 0}`.
pub fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let (_, u, rank, _) = column_echelon(rows, n);
    (rank..n).map(|j| (0..n).map(|i| u[i][j] as i64).collect()).collect()
}

/// Some `v in Z^n` with `rows v = t`.
pub fn integer_solve(rows: &[Vec<i64>], n: usize, t: &[i64]) -> Option<Vec<i64>> {
    let (h, u, rank, pivots) = column_echelon(rows, n);
    let mut s = vec![0i128; rank];
    let mut k = 0;
    for (r, row) in h.iter().enumerate() {
        let acc: i128 = (0..k).map(|j| row[j] * s[j]).sum();
        let rest = t[r] as i128 - acc;
        if k < rank && pivots[k] == r {
            if rest % row[k] != 0 {
                return None;
            }
            s[k] = rest / row[k];
            k += 1;
        } else if rest != 0 {
            return None;
        }
    }
    Some((0..n).map(|i| (0..rank).map(|j| u[i][j] * s[j]).sum::<i128>() as i64).collect())
}

type Q = BigRational;

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// Maximises `c x` subject to `A x = b`, `x >= 0` by the two-phase simplex
/// method with Bland's rule. `None` when infeasible; the problems posed
/// here are bounded.
fn simplex(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> Option<Vec<Q>> {
    let m = a.len();
    let n = c.len();
    // tableau columns: n originals, m artificials, then the right-hand side
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i].is_negative();
        let mut row: Vec<Q> = a[i].iter().map(|x| if neg { -x.clone() } else { x.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { q(1) } else { q(0) }));
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let width = n + m;
    let run = |t: &mut Vec<Vec<Q>>, basis: &mut Vec<usize>, cost: &[Q], allowed: usize| loop {
        let entering = (0..allowed).find(|&j| {
            let z: Q = (0..t.len()).map(|i| cost[basis[i]].clone() * t[i][j].clone()).sum();
            cost[j].clone() - z > Q::zero()
        });
        let Some(j) = entering else { return };
        let mut best: Option<(Q, usize)> = None;
        for i in 0..t.len() {
            if t[i][j].is_positive() {
                let ratio = t[i][width].clone() / t[i][j].clone();
                let better = match &best {
                    None => true,
                    Some((r, bi)) => ratio < *r || (ratio == *r && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((ratio, i));
                }
            }
        }
        let (_, i) = best.expect("unbounded program");
        pivot(t, i, j);
        basis[i] = j;
    };
    let mut phase1 = vec![q(0); width];
    for k in n..width {
        phase1[k] = q(-1);
    }
    run(&mut t, &mut basis, &phase1, width);
    let infeasible = (0..m).any(|i| basis[i] >= n && t[i][width].is_positive());
    if infeasible {
        return None;
    }
    // drive remaining artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, i, j);
                basis[i] = j;
                i += 1;
            } else {
                t.remove(i);
                basis.remove(i);
            }
        } else {
            i += 1;
        }
    }
    let mut cost = c.to_vec();
    cost.extend((0..m).map(|_| q(0)));
    run(&mut t, &mut basis, &cost, n);
    let mut x = vec![q(0); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = t[i][width].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Q>], i: usize, j: usize) {
    let p = t[i][j].clone();
    for v in t[i].iter_mut() {
        *v = v.clone() / p.clone();
    }
    let prow = t[i].clone();
    for (k, row) in t.iter_mut().enumerate() {
        if k != i && !row[j].is_zero() {
            let f = row[j].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v = v.clone() - f.clone() * pv.clone();
            }
        }
    }
}

/// A nonzero integer vector `v >= 0` with `rows v = 0`, if one exists.
fn nonnegative_kernel_vector(rows: &[Vec<i64>], n: usize) -> Option<Vec<i64>> {
    if n == 0 {
        return None;
    }
    // variables v (n) and slacks s (n): rows v = 0, v + s = 1
    let mut a = Vec::new();
    let mut b = Vec::new();
    for r in rows {
        let mut row: Vec<Q> = r.iter().map(|&x| q(x)).collect();
        row.extend((0..n).map(|_| q(0)));
        a.push(row);
        b.push(q(0));
    }
    for i in 0..n {
        let mut row = vec![q(0); 2 * n];
        row[i] = q(1);
        row[n + i] = q(1);
        a.push(row);
        b.push(q(1));
    }
    let mut c = vec![q(1); n];
    c.extend((0..n).map(|_| q(0)));
    let x = simplex(&a, &b, &c)?;
    let v = &x[..n];
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num::integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| num::integer::gcd(g, x.clone()));
    Some(ints.iter().map(|x| i64::try_from(x / &g).expect("witness coefficient overflow")).collect())
}

/// A vector with every entry at least one in the row space of `rows`.
fn positive_row_space_vector(rows: &[Vec<i64>], n: usize) -> Option<Vec<Q>> {
    let m = rows.len();
    // variables y+ (m), y- (m), s (n): rows^T (y+ - y-) - s = 1
    let mut a = Vec::new();
    for k in 0..n {
        let mut row = Vec::with_capacity(2 * m + n);
        row.extend(rows.iter().map(|r| q(r[k])));
        row.extend(rows.iter().map(|r| q(-r[k])));
        row.extend((0..n).map(|i| if i == k { q(-1) } else { q(0) }));
        a.push(row);
    }
    let b = vec![q(1); n];
    let c = vec![q(0); 2 * m + n];
    let x = simplex(&a, &b, &c)?;
    Some((0..n).map(|k| (0..m).map(|i| q(rows[i][k]) * (x[i].clone() - x[m + i].clone())).sum()).collect())
}
