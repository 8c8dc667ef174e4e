//! Pointed matched circles.
//!
//! Points are numbered `1..=4k` in the order met when the circle is cut at
//! the basepoint. Matched pairs are numbered `0..2k` by their smaller point.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointedMatchedCircle {
    num_points: usize,
    /// `mate[p - 1]` is the point matched with `p`.
    mate: Vec<usize>,
    /// `pair_of[p - 1]` is the index of the matched pair containing `p`.
    pair_of: Vec<usize>,
    /// Matched pairs, each sorted, ordered by smaller point.
    pairs: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct PmcFile {
    points: usize,
    matching: Vec<[usize; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    Split,
    Antipodal,
    Torus,
}

impl PointedMatchedCircle {
    pub fn new(num_points: usize, matching: &[(usize, usize)]) -> Result<Self> {
        if num_points % 4 != 0 {
            return Err(Error::BadPointCount(num_points));
        }
        let mut mate = vec![0usize; num_points];
        for &(a, b) in matching {
            if a == b || a == 0 || b == 0 || a > num_points || b > num_points {
                return Err(Error::NotAnInvolution(format!("bad pair ({a},{b})")));
            }
            if mate[a - 1] != 0 || mate[b - 1] != 0 {
                return Err(Error::NotAnInvolution(format!("point repeated in ({a},{b})")));
            }
            mate[a - 1] = b;
            mate[b - 1] = a;
        }
        if let Some(p) = mate.iter().position(|&m| m == 0) {
            return Err(Error::NotAnInvolution(format!("point {} unmatched", p + 1)));
        }
        let mut pairs: Vec<(usize, usize)> = (1..=num_points)
            .filter(|&p| p < mate[p - 1])
            .map(|p| (p, mate[p - 1]))
            .collect();
        pairs.sort();
        let mut pair_of = vec![0usize; num_points];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            pair_of[a - 1] = i;
            pair_of[b - 1] = i;
        }
        let z = PointedMatchedCircle { num_points, mate, pair_of, pairs };
        let c = z.surgery_components();
        if c != 1 {
            return Err(Error::SurgeryDisconnects(c));
        }
        Ok(z)
    }

    pub fn genus(&self) -> usize {
        self.num_points / 4
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn num_pairs(&self) -> usize {
        self.num_points / 2
    }

    pub fn mate(&self, p: usize) -> usize {
        self.mate[p - 1]
    }

    pub fn pair_of(&self, p: usize) -> usize {
        self.pair_of[p - 1]
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Sorted list of sorted pairs.
    pub fn canonical(&self) -> Vec<(usize, usize)> {
        self.pairs.clone()
    }

    /// Number of circles obtained by surgery on every matched pair.
    ///
    /// The circle is cut open at the basepoint and closed up again, so the
    /// arcs between consecutive points form a cycle of length `4k`. Surgery
    /// on a pair `{a, b}` reconnects the two arc ends at `a` with those at `b`.
    fn surgery_components(&self) -> usize {
        let n = self.num_points;
        if n == 0 {
            return 1;
        }
        // Arc j runs from point j to point j+1 (arc n-1 wraps through the basepoint).
        // Each point p has an incoming arc end (from arc p-1) and an outgoing one (arc p).
        // After surgery at {a, b}: in(a) joins out(b) and in(b) joins out(a).
        let mut uf = UnionFind::new(n);
        for &(a, b) in &self.pairs {
            let in_a = (a + n - 2) % n;
            let out_a = a - 1;
            let in_b = (b + n - 2) % n;
            let out_b = b - 1;
            uf.union(in_a, out_b);
            uf.union(in_b, out_a);
        }
        uf.count()
    }

    pub fn reverse(&self) -> Self {
        let n = self.num_points;
        let m: Vec<(usize, usize)> = self.pairs.iter().map(|&(a, b)| (n + 1 - a, n + 1 - b)).collect();
        Self::new(n, &m).expect("reversal preserves validity")
    }

    pub fn connect_sum(&self, other: &Self) -> Self {
        let shift = self.num_points;
        let mut m = self.pairs.clone();
        m.extend(other.pairs.iter().map(|&(a, b)| (a + shift, b + shift)));
        Self::new(self.num_points + other.num_points, &m).expect("connect sum preserves validity")
    }

    pub fn torus() -> Self {
        Self::new(4, &[(1, 3), (2, 4)]).unwrap()
    }

    pub fn genus_zero() -> Self {
        Self::new(0, &[]).unwrap()
    }

    pub fn split(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::BadGenus(0));
        }
        let t = Self::torus();
        let mut z = t.clone();
        for _ in 1..genus {
            z = z.connect_sum(&t);
        }
        Ok(z)
    }

    pub fn antipodal(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::BadGenus(0));
        }
        let m: Vec<(usize, usize)> = (1..=2 * genus).map(|i| (i, i + 2 * genus)).collect();
        Self::new(4 * genus, &m)
    }

    pub fn standard(kind: StandardKind, genus: usize) -> Result<Self> {
        match kind {
            StandardKind::Split => Self::split(genus),
            StandardKind::Antipodal => Self::antipodal(genus),
            StandardKind::Torus if genus == 1 => Ok(Self::torus()),
            StandardKind::Torus => Err(Error::BadGenus(genus)),
        }
    }

    /// Parses `torus`, `split:k`, `antipodal:k`, or a JSON file path.
    pub fn from_spec(spec: &str) -> Result<Self> {
        if spec == "torus" {
            return Ok(Self::torus());
        }
        if let Some((kind, g)) = spec.split_once(':') {
            let kind = match kind {
                "split" => Some(StandardKind::Split),
                "antipodal" => Some(StandardKind::Antipodal),
                "torus" => Some(StandardKind::Torus),
                _ => None,
            };
            if let Some(kind) = kind {
                let g: usize = g.parse().map_err(|_| Error::Parse(format!("bad genus in {spec:?}")))?;
                return Self::standard(kind, g);
            }
        }
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Io(format!("{spec}: {e}")))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: PmcFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let m: Vec<(usize, usize)> = f.matching.iter().map(|p| (p[0], p[1])).collect();
        Self::new(f.points, &m)
    }

    pub fn to_json(&self) -> String {
        let f = PmcFile { points: self.num_points, matching: self.pairs.iter().map(|&(a, b)| [a, b]).collect() };
        serde_json::to_string(&f).unwrap()
    }
}

impl fmt::Display for PointedMatchedCircle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[{}:", self.num_points)?;
        for (a, b) in &self.pairs {
            write!(f, " {a}-{b}")?;
        }
        write!(f, "]")
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    pub(crate) fn count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&x| self.find(x) == x).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_is_valid() {
        let z = PointedMatchedCircle::new(4, &[(1, 3), (2, 4)]).unwrap();
        assert_eq!(z.genus(), 1);
    }

    #[test]
    fn adjacent_pairs_disconnect() {
        match PointedMatchedCircle::new(4, &[(1, 2), (3, 4)]) {
            Err(Error::SurgeryDisconnects(3)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn repeated_point_rejected() {
        assert!(matches!(PointedMatchedCircle::new(4, &[(1, 3), (1, 4)]), Err(Error::NotAnInvolution(_))));
        assert!(matches!(PointedMatchedCircle::new(4, &[(1, 1), (2, 4)]), Err(Error::NotAnInvolution(_))));
    }

    #[test]
    fn genus_zero() {
        let z = PointedMatchedCircle::new(0, &[]).unwrap();
        assert_eq!(z.genus(), 0);
        let t = PointedMatchedCircle::torus();
        assert_eq!(t.connect_sum(&z), t);
        assert_eq!(z.connect_sum(&t), t);
    }

    #[test]
    fn standard_families() {
        let t = PointedMatchedCircle::torus();
        assert_eq!(PointedMatchedCircle::split(1).unwrap(), t);
        assert_eq!(PointedMatchedCircle::antipodal(1).unwrap(), t);
        assert_eq!(PointedMatchedCircle::split(2).unwrap(), t.connect_sum(&t));
        let a = PointedMatchedCircle::antipodal(2).unwrap();
        assert_eq!(a.canonical(), vec![(1, 5), (2, 6), (3, 7), (4, 8)]);
        assert!(matches!(PointedMatchedCircle::standard(StandardKind::Torus, 2), Err(Error::BadGenus(2))));
        assert!(matches!(PointedMatchedCircle::split(0), Err(Error::BadGenus(0))));
    }

    #[test]
    fn reversal() {
        let t = PointedMatchedCircle::torus();
        assert_eq!(t.reverse(), t);
        let s = PointedMatchedCircle::split(2).unwrap();
        assert_eq!(s.reverse(), s);
        let a = PointedMatchedCircle::antipodal(3).unwrap();
        assert_eq!(a.reverse().reverse(), a);
    }

    #[test]
    fn json_round_trip() {
        let a = PointedMatchedCircle::antipodal(2).unwrap();
        assert_eq!(PointedMatchedCircle::from_json(&a.to_json()).unwrap(), a);
        assert_eq!(PointedMatchedCircle::from_spec("split:2").unwrap(), PointedMatchedCircle::split(2).unwrap());
    }
}
