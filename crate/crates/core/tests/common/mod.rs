#![allow(dead_code)]

use bordered::pmc::PointedMatchedCircle;

/// Every perfect matching of the given points.
pub fn matchings(pts: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let Some((&a, rest)) = pts.split_first() else { return vec![vec![]] };
    let mut out = Vec::new();
    for j in 0..rest.len() {
        let others: Vec<usize> = rest.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &p)| p).collect();
        for mut m in matchings(&others) {
            m.insert(0, (a, rest[j]));
            out.push(m);
        }
    }
    out
}

/// All pointed matched circles of genus at most 2.
pub fn circles_up_to_genus_two() -> Vec<PointedMatchedCircle> {
    let mut out = vec![PointedMatchedCircle::genus_zero()];
    for n in [4, 8] {
        let pts: Vec<usize> = (1..=n).collect();
        out.extend(matchings(&pts).iter().filter_map(|m| PointedMatchedCircle::new(n, m).ok()));
    }
    out
}

pub fn gradings(z: &PointedMatchedCircle) -> std::ops::RangeInclusive<i64> {
    let k = z.genus() as i64;
    -k..=k
}
