//! JSON form of structures.
//!
//! Algebras are referenced by name: `torus`, `torus-sigma`, a strands
//! algebra name such as `A([1-3 2-4],0)`, each optionally suffixed `^op`.
//! Generators, inputs and outputs are written by label.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::*;
use crate::pmc::PointedMatchedCircle;
use crate::strands;
use crate::torus;

#[derive(Serialize, Deserialize)]
struct SideFile {
    tag: String,
    algebra: String,
}

#[derive(Serialize, Deserialize)]
struct GenFile {
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    left: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    right: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    left: Option<String>,
    gen: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    right: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct OpFile {
    #[serde(default)]
    left: Vec<String>,
    gen: String,
    #[serde(default)]
    right: Vec<String>,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
struct PatternFile {
    side: String,
    gen: String,
    out: String,
    prefix: Vec<String>,
    repeat: Vec<String>,
    suffix: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct BimoduleFile {
    name: String,
    left: Option<SideFile>,
    right: Option<SideFile>,
    generators: Vec<GenFile>,
    #[serde(default)]
    operations: Vec<OpFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    patterns: Vec<PatternFile>,
}

/// Resolves an algebra name.
pub fn algebra_by_name(name: &str) -> Result<Arc<Algebra>> {
    if let Some(base) = name.strip_suffix("^op") {
        if base == "torus-sigma" {
            return Ok(torus::sigma_opposite());
        }
        return Ok(Arc::new(algebra_by_name(base)?.opposite()));
    }
    match name {
        "torus" => return Ok(torus::torus_algebra()),
        "torus-sigma" => return Ok(torus::sigma_algebra()),
        _ => {}
    }
    let bad = || Error::Parse(format!("unknown algebra {name:?}"));
    let inner = name.strip_prefix("A([").and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let (pairs, i) = inner.rsplit_once("],").ok_or_else(bad)?;
    let i: i64 = i.trim().parse().map_err(|_| bad())?;
    let mut matching = Vec::new();
    for p in pairs.split_whitespace() {
        let (a, b) = p.split_once('-').ok_or_else(bad)?;
        matching.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
    }
    let z = PointedMatchedCircle::new(2 * matching.len(), &matching)?;
    Ok(Arc::new(strands::algebra_basis(&z, i)))
}

fn tag_name(t: Tag) -> &'static str {
    match t {
        Tag::D => "D",
        Tag::A => "A",
    }
}

fn side_file(s: &Option<Side>) -> Option<SideFile> {
    s.as_ref().map(|s| SideFile { tag: tag_name(s.tag).into(), algebra: s.algebra.name().into() })
}

fn parse_side(s: &Option<SideFile>) -> Result<Option<Side>> {
    let Some(s) = s else { return Ok(None) };
    let tag = match s.tag.as_str() {
        "D" => Tag::D,
        "A" => Tag::A,
        t => return Err(Error::Parse(format!("unknown side tag {t:?}"))),
    };
    Ok(Some(Side::new(tag, algebra_by_name(&s.algebra)?)))
}

impl Bimodule {
    /// JSON text of the structure. Rules must either be patterns or have
    /// finitely many keys.
    pub fn to_json(&self) -> Result<String> {
        let (la, ra) = (self.left().map(|s| s.algebra.clone()), self.right().map(|s| s.algebra.clone()));
        let elem = |alg: &Option<Arc<Algebra>>, a: usize| alg.as_ref().map(|x| x.label(a).to_string()).unwrap_or_default();
        let idem = |alg: &Option<Arc<Algebra>>, p: usize| alg.as_ref().map(|x| x.label(x.idem_elem(p)).to_string());
        let generators = self
            .gens
            .iter()
            .map(|g| GenFile { label: g.label.clone(), left: idem(&la, g.left), right: idem(&ra, g.right) })
            .collect();
        let mut patterns = Vec::new();
        let source = match self.rule() {
            Some(r) => match r.pattern() {
                Some(p) => {
                    let alg = if p.right_side { &ra } else { &la };
                    let labels = |v: &[usize]| v.iter().map(|&a| elem(alg, a)).collect();
                    patterns.push(PatternFile {
                        side: if p.right_side { "right" } else { "left" }.into(),
                        gen: self.gens[p.gen].label.clone(),
                        out: self.gens[p.out].label.clone(),
                        prefix: labels(&p.prefix),
                        repeat: labels(&p.repeat),
                        suffix: labels(&p.suffix),
                    });
                    self.table().clone()
                }
                None => self
                    .materialize()
                    .ok_or_else(|| Error::StructureViolation("operations are not finitely described".into()))?
                    .table()
                    .clone(),
            },
            None => self.table().clone(),
        };
        let operations = source
            .iter()
            .map(|((l, x, r), terms)| OpFile {
                left: l.iter().map(|&a| elem(&la, a)).collect(),
                gen: self.gens[*x].label.clone(),
                right: r.iter().map(|&a| elem(&ra, a)).collect(),
                terms: terms
                    .iter()
                    .map(|t| TermFile {
                        left: t.left.map(|a| elem(&la, a)),
                        gen: self.gens[t.gen].label.clone(),
                        right: t.right.map(|a| elem(&ra, a)),
                    })
                    .collect(),
            })
            .collect();
        let f = BimoduleFile {
            name: self.name.clone(),
            left: side_file(&self.shape.left),
            right: side_file(&self.shape.right),
            generators,
            operations,
            patterns,
        };
        serde_json::to_string_pretty(&f).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Bimodule> {
        let f: BimoduleFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let (left, right) = (parse_side(&f.left)?, parse_side(&f.right)?);
        let la = left.as_ref().map(|s| s.algebra.clone());
        let ra = right.as_ref().map(|s| s.algebra.clone());
        let elem = |alg: &Option<Arc<Algebra>>, l: &str| -> Result<usize> {
            let alg = alg.as_ref().ok_or_else(|| Error::Parse(format!("{l:?} given for a missing side")))?;
            alg.index_of(l).ok_or_else(|| Error::Parse(format!("unknown element {l:?} of {}", alg.name())))
        };
        let idem = |alg: &Option<Arc<Algebra>>, l: &Option<String>| -> Result<usize> {
            match (alg, l) {
                (None, _) => Ok(0),
                (Some(a), Some(l)) => {
                    let e = elem(alg, l)?;
                    a.idem_position(e).ok_or_else(|| Error::Parse(format!("{l:?} is not an idempotent")))
                }
                (Some(_), None) => Err(Error::Parse("generator idempotent missing".into())),
            }
        };
        let mut gens = Vec::new();
        for g in &f.generators {
            gens.push(Gen { label: g.label.clone(), left: idem(&la, &g.left)?, right: idem(&ra, &g.right)? });
        }
        let gen = |l: &str| -> Result<usize> {
            gens.iter().position(|g| g.label == l).ok_or_else(|| Error::Parse(format!("unknown generator {l:?}")))
        };
        let opt = |alg: &Option<Arc<Algebra>>, l: &Option<String>| -> Result<Option<usize>> {
            l.as_deref().map(|l| elem(alg, l)).transpose()
        };
        let mut entries = Vec::new();
        for op in &f.operations {
            let l = op.left.iter().map(|a| elem(&la, a)).collect::<Result<Vec<_>>>()?;
            let r = op.right.iter().map(|a| elem(&ra, a)).collect::<Result<Vec<_>>>()?;
            let mut terms = Vec::new();
            for t in &op.terms {
                terms.push(Term::new(opt(&la, &t.left)?, gen(&t.gen)?, opt(&ra, &t.right)?));
            }
            entries.push(((l, gen(&op.gen)?, r), terms));
        }
        let mut rule = None;
        match f.patterns.as_slice() {
            [] => {}
            [p] => {
                let right_side = match p.side.as_str() {
                    "right" => true,
                    "left" => false,
                    s => return Err(Error::Parse(format!("unknown pattern side {s:?}"))),
                };
                let alg = if right_side { &ra } else { &la };
                let seq = |v: &[String]| v.iter().map(|a| elem(alg, a)).collect::<Result<Vec<_>>>();
                rule = Some(PatternRule {
                    right_side,
                    gen: gen(&p.gen)?,
                    out: gen(&p.out)?,
                    prefix: seq(&p.prefix)?,
                    repeat: seq(&p.repeat)?,
                    suffix: seq(&p.suffix)?,
                    labels: alg.as_ref().map(|a| a.labels().to_vec()).unwrap_or_default(),
                });
            }
            _ => return Err(Error::Parse("at most one pattern is supported".into())),
        }
        let mut m = Bimodule::new(&f.name, left, right, gens);
        for (k, t) in entries {
            m.add(k, &t);
        }
        if let Some(r) = rule {
            m = m.with_rule(Arc::new(r));
        }
        m.validate()?;
        Ok(m)
    }
}
