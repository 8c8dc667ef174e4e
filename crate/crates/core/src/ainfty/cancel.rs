//! Cancellation of generator pairs joined by a unit coefficient.

use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use super::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Kept,
    X0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Delta,
    F,
    G,
    H,
}

struct Cancellation {
    x: Bimodule,
    x0: usize,
    y0: usize,
    t0: Term,
    /// Old index of each kept generator.
    kept: Vec<usize>,
    /// New index of each old generator, if kept.
    new_index: Vec<Option<usize>>,
    overflow: AtomicBool,
}

const CHAIN_LIMIT: usize = 48;

impl Cancellation {
    fn delta_r(&self, key: &Key) -> Terms {
        let mut v = self.x.op(key);
        if key.1 == self.x0 && key.0.is_empty() && key.2.is_empty() {
            v.retain(|t| *t != self.t0);
        }
        v
    }

    fn accumulate(&self, lo: Option<usize>, ro: Option<usize>, t: &Term) -> Vec<(Option<usize>, Option<usize>)> {
        let shape = &self.x.shape;
        let ls: Vec<Option<usize>> = match (lo, t.left) {
            (Some(a), Some(b)) => shape.left.as_ref().unwrap().algebra.mul(a, b).iter().map(|&c| Some(c)).collect(),
            (None, b) => vec![b],
            (a, None) => vec![a],
        };
        let rs: Vec<Option<usize>> = match (ro, t.right) {
            (Some(a), Some(b)) => shape.right.as_ref().unwrap().algebra.mul(b, a).iter().map(|&c| Some(c)).collect(),
            (None, b) => vec![b],
            (a, None) => vec![a],
        };
        let mut out = Vec::new();
        for &l in &ls {
            for &r in &rs {
                out.push((l, r));
            }
        }
        out
    }

    /// Applies alternating perturbation and homotopy steps starting with
    /// a perturbation step at `c`; inputs still to consume are
    /// `l[..li]` and `r[rj..]`.
    #[allow(clippy::too_many_arguments)]
    fn chain(
        &self,
        c: usize,
        l: &[usize],
        li: usize,
        r: &[usize],
        rj: usize,
        lo: Option<usize>,
        ro: Option<usize>,
        end: End,
        depth: usize,
        out: &mut Vec<Term>,
    ) {
        if depth > CHAIN_LIMIT * (l.len() + r.len() + 1) {
            self.overflow.store(true, Ordering::Relaxed);
            return;
        }
        for a in (0..=li).rev() {
            for b in rj..=r.len() {
                let key = (l[a..li].to_vec(), c, r[rj..b].to_vec());
                let done = a == 0 && b == r.len();
                for t in self.delta_r(&key) {
                    for (lo2, ro2) in self.accumulate(lo, ro, &t) {
                        if t.gen == self.y0 {
                            if end == End::X0 && done {
                                out.push(Term::new(lo2, self.x0, ro2));
                            }
                            self.chain(self.x0, l, a, r, b, lo2, ro2, end, depth + 1, out);
                        } else if t.gen != self.x0 && end == End::Kept && done {
                            out.push(Term::new(lo2, t.gen, ro2));
                        }
                    }
                }
            }
        }
    }

    fn run(&self, mode: Mode, key: &Key) -> Terms {
        let (l, g, r) = key;
        let (start, via_h) = match mode {
            Mode::Delta | Mode::G => (self.kept[*g], false),
            Mode::F | Mode::H => (*g, *g == self.y0),
        };
        let mut out = Vec::new();
        let empty = l.is_empty() && r.is_empty();
        match mode {
            Mode::F => {
                if let Some(n) = self.new_index[start] {
                    if empty {
                        out.push(self.x.shape.identity_term(&self.x.gens[start], n));
                    }
                    return out;
                }
                if via_h {
                    self.chain(self.x0, l, l.len(), r, 0, None, None, End::Kept, 0, &mut out);
                }
                out = out.into_iter().map(|t| Term::new(t.left, self.new_index[t.gen].unwrap(), t.right)).collect();
                return reduce_terms(out);
            }
            Mode::H => {
                if via_h {
                    if empty {
                        out.push(self.x.shape.identity_term(&self.x.gens[self.x0], self.x0));
                    }
                    self.chain(self.x0, l, l.len(), r, 0, None, None, End::X0, 0, &mut out);
                }
            }
            Mode::G => {
                if empty {
                    out.push(self.x.shape.identity_term(&self.x.gens[start], start));
                }
                self.chain(start, l, l.len(), r, 0, None, None, End::X0, 0, &mut out);
            }
            Mode::Delta => {
                self.chain(start, l, l.len(), r, 0, None, None, End::Kept, 0, &mut out);
                out = out.into_iter().map(|t| Term::new(t.left, self.new_index[t.gen].unwrap(), t.right)).collect();
            }
        }
        reduce_terms(out)
    }

    fn x_keys_by_gen(&self) -> Option<Vec<Vec<Key>>> {
        let mut by = vec![Vec::new(); self.x.gens.len()];
        for k in self.x.keys()? {
            by[k.1].push(k);
        }
        Some(by)
    }

    /// Input sequences reachable by chains from `start`, or `None` if
    /// chains can consume arbitrarily long inputs.
    fn reachable(&self, start: usize, via_h: bool, by: &[Vec<Key>]) -> Option<BTreeSet<(Vec<usize>, Vec<usize>)>> {
        let bound = self.x.max_input_len()? * (self.x.gens.len() + 2) + 1;
        let mut seen: HashSet<(usize, Vec<usize>, Vec<usize>)> = HashSet::new();
        let first = if via_h { self.x0 } else { start };
        let mut stack = vec![(first, vec![], vec![])];
        let mut out = BTreeSet::new();
        out.insert((vec![], vec![]));
        while let Some((c, la, ra)) = stack.pop() {
            if !seen.insert((c, la.clone(), ra.clone())) {
                continue;
            }
            if la.len() + ra.len() > bound {
                return None;
            }
            for k in &by[c] {
                let mut l2 = k.0.clone();
                l2.extend_from_slice(&la);
                let mut r2 = ra.clone();
                r2.extend_from_slice(&k.2);
                out.insert((l2.clone(), r2.clone()));
                for t in self.delta_r(k) {
                    if t.gen == self.y0 {
                        stack.push((self.x0, l2.clone(), r2.clone()));
                    }
                }
            }
        }
        Some(out)
    }

    fn keys(&self, mode: Mode) -> Option<Vec<Key>> {
        let shape = &self.x.shape;
        let no_a = shape.left_tag() != Some(Tag::A) && shape.right_tag() != Some(Tag::A);
        let n_src = match mode {
            Mode::Delta | Mode::G => self.kept.len(),
            Mode::F | Mode::H => self.x.gens.len(),
        };
        if no_a {
            return Some((0..n_src).map(|g| (vec![], g, vec![])).collect());
        }
        let by = self.x_keys_by_gen()?;
        let mut out = Vec::new();
        for g in 0..n_src {
            let (start, via_h) = match mode {
                Mode::Delta | Mode::G => (self.kept[g], false),
                Mode::F | Mode::H => (g, g == self.y0),
            };
            if matches!(mode, Mode::F | Mode::H) && !via_h {
                out.push((vec![], g, vec![]));
                continue;
            }
            for (l, r) in self.reachable(start, via_h, &by)? {
                out.push((l, g, r));
            }
        }
        Some(out)
    }
}

struct CancelRule {
    c: Arc<Cancellation>,
    mode: Mode,
}

impl OpRule for CancelRule {
    fn eval(&self, key: &Key) -> Terms {
        self.c.run(self.mode, key)
    }

    fn describe(&self) -> String {
        let c = &self.c;
        format!(
            "{:?} after cancelling {} -> {} in {}",
            self.mode, c.x.gens[c.x0].label, c.x.gens[c.y0].label, c.x.name
        )
    }

    fn keys(&self) -> Option<Vec<Key>> {
        self.c.keys(self.mode)
    }
}

/// One cancellation: the reduced structure and the maps relating it to
/// the previous one.
#[derive(Clone, Debug)]
pub struct CancelStep {
    pub x0: String,
    pub y0: String,
    pub f: StructureMorphism,
    pub g: StructureMorphism,
    pub h: StructureMorphism,
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub result: Bimodule,
    pub steps: Vec<CancelStep>,
}

impl Simplified {
    pub fn source(&self) -> Arc<Bimodule> {
        match self.steps.first() {
            Some(s) => s.f.source.clone(),
            None => Arc::new(self.result.clone()),
        }
    }

    /// Composite `X -> X'`.
    pub fn f(&self) -> StructureMorphism {
        let mut acc = StructureMorphism::identity(self.source());
        for s in &self.steps {
            acc = s.f.after(&acc);
        }
        acc
    }

    /// Composite `X' -> X`.
    pub fn g(&self) -> StructureMorphism {
        let mut acc = StructureMorphism::identity(Arc::new(self.result.clone()));
        for s in self.steps.iter().rev() {
            acc = s.g.after(&acc);
        }
        acc
    }

    /// Homotopy on `X` with `g o f + id = d(h)`.
    pub fn h(&self) -> StructureMorphism {
        let src = self.source();
        let mut total = StructureMorphism::new("0", src.clone(), src.clone());
        let mut fs = StructureMorphism::identity(src.clone());
        let mut gs = StructureMorphism::identity(src);
        for s in &self.steps {
            total = total.plus(&gs.after(&s.h).after(&fs));
            fs = s.f.after(&fs);
            gs = gs.after(&s.g);
        }
        total
    }
}

/// The least cancellable pair `(x0, y0)` and its unit term.
pub fn find_cancellable(x: &Bimodule) -> Option<(usize, usize, Term)> {
    let shape = &x.shape;
    for x0 in 0..x.gens.len() {
        let terms = x.zero_input_terms(x0);
        let mut targets: Vec<usize> = terms.iter().map(|t| t.gen).filter(|&g| g != x0).collect();
        targets.sort_unstable();
        targets.dedup();
        for y0 in targets {
            let to_y: Vec<&Term> = terms.iter().filter(|t| t.gen == y0).collect();
            if to_y.len() != 1 {
                continue;
            }
            let t = *to_y[0];
            let unit = |side: &Option<Side>, out: Option<usize>| match (side, out) {
                (Some(s), Some(a)) if s.tag == Tag::D => s.algebra.is_idempotent(a),
                (Some(s), None) => s.tag == Tag::A,
                (None, None) => true,
                _ => false,
            };
            if unit(&shape.left, t.left) && unit(&shape.right, t.right) {
                return Some((x0, y0, t));
            }
        }
    }
    None
}

/// Input length beyond which identities between maps of bounded length
/// hold trivially, capped at `cap`.
fn verify_len(parts: &[Option<usize>], cap: usize) -> usize {
    match parts.iter().copied().collect::<Option<Vec<usize>>>() {
        Some(v) => {
            let n = v.into_iter().max().unwrap_or(0);
            (2 * n).max(n + 1).min(cap)
        }
        None => cap,
    }
}

/// Cancels one pair, returning the step data without verification.
pub fn cancel_pair(x: &Bimodule, x0: usize, y0: usize, t0: Term) -> Result<CancelStep> {
    let kept: Vec<usize> = (0..x.gens.len()).filter(|&g| g != x0 && g != y0).collect();
    let mut new_index = vec![None; x.gens.len()];
    for (n, &o) in kept.iter().enumerate() {
        new_index[o] = Some(n);
    }
    let c = Arc::new(Cancellation {
        x: x.clone(),
        x0,
        y0,
        t0,
        kept: kept.clone(),
        new_index,
        overflow: AtomicBool::new(false),
    });
    let gens: Vec<Gen> = kept.iter().map(|&o| x.gens[o].clone()).collect();
    let reduced = Bimodule::new(&x.name, x.shape.left.clone(), x.shape.right.clone(), gens)
        .with_rule(Arc::new(CancelRule { c: c.clone(), mode: Mode::Delta }));
    let reduced = Arc::new(reduced.materialize().unwrap_or(reduced));
    let src = Arc::new(x.clone());
    let mk = |name: &str, mode: Mode, s: &Arc<Bimodule>, t: &Arc<Bimodule>| {
        let m = StructureMorphism::new(name, s.clone(), t.clone())
            .with_rule(Arc::new(CancelRule { c: c.clone(), mode }));
        match m.keys() {
            Some(ks) => m.materialize(&ks),
            None => m,
        }
    };
    let f = mk("f", Mode::F, &src, &reduced);
    let g = mk("g", Mode::G, &reduced, &src);
    let h = mk("h", Mode::H, &src, &src);
    if c.overflow.load(Ordering::Relaxed) {
        return Err(Error::NonTerminating);
    }
    Ok(CancelStep { x0: x.gens[x0].label.clone(), y0: x.gens[y0].label.clone(), f, g, h })
}

/// Verifies `d(f) = 0`, `d(g) = 0`, `g o f + id = d(h)` and `f o g = id`
/// on all keys up to the probe length.
pub fn verify_step(step: &CancelStep, probe_len: usize) -> Result<()> {
    let len = verify_len(
        &[
            step.f.source.max_input_len(),
            step.g.source.max_input_len(),
            step.f.max_input_len(),
            step.g.max_input_len(),
            step.h.max_input_len(),
        ],
        probe_len,
    );
    step.f.check_cycle(len)?;
    step.g.check_cycle(len)?;
    let src = step.f.source.clone();
    let gf = step.g.after(&step.f);
    let id = StructureMorphism::identity(src.clone());
    for k in step.f.check_keys(len) {
        let mut v = gf.op(&k);
        v.extend(id.op(&k));
        v.extend(step.h.differential_at(&k));
        let v = reduce_terms(v);
        if !v.is_empty() {
            return Err(Error::StructureViolation(format!(
                "homotopy identity fails at {}: {}",
                src.format_key(&k),
                src.format_terms(&v)
            )));
        }
    }
    let fg = step.f.after(&step.g);
    let id2 = StructureMorphism::identity(step.g.source.clone());
    if !fg.equals(&id2, len) {
        return Err(Error::StructureViolation("f o g is not the identity".into()));
    }
    Ok(())
}

/// Repeatedly cancels the least eligible pair. Every step's maps are
/// verified up to `probe_len` inputs (exactly, for finite structures).
pub fn simplify(x: &Bimodule, probe_len: usize) -> Result<Simplified> {
    let mut cur = x.clone();
    let mut steps = Vec::new();
    let limit = x.gens.len() / 2 + 1;
    while let Some((x0, y0, t0)) = find_cancellable(&cur) {
        if steps.len() >= limit {
            return Err(Error::NonTerminating);
        }
        let step = cancel_pair(&cur, x0, y0, t0)?;
        verify_step(&step, probe_len)?;
        cur = (*step.f.target).clone();
        steps.push(step);
    }
    Ok(Simplified { result: cur, steps })
}

/// As `simplify`, skipping verification of the maps.
pub fn simplify_unchecked(x: &Bimodule) -> Result<Simplified> {
    let mut cur = x.clone();
    let mut steps = Vec::new();
    let limit = x.gens.len() / 2 + 1;
    while let Some((x0, y0, t0)) = find_cancellable(&cur) {
        if steps.len() >= limit {
            return Err(Error::NonTerminating);
        }
        let step = cancel_pair(&cur, x0, y0, t0)?;
        cur = (*step.f.target).clone();
        steps.push(step);
    }
    Ok(Simplified { result: cur, steps })
}
