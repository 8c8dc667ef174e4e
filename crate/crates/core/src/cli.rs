//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when an input fails validation (bad
//! arguments, unreadable files, a structure or diagram that fails its
//! check), 2 when an internal invariant breaks during computation.

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::ainfty::{
    box_tensor, cfdd_identity, dualize, filtered_image_rank, hochschild_bar_pair, hochschild_da, identity_da,
    algebra_aa, BoundFlavor, Bimodule, Bounded, OpRule, PatternRule, Tag,
};
use crate::diagrams::{self, Admissibility, ArcedDiagram, Flavor};
use crate::error::Error;
use crate::grading::{check_da_gradings, dehn_twist_hom, torus_refinement, Twist};
use crate::pmc::PointedMatchedCircle;
use crate::{strands, torus};

#[derive(Parser, Debug)]
#[command(name = "bordered", about = "Bordered Floer bimodule calculus over F2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Strands algebras of a pointed matched circle.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Genus one bimodules.
    Torus {
        #[command(subcommand)]
        command: TorusCommand,
    },
    /// Hochschild homology of an AA or DA bimodule.
    Hochschild {
        #[arg(long, conflicts_with = "word", required_unless_present = "word")]
        bimodule: Option<String>,
        /// Comma-separated Dehn twists, as for `torus mcg`.
        #[arg(long)]
        word: Option<String>,
        /// Longest tensor word in the truncated complexes.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Converts a left type D structure into a right type A module.
    Dualize {
        #[arg(long = "typeD")]
        type_d: String,
        #[arg(long)]
        pmc: String,
        #[arg(long, default_value_t = 0)]
        i: i64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Structure equations, boundedness and optional Dehn-twist gradings.
    Check {
        #[arg(long)]
        bimodule: String,
        /// Check gradings against the stated values for this twist.
        #[arg(long)]
        twist: Option<String>,
        #[arg(long, default_value_t = torus::PROBE_LEN)]
        probe_len: usize,
    },
    /// Arced Heegaard diagrams.
    Diagram {
        #[command(subcommand)]
        command: DiagramCommand,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraCommand {
    /// Total homology rank of A(Z, i).
    Homology {
        #[arg(long)]
        pmc: String,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        /// List the nonzero blocks.
        #[arg(long)]
        blocks: bool,
    },
    /// Dimensions and homology ranks of A and its quotient A'.
    Aprime {
        #[arg(long)]
        pmc: String,
        #[arg(long, allow_hyphen_values = true)]
        i: Option<i64>,
    },
}

#[derive(Subcommand, Debug)]
enum TorusCommand {
    /// The DA bimodule of a word in the Dehn twists m, M, l, L.
    Mcg {
        #[arg(long)]
        word: String,
        #[arg(long)]
        simplify: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Rebuilds the duality example and checks it.
    DualityCheck {
        #[arg(long, default_value_t = 4)]
        max_repeat: usize,
    },
}

#[derive(Subcommand, Debug)]
enum DiagramCommand {
    /// Admissibility of a diagram file or shipped diagram name.
    Admissible {
        #[arg(long)]
        file: String,
        /// full, left, right, provincial or all.
        #[arg(long, default_value = "all")]
        flavor: String,
    },
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Invalid(String),
    Internal(String),
}

type Res<T> = std::result::Result<T, Failure>;

/// Errors while reading inputs are validation failures.
fn input<T>(r: crate::Result<T>) -> Res<T> {
    r.map_err(|e| Failure::Invalid(e.to_string()))
}

/// Errors during computation: mismatched or unbounded inputs are the
/// caller's, everything else is internal.
fn compute<T>(r: crate::Result<T>) -> Res<T> {
    r.map_err(|e| match e {
        Error::TagMismatch(_)
        | Error::ParentMismatch(_)
        | Error::UnboundedPair
        | Error::UnboundedInput
        | Error::NotAdmissible(_)
        | Error::Parse(_)
        | Error::Io(_) => Failure::Invalid(e.to_string()),
        _ => Failure::Internal(e.to_string()),
    })
}

fn read(path: &str) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{path}: {e}")))
}

fn write(path: &str, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| Failure::Invalid(format!("{path}: {e}")))
}

fn load_bimodule(path: &str) -> Res<Bimodule> {
    input(Bimodule::from_json(&read(path)?))
}

fn load_diagram(name: &str) -> Res<ArcedDiagram> {
    if diagrams::shipped_names().contains(&name) {
        return input(diagrams::shipped(name));
    }
    input(ArcedDiagram::from_json(&read(name)?))
}

fn parse_twist(s: &str) -> Res<Twist> {
    Twist::parse(s).ok_or_else(|| Failure::Invalid(format!("unknown twist {s:?}")))
}

/// Runs one invocation and captures its output.
pub fn execute(args: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let ok = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            return if ok {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = String::new();
    match dispatch(cli.command, &mut out) {
        Ok(code) => Outcome { code, stdout: out, stderr: String::new() },
        Err(Failure::Invalid(m)) => Outcome { code: 1, stdout: out, stderr: format!("error: {m}\n") },
        Err(Failure::Internal(m)) => Outcome { code: 2, stdout: out, stderr: format!("internal error: {m}\n") },
    }
}

/// Runs one invocation, printing its output; returns the exit code.
pub fn run(args: &[String]) -> i32 {
    let o = execute(args);
    print!("{}", o.stdout);
    eprint!("{}", o.stderr);
    o.code
}

fn dispatch(cmd: Command, out: &mut String) -> Res<i32> {
    match cmd {
        Command::Algebra { command: AlgebraCommand::Homology { pmc, i, blocks } } => algebra_homology(&pmc, i, blocks, out),
        Command::Algebra { command: AlgebraCommand::Aprime { pmc, i } } => algebra_aprime(&pmc, i, out),
        Command::Torus { command: TorusCommand::Mcg { word, simplify, out: path } } => {
            torus_mcg(&word, simplify, path.as_deref(), out)
        }
        Command::Torus { command: TorusCommand::DualityCheck { max_repeat } } => {
            let r = compute(torus::duality_example_check(max_repeat))?;
            out.push_str(&r.render());
            if r.passed() {
                Ok(0)
            } else {
                Err(Failure::Internal("duality example does not match".into()))
            }
        }
        Command::Hochschild { bimodule, word, max_len } => {
            let m = match (bimodule, word) {
                (Some(path), _) => load_bimodule(&path)?,
                (None, Some(w)) => compute(torus::mcg_word_bimodule(&input(torus::parse_word(&w))?))?.result,
                (None, None) => return Err(Failure::Invalid("give --bimodule or --word".into())),
            };
            hochschild(&m, max_len, out)
        }
        Command::Dualize { type_d, pmc, i, out: path } => dualize_cmd(&type_d, &pmc, i, path.as_deref(), out),
        Command::Check { bimodule, twist, probe_len } => check(&bimodule, twist.as_deref(), probe_len, out),
        Command::Diagram { command: DiagramCommand::Admissible { file, flavor } } => admissible(&file, &flavor, out),
    }
}

fn pmc(spec: &str) -> Res<PointedMatchedCircle> {
    input(PointedMatchedCircle::from_spec(spec))
}

fn check_strands_grading(z: &PointedMatchedCircle, i: i64) -> Res<()> {
    let k = z.genus() as i64;
    if i.abs() > k {
        return Err(Failure::Invalid(format!("strands grading {i} is outside -{k}..{k}")));
    }
    Ok(())
}

fn algebra_homology(spec: &str, i: i64, blocks: bool, out: &mut String) -> Res<i32> {
    let z = pmc(spec)?;
    check_strands_grading(&z, i)?;
    let alg = strands::algebra_basis(&z, i);
    let h = strands::homology(&z, &alg);
    let _ = writeln!(out, "{}", h.total_rank());
    if blocks {
        for b in h.blocks.iter().filter(|b| b.rank > 0) {
            let _ = writeln!(out, "  {:?} -> {:?} class {:?} rank {}", b.left, b.right, b.class, b.rank);
        }
    }
    Ok(0)
}

fn algebra_aprime(spec: &str, i: Option<i64>, out: &mut String) -> Res<i32> {
    let z = pmc(spec)?;
    let k = z.genus() as i64;
    let range: Vec<i64> = match i {
        Some(i) => {
            check_strands_grading(&z, i)?;
            vec![i]
        }
        None => (-k..=k).collect(),
    };
    let _ = writeln!(out, "i dim(A) dim(A') rank H(A) rank H(A')");
    let mut agree = true;
    for i in range {
        let a = strands::algebra_basis(&z, i);
        let q = strands::quotient_a_prime(&z, i);
        let (ha, hq) = (strands::homology(&z, &a).total_rank(), strands::homology(&z, &q).total_rank());
        agree &= ha == hq;
        let _ = writeln!(out, "{i} {} {} {ha} {hq}", a.dim(), q.dim());
    }
    if agree {
        Ok(0)
    } else {
        Err(Failure::Internal("A and A' have different homology".into()))
    }
}

fn torus_mcg(word: &str, simplify_it: bool, path: Option<&str>, out: &mut String) -> Res<i32> {
    let w = input(torus::parse_word(word))?;
    let m = if simplify_it {
        compute(torus::mcg_word_bimodule(&w))?.result
    } else {
        let mut cur = torus::dehn_twist_da(w[0]);
        for t in &w[1..] {
            cur = compute(box_tensor(&cur, &torus::dehn_twist_da(*t)))?;
        }
        cur.materialize().ok_or_else(|| Failure::Internal("tensor product is not finite".into()))?
    };
    let id = identity_da(torus::torus_algebra());
    if m.match_generators(&id).is_some() {
        let _ = writeln!(out, "identity bimodule ({} generators)", m.num_gens());
    } else {
        let _ = writeln!(out, "{} ({} generators)", m.name, m.num_gens());
        out.push_str(&m.report());
    }
    if let Some(p) = path {
        write(p, &compute(m.to_json())?)?;
    }
    Ok(0)
}

fn hochschild(m: &Bimodule, max_len: usize, out: &mut String) -> Res<i32> {
    let (l, r) = match (m.left(), m.right()) {
        (Some(l), Some(r)) => (l, r),
        _ => return Err(Failure::Invalid(format!("{} is not a bimodule", m.name))),
    };
    let m = if l.algebra.name() == r.algebra.name() {
        m.clone()
    } else {
        let map = l.algebra.isomorphism_to(&r.algebra).ok_or_else(|| {
            Failure::Invalid(format!("{} and {} are not isomorphic", l.algebra.name(), r.algebra.name()))
        })?;
        let _ = writeln!(out, "left algebra {} identified with {}", l.algebra.name(), r.algebra.name());
        compute(m.transport_left(r.algebra.clone(), &map))?
    };
    let m = &m;
    let (l, r) = (m.left().expect("left side"), m.right().expect("right side"));
    let aa = match (l.tag, r.tag) {
        (Tag::A, Tag::A) => m.clone(),
        (Tag::D, Tag::A) => {
            if m.is_bounded(BoundFlavor::Operational) == Bounded::Yes {
                let c = compute(hochschild_da(m))?;
                let _ = writeln!(out, "twisted complex of {}: dim {} rank {}", m.name, c.dim(), c.homology_rank());
            }
            compute(box_tensor(&algebra_aa(l.algebra.clone()), m))?
        }
        (a, b) => return Err(Failure::Invalid(format!("{} has sides {a:?}{b:?}, not AA or DA", m.name))),
    };
    let _ = writeln!(out, "len dim rank(CH) rank(bar) isomorphic image");
    for len in 1..=max_len {
        let (direct, twisted, map) = compute(hochschild_bar_pair(&aa, len))?;
        let iso = map.as_ref().map(|mp| direct.isomorphic_via(&twisted, mp)).unwrap_or(false);
        let (rd, rt) = (direct.homology_rank(), twisted.homology_rank());
        let image = filtered_image_rank(&direct, len as i64 - 1);
        let _ = writeln!(out, "{len} {} {rd} {rt} {} {image}", direct.dim(), if iso { "yes" } else { "no" });
        if !iso || rd != rt {
            return Err(Failure::Internal(format!("Hochschild pipelines disagree at length {len}")));
        }
    }
    Ok(0)
}

fn dualize_cmd(path: &str, spec: &str, i: i64, target: Option<&str>, out: &mut String) -> Res<i32> {
    let n = load_bimodule(path)?;
    let z = pmc(spec)?;
    let dd = if z.canonical() == PointedMatchedCircle::torus().canonical() && i == 0 {
        torus::cfdd_id_small()
    } else {
        check_strands_grading(&z, i)?;
        cfdd_identity(&z, i)
    };
    let want = dd.left().map(|s| s.algebra.name().to_string()).unwrap_or_default();
    match n.left() {
        Some(s) if s.tag == Tag::D && s.algebra.name() == want => {}
        _ => return Err(Failure::Invalid(format!("{} is not a left type D structure over {want}", n.name))),
    }
    let d = compute(dualize(&n, &dd, torus::PROBE_LEN))?;
    let raw = compute(d.raw.to_chain_complex())?;
    let _ = writeln!(out, "morphism complex: {} basis elements, homology rank {}", raw.dim(), raw.homology_rank());
    let m = &d.module;
    let _ = writeln!(out, "{} ({} generators)", m.name, m.num_gens());
    out.push_str(&m.report());
    if let Some(p) = target {
        let text = match m.to_json() {
            Ok(t) => t,
            Err(_) => {
                let len = torus::PROBE_LEN + 2;
                let rule = PatternRule::infer(m, len)
                    .ok_or_else(|| Failure::Invalid(format!("{} has no finite or pattern description", m.name)))?;
                let _ = writeln!(out, "written as {} (checked on inputs up to length {len})", rule.describe());
                let fitted = Bimodule::new(&m.name, m.shape.left.clone(), m.shape.right.clone(), m.gens.clone());
                compute(fitted.with_rule(Arc::new(rule)).to_json())?
            }
        };
        write(p, &text)?;
    }
    Ok(0)
}

fn check(path: &str, twist: Option<&str>, probe_len: usize, out: &mut String) -> Res<i32> {
    let m = load_bimodule(path)?;
    let mut ok = true;
    match m.check_structure(probe_len) {
        Ok(n) => {
            let _ = writeln!(out, "structure: pass ({n} keys)");
        }
        Err(e) => {
            ok = false;
            let _ = writeln!(out, "structure: FAIL {e}");
        }
    }
    for (name, f) in [("operational", BoundFlavor::Operational), ("left", BoundFlavor::Left), ("right", BoundFlavor::Right)] {
        let b = match m.is_bounded(f) {
            Bounded::Yes => "yes",
            Bounded::No => "no",
            Bounded::Unknown => "unknown",
        };
        let _ = writeln!(out, "bounded ({name}): {b}");
    }
    if let Some(t) = twist {
        let t = parse_twist(t)?;
        let z = PointedMatchedCircle::torus();
        let gr = torus::dehn_twist_gradings(t);
        if gr.len() != m.num_gens() {
            return Err(Failure::Invalid(format!("{} generators but {} stated gradings", m.num_gens(), gr.len())));
        }
        match check_da_gradings(&m, &z, &torus_refinement(), &gr, &dehn_twist_hom(t)) {
            Ok(n) => {
                let _ = writeln!(out, "gradings: pass ({n} terms)");
            }
            Err(e) => {
                ok = false;
                let _ = writeln!(out, "gradings: FAIL {e}");
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn admissible(file: &str, flavor: &str, out: &mut String) -> Res<i32> {
    let d = load_diagram(file)?;
    let flavors: Vec<Flavor> = if flavor == "all" {
        Flavor::ALL.to_vec()
    } else {
        vec![Flavor::parse(flavor).ok_or_else(|| Failure::Invalid(format!("unknown flavor {flavor:?}")))?]
    };
    let _ = writeln!(out, "{}: {} periodic domains", d.name, d.periodic_domains().len());
    let names: Vec<&str> = d.regions.iter().map(|r| r.name.as_str()).collect();
    let mut all = true;
    for f in flavors {
        match d.check_admissible(f) {
            Admissibility::Admissible(area) => {
                let a: Vec<String> = area.iter().zip(&names).map(|(a, n)| format!("{n}={a}")).collect();
                let _ = writeln!(out, "{f:?}: admissible, area {}", a.join(" "));
            }
            Admissibility::Witness(w) => {
                all = false;
                let terms: Vec<String> =
                    w.iter().zip(&names).filter(|(c, _)| **c != 0).map(|(c, n)| format!("{c}{n}")).collect();
                let _ = writeln!(out, "{f:?}: not admissible, witness {}", terms.join(" "));
            }
        }
    }
    Ok(if all { 0 } else { 1 })
}
