//! `heisenberg`: classification, equivalence, refinement and recognition of
//! Heisenberg-type central extensions from the command line.
//!
//! Exit codes: 0 success or equivalent, 1 definitively not equivalent,
//! 2 input error, 3 hypothesis failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use heisenberg_core::cocycles::{
    brute_h2_order, brute_refinement, class_representatives, cohomologous, enumerate_cocycles, ext_order, h2_order,
    ClassWitness, SEARCH_LIMIT,
};
use heisenberg_core::grouprec::{builtin, recognize, verify_omega_factorization, FiniteGroup};
use heisenberg_core::heisenberg::HeisenbergGroup;
use heisenberg_core::pairings::{alternating_pairing_count, Pairing};
use heisenberg_core::text::{parse_cayley, parse_cocycle, parse_context, parse_group, parse_subgroup};
use heisenberg_core::{CochainFunction, Cocycle, CoeffContext, Error, FinAbGroup, Stage};
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[derive(Parser)]
#[command(name = "heisenberg", version, about = "Heisenberg-type central extensions of finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order of H²(A, C) and the alternating pairings that classify it.
    Classify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        coeff: String,
        /// Cross-check by enumerating cocycles.
        #[arg(long)]
        brute: bool,
    },
    /// Decide whether two cocycles differ by a coboundary.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Write the refinement certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quadratic refinement of a symmetric cocycle.
    Refine {
        file: PathBuf,
        /// Cross-check by exhaustive search.
        #[arg(long)]
        brute: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build H_c from a cocycle file, or from a random cocycle with --seed.
    Build {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file", requires_all = ["group", "coeff"])]
        seed: Option<u64>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        coeff: Option<String>,
        /// Write the Cayley table here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Present a class-2 group as H_β(A).
    Recognize {
        /// `builtin:NAME` or a Cayley table file.
        source: String,
        /// `center`, `commutator`, `trivial`, a file, or element indices.
        #[arg(long, default_value = "center")]
        subgroup: String,
        /// Rerun every verification on the result.
        #[arg(long)]
        check: bool,
        /// Write the β pairing here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate all normalized cocycles over a finite coefficient group.
    Enumerate {
        #[arg(long)]
        group: String,
        #[arg(long)]
        coeff: String,
        /// Write every cocycle here, separated by blank lines.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Hypothesis(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match &e {
            Error::Stage { stage: Stage::ClassCheck, .. } | Error::Hypothesis(_) => Failure::Hypothesis(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = match cli.command {
        Command::Classify { group, coeff, brute } => classify(&mut out, &group, &coeff, brute),
        Command::Equiv { a, b, out: path } => equiv(&mut out, &a, &b, path.as_deref()),
        Command::Refine { file, brute, out: path } => refine(&mut out, &file, brute, path.as_deref()),
        Command::Build { file, seed, group, coeff, out: path } => {
            build(&mut out, file.as_deref(), seed, group.as_deref(), coeff.as_deref(), path.as_deref())
        }
        Command::Recognize { source, subgroup, check, out: path } => {
            recognize_cmd(&mut out, &source, &subgroup, check, path.as_deref())
        }
        Command::Enumerate { group, coeff, out: path } => enumerate(&mut out, &group, &coeff, path.as_deref()),
    };
    print!("{out}");
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Hypothesis(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path) -> impl FnOnce(Error) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", path.display()))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn classify(out: &mut String, group: &str, coeff: &str, brute: bool) -> Outcome {
    let a = parse_group(group)?;
    let ctx = parse_context(coeff)?;
    writeln!(out, "group={a}").unwrap();
    writeln!(out, "coeff={ctx}").unwrap();
    writeln!(out, "alternating_pairings={}", alternating_pairing_count(&a, &ctx)).unwrap();
    writeln!(out, "ext_order={}", ext_order(&a, &ctx)).unwrap();
    let order = h2_order(&a, &ctx);
    writeln!(out, "H2_order={order}").unwrap();
    let ms = a.moduli();
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            let g = ms[i].gcd(&ms[j]);
            let n = ctx.torsion_order(g);
            if n > 1 {
                writeln!(out, "basis omega(e{},e{}) in C[{g}] choices={n}", i + 1, j + 1).unwrap();
            }
        }
    }
    if brute {
        let count = brute_h2_order(&a, &ctx, SEARCH_LIMIT)?;
        writeln!(out, "brute_H2_order={count}").unwrap();
        writeln!(out, "brute_agrees={}", yes(count == order)).unwrap();
        if count != order {
            return Ok(1);
        }
    }
    Ok(0)
}

fn load_cocycle(path: &Path) -> Result<Cocycle, Failure> {
    let text = read(path)?;
    let c = parse_cocycle(&text).map_err(in_file(path))?;
    if let Err(v) = c.verify() {
        return Err(Failure::Input(format!("{}: not a cocycle: {v}", path.display())));
    }
    Ok(c)
}

fn emit_refinement(out: &mut String, f: &CochainFunction, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => {
            write(p, &f.to_string())?;
            writeln!(out, "certificate={}", p.display()).unwrap();
        }
        None => {
            writeln!(out).unwrap();
            write!(out, "{f}").unwrap();
        }
    }
    Ok(())
}

fn equiv(out: &mut String, a: &Path, b: &Path, path: Option<&Path>) -> Outcome {
    let c = load_cocycle(a)?;
    let c2 = load_cocycle(b)?;
    if c.group() != c2.group() || c.context() != c2.context() {
        return Err(Failure::Input(format!(
            "mismatched inputs: {} over {} vs {} over {}",
            c.group(),
            c.context(),
            c2.group(),
            c2.context()
        )));
    }
    let cmp = cohomologous(&c, &c2)?;
    writeln!(out, "group={}", c.group()).unwrap();
    writeln!(out, "coeff={}", c.context()).unwrap();
    writeln!(out, "omega_equal={}", yes(cmp.omega_equal)).unwrap();
    if c.context().is_finite() && cmp.omega_equal {
        writeln!(out, "refinement={}", if cmp.cohomologous { "present" } else { "absent" }).unwrap();
    }
    writeln!(out, "cohomologous={}", yes(cmp.cohomologous)).unwrap();
    match &cmp.witness {
        ClassWitness::Refinement(f) => {
            if f.defect() != c.sub(&c2)? {
                return Err(Failure::Input("internal error: certificate does not verify".into()));
            }
            emit_refinement(out, f, path)?;
            Ok(0)
        }
        ClassWitness::Separator { i, j, left, right } => {
            writeln!(out, "separator=(e{},e{}) omega_a={left} omega_b={right}", i + 1, j + 1).unwrap();
            Ok(1)
        }
        ClassWitness::Obstructed => {
            writeln!(out, "reason=omega agrees but c - c' has no refinement with values in {}", c.context()).unwrap();
            Ok(1)
        }
    }
}

fn refine(out: &mut String, file: &Path, brute: bool, path: Option<&Path>) -> Outcome {
    let c = load_cocycle(file)?;
    let symmetric = c.is_symmetric();
    writeln!(out, "symmetric={}", yes(symmetric)).unwrap();
    let found = if symmetric {
        match cohomologous(&c, &Cocycle::trivial(c.group(), c.context()))?.witness {
            ClassWitness::Refinement(f) => Some(f),
            _ => None,
        }
    } else {
        None
    };
    writeln!(out, "refinement={}", if found.is_some() { "present" } else { "absent" }).unwrap();
    if brute {
        let exhaustive = brute_refinement(&c, brute_denominator(&c))?;
        writeln!(out, "brute_refinement={}", if exhaustive.is_some() { "present" } else { "absent" }).unwrap();
        writeln!(out, "brute_agrees={}", yes(exhaustive.is_some() == found.is_some())).unwrap();
    }
    match found {
        Some(f) => {
            if f.defect() != c {
                return Err(Failure::Input("internal error: refinement does not verify".into()));
            }
            emit_refinement(out, &f, path)?;
            Ok(0)
        }
        None => Ok(1),
    }
}

/// Large enough that any refinement can be taken with values of this order.
fn brute_denominator(c: &Cocycle) -> u64 {
    let lcm = |a: u64, b: u64| a.lcm(&b);
    let entries = c.denominators().into_iter().fold(1, lcm);
    let moduli = c.context().moduli().map_or(1, |ms| ms.iter().copied().fold(1, lcm));
    lcm(entries * c.group().exponent(), moduli)
}

fn build(
    out: &mut String,
    file: Option<&Path>,
    seed: Option<u64>,
    group: Option<&str>,
    coeff: Option<&str>,
    path: Option<&Path>,
) -> Outcome {
    let c = match (file, seed) {
        (Some(f), _) => load_cocycle(f)?,
        (None, Some(seed)) => {
            let a = parse_group(group.unwrap_or_default())?;
            let ctx = parse_context(coeff.unwrap_or_default())?;
            random_cocycle(&a, &ctx, seed)?
        }
        (None, None) => return Err(Failure::Input("give a cocycle file or --seed with --group and --coeff".into())),
    };
    let h = HeisenbergGroup::new(c)?;
    writeln!(out, "group={}", h.group()).unwrap();
    writeln!(out, "coeff={}", h.context()).unwrap();
    match h.order() {
        Some(n) => writeln!(out, "order={n}").unwrap(),
        None => writeln!(out, "order=infinite").unwrap(),
    }
    let center = h.center();
    match center.order() {
        Some(n) => writeln!(out, "center_order={n}").unwrap(),
        None => writeln!(out, "center=C x ker(omega) kernel_order={}", center.kernel.len()).unwrap(),
    }
    writeln!(out, "commutator_order={}", h.commutator_subgroup().len()).unwrap();
    writeln!(out, "class={}", h.nilpotency_class()).unwrap();
    writeln!(out, "omega_nondegenerate={}", yes(h.omega().is_nondegenerate())).unwrap();
    writeln!(out, "cocycle_symmetric={}", yes(h.cocycle().is_symmetric())).unwrap();
    if seed.is_some() {
        writeln!(out).unwrap();
        write!(out, "{}", h.cocycle()).unwrap();
    }
    if let Some(p) = path {
        let els = if h.is_finite() { h.elements()? } else { h.minimal_snapshot()? };
        let table = h.cayley_table_of(&els)?;
        let mut text = String::new();
        for (k, e) in els.iter().enumerate() {
            writeln!(text, "# {k} = {e}").unwrap();
        }
        text.push_str(&table.to_cayley_string());
        write(p, &text)?;
        writeln!(out, "cayley={} elements={}", p.display(), els.len()).unwrap();
    }
    Ok(0)
}

/// A random bimultiplicative cocycle plus a random coboundary.
fn random_cocycle(a: &FinAbGroup, ctx: &CoeffContext, seed: u64) -> Result<Cocycle, Failure> {
    let mut rng = StdRng::seed_from_u64(seed);
    let beta = Cocycle::from_pairing(Pairing::random(a, ctx, &mut rng));
    let f = CochainFunction::random(a, ctx, a.exponent(), &mut rng);
    Ok(beta.add(&f.defect())?)
}

fn load_group(source: &str) -> Result<FiniteGroup, Failure> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return Ok(builtin(name)?);
    }
    let path = Path::new(source);
    parse_cayley(&read(path)?).map_err(in_file(path))
}

fn load_subgroup(g: &FiniteGroup, spec: &str) -> Result<Vec<usize>, Failure> {
    match spec {
        "center" => return Ok(g.center()),
        "commutator" => return Ok(g.commutator_subgroup()),
        "trivial" => return Ok(vec![g.identity()]),
        _ => {}
    }
    let path = Path::new(spec);
    if path.is_file() {
        return parse_subgroup(&read(path)?, g.order()).map_err(in_file(path));
    }
    Ok(parse_subgroup(&spec.replace(',', " "), g.order())?)
}

fn recognize_cmd(out: &mut String, source: &str, subgroup: &str, check: bool, path: Option<&Path>) -> Outcome {
    let g = load_group(source)?;
    let central = load_subgroup(&g, subgroup)?;
    writeln!(out, "group_order={}", g.order()).unwrap();
    writeln!(out, "central_order={}", central.len()).unwrap();
    match g.nilpotency_class() {
        Some(k) => writeln!(out, "class={k}").unwrap(),
        None => writeln!(out, "class=not-nilpotent").unwrap(),
    }
    let p = recognize(&g, &central)?;
    let omega = p.beta.omega();
    writeln!(out, "C={}", p.extension.context).unwrap();
    writeln!(out, "A={}", p.a()).unwrap();
    writeln!(out, "omega_nondegenerate={}", yes(omega.is_nondegenerate())).unwrap();
    writeln!(out, "equivalent_over_original={}", yes(p.equivalent_over_original())).unwrap();
    writeln!(out, "equivalent_over_divisible=yes").unwrap();
    if check {
        let diagram = p.verify().is_ok();
        let factor = verify_omega_factorization(&p);
        let verdicts = g.class_two_verdicts().consistent();
        let certificate = p.refinement.defect()
            == p.cocycle
                .map_coeffs(p.target.context(), |v| p.embedding.apply(v))?
                .sub(&Cocycle::from_pairing(p.beta.clone()))?;
        writeln!(out, "check_diagram={}", pass(diagram)).unwrap();
        writeln!(out, "check_omega_factorization={}", pass(factor)).unwrap();
        writeln!(out, "check_class_verdicts={}", pass(verdicts)).unwrap();
        writeln!(out, "check_refinement={}", pass(certificate)).unwrap();
        if !(diagram && factor && verdicts && certificate) {
            return Err(Failure::Input("verification failed".into()));
        }
    }
    writeln!(out, "\nbeta:").unwrap();
    write!(out, "{}", p.beta).unwrap();
    writeln!(out, "\nomega:").unwrap();
    write!(out, "{}", omega.as_pairing()).unwrap();
    writeln!(out, "\niso:").unwrap();
    for (x, img) in p.iso.iter().enumerate() {
        writeln!(out, "{x} -> {img}").unwrap();
    }
    if let Some(path) = path {
        write(path, &p.beta.to_string())?;
        writeln!(out, "\nbeta_file={}", path.display()).unwrap();
    }
    Ok(0)
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn enumerate(out: &mut String, group: &str, coeff: &str, path: Option<&Path>) -> Outcome {
    let a = parse_group(group)?;
    let ctx = parse_context(coeff)?;
    let all = enumerate_cocycles(&a, &ctx)?;
    let mut omegas = Vec::new();
    for c in &all {
        let w = c.omega()?;
        if !omegas.contains(&w) {
            omegas.push(w);
        }
    }
    let classes = class_representatives(&all)?;
    writeln!(out, "group={a}").unwrap();
    writeln!(out, "coeff={ctx}").unwrap();
    writeln!(out, "count={}", all.len()).unwrap();
    writeln!(out, "distinct_omega={}", omegas.len()).unwrap();
    writeln!(out, "classes={}", classes.len()).unwrap();
    writeln!(out, "H2_order={}", h2_order(&a, &ctx)).unwrap();
    if let Some(p) = path {
        let text: Vec<String> = all.iter().map(|c| c.to_string()).collect();
        write(p, &text.join("\n"))?;
        writeln!(out, "cocycles={}", p.display()).unwrap();
    }
    Ok(0)
}
