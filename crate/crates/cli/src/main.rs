use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cluster_angles::error::Error;
use cluster_angles::expand::{self, Backend, Options, PqRule};
use cluster_angles::lpoly::LPoly;
use cluster_angles::oracle::{self, Seed};
use cluster_angles::surface::{LoopSpec, TaggedArcSpec, Triangulation};
use cluster_angles::{generate, polygon};

#[derive(Parser)]
#[command(
    name = "cluster-angles",
    version,
    about = "Cluster expansions from perfect matchings of angles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the cluster variable of an arc, or the element of a loop.
    Expand(ExpandArgs),
    /// List the weighted objects one backend sums over.
    Enumerate(EnumerateArgs),
    /// Compare backends on an arc, or on random polygons.
    Verify(VerifyArgs),
    /// Maximal y-degrees against intersection numbers.
    Fvector(ArcArgs),
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Cluster variables reachable from the triangulation's seed.
    Closure(ClosureArgs),
    /// Check that expansions are cluster variables.
    Verify(OracleVerifyArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    surface: PathBuf,
    /// Write the report as JSON here.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct ArcArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    arc: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Principal,
    PlusOne,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, conflicts_with = "loop_", required_unless_present = "loop_")]
    arc: Option<PathBuf>,
    #[arg(long = "loop", id = "loop_")]
    loop_: Option<PathBuf>,
    #[arg(long, default_value = "angles")]
    backend: String,
    #[arg(long)]
    coefficient_free: bool,
    #[arg(long, value_enum, default_value = "principal")]
    pq_rule: RuleArg,
    /// Write the triangulated polygon as JSON here.
    #[arg(long)]
    dump_polygon: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    arc: ArcArgs,
    #[arg(long, default_value = "angles")]
    backend: String,
    #[arg(long)]
    dump_polygon: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "random")]
    surface: Option<PathBuf>,
    #[arg(long, requires = "surface")]
    arc: Option<PathBuf>,
    /// Accepted for symmetry; every backend is always compared.
    #[arg(long)]
    all_backends: bool,
    /// Number of random polygons to check instead of a given arc.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct ClosureArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = oracle::DEFAULT_DEPTH)]
    depth: usize,
}

#[derive(Args)]
struct OracleVerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Arcs to check; every arc reachable as a short walk when omitted.
    #[arg(long)]
    arc: Vec<PathBuf>,
    #[arg(long, default_value_t = oracle::DEFAULT_DEPTH)]
    depth: usize,
}

enum Fail {
    Assertion(String),
    Usage(String),
    Io(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Check(_) | Error::NotDivisible(_) => Fail::Assertion(e.to_string()),
            _ => Fail::Usage(e.to_string()),
        }
    }
}

type Run = Result<(String, Value), Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, s: &str) -> Result<(), Fail> {
    fs::write(path, s).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn load_surface(path: &Path) -> Result<Triangulation, Fail> {
    Ok(Triangulation::from_json(&read(path)?)?)
}

fn load_arc(path: &Path) -> Result<TaggedArcSpec, Fail> {
    serde_json::from_str(&read(path)?).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn load_loop(path: &Path) -> Result<LoopSpec, Fail> {
    serde_json::from_str(&read(path)?).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn backend(s: &str) -> Result<Backend, Fail> {
    Ok(s.parse::<Backend>()?)
}

fn expand(a: &ExpandArgs) -> Run {
    let t = load_surface(&a.common.surface)?;
    let b = backend(&a.backend)?;
    let e = if let Some(p) = &a.loop_ {
        let z = load_loop(p)?;
        if let Some(out) = &a.dump_polygon {
            write(out, &polygon::build_annulus(&t, &z)?.to_json())?;
        }
        expand::loop_element(&t, &z, b, a.coefficient_free)?
    } else {
        let d = load_arc(a.arc.as_deref().expect("clap requires an arc or a loop"))?;
        if let Some(out) = &a.dump_polygon {
            let (tp, _) = expand::arc_terms(&t, &d, b)?;
            write(out, &tp.to_json())?;
        }
        let pq_rule = match a.pq_rule {
            RuleArg::Principal => PqRule::Principal,
            RuleArg::PlusOne => PqRule::PlusOne,
        };
        let opts = Options {
            backend: Some(b),
            coefficient_free: a.coefficient_free,
            pq_rule,
        };
        expand::cluster_variable(&t, &d, &opts)?
    };
    let text = format!("{}\n", e.value);
    Ok((
        text,
        json!({ "value": e.value, "backend": e.backend, "count": e.count, "terms": e.value.len() }),
    ))
}

fn enumerate(a: &EnumerateArgs) -> Run {
    let t = load_surface(&a.arc.common.surface)?;
    let d = load_arc(&a.arc.arc)?;
    let b = backend(&a.backend)?;
    let (tp, terms) = match expand::arc_terms(&t, &d, b) {
        Err(Error::ArcInTriangulation(_)) => {
            return Err(Fail::Usage("the arc's polygon has no diagonals".into()))
        }
        r => r?,
    };
    if tp.n_diagonals() == 0 {
        return Err(Fail::Usage("the arc's polygon has no diagonals".into()));
    }
    if let Some(out) = &a.dump_polygon {
        write(out, &tp.to_json())?;
    }
    let monomials: Vec<String> = terms
        .iter()
        .map(|w| LPoly::monomial(w.x.mul(&w.y)).to_string())
        .collect();
    let mut text = format!("{} objects ({})\n", terms.len(), b);
    for m in &monomials {
        text.push_str(m);
        text.push('\n');
    }
    Ok((
        text,
        json!({ "backend": b, "count": terms.len(), "weights": monomials }),
    ))
}

/// Sorted weights per backend, or the first disagreement.
fn compare(t: &Triangulation, d: &TaggedArcSpec) -> Result<(usize, bool), Fail> {
    let mut reference = None;
    for b in Backend::ALL {
        let (_, terms) = expand::arc_terms(t, d, b)?;
        match &reference {
            None => reference = Some(terms),
            Some(r) if *r != terms => return Ok((r.len(), false)),
            _ => {}
        }
    }
    Ok((reference.map_or(0, |r| r.len()), true))
}

fn verify(a: &VerifyArgs) -> Run {
    if let Some(k) = a.random {
        let mut rng = generate::rng(a.seed);
        let mut rows = Vec::new();
        let mut ok = true;
        for _ in 0..k {
            let (t, d) = generate::random_arc(&mut rng, 6, 5)?;
            let (count, equal) = compare(&t, &d)?;
            ok &= equal;
            rows.push(json!({ "surface": t.name, "arc": d.name, "count": count, "equal": equal }));
        }
        let text = format!(
            "{k} random arcs (seed {}), {}\n",
            a.seed,
            if ok {
                "all weights equal"
            } else {
                "weights differ"
            }
        );
        let report = json!({ "seed": a.seed, "instances": rows, "equal": ok });
        return if ok {
            Ok((text, report))
        } else {
            Err(Fail::Assertion(text.trim_end().into()))
        };
    }
    let t = load_surface(a.surface.as_deref().expect("clap requires a surface"))?;
    let d = load_arc(
        a.arc
            .as_deref()
            .ok_or_else(|| Fail::Usage("--arc or --random is required".into()))?,
    )?;
    let (count, equal) = compare(&t, &d)?;
    if !equal {
        return Err(Fail::Assertion(format!(
            "backends disagree ({count} objects for angles)"
        )));
    }
    let text = format!(
        "{} backends, {count} objects each, all weights equal\n",
        Backend::ALL.len()
    );
    Ok((
        text,
        json!({ "backends": Backend::ALL, "count": count, "equal": true }),
    ))
}

fn fvector(a: &ArcArgs) -> Run {
    let t = load_surface(&a.common.surface)?;
    let d = load_arc(&a.arc)?;
    let f = expand::f_vector(&t, &d)?;
    if !f.agrees() {
        return Err(Fail::Assertion(format!(
            "f-vector {:?} differs from intersection numbers {:?}",
            f.max_degree, f.intersection
        )));
    }
    let text = format!("{:?}\n", f.max_degree);
    Ok((text, serde_json::to_value(&f).expect("serializable")))
}

fn closure(a: &ClosureArgs) -> Run {
    let t = load_surface(&a.common.surface)?;
    let c = oracle::mutation_closure(&Seed::from_triangulation(&t)?, a.depth)?;
    let mut text = format!(
        "{} cluster variables, {} clusters, {}\n",
        c.variables.len(),
        c.clusters,
        if c.complete {
            "complete"
        } else {
            "depth bound reached"
        }
    );
    for v in &c.variables {
        text.push_str(&v.to_string());
        text.push('\n');
    }
    Ok((text, serde_json::to_value(&c).expect("serializable")))
}

fn oracle_verify(a: &OracleVerifyArgs) -> Run {
    let t = load_surface(&a.common.surface)?;
    let arcs = if a.arc.is_empty() {
        generate::walk_arcs(&t, 6)
    } else {
        a.arc
            .iter()
            .map(|p| load_arc(p))
            .collect::<Result<_, _>>()?
    };
    let v = oracle::verify_against_formula(&t, &arcs, &Options::default(), a.depth)?;
    let missing: Vec<&str> = v
        .arcs
        .iter()
        .filter(|c| !c.member)
        .map(|c| c.arc.as_str())
        .collect();
    let text = format!(
        "{} arcs, {} in a closure of {} variables{}\n",
        v.arcs.len(),
        v.arcs.len() - missing.len(),
        v.closure_size,
        if v.complete {
            ""
        } else {
            " (depth bound reached)"
        }
    );
    if !missing.is_empty() {
        return Err(Fail::Assertion(format!(
            "{}not cluster variables: {}",
            text,
            missing.join(", ")
        )));
    }
    Ok((text, serde_json::to_value(&v).expect("serializable")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json_out, result) = match &cli.command {
        Command::Expand(a) => (&a.common.json_out, expand(a)),
        Command::Enumerate(a) => (&a.arc.common.json_out, enumerate(a)),
        Command::Verify(a) => (&a.json_out, verify(a)),
        Command::Fvector(a) => (&a.common.json_out, fvector(a)),
        Command::Oracle(OracleCommand::Closure(a)) => (&a.common.json_out, closure(a)),
        Command::Oracle(OracleCommand::Verify(a)) => (&a.common.json_out, oracle_verify(a)),
    };
    let outcome = result.and_then(|(text, report)| {
        if let Some(p) = json_out {
            write(
                p,
                &format!("{}\n", serde_json::to_string_pretty(&report).expect("json")),
            )?;
        }
        print!("{text}");
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Assertion(m)) => {
            eprintln!("assertion failed: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Io(m)) => {
            eprintln!("i/o error: {m}");
            ExitCode::from(3)
        }
    }
}
