use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use picardkit::cones::{product_mori_cone, surface_cone_report};
use picardkit::doublecover::{
    anticanonical_power, cover_singular_at, expected_picard_number, format_rational, is_fano,
    parse_rational, DoubleCoverSpec, MultiHomogPoly, ProductPoint,
};
use picardkit::enumerate::{enumerate_conic, enumerate_exceptional, orbit_signature, ClassFamily};
use picardkit::fibration::{classify_finite_pairs, finite_partners};
use picardkit::lattice::{DivisorClass, SurfaceModel};
use picardkit::verify::{self, VerificationReport, SUITES};

#[derive(Parser)]
#[command(
    name = "picardkit",
    version,
    about = "Exact computations on Picard lattices of Del Pezzo surfaces"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Exceptional,
    Conic,
}

#[derive(Subcommand)]
enum Command {
    /// List all exceptional or conic-bundle classes on the blow-up of r points.
    Enumerate {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(short, long)]
        rank: usize,
    },
    /// Classify finite pairs of conic bundles up to renumbering the points.
    Pairs {
        #[arg(short, long)]
        rank: usize,
        /// Fix the first class, as `d;m1,…,mr` for dH − Σ mᵢEᵢ, and group its
        /// finite partners instead.
        #[arg(long = "with")]
        first: Option<String>,
    },
    /// Nef and pseudo-effective cones of a blow-up of P², or of (P¹)ⁿ.
    Cones {
        #[arg(
            short,
            long,
            conflicts_with = "product",
            required_unless_present = "product"
        )]
        rank: Option<usize>,
        /// Number of P¹ factors.
        #[arg(long)]
        product: Option<usize>,
    },
    /// Invariants of the double cover of (P¹)ⁿ branched in type (2d₁, …, 2dₙ).
    DoubleCover {
        /// Comma-separated d₁,…,dₙ.
        #[arg(long = "type", value_delimiter = ',', required = true)]
        branch_type: Vec<u32>,
    },
    /// Test whether the cover t² = p is singular over a point of {p = 0}.
    Singular {
        /// Branch polynomial as JSON.
        #[arg(long)]
        input: PathBuf,
        /// Point as a0:a1,b0:b1,… with exact rational coordinates.
        #[arg(long)]
        point: String,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        id: String,
    },
}

struct Output {
    command: &'static str,
    params: Value,
    result: Value,
    text: String,
    failed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let out = match run(&cli.command) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let rendered = match cli.format {
        Format::Json => {
            let doc = json!({"command": out.command, "params": out.params, "result": out.result});
            serde_json::to_string_pretty(&doc).expect("json output") + "\n"
        }
        Format::Text => out.text,
    };
    let written = match &cli.out {
        Some(path) => {
            fs::write(path, &rendered).with_context(|| format!("writing {}", path.display()))
        }
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .context("writing stdout"),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if out.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("PICARDKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().with_context(|| {
        format!("PICARDKIT_THREADS must be a non-negative integer, got {raw:?}")
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cmd: &Command) -> anyhow::Result<Output> {
    match cmd {
        Command::Enumerate { kind, rank } => cmd_enumerate(*kind, *rank),
        Command::Pairs { rank, first: None } => cmd_pairs(*rank),
        Command::Pairs {
            rank,
            first: Some(c1),
        } => cmd_partners(*rank, c1),
        Command::Cones { rank, product } => cmd_cones(*rank, *product),
        Command::DoubleCover { branch_type } => cmd_double_cover(branch_type),
        Command::Singular { input, point } => cmd_singular(input, point),
        Command::Verify { id } => cmd_verify(id),
    }
}

fn basis(model: SurfaceModel) -> Value {
    json!(model.basis_labels())
}

fn classes(cs: &[DivisorClass]) -> Value {
    json!(cs.iter().map(|c| c.coords()).collect::<Vec<_>>())
}

fn cmd_enumerate(kind: Kind, rank: usize) -> anyhow::Result<Output> {
    let (name, fam): (&str, ClassFamily) = match kind {
        Kind::Exceptional => ("exceptional", enumerate_exceptional(rank)?),
        Kind::Conic => ("conic", enumerate_conic(rank)?),
    };
    let model = fam.model();
    let mut text = format!("{} {name} classes on {model}\n", fam.len());
    for c in fam.members() {
        text.push_str(&format!("{c}\n"));
    }
    Ok(Output {
        command: "enumerate",
        params: json!({"kind": name, "rank": rank}),
        result: json!({
            "model": model.to_string(),
            "basis": basis(model),
            "count": fam.len(),
            "classes": classes(fam.members()),
        }),
        text,
        failed: false,
    })
}

fn cmd_pairs(rank: usize) -> anyhow::Result<Output> {
    let groups = classify_finite_pairs(rank)?;
    let total: usize = groups.iter().map(|g| g.count).sum();
    let mut text = format!(
        "{} finite pairs in {} (signature pair, degree) groups on {}\n",
        total,
        groups.len(),
        SurfaceModel::blowup_p2(rank)?
    );
    for g in &groups {
        let (a, b) = &g.signature_pair;
        text.push_str(&format!(
            "{a} x {b}  degree {}  count {}\n",
            g.degree, g.count
        ));
    }
    let families: Vec<Value> = groups
        .iter()
        .map(|g| {
            let (a, b) = &g.signature_pair;
            json!({
                "signatures": [
                    {"degree": a.degree, "multiplicities": a.multiplicities},
                    {"degree": b.degree, "multiplicities": b.multiplicities},
                ],
                "degree": g.degree,
                "count": g.count,
            })
        })
        .collect();
    Ok(Output {
        command: "pairs",
        params: json!({"rank": rank}),
        result: json!({"total": total, "families": families}),
        text,
        failed: false,
    })
}

fn parse_class(rank: usize, s: &str) -> anyhow::Result<DivisorClass> {
    let (d, m) = s
        .split_once(';')
        .with_context(|| format!("class {s:?} is not of the form d;m1,...,mr"))?;
    let d: i64 = d
        .trim()
        .parse()
        .with_context(|| format!("bad degree in {s:?}"))?;
    let m = m
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .with_context(|| format!("bad multiplicity in {s:?}"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    if m.len() != rank {
        bail!(
            "class {s:?} has {} multiplicities, expected {rank}",
            m.len()
        );
    }
    Ok(DivisorClass::from_multiplicities(d, &m)?)
}

fn cmd_partners(rank: usize, first: &str) -> anyhow::Result<Output> {
    let c1 = parse_class(rank, first)?;
    let partners = finite_partners(&c1)?;
    let mut groups: BTreeMap<(_, i64), Vec<&DivisorClass>> = BTreeMap::new();
    for (c2, rep) in &partners {
        groups
            .entry((orbit_signature(c2)?, rep.degree))
            .or_default()
            .push(c2);
    }
    let mut text = format!(
        "{} finite partners of {c1} in {} signature families\n",
        partners.len(),
        groups
            .keys()
            .map(|(s, _)| s)
            .collect::<std::collections::BTreeSet<_>>()
            .len()
    );
    let mut families = Vec::new();
    for ((sig, degree), members) in &groups {
        text.push_str(&format!(
            "{sig}  degree {degree}  count {}\n",
            members.len()
        ));
        for c in members {
            text.push_str(&format!("  {c}\n"));
        }
        families.push(json!({
            "signature": {"degree": sig.degree, "multiplicities": sig.multiplicities},
            "degree": degree,
            "count": members.len(),
            "classes": members.iter().map(|c| c.coords()).collect::<Vec<_>>(),
        }));
    }
    Ok(Output {
        command: "pairs",
        params: json!({"rank": rank, "with": c1.coords()}),
        result: json!({
            "basis": basis(c1.model()),
            "total": partners.len(),
            "families": families,
        }),
        text,
        failed: false,
    })
}

fn cmd_cones(rank: Option<usize>, product: Option<usize>) -> anyhow::Result<Output> {
    let model = match (rank, product) {
        (Some(r), _) => SurfaceModel::blowup_p2(r)?,
        (None, Some(n)) => SurfaceModel::product_p1(n)?,
        (None, None) => bail!("either --rank or --product is required"),
    };
    let params = json!({"rank": rank, "product": product});
    if product.is_some_and(|n| n != 2) {
        let mori = product_mori_cone(model.rank())?;
        let rays = mori.extremal_rays()?;
        let simplicial = mori.is_simplicial()?;
        let text = format!(
            "{model}: Mori cone has {} extremal rays, simplicial: {simplicial}\n",
            rays.len()
        );
        return Ok(Output {
            command: "cones",
            params,
            result: json!({
                "model": model.to_string(),
                "picard_number": model.rank(),
                "mori_rays": rays,
                "mori_simplicial": simplicial,
            }),
            text,
            failed: false,
        });
    }
    let rep = surface_cone_report(model)?;
    let psef = rep.psef.extremal_rays()?;
    let nef = rep.nef.extremal_rays()?;
    let text = format!(
        "{model}: Picard number {}\n  Psef extremal rays: {}\n  Nef extremal rays: {}\n  Nef = Psef: {}\n  Mori cone simplicial: {}\n",
        rep.picard_number,
        psef.len(),
        nef.len(),
        rep.equal,
        rep.mori_simplicial
    );
    Ok(Output {
        command: "cones",
        params,
        result: json!({
            "model": model.to_string(),
            "basis": basis(model),
            "picard_number": rep.picard_number,
            "psef_rays": psef,
            "nef_rays": nef,
            "equal": rep.equal,
            "mori_simplicial": rep.mori_simplicial,
        }),
        text,
        failed: false,
    })
}

fn cmd_double_cover(branch_type: &[u32]) -> anyhow::Result<Output> {
    let spec = DoubleCoverSpec::new(branch_type.to_vec())?;
    let power = anticanonical_power(&spec)?;
    let fano = is_fano(&spec);
    let picard = expected_picard_number(&spec);
    let branch = spec.branch_class();
    let mut text = format!(
        "double cover of {} branched along {branch}\n  (-K)^{} = {power}\n  Fano: {fano}\n",
        spec.base_model(),
        spec.n()
    );
    if let Some(rho) = picard {
        text.push_str(&format!("  Picard number: {rho}\n"));
    }
    Ok(Output {
        command: "double-cover",
        params: json!({"type": branch_type}),
        result: json!({
            "n": spec.n(),
            "basis": basis(spec.base_model()),
            "branch_class": branch.coords(),
            "anticanonical_power": power,
            "fano": fano,
            "picard_number": picard,
        }),
        text,
        failed: false,
    })
}

fn parse_point(s: &str) -> anyhow::Result<ProductPoint> {
    let coords = s
        .split(',')
        .map(|pair| {
            let (a, b) = pair
                .split_once(':')
                .with_context(|| format!("point factor {pair:?} is not of the form a:b"))?;
            Ok((parse_rational(a)?, parse_rational(b)?))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(ProductPoint::new(coords)?)
}

fn cmd_singular(input: &PathBuf, point: &str) -> anyhow::Result<Output> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let poly = MultiHomogPoly::from_json(&text)?;
    let pt = parse_point(point)?;
    let singular = cover_singular_at(&poly, &pt)?;
    let gradient: Vec<String> = poly.gradient(&pt)?.iter().map(format_rational).collect();
    let coords: Vec<[String; 2]> = pt
        .coords()
        .iter()
        .map(|(a, b)| [format_rational(a), format_rational(b)])
        .collect();
    let out = format!(
        "p = {poly}\n  point: {}\n  gradient: ({})\n  singular: {singular}\n",
        coords
            .iter()
            .map(|[a, b]| format!("({a}:{b})"))
            .collect::<Vec<_>>()
            .join(" x "),
        gradient.join(", ")
    );
    Ok(Output {
        command: "singular",
        params: json!({"input": poly.to_json(), "point": coords}),
        result: json!({"gradient": gradient, "singular": singular}),
        text: out,
        failed: false,
    })
}

fn render_report(rep: &VerificationReport) -> String {
    let mut text = format!(
        "{}: {}\n",
        rep.lemma_id,
        if rep.passed { "PASSED" } else { "FAILED" }
    );
    for d in &rep.details {
        if d.matches() {
            text.push_str(&format!("  ok    {}: {}\n", d.case, d.got));
        } else {
            text.push_str(&format!(
                "  FAIL  {}: expected {}, got {}\n",
                d.case, d.expected, d.got
            ));
        }
    }
    text
}

fn cmd_verify(id: &str) -> anyhow::Result<Output> {
    let rep = verify::run(id)?;
    Ok(Output {
        command: "verify",
        params: json!({"id": id}),
        result: serde_json::to_value(&rep)?,
        text: render_report(&rep),
        failed: !rep.passed,
    })
}
