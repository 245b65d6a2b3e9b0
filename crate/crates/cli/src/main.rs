use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use coherence_core::degrees::Degree;
use coherence_core::dyerlashof::{self, DyerLashofError, OperationQuery, Status};
use coherence_core::kochman::{self, KochmanGenerator};
use coherence_core::lietree::{self, LieTreeError};
use coherence_core::stagescan::{
    self, load_spectrum_json, stage_phrase, CoherenceReport, ReportOptions, SpectrumPresentation,
    StageScanError,
};
use coherence_core::{DegreeError, Prime, PrimeError};

#[derive(Parser)]
#[command(name = "coherence", version, about = "Stage bounds for partial E-infinity structures on ring spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Built-in presentation: bp, e, e-localized, kn, pn, thh-bp.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    spectrum: Option<String>,
    #[arg(long, required_unless_present = "input")]
    prime: Option<u64>,
    /// Height / index for e, e-localized, kn and pn.
    #[arg(long)]
    index: Option<u32>,
    /// Presentation in JSON.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Stage bounds for a spectrum.
    Report {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Also describe the obstruction modules at this stage.
        #[arg(long)]
        stage: Option<usize>,
        /// List candidate windows with extra t_i weight.
        #[arg(long)]
        exploratory: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Kochman basis elements by degree.
    Kochman {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        max_degree: Degree,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Tree shapes on leaves 0..=n and the homology of the tree pair.
    Trees {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Left-normed basis of the arity-n Lie representation.
    Lie {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Dyer-Lashof operations supplied by an n-stage structure.
    Dl {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        stage: i64,
        #[arg(long)]
        class_degree: Degree,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cooperation degrees of a spectrum.
    Degrees {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long, default_value_t = 40)]
        max_degree: Degree,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Stage(#[from] StageScanError),
    #[error(transparent)]
    Tree(#[from] LieTreeError),
    #[error(transparent)]
    DyerLashof(#[from] DyerLashofError),
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Report { spectrum, stage, exploratory, format } => {
            let spec = load(&spectrum)?;
            let report = stagescan::report_with(&spec, &ReportOptions { exploratory, stage })?;
            Ok(match format {
                Format::Json => json(&report),
                Format::Text => report_text(&report),
            })
        }
        Command::Kochman { prime, max_degree, format } => kochman_cmd(Prime::new(prime)?, max_degree, format),
        Command::Trees { n, format } => trees_cmd(n, format),
        Command::Lie { n, format } => lie_cmd(n, format),
        Command::Dl { prime, stage, class_degree, format } => dl_cmd(Prime::new(prime)?, stage, class_degree, format),
        Command::Degrees { spectrum, max_degree, format } => {
            let spec = load(&spectrum)?;
            let coop = spec.coop_degrees.enumerate_up_to(max_degree);
            let coeff = spec.coeff_degrees.enumerate_up_to(max_degree);
            Ok(match format {
                Format::Json => json(&DegreesOut {
                    spectrum: spec.name.clone(),
                    prime: spec.prime.get(),
                    max_degree,
                    min_positive: spec.coop_degrees.min_positive()?,
                    coeff_degrees: coeff,
                    coop_degrees: coop,
                }),
                Format::Text => format!(
                    "{} at p = {}\ncoefficient degrees <= {max_degree}: {}\ncooperation degrees <= {max_degree}: {}\nleast positive cooperation degree: {}\n",
                    spec.name,
                    spec.prime,
                    join(&coeff),
                    join(&coop),
                    spec.coop_degrees.min_positive()?
                ),
            })
        }
    }
}

fn load(args: &SpectrumArgs) -> Result<SpectrumPresentation, CliError> {
    if let Some(path) = &args.input {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
        return Ok(load_spectrum_json(&text)?);
    }
    let name = args.spectrum.as_deref().ok_or_else(|| CliError::Usage("--spectrum or --input is required".into()))?;
    let prime = Prime::new(args.prime.ok_or_else(|| CliError::Usage("--prime is required".into()))?)?;
    if !stagescan::PRESET_NAMES.contains(&name) {
        return Err(CliError::Usage(format!(
            "unknown spectrum {name:?}; expected one of {}",
            stagescan::PRESET_NAMES.join(", ")
        )));
    }
    if matches!(name, "e" | "e-localized" | "kn" | "pn") && args.index.is_none() {
        return Err(CliError::Usage(format!("--spectrum {name} needs --index")));
    }
    Ok(SpectrumPresentation::preset(name, prime, args.index)?)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn report_text(r: &CoherenceReport) -> String {
    let mut out = format!("{} at p = {} (cooperations: {})\n", r.spectrum, r.prime, r.coop_class);
    out += &format!(
        "degree count: admits at least {} structure\n",
        stage_phrase(r.degree_count_bound)
    );
    if let Some(n) = r.refined_bound {
        out += &format!("refined: admits at least {} structure\n", stage_phrase(n));
    }
    let w = &r.witness;
    match (&w.kochman_generator, w.kochman_degree) {
        (Some(k), Some(d)) => {
            out += &format!(
                "witness: window at n = {}, cooperation degree {}, Kochman generator {k} of degree {d}\n",
                w.n, w.coop_degree
            );
        }
        _ => {
            out += &format!("witness: window at n = {}, cooperation degree {} (Ext^{})\n", w.n, w.coop_degree, w.ext_line);
        }
    }
    out += &format!("uniqueness: the structure is unique up to the {}-stage\n", r.uniqueness_bound);
    if let Some(windows) = &r.exploratory_windows {
        if windows.is_empty() {
            out += "exploratory: no candidate windows\n";
        }
        for c in windows {
            out += &format!(
                "exploratory: candidate n = {} (Kochman degree {}, t-weight {})\n",
                c.n, c.kochman_degree, c.mu_weight
            );
        }
    }
    if let Some(stage) = &r.stage {
        out += &stage_text(stage);
    }
    for note in &r.notes {
        out += &format!("note: {note}\n");
    }
    out
}

fn stage_text(d: &stagescan::StageDescriptor) -> String {
    let mut out = format!("stage {}:\n", d.n);
    for e in &d.entries {
        out += &format!("  m = {}: skeleton dimension {}, module {}\n", e.m, e.skeleton_dim, e.module);
    }
    out
}

#[derive(Serialize)]
struct DegreesOut {
    spectrum: String,
    prime: u64,
    max_degree: Degree,
    min_positive: Degree,
    coeff_degrees: Vec<Degree>,
    coop_degrees: Vec<Degree>,
}

#[derive(Serialize)]
struct KochmanOut {
    prime: u64,
    max_degree: Degree,
    min_odd_degree: Degree,
    degrees: BTreeMap<Degree, Vec<KochmanGenerator>>,
}

fn kochman_cmd(p: Prime, max_degree: Degree, format: Format) -> Result<String, CliError> {
    let degrees = kochman::enumerate_by_degree(p, max_degree);
    let min_odd = kochman::min_odd_degree(p);
    Ok(match format {
        Format::Json => json(&KochmanOut { prime: p.get(), max_degree, min_odd_degree: min_odd, degrees }),
        Format::Text => {
            let mut out = format!("Kochman basis at p = {p}, degrees <= {max_degree}\n");
            for (d, gens) in &degrees {
                out += &format!("{d}: {}\n", join(gens));
            }
            out += &format!("least odd degree: {min_odd}\n");
            out
        }
    })
}

#[derive(Serialize)]
struct TreesOut {
    n: usize,
    shapes: BTreeMap<usize, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_homology: Option<Vec<lietree::HomologyGroup>>,
}

fn plural(k: usize, one: &str, many: &str) -> String {
    format!("{k} {}", if k == 1 { one } else { many })
}

fn trees_cmd(n: usize, format: Format) -> Result<String, CliError> {
    let shapes = lietree::enumerate_tree_shapes(n)?;
    let homology = if (2..=lietree::MAX_HOMOLOGY_N).contains(&n) {
        Some(lietree::relative_homology_tree_pair(n)?)
    } else {
        None
    };
    Ok(match format {
        Format::Json => json(&TreesOut {
            n,
            shapes: shapes.iter().map(|(k, v)| (*k, v.iter().map(ToString::to_string).collect())).collect(),
            relative_homology: homology,
        }),
        Format::Text => {
            let summary: Vec<String> = shapes
                .iter()
                .map(|(k, v)| {
                    format!("{}: {}", plural(*k, "internal edge", "internal edges"), plural(v.len(), "shape", "shapes"))
                })
                .collect();
            let mut out = summary.join("; ") + "\n";
            for (k, v) in &shapes {
                out += &format!("[{k}] {}\n", join(v));
            }
            if let Some(h) = homology {
                let groups: Vec<String> = h
                    .iter()
                    .map(|g| {
                        let mut s = format!("H_{} = Z^{}", g.degree, g.rank);
                        for t in &g.torsion {
                            s += &format!(" + Z/{t}");
                        }
                        s
                    })
                    .collect();
                out += &format!("relative homology: {}\n", groups.join(", "));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct LieOut {
    n: usize,
    rank: usize,
    basis: Vec<String>,
}

fn lie_cmd(n: usize, format: Format) -> Result<String, CliError> {
    let basis = lietree::lie_basis(n)?;
    let strings: Vec<String> = basis.iter().map(ToString::to_string).collect();
    Ok(match format {
        Format::Json => json(&LieOut { n, rank: basis.len(), basis: strings }),
        Format::Text => format!("Lie({n}) has rank {}\n{}\n", basis.len(), strings.join("\n")),
    })
}

#[derive(Serialize)]
struct DlOp {
    upper_index: i64,
    lower_index: i64,
    target_degree: Degree,
}

#[derive(Serialize)]
struct DlOut {
    prime: u64,
    stage: i64,
    class_degree: Degree,
    max_lower_index: i64,
    constraint: String,
    max_upper_index: Option<i64>,
    operations: Vec<DlOp>,
}

fn dl_cmd(p: Prime, stage: i64, class_degree: Degree, format: Format) -> Result<String, CliError> {
    let max_lower = dyerlashof::max_lower_index(p, stage)?;
    let ops = dyerlashof::available_upper_ops(p, stage, class_degree)?;
    let mut operations = Vec::new();
    if let Some(max_i) = ops.max_i {
        for i in ops.min_i..=max_i {
            let a = dyerlashof::query(&OperationQuery { p, n_stage: stage, class_degree, upper_index: i })?;
            if let (Status::Available { lower_index }, Some(target_degree)) = (a.status, a.target_degree) {
                operations.push(DlOp { upper_index: i, lower_index, target_degree });
            }
        }
    }
    let out = DlOut {
        prime: p.get(),
        stage,
        class_degree,
        max_lower_index: max_lower,
        constraint: ops.constraint,
        max_upper_index: ops.max_i,
        operations,
    };
    Ok(match format {
        Format::Json => json(&out),
        Format::Text => {
            let mut s = format!(
                "{} structure at p = {p} gives Q_i for i <= {max_lower}\non |x| = {class_degree}: Q^i for {}\n",
                capitalise(&stage_phrase(stage as usize)),
                out.constraint
            );
            match out.max_upper_index {
                Some(m) => s += &format!("highest operation: Q^{m}\n"),
                None => s += "no operations on this degree\n",
            }
            for op in &out.operations {
                s += &format!("  Q^{} = Q_{} lands in degree {}\n", op.upper_index, op.lower_index, op.target_degree);
            }
            s
        }
    })
}

fn capitalise(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}
