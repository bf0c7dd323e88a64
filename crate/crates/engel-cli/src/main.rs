//! `engel`: command-line front end for the Engel relation toolkit.
//!
//! Subcommands are thin deterministic wrappers over the library: basis
//! enumeration, Young-diagram case reduction, relation-matrix assembly,
//! rank certification, nilpotent quotients, and the long-running proof
//! campaign. All reports are JSON; exit codes are 0 (success), 1 (domain
//! error), 2 (resource/budget error), 64 (usage error).

mod campaign;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use engel_core::exactla::{self, IntMatrix};
use engel_core::freelie::{enumerate_basic, Generator, Parity};
use engel_core::nilquot::{Presentation, RelationFamily};
use engel_core::superalg::SuperAlgebra;
use engel_core::young::{self, Partition, ProofTarget};
use serde_json::json;
use std::io::BufReader;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "engel", version, about = "Engel Lie (super)algebra relation toolkit")]
struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the basic-commutator basis of a free Lie (super)algebra.
    Basis(BasisArgs),
    /// Young-diagram utilities: partitions, strip decompositions, proof cases.
    Young {
        #[command(subcommand)]
        command: YoungCommand,
    },
    /// Assemble the integer relation matrix of one multiweight component.
    Relmat(RelmatArgs),
    /// Certify full column rank of a matrix in the text format.
    Certify(CertifyArgs),
    /// Compute a graded nilpotent quotient over GF(p).
    Nilquot(NilquotArgs),
    /// Run (or resume) a full proof campaign over all reduction cases.
    Campaign(campaign::CampaignArgs),
}

#[derive(Subcommand)]
enum YoungCommand {
    /// List the partitions of n.
    List {
        #[arg(long)]
        n: u32,
    },
    /// Strip decomposition of one shape, e.g. --shape 5,3,2,1,1.
    Decompose {
        #[arg(long, value_delimiter = ',')]
        shape: Vec<u32>,
    },
    /// The deduplicated superalgebra cases covering a proof target.
    Cases {
        #[arg(long, value_enum)]
        target: TargetArg,
    },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum TargetArg {
    Engel5Main,
    Char11Step1,
    Char11Step2,
    GroupEngel5,
}

impl From<TargetArg> for ProofTarget {
    fn from(t: TargetArg) -> ProofTarget {
        match t {
            TargetArg::Engel5Main => ProofTarget::Engel5Main,
            TargetArg::Char11Step1 => ProofTarget::Char11Step1,
            TargetArg::Char11Step2 => ProofTarget::Char11Step2,
            TargetArg::GroupEngel5 => ProofTarget::GroupEngel5,
        }
    }
}

#[derive(Args)]
struct BasisArgs {
    /// Generator parities as a string of e/o, e.g. "oee".
    #[arg(long, default_value = "ee")]
    parities: String,
    #[arg(long)]
    max_weight: u32,
    /// Optional per-generator degree caps, comma separated.
    #[arg(long, value_delimiter = ',')]
    caps: Option<Vec<u32>>,
}

#[derive(Args)]
struct RelmatArgs {
    #[arg(long)]
    parities: String,
    /// Target multiweight, comma separated, e.g. 5,4,2,1.
    #[arg(long, value_delimiter = ',')]
    multiweight: Vec<u32>,
    /// Engel identity degree.
    #[arg(long, default_value_t = 5)]
    engel_n: u32,
    /// Also include group-derived identity instances.
    #[arg(long)]
    group: bool,
    /// Write the matrix in the text format here.
    #[arg(long)]
    matrix_out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Matrix file in the text format.
    matrix: PathBuf,
    #[arg(long, default_value = "random-det-gcd")]
    method: String,
    /// Primes to exclude from the claim, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
    exclude: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    samples: u32,
    /// Prime for the rank-mod-p method.
    #[arg(long)]
    p: Option<u64>,
    /// Smith-normal-form dense entry budget.
    #[arg(long)]
    snf_budget: Option<usize>,
}

#[derive(Args)]
struct NilquotArgs {
    /// Relation preset: free, engel2..engel9, group-engel5.
    #[arg(long, default_value = "free")]
    preset: String,
    /// Number of (even) generators; overridden by --parities.
    #[arg(long)]
    gens: Option<usize>,
    /// Generator parities as a string of e/o.
    #[arg(long)]
    parities: Option<String>,
    /// Field characteristics to run, comma separated.
    #[arg(long, value_delimiter = ',')]
    p: Vec<u64>,
    #[arg(long, default_value_t = 12)]
    max_class: u32,
    #[arg(long, value_delimiter = ',')]
    caps: Option<Vec<u32>>,
}

fn parse_parities(s: &str) -> anyhow::Result<Vec<Parity>> {
    s.chars()
        .map(|c| match c {
            'e' => Ok(Parity::Even),
            'o' => Ok(Parity::Odd),
            other => anyhow::bail!("parity must be 'e' or 'o', got {:?}", other),
        })
        .collect()
}

fn parse_preset(s: &str) -> anyhow::Result<RelationFamily> {
    match s {
        "free" => Ok(RelationFamily::Free),
        "group-engel5" => Ok(RelationFamily::GroupEngel5),
        other => {
            if let Some(num) = other.strip_prefix("engel") {
                let n: u32 = num.parse().context("preset engelN with N a number")?;
                anyhow::ensure!(n >= 1, "Engel degree must be positive");
                Ok(RelationFamily::Engel { n })
            } else {
                anyhow::bail!("unknown preset {:?}", other)
            }
        }
    }
}

fn generators_from(parities: &[Parity]) -> Vec<Generator> {
    engel_core::freelie::generators(parities)
}

fn emit(out: &Option<PathBuf>, report: &serde_json::Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            // A closed pipe (e.g. `engel ... | head`) is not an error.
            if let Err(e) = writeln!(stdout, "{}", text) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn cmd_basis(args: &BasisArgs, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let parities = parse_parities(&args.parities)?;
    let gens = generators_from(&parities);
    let basis = enumerate_basic(&gens, args.max_weight, args.caps.as_deref())?;
    let mut elements = Vec::new();
    for w in 1..=args.max_weight {
        for id in basis.weight_range(w) {
            let id = id as u32;
            let c = basis.get(id);
            elements.push(json!({
                "ordinal": id,
                "weight": c.weight,
                "multiweight": c.multiweight,
                "parity": c.parity,
                "display": basis.display(id),
            }));
        }
    }
    let dims: Vec<usize> = (1..=args.max_weight).map(|w| basis.weight_count(w)).collect();
    emit(
        out,
        &json!({
            "generators": gens.iter().map(|g| json!({
                "index": g.index, "parity": g.parity, "label": g.label,
            })).collect::<Vec<_>>(),
            "max_weight": args.max_weight,
            "caps": args.caps,
            "dimensions": dims,
            "total": elements.len(),
            "elements": elements,
        }),
    )
}

fn cmd_young(cmd: &YoungCommand, out: &Option<PathBuf>) -> anyhow::Result<()> {
    match cmd {
        YoungCommand::List { n } => {
            let parts = young::partitions(*n);
            emit(
                out,
                &json!({
                    "n": n,
                    "count": parts.len(),
                    "partitions": parts.iter().map(|p| p.parts.clone()).collect::<Vec<_>>(),
                }),
            )
        }
        YoungCommand::Decompose { shape } => {
            let p = Partition::new(shape.clone())?;
            let d = young::strip_decompose(&p)?;
            emit(
                out,
                &json!({
                    "shape": p.parts,
                    "strips": d.strips,
                }),
            )
        }
        YoungCommand::Cases { target } => {
            let target: ProofTarget = (*target).into();
            let cases = young::cases_for(target)?;
            emit(
                out,
                &json!({
                    "target": target,
                    "count": cases.len(),
                    "cases": cases,
                }),
            )
        }
    }
}

fn cmd_relmat(args: &RelmatArgs, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let parities = parse_parities(&args.parities)?;
    anyhow::ensure!(
        parities.len() == args.multiweight.len(),
        "parities and multiweight must have the same length"
    );
    let gens = generators_from(&parities);
    let class: u32 = args.multiweight.iter().sum();
    let alg = SuperAlgebra::new(&gens, class, Some(&args.multiweight))?;
    let rm = engel_core::engel::build_relation_matrix(
        &alg,
        &args.multiweight,
        args.engel_n,
        args.group,
    )?;
    let matrix = rm.to_int_matrix();
    if let Some(path) = &args.matrix_out {
        let file = std::fs::File::create(path)
            .with_context(|| format!("creating {}", path.display()))?;
        matrix.write_text(std::io::BufWriter::new(file))?;
    }
    emit(
        out,
        &json!({
            "parities": parities,
            "multiweight": args.multiweight,
            "engel_n": args.engel_n,
            "group_identity": args.group,
            "columns": rm.columns.iter().map(|&id| alg.display_elem(id)).collect::<Vec<_>>(),
            "rows": matrix.rows(),
            "cols": matrix.cols(),
            "nonzeros": matrix.nnz(),
            "duplicates_dropped": rm.duplicates_dropped,
            "zero_rows_dropped": rm.zero_rows_dropped,
            "matrix_file": args.matrix_out,
        }),
    )
}

fn cmd_certify(args: &CertifyArgs, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let file = std::fs::File::open(&args.matrix)
        .with_context(|| format!("opening {}", args.matrix.display()))?;
    let matrix = IntMatrix::read_text(BufReader::new(file))?;
    let report = match args.method.as_str() {
        "random-det-gcd" => {
            let cert =
                exactla::certify_full_rank_random(&matrix, &args.exclude, args.samples, args.seed)?;
            json!({
                "matrix": args.matrix,
                "rows": matrix.rows(),
                "cols": matrix.cols(),
                "certificate": cert,
            })
        }
        "snf" => {
            let divisors = exactla::smith_normal_form(&matrix, args.snf_budget)?;
            let nonzero = divisors.iter().filter(|d| !num_is_zero(d)).count();
            json!({
                "matrix": args.matrix,
                "rows": matrix.rows(),
                "cols": matrix.cols(),
                "method": "snf",
                "elementary_divisors": divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "full_column_rank_over_q": nonzero == matrix.cols() as usize,
            })
        }
        "rank-mod-p" => {
            let p = args
                .p
                .ok_or_else(|| anyhow::anyhow!("--p is required for rank-mod-p"))?;
            let rank = exactla::rank_mod_p(&matrix, p)?;
            json!({
                "matrix": args.matrix,
                "rows": matrix.rows(),
                "cols": matrix.cols(),
                "method": "rank-mod-p",
                "p": p,
                "rank": rank,
                "full_column_rank": rank == matrix.cols() as usize,
            })
        }
        other => anyhow::bail!("unknown method {:?}", other),
    };
    emit(out, &report)
}

fn num_is_zero(d: &num_bigint::BigInt) -> bool {
    use num_traits::Zero;
    d.is_zero()
}

fn cmd_nilquot(args: &NilquotArgs, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let parities = match (&args.parities, args.gens) {
        (Some(s), _) => parse_parities(s)?,
        (None, Some(k)) => vec![Parity::Even; k],
        (None, None) => anyhow::bail!("one of --gens or --parities is required"),
    };
    let relations = parse_preset(&args.preset)?;
    anyhow::ensure!(!args.p.is_empty(), "at least one characteristic via --p");
    let mut runs = Vec::new();
    for &p in &args.p {
        let started = std::time::Instant::now();
        let pres = Presentation {
            parities: parities.clone(),
            relations,
            p,
            caps: args.caps.clone(),
            max_class: args.max_class,
        };
        let q = pres.run()?;
        runs.push(json!({
            "p": p,
            "class": q.class,
            "terminated": q.terminated,
            "layer_dimensions": q.layer_dims,
            "total_dimension": q.total_dim(),
            "seconds": started.elapsed().as_secs_f64(),
        }));
    }
    emit(
        out,
        &json!({
            "preset": args.preset,
            "parities": parities,
            "max_class": args.max_class,
            "caps": args.caps,
            "runs": runs,
        }),
    )
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit 0
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match &cli.command {
        Command::Basis(args) => cmd_basis(args, &cli.out),
        Command::Young { command } => cmd_young(command, &cli.out),
        Command::Relmat(args) => cmd_relmat(args, &cli.out),
        Command::Certify(args) => cmd_certify(args, &cli.out),
        Command::Nilquot(args) => cmd_nilquot(args, &cli.out),
        Command::Campaign(args) => campaign::run(args, &cli.out),
    };
    match result {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {:#}", e);
            let code = match e.downcast_ref::<engel_core::Error>() {
                Some(engel_core::Error::Budget(_)) => 2,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}
