//! The proof campaign: for every reduction case of a target, build the
//! structure table and relation matrix, certify full column rank outside
//! the excluded primes, and aggregate a verdict. One directory per case,
//! named by the parity string and the multiweight; a finished case is
//! recorded in `case.json` and is skipped on resume, so an interrupted
//! campaign can be restarted and yields the same final report.

use anyhow::Context;
use clap::Args;
use engel_core::exactla::{self, RankClaim};
use engel_core::freelie::Parity;
use engel_core::superalg::SuperAlgebra;
use engel_core::young::{cases_for, CaseSpec, ProofTarget};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Args)]
pub struct CampaignArgs {
    /// Proof target.
    #[arg(long, value_enum)]
    target: super::TargetArg,
    /// Primes excluded from the rank claims, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
    exclude: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Determinant samples for the random certificate.
    #[arg(long, default_value_t = 3)]
    samples: u32,
    /// Dense entry budget before Smith normal form is abandoned in favor
    /// of the randomized certificate.
    #[arg(long, default_value_t = 250_000)]
    snf_budget: usize,
    /// Output directory; defaults to $ENGEL_CAMPAIGN_DIR or ./campaign-<target>.
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Worker threads for independent cases.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Only run the first N cases (for smoke tests).
    #[arg(long)]
    limit: Option<usize>,
}

fn parity_string(parities: &[Parity]) -> String {
    parities
        .iter()
        .map(|p| if *p == Parity::Odd { 'o' } else { 'e' })
        .collect()
}

fn case_dir_name(case: &CaseSpec) -> String {
    let mw: Vec<String> = case.target_multiweight.iter().map(u32::to_string).collect();
    format!("{}_{}", parity_string(&case.generator_parities), mw.join("-"))
}

#[derive(Serialize, Deserialize, Clone)]
struct CaseRecord {
    name: String,
    case: CaseSpec,
    rows: u32,
    cols: u32,
    nonzeros: usize,
    method: String,
    /// Nonzero elementary divisors (decimal) when Smith normal form fit
    /// in the budget.
    elementary_divisors: Option<Vec<String>>,
    certificate: Option<exactla::RankCertificate>,
    /// Primes outside the exclusion set at which full column rank is not
    /// established by this record.
    exception_primes: Vec<u64>,
    complete: bool,
    diagnostics: Vec<String>,
    seconds: f64,
}

fn run_case(
    case: &CaseSpec,
    name: &str,
    dir: &Path,
    exclude: &[u64],
    seed: u64,
    samples: u32,
    snf_budget: usize,
    engel_n: u32,
) -> anyhow::Result<CaseRecord> {
    let started = std::time::Instant::now();
    let mut diagnostics = Vec::new();
    let gens = engel_core::freelie::generators(&case.generator_parities);
    let class: u32 = case.target_multiweight.iter().sum();
    let alg = SuperAlgebra::new(&gens, class, Some(&case.target_multiweight))?;
    let rm = engel_core::engel::build_relation_matrix(
        &alg,
        &case.target_multiweight,
        engel_n,
        case.group_identity,
    )?;
    let matrix = rm.to_int_matrix();
    let file = std::fs::File::create(dir.join("matrix.txt"))?;
    matrix.write_text(std::io::BufWriter::new(file))?;

    let mut record = CaseRecord {
        name: name.to_string(),
        case: case.clone(),
        rows: matrix.rows(),
        cols: matrix.cols(),
        nonzeros: matrix.nnz(),
        method: String::new(),
        elementary_divisors: None,
        certificate: None,
        exception_primes: Vec::new(),
        complete: false,
        diagnostics: Vec::new(),
        seconds: 0.0,
    };

    if matrix.cols() == 0 {
        record.method = "empty".into();
        record.complete = true;
        diagnostics.push("component is empty; nothing to kill".into());
    } else if matrix.rows() < matrix.cols() {
        record.method = "none".into();
        diagnostics.push(format!(
            "only {} relation rows for {} columns; full column rank impossible",
            matrix.rows(),
            matrix.cols()
        ));
    } else {
        // escalation: exact Smith normal form while it fits, then the
        // randomized determinant-gcd certificate
        match exactla::smith_normal_form(&matrix, Some(snf_budget)) {
            Ok(divisors) => {
                use num_traits::Zero;
                let nonzero: Vec<&num_bigint::BigInt> =
                    divisors.iter().filter(|d| !d.is_zero()).collect();
                record.method = "snf".into();
                record.elementary_divisors =
                    Some(nonzero.iter().map(|d| d.to_string()).collect());
                if nonzero.len() == matrix.cols() as usize {
                    let mut exceptions = Vec::new();
                    for d in &nonzero {
                        let (factors, rest) = exactla::factor_bounded(d);
                        if !num_traits::One::is_one(&rest) {
                            diagnostics
                                .push(format!("unfactored elementary divisor part {}", rest));
                        }
                        for f in factors {
                            if let Ok(p) = u64::try_from(f.magnitude().clone()) {
                                if !exclude.contains(&p) && !exceptions.contains(&p) {
                                    exceptions.push(p);
                                }
                            }
                        }
                    }
                    exceptions.sort_unstable();
                    record.exception_primes = exceptions;
                    record.complete = true;
                } else {
                    diagnostics.push("rank deficient over the rationals".into());
                }
            }
            Err(engel_core::Error::Budget(msg)) => {
                diagnostics.push(format!("snf abandoned: {}", msg));
                let cert = exactla::certify_full_rank_random(&matrix, exclude, samples, seed)?;
                record.method = "random-det-gcd".into();
                match &cert.claim {
                    RankClaim::FullColumnRankExcluding { exceptions } => {
                        record.exception_primes = exceptions.clone();
                        record.complete = true;
                    }
                    RankClaim::FullColumnRankCoprimeTo { gcd } => {
                        diagnostics.push(format!("gcd not fully factored: {}", gcd));
                        record.complete = true;
                    }
                    RankClaim::Inconclusive => {
                        diagnostics.push("randomized certificate inconclusive".into());
                    }
                }
                record.certificate = Some(cert);
            }
            Err(e) => return Err(e.into()),
        }
    }

    record.diagnostics = diagnostics;
    record.seconds = started.elapsed().as_secs_f64();
    Ok(record)
}

pub fn run(args: &CampaignArgs, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let target: ProofTarget = args.target.into();
    anyhow::ensure!(
        !args.exclude.is_empty(),
        "the exclusion set must not be empty"
    );
    anyhow::ensure!(args.workers >= 1, "workers must be at least 1");
    let dir = args
        .dir
        .clone()
        .or_else(|| std::env::var_os("ENGEL_CAMPAIGN_DIR").map(PathBuf::from))
        .unwrap_or_else(|| {
            PathBuf::from(format!(
                "campaign-{}",
                serde_json::to_value(target).unwrap().as_str().unwrap()
            ))
        });
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let mut cases = cases_for(target)?;
    if let Some(limit) = args.limit {
        cases.truncate(limit);
    }
    let engel_n = 5;

    // partition into already-finished (resume) and pending work
    let mut pending: Vec<(usize, PathBuf)> = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        let cdir = dir.join(case_dir_name(case));
        std::fs::create_dir_all(&cdir)?;
        if !cdir.join("case.json").exists() {
            pending.push((i, cdir));
        }
    }

    let worker = |i: usize, cdir: &Path| -> anyhow::Result<()> {
        let case = &cases[i];
        let name = case_dir_name(case);
        let record = match run_case(
            case,
            &name,
            cdir,
            &args.exclude,
            args.seed,
            args.samples,
            args.snf_budget,
            engel_n,
        ) {
            Ok(r) => r,
            Err(e) => {
                // budget exhaustion marks the case incomplete, the
                // campaign continues
                let is_budget = matches!(
                    e.downcast_ref::<engel_core::Error>(),
                    Some(engel_core::Error::Budget(_))
                );
                if !is_budget {
                    return Err(e);
                }
                CaseRecord {
                    name: name.clone(),
                    case: case.clone(),
                    rows: 0,
                    cols: 0,
                    nonzeros: 0,
                    method: "none".into(),
                    elementary_divisors: None,
                    certificate: None,
                    exception_primes: Vec::new(),
                    complete: false,
                    diagnostics: vec![format!("budget exhausted: {:#}", e)],
                    seconds: 0.0,
                }
            }
        };
        let text = serde_json::to_string_pretty(&record)?;
        std::fs::write(cdir.join("case.json"), text + "\n")?;
        Ok(())
    };

    if args.workers == 1 {
        for (i, cdir) in &pending {
            worker(*i, cdir)?;
        }
    } else {
        let chunks: Vec<Vec<(usize, PathBuf)>> = {
            let mut cs: Vec<Vec<(usize, PathBuf)>> = vec![Vec::new(); args.workers];
            for (k, item) in pending.into_iter().enumerate() {
                cs[k % args.workers].push(item);
            }
            cs
        };
        std::thread::scope(|scope| -> anyhow::Result<()> {
            let mut handles = Vec::new();
            for chunk in &chunks {
                handles.push(scope.spawn(move || -> anyhow::Result<()> {
                    for (i, cdir) in chunk {
                        worker(*i, cdir)?;
                    }
                    Ok(())
                }));
            }
            for h in handles {
                h.join().expect("campaign worker panicked")?;
            }
            Ok(())
        })?;
    }

    // aggregate the final report purely from the stored case records, so a
    // resumed campaign reproduces it byte for byte
    let mut records = Vec::new();
    for case in &cases {
        let path = dir.join(case_dir_name(case)).join("case.json");
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        let record: CaseRecord = serde_json::from_str(&text)?;
        records.push(record);
    }

    let incomplete: Vec<String> = records
        .iter()
        .filter(|r| !r.complete)
        .map(|r| r.name.clone())
        .collect();
    let mut exceptions: Vec<u64> = records
        .iter()
        .flat_map(|r| r.exception_primes.iter().copied())
        .collect();
    exceptions.sort_unstable();
    exceptions.dedup();

    let verdict = if !incomplete.is_empty() {
        json!({ "kind": "incomplete", "cases": incomplete })
    } else if exceptions.is_empty() {
        json!({
            "kind": "complete",
            "statement": format!(
                "all components vanish in characteristic zero and for every prime outside {:?}",
                args.exclude
            ),
        })
    } else {
        json!({
            "kind": "complete-with-exceptions",
            "exception_primes": exceptions,
            "statement": "full column rank holds outside the excluded primes and the listed exceptions; rerun rank-mod-p at each exception",
        })
    };

    let mut report = json!({
        "target": target,
        "exclude": args.exclude,
        "seed": args.seed,
        "samples": args.samples,
        "snf_budget": args.snf_budget,
        "cases": records,
        "verdict": verdict,
    });
    if target == ProofTarget::GroupEngel5 {
        report["assumptions"] = json!([
            "only the symmetrized 5-Engel identity and the interleaved group-derived identity are imposed; further multilinear consequences of the group law are not"
        ]);
    }
    let text = serde_json::to_string_pretty(&report)?;
    std::fs::write(dir.join("report.json"), text.clone() + "\n")?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{}", text),
    }
    Ok(())
}
