//! Subcommand drivers: orchestration, parallel grids, atomic output.

use crate::config::{self, ConfigFile};
use crate::CommonArgs;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::Path;
use wittlift::certificate::{Certificate, OracleSection};
use wittlift::dyadic::Quarters;
use wittlift::error::{Error, Result};
use wittlift::gf2x::ramification_breaks;
use wittlift::lift::{verify_z4_lift, LiftProblem};
use wittlift::oracle::{ghost_witt_oracle, greedy_planted_suite, tiny_breaks_oracle};
use wittlift::swan::{degeneration_order2, DegenerationType};

pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::InsufficientPrecision(_) | Error::PrecisionExhausted(_) => 4,
        _ => 3,
    }
}

const DEFAULT_SEED: u64 = 1;
const PLANTED_CASES: usize = 120;

fn oracle_section(ring: &wittlift::dyadic::RingConfig, seed: u64) -> Result<OracleSection> {
    let ghost = ghost_witt_oracle()?;
    let planted = greedy_planted_suite(ring, seed, PLANTED_CASES)?;
    let mut tiny = Vec::new();
    for m1 in [1u64, 3] {
        let t = tiny_breaks_oracle(m1)?;
        tiny.push((m1, t.break_found));
    }
    Ok(OracleSection {
        ghost_constants: ghost,
        greedy_planted_cases: planted
            .into_iter()
            .map(|(q, n)| (Quarters(q).to_string(), n))
            .collect(),
        tiny_breaks: tiny,
    })
}

/// Write bytes atomically: temp file in the target directory, then rename.
fn write_output(out: Option<&Path>, bytes: &str) -> Result<()> {
    match out {
        None => {
            println!("{bytes}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let tmp = match dir {
                Some(d) => d.join(format!(
                    ".{}.tmp.{}",
                    path.file_name().unwrap_or_default().to_string_lossy(),
                    std::process::id()
                )),
                None => std::path::PathBuf::from(format!(
                    ".{}.tmp.{}",
                    path.display(),
                    std::process::id()
                )),
            };
            let mut f = std::fs::File::create(&tmp)
                .map_err(|e| Error::Parse(format!("cannot create {}: {e}", tmp.display())))?;
            f.write_all(bytes.as_bytes())
                .and_then(|_| f.write_all(b"\n"))
                .map_err(|e| Error::Parse(format!("write failed: {e}")))?;
            drop(f);
            std::fs::rename(&tmp, path).map_err(|e| Error::Parse(format!("rename failed: {e}")))?;
            Ok(())
        }
    }
}

pub fn lift(args: &CommonArgs) -> Result<bool> {
    let cfg: ConfigFile = config::load(&args.config)?;
    let ring = config::build_ring(&cfg.ring, args.precision)?;
    let options = cfg.options.unwrap_or_default();
    let seed = args.seed.or(options.seed).unwrap_or(DEFAULT_SEED);
    let want_oracle = args.oracle || options.oracle_checks;

    // resolve the problem list and validate everything up front
    let specs: Vec<_> = if args.grid {
        options
            .grid
            .as_ref()
            .ok_or_else(|| Error::Parse("--grid given but options.grid is missing".into()))?
            .clone()
    } else {
        vec![cfg
            .problem
            .ok_or_else(|| Error::Parse("config has no problem section".into()))?]
    };
    let problems: Vec<LiftProblem> = specs
        .iter()
        .map(|s| config::build_problem(&ring, s))
        .collect::<Result<_>>()?;

    // grid entries are independent; evaluate them in parallel, keeping
    // input order in the output
    let certs: Vec<_> = problems
        .par_iter()
        .map(verify_z4_lift)
        .collect::<Result<Vec<_>>>()?;

    let oracle = if want_oracle {
        Some(oracle_section(&ring, seed)?)
    } else {
        None
    };

    let mut all_good = true;
    for (idx, cert) in certs.iter().enumerate() {
        all_good &= cert.verdict;
        eprintln!(
            "[{idx}] m1 = {}, n2 = {}, regime {}: branch count {} (expected {}), \
             good_reduction = {}",
            cert.problem.m1,
            cert.problem.n2(),
            cert.regime,
            cert.assembled.branch_count,
            cert.branch_data.conductor,
            cert.verdict
        );
    }

    let json = if certs.len() == 1 && !args.grid {
        Certificate::from_lift(&certs[0], oracle).to_json()
    } else {
        let docs: Vec<_> = certs
            .iter()
            .map(|c| Certificate::from_lift(c, oracle.clone()))
            .collect();
        serde_json::to_string_pretty(&docs).expect("certificates serialize")
    };
    write_output(args.out.as_deref(), &json)?;
    Ok(all_good)
}

#[derive(Serialize)]
struct SwanReport {
    schema_version: u32,
    f: String,
    hint: String,
    nu: Option<String>,
    depth: String,
    dsw: Option<String>,
    reduction: Option<String>,
    diagnostics: Vec<String>,
}

pub fn swan(args: &CommonArgs) -> Result<bool> {
    let cfg: ConfigFile = config::load(&args.config)?;
    let ring = config::build_ring(&cfg.ring, args.precision)?;
    let spec = cfg
        .swan
        .ok_or_else(|| Error::Parse("config has no swan section".into()))?;
    let input = config::build_swan(&ring, &spec)?;
    let report = degeneration_order2(&input.f, input.hint.as_ref())?;
    let (dsw, reduction) = match &report.degen {
        DegenerationType::Positive { dsw, .. } => (Some(format!("{dsw}")), None),
        DegenerationType::Zero { reduction } => (None, Some(format!("{reduction}"))),
    };
    let doc = SwanReport {
        schema_version: wittlift::certificate::SCHEMA_VERSION,
        f: format!("{}", input.f),
        hint: format!("{}", report.hint),
        nu: report.nu_quarters.map(|q| Quarters(q).to_string()),
        depth: Quarters(report.degen.depth_quarters()).to_string(),
        dsw,
        reduction,
        diagnostics: report.diagnostics.clone(),
    };
    eprintln!(
        "depth {} ({})",
        Quarters(report.degen.depth_quarters()),
        report.degen
    );
    write_output(
        args.out.as_deref(),
        &serde_json::to_string_pretty(&doc).expect("report serializes"),
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct BreaksReport {
    schema_version: u32,
    reduced: String,
    m1: u64,
    m2: u64,
    conductor: u64,
}

pub fn breaks(args: &CommonArgs) -> Result<bool> {
    let cfg: ConfigFile = config::load(&args.config)?;
    let spec = cfg
        .breaks
        .ok_or_else(|| Error::Parse("config has no breaks section".into()))?;
    let vector = config::build_breaks(cfg.ring.d, &spec)?;
    let (reduced, _) = wittlift::gf2x::reduce_witt(&vector)?;
    let data = ramification_breaks(&reduced)?;
    let doc = BreaksReport {
        schema_version: wittlift::certificate::SCHEMA_VERSION,
        reduced: format!("{reduced}"),
        m1: data.m1,
        m2: data.m2,
        conductor: data.conductor,
    };
    eprintln!(
        "breaks ({}, {}), conductor {}",
        data.m1, data.m2, data.conductor
    );
    write_output(
        args.out.as_deref(),
        &serde_json::to_string_pretty(&doc).expect("report serializes"),
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct OracleReport {
    schema_version: u32,
    seed: u64,
    ghost_constants: Vec<String>,
    greedy_planted_cases: Vec<(String, usize)>,
    tiny_breaks: Vec<(u64, u64)>,
}

pub fn oracle(args: &CommonArgs) -> Result<bool> {
    let cfg: ConfigFile = config::load(&args.config)?;
    let ring = config::build_ring(&cfg.ring, args.precision)?;
    let seed = args
        .seed
        .or(cfg.options.as_ref().and_then(|o| o.seed))
        .unwrap_or(DEFAULT_SEED);
    let section = oracle_section(&ring, seed)?;
    let doc = OracleReport {
        schema_version: wittlift::certificate::SCHEMA_VERSION,
        seed,
        ghost_constants: section.ghost_constants,
        greedy_planted_cases: section.greedy_planted_cases,
        tiny_breaks: section.tiny_breaks,
    };
    eprintln!(
        "ghost constants certified; {} planted cases recovered; tiny breaks agree",
        PLANTED_CASES
    );
    write_output(
        args.out.as_deref(),
        &serde_json::to_string_pretty(&doc).expect("report serializes"),
    )?;
    Ok(true)
}
