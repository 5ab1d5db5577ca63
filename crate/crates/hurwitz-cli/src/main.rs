//! Command-line surface for the Hurwitz (2,3,7) toolkit: admissibility
//! queries, torus fixed-space censuses, witness hunts, and verification.

use clap::{Parser, Subcommand};
use hurwitz::chevgrp::{CtxModule, GroupCtx};
use hurwitz::classdata::{prime_power, GroupFamily};
use hurwitz::rootsys::{torus_fixed_dims, Family, ModuleKind};
use hurwitz::scott::{render_verdict, verdict};
use hurwitz::search::{
    certificate_spec, certify_generation, hunt, plan_hunt, verify_witness, HuntConfig,
    HuntOutcome, SearchError, WitnessStatus,
};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// Exit codes: 0 success/certified, 1 failed verification, 2 usage,
/// 3 refused (not admissible), 10 candidate-only witness, 20 budget
/// exhausted.
const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_REFUSED: u8 = 3;
const EXIT_CANDIDATE: u8 = 10;
const EXIT_EXHAUSTED: u8 = 20;

#[derive(Parser)]
#[command(
    name = "hurwitz",
    about = "Hurwitz (2,3,7) generating-triple toolkit for exceptional groups over GF(q)",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the admissible Hurwitz class triples at q, or the
    /// impossibility verdict with its reason.
    Admissible {
        /// Group family: F4, E6, SE6, 2E6, E7, SE7, E8.
        #[arg(long)]
        family: String,
        /// Field size (a prime power).
        #[arg(long)]
        q: u64,
    },
    /// Exhaustive (d on minimal, d on adjoint) census over the order-m
    /// part of a maximal torus.
    TorusBounds {
        /// Root-system family: F4, E6, E7 or E8.
        #[arg(long)]
        family: String,
        /// Element order to scan (2, 3 or 7).
        #[arg(long)]
        order: u64,
    },
    /// Hunt for a Hurwitz triple witness and certify its generation.
    Hunt {
        /// Group family: A1 (smoke target), F4, E6, SE6, E7, SE7, E8.
        #[arg(long)]
        family: String,
        /// Field size (a prime power).
        #[arg(long)]
        q: u64,
        /// Class-label triple `x,y,z` (e.g. `2A,~A2+A1,7N`); defaults to
        /// the first admissible triple where the enumeration is complete.
        #[arg(long = "type")]
        type_labels: Option<String>,
        /// Master seed; the whole run is a deterministic function of it.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Parallel worker streams.
        #[arg(long, default_value_t = 4)]
        workers: u32,
        /// Attempts per worker per round.
        #[arg(long, default_value_t = 20_000)]
        round: u64,
        /// Rounds before giving up.
        #[arg(long, default_value_t = 64)]
        max_rounds: u64,
        /// Random words tried when certifying generation.
        #[arg(long, default_value_t = 5_000)]
        certify_words: u32,
        /// Witness output path (default `witness-<family>-<q>-seed<seed>.txt`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Group cache directory (overrides HURWITZ_CACHE_DIR).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Re-check every claim in a witness file.
    Verify {
        /// Witness file path.
        path: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Admissible { family, q } => cmd_admissible(&family, q),
        Cmd::TorusBounds { family, order } => cmd_torus_bounds(&family, order),
        Cmd::Hunt {
            family,
            q,
            type_labels,
            seed,
            workers,
            round,
            max_rounds,
            certify_words,
            out,
            cache_dir,
        } => cmd_hunt(HuntArgs {
            family,
            q,
            type_labels,
            seed,
            workers,
            round,
            max_rounds,
            certify_words,
            out,
            cache_dir,
        }),
        Cmd::Verify { path } => cmd_verify(&path),
    };
    ExitCode::from(code)
}

fn cmd_admissible(family: &str, q: u64) -> u8 {
    let Some(gf) = GroupFamily::parse(family) else {
        eprintln!("unknown family {family:?} (expected F4, E6, SE6, 2E6, E7, SE7 or E8)");
        return EXIT_USAGE;
    };
    match verdict(gf, q) {
        Ok(v) => {
            print!("{}", render_verdict(&v));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_USAGE
        }
    }
}

fn cmd_torus_bounds(family: &str, order: u64) -> u8 {
    let fam = match family.to_ascii_uppercase().as_str() {
        "F4" => Family::F4,
        "E6" => Family::E6,
        "E7" => Family::E7,
        "E8" => Family::E8,
        _ => {
            eprintln!("unknown family {family:?} (expected F4, E6, E7 or E8)");
            return EXIT_USAGE;
        }
    };
    if !matches!(order, 2 | 3 | 7) {
        eprintln!("order must be 2, 3 or 7");
        return EXIT_USAGE;
    }
    let include_minimal = fam != Family::E8;
    let t = Instant::now();
    let scan = torus_fixed_dims(fam, order, include_minimal);
    println!(
        "{:?} order-{} torus census: {} elements, {} distinct (d_adjoint, d_minimal) pairs ({:.1}s)",
        fam,
        order,
        scan.total,
        scan.rows.len(),
        t.elapsed().as_secs_f64()
    );
    println!("{:>10} {:>10} {:>14}", "d_minimal", "d_adjoint", "count");
    for row in &scan.rows {
        let dm = row
            .d_minimal
            .map(|d| d.to_string())
            .unwrap_or_else(|| "-".to_string());
        println!("{:>10} {:>10} {:>14}", dm, row.d_adjoint, row.count);
    }
    match scan.min_minimal() {
        Some(m) => println!(
            "minima: d_minimal >= {}, d_adjoint >= {}",
            m,
            scan.min_adjoint()
        ),
        None => println!("minima: d_adjoint >= {}", scan.min_adjoint()),
    }
    EXIT_OK
}

struct HuntArgs {
    family: String,
    q: u64,
    type_labels: Option<String>,
    seed: u64,
    workers: u32,
    round: u64,
    max_rounds: u64,
    certify_words: u32,
    out: Option<PathBuf>,
    cache_dir: Option<PathBuf>,
}

/// The module each family is hunted on: the minimal module where one
/// exists (reduced in characteristics where it is reducible), else the
/// adjoint module.
fn hunt_module(family: &str, q: u64) -> Result<(Family, ModuleKind, bool), String> {
    let p = prime_power(q).map(|(p, _)| p);
    match family.to_ascii_uppercase().as_str() {
        "A1" => Ok((Family::A1, ModuleKind::Adjoint, false)),
        "F4" => Ok((Family::F4, ModuleKind::Minimal, p == Some(3))),
        "E6" | "SE6" => Ok((Family::E6, ModuleKind::Minimal, false)),
        "E7" | "SE7" => Ok((Family::E7, ModuleKind::Minimal, false)),
        "E8" => Ok((Family::E8, ModuleKind::Adjoint, false)),
        other => Err(format!("no matrix group construction for family {other:?}")),
    }
}

fn load_or_build_group(
    family: &str,
    q: u64,
    cache_dir: Option<&PathBuf>,
) -> Result<GroupCtx, String> {
    let (fam, kind, reduce) = hunt_module(family, q)?;
    let ctx_kind = match (kind, reduce) {
        (ModuleKind::Minimal, false) => CtxModule::M,
        (ModuleKind::Minimal, true) => CtxModule::MPrime,
        (ModuleKind::Adjoint, false) => CtxModule::L,
        (ModuleKind::Adjoint, true) => CtxModule::LPrime,
    };
    let cache_path = cache_dir.map(|dir| {
        let kind_tag = ctx_kind.name().replace('\'', "p");
        dir.join(format!("{}-{}-{}.group", fam_tag(fam), q, kind_tag))
    });
    if let Some(path) = &cache_path {
        if let Ok(text) = std::fs::read_to_string(path) {
            match GroupCtx::from_cache_text(&text) {
                Ok(ctx) => {
                    println!("group cache hit: {} (hash {})", path.display(), &ctx.cache_hash()[..16]);
                    return Ok(ctx);
                }
                Err(e) => eprintln!("ignoring stale group cache {}: {e}", path.display()),
            }
        }
    }
    let t = Instant::now();
    let ctx = GroupCtx::build(fam, kind, q).map_err(|e| e.to_string())?;
    let ctx = if reduce { ctx.reduced()? } else { ctx };
    println!(
        "group built: {}({}) on {} dim {} in {:.1}s (hash {})",
        ctx.family,
        ctx.q,
        ctx.kind.name(),
        ctx.dim,
        t.elapsed().as_secs_f64(),
        &ctx.cache_hash()[..16]
    );
    if let Some(path) = &cache_path {
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        match std::fs::write(path, ctx.cache_text()) {
            Ok(()) => println!("group cached: {}", path.display()),
            Err(e) => eprintln!("cannot write group cache {}: {e}", path.display()),
        }
    }
    Ok(ctx)
}

fn fam_tag(fam: Family) -> &'static str {
    match fam {
        Family::A1 => "A1",
        Family::A2 => "A2",
        Family::D4 => "D4",
        Family::G2 => "G2",
        Family::F4 => "F4",
        Family::E6 => "E6",
        Family::E7 => "E7",
        Family::E8 => "E8",
    }
}

fn cmd_hunt(args: HuntArgs) -> u8 {
    // Admissibility is settled before any group is constructed.
    let target = match plan_hunt(&args.family, args.q, args.type_labels.as_deref()) {
        Ok(t) => t,
        Err(SearchError::Refused(msg)) => {
            eprintln!("refused: {msg}");
            return EXIT_REFUSED;
        }
        Err(e) => {
            eprintln!("{e}");
            return EXIT_USAGE;
        }
    };
    println!("target: {}", target.type_line());
    let cache_dir = args
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("HURWITZ_CACHE_DIR").map(PathBuf::from));
    let ctx = match load_or_build_group(&args.family, args.q, cache_dir.as_ref()) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("cannot construct the group: {e}");
            return EXIT_USAGE;
        }
    };
    let cfg = HuntConfig {
        seed: args.seed,
        workers: args.workers,
        round: args.round,
        max_rounds: args.max_rounds,
        sample_retries: 200_000,
        check_y_class: true,
    };
    println!(
        "hunt: seed={} workers={} round={} max_rounds={}",
        cfg.seed, cfg.workers, cfg.round, cfg.max_rounds
    );
    let t = Instant::now();
    let mut witness = match hunt(&ctx, &target, &cfg) {
        Ok(HuntOutcome::Witness(w)) => *w,
        Ok(HuntOutcome::Exhausted { attempts }) => {
            println!(
                "exhausted: no triple within {} attempts in {:.1}s (seed {}); this is a budget report, not a disproof",
                attempts,
                t.elapsed().as_secs_f64(),
                cfg.seed
            );
            return EXIT_EXHAUSTED;
        }
        Err(e) => {
            eprintln!("hunt failed: {e}");
            return EXIT_USAGE;
        }
    };
    println!(
        "triple found: worker={} attempt={} in {:.1}s (seed {})",
        witness.worker,
        witness.attempt,
        t.elapsed().as_secs_f64(),
        witness.seed
    );
    match certificate_spec(&witness.family, witness.q) {
        Some(spec) => {
            let done = certify_generation(&mut witness, &spec, args.certify_words);
            if done {
                println!(
                    "generation certified: orders {:?} all found ({})",
                    spec.orders, spec.note
                );
            } else {
                let have: Vec<u128> = witness.certificates.iter().map(|c| c.0).collect();
                println!(
                    "certification incomplete: need {:?}, found {:?}",
                    spec.orders, have
                );
            }
        }
        None => println!(
            "no generation-forcing order list on file for {}({}); witness stays a candidate",
            witness.family, witness.q
        ),
    }
    let text = witness.to_text();
    // A witness is written only after it survives full verification.
    match verify_witness(&text) {
        Ok(report) if report.all_pass() => {}
        Ok(report) => {
            eprintln!("internal error: produced witness fails verification\n{}", report.render());
            return EXIT_INVALID;
        }
        Err(e) => {
            eprintln!("internal error: produced witness is unreadable: {e}");
            return EXIT_INVALID;
        }
    }
    let out = args.out.clone().unwrap_or_else(|| {
        PathBuf::from(format!(
            "witness-{}-{}-seed{}.txt",
            witness.family.to_ascii_lowercase(),
            witness.q,
            witness.seed
        ))
    });
    if let Err(e) = std::fs::write(&out, &text) {
        eprintln!("cannot write witness {}: {e}", out.display());
        return EXIT_INVALID;
    }
    println!(
        "witness written: {} (status {}, seed {})",
        out.display(),
        witness.status.name(),
        witness.seed
    );
    if witness.status == WitnessStatus::Certified {
        EXIT_OK
    } else {
        EXIT_CANDIDATE
    }
}

fn cmd_verify(path: &PathBuf) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    match verify_witness(&text) {
        Ok(report) => {
            print!("{}", report.render());
            if report.all_pass() {
                EXIT_OK
            } else {
                EXIT_INVALID
            }
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_USAGE
        }
    }
}
