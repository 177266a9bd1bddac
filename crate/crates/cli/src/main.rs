use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sseq_core::checks::{self, Config, PageSel};
use sseq_core::par::ExecMode;
use sseq_core::report::{roll_up, CheckResult};
use sseq_core::spectral_sequence::Page;
use sseq_core::Error;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "sseq",
    version,
    about = "Spectral sequence verifiers for THH, TC and K of the Adams summand mod p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification target, an instance id, or `all`.
    Verify {
        id: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Print a page of a spectral sequence instance.
    Tables {
        id: String,
        /// Page index r, or `inf`.
        #[arg(long, default_value = "inf")]
        page: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Print the degree-wise dimensions of a presentation.
    Poincare {
        id: String,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(clap::Args)]
struct Opts {
    #[arg(long, default_value_t = 5)]
    prime: u32,
    /// Total degree window `lo:hi`. Defaults to -2p^2:5p^2.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Cyclic group order exponent for the C_{p^n} targets.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Run every page turn on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Structured,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("window `{s}` is not lo:hi"))?;
    let lo = a
        .trim()
        .parse()
        .map_err(|_| format!("bad window bound `{a}`"))?;
    let hi = b
        .trim()
        .parse()
        .map_err(|_| format!("bad window bound `{b}`"))?;
    Ok((lo, hi))
}

fn config(opts: &Opts) -> Result<Config, String> {
    let window = opts.window.as_deref().map(parse_window).transpose()?;
    let mut cfg = Config::new(opts.prime, window);
    cfg.n = opts.n;
    cfg.mode = if opts.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    };
    Ok(cfg)
}

fn config_json(command: &str, id: &str, cfg: &Config, page: Option<&str>) -> Value {
    json!({
        "command": command,
        "id": id,
        "prime": cfg.p,
        "window": [cfg.lo, cfg.hi],
        "n": cfg.n,
        "page": page,
    })
}

fn document(config: Value, results: Vec<Value>) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "results": results,
    });
    serde_json::to_string_pretty(&doc).expect("json") + "\n"
}

fn result_json(r: &CheckResult) -> Value {
    let mut details = Map::new();
    details.insert("conditional".into(), json!(r.conditional));
    details.insert("items".into(), json!(r.items));
    for (k, v) in &r.details {
        details.insert(k.clone(), json!(v));
    }
    json!({ "id": r.id, "status": r.status, "details": details })
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownId(_)
            | Error::NotPrime(_)
            | Error::NotPrimeValue(_)
            | Error::OutOfRange(_)
            | Error::Unsupported(_)
    )
}

fn error_exit(e: Error) -> ExitCode {
    let code = if usage_error(&e) { 2 } else { 1 };
    fail(e, code)
}

fn fail(msg: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("sseq: {msg}");
    ExitCode::from(code)
}

fn page_label(page: &Page, sel: PageSel) -> String {
    match sel {
        PageSel::Inf => "E^inf".into(),
        PageSel::R(_) => format!("E^{}", page.r),
    }
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Verify { id, opts } => {
            let cfg = match config(&opts) {
                Ok(c) => c,
                Err(e) => return fail(e, 2),
            };
            let results = match checks::verify(&id, &cfg) {
                Ok(r) => r,
                Err(e) => return error_exit(e),
            };
            match opts.format {
                Format::Text => {
                    for r in &results {
                        print!("{}", r.text());
                    }
                }
                Format::Structured => print!(
                    "{}",
                    document(
                        config_json("verify", &id, &cfg, None),
                        results.iter().map(result_json).collect()
                    )
                ),
            }
            ExitCode::from(if roll_up(&results) { 0 } else { 1 })
        }
        Command::Tables { id, page, opts } => {
            let cfg = match config(&opts) {
                Ok(c) => c,
                Err(e) => return fail(e, 2),
            };
            let sel = match PageSel::parse(&page) {
                Ok(s) => s,
                Err(e) => return fail(e, 2),
            };
            if cfg.lo > cfg.hi {
                if let Err(e) = checks::validate(
                    &id,
                    &Config {
                        hi: cfg.lo,
                        ..cfg.clone()
                    },
                ) {
                    return error_exit(e);
                }
                match opts.format {
                    Format::Text => {
                        println!("# {id} {page} p={} window={}:{}", cfg.p, cfg.lo, cfg.hi)
                    }
                    Format::Structured => {
                        let res = json!({ "id": id, "status": "pass", "details": { "cells": [] } });
                        print!(
                            "{}",
                            document(config_json("tables", &id, &cfg, Some(&page)), vec![res])
                        );
                    }
                }
                return ExitCode::SUCCESS;
            }
            let pg = match checks::instance_page(&id, sel, &cfg) {
                Ok(p) => p,
                Err(e) => return error_exit(e),
            };
            let label = page_label(&pg, sel);
            match opts.format {
                Format::Text => {
                    println!("# {id} {label} p={} window={}:{}", cfg.p, cfg.lo, cfg.hi);
                    print!("{}", pg.dump());
                }
                Format::Structured => {
                    let cells: Vec<Value> = pg
                        .ordered_bidegrees()
                        .into_iter()
                        .map(|(s, t)| {
                            let basis: Vec<String> = pg.cells[&(s, t)]
                                .iter()
                                .map(|m| pg.alg.format_monomial(m))
                                .collect();
                            json!({ "s": s, "t": t, "dim": basis.len(), "basis": basis })
                        })
                        .collect();
                    let res = json!({
                        "id": id,
                        "status": "pass",
                        "details": { "page": label, "cells": cells },
                    });
                    print!(
                        "{}",
                        document(config_json("tables", &id, &cfg, Some(&page)), vec![res])
                    );
                }
            }
            ExitCode::SUCCESS
        }
        Command::Poincare { id, opts } => {
            let cfg = match config(&opts) {
                Ok(c) => c,
                Err(e) => return fail(e, 2),
            };
            let series = match checks::series(&id, &cfg) {
                Ok(s) => s,
                Err(e) => return error_exit(e),
            };
            match opts.format {
                Format::Text => {
                    println!("# {id} p={} window={}:{}", cfg.p, cfg.lo, cfg.hi);
                    for (n, d) in series.iter() {
                        println!("{n} {d}");
                    }
                }
                Format::Structured => {
                    let pairs: Vec<Value> = series.iter().map(|(n, d)| json!([n, d])).collect();
                    let res = json!({ "id": id, "status": "pass", "details": { "series": pairs } });
                    print!(
                        "{}",
                        document(config_json("poincare", &id, &cfg, None), vec![res])
                    );
                }
            }
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
