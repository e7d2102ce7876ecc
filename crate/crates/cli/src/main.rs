//! `qwvd`: generate signals, run transforms and WVDs, verify identities, bench.

mod config;
mod jobs;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{Command, JobConfig};

#[derive(Parser, Debug)]
#[command(name = "qwvd", version, about = "Quaternion QFT / QOLCT / WVD toolkit")]
struct Cli {
    /// Flat `key = value` job file; flags and `--set` override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Extra `key=value` override, applied last. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Ordered reductions; output is byte-reproducible.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Print the resolved job file and exit without running it.
    #[arg(long, global = true)]
    dump_config: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug, Default)]
struct TransformArgs {
    /// `a b c d tau eta` for the first axis.
    #[arg(long, allow_hyphen_values = true)]
    p1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p2: Option<String>,
    /// Left axis: `i`, `j`, `k` or `x y z`.
    #[arg(long, allow_hyphen_values = true)]
    left: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    right: Option<String>,
    /// FFT path (axes i, j only).
    #[arg(long)]
    fast: bool,
    /// Heatmap of the result (PGM with `.meta` sidecar, or CSV).
    #[arg(long)]
    heatmap: Option<String>,
    /// `modulus` or a component 0..3.
    #[arg(long)]
    heatmap_mode: Option<String>,
    /// `pgm` or `csv`.
    #[arg(long)]
    heatmap_format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write a test signal as QGRID (or PPM when the output ends in .ppm).
    Generate {
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        extent: Option<String>,
        #[arg(long)]
        sigma: Option<String>,
        /// `t1 t2`.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rate: Option<String>,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// QOLCT of a QGRID or PPM input; `--inverse` maps a QGRID-FREQ back.
    Transform {
        input: Option<String>,
        #[arg(short, long)]
        output: Option<String>,
        #[arg(long)]
        inverse: bool,
        /// Time grid size for `--inverse`.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        extent: Option<String>,
        #[command(flatten)]
        t: TransformArgs,
    },
    /// WVD-QOLCT; writes one QGRID-FREQ per time slice plus a manifest.
    Wvd {
        input: Option<String>,
        /// Window signal; defaults to the input (auto-WVD).
        #[arg(long)]
        window: Option<String>,
        /// Output directory.
        #[arg(short, long)]
        output: Option<String>,
        /// Half-step time grid (needed for inversion).
        #[arg(long)]
        refined: bool,
        #[command(flatten)]
        t: TransformArgs,
    },
    /// Run a verification suite; exit status 1 if any asserted check fails.
    Verify {
        /// all, qft, qolct, wvd, heisenberg, poisson, lieb or relation.
        suite: Option<String>,
        /// Lattice truncation for the Poisson checks.
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long)]
        use_oracle: bool,
        /// Tolerance override `check=value`. Repeatable.
        #[arg(long = "tol", value_name = "CHECK=VALUE")]
        tol: Vec<String>,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Direct sum vs fast path timing table (CSV).
    Bench {
        /// Comma-separated sizes; empty gives an empty table.
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p2: Option<String>,
        #[arg(short, long)]
        output: Option<String>,
    },
}

fn split_set(s: &str) -> Result<(String, String)> {
    let (k, v) = s.split_once('=').with_context(|| format!("`{s}` is not key=value"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn build_config(cli: Cli) -> Result<JobConfig> {
    let mut pairs = match &cli.config {
        Some(p) => JobConfig::parse_text(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => Vec::new(),
    };
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            pairs.push((k.to_string(), v));
        }
    };
    let flag = |b: bool| b.then(|| "true".to_string());
    let transform = |put: &mut dyn FnMut(&str, Option<String>), t: TransformArgs| {
        put("p1", t.p1);
        put("p2", t.p2);
        put("left_axis", t.left);
        put("right_axis", t.right);
        put("fast", flag(t.fast));
        put("heatmap", t.heatmap);
        put("heatmap_mode", t.heatmap_mode);
        put("heatmap_format", t.heatmap_format);
    };
    let command = match cli.command {
        Cmd::Generate { kind, n, extent, sigma, center, rate, output } => {
            put("kind", kind);
            put("n", n);
            put("extent", extent);
            put("sigma", sigma);
            put("center", center);
            put("rate", rate);
            put("output", output);
            Command::Generate
        }
        Cmd::Transform { input, output, inverse, n, extent, t } => {
            put("input", input);
            put("output", output);
            put("inverse", flag(inverse));
            put("n", n);
            put("extent", extent);
            transform(&mut put, t);
            Command::Transform
        }
        Cmd::Wvd { input, window, output, refined, t } => {
            put("input", input);
            put("window", window);
            put("output", output);
            put("refined", flag(refined));
            transform(&mut put, t);
            Command::Wvd
        }
        Cmd::Verify { suite, k, seeds, use_oracle, tol, output } => {
            put("suite", suite);
            put("k", k);
            put("seeds", seeds);
            put("use_oracle", flag(use_oracle));
            put("output", output);
            for t in tol {
                let (id, v) = split_set(&t)?;
                put(&format!("tol.{id}"), Some(v));
            }
            Command::Verify
        }
        Cmd::Bench { sizes, p1, p2, output } => {
            put("sizes", sizes);
            put("p1", p1);
            put("p2", p2);
            put("output", output);
            Command::Bench
        }
    };
    put("deterministic", flag(cli.deterministic));
    put("command", Some(command.to_string()));
    for s in &cli.sets {
        pairs.push(split_set(s)?);
    }
    let cfg = JobConfig::from_pairs(&pairs, Some(command))?;
    anyhow::ensure!(cfg.command == command, "`--set command=...` cannot change the subcommand");
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let dump = cli.dump_config;
    let run = build_config(cli).and_then(|cfg| {
        if dump {
            print!("{}", cfg.serialize());
            return Ok(true);
        }
        jobs::execute(&cfg)
    });
    match run {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
