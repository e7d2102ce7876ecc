use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use qwvd_core::grid::GridGeometry;
use qwvd_core::io::{export_heatmap, export_image, export_wvd_slices, ingest_image, load_qgrid, save_qgrid, GridKind};
use qwvd_core::oracle::oracle_qolct;
use qwvd_core::qolct::{olct_frequency_grid, qolct_fast, qolct_forward, qolct_inverse};
use qwvd_core::signals::{generate, random_quaternion_grid, GeneratorParams};
use qwvd_core::verify::{run, VerifyOptions};
use qwvd_core::wvd::{wvd_frequency_grid, wvd_qolct, wvd_qolct_refined, wvd_via_qft};
use qwvd_core::{AxisPair, SampledSignal, Spectrum};

use crate::config::{Command, JobConfig};

/// Largest bench size; the direct sum is O(n⁴) per transform.
pub const BENCH_MAX: usize = 32;

pub fn execute(cfg: &JobConfig) -> Result<bool> {
    match cfg.command {
        Command::Generate => generate_job(cfg).map(|_| true),
        Command::Transform => transform_job(cfg).map(|_| true),
        Command::Wvd => wvd_job(cfg).map(|_| true),
        Command::Verify => verify_job(cfg),
        Command::Bench => bench_job(cfg).map(|_| true),
    }
}

fn is_pnm(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("ppm" | "pnm"))
}

fn load_time_signal(path: &Path) -> Result<SampledSignal> {
    if is_pnm(path) {
        return ingest_image(path).with_context(|| format!("reading image {}", path.display()));
    }
    let (kind, s) = load_qgrid(path).with_context(|| format!("reading {}", path.display()))?;
    ensure!(kind == GridKind::Time, "{} holds a frequency grid, expected a time grid", path.display());
    Ok(s)
}

fn axes(cfg: &JobConfig) -> AxisPair {
    AxisPair::new(cfg.left_axis, cfg.right_axis)
}

fn required<'a>(p: &'a Option<std::path::PathBuf>, what: &str) -> Result<&'a Path> {
    p.as_deref().with_context(|| format!("missing `{what}`"))
}

fn heatmap(cfg: &JobConfig, grid: &SampledSignal) -> Result<()> {
    if let Some(path) = &cfg.heatmap {
        export_heatmap(grid, path, cfg.heatmap_mode, cfg.heatmap_format)?;
    }
    Ok(())
}

fn generate_job(cfg: &JobConfig) -> Result<()> {
    let out = required(&cfg.output, "output")?;
    let geom = GridGeometry::centered(cfg.n, cfg.extent)?;
    let params = GeneratorParams { sigma: cfg.sigma, center: cfg.center, rate: cfg.rate, amplitude: cfg.amplitude };
    let f = generate(cfg.kind, &params, geom)?;
    if is_pnm(out) {
        export_image(&f, out)?;
    } else {
        save_qgrid(out, &f, GridKind::Time)?;
    }
    heatmap(cfg, &f)
}

fn transform_job(cfg: &JobConfig) -> Result<()> {
    let input = required(&cfg.input, "input")?;
    let out = required(&cfg.output, "output")?;
    let ax = axes(cfg);
    let result = if cfg.inverse {
        let (kind, s) = load_qgrid(input)?;
        ensure!(kind == GridKind::Frequency, "inverse transform expects a QGRID-FREQ input");
        let time = GridGeometry::centered(cfg.n, cfg.extent)?;
        let f = qolct_inverse(&Spectrum::from_signal(s), &cfg.p1, &cfg.p2, ax, &time);
        save_qgrid(out, &f, GridKind::Time)?;
        f
    } else {
        let f = load_time_signal(input)?;
        let fg = olct_frequency_grid(f.geometry(), &cfg.p1, &cfg.p2);
        let spec = if cfg.fast {
            ensure!(ax.is_ij(), "the fast path needs axes i and j");
            qolct_fast(&f, &cfg.p1, &cfg.p2, &fg)?
        } else {
            qolct_forward(&f, &cfg.p1, &cfg.p2, ax, &fg)
        };
        save_qgrid(out, spec.as_signal(), GridKind::Frequency)?;
        spec.into_signal()
    };
    heatmap(cfg, &result)
}

fn wvd_job(cfg: &JobConfig) -> Result<()> {
    let f = load_time_signal(required(&cfg.input, "input")?)?;
    let g = match &cfg.window {
        Some(p) => load_time_signal(p)?,
        None => f.clone(),
    };
    let out = required(&cfg.output, "output")?;
    let ax = axes(cfg);
    let fg = wvd_frequency_grid(f.geometry(), &cfg.p1, &cfg.p2);
    let w = if cfg.refined {
        wvd_qolct_refined(&f, &g, &cfg.p1, &cfg.p2, ax, &fg)?
    } else if cfg.fast {
        ensure!(ax.is_ij(), "the fast path needs axes i and j");
        wvd_via_qft(&f, &g, &cfg.p1, &cfg.p2, &fg)?
    } else {
        wvd_qolct(&f, &g, &cfg.p1, &cfg.p2, ax, &fg)?
    };
    export_wvd_slices(&w, out)?;
    let t = w.time();
    heatmap(cfg, w.slice(t.n1 / 2, t.n2 / 2).as_signal())
}

fn verify_job(cfg: &JobConfig) -> Result<bool> {
    let opts = VerifyOptions {
        k: cfg.k,
        seeds: cfg.seeds,
        deterministic: cfg.deterministic,
        use_oracle: cfg.use_oracle,
        tolerances: cfg.tolerances.clone(),
    };
    let report = run(cfg.suite, &opts)?;
    let text = report.to_text();
    if let Some(path) = &cfg.output {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    } else {
        print!("{text}");
    }
    let failures = report.failures();
    for r in &failures {
        eprintln!("FAIL {}", r.name);
    }
    eprintln!("verify {}: {} records, {} failed", cfg.suite, report.records.len(), failures.len());
    Ok(failures.is_empty())
}

/// One CSV row per size: direct-sum and fast-path QOLCT timings on a random
/// `n × n` signal and their largest absolute disagreement.
pub fn bench_table(cfg: &JobConfig) -> Result<String> {
    let mut csv = String::from("size,direct_seconds,fast_seconds,max_deviation\n");
    for &n in &cfg.sizes {
        if n == 0 || n > BENCH_MAX {
            bail!("bench size {n} outside 1..={BENCH_MAX}");
        }
        let geom = GridGeometry::centered(n, cfg.extent)?;
        let f = random_quaternion_grid(geom, n as u64);
        let fg = olct_frequency_grid(&geom, &cfg.p1, &cfg.p2);
        let t0 = Instant::now();
        let direct = oracle_qolct(&f, &cfg.p1, &cfg.p2, AxisPair::default(), &fg, false)?;
        let direct_s = t0.elapsed().as_secs_f64();
        let t1 = Instant::now();
        let fast = qolct_fast(&f, &cfg.p1, &cfg.p2, &fg)?;
        let fast_s = t1.elapsed().as_secs_f64();
        writeln!(csv, "{n},{direct_s:.6e},{fast_s:.6e},{:e}", direct.max_abs_diff(&fast)).expect("string write");
    }
    Ok(csv)
}

fn bench_job(cfg: &JobConfig) -> Result<()> {
    let csv = bench_table(cfg)?;
    match &cfg.output {
        Some(path) => fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_bench_is_header_only() {
        let mut cfg = JobConfig::new(Command::Bench);
        cfg.sizes.clear();
        assert_eq!(bench_table(&cfg).unwrap().lines().count(), 1);
    }

    #[test]
    fn bench_size_eight_agrees() {
        let mut cfg = JobConfig::new(Command::Bench);
        cfg.sizes = vec![8];
        cfg.p1 = qwvd_core::OffsetParams::new(1.0, 1.0, 0.0, 1.0, 0.5, 0.25).unwrap();
        let table = bench_table(&cfg).unwrap();
        let row = table.lines().nth(1).unwrap();
        let dev: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(dev < 1e-9, "{row}");
    }

    #[test]
    fn bench_rejects_oversized() {
        let mut cfg = JobConfig::new(Command::Bench);
        cfg.sizes = vec![64];
        assert!(bench_table(&cfg).is_err());
    }
}
