//! Acceptance criteria 1-13, one `PASS`/`FAIL` line each.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qwvd_core::grid::GridGeometry;
use qwvd_core::oracle::{oracle_qft, oracle_qolct, oracle_wvd};
use qwvd_core::qft::{derivative_relative_error, dilation_deviation, natural_frequency_grid, qft_fast, qft_forward, qft_inverse, qft_module_spectrum};
use qwvd_core::qolct::{olct_frequency_grid, qolct_fast, qolct_forward, qolct_inverse, qolct_module_spectrum};
use qwvd_core::quaternion::sqrt_axis_phase;
use qwvd_core::signals::{gaussian, random_quaternion_grid, random_smooth, GaussianGenerator};
use qwvd_core::theorems::{lieb_qlct_ratio, lieb_wvd_functional, poisson_qft_check, poisson_wvd_check, wvd_energy_forms, LatticeTruncation};
use qwvd_core::verify::{run, Suite, VerifyOptions};
use qwvd_core::wvd::{wvd_frequency_grid, wvd_inverse, wvd_qolct_refined, wvd_via_qft};
use qwvd_core::{AxisPair, OffsetParams, PureUnitAxis, Quaternion, Reduction, SampledSignal};

type Outcome = Result<String, String>;

fn p(a: f64, b: f64, c: f64, d: f64, tau: f64, eta: f64) -> OffsetParams {
    OffsetParams::new(a, b, c, d, tau, eta).unwrap()
}

fn chirped() -> [(OffsetParams, OffsetParams); 3] {
    [
        (p(1.0, 1.0, 0.0, 1.0, 0.5, 0.25), p(1.0, 1.0, 0.0, 1.0, 0.5, 0.25)),
        (p(1.0, 0.5, -2.0, 0.0, 0.3, 0.1), p(2.0, 1.5, 0.0, 0.5, -0.2, 0.4)),
        (p(0.5, -1.0, 1.0, 0.0, 0.0, 0.3), p(1.5, 2.0, 0.25, 1.0, 0.1, -0.1)),
    ]
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let geom = GridGeometry::centered(64, 6.0).map_err(err)?;
    let f = gaussian(geom, 1.0, (0.0, 0.0), Quaternion::ONE);
    let axes = AxisPair::default();
    let spec = qft_forward(&f, axes, &natural_frequency_grid(&geom));
    let back = qft_inverse(&spec, axes, &geom);
    let e = back.relative_l2_error(&f).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    check(e < 1e-8 && secs < 5.0, format!("relative L2 error {e:e}, {secs:.3} s"))
}

fn qft_energy_ratio(f: &SampledSignal) -> f64 {
    let fg = natural_frequency_grid(f.geometry());
    qft_module_spectrum(f, AxisPair::default(), &fg).energy() / (4.0 * PI * PI * f.energy())
}

fn c2() -> Outcome {
    let g64 = GridGeometry::centered(64, 6.0).map_err(err)?;
    let mut worst = (qft_energy_ratio(&gaussian(g64, 1.0, (0.0, 0.0), Quaternion::new(1.0, 0.3, -0.2, 0.5))) - 1.0).abs();
    let g48 = GridGeometry::centered(48, 7.0).map_err(err)?;
    for seed in 0..10 {
        worst = worst.max((qft_energy_ratio(&random_smooth(g48, seed)) - 1.0).abs());
    }
    check(worst < 1e-3, format!("max relative deviation {worst:e} over gaussian + 10 random smooth"))
}

fn c3() -> Outcome {
    let time = GridGeometry::centered(64, 6.0).map_err(err)?;
    let freq = GridGeometry::centered(17, 4.0).map_err(err)?;
    let gen = GaussianGenerator::new(Quaternion::new(1.0, -0.5, 0.25, 0.75), (0.1, -0.2), (1.0, 1.0));
    let mut dil: f64 = 0.0;
    for k in [(2.0, 2.0), (1.5, 1.25), (1.0, 2.0)] {
        dil = dil.max(dilation_deviation(&gen, k, &time, &freq).map_err(err)?);
    }
    let fine = GridGeometry::centered(512, 12.0).map_err(err)?;
    let f = gaussian(fine, 2.0, (0.0, 0.0), Quaternion::new(1.0, 0.5, -0.3, 0.2));
    let mut der: f64 = 0.0;
    for order in [(1, 0), (0, 1), (1, 1), (2, 0)] {
        der = der.max(derivative_relative_error(&f, order).map_err(err)?);
    }
    check(dil < 1e-4 && der < 1e-3, format!("dilation max deviation {dil:e}, derivative relative error {der:e}"))
}

fn c4() -> Outcome {
    let geom = GridGeometry::new(10, 9, 0.4, 0.45, -2.0, -1.8).map_err(err)?;
    let fg = GridGeometry::new(7, 8, 0.6, 0.5, -1.8, -2.0).map_err(err)?;
    let fp = OffsetParams::fourier();
    let mut worst: f64 = 0.0;
    let general = AxisPair::new(PureUnitAxis::from_vector(1.0, -2.0, 0.5).map_err(err)?, PureUnitAxis::from_vector(0.0, 1.0, 1.0).map_err(err)?);
    for (seed, axes) in [(1u64, AxisPair::default()), (2, general)] {
        let f = random_quaternion_grid(geom, seed);
        let l = sqrt_axis_phase(axes.left) * (1.0 / (2.0 * PI));
        let r = sqrt_axis_phase(axes.right);
        let expect = oracle_qft(&f, axes, &fg, false).map_err(err)?.map(|q| l * q * r);
        worst = worst.max(qolct_forward(&f, &fp, &fp, axes, &fg).max_abs_diff(&expect));
        worst = worst.max(oracle_qolct(&f, &fp, &fp, axes, &fg, false).map_err(err)?.max_abs_diff(&expect));
    }
    check(worst < 1e-10, format!("max deviation {worst:e}"))
}

fn qolct_energy_ratio(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams) -> f64 {
    let fg = olct_frequency_grid(f.geometry(), p1, p2);
    qolct_module_spectrum(f, p1, p2, AxisPair::default(), &fg).energy() / f.energy()
}

fn c5() -> Outcome {
    let geom = GridGeometry::centered(48, 7.0).map_err(err)?;
    let f = gaussian(geom, 1.0, (0.2, -0.3), Quaternion::new(1.0, 0.5, -0.5, 0.25));
    let fp = OffsetParams::fourier();
    let q = (qolct_energy_ratio(&f, &fp, &fp) - 1.0).abs();
    let c = chirped().iter().map(|(a, b)| (qolct_energy_ratio(&f, a, b) - 1.0).abs()).fold(0.0, f64::max);
    check(q < 1e-3 && c < 1e-2, format!("QFT parameters {q:e}, chirped sets {c:e}"))
}

fn c6() -> Outcome {
    let geom = GridGeometry::centered(48, 7.0).map_err(err)?;
    let f = gaussian(geom, 1.0, (0.2, -0.3), Quaternion::new(1.0, 0.5, -0.5, 0.25));
    let mut worst: f64 = 0.0;
    for (p1, p2) in chirped() {
        let fg = olct_frequency_grid(&geom, &p1, &p2);
        let back = qolct_inverse(&qolct_forward(&f, &p1, &p2, AxisPair::default(), &fg), &p1, &p2, AxisPair::default(), &geom);
        worst = worst.max(back.relative_l2_error(&f).map_err(err)?);
    }
    check(worst < 1e-3, format!("max relative L2 error {worst:e}"))
}

fn random_params(rng: &mut ChaCha8Rng) -> OffsetParams {
    let a = rng.gen_range(0.5..2.0);
    let b = rng.gen_range(0.3..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let c = rng.gen_range(-1.5..1.5);
    OffsetParams::new(a, b, c, (1.0 + b * c) / a, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).unwrap()
}

fn c7() -> Outcome {
    let start = Instant::now();
    let geom = GridGeometry::new(8, 8, 0.5, 0.45, -2.0, -1.8).map_err(err)?;
    let axes = AxisPair::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut dq, mut dl, mut dw): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for seed in 0..50u64 {
        let f = random_quaternion_grid(geom, 2 * seed);
        let g = random_quaternion_grid(geom, 2 * seed + 1);
        let fg = natural_frequency_grid(&geom);
        let oracle = oracle_qft(&f, axes, &fg, false).map_err(err)?;
        dq = dq.max(qft_fast(&f, axes, &fg).map_err(err)?.max_abs_diff(&oracle));
        let (p1, p2) = (random_params(&mut rng), random_params(&mut rng));
        let fg = olct_frequency_grid(&geom, &p1, &p2);
        let oracle = oracle_qolct(&f, &p1, &p2, axes, &fg, false).map_err(err)?;
        dl = dl.max(qolct_fast(&f, &p1, &p2, &fg).map_err(err)?.max_abs_diff(&oracle));
        let fg = wvd_frequency_grid(&geom, &p1, &p2);
        dw = dw.max(wvd_via_qft(&f, &g, &p1, &p2, &fg).map_err(err)?.max_abs_diff(&oracle_wvd(&f, &g, &p1, &p2, axes, &fg, false).map_err(err)?));
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        dq < 1e-9 && dl < 1e-9 && dw < 1e-9 && secs < 60.0,
        format!("qft_fast {dq:e}, qolct_fast {dl:e}, wvd_via_qft {dw:e}, 50 seeds in {secs:.2} s"),
    )
}

fn c8() -> Outcome {
    let geom = GridGeometry::centered(24, 6.0).map_err(err)?;
    let f = gaussian(geom, 1.0, (0.3, -0.2), Quaternion::new(1.0, 0.5, -0.5, 0.2));
    let g = gaussian(geom, 1.2, (0.0, 0.0), Quaternion::ONE);
    let fp = OffsetParams::fourier();
    let mut worst: f64 = 0.0;
    let mut unsquared: f64 = 0.0;
    for (p1, p2) in [(fp, fp), chirped()[0], chirped()[1]] {
        let e = wvd_energy_forms(&f, &g, &p1, &p2, AxisPair::default(), Reduction::Ordered).map_err(err)?;
        worst = worst.max(e.squared_form_deviation());
        unsquared = unsquared.max(e.unsquared_form_deviation());
    }
    check(worst < 0.02, format!("squared form deviation {worst:e}; unsquared form deviates by {unsquared:.4} (report only)"))
}

fn c9() -> Outcome {
    let geom = GridGeometry::centered(16, 5.0).map_err(err)?;
    let f = gaussian(geom, 1.0, (0.3, -0.2), Quaternion::new(0.5, 1.0, 0.0, -0.5));
    let g = gaussian(geom, 1.1, (0.0, 0.1), Quaternion::ONE);
    let axes = AxisPair::default();
    let invert = |p1: &OffsetParams, p2: &OffsetParams| -> Result<f64, String> {
        let fg = wvd_frequency_grid(&geom, p1, p2);
        let w = wvd_qolct_refined(&f, &g, p1, p2, axes, &fg).map_err(err)?;
        wvd_inverse(&w, &g, p1, p2, axes).map_err(err)?.relative_l2_error(&f).map_err(err)
    };
    let fp = OffsetParams::fourier();
    let q = invert(&fp, &fp)?;
    let mut o: f64 = 0.0;
    for (p1, p2) in [chirped()[0], (p(1.0, 1.0, 0.0, 1.0, 0.3, 0.2), fp)] {
        o = o.max(invert(&p1, &p2)?);
    }
    check(q < 1e-3 && o < 1e-2, format!("QFT parameters {q:e}, offset/chirped {o:e}"))
}

fn c10() -> Outcome {
    let opts = VerifyOptions { seeds: 25, deterministic: true, ..Default::default() };
    let rep = run(Suite::Heisenberg, &opts).map_err(err)?;
    let random = rep.records.iter().filter(|r| r.get("context.signal").is_some_and(|s| s.starts_with("random"))).count();
    let shipped = rep.records.iter().filter(|r| r.get("context.signal").is_some_and(|s| !s.starts_with("random"))).count();
    let unsatisfied = rep.records.iter().filter(|r| r.get("satisfied") == Some("false")).count();
    let homogeneity = rep.records.iter().filter(|r| r.name == "heisenberg.homogeneity").all(|r| r.get("pass") == Some("true"));
    check(
        rep.passed() && unsatisfied == 0 && random == 25 * 4 && shipped > 0 && homogeneity,
        format!("{shipped} shipped-generator and {random} random-signal reports, {unsatisfied} unsatisfied, homogeneity ok = {homogeneity}"),
    )
}

fn c11() -> Outcome {
    let k = LatticeTruncation::new(6).map_err(err)?;
    let gen = GaussianGenerator::unit_cyclic();
    let (mut qft_dev, mut wvd_dev, mut tail): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for s in [(0.0, 0.0), (0.3, -0.7)] {
        let (l, r) = poisson_qft_check(&gen, s, k);
        let (l2, r2) = poisson_qft_check(&gen, s, k.doubled());
        qft_dev = qft_dev.max(l.max_abs_diff(r));
        tail = tail.max(l.max_abs_diff(l2)).max(r.max_abs_diff(r2));
    }
    let sets = [(p(1.0, 1.0, 0.0, 1.0, 0.0, 0.0), p(1.0, 1.0, 0.0, 1.0, 0.0, 0.0)), (p(1.0, 1.0, 0.0, 1.0, 0.3, 0.2), p(1.0, 1.0, 0.0, 1.0, 0.0, 0.0))];
    for (p1, p2) in sets {
        let (l, r) = poisson_wvd_check(&gen, &gen, (0.1, -0.1), (0.25, 0.4), &p1, &p2, k).map_err(err)?;
        let (l2, r2) = poisson_wvd_check(&gen, &gen, (0.1, -0.1), (0.25, 0.4), &p1, &p2, k.doubled()).map_err(err)?;
        wvd_dev = wvd_dev.max(l.max_abs_diff(r));
        tail = tail.max(l.max_abs_diff(l2)).max(r.max_abs_diff(r2));
    }
    check(
        qft_dev < 1e-10 && wvd_dev < 1e-6 && tail < 1e-9,
        format!("QFT form {qft_dev:e}, WVD form {wvd_dev:e}, K -> 2K shift {tail:e}"),
    )
}

fn c12() -> Outcome {
    let small = GridGeometry::centered(16, 5.0).map_err(err)?;
    let fp = OffsetParams::fourier();
    let (g, h) = (random_smooth(small, 5), random_smooth(small, 6));
    let mut scale: f64 = 0.0;
    for p_exp in [2.0, 3.0, 4.0] {
        let a = lieb_wvd_functional(&g, &h, &fp, &fp, p_exp).map_err(err)?;
        let b = lieb_wvd_functional(&g.scale(3.0), &h.scale(0.5), &fp, &fp, p_exp).map_err(err)?;
        scale = scale.max((b.c_emp / a.c_emp - 1.0).abs());
    }
    let f = gaussian(GridGeometry::centered(32, 6.0).map_err(err)?, 1.0, (0.0, 0.0), Quaternion::ONE);
    let mut ratios = Vec::new();
    for p_exp in [1.0, 1.5, 2.0] {
        let r = lieb_qlct_ratio(&f, &fp, &fp, p_exp).map_err(err)?;
        ratios.push(format!("p={p_exp}: {:.4}", r.ratio()));
    }
    check(scale < 1e-10 && ratios.len() == 3, format!("scale invariance {scale:e}; ratio report {}", ratios.join(", ")))
}

fn c13() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_qwvd");
    let once = || -> Result<Vec<u8>, String> {
        let out = Command::new(exe).args(["verify", "all", "--deterministic"]).output().map_err(err)?;
        if !out.status.success() {
            return Err(format!("exit status {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
        }
        Ok(out.stdout)
    };
    let (a, b) = (once()?, once()?);
    check(!a.is_empty() && a == b, format!("two runs, {} bytes each, identical = {}", a.len(), a == b))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("QFT round-trip", c1),
        ("QFT Plancherel", c2),
        ("dilation and derivative", c3),
        ("QOLCT reduction to QFT", c4),
        ("QOLCT Plancherel", c5),
        ("QOLCT round-trip", c6),
        ("fast-path equivalence", c7),
        ("WVD energy identity", c8),
        ("WVD inversion", c9),
        ("Heisenberg", c10),
        ("Poisson summation", c11),
        ("Lieb functionals", c12),
        ("determinism", c13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
