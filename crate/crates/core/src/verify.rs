//! Verification suites: every identity and inequality as a named check that
//! either asserts against a tolerance or only reports.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{GridGeometry, Reduction, SampledSignal};
use crate::oracle::{oracle_qft, oracle_qolct, oracle_wvd};
use crate::qft::{derivative_relative_error, dilation_deviation, natural_frequency_grid, qft_fast, qft_forward, qft_inverse, qft_plancherel_ratio, AxisPair, Spectrum};
use crate::qolct::{
    olct_frequency_grid, qolct_fast, qolct_forward, qolct_from_qlct_relation, qolct_inverse, qolct_plancherel_check, OffsetParams,
};
use crate::quaternion::{sqrt_axis_phase, PureUnitAxis, Quaternion};
use crate::report::Record;
use crate::signals::{gaussian, generate, random_quaternion_grid, random_smooth, GaussianGenerator, GeneratorKind, GeneratorParams};
use crate::theorems::{
    heisenberg_qolct, heisenberg_wvd, lieb_qlct_ratio, lieb_wvd_functional, poisson_qft_check, poisson_wvd_check, wvd_energy_forms, LatticeTruncation,
};
use crate::wvd::{wvd_frequency_grid, wvd_inverse, wvd_qolct, wvd_qolct_refined, wvd_via_qft};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Qft,
    Qolct,
    Wvd,
    Heisenberg,
    Poisson,
    Lieb,
    Relation,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = ["all", "qft", "qolct", "wvd", "heisenberg", "poisson", "lieb", "relation"];
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Self::All,
            "qft" => Self::Qft,
            "qolct" => Self::Qolct,
            "wvd" => Self::Wvd,
            "heisenberg" => Self::Heisenberg,
            "poisson" => Self::Poisson,
            "lieb" => Self::Lieb,
            "relation" => Self::Relation,
            other => return Err(Error::Parse(format!("unknown suite `{other}` (expected one of {})", Self::NAMES.join(", ")))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = [Self::All, Self::Qft, Self::Qolct, Self::Wvd, Self::Heisenberg, Self::Poisson, Self::Lieb, Self::Relation]
            .iter()
            .position(|s| s == self)
            .expect("listed");
        f.write_str(Self::NAMES[idx])
    }
}

/// Asserting checks and their default tolerances.
pub const CHECKS: &[(&str, f64)] = &[
    ("qft.round_trip", 1e-8),
    ("qft.plancherel", 1e-3),
    ("qft.dilation", 1e-4),
    ("qft.derivative", 1e-3),
    ("qft.fast", 1e-9),
    ("qolct.reduction", 1e-10),
    ("qolct.plancherel_qft", 1e-3),
    ("qolct.plancherel_chirped", 1e-2),
    ("qolct.round_trip", 1e-3),
    ("qolct.fast", 1e-9),
    ("qolct.degenerate_energy", 1e-9),
    ("wvd.oracle", 1e-10),
    ("wvd.fast", 1e-9),
    ("wvd.energy", 2e-2),
    ("wvd.inverse_qft", 1e-3),
    ("wvd.inverse_chirped", 1e-2),
    ("wvd.auto_real", 1e-6),
    ("heisenberg.homogeneity", 1e-10),
    ("poisson.qft", 1e-10),
    ("poisson.wvd", 1e-6),
    ("poisson.tail", 1e-9),
    ("lieb.scale", 1e-10),
    ("lieb.stability", 2e-2),
    ("relation.zero_offsets", 1e-12),
    ("oracle.qft", 1e-12),
    ("oracle.qolct", 1e-12),
];

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Lattice truncation for the Poisson checks.
    pub k: usize,
    /// Random signals per randomised check.
    pub seeds: usize,
    pub deterministic: bool,
    /// Adds direct comparisons of the separable paths with the brute-force oracles.
    pub use_oracle: bool,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { k: 6, seeds: 10, deterministic: false, use_oracle: false, tolerances: BTreeMap::new() }
    }
}

impl VerifyOptions {
    fn reduction(&self) -> Reduction {
        if self.deterministic {
            Reduction::Ordered
        } else {
            Reduction::Parallel
        }
    }
}

pub fn is_check_id(id: &str) -> bool {
    CHECKS.iter().any(|(c, _)| *c == id)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub records: Vec<Record>,
}

impl VerifyReport {
    /// Every asserting record passed.
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.get("pass") != Some("false"))
    }

    pub fn failures(&self) -> Vec<&Record> {
        self.records.iter().filter(|r| r.get("pass") == Some("false")).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, r) in self.records.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            s.push_str(&r.to_string());
        }
        s
    }
}

struct Runner<'a> {
    opts: &'a VerifyOptions,
    records: Vec<Record>,
}

fn p(a: f64, b: f64, c: f64, d: f64, tau: f64, eta: f64) -> OffsetParams {
    OffsetParams::new(a, b, c, d, tau, eta).expect("unimodular by construction")
}

/// Chirped unimodular parameter sets shared by several checks.
pub fn chirped_sets() -> [(OffsetParams, OffsetParams); 3] {
    [
        (p(1.0, 1.0, 0.0, 1.0, 0.5, 0.25), p(1.0, 1.0, 0.0, 1.0, 0.5, 0.25)),
        (p(1.0, 0.5, -2.0, 0.0, 0.3, 0.1), p(2.0, 1.5, 0.0, 0.5, -0.2, 0.4)),
        (p(0.5, -1.0, 1.0, 0.0, 0.0, 0.3), p(1.5, 2.0, 0.25, 1.0, 0.1, -0.1)),
    ]
}

fn max_dev(a: &Spectrum, b: &Spectrum) -> f64 {
    a.max_abs_diff(b)
}

impl<'a> Runner<'a> {
    fn tol(&self, id: &str) -> f64 {
        self.opts.tolerances.get(id).copied().unwrap_or_else(|| CHECKS.iter().find(|(c, _)| *c == id).expect("registered check").1)
    }

    /// Records `value ≤ tolerance`.
    fn assert_le(&mut self, id: &str, value: f64, context: &[(&str, String)]) {
        let tol = self.tol(id);
        let mut r = Record::new(id);
        for (k, v) in context {
            r.push(format!("context.{k}"), v.clone());
        }
        r.push_f64("value", value);
        r.push_f64("tolerance", tol);
        r.push("assert", "true");
        r.push("pass", (value <= tol).to_string());
        self.records.push(r);
    }

    fn assert_true(&mut self, id: &str, ok: bool, mut rec: Record) {
        rec.name = id.to_string();
        rec.push("assert", "true");
        rec.push("pass", ok.to_string());
        self.records.push(rec);
    }

    fn report(&mut self, mut rec: Record) {
        rec.push("assert", "false");
        self.records.push(rec);
    }

    fn error(&mut self, id: &str, e: Error) {
        let mut r = Record::new(id);
        r.push("error", e.to_string());
        r.push("assert", "true");
        r.push("pass", "false");
        self.records.push(r);
    }

    fn guarded(&mut self, id: &str, f: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = f(self) {
            self.error(id, e);
        }
    }

    fn qft(&mut self) {
        let axes = AxisPair::default();
        let geom = GridGeometry::centered(64, 6.0).expect("valid");
        let f = gaussian(geom, 1.0, (0.0, 0.0), Quaternion::ONE);
        let fg = natural_frequency_grid(&geom);
        let back = qft_inverse(&qft_forward(&f, axes, &fg), axes, &geom);
        let err = back.relative_l2_error(&f).unwrap_or(f64::INFINITY);
        self.assert_le("qft.round_trip", err, &[("signal", "gaussian sigma=1 on [-6,6]^2, 64^2".into())]);

        let mut worst: f64 = (qft_plancherel_ratio(&f, axes) - 1.0).abs();
        let pg = GridGeometry::centered(48, 7.0).expect("valid");
        for seed in 0..self.opts.seeds as u64 {
            worst = worst.max((qft_plancherel_ratio(&random_smooth(pg, seed), axes) - 1.0).abs());
        }
        self.assert_le("qft.plancherel", worst, &[("signals", format!("gaussian + {} random smooth", self.opts.seeds))]);

        self.guarded("qft.dilation", |r| {
            let gen = GaussianGenerator::new(Quaternion::new(1.0, -0.5, 0.25, 0.75), (0.1, -0.2), (1.0, 1.0));
            let dev = dilation_deviation(&gen, (2.0, 2.0), &geom, &GridGeometry::centered(17, 4.0)?)?;
            r.assert_le("qft.dilation", dev, &[("k", "2 2".into())]);
            Ok(())
        });

        self.guarded("qft.derivative", |r| {
            let fine = GridGeometry::centered(512, 12.0)?;
            let f = gaussian(fine, 2.0, (0.0, 0.0), Quaternion::new(1.0, 0.5, -0.3, 0.2));
            for (m, n) in [(1, 0), (0, 1), (1, 1)] {
                let e = derivative_relative_error(&f, (m, n))?;
                r.assert_le("qft.derivative", e, &[("order", format!("{m} {n}"))]);
            }
            Ok(())
        });

        self.guarded("qft.fast", |r| {
            let small = GridGeometry::new(8, 8, 0.5, 0.5, -2.0, -2.0)?;
            let sg = natural_frequency_grid(&small);
            let mut worst: f64 = 0.0;
            for seed in 0..r.opts.seeds.max(1) as u64 {
                let f = random_quaternion_grid(small, seed);
                worst = worst.max(max_dev(&qft_fast(&f, axes, &sg)?, &oracle_qft(&f, axes, &sg, false)?));
            }
            r.assert_le("qft.fast", worst, &[("seeds", r.opts.seeds.max(1).to_string())]);
            Ok(())
        });

        if self.opts.use_oracle {
            self.guarded("oracle.qft", |r| {
                let g = GridGeometry::centered(32, 4.0)?;
                let f = random_smooth(g, 1);
                let general = AxisPair::new(PureUnitAxis::from_vector(1.0, 1.0, 0.0)?, PureUnitAxis::from_vector(0.0, 1.0, -1.0)?);
                let fg = natural_frequency_grid(&g);
                let dev = max_dev(&qft_forward(&f, general, &fg), &oracle_qft(&f, general, &fg, false)?);
                r.assert_le("oracle.qft", dev, &[("n", "32".into())]);
                Ok(())
            });
        }
    }

    fn qolct(&mut self) {
        let axes = AxisPair::default();
        let fp = OffsetParams::fourier();
        self.guarded("qolct.reduction", |r| {
            let small = GridGeometry::new(8, 8, 0.4, 0.35, -1.6, -1.2)?;
            let fg = natural_frequency_grid(&small);
            let general = AxisPair::new(PureUnitAxis::from_vector(0.0, 1.0, 1.0)?, PureUnitAxis::I);
            let mut worst: f64 = 0.0;
            for (seed, ax) in [(0u64, axes), (1, general)] {
                let f = random_quaternion_grid(small, seed);
                let o = qolct_forward(&f, &fp, &fp, ax, &fg);
                let left = sqrt_axis_phase(ax.left) * (0.5 / PI);
                let right = sqrt_axis_phase(ax.right);
                let q = Spectrum::from_signal(oracle_qft(&f, ax, &fg, false)?.map(|v| left * v * right));
                worst = worst.max(max_dev(&o, &q));
            }
            r.assert_le("qolct.reduction", worst, &[]);
            Ok(())
        });

        let geom = GridGeometry::centered(48, 7.0).expect("valid");
        let f = gaussian(geom, 1.0, (0.2, -0.3), Quaternion::new(1.0, 0.5, -0.5, 0.25));
        let (lhs, rhs) = qolct_plancherel_check(&f, &fp, &fp, axes);
        self.assert_le("qolct.plancherel_qft", (lhs / rhs - 1.0).abs(), &[("p", fp.serialize())]);
        for (p1, p2) in chirped_sets() {
            let (lhs, rhs) = qolct_plancherel_check(&f, &p1, &p2, axes);
            self.assert_le("qolct.plancherel_chirped", (lhs / rhs - 1.0).abs(), &[("p1", p1.serialize()), ("p2", p2.serialize())]);
        }
        for (p1, p2) in chirped_sets() {
            let fg = olct_frequency_grid(&geom, &p1, &p2);
            let back = qolct_inverse(&qolct_forward(&f, &p1, &p2, axes, &fg), &p1, &p2, axes, &geom);
            let err = back.relative_l2_error(&f).unwrap_or(f64::INFINITY);
            self.assert_le("qolct.round_trip", err, &[("p1", p1.serialize()), ("p2", p2.serialize())]);
        }

        self.guarded("qolct.fast", |r| {
            let small = GridGeometry::new(8, 8, 0.45, 0.4, -1.8, -1.4)?;
            let sets = chirped_sets();
            let mut worst: f64 = 0.0;
            for seed in 0..r.opts.seeds.max(1) {
                let (p1, p2) = sets[seed % sets.len()];
                let f = random_quaternion_grid(small, seed as u64);
                let fg = olct_frequency_grid(&small, &p1, &p2);
                worst = worst.max(max_dev(&qolct_fast(&f, &p1, &p2, &fg)?, &oracle_qolct(&f, &p1, &p2, axes, &fg, false)?));
            }
            r.assert_le("qolct.fast", worst, &[("seeds", r.opts.seeds.max(1).to_string())]);
            Ok(())
        });

        self.guarded("qolct.degenerate_energy", |r| {
            let deg = p(0.5, 0.0, 1.2, 2.0, 0.25, 0.1);
            let g = GridGeometry::centered(32, 6.0)?;
            let mut delta = SampledSignal::zeros(g);
            delta.set(16, 16, Quaternion::ONE);
            let fg = olct_frequency_grid(&g, &deg, &deg);
            let o = qolct_forward(&delta, &deg, &deg, axes, &fg);
            // |output|² = |d1|·|d2|·|input|² at the mapped sample
            let peak = o.values().iter().fold(0.0_f64, |m, q| m.max(q.norm_sqr()));
            r.assert_le("qolct.degenerate_energy", (peak - deg.d.abs() * deg.d.abs()).abs(), &[("input", "delta".into())]);
            let gauss = gaussian(g, 1.0, (0.3, -0.4), Quaternion::new(0.2, 1.0, 0.5, -0.3));
            let (lhs, rhs) = qolct_plancherel_check(&gauss, &deg, &deg, axes);
            r.assert_le("qolct.degenerate_energy", (lhs / rhs - 1.0).abs(), &[("input", "gaussian".into())]);
            Ok(())
        });

        if self.opts.use_oracle {
            self.guarded("oracle.qolct", |r| {
                let g = GridGeometry::centered(32, 4.0)?;
                let f = random_smooth(g, 2);
                let (p1, p2) = chirped_sets()[1];
                let fg = olct_frequency_grid(&g, &p1, &p2);
                let dev = max_dev(&qolct_forward(&f, &p1, &p2, axes, &fg), &oracle_qolct(&f, &p1, &p2, axes, &fg, false)?);
                r.assert_le("oracle.qolct", dev, &[("n", "32".into())]);
                Ok(())
            });
        }
    }

    fn wvd(&mut self) {
        let axes = AxisPair::default();
        let fp = OffsetParams::fourier();
        self.guarded("wvd.oracle", |r| {
            let small = GridGeometry::new(8, 8, 0.5, 0.45, -2.0, -1.8)?;
            let f = random_quaternion_grid(small, 100);
            let g = random_quaternion_grid(small, 101);
            let chirped = p(1.0, 1.0, 0.0, 1.0, 0.3, 0.2);
            let deg = p(0.5, 0.0, 0.7, 2.0, 0.1, -0.2);
            for (p1, p2) in [(chirped, fp), (deg, chirped), (chirped, deg), (deg, deg)] {
                let fg = wvd_frequency_grid(&small, &p1, &p2);
                let dev = wvd_qolct(&f, &g, &p1, &p2, axes, &fg)?.max_abs_diff(&oracle_wvd(&f, &g, &p1, &p2, axes, &fg, false)?);
                r.assert_le("wvd.oracle", dev, &[("p1", p1.serialize()), ("p2", p2.serialize())]);
            }
            Ok(())
        });

        self.guarded("wvd.fast", |r| {
            let small = GridGeometry::new(8, 8, 0.5, 0.45, -2.0, -1.8)?;
            let sets = chirped_sets();
            let mut worst: f64 = 0.0;
            for seed in 0..r.opts.seeds.max(1) {
                let (p1, p2) = sets[seed % sets.len()];
                let f = random_quaternion_grid(small, 2 * seed as u64);
                let g = random_quaternion_grid(small, 2 * seed as u64 + 1);
                let fg = wvd_frequency_grid(&small, &p1, &p2);
                worst = worst.max(wvd_via_qft(&f, &g, &p1, &p2, &fg)?.max_abs_diff(&oracle_wvd(&f, &g, &p1, &p2, axes, &fg, false)?));
            }
            r.assert_le("wvd.fast", worst, &[("seeds", r.opts.seeds.max(1).to_string())]);
            Ok(())
        });

        self.guarded("wvd.energy", |r| {
            let geom = GridGeometry::centered(24, 6.0)?;
            let f = gaussian(geom, 1.0, (0.3, -0.2), Quaternion::new(1.0, 0.5, -0.5, 0.2));
            let g = gaussian(geom, 1.2, (0.0, 0.0), Quaternion::ONE);
            for (p1, p2) in [(fp, fp), chirped_sets()[0]] {
                let e = wvd_energy_forms(&f, &g, &p1, &p2, axes, r.opts.reduction())?;
                r.assert_le("wvd.energy", e.squared_form_deviation(), &[("p1", p1.serialize()), ("p2", p2.serialize())]);
                let mut rec = Record::new("wvd.energy_unsquared_form");
                rec.push("context.p1", p1.serialize());
                rec.push_f64("norm_w", e.norm);
                rec.push_f64("norm_f_times_norm_g", e.product_of_norms);
                rec.push_f64("energy_f_times_energy_g", e.product_of_energies);
                rec.push_f64("unsquared_form_relative_deviation", e.unsquared_form_deviation());
                r.report(rec);
            }
            Ok(())
        });

        self.guarded("wvd.inverse", |r| {
            let geom = GridGeometry::centered(16, 5.0)?;
            let f = gaussian(geom, 1.0, (0.3, -0.2), Quaternion::new(0.5, 1.0, 0.0, -0.5));
            let g = gaussian(geom, 1.1, (0.0, 0.1), Quaternion::ONE);
            let cases = [("wvd.inverse_qft", fp, fp), ("wvd.inverse_chirped", p(1.0, 1.0, 0.0, 1.0, 0.3, 0.2), p(1.0, 1.0, 0.0, 1.0, 0.3, 0.2))];
            for (id, p1, p2) in cases {
                let fg = wvd_frequency_grid(&geom, &p1, &p2);
                let w = wvd_qolct_refined(&f, &g, &p1, &p2, axes, &fg)?;
                let back = wvd_inverse(&w, &g, &p1, &p2, axes)?;
                r.assert_le(id, back.relative_l2_error(&f)?, &[("p1", p1.serialize())]);
            }
            Ok(())
        });

        self.guarded("wvd.auto_real", |r| {
            let geom = GridGeometry::centered(16, 5.0)?;
            let f = gaussian(geom, 1.0, (0.0, 0.0), Quaternion::ONE);
            let fg = wvd_frequency_grid(&geom, &fp, &fp);
            let w = wvd_qolct(&f, &f, &fp, &fp, axes, &fg)?;
            let left = sqrt_axis_phase(PureUnitAxis::I).inverse()?;
            let right = sqrt_axis_phase(PureUnitAxis::J).inverse()?;
            let (mut sc, mut vec) = (0.0, 0.0);
            for q in w.values() {
                let v = left * *q * right;
                sc += v.scalar().powi(2);
                vec += v.vector().norm_sqr();
            }
            r.assert_le("wvd.auto_real", (vec / sc).sqrt(), &[("signal", "even real gaussian".into())]);
            Ok(())
        });
    }

    fn heisenberg(&mut self) {
        let axes = AxisPair::default();
        let fp = OffsetParams::fourier();
        let chirped = p(1.0, 1.0, 0.0, 1.0, 0.2, 0.1);
        let geom = GridGeometry::centered(32, 6.0).expect("valid");
        let shipped = [GeneratorKind::Gaussian, GeneratorKind::ShiftedGaussian, GeneratorKind::Chirp];
        let params = GeneratorParams { center: (0.5, -0.4), rate: 0.3, ..Default::default() };
        for kind in shipped {
            let f = match generate(kind, &params, geom) {
                Ok(f) => f,
                Err(e) => return self.error("heisenberg.generator", e),
            };
            for (p1, p2) in [(fp, fp), (chirped, chirped)] {
                for k in [1, 2] {
                    self.inequality("heisenberg.qolct", heisenberg_qolct(&f, &p1, &p2, axes, k), &kind.to_string());
                    self.inequality("heisenberg.wvd", heisenberg_wvd(&f, &f, &p1, &p2, axes, k), &kind.to_string());
                }
            }
        }
        let rg = GridGeometry::centered(24, 6.0).expect("valid");
        for seed in 0..self.opts.seeds as u64 {
            let f = random_smooth(rg, seed);
            let g = random_smooth(rg, seed + 1000);
            for k in [1, 2] {
                self.inequality("heisenberg.qolct", heisenberg_qolct(&f, &fp, &fp, axes, k), &format!("random seed {seed}"));
                self.inequality("heisenberg.wvd", heisenberg_wvd(&f, &g, &fp, &fp, axes, k), &format!("random seed {seed}"));
            }
        }

        self.guarded("heisenberg.homogeneity", |r| {
            let f = random_smooth(rg, 77);
            let g = random_smooth(rg, 78);
            let a = heisenberg_qolct(&f, &chirped, &fp, axes, 1)?;
            let b = heisenberg_qolct(&f.scale(2.0), &chirped, &fp, axes, 1)?;
            let dev_q = ((b.lhs / a.lhs) / 16.0 - 1.0).abs().max(((b.rhs / a.rhs) / 16.0 - 1.0).abs());
            r.assert_le("heisenberg.homogeneity", dev_q, &[("form", "qolct".into())]);
            let a = heisenberg_wvd(&f, &g, &fp, &fp, axes, 2)?;
            let b = heisenberg_wvd(&f.scale(2.0), &g, &fp, &fp, axes, 2)?;
            let c = heisenberg_wvd(&f, &g.scale(2.0), &fp, &fp, axes, 2)?;
            let dev_w = [b.lhs / a.lhs, b.rhs / a.rhs, c.lhs / a.lhs, c.rhs / a.rhs].iter().fold(0.0_f64, |m, x| m.max((x / 16.0 - 1.0).abs()));
            r.assert_le("heisenberg.homogeneity", dev_w, &[("form", "wvd".into())]);
            Ok(())
        });
    }

    fn inequality(&mut self, id: &str, report: Result<crate::theorems::InequalityReport>, signal: &str) {
        match report {
            Ok(rep) => {
                let ok = rep.satisfied;
                let mut rec = rep.to_record();
                rec.fields.insert(0, ("context.signal".into(), signal.to_string()));
                self.assert_true(id, ok, rec);
            }
            Err(e) => self.error(id, e),
        }
    }

    fn poisson(&mut self) {
        let trunc = match LatticeTruncation::new(self.opts.k) {
            Ok(t) => t,
            Err(e) => return self.error("poisson", e),
        };
        let gen = GaussianGenerator::unit_cyclic();
        for s in [(0.0, 0.0), (0.5, 0.5)] {
            let (l, r) = poisson_qft_check(&gen, s, trunc);
            let (l2, r2) = poisson_qft_check(&gen, s, trunc.doubled());
            let ctx = [("s", format!("{:?} {:?}", s.0, s.1)), ("K", trunc.k().to_string())];
            self.assert_le("poisson.qft", l.max_abs_diff(r), &ctx);
            self.assert_le("poisson.tail", l.max_abs_diff(l2).max(r.max_abs_diff(r2)), &ctx);
        }
        let base = p(1.0, 1.0, 0.0, 1.0, 0.0, 0.0);
        let off = p(1.0, 1.0, 0.0, 1.0, 0.3, 0.2);
        for (p1, p2, t, s) in [(base, base, (0.0, 0.0), (0.0, 0.0)), (off, base, (0.1, -0.1), (0.25, 0.4))] {
            let ctx = [("p1", p1.serialize()), ("p2", p2.serialize()), ("K", trunc.k().to_string())];
            match (poisson_wvd_check(&gen, &gen, t, s, &p1, &p2, trunc), poisson_wvd_check(&gen, &gen, t, s, &p1, &p2, trunc.doubled())) {
                (Ok((l, r)), Ok((l2, r2))) => {
                    self.assert_le("poisson.wvd", l.max_abs_diff(r), &ctx);
                    self.assert_le("poisson.tail", l.max_abs_diff(l2).max(r.max_abs_diff(r2)), &ctx);
                }
                (Err(e), _) | (_, Err(e)) => self.error("poisson.wvd", e),
            }
        }
    }

    fn lieb(&mut self) {
        let fp = OffsetParams::fourier();
        let geom = GridGeometry::centered(32, 6.0).expect("valid");
        let f = gaussian(geom, 1.0, (0.0, 0.0), Quaternion::ONE);
        for p_exp in [1.0, 1.5, 2.0] {
            match lieb_qlct_ratio(&f, &fp, &fp, p_exp) {
                Ok(rep) => self.report(rep.to_record()),
                Err(e) => self.error("lieb_qlct", e),
            }
        }
        self.guarded("lieb.wvd", |r| {
            let small = GridGeometry::centered(16, 5.0)?;
            let g = random_smooth(small, 5);
            let h = random_smooth(small, 6);
            for p_exp in [2.0, 4.0] {
                let a = lieb_wvd_functional(&g, &h, &fp, &fp, p_exp)?;
                let b = lieb_wvd_functional(&g.scale(2.0), &h, &fp, &fp, p_exp)?;
                let mut rec = a.to_record();
                rec.push("finite", a.c_emp.is_finite().to_string());
                r.assert_true("lieb.finite", a.c_emp.is_finite() && a.c_emp > 0.0, rec);
                r.assert_le("lieb.scale", (b.c_emp / a.c_emp - 1.0).abs(), &[("p", format!("{p_exp:?}"))]);
            }
            let mut consts = Vec::new();
            for sigma in [0.8, 1.0, 1.25] {
                let g = gaussian(small, sigma, (0.0, 0.0), Quaternion::ONE);
                let rep = lieb_wvd_functional(&g, &g, &fp, &fp, 2.0)?;
                r.report(rep.to_record());
                consts.push(rep.c_emp);
            }
            let lo = consts.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = consts.iter().copied().fold(0.0, f64::max);
            r.assert_le("lieb.stability", hi / lo - 1.0, &[("family", "gaussian widths 0.8 1.0 1.25".into())]);
            Ok(())
        });
    }

    fn relation(&mut self) {
        let axes = AxisPair::default();
        let geom = GridGeometry::centered(16, 4.0).expect("valid");
        let f = random_smooth(geom, 3);
        let zero = p(1.0, 1.0, 0.0, 1.0, 0.0, 0.0);
        let fg = olct_frequency_grid(&geom, &zero, &zero);
        let cases = [(zero, zero), (p(1.0, 1.0, 0.0, 1.0, 0.5, 0.0), zero), chirped_sets()[1]];
        for (i, (p1, p2)) in cases.into_iter().enumerate() {
            match qolct_from_qlct_relation(&f, &p1, &p2, axes, &fg, (0.0, 0.0)) {
                Ok(rep) => {
                    let mut rec = Record::new("relation");
                    rec.push("context.p1", p1.serialize());
                    rec.push("context.p2", p2.serialize());
                    rec.push("context.t", "0.0 0.0");
                    rec.push_f64("literal_max_deviation", rep.literal_max_deviation);
                    rec.push_f64("modulated_max_deviation", rep.modulated_max_deviation);
                    rec.push_f64("max_modulus", rep.max_modulus);
                    if i == 0 {
                        let dev = rep.literal_max_deviation.max(rep.modulated_max_deviation);
                        let ok = dev < self.tol("relation.zero_offsets");
                        rec.push_f64("tolerance", self.tol("relation.zero_offsets"));
                        self.assert_true("relation.zero_offsets", ok, rec);
                    } else {
                        self.report(rec);
                    }
                }
                Err(e) => self.error("relation", e),
            }
        }
    }
}

/// Runs a suite; never fails on a check, only on invalid options.
pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    for id in opts.tolerances.keys() {
        if !is_check_id(id) {
            return Err(Error::Parse(format!("unknown check `{id}` in tolerance override")));
        }
    }
    let mut r = Runner { opts, records: Vec::new() };
    let all = suite == Suite::All;
    if all || suite == Suite::Qft {
        r.qft();
    }
    if all || suite == Suite::Qolct {
        r.qolct();
    }
    if all || suite == Suite::Wvd {
        r.wvd();
    }
    if all || suite == Suite::Heisenberg {
        r.heisenberg();
    }
    if all || suite == Suite::Poisson {
        r.poisson();
    }
    if all || suite == Suite::Lieb {
        r.lieb();
    }
    if all || suite == Suite::Relation {
        r.relation();
    }
    Ok(VerifyReport { records: r.records })
}
