//! Numerical functionals for the uncertainty, summation and `L^p` results:
//! Heisenberg (QOLCT and WVD forms), Poisson summation (QFT and WVD forms)
//! and the Lieb-type bounds.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{correlation_product_half, lp_norm, real_component, SampledSignal};
use crate::qft::AxisPair;
use crate::qolct::{kernel_left, kernel_right, olct_frequency_grid, qlct_forward, qolct_module_spectrum, OffsetParams};
use crate::quaternion::{axis_exp, PureUnitAxis, Quaternion};
use crate::report::Record;
use crate::signals::GaussianGenerator;
use crate::wvd::{wvd_frequency_grid, wvd_module_energy, wvd_slice_half};
use crate::grid::Reduction;

/// Relative slack below which a negative gap still counts as satisfied.
pub const REPORT_TOL: f64 = 1e-9;

/// `lhs ≥ rhs` checked with slack `REPORT_TOL·max(|lhs|, |rhs|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub satisfied: bool,
    pub context: Vec<(String, String)>,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, context: Vec<(String, String)>) -> Self {
        let gap = lhs - rhs;
        let satisfied = gap >= -REPORT_TOL * lhs.abs().max(rhs.abs());
        Self { name: name.into(), lhs, rhs, gap, satisfied, context }
    }

    /// `lhs ≤ rhs` form (upper bounds): the gap is `rhs - lhs`.
    pub fn upper_bound(name: impl Into<String>, lhs: f64, rhs: f64, context: Vec<(String, String)>) -> Self {
        let mut r = Self::new(name, rhs, lhs, context);
        std::mem::swap(&mut r.lhs, &mut r.rhs);
        r
    }

    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }

    pub fn to_record(&self) -> Record {
        let mut rec = Record::new(&self.name);
        for (k, v) in &self.context {
            rec.push(format!("context.{k}"), v.clone());
        }
        rec.push_f64("lhs", self.lhs);
        rec.push_f64("rhs", self.rhs);
        rec.push_f64("gap", self.gap);
        rec.push("satisfied", self.satisfied.to_string());
        rec
    }
}

/// Lattice sums run over `(k1, k2) ∈ [-K, K]²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeTruncation {
    k: usize,
}

impl LatticeTruncation {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("lattice truncation K must be positive".into()));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn doubled(&self) -> Self {
        Self { k: 2 * self.k }
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        -(self.k as i64)..=self.k as i64
    }
}

fn ctx(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn params_ctx(p1: &OffsetParams, p2: &OffsetParams) -> Vec<(&'static str, String)> {
    vec![("p1", p1.serialize()), ("p2", p2.serialize())]
}

fn check_axis(k: usize) -> Result<()> {
    if k == 1 || k == 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("axis index must be 1 or 2, got {k}")))
    }
}

fn b_of(p1: &OffsetParams, p2: &OffsetParams, k: usize) -> Result<f64> {
    let b = if k == 1 { p1.b } else { p2.b };
    if b == 0.0 {
        return Err(Error::DegenerateBranch { axis: k });
    }
    Ok(b)
}

/// `|s_k f|² · ‖(ξ_k/2πb_k) O{f}‖² ≥ |f|⁴/16π²`, frequency side from the four
/// component transforms on the unitary frequency grid.
pub fn heisenberg_qolct(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, k: usize) -> Result<InequalityReport> {
    check_axis(k)?;
    let bk = b_of(p1, p2, k)?;
    let geom = f.geometry();
    let mut spatial = Vec::with_capacity(geom.len());
    for k1 in 0..geom.n1 {
        for k2 in 0..geom.n2 {
            let s = if k == 1 { geom.coord1(k1) } else { geom.coord2(k2) };
            spatial.push(s * s * f.get(k1, k2).norm_sqr());
        }
    }
    let spatial = Reduction::Ordered.sum(&spatial) * geom.cell();

    let fg = olct_frequency_grid(geom, p1, p2);
    let ms = qolct_module_spectrum(f, p1, p2, axes, &fg);
    let norms = ms.module_norm_sqr();
    let mut freq = Vec::with_capacity(norms.len());
    for p in 0..fg.n1 {
        for q in 0..fg.n2 {
            let xi = if k == 1 { fg.coord1(p) } else { fg.coord2(q) } / (2.0 * PI * bk);
            freq.push(xi * xi * norms[fg.index(p, q)]);
        }
    }
    let freq = Reduction::Ordered.sum(&freq) * fg.cell();
    let energy = f.energy();
    let mut c = params_ctx(p1, p2);
    c.push(("k", k.to_string()));
    c.push(("n", format!("{}x{}", geom.n1, geom.n2)));
    Ok(InequalityReport::new("heisenberg_qolct", spatial * freq, energy * energy / (16.0 * PI * PI), ctx(&c)))
}

/// `(∫∫|s_k h|² ds dt)(∫∫‖(ξ_k/2πb_k) W‖² dξ dt) ≥ |f|⁴|g|⁴/16π²`, streamed over `t`.
pub fn heisenberg_wvd(f: &SampledSignal, g: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, k: usize) -> Result<InequalityReport> {
    check_axis(k)?;
    let bk = b_of(p1, p2, k)?;
    let geom = *f.geometry();
    geom.ensure_same(g.geometry())?;
    let fg = wvd_frequency_grid(&geom, p1, p2);
    let per_t: Vec<(f64, f64)> = (0..geom.len())
        .into_par_iter()
        .map(|idx| {
            let h = correlation_product_half(f, g, 2 * (idx / geom.n2), 2 * (idx % geom.n2))?;
            let lag = *h.geometry();
            let mut lag_terms = Vec::with_capacity(lag.len());
            for j1 in 0..lag.n1 {
                for j2 in 0..lag.n2 {
                    let s = if k == 1 { lag.coord1(j1) } else { lag.coord2(j2) };
                    lag_terms.push(s * s * h.get(j1, j2).norm_sqr());
                }
            }
            let mut freq_terms = Vec::with_capacity(4 * fg.len());
            for m in 0..4 {
                let part = real_component(&h, m);
                if part.values().iter().all(|q| *q == Quaternion::ZERO) {
                    continue;
                }
                let w = crate::qolct::qolct_forward(&part, p1, p2, axes, &fg);
                for p in 0..fg.n1 {
                    for q in 0..fg.n2 {
                        let xi = if k == 1 { fg.coord1(p) } else { fg.coord2(q) } / (2.0 * PI * bk);
                        freq_terms.push(xi * xi * w.get(p, q).norm_sqr());
                    }
                }
            }
            Ok((Reduction::Ordered.sum(&lag_terms) * lag.cell(), Reduction::Ordered.sum(&freq_terms) * fg.cell()))
        })
        .collect::<Result<_>>()?;
    let lag: Vec<f64> = per_t.iter().map(|x| x.0).collect();
    let freq: Vec<f64> = per_t.iter().map(|x| x.1).collect();
    let lhs = Reduction::Ordered.sum(&lag) * geom.cell() * Reduction::Ordered.sum(&freq) * geom.cell();
    let (ef, eg) = (f.energy(), g.energy());
    let mut c = params_ctx(p1, p2);
    c.push(("k", k.to_string()));
    c.push(("n", format!("{}x{}", geom.n1, geom.n2)));
    Ok(InequalityReport::new("heisenberg_wvd", lhs, ef * ef * eg * eg / (16.0 * PI * PI), ctx(&c)))
}

/// Both sides of `Σ_k f(s+k) = Σ_k e^{2πi k1 s1} f̂(k) e^{2πj k2 s2}` for an
/// analytic Gaussian, with `f̂` the cyclic-convention QFT.
pub fn poisson_qft_check(f: &GaussianGenerator, s: (f64, f64), trunc: LatticeTruncation) -> (Quaternion, Quaternion) {
    let mut left = Quaternion::ZERO;
    let mut right = Quaternion::ZERO;
    for k1 in trunc.range() {
        for k2 in trunc.range() {
            let (k1, k2) = (k1 as f64, k2 as f64);
            left += f.eval(s.0 + k1, s.1 + k2);
            right += axis_exp(PureUnitAxis::I, 2.0 * PI * k1 * s.0) * f.qft_cyclic(k1, k2) * axis_exp(PureUnitAxis::J, 2.0 * PI * k2 * s.1);
        }
    }
    (left, right)
}

/// Lag quadrature used to evaluate `W` of analytic generators at arbitrary frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagQuadrature {
    pub half_width: f64,
    pub step: f64,
}

impl LagQuadrature {
    /// Covers every lag where `h(t, ·)` exceeds ~e^{-70}, sampled finely
    /// enough for phases up to `2π·100` rad per unit.
    pub fn for_generators(f: &GaussianGenerator, g: &GaussianGenerator, t: (f64, f64)) -> Self {
        let sigma = f.sigma.0.max(f.sigma.1).max(g.sigma.0).max(g.sigma.1);
        let reach = [t.0, t.1, f.center.0, f.center.1, g.center.0, g.center.1].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let min_sigma = f.sigma.0.min(f.sigma.1).min(g.sigma.0).min(g.sigma.1);
        Self { half_width: 4.0 * reach + 24.0 * sigma, step: (min_sigma / 40.0).min(0.005) }
    }
}

/// `W_{f,g}(t, u)` of separable Gaussian generators by direct lag summation
/// (`λ = i`, `μ = j`): `h` factors as `(a_f conj a_g)·H1(s1)·H2(s2)` with real `H`.
pub fn wvd_generator_at(
    f: &GaussianGenerator,
    g: &GaussianGenerator,
    p1: &OffsetParams,
    p2: &OffsetParams,
    t: (f64, f64),
    u: (f64, f64),
    quad: LagQuadrature,
) -> Result<Quaternion> {
    let n = (2.0 * quad.half_width / quad.step).ceil() as usize + 1;
    let mut i1 = Quaternion::ZERO;
    let mut i2 = Quaternion::ZERO;
    for idx in 0..n {
        let s = -quad.half_width + idx as f64 * quad.step;
        let h1 = f.envelope1(t.0 + s / 2.0) * g.envelope1(t.0 - s / 2.0);
        let h2 = f.envelope2(t.1 + s / 2.0) * g.envelope2(t.1 - s / 2.0);
        if h1 != 0.0 {
            i1 += kernel_left(p1, PureUnitAxis::I, s, u.0)?.value() * h1;
        }
        if h2 != 0.0 {
            i2 += kernel_right(p2, PureUnitAxis::J, s, u.1)?.value() * h2;
        }
    }
    Ok(i1 * (f.amplitude * g.amplitude.conj()) * i2 * (quad.step * quad.step))
}

/// `√(2π axis b)`, the inverse of the kernel constant `e^{-axis π/4}/√(2π|b|)`.
fn sqrt_scale(axis: PureUnitAxis, b: f64) -> Quaternion {
    axis_exp(axis, PI / 4.0) * (2.0 * PI * b.abs()).sqrt()
}

/// Both sides of the WVD-QOLCT Poisson summation formula for generators `f`, `g`
/// at time `t` and shift `s`:
///
/// ```text
/// Σ_k ω(t, s+k) = √(2πib1) [Σ_k e^{2πi k1 s1} φ1(k1) W(t, 2πb k) φ2(k2) e^{2πj k2 s2}] √(2πjb2)
/// ω(t, s) = e^{i(s1τ1/b1 + a1 s1²/2b1)} h(t, s) e^{j(s2τ2/b2 + a2 s2²/2b2)}
/// φ_l(k) = e^{axis[2πk(d τ - b η) - d(4π²b²k² + τ²)/2b]}
/// ```
pub fn poisson_wvd_check(
    f: &GaussianGenerator,
    g: &GaussianGenerator,
    t: (f64, f64),
    s: (f64, f64),
    p1: &OffsetParams,
    p2: &OffsetParams,
    trunc: LatticeTruncation,
) -> Result<(Quaternion, Quaternion)> {
    if p1.is_degenerate() {
        return Err(Error::DegenerateBranch { axis: 1 });
    }
    if p2.is_degenerate() {
        return Err(Error::DegenerateBranch { axis: 2 });
    }
    let (i, j) = (PureUnitAxis::I, PureUnitAxis::J);
    let chirp = |p: &OffsetParams, axis: PureUnitAxis, x: f64| axis_exp(axis, x * p.tau / p.b + p.a * x * x / (2.0 * p.b));
    let phase = |p: &OffsetParams, axis: PureUnitAxis, k: f64| {
        axis_exp(axis, 2.0 * PI * k * (p.d * p.tau - p.b * p.eta) - p.d * (4.0 * PI * PI * p.b * p.b * k * k + p.tau * p.tau) / (2.0 * p.b))
    };
    let quad = LagQuadrature::for_generators(f, g, t);

    let mut left = Quaternion::ZERO;
    for k1 in trunc.range() {
        for k2 in trunc.range() {
            let (x1, x2) = (s.0 + k1 as f64, s.1 + k2 as f64);
            let h = f.eval(t.0 + x1 / 2.0, t.1 + x2 / 2.0) * g.eval(t.0 - x1 / 2.0, t.1 - x2 / 2.0).conj();
            left += chirp(p1, i, x1) * h * chirp(p2, j, x2);
        }
    }

    let ks: Vec<(i64, i64)> = trunc.range().flat_map(|a| trunc.range().map(move |b| (a, b))).collect();
    let terms: Vec<Quaternion> = ks
        .par_iter()
        .map(|&(k1, k2)| {
            let (k1, k2) = (k1 as f64, k2 as f64);
            let u = (2.0 * PI * p1.b * k1, 2.0 * PI * p2.b * k2);
            let w = wvd_generator_at(f, g, p1, p2, t, u, quad)?;
            Ok(axis_exp(i, 2.0 * PI * k1 * s.0) * phase(p1, i, k1) * w * phase(p2, j, k2) * axis_exp(j, 2.0 * PI * k2 * s.1))
        })
        .collect::<Result<_>>()?;
    let sum: Quaternion = terms.iter().sum();
    Ok((left, sqrt_scale(i, p1.b) * sum * sqrt_scale(j, p2.b)))
}

/// `|L{f}|_q` against `(|b1 b2|^{-1/2+1/q}/2π)|f|_p` with `1/p + 1/q = 1`.
/// Reported only: at `p = 2` unitarity gives a ratio of `2π`.
pub fn lieb_qlct_ratio(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, p_exp: f64) -> Result<InequalityReport> {
    if !(1.0..=2.0).contains(&p_exp) {
        return Err(Error::Domain(format!("exponent must lie in [1, 2], got {p_exp}")));
    }
    if p1.has_offsets() || p2.has_offsets() {
        return Err(Error::Domain("the canonical transform takes zero offsets".into()));
    }
    b_of(p1, p2, 1)?;
    b_of(p1, p2, 2)?;
    let q_exp = if p_exp == 1.0 { f64::INFINITY } else { p_exp / (p_exp - 1.0) };
    let fg = olct_frequency_grid(f.geometry(), p1, p2);
    let l = qlct_forward(f, p1, p2, AxisPair::default(), &fg);
    let lhs = lp_norm(&l, q_exp)?;
    let inv_q = if q_exp.is_infinite() { 0.0 } else { 1.0 / q_exp };
    let rhs = (p1.b * p2.b).abs().powf(-0.5 + inv_q) / (2.0 * PI) * lp_norm(f, p_exp)?;
    let mut c = params_ctx(p1, p2);
    c.push(("p", format!("{p_exp:?}")));
    c.push(("q", format!("{q_exp:?}")));
    c.push(("ratio", format!("{:?}", lhs / rhs)));
    Ok(InequalityReport::upper_bound("lieb_qlct", lhs, rhs, ctx(&c)))
}

/// `L(p) = ∫∫|W|^p du dt` with its envelope and the implied constant.
#[derive(Debug, Clone, PartialEq)]
pub struct LiebWvdReport {
    pub functional: f64,
    pub envelope: f64,
    pub c_emp: f64,
    pub context: Vec<(String, String)>,
}

impl LiebWvdReport {
    pub fn to_record(&self) -> Record {
        let mut rec = Record::new("lieb_wvd");
        for (k, v) in &self.context {
            rec.push(format!("context.{k}"), v.clone());
        }
        rec.push_f64("functional", self.functional);
        rec.push_f64("envelope", self.envelope);
        rec.push_f64("c_emp", self.c_emp);
        rec
    }
}

/// `C_emp = ∫∫|W_{f,g}|^p du dt / (|b1 b2|^{1-p/2}/(2π)^p · |f|^p |g|^p)` with `λ = i`, `μ = j`.
pub fn lieb_wvd_functional(f: &SampledSignal, g: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, p_exp: f64) -> Result<LiebWvdReport> {
    if !(p_exp >= 2.0 && p_exp.is_finite()) {
        return Err(Error::Domain(format!("exponent must be finite and at least 2, got {p_exp}")));
    }
    b_of(p1, p2, 1)?;
    b_of(p1, p2, 2)?;
    let geom = *f.geometry();
    geom.ensure_same(g.geometry())?;
    let fg = wvd_frequency_grid(&geom, p1, p2);
    let per_t: Vec<f64> = (0..geom.len())
        .into_par_iter()
        .map(|idx| {
            let slice = wvd_slice_half(f, g, p1, p2, AxisPair::default(), &fg, (2 * (idx / geom.n2), 2 * (idx % geom.n2)))?;
            let terms: Vec<f64> = slice.values().iter().map(|q| q.modulus().powf(p_exp)).collect();
            Ok(Reduction::Ordered.sum(&terms))
        })
        .collect::<Result<_>>()?;
    let functional = Reduction::Ordered.sum(&per_t) * geom.cell() * fg.cell();
    let envelope = (p1.b * p2.b).abs().powf(1.0 - p_exp / 2.0) / (2.0 * PI).powf(p_exp) * (f.l2_norm() * g.l2_norm()).powf(p_exp);
    let mut c = params_ctx(p1, p2);
    c.push(("p", format!("{p_exp:?}")));
    Ok(LiebWvdReport { functional, envelope, c_emp: functional / envelope, context: ctx(&c) })
}

/// Energy identity in unsquared and squared forms.
#[derive(Debug, Clone, PartialEq)]
pub struct WvdEnergyForms {
    /// `‖W_{f,g}‖_{2,Q}`.
    pub norm: f64,
    /// `|f|_{2,Q}·|g|_{2,Q}`; the squared identity says `norm` equals this.
    pub product_of_norms: f64,
    /// `|f|²_{2,Q}·|g|²_{2,Q}`, the right side of the unsquared form.
    pub product_of_energies: f64,
}

impl WvdEnergyForms {
    pub fn squared_form_deviation(&self) -> f64 {
        (self.norm * self.norm / (self.product_of_norms * self.product_of_norms) - 1.0).abs()
    }

    pub fn unsquared_form_deviation(&self) -> f64 {
        (self.norm / self.product_of_energies - 1.0).abs()
    }
}

pub fn wvd_energy_forms(f: &SampledSignal, g: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, reduction: Reduction) -> Result<WvdEnergyForms> {
    let fg = wvd_frequency_grid(f.geometry(), p1, p2);
    let norm = wvd_module_energy(f, g, p1, p2, axes, &fg, reduction)?.sqrt();
    let (nf, ng) = (f.l2_norm(), g.l2_norm());
    Ok(WvdEnergyForms { norm, product_of_norms: nf * ng, product_of_energies: nf * nf * ng * ng })
}
