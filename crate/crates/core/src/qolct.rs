//! Two-sided quaternion offset linear canonical transform (QOLCT).
//!
//! Each axis carries a unimodular matrix `(a b; c d)` and offsets `(τ, η)`.
//! For `b ≠ 0` the kernel is
//!
//! ```text
//! K(t, u) = e^{-axis·π/4} / √(2π|b|) · exp(axis·(a t² - 2t(u-τ) - 2u(dτ - bη) + d(u² + τ²)) / 2b)
//! ```
//!
//! and the transform is `Σ_t K^λ(t1,u1) f(t) K^μ(t2,u2) dt`, with the left
//! kernel always on the left. For `b = 0` the axis collapses to the point map
//! `√|d| e^{axis(cd/2 (u-τ)² + uτ)} f(d(u-τ))`, read from the nearest sample.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::{two_sided_ij, AxisSampling};
use crate::grid::{real_component, GridGeometry, SampledSignal};
use crate::qft::{separable_sum, AxisPair, ModuleSpectrum, Spectrum};
use crate::quaternion::{axis_exp, sqrt_axis_phase, PureUnitAxis, Quaternion};

const UNIMODULAR_TOL: f64 = 1e-12;

/// `(a b; c d | τ η)` for one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub tau: f64,
    pub eta: f64,
}

impl OffsetParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, tau: f64, eta: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det - 1.0).abs().le(&UNIMODULAR_TOL) || ![a, b, c, d, tau, eta].iter().all(|v| v.is_finite()) {
            return Err(Error::NotUnimodular { a, b, c, d, det });
        }
        Ok(Self { a, b, c, d, tau, eta })
    }

    /// `(0 1; -1 0 | 0 0)`: the QOLCT becomes `(1/2π) e^{-λπ/4} F e^{-μπ/4}`.
    pub const fn fourier() -> Self {
        Self { a: 0.0, b: 1.0, c: -1.0, d: 0.0, tau: 0.0, eta: 0.0 }
    }

    /// Parses `a b c d tau eta`.
    pub fn parse(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split_whitespace()
            .map(|x| x.parse::<f64>().map_err(|e| Error::Parse(format!("`{x}`: {e}"))))
            .collect::<Result<_>>()?;
        if v.len() != 6 {
            return Err(Error::Parse(format!("expected 6 numbers `a b c d tau eta`, got {}", v.len())));
        }
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    /// Inverse of [`OffsetParams::parse`]; round-trips exactly.
    pub fn serialize(&self) -> String {
        format!("{:?} {:?} {:?} {:?} {:?} {:?}", self.a, self.b, self.c, self.d, self.tau, self.eta)
    }

    /// The `b = 0` closed-form branch applies (exact comparison).
    pub fn is_degenerate(&self) -> bool {
        self.b == 0.0
    }

    pub fn without_offsets(&self) -> Self {
        Self { tau: 0.0, eta: 0.0, ..*self }
    }

    pub fn has_offsets(&self) -> bool {
        self.tau != 0.0 || self.eta != 0.0
    }

    fn kernel_phase(&self, t: f64, u: f64) -> f64 {
        let (a, b, d, tau, eta) = (self.a, self.b, self.d, self.tau, self.eta);
        (a * t * t - 2.0 * t * (u - tau) - 2.0 * u * (d * tau - b * eta) + d * (u * u + tau * tau)) / (2.0 * b)
    }

    /// `√|d| e^{axis(cd/2 (u-τ)² + uτ)}` of the `b = 0` branch.
    pub fn degenerate_prefactor(&self, axis: PureUnitAxis, u: f64) -> Quaternion {
        let x = u - self.tau;
        axis_exp(axis, self.c * self.d / 2.0 * x * x + u * self.tau) * self.d.abs().sqrt()
    }

    /// `u`-only factor of the kernel: `e^{-axis π/4}/√(2π|b|) · e^{axis[-u(dτ-bη)/b + d(u²+τ²)/2b]}`.
    pub(crate) fn output_factor(&self, axis: PureUnitAxis, u: f64) -> Quaternion {
        let phase = -u * (self.d * self.tau - self.b * self.eta) / self.b + self.d * (u * u + self.tau * self.tau) / (2.0 * self.b);
        sqrt_axis_phase(axis) * axis_exp(axis, phase) * (2.0 * PI * self.b.abs()).sqrt().recip()
    }

    /// `t`-only chirp of the kernel: `e^{axis[tτ/b + a t²/2b]}`.
    pub(crate) fn input_chirp(&self, axis: PureUnitAxis, t: f64) -> Quaternion {
        axis_exp(axis, t * self.tau / self.b + self.a * t * t / (2.0 * self.b))
    }
}

/// A kernel sample `K(t, u)`; its modulus is `1/√(2π|b|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlctKernelValue(pub Quaternion);

impl OlctKernelValue {
    pub fn value(self) -> Quaternion {
        self.0
    }
}

fn offset_kernel(p: &OffsetParams, axis: PureUnitAxis, axis_no: usize, t: f64, u: f64) -> Result<OlctKernelValue> {
    if p.is_degenerate() {
        return Err(Error::DegenerateBranch { axis: axis_no });
    }
    let scale = (2.0 * PI * p.b.abs()).sqrt().recip();
    Ok(OlctKernelValue(sqrt_axis_phase(axis) * axis_exp(axis, p.kernel_phase(t, u)) * scale))
}

/// `K^λ_{A1}(t1, u1)`.
pub fn kernel_left(p: &OffsetParams, axis: PureUnitAxis, t1: f64, u1: f64) -> Result<OlctKernelValue> {
    offset_kernel(p, axis, 1, t1, u1)
}

/// `K^μ_{A2}(t2, u2)`.
pub fn kernel_right(p: &OffsetParams, axis: PureUnitAxis, t2: f64, u2: f64) -> Result<OlctKernelValue> {
    offset_kernel(p, axis, 2, t2, u2)
}

/// Canonical (offset-free) kernel `e^{-axis π/4}/√(2π|b|) · e^{axis(a t² - 2tu + d u²)/2b}`.
pub fn qlct_kernel(p: &OffsetParams, axis: PureUnitAxis, t: f64, u: f64) -> Result<OlctKernelValue> {
    if p.is_degenerate() {
        return Err(Error::DegenerateBranch { axis: 0 });
    }
    let phase = (p.a * t * t - 2.0 * t * u + p.d * u * u) / (2.0 * p.b);
    let scale = (2.0 * PI * p.b.abs()).sqrt().recip();
    Ok(OlctKernelValue(sqrt_axis_phase(axis) * axis_exp(axis, phase) * scale))
}

#[derive(Debug, Clone, Copy)]
struct AxisCoords {
    origin: f64,
    delta: f64,
    n: usize,
}

impl AxisCoords {
    fn of(g: &GridGeometry, axis_no: usize) -> Self {
        match axis_no {
            1 => Self { origin: g.origin1, delta: g.delta1, n: g.n1 },
            _ => Self { origin: g.origin2, delta: g.delta2, n: g.n2 },
        }
    }

    fn at(&self, k: usize) -> f64 {
        self.origin + k as f64 * self.delta
    }

    fn nearest(&self, x: f64) -> Option<usize> {
        let k = ((x - self.origin) / self.delta).round();
        (k >= 0.0 && k < self.n as f64).then_some(k as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KernelKind {
    Offset,
    Canonical,
}

/// Row-major `m × n` forward table for one axis. Degenerate axes become a
/// selection of the nearest sample, pre-divided by the quadrature spacing.
fn forward_table(p: &OffsetParams, axis: PureUnitAxis, axis_no: usize, time: AxisCoords, freq: AxisCoords, kind: KernelKind) -> Vec<Quaternion> {
    let mut table = vec![Quaternion::ZERO; freq.n * time.n];
    for q in 0..freq.n {
        let u = freq.at(q);
        let row = &mut table[q * time.n..(q + 1) * time.n];
        if p.is_degenerate() {
            let (shift, pre) = match kind {
                KernelKind::Offset => (p.tau, p.degenerate_prefactor(axis, u)),
                KernelKind::Canonical => (0.0, axis_exp(axis, p.c * p.d / 2.0 * u * u) * p.d.abs().sqrt()),
            };
            if let Some(k) = time.nearest(p.d * (u - shift)) {
                row[k] = pre * (1.0 / time.delta);
            }
        } else {
            for (k, slot) in row.iter_mut().enumerate() {
                let t = time.at(k);
                *slot = match kind {
                    KernelKind::Offset => offset_kernel(p, axis, axis_no, t, u),
                    KernelKind::Canonical => qlct_kernel(p, axis, t, u),
                }
                .expect("non-degenerate")
                .0;
            }
        }
    }
    table
}

/// Inverse table (`n × m`, rows are time samples). For `b ≠ 0` this is the
/// conjugate kernel; for `b = 0` it undoes the point map.
fn inverse_table(p: &OffsetParams, axis: PureUnitAxis, axis_no: usize, time: AxisCoords, freq: AxisCoords) -> Vec<Quaternion> {
    let mut table = vec![Quaternion::ZERO; time.n * freq.n];
    for k in 0..time.n {
        let t = time.at(k);
        let row = &mut table[k * freq.n..(k + 1) * freq.n];
        if p.is_degenerate() {
            let u = t / p.d + p.tau;
            if let Some(q) = freq.nearest(u) {
                let u = freq.at(q);
                row[q] = p.degenerate_prefactor(axis, u).conj() * (1.0 / (p.d.abs() * freq.delta));
            }
        } else {
            for (q, slot) in row.iter_mut().enumerate() {
                *slot = offset_kernel(p, axis, axis_no, t, freq.at(q)).expect("non-degenerate").0.conj();
            }
        }
    }
    table
}

fn transform_with(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, freq_grid: &GridGeometry, kind: KernelKind) -> Spectrum {
    let t = f.geometry();
    let left = forward_table(p1, axes.left, 1, AxisCoords::of(t, 1), AxisCoords::of(freq_grid, 1), kind);
    let right = forward_table(p2, axes.right, 2, AxisCoords::of(t, 2), AxisCoords::of(freq_grid, 2), kind);
    let values = separable_sum(f.values(), (t.n1, t.n2), &left, freq_grid.n1, &right, freq_grid.n2, t.cell());
    Spectrum::new(*freq_grid, values).expect("sized from freq_grid")
}

/// QOLCT of `f` on `freq_grid`, all four `(b1, b2)` branches.
pub fn qolct_forward(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, freq_grid: &GridGeometry) -> Spectrum {
    transform_with(f, p1, p2, axes, freq_grid, KernelKind::Offset)
}

/// Offset-free QLCT `L^{λ,μ}_{A1,A2}{f}`; offsets in `p1`, `p2` are ignored.
pub fn qlct_forward(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, freq_grid: &GridGeometry) -> Spectrum {
    transform_with(f, p1, p2, axes, freq_grid, KernelKind::Canonical)
}

/// Component transforms `O{f_m}` behind the module norm.
pub fn qolct_module_spectrum(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, freq_grid: &GridGeometry) -> ModuleSpectrum {
    ModuleSpectrum { components: std::array::from_fn(|m| qolct_forward(&real_component(f, m), p1, p2, axes, freq_grid)) }
}

/// `f(t) = Σ_u conj(K^λ(t1,u1)) F(u) conj(K^μ(t2,u2)) du` on `time_grid`.
pub fn qolct_inverse(spectrum: &Spectrum, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, time_grid: &GridGeometry) -> SampledSignal {
    let u = spectrum.geometry();
    let left = inverse_table(p1, axes.left, 1, AxisCoords::of(time_grid, 1), AxisCoords::of(u, 1));
    // inverse_table rows are time samples, so the right table is already `n2 × m2`
    let right = inverse_table(p2, axes.right, 2, AxisCoords::of(time_grid, 2), AxisCoords::of(u, 2));
    let values = separable_sum(spectrum.values(), (u.n1, u.n2), &left, time_grid.n1, &right, time_grid.n2, u.cell());
    SampledSignal::new(*time_grid, values).expect("sized from time_grid")
}

fn olct_axis_grid(p: &OffsetParams, time: AxisCoords) -> (f64, f64) {
    if p.is_degenerate() {
        // u_k = τ + t_k/d hits every sample exactly under the point map
        let du = time.delta / p.d.abs();
        let t_first = if p.d > 0.0 { time.at(0) } else { time.at(time.n - 1) };
        (p.tau + t_first / p.d, du)
    } else {
        let du = 2.0 * PI * p.b.abs() / (time.n as f64 * time.delta);
        (-((time.n / 2) as f64) * du, du)
    }
}

/// Frequency grid on which the discrete QOLCT of signals on `time` is unitary:
/// spacing `2π|b|/(n·delta)` (centred) for `b ≠ 0`, the sample map's image for `b = 0`.
pub fn olct_frequency_grid(time: &GridGeometry, p1: &OffsetParams, p2: &OffsetParams) -> GridGeometry {
    let (o1, d1) = olct_axis_grid(p1, AxisCoords::of(time, 1));
    let (o2, d2) = olct_axis_grid(p2, AxisCoords::of(time, 2));
    GridGeometry::new(time.n1, time.n2, d1, d2, o1, o2).expect("derived from a valid grid")
}

/// FFT route for `λ = i, μ = j`, `b1·b2 ≠ 0`: chirp the input, take the QFT at
/// `u/b`, then apply the `u`-only factors on each side.
pub fn qolct_fast(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, freq_grid: &GridGeometry) -> Result<Spectrum> {
    if p1.is_degenerate() {
        return Err(Error::DegenerateBranch { axis: 1 });
    }
    if p2.is_degenerate() {
        return Err(Error::DegenerateBranch { axis: 2 });
    }
    let (i, j) = (PureUnitAxis::I, PureUnitAxis::J);
    let t = f.geometry();
    let mut chirped = f.values().to_vec();
    for k1 in 0..t.n1 {
        let left = p1.input_chirp(i, t.coord1(k1));
        for k2 in 0..t.n2 {
            let idx = t.index(k1, k2);
            chirped[idx] = left * chirped[idx] * p2.input_chirp(j, t.coord2(k2));
        }
    }
    let a1 = AxisSampling { t0: t.origin1, dt: t.delta1, n: t.n1, u0: freq_grid.origin1 / p1.b, du: freq_grid.delta1 / p1.b, m: freq_grid.n1 };
    let a2 = AxisSampling { t0: t.origin2, dt: t.delta2, n: t.n2, u0: freq_grid.origin2 / p2.b, du: freq_grid.delta2 / p2.b, m: freq_grid.n2 };
    let sums = two_sided_ij(&chirped, a1, a2)?;
    let w = t.cell();
    let left: Vec<_> = (0..freq_grid.n1).map(|p| p1.output_factor(i, freq_grid.coord1(p))).collect();
    let right: Vec<_> = (0..freq_grid.n2).map(|q| p2.output_factor(j, freq_grid.coord2(q))).collect();
    let values = sums
        .iter()
        .enumerate()
        .map(|(idx, &s)| left[idx / freq_grid.n2] * s * right[idx % freq_grid.n2] * w)
        .collect();
    Spectrum::new(*freq_grid, values)
}

/// `(‖O{f}‖_{2,Q}, |f|_{2,Q})` with the module norm from the four component
/// transforms, on [`olct_frequency_grid`].
pub fn qolct_plancherel_check(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair) -> (f64, f64) {
    let fg = olct_frequency_grid(f.geometry(), p1, p2);
    let ms = qolct_module_spectrum(f, p1, p2, axes, &fg);
    (ms.l2_norm(), f.l2_norm())
}

/// Both sides of the QOLCT/QLCT phase relation, evaluated on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    /// Time point substituted for the free `t` in the literal relation.
    pub t_eval: (f64, f64),
    /// `max_u |O{f}(u) - literal_rhs(u)|`.
    pub literal_max_deviation: f64,
    /// Same, with the `t`-dependent phases kept inside the integral
    /// (`O{f} = e^{λ[..u..]} L{e^{λ t1 τ1/b1} f e^{μ t2 τ2/b2}} e^{μ[..u..]}`).
    pub modulated_max_deviation: f64,
    pub max_modulus: f64,
}

/// Evaluates the literal relation
/// `O{f}(u) = e^{λ(2t1τ1 - 2u1(d1τ1-b1η1))} e^{μ d1τ1²/2b1} L{f}(u) e^{μ d2τ2²/2b2} e^{μ(2t2τ2 - 2u2(d2τ2-b2η2))}`
/// at `t = t_eval`, next to the form that keeps the `t`-phases inside the integral.
/// Reports only; nothing is asserted.
pub fn qolct_from_qlct_relation(
    f: &SampledSignal,
    p1: &OffsetParams,
    p2: &OffsetParams,
    axes: AxisPair,
    freq_grid: &GridGeometry,
    t_eval: (f64, f64),
) -> Result<RelationReport> {
    if p1.is_degenerate() {
        return Err(Error::DegenerateBranch { axis: 1 });
    }
    if p2.is_degenerate() {
        return Err(Error::DegenerateBranch { axis: 2 });
    }
    let (lam, mu) = (axes.left, axes.right);
    let o = qolct_forward(f, p1, p2, axes, freq_grid);
    let l = qlct_forward(f, p1, p2, axes, freq_grid);

    let t = f.geometry();
    let modulated = SampledSignal::from_fn(*t, |t1, t2| {
        let idx = t.nearest(t1, t2).expect("own coordinates");
        axis_exp(lam, t1 * p1.tau / p1.b) * f.get(idx.0, idx.1) * axis_exp(mu, t2 * p2.tau / p2.b)
    });
    let lm = qlct_forward(&modulated, p1, p2, axes, freq_grid);

    let mut literal = 0.0_f64;
    let mut corrected = 0.0_f64;
    let mut max_modulus = 0.0_f64;
    for p in 0..freq_grid.n1 {
        let u1 = freq_grid.coord1(p);
        let lit_left = axis_exp(lam, 2.0 * t_eval.0 * p1.tau - 2.0 * u1 * (p1.d * p1.tau - p1.b * p1.eta))
            * axis_exp(mu, p1.d * p1.tau * p1.tau / (2.0 * p1.b));
        let mod_left = axis_exp(lam, -u1 * (p1.d * p1.tau - p1.b * p1.eta) / p1.b + p1.d * p1.tau * p1.tau / (2.0 * p1.b));
        for q in 0..freq_grid.n2 {
            let u2 = freq_grid.coord2(q);
            let lit_right = axis_exp(mu, p2.d * p2.tau * p2.tau / (2.0 * p2.b))
                * axis_exp(mu, 2.0 * t_eval.1 * p2.tau - 2.0 * u2 * (p2.d * p2.tau - p2.b * p2.eta));
            let mod_right = axis_exp(mu, -u2 * (p2.d * p2.tau - p2.b * p2.eta) / p2.b + p2.d * p2.tau * p2.tau / (2.0 * p2.b));
            let lhs = o.get(p, q);
            max_modulus = max_modulus.max(lhs.modulus());
            literal = literal.max((lhs - lit_left * l.get(p, q) * lit_right).modulus());
            corrected = corrected.max((lhs - mod_left * lm.get(p, q) * mod_right).modulus());
        }
    }
    Ok(RelationReport { t_eval, literal_max_deviation: literal, modulated_max_deviation: corrected, max_modulus })
}
