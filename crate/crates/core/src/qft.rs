//! Two-sided quaternion Fourier transform
//!
//! ```text
//! F(u) = ∫ e^{-λ u1 t1} f(t) e^{-μ u2 t2} dt
//! f(t) = (2π)^{-2} ∫ e^{λ u1 t1} F(u) e^{μ u2 t2} du
//! ```
//!
//! in the angular convention (no `2π` in the exponent). The direct path works
//! for any pair of pure unit axes and any frequency grid; [`qft_fast`] is the
//! FFT route for `λ = i, μ = j` on commensurate grids.

use std::f64::consts::PI;
use std::ops::Deref;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::{two_sided_ij, AxisSampling};
use crate::grid::{central_difference, real_component, GridGeometry, SampledSignal};
use crate::quaternion::{axis_exp, PureUnitAxis, Quaternion};
use crate::signals::GaussianGenerator;

/// Left (`λ`) and right (`μ`) exponential axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisPair {
    pub left: PureUnitAxis,
    pub right: PureUnitAxis,
}

impl AxisPair {
    pub fn new(left: PureUnitAxis, right: PureUnitAxis) -> Self {
        Self { left, right }
    }

    pub fn is_ij(&self) -> bool {
        *self == Self::default()
    }
}

impl Default for AxisPair {
    fn default() -> Self {
        Self { left: PureUnitAxis::I, right: PureUnitAxis::J }
    }
}

/// A quaternion grid over the frequency variable `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(SampledSignal);

impl Spectrum {
    pub fn new(geometry: GridGeometry, values: Vec<Quaternion>) -> Result<Self> {
        SampledSignal::new(geometry, values).map(Self)
    }

    pub fn from_signal(s: SampledSignal) -> Self {
        Self(s)
    }

    pub fn into_signal(self) -> SampledSignal {
        self.0
    }

    pub fn as_signal(&self) -> &SampledSignal {
        &self.0
    }
}

impl Deref for Spectrum {
    type Target = SampledSignal;
    fn deref(&self) -> &SampledSignal {
        &self.0
    }
}

/// The spectra of the four real components `f_m`; the module norm
/// `‖F{f}(u)‖_Q = sqrt(Σ_m |F{f_m}(u)|²)` is built from these.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleSpectrum {
    pub components: [Spectrum; 4],
}

impl ModuleSpectrum {
    pub fn geometry(&self) -> &GridGeometry {
        self.components[0].geometry()
    }

    /// `‖F{f}(u)‖²_Q` at flat index `idx`.
    pub fn module_norm_sqr_at(&self, idx: usize) -> f64 {
        self.components.iter().map(|c| c.values()[idx].norm_sqr()).sum()
    }

    pub fn module_norm_at(&self, idx: usize) -> f64 {
        self.module_norm_sqr_at(idx).sqrt()
    }

    /// Pointwise `‖F{f}(u)‖²_Q` over the whole grid.
    pub fn module_norm_sqr(&self) -> Vec<f64> {
        (0..self.geometry().len()).map(|i| self.module_norm_sqr_at(i)).collect()
    }

    /// `‖F{f}‖²_{2,Q} = Σ_u ‖F{f}(u)‖²_Q du`.
    pub fn energy(&self) -> f64 {
        self.module_norm_sqr().iter().sum::<f64>() * self.geometry().cell()
    }

    pub fn l2_norm(&self) -> f64 {
        self.energy().sqrt()
    }
}

/// `out(p, q) = w · Σ_{k1,k2} left[p][k1] · x(k1, k2) · right[q][k2]`, evaluated
/// one axis at a time. Tables are row-major (`left` is `m1 × n1`, `right` is `m2 × n2`).
pub(crate) fn separable_sum(
    values: &[Quaternion],
    (n1, n2): (usize, usize),
    left: &[Quaternion],
    m1: usize,
    right: &[Quaternion],
    m2: usize,
    weight: f64,
) -> Vec<Quaternion> {
    debug_assert_eq!(values.len(), n1 * n2);
    debug_assert_eq!(left.len(), m1 * n1);
    debug_assert_eq!(right.len(), m2 * n2);
    let mut out = vec![Quaternion::ZERO; m1 * m2];
    out.par_chunks_mut(m2).enumerate().for_each(|(p, row)| {
        let lrow = &left[p * n1..(p + 1) * n1];
        let mut partial = vec![Quaternion::ZERO; n2];
        for (k1, &l) in lrow.iter().enumerate() {
            if l == Quaternion::ZERO {
                continue;
            }
            let xrow = &values[k1 * n2..(k1 + 1) * n2];
            for (acc, &x) in partial.iter_mut().zip(xrow) {
                *acc += l * x;
            }
        }
        for (q, slot) in row.iter_mut().enumerate() {
            let rrow = &right[q * n2..(q + 1) * n2];
            let s: Quaternion = partial.iter().zip(rrow).map(|(&a, &r)| a * r).sum();
            *slot = s * weight;
        }
    });
    out
}

fn exp_table(axis: PureUnitAxis, sign: f64, us: impl Fn(usize) -> f64, m: usize, ts: impl Fn(usize) -> f64, n: usize) -> Vec<Quaternion> {
    let mut table = Vec::with_capacity(m * n);
    for p in 0..m {
        let u = us(p);
        for k in 0..n {
            table.push(axis_exp(axis, sign * u * ts(k)));
        }
    }
    table
}

/// The FFT-aligned frequency grid for `time`: `u_k = 2πk/(n·delta)`, `k = -n/2 .. n/2-1`.
pub fn natural_frequency_grid(time: &GridGeometry) -> GridGeometry {
    let du1 = 2.0 * PI / (time.n1 as f64 * time.delta1);
    let du2 = 2.0 * PI / (time.n2 as f64 * time.delta2);
    GridGeometry::centered_with_spacing(time.n1, time.n2, du1, du2).expect("derived from a valid grid")
}

/// Direct (separable) evaluation of the two-sided QFT on `freq_grid`.
pub fn qft_forward(f: &SampledSignal, axes: AxisPair, freq_grid: &GridGeometry) -> Spectrum {
    let t = f.geometry();
    let left = exp_table(axes.left, -1.0, |p| freq_grid.coord1(p), freq_grid.n1, |k| t.coord1(k), t.n1);
    let right = exp_table(axes.right, -1.0, |q| freq_grid.coord2(q), freq_grid.n2, |k| t.coord2(k), t.n2);
    let values = separable_sum(f.values(), (t.n1, t.n2), &left, freq_grid.n1, &right, freq_grid.n2, t.cell());
    Spectrum(SampledSignal::new(*freq_grid, values).expect("sized from freq_grid"))
}

/// `f(t) = (2π)^{-2} Σ_u e^{λ u1 t1} F(u) e^{μ u2 t2} du` on `time_grid`.
pub fn qft_inverse(spectrum: &Spectrum, axes: AxisPair, time_grid: &GridGeometry) -> SampledSignal {
    let u = spectrum.geometry();
    let left = exp_table(axes.left, 1.0, |k| time_grid.coord1(k), time_grid.n1, |p| u.coord1(p), u.n1);
    let right = exp_table(axes.right, 1.0, |k| time_grid.coord2(k), time_grid.n2, |q| u.coord2(q), u.n2);
    let weight = u.cell() / (4.0 * PI * PI);
    let values = separable_sum(spectrum.values(), (u.n1, u.n2), &left, time_grid.n1, &right, time_grid.n2, weight);
    SampledSignal::new(*time_grid, values).expect("sized from time_grid")
}

/// Transforms of the four real components `f_m` (each as a real-valued signal).
pub fn qft_module_spectrum(f: &SampledSignal, axes: AxisPair, freq_grid: &GridGeometry) -> ModuleSpectrum {
    ModuleSpectrum { components: std::array::from_fn(|m| qft_forward(&real_component(f, m), axes, freq_grid)) }
}

pub(crate) fn axis_sampling(time: &GridGeometry, freq: &GridGeometry) -> (AxisSampling, AxisSampling) {
    (
        AxisSampling { t0: time.origin1, dt: time.delta1, n: time.n1, u0: freq.origin1, du: freq.delta1, m: freq.n1 },
        AxisSampling { t0: time.origin2, dt: time.delta2, n: time.n2, u0: freq.origin2, du: freq.delta2, m: freq.n2 },
    )
}

/// FFT evaluation of [`qft_forward`] for `λ = i, μ = j`.
///
/// `freq_grid` spacing must satisfy `du·delta·N = 2π` for an integer `N`
/// no smaller than either grid's sample count on that axis.
pub fn qft_fast(f: &SampledSignal, axes: AxisPair, freq_grid: &GridGeometry) -> Result<Spectrum> {
    if !axes.is_ij() {
        return Err(Error::UnsupportedAxes);
    }
    let (a1, a2) = axis_sampling(f.geometry(), freq_grid);
    let mut values = two_sided_ij(f.values(), a1, a2)?;
    let w = f.geometry().cell();
    values.iter_mut().for_each(|q| *q = *q * w);
    Spectrum::new(*freq_grid, values)
}

/// `Σ_u ‖F{f}(u)‖²_Q du / (4π² |f|²_{2,Q})` on the natural frequency grid.
pub fn qft_plancherel_ratio(f: &SampledSignal, axes: AxisPair) -> f64 {
    let fg = natural_frequency_grid(f.geometry());
    qft_module_spectrum(f, axes, &fg).energy() / (4.0 * PI * PI * f.energy())
}

/// `max_u |k1 k2 F{f(k1·, k2·)}(u) - F{f}(u1/k1, u2/k2)|` for an analytically
/// resampled generator, both sides by direct summation on `time`.
pub fn dilation_deviation(gen: &GaussianGenerator, k: (f64, f64), time: &GridGeometry, freq: &GridGeometry) -> Result<f64> {
    if k.0 <= 0.0 || k.1 <= 0.0 {
        return Err(Error::Domain(format!("dilation factors must be positive, got {k:?}")));
    }
    let axes = AxisPair::default();
    let dilated = SampledSignal::from_fn(*time, |a, b| gen.eval(k.0 * a, k.1 * b));
    let lhs = qft_forward(&dilated, axes, freq).scale(k.0 * k.1);
    let scaled = GridGeometry::new(freq.n1, freq.n2, freq.delta1 / k.0, freq.delta2 / k.1, freq.origin1 / k.0, freq.origin2 / k.1)?;
    let rhs = qft_forward(&gen.sample(*time), axes, &scaled);
    Ok(lhs.values().iter().zip(rhs.values()).fold(0.0, |m, (a, b)| m.max(a.max_abs_diff(*b))))
}

/// Relative L² error between `F{∂^{m+n} f}` (central differences) and
/// `(i u1)^m F{f}(u) (j u2)^n` on the natural grid, through the FFT path.
pub fn derivative_relative_error(f: &SampledSignal, order: (usize, usize)) -> Result<f64> {
    let mut d = f.clone();
    for _ in 0..order.0 {
        d = central_difference(&d, 1);
    }
    for _ in 0..order.1 {
        d = central_difference(&d, 2);
    }
    let fg = natural_frequency_grid(f.geometry());
    let axes = AxisPair::default();
    let lhs = qft_fast(&d, axes, &fg)?;
    let spec = qft_fast(f, axes, &fg)?;
    let (mut num, mut den) = (0.0, 0.0);
    for p in 0..fg.n1 {
        let left = (0..order.0).fold(Quaternion::ONE, |acc, _| acc * Quaternion::I * fg.coord1(p));
        for q in 0..fg.n2 {
            let right = (0..order.1).fold(Quaternion::ONE, |acc, _| acc * Quaternion::J * fg.coord2(q));
            let expect = left * spec.get(p, q) * right;
            num += (lhs.get(p, q) - expect).norm_sqr();
            den += expect.norm_sqr();
        }
    }
    Ok((num / den).sqrt())
}
