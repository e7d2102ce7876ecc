//! Wigner-Ville distribution associated with the QOLCT.
//!
//! `W(t, u) = O{h_{f,g}(t, ·)}(u)` where `h_{f,g}(t, s) = f(t + s/2) conj(g(t - s/2))`.
//! Time points sit on the half-step lattice `t = origin + (m/2)·delta`; the
//! regular grid is `m` even, the refined grid (`2n - 1` points) is every `m`.
//! For each `m` the lag lattice is `s = (2k' - m)·delta`, spacing `2·delta`,
//! so `t ± s/2` always lands on a sample.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{correlation_product_half, real_component, GridGeometry, LagGrid, Reduction, SampledSignal};
use crate::qft::{AxisPair, Spectrum};
use crate::qolct::{qlct_forward, qolct_fast, qolct_forward, qolct_inverse, OffsetParams};
use crate::quaternion::Quaternion;

/// Upper bound on `time samples × frequency samples` held in one [`WvdGrid`].
pub const WVD_MAX_VALUES: usize = 1 << 24;

/// `W(t, u)` for every time sample, stored slice by slice (`t` major).
#[derive(Debug, Clone, PartialEq)]
pub struct WvdGrid {
    time: GridGeometry,
    freq: GridGeometry,
    /// 2 for the signal grid, 1 for the refined (half-step) grid.
    stride: usize,
    values: Vec<Quaternion>,
}

impl WvdGrid {
    /// `time` is the signal grid, or its refinement when `refined` is set.
    pub fn from_parts(time: GridGeometry, freq: GridGeometry, refined: bool, values: Vec<Quaternion>) -> Result<Self> {
        check_size(&time, &freq)?;
        if values.len() != time.len() * freq.len() {
            return Err(Error::GeometryMismatch(format!(
                "{} values for {} time × {} frequency samples",
                values.len(),
                time.len(),
                freq.len()
            )));
        }
        Ok(Self { time, freq, stride: if refined { 1 } else { 2 }, values })
    }

    pub fn time(&self) -> &GridGeometry {
        &self.time
    }

    pub fn freq(&self) -> &GridGeometry {
        &self.freq
    }

    pub fn is_refined(&self) -> bool {
        self.stride == 1
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    /// Half-step index `(m1, m2)` of time sample `(k1, k2)`.
    pub fn half_index(&self, k1: usize, k2: usize) -> (usize, usize) {
        (self.stride * k1, self.stride * k2)
    }

    pub fn get(&self, t: (usize, usize), u: (usize, usize)) -> Quaternion {
        let slice = self.time.index(t.0, t.1) * self.freq.len();
        self.values[slice + self.freq.index(u.0, u.1)]
    }

    pub fn slice_values(&self, k1: usize, k2: usize) -> &[Quaternion] {
        let m = self.freq.len();
        let start = self.time.index(k1, k2) * m;
        &self.values[start..start + m]
    }

    pub fn slice(&self, k1: usize, k2: usize) -> Spectrum {
        Spectrum::new(self.freq, self.slice_values(k1, k2).to_vec()).expect("slice sized from freq")
    }

    /// `Σ_t Σ_u |W(t,u)|² du dt` (plain modulus, not the module norm).
    pub fn energy(&self, reduction: Reduction) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|q| q.norm_sqr()).collect();
        reduction.sum(&sq) * self.time.cell() * self.freq.cell()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max(a.max_abs_diff(*b)))
    }
}

fn wvd_axis_grid(p: &OffsetParams, n: usize, delta: f64) -> (usize, f64, f64) {
    if p.is_degenerate() {
        // image of every lag `jδ`, |j| ≤ 2n-2, under u = τ + s/d
        let m = 4 * n - 3;
        let du = delta / p.d.abs();
        (m, du, p.tau - (2 * n - 2) as f64 * du)
    } else {
        let du = 2.0 * PI * p.b.abs() / (n as f64 * 2.0 * delta);
        (n, du, -((n / 2) as f64) * du)
    }
}

/// Frequency grid matched to the lag lattice: `n` points at `2π|b|/(n·2·delta)`
/// for `b ≠ 0`, the image of all lags for `b = 0`.
pub fn wvd_frequency_grid(time: &GridGeometry, p1: &OffsetParams, p2: &OffsetParams) -> GridGeometry {
    let (m1, d1, o1) = wvd_axis_grid(p1, time.n1, time.delta1);
    let (m2, d2, o2) = wvd_axis_grid(p2, time.n2, time.delta2);
    GridGeometry::new(m1, m2, d1, d2, o1, o2).expect("derived from a valid grid")
}

fn check_size(time: &GridGeometry, freq: &GridGeometry) -> Result<()> {
    let size = time.len().saturating_mul(freq.len());
    if size > WVD_MAX_VALUES {
        return Err(Error::SizeGuard { what: "WVD grid", size, limit: WVD_MAX_VALUES });
    }
    Ok(())
}

/// One slice `W(t_m, ·)` at half-step index `m`; the streaming primitive.
pub fn wvd_slice_half(
    f: &SampledSignal,
    g: &SampledSignal,
    p1: &OffsetParams,
    p2: &OffsetParams,
    axes: AxisPair,
    freq_grid: &GridGeometry,
    m: (usize, usize),
) -> Result<Spectrum> {
    let h = correlation_product_half(f, g, m.0, m.1)?;
    Ok(qolct_forward(&h, p1, p2, axes, freq_grid))
}

fn build<F>(f: &SampledSignal, g: &SampledSignal, freq_grid: &GridGeometry, stride: usize, slice: F) -> Result<WvdGrid>
where
    F: Fn(&SampledSignal) -> Result<Spectrum> + Sync,
{
    f.geometry().ensure_same(g.geometry())?;
    let time = if stride == 1 { f.geometry().refined() } else { *f.geometry() };
    check_size(&time, freq_grid)?;
    let slices: Vec<Spectrum> = (0..time.len())
        .into_par_iter()
        .map(|idx| {
            let (k1, k2) = (idx / time.n2, idx % time.n2);
            let h = correlation_product_half(f, g, stride * k1, stride * k2)?;
            slice(&h)
        })
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(time.len() * freq_grid.len());
    for s in slices {
        values.extend_from_slice(s.values());
    }
    Ok(WvdGrid { time, freq: *freq_grid, stride, values })
}

/// WVD-QOLCT on the signal's own time grid, all four `(b1, b2)` branches.
pub fn wvd_qolct(f: &SampledSignal, g: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, freq_grid: &GridGeometry) -> Result<WvdGrid> {
    build(f, g, freq_grid, 2, |h| Ok(qolct_forward(h, p1, p2, axes, freq_grid)))
}

/// As [`wvd_qolct`] on the refined time grid (`2n - 1` points per axis at `delta/2`).
pub fn wvd_qolct_refined(
    f: &SampledSignal,
    g: &SampledSignal,
    p1: &OffsetParams,
    p2: &OffsetParams,
    axes: AxisPair,
    freq_grid: &GridGeometry,
) -> Result<WvdGrid> {
    build(f, g, freq_grid, 1, |h| Ok(qolct_forward(h, p1, p2, axes, freq_grid)))
}

/// Same pipeline with offset-free canonical kernels (the WVD-QLCT).
pub fn wvd_qlct(f: &SampledSignal, g: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, freq_grid: &GridGeometry) -> Result<WvdGrid> {
    build(f, g, freq_grid, 2, |h| Ok(qlct_forward(h, p1, p2, axes, freq_grid)))
}

/// FFT route (`λ = i, μ = j`, `b1·b2 ≠ 0`): each slice is the QFT of the
/// chirp-premultiplied correlation product at `u/b`.
pub fn wvd_via_qft(f: &SampledSignal, g: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, freq_grid: &GridGeometry) -> Result<WvdGrid> {
    if p1.is_degenerate() {
        return Err(Error::DegenerateBranch { axis: 1 });
    }
    if p2.is_degenerate() {
        return Err(Error::DegenerateBranch { axis: 2 });
    }
    build(f, g, freq_grid, 2, |h| qolct_fast(h, p1, p2, freq_grid))
}

/// Recovers `f` from `W_{f,g}` on the refined grid and the window `g`:
///
/// ```text
/// f(v) = (1/|g|²) Σ_ε h((v+ε)/2, v-ε) g(ε) dε,
/// h(t, s) = Σ_u conj(K^λ(s1,u1)) W(t,u) conj(K^μ(s2,u2)) du
/// ```
pub fn wvd_inverse(w: &WvdGrid, g: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair) -> Result<SampledSignal> {
    let geom = *g.geometry();
    if !w.is_refined() {
        return Err(Error::GeometryMismatch("inversion needs the distribution on the refined time grid".into()));
    }
    w.time.ensure_same(&geom.refined())?;
    let g_energy = g.energy();
    if !(g_energy > 0.0) {
        return Err(Error::ZeroWindow);
    }
    // h on the lag lattice of every half-step time
    let lags: Vec<SampledSignal> = (0..w.time.len())
        .into_par_iter()
        .map(|idx| {
            let (m1, m2) = (idx / w.time.n2, idx % w.time.n2);
            let lag = LagGrid::at_half_index(&geom, m1, m2);
            qolct_inverse(&w.slice(m1, m2), p1, p2, axes, &lag.geometry)
        })
        .collect();
    let mut out = SampledSignal::zeros(geom);
    let weight = geom.cell() / g_energy;
    for v1 in 0..geom.n1 {
        for v2 in 0..geom.n2 {
            let mut acc = Quaternion::ZERO;
            for e1 in 0..geom.n1 {
                for e2 in 0..geom.n2 {
                    // s = v - ε is lag index v on the lattice of m = v + ε
                    let h = lags[w.time.index(v1 + e1, v2 + e2)].get(v1, v2);
                    acc += h * g.get(e1, e2);
                }
            }
            out.set(v1, v2, acc * weight);
        }
    }
    Ok(out)
}

/// `‖W_{f,g}‖²_{2,Q}` from the four component transforms of `h`, on the
/// signal's time grid, streamed slice by slice.
pub fn wvd_module_energy(
    f: &SampledSignal,
    g: &SampledSignal,
    p1: &OffsetParams,
    p2: &OffsetParams,
    axes: AxisPair,
    freq_grid: &GridGeometry,
    reduction: Reduction,
) -> Result<f64> {
    f.geometry().ensure_same(g.geometry())?;
    let time = *f.geometry();
    let per_t: Vec<f64> = (0..time.len())
        .into_par_iter()
        .map(|idx| {
            let h = correlation_product_half(f, g, 2 * (idx / time.n2), 2 * (idx % time.n2))?;
            let mut sq = Vec::with_capacity(4 * freq_grid.len());
            for m in 0..4 {
                let part = real_component(&h, m);
                if part.values().iter().all(|q| *q == Quaternion::ZERO) {
                    continue;
                }
                sq.extend(qolct_forward(&part, p1, p2, axes, freq_grid).values().iter().map(|q| q.norm_sqr()));
            }
            Ok(reduction.sum(&sq))
        })
        .collect::<Result<_>>()?;
    Ok(reduction.sum(&per_t) * time.cell() * freq_grid.cell())
}

/// `(‖W_{f,g}‖_{2,Q}, |f|_{2,Q}·|g|_{2,Q})` on [`wvd_frequency_grid`].
pub fn wvd_plancherel_check(f: &SampledSignal, g: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair) -> Result<(f64, f64)> {
    let fg = wvd_frequency_grid(f.geometry(), p1, p2);
    let lhs = wvd_module_energy(f, g, p1, p2, axes, &fg, Reduction::Ordered)?.sqrt();
    Ok((lhs, f.l2_norm() * g.l2_norm()))
}
