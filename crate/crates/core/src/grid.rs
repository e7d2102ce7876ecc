//! Uniformly sampled 2D quaternion signals, Riemann-sum quadrature, and the
//! symmetric-lag correlation product used by the Wigner-Ville distribution.
//!
//! Samples are stored row-major: sample `(k1, k2)` lives at `k1 * n2 + k2` and
//! sits at `(origin1 + k1 * delta1, origin2 + k2 * delta2)`. Reads outside the
//! grid return zero, so every signal is treated as compactly supported.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub n1: usize,
    pub n2: usize,
    pub delta1: f64,
    pub delta2: f64,
    pub origin1: f64,
    pub origin2: f64,
}

impl GridGeometry {
    pub fn new(n1: usize, n2: usize, delta1: f64, delta2: f64, origin1: f64, origin2: f64) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::InvalidGeometry(format!("need at least 2 samples per axis, got {n1}x{n2}")));
        }
        if !(delta1 > 0.0 && delta2 > 0.0) || !delta1.is_finite() || !delta2.is_finite() {
            return Err(Error::InvalidGeometry(format!("spacing must be positive, got ({delta1}, {delta2})")));
        }
        if !origin1.is_finite() || !origin2.is_finite() {
            return Err(Error::InvalidGeometry("origin must be finite".into()));
        }
        Ok(Self { n1, n2, delta1, delta2, origin1, origin2 })
    }

    /// Square `n × n` grid covering `[-extent, extent)` with `t = 0` at index `n/2`.
    pub fn centered(n: usize, extent: f64) -> Result<Self> {
        let delta = 2.0 * extent / n as f64;
        Self::new(n, n, delta, delta, -((n / 2) as f64) * delta, -((n / 2) as f64) * delta)
    }

    /// Grid whose sample `n/2` sits at zero on both axes.
    pub fn centered_with_spacing(n1: usize, n2: usize, delta1: f64, delta2: f64) -> Result<Self> {
        Self::new(n1, n2, delta1, delta2, -((n1 / 2) as f64) * delta1, -((n2 / 2) as f64) * delta2)
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight `delta1 · delta2`.
    pub fn cell(&self) -> f64 {
        self.delta1 * self.delta2
    }

    pub fn coord1(&self, k1: usize) -> f64 {
        self.origin1 + k1 as f64 * self.delta1
    }

    pub fn coord2(&self, k2: usize) -> f64 {
        self.origin2 + k2 as f64 * self.delta2
    }

    pub fn coord(&self, k1: usize, k2: usize) -> (f64, f64) {
        (self.coord1(k1), self.coord2(k2))
    }

    pub fn index(&self, k1: usize, k2: usize) -> usize {
        k1 * self.n2 + k2
    }

    /// Nearest sample index to a coordinate, or `None` when it falls off the grid.
    pub fn nearest(&self, t1: f64, t2: f64) -> Option<(usize, usize)> {
        let k1 = ((t1 - self.origin1) / self.delta1).round();
        let k2 = ((t2 - self.origin2) / self.delta2).round();
        if k1 < 0.0 || k2 < 0.0 || k1 >= self.n1 as f64 || k2 >= self.n2 as f64 {
            return None;
        }
        Some((k1 as usize, k2 as usize))
    }

    /// The `2n-1` point lattice with half the spacing, sharing the origin.
    /// Midpoints `(v + ε)/2` of any two samples land on it exactly.
    pub fn refined(&self) -> Self {
        Self {
            n1: 2 * self.n1 - 1,
            n2: 2 * self.n2 - 1,
            delta1: self.delta1 / 2.0,
            delta2: self.delta2 / 2.0,
            origin1: self.origin1,
            origin2: self.origin2,
        }
    }

    pub fn ensure_same(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(Error::GeometryMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// How floating-point accumulations over large grids are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// Left-to-right sums; bit-reproducible.
    #[default]
    Ordered,
    /// Rayon tree reduction; order may vary between runs.
    Parallel,
}

impl Reduction {
    pub fn sum(self, values: &[f64]) -> f64 {
        match self {
            Reduction::Ordered => values.iter().sum(),
            Reduction::Parallel => values.par_iter().sum(),
        }
    }
}

/// A real-valued grid, one component of a quaternion signal.
#[derive(Debug, Clone, PartialEq)]
pub struct RealGrid {
    pub geometry: GridGeometry,
    pub values: Vec<f64>,
}

/// A uniformly sampled quaternion-valued function on a 2D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    geometry: GridGeometry,
    values: Vec<Quaternion>,
}

impl SampledSignal {
    pub fn new(geometry: GridGeometry, values: Vec<Quaternion>) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(Error::InvalidGeometry(format!(
                "{} values for a {}x{} grid",
                values.len(),
                geometry.n1,
                geometry.n2
            )));
        }
        Ok(Self { geometry, values })
    }

    pub fn zeros(geometry: GridGeometry) -> Self {
        Self { geometry, values: vec![Quaternion::ZERO; geometry.len()] }
    }

    /// Samples `f(t1, t2)` at every grid coordinate.
    pub fn from_fn(geometry: GridGeometry, mut f: impl FnMut(f64, f64) -> Quaternion) -> Self {
        let mut values = Vec::with_capacity(geometry.len());
        for k1 in 0..geometry.n1 {
            for k2 in 0..geometry.n2 {
                let (t1, t2) = geometry.coord(k1, k2);
                values.push(f(t1, t2));
            }
        }
        Self { geometry, values }
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Quaternion] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Quaternion> {
        self.values
    }

    pub fn get(&self, k1: usize, k2: usize) -> Quaternion {
        self.values[self.geometry.index(k1, k2)]
    }

    pub fn set(&mut self, k1: usize, k2: usize, q: Quaternion) {
        let i = self.geometry.index(k1, k2);
        self.values[i] = q;
    }

    /// Zero-extended read at signed indices.
    pub fn get_or_zero(&self, k1: isize, k2: isize) -> Quaternion {
        if k1 < 0 || k2 < 0 || k1 as usize >= self.geometry.n1 || k2 as usize >= self.geometry.n2 {
            Quaternion::ZERO
        } else {
            self.get(k1 as usize, k2 as usize)
        }
    }

    /// Nearest-sample point evaluation, zero off the grid.
    pub fn sample_nearest(&self, t1: f64, t2: f64) -> Quaternion {
        match self.geometry.nearest(t1, t2) {
            Some((k1, k2)) => self.get(k1, k2),
            None => Quaternion::ZERO,
        }
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> Self {
        Self { geometry: self.geometry, values: self.values.iter().map(|&q| f(q)).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|q| q * s)
    }

    /// Left-multiplies every sample by `q`.
    pub fn left_mul(&self, q: Quaternion) -> Self {
        self.map(|v| q * v)
    }

    pub fn right_mul(&self, q: Quaternion) -> Self {
        self.map(|v| v * q)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.geometry.ensure_same(&other.geometry)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect();
        Ok(Self { geometry: self.geometry, values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.geometry.ensure_same(&other.geometry)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a - b).collect();
        Ok(Self { geometry: self.geometry, values })
    }

    /// `|f|_{2,Q}`.
    pub fn l2_norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// `|f|²_{2,Q} = Σ |f(t)|² dt`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|q| q.norm_sqr()).sum::<f64>() * self.geometry.cell()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, q| m.max(q.modulus()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (&a, &b)| m.max(a.max_abs_diff(b)))
    }

    /// `|f - g|_{2,Q} / |g|_{2,Q}`.
    pub fn relative_l2_error(&self, reference: &Self) -> Result<f64> {
        let diff = self.sub(reference)?;
        let r = reference.l2_norm();
        if r == 0.0 {
            return Ok(diff.l2_norm());
        }
        Ok(diff.l2_norm() / r)
    }
}

/// `(Σ |f(t)|^p dt)^{1/p}`; `p = ∞` gives the sup norm.
pub fn lp_norm(f: &SampledSignal, p: f64) -> Result<f64> {
    if f.values.is_empty() {
        return Err(Error::EmptySignal);
    }
    if p.is_infinite() && p > 0.0 {
        return Ok(f.sup_norm());
    }
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("L^p norm needs p >= 1, got {p}")));
    }
    let dt = f.geometry.cell();
    let s: f64 = f.values.iter().map(|q| q.modulus().powf(p)).sum::<f64>() * dt;
    Ok(s.powf(1.0 / p))
}

/// `<f, g> = Σ f(t) ḡ(t) dt`.
pub fn inner_product(f: &SampledSignal, g: &SampledSignal) -> Result<Quaternion> {
    f.geometry.ensure_same(&g.geometry)?;
    let s: Quaternion = f.values.iter().zip(&g.values).map(|(&a, &b)| a * b.conj()).sum();
    Ok(s * f.geometry.cell())
}

/// Splits `f = f0 + i f1 + j f2 + k f3` into its four real grids.
pub fn component_split(f: &SampledSignal) -> [RealGrid; 4] {
    std::array::from_fn(|m| RealGrid {
        geometry: f.geometry,
        values: f.values.iter().map(|q| q.component(m)).collect(),
    })
}

pub fn recombine(parts: &[RealGrid; 4]) -> Result<SampledSignal> {
    let geometry = parts[0].geometry;
    for p in &parts[1..] {
        geometry.ensure_same(&p.geometry)?;
    }
    let values = (0..geometry.len())
        .map(|i| Quaternion::new(parts[0].values[i], parts[1].values[i], parts[2].values[i], parts[3].values[i]))
        .collect();
    SampledSignal::new(geometry, values)
}

/// The real component `m` of `f`, embedded as a quaternion signal (`f_m · 1`).
pub fn real_component(f: &SampledSignal, m: usize) -> SampledSignal {
    f.map(|q| Quaternion::real(q.component(m)))
}

/// Central difference `(f(t + δ e_axis) - f(t - δ e_axis)) / 2δ`, zero-extended.
pub fn central_difference(f: &SampledSignal, axis: usize) -> SampledSignal {
    let g = f.geometry;
    let mut out = SampledSignal::zeros(g);
    for k1 in 0..g.n1 as isize {
        for k2 in 0..g.n2 as isize {
            let (fwd, back, h) = match axis {
                1 => (f.get_or_zero(k1 + 1, k2), f.get_or_zero(k1 - 1, k2), g.delta1),
                _ => (f.get_or_zero(k1, k2 + 1), f.get_or_zero(k1, k2 - 1), g.delta2),
            };
            out.set(k1 as usize, k2 as usize, (fwd - back) / (2.0 * h));
        }
    }
    out
}

/// Lag lattice for the correlation product at a time point on the half-step lattice.
///
/// The time point is `t = origin + (m/2)·delta` per axis (`m` is the index on
/// [`GridGeometry::refined`]; `m = 2k` for ordinary samples). Lags are
/// `s = (2k' - m)·delta` for `k' = 0..n`, so `t ± s/2` always hits a sample.
/// Spacing is `2·delta` and the lag quadrature weight is `4·delta1·delta2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagGrid {
    pub geometry: GridGeometry,
    pub half_index: (usize, usize),
}

impl LagGrid {
    pub fn at_half_index(time: &GridGeometry, m1: usize, m2: usize) -> Self {
        let geometry = GridGeometry {
            n1: time.n1,
            n2: time.n2,
            delta1: 2.0 * time.delta1,
            delta2: 2.0 * time.delta2,
            origin1: -(m1 as f64) * time.delta1,
            origin2: -(m2 as f64) * time.delta2,
        };
        Self { geometry, half_index: (m1, m2) }
    }

    pub fn at_sample(time: &GridGeometry, k1: usize, k2: usize) -> Self {
        Self::at_half_index(time, 2 * k1, 2 * k2)
    }

    /// Time coordinate the lags are centred on.
    pub fn time_point(&self, time: &GridGeometry) -> (f64, f64) {
        (
            time.origin1 + self.half_index.0 as f64 * time.delta1 / 2.0,
            time.origin2 + self.half_index.1 as f64 * time.delta2 / 2.0,
        )
    }
}

/// `h(t, s) = f(t + s/2) · conj(g(t - s/2))` on the lag lattice of the
/// half-step time index `(m1, m2)`.
pub fn correlation_product_half(f: &SampledSignal, g: &SampledSignal, m1: usize, m2: usize) -> Result<SampledSignal> {
    f.geometry.ensure_same(&g.geometry)?;
    let lag = LagGrid::at_half_index(&f.geometry, m1, m2);
    let (n1, n2) = (f.geometry.n1, f.geometry.n2);
    let mut values = Vec::with_capacity(n1 * n2);
    for k1 in 0..n1 {
        let r1 = m1 as isize - k1 as isize;
        for k2 in 0..n2 {
            let r2 = m2 as isize - k2 as isize;
            let back = g.get_or_zero(r1, r2);
            values.push(if back == Quaternion::ZERO { Quaternion::ZERO } else { f.get(k1, k2) * back.conj() });
        }
    }
    SampledSignal::new(lag.geometry, values)
}

/// Correlation product at time sample `t_index`.
pub fn correlation_product(f: &SampledSignal, g: &SampledSignal, t_index: (usize, usize)) -> Result<SampledSignal> {
    correlation_product_half(f, g, 2 * t_index.0, 2 * t_index.1)
}
