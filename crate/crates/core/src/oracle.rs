//! Brute-force reference evaluators. Every output sample is a literal nested
//! sum with kernels evaluated in place; nothing is factored or tabulated.

use crate::error::{Error, Result};
use crate::grid::{GridGeometry, LagGrid, SampledSignal};
use crate::qft::{AxisPair, Spectrum};
use crate::qolct::{kernel_left, kernel_right, OffsetParams};
use crate::quaternion::{axis_exp, PureUnitAxis, Quaternion};
use crate::wvd::WvdGrid;

pub const TRANSFORM_GUARD: usize = 32;
pub const WVD_GUARD: usize = 8;

fn guard(what: &'static str, dims: &[usize], limit: usize, override_guard: bool) -> Result<()> {
    if override_guard {
        return Ok(());
    }
    match dims.iter().copied().max() {
        Some(size) if size > limit => Err(Error::SizeGuard { what, size, limit }),
        _ => Ok(()),
    }
}

/// `F(u) = Σ_t e^{-λ u1 t1} f(t) e^{-μ u2 t2} dt`.
pub fn oracle_qft(f: &SampledSignal, axes: AxisPair, freq_grid: &GridGeometry, override_guard: bool) -> Result<Spectrum> {
    let t = f.geometry();
    guard("oracle QFT", &[t.n1, t.n2, freq_grid.n1, freq_grid.n2], TRANSFORM_GUARD, override_guard)?;
    let mut out = SampledSignal::zeros(*freq_grid);
    for p in 0..freq_grid.n1 {
        for q in 0..freq_grid.n2 {
            let (u1, u2) = freq_grid.coord(p, q);
            let mut acc = Quaternion::ZERO;
            for k1 in 0..t.n1 {
                for k2 in 0..t.n2 {
                    let (t1, t2) = t.coord(k1, k2);
                    acc += axis_exp(axes.left, -u1 * t1) * f.get(k1, k2) * axis_exp(axes.right, -u2 * t2) * t.cell();
                }
            }
            out.set(p, q, acc);
        }
    }
    Ok(Spectrum::from_signal(out))
}

/// Closed-form value of one degenerate axis: `(prefactor, point)` such that the
/// output reads the input at `point`.
fn degenerate(p: &OffsetParams, axis: PureUnitAxis, u: f64) -> (Quaternion, f64) {
    let x = u - p.tau;
    let pre = axis_exp(axis, p.c * p.d / 2.0 * x * x + u * p.tau) * p.d.abs().sqrt();
    (pre, p.d * x)
}

fn nearest_index(origin: f64, delta: f64, n: usize, x: f64) -> Option<usize> {
    let k = ((x - origin) / delta).round();
    (k >= 0.0 && k < n as f64).then_some(k as usize)
}

/// Literal QOLCT of a sampled signal on `freq_grid`, four branches.
pub fn oracle_qolct(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, freq_grid: &GridGeometry, override_guard: bool) -> Result<Spectrum> {
    let t = f.geometry();
    guard("oracle QOLCT", &[t.n1, t.n2, freq_grid.n1, freq_grid.n2], TRANSFORM_GUARD, override_guard)?;
    let mut out = SampledSignal::zeros(*freq_grid);
    for p in 0..freq_grid.n1 {
        for q in 0..freq_grid.n2 {
            let (u1, u2) = freq_grid.coord(p, q);
            out.set(p, q, oracle_qolct_at(f, p1, p2, axes, u1, u2)?);
        }
    }
    Ok(Spectrum::from_signal(out))
}

fn oracle_qolct_at(f: &SampledSignal, p1: &OffsetParams, p2: &OffsetParams, axes: AxisPair, u1: f64, u2: f64) -> Result<Quaternion> {
    let t = f.geometry();
    let read = |k1: Option<usize>, k2: Option<usize>| match (k1, k2) {
        (Some(a), Some(b)) => f.get(a, b),
        _ => Quaternion::ZERO,
    };
    Ok(match (p1.is_degenerate(), p2.is_degenerate()) {
        (false, false) => {
            let mut acc = Quaternion::ZERO;
            for k1 in 0..t.n1 {
                for k2 in 0..t.n2 {
                    let (t1, t2) = t.coord(k1, k2);
                    let kl = kernel_left(p1, axes.left, t1, u1)?.value();
                    let kr = kernel_right(p2, axes.right, t2, u2)?.value();
                    acc += kl * f.get(k1, k2) * kr * t.cell();
                }
            }
            acc
        }
        (true, false) => {
            let (pre, x) = degenerate(p1, axes.left, u1);
            let k1 = nearest_index(t.origin1, t.delta1, t.n1, x);
            let mut acc = Quaternion::ZERO;
            for k2 in 0..t.n2 {
                let kr = kernel_right(p2, axes.right, t.coord2(k2), u2)?.value();
                acc += read(k1, Some(k2)) * kr * t.delta2;
            }
            pre * acc
        }
        (false, true) => {
            let (pre, x) = degenerate(p2, axes.right, u2);
            let k2 = nearest_index(t.origin2, t.delta2, t.n2, x);
            let mut acc = Quaternion::ZERO;
            for k1 in 0..t.n1 {
                let kl = kernel_left(p1, axes.left, t.coord1(k1), u1)?.value();
                acc += kl * read(Some(k1), k2) * t.delta1;
            }
            acc * pre
        }
        (true, true) => {
            let (pl, x1) = degenerate(p1, axes.left, u1);
            let (pr, x2) = degenerate(p2, axes.right, u2);
            pl * read(nearest_index(t.origin1, t.delta1, t.n1, x1), nearest_index(t.origin2, t.delta2, t.n2, x2)) * pr
        }
    })
}

/// WVD-QOLCT by a literal sum over `(t, s, u)`: for each time sample the lag
/// sum runs over `s = 2(t' - t)` with `f(t')·conj(g(2t - t'))`.
pub fn oracle_wvd(
    f: &SampledSignal,
    g: &SampledSignal,
    p1: &OffsetParams,
    p2: &OffsetParams,
    axes: AxisPair,
    freq_grid: &GridGeometry,
    override_guard: bool,
) -> Result<WvdGrid> {
    let t = *f.geometry();
    t.ensure_same(g.geometry())?;
    guard("oracle WVD", &[t.n1, t.n2], WVD_GUARD, override_guard)?;
    let mut values = Vec::with_capacity(t.len() * freq_grid.len());
    for k1 in 0..t.n1 {
        for k2 in 0..t.n2 {
            // materialise h on its lag lattice, then transform it literally
            let lag = LagGrid::at_sample(&t, k1, k2).geometry;
            let mut h = SampledSignal::zeros(lag);
            for j1 in 0..t.n1 {
                for j2 in 0..t.n2 {
                    let b1 = 2 * k1 as isize - j1 as isize;
                    let b2 = 2 * k2 as isize - j2 as isize;
                    h.set(j1, j2, f.get(j1, j2) * g.get_or_zero(b1, b2).conj());
                }
            }
            for p in 0..freq_grid.n1 {
                for q in 0..freq_grid.n2 {
                    let (u1, u2) = freq_grid.coord(p, q);
                    values.push(oracle_qolct_at(&h, p1, p2, axes, u1, u2)?);
                }
            }
        }
    }
    WvdGrid::from_parts(t, *freq_grid, false, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qft::qft_forward;

    #[test]
    fn guards_apply_unless_overridden() {
        let geom = GridGeometry::centered(33, 4.0).unwrap();
        let f = SampledSignal::zeros(geom);
        let fg = GridGeometry::centered(4, 1.0).unwrap();
        assert!(matches!(oracle_qft(&f, AxisPair::default(), &fg, false), Err(Error::SizeGuard { .. })));
        assert!(oracle_qft(&f, AxisPair::default(), &fg, true).is_ok());
        let w = GridGeometry::centered(9, 2.0).unwrap();
        let z = SampledSignal::zeros(w);
        let fp = OffsetParams::fourier();
        assert!(oracle_wvd(&z, &z, &fp, &fp, AxisPair::default(), &fg, false).is_err());
    }

    #[test]
    fn delta_spectrum_is_flat() {
        let geom = GridGeometry::centered(8, 2.0).unwrap();
        let mut f = SampledSignal::zeros(geom);
        f.set(4, 4, Quaternion::real(1.0 / geom.cell()));
        let s = oracle_qft(&f, AxisPair::default(), &GridGeometry::centered(5, 3.0).unwrap(), false).unwrap();
        assert!(s.values().iter().all(|q| q.max_abs_diff(Quaternion::ONE) < 1e-13));
    }

    #[test]
    fn agrees_with_separable_evaluation() {
        let geom = GridGeometry::new(8, 8, 0.5, 0.4, -2.0, -1.5).unwrap();
        let f = crate::signals::random_quaternion_grid(geom, 1);
        let fg = GridGeometry::centered(6, 2.0).unwrap();
        let a = oracle_qft(&f, AxisPair::default(), &fg, false).unwrap();
        let b = qft_forward(&f, AxisPair::default(), &fg);
        assert!(a.max_abs_diff(&b) < 1e-12);
    }
}
