//! FFT evaluation of the two-sided (left `i`, right `j`) exponential sum
//!
//! ```text
//! S(u) = Σ_t e^{-i u1 t1} f(t) e^{-j u2 t2}
//! ```
//!
//! on grids where `|du|·dt·N = 2π` for some integer `N` at least as large as
//! both the input and output lengths. Each real component `f_m` goes through
//! one complex FFT pass along axis 1 and two along axis 2, giving the four
//! real sums `CC, SC, CS, SS`; the `j` and `k` components pick up the
//! mirrored frequency `-u1` because `e^{-iα} j = j e^{iα}`.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

/// Sample positions `t0 + j·dt` (`j < n`) and frequencies `u0 + k·du` (`k < m`) on one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSampling {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
    pub u0: f64,
    /// May be negative (frequencies scaled by a negative `1/b`).
    pub du: f64,
    pub m: usize,
}

const COMMENSURATE_TOL: f64 = 1e-9;

struct AxisDft {
    fft: Arc<dyn Fft<f64>>,
    big_n: usize,
    n: usize,
    m: usize,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    reversed: bool,
}

impl AxisDft {
    fn plan(planner: &mut FftPlanner<f64>, s: AxisSampling, axis: usize) -> Result<Self> {
        let step = (s.du * s.dt).abs();
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::IncommensurateGrid { axis, detail: format!("degenerate spacing du={}, dt={}", s.du, s.dt) });
        }
        let ratio = 2.0 * std::f64::consts::PI / step;
        let big_n = ratio.round();
        if (ratio - big_n).abs() > COMMENSURATE_TOL * ratio || big_n < 1.0 {
            return Err(Error::IncommensurateGrid { axis, detail: format!("2π/(|du|·dt) = {ratio} is not an integer") });
        }
        let big_n = big_n as usize;
        if big_n < s.n || big_n < s.m {
            return Err(Error::IncommensurateGrid {
                axis,
                detail: format!("FFT length {big_n} shorter than input {} or output {}", s.n, s.m),
            });
        }
        let reversed = s.du < 0.0;
        let (u_start, du) = if reversed { (s.u0 + (s.m as f64 - 1.0) * s.du, -s.du) } else { (s.u0, s.du) };
        let pre = (0..s.n).map(|j| Complex64::from_polar(1.0, -u_start * j as f64 * s.dt)).collect();
        let post = (0..s.m).map(|k| Complex64::from_polar(1.0, -(u_start + k as f64 * du) * s.t0)).collect();
        Ok(Self { fft: planner.plan_fft_forward(big_n), big_n, n: s.n, m: s.m, pre, post, reversed })
    }

    /// `out[k] = Σ_j input[j] e^{-i u_k t_j}`.
    fn apply(&self, input: &[Complex64], buf: &mut Vec<Complex64>, out: &mut [Complex64]) {
        buf.clear();
        buf.extend(input.iter().zip(&self.pre).map(|(x, p)| x * p));
        buf.resize(self.big_n, Complex64::new(0.0, 0.0));
        self.fft.process(buf);
        for k in 0..self.m {
            let v = buf[k] * self.post[k];
            let slot = if self.reversed { self.m - 1 - k } else { k };
            out[slot] = v;
        }
        debug_assert_eq!(input.len(), self.n);
    }
}

/// Unweighted two-sided sum for `λ = i`, `μ = j`.
///
/// `values` is row-major `n1 × n2`; the result is row-major `m1 × m2`.
pub fn two_sided_ij(values: &[Quaternion], axis1: AxisSampling, axis2: AxisSampling) -> Result<Vec<Quaternion>> {
    let mut planner = FftPlanner::new();
    let d1 = AxisDft::plan(&mut planner, axis1, 1)?;
    let d2 = AxisDft::plan(&mut planner, axis2, 2)?;
    let (n1, n2, m1, m2) = (axis1.n, axis2.n, axis1.m, axis2.m);
    assert_eq!(values.len(), n1 * n2, "input length does not match sampling");

    let mut out = vec![Quaternion::ZERO; m1 * m2];
    let mut buf = Vec::new();
    let mut col_in = vec![Complex64::new(0.0, 0.0); n1];
    let mut col_out = vec![Complex64::new(0.0, 0.0); m1];
    let mut row_c = vec![Complex64::new(0.0, 0.0); n2];
    let mut row_s = vec![Complex64::new(0.0, 0.0); n2];
    let mut cc = vec![Complex64::new(0.0, 0.0); m2];
    let mut ss = vec![Complex64::new(0.0, 0.0); m2];

    for m in 0..4 {
        if values.iter().all(|q| q.component(m) == 0.0) {
            continue;
        }
        // axis 1: G(u1, k2) = C - i S
        let mut g = vec![Complex64::new(0.0, 0.0); m1 * n2];
        for k2 in 0..n2 {
            for k1 in 0..n1 {
                col_in[k1] = Complex64::new(values[k1 * n2 + k2].component(m), 0.0);
            }
            d1.apply(&col_in, &mut buf, &mut col_out);
            for (a, v) in col_out.iter().enumerate() {
                g[a * n2 + k2] = *v;
            }
        }
        // axis 2 on the real arrays C and S
        for a in 0..m1 {
            for k2 in 0..n2 {
                let v = g[a * n2 + k2];
                row_c[k2] = Complex64::new(v.re, 0.0);
                row_s[k2] = Complex64::new(-v.im, 0.0);
            }
            d2.apply(&row_c, &mut buf, &mut cc);
            d2.apply(&row_s, &mut buf, &mut ss);
            for b in 0..m2 {
                // Σ C e^{-iβ} = CC - i CS,  Σ S e^{-iβ} = SC - i SS
                let (c_c, c_s) = (cc[b].re, -cc[b].im);
                let (s_c, s_s) = (ss[b].re, -ss[b].im);
                let contrib = match m {
                    0 => Quaternion::new(c_c, -s_c, -c_s, s_s),
                    1 => Quaternion::I * Quaternion::new(c_c, -s_c, -c_s, s_s),
                    2 => Quaternion::J * Quaternion::new(c_c, s_c, -c_s, -s_s),
                    _ => Quaternion::K * Quaternion::new(c_c, s_c, -c_s, -s_s),
                };
                out[a * m2 + b] += contrib;
            }
        }
    }
    Ok(out)
}
