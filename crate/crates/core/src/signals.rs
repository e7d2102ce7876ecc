//! Test-signal factory: Gaussians (with analytic transforms), chirps, deltas
//! and seeded random signals.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{GridGeometry, SampledSignal};
use crate::quaternion::{axis_exp, PureUnitAxis, Quaternion};

/// `amplitude · exp(-(t1-c1)²/(2σ1²) - (t2-c2)²/(2σ2²))`, with closed-form transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianGenerator {
    pub amplitude: Quaternion,
    pub center: (f64, f64),
    pub sigma: (f64, f64),
}

impl GaussianGenerator {
    pub fn new(amplitude: Quaternion, center: (f64, f64), sigma: (f64, f64)) -> Self {
        Self { amplitude, center, sigma }
    }

    /// `e^{-π|t|²}`, the self-dual Gaussian of the cyclic convention.
    pub fn unit_cyclic() -> Self {
        let s = (2.0 * PI).sqrt().recip();
        Self::new(Quaternion::ONE, (0.0, 0.0), (s, s))
    }

    pub fn envelope1(&self, t1: f64) -> f64 {
        let x = (t1 - self.center.0) / self.sigma.0;
        (-0.5 * x * x).exp()
    }

    pub fn envelope2(&self, t2: f64) -> f64 {
        let x = (t2 - self.center.1) / self.sigma.1;
        (-0.5 * x * x).exp()
    }

    pub fn eval(&self, t1: f64, t2: f64) -> Quaternion {
        self.amplitude * (self.envelope1(t1) * self.envelope2(t2))
    }

    pub fn sample(&self, geometry: GridGeometry) -> SampledSignal {
        SampledSignal::from_fn(geometry, |a, b| self.eval(a, b))
    }

    /// `|f|²_{2,Q} = |amplitude|² π σ1 σ2`.
    pub fn energy(&self) -> f64 {
        self.amplitude.norm_sqr() * PI * self.sigma.0 * self.sigma.1
    }

    /// Angular-convention two-sided QFT with `λ = i`, `μ = j`.
    pub fn qft_ij(&self, u1: f64, u2: f64) -> Quaternion {
        let a1 = self.sigma.0 * (2.0 * PI).sqrt() * (-0.5 * (self.sigma.0 * u1).powi(2)).exp();
        let a2 = self.sigma.1 * (2.0 * PI).sqrt() * (-0.5 * (self.sigma.1 * u2).powi(2)).exp();
        let phi = axis_exp(PureUnitAxis::I, -u1 * self.center.0) * a1;
        let phi_mirror = axis_exp(PureUnitAxis::I, u1 * self.center.0) * a1;
        let psi = axis_exp(PureUnitAxis::J, -u2 * self.center.1) * a2;
        let q = self.amplitude;
        // e^{-iα} commutes with q0 + q1 i and flips sign through q2 j + q3 k
        let commuting = Quaternion::new(q.q0, q.q1, 0.0, 0.0);
        let flipping = Quaternion::new(0.0, 0.0, q.q2, q.q3);
        (commuting * phi + flipping * phi_mirror) * psi
    }

    /// Cyclic convention `f̂(ξ) = ∫ e^{-2πi ξ1 s1} f(s) e^{-2πj ξ2 s2} ds`.
    pub fn qft_cyclic(&self, xi1: f64, xi2: f64) -> Quaternion {
        self.qft_ij(2.0 * PI * xi1, 2.0 * PI * xi2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Gaussian,
    ShiftedGaussian,
    Chirp,
    Delta,
}

impl FromStr for GeneratorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "shifted-gaussian" => Ok(Self::ShiftedGaussian),
            "chirp" => Ok(Self::Chirp),
            "delta" => Ok(Self::Delta),
            other => Err(Error::Parse(format!("unknown signal kind `{other}`"))),
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Gaussian => "gaussian",
            Self::ShiftedGaussian => "shifted-gaussian",
            Self::Chirp => "chirp",
            Self::Delta => "delta",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub sigma: f64,
    pub center: (f64, f64),
    /// Quadratic phase rate for chirps: phase `rate·|t|²` about the `i` axis.
    pub rate: f64,
    pub amplitude: Quaternion,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self { sigma: 1.0, center: (0.0, 0.0), rate: 0.5, amplitude: Quaternion::ONE }
    }
}

/// Deterministic test signal of the given kind. `Gaussian` ignores the
/// centre; `Delta` puts weight `1/dt` on the sample nearest the centre.
pub fn generate(kind: GeneratorKind, params: &GeneratorParams, geometry: GridGeometry) -> Result<SampledSignal> {
    if !(params.sigma > 0.0) {
        return Err(Error::Domain(format!("sigma must be positive, got {}", params.sigma)));
    }
    Ok(match kind {
        GeneratorKind::Gaussian => gaussian(geometry, params.sigma, (0.0, 0.0), params.amplitude),
        GeneratorKind::ShiftedGaussian => gaussian(geometry, params.sigma, params.center, params.amplitude),
        GeneratorKind::Chirp => chirp(geometry, params.sigma, params.rate, params.amplitude),
        GeneratorKind::Delta => {
            let (k1, k2) = geometry
                .nearest(params.center.0, params.center.1)
                .ok_or_else(|| Error::Domain("delta position is off the grid".into()))?;
            let mut f = SampledSignal::zeros(geometry);
            f.set(k1, k2, params.amplitude * (1.0 / geometry.cell()));
            f
        }
    })
}

/// Isotropic Gaussian `amplitude · e^{-|t-c|²/(2σ²)}`.
pub fn gaussian(geometry: GridGeometry, sigma: f64, center: (f64, f64), amplitude: Quaternion) -> SampledSignal {
    GaussianGenerator::new(amplitude, center, (sigma, sigma)).sample(geometry)
}

/// Gaussian envelope times the unimodular phase `e^{i·rate·|t|²}`.
pub fn chirp(geometry: GridGeometry, sigma: f64, rate: f64, amplitude: Quaternion) -> SampledSignal {
    SampledSignal::from_fn(geometry, |a, b| {
        let r2 = a * a + b * b;
        axis_exp(PureUnitAxis::I, rate * r2) * amplitude * (-r2 / (2.0 * sigma * sigma)).exp()
    })
}

/// Independent uniform components in `[-1, 1)` per sample.
pub fn random_quaternion_grid(geometry: GridGeometry, seed: u64) -> SampledSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..geometry.len()).map(|_| random_quaternion(&mut rng)).collect();
    SampledSignal::new(geometry, values).expect("sized from geometry")
}

/// A smooth, rapidly decaying signal: three Gaussian bumps with random
/// quaternion amplitudes, centres within `±1` and widths in `[0.7, 1.2]`.
pub fn random_smooth(geometry: GridGeometry, seed: u64) -> SampledSignal {
    let bumps = random_smooth_bumps(seed);
    SampledSignal::from_fn(geometry, |a, b| bumps.iter().map(|g| g.eval(a, b)).sum())
}

/// The bumps behind [`random_smooth`].
pub fn random_smooth_bumps(seed: u64) -> Vec<GaussianGenerator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    (0..3)
        .map(|_| {
            let amplitude = random_quaternion(&mut rng);
            let center = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let s = rng.gen_range(0.7..1.2);
            GaussianGenerator::new(amplitude, center, (s, s))
        })
        .collect()
}

fn random_quaternion(rng: &mut impl Rng) -> Quaternion {
    Quaternion::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}
