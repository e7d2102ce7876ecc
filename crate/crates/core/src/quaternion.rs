//! Hamilton quaternions and the axis exponentials the transform kernels are built from.
//!
//! Multiplication follows `ij = -ji = k`, `jk = -kj = i`, `ki = -ik = j`,
//! `i² = j² = k² = -1`. Nothing here commutes factors, so callers control the
//! left/right placement of every kernel.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// `q0 + i q1 + j q2 + k q3`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Self { q0, q1, q2, q3 }
    }

    pub const fn real(r: f64) -> Self {
        Self::new(r, 0.0, 0.0, 0.0)
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    /// Real component `m` (0 = scalar, 1 = i, 2 = j, 3 = k).
    pub fn component(self, m: usize) -> f64 {
        self.to_array()[m]
    }

    /// Unit basis element `e_m` with `e_0 = 1, e_1 = i, e_2 = j, e_3 = k`.
    pub fn basis(m: usize) -> Self {
        let mut c = [0.0; 4];
        c[m] = 1.0;
        Self::from_array(c)
    }

    /// `Sc(q) = (q + q̄)/2`.
    pub fn scalar(self) -> f64 {
        self.q0
    }

    /// `Vec(q) = (q - q̄)/2`.
    pub fn vector(self) -> Self {
        Self::new(0.0, self.q1, self.q2, self.q3)
    }

    pub fn conj(self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    /// `|q|_Q`.
    pub fn modulus(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `q⁻¹ = q̄ / |q|²`; the zero quaternion is reported, not turned into NaNs.
    pub fn inverse(self) -> Result<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self - other)
            .to_array()
            .iter()
            .fold(0.0_f64, |acc, c| acc.max(c.abs()))
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.q0, self.q1, self.q2, self.q3)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.q0 + r.q0, self.q1 + r.q1, self.q2 + r.q2, self.q3 + r.q3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, r: Self) {
        *self = *self + r;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.q0 - r.q0, self.q1 - r.q1, self.q2 - r.q2, self.q3 - r.q3)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, r: Self) {
        *self = *self - r;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let (a0, a1, a2, a3) = (self.q0, self.q1, self.q2, self.q3);
        let (b0, b1, b2, b3) = (r.q0, r.q1, r.q2, r.q3);
        Self::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, r: Self) {
        *self = *self * r;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        self * (1.0 / s)
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Quaternion> for Quaternion {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.copied().sum()
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Self::real(r)
    }
}

const AXIS_TOL: f64 = 1e-12;

/// A pure unit quaternion (`λ` or `μ`); squares to -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureUnitAxis(Quaternion);

impl PureUnitAxis {
    pub const I: Self = Self(Quaternion::I);
    pub const J: Self = Self(Quaternion::J);
    pub const K: Self = Self(Quaternion::K);

    /// Accepts a quaternion with zero scalar part and unit modulus.
    pub fn new(direction: Quaternion) -> Result<Self> {
        if direction.q0 != 0.0 || (direction.modulus() - 1.0).abs() > AXIS_TOL {
            return Err(Error::InvalidAxis(direction.to_array()));
        }
        Ok(Self(direction))
    }

    /// Normalises the vector `(x, y, z)` into `x i + y j + z k`.
    pub fn from_vector(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidAxis([0.0, x, y, z]));
        }
        Self::new(Quaternion::new(0.0, x / n, y / n, z / n))
    }

    pub fn direction(self) -> Quaternion {
        self.0
    }

    /// `e^{axis·θ} = cos θ + axis sin θ`.
    pub fn exp(self, theta: f64) -> Quaternion {
        axis_exp(self, theta)
    }
}

impl From<PureUnitAxis> for Quaternion {
    fn from(a: PureUnitAxis) -> Self {
        a.0
    }
}

/// `cos θ + axis·sin θ`.
pub fn axis_exp(axis: PureUnitAxis, theta: f64) -> Quaternion {
    let (s, c) = theta.sin_cos();
    let d = axis.0;
    Quaternion::new(c, d.q1 * s, d.q2 * s, d.q3 * s)
}

/// The branch `1/√axis = e^{-axis·π/4}` used by the canonical-transform kernels.
pub fn sqrt_axis_phase(axis: PureUnitAxis) -> Quaternion {
    axis_exp(axis, -std::f64::consts::FRAC_PI_4)
}
