//! Quaternion scalar algebra.
//!
//! [`Quaternion`] is a plain `Copy` value with Hamilton multiplication.
//! [`ImaginaryUnit`] is a checked element of the unit 2-sphere 𝕊 of purely
//! imaginary quaternions, and [`SliceCoords`] is the `q = x + yI` slice
//! decomposition with an explicit marker on the real axis.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Moduli below this are treated as zero by [`Quaternion::inv`].
pub const DIVISION_EPSILON: f64 = 1e-300;

/// Tolerance for the `Re(u) = 0, |u| = 1` check of an imaginary unit.
pub const UNIT_EPSILON: f64 = 1e-13;

/// A quaternion `w + xi + yj + zk`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part as a quaternion with zero real component.
    #[inline]
    pub fn im(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        // hypot-style scaling is unnecessary at the magnitudes used here
        self.norm_sqr().sqrt()
    }

    /// Real inner product `Re(a b̄)` of the four components.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Inverse `|q|⁻² q̄`, failing when `|q|` is below `eps`.
    pub fn inv_eps(self, eps: f64) -> Result<Self> {
        let n = self.norm();
        if !(n > eps) {
            return Err(Error::ZeroDivision(n));
        }
        Ok(self.conj().scale(1.0 / self.norm_sqr()))
    }

    /// Inverse with the default [`DIVISION_EPSILON`].
    pub fn inv(self) -> Result<Self> {
        self.inv_eps(DIVISION_EPSILON)
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }

    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Slice decomposition `q = x + yI`.
    pub fn decompose(self) -> SliceCoords {
        let im = self.im();
        let y = im.norm();
        let unit = if y > 0.0 {
            SliceUnit::Unit(ImaginaryUnit(im.scale(1.0 / y)))
        } else {
            SliceUnit::Arbitrary
        };
        SliceCoords { x: self.w, y, unit }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    /// Hamilton product.
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        self.scale(1.0 / s)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl Sum for Quaternion {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::ZERO, |acc, q| acc + q)
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let c = <[f64; 4]>::deserialize(deserializer)?;
        Ok(Self::from_array(c))
    }
}

/// A purely imaginary unit quaternion, `u² = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ImaginaryUnit(Quaternion);

impl ImaginaryUnit {
    pub const I: Self = Self(Quaternion::I);
    pub const J: Self = Self(Quaternion::J);
    pub const K: Self = Self(Quaternion::K);

    /// Checks `Re(u) = 0` and `|u| = 1` to [`UNIT_EPSILON`].
    pub fn new(u: Quaternion) -> Result<Self> {
        if u.w.abs() > UNIT_EPSILON || (u.norm() - 1.0).abs() > UNIT_EPSILON {
            return Err(Error::InvalidArgument(format!(
                "{u} is not a unit imaginary quaternion"
            )));
        }
        Ok(Self(u))
    }

    /// Normalizes the imaginary direction `xi + yj + zk`.
    pub fn from_direction(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument("zero imaginary direction".into()));
        }
        Ok(Self(Quaternion::new(0.0, x / n, y / n, z / n)))
    }

    #[inline]
    pub fn get(self) -> Quaternion {
        self.0
    }

    /// Real inner product with another unit; zero means `I ⊥ J`.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.0.dot(other.0)
    }

    pub fn is_orthogonal(self, other: Self) -> bool {
        self.dot(other).abs() <= UNIT_EPSILON
    }

    /// Canonical unit orthogonal to `self`: Gram–Schmidt against the probes
    /// `j`, `k`, `i` in that order, taking the first residual of length > 1/2.
    pub fn orthogonal(self) -> Self {
        for probe in [Quaternion::J, Quaternion::K, Quaternion::I] {
            let v = probe - self.0.scale(probe.dot(self.0));
            let n = v.norm();
            if n > 0.5 {
                return Self(v.scale(1.0 / n));
            }
        }
        unreachable!("one of three orthonormal probes has a residual above 1/2")
    }

    /// The point `cos θ + u sin θ` of the unit circle in `ℂ_u`.
    pub fn exp(self, theta: f64) -> Quaternion {
        let (s, c) = theta.sin_cos();
        Quaternion::real(c) + self.0.scale(s)
    }

    /// Image of `re + im·i` under `ℂ → ℂ_u`.
    #[inline]
    pub fn embed(self, c: Complex64) -> Quaternion {
        Quaternion::real(c.re) + self.0.scale(c.im)
    }

    /// Orthogonal projection of `q` onto `ℂ_u`, as a complex number.
    #[inline]
    pub fn project(self, q: Quaternion) -> Complex64 {
        Complex64::new(q.w, q.dot(self.0))
    }

    /// Distance from `q` to the plane `ℂ_u`.
    pub fn distance_from_slice(self, q: Quaternion) -> f64 {
        (q - self.embed(self.project(q))).norm()
    }
}

impl<'de> Deserialize<'de> for ImaginaryUnit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let q = Quaternion::deserialize(deserializer)?;
        Self::new(q).map_err(serde::de::Error::custom)
    }
}

/// The `I` of a slice decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SliceUnit {
    /// `q` is real; every `I ∈ 𝕊` is valid and results must not depend on it.
    Arbitrary,
    Unit(ImaginaryUnit),
}

/// `q = x + yI` with `y ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceCoords {
    pub x: f64,
    pub y: f64,
    pub unit: SliceUnit,
}

impl SliceCoords {
    pub fn recompose(&self) -> Quaternion {
        match self.unit {
            SliceUnit::Arbitrary => Quaternion::real(self.x),
            SliceUnit::Unit(u) => Quaternion::real(self.x) + u.get().scale(self.y),
        }
    }

    /// The unit, or `fallback` on the real axis.
    pub fn unit_or(&self, fallback: ImaginaryUnit) -> ImaginaryUnit {
        match self.unit {
            SliceUnit::Arbitrary => fallback,
            SliceUnit::Unit(u) => u,
        }
    }
}

/// Free-function form of [`Quaternion::decompose`].
pub fn decompose(q: Quaternion) -> SliceCoords {
    q.decompose()
}

/// `n` reproducible points of 𝕊.
///
/// The first four are always `i, j, k, (i+j+k)/√3`; the rest are normalized
/// standard Gaussian 3-vectors drawn from a ChaCha8 stream seeded by `seed`.
pub fn sample_sphere(n: usize, seed: u64) -> Result<Vec<ImaginaryUnit>> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample_sphere needs n >= 1".into()));
    }
    let s = 1.0 / 3f64.sqrt();
    let pinned = [
        ImaginaryUnit::I,
        ImaginaryUnit::J,
        ImaginaryUnit::K,
        ImaginaryUnit(Quaternion::new(0.0, s, s, s)),
    ];
    let mut out: Vec<ImaginaryUnit> = pinned.iter().copied().take(n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < n {
        let x: f64 = StandardNormal.sample(&mut rng);
        let y: f64 = StandardNormal.sample(&mut rng);
        let z: f64 = StandardNormal.sample(&mut rng);
        if let Ok(u) = ImaginaryUnit::from_direction(x, y, z) {
            out.push(u);
        }
    }
    Ok(out)
}
