//! Truncated quaternion power series `Σ qⁿ aₙ` on a ball `B(0, R)`.
//!
//! A [`Series`] is the representation of a slice regular function used
//! throughout the crate. Coefficients sit to the right of the powers of `q`.
//! Binary operations return the exact truncated result up to the sum of the
//! input degrees; callers truncate further when they need to.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};

/// Default absolute tolerance for coefficient comparisons.
pub const COEFF_TOLERANCE: f64 = 1e-12;

/// Trailing coefficients below this modulus are dropped by [`Series::normalize`].
pub const NORMALIZE_EPSILON: f64 = 1e-15;

/// Tolerance used when deciding whether coefficients share a slice.
pub const SLICE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    coeffs: Vec<Quaternion>,
    radius: f64,
}

impl Series {
    /// Series on `B(0, radius)`; `radius` may be `f64::INFINITY`.
    pub fn new(coeffs: Vec<Quaternion>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "series radius must be positive, got {radius}"
            )));
        }
        if let Some(n) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("coefficient {n} is not finite")));
        }
        Ok(Self::from_parts(coeffs, radius))
    }

    /// Entire series (radius `∞`).
    pub fn polynomial(coeffs: Vec<Quaternion>) -> Self {
        Self::from_parts(coeffs, f64::INFINITY)
    }

    pub(crate) fn from_parts(mut coeffs: Vec<Quaternion>, radius: f64) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Quaternion::ZERO);
        }
        Self { coeffs, radius }
    }

    pub fn zero() -> Self {
        Self::polynomial(vec![Quaternion::ZERO])
    }

    pub fn constant(c: Quaternion) -> Self {
        Self::polynomial(vec![c])
    }

    /// The identity map `q`.
    pub fn identity() -> Self {
        Self::monomial(1, Quaternion::ONE)
    }

    /// `qⁿ c`.
    pub fn monomial(n: usize, c: Quaternion) -> Self {
        let mut coeffs = vec![Quaternion::ZERO; n + 1];
        coeffs[n] = c;
        Self::polynomial(coeffs)
    }

    /// Series whose coefficients are `c(n)` for `n = 0..=degree`.
    pub fn from_fn(degree: usize, radius: f64, c: impl FnMut(usize) -> Quaternion) -> Result<Self> {
        Self::new((0..=degree).map(c).collect(), radius)
    }

    #[inline]
    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Quaternion> {
        self.coeffs
    }

    /// Coefficient of `qⁿ`; zero past the stored degree.
    #[inline]
    pub fn coeff(&self, n: usize) -> Quaternion {
        self.coeffs.get(n).copied().unwrap_or(Quaternion::ZERO)
    }

    /// Stored degree `N` (trailing zeros included until normalized).
    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "series radius must be positive, got {radius}"
            )));
        }
        self.radius = radius;
        Ok(self)
    }

    /// Drops trailing coefficients with modulus below [`NORMALIZE_EPSILON`].
    pub fn normalize(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().norm() < NORMALIZE_EPSILON {
            self.coeffs.pop();
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// Drops trailing coefficients that are exactly zero.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().to_array().iter().all(|&x| x == 0.0) {
            self.coeffs.pop();
        }
        self
    }

    /// Keeps coefficients `0..=degree`, padding with zeros if needed.
    pub fn truncated(&self, degree: usize) -> Self {
        let mut coeffs: Vec<Quaternion> = self.coeffs.iter().copied().take(degree + 1).collect();
        coeffs.resize(degree + 1, Quaternion::ZERO);
        Self::from_parts(coeffs, self.radius)
    }

    /// `Σ qⁿ aₙ` at `q`, failing outside the nominal ball.
    pub fn evaluate(&self, q: Quaternion) -> Result<Quaternion> {
        let r = q.norm();
        if !(r < self.radius) {
            return Err(Error::Domain(format!(
                "|q| = {r} is outside B(0, {})",
                self.radius
            )));
        }
        Ok(self.evaluate_unchecked(q))
    }

    /// Horner evaluation without the domain check (finite sum, always defined).
    #[inline]
    pub fn evaluate_unchecked(&self, q: Quaternion) -> Quaternion {
        // powers of q commute with q, so a₀ + q(a₁ + q(a₂ + …)) keeps qⁿ on the left
        self.coeffs
            .iter()
            .rev()
            .fold(Quaternion::ZERO, |acc, &a| q * acc + a)
    }

    /// Formal slice derivative `Σ n qⁿ⁻¹ aₙ`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &a)| a.scale(n as f64))
            .collect();
        Self::from_parts(coeffs, self.radius)
    }

    /// Coefficients right-multiplied by `c`, i.e. `f * c`.
    pub fn mul_right(&self, c: Quaternion) -> Self {
        Self::from_parts(self.coeffs.iter().map(|&a| a * c).collect(), self.radius)
    }

    /// Coefficients left-multiplied by `c`, i.e. `c * f`.
    pub fn mul_left(&self, c: Quaternion) -> Self {
        Self::from_parts(self.coeffs.iter().map(|&a| c * a).collect(), self.radius)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_parts(self.coeffs.iter().map(|&a| a.scale(s)).collect(), self.radius)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::from_parts(coeffs, self.radius.min(other.radius))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Largest componentwise coefficient difference, zero-padding the shorter side.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| self.coeff(k).max_abs_diff(other.coeff(k)))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_coeff_diff(other) <= tol
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|a| a.im().norm() <= tol)
    }

    /// A slice `ℂ_I` containing every coefficient, if one exists.
    ///
    /// The direction is taken from the first non-real coefficient. Real series
    /// preserve every slice and report `i`.
    pub fn preserved_slice(&self) -> Option<ImaginaryUnit> {
        let first = self.coeffs.iter().find(|a| a.im().norm() > SLICE_TOLERANCE);
        let unit = match first {
            None => return Some(ImaginaryUnit::I),
            Some(a) => {
                let im = a.im();
                ImaginaryUnit::from_direction(im.x, im.y, im.z).ok()?
            }
        };
        self.coeffs
            .iter()
            .all(|&a| unit.distance_from_slice(a) <= SLICE_TOLERANCE)
            .then_some(unit)
    }

    /// Whether every coefficient lies in `ℂ_I`.
    pub fn preserves_slice(&self, unit: ImaginaryUnit) -> bool {
        self.coeffs
            .iter()
            .all(|&a| unit.distance_from_slice(a) <= SLICE_TOLERANCE)
    }

    /// Coefficients projected to `ℂ_I` as complex numbers.
    pub fn slice_coeffs(&self, unit: ImaginaryUnit) -> Vec<Complex64> {
        self.coeffs.iter().map(|&a| unit.project(a)).collect()
    }

    /// Series with coefficients `c` read in `ℂ_I`.
    pub fn from_slice_coeffs(c: &[Complex64], unit: ImaginaryUnit, radius: f64) -> Result<Self> {
        Self::new(c.iter().map(|&z| unit.embed(z)).collect(), radius)
    }

    /// Largest `|f|` over `r e^{Iθ}` for the given radii, units and `angles`
    /// equispaced angles. Evaluation ignores the nominal radius.
    pub fn sampled_sup(&self, radii: &[f64], units: &[ImaginaryUnit], angles: usize) -> f64 {
        let mut sup = 0.0f64;
        for &r in radii {
            for &u in units {
                for k in 0..angles {
                    let theta = std::f64::consts::TAU * k as f64 / angles as f64;
                    let v = self.evaluate_unchecked(u.exp(theta).scale(r)).norm();
                    sup = sup.max(v);
                }
            }
        }
        sup
    }
}

/// Free-function form of [`Series::evaluate`].
pub fn evaluate(f: &Series, q: Quaternion) -> Result<Quaternion> {
    f.evaluate(q)
}

/// Coefficients `0..=degree` of the convolution `Σ_k a_k b_{n-k}`.
fn convolve(a: &[Quaternion], b: &[Quaternion], degree: usize) -> Vec<Quaternion> {
    let mut out = vec![Quaternion::ZERO; degree + 1];
    for (n, slot) in out.iter_mut().enumerate() {
        let lo = n.saturating_sub(b.len() - 1);
        let hi = n.min(a.len() - 1);
        if lo > hi {
            continue;
        }
        let mut acc = Quaternion::ZERO;
        for k in lo..=hi {
            acc += a[k] * b[n - k];
        }
        *slot = acc;
    }
    out
}

/// `f * g`, exact to degree `deg f + deg g`.
pub fn star(f: &Series, g: &Series) -> Series {
    star_truncated(f, g, f.degree() + g.degree())
}

/// `f * g` keeping coefficients `0..=degree`.
pub fn star_truncated(f: &Series, g: &Series, degree: usize) -> Series {
    Series::from_parts(
        convolve(f.coeffs(), g.coeffs(), degree),
        f.radius().min(g.radius()),
    )
}

/// `f^c`: coefficientwise quaternion conjugation.
pub fn regular_conjugate(f: &Series) -> Series {
    Series::from_parts(f.coeffs().iter().map(|a| a.conj()).collect(), f.radius())
}

/// `f^s = f * f^c`, with the (vanishing) imaginary parts zeroed.
pub fn symmetrize(f: &Series) -> Series {
    let s = star(f, &regular_conjugate(f));
    let scale: f64 = f.coeffs().iter().map(|a| a.norm_sqr()).sum::<f64>().max(1.0);
    debug_assert!(
        s.is_real(COEFF_TOLERANCE * scale),
        "symmetrization has non-real coefficients"
    );
    Series::from_parts(
        s.coeffs().iter().map(|a| Quaternion::real(a.w)).collect(),
        s.radius(),
    )
}

/// Truncated `f^{-*}` to `degree`: `g₀ = a₀⁻¹`, `gₙ = -a₀⁻¹ Σ_{k=1}^{n} a_k g_{n-k}`.
///
/// The nominal radius is that of `f`; the true domain excludes the zero
/// spheres of `f^s`, which this routine does not locate.
pub fn star_reciprocal(f: &Series, degree: usize) -> Result<Series> {
    let a = f.coeffs();
    let a0 = a[0];
    if a0.norm() <= 1e-12 {
        return Err(Error::NotInvertible(a0.norm()));
    }
    let inv0 = a0.inv()?;
    let mut g = Vec::with_capacity(degree + 1);
    g.push(inv0);
    for n in 1..=degree {
        let mut acc = Quaternion::ZERO;
        for k in 1..=n.min(a.len() - 1) {
            acc += a[k] * g[n - k];
        }
        g.push(-(inv0 * acc));
    }
    Ok(Series::from_parts(g, f.radius()))
}

/// Translation operator `(Tf)ₙ = a_{n+1}`, so that `f = f(0) + q * Tf`.
pub fn shift(f: &Series) -> Series {
    Series::from_parts(f.coeffs().iter().skip(1).copied().collect(), f.radius())
}

/// `f_abs(q) = Σ qⁿ |aₙ|`.
pub fn abs_series(f: &Series) -> Series {
    Series::from_parts(
        f.coeffs().iter().map(|a| Quaternion::real(a.norm())).collect(),
        f.radius(),
    )
}

/// `aₙ = Fₙ + Gₙ J` with `Fₙ, Gₙ ∈ ℂ_I`, stored as complex numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceSplit {
    pub f: Vec<Complex64>,
    pub g: Vec<Complex64>,
    pub i: ImaginaryUnit,
    pub j: ImaginaryUnit,
    pub radius: f64,
}

impl SliceSplit {
    /// Inverse of [`split`].
    pub fn merge(&self) -> Series {
        let coeffs = self
            .f
            .iter()
            .zip(&self.g)
            .map(|(&f, &g)| self.i.embed(f) + self.i.embed(g) * self.j.get())
            .collect();
        Series::from_parts(coeffs, self.radius)
    }
}

fn check_orthogonal(i: ImaginaryUnit, j: ImaginaryUnit) -> Result<()> {
    if !i.is_orthogonal(j) {
        return Err(Error::InvalidArgument(format!(
            "J is not orthogonal to I (inner product {:e})",
            i.dot(j)
        )));
    }
    Ok(())
}

/// Splitting of `f` along `I ⊥ J`.
pub fn split(f: &Series, i: ImaginaryUnit, j: ImaginaryUnit) -> Result<SliceSplit> {
    check_orthogonal(i, j)?;
    let ij = i.get() * j.get();
    let (mut fs, mut gs) = (Vec::with_capacity(f.coeffs().len()), Vec::with_capacity(f.coeffs().len()));
    for &a in f.coeffs() {
        // {1, I, J, IJ} is orthonormal, so the 4×4 system is solved by projection
        fs.push(Complex64::new(a.w, a.dot(i.get())));
        gs.push(Complex64::new(a.dot(j.get()), a.dot(ij)));
    }
    Ok(SliceSplit {
        f: fs,
        g: gs,
        i,
        j,
        radius: f.radius(),
    })
}

/// [`split`] with the canonical `J = I.orthogonal()`.
pub fn split_canonical(f: &Series, i: ImaginaryUnit) -> SliceSplit {
    split(f, i, i.orthogonal()).expect("canonical J is orthogonal")
}

/// Regular extension of `F + G J` from `ℂ_I`.
pub fn extend(
    f_part: &[Complex64],
    g_part: &[Complex64],
    i: ImaginaryUnit,
    j: ImaginaryUnit,
    radius: f64,
) -> Result<Series> {
    check_orthogonal(i, j)?;
    let n = f_part.len().max(g_part.len());
    let at = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or_default();
    let coeffs = (0..n)
        .map(|k| i.embed(at(f_part, k)) + i.embed(at(g_part, k)) * j.get())
        .collect();
    Series::new(coeffs, radius)
}

/// `f(x + yK)` reconstructed from the values `f(x ± yI)` on one slice.
pub fn representation_formula(f: &Series, i: ImaginaryUnit, q: Quaternion) -> Result<Quaternion> {
    let c = q.decompose();
    let k = match c.unit {
        crate::quaternion::SliceUnit::Arbitrary => return f.evaluate(q),
        crate::quaternion::SliceUnit::Unit(k) => k,
    };
    let up = f.evaluate(Quaternion::real(c.x) + i.get().scale(c.y))?;
    let down = f.evaluate(Quaternion::real(c.x) - i.get().scale(c.y))?;
    Ok((up + down).scale(0.5) + (k.get() * i.get() * (down - up)).scale(0.5))
}
