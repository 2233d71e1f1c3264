//! Hardy-space numerics on the quaternion unit ball.
//!
//! On a slice `ℂ_I`, `f = F + G J` with `F, G` holomorphic, and
//! `|f|² = |F|² + |G|²`. Circle means therefore reduce to two complex
//! evaluations per node, done here with one inverse FFT each.

pub mod matrix;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::compose::{compose, CompositionVariant};
use crate::error::{Error, Result};
use crate::moebius::mobius_series;
use crate::quaternion::{sample_sphere, ImaginaryUnit, Quaternion};
use crate::series::{split_canonical, star, Series};

pub use matrix::{
    composition_matrix, composition_matrix_unchecked, operator_norm, operator_norm_with, MatrixSide,
    NormMethod, NormOptions, OperatorMatrix, OperatorNorm,
};

/// Discretization of `sup_I` and `lim_{r→1⁻}` in the `H^p` norms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureConfig {
    /// Fourier nodes per circle; a power of two, at least 4.
    pub angles: usize,
    /// Interior radii, each in `(0, 1)`.
    pub radii: Vec<f64>,
    /// Also integrate on `r = 1`. The stored series is a polynomial, so its
    /// means are continuous up to the boundary and `r = 1` is the limit.
    pub include_boundary: bool,
    pub sphere_samples: usize,
    pub seed: u64,
    /// Relative tolerance granted to quadrature-based inequalities.
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            angles: 1024,
            radii: vec![0.5, 0.9, 0.99],
            include_boundary: true,
            sphere_samples: 64,
            seed: 0,
            tolerance: 1e-6,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.angles < 4 || !self.angles.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "angles must be a power of two >= 4, got {}",
                self.angles
            )));
        }
        if let Some(r) = self.radii.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidArgument(format!("quadrature radius {r} is not in (0, 1)")));
        }
        if self.sphere_samples == 0 {
            return Err(Error::InvalidArgument("sphere_samples must be positive".into()));
        }
        Ok(())
    }

    /// Radii actually used, in increasing order.
    pub fn effective_radii(&self) -> Vec<f64> {
        let mut r = self.radii.clone();
        if self.include_boundary {
            r.push(1.0);
        }
        r.sort_by(f64::total_cmp);
        r.dedup();
        r
    }
}

/// Sampling grid for `‖φ‖_∞` estimates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupGrid {
    pub units: usize,
    pub angles: usize,
    /// Nodes on the preserved slice circle for slice-preserving maps.
    pub dense_slice: usize,
    pub seed: u64,
}

impl Default for SupGrid {
    fn default() -> Self {
        Self {
            units: 64,
            angles: 256,
            dense_slice: 4096,
            seed: 0,
        }
    }
}

/// `(Σ |aₙ|²)^{1/2}`.
pub fn h2_norm(f: &Series) -> f64 {
    f.coeffs().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Values of `Σ cₙ rⁿ e^{inθ_k}` at `θ_k = 2πk/m`.
fn circle_eval(c: &[Complex64], r: f64, m: usize, planner: &mut FftPlanner<f64>) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut rn = 1.0;
    for (n, &cn) in c.iter().enumerate() {
        // aliasing mod m is exact at the nodes
        buf[n % m] += cn * rn;
        rn *= r;
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    buf
}

/// `|f(r e^{Iθ_k})|²` at `m` equispaced angles.
pub fn circle_modulus_sqr(f: &Series, unit: ImaginaryUnit, r: f64, m: usize) -> Vec<f64> {
    let mut planner = FftPlanner::new();
    circle_modulus_sqr_with(f, unit, r, m, &mut planner)
}

fn circle_modulus_sqr_with(
    f: &Series,
    unit: ImaginaryUnit,
    r: f64,
    m: usize,
    planner: &mut FftPlanner<f64>,
) -> Vec<f64> {
    let s = split_canonical(f, unit);
    let big_f = circle_eval(&s.f, r, m, planner);
    if s.g.iter().all(|z| z.norm_sqr() == 0.0) {
        return big_f.iter().map(|z| z.norm_sqr()).collect();
    }
    let big_g = circle_eval(&s.g, r, m, planner);
    big_f
        .iter()
        .zip(&big_g)
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect()
}

/// Trapezoid rule for `(1/2π) ∫ |f(r e^{Iθ})|^p dθ`.
pub fn circle_mean(f: &Series, unit: ImaginaryUnit, r: f64, p: f64, m: usize) -> f64 {
    let v = circle_modulus_sqr(f, unit, r, m);
    mean_pow(&v, p)
}

fn mean_pow(mod_sqr: &[f64], p: f64) -> f64 {
    mod_sqr.iter().map(|&s| s.powf(0.5 * p)).sum::<f64>() / mod_sqr.len() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridInfo {
    pub angles: usize,
    pub radii: Vec<f64>,
    pub sphere_samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HpNorm {
    pub value: f64,
    pub p: f64,
    pub grid: GridInfo,
    /// Whether the p-means grew with the radius on every sampled slice.
    pub monotone: bool,
}

/// `‖f‖_p`, the maximum over sampled slices and radii of the p-th circle mean.
pub fn hp_norm(f: &Series, p: f64, cfg: &QuadratureConfig) -> Result<HpNorm> {
    hp_norm_on(f, p, cfg, &[])
}

/// [`hp_norm`] with extra slices added to the sampled set.
pub fn hp_norm_on(f: &Series, p: f64, cfg: &QuadratureConfig, extra: &[ImaginaryUnit]) -> Result<HpNorm> {
    cfg.validate()?;
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be in [1, inf], got {p}")));
    }
    if f.radius() < 1.0 {
        return Err(Error::Domain(format!(
            "Hardy norms need radius >= 1, got {}",
            f.radius()
        )));
    }
    let mut units = sample_sphere(cfg.sphere_samples, cfg.seed)?;
    units.extend_from_slice(extra);
    let radii = cfg.effective_radii();
    let mut planner = FftPlanner::new();
    let mut value = 0.0f64;
    let mut monotone = true;
    for &u in &units {
        let mut prev = 0.0f64;
        for &r in &radii {
            let v = circle_modulus_sqr_with(f, u, r, cfg.angles, &mut planner);
            let m = if p.is_infinite() {
                v.iter().copied().fold(0.0, f64::max).sqrt()
            } else {
                mean_pow(&v, p).powf(1.0 / p)
            };
            if m < prev * (1.0 - 1e-12) {
                monotone = false;
            }
            prev = m;
            value = value.max(m);
        }
    }
    Ok(HpNorm {
        value,
        p,
        grid: GridInfo {
            angles: cfg.angles,
            radii,
            sphere_samples: units.len(),
            seed: cfg.seed,
        },
        monotone,
    })
}

/// Estimate of `sup_{𝔹} |f|` from `|q| = 1` (maximum modulus).
///
/// Slice-preserving maps attain their modulus maximum on the preserved slice,
/// which is sampled densely; otherwise a sphere grid is used, which is a
/// heuristic lower estimate.
pub fn sup_norm_estimate(f: &Series, grid: &SupGrid) -> f64 {
    let mut planner = FftPlanner::new();
    if let Some(unit) = f.preserved_slice() {
        let c = f.slice_coeffs(unit);
        let v = circle_eval(&c, 1.0, grid.dense_slice.next_power_of_two(), &mut planner);
        return v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let units = sample_sphere(grid.units.max(1), grid.seed).expect("units > 0");
    let m = grid.angles.next_power_of_two().max(4);
    units
        .iter()
        .map(|&u| {
            circle_modulus_sqr_with(f, u, 1.0, m, &mut planner)
                .into_iter()
                .fold(0.0, f64::max)
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// Outcome of an inequality check `lhs ≤ rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Absolute allowance added to `rhs` when deciding `pass`.
    pub tolerance: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            lhs,
            rhs,
            tolerance,
            pass: lhs <= rhs + tolerance,
        }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Pointwise growth bound `|f(q)| ≤ C_p (1 - |q|²)^{-1/p} ‖f‖_p`, with `C₂ = 1`
/// and `C_p = √2` otherwise.
pub fn growth_bound_check(f: &Series, p: f64, q: Quaternion, cfg: &QuadratureConfig) -> Result<BoundCheck> {
    let r = q.norm();
    if !(r < 1.0) {
        return Err(Error::Domain(format!("|q| = {r} is not below 1")));
    }
    let value = f.evaluate_unchecked(q).norm();
    let weight = (1.0 - r * r).powf(-1.0 / p);
    if p == 2.0 {
        return Ok(BoundCheck::new(value, weight * h2_norm(f), 1e-10));
    }
    // the bound holds with the p-mean of the slice through q alone
    let extra: Vec<ImaginaryUnit> = match q.decompose().unit {
        crate::quaternion::SliceUnit::Unit(u) => vec![u],
        crate::quaternion::SliceUnit::Arbitrary => Vec::new(),
    };
    let norm = hp_norm_on(f, p, cfg, &extra)?.value;
    let rhs = 2f64.sqrt() * weight * norm;
    Ok(BoundCheck::new(value, rhs, rhs * cfg.tolerance))
}

/// Cauchy estimate `n!|aₙ| ≤ √2 e^{1/p} (1 + np/2)^{1/p} n! ‖f‖_p`, or
/// `n!|aₙ| ≤ n! ‖f‖_∞` for `p = ∞`. Both sides are reported divided by `n!`.
pub fn cauchy_coefficient_check(f: &Series, p: f64, n: usize, cfg: &QuadratureConfig) -> Result<BoundCheck> {
    let norm = hp_norm(f, p, cfg)?.value;
    let lhs = f.coeff(n).norm();
    let rhs = if p.is_infinite() {
        norm
    } else {
        2f64.sqrt() * (1.0 / p).exp() * (1.0 + n as f64 * p / 2.0).powf(1.0 / p) * norm
    };
    Ok(BoundCheck::new(lhs, rhs, rhs * cfg.tolerance + 1e-12))
}

/// Evaluation kernel `K_w = Σ qⁿ w̄ⁿ`, truncated to `degree`.
pub fn kernel(w: Quaternion, degree: usize) -> Result<Series> {
    if !(w.norm() < 1.0) {
        return Err(Error::Domain(format!("|w| = {} is not below 1", w.norm())));
    }
    let wb = w.conj();
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut pow = Quaternion::ONE;
    for _ in 0..=degree {
        coeffs.push(pow);
        pow = pow * wb;
    }
    Ok(Series::polynomial(coeffs))
}

/// `((1 + |φ(0)|)/(1 - |φ(0)|))^{1/2}`.
pub fn closed_form_norm(phi: &Series) -> f64 {
    let b = phi.coeff(0).norm();
    ((1.0 + b) / (1.0 - b)).sqrt()
}

/// Kernel lower bound `max_w ((1 - |w|²)/(1 - |φ(w)|²))^{1/2}` over rays in the
/// preserved slice, `|w| ≤ 0.999`.
pub fn norm_lower_bound(phi: &Series, samples: usize) -> Result<f64> {
    let unit = phi.preserved_slice().ok_or(Error::NotSlicePreserving)?;
    let sup = sup_norm_estimate(phi, &SupGrid::default());
    if sup > 1.0 + 1e-9 {
        return Err(Error::NotSelfMap(sup));
    }
    let c = phi.slice_coeffs(unit);
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let mut directions: Vec<Complex64> = (0..samples.max(1))
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / samples.max(1) as f64))
        .collect();
    let b = c[0];
    if b.norm() > 0.0 {
        directions.push(-b / b.norm());
    }
    let steps = 256;
    let mut best = 0.0f64;
    for d in directions {
        for j in 0..=steps {
            let t = 0.999 * (std::f64::consts::FRAC_PI_2 * j as f64 / steps as f64).sin();
            let w = d * t;
            let pw = eval(w).norm_sqr();
            if pw < 1.0 {
                best = best.max(((1.0 - t * t) / (1.0 - pw)).sqrt());
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LittlewoodReport {
    pub norm_f: f64,
    pub norm_right: f64,
    pub norm_left: f64,
    pub sup_phi: f64,
    pub tail: f64,
    pub pass: bool,
    /// `‖f‖₂ + tail - max(‖f^{⊙}φ‖₂, ‖f_{⊙}φ‖₂)`.
    pub margin: f64,
}

/// `‖f ⊙ φ‖₂ ≤ ‖f‖₂` for both ⊙ variants when `φ(0) = 0`, at truncation degree `n`.
pub fn littlewood_check(f: &Series, phi: &Series, degree: usize) -> Result<LittlewoodReport> {
    if phi.coeff(0).norm() > 1e-12 {
        return Err(Error::PreconditionViolated(format!(
            "phi(0) = {} is not 0",
            phi.coeff(0)
        )));
    }
    let sup = sup_norm_estimate(phi, &SupGrid::default());
    if sup > 1.0 + 1e-9 {
        return Err(Error::PreconditionViolated(format!("sampled sup |phi| = {sup} exceeds 1")));
    }
    littlewood_check_with_sup(f, phi, degree, sup)
}

/// [`littlewood_check`] with a caller-supplied estimate of `‖φ‖_∞`.
pub fn littlewood_check_with_sup(f: &Series, phi: &Series, degree: usize, sup: f64) -> Result<LittlewoodReport> {
    let norm_f = h2_norm(f);
    let tail = if sup < 1.0 {
        sup.powi(degree as i32 + 1) * norm_f / (1.0 - sup * sup).sqrt()
    } else {
        if f.degree() > degree / 4 {
            return Err(Error::PreconditionViolated(format!(
                "with sup |phi| = 1, deg f must be at most {}",
                degree / 4
            )));
        }
        0.0
    };
    let right = h2_norm(&compose(f, phi, CompositionVariant::OdotRight, degree)?);
    let left = h2_norm(&compose(f, phi, CompositionVariant::OdotLeft, degree)?);
    let margin = norm_f + tail + 1e-9 - right.max(left);
    Ok(LittlewoodReport {
        norm_f,
        norm_right: right,
        norm_left: left,
        sup_phi: sup,
        tail,
        pass: margin >= 0.0,
        margin,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailBound {
    pub bound: f64,
    pub measured: f64,
    pub sup_phi: f64,
    pub pass: bool,
}

/// Compares `‖C_φ - S_N‖` on the degree-`4N` section with
/// `‖φ‖_∞^{N+1}/(1 - ‖φ‖_∞²)^{1/2}`.
pub fn tail_bound_check(phi: &Series, n: usize) -> Result<TailBound> {
    let sup = sup_norm_estimate(phi, &SupGrid::default());
    if !(sup < 1.0) {
        return Err(Error::PreconditionViolated(format!("sampled sup |phi| = {sup} is not below 1")));
    }
    let bound = sup.powi(n as i32 + 1) / (1.0 - sup * sup).sqrt();
    let big = (4 * n).max(n + 1);
    let full = composition_matrix_unchecked(phi, big, MatrixSide::RightLinearC);
    let tail = full.with_columns_zeroed(0..n + 1);
    let measured = operator_norm(&tail)?.value;
    Ok(TailBound {
        bound,
        measured,
        sup_phi: sup,
        pass: measured <= bound + 1e-9,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsometryCheck {
    pub norm_f: f64,
    pub left: f64,
    pub right: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// `‖φ_a * f‖₂ = ‖f * φ_a‖₂ = ‖f‖₂` with `φ_a` truncated at degree `n`.
pub fn multiplier_isometry_check(f: &Series, a: Quaternion, n: usize) -> Result<IsometryCheck> {
    let phi = mobius_series(a, n)?;
    let norm_f = h2_norm(f);
    let left = h2_norm(&star(&phi, f));
    let right = h2_norm(&star(f, &phi));
    // ‖tail * f‖₂ ≤ ‖tail‖₂ ‖f‖_{ℓ¹}, with ‖tail‖₂ = (1 - |a|²)^{1/2} |a|ⁿ
    let m = a.norm();
    let l1: f64 = f.coeffs().iter().map(|c| c.norm()).sum();
    let tolerance = (1.0 - m * m).sqrt() * m.powi(n as i32) * l1 + 1e-12 * norm_f.max(1.0);
    Ok(IsometryCheck {
        norm_f,
        left,
        right,
        tolerance,
        pass: (left - norm_f).abs() <= tolerance && (right - norm_f).abs() <= tolerance,
    })
}
