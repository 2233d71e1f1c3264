//! Regular compositions of slice regular series.
//!
//! Six variants are provided. `odot_right` and `odot_left` substitute
//! `*`-powers of `φ`. The Vlacci pair expands `f` around `φ(0)` with Bell
//! polynomials. The bullet pair is obtained from the Vlacci pair by regular
//! conjugation.

pub mod bell;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{sample_sphere, Quaternion};
use crate::series::{abs_series, regular_conjugate, star_truncated, Series};

pub use bell::{bell_table, binomial, factorial, BellTable};

/// Default ceiling on the output degree of the Vlacci variants.
pub const DEFAULT_MAX_VLACCI_DEGREE: usize = 20;

/// Sup bound used by the self-map test.
pub const SELF_MAP_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionVariant {
    OdotRight,
    OdotLeft,
    VlacciRight,
    VlacciLeft,
    BulletUp,
    BulletDown,
}

impl CompositionVariant {
    pub const ALL: [Self; 6] = [
        Self::OdotRight,
        Self::OdotLeft,
        Self::VlacciRight,
        Self::VlacciLeft,
        Self::BulletUp,
        Self::BulletDown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::OdotRight => "odot_right",
            Self::OdotLeft => "odot_left",
            Self::VlacciRight => "vlacci_right",
            Self::VlacciLeft => "vlacci_left",
            Self::BulletUp => "bullet_up",
            Self::BulletDown => "bullet_down",
        }
    }

    pub fn is_vlacci_based(self) -> bool {
        !matches!(self, Self::OdotRight | Self::OdotLeft)
    }
}

impl fmt::Display for CompositionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CompositionVariant {
    type Err = Error;

    /// Accepts both `odot_right` and `odot-right`.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|v| v.name() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown composition variant `{s}`")))
    }
}

/// Sampling grid for the range precondition and self-map checks.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeSampling {
    pub units: usize,
    pub radii: usize,
    pub angles: usize,
    pub seed: u64,
}

impl Default for RangeSampling {
    fn default() -> Self {
        Self {
            units: 64,
            radii: 8,
            angles: 32,
            seed: 0,
        }
    }
}

impl RangeSampling {
    /// Largest `|φ|` on spheres of radius `ρ_k = R·(k/radii)·0.999`.
    pub fn sup(&self, phi: &Series, outer: f64) -> f64 {
        let units = sample_sphere(self.units.max(1), self.seed).expect("units > 0");
        let radii: Vec<f64> = (1..=self.radii)
            .map(|k| outer * k as f64 / self.radii as f64 * 0.999)
            .collect();
        // the centre is not on any sphere but values there matter for small maps
        phi.coeff(0)
            .norm()
            .max(phi.sampled_sup(&radii, &units, self.angles))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComposeOptions {
    pub max_vlacci_degree: usize,
    pub check_range: bool,
    pub sampling: RangeSampling,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        Self {
            max_vlacci_degree: DEFAULT_MAX_VLACCI_DEGREE,
            check_range: true,
            sampling: RangeSampling::default(),
        }
    }
}

/// Composition result with diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct Composition {
    pub series: Series,
    pub variant: CompositionVariant,
    /// Sampled `sup |φ|` when the range check ran.
    pub range_sup: Option<f64>,
    /// Per-coefficient truncation estimates for the Bell-polynomial variants.
    pub error_estimates: Option<Vec<f64>>,
}

/// `φ^{*n}` truncated to `degree`.
pub fn star_power(phi: &Series, n: usize, degree: usize) -> Series {
    let mut acc = Series::constant(Quaternion::ONE)
        .with_radius(phi.radius())
        .expect("positive radius")
        .truncated(degree);
    for _ in 0..n {
        acc = star_truncated(&acc, phi, degree);
    }
    acc
}

/// `[φ^{*0}, …, φ^{*n_max}]`, each truncated to `degree`.
pub fn star_powers(phi: &Series, n_max: usize, degree: usize) -> Vec<Series> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(star_power(phi, 0, degree));
    for n in 1..=n_max {
        let next = star_truncated(&out[n - 1], phi, degree);
        out.push(next);
    }
    out
}

/// Radius on which the composition is reported: the sampled range radius.
fn result_radius(f: &Series, phi: &Series) -> f64 {
    if f.radius().is_infinite() {
        phi.radius()
    } else {
        phi.radius().min(1.0)
    }
}

fn range_check(f: &Series, phi: &Series, sampling: &RangeSampling) -> Result<Option<f64>> {
    if f.radius().is_infinite() {
        return Ok(None);
    }
    let sup = sampling.sup(phi, phi.radius().min(1.0));
    if !(sup < f.radius()) {
        return Err(Error::RangeViolation {
            sup,
            radius: f.radius(),
        });
    }
    Ok(Some(sup))
}

/// `compose` with default options.
pub fn compose(f: &Series, phi: &Series, variant: CompositionVariant, degree: usize) -> Result<Series> {
    compose_with(f, phi, variant, degree, &ComposeOptions::default()).map(|c| c.series)
}

pub fn compose_with(
    f: &Series,
    phi: &Series,
    variant: CompositionVariant,
    degree: usize,
    opts: &ComposeOptions,
) -> Result<Composition> {
    if variant.is_vlacci_based() {
        let b0 = phi.coeff(0).norm();
        if !(b0 < f.radius()) {
            return Err(Error::Domain(format!(
                "|phi(0)| = {b0} is outside B(0, {})",
                f.radius()
            )));
        }
        if degree > opts.max_vlacci_degree {
            return Err(Error::InvalidArgument(format!(
                "degree {degree} exceeds the Bell-polynomial limit {}",
                opts.max_vlacci_degree
            )));
        }
    }
    let range_sup = if opts.check_range {
        range_check(f, phi, &opts.sampling)?
    } else {
        None
    };
    let radius = result_radius(f, phi);
    let (coeffs, error_estimates) = match variant {
        CompositionVariant::OdotRight => (odot(f, phi, degree, Side::Right), None),
        CompositionVariant::OdotLeft => (odot(f, phi, degree, Side::Left), None),
        CompositionVariant::VlacciRight => {
            let (c, e) = vlacci(f, phi, degree, Side::Right)?;
            (c, Some(e))
        }
        CompositionVariant::VlacciLeft => {
            let (c, e) = vlacci(f, phi, degree, Side::Left)?;
            (c, Some(e))
        }
        CompositionVariant::BulletUp | CompositionVariant::BulletDown => {
            let side = if variant == CompositionVariant::BulletUp {
                Side::Left
            } else {
                Side::Right
            };
            let (c, e) = vlacci(&regular_conjugate(f), &regular_conjugate(phi), degree, side)?;
            (c.into_iter().map(|a| a.conj()).collect(), Some(e))
        }
    };
    Ok(Composition {
        series: Series::from_parts(coeffs, radius),
        variant,
        range_sup,
        error_estimates,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    /// coefficient of `f` on the right of the `φ` data
    Right,
    Left,
}

fn odot(f: &Series, phi: &Series, degree: usize, side: Side) -> Vec<Quaternion> {
    let mut out = vec![Quaternion::ZERO; degree + 1];
    // with φ(0) = 0 the power φ^{*n} starts at qⁿ
    let n_terms = if phi.coeff(0).norm() == 0.0 {
        f.degree().min(degree)
    } else {
        f.degree()
    };
    let mut power = star_power(phi, 0, degree);
    for n in 0..=n_terms {
        if n > 0 {
            power = star_truncated(&power, phi, degree);
        }
        let a = f.coeff(n);
        for (slot, &p) in out.iter_mut().zip(power.coeffs()) {
            *slot += match side {
                Side::Right => p * a,
                Side::Left => a * p,
            };
        }
    }
    out
}

/// Vlacci coefficients and per-coefficient truncation estimates.
fn vlacci(f: &Series, phi: &Series, degree: usize, side: Side) -> Result<(Vec<Quaternion>, Vec<f64>)> {
    let b0 = phi.coeff(0);
    // derivatives f^{(d)}(b₀) and the size of the last retained term of each
    let mut derivs = Vec::with_capacity(degree + 1);
    let mut tails = Vec::with_capacity(degree + 1);
    let mut dseries = f.clone();
    let r0 = b0.norm();
    for d in 0..=degree {
        derivs.push(dseries.evaluate(b0)?);
        let last = dseries.coeffs().last().copied().unwrap_or(Quaternion::ZERO).norm();
        let tail = if r0 == 0.0 {
            0.0
        } else {
            last * r0.powi(dseries.degree() as i32)
        };
        tails.push(tail);
        if d < degree {
            dseries = dseries.derivative();
        }
    }
    let mut coeffs = vec![derivs[0]];
    let mut errors = vec![tails[0]];
    if degree == 0 {
        return Ok((coeffs, errors));
    }
    let args: Vec<Quaternion> = (1..=degree)
        .map(|m| phi.coeff(m).scale(factorial(m as u64)))
        .collect();
    let table = bell_table(&args)?;
    for n in 1..=degree {
        let inv = 1.0 / factorial(n as u64);
        let mut c = Quaternion::ZERO;
        let mut e = 0.0;
        for d in 1..=n {
            let b = table.get(n, d);
            c += match side {
                Side::Right => b * derivs[d],
                Side::Left => derivs[d] * b,
            };
            e += b.norm() * tails[d];
        }
        coeffs.push(c.scale(inv));
        errors.push(e * inv);
    }
    Ok((coeffs, errors))
}

/// Classical truncated composition `g ∘ h` of complex power series.
pub fn complex_compose(g: &[Complex64], h: &[Complex64], degree: usize) -> Vec<Complex64> {
    let mul = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); degree + 1];
        for (i, &x) in a.iter().enumerate().take(degree + 1) {
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(degree + 1 - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    // Horner: g₀ + h(g₁ + h(g₂ + …))
    let mut acc = vec![Complex64::new(0.0, 0.0); degree + 1];
    for &gk in g.iter().rev() {
        acc = mul(&acc, h);
        acc[0] += gk;
    }
    acc
}

/// Sampled `sup |f|` over the closed unit ball grid.
pub fn sampled_self_map_sup(f: &Series, sampling: &RangeSampling) -> f64 {
    let units = sample_sphere(sampling.units.max(1), sampling.seed).expect("units > 0");
    let radii: Vec<f64> = (1..=sampling.radii)
        .map(|k| k as f64 / sampling.radii as f64 * 0.999)
        .collect();
    f.coeff(0)
        .norm()
        .max(f.sampled_sup(&radii, &units, sampling.angles))
}

/// Complex restrictions `(f_I)^{∘k}` for `k = 0..=n`, each truncated to `degree`.
pub fn slice_iterates(f_slice: &[Complex64], n: usize, degree: usize) -> Vec<Vec<Complex64>> {
    let mut ident = vec![Complex64::new(0.0, 0.0); degree + 1];
    if degree >= 1 {
        ident[1] = Complex64::new(1.0, 0.0);
    }
    let mut out = vec![ident];
    for k in 0..n {
        let next = complex_compose(f_slice, &out[k], degree);
        out.push(next);
    }
    out
}

/// `f^{⊙n}` for a slice-preserving self-map of the unit ball, computed as
/// the regular extension of the `n`-th iterate of `f_I`.
pub fn iterate(f: &Series, n: usize, degree: usize) -> Result<Series> {
    let unit = f.preserved_slice().ok_or(Error::NotSlicePreserving)?;
    let sup = sampled_self_map_sup(f, &RangeSampling::default());
    if sup > 1.0 + SELF_MAP_TOLERANCE {
        return Err(Error::NotSelfMap(sup));
    }
    let fi = f.slice_coeffs(unit);
    let mut it = slice_iterates(&fi, n, degree).pop().expect("n + 1 iterates");
    it.truncate(degree + 1);
    Series::from_slice_coeffs(&it, unit, f.radius())
}

/// Largest `r ≤ φ.radius` with `φ_abs(r) < f.radius`, found by bisection.
pub fn existence_radius(f: &Series, phi: &Series) -> f64 {
    let outer = f.radius();
    if outer.is_infinite() {
        return phi.radius();
    }
    let phi_abs = abs_series(phi);
    let g = |r: f64| phi_abs.evaluate_unchecked(Quaternion::real(r)).w;
    if !(g(0.0) < outer) {
        return 0.0;
    }
    let mut hi = if phi.radius().is_finite() {
        phi.radius()
    } else {
        1.0
    };
    if phi.radius().is_infinite() {
        while g(hi) < outer {
            hi *= 2.0;
            if hi > 1e12 {
                return f64::INFINITY;
            }
        }
    } else if g(hi) < outer {
        return hi;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if g(mid) < outer {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::mobius_series;
    use crate::quaternion::ImaginaryUnit;
    use crate::random::{ball_point, gaussian_polynomial, gaussian_quaternion, rng};
    use crate::series::{star, star_reciprocal};

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;
    const ONE: Quaternion = Quaternion::ONE;
    const O: Quaternion = Quaternion::ZERO;

    use CompositionVariant::*;

    fn poly(c: &[Quaternion]) -> Series {
        Series::polynomial(c.to_vec())
    }

    #[test]
    fn variant_names_round_trip() {
        for v in CompositionVariant::ALL {
            assert_eq!(v.name().parse::<CompositionVariant>().unwrap(), v);
            assert_eq!(v.name().replace('_', "-").parse::<CompositionVariant>().unwrap(), v);
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(serde_json::from_str::<CompositionVariant>(&json).unwrap(), v);
        }
        assert!("odot".parse::<CompositionVariant>().is_err());
    }

    #[test]
    fn star_power_examples() {
        assert!(star_power(&Series::monomial(1, J), 2, 4).approx_eq(&Series::monomial(2, -ONE), 0.0));
        let phi = poly(&[O, J, I]);
        assert!(star_power(&phi, 2, 4).approx_eq(&poly(&[O, O, -ONE, O, -ONE]), 1e-15));
        let p3 = star_power(&Series::monomial(1, I * J), 3, 5);
        assert!(p3.approx_eq(&Series::monomial(3, -(I * J)), 1e-15));
        assert!(star_power(&phi, 0, 3).approx_eq(&Series::constant(ONE), 0.0));
        let p = star_power(&phi, 3, 10);
        assert!((0..3).all(|k| p.coeff(k) == O));
    }

    #[test]
    fn worked_examples() {
        let f = Series::monomial(2, ONE);
        let phi = poly(&[O, J, I]);
        let r = compose(&f, &phi, OdotRight, 4).unwrap();
        assert!(r.approx_eq(&poly(&[O, O, -ONE, O, -ONE]), 1e-12));

        let v = compose(&f, &phi, VlacciRight, 4).unwrap();
        let expected = poly(&[O, O, -ONE, (I * J).scale(-2.0 / 3.0), -ONE]);
        assert!(v.approx_eq(&expected, 1e-12));
        let diff = v.sub(&r);
        assert!(diff.coeff(3).approx_eq((I * J).scale(-2.0 / 3.0), 1e-12));
        assert!(diff.normalized().degree() == 3);

        let g = poly(&[ONE, I]);
        let phi = Series::monomial(1, J);
        assert!(compose(&g, &phi, OdotRight, 2).unwrap().approx_eq(&poly(&[ONE, J * I]), 0.0));
        assert!(compose(&g, &phi, OdotLeft, 2).unwrap().approx_eq(&poly(&[ONE, I * J]), 0.0));

        let v = compose(&Series::identity(), &Series::monomial(2, I), VlacciRight, 4).unwrap();
        assert!(v.approx_eq(&Series::monomial(2, I), 1e-15));
    }

    #[test]
    fn non_associativity_witness() {
        let f = Series::monomial(2, ONE);
        let g = poly(&[ONE, I]);
        let phi = Series::monomial(1, J);
        let lhs = compose(&compose(&f, &g, OdotRight, 4).unwrap(), &phi, OdotRight, 4).unwrap();
        let rhs = compose(&f, &compose(&g, &phi, OdotRight, 4).unwrap(), OdotRight, 4).unwrap();
        assert!(lhs.approx_eq(&poly(&[ONE, (J * I).scale(2.0), ONE]), 1e-12));
        assert!(rhs.approx_eq(&poly(&[ONE, (J * I).scale(2.0), -ONE]), 1e-12));
        assert!(lhs.sub(&rhs).approx_eq(&Series::monomial(2, ONE.scale(2.0)), 1e-12));
    }

    #[test]
    fn product_is_not_preserved() {
        let f = Series::monomial(2, I);
        let g = poly(&[ONE, J]);
        let phi = Series::monomial(1, I * J);
        let lhs = compose(&star(&f, &g), &phi, OdotRight, 4).unwrap();
        assert!(lhs.approx_eq(&poly(&[O, O, -I, ONE]), 1e-12));
        let rhs = star(
            &compose(&f, &phi, OdotRight, 4).unwrap(),
            &compose(&g, &phi, OdotRight, 4).unwrap(),
        )
        .truncated(4);
        assert!(rhs.approx_eq(&poly(&[O, O, -I, -ONE]), 1e-12));
    }

    #[test]
    fn conjugation_swaps_odot_sides() {
        let mut r = rng(31);
        for _ in 0..500 {
            let df = r.gen_range(0..=8);
            let dp = r.gen_range(0..=8);
            let f = gaussian_polynomial(&mut r, df, 0.5);
            let phi = gaussian_polynomial(&mut r, dp, 0.15);
            let n = 64;
            let fc = regular_conjugate(&f);
            let pc = regular_conjugate(&phi);
            let a = regular_conjugate(&compose(&f, &phi, OdotRight, n).unwrap());
            let b = compose(&fc, &pc, OdotLeft, n).unwrap();
            assert!(a.approx_eq(&b, 1e-11));
            let a = regular_conjugate(&compose(&f, &phi, OdotLeft, n).unwrap());
            let b = compose(&fc, &pc, OdotRight, n).unwrap();
            assert!(a.approx_eq(&b, 1e-11));
        }
    }

    use rand::Rng;

    #[test]
    fn twisted_product_identity() {
        let mut r = rng(37);
        let n = 24;
        let mut checked = 0;
        let mut skipped = 0;
        for _ in 0..4 {
            let mut f = gaussian_polynomial(&mut r, 3, 0.3).into_coeffs();
            f[0] += ONE;
            let f = poly(&f);
            let g = gaussian_polynomial(&mut r, 3, 0.3);
            let mut phi = gaussian_polynomial(&mut r, 3, 0.3).into_coeffs();
            phi[0] = O;
            let phi = poly(&phi);

            let lhs = compose(&star(&f, &g), &phi, OdotRight, n).unwrap();
            let h = compose(&f, &phi, OdotRight, n).unwrap();
            let hinv = star_reciprocal(&h, n).unwrap();
            let psi = star_truncated(&star_truncated(&hinv, &phi, n), &h, n);
            let rhs = star_truncated(&h, &compose(&g, &psi, OdotRight, n).unwrap(), n);
            for _ in 0..20 {
                let q = ball_point(&mut r, 0.5);
                if h.evaluate(q).unwrap().norm() <= 1e-6 {
                    skipped += 1;
                    continue;
                }
                let a = lhs.evaluate(q).unwrap();
                let b = rhs.evaluate(q).unwrap();
                assert!((a - b).norm() <= 1e-7 * a.norm().max(1e-3));
                checked += 1;
            }
        }
        assert_eq!(checked + skipped, 80);
    }

    #[test]
    fn slice_preserving_variants_collapse() {
        let mut r = rng(41);
        let u = ImaginaryUnit::from_direction(1.0, -2.0, 0.5).unwrap();
        for _ in 0..20 {
            let slice = |r: &mut crate::random::SweepRng, d: usize, s: f64| {
                let c: Vec<Complex64> = (0..=d)
                    .map(|_| {
                        let q = gaussian_quaternion(r, s);
                        Complex64::new(q.w, q.x)
                    })
                    .collect();
                c
            };
            let fc = slice(&mut r, 3, 0.5);
            let pc = slice(&mut r, 4, 0.2);
            let f = Series::from_slice_coeffs(&fc, u, f64::INFINITY).unwrap();
            let phi = Series::from_slice_coeffs(&pc, u, f64::INFINITY).unwrap();
            let degree = 12;
            let classical = Series::from_slice_coeffs(&complex_compose(&fc, &pc, degree), u, f64::INFINITY).unwrap();
            for v in CompositionVariant::ALL {
                let c = compose(&f, &phi, v, degree).unwrap();
                assert!(c.approx_eq(&classical, 1e-10), "{v}");
            }
        }
    }

    #[test]
    fn bullet_variants_are_conjugated_vlacci() {
        let mut r = rng(43);
        for _ in 0..10 {
            let f = gaussian_polynomial(&mut r, 4, 0.5);
            let mut phi = gaussian_polynomial(&mut r, 4, 0.5).into_coeffs();
            phi[0] = phi[0].scale(0.2);
            let phi = poly(&phi);
            let up = compose(&f, &phi, BulletUp, 10).unwrap();
            let vl = compose(&regular_conjugate(&f), &regular_conjugate(&phi), VlacciLeft, 10).unwrap();
            assert!(regular_conjugate(&up).approx_eq(&vl, 1e-12));
            let down = compose(&f, &phi, BulletDown, 10).unwrap();
            let vr = compose(&regular_conjugate(&f), &regular_conjugate(&phi), VlacciRight, 10).unwrap();
            assert!(regular_conjugate(&down).approx_eq(&vr, 1e-12));
        }
    }

    #[test]
    fn vlacci_with_real_centre_matches_taylor_expansion() {
        // f = q², φ = b₀ + q b₁ with real b₀: the composition is b₀² + 2b₀ q b₁ + q² b₁²
        let b0 = Quaternion::real(0.5);
        let b1 = J;
        let f = Series::monomial(2, ONE);
        let c = compose(&f, &poly(&[b0, b1]), VlacciRight, 3).unwrap();
        assert!(c.approx_eq(&poly(&[Quaternion::real(0.25), J, -ONE]), 1e-14));
    }

    #[test]
    fn errors() {
        let f = Series::new(vec![ONE, ONE], 1.0).unwrap();
        let big = poly(&[O, ONE.scale(2.0)]);
        assert!(matches!(compose(&f, &big, OdotRight, 4), Err(Error::RangeViolation { .. })));
        let shifted = poly(&[ONE.scale(1.5), ONE]);
        assert!(matches!(compose(&f, &shifted, VlacciRight, 4), Err(Error::Domain(_))));
        let g = Series::monomial(2, ONE);
        assert!(matches!(
            compose(&g, &Series::identity(), VlacciRight, 21),
            Err(Error::InvalidArgument(_))
        ));
        let ok = compose(&f, &poly(&[O, ONE.scale(0.5)]), OdotRight, 4).unwrap();
        assert!(ok.approx_eq(&poly(&[ONE, ONE.scale(0.5)]), 0.0));
        let _ = K;
    }

    #[test]
    fn iterate_examples() {
        assert!(iterate(&Series::identity(), 5, 8).unwrap().approx_eq(&Series::identity().truncated(8), 0.0));

        // ext((z + 1/2)/(1 + z/2)) = 1/2 + (3/4) Σ (-1/2)^{n-1} zⁿ
        let f = Series::from_fn(64, 2.0, |n| {
            Quaternion::real(if n == 0 { 0.5 } else { 0.75 * (-0.5f64).powi(n as i32 - 1) })
        })
        .unwrap();
        let f2 = iterate(&f, 2, 64).unwrap();
        assert!((f2.evaluate(O).unwrap().w - 0.8).abs() < 1e-12);

        let mut r = rng(47);
        for _ in 0..5 {
            let c: Vec<Quaternion> = (0..5)
                .map(|_| {
                    let q = gaussian_quaternion(&mut r, 0.12);
                    Quaternion::new(q.w, q.x, 0.0, 0.0)
                })
                .collect();
            let f = poly(&c);
            let n = 40;
            let direct = iterate(&f, 3, n).unwrap();
            let ff = compose(&f, &f, OdotRight, n).unwrap();
            let fff = compose(&ff, &f, OdotRight, n).unwrap();
            assert!(direct.approx_eq(&fff, 1e-9));
        }
    }

    #[test]
    fn iterate_rejects_bad_maps() {
        assert!(matches!(iterate(&poly(&[I, J]), 2, 4), Err(Error::NotSlicePreserving)));
        assert!(matches!(iterate(&poly(&[O, ONE.scale(2.0)]), 2, 4), Err(Error::NotSelfMap(_))));
    }

    #[test]
    fn existence_radius_examples() {
        assert_eq!(existence_radius(&Series::monomial(3, ONE), &poly(&[ONE, I])), f64::INFINITY);
        let unit_disc = Series::new(vec![ONE], 1.0).unwrap();
        let phi = mobius_series(Quaternion::real(0.5), 80).unwrap();
        let r = existence_radius(&unit_disc, &phi);
        assert!((r - 0.5).abs() < 1e-5, "{r}");
        for &a in &[0.05, 0.3, 0.7, 0.95, 0.999] {
            let phi = mobius_series(Quaternion::new(0.0, a, 0.0, 0.0), 400).unwrap();
            let r = existence_radius(&unit_disc, &phi);
            assert!(r >= 1.0 / 3.0 - 1e-6, "a = {a}: {r}");
            assert!(r <= phi.radius());
        }
        let off = poly(&[ONE.scale(1.5), ONE]);
        assert_eq!(existence_radius(&unit_disc, &off), 0.0);
    }
}
