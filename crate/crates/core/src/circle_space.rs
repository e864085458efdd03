//! Discretized `L^2` of the circle: finite Fourier coefficient windows, the
//! exponential basis, and the isometry pair `f(z) -> sqrt(2) m(z) f(z^2)`
//! together with its adjoint.
//!
//! The coefficient-window representation makes the Parseval inner product and
//! every isometry identity exact up to floating-point rounding; nothing here
//! is quadrature-approximate.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use std::f64::consts::SQRT_2;
use thiserror::Error;

use crate::filters::{laurent_eval, Filter};

#[derive(Debug, Error)]
pub enum CircleSpaceError {
    #[error("operator action requires a Laurent filter (finite taps)")]
    IndicatorFilter,
    #[error("trial count must be positive")]
    NoTrials,
}

/// An element of discretized `L^2(T)`: a finite window of Fourier
/// coefficients. The zero function is the empty window.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleFunction {
    coefficients: Vec<Complex64>,
    offset: i64,
}

impl CircleFunction {
    pub fn zero() -> Self {
        CircleFunction {
            coefficients: Vec::new(),
            offset: 0,
        }
    }

    /// The basis exponential `e_k : z -> z^k`.
    pub fn basis(k: i64) -> Self {
        CircleFunction {
            coefficients: vec![Complex64::new(1.0, 0.0)],
            offset: k,
        }
    }

    /// Builds a function from a coefficient window; leading and trailing
    /// zeros are trimmed so the window is canonical.
    pub fn from_coefficients(coefficients: Vec<Complex64>, offset: i64) -> Self {
        let mut coefficients = coefficients;
        let mut offset = offset;
        let is_zero = |c: &Complex64| c.re == 0.0 && c.im == 0.0;
        while coefficients.first().is_some_and(is_zero) {
            coefficients.remove(0);
            offset += 1;
        }
        while coefficients.last().is_some_and(is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            offset = 0;
        }
        CircleFunction {
            coefficients,
            offset,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// The inclusive window `(k_min, k_max)` of nonzero coefficients, or
    /// `None` for the zero function.
    pub fn window(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.offset, self.offset + self.coefficients.len() as i64 - 1))
        }
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        let idx = k - self.offset;
        if idx < 0 || idx >= self.coefficients.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[idx as usize]
        }
    }

    pub fn coefficients(&self) -> (&[Complex64], i64) {
        (&self.coefficients, self.offset)
    }

    /// Parseval pairing `sum_k c_k(self) * conj(c_k(other))`, summed in
    /// ascending index order.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let (Some((a_lo, a_hi)), Some((b_lo, b_hi))) = (self.window(), other.window()) else {
            return acc;
        };
        let lo = a_lo.max(b_lo);
        let hi = a_hi.min(b_hi);
        for k in lo..=hi {
            acc += self.coefficient(k) * other.coefficient(k).conj();
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Evaluates the trigonometric sum `sum_k c_k e^{2 pi i k x}` at the
    /// fractional turn `x` by direct summation.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        laurent_eval(&self.coefficients, self.offset, x)
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self.window(), other.window()) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some((a_lo, a_hi)), Some((b_lo, b_hi))) => {
                let lo = a_lo.min(b_lo);
                let hi = a_hi.max(b_hi);
                let values = (lo..=hi)
                    .map(|k| self.coefficient(k) + other.coefficient(k))
                    .collect();
                CircleFunction::from_coefficients(values, lo)
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        CircleFunction::from_coefficients(
            self.coefficients.iter().map(|c| c * factor).collect(),
            self.offset,
        )
    }
}

/// Applies the isometry `(S f)(z) = sqrt(2) m(z) f(z^2)` in coefficient form:
/// `d_n = sqrt(2) * sum_k h_(n-2k) c_k`.
///
/// The output window is exactly `[2a + k_min, 2b + k_max]` for input window
/// `[a, b]` and filter support `[k_min, k_max]`.
pub fn apply_isometry(filter: &Filter, f: &CircleFunction) -> Result<CircleFunction, CircleSpaceError> {
    let (taps, tap_off) = filter
        .coefficients()
        .ok_or(CircleSpaceError::IndicatorFilter)?;
    if f.is_zero() {
        return Ok(CircleFunction::zero());
    }
    let (coeffs, off) = f.coefficients();
    let out_off = 2 * off + tap_off;
    let out_len = 2 * (coeffs.len() - 1) + taps.len();
    let mut out = vec![Complex64::new(0.0, 0.0); out_len];
    for (i, &c) in coeffs.iter().enumerate() {
        let sc = SQRT_2 * c;
        for (j, &h) in taps.iter().enumerate() {
            out[2 * i + j] += h * sc;
        }
    }
    Ok(CircleFunction::from_coefficients(out, out_off))
}

/// Applies the adjoint `a_k = sqrt(2) * sum_n conj(h_(n-2k)) c_n`, so that
/// `inner(apply_isometry(m, f), g) == inner(f, apply_adjoint(m, g))`.
pub fn apply_adjoint(filter: &Filter, f: &CircleFunction) -> Result<CircleFunction, CircleSpaceError> {
    let (taps, tap_off) = filter
        .coefficients()
        .ok_or(CircleSpaceError::IndicatorFilter)?;
    if f.is_zero() {
        return Ok(CircleFunction::zero());
    }
    let (a, b) = f.window().expect("nonzero");
    let tap_hi = tap_off + taps.len() as i64 - 1;
    // k ranges over ceil((a - tap_hi)/2) ..= floor((b - tap_off)/2).
    let k_lo = (a - tap_hi + 1).div_euclid(2);
    let k_hi = (b - tap_off).div_euclid(2);
    if k_lo > k_hi {
        return Ok(CircleFunction::zero());
    }
    let mut out = Vec::with_capacity((k_hi - k_lo + 1) as usize);
    for k in k_lo..=k_hi {
        let n_lo = a.max(2 * k + tap_off);
        let n_hi = b.min(2 * k + tap_hi);
        let mut acc = Complex64::new(0.0, 0.0);
        for n in n_lo..=n_hi {
            let h = taps[(n - 2 * k - tap_off) as usize];
            acc += h.conj() * f.coefficient(n);
        }
        out.push(SQRT_2 * acc);
    }
    Ok(CircleFunction::from_coefficients(out, k_lo))
}

/// Draws a coefficient vector on the inclusive window `[lo, hi]` with real
/// and imaginary parts uniform in `[-1, 1)`, normalized to unit norm.
pub fn random_window_function<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> CircleFunction {
    let len = (hi - lo + 1) as usize;
    let mut coeffs = Vec::with_capacity(len);
    for _ in 0..len {
        let re: f64 = rng.random_range(-1.0..1.0);
        let im: f64 = rng.random_range(-1.0..1.0);
        coeffs.push(Complex64::new(re, im));
    }
    let f = CircleFunction::from_coefficients(coeffs, lo);
    let n = f.norm();
    f.scale(Complex64::new(1.0 / n, 0.0))
}

/// Worst-case relative residuals of the Cuntz relations over seeded random
/// trial vectors on the window `[-16, 16]`.
#[derive(Debug, Clone, Copy)]
pub struct CuntzResiduals {
    /// `max ||S0* S0 f - f|| / ||f||`
    pub isometry_low: f64,
    /// `max ||S1* S1 f - f|| / ||f||`
    pub isometry_high: f64,
    /// `max ||S0* S1 f|| / ||f||`
    pub cross_low_high: f64,
    /// `max ||S1* S0 f|| / ||f||`
    pub cross_high_low: f64,
    /// `max ||(S0 S0* + S1 S1*) f - f|| / ||f||`
    pub completeness: f64,
    pub trials: usize,
    pub seed: u64,
}

impl CuntzResiduals {
    pub fn max(&self) -> f64 {
        self.isometry_low
            .max(self.isometry_high)
            .max(self.cross_low_high)
            .max(self.cross_high_low)
            .max(self.completeness)
    }
}

pub const CUNTZ_WINDOW: (i64, i64) = (-16, 16);

/// Measures the Cuntz relation residuals for the pair of isometries built
/// from `low` and `high`. Both filters must be Laurent; nothing else is
/// enforced, so an invalid pair simply reports large residuals.
pub fn cuntz_residuals(
    low: &Filter,
    high: &Filter,
    trials: usize,
    seed: u64,
) -> Result<CuntzResiduals, CircleSpaceError> {
    if trials == 0 {
        return Err(CircleSpaceError::NoTrials);
    }
    if low.coefficients().is_none() || high.coefficients().is_none() {
        return Err(CircleSpaceError::IndicatorFilter);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CuntzResiduals {
        isometry_low: 0.0,
        isometry_high: 0.0,
        cross_low_high: 0.0,
        cross_high_low: 0.0,
        completeness: 0.0,
        trials,
        seed,
    };
    for _ in 0..trials {
        let f = random_window_function(&mut rng, CUNTZ_WINDOW.0, CUNTZ_WINDOW.1);
        let norm = f.norm();
        let s0f = apply_isometry(low, &f)?;
        let s1f = apply_isometry(high, &f)?;
        out.isometry_low = out
            .isometry_low
            .max(apply_adjoint(low, &s0f)?.sub(&f).norm() / norm);
        out.isometry_high = out
            .isometry_high
            .max(apply_adjoint(high, &s1f)?.sub(&f).norm() / norm);
        out.cross_low_high = out
            .cross_low_high
            .max(apply_adjoint(low, &s1f)?.norm() / norm);
        out.cross_high_low = out
            .cross_high_low
            .max(apply_adjoint(high, &s0f)?.norm() / norm);
        let completed = apply_isometry(low, &apply_adjoint(low, &f)?)?
            .add(&apply_isometry(high, &apply_adjoint(high, &f)?)?);
        out.completeness = out.completeness.max(completed.sub(&f).norm() / norm);
    }
    Ok(out)
}

/// Worst relative defect of the adjoint pairing
/// `inner(S f, g) - inner(f, S* g)` over seeded random pairs.
pub fn adjoint_pairing_residual(
    filter: &Filter,
    trials: usize,
    seed: u64,
) -> Result<f64, CircleSpaceError> {
    if trials == 0 {
        return Err(CircleSpaceError::NoTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let f = random_window_function(&mut rng, CUNTZ_WINDOW.0, CUNTZ_WINDOW.1);
        let g = random_window_function(&mut rng, CUNTZ_WINDOW.0 - 3, CUNTZ_WINDOW.1 + 5);
        let lhs = apply_isometry(filter, &f)?.inner(&g);
        let rhs = f.inner(&apply_adjoint(filter, &g)?);
        worst = worst.max((lhs - rhs).norm() / (f.norm() * g.norm()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn haar() -> Filter {
        Filter::builtin("haar").unwrap()
    }

    #[test]
    fn basis_and_inner() {
        assert_eq!(CircleFunction::basis(0).evaluate(0.0), c(1.0, 0.0));
        assert_abs_diff_eq!(CircleFunction::basis(-3).norm(), 1.0);
        let e2 = CircleFunction::basis(2);
        let e5 = CircleFunction::basis(5);
        assert_eq!(e2.inner(&e5), c(0.0, 0.0));
        assert_eq!(e2.inner(&e2), c(1.0, 0.0));

        let sum = CircleFunction::basis(0).add(&CircleFunction::basis(1));
        assert_eq!(sum.inner(&CircleFunction::basis(1)), c(1.0, 0.0));
    }

    #[test]
    fn zero_function_behaviour() {
        let z = CircleFunction::zero();
        assert!(z.is_zero());
        assert_eq!(z.window(), None);
        assert_eq!(z.inner(&CircleFunction::basis(4)), c(0.0, 0.0));
        assert_eq!(z.norm(), 0.0);
    }

    #[test]
    fn isometry_on_basis_vectors() {
        let m0 = haar();
        let m1 = m0.conjugate_mirror();
        let h = SQRT_2 / 2.0;

        let s0e0 = apply_isometry(&m0, &CircleFunction::basis(0)).unwrap();
        assert_eq!(s0e0.window(), Some((0, 1)));
        assert_abs_diff_eq!(s0e0.coefficient(0).re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(s0e0.coefficient(1).re, h, epsilon = 1e-15);

        let s0e1 = apply_isometry(&m0, &CircleFunction::basis(1)).unwrap();
        assert_eq!(s0e1.window(), Some((2, 3)));

        let s1e0 = apply_isometry(&m1, &CircleFunction::basis(0)).unwrap();
        assert_abs_diff_eq!(s1e0.coefficient(0).re, -h, epsilon = 1e-15);
        assert_abs_diff_eq!(s1e0.coefficient(1).re, h, epsilon = 1e-15);

        // Ranges of the two isometries are orthogonal.
        assert_eq!(s0e0.inner(&s1e0), c(0.0, 0.0));
    }

    #[test]
    fn adjoint_on_basis_vectors() {
        let m0 = haar();
        let m1 = m0.conjugate_mirror();

        let a = apply_adjoint(&m0, &CircleFunction::basis(0)).unwrap();
        assert_eq!(a.window(), Some((0, 0)));
        assert_abs_diff_eq!(a.coefficient(0).re, SQRT_2 / 2.0, epsilon = 1e-15);

        // S0* S0 = 1 on e_5.
        let e5 = CircleFunction::basis(5);
        let roundtrip = apply_adjoint(&m0, &apply_isometry(&m0, &e5).unwrap()).unwrap();
        assert!(roundtrip.sub(&e5).norm() <= 1e-15);

        // S0* kills the range of S1.
        let crossed = apply_adjoint(&m0, &apply_isometry(&m1, &CircleFunction::basis(0)).unwrap())
            .unwrap();
        assert!(crossed.norm() <= 1e-15);
    }

    #[test]
    fn indicator_filters_rejected() {
        let shannon = Filter::builtin("shannon").unwrap();
        assert!(matches!(
            apply_isometry(&shannon, &CircleFunction::basis(0)),
            Err(CircleSpaceError::IndicatorFilter)
        ));
        assert!(matches!(
            cuntz_residuals(&shannon, &shannon.conjugate_mirror(), 4, 1),
            Err(CircleSpaceError::IndicatorFilter)
        ));
    }

    #[test]
    fn cuntz_residuals_for_builtins() {
        let haar = haar();
        let r = cuntz_residuals(&haar, &haar.conjugate_mirror(), 100, 7).unwrap();
        assert!(r.max() <= 1e-12, "haar: {r:?}");

        let db4 = Filter::builtin("db4").unwrap();
        let r = cuntz_residuals(&db4, &db4.conjugate_mirror(), 100, 7).unwrap();
        assert!(r.max() <= 1e-10, "db4: {r:?}");
    }

    #[test]
    fn single_tap_fails_completeness() {
        let m0 = Filter::laurent(vec![c(1.0, 0.0)], 0).unwrap();
        let m1 = m0.conjugate_mirror();
        let r = cuntz_residuals(&m0, &m1, 10, 7).unwrap();
        // S0 S0* + S1 S1* doubles every coefficient, so the completeness
        // defect is exactly ||2f - f||/||f|| = 1 for every f.
        assert_abs_diff_eq!(r.completeness, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn adjoint_pairing() {
        for name in ["haar", "db4"] {
            let m0 = Filter::builtin(name).unwrap();
            for m in [&m0, &m0.conjugate_mirror()] {
                let r = adjoint_pairing_residual(m, 50, 11).unwrap();
                assert!(r <= 1e-12, "{name}: {r}");
            }
        }
    }

    #[test]
    fn operators_match_their_pointwise_formulas() {
        // Independent route: evaluate the action as a function on the circle
        // rather than through coefficient convolution.
        //   (S f)(e^{2 pi i x})  = sqrt(2) m(e^{2 pi i x}) f(e^{4 pi i x})
        //   (S* f)(e^{2 pi i x}) = 2^{-1/2} ( conj(m(w)) f(w) + conj(m(-w)) f(-w) ),
        // where w = e^{pi i x} is addressed by the half turn x/2.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for name in ["haar", "db4"] {
            let m0 = Filter::builtin(name).unwrap();
            for m in [&m0, &m0.conjugate_mirror()] {
                let f = random_window_function(&mut rng, -6, 6);
                let sf = apply_isometry(m, &f).unwrap();
                let saf = apply_adjoint(m, &f).unwrap();
                for j in 0..64 {
                    let x = j as f64 / 64.0;
                    let direct = sf.evaluate(x);
                    let pointwise = SQRT_2 * m.evaluate(x) * f.evaluate(2.0 * x);
                    assert!((direct - pointwise).norm() <= 1e-12, "{name} S at {x}");

                    let half = 0.5 * x;
                    let direct = saf.evaluate(x);
                    let pointwise = (m.evaluate(half).conj() * f.evaluate(half)
                        + m.evaluate(half + 0.5).conj() * f.evaluate(half + 0.5))
                        / SQRT_2;
                    assert!((direct - pointwise).norm() <= 1e-12, "{name} S* at {x}");
                }
            }
        }
    }

    #[test]
    fn isometry_preserves_norm_on_wide_windows() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in ["haar", "db4"] {
            let m0 = Filter::builtin(name).unwrap();
            for m in [&m0, &m0.conjugate_mirror()] {
                for _ in 0..20 {
                    let f = random_window_function(&mut rng, -64, 64);
                    let sf = apply_isometry(m, &f).unwrap();
                    assert!((sf.norm() - f.norm()).abs() <= 1e-12 * f.norm());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn window_growth_is_exact(offset in -40i64..40, len in 1usize..24, seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_window_function(&mut rng, offset, offset + len as i64 - 1);
            let m0 = Filter::builtin("db4").unwrap();
            let (taps, tap_off) = m0.coefficients().unwrap();
            let tap_hi = tap_off + taps.len() as i64 - 1;
            let (a, b) = f.window().unwrap();
            let sf = apply_isometry(&m0, &f).unwrap();
            prop_assert_eq!(sf.window(), Some((2 * a + tap_off, 2 * b + tap_hi)));
        }

        #[test]
        fn range_orthogonality(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m0 = Filter::builtin("db4").unwrap();
            let m1 = m0.conjugate_mirror();
            let f = random_window_function(&mut rng, -16, 16);
            let g = random_window_function(&mut rng, -16, 16);
            let ip = apply_isometry(&m0, &f).unwrap().inner(&apply_isometry(&m1, &g).unwrap());
            prop_assert!(ip.norm() <= 1e-12);
        }
    }
}
