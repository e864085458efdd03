//! The multiresolution ladder on the frequency axis: embeddings of circle
//! functions into line functions, the dilation operator, the wavelet profile
//! and its dilated/translated family, Gram matrices, subspace splitting, and
//! the inverse Fourier transform back to the time domain.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::{SQRT_2, TAU};
use std::io::{self, Write};
use thiserror::Error;

use crate::circle_space::CircleFunction;
use crate::filters::{Filter, FilterError};
use crate::num_fmt::fmt_f64;
use crate::scaling::{scaling_product, truncated_product, LineFunction, LineGrid, ScalingError};

#[derive(Debug, Error)]
pub enum MraError {
    #[error("argument {x} lies outside the sampled extent [{lo}, {hi})")]
    Extent { x: f64, lo: f64, hi: f64 },
    #[error("functions live on different grids")]
    GridMismatch,
    #[error("scaling function value at 0 is {0}, expected 1")]
    NotNormalizedAtZero(Complex64),
    #[error("projection window must be positive")]
    EmptyWindow,
    #[error("sample count {0} is not a power of two, so the reciprocal grid is not dyadic")]
    NonPowerOfTwoSamples(usize),
    #[error("grid too short for an inverse transform: reciprocal step would exceed 1")]
    ReciprocalStepTooCoarse,
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Scaling(#[from] ScalingError),
}

/// `2^(n/2)` without going through `powf`.
fn pow2_half(n: i32) -> f64 {
    if n.rem_euclid(2) == 0 {
        2f64.powi(n / 2)
    } else {
        2f64.powi((n - 1) / 2) * SQRT_2
    }
}

/// A scaling filter together with its conjugate mirror and the sampled
/// scaling/wavelet profiles on a common dyadic grid.
#[derive(Debug, Clone)]
pub struct WaveletSystem {
    low_pass: Filter,
    high_pass: Filter,
    phi: LineFunction,
    psi: LineFunction,
    depth: u32,
}

/// Reads `phi` at an arbitrary dyadic point: from the samples when the point
/// is on the grid, otherwise by re-running the truncated product at the same
/// depth. Interpolation is never used; it would pollute the isometry checks.
fn phi_at(
    phi: &LineFunction,
    low_pass: &Filter,
    depth: u32,
    t: f64,
) -> Result<Complex64, MraError> {
    let grid = phi.grid();
    let extent = grid.extent();
    if !(-extent..extent).contains(&t) {
        return Err(MraError::Extent {
            x: t,
            lo: -extent,
            hi: extent,
        });
    }
    let scaled = t / grid.step();
    if scaled.fract() == 0.0 {
        let idx = grid.index_of(scaled as i64).expect("bounds checked above");
        Ok(phi.values()[idx])
    } else {
        Ok(truncated_product(low_pass, t, depth))
    }
}

impl WaveletSystem {
    /// Builds the system: validates the filter, derives the conjugate mirror,
    /// samples the scaling product at `depth`, and forms the wavelet profile
    /// `psi(x) = m1(e^{pi i x}) phi(x/2)`.
    pub fn new(low_pass: &Filter, grid: &LineGrid, depth: u32) -> Result<Self, MraError> {
        low_pass.validate_scaling_filter()?;
        let high_pass = low_pass.conjugate_mirror();
        let phi = scaling_product(low_pass, grid, depth)?;
        if let Some(idx) = grid.index_of(0) {
            let at_zero = phi.values()[idx];
            if (at_zero - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
                return Err(MraError::NotNormalizedAtZero(at_zero));
            }
        }
        let mut psi_values = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let half_x = 0.5 * grid.x(i);
            let value = high_pass.evaluate(half_x) * phi_at(&phi, low_pass, depth, half_x)?;
            psi_values.push(value);
        }
        let psi = LineFunction::new(*grid, psi_values)?;
        Ok(WaveletSystem {
            low_pass: low_pass.clone(),
            high_pass,
            phi,
            psi,
            depth,
        })
    }

    pub fn low_pass(&self) -> &Filter {
        &self.low_pass
    }

    pub fn high_pass(&self) -> &Filter {
        &self.high_pass
    }

    /// The sampled scaling function (frequency domain).
    pub fn scaling_function(&self) -> &LineFunction {
        &self.phi
    }

    /// The sampled wavelet profile (frequency domain).
    pub fn wavelet(&self) -> &LineFunction {
        &self.psi
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn grid(&self) -> &LineGrid {
        self.phi.grid()
    }

    /// The isometric embedding of a circle function at the given level:
    /// value `2^(-level/2) f(e^{2 pi i x / 2^level}) phi(x / 2^level)` on the
    /// system grid.
    pub fn embed(&self, level: i32, f: &CircleFunction) -> Result<LineFunction, MraError> {
        let grid = self.grid();
        let amp = pow2_half(-level);
        let shrink = 2f64.powi(-level);
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let t = grid.x(i) * shrink;
            let phi_t = phi_at(&self.phi, &self.low_pass, self.depth, t)?;
            values.push(amp * f.evaluate(t) * phi_t);
        }
        Ok(LineFunction::new(*grid, values)?)
    }

    /// The wavelet profile evaluated at an arbitrary dyadic point, reusing
    /// samples where possible.
    fn psi_value(&self, y: f64) -> Result<Complex64, MraError> {
        let grid = self.psi.grid();
        if (-grid.extent()..grid.extent()).contains(&y) {
            let scaled = y / grid.step();
            if scaled.fract() == 0.0 {
                let idx = grid.index_of(scaled as i64).expect("bounds checked");
                return Ok(self.psi.values()[idx]);
            }
        }
        let half = 0.5 * y;
        Ok(self.high_pass.evaluate(half) * phi_at(&self.phi, &self.low_pass, self.depth, half)?)
    }

    /// The basis member `2^(j/2) e^{-2 pi i k 2^j x} psi(2^j x)` sampled on
    /// the system grid.
    pub fn wavelet_basis(&self, scale: i32, shift: i64) -> Result<LineFunction, MraError> {
        let grid = *self.psi.grid();
        let amp = pow2_half(scale);
        let stretch = 2f64.powi(scale);
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let y = grid.x(i) * stretch;
            let psi_y = self.psi_value(y)?;
            // e^{-2 pi i k y}: reduce the (exact, dyadic) product k*y mod 1
            // so the trig argument stays small.
            let ang = -(shift as f64) * y;
            let phase = Complex64::cis(TAU * (ang - ang.floor()));
            values.push(amp * phase * psi_y);
        }
        Ok(LineFunction::new(grid, values)?)
    }

    /// Splits `g` across the ladder step at `level`: projects onto the
    /// approximation spaces at `level` and `level + 1` and the detail space
    /// between them, each through a `(2 * window + 1)`-term basis window,
    /// and reports the telescoping defect.
    pub fn decompose(
        &self,
        level: i32,
        g: &LineFunction,
        window: u32,
    ) -> Result<Decomposition, MraError> {
        if window == 0 {
            return Err(MraError::EmptyWindow);
        }
        if g.grid() != self.grid() {
            return Err(MraError::GridMismatch);
        }
        let k = window as i64;
        let mut coarse = LineFunction::zero(*g.grid());
        let mut fine = LineFunction::zero(*g.grid());
        let mut detail = LineFunction::zero(*g.grid());
        for kk in -k..=k {
            let b = self.embed(level, &CircleFunction::basis(kk))?;
            coarse.add_scaled(g.inner(&b)?, &b)?;

            let b = self.embed(level + 1, &CircleFunction::basis(kk))?;
            fine.add_scaled(g.inner(&b)?, &b)?;

            // The detail space at this level carries the wavelet family at
            // scale -level (one dilation per ladder rung).
            let b = self.wavelet_basis(-level, kk)?;
            detail.add_scaled(g.inner(&b)?, &b)?;
        }
        let input_norm = g.norm();
        let defect = fine.sub(&coarse)?.sub(&detail)?.norm();
        Ok(Decomposition {
            residual: if input_norm == 0.0 {
                0.0
            } else {
                defect / input_norm
            },
            coarse_norm: coarse.norm(),
            fine_norm: fine.norm(),
            detail_norm: detail.norm(),
            input_norm,
        })
    }
}

/// Windowed projections of one function across a ladder step.
#[derive(Debug, Clone, Copy)]
pub struct Decomposition {
    /// `|| P_fine g - P_coarse g - P_detail g || / ||g||`
    pub residual: f64,
    pub coarse_norm: f64,
    pub fine_norm: f64,
    pub detail_norm: f64,
    pub input_norm: f64,
}

/// The dilation `(D xi)(x) = sqrt(2) xi(2x)`: same step, extent halved, by
/// exact index doubling. Grids that cannot be halved produce an empty
/// output.
pub fn dilate(xi: &LineFunction) -> LineFunction {
    let grid = xi.grid();
    let new_half = grid.half_count() / 2;
    let out_grid = LineGrid::with_half_count(grid.step_exponent(), new_half);
    let mut values = Vec::with_capacity(out_grid.len());
    for idx in 0..out_grid.len() {
        let j = out_grid.j_of_index(idx);
        let src = grid.index_of(2 * j).expect("halved grid is inside source");
        values.push(SQRT_2 * xi.values()[src]);
    }
    LineFunction::new(out_grid, values).expect("matching lengths by construction")
}

/// Hermitian Gram matrix of rectangle-rule inner products; only one triangle
/// is computed and the other is its conjugate.
pub fn gram_matrix(functions: &[LineFunction]) -> Result<Vec<Vec<Complex64>>, MraError> {
    if let Some(first) = functions.first() {
        if functions.iter().any(|f| f.grid() != first.grid()) {
            return Err(MraError::GridMismatch);
        }
    }
    let n = functions.len();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for a in 0..n {
        for b in a..n {
            let value = functions[a].inner(&functions[b])?;
            gram[a][b] = value;
            gram[b][a] = value.conj();
        }
    }
    Ok(gram)
}

/// Max entrywise deviation of a Gram matrix from the identity.
pub fn gram_identity_deviation(gram: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (a, row) in gram.iter().enumerate() {
        for (b, &value) in row.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((value - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Writes a Gram matrix in long CSV form, one entry per row, with the
/// `(scale, shift)` labels of both functions.
pub fn write_gram_csv(
    labels: &[(i32, i64)],
    gram: &[Vec<Complex64>],
    w: &mut impl Write,
) -> io::Result<()> {
    writeln!(w, "ja,ka,jb,kb,re,im")?;
    for (a, row) in gram.iter().enumerate() {
        for (b, value) in row.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                labels[a].0,
                labels[a].1,
                labels[b].0,
                labels[b].1,
                fmt_f64(value.re),
                fmt_f64(value.im)
            )?;
        }
    }
    Ok(())
}

/// Riemann-sum inverse Fourier transform onto the reciprocal grid
/// `t_m = m / (N * step)`, `m in [-N/2, N/2)`:
/// `xi_check(t_m) = step * sum_j xi(x_j) e^{2 pi i x_j t_m}`.
///
/// The sum is evaluated by FFT, which computes the same quantity exactly up
/// to a reordering of floating-point additions; the sample count must be a
/// power of two so the reciprocal step is again dyadic.
pub fn inverse_transform(xi: &LineFunction) -> Result<LineFunction, MraError> {
    let n = xi.grid().len();
    if n == 0 {
        return Ok(xi.clone());
    }
    if !n.is_power_of_two() {
        return Err(MraError::NonPowerOfTwoSamples(n));
    }
    let log2n = n.trailing_zeros();
    let p = xi.grid().step_exponent();
    if log2n < p {
        return Err(MraError::ReciprocalStepTooCoarse);
    }
    let out_grid = LineGrid::with_half_count(log2n - p, (n / 2) as i64);

    let mut buf: Vec<Complex64> = xi.values().to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(&mut buf);

    let step = xi.grid().step();
    let half = (n / 2) as i64;
    let mut values = Vec::with_capacity(n);
    for idx in 0..n {
        let m = idx as i64 - half;
        let src = m.rem_euclid(n as i64) as usize;
        let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        values.push(step * sign * buf[src]);
    }
    Ok(LineFunction::new(out_grid, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_space::{apply_isometry, random_window_function};
    use approx::assert_abs_diff_eq;
    use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn system(name: &str, step_den: u32, extent: f64, depth: u32) -> WaveletSystem {
        let m0 = Filter::builtin(name).unwrap();
        let grid = LineGrid::new(1.0 / step_den as f64, extent).unwrap();
        WaveletSystem::new(&m0, &grid, depth).unwrap()
    }

    fn value_at(f: &LineFunction, x: f64) -> Complex64 {
        let j = (x / f.grid().step()).round() as i64;
        f.values()[f.grid().index_of(j).unwrap()]
    }

    #[test]
    fn embed_level_zero_constant_reproduces_phi() {
        let sys = system("haar", 64, 8.0, 15);
        let embedded = sys.embed(0, &CircleFunction::basis(0)).unwrap();
        assert_eq!(embedded, *sys.scaling_function());
    }

    #[test]
    fn embed_values() {
        let sys = system("haar", 64, 8.0, 20);
        let e0 = sys.embed(1, &CircleFunction::basis(0)).unwrap();
        let v = value_at(&e0, 0.0);
        assert_abs_diff_eq!(v.re, FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);

        let e1 = sys.embed(0, &CircleFunction::basis(1)).unwrap();
        let v = value_at(&e1, 0.5);
        // e^{pi i} phi(1/2) = -(2i/pi)
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-5);
        assert_abs_diff_eq!(v.im, -2.0 / PI, epsilon = 1e-5);
    }

    #[test]
    fn embed_negative_level_overflows_extent() {
        let sys = system("haar", 64, 8.0, 10);
        assert!(matches!(
            sys.embed(-1, &CircleFunction::basis(0)),
            Err(MraError::Extent { .. })
        ));
    }

    #[test]
    fn dilate_constant() {
        let grid = LineGrid::new(0.25, 8.0).unwrap();
        let one = LineFunction::from_fn(grid, |_| Complex64::new(1.0, 0.0));
        let d = dilate(&one);
        assert_eq!(d.grid().extent(), 4.0);
        assert_eq!(d.grid().step(), 0.25);
        for v in d.values() {
            assert_abs_diff_eq!(v.re, SQRT_2, epsilon = 1e-15);
        }
    }

    #[test]
    fn dilate_degenerates_to_empty() {
        let grid = LineGrid::new(1.0, 1.0).unwrap();
        let f = LineFunction::from_fn(grid, |_| Complex64::new(1.0, 0.0));
        assert!(dilate(&f).is_empty());
    }

    #[test]
    fn dilate_preserves_norm_of_bandlimited_functions() {
        let sys = system("haar", 64, 64.0, 20);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_window_function(&mut rng, -8, 8);
        let xi = sys.embed(1, &f).unwrap();
        let d = dilate(&xi);
        assert!((d.norm() - xi.norm()).abs() <= 1e-12 * xi.norm());
    }

    #[test]
    fn intertwining_on_the_halved_grid() {
        for name in ["haar", "db4", "shannon"] {
            let sys = system(name, 64, 16.0, 20);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let f = random_window_function(&mut rng, -8, 8);
            let lhs = dilate(&sys.embed(1, &f).unwrap());
            let rhs = sys.embed(0, &f).unwrap();
            let mut worst = 0.0f64;
            for idx in 0..lhs.grid().len() {
                let j = lhs.grid().j_of_index(idx);
                let rv = rhs.values()[rhs.grid().index_of(j).unwrap()];
                worst = worst.max((lhs.values()[idx] - rv).norm());
            }
            assert!(worst <= 1e-10, "{name}: {worst}");
        }
    }

    #[test]
    fn wavelet_values_haar() {
        let sys = system("haar", 64, 8.0, 20);
        let psi = sys.wavelet();
        assert_eq!(value_at(psi, 0.0), Complex64::new(0.0, 0.0));
        let v = value_at(psi, 1.0);
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-5);
        assert_abs_diff_eq!(v.im, -2.0 / PI, epsilon = 1e-5);
    }

    #[test]
    fn wavelet_values_shannon() {
        let sys = system("shannon", 64, 8.0, 20);
        let psi = sys.wavelet();
        let grid = psi.grid();
        for idx in 0..grid.len() {
            let x = grid.x(idx);
            let a = x.abs();
            if a == 0.5 || a == 1.0 {
                continue; // band edges follow the half-open conventions
            }
            let expected = if a > 0.5 && a < 1.0 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(psi.values()[idx].norm(), expected, epsilon = 1e-15);
        }
        let v = value_at(psi, 0.75);
        let expected = Complex64::cis(PI * 0.75);
        assert!((v - expected).norm() <= 1e-15);
    }

    #[test]
    fn wavelet_basis_identities() {
        let sys = system("shannon", 256, 8.0, 20);
        let base = sys.wavelet_basis(0, 0).unwrap();
        assert_eq!(&base, sys.wavelet());

        // A unimodular factor leaves the pointwise modulus unchanged.
        let shifted = sys.wavelet_basis(0, 1).unwrap();
        for (a, b) in base.values().iter().zip(shifted.values()) {
            assert_abs_diff_eq!(a.norm(), b.norm(), epsilon = 1e-13);
        }
        // Distinct shifts are orthogonal; for this band structure the
        // rectangle-rule sums cancel exactly.
        let ip = base.inner(&shifted).unwrap();
        assert!(ip.norm() <= 1e-12, "{ip}");

        // Norm is unchanged by reindexing.
        let k3 = sys.wavelet_basis(-1, 3).unwrap();
        let k0 = sys.wavelet_basis(-1, 0).unwrap();
        assert_abs_diff_eq!(k3.norm(), k0.norm(), epsilon = 1e-13);

        assert!(matches!(
            sys.wavelet_basis(4, 0),
            Err(MraError::Extent { .. })
        ));
    }

    #[test]
    fn detail_basis_matches_isometry_route() {
        // embed(1, S1 e_{-k}) equals e^{-2 pi i k x} psi(x) pointwise.
        for name in ["haar", "db4"] {
            let sys = system(name, 64, 64.0, 20);
            for k in -4..=4i64 {
                let through_operators = sys
                    .embed(
                        1,
                        &apply_isometry(sys.high_pass(), &CircleFunction::basis(-k)).unwrap(),
                    )
                    .unwrap();
                let direct = sys.wavelet_basis(0, k).unwrap();
                let worst = through_operators.sup_distance(&direct).unwrap();
                assert!(worst <= 1e-10, "{name} k={k}: {worst}");
            }
        }
    }

    #[test]
    fn gram_of_phi_alone() {
        let sys = system("haar", 64, 64.0, 20);
        let g = gram_matrix(std::slice::from_ref(sys.scaling_function())).unwrap();
        assert!((g[0][0] - Complex64::new(1.0, 0.0)).norm() <= 1e-2, "{}", g[0][0]);
    }

    #[test]
    fn gram_duplicate_entries() {
        let sys = system("haar", 64, 8.0, 15);
        let psi = sys.wavelet().clone();
        let g = gram_matrix(&[psi.clone(), psi]).unwrap();
        assert_eq!(g[0][0], g[0][1]);
        assert_eq!(g[1][0], g[0][0].conj());
        assert_eq!(g[1][1], g[0][0]);
    }

    #[test]
    fn gram_grid_mismatch() {
        let a = LineFunction::zero(LineGrid::new(0.25, 4.0).unwrap());
        let b = LineFunction::zero(LineGrid::new(0.25, 8.0).unwrap());
        assert!(matches!(
            gram_matrix(&[a, b]),
            Err(MraError::GridMismatch)
        ));
    }

    #[test]
    fn shannon_gram_is_near_identity() {
        let sys = system("shannon", 256, 8.0, 20);
        let mut fns = Vec::new();
        for scale in [-1, 0, 1] {
            for shift in -4..=4 {
                fns.push(sys.wavelet_basis(scale, shift).unwrap());
            }
        }
        let g = gram_matrix(&fns).unwrap();
        let dev = gram_identity_deviation(&g);
        assert!(dev <= 5e-3, "deviation {dev}");
    }

    #[test]
    fn gram_csv_emission() {
        let sys = system("shannon", 64, 8.0, 15);
        let mut labels = Vec::new();
        let mut fns = Vec::new();
        for scale in [0, 1] {
            for shift in -1..=1 {
                labels.push((scale, shift));
                fns.push(sys.wavelet_basis(scale, shift).unwrap());
            }
        }
        let g = gram_matrix(&fns).unwrap();
        let mut buf = Vec::new();
        write_gram_csv(&labels, &g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("ja,ka,jb,kb,re,im"));
        assert_eq!(lines.count(), labels.len() * labels.len());
        assert!(text.contains("0,-1,0,-1,"));
    }

    #[test]
    fn decompose_zero_input() {
        let sys = system("shannon", 256, 8.0, 20);
        let zero = LineFunction::zero(*sys.grid());
        let d = sys.decompose(0, &zero, 4).unwrap();
        assert_eq!(d.residual, 0.0);
        assert_eq!(d.input_norm, 0.0);
    }

    #[test]
    fn decompose_disjoint_band_has_no_detail_component() {
        let sys = system("shannon", 256, 8.0, 20);
        let g = LineFunction::from_fn(*sys.grid(), |x| {
            if (0.0..0.25).contains(&x) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let d = sys.decompose(0, &g, 8).unwrap();
        assert!(d.detail_norm <= 1e-12 * d.input_norm, "{d:?}");
    }

    #[test]
    fn inverse_transform_of_zero() {
        let grid = LineGrid::new(0.25, 4.0).unwrap();
        let z = LineFunction::zero(grid);
        let out = inverse_transform(&z).unwrap();
        assert!(out.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn inverse_transform_matches_direct_sum() {
        // Independent O(N^2) Riemann sum as the oracle for the FFT path.
        let grid = LineGrid::new(1.0 / 16.0, 8.0).unwrap();
        let xi = LineFunction::from_fn(grid, |x| {
            Complex64::new((-x * x / 3.0).exp(), 0.3 * x * (-x.abs()).exp())
        });
        let fast = inverse_transform(&xi).unwrap();

        let n = grid.len();
        let step = grid.step();
        let out_grid = fast.grid();
        let mut worst = 0.0f64;
        for m_idx in 0..n {
            let t = out_grid.x(m_idx);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += xi.values()[j] * Complex64::cis(TAU * grid.x(j) * t);
            }
            worst = worst.max((step * acc - fast.values()[m_idx]).norm());
        }
        assert!(worst <= 1e-12, "fft vs direct sum: {worst}");
    }

    #[test]
    fn inverse_transform_of_shannon_box_is_sinc() {
        let sys = system("shannon", 256, 8.0, 20);
        let time = inverse_transform(sys.scaling_function()).unwrap();
        let grid = time.grid();
        let mut worst = 0.0f64;
        for idx in 0..grid.len() {
            let t = grid.x(idx);
            if t.abs() > 4.0 {
                continue;
            }
            let expected = if t == 0.0 { 1.0 } else { (PI * t).sin() / (PI * t) };
            worst = worst.max((time.values()[idx] - Complex64::new(expected, 0.0)).norm());
        }
        assert!(worst <= 1e-2, "sup deviation {worst}");
    }

    #[test]
    fn inverse_transform_rejects_non_power_of_two() {
        let grid = LineGrid::new(0.25, 1.5) // 12 samples
            .unwrap();
        let f = LineFunction::zero(grid);
        assert!(matches!(
            inverse_transform(&f),
            Err(MraError::NonPowerOfTwoSamples(12))
        ));
    }
}
