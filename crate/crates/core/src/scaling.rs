//! The scaling function as a truncated infinite product on a dyadic line
//! grid, and the residuals of the two identities it must satisfy: the
//! refinement recursion and unit periodization.
//!
//! Grids are uniform with step `2^-p`; every argument `x / 2^n` that the
//! product needs is then an exact binary fraction, so no trigonometric
//! argument drift enters the evaluation.

use num_complex::Complex64;
use std::io::{self, Write};
use thiserror::Error;

use crate::filters::{Filter, FilterError};
use crate::num_fmt::{fmt_f64, parse_f64};

#[derive(Debug, Error)]
pub enum ScalingError {
    #[error("step {0} is not of the form 2^-p with integer p >= 0")]
    NonDyadicStep(f64),
    #[error("extent {extent} is not a positive integer multiple of step {step}")]
    ExtentNotAligned { extent: f64, step: f64 },
    #[error("value count {values} does not match grid sample count {samples}")]
    LengthMismatch { values: usize, samples: usize },
    #[error("functions live on different grids")]
    GridMismatch,
    #[error("depth must be at least {min}")]
    DepthTooSmall { min: u32 },
    #[error("periodization window must be positive")]
    EmptyWindow,
    #[error("periodization window K={window} exceeds the grid extent {extent}")]
    WindowExceedsExtent { window: u32, extent: f64 },
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
}

/// Uniform dyadic sampling of an interval `[-X, X)` of the line: points
/// `x_j = j * 2^-p` for `j in [-X * 2^p, X * 2^p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineGrid {
    step_exp: u32,
    half_count: i64,
}

fn dyadic_exponent(step: f64) -> Option<u32> {
    (0..=60).find(|&p| step == 0.5f64.powi(p as i32))
}

impl LineGrid {
    pub fn new(step: f64, extent: f64) -> Result<Self, ScalingError> {
        let step_exp = dyadic_exponent(step).ok_or(ScalingError::NonDyadicStep(step))?;
        let ratio = extent / step;
        if !(ratio.is_finite() && ratio > 0.0 && ratio.fract() == 0.0 && ratio <= 2e15) {
            return Err(ScalingError::ExtentNotAligned { extent, step });
        }
        Ok(LineGrid {
            step_exp,
            half_count: ratio as i64,
        })
    }

    pub(crate) fn with_half_count(step_exp: u32, half_count: i64) -> Self {
        LineGrid {
            step_exp,
            half_count,
        }
    }

    pub fn step(&self) -> f64 {
        0.5f64.powi(self.step_exp as i32)
    }

    /// `p` such that the step is `2^-p`.
    pub fn step_exponent(&self) -> u32 {
        self.step_exp
    }

    pub fn extent(&self) -> f64 {
        self.half_count as f64 * self.step()
    }

    pub fn half_count(&self) -> i64 {
        self.half_count
    }

    /// Number of sample points (always even).
    pub fn len(&self) -> usize {
        (2 * self.half_count) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.half_count == 0
    }

    /// The sample coordinate at a storage index in `0..len()`.
    pub fn x(&self, index: usize) -> f64 {
        (index as i64 - self.half_count) as f64 * self.step()
    }

    /// Storage index of the sample `x = j * step`, if it is on the grid.
    pub fn index_of(&self, j: i64) -> Option<usize> {
        if j < -self.half_count || j >= self.half_count {
            None
        } else {
            Some((j + self.half_count) as usize)
        }
    }

    pub fn j_of_index(&self, index: usize) -> i64 {
        index as i64 - self.half_count
    }
}

/// Complex samples on a [`LineGrid`], paired by the rectangle-rule inner
/// product `step * sum_j f(x_j) conj(g(x_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFunction {
    grid: LineGrid,
    values: Vec<Complex64>,
}

impl LineFunction {
    pub fn new(grid: LineGrid, values: Vec<Complex64>) -> Result<Self, ScalingError> {
        if values.len() != grid.len() {
            return Err(ScalingError::LengthMismatch {
                values: values.len(),
                samples: grid.len(),
            });
        }
        Ok(LineFunction { grid, values })
    }

    pub fn zero(grid: LineGrid) -> Self {
        LineFunction {
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            grid,
        }
    }

    pub fn from_fn(grid: LineGrid, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.x(i))).collect();
        LineFunction { grid, values }
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64, ScalingError> {
        if self.grid != other.grid {
            return Err(ScalingError::GridMismatch);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.values.iter().zip(&other.values) {
            acc += a * b.conj();
        }
        Ok(self.grid.step() * acc)
    }

    pub fn norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (self.grid.step() * sum).sqrt()
    }

    pub fn sup_distance(&self, other: &Self) -> Result<f64, ScalingError> {
        if self.grid != other.grid {
            return Err(ScalingError::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        LineFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ScalingError> {
        if self.grid != other.grid {
            return Err(ScalingError::GridMismatch);
        }
        Ok(LineFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Adds `factor * other` in place.
    pub fn add_scaled(&mut self, factor: Complex64, other: &Self) -> Result<(), ScalingError> {
        if self.grid != other.grid {
            return Err(ScalingError::GridMismatch);
        }
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += factor * b;
        }
        Ok(())
    }

    /// Writes the `x,re,im` CSV form.
    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "x,re,im")?;
        for i in 0..self.grid.len() {
            writeln!(
                w,
                "{},{},{}",
                fmt_f64(self.grid.x(i)),
                fmt_f64(self.values[i].re),
                fmt_f64(self.values[i].im)
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("infallible vec write");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Parses the `x,re,im` CSV form, reconstructing the grid from the
    /// coordinate column.
    pub fn parse_csv(text: &str) -> Result<Self, ScalingError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "x,re,im" => {}
            _ => {
                return Err(ScalingError::Csv {
                    line: 1,
                    message: "expected header `x,re,im`".into(),
                })
            }
        }
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (i, line) in lines {
            let mut fields = line.split(',');
            let bad = |message: String| ScalingError::Csv {
                line: i + 1,
                message,
            };
            let mut next = || {
                fields
                    .next()
                    .and_then(parse_f64)
                    .ok_or_else(|| bad("expected three decimal fields".into()))
            };
            let x = next()?;
            let re = next()?;
            let im = next()?;
            xs.push(x);
            values.push(Complex64::new(re, im));
        }
        if xs.len() < 2 || xs.len() % 2 != 0 {
            return Err(ScalingError::Csv {
                line: 1,
                message: "sample count must be even and at least 2".into(),
            });
        }
        let step = xs[1] - xs[0];
        let half = (xs.len() / 2) as i64;
        let step_exp = dyadic_exponent(step).ok_or(ScalingError::NonDyadicStep(step))?;
        let grid = LineGrid::with_half_count(step_exp, half);
        for (i, &x) in xs.iter().enumerate() {
            if x != grid.x(i) {
                return Err(ScalingError::Csv {
                    line: i + 2,
                    message: format!("coordinate {x} is not uniform on the inferred grid"),
                });
            }
        }
        LineFunction::new(grid, values)
    }
}

/// Truncated product `prod_{n=1..depth} m(x / 2^n)` at a single point.
pub(crate) fn truncated_product(m0: &Filter, x: f64, depth: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut t = x;
    for _ in 0..depth {
        t *= 0.5;
        acc *= m0.evaluate(t);
    }
    acc
}

/// Samples the depth-truncated scaling product on the grid.
///
/// Requires a valid scaling filter (value 1 at `x = 0`, QMF identity within
/// the default tolerance); otherwise the product cannot converge to a
/// unit-norm limit.
pub fn scaling_product(
    m0: &Filter,
    grid: &LineGrid,
    depth: u32,
) -> Result<LineFunction, ScalingError> {
    if depth == 0 {
        return Err(ScalingError::DepthTooSmall { min: 1 });
    }
    m0.validate_scaling_filter()?;
    Ok(LineFunction::from_fn(*grid, |x| {
        truncated_product(m0, x, depth)
    }))
}

/// Max over grid points with `|2 x_j| < extent` of
/// `| phi_depth(2 x_j) - m(x_j) * phi_(depth-1)(x_j) |`.
///
/// This is an identity of truncated products, not an approximation, so the
/// residual is pure floating-point noise for any valid filter.
pub fn recursion_residual(
    m0: &Filter,
    grid: &LineGrid,
    depth: u32,
) -> Result<f64, ScalingError> {
    if depth < 2 {
        return Err(ScalingError::DepthTooSmall { min: 2 });
    }
    let deep = scaling_product(m0, grid, depth)?;
    let shallow = scaling_product(m0, grid, depth - 1)?;
    let mut worst = 0.0f64;
    for i in 0..grid.len() {
        let j = grid.j_of_index(i);
        let Some(doubled) = grid.index_of(2 * j) else {
            continue;
        };
        let lhs = deep.values[doubled];
        let rhs = m0.evaluate(grid.x(i)) * shallow.values[i];
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Max over `x_j in [0, 1)` of `| sum_{k=-K}^{K-1} |phi(x_j + k)|^2 - 1 |`.
pub fn normalization_residual(phi: &LineFunction, window: u32) -> Result<f64, ScalingError> {
    if window == 0 {
        return Err(ScalingError::EmptyWindow);
    }
    let grid = phi.grid();
    if window as f64 > grid.extent() {
        return Err(ScalingError::WindowExceedsExtent {
            window,
            extent: grid.extent(),
        });
    }
    let per_turn = 1i64 << grid.step_exponent();
    let k = window as i64;
    let mut worst = 0.0f64;
    for j in 0..per_turn {
        let mut sum = 0.0;
        for shift in -k..k {
            let idx = grid
                .index_of(j + shift * per_turn)
                .expect("window bounded by extent");
            sum += phi.values()[idx].norm_sqr();
        }
        worst = worst.max((sum - 1.0).abs());
    }
    Ok(worst)
}
