//! Quadrature mirror filters on the unit circle.
//!
//! A filter is a function on the circle, given either by a finite Laurent
//! coefficient sequence or by an indicator rule on a union of arcs. Circle
//! points are always addressed by their fractional turn `x`, i.e. the point
//! `exp(2*pi*i*x)`; keeping `x` dyadic makes repeated halving exact in
//! floating point.
//!
//! A low-pass filter `m` is a valid scaling filter when `m(1) = 1` and the
//! quadrature mirror identity `|m(z)|^2 + |m(-z)|^2 = 1` holds on a dense
//! grid. Its conjugate mirror `z * conj(m(-z))` completes it to a unitary
//! 2x2 polyphase matrix.

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

use crate::num_fmt::{fmt_f64, parse_f64, parse_i64};

/// Grid size used when an operation needs a default QMF validity check.
pub const QMF_GRID_SIZE: usize = 4096;

/// Residual above which a filter is rejected as a scaling filter.
pub const QMF_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("coefficient sequence is empty or identically zero")]
    EmptyCoefficients,
    #[error("arc [{0}, {1}) must satisfy 0 <= a < b <= 1")]
    BadArc(f64, f64),
    #[error("arcs overlap")]
    OverlappingArcs,
    #[error("unknown built-in filter `{0}` (expected haar, db4 or shannon)")]
    UnknownBuiltin(String),
    #[error("grid size {0} must be a positive even number so that z -> -z permutes grid points")]
    BadGridSize(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("operation requires a Laurent filter")]
    NotLaurent,
    #[error("filter value at x = 0 is {0}, expected 1")]
    NotNormalized(Complex64),
    #[error("QMF residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    QmfViolation { residual: f64, tolerance: f64 },
    #[error("derived (modulated) indicator filters have no file representation")]
    Unserializable,
}

/// Representation kind of a [`Filter`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    Laurent,
    Indicator,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Laurent {
        coefficients: Vec<Complex64>,
        offset: i64,
    },
    /// `scale * exp(2*pi*i*modulation*x)` on the arcs, 0 elsewhere.
    ///
    /// Plain indicators have `modulation = 0`, `scale = 1`; the extra fields
    /// keep the family closed under conjugate mirroring.
    Indicator {
        arcs: Vec<(f64, f64)>,
        modulation: i64,
        scale: Complex64,
    },
}

/// A function on the unit circle carrying the low-pass or high-pass role of a
/// two-channel filter bank.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    repr: Repr,
}

pub(crate) fn laurent_eval(coefficients: &[Complex64], offset: i64, x: f64) -> Complex64 {
    // Reduce to [0, 1) first: exact for dyadic x and keeps sin/cos arguments
    // small regardless of how far out on the line the caller is.
    let xf = x - x.floor();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &c) in coefficients.iter().enumerate() {
        let k = offset + i as i64;
        acc += c * Complex64::cis(TAU * k as f64 * xf);
    }
    acc
}

fn trim_coefficients(mut coefficients: Vec<Complex64>, mut offset: i64) -> (Vec<Complex64>, i64) {
    let is_zero = |c: &Complex64| c.re == 0.0 && c.im == 0.0;
    while coefficients.first().is_some_and(is_zero) {
        coefficients.remove(0);
        offset += 1;
    }
    while coefficients.last().is_some_and(is_zero) {
        coefficients.pop();
    }
    (coefficients, offset)
}

/// Shifts every arc by `delta` modulo 1, splitting arcs that wrap.
fn shift_arcs(arcs: &[(f64, f64)], delta: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(arcs.len() + 1);
    for &(a, b) in arcs {
        let (mut a, mut b) = (a + delta, b + delta);
        if a >= 1.0 {
            a -= 1.0;
            b -= 1.0;
        }
        if b <= 1.0 {
            out.push((a, b));
        } else {
            out.push((a, 1.0));
            out.push((0.0, b - 1.0));
        }
    }
    out.sort_by(|p, q| p.0.total_cmp(&q.0));
    out
}

impl Filter {
    /// Builds a Laurent filter `sum_k h_k z^k` with `h_offset` the first index.
    ///
    /// Leading and trailing zero coefficients are trimmed and the offset
    /// adjusted, so the stored window is canonical.
    pub fn laurent(coefficients: Vec<Complex64>, offset: i64) -> Result<Self, FilterError> {
        let (coefficients, offset) = trim_coefficients(coefficients, offset);
        if coefficients.is_empty() {
            return Err(FilterError::EmptyCoefficients);
        }
        Ok(Filter {
            repr: Repr::Laurent {
                coefficients,
                offset,
            },
        })
    }

    /// Builds an indicator filter equal to 1 on the given half-open arcs of
    /// `[0, 1)` (fractional turns) and 0 elsewhere.
    pub fn indicator(arcs: Vec<(f64, f64)>) -> Result<Self, FilterError> {
        let mut arcs = arcs;
        for &(a, b) in &arcs {
            if !(0.0..1.0).contains(&a) || a >= b || b > 1.0 {
                return Err(FilterError::BadArc(a, b));
            }
        }
        arcs.sort_by(|p, q| p.0.total_cmp(&q.0));
        for pair in arcs.windows(2) {
            if pair[1].0 < pair[0].1 {
                return Err(FilterError::OverlappingArcs);
            }
        }
        Ok(Filter {
            repr: Repr::Indicator {
                arcs,
                modulation: 0,
                scale: Complex64::new(1.0, 0.0),
            },
        })
    }

    /// Returns one of the built-in filters: `haar`, `db4` or `shannon`.
    ///
    /// `shannon` is the indicator of the right half-circle with the boundary
    /// convention arcs `[0, 1/4) u [3/4, 1)`, which keeps the QMF identity
    /// exact at the two boundary grid points.
    pub fn builtin(name: &str) -> Result<Self, FilterError> {
        let c = |v: f64| Complex64::new(v, 0.0);
        match name {
            "haar" => Filter::laurent(vec![c(0.5), c(0.5)], 0),
            "db4" => {
                let s = 3f64.sqrt();
                Filter::laurent(
                    vec![
                        c((1.0 + s) / 8.0),
                        c((3.0 + s) / 8.0),
                        c((3.0 - s) / 8.0),
                        c((1.0 - s) / 8.0),
                    ],
                    0,
                )
            }
            "shannon" => Filter::indicator(vec![(0.0, 0.25), (0.75, 1.0)]),
            other => Err(FilterError::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn kind(&self) -> FilterKind {
        match self.repr {
            Repr::Laurent { .. } => FilterKind::Laurent,
            Repr::Indicator { .. } => FilterKind::Indicator,
        }
    }

    /// The Laurent coefficient window `(coefficients, offset)`, if this is a
    /// Laurent filter.
    pub fn coefficients(&self) -> Option<(&[Complex64], i64)> {
        match &self.repr {
            Repr::Laurent {
                coefficients,
                offset,
            } => Some((coefficients, *offset)),
            Repr::Indicator { .. } => None,
        }
    }

    /// The arcs of an indicator filter (plain or modulated).
    pub fn arcs(&self) -> Option<&[(f64, f64)]> {
        match &self.repr {
            Repr::Indicator { arcs, .. } => Some(arcs),
            Repr::Laurent { .. } => None,
        }
    }

    /// Evaluates the filter at the circle point `exp(2*pi*i*x)`, `x` in turns.
    ///
    /// Any real `x` is accepted; half-integer arguments make the half-turn
    /// evaluation `m(exp(pi*i*t))` available as `evaluate(t / 2)`.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        match &self.repr {
            Repr::Laurent {
                coefficients,
                offset,
            } => laurent_eval(coefficients, *offset, x),
            Repr::Indicator {
                arcs,
                modulation,
                scale,
            } => {
                let xf = x - x.floor();
                let inside = arcs.iter().any(|&(a, b)| a <= xf && xf < b);
                if !inside {
                    Complex64::new(0.0, 0.0)
                } else if *modulation == 0 {
                    *scale
                } else {
                    *scale * Complex64::cis(TAU * *modulation as f64 * xf)
                }
            }
        }
    }

    /// Max over `grid_size` uniform circle points of
    /// `| |m(z)|^2 + |m(-z)|^2 - 1 |`.
    pub fn qmf_residual(&self, grid_size: usize) -> Result<f64, FilterError> {
        if grid_size == 0 || !grid_size.is_multiple_of(2) {
            return Err(FilterError::BadGridSize(grid_size));
        }
        let n = grid_size as f64;
        let mut worst = 0.0f64;
        for j in 0..grid_size {
            let x = j as f64 / n;
            let a = self.evaluate(x).norm_sqr();
            let b = self.evaluate(x + 0.5).norm_sqr();
            worst = worst.max((a + b - 1.0).abs());
        }
        Ok(worst)
    }

    /// The conjugate mirror (high-pass) filter `z * conj(m(-z))`.
    ///
    /// For a Laurent filter with taps `h_k` this is the Laurent filter with
    /// taps `g_n = (-1)^(1-n) * conj(h_(1-n))`. For indicator filters the
    /// result is a modulated indicator evaluating to
    /// `exp(2*pi*i*x) * conj(m(x + 1/2))`.
    pub fn conjugate_mirror(&self) -> Filter {
        match &self.repr {
            Repr::Laurent {
                coefficients,
                offset,
            } => {
                let k_max = offset + coefficients.len() as i64 - 1;
                let mut out = Vec::with_capacity(coefficients.len());
                // Output index n = 1 - k runs upward as k runs downward.
                for i in (0..coefficients.len()).rev() {
                    let k = offset + i as i64;
                    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    out.push(sign * coefficients[i].conj());
                }
                Filter::laurent(out, 1 - k_max).expect("mirror of a nonzero filter is nonzero")
            }
            Repr::Indicator {
                arcs,
                modulation,
                scale,
            } => {
                // z * conj(f(-z)) for f = scale * e^(2 pi i d x) * chi_A:
                // arcs shift by 1/2, modulation becomes 1 - d, and the scale
                // picks up conj(scale) * (-1)^d.
                let sign = if modulation.rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                };
                Filter {
                    repr: Repr::Indicator {
                        arcs: shift_arcs(arcs, 0.5),
                        modulation: 1 - modulation,
                        scale: sign * scale.conj(),
                    },
                }
            }
        }
    }

    /// Checks the two properties a scaling filter must have: value 1 at
    /// `x = 0` and QMF residual within [`QMF_TOLERANCE`] on the default grid.
    pub fn validate_scaling_filter(&self) -> Result<(), FilterError> {
        let at_one = self.evaluate(0.0);
        if (at_one - Complex64::new(1.0, 0.0)).norm() > QMF_TOLERANCE {
            return Err(FilterError::NotNormalized(at_one));
        }
        let residual = self.qmf_residual(QMF_GRID_SIZE)?;
        if residual > QMF_TOLERANCE {
            return Err(FilterError::QmfViolation {
                residual,
                tolerance: QMF_TOLERANCE,
            });
        }
        Ok(())
    }

    /// Parses the filter file format.
    ///
    /// Line 1 is `offset <integer>` (Laurent) or `arcs` (indicator); each
    /// following line holds two decimal literals: `re im` for a coefficient,
    /// or `a b` for an arc.
    pub fn parse(text: &str) -> Result<Self, FilterError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or(FilterError::Parse {
                line: 1,
                message: "empty filter file".into(),
            })?
            .trim();

        let two_numbers = |line_no: usize, line: &str| -> Result<(f64, f64), FilterError> {
            let mut it = line.split_whitespace();
            let bad = || FilterError::Parse {
                line: line_no,
                message: format!("expected two decimal literals, got `{}`", line.trim()),
            };
            let a = parse_f64(it.next().ok_or_else(bad)?).ok_or_else(bad)?;
            let b = parse_f64(it.next().ok_or_else(bad)?).ok_or_else(bad)?;
            if it.next().is_some() {
                return Err(bad());
            }
            Ok((a, b))
        };

        if let Some(rest) = header.strip_prefix("offset") {
            let offset = parse_i64(rest).ok_or_else(|| FilterError::Parse {
                line: 1,
                message: format!("bad offset `{}`", rest.trim()),
            })?;
            let mut coefficients = Vec::new();
            for (i, line) in lines.enumerate() {
                let (re, im) = two_numbers(i + 2, line)?;
                coefficients.push(Complex64::new(re, im));
            }
            if coefficients.is_empty() {
                return Err(FilterError::Parse {
                    line: 2,
                    message: "expected at least one coefficient line".into(),
                });
            }
            Filter::laurent(coefficients, offset)
        } else if header == "arcs" {
            let mut arcs = Vec::new();
            for (i, line) in lines.enumerate() {
                arcs.push(two_numbers(i + 2, line)?);
            }
            if arcs.is_empty() {
                return Err(FilterError::Parse {
                    line: 2,
                    message: "expected at least one arc line".into(),
                });
            }
            Filter::indicator(arcs)
        } else {
            Err(FilterError::Parse {
                line: 1,
                message: format!("expected `offset <integer>` or `arcs`, got `{header}`"),
            })
        }
    }

    /// Serialises to the filter file format. Round-trips through [`parse`]:
    /// coefficients are emitted with enough digits to reproduce every `f64`
    /// exactly.
    ///
    /// [`parse`]: Filter::parse
    pub fn serialize(&self) -> Result<String, FilterError> {
        match &self.repr {
            Repr::Laurent {
                coefficients,
                offset,
            } => {
                let mut out = format!("offset {offset}\n");
                for c in coefficients {
                    out.push_str(&fmt_f64(c.re));
                    out.push(' ');
                    out.push_str(&fmt_f64(c.im));
                    out.push('\n');
                }
                Ok(out)
            }
            Repr::Indicator {
                arcs,
                modulation,
                scale,
            } => {
                if *modulation != 0 || *scale != Complex64::new(1.0, 0.0) {
                    return Err(FilterError::Unserializable);
                }
                let mut out = String::from("arcs\n");
                for &(a, b) in arcs {
                    out.push_str(&fmt_f64(a));
                    out.push(' ');
                    out.push_str(&fmt_f64(b));
                    out.push('\n');
                }
                Ok(out)
            }
        }
    }
}

/// Worst deviation from unitarity of the 2x2 matrix
/// `[[m0(z), m0(-z)], [m1(z), m1(-z)]]` over the grid: row norms against 1
/// and the row inner product against 0.
pub fn unitarity_residual(m0: &Filter, m1: &Filter, grid_size: usize) -> Result<f64, FilterError> {
    if grid_size == 0 || !grid_size.is_multiple_of(2) {
        return Err(FilterError::BadGridSize(grid_size));
    }
    let n = grid_size as f64;
    let mut worst = 0.0f64;
    for j in 0..grid_size {
        let x = j as f64 / n;
        let a = m0.evaluate(x);
        let b = m0.evaluate(x + 0.5);
        let c = m1.evaluate(x);
        let d = m1.evaluate(x + 0.5);
        let row0 = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        let row1 = (c.norm_sqr() + d.norm_sqr() - 1.0).abs();
        let cross = (a * c.conj() + b * d.conj()).norm();
        worst = worst.max(row0).max(row1).max(cross);
    }
    Ok(worst)
}
