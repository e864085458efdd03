//! Multilevel analysis/synthesis pyramid on coefficient windows.
//!
//! Analysis repeatedly applies the adjoints of the two isometries; synthesis
//! applies the isometries themselves and sums. Windows grow and shrink by the
//! operator index arithmetic; there is no periodic boundary handling, so on
//! finite-tap filters the reconstruction identity is exact.

use thiserror::Error;

use crate::circle_space::{apply_adjoint, apply_isometry, CircleFunction, CircleSpaceError};
use crate::filters::{unitarity_residual, Filter, FilterError, QMF_GRID_SIZE, QMF_TOLERANCE};
use crate::num_fmt::{fmt_f64, parse_f64, parse_i64};

#[derive(Debug, Error)]
pub enum CascadeError {
    #[error("levels must be at least 1")]
    NoLevels,
    #[error("filter pair is not a valid QMF pair: unitarity residual {residual:.3e} exceeds {tolerance:.3e}")]
    InvalidPair { residual: f64, tolerance: f64 },
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    CircleSpace(#[from] CircleSpaceError),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Output of the analysis cascade: the deepest approximation plus one detail
/// sequence per level (details[0] is level 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid {
    approximation: CircleFunction,
    details: Vec<CircleFunction>,
}

impl Pyramid {
    pub fn new(approximation: CircleFunction, details: Vec<CircleFunction>) -> Self {
        Pyramid {
            approximation,
            details,
        }
    }

    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn approximation(&self) -> &CircleFunction {
        &self.approximation
    }

    pub fn details(&self) -> &[CircleFunction] {
        &self.details
    }

    /// `||approximation||^2 + sum ||detail||^2`; equals the squared input
    /// norm when the filters form a valid pair.
    pub fn energy(&self) -> f64 {
        let mut total = self.approximation.norm().powi(2);
        for d in &self.details {
            total += d.norm().powi(2);
        }
        total
    }
}

fn validate_pair(low: &Filter, high: &Filter) -> Result<(), CascadeError> {
    if low.coefficients().is_none() || high.coefficients().is_none() {
        return Err(CascadeError::CircleSpace(CircleSpaceError::IndicatorFilter));
    }
    let residual = unitarity_residual(low, high, QMF_GRID_SIZE)?;
    if residual > QMF_TOLERANCE {
        return Err(CascadeError::InvalidPair {
            residual,
            tolerance: QMF_TOLERANCE,
        });
    }
    Ok(())
}

/// Runs the analysis cascade: at each level the detail is the high-pass
/// adjoint of the current approximation and the next approximation is the
/// low-pass adjoint.
pub fn analyze(
    low: &Filter,
    high: &Filter,
    signal: &CircleFunction,
    levels: u32,
) -> Result<Pyramid, CascadeError> {
    if levels == 0 {
        return Err(CascadeError::NoLevels);
    }
    validate_pair(low, high)?;
    let mut approximation = signal.clone();
    let mut details = Vec::with_capacity(levels as usize);
    for _ in 0..levels {
        details.push(apply_adjoint(high, &approximation)?);
        approximation = apply_adjoint(low, &approximation)?;
    }
    Ok(Pyramid {
        approximation,
        details,
    })
}

/// Inverts the cascade: from the deepest level upward,
/// `a_(l-1) = S_low a_l + S_high d_l`.
pub fn synthesize(low: &Filter, high: &Filter, pyramid: &Pyramid) -> Result<CircleFunction, CascadeError> {
    validate_pair(low, high)?;
    let mut approximation = pyramid.approximation.clone();
    for detail in pyramid.details.iter().rev() {
        approximation =
            apply_isometry(low, &approximation)?.add(&apply_isometry(high, detail)?);
    }
    Ok(approximation)
}

fn write_rows(out: &mut String, f: &CircleFunction) {
    out.push_str("k,re,im\n");
    if let Some((lo, hi)) = f.window() {
        for k in lo..=hi {
            let c = f.coefficient(k);
            out.push_str(&format!("{},{},{}\n", k, fmt_f64(c.re), fmt_f64(c.im)));
        }
    }
}

/// Serialises a signal in the `k,re,im` CSV form.
pub fn write_signal_csv(f: &CircleFunction) -> String {
    let mut out = String::new();
    write_rows(&mut out, f);
    out
}

fn parse_rows(
    lines: &mut std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'_>>>,
) -> Result<CircleFunction, CascadeError> {
    let header = lines.next();
    match header {
        Some((_, h)) if h.trim() == "k,re,im" => {}
        Some((i, h)) => {
            return Err(CascadeError::Format {
                line: i + 1,
                message: format!("expected header `k,re,im`, got `{h}`"),
            })
        }
        None => {
            return Err(CascadeError::Format {
                line: 0,
                message: "missing `k,re,im` header".into(),
            })
        }
    }
    let mut entries: Vec<(i64, f64, f64)> = Vec::new();
    while let Some(&(_, line)) = lines.peek() {
        if line.trim_start().starts_with('[') {
            break;
        }
        let (i, line) = lines.next().expect("peeked");
        let mut fields = line.split(',');
        let bad = |message: String| CascadeError::Format {
            line: i + 1,
            message,
        };
        let k = fields
            .next()
            .and_then(parse_i64)
            .ok_or_else(|| bad("expected integer index".into()))?;
        let re = fields
            .next()
            .and_then(parse_f64)
            .ok_or_else(|| bad("expected real part".into()))?;
        let im = fields
            .next()
            .and_then(parse_f64)
            .ok_or_else(|| bad("expected imaginary part".into()))?;
        if fields.next().is_some() {
            return Err(bad("too many fields".into()));
        }
        if entries.iter().any(|&(kk, _, _)| kk == k) {
            return Err(bad(format!("duplicate coefficient index {k}")));
        }
        entries.push((k, re, im));
    }
    if entries.is_empty() {
        return Ok(CircleFunction::zero());
    }
    let lo = entries.iter().map(|e| e.0).min().expect("nonempty");
    let hi = entries.iter().map(|e| e.0).max().expect("nonempty");
    let mut coeffs = vec![num_complex::Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for (k, re, im) in entries {
        coeffs[(k - lo) as usize] = num_complex::Complex64::new(re, im);
    }
    Ok(CircleFunction::from_coefficients(coeffs, lo))
}

/// Parses a signal CSV. Rows may carry arbitrary integer indices; anything
/// missing inside the window is zero.
pub fn parse_signal_csv(text: &str) -> Result<CircleFunction, CascadeError> {
    let mut lines = text.lines().enumerate().peekable();
    let f = parse_rows(&mut lines)?;
    if let Some((i, line)) = lines.next() {
        return Err(CascadeError::Format {
            line: i + 1,
            message: format!("unexpected content `{line}`"),
        });
    }
    Ok(f)
}

/// Serialises a pyramid: an `[approx]` section followed by `[detail l]`
/// sections, each holding signal CSV rows.
pub fn write_pyramid(p: &Pyramid) -> String {
    let mut out = String::from("[approx]\n");
    write_rows(&mut out, &p.approximation);
    for (i, d) in p.details.iter().enumerate() {
        out.push_str(&format!("[detail {}]\n", i + 1));
        write_rows(&mut out, d);
    }
    out
}

/// Parses a pyramid file; detail sections must be numbered 1..levels in
/// order.
pub fn parse_pyramid(text: &str) -> Result<Pyramid, CascadeError> {
    let mut lines = text.lines().enumerate().peekable();
    match lines.next() {
        Some((_, l)) if l.trim() == "[approx]" => {}
        Some((i, l)) => {
            return Err(CascadeError::Format {
                line: i + 1,
                message: format!("expected `[approx]`, got `{l}`"),
            })
        }
        None => {
            return Err(CascadeError::Format {
                line: 1,
                message: "empty pyramid file".into(),
            })
        }
    }
    let approximation = parse_rows(&mut lines)?;
    let mut details = Vec::new();
    while let Some((i, line)) = lines.next() {
        let expected = format!("[detail {}]", details.len() + 1);
        if line.trim() != expected {
            return Err(CascadeError::Format {
                line: i + 1,
                message: format!("expected `{expected}`, got `{line}`"),
            });
        }
        details.push(parse_rows(&mut lines)?);
    }
    if details.is_empty() {
        return Err(CascadeError::Format {
            line: 1,
            message: "pyramid has no detail sections".into(),
        });
    }
    Ok(Pyramid {
        approximation,
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_space::random_window_function;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
    use std::f64::consts::SQRT_2;

    fn pair(name: &str) -> (Filter, Filter) {
        let m0 = Filter::builtin(name).unwrap();
        let m1 = m0.conjugate_mirror();
        (m0, m1)
    }

    #[test]
    fn single_level_haar_on_basis() {
        let (m0, m1) = pair("haar");
        let p = analyze(&m0, &m1, &CircleFunction::basis(0), 1).unwrap();
        assert_eq!(p.levels(), 1);
        let h = SQRT_2 / 2.0;
        assert_eq!(p.approximation().window(), Some((0, 0)));
        assert_abs_diff_eq!(p.approximation().coefficient(0).re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(p.details()[0].coefficient(0).re, -h, epsilon = 1e-15);
    }

    #[test]
    fn zero_signal_gives_zero_pyramid() {
        let (m0, m1) = pair("haar");
        let p = analyze(&m0, &m1, &CircleFunction::zero(), 3).unwrap();
        assert!(p.approximation().is_zero());
        assert!(p.details().iter().all(CircleFunction::is_zero));
        assert!(synthesize(&m0, &m1, &p).unwrap().is_zero());
    }

    #[test]
    fn smooth_signal_has_no_detail() {
        // e_0 + e_1 is proportional to S0 e_0, which the high-pass adjoint kills.
        let (m0, m1) = pair("haar");
        let signal = CircleFunction::basis(0).add(&CircleFunction::basis(1));
        let p = analyze(&m0, &m1, &signal, 1).unwrap();
        assert!(p.details()[0].is_zero());
        let a = p.approximation();
        assert_eq!(a.window(), Some((0, 0)));
        assert_abs_diff_eq!(a.coefficient(0).re, SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn roundtrip_on_basis() {
        let (m0, m1) = pair("haar");
        let e0 = CircleFunction::basis(0);
        let p = analyze(&m0, &m1, &e0, 1).unwrap();
        let back = synthesize(&m0, &m1, &p).unwrap();
        assert!(back.sub(&e0).norm() <= 1e-12);
    }

    #[test]
    fn deep_roundtrip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for name in ["haar", "db4"] {
            let (m0, m1) = pair(name);
            for levels in 1..=6 {
                let f = random_window_function(&mut rng, -32, 32);
                let p = analyze(&m0, &m1, &f, levels).unwrap();
                let back = synthesize(&m0, &m1, &p).unwrap();
                assert!(
                    back.sub(&f).norm() <= 1e-11 * f.norm(),
                    "{name} levels {levels}"
                );
                assert_abs_diff_eq!(p.energy(), f.norm().powi(2), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn projection_is_idempotent() {
        let (m0, _) = pair("db4");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_window_function(&mut rng, -16, 16);
        let once = apply_isometry(&m0, &apply_adjoint(&m0, &f).unwrap()).unwrap();
        let twice = apply_isometry(&m0, &apply_adjoint(&m0, &once).unwrap()).unwrap();
        assert!(twice.sub(&once).norm() <= 1e-12);
    }

    #[test]
    fn invalid_inputs_rejected() {
        let (m0, m1) = pair("haar");
        assert!(matches!(
            analyze(&m0, &m1, &CircleFunction::basis(0), 0),
            Err(CascadeError::NoLevels)
        ));
        let single = Filter::laurent(vec![Complex64::new(1.0, 0.0)], 0).unwrap();
        assert!(matches!(
            analyze(&single, &single.conjugate_mirror(), &CircleFunction::basis(0), 1),
            Err(CascadeError::InvalidPair { .. })
        ));
        let shannon = Filter::builtin("shannon").unwrap();
        assert!(analyze(&shannon, &shannon.conjugate_mirror(), &CircleFunction::basis(0), 1).is_err());
    }

    #[test]
    fn signal_csv_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let f = random_window_function(&mut rng, -5, 9);
        let text = write_signal_csv(&f);
        let back = parse_signal_csv(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(write_signal_csv(&back), text);

        // Sparse rows with arbitrary order and gaps.
        let sparse = parse_signal_csv("k,re,im\n4,1.0,0.0\n-2,0.5,0.25\n").unwrap();
        assert_eq!(sparse.window(), Some((-2, 4)));
        assert_eq!(sparse.coefficient(0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pyramid_file_round_trip() {
        let (m0, m1) = pair("db4");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_window_function(&mut rng, -8, 8);
        let p = analyze(&m0, &m1, &f, 3).unwrap();
        let text = write_pyramid(&p);
        let back = parse_pyramid(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(write_pyramid(&back), text);
    }

    #[test]
    fn pyramid_parser_enforces_section_order() {
        let bad = "[approx]\nk,re,im\n0,1.0,0.0\n[detail 2]\nk,re,im\n";
        match parse_pyramid(bad) {
            Err(CascadeError::Format { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected format error, got {other:?}"),
        }
    }
}
