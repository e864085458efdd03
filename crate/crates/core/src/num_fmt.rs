//! Decimal formatting shared by every text format the crate emits.

/// Formats a float with 18 significant digits in scientific notation.
///
/// This is more than the 17 digits needed to reproduce any `f64` exactly, so
/// `parse::<f64>()` of the output recovers the input bit for bit, and
/// re-serialising gives byte-identical text. Every file writer in the crate
/// goes through this function so emitted files are stable across runs.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.17e}")
}

/// Parses a float, accepting the Unicode minus sign as well as ASCII.
pub(crate) fn parse_f64(token: &str) -> Option<f64> {
    let cleaned = token.replace('\u{2212}', "-");
    cleaned.trim().parse::<f64>().ok()
}

/// Parses an integer, accepting the Unicode minus sign as well as ASCII.
pub(crate) fn parse_i64(token: &str) -> Option<i64> {
    let cleaned = token.replace('\u{2212}', "-");
    cleaned.trim().parse::<i64>().ok()
}
