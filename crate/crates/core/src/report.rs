//! Named residual checks with tolerances, collected into a report that can be
//! rendered as a human-readable table or a stable machine-readable file.

use crate::num_fmt::fmt_f64;

#[derive(Debug, Clone)]
pub struct CheckEntry {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckEntry {
    pub fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Parameters the report was produced under; recorded so a run can be
/// reproduced byte for byte.
#[derive(Debug, Clone)]
pub struct ReportMetadata {
    pub filter: String,
    pub profile: String,
    pub qmf_grid: usize,
    pub depth: u32,
    pub step: f64,
    pub extent: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub metadata: ReportMetadata,
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn new(metadata: ReportMetadata) -> Self {
        VerificationReport {
            metadata,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.entries.push(CheckEntry {
            name: name.into(),
            // Residuals are magnitudes; fold a stray -0.0 into +0.0.
            residual: residual.abs(),
            tolerance,
        });
    }

    pub fn overall_pass(&self) -> bool {
        self.entries.iter().all(CheckEntry::pass)
    }

    pub fn failing(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.pass())
    }

    /// Human-readable table.
    pub fn to_table(&self) -> String {
        let m = &self.metadata;
        let mut out = String::new();
        out.push_str(&format!(
            "filter {} | profile {} | qmf grid {} | depth {} | step {} | extent {} | trials {} | seed {}\n",
            m.filter, m.profile, m.qmf_grid, m.depth, m.step, m.extent, m.trials, m.seed
        ));
        let width = self
            .entries
            .iter()
            .map(|e| e.name.len())
            .max()
            .unwrap_or(4)
            .max(5);
        out.push_str(&format!(
            "{:width$}  {:>12}  {:>12}  result\n",
            "check", "residual", "tolerance"
        ));
        for e in &self.entries {
            out.push_str(&format!(
                "{:width$}  {:>12.4e}  {:>12.4e}  {}\n",
                e.name,
                e.residual,
                e.tolerance,
                if e.pass() { "pass" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.overall_pass() { "pass" } else { "FAIL" }
        ));
        out
    }

    /// Line-oriented machine form: `#`-prefixed metadata followed by one
    /// `name residual tolerance pass|fail` line per entry. Deterministic for
    /// a fixed seed and parameter set.
    pub fn to_machine(&self) -> String {
        let m = &self.metadata;
        let mut out = String::new();
        out.push_str(&format!("# filter {}\n", m.filter));
        out.push_str(&format!("# profile {}\n", m.profile));
        out.push_str(&format!("# qmf_grid {}\n", m.qmf_grid));
        out.push_str(&format!("# depth {}\n", m.depth));
        out.push_str(&format!("# step {}\n", fmt_f64(m.step)));
        out.push_str(&format!("# extent {}\n", fmt_f64(m.extent)));
        out.push_str(&format!("# trials {}\n", m.trials));
        out.push_str(&format!("# seed {}\n", m.seed));
        for e in &self.entries {
            out.push_str(&format!(
                "{} {} {} {}\n",
                e.name,
                fmt_f64(e.residual),
                fmt_f64(e.tolerance),
                if e.pass() { "pass" } else { "fail" }
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metadata() -> ReportMetadata {
        ReportMetadata {
            filter: "haar".into(),
            profile: "fast".into(),
            qmf_grid: 4096,
            depth: 20,
            step: 1.0 / 64.0,
            extent: 64.0,
            trials: 20,
            seed: 7,
        }
    }

    #[test]
    fn pass_is_residual_within_tolerance() {
        let mut r = VerificationReport::new(metadata());
        r.push("a", 1e-13, 1e-12);
        r.push("b", 1e-12, 1e-12);
        assert!(r.overall_pass());
        r.push("c", 2e-12, 1e-12);
        assert!(!r.overall_pass());
        assert_eq!(r.failing().count(), 1);
    }

    #[test]
    fn machine_form_is_deterministic() {
        let mut a = VerificationReport::new(metadata());
        a.push("check", 0.5f64.powi(40), 1e-10);
        let mut b = VerificationReport::new(metadata());
        b.push("check", 0.5f64.powi(40), 1e-10);
        assert_eq!(a.to_machine(), b.to_machine());
        assert!(a.to_machine().contains("pass"));
    }
}
