use std::fmt::Write as _;

use serde::Serialize;

use crate::config::RunConfig;

/// One verified property: the worst violation seen against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub check: String,
    pub anchor: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Row {
    pub fn new(
        check: impl Into<String>,
        anchor: &'static str,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            check: check.into(),
            anchor,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    /// A row that passes or fails on a predicate rather than a residual.
    pub fn flag(check: impl Into<String>, anchor: &'static str, ok: bool) -> Self {
        Self {
            check: check.into(),
            anchor,
            residual: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
        }
    }

    /// Inequality `lhs >= rhs` with the smallest slack `lhs - rhs` observed.
    pub fn slack(
        check: impl Into<String>,
        anchor: &'static str,
        min_slack: f64,
        tolerance: f64,
    ) -> Self {
        Self::new(check, anchor, (-min_slack).max(0.0), tolerance)
    }
}

/// Tracks the worst absolute value of a residual stream.
#[derive(Debug, Clone, Copy, Default)]
pub struct Worst(pub f64);

impl Worst {
    pub fn see(&mut self, v: f64) {
        let v = v.abs();
        if v > self.0 || v.is_nan() {
            self.0 = v;
        }
    }
}

/// Tracks the smallest slack of an inequality stream.
#[derive(Debug, Clone, Copy)]
pub struct MinSlack(pub f64);

impl Default for MinSlack {
    fn default() -> Self {
        Self(f64::INFINITY)
    }
}

impl MinSlack {
    pub fn see(&mut self, v: f64) {
        if v < self.0 || v.is_nan() {
            self.0 = v;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub rows: Vec<Row>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, config: &RunConfig, rows: Vec<Row>) -> Self {
        let pass = rows.iter().all(|r| r.pass);
        Self {
            command: command.into(),
            config: config.clone(),
            rows,
            pass,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("check,anchor,residual,tolerance,pass\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{:e},{:e},{}",
                csv_field(&r.check),
                r.anchor,
                r.residual,
                r.tolerance,
                r.pass
            );
        }
        s
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_trackers() {
        assert!(Row::new("a", "RL2", 1e-13, 1e-12).pass);
        assert!(!Row::new("a", "RL2", f64::NAN, 1e-12).pass);
        assert!(Row::slack("b", "RL3", 0.5, 1e-12).pass);
        assert!(!Row::slack("b", "RL3", -1e-9, 1e-12).pass);
        let mut w = Worst::default();
        w.see(-3.0);
        w.see(2.0);
        assert_eq!(w.0, 3.0);
        let mut m = MinSlack::default();
        m.see(0.2);
        m.see(-0.1);
        assert_eq!(m.0, -0.1);
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }
}
