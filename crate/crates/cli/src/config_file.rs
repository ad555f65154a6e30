//! Flat `key = value` run configuration files.
//!
//! The format is deliberately trivial so any tooling can read and write
//! it: one `key = value` pair per line, `#` starts a comment, blank
//! lines are ignored. Command-line flags override file values.

use std::fmt::Write as _;

/// A run request: problem id plus optional overrides.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfigFile {
    pub problem: Option<String>,
    pub points: Option<Vec<usize>>,
    pub omega: Option<f64>,
    pub lambda_safety: Option<f64>,
    pub t_end: Option<f64>,
    pub steady_tol: Option<f64>,
    pub max_steps: Option<usize>,
    pub mu: Option<f64>,
    pub out: Option<String>,
}

impl RunConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = RunConfigFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: &dyn std::fmt::Display| format!("line {}: {key}: {e}", lineno + 1);
            match key {
                "problem" => cfg.problem = Some(value.to_string()),
                "points" => {
                    let parsed: Result<Vec<usize>, _> =
                        value.split(',').map(|v| v.trim().parse()).collect();
                    cfg.points = Some(parsed.map_err(|e| bad(&e))?);
                }
                "omega" => cfg.omega = Some(value.parse().map_err(|e| bad(&e))?),
                "lambda_safety" => cfg.lambda_safety = Some(value.parse().map_err(|e| bad(&e))?),
                "t_end" => cfg.t_end = Some(value.parse().map_err(|e| bad(&e))?),
                "steady_tol" => cfg.steady_tol = Some(value.parse().map_err(|e| bad(&e))?),
                "max_steps" => cfg.max_steps = Some(value.parse().map_err(|e| bad(&e))?),
                "mu" => cfg.mu = Some(value.parse().map_err(|e| bad(&e))?),
                "out" => cfg.out = Some(value.to_string()),
                other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
            }
        }
        Ok(cfg)
    }

    // inverse of `parse`; exercised by the round-trip tests
    #[allow(dead_code)]
    pub fn print(&self) -> String {
        let mut s = String::new();
        if let Some(v) = &self.problem {
            let _ = writeln!(s, "problem = {v}");
        }
        if let Some(v) = &self.points {
            let joined: Vec<String> = v.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(s, "points = {}", joined.join(","));
        }
        if let Some(v) = self.omega {
            let _ = writeln!(s, "omega = {v}");
        }
        if let Some(v) = self.lambda_safety {
            let _ = writeln!(s, "lambda_safety = {v}");
        }
        if let Some(v) = self.t_end {
            let _ = writeln!(s, "t_end = {v}");
        }
        if let Some(v) = self.steady_tol {
            let _ = writeln!(s, "steady_tol = {v}");
        }
        if let Some(v) = self.max_steps {
            let _ = writeln!(s, "max_steps = {v}");
        }
        if let Some(v) = self.mu {
            let _ = writeln!(s, "mu = {v}");
        }
        if let Some(v) = &self.out {
            let _ = writeln!(s, "out = {v}");
        }
        s
    }
}
