//! Versioned run reports and their JSON and CSV encodings.

use std::io::Write;

use anyhow::Context;
use flowzeta::algebra::{Matrix, UPoly, ZSeries};
use flowzeta::Scalar;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotCertified,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotCertified => "not-certified",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub values: Value,
    pub max_deviation: Option<f64>,
}

impl Check {
    pub fn new(name: &str, status: Status, values: Value) -> Self {
        Check { name: name.into(), status, values, max_deviation: None }
    }

    pub fn with_deviation(mut self, d: f64) -> Self {
        self.max_deviation = Some(d);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

/// One row of the orbit table.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitRow {
    pub cycle: String,
    pub period: usize,
    pub total_time: u64,
    pub delta: i8,
    pub epsilon: i8,
    pub trace: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelInfo {
    pub name: Option<String>,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Options {
    pub order: usize,
    pub max_cycle_len: usize,
    pub backend: String,
    pub tolerance: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub model: ModelInfo,
    pub options: Options,
    pub checks: Vec<Check>,
    pub skipped: Vec<Skipped>,
    pub data: Value,
    #[serde(skip)]
    pub orbit_table: Vec<OrbitRow>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize") + "\n"
    }

    /// The orbit table when one was computed, otherwise the check table.
    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.orbit_table.is_empty() {
            w.write_record(["name", "status", "max_deviation"])?;
            for c in &self.checks {
                let dev = c.max_deviation.map(|d| d.to_string()).unwrap_or_default();
                w.write_record([c.name.as_str(), c.status.as_str(), dev.as_str()])?;
            }
        } else {
            for row in &self.orbit_table {
                w.serialize(row)?;
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn write(&self, path: &std::path::Path, csv: bool) -> anyhow::Result<()> {
        let text = if csv { self.to_csv()? } else { self.to_json() };
        let mut f = std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        f.write_all(text.as_bytes())?;
        Ok(())
    }
}

/// Exact values as rational strings, real floats as numbers, complex floats as `[re, im]`.
pub fn scalar<S: Scalar>(x: &S) -> Value {
    match x.to_rational() {
        Some(r) => Value::String(r.to_string()),
        None => {
            let z = x.to_c64();
            if z.im == 0.0 {
                json!(z.re)
            } else {
                json!([z.re, z.im])
            }
        }
    }
}

pub fn scalar_text<S: Scalar>(x: &S) -> String {
    match scalar(x) {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

pub fn poly<S: Scalar>(p: &UPoly<S>) -> Value {
    Value::Array(p.coeffs().iter().map(scalar).collect())
}

/// Coefficients of `zⁿ`, each a polynomial in `u`.
pub fn series<S: Scalar>(s: &ZSeries<S>) -> Value {
    Value::Array(s.coeffs().iter().map(poly).collect())
}

pub fn matrix<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar).collect())).collect())
}
