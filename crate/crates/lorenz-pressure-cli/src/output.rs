//! Deterministic output: full-precision numbers, reproducible headers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use lorenz_pressure::maps::MapSpec;

/// 17 significant digits, locale-free; round-trips every f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Output {
    writer: Box<dyn Write>,
}

impl Output {
    pub fn create(path: &Option<PathBuf>) -> io::Result<Output> {
        let writer: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Output { writer })
    }

    pub fn line(&mut self, s: &str) -> io::Result<()> {
        writeln!(self.writer, "{s}")
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

/// The reproducibility header carried by every emitted file.
pub struct Header {
    pub map: MapSpec,
    pub potential_sha256: Option<String>,
    pub seed: u64,
    pub budget: u64,
    pub extra: Vec<(String, String)>,
}

impl Header {
    pub fn csv_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("# tool: lorenz-pressure {}", env!("CARGO_PKG_VERSION")),
            format!(
                "# map: kind=beta beta={} alpha={} arithmetic={}",
                self.map.beta.as_f64(),
                self.map.alpha.as_f64(),
                match self.map.arithmetic {
                    lorenz_pressure::maps::Arithmetic::Float64 => "float64",
                    lorenz_pressure::maps::Arithmetic::Rational => "rational",
                }
            ),
            format!(
                "# tolerances: tau_d={:e} tau_cyl={:e} tau_cut={:e}",
                lorenz_pressure::maps::TAU_D,
                lorenz_pressure::symbolic::TAU_CYL,
                lorenz_pressure::cutting::TAU_CUT
            ),
            format!("# seed: {}", self.seed),
            format!("# budget: {}", self.budget),
        ];
        if let Some(hash) = &self.potential_sha256 {
            lines.push(format!("# potential-sha256: {hash}"));
        }
        for (k, v) in &self.extra {
            lines.push(format!("# {k}: {v}"));
        }
        lines
    }

    pub fn json_value(&self) -> serde_json::Value {
        let mut obj = serde_json::json!({
            "tool": format!("lorenz-pressure {}", env!("CARGO_PKG_VERSION")),
            "map": {
                "kind": "beta",
                "beta": self.map.beta.as_f64(),
                "alpha": self.map.alpha.as_f64(),
                "arithmetic": match self.map.arithmetic {
                    lorenz_pressure::maps::Arithmetic::Float64 => "float64",
                    lorenz_pressure::maps::Arithmetic::Rational => "rational",
                },
            },
            "tolerances": {
                "tau_d": lorenz_pressure::maps::TAU_D,
                "tau_cyl": lorenz_pressure::symbolic::TAU_CYL,
                "tau_cut": lorenz_pressure::cutting::TAU_CUT,
            },
            "seed": self.seed,
            "budget": self.budget,
        });
        if let Some(hash) = &self.potential_sha256 {
            obj["potential_sha256"] = serde_json::Value::String(hash.clone());
        }
        for (k, v) in &self.extra {
            obj[k] = serde_json::Value::String(v.clone());
        }
        obj
    }
}
