//! Report and CSV output. All floating-point output is rounded to nine
//! significant digits so runs diff cleanly.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// Rounds to nine significant digits; report and CSV values go through this.
pub fn sig9(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    format!("{v:.8e}").parse().unwrap_or(v)
}

/// Formats one float for CSV output.
pub fn cell(v: f64) -> String {
    format!("{v:.8e}")
}

/// Summary emitted by every operation subcommand.
#[derive(Serialize)]
pub struct Report {
    pub surface: String,
    pub region: Option<[[f64; 2]; 2]>,
    pub operation: String,
    pub value: f64,
    pub terms: BTreeMap<String, f64>,
    pub grid: [usize; 2],
    pub tolerances: BTreeMap<String, f64>,
    pub verdict: String,
}

impl Report {
    pub fn new(surface: &str, operation: &str, grid: [usize; 2]) -> Report {
        Report {
            surface: surface.to_string(),
            region: None,
            operation: operation.to_string(),
            value: f64::NAN,
            terms: BTreeMap::new(),
            grid,
            tolerances: BTreeMap::new(),
            verdict: String::new(),
        }
    }

    pub fn with_region(mut self, r: &h1geom::surface::Rect) -> Report {
        self.region = Some([[r.lo[0], r.hi[0]], [r.lo[1], r.hi[1]]]);
        self
    }

    pub fn set_value(mut self, v: f64) -> Report {
        self.value = sig9(v);
        self
    }

    pub fn term(mut self, key: &str, v: f64) -> Report {
        self.terms.insert(key.to_string(), sig9(v));
        self
    }

    pub fn tolerance(mut self, key: &str, v: f64) -> Report {
        self.tolerances.insert(key.to_string(), v);
        self
    }

    pub fn verdict(mut self, v: &str) -> Report {
        self.verdict = v.to_string();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One CSV table: header plus rows of nine-significant-digit cells.
pub struct Csv {
    header: &'static str,
    rows: Vec<String>,
}

impl Csv {
    pub fn new(header: &'static str) -> Csv {
        Csv {
            header,
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| cell(v)).collect();
        self.rows.push(cells.join(","));
    }

    pub fn render(&self) -> String {
        let mut out = String::with_capacity(16 * self.rows.len());
        out.push_str(self.header);
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    let mut f =
        fs::File::create(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    f.write_all(content.as_bytes())
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Writes the artifacts of one command. With an output prefix, the report
/// goes to `<prefix>.json` and the table, when present, to `<prefix>.csv`;
/// without one, the table (if any) or else the report goes to stdout.
pub fn emit(out: Option<&Path>, report: &Report, csv: Option<&Csv>) -> Result<(), CliError> {
    match out {
        Some(prefix) => {
            let mut json_path = prefix.to_path_buf().into_os_string();
            json_path.push(".json");
            write_file(Path::new(&json_path), &report.to_json())?;
            if let Some(table) = csv {
                let mut csv_path = prefix.to_path_buf().into_os_string();
                csv_path.push(".csv");
                write_file(Path::new(&csv_path), &table.render())?;
            }
            Ok(())
        }
        None => {
            match csv {
                Some(table) => print!("{}", table.render()),
                None => println!("{}", report.to_json()),
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    // The literal is the expected nine-digit rounding, not a stand-in for
    // the constant.
    #[allow(clippy::approx_constant)]
    fn sig9_rounds_to_nine_significant_digits() {
        assert_eq!(sig9(std::f64::consts::SQRT_2), 1.41421356);
        assert_eq!(sig9(-1234.5678949), -1234.56789);
        assert_eq!(sig9(0.0), 0.0);
        assert!(sig9(f64::NAN).is_nan());
    }

    #[test]
    fn csv_rows_render_in_scientific_notation() {
        let mut t = Csv::new("a,b");
        t.row(&[1.0, -0.5]);
        assert_eq!(t.render(), "a,b\n1.00000000e0,-5.00000000e-1\n");
    }
}
